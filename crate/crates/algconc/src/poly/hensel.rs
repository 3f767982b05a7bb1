//! Multifactor Hensel lifting: refine a pairwise-coprime monic factorization
//! of f mod p into a factorization mod p^k by quadratic iteration.

use num_traits::{One, Signed, Zero};

use crate::arith::{mod_inverse, Int};
use crate::error::{Error, Result};
use crate::poly::modp::PolyModP;
use crate::poly::IntPoly;

/// Reduce all coefficients into [0, m).
pub fn poly_mod(f: &IntPoly, m: &Int) -> IntPoly {
    IntPoly::from_coeffs(
        f.coeffs()
            .iter()
            .map(|c| {
                let r = c % m;
                if r.is_negative() {
                    r + m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn pm_mul(a: &IntPoly, b: &IntPoly, m: &Int) -> IntPoly {
    poly_mod(&a.mul(b), m)
}

fn pm_sub(a: &IntPoly, b: &IntPoly, m: &Int) -> IntPoly {
    poly_mod(&a.sub(b), m)
}

fn pm_add(a: &IntPoly, b: &IntPoly, m: &Int) -> IntPoly {
    poly_mod(&a.add(b), m)
}

/// Division with remainder by a monic polynomial, over Z/m.
fn pm_divrem_monic(a: &IntPoly, b: &IntPoly, m: &Int) -> (IntPoly, IntPoly) {
    debug_assert!(b.lc().is_one(), "divisor must be monic");
    let db = b.deg();
    let mut rem: Vec<Int> = poly_mod(a, m).coeffs().to_vec();
    if rem.len() <= db {
        return (IntPoly::zero(), IntPoly::from_coeffs(rem));
    }
    let qlen = rem.len() - db;
    let mut q = vec![Int::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + db].clone() % m;
        if c.is_zero() {
            continue;
        }
        q[i] = c.clone();
        for (j, bc) in b.coeffs().iter().enumerate() {
            let sub = (&c * bc) % m;
            let idx = i + j;
            let val = (&rem[idx] - sub) % m;
            rem[idx] = if val.is_negative() { val + m } else { val };
        }
    }
    (
        IntPoly::from_coeffs(q),
        IntPoly::from_coeffs(rem[..db].to_vec()),
    )
}

/// Make f monic mod m (requires gcd(lc, m) = 1).
fn monicize(f: &IntPoly, m: &Int) -> Result<IntPoly> {
    let lc = f.lc();
    let inv = mod_inverse(&lc, m)?;
    Ok(poly_mod(&f.scale(&inv), m))
}

/// Polynomial inverse of a mod b over F_p (coprime), plus the cofactor:
/// returns (s, t) with s*a + t*b = 1 in F_p[t], deg s < deg b, deg t < deg a.
fn bezout_modp(a: &PolyModP, b: &PolyModP) -> Result<(PolyModP, PolyModP)> {
    let p = a.modulus();
    // Extended Euclid for s with s*a = 1 mod b.
    let (mut r0, mut r1) = (b.clone(), a.rem(b)?);
    let (mut s0, mut s1) = (PolyModP::zero(p), PolyModP::one(p));
    while !r1.is_zero() {
        let (q, r2) = r0.divrem(&r1)?;
        let s2 = s0.sub(&q.mul(&s1));
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    if r0.degree() != Some(0) {
        return Err(Error::LiftFailed {
            p,
            reason: format!("factors are not coprime mod {p}: gcd = {r0}"),
        });
    }
    // r0 = s0 * a mod b (a scalar); normalize to 1.
    let s = s0.scale(super::modp::mod_inv(r0.lc(), p)).rem(b)?;
    // t = (1 - s*a) / b over F_p.
    let num = PolyModP::one(p).sub(&s.mul(a));
    let (t, rem) = num.divrem(b)?;
    if !rem.is_zero() {
        return Err(Error::Inconsistency("Bezout cofactor not exact".into()));
    }
    Ok((s, t))
}

/// One quadratic Hensel step (von zur Gathen-Gerhard style): given
/// f = g*h mod m, s*g + t*h = 1 mod m, g and h monic, lifts everything to
/// modulus m^2 (then reduced mod `cap` if smaller).
#[allow(clippy::too_many_arguments)]
fn hensel_step(
    f: &IntPoly,
    g: &IntPoly,
    h: &IntPoly,
    s: &IntPoly,
    t: &IntPoly,
    m: &Int,
) -> (IntPoly, IntPoly, IntPoly, IntPoly) {
    let m2 = m * m;
    let e = pm_sub(f, &g.mul(h), &m2);
    let (q, r) = pm_divrem_monic(&pm_mul(s, &e, &m2), h, &m2);
    let g_new = pm_add(&pm_add(g, &pm_mul(t, &e, &m2), &m2), &pm_mul(&q, g, &m2), &m2);
    let h_new = pm_add(h, &r, &m2);
    let b = pm_sub(&pm_add(&pm_mul(s, &g_new, &m2), &pm_mul(t, &h_new, &m2), &m2), &IntPoly::one(), &m2);
    let (c, d) = pm_divrem_monic(&pm_mul(s, &b, &m2), &h_new, &m2);
    let s_new = pm_sub(s, &d, &m2);
    let t_new = pm_sub(&pm_sub(t, &pm_mul(t, &b, &m2), &m2), &pm_mul(&c, &g_new, &m2), &m2);
    (g_new, h_new, s_new, t_new)
}

/// Lift the pair (g0, h0) with f = g0*h0 mod p (all monic, coprime) to
/// (G, H) mod p^k with f = G*H mod p^k, G = g0 and H = h0 mod p.
fn lift_pair(f: &IntPoly, g0: &PolyModP, h0: &PolyModP, k: u32) -> Result<(IntPoly, IntPoly)> {
    let p = g0.modulus();
    let target = Int::from(p).pow(k);
    let (s0, t0) = bezout_modp(g0, h0)?;
    let mut m = Int::from(p);
    let mut g = g0.lift_nonneg();
    let mut h = h0.lift_nonneg();
    let mut s = s0.lift_nonneg();
    let mut t = t0.lift_nonneg();
    while m < target {
        let (g2, h2, s2, t2) = hensel_step(f, &g, &h, &s, &t, &m);
        g = g2;
        h = h2;
        s = s2;
        t = t2;
        m = &m * &m;
    }
    let g = poly_mod(&g, &target);
    let h = poly_mod(&h, &target);
    // Verify the lift exactly.
    let prod = pm_mul(&g, &h, &target);
    let fm = poly_mod(f, &target);
    if prod != fm {
        return Err(Error::LiftFailed {
            p,
            reason: "lifted product does not reproduce f".into(),
        });
    }
    Ok((g, h))
}

/// Lift a pairwise-coprime monic factorization of f/lc(f) mod p to mod p^k.
/// `factors` multiply (after monicization of f) to f mod p. Returns monic
/// integer polynomials reduced into [0, p^k), in the same order as the
/// input list, whose product is f/lc(f) mod p^k.
pub fn hensel_lift_monic(f: &IntPoly, factors: &[PolyModP], k: u32) -> Result<Vec<IntPoly>> {
    if factors.is_empty() {
        return Err(Error::ZeroPolynomial("no factors to lift".into()));
    }
    let p = factors[0].modulus();
    let pk = Int::from(p).pow(k);
    if (f.lc() % Int::from(p)).is_zero() {
        return Err(Error::LeadingCoefficientDivisible {
            p,
            poly: f.to_string(),
        });
    }
    let fstar = monicize(f, &pk)?;
    // Check the mod-p factorization is consistent.
    let mut prod = PolyModP::one(p);
    for g in factors {
        if !g.is_monic() {
            return Err(Error::LiftFailed {
                p,
                reason: format!("factor {g} is not monic"),
            });
        }
        prod = prod.mul(g);
    }
    if prod != PolyModP::from_int_poly(&fstar, p) {
        return Err(Error::LiftFailed {
            p,
            reason: "mod-p factors do not multiply to f".into(),
        });
    }
    if factors.len() == 1 {
        return Ok(vec![fstar]);
    }
    // Split off the first factor against the product of the rest.
    let mut rest = PolyModP::one(p);
    for g in &factors[1..] {
        rest = rest.mul(g);
    }
    let (g_lift, h_lift) = lift_pair(&fstar, &factors[0], &rest, k)?;
    let mut out = vec![g_lift];
    out.extend(hensel_lift_monic(&h_lift, &factors[1..], k)?);
    Ok(out)
}
