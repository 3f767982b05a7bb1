//! p-adic machinery: square classes of Q_p, cluster factorization of integer
//! polynomials over Z_p by Hensel lifting at finite precision, certified
//! simple-root lifting, branch-and-lift root finding, and the mod-p
//! symmetric-factorization screen.

use num_traits::Zero;

use crate::arith::{int, is_prime, legendre, mod_inverse, valuation, Int};
use crate::error::{Error, Result};
use crate::linalg::Rat;
use crate::poly::modp::{factor_mod_p, PolyModP};
use crate::poly::{hensel_lift_monic, poly_mod, IntPoly};

// ---------------------------------------------------------------------------
// Square classes of Q_p^* / (Q_p^*)^2
// ---------------------------------------------------------------------------

/// Unit part of a square class: for odd p, whether the unit is a quadratic
/// non-residue mod p; for p = 2, the residue of the (odd) unit mod 8.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnitClass {
    Odd { nonresidue: bool },
    Two { residue_mod8: u8 },
}

/// A square class of Q_p^*: the parity of the valuation together with the
/// class of the unit part (F_p^*/squares for odd p; (Z/8)^* for p = 2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SquareClassQp {
    pub p: u64,
    pub val_odd: bool,
    pub unit: UnitClass,
}

impl SquareClassQp {
    pub fn of_int(x: &Int, p: u64) -> Result<SquareClassQp> {
        if x.is_zero() {
            return Err(Error::InvalidForm("square class of 0".into()));
        }
        check_prime(p)?;
        let pi = int(p as i64);
        let v = valuation(x, &pi);
        let unit_part = x / pi.pow(v);
        let unit = if p == 2 {
            let r = unit_part.mod_floor_u8(8);
            UnitClass::Two { residue_mod8: r }
        } else {
            UnitClass::Odd {
                nonresidue: legendre(&unit_part, &pi) == -1,
            }
        };
        Ok(SquareClassQp {
            p,
            val_odd: v % 2 == 1,
            unit,
        })
    }

    pub fn of_rat(x: &Rat, p: u64) -> Result<SquareClassQp> {
        if x.is_zero() {
            return Err(Error::InvalidForm("square class of 0".into()));
        }
        // x and numer*denom lie in the same square class.
        SquareClassQp::of_int(&(x.numer() * x.denom()), p)
    }

    pub fn is_square(&self) -> bool {
        if self.val_odd {
            return false;
        }
        match self.unit {
            UnitClass::Odd { nonresidue } => !nonresidue,
            UnitClass::Two { residue_mod8 } => residue_mod8 == 1,
        }
    }

    pub fn mul(&self, other: &SquareClassQp) -> Result<SquareClassQp> {
        if self.p != other.p {
            return Err(Error::Shape(format!(
                "square classes at different primes {} and {}",
                self.p, other.p
            )));
        }
        let unit = match (self.unit, other.unit) {
            (UnitClass::Odd { nonresidue: a }, UnitClass::Odd { nonresidue: b }) => {
                UnitClass::Odd { nonresidue: a != b }
            }
            (UnitClass::Two { residue_mod8: a }, UnitClass::Two { residue_mod8: b }) => {
                UnitClass::Two {
                    residue_mod8: (a * b % 8),
                }
            }
            _ => unreachable!("same p implies same unit kind"),
        };
        Ok(SquareClassQp {
            p: self.p,
            val_odd: self.val_odd != other.val_odd,
            unit,
        })
    }
}

trait ModFloorU8 {
    fn mod_floor_u8(&self, m: u8) -> u8;
}

impl ModFloorU8 for Int {
    fn mod_floor_u8(&self, m: u8) -> u8 {
        use num_integer::Integer;
        let r = self.mod_floor(&Int::from(m));
        u8::try_from(r).expect("residue fits")
    }
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(&Int::from(p)) {
        return Err(Error::NotPrime(p.to_string()));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Cluster factorization over Z_p at finite precision
// ---------------------------------------------------------------------------

/// How strongly a [`PadicPoly`] factor's irreducibility is certified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certification {
    /// The reduction mod p is irreducible, so the factor is irreducible
    /// over Q_p (strongest certificate).
    ResidueIrreducible,
    /// Quadratic with discriminant in a certified nonsquare class of Q_p.
    QuadraticNonsquareDisc,
    /// Degree one.
    Linear,
    /// A cluster: power of a single irreducible residue; the true p-adic
    /// factorization of this block is not yet resolved.
    UnresolvedCluster {
        residue_degree: usize,
        multiplicity: u32,
    },
}

/// A monic factor of a polynomial over Z_p, known at precision p^k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicPoly {
    pub p: u64,
    pub k: u32,
    /// Coefficients reduced into [0, p^k), constant first, monic.
    pub coeffs: Vec<Int>,
    pub certification: Certification,
}

impl PadicPoly {
    pub fn claimed_irreducible(&self) -> bool {
        !matches!(self.certification, Certification::UnresolvedCluster { .. })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn as_int_poly(&self) -> IntPoly {
        IntPoly::from_coeffs(self.coeffs.clone())
    }

    /// Symmetric (balanced) representative: coefficients in (-p^k/2, p^k/2].
    pub fn balanced_int_poly(&self) -> IntPoly {
        let m = Int::from(self.p).pow(self.k);
        let half = &m / 2;
        IntPoly::from_coeffs(
            self.coeffs
                .iter()
                .map(|c| if c > &half { c - &m } else { c.clone() })
                .collect(),
        )
    }
}

impl std::fmt::Display for PadicPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.as_int_poly())
    }
}

/// Default working precision for analyzing f at p: max(8, 2 v_p(D) + 2)
/// where D = disc(radical(f)); errors with `PrecisionCeiling` if the result
/// exceeds `ceiling`.
pub fn default_precision(f: &IntPoly, p: u64, ceiling: u32) -> Result<u32> {
    check_prime(p)?;
    let rad = f.radical()?;
    let disc = rad.discriminant()?;
    let v = if disc.is_zero() {
        return Err(Error::Inconsistency(
            "radical has zero discriminant".into(),
        ));
    } else {
        valuation(&disc, &int(p as i64))
    };
    let k = (2 * v + 2).max(8);
    if k > ceiling {
        return Err(Error::PrecisionCeiling {
            p,
            requested: k,
            ceiling,
        });
    }
    Ok(k)
}

/// Factor f into Hensel clusters over Z_p at precision p^k: one monic factor
/// per distinct irreducible residue, congruent to that residue power mod p,
/// with product lc(f)^{-1} f mod p^k. Factors are sorted by (degree,
/// coefficient list). Requires p prime and p not dividing lc(f).
pub fn hensel_factor(f: &IntPoly, p: u64, k: u32) -> Result<Vec<PadicPoly>> {
    check_prime(p)?;
    if k == 0 {
        return Err(Error::PrecisionInsufficient {
            p,
            reason: "precision k must be at least 1".into(),
        });
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("hensel_factor(0)".into()));
    }
    if (f.lc() % int(p as i64)).is_zero() {
        return Err(Error::LeadingCoefficientDivisible {
            p,
            poly: f.to_string(),
        });
    }
    if f.deg() == 0 {
        return Ok(vec![]);
    }
    let modp = factor_mod_p(f, p)?;
    // Build one cluster per distinct irreducible residue.
    let mut clusters: Vec<(PolyModP, usize, u32)> = Vec::new(); // (phi^m, deg phi, m)
    for (phi, m) in &modp.factors {
        let mut c = PolyModP::one(p);
        for _ in 0..*m {
            c = c.mul(phi);
        }
        clusters.push((c, phi.deg(), *m));
    }
    let cluster_polys: Vec<PolyModP> = clusters.iter().map(|(c, _, _)| c.clone()).collect();
    let lifted = hensel_lift_monic(f, &cluster_polys, k)?;
    let mut out = Vec::with_capacity(lifted.len());
    for (lift, (_, phi_deg, mult)) in lifted.into_iter().zip(clusters.iter()) {
        let certification = if *mult == 1 {
            match lift.deg() {
                1 => Certification::Linear,
                _ => Certification::ResidueIrreducible,
            }
        } else if lift.deg() == 2 {
            // Quadratic cluster: certified irreducible iff the discriminant
            // is a p-adic nonsquare at this precision (decidable when the
            // unit part of the disc is visible).
            match quadratic_cluster_certification(&lift, p, k) {
                Some(c) => c,
                None => Certification::UnresolvedCluster {
                    residue_degree: *phi_deg,
                    multiplicity: *mult,
                },
            }
        } else {
            Certification::UnresolvedCluster {
                residue_degree: *phi_deg,
                multiplicity: *mult,
            }
        };
        out.push(PadicPoly {
            p,
            k,
            coeffs: poly_mod_coeffs(&lift, p, k),
            certification,
        });
    }
    out.sort_by(|a, b| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.coeffs.cmp(&b.coeffs))
    });
    Ok(out)
}

/// For a monic quadratic t^2 + bt + c mod p^k: if disc = b^2 - 4c has
/// valuation < k - 1 (unit part visible), classify: nonsquare disc means
/// irreducible over Q_p. Returns None when precision cannot decide.
fn quadratic_cluster_certification(
    lift: &IntPoly,
    p: u64,
    k: u32,
) -> Option<Certification> {
    let b = lift.coeff(1);
    let c = lift.coeff(0);
    let disc_mod = {
        let m = Int::from(p).pow(k);
        use num_integer::Integer;
        (&b * &b - int(4) * &c).mod_floor(&m)
    };
    if disc_mod.is_zero() {
        return None; // disc vanishes at this precision: cannot decide
    }
    let pi = int(p as i64);
    let v = valuation(&disc_mod, &pi);
    // The unit must be visible with enough slack: mod p for odd p, mod 8
    // for p = 2.
    let needed = if p == 2 { v + 3 } else { v + 1 };
    if needed > k {
        return None;
    }
    if v % 2 == 1 {
        // Odd valuation: disc is a nonsquare; factor is irreducible.
        return Some(Certification::QuadraticNonsquareDisc);
    }
    let unit = &disc_mod / pi.pow(v);
    let nonsquare = if p == 2 {
        unit.mod_floor_u8(8) != 1
    } else {
        legendre(&unit, &pi) == -1
    };
    if nonsquare {
        Some(Certification::QuadraticNonsquareDisc)
    } else {
        None // square disc: splits; leave as unresolved cluster
    }
}

fn poly_mod_coeffs(f: &IntPoly, p: u64, k: u32) -> Vec<Int> {
    let m = Int::from(p).pow(k);
    poly_mod(f, &m).coeffs().to_vec()
}

// ---------------------------------------------------------------------------
// Root lifting
// ---------------------------------------------------------------------------

/// Lift a simple root: given h(a0) = 0 mod p and h'(a0) a unit mod p,
/// Newton-iterate to the unique root mod p^k. Errors on a non-simple root.
pub fn lift_simple_root(h: &IntPoly, p: u64, a0: &Int, k: u32) -> Result<Int> {
    check_prime(p)?;
    let pi = int(p as i64);
    use num_integer::Integer;
    let mut modulus = pi.clone();
    let mut x = a0.mod_floor(&pi);
    if !h.eval_int(&x).mod_floor(&pi).is_zero() {
        return Err(Error::LiftFailed {
            p,
            reason: format!("{a0} is not a root mod {p}"),
        });
    }
    let dh = h.derivative();
    if dh.eval_int(&x).mod_floor(&pi).is_zero() {
        return Err(Error::LiftFailed {
            p,
            reason: format!("root {a0} is not simple mod {p}"),
        });
    }
    let target = pi.pow(k);
    while modulus < target {
        modulus = (&modulus * &modulus).min(target.clone());
        let fx = h.eval_int(&x).mod_floor(&modulus);
        let dfx = dh.eval_int(&x).mod_floor(&modulus);
        let inv = mod_inverse(&dfx, &modulus)?;
        x = (&x - fx * inv).mod_floor(&modulus);
    }
    Ok(x.mod_floor(&target))
}

/// A Z_p-root of a polynomial found at finite precision, certified unique in
/// its residue disk by the strong Hensel criterion
/// v(f(x)) > 2 v(f'(x)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicRoot {
    /// Value mod p^k.
    pub value: Int,
    /// v_p(f'(root)): controls the certified disk radius.
    pub derivative_valuation: u32,
}

/// All Z_p-roots of a monic (mod p^k known) integer polynomial, by
/// branch-and-lift with the strong Hensel criterion. `disc_val` is
/// v_p(disc f); precision must satisfy k > 2*disc_val + 2, otherwise an
/// escalation error is returned.
pub fn padic_roots(f: &IntPoly, p: u64, k: u32, disc_val: u32) -> Result<Vec<PadicRoot>> {
    check_prime(p)?;
    use num_integer::Integer;
    if k <= 2 * disc_val + 2 {
        return Err(Error::PrecisionInsufficient {
            p,
            reason: format!(
                "root finding needs k > 2*v_p(disc)+2 = {}, have {k}",
                2 * disc_val + 2
            ),
        });
    }
    let pi = int(p as i64);
    let target = pi.pow(k);
    let df = f.derivative();
    let mut roots: Vec<PadicRoot> = Vec::new();
    // Breadth-first over residue classes x mod p^j.
    let mut frontier: Vec<(Int, u32)> = (0..p).map(|r| (int(r as i64), 1u32)).collect();
    let mut budget = 200_000u64;
    while let Some((x, j)) = frontier.pop() {
        if budget == 0 {
            return Err(Error::PrecisionInsufficient {
                p,
                reason: "root search budget exhausted".into(),
            });
        }
        budget -= 1;
        let pj = pi.pow(j);
        let fx = f.eval_int(&x).mod_floor(&target);
        let vfx = if fx.is_zero() { k } else { valuation(&fx, &pi) };
        if vfx < j {
            continue; // no root in this disk
        }
        let dfx = df.eval_int(&x).mod_floor(&target);
        let vdfx = if dfx.is_zero() {
            k
        } else {
            valuation(&dfx, &pi)
        };
        let certified = vdfx < k && vfx > 2 * vdfx;
        if certified {
            // Strong Hensel: a unique root exists within distance
            // v > vdfx of x. Newton-iterate at internal precision
            // p^{k + vdfx} so the reported value is exact mod p^k.
            let internal = pi.pow(k + vdfx);
            let mut xx = x.clone();
            for _ in 0..(2 * k as usize + 8) {
                let fv = f.eval_int(&xx).mod_floor(&internal);
                if fv.is_zero() {
                    break;
                }
                let dv = df.eval_int(&xx).mod_floor(&internal);
                let unit = (&dv / pi.pow(vdfx)).mod_floor(&internal);
                let inv = mod_inverse(&unit, &internal)?;
                let step = (&fv / pi.pow(vdfx)) * &inv;
                xx = (&xx - step).mod_floor(&internal);
            }
            if !f.eval_int(&xx).mod_floor(&internal).is_zero() {
                return Err(Error::PrecisionInsufficient {
                    p,
                    reason: "Newton iteration did not converge".into(),
                });
            }
            let value = xx.mod_floor(&target);
            if !roots.iter().any(|r| r.value == value) {
                roots.push(PadicRoot {
                    value,
                    derivative_valuation: vdfx,
                });
            }
            if vdfx < j {
                // The uniqueness disk v(x' - x) > vdfx contains the whole
                // current branch disk v >= j: no other roots live here.
                continue;
            }
            // Other roots may still collide with this one mod p^j: keep
            // branching; duplicates are removed by value.
        }
        // Branch deeper, up to the disc-valuation depth bound.
        if j > 2 * disc_val + 1 {
            if certified {
                continue;
            }
            // A squarefree polynomial cannot keep an undecided branch this
            // deep; report precision trouble honestly.
            return Err(Error::PrecisionInsufficient {
                p,
                reason: format!(
                    "branch at depth {j} undecided; disc valuation {disc_val}"
                ),
            });
        }
        for r in 0..p {
            frontier.push((&x + &pj * int(r as i64), j + 1));
        }
    }
    roots.sort_by(|a, b| a.value.cmp(&b.value));
    Ok(roots)
}

// ---------------------------------------------------------------------------
// Mod-p symmetric factorization screen
// ---------------------------------------------------------------------------

/// Verdict of the mod-p screen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScreenVerdict {
    /// No partition of the mod-p factors admits two qualifying symmetric
    /// blocks: the obstruction cannot appear at this prime.
    Impossible,
    /// At least one feasible partition exists: p-adic analysis is needed.
    NeedsLift,
}

/// Report of screening f mod p for factorizations into two or more
/// symmetric even-degree blocks divisible by (t-1) or (t+1).
#[derive(Clone, Debug)]
pub struct ScreenReport {
    pub p: u64,
    pub factors: Vec<(PolyModP, u32)>,
    /// Feasible partitions, each given by its list of block products.
    pub feasible_partitions: Vec<Vec<PolyModP>>,
    pub verdict: ScreenVerdict,
}

/// Screen f mod p: enumerate unordered partitions of the multiset of
/// irreducible mod-p factors and keep those with at least two blocks that
/// are (i) closed under t -> 1/t up to a unit, (ii) of even degree, and
/// (iii) divisible by (t-1) or (t+1) mod p.
pub fn screen_symmetric_factors(f: &IntPoly, p: u64) -> Result<ScreenReport> {
    check_prime(p)?;
    let fac = factor_mod_p(f, p)?;
    // Expand the multiset into a flat list of factor indices.
    let mut flat: Vec<usize> = Vec::new();
    for (i, (_, m)) in fac.factors.iter().enumerate() {
        for _ in 0..*m {
            flat.push(i);
        }
    }
    let polys: Vec<PolyModP> = fac.factors.iter().map(|(g, _)| g.clone()).collect();
    let mut feasible: Vec<Vec<PolyModP>> = Vec::new();
    let mut budget: u64 = 500_000;
    enumerate_partitions(&flat, &mut Vec::new(), &mut |blocks| {
        let mut qualifying = 0usize;
        let mut products = Vec::with_capacity(blocks.len());
        for block in blocks {
            let mut prod = PolyModP::one(p);
            for &idx in block {
                prod = prod.mul(&polys[idx]);
            }
            let even = prod.deg().is_multiple_of(2);
            let sym = prod.is_symmetric_up_to_unit();
            let div = prod.eval(1) == 0 || prod.eval(p - 1) == 0;
            if even && sym && div {
                qualifying += 1;
            }
            products.push(prod);
        }
        if qualifying >= 2 {
            products.sort_by(|a, b| {
                a.deg()
                    .cmp(&b.deg())
                    .then_with(|| a.coeffs().cmp(b.coeffs()))
            });
            feasible.push(products);
        }
    }, &mut budget)?;
    let verdict = if feasible.is_empty() {
        ScreenVerdict::Impossible
    } else {
        ScreenVerdict::NeedsLift
    };
    Ok(ScreenReport {
        p,
        factors: fac.factors,
        feasible_partitions: feasible,
        verdict,
    })
}

/// Enumerate unordered partitions of a multiset (given as a sorted flat list
/// of item ids). Each partition is reported once: the block containing the
/// first remaining item is chosen as that item plus a sub-multiset of the
/// rest.
fn enumerate_partitions(
    items: &[usize],
    acc: &mut Vec<Vec<usize>>,
    visit: &mut impl FnMut(&[Vec<usize>]),
    budget: &mut u64,
) -> Result<()> {
    if *budget == 0 {
        return Err(Error::SearchTooLarge(
            "partition enumeration budget exhausted".into(),
        ));
    }
    *budget -= 1;
    if items.is_empty() {
        visit(acc);
        return Ok(());
    }
    let first = items[0];
    let rest = &items[1..];
    // Distinct sub-multisets of `rest`: count per distinct id.
    let mut counts: Vec<(usize, u32)> = Vec::new();
    for &x in rest {
        if let Some(e) = counts.iter_mut().find(|(id, _)| *id == x) {
            e.1 += 1;
        } else {
            counts.push((x, 1));
        }
    }
    let mut choice = vec![0u32; counts.len()];
    loop {
        // Build block = {first} + chosen sub-multiset; remainder = rest.
        let mut block = vec![first];
        let mut remainder: Vec<usize> = Vec::new();
        for (ci, &(id, cnt)) in counts.iter().enumerate() {
            for _ in 0..choice[ci] {
                block.push(id);
            }
            for _ in choice[ci]..cnt {
                remainder.push(id);
            }
        }
        remainder.sort_unstable();
        acc.push(block);
        enumerate_partitions(&remainder, acc, visit, budget)?;
        acc.pop();
        // Next choice vector (odometer).
        let mut i = 0usize;
        loop {
            if i == counts.len() {
                return Ok(());
            }
            if choice[i] < counts[i].1 {
                choice[i] += 1;
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64(cs)
    }

    #[test]
    fn square_classes_q3() {
        // -21 = 3 * (-7): odd valuation at 3.
        let c = SquareClassQp::of_int(&int(-21), 3).unwrap();
        assert!(c.val_odd);
        assert!(!c.is_square());
        // 45 = 3^2 * 5: even valuation, 5 = 2 mod 3 is a nonresidue.
        let c = SquareClassQp::of_int(&int(45), 3).unwrap();
        assert!(!c.val_odd);
        assert_eq!(c.unit, UnitClass::Odd { nonresidue: true });
        assert!(!c.is_square());
        // 4 is a square in Q_3.
        assert!(SquareClassQp::of_int(&int(4), 3).unwrap().is_square());
        // Multiplicativity: class(a) * class(b) = class(ab).
        for a in [-21i64, 45, 4, 7, 15] {
            for b in [2i64, -3, 10, 9] {
                let ca = SquareClassQp::of_int(&int(a), 3).unwrap();
                let cb = SquareClassQp::of_int(&int(b), 3).unwrap();
                let cab = SquareClassQp::of_int(&int(a * b), 3).unwrap();
                assert_eq!(ca.mul(&cb).unwrap(), cab);
            }
        }
    }

    #[test]
    fn square_classes_q2() {
        // 21/25 has unit class 5 mod 8: a nonsquare in Q_2.
        let x = Rat::new(int(21), int(25));
        let c = SquareClassQp::of_rat(&x, 2).unwrap();
        assert!(!c.val_odd);
        assert_eq!(c.unit, UnitClass::Two { residue_mod8: 5 });
        assert!(!c.is_square());
        assert!(SquareClassQp::of_int(&int(17), 2).unwrap().is_square());
        assert!(!SquareClassQp::of_int(&int(2), 2).unwrap().is_square());
    }

    #[test]
    fn default_precision_policy() {
        // Disc of the degree-6 polynomial is 3^6 * 13 * 31^2, so at p = 3
        // the policy gives max(8, 2*6+2) = 14.
        let f = ip(&[1, -8, 28, -43, 28, -8, 1]);
        assert_eq!(default_precision(&f, 3, 64).unwrap(), 14);
        // At p = 13 the valuation is 1: max(8, 4) = 8.
        assert_eq!(default_precision(&f, 13, 64).unwrap(), 8);
        // Ceiling enforcement.
        assert!(matches!(
            default_precision(&f, 3, 4),
            Err(Error::PrecisionCeiling {
                p: 3,
                requested: 14,
                ceiling: 4
            })
        ));
        // Radical is taken first: squares do not inflate the requirement.
        let f2 = f.mul(&f);
        assert_eq!(default_precision(&f2, 3, 64).unwrap(), 14);
    }

    #[test]
    fn hensel_factor_deg6_at_3_pow_8() {
        let f = ip(&[1, -8, 28, -43, 28, -8, 1]);
        let factors = hensel_factor(&f, 3, 8).unwrap();
        assert_eq!(factors.len(), 2);
        assert_eq!(factors[0].coeffs, vec![int(1), int(2565), int(1)]);
        assert_eq!(
            factors[1].coeffs,
            vec![int(1), int(3988), int(5967), int(3988), int(1)]
        );
        // The quadratic lifts the multiplicity-1 residue t^2 + 1, which is
        // irreducible mod 3, so it is certified irreducible over Q_3.
        assert_eq!(
            factors[0].certification,
            Certification::ResidueIrreducible
        );
        assert!(factors[0].claimed_irreducible());
        // The quartic cluster stays unresolved at this level.
        assert_eq!(
            factors[1].certification,
            Certification::UnresolvedCluster {
                residue_degree: 1,
                multiplicity: 4
            }
        );
        // Reductions mod 3: quadratic -> t^2 + 1, quartic -> (t+1)^4.
        let q = PolyModP::from_int_poly(&factors[0].as_int_poly(), 3);
        assert_eq!(q, PolyModP::new(3, vec![1, 0, 1]));
    }

    #[test]
    fn hensel_factor_rejects_bad_inputs() {
        let f = ip(&[1, 1, 3]);
        assert!(matches!(
            hensel_factor(&f, 3, 8),
            Err(Error::LeadingCoefficientDivisible { .. })
        ));
        assert!(hensel_factor(&ip(&[1, 1]), 4, 8).is_err());
    }

    #[test]
    fn simple_root_lift_to_2565() {
        // h(a) = 27 + 25a + 8a^2 + a^3 has the simple root 0 mod 3 which
        // lifts to 2565 mod 3^8.
        let h = ip(&[27, 25, 8, 1]);
        let r = lift_simple_root(&h, 3, &int(0), 8).unwrap();
        assert_eq!(r, int(2565));
        // Double root is rejected: h(a) = a^2 mod 3 at 0.
        let h2 = ip(&[0, 0, 1]);
        assert!(lift_simple_root(&h2, 3, &int(0), 8).is_err());
    }

    #[test]
    fn padic_roots_finds_all_roots() {
        // f = (t - 1)(t - 4) = t^2 - 5t + 4: roots 1 and 4; at p = 3 they
        // collide mod 3 (both = 1), so branching is exercised.
        // disc = 9, v_3(disc) = 2.
        let f = ip(&[4, -5, 1]);
        let roots = padic_roots(&f, 3, 12, 2).unwrap();
        let vals: Vec<Int> = roots.iter().map(|r| r.value.clone()).collect();
        assert!(vals.contains(&int(1)));
        assert!(vals.contains(&int(4)));
        assert_eq!(roots.len(), 2);
        // Insufficient precision is reported, not mis-answered.
        assert!(matches!(
            padic_roots(&f, 3, 5, 2),
            Err(Error::PrecisionInsufficient { .. })
        ));
        // A polynomial with no 3-adic roots.
        let g = ip(&[1, 0, 1]); // t^2 + 1
        assert!(padic_roots(&g, 3, 8, 0).unwrap().is_empty());
    }

    #[test]
    fn screen_impossible_for_deg8_example() {
        // Factors mod 3: (t+1)^2 (t^2+1) (t^4+t^3+t^2+t+1): the only
        // even-degree symmetric block divisible by t+1 is (t+1)^2, and both
        // copies of (t+1) are consumed by it, so no second qualifying block
        // exists.
        let f = ip(&[1, 3, 5, 7, 8, 7, 5, 3, 1]);
        let report = screen_symmetric_factors(&f, 3).unwrap();
        assert_eq!(report.verdict, ScreenVerdict::Impossible);
        assert!(report.feasible_partitions.is_empty());
    }

    #[test]
    fn screen_impossible_for_asymmetric_cubics() {
        // 2(1+t)^2(2+t+t^2+t^3)(2+2t+2t^2+t^3) mod 3: the cubics are an
        // asymmetric conjugate pair; every even-degree block containing one
        // copy of (t+1) is asymmetric, so the screen reports Impossible.
        let f = ip(&[8, 28, 48, 60, 58, 42, 24, 10, 2]);
        let report = screen_symmetric_factors(&f, 3).unwrap();
        assert_eq!(report.verdict, ScreenVerdict::Impossible);
    }

    #[test]
    fn screen_needs_lift_for_12n525_style() {
        // (t+1)^4 (t^2+1) mod 3: {(t+1)^2} twice is a feasible partition.
        let f = ip(&[1, -8, 28, -43, 28, -8, 1]);
        let report = screen_symmetric_factors(&f, 3).unwrap();
        assert_eq!(report.verdict, ScreenVerdict::NeedsLift);
        assert!(!report.feasible_partitions.is_empty());
        // One feasible partition consists of (t^2+1), (t+1)^2, (t+1)^2
        // (canonical block order sorts by coefficient list).
        let lin2 = PolyModP::new(3, vec![1, 2, 1]);
        let quad = PolyModP::new(3, vec![1, 0, 1]);
        assert!(report
            .feasible_partitions
            .iter()
            .any(|blocks| blocks == &vec![quad.clone(), lin2.clone(), lin2.clone()]));
    }
}
