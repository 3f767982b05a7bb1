//! Complete factorization of integer polynomials into irreducibles over Q,
//! via squarefree decomposition, modular factorization, Hensel lifting to a
//! coefficient bound, and subset recombination.

use num_traits::{One, Signed, Zero};

use crate::arith::{int, primes_up_to, Int};
use crate::error::{Error, Result};
use crate::linalg::Rat;
use crate::poly::modp::factor_mod_p;
use crate::poly::{hensel_lift_monic, poly_mod, IntPoly};

/// Factorization of a polynomial over Q into a rational unit times primitive
/// irreducible integer polynomials with positive leading coefficients,
/// sorted by (degree, coefficient list).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Rat,
    pub factors: Vec<(IntPoly, u32)>,
}

impl Factorization {
    /// Multiply the factorization back out.
    pub fn expand(&self) -> IntPoly {
        let mut f = IntPoly::one();
        for (g, m) in &self.factors {
            f = f.mul(&g.pow(*m));
        }
        // unit is integral whenever the input was an integer polynomial
        // divided by the primitive parts; expand only supports that case.
        assert!(self.unit.is_integer(), "unit must be integral to expand");
        f.scale(&self.unit.to_integer())
    }

    /// The factors that are symmetric (t^deg f(1/t) = f(t)).
    pub fn symmetric_factors(&self) -> Vec<(IntPoly, u32)> {
        self.factors
            .iter()
            .filter(|(g, _)| g.symmetry() == Some(1))
            .cloned()
            .collect()
    }
}

impl std::fmt::Display for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.unit)?;
        for (g, m) in &self.factors {
            write!(f, " * ({g})")?;
            if *m > 1 {
                write!(f, "^{m}")?;
            }
        }
        Ok(())
    }
}

/// Factor an integer polynomial into irreducibles over Q.
pub fn factor_over_z(f: &IntPoly) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("factor_over_z(0)".into()));
    }
    let (prim, unit) = f.primitive_normalized()?;
    if prim.deg() == 0 {
        return Ok(Factorization {
            unit,
            factors: vec![],
        });
    }
    let mut factors: Vec<(IntPoly, u32)> = Vec::new();
    for (part, mult) in prim.squarefree_decomposition()? {
        if part.deg() == 0 {
            continue;
        }
        for irr in factor_squarefree(&part)? {
            factors.push((irr, mult));
        }
    }
    factors.sort_by(|a, b| {
        a.0.deg()
            .cmp(&b.0.deg())
            .then_with(|| a.0.coeffs().cmp(b.0.coeffs()))
    });
    let result = Factorization { unit, factors };
    debug_assert_eq!(result.expand(), f.clone());
    Ok(result)
}

/// Factor a primitive squarefree polynomial with positive leading
/// coefficient into irreducibles (Zassenhaus).
fn factor_squarefree(g: &IntPoly) -> Result<Vec<IntPoly>> {
    debug_assert!(g.lc().is_positive());
    if g.deg() == 1 {
        return Ok(vec![g.clone()]);
    }
    // Extract t-powers first (t divides g iff constant term is 0); a
    // squarefree g has at most one factor of t.
    if g.coeff(0).is_zero() {
        let mut rest = g.coeffs().to_vec();
        rest.remove(0);
        let mut out = vec![IntPoly::t_power(1)];
        out.extend(factor_squarefree(&IntPoly::from_coeffs(rest))?);
        return Ok(out);
    }
    let p = choose_prime(g)?;
    let modular = factor_mod_p(g, p)?;
    debug_assert!(modular.factors.iter().all(|(_, m)| *m == 1));
    if modular.factors.len() == 1 {
        return Ok(vec![g.clone()]); // irreducible mod p => irreducible over Q
    }
    // Mignotte-style bound: any factor of g (over Z, after lc scaling) has
    // coefficients bounded by sqrt(n+1) * 2^n * H(g) * |lc(g)|.
    let n = g.deg() as u32;
    let height = g
        .coeffs()
        .iter()
        .map(|c| c.abs())
        .max()
        .expect("nonzero poly");
    let bound: Int = (Int::from((g.deg() + 1) as u64).sqrt() + 1)
        * int(2).pow(n)
        * height
        * g.lc().abs();
    // Lift precision: p^k > 2 * bound.
    let pk_target = int(2) * &bound + 1;
    let mut k = 1u32;
    let mut pk = int(p as i64);
    while pk < pk_target {
        pk *= int(p as i64);
        k += 1;
    }
    let mods: Vec<_> = modular.factors.iter().map(|(h, _)| h.clone()).collect();
    let lifted = hensel_lift_monic(g, &mods, k)?;
    recombine(g, lifted, &pk)
}

/// A prime not dividing lc(g) with g squarefree mod p.
fn choose_prime(g: &IntPoly) -> Result<u64> {
    for p in primes_up_to(10_000) {
        let pi = int(p as i64);
        if (g.lc() % &pi).is_zero() {
            continue;
        }
        let gp = crate::poly::modp::PolyModP::from_int_poly(g, p);
        let dgp = gp.derivative();
        if dgp.is_zero() {
            continue;
        }
        if gp.gcd(&dgp)?.deg() == 0 {
            return Ok(p);
        }
    }
    Err(Error::Inconsistency(
        "no squarefree prime below 10000 for a squarefree polynomial".into(),
    ))
}

/// Zassenhaus subset recombination: find true factors as products of subsets
/// of the lifted modular factors.
fn recombine(g: &IntPoly, lifted: Vec<IntPoly>, pk: &Int) -> Result<Vec<IntPoly>> {
    let mut remaining: Vec<IntPoly> = lifted;
    let mut f_star = g.clone();
    let mut found: Vec<IntPoly> = Vec::new();
    let mut s = 1usize;
    let mut budget: u64 = 1 << 22;
    'outer: while 2 * s <= remaining.len() {
        let m = remaining.len();
        let mut mask: u64 = (1u64 << s) - 1;
        let last = ((1u64 << s) - 1) << (m - s);
        loop {
            if budget == 0 {
                return Err(Error::SearchTooLarge(
                    "factor recombination budget exhausted".into(),
                ));
            }
            budget -= 1;
            if let Some(h) = try_subset(&f_star, &remaining, mask, pk) {
                // Found a true factor: remove its modular parts.
                f_star = f_star
                    .div_exact(&h)
                    .expect("verified divisor divides");
                found.push(h);
                remaining = (0..m as u64)
                    .filter(|i| mask & (1 << i) == 0)
                    .map(|i| remaining[i as usize].clone())
                    .collect();
                continue 'outer; // restart at the same cardinality
            }
            if mask == last {
                break;
            }
            mask = next_subset_same_popcount(mask);
        }
        s += 1;
    }
    if f_star.deg() > 0 {
        found.push(normalize_positive(&f_star));
    }
    Ok(found)
}

/// Candidate factor from the modular subset: lc(f*) * prod, balanced mod
/// p^k, primitive part; returns it if it divides f*.
fn try_subset(f_star: &IntPoly, remaining: &[IntPoly], mask: u64, pk: &Int) -> Option<IntPoly> {
    let mut prod = IntPoly::constant(f_star.lc());
    for (i, h) in remaining.iter().enumerate() {
        if mask & (1 << i) != 0 {
            prod = poly_mod(&prod.mul(h), pk);
        }
    }
    let balanced = balance(&prod, pk);
    let prim = primitive_positive(&balanced);
    f_star.div_exact(&prim).map(|_| prim)
}

/// Map coefficients from [0, pk) to (-pk/2, pk/2].
fn balance(f: &IntPoly, pk: &Int) -> IntPoly {
    let half = pk / 2;
    IntPoly::from_coeffs(
        f.coeffs()
            .iter()
            .map(|c| if c > &half { c - pk } else { c.clone() })
            .collect(),
    )
}

fn primitive_positive(f: &IntPoly) -> IntPoly {
    normalize_positive(&{
        let c = f.content();
        if c.is_zero() || c.is_one() {
            f.clone()
        } else {
            IntPoly::from_coeffs(f.coeffs().iter().map(|x| x / &c).collect())
        }
    })
}

fn normalize_positive(f: &IntPoly) -> IntPoly {
    if f.lc().is_negative() {
        f.neg()
    } else {
        f.clone()
    }
}

/// Gosper's hack: next bitmask with the same popcount.
fn next_subset_same_popcount(x: u64) -> u64 {
    let c = x & x.wrapping_neg();
    let r = x + c;
    (((r ^ x) >> 2) / c) | r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64(cs)
    }

    fn pairs(f: &Factorization) -> Vec<(Vec<i64>, u32)> {
        f.factors
            .iter()
            .map(|(g, m)| {
                (
                    g.coeffs()
                        .iter()
                        .map(|c| i64::try_from(c).unwrap())
                        .collect(),
                    *m,
                )
            })
            .collect()
    }

    #[test]
    fn degree6_with_square_part() {
        let f = ip(&[1, -5, 10, -13, 10, -5, 1]);
        let fac = factor_over_z(&f).unwrap();
        assert!(fac.unit.is_one());
        assert_eq!(
            pairs(&fac),
            vec![(vec![1, -3, 1], 1), (vec![1, -1, 1], 2)]
        );
        assert_eq!(fac.expand(), f);
    }

    #[test]
    fn degree4_three_distinct_factors() {
        let f = ip(&[2, -11, 19, -11, 2]);
        let fac = factor_over_z(&f).unwrap();
        assert!(fac.unit.is_one());
        assert_eq!(
            pairs(&fac),
            vec![(vec![-2, 1], 1), (vec![-1, 2], 1), (vec![1, -3, 1], 1)]
        );
    }

    #[test]
    fn perfect_square_of_quadratic() {
        let f = ip(&[4, -12, 17, -12, 4]);
        let fac = factor_over_z(&f).unwrap();
        assert!(fac.unit.is_one());
        assert_eq!(pairs(&fac), vec![(vec![2, -3, 2], 2)]);
    }

    #[test]
    fn degree6_with_linear_pair_and_square() {
        let f = ip(&[2, -9, 18, -23, 18, -9, 2]);
        let fac = factor_over_z(&f).unwrap();
        assert_eq!(
            pairs(&fac),
            vec![(vec![-2, 1], 1), (vec![-1, 2], 1), (vec![1, -1, 1], 2)]
        );
    }

    #[test]
    fn degree8_product_of_two_squares() {
        let f = ip(&[1, -8, 26, -48, 59, -48, 26, -8, 1]);
        let fac = factor_over_z(&f).unwrap();
        assert_eq!(
            pairs(&fac),
            vec![(vec![1, -3, 1], 2), (vec![1, -1, 1], 2)]
        );
    }

    #[test]
    fn cyclotomic_square() {
        let f = ip(&[1, -2, 3, -4, 5, -4, 3, -2, 1]);
        let fac = factor_over_z(&f).unwrap();
        assert_eq!(pairs(&fac), vec![(vec![1, -1, 1, -1, 1], 2)]);
    }

    #[test]
    fn irreducible_degree6() {
        let f = ip(&[1, -8, 28, -43, 28, -8, 1]);
        let fac = factor_over_z(&f).unwrap();
        assert_eq!(
            pairs(&fac),
            vec![(vec![1, -8, 28, -43, 28, -8, 1], 1)]
        );
    }

    #[test]
    fn content_and_sign_become_the_unit() {
        // -2 (t+1)^2 (2+t+t^2+t^3)(2+2t+2t^2+t^3), negated.
        let f = ip(&[8, 28, 48, 60, 58, 42, 24, 10, 2]).neg();
        let fac = factor_over_z(&f).unwrap();
        assert_eq!(fac.unit, Rat::from_integer(int(-2)));
        assert_eq!(
            pairs(&fac),
            vec![
                (vec![1, 1], 2),
                (vec![2, 1, 1, 1], 1),
                (vec![2, 2, 2, 1], 1)
            ]
        );
        assert_eq!(fac.expand(), f);
    }

    #[test]
    fn symmetric_factor_filter() {
        let f = ip(&[2, -9, 18, -23, 18, -9, 2]);
        let fac = factor_over_z(&f).unwrap();
        let sym = fac.symmetric_factors();
        assert_eq!(sym.len(), 1);
        assert_eq!(sym[0].0, ip(&[1, -1, 1]));
        assert_eq!(sym[0].1, 2);
    }

    #[test]
    fn t_power_and_constant_handling() {
        let f = ip(&[0, 0, 6, 6]); // 6 t^2 (t + 1)
        let fac = factor_over_z(&f).unwrap();
        assert_eq!(fac.unit, Rat::from_integer(int(6)));
        assert_eq!(pairs(&fac), vec![(vec![0, 1], 2), (vec![1, 1], 1)]);
        let c = factor_over_z(&ip(&[-7])).unwrap();
        assert_eq!(c.unit, Rat::from_integer(int(-7)));
        assert!(c.factors.is_empty());
    }

    #[test]
    fn fig8_squared_charpoly() {
        let f = ip(&[1, -6, 11, -6, 1]);
        let fac = factor_over_z(&f).unwrap();
        assert_eq!(pairs(&fac), vec![(vec![1, -3, 1], 2)]);
    }

    #[test]
    fn needs_recombination() {
        // (t^2 + t + 7)(t^2 - t + 7): irreducible over Q but splits into
        // linears or stays quadratic mod small primes in mismatched ways,
        // exercising subset recombination.
        let f = ip(&[7, 1, 1]).mul(&ip(&[7, -1, 1]));
        let fac = factor_over_z(&f).unwrap();
        assert_eq!(
            pairs(&fac),
            vec![(vec![7, -1, 1], 1), (vec![7, 1, 1], 1)]
        );
    }

    #[test]
    fn swinnerton_dyer_style_recombination() {
        // (t^2 - 2)(t^2 - 3)(t^2 - 6) splits more finely modulo every
        // prime than over Q.
        let f = ip(&[-2, 0, 1]).mul(&ip(&[-3, 0, 1])).mul(&ip(&[-6, 0, 1]));
        let fac = factor_over_z(&f).unwrap();
        assert_eq!(
            pairs(&fac),
            vec![
                (vec![-6, 0, 1], 1),
                (vec![-3, 0, 1], 1),
                (vec![-2, 0, 1], 1)
            ]
        );
    }
}
