//! Polynomial arithmetic and factorization over F_p (p a prime below 2^31).
//!
//! Factorization follows the classical route: squarefree decomposition in
//! characteristic p, distinct-degree splitting, then Cantor-Zassenhaus
//! equal-degree splitting (quadratic-residue based for odd p, trace-map
//! based for p = 2). The splitting elements are drawn from a fixed-seed
//! linear congruential generator, so results are deterministic; factor lists
//! are additionally sorted into a canonical order (degree, then coefficient
//! lexicographic from the constant term up).

use num_traits::Signed;

use crate::arith::{is_prime, Int};
use crate::error::{Error, Result};
use crate::poly::IntPoly;

/// Dense polynomial over F_p; coefficient of t^i at index i; trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyModP {
    p: u64,
    coeffs: Vec<u64>,
}

impl PolyModP {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PolyModP { p, coeffs }
    }

    pub fn zero(p: u64) -> Self {
        PolyModP { p, coeffs: vec![] }
    }

    pub fn one(p: u64) -> Self {
        PolyModP::new(p, vec![1])
    }

    pub fn constant(p: u64, c: u64) -> Self {
        PolyModP::new(p, vec![c])
    }

    pub fn t(p: u64) -> Self {
        PolyModP::new(p, vec![0, 1])
    }

    /// Reduce an integer polynomial mod p.
    pub fn from_int_poly(f: &IntPoly, p: u64) -> Self {
        let pi = Int::from(p);
        let coeffs = f
            .coeffs()
            .iter()
            .map(|c| {
                let r = c % &pi;
                let r = if r.is_negative() { r + &pi } else { r };
                u64::try_from(r).expect("residue fits in u64")
            })
            .collect();
        PolyModP::new(p, coeffs)
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    pub fn lc(&self) -> u64 {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn is_monic(&self) -> bool {
        self.lc() == 1
    }

    fn same_p(&self, other: &PolyModP) -> Result<()> {
        if self.p != other.p {
            return Err(Error::Shape(format!(
                "mixed moduli {} and {}",
                self.p, other.p
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &PolyModP) -> PolyModP {
        debug_assert_eq!(self.p, other.p);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push((self.coeff(i) + other.coeff(i)) % self.p);
        }
        PolyModP::new(self.p, out)
    }

    pub fn sub(&self, other: &PolyModP) -> PolyModP {
        debug_assert_eq!(self.p, other.p);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push((self.coeff(i) + self.p - other.coeff(i)) % self.p);
        }
        PolyModP::new(self.p, out)
    }

    pub fn mul(&self, other: &PolyModP) -> PolyModP {
        debug_assert_eq!(self.p, other.p);
        if self.is_zero() || other.is_zero() {
            return PolyModP::zero(self.p);
        }
        let mut out = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + (a as u128) * (b as u128)) % self.p as u128;
            }
        }
        PolyModP::new(self.p, out.into_iter().map(|c| c as u64).collect())
    }

    pub fn scale(&self, c: u64) -> PolyModP {
        let c = c % self.p;
        PolyModP::new(
            self.p,
            self.coeffs
                .iter()
                .map(|&a| ((a as u128 * c as u128) % self.p as u128) as u64)
                .collect(),
        )
    }

    pub fn monic(&self) -> PolyModP {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(mod_inv(self.lc(), self.p))
    }

    /// Euclidean division: (q, r) with self = q * div + r, deg r < deg div.
    pub fn divrem(&self, div: &PolyModP) -> Result<(PolyModP, PolyModP)> {
        self.same_p(div)?;
        if div.is_zero() {
            return Err(Error::ZeroPolynomial("division by zero mod p".into()));
        }
        let p = self.p;
        let dn = div.deg();
        let inv_lc = mod_inv(div.lc(), p);
        let mut rem = self.coeffs.clone();
        if rem.len() <= dn {
            return Ok((PolyModP::zero(p), self.clone()));
        }
        let qlen = rem.len() - dn;
        let mut q = vec![0u64; qlen];
        for i in (0..qlen).rev() {
            let c = ((rem[i + dn] as u128 * inv_lc as u128) % p as u128) as u64;
            if c == 0 {
                continue;
            }
            q[i] = c;
            for (j, &dc) in div.coeffs.iter().enumerate() {
                let sub = (c as u128 * dc as u128) % p as u128;
                rem[i + j] = ((rem[i + j] as u128 + p as u128 - sub) % p as u128) as u64;
            }
        }
        Ok((PolyModP::new(p, q), PolyModP::new(p, rem[..dn].to_vec())))
    }

    pub fn rem(&self, div: &PolyModP) -> Result<PolyModP> {
        Ok(self.divrem(div)?.1)
    }

    pub fn gcd(&self, other: &PolyModP) -> Result<PolyModP> {
        self.same_p(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn derivative(&self) -> PolyModP {
        if self.coeffs.len() <= 1 {
            return PolyModP::zero(self.p);
        }
        PolyModP::new(
            self.p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| ((c as u128 * (i as u128 % self.p as u128)) % self.p as u128) as u64)
                .collect(),
        )
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p as u128;
        let x = x as u128 % p;
        let mut acc: u128 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = (acc * x + c as u128) % p;
        }
        acc as u64
    }

    /// self^e mod (modulus polynomial), by repeated squaring.
    pub fn powmod(&self, e: &Int, modulus: &PolyModP) -> Result<PolyModP> {
        self.same_p(modulus)?;
        let mut base = self.rem(modulus)?;
        let mut acc = PolyModP::one(self.p);
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = acc.mul(&base).rem(modulus)?;
            }
            if i + 1 < bits {
                base = base.mul(&base).rem(modulus)?;
            }
        }
        Ok(acc)
    }

    /// The reverse (t^deg * f(1/t)).
    pub fn reverse(&self) -> PolyModP {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        PolyModP::new(self.p, coeffs)
    }

    /// True if f is proportional to its reverse (closed under t -> 1/t).
    pub fn is_symmetric_up_to_unit(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        let m = self.monic();
        let r = self.reverse();
        if r.is_zero() || r.deg() != m.deg() {
            // Constant term zero: t divides f; t is not symmetric.
            return false;
        }
        r.monic() == m
    }

    /// Lift to an integer polynomial with coefficients in [0, p).
    pub fn lift_nonneg(&self) -> IntPoly {
        IntPoly::from_coeffs(self.coeffs.iter().map(|&c| Int::from(c)).collect())
    }
}

impl std::fmt::Display for PolyModP {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.lift_nonneg())
    }
}

pub fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p.
    let mut e = p - 2;
    let mut base = a as u128 % p as u128;
    let mut acc: u128 = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    acc as u64
}

/// Factorization over F_p: f = unit * prod factors_i ^ multiplicity_i with
/// each factor monic irreducible; factors sorted by (degree, coefficients).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPFactorization {
    pub p: u64,
    pub unit: u64,
    pub factors: Vec<(PolyModP, u32)>,
}

impl ModPFactorization {
    /// Multiply everything back together (for verification).
    pub fn expand(&self) -> PolyModP {
        let mut acc = PolyModP::constant(self.p, self.unit);
        for (f, e) in &self.factors {
            for _ in 0..*e {
                acc = acc.mul(f);
            }
        }
        acc
    }
}

impl std::fmt::Display for ModPFactorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.unit != 1 {
            write!(f, "{}", self.unit)?;
        }
        for (i, (g, e)) in self.factors.iter().enumerate() {
            if i > 0 || self.unit != 1 {
                write!(f, " * ")?;
            }
            write!(f, "({g})")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if self.factors.is_empty() && self.unit == 1 {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Factor an integer polynomial modulo an odd-or-even prime p < 2^31.
/// If p divides the content of f, the p-power content is stripped first; if
/// f reduces to zero even then, an error is returned.
pub fn factor_mod_p(f: &IntPoly, p: u64) -> Result<ModPFactorization> {
    if !(2..(1 << 31)).contains(&p) || !is_prime(&Int::from(p)) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("factor_mod_p(0)".into()));
    }
    // Strip integer p-content so inputs like p*f are usable.
    let pi = Int::from(p);
    let mut g = f.clone();
    loop {
        let red = PolyModP::from_int_poly(&g, p);
        if !red.is_zero() {
            break;
        }
        let coeffs: Vec<Int> = g.coeffs().iter().map(|c| c / &pi).collect();
        g = IntPoly::from_coeffs(coeffs);
        if g.is_zero() {
            return Err(Error::ZeroPolynomial(format!(
                "polynomial is 0 mod {p} at every p-power"
            )));
        }
    }
    let fp = PolyModP::from_int_poly(&g, p);
    factor_poly_mod_p(&fp)
}

/// Factor a nonzero polynomial over F_p.
pub fn factor_poly_mod_p(fp: &PolyModP) -> Result<ModPFactorization> {
    let p = fp.modulus();
    if fp.is_zero() {
        return Err(Error::ZeroPolynomial("factor of zero mod p".into()));
    }
    let unit = fp.lc();
    let mut work = fp.monic();
    let mut factors: Vec<(PolyModP, u32)> = Vec::new();

    // Extract powers of t.
    let mut tk = 0u32;
    while !work.is_zero() && work.coeff(0) == 0 && work.deg() >= 1 {
        work = work.divrem(&PolyModP::t(p))?.0;
        tk += 1;
    }
    if tk > 0 {
        factors.push((PolyModP::t(p), tk));
    }

    if work.deg() >= 1 {
        for (g, mult) in squarefree_decomposition_modp(&work)? {
            for h in factor_squarefree_modp(&g)? {
                factors.push((h, mult));
            }
        }
    }

    // Merge duplicates (cannot happen for coprime squarefree parts, but be
    // safe), then sort canonically.
    let mut merged: Vec<(PolyModP, u32)> = Vec::new();
    for (g, e) in factors {
        if let Some(entry) = merged.iter_mut().find(|(h, _)| *h == g) {
            entry.1 += e;
        } else {
            merged.push((g, e));
        }
    }
    merged.sort_by(|a, b| {
        a.0.deg()
            .cmp(&b.0.deg())
            .then_with(|| a.0.coeffs().cmp(b.0.coeffs()))
    });
    let result = ModPFactorization {
        p,
        unit,
        factors: merged,
    };
    debug_assert_eq!(result.expand(), *fp);
    Ok(result)
}

/// Squarefree decomposition in characteristic p: returns (g_i, e_i) with
/// f = prod g_i^{e_i}, each g_i monic squarefree, e_i distinct.
fn squarefree_decomposition_modp(f: &PolyModP) -> Result<Vec<(PolyModP, u32)>> {
    let p = f.modulus();
    let mut out: Vec<(PolyModP, u32)> = Vec::new();
    let f = f.monic();
    if f.deg() == 0 {
        return Ok(out);
    }
    let fp = f.derivative();
    if fp.is_zero() {
        // f = g(t^p) = (g2(t))^p where g2 takes every p-th coefficient
        // (Frobenius: in F_p, c^(1/p) = c).
        let mut cs = Vec::new();
        let mut i = 0usize;
        while i < f.coeffs().len() {
            cs.push(f.coeff(i));
            i += p as usize;
        }
        let g2 = PolyModP::new(p, cs);
        for (h, e) in squarefree_decomposition_modp(&g2)? {
            out.push((h, e * p as u32));
        }
        return Ok(out);
    }
    let a0 = f.gcd(&fp)?;
    let mut b = f.divrem(&a0)?.0;
    let mut c = fp.divrem(&a0)?.0;
    let mut i = 1u32;
    // Yun in char p: stops early at p-th power part.
    while b.deg() >= 1 {
        let d = c.sub(&b.derivative());
        let g = b.gcd(&d)?;
        if g.deg() >= 1 {
            out.push((g.clone(), i));
        }
        b = b.divrem(&g)?.0;
        c = d.divrem(&g)?.0;
        i += 1;
        if i as u64 > 2 * (f.deg() as u64) + 2 {
            return Err(Error::Inconsistency(
                "squarefree decomposition mod p did not terminate".into(),
            ));
        }
    }
    // Whatever part had derivative-killed multiplicities sits in f / expand.
    let mut expanded = PolyModP::one(p);
    for (g, e) in &out {
        for _ in 0..*e {
            expanded = expanded.mul(g);
        }
    }
    let rest = f.divrem(&expanded)?.0.monic();
    if rest.deg() >= 1 {
        // rest is a p-th power.
        for (h, e) in squarefree_decomposition_modp(&rest)? {
            if let Some(entry) = out.iter_mut().find(|(g, _)| *g == h) {
                entry.1 += e;
            } else {
                out.push((h, e));
            }
        }
    }
    Ok(out)
}

/// Deterministic pseudo-random generator for splitting attempts.
struct SplitRng {
    state: u64,
}

impl SplitRng {
    fn new(seed: u64) -> Self {
        SplitRng {
            state: seed ^ 0x9E3779B97F4A7C15,
        }
    }
    fn next(&mut self) -> u64 {
        // SplitMix64.
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }
    fn poly(&mut self, p: u64, deg_below: usize) -> PolyModP {
        let coeffs = (0..deg_below).map(|_| self.next() % p).collect();
        PolyModP::new(p, coeffs)
    }
}

/// Factor a monic squarefree polynomial over F_p into monic irreducibles.
fn factor_squarefree_modp(f: &PolyModP) -> Result<Vec<PolyModP>> {
    let p = f.modulus();
    if f.deg() == 0 {
        return Ok(vec![]);
    }
    if f.deg() == 1 {
        return Ok(vec![f.monic()]);
    }
    // Distinct-degree decomposition.
    let mut out = Vec::new();
    let mut work = f.monic();
    let mut d = 1usize;
    // x^(p^d) mod work, updated incrementally.
    let mut xq = PolyModP::t(p).powmod(&Int::from(p), &work)?;
    loop {
        if work.deg() == 0 {
            break;
        }
        if d > work.deg() / 2 {
            out.push(work.clone());
            break;
        }
        let splitter = xq.sub(&PolyModP::t(p)).rem(&work)?;
        let g = work.gcd(&splitter)?;
        if g.deg() >= 1 {
            // g is a product of irreducibles all of degree d.
            equal_degree_split(&g, d, &mut out)?;
            work = work.divrem(&g)?.0.monic();
            xq = xq.rem(&work)?;
        }
        d += 1;
        if work.deg() == 0 {
            break;
        }
        xq = xq.powmod(&Int::from(p), &work)?;
    }
    Ok(out)
}

/// Cantor-Zassenhaus equal-degree splitting: g is monic squarefree, all of
/// whose irreducible factors have degree d. Appends them to out.
fn equal_degree_split(g: &PolyModP, d: usize, out: &mut Vec<PolyModP>) -> Result<()> {
    let p = g.modulus();
    if g.deg() == d {
        out.push(g.monic());
        return Ok(());
    }
    let mut rng = SplitRng::new(0xA1C0_C0DE ^ (p << 8) ^ g.deg() as u64);
    loop {
        let a = rng.poly(p, g.deg());
        if a.is_zero() || a.degree() == Some(0) {
            continue;
        }
        let h = if p == 2 {
            // Trace map: a + a^2 + a^4 + ... + a^(2^(d-1)) mod g.
            let mut acc = a.clone().rem(g)?;
            let mut cur = a.clone().rem(g)?;
            for _ in 1..d {
                cur = cur.mul(&cur).rem(g)?;
                acc = acc.add(&cur);
            }
            acc
        } else {
            // a^((p^d - 1)/2) - 1 mod g.
            let e = (Int::from(p).pow(d as u32) - 1) / 2;
            let pw = a.powmod(&e, g)?;
            pw.sub(&PolyModP::one(p))
        };
        if h.is_zero() {
            continue;
        }
        let split = g.gcd(&h)?;
        if split.deg() >= 1 && split.deg() < g.deg() {
            let other = g.divrem(&split)?.0.monic();
            equal_degree_split(&split, d, out)?;
            equal_degree_split(&other, d, out)?;
            return Ok(());
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
    fn divrem_and_gcd() {
        let p = 7;
        let f = PolyModP::new(p, vec![1, 0, 1]).mul(&PolyModP::new(p, vec![3, 1]));
        let (q, r) = f.divrem(&PolyModP::new(p, vec![3, 1])).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, PolyModP::new(p, vec![1, 0, 1]));
        let g = f.gcd(&PolyModP::new(p, vec![3, 1])).unwrap();
        assert_eq!(g, PolyModP::new(p, vec![3, 1]));
    }

    #[test]
    fn factor_mod3_of_deg8_example() {
        // [1,3,5,7,8,7,5,3,1] mod 3 factors as
        // (t+1)^2 (t^2+1) (t^4+t^3+t^2+t+1), unit 1.
        let f = ip(&[1, 3, 5, 7, 8, 7, 5, 3, 1]);
        let fac = factor_mod_p(&f, 3).unwrap();
        assert_eq!(fac.unit, 1);
        let expected = vec![
            (PolyModP::new(3, vec![1, 1]), 2),
            (PolyModP::new(3, vec![1, 0, 1]), 1),
            (PolyModP::new(3, vec![1, 1, 1, 1, 1]), 1),
        ];
        assert_eq!(fac.factors, expected);
    }

    #[test]
    fn factor_mod3_with_unit_2() {
        // [8,28,48,60,58,42,24,10,2] mod 3 = 2(1+t)^2(2+t+t^2+t^3)(2+2t+2t^2+t^3)
        let f = ip(&[8, 28, 48, 60, 58, 42, 24, 10, 2]);
        let fac = factor_mod_p(&f, 3).unwrap();
        assert_eq!(fac.unit, 2);
        let expected = vec![
            (PolyModP::new(3, vec![1, 1]), 2),
            (PolyModP::new(3, vec![2, 1, 1, 1]), 1),
            (PolyModP::new(3, vec![2, 2, 2, 1]), 1),
        ];
        assert_eq!(fac.factors, expected);
        assert_eq!(fac.expand(), PolyModP::from_int_poly(&f, 3));
    }

    #[test]
    fn factor_mod3_of_12n525_alexander() {
        // (1+t)^4 (1+t^2) mod 3.
        let f = ip(&[1, -8, 28, -43, 28, -8, 1]);
        let fac = factor_mod_p(&f, 3).unwrap();
        assert_eq!(fac.unit, 1);
        let expected = vec![
            (PolyModP::new(3, vec![1, 1]), 4),
            (PolyModP::new(3, vec![1, 0, 1]), 1),
        ];
        assert_eq!(fac.factors, expected);
    }

    #[test]
    fn factor_mod2_uses_trace_splitting() {
        // t^2 + t = t(t+1) mod 2 and a degree-4 squarefree product.
        let f = ip(&[0, 1, 1]);
        let fac = factor_mod_p(&f, 2).unwrap();
        assert_eq!(fac.factors.len(), 2);
        // (t^2+t+1)(t+1) mod 2.
        let f = ip(&[1, 0, 0, 1]); // t^3 + 1 = (t+1)(t^2+t+1) mod 2
        let fac = factor_mod_p(&f, 2).unwrap();
        let expected = vec![
            (PolyModP::new(2, vec![1, 1]), 1),
            (PolyModP::new(2, vec![1, 1, 1]), 1),
        ];
        assert_eq!(fac.factors, expected);
    }

    #[test]
    fn p_content_is_stripped() {
        let f = ip(&[3, 6, 3]);
        let fac = factor_mod_p(&f, 3).unwrap();
        // 3(1 + 2t + t^2): after stripping, (t+1)^2 mod 3.
        assert_eq!(fac.factors, vec![(PolyModP::new(3, vec![1, 1]), 2)]);
    }

    #[test]
    fn symmetric_up_to_unit() {
        assert!(PolyModP::new(3, vec![1, 0, 1]).is_symmetric_up_to_unit());
        assert!(!PolyModP::new(3, vec![2, 2, 2, 1]).is_symmetric_up_to_unit());
        // 2 + t + t^2 + t^3 reversed is 1 + t + t^2 + 2t^3 = 2*(2+2t+2t^2+t^3):
        // not proportional to itself, so asymmetric.
        assert!(!PolyModP::new(3, vec![2, 1, 1, 1]).is_symmetric_up_to_unit());
        assert!(PolyModP::new(5, vec![3, 1, 3]).is_symmetric_up_to_unit());
    }

    #[test]
    fn frobenius_power_squarefree_decomposition() {
        // (t+1)^3 mod 3 has zero derivative handling via p-th powers.
        let f = PolyModP::new(3, vec![1, 1]);
        let cube = f.mul(&f).mul(&f);
        let parts = squarefree_decomposition_modp(&cube).unwrap();
        assert_eq!(parts, vec![(PolyModP::new(3, vec![1, 1]), 3)]);
    }

    #[test]
    fn high_multiplicity_mixed() {
        // (t+1)^4 (t^2+1) mod 3.
        let lin = PolyModP::new(3, vec![1, 1]);
        let quad = PolyModP::new(3, vec![1, 0, 1]);
        let f = lin.mul(&lin).mul(&lin).mul(&lin).mul(&quad);
        let fac = factor_poly_mod_p(&f).unwrap();
        assert_eq!(
            fac.factors,
            vec![(lin.clone(), 4), (quad.clone(), 1)]
        );
    }
}
