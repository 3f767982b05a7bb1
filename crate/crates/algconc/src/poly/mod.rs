//! Exact integer/rational polynomial arithmetic: Alexander polynomials,
//! symmetry tests, gcd/squarefree machinery, resultants and discriminants,
//! factorization over Z (see [`factor`]), factorization mod p (see [`modp`]),
//! the trace-polynomial substitution, and Sturm root isolation.

pub mod factor;
mod hensel;
pub mod modp;
mod sturm;

pub use factor::{factor_over_z, Factorization};
pub use hensel::{hensel_lift_monic, poly_mod};
pub use modp::{factor_mod_p, ModPFactorization, PolyModP};
pub use sturm::{sturm_isolate, sturm_root_count, IsolatingInterval};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::Int;
use crate::error::{Error, Result};
use crate::linalg::{IntMat, Rat, RatMat};

/// Dense integer polynomial; coefficient of t^i at index i; no trailing
/// zeros; the zero polynomial has an empty coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<Int>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        IntPoly {
            coeffs: vec![Int::one()],
        }
    }

    pub fn constant(c: Int) -> Self {
        IntPoly::from_coeffs(vec![c])
    }

    /// t^k
    pub fn t_power(k: usize) -> Self {
        let mut coeffs = vec![Int::zero(); k + 1];
        coeffs[k] = Int::one();
        IntPoly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<Int>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    /// Constant coefficient first.
    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::from_coeffs(coeffs.iter().map(|&c| Int::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Int {
        self.coeffs.get(i).cloned().unwrap_or_else(Int::zero)
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

    /// Degree of a polynomial known to be nonzero.
    pub fn deg(&self) -> usize {
        self.degree().expect("degree of the zero polynomial")
    }

    pub fn lc(&self) -> Int {
        self.coeffs.last().cloned().unwrap_or_else(Int::zero)
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        IntPoly::from_coeffs(out)
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - other.coeff(i));
        }
        IntPoly::from_coeffs(out)
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![Int::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(out)
    }

    pub fn scale(&self, c: &Int) -> IntPoly {
        if c.is_zero() {
            return IntPoly::zero();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        let mut acc = IntPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval_int(&self, x: &Int) -> Int {
        let mut acc = Int::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rat(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Rat::from_integer(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        IntPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Int::from(i))
                .collect(),
        )
    }

    /// t^deg * f(1/t): the coefficient-reversed polynomial.
    pub fn reverse(&self) -> IntPoly {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        IntPoly::from_coeffs(coeffs)
    }

    /// +1 if f(t) = +t^deg f(1/t), -1 if f(t) = -t^deg f(1/t), else None.
    /// (The zero polynomial reports None.)
    pub fn symmetry(&self) -> Option<i8> {
        if self.is_zero() {
            return None;
        }
        let rev = self.reverse();
        if *self == rev {
            Some(1)
        } else if *self == rev.neg() {
            Some(-1)
        } else {
            None
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetry() == Some(1)
    }

    /// Positive gcd of all coefficients (0 for the zero polynomial).
    pub fn content(&self) -> Int {
        let mut g = Int::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    /// f = unit * pp with pp primitive of positive leading coefficient and
    /// unit a rational constant (here an integer with sign). Zero input is
    /// rejected.
    pub fn primitive_normalized(&self) -> Result<(IntPoly, Rat)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial(
                "primitive part of the zero polynomial".into(),
            ));
        }
        let mut c = self.content();
        if self.lc().is_negative() {
            c = -c;
        }
        let pp = IntPoly {
            coeffs: self.coeffs.iter().map(|a| a / &c).collect(),
        };
        Ok((pp, Rat::from_integer(c)))
    }

    /// Rational division: self = q * div + r with deg r < deg div.
    /// Polynomial division over Q: (quotient, remainder) as rational
    /// coefficient lists (constant first, untrimmed remainder of length
    /// deg(div)).
    pub fn divrem_rat(&self, div: &IntPoly) -> Result<(Vec<Rat>, Vec<Rat>)> {
        if div.is_zero() {
            return Err(Error::ZeroPolynomial("division by zero polynomial".into()));
        }
        let dn = div.deg();
        let dl = Rat::from_integer(div.lc());
        let mut rem: Vec<Rat> = self
            .coeffs
            .iter()
            .map(|c| Rat::from_integer(c.clone()))
            .collect();
        if rem.len() <= dn {
            return Ok((vec![], rem));
        }
        let qlen = rem.len() - dn;
        let mut q = vec![Rat::zero(); qlen];
        for i in (0..qlen).rev() {
            let c = &rem[i + dn] / &dl;
            if c.is_zero() {
                continue;
            }
            q[i] = c.clone();
            for (j, dcoef) in div.coeffs.iter().enumerate() {
                let sub = &c * Rat::from_integer(dcoef.clone());
                rem[i + j] -= sub;
            }
        }
        rem.truncate(dn.max(1));
        Ok((q, rem))
    }

    /// Exact division over Z: Some(q) iff self = q * div with q integral.
    pub fn div_exact(&self, div: &IntPoly) -> Option<IntPoly> {
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if div.is_zero() {
            return None;
        }
        let (q, r) = self.divrem_rat(div).ok()?;
        if !r.iter().all(|x| x.is_zero()) {
            return None;
        }
        let ints: Option<Vec<Int>> = q
            .iter()
            .map(|x| if x.is_integer() { Some(x.to_integer()) } else { None })
            .collect();
        Some(IntPoly::from_coeffs(ints?))
    }

    /// Primitive gcd with positive leading coefficient (Euclid over Q with
    /// primitive reduction at each step).
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let mut a = match self.primitive_normalized() {
            Ok((p, _)) => p,
            Err(_) => {
                return match other.primitive_normalized() {
                    Ok((p, _)) => p,
                    Err(_) => IntPoly::zero(),
                }
            }
        };
        let mut b = match other.primitive_normalized() {
            Ok((p, _)) => p,
            Err(_) => return a,
        };
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            if b.is_zero() {
                return a;
            }
            // Pseudo-remainder keeps everything integral.
            if a.deg() < b.deg() {
                std::mem::swap(&mut a, &mut b);
                continue;
            }
            let r = pseudo_rem(&a, &b);
            a = b;
            b = match r.primitive_normalized() {
                Ok((p, _)) => p,
                Err(_) => IntPoly::zero(),
            };
        }
    }

    /// Squarefree decomposition by Yun's algorithm: returns (g_i, i) with
    /// self = unit * prod g_i^i, the g_i squarefree, pairwise coprime,
    /// primitive with positive leading coefficient. Constant g_i are omitted.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(IntPoly, u32)>> {
        let (f, _) = self.primitive_normalized()?;
        if f.deg() == 0 {
            return Ok(vec![]);
        }
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut out = Vec::new();
        if a0.deg() == 0 {
            return Ok(vec![(f, 1)]);
        }
        let mut b = f.div_exact(&a0).expect("gcd divides");
        let mut c = fp.div_exact(&a0).expect("gcd divides derivative");
        let mut i = 1u32;
        loop {
            let d = c.sub(&b.derivative());
            if d.is_zero() {
                if b.deg() >= 1 {
                    out.push((normalize_pp(&b), i));
                }
                break;
            }
            let g = b.gcd(&d);
            if g.deg() >= 1 {
                out.push((normalize_pp(&g), i));
            }
            b = b.div_exact(&g).expect("Yun: g divides b");
            c = d.div_exact(&g).expect("Yun: g divides d");
            i += 1;
            if b.deg() == 0 {
                break;
            }
        }
        Ok(out)
    }

    /// Product of the distinct irreducible factors (primitive, positive lc).
    pub fn radical(&self) -> Result<IntPoly> {
        let parts = self.squarefree_decomposition()?;
        let mut out = IntPoly::one();
        for (g, _) in parts {
            out = out.mul(&g);
        }
        Ok(out)
    }

    /// Resultant Res(self, other) via the Sylvester matrix and a
    /// fraction-free determinant.
    pub fn resultant(&self, other: &IntPoly) -> Result<Int> {
        if self.is_zero() || other.is_zero() {
            return Ok(Int::zero());
        }
        let m = self.deg();
        let n = other.deg();
        if m == 0 {
            return Ok(self.lc().pow(n as u32));
        }
        if n == 0 {
            return Ok(other.lc().pow(m as u32));
        }
        let size = m + n;
        let mut s = IntMat::zeros(size, size);
        for row in 0..n {
            for (i, c) in self.coeffs.iter().enumerate() {
                s[(row, row + m - i)] = c.clone();
            }
        }
        for row in 0..m {
            for (i, c) in other.coeffs.iter().enumerate() {
                s[(n + row, row + n - i)] = c.clone();
            }
        }
        s.det()
    }

    /// Discriminant: (-1)^{n(n-1)/2} Res(f, f') / lc(f), exact.
    pub fn discriminant(&self) -> Result<Int> {
        let n = self
            .degree()
            .ok_or_else(|| Error::ZeroPolynomial("discriminant of zero".into()))?;
        if n == 0 {
            return Err(Error::ZeroPolynomial(
                "discriminant of a constant".into(),
            ));
        }
        if n == 1 {
            return Ok(Int::one());
        }
        let res = self.resultant(&self.derivative())?;
        let lc = self.lc();
        let (q, r) = res.div_rem(&lc);
        if !r.is_zero() {
            return Err(Error::Inconsistency(format!(
                "lc does not divide Res(f, f'): {res} / {lc}"
            )));
        }
        Ok(if (n * (n - 1) / 2) % 2 == 1 { -q } else { q })
    }

    /// For a palindromic polynomial f of even degree 2g, the unique P with
    /// f(t) = t^g P(t + 1/t). Requires f(t) = +t^{2g} f(1/t).
    pub fn trace_poly(&self) -> Result<IntPoly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial("trace polynomial of zero".into()));
        }
        if self.symmetry() != Some(1) {
            return Err(Error::NotSymmetric(format!("{self}")));
        }
        let n = self.deg();
        if !n.is_multiple_of(2) {
            return Err(Error::NotSymmetric(format!(
                "odd degree {n} cannot be palindromic of even degree"
            )));
        }
        let g = n / 2;
        // f / t^g = a_g + sum_{k>=1} a_{g+k} (t^k + t^-k) and
        // t^k + t^-k = C_k(y) with C_0 = 2, C_1 = y, C_k = y C_{k-1} - C_{k-2}.
        let y = IntPoly::t_power(1);
        let mut c_prev = IntPoly::constant(Int::from(2)); // C_0
        let mut c_cur = y.clone(); // C_1
        let mut p = IntPoly::constant(self.coeff(g));
        for k in 1..=g {
            let ck = if k == 1 {
                c_cur.clone()
            } else {
                let next = y.mul(&c_cur).sub(&c_prev);
                c_prev = std::mem::replace(&mut c_cur, next);
                c_cur.clone()
            };
            p = p.add(&ck.scale(&self.coeff(g + k)));
        }
        // Sanity: degree g, leading coefficient preserved.
        debug_assert_eq!(p.deg(), g);
        debug_assert_eq!(p.lc(), self.lc());
        Ok(p)
    }

    /// Substitute t -> -t.
    pub fn subst_neg(&self) -> IntPoly {
        IntPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }
}

fn normalize_pp(f: &IntPoly) -> IntPoly {
    f.primitive_normalized().map(|(p, _)| p).unwrap_or_else(|_| IntPoly::zero())
}

/// Pseudo-remainder of a by b (a already pre-scaled by the caller as needed).
fn pseudo_rem(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut r = a.coeffs.clone();
    let db = b.deg();
    let lb = b.lc();
    while r.len() > db {
        let lead = r.last().unwrap().clone();
        if lead.is_zero() {
            r.pop();
            continue;
        }
        // r = r * lb - lead * t^(dr-db) * b  (keeps everything integral)
        let dr = r.len() - 1;
        for c in r.iter_mut() {
            *c *= &lb;
        }
        for (i, c) in b.coeffs.iter().enumerate() {
            r[dr - db + i] -= &lead * c;
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
        if r.is_empty() {
            break;
        }
    }
    IntPoly::from_coeffs(r)
}

impl std::fmt::Display for IntPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}")?;
                    }
                    if i == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Seifert-matrix polynomials
// ---------------------------------------------------------------------------

/// det(V - t V^t), computed exactly by interpolation at integer nodes.
/// No normalization is applied.
pub fn alexander_poly(v: &IntMat) -> Result<IntPoly> {
    if !v.is_square() {
        return Err(Error::Shape("Alexander polynomial of non-square matrix".into()));
    }
    let n = v.rows();
    if n == 0 {
        return Ok(IntPoly::one());
    }
    let vt = v.transpose();
    // Degree <= n, so n+1 nodes suffice.
    let nodes: Vec<Int> = (0..=n as i64).map(Int::from).collect();
    let mut values = Vec::with_capacity(nodes.len());
    for k in &nodes {
        let mut mk = IntMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                mk[(i, j)] = &v[(i, j)] - k * &vt[(i, j)];
            }
        }
        values.push(mk.det()?);
    }
    // Lagrange interpolation over Q; the result is integral.
    let mut acc = vec![Rat::zero(); n + 1];
    for (i, xi) in nodes.iter().enumerate() {
        // Basis polynomial prod_{j != i} (t - x_j) / (x_i - x_j)
        let mut num = vec![Rat::one()];
        let mut denom = Rat::one();
        for (j, xj) in nodes.iter().enumerate() {
            if i == j {
                continue;
            }
            // num *= (t - xj)
            let mut next = vec![Rat::zero(); num.len() + 1];
            for (k, c) in num.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * Rat::from_integer(xj.clone());
            }
            num = next;
            denom *= Rat::from_integer(xi - xj);
        }
        let w = Rat::from_integer(values[i].clone()) / denom;
        for (k, c) in num.iter().enumerate() {
            acc[k] += c * &w;
        }
    }
    let ints: Option<Vec<Int>> = acc
        .iter()
        .map(|x| if x.is_integer() { Some(x.to_integer()) } else { None })
        .collect();
    let ints = ints.ok_or_else(|| {
        Error::Inconsistency("interpolated Alexander polynomial is not integral".into())
    })?;
    Ok(IntPoly::from_coeffs(ints))
}

/// Characteristic polynomial of T = V^{-t} ... reported as the primitive
/// integer polynomial with positive leading coefficient proportional to
/// det(tI - V^{-1}V^t); equals the Alexander polynomial up to a unit.
/// Requires det(V) != 0.
pub fn char_poly_t(v: &IntMat) -> Result<IntPoly> {
    if v.det()?.is_zero() {
        return Err(Error::SingularSeifert);
    }
    let (pp, _) = alexander_poly(v)?.primitive_normalized()?;
    Ok(pp)
}

/// Evaluate a polynomial with integer coefficients at a rational matrix.
pub fn poly_at_matrix(f: &IntPoly, m: &RatMat) -> Result<RatMat> {
    let coeffs: Vec<Rat> = f
        .coeffs()
        .iter()
        .map(|c| Rat::from_integer(c.clone()))
        .collect();
    m.poly_eval(&coeffs)
}
