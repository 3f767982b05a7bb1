//! Exact arithmetic in real quadratic extensions Q(sqrt(d)) and signatures
//! of symmetric matrices over them.
//!
//! Used to evaluate signatures at algebraic points on the unit circle: with
//! omega = c + i*s, s = sqrt(1 - c^2), the Hermitian form H(omega) doubles to
//! a real symmetric form over Q(sqrt(d)) where d is the squarefree part of
//! 1 - c^2.

use num_traits::{One, Signed, Zero};

use crate::arith::{squarefree_part, Int};
use crate::error::{Error, Result};
use crate::linalg::Rat;

/// An element a + b*sqrt(d) of Q(sqrt(d)), d a squarefree positive integer.
/// d = 1 is the degenerate (rational) case, kept normalized with b = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadExt {
    a: Rat,
    b: Rat,
    d: Int,
}

impl QuadExt {
    pub fn new(a: Rat, b: Rat, d: Int) -> Result<Self> {
        if !d.is_positive() {
            return Err(Error::InvalidForm(format!(
                "Q(sqrt(d)) needs positive d, got {d}"
            )));
        }
        if squarefree_part(&d)? != d {
            return Err(Error::InvalidForm(format!("d = {d} is not squarefree")));
        }
        if d.is_one() {
            return Ok(QuadExt {
                a: a + b,
                b: Rat::zero(),
                d,
            });
        }
        Ok(QuadExt { a, b, d })
    }

    pub fn from_rat(a: Rat, d: Int) -> Result<Self> {
        QuadExt::new(a, Rat::zero(), d)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn check_same_field(&self, other: &QuadExt) -> Result<()> {
        if self.d != other.d {
            return Err(Error::InvalidForm(format!(
                "mixed fields Q(sqrt({})) and Q(sqrt({}))",
                self.d, other.d
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &QuadExt) -> Result<QuadExt> {
        self.check_same_field(other)?;
        Ok(QuadExt {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            d: self.d.clone(),
        })
    }

    pub fn sub(&self, other: &QuadExt) -> Result<QuadExt> {
        self.check_same_field(other)?;
        Ok(QuadExt {
            a: &self.a - &other.a,
            b: &self.b - &other.b,
            d: self.d.clone(),
        })
    }

    pub fn mul(&self, other: &QuadExt) -> Result<QuadExt> {
        self.check_same_field(other)?;
        let d = Rat::from_integer(self.d.clone());
        Ok(QuadExt {
            a: &self.a * &other.a + &self.b * &other.b * &d,
            b: &self.a * &other.b + &self.b * &other.a,
            d: self.d.clone(),
        })
    }

    pub fn neg(&self) -> QuadExt {
        QuadExt {
            a: -self.a.clone(),
            b: -self.b.clone(),
            d: self.d.clone(),
        }
    }

    /// (a + b sqrt d)^{-1} = (a - b sqrt d) / (a^2 - b^2 d); the norm is
    /// nonzero for nonzero elements because d is squarefree (irrational
    /// sqrt) or d = 1 with b = 0.
    pub fn inverse(&self) -> Result<QuadExt> {
        if self.is_zero() {
            return Err(Error::Singular("inverse of zero in Q(sqrt(d))".into()));
        }
        let d = Rat::from_integer(self.d.clone());
        let norm = &self.a * &self.a - &self.b * &self.b * &d;
        if norm.is_zero() {
            return Err(Error::Inconsistency(format!(
                "norm of nonzero element vanished: d = {} is not squarefree?",
                self.d
            )));
        }
        Ok(QuadExt {
            a: &self.a / &norm,
            b: -(&self.b / &norm),
            d: self.d.clone(),
        })
    }

    pub fn div(&self, other: &QuadExt) -> Result<QuadExt> {
        self.mul(&other.inverse()?)
    }

    /// Sign of the real number a + b*sqrt(d) (sqrt(d) > 0): -1, 0, or +1.
    pub fn sign(&self) -> i32 {
        if self.b.is_zero() {
            return sign_rat(&self.a);
        }
        if self.a.is_zero() {
            return sign_rat(&self.b);
        }
        let sa = sign_rat(&self.a);
        let sb = sign_rat(&self.b);
        if sa == sb {
            return sa;
        }
        // Opposite signs: compare |a| vs |b| sqrt(d) via squares. Equality is
        // impossible for d > 1 squarefree and would mean a = b = 0 for d = 1.
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * Rat::from_integer(self.d.clone());
        match a2.cmp(&b2d) {
            std::cmp::Ordering::Greater => sa,
            std::cmp::Ordering::Less => sb,
            std::cmp::Ordering::Equal => {
                unreachable!("a^2 = d b^2 with a, b nonzero contradicts d squarefree")
            }
        }
    }
}

fn sign_rat(x: &Rat) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_negative() {
        -1
    } else {
        1
    }
}

/// Signature of a nonsingular symmetric matrix over Q(sqrt(d)), by symmetric
/// congruence elimination with exact sign evaluation of the pivots.
/// Returns an error if the matrix is singular.
pub fn signature_quadext(mat: &[Vec<QuadExt>]) -> Result<i64> {
    let n = mat.len();
    for row in mat {
        if row.len() != n {
            return Err(Error::Shape("signature of non-square matrix".into()));
        }
    }
    for (i, row) in mat.iter().enumerate() {
        for (j, entry) in row.iter().enumerate().skip(i + 1) {
            if *entry != mat[j][i] {
                return Err(Error::Shape("matrix is not symmetric".into()));
            }
        }
    }
    let mut m: Vec<Vec<QuadExt>> = mat.to_vec();

    fn sym_add(m: &mut [Vec<QuadExt>], dst: usize, src: usize, f: &QuadExt) -> Result<()> {
        let src_row = m[src].clone();
        for (entry, s) in m[dst].iter_mut().zip(&src_row) {
            *entry = entry.add(&f.mul(s)?)?;
        }
        for row in m.iter_mut() {
            let add = f.mul(&row[src])?;
            row[dst] = row[dst].add(&add)?;
        }
        Ok(())
    }
    fn sym_swap(m: &mut [Vec<QuadExt>], i: usize, j: usize) {
        if i == j {
            return;
        }
        m.swap(i, j);
        for row in m.iter_mut() {
            row.swap(i, j);
        }
    }

    let mut sig = 0i64;
    for k in 0..n {
        if m[k][k].is_zero() {
            if let Some(j) = ((k + 1)..n).find(|&j| !m[j][j].is_zero()) {
                sym_swap(&mut m, k, j);
            } else if let Some(j) = ((k + 1)..n).find(|&j| !m[k][j].is_zero()) {
                let one = QuadExt::from_rat(Rat::one(), m[k][j].d.clone())?;
                sym_add(&mut m, k, j, &one)?;
            } else {
                return Err(Error::Singular(
                    "symmetric matrix is singular; signature over Q(sqrt(d)) requires nonsingular input"
                        .into(),
                ));
            }
        }
        let pivot = m[k][k].clone();
        sig += pivot.sign() as i64;
        for i in (k + 1)..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = m[i][k].div(&pivot)?.neg();
            sym_add(&mut m, i, k, &f)?;
        }
    }
    Ok(sig)
}
