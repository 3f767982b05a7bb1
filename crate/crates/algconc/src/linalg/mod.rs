//! Exact linear algebra over Z and Q: fraction-free determinants, congruence
//! diagonalization of symmetric forms, signatures, column-space and kernel
//! bases, and unimodular basis completions.

mod quadext;

pub use quadext::{signature_quadext, QuadExt};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{squarefree_part, Int};
use crate::error::{Error, Result};

/// Rational scalar used throughout.
pub type Rat = BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

// ---------------------------------------------------------------------------
// Integer matrices
// ---------------------------------------------------------------------------

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMat {
    pub fn new(rows: usize, cols: usize, data: Vec<Int>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        Ok(IntMat { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| Int::from(x)))
            .collect();
        IntMat::new(r, c, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> IntMat {
        let mut m = IntMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn add(&self, other: &IntMat) -> Result<IntMat> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        IntMat::new(self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &IntMat) -> Result<IntMat> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        IntMat::new(self.rows, self.cols, data)
    }

    pub fn neg(&self) -> IntMat {
        IntMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul(&self, other: &IntMat) -> Result<IntMat> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut m = IntMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = &self[(i, k)] * &other[(k, j)];
                    m[(i, j)] += prod;
                }
            }
        }
        Ok(m)
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self[(i, j)] != self[(j, i)] {
                    return false;
                }
            }
        }
        true
    }

    fn check_same_shape(&self, other: &IntMat) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "shape mismatch: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// Exact determinant by the Bareiss fraction-free algorithm.
    pub fn det(&self) -> Result<Int> {
        if !self.is_square() {
            return Err(Error::Shape("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Int::one());
        }
        let mut a = self.data.clone();
        let idx = |i: usize, j: usize| i * n + j;
        let mut sign = 1i32;
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a[idx(k, k)].is_zero() {
                // Find a pivot row below.
                let mut found = None;
                for i in (k + 1)..n {
                    if !a[idx(i, k)].is_zero() {
                        found = Some(i);
                        break;
                    }
                }
                match found {
                    Some(i) => {
                        for j in 0..n {
                            a.swap(idx(k, j), idx(i, j));
                        }
                        sign = -sign;
                    }
                    None => return Ok(Int::zero()),
                }
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let num = &a[idx(i, j)] * &a[idx(k, k)] - &a[idx(i, k)] * &a[idx(k, j)];
                    // Exact division is guaranteed by Bareiss' identity.
                    a[idx(i, j)] = num / &prev;
                }
                a[idx(i, k)] = Int::zero();
            }
            prev = a[idx(k, k)].clone();
        }
        let d = a[idx(n - 1, n - 1)].clone();
        Ok(if sign < 0 { -d } else { d })
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &IntMat) -> IntMat {
        let mut m = IntMat::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    /// Delete the given row and column indices (for square excisions).
    pub fn minor_removing(&self, remove: &[usize]) -> IntMat {
        let keep: Vec<usize> = (0..self.rows).filter(|i| !remove.contains(i)).collect();
        let mut m = IntMat::zeros(keep.len(), keep.len());
        for (ai, &i) in keep.iter().enumerate() {
            for (aj, &j) in keep.iter().enumerate() {
                m[(ai, aj)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn to_rat(&self) -> RatMat {
        RatMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|x| Rat::from_integer(x.clone()))
                .collect(),
        }
    }

    /// A primitive (content-1) integer vector spanning ker(self) over Q, if
    /// the kernel is nonzero. Deterministic: first free column of the RREF.
    pub fn kernel_vector_primitive(&self) -> Option<Vec<Int>> {
        let rat = self.to_rat();
        let ker = rat.kernel_basis();
        let v = ker.first()?;
        // Clear denominators, divide by content, normalize leading sign.
        let mut lcm = Int::one();
        for x in v {
            lcm = num_integer::lcm(lcm, x.denom().clone());
        }
        let mut ints: Vec<Int> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
        let mut g = Int::zero();
        for x in &ints {
            g = num_integer::gcd(g, x.clone());
        }
        if !g.is_zero() && !g.is_one() {
            for x in &mut ints {
                *x /= &g;
            }
        }
        if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                for x in &mut ints {
                    *x = -&*x;
                }
            }
        }
        Some(ints)
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

/// Unimodular matrix U (det = +/-1) whose last column is the given primitive
/// integer vector. Built by inverting the gcd-elimination that maps v to e1.
pub fn unimodular_with_last_column(v: &[Int]) -> Result<IntMat> {
    let n = v.len();
    if n == 0 {
        return Err(Error::Shape("empty vector".into()));
    }
    let mut g = Int::zero();
    for x in v {
        g = num_integer::gcd(g, x.clone());
    }
    if !g.is_one() {
        return Err(Error::Shape(format!(
            "vector is not primitive (content {g})"
        )));
    }
    let mut w = v.to_vec();
    // winv accumulates the inverse of the row operations applied to w.
    let mut winv = IntMat::identity(n);
    // Reduce w to +/- e1 by integer row operations.
    loop {
        // Position of the entry with smallest nonzero absolute value.
        let mut piv: Option<usize> = None;
        for (i, x) in w.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            match piv {
                None => piv = Some(i),
                Some(p) => {
                    if x.abs() < w[p].abs() {
                        piv = Some(i)
                    }
                }
            }
        }
        let p = piv.expect("primitive vector cannot be zero");
        let mut done = true;
        for i in 0..n {
            if i == p || w[i].is_zero() {
                continue;
            }
            let q = Int::from(&w[i] / &w[p]); // truncated division
            if !q.is_zero() {
                let sub = &q * &w[p];
                w[i] -= sub;
                // Row op on W: row_i -= q * row_p  <=>  col op on Winv: col_p += q * col_i.
                for r in 0..n {
                    let add = &q * &winv[(r, i)];
                    winv[(r, p)] += add;
                }
            }
            if !w[i].is_zero() {
                done = false;
            }
        }
        if done && w.iter().enumerate().all(|(i, x)| i == p || x.is_zero()) {
            // Move pivot to position 0.
            if p != 0 {
                w.swap(0, p);
                for r in 0..n {
                    let tmp = winv[(r, 0)].clone();
                    winv[(r, 0)] = winv[(r, p)].clone();
                    winv[(r, p)] = tmp;
                }
            }
            if w[0].is_negative() {
                w[0] = -w[0].clone();
                for r in 0..n {
                    winv[(r, 0)] = -winv[(r, 0)].clone();
                }
            }
            debug_assert!(w[0].is_one());
            break;
        }
    }
    // Now Winv * e1 = v. Build U with columns (e2, ..., en, e1) of Winv so
    // that U * e_n = v.
    let mut u = IntMat::zeros(n, n);
    for r in 0..n {
        for c in 1..n {
            u[(r, c - 1)] = winv[(r, c)].clone();
        }
        u[(r, n - 1)] = winv[(r, 0)].clone();
    }
    debug_assert_eq!(u.det()?.abs(), Int::one());
    for r in 0..n {
        debug_assert_eq!(u[(r, n - 1)], v[r]);
    }
    Ok(u)
}

// ---------------------------------------------------------------------------
// Rational matrices
// ---------------------------------------------------------------------------

/// Dense rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMat {
    pub fn new(rows: usize, cols: usize, data: Vec<Rat>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        Ok(RatMat { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> RatMat {
        let mut m = RatMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn mul(&self, other: &RatMat) -> Result<RatMat> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut m = RatMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = &self[(i, k)] * &other[(k, j)];
                    m[(i, j)] += prod;
                }
            }
        }
        Ok(m)
    }

    pub fn add(&self, other: &RatMat) -> Result<RatMat> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape("shape mismatch in add".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        RatMat::new(self.rows, self.cols, data)
    }

    pub fn scale(&self, c: &Rat) -> RatMat {
        RatMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self[(i, j)] != self[(j, i)] {
                    return false;
                }
            }
        }
        true
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<RatMat> {
        if self.rows != self.cols {
            return Err(Error::Shape("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMat::identity(n);
        for col in 0..n {
            let pivot_row = (col..n).find(|&r| !a[(r, col)].is_zero()).ok_or_else(|| {
                Error::Singular(format!("column {col} has no pivot during inversion"))
            })?;
            if pivot_row != col {
                a.swap_rows(pivot_row, col);
                inv.swap_rows(pivot_row, col);
            }
            let pivot = a[(col, col)].clone();
            for j in 0..n {
                a[(col, j)] /= &pivot;
                inv[(col, j)] /= &pivot;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for j in 0..n {
                    let s = &f * &a[(col, j)];
                    a[(r, j)] -= s;
                    let s = &f * &inv[(col, j)];
                    inv[(r, j)] -= s;
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    /// Horner evaluation of a polynomial (constant coefficient first) at this
    /// square matrix.
    pub fn poly_eval(&self, coeffs: &[Rat]) -> Result<RatMat> {
        if self.rows != self.cols {
            return Err(Error::Shape("polynomial of non-square matrix".into()));
        }
        let n = self.rows;
        let mut acc = RatMat::zeros(n, n);
        for c in coeffs.iter().rev() {
            acc = acc.mul(self)?;
            for i in 0..n {
                acc[(i, i)] += c;
            }
        }
        Ok(acc)
    }

    /// Matrix power by repeated squaring.
    pub fn pow(&self, mut e: u32) -> Result<RatMat> {
        if self.rows != self.cols {
            return Err(Error::Shape("power of non-square matrix".into()));
        }
        let mut base = self.clone();
        let mut acc = RatMat::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Row-reduce a copy, returning (rref, pivot column indices).
    fn rref(&self) -> (RatMat, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..a.cols {
            if r >= a.rows {
                break;
            }
            let pr = match (r..a.rows).find(|&i| !a[(i, c)].is_zero()) {
                Some(i) => i,
                None => continue,
            };
            a.swap_rows(pr, r);
            let pivot = a[(r, c)].clone();
            for j in 0..a.cols {
                a[(r, j)] /= &pivot;
            }
            for i in 0..a.rows {
                if i == r || a[(i, c)].is_zero() {
                    continue;
                }
                let f = a[(i, c)].clone();
                for j in 0..a.cols {
                    let s = &f * &a[(r, j)];
                    a[(i, j)] -= s;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the column space: the original columns at the RREF pivot
    /// positions. Deterministic and exact; the zero matrix yields no columns.
    pub fn image_basis(&self) -> Vec<Vec<Rat>> {
        let (_, pivots) = self.rref();
        pivots
            .iter()
            .map(|&c| (0..self.rows).map(|r| self[(r, c)].clone()).collect())
            .collect()
    }

    /// Basis of the right kernel, from the RREF free columns.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let (rref, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::new();
        for &fc in &free {
            let mut v = vec![Rat::zero(); self.cols];
            v[fc] = Rat::one();
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = -rref[(ri, fc)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Stack column vectors into a matrix.
    pub fn from_columns(rows: usize, cols: &[Vec<Rat>]) -> Result<RatMat> {
        let mut m = RatMat::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::Shape("column length mismatch".into()));
            }
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    /// Exact determinant (clears denominators, then Bareiss).
    pub fn det(&self) -> Result<Rat> {
        if self.rows != self.cols {
            return Err(Error::Shape("determinant of non-square matrix".into()));
        }
        let mut scale = Rat::one();
        let mut int_data = Vec::with_capacity(self.data.len());
        // Clear denominators row by row to keep entries small.
        for i in 0..self.rows {
            let mut lcm = Int::one();
            for j in 0..self.cols {
                lcm = num_integer::lcm(lcm, self[(i, j)].denom().clone());
            }
            scale /= Rat::from_integer(lcm.clone());
            for j in 0..self.cols {
                let x = &self[(i, j)] * Rat::from_integer(lcm.clone());
                int_data.push(x.to_integer());
            }
        }
        let m = IntMat::new(self.rows, self.cols, int_data)?;
        Ok(Rat::from_integer(m.det()?) * scale)
    }
}

impl std::ops::Index<(usize, usize)> for RatMat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

// ---------------------------------------------------------------------------
// Symmetric form diagonalization
// ---------------------------------------------------------------------------

/// A nonsingular diagonalized symmetric form over Q, recorded by the
/// squarefree integer representatives of the square classes of its diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagForm {
    entries: Vec<Int>,
}

impl DiagForm {
    /// Build from raw rational diagonal entries; each entry's square class is
    /// represented by the squarefree part of numerator * denominator.
    pub fn from_rationals(diag: &[Rat]) -> Result<DiagForm> {
        let mut entries = Vec::with_capacity(diag.len());
        for d in diag {
            if d.is_zero() {
                return Err(Error::InvalidForm(
                    "diagonal entry 0 in a nonsingular form".into(),
                ));
            }
            entries.push(squarefree_part(&(d.numer() * d.denom()))?);
        }
        Ok(DiagForm { entries })
    }

    pub fn from_ints(diag: &[i64]) -> Result<DiagForm> {
        let rats: Vec<Rat> = diag.iter().map(|&x| rat_int(x)).collect();
        DiagForm::from_rationals(&rats)
    }

    pub fn entries(&self) -> &[Int] {
        &self.entries
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn signature(&self) -> i64 {
        self.entries
            .iter()
            .map(|d| if d.is_negative() { -1 } else { 1 })
            .sum()
    }

    pub fn direct_sum(&self, other: &DiagForm) -> DiagForm {
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        DiagForm { entries }
    }
}

impl std::fmt::Display for DiagForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "<")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ">")
    }
}

/// Diagonalize a nonsingular symmetric rational matrix by congruence.
/// Returns the square-class diagonal form and a basis matrix B with
/// B^t Q B diagonal, the i-th diagonal entry lying in the square class of
/// the i-th form entry.
pub fn diagonalize_congruence(q: &RatMat) -> Result<(DiagForm, RatMat)> {
    let (diag, basis) = diagonalize_raw(q)?;
    if diag.iter().any(|d| d.is_zero()) {
        return Err(Error::Singular(
            "symmetric form is singular; congruence diagonalization requires nonsingular input"
                .into(),
        ));
    }
    Ok((DiagForm::from_rationals(&diag)?, basis))
}

/// Signature of a symmetric rational matrix (zero diagonal blocks allowed;
/// they contribute 0). No integer factorization involved.
pub fn signature(q: &RatMat) -> Result<i64> {
    let (diag, _) = diagonalize_raw(q)?;
    Ok(diag
        .iter()
        .map(|d| {
            if d.is_zero() {
                0
            } else if d.is_negative() {
                -1
            } else {
                1
            }
        })
        .sum())
}

/// Core symmetric congruence elimination. Returns raw diagonal entries (zeros
/// allowed, meaning a radical summand) and the basis matrix.
fn diagonalize_raw(q: &RatMat) -> Result<(Vec<Rat>, RatMat)> {
    if !q.is_symmetric() {
        return Err(Error::Shape(
            "congruence diagonalization requires a symmetric matrix".into(),
        ));
    }
    let n = q.rows();
    let mut m = q.clone();
    let mut basis = RatMat::identity(n);

    // Column operation on the basis mirroring "row_i += f * row_j, col_i += f * col_j".
    fn add_col(b: &mut RatMat, dst: usize, src: usize, f: &Rat) {
        for r in 0..b.rows() {
            let add = f * &b[(r, src)];
            b[(r, dst)] += add;
        }
    }
    fn swap_cols(b: &mut RatMat, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..b.rows() {
            let tmp = b[(r, i)].clone();
            b[(r, i)] = b[(r, j)].clone();
            b[(r, j)] = tmp;
        }
    }
    // Symmetric row+column operation on m: (row_dst += f row_src; col_dst += f col_src).
    fn sym_add(m: &mut RatMat, dst: usize, src: usize, f: &Rat) {
        let n = m.rows();
        for j in 0..n {
            let add = f * &m[(src, j)];
            m[(dst, j)] += add;
        }
        for i in 0..n {
            let add = f * &m[(i, src)];
            m[(i, dst)] += add;
        }
    }
    fn sym_swap(m: &mut RatMat, i: usize, j: usize) {
        if i == j {
            return;
        }
        let n = m.rows();
        for c in 0..n {
            let tmp = m[(i, c)].clone();
            m[(i, c)] = m[(j, c)].clone();
            m[(j, c)] = tmp;
        }
        for r in 0..n {
            let tmp = m[(r, i)].clone();
            m[(r, i)] = m[(r, j)].clone();
            m[(r, j)] = tmp;
        }
    }

    for k in 0..n {
        if m[(k, k)].is_zero() {
            // Prefer a later index with nonzero diagonal.
            if let Some(j) = ((k + 1)..n).find(|&j| !m[(j, j)].is_zero()) {
                sym_swap(&mut m, k, j);
                swap_cols(&mut basis, k, j);
            } else if let Some(j) = ((k + 1)..n).find(|&j| !m[(k, j)].is_zero()) {
                // Zero diagonal block: transvection e_k <- e_k + e_j makes
                // the (k,k) entry 2*m[k][j] != 0.
                let one = Rat::one();
                sym_add(&mut m, k, j, &one);
                add_col(&mut basis, k, j, &one);
            } else {
                // Entire row k is zero: radical direction, contributes a zero.
                continue;
            }
        }
        let pivot = m[(k, k)].clone();
        for i in (k + 1)..n {
            if m[(i, k)].is_zero() {
                continue;
            }
            let f = -(&m[(i, k)] / &pivot);
            sym_add(&mut m, i, k, &f);
            add_col(&mut basis, i, k, &f);
        }
    }
    let diag: Vec<Rat> = (0..n).map(|i| m[(i, i)].clone()).collect();
    Ok((diag, basis))
}

/// Exact inverse of a unimodular integer matrix (determinant +/-1).
pub fn unimodular_inverse(m: &IntMat) -> Result<IntMat> {
    let d = m.det()?;
    if !(d.clone().abs()).is_one() {
        return Err(Error::Singular(format!(
            "unimodular inverse requires det +/-1, got {d}"
        )));
    }
    let inv = m.to_rat().inverse()?;
    let n = m.rows();
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let x = &inv[(i, j)];
            if !x.is_integer() {
                return Err(Error::Inconsistency(
                    "inverse of a unimodular matrix must be integral".into(),
                ));
            }
            data.push(x.to_integer());
        }
    }
    IntMat::new(n, n, data)
}

/// Monic characteristic polynomial det(tI - M) of a square rational matrix,
/// returned as coefficients from constant to leading (always ending in 1).
/// Computed by exact evaluation at n+1 integer nodes and Lagrange
/// interpolation.
pub fn char_poly_monic(m: &RatMat) -> Result<Vec<Rat>> {
    if m.rows() != m.cols() {
        return Err(Error::Shape(
            "characteristic polynomial of non-square matrix".into(),
        ));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(vec![Rat::one()]);
    }
    let nodes: Vec<Int> = (0..=n as i64).map(Int::from).collect();
    let mut values = Vec::with_capacity(nodes.len());
    for k in &nodes {
        let mut mk = m.scale(&-Rat::one());
        for i in 0..n {
            mk[(i, i)] += Rat::from_integer(k.clone());
        }
        values.push(mk.det()?);
    }
    let mut acc = vec![Rat::zero(); n + 1];
    for (i, xi) in nodes.iter().enumerate() {
        let mut num = vec![Rat::one()];
        let mut denom = Rat::one();
        for (j, xj) in nodes.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![Rat::zero(); num.len() + 1];
            for (k, c) in num.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * Rat::from_integer(xj.clone());
            }
            num = next;
            denom *= Rat::from_integer(xi - xj);
        }
        let w = &values[i] / denom;
        for (k, c) in num.iter().enumerate() {
            acc[k] += c * &w;
        }
    }
    if acc[n] != Rat::one() {
        return Err(Error::Inconsistency(
            "interpolated characteristic polynomial is not monic".into(),
        ));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn m(rows: &[Vec<i64>]) -> IntMat {
        IntMat::from_rows(rows).unwrap()
    }

    #[test]
    fn bareiss_determinants() {
        assert_eq!(m(&[vec![2, 1], vec![1, -10]]).det().unwrap(), int(-21));
        assert_eq!(m(&[vec![0, 1], vec![1, 0]]).det().unwrap(), int(-1));
        assert_eq!(
            m(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]])
                .det()
                .unwrap(),
            int(-3)
        );
        // Singular.
        assert_eq!(
            m(&[vec![1, 2], vec![2, 4]]).det().unwrap(),
            int(0)
        );
        assert_eq!(IntMat::identity(0).det().unwrap(), int(1));
    }

    #[test]
    fn det_matches_cofactor_on_random_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for n in 1..=5usize {
            for _ in 0..20 {
                let rows: Vec<Vec<i64>> = (0..n)
                    .map(|_| (0..n).map(|_| rng.gen_range(-6..=6)).collect())
                    .collect();
                let a = m(&rows);
                assert_eq!(a.det().unwrap(), naive_det(&a), "matrix {rows:?}");
            }
        }
    }

    fn naive_det(a: &IntMat) -> Int {
        let n = a.rows();
        if n == 0 {
            return Int::one();
        }
        if n == 1 {
            return a[(0, 0)].clone();
        }
        let mut acc = Int::zero();
        for j in 0..n {
            if a[(0, j)].is_zero() {
                continue;
            }
            let keep: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let mut sub = IntMat::zeros(n - 1, n - 1);
            for i in 1..n {
                for (cj, &c) in keep.iter().enumerate() {
                    sub[(i - 1, cj)] = a[(i, c)].clone();
                }
            }
            let term = &a[(0, j)] * naive_det(&sub);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn diagonalize_hyperbolic_plane() {
        // Zero-diagonal symmetric form: the transvection trick yields
        // square classes [2, -2].
        let q = m(&[vec![0, 1], vec![1, 0]]).to_rat();
        let (form, basis) = diagonalize_congruence(&q).unwrap();
        assert_eq!(form.entries(), &[int(2), int(-2)]);
        // B^t Q B must be diagonal in the recorded square classes.
        let g = basis.transpose().mul(&q).unwrap().mul(&basis).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                if i != j {
                    assert!(g[(i, j)].is_zero());
                }
            }
        }
        assert!(!g[(0, 0)].is_zero() && !g[(1, 1)].is_zero());
    }

    #[test]
    fn diagonalize_negative_definite() {
        let q = m(&[vec![-2, 1], vec![1, -2]]).to_rat();
        let (form, _) = diagonalize_congruence(&q).unwrap();
        assert_eq!(form.entries(), &[int(-2), int(-6)]);
        assert_eq!(form.signature(), -2);
    }

    #[test]
    fn signature_indefinite() {
        let q = m(&[vec![2, 1], vec![1, -10]]).to_rat();
        assert_eq!(signature(&q).unwrap(), 0);
        let q = m(&[vec![-2, 1], vec![1, -2]]).to_rat();
        assert_eq!(signature(&q).unwrap(), -2);
    }

    #[test]
    fn diagonalize_rejects_singular() {
        let q = m(&[vec![1, 1], vec![1, 1]]).to_rat();
        assert!(matches!(
            diagonalize_congruence(&q),
            Err(Error::Singular(_))
        ));
        // But signature tolerates it.
        assert_eq!(signature(&q).unwrap(), 1);
    }

    #[test]
    fn congruence_identity_holds_on_random_symmetric_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for n in 1..=5usize {
            for _ in 0..10 {
                let mut q = IntMat::zeros(n, n);
                for i in 0..n {
                    for j in i..n {
                        let x = int(rng.gen_range(-5..=5));
                        q[(i, j)] = x.clone();
                        q[(j, i)] = x;
                    }
                }
                let q = q.to_rat();
                let (diag, basis) = super::diagonalize_raw(&q).unwrap();
                let g = basis.transpose().mul(&q).unwrap().mul(&basis).unwrap();
                for i in 0..n {
                    assert_eq!(g[(i, i)], diag[i]);
                    for j in 0..n {
                        if i != j {
                            assert!(g[(i, j)].is_zero(), "off-diagonal at ({i},{j})");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn image_basis_examples() {
        let a = m(&[vec![1, 0], vec![0, 0]]).to_rat();
        assert_eq!(a.image_basis(), vec![vec![rat_int(1), rat_int(0)]]);
        let z = RatMat::zeros(3, 3);
        assert!(z.image_basis().is_empty());
        let a = m(&[vec![1, 2], vec![2, 4]]).to_rat();
        assert_eq!(a.image_basis().len(), 1);
        assert_eq!(a.rank(), 1);
    }

    #[test]
    fn kernel_and_inverse() {
        let a = m(&[vec![1, 2], vec![2, 4]]).to_rat();
        let k = a.kernel_basis();
        assert_eq!(k.len(), 1);
        // A * k = 0
        let kv = RatMat::from_columns(2, &k).unwrap();
        assert!(a.mul(&kv).unwrap().is_zero());

        let b = m(&[vec![2, 1], vec![1, 1]]).to_rat();
        let binv = b.inverse().unwrap();
        assert_eq!(b.mul(&binv).unwrap(), RatMat::identity(2));
    }

    #[test]
    fn unimodular_completion() {
        let v = vec![int(2), int(3), int(5)];
        let u = unimodular_with_last_column(&v).unwrap();
        assert_eq!(u.det().unwrap().abs(), int(1));
        for r in 0..3 {
            assert_eq!(u[(r, 2)], v[r]);
        }
        // Non-primitive input is rejected.
        assert!(unimodular_with_last_column(&[int(2), int(4)]).is_err());
    }

    #[test]
    fn poly_eval_and_pow() {
        let a = m(&[vec![0, 1], vec![1, 0]]).to_rat();
        // a^2 = I, so p(a) with p = t^2 - 1 is zero.
        let p = [rat_int(-1), rat_int(0), rat_int(1)];
        assert!(a.poly_eval(&p).unwrap().is_zero());
        assert_eq!(a.pow(2).unwrap(), RatMat::identity(2));
    }

    #[test]
    fn primitive_kernel_vector() {
        let a = m(&[vec![2, 4], vec![1, 2]]);
        let v = a.kernel_vector_primitive().unwrap();
        assert_eq!(v, vec![int(2), int(-1)]);
        let b = m(&[vec![1, 0], vec![0, 1]]);
        assert!(b.kernel_vector_primitive().is_none());
    }
}
