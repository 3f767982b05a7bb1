//! Seifert matrices and their isometric structures.
//!
//! A Seifert matrix is a square integer matrix V with det(V - V^t) = +/-1.
//! Every such matrix is Witt-equivalent to a nonsingular one, obtained by
//! repeatedly splitting off a hyperbolic 2x2 block ([`reduce_to_nonsingular`]).
//! A nonsingular V carries an isometric structure: the symmetric form
//! Q = V + V^t together with the Q-isometry T = V^{-1}V^t
//! ([`build_structure`]). The structure decomposes along the irreducible
//! factors of the characteristic polynomial of T into T-invariant,
//! Q-orthogonal primary components ([`primary_decomposition`]); components
//! for asymmetric factor pairs carry an explicit metabolizer and never
//! obstruct. [`cyclic_square_slice_test`] decides sliceness directly when the
//! characteristic polynomial is the square of one irreducible.

use num_traits::{One, Signed, Zero};

use crate::arith::Int;
use crate::error::{Error, Result};
use crate::linalg::{
    char_poly_monic, unimodular_inverse, unimodular_with_last_column, IntMat, Rat, RatMat,
};
use crate::poly::{alexander_poly, char_poly_t, factor_over_z, poly_at_matrix, Factorization,
    IntPoly};

/// A validated Seifert matrix: square, integral, det(V - V^t) = +/-1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeifertMatrix {
    m: IntMat,
}

impl SeifertMatrix {
    /// Validate and wrap. The 0x0 matrix is allowed (det of the empty
    /// skew-symmetric difference is 1).
    pub fn new(m: IntMat) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Shape(format!(
                "Seifert matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let d = m.sub(&m.transpose())?.det()?;
        if !d.clone().abs().is_one() {
            return Err(Error::NotSeifert { det: d.to_string() });
        }
        Ok(SeifertMatrix { m })
    }

    /// Parse from rows of i64 entries.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        SeifertMatrix::new(IntMat::from_rows(rows)?)
    }

    pub fn matrix(&self) -> &IntMat {
        &self.m
    }

    pub fn size(&self) -> usize {
        self.m.rows()
    }

    pub fn det(&self) -> Int {
        self.m.det().expect("square by construction")
    }

    pub fn is_nonsingular(&self) -> bool {
        !self.det().is_zero()
    }

    /// The inverse class in the Witt group of Seifert matrices: -V.
    pub fn mirror(&self) -> SeifertMatrix {
        SeifertMatrix { m: self.m.neg() }
    }

    pub fn direct_sum(&self, other: &SeifertMatrix) -> SeifertMatrix {
        SeifertMatrix {
            m: self.m.direct_sum(&other.m),
        }
    }
}

/// One excision step of [`reduce_to_nonsingular`]: a unimodular congruence
/// bringing the current matrix into the block shape
///
/// ```text
/// [ B    xi   0 ]
/// [ eta  a    1 ]
/// [ 0    0    0 ]
/// ```
///
/// after which the last two rows and columns are excised, leaving the
/// Witt-equivalent Seifert matrix B.
#[derive(Clone, Debug)]
pub struct ExcisionStep {
    /// Unimodular U with U^t (current) U in the block shape above.
    pub transform: IntMat,
    /// The matrix in block shape (before excision), for certificate replay.
    pub blocked: IntMat,
}

/// Result of the nonsingular reduction: the chain of excisions and the final
/// nonsingular (possibly 0x0) Seifert matrix.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub steps: Vec<ExcisionStep>,
    pub reduced: SeifertMatrix,
}

/// Reduce a Seifert matrix to a Witt-equivalent nonsingular one by repeated
/// excision of hyperbolic pairs. Idempotent on nonsingular input (no steps).
pub fn reduce_to_nonsingular(v: &SeifertMatrix) -> Result<Reduction> {
    let mut cur = v.m.clone();
    let mut steps = Vec::new();
    loop {
        let n = cur.rows();
        if n == 0 || !cur.det()?.is_zero() {
            return Ok(Reduction {
                steps,
                reduced: SeifertMatrix::new(cur)?,
            });
        }
        // A primitive left-kernel vector u (u^t V = 0) exists since det = 0.
        let u = cur
            .transpose()
            .kernel_vector_primitive()
            .ok_or_else(|| Error::Inconsistency("singular matrix with no kernel".into()))?;
        let u1 = unimodular_with_last_column(&u)?;
        let v1 = u1.transpose().mul(&cur)?.mul(&u1)?;
        // v1 has zero last row; its last column c ends in 0 and (as a column
        // of the unimodular v1 - v1^t) the leading n-1 entries are primitive.
        let c: Vec<Int> = (0..n - 1).map(|i| v1[(i, n - 1)].clone()).collect();
        let x = unimodular_with_last_column(&c)?;
        let w = unimodular_inverse(&x)?.transpose();
        let u2 = w.direct_sum(&IntMat::identity(1));
        let transform = u1.mul(&u2)?;
        let blocked = transform.transpose().mul(&cur)?.mul(&transform)?;
        // Validate the displayed block shape before excising.
        for j in 0..n {
            if !blocked[(n - 1, j)].is_zero() {
                return Err(Error::Inconsistency("excision: last row not zero".into()));
            }
        }
        for i in 0..n {
            let expect = if i == n - 2 { Int::one() } else { Int::zero() };
            if blocked[(i, n - 1)] != expect {
                return Err(Error::Inconsistency(
                    "excision: last column is not the hyperbolic unit vector".into(),
                ));
            }
        }
        let b = blocked.minor_removing(&[n - 2, n - 1]);
        steps.push(ExcisionStep { transform, blocked });
        cur = b;
    }
}

/// The isometric structure of a nonsingular Seifert matrix: the symmetric
/// bilinear form Q = V + V^t and the Q-isometry T = V^{-1} V^t.
///
/// `charpoly` is the characteristic polynomial of T cleared to a primitive
/// integer polynomial with positive leading coefficient; the monic rational
/// polynomial is charpoly / lc(charpoly). It is palindromic and nonzero at
/// t = +/-1.
#[derive(Clone, Debug)]
pub struct IsometricStructure {
    q: RatMat,
    t: RatMat,
    charpoly: IntPoly,
}

impl IsometricStructure {
    pub fn q(&self) -> &RatMat {
        &self.q
    }

    pub fn t(&self) -> &RatMat {
        &self.t
    }

    /// Primitive integral characteristic polynomial of T (positive leading
    /// coefficient).
    pub fn charpoly(&self) -> &IntPoly {
        &self.charpoly
    }

    pub fn dim(&self) -> usize {
        self.q.rows()
    }

    /// Validated constructor from raw parts; checks symmetry, nonsingularity,
    /// the isometry relation T^t Q T = Q, and the +/-1 evaluation conditions.
    pub fn from_parts(q: RatMat, t: RatMat, charpoly: IntPoly) -> Result<Self> {
        if !q.is_symmetric() {
            return Err(Error::Shape("Q must be symmetric".into()));
        }
        if q.rows() != t.rows() || t.rows() != t.cols() {
            return Err(Error::Shape("Q and T must be square of equal size".into()));
        }
        if q.rows() > 0 && q.det()?.is_zero() {
            return Err(Error::Singular("Q is singular".into()));
        }
        let lhs = t.transpose().mul(&q)?.mul(&t)?;
        if !matrices_equal(&lhs, &q) {
            return Err(Error::Inconsistency("T is not an isometry of Q".into()));
        }
        if charpoly.eval_int(&Int::one()).is_zero()
            || charpoly.eval_int(&(-Int::one())).is_zero()
        {
            return Err(Error::ForbiddenValue(
                "characteristic polynomial vanishes at t = +/-1".into(),
            ));
        }
        Ok(IsometricStructure { q, t, charpoly })
    }
}

fn matrices_equal(a: &RatMat, b: &RatMat) -> bool {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return false;
    }
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if a[(i, j)] != b[(i, j)] {
                return false;
            }
        }
    }
    true
}

fn rat_mat_is_zero(a: &RatMat) -> bool {
    a.is_zero()
}

/// Build the isometric structure (Q, T, charpoly) of a nonsingular Seifert
/// matrix, cross-checking det Q against the Alexander polynomial at -1.
pub fn build_structure(v: &SeifertMatrix) -> Result<IsometricStructure> {
    if !v.is_nonsingular() {
        return Err(Error::SingularSeifert);
    }
    let n = v.size();
    let vr = v.m.to_rat();
    let vt = v.m.transpose().to_rat();
    let q = vr.add(&vt)?;
    let t = vr.inverse()?.mul(&vt)?;
    let charpoly = char_poly_t(&v.m)?;
    if !charpoly.is_symmetric() {
        return Err(Error::Inconsistency(
            "characteristic polynomial of T is not palindromic".into(),
        ));
    }
    // det Q = Alexander polynomial evaluated at -1 (both are det(V + V^t)).
    let alex = alexander_poly(&v.m)?;
    let det_q = if n == 0 { Rat::one() } else { q.det()? };
    if det_q != Rat::from_integer(alex.eval_int(&(-Int::one()))) {
        return Err(Error::Inconsistency(
            "det(V + V^t) disagrees with the Alexander polynomial at -1".into(),
        ));
    }
    IsometricStructure::from_parts(q, t, charpoly)
}

/// The field over which a primary component was split off.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldTag {
    Rational,
    Padic { p: u64, precision: u32 },
}

/// A T-invariant primary component of an isometric structure for one
/// symmetric irreducible factor delta of the characteristic polynomial.
#[derive(Clone, Debug)]
pub struct PrimaryComponent {
    /// Primitive irreducible polynomial with delta = reverse(delta).
    pub delta: IntPoly,
    /// Multiplicity of delta in the characteristic polynomial.
    pub exponent: u32,
    /// Columns: an ambient-coordinates basis of the component.
    pub basis: RatMat,
    /// Q restricted to the component (basis coordinates).
    pub q_restricted: RatMat,
    /// T restricted to the component (basis coordinates).
    pub t_restricted: RatMat,
    pub field: FieldTag,
}

/// The combined component of all asymmetric irreducible factors, which come
/// in reverse-pairs (f, f*) and carry an explicit T-invariant metabolizer:
/// the span of the f-primary summands, one per pair.
#[derive(Clone, Debug)]
pub struct ResidualComponent {
    /// The factor pairs (f, f*, common exponent).
    pub pairs: Vec<(IntPoly, IntPoly, u32)>,
    /// Columns: ambient-coordinates basis of the whole residual component.
    pub basis: RatMat,
    pub q_restricted: RatMat,
    /// Columns: metabolizer in component (basis) coordinates, verified at
    /// construction time.
    pub metabolizer: RatMat,
}

/// Primary decomposition of an isometric structure.
#[derive(Clone, Debug)]
pub struct PrimaryDecomposition {
    pub components: Vec<PrimaryComponent>,
    pub residual: Option<ResidualComponent>,
}

/// Decompose a structure along a factorization of its characteristic
/// polynomial into primary components (one per symmetric irreducible factor)
/// plus the residual of asymmetric pairs. Every claimed property --
/// invariance, restricted characteristic polynomial, mutual orthogonality,
/// dimension count, Witt-triviality of the residual -- is verified here, not
/// assumed.
pub fn primary_decomposition(
    s: &IsometricStructure,
    fact: &Factorization,
) -> Result<PrimaryDecomposition> {
    if &fact.expand() != s.charpoly() {
        return Err(Error::Precondition(
            "factorization does not multiply back to the characteristic polynomial".into(),
        ));
    }
    let n = s.dim();
    let mut symmetric: Vec<(IntPoly, u32)> = Vec::new();
    let mut asymmetric: Vec<(IntPoly, u32)> = Vec::new();
    for (f, e) in &fact.factors {
        match f.symmetry() {
            Some(1) => symmetric.push((f.clone(), *e)),
            _ => asymmetric.push((f.clone(), *e)),
        }
    }
    // Pair up asymmetric factors with their reverses.
    let mut pairs: Vec<(IntPoly, IntPoly, u32)> = Vec::new();
    let mut used = vec![false; asymmetric.len()];
    for i in 0..asymmetric.len() {
        if used[i] {
            continue;
        }
        let (f, e) = &asymmetric[i];
        let mut rev = f.reverse();
        if rev.lc().is_negative() {
            rev = rev.neg();
        }
        let j = (i + 1..asymmetric.len())
            .find(|&j| !used[j] && asymmetric[j].0 == rev && asymmetric[j].1 == *e)
            .ok_or_else(|| {
                Error::Inconsistency(format!(
                    "asymmetric factor {f} lacks a matching reverse factor"
                ))
            })?;
        used[i] = true;
        used[j] = true;
        pairs.push((f.clone(), rev, *e));
    }

    let mut components = Vec::new();
    for (delta, e) in &symmetric {
        let cofactor = cofactor_poly(s.charpoly(), delta, *e)?;
        let basis = image_of_power(&cofactor, s.t(), n)?;
        let comp = restrict(s, &basis)?;
        let want_dim = (*e as usize) * delta.deg();
        if basis.cols() != want_dim {
            return Err(Error::Inconsistency(format!(
                "component for {delta} has dimension {} (expected {want_dim})",
                basis.cols()
            )));
        }
        // Recompute the restricted characteristic polynomial independently
        // and compare with the monic normalization of delta^e.
        let got = char_poly_monic(&comp.1)?;
        let want = monic_power(delta, *e);
        if got != want {
            return Err(Error::Inconsistency(format!(
                "restricted characteristic polynomial differs from {delta}^{e}"
            )));
        }
        components.push(PrimaryComponent {
            delta: delta.clone(),
            exponent: *e,
            basis,
            q_restricted: comp.0,
            t_restricted: comp.1,
            field: FieldTag::Rational,
        });
    }

    let residual = if pairs.is_empty() {
        None
    } else {
        // One combined component for all pairs; metabolizer = span of the
        // first factor's primary summand in each pair.
        let mut pair_product = IntPoly::one();
        for (f, fr, e) in &pairs {
            pair_product = pair_product.mul(&f.pow(*e)).mul(&fr.pow(*e));
        }
        let cofactor = cofactor_of_product(s.charpoly(), &pair_product)?;
        let basis = image_of_power(&cofactor, s.t(), n)?;
        let (q_r, _t_r) = restrict(s, &basis)?;
        // Metabolizer columns in ambient coordinates.
        let mut met_cols: Vec<Vec<Rat>> = Vec::new();
        for (f, _, e) in &pairs {
            let single_cof = cofactor_of_product(s.charpoly(), &f.pow(*e))?;
            let part = image_of_power(&single_cof, s.t(), n)?;
            for c in 0..part.cols() {
                met_cols.push((0..n).map(|r| part[(r, c)].clone()).collect());
            }
        }
        let met_ambient = RatMat::from_columns(n, &met_cols)?;
        let metabolizer = coordinates_in_basis(&basis, &met_ambient)?;
        if !verify_metabolizer(&q_r, &metabolizer, None)? {
            return Err(Error::Inconsistency(
                "residual component is not visibly Witt-trivial".into(),
            ));
        }
        Some(ResidualComponent {
            pairs,
            basis,
            q_restricted: q_r,
            metabolizer,
        })
    };

    // Dimensions sum to the ambient dimension.
    let total: usize = components.iter().map(|c| c.basis.cols()).sum::<usize>()
        + residual.as_ref().map_or(0, |r| r.basis.cols());
    if total != n {
        return Err(Error::Inconsistency(format!(
            "component dimensions sum to {total}, ambient dimension is {n}"
        )));
    }
    // Pairwise Q-orthogonality of all components.
    let mut bases: Vec<&RatMat> = components.iter().map(|c| &c.basis).collect();
    if let Some(r) = &residual {
        bases.push(&r.basis);
    }
    for i in 0..bases.len() {
        for j in (i + 1)..bases.len() {
            let cross = bases[i].transpose().mul(s.q())?.mul(bases[j])?;
            if !rat_mat_is_zero(&cross) {
                return Err(Error::Inconsistency(
                    "primary components are not Q-orthogonal".into(),
                ));
            }
        }
    }
    Ok(PrimaryDecomposition {
        components,
        residual,
    })
}

/// charpoly / delta^e as an integer polynomial (exact division).
fn cofactor_poly(charpoly: &IntPoly, delta: &IntPoly, e: u32) -> Result<IntPoly> {
    cofactor_of_product(charpoly, &delta.pow(e))
}

fn cofactor_of_product(charpoly: &IntPoly, product: &IntPoly) -> Result<IntPoly> {
    charpoly.div_exact(product).ok_or_else(|| {
        Error::Indivisible("factor power does not divide the characteristic polynomial".into())
    })
}

/// Basis (columns) of Im(g(T)^N) with N = ambient dimension.
fn image_of_power(g: &IntPoly, t: &RatMat, n: usize) -> Result<RatMat> {
    let a = poly_at_matrix(g, t)?;
    let apow = a.pow(n as u32)?;
    let cols = apow.image_basis();
    RatMat::from_columns(n, &cols)
}

/// Restrict (Q, T) to the span of the basis columns: returns
/// (B^t Q B, matrix of T in basis coordinates). Errors if the span is not
/// T-invariant.
fn restrict(s: &IsometricStructure, basis: &RatMat) -> Result<(RatMat, RatMat)> {
    let q_r = basis.transpose().mul(s.q())?.mul(basis)?;
    let tb = s.t().mul(basis)?;
    let t_r = coordinates_in_basis(basis, &tb)?;
    // Exactness check: B * T_r == T * B.
    if !matrices_equal(&basis.mul(&t_r)?, &tb) {
        return Err(Error::Inconsistency(
            "component basis is not T-invariant".into(),
        ));
    }
    Ok((q_r, t_r))
}

/// Solve B X = M for X where B has full column rank (columns a basis of a
/// subspace containing the columns of M): X = (B^t B)^{-1} B^t M, verified.
fn coordinates_in_basis(basis: &RatMat, m: &RatMat) -> Result<RatMat> {
    let bt = basis.transpose();
    let gram = bt.mul(basis)?;
    let x = gram.inverse()?.mul(&bt.mul(m)?)?;
    if !matrices_equal(&basis.mul(&x)?, m) {
        return Err(Error::Inconsistency(
            "columns do not lie in the span of the basis".into(),
        ));
    }
    Ok(x)
}

/// Coefficients of the monic rational polynomial (delta / lc)^e, constant
/// term first.
fn monic_power(delta: &IntPoly, e: u32) -> Vec<Rat> {
    let p = delta.pow(e);
    let lc = Rat::from_integer(p.lc());
    p.coeffs()
        .iter()
        .map(|c| Rat::from_integer(c.clone()) / &lc)
        .collect()
}

/// Check that the given columns span a metabolizer of the symmetric form q:
/// linearly independent, exactly half the dimension, q vanishes on the span,
/// and (if `t` is given) the span is T-invariant.
pub fn verify_metabolizer(q: &RatMat, basis: &RatMat, t: Option<&RatMat>) -> Result<bool> {
    let n = q.rows();
    if q.cols() != n || basis.rows() != n {
        return Err(Error::Shape(
            "metabolizer basis has wrong ambient dimension".into(),
        ));
    }
    let d = basis.cols();
    if !n.is_multiple_of(2) || d != n / 2 {
        return Ok(false);
    }
    if basis.rank() != d {
        return Ok(false);
    }
    let restricted = basis.transpose().mul(q)?.mul(basis)?;
    if !rat_mat_is_zero(&restricted) {
        return Ok(false);
    }
    if let Some(t) = t {
        let tb = t.mul(basis)?;
        let mut cols: Vec<Vec<Rat>> = Vec::new();
        for c in 0..d {
            cols.push((0..n).map(|r| basis[(r, c)].clone()).collect());
        }
        for c in 0..tb.cols() {
            cols.push((0..n).map(|r| tb[(r, c)].clone()).collect());
        }
        let stacked = RatMat::from_columns(n, &cols)?;
        if stacked.rank() != d {
            return Ok(false);
        }
    }
    Ok(true)
}

/// When the characteristic polynomial is delta^2 with delta irreducible over
/// Q, the class is algebraically slice if delta(T) != 0: its image is then a
/// half-dimensional T-invariant subspace on which Q vanishes. Returns whether
/// that verified metabolizer exists (false exactly when delta(T) = 0, i.e.
/// the module is not cyclic). Errors if the characteristic polynomial is not
/// the square of a single irreducible.
pub fn cyclic_square_slice_test(s: &IsometricStructure) -> Result<bool> {
    let fact = factor_over_z(s.charpoly())?;
    if fact.factors.len() != 1 || fact.factors[0].1 != 2 {
        return Err(Error::Precondition(format!(
            "characteristic polynomial is not the square of one irreducible: {}",
            fact
        )));
    }
    let delta = &fact.factors[0].0;
    let a = poly_at_matrix(delta, s.t())?;
    if a.is_zero() {
        return Ok(false);
    }
    let cols = a.image_basis();
    let basis = RatMat::from_columns(s.dim(), &cols)?;
    verify_metabolizer(s.q(), &basis, Some(s.t()))
}
