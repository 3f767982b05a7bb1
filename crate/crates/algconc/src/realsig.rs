//! Exact Tristram-Levine signatures on the unit circle.
//!
//! For a Seifert matrix V and omega = x + i sqrt(1-x^2) on the upper unit
//! circle, the Hermitian form (1-omega) V + (1-conj omega) V^t equals
//! (1-x) (V+V^t) + i sqrt(1-x^2) (V^t-V). Its signature is computed exactly
//! by doubling to a real symmetric matrix over the quadratic field
//! Q(sqrt(d)) and dividing by two. The full signature profile samples one
//! point per plateau, with plateau boundaries isolated by Sturm chains of
//! the trace polynomial of the Alexander polynomial's radical.

use num_traits::{Signed, Zero};

use crate::arith::{int, squarefree_part};
use crate::error::{Error, Result};
use crate::linalg::{signature_quadext, IntMat, QuadExt, Rat};
use crate::poly::{alexander_poly, sturm_isolate, IntPoly, IsolatingInterval};

/// Exact Tristram-Levine signature of V at omega = x + i sqrt(1-x^2),
/// where x is rational with |x| < 1 and omega is not a root of the
/// Alexander polynomial.
pub fn tl_signature_at(v: &IntMat, x: &Rat) -> Result<i64> {
    if !v.is_square() {
        return Err(Error::Shape("Seifert matrix must be square".into()));
    }
    let one = Rat::from_integer(int(1));
    if x.abs() >= one {
        return Err(Error::ForbiddenValue(format!(
            "Tristram-Levine parameter x = {x} must satisfy |x| < 1"
        )));
    }
    let n = v.rows();
    // r = 1 - x^2 = s^2 d with d squarefree: sqrt(r) = s sqrt(d).
    let r = &one - x * x;
    let inner = r.numer() * r.denom();
    let d = squarefree_part(&inner)?;
    // s = sqrt(inner / d) / denom.
    let s_num = (&inner / &d).sqrt();
    debug_assert_eq!(&s_num * &s_num * &d, inner);
    let s = Rat::new(s_num, r.denom().clone());
    let a = &one - x; // coefficient of the symmetric part
    // Doubled real matrix [[aQ, -sS sqrt(d)], [sS sqrt(d), aQ]] with
    // Q = V + V^t, S = V^t - V.
    let zero = Rat::from_integer(int(0));
    let mut m = vec![vec![QuadExt::from_rat(zero.clone(), d.clone())?; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let q = Rat::from_integer(&v[(i, j)] + &v[(j, i)]);
            let s_ij = Rat::from_integer(&v[(j, i)] - &v[(i, j)]);
            let aq = QuadExt::new(&a * &q, zero.clone(), d.clone())?;
            m[i][j] = aq.clone();
            m[n + i][n + j] = aq;
            let off = &s * &s_ij;
            m[i][n + j] = QuadExt::new(zero.clone(), -&off, d.clone())?;
            m[n + i][j] = QuadExt::new(zero.clone(), off, d.clone())?;
        }
    }
    let sig = signature_quadext(&m).map_err(|e| match e {
        Error::Singular(_) => Error::ForbiddenValue(format!(
            "omega at x = {x} is a root of the Alexander polynomial"
        )),
        other => other,
    })?;
    debug_assert_eq!(sig % 2, 0);
    Ok(sig / 2)
}

/// The complete Tristram-Levine signature function of V on the open upper
/// unit circle, described by plateaus and jumps in the trace coordinate
/// y = omega + 1/omega = 2x, which runs over (-2, 2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureProfile {
    /// Isolating intervals (in y) for the jump locations, ascending.
    pub jump_intervals: Vec<IsolatingInterval>,
    /// One sample y-value per plateau (k jumps give k+1 plateaus),
    /// ascending; plateau i lies between jump i-1 and jump i.
    pub sample_points: Vec<Rat>,
    /// Signature on each plateau, in the same order as `sample_points`.
    pub plateau_values: Vec<i64>,
    /// Signature change across each jump interval.
    pub jump_sizes: Vec<i64>,
}

impl SignatureProfile {
    /// Whether the signature function vanishes away from the jump set.
    pub fn is_identically_zero(&self) -> bool {
        self.plateau_values.iter().all(|&s| s == 0)
    }
}

/// Compute the signature profile of a Seifert matrix: isolate the unit
/// circle roots of the Alexander polynomial via the trace polynomial of its
/// radical, then sample the signature once per plateau.
pub fn signature_profile(v: &IntMat) -> Result<SignatureProfile> {
    let delta = alexander_poly(v)?;
    let symmetric_part = strip_t_factor(&delta.radical()?);
    let trace = symmetric_part.trace_poly()?;
    let minus2 = Rat::from_integer(int(-2));
    let plus2 = Rat::from_integer(int(2));
    let jump_intervals = sturm_isolate(&trace, &minus2, &plus2)?;
    // One sample per plateau: midpoints of the complement segments.
    let mut boundaries: Vec<Rat> = vec![minus2.clone()];
    for iv in &jump_intervals {
        boundaries.push(iv.lo.clone());
        boundaries.push(iv.hi.clone());
    }
    boundaries.push(plus2.clone());
    let half = Rat::new(int(1), int(2));
    let mut sample_points = Vec::new();
    let mut plateau_values = Vec::new();
    for seg in boundaries.chunks(2) {
        let y = (&seg[0] + &seg[1]) * &half;
        let x = &y * &half;
        plateau_values.push(tl_signature_at(v, &x)?);
        sample_points.push(y);
    }
    let jump_sizes = plateau_values
        .windows(2)
        .map(|w| w[1] - w[0])
        .collect();
    Ok(SignatureProfile {
        jump_intervals,
        sample_points,
        plateau_values,
        jump_sizes,
    })
}

/// Remove a root at t = 0 if present (the radical has at most one).
fn strip_t_factor(f: &IntPoly) -> IntPoly {
    if f.coeff(0).is_zero() && f.deg() >= 1 {
        let mut cs = f.coeffs().to_vec();
        cs.remove(0);
        IntPoly::from_coeffs(cs)
    } else {
        f.clone()
    }
}
