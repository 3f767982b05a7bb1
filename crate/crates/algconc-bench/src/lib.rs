//! Shared fixtures for the classifier benchmarks: one small Seifert matrix
//! for each verdict class, plus a genus-3 matrix whose classification
//! exercises the full trace-coordinate analysis.

use algconc::SeifertMatrix;

/// Trefoil: infinite order, decided by the signature profile.
pub fn trefoil() -> SeifertMatrix {
    SeifertMatrix::from_rows(&[vec![-1, 1], vec![0, -1]]).unwrap()
}

/// Figure-eight: order 2, decided by a local obstruction.
pub fn figure_eight() -> SeifertMatrix {
    SeifertMatrix::from_rows(&[vec![1, 1], vec![0, -1]]).unwrap()
}

/// Twist-knot matrix of order 4 (odd-valuation route at p = 3).
pub fn order_four_twist() -> SeifertMatrix {
    SeifertMatrix::from_rows(&[vec![1, 1], vec![0, -5]]).unwrap()
}

/// Genus-3 Seifert matrix of 12n525: order 2, but only after the mod-p
/// screen fails and the trace-coordinate analysis runs at p = 3.
pub fn k12n525() -> SeifertMatrix {
    SeifertMatrix::from_rows(&[
        vec![2, 2, -1, 0, 0, 1],
        vec![1, 1, 0, 1, 0, 0],
        vec![-1, -1, -1, 0, 0, 0],
        vec![0, 1, -1, 1, -1, 2],
        vec![0, 0, 0, -2, 3, 0],
        vec![1, 0, 0, 2, -1, -2],
    ])
    .unwrap()
}

/// An 8x8 algebraically slice matrix, V + (-V), whose certificate mixes an
/// asymmetric-factor metabolizer with even-exponent symmetric components.
pub fn slice_mirror_sum() -> SeifertMatrix {
    let v = SeifertMatrix::from_rows(&[
        vec![2, -2, 0, -1],
        vec![-3, 1, 0, 1],
        vec![0, 0, -3, 1],
        vec![-1, 1, 0, 1],
    ])
    .unwrap();
    v.direct_sum(&v.mirror())
}
