//! Exact-arithmetic classification of the algebraic concordance order of
//! integral Seifert matrices.
//!
//! The crate decides, with integer and rational arithmetic only, whether the
//! class of a Seifert matrix in the rational algebraic concordance group has
//! order 1, 2, 4, or infinite order, and emits a certificate for each step
//! of the decision. Entry points:
//!
//! - [`SeifertMatrix`]: validated input type (det(V - V^t) = +/-1);
//! - [`classify`]: full decision procedure with certificate;
//! - [`verify_certificate`]: independent replay of a claimed certificate.

pub mod arith;
pub mod error;
pub mod isometric;
pub mod linalg;
pub mod order;
pub mod padic;
pub mod witt;
pub mod poly;
pub mod realsig;

pub use error::{Error, Result};
pub use isometric::SeifertMatrix;
pub use order::{
    classify, classify_batch, verify_certificate, CertificateStep, ClassifyOptions, Order,
    OrderVerdict,
};
