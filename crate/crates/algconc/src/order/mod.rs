//! Classification of the algebraic concordance order of a Seifert matrix.
//!
//! Every integral Seifert matrix V (square, det(V - V^t) = +-1) represents a
//! class of finite order 1, 2, or 4, or of infinite order, in the algebraic
//! concordance group. The classifier decides which, by exact arithmetic:
//!
//! 1. Excise hyperbolic pairs until V is nonsingular; an empty remainder is
//!    algebraically slice.
//! 2. Sample the Tristram-Levine signature function once per plateau. Any
//!    nonzero plateau certifies infinite order; otherwise the order is
//!    finite.
//! 3. Factor the characteristic polynomial of the isometry T = V^{-1} V^t.
//!    If no irreducible factor is symmetric (palindromic up to sign), the
//!    conjugate-pair summands span an explicit invariant metabolizer: slice.
//! 4. If some symmetric factor has odd exponent the class is not slice, so
//!    the order is 2 or 4. Order 4 occurs exactly when, at some prime
//!    p = 3 mod 4, a symmetric irreducible p-adic factor delta of an
//!    odd-exponent symmetric factor has odd valuation v_p(delta(1)
//!    delta(-1)). The engine decides this by integer shortcuts where they
//!    apply (odd valuation of det(V + V^t) or of g(-1)), a mod-p
//!    factor-shape screen, and finally a certified p-adic factorization of
//!    the trace polynomial of g.
//! 5. If every symmetric factor has even exponent the order is 1 or 2: the
//!    class is slice exactly when each primary component is trivial in the
//!    rational Witt group, which is decided exactly by rank, signature,
//!    discriminant, and local symbols at the finitely many relevant primes.
//!
//! Every verdict carries a certificate: a list of steps that can be
//! re-checked independently by [`verify_certificate`].

mod local;

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, int, valuation, Int};
use crate::error::{Error, Result};
use crate::isometric::{
    build_structure, primary_decomposition, reduce_to_nonsingular, verify_metabolizer,
    IsometricStructure, PrimaryDecomposition, ResidualComponent, SeifertMatrix,
};
use crate::linalg::{diagonalize_congruence, DiagForm, Rat, RatMat};
use crate::padic::{screen_symmetric_factors, ScreenVerdict};
use crate::poly::{factor_over_z, poly_at_matrix, Factorization, IntPoly};
use crate::realsig::{signature_profile, tl_signature_at};
use crate::witt::{witt_q_obstruction, WittQObstruction};

use local::{analyze_pair, PieceKind, TraceAnalysis};

/// The algebraic concordance order of a class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Order {
    /// Order 1: the class is trivial (algebraically slice).
    #[serde(rename = "slice")]
    AlgebraicallySlice,
    #[serde(rename = "2")]
    Order2,
    #[serde(rename = "4")]
    Order4,
    #[serde(rename = "infinite")]
    Infinite,
    /// The decision procedure hit a configured resource or precision limit.
    #[serde(rename = "undetermined")]
    Undetermined,
}

impl Order {
    pub fn as_str(&self) -> &'static str {
        match self {
            Order::AlgebraicallySlice => "slice",
            Order::Order2 => "2",
            Order::Order4 => "4",
            Order::Infinite => "infinite",
            Order::Undetermined => "undetermined",
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Order {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "slice" | "1" => Ok(Order::AlgebraicallySlice),
            "2" => Ok(Order::Order2),
            "4" => Ok(Order::Order4),
            "infinite" => Ok(Order::Infinite),
            "undetermined" => Ok(Order::Undetermined),
            other => Err(Error::Parse(format!(
                "unknown order '{other}' (expected slice, 2, 4, infinite, or undetermined)"
            ))),
        }
    }
}

/// Options that affect the decision procedure. The certificate stores them
/// so that verification replays the identical computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    /// The input is declared amphicheiral (its class equals its own
    /// inverse), which caps the finite order at 2. This is trusted input
    /// metadata; it cannot be verified from the matrix alone.
    #[serde(default)]
    pub amphicheiral: bool,
    /// Ceiling on the p-adic working precision p^k.
    #[serde(default = "default_max_precision")]
    pub max_precision: u32,
}

fn default_max_precision() -> u32 {
    64
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            amphicheiral: false,
            max_precision: default_max_precision(),
        }
    }
}

/// A prime power in an integer factorization, with the prime in decimal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePower {
    pub prime: String,
    pub exponent: u32,
}

/// One irreducible factor of the characteristic polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorEntry {
    /// Integer coefficients in decimal, constant term first.
    pub coeffs: Vec<String>,
    pub exponent: u32,
    /// Whether the factor equals its own reverse up to sign.
    pub symmetric: bool,
}

/// One piece of a certified p-adic factorization of a trace polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TracePieceEntry {
    /// Coefficients mod p^precision, constant term first.
    pub coeffs: Vec<String>,
    /// "root", "irreducible", "rootless-cofactor", or "inert-cluster".
    pub kind: String,
    /// v_p(piece(2)) + v_p(piece(-2)).
    pub valuation: u32,
}

/// Rational Witt-group data for one even-exponent primary component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentCheck {
    /// The symmetric irreducible factor, coefficients constant-first.
    pub delta: Vec<String>,
    pub exponent: u32,
    /// Squarefree diagonal entries of the restricted form.
    pub diagonal: Vec<String>,
}

/// One step of a classification certificate. Rational numbers are encoded
/// as "numer/denom" (or "n"), integers in decimal, polynomials as
/// constant-first coefficient lists, and matrices as row-major entry lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule")]
pub enum CertificateStep {
    /// Hyperbolic-pair excisions reduced the matrix to a nonsingular one of
    /// smaller size (Witt-equivalent, so the order is unchanged).
    NonsingularReduction {
        original_size: usize,
        reduced_size: usize,
        excisions: usize,
    },
    /// The Tristram-Levine signature is nonzero on some plateau, so the
    /// class has infinite order.
    SignatureNonzero { sample_y: String, signature: i64 },
    /// The signature function vanishes on every plateau (samples in the
    /// trace coordinate y = 2x), so the class has finite order.
    SignatureProfileZero { sample_y: Vec<String> },
    /// Factorization of the characteristic polynomial of V^{-1} V^t into
    /// irreducible integer polynomials.
    AlexanderFactored {
        sign: i64,
        factors: Vec<FactorEntry>,
    },
    /// No irreducible factor is symmetric.
    NoSymmetricFactor,
    /// Explicit invariant metabolizer spanned by one summand of each
    /// conjugate pair of primary components (columns, ambient coordinates).
    ConjugatePairMetabolizer { basis: Vec<Vec<String>> },
    /// det(V + V^t) has odd valuation at a prime p = 3 mod 4: order four.
    OddValuationObstruction {
        p: String,
        det_q: String,
        valuation: u32,
    },
    /// No prime p = 3 mod 4 divides det(V + V^t), so order four is
    /// impossible; with an odd-exponent symmetric factor present the order
    /// is exactly two.
    NoPrime3Mod4 {
        det_q: String,
        factorization: Vec<PrimePower>,
    },
    /// No odd-exponent symmetric factor g has g(-1) divisible by a prime
    /// p = 3 mod 4 dividing det(V + V^t): order four is impossible.
    CandidateScreen {
        det_q: String,
        primes_3mod4: Vec<String>,
        odd_exponent_factors: Vec<Vec<String>>,
    },
    /// The input was declared amphicheiral, capping the finite order at
    /// two. Unverifiable from the matrix alone.
    Amphicheiral,
    /// An odd-exponent symmetric factor g has odd v_p(g(-1)) at a prime
    /// p = 3 mod 4: some symmetric p-adic factor inherits odd valuation,
    /// so the order is four.
    FactorOddValuation {
        p: String,
        factor: Vec<String>,
        value_at_minus_one: String,
        valuation: u32,
    },
    /// The mod-p factor shapes of g admit no partition with two symmetric
    /// even-degree blocks divisible by (t-1) or (t+1): since odd-valuation
    /// symmetric p-adic factors come in pairs when v_p(g(-1)) is even,
    /// this pair (p, g) cannot produce order four.
    ModPScreen { p: u64, factor: Vec<String> },
    /// Certified p-adic factorization of the trace polynomial of g with
    /// the valuation of each piece at y = +-2. A piece of odd valuation is
    /// an order-four witness; if all pieces have even valuation this pair
    /// is eliminated.
    TraceFactorization {
        p: u64,
        factor: Vec<String>,
        precision: u32,
        pieces: Vec<TracePieceEntry>,
        order4_witness: Option<usize>,
    },
    /// The characteristic polynomial is delta^2 with cyclic module, and
    /// the image of delta(T) is an explicit invariant metabolizer.
    CyclicSquareMetabolizer {
        delta: Vec<String>,
        basis: Vec<Vec<String>>,
    },
    /// Every symmetric factor has even exponent and every primary
    /// component is trivial in the rational Witt group: slice.
    EvenExponentComponents { components: Vec<ComponentCheck> },
    /// An even-exponent primary component is nontrivial in the rational
    /// Witt group, witnessed locally at p: the order is exactly two.
    LocalObstruction {
        p: u64,
        delta: Vec<String>,
        diagonal: Vec<String>,
    },
    /// The p-adic analysis would need more precision than allowed.
    PrecisionCeiling {
        p: u64,
        requested: u32,
        ceiling: u32,
    },
    /// A local factor could not be certified at this prime.
    UnresolvedLocalFactor { p: String, description: String },
}

/// The verdict for one Seifert matrix: the order, the certificate trail
/// that justifies it, and the options under which it was computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderVerdict {
    pub order: Order,
    /// Present exactly for undetermined verdicts: what blocked the
    /// decision.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub certificate: Vec<CertificateStep>,
    pub options: ClassifyOptions,
}

// ---------------------------------------------------------------------
// string encoding helpers
// ---------------------------------------------------------------------

fn int_strings(xs: &[Int]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

fn poly_strings(f: &IntPoly) -> Vec<String> {
    int_strings(f.coeffs())
}

fn mat_strings(m: &RatMat) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)].to_string()).collect())
        .collect()
}

fn parse_int(s: &str) -> Result<Int> {
    s.parse::<Int>()
        .map_err(|e| Error::Parse(format!("invalid integer '{s}': {e}")))
}

fn parse_rat(s: &str) -> Result<Rat> {
    s.parse::<Rat>()
        .map_err(|e| Error::Parse(format!("invalid rational '{s}': {e}")))
}

fn parse_poly(coeffs: &[String]) -> Result<IntPoly> {
    let cs = coeffs.iter().map(|c| parse_int(c)).collect::<Result<_>>()?;
    Ok(IntPoly::from_coeffs(cs))
}

fn parse_mat(rows: &[Vec<String>]) -> Result<RatMat> {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    let mut data = Vec::with_capacity(r * c);
    for row in rows {
        if row.len() != c {
            return Err(Error::Parse("ragged matrix rows".into()));
        }
        for s in row {
            data.push(parse_rat(s)?);
        }
    }
    RatMat::new(r, c, data)
}

fn parse_diag(entries: &[String]) -> Result<DiagForm> {
    let rats = entries
        .iter()
        .map(|s| Ok(Rat::from_integer(parse_int(s)?)))
        .collect::<Result<Vec<_>>>()?;
    DiagForm::from_rationals(&rats)
}

fn piece_kind_str(kind: PieceKind) -> &'static str {
    match kind {
        PieceKind::Root => "root",
        PieceKind::Irreducible => "irreducible",
        PieceKind::RootlessCofactor => "rootless-cofactor",
        PieceKind::InertCluster => "inert-cluster",
    }
}

// ---------------------------------------------------------------------
// classification
// ---------------------------------------------------------------------

fn verdict(order: Order, certificate: Vec<CertificateStep>, options: &ClassifyOptions) -> OrderVerdict {
    OrderVerdict {
        order,
        reason: None,
        certificate,
        options: *options,
    }
}

fn undetermined(
    certificate: Vec<CertificateStep>,
    options: &ClassifyOptions,
    reason: String,
) -> OrderVerdict {
    OrderVerdict {
        order: Order::Undetermined,
        reason: Some(reason),
        certificate,
        options: *options,
    }
}

/// Sign of the factorization unit of a primitive polynomial: +-1.
fn factorization_sign(fact: &Factorization) -> Result<i64> {
    if fact.unit.is_one() {
        Ok(1)
    } else if (-&fact.unit).is_one() {
        Ok(-1)
    } else {
        Err(Error::Inconsistency(format!(
            "non-unit content {} when factoring a primitive polynomial",
            fact.unit
        )))
    }
}

fn factored_step(fact: &Factorization) -> Result<CertificateStep> {
    Ok(CertificateStep::AlexanderFactored {
        sign: factorization_sign(fact)?,
        factors: fact
            .factors
            .iter()
            .map(|(f, e)| FactorEntry {
                coeffs: poly_strings(f),
                exponent: *e,
                symmetric: f.symmetry() == Some(1),
            })
            .collect(),
    })
}

/// Check that `ambient` spans a T-invariant totally isotropic subspace of
/// exactly half the dimension of the primary part belonging to the
/// asymmetric factor pairs of the characteristic polynomial (and is contained
/// in that part). This is the Witt-triviality witness for the residual
/// component; the symmetric components are judged separately.
fn check_residual_metabolizer(s: &IsometricStructure, ambient: &RatMat) -> Result<bool> {
    let n = s.dim();
    if ambient.rows() != n {
        return Ok(false);
    }
    let d = ambient.cols();
    let fact = factor_over_z(s.charpoly())?;
    let mut residual_dim = 0usize;
    let mut annihilator = IntPoly::one();
    for (f, e) in &fact.factors {
        if f.symmetry() != Some(1) {
            residual_dim += (*e as usize) * f.deg();
            annihilator = annihilator.mul(&f.pow(*e));
        }
    }
    if d == 0 || residual_dim != 2 * d || ambient.rank() != d {
        return Ok(false);
    }
    // Containment in the residual primary part.
    let ann = poly_at_matrix(&annihilator, s.t())?;
    if !ann.mul(ambient)?.is_zero() {
        return Ok(false);
    }
    // Total isotropy.
    if !ambient.transpose().mul(s.q())?.mul(ambient)?.is_zero() {
        return Ok(false);
    }
    // T-invariance: T * ambient stays inside the span of ambient.
    let tb = s.t().mul(ambient)?;
    let mut cols: Vec<Vec<Rat>> = Vec::new();
    for c in 0..d {
        cols.push((0..n).map(|r| ambient[(r, c)].clone()).collect());
    }
    for c in 0..tb.cols() {
        cols.push((0..n).map(|r| tb[(r, c)].clone()).collect());
    }
    Ok(RatMat::from_columns(n, &cols)?.rank() == d)
}

/// Re-verify the residual metabolizer in ambient coordinates and emit the
/// certificate step carrying the explicit basis.
fn residual_step(s: &IsometricStructure, res: &ResidualComponent) -> Result<CertificateStep> {
    let ambient = res.basis.mul(&res.metabolizer)?;
    if !check_residual_metabolizer(s, &ambient)? {
        return Err(Error::Inconsistency(
            "residual metabolizer failed ambient re-verification".into(),
        ));
    }
    Ok(CertificateStep::ConjugatePairMetabolizer {
        basis: mat_strings(&ambient),
    })
}

fn trace_step(g: &IntPoly, analysis: &TraceAnalysis) -> CertificateStep {
    CertificateStep::TraceFactorization {
        p: analysis.p,
        factor: poly_strings(g),
        precision: analysis.precision,
        pieces: analysis
            .pieces
            .iter()
            .map(|piece| TracePieceEntry {
                coeffs: int_strings(&piece.coeffs),
                kind: piece_kind_str(piece.kind).to_string(),
                valuation: piece.valuation,
            })
            .collect(),
        order4_witness: analysis.witness,
    }
}

/// Classify the algebraic concordance order of a Seifert matrix.
pub fn classify(v: &SeifertMatrix, options: &ClassifyOptions) -> Result<OrderVerdict> {
    let mut cert: Vec<CertificateStep> = Vec::new();
    let reduction = reduce_to_nonsingular(v)?;
    let w = reduction.reduced;
    if !reduction.steps.is_empty() {
        cert.push(CertificateStep::NonsingularReduction {
            original_size: v.size(),
            reduced_size: w.size(),
            excisions: reduction.steps.len(),
        });
    }
    if w.size() == 0 {
        return Ok(verdict(Order::AlgebraicallySlice, cert, options));
    }

    let profile = signature_profile(w.matrix())?;
    if let Some(i) = profile.plateau_values.iter().position(|&s| s != 0) {
        cert.push(CertificateStep::SignatureNonzero {
            sample_y: profile.sample_points[i].to_string(),
            signature: profile.plateau_values[i],
        });
        return Ok(verdict(Order::Infinite, cert, options));
    }
    cert.push(CertificateStep::SignatureProfileZero {
        sample_y: profile.sample_points.iter().map(|y| y.to_string()).collect(),
    });

    let s = build_structure(&w)?;
    let fact = factor_over_z(s.charpoly())?;
    cert.push(factored_step(&fact)?);
    let decomp = primary_decomposition(&s, &fact)?;

    if decomp.components.is_empty() {
        cert.push(CertificateStep::NoSymmetricFactor);
        let residual = decomp.residual.as_ref().ok_or_else(|| {
            Error::Inconsistency("no primary components on a nonempty structure".into())
        })?;
        cert.push(residual_step(&s, residual)?);
        return Ok(verdict(Order::AlgebraicallySlice, cert, options));
    }

    if decomp.components.iter().any(|c| c.exponent % 2 == 1) {
        classify_odd_exponent(&w, &decomp, cert, options)
    } else {
        classify_even_exponent(&s, &fact, &decomp, cert, options)
    }
}

/// Some symmetric factor has odd exponent: the class is not slice, and the
/// order is 2 or 4 depending on the local analysis at primes p = 3 mod 4.
fn classify_odd_exponent(
    w: &SeifertMatrix,
    decomp: &PrimaryDecomposition,
    mut cert: Vec<CertificateStep>,
    options: &ClassifyOptions,
) -> Result<OrderVerdict> {
    let q_int = w.matrix().add(&w.matrix().transpose())?;
    let det_q = q_int.det()?;
    if det_q.is_zero() {
        return Err(Error::Inconsistency(
            "det(V + V^t) = 0 on a nonsingular Seifert matrix".into(),
        ));
    }
    let det_str = det_q.to_string();
    let fac = match factorize(&det_q.abs()) {
        Ok(f) => f,
        Err(Error::FactorizationLimit { n }) => {
            return Ok(undetermined(
                cert,
                options,
                format!("integer factorization limit reached on det(V + V^t) = {n}"),
            ))
        }
        Err(e) => return Err(e),
    };
    let four = int(4);
    let three = int(3);

    // Odd valuation of det(V + V^t) at a prime p = 3 mod 4 settles order
    // four outright.
    for (p, e) in &fac {
        if p.mod_floor(&four) == three && e % 2 == 1 {
            cert.push(CertificateStep::OddValuationObstruction {
                p: p.to_string(),
                det_q: det_str,
                valuation: *e,
            });
            return Ok(verdict(Order::Order4, cert, options));
        }
    }

    // No prime 3 mod 4 at all: order four is impossible.
    let primes3: Vec<Int> = fac
        .iter()
        .filter(|(p, _)| p.mod_floor(&four) == three)
        .map(|(p, _)| p.clone())
        .collect();
    if primes3.is_empty() {
        cert.push(CertificateStep::NoPrime3Mod4 {
            det_q: det_str,
            factorization: fac
                .iter()
                .map(|(p, e)| PrimePower {
                    prime: p.to_string(),
                    exponent: *e,
                })
                .collect(),
        });
        return Ok(verdict(Order::Order2, cert, options));
    }

    // Candidate pairs: a prime p = 3 mod 4 can only obstruct through an
    // odd-exponent symmetric factor g with p | g(-1).
    let odd_factors: Vec<(&IntPoly, Int)> = decomp
        .components
        .iter()
        .filter(|c| c.exponent % 2 == 1)
        .map(|c| {
            let vm1 = c.delta.eval_int(&int(-1));
            (&c.delta, vm1)
        })
        .collect();
    let mut pairs: Vec<(&Int, &IntPoly, &Int)> = Vec::new();
    for p in &primes3 {
        for (g, vm1) in &odd_factors {
            if vm1.mod_floor(p).is_zero() {
                pairs.push((p, g, vm1));
            }
        }
    }
    if pairs.is_empty() {
        cert.push(CertificateStep::CandidateScreen {
            det_q: det_str,
            primes_3mod4: primes3.iter().map(|p| p.to_string()).collect(),
            odd_exponent_factors: odd_factors.iter().map(|(g, _)| poly_strings(g)).collect(),
        });
        return Ok(verdict(Order::Order2, cert, options));
    }

    // Declared amphicheirality caps the finite order at two, short-cutting
    // the local analysis. Proven order-four obstructions above still win
    // over the declaration.
    if options.amphicheiral {
        cert.push(CertificateStep::Amphicheiral);
        return Ok(verdict(Order::Order2, cert, options));
    }

    let mut unresolved: Vec<String> = Vec::new();
    for (p, g, vm1) in pairs {
        // Odd valuation of g(-1) already forces an odd-valuation symmetric
        // p-adic factor (valuations of symmetric factors sum to v_p(g(1)
        // g(-1)) and pair factors contribute evenly).
        let val = valuation(vm1, p);
        if val % 2 == 1 {
            cert.push(CertificateStep::FactorOddValuation {
                p: p.to_string(),
                factor: poly_strings(g),
                value_at_minus_one: vm1.to_string(),
                valuation: val,
            });
            return Ok(verdict(Order::Order4, cert, options));
        }
        let pu = match u64::try_from(p) {
            Ok(pu) => pu,
            Err(_) => {
                let description =
                    "prime exceeds the supported range for local analysis".to_string();
                cert.push(CertificateStep::UnresolvedLocalFactor {
                    p: p.to_string(),
                    description: description.clone(),
                });
                unresolved.push(format!("p = {p}: {description}"));
                continue;
            }
        };
        // Cheap mod-p screen: with v_p(g(-1)) even, odd-valuation symmetric
        // p-adic factors come in pairs, so a factor-shape partition with
        // two qualifying blocks must exist for order four to be possible.
        match screen_symmetric_factors(g, pu) {
            Ok(report) if report.verdict == ScreenVerdict::Impossible => {
                cert.push(CertificateStep::ModPScreen {
                    p: pu,
                    factor: poly_strings(g),
                });
                continue;
            }
            Ok(_) => {}
            Err(Error::SearchTooLarge(msg)) => {
                cert.push(CertificateStep::UnresolvedLocalFactor {
                    p: pu.to_string(),
                    description: msg.clone(),
                });
                unresolved.push(format!("p = {pu}: {msg}"));
                continue;
            }
            Err(e) => return Err(e),
        }
        match analyze_pair(g, pu, options.max_precision) {
            Ok(analysis) => {
                let found = analysis.witness.is_some();
                cert.push(trace_step(g, &analysis));
                if found {
                    return Ok(verdict(Order::Order4, cert, options));
                }
            }
            Err(Error::PrecisionCeiling {
                p,
                requested,
                ceiling,
            }) => {
                cert.push(CertificateStep::PrecisionCeiling {
                    p,
                    requested,
                    ceiling,
                });
                unresolved.push(format!(
                    "precision ceiling at p = {p}: needs {requested}, ceiling {ceiling}"
                ));
            }
            Err(Error::LiftFailed { p, reason }) => {
                cert.push(CertificateStep::UnresolvedLocalFactor {
                    p: p.to_string(),
                    description: reason.clone(),
                });
                unresolved.push(format!("p = {p}: {reason}"));
            }
            Err(Error::LeadingCoefficientDivisible { p, poly }) => {
                let description = format!("p divides the leading coefficient of {poly}");
                cert.push(CertificateStep::UnresolvedLocalFactor {
                    p: p.to_string(),
                    description: description.clone(),
                });
                unresolved.push(format!("p = {p}: {description}"));
            }
            Err(e) => return Err(e),
        }
    }
    if let Some(first) = unresolved.into_iter().next() {
        return Ok(undetermined(cert, options, first));
    }
    Ok(verdict(Order::Order2, cert, options))
}

/// Every symmetric factor has even exponent: the order is 1 or 2, decided
/// by exact rational Witt-group triviality of each primary component.
fn classify_even_exponent(
    s: &IsometricStructure,
    fact: &Factorization,
    decomp: &PrimaryDecomposition,
    mut cert: Vec<CertificateStep>,
    options: &ClassifyOptions,
) -> Result<OrderVerdict> {
    // Constructive shortcut: characteristic polynomial delta^2 with cyclic
    // module. The image of delta(T) is then the only candidate invariant
    // half-dimensional subspace; if it is a metabolizer, exhibit it.
    if fact.factors.len() == 1 && fact.factors[0].1 == 2 {
        let delta = &fact.factors[0].0;
        let a = poly_at_matrix(delta, s.t())?;
        if !a.is_zero() {
            let basis = RatMat::from_columns(s.dim(), &a.image_basis())?;
            if verify_metabolizer(s.q(), &basis, Some(s.t()))? {
                cert.push(CertificateStep::CyclicSquareMetabolizer {
                    delta: poly_strings(delta),
                    basis: mat_strings(&basis),
                });
                return Ok(verdict(Order::AlgebraicallySlice, cert, options));
            }
        }
    }

    let mut checks: Vec<ComponentCheck> = Vec::new();
    for comp in &decomp.components {
        let (diag, _) = diagonalize_congruence(&comp.q_restricted)?;
        match witt_q_obstruction(&diag) {
            Ok(None) => checks.push(ComponentCheck {
                delta: poly_strings(&comp.delta),
                exponent: comp.exponent,
                diagonal: int_strings(diag.entries()),
            }),
            Ok(Some(WittQObstruction::LocalPrime { p })) => {
                cert.push(CertificateStep::LocalObstruction {
                    p,
                    delta: poly_strings(&comp.delta),
                    diagonal: int_strings(diag.entries()),
                });
                return Ok(verdict(Order::Order2, cert, options));
            }
            Ok(Some(WittQObstruction::OddRank { rank })) => {
                return Err(Error::Inconsistency(format!(
                    "odd rank {rank} on an even-exponent primary component"
                )))
            }
            Ok(Some(WittQObstruction::Signature { value })) => {
                return Err(Error::Inconsistency(format!(
                    "component signature {value} under an identically zero signature profile"
                )))
            }
            Err(Error::FactorizationLimit { n }) => {
                return Ok(undetermined(
                    cert,
                    options,
                    format!("integer factorization limit reached on {n} while testing a component form"),
                ))
            }
            Err(Error::SearchTooLarge(msg)) => return Ok(undetermined(cert, options, msg)),
            Err(e) => return Err(e),
        }
    }
    cert.push(CertificateStep::EvenExponentComponents { components: checks });
    if let Some(res) = &decomp.residual {
        cert.push(residual_step(s, res)?);
    }
    Ok(verdict(Order::AlgebraicallySlice, cert, options))
}

/// Classify a batch of matrices with per-item options.
pub fn classify_batch(inputs: &[(SeifertMatrix, ClassifyOptions)]) -> Vec<Result<OrderVerdict>> {
    inputs.iter().map(|(v, o)| classify(v, o)).collect()
}

// ---------------------------------------------------------------------
// certificate verification
// ---------------------------------------------------------------------

fn fail(msg: impl Into<String>) -> Error {
    Error::CertificateInvalid(msg.into())
}

/// Multiplicity of g in f by repeated exact division (g nonconstant).
fn multiplicity(f: &IntPoly, g: &IntPoly) -> Result<u32> {
    if g.deg() == 0 {
        return Err(fail("constant polynomial cannot be a factor"));
    }
    let mut h = f.clone();
    let mut e = 0u32;
    while let Some(q) = h.div_exact(g) {
        e += 1;
        h = q;
    }
    Ok(e)
}

/// Verify an order verdict against the matrix it claims to describe: the
/// whole computation is replayed under the stored options and must
/// reproduce the verdict bit for bit, and each certificate step is
/// additionally re-checked on its own terms. The amphicheirality
/// declaration is input metadata and is the one step that cannot be
/// checked from the matrix.
pub fn verify_certificate(v: &SeifertMatrix, claimed: &OrderVerdict) -> Result<()> {
    let recomputed = classify(v, &claimed.options)?;
    if &recomputed != claimed {
        return Err(fail(
            "independent replay produced a different verdict or certificate",
        ));
    }

    let reduction = reduce_to_nonsingular(v)?;
    let w = reduction.reduced;
    let structure = if w.size() > 0 {
        Some(build_structure(&w)?)
    } else {
        None
    };
    let half = Rat::new(int(1), int(2));

    for step in &claimed.certificate {
        match step {
            CertificateStep::NonsingularReduction {
                original_size,
                reduced_size,
                excisions,
            } => {
                if *original_size != v.size()
                    || *reduced_size != w.size()
                    || *excisions != reduction.steps.len()
                    || original_size - reduced_size != 2 * excisions
                {
                    return Err(fail("nonsingular reduction data does not match"));
                }
            }
            CertificateStep::SignatureNonzero {
                sample_y,
                signature,
            } => {
                if *signature == 0 {
                    return Err(fail("claimed nonzero signature is zero"));
                }
                let x = parse_rat(sample_y)? * &half;
                if tl_signature_at(w.matrix(), &x)? != *signature {
                    return Err(fail("signature sample does not reproduce"));
                }
            }
            CertificateStep::SignatureProfileZero { sample_y } => {
                for ys in sample_y {
                    let x = parse_rat(ys)? * &half;
                    if tl_signature_at(w.matrix(), &x)? != 0 {
                        return Err(fail("claimed zero plateau has nonzero signature"));
                    }
                }
            }
            CertificateStep::AlexanderFactored { sign, factors } => {
                let s = need_structure(&structure)?;
                if *sign != 1 && *sign != -1 {
                    return Err(fail("factorization sign must be +-1"));
                }
                let mut product = IntPoly::one();
                for entry in factors {
                    let f = parse_poly(&entry.coeffs)?;
                    if entry.symmetric != (f.symmetry() == Some(1)) {
                        return Err(fail("factor symmetry flag is wrong"));
                    }
                    product = product.mul(&f.pow(entry.exponent));
                }
                if *sign == -1 {
                    product = product.mul(&IntPoly::from_i64(&[-1]));
                }
                if &product != s.charpoly() {
                    return Err(fail(
                        "factorization does not multiply back to the characteristic polynomial",
                    ));
                }
            }
            CertificateStep::NoSymmetricFactor => {
                let all_asymmetric = claimed.certificate.iter().any(|other| {
                    matches!(other, CertificateStep::AlexanderFactored { factors, .. }
                        if factors.iter().all(|f| !f.symmetric))
                });
                if !all_asymmetric {
                    return Err(fail(
                        "no-symmetric-factor claim contradicts the factorization step",
                    ));
                }
            }
            CertificateStep::ConjugatePairMetabolizer { basis } => {
                let s = need_structure(&structure)?;
                let b = parse_mat(basis)?;
                if !check_residual_metabolizer(s, &b)? {
                    return Err(fail("claimed metabolizer fails verification"));
                }
            }
            CertificateStep::OddValuationObstruction {
                p,
                det_q,
                valuation: val,
            } => {
                let pi = parse_int(p)?;
                let d = parse_int(det_q)?;
                check_det_q(&w, &d)?;
                if !crate::arith::is_prime(&pi) || pi.mod_floor(&int(4)) != int(3) {
                    return Err(fail("obstruction prime is not a prime 3 mod 4"));
                }
                if *val % 2 == 0 || valuation(&d, &pi) != *val {
                    return Err(fail("claimed odd valuation of det(V + V^t) is wrong"));
                }
            }
            CertificateStep::NoPrime3Mod4 {
                det_q,
                factorization,
            } => {
                let d = parse_int(det_q)?;
                check_det_q(&w, &d)?;
                let mut product = int(1);
                for pp in factorization {
                    let pi = parse_int(&pp.prime)?;
                    if !crate::arith::is_prime(&pi) {
                        return Err(fail("claimed factorization contains a non-prime"));
                    }
                    if pi.mod_floor(&int(4)) == int(3) {
                        return Err(fail("a prime 3 mod 4 divides det(V + V^t)"));
                    }
                    product *= pi.pow(pp.exponent);
                }
                if product != d.abs() {
                    return Err(fail(
                        "claimed factorization does not multiply back to det(V + V^t)",
                    ));
                }
            }
            CertificateStep::CandidateScreen {
                det_q,
                primes_3mod4,
                odd_exponent_factors,
            } => {
                let s = need_structure(&structure)?;
                let d = parse_int(det_q)?;
                check_det_q(&w, &d)?;
                let primes = primes_3mod4
                    .iter()
                    .map(|ps| parse_int(ps))
                    .collect::<Result<Vec<_>>>()?;
                for pi in &primes {
                    if !crate::arith::is_prime(pi)
                        || pi.mod_floor(&int(4)) != int(3)
                        || !d.mod_floor(pi).is_zero()
                    {
                        return Err(fail("screen prime is not a prime 3 mod 4 dividing det(V + V^t)"));
                    }
                }
                for coeffs in odd_exponent_factors {
                    let g = parse_poly(coeffs)?;
                    if g.symmetry() != Some(1) {
                        return Err(fail("screened factor is not symmetric"));
                    }
                    if multiplicity(s.charpoly(), &g)? % 2 == 0 {
                        return Err(fail("screened factor does not have odd exponent"));
                    }
                    let vm1 = g.eval_int(&int(-1));
                    for pi in &primes {
                        if vm1.mod_floor(pi).is_zero() {
                            return Err(fail(
                                "a screened factor has g(-1) divisible by a candidate prime",
                            ));
                        }
                    }
                }
            }
            CertificateStep::Amphicheiral => {
                if !claimed.options.amphicheiral {
                    return Err(fail(
                        "amphicheiral step without the amphicheiral option",
                    ));
                }
            }
            CertificateStep::FactorOddValuation {
                p,
                factor,
                value_at_minus_one,
                valuation: val,
            } => {
                let s = need_structure(&structure)?;
                let pi = parse_int(p)?;
                let g = parse_poly(factor)?;
                let vm1 = parse_int(value_at_minus_one)?;
                if !crate::arith::is_prime(&pi) || pi.mod_floor(&int(4)) != int(3) {
                    return Err(fail("obstruction prime is not a prime 3 mod 4"));
                }
                if g.symmetry() != Some(1) || multiplicity(s.charpoly(), &g)? % 2 == 0 {
                    return Err(fail(
                        "factor is not a symmetric odd-exponent factor of the characteristic polynomial",
                    ));
                }
                if g.eval_int(&int(-1)) != vm1 {
                    return Err(fail("claimed g(-1) is wrong"));
                }
                if *val % 2 == 0 || valuation(&vm1, &pi) != *val {
                    return Err(fail("claimed odd valuation of g(-1) is wrong"));
                }
            }
            CertificateStep::ModPScreen { p, factor } => {
                let s = need_structure(&structure)?;
                let g = parse_poly(factor)?;
                if g.symmetry() != Some(1) || multiplicity(s.charpoly(), &g)? == 0 {
                    return Err(fail(
                        "screened polynomial is not a symmetric factor of the characteristic polynomial",
                    ));
                }
                if valuation(&g.eval_int(&int(-1)), &int(*p as i64)) % 2 == 1 {
                    return Err(fail(
                        "mod-p screen applied where v_p(g(-1)) is odd",
                    ));
                }
                let report = screen_symmetric_factors(&g, *p)?;
                if report.verdict != ScreenVerdict::Impossible {
                    return Err(fail("mod-p screen does not rule this pair out"));
                }
            }
            CertificateStep::TraceFactorization {
                p,
                factor,
                precision,
                pieces,
                order4_witness,
            } => {
                let g = parse_poly(factor)?;
                let analysis = analyze_pair(&g, *p, claimed.options.max_precision)
                    .map_err(|e| fail(format!("claimed trace analysis cannot be reproduced: {e}")))?;
                let recomputed: Vec<TracePieceEntry> = analysis
                    .pieces
                    .iter()
                    .map(|piece| TracePieceEntry {
                        coeffs: int_strings(&piece.coeffs),
                        kind: piece_kind_str(piece.kind).to_string(),
                        valuation: piece.valuation,
                    })
                    .collect();
                if analysis.precision != *precision
                    || &recomputed != pieces
                    || analysis.witness != *order4_witness
                {
                    return Err(fail("trace factorization data does not reproduce"));
                }
                if let Some(i) = order4_witness {
                    if pieces.get(*i).is_none_or(|piece| piece.valuation % 2 == 0) {
                        return Err(fail("claimed order-four witness has even valuation"));
                    }
                }
            }
            CertificateStep::CyclicSquareMetabolizer { delta, basis } => {
                let s = need_structure(&structure)?;
                let d = parse_poly(delta)?;
                if multiplicity(s.charpoly(), &d)? != 2 {
                    return Err(fail(
                        "claimed cyclic-square factor does not divide squarely",
                    ));
                }
                let b = parse_mat(basis)?;
                if !verify_metabolizer(s.q(), &b, Some(s.t()))? {
                    return Err(fail("claimed metabolizer fails verification"));
                }
            }
            CertificateStep::EvenExponentComponents { components } => {
                let s = need_structure(&structure)?;
                for comp in components {
                    if comp.exponent % 2 == 1 {
                        return Err(fail("component exponent is odd"));
                    }
                    let d = parse_poly(&comp.delta)?;
                    if d.symmetry() != Some(1)
                        || multiplicity(s.charpoly(), &d)? != comp.exponent
                    {
                        return Err(fail(
                            "component factor or exponent does not match the characteristic polynomial",
                        ));
                    }
                    let form = parse_diag(&comp.diagonal)?;
                    if witt_q_obstruction(&form)?.is_some() {
                        return Err(fail(
                            "claimed trivial component form has a Witt obstruction",
                        ));
                    }
                }
            }
            CertificateStep::LocalObstruction { p, delta, diagonal } => {
                let s = need_structure(&structure)?;
                let d = parse_poly(delta)?;
                if multiplicity(s.charpoly(), &d)? == 0 {
                    return Err(fail(
                        "obstructed factor does not divide the characteristic polynomial",
                    ));
                }
                let form = parse_diag(diagonal)?;
                match witt_q_obstruction(&form)? {
                    Some(WittQObstruction::LocalPrime { p: q }) if q == *p => {}
                    _ => {
                        return Err(fail(
                            "claimed local obstruction does not reproduce",
                        ))
                    }
                }
            }
            CertificateStep::PrecisionCeiling {
                requested, ceiling, ..
            } => {
                if *ceiling != claimed.options.max_precision || requested <= ceiling {
                    return Err(fail("precision ceiling step is inconsistent"));
                }
            }
            CertificateStep::UnresolvedLocalFactor { .. } => {
                // Consistency is covered by the replay comparison.
            }
        }
    }
    Ok(())
}

fn need_structure(s: &Option<IsometricStructure>) -> Result<&IsometricStructure> {
    s.as_ref()
        .ok_or_else(|| fail("certificate step needs a nonempty reduced matrix"))
}

/// The det_q claimed in a certificate must equal det(V + V^t) of the
/// reduced matrix.
fn check_det_q(w: &SeifertMatrix, claimed: &Int) -> Result<()> {
    let q = w.matrix().add(&w.matrix().transpose())?;
    if &q.det()? != claimed {
        return Err(fail("claimed det(V + V^t) is wrong"));
    }
    Ok(())
}
