//! Witt-group invariants over finite fields and p-adic fields.
//!
//! For odd p, a diagonal form over Q_p splits through the two residue maps
//! into an "even part" and an "odd part" (by valuation parity of the
//! entries), each landing in W(F_p), where a class is determined by rank
//! parity and discriminant. For p = 2 the full W(Q_2) class is carried by
//! the triple (rank parity, discriminant class mod squares, Hasse symbol),
//! validated against a generator table in [`q2`].

pub mod q2;

pub use q2::{hilbert2, WittQ2Class};

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::arith::{factorize, int, legendre, valuation, Int};
use crate::error::{Error, Result};
use crate::linalg::DiagForm;

// ---------------------------------------------------------------------------
// Forms over F_p and their Witt invariants
// ---------------------------------------------------------------------------

/// A diagonal quadratic form over F_p (odd p) with unit entries in [1, p-1].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueForm {
    pub p: u64,
    /// Diagonal entries as residues in [1, p-1], sorted ascending.
    pub entries: Vec<u64>,
}

impl ResidueForm {
    pub fn new(p: u64, mut entries: Vec<u64>) -> Result<ResidueForm> {
        if p < 3 || p.is_multiple_of(2) {
            return Err(Error::InvalidForm(format!(
                "residue forms need an odd prime, got {p}"
            )));
        }
        for e in entries.iter_mut() {
            *e %= p;
            if *e == 0 {
                return Err(Error::InvalidForm(
                    "residue form entries must be units".into(),
                ));
            }
        }
        entries.sort_unstable();
        Ok(ResidueForm { p, entries })
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn rank_odd(&self) -> bool {
        self.rank() % 2 == 1
    }

    /// Whether det = prod of entries is a quadratic non-residue mod p.
    pub fn det_nonresidue(&self) -> bool {
        let pi = int(self.p as i64);
        let mut det = int(1);
        for &e in &self.entries {
            det = (det * int(e as i64)) % &pi;
        }
        legendre(&det, &pi) == -1
    }

    /// Whether the discriminant (-1)^{r(r-1)/2} det is a non-residue.
    pub fn disc_nonresidue(&self) -> bool {
        let r = self.rank();
        let sign_flips = (r * (r.saturating_sub(1)) / 2) % 2 == 1;
        let minus_one_nonresidue = self.p % 4 == 3;
        self.det_nonresidue() != (sign_flips && minus_one_nonresidue)
    }

    /// Trivial in W(F_p): even rank and square discriminant.
    pub fn witt_trivial(&self) -> bool {
        !self.rank_odd() && !self.disc_nonresidue()
    }

    /// Same class in W(F_p): equal rank parity and discriminant class.
    pub fn witt_eq(&self, other: &ResidueForm) -> bool {
        self.p == other.p
            && self.rank_odd() == other.rank_odd()
            && self.disc_nonresidue() == other.disc_nonresidue()
    }

    pub fn direct_sum(&self, other: &ResidueForm) -> Result<ResidueForm> {
        if self.p != other.p {
            return Err(Error::Shape("residue forms at different primes".into()));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        ResidueForm::new(self.p, entries)
    }
}

impl std::fmt::Display for ResidueForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "<")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "> over F_{}", self.p)
    }
}

/// The two residue images of a diagonal form over Q_p (odd p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiSplit {
    /// Units of the even-valuation entries.
    pub even: ResidueForm,
    /// Units of the odd-valuation entries.
    pub odd: ResidueForm,
}

/// Split a diagonal form with nonzero integer entries through the residue
/// maps at an odd prime: each entry a = p^v u contributes the unit residue
/// u mod p to the even or odd part according to the parity of v.
pub fn psi_split(form: &DiagForm, p: u64) -> Result<PsiSplit> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(Error::InvalidForm(format!(
            "psi_split needs an odd prime, got {p}"
        )));
    }
    let pi = int(p as i64);
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for a in form.entries() {
        if a.is_zero() {
            return Err(Error::InvalidForm("zero entry in diagonal form".into()));
        }
        let v = valuation(a, &pi);
        let unit = a / pi.pow(v);
        let residue = unit.mod_floor(&pi);
        let r = u64::try_from(&residue).expect("residue fits in u64");
        if v.is_multiple_of(2) {
            even.push(r);
        } else {
            odd.push(r);
        }
    }
    Ok(PsiSplit {
        even: ResidueForm::new(p, even)?,
        odd: ResidueForm::new(p, odd)?,
    })
}

// ---------------------------------------------------------------------------
// Valuation-parity obstruction
// ---------------------------------------------------------------------------

/// The smallest prime p = 3 mod 4 at which the integer d has odd valuation,
/// if any. Requires a complete factorization of d.
pub fn odd_valuation_prime_3mod4(d: &Int) -> Result<Option<u64>> {
    if d.is_zero() {
        return Err(Error::InvalidForm("valuation parity of 0".into()));
    }
    let mut witnesses: Vec<u64> = factorize(&d.abs())?
        .into_iter()
        .filter(|(p, e)| e % 2 == 1 && p.mod_floor(&int(4)) == int(3))
        .map(|(p, _)| u64::try_from(&p).expect("prime fits"))
        .collect();
    witnesses.sort_unstable();
    Ok(witnesses.into_iter().next())
}

// ---------------------------------------------------------------------------
// Exact Witt-triviality over Q
// ---------------------------------------------------------------------------

/// Why a nonsingular diagonal form over Q fails to be Witt-trivial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WittQObstruction {
    /// Odd rank: no hyperbolic form has odd rank.
    OddRank { rank: usize },
    /// Nonzero signature: nontrivial over the reals.
    Signature { value: i64 },
    /// Nontrivial class in W(Q_p) at this prime.
    LocalPrime { p: u64 },
}

/// Exact Witt-triviality test over Q: a nonsingular form is trivial in W(Q)
/// iff it is hyperbolic, iff it has even rank 2m, zero signature, square
/// discriminant (-1)^m det, and trivial class in W(Q_p) at p = 2 and at
/// every odd prime dividing an entry. At all other completions triviality is
/// automatic: both residue parts at such a prime have even rank and square
/// discriminant once the global discriminant is a square.
///
/// Returns `None` when the form is Witt-trivial, otherwise one obstruction.
pub fn witt_q_obstruction(form: &DiagForm) -> Result<Option<WittQObstruction>> {
    let n = form.rank();
    if n % 2 == 1 {
        return Ok(Some(WittQObstruction::OddRank { rank: n }));
    }
    if n == 0 {
        return Ok(None);
    }
    let sig = form.signature();
    if sig != 0 {
        return Ok(Some(WittQObstruction::Signature { value: sig }));
    }
    let m = n / 2;
    let mut prod = int(1);
    for e in form.entries() {
        prod *= e;
    }
    let signed = if m % 2 == 1 { -prod.clone() } else { prod.clone() };
    let disc_class = crate::arith::squarefree_part(&signed)?;
    if disc_class != int(1) {
        // Report a prime where the discriminant class is a local nonsquare:
        // any odd prime dividing the squarefree class (odd valuation there),
        // else p = 2 (the class is then -1 or +-2, a 2-adic nonsquare).
        for (q, _) in factorize(&disc_class.abs())? {
            if q.is_odd() {
                return Ok(Some(WittQObstruction::LocalPrime {
                    p: u64::try_from(&q).map_err(|_| {
                        Error::SearchTooLarge("discriminant prime exceeds u64".into())
                    })?,
                }));
            }
        }
        return Ok(Some(WittQObstruction::LocalPrime { p: 2 }));
    }
    let mut primes: Vec<u64> = vec![2];
    for (q, _) in factorize(&prod.abs())? {
        if q.is_odd() {
            primes.push(u64::try_from(&q).map_err(|_| {
                Error::SearchTooLarge("form entry prime exceeds u64".into())
            })?);
        }
    }
    primes.sort_unstable();
    primes.dedup();
    for p in primes {
        let trivial = if p == 2 {
            WittQ2Class::of_diag_form(form)?.is_trivial()
        } else {
            let split = psi_split(form, p)?;
            split.even.witt_trivial() && split.odd.witt_trivial()
        };
        if !trivial {
            return Ok(Some(WittQObstruction::LocalPrime { p }));
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Brute-force metabolizer search over F_p
// ---------------------------------------------------------------------------

/// Exhaustively search for a totally isotropic subspace of dimension n/2
/// ("metabolizer") of a diagonal form over F_p with unit entries. Returns a
/// basis (rows) if one exists. Errors with `OddRank` for odd rank and
/// `SearchTooLarge` beyond small guard bounds. Independent of all Witt
/// invariant computations: used to cross-validate them.
pub fn brute_force_metabolizer(form: &ResidueForm) -> Result<Option<Vec<Vec<u64>>>> {
    let n = form.rank();
    let p = form.p;
    if n % 2 == 1 {
        return Err(Error::OddRank { rank: n });
    }
    if n == 0 {
        return Ok(Some(vec![]));
    }
    let k = n / 2;
    // Subspaces of dimension k in F_p^n, enumerated by reduced row echelon
    // form: choose pivot columns, then free entries (non-pivot columns to
    // the right of each row's pivot).
    let max_slots = k * (n - k);
    let work = (p as f64).powi(max_slots as i32) * binomial(n, k) as f64;
    if n > 6 || p > 13 || work > 4_000_000.0 {
        return Err(Error::SearchTooLarge(format!(
            "metabolizer search over F_{p} in dimension {n} too large"
        )));
    }
    for pivots in pivot_combinations(n, k) {
        let slots: usize = pivots
            .iter()
            .map(|&pc| (pc + 1..n).filter(|c| !pivots.contains(c)).count())
            .sum();
        let mut free = vec![0u64; slots];
        loop {
            let basis = rref_basis(n, k, &pivots, &free, p);
            if is_totally_isotropic(&basis, form) {
                return Ok(Some(basis));
            }
            // Odometer increment.
            let mut i = 0;
            loop {
                if i == slots {
                    break;
                }
                free[i] += 1;
                if free[i] < p {
                    break;
                }
                free[i] = 0;
                i += 1;
            }
            if i == slots {
                break;
            }
        }
    }
    Ok(None)
}

fn binomial(n: usize, k: usize) -> u64 {
    let mut r = 1u64;
    for i in 0..k {
        r = r * (n - i) as u64 / (i + 1) as u64;
    }
    r
}

fn pivot_combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - (k - i) {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Build the RREF basis rows: pivot columns get the identity, earlier
/// non-pivot columns get free values.
fn rref_basis(n: usize, k: usize, pivots: &[usize], free: &[u64], p: u64) -> Vec<Vec<u64>> {
    let mut rows = vec![vec![0u64; n]; k];
    let mut slot = 0usize;
    for (r, &pc) in pivots.iter().enumerate() {
        rows[r][pc] = 1;
        for (c, cell) in rows[r].iter_mut().enumerate() {
            if c <= pc || pivots.contains(&c) {
                continue;
            }
            *cell = free[slot] % p;
            slot += 1;
        }
    }
    // Columns before a row's pivot that are free for *earlier* rows only:
    // the classic RREF shape zeroes pivot columns in other rows, which the
    // construction above already guarantees.
    debug_assert_eq!(slot, free.len());
    rows
}

fn is_totally_isotropic(basis: &[Vec<u64>], form: &ResidueForm) -> bool {
    let p = form.p as u128;
    for i in 0..basis.len() {
        for j in i..basis.len() {
            let mut s: u128 = 0;
            for (c, &d) in form.entries.iter().enumerate() {
                s = (s + basis[i][c] as u128 * basis[j][c] as u128 % p * d as u128) % p;
            }
            if !s.is_multiple_of(p) {
                return false;
            }
        }
    }
    true
}
