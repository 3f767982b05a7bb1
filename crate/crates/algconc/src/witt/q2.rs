//! Witt classes of diagonal forms over Q_2.
//!
//! A nondegenerate form over Q_2 is determined up to isometry by its rank,
//! discriminant square class, and Hasse symbol. Witt triviality of a rank-2m
//! form is equivalence with m hyperbolic planes: disc square and Hasse equal
//! to (-1)^{m(m-1)/2}. The group W(Q_2) has order 32; the tests confirm the
//! implementation separates all 32 classes built from standard generators.

use num_traits::Zero;

use crate::arith::{int, valuation, Int};
use crate::error::{Error, Result};
use crate::linalg::DiagForm;
use crate::padic::SquareClassQp;

/// Hilbert symbol (a, b)_2 for nonzero integers: with a = 2^alpha u,
/// b = 2^beta v (u, v odd), the symbol is
/// (-1)^{eps(u) eps(v) + alpha omega(v) + beta omega(u)} where
/// eps(u) = (u-1)/2 and omega(u) = (u^2-1)/8 taken mod 2.
pub fn hilbert2(a: &Int, b: &Int) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::InvalidForm("hilbert symbol of 0".into()));
    }
    let two = int(2);
    let alpha = valuation(a, &two);
    let beta = valuation(b, &two);
    let u = a / two.pow(alpha);
    let v = b / two.pow(beta);
    let eps = |x: &Int| -> u32 {
        // (x - 1)/2 mod 2 for odd x: 1 iff x = 3 mod 4.
        u32::from(x.mod_floor_u64(4) == 3)
    };
    let omega = |x: &Int| -> u32 {
        // (x^2 - 1)/8 mod 2 for odd x: 1 iff x = 3, 5 mod 8.
        matches!(x.mod_floor_u64(8), 3 | 5) as u32
    };
    let e = eps(&u) * eps(&v) + alpha * omega(&v) + beta * omega(&u);
    Ok(if e.is_multiple_of(2) { 1 } else { -1 })
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, m: u64) -> u64;
}

impl ModFloorU64 for Int {
    fn mod_floor_u64(&self, m: u64) -> u64 {
        use num_integer::Integer;
        u64::try_from(self.mod_floor(&Int::from(m))).expect("residue fits")
    }
}

/// Invariants of a diagonal form over Q_2, sufficient to decide Witt
/// triviality and Witt equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittQ2Class {
    pub rank: usize,
    /// Square class of (-1)^{r(r-1)/2} * det.
    pub disc: Option<SquareClassQp>,
    /// Product of Hilbert symbols (a_i, a_j)_2 over i < j.
    pub hasse: i8,
    entries: Vec<Int>,
}

impl WittQ2Class {
    pub fn of_entries(entries: &[Int]) -> Result<WittQ2Class> {
        let mut det = int(1);
        for a in entries {
            if a.is_zero() {
                return Err(Error::InvalidForm("zero entry in diagonal form".into()));
            }
            det *= a;
        }
        let r = entries.len();
        let disc_val = if (r * r.saturating_sub(1) / 2) % 2 == 1 {
            -det
        } else {
            det
        };
        let disc = if r == 0 {
            None
        } else {
            Some(SquareClassQp::of_int(&disc_val, 2)?)
        };
        let mut hasse = 1i8;
        for i in 0..r {
            for j in i + 1..r {
                hasse *= hilbert2(&entries[i], &entries[j])?;
            }
        }
        Ok(WittQ2Class {
            rank: r,
            disc,
            hasse,
            entries: entries.to_vec(),
        })
    }

    pub fn of_diag_form(form: &DiagForm) -> Result<WittQ2Class> {
        WittQ2Class::of_entries(form.entries())
    }

    /// Trivial in W(Q_2): rank 2m, square discriminant, and Hasse symbol
    /// equal to that of m hyperbolic planes, (-1)^{m(m-1)/2}.
    pub fn is_trivial(&self) -> bool {
        if self.rank % 2 == 1 {
            return false;
        }
        if self.rank == 0 {
            return true;
        }
        let m = self.rank / 2;
        let disc_square = self.disc.as_ref().map(|d| d.is_square()).unwrap_or(true);
        let hyperbolic_hasse = if (m * m.saturating_sub(1) / 2) % 2 == 1 {
            -1
        } else {
            1
        };
        disc_square && self.hasse == hyperbolic_hasse
    }

    /// Same Witt class: the difference form (self) + (-other) is trivial.
    pub fn witt_eq(&self, other: &WittQ2Class) -> Result<bool> {
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().map(|a| -a));
        Ok(WittQ2Class::of_entries(&entries)?.is_trivial())
    }
}

impl std::fmt::Display for WittQ2Class {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "W(Q_2) class: rank {}, disc {}, hasse {:+}",
            self.rank,
            match &self.disc {
                None => "-".to_string(),
                Some(d) =>
                    format!("(val {}, unit {:?})", u8::from(d.val_odd), d.unit),
            },
            self.hasse
        )
    }
}
