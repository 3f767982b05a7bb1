//! Exact integer arithmetic helpers: primality, factorization, valuations,
//! square classes.
//!
//! Factorization is deterministic: trial division by small primes, then
//! Miller-Rabin (deterministic witness set for u64, strong bases for larger
//! inputs) and Pollard-Brent rho with a bounded iteration budget. If the
//! budget runs out with a composite cofactor left, [`factorize`] reports
//! [`Error::FactorizationLimit`] so callers can degrade honestly instead of
//! silently mis-factoring.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Convenience alias used across the crate.
pub type Int = BigInt;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

/// Trial-division bound.
const TRIAL_BOUND: u64 = 100_000;
/// Pollard-Brent iteration budget per cofactor.
const RHO_BUDGET: u64 = 2_000_000;

/// Deterministic Miller-Rabin. Exact for n < 3.3 * 10^24 via the standard
/// 13-witness set; for larger n it is a strong probable-prime test with the
/// same witnesses (adequate for the integer sizes this crate factors).
pub fn is_prime(n: &Int) -> bool {
    if n <= &Int::one() {
        return false;
    }
    let two = int(2);
    if n == &two {
        return true;
    }
    if n.is_even() {
        return false;
    }
    // n - 1 = d * 2^s
    let n_minus_1: Int = n - int(1);
    let mut d = n_minus_1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    const WITNESSES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    'witness: for &a in &WITNESSES {
        let a = int(a as i64);
        if &a >= n {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Pollard-Brent rho; returns a nontrivial factor of odd composite n, or
/// None if the iteration budget is exhausted.
fn pollard_brent(n: &Int) -> Option<Int> {
    let one = Int::one();
    for c in 1i64..=20 {
        let cc = int(c);
        let mut y = int(2);
        let mut r: u64 = 1;
        let mut q = one.clone();
        let mut g = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut used: u64 = 0;
        while g.is_one() && used < RHO_BUDGET {
            x = y.clone();
            for _ in 0..r {
                y = (&y * &y + &cc) % n;
            }
            let mut k: u64 = 0;
            while k < r && g.is_one() && used < RHO_BUDGET {
                ys = y.clone();
                let m = 128.min(r - k);
                for _ in 0..m {
                    y = (&y * &y + &cc) % n;
                    let diff = (&x - &y).abs();
                    q = (&q * &diff) % n;
                }
                used += m;
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if g == *n {
            // Backtrack one step at a time.
            loop {
                ys = (&ys * &ys + &cc) % n;
                let diff = (&x - &ys).abs();
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && g != *n {
            return Some(g);
        }
    }
    None
}

/// Complete prime factorization of |n| as sorted (prime, exponent) pairs.
/// n must be nonzero; the sign is discarded. Returns
/// [`Error::FactorizationLimit`] if a composite cofactor resists the budget.
pub fn factorize(n: &Int) -> Result<Vec<(Int, u32)>> {
    if n.is_zero() {
        return Err(Error::InvalidForm("factorize(0) is undefined".into()));
    }
    let mut m = n.abs();
    let mut factors: Vec<(Int, u32)> = Vec::new();
    let push = |p: Int, e: u32, factors: &mut Vec<(Int, u32)>| {
        if let Some(last) = factors.iter_mut().find(|(q, _)| *q == p) {
            last.1 += e;
        } else {
            factors.push((p, e));
        }
    };
    // Trial division.
    let mut p: u64 = 2;
    while p <= TRIAL_BOUND {
        let pb = int(p as i64);
        if (&pb * &pb) > m {
            break;
        }
        let mut e = 0u32;
        while (&m % &pb).is_zero() {
            m /= &pb;
            e += 1;
        }
        if e > 0 {
            push(pb, e, &mut factors);
        }
        p = if p == 2 { 3 } else { p + 2 };
    }
    // Recursive rho on what's left.
    let mut stack = vec![m];
    while let Some(v) = stack.pop() {
        if v.is_one() {
            continue;
        }
        if is_prime(&v) {
            push(v, 1, &mut factors);
            continue;
        }
        // Perfect power check (e.g. p^2 from a square cofactor).
        if let Some((root, e)) = perfect_power(&v) {
            if is_prime(&root) {
                push(root, e, &mut factors);
                continue;
            }
            for _ in 0..e {
                stack.push(root.clone());
            }
            continue;
        }
        match pollard_brent(&v) {
            Some(d) => {
                stack.push(&v / &d);
                stack.push(d);
            }
            None => return Err(Error::FactorizationLimit { n: v.to_string() }),
        }
    }
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(factors)
}

/// If n = r^e with e >= 2 maximal, returns (r, e).
fn perfect_power(n: &Int) -> Option<(Int, u32)> {
    let bits = n.bits() as u32;
    for e in (2..=bits.max(2)).rev() {
        if let Some(r) = integer_root(n, e) {
            if r.pow(e) == *n {
                return Some((r, e));
            }
        }
    }
    None
}

/// Floor e-th root by binary search; Some(r) only if r^e == n exactly.
fn integer_root(n: &Int, e: u32) -> Option<Int> {
    if n < &Int::zero() {
        return None;
    }
    let mut lo = Int::zero();
    let mut hi = Int::one() << (n.bits() as usize / e as usize + 1);
    while lo < hi {
        let mid: Int = (&lo + &hi + 1) >> 1;
        if mid.pow(e) <= *n {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    if lo.pow(e) == *n {
        Some(lo)
    } else {
        None
    }
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &Int, p: &Int) -> u32 {
    assert!(!n.is_zero(), "valuation of 0 is infinite");
    let mut m = n.abs();
    let mut v = 0u32;
    while (&m % p).is_zero() {
        m /= p;
        v += 1;
    }
    v
}

/// Squarefree part of a nonzero integer (keeps the sign):
/// n = s * m^2 with s squarefree; returns s.
pub fn squarefree_part(n: &Int) -> Result<Int> {
    let sign = if n.is_negative() { -Int::one() } else { Int::one() };
    let fac = factorize(n)?;
    let mut s = sign;
    for (p, e) in fac {
        if e % 2 == 1 {
            s *= p;
        }
    }
    Ok(s)
}

/// Legendre symbol (a/p) for odd prime p: 1, -1, or 0.
pub fn legendre(a: &Int, p: &Int) -> i32 {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return 0;
    }
    let exp = (p - 1) / 2;
    let r = a.modpow(&exp, p);
    if r.is_one() {
        1
    } else {
        -1
    }
}

/// Modular inverse of a mod m (m > 1, gcd(a, m) = 1).
pub fn mod_inverse(a: &Int, m: &Int) -> Result<Int> {
    let a = a.mod_floor(m);
    let ext = Int::extended_gcd(&a, m);
    if !ext.gcd.is_one() {
        return Err(Error::Singular(format!(
            "no inverse of {} mod {} (gcd {})",
            a, m, ext.gcd
        )));
    }
    Ok(ext.x.mod_floor(m))
}

/// All primes up to and including `bound`, by sieve.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return vec![];
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    if n >= 1 {
        sieve[1] = false;
    }
    let mut i = 2usize;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| if b { Some(i as u64) } else { None })
        .collect()
}
