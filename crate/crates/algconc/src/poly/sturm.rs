//! Real-root isolation by Sturm chains with exact rational arithmetic.

use num_traits::{Signed, Zero};

use crate::arith::{int, Int};
use crate::error::{Error, Result};
use crate::linalg::Rat;
use crate::poly::IntPoly;

/// An open interval (lo, hi) with rational non-root endpoints containing
/// exactly one real root of the isolated polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatingInterval {
    pub lo: Rat,
    pub hi: Rat,
}

/// Isolate the real roots of `f` inside the open interval (lo, hi): returns
/// disjoint open subintervals, sorted by position, each containing exactly
/// one root of the squarefree part of `f`, with non-root endpoints.
///
/// The intervals are strictly interior to (lo, hi) and consecutive
/// intervals never share an endpoint, so every complement segment has
/// positive width and is entirely root-free.
///
/// Errors with `ForbiddenValue` if `f` vanishes at `lo` or `hi`.
pub fn sturm_isolate(f: &IntPoly, lo: &Rat, hi: &Rat) -> Result<Vec<IsolatingInterval>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("sturm_isolate".into()));
    }
    if lo >= hi {
        return Err(Error::Shape(format!("empty interval ({lo}, {hi})")));
    }
    let g = f.radical()?;
    if g.deg() == 0 {
        return Ok(vec![]);
    }
    if g.eval_rat(lo).is_zero() || g.eval_rat(hi).is_zero() {
        return Err(Error::ForbiddenValue(format!(
            "polynomial vanishes at an isolation endpoint of ({lo}, {hi})"
        )));
    }
    let chain = sturm_chain(&g);
    let vlo = variations(&chain, lo);
    let vhi = variations(&chain, hi);
    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone(), vlo, vhi)];
    while let Some((a, b, va, vb)) = stack.pop() {
        let n = va - vb;
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(IsolatingInterval { lo: a, hi: b });
            continue;
        }
        let m = non_root_split_point(&g, &a, &b)?;
        let vm = variations(&chain, &m);
        stack.push((a, m.clone(), va, vm));
        stack.push((m, b, vm, vb));
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    // Separation pass: shrink any interval that touches the global range
    // boundary or a neighbouring interval. Shrinking only moves endpoints
    // inward and each step halves a width while the contained root stays a
    // positive distance from the touch point, so this terminates.
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..out.len() {
            let touches_lo = if i == 0 {
                out[i].lo == *lo
            } else {
                out[i].lo == out[i - 1].hi
            };
            let touches_hi = if i + 1 == out.len() {
                out[i].hi == *hi
            } else {
                out[i].hi == out[i + 1].lo
            };
            if touches_lo || touches_hi {
                out[i] = shrink_half(&g, &chain, &out[i])?;
                changed = true;
            }
        }
    }
    Ok(out)
}

/// Halve an isolating interval, keeping the side that contains the root.
fn shrink_half(
    g: &IntPoly,
    chain: &[IntPoly],
    iv: &IsolatingInterval,
) -> Result<IsolatingInterval> {
    let m = non_root_split_point(g, &iv.lo, &iv.hi)?;
    let va = variations(chain, &iv.lo);
    let vm = variations(chain, &m);
    if va - vm == 1 {
        Ok(IsolatingInterval {
            lo: iv.lo.clone(),
            hi: m,
        })
    } else {
        Ok(IsolatingInterval {
            lo: m,
            hi: iv.hi.clone(),
        })
    }
}

/// Number of real roots of the squarefree part of `f` in the open interval.
pub fn sturm_root_count(f: &IntPoly, lo: &Rat, hi: &Rat) -> Result<usize> {
    Ok(sturm_isolate(f, lo, hi)?.len())
}

/// Signed Sturm chain of a squarefree polynomial: s0 = g, s1 = g', then
/// s_{i+1} = -(s_{i-1} mod s_i), each cleared to a primitive integer
/// polynomial by a positive rational scalar (so all signs are preserved).
fn sturm_chain(g: &IntPoly) -> Vec<IntPoly> {
    let mut chain = vec![g.clone(), g.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            return chain;
        }
        if chain[n - 1].deg() == 0 {
            return chain;
        }
        let (_, rem) = chain[n - 2]
            .divrem_rat(&chain[n - 1])
            .expect("nonzero divisor");
        if rem.iter().all(|x| x.is_zero()) {
            // Squarefree input cannot give a zero remainder before a
            // constant, but guard anyway.
            return chain;
        }
        chain.push(negated_primitive(&rem));
    }
}

/// Turn a rational coefficient list into -1 times its primitive integer
/// form, scaling only by a positive rational (signs of -rem preserved).
fn negated_primitive(rem: &[Rat]) -> IntPoly {
    use num_integer::Integer;
    let mut denom_lcm = int(1);
    for x in rem {
        denom_lcm = denom_lcm.lcm(x.denom());
    }
    let ints: Vec<Int> = rem
        .iter()
        .map(|x| -(x * Rat::from_integer(denom_lcm.clone())).to_integer())
        .collect();
    let f = IntPoly::from_coeffs(ints);
    let c = f.content();
    if c.is_zero() {
        return f;
    }
    IntPoly::from_coeffs(f.coeffs().iter().map(|x| x / &c).collect())
}

/// Sign variations of the chain evaluated at x, skipping zeros.
fn variations(chain: &[IntPoly], x: &Rat) -> i64 {
    let mut count = 0i64;
    let mut last: Option<bool> = None; // sign: true = positive
    for s in chain {
        let v = s.eval_rat(x);
        if v.is_zero() {
            continue;
        }
        let pos = v.is_positive();
        if let Some(prev) = last {
            if prev != pos {
                count += 1;
            }
        }
        last = Some(pos);
    }
    count
}

/// A point strictly inside (a, b) that is not a root of g. The midpoint is
/// tried first; on failure, deg(g)+1 further equally spaced points are
/// tried, which cannot all be roots.
fn non_root_split_point(g: &IntPoly, a: &Rat, b: &Rat) -> Result<Rat> {
    let mid = (a + b) / Rat::from_integer(int(2));
    if !g.eval_rat(&mid).is_zero() {
        return Ok(mid);
    }
    let n = g.deg() as i64;
    let width = b - a;
    for j in 1..=(n + 1) {
        let pt = a + &width * Rat::new(int(j), int(n + 2));
        if !g.eval_rat(&pt).is_zero() {
            return Ok(pt);
        }
    }
    Err(Error::Inconsistency(
        "could not find a non-root split point".into(),
    ))
}
