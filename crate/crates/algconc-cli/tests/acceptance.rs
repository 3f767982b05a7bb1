//! Acceptance gate for the classifier: six criteria, each printing a single
//! pass/fail line with its elapsed time and enforcing a time budget.
//!
//! Run with:
//!
//! ```text
//! cargo test -p algconc-cli --test acceptance -- --nocapture
//! ```
//!
//! The criteria cover golden polynomial factorizations for named knots,
//! modular and p-adic lifting facts, end-to-end verdicts through the binary
//! with certificate verification, agreement of the residue-form Witt
//! invariants with exhaustive search, large randomized identity suites, and
//! honest `undetermined` reporting when the precision ceiling is too low.

use std::io::Write;
use std::panic::{catch_unwind, resume_unwind, UnwindSafe};
use std::process::{Command, Output, Stdio};
use std::time::{Duration, Instant};

use algconc::arith::{int, primes_up_to, Int};
use algconc::linalg::{rat_int, IntMat};
use algconc::padic::{hensel_factor, lift_simple_root};
use algconc::poly::{alexander_poly, factor_mod_p, factor_over_z, Factorization, IntPoly, PolyModP};
use algconc::realsig::tl_signature_at;
use algconc::witt::{brute_force_metabolizer, ResidueForm};
use algconc::{classify, ClassifyOptions, Order, SeifertMatrix};
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

fn criterion(n: u32, desc: &str, budget: Duration, f: impl FnOnce() + UnwindSafe) {
    let start = Instant::now();
    let outcome = catch_unwind(f);
    let elapsed = start.elapsed();
    let ok = outcome.is_ok() && elapsed <= budget;
    println!(
        "acceptance criterion {n} ({desc}): {} [{elapsed:.2?}]",
        if ok { "PASS" } else { "FAIL" }
    );
    match outcome {
        Err(cause) => resume_unwind(cause),
        Ok(()) if elapsed > budget => {
            panic!("criterion {n} exceeded its time budget: {elapsed:?} > {budget:?}")
        }
        Ok(()) => {}
    }
}

fn ip(cs: &[i64]) -> IntPoly {
    IntPoly::from_i64(cs)
}

fn pairs(f: &Factorization) -> Vec<(Vec<i64>, u32)> {
    f.factors
        .iter()
        .map(|(g, m)| {
            (
                g.coeffs()
                    .iter()
                    .map(|c| i64::try_from(c).unwrap())
                    .collect(),
                *m,
            )
        })
        .collect()
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_algconc"))
}

fn run_with_stdin(mut cmd: Command, input: &str) -> Output {
    cmd.stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("spawn classifier binary");
    child
        .stdin
        .take()
        .expect("stdin piped")
        .write_all(input.as_bytes())
        .expect("write input");
    child.wait_with_output().expect("binary ran to completion")
}

/// Parse JSON-report stdout into data rows, checking the header line.
fn json_rows(output: &Output) -> Vec<serde_json::Value> {
    let text = String::from_utf8_lossy(&output.stdout);
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().expect("report has a header line");
    assert!(
        header.contains("sign_conventions"),
        "header line missing sign conventions: {header}"
    );
    lines
        .map(|l| serde_json::from_str(l).expect("report row is valid JSON"))
        .collect()
}

/// Golden factorizations over Z of the Alexander polynomials of named knots.
#[test]
fn criterion_1_golden_factorizations() {
    criterion(
        1,
        "golden factorizations over Z",
        Duration::from_secs(1),
        || {
            // 9_24
            let fac = factor_over_z(&ip(&[1, -5, 10, -13, 10, -5, 1])).unwrap();
            assert!(fac.unit.is_one());
            assert_eq!(pairs(&fac), vec![(vec![1, -3, 1], 1), (vec![1, -1, 1], 2)]);

            // 9_34
            let fac = factor_over_z(&ip(&[2, -11, 19, -11, 2])).unwrap();
            assert!(fac.unit.is_one());
            assert_eq!(
                pairs(&fac),
                vec![(vec![-2, 1], 1), (vec![-1, 2], 1), (vec![1, -3, 1], 1)]
            );

            // 12a169
            let fac = factor_over_z(&ip(&[4, -12, 17, -12, 4])).unwrap();
            assert!(fac.unit.is_one());
            assert_eq!(pairs(&fac), vec![(vec![2, -3, 2], 2)]);

            // 12n224
            let fac = factor_over_z(&ip(&[2, -9, 18, -23, 18, -9, 2])).unwrap();
            assert_eq!(
                pairs(&fac),
                vec![(vec![-2, 1], 1), (vec![-1, 2], 1), (vec![1, -1, 1], 2)]
            );

            // 12a990
            let fac = factor_over_z(&ip(&[1, -8, 26, -48, 59, -48, 26, -8, 1])).unwrap();
            assert_eq!(pairs(&fac), vec![(vec![1, -3, 1], 2), (vec![1, -1, 1], 2)]);

            // 12n681
            let fac = factor_over_z(&ip(&[1, -2, 3, -4, 5, -4, 3, -2, 1])).unwrap();
            assert_eq!(pairs(&fac), vec![(vec![1, -1, 1, -1, 1], 2)]);

            // 12n525: irreducible of degree 6
            let fac = factor_over_z(&ip(&[1, -8, 28, -43, 28, -8, 1])).unwrap();
            assert_eq!(pairs(&fac), vec![(vec![1, -8, 28, -43, 28, -8, 1], 1)]);
        },
    );
}

/// Mod-p factorizations and p-adic lifting facts for named knots.
#[test]
fn criterion_2_modular_and_padic_lifts() {
    criterion(
        2,
        "mod-p factorization, Hensel lifting, root lifting",
        Duration::from_secs(1),
        || {
            // 11a300 mod 3
            let fac = factor_mod_p(&ip(&[1, 3, 5, 7, 8, 7, 5, 3, 1]), 3).unwrap();
            assert_eq!(fac.unit, 1);
            assert_eq!(
                fac.factors,
                vec![
                    (PolyModP::new(3, vec![1, 1]), 2),
                    (PolyModP::new(3, vec![1, 0, 1]), 1),
                    (PolyModP::new(3, vec![1, 1, 1, 1, 1]), 1),
                ]
            );

            // 12a1170 mod 3
            let fac = factor_mod_p(&ip(&[8, 28, 48, 60, 58, 42, 24, 10, 2]), 3).unwrap();
            assert_eq!(fac.unit, 2);
            assert_eq!(
                fac.factors,
                vec![
                    (PolyModP::new(3, vec![1, 1]), 2),
                    (PolyModP::new(3, vec![2, 1, 1, 1]), 1),
                    (PolyModP::new(3, vec![2, 2, 2, 1]), 1),
                ]
            );

            // 12n525 mod 3
            let delta = ip(&[1, -8, 28, -43, 28, -8, 1]);
            let fac = factor_mod_p(&delta, 3).unwrap();
            assert_eq!(fac.unit, 1);
            assert_eq!(
                fac.factors,
                vec![
                    (PolyModP::new(3, vec![1, 1]), 4),
                    (PolyModP::new(3, vec![1, 0, 1]), 1),
                ]
            );

            // 12n525 lifted to 3^8: (1 + 2565 t + t^2)(1 + 3988 t + 5967 t^2 + 3988 t^3 + t^4)
            let factors = hensel_factor(&delta, 3, 8).unwrap();
            assert_eq!(factors.len(), 2);
            assert_eq!(factors[0].coeffs, vec![int(1), int(2565), int(1)]);
            assert_eq!(
                factors[1].coeffs,
                vec![int(1), int(3988), int(5967), int(3988), int(1)]
            );

            // Simple-root lifting: h(a) = 27 + 25a + 8a^2 + a^3, root 0 mod 3
            // lifts to 2565 mod 3^8.
            let h = ip(&[27, 25, 8, 1]);
            assert_eq!(lift_simple_root(&h, 3, &int(0), 8).unwrap(), int(2565));
        },
    );
}

/// End-to-end verdicts through the binary with `--verify`, plus the
/// Tristram-Levine signature of the trefoil at omega = i.
#[test]
fn criterion_3_reference_verdicts() {
    criterion(
        3,
        "end-to-end verdicts with certificate verification",
        Duration::from_secs(4),
        || {
            let cases = [
                ("trefoil", "[[-1,1],[0,-1]]", "infinite"),
                ("figure-8", "[[1,1],[0,-1]]", "2"),
                ("slice-2x2", "[[1,1],[0,-2]]", "slice"),
                ("order4-2x2", "[[1,1],[0,-5]]", "4"),
            ];
            for (name, matrix, expected) in cases {
                let input = format!("{{\"name\":\"{name}\",\"seifert_matrix\":{matrix}}}\n");
                let start = Instant::now();
                let out = run_with_stdin(
                    {
                        let mut c = bin();
                        c.args(["--verify", "--report", "json"]);
                        c
                    },
                    &input,
                );
                let elapsed = start.elapsed();
                assert!(
                    out.status.success(),
                    "binary failed on {name}: {}",
                    String::from_utf8_lossy(&out.stderr)
                );
                assert!(
                    elapsed < Duration::from_secs(1),
                    "{name} took {elapsed:?}, budget is 1s"
                );
                let rows = json_rows(&out);
                assert_eq!(rows.len(), 1);
                assert_eq!(rows[0]["name"], name, "row name for {name}");
                assert_eq!(rows[0]["order"], expected, "verdict for {name}");
            }

            // sigma(i) = -2 for the trefoil; omega = i is x = Re(omega) = 0.
            let trefoil = IntMat::from_rows(&[vec![-1, 1], vec![0, -1]]).unwrap();
            assert_eq!(tl_signature_at(&trefoil, &rat_int(0)).unwrap(), -2);
        },
    );
}

/// The invariant-based Witt triviality test over F_p agrees with brute-force
/// metabolizer search on every small diagonal form, and the unit class has
/// order four when p = 3 mod 4.
#[test]
fn criterion_4_residue_form_triviality_oracle() {
    criterion(
        4,
        "Witt triviality invariants vs exhaustive search",
        Duration::from_secs(60),
        || {
            use std::collections::HashMap;

            fn assert_metabolizer(form: &ResidueForm, basis: &[Vec<u64>]) {
                let p = form.p;
                let n = form.rank();
                assert_eq!(basis.len() * 2, n, "metabolizer must have half rank");
                for code in 0..(p as usize).pow(basis.len() as u32) {
                    let mut c = code;
                    let mut vec = vec![0u64; n];
                    for b in basis {
                        let coeff = (c % p as usize) as u64;
                        c /= p as usize;
                        for (slot, &e) in vec.iter_mut().zip(b) {
                            *slot = (*slot + coeff * e) % p;
                        }
                    }
                    let q: u64 = vec
                        .iter()
                        .zip(&form.entries)
                        .map(|(&x, &a)| (a * ((x * x) % p)) % p)
                        .sum::<u64>()
                        % p;
                    assert_eq!(q, 0, "form does not vanish on the claimed metabolizer");
                }
            }

            fn search_verdict(form: &ResidueForm, cache: &mut HashMap<Vec<u64>, bool>) -> bool {
                if let Some(&v) = cache.get(&form.entries) {
                    return v;
                }
                let v = if form.rank() % 2 == 1 {
                    assert!(brute_force_metabolizer(form).is_err());
                    false
                } else {
                    match brute_force_metabolizer(form).unwrap() {
                        Some(basis) => {
                            assert_metabolizer(form, &basis);
                            true
                        }
                        None => false,
                    }
                };
                cache.insert(form.entries.clone(), v);
                v
            }

            let mut checked_total = 0u64;
            for p in [3u64, 5, 7] {
                let signed: Vec<i64> = (1..p as i64).flat_map(|k| [k, -k]).collect();
                let mut cache: HashMap<Vec<u64>, bool> = HashMap::new();
                let mut checked = 0u64;
                for rank in 1u32..=4 {
                    for code in 0..signed.len().pow(rank) {
                        let mut c = code;
                        let entries: Vec<u64> = (0..rank)
                            .map(|_| {
                                let i = c % signed.len();
                                c /= signed.len();
                                signed[i].rem_euclid(p as i64) as u64
                            })
                            .collect();
                        let form = ResidueForm::new(p, entries).unwrap();
                        assert_eq!(
                            form.witt_trivial(),
                            search_verdict(&form, &mut cache),
                            "disagreement at p = {} on entries {:?}",
                            p,
                            form.entries
                        );
                        checked += 1;
                    }
                }
                let b = 2 * (p - 1);
                assert_eq!(checked, b + b * b + b * b * b + b * b * b * b);
                checked_total += checked;
            }
            println!("  swept {checked_total} diagonal forms over p in {{3, 5, 7}}");

            // <b, b, b, b> is trivial whenever p = 3 mod 4.
            for p in [3u64, 7, 11, 19, 23] {
                assert_eq!(p % 4, 3);
                for b in 1..p {
                    let form = ResidueForm::new(p, vec![b; 4]).unwrap();
                    assert!(form.witt_trivial(), "<{b};4> at p = {p} should be trivial");
                }
            }

            // <1> has order exactly four in W(F_p) for p = 3 mod 4.
            for p in [3u64, 7, 11, 19, 23] {
                assert!(!ResidueForm::new(p, vec![1]).unwrap().witt_trivial());
                assert!(!ResidueForm::new(p, vec![1, 1]).unwrap().witt_trivial());
                assert!(ResidueForm::new(p, vec![1, 1, 1, 1]).unwrap().witt_trivial());
            }
        },
    );
}

/// Rows of a random 2g x 2g Seifert matrix with entries bounded by `amp`:
/// V = S + U with S symmetric and U the upper half of the symplectic form.
fn seifert_rows(genus: usize, amp: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    let n = 2 * genus;
    proptest::collection::vec(-amp..=amp, n * n).prop_map(move |vals| {
        let mut m = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in i..n {
                m[i][j] = vals[i * n + j];
                m[j][i] = vals[i * n + j];
            }
        }
        for g in 0..genus {
            m[2 * g][2 * g + 1] += 1;
        }
        m
    })
}

fn any_seifert(max_genus: usize, amp: i64) -> impl Strategy<Value = SeifertMatrix> {
    (1..=max_genus)
        .prop_flat_map(move |g| seifert_rows(g, amp))
        .prop_map(|rows| SeifertMatrix::from_rows(&rows).expect("V - V^t is symplectic"))
}

/// A unimodular integer matrix assembled from elementary row operations.
fn unimodular(n: usize) -> impl Strategy<Value = IntMat> {
    proptest::collection::vec((0..n, 0..n, -2i64..=2, 0..3u8), 0..8).prop_map(move |ops| {
        let mut rows = vec![vec![0i64; n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = 1;
        }
        for (i, j, c, kind) in ops {
            if i == j {
                continue;
            }
            match kind {
                0 => {
                    let src = rows[j].clone();
                    for (dst, s) in rows[i].iter_mut().zip(&src) {
                        *dst += c * s;
                    }
                }
                1 => rows.swap(i, j),
                _ => {
                    for e in rows[i].iter_mut() {
                        *e = -*e;
                    }
                }
            }
        }
        IntMat::from_rows(&rows).expect("square")
    })
}

/// Palindromic even-degree polynomial g with g(1) = 1.
fn palindrome_with_value_one() -> impl Strategy<Value = IntPoly> {
    (1usize..=4, proptest::collection::vec(-5i64..=5, 4)).prop_map(|(d, cs)| {
        let mut c = vec![0i64; 2 * d + 1];
        let mut sum = 0;
        for i in 0..d {
            let mut x = cs[i];
            if i == 0 && x == 0 {
                x = 1;
            }
            c[i] = x;
            c[2 * d - i] = x;
            sum += x;
        }
        c[d] = 1 - 2 * sum;
        IntPoly::from_i64(&c)
    })
}

fn symmetrized(v: &SeifertMatrix) -> IntMat {
    v.matrix().add(&v.matrix().transpose()).expect("same shape")
}

fn order_of(v: &SeifertMatrix) -> Order {
    classify(v, &ClassifyOptions::default())
        .expect("classification succeeds")
        .order
}

fn seeded_runner(cases: u32, tag: u8) -> TestRunner {
    let mut seed = [0x5Eu8; 32];
    seed[0] = tag;
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::from_seed(RngAlgorithm::ChaCha, &seed),
    )
}

/// Randomized suites, >= 10^3 cases total with a fixed seed, re-checking the
/// arithmetic identities and verdict laws the classifier relies on.
#[test]
fn criterion_5_randomized_identities() {
    criterion(
        5,
        "randomized arithmetic and verdict identities",
        Duration::from_secs(60),
        || {
            let mut total = 0u32;

            // det(V + V^t) equals the Alexander polynomial at t = -1.
            let cases = 500;
            seeded_runner(cases, 1)
                .run(&any_seifert(3, 4), |v| {
                    let det_q = symmetrized(&v).det().unwrap();
                    let delta = alexander_poly(v.matrix()).unwrap();
                    prop_assert_eq!(det_q, delta.eval_int(&int(-1)));
                    Ok(())
                })
                .unwrap();
            total += cases;

            // A prime dividing neither det(V) nor the discriminant of the
            // radical of the Alexander polynomial cannot divide det(V + V^t).
            let cases = 500;
            seeded_runner(cases, 2)
                .run(&any_seifert(3, 4), |v| {
                    let det_v = v.det();
                    let det_q = symmetrized(&v).det().unwrap();
                    let rad = alexander_poly(v.matrix()).unwrap().radical().unwrap();
                    let disc = if rad.deg() <= 1 {
                        Int::one()
                    } else {
                        rad.discriminant().unwrap()
                    };
                    for p in primes_up_to(50) {
                        let pi = int(p as i64);
                        let hypothesis =
                            det_v.mod_floor(&pi).is_zero() || disc.mod_floor(&pi).is_zero();
                        if !hypothesis {
                            prop_assert!(!det_q.mod_floor(&pi).is_zero());
                        }
                    }
                    Ok(())
                })
                .unwrap();
            total += cases;

            // Form discriminant (-1)^e g(-1) of a palindrome with g(1) = 1
            // is 1 mod 4.
            let cases = 1000;
            seeded_runner(cases, 3)
                .run(&palindrome_with_value_one(), |g| {
                    prop_assert_eq!(g.eval_int(&int(1)), int(1));
                    let e = g.deg() / 2;
                    let sign = if e % 2 == 1 { int(-1) } else { int(1) };
                    let disc = sign * g.eval_int(&int(-1));
                    prop_assert_eq!(disc.mod_floor(&int(4)), int(1));
                    Ok(())
                })
                .unwrap();
            total += cases;

            // The verdict only depends on the congruence class of V.
            let cases = 200;
            seeded_runner(cases, 4)
                .run(
                    &any_seifert(2, 3).prop_flat_map(|v| {
                        let n = v.size();
                        (Just(v), unimodular(n))
                    }),
                    |(v, p)| {
                        let conj = p.transpose().mul(v.matrix()).unwrap().mul(&p).unwrap();
                        let w = SeifertMatrix::new(conj).unwrap();
                        prop_assert_eq!(order_of(&v), order_of(&w));
                        Ok(())
                    },
                )
                .unwrap();
            total += cases;

            // V + (-V) is always algebraically slice, with a certificate.
            let cases = 150;
            seeded_runner(cases, 5)
                .run(&any_seifert(2, 3), |v| {
                    let s = v.direct_sum(&v.mirror());
                    prop_assert_eq!(order_of(&s), Order::AlgebraicallySlice);
                    Ok(())
                })
                .unwrap();
            total += cases;

            assert!(total >= 1000);
            println!("  ran {total} randomized cases across five suites");

            // Doubling drops finite order: 4 -> 2 -> slice, and 2 -> slice.
            let v4 = SeifertMatrix::from_rows(&[vec![1, 1], vec![0, -5]]).unwrap();
            assert_eq!(order_of(&v4), Order::Order4);
            let v2 = v4.direct_sum(&v4);
            assert_eq!(order_of(&v2), Order::Order2);
            assert_eq!(order_of(&v2.direct_sum(&v2)), Order::AlgebraicallySlice);
            let fig8 = SeifertMatrix::from_rows(&[vec![1, 1], vec![0, -1]]).unwrap();
            assert_eq!(order_of(&fig8), Order::Order2);
            assert_eq!(order_of(&fig8.direct_sum(&fig8)), Order::AlgebraicallySlice);
        },
    );
}

/// A capped precision ceiling is reported as an honest `undetermined` with a
/// precision-ceiling reason; the default ceiling resolves the same input.
#[test]
fn criterion_6_precision_ceiling() {
    criterion(
        6,
        "honest undetermined at low precision",
        Duration::from_secs(10),
        || {
            let input = concat!(
                "{\"name\":\"12n525\",\"seifert_matrix\":",
                "[[2,2,-1,0,0,1],[1,1,0,1,0,0],[-1,-1,-1,0,0,0],",
                "[0,1,-1,1,-1,2],[0,0,0,-2,3,0],[1,0,0,2,-1,-2]]}\n"
            );

            let out = run_with_stdin(
                {
                    let mut c = bin();
                    c.args(["--report", "json", "--max-precision", "4"]);
                    c
                },
                input,
            );
            assert!(
                out.status.success(),
                "capped run failed: {}",
                String::from_utf8_lossy(&out.stderr)
            );
            let rows = json_rows(&out);
            assert_eq!(rows.len(), 1);
            assert_eq!(rows[0]["order"], "undetermined");
            let reason = rows[0]["reason"].as_str().unwrap_or_default();
            assert!(
                reason.contains("precision ceiling"),
                "reason should name the precision ceiling: {reason}"
            );

            let out = run_with_stdin(
                {
                    let mut c = bin();
                    c.args(["--report", "json", "--verify"]);
                    c
                },
                input,
            );
            assert!(out.status.success());
            let rows = json_rows(&out);
            assert_eq!(rows[0]["order"], "2");
        },
    );
}
