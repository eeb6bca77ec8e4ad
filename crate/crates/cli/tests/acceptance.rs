//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use orthospec_core::contfrac::{MatrixConvergents, PeriodicCF};
use orthospec_core::geometry::{cross_ratio4, FeasiblePair};
use orthospec_core::identities::{Identity, VerificationReport};
use orthospec_core::sequences::{fibonacci, Recurrence2};
use orthospec_core::{instantiate, rogers, verify, BigReal, QuadNum, VerifyOptions};
use rand::{Rng, SeedableRng};
use rug::{Integer, Rational};

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn build(id: &str, params: &[(&str, &str)]) -> Result<Identity, String> {
    let p: Vec<(String, String)> = params.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
    instantiate(id, &p).map_err(|e| format!("{id}: {e}"))
}

fn dec(s: &str, prec: u32) -> BigReal {
    BigReal::parse_decimal(s, prec).expect("decimal literal")
}

fn sci(x: &BigReal) -> String {
    x.to_decimal_digits(3)
}

fn inverse_square_million() -> Result<String, String> {
    let prec = 128;
    let id = build("eq-13.3", &[])?;
    let start = Instant::now();
    let sum = id.partial_sum(prec, 999_999).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let err = (sum - BigReal::pi_squared_over_6(prec)).abs();
    ensure(err < dec("1e-4", prec), || format!("error {}", sci(&err)))?;
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("k <= 10^6, error {}, {:.1}s", sci(&err), elapsed.as_secs_f64()))
}

fn fibonacci_halves() -> Result<String, String> {
    let prec = 256;
    let eps = dec("1e-30", prec);
    let a = build("eq-5.8a", &[])?;
    let b = build("eq-5.8b", &[])?;
    let sa = a.partial_sum(prec, 40).map_err(|e| e.to_string())?;
    let sb = b.partial_sum(prec, 40).map_err(|e| e.to_string())?;
    let ea = (&sa - &a.rhs.evaluate(prec).map_err(|e| e.to_string())?).abs();
    let eb = (&sb - &b.rhs.evaluate(prec).map_err(|e| e.to_string())?).abs();
    let es = (sa + sb - BigReal::pi_squared_over_6(prec)).abs();
    ensure(ea < eps && eb < eps && es < eps, || {
        format!("errors {} {} {}", sci(&ea), sci(&eb), sci(&es))
    })?;
    Ok(format!("errors {} / {} / sum {}", sci(&ea), sci(&eb), sci(&es)))
}

fn lucas_identities() -> Result<String, String> {
    let prec = 256;
    let mut errs = Vec::new();
    for id in ["eq-5.9a", "eq-5.9b", "eq-4.8"] {
        let identity = build(id, &[])?;
        let s = identity.partial_sum(prec, 40).map_err(|e| e.to_string())?;
        let err = (s - identity.rhs.evaluate(prec).map_err(|e| e.to_string())?).abs();
        ensure(err < dec("1e-30", prec), || format!("{id}: error {}", sci(&err)))?;
        errs.push(format!("{id} {}", sci(&err)));
    }
    Ok(errs.join(", "))
}

fn base_two_series() -> Result<String, String> {
    let prec = 256;
    let id = build("eq-7.1", &[("n", "2")])?;
    for (k, arg) in (1i64..).zip(id.series[0].args(10).map_err(|e| e.to_string())?) {
        let den = (1i64 << (k + 1)) - 1;
        ensure(arg.as_exact() == Some(&QuadNum::ratio(1 << k, den * den)), || {
            format!("term {k} is {arg}")
        })?;
    }
    let s = id.partial_sum(prec, 120).map_err(|e| e.to_string())?;
    let target = BigReal::pi_squared_over_6(prec) / BigReal::from_i64(2, prec);
    let err = (s - target).abs();
    ensure(err < dec("1e-25", prec), || format!("error {}", sci(&err)))?;
    Ok(format!("120 terms, error {}", sci(&err)))
}

fn short_prefixes() -> Result<String, String> {
    let prec = 256;
    let tol = dec("1e-20", prec);
    let opts = VerifyOptions::new(prec, tol.clone(), 200);
    let cases: &[(&str, &[(&str, &str)])] = &[
        ("eq-8.7", &[("n", "1")]),
        ("eq-8.7", &[("n", "2")]),
        ("eq-8.7", &[("n", "3")]),
        ("eq-10.1", &[("k", "0")]),
        ("eq-10.1", &[("k", "1")]),
        ("eq-10.1", &[("k", "2")]),
        ("eq-12.2", &[]),
        ("eq-12.3", &[]),
        ("eq-11.1", &[("k", "0")]),
        ("eq-11.1", &[("k", "1")]),
    ];
    let mut worst = BigReal::zero(prec);
    for (id, p) in cases {
        let r = verify(&build(id, p)?, &opts).map_err(|e| format!("{id}: {e}"))?;
        ensure(r.converged && r.abs_error < tol, || {
            format!("{id} {p:?}: error {}", sci(&r.abs_error))
        })?;
        ensure(r.terms_used.iter().all(|&n| n <= 200), || {
            format!("{id}: {:?} terms", r.terms_used)
        })?;
        worst = worst.max(r.abs_error);
    }
    Ok(format!("{} instances, worst error {}", cases.len(), sci(&worst)))
}

fn period_six_fraction() -> Result<String, String> {
    let prec = 256;
    let id = build("thm-15.3", &[("cf", "1,2,3,1,2,3")])?;
    let s = id.partial_sum(prec, 30).map_err(|e| e.to_string())?;
    let err = (s - BigReal::pi(prec).square()).abs();
    ensure(err < dec("1e-15", prec), || format!("error {}", sci(&err)))?;
    Ok(format!("k <= 30, error {}", sci(&err)))
}

fn exact_cross_validation() -> Result<String, String> {
    let cases: &[(&str, &[(&str, &str)], usize)] = &[
        ("eq-4.7", &[], 20),
        ("eq-4.6", &[("t", "3")], 20),
        ("eq-13.3", &[], 50),
        ("eq-13.5", &[("p", "2"), ("q", "5")], 50),
        ("thm-15.3", &[("cf", "1,2,3,1,2,3")], 30),
    ];
    let mut done = Vec::new();
    for (id, p, n) in cases {
        let c = build(id, p)?.cross_validate(*n).map_err(|e| format!("{id}: {e}"))?;
        ensure(c.compared > 0, || format!("{id}: nothing compared"))?;
        done.push(format!("{id} ({} args)", c.compared));
    }
    Ok(done.join(", "))
}

fn exact_recurrences() -> Result<String, String> {
    let int = QuadNum::from_int;
    // Shifted trace differences.
    for t in [int(3), int(5), int(7), "sqrt(5)".parse().unwrap()] {
        let q = Recurrence2::trace(t.clone());
        let p = |n: i64| q.term(n).unwrap() - q.term(n - 1).unwrap();
        let t2 = &t - &int(2);
        for k in 2..=50 {
            ensure(p(k) * p(k - 2) == p(k - 1).square() + &t2, || {
                format!("product rule t={t} k={k}")
            })?;
            ensure(p(k) - p(k - 1) == &t2 * &q.term(k - 1).unwrap(), || {
                format!("difference rule t={t} k={k}")
            })?;
        }
    }
    // Determinants of matrix convergents.
    for (a, b, c, d) in [(2i64, 1i64, 1i64, 1i64), (3, 2, 1, 1), (5, 3, 3, 2), (7, 2, 3, 1)] {
        let m = MatrixConvergents::new(a.into(), b.into(), c.into(), d.into()).map_err(|e| e.to_string())?;
        let det = |i: i64, j: i64| {
            let (pi, qi) = m.pq(i);
            let (pj, qj) = m.pq(j);
            pi * qj - pj * qi
        };
        for n in 0..=10 {
            for k in 0..=10 {
                ensure(det(2 * n + 1, 2 * n + 1 + k) == m.q(k - 1), || {
                    format!("odd determinant n={n} k={k}")
                })?;
                ensure(det(2 * n, 2 * n + k) == -m.p(k - 2), || {
                    format!("even determinant n={n} k={k}")
                })?;
            }
        }
    }
    // Closure for Fibonacci matrices: b p_{2n-2} = c q_{2n-1}.
    for n in 1..=5i64 {
        let (a, b, c, d) = (
            fibonacci(2 * n + 1),
            fibonacci(2 * n),
            fibonacci(2 * n),
            fibonacci(2 * n - 1),
        );
        let m = MatrixConvergents::new(a, b.clone(), c.clone(), d).map_err(|e| e.to_string())?;
        for k in 1..=15 {
            ensure(&b * m.p(2 * k - 2) == &c * m.q(2 * k - 1), || {
                format!("closure n={n} k={k}")
            })?;
        }
    }
    let cf = PeriodicCF::new(vec![1, 2, 3]).unwrap();
    let even = cf.even_period();
    // The period map advances convergents by one period.
    let pair = FeasiblePair::even_period_cf(&cf).map_err(|e| e.to_string())?;
    let l = even.period() as i64;
    for k in 0..l {
        for n in 0..=8 {
            let img = pair
                .transform()
                .power(n)
                .and_then(|m| m.apply(&even.convergent_point(k).unwrap()))
                .map_err(|e| e.to_string())?;
            ensure(img == even.convergent_point(n * l + k).unwrap(), || {
                format!("period action n={n} k={k}")
            })?;
        }
    }
    // Shifted determinants are rotated numerators.
    for k in [1i64, 3, 5] {
        for s in -2..=12 {
            ensure(
                even.det_rec(k, k + s + 2).unwrap() == even.permuted_numerator(k + 2, s).unwrap(),
                || format!("rotated numerator k={k} s={s}"),
            )?;
        }
    }
    // Closed-form convergent cross ratio against the four-point formula.
    let r = |n: i64| cf.convergent_point(n).unwrap();
    let mut pairs = 0;
    for m in -1..=15i64 {
        for n in (m + 1)..=15 {
            let brute = cross_ratio4(&r(n + 2), &r(n), &r(m + 2), &r(m)).map_err(|e| format!("n={n} m={m}: {e}"))?;
            let formula = cf
                .convergent_cross_ratio(n, m)
                .map_err(|e| format!("n={n} m={m}: {e}"))?;
            ensure(brute == formula, || {
                format!("cross ratio n={n} m={m}: {brute} vs {formula}")
            })?;
            pairs += 1;
        }
    }
    // Tables for [1, 2, 3].
    let conv: Vec<(i64, i64)> = (0..8)
        .map(|n| {
            let (p, q) = cf.convergent(n).unwrap();
            (p.to_i64().unwrap(), q.to_i64().unwrap())
        })
        .collect();
    let want = [
        (1, 1),
        (3, 2),
        (10, 7),
        (13, 9),
        (36, 25),
        (121, 84),
        (157, 109),
        (435, 302),
    ];
    ensure(conv == want, || format!("convergents {conv:?}"))?;
    let d0: Vec<Integer> = (0..7).map(|n| cf.det_rec(0, n).unwrap()).collect();
    ensure(d0 == [0, -1, -3, -4, -11, -37, -48], || format!("d_0 {d0:?}"))?;
    let d2: Vec<Integer> = (2..10).map(|n| cf.det_rec(2, n).unwrap()).collect();
    ensure(d2 == [0, -1, -2, -7, -9, -25, -84, -109], || format!("d_2 {d2:?}"))?;
    // p_{-2} = 0, p_{-1} = 1, p_n = 2 p_{n-1} + 3 p_{n-2}.
    let rec = Recurrence2::new(int(2), int(3), int(0), int(1)).map_err(|e| e.to_string())?;
    let table: Vec<QuadNum> = (0..7).map(|n| rec.term(n).unwrap()).collect();
    ensure(table == [0, 1, 2, 7, 20, 61, 182].map(int), || {
        format!("recurrence table {table:?}")
    })?;
    Ok(format!("all exact; {pairs} convergent cross ratios"))
}

fn reflection() -> Result<String, String> {
    let prec = 256;
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
    let target = BigReal::pi_squared_over_6(prec);
    let bound = BigReal::pow2(-240, prec);
    let mut worst = BigReal::zero(prec);
    for _ in 0..1000 {
        let m: u128 = rng.gen_range(1..u128::MAX);
        let x = BigReal::from_rational(&Rational::from((Integer::from(m), Integer::from(1) << 128u32)), prec);
        let y = BigReal::one(prec) - &x;
        let e = (rogers(&x).unwrap() + rogers(&y).unwrap() - &target).abs();
        ensure(e <= bound, || {
            format!("x={} off by {}", x.to_decimal_digits(20), sci(&e))
        })?;
        worst = worst.max(e);
    }
    Ok(format!("1000 samples, worst {}", sci(&worst)))
}

fn sinh_form() -> Result<String, String> {
    let prec = 256;
    let bound = BigReal::pow2(-240, prec);
    for t in ["3", "7"] {
        let a = build("eq-5.4", &[("t", t)])?.series[0]
            .args(30)
            .map_err(|e| e.to_string())?;
        let b = build("eq-5.2", &[("t", t)])?.series[0]
            .args(30)
            .map_err(|e| e.to_string())?;
        for (i, (x, y)) in a.iter().zip(&b).enumerate() {
            let d = (x.to_real(prec) - y.to_real(prec)).abs();
            ensure(d <= bound, || format!("t={t} term {i}: {}", sci(&d)))?;
        }
    }
    Ok("t in {3, 7}, 30 terms each".into())
}

fn verify_all_and_round_trip() -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_orthospec"))
        .args(["verify-all", "--format", "json"])
        .env_remove("ORTHOSPEC_PRECISION")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(0), || {
        format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
    })?;
    let values: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    for v in &values {
        let text = serde_json::to_string(v).unwrap();
        let report = VerificationReport::from_json(&text).map_err(|e| e.to_string())?;
        ensure(report.converged, || format!("{} not converged", report.id))?;
        let again = report.to_json_value();
        for field in ["partial_sum", "rhs", "abs_error", "tail_estimate"] {
            ensure(again[field] == v[field], || {
                format!("{}: field {field} changed", report.id)
            })?;
        }
    }
    Ok(format!("exit 0, {} reports round-trip", values.len()))
}

fn main() {
    let checks: &[(&str, Check)] = &[
        ("inverse-square sum to a million terms", inverse_square_million),
        ("even Fibonacci halves and their sum", fibonacci_halves),
        ("Lucas identities at forty terms", lucas_identities),
        ("base-two geometric series", base_two_series),
        ("parameter families within 200 terms", short_prefixes),
        ("period-six continued fraction", period_six_fraction),
        ("exact cross validation", exact_cross_validation),
        ("exact recurrences and determinants", exact_recurrences),
        ("Rogers reflection at 256 bits", reflection),
        ("sinh form equals trace form", sinh_form),
        ("verify-all exit code and JSON round trip", verify_all_and_round_trip),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (n, (name, check)) in checks.iter().enumerate() {
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", n + 1);
            }
        }
    }
    println!("{}/{} criteria passed", checks.len() - failed, checks.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
