//! End-to-end acceptance run: every criterion is evaluated from the shared
//! verification suites and reported on one line.
//!
//! | criterion | suite        | check ids                                        | budget |
//! |-----------|--------------|--------------------------------------------------|--------|
//! | 1         | `group`      | `group:*`                                        | 5 s    |
//! | 2         | `heisenberg` | `heisenberg:*`                                   | 60 s   |
//! | 3         | `specfun`    | `specfun:*`                                      |        |
//! | 4         | `fourier`    | `fourier:*`                                      | 120 s  |
//! | 5         | `wronskian`  | `wronskian:*`                                    |        |
//! | 6         | `wronskian`  | `table2:*`                                       | 10 min |
//! | 7         | `series`     | `series:infty-*`                                 |        |
//! | 8         | `series`     | `series:cosets-*`                                |        |
//! | 9         | `series`     | `series:eisenstein-tail`, `series:parabolic-*`   |        |

use std::collections::BTreeMap;
use std::io::Write;
use std::time::{Duration, Instant};

use su21::verify::{run_suite, Check, SuiteReport, VerifyConfig};

struct Criterion {
    number: u32,
    title: &'static str,
    suite: &'static str,
    prefixes: &'static [&'static str],
    budget: Option<Duration>,
}

const CRITERIA: [Criterion; 9] = [
    Criterion { number: 1, title: "group round trip and K = G ∩ U(3)", suite: "group", prefixes: &["group:"], budget: Some(Duration::from_secs(5)) },
    Criterion { number: 2, title: "Heisenberg Gram matrix and m(i) transform", suite: "heisenberg", prefixes: &["heisenberg:"], budget: Some(Duration::from_secs(60)) },
    Criterion { number: 3, title: "special-function identities", suite: "specfun", prefixes: &["specfun:"], budget: None },
    Criterion { number: 4, title: "Casimir eigenfunctions", suite: "fourier", prefixes: &["fourier:"], budget: Some(Duration::from_secs(120)) },
    Criterion { number: 5, title: "Maass–Selberg consistency and closed forms", suite: "wronskian", prefixes: &["wronskian:"], budget: None },
    Criterion { number: 6, title: "Wronskian-order table", suite: "wronskian", prefixes: &["table2:"], budget: Some(Duration::from_secs(600)) },
    Criterion { number: 7, title: "Fourier term of the parabolic sum", suite: "series", prefixes: &["series:infty-"], budget: None },
    Criterion { number: 8, title: "coset enumeration soundness", suite: "series", prefixes: &["series:cosets-"], budget: None },
    Criterion { number: 9, title: "series tail and parabolic cancellation", suite: "series", prefixes: &["series:eisenstein-tail", "series:parabolic-"], budget: None },
];

fn summarize(checks: &[&Check]) -> String {
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| format!("{} ({:?}: measured {:.3e}, tol {:.1e}; {})", c.id, c.status, c.measured, c.tolerance, c.note))
        .collect();
    if failed.is_empty() {
        let worst = checks
            .iter()
            .filter(|c| c.tolerance > 0.0)
            .map(|c| c.measured / c.tolerance)
            .fold(0.0f64, f64::max);
        format!("{} checks, worst measured/tolerance {:.2e}", checks.len(), worst)
    } else {
        failed.join("; ")
    }
}

#[test]
fn acceptance() {
    let cfg = VerifyConfig::default();
    let mut reports: BTreeMap<&str, (SuiteReport, Duration)> = BTreeMap::new();
    for c in &CRITERIA {
        if !reports.contains_key(c.suite) {
            let start = Instant::now();
            let mut r = run_suite(c.suite, &cfg).unwrap_or_else(|e| panic!("suite {} failed to run: {e}", c.suite));
            reports.insert(c.suite, (r.remove(0), start.elapsed()));
        }
    }
    let mut all = true;
    for c in &CRITERIA {
        let (report, elapsed) = &reports[c.suite];
        let checks: Vec<&Check> = report
            .checks
            .iter()
            .filter(|k| c.prefixes.iter().any(|p| k.id.starts_with(p)))
            .collect();
        let within_budget = c.budget.is_none_or(|b| *elapsed <= b);
        let ok = !checks.is_empty() && checks.iter().all(|k| k.passed()) && within_budget;
        all &= ok;
        // Written to the stdout handle directly so the lines show up without
        // `--nocapture`.
        writeln!(
            std::io::stdout().lock(),
            "criterion {}: {} - {} [{}; suite time {:.2} s{}]",
            c.number,
            if ok { "PASS" } else { "FAIL" },
            c.title,
            summarize(&checks),
            elapsed.as_secs_f64(),
            if within_budget { "" } else { ", over budget" }
        )
        .expect("stdout is writable");
    }
    assert!(all, "at least one acceptance criterion failed");
}
