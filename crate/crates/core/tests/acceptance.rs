//! One line per acceptance criterion; exits non-zero if any suite fails.

use std::process::ExitCode;
use std::time::Instant;

use conezar::verify::{self, VerifyConfig, SUITES};

fn main() -> ExitCode {
    let seed = std::env::var("CONEZAR_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0);
    let cfg = VerifyConfig { seed, ..VerifyConfig::default() };
    let start = Instant::now();
    let mut failed = 0;
    for &(_, name) in SUITES {
        let t = Instant::now();
        let report = verify::run_suite(name, &cfg).expect("registered suite");
        println!("{}  [{:.1}s]", report.summary_line(), t.elapsed().as_secs_f64());
        for c in report.failures().take(5) {
            println!("        FAIL {}: {}", c.name, c.detail);
        }
        if !report.passed {
            failed += 1;
        }
    }
    println!("acceptance: {}/{} criteria passed in {:.1}s", SUITES.len() - failed, SUITES.len(), start.elapsed().as_secs_f64());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
