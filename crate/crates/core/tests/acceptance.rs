//! Runs every acceptance criterion at its stated tolerance and prints one
//! line per criterion.
//!
//! Criterion 7 asks for an r^0.5 law that the Kaden energy only reaches
//! below r ≈ 1e-5; over the prescribed window [1e-3, 1e-1] the fitted slope
//! is about 0.8. It is reported as FAIL and does not stop the run. Any other
//! failure does.

use std::process::ExitCode;

use kaden_core::reproduce::run_all;
use kaden_core::RunConfig;

const KNOWN_FAILURES: [u32; 1] = [7];

fn main() -> ExitCode {
    let reports = run_all(&RunConfig::default());
    let mut unexpected = Vec::new();
    for r in &reports {
        println!("{}", r.summary_line());
        let known = KNOWN_FAILURES.contains(&r.id);
        if known && !r.passed {
            println!("    (known failure, analysed in the README)");
        }
        if known && r.passed {
            println!("    (listed as a known failure but passed; update KNOWN_FAILURES)");
            unexpected.push(r.id);
        }
        if !known && !r.passed {
            unexpected.push(r.id);
        }
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    println!("acceptance: {passed}/{} criteria pass", reports.len());
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
