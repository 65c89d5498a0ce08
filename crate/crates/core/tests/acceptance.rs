//! Acceptance gates. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use qspace::error::Result;
use qspace::ncalg::SpaceDef;
use qspace::verify::{self, IdentityBounds, SuiteReport};

fn space(name: &str) -> Arc<SpaceDef> {
    Arc::new(SpaceDef::builtin(name).expect("builtin space"))
}

const SPACES: [&str; 3] = ["euclid3", "euclid4", "minkowski"];

fn merge(name: &str, parts: Vec<Result<SuiteReport>>) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(name);
    for p in parts {
        r.extend(p?);
    }
    Ok(r)
}

fn equivalence() -> Result<SuiteReport> {
    let mink = space("minkowski");
    merge(
        "equivalence",
        vec![
            verify::run_equivalence(&space("euclid3"), None, 6),
            verify::run_equivalence(&space("euclid4"), None, 5),
            verify::run_equivalence(&mink, None, 4),
            verify::transrule_suite(&mink, 4),
        ],
    )
}

fn validation() -> Result<SuiteReport> {
    merge("validation", SPACES.iter().map(|s| verify::validation_suite(&space(s), 6)).collect())
}

fn u_hat() -> Result<SuiteReport> {
    let mut parts = Vec::new();
    for s in SPACES {
        let sp = space(s);
        let b = IdentityBounds::for_space(s);
        parts.push(verify::u_hat_suite(&sp, b.u_hat));
        parts.push(verify::intertwining_suite(&sp, b.intertwine));
    }
    merge("u-hat", parts)
}

fn hopf() -> Result<SuiteReport> {
    merge("hopf", SPACES.iter().map(|s| verify::hopf_suite(&space(s), 3, 4)).collect())
}

fn appendix_b() -> Result<SuiteReport> {
    verify::appendix_b_suite(10, 3, 3, 12)
}

fn classical() -> Result<SuiteReport> {
    merge("classical", SPACES.iter().map(|s| verify::classical_suite(&space(s), 5)).collect())
}

fn worked() -> Result<SuiteReport> {
    verify::worked_identity_suite(5)
}

fn right() -> Result<SuiteReport> {
    let mut parts = Vec::new();
    for s in SPACES {
        let sp = space(s);
        parts.push(verify::right_suite(&sp, 4));
        parts.push(verify::conjugation_suite(&sp));
    }
    for s in ["euclid3", "euclid4"] {
        parts.push(verify::substitution_suite(&space(s), 4));
    }
    merge("right", parts)
}

type Criterion = (&'static str, fn() -> Result<SuiteReport>);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("closed-form/oracle equivalence", equivalence),
        ("PBW counts, overlaps, r^2 identity", validation),
        ("U-hat round trips and intertwining", u_hat),
        ("Hopf axioms and Leibniz rule", hopf),
        ("generalized Jackson derivatives", appendix_b),
        ("classical limit", classical),
        ("dt3 (x3)^n worked identity", worked),
        ("right representations and substitutions", right),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = match run() {
            Ok(r) => {
                if !r.ok() {
                    eprint!("{}", r.render_text(false));
                }
                (r.ok(), format!("{}/{} cases", r.summary.passed, r.summary.total))
            }
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {}: {} {name} ({detail}, {:.1}s)",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
