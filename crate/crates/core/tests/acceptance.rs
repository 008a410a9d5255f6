use std::io::Write;

use insep_core::selftest::{run_selftest, SelftestOptions};

#[test]
fn acceptance_criteria() {
    let results = run_selftest(&SelftestOptions::default());
    // Written to the handle rather than through `println!`, so the summary
    // shows even when the harness captures output.
    let mut out = std::io::stdout().lock();
    writeln!(out).unwrap();
    for r in &results {
        writeln!(out, "{} [{:.1}s]", r.line(), r.seconds).unwrap();
    }
    drop(out);
    assert_eq!(results.len(), 8);
    let failed: Vec<&str> = results.iter().filter(|r| !r.pass).map(|r| r.id.as_str()).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
