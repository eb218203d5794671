//! Runs the whole acceptance suite on a 1-worker and an 8-worker pool,
//! prints one line per criterion, and requires byte-identical reports.

use bkh_core::verify::{self, Outcome, SUITE_SEED};
use bkh_core::Budget;
use std::time::Instant;

fn run_on(workers: usize) -> (Vec<Outcome>, String) {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().unwrap();
    let budget = Budget::default();
    pool.install(|| {
        let outcomes: Vec<Outcome> = (1..=11)
            .map(|id| {
                let start = Instant::now();
                let o = verify::run_one(id, SUITE_SEED, &budget);
                eprintln!("  [{workers} workers] criterion {id} took {:.1?}", start.elapsed());
                o
            })
            .collect();
        let json = verify::suite_report(&outcomes, SUITE_SEED, &budget).to_json();
        (outcomes, json)
    })
}

#[test]
fn acceptance() {
    let (single, single_json) = run_on(1);
    let (_, multi_json) = run_on(8);
    let mut all_pass = true;
    for o in &single {
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {verdict}: {} ({} checks, {} failed, {} skipped)",
            o.id,
            o.name,
            o.cases,
            o.failures,
            o.skipped.len()
        );
        for f in &o.failed {
            println!("    failed: {f}");
        }
        for s in o.skipped.iter().take(5) {
            println!("    skipped: {s}");
        }
        all_pass &= o.pass;
    }
    let same = single_json == multi_json;
    println!(
        "criterion 12 {}: reports byte-identical at 1 and 8 workers ({} bytes)",
        if same { "PASS" } else { "FAIL" },
        single_json.len()
    );
    assert!(same, "reports differ between worker counts");
    assert!(all_pass, "at least one criterion failed");
}
