//! Cross-check the fast folding engine against the quadratic reference.
//!
//! Folding is confluent — any order of elementary foldings reaches the same
//! folded graph — so an independent quadratic implementation doubles as an
//! oracle: both must produce identical canonical forms on random input.
//!
//! ```text
//! cargo run --example oracle_campaign
//! ```

use stallings::bench::verify_against_oracle;

fn main() {
    let report = verify_against_oracle(200, 1..=4, 1..=6, 1..=30, 0xFEED);

    println!("{} trials, {} passed", report.trials.len(), report.passes());
    for failure in report.failures() {
        println!(
            "MISMATCH in trial {}: fast {:?} vs reference {:?}",
            failure.trial, failure.fast_canonical, failure.reference_canonical
        );
    }
    assert!(report.all_passed());

    // A few sample trials, with the disjoint-set effort each one spent.
    println!("\ntrial  rank  words  letters  dsf_ops  dsf_traversals");
    for trial in report.trials.iter().step_by(40) {
        println!(
            "{:>5}  {:>4}  {:>5}  {:>7}  {:>7}  {:>14}",
            trial.trial,
            trial.rank,
            trial.words.len(),
            trial.total_letters,
            trial.dsf_ops,
            trial.dsf_traversals
        );
    }
}
