//! Measure folding time against instance size.
//!
//! Each row folds seeded random single-word instances of N total letters and
//! reports wall time, time per letter, time per `N·(log* N + 1)`, and the
//! disjoint-set traversal counter. Near-linear scaling shows up as a flat
//! `ns_per_N` column.
//!
//! ```text
//! cargo run --release --example scaling
//! ```

use stallings::bench::{run_scaling, scaling_tsv};

fn main() {
    let sizes = [1 << 14, 1 << 15, 1 << 16, 1 << 17, 1 << 18];
    let rows = run_scaling(&sizes, 3, 42);
    print!("{}", scaling_tsv(&rows));
}
