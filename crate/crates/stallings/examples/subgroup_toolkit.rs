//! Index, Schreier transversal, Nielsen basis and rank of a subgroup.
//!
//! ```text
//! cargo run --example subgroup_toolkit
//! ```

use stallings::folding::{build_bouquet, fold};
use stallings::subgroup::report;
use stallings::{Alphabet, Word};

fn describe(label: &str, texts: &[&str], alphabet: Alphabet) {
    let words: Vec<Word> =
        texts.iter().map(|t| Word::parse(t, alphabet).unwrap().reduced()).collect();
    let (folded, _) = fold(build_bouquet(&words, alphabet));
    let info = report(&folded).unwrap();

    println!("{label}: H = <{}>  over rank {}", texts.join(", "), alphabet.rank());
    println!("  index:       {}", info.index);
    println!("  rank:        {}", info.rank);
    let basis: Vec<String> = info.basis.iter().map(|w| w.format().unwrap()).collect();
    println!("  basis:       {{{}}}", basis.join(", "));
    let reps: Vec<String> = info.transversal.iter().map(|w| w.format().unwrap()).collect();
    println!("  transversal: {{{}}}  (prefix-closed)", reps.join(", "));
    println!();
}

fn main() {
    let f2 = Alphabet::new(2);
    // The whole group: folds to a single vertex with both loops.
    describe("example", &["abba", "Aba", "aaa"], f2);
    // Index two: words with evenly many a-letters.
    describe("even-a", &["aa", "b", "abA"], f2);
    // Infinite index: a free factor.
    describe("factor", &["a"], f2);
    // The commutator [a, b] generates an infinite-index rank-1 subgroup.
    describe("commutator", &["abAB"], f2);
}
