//! Fold a subgroup graph from generator words and watch every step.
//!
//! ```text
//! cargo run --example fold_words
//! ```

use stallings::folding::{build_bouquet, canonical_form, fold};
use stallings::{Alphabet, Word};

fn main() {
    let alphabet = Alphabet::new(2);
    let words: Vec<Word> = ["abba", "Aba", "aaa"]
        .iter()
        .map(|text| Word::parse(text, alphabet).unwrap().reduced())
        .collect();

    let bouquet = build_bouquet(&words, alphabet);
    println!(
        "bouquet: {} vertices, {} edges",
        bouquet.vertex_count(),
        bouquet.live_edge_count()
    );

    let (folded, trace) = fold(bouquet);
    println!(
        "folded:  {} vertices, {} edges after {} elementary foldings",
        folded.vertex_count,
        folded.edge_count(),
        trace.len()
    );

    println!("\nfold log (case, winner, loser, deleted edge):");
    print!("{}", trace.to_log());

    println!("\nedges:");
    for &(from, x, to) in &folded.edges {
        println!("  {from} --{}--> {to}", (b'a' + x) as char);
    }
    println!("\ncanonical form: {}", canonical_form(&folded).unwrap());
}
