//! Decide membership in a subgroup by walking the folded graph.
//!
//! ```text
//! cargo run --example membership
//! ```

use stallings::folding::{build_bouquet, fold};
use stallings::subgroup::trace_membership;
use stallings::{Alphabet, Word};

fn main() {
    // H = <aa, b, abA> has index 2 in F(a, b): the subgroup of words with
    // an even number of a-letters.
    let alphabet = Alphabet::new(2);
    let generators: Vec<Word> = ["aa", "b", "abA"]
        .iter()
        .map(|text| Word::parse(text, alphabet).unwrap())
        .collect();
    let (folded, _) = fold(build_bouquet(&generators, alphabet));

    for text in ["1", "a", "aa", "ab", "aba", "bab", "aabbaa", "abaB"] {
        let word = Word::parse(text, alphabet).unwrap();
        let answer = trace_membership(&folded, &word).unwrap();
        println!(
            "{text:>8}  member: {:<5}  ({} steps, one per reduced letter)",
            answer.member, answer.steps
        );
    }
}
