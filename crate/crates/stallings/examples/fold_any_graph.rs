//! Fold a hand-built labeled graph that is not a bouquet of words.
//!
//! Folding works on any finite labeled graph, not only on graphs built from
//! generator words: `fold_arbitrary` first scans every vertex for foldable
//! pairs, then runs the same engine.
//!
//! ```text
//! cargo run --example fold_any_graph
//! ```

use stallings::folding::fold_arbitrary;
use stallings::{Alphabet, LabeledGraph};

fn main() {
    // Two a-edges leave the base toward different vertices, and both targets
    // continue with a b-edge to a shared sink: a small unfolded diamond.
    let mut g = LabeledGraph::new(Alphabet::new(2));
    let base = g.base();
    let left = g.add_vertex();
    let right = g.add_vertex();
    let sink = g.add_vertex();
    g.add_edge(base, 0, left);
    g.add_edge(base, 0, right);
    g.add_edge(left, 1, sink);
    g.add_edge(right, 1, sink);

    println!("before: {} vertices, {} edges", g.vertex_count(), g.live_edge_count());

    let (folded, trace) = fold_arbitrary(g);
    println!(
        "after:  {} vertices, {} edges ({} foldings)",
        folded.vertex_count,
        folded.edge_count(),
        trace.len()
    );
    print!("{}", trace.to_log());

    println!("\nfolded edges:");
    for &(from, x, to) in &folded.edges {
        println!("  {from} --{}--> {to}", (b'a' + x) as char);
    }
    assert!(folded.is_folded());
}
