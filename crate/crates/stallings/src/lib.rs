//! Folding of labeled graphs for finitely generated subgroups of free groups.
//!
//! Given words `w_1 .. w_m` over a free group `F` of rank `r`, the subgroup
//! `H = <w_1 .. w_m>` is represented by a finite labeled graph: start from a
//! bouquet of word loops at a base vertex and repeatedly identify pairs of
//! edges that share a label and an incidence at a common vertex. The result
//! is a folded graph (at most one outgoing and one incoming edge per label at
//! every vertex) that is canonically associated with `H`, and it answers
//! membership, index, basis and coset questions directly.
//!
//! The folding engine here runs in `O((n + N) log* N)` for `N` total input
//! letters: vertex identification goes through a disjoint-set forest with
//! path compression and union by rank, and every edge sits in intrusive
//! doubly linked incidence lists so that merging the edge lists of two
//! identified vertices is a constant-time splice. Endpoints of edges are
//! updated lazily, only when a vertex is inspected for foldability.
//!
//! Entry points:
//!
//! * [`folding::build_bouquet`] + [`folding::fold`] — subgroup graph from words
//! * [`folding::fold_arbitrary`] — fold any hand-built [`graph::LabeledGraph`]
//! * [`folding::naive_fold`] — quadratic reference implementation (oracle)
//! * [`subgroup`] — membership, index, spanning tree, transversal, basis
//! * [`bench`] — seeded instance generators, oracle campaigns, scaling runs

pub mod bench;
pub mod cli;
pub mod disjoint_sets;
pub mod folding;
pub mod graph;
pub mod linked_lists;
pub mod subgroup;
pub mod words;

pub use folding::{build_bouquet, canonical_form, fold, fold_arbitrary, naive_fold, FoldedGraph};
pub use graph::LabeledGraph;
pub use subgroup::{index, is_member, nielsen_basis, schreier_transversal, SubgroupIndex};
pub use words::{Alphabet, Letter, Word};
