//! Subgroup questions answered on a folded graph.
//!
//! A folded graph is a deterministic partial automaton: from any vertex, a
//! positive letter moves along the unique outgoing edge of that label and an
//! inverse letter moves backwards along the unique incoming edge. Membership
//! of a word in the subgroup is a single walk from the base; the subgroup's
//! index, a Schreier transversal and a Nielsen basis all fall out of a
//! breadth-first spanning tree.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::folding::{fold, build_bouquet, FoldedGraph};
use crate::words::{Letter, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SubgroupError {
    #[error("word uses generator index {index}, outside the rank-{rank} alphabet")]
    AlphabetMismatch { index: usize, rank: usize },
    #[error("graph is disconnected: vertex {vertex} is unreachable from the base")]
    Disconnected { vertex: u32 },
}

/// Index of the subgroup in the ambient free group.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SubgroupIndex {
    Finite(usize),
    Infinite,
}

impl fmt::Display for SubgroupIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupIndex::Finite(k) => write!(f, "{k}"),
            SubgroupIndex::Infinite => f.write_str("infinite"),
        }
    }
}

/// Outcome of a membership walk, with its instrumented step count.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Membership {
    pub member: bool,
    /// Letters consumed: always exactly the length of the reduced query.
    pub steps: usize,
}

/// Everything the toolkit can say about one subgroup.
#[derive(Clone, Debug)]
pub struct SubgroupReport {
    pub index: SubgroupIndex,
    pub rank: usize,
    pub basis: Vec<Word>,
    pub transversal: Vec<Word>,
}

/// Transition tables of the folded graph viewed as a partial automaton.
struct Automaton {
    rank: usize,
    /// `out[v * rank + x]`: target of the x-labeled edge leaving v.
    out: Vec<Option<u32>>,
    /// `into[v * rank + x]`: source of the x-labeled edge entering v.
    into: Vec<Option<u32>>,
}

impl Automaton {
    fn build(f: &FoldedGraph) -> Automaton {
        let rank = f.alphabet.rank();
        let mut out = vec![None; f.vertex_count * rank];
        let mut into = vec![None; f.vertex_count * rank];
        for &(from, x, to) in &f.edges {
            let prev = out[from as usize * rank + x as usize].replace(to);
            debug_assert!(prev.is_none(), "unfolded graph handed to the automaton");
            let prev = into[to as usize * rank + x as usize].replace(from);
            debug_assert!(prev.is_none(), "unfolded graph handed to the automaton");
        }
        Automaton { rank, out, into }
    }

    fn step(&self, v: u32, letter: Letter) -> Option<u32> {
        let x = letter.generator();
        if letter.is_inverse() {
            self.into[v as usize * self.rank + x]
        } else {
            self.out[v as usize * self.rank + x]
        }
    }
}

/// Walks the reduced form of `w` from the base, one step per letter with no
/// early exit, so `steps` always equals `|reduced w|`. Membership holds when
/// every step exists and the walk returns to the base.
pub fn trace_membership(f: &FoldedGraph, w: &Word) -> Result<Membership, SubgroupError> {
    let rank = f.alphabet.rank();
    for letter in w.letters() {
        if letter.generator() >= rank {
            return Err(SubgroupError::AlphabetMismatch { index: letter.generator(), rank });
        }
    }
    let auto = Automaton::build(f);
    let reduced = w.reduced();
    let mut cur = Some(f.base);
    let mut steps = 0usize;
    for &letter in reduced.letters() {
        steps += 1;
        cur = cur.and_then(|v| auto.step(v, letter));
    }
    Ok(Membership { member: cur == Some(f.base), steps })
}

/// Whether `w` lies in the subgroup the folded graph represents.
pub fn is_member(f: &FoldedGraph, w: &Word) -> Result<bool, SubgroupError> {
    trace_membership(f, w).map(|m| m.member)
}

/// `Finite(V)` when the graph is regular — every vertex has both an
/// outgoing and an incoming edge for every generator — else `Infinite`.
pub fn index(f: &FoldedGraph) -> SubgroupIndex {
    let auto = Automaton::build(f);
    let complete = auto.out.iter().all(|t| t.is_some()) && auto.into.iter().all(|t| t.is_some());
    if complete {
        SubgroupIndex::Finite(f.vertex_count)
    } else {
        SubgroupIndex::Infinite
    }
}

/// How a non-base vertex hangs off its BFS parent.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TreeStep {
    pub parent: u32,
    /// Letter read walking parent → child; inverse when the underlying edge
    /// points child → parent.
    pub letter: Letter,
}

fn bfs_tree(f: &FoldedGraph) -> Result<(Vec<Option<TreeStep>>, Vec<u32>), SubgroupError> {
    let rank = f.alphabet.rank();
    let mut out_adj: Vec<Vec<(u8, u32)>> = vec![Vec::new(); f.vertex_count];
    let mut in_adj: Vec<Vec<(u8, u32)>> = vec![Vec::new(); f.vertex_count];
    for &(from, x, to) in &f.edges {
        out_adj[from as usize].push((x, to));
        in_adj[to as usize].push((x, from));
    }
    for adj in out_adj.iter_mut().chain(in_adj.iter_mut()) {
        adj.sort_unstable();
        debug_assert!(adj.len() <= rank);
    }

    let mut tree: Vec<Option<TreeStep>> = vec![None; f.vertex_count];
    let mut discovered = vec![false; f.vertex_count];
    let mut order = Vec::with_capacity(f.vertex_count);
    let mut queue = std::collections::VecDeque::new();
    discovered[f.base as usize] = true;
    order.push(f.base);
    queue.push_back(f.base);
    while let Some(v) = queue.pop_front() {
        for &(x, to) in &out_adj[v as usize] {
            if !discovered[to as usize] {
                discovered[to as usize] = true;
                tree[to as usize] = Some(TreeStep { parent: v, letter: Letter::new(x, false) });
                order.push(to);
                queue.push_back(to);
            }
        }
        for &(x, from) in &in_adj[v as usize] {
            if !discovered[from as usize] {
                discovered[from as usize] = true;
                tree[from as usize] = Some(TreeStep { parent: v, letter: Letter::new(x, true) });
                order.push(from);
                queue.push_back(from);
            }
        }
    }
    if let Some(vertex) = discovered.iter().position(|&d| !d) {
        return Err(SubgroupError::Disconnected { vertex: vertex as u32 });
    }
    Ok((tree, order))
}

/// Breadth-first spanning tree from the base, exploring outgoing edges by
/// ascending label and then incoming edges by ascending label (the
/// canonicalization order). Entry `v` is `None` exactly for the base;
/// `V − 1` entries are tree steps.
pub fn spanning_tree(f: &FoldedGraph) -> Result<Vec<Option<TreeStep>>, SubgroupError> {
    bfs_tree(f).map(|(tree, _)| tree)
}

fn tree_paths(f: &FoldedGraph, tree: &[Option<TreeStep>], order: &[u32]) -> Vec<Word> {
    let mut paths = vec![Word::empty(); f.vertex_count];
    for &v in order {
        if let Some(step) = tree[v as usize] {
            paths[v as usize] =
                paths[step.parent as usize].concat(&Word::from_letters(vec![step.letter]));
        }
    }
    paths
}

/// Label words of the tree paths from the base, in BFS discovery order
/// (base first, as the empty word). The set is prefix-closed; when the
/// index is `Finite(k)` it is a full Schreier transversal of size `k`.
pub fn schreier_transversal(f: &FoldedGraph) -> Result<Vec<Word>, SubgroupError> {
    let (tree, order) = bfs_tree(f)?;
    let paths = tree_paths(f, &tree, &order);
    Ok(order.into_iter().map(|v| paths[v as usize].clone()).collect())
}

/// One free generator per non-tree edge `(u, x, w)` — the reduced word
/// `path(base→u) · x · path(base→w)⁻¹` — emitted in ascending triple order.
/// The result has `E − V + 1` words and regenerates the subgroup.
pub fn nielsen_basis(f: &FoldedGraph) -> Result<Vec<Word>, SubgroupError> {
    let (tree, order) = bfs_tree(f)?;
    let paths = tree_paths(f, &tree, &order);
    let mut tree_triples = HashSet::with_capacity(f.vertex_count);
    for (child, step) in tree.iter().enumerate() {
        if let Some(step) = step {
            let triple = if step.letter.is_inverse() {
                (child as u32, step.letter.generator() as u8, step.parent)
            } else {
                (step.parent, step.letter.generator() as u8, child as u32)
            };
            tree_triples.insert(triple);
        }
    }

    let mut basis = Vec::with_capacity(f.edge_count() + 1 - f.vertex_count);
    for &(from, x, to) in &f.edges {
        if tree_triples.contains(&(from, x, to)) {
            continue;
        }
        let middle = Word::from_letters(vec![Letter::new(x, false)]);
        let word = paths[from as usize]
            .concat(&middle)
            .concat(&paths[to as usize].inverted())
            .reduced();
        basis.push(word);
    }
    Ok(basis)
}

/// Rank of the subgroup: `E − V + 1` for the connected folded graph.
pub fn subgroup_rank(f: &FoldedGraph) -> usize {
    (f.edge_count() + 1)
        .checked_sub(f.vertex_count)
        .expect("rank needs a connected graph (E >= V - 1)")
}

/// Assembles index, rank, basis and transversal in one pass.
pub fn report(f: &FoldedGraph) -> Result<SubgroupReport, SubgroupError> {
    Ok(SubgroupReport {
        index: index(f),
        rank: subgroup_rank(f),
        basis: nielsen_basis(f)?,
        transversal: schreier_transversal(f)?,
    })
}

/// Convenience used by tests and examples: does the basis fold back to the
/// same canonical graph?
pub fn regenerates(f: &FoldedGraph, basis: &[Word]) -> bool {
    let rebuilt = fold(build_bouquet(basis, f.alphabet)).0;
    crate::folding::canonical_form(&rebuilt) == crate::folding::canonical_form(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folding::{build_bouquet, canonical_form, fold};
    use crate::words::Alphabet;

    fn folded(texts: &[&str], rank: usize) -> FoldedGraph {
        let alphabet = Alphabet::new(rank);
        let words: Vec<Word> = texts.iter().map(|t| Word::parse(t, alphabet).unwrap()).collect();
        fold(build_bouquet(&words, alphabet)).0
    }

    fn w(text: &str, rank: usize) -> Word {
        Word::parse(text, Alphabet::new(rank)).unwrap()
    }

    #[test]
    fn membership_in_the_full_group() {
        let f = folded(&["abba", "Aba", "aaa"], 2);
        for text in ["Ab", "a", "b", "BAba", "abab"] {
            assert_eq!(is_member(&f, &w(text, 2)), Ok(true), "{text} must be a member");
        }
        assert_eq!(is_member(&f, &Word::empty()), Ok(true));
    }

    #[test]
    fn membership_in_the_index_two_subgroup() {
        let f = folded(&["aa", "b", "abA"], 2);
        assert_eq!(is_member(&f, &w("a", 2)), Ok(false));
        assert_eq!(is_member(&f, &w("aa", 2)), Ok(true));
        assert_eq!(is_member(&f, &w("b", 2)), Ok(true));
        assert_eq!(is_member(&f, &w("abA", 2)), Ok(true));
        assert_eq!(is_member(&f, &w("ab", 2)), Ok(false));
        assert_eq!(is_member(&f, &w("aba", 2)), Ok(true), "aba = abA . aa");
    }

    #[test]
    fn membership_walk_counts_reduced_letters_only() {
        let f = folded(&["aa", "b", "abA"], 2);
        let outcome = trace_membership(&f, &w("abBA", 2)).unwrap();
        assert_eq!(outcome.steps, 0, "abBA reduces to the empty word");
        assert!(outcome.member);

        let outcome = trace_membership(&f, &w("aab", 2)).unwrap();
        assert_eq!(outcome.steps, 3);
        assert!(outcome.member);

        // A failing walk still consumes every letter.
        let outcome = trace_membership(&f, &w("abb", 2)).unwrap();
        assert_eq!(outcome.steps, 3);
        assert!(!outcome.member);
    }

    #[test]
    fn membership_rejects_foreign_letters() {
        let f = folded(&["a"], 1);
        let query = Word::from_letters(vec![Letter::new(3, false)]);
        assert_eq!(
            is_member(&f, &query),
            Err(SubgroupError::AlphabetMismatch { index: 3, rank: 1 })
        );
    }

    #[test]
    fn index_of_pinned_instances() {
        assert_eq!(index(&folded(&["abba", "Aba", "aaa"], 2)), SubgroupIndex::Finite(1));
        assert_eq!(index(&folded(&["aa", "b", "abA"], 2)), SubgroupIndex::Finite(2));
        assert_eq!(index(&folded(&["a"], 2)), SubgroupIndex::Infinite);
        assert_eq!(SubgroupIndex::Finite(2).to_string(), "2");
        assert_eq!(SubgroupIndex::Infinite.to_string(), "infinite");
    }

    #[test]
    fn spanning_tree_of_pinned_instances() {
        let tree = spanning_tree(&folded(&["abba", "Aba", "aaa"], 2)).unwrap();
        assert_eq!(tree, vec![None], "single vertex: empty tree");

        let tree = spanning_tree(&folded(&["aa", "b", "abA"], 2)).unwrap();
        assert_eq!(tree.len(), 2);
        assert_eq!(tree[0], None);
        assert_eq!(tree[1], Some(TreeStep { parent: 0, letter: Letter::new(0, false) }));
        assert_eq!(tree.iter().flatten().count(), 1, "V - 1 tree edges");
    }

    #[test]
    fn transversals_of_pinned_instances() {
        let t = schreier_transversal(&folded(&["abba", "Aba", "aaa"], 2)).unwrap();
        assert_eq!(t, vec![Word::empty()]);

        let t = schreier_transversal(&folded(&["aa", "b", "abA"], 2)).unwrap();
        let texts: Vec<String> = t.iter().map(|x| x.format().unwrap()).collect();
        assert_eq!(texts, vec!["1", "a"]);
    }

    #[test]
    fn transversal_is_prefix_closed() {
        let f = folded(&["aa", "ab", "ba"], 2);
        let t = schreier_transversal(&f).unwrap();
        let set: HashSet<Vec<Letter>> =
            t.iter().map(|word| word.letters().to_vec()).collect();
        for word in &t {
            for cut in 0..word.len() {
                let prefix = word.letters()[..cut].to_vec();
                assert!(set.contains(&prefix), "prefix of {word} missing");
            }
        }
    }

    #[test]
    fn basis_of_pinned_instances() {
        let f = folded(&["abba", "Aba", "aaa"], 2);
        let basis = nielsen_basis(&f).unwrap();
        assert_eq!(basis.len(), 2);
        assert!(regenerates(&f, &basis));

        let f = folded(&["a"], 2);
        let basis = nielsen_basis(&f).unwrap();
        let texts: Vec<String> = basis.iter().map(|x| x.format().unwrap()).collect();
        assert_eq!(texts, vec!["a"]);

        let f = folded(&["aa", "b", "abA"], 2);
        let basis = nielsen_basis(&f).unwrap();
        let texts: Vec<String> = basis.iter().map(|x| x.format().unwrap()).collect();
        assert_eq!(texts, vec!["b", "aa", "abA"]);
        assert!(regenerates(&f, &basis));
    }

    #[test]
    fn rank_matches_euler_characteristic() {
        assert_eq!(subgroup_rank(&folded(&["abba", "Aba", "aaa"], 2)), 2);
        assert_eq!(subgroup_rank(&folded(&["a"], 2)), 1);
        assert_eq!(subgroup_rank(&folded(&["aa", "b", "abA"], 2)), 3);
    }

    #[test]
    fn basis_size_always_matches_rank() {
        for texts in [&["ab", "ba"][..], &["aab", "abb", "bab"][..], &["aa", "b", "abA"][..]] {
            let f = folded(texts, 2);
            assert_eq!(nielsen_basis(&f).unwrap().len(), subgroup_rank(&f));
        }
    }

    #[test]
    fn every_generator_is_a_member() {
        for texts in [&["abba", "Aba", "aaa"][..], &["aa", "b", "abA"][..], &["aab", "ba"][..]] {
            let f = folded(texts, 2);
            for text in texts.iter() {
                assert_eq!(is_member(&f, &w(text, 2)), Ok(true), "{text} generates, so belongs");
            }
        }
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        let f = FoldedGraph {
            alphabet: Alphabet::new(2),
            base: 0,
            vertex_count: 2,
            edges: vec![(0, 0, 0)], // vertex 1 unreachable
        };
        assert_eq!(
            spanning_tree(&f),
            Err(SubgroupError::Disconnected { vertex: 1 })
        );
        assert!(schreier_transversal(&f).is_err());
        assert!(nielsen_basis(&f).is_err());
    }

    #[test]
    fn report_bundles_the_toolkit() {
        let f = folded(&["aa", "b", "abA"], 2);
        let rep = report(&f).unwrap();
        assert_eq!(rep.index, SubgroupIndex::Finite(2));
        assert_eq!(rep.rank, 3);
        assert_eq!(rep.basis.len(), 3);
        assert_eq!(rep.transversal.len(), 2);
        assert_eq!(canonical_form(&f).unwrap(), "0 a 1;0 b 0;1 a 0;1 b 1");
    }
}
