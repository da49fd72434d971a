//! The folding engine: bouquet construction, unfoldedness detection,
//! elementary fold steps, the main loop, and canonicalization.
//!
//! A vertex class is *unfolded* when two of its live edges agree on label
//! and incidence (outgoing/incoming, with a loop occupying both). An
//! elementary fold deletes one edge of such a pair and, when the far
//! endpoints differ, merges their classes. Folding repeats until no vertex
//! is unfolded; by confluence the resulting quotient does not depend on the
//! order in which pairs are chosen, which is what lets [`naive_fold`] — an
//! intentionally simple quadratic rewrite — serve as a test oracle for the
//! near-linear engine.
//!
//! The work loop never scans the whole graph: an `UNFOLDED` list holds the
//! class roots that may still admit a fold, and each fold step re-examines
//! only the classes it touched (at most three), inspecting at most
//! `2·rank + 1` edge-list entries per class.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::graph::{EdgeId, Incidence, LabeledGraph, VertexId};
use crate::words::{Alphabet, Word};

/// Result of inspecting one vertex class.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FoldStatus {
    Folded,
    /// Two distinct live edges sharing label and incidence slot at the
    /// inspected class; the first component was encountered first.
    UnfoldedPair(EdgeId, EdgeId),
}

/// Which local shape a fold step resolved.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FoldCase {
    /// Far endpoints lay in distinct classes, neither the folding vertex:
    /// their classes merged.
    Merge,
    /// Far endpoints already shared a class (parallel edges, double loops):
    /// one edge dropped, no merge.
    Parallel,
    /// One edge of the pair was a loop: the loop's vertex merged with the
    /// other edge's far endpoint.
    Loop,
}

impl fmt::Display for FoldCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FoldCase::Merge => "merge",
            FoldCase::Parallel => "parallel",
            FoldCase::Loop => "loop",
        })
    }
}

/// One elementary folding, as recorded in a [`FoldTrace`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FoldEvent {
    pub case: FoldCase,
    /// `(winner, loser)` class representatives when classes merged.
    pub merged: Option<(u32, u32)>,
    /// Class-level `(from, label, to)` of the deleted edge at deletion time.
    pub deleted: (u32, u8, u32),
}

/// Ordered record of every elementary folding performed.
#[derive(Clone, Debug, Default)]
pub struct FoldTrace {
    pub events: Vec<FoldEvent>,
}

impl FoldTrace {
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// One line per event:
    /// `<case>\t<winner>\t<loser>\t<from>\t<label>\t<to>`, with `-` in the
    /// winner/loser columns when no merge happened.
    pub fn to_log(&self) -> String {
        let mut out = String::new();
        for ev in &self.events {
            let (w, l) = match ev.merged {
                Some((w, l)) => (w.to_string(), l.to_string()),
                None => ("-".to_string(), "-".to_string()),
            };
            let (from, x, to) = ev.deleted;
            let label = (b'a' + x) as char;
            out.push_str(&format!("{}\t{w}\t{l}\t{from}\t{label}\t{to}\n", ev.case));
        }
        out
    }
}

/// An immutable folded graph: a deterministic partial automaton over the
/// alphabet, with vertices renumbered `0..vertex_count` and base `0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldedGraph {
    pub alphabet: Alphabet,
    pub base: u32,
    pub vertex_count: usize,
    /// `(from, label, to)` triples, sorted ascending.
    pub edges: Vec<(u32, u8, u32)>,
}

/// Why a graph failed the foldedness check.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum FoldednessError {
    #[error("vertex {vertex} has multiple {direction} edges labeled {label}")]
    NotFolded { vertex: u32, label: char, direction: &'static str },
}

impl FoldedGraph {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Direct scan of the folded-graph invariant: per vertex and label at
    /// most one outgoing and one incoming edge.
    pub fn is_folded(&self) -> bool {
        self.check_folded().is_ok()
    }

    pub fn check_folded(&self) -> Result<(), FoldednessError> {
        let rank = self.alphabet.rank();
        let mut out_seen = vec![false; self.vertex_count * rank];
        let mut in_seen = vec![false; self.vertex_count * rank];
        for &(from, x, to) in &self.edges {
            let label = (b'a' + x) as char;
            let o = from as usize * rank + x as usize;
            if out_seen[o] {
                return Err(FoldednessError::NotFolded {
                    vertex: from,
                    label,
                    direction: "outgoing",
                });
            }
            out_seen[o] = true;
            let i = to as usize * rank + x as usize;
            if in_seen[i] {
                return Err(FoldednessError::NotFolded {
                    vertex: to,
                    label,
                    direction: "incoming",
                });
            }
            in_seen[i] = true;
        }
        Ok(())
    }

    /// Rebuilds a mutable graph with the same vertices and edges (base 0).
    pub fn to_graph(&self) -> LabeledGraph {
        let mut g = LabeledGraph::new(self.alphabet);
        let mut ids = vec![g.base()];
        for _ in 1..self.vertex_count {
            ids.push(g.add_vertex());
        }
        for &(from, x, to) in &self.edges {
            g.add_edge(ids[from as usize], x, ids[to as usize]);
        }
        g
    }
}

/// Builds the wedge of word loops at a single base vertex: one loop per
/// word, a positive letter adding a forward edge and an inverse letter a
/// backward edge. Empty words are skipped. The UNFOLDED list is seeded by
/// classifying the base (interior chain vertices of reduced words cannot be
/// unfolded).
///
/// Panics if a word is not freely reduced.
pub fn build_bouquet(words: &[Word], alphabet: Alphabet) -> LabeledGraph {
    let mut g = LabeledGraph::new(alphabet);
    let base = g.base();
    let total: usize = words.iter().map(Word::len).sum();
    g.reserve(total.saturating_sub(words.len()), total);
    for word in words {
        for pair in word.letters().windows(2) {
            assert!(
                pair[1] != pair[0].inverted(),
                "bouquet words must be freely reduced (found {} next to {})",
                Word::from_letters(vec![pair[0]]),
                Word::from_letters(vec![pair[1]]),
            );
        }
        if word.is_empty() {
            continue;
        }
        let mut cur = base;
        for (i, &letter) in word.letters().iter().enumerate() {
            let next = if i + 1 == word.len() { base } else { g.add_vertex() };
            let x = letter.generator() as u8;
            if letter.is_inverse() {
                g.add_edge(next, x, cur);
            } else {
                g.add_edge(cur, x, next);
            }
            cur = next;
        }
    }
    if let FoldStatus::UnfoldedPair(..) = classify_vertex(&mut g, base) {
        g.mark_unfolded(base);
    }
    g
}

/// Scans the edge list of class root `v` for two live edges sharing label
/// and incidence slot, updating each inspected edge's endpoints on the way.
/// Returns the first conflicting pair in list order, or `Folded`.
///
/// A folded class of rank `r` occupies at most `2r` incidence slots and its
/// list carries exactly one entry per occupied slot (loops fill two slots
/// via their two entries), so the scan inspects at most `2r + 1` entries
/// before it either finds a pair or exhausts the list.
pub fn classify_vertex(g: &mut LabeledGraph, v: VertexId) -> FoldStatus {
    assert_eq!(g.peek_root(v), v, "classify_vertex needs a class root");
    let rank = g.alphabet().rank();
    let mut out_seen = [None::<EdgeId>; Alphabet::MAX_RANK];
    let mut in_seen = [None::<EdgeId>; Alphabet::MAX_RANK];
    let mut inspected = 0usize;
    let mut cursor = g.edgelist_head(v);
    while let Some(slot) = cursor {
        inspected += 1;
        debug_assert!(inspected <= 2 * rank + 1, "classification scan exceeded pigeonhole bound");
        g.note_inspection();
        let (e, _end) = g.slot_entry(slot);
        g.update_edge(e);
        let x = g.edge_label(e) as usize;
        match g.incidence(e, v) {
            Incidence::Outgoing => match out_seen[x] {
                Some(e0) if e0 != e => return FoldStatus::UnfoldedPair(e0, e),
                _ => out_seen[x] = Some(e),
            },
            Incidence::Incoming => match in_seen[x] {
                Some(e0) if e0 != e => return FoldStatus::UnfoldedPair(e0, e),
                _ => in_seen[x] = Some(e),
            },
            Incidence::Loop => {
                // A loop holds both the outgoing and the incoming slot; its
                // second list entry must not conflict with itself.
                if let Some(e0) = out_seen[x] {
                    if e0 != e {
                        return FoldStatus::UnfoldedPair(e0, e);
                    }
                }
                out_seen[x] = Some(e);
                if let Some(e0) = in_seen[x] {
                    if e0 != e {
                        return FoldStatus::UnfoldedPair(e0, e);
                    }
                }
                in_seen[x] = Some(e);
            }
        }
        cursor = g.edgelist_next(slot);
    }
    FoldStatus::Folded
}

/// Far endpoint of `e` seen from class `v`, at class level; `v` itself for
/// a loop. Assumes `e`'s stored endpoints were just updated to roots.
fn far_endpoint(g: &mut LabeledGraph, e: EdgeId, v: VertexId) -> VertexId {
    match g.incidence(e, v) {
        Incidence::Loop => v,
        Incidence::Outgoing => g.edge_terminal(e),
        Incidence::Incoming => g.edge_initial(e),
    }
}

/// Performs one elementary folding of the pair `(e1, e2)` at class root
/// `v`, then re-classifies each touched class and fixes its UNFOLDED mark.
/// Exactly one edge is deleted. Panics if the edges are not live or do not
/// share a label.
pub fn fold_step(g: &mut LabeledGraph, v: VertexId, e1: EdgeId, e2: EdgeId) -> FoldEvent {
    assert!(g.is_live(e1) && g.is_live(e2), "fold_step needs live edges");
    assert_ne!(e1, e2, "fold_step needs two distinct edges");
    let x = g.edge_label(e1);
    assert_eq!(x, g.edge_label(e2), "fold_step edges must share a label");
    g.update_edge(e1);
    g.update_edge(e2);
    let r = far_endpoint(g, e1, v);
    let s = far_endpoint(g, e2, v);

    let record_deleted = |g: &mut LabeledGraph, e: EdgeId| {
        g.update_edge(e);
        (g.edge_initial(e).value(), x, g.edge_terminal(e).value())
    };

    let event = if r == s {
        // Parallel edges between the same pair of classes, or two loops:
        // dropping one edge folds them, nothing merges.
        let deleted = record_deleted(g, e2);
        g.delete_edge(e2);
        FoldEvent { case: FoldCase::Parallel, merged: None, deleted }
    } else if r != v && s != v {
        // Distinct far endpoints: unite their classes, splice the loser's
        // edge list onto the winner's, and drop the later edge.
        let winner = g.merge_classes(r, s);
        let loser = if winner == r { s } else { r };
        g.unmark_unfolded(loser);
        g.concatenate_edgelists(winner, loser);
        let deleted = record_deleted(g, e2);
        g.delete_edge(e2);
        FoldEvent { case: FoldCase::Merge, merged: Some((winner.value(), loser.value())), deleted }
    } else {
        // Exactly one far endpoint equals v, so that edge is a loop; the
        // other runs to w ≠ v. The classes of v and w unite and the
        // non-loop edge is dropped (the loop absorbs it).
        let (non_loop, w) = if r == v { (e2, s) } else { (e1, r) };
        let winner = g.merge_classes(v, w);
        let loser = if winner == v { w } else { v };
        g.unmark_unfolded(loser);
        g.concatenate_edgelists(winner, loser);
        let deleted = record_deleted(g, non_loop);
        g.delete_edge(non_loop);
        FoldEvent { case: FoldCase::Loop, merged: Some((winner.value(), loser.value())), deleted }
    };

    // Re-classify every class the step touched and set its UNFOLDED mark to
    // match. At most two classes remain distinct here (v's and the merge
    // survivor's), so the step stays local.
    let rv = g.root(v);
    let mut affected = [Some(rv), None];
    if let Some((winner, _)) = event.merged {
        let w = VertexId::from_value(winner);
        if w != rv {
            affected[1] = Some(w);
        }
    }
    for root in affected.into_iter().flatten() {
        match classify_vertex(g, root) {
            FoldStatus::Folded => g.unmark_unfolded(root),
            FoldStatus::UnfoldedPair(..) => g.mark_unfolded(root),
        }
    }
    event
}

/// Runs the folding loop to exhaustion on a graph whose UNFOLDED list is
/// already seeded, leaving the graph folded at class level. Exposed so
/// callers can read instrumentation counters before compaction.
pub fn fold_in_place(g: &mut LabeledGraph) -> FoldTrace {
    let mut events = Vec::new();
    while let Some(v) = g.unfolded_head() {
        match classify_vertex(g, v) {
            FoldStatus::Folded => g.unmark_unfolded(v),
            FoldStatus::UnfoldedPair(e1, e2) => events.push(fold_step(g, v, e1, e2)),
        }
    }
    FoldTrace { events }
}

/// Freezes the class-level quotient of `g` into a [`FoldedGraph`]:
/// surviving class roots are renumbered with the base class as `0` and the
/// rest ascending by original id. Meaningful once `g` is folded.
pub fn compact(g: &LabeledGraph) -> FoldedGraph {
    // Root classes get compact ids in vertex-id order, base first. Only
    // roots' rename slots are ever read, and all of those are written, so
    // zeroed storage needs no sentinel.
    let forest = g.forest();
    let base_root = g.peek_root(g.base()).value();
    let mut rename = vec![0u32; g.vertex_count()];
    let mut next = 1u32;
    for (v, slot) in rename.iter_mut().enumerate() {
        if v != base_root as usize && forest.parent_of(v) == v {
            *slot = next;
            next += 1;
        }
    }
    // Counting sort by renamed source, then ordering the per-vertex runs:
    // a folded vertex carries at most 2·rank outgoing edges, so the runs
    // are tiny and the whole ordering is linear.
    let vertex_count = next as usize;
    let mut counts = vec![0u32; vertex_count + 1];
    g.visit_live_edges(|from, _, _| counts[rename[from as usize] as usize + 1] += 1);
    for i in 1..counts.len() {
        counts[i] += counts[i - 1];
    }
    let mut edges = vec![(0u32, 0u8, 0u32); g.live_edge_count()];
    g.visit_live_edges(|from, x, to| {
        let slot = &mut counts[rename[from as usize] as usize];
        edges[*slot as usize] = (rename[from as usize], x, rename[to as usize]);
        *slot += 1;
    });
    let mut start = 0;
    while start < edges.len() {
        let from = edges[start].0;
        let mut stop = start + 1;
        while stop < edges.len() && edges[stop].0 == from {
            stop += 1;
        }
        edges[start..stop].sort_unstable();
        start = stop;
    }
    FoldedGraph { alphabet: g.alphabet(), base: 0, vertex_count, edges }
}

/// Folds a bouquet built by [`build_bouquet`] (UNFOLDED already seeded) and
/// compacts the result.
pub fn fold(mut g: LabeledGraph) -> (FoldedGraph, FoldTrace) {
    let trace = fold_in_place(&mut g);
    (compact(&g), trace)
}

/// Folds an arbitrary hand-built graph: seeds UNFOLDED by classifying every
/// class root (one O(E) sweep), then folds. Disconnected graphs fold
/// componentwise.
pub fn fold_arbitrary(mut g: LabeledGraph) -> (FoldedGraph, FoldTrace) {
    let roots: Vec<VertexId> = {
        let snap = g.snapshot();
        snap.vertex_roots.iter().map(|&r| VertexId::from_value(r)).collect()
    };
    for root in roots {
        if let FoldStatus::UnfoldedPair(..) = classify_vertex(&mut g, root) {
            g.mark_unfolded(root);
        }
    }
    let trace = fold_in_place(&mut g);
    (compact(&g), trace)
}

/// Quadratic reference folding: repeatedly scans every vertex for any
/// foldable pair and performs the identification by rewriting the whole
/// edge table. No union-find, no incidence lists, no lazy updates — an
/// independent oracle for equivalence testing. Reads the graph's current
/// class-level state without mutating it.
pub fn naive_fold(g: &LabeledGraph) -> FoldedGraph {
    let snap = g.snapshot();
    let mut vertices = snap.vertex_roots.clone();
    let mut edges = snap.edges.clone();
    let mut base = snap.base_root;

    loop {
        // A pair folds at the endpoint it shares: equal labels plus a common
        // source (shared outgoing slot) or a common target (shared incoming
        // slot); loops participate on both sides.
        let mut found = None;
        'scan: for i in 0..edges.len() {
            for j in (i + 1)..edges.len() {
                if edges[i].1 != edges[j].1 {
                    continue;
                }
                if edges[i].0 == edges[j].0 {
                    found = Some((edges[i].0, i, j));
                    break 'scan;
                }
                if edges[i].2 == edges[j].2 {
                    found = Some((edges[i].2, i, j));
                    break 'scan;
                }
            }
        }
        let Some((v, i, j)) = found else { break };

        let far = |(from, _, to): (u32, u8, u32)| if from == v { to } else { from };
        let r = far(edges[i]);
        let s = far(edges[j]);
        edges.remove(j);
        if r != s {
            // Identify classes r and s by full rewrite; keep the smaller id.
            let (winner, loser) = if r < s { (r, s) } else { (s, r) };
            for edge in &mut edges {
                if edge.0 == loser {
                    edge.0 = winner;
                }
                if edge.2 == loser {
                    edge.2 = winner;
                }
            }
            if base == loser {
                base = winner;
            }
            vertices.retain(|&u| u != loser);
        }
    }

    let mut rename = std::collections::HashMap::new();
    rename.insert(base, 0u32);
    let mut next = 1u32;
    for &u in &vertices {
        if u != base {
            rename.insert(u, next);
            next += 1;
        }
    }
    let mut out: Vec<(u32, u8, u32)> =
        edges.iter().map(|&(from, x, to)| (rename[&from], x, rename[&to])).collect();
    out.sort_unstable();
    FoldedGraph { alphabet: g.alphabet(), base: 0, vertex_count: vertices.len(), edges: out }
}

/// Renumbers a folded graph into its canonical presentation: breadth-first
/// from the base, exploring outgoing edges by ascending label and then
/// incoming edges by ascending label, naming vertices in discovery order.
/// Unreached components (possible only for hand-built graphs) are walked
/// the same way starting from their smallest remaining vertex.
///
/// Two folded graphs get equal canonical edges exactly when a base-respecting
/// labeled-graph isomorphism relates them; determinism rests on foldedness
/// (each (vertex, label, direction) step is unique), so unfolded input is
/// rejected.
pub fn canonicalize(f: &FoldedGraph) -> Result<FoldedGraph, FoldednessError> {
    f.check_folded()?;
    let n = f.vertex_count;
    let mut out_adj: Vec<Vec<(u8, u32)>> = vec![Vec::new(); n];
    let mut in_adj: Vec<Vec<(u8, u32)>> = vec![Vec::new(); n];
    for &(from, x, to) in &f.edges {
        out_adj[from as usize].push((x, to));
        in_adj[to as usize].push((x, from));
    }
    for adj in out_adj.iter_mut().chain(in_adj.iter_mut()) {
        adj.sort_unstable();
    }

    let mut name = vec![u32::MAX; n];
    let mut next = 0u32;
    let mut queue = VecDeque::new();
    let mut discover = |v: u32, name: &mut Vec<u32>, queue: &mut VecDeque<u32>| {
        if name[v as usize] == u32::MAX {
            name[v as usize] = next;
            next += 1;
            queue.push_back(v);
        }
    };

    let mut start = f.base;
    loop {
        discover(start, &mut name, &mut queue);
        while let Some(v) = queue.pop_front() {
            for &(_, to) in &out_adj[v as usize] {
                discover(to, &mut name, &mut queue);
            }
            for &(_, from) in &in_adj[v as usize] {
                discover(from, &mut name, &mut queue);
            }
        }
        match name.iter().position(|&m| m == u32::MAX) {
            Some(unreached) => start = unreached as u32,
            None => break,
        }
    }

    let mut edges: Vec<(u32, u8, u32)> = f
        .edges
        .iter()
        .map(|&(from, x, to)| (name[from as usize], x, name[to as usize]))
        .collect();
    edges.sort_unstable();
    Ok(FoldedGraph { alphabet: f.alphabet, base: 0, vertex_count: n, edges })
}

/// Canonical text code of a folded graph: the canonicalized triples as
/// `"from label to"` joined by `;`, e.g. `"0 a 0;0 b 0"`. A graph with no
/// edges yields the empty string.
pub fn canonical_form(f: &FoldedGraph) -> Result<String, FoldednessError> {
    let canon = canonicalize(f)?;
    let parts: Vec<String> = canon
        .edges
        .iter()
        .map(|&(from, x, to)| format!("{from} {} {to}", (b'a' + x) as char))
        .collect();
    Ok(parts.join(";"))
}
