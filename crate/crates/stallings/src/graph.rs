//! Mutable directed labeled graph whose vertices merge into classes.
//!
//! Vertices are never deleted: identifying two vertices is a `merge` in a
//! disjoint-set forest, and from then on the surviving root represents the
//! class. Edges store endpoints that may go stale (pointing at non-roots);
//! the true endpoints are always `root(initial)` / `root(terminal)`, and
//! [`LabeledGraph::update_edge`] repairs the stored fields on demand. This
//! laziness is what keeps folding near-linear — a global endpoint rewrite
//! after every merge would be quadratic.
//!
//! Every edge occupies one slot in the edge list of each endpoint's class
//! (a loop puts both slots in the same list), so the list at a class root
//! holds exactly the live edges incident to that class. Merging two classes
//! concatenates their edge lists in constant time.
//!
//! A dedicated `UNFOLDED` list tracks class roots that may still admit a
//! folding; only roots may be marked.
//!
//! Labels are always positive generators: a letter `x⁻¹` is realized by
//! walking an `x`-labeled edge backwards, never stored.

use crate::disjoint_sets::Forest;
use crate::linked_lists::{ListArena, ListId, SlotId};
use crate::words::Alphabet;

/// Handle to a vertex. Distinct ids may denote the same class after merges;
/// [`LabeledGraph::root`] gives the class representative.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct VertexId(u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn value(self) -> u32 {
        self.0
    }

    /// Handle from a raw index previously obtained via [`Self::value`]
    /// (e.g. out of a [`GraphSnapshot`]).
    pub fn from_value(v: u32) -> VertexId {
        VertexId(v)
    }
}

/// Handle to an edge (live or deleted).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct EdgeId(u32);

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Which end of an edge a slot represents.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EdgeEnd {
    Initial,
    Terminal,
}

/// How an edge meets a vertex class.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Incidence {
    Outgoing,
    Incoming,
    Loop,
}

struct EdgeData {
    initial: VertexId,
    terminal: VertexId,
    label: u8,
    live: bool,
}

/// Class-level view of the current graph: plain data, safe to inspect while
/// the graph keeps mutating afterwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSnapshot {
    /// Sorted distinct class roots (raw vertex indices).
    pub vertex_roots: Vec<u32>,
    pub base_root: u32,
    /// Live edges as `(root(initial), label, root(terminal))`.
    pub edges: Vec<(u32, u8, u32)>,
}

/// Slots and lists carry no payloads: everything is recovered from
/// allocation order. Vertex `v` owns edge list number `v` (in `edge_slots`)
/// and UNFOLDED slot number `v` (in `vertex_slots`, whose single list is
/// UNFOLDED itself); edge `e` owns edge slots `2e` (initial end) and `2e+1`
/// (terminal end).
pub struct LabeledGraph {
    alphabet: Alphabet,
    forest: Forest,
    edge_slots: ListArena<()>,
    vertex_slots: ListArena<()>,
    vertex_total: usize,
    edges: Vec<EdgeData>,
    base: VertexId,
    unfolded: ListId,
    live_edges: usize,
    inspections: u64,
}

impl LabeledGraph {
    /// A graph with a single vertex, which is the base.
    pub fn new(alphabet: Alphabet) -> Self {
        let mut vertex_slots = ListArena::new();
        let unfolded = vertex_slots.new_list();
        let mut g = LabeledGraph {
            alphabet,
            forest: Forest::new(),
            edge_slots: ListArena::new(),
            vertex_slots,
            vertex_total: 0,
            edges: Vec::new(),
            base: VertexId(0),
            unfolded,
            live_edges: 0,
            inspections: 0,
        };
        let base = g.add_vertex();
        debug_assert_eq!(base, VertexId(0));
        g
    }

    /// Edge list of (the class rooted at) vertex `v`.
    fn edgelist(&self, v: VertexId) -> ListId {
        ListId::from_index(v.index())
    }

    /// The UNFOLDED slot belonging to vertex `v`.
    fn unfolded_slot(&self, v: VertexId) -> SlotId {
        SlotId::from_index(v.index())
    }

    /// The two edge-list slots belonging to edge `e`.
    fn edge_end_slots(&self, e: EdgeId) -> (SlotId, SlotId) {
        (SlotId::from_index(2 * e.index()), SlotId::from_index(2 * e.index() + 1))
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn base(&self) -> VertexId {
        self.base
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_total
    }

    pub fn live_edge_count(&self) -> usize {
        self.live_edges
    }

    /// Read-only view of the vertex forest (for counters and invariants).
    pub fn forest(&self) -> &Forest {
        &self.forest
    }

    /// Edgelist entries examined by classification so far.
    pub fn inspection_count(&self) -> u64 {
        self.inspections
    }

    pub(crate) fn note_inspection(&mut self) {
        self.inspections += 1;
    }

    fn check_vertex(&self, v: VertexId) {
        assert!(v.index() < self.vertex_total, "unknown vertex {v:?}");
    }

    fn check_edge(&self, e: EdgeId) {
        assert!(e.index() < self.edges.len(), "unknown edge {e:?}");
    }

    /// Pre-allocates room for `vertices` more vertices and `edges` more
    /// edges across every backing arena.
    pub fn reserve(&mut self, vertices: usize, edges: usize) {
        self.forest.reserve(vertices);
        self.edges.reserve(edges);
        self.edge_slots.reserve(2 * edges, vertices);
        self.vertex_slots.reserve(vertices, 0);
    }

    /// Adds a fresh singleton vertex with an empty edge list.
    pub fn add_vertex(&mut self) -> VertexId {
        let node = self.forest.make_node();
        debug_assert_eq!(node, self.vertex_total);
        let id = VertexId(node as u32);
        let edgelist = self.edge_slots.new_list();
        debug_assert_eq!(edgelist, self.edgelist(id));
        let unfolded_slot = self.vertex_slots.new_slot(());
        debug_assert_eq!(unfolded_slot, self.unfolded_slot(id));
        self.vertex_total += 1;
        id
    }

    /// Adds the edge `u —x→ v`. Its two slots are appended to the edge lists
    /// of the classes of `u` and `v` (one list, twice, for a loop).
    pub fn add_edge(&mut self, u: VertexId, x: u8, v: VertexId) -> EdgeId {
        self.check_vertex(u);
        self.check_vertex(v);
        assert!(
            (x as usize) < self.alphabet.rank(),
            "label {x} out of range for rank {}",
            self.alphabet.rank()
        );
        let id = EdgeId(u32::try_from(self.edges.len()).expect("edge arena overflow"));
        let initial_slot = self.edge_slots.new_slot(());
        let terminal_slot = self.edge_slots.new_slot(());
        debug_assert_eq!((initial_slot, terminal_slot), self.edge_end_slots(id));
        let ru = self.root(u);
        let rv = self.root(v);
        let ru_list = self.edgelist(ru);
        let rv_list = self.edgelist(rv);
        self.edge_slots.addnode(initial_slot, ru_list);
        self.edge_slots.addnode(terminal_slot, rv_list);
        self.edges.push(EdgeData { initial: u, terminal: v, label: x, live: true });
        self.live_edges += 1;
        id
    }

    /// Detaches both slots of the edge; no-op when already deleted.
    pub fn delete_edge(&mut self, e: EdgeId) {
        self.check_edge(e);
        if !self.edges[e.index()].live {
            return;
        }
        let (initial_slot, terminal_slot) = self.edge_end_slots(e);
        self.edge_slots.remove(initial_slot);
        self.edge_slots.remove(terminal_slot);
        self.edges[e.index()].live = false;
        self.live_edges -= 1;
    }

    pub fn is_live(&self, e: EdgeId) -> bool {
        self.check_edge(e);
        self.edges[e.index()].live
    }

    /// Stored initial endpoint — possibly stale; see [`Self::update_edge`].
    pub fn edge_initial(&self, e: EdgeId) -> VertexId {
        self.check_edge(e);
        self.edges[e.index()].initial
    }

    pub fn edge_terminal(&self, e: EdgeId) -> VertexId {
        self.check_edge(e);
        self.edges[e.index()].terminal
    }

    pub fn edge_label(&self, e: EdgeId) -> u8 {
        self.check_edge(e);
        self.edges[e.index()].label
    }

    /// Class representative of `v` (compressing the lookup path).
    pub fn root(&mut self, v: VertexId) -> VertexId {
        self.check_vertex(v);
        VertexId(self.forest.find_root(v.index()) as u32)
    }

    /// Class representative without compression or counter changes.
    pub fn peek_root(&self, v: VertexId) -> VertexId {
        self.check_vertex(v);
        VertexId(self.forest.peek_root(v.index()) as u32)
    }

    /// Unites two vertex classes, returning the surviving root. Edge lists
    /// and UNFOLDED marks are *not* touched; callers splice and re-mark.
    pub fn merge_classes(&mut self, a: VertexId, b: VertexId) -> VertexId {
        self.check_vertex(a);
        self.check_vertex(b);
        VertexId(self.forest.merge(a.index(), b.index()) as u32)
    }

    /// Splices the edge list of class `loser` onto the back of class
    /// `winner`'s list in O(1). Both must be (former) class representatives.
    pub fn concatenate_edgelists(&mut self, winner: VertexId, loser: VertexId) {
        self.check_vertex(winner);
        self.check_vertex(loser);
        let target = self.edgelist(winner);
        let donor = self.edgelist(loser);
        self.edge_slots.concatenate(target, donor);
    }

    /// How the live edge `e` meets the class of root `v`.
    /// Panics if `e` is not adjacent to that class.
    pub fn incidence(&mut self, e: EdgeId, v: VertexId) -> Incidence {
        self.check_edge(e);
        debug_assert!(self.edges[e.index()].live, "incidence of a deleted edge");
        let ri = self.root(self.edges[e.index()].initial);
        let rt = self.root(self.edges[e.index()].terminal);
        match (ri == v, rt == v) {
            (true, true) => Incidence::Loop,
            (true, false) => Incidence::Outgoing,
            (false, true) => Incidence::Incoming,
            (false, false) => panic!("edge {e:?} is not adjacent to class {v:?}"),
        }
    }

    /// Rewrites the stored endpoints of `e` to the current class roots.
    pub fn update_edge(&mut self, e: EdgeId) {
        self.check_edge(e);
        let ri = self.root(self.edges[e.index()].initial);
        let rt = self.root(self.edges[e.index()].terminal);
        self.edges[e.index()].initial = ri;
        self.edges[e.index()].terminal = rt;
    }

    /// Puts a class root into UNFOLDED (idempotent).
    pub fn mark_unfolded(&mut self, v: VertexId) {
        self.check_vertex(v);
        assert_eq!(
            self.forest.peek_root(v.index()),
            v.index(),
            "only class roots may be marked unfolded"
        );
        let slot = self.unfolded_slot(v);
        if self.vertex_slots.is_detached(slot) {
            self.vertex_slots.addnode(slot, self.unfolded);
        }
    }

    /// Removes a vertex from UNFOLDED (idempotent; accepts non-roots, since
    /// a merge loser must be withdrawn right after losing).
    pub fn unmark_unfolded(&mut self, v: VertexId) {
        self.check_vertex(v);
        let slot = self.unfolded_slot(v);
        self.vertex_slots.remove(slot);
    }

    /// Front of the UNFOLDED list.
    pub fn unfolded_head(&self) -> Option<VertexId> {
        self.vertex_slots.head(self.unfolded).map(|s| VertexId(s.index() as u32))
    }

    pub fn is_unfolded_empty(&self) -> bool {
        self.vertex_slots.is_empty(self.unfolded)
    }

    /// Current UNFOLDED contents, front to back (diagnostic).
    pub fn unfolded_vertices(&self) -> Vec<VertexId> {
        self.vertex_slots.iter(self.unfolded).map(|s| VertexId(s.index() as u32)).collect()
    }

    /// Cursor into the edge list of the class of root `v`.
    pub fn edgelist_head(&self, v: VertexId) -> Option<SlotId> {
        self.check_vertex(v);
        self.edge_slots.head(self.edgelist(v))
    }

    pub fn edgelist_next(&self, slot: SlotId) -> Option<SlotId> {
        self.edge_slots.next_in_list(slot)
    }

    pub fn slot_entry(&self, slot: SlotId) -> (EdgeId, EdgeEnd) {
        let e = EdgeId((slot.index() / 2) as u32);
        let end =
            if slot.index().is_multiple_of(2) { EdgeEnd::Initial } else { EdgeEnd::Terminal };
        (e, end)
    }

    /// Collected entries of a class's edge list (diagnostic).
    pub fn edgelist_entries(&self, v: VertexId) -> Vec<(EdgeId, EdgeEnd)> {
        self.check_vertex(v);
        self.edge_slots.iter(self.edgelist(v)).map(|s| self.slot_entry(s)).collect()
    }

    /// Link-field accesses performed by the edge-slot lists so far.
    pub fn edge_list_accesses(&self) -> u64 {
        self.edge_slots.access_count()
    }

    /// Sorted distinct class roots, computed in linear time (roots are
    /// vertex ids, so a presence bitmap scanned in id order is enough).
    pub fn class_roots(&self) -> Vec<u32> {
        (0..self.vertex_total)
            .filter(|&v| self.forest.parent_of(v) == v)
            .map(|v| v as u32)
            .collect()
    }

    /// Calls `visit(root(initial), label, root(terminal))` for every live
    /// edge in id order, without mutating anything.
    pub fn visit_live_edges(&self, mut visit: impl FnMut(u32, u8, u32)) {
        for e in &self.edges {
            if e.live {
                let ri = self.forest.peek_root(e.initial.index()) as u32;
                let rt = self.forest.peek_root(e.terminal.index()) as u32;
                visit(ri, e.label, rt);
            }
        }
    }

    /// Class-level picture of the live graph, without mutating anything.
    pub fn snapshot(&self) -> GraphSnapshot {
        let mut edges = Vec::with_capacity(self.live_edges);
        self.visit_live_edges(|from, x, to| edges.push((from, x, to)));
        GraphSnapshot {
            vertex_roots: self.class_roots(),
            base_root: self.forest.peek_root(self.base.index()) as u32,
            edges,
        }
    }

    /// Verifies every structural invariant; `Err` describes the first
    /// violation. Intended for tests — walks the whole graph.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut total_entries = 0usize;
        for vi in 0..self.vertex_total {
            let slots = self
                .edge_slots
                .check_well_formed(self.edgelist(VertexId(vi as u32)))
                .map_err(|e| format!("edgelist of vertex {vi}: {e}"))?;
            let v_root = self.forest.peek_root(vi);
            if v_root != vi && !slots.is_empty() {
                return Err(format!("non-root vertex {vi} has a non-empty edgelist"));
            }
            for slot in slots {
                total_entries += 1;
                let (e, end) = self.slot_entry(slot);
                let ed = &self.edges[e.index()];
                if !ed.live {
                    return Err(format!("deleted edge {e:?} still listed at vertex {vi}"));
                }
                let endpoint = match end {
                    EdgeEnd::Initial => ed.initial,
                    EdgeEnd::Terminal => ed.terminal,
                };
                if self.forest.peek_root(endpoint.index()) != v_root {
                    return Err(format!(
                        "edge {e:?} ({end:?}) listed at class {v_root} but belongs to class {}",
                        self.forest.peek_root(endpoint.index())
                    ));
                }
            }
        }
        if total_entries != 2 * self.live_edges {
            return Err(format!(
                "edgelist entries {total_entries} != 2 x {} live edges",
                self.live_edges
            ));
        }

        let unfolded = self
            .vertex_slots
            .check_well_formed(self.unfolded)
            .map_err(|e| format!("UNFOLDED list: {e}"))?;
        let mut seen = vec![false; self.vertex_total];
        for slot in unfolded {
            let v = VertexId(slot.index() as u32);
            if self.forest.peek_root(v.index()) != v.index() {
                return Err(format!("non-root {v:?} in UNFOLDED"));
            }
            if seen[v.index()] {
                return Err(format!("{v:?} in UNFOLDED twice"));
            }
            seen[v.index()] = true;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Alphabet;

    fn rank2() -> LabeledGraph {
        LabeledGraph::new(Alphabet::new(2))
    }

    #[test]
    fn new_graph_has_one_base_vertex() {
        let g = rank2();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.live_edge_count(), 0);
        assert_eq!(g.base().index(), 0);
        g.check_invariants().unwrap();
    }

    #[test]
    fn added_vertices_are_distinct_roots() {
        let mut g = rank2();
        let u = g.add_vertex();
        let v = g.add_vertex();
        assert_ne!(u, v);
        assert_eq!(g.root(u), u);
        assert_eq!(g.root(v), v);
    }

    #[test]
    fn add_edge_fills_both_edgelists() {
        let mut g = rank2();
        let u = g.add_vertex();
        let v = g.add_vertex();
        let e = g.add_edge(u, 0, v);
        assert_eq!(g.live_edge_count(), 1);
        assert_eq!(g.edgelist_entries(u), vec![(e, EdgeEnd::Initial)]);
        assert_eq!(g.edgelist_entries(v), vec![(e, EdgeEnd::Terminal)]);
        g.check_invariants().unwrap();
    }

    #[test]
    fn loop_contributes_two_entries_to_one_list() {
        let mut g = rank2();
        let u = g.add_vertex();
        let e = g.add_edge(u, 1, u);
        assert_eq!(
            g.edgelist_entries(u),
            vec![(e, EdgeEnd::Initial), (e, EdgeEnd::Terminal)]
        );
        assert_eq!(g.live_edge_count(), 1);
        g.check_invariants().unwrap();
    }

    #[test]
    #[should_panic(expected = "label 5 out of range")]
    fn add_edge_rejects_bad_label() {
        let mut g = rank2();
        let u = g.add_vertex();
        g.add_edge(u, 5, u);
    }

    #[test]
    fn delete_edge_detaches_and_is_idempotent() {
        let mut g = rank2();
        let u = g.add_vertex();
        let v = g.add_vertex();
        let e = g.add_edge(u, 0, v);
        let f = g.add_edge(u, 1, u); // loop

        g.delete_edge(e);
        assert!(!g.is_live(e));
        assert_eq!(g.live_edge_count(), 1);
        assert!(g.edgelist_entries(u).iter().all(|&(x, _)| x != e));
        assert!(g.edgelist_entries(v).is_empty());

        g.delete_edge(f); // a loop loses both entries
        assert!(g.edgelist_entries(u).is_empty());
        assert_eq!(g.live_edge_count(), 0);

        g.delete_edge(e); // no-op
        assert_eq!(g.live_edge_count(), 0);
        g.check_invariants().unwrap();
    }

    #[test]
    fn incidence_at_each_end() {
        let mut g = rank2();
        let u = g.add_vertex();
        let v = g.add_vertex();
        let e = g.add_edge(u, 0, v);
        let l = g.add_edge(v, 1, v);
        assert_eq!(g.incidence(e, u), Incidence::Outgoing);
        assert_eq!(g.incidence(e, v), Incidence::Incoming);
        assert_eq!(g.incidence(l, v), Incidence::Loop);
    }

    #[test]
    fn merged_edge_becomes_a_loop() {
        let mut g = rank2();
        let u = g.add_vertex();
        let v = g.add_vertex();
        let e = g.add_edge(u, 0, v);
        let winner = g.merge_classes(u, v);
        assert_eq!(winner, u, "tie merge keeps the first argument");
        assert_eq!(g.incidence(e, winner), Incidence::Loop);
    }

    #[test]
    #[should_panic(expected = "not adjacent")]
    fn incidence_rejects_foreign_class() {
        let mut g = rank2();
        let u = g.add_vertex();
        let v = g.add_vertex();
        let w = g.add_vertex();
        let e = g.add_edge(u, 0, v);
        g.incidence(e, w);
    }

    #[test]
    fn update_edge_repairs_stale_endpoints() {
        let mut g = rank2();
        let u = g.add_vertex();
        let v = g.add_vertex();
        let w = g.add_vertex();
        let e = g.add_edge(v, 0, w);
        let winner = g.merge_classes(u, v);
        assert_eq!(g.edge_initial(e), v, "stored endpoint is stale after merge");
        g.update_edge(e);
        assert_eq!(g.edge_initial(e), winner);
        assert_eq!(g.edge_terminal(e), w);
        g.update_edge(e); // idempotent
        assert_eq!(g.edge_initial(e), winner);
    }

    #[test]
    fn merge_then_concatenate_moves_edgelist_to_winner() {
        let mut g = rank2();
        let u = g.add_vertex();
        let v = g.add_vertex();
        let w = g.add_vertex();
        g.add_edge(u, 0, w);
        g.add_edge(v, 1, w);

        let winner = g.merge_classes(u, v);
        let loser = if winner == u { v } else { u };
        g.concatenate_edgelists(winner, loser);
        assert_eq!(g.edgelist_entries(winner).len(), 2);
        assert!(g.edgelist_entries(loser).is_empty());
        g.check_invariants().unwrap();
    }

    #[test]
    fn unfolded_marks_are_idempotent() {
        let mut g = rank2();
        let u = g.add_vertex();
        let v = g.add_vertex();
        g.mark_unfolded(u);
        g.mark_unfolded(u); // double mark: still one entry
        g.mark_unfolded(v);
        assert_eq!(g.unfolded_vertices(), vec![u, v]);
        assert_eq!(g.unfolded_head(), Some(u));

        g.unmark_unfolded(u);
        g.unmark_unfolded(u); // no-op
        assert_eq!(g.unfolded_vertices(), vec![v]);
        g.unmark_unfolded(v);
        assert!(g.is_unfolded_empty());
        g.check_invariants().unwrap();
    }

    #[test]
    fn merge_loser_can_be_unmarked() {
        let mut g = rank2();
        let u = g.add_vertex();
        let v = g.add_vertex();
        g.mark_unfolded(u);
        g.mark_unfolded(v);
        let winner = g.merge_classes(u, v);
        let loser = if winner == u { v } else { u };
        g.unmark_unfolded(loser);
        assert_eq!(g.unfolded_vertices(), vec![winner]);
        g.check_invariants().unwrap();
    }

    #[test]
    #[should_panic(expected = "only class roots")]
    fn marking_a_non_root_is_rejected() {
        let mut g = rank2();
        let u = g.add_vertex();
        let v = g.add_vertex();
        let winner = g.merge_classes(u, v);
        let loser = if winner == u { v } else { u };
        g.mark_unfolded(loser);
    }

    #[test]
    fn snapshot_reflects_class_structure() {
        let mut g = rank2();
        let u = g.add_vertex();
        let v = g.add_vertex();
        g.add_edge(u, 0, v);
        g.merge_classes(u, v);
        let snap = g.snapshot();
        assert_eq!(snap.vertex_roots, vec![0, u.value()]);
        assert_eq!(snap.base_root, 0);
        assert_eq!(snap.edges, vec![(u.value(), 0, u.value())]);
    }
}
