//! Disjoint-set forest with union by rank and path compression.
//!
//! Classes are identified by their root node. `find_root` walks parent links
//! to the root and then compresses the walked path, so a chain is flattened
//! the first time it is traversed; `merge` links the lower-ranked root under
//! the higher-ranked one (first argument wins ties). Over any sequence of
//! operations the total number of parent-link hops is almost linear — the
//! forest counts those hops so tests can hold it to the bound.

/// Forest over nodes `0..len`. Nodes are created with [`Forest::make_node`].
#[derive(Clone, Debug, Default)]
pub struct Forest {
    /// Raw parent links: 0 means "this node is a root", `k > 0` means the
    /// parent is node `k - 1`. All-zero storage is a forest of singletons,
    /// so reserved capacity needs no initialization and untouched regions
    /// stay on the kernel's shared zero page; node ids fit u32, and halving
    /// this array matters for cache. Keep zero meaning "root".
    parent: Vec<u32>,
    rank: Vec<u8>,
    nodes: usize,
    traversals: u64,
    ops: u64,
}

impl Forest {
    pub fn new() -> Forest {
        Forest::default()
    }

    /// Creates a fresh singleton class and returns its node id.
    pub fn make_node(&mut self) -> usize {
        let id = self.nodes;
        assert!(id < u32::MAX as usize, "forest node overflow");
        if self.parent.len() < id + 1 {
            self.parent.push(0);
            self.rank.push(0);
        }
        self.nodes += 1;
        id
    }

    /// Pre-allocates zeroed storage for `nodes` more nodes (all-zero rows
    /// are singleton roots of rank 0, so this writes nothing per entry).
    pub fn reserve(&mut self, nodes: usize) {
        let target = self.nodes + nodes;
        if self.parent.is_empty() {
            self.parent = vec![0; target];
            self.rank = vec![0; target];
        } else if self.parent.len() < target {
            self.parent.resize(target, 0);
            self.rank.resize(target, 0);
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    /// Parent-link hops performed while locating roots (0 when the queried
    /// node is itself a root). Compression rewrites are not hops.
    pub fn traversal_count(&self) -> u64 {
        self.traversals
    }

    /// Number of `find_root` and `merge` calls.
    pub fn op_count(&self) -> u64 {
        self.ops
    }

    pub fn reset_counters(&mut self) {
        self.traversals = 0;
        self.ops = 0;
    }

    fn locate(&mut self, n: usize) -> usize {
        assert!(n < self.nodes, "unknown disjoint-set node {n}");
        let mut root = n as u32;
        let mut hops = 0;
        loop {
            let up = self.parent[root as usize];
            if up == 0 {
                break;
            }
            root = up - 1;
            hops += 1;
        }
        self.traversals += hops;
        // Second pass: point everything on the walked path at the root.
        let mut cur = n as u32;
        loop {
            let up = self.parent[cur as usize];
            if up == 0 || up - 1 == root {
                break;
            }
            self.parent[cur as usize] = root + 1;
            cur = up - 1;
        }
        root as usize
    }

    /// Root of the class containing `n`, compressing the path walked.
    pub fn find_root(&mut self, n: usize) -> usize {
        self.ops += 1;
        self.locate(n)
    }

    /// Unites the classes of `a` and `b` and returns the surviving root.
    /// On a rank tie the root of `a` survives (and its rank grows by one);
    /// already-united classes are left untouched.
    pub fn merge(&mut self, a: usize, b: usize) -> usize {
        self.ops += 1;
        let ra = self.locate(a);
        let rb = self.locate(b);
        if ra == rb {
            return ra;
        }
        if self.rank[ra] > self.rank[rb] {
            self.parent[rb] = ra as u32 + 1;
            ra
        } else if self.rank[rb] > self.rank[ra] {
            self.parent[ra] = rb as u32 + 1;
            rb
        } else {
            self.parent[rb] = ra as u32 + 1;
            self.rank[ra] += 1;
            ra
        }
    }

    /// Diagnostic root lookup: no compression, no counter changes.
    pub fn peek_root(&self, n: usize) -> usize {
        assert!(n < self.nodes, "unknown disjoint-set node {n}");
        let mut root = n as u32;
        loop {
            let up = self.parent[root as usize];
            if up == 0 {
                return root as usize;
            }
            root = up - 1;
        }
    }

    /// Parent link, decoded: a root is its own parent (diagnostic).
    pub fn parent_of(&self, n: usize) -> usize {
        assert!(n < self.nodes, "unknown disjoint-set node {n}");
        match self.parent[n] {
            0 => n,
            up => (up - 1) as usize,
        }
    }

    /// Rank stored at a node (only meaningful at roots).
    pub fn rank_of(&self, n: usize) -> u8 {
        assert!(n < self.nodes, "unknown disjoint-set node {n}");
        self.rank[n]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn forest_of(n: usize) -> Forest {
        let mut f = Forest::new();
        for _ in 0..n {
            f.make_node();
        }
        f
    }

    #[test]
    fn singletons_are_their_own_roots() {
        let mut f = forest_of(3);
        assert_eq!(f.find_root(0), 0);
        assert_eq!(f.find_root(2), 2);
        assert_eq!(f.traversal_count(), 0);
        assert_eq!(f.op_count(), 2);
    }

    #[test]
    fn tie_merge_keeps_first_argument() {
        let mut f = forest_of(3);
        assert_eq!(f.merge(0, 1), 0);
        assert_eq!(f.rank_of(0), 1);
        // Lower rank attaches under higher without a rank change.
        assert_eq!(f.merge(2, 0), 0);
        assert_eq!(f.rank_of(0), 1);
        assert_eq!(f.parent_of(2), 0);
    }

    #[test]
    fn merge_of_united_classes_is_a_noop() {
        let mut f = forest_of(2);
        f.merge(0, 1);
        let rank_before = f.rank_of(0);
        assert_eq!(f.merge(1, 0), 0);
        assert_eq!(f.rank_of(0), rank_before);
    }

    #[test]
    fn second_find_follows_one_link() {
        // Build a depth-2 node: merge two rank-1 trees.
        let mut f = forest_of(4);
        f.merge(0, 1); // rank(0) = 1, parent(1) = 0
        f.merge(2, 3); // rank(2) = 1, parent(3) = 2
        f.merge(0, 2); // tie: parent(2) = 0
        assert_eq!(f.parent_of(3), 2, "3 sits at depth 2 before any find");

        let before = f.traversal_count();
        assert_eq!(f.find_root(3), 0);
        assert_eq!(f.traversal_count() - before, 2, "first find walks two links");
        assert_eq!(f.parent_of(3), 0, "path compressed");

        let before = f.traversal_count();
        assert_eq!(f.find_root(3), 0);
        assert_eq!(f.traversal_count() - before, 1, "second find walks one link");
    }

    #[test]
    #[should_panic(expected = "unknown disjoint-set node")]
    fn unknown_node_rejected() {
        let mut f = forest_of(1);
        f.find_root(5);
    }

    #[test]
    fn rank_invariants_hold_under_random_merges() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xD5F);
        let n = 2000;
        let mut f = forest_of(n);
        for _ in 0..3000 {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if rng.gen_bool(0.7) {
                f.merge(a, b);
            } else {
                f.find_root(a);
            }
        }

        // Ranks strictly increase along parent links.
        for v in 0..n {
            let p = f.parent_of(v);
            if p != v {
                assert!(f.rank_of(v) < f.rank_of(p), "rank not increasing at {v}");
            }
        }

        // A root of rank r owns at least 2^r nodes.
        let mut class_size = vec![0usize; n];
        for v in 0..n {
            class_size[f.peek_root(v)] += 1;
        }
        for (v, &size) in class_size.iter().enumerate() {
            if f.parent_of(v) == v {
                assert!(size >= 1usize << f.rank_of(v), "root {v} too small");
            }
        }
    }
}
