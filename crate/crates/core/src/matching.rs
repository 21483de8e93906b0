//! Maximum bipartite matching via Hopcroft-Karp, plus a lexicographic
//! tie-breaking pass used to make solver output deterministic.

use std::collections::VecDeque;

use crate::{Error, Result};

const UNMATCHED: usize = usize::MAX;

/// A bipartite graph with `left` and `right` vertex sets indexed from 0.
/// Adjacency lists are kept sorted so traversal order is deterministic.
#[derive(Clone, Debug)]
pub struct BipartiteGraph {
    right: usize,
    adj: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    pub fn new(left: usize, right: usize) -> Self {
        BipartiteGraph {
            right,
            adj: vec![Vec::new(); left],
        }
    }

    pub fn add_edge(&mut self, l: usize, r: usize) -> Result<()> {
        if l >= self.adj.len() || r >= self.right {
            return Err(Error::invalid(format!(
                "edge ({l}, {r}) outside {}x{} bipartite graph",
                self.adj.len(),
                self.right
            )));
        }
        match self.adj[l].binary_search(&r) {
            Ok(_) => {}
            Err(pos) => self.adj[l].insert(pos, r),
        }
        Ok(())
    }

    pub fn left_count(&self) -> usize {
        self.adj.len()
    }

    pub fn right_count(&self) -> usize {
        self.right
    }

    pub fn neighbors(&self, l: usize) -> &[usize] {
        &self.adj[l]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }
}

/// A matching as pairs `(left, right)` sorted by left index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

struct HopcroftKarp<'g> {
    g: &'g BipartiteGraph,
    match_l: Vec<usize>,
    match_r: Vec<usize>,
    dist: Vec<usize>,
    queue: VecDeque<usize>,
}

impl<'g> HopcroftKarp<'g> {
    fn new(g: &'g BipartiteGraph) -> Self {
        HopcroftKarp {
            g,
            match_l: vec![UNMATCHED; g.left_count()],
            match_r: vec![UNMATCHED; g.right_count()],
            dist: vec![usize::MAX; g.left_count()],
            queue: VecDeque::new(),
        }
    }

    /// BFS phase: layers free left vertices; returns whether an augmenting
    /// path exists.
    fn bfs(&mut self) -> bool {
        self.queue.clear();
        for l in 0..self.g.left_count() {
            if self.match_l[l] == UNMATCHED {
                self.dist[l] = 0;
                self.queue.push_back(l);
            } else {
                self.dist[l] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = self.queue.pop_front() {
            for &r in self.g.neighbors(l) {
                let next = self.match_r[r];
                if next == UNMATCHED {
                    found = true;
                } else if self.dist[next] == usize::MAX {
                    self.dist[next] = self.dist[l] + 1;
                    self.queue.push_back(next);
                }
            }
        }
        found
    }

    /// DFS phase: extends one shortest augmenting path from `l` if possible.
    fn dfs(&mut self, l: usize) -> bool {
        for i in 0..self.g.neighbors(l).len() {
            let r = self.g.neighbors(l)[i];
            let next = self.match_r[r];
            if next == UNMATCHED || (self.dist[next] == self.dist[l] + 1 && self.dfs(next)) {
                self.match_l[l] = r;
                self.match_r[r] = l;
                return true;
            }
        }
        self.dist[l] = usize::MAX;
        false
    }

    fn run(mut self) -> Vec<(usize, usize)> {
        while self.bfs() {
            for l in 0..self.g.left_count() {
                if self.match_l[l] == UNMATCHED {
                    self.dfs(l);
                }
            }
        }
        (0..self.g.left_count())
            .filter(|&l| self.match_l[l] != UNMATCHED)
            .map(|l| (l, self.match_l[l]))
            .collect()
    }
}

/// Maximum-cardinality matching. Runs in O(E sqrt(V)); ties between equal
/// size matchings are broken by ascending vertex index scans, so the result
/// is deterministic for a given graph.
pub fn max_bipartite_matching(g: &BipartiteGraph) -> Matching {
    Matching {
        pairs: HopcroftKarp::new(g).run(),
    }
}

/// Size of a maximum matching once the pairs in `forced` are fixed and only
/// left vertices `>= from_left` and rights outside `used_right` remain.
fn completion_size(g: &BipartiteGraph, from_left: usize, used_right: &[bool]) -> usize {
    let mut sub = BipartiteGraph::new(g.left_count().saturating_sub(from_left), g.right_count());
    for l in from_left..g.left_count() {
        for &r in g.neighbors(l) {
            if !used_right[r] {
                sub.adj[l - from_left].push(r);
            }
        }
    }
    max_bipartite_matching(&sub).len()
}

/// The maximum matching whose sorted pair list is lexicographically smallest.
///
/// Greedy: scan left vertices in ascending order, fix the smallest right
/// neighbor that still allows completing a maximum matching. Each feasibility
/// probe is one Hopcroft-Karp run on the remaining graph.
pub fn lex_min_maximum_matching(g: &BipartiteGraph) -> Matching {
    let target = max_bipartite_matching(g).len();
    let mut used_right = vec![false; g.right_count()];
    let mut pairs = Vec::with_capacity(target);
    for l in 0..g.left_count() {
        if pairs.len() == target {
            break;
        }
        for &r in g.neighbors(l) {
            if used_right[r] {
                continue;
            }
            used_right[r] = true;
            let need = target - pairs.len() - 1;
            if completion_size(g, l + 1, &used_right) >= need {
                pairs.push((l, r));
                break;
            }
            used_right[r] = false;
        }
    }
    Matching { pairs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn graph_from(left: usize, right: usize, edges: &[(usize, usize)]) -> BipartiteGraph {
        let mut g = BipartiteGraph::new(left, right);
        for &(l, r) in edges {
            g.add_edge(l, r).unwrap();
        }
        g
    }

    /// Exhaustive maximum matching size, used as an oracle.
    fn brute_max(g: &BipartiteGraph) -> usize {
        fn rec(g: &BipartiteGraph, l: usize, used: u64) -> usize {
            if l == g.left_count() {
                return 0;
            }
            let mut best = rec(g, l + 1, used);
            for &r in g.neighbors(l) {
                if used & (1 << r) == 0 {
                    best = best.max(1 + rec(g, l + 1, used | (1 << r)));
                }
            }
            best
        }
        rec(g, 0, 0)
    }

    #[test]
    fn empty_and_trivial() {
        let g = BipartiteGraph::new(0, 0);
        assert_eq!(max_bipartite_matching(&g).len(), 0);
        let g = graph_from(1, 1, &[(0, 0)]);
        assert_eq!(max_bipartite_matching(&g).pairs, vec![(0, 0)]);
        assert!(BipartiteGraph::new(1, 1).add_edge(1, 0).is_err());
    }

    #[test]
    fn augmenting_path_needed() {
        // Perfect matching exists only by augmenting: 0-0, then 1 forces a swap.
        let g = graph_from(2, 2, &[(0, 0), (0, 1), (1, 0)]);
        let m = max_bipartite_matching(&g);
        assert_eq!(m.len(), 2);
    }

    #[test]
    fn lex_min_prefers_small_pairs() {
        // Maximum matchings: {(0,0),(1,1)} and {(0,1),(1,0)}.
        let g = graph_from(2, 2, &[(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert_eq!(lex_min_maximum_matching(&g).pairs, vec![(0, 0), (1, 1)]);

        // Taking (0,0) greedily without lookahead would cap the size at 1.
        let g = graph_from(2, 2, &[(0, 0), (0, 1), (1, 0)]);
        assert_eq!(lex_min_maximum_matching(&g).pairs, vec![(0, 1), (1, 0)]);
    }

    proptest! {
        #[test]
        fn matches_brute_force(edges in proptest::collection::vec((0usize..7, 0usize..7), 0..30)) {
            let g = graph_from(7, 7, &edges);
            let hk = max_bipartite_matching(&g);
            prop_assert_eq!(hk.len(), brute_max(&g));
            // Matching property: no vertex reused.
            let mut seen_l = [false; 7];
            let mut seen_r = [false; 7];
            for &(l, r) in &hk.pairs {
                prop_assert!(!seen_l[l] && !seen_r[r]);
                seen_l[l] = true;
                seen_r[r] = true;
                prop_assert!(g.neighbors(l).contains(&r));
            }
        }

        #[test]
        fn lex_min_is_maximum_and_minimal(edges in proptest::collection::vec((0usize..5, 0usize..5), 0..15)) {
            let g = graph_from(5, 5, &edges);
            let lm = lex_min_maximum_matching(&g);
            prop_assert_eq!(lm.len(), brute_max(&g));
            // Oracle: enumerate all maximum matchings, take the lex smallest.
            fn all_max(g: &BipartiteGraph, l: usize, used: u32, cur: &mut Vec<(usize, usize)>, best: &mut Option<Vec<(usize, usize)>>, target: usize) {
                if l == g.left_count() {
                    if cur.len() == target {
                        if best.as_ref().is_none_or(|b: &Vec<(usize, usize)>| cur.as_slice() < b.as_slice()) {
                            *best = Some(cur.clone());
                        }
                    }
                    return;
                }
                all_max(g, l + 1, used, cur, best, target);
                for &r in g.neighbors(l) {
                    if used & (1 << r) == 0 {
                        cur.push((l, r));
                        all_max(g, l + 1, used | (1 << r), cur, best, target);
                        cur.pop();
                    }
                }
            }
            let mut best = None;
            all_max(&g, 0, 0, &mut Vec::new(), &mut best, lm.len());
            prop_assert_eq!(lm.pairs, best.unwrap());
        }
    }
}
