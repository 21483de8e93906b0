//! Solvers for the NP-hard variants: exhaustive search over candidate
//! matchings (XP in the number of candidates), a clique-based exact solver
//! for Max Common Candidate-Subelection with both matchings given, a
//! subset-enumeration approximation, and a slow but straightforward
//! brute-force solver used as a reference.

use itertools::Itertools;

use crate::iso::subelection_isomorphism_given_cand_matching;
use crate::{
    CandidateMatching, Election, Error, IsoWitness, MatchingCase, Result, Variant, VoterMatching,
};

/// Graphs are stored as bitset adjacency rows, so vertex counts are capped.
pub const MAX_GRAPH_VERTICES: usize = 128;

/// A simple undirected graph without self-loops, at most
/// [`MAX_GRAPH_VERTICES`] vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<u128>,
}

impl Graph {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_GRAPH_VERTICES {
            return Err(Error::size_limit(format!(
                "graph has {n} vertices, at most {MAX_GRAPH_VERTICES} supported"
            )));
        }
        Ok(Graph { n, adj: vec![0; n] })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n)?;
        for &(a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// The complete graph on `n` vertices.
    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Graph::new(n)?;
        let all = mask_below(n);
        for v in 0..n {
            g.adj[v] = all & !bit(v);
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        if a >= self.n || b >= self.n {
            return Err(Error::invalid(format!(
                "edge ({a}, {b}) outside graph with {} vertices",
                self.n
            )));
        }
        if a == b {
            return Err(Error::invalid(format!("self-loop at vertex {a}")));
        }
        self.adj[a] |= bit(b);
        self.adj[b] |= bit(a);
        Ok(())
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) {
        self.adj[a] &= !bit(b);
        self.adj[b] &= !bit(a);
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a] & bit(b) != 0
    }

    /// Neighborhood of `v` as a bitmask.
    pub fn neighbors(&self, v: usize) -> u128 {
        self.adj[v]
    }

    /// Edges as sorted pairs `(a, b)` with `a < b`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for a in 0..self.n {
            let mut higher = self.adj[a] & !mask_below(a + 1);
            while higher != 0 {
                let b = higher.trailing_zeros() as usize;
                edges.push((a, b));
                higher &= higher - 1;
            }
        }
        edges
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|row| row.count_ones() as usize).sum::<usize>() / 2
    }
}

fn bit(v: usize) -> u128 {
    1u128 << v
}

fn mask_below(n: usize) -> u128 {
    if n >= 128 { u128::MAX } else { (1u128 << n) - 1 }
}

/// Branch-and-bound maximum clique search restricted to the vertices in
/// `cand`. A greedy coloring of the remaining candidates bounds the clique
/// size; branches that cannot beat the incumbent are cut. With `stop_at` the
/// search ends as soon as a clique of that size is found.
struct CliqueSearch<'g> {
    g: &'g Graph,
    best: usize,
    stop_at: Option<usize>,
    done: bool,
}

impl<'g> CliqueSearch<'g> {
    fn run(g: &'g Graph, cand: u128, stop_at: Option<usize>) -> usize {
        let mut s = CliqueSearch {
            g,
            best: 0,
            stop_at,
            done: matches!(stop_at, Some(0)),
        };
        if !s.done {
            s.expand(cand, 0);
        }
        s.best
    }

    fn record(&mut self, size: usize) {
        if size > self.best {
            self.best = size;
            if self.stop_at.is_some_and(|t| self.best >= t) {
                self.done = true;
            }
        }
    }

    fn expand(&mut self, cand: u128, size: usize) {
        if cand == 0 {
            self.record(size);
            return;
        }
        // Greedy coloring: vertices listed color class by color class, so
        // colors are nondecreasing along `order`.
        let mut order: Vec<(usize, usize)> = Vec::with_capacity(cand.count_ones() as usize);
        let mut uncolored = cand;
        let mut color = 0;
        while uncolored != 0 {
            color += 1;
            let mut class = uncolored;
            while class != 0 {
                let v = class.trailing_zeros() as usize;
                class &= !(bit(v) | self.g.adj[v]);
                uncolored &= !bit(v);
                order.push((v, color));
            }
        }
        let mut remaining = cand;
        for &(v, color) in order.iter().rev() {
            if self.done || size + color <= self.best {
                return;
            }
            self.expand(remaining & self.g.adj[v], size + 1);
            remaining &= !bit(v);
        }
    }
}

fn has_clique_of_size(g: &Graph, cand: u128, k: usize) -> bool {
    k == 0 || CliqueSearch::run(g, cand, Some(k)) >= k
}

/// A maximum clique, returned as the lexicographically smallest ascending
/// vertex list among all maximum cliques.
pub fn max_clique(g: &Graph) -> Vec<usize> {
    let all = mask_below(g.n);
    let size = CliqueSearch::run(g, all, None);
    let mut clique = Vec::with_capacity(size);
    let mut allowed = all;
    while clique.len() < size {
        let mut scan = allowed;
        while scan != 0 {
            let v = scan.trailing_zeros() as usize;
            scan &= scan - 1;
            let rest = allowed & g.adj[v];
            if has_clique_of_size(g, rest, size - clique.len() - 1) {
                clique.push(v);
                allowed = rest;
                break;
            }
        }
    }
    clique
}

/// Builds the conflict graph for Max Common Candidate-Subelection with both
/// matchings given. Vertices are the candidates of `e1`; two candidates stay
/// adjacent unless some matched voter pair orders them oppositely (after
/// renaming through `sigma`). Cliques are exactly the candidate sets on which
/// all matched votes agree.
pub fn build_conflict_graph(
    e1: &Election,
    e2: &Election,
    sigma: &CandidateMatching,
    pi: &VoterMatching,
) -> Result<Graph> {
    let m = e1.num_candidates();
    if !sigma.is_bijection_between(m, e2.num_candidates()) {
        return Err(Error::invalid(
            "conflict graph needs a total candidate bijection",
        ));
    }
    if !pi.is_bijection_between(e1.num_voters(), e2.num_voters()) {
        return Err(Error::invalid(
            "conflict graph needs a total voter bijection",
        ));
    }
    let map: Vec<usize> = sigma.left_map(m).into_iter().flatten().collect();
    let mut g = Graph::complete(m)?;
    for &(i, j) in pi.pairs() {
        let v = e1.vote(i);
        let u = e2.vote(j);
        for x in 0..m {
            for y in (x + 1)..m {
                if g.has_edge(x, y) && v.prefers(x, y) != u.prefers(map[x], map[y]) {
                    g.remove_edge(x, y);
                }
            }
        }
    }
    Ok(g)
}

fn kept_candidates_witness(
    sigma: &CandidateMatching,
    pi: &VoterMatching,
    kept: &[usize],
) -> IsoWitness {
    if kept.is_empty() {
        return IsoWitness::empty();
    }
    let pairs = kept.iter().map(|&x| {
        let y = sigma.right_of(x).expect("kept candidates are matched");
        (x, y)
    });
    IsoWitness {
        sigma: CandidateMatching::from_pairs(pairs).expect("subset of a matching"),
        pi: pi.clone(),
        value: kept.len(),
    }
}

/// Solves Max Common Candidate-Subelection with both matchings given exactly,
/// via a maximum clique of the conflict graph. The witness value is the
/// number of kept candidates.
pub fn max_common_cand_subelection_both(
    e1: &Election,
    e2: &Election,
    sigma: &CandidateMatching,
    pi: &VoterMatching,
) -> Result<IsoWitness> {
    let g = build_conflict_graph(e1, e2, sigma, pi)?;
    Ok(kept_candidates_witness(sigma, pi, &max_clique(&g)))
}

/// Approximation for the same problem: tries every candidate subset of size
/// `c`, then `c - 1`, and so on, returning the first conflict-free one. The
/// result keeps `min(c, OPT)` candidates, so for instances with an optimum of
/// at least `c` this is an (OPT/c)-factor approximation computed in time
/// O(m^c) rather than exponential in m.
pub fn approx_common_cand_both(
    e1: &Election,
    e2: &Election,
    sigma: &CandidateMatching,
    pi: &VoterMatching,
    c: usize,
) -> Result<IsoWitness> {
    if c == 0 {
        return Err(Error::invalid("subset size must be at least 1"));
    }
    let g = build_conflict_graph(e1, e2, sigma, pi)?;
    let m = g.num_vertices();
    for t in (1..=c.min(m)).rev() {
        for subset in (0..m).combinations(t) {
            let is_clique = subset
                .iter()
                .array_combinations()
                .all(|[&a, &b]| g.has_edge(a, b));
            if is_clique {
                return Ok(kept_candidates_witness(sigma, pi, &subset));
            }
        }
    }
    Ok(IsoWitness::empty())
}

/// Decides Subelection Isomorphism by enumerating injective candidate
/// assignments in lexicographic order and solving the polynomial rest for
/// each, O*(m2^m1). Only the no-matching and voter-matching cases are
/// handled here; with a candidate matching given the problem is polynomial,
/// see [`subelection_isomorphism_given_cand_matching`].
pub fn subelection_isomorphism(
    e1: &Election,
    e2: &Election,
    case: &MatchingCase,
) -> Result<Option<IsoWitness>> {
    search_candidate_assignments(e1, e2, case, Variant::Subelection)
}

/// Decides Candidate-Subelection Isomorphism (equal voter counts, every voter
/// matched) by the same enumeration.
pub fn cand_subelection_isomorphism(
    e1: &Election,
    e2: &Election,
    case: &MatchingCase,
) -> Result<Option<IsoWitness>> {
    search_candidate_assignments(e1, e2, case, Variant::CandSubelection)
}

fn search_candidate_assignments(
    e1: &Election,
    e2: &Election,
    case: &MatchingCase,
    variant: Variant,
) -> Result<Option<IsoWitness>> {
    case.validate_for(e1, e2)?;
    let given_pi = match case {
        MatchingCase::NoMatching => None,
        MatchingCase::VoterMatchingGiven(p) => Some(p),
        _ => {
            return Err(Error::invalid(
                "with a candidate matching given, use the polynomial solver",
            ));
        }
    };
    let (m1, m2) = (e1.num_candidates(), e2.num_candidates());
    let (n1, n2) = (e1.num_voters(), e2.num_voters());
    if m1 > m2 || n1 > n2 || (variant == Variant::CandSubelection && n1 != n2) {
        return Ok(None);
    }

    let mut assigned = vec![usize::MAX; m1];
    let mut used = vec![false; m2];
    search_rec(e1, e2, given_pi, variant, &mut assigned, &mut used, 0)
}

fn search_rec(
    e1: &Election,
    e2: &Election,
    given_pi: Option<&VoterMatching>,
    variant: Variant,
    assigned: &mut Vec<usize>,
    used: &mut Vec<bool>,
    depth: usize,
) -> Result<Option<IsoWitness>> {
    let m1 = e1.num_candidates();
    if depth == m1 {
        let sigma =
            CandidateMatching::from_pairs(assigned.iter().enumerate().map(|(c, &d)| (c, d)))
                .expect("assignment is injective");
        return subelection_isomorphism_given_cand_matching(e1, e2, &sigma, given_pi, variant);
    }
    for d in 0..e2.num_candidates() {
        if used[d] {
            continue;
        }
        assigned[depth] = d;
        if prefix_consistent(e1, e2, given_pi, assigned, depth) {
            used[d] = true;
            let found = search_rec(e1, e2, given_pi, variant, assigned, used, depth + 1)?;
            used[d] = false;
            if found.is_some() {
                assigned[depth] = usize::MAX;
                return Ok(found);
            }
        }
    }
    assigned[depth] = usize::MAX;
    Ok(None)
}

/// Prefix pruning for the voter-matching case: every matched voter pair must
/// order the already-assigned candidates consistently. Without a given voter
/// matching there is nothing to check.
fn prefix_consistent(
    e1: &Election,
    e2: &Election,
    given_pi: Option<&VoterMatching>,
    assigned: &[usize],
    depth: usize,
) -> bool {
    let Some(pi) = given_pi else { return true };
    pi.pairs().iter().all(|&(i, j)| {
        let v = e1.vote(i);
        let u = e2.vote(j);
        (0..depth).all(|x| v.prefers(x, depth) == u.prefers(assigned[x], assigned[depth]))
    })
}

/// Size caps for the brute-force reference solver, which enumerates all
/// partial candidate bijections and voter pairings.
#[derive(Clone, Copy, Debug)]
pub struct BruteForceLimits {
    pub max_candidates: usize,
    pub max_voters: usize,
}

impl Default for BruteForceLimits {
    fn default() -> Self {
        BruteForceLimits {
            max_candidates: 4,
            max_voters: 5,
        }
    }
}

impl BruteForceLimits {
    /// Larger instances are tractable when both matchings are given, since
    /// only subsets of the given candidate matching need to be enumerated.
    pub fn for_case(case: &MatchingCase) -> Self {
        match case {
            MatchingCase::BothMatchingsGiven(..) => BruteForceLimits {
                max_candidates: 12,
                max_voters: 16,
            },
            _ => BruteForceLimits::default(),
        }
    }
}

/// Reference solver for the three maximization variants ([`Variant::MaxCommon`],
/// [`Variant::MaxCommonCand`], [`Variant::MaxCommonVoter`]) in any matching
/// case. Returns only the optimal value. Enumerates every partial injective
/// candidate assignment compatible with the case, and for each one the best
/// compatible voter pairing, with no shortcuts shared with the fast solvers.
pub fn brute_force_max_common(
    e1: &Election,
    e2: &Election,
    variant: Variant,
    case: &MatchingCase,
    limits: BruteForceLimits,
) -> Result<usize> {
    if !matches!(
        variant,
        Variant::MaxCommon | Variant::MaxCommonCand | Variant::MaxCommonVoter
    ) {
        return Err(Error::invalid(
            "brute force solves the maximization variants only",
        ));
    }
    case.validate_for(e1, e2)?;
    let (m1, m2) = (e1.num_candidates(), e2.num_candidates());
    let (n1, n2) = (e1.num_voters(), e2.num_voters());
    if m1.max(m2) > limits.max_candidates || n1.max(n2) > limits.max_voters {
        return Err(Error::size_limit(format!(
            "brute force limited to {} candidates and {} voters, got {m1}x{n1} and {m2}x{n2}",
            limits.max_candidates, limits.max_voters
        )));
    }

    let best = match variant {
        Variant::MaxCommonVoter => {
            let mut best = 0;
            for assignment in total_candidate_bijections(m1, m2, case.candidate_matching()) {
                let eq = eq_matrix(e1, e2, &assignment);
                best = best.max(best_voter_count(&eq, n1, n2, case.voter_matching(), false));
            }
            best
        }
        Variant::MaxCommonCand => {
            if n1 != n2 {
                0
            } else {
                let mut best = 0;
                for assignment in partial_candidate_assignments(m1, m2, case.candidate_matching())
                {
                    if assignment.len() <= best {
                        continue;
                    }
                    let eq = eq_matrix(e1, e2, &assignment);
                    if best_voter_count(&eq, n1, n2, case.voter_matching(), true) == n1 {
                        best = assignment.len();
                    }
                }
                best
            }
        }
        _ => {
            let mut best = 0;
            for assignment in partial_candidate_assignments(m1, m2, case.candidate_matching()) {
                if assignment.len() * n1.min(n2) <= best {
                    continue;
                }
                let eq = eq_matrix(e1, e2, &assignment);
                let voters = best_voter_count(&eq, n1, n2, case.voter_matching(), false);
                best = best.max(assignment.len() * voters);
            }
            best
        }
    };
    Ok(best)
}

/// All total candidate bijections compatible with an optional given matching.
fn total_candidate_bijections(
    m1: usize,
    m2: usize,
    given: Option<&CandidateMatching>,
) -> Vec<Vec<(usize, usize)>> {
    if m1 != m2 {
        return Vec::new();
    }
    match given {
        Some(s) => {
            if s.is_bijection_between(m1, m2) {
                vec![s.pairs().to_vec()]
            } else {
                Vec::new()
            }
        }
        None => (0..m2)
            .permutations(m1)
            .map(|image| image.into_iter().enumerate().collect())
            .collect(),
    }
}

/// All partial injective candidate assignments, including the empty one.
/// With a given matching only subsets of its pairs qualify.
fn partial_candidate_assignments(
    m1: usize,
    m2: usize,
    given: Option<&CandidateMatching>,
) -> Vec<Vec<(usize, usize)>> {
    match given {
        Some(s) => s.pairs().iter().copied().powerset().collect(),
        None => {
            let mut all = Vec::new();
            for k in 0..=m1.min(m2) {
                for lefts in (0..m1).combinations(k) {
                    for rights in (0..m2).permutations(k) {
                        all.push(lefts.iter().copied().zip(rights).collect());
                    }
                }
            }
            all
        }
    }
}

/// eq[i][j]: votes i of e1 and j of e2 agree once restricted to the
/// assignment and renamed through it.
fn eq_matrix(e1: &Election, e2: &Election, assignment: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut left_map = vec![None; e1.num_candidates()];
    let mut right_keep = vec![false; e2.num_candidates()];
    for &(l, r) in assignment {
        left_map[l] = Some(r);
        right_keep[r] = true;
    }
    let reduced1: Vec<Vec<usize>> = e1
        .votes()
        .iter()
        .map(|v| v.ranking().iter().filter_map(|&c| left_map[c]).collect())
        .collect();
    let reduced2: Vec<Vec<usize>> = e2
        .votes()
        .iter()
        .map(|u| u.ranking().iter().copied().filter(|&d| right_keep[d]).collect())
        .collect();
    reduced1
        .iter()
        .map(|a| reduced2.iter().map(|b| a == b).collect())
        .collect()
}

/// Best number of voter pairs compatible with `eq` and an optional given
/// voter matching. With `need_all` the count only matters when every voter of
/// e1 can be matched (used for the candidate-only variant); the return value
/// is then either n1 or 0.
fn best_voter_count(
    eq: &[Vec<bool>],
    n1: usize,
    n2: usize,
    given: Option<&VoterMatching>,
    need_all: bool,
) -> usize {
    let count = match given {
        Some(p) => p.pairs().iter().filter(|&&(i, j)| eq[i][j]).count(),
        None => {
            fn rec(eq: &[Vec<bool>], n2: usize, i: usize, used: u64) -> usize {
                if i == eq.len() {
                    return 0;
                }
                let mut best = rec(eq, n2, i + 1, used);
                for j in 0..n2 {
                    if eq[i][j] && used & (1 << j) == 0 {
                        best = best.max(1 + rec(eq, n2, i + 1, used | (1 << j)));
                    }
                }
                best
            }
            rec(eq, n2, 0, 0)
        }
    };
    if need_all && count < n1 { 0 } else { count }
}
