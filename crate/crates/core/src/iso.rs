//! Polynomial solvers for the variants where candidates cannot be deleted
//! freely: isomorphism, voter subelection, and maximum common voter
//! subelection, in all four matching cases.
//!
//! The key observation: once a single voter pair is matched, the candidate
//! bijection is forced, because the candidate at rank i of one vote must map
//! to the candidate at rank i of the other. Trying every voter pair yields at
//! most n1*n2 candidate bijections. Each bijection induces a bipartite
//! agreement graph between the voter sets, and a maximum-cardinality matching
//! in it is the best voter pairing for that bijection.

use std::collections::{HashMap, HashSet};

use crate::matching::{BipartiteGraph, lex_min_maximum_matching, max_bipartite_matching};
use crate::{
    CandidateMatching, Election, Error, IsoWitness, MatchingCase, Result, Variant, Vote,
    VoterMatching,
};

/// The unique candidate bijection under which `v` renamed equals `u`: the
/// candidate at each rank of `v` maps to the candidate at the same rank of
/// `u`. Requires equal candidate counts.
pub fn derive_candidate_bijection(v: &Vote, u: &Vote) -> Result<CandidateMatching> {
    if v.num_candidates() != u.num_candidates() {
        return Err(Error::invalid(format!(
            "cannot align votes over {} and {} candidates",
            v.num_candidates(),
            u.num_candidates()
        )));
    }
    let map = derive_map(v, u);
    Ok(CandidateMatching::from_pairs(map.iter().enumerate().map(|(c, &d)| (c, d)))
        .expect("rank-aligned candidate map is a bijection"))
}

fn derive_map(v: &Vote, u: &Vote) -> Vec<usize> {
    let m = v.num_candidates();
    let mut map = vec![0usize; m];
    for p in 0..m {
        map[v.candidate_at(p)] = u.candidate_at(p);
    }
    map
}

fn votes_equal_renamed(v: &Vote, u: &Vote, map: &[usize]) -> bool {
    v.ranking().iter().map(|&c| map[c]).eq(u.ranking().iter().copied())
}

/// Builds the witness for a voter-measure solution; empty pair lists collapse
/// to the canonical zero witness.
fn voter_witness(map: &[usize], pairs: Vec<(usize, usize)>) -> IsoWitness {
    if pairs.is_empty() {
        return IsoWitness::empty();
    }
    let value = pairs.len();
    IsoWitness {
        sigma: CandidateMatching::from_pairs(map.iter().enumerate().map(|(c, &d)| (c, d)))
            .expect("candidate map is a bijection"),
        pi: VoterMatching::from_pairs(pairs).expect("voter pairing is a matching"),
        value,
    }
}

fn vote_groups(e: &Election) -> HashMap<&[usize], Vec<usize>> {
    let mut groups: HashMap<&[usize], Vec<usize>> = HashMap::new();
    for (j, u) in e.votes().iter().enumerate() {
        groups.entry(u.ranking()).or_default().push(j);
    }
    groups
}

/// Agreement graph: voter i of `e1` is adjacent to voter j of `e2` when vote
/// i renamed through `map` equals vote j.
fn agreement_graph(
    e1: &Election,
    n2: usize,
    groups: &HashMap<&[usize], Vec<usize>>,
    map: &[usize],
) -> BipartiteGraph {
    let mut g = BipartiteGraph::new(e1.num_voters(), n2);
    let mut renamed = vec![0usize; e1.num_candidates()];
    for (i, v) in e1.votes().iter().enumerate() {
        for (p, &c) in v.ranking().iter().enumerate() {
            renamed[p] = map[c];
        }
        if let Some(js) = groups.get(renamed.as_slice()) {
            for &j in js {
                g.add_edge(i, j).expect("agreement edge indices are in range");
            }
        }
    }
    g
}

/// Solves Max Common Voter-Subelection.
///
/// The value is the number of matched voters; the witness candidate matching
/// is a total bijection. Elections with different candidate counts, or a
/// given candidate matching that is not a total bijection, have no common
/// voter subelection and yield the zero witness.
///
/// With `threshold` set, the search stops at the first voter matching of at
/// least that size. Without it the exact optimum is returned, tie-broken to
/// the lexicographically smallest voter pair list (then the smallest
/// candidate bijection), so results are deterministic.
pub fn max_common_voter_subelection(
    e1: &Election,
    e2: &Election,
    case: &MatchingCase,
    threshold: Option<usize>,
) -> Result<IsoWitness> {
    case.validate_for(e1, e2)?;
    let m = e1.num_candidates();
    if e2.num_candidates() != m {
        return Ok(IsoWitness::empty());
    }
    match case {
        MatchingCase::NoMatching => Ok(solve_free(e1, e2, threshold)),
        MatchingCase::VoterMatchingGiven(p) => Ok(solve_restricted(e1, e2, p.pairs(), threshold)),
        MatchingCase::CandidateMatchingGiven(s) => {
            if !s.is_bijection_between(m, m) {
                return Ok(IsoWitness::empty());
            }
            let map: Vec<usize> = s.left_map(m).into_iter().flatten().collect();
            let g = agreement_graph(e1, e2.num_voters(), &vote_groups(e2), &map);
            Ok(voter_witness(&map, lex_min_maximum_matching(&g).pairs))
        }
        MatchingCase::BothMatchingsGiven(s, p) => {
            if !s.is_bijection_between(m, m) {
                return Ok(IsoWitness::empty());
            }
            let map: Vec<usize> = s.left_map(m).into_iter().flatten().collect();
            let pairs: Vec<(usize, usize)> = p
                .pairs()
                .iter()
                .copied()
                .filter(|&(i, j)| votes_equal_renamed(e1.vote(i), e2.vote(j), &map))
                .collect();
            Ok(voter_witness(&map, pairs))
        }
    }
}

fn solve_free(e1: &Election, e2: &Election, threshold: Option<usize>) -> IsoWitness {
    let n2 = e2.num_voters();
    let groups = vote_groups(e2);
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut best_value = 0usize;
    let mut best_maps: Vec<Vec<usize>> = Vec::new();
    for v in e1.votes() {
        for u in e2.votes() {
            let map = derive_map(v, u);
            if !seen.insert(map.clone()) {
                continue;
            }
            let g = agreement_graph(e1, n2, &groups, &map);
            let size = max_bipartite_matching(&g).len();
            if threshold.is_some_and(|t| size >= t) {
                return voter_witness(&map, lex_min_maximum_matching(&g).pairs);
            }
            if size > best_value {
                best_value = size;
                best_maps.clear();
            }
            if size == best_value {
                best_maps.push(map);
            }
        }
    }
    let mut chosen: Option<(Vec<(usize, usize)>, Vec<usize>)> = None;
    for map in best_maps {
        let g = agreement_graph(e1, n2, &groups, &map);
        let pairs = lex_min_maximum_matching(&g).pairs;
        let entry = (pairs, map);
        if chosen.as_ref().is_none_or(|c| entry < *c) {
            chosen = Some(entry);
        }
    }
    let (pairs, map) = chosen.expect("elections are nonempty, so some bijection was tried");
    voter_witness(&map, pairs)
}

/// Given-voter-matching case: only pairs from the given matching may be used,
/// so for each candidate bijection the agreeing pairs are forced and no
/// matching computation is needed.
fn solve_restricted(
    e1: &Election,
    e2: &Election,
    allowed: &[(usize, usize)],
    threshold: Option<usize>,
) -> IsoWitness {
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut best: Option<(usize, Vec<(usize, usize)>, Vec<usize>)> = None;
    for &(i, j) in allowed {
        let map = derive_map(e1.vote(i), e2.vote(j));
        if !seen.insert(map.clone()) {
            continue;
        }
        let pairs: Vec<(usize, usize)> = allowed
            .iter()
            .copied()
            .filter(|&(a, b)| votes_equal_renamed(e1.vote(a), e2.vote(b), &map))
            .collect();
        let value = pairs.len();
        if threshold.is_some_and(|t| value >= t) {
            return voter_witness(&map, pairs);
        }
        let better = match &best {
            None => true,
            Some((bv, bp, bm)) => {
                value > *bv || (value == *bv && (pairs < *bp || (pairs == *bp && map < *bm)))
            }
        };
        if better {
            best = Some((value, pairs, map));
        }
    }
    match best {
        Some((_, pairs, map)) => voter_witness(&map, pairs),
        None => IsoWitness::empty(),
    }
}

/// Decides Election Isomorphism. Given matchings must be total bijections to
/// leave nothing deleted; otherwise the answer is no. The witness value is
/// the common election size.
pub fn election_isomorphism(
    e1: &Election,
    e2: &Election,
    case: &MatchingCase,
) -> Result<Option<IsoWitness>> {
    case.validate_for(e1, e2)?;
    let (m, n) = (e1.num_candidates(), e1.num_voters());
    if e2.num_candidates() != m || e2.num_voters() != n {
        return Ok(None);
    }
    if let Some(s) = case.candidate_matching() {
        if !s.is_bijection_between(m, m) {
            return Ok(None);
        }
    }
    if let Some(p) = case.voter_matching() {
        if !p.is_bijection_between(n, n) {
            return Ok(None);
        }
    }
    let w = max_common_voter_subelection(e1, e2, case, Some(n))?;
    if w.value < n {
        return Ok(None);
    }
    Ok(Some(IsoWitness { value: m * n, ..w }))
}

/// Decides Voter-Subelection Isomorphism: can voters of `e2` be deleted so
/// the rest is isomorphic to `e1`? The witness value is the number of
/// matched voters, which equals the voter count of `e1`.
pub fn voter_subelection_isomorphism(
    e1: &Election,
    e2: &Election,
    case: &MatchingCase,
) -> Result<Option<IsoWitness>> {
    case.validate_for(e1, e2)?;
    let n1 = e1.num_voters();
    if e1.num_candidates() != e2.num_candidates() || n1 > e2.num_voters() {
        return Ok(None);
    }
    let w = max_common_voter_subelection(e1, e2, case, Some(n1))?;
    Ok((w.value >= n1).then_some(w))
}

/// Decides Subelection Isomorphism once a total candidate matching is fixed:
/// restrict `e2` to the image of `sigma`, rename through its inverse, and
/// solve the remaining voter-subelection problem. `variant` selects between
/// `Subelection` (voters of `e2` may be deleted) and `CandSubelection`
/// (voter counts must agree and all voters must be matched).
pub fn subelection_isomorphism_given_cand_matching(
    e1: &Election,
    e2: &Election,
    sigma: &CandidateMatching,
    given_pi: Option<&VoterMatching>,
    variant: Variant,
) -> Result<Option<IsoWitness>> {
    if !matches!(variant, Variant::Subelection | Variant::CandSubelection) {
        return Err(Error::invalid(
            "variant must be Subelection or CandSubelection",
        ));
    }
    let (m1, n1) = (e1.num_candidates(), e1.num_voters());
    let (m2, n2) = (e2.num_candidates(), e2.num_voters());
    if !sigma.in_range(m1, m2) {
        return Err(Error::invalid(
            "candidate matching references candidates outside the elections",
        ));
    }
    if !sigma.covers_all_left(m1) {
        return Err(Error::invalid(
            "candidate matching must cover every candidate of the first election",
        ));
    }
    if let Some(p) = given_pi {
        if !p.in_range(n1, n2) {
            return Err(Error::invalid(
                "voter matching references voters outside the elections",
            ));
        }
    }
    if n1 > n2 || (variant == Variant::CandSubelection && n1 != n2) {
        return Ok(None);
    }

    let image: Vec<usize> = sigma.pairs().iter().map(|&(_, d)| d).collect();
    let (restricted, new_to_old) = e2.restrict_to_candidates(&image)?;
    let back: Vec<usize> = new_to_old
        .iter()
        .map(|&d| sigma.left_of(d).expect("restricted to the image of sigma"))
        .collect();
    let renamed = restricted.apply_candidate_renaming(&back)?;

    let inner_case = match given_pi {
        Some(p) => {
            MatchingCase::BothMatchingsGiven(CandidateMatching::identity(m1), p.clone())
        }
        None => MatchingCase::CandidateMatchingGiven(CandidateMatching::identity(m1)),
    };
    let w = max_common_voter_subelection(e1, &renamed, &inner_case, Some(n1))?;
    if w.value < n1 {
        return Ok(None);
    }
    let value = match variant {
        Variant::Subelection => m1 * n1,
        _ => m1,
    };
    Ok(Some(IsoWitness {
        sigma: sigma.clone(),
        pi: w.pi,
        value,
    }))
}
