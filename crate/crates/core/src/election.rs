//! Elections, votes, matchings, and witness verification.

use std::collections::HashMap;
use std::fmt;

use crate::{Error, Result};

/// A strict total ranking of candidates `0..m`, best first.
///
/// Both directions of the ranking are stored so that position lookups and
/// pairwise comparisons are O(1).
#[derive(Clone)]
pub struct Vote {
    ranking: Vec<usize>,
    position: Vec<usize>,
}

impl Vote {
    /// Builds a vote from a ranking (position to candidate, best first).
    /// The ranking must be a permutation of `0..m` for some `m >= 1`.
    pub fn new(ranking: Vec<usize>) -> Result<Self> {
        let m = ranking.len();
        if m == 0 {
            return Err(Error::invalid("a vote must rank at least one candidate"));
        }
        let mut position = vec![usize::MAX; m];
        for (pos, &c) in ranking.iter().enumerate() {
            if c >= m {
                return Err(Error::invalid(format!(
                    "candidate {c} out of range 0..{m}"
                )));
            }
            if position[c] != usize::MAX {
                return Err(Error::invalid(format!("candidate {c} ranked twice")));
            }
            position[c] = pos;
        }
        Ok(Vote { ranking, position })
    }

    pub fn num_candidates(&self) -> usize {
        self.ranking.len()
    }

    /// Ranking as a slice, best candidate first.
    pub fn ranking(&self) -> &[usize] {
        &self.ranking
    }

    /// Candidate ranked at `pos` (0 is best).
    pub fn candidate_at(&self, pos: usize) -> usize {
        self.ranking[pos]
    }

    /// Position of candidate `c` (0 is best).
    pub fn position_of(&self, c: usize) -> usize {
        self.position[c]
    }

    /// Whether this vote ranks `a` above `b`.
    pub fn prefers(&self, a: usize, b: usize) -> bool {
        self.position[a] < self.position[b]
    }

    /// Ranking filtered to the candidates marked in `keep`, original labels.
    pub(crate) fn restricted_ranking(&self, keep: &[bool]) -> Vec<usize> {
        self.ranking.iter().copied().filter(|&c| keep[c]).collect()
    }

    /// Vote with every candidate `c` renamed to `map[c]`. The map must be a
    /// permutation of `0..m`; callers validate this.
    pub(crate) fn renamed(&self, map: &[usize]) -> Vote {
        let ranking: Vec<usize> = self.ranking.iter().map(|&c| map[c]).collect();
        Vote::new(ranking).expect("renaming by a bijection preserves the permutation invariant")
    }
}

impl PartialEq for Vote {
    fn eq(&self, other: &Self) -> bool {
        self.ranking == other.ranking
    }
}

impl Eq for Vote {}

impl std::hash::Hash for Vote {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ranking.hash(state);
    }
}

impl fmt::Debug for Vote {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vote({:?})", self.ranking)
    }
}

/// An ordinal election: `m` candidates named `0..m` and an ordered list of
/// votes, each a strict ranking of all candidates.
///
/// The list order of votes is preserved by all operations; voters are
/// identified by their index in the list.
#[derive(Clone, PartialEq, Eq)]
pub struct Election {
    m: usize,
    votes: Vec<Vote>,
}

impl Election {
    /// Builds an election from raw rankings. Requires `m >= 1`, at least one
    /// vote, and every ranking a permutation of `0..m`.
    pub fn new(m: usize, rankings: Vec<Vec<usize>>) -> Result<Self> {
        let votes = rankings
            .into_iter()
            .map(Vote::new)
            .collect::<Result<Vec<_>>>()?;
        Self::from_votes(m, votes)
    }

    pub fn from_votes(m: usize, votes: Vec<Vote>) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("election must have at least one candidate"));
        }
        if votes.is_empty() {
            return Err(Error::invalid("election must have at least one vote"));
        }
        for (i, v) in votes.iter().enumerate() {
            if v.num_candidates() != m {
                return Err(Error::invalid(format!(
                    "vote {i} ranks {} candidates, expected {m}",
                    v.num_candidates()
                )));
            }
        }
        Ok(Election { m, votes })
    }

    pub fn num_candidates(&self) -> usize {
        self.m
    }

    pub fn num_voters(&self) -> usize {
        self.votes.len()
    }

    /// Election size, the number of candidates times the number of voters.
    pub fn size(&self) -> usize {
        self.m * self.votes.len()
    }

    pub fn votes(&self) -> &[Vote] {
        &self.votes
    }

    pub fn vote(&self, i: usize) -> &Vote {
        &self.votes[i]
    }

    /// Deletes all candidates outside `kept` and re-indexes the survivors by
    /// ascending original index. Returns the restricted election together
    /// with the mapping from new index to original index.
    pub fn restrict_to_candidates(&self, kept: &[usize]) -> Result<(Election, Vec<usize>)> {
        let keep = index_set_mask(kept, self.m, "candidate")?;
        let new_to_old: Vec<usize> = (0..self.m).filter(|&c| keep[c]).collect();
        if new_to_old.is_empty() {
            return Err(Error::invalid("cannot delete every candidate"));
        }
        let mut old_to_new = vec![usize::MAX; self.m];
        for (new, &old) in new_to_old.iter().enumerate() {
            old_to_new[old] = new;
        }
        let votes = self
            .votes
            .iter()
            .map(|v| {
                let ranking = v
                    .restricted_ranking(&keep)
                    .into_iter()
                    .map(|c| old_to_new[c])
                    .collect();
                Vote::new(ranking).expect("restriction of a permutation is a permutation")
            })
            .collect();
        let e = Election {
            m: new_to_old.len(),
            votes,
        };
        Ok((e, new_to_old))
    }

    /// Deletes all voters outside `kept`; surviving votes keep their original
    /// relative order.
    pub fn restrict_to_voters(&self, kept: &[usize]) -> Result<Election> {
        let keep = index_set_mask(kept, self.votes.len(), "voter")?;
        let votes: Vec<Vote> = self
            .votes
            .iter()
            .enumerate()
            .filter(|(i, _)| keep[*i])
            .map(|(_, v)| v.clone())
            .collect();
        if votes.is_empty() {
            return Err(Error::invalid("cannot delete every voter"));
        }
        Ok(Election { m: self.m, votes })
    }

    /// Renames every candidate `c` to `sigma[c]`. `sigma` must be a
    /// permutation of `0..m`.
    pub fn apply_candidate_renaming(&self, sigma: &[usize]) -> Result<Election> {
        validate_permutation(sigma, self.m, "candidate renaming")?;
        let votes = self.votes.iter().map(|v| v.renamed(sigma)).collect();
        Ok(Election { m: self.m, votes })
    }

    /// Reorders the vote list so that new position `i` holds the vote of
    /// original voter `pi[i]`. `pi` must be a permutation of `0..n`.
    pub fn permute_voters(&self, pi: &[usize]) -> Result<Election> {
        validate_permutation(pi, self.votes.len(), "voter permutation")?;
        let votes = pi.iter().map(|&i| self.votes[i].clone()).collect();
        Ok(Election { m: self.m, votes })
    }

    /// Number of occurrences of the most frequent vote.
    pub fn most_frequent_vote_count(&self) -> usize {
        let mut counts: HashMap<&[usize], usize> = HashMap::new();
        for v in &self.votes {
            *counts.entry(v.ranking()).or_insert(0) += 1;
        }
        counts.into_values().max().unwrap_or(0)
    }
}

impl fmt::Debug for Election {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Election(m={}, n={})", self.m, self.votes.len())?;
        for v in &self.votes {
            writeln!(f, "  {:?}", v.ranking)?;
        }
        Ok(())
    }
}

/// Turns an index set given as a slice into a membership mask. Rejects
/// out-of-range and duplicate entries.
fn index_set_mask(set: &[usize], bound: usize, what: &str) -> Result<Vec<bool>> {
    let mut mask = vec![false; bound];
    for &i in set {
        if i >= bound {
            return Err(Error::invalid(format!(
                "{what} index {i} out of range 0..{bound}"
            )));
        }
        if mask[i] {
            return Err(Error::invalid(format!("duplicate {what} index {i}")));
        }
        mask[i] = true;
    }
    Ok(mask)
}

fn validate_permutation(p: &[usize], len: usize, what: &str) -> Result<()> {
    if p.len() != len {
        return Err(Error::invalid(format!(
            "{what} has length {}, expected {len}",
            p.len()
        )));
    }
    let mut seen = vec![false; len];
    for &x in p {
        if x >= len {
            return Err(Error::invalid(format!(
                "{what} entry {x} out of range 0..{len}"
            )));
        }
        if seen[x] {
            return Err(Error::invalid(format!("{what} repeats entry {x}")));
        }
        seen[x] = true;
    }
    Ok(())
}

/// Number of candidate pairs the two votes order oppositely (Kendall tau,
/// also called the swap distance).
pub fn swap_distance(v: &Vote, u: &Vote) -> Result<usize> {
    let m = v.num_candidates();
    if u.num_candidates() != m {
        return Err(Error::invalid(format!(
            "swap distance needs equal candidate counts, got {m} and {}",
            u.num_candidates()
        )));
    }
    let mut swaps = 0;
    for a in 0..m {
        for b in (a + 1)..m {
            if v.prefers(a, b) != u.prefers(a, b) {
                swaps += 1;
            }
        }
    }
    Ok(swaps)
}

/// Whether the vote is single-peaked with respect to the societal axis:
/// every top-k prefix of the vote forms a contiguous interval of the axis.
pub fn is_single_peaked_vote(v: &Vote, axis: &[usize]) -> Result<bool> {
    let m = v.num_candidates();
    validate_permutation(axis, m, "axis")?;
    let mut axis_pos = vec![0usize; m];
    for (pos, &c) in axis.iter().enumerate() {
        axis_pos[c] = pos;
    }
    let first = axis_pos[v.candidate_at(0)];
    let (mut lo, mut hi) = (first, first);
    for k in 1..m {
        let p = axis_pos[v.candidate_at(k)];
        lo = lo.min(p);
        hi = hi.max(p);
        if hi - lo != k {
            return Ok(false);
        }
    }
    Ok(true)
}

fn validate_injective_pairs(pairs: &[(usize, usize)], what: &str) -> Result<()> {
    // Sorted by left entry; duplicates on either side are rejected.
    for w in pairs.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::invalid(format!(
                "{what} maps index {} twice",
                w[0].0
            )));
        }
    }
    let mut rights: Vec<usize> = pairs.iter().map(|&(_, r)| r).collect();
    rights.sort_unstable();
    for w in rights.windows(2) {
        if w[0] == w[1] {
            return Err(Error::invalid(format!(
                "{what} uses target index {} twice",
                w[0]
            )));
        }
    }
    Ok(())
}

macro_rules! matching_type {
    ($name:ident, $what:literal, $doc:literal) => {
        #[doc = $doc]
        ///
        /// Stored as pairs `(left, right)` sorted by left index; both
        /// projections are injective. A matching may be partial.
        #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
        pub struct $name {
            pairs: Vec<(usize, usize)>,
        }

        impl $name {
            pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
                let mut pairs: Vec<(usize, usize)> = pairs.into_iter().collect();
                pairs.sort_unstable();
                validate_injective_pairs(&pairs, $what)?;
                Ok(Self { pairs })
            }

            pub fn empty() -> Self {
                Self { pairs: Vec::new() }
            }

            /// The identity matching on `0..k`.
            pub fn identity(k: usize) -> Self {
                Self {
                    pairs: (0..k).map(|i| (i, i)).collect(),
                }
            }

            pub fn pairs(&self) -> &[(usize, usize)] {
                &self.pairs
            }

            pub fn len(&self) -> usize {
                self.pairs.len()
            }

            pub fn is_empty(&self) -> bool {
                self.pairs.is_empty()
            }

            pub fn right_of(&self, left: usize) -> Option<usize> {
                self.pairs
                    .binary_search_by_key(&left, |&(l, _)| l)
                    .ok()
                    .map(|i| self.pairs[i].1)
            }

            pub fn left_of(&self, right: usize) -> Option<usize> {
                self.pairs
                    .iter()
                    .find(|&&(_, r)| r == right)
                    .map(|&(l, _)| l)
            }

            /// Whether all indices fit elections with `left_bound` left and
            /// `right_bound` right elements.
            pub fn in_range(&self, left_bound: usize, right_bound: usize) -> bool {
                self.pairs
                    .iter()
                    .all(|&(l, r)| l < left_bound && r < right_bound)
            }

            /// Whether every left index in `0..left_bound` is matched.
            pub fn covers_all_left(&self, left_bound: usize) -> bool {
                self.pairs.len() == left_bound
                    && self.pairs.iter().enumerate().all(|(i, &(l, _))| l == i)
            }

            /// Whether this is a total bijection between `0..left_bound` and
            /// `0..right_bound`.
            pub fn is_bijection_between(&self, left_bound: usize, right_bound: usize) -> bool {
                left_bound == right_bound
                    && self.covers_all_left(left_bound)
                    && self.in_range(left_bound, right_bound)
            }

            pub fn is_subset_of(&self, other: &Self) -> bool {
                self.pairs
                    .iter()
                    .all(|&(l, r)| other.right_of(l) == Some(r))
            }

            /// Left-to-right lookup table of size `left_bound`.
            pub fn left_map(&self, left_bound: usize) -> Vec<Option<usize>> {
                let mut map = vec![None; left_bound];
                for &(l, r) in &self.pairs {
                    map[l] = Some(r);
                }
                map
            }
        }
    };
}

matching_type!(
    CandidateMatching,
    "candidate matching",
    "A partial injective mapping from candidates of one election to candidates of another."
);
matching_type!(
    VoterMatching,
    "voter matching",
    "A partial injective mapping from voters of one election to voters of another."
);

/// A solution to any problem variant: the candidate matching, the voter
/// matching, and the objective value under that variant's measure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoWitness {
    pub sigma: CandidateMatching,
    pub pi: VoterMatching,
    pub value: usize,
}

impl IsoWitness {
    pub fn empty() -> Self {
        IsoWitness {
            sigma: CandidateMatching::empty(),
            pi: VoterMatching::empty(),
            value: 0,
        }
    }
}

/// Which matchings are part of the problem input. A given matching restricts
/// the solution: witness pairs must come from it, and where the variant
/// requires a total matching the given one must be used in full.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatchingCase {
    NoMatching,
    VoterMatchingGiven(VoterMatching),
    CandidateMatchingGiven(CandidateMatching),
    BothMatchingsGiven(CandidateMatching, VoterMatching),
}

impl MatchingCase {
    pub fn candidate_matching(&self) -> Option<&CandidateMatching> {
        match self {
            MatchingCase::CandidateMatchingGiven(s) | MatchingCase::BothMatchingsGiven(s, _) => {
                Some(s)
            }
            _ => None,
        }
    }

    pub fn voter_matching(&self) -> Option<&VoterMatching> {
        match self {
            MatchingCase::VoterMatchingGiven(p) | MatchingCase::BothMatchingsGiven(_, p) => {
                Some(p)
            }
            _ => None,
        }
    }

    /// Checks that all matched indices exist in the two elections.
    pub fn validate_for(&self, e1: &Election, e2: &Election) -> Result<()> {
        if let Some(s) = self.candidate_matching() {
            if !s.in_range(e1.num_candidates(), e2.num_candidates()) {
                return Err(Error::invalid(
                    "given candidate matching references candidates outside the elections",
                ));
            }
        }
        if let Some(p) = self.voter_matching() {
            if !p.in_range(e1.num_voters(), e2.num_voters()) {
                return Err(Error::invalid(
                    "given voter matching references voters outside the elections",
                ));
            }
        }
        Ok(())
    }
}

/// The problem variants. The first four are decision problems; the rest are
/// maximization problems whose objective is, respectively, the common
/// election size, the number of kept candidates, and the number of kept
/// voters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Exact isomorphism: nothing may be deleted.
    Isomorphism,
    /// E1 isomorphic to E2 with candidates and voters of E2 deleted.
    Subelection,
    /// Only candidates of E2 may be deleted.
    CandSubelection,
    /// Only voters of E2 may be deleted.
    VoterSubelection,
    /// Largest common subelection, deleting candidates and voters from both.
    MaxCommon,
    /// Largest common subelection deleting candidates only.
    MaxCommonCand,
    /// Largest common subelection deleting voters only.
    MaxCommonVoter,
}

/// Checks a witness against the two elections, the problem variant, and the
/// matching case.
///
/// A witness is valid when (1) all indices are in range, (2) its matchings
/// extend only pairs permitted by the given matchings, (3) the matchings
/// cover what the variant forbids deleting, (4) the value equals the
/// variant's measure of the matchings, and (5) every matched voter pair casts
/// the same vote once restricted to the matched candidates and renamed.
pub fn verify_witness(
    e1: &Election,
    e2: &Election,
    witness: &IsoWitness,
    variant: Variant,
    case: &MatchingCase,
) -> bool {
    let (m1, n1) = (e1.num_candidates(), e1.num_voters());
    let (m2, n2) = (e2.num_candidates(), e2.num_voters());
    if !witness.sigma.in_range(m1, m2) || !witness.pi.in_range(n1, n2) {
        return false;
    }
    if let Some(s) = case.candidate_matching() {
        if !witness.sigma.is_subset_of(s) {
            return false;
        }
    }
    if let Some(p) = case.voter_matching() {
        if !witness.pi.is_subset_of(p) {
            return false;
        }
    }

    let maximization = matches!(
        variant,
        Variant::MaxCommon | Variant::MaxCommonCand | Variant::MaxCommonVoter
    );
    if maximization && witness.value == 0 {
        // The empty common subelection is the canonical zero witness.
        return witness.sigma.is_empty() && witness.pi.is_empty();
    }

    let coverage_ok = match variant {
        Variant::Isomorphism => {
            witness.sigma.is_bijection_between(m1, m2) && witness.pi.is_bijection_between(n1, n2)
        }
        Variant::Subelection => witness.sigma.covers_all_left(m1) && witness.pi.covers_all_left(n1),
        Variant::CandSubelection => {
            witness.sigma.covers_all_left(m1) && witness.pi.is_bijection_between(n1, n2)
        }
        Variant::VoterSubelection => {
            witness.sigma.is_bijection_between(m1, m2) && witness.pi.covers_all_left(n1)
        }
        Variant::MaxCommon => true,
        Variant::MaxCommonCand => witness.pi.is_bijection_between(n1, n2),
        Variant::MaxCommonVoter => witness.sigma.is_bijection_between(m1, m2),
    };
    if !coverage_ok {
        return false;
    }

    let value_ok = match variant {
        Variant::VoterSubelection | Variant::MaxCommonVoter => witness.value == witness.pi.len(),
        Variant::CandSubelection | Variant::MaxCommonCand => witness.value == witness.sigma.len(),
        Variant::Isomorphism | Variant::Subelection | Variant::MaxCommon => {
            witness.value == witness.sigma.len() * witness.pi.len()
        }
    };
    if !value_ok {
        return false;
    }

    matched_votes_agree(e1, e2, &witness.sigma, witness.pi.pairs())
}

/// Whether, for every pair `(i, j)`, vote `i` of `e1` restricted to the
/// matched candidates and renamed through `sigma` equals vote `j` of `e2`
/// restricted to the image of `sigma`.
pub(crate) fn matched_votes_agree(
    e1: &Election,
    e2: &Election,
    sigma: &CandidateMatching,
    pairs: &[(usize, usize)],
) -> bool {
    let left_map = sigma.left_map(e1.num_candidates());
    let mut right_keep = vec![false; e2.num_candidates()];
    for &(_, r) in sigma.pairs() {
        right_keep[r] = true;
    }
    pairs.iter().all(|&(i, j)| {
        let renamed = e1
            .vote(i)
            .ranking()
            .iter()
            .filter_map(|&c| left_map[c]);
        let restricted = e2
            .vote(j)
            .ranking()
            .iter()
            .copied()
            .filter(|&d| right_keep[d]);
        renamed.eq(restricted)
    })
}
