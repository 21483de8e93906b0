//! Reductions from clique problems to subelection problems. These witness
//! the hardness of the candidate-deletion variants and double as test
//! instances for the solvers.

use crate::hard::Graph;
use crate::{CandidateMatching, Election, Error, Result, VoterMatching};

/// Encodes a graph as an election: one candidate per vertex plus two special
/// candidates alpha (index n) and beta (index n+1); per edge {x, y} with
/// x < y, four voters covering both orders of the pair and of alpha/beta:
///
/// ```text
/// x > y > alpha > beta > rest      y > x > alpha > beta > rest
/// x > y > beta > alpha > rest      y > x > beta > alpha > rest
/// ```
///
/// where `rest` lists the remaining vertices ascending. Edges are processed
/// in sorted order, so the construction is deterministic. The graph must
/// have at least one edge.
pub fn graph_to_election(h: &Graph) -> Result<Election> {
    let n = h.num_vertices();
    let edges = h.edges();
    if edges.is_empty() {
        return Err(Error::invalid("graph without edges has no voters"));
    }
    let (alpha, beta) = (n, n + 1);
    let mut rankings = Vec::with_capacity(4 * edges.len());
    for (x, y) in edges {
        let rest: Vec<usize> = (0..n).filter(|&v| v != x && v != y).collect();
        for (first, second) in [(x, y), (y, x)] {
            for (a, b) in [(alpha, beta), (beta, alpha)] {
                let mut r = Vec::with_capacity(n + 2);
                r.extend([first, second, a, b]);
                r.extend(&rest);
                rankings.push(r);
            }
        }
    }
    Election::new(n + 2, rankings)
}

/// Reduces Clique to Subelection Isomorphism: `g` has a clique of size `k`
/// iff the first returned election (built from the complete graph on `k`
/// vertices) is isomorphic to a subelection of the second (built from `g`).
/// Requires `k >= 2`, at least `k` vertices, and at least `k(k-1)/2` edges;
/// with fewer the instance is trivially negative.
pub fn clique_to_subiso_instance(g: &Graph, k: usize) -> Result<(Election, Election)> {
    if k < 2 {
        return Err(Error::invalid("clique size must be at least 2"));
    }
    if g.num_vertices() < k {
        return Err(Error::invalid(format!(
            "graph has {} vertices, fewer than k={k}",
            g.num_vertices()
        )));
    }
    if g.edge_count() < k * (k - 1) / 2 {
        return Err(Error::invalid(format!(
            "graph has {} edges, fewer than k(k-1)/2 = {}",
            g.edge_count(),
            k * (k - 1) / 2
        )));
    }
    let complete = Graph::complete(k)?;
    Ok((graph_to_election(&complete)?, graph_to_election(g)?))
}

/// Reduces Clique to Max Common Candidate-Subelection with both matchings:
/// candidates are the vertices of `g`; per vertex x, election one gets the
/// vote `M(x) > x > N(x)` and election two the vote `x > M(x) > N(x)`, where
/// N(x) are the neighbors of x and M(x) the non-neighbors, each listed
/// ascending. Both matchings are identities. The optimal number of kept
/// candidates equals the clique number of `g`.
pub fn clique_to_common_cand_instance(
    g: &Graph,
) -> Result<(Election, Election, CandidateMatching, VoterMatching)> {
    let n = g.num_vertices();
    if n == 0 {
        return Err(Error::invalid("graph must have at least one vertex"));
    }
    let mut votes1 = Vec::with_capacity(n);
    let mut votes2 = Vec::with_capacity(n);
    for x in 0..n {
        let neighbors: Vec<usize> = (0..n).filter(|&y| g.has_edge(x, y)).collect();
        let non_neighbors: Vec<usize> =
            (0..n).filter(|&y| y != x && !g.has_edge(x, y)).collect();
        let mut v1 = Vec::with_capacity(n);
        v1.extend(&non_neighbors);
        v1.push(x);
        v1.extend(&neighbors);
        let mut v2 = Vec::with_capacity(n);
        v2.push(x);
        v2.extend(&non_neighbors);
        v2.extend(&neighbors);
        votes1.push(v1);
        votes2.push(v2);
    }
    Ok((
        Election::new(n, votes1)?,
        Election::new(n, votes2)?,
        CandidateMatching::identity(n),
        VoterMatching::identity(n),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hard::{
        build_conflict_graph, max_clique, max_common_cand_subelection_both,
        subelection_isomorphism,
    };
    use crate::MatchingCase;
    use proptest::prelude::*;

    #[test]
    fn triangle_election_has_expected_shape() {
        let k3 = Graph::complete(3).unwrap();
        let e = graph_to_election(&k3).unwrap();
        assert_eq!(e.num_candidates(), 5);
        assert_eq!(e.num_voters(), 12);
    }

    #[test]
    fn path_election_votes_are_exact() {
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let e = graph_to_election(&p3).unwrap();
        let expected: Vec<Vec<usize>> = vec![
            vec![0, 1, 3, 4, 2],
            vec![0, 1, 4, 3, 2],
            vec![1, 0, 3, 4, 2],
            vec![1, 0, 4, 3, 2],
            vec![1, 2, 3, 4, 0],
            vec![1, 2, 4, 3, 0],
            vec![2, 1, 3, 4, 0],
            vec![2, 1, 4, 3, 0],
        ];
        let got: Vec<Vec<usize>> = e.votes().iter().map(|v| v.ranking().to_vec()).collect();
        assert_eq!(got, expected);

        let empty = Graph::new(3).unwrap();
        assert!(graph_to_election(&empty).is_err());
    }

    #[test]
    fn subiso_reduction_round_trip_small() {
        let triangle = Graph::complete(3).unwrap();
        let (e1, e2) = clique_to_subiso_instance(&triangle, 3).unwrap();
        assert!(subelection_isomorphism(&e1, &e2, &MatchingCase::NoMatching)
            .unwrap()
            .is_some());

        // A path has no triangle, but enough edges for k = 2... use the
        // 4-vertex path so the edge-count precondition holds for k = 3.
        let p4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let (e1, e2) = clique_to_subiso_instance(&p4, 3).unwrap();
        assert!(subelection_isomorphism(&e1, &e2, &MatchingCase::NoMatching)
            .unwrap()
            .is_none());
        let (e1, e2) = clique_to_subiso_instance(&p4, 2).unwrap();
        assert!(subelection_isomorphism(&e1, &e2, &MatchingCase::NoMatching)
            .unwrap()
            .is_some());

        assert!(clique_to_subiso_instance(&p4, 1).is_err());
        assert!(clique_to_subiso_instance(&p4, 5).is_err());
        assert!(clique_to_subiso_instance(&p4, 4).is_err());
    }

    #[test]
    fn common_cand_reduction_matches_clique_number() {
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let (e1, e2, sigma, pi) = clique_to_common_cand_instance(&p3).unwrap();
        assert_eq!(e1.vote(0).ranking(), &[2, 0, 1]);
        assert_eq!(e2.vote(0).ranking(), &[0, 2, 1]);
        let w = max_common_cand_subelection_both(&e1, &e2, &sigma, &pi).unwrap();
        assert_eq!(w.value, 2);
        assert_eq!(w.sigma.pairs(), &[(0, 0), (1, 1)]);
    }

    proptest! {
        /// The conflict graph of the reduced instance reconstructs the input
        /// graph exactly: the vertex pair {x, y} conflicts iff it is not an
        /// edge, via the voter pair of x (and of y).
        #[test]
        fn conflict_graph_reconstructs_input(
            edges in proptest::collection::vec((0usize..7, 0usize..7), 0..20),
        ) {
            let clean: Vec<(usize, usize)> = edges.into_iter().filter(|&(a, b)| a != b).collect();
            let g = Graph::from_edges(7, &clean).unwrap();
            let (e1, e2, sigma, pi) = clique_to_common_cand_instance(&g).unwrap();
            let conflict = build_conflict_graph(&e1, &e2, &sigma, &pi).unwrap();
            prop_assert_eq!(&conflict, &g);
            let w = max_common_cand_subelection_both(&e1, &e2, &sigma, &pi).unwrap();
            prop_assert_eq!(w.value, max_clique(&g).len());
        }
    }
}
