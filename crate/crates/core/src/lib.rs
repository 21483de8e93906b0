//! Solvers for isomorphism problems on ordinal elections.
//!
//! An election is a set of candidates together with a list of votes, each a
//! strict total ranking of the candidates. Two elections are isomorphic when
//! candidates can be renamed and voters reordered so the vote lists coincide.
//! Relaxing this to allow deleting candidates, voters, or both yields the
//! subelection and maximum-common-subelection problems solved here.
//!
//! The crate provides:
//!
//! * exact polynomial solvers for the voter-deletion variants ([`iso`]),
//! * brute-force and parameterized solvers plus a clique-based approximation
//!   for the candidate-deletion variants ([`hard`]),
//! * reductions from clique problems to subelection problems ([`reductions`]),
//! * samplers for standard statistical cultures ([`cultures`]),
//! * an integer-program exporter in LP format ([`ilp`]),
//! * an experiment harness measuring similarity between cultures
//!   ([`experiments`]).

pub mod cultures;
pub mod election;
pub mod experiments;
pub mod hard;
pub mod ilp;
pub mod iso;
pub mod matching;
pub mod reductions;

mod error;

pub use election::{
    CandidateMatching, Election, IsoWitness, MatchingCase, Variant, VoterMatching, Vote,
};
pub use error::{Error, Result};

#[cfg(test)]
pub(crate) mod test_support {
    use proptest::prelude::*;

    use crate::Election;

    pub(crate) fn arb_election_m(m: usize, max_n: usize) -> impl Strategy<Value = Election> {
        (1..=max_n).prop_flat_map(move |n| {
            proptest::collection::vec(Just((0..m).collect::<Vec<usize>>()).prop_shuffle(), n)
                .prop_map(move |rankings| Election::new(m, rankings).unwrap())
        })
    }

    pub(crate) fn arb_election(max_m: usize, max_n: usize) -> impl Strategy<Value = Election> {
        (1..=max_m).prop_flat_map(move |m| arb_election_m(m, max_n))
    }
}
