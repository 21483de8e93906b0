//! Seeded samplers for statistical election models, plus the norm-phi
//! calibration used by the Mallows model.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::{Election, Error, Result, Vote};

/// The election models. `Urn` and `Mallows` carry their correlation
/// parameter; the remaining models are parameter-free.
#[derive(Clone, Debug, PartialEq)]
pub enum Culture {
    /// One uniform random order copied to every vote.
    Identity,
    /// Every vote an independent uniform random order.
    ImpartialCulture,
    /// Polya-Eggenberger urn: votes are copied from earlier ones with
    /// probability growing in `alpha` (0 reduces to Impartial Culture).
    Urn { alpha: f64 },
    /// Mallows with dispersion calibrated so the expected swap distance from
    /// the center is `norm_phi` times half the maximum.
    Mallows { norm_phi: f64 },
    /// Candidates and voters as uniform points on [0,1]; voters rank by
    /// distance.
    Interval1D,
    /// Uniform over the votes single-peaked on the axis 0 < 1 < ... < m-1.
    Walsh,
    /// Uniform peak on the same axis, extended by fair coin tosses.
    Conitzer,
}

impl Culture {
    fn validate(&self) -> Result<()> {
        match *self {
            Culture::Urn { alpha } => {
                if !alpha.is_finite() || alpha < 0.0 {
                    return Err(Error::invalid(format!(
                        "urn alpha must be a nonnegative real, got {alpha}"
                    )));
                }
            }
            Culture::Mallows { norm_phi } => {
                if !norm_phi.is_finite() || !(0.0..=1.0).contains(&norm_phi) {
                    return Err(Error::invalid(format!(
                        "mallows norm-phi must lie in [0,1], got {norm_phi}"
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

impl fmt::Display for Culture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Culture::Identity => write!(f, "id"),
            Culture::ImpartialCulture => write!(f, "ic"),
            Culture::Urn { alpha } => write!(f, "urn(alpha={alpha})"),
            Culture::Mallows { norm_phi } => write!(f, "mallows(normphi={norm_phi})"),
            Culture::Interval1D => write!(f, "1d"),
            Culture::Walsh => write!(f, "walsh"),
            Culture::Conitzer => write!(f, "conitzer"),
        }
    }
}

impl FromStr for Culture {
    type Err = Error;

    /// Parses the canonical forms `id`, `ic`, `urn(alpha=A)`,
    /// `mallows(normphi=P)`, `1d`, `walsh`, `conitzer`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let culture = match s {
            "id" => Culture::Identity,
            "ic" => Culture::ImpartialCulture,
            "1d" => Culture::Interval1D,
            "walsh" => Culture::Walsh,
            "conitzer" => Culture::Conitzer,
            _ => {
                let param = |prefix: &str| -> Option<&str> {
                    s.strip_prefix(prefix)?.strip_suffix(')')
                };
                if let Some(v) = param("urn(alpha=") {
                    let alpha: f64 = v
                        .parse()
                        .map_err(|_| Error::invalid(format!("bad urn alpha {v:?}")))?;
                    Culture::Urn { alpha }
                } else if let Some(v) = param("mallows(normphi=") {
                    let norm_phi: f64 = v
                        .parse()
                        .map_err(|_| Error::invalid(format!("bad mallows norm-phi {v:?}")))?;
                    Culture::Mallows { norm_phi }
                } else {
                    return Err(Error::invalid(format!("unknown culture {s:?}")));
                }
            }
        };
        culture.validate()?;
        Ok(culture)
    }
}

/// A fully specified sampling task: model, election shape, and seed.
/// Sampling is a pure function of this value.
#[derive(Clone, Debug, PartialEq)]
pub struct CultureSpec {
    culture: Culture,
    m: usize,
    n: usize,
    seed: u64,
}

impl CultureSpec {
    pub fn new(culture: Culture, m: usize, n: usize, seed: u64) -> Result<Self> {
        culture.validate()?;
        if m == 0 || n == 0 {
            return Err(Error::invalid("election shape must be at least 1x1"));
        }
        Ok(CultureSpec { culture, m, n, seed })
    }

    pub fn culture(&self) -> &Culture {
        &self.culture
    }

    pub fn num_candidates(&self) -> usize {
        self.m
    }

    pub fn num_voters(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_seed(&self, seed: u64) -> CultureSpec {
        CultureSpec { seed, ..self.clone() }
    }
}

/// Samples the election described by `spec`.
pub fn sample(spec: &CultureSpec) -> Election {
    sample_with_axis(spec).0
}

/// Samples an election together with its societal axis, when the model has
/// one: the candidate-point order for the 1D interval model, the natural
/// index order for Walsh and Conitzer, and none otherwise.
pub fn sample_with_axis(spec: &CultureSpec) -> (Election, Option<Vec<usize>>) {
    let (m, n) = (spec.m, spec.n);
    let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);
    let mut axis = None;
    let rankings: Vec<Vec<usize>> = match spec.culture {
        Culture::Identity => {
            let central = random_order(m, &mut rng);
            vec![central; n]
        }
        Culture::ImpartialCulture => (0..n).map(|_| random_order(m, &mut rng)).collect(),
        Culture::Urn { alpha } => {
            let mut votes: Vec<Vec<usize>> = Vec::with_capacity(n);
            for i in 0..n {
                let p_copy = (i as f64 * alpha) / (1.0 + i as f64 * alpha);
                // For alpha = 0 no coin is consumed, so the stream, and
                // hence the election, is identical to Impartial Culture.
                if p_copy > 0.0 && rng.random_bool(p_copy) {
                    let j = rng.random_range(0..i);
                    votes.push(votes[j].clone());
                } else {
                    votes.push(random_order(m, &mut rng));
                }
            }
            votes
        }
        Culture::Mallows { norm_phi } => {
            let phi = calibrate_mallows_phi(m, norm_phi);
            let central = random_order(m, &mut rng);
            (0..n).map(|_| mallows_insertion(&central, phi, &mut rng)).collect()
        }
        Culture::Interval1D => {
            let cand_pts: Vec<f64> = (0..m).map(|_| rng.random()).collect();
            let voter_pts: Vec<f64> = (0..n).map(|_| rng.random()).collect();
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_unstable_by(|&a, &b| {
                cand_pts[a].total_cmp(&cand_pts[b]).then(a.cmp(&b))
            });
            axis = Some(order);
            voter_pts
                .iter()
                .map(|&p| {
                    let mut ranking: Vec<usize> = (0..m).collect();
                    ranking.sort_unstable_by(|&a, &b| {
                        let da = (cand_pts[a] - p).abs();
                        let db = (cand_pts[b] - p).abs();
                        da.total_cmp(&db).then(a.cmp(&b))
                    });
                    ranking
                })
                .collect()
        }
        Culture::Walsh => {
            axis = Some((0..m).collect());
            (0..n).map(|_| walsh_vote(m, &mut rng)).collect()
        }
        Culture::Conitzer => {
            axis = Some((0..m).collect());
            (0..n).map(|_| conitzer_vote(m, &mut rng)).collect()
        }
    };
    let votes = rankings
        .into_iter()
        .map(|r| Vote::new(r).expect("samplers produce permutations"))
        .collect();
    let election = Election::from_votes(m, votes).expect("spec shape is validated");
    (election, axis)
}

fn random_order(m: usize, rng: &mut ChaCha12Rng) -> Vec<usize> {
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(rng);
    order
}

/// One repeated-insertion draw: candidate i of the central order is inserted
/// with displacement d from the bottom with probability proportional to
/// phi^d, which realizes the Mallows distribution with dispersion phi.
fn mallows_insertion(central: &[usize], phi: f64, rng: &mut ChaCha12Rng) -> Vec<usize> {
    let mut vote: Vec<usize> = Vec::with_capacity(central.len());
    for (i, &c) in central.iter().enumerate() {
        let mut z = 0.0;
        let mut w = 1.0;
        for _ in 0..=i {
            z += w;
            w *= phi;
        }
        let r = rng.random::<f64>() * z;
        let mut displacement = i;
        let mut cumulative = 0.0;
        w = 1.0;
        for d in 0..=i {
            cumulative += w;
            if r < cumulative {
                displacement = d;
                break;
            }
            w *= phi;
        }
        vote.insert(i - displacement, c);
    }
    vote
}

/// Uniform single-peaked vote: fill positions bottom-up, taking either end
/// of the remaining axis interval with equal probability. All m-1 coins are
/// fair and independent, so each of the 2^(m-1) single-peaked votes is
/// equally likely.
fn walsh_vote(m: usize, rng: &mut ChaCha12Rng) -> Vec<usize> {
    let mut vote = vec![0usize; m];
    let (mut lo, mut hi) = (0usize, m - 1);
    for pos in (1..m).rev() {
        if rng.random_bool(0.5) {
            vote[pos] = lo;
            lo += 1;
        } else {
            vote[pos] = hi;
            hi -= 1;
        }
    }
    vote[0] = lo;
    vote
}

/// Uniform peak, then grow the ranked interval left or right by fair coin;
/// forced moves (one side exhausted) consume no randomness.
fn conitzer_vote(m: usize, rng: &mut ChaCha12Rng) -> Vec<usize> {
    let peak = rng.random_range(0..m);
    let mut vote = Vec::with_capacity(m);
    vote.push(peak);
    let (mut lo, mut hi) = (peak, peak);
    while vote.len() < m {
        let go_left = if lo == 0 {
            false
        } else if hi == m - 1 {
            true
        } else {
            rng.random_bool(0.5)
        };
        if go_left {
            lo -= 1;
            vote.push(lo);
        } else {
            hi += 1;
            vote.push(hi);
        }
    }
    vote
}

/// Expected swap distance of a Mallows draw from its center, from the
/// insertion model: inserting candidate i displaces it by d with probability
/// proportional to phi^d (d ranging over 0..i), and displacements add up.
pub fn expected_swaps(m: usize, phi: f64) -> f64 {
    let mut total = 0.0;
    let mut z = 1.0; // sum of phi^d for d in 0..=l
    let mut zd = 0.0; // sum of d * phi^d
    let mut w = 1.0; // phi^l
    for l in 1..m {
        w *= phi;
        z += w;
        zd += l as f64 * w;
        total += zd / z;
    }
    total
}

/// The dispersion phi for which the expected swap distance equals
/// `norm_phi` times half the maximum possible number of swaps, m(m-1)/4.
/// Endpoints are exact; interior values are found by bisection, which is
/// valid because expected_swaps is strictly increasing in phi.
pub fn calibrate_mallows_phi(m: usize, norm_phi: f64) -> f64 {
    if norm_phi <= 0.0 {
        return 0.0;
    }
    if norm_phi >= 1.0 {
        return 1.0;
    }
    if m < 2 {
        // No swaps are possible; every phi realizes the target trivially.
        return norm_phi;
    }
    let target = norm_phi * (m * (m - 1)) as f64 / 4.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if expected_swaps(m, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
