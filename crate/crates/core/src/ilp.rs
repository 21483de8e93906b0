//! Integer-programming export for Max Common Voter-Subelection.
//!
//! The model uses binary variables `N_{v,u}` (voter v of the left election
//! is matched to voter u of the right one) and `M_{c,d}` (candidate c maps
//! to d). Voter rows sum to at most 1 on each side, candidate rows to
//! exactly 1 (M is a full permutation), and a coupling row per voter pair
//! forces matched voters to agree under M. No solver is embedded; models
//! are written in the LP file format for external consumption.

use std::io::Write;

use itertools::Itertools;

use crate::{Election, Error, IsoWitness, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarId {
    N { v: usize, u: usize },
    M { c: usize, d: usize },
}

impl VarId {
    fn name(&self) -> String {
        match *self {
            VarId::N { v, u } => format!("N_{v}_{u}"),
            VarId::M { c, d } => format!("M_{c}_{d}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

impl Cmp {
    fn symbol(&self) -> &'static str {
        match self {
            Cmp::Le => "<=",
            Cmp::Ge => ">=",
            Cmp::Eq => "=",
        }
    }

    fn holds(&self, lhs: i64, rhs: i64) -> bool {
        match self {
            Cmp::Le => lhs <= rhs,
            Cmp::Ge => lhs >= rhs,
            Cmp::Eq => lhs == rhs,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(i64, VarId)>,
    pub cmp: Cmp,
    pub rhs: i64,
}

/// The assembled program for one pair of elections with a common candidate
/// count. The coupling weights w_{v,u,c,d} are kept implicitly: they depend
/// only on the stored votes (see [`IlpModel::coupling_weight`]).
#[derive(Clone, Debug)]
pub struct IlpModel {
    n1: usize,
    n2: usize,
    m: usize,
    left: Election,
    right: Election,
    constraints: Vec<Constraint>,
    objective: Vec<(i64, VarId)>,
}

impl IlpModel {
    pub fn num_candidates(&self) -> usize {
        self.m
    }

    pub fn left_voters(&self) -> usize {
        self.n1
    }

    pub fn right_voters(&self) -> usize {
        self.n2
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &[(i64, VarId)] {
        &self.objective
    }

    pub fn num_n_vars(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn num_m_vars(&self) -> usize {
        self.m * self.m
    }

    /// w_{v,u,c,d}: 1 iff voter v (left) ranks c on the same position as
    /// voter u (right) ranks d.
    pub fn coupling_weight(&self, v: usize, u: usize, c: usize, d: usize) -> i64 {
        i64::from(self.left.vote(v).position_of(c) == self.right.vote(u).position_of(d))
    }
}

/// Builds the program for a pair of elections with equal candidate counts.
pub fn build_ilp(left: &Election, right: &Election) -> Result<IlpModel> {
    let m = left.num_candidates();
    if right.num_candidates() != m {
        return Err(Error::invalid(format!(
            "candidate counts differ: {m} vs {}",
            right.num_candidates()
        )));
    }
    let (n1, n2) = (left.num_voters(), right.num_voters());
    let mut constraints = Vec::with_capacity(n1 + n2 + 2 * m + n1 * n2);

    for v in 0..n1 {
        let terms = (0..n2).map(|u| (1, VarId::N { v, u })).collect();
        constraints.push(Constraint {
            name: format!("voter_left_{v}"),
            terms,
            cmp: Cmp::Le,
            rhs: 1,
        });
    }
    for u in 0..n2 {
        let terms = (0..n1).map(|v| (1, VarId::N { v, u })).collect();
        constraints.push(Constraint {
            name: format!("voter_right_{u}"),
            terms,
            cmp: Cmp::Le,
            rhs: 1,
        });
    }
    for c in 0..m {
        let terms = (0..m).map(|d| (1, VarId::M { c, d })).collect();
        constraints.push(Constraint {
            name: format!("cand_left_{c}"),
            terms,
            cmp: Cmp::Eq,
            rhs: 1,
        });
    }
    for d in 0..m {
        let terms = (0..m).map(|c| (1, VarId::M { c, d })).collect();
        constraints.push(Constraint {
            name: format!("cand_right_{d}"),
            terms,
            cmp: Cmp::Eq,
            rhs: 1,
        });
    }
    // Coupling: sum over c,d of w_{v,u,c,d} M_{c,d} >= m N_{v,u}. Only the
    // m position-aligned (c,d) pairs have weight 1, so each row carries m
    // unit M-terms; the sum reaches m exactly when M maps every candidate
    // of v's ranking to the like-positioned candidate of u's.
    for v in 0..n1 {
        for u in 0..n2 {
            let mut terms: Vec<(i64, VarId)> = (0..m)
                .map(|p| {
                    let c = left.vote(v).candidate_at(p);
                    let d = right.vote(u).candidate_at(p);
                    (1, VarId::M { c, d })
                })
                .collect();
            terms.push((-(m as i64), VarId::N { v, u }));
            constraints.push(Constraint {
                name: format!("couple_{v}_{u}"),
                terms,
                cmp: Cmp::Ge,
                rhs: 0,
            });
        }
    }

    let objective = (0..n1)
        .flat_map(|v| (0..n2).map(move |u| (1, VarId::N { v, u })))
        .collect();
    Ok(IlpModel {
        n1,
        n2,
        m,
        left: left.clone(),
        right: right.clone(),
        constraints,
        objective,
    })
}

fn push_terms(line: &mut String, out: &mut Vec<String>, terms: &[(i64, VarId)]) {
    for (i, &(coeff, var)) in terms.iter().enumerate() {
        let token = match (i, coeff) {
            (0, 1) => var.name(),
            (0, -1) => format!("- {}", var.name()),
            (0, c) if c < 0 => format!("- {} {}", -c, var.name()),
            (0, c) => format!("{c} {}", var.name()),
            (_, 1) => format!("+ {}", var.name()),
            (_, -1) => format!("- {}", var.name()),
            (_, c) if c < 0 => format!("- {} {}", -c, var.name()),
            (_, c) => format!("+ {c} {}", var.name()),
        };
        if line.len() + token.len() + 1 > 72 {
            out.push(std::mem::take(line));
            line.push(' ');
        }
        line.push(' ');
        line.push_str(&token);
    }
}

/// Writes the model in the LP file format. Output is deterministic: the
/// same model always yields byte-identical text.
pub fn write_lp<W: Write>(model: &IlpModel, sink: &mut W) -> Result<()> {
    let mut lines: Vec<String> = Vec::new();
    lines.push("Maximize".to_string());
    let mut line = String::from(" obj:");
    push_terms(&mut line, &mut lines, &model.objective);
    lines.push(line);
    lines.push("Subject To".to_string());
    for c in &model.constraints {
        let mut line = format!(" {}:", c.name);
        push_terms(&mut line, &mut lines, &c.terms);
        line.push_str(&format!(" {} {}", c.cmp.symbol(), c.rhs));
        lines.push(line);
    }
    lines.push("Binary".to_string());
    for v in 0..model.n1 {
        for u in 0..model.n2 {
            lines.push(format!(" {}", VarId::N { v, u }.name()));
        }
    }
    for c in 0..model.m {
        for d in 0..model.m {
            lines.push(format!(" {}", VarId::M { c, d }.name()));
        }
    }
    lines.push("End".to_string());
    for l in lines {
        writeln!(sink, "{l}")?;
    }
    Ok(())
}

/// Checks a 0/1 assignment (`n_values[v][u]`, `m_values[c][d]`) against
/// every constraint; returns the objective value when feasible.
pub fn verify_ilp_assignment(
    model: &IlpModel,
    n_values: &[Vec<bool>],
    m_values: &[Vec<bool>],
) -> Result<Option<usize>> {
    if n_values.len() != model.n1
        || n_values.iter().any(|row| row.len() != model.n2)
        || m_values.len() != model.m
        || m_values.iter().any(|row| row.len() != model.m)
    {
        return Err(Error::invalid("assignment dimensions do not match the model"));
    }
    let value_of = |var: VarId| -> i64 {
        match var {
            VarId::N { v, u } => i64::from(n_values[v][u]),
            VarId::M { c, d } => i64::from(m_values[c][d]),
        }
    };
    for c in &model.constraints {
        let lhs: i64 = c.terms.iter().map(|&(coeff, var)| coeff * value_of(var)).sum();
        if !c.cmp.holds(lhs, c.rhs) {
            return Ok(None);
        }
    }
    let objective: i64 = model.objective.iter().map(|&(coeff, var)| coeff * value_of(var)).sum();
    Ok(Some(objective as usize))
}

/// Converts a voter-variant witness into model variables. An empty
/// candidate matching (the canonical zero witness) maps to the identity
/// permutation, which is feasible alongside the all-zero N.
pub fn witness_assignment(
    model: &IlpModel,
    witness: &IsoWitness,
) -> Result<(Vec<Vec<bool>>, Vec<Vec<bool>>)> {
    let mut m_values = vec![vec![false; model.m]; model.m];
    if witness.sigma.is_empty() {
        for c in 0..model.m {
            m_values[c][c] = true;
        }
    } else {
        if !witness.sigma.is_bijection_between(model.m, model.m) {
            return Err(Error::invalid(
                "witness candidate matching is not a full bijection",
            ));
        }
        for &(c, d) in witness.sigma.pairs() {
            m_values[c][d] = true;
        }
    }
    let mut n_values = vec![vec![false; model.n2]; model.n1];
    for &(v, u) in witness.pi.pairs() {
        if v >= model.n1 || u >= model.n2 {
            return Err(Error::invalid("witness voter matching out of range"));
        }
        n_values[v][u] = true;
    }
    Ok((n_values, m_values))
}

/// Exhaustive optimum over all assignments that satisfy the voter- and
/// candidate-row constraints by construction; couplings are checked through
/// [`verify_ilp_assignment`]. Only intended for small models.
pub fn brute_force_optimum(model: &IlpModel) -> Result<usize> {
    if model.m > 6 || model.n1 > 6 || model.n2 > 6 {
        return Err(Error::size_limit(
            "brute-force ILP optimization is capped at m, n <= 6",
        ));
    }
    let mut best = 0usize;
    for perm in (0..model.m).permutations(model.m) {
        let mut m_values = vec![vec![false; model.m]; model.m];
        for (c, &d) in perm.iter().enumerate() {
            m_values[c][d] = true;
        }
        let mut n_values = vec![vec![false; model.n2]; model.n1];
        let mut used = vec![false; model.n2];
        enumerate_n(model, 0, &mut n_values, &mut used, &m_values, &mut best)?;
    }
    Ok(best)
}

fn enumerate_n(
    model: &IlpModel,
    v: usize,
    n_values: &mut [Vec<bool>],
    used: &mut [bool],
    m_values: &[Vec<bool>],
    best: &mut usize,
) -> Result<()> {
    if v == model.n1 {
        if let Some(obj) = verify_ilp_assignment(model, n_values, m_values)? {
            *best = (*best).max(obj);
        }
        return Ok(());
    }
    enumerate_n(model, v + 1, n_values, used, m_values, best)?;
    for u in 0..model.n2 {
        if !used[u] {
            used[u] = true;
            n_values[v][u] = true;
            enumerate_n(model, v + 1, n_values, used, m_values, best)?;
            n_values[v][u] = false;
            used[u] = false;
        }
    }
    Ok(())
}
