//! Principal-face cancellation: for every contracted graph, the classes of
//! all graphs that contract onto it, weighted by `sign / |Aut|`, must sum to
//! zero in `A_k`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::contract::{contract_edge, ContractError, Convention};
use crate::canon::{automorphism_order, Form};
use crate::enumerate::{enumerate_admissible, Filter};
use crate::graph::EdgeKind;
use crate::orientation::Parity;
use crate::quotient::{Quotient, QuotientError};
use crate::relations::site_legs;
use crate::vector::{q_frac, GraphVector, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    pub target: Form,
    /// Leg kinds at the merged vertex, sorted.
    pub legs: Vec<EdgeKind>,
    /// (graph, edge) pairs contributing.
    pub members: usize,
    /// Labelled graphs contracting onto one labelled copy of the target:
    /// the sum over members of `b_S! b_T! |Aut target| / |Aut graph|`, where
    /// `b_S`, `b_T` count the disappearing S- and T-elements.
    pub labelled_members: Q,
    pub vector: GraphVector,
    pub residue: GraphVector,
}

impl Group {
    pub fn cancels(&self) -> bool {
        self.residue.is_zero()
    }

    pub fn legs_label(&self) -> String {
        let v: Vec<&str> = self.legs.iter().map(|k| k.name()).collect();
        v.join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CancellationReport {
    pub k: usize,
    pub parity: Parity,
    pub convention: Convention,
    pub groups: Vec<Group>,
    pub skipped_degenerate: usize,
    pub skipped_zero_target: usize,
}

impl CancellationReport {
    pub fn groups_checked(&self) -> usize {
        self.groups.len()
    }

    pub fn failures(&self) -> impl Iterator<Item = &Group> {
        self.groups.iter().filter(|g| !g.cancels())
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }

    /// Groups whose merged vertex has two theta and two eta legs: the
    /// six-term configuration cancelled by STU in odd codimension.
    pub fn six_term_groups(&self) -> impl Iterator<Item = &Group> {
        let want = [EdgeKind::Eta, EdgeKind::Eta, EdgeKind::Theta, EdgeKind::Theta];
        self.groups.iter().filter(move |g| g.legs == want)
    }

    pub fn convention_name(&self) -> String {
        self.convention.name().to_string()
    }
}

/// Builds every principal-face group of order `k` and reduces it in `quot`.
pub fn check_principal_cancellation(
    quot: &Quotient,
    convention: Convention,
    limit: usize,
) -> Result<CancellationReport, QuotientError> {
    check_with_perturbation(quot, convention, limit, |_, _| 1)
}

/// As [`check_principal_cancellation`], with every contribution multiplied
/// by `perturb(graph, edge)`. Used for negative controls.
pub fn check_with_perturbation<P: Fn(&crate::graph::Graph, usize) -> i8>(
    quot: &Quotient,
    convention: Convention,
    limit: usize,
    perturb: P,
) -> Result<CancellationReport, QuotientError> {
    let (k, parity) = (quot.k, quot.parity);
    let graphs = enumerate_admissible(k, Filter::All, limit)?;
    let mut acc: BTreeMap<Form, (GraphVector, usize, Q)> = BTreeMap::new();
    let mut skipped_degenerate = 0;
    let mut skipped_zero_target = 0;
    for f in &graphs {
        let g = f.to_graph();
        let class = GraphVector::from_graph(&g, parity);
        if class.is_zero() {
            continue;
        }
        let aut = automorphism_order(&g) as i64;
        for e in 0..g.edges.len() {
            let t = match contract_edge(&g, parity, e, convention) {
                Ok(t) => t,
                Err(ContractError::NonContractible) => continue,
                Err(ContractError::Degenerate) => {
                    skipped_degenerate += 1;
                    continue;
                }
            };
            let Some((target, s)) = t.target else {
                skipped_zero_target += 1;
                continue;
            };
            let b_t = 3 - t.block_s;
            let labelled = q_frac((factorial(t.block_s) * factorial(b_t) * automorphism_order(&t.contracted)) as i64, aut);
            let entry = acc.entry(target).or_insert_with(|| (GraphVector::new(), 0, Q::default()));
            entry.0.add_scaled(&class, &q_frac((t.sign * s * perturb(&g, e)) as i64, aut));
            entry.1 += 1;
            entry.2 += labelled;
        }
    }
    let mut groups = Vec::new();
    for (target, (vector, members, labelled_members)) in acc {
        let legs = site_legs(&target.to_graph()).map(|(_, l, _)| l).unwrap_or_default();
        let residue = quot.reduce(&vector)?;
        groups.push(Group { target, legs, members, labelled_members, vector, residue });
    }
    Ok(CancellationReport { k, parity, convention, groups, skipped_degenerate, skipped_zero_target })
}

/// Runs both conventions and returns the reports, passing one first if any.
pub fn adopt_convention(quot: &Quotient, limit: usize) -> Result<Vec<CancellationReport>, QuotientError> {
    let mut out = Vec::new();
    for c in Convention::BOTH {
        out.push(check_principal_cancellation(quot, c, limit)?);
    }
    out.sort_by_key(|r| !r.passed());
    Ok(out)
}


fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}
