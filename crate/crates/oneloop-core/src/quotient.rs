//! Exact presentations of `A_k` as a quotient of the free space on nonzero
//! graph classes by the relation span.
//!
//! Columns are ordered so that preferred graphs come last. Pivots are always
//! the leftmost nonzero column of a row, so the preferred graphs survive as
//! free columns whenever the relations allow it and normal forms are written
//! in terms of them.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::canon::{canonical_form, Form};
use crate::enumerate::{enumerate_admissible, EnumerateError, Filter};
use crate::graph::{named, VertexKind};
use crate::orientation::{is_zero_class, Parity};
use crate::relations::{relation_span, RelationInstance, RelationTable, SpanOptions};
use crate::vector::{GraphVector, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientError {
    ResourceLimit { limit: usize },
    UnknownKey(Form),
    FunctionalNotWellDefined { row: usize },
    MalformedEchelon,
}

impl From<EnumerateError> for QuotientError {
    fn from(e: EnumerateError) -> Self {
        match e {
            EnumerateError::ResourceLimit { limit } => QuotientError::ResourceLimit { limit },
            EnumerateError::ZeroOrder => QuotientError::ResourceLimit { limit: 0 },
        }
    }
}

impl fmt::Display for QuotientError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientError::ResourceLimit { limit } => write!(f, "graph count exceeded the ceiling {limit}"),
            QuotientError::UnknownKey(k) => write!(f, "{k} is not a nonzero class of this order"),
            QuotientError::FunctionalNotWellDefined { row } => {
                write!(f, "functional does not vanish on relation row {row}")
            }
            QuotientError::MalformedEchelon => f.write_str("stored rows are not in reduced echelon form"),
        }
    }
}

/// Sparse row: (column, value) pairs in increasing column order.
pub type Row = Vec<(usize, Q)>;

/// Preference rank of a column; larger survives longer.
pub fn preference(form: &Form, parity: Parity) -> u8 {
    let k = form.order();
    if k < 2 {
        return 0;
    }
    if parity.even_codim() {
        (*form == canonical_form(&named::wheel(k))) as u8
    } else if *form == canonical_form(&named::polygon(k)) {
        2
    } else {
        form.vertices.iter().all(|&v| v != VertexKind::External) as u8
    }
}

/// The nonzero classes of order `k`, in column order.
pub fn ambient_basis(k: usize, parity: Parity, limit: usize) -> Result<Vec<Form>, EnumerateError> {
    let mut b: Vec<Form> = enumerate_admissible(k, Filter::All, limit)?
        .into_iter()
        .filter(|f| !is_zero_class(&f.to_graph(), parity))
        .collect();
    b.sort_by_cached_key(|f| (preference(f, parity), f.clone()));
    Ok(b)
}

#[derive(Clone, Debug)]
pub struct Quotient {
    pub k: usize,
    pub parity: Parity,
    pub basis: Vec<Form>,
    index: BTreeMap<Form, usize>,
    /// Reduced row echelon form; each row starts at its pivot with a 1.
    rows: Vec<Row>,
    pivot_row: Vec<Option<usize>>,
}

fn axpy(target: &mut BTreeMap<usize, Q>, c: &Q, row: &Row) {
    for (col, x) in row {
        let e = target.entry(*col).or_insert_with(Q::zero);
        *e -= c * x;
        if e.is_zero() {
            target.remove(col);
        }
    }
}

fn normalize(row: BTreeMap<usize, Q>) -> Row {
    let lead = row.values().next().cloned().unwrap();
    row.into_iter().map(|(c, x)| (c, x / &lead)).collect()
}

impl Quotient {
    /// Eliminates `relations` over the given column order.
    pub fn from_relations<'a, I>(k: usize, parity: Parity, basis: Vec<Form>, relations: I) -> Result<Self, QuotientError>
    where
        I: IntoIterator<Item = &'a GraphVector>,
    {
        let index: BTreeMap<Form, usize> = basis.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        let mut input: Vec<BTreeMap<usize, Q>> = Vec::new();
        for v in relations {
            let mut r = BTreeMap::new();
            for (f, c) in v.iter() {
                let i = *index.get(f).ok_or_else(|| QuotientError::UnknownKey(f.clone()))?;
                r.insert(i, c.clone());
            }
            if !r.is_empty() {
                input.push(r);
            }
        }
        // Sparsest rows first keeps fill-in down.
        input.sort_by_key(|r| (r.len(), r.keys().next().copied()));
        let n = basis.len();
        let mut pivot_row: Vec<Option<usize>> = alloc::vec![None; n];
        let mut rows: Vec<Row> = Vec::new();
        for mut r in input {
            while let Some((&col, c)) = r.iter().find(|(col, _)| pivot_row[**col].is_some()) {
                let c = c.clone();
                let p = pivot_row[col].unwrap();
                axpy(&mut r, &c, &rows[p]);
            }
            if r.is_empty() {
                continue;
            }
            let row = normalize(r);
            pivot_row[row[0].0] = Some(rows.len());
            rows.push(row);
        }
        // The loop above only guarantees that pivot columns are cleared in
        // rows created later. Back-substitute to reach the reduced form.
        let mut order: Vec<usize> = (0..rows.len()).collect();
        order.sort_by_key(|&i| core::cmp::Reverse(rows[i][0].0));
        for &i in &order {
            let mut r: BTreeMap<usize, Q> = rows[i].iter().cloned().collect();
            let lead = rows[i][0].0;
            loop {
                let hit = r
                    .iter()
                    .find(|(col, _)| **col != lead && pivot_row[**col].is_some())
                    .map(|(col, c)| (*col, c.clone()));
                let Some((col, c)) = hit else { break };
                let p = pivot_row[col].unwrap();
                axpy(&mut r, &c, &rows[p]);
            }
            rows[i] = r.into_iter().collect();
        }
        // Pivot order makes the stored form independent of the input order.
        rows.sort_by_key(|r| r[0].0);
        for (i, r) in rows.iter().enumerate() {
            pivot_row[r[0].0] = Some(i);
        }
        Ok(Quotient { k, parity, basis, index, rows, pivot_row })
    }

    /// Rebuilds a presentation from stored echelon rows, checking that they
    /// are in reduced row echelon form over `basis`, sorted by pivot.
    pub fn from_parts(k: usize, parity: Parity, basis: Vec<Form>, rows: Vec<Row>) -> Result<Self, QuotientError> {
        let index: BTreeMap<Form, usize> = basis.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        if index.len() != basis.len() {
            return Err(QuotientError::MalformedEchelon);
        }
        let mut pivot_row = alloc::vec![None; basis.len()];
        for (i, row) in rows.iter().enumerate() {
            let Some((p, lead)) = row.first() else { return Err(QuotientError::MalformedEchelon) };
            let sorted = row.windows(2).all(|w| w[0].0 < w[1].0);
            let after_previous = i == 0 || rows[i - 1].first().is_some_and(|(q, _)| q < p);
            if !sorted
                || !after_previous
                || row.last().unwrap().0 >= basis.len()
                || !num_traits::One::is_one(lead)
                || pivot_row[*p].is_some()
            {
                return Err(QuotientError::MalformedEchelon);
            }
            pivot_row[*p] = Some(i);
        }
        for row in &rows {
            if row[1..].iter().any(|(c, x)| pivot_row[*c].is_some() || x.is_zero()) {
                return Err(QuotientError::MalformedEchelon);
            }
        }
        Ok(Quotient { k, parity, basis, index, rows, pivot_row })
    }

    pub fn echelon_rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dimension(&self) -> usize {
        self.basis.len() - self.rows.len()
    }

    /// Columns without a pivot, i.e. a basis of the quotient.
    pub fn free_columns(&self) -> Vec<&Form> {
        (0..self.basis.len())
            .filter(|&i| self.pivot_row[i].is_none())
            .map(|i| &self.basis[i])
            .collect()
    }

    pub fn contains(&self, f: &Form) -> bool {
        self.index.contains_key(f)
    }

    pub fn reduce(&self, v: &GraphVector) -> Result<GraphVector, QuotientError> {
        let mut r: BTreeMap<usize, Q> = BTreeMap::new();
        for (f, c) in v.iter() {
            let i = *self.index.get(f).ok_or_else(|| QuotientError::UnknownKey(f.clone()))?;
            r.insert(i, c.clone());
        }
        let hits: Vec<(usize, Q)> = r
            .iter()
            .filter(|(col, _)| self.pivot_row[**col].is_some())
            .map(|(c, x)| (*c, x.clone()))
            .collect();
        for (col, c) in hits {
            axpy(&mut r, &c, &self.rows[self.pivot_row[col].unwrap()]);
        }
        Ok(r.into_iter().map(|(i, c)| (self.basis[i].clone(), c)).collect())
    }

    pub fn is_zero(&self, v: &GraphVector) -> Result<bool, QuotientError> {
        Ok(self.reduce(v)?.is_zero())
    }

    /// Pairs `v` with the functional `f` after checking that `f` vanishes on
    /// every relation row.
    pub fn pair_with_functional<F: Fn(&Form) -> Q>(&self, v: &GraphVector, f: F) -> Result<Q, QuotientError> {
        let values: Vec<Q> = self.basis.iter().map(&f).collect();
        for (i, row) in self.rows.iter().enumerate() {
            let s: Q = row.iter().map(|(c, x)| x * &values[*c]).sum();
            if !s.is_zero() {
                return Err(QuotientError::FunctionalNotWellDefined { row: i });
            }
        }
        let mut total = Q::zero();
        for (form, c) in v.iter() {
            let i = *self.index.get(form).ok_or_else(|| QuotientError::UnknownKey(form.clone()))?;
            total += c * &values[i];
        }
        Ok(total)
    }

    /// If the quotient is spanned by a single free column, the coefficient of
    /// `v` on it.
    pub fn coefficient_on_generator(&self, v: &GraphVector) -> Result<Option<(Form, Q)>, QuotientError> {
        let free = self.free_columns();
        if free.len() != 1 {
            return Ok(None);
        }
        let g = free[0].clone();
        let c = self.reduce(v)?.coeff(&g);
        Ok(Some((g, c)))
    }

    pub fn rows(&self) -> impl Iterator<Item = GraphVector> + '_ {
        self.rows
            .iter()
            .map(|r| r.iter().map(|(i, c)| (self.basis[*i].clone(), c.clone())).collect())
    }
}

/// Builds the full presentation of `A_k` for a parity class.
pub fn build_quotient(
    k: usize,
    parity: Parity,
    table: &RelationTable,
    opts: &SpanOptions,
    limit: usize,
) -> Result<(Quotient, Vec<RelationInstance>), QuotientError> {
    let basis = ambient_basis(k, parity, limit)?;
    let span = relation_span(k, parity, table, opts, limit)?;
    let q = Quotient::from_relations(k, parity, basis, span.iter().map(|r| &r.vector))?;
    Ok((q, span))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::q;

    fn forms(k: usize) -> Vec<Form> {
        enumerate_admissible(k, Filter::All, 1000).unwrap()
    }

    #[test]
    fn elimination_of_a_toy_system() {
        let b = forms(2);
        let (x, y, z) = (b[0].clone(), b[1].clone(), b[2].clone());
        let r1: GraphVector = [(x.clone(), q(1)), (y.clone(), q(-1))].into_iter().collect();
        let r2: GraphVector = [(y.clone(), q(2)), (z.clone(), q(2))].into_iter().collect();
        let quot = Quotient::from_relations(2, Parity::new(true, true), b[..3].to_vec(), [&r1, &r2]).unwrap();
        assert_eq!((quot.rank(), quot.dimension()), (2, 1));
        assert_eq!(quot.free_columns(), [&z]);
        // x = y = -z in the quotient.
        let v = GraphVector::single(x, q(3));
        assert_eq!(quot.reduce(&v).unwrap(), GraphVector::single(z, q(-3)));
    }

    #[test]
    fn dependent_rows_are_dropped() {
        let b = forms(2);
        let r: GraphVector = [(b[0].clone(), q(1)), (b[1].clone(), q(1))].into_iter().collect();
        let twice = r.scaled(&q(2));
        let quot = Quotient::from_relations(2, Parity::new(true, true), b.clone(), [&r, &twice]).unwrap();
        assert_eq!(quot.rank(), 1);
        assert_eq!(quot.echelon_rows()[0][0], (0, q(1)));
    }

    #[test]
    fn preference_puts_the_wheel_last() {
        let p = Parity::new(true, true);
        let basis = ambient_basis(2, p, 1000).unwrap();
        assert_eq!(*basis.last().unwrap(), canonical_form(&named::wheel(2)));
        let p = Parity::new(true, false);
        let basis = ambient_basis(3, p, 1000).unwrap();
        assert_eq!(*basis.last().unwrap(), canonical_form(&named::polygon(3)));
    }
}
