//! Finite formal combinations of canonical graph classes with exact
//! rational coefficients.

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::canon::Form;
use crate::orientation::{canonicalize, OrientedGraph, Parity};
use crate::graph::Graph;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A map from canonical form to a nonzero coefficient. Every key stands for
/// its graph with the reference orientation.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct GraphVector {
    entries: BTreeMap<Form, Q>,
}

impl GraphVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// The class of `g` with its reference orientation, or zero.
    pub fn from_graph(g: &Graph, parity: Parity) -> Self {
        let mut v = Self::new();
        v.add_oriented(&OrientedGraph::reference(g.clone(), parity), &q(1));
        v
    }

    pub fn single(form: Form, c: Q) -> Self {
        let mut v = Self::new();
        v.add_term(form, c);
        v
    }

    pub fn add_term(&mut self, form: Form, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.entries.entry(form.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.entries.remove(&form);
        }
    }

    /// Adds `c` times an oriented graph; classes killed by symmetry drop out.
    pub fn add_oriented(&mut self, og: &OrientedGraph, c: &Q) {
        let can = canonicalize(og);
        if let Some(s) = can.sign {
            self.add_term(can.form, c * q(s as i64));
        }
    }

    pub fn add_scaled(&mut self, other: &GraphVector, c: &Q) {
        for (f, x) in &other.entries {
            self.add_term(f.clone(), x * c);
        }
    }

    pub fn scaled(&self, c: &Q) -> GraphVector {
        let mut v = GraphVector::new();
        v.add_scaled(self, c);
        v
    }

    pub fn sub(&self, other: &GraphVector) -> GraphVector {
        let mut v = self.clone();
        v.add_scaled(other, &-q(1));
        v
    }

    pub fn coeff(&self, f: &Form) -> Q {
        self.entries.get(f).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Form, &Q)> {
        self.entries.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &Form> {
        self.entries.keys()
    }

    /// Text form: one `coefficient key` pair per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (f, c) in &self.entries {
            s.push_str(&alloc::format!("{} {}\n", c, f));
        }
        s
    }
}

impl FromIterator<(Form, Q)> for GraphVector {
    fn from_iter<I: IntoIterator<Item = (Form, Q)>>(iter: I) -> Self {
        let mut v = GraphVector::new();
        for (f, c) in iter {
            v.add_term(f, c);
        }
        v
    }
}

impl fmt::Display for GraphVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let a = c.abs();
            if !a.is_one() {
                write!(f, "{}*", a)?;
            }
            write!(f, "[{}]", k)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_form;
    use crate::graph::named;

    #[test]
    fn cancelling_terms_leave_no_entry() {
        let f = canonical_form(&named::polygon(2));
        let mut v = GraphVector::single(f.clone(), q_frac(1, 2));
        v.add_term(f.clone(), q_frac(-1, 2));
        assert!(v.is_zero() && v.is_empty());
        assert_eq!(v.coeff(&f), Q::zero());
        assert_eq!(alloc::format!("{v}"), "0");
    }

    #[test]
    fn negated_orientation_gives_the_negative_class() {
        let p = Parity::new(true, true);
        let g = named::wheel(2);
        let mut v = GraphVector::from_graph(&g, p);
        v.add_oriented(&OrientedGraph::reference(g, p).negated(), &q(1));
        assert!(v.is_zero());
    }

    #[test]
    fn sub_and_scale() {
        let a = GraphVector::single(canonical_form(&named::polygon(2)), q(3));
        let b = GraphVector::single(canonical_form(&named::wheel(2)), q(-1));
        let mut s = a.clone();
        s.add_scaled(&b, &q(2));
        assert_eq!(s.sub(&a), b.scaled(&q(2)));
        assert_eq!(s.len(), 2);
        assert_eq!(s.to_text().lines().count(), 2);
    }
}
