//! Vanishing criteria in odd codimension from long feathers and long
//! straight lines.

use alloc::vec::Vec;

use super::classify::{endings, Ending};
use crate::graph::Graph;
use crate::orientation::Parity;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VanishingReport {
    /// Some feather has length at least 2 + 1/2.
    pub feather_ge_5_halves: bool,
    /// Some straight line has length at least 5.
    pub line_ge_5: bool,
    /// Some straight line has length exactly 4, so it may be traded for a
    /// feather of length 2.
    pub line4_eq_feather2: bool,
    pub endings: Vec<Ending>,
}

impl VanishingReport {
    pub fn vanishes(&self) -> bool {
        self.feather_ge_5_halves || self.line_ge_5
    }
}

/// Flags for `g`. Returns `None` in even codimension, where these criteria do
/// not apply.
pub fn vanishing_predicates(g: &Graph, parity: Parity) -> Option<VanishingReport> {
    if parity.even_codim() {
        return None;
    }
    let endings = endings(g);
    Some(VanishingReport {
        feather_ge_5_halves: endings.iter().any(|e| e.feather_halves.is_some_and(|h| h >= 5)),
        line_ge_5: endings.iter().any(|e| e.line >= 5),
        line4_eq_feather2: endings.iter().any(|e| e.line == 4),
        endings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    #[test]
    fn polygon_has_no_flags() {
        let r = vanishing_predicates(&named::polygon(4), Parity::new(true, false)).unwrap();
        assert!(!r.vanishes() && !r.line4_eq_feather2);
        assert!(r.endings.is_empty());
    }

    #[test]
    fn even_codim_is_out_of_scope() {
        assert!(vanishing_predicates(&named::wheel(3), Parity::new(true, true)).is_none());
    }
}
