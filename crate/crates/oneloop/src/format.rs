//! Graph-vector files.
//!
//! Two encodings are accepted. JSON:
//!
//! ```json
//! {"parity": "odd,even", "terms": [{"coef": "1/2", "graph": "V:ii;E:eta,0,1;theta,0,1"}]}
//! ```
//!
//! and plain text, one `<coef> <graph>` per line with `#` comments, which is
//! what [`GraphVector::to_text`] writes. Graphs may use any vertex ids; each
//! term stands for the graph with its reference orientation in the ids given.

use oneloop_core::canon::canonical_form;
use oneloop_core::vector::Q;
use oneloop_core::{Graph, GraphVector, Parity};
use serde::{Deserialize, Serialize};

use crate::error::AppError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coef: String,
    pub graph: String,
}

#[derive(Debug, Deserialize)]
struct VectorFile {
    #[serde(default)]
    parity: Option<String>,
    terms: Vec<Term>,
}

/// A parsed input: the graphs as written, before canonicalization, so the
/// parity can be supplied later.
#[derive(Clone, Debug)]
pub struct InputVector {
    pub parity: Option<Parity>,
    pub terms: Vec<(Q, Graph)>,
}

impl InputVector {
    pub fn order(&self) -> Option<usize> {
        let mut it = self.terms.iter().map(|(_, g)| g.order());
        let k = it.next()?;
        it.all(|o| o == k).then_some(k)
    }

    pub fn to_vector(&self, parity: Parity) -> GraphVector {
        let mut v = GraphVector::new();
        for (c, g) in &self.terms {
            v.add_scaled(&GraphVector::from_graph(g, parity), c);
        }
        v
    }
}

pub fn parse_parity(s: &str) -> Result<Parity, AppError> {
    Parity::parse(s).ok_or_else(|| AppError::Usage(format!("bad parity {s:?}, expected e.g. odd,even")))
}

fn parse_term(coef: &str, graph: &str) -> Result<(Q, Graph), AppError> {
    let c: Q = coef
        .trim()
        .parse()
        .map_err(|_| AppError::Input(format!("bad coefficient {coef:?}")))?;
    let g = Graph::parse(graph).map_err(|e| AppError::Input(format!("{graph}: {e}")))?;
    g.validate().map_err(|e| AppError::Input(format!("{graph}: {e}")))?;
    Ok((c, g))
}

pub fn parse_vector(src: &str) -> Result<InputVector, AppError> {
    if src.trim_start().starts_with('{') {
        let file: VectorFile = serde_json::from_str(src).map_err(|e| AppError::Input(e.to_string()))?;
        let parity = file.parity.as_deref().map(parse_parity).transpose()?;
        let terms = file
            .terms
            .iter()
            .map(|t| parse_term(&t.coef, &t.graph))
            .collect::<Result<_, _>>()?;
        return Ok(InputVector { parity, terms });
    }
    let mut terms = Vec::new();
    for line in src.lines() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (c, g) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| AppError::Input(format!("expected `<coef> <graph>`, got {line:?}")))?;
        terms.push(parse_term(c, g)?);
    }
    Ok(InputVector { parity: None, terms })
}

pub fn read_vector(path: &str) -> Result<InputVector, AppError> {
    let src = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
    parse_vector(&src)
}

pub fn terms(v: &GraphVector) -> Vec<Term> {
    v.iter().map(|(f, c)| Term { coef: c.to_string(), graph: f.to_string() }).collect()
}

/// Canonical serialization of a graph given in any ids.
pub fn canonical_string(g: &Graph) -> String {
    canonical_form(g).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use oneloop_core::graph::named;
    use oneloop_core::vector::q;

    #[test]
    fn text_and_json_agree() {
        let g = named::polygon(2).serialize();
        let text = format!("# a comment\n2 {g}\n");
        let json = format!(r#"{{"parity":"odd,odd","terms":[{{"coef":"2","graph":"{g}"}}]}}"#);
        let a = parse_vector(&text).unwrap();
        let b = parse_vector(&json).unwrap();
        let p = Parity::new(true, true);
        assert_eq!(a.to_vector(p), b.to_vector(p));
        assert_eq!(b.parity, Some(p));
        assert_eq!(a.order(), Some(2));
    }

    #[test]
    fn round_trip_through_to_text() {
        let p = Parity::new(true, false);
        let v = GraphVector::from_graph(&named::wheel(3), p).scaled(&q(-3));
        let back = parse_vector(&v.to_text()).unwrap().to_vector(p);
        assert_eq!(back, v);
    }

    #[test]
    fn invalid_graph_is_an_input_error() {
        let err = parse_vector("1 V:ie;E:eta,0,1").unwrap_err();
        assert!(matches!(err, AppError::Input(_)));
    }
}
