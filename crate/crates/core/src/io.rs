//! JSON file formats.
//!
//! ```json
//! {"size": 3, "labels": ["a", "b", "c"]}                        // universe
//! {"probs": ["1/2", 0.25, "0.25"]}                              // distribution
//! {"universe": {"size": 3}, "arity": 2, "edges": [[0, 0], [1, 2]]}  // hypergraph
//! {"universe": {"size": 3}, "arity": 1, "graphs": [{"edges": [[0]]}, {"edges": []}]}  // class
//! {"universe": {"size": 3}, "vertices": [0, 2, 2, 1]}           // sample
//! ```
//!
//! Probabilities may be JSON numbers or strings (`"a/b"`, decimals); both
//! are read exactly. Writers emit probabilities as strings. Edges must be
//! sorted and unique: loaders reject anything else instead of repairing it.
//! A distribution's universe defaults to one vertex per probability.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::class::DistinguishingClass;
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::hypergraph::{Edge, Hypergraph};
use crate::sample::Sample;
use crate::scalar::{parse_exact, Exact, Scalar};
use crate::universe::{Universe, Vertex, VertexUniverse};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub universe: Option<VertexUniverse>,
    pub probs: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypergraphFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub universe: Option<VertexUniverse>,
    pub arity: usize,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity: Option<usize>,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassFile {
    pub universe: VertexUniverse,
    pub arity: usize,
    pub graphs: Vec<MemberFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub universe: Option<VertexUniverse>,
    pub vertices: Vec<Vertex>,
}

/// Resolves the universe a loaded object lives on. With a `host`, the file
/// must agree with it (or omit its universe and match its size).
fn resolve(
    file: Option<&VertexUniverse>,
    size: Option<usize>,
    host: Option<&Universe>,
) -> Result<Universe> {
    let declared = match file {
        Some(u) => Some(VertexUniverse::build(
            u.size(),
            u.labels().map(<[String]>::to_vec),
        )?),
        None => None,
    };
    if let (Some(d), Some(s)) = (&declared, size) {
        if d.size() != s {
            return Err(Error::Format(format!(
                "universe has {} vertices but the file describes {s}",
                d.size()
            )));
        }
    }
    match (declared, host) {
        (Some(d), Some(h)) if *d == **h => Ok(h.clone()),
        (Some(_), Some(_)) => Err(Error::UniverseMismatch),
        (None, Some(h)) => match size {
            Some(s) if s != h.size() => Err(Error::UniverseMismatch),
            _ => Ok(h.clone()),
        },
        (Some(d), None) => Ok(d),
        (None, None) => match size {
            Some(s) => VertexUniverse::new(s),
            None => Err(Error::Format("file does not declare a universe".into())),
        },
    }
}

fn parse_prob(v: &Value) -> Result<Exact> {
    match v {
        Value::Number(n) => parse_exact(&n.to_string()),
        Value::String(s) => parse_exact(s),
        other => Err(Error::Format(format!(
            "probability {other} is neither a number nor a string"
        ))),
    }
}

impl DistributionFile {
    pub fn into_distribution<T: Scalar>(self, host: Option<&Universe>) -> Result<Distribution<T>> {
        let universe = resolve(self.universe.as_ref(), Some(self.probs.len()), host)?;
        let exact = self
            .probs
            .iter()
            .map(parse_prob)
            .collect::<Result<Vec<_>>>()?;
        let exact = Distribution::new(universe, exact)?;
        convert(&exact)
    }

    pub fn from_distribution<T: Scalar>(p: &Distribution<T>) -> Self {
        DistributionFile {
            universe: p.universe().labels().map(|_| (**p.universe()).clone()),
            probs: p
                .probs()
                .iter()
                .map(|x| Value::String(x.render()))
                .collect(),
        }
    }
}

fn convert<T: Scalar>(p: &Distribution<Exact>) -> Result<Distribution<T>> {
    Distribution::new(
        p.universe().clone(),
        p.probs().iter().map(T::from_exact).collect(),
    )
}

impl HypergraphFile {
    pub fn into_hypergraph(self, host: Option<&Universe>) -> Result<Hypergraph> {
        let universe = resolve(self.universe.as_ref(), None, host)?;
        Hypergraph::from_canonical_edges(universe, self.arity, self.edges)
    }

    pub fn from_hypergraph(g: &Hypergraph) -> Self {
        HypergraphFile {
            universe: Some((**g.universe()).clone()),
            arity: g.arity(),
            edges: g.edges().iter().cloned().collect(),
        }
    }
}

impl ClassFile {
    pub fn into_class(self, host: Option<&Universe>) -> Result<DistinguishingClass> {
        let universe = resolve(Some(&self.universe), None, host)?;
        let graphs = self
            .graphs
            .into_iter()
            .map(|m| {
                if let Some(a) = m.arity {
                    if a != self.arity {
                        return Err(Error::ArityMismatch {
                            expected: self.arity,
                            found: a,
                        });
                    }
                }
                Hypergraph::from_canonical_edges(universe.clone(), self.arity, m.edges)
            })
            .collect::<Result<Vec<_>>>()?;
        DistinguishingClass::new(graphs)
    }

    pub fn from_class(c: &DistinguishingClass) -> Self {
        ClassFile {
            universe: (**c.universe()).clone(),
            arity: c.arity(),
            graphs: c
                .graphs()
                .iter()
                .map(|g| MemberFile {
                    arity: None,
                    edges: g.edges().iter().cloned().collect(),
                })
                .collect(),
        }
    }
}

impl SampleFile {
    pub fn into_sample(self, host: Option<&Universe>) -> Result<Sample> {
        let universe = resolve(self.universe.as_ref(), None, host)?;
        Sample::new(universe, self.vertices)
    }

    pub fn from_sample(s: &Sample) -> Self {
        SampleFile {
            universe: Some((**s.universe()).clone()),
            vertices: s.vertices().to_vec(),
        }
    }
}

pub fn parse_distribution<T: Scalar>(
    text: &str,
    host: Option<&Universe>,
) -> Result<Distribution<T>> {
    serde_json::from_str::<DistributionFile>(text)?.into_distribution(host)
}

pub fn parse_hypergraph(text: &str, host: Option<&Universe>) -> Result<Hypergraph> {
    serde_json::from_str::<HypergraphFile>(text)?.into_hypergraph(host)
}

pub fn parse_class(text: &str) -> Result<DistinguishingClass> {
    serde_json::from_str::<ClassFile>(text)?.into_class(None)
}

pub fn parse_sample(text: &str, host: Option<&Universe>) -> Result<Sample> {
    serde_json::from_str::<SampleFile>(text)?.into_sample(host)
}
