//! JSON documents for fatgraphs and abstract graphs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fatgraph::{AbstractGraph, Fatgraph, RawEdge, RawFatgraph, Sign};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub id: i64,
    pub rotation: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub id: i64,
    pub halves: [i64; 2],
    #[serde(default)]
    pub sign: Sign,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphEntry {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

/// Either a rotation system or an abstract graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FatgraphDocument {
    Fatgraph {
        vertices: Vec<VertexEntry>,
        #[serde(default)]
        edges: Vec<EdgeEntry>,
    },
    Graph {
        graph: GraphEntry,
    },
}

impl FatgraphDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_fatgraph(fg: &Fatgraph) -> Self {
        let vertices = fg
            .rotations()
            .iter()
            .enumerate()
            .map(|(i, r)| VertexEntry {
                id: i as i64,
                rotation: r.iter().map(|&h| h as i64).collect(),
            })
            .collect();
        let edges = fg
            .signs()
            .iter()
            .enumerate()
            .map(|(i, &sign)| EdgeEntry {
                id: i as i64,
                halves: [2 * i as i64, 2 * i as i64 + 1],
                sign,
            })
            .collect();
        FatgraphDocument::Fatgraph { vertices, edges }
    }

    pub fn from_graph(g: &AbstractGraph) -> Self {
        FatgraphDocument::Graph {
            graph: GraphEntry {
                n: g.n,
                edges: g.edges.iter().map(|&(a, b)| [a, b]).collect(),
            },
        }
    }

    /// The normalized fatgraph. Graph documents are rejected.
    pub fn fatgraph(&self) -> Result<Fatgraph> {
        match self {
            FatgraphDocument::Fatgraph { vertices, edges } => Fatgraph::from_raw(&RawFatgraph {
                vertices: vertices
                    .iter()
                    .map(|v| (v.id, v.rotation.clone()))
                    .collect(),
                edges: edges
                    .iter()
                    .map(|e| RawEdge {
                        id: e.id,
                        halves: e.halves,
                        sign: e.sign,
                    })
                    .collect(),
            }),
            FatgraphDocument::Graph { .. } => Err(Error::Parse(
                "expected a fatgraph with vertex rotations, found a graph".into(),
            )),
        }
    }

    /// The underlying graph of either form.
    pub fn graph(&self) -> Result<AbstractGraph> {
        match self {
            FatgraphDocument::Graph { graph } => {
                AbstractGraph::new(graph.n, graph.edges.iter().map(|&[a, b]| (a, b)).collect())
            }
            FatgraphDocument::Fatgraph { .. } => Ok(self.fatgraph()?.underlying_graph()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("documents serialize")
    }
}
