use super::{InteractionGraph, WeightMatrix};
use crate::{Error, Result};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// `{"n": int, "edges": [[i, j], ...], "weights": optional n x n array}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Vec<f64>>>,
}

impl GraphSpec {
    pub fn from_graph(graph: &InteractionGraph) -> Self {
        GraphSpec {
            n: graph.n(),
            edges: graph.edges().iter().map(|&(a, b)| [a, b]).collect(),
            weights: None,
        }
    }

    pub fn build(&self) -> Result<(InteractionGraph, Option<WeightMatrix>)> {
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        let graph = InteractionGraph::from_edge_list(self.n, &edges)?;
        let weights = match &self.weights {
            None => None,
            Some(rows) => {
                if rows.len() != self.n {
                    return Err(Error::InvalidGraph(format!(
                        "weights has {} rows, expected {}",
                        rows.len(),
                        self.n
                    )));
                }
                if let Some((r, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != self.n) {
                    return Err(Error::InvalidGraph(format!(
                        "weights[{r}] has {} entries, expected {}",
                        row.len(),
                        self.n
                    )));
                }
                let g = DMatrix::from_fn(self.n, self.n, |r, c| rows[r][c]);
                Some(WeightMatrix::new(g)?)
            }
        };
        Ok((graph, weights))
    }
}

pub fn parse_graph(json: &str) -> Result<(InteractionGraph, Option<WeightMatrix>)> {
    let spec: GraphSpec = serde_json::from_str(json)?;
    spec.build()
}

pub fn load_graph(path: &Path) -> Result<(InteractionGraph, Option<WeightMatrix>)> {
    parse_graph(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let g = InteractionGraph::ring(5).unwrap();
        let json = serde_json::to_string(&GraphSpec::from_graph(&g)).unwrap();
        let (back, w) = parse_graph(&json).unwrap();
        assert_eq!(back, g);
        assert!(w.is_none());
    }

    #[test]
    fn weights_are_validated() {
        let ok = r#"{"n": 2, "edges": [[0, 1]], "weights": [[0, 0.5], [0.5, 0]]}"#;
        let (_, w) = parse_graph(ok).unwrap();
        assert_eq!(w.unwrap().pi(), &[0.5, 0.5]);
        let ragged = r#"{"n": 2, "edges": [[0, 1]], "weights": [[0, 0.5], [0.5]]}"#;
        assert!(parse_graph(ragged).unwrap_err().to_string().contains("weights[1]"));
        let bad_edge = r#"{"n": 2, "edges": [[0, 1], [1, 1]]}"#;
        assert!(parse_graph(bad_edge).unwrap_err().to_string().contains("edge 1"));
    }
}
