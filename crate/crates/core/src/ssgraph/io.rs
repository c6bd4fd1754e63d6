use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::SsGraph;
use crate::error::{Error, Result};
use crate::ff::{FieldCtx, FieldElem};

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct VertexJson {
    pub j: String,
    pub w2: u32,
}

/// `{"p", "ell", "vertices": [{"j", "w2"}], "edges": [[i, k, mult]]}`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct GraphJson {
    pub p: u64,
    pub ell: u64,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[u64; 3]>,
}

impl SsGraph {
    pub fn to_json(&self) -> GraphJson {
        let mut edges = Vec::new();
        for (i, row) in self.adj.iter().enumerate() {
            for (k, &m) in row.iter().enumerate() {
                if m > 0 {
                    edges.push([i as u64, k as u64, m as u64]);
                }
            }
        }
        GraphJson {
            p: self.p,
            ell: self.ell,
            vertices: self
                .vertices
                .iter()
                .zip(&self.w2)
                .map(|(j, &w2)| VertexJson { j: j.to_string(), w2 })
                .collect(),
            edges,
        }
    }

    /// Parses the JSON form. Structure is checked (sorted distinct vertices,
    /// indices in range); graph identities are left to [`SsGraph::validate`].
    pub fn from_json_str(s: &str) -> Result<SsGraph> {
        let raw: GraphJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let ctx = FieldCtx::fp2(raw.p).map_err(|e| Error::Parse(e.to_string()))?;
        let vertices = raw
            .vertices
            .iter()
            .map(|v| FieldElem::parse(&ctx, &v.j))
            .collect::<Result<Vec<_>>>()?;
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse("vertices must be strictly increasing".into()));
        }
        let h = vertices.len();
        if h > 100_000 {
            return Err(Error::Parse("too many vertices".into()));
        }
        let mut adj = vec![vec![0u32; h]; h];
        for &[i, k, m] in &raw.edges {
            let (i, k) = (i as usize, k as usize);
            if i >= h || k >= h || m == 0 || m > u32::MAX as u64 {
                return Err(Error::Parse(format!("bad edge [{i}, {k}, {m}]")));
            }
            if adj[i][k] != 0 {
                return Err(Error::Parse(format!("duplicate edge [{i}, {k}]")));
            }
            adj[i][k] = m as u32;
        }
        Ok(SsGraph { p: raw.p, ell: raw.ell, vertices, w2: raw.vertices.iter().map(|v| v.w2).collect(), adj })
    }

    /// Graphviz form with one `->` line per edge (parallel edges repeated).
    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"G({},{})\" {{", self.p, self.ell);
        for (i, j) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "  v{i} [label=\"{j}\"];");
        }
        for (i, row) in self.adj.iter().enumerate() {
            for (k, &m) in row.iter().enumerate() {
                for _ in 0..m {
                    let _ = writeln!(s, "  v{i} -> v{k};");
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::super::build_graph;
    use super::*;

    #[test]
    fn json_round_trip_and_dot() {
        let g = build_graph(101, 2).unwrap();
        let text = serde_json::to_string(&g.to_json()).unwrap();
        let back = SsGraph::from_json_str(&text).unwrap();
        assert_eq!(back, g);
        back.validate().unwrap();
        let dot = g.to_dot();
        assert_eq!(dot.matches("->").count(), 9 * 3);
        assert!(SsGraph::from_json_str(r#"{"p":101,"ell":2,"vertices":[{"j":"1","w2":2}],"edges":[[0,3,1]]}"#).is_err());
    }
}
