//! Finite simple graphs: parsing, connectivity, and the small-subgraph
//! enumeration (triangles, K₄'s) that indexes everything downstream.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: malformed edge line {content:?}")]
    MalformedLine { line: usize, content: String },
    #[error("line {line}: vertex {v} out of range (n = {n})")]
    VertexOutOfRange { line: usize, v: usize, n: usize },
    #[error("line {line}: loop edge at vertex {v}")]
    LoopEdge { line: usize, v: usize },
    #[error("line {line}: duplicate edge {i}-{j}")]
    DuplicateEdge { line: usize, i: usize, j: usize },
    #[error("missing vertex count")]
    MissingVertexCount,
    #[error("invalid JSON graph: {0}")]
    Json(String),
}

/// Simple graph on vertices `0..n`, edges stored sorted with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Deserialize)]
struct JsonGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph, normalizing edges to `i < j` and rejecting loops,
    /// duplicates, and out-of-range endpoints.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut normalized = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b {
                return Err(GraphError::LoopEdge { line: 0, v: a });
            }
            let (i, j) = (a.min(b), a.max(b));
            if j >= n {
                return Err(GraphError::VertexOutOfRange {
                    line: 0,
                    v: j,
                    n,
                });
            }
            if normalized.contains(&(i, j)) {
                return Err(GraphError::DuplicateEdge { line: 0, i, j });
            }
            normalized.push((i, j));
        }
        normalized.sort_unstable();
        Ok(Graph {
            n,
            edges: normalized,
        })
    }

    /// Parses the edge-list format (first nonblank line is `n`, then one
    /// `i j` pair per line, `#` comments) or, when the text starts with `{`,
    /// the JSON form `{"n": .., "edges": [[i,j],..]}`.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        if text.trim_start().starts_with('{') {
            let jg: JsonGraph =
                serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
            return Graph::new(jg.n, &jg.edges);
        }
        let mut n: Option<usize> = None;
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            match n {
                None => {
                    n = Some(content.parse().map_err(|_| GraphError::MalformedLine {
                        line,
                        content: content.to_string(),
                    })?);
                }
                Some(n) => {
                    let mut it = content.split_whitespace();
                    let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
                        return Err(GraphError::MalformedLine {
                            line,
                            content: content.to_string(),
                        });
                    };
                    let parse = |s: &str| {
                        s.parse::<usize>().map_err(|_| GraphError::MalformedLine {
                            line,
                            content: content.to_string(),
                        })
                    };
                    let (a, b) = (parse(a)?, parse(b)?);
                    if a == b {
                        return Err(GraphError::LoopEdge { line, v: a });
                    }
                    let (i, j) = (a.min(b), a.max(b));
                    if j >= n {
                        return Err(GraphError::VertexOutOfRange { line, v: j, n });
                    }
                    if edges.contains(&(i, j)) {
                        return Err(GraphError::DuplicateEdge { line, i, j });
                    }
                    edges.push((i, j));
                }
            }
        }
        let n = n.ok_or(GraphError::MissingVertexCount)?;
        edges.sort_unstable();
        Ok(Graph { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edge_index(a, b).is_some()
    }

    /// Position of edge `{a,b}` in the sorted edge list.
    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        let key = (a.min(b), a.max(b));
        self.edges.binary_search(&key).ok()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(i, j)| {
                if i == v {
                    Some(j)
                } else if j == v {
                    Some(i)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Partition of the vertex set into maximal connected pieces, each sorted,
    /// ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut queue = vec![start];
            while let Some(v) = queue.pop() {
                for u in self.neighbors(v) {
                    if !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                        queue.push(u);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// All triangles `{i<j<k}` with every edge present, lexicographic.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if !self.has_edge(i, j) {
                    continue;
                }
                for k in j + 1..self.n {
                    if self.has_edge(i, k) && self.has_edge(j, k) {
                        out.push([i, j, k]);
                    }
                }
            }
        }
        out
    }

    /// All complete quadruples `{i<j<k<l}`, lexicographic.
    pub fn k4_subgraphs(&self) -> Vec<[usize; 4]> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if !self.has_edge(i, j) {
                    continue;
                }
                for k in j + 1..self.n {
                    if !(self.has_edge(i, k) && self.has_edge(j, k)) {
                        continue;
                    }
                    for l in k + 1..self.n {
                        if self.has_edge(i, l) && self.has_edge(j, l) && self.has_edge(k, l) {
                            out.push([i, j, k, l]);
                        }
                    }
                }
            }
        }
        out
    }

    /// Shape criterion for `b₁(F(0,Γ)) = 0`: every connected component is a
    /// tree, or is unicyclic with an odd cycle.
    pub fn b1_zero_by_shape(&self) -> bool {
        self.connected_components().iter().all(|comp| {
            let in_comp = |v: usize| comp.binary_search(&v).is_ok();
            let ecount = self
                .edges
                .iter()
                .filter(|&&(i, _)| in_comp(i))
                .count();
            if ecount + 1 == comp.len() {
                return true; // tree
            }
            if ecount != comp.len() {
                return false; // at least two independent cycles
            }
            // unicyclic: strip degree-1 vertices until only the cycle remains
            let mut deg: std::collections::HashMap<usize, usize> = comp.iter().map(|&v| (v, 0)).collect();
            let mut live: Vec<(usize, usize)> = self
                .edges
                .iter()
                .copied()
                .filter(|&(i, _)| in_comp(i))
                .collect();
            for &(i, j) in &live {
                *deg.get_mut(&i).unwrap() += 1;
                *deg.get_mut(&j).unwrap() += 1;
            }
            loop {
                let Some(&leaf) = deg.iter().find(|&(_, &d)| d == 1).map(|(v, _)| v) else {
                    break;
                };
                live.retain(|&(i, j)| {
                    if i == leaf || j == leaf {
                        *deg.get_mut(&i).unwrap() -= 1;
                        *deg.get_mut(&j).unwrap() -= 1;
                        false
                    } else {
                        true
                    }
                });
                deg.remove(&leaf);
            }
            live.len() % 2 == 1
        })
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Graph { n, edges }
    }

    /// Cycle `0-1-...-(n-1)-0`; requires `n ≥ 3`.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        edges.push((0, n - 1));
        edges.sort_unstable();
        Graph { n, edges }
    }

    pub fn edgeless(n: usize) -> Graph {
        Graph { n, edges: Vec::new() }
    }

    /// Path `0-1-...-(n-1)`.
    pub fn path(n: usize) -> Graph {
        Graph {
            n,
            edges: (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
        }
    }

    /// Every labeled simple graph on `n` vertices, one per subset of the
    /// `C(n,2)` possible edges, in subset-mask order.
    pub fn all_labeled(n: usize) -> impl Iterator<Item = Graph> {
        let all_edges: Vec<(usize, usize)> = Graph::complete(n).edges.clone();
        let count = 1usize << all_edges.len();
        (0..count).map(move |mask| {
            let edges = all_edges
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            Graph { n, edges }
        })
    }
}

impl std::fmt::Display for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "n={} E={{", self.n)?;
        for (k, (i, j)) in self.edges.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}-{j}")?;
        }
        write!(f, "}}")
    }
}
