//! Interaction graphs.
//!
//! A [`Graph`] is simple, undirected and connected. Vertices are dense ids
//! `0..n`; adjacency is stored in compressed rows so a sweep over the whole
//! population touches one contiguous array.

use std::collections::VecDeque;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    /// Side length when the graph was built as a periodic lattice.
    lattice_side: Option<usize>,
}

impl Graph {
    /// Periodic square lattice with Von Neumann neighborhood.
    ///
    /// Vertex `(r, c)` has id `r * side + c`; its neighbors are listed as up,
    /// down, left, right. With `side == 2` the wrap-around makes up/down (and
    /// left/right) coincide, so each vertex ends up with degree 2.
    pub fn periodic_lattice(side: usize) -> Result<Graph> {
        if side < 2 {
            return Err(Error::InvalidParameter(format!(
                "lattice side must be at least 2, got {side}"
            )));
        }
        if side == 2 {
            log::warn!("lattice side 2 is degenerate: torus wrap-around merges edges, degree is 2");
        }
        let n = side * side;
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(4 * n);
        offsets.push(0);
        for r in 0..side {
            for c in 0..side {
                let up = ((r + side - 1) % side) * side + c;
                let down = ((r + 1) % side) * side + c;
                let left = r * side + (c + side - 1) % side;
                let right = r * side + (c + 1) % side;
                for v in [up, down, left, right] {
                    let row = &targets[offsets[offsets.len() - 1]..];
                    if !row.contains(&v) {
                        targets.push(v);
                    }
                }
                offsets.push(targets.len());
            }
        }
        Ok(Graph {
            offsets,
            targets,
            lattice_side: Some(side),
        })
    }

    /// Builds and validates a graph from an undirected edge list.
    ///
    /// Neighbor lists are sorted ascending. Self-loops, repeated edges (in
    /// either orientation) and disconnected inputs are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "a graph needs at least 2 vertices, got {n}"
            )));
        }
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::InvalidVertex { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if adjacency[u].contains(&v) {
                return Err(Error::DuplicateEdge(u, v));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(2 * edges.len());
        offsets.push(0);
        for mut row in adjacency {
            row.sort_unstable();
            targets.extend(row);
            offsets.push(targets.len());
        }
        let graph = Graph {
            offsets,
            targets,
            lattice_side: None,
        };
        if let Some(v) = graph.first_unreachable() {
            return Err(Error::Disconnected(v));
        }
        Ok(graph)
    }

    /// Parses the plain-text edge-list format: first non-comment line is `n`,
    /// every following line is `u v`. Text after `#` is ignored.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut n = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|e| Error::EdgeListFormat {
                    line,
                    reason: format!("{s:?}: {e}"),
                })
            };
            match (n, fields.as_slice()) {
                (None, [count]) => n = Some(parse(count)?),
                (None, _) => {
                    return Err(Error::EdgeListFormat {
                        line,
                        reason: "expected the vertex count on its own line".into(),
                    })
                }
                (Some(_), [u, v]) => edges.push((parse(u)?, parse(v)?)),
                (Some(_), _) => {
                    return Err(Error::EdgeListFormat {
                        line,
                        reason: format!("expected `u v`, got {content:?}"),
                    })
                }
            }
        }
        let n = n.ok_or(Error::EdgeListFormat {
            line: 0,
            reason: "missing vertex count".into(),
        })?;
        Graph::from_edges(n, &edges)
    }

    pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Graph::parse_edge_list(&text)
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn lattice_side(&self) -> Option<usize> {
        self.lattice_side
    }

    /// Neighborhood `V_u`, checked.
    pub fn neighborhood(&self, u: usize) -> Result<&[usize]> {
        if u >= self.vertex_count() {
            return Err(Error::InvalidVertex {
                vertex: u,
                n: self.vertex_count(),
            });
        }
        Ok(self.neighbors(u))
    }

    /// Neighborhood `V_u`; panics if `u` is out of range.
    #[inline]
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count())
            .flat_map(move |u| self.neighbors(u).iter().map(move |&v| (u, v)))
            .filter(|&(u, v)| u < v)
    }

    pub fn is_connected(&self) -> bool {
        self.first_unreachable().is_none()
    }

    fn first_unreachable(&self) -> Option<usize> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen.iter().position(|&s| !s)
    }
}
