//! Undirected simple graphs with a declared degree bound, their text format,
//! and the brute-force adjacency oracle every scheme is checked against.

mod family;
mod generate;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use family::{is_outerplanar, is_planar, validate_family};
pub use generate::generate;

/// Graph families the schemes distinguish between.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyTag {
    Tree,
    Outerplanar,
    Planar,
    General,
}

impl FamilyTag {
    pub fn as_str(self) -> &'static str {
        match self {
            FamilyTag::Tree => "tree",
            FamilyTag::Outerplanar => "outerplanar",
            FamilyTag::Planar => "planar",
            FamilyTag::General => "general",
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tree" => Ok(FamilyTag::Tree),
            "outerplanar" => Ok(FamilyTag::Outerplanar),
            "planar" => Ok(FamilyTag::Planar),
            "general" => Ok(FamilyTag::General),
            _ => Err(Error::InvalidArgument(format!("unknown family {s:?}"))),
        }
    }
}

/// A simple undirected graph on vertices `0..n`.
///
/// Edges are stored normalized (`u < v`) and sorted; `adj[v]` is sorted.
/// The optional outer order is a cyclic vertex order in which no two edges
/// cross, recorded by the outerplanar generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    delta: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    outer_order: Option<Vec<usize>>,
}

impl Graph {
    /// Builds and validates a graph. Edge endpoints may be given in either order.
    pub fn new(n: usize, delta: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut norm = Vec::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop at {u}")));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &norm {
            adj[u].push(v);
            adj[v].push(u);
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.len() > delta {
                return Err(Error::DegreeExceeded { vertex: v, degree: list.len(), delta });
            }
        }
        Ok(Graph { n, delta, edges: norm, adj, outer_order: None })
    }

    /// Attaches a cyclic outer order; it must be a permutation of the vertices.
    pub fn with_outer_order(mut self, order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; self.n];
        if order.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "outer order has {} entries for {} vertices",
                order.len(),
                self.n
            )));
        }
        for &v in &order {
            if v >= self.n {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidArgument(format!("vertex {v} repeated in outer order")));
            }
        }
        self.outer_order = Some(order);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn outer_order(&self) -> Option<&[usize]> {
        self.outer_order.as_deref()
    }

    /// Adjacency test on in-range vertices.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.adj[u].binary_search(&v).is_ok()
    }

    /// Ground-truth adjacency: true iff `{u, v}` is an edge.
    pub fn oracle_adjacent(&self, u: usize, v: usize) -> Result<bool> {
        for x in [u, v] {
            if x >= self.n {
                return Err(Error::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        Ok(self.has_edge(u, v))
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut i = 0;
            while i < members.len() {
                let v = members[i];
                i += 1;
                for &w in &self.adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Parent pointers of a BFS forest rooted at each component's smallest vertex.
    /// Returns `None` when the graph has a cycle.
    pub fn forest_parents(&self) -> Option<Vec<Option<usize>>> {
        if self.m() + self.components().len() != self.n {
            return None;
        }
        let mut parent = vec![None; self.n];
        let mut seen = vec![false; self.n];
        for root in 0..self.n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = Some(v);
                        queue.push_back(w);
                    }
                }
            }
        }
        Some(parent)
    }

    /// Serializes to the graph file format.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.n, self.m(), self.delta);
        for &(u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        if let Some(order) = &self.outer_order {
            s.push_str("order:");
            for v in order {
                s.push_str(&format!(" {v}"));
            }
            s.push('\n');
        }
        s
    }

    /// Parses the graph file format: `n m delta`, then `m` lines `u v`,
    /// optionally followed by `order: v0 v1 ...`. Lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hl, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
        let head = parse_numbers(hl, header)?;
        let [n, m, delta] = head[..] else {
            return Err(Error::Parse { line: hl, msg: "header must be `n m delta`".into() });
        };

        let mut edges = Vec::with_capacity(m);
        let mut order = None;
        for (ln, line) in lines {
            if let Some(rest) = line.strip_prefix("order:") {
                if order.is_some() {
                    return Err(Error::Parse { line: ln, msg: "repeated order line".into() });
                }
                order = Some(parse_numbers(ln, rest)?);
                continue;
            }
            if order.is_some() {
                return Err(Error::Parse { line: ln, msg: "content after order line".into() });
            }
            let uv = parse_numbers(ln, line)?;
            let [u, v] = uv[..] else {
                return Err(Error::Parse { line: ln, msg: "edge line must be `u v`".into() });
            };
            if u == v {
                return Err(Error::Parse { line: ln, msg: format!("self-loop at {u}") });
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: hl,
                msg: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        let g = Graph::new(n, delta, edges)?;
        match order {
            Some(o) => g.with_outer_order(o),
            None => Ok(g),
        }
    }
}

fn parse_numbers(line: usize, s: &str) -> Result<Vec<usize>> {
    s.split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::Parse { line, msg: format!("not a nonnegative integer: {t:?}") })
        })
        .collect()
}
