//! Schemes for arbitrary graphs of bounded degree: neighbor lists over an
//! Euler orientation, and concatenated tree labels over a forest decomposition.

use std::collections::VecDeque;

use crate::bits::{bit_width, ceil_log2, BitString};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scheme::outerplanar::{self, Decoder, Mode, SchemeConfig};

/// Every edge of the graph directed exactly once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    /// Heads of the outgoing original edges of each vertex, ascending.
    pub out: Vec<Vec<usize>>,
    /// Pairs of odd-degree vertices joined to make all degrees even.
    pub matching: Vec<(usize, usize)>,
}

impl Orientation {
    pub fn max_out(&self) -> usize {
        self.out.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Orients every edge along an Euler circuit of the graph plus a matching of
/// its odd-degree vertices, so each out-degree is at most `⌈deg/2⌉`.
pub fn euler_orient(g: &Graph) -> Orientation {
    let n = g.n();
    let odd: Vec<usize> = (0..n).filter(|&v| g.degree(v) % 2 == 1).collect();
    let matching: Vec<(usize, usize)> = odd.chunks_exact(2).map(|p| (p[0], p[1])).collect();

    let mut ends: Vec<(usize, usize)> = g.edges().to_vec();
    let original = ends.len();
    ends.extend(&matching);
    let mut inc: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(u, v)) in ends.iter().enumerate() {
        inc[u].push(e);
        inc[v].push(e);
    }

    let mut used = vec![false; ends.len()];
    let mut next = vec![0usize; n];
    let mut out = vec![Vec::new(); n];
    // every vertex has even degree, so each greedy walk closes where it started
    for start in 0..n {
        let mut x = start;
        loop {
            while next[x] < inc[x].len() && used[inc[x][next[x]]] {
                next[x] += 1;
            }
            let Some(&e) = inc[x].get(next[x]) else { break };
            used[e] = true;
            let (u, v) = ends[e];
            let y = if u == x { v } else { u };
            if e < original {
                out[x].push(y);
            }
            x = y;
        }
    }
    for o in &mut out {
        o.sort_unstable();
    }
    Orientation { out, matching }
}

/// Neighbor-list field widths: `(id bits, slot bits)`.
pub fn neighborlist_widths(n: usize) -> (u32, u32) {
    (ceil_log2(n as u64), bit_width(n as u64))
}

/// `id ∘ ⌈Δ/2⌉ slots` holding `out-neighbor + 1`, zero-filled.
pub fn encode_neighborlist(g: &Graph, delta: usize) -> Result<Vec<BitString>> {
    check_degree(g, delta)?;
    let o = euler_orient(g);
    let slots = delta.div_ceil(2);
    let (iw, sw) = neighborlist_widths(g.n());
    let mut labels = Vec::with_capacity(g.n());
    for (v, out) in o.out.iter().enumerate() {
        let mut s = BitString::with_capacity(iw as usize + slots * sw as usize);
        s.append_field(v as u64, iw)?;
        for i in 0..slots {
            s.append_field(out.get(i).map_or(0, |&u| u as u64 + 1), sw)?;
        }
        labels.push(s);
    }
    Ok(labels)
}

#[derive(Clone, Debug)]
pub struct NeighborListDecoder {
    slots: usize,
    id_width: u32,
    slot_width: u32,
}

impl NeighborListDecoder {
    pub fn new(n: usize, delta: usize) -> Self {
        let (id_width, slot_width) = neighborlist_widths(n);
        NeighborListDecoder { slots: delta.div_ceil(2), id_width, slot_width }
    }

    pub fn label_len(&self) -> usize {
        self.id_width as usize + self.slots * self.slot_width as usize
    }

    fn parse(&self, l: &BitString) -> Result<(u64, Vec<u64>)> {
        if l.len() != self.label_len() {
            return Err(Error::CorruptLabel(format!("label has {} bits, expected {}", l.len(), self.label_len())));
        }
        let id = l.read_field(0, self.id_width)?;
        let slots = (0..self.slots)
            .map(|i| l.read_field(self.id_width as usize + i * self.slot_width as usize, self.slot_width))
            .collect::<Result<Vec<_>>>()?;
        Ok((id, slots))
    }

    pub fn adjacent(&self, a: &BitString, b: &BitString) -> Result<bool> {
        let (ia, sa) = self.parse(a)?;
        let (ib, sb) = self.parse(b)?;
        Ok(ia != ib && (sa.contains(&(ib + 1)) || sb.contains(&(ia + 1))))
    }
}

/// Edge-disjoint forests covering every edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForestDecomposition {
    pub n: usize,
    /// Edge lists, one per forest.
    pub forests: Vec<Vec<(usize, usize)>>,
}

impl ForestDecomposition {
    pub fn count(&self) -> usize {
        self.forests.len()
    }

    pub fn forest_graph(&self, i: usize, delta: usize) -> Result<Graph> {
        Graph::new(self.n, delta, self.forests[i].iter().copied())
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

struct Forests {
    ends: Vec<(usize, usize)>,
    owner: Vec<Option<usize>>,
    adj: Vec<Vec<Vec<(usize, usize)>>>,
}

impl Forests {
    fn insert(&mut self, e: usize, f: usize) {
        let (u, v) = self.ends[e];
        self.adj[f][u].push((v, e));
        self.adj[f][v].push((u, e));
        self.owner[e] = Some(f);
    }

    fn remove(&mut self, e: usize) {
        let Some(f) = self.owner[e].take() else { return };
        let (u, v) = self.ends[e];
        self.adj[f][u].retain(|&(_, x)| x != e);
        self.adj[f][v].retain(|&(_, x)| x != e);
    }

    fn add_forest(&mut self, n: usize) {
        self.adj.push(vec![Vec::new(); n]);
    }

    /// Edges of the path between `a` and `b` in forest `f`, if connected.
    fn path(&self, f: usize, a: usize, b: usize) -> Option<Vec<usize>> {
        let adj = &self.adj[f];
        let mut via: std::collections::HashMap<usize, (usize, usize)> = Default::default();
        via.insert(a, (a, usize::MAX));
        let mut q = VecDeque::from([a]);
        while let Some(x) = q.pop_front() {
            if x == b {
                let mut path = Vec::new();
                let mut y = b;
                while y != a {
                    let (p, e) = via[&y];
                    path.push(e);
                    y = p;
                }
                return Some(path);
            }
            for &(y, e) in &adj[x] {
                via.entry(y).or_insert_with(|| {
                    q.push_back(y);
                    (x, e)
                });
            }
        }
        None
    }

    /// Inserts the unplaced edge `e0` through a shortest exchange sequence.
    fn augment(&mut self, e0: usize) -> bool {
        let k = self.adj.len();
        let mut prev: std::collections::HashMap<usize, Option<usize>> = Default::default();
        prev.insert(e0, None);
        let mut q = VecDeque::from([e0]);
        while let Some(x) = q.pop_front() {
            let (a, b) = self.ends[x];
            for f in 0..k {
                if self.owner[x] == Some(f) {
                    continue;
                }
                match self.path(f, a, b) {
                    None => {
                        let (mut cur, mut target) = (x, f);
                        loop {
                            let old = self.owner[cur];
                            self.remove(cur);
                            self.insert(cur, target);
                            match prev[&cur] {
                                Some(p) => {
                                    target = old.expect("exchanged edge has a forest");
                                    cur = p;
                                }
                                None => return true,
                            }
                        }
                    }
                    Some(path) => {
                        for e in path {
                            prev.entry(e).or_insert_with(|| {
                                q.push_back(e);
                                Some(x)
                            });
                        }
                    }
                }
            }
        }
        false
    }
}

/// Partitions the edges into acyclic forests, aiming for `max(1, ⌈Δ/2⌉)` and
/// adding a forest only when no exchange sequence can place an edge.
pub fn forest_decompose(g: &Graph, delta: usize) -> Result<ForestDecomposition> {
    check_degree(g, delta)?;
    let n = g.n();
    let target = delta.div_ceil(2).max(1);
    let ends = g.edges().to_vec();
    let mut dsu: Vec<Dsu> = (0..target).map(|_| Dsu((0..n).collect())).collect();
    let mut fs = Forests { owner: vec![None; ends.len()], adj: Vec::new(), ends };
    for _ in 0..target {
        fs.add_forest(n);
    }
    let mut left = Vec::new();
    for e in 0..fs.ends.len() {
        let (u, v) = fs.ends[e];
        match (0..target).find(|&f| dsu[f].union(u, v)) {
            Some(f) => fs.insert(e, f),
            None => left.push(e),
        }
    }
    for e in left {
        if !fs.augment(e) {
            fs.add_forest(n);
            let f = fs.adj.len() - 1;
            fs.insert(e, f);
        }
    }
    let mut forests = vec![Vec::new(); fs.adj.len()];
    for (e, &(u, v)) in fs.ends.iter().enumerate() {
        let f = fs.owner[e].ok_or_else(|| Error::Internal(format!("edge {{{u}, {v}}} left unplaced")))?;
        forests[f].push((u, v));
    }
    Ok(ForestDecomposition { n, forests })
}

/// One tree-scheme label per forest, concatenated. Returns the forest count too.
pub fn encode_concat(g: &Graph, delta: usize) -> Result<(usize, Vec<BitString>)> {
    let fd = forest_decompose(g, delta)?;
    let mut labels = vec![BitString::new(); g.n()];
    for i in 0..fd.count() {
        let (_, block) = outerplanar::encode(&fd.forest_graph(i, delta)?, Mode::Tree, delta)?;
        for (l, b) in labels.iter_mut().zip(&block) {
            l.extend_from(b);
        }
    }
    Ok((fd.count(), labels))
}

#[derive(Clone, Debug)]
pub struct ConcatDecoder {
    forests: usize,
    block: Decoder,
}

impl ConcatDecoder {
    pub fn new(n: usize, delta: usize, forests: usize) -> Result<Self> {
        if forests == 0 {
            return Err(Error::InvalidArgument("forest count must be positive".into()));
        }
        Ok(ConcatDecoder { forests, block: Decoder::new(SchemeConfig::new(Mode::Tree, n as u64, delta)?) })
    }

    pub fn label_len(&self) -> usize {
        self.forests * self.block.config().uniform_len()
    }

    pub fn adjacent(&self, a: &BitString, b: &BitString) -> Result<bool> {
        Ok(self.adjacent_counted(a, b)?.0)
    }

    /// Adjacency with the total number of length-table probes.
    pub fn adjacent_counted(&self, a: &BitString, b: &BitString) -> Result<(bool, u32)> {
        for l in [a, b] {
            if l.len() != self.label_len() {
                return Err(Error::CorruptLabel(format!("label has {} bits, expected {}", l.len(), self.label_len())));
            }
        }
        let w = self.block.config().uniform_len();
        let (mut hit, mut probes) = (false, 0);
        for i in 0..self.forests {
            let (x, p) = self.block.adjacent_counted(&a.slice(i * w, (i + 1) * w), &b.slice(i * w, (i + 1) * w))?;
            hit |= x;
            probes += p;
        }
        Ok((hit, probes))
    }
}

fn check_degree(g: &Graph, delta: usize) -> Result<()> {
    match (0..g.n()).find(|&v| g.degree(v) > delta) {
        Some(v) => Err(Error::DegreeExceeded { vertex: v, degree: g.degree(v), delta }),
        None => Ok(()),
    }
}
