//! Closed-form arithmetic on the edge-universal host graphs.
//!
//! The host is a complete binary tree with `levels` levels (root at level 1)
//! whose nodes are blown up into clusters; two host vertices are adjacent iff
//! their clusters are within tree distance `radius`. Cluster sizes depend only
//! on the level: `⌈c·log2(N/2^t)⌉` for [`Flavor::Outerplanar`] and
//! `⌈c·√(N/2^t)⌉` for [`Flavor::Planar`], both clamped below at 1.
//!
//! Host vertex ids run from 1 to [`UniversalParams::total_vertices`], level
//! by level and left to right within a level, so every cluster owns a
//! contiguous id range. Nothing here materializes the host graph; every query
//! is a handful of per-level table lookups and O(radius²) range sums.

use std::fmt;

use crate::bits::{bit_width, ceil_log2};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// Logarithmic clusters, for trees and outerplanar graphs.
    Outerplanar,
    /// Square-root clusters, for planar graphs.
    Planar,
}

/// Cluster constant for the logarithmic host.
pub fn cluster_constant(delta: usize) -> u64 {
    let d = delta.max(1) as u64;
    4 * (ceil_log2(d) as u64 + 1) * (d + 2)
}

/// Cluster constant for the square-root host.
pub fn planar_cluster_constant(delta: usize) -> u64 {
    8 * (delta.max(1) as u64 + 2)
}

/// Adjacency radius in the tree: `2⌈log2 max(Δ, 2)⌉ + 2`.
pub fn radius(delta: usize) -> u32 {
    2 * ceil_log2(delta.max(2) as u64) + 2
}

/// Smallest `k` with `2^k - 1 ≥ n`.
pub fn levels_for(n: u64) -> u32 {
    let mut k = 1;
    while (1u64 << k) - 1 < n {
        k += 1;
    }
    k
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClusterAddr {
    pub level: u32,
    pub pos: u64,
}

impl ClusterAddr {
    pub fn new(level: u32, pos: u64) -> Self {
        ClusterAddr { level, pos }
    }

    pub fn root() -> Self {
        ClusterAddr { level: 1, pos: 1 }
    }

    fn is_valid(&self, levels: u32) -> bool {
        self.level >= 1 && self.level <= levels && self.pos >= 1 && self.pos <= 1u64 << (self.level - 1)
    }

    pub fn parent(&self) -> Result<ClusterAddr> {
        if self.level < 2 {
            return Err(Error::InvalidArgument("the root cluster has no parent".into()));
        }
        Ok(ClusterAddr { level: self.level - 1, pos: self.pos.div_ceil(2) })
    }

    pub fn children(&self, levels: u32) -> Result<(ClusterAddr, ClusterAddr)> {
        if self.level >= levels {
            return Err(Error::InvalidArgument(format!("level {} clusters have no children", self.level)));
        }
        let level = self.level + 1;
        Ok((ClusterAddr { level, pos: 2 * self.pos - 1 }, ClusterAddr { level, pos: 2 * self.pos }))
    }

    fn up(&self) -> ClusterAddr {
        ClusterAddr { level: self.level - 1, pos: self.pos.div_ceil(2) }
    }

    /// The ancestor `steps` levels up.
    pub fn ancestor(&self, steps: u32) -> ClusterAddr {
        debug_assert!(steps < self.level);
        ClusterAddr { level: self.level - steps, pos: ((self.pos - 1) >> steps) + 1 }
    }
}

impl fmt::Display for ClusterAddr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.level, self.pos)
    }
}

/// Id of a host vertex, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UVertexId(pub u64);

/// Rank of a host edge among the host neighbors of its owner, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub u64);

/// All derived constants of one host graph. Encoder and decoder rebuild the
/// same value from `(flavor, n, Δ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct UniversalParams {
    flavor: Flavor,
    n: u64,
    levels: u32,
    delta: usize,
    c: u64,
    radius: u32,
    sizes: Vec<u64>,
    /// `starts[t]` = number of host vertices on levels `1..=t`.
    starts: Vec<u64>,
    level_neighbors: Vec<u64>,
}

impl UniversalParams {
    /// Host for `n` input vertices of maximum degree `delta`, with the built-in constants.
    pub fn new(flavor: Flavor, n: u64, delta: usize) -> Result<Self> {
        let c = match flavor {
            Flavor::Outerplanar => cluster_constant(delta),
            Flavor::Planar => planar_cluster_constant(delta),
        };
        Self::with_constants(flavor, n, delta, c, radius(delta))
    }

    pub fn with_constants(flavor: Flavor, n: u64, delta: usize, c: u64, g: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("host needs n ≥ 1".into()));
        }
        Self::build(flavor, n, levels_for(n), delta, c, g)
    }

    /// Host with exactly `levels` levels (`n` is taken as `2^levels - 1`).
    pub fn for_levels(flavor: Flavor, levels: u32, delta: usize) -> Result<Self> {
        let c = match flavor {
            Flavor::Outerplanar => cluster_constant(delta),
            Flavor::Planar => planar_cluster_constant(delta),
        };
        Self::build(flavor, (1u64 << levels) - 1, levels, delta, c, radius(delta))
    }

    fn build(flavor: Flavor, n: u64, levels: u32, delta: usize, c: u64, g: u32) -> Result<Self> {
        if !(1..=40).contains(&levels) {
            return Err(Error::InvalidArgument(format!("unsupported level count {levels}")));
        }
        if c == 0 || g == 0 {
            return Err(Error::InvalidArgument("cluster constant and radius must be positive".into()));
        }
        let big_n = ((1u64 << levels) - 1) as f64;
        let sizes: Vec<u64> = (1..=levels)
            .map(|t| {
                let x = match flavor {
                    Flavor::Outerplanar => c as f64 * (big_n.log2() - t as f64),
                    Flavor::Planar => c as f64 * (big_n / (1u64 << t) as f64).sqrt(),
                };
                (x.ceil().max(1.0)) as u64
            })
            .collect();
        let mut starts = vec![0u64];
        for t in 1..=levels {
            let prev = *starts.last().unwrap();
            starts.push(prev + (1u64 << (t - 1)) * sizes[t as usize - 1]);
        }
        let mut p = UniversalParams {
            flavor,
            n,
            levels,
            delta,
            c,
            radius: g,
            sizes,
            starts,
            level_neighbors: Vec::new(),
        };
        // every cluster of a level has the same neighborhood size: the tree's
        // automorphisms act transitively on each level
        p.level_neighbors = (1..=levels)
            .map(|t| p.count_neighbors(ClusterAddr::new(t, 1)))
            .collect();
        Ok(p)
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    /// `N = 2^levels - 1`, the node count of the underlying tree.
    pub fn tree_nodes(&self) -> u64 {
        (1u64 << self.levels) - 1
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn total_vertices(&self) -> u64 {
        self.starts[self.levels as usize]
    }

    /// Host vertices on levels `1..=t`.
    pub fn vertices_through(&self, t: u32) -> u64 {
        self.starts[t.min(self.levels) as usize]
    }

    fn check_level(&self, t: u32) -> Result<()> {
        if t == 0 || t > self.levels {
            return Err(Error::InvalidArgument(format!("level {t} outside [1, {}]", self.levels)));
        }
        Ok(())
    }

    fn check_addr(&self, a: ClusterAddr) -> Result<()> {
        if !a.is_valid(self.levels) {
            return Err(Error::InvalidArgument(format!("invalid cluster address {a}")));
        }
        Ok(())
    }

    pub fn cluster_size(&self, t: u32) -> Result<u64> {
        self.check_level(t)?;
        Ok(self.sizes[t as usize - 1])
    }

    fn size(&self, t: u32) -> u64 {
        self.sizes[t as usize - 1]
    }

    /// Inclusive id range `[lo, hi]` owned by cluster `a`.
    pub fn cluster_range(&self, a: ClusterAddr) -> Result<(UVertexId, UVertexId)> {
        self.check_addr(a)?;
        let (lo, hi) = self.level_range_ids(a.level, a.pos, a.pos);
        Ok((UVertexId(lo), UVertexId(hi)))
    }

    fn level_range_ids(&self, t: u32, p_lo: u64, p_hi: u64) -> (u64, u64) {
        let base = self.starts[t as usize - 1];
        let size = self.size(t);
        (base + (p_lo - 1) * size + 1, base + p_hi * size)
    }

    /// Cluster containing `v`, with `v`'s 1-based offset inside it.
    pub fn id_to_cluster(&self, v: UVertexId) -> Result<(ClusterAddr, u64)> {
        if v.0 == 0 || v.0 > self.total_vertices() {
            return Err(Error::InvalidArgument(format!(
                "host id {} outside [1, {}]",
                v.0,
                self.total_vertices()
            )));
        }
        // first level whose cumulative count reaches v
        let t = self.starts.partition_point(|&s| s < v.0) as u32;
        let rel = v.0 - self.starts[t as usize - 1] - 1;
        let size = self.size(t);
        Ok((ClusterAddr::new(t, rel / size + 1), rel % size + 1))
    }

    pub fn level_of(&self, v: UVertexId) -> Result<u32> {
        Ok(self.id_to_cluster(v)?.0.level)
    }

    /// Tree distance between two clusters if it is at most `limit`.
    pub fn distance_within(&self, a: ClusterAddr, b: ClusterAddr, limit: u32) -> Option<u32> {
        let (mut x, mut y) = (a, b);
        let mut d = 0;
        while x.level > y.level {
            x = x.up();
            d += 1;
        }
        while y.level > x.level {
            y = y.up();
            d += 1;
        }
        if d > limit {
            return None;
        }
        while x != y {
            x = x.up();
            y = y.up();
            d += 2;
            if d > limit {
                return None;
            }
        }
        Some(d)
    }

    pub fn clusters_adjacent(&self, a: ClusterAddr, b: ClusterAddr) -> bool {
        self.distance_within(a, b, self.radius).is_some()
    }

    /// Sorted, disjoint inclusive id intervals covering every host vertex whose
    /// cluster lies within the radius of `a` (including `a` itself).
    pub fn neighbor_intervals(&self, a: ClusterAddr) -> Result<Vec<(u64, u64)>> {
        self.check_addr(a)?;
        Ok(self.intervals(a))
    }

    fn intervals(&self, a: ClusterAddr) -> Vec<(u64, u64)> {
        let g = self.radius;
        let mut out = Vec::new();
        for j in 0..=g.min(a.level - 1) {
            let anc = a.ancestor(j);
            let r = g - j;
            if j == 0 {
                for d in 0..=r {
                    let level = a.level + d;
                    if level > self.levels {
                        break;
                    }
                    let lo = ((a.pos - 1) << d) + 1;
                    out.push(self.level_range_ids(level, lo, a.pos << d));
                }
            } else {
                out.push(self.level_range_ids(anc.level, anc.pos, anc.pos));
                // the child of `anc` on the far side from `a`, and its subtree
                let near = a.ancestor(j - 1);
                let sib = if near.pos % 2 == 1 { near.pos + 1 } else { near.pos - 1 };
                for d in 1..=r {
                    let level = anc.level + d;
                    if level > self.levels {
                        break;
                    }
                    let span = d - 1;
                    out.push(self.level_range_ids(level, ((sib - 1) << span) + 1, sib << span));
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn count_neighbors(&self, a: ClusterAddr) -> u64 {
        self.intervals(a).iter().map(|&(lo, hi)| hi - lo + 1).sum::<u64>() - 1
    }

    /// Number of host neighbors of any vertex in cluster `a`.
    pub fn neighbor_count(&self, a: ClusterAddr) -> Result<u64> {
        self.check_addr(a)?;
        Ok(self.level_neighbors[a.level as usize - 1])
    }

    /// Neighbor count shared by every vertex on level `t`.
    pub fn level_neighbor_count(&self, t: u32) -> Result<u64> {
        self.check_level(t)?;
        Ok(self.level_neighbors[t as usize - 1])
    }

    /// Rank of `u` among the host neighbors of `v`, ordered by id.
    pub fn edge_rank(&self, v: UVertexId, u: UVertexId) -> Result<EdgeId> {
        let (a, _) = self.id_to_cluster(v)?;
        let (b, _) = self.id_to_cluster(u)?;
        if v == u || !self.clusters_adjacent(a, b) {
            return Err(Error::InvalidArgument(format!(
                "host vertices {} and {} are not adjacent",
                v.0, u.0
            )));
        }
        let below: u64 = self
            .intervals(a)
            .iter()
            .take_while(|&&(lo, _)| lo < u.0)
            .map(|&(lo, hi)| hi.min(u.0 - 1) - lo + 1)
            .sum();
        Ok(EdgeId(below - u64::from(v.0 < u.0) + 1))
    }

    /// `(α_t, β_t)`: bits for any host id on levels `≤ t`, and for any edge
    /// rank of a vertex on level `t`.
    pub fn alpha_beta(&self, t: u32) -> Result<(u32, u32)> {
        self.check_level(t)?;
        let alpha = bit_width(self.starts[t as usize]);
        Ok((alpha, bit_width(self.level_neighbors[t as usize - 1])))
    }

    /// Per-level summary as TSV with a header row.
    pub fn cluster_table_tsv(&self) -> String {
        let mut s = String::from("level\tclusters\tcluster_size\tfirst_id\tlast_id\tneighbors\talpha\tbeta\n");
        for t in 1..=self.levels {
            let (alpha, beta) = self.alpha_beta(t).unwrap();
            s.push_str(&format!(
                "{t}\t{}\t{}\t{}\t{}\t{}\t{alpha}\t{beta}\n",
                1u64 << (t - 1),
                self.size(t),
                self.starts[t as usize - 1] + 1,
                self.starts[t as usize],
                self.level_neighbors[t as usize - 1],
            ));
        }
        s
    }

    /// Explicit neighbor lists of every host vertex (index = id), built by
    /// breadth-first search over an explicit copy of the tree. Debug aid and
    /// test oracle; refuses trees with more than 4095 nodes.
    pub fn materialize(&self) -> Result<Vec<Vec<u64>>> {
        let nodes = self.tree_nodes() as usize;
        if nodes > 4095 {
            return Err(Error::InvalidArgument("materialize is limited to 4095 tree nodes".into()));
        }
        // heap numbering: node i has children 2i, 2i+1
        let addr = |i: usize| {
            let level = usize::BITS - i.leading_zeros();
            (level, i as u64 - (1u64 << (level - 1)) + 1)
        };
        let mut out = vec![Vec::new(); self.total_vertices() as usize + 1];
        for src in 1..=nodes {
            let mut dist = vec![u32::MAX; nodes + 1];
            dist[src] = 0;
            let mut queue = std::collections::VecDeque::from([src]);
            while let Some(x) = queue.pop_front() {
                let mut nb = vec![2 * x, 2 * x + 1];
                if x > 1 {
                    nb.push(x / 2);
                }
                for y in nb {
                    if y <= nodes && dist[y] == u32::MAX {
                        dist[y] = dist[x] + 1;
                        queue.push_back(y);
                    }
                }
            }
            let (ls, ps) = addr(src);
            let (slo, shi) = self.level_range_ids(ls, ps, ps);
            for dst in 1..=nodes {
                if dist[dst] > self.radius {
                    continue;
                }
                let (ld, pd) = addr(dst);
                let (dlo, dhi) = self.level_range_ids(ld, pd, pd);
                for v in slo..=shi {
                    out[v as usize].extend((dlo..=dhi).filter(|&u| u != v));
                }
            }
        }
        for list in &mut out {
            list.sort_unstable();
        }
        Ok(out)
    }
}
