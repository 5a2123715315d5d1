//! Embedding of an input graph into the host graph by recursive multi-color
//! bisection over the host tree.
//!
//! A job is a set of still unplaced vertices attached to one tree node. The
//! node first takes every job vertex adjacent to the set stored `k` levels up
//! (`k = ⌈log2 Δ⌉ + 1`), then either takes the whole job if it fits, or takes
//! a bisector of the rest and hands the two sides to its children. Vertices
//! are colored by the farthest ancestor (within `k - 1` levels) holding one of
//! their neighbors, so each bisection halves every such neighborhood and the
//! forced sets stay small.

use std::collections::{BTreeMap, VecDeque};

use crate::bits::ceil_log2;
use crate::error::{Error, Result};
use crate::graph::{FamilyTag, Graph};
use crate::universal::{ClusterAddr, UVertexId, UniversalParams};

/// Separator budget factor for trees and outerplanar graphs.
pub const BISECTOR_C: usize = 8;
/// Separator budget factor for planar graphs.
pub const PLANAR_BISECTOR_C: usize = 8;

/// Number of bisection colors for degree bound `delta`.
pub fn color_count(delta: usize) -> usize {
    ceil_log2(delta.max(1) as u64) as usize + 1
}

/// Largest separator `bisect` accepts for a subgraph on `m` vertices.
pub fn separator_budget(family: FamilyTag, m: usize, k_colors: usize) -> usize {
    match family {
        FamilyTag::Planar => (PLANAR_BISECTOR_C as f64 * (m as f64).sqrt()).ceil() as usize,
        _ => BISECTOR_C * k_colors * (ceil_log2(m.max(1) as u64) as usize + 1),
    }
}

/// Induced subgraph with local indices `0..len`.
#[derive(Clone, Debug)]
pub struct Subgraph {
    /// Original vertex ids, sorted; local index `i` is `vertices[i]`.
    pub vertices: Vec<usize>,
    pub adj: Vec<Vec<u32>>,
    /// Position of each vertex in a non-crossing cyclic order, if known.
    pub outer_pos: Option<Vec<usize>>,
}

impl Subgraph {
    /// Subgraph of `g` induced by `vertices` (need not be sorted).
    pub fn induced(g: &Graph, vertices: &[usize]) -> Subgraph {
        let mut local = vec![u32::MAX; g.n()];
        Self::induced_with(g, vertices, &mut local, None)
    }

    /// As [`Subgraph::induced`], reusing a scratch map that must hold
    /// `u32::MAX` everywhere and is restored before returning.
    fn induced_with(g: &Graph, vertices: &[usize], local: &mut [u32], rank: Option<&[usize]>) -> Subgraph {
        let mut vs = vertices.to_vec();
        vs.sort_unstable();
        for (i, &v) in vs.iter().enumerate() {
            local[v] = i as u32;
        }
        let adj = vs
            .iter()
            .map(|&v| {
                g.neighbors(v)
                    .iter()
                    .filter_map(|&w| (local[w] != u32::MAX).then_some(local[w]))
                    .collect()
            })
            .collect();
        for &v in &vs {
            local[v] = u32::MAX;
        }
        let outer_pos = rank.map(|r| vs.iter().map(|&v| r[v]).collect());
        Subgraph { vertices: vs, adj, outer_pos }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Separator and the two sides, as sorted original vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BisectionResult {
    pub separator: Vec<usize>,
    pub side_a: Vec<usize>,
    pub side_b: Vec<usize>,
}

/// Splits `sub` into separator and two sides with no edge between the sides
/// and every color class balanced within ±1. `colors[i]` is the color of local
/// vertex `i`, in `0..k_colors`.
pub fn bisect(sub: &Subgraph, colors: &[u8], k_colors: usize, family: FamilyTag) -> Result<BisectionResult> {
    if family == FamilyTag::General {
        return Err(Error::FamilyMismatch("bisection needs a tree, outerplanar or planar family"));
    }
    if colors.len() != sub.len() || colors.iter().any(|&c| c as usize >= k_colors) {
        return Err(Error::InvalidArgument("coloring does not match the subgraph".into()));
    }
    let mut b = Bisector::new(sub, colors, k_colors, family);
    let (side, removed) = b.run();
    let mut out = BisectionResult::default();
    for (i, &v) in sub.vertices.iter().enumerate() {
        if removed[i] {
            out.separator.push(v);
        } else if side[i] {
            out.side_b.push(v);
        } else {
            out.side_a.push(v);
        }
    }
    let budget = separator_budget(family, sub.len(), k_colors);
    if out.separator.len() > budget {
        return Err(Error::SeparatorBudget { size: out.separator.len(), budget, m: sub.len() });
    }
    Ok(out)
}

struct Bisector<'a> {
    sub: &'a Subgraph,
    colors: &'a [u8],
    k: usize,
    family: FamilyTag,
    removed: Vec<bool>,
    pieces: Vec<Vec<u32>>,
    sides: Vec<bool>,
    stamp: Vec<u32>,
    comp: Vec<u32>,
    epoch: u32,
}

impl<'a> Bisector<'a> {
    fn new(sub: &'a Subgraph, colors: &'a [u8], k: usize, family: FamilyTag) -> Self {
        let n = sub.len();
        let mut b = Bisector {
            sub,
            colors,
            k,
            family,
            removed: vec![false; n],
            pieces: Vec::new(),
            sides: Vec::new(),
            stamp: vec![0; n],
            comp: vec![0; n],
            epoch: 0,
        };
        let all: Vec<u32> = (0..n as u32).collect();
        b.pieces = b.components_of(&all);
        b
    }

    /// Connected components of the non-removed vertices among `within`
    /// (which must be closed under non-removed neighbors).
    fn components_of(&mut self, within: &[u32]) -> Vec<Vec<u32>> {
        self.epoch += 1;
        let e = self.epoch;
        let mut count = 0u32;
        let mut queue = Vec::new();
        for &s in within {
            if self.removed[s as usize] || self.stamp[s as usize] == e {
                continue;
            }
            self.stamp[s as usize] = e;
            self.comp[s as usize] = count;
            queue.clear();
            queue.push(s);
            while let Some(v) = queue.pop() {
                for &w in &self.sub.adj[v as usize] {
                    if !self.removed[w as usize] && self.stamp[w as usize] != e {
                        self.stamp[w as usize] = e;
                        self.comp[w as usize] = count;
                        queue.push(w);
                    }
                }
            }
            count += 1;
        }
        // `within` is sorted, so collecting in its order keeps every component
        // sorted and orders components by their smallest vertex
        let mut out = vec![Vec::new(); count as usize];
        for &v in within {
            if !self.removed[v as usize] {
                out[self.comp[v as usize] as usize].push(v);
            }
        }
        out
    }

    fn color_counts(&self, piece: &[u32]) -> Vec<i64> {
        let mut w = vec![0i64; self.k];
        for &v in piece {
            w[self.colors[v as usize] as usize] += 1;
        }
        w
    }

    /// Sides for `new` pieces, largest first, each to the side that keeps the
    /// summed per-color imbalance `diff` (A minus B) lowest. Sorts `new`.
    fn assign(&self, new: &mut [Vec<u32>], diff: &mut [i64]) -> Vec<bool> {
        new.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        new.iter()
            .map(|piece| {
                let w = self.color_counts(piece);
                let cost_a: i64 = diff.iter().zip(&w).map(|(d, x)| (d + x).abs()).sum();
                let cost_b: i64 = diff.iter().zip(&w).map(|(d, x)| (d - x).abs()).sum();
                let to_b = cost_b < cost_a;
                for (d, x) in diff.iter_mut().zip(&w) {
                    *d += if to_b { -x } else { *x };
                }
                to_b
            })
            .collect()
    }

    fn count_color(&self, piece: &[u32], c: usize) -> i64 {
        piece.iter().filter(|&&v| self.colors[v as usize] as usize == c).count() as i64
    }

    /// Repeatedly fixes the worst color: move a whole piece across if that
    /// helps, otherwise split a heavy-side piece near the missing weight.
    /// Whatever imbalance is left is absorbed into the separator.
    fn run(&mut self) -> (Vec<bool>, Vec<bool>) {
        let max_rounds = 64 * self.k + 64;
        let mut diff = vec![0i64; self.k];
        let mut initial = std::mem::take(&mut self.pieces);
        self.sides = self.assign(&mut initial, &mut diff);
        self.pieces = initial;
        for _ in 0..max_rounds {
            let absorb: i64 = diff.iter().map(|d| (d.abs() - 1).max(0)).sum();
            if absorb == 0 {
                break;
            }
            let worst = (0..self.k).max_by_key(|&c| (diff[c].abs(), std::cmp::Reverse(c))).unwrap();
            let heavy_b = diff[worst] < 0;
            let need = diff[worst].abs() / 2;
            let cand: Vec<(usize, i64)> = (0..self.pieces.len())
                .filter(|&i| self.sides[i] == heavy_b)
                .map(|i| (i, self.count_color(&self.pieces[i], worst)))
                .filter(|&(_, cnt)| cnt > 0)
                .collect();

            let l1: i64 = diff.iter().map(|d| d.abs()).sum();
            let sign = if heavy_b { -1 } else { 1 };
            let mover = cand
                .iter()
                .filter(|&&(_, cnt)| cnt <= need)
                .filter(|&&(i, _)| {
                    let w = self.color_counts(&self.pieces[i]);
                    diff.iter().zip(&w).map(|(d, x)| (d - 2 * sign * x).abs()).sum::<i64>() < l1
                })
                .max_by(|x, y| x.1.cmp(&y.1).then(y.0.cmp(&x.0)));
            if let Some(&(i, _)) = mover {
                let w = self.color_counts(&self.pieces[i]);
                for (d, x) in diff.iter_mut().zip(&w) {
                    *d -= 2 * sign * x;
                }
                self.sides[i] = !heavy_b;
                continue;
            }

            let pick = cand
                .iter()
                .filter(|&&(i, _)| self.pieces[i].len() > 1)
                .max_by(|x, y| {
                    x.1.cmp(&y.1)
                        .then(self.pieces[x.0].len().cmp(&self.pieces[y.0].len()))
                        .then(self.pieces[y.0][0].cmp(&self.pieces[x.0][0]))
                });
            let excess = diff[worst].abs() - 1;
            let Some(&(idx, cnt)) = pick else {
                self.absorb(worst, excess, &mut diff);
                continue;
            };
            let (weights, target): (Vec<u64>, u64) = if cnt >= 2 {
                let w = self.pieces[idx]
                    .iter()
                    .map(|&v| u64::from(self.colors[v as usize] as usize == worst))
                    .collect();
                (w, need.clamp(1, cnt) as u64)
            } else {
                (vec![1; self.pieces[idx].len()], self.pieces[idx].len() as u64 / 2)
            };
            let sep = self.split(idx, &weights, target);
            // keep the split only if separator plus remaining excess shrinks
            let piece = self.pieces[idx].clone();
            let mut trial = diff.clone();
            for (d, x) in trial.iter_mut().zip(self.color_counts(&piece)) {
                *d -= if self.sides[idx] { -x } else { x };
            }
            for &v in &sep {
                self.removed[v as usize] = true;
            }
            let mut parts = self.components_of(&piece);
            let part_sides = self.assign(&mut parts, &mut trial);
            let after: i64 = trial.iter().map(|d| (d.abs() - 1).max(0)).sum();
            if sep.is_empty() || sep.len() as i64 + after >= absorb {
                for &v in &sep {
                    self.removed[v as usize] = false;
                }
                self.absorb(worst, excess, &mut diff);
                continue;
            }
            self.pieces.swap_remove(idx);
            self.sides.swap_remove(idx);
            self.pieces.extend(parts);
            self.sides.extend(part_sides);
            diff = trial;
        }

        for c in 0..self.k {
            let excess = diff[c].abs() - 1;
            self.absorb(c, excess, &mut diff);
        }
        let mut side = vec![false; self.sub.len()];
        for (piece, &s) in self.pieces.iter().zip(&self.sides) {
            for &v in piece {
                side[v as usize] = s;
            }
        }
        (side, std::mem::take(&mut self.removed))
    }

    /// Moves `count` vertices of color `c` from the heavy side into the
    /// separator, then re-splits the touched pieces into components.
    fn absorb(&mut self, c: usize, mut count: i64, diff: &mut [i64]) {
        let heavy_b = diff[c] < 0;
        let mut touched = Vec::new();
        for i in 0..self.pieces.len() {
            if count <= 0 {
                break;
            }
            if self.sides[i] != heavy_b {
                continue;
            }
            let mut hit = false;
            for &v in &self.pieces[i] {
                if count > 0 && self.colors[v as usize] as usize == c {
                    self.removed[v as usize] = true;
                    count -= 1;
                    diff[c] += if heavy_b { 1 } else { -1 };
                    hit = true;
                }
            }
            if hit {
                touched.push(i);
            }
        }
        for &i in touched.iter().rev() {
            let piece = self.pieces.swap_remove(i);
            let s = self.sides.swap_remove(i);
            for part in self.components_of(&piece) {
                self.pieces.push(part);
                self.sides.push(s);
            }
        }
    }

    /// Separator (local ids) of piece `idx` that splits off about `target` weight.
    fn split(&mut self, idx: usize, weights: &[u64], target: u64) -> Vec<u32> {
        let piece = self.pieces[idx].clone();
        let edges: usize = piece
            .iter()
            .map(|&v| self.sub.adj[v as usize].iter().filter(|&&w| !self.removed[w as usize]).count())
            .sum::<usize>()
            / 2;
        if edges + 1 == piece.len() {
            return vec![self.tree_cut(&piece, weights, target)];
        }
        match (self.family, &self.sub.outer_pos) {
            (FamilyTag::Outerplanar, Some(pos)) => self.chord_split(&piece, weights, pos, target),
            _ => self.layer_split(&piece, weights, target),
        }
    }

    fn weight_map(&self, piece: &[u32], weights: &[u64]) -> Vec<u64> {
        let mut w = vec![0u64; self.sub.len()];
        for (&v, &x) in piece.iter().zip(weights) {
            w[v as usize] = x;
        }
        w
    }

    /// Vertex of a tree piece whose removal leaves a component with weight
    /// closest to `target`.
    fn tree_cut(&self, piece: &[u32], weights: &[u64], target: u64) -> u32 {
        let w = self.weight_map(piece, weights);
        let total: u64 = weights.iter().sum();
        let n = self.sub.len();
        let mut parent = vec![u32::MAX; n];
        let mut order = Vec::with_capacity(piece.len());
        let root = piece[0];
        parent[root as usize] = root;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            order.push(v);
            for &x in &self.sub.adj[v as usize] {
                if !self.removed[x as usize] && parent[x as usize] == u32::MAX {
                    parent[x as usize] = v;
                    stack.push(x);
                }
            }
        }
        let mut sub_w = w.clone();
        for &v in order.iter().rev() {
            let p = parent[v as usize];
            if p != v {
                sub_w[p as usize] += sub_w[v as usize];
            }
        }
        let mut best = (u64::MAX, root);
        for &v in &order {
            let up = total - sub_w[v as usize];
            let score = self.sub.adj[v as usize]
                .iter()
                .filter(|&&x| !self.removed[x as usize] && parent[x as usize] == v && x != v)
                .map(|&x| sub_w[x as usize].abs_diff(target))
                .chain((v != root).then_some(up.abs_diff(target)))
                .min()
                .unwrap_or(u64::MAX);
            if score < best.0 {
                best = (score, v);
            }
        }
        best.1
    }

    /// Cuts the cyclic outer order at two vertices and covers every edge that
    /// crosses the cut, choosing the cheapest cut whose arc weighs about `target`.
    fn chord_split(&self, piece: &[u32], weights: &[u64], pos: &[usize], target: u64) -> Vec<u32> {
        let p = piece.len();
        if p <= 3 {
            return vec![piece[0]];
        }
        let w = self.weight_map(piece, weights);
        let seq = radix_sort_by(piece, |v| pos[v as usize]);

        const OUT: u8 = 0;
        const IN: u8 = 1;
        const END: u8 = 2;
        let mut class = vec![OUT; self.sub.len()];
        let mut cross = 0i64;
        let crosses = |a: u8, b: u8| (a == IN && b == OUT) || (a == OUT && b == IN);
        let set = |class: &mut Vec<u8>, cross: &mut i64, v: u32, c: u8| {
            for &x in &self.sub.adj[v as usize] {
                if self.removed[x as usize] {
                    continue;
                }
                if crosses(class[v as usize], class[x as usize]) {
                    *cross -= 1;
                }
                if crosses(c, class[x as usize]) {
                    *cross += 1;
                }
            }
            class[v as usize] = c;
        };

        let at = |j: usize| seq[j % p];
        set(&mut class, &mut cross, at(0), END);
        set(&mut class, &mut cross, at(1), END);
        let (mut j, mut inside) = (1usize, 0u64);
        let mut best = (i64::MAX, 0usize, 1usize);
        for i in 0..p {
            if i > 0 {
                set(&mut class, &mut cross, at(i - 1), OUT);
                if j == i {
                    j += 1;
                    set(&mut class, &mut cross, at(j), END);
                } else {
                    inside -= w[at(i) as usize];
                    set(&mut class, &mut cross, at(i), END);
                }
            }
            while inside + w[at(j) as usize] < target && j + 2 < i + p {
                inside += w[at(j) as usize];
                set(&mut class, &mut cross, at(j), IN);
                j += 1;
                set(&mut class, &mut cross, at(j), END);
            }
            if cross + 2 < best.0 {
                best = (cross + 2, i, j);
            }
        }

        let (_, i, j) = best;
        let mut cls = vec![OUT; self.sub.len()];
        for t in i + 1..j {
            cls[at(t) as usize] = IN;
        }
        cls[at(i) as usize] = END;
        cls[at(j) as usize] = END;
        let mut sep = vec![at(i), at(j)];
        for t in i + 1..j {
            let v = at(t);
            if self.sub.adj[v as usize]
                .iter()
                .any(|&x| !self.removed[x as usize] && cls[x as usize] == OUT)
            {
                sep.push(v);
            }
        }
        sep.sort_unstable();
        sep.dedup();
        sep
    }

    fn bfs_layers(&self, root: u32) -> Vec<Vec<u32>> {
        let mut layer_of = vec![u32::MAX; self.sub.len()];
        let mut layers: Vec<Vec<u32>> = vec![vec![root]];
        layer_of[root as usize] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let d = layer_of[v as usize] + 1;
            for &x in &self.sub.adj[v as usize] {
                if !self.removed[x as usize] && layer_of[x as usize] == u32::MAX {
                    layer_of[x as usize] = d;
                    if layers.len() <= d as usize {
                        layers.push(Vec::new());
                    }
                    layers[d as usize].push(x);
                    queue.push_back(x);
                }
            }
        }
        layers
    }

    /// Breadth-first layer at which the cumulative weight reaches `target`.
    /// The search starts from a vertex of the last layer of a first sweep,
    /// which keeps layers short on grid-like pieces.
    fn layer_split(&self, piece: &[u32], weights: &[u64], target: u64) -> Vec<u32> {
        let w = self.weight_map(piece, weights);
        let first = self.bfs_layers(piece[0]);
        let far = *first.last().unwrap().iter().min().unwrap();
        let layers = self.bfs_layers(far);
        let mut before = 0u64;
        let mut best = layers.len() - 1;
        for (i, layer) in layers.iter().enumerate() {
            before += layer.iter().map(|&v| w[v as usize]).sum::<u64>();
            if before >= target {
                best = i;
                break;
            }
        }
        let mut sep = layers[best].clone();
        sep.sort_unstable();
        sep
    }
}

/// `items` ordered by `key`, stably, in linear time for keys below 2^33.
fn radix_sort_by(items: &[u32], key: impl Fn(u32) -> usize) -> Vec<u32> {
    const BITS: u32 = 11;
    let max = items.iter().map(|&v| key(v)).max().unwrap_or(0);
    let mut cur = items.to_vec();
    if cur.len() < 64 {
        cur.sort_by_key(|&v| key(v));
        return cur;
    }
    let mut next = vec![0u32; cur.len()];
    let mut shift = 0;
    while shift == 0 || max >> shift > 0 {
        let mut count = vec![0usize; (1 << BITS) + 1];
        for &v in &cur {
            count[((key(v) >> shift) & ((1 << BITS) - 1)) + 1] += 1;
        }
        for i in 1..count.len() {
            count[i] += count[i - 1];
        }
        for &v in &cur {
            let d = (key(v) >> shift) & ((1 << BITS) - 1);
            next[count[d]] = v;
            count[d] += 1;
        }
        std::mem::swap(&mut cur, &mut next);
        shift += BITS;
    }
    cur
}

/// Injective map from input vertices to host vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    phi: Vec<UVertexId>,
    cluster: Vec<ClusterAddr>,
    usage: BTreeMap<ClusterAddr, u64>,
}

impl Embedding {
    pub fn phi(&self, v: usize) -> UVertexId {
        self.phi[v]
    }

    pub fn phis(&self) -> &[UVertexId] {
        &self.phi
    }

    pub fn cluster_of(&self, v: usize) -> ClusterAddr {
        self.cluster[v]
    }

    /// Occupied clusters and their occupancy.
    pub fn usage(&self) -> &BTreeMap<ClusterAddr, u64> {
        &self.usage
    }

    /// Checks injectivity, capacity and edge preservation.
    pub fn check(&self, g: &Graph, p: &UniversalParams) -> Result<()> {
        let mut seen = self.phi.clone();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::EmbeddingContract("two vertices share a host vertex".into()));
        }
        for (&a, &used) in &self.usage {
            let capacity = p.cluster_size(a.level)?;
            if used > capacity {
                return Err(Error::ClusterOverflow { level: a.level, pos: a.pos, needed: used as usize, capacity });
            }
        }
        for &(u, v) in g.edges() {
            if !p.clusters_adjacent(self.cluster[u], self.cluster[v]) {
                return Err(Error::EmbeddingContract(format!(
                    "edge {u}-{v} maps to clusters {} and {} beyond distance {}",
                    self.cluster[u],
                    self.cluster[v],
                    p.radius()
                )));
            }
        }
        Ok(())
    }

    /// Per-level occupancy against capacity, as TSV.
    pub fn audit_tsv(&self, p: &UniversalParams) -> String {
        let mut s = String::from("level\tcapacity\tclusters_used\tmax_occupancy\ttotal_occupancy\n");
        for t in 1..=p.levels() {
            let row: Vec<u64> = self.usage.range(ClusterAddr::new(t, 0)..ClusterAddr::new(t + 1, 0)).map(|(_, &u)| u).collect();
            s.push_str(&format!(
                "{t}\t{}\t{}\t{}\t{}\n",
                p.cluster_size(t).unwrap(),
                row.len(),
                row.iter().max().copied().unwrap_or(0),
                row.iter().sum::<u64>()
            ));
        }
        s
    }
}

/// Embeds `g` into the host described by `p`.
pub fn embed(g: &Graph, p: &UniversalParams, family: FamilyTag) -> Result<Embedding> {
    if family == FamilyTag::General {
        return Err(Error::FamilyMismatch("embedding needs a tree, outerplanar or planar family"));
    }
    if g.n() as u64 > p.n() {
        return Err(Error::InvalidArgument(format!("graph has {} vertices, host is built for {}", g.n(), p.n())));
    }
    if g.max_degree() > p.delta().max(1) {
        return Err(Error::InvalidArgument(format!(
            "graph degree {} exceeds host bound {}",
            g.max_degree(),
            p.delta()
        )));
    }
    let k_colors = color_count(p.delta());
    let rank = g.outer_order().map(|order| {
        let mut r = vec![0usize; g.n()];
        for (i, &v) in order.iter().enumerate() {
            r[v] = i;
        }
        r
    });

    let n = g.n();
    let mut placed: Vec<Option<ClusterAddr>> = vec![None; n];
    let mut phi = vec![UVertexId(0); n];
    let mut usage = BTreeMap::new();
    let mut local = vec![u32::MAX; n];
    let mut jobs: Vec<(ClusterAddr, Vec<usize>)> = Vec::new();
    if n > 0 {
        jobs.push((ClusterAddr::root(), (0..n).collect()));
    }

    while let Some((x, job)) = jobs.pop() {
        let capacity = p.cluster_size(x.level)?;
        let mut here = Vec::new();
        let mut rest = Vec::new();
        for &u in &job {
            let forced = g.neighbors(u).iter().any(|&w| {
                placed[w].is_some_and(|a| a.level + k_colors as u32 == x.level)
            });
            if forced {
                here.push(u);
            } else {
                rest.push(u);
            }
        }
        let mut children = None;
        if (here.len() + rest.len()) as u64 <= capacity {
            here.append(&mut rest);
        } else if x.level == p.levels() {
            return Err(Error::ClusterOverflow {
                level: x.level,
                pos: x.pos,
                needed: here.len() + rest.len(),
                capacity,
            });
        } else {
            let sub = Subgraph::induced_with(g, &rest, &mut local, rank.as_deref());
            let colors: Vec<u8> = sub
                .vertices
                .iter()
                .map(|&u| {
                    g.neighbors(u)
                        .iter()
                        .filter_map(|&w| placed[w])
                        .map(|a| x.level - a.level)
                        .filter(|&d| d >= 1 && (d as usize) < k_colors)
                        .max()
                        .unwrap_or(0) as u8
                })
                .collect();
            let split = bisect(&sub, &colors, k_colors, family)?;
            here.extend(split.separator);
            children = Some((split.side_a, split.side_b));
        }
        if here.len() as u64 > capacity {
            return Err(Error::ClusterOverflow { level: x.level, pos: x.pos, needed: here.len(), capacity });
        }
        here.sort_unstable();
        let (lo, _) = p.cluster_range(x)?;
        for (i, &u) in here.iter().enumerate() {
            placed[u] = Some(x);
            phi[u] = UVertexId(lo.0 + i as u64);
        }
        if !here.is_empty() {
            usage.insert(x, here.len() as u64);
        }
        if let Some((a, b)) = children {
            let (left, right) = x.children(p.levels())?;
            if !b.is_empty() {
                jobs.push((right, b));
            }
            if !a.is_empty() {
                jobs.push((left, a));
            }
        }
    }

    let cluster = placed
        .into_iter()
        .map(|a| a.ok_or_else(|| Error::Internal("vertex left unplaced".into())))
        .collect::<Result<Vec<_>>>()?;
    let e = Embedding { phi, cluster, usage };
    e.check(g, p)?;
    Ok(e)
}
