use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FamilyTag, Graph};
use crate::error::{Error, Result};

/// Deterministic random instance of `family` with `n` vertices and maximum degree `≤ delta`.
pub fn generate(family: FamilyTag, n: usize, delta: usize, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::Infeasible("n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match family {
        FamilyTag::Tree => random_tree(n, delta, &mut rng),
        FamilyTag::Outerplanar => random_outerplanar(n, delta, &mut rng),
        FamilyTag::Planar => random_planar(n, delta, &mut rng),
        FamilyTag::General => random_general(n, delta, &mut rng),
    }
}

/// Each new vertex attaches to a uniformly random earlier vertex with spare degree.
fn random_tree(n: usize, delta: usize, rng: &mut ChaCha8Rng) -> Result<Graph> {
    if (n >= 2 && delta < 1) || (n >= 3 && delta < 2) {
        return Err(Error::Infeasible(format!("no tree on {n} vertices with max degree {delta}")));
    }
    let mut degree = vec![0usize; n];
    let mut open = vec![0usize];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for v in 1..n {
        let i = rng.gen_range(0..open.len());
        let p = open[i];
        edges.push((p, v));
        degree[p] += 1;
        degree[v] = 1;
        if degree[p] == delta {
            open.swap_remove(i);
        }
        if delta > 1 {
            open.push(v);
        }
    }
    Graph::new(n, delta, edges)
}

/// Random ear-decomposed triangulation of a convex polygon, then edges are
/// dropped (chords first) until every degree fits. The polygon order is kept
/// as the outer order.
fn random_outerplanar(n: usize, delta: usize, rng: &mut ChaCha8Rng) -> Result<Graph> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut cycle = Vec::new();
    let mut chords = Vec::new();
    if n == 2 {
        cycle.push((order[0], order[1]));
    } else if n >= 3 {
        for i in 0..n {
            cycle.push((order[i], order[(i + 1) % n]));
        }
        let mut prev: Vec<usize> = (0..n).map(|i| (i + n - 1) % n).collect();
        let mut next: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let mut alive: Vec<usize> = (0..n).collect();
        while alive.len() > 3 {
            let i = rng.gen_range(0..alive.len());
            let x = alive.swap_remove(i);
            let (p, q) = (prev[x], next[x]);
            chords.push((order[p], order[q]));
            next[p] = q;
            prev[q] = p;
        }
    }

    chords.shuffle(rng);
    cycle.shuffle(rng);
    let mut degree = vec![0usize; n];
    for &(u, v) in cycle.iter().chain(&chords) {
        degree[u] += 1;
        degree[v] += 1;
    }
    let mut keep = Vec::new();
    // chords go first so the outer cycle survives whenever delta >= 2
    for (u, v) in chords.into_iter().chain(cycle) {
        if degree[u] > delta || degree[v] > delta {
            degree[u] -= 1;
            degree[v] -= 1;
        } else {
            keep.push((u, v));
        }
    }
    Graph::new(n, delta, keep)?.with_outer_order(order)
}

/// Random subgraph of a square grid with one random diagonal per cell, degree-capped.
fn random_planar(n: usize, delta: usize, rng: &mut ChaCha8Rng) -> Result<Graph> {
    let w = (n as f64).sqrt().ceil() as usize;
    let pos = |x: usize, y: usize| y * w + x;
    let mut cand = Vec::new();
    for y in 0..n.div_ceil(w) {
        for x in 0..w {
            let v = pos(x, y);
            if v >= n {
                continue;
            }
            if x + 1 < w && v + 1 < n {
                cand.push((v, v + 1));
            }
            if v + w < n {
                cand.push((v, v + w));
            }
            if x + 1 < w && v + w + 1 < n && rng.gen_bool(0.5) {
                if rng.gen_bool(0.5) {
                    cand.push((v, v + w + 1));
                } else {
                    cand.push((v + 1, v + w));
                }
            }
        }
    }
    cand.shuffle(rng);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut degree = vec![0usize; n];
    let mut edges = Vec::new();
    for (u, v) in cand {
        if degree[u] < delta && degree[v] < delta && rng.gen_bool(0.9) {
            degree[u] += 1;
            degree[v] += 1;
            edges.push((perm[u], perm[v]));
        }
    }
    Graph::new(n, delta, edges)
}

/// Configuration model; loops and repeated pairs are rejected.
fn random_general(n: usize, delta: usize, rng: &mut ChaCha8Rng) -> Result<Graph> {
    let mut stubs = Vec::new();
    for v in 0..n {
        let d = if delta == 0 { 0 } else { rng.gen_range(1..=delta) };
        stubs.extend(std::iter::repeat(v).take(d));
    }
    stubs.shuffle(rng);
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    for pair in stubs.chunks_exact(2) {
        let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
        if u != v && seen.insert((u, v)) {
            edges.push((u, v));
        }
    }
    Graph::new(n, delta, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_family;

    fn recount_ok(g: &Graph, delta: usize) -> bool {
        let mut deg = vec![0; g.n()];
        for &(u, v) in g.edges() {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg.iter().all(|&d| d <= delta)
    }

    #[test]
    fn examples() {
        let t = generate(FamilyTag::Tree, 1, 3, 9).unwrap();
        assert_eq!((t.n(), t.m()), (1, 0));

        let o = generate(FamilyTag::Outerplanar, 3, 2, 4).unwrap();
        assert!(o.m() == 2 || o.m() == 3);
        assert!(validate_family(&o, FamilyTag::Outerplanar));

        for seed in 0..5 {
            let g = generate(FamilyTag::General, 64, 6, seed).unwrap();
            assert!(recount_ok(&g, 6));
        }
    }

    #[test]
    fn infeasible() {
        assert!(generate(FamilyTag::Tree, 3, 1, 0).is_err());
        assert!(generate(FamilyTag::Tree, 0, 3, 0).is_err());
        assert!(generate(FamilyTag::Tree, 2, 1, 0).is_ok());
    }

    #[test]
    fn families_validate_and_respect_degree() {
        for &(fam, delta) in &[
            (FamilyTag::Tree, 2),
            (FamilyTag::Tree, 3),
            (FamilyTag::Outerplanar, 2),
            (FamilyTag::Outerplanar, 4),
            (FamilyTag::Planar, 4),
            (FamilyTag::Planar, 6),
            (FamilyTag::General, 5),
        ] {
            for (seed, n) in [(1u64, 1usize), (2, 2), (3, 17), (4, 300)] {
                let g = generate(fam, n, delta, seed).unwrap();
                assert_eq!(g.n(), n);
                assert!(recount_ok(&g, delta), "{fam} n={n}");
                assert!(validate_family(&g, fam), "{fam} n={n} seed={seed}");
                assert_eq!(g, generate(fam, n, delta, seed).unwrap());
                assert_eq!(Graph::parse(&g.to_text()).unwrap(), g);
            }
        }
    }

    #[test]
    fn outer_order_has_no_crossing_edges() {
        let g = generate(FamilyTag::Outerplanar, 60, 5, 11).unwrap();
        let order = g.outer_order().unwrap();
        let mut at = vec![0; g.n()];
        for (i, &v) in order.iter().enumerate() {
            at[v] = i;
        }
        let chords: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .map(|&(u, v)| (at[u].min(at[v]), at[u].max(at[v])))
            .collect();
        for &(a, b) in &chords {
            for &(c, d) in &chords {
                assert!(!(a < c && c < b && b < d), "({a},{b}) crosses ({c},{d})");
            }
        }
    }
}
