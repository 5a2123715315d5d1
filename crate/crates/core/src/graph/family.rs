//! Family validators: trees by counting, planarity by the left-right
//! (de Fraysseix–Rosenstiehl / Brandes) criterion, outerplanarity by planarity
//! of the graph plus one apex adjacent to every vertex.

use super::{FamilyTag, Graph};

pub fn validate_family(g: &Graph, family: FamilyTag) -> bool {
    match family {
        FamilyTag::Tree => g.n() >= 1 && g.m() + 1 == g.n() && g.components().len() == 1,
        FamilyTag::Outerplanar => is_outerplanar(g),
        FamilyTag::Planar => is_planar(g),
        FamilyTag::General => true,
    }
}

pub fn is_planar(g: &Graph) -> bool {
    lr_planar(g.n(), g.edges())
}

pub fn is_outerplanar(g: &Graph) -> bool {
    let n = g.n();
    if n >= 2 && g.m() > 2 * n - 3 {
        return false;
    }
    let mut edges = g.edges().to_vec();
    edges.extend((0..n).map(|v| (v, n)));
    lr_planar(n + 1, &edges)
}

/// Runs the test on a dedicated thread: the DFS recursion is as deep as the graph is long.
fn lr_planar(n: usize, edges: &[(usize, usize)]) -> bool {
    if n > 2 && edges.len() > 3 * n - 6 {
        return false;
    }
    let edges = edges.to_vec();
    std::thread::Builder::new()
        .stack_size(64 + 2048 * (n + edges.len()).max(1024))
        .spawn(move || LrState::new(n, edges).run())
        .expect("spawn planarity worker")
        .join()
        .expect("planarity worker panicked")
}

type EdgeRef = Option<usize>;

#[derive(Clone, Copy, Default)]
struct Interval {
    low: EdgeRef,
    high: EdgeRef,
}

impl Interval {
    fn empty(&self) -> bool {
        self.low.is_none() && self.high.is_none()
    }
}

#[derive(Clone, Copy, Default)]
struct ConflictPair {
    left: Interval,
    right: Interval,
}

impl ConflictPair {
    fn swap(&mut self) {
        std::mem::swap(&mut self.left, &mut self.right);
    }
}

struct LrState {
    n: usize,
    // undirected edge list; once oriented, `tail[e] -> head[e]`
    ends: Vec<(usize, usize)>,
    incident: Vec<Vec<usize>>,
    oriented: Vec<bool>,
    tail: Vec<usize>,
    head: Vec<usize>,
    height: Vec<Option<usize>>,
    parent_edge: Vec<EdgeRef>,
    lowpt: Vec<usize>,
    lowpt2: Vec<usize>,
    nesting: Vec<usize>,
    out: Vec<Vec<usize>>,
    reference: Vec<EdgeRef>,
    lowpt_edge: Vec<EdgeRef>,
    stack_bottom: Vec<Option<usize>>,
    stack: Vec<ConflictPair>,
}

impl LrState {
    fn new(n: usize, ends: Vec<(usize, usize)>) -> Self {
        let m = ends.len();
        let mut incident = vec![Vec::new(); n];
        for (e, &(u, v)) in ends.iter().enumerate() {
            incident[u].push(e);
            incident[v].push(e);
        }
        LrState {
            n,
            ends,
            incident,
            oriented: vec![false; m],
            tail: vec![0; m],
            head: vec![0; m],
            height: vec![None; n],
            parent_edge: vec![None; n],
            lowpt: vec![0; m],
            lowpt2: vec![0; m],
            nesting: vec![0; m],
            out: vec![Vec::new(); n],
            reference: vec![None; m],
            lowpt_edge: vec![None; m],
            stack_bottom: vec![None; m],
            stack: Vec::new(),
        }
    }

    fn run(mut self) -> bool {
        let mut roots = Vec::new();
        for v in 0..self.n {
            if self.height[v].is_none() {
                self.height[v] = Some(0);
                roots.push(v);
                self.orient(v);
            }
        }
        for v in 0..self.n {
            let mut out = std::mem::take(&mut self.out[v]);
            out.sort_by_key(|&e| self.nesting[e]);
            self.out[v] = out;
        }
        roots.into_iter().all(|r| self.test(r))
    }

    fn h(&self, v: usize) -> usize {
        self.height[v].expect("visited")
    }

    fn orient(&mut self, v: usize) {
        let e = self.parent_edge[v];
        for i in 0..self.incident[v].len() {
            let vw = self.incident[v][i];
            if self.oriented[vw] {
                continue;
            }
            let (a, b) = self.ends[vw];
            let w = if a == v { b } else { a };
            self.oriented[vw] = true;
            self.tail[vw] = v;
            self.head[vw] = w;
            self.out[v].push(vw);
            let hv = self.h(v);
            self.lowpt[vw] = hv;
            self.lowpt2[vw] = hv;
            match self.height[w] {
                None => {
                    self.parent_edge[w] = Some(vw);
                    self.height[w] = Some(hv + 1);
                    self.orient(w);
                }
                Some(hw) => self.lowpt[vw] = hw,
            }
            self.nesting[vw] = 2 * self.lowpt[vw] + usize::from(self.lowpt2[vw] < hv);
            if let Some(e) = e {
                if self.lowpt[vw] < self.lowpt[e] {
                    self.lowpt2[e] = self.lowpt[e].min(self.lowpt2[vw]);
                    self.lowpt[e] = self.lowpt[vw];
                } else if self.lowpt[vw] > self.lowpt[e] {
                    self.lowpt2[e] = self.lowpt2[e].min(self.lowpt[vw]);
                } else {
                    self.lowpt2[e] = self.lowpt2[e].min(self.lowpt2[vw]);
                }
            }
        }
    }

    fn top(&self) -> Option<usize> {
        self.stack.len().checked_sub(1)
    }

    fn conflicting(&self, iv: &Interval, b: usize) -> bool {
        match iv.high {
            Some(h) if !iv.empty() => self.lowpt[h] > self.lowpt[b],
            _ => false,
        }
    }

    fn lowest(&self, p: &ConflictPair) -> usize {
        if p.left.empty() {
            return self.lowpt[p.right.low.unwrap()];
        }
        if p.right.empty() {
            return self.lowpt[p.left.low.unwrap()];
        }
        self.lowpt[p.left.low.unwrap()].min(self.lowpt[p.right.low.unwrap()])
    }

    fn test(&mut self, v: usize) -> bool {
        let e = self.parent_edge[v];
        let out = self.out[v].clone();
        for (idx, &ei) in out.iter().enumerate() {
            let w = self.head[ei];
            self.stack_bottom[ei] = self.top();
            if self.parent_edge[w] == Some(ei) {
                if !self.test(w) {
                    return false;
                }
            } else {
                self.lowpt_edge[ei] = Some(ei);
                self.stack.push(ConflictPair {
                    left: Interval::default(),
                    right: Interval { low: Some(ei), high: Some(ei) },
                });
            }
            if self.lowpt[ei] < self.h(v) {
                let e = e.expect("return edge below a root");
                if idx == 0 {
                    self.lowpt_edge[e] = self.lowpt_edge[ei];
                } else if !self.add_constraints(ei, e) {
                    return false;
                }
            }
        }
        if let Some(e) = e {
            self.remove_back_edges(e);
        }
        true
    }

    fn add_constraints(&mut self, ei: usize, e: usize) -> bool {
        let mut p = ConflictPair::default();
        loop {
            let Some(mut q) = self.stack.pop() else { return false };
            if !q.left.empty() {
                q.swap();
            }
            if !q.left.empty() {
                return false;
            }
            if self.lowpt[q.right.low.unwrap()] > self.lowpt[e] {
                if p.right.empty() {
                    p.right = q.right;
                } else {
                    self.reference[p.right.low.unwrap()] = q.right.high;
                }
                p.right.low = q.right.low;
            } else {
                self.reference[q.right.low.unwrap()] = self.lowpt_edge[e];
            }
            if self.top() == self.stack_bottom[ei] {
                break;
            }
        }
        while let Some(&top) = self.stack.last() {
            if !(self.conflicting(&top.left, ei) || self.conflicting(&top.right, ei)) {
                break;
            }
            let mut q = self.stack.pop().unwrap();
            if self.conflicting(&q.right, ei) {
                q.swap();
            }
            if self.conflicting(&q.right, ei) {
                return false;
            }
            if let Some(l) = p.right.low {
                self.reference[l] = q.right.high;
            }
            if q.right.low.is_some() {
                p.right.low = q.right.low;
            }
            if p.left.empty() {
                p.left = q.left;
            } else {
                self.reference[p.left.low.unwrap()] = q.left.high;
            }
            p.left.low = q.left.low;
        }
        if !(p.left.empty() && p.right.empty()) {
            self.stack.push(p);
        }
        true
    }

    fn remove_back_edges(&mut self, e: usize) {
        let u = self.tail[e];
        let hu = self.h(u);
        while let Some(top) = self.stack.last() {
            if self.lowest(top) != hu {
                break;
            }
            self.stack.pop();
        }
        if let Some(mut p) = self.stack.pop() {
            while let Some(h) = p.left.high {
                if self.head[h] != u {
                    break;
                }
                p.left.high = self.reference[h];
            }
            if p.left.high.is_none() {
                if let Some(l) = p.left.low {
                    self.reference[l] = p.right.low;
                    p.left.low = None;
                }
            }
            while let Some(h) = p.right.high {
                if self.head[h] != u {
                    break;
                }
                p.right.high = self.reference[h];
            }
            if p.right.high.is_none() {
                if let Some(r) = p.right.low {
                    self.reference[r] = p.left.low;
                    p.right.low = None;
                }
            }
            self.stack.push(p);
        }
        if self.lowpt[e] < hu {
            if let Some(top) = self.stack.last() {
                let (hl, hr) = (top.left.high, top.right.high);
                self.reference[e] = match (hl, hr) {
                    (Some(l), Some(r)) if self.lowpt[l] > self.lowpt[r] => Some(l),
                    (Some(l), None) => Some(l),
                    _ => hr,
                };
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                e.push((u, v));
            }
        }
        Graph::new(n, n, e).unwrap()
    }

    fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut e = Vec::new();
        for u in 0..a {
            for v in 0..b {
                e.push((u, a + v));
            }
        }
        Graph::new(a + b, a.max(b), e).unwrap()
    }

    pub(crate) fn grid(w: usize, h: usize) -> Graph {
        let mut e = Vec::new();
        for y in 0..h {
            for x in 0..w {
                let v = y * w + x;
                if x + 1 < w {
                    e.push((v, v + 1));
                }
                if y + 1 < h {
                    e.push((v, v + w));
                }
            }
        }
        Graph::new(w * h, 4, e).unwrap()
    }

    #[test]
    fn small_cases() {
        let tri = Graph::parse("3 3 2\n0 1\n1 2\n0 2\n").unwrap();
        assert!(!validate_family(&tri, FamilyTag::Tree));
        assert!(validate_family(&tri, FamilyTag::Outerplanar));
        assert!(validate_family(&complete(4), FamilyTag::Planar));
        assert!(!validate_family(&complete(4), FamilyTag::Outerplanar));
        assert!(!is_planar(&complete(5)));
        assert!(!is_outerplanar(&complete_bipartite(2, 3)));
        assert!(is_planar(&complete_bipartite(2, 3)));
        assert!(!is_planar(&complete_bipartite(3, 3)));
        assert!(validate_family(&grid(4, 4), FamilyTag::Planar));
        assert!(!is_outerplanar(&grid(3, 3)));
        assert!(is_outerplanar(&grid(2, 6)));
    }

    #[test]
    fn petersen_is_not_planar() {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        let g = Graph::new(10, 3, outer.chain(spokes).chain(inner)).unwrap();
        assert!(!is_planar(&g));
    }

    #[test]
    fn subdivided_k33_is_not_planar() {
        // K3,3 with every edge subdivided once.
        let mut e = Vec::new();
        let mut next = 6;
        for u in 0..3 {
            for v in 3..6 {
                e.push((u, next));
                e.push((next, v));
                next += 1;
            }
        }
        assert!(!is_planar(&Graph::new(next, 3, e).unwrap()));
    }

    #[test]
    fn long_path_does_not_overflow() {
        let n = 50_000;
        let g = Graph::new(n, 2, (0..n - 1).map(|i| (i, i + 1))).unwrap();
        assert!(is_outerplanar(&g));
        assert!(validate_family(&g, FamilyTag::Tree));
    }

    /// Kuratowski by brute force; complete for graphs on at most 6 vertices.
    fn brute_nonplanar_le6(n: usize, adj: &[[bool; 6]; 6]) -> bool {
        let subsets = |k: usize| -> Vec<Vec<usize>> {
            (0u32..1 << n)
                .filter(|m| m.count_ones() as usize == k)
                .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
                .collect()
        };
        for s in subsets(5) {
            let missing: Vec<(usize, usize)> = (0..5)
                .flat_map(|i| (i + 1..5).map(move |j| (i, j)))
                .map(|(i, j)| (s[i], s[j]))
                .filter(|&(a, b)| !adj[a][b])
                .collect();
            if missing.is_empty() {
                return true;
            }
            if let [(a, b)] = missing[..] {
                // K5 with edge ab subdivided through the sixth vertex
                if (0..n).any(|x| !s.contains(&x) && adj[x][a] && adj[x][b]) {
                    return true;
                }
            }
        }
        if n == 6 {
            for side in subsets(3) {
                let other: Vec<usize> = (0..6).filter(|v| !side.contains(v)).collect();
                if side.iter().all(|&a| other.iter().all(|&b| adj[a][b])) {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn agrees_with_kuratowski_on_small_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut nonplanar = 0;
        for _ in 0..3000 {
            let n = rng.gen_range(1..=6);
            let density = rng.gen_range(0.3..1.0);
            let mut adj = [[false; 6]; 6];
            let mut e = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(density) {
                        adj[u][v] = true;
                        adj[v][u] = true;
                        e.push((u, v));
                    }
                }
            }
            let g = Graph::new(n, n, e).unwrap();
            let expect = !brute_nonplanar_le6(n, &adj);
            nonplanar += usize::from(!expect);
            assert_eq!(is_planar(&g), expect, "{:?}", g.edges());
        }
        assert!(nonplanar > 50);
    }

    #[test]
    fn disconnected_inputs() {
        let g = Graph::new(6, 2, [(0, 1), (1, 2), (0, 2), (3, 4)]).unwrap();
        assert!(is_outerplanar(&g));
        assert!(!validate_family(&g, FamilyTag::Tree));
        let mut e: Vec<_> = complete(5).edges().to_vec();
        e.push((5, 6));
        assert!(!is_planar(&Graph::new(7, 4, e).unwrap()));
    }
}
