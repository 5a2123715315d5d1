//! Neighbor sets ranked in the combinatorial number system, for degree bounds
//! that grow with `n`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::bits::{ceil_log2, BitString};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scheme::bounded::euler_orient;

/// Binomials `C(t, i)` for `t ≤ n`, `i ≤ cols`, from Pascal's rule.
#[derive(Clone, Debug)]
pub struct Binomials {
    cols: usize,
    rows: Vec<Vec<BigUint>>,
}

impl Binomials {
    pub fn new(n: usize, cols: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n + 1);
        for t in 0..=n {
            let mut row = vec![BigUint::zero(); cols + 1];
            row[0] = BigUint::one();
            for i in 1..=cols.min(t) {
                row[i] = &rows[t - 1][i - 1] + &rows[t - 1][i];
            }
            rows.push(row);
        }
        Binomials { cols, rows }
    }

    pub fn n(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, t: usize, i: usize) -> Result<&BigUint> {
        if t > self.n() || i > self.cols {
            return Err(Error::InvalidArgument(format!("C({t}, {i}) outside the table")));
        }
        Ok(&self.rows[t][i])
    }
}

/// `σ(t_1 < … < t_m) = Σ C(t_i, i)`.
pub fn sigma(seq: &[usize], n: usize, table: &Binomials) -> Result<BigUint> {
    let mut r = BigUint::zero();
    for (i, &t) in seq.iter().enumerate() {
        if t >= n {
            return Err(Error::InvalidArgument(format!("element {t} not below n = {n}")));
        }
        if i > 0 && seq[i - 1] >= t {
            return Err(Error::InvalidArgument("sequence is not strictly increasing".into()));
        }
        r += table.get(t, i + 1)?;
    }
    Ok(r)
}

/// Inverse of [`sigma`] for sequences of length `len` over `[0, n)`.
pub fn unrank(rank: &BigUint, len: usize, n: usize, table: &Binomials) -> Result<Vec<usize>> {
    if rank >= table.get(n, len)? {
        return Err(Error::InvalidArgument(format!("rank out of range for C({n}, {len})")));
    }
    let mut r = rank.clone();
    let mut out = vec![0; len];
    let mut hi = n;
    for i in (1..=len).rev() {
        // largest t < hi with C(t, i) ≤ r; C(·, i) is nondecreasing in t
        let (mut lo, mut up) = (i - 1, hi - 1);
        while lo < up {
            let mid = (lo + up).div_ceil(2);
            if table.get(mid, i)? <= &r {
                lo = mid;
            } else {
                up = mid - 1;
            }
        }
        r -= table.get(lo, i)?;
        out[i - 1] = lo;
        hi = lo;
    }
    Ok(out)
}

/// `C(n, m)` by prime factorization, for large arguments.
pub fn binomial(n: u64, m: u64) -> BigUint {
    if m > n {
        return BigUint::zero();
    }
    let m = m.min(n - m);
    let limit = n as usize;
    let mut composite = vec![false; limit + 1];
    let mut factors = Vec::new();
    for p in 2..=limit {
        if composite[p] {
            continue;
        }
        let mut q = p * p;
        while q <= limit {
            composite[q] = true;
            q += p;
        }
        let p = p as u64;
        let legendre = |x: u64| {
            let (mut e, mut pk) = (0, p);
            while pk <= x {
                e += x / pk;
                pk = match pk.checked_mul(p) {
                    Some(v) => v,
                    None => break,
                };
            }
            e
        };
        let e = legendre(n) - legendre(m) - legendre(n - m);
        if e > 0 {
            factors.push(BigUint::from(p).pow(e as u32));
        }
    }
    product(&factors)
}

fn product(xs: &[BigUint]) -> BigUint {
    match xs.len() {
        0 => BigUint::one(),
        1 => xs[0].clone(),
        l => product(&xs[..l / 2]) * product(&xs[l / 2..]),
    }
}

/// Bits needed to write any value below `x`.
fn bits_below(x: &BigUint) -> u64 {
    if x <= &BigUint::one() {
        0
    } else {
        (x - 1u32).bits()
    }
}

/// `log2 x` for a positive integer.
pub fn log2_big(x: &BigUint) -> f64 {
    let b = x.bits();
    if b <= 64 {
        return x.to_f64().unwrap().log2();
    }
    let top = (x >> (b - 64)).to_f64().unwrap();
    top.log2() + (b - 64) as f64
}

/// Field layout for an instance with `n` vertices and degree bound `k`.
#[derive(Clone, Debug)]
pub struct Layout {
    pub n: usize,
    pub k: usize,
    pub id_width: u32,
    pub size_width: u32,
    pub rank_width: u64,
    pub table: Binomials,
}

impl Layout {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::InvalidArgument(format!("degree bound {k} exceeds n = {n}")));
        }
        let half = k.div_ceil(2);
        let table = Binomials::new(n, half);
        let rank_width = bits_below(table.get(n, half)?);
        let w = ceil_log2(n as u64);
        Ok(Layout { n, k, id_width: w, size_width: w, rank_width, table })
    }

    pub fn label_len(&self) -> usize {
        1 + (self.id_width + self.size_width) as usize + self.rank_width as usize
    }

    fn parse(&self, l: &BitString) -> Result<(bool, usize, Vec<usize>)> {
        if l.len() != self.label_len() {
            return Err(Error::CorruptLabel(format!("label has {} bits, expected {}", l.len(), self.label_len())));
        }
        let flag = l.get(0);
        let id = l.read_field(1, self.id_width)? as usize;
        let size = l.read_field(1 + self.id_width as usize, self.size_width)? as usize;
        if id >= self.n || size > self.k.div_ceil(2) {
            return Err(Error::CorruptLabel("id or set size out of range".into()));
        }
        let rank = l.read_big(1 + (self.id_width + self.size_width) as usize, self.rank_width)?;
        let set = unrank(&rank, size, self.n, &self.table)
            .map_err(|_| Error::CorruptLabel(format!("rank exceeds C({}, {size})", self.n)))?;
        Ok((flag, id, set))
    }

    pub fn adjacent(&self, a: &BitString, b: &BitString) -> Result<bool> {
        let (fa, ia, sa) = self.parse(a)?;
        let (fb, ib, sb) = self.parse(b)?;
        if ia == ib {
            return Ok(false);
        }
        let holds = |flag: bool, set: &[usize], x: usize| set.binary_search(&x).is_ok() != flag;
        Ok(holds(fa, &sa, ib) || holds(fb, &sb, ia))
    }
}

/// `flag | id | set size | rank`: the out-set of an Euler orientation, or the
/// complement of the full neighborhood when the degree is at least `2n/3`.
pub fn encode(g: &Graph, k: usize) -> Result<(Layout, Vec<BitString>)> {
    let n = g.n();
    if let Some(v) = (0..n).find(|&v| g.degree(v) > k) {
        return Err(Error::DegreeExceeded { vertex: v, degree: g.degree(v), delta: k });
    }
    let layout = Layout::new(n, k)?;
    let o = euler_orient(g);
    let mut labels = Vec::with_capacity(n);
    for v in 0..n {
        let complement = 3 * g.degree(v) >= 2 * n;
        let set: Vec<usize> = if complement {
            let mut adj = vec![false; n];
            adj[v] = true;
            for &u in g.neighbors(v) {
                adj[u] = true;
            }
            (0..n).filter(|&u| !adj[u]).collect()
        } else {
            o.out[v].clone()
        };
        let mut s = BitString::with_capacity(layout.label_len());
        s.push(complement);
        s.append_field(v as u64, layout.id_width)?;
        s.append_field(set.len() as u64, layout.size_width)?;
        s.append_big(&sigma(&set, n, &layout.table)?, layout.rank_width)?;
        labels.push(s);
    }
    Ok((layout, labels))
}

/// One row of the size comparison against plain neighbor lists.
#[derive(Clone, Debug, PartialEq)]
pub struct AdvantageRow {
    pub n: u64,
    pub k: u64,
    /// `log2 C(n, ⌈k/2⌉) + log2 k + log2 n`.
    pub f: f64,
    pub half_n: f64,
    /// `⌈k/2⌉ · log2 n`.
    pub list_bits: f64,
    /// `⌈k/2⌉ + 2 log2 n`, the literal form of the second comparison.
    pub literal_bits: f64,
}

impl AdvantageRow {
    pub fn below_half_n(&self) -> bool {
        self.f < self.half_n
    }

    pub fn below_list(&self) -> bool {
        self.f < self.list_bits
    }

    pub fn tsv_header() -> &'static str {
        "n\tk\tf\tn/2\tceil(k/2)*log2(n)\tceil(k/2)+2log2(n)\tf<n/2\tf<list"
    }

    pub fn to_tsv(&self) -> String {
        format!(
            "{}\t{}\t{:.1}\t{:.1}\t{:.1}\t{:.1}\t{}\t{}",
            self.n,
            self.k,
            self.f,
            self.half_n,
            self.list_bits,
            self.literal_bits,
            self.below_half_n(),
            self.below_list()
        )
    }
}

pub fn advantage_range_check(n: u64, k: u64) -> Result<AdvantageRow> {
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("need 1 ≤ k ≤ n, got k = {k}, n = {n}")));
    }
    let half = k.div_ceil(2);
    let ln = (n as f64).log2();
    let f = log2_big(&binomial(n, half)) + (k as f64).log2() + ln;
    Ok(AdvantageRow {
        n,
        k,
        f,
        half_n: n as f64 / 2.0,
        list_bits: half as f64 * ln,
        literal_bits: half as f64 + 2.0 * ln,
    })
}

/// `points` values of `k` spaced geometrically over `[(e+1)√n, n/5]`.
pub fn advantage_grid(n: u64, points: usize) -> Vec<u64> {
    let lo = ((std::f64::consts::E + 1.0) * (n as f64).sqrt()).ceil();
    let hi = (n / 5) as f64;
    let mut ks: Vec<u64> = (0..points)
        .map(|i| {
            let x = if points == 1 { 0.0 } else { i as f64 / (points - 1) as f64 };
            (lo * (hi / lo).powf(x)).round().clamp(lo, hi) as u64
        })
        .collect();
    ks.dedup();
    ks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, FamilyTag};

    fn subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for mask in 0u32..1 << n {
            if mask.count_ones() as usize == m {
                out.push((0..n).filter(|&i| mask >> i & 1 == 1).collect());
            }
        }
        out
    }

    fn colex(a: &[usize], b: &[usize]) -> std::cmp::Ordering {
        a.iter().rev().cmp(b.iter().rev())
    }

    #[test]
    fn sigma_examples() {
        let t = Binomials::new(8, 3);
        assert_eq!(sigma(&[0, 1, 2], 8, &t).unwrap(), BigUint::zero());
        assert_eq!(sigma(&[1, 2, 4], 8, &t).unwrap(), BigUint::from(6u32));
        assert_eq!(sigma(&[5, 6, 7], 8, &t).unwrap(), BigUint::from(55u32));
        assert!(sigma(&[2, 1], 8, &t).is_err());
        assert!(sigma(&[8], 8, &t).is_err());
        assert_eq!(unrank(&BigUint::from(6u32), 3, 8, &t).unwrap(), vec![1, 2, 4]);
        assert_eq!(unrank(&BigUint::zero(), 3, 8, &t).unwrap(), vec![0, 1, 2]);
        assert!(unrank(&BigUint::from(56u32), 3, 8, &t).is_err());
    }

    #[test]
    fn exhaustive_bijection_and_colex_order() {
        for n in 0..=12 {
            let t = Binomials::new(n, n);
            for m in 0..=n {
                let mut all = subsets(n, m);
                all.sort_by(|a, b| colex(a, b));
                for (i, s) in all.iter().enumerate() {
                    let r = sigma(s, n, &t).unwrap();
                    assert_eq!(r, BigUint::from(i));
                    assert_eq!(&unrank(&r, m, n, &t).unwrap(), s);
                }
            }
        }
    }

    #[test]
    fn binomial_matches_pascal() {
        let t = Binomials::new(60, 60);
        for n in 0..=60u64 {
            for m in 0..=n {
                assert_eq!(&binomial(n, m), t.get(n as usize, m as usize).unwrap());
            }
        }
    }

    #[test]
    fn big_label_examples() {
        let g = Graph::new(4, 1, [(0, 1)]).unwrap();
        let (lay, l) = encode(&g, 1).unwrap();
        assert!(lay.adjacent(&l[0], &l[1]).unwrap());
        assert!(!lay.adjacent(&l[0], &l[2]).unwrap());
        assert_eq!(l[0].len(), 1 + 2 + 2 + 2);

        let n = 7;
        let edges: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let k = Graph::new(n, n - 1, edges).unwrap();
        let (lay, l) = encode(&k, n - 1).unwrap();
        for x in &l {
            assert!(x.get(0));
            assert_eq!(x.read_field(4, 3).unwrap(), 0);
        }
        for u in 0..n {
            for v in 0..n {
                assert_eq!(lay.adjacent(&l[u], &l[v]).unwrap(), u != v);
            }
        }
    }

    #[test]
    fn random_n200_k60() {
        let g = generate(FamilyTag::General, 200, 60, 3).unwrap();
        let (lay, l) = encode(&g, 60).unwrap();
        let want = 1 + 16 + (lay.table.get(200, 30).unwrap() - 1u32).bits() as usize;
        for x in &l {
            assert_eq!(x.len(), want);
        }
        for u in 0..200 {
            for v in u + 1..200 {
                assert_eq!(lay.adjacent(&l[u], &l[v]).unwrap(), g.has_edge(u, v));
            }
        }
    }

    #[test]
    fn dense_vertices_use_the_complement() {
        let n = 30;
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if (u * 7 + v * 3) % 5 != 0 {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::new(n, n - 1, edges).unwrap();
        let (lay, l) = encode(&g, n - 1).unwrap();
        assert!(l.iter().any(|x| x.get(0)));
        for u in 0..n {
            for v in u + 1..n {
                assert_eq!(lay.adjacent(&l[u], &l[v]).unwrap(), g.has_edge(u, v));
            }
        }
    }

    #[test]
    fn advantage_examples() {
        let r = advantage_range_check(1_000_000, 10_000).unwrap();
        assert!(r.below_half_n() && r.below_list());
        assert!((r.f - 46_000.0).abs() < 2_000.0, "{}", r.f);
        let full = advantage_range_check(1000, 1000).unwrap();
        assert!(!full.below_half_n());
        let ks = advantage_grid(10_000, 5);
        assert_eq!(ks.first(), Some(&372));
        assert_eq!(ks.last(), Some(&2000));
    }
}
