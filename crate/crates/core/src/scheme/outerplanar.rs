//! The `log n + O(1)` scheme for bounded-degree trees and outerplanar graphs.
//!
//! A vertex embedded on host level `t` gets
//! `D | R | Type | Id (α_t bits) | s slots of β_t bits`, padded with `1 0*` to
//! a length shared by the whole instance. The suffix length
//! `F(t) = α_t + s·β_t` alone almost determines `t`: deep levels (the last
//! `r(Δ)` ones) store their depth in `Type`, and shallow levels have at most
//! two preimages of their length, told apart by the bit `R`.

use crate::bits::{ceil_log2, BitString};
use crate::embed::embed;
use crate::error::{Error, Result};
use crate::graph::{is_outerplanar, FamilyTag, Graph};
use crate::scheme::bounded::euler_orient;
use crate::universal::{levels_for, ClusterAddr, Flavor, UVertexId, UniversalParams};

/// Slot layouts of the scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// One slot: the edge to the parent in a rooted forest.
    Tree,
    /// `Δ` slots: every incident edge.
    Outerplanar,
    /// `⌊Δ/2⌋ + 1` slots: the out-edges of an Euler orientation.
    OuterplanarSplit,
}

impl Mode {
    pub fn slots(self, delta: usize) -> usize {
        match self {
            Mode::Tree => 1,
            Mode::Outerplanar => delta,
            Mode::OuterplanarSplit => delta / 2 + 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Tree => "tree",
            Mode::Outerplanar => "outerplanar",
            Mode::OuterplanarSplit => "outerplanar-split",
        }
    }
}

/// `r(Δ) = ⌈8(Δ+1)·log2(Δ+1)⌉`: number of deep levels.
pub fn deep_levels(delta: usize) -> u32 {
    let d = delta.max(1) as f64 + 1.0;
    (8.0 * d * d.log2()).ceil() as u32
}

/// Width of the `Type` field.
pub fn type_width(delta: usize) -> u32 {
    ceil_log2(deep_levels(delta) as u64 + 1)
}

/// `s_p = 2 + ⌈log2(r+1)⌉`, the prefix width shared by all labels.
pub fn prefix_width(delta: usize) -> u32 {
    2 + type_width(delta)
}

/// How a level is told apart from the others by the decoder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LevelClass {
    ShallowEarly,
    ShallowLate,
    /// Deep level `levels - τ`.
    Deep(u32),
}

/// Everything encoder and decoder share for one `(mode, levels, Δ)`.
#[derive(Clone, Debug)]
pub struct SchemeConfig {
    mode: Mode,
    delta: usize,
    slots: usize,
    r: u32,
    params: UniversalParams,
    alpha: Vec<u32>,
    beta: Vec<u32>,
    lengths: Vec<u32>,
    f_max: u32,
    /// Range of `F(t) - t` over shallow levels.
    window: Option<(i64, i64)>,
}

impl SchemeConfig {
    pub fn new(mode: Mode, n: u64, delta: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("need at least one vertex".into()));
        }
        Self::for_levels(mode, levels_for(n), delta)
    }

    pub fn for_levels(mode: Mode, levels: u32, delta: usize) -> Result<Self> {
        let params = UniversalParams::for_levels(Flavor::Outerplanar, levels, delta)?;
        let slots = mode.slots(delta);
        let (mut alpha, mut beta, mut lengths) = (Vec::new(), Vec::new(), Vec::new());
        for t in 1..=levels {
            let (a, b) = params.alpha_beta(t)?;
            alpha.push(a);
            beta.push(b);
            lengths.push(a + slots as u32 * b);
        }
        let f_max = *lengths.iter().max().unwrap();
        let r = deep_levels(delta);
        let shallow = levels.saturating_sub(r);
        let window = (shallow > 0).then(|| {
            let d = (1..=shallow).map(|t| lengths[t as usize - 1] as i64 - t as i64);
            (d.clone().min().unwrap(), d.max().unwrap())
        });
        Ok(SchemeConfig { mode, delta, slots, r, params, alpha, beta, lengths, f_max, window })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn deep_levels(&self) -> u32 {
        self.r
    }

    pub fn params(&self) -> &UniversalParams {
        &self.params
    }

    pub fn levels(&self) -> u32 {
        self.params.levels()
    }

    pub fn prefix_width(&self) -> u32 {
        prefix_width(self.delta)
    }

    /// `F(t) = α_t + s·β_t`.
    pub fn length_fn(&self, t: u32) -> Result<u32> {
        if t == 0 || t > self.levels() {
            return Err(Error::InvalidArgument(format!("level {t} outside [1, {}]", self.levels())));
        }
        Ok(self.lengths[t as usize - 1])
    }

    pub fn f_max(&self) -> u32 {
        self.f_max
    }

    /// Padded length of every label of the instance.
    pub fn uniform_len(&self) -> usize {
        (self.prefix_width() + self.f_max + 1) as usize
    }

    pub fn is_shallow(&self, t: u32) -> bool {
        t + self.r <= self.levels()
    }

    /// All levels with `F(t) = len`, ascending.
    pub fn preimages(&self, len: u32) -> Vec<u32> {
        (1..=self.levels()).filter(|&t| self.lengths[t as usize - 1] == len).collect()
    }

    /// Shallow levels with `F(t) = len`, ascending, probing only the levels
    /// allowed by the range of `F(t) - t`. Adds the number of probes to `probes`.
    pub fn shallow_preimages(&self, len: u32, probes: &mut u32) -> Vec<u32> {
        let Some((lo, hi)) = self.window else { return Vec::new() };
        let shallow = (self.levels() - self.r) as i64;
        let from = (len as i64 - hi).max(1);
        let to = (len as i64 - lo).min(shallow);
        let mut out = Vec::new();
        for t in from..=to {
            *probes += 1;
            if self.lengths[t as usize - 1] == len {
                out.push(t as u32);
            }
        }
        out
    }

    pub fn classify(&self, t: u32) -> Result<LevelClass> {
        let f = self.length_fn(t)?;
        if !self.is_shallow(t) {
            return Ok(LevelClass::Deep(self.levels() - t));
        }
        let pre = self.shallow_preimages(f, &mut 0);
        match pre.iter().position(|&x| x == t) {
            Some(0) => Ok(LevelClass::ShallowEarly),
            Some(1) => Ok(LevelClass::ShallowLate),
            _ => Err(Error::Internal(format!("length {f} of shallow level {t} has more than two preimages"))),
        }
    }

    fn prefix(&self, t: u32) -> Result<BitString> {
        let mut s = BitString::new();
        let tw = type_width(self.delta);
        match self.classify(t)? {
            LevelClass::ShallowEarly => {
                s.append_field(0b00, 2)?;
                s.append_field(0, tw)?;
            }
            LevelClass::ShallowLate => {
                s.append_field(0b01, 2)?;
                s.append_field(0, tw)?;
            }
            LevelClass::Deep(tau) => {
                s.append_field(0b10, 2)?;
                s.append_field(tau as u64, tw)?;
            }
        }
        Ok(s)
    }

    /// Label of a vertex with host id `id` and the given slot values (shorter
    /// lists are zero-filled).
    pub fn build_label(&self, id: UVertexId, slots: &[u64]) -> Result<BitString> {
        let (a, _) = self.params.id_to_cluster(id)?;
        let t = a.level;
        if slots.len() > self.slots {
            return Err(Error::InvalidArgument(format!("{} slot values for {} slots", slots.len(), self.slots)));
        }
        let mut s = self.prefix(t)?;
        s.append_field(id.0, self.alpha[t as usize - 1])?;
        let beta = self.beta[t as usize - 1];
        for i in 0..self.slots {
            s.append_field(slots.get(i).copied().unwrap_or(0), beta)?;
        }
        s.pad_unambiguous(self.uniform_len())
    }
}

/// Smallest level count whose uniform length is `padded_len`.
pub fn infer_instance(padded_len: usize, mode: Mode, delta: usize) -> Result<SchemeConfig> {
    for k in 1..=40 {
        let cfg = SchemeConfig::for_levels(mode, k, delta)?;
        match cfg.uniform_len().cmp(&padded_len) {
            std::cmp::Ordering::Equal => return Ok(cfg),
            std::cmp::Ordering::Greater => break,
            std::cmp::Ordering::Less => {}
        }
    }
    Err(Error::CorruptLabel(format!("no {} instance has labels of {padded_len} bits", mode.name())))
}

/// Encodes `g` and returns the shared configuration with one label per vertex.
pub fn encode(g: &Graph, mode: Mode, delta: usize) -> Result<(SchemeConfig, Vec<BitString>)> {
    if g.max_degree() > delta {
        return Err(Error::InvalidArgument(format!("max degree {} exceeds Δ = {delta}", g.max_degree())));
    }
    let family = match mode {
        Mode::Tree => {
            if g.forest_parents().is_none() {
                return Err(Error::FamilyMismatch("the tree scheme needs a forest"));
            }
            FamilyTag::Tree
        }
        _ => {
            if !is_outerplanar(g) {
                return Err(Error::FamilyMismatch("graph is not outerplanar"));
            }
            FamilyTag::Outerplanar
        }
    };
    let cfg = SchemeConfig::new(mode, g.n() as u64, delta)?;
    let p = cfg.params();
    let e = embed(g, p, family)?;
    let rank = |v: usize, u: usize| p.edge_rank(e.phi(v), e.phi(u)).map(|r| r.0);

    let stored: Vec<Vec<usize>> = match mode {
        Mode::Tree => {
            let parent = g.forest_parents().unwrap();
            parent.into_iter().map(|x| x.into_iter().collect()).collect()
        }
        Mode::Outerplanar => (0..g.n()).map(|v| g.neighbors(v).to_vec()).collect(),
        Mode::OuterplanarSplit => euler_orient(g).out,
    };
    let mut labels = Vec::with_capacity(g.n());
    for (v, targets) in stored.iter().enumerate() {
        let mut slots = targets.iter().map(|&u| rank(v, u)).collect::<Result<Vec<u64>>>()?;
        slots.sort_unstable();
        labels.push(cfg.build_label(e.phi(v), &slots)?);
    }
    Ok((cfg, labels))
}

/// A decoded label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parsed {
    pub level: u32,
    pub id: UVertexId,
    pub cluster: ClusterAddr,
    pub slots: Vec<u64>,
}

/// Two-label adjacency test for one instance.
#[derive(Clone, Debug)]
pub struct Decoder {
    cfg: SchemeConfig,
}

impl Decoder {
    pub fn new(cfg: SchemeConfig) -> Self {
        Decoder { cfg }
    }

    /// Decoder for labels of `padded_len` bits.
    pub fn for_label_len(padded_len: usize, mode: Mode, delta: usize) -> Result<Self> {
        Ok(Decoder { cfg: infer_instance(padded_len, mode, delta)? })
    }

    pub fn config(&self) -> &SchemeConfig {
        &self.cfg
    }

    /// Parses a padded label, counting probes of the length table.
    pub fn parse(&self, label: &BitString, probes: &mut u32) -> Result<Parsed> {
        let cfg = &self.cfg;
        if label.len() != cfg.uniform_len() {
            return Err(Error::CorruptLabel(format!(
                "label has {} bits, instance uses {}",
                label.len(),
                cfg.uniform_len()
            )));
        }
        let s = label.strip_padding()?;
        let sp = cfg.prefix_width() as usize;
        if s.len() < sp {
            return Err(Error::CorruptLabel("label shorter than its prefix".into()));
        }
        let flags = s.read_field(0, 2)?;
        let tau = s.read_field(2, type_width(cfg.delta))?;
        let len = (s.len() - sp) as u32;
        let level = match flags {
            0b00 | 0b01 => {
                if tau != 0 {
                    return Err(Error::CorruptLabel("shallow label with a nonzero type".into()));
                }
                let pre = cfg.shallow_preimages(len, probes);
                *pre.get(flags as usize)
                    .ok_or_else(|| Error::CorruptLabel(format!("no shallow level has suffix length {len}")))?
            }
            0b10 => {
                if tau >= cfg.r as u64 || tau >= cfg.levels() as u64 {
                    return Err(Error::CorruptLabel(format!("deep type {tau} out of range")));
                }
                let t = cfg.levels() - tau as u32;
                if cfg.is_shallow(t) {
                    return Err(Error::CorruptLabel(format!("type {tau} names a shallow level")));
                }
                *probes += 1;
                if cfg.lengths[t as usize - 1] != len {
                    return Err(Error::CorruptLabel(format!("suffix length {len} does not match level {t}")));
                }
                t
            }
            _ => return Err(Error::CorruptLabel("invalid D/R flags".into())),
        };
        let alpha = cfg.alpha[level as usize - 1];
        let beta = cfg.beta[level as usize - 1];
        let id = UVertexId(s.read_field(sp, alpha)?);
        let (cluster, _) = cfg
            .params
            .id_to_cluster(id)
            .map_err(|_| Error::CorruptLabel(format!("host id {} out of range", id.0)))?;
        if cluster.level != level {
            return Err(Error::CorruptLabel(format!("host id {} is not on level {level}", id.0)));
        }
        let slots = (0..cfg.slots)
            .map(|i| s.read_field(sp + alpha as usize + i * beta as usize, beta))
            .collect::<Result<Vec<_>>>()?;
        Ok(Parsed { level, id, cluster, slots })
    }

    /// Adjacency of the two labelled vertices, with the number of length-table probes.
    pub fn adjacent_counted(&self, a: &BitString, b: &BitString) -> Result<(bool, u32)> {
        let mut probes = 0;
        let pa = self.parse(a, &mut probes)?;
        let pb = self.parse(b, &mut probes)?;
        Ok((self.adjacent_parsed(&pa, &pb)?, probes))
    }

    pub fn adjacent(&self, a: &BitString, b: &BitString) -> Result<bool> {
        Ok(self.adjacent_counted(a, b)?.0)
    }

    pub fn adjacent_parsed(&self, a: &Parsed, b: &Parsed) -> Result<bool> {
        let p = &self.cfg.params;
        if a.id == b.id || !p.clusters_adjacent(a.cluster, b.cluster) {
            return Ok(false);
        }
        let ab = p.edge_rank(a.id, b.id)?.0;
        if a.slots.contains(&ab) {
            return Ok(true);
        }
        if self.cfg.mode == Mode::Outerplanar {
            return Ok(false);
        }
        let ba = p.edge_rank(b.id, a.id)?.0;
        Ok(b.slots.contains(&ba))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;
    use proptest::prelude::*;

    fn all_pairs_agree(g: &Graph, mode: Mode, delta: usize) {
        let (cfg, labels) = encode(g, mode, delta).unwrap();
        let dec = Decoder::new(cfg.clone());
        for l in &labels {
            assert_eq!(l.len(), cfg.uniform_len());
        }
        for u in 0..g.n() {
            for v in u + 1..g.n() {
                let got = dec.adjacent(&labels[u], &labels[v]).unwrap();
                assert_eq!(got, g.has_edge(u, v), "{} pair ({u},{v})", mode.name());
                assert_eq!(got, dec.adjacent(&labels[v], &labels[u]).unwrap());
            }
        }
    }

    #[test]
    fn constants() {
        assert_eq!(deep_levels(1), 16);
        assert_eq!(deep_levels(3), 64);
        assert_eq!(prefix_width(1), 2 + 5);
        assert_eq!(prefix_width(3), 2 + 7);
        assert_eq!(Mode::OuterplanarSplit.slots(5), 3);
    }

    #[test]
    fn length_fn_with_one_slot() {
        let cfg = SchemeConfig::for_levels(Mode::Tree, 12, 3).unwrap();
        for t in 1..=12 {
            let (a, b) = cfg.params().alpha_beta(t).unwrap();
            assert_eq!(cfg.length_fn(t).unwrap(), a + b);
        }
    }

    #[test]
    fn length_fn_is_not_monotone() {
        let cfg = SchemeConfig::for_levels(Mode::Outerplanar, 20, 3).unwrap();
        let f: Vec<u32> = (1..=20).map(|t| cfg.length_fn(t).unwrap()).collect();
        assert!(f.windows(2).any(|w| w[1] < w[0]), "{f:?}");
    }

    #[test]
    fn preimage_examples() {
        let cfg = SchemeConfig::new(Mode::Outerplanar, (1 << 20) - 1, 3).unwrap();
        let f1 = cfg.length_fn(1).unwrap();
        assert!(cfg.preimages(f1).contains(&1));
        assert!(cfg.preimages(100_000).is_empty());

        let cfg = SchemeConfig::for_levels(Mode::Tree, 24, 1).unwrap();
        for t in 1..=24 - cfg.deep_levels() {
            let f = cfg.length_fn(t).unwrap();
            let scan: Vec<u32> = cfg.preimages(f).into_iter().filter(|&x| cfg.is_shallow(x)).collect();
            assert_eq!(cfg.shallow_preimages(f, &mut 0), scan);
            assert!(scan.len() <= 2);
        }
    }

    #[test]
    fn classify_examples() {
        let cfg = SchemeConfig::for_levels(Mode::Tree, 24, 1).unwrap();
        assert_eq!(cfg.classify(24).unwrap(), LevelClass::Deep(0));
        assert_eq!(cfg.classify(1).unwrap(), LevelClass::ShallowEarly);
        for t in 1..=24 {
            if let LevelClass::ShallowLate = cfg.classify(t).unwrap() {
                let f = cfg.length_fn(t).unwrap();
                let first = cfg.preimages(f)[0];
                assert!(first < t);
                assert_eq!(cfg.classify(first).unwrap(), LevelClass::ShallowEarly);
            }
        }
    }

    #[test]
    fn uniform_length_increases_with_levels() {
        for delta in 1..=8 {
            for mode in [Mode::Tree, Mode::Outerplanar, Mode::OuterplanarSplit] {
                let lens: Vec<usize> = (2..=26)
                    .map(|k| SchemeConfig::for_levels(mode, k, delta).unwrap().uniform_len())
                    .collect();
                assert!(lens.windows(2).all(|w| w[0] < w[1]), "Δ={delta} {}", mode.name());
            }
        }
    }

    #[test]
    fn infer_examples() {
        let cfg = SchemeConfig::for_levels(Mode::OuterplanarSplit, 7, 3).unwrap();
        let got = infer_instance(cfg.uniform_len(), Mode::OuterplanarSplit, 3).unwrap();
        assert_eq!(got.levels(), 7);
        assert!(infer_instance(1, Mode::Tree, 3).is_err());
    }

    #[test]
    fn tree_examples() {
        let single = Graph::new(1, 0, []).unwrap();
        let (cfg, labels) = encode(&single, Mode::Tree, 1).unwrap();
        assert_eq!(labels.len(), 1);
        assert_eq!(labels[0].len(), cfg.uniform_len());

        let path = Graph::new(3, 2, [(0, 1), (1, 2)]).unwrap();
        let (cfg, l) = encode(&path, Mode::Tree, 2).unwrap();
        let dec = Decoder::new(cfg);
        assert!(dec.adjacent(&l[0], &l[1]).unwrap());
        assert!(!dec.adjacent(&l[0], &l[2]).unwrap());
        assert!(dec.adjacent(&l[1], &l[2]).unwrap());

        let star = Graph::new(4, 3, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let (cfg, l) = encode(&star, Mode::Tree, 3).unwrap();
        let dec = Decoder::new(cfg);
        assert!(!dec.adjacent(&l[1], &l[2]).unwrap());
        assert!(!dec.adjacent(&l[2], &l[3]).unwrap());
    }

    #[test]
    fn rejects_wrong_family() {
        let tri = Graph::new(3, 2, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(encode(&tri, Mode::Tree, 2).is_err());
        let k4 = Graph::new(4, 3, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(encode(&k4, Mode::Outerplanar, 3).is_err());
        assert!(encode(&tri, Mode::Outerplanar, 1).is_err());
    }

    #[test]
    fn outerplanar_n512_all_pairs() {
        let g = generate(FamilyTag::Outerplanar, 512, 4, 7).unwrap();
        all_pairs_agree(&g, Mode::Outerplanar, 4);
        all_pairs_agree(&g, Mode::OuterplanarSplit, 4);
    }

    #[test]
    fn corrupt_labels_are_reported() {
        let g = generate(FamilyTag::Tree, 100, 3, 1).unwrap();
        let (cfg, labels) = encode(&g, Mode::Tree, 3).unwrap();
        let dec = Decoder::new(cfg);
        let zeros = BitString::from_record(&format!("{}:{}", labels[0].len(), "0".repeat(labels[0].len().div_ceil(4))));
        if let Ok(z) = zeros {
            assert!(dec.adjacent(&z, &labels[1]).is_err());
        }
        let short = labels[0].slice(0, labels[0].len() - 1);
        assert!(dec.adjacent(&short, &labels[1]).is_err());
        let mut bad = labels[0].clone();
        bad.flip(0);
        bad.flip(1);
        assert!(dec.adjacent(&bad, &labels[1]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn decode_matches_oracle(seed in any::<u64>(), n in 1usize..120, delta in 2usize..6, m in 0usize..3) {
            let mode = [Mode::Tree, Mode::Outerplanar, Mode::OuterplanarSplit][m];
            let fam = if mode == Mode::Tree { FamilyTag::Tree } else { FamilyTag::Outerplanar };
            let g = generate(fam, n, delta, seed).unwrap();
            let (cfg, labels) = encode(&g, mode, delta).unwrap();
            let mut seen = std::collections::HashSet::new();
            for l in &labels {
                prop_assert!(seen.insert(l.clone()));
                prop_assert_eq!(l.pad_unambiguous(l.len() + 1).unwrap().strip_padding().unwrap(), l.clone());
            }
            let dec = Decoder::new(cfg);
            for u in 0..n {
                for v in u + 1..n {
                    prop_assert_eq!(dec.adjacent(&labels[u], &labels[v]).unwrap(), g.has_edge(u, v));
                }
            }
        }
    }
}
