//! Bounded-degree planar graphs: `level | id | ⌈Δ/2⌉ slots`, with lengths
//! varying by level and no padding.

use crate::bits::{ceil_log2, BitString};
use crate::embed::embed;
use crate::error::{Error, Result};
use crate::graph::{is_planar, FamilyTag, Graph};
use crate::scheme::bounded::euler_orient;
use crate::universal::{ClusterAddr, Flavor, UVertexId, UniversalParams};

#[derive(Clone, Debug)]
pub struct PlanarConfig {
    params: UniversalParams,
    slots: usize,
    level_width: u32,
    alpha: Vec<u32>,
    beta: Vec<u32>,
}

impl PlanarConfig {
    pub fn new(n: u64, delta: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("need at least one vertex".into()));
        }
        let params = UniversalParams::new(Flavor::Planar, n, delta)?;
        let levels = params.levels();
        let (mut alpha, mut beta) = (Vec::new(), Vec::new());
        for t in 1..=levels {
            let (a, b) = params.alpha_beta(t)?;
            alpha.push(a);
            beta.push(b);
        }
        Ok(PlanarConfig {
            params,
            slots: delta.div_ceil(2),
            level_width: ceil_log2(levels as u64 + 1),
            alpha,
            beta,
        })
    }

    pub fn params(&self) -> &UniversalParams {
        &self.params
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    /// Bit length of every label on level `t`.
    pub fn label_len(&self, t: u32) -> Result<usize> {
        if t == 0 || t > self.params.levels() {
            return Err(Error::InvalidArgument(format!("level {t} outside [1, {}]", self.params.levels())));
        }
        let i = t as usize - 1;
        Ok(self.level_width as usize + self.alpha[i] as usize + self.slots * self.beta[i] as usize)
    }

    pub fn build_label(&self, id: UVertexId, slots: &[u64]) -> Result<BitString> {
        let (a, _) = self.params.id_to_cluster(id)?;
        let i = a.level as usize - 1;
        let mut s = BitString::with_capacity(self.label_len(a.level)?);
        s.append_field(a.level as u64, self.level_width)?;
        s.append_field(id.0, self.alpha[i])?;
        for j in 0..self.slots {
            s.append_field(slots.get(j).copied().unwrap_or(0), self.beta[i])?;
        }
        Ok(s)
    }

    fn parse(&self, l: &BitString) -> Result<(UVertexId, ClusterAddr, Vec<u64>)> {
        let t = l.read_field(0, self.level_width)? as u32;
        let want = self
            .label_len(t)
            .map_err(|_| Error::CorruptLabel(format!("level field {t} out of range")))?;
        if l.len() != want {
            return Err(Error::CorruptLabel(format!("level {t} label has {} bits, expected {want}", l.len())));
        }
        let i = t as usize - 1;
        let lw = self.level_width as usize;
        let id = UVertexId(l.read_field(lw, self.alpha[i])?);
        let (a, _) = self
            .params
            .id_to_cluster(id)
            .map_err(|_| Error::CorruptLabel(format!("host id {} out of range", id.0)))?;
        if a.level != t {
            return Err(Error::CorruptLabel(format!("host id {} is not on level {t}", id.0)));
        }
        let base = lw + self.alpha[i] as usize;
        let slots = (0..self.slots)
            .map(|j| l.read_field(base + j * self.beta[i] as usize, self.beta[i]))
            .collect::<Result<Vec<_>>>()?;
        Ok((id, a, slots))
    }

    pub fn adjacent(&self, a: &BitString, b: &BitString) -> Result<bool> {
        let (ia, ca, sa) = self.parse(a)?;
        let (ib, cb, sb) = self.parse(b)?;
        if ia == ib || !self.params.clusters_adjacent(ca, cb) {
            return Ok(false);
        }
        Ok(sa.contains(&self.params.edge_rank(ia, ib)?.0) || sb.contains(&self.params.edge_rank(ib, ia)?.0))
    }
}

pub fn encode(g: &Graph, delta: usize) -> Result<(PlanarConfig, Vec<BitString>)> {
    if g.max_degree() > delta {
        return Err(Error::InvalidArgument(format!("max degree {} exceeds Δ = {delta}", g.max_degree())));
    }
    if !is_planar(g) {
        return Err(Error::FamilyMismatch("graph is not planar"));
    }
    let cfg = PlanarConfig::new(g.n() as u64, delta)?;
    let p = cfg.params();
    let e = embed(g, p, FamilyTag::Planar)?;
    let o = euler_orient(g);
    let mut labels = Vec::with_capacity(g.n());
    for (v, out) in o.out.iter().enumerate() {
        let mut slots = out
            .iter()
            .map(|&u| p.edge_rank(e.phi(v), e.phi(u)).map(|r| r.0))
            .collect::<Result<Vec<_>>>()?;
        slots.sort_unstable();
        labels.push(cfg.build_label(e.phi(v), &slots)?);
    }
    Ok((cfg, labels))
}

/// `(max bits, mean bits)` over the labels.
pub fn size_report(labels: &[BitString]) -> (usize, f64) {
    let max = labels.iter().map(BitString::len).max().unwrap_or(0);
    let mean = if labels.is_empty() {
        0.0
    } else {
        labels.iter().map(BitString::len).sum::<usize>() as f64 / labels.len() as f64
    };
    (max, mean)
}
