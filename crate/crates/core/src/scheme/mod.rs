//! The labeling schemes and the label file format shared by all of them.
//!
//! A label file starts with a header line such as
//! `scheme=outerplanar n=512 delta=3`, followed by one `<v> <bitlen>:<hex>`
//! line per vertex.

pub mod bounded;
pub mod combinadic;
pub mod outerplanar;
pub mod planar;

use std::fmt;
use std::str::FromStr;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::graph::Graph;

use outerplanar::Mode;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    Tree,
    Outerplanar,
    OuterplanarSplit,
    BoundedConcat,
    BoundedList,
    Combinadic,
    Planar,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 7] = [
        SchemeKind::Tree,
        SchemeKind::Outerplanar,
        SchemeKind::OuterplanarSplit,
        SchemeKind::BoundedConcat,
        SchemeKind::BoundedList,
        SchemeKind::Combinadic,
        SchemeKind::Planar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Tree => "tree",
            SchemeKind::Outerplanar => "outerplanar",
            SchemeKind::OuterplanarSplit => "outerplanar-split",
            SchemeKind::BoundedConcat => "bounded-concat",
            SchemeKind::BoundedList => "bounded-list",
            SchemeKind::Combinadic => "combinadic",
            SchemeKind::Planar => "planar",
        }
    }

    fn mode(self) -> Option<Mode> {
        match self {
            SchemeKind::Tree => Some(Mode::Tree),
            SchemeKind::Outerplanar => Some(Mode::Outerplanar),
            SchemeKind::OuterplanarSplit => Some(Mode::OuterplanarSplit),
            _ => None,
        }
    }

    /// Header key of the degree bound.
    fn bound_key(self) -> &'static str {
        if self == SchemeKind::Combinadic {
            "k"
        } else {
            "delta"
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown scheme {s:?}")))
    }
}

/// An encoded instance: header parameters plus one label per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelFile {
    pub kind: SchemeKind,
    pub n: usize,
    /// `delta`, or `k` for the combinadic scheme.
    pub bound: usize,
    pub forests: Option<usize>,
    pub labels: Vec<BitString>,
}

impl LabelFile {
    pub fn to_text(&self) -> String {
        let mut s = format!("scheme={} n={} {}={}", self.kind, self.n, self.kind.bound_key(), self.bound);
        if let Some(f) = self.forests {
            s.push_str(&format!(" forests={f}"));
        }
        s.push('\n');
        for (v, l) in self.labels.iter().enumerate() {
            s.push_str(&format!("{v} {}\n", l.to_record()));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, head) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty label file".into() })?;
        let bad = |msg: String| Error::Parse { line: 1, msg };
        let mut fields = std::collections::HashMap::new();
        for tok in head.split_whitespace() {
            let (k, v) = tok.split_once('=').ok_or_else(|| bad(format!("expected key=value, got {tok:?}")))?;
            fields.insert(k, v);
        }
        let kind: SchemeKind = fields
            .get("scheme")
            .ok_or_else(|| bad("missing scheme".into()))?
            .parse()
            .map_err(|e: Error| bad(e.to_string()))?;
        let num = |key: &str| -> Result<usize> {
            fields
                .get(key)
                .ok_or_else(|| bad(format!("missing {key}")))?
                .parse()
                .map_err(|_| bad(format!("bad value for {key}")))
        };
        let n = num("n")?;
        let bound = num(kind.bound_key())?;
        let forests = if kind == SchemeKind::BoundedConcat { Some(num("forests")?) } else { None };

        let mut labels = Vec::with_capacity(n);
        for (i, line) in lines {
            let at = |msg: String| Error::Parse { line: i + 1, msg };
            let (v, rec) = line.trim().split_once(' ').ok_or_else(|| at("expected `<v> <bits>:<hex>`".into()))?;
            let v: usize = v.parse().map_err(|_| at(format!("bad vertex {v:?}")))?;
            if v != labels.len() {
                return Err(at(format!("expected vertex {}, got {v}", labels.len())));
            }
            labels.push(BitString::from_record(rec.trim()).map_err(|e| at(e.to_string()))?);
        }
        if labels.len() != n {
            return Err(bad(format!("header says n = {n}, file has {} labels", labels.len())));
        }
        Ok(LabelFile { kind, n, bound, forests, labels })
    }

    pub fn decoder(&self) -> Result<AnyDecoder> {
        AnyDecoder::new(self.kind, self.n, self.bound, self.forests)
    }
}

/// Encodes `g` with the chosen scheme. `bound` is `Δ`, or `k` for the combinadic scheme.
pub fn encode(kind: SchemeKind, g: &Graph, bound: usize) -> Result<LabelFile> {
    let (labels, forests) = match kind {
        SchemeKind::Tree | SchemeKind::Outerplanar | SchemeKind::OuterplanarSplit => {
            (outerplanar::encode(g, kind.mode().unwrap(), bound)?.1, None)
        }
        SchemeKind::BoundedConcat => {
            let (f, l) = bounded::encode_concat(g, bound)?;
            (l, Some(f))
        }
        SchemeKind::BoundedList => (bounded::encode_neighborlist(g, bound)?, None),
        SchemeKind::Combinadic => (combinadic::encode(g, bound)?.1, None),
        SchemeKind::Planar => (planar::encode(g, bound)?.1, None),
    };
    Ok(LabelFile { kind, n: g.n(), bound, forests, labels })
}

/// Decoder for any scheme, built from label file header values.
#[derive(Clone, Debug)]
pub enum AnyDecoder {
    Outerplanar(outerplanar::Decoder),
    List(bounded::NeighborListDecoder),
    Concat(bounded::ConcatDecoder),
    Combinadic(Box<combinadic::Layout>),
    Planar(planar::PlanarConfig),
}

impl AnyDecoder {
    pub fn new(kind: SchemeKind, n: usize, bound: usize, forests: Option<usize>) -> Result<Self> {
        Ok(match kind {
            SchemeKind::Tree | SchemeKind::Outerplanar | SchemeKind::OuterplanarSplit => AnyDecoder::Outerplanar(
                outerplanar::Decoder::new(outerplanar::SchemeConfig::new(kind.mode().unwrap(), n as u64, bound)?),
            ),
            SchemeKind::BoundedList => AnyDecoder::List(bounded::NeighborListDecoder::new(n, bound)),
            SchemeKind::BoundedConcat => {
                let f = forests.ok_or_else(|| Error::InvalidArgument("missing forest count".into()))?;
                AnyDecoder::Concat(bounded::ConcatDecoder::new(n, bound, f)?)
            }
            SchemeKind::Combinadic => AnyDecoder::Combinadic(Box::new(combinadic::Layout::new(n, bound)?)),
            SchemeKind::Planar => AnyDecoder::Planar(planar::PlanarConfig::new(n as u64, bound)?),
        })
    }

    pub fn adjacent(&self, a: &BitString, b: &BitString) -> Result<bool> {
        Ok(self.adjacent_counted(a, b)?.0)
    }

    /// Adjacency plus the number of length-table probes (zero for schemes
    /// whose labels carry their layout explicitly).
    pub fn adjacent_counted(&self, a: &BitString, b: &BitString) -> Result<(bool, u32)> {
        match self {
            AnyDecoder::Outerplanar(d) => d.adjacent_counted(a, b),
            AnyDecoder::Concat(d) => d.adjacent_counted(a, b),
            AnyDecoder::List(d) => Ok((d.adjacent(a, b)?, 0)),
            AnyDecoder::Combinadic(d) => Ok((d.adjacent(a, b)?, 0)),
            AnyDecoder::Planar(d) => Ok((d.adjacent(a, b)?, 0)),
        }
    }
}
