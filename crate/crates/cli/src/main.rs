use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use adjlabel::bits::ceil_log2;
use adjlabel::embed::embed;
use adjlabel::graph::generate;
use adjlabel::scheme::combinadic::{advantage_grid, advantage_range_check, AdvantageRow};
use adjlabel::scheme::{encode, LabelFile, SchemeKind};
use adjlabel::universal::{Flavor, UniversalParams};
use adjlabel::{Error, FamilyTag, Graph};
use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "labeler", version, about = "Adjacency labeling for bounded-degree graph families")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a random graph of the given family.
    Generate {
        #[arg(long)]
        family: FamilyTag,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Label every vertex of a graph file.
    Encode {
        #[arg(long)]
        scheme: SchemeKind,
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Degree bound (k for combinadic); defaults to the graph file's delta.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Decide adjacency of two vertices from their labels alone.
    Query {
        #[arg(short, long)]
        labels: PathBuf,
        u: usize,
        v: usize,
    },
    /// Compare the decoder with the graph on every ordered pair; exit 1 on any mismatch.
    Verify {
        #[arg(short, long)]
        graph: PathBuf,
        #[arg(short, long)]
        labels: PathBuf,
    },
    /// Size and timing table over a range of n, as TSV.
    Bench {
        #[arg(long)]
        scheme: SchemeKind,
        /// `2^a..2^b[:step]` or a comma-separated list.
        #[arg(long, default_value = "2^6..2^14")]
        sizes: String,
        #[arg(long, default_value_t = 3)]
        delta: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        pairs: usize,
        /// For combinadic: print the size comparison against neighbor lists instead.
        #[arg(long)]
        range: bool,
        #[arg(long, default_value = "10000,100000,1000000")]
        range_n: String,
        #[arg(long, default_value_t = 8)]
        points: usize,
    },
    /// Cluster table of the host graph, as TSV.
    UniversalDump {
        #[arg(long, default_value = "outerplanar")]
        flavor: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        delta: usize,
    },
    /// Embed a graph and print where each vertex landed, as TSV.
    EmbedAudit {
        #[arg(short, long)]
        graph: PathBuf,
        #[arg(long)]
        family: FamilyTag,
    },
}

enum Fail {
    Mismatch(String),
    Usage(String),
    Io(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::Infeasible(_) => Fail::Usage(e.to_string()),
            _ => Fail::Io(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail::Io(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Fail> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Fail::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Fail::Io(e.to_string())),
    }
}

fn parse_sizes(s: &str) -> Result<Vec<usize>, Fail> {
    let bad = || Fail::Usage(format!("cannot read sizes {s:?}"));
    let pow = |x: &str| -> Result<usize, Fail> {
        match x.trim().strip_prefix("2^") {
            Some(e) => e.parse::<u32>().ok().and_then(|e| 1usize.checked_shl(e)).ok_or_else(bad),
            None => x.trim().parse().map_err(|_| bad()),
        }
    };
    if let Some((a, b)) = s.split_once("..") {
        let (b, step) = match b.split_once(':') {
            Some((b, st)) => (b, st.parse::<u32>().map_err(|_| bad())?),
            None => (b, 1),
        };
        let (lo, hi) = (pow(a)?, pow(b)?);
        if !lo.is_power_of_two() || !hi.is_power_of_two() || lo > hi || step == 0 {
            return Err(bad());
        }
        let (ea, eb) = (lo.trailing_zeros(), hi.trailing_zeros());
        return Ok((ea..=eb).step_by(step as usize).map(|e| 1usize << e).collect());
    }
    s.split(',').map(pow).collect()
}

fn family_for(kind: SchemeKind) -> FamilyTag {
    match kind {
        SchemeKind::Tree => FamilyTag::Tree,
        SchemeKind::Outerplanar | SchemeKind::OuterplanarSplit => FamilyTag::Outerplanar,
        SchemeKind::Planar => FamilyTag::Planar,
        _ => FamilyTag::General,
    }
}

fn threads() {
    if let Some(t) = std::env::var("LABELER_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
}

fn run(cli: Cli) -> Result<(), Fail> {
    match cli.cmd {
        Cmd::Generate { family, n, delta, seed, output } => {
            let g = generate(family, n, delta, seed)?;
            write_out(output.as_deref(), &g.to_text())
        }
        Cmd::Encode { scheme, input, output, bound } => {
            let g = Graph::parse(&read(&input)?)?;
            let f = encode(scheme, &g, bound.unwrap_or(g.delta()))?;
            write_out(output.as_deref(), &f.to_text())
        }
        Cmd::Query { labels, u, v } => {
            let f = LabelFile::parse(&read(&labels)?)?;
            for x in [u, v] {
                if x >= f.n {
                    return Err(Fail::Usage(format!("vertex {x} out of range for n = {}", f.n)));
                }
            }
            let adj = f.decoder()?.adjacent(&f.labels[u], &f.labels[v])?;
            println!("{adj}");
            Ok(())
        }
        Cmd::Verify { graph, labels } => {
            let g = Graph::parse(&read(&graph)?)?;
            let f = LabelFile::parse(&read(&labels)?)?;
            if f.n != g.n() {
                return Err(Fail::Io(format!("label file has {} vertices, graph has {}", f.n, g.n())));
            }
            let dec = f.decoder()?;
            let n = g.n();
            let bad: Vec<(usize, usize, bool)> = (0..n)
                .into_par_iter()
                .map(|u| -> Result<Vec<(usize, usize, bool)>, Error> {
                    let mut out = Vec::new();
                    for v in (0..n).filter(|&v| v != u) {
                        let got = dec.adjacent(&f.labels[u], &f.labels[v])?;
                        if got != g.has_edge(u, v) {
                            out.push((u, v, got));
                        }
                    }
                    Ok(out)
                })
                .collect::<Result<Vec<_>, Error>>()?
                .concat();
            let distinct: std::collections::HashSet<_> = f.labels.iter().collect();
            if distinct.len() != n {
                return Err(Fail::Mismatch(format!("{} duplicate labels", n - distinct.len())));
            }
            if bad.is_empty() {
                println!("ok: {} ordered pairs agree", n * n.saturating_sub(1));
                Ok(())
            } else {
                for (u, v, got) in bad.iter().take(10) {
                    eprintln!("mismatch: ({u}, {v}) decoded {got}");
                }
                Err(Fail::Mismatch(format!("{} mismatched pairs", bad.len())))
            }
        }
        Cmd::Bench { scheme, sizes, delta, seed, pairs, range, range_n, points } => {
            if range {
                if scheme != SchemeKind::Combinadic {
                    return Err(Fail::Usage("--range applies to the combinadic scheme".into()));
                }
                println!("{}", AdvantageRow::tsv_header());
                for n in parse_sizes(&range_n)? {
                    let rows: Vec<AdvantageRow> = advantage_grid(n as u64, points)
                        .into_par_iter()
                        .map(|k| advantage_range_check(n as u64, k))
                        .collect::<Result<_, _>>()?;
                    for r in rows {
                        println!("{}", r.to_tsv());
                    }
                }
                return Ok(());
            }
            println!("n\tmax_bits\tmean_bits\tmax_minus_log2n\tencode_ns_per_vertex\tdecode_ns_per_pair\tmax_probes");
            for n in parse_sizes(&sizes)? {
                let g = generate(family_for(scheme), n, delta, seed)?;
                let t0 = Instant::now();
                let f = encode(scheme, &g, delta)?;
                let enc = t0.elapsed().as_nanos() as f64 / n as f64;
                let dec = f.decoder()?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let sample: Vec<(usize, usize)> =
                    (0..pairs).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
                let t1 = Instant::now();
                let mut probes = 0;
                for &(u, v) in &sample {
                    probes = probes.max(dec.adjacent_counted(&f.labels[u], &f.labels[v])?.1);
                }
                let dns = t1.elapsed().as_nanos() as f64 / pairs.max(1) as f64;
                let max = f.labels.iter().map(|l| l.len()).max().unwrap_or(0);
                let mean = f.labels.iter().map(|l| l.len()).sum::<usize>() as f64 / n as f64;
                let gap = max as i64 - ceil_log2(n as u64) as i64;
                println!("{n}\t{max}\t{mean:.2}\t{gap}\t{enc:.0}\t{dns:.0}\t{probes}");
            }
            Ok(())
        }
        Cmd::UniversalDump { flavor, n, delta } => {
            let flavor = match flavor.as_str() {
                "outerplanar" | "h" => Flavor::Outerplanar,
                "planar" | "pl" => Flavor::Planar,
                _ => return Err(Fail::Usage(format!("unknown flavor {flavor:?}"))),
            };
            let p = UniversalParams::new(flavor, n, delta)?;
            write_out(None, &p.cluster_table_tsv())
        }
        Cmd::EmbedAudit { graph, family } => {
            let g = Graph::parse(&read(&graph)?)?;
            let flavor = if family == FamilyTag::Planar { Flavor::Planar } else { Flavor::Outerplanar };
            let p = UniversalParams::new(flavor, g.n() as u64, g.delta())?;
            let e = embed(&g, &p, family)?;
            write_out(None, &e.audit_tsv(&p))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    threads();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Mismatch(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Fail::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
