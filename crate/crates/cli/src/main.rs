use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gtlie_core::diagrams::{self, Signature, StringDiagram};
use gtlie_core::search::{self, Identity, SearchOptions, SearchReport, SweepBudget};
use gtlie_core::words::enumerate_classes;
use gtlie_core::{goldman_turaev as gt, ConjClass, FatGraph};

#[derive(Parser)]
#[command(name = "gtlie", version, about = "Goldman bracket and Turaev cobracket on surfaces with boundary")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SurfaceArgs {
    /// Standard surface as `g=G,n=N`.
    #[arg(long, conflicts_with = "sigma")]
    surface: Option<String>,
    /// Explicit cyclic order of ends, e.g. `a+,b+,a-,b-`.
    #[arg(long)]
    sigma: Option<String>,
}

impl SurfaceArgs {
    fn graph(&self, config: &Config) -> Result<FatGraph> {
        let spec = self
            .sigma
            .clone()
            .or_else(|| self.surface.clone())
            .or_else(|| config.sigma.clone())
            .or_else(|| config.surface.clone())
            .unwrap_or_else(|| "g=1,n=1".into());
        spec.parse().with_context(|| format!("surface {spec:?}"))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Goldman bracket of two classes.
    Bracket {
        #[command(flatten)]
        surface: SurfaceArgs,
        u: String,
        v: String,
    },
    /// Turaev cobracket of a class.
    Cobracket {
        #[command(flatten)]
        surface: SurfaceArgs,
        w: String,
    },
    /// Self-intersection number of a class.
    Selfint {
        #[command(flatten)]
        surface: SurfaceArgs,
        w: String,
    },
    /// Intersection number of two classes.
    Intersect {
        #[command(flatten)]
        surface: SurfaceArgs,
        u: String,
        v: String,
    },
    /// Whether a class is represented by a simple closed curve.
    Simple {
        #[command(flatten)]
        surface: SurfaceArgs,
        w: String,
    },
    /// Check one identity on every tuple of classes up to a length.
    Check {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        identity: String,
        #[arg(long)]
        max_len: usize,
        /// Print only failing tuples and the summary.
        #[arg(long)]
        quiet: bool,
    },
    /// String diagram bookkeeping.
    Diagram {
        #[arg(value_enum)]
        action: DiagramAction,
        #[arg(long)]
        file: PathBuf,
    },
    /// Conjecture searches.
    Search {
        #[arg(value_enum)]
        kind: SearchKind,
        #[command(flatten)]
        surface: SurfaceArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, allow_hyphen_values = true)]
        n: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        m: Option<i64>,
        /// Per-class CSV export.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Run identity checkers over all tuples within a length budget.
    Sweep {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated; defaults to all.
        #[arg(long, value_delimiter = ',')]
        identities: Option<Vec<String>>,
        #[arg(long)]
        pairs_max_len: Option<usize>,
        #[arg(long)]
        triples_max_len: Option<usize>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    max_len: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, env = "GTLIE_WORKERS")]
    workers: Option<usize>,
    /// JSON file with any of the keys surface, sigma, max_len, n, m,
    /// workers, out, csv, checkpoint, identities.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DiagramAction {
    Validate,
    Signature,
    Dim,
    Glue,
    Compose,
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchKind {
    Turaev,
    Chas,
}

#[derive(Default, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    surface: Option<String>,
    sigma: Option<String>,
    max_len: Option<usize>,
    n: Option<i64>,
    m: Option<i64>,
    workers: Option<usize>,
    out: Option<PathBuf>,
    csv: Option<PathBuf>,
    checkpoint: Option<PathBuf>,
    identities: Option<Vec<String>>,
}

impl Config {
    fn load(path: Option<&Path>) -> Result<Config> {
        match path {
            None => Ok(Config::default()),
            Some(p) => {
                let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))
            }
        }
    }
}

fn class(g: &FatGraph, s: &str) -> Result<ConjClass> {
    let c: ConjClass = s.parse().with_context(|| format!("class {s:?}"))?;
    if !g.admits(&c) {
        bail!("class {c} uses generators beyond the {} of surface {}", g.k(), g.surface_sig());
    }
    Ok(c)
}

fn print(v: &Value) {
    println!("{}", serde_json::to_string(v).expect("json"));
}

fn write_report(report: &SearchReport, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => {
            fs::write(p, report.to_json_pretty() + "\n").with_context(|| format!("writing {}", p.display()))?;
            print(&json!({
                "out": p.display().to_string(),
                "totals": report.body.totals,
                "hits": report.body.hits.len(),
                "body_sha256": report.body_sha256,
            }));
        }
        None => println!("{}", report.to_json_pretty()),
    }
    Ok(())
}

/// A signature given directly as `{"g","k","l"}` or through a diagram.
fn signature_of(v: &Value) -> Result<Signature> {
    if v.get("involution").is_some() {
        let d: StringDiagram = serde_json::from_value(v.clone())?;
        return Ok(d.signature()?);
    }
    let s: Signature = serde_json::from_value(v.clone()).context("expected a signature {g,k,l} or a diagram")?;
    Ok(Signature::new(s.g, s.k, s.l)?)
}

fn sig_json(s: &Signature) -> Value {
    json!({"g": s.g, "k": s.k, "l": s.l, "chi": s.chi()})
}

fn diagram(action: DiagramAction, file: &Path) -> Result<ExitCode> {
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", file.display()))?;
    match action {
        DiagramAction::Validate => {
            let d: StringDiagram = serde_json::from_value(v)?;
            match d.validate() {
                Ok(faces) => print(&json!({"valid": true, "faces": faces})),
                Err(violations) => {
                    print(&json!({
                        "valid": false,
                        "violations": violations,
                        "messages": violations.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    }));
                    return Ok(ExitCode::FAILURE);
                }
            }
        }
        DiagramAction::Signature => print(&sig_json(&signature_of(&v)?)),
        DiagramAction::Dim => {
            let s = signature_of(&v)?;
            print(&json!({"signature": sig_json(&s), "dim": diagrams::moduli_dim(&s)?}));
        }
        DiagramAction::Glue => {
            let left = signature_of(v.get("left").context("missing \"left\"")?)?;
            let right = signature_of(v.get("right").context("missing \"right\"")?)?;
            let outs: Vec<usize> = serde_json::from_value(v.get("outputs").cloned().unwrap_or(json!([1])))?;
            let ins: Vec<usize> = serde_json::from_value(v.get("inputs").cloned().unwrap_or(json!([1])))?;
            let g = diagrams::glue_along(&left, &outs, &right, &ins)?;
            print(&json!({
                "signature": sig_json(&g.signature),
                "circles": g.circles,
                "dim": diagrams::moduli_dim(&g.signature)?,
                "dims": [diagrams::moduli_dim(&left)?, diagrams::moduli_dim(&right)?],
            }));
        }
        DiagramAction::Compose => {
            let s = signature_of(&v)?;
            print(&json!({"signature": sig_json(&s), "terms": diagrams::composition_terms(&s)?}));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn check(graph: &FatGraph, identity: &str, max_len: usize, quiet: bool) -> Result<ExitCode> {
    let id: Identity = identity.parse()?;
    let memo = gtlie_core::bialgebra::Memo::new(graph);
    let classes = enumerate_classes(graph.k(), max_len, false);
    let (mut pass, mut fail) = (0u64, 0u64);
    search::for_each_tuple(&classes, id.arity(), |args| {
        let names: Vec<String> = args.iter().map(|c| c.to_string()).collect();
        match id.defect(&memo, args) {
            None => {
                pass += 1;
                if !quiet {
                    println!("PASS {id} {}", names.join(" "));
                }
            }
            Some(d) => {
                fail += 1;
                println!("FAIL {id} {} defect={d}", names.join(" "));
            }
        }
        true
    });
    println!("{id}: {pass} passed, {fail} failed on {} up to length {max_len}", graph.surface_sig());
    Ok(if fail == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    let none = Config::default();
    match cli.command {
        Command::Bracket { surface, u, v } => {
            let g = surface.graph(&none)?;
            print(&gt::bracket(&g, &class(&g, &u)?, &class(&g, &v)?).to_json());
        }
        Command::Cobracket { surface, w } => {
            let g = surface.graph(&none)?;
            print(&gt::cobracket(&g, &class(&g, &w)?).to_json());
        }
        Command::Selfint { surface, w } => {
            let g = surface.graph(&none)?;
            let c = class(&g, &w)?;
            print(&json!({"class": c.to_string(), "self_link_count": gt::self_link_count(&g, &c)}));
        }
        Command::Intersect { surface, u, v } => {
            let g = surface.graph(&none)?;
            let (a, b) = (class(&g, &u)?, class(&g, &v)?);
            print(&json!({"u": a.to_string(), "v": b.to_string(), "intersection_count": gt::intersection_count(&g, &a, &b)?}));
        }
        Command::Simple { surface, w } => {
            let g = surface.graph(&none)?;
            let c = class(&g, &w)?;
            print(&json!({"class": c.to_string(), "simple": gt::is_simple(&g, &c)}));
        }
        Command::Check { surface, identity, max_len, quiet } => {
            return check(&surface.graph(&none)?, &identity, max_len, quiet);
        }
        Command::Diagram { action, file } => return diagram(action, &file),
        Command::Search { kind, surface, run, n, m, csv, checkpoint } => {
            let config = Config::load(run.config.as_deref())?;
            let g = surface.graph(&config)?;
            let max_len = run.max_len.or(config.max_len).context("--max-len is required")?;
            let opts = SearchOptions {
                workers: run.workers.or(config.workers).unwrap_or(0),
                checkpoint: checkpoint.or(config.checkpoint),
            };
            let report = match kind {
                SearchKind::Turaev => search::search_turaev_kernel(&g, max_len, &opts)?,
                SearchKind::Chas => {
                    let n = n.or(config.n).unwrap_or(2);
                    let m = m.or(config.m).unwrap_or(3);
                    search::check_chas_powers(&g, max_len, n, m, &opts)?
                }
            };
            if let Some(p) = csv.or(config.csv) {
                let f = fs::File::create(&p).with_context(|| format!("creating {}", p.display()))?;
                report.write_csv(f)?;
            }
            write_report(&report, run.out.or(config.out).as_deref())?;
            if report.body.params.get("theorem_backed") == Some(&json!(true)) && report.body.totals["mismatches"] > 0 {
                eprintln!("mismatch on a theorem-backed case: engine bug");
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Sweep { surface, run, identities, pairs_max_len, triples_max_len } => {
            let config = Config::load(run.config.as_deref())?;
            let g = surface.graph(&config)?;
            let max_len = run.max_len.or(config.max_len).context("--max-len is required")?;
            let names = identities.or(config.identities);
            let ids: Vec<Identity> = match names {
                None => Identity::ALL.to_vec(),
                Some(list) => list
                    .iter()
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| s.parse())
                    .collect::<Result<_, _>>()?,
            };
            let mut budget = SweepBudget::from_max_len(max_len);
            if let Some(p) = pairs_max_len {
                budget.pairs = p;
            }
            if let Some(t) = triples_max_len {
                budget.triples = t;
            }
            let opts = SearchOptions::with_workers(run.workers.or(config.workers).unwrap_or(0));
            match search::identity_sweep(&g, budget, &ids, &opts) {
                Ok(report) => write_report(&report, run.out.or(config.out).as_deref())?,
                Err(gtlie_core::Error::IdentityDefect(counterexample)) => {
                    println!("{counterexample}");
                    eprintln!("identity sweep found a defect");
                    return Ok(ExitCode::FAILURE);
                }
                Err(e) => bail!(e),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
