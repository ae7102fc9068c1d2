//! Batch searches over conjugacy classes with reproducible reports.
//!
//! Classes are enumerated one length stratum at a time. Within a stratum the
//! work is split by two-letter prefix and spread over a fixed-size worker
//! pool; results are concatenated in prefix order, so output does not depend
//! on the worker count. A checkpoint file records each finished stratum as
//! one JSON line and lets an interrupted search pick up where it stopped.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::bialgebra::{self, LieOps, Memo};
use crate::goldman_turaev::{bracket, cobracket, self_link_count};
use crate::surface::FatGraph;
use crate::words::{enumerate_classes, enumerate_stratum, ConjClass, Letter};
use crate::{Error, ENGINE_VERSION};

#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    /// Worker threads; `0` lets the pool pick.
    pub workers: usize,
    pub checkpoint: Option<PathBuf>,
}

impl SearchOptions {
    pub fn with_workers(workers: usize) -> Self {
        SearchOptions { workers, checkpoint: None }
    }

    fn pool(&self) -> Result<rayon::ThreadPool, Error> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::BadParams(e.to_string()))
    }
}

/// Per-class record of a search. `witness` is filled for hits only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassRow {
    pub class: ConjClass,
    pub length: usize,
    pub primitive: bool,
    pub simple: bool,
    pub self_link: usize,
    pub predicate_value: bool,
    pub hit: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

/// The deterministic part of a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportBody {
    pub surface: String,
    pub sigma: String,
    pub max_len: usize,
    pub predicate: String,
    pub params: Value,
    pub hits: Vec<Value>,
    pub totals: BTreeMap<String, u64>,
    pub engine_version: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub body: ReportBody,
    pub body_sha256: String,
    pub wall_clock_seconds: f64,
    #[serde(skip)]
    pub rows: Vec<ClassRow>,
}

impl SearchReport {
    fn new(body: ReportBody, rows: Vec<ClassRow>, started: Instant) -> Self {
        let bytes = serde_json::to_vec(&body).expect("report body serializes");
        SearchReport {
            body_sha256: hex::encode(Sha256::digest(&bytes)),
            body,
            rows,
            wall_clock_seconds: started.elapsed().as_secs_f64(),
        }
    }

    pub fn body_json(&self) -> String {
        serde_json::to_string(&self.body).expect("report body serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Columns `class,length,primitive,simple,self_link,predicate_value`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["class", "length", "primitive", "simple", "self_link", "predicate_value"])
            .map_err(csv_err)?;
        for r in &self.rows {
            w.write_record([
                r.class.to_string(),
                r.length.to_string(),
                r.primitive.to_string(),
                r.simple.to_string(),
                r.self_link.to_string(),
                r.predicate_value.to_string(),
            ])
            .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e),
        other => Error::BadParams(format!("{other:?}")),
    }
}

fn body(graph: &FatGraph, max_len: usize, predicate: &str, params: Value) -> ReportBody {
    ReportBody {
        surface: graph.surface_sig().to_string(),
        sigma: graph.to_string(),
        max_len,
        predicate: predicate.into(),
        params,
        hits: Vec::new(),
        totals: BTreeMap::new(),
        engine_version: ENGINE_VERSION.into(),
    }
}

/// Reduced prefixes of length `min(2, len)`, in lexicographic order.
fn prefixes(k: usize, len: usize) -> Vec<Vec<Letter>> {
    let letters: Vec<Letter> = (0..2 * k).map(Letter::from_code).collect();
    if len < 2 {
        return letters.into_iter().map(|x| vec![x]).collect();
    }
    let mut out = Vec::new();
    for &x in &letters {
        for &y in &letters {
            if y != x.inverse() && y >= x {
                out.push(vec![x, y]);
            }
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct StratumLine {
    length: usize,
    rows: Vec<ClassRow>,
}

#[derive(Serialize, Deserialize, PartialEq)]
struct HeaderLine {
    checkpoint: Value,
}

/// Reads the finished strata of a checkpoint, ignoring a truncated final
/// line, and rewrites the file with only the good lines.
fn load_checkpoint(path: &Path, header: &Value) -> Result<BTreeMap<usize, Vec<ClassRow>>, Error> {
    let mut done = BTreeMap::new();
    if !path.exists() {
        let mut f = File::create(path)?;
        writeln!(f, "{}", serde_json::to_string(&HeaderLine { checkpoint: header.clone() })?)?;
        return Ok(done);
    }
    let lines: Vec<String> = BufReader::new(File::open(path)?).lines().collect::<Result<_, _>>()?;
    let mut good = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        let last = i + 1 == lines.len();
        if i == 0 {
            match serde_json::from_str::<HeaderLine>(line) {
                Ok(h) if &h.checkpoint == header => {}
                Ok(h) => {
                    return Err(Error::Checkpoint(format!(
                        "{} was written for {}, not {}",
                        path.display(),
                        h.checkpoint,
                        header
                    )))
                }
                Err(_) if last => break,
                Err(e) => return Err(Error::Checkpoint(format!("{}: bad header: {e}", path.display()))),
            }
        } else {
            match serde_json::from_str::<StratumLine>(line) {
                Ok(s) => {
                    done.insert(s.length, s.rows);
                }
                Err(_) if last => break,
                Err(e) => return Err(Error::Checkpoint(format!("{} line {}: {e}", path.display(), i + 1))),
            }
        }
        good.push(line.as_str());
    }
    let mut f = File::create(path)?;
    if good.is_empty() {
        writeln!(f, "{}", serde_json::to_string(&HeaderLine { checkpoint: header.clone() })?)?;
    } else {
        for line in &good {
            writeln!(f, "{line}")?;
        }
    }
    Ok(done)
}

/// Evaluates `eval` on every class of length `1..=max_len`, optionally
/// primitive only, returning rows in canonical order.
fn run_strata<F>(
    graph: &FatGraph,
    max_len: usize,
    primitive_only: bool,
    header: &Value,
    opts: &SearchOptions,
    eval: F,
) -> Result<Vec<ClassRow>, Error>
where
    F: Fn(&ConjClass) -> ClassRow + Sync,
{
    let pool = opts.pool()?;
    let k = graph.k();
    let mut done = match &opts.checkpoint {
        Some(p) => load_checkpoint(p, header)?,
        None => BTreeMap::new(),
    };
    let mut rows = Vec::new();
    for len in 1..=max_len {
        if let Some(r) = done.remove(&len) {
            rows.extend(r);
            continue;
        }
        let units = prefixes(k, len);
        let parts: Vec<Vec<ClassRow>> = pool.install(|| {
            units
                .par_iter()
                .map(|p| enumerate_stratum(k, len, p, primitive_only).iter().map(&eval).collect())
                .collect()
        });
        let stratum: Vec<ClassRow> = parts.into_iter().flatten().collect();
        if let Some(p) = &opts.checkpoint {
            let mut f = OpenOptions::new().append(true).open(p)?;
            writeln!(f, "{}", serde_json::to_string(&StratumLine { length: len, rows: stratum.clone() })?)?;
            f.flush()?;
        }
        rows.extend(stratum);
    }
    Ok(rows)
}

fn surface_key(graph: &FatGraph) -> String {
    graph.to_string()
}

/// Primitive non-simple classes with vanishing cobracket. Each hit also
/// records the cobracket of its square.
pub fn search_turaev_kernel(graph: &FatGraph, max_len: usize, opts: &SearchOptions) -> Result<SearchReport, Error> {
    let started = Instant::now();
    let header = json!({"predicate": "turaev_kernel", "sigma": surface_key(graph)});
    let rows = run_strata(graph, max_len, true, &header, opts, |w| {
        let self_link = self_link_count(graph, w);
        let simple = self_link == 0;
        let delta = cobracket(graph, w);
        let hit = !simple && delta.is_zero();
        let witness = hit.then(|| {
            let square = cobracket(graph, &w.pow(2).expect("nonzero power"));
            json!({
                "multiplicity": 1,
                "cobracket": delta.to_json(),
                "square_cobracket": square.to_json(),
                "square_cobracket_zero": square.is_zero(),
            })
        });
        ClassRow {
            class: w.clone(),
            length: w.len(),
            primitive: true,
            simple,
            self_link,
            predicate_value: hit,
            hit,
            witness,
        }
    })?;
    let mut b = body(graph, max_len, "turaev_kernel", json!({}));
    let count = |f: &dyn Fn(&ClassRow) -> bool| rows.iter().filter(|r| f(r)).count() as u64;
    b.totals.insert("classes".into(), rows.len() as u64);
    b.totals.insert("simple".into(), count(&|r| r.simple));
    b.totals.insert("nonsimple".into(), count(&|r| !r.simple));
    b.totals.insert("hits".into(), count(&|r| r.hit));
    b.totals.insert(
        "hits_square_cobracket_zero".into(),
        count(&|r| r.hit && r.witness.as_ref().is_some_and(|w| w["square_cobracket_zero"] == json!(true))),
    );
    b.hits = rows.iter().filter(|r| r.hit).map(|r| serde_json::to_value(r).unwrap()).collect();
    Ok(SearchReport::new(b, rows, started))
}

/// `(n, m)` pairs for which vanishing of `[α^n, α^m]` is known to be
/// equivalent to simplicity of `α`.
pub fn chas_theorem_backed(n: i64, m: i64) -> bool {
    matches!((n.min(m), n.max(m)), (2, 3) | (-1, 1))
}

/// Cross-tabulates vanishing of `[α^n, α^m]` against simplicity over
/// primitive `α`. Mismatches are the hits.
pub fn check_chas_powers(
    graph: &FatGraph,
    max_len: usize,
    n: i64,
    m: i64,
    opts: &SearchOptions,
) -> Result<SearchReport, Error> {
    if n == m || n == 0 || m == 0 {
        return Err(Error::BadParams(format!("need n != m and nm != 0, got n={n}, m={m}")));
    }
    let started = Instant::now();
    let backed = chas_theorem_backed(n, m);
    let header = json!({"predicate": "chas_powers", "sigma": surface_key(graph), "n": n, "m": m});
    let rows = run_strata(graph, max_len, true, &header, opts, |a| {
        let self_link = self_link_count(graph, a);
        let simple = self_link == 0;
        let value = bracket(graph, &a.pow(n).expect("nonzero"), &a.pow(m).expect("nonzero"));
        let vanishes = value.is_zero();
        let hit = vanishes != simple;
        ClassRow {
            class: a.clone(),
            length: a.len(),
            primitive: true,
            simple,
            self_link,
            predicate_value: vanishes,
            hit,
            witness: hit.then(|| json!({"bracket": value.to_json(), "engine_bug": backed})),
        }
    })?;
    let mut b = body(graph, max_len, "chas_powers", json!({"n": n, "m": m, "theorem_backed": backed}));
    let cell = |s: bool, v: bool| rows.iter().filter(|r| r.simple == s && r.predicate_value == v).count() as u64;
    b.totals.insert("classes".into(), rows.len() as u64);
    b.totals.insert("simple_vanishing".into(), cell(true, true));
    b.totals.insert("simple_nonvanishing".into(), cell(true, false));
    b.totals.insert("nonsimple_vanishing".into(), cell(false, true));
    b.totals.insert("nonsimple_nonvanishing".into(), cell(false, false));
    b.totals.insert("mismatches".into(), cell(true, false) + cell(false, true));
    b.hits = rows.iter().filter(|r| r.hit).map(|r| serde_json::to_value(r).unwrap()).collect();
    Ok(SearchReport::new(b, rows, started))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Identity {
    Antisym,
    Coskew,
    Jacobi,
    Cojacobi,
    Compat,
    Involutive,
}

impl Identity {
    pub const ALL: [Identity; 6] = [
        Identity::Antisym,
        Identity::Coskew,
        Identity::Jacobi,
        Identity::Cojacobi,
        Identity::Compat,
        Identity::Involutive,
    ];

    pub fn arity(self) -> usize {
        match self {
            Identity::Coskew | Identity::Cojacobi | Identity::Involutive => 1,
            Identity::Antisym | Identity::Compat => 2,
            Identity::Jacobi => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Identity::Antisym => "antisym",
            Identity::Coskew => "coskew",
            Identity::Jacobi => "jacobi",
            Identity::Cojacobi => "cojacobi",
            Identity::Compat => "compat",
            Identity::Involutive => "involutive",
        }
    }

    /// The defect on `args` as JSON, or `None` when it vanishes.
    pub fn defect<O: LieOps + ?Sized>(self, ops: &O, args: &[ConjClass]) -> Option<Value> {
        assert_eq!(args.len(), self.arity());
        let v = match self {
            Identity::Antisym => bialgebra::check_antisymmetry(ops, &args[0], &args[1]).to_json(),
            Identity::Coskew => bialgebra::check_coskew(ops, &args[0]).to_json(),
            Identity::Jacobi => bialgebra::check_jacobi(ops, &args[0], &args[1], &args[2]).to_json(),
            Identity::Cojacobi => bialgebra::check_cojacobi(ops, &args[0]).to_json(),
            Identity::Compat => bialgebra::check_compat(ops, &args[0], &args[1]).to_json(),
            Identity::Involutive => bialgebra::check_involutive(ops, &args[0]).to_json(),
        };
        let empty = v["terms"].as_array().is_some_and(|t| t.is_empty());
        (!empty).then_some(v)
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s.trim() {
            "antisym" | "antisymmetry" => Identity::Antisym,
            "coskew" | "skew" => Identity::Coskew,
            "jacobi" => Identity::Jacobi,
            "cojacobi" => Identity::Cojacobi,
            "compat" | "compatibility" => Identity::Compat,
            "involutive" | "involutivity" => Identity::Involutive,
            other => return Err(Error::BadParams(format!("unknown identity {other:?}"))),
        })
    }
}

/// Maximum class length used for one-, two- and three-class identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepBudget {
    pub singles: usize,
    pub pairs: usize,
    pub triples: usize,
}

impl SweepBudget {
    /// `max_len` for single classes, one less for pairs, two less for
    /// triples, never below 1.
    pub fn from_max_len(max_len: usize) -> Self {
        SweepBudget {
            singles: max_len,
            pairs: max_len.saturating_sub(1).max(1),
            triples: max_len.saturating_sub(2).max(1),
        }
    }

    pub fn for_arity(&self, arity: usize) -> usize {
        match arity {
            1 => self.singles,
            2 => self.pairs,
            _ => self.triples,
        }
    }
}

/// Calls `f` on every nondecreasing index tuple of length `arity` starting
/// with `first`.
fn for_tuples_from(first: usize, arity: usize, n: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    let mut idx = vec![first; arity];
    loop {
        if !f(&idx) {
            return false;
        }
        // advance positions 1.. like an odometer keeping order
        let mut j = arity;
        loop {
            if j <= 1 {
                return true;
            }
            j -= 1;
            if idx[j] + 1 < n {
                idx[j] += 1;
                let v = idx[j];
                for x in &mut idx[j + 1..] {
                    *x = v;
                }
                break;
            }
        }
    }
}

/// Visits every multiset of `arity` classes from `classes` in order,
/// stopping early when `f` returns `false`.
pub fn for_each_tuple(classes: &[ConjClass], arity: usize, mut f: impl FnMut(&[ConjClass]) -> bool) {
    let mut buf = Vec::with_capacity(arity);
    for first in 0..classes.len() {
        let go = for_tuples_from(first, arity, classes.len(), &mut |idx| {
            buf.clear();
            buf.extend(idx.iter().map(|&i| classes[i].clone()));
            f(&buf)
        });
        if !go {
            return;
        }
    }
}

/// Runs each identity over every multiset of canonical classes within the
/// budget. The identities are symmetric or antisymmetric in their
/// arguments, so multisets cover all orderings. The first defect, in
/// canonical order, aborts the sweep.
pub fn identity_sweep(
    graph: &FatGraph,
    budget: SweepBudget,
    identities: &[Identity],
    opts: &SearchOptions,
) -> Result<SearchReport, Error> {
    let started = Instant::now();
    let pool = opts.pool()?;
    let memo = Memo::new(graph);
    let max_len = identities.iter().map(|i| budget.for_arity(i.arity())).max().unwrap_or(0);
    let mut names: Vec<Identity> = identities.to_vec();
    names.sort();
    names.dedup();
    let mut b = body(
        graph,
        max_len,
        "identity_sweep",
        json!({
            "identities": names.iter().map(|i| i.name()).collect::<Vec<_>>(),
            "singles": budget.singles,
            "pairs": budget.pairs,
            "triples": budget.triples,
        }),
    );
    for &id in &names {
        let classes = enumerate_classes(graph.k(), budget.for_arity(id.arity()), false);
        let n = classes.len();
        let results: Vec<Result<u64, Value>> = pool.install(|| {
            (0..n)
                .into_par_iter()
                .map(|first| {
                    let mut checked = 0u64;
                    let mut bad = None;
                    for_tuples_from(first, id.arity(), n, &mut |idx| {
                        let args: Vec<ConjClass> = idx.iter().map(|&i| classes[i].clone()).collect();
                        checked += 1;
                        match id.defect(&memo, &args) {
                            None => true,
                            Some(d) => {
                                bad = Some(json!({
                                    "identity": id.name(),
                                    "surface": graph.to_string(),
                                    "args": args.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                                    "defect": d,
                                }));
                                false
                            }
                        }
                    });
                    bad.map_or(Ok(checked), Err)
                })
                .collect()
        });
        let mut total = 0;
        for r in results {
            match r {
                Ok(c) => total += c,
                Err(counterexample) => return Err(Error::IdentityDefect(counterexample.to_string())),
            }
        }
        b.totals.insert(format!("{}_checked", id.name()), total);
    }
    b.totals.insert("defects".into(), 0);
    Ok(SearchReport::new(b, Vec::new(), started))
}
