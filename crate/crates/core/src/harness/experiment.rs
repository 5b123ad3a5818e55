//! Grid experiments driven by a small `key = value` config.
//!
//! ```text
//! [run]
//! seed = 7
//! trials = 20
//! kind = decode        # decode | success | listsize | scaling
//! oracle = true
//! timing = false
//!
//! [grid]
//! q = 17, 31           # or `auto`: smallest prime above max(n, 16)
//! n = 16
//! m = 2
//! rn = 4               # or a rate such as 1/4
//! s = 2
//! k = 1                # optional: isolate a k-dimensional container
//! planted = 1
//! algo = det, rand
//! errors = max         # or counts
//! eps = 1/4            # optional
//! beta = 1/10
//! ```
//!
//! Every grid axis is a comma-separated list; cells are the cartesian
//! product in the order above, last axis fastest. A config with no grid keys
//! has no cells. Trial `t` of cell `c` uses seed `mix_seed([seed, c, t])`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::frs::{FoldedWord, FrsParams};
use crate::gf::next_prime;
use crate::interp::{find_container, harness_container};
use crate::randprune::mix_seed;
use crate::subspace::AffineSubspace;
use crate::Rational;

use super::decode::{radius_for, Algo, DecodeOptions, Isolation};
use super::{brute_force_list, decode_end_to_end, max_errors_below, oracle_budget, plant, prune_once};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Decode,
    Success,
    ListSize,
    Scaling,
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "decode" => Ok(ExperimentKind::Decode),
            "success" => Ok(ExperimentKind::Success),
            "listsize" => Ok(ExperimentKind::ListSize),
            "scaling" => Ok(ExperimentKind::Scaling),
            _ => Err(Error::Parse(format!("unknown experiment kind `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorSpec {
    Count(usize),
    /// Largest count strictly inside the radius.
    Max,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum FieldSpec {
    Fixed(u64),
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum MessageSpec {
    Length(usize),
    Rate(Rational),
}

#[derive(Clone, Debug)]
pub struct Grid {
    q: Vec<FieldSpec>,
    n: Vec<usize>,
    m: Vec<usize>,
    rn: Vec<MessageSpec>,
    s: Vec<usize>,
    k: Vec<Option<usize>>,
    planted: Vec<usize>,
    algo: Vec<Algo>,
    errors: Vec<ErrorSpec>,
    eps: Vec<Option<Rational>>,
    beta: Vec<Rational>,
    empty: bool,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            q: vec![FieldSpec::Fixed(17)],
            n: vec![16],
            m: vec![2],
            rn: vec![MessageSpec::Length(4)],
            s: vec![2],
            k: vec![None],
            planted: vec![1],
            algo: vec![Algo::Det],
            errors: vec![ErrorSpec::Max],
            eps: vec![None],
            beta: vec![Rational::new(1, 10)],
            empty: true,
        }
    }
}

/// One point of the grid with `q` and `Rn` resolved.
#[derive(Clone, Debug)]
pub struct GridCell {
    pub index: usize,
    pub q: u64,
    pub n: usize,
    pub m: usize,
    pub rn: usize,
    pub s: usize,
    pub k: Option<usize>,
    pub planted: usize,
    pub algo: Algo,
    pub errors: ErrorSpec,
    pub eps: Option<Rational>,
    pub beta: Rational,
}

impl Grid {
    pub fn cells(&self) -> Result<Vec<GridCell>> {
        if self.empty {
            return Ok(Vec::new());
        }
        let radix = [
            self.q.len(),
            self.n.len(),
            self.m.len(),
            self.rn.len(),
            self.s.len(),
            self.k.len(),
            self.planted.len(),
            self.algo.len(),
            self.errors.len(),
            self.eps.len(),
            self.beta.len(),
        ];
        let total: usize = radix.iter().product();
        let mut out = Vec::with_capacity(total);
        for index in 0..total {
            // mixed-radix digits, last axis fastest
            let mut digit = [0usize; 11];
            let mut rest = index;
            for (d, &r) in digit.iter_mut().zip(&radix).rev() {
                *d = rest % r;
                rest /= r;
            }
            let n = self.n[digit[1]];
            let q = match self.q[digit[0]] {
                FieldSpec::Fixed(q) => q,
                FieldSpec::Auto => next_prime(n.max(16) as u64),
            };
            let rn = match self.rn[digit[3]] {
                MessageSpec::Length(l) => l,
                MessageSpec::Rate(r) => {
                    let l = r * Rational::from(n as i64);
                    if !l.is_integer() {
                        return Err(config_err(0, "rn", format!("rate {r} times n={n} is not an integer")));
                    }
                    l.to_integer() as usize
                }
            };
            out.push(GridCell {
                index,
                q,
                n,
                m: self.m[digit[2]],
                rn,
                s: self.s[digit[4]],
                k: self.k[digit[5]],
                planted: self.planted[digit[6]],
                algo: self.algo[digit[7]],
                errors: self.errors[digit[8]],
                eps: self.eps[digit[9]],
                beta: self.beta[digit[10]],
            });
        }
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub trials: u64,
    pub kind: ExperimentKind,
    pub oracle: bool,
    pub timing: bool,
    pub grid: Grid,
    /// `section.key = value` as written, for the report header.
    pub entries: Vec<(String, String)>,
}

fn config_err(line: usize, field: &str, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        field: field.into(),
        message: message.into(),
    }
}

fn list<T>(line: usize, field: &str, value: &str, parse: impl Fn(&str) -> Option<T>) -> Result<Vec<T>> {
    let items: Vec<&str> = value.split(',').map(str::trim).collect();
    if items.iter().any(|s| s.is_empty()) {
        return Err(config_err(line, field, "empty list entry"));
    }
    items
        .into_iter()
        .map(|item| parse(item).ok_or_else(|| config_err(line, field, format!("cannot parse `{item}`"))))
        .collect()
}

fn rational(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b): (i64, i64) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
            (b != 0).then(|| Rational::new(a, b))
        }
        None => s.parse::<i64>().ok().map(Rational::from),
    }
}

fn boolean(s: &str) -> Option<bool> {
    match s {
        "true" | "yes" | "1" => Some(true),
        "false" | "no" | "0" => Some(false),
        _ => None,
    }
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig {
        seed: 0,
        trials: 1,
        kind: ExperimentKind::Decode,
        oracle: false,
        timing: false,
        grid: Grid::default(),
        entries: Vec::new(),
    };
    let mut section: Option<String> = None;
    let mut seen: Vec<String> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| config_err(line_no, "section", "unterminated section header"))?
                .trim();
            if name != "run" && name != "grid" {
                return Err(config_err(line_no, name, "unknown section"));
            }
            section = Some(name.to_string());
            continue;
        }
        let sec = section
            .as_deref()
            .ok_or_else(|| config_err(line_no, "section", "key outside of any section"))?;
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| config_err(line_no, "syntax", "expected `key = value`"))?;
        let (key, value) = (key.trim(), value.trim());
        let qualified = format!("{sec}.{key}");
        if seen.contains(&qualified) {
            return Err(config_err(line_no, key, "duplicate key"));
        }
        seen.push(qualified.clone());
        cfg.entries.push((qualified, value.to_string()));
        let bad = || config_err(line_no, key, format!("cannot parse `{value}`"));
        match (sec, key) {
            ("run", "seed") => cfg.seed = value.parse().map_err(|_| bad())?,
            ("run", "trials") => cfg.trials = value.parse().map_err(|_| bad())?,
            ("run", "kind") => cfg.kind = value.parse().map_err(|_| bad())?,
            ("run", "oracle") => cfg.oracle = boolean(value).ok_or_else(bad)?,
            ("run", "timing") => cfg.timing = boolean(value).ok_or_else(bad)?,
            ("grid", _) => {
                let g = &mut cfg.grid;
                g.empty = false;
                match key {
                    "q" => {
                        g.q = list(line_no, key, value, |v| match v {
                            "auto" => Some(FieldSpec::Auto),
                            _ => v.parse().ok().map(FieldSpec::Fixed),
                        })?
                    }
                    "n" => g.n = list(line_no, key, value, |v| v.parse().ok())?,
                    "m" => g.m = list(line_no, key, value, |v| v.parse().ok())?,
                    "rn" => {
                        g.rn = list(line_no, key, value, |v| {
                            if v.contains('/') {
                                rational(v).map(MessageSpec::Rate)
                            } else {
                                v.parse().ok().map(MessageSpec::Length)
                            }
                        })?
                    }
                    "s" => g.s = list(line_no, key, value, |v| v.parse().ok())?,
                    "k" => g.k = list(line_no, key, value, |v| v.parse().ok().map(Some))?,
                    "planted" => g.planted = list(line_no, key, value, |v| v.parse().ok().filter(|&p: &usize| p > 0))?,
                    "algo" => g.algo = list(line_no, key, value, |v| v.parse().ok())?,
                    "errors" => {
                        g.errors = list(line_no, key, value, |v| match v {
                            "max" => Some(ErrorSpec::Max),
                            _ => v.parse().ok().map(ErrorSpec::Count),
                        })?
                    }
                    "eps" => g.eps = list(line_no, key, value, |v| rational(v).map(Some))?,
                    "beta" => g.beta = list(line_no, key, value, rational)?,
                    _ => return Err(config_err(line_no, key, "unknown grid key")),
                }
            }
            _ => return Err(config_err(line_no, key, "unknown run key")),
        }
    }
    Ok(cfg)
}

/// Per-cell summary, one CSV row.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Aggregate {
    pub cell: usize,
    pub q: u64,
    pub n: usize,
    pub m: usize,
    pub rn: usize,
    pub s: usize,
    pub k: Option<usize>,
    pub planted: usize,
    pub algo: String,
    pub errors: Option<usize>,
    pub eps: Option<String>,
    pub beta: String,
    pub radius: Option<String>,
    pub trials: u64,
    pub failed: Option<String>,
    pub container_dim: Option<usize>,
    pub success_frequency: Option<f64>,
    pub theory: Option<f64>,
    pub full_list_rate: Option<f64>,
    pub agreement_rate: Option<f64>,
    pub mismatches: Option<u64>,
    pub mean_list_size: Option<f64>,
    pub max_list_size: Option<usize>,
    pub list_violations: Option<u64>,
    pub median_field_ops: Option<f64>,
    pub median_wall_ms: Option<f64>,
    pub ops_ratio: Option<f64>,
    pub wall_ratio: Option<f64>,
}

const CSV_COLUMNS: [&str; 28] = [
    "cell",
    "q",
    "n",
    "m",
    "rn",
    "s",
    "k",
    "planted",
    "algo",
    "errors",
    "eps",
    "beta",
    "radius",
    "trials",
    "failed",
    "container_dim",
    "success_frequency",
    "theory",
    "full_list_rate",
    "agreement_rate",
    "mismatches",
    "mean_list_size",
    "max_list_size",
    "list_violations",
    "median_field_ops",
    "median_wall_ms",
    "ops_ratio",
    "wall_ratio",
];

fn csv_field(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) if s.contains(',') || s.contains('"') => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn median(v: &mut [f64]) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[mid] } else { (v[mid - 1] + v[mid]) / 2.0 })
}

fn mean(sum: f64, count: u64) -> Option<f64> {
    (count > 0).then(|| sum / count as f64)
}

struct CellRun {
    records: Vec<Value>,
    aggregate: Aggregate,
}

fn run_cell(cfg: &ExperimentConfig, cell: &GridCell) -> CellRun {
    let mut agg = Aggregate {
        cell: cell.index,
        q: cell.q,
        n: cell.n,
        m: cell.m,
        rn: cell.rn,
        s: cell.s,
        k: cell.k,
        planted: cell.planted,
        algo: cell.algo.to_string(),
        eps: cell.eps.map(|e| e.to_string()),
        beta: cell.beta.to_string(),
        trials: cfg.trials,
        ..Aggregate::default()
    };
    let mut records = Vec::new();
    if let Err(e) = run_cell_inner(cfg, cell, &mut agg, &mut records) {
        agg.failed = Some(e.to_string());
        records.push(json!({"kind": "error", "cell": cell.index, "message": e.to_string()}));
    }
    CellRun { records, aggregate: agg }
}

fn container(params: &FrsParams, g: &FoldedWord, codewords: &[FoldedWord], cell: &GridCell, seed: u64) -> Result<AffineSubspace> {
    match cell.k {
        Some(k) => harness_container(params, codewords, k, seed),
        None => find_container(params, g, cell.s),
    }
}

fn run_cell_inner(cfg: &ExperimentConfig, cell: &GridCell, agg: &mut Aggregate, records: &mut Vec<Value>) -> Result<()> {
    let params = FrsParams::new(cell.q, cell.n, cell.m, cell.rn)?;
    let (radius, eps) = radius_for(&params, cell.algo, cell.s, cell.eps)?;
    let errors = match cell.errors {
        ErrorSpec::Count(e) => e,
        ErrorSpec::Max => max_errors_below(&radius, params.blocks()),
    };
    agg.errors = Some(errors);
    agg.radius = Some(radius.to_string());
    agg.eps = eps.map(|e| e.to_string());
    let seed_of = |t: u64| mix_seed(&[cfg.seed, cell.index as u64, t]);
    let budget = oracle_budget();
    let det = crate::detprune::DetPruneConfig::default();

    match cfg.kind {
        ExperimentKind::Decode => {
            let (mut hits, mut full, mut full_n, mut agree, mut agree_n, mut sizes, mut max_size) = (0u64, 0u64, 0u64, 0u64, 0u64, 0u64, 0usize);
            let (mut ops, mut walls) = (Vec::new(), Vec::new());
            let mut dim = 0;
            for t in 0..cfg.trials {
                let seed = seed_of(t);
                let inst = plant(&params, cell.planted, errors, seed)?;
                let opts = DecodeOptions {
                    s: Some(cell.s),
                    eps: cell.eps,
                    beta: cell.beta,
                    seed,
                    oracle: cfg.oracle,
                    count_ops: true,
                    timing: cfg.timing,
                    budget,
                    isolation: cell.k.map(|k| Isolation {
                        list: inst.codewords.clone(),
                        k,
                    }),
                    errors: Some(errors),
                    det: det.clone(),
                };
                let rep = decode_end_to_end(&params, &inst.g, cell.algo, &opts)?;
                dim = dim.max(rep.container_dim);
                hits += rep.contains(inst.transmitted()) as u64;
                sizes += rep.list.len() as u64;
                max_size = max_size.max(rep.list.len());
                if let Some(oracle) = &rep.oracle {
                    full_n += 1;
                    full += oracle.iter().all(|w| rep.output.contains(w)) as u64;
                }
                if let Some(a) = rep.agreement {
                    agree_n += 1;
                    agree += a as u64;
                }
                ops.extend(rep.field_ops.map(|o| o as f64));
                walls.extend(rep.wall_ms);
                let mut rec = serde_json::to_value(&rep).expect("report serializes");
                rec["kind"] = json!("record");
                rec["cell"] = json!(cell.index);
                rec["trial"] = json!(t);
                records.push(rec);
            }
            agg.container_dim = Some(dim);
            agg.success_frequency = mean(hits as f64, cfg.trials);
            agg.full_list_rate = mean(full as f64, full_n);
            agg.agreement_rate = mean(agree as f64, agree_n);
            agg.mismatches = (agree_n > 0).then_some(agree_n - agree);
            agg.mean_list_size = mean(sizes as f64, cfg.trials);
            agg.max_list_size = Some(max_size);
            agg.median_field_ops = median(&mut ops);
            agg.median_wall_ms = median(&mut walls);
        }
        ExperimentKind::Success => {
            let inst_seed = seed_of(u64::MAX);
            let inst = plant(&params, cell.planted, errors, inst_seed)?;
            let h = container(&params, &inst.g, &inst.codewords, cell, inst_seed)?;
            let k = h.dim();
            agg.container_dim = Some(k);
            agg.theory = match cell.algo {
                Algo::Rand => Some(1.0 / (cell.s * k + 1) as f64),
                Algo::Krsw => eps.map(|e| (*e.numer() as f64 / *e.denom() as f64).powi(k as i32)),
                Algo::Det | Algo::Brute => Some(1.0),
            };
            let mut hits = 0u64;
            for t in 0..cfg.trials {
                let out = prune_once(&params, &inst.g, &h, cell.algo, cell.s, cell.eps, seed_of(t), &det)?;
                let hit = out.contains(inst.transmitted());
                hits += hit as u64;
                records.push(json!({"kind": "record", "cell": cell.index, "trial": t, "hit": hit, "output_size": out.len()}));
            }
            agg.success_frequency = mean(hits as f64, cfg.trials);
        }
        ExperimentKind::ListSize => {
            let (mut sizes, mut max_size, mut violations) = (0u64, 0usize, 0u64);
            for t in 0..cfg.trials {
                let inst = plant(&params, cell.planted, errors, seed_of(t))?;
                let list = brute_force_list(&params, &inst.g, &radius, budget)?;
                sizes += list.len() as u64;
                max_size = max_size.max(list.len());
                violations += (list.len() > cell.s) as u64;
                records.push(json!({"kind": "record", "cell": cell.index, "trial": t, "list_size": list.len()}));
            }
            agg.mean_list_size = mean(sizes as f64, cfg.trials);
            agg.max_list_size = Some(max_size);
            agg.list_violations = Some(violations);
        }
        ExperimentKind::Scaling => {
            let (mut ops, mut walls) = (Vec::new(), Vec::new());
            let mut hits = 0u64;
            for t in 0..cfg.trials {
                let seed = seed_of(t);
                let inst = plant(&params, cell.planted, errors, seed)?;
                let h = container(&params, &inst.g, &inst.codewords, cell, seed)?;
                agg.container_dim = Some(h.dim());
                let counted = params.with_op_counter();
                let start = Instant::now();
                let out = prune_once(&counted, &inst.g, &h, cell.algo, cell.s, cell.eps, seed, &det)?;
                let wall = cfg.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
                let field_ops = counted.field().op_count().unwrap_or(0);
                hits += out.contains(inst.transmitted()) as u64;
                ops.push(field_ops as f64);
                walls.extend(wall);
                let mut rec = json!({"kind": "record", "cell": cell.index, "trial": t, "field_ops": field_ops, "list_size": out.len()});
                if let Some(w) = wall {
                    rec["wall_ms"] = json!(w);
                }
                records.push(rec);
            }
            agg.success_frequency = mean(hits as f64, cfg.trials);
            agg.median_field_ops = median(&mut ops);
            agg.median_wall_ms = median(&mut walls);
        }
    }
    Ok(())
}

/// Fills `ops_ratio`/`wall_ratio` of each cell from the cell with half its
/// `n` and otherwise identical settings: same rate, `q` free.
fn link_doublings(cells: &[GridCell], aggs: &mut [Aggregate]) {
    for j in 0..cells.len() {
        let to = &cells[j];
        let from = cells.iter().position(|c| {
            c.n * 2 == to.n
                && c.m == to.m
                && c.s == to.s
                && c.k == to.k
                && c.planted == to.planted
                && c.algo == to.algo
                && c.errors == to.errors
                && c.eps == to.eps
                && c.beta == to.beta
                && c.rn * to.n == to.rn * c.n
        });
        let Some(i) = from else { continue };
        let ratio = |a: Option<f64>, b: Option<f64>| match (a, b) {
            (Some(a), Some(b)) if a > 0.0 => Some(b / a),
            _ => None,
        };
        aggs[j].ops_ratio = ratio(aggs[i].median_field_ops, aggs[j].median_field_ops);
        aggs[j].wall_ratio = ratio(aggs[i].median_wall_ms, aggs[j].median_wall_ms);
    }
}

/// Runs every cell and writes the JSON-lines report to `out` and the
/// aggregate CSV next to it (`out` with extension `csv`). Returns the
/// aggregates in grid order.
pub fn run_config(cfg: &ExperimentConfig, out: &Path) -> Result<Vec<Aggregate>> {
    let cells = cfg.grid.cells()?;
    // timing runs stay sequential so cells do not compete for cores
    let runs: Vec<CellRun> = if cfg.timing {
        cells.iter().map(|c| run_cell(cfg, c)).collect()
    } else {
        cells.par_iter().map(|c| run_cell(cfg, c)).collect()
    };
    let mut aggs: Vec<Aggregate> = runs.iter().map(|r| r.aggregate.clone()).collect();
    link_doublings(&cells, &mut aggs);

    let mut w = BufWriter::new(File::create(out)?);
    let config: serde_json::Map<String, Value> =
        cfg.entries.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
    let header = json!({
        "kind": "header",
        "format": "frs-report",
        "version": 1,
        "experiment": cfg.kind,
        "seed": cfg.seed,
        "trials": cfg.trials,
        "cells": cells.len(),
        "config": config,
    });
    writeln!(w, "{header}")?;
    for run in &runs {
        for rec in &run.records {
            writeln!(w, "{rec}")?;
        }
    }
    for agg in &aggs {
        let mut v = serde_json::to_value(agg).expect("aggregate serializes");
        v["kind"] = json!("aggregate");
        writeln!(w, "{v}")?;
    }
    w.flush()?;

    let mut c = BufWriter::new(File::create(out.with_extension("csv"))?);
    writeln!(c, "{}", CSV_COLUMNS.join(","))?;
    for agg in &aggs {
        let v = serde_json::to_value(agg).expect("aggregate serializes");
        let row: Vec<String> = CSV_COLUMNS.iter().map(|col| csv_field(&v[*col])).collect();
        writeln!(c, "{}", row.join(","))?;
    }
    c.flush()?;
    Ok(aggs)
}

/// Reads a config file and runs it.
pub fn run_experiment(config: &Path, out: &Path) -> Result<Vec<Aggregate>> {
    let text = std::fs::read_to_string(config)?;
    run_config(&parse_config(&text)?, out)
}

/// Built-in configs behind `bench --suite`.
pub fn bench_config(suite: &str) -> Result<ExperimentConfig> {
    let text = match suite {
        "scaling" => {
            "[run]\nseed = 1\ntrials = 5\nkind = scaling\ntiming = true\n\
             [grid]\nq = auto\nn = 16, 32, 64, 128, 256, 512\nm = 2\nrn = 1/4\nk = 1, 2\nalgo = det\neps = 3/8\n"
        }
        "success" => {
            "[run]\nseed = 2\ntrials = 2000\nkind = success\n\
             [grid]\nq = 61\nn = 54\nm = 9\nrn = 6\ns = 3\nk = 2\nalgo = rand\n"
        }
        "listsize" => {
            "[run]\nseed = 3\ntrials = 50\nkind = listsize\n\
             [grid]\nq = 17, 31\nn = 16\nm = 4\nrn = 2, 3\ns = 1, 2, 3\nplanted = 1, 2\nalgo = brute\n"
        }
        _ => return Err(Error::BadParams(format!("unknown bench suite `{suite}`"))),
    };
    parse_config(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_config() {
        let cfg = parse_config(
            "# demo\n[run]\nseed = 7\ntrials = 3\nkind = success\noracle = yes\n\n[grid]\nq = 17, auto\nrn = 4, 1/4\nalgo = det, rand\nerrors = max, 2\neps = 1/8\n",
        )
        .unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.kind, ExperimentKind::Success);
        assert!(cfg.oracle);
        let cells = cfg.grid.cells().unwrap();
        assert_eq!(cells.len(), 2 * 2 * 2 * 2);
        assert_eq!(cells[0].q, 17);
        assert_eq!(cells[8].q, 17);
        assert!(matches!(cells[8].errors, ErrorSpec::Max));
        assert_eq!(cells[4].rn, 4);
        assert_eq!(cells[1].errors, ErrorSpec::Count(2));
    }

    #[test]
    fn reports_line_and_field() {
        let bad = [
            ("[run]\nseed = x\n", 2, "seed"),
            ("[grid]\nq = 17,,19\n", 2, "q"),
            ("seed = 1\n", 1, "section"),
            ("[run]\nseed = 1\nseed = 2\n", 3, "seed"),
            ("[grid]\ncolour = red\n", 2, "colour"),
            ("[other]\n", 1, "other"),
            ("[run]\njust words\n", 2, "syntax"),
        ];
        for (text, line, field) in bad {
            match parse_config(text) {
                Err(Error::Config { line: l, field: f, .. }) => {
                    assert_eq!((l, f.as_str()), (line, field), "{text}");
                }
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn empty_grid_gives_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("r.jsonl");
        let aggs = run_config(&parse_config("[run]\nseed = 1\n").unwrap(), &out).unwrap();
        assert!(aggs.is_empty());
        let text = std::fs::read_to_string(&out).unwrap();
        assert_eq!(text.lines().count(), 1);
        let header: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(header["cells"], 0);
        let csv = std::fs::read_to_string(out.with_extension("csv")).unwrap();
        assert_eq!(csv.lines().count(), 1);
    }

    #[test]
    fn small_decode_grid_is_reproducible() {
        let dir = tempfile::tempdir().unwrap();
        let text = "[run]\nseed = 4\ntrials = 3\noracle = true\n[grid]\nq = 17\nn = 16\nm = 4\nrn = 3\nalgo = det, rand, brute\n";
        let cfg = parse_config(text).unwrap();
        let (a, b) = (dir.path().join("a.jsonl"), dir.path().join("b.jsonl"));
        let aggs = run_config(&cfg, &a).unwrap();
        run_config(&cfg, &b).unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        assert_eq!(std::fs::read(a.with_extension("csv")).unwrap(), std::fs::read(b.with_extension("csv")).unwrap());
        for agg in &aggs {
            assert_eq!(agg.failed, None);
            assert_eq!(agg.success_frequency, Some(1.0));
            assert_eq!(agg.mismatches, Some(0), "{}", agg.algo);
        }
    }

    #[test]
    fn bench_suites_parse() {
        for suite in ["scaling", "success", "listsize"] {
            assert!(!bench_config(suite).unwrap().grid.cells().unwrap().is_empty());
        }
        assert!(bench_config("nope").is_err());
    }
}
