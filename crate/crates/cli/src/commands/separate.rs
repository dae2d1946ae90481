use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use mixknap_core::heuristic::{best_of_patterns, separate_heuristic, suggest_patterns, DEFAULT_PATTERN_LIMIT};
use mixknap_core::separation::{default_box, separate_exact_escalating};
use mixknap_core::structured::{separate_structured, separate_structured_all};
use mixknap_core::{MixKnapInstance, Rational, SeparationQuery, SeparationResult, SignPattern};
use rayon::prelude::*;
use serde_json::json;

use super::{out_path, positive_usize, rational_arg, EXIT_CUT, EXIT_OK};
use crate::io::{emit, pretty, read_instance, read_pattern_sets, read_query, result_json};

/// Box growth factor and number of growth rounds of the exact method.
const BOX_FACTOR: i64 = 4;
const BOX_ROUNDS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    Structured,
    Heuristic,
    All,
}

#[derive(Debug, Args)]
pub struct SeparateArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub query: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    pub method: Method,
    /// Structured method: fix the split index `m`.
    #[arg(long, conflicts_with = "all")]
    pub m: Option<usize>,
    /// Structured method: number of forced indices, with `--m`.
    #[arg(long, requires = "m")]
    pub r: Option<usize>,
    /// Structured method: search every admissible `(m, r)` (the default without `--m`).
    #[arg(long)]
    pub all: bool,
    /// Heuristic method: `auto` or a JSON file of `[{"s": [...]}, ...]`.
    #[arg(long, default_value = "auto")]
    pub patterns: String,
    /// Box width `M` of the separation LPs; `2 (h_max - h_tail) + 1` by default.
    #[arg(long = "box", value_parser = rational_arg)]
    pub box_m: Option<Rational>,
    /// Seed of the automatic pattern suggestions.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for the heuristic patterns.
    #[arg(long, value_parser = positive_usize)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Number of automatic patterns.
    #[arg(long, value_parser = positive_usize, default_value_t = DEFAULT_PATTERN_LIMIT)]
    pub limit: usize,
}

fn structured(args: &SeparateArgs, inst: &MixKnapInstance, query: &SeparationQuery) -> Result<SeparationResult> {
    Ok(match args.m {
        Some(m) => separate_structured(inst, query, m, args.r.unwrap_or(0))?,
        None => separate_structured_all(inst, query)?,
    })
}

fn patterns(args: &SeparateArgs, inst: &MixKnapInstance, query: &SeparationQuery) -> Result<Vec<SignPattern>> {
    if args.patterns == "auto" {
        return Ok(suggest_patterns(inst, query, args.limit, args.seed)?);
    }
    let path = PathBuf::from(&args.patterns);
    read_pattern_sets(&path)?
        .iter()
        .enumerate()
        .map(|(i, s)| {
            SignPattern::from_s(inst, s).with_context(|| format!("{}: pattern {}", path.display(), i))
        })
        .collect()
}

fn heuristic(
    args: &SeparateArgs,
    inst: &MixKnapInstance,
    query: &SeparationQuery,
    box_m: &Rational,
) -> Result<SeparationResult> {
    query.validate(inst.n())?;
    let patterns = patterns(args, inst, query)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = args.jobs {
        builder = builder.num_threads(jobs);
    }
    let pool = builder.build().context("cannot start worker pool")?;
    let results = pool.install(|| {
        patterns.par_iter().map(|p| separate_heuristic(inst, query, p, box_m)).collect::<Vec<_>>()
    });
    Ok(best_of_patterns(&patterns, results))
}

fn exact(inst: &MixKnapInstance, query: &SeparationQuery, box_m: &Rational) -> Result<SeparationResult> {
    Ok(separate_exact_escalating(inst, query, box_m, &Rational::from(BOX_FACTOR), BOX_ROUNDS)?)
}

fn timed<T>(label: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let start = Instant::now();
    let out = f().with_context(|| format!("{} separation failed", label))?;
    eprintln!("{}: {:.6} s", label, start.elapsed().as_secs_f64());
    Ok(out)
}

pub fn run(args: &SeparateArgs) -> Result<i32> {
    let inst = read_instance(&args.instance)?;
    let query = read_query(&args.query)?;
    query.validate(inst.n())?;
    let box_m = args.box_m.clone().unwrap_or_else(|| default_box(&inst));
    if !box_m.is_positive() {
        bail!("--box must be positive, got {}", box_m);
    }
    let (doc, cut) = match args.method {
        Method::Exact => {
            let res = timed("exact", || exact(&inst, &query, &box_m))?;
            (result_json("exact", &res), res.is_cut())
        }
        Method::Structured => {
            let res = timed("structured", || structured(args, &inst, &query))?;
            (result_json("structured", &res), res.is_cut())
        }
        Method::Heuristic => {
            let res = timed("heuristic", || heuristic(args, &inst, &query, &box_m))?;
            (result_json("heuristic", &res), res.is_cut())
        }
        Method::All => {
            let s = timed("structured", || structured(args, &inst, &query))?;
            let h = timed("heuristic", || heuristic(args, &inst, &query, &box_m))?;
            let e = timed("exact", || exact(&inst, &query, &box_m))?;
            let doc = json!({
                "results": [result_json("structured", &s), result_json("heuristic", &h), result_json("exact", &e)],
                "exact_dominates_structured": e.violation >= s.violation,
                "exact_dominates_heuristic": e.violation >= h.violation,
            });
            (doc, s.is_cut() || h.is_cut() || e.is_cut())
        }
    };
    emit(out_path(&args.out), &pretty(&doc))?;
    Ok(if cut { EXIT_CUT } else { EXIT_OK })
}
