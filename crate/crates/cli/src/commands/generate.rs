use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;
use mixknap_core::{MixKnapInstance, Rational, ScenarioSource};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{out_path, positive_usize, rational_arg, EXIT_OK};
use crate::io::{emit, instance_json, pretty, rat, rats};

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Number of scenarios.
    #[arg(long, value_parser = positive_usize)]
    pub n: usize,
    /// Unit weights with `p = floor(0.6 n)` unless `--p` is given.
    #[arg(long, conflicts_with_all = ["weights", "ccp"])]
    pub cardinality: bool,
    /// Comma-separated knapsack weights.
    #[arg(long, value_delimiter = ',', value_parser = rational_arg)]
    pub weights: Option<Vec<Rational>>,
    /// Knapsack capacity.
    #[arg(long, value_parser = rational_arg)]
    pub p: Option<Rational>,
    /// Comma-separated right-hand sides.
    #[arg(long, value_delimiter = ',', value_parser = rational_arg)]
    pub h: Option<Vec<Rational>>,
    /// Emit a chance-constraint source `(xi, pi, epsilon)` instead.
    #[arg(long, conflicts_with_all = ["weights", "p"])]
    pub ccp: bool,
    /// Risk level of the chance constraint; random in `(max pi, 1)` by default.
    #[arg(long, value_parser = rational_arg, requires = "ccp")]
    pub epsilon: Option<Rational>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// `floor(0.6 x)`.
fn sixty_percent(x: &Rational) -> Rational {
    (Rational::new(3, 5) * x).floor()
}

fn random_h(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    let mut h: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=100)).collect();
    h.sort_unstable_by(|x, y| y.cmp(x));
    h.into_iter().map(Rational::from).collect()
}

fn check_len(what: &str, v: &[Rational], n: usize) -> Result<()> {
    if v.len() != n {
        bail!("--{} has {} entries but --n is {}", what, v.len(), n);
    }
    Ok(())
}

fn raw_instance(args: &GenerateArgs, rng: &mut ChaCha8Rng) -> Result<serde_json::Value> {
    let n = args.n;
    let h = match &args.h {
        Some(h) => {
            check_len("h", h, n)?;
            h.clone()
        }
        None => random_h(rng, n),
    };
    let a: Vec<Rational> = match &args.weights {
        Some(a) => {
            check_len("weights", a, n)?;
            a.clone()
        }
        None if args.cardinality => vec![Rational::one(); n],
        None => (0..n).map(|_| Rational::from(rng.gen_range(1..=10i64))).collect(),
    };
    let p = match &args.p {
        Some(p) => p.clone(),
        None => {
            let total = a.iter().fold(Rational::zero(), |acc, x| acc + x);
            let max = a.iter().max().cloned().unwrap_or_else(Rational::zero);
            sixty_percent(&total).max(max)
        }
    };
    let inst = MixKnapInstance::canonicalize(&h, &a, &p)?;
    if args.h.is_some() || args.weights.is_some() {
        Ok(json!({ "h": rats(&h), "a": rats(&a), "p": rat(&p) }))
    } else {
        Ok(instance_json(&inst))
    }
}

fn ccp_source(args: &GenerateArgs, rng: &mut ChaCha8Rng) -> Result<serde_json::Value> {
    let n = args.n;
    let xi = match &args.h {
        Some(h) => {
            check_len("h", h, n)?;
            h.clone()
        }
        None => random_h(rng, n),
    };
    let w: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=100)).collect();
    let total: i64 = w.iter().sum();
    let pi: Vec<Rational> = w.iter().map(|&x| Rational::new(x, total)).collect();
    let max_pi = pi.iter().max().cloned().expect("n is positive");
    let epsilon = match &args.epsilon {
        Some(e) => e.clone(),
        None => {
            let u = Rational::new(rng.gen_range(1..1000), 1000);
            &max_pi + (Rational::one() - &max_pi) * u
        }
    };
    let src = ScenarioSource { xi, pi, epsilon };
    MixKnapInstance::from_chance_constraint(&src)?;
    Ok(json!({ "xi": rats(&src.xi), "pi": rats(&src.pi), "epsilon": rat(&src.epsilon) }))
}

pub fn run(args: &GenerateArgs) -> Result<i32> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let doc = if args.ccp { ccp_source(args, &mut rng)? } else { raw_instance(args, &mut rng)? };
    emit(out_path(&args.out), &pretty(&doc))?;
    Ok(EXIT_OK)
}
