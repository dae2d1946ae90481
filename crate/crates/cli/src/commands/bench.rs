use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Result};
use clap::Args;
use mixknap_core::structured::separate_structured_all;
use mixknap_core::{MixKnapInstance, Rational, SeparationQuery};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{out_path, EXIT_OK};
use crate::io::emit;

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated scenario counts.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    /// Comma-separated integer capacities.
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A cardinality instance with random integer `h` and a query with `z*` on a
/// quarter grid and `y* = h_{p}`.
fn cell(n: usize, p: usize, seed: u64) -> Result<(MixKnapInstance, SeparationQuery)> {
    if p == 0 || p >= n {
        bail!("grid cell n = {}, p = {} needs 0 < p < n", n, p);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 32) ^ p as u64);
    let h: Vec<Rational> = (0..n).map(|_| Rational::from(rng.gen_range(1..=1000i64))).collect();
    let inst = MixKnapInstance::canonicalize(&h, &vec![Rational::one(); n], &Rational::from(p))?;
    let z: Vec<Rational> = (0..n).map(|_| Rational::new(rng.gen_range(0..=4i64), 4)).collect();
    let y = inst.h()[p].clone();
    Ok((inst, SeparationQuery::new(y, z)))
}

/// Least-squares slope of `ln t` against `ln p`.
fn log_log_slope(samples: &[(usize, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        samples.iter().filter(|(_, t)| *t > 0.0).map(|&(p, t)| ((p as f64).ln(), t.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn run(args: &BenchArgs) -> Result<i32> {
    if args.n.is_empty() || args.p.is_empty() {
        bail!("empty grid: give at least one --n and one --p");
    }
    let mut text = String::from("n,p,seconds,verdict,violation\n");
    let mut by_n: BTreeMap<usize, Vec<(usize, f64)>> = BTreeMap::new();
    for &n in &args.n {
        for &p in &args.p {
            let (inst, query) = cell(n, p, args.seed)?;
            let start = Instant::now();
            let res = separate_structured_all(&inst, &query)?;
            let secs = start.elapsed().as_secs_f64();
            writeln!(text, "{},{},{:.6},{},{}", n, p, secs, res.verdict.as_str(), res.violation)?;
            by_n.entry(n).or_default().push((p, secs));
        }
    }
    for (n, samples) in &by_n {
        match log_log_slope(samples) {
            Some(slope) => writeln!(text, "# n={} log-log slope in p: {:.3}", n, slope)?,
            None => writeln!(text, "# n={} log-log slope in p: n/a", n)?,
        }
    }
    emit(out_path(&args.out), &text)?;
    Ok(EXIT_OK)
}
