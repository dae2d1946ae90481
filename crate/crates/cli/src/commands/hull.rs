use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use mixknap_core::hull::{enumerate_hull_points_capped, hull_membership_on, sample_inside_on, DEFAULT_HULL_CAP};
use serde_json::json;

use super::{out_path, positive_usize, EXIT_OK};
use crate::io::{emit, json_lines, point_json, pretty, query_json, read_instance, read_query};

#[derive(Debug, Args)]
pub struct HullArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Largest `n` for hull enumeration.
    #[arg(long, value_parser = positive_usize, default_value_t = DEFAULT_HULL_CAP)]
    pub cap: usize,
    /// Report whether this query lies in the hull.
    #[arg(long, conflicts_with = "sample")]
    pub query: Option<PathBuf>,
    /// Emit this many random points of the hull as queries.
    #[arg(long, value_parser = positive_usize)]
    pub sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &HullArgs) -> Result<i32> {
    let inst = read_instance(&args.instance)?;
    let points = enumerate_hull_points_capped(&inst, args.cap)?;
    let text = if let Some(path) = &args.query {
        let query = read_query(path)?;
        query.validate(inst.n())?;
        pretty(&json!({ "member": hull_membership_on(&points, &query)? }))
    } else if let Some(count) = args.sample {
        let docs: Vec<_> = sample_inside_on(&points, args.seed, count).iter().map(query_json).collect();
        json_lines(&docs)
    } else {
        json_lines(&points.iter().map(point_json).collect::<Vec<_>>())
    };
    emit(out_path(&args.out), &text)?;
    Ok(EXIT_OK)
}
