use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;
use mixknap_core::cut::{facet_sanity, g_membership};
use mixknap_core::hull::{certify_facet_on, certify_valid_on, enumerate_hull_points_capped, DEFAULT_HULL_CAP};
use serde_json::{json, Value};

use super::{out_path, positive_usize, EXIT_INVALID, EXIT_OK};
use crate::io::{emit, json_lines, point_json, rat, read_cuts, read_instance};

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Cut file: one JSON cut, an array of cuts, or JSON lines.
    #[arg(long)]
    pub cuts: PathBuf,
    /// Largest `n` for hull enumeration.
    #[arg(long, value_parser = positive_usize, default_value_t = DEFAULT_HULL_CAP)]
    pub cap: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &VerifyArgs) -> Result<i32> {
    let inst = read_instance(&args.instance)?;
    let cuts = read_cuts(&args.cuts)?;
    if cuts.is_empty() {
        bail!("{}: no cuts", args.cuts.display());
    }
    let points = enumerate_hull_points_capped(&inst, args.cap)?;
    let mut all_valid = true;
    let mut docs = Vec::with_capacity(cuts.len());
    for (i, cut) in cuts.iter().enumerate() {
        if cut.n() != inst.n() {
            bail!("cut {} has {} coefficients but the instance has {} scenarios", i, cut.n(), inst.n());
        }
        let g = g_membership(&inst, cut)?;
        let validity = certify_valid_on(&points, cut);
        all_valid &= validity.valid;
        let mut doc = json!({
            "index": i,
            "g_member": g.member,
            "hull_valid": validity.valid,
            "min_slack": rat(&validity.min_slack),
            "agree": g.member == validity.valid,
        });
        if validity.valid {
            let facet = certify_facet_on(&points, inst.n(), cut)?;
            let sanity = facet_sanity(&inst, cut)?;
            doc["facet"] = Value::Bool(facet.is_facet);
            doc["rank"] = json!(facet.rank);
            doc["facet_sanity"] = json!({
                "f0": rat(&sanity.f0),
                "rhs_condition": sanity.rhs_condition,
                "zero_weight_negatives": sanity.zero_weight_negatives,
            });
            if let Some(claim) = cut.facet_claim {
                doc["facet_claim_confirmed"] = Value::Bool(claim == facet.is_facet);
            }
        } else {
            doc["violated_by"] = point_json(&validity.worst);
            doc["witness_k"] = json!(g.witness_k);
        }
        docs.push(doc);
    }
    emit(out_path(&args.out), &json_lines(&docs))?;
    Ok(if all_valid { EXIT_OK } else { EXIT_INVALID })
}
