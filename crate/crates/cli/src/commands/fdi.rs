use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;
use mixknap_core::fdi::{enumerate_specs, fdi_cut, fdi_tight_points, star_cut, verify_tight_points, SpecEnumeration};
use mixknap_core::{FdiSpec, MixKnapInstance, MixingCut, Rational};
use serde_json::{json, Value};

use super::{out_path, positive_usize, rational_arg, EXIT_OK};
use crate::io::{cut_json, emit, json_lines, point_json, pretty, read_instance, spec_json};

#[derive(Debug, Args)]
pub struct FdiArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Split index `m`.
    #[arg(long, required_unless_present_any = ["all", "star"])]
    pub m: Option<usize>,
    /// Comma-separated chain `T`, increasing.
    #[arg(long, value_delimiter = ',')]
    pub t: Vec<usize>,
    /// Comma-separated ordering `q` of the indices after `m`.
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<usize>,
    /// Knapsack rescale factor.
    #[arg(long, value_parser = rational_arg)]
    pub scale: Option<Rational>,
    /// Emit the strengthened star inequality of `--t` instead.
    #[arg(long, conflicts_with_all = ["m", "q", "scale", "all"])]
    pub star: bool,
    /// Attach the tight points that certify the facet.
    #[arg(long, conflicts_with = "all")]
    pub tight: bool,
    /// Enumerate specs and emit one JSON line per cut.
    #[arg(long)]
    pub all: bool,
    /// Maximum number of enumerated specs.
    #[arg(long, value_parser = positive_usize, default_value_t = 200)]
    pub limit: usize,
    /// Only enumerate specs that claim a facet.
    #[arg(long, requires = "all")]
    pub facets_only: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn single(args: &FdiArgs, inst: &MixKnapInstance) -> Result<Value> {
    let m = args.m.expect("clap requires --m");
    let mut spec = FdiSpec::new(m, args.t.clone(), args.q.clone());
    if let Some(scale) = &args.scale {
        spec = spec.with_scale(scale.clone());
    }
    let cut = fdi_cut(inst, &spec)?;
    let mut doc = json!({ "spec": spec_json(&spec), "cut": cut_json(&cut) });
    if args.tight {
        let points = fdi_tight_points(inst, &spec)?;
        doc["tight"] = tight_json(inst, &cut, &points);
    }
    Ok(doc)
}

fn tight_json(inst: &MixKnapInstance, cut: &MixingCut, points: &[mixknap_core::HullPoint]) -> Value {
    let report = verify_tight_points(inst, cut, points);
    json!({
        "points": points.iter().map(point_json).collect::<Vec<_>>(),
        "feasible": report.feasible,
        "tight": report.tight,
        "independent_points": report.affine_rank.map(|r| r + 1),
        "certifies_facet": report.certifies_facet(inst.n()),
    })
}

pub fn run(args: &FdiArgs) -> Result<i32> {
    let inst = read_instance(&args.instance)?;
    let text = if args.all {
        let opts = SpecEnumeration { limit: args.limit, facets_only: args.facets_only, ..Default::default() };
        let docs = enumerate_specs(&inst, &opts)?
            .iter()
            .map(|spec| Ok(json!({ "spec": spec_json(spec), "cut": cut_json(&fdi_cut(&inst, spec)?) })))
            .collect::<Result<Vec<Value>>>()?;
        json_lines(&docs)
    } else if args.star {
        if args.tight {
            bail!("--tight needs an FDI spec");
        }
        pretty(&json!({ "cut": cut_json(&star_cut(&inst, &args.t)?) }))
    } else {
        pretty(&single(args, &inst)?)
    };
    emit(out_path(&args.out), &text)?;
    Ok(EXIT_OK)
}
