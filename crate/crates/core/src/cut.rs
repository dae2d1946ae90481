//! Mixing cuts `y + Σ α_j z_j ≥ β` and the coefficient polyhedron `G`.
//!
//! `(α, β)` gives a valid cut for `conv(Q)` exactly when, for every
//! `0 ≤ k ≤ ν`,
//!
//! ```text
//! slack_k = Σ_{j < k} α_j + f_k(α) + h_k - β ≥ 0
//! ```
//!
//! (0-based: `h_k` is the value of the first scenario not fixed by the
//! prefix).

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::instance::MixKnapInstance;
use crate::knapsack::{f_k, KnapRestriction};
use crate::rational::Rational;

/// Where a cut came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Star,
    Tpl,
    Fdi,
    SeparationLp,
    Heuristic,
    Manual,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Star => "star",
            Provenance::Tpl => "tpl",
            Provenance::Fdi => "fdi",
            Provenance::SeparationLp => "separation-lp",
            Provenance::Heuristic => "heuristic",
            Provenance::Manual => "manual",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "star" => Provenance::Star,
            "tpl" => Provenance::Tpl,
            "fdi" => Provenance::Fdi,
            "separation-lp" => Provenance::SeparationLp,
            "heuristic" => Provenance::Heuristic,
            "manual" => Provenance::Manual,
            _ => return None,
        })
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `y + Σ α_j z_j ≥ β` with the `y` coefficient normalized to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixingCut {
    pub alpha: Vec<Rational>,
    pub beta: Rational,
    pub provenance: Provenance,
    /// Set by constructions that know whether the cut is facet-defining.
    pub facet_claim: Option<bool>,
}

impl MixingCut {
    pub fn new(alpha: Vec<Rational>, beta: Rational, provenance: Provenance) -> Self {
        MixingCut { alpha, beta, provenance, facet_claim: None }
    }

    /// Normalizes `γ y + Σ α_j z_j ≥ β` by dividing through by `γ > 0`.
    /// A valid cut never has `γ < 0`, and `γ = 0` cuts come from the knapsack
    /// polytope alone; both are rejected.
    pub fn from_general(
        gamma: &Rational,
        alpha: &[Rational],
        beta: &Rational,
        provenance: Provenance,
    ) -> Result<Self> {
        if !gamma.is_positive() {
            return Err(Error::NonPositiveGamma(format!("{}", gamma)));
        }
        Ok(MixingCut::new(alpha.iter().map(|a| a / gamma).collect(), beta / gamma, provenance))
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    /// `y + α·z`.
    pub fn lhs(&self, y: &Rational, z: &[Rational]) -> Rational {
        y + self.alpha.iter().zip(z).map(|(a, zj)| a * zj).sum::<Rational>()
    }

    /// `y + α·z` at a binary `z`.
    pub fn lhs_binary(&self, y: &Rational, z: &[bool]) -> Rational {
        y + self.alpha.iter().zip(z).filter(|(_, &b)| b).map(|(a, _)| a).sum::<Rational>()
    }

    /// `β - y - α·z`: positive when the point violates the cut.
    pub fn violation(&self, y: &Rational, z: &[Rational]) -> Rational {
        &self.beta - self.lhs(y, z)
    }
}

/// Outcome of the coefficient-polyhedron membership test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GMembershipReport {
    pub member: bool,
    /// One slack per `k = 0..=ν`.
    pub slacks: Vec<Rational>,
    /// Most violated `k` (smallest on ties).
    pub witness_k: Option<usize>,
    /// A point `(h_k, z)` of `Q` that violates the cut.
    pub witness_z: Option<Vec<bool>>,
}

fn check_len(instance: &MixKnapInstance, cut: &MixingCut) -> Result<()> {
    if cut.n() != instance.n() {
        return Err(Error::DimensionMismatch { expected: instance.n(), got: cut.n() });
    }
    Ok(())
}

/// Tests `(α, β) ∈ G`, which holds exactly when the cut is valid for
/// `conv(Q)`.
pub fn g_membership(instance: &MixKnapInstance, cut: &MixingCut) -> Result<GMembershipReport> {
    check_len(instance, cut)?;
    let mut slacks = Vec::with_capacity(instance.nu() + 1);
    let mut worst: Option<(usize, Rational, Vec<bool>)> = None;
    let mut prefix = Rational::zero();
    for k in 0..=instance.nu() {
        if k > 0 {
            prefix += &cut.alpha[k - 1];
        }
        let opt = f_k(&KnapRestriction::new(instance, k)?, &cut.alpha)?;
        let slack = &prefix + &opt.value + &instance.h()[k] - &cut.beta;
        if slack.is_negative() && worst.as_ref().is_none_or(|(_, w, _)| slack < *w) {
            worst = Some((k, slack.clone(), opt.z));
        }
        slacks.push(slack);
    }
    let (witness_k, witness_z) = match worst {
        Some((k, _, z)) => (Some(k), Some(z)),
        None => (None, None),
    };
    Ok(GMembershipReport { member: witness_k.is_none(), slacks, witness_k, witness_z })
}

/// The computable necessary conditions for a facet-defining cut.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetSanity {
    /// `f_0(α)`.
    pub f0: Rational,
    /// `β = h_max + f_0(α)`.
    pub rhs_condition: bool,
    /// Scenarios with `α_k < 0` and `a_k = 0`.
    pub zero_weight_negatives: Vec<usize>,
}

impl FacetSanity {
    pub fn weight_condition(&self) -> bool {
        self.zero_weight_negatives.is_empty()
    }

    pub fn passes(&self) -> bool {
        self.rhs_condition && self.weight_condition()
    }
}

/// Checks `β = h_max + f_0(α)` and `α_k < 0 ⇒ a_k > 0` for a valid cut.
/// Extremality in `G` is not decided here.
pub fn facet_sanity(instance: &MixKnapInstance, cut: &MixingCut) -> Result<FacetSanity> {
    let report = g_membership(instance, cut)?;
    if let Some(k) = report.witness_k {
        return Err(Error::NotGMember { k });
    }
    let f0 = f_k(&KnapRestriction::new(instance, 0)?, &cut.alpha)?.value;
    let rhs_condition = cut.beta == instance.h_max() + &f0;
    let zero_weight_negatives = (0..instance.n())
        .filter(|&j| cut.alpha[j].is_negative() && instance.a()[j].is_zero())
        .collect();
    Ok(FacetSanity { f0, rhs_condition, zero_weight_negatives })
}
