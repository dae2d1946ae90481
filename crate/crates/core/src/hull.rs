//! Brute-force ground truth for small instances.
//!
//! `conv(Q)` is the convex hull of the points `(y(z), z)` over knapsack-feasible
//! binary `z`, with `y(z)` the value of the first zero coordinate, plus the ray
//! `(1, 0)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cut::MixingCut;
use crate::error::{Error, Result};
use crate::instance::MixKnapInstance;
use crate::linalg::affine_rank;
use crate::lp::{lp_solve, LpProblem, LpRow, LpStatus, Sense};
use crate::rational::Rational;
use crate::separation::SeparationQuery;

/// Largest `n` enumerated by default.
pub const DEFAULT_HULL_CAP: usize = 14;

/// A point of `Q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HullPoint {
    pub y: Rational,
    pub z: Vec<bool>,
}

impl HullPoint {
    /// `(y, z_0, …, z_{n-1})`.
    pub fn coordinates(&self) -> Vec<Rational> {
        let mut c = Vec::with_capacity(self.z.len() + 1);
        c.push(self.y.clone());
        c.extend(self.z.iter().map(|&b| if b { Rational::one() } else { Rational::zero() }));
        c
    }

    pub fn is_in_q(&self, instance: &MixKnapInstance) -> bool {
        self.z.len() == instance.n()
            && !self.y.is_negative()
            && instance.is_feasible(&self.z)
            && self.z.iter().zip(instance.h()).all(|(&zj, hj)| zj || self.y >= *hj)
    }
}

pub fn enumerate_hull_points(instance: &MixKnapInstance) -> Result<Vec<HullPoint>> {
    enumerate_hull_points_capped(instance, DEFAULT_HULL_CAP)
}

/// Every feasible `z` (in increasing bitmask order, bit `j` = `z_j`) paired
/// with its smallest `y`.
pub fn enumerate_hull_points_capped(instance: &MixKnapInstance, cap: usize) -> Result<Vec<HullPoint>> {
    let n = instance.n();
    if n > cap || n >= 32 {
        return Err(Error::InstanceTooLarge { n, cap });
    }
    let a = instance.a();
    let mut out = Vec::new();
    let mut weight = vec![Rational::zero(); 1 << n];
    for mask in 0usize..1 << n {
        if mask > 0 {
            let low = mask.trailing_zeros() as usize;
            weight[mask] = &weight[mask & (mask - 1)] + &a[low];
        }
        if weight[mask] > *instance.p() {
            continue;
        }
        let z: Vec<bool> = (0..n).map(|j| mask >> j & 1 == 1).collect();
        let y = instance.min_y(&z).expect("a feasible z has a zero coordinate");
        out.push(HullPoint { y, z });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidityReport {
    pub valid: bool,
    /// `min (y + α·z) - β` over the hull points.
    pub min_slack: Rational,
    /// A point attaining the minimum (first in enumeration order).
    pub worst: HullPoint,
}

/// Validity against precomputed hull points.
pub fn certify_valid_on(points: &[HullPoint], cut: &MixingCut) -> ValidityReport {
    let mut best: Option<(Rational, &HullPoint)> = None;
    for pt in points {
        let slack = cut.lhs_binary(&pt.y, &pt.z) - &cut.beta;
        if best.as_ref().is_none_or(|(b, _)| slack < *b) {
            best = Some((slack, pt));
        }
    }
    let (min_slack, worst) = best.expect("Q is nonempty");
    ValidityReport { valid: !min_slack.is_negative(), min_slack, worst: worst.clone() }
}

pub fn certify_valid(instance: &MixKnapInstance, cut: &MixingCut) -> Result<ValidityReport> {
    if cut.n() != instance.n() {
        return Err(Error::DimensionMismatch { expected: instance.n(), got: cut.n() });
    }
    Ok(certify_valid_on(&enumerate_hull_points(instance)?, cut))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetReport {
    pub is_facet: bool,
    /// Rank of the homogenized matrix `[1 | y | z]` over the tight points,
    /// i.e. the number of affinely independent tight points.
    pub rank: usize,
    pub tight_points: Vec<HullPoint>,
}

/// Facet test against precomputed hull points; `n` is the number of scenarios.
pub fn certify_facet_on(points: &[HullPoint], n: usize, cut: &MixingCut) -> Result<FacetReport> {
    let validity = certify_valid_on(points, cut);
    if !validity.valid {
        return Err(Error::HypothesisViolated(format!(
            "cut is violated by ({}, {:?})",
            validity.worst.y, validity.worst.z
        )));
    }
    let tight_points: Vec<HullPoint> =
        points.iter().filter(|pt| cut.lhs_binary(&pt.y, &pt.z) == cut.beta).cloned().collect();
    let coords: Vec<Vec<Rational>> = tight_points.iter().map(HullPoint::coordinates).collect();
    let rank = affine_rank(&coords).map_or(0, |r| r + 1);
    Ok(FacetReport { is_facet: rank == n + 1, rank, tight_points })
}

pub fn certify_facet(instance: &MixKnapInstance, cut: &MixingCut) -> Result<FacetReport> {
    if cut.n() != instance.n() {
        return Err(Error::DimensionMismatch { expected: instance.n(), got: cut.n() });
    }
    certify_facet_on(&enumerate_hull_points(instance)?, instance.n(), cut)
}

/// Convex combination of hull points with the given positive weights, shifted
/// by `theta` along `(1, 0)`.
pub fn combine(points: &[&HullPoint], weights: &[Rational], theta: &Rational) -> SeparationQuery {
    let total: Rational = weights.iter().sum();
    let n = points[0].z.len();
    let mut y = theta.clone();
    let mut z = vec![Rational::zero(); n];
    for (pt, w) in points.iter().zip(weights) {
        let w = w / &total;
        y += &w * &pt.y;
        for (zj, &b) in z.iter_mut().zip(&pt.z) {
            if b {
                *zj += &w;
            }
        }
    }
    SeparationQuery::new(y, z).assuming_conv_p()
}

/// `count` deterministic points of `conv(Q)`: combinations of up to four hull
/// points with random integer weights, plus a random multiple of `(1, 0)`.
pub fn sample_inside(instance: &MixKnapInstance, seed: u64, count: usize) -> Result<Vec<SeparationQuery>> {
    let points = enumerate_hull_points(instance)?;
    Ok(sample_inside_on(&points, seed, count))
}

pub fn sample_inside_on(points: &[HullPoint], seed: u64, count: usize) -> Vec<SeparationQuery> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let k = rng.gen_range(1..=4usize.min(points.len()));
            let chosen: Vec<&HullPoint> = (0..k).map(|_| &points[rng.gen_range(0..points.len())]).collect();
            let weights: Vec<Rational> = (0..k).map(|_| Rational::from(rng.gen_range(1..=12i64))).collect();
            let theta = if rng.gen_bool(0.5) {
                Rational::zero()
            } else {
                Rational::new(rng.gen_range(1..=8i64), 4)
            };
            combine(&chosen, &weights, &theta)
        })
        .collect()
}

/// Decides `(y*, z*) ∈ conv(Q)` with an LP over the hull points:
/// `Σ λ_i (y_i, z_i) + θ (1, 0) = (y*, z*)`, `Σ λ_i = 1`, `λ, θ ≥ 0`.
pub fn hull_membership_on(points: &[HullPoint], query: &SeparationQuery) -> Result<bool> {
    let n = query.z_star.len();
    let cols = points.len() + 1;
    let mut problem = LpProblem::new(vec![Rational::zero(); cols]);
    let mut ones = vec![Rational::one(); cols];
    ones[points.len()] = Rational::zero();
    problem.push_row(LpRow::new(ones, Sense::Eq, Rational::one()))?;
    let mut y_row: Vec<Rational> = points.iter().map(|pt| pt.y.clone()).collect();
    y_row.push(Rational::one());
    problem.push_row(LpRow::new(y_row, Sense::Eq, query.y_star.clone()))?;
    for j in 0..n {
        let mut row: Vec<Rational> =
            points.iter().map(|pt| if pt.z[j] { Rational::one() } else { Rational::zero() }).collect();
        row.push(Rational::zero());
        problem.push_row(LpRow::new(row, Sense::Eq, query.z_star[j].clone()))?;
    }
    Ok(lp_solve(&problem)?.status == LpStatus::Optimal)
}

pub fn hull_membership(instance: &MixKnapInstance, query: &SeparationQuery) -> Result<bool> {
    query.validate(instance.n())?;
    hull_membership_on(&enumerate_hull_points(instance)?, query)
}
