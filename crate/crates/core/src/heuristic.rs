//! Separation restricted to a sign pattern: a partition `R ∪ S` of the
//! scenarios with `α ≥ 0` on `R` and `α ≤ 0` on `S`. Cuts are written
//!
//! ```text
//! y + Σ_{j∈R} δ_j z_j + Σ_{j∈S} Δ_j (1 - z_j) ≥ h,     δ, Δ ≥ 0,
//! ```
//!
//! valid iff `Σ_{j∈R, j<k} δ_j + g_k(Δ) + h_k ≥ h` for `k = 0..=ν`. The compact
//! model replaces `g_k(Δ)` by the sum of the `β^k` smallest tail values of
//! `Δ`, written as the dual of its sorting LP:
//!
//! ```text
//! Σ_{j∈R, j<k} δ_j + β^k γ^k + Σ_{j∈S, j≥k} ρ^k_j - h ≥ -h_k
//! γ^k + ρ^k_j - Δ_j ≤ 0                   (j ∈ S, j ≥ k)
//! γ^k free, ρ^k_j ≤ 0
//! β^k = max(0, |{j ∈ S : j ≥ k}| - ⌊(p - s_k) / m_S⌋)
//! ```
//!
//! Every compact solution is valid. When `a_j = m_S` on `S` the compact model
//! describes exactly the valid pattern cuts.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cut::{MixingCut, Provenance};
use crate::error::{Error, Result};
use crate::instance::MixKnapInstance;
use crate::knapsack::{g_k, KnapRestriction};
use crate::lp::{LpProblem, LpRow, LpSolution, LpStatus, Sense, SimplexSession};
use crate::rational::Rational;
use crate::separation::{bounds_active, FamilyRecord, SeparationQuery, SeparationResult, Verdict};

/// Default number of patterns tried per query.
pub const DEFAULT_PATTERN_LIMIT: usize = 8;

/// A partition of the scenarios into `R` (nonnegative coefficients) and `S`
/// (nonpositive coefficients). Both lists are ascending.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignPattern {
    pub r: Vec<usize>,
    pub s: Vec<usize>,
    /// `min {a_j : j ∈ S}`; `None` when `S` is empty.
    pub m_s: Option<Rational>,
}

impl SignPattern {
    /// The pattern with the given `S`; `R` is its complement.
    pub fn from_s(instance: &MixKnapInstance, s: &[usize]) -> Result<Self> {
        let n = instance.n();
        let mut in_s = vec![false; n];
        for &j in s {
            if j >= n {
                return Err(Error::PatternViolation(format!("index {} out of range 0..{}", j, n)));
            }
            if in_s[j] {
                return Err(Error::PatternViolation(format!("index {} repeated in S", j)));
            }
            in_s[j] = true;
        }
        let s: Vec<usize> = (0..n).filter(|&j| in_s[j]).collect();
        let r: Vec<usize> = (0..n).filter(|&j| !in_s[j]).collect();
        let m_s = s.iter().map(|&j| instance.a()[j].clone()).min();
        if let Some(m) = &m_s {
            if !m.is_positive() {
                return Err(Error::PatternViolation(format!("m_S = {} is not positive", m)));
            }
        }
        Ok(SignPattern { r, s, m_s })
    }

    /// Membership mask of `S`.
    pub fn s_mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for &j in &self.s {
            mask[j] = true;
        }
        mask
    }

    /// `a_j = m_S` on all of `S`, the case where the compact model is exact.
    pub fn is_uniform(&self, instance: &MixKnapInstance) -> bool {
        self.m_s.as_ref().is_none_or(|m| self.s.iter().all(|&j| instance.a()[j] == *m))
    }

    /// `β^k`, clamped at zero.
    pub fn beta_k(&self, instance: &MixKnapInstance, k: usize) -> Rational {
        let tail = self.s.iter().filter(|&&j| j >= k).count();
        let Some(m) = &self.m_s else {
            return Rational::zero();
        };
        let fit = (instance.residual(k) / m).floor();
        let b = Rational::from(tail) - fit;
        if b.is_negative() {
            Rational::zero()
        } else {
            b
        }
    }

    fn check(&self, instance: &MixKnapInstance) -> Result<()> {
        let rebuilt = SignPattern::from_s(instance, &self.s)?;
        if rebuilt != *self {
            return Err(Error::PatternViolation("R and S do not partition the scenarios".into()));
        }
        Ok(())
    }
}

/// A cut in pattern form: `weights[j]` is `δ_j` on `R` and `Δ_j` on `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternCut {
    pub weights: Vec<Rational>,
    pub h: Rational,
}

impl PatternCut {
    /// `α = δ` on `R`, `α = -Δ` on `S`, `β = h - Σ_S Δ`.
    pub fn to_cut(&self, pattern: &SignPattern, provenance: Provenance) -> MixingCut {
        let mut alpha = self.weights.clone();
        let mut beta = self.h.clone();
        for &j in &pattern.s {
            beta -= &alpha[j];
            alpha[j] = -&alpha[j];
        }
        MixingCut::new(alpha, beta, provenance)
    }

    /// Inverse of [`PatternCut::to_cut`]; fails when a sign disagrees with the pattern.
    pub fn from_cut(pattern: &SignPattern, cut: &MixingCut) -> Result<Self> {
        let mut weights = cut.alpha.clone();
        let mut h = cut.beta.clone();
        for &j in &pattern.s {
            weights[j] = -&weights[j];
            h += &weights[j];
        }
        if let Some(j) = (0..weights.len()).find(|&j| weights[j].is_negative()) {
            return Err(Error::PatternViolation(format!("alpha_{} has the wrong sign for the pattern", j)));
        }
        Ok(PatternCut { weights, h })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrMembershipReport {
    pub member: bool,
    /// `Σ_{j∈R, j<k} δ_j + g_k(Δ) + h_k - h` for `k = 0..=ν`.
    pub slacks: Vec<Rational>,
}

/// Exact membership of a pattern cut among the valid ones, via `g_k`.
pub fn gr_membership(
    instance: &MixKnapInstance,
    pattern: &SignPattern,
    cut: &PatternCut,
) -> Result<GrMembershipReport> {
    let n = instance.n();
    pattern.check(instance)?;
    if cut.weights.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: cut.weights.len() });
    }
    if let Some(j) = (0..n).find(|&j| cut.weights[j].is_negative()) {
        return Err(Error::PatternViolation(format!("weight {} = {} is negative", j, cut.weights[j])));
    }
    let s_mask = pattern.s_mask(n);
    let mut slacks = Vec::with_capacity(instance.nu() + 1);
    let mut prefix = Rational::zero();
    for k in 0..=instance.nu() {
        if k > 0 && !s_mask[k - 1] {
            prefix += &cut.weights[k - 1];
        }
        let g = g_k(&KnapRestriction::new(instance, k)?, &pattern.s, &cut.weights)?;
        slacks.push(&prefix + &g.value + &instance.h()[k] - &cut.h);
    }
    let member = slacks.iter().all(|s| !s.is_negative());
    Ok(GrMembershipReport { member, slacks })
}

/// Variables shared by both pattern LPs: `weights` at `0..n`, `h` at `n`.
fn pattern_master(instance: &MixKnapInstance, query: &SeparationQuery, pattern: &SignPattern, box_m: &Rational) -> LpProblem {
    let n = instance.n();
    let s_mask = pattern.s_mask(n);
    let mut objective: Vec<Rational> = (0..n)
        .map(|j| if s_mask[j] { Rational::one() - &query.z_star[j] } else { query.z_star[j].clone() })
        .collect();
    objective.push(-Rational::one());
    let mut problem = LpProblem::new(objective);
    for j in 0..n {
        problem.set_bounds(j, Some(Rational::zero()), Some(box_m.clone()));
    }
    let h_box = instance.h_max() + Rational::from(n) * box_m;
    problem.set_bounds(n, Some(-&h_box), Some(h_box));
    problem
}

fn prepare(
    instance: &MixKnapInstance,
    query: &SeparationQuery,
    pattern: &SignPattern,
    box_m: &Rational,
) -> Result<()> {
    query.validate(instance.n())?;
    pattern.check(instance)?;
    if !box_m.is_positive() {
        return Err(Error::ConfigViolation(format!("box M = {} must be positive", box_m)));
    }
    Ok(())
}

fn conclude(
    instance: &MixKnapInstance,
    query: &SeparationQuery,
    pattern: &SignPattern,
    box_m: &Rational,
    problem: &LpProblem,
    sol: &LpSolution,
    provenance: Provenance,
) -> SeparationResult {
    let n = instance.n();
    let cut = PatternCut { weights: sol.primal[..n].to_vec(), h: sol.primal[n].clone() };
    let mut box_lower = vec![false; problem.num_vars()];
    let mut box_upper = vec![false; problem.num_vars()];
    for flag in box_upper.iter_mut().take(n + 1) {
        *flag = true;
    }
    box_lower[n] = true;
    let box_active = bounds_active(problem, sol, &box_lower, &box_upper);
    let inside = if box_active { Verdict::LpUnboundedNormalized } else { Verdict::InsideForFamily };
    let mut result =
        SeparationResult::from_value(query, sol.objective_value.clone(), cut.to_cut(pattern, provenance), inside);
    result.box_active = box_active;
    result.box_m = Some(box_m.clone());
    result
}

/// The compact model for `pattern` with the separation objective for `query`.
#[derive(Debug, Clone)]
pub struct ThetaLp {
    pub problem: LpProblem,
    /// Index of `γ^k`.
    pub gamma: Vec<usize>,
    /// `(k, j, index of ρ^k_j)`.
    pub rho: Vec<(usize, usize, usize)>,
}

impl ThetaLp {
    pub fn build(
        instance: &MixKnapInstance,
        query: &SeparationQuery,
        pattern: &SignPattern,
        box_m: &Rational,
    ) -> Result<Self> {
        prepare(instance, query, pattern, box_m)?;
        let n = instance.n();
        let nu = instance.nu();
        let mut problem = pattern_master(instance, query, pattern, box_m);
        let mut gamma = Vec::with_capacity(nu + 1);
        let mut rho = Vec::new();
        let mut next = n + 1;
        for k in 0..=nu {
            gamma.push(next);
            next += 1;
            for &j in pattern.s.iter().filter(|&&j| j >= k) {
                rho.push((k, j, next));
                next += 1;
            }
        }
        problem.objective.resize(next, Rational::zero());
        problem.lower.resize(next, None);
        problem.upper.resize(next, None);
        for &(_, _, v) in &rho {
            problem.set_bounds(v, None, Some(Rational::zero()));
        }
        let s_mask = pattern.s_mask(n);
        for k in 0..=nu {
            let mut coeffs = vec![Rational::zero(); next];
            for j in (0..k).filter(|&j| !s_mask[j]) {
                coeffs[j] = Rational::one();
            }
            coeffs[gamma[k]] = pattern.beta_k(instance, k);
            coeffs[n] = -Rational::one();
            for &(_, _, v) in rho.iter().filter(|(kk, _, _)| *kk == k) {
                coeffs[v] = Rational::one();
            }
            problem.push_row(LpRow::new(coeffs, Sense::Ge, -&instance.h()[k]))?;
            for &(_, j, v) in rho.iter().filter(|(kk, _, _)| *kk == k) {
                let mut coeffs = vec![Rational::zero(); next];
                coeffs[gamma[k]] = Rational::one();
                coeffs[v] = Rational::one();
                coeffs[j] = -Rational::one();
                problem.push_row(LpRow::new(coeffs, Sense::Le, Rational::zero()))?;
            }
        }
        Ok(ThetaLp { problem, gamma, rho })
    }

    /// The `(δ, Δ, h)` part of a solution vector.
    pub fn project(&self, x: &[Rational]) -> PatternCut {
        let n = self.gamma[0] - 1;
        PatternCut { weights: x[..n].to_vec(), h: x[n].clone() }
    }
}

/// Separation over the compact model for one pattern.
pub fn separate_heuristic(
    instance: &MixKnapInstance,
    query: &SeparationQuery,
    pattern: &SignPattern,
    box_m: &Rational,
) -> Result<SeparationResult> {
    let theta = ThetaLp::build(instance, query, pattern, box_m)?;
    let mut session = SimplexSession::new(theta.problem)?;
    let sol = session.solve();
    if sol.status != LpStatus::Optimal {
        return Err(Error::ConfigViolation(format!("pattern LP ended {:?}; the box should keep it bounded", sol.status)));
    }
    let mut result = conclude(instance, query, pattern, box_m, session.problem(), &sol, Provenance::Heuristic);
    result.lp_solves = 1;
    Ok(result)
}

fn gr_row(instance: &MixKnapInstance, s_mask: &[bool], k: usize, z: &[bool]) -> LpRow {
    let n = instance.n();
    let mut coeffs: Vec<Rational> = (0..n)
        .map(|j| {
            let used = if s_mask[j] { j >= k && !z[j] } else { j < k };
            if used {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect();
    coeffs.push(-Rational::one());
    LpRow::new(coeffs, Sense::Ge, -&instance.h()[k])
}

/// Separation over all valid cuts with the given pattern, by row generation
/// with the exact `g_k` oracle.
pub fn separate_pattern_exact(
    instance: &MixKnapInstance,
    query: &SeparationQuery,
    pattern: &SignPattern,
    box_m: &Rational,
) -> Result<SeparationResult> {
    prepare(instance, query, pattern, box_m)?;
    let n = instance.n();
    let s_mask = pattern.s_mask(n);
    let mut problem = pattern_master(instance, query, pattern, box_m);
    for k in 0..=instance.nu() {
        problem.push_row(gr_row(instance, &s_mask, k, &vec![false; n]))?;
    }
    let restrictions: Vec<KnapRestriction<'_>> =
        (0..=instance.nu()).map(|k| KnapRestriction::new(instance, k)).collect::<Result<_>>()?;
    let mut session = SimplexSession::new(problem)?;
    let mut generated = 0;
    let mut solves = 0;
    let sol = loop {
        let sol = session.solve();
        solves += 1;
        if sol.status != LpStatus::Optimal {
            return Err(Error::ConfigViolation(format!("pattern master ended {:?}", sol.status)));
        }
        let weights = &sol.primal[..n];
        let mut prefix = Rational::zero();
        let mut added = false;
        for (k, restriction) in restrictions.iter().enumerate() {
            if k > 0 && !s_mask[k - 1] {
                prefix += &weights[k - 1];
            }
            let g = g_k(restriction, &pattern.s, weights)?;
            if (&prefix + &g.value + &instance.h()[k] - &sol.primal[n]).is_negative() {
                session.add_row(gr_row(instance, &s_mask, k, &g.z))?;
                generated += 1;
                added = true;
            }
        }
        if !added {
            break sol;
        }
    };
    let mut result = conclude(instance, query, pattern, box_m, session.problem(), &sol, Provenance::SeparationLp);
    result.generated_rows = generated;
    result.lp_solves = solves;
    Ok(result)
}

/// Candidate patterns, in order: the threshold rule `R = {j : z*_j ≤ 1/2}`;
/// for each `m ≤ ν` with integral `p - s_m`, `S = {j > m : a_j = min_{i>m, a_i>0} a_i}`;
/// then balanced random partitions from `seed`. Patterns with `m_S ≤ 0` and
/// duplicates are dropped; at most `limit` are returned.
pub fn suggest_patterns(
    instance: &MixKnapInstance,
    query: &SeparationQuery,
    limit: usize,
    seed: u64,
) -> Result<Vec<SignPattern>> {
    let n = instance.n();
    query.validate(n)?;
    let half = Rational::new(1, 2);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut offer = |s: Vec<usize>, out: &mut Vec<SignPattern>| {
        if out.len() >= limit {
            return;
        }
        if let Ok(p) = SignPattern::from_s(instance, &s) {
            if seen.insert(p.s.clone()) {
                out.push(p);
            }
        }
    };

    offer((0..n).filter(|&j| query.z_star[j] > half).collect(), &mut out);

    for m in 0..=instance.nu() {
        if m + 1 >= n || !instance.residual(m).is_integer() {
            continue;
        }
        let Some(m_s) = (m + 1..n).map(|j| &instance.a()[j]).filter(|a| a.is_positive()).min() else {
            continue;
        };
        offer((m + 1..n).filter(|&j| instance.a()[j] == *m_s).collect(), &mut out);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    for _ in 0..4 * limit {
        if out.len() >= limit {
            break;
        }
        order.shuffle(&mut rng);
        offer(order[..n / 2].to_vec(), &mut out);
    }
    Ok(out)
}

/// Runs [`separate_heuristic`] on each pattern and keeps the most violated cut.
pub fn separate_heuristic_patterns(
    instance: &MixKnapInstance,
    query: &SeparationQuery,
    patterns: &[SignPattern],
    box_m: &Rational,
) -> Result<SeparationResult> {
    query.validate(instance.n())?;
    let results = patterns.iter().map(|p| separate_heuristic(instance, query, p, box_m)).collect();
    Ok(best_of_patterns(patterns, results))
}

/// Reduces per-pattern results to the one with the smallest LP value, the
/// first on ties. Failed patterns are kept as records.
pub fn best_of_patterns(patterns: &[SignPattern], results: Vec<Result<SeparationResult>>) -> SeparationResult {
    let mut records = Vec::with_capacity(patterns.len());
    let mut best: Option<SeparationResult> = None;
    let mut solves = 0;
    for (pattern, outcome) in patterns.iter().zip(results) {
        let label = format!("S={:?}", pattern.s);
        match outcome {
            Ok(res) => {
                solves += res.lp_solves;
                records.push(FamilyRecord { label, violation: Some(res.violation.clone()), note: None });
                let better = match (&best, &res.lp_value) {
                    (None, _) => true,
                    (Some(b), Some(x)) => b.lp_value.as_ref().is_none_or(|y| x < y),
                    (Some(_), None) => false,
                };
                if better {
                    best = Some(res);
                }
            }
            Err(e) => {
                log::debug!("pattern {} skipped: {}", label, e);
                records.push(FamilyRecord { label, violation: None, note: Some(format!("{}", e)) });
            }
        }
    }
    match best {
        None => SeparationResult::family_empty(records),
        Some(mut b) => {
            b.records = records;
            b.lp_solves = solves;
            b
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cut::g_membership;
    use crate::hull::certify_valid;
    use crate::knapsack::delta_bracket;
    use crate::rational::{ints, q};
    use proptest::prelude::*;

    fn card5() -> MixKnapInstance {
        MixKnapInstance::canonicalize(&ints(&[8, 6, 5, 3, 1]), &ints(&[1, 1, 1, 1, 1]), &q(3, 1))
            .unwrap()
    }

    fn fractional() -> SeparationQuery {
        SeparationQuery::new(q(3, 1), vec![q(1, 2), q(1, 2), q(1, 2), q(3, 4), q(3, 4)])
    }

    #[test]
    fn membership_examples() {
        let inst = card5();
        let pat = SignPattern::from_s(&inst, &[2, 4]).unwrap();
        assert_eq!(pat.r, vec![0, 1, 3]);
        let cut = PatternCut { weights: ints(&[2, 0, 1, 0, 3]), h: q(8, 1) };
        assert!(gr_membership(&inst, &pat, &cut).unwrap().member);
        let mc = cut.to_cut(&pat, Provenance::Manual);
        assert_eq!(mc.alpha, ints(&[2, 0, -1, 0, -3]));
        assert_eq!(mc.beta, q(4, 1));
        assert!(g_membership(&inst, &mc).unwrap().member);
        assert_eq!(PatternCut::from_cut(&pat, &mc).unwrap(), cut);

        let zero = PatternCut { weights: vec![Rational::zero(); 5], h: inst.h_tail().clone() };
        assert!(gr_membership(&inst, &pat, &zero).unwrap().member);
        let high = PatternCut { weights: vec![Rational::zero(); 5], h: q(9, 1) };
        let rep = gr_membership(&inst, &pat, &high).unwrap();
        assert!(!rep.member);
        assert!(rep.slacks[0].is_negative());
    }

    #[test]
    fn pattern_violations() {
        let inst = MixKnapInstance::canonicalize(&ints(&[8, 6, 5]), &ints(&[1, 0, 1]), &q(1, 1)).unwrap();
        assert!(matches!(SignPattern::from_s(&inst, &[1, 2]), Err(Error::PatternViolation(_))));
        let pat = SignPattern::from_s(&inst, &[2]).unwrap();
        let neg = PatternCut { weights: ints(&[0, -1, 0]), h: q(0, 1) };
        assert!(matches!(gr_membership(&inst, &pat, &neg), Err(Error::PatternViolation(_))));
    }

    #[test]
    fn heuristic_example() {
        let inst = card5();
        let pat = SignPattern::from_s(&inst, &[2, 4]).unwrap();
        let qy = fractional();
        let box_m = crate::separation::default_box(&inst);
        let res = separate_heuristic(&inst, &qy, &pat, &box_m).unwrap();
        assert_eq!(res.verdict, Verdict::CutFound);
        // At least as violated as y + 2z_0 - z_2 - 3z_4 ≥ 4.
        assert!(res.violation >= q(11, 4));
        let cut = res.cut.clone().unwrap();
        assert!(certify_valid(&inst, &cut).unwrap().valid);
        assert_eq!(cut.violation(&qy.y_star, &qy.z_star), res.violation);
        let exact = separate_pattern_exact(&inst, &qy, &pat, &box_m).unwrap();
        assert_eq!(exact.lp_value, res.lp_value);
    }

    #[test]
    fn extreme_points_are_never_cut() {
        let inst = card5();
        let qy = SeparationQuery::new(q(3, 1), ints(&[1, 1, 1, 0, 0]));
        let box_m = crate::separation::default_box(&inst);
        for pat in suggest_patterns(&inst, &qy, 8, 3).unwrap() {
            let res = separate_heuristic(&inst, &qy, &pat, &box_m).unwrap();
            assert!(!res.is_cut());
        }
    }

    #[test]
    fn empty_s_matches_nonnegative_exact() {
        let inst = card5();
        let qy = fractional();
        let pat = SignPattern::from_s(&inst, &[]).unwrap();
        let box_m = crate::separation::default_box(&inst);
        let res = separate_heuristic(&inst, &qy, &pat, &box_m).unwrap();
        let exact = separate_pattern_exact(&inst, &qy, &pat, &box_m).unwrap();
        assert_eq!(res.lp_value, exact.lp_value);
        // The best nonnegative cut is the star cut on {0, 1, 2}: y + 2z_0 + z_1 + 2z_2 ≥ 8.
        assert_eq!(res.lp_value, Some(q(-11, 2)));
    }

    #[test]
    fn suggestions() {
        let inst = card5();
        let pats = suggest_patterns(&inst, &fractional(), 8, 1).unwrap();
        assert_eq!(pats[0].r, vec![0, 1, 2]);
        assert_eq!(pats[0].s, vec![3, 4]);
        assert!(pats.iter().any(|p| p.r == vec![0, 1] && p.s == vec![2, 3, 4]));
        assert!(pats.len() <= 8);
        let zero = SeparationQuery::new(q(1, 1), vec![Rational::zero(); 5]);
        assert!(suggest_patterns(&inst, &zero, 8, 1).unwrap()[0].s.is_empty());
        assert_eq!(suggest_patterns(&inst, &fractional(), 8, 1), Ok(pats));
    }

    #[test]
    fn beta_k_clamps() {
        let inst = card5();
        let pat = SignPattern::from_s(&inst, &[3, 4]).unwrap();
        assert_eq!(pat.beta_k(&inst, 0), q(0, 1));
        assert_eq!(pat.beta_k(&inst, 2), q(1, 1));
        assert_eq!(pat.beta_k(&inst, 3), q(2, 1));
    }

    fn small_instance() -> impl proptest::strategy::Strategy<Value = (MixKnapInstance, Vec<usize>, Vec<i64>)> {
        (3usize..7).prop_flat_map(|n| {
            (
                proptest::collection::vec(1i64..20, n),
                proptest::collection::vec(1i64..4, n),
                proptest::collection::vec(any::<bool>(), n),
                proptest::collection::vec(0i64..9, n),
                1i64..8,
            )
                .prop_filter_map("knapsack must bind", |(hv, av, sv, zv, p)| {
                    let total: i64 = av.iter().sum();
                    if total <= p || av.iter().any(|&a| a > p) {
                        return None;
                    }
                    let mut h = hv;
                    h.sort_unstable_by(|a, b| b.cmp(a));
                    let inst = MixKnapInstance::canonicalize(&ints(&h), &ints(&av), &q(p, 1)).ok()?;
                    let s: Vec<usize> = (0..sv.len()).filter(|&j| sv[j]).collect();
                    Some((inst, s, zv))
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn compact_solutions_are_valid((inst, s, zv) in small_instance()) {
            let pat = SignPattern::from_s(&inst, &s).unwrap();
            let z: Vec<Rational> = zv.iter().map(|&v| q(v, 8)).collect();
            let qy = SeparationQuery::new(q(0, 1), z);
            let box_m = crate::separation::default_box(&inst);
            let theta = ThetaLp::build(&inst, &qy, &pat, &box_m).unwrap();
            let sol = crate::lp::lp_solve(&theta.problem).unwrap();
            prop_assert_eq!(sol.status, LpStatus::Optimal);
            let pc = theta.project(&sol.primal);
            prop_assert!(gr_membership(&inst, &pat, &pc).unwrap().member);
            let exact = separate_pattern_exact(&inst, &qy, &pat, &box_m).unwrap();
            let compact = sol.objective_value.clone();
            let full = exact.lp_value.clone().unwrap();
            prop_assert!(full <= compact.clone());
            if pat.is_uniform(&inst) {
                prop_assert_eq!(full, compact);
            }
        }

        #[test]
        fn bracket_bounds_g((inst, s, zv) in small_instance(), k in 0usize..8) {
            let k = k.min(inst.nu());
            let Ok(pat) = SignPattern::from_s(&inst, &s) else { return Ok(()); };
            let delta: Vec<Rational> = zv.iter().map(|&v| Rational::from(v)).collect();
            let g = g_k(&KnapRestriction::new(&inst, k).unwrap(), &pat.s, &delta).unwrap().value;
            let l = match &pat.m_s {
                Some(m) => pat.s.len() as i64 - (inst.residual(k) / m).floor().to_i64().unwrap(),
                None => 0,
            };
            let b = delta_bracket(&pat.s, &delta, k, l).value;
            prop_assert!(g >= b);
            if pat.is_uniform(&inst) {
                prop_assert_eq!(g, b);
            }
        }
    }
}
