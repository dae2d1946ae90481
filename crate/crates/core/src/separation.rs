//! Exact separation over `conv(Q)` by row generation.
//!
//! The master problem is
//!
//! ```text
//! min  α·z* - β   s.t.  Σ_{j<k} α_j + Σ_{j≥k} α_j z_j - β ≥ -h_k   for (k, z) generated so far
//! ```
//!
//! over the box `|α_j| ≤ M`, `|β| ≤ (n+1)M + h_max`. The separation oracle for
//! the rows is `f_k`: after every master solve each `k` whose slack is negative
//! contributes the row of its minimizer. On termination the master optimum is
//! a member of `G`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::cut::{MixingCut, Provenance};
use crate::error::{Error, Result};
use crate::instance::MixKnapInstance;
use crate::knapsack::{f_k, KnapRestriction};
use crate::lp::{LpProblem, LpRow, LpSolution, LpStatus, Sense, SimplexSession};
use crate::rational::Rational;

/// A candidate point `(y*, z*)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationQuery {
    pub y_star: Rational,
    pub z_star: Vec<Rational>,
    /// The caller vouches for `z* ∈ conv(P)`; only then is an `Inside`
    /// verdict a membership certificate.
    pub assume_z_in_conv_p: bool,
}

impl SeparationQuery {
    pub fn new(y_star: Rational, z_star: Vec<Rational>) -> Self {
        SeparationQuery { y_star, z_star, assume_z_in_conv_p: false }
    }

    pub fn assuming_conv_p(mut self) -> Self {
        self.assume_z_in_conv_p = true;
        self
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.z_star.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: self.z_star.len() });
        }
        if self.y_star.is_negative() {
            return Err(Error::BadQuery(format!("y* = {} is negative", self.y_star)));
        }
        for (j, v) in self.z_star.iter().enumerate() {
            if v.is_negative() || *v > Rational::one() {
                return Err(Error::BadQuery(format!("z*_{} = {} is outside [0, 1]", j, v)));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// `y* + LP* ≥ 0` with the optimum unaffected by the box.
    Inside,
    /// A valid cut violated by the point.
    CutFound,
    /// `y* + LP* ≥ 0` but the box is active, so a larger box may still
    /// produce a violated cut.
    LpUnboundedNormalized,
    /// No member of a restricted family is violated.
    InsideForFamily,
    /// The restricted family has no admissible member for this instance.
    FamilyEmpty,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Inside => "inside",
            Verdict::CutFound => "cut-found",
            Verdict::LpUnboundedNormalized => "lp-unbounded-normalized",
            Verdict::InsideForFamily => "inside-for-family",
            Verdict::FamilyEmpty => "family-empty",
        }
    }
}

/// Per-member diagnostics of a family search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyRecord {
    pub label: String,
    /// `β - y* - α·z*` of the best member, when the member was admissible.
    pub violation: Option<Rational>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationResult {
    pub verdict: Verdict,
    /// Minimum of `α·z* - β` over the searched family (`LP*`).
    pub lp_value: Option<Rational>,
    /// The minimizing cut when `y* + LP* < 0`.
    pub cut: Option<MixingCut>,
    /// `-(y* + LP*)` when positive, else zero.
    pub violation: Rational,
    /// Rows added to the master problem after the initial ones.
    pub generated_rows: usize,
    pub lp_solves: usize,
    /// Some box bound carries a nonzero multiplier at the optimum.
    pub box_active: bool,
    /// Box width of the final master problem.
    pub box_m: Option<Rational>,
    /// An `Inside` verdict here proves `(y*, z*) ∈ conv(Q)`.
    pub membership_certified: bool,
    pub records: Vec<FamilyRecord>,
}

impl SeparationResult {
    pub(crate) fn from_value(
        query: &SeparationQuery,
        lp_value: Rational,
        cut: MixingCut,
        inside: Verdict,
    ) -> Self {
        let total = &query.y_star + &lp_value;
        let (verdict, cut, violation) = if total.is_negative() {
            (Verdict::CutFound, Some(cut), -total)
        } else {
            (inside, None, Rational::zero())
        };
        SeparationResult {
            verdict,
            lp_value: Some(lp_value),
            cut,
            violation,
            generated_rows: 0,
            lp_solves: 0,
            box_active: false,
            box_m: None,
            membership_certified: false,
            records: Vec::new(),
        }
    }

    pub(crate) fn family_empty(records: Vec<FamilyRecord>) -> Self {
        SeparationResult {
            verdict: Verdict::FamilyEmpty,
            lp_value: None,
            cut: None,
            violation: Rational::zero(),
            generated_rows: 0,
            lp_solves: 0,
            box_active: false,
            box_m: None,
            membership_certified: false,
            records,
        }
    }

    pub fn is_cut(&self) -> bool {
        self.verdict == Verdict::CutFound
    }
}

/// `M = 2 (h_max - h_tail) + 1`.
pub fn default_box(instance: &MixKnapInstance) -> Rational {
    Rational::from(2) * (instance.h_max() - instance.h_tail()) + Rational::one()
}

/// True when some normalization bound carries a nonzero reduced cost, i.e.
/// the box is needed to certify optimality. `box_lower[j]` / `box_upper[j]`
/// mark which bounds are normalization rather than model constraints.
pub(crate) fn bounds_active(
    problem: &LpProblem,
    sol: &LpSolution,
    box_lower: &[bool],
    box_upper: &[bool],
) -> bool {
    (0..problem.num_vars()).any(|j| {
        let d = &sol.reduced_costs[j];
        // A positive reduced cost leans on the lower bound, negative on the upper.
        (d.is_positive() && box_lower[j] && problem.lower[j].as_ref() == Some(&sol.primal[j]))
            || (d.is_negative() && box_upper[j] && problem.upper[j].as_ref() == Some(&sol.primal[j]))
    })
}

fn g_row(instance: &MixKnapInstance, k: usize, z: &[bool]) -> LpRow {
    let n = instance.n();
    let mut coeffs = Vec::with_capacity(n + 1);
    for j in 0..n {
        coeffs.push(if j < k || z[j] { Rational::one() } else { Rational::zero() });
    }
    coeffs.push(-Rational::one());
    LpRow::new(coeffs, Sense::Ge, -&instance.h()[k])
}

/// Solves the separation LP over `G` with box width `box_m`.
pub fn separate_exact(
    instance: &MixKnapInstance,
    query: &SeparationQuery,
    box_m: &Rational,
) -> Result<SeparationResult> {
    let n = instance.n();
    query.validate(n)?;
    if !box_m.is_positive() {
        return Err(Error::ConfigViolation(format!("box M = {} must be positive", box_m)));
    }
    let mut objective = query.z_star.clone();
    objective.push(-Rational::one());
    let mut problem = LpProblem::new(objective);
    for j in 0..n {
        problem.set_bounds(j, Some(-box_m), Some(box_m.clone()));
    }
    let beta_box = Rational::from(n + 1) * box_m + instance.h_max();
    problem.set_bounds(n, Some(-&beta_box), Some(beta_box));
    for k in 0..=instance.nu() {
        problem.push_row(g_row(instance, k, &vec![false; n]))?;
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
            return Err(Error::ConfigViolation(format!(
                "separation master ended {:?}; the box should keep it bounded and feasible",
                sol.status
            )));
        }
        let alpha = &sol.primal[..n];
        let beta = &sol.primal[n];
        let mut added = false;
        let mut prefix = Rational::zero();
        for (k, restriction) in restrictions.iter().enumerate() {
            if k > 0 {
                prefix += &alpha[k - 1];
            }
            let opt = f_k(restriction, alpha)?;
            let slack = &prefix + &opt.value + &instance.h()[k] - beta;
            if slack.is_negative() {
                session.add_row(g_row(instance, k, &opt.z))?;
                generated += 1;
                added = true;
            }
        }
        if !added {
            break sol;
        }
    };

    let lp_value = sol.objective_value.clone();
    let cut = MixingCut::new(sol.primal[..n].to_vec(), sol.primal[n].clone(), Provenance::SeparationLp);
    let all = vec![true; n + 1];
    let box_active = bounds_active(session.problem(), &sol, &all, &all);
    let inside = if box_active { Verdict::LpUnboundedNormalized } else { Verdict::Inside };
    let mut result = SeparationResult::from_value(query, lp_value, cut, inside);
    result.generated_rows = generated;
    result.lp_solves = solves;
    result.box_active = box_active;
    result.box_m = Some(box_m.clone());
    result.membership_certified = result.verdict == Verdict::Inside && query.assume_z_in_conv_p;
    Ok(result)
}

/// [`separate_exact`], retried with the box scaled by `factor` while the
/// verdict is [`Verdict::LpUnboundedNormalized`], at most `rounds` times.
pub fn separate_exact_escalating(
    instance: &MixKnapInstance,
    query: &SeparationQuery,
    box_m: &Rational,
    factor: &Rational,
    rounds: usize,
) -> Result<SeparationResult> {
    let mut m = box_m.clone();
    let mut result = separate_exact(instance, query, &m)?;
    for _ in 0..rounds {
        if result.verdict != Verdict::LpUnboundedNormalized {
            break;
        }
        m = &m * factor;
        let next = separate_exact(instance, query, &m)?;
        result = SeparationResult {
            generated_rows: result.generated_rows + next.generated_rows,
            lp_solves: result.lp_solves + next.lp_solves,
            ..next
        };
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cut::g_membership;
    use crate::rational::{ints, q};

    fn card5() -> MixKnapInstance {
        MixKnapInstance::canonicalize(&ints(&[8, 6, 5, 3, 1]), &ints(&[1, 1, 1, 1, 1]), &q(3, 1))
            .unwrap()
    }

    fn fractional_query() -> SeparationQuery {
        SeparationQuery::new(q(3, 1), vec![q(1, 2), q(1, 2), q(1, 2), q(3, 4), q(3, 4)])
            .assuming_conv_p()
    }

    #[test]
    fn default_box_value() {
        assert_eq!(default_box(&card5()), q(11, 1));
    }

    #[test]
    fn fractional_point_is_cut() {
        let inst = card5();
        let qy = fractional_query();
        let r = separate_exact(&inst, &qy, &default_box(&inst)).unwrap();
        assert_eq!(r.verdict, Verdict::CutFound);
        let lp = r.lp_value.clone().unwrap();
        // The star cut alone gives 5/2 - 8.
        assert!(lp <= q(-11, 2));
        let cut = r.cut.unwrap();
        assert!(g_membership(&inst, &cut).unwrap().member);
        assert_eq!(cut.violation(&qy.y_star, &qy.z_star), r.violation);
        assert_eq!(r.violation, -(&qy.y_star + &lp));
    }

    #[test]
    fn extreme_point_is_tight() {
        let inst = card5();
        let qy = SeparationQuery::new(q(3, 1), ints(&[1, 1, 1, 0, 0])).assuming_conv_p();
        let r = separate_exact(&inst, &qy, &default_box(&inst)).unwrap();
        assert_eq!(r.verdict, Verdict::Inside);
        assert_eq!(r.lp_value, Some(q(-3, 1)));
        assert!(r.membership_certified);
    }

    #[test]
    fn high_y_zero_z_is_inside() {
        let inst = card5();
        for m in [q(1, 1), q(11, 1), q(100, 1)] {
            let qy = SeparationQuery::new(q(8, 1), ints(&[0, 0, 0, 0, 0])).assuming_conv_p();
            let r = separate_exact(&inst, &qy, &m).unwrap();
            assert!(r.cut.is_none());
            assert!(matches!(r.verdict, Verdict::Inside | Verdict::LpUnboundedNormalized));
        }
    }

    #[test]
    fn query_validation() {
        let inst = card5();
        let m = default_box(&inst);
        let bad_len = SeparationQuery::new(q(1, 1), ints(&[0, 0]));
        assert!(matches!(separate_exact(&inst, &bad_len, &m), Err(Error::DimensionMismatch { .. })));
        let bad_z = SeparationQuery::new(q(1, 1), ints(&[0, 0, 2, 0, 0]));
        assert!(matches!(separate_exact(&inst, &bad_z, &m), Err(Error::BadQuery(_))));
        let bad_y = SeparationQuery::new(q(-1, 1), ints(&[0, 0, 0, 0, 0]));
        assert!(matches!(separate_exact(&inst, &bad_y, &m), Err(Error::BadQuery(_))));
        let ok = SeparationQuery::new(q(1, 1), ints(&[0, 0, 0, 0, 0]));
        assert!(separate_exact(&inst, &ok, &q(0, 1)).is_err());
    }

    #[test]
    fn escalation_keeps_cut_verdicts() {
        let inst = card5();
        let qy = fractional_query();
        let r = separate_exact_escalating(&inst, &qy, &q(1, 1), &q(4, 1), 3).unwrap();
        assert_eq!(r.verdict, Verdict::CutFound);
        assert!(g_membership(&inst, r.cut.as_ref().unwrap()).unwrap().member);
    }
}
