//! Instance model: scenario values `h`, knapsack weights `a` and capacity `p`,
//! kept in canonical order (h nonincreasing).

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A canonical mixing-knapsack instance.
///
/// Invariants (checked on construction):
/// * `h` is nonincreasing and nonnegative,
/// * `0 ≤ a_j ≤ p` for every scenario and `Σ a_j > p`,
/// * `nu = max{k : s_k ≤ p}` with `s_k = a_0 + … + a_{k-1}`, so `nu < n`.
///
/// Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixKnapInstance {
    h: Vec<Rational>,
    a: Vec<Rational>,
    p: Rational,
    nu: usize,
    s: Vec<Rational>,
    perm: Vec<usize>,
}

/// One row of a chance constraint with a finite scenario distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioSource {
    /// Realizations of the row, one per scenario.
    pub xi: Vec<Rational>,
    /// Scenario probabilities; positive, summing to one.
    pub pi: Vec<Rational>,
    /// Allowed violation probability, in (0, 1).
    pub epsilon: Rational,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CanonicalizeOptions {
    /// Drop scenarios with zero knapsack weight before sorting.
    pub drop_zero_weights: bool,
}

impl MixKnapInstance {
    /// Sorts the scenario pairs `(h_j, a_j)` by `h` nonincreasing (stable) and
    /// derives `nu` and the prefix sums.
    pub fn canonicalize(h_raw: &[Rational], a_raw: &[Rational], p: &Rational) -> Result<Self> {
        Self::canonicalize_with(h_raw, a_raw, p, CanonicalizeOptions::default())
    }

    pub fn canonicalize_with(
        h_raw: &[Rational],
        a_raw: &[Rational],
        p: &Rational,
        opts: CanonicalizeOptions,
    ) -> Result<Self> {
        if h_raw.len() != a_raw.len() {
            return Err(Error::RejectsInstance(format!(
                "h has {} entries but a has {}",
                h_raw.len(),
                a_raw.len()
            )));
        }
        if p.is_negative() {
            return Err(Error::RejectsInstance(format!("negative capacity {}", p)));
        }
        for (j, (h, a)) in h_raw.iter().zip(a_raw).enumerate() {
            if h.is_negative() || a.is_negative() {
                return Err(Error::RejectsInstance(format!("negative entry at scenario {}", j)));
            }
            if a > p {
                return Err(Error::RejectsInstance(format!(
                    "a_{} = {} exceeds capacity {}",
                    j, a, p
                )));
            }
        }
        let mut order: Vec<usize> = (0..h_raw.len())
            .filter(|&j| !(opts.drop_zero_weights && a_raw[j].is_zero()))
            .collect();
        if order.len() < 2 {
            return Err(Error::RejectsInstance(format!(
                "need at least 2 scenarios, got {}",
                order.len()
            )));
        }
        // Stable: ties keep input order.
        order.sort_by(|&i, &j| h_raw[j].cmp(&h_raw[i]));
        let h: Vec<Rational> = order.iter().map(|&j| h_raw[j].clone()).collect();
        let a: Vec<Rational> = order.iter().map(|&j| a_raw[j].clone()).collect();
        Self::from_sorted_parts(h, a, p.clone(), order)
    }

    fn from_sorted_parts(
        h: Vec<Rational>,
        a: Vec<Rational>,
        p: Rational,
        perm: Vec<usize>,
    ) -> Result<Self> {
        let mut s = Vec::with_capacity(a.len() + 1);
        s.push(Rational::zero());
        for aj in &a {
            let next = s.last().unwrap() + aj;
            s.push(next);
        }
        if *s.last().unwrap() <= p {
            return Err(Error::RejectsInstance(format!(
                "total weight {} does not exceed capacity {}",
                s.last().unwrap(),
                p
            )));
        }
        let nu = s.iter().rposition(|sk| *sk <= p).unwrap();
        debug_assert!(nu < a.len());
        Ok(MixKnapInstance { h, a, p, nu, s, perm })
    }

    /// Maps a chance constraint to an instance: scenarios with `π_j > ε` are
    /// dropped (their indicator is forced to zero), then `a := π`, `p := ε`,
    /// `h := ξ`.
    pub fn from_chance_constraint(src: &ScenarioSource) -> Result<Self> {
        let n = src.xi.len();
        if src.pi.len() != n {
            return Err(Error::RejectsInstance(format!(
                "xi has {} entries but pi has {}",
                n,
                src.pi.len()
            )));
        }
        if !src.epsilon.is_positive() || src.epsilon >= Rational::one() {
            return Err(Error::RejectsInstance(format!(
                "epsilon = {} is not in (0, 1)",
                src.epsilon
            )));
        }
        if src.pi.iter().any(|p| !p.is_positive()) {
            return Err(Error::RejectsInstance("probabilities must be positive".into()));
        }
        let total: Rational = src.pi.iter().sum();
        if total != Rational::one() {
            return Err(Error::RejectsInstance(format!("probabilities sum to {}", total)));
        }
        let keep: Vec<usize> = (0..n).filter(|&j| src.pi[j] <= src.epsilon).collect();
        if keep.len() < 2 {
            return Err(Error::RejectsInstance(format!(
                "only {} scenario(s) remain after dropping pi_j > epsilon",
                keep.len()
            )));
        }
        let h: Vec<Rational> = keep.iter().map(|&j| src.xi[j].clone()).collect();
        let a: Vec<Rational> = keep.iter().map(|&j| src.pi[j].clone()).collect();
        let mut inst = Self::canonicalize(&h, &a, &src.epsilon)?;
        inst.perm = inst.perm.iter().map(|&j| keep[j]).collect();
        Ok(inst)
    }

    /// The same set `Q` described by the scaled knapsack row `d·a z ≤ d·p`.
    pub fn rescale_knapsack(&self, d: &Rational) -> Result<Self> {
        if !d.is_positive() {
            return Err(Error::RejectsInstance(format!("scale factor {} is not positive", d)));
        }
        let a: Vec<Rational> = self.a.iter().map(|x| x * d).collect();
        let inst = Self::from_sorted_parts(self.h.clone(), a, &self.p * d, self.perm.clone())?;
        debug_assert_eq!(inst.nu, self.nu);
        Ok(inst)
    }

    pub fn n(&self) -> usize {
        self.h.len()
    }

    pub fn h(&self) -> &[Rational] {
        &self.h
    }

    pub fn a(&self) -> &[Rational] {
        &self.a
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    /// Prefix sums `s_0 = 0, …, s_n`; `s[k]` is the weight of scenarios `0..k`.
    pub fn s(&self) -> &[Rational] {
        &self.s
    }

    /// `h` of the first scenario outside the longest feasible prefix. Every
    /// point of `Q` has `y ≥ h_tail`.
    pub fn h_tail(&self) -> &Rational {
        &self.h[self.nu]
    }

    /// Largest scenario value.
    pub fn h_max(&self) -> &Rational {
        &self.h[0]
    }

    /// Residual capacity `p - s_k` of the restriction that fixes scenarios
    /// `0..k` to one.
    pub fn residual(&self, k: usize) -> Rational {
        &self.p - &self.s[k]
    }

    /// `perm()[i]` is the input position of canonical scenario `i`.
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// True when every weight equals one (the cardinality case).
    pub fn is_cardinality(&self) -> bool {
        self.a.iter().all(|x| *x == Rational::one())
    }

    pub fn is_feasible(&self, z: &[bool]) -> bool {
        let w: Rational = self.a.iter().zip(z).filter(|(_, &zj)| zj).map(|(a, _)| a).sum();
        w <= self.p
    }

    /// Smallest `y` with `(y, z) ∈ Q`: the value of the first zero coordinate.
    /// `None` when `z` has no zero coordinate (then `z` is infeasible).
    pub fn min_y(&self, z: &[bool]) -> Option<Rational> {
        z.iter().position(|&zj| !zj).map(|j| self.h[j].clone())
    }

    pub fn h_f64(&self) -> Vec<f64> {
        self.h.iter().map(Rational::to_f64).collect()
    }

    pub fn a_f64(&self) -> Vec<f64> {
        self.a.iter().map(Rational::to_f64).collect()
    }
}
