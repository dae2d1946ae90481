//! Exact optimization over the nested knapsack sets
//! `P_k = { z ∈ {0,1}^n : Σ_{j ≥ k} a_j z_j ≤ p - s_k }`, `0 ≤ k ≤ ν`.
//!
//! Scenarios `0..k` are fixed to one in every point this module returns; only
//! the tail `k..n` is optimized.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::instance::MixKnapInstance;
use crate::rational::{common_denominator, Rational};

/// Largest scaled capacity handled by the dynamic program.
pub const DP_CAPACITY_LIMIT: u64 = 1_000_000;
/// Largest `items × (capacity + 1)` table the dynamic program will allocate.
const DP_TABLE_LIMIT: u64 = 50_000_000;

/// The restriction `P_k` of the knapsack set.
#[derive(Debug, Clone)]
pub struct KnapRestriction<'a> {
    instance: &'a MixKnapInstance,
    k: usize,
    capacity: Rational,
}

impl<'a> KnapRestriction<'a> {
    pub fn new(instance: &'a MixKnapInstance, k: usize) -> Result<Self> {
        if k > instance.nu() {
            return Err(Error::DimensionMismatch { expected: instance.nu(), got: k });
        }
        Ok(KnapRestriction { instance, k, capacity: instance.residual(k) })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn capacity(&self) -> &Rational {
        &self.capacity
    }

    pub fn instance(&self) -> &MixKnapInstance {
        self.instance
    }
}

/// An optimal value together with a point of `P_k` attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnapOptimum {
    pub value: Rational,
    /// One on `0..k` and on the selected tail items.
    pub z: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Dynamic program when weights scale to small integers, else branch and bound.
    Auto,
    BranchAndBound,
}

#[derive(Debug, Clone)]
struct Item {
    index: usize,
    profit: Rational,
    weight: Rational,
}

/// Maximizes `Σ profit` subject to `Σ weight ≤ capacity`. Profits must be
/// positive and weights nonnegative. Returns the optimal profit and the
/// selected indices (ascending).
fn max_profit(items: Vec<Item>, capacity: &Rational, strategy: Strategy) -> (Rational, Vec<usize>) {
    let mut chosen = Vec::new();
    let mut value = Rational::zero();
    let mut rest = Vec::with_capacity(items.len());
    for it in items {
        debug_assert!(it.profit.is_positive() && !it.weight.is_negative());
        if it.weight.is_zero() {
            // Free items are always taken.
            value += &it.profit;
            chosen.push(it.index);
        } else if it.weight <= *capacity {
            rest.push(it);
        }
    }
    let total: Rational = rest.iter().map(|it| &it.weight).sum();
    if total <= *capacity {
        for it in rest {
            value += it.profit;
            chosen.push(it.index);
        }
    } else {
        let picked = match strategy {
            Strategy::Auto => dp_select(&rest, capacity).unwrap_or_else(|| bnb_select(&rest, capacity)),
            Strategy::BranchAndBound => bnb_select(&rest, capacity),
        };
        for i in picked {
            value += &rest[i].profit;
            chosen.push(rest[i].index);
        }
    }
    chosen.sort_unstable();
    (value, chosen)
}

/// Dynamic program over integer capacity after scaling by the common
/// denominator. `None` when the scaled problem is too large.
fn dp_select(items: &[Item], capacity: &Rational) -> Option<Vec<usize>> {
    let scale: BigInt =
        common_denominator(items.iter().map(|it| &it.weight).chain(core::iter::once(capacity)));
    let scale = Rational::from_bigint(scale);
    let cap = (capacity * &scale).numer().to_u64()?;
    if cap > DP_CAPACITY_LIMIT || (items.len() as u64) * (cap + 1) > DP_TABLE_LIMIT {
        return None;
    }
    let cap = cap as usize;
    let weights: Vec<usize> = items
        .iter()
        .map(|it| (&it.weight * &scale).numer().to_usize())
        .collect::<Option<_>>()?;
    let width = cap + 1;
    let mut best = vec![Rational::zero(); width];
    let mut take = vec![false; items.len() * width];
    for (i, it) in items.iter().enumerate() {
        let w = weights[i];
        for c in (w..=cap).rev() {
            let cand = &best[c - w] + &it.profit;
            if cand > best[c] {
                best[c] = cand;
                take[i * width + c] = true;
            }
        }
    }
    let mut picked = Vec::new();
    let mut c = cap;
    for i in (0..items.len()).rev() {
        if take[i * width + c] {
            picked.push(i);
            c -= weights[i];
        }
    }
    Some(picked)
}

/// Depth-first branch and bound with the fractional (LP) bound.
fn bnb_select(items: &[Item], capacity: &Rational) -> Vec<usize> {
    let mut order: Vec<usize> = (0..items.len()).collect();
    // Value density, best first. Weights are positive here.
    order.sort_by(|&i, &j| {
        let lhs = &items[i].profit * &items[j].weight;
        let rhs = &items[j].profit * &items[i].weight;
        rhs.cmp(&lhs).then(i.cmp(&j))
    });
    let sorted: Vec<&Item> = order.iter().map(|&i| &items[i]).collect();

    struct Search<'s> {
        items: Vec<&'s Item>,
        best_value: Rational,
        best: Vec<bool>,
        current: Vec<bool>,
    }

    impl Search<'_> {
        fn bound(&self, from: usize, room: &Rational, value: &Rational) -> Rational {
            let mut room = room.clone();
            let mut b = value.clone();
            for it in &self.items[from..] {
                if it.weight <= room {
                    room -= &it.weight;
                    b += &it.profit;
                } else {
                    b += &it.profit * &room / &it.weight;
                    break;
                }
            }
            b
        }

        fn visit(&mut self, i: usize, room: Rational, value: Rational) {
            if value > self.best_value {
                self.best_value = value.clone();
                self.best.clone_from(&self.current);
            }
            if i == self.items.len() || self.bound(i, &room, &value) <= self.best_value {
                return;
            }
            if self.items[i].weight <= room {
                self.current[i] = true;
                let r = &room - &self.items[i].weight;
                let v = &value + &self.items[i].profit;
                self.visit(i + 1, r, v);
                self.current[i] = false;
            }
            self.visit(i + 1, room, value);
        }
    }

    let n = sorted.len();
    let mut search = Search {
        items: sorted,
        best_value: Rational::zero(),
        best: vec![false; n],
        current: vec![false; n],
    };
    search.visit(0, capacity.clone(), Rational::zero());
    search
        .best
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(pos, _)| order[pos])
        .collect()
}

fn prefix_point(n: usize, k: usize, picked: &[usize]) -> Vec<bool> {
    let mut z = vec![false; n];
    z[..k].iter_mut().for_each(|x| *x = true);
    for &j in picked {
        z[j] = true;
    }
    z
}

/// The minimizer `f_k(α) = min { Σ_{j ≥ k} α_j z_j : z ∈ P_k }`.
pub fn f_k(restriction: &KnapRestriction<'_>, alpha: &[Rational]) -> Result<KnapOptimum> {
    f_k_with(restriction, alpha, Strategy::Auto)
}

pub fn f_k_with(
    restriction: &KnapRestriction<'_>,
    alpha: &[Rational],
    strategy: Strategy,
) -> Result<KnapOptimum> {
    let inst = restriction.instance;
    let n = inst.n();
    if alpha.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: alpha.len() });
    }
    let k = restriction.k;
    let items: Vec<Item> = (k..n)
        .filter(|&j| alpha[j].is_negative())
        .map(|j| Item { index: j, profit: -&alpha[j], weight: inst.a()[j].clone() })
        .collect();
    let (profit, picked) = max_profit(items, &restriction.capacity, strategy);
    Ok(KnapOptimum { value: -profit, z: prefix_point(n, k, &picked) })
}

/// `g_k(Δ) = min { Σ_{j ∈ S, j ≥ k} Δ_j (1 - z_j) : z ∈ P_k }` for `Δ ≥ 0` on
/// `S`. `delta` is indexed by scenario; entries outside `S` are ignored.
pub fn g_k(restriction: &KnapRestriction<'_>, s: &[usize], delta: &[Rational]) -> Result<KnapOptimum> {
    let inst = restriction.instance;
    let n = inst.n();
    if delta.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: delta.len() });
    }
    let k = restriction.k;
    let mut total = Rational::zero();
    let mut items = Vec::new();
    for &j in s {
        if j >= n {
            return Err(Error::DimensionMismatch { expected: n, got: j });
        }
        if delta[j].is_negative() {
            return Err(Error::PatternViolation(format!("Delta_{} = {} is negative", j, delta[j])));
        }
        if j >= k && delta[j].is_positive() {
            total += &delta[j];
            items.push(Item { index: j, profit: delta[j].clone(), weight: inst.a()[j].clone() });
        }
    }
    let (profit, picked) = max_profit(items, &restriction.capacity, Strategy::Auto);
    Ok(KnapOptimum { value: total - profit, z: prefix_point(n, k, &picked) })
}

/// Result of [`delta_bracket`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaBracket {
    pub value: Rational,
    /// The requested count exceeded the number of available tail values.
    pub clamped: bool,
}

/// `Δ[k, l]`: the sum of the smallest `l - |{j ∈ S : j < k}|` values among
/// `{Δ_j : j ∈ S, j ≥ k}`; zero when that count is not positive.
pub fn delta_bracket(s: &[usize], delta: &[Rational], k: usize, l: i64) -> DeltaBracket {
    let head = s.iter().filter(|&&j| j < k).count() as i64;
    let count = l - head;
    if count <= 0 {
        return DeltaBracket { value: Rational::zero(), clamped: false };
    }
    let mut tail: Vec<&Rational> = s.iter().filter(|&&j| j >= k).map(|&j| &delta[j]).collect();
    tail.sort();
    let clamped = count as usize > tail.len();
    DeltaBracket { value: tail.into_iter().take(count as usize).sum(), clamped }
}

/// Closed form of `f_k(α)` when `S` (given in the order `q`) and `α` have the
/// partition structure of the explicit facet family:
///
/// 1. `p - s_m` is an integer equal to `|S|`, and `a_j = 1` on `S`;
/// 2. `α ≥ 0` off `S` and `α ≤ 0` on `S`;
/// 3. every `q_i ≥ m + 1` and `α_{q_1} ≥ … ≥ α_{q_|S|}`;
/// 4. for `m < k ≤ ν`, positions `i > s_k - s_m` (1-based) have `q_i ≥ k`.
///
/// Then `f_k = Σ_S α` for `k ≤ m` and `Σ_{i > s_k - s_m} α_{q_i}` otherwise.
/// Each hypothesis is checked.
pub fn f_k_closed_form(
    instance: &MixKnapInstance,
    m: usize,
    q: &[usize],
    alpha: &[Rational],
    k: usize,
) -> Result<Rational> {
    let n = instance.n();
    let bad = |msg: alloc::string::String| Err(Error::HypothesisViolated(msg));
    if alpha.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: alpha.len() });
    }
    if m > instance.nu() || k > instance.nu() {
        return bad(format!("m = {} and k = {} must not exceed nu = {}", m, k, instance.nu()));
    }
    let room = instance.residual(m);
    if !room.is_integer() || room != Rational::from(q.len()) {
        return bad(format!("p - s_m = {} must be an integer equal to |S| = {}", room, q.len()));
    }
    let mut in_s = vec![false; n];
    for &j in q {
        if j >= n || in_s[j] {
            return bad(format!("S order repeats or overruns at {}", j));
        }
        in_s[j] = true;
        if instance.a()[j] != Rational::one() {
            return bad(format!("a_{} = {} is not 1", j, instance.a()[j]));
        }
        if j < m + 1 {
            return bad(format!("S member {} lies below m + 1 = {}", j, m + 1));
        }
    }
    for j in 0..n {
        if in_s[j] && alpha[j].is_positive() {
            return bad(format!("alpha_{} > 0 on S", j));
        }
        if !in_s[j] && alpha[j].is_negative() {
            return bad(format!("alpha_{} < 0 off S", j));
        }
    }
    if q.windows(2).any(|w| alpha[w[0]] < alpha[w[1]]) {
        return bad("alpha is not nonincreasing along the S order".into());
    }
    let s = instance.s();
    for kk in m + 1..=instance.nu() {
        let gap = &s[kk] - &s[m];
        for (pos, &qi) in q.iter().enumerate() {
            if Rational::from(pos + 1) > gap && qi < kk {
                return bad(format!("position {} of S has q = {} < k = {}", pos + 1, qi, kk));
            }
        }
    }
    if k <= m {
        return Ok(q.iter().map(|&j| &alpha[j]).sum());
    }
    let gap = &s[k] - &s[m];
    Ok(q.iter()
        .enumerate()
        .filter(|(pos, _)| Rational::from(pos + 1) > gap)
        .map(|(_, &j)| &alpha[j])
        .sum())
}
