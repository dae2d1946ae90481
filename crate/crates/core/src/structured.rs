//! Polynomial separation over the structured part of the facet family:
//! `S = F ∪ G` with the forced prefix `F = {k(1), …, k(r)}` and a free tail
//! `G` drawn from `{k(s), …, n-1}` (0-based, `s = p - s_m`).
//!
//! With this structure the coefficients do not depend on which `G` is chosen,
//! so for fixed `(m, r)` the best cut takes the `s - r` pool scenarios with the
//! largest `z*` and pairs the most negative coefficients with the largest
//! `z*`. The chain `T` is a shortest path on `0..=m`.
//!
//! Admissibility of `(m, r)`: `p - s_m` integral, `a_j ≤ s_m` for every `j`,
//! `k(1) < … < k(r) < k(r+1)` (the last comparison is dropped when `r = s`),
//! `F` inside `{j ≥ m + 1 : a_j = 1}`, no zero weight among scenarios
//! `m..ν` and a pool of at least `s - r` unit-weight scenarios.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::cut::MixingCut;
use crate::error::{Error, Result};
use crate::fdi::{fdi_cut, k_index_map, zero_weight_gap, FdiSpec, KIndexMap};
use crate::instance::MixKnapInstance;
use crate::rational::Rational;
use crate::separation::{FamilyRecord, SeparationQuery, SeparationResult, Verdict};

/// Cheapest chain `T ⊆ {0, …, m-1}` closed off at `m`, starting at a scenario
/// with `h = h_max`: minimizes `Σ_j (h[t_j] - h[t_{j+1}]) z*_{t_j}`.
pub fn best_t_shortest_path(
    instance: &MixKnapInstance,
    m: usize,
    z_star: &[Rational],
) -> Result<(Vec<usize>, Rational)> {
    if m > instance.nu() {
        return Err(Error::ConfigViolation(format!("m = {} exceeds nu = {}", m, instance.nu())));
    }
    if z_star.len() != instance.n() {
        return Err(Error::DimensionMismatch { expected: instance.n(), got: z_star.len() });
    }
    let h = instance.h();
    // dist[i]: cheapest path from node i to the sink m; next[i]: its successor.
    let mut dist: Vec<Rational> = alloc::vec![Rational::zero(); m + 1];
    let mut next: Vec<usize> = alloc::vec![m; m + 1];
    for i in (0..m).rev() {
        let mut best: Option<(Rational, usize)> = None;
        for j in (i + 1..=m).rev() {
            let c = (&h[i] - &h[j]) * &z_star[i] + &dist[j];
            // Scanning from the sink down keeps the longest arc on ties.
            if best.as_ref().is_none_or(|(b, _)| c < *b) {
                best = Some((c, j));
            }
        }
        let (c, j) = best.expect("i < m");
        dist[i] = c;
        next[i] = j;
    }
    let mut source = None;
    for i in 0..m {
        if h[i] == h[0] && source.is_none_or(|s: usize| dist[i] < dist[s]) {
            source = Some(i);
        }
    }
    let Some(mut node) = source else {
        return Ok((Vec::new(), Rational::zero()));
    };
    let cost = dist[node].clone();
    let mut t = Vec::new();
    while node < m {
        t.push(node);
        node = next[node];
    }
    Ok((t, cost))
}

/// Everything about `(m, ·)` that does not depend on `r`.
struct Prepared {
    m: usize,
    kmap: KIndexMap,
    /// Unit-weight scenarios from `max(k(s), m + 1)` on, by `z*` descending
    /// then index ascending.
    pool: Vec<usize>,
    t: Vec<usize>,
    t_cost: Rational,
}

fn prepare(instance: &MixKnapInstance, z_star: &[Rational], m: usize) -> core::result::Result<Prepared, String> {
    let kmap = match k_index_map(instance, m) {
        Ok(k) => k,
        Err(Error::NotIntegral { value, .. }) => return Err(format!("p - s_m = {} is not an integer", value)),
        Err(e) => return Err(format!("{}", e)),
    };
    if let Some(j) = zero_weight_gap(instance, m) {
        return Err(format!("a_{} = 0 lies in the window m .. nu", j));
    }
    let s_m = &instance.s()[m];
    if let Some(j) = (0..instance.n()).find(|&j| instance.a()[j] > *s_m) {
        return Err(format!("a_{} = {} exceeds s_m = {}", j, instance.a()[j], s_m));
    }
    let start = kmap.k_of.last().copied().unwrap_or(m).max(m + 1);
    let mut pool: Vec<usize> = (start..instance.n()).filter(|&j| instance.a()[j].is_one()).collect();
    pool.sort_by(|&x, &y| z_star[y].cmp(&z_star[x]).then(x.cmp(&y)));
    let (t, t_cost) = best_t_shortest_path(instance, m, z_star).map_err(|e| format!("{}", e))?;
    Ok(Prepared { m, kmap, pool, t, t_cost })
}

/// The best `S` order for `r` and its violation `β - y* - α·z*`.
fn evaluate(
    instance: &MixKnapInstance,
    query: &SeparationQuery,
    prep: &Prepared,
    r: usize,
) -> core::result::Result<(Vec<usize>, Rational), String> {
    let k_of = &prep.kmap.k_of;
    let s = k_of.len();
    let m = prep.m;
    if r > s {
        return Err(format!("r = {} exceeds p - s_m = {}", r, s));
    }
    let checked = (r + 1).min(s);
    if k_of[..checked].windows(2).any(|w| w[0] >= w[1]) {
        return Err(format!("k(1..={}) = {:?} is not strictly increasing", checked, &k_of[..checked]));
    }
    for &f in &k_of[..r] {
        if f < m + 1 || f >= instance.n() || !instance.a()[f].is_one() {
            return Err(format!("forced scenario {} is not in A_m", f));
        }
    }
    let free = s - r;
    if prep.pool.len() < free {
        return Err(format!("pool has {} scenarios, {} needed", prep.pool.len(), free));
    }
    let mut g: Vec<usize> = prep.pool[..free].to_vec();
    g.sort_by(|&x, &y| query.z_star[x].cmp(&query.z_star[y]).then(x.cmp(&y)));
    let mut q: Vec<usize> = k_of[..r].to_vec();
    q.extend(g);

    let h = instance.h();
    let mut prev: Option<Rational> = None;
    let mut tail_sum = Rational::zero();
    let mut gain = Rational::zero();
    for (j, &qj) in q.iter().enumerate() {
        let mut candidate = &h[k_of[j]] - &h[m];
        if j >= r {
            candidate -= &tail_sum;
        }
        let alpha = match prev {
            Some(p) if p < candidate => p,
            _ => candidate,
        };
        if j >= r {
            tail_sum += &alpha;
        }
        gain += &alpha * (Rational::one() - &query.z_star[qj]);
        prev = Some(alpha);
    }
    let head = &h[prep.t.first().copied().unwrap_or(m)];
    Ok((q, head - &query.y_star - &prep.t_cost + gain))
}

fn finish(
    instance: &MixKnapInstance,
    query: &SeparationQuery,
    prep: &Prepared,
    q: Vec<usize>,
    violation: &Rational,
    records: Vec<FamilyRecord>,
) -> Result<SeparationResult> {
    let cut: MixingCut = fdi_cut(instance, &FdiSpec::new(prep.m, prep.t.clone(), q))?;
    debug_assert_eq!(&cut.violation(&query.y_star, &query.z_star), violation);
    let lp_value = -violation - &query.y_star;
    let mut result = SeparationResult::from_value(query, lp_value, cut, Verdict::InsideForFamily);
    result.records = records;
    Ok(result)
}

fn label(m: usize, r: usize) -> String {
    format!("m={} r={}", m, r)
}

/// Most violated member for a fixed admissible `(m, r)`.
pub fn separate_structured(
    instance: &MixKnapInstance,
    query: &SeparationQuery,
    m: usize,
    r: usize,
) -> Result<SeparationResult> {
    query.validate(instance.n())?;
    let prep = prepare(instance, &query.z_star, m).map_err(Error::ConfigViolation)?;
    let (q, violation) = evaluate(instance, query, &prep, r).map_err(Error::ConfigViolation)?;
    let record = FamilyRecord { label: label(m, r), violation: Some(violation.clone()), note: None };
    finish(instance, query, &prep, q, &violation, alloc::vec![record])
}

/// Most violated member over every admissible `(m, r)`. Inadmissible pairs
/// are recorded with the failed condition.
pub fn separate_structured_all(instance: &MixKnapInstance, query: &SeparationQuery) -> Result<SeparationResult> {
    query.validate(instance.n())?;
    let mut records = Vec::new();
    let mut best: Option<(Prepared, Vec<usize>, Rational)> = None;
    for m in 0..=instance.nu() {
        let prep = match prepare(instance, &query.z_star, m) {
            Ok(p) => p,
            Err(note) => {
                log::debug!("structured separation skips m = {}: {}", m, note);
                records.push(FamilyRecord { label: format!("m={}", m), violation: None, note: Some(note) });
                continue;
            }
        };
        let mut local: Option<(Vec<usize>, Rational)> = None;
        for r in 0..=prep.kmap.len() {
            match evaluate(instance, query, &prep, r) {
                Ok((q, v)) => {
                    records.push(FamilyRecord { label: label(m, r), violation: Some(v.clone()), note: None });
                    if local.as_ref().is_none_or(|(_, b)| v > *b) {
                        local = Some((q, v));
                    }
                }
                Err(note) => {
                    log::debug!("structured separation skips m = {}, r = {}: {}", m, r, note);
                    records.push(FamilyRecord { label: label(m, r), violation: None, note: Some(note) });
                }
            }
        }
        if let Some((q, v)) = local {
            if best.as_ref().is_none_or(|(_, _, b)| v > *b) {
                best = Some((prep, q, v));
            }
        }
    }
    match best {
        None => Ok(SeparationResult::family_empty(records)),
        Some((prep, q, v)) => finish(instance, query, &prep, q, &v, records),
    }
}
