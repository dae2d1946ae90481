//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.
//!
//! Every expected value is produced by an oracle written here, independent of
//! the library code under test: hull enumeration, direct formulas for the
//! explicit families, and exhaustive search for structured separation.

use std::process::ExitCode;
use std::time::Instant;

use mixknap_core::cut::{g_membership, MixingCut, Provenance};
use mixknap_core::fdi::{enumerate_specs, fdi_cut, fdi_tight_points, verify_tight_points, FdiSpec, SpecEnumeration};
use mixknap_core::heuristic::{
    separate_heuristic, separate_heuristic_patterns, separate_pattern_exact, suggest_patterns, SignPattern,
};
use mixknap_core::hull::{certify_facet_on, certify_valid_on, enumerate_hull_points, sample_inside_on, HullPoint};
use mixknap_core::knapsack::{delta_bracket, g_k, KnapRestriction};
use mixknap_core::lp::duality_stats;
use mixknap_core::separation::{default_box, separate_exact, SeparationQuery, Verdict};
use mixknap_core::structured::separate_structured_all;
use mixknap_core::{MixKnapInstance, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Gate {
    failed: usize,
}

impl Gate {
    fn report(&mut self, id: &str, title: &str, pass: bool, detail: String, started: Instant) {
        if !pass {
            self.failed += 1;
        }
        println!(
            "criterion {:<4} [{}] {}: {} ({:.1} s)",
            id,
            if pass { "PASS" } else { "FAIL" },
            title,
            detail,
            started.elapsed().as_secs_f64()
        );
    }
}

/// `"; first: …"` for a nonempty failure list.
fn first(bad: Option<&String>) -> String {
    bad.map_or(String::new(), |b| format!("; first: {}", b))
}

fn r(v: i64) -> Rational {
    Rational::from(v)
}

fn rv(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| r(x)).collect()
}

fn nonincreasing_h(rng: &mut ChaCha8Rng, n: usize, top: i64) -> Vec<i64> {
    let mut h: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=top)).collect();
    h.sort_unstable_by(|a, b| b.cmp(a));
    h
}

/// `n ≤ 12`, integer `a ∈ [0, 20]`, `a_j ≤ p < Σ a`, random nonincreasing `h`.
fn general_pool(seed: u64, count: usize) -> Vec<MixKnapInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(3..=12usize);
        let a: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=20)).collect();
        let sum: i64 = a.iter().sum();
        let max = *a.iter().max().unwrap();
        if sum <= max {
            continue;
        }
        let p = rng.gen_range(max..sum);
        let h = nonincreasing_h(&mut rng, n, 40);
        out.push(MixKnapInstance::canonicalize(&rv(&h), &rv(&a), &r(p)).expect("pool instance"));
    }
    out
}

fn cardinality_pool(seed: u64, count: usize) -> Vec<MixKnapInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(3..=12usize);
            let p = rng.gen_range(1..n as i64);
            let h = nonincreasing_h(&mut rng, n, 40);
            MixKnapInstance::canonicalize(&rv(&h), &vec![r(1); n], &r(p)).expect("cardinality instance")
        })
        .collect()
}

/// Mostly unit weights so that the structured family is often nonempty.
fn structured_pool(seed: u64, count: usize) -> Vec<MixKnapInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(4..=10usize);
        let a: Vec<i64> = (0..n).map(|_| if rng.gen_bool(0.8) { 1 } else { rng.gen_range(2..=3) }).collect();
        let sum: i64 = a.iter().sum();
        let max = *a.iter().max().unwrap();
        if sum <= max {
            continue;
        }
        let p = rng.gen_range(max..sum);
        let h = nonincreasing_h(&mut rng, n, 30);
        out.push(MixKnapInstance::canonicalize(&rv(&h), &rv(&a), &r(p)).expect("structured instance"));
    }
    out
}

fn random_rational(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    Rational::new(rng.gen_range(-bound..=bound), rng.gen_range(1..=3))
}

fn dot_binary(alpha: &[Rational], z: &[bool]) -> Rational {
    alpha.iter().zip(z).filter(|(_, &b)| b).map(|(a, _)| a).sum()
}

/// `min { y + α·z }` over the hull points.
fn hull_min(points: &[HullPoint], alpha: &[Rational]) -> Rational {
    points.iter().map(|pt| &pt.y + dot_binary(alpha, &pt.z)).min().unwrap()
}

/// `min { α·z : z feasible for the knapsack }`, read off the hull points.
fn f0_oracle(points: &[HullPoint], alpha: &[Rational]) -> Rational {
    points.iter().map(|pt| dot_binary(alpha, &pt.z)).min().unwrap()
}

/// Strengthened star inequality, closed off by `h[ν]`.
fn star_oracle(inst: &MixKnapInstance, t: &[usize]) -> (Vec<Rational>, Rational) {
    let h = inst.h();
    let nu = inst.nu();
    let mut alpha = vec![Rational::zero(); inst.n()];
    for (i, &tj) in t.iter().enumerate() {
        let next = if i + 1 < t.len() { t[i + 1] } else { nu };
        alpha[tj] = &h[tj] - &h[next];
    }
    let beta = h[if t.is_empty() { nu } else { t[0] }].clone();
    (alpha, beta)
}

/// Cardinality-case inequality from the `Δ` recursion over `ℓ_1, …, ℓ_s`:
/// `Δ_1 = h[m] - h[m+1]`, `Δ_j = max(Δ_{j-1}, h[m] - h[m+j] - Σ(Δ_i : i < j, ℓ_i ≥ m+j))`.
fn tpl_oracle(inst: &MixKnapInstance, t: &[usize], m: usize, l: &[usize]) -> (Vec<Rational>, Rational) {
    let h = inst.h();
    let mut delta: Vec<Rational> = Vec::new();
    for j in 1..=l.len() {
        let earlier: Rational = (0..j - 1).filter(|&i| l[i] >= m + j).map(|i| delta[i].clone()).sum();
        let candidate = &h[m] - &h[m + j] - earlier;
        let d = match delta.last() {
            Some(prev) if *prev > candidate => prev.clone(),
            _ => candidate,
        };
        delta.push(d);
    }
    let mut alpha = vec![Rational::zero(); inst.n()];
    for (i, &tj) in t.iter().enumerate() {
        let next = if i + 1 < t.len() { t[i + 1] } else { m };
        alpha[tj] = &h[tj] - &h[next];
    }
    let mut beta = h[if t.is_empty() { m } else { t[0] }].clone();
    for (&lj, d) in l.iter().zip(&delta) {
        alpha[lj] = -d;
        beta -= d;
    }
    (alpha, beta)
}

/// Validity constraints of the cardinality case written out directly: for
/// each prefix `k`, the `p - k` most negative tail coefficients are taken.
fn cardinality_slacks(inst: &MixKnapInstance, alpha: &[Rational], beta: &Rational) -> Vec<Rational> {
    let p = inst.p().to_i64().unwrap() as usize;
    let n = inst.n();
    (0..=p)
        .map(|k| {
            let head: Rational = alpha[..k].iter().sum();
            let mut tail: Vec<Rational> = alpha[k..n].iter().filter(|a| a.is_negative()).cloned().collect();
            tail.sort();
            let best: Rational = tail.into_iter().take(p - k).sum();
            head + best + &inst.h()[k] - beta
        })
        .collect()
}

/// `k(j) = max { k : s_k - s_m ≤ j }` for `j = 1..=s`.
fn k_map_oracle(inst: &MixKnapInstance, m: usize, s: usize) -> Vec<usize> {
    let sums = inst.s();
    (1..=s).map(|j| (m..=inst.n()).filter(|&k| &sums[k] - &sums[m] <= r(j as i64)).max().unwrap()).collect()
}

/// Exhaustive best violation over the structured family, or `None` when no
/// member is admissible.
fn structured_oracle(inst: &MixKnapInstance, query: &SeparationQuery) -> Option<Rational> {
    let n = inst.n();
    let h = inst.h();
    let a = inst.a();
    let z = &query.z_star;
    let mut best: Option<Rational> = None;
    for m in 0..=inst.nu() {
        let room = inst.p() - &inst.s()[m];
        let zero_in_window = (m..inst.nu()).any(|j| a[j].is_zero());
        if !room.is_integer() || zero_in_window || a.iter().any(|aj| *aj > inst.s()[m]) {
            continue;
        }
        let s = room.to_i64().unwrap() as usize;
        let k = k_map_oracle(inst, m, s);
        // Chain part: every T ⊆ {0..m-1}.
        let mut chain_best: Option<Rational> = None;
        for mask in 0u32..(1 << m) {
            let t: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
            let mut value = h[t.first().copied().unwrap_or(m)].clone();
            for (i, &tj) in t.iter().enumerate() {
                let next = t.get(i + 1).copied().unwrap_or(m);
                value -= (&h[tj] - &h[next]) * &z[tj];
            }
            chain_best = Some(chain_best.map_or(value.clone(), |b| b.max(value)));
        }
        let chain_best = chain_best.unwrap();
        for rr in 0..=s {
            let upto = (rr + 1).min(s);
            if (1..upto).any(|i| k[i - 1] >= k[i]) {
                continue;
            }
            let forced: Vec<usize> = k[..rr].to_vec();
            if forced.iter().any(|&f| f < m + 1 || f >= n || !a[f].is_one()) {
                continue;
            }
            let lo = if s == 0 { m + 1 } else { k[s - 1].max(m + 1) };
            let pool: Vec<usize> = (lo..n).filter(|&j| a[j].is_one() && !forced.contains(&j)).collect();
            let mut g = Vec::new();
            let mut used = vec![false; n];
            let mut tail_best: Option<Rational> = None;
            ordered_selections(&pool, s - rr, &mut g, &mut used, &mut |g: &[usize]| {
                let q: Vec<usize> = forced.iter().chain(g).copied().collect();
                let mut alpha: Vec<Rational> = Vec::new();
                for j in 0..q.len() {
                    let earlier: Rational =
                        (0..j).filter(|&i| q[i] >= k[j]).map(|i| alpha[i].clone()).sum();
                    let cand = &h[k[j]] - &h[m] - earlier;
                    let v = match alpha.last() {
                        Some(prev) if *prev < cand => prev.clone(),
                        _ => cand,
                    };
                    alpha.push(v);
                }
                let value: Rational =
                    q.iter().zip(&alpha).map(|(&qj, aj)| aj * (Rational::one() - &z[qj])).sum();
                tail_best = Some(tail_best.take().map_or(value.clone(), |b| b.max(value)));
            });
            if let Some(tb) = tail_best {
                let v = &chain_best + tb - &query.y_star;
                best = Some(best.map_or(v.clone(), |b| b.max(v)));
            }
        }
    }
    best
}

fn ordered_selections(
    pool: &[usize],
    len: usize,
    current: &mut Vec<usize>,
    used: &mut [bool],
    visit: &mut dyn FnMut(&[usize]),
) {
    if current.len() == len {
        visit(current);
        return;
    }
    for &j in pool {
        if !used[j] {
            used[j] = true;
            current.push(j);
            ordered_selections(pool, len, current, used, visit);
            current.pop();
            used[j] = false;
        }
    }
}

fn fractional_query(rng: &mut ChaCha8Rng, inst: &MixKnapInstance) -> SeparationQuery {
    let z: Vec<Rational> = (0..inst.n()).map(|_| Rational::new(rng.gen_range(0..=8), 8)).collect();
    let top = inst.h_max().to_i64().unwrap();
    SeparationQuery::new(Rational::new(rng.gen_range(0..=4 * top), 4), z)
}

fn main() -> ExitCode {
    let mut gate = Gate { failed: 0 };
    let pool = general_pool(0x5eed_0001, 200);
    let hulls: Vec<Vec<HullPoint>> = pool.iter().map(|i| enumerate_hull_points(i).expect("hull")).collect();
    let cards = cardinality_pool(0x5eed_0003, 60);
    let card_hulls: Vec<Vec<HullPoint>> = cards.iter().map(|i| enumerate_hull_points(i).expect("hull")).collect();
    let mut facet_cuts: Vec<(usize, MixingCut)> = Vec::new();

    // 1. Validity agrees with coefficient-polyhedron membership.
    {
        let t0 = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0011);
        let (mut total, mut valid, mut mismatches, mut errors) = (0, 0, 0, 0);
        for (inst, points) in pool.iter().zip(&hulls) {
            let range = (inst.h_max() - inst.h_tail()).to_i64().unwrap().max(1);
            for _ in 0..50 {
                let alpha: Vec<Rational> = (0..inst.n())
                    .map(|_| if rng.gen_bool(0.3) { Rational::zero() } else { random_rational(&mut rng, 2 * range) })
                    .collect();
                let base = hull_min(points, &alpha);
                let beta = match rng.gen_range(0..4) {
                    0 => base,
                    1 => base + Rational::new(1, rng.gen_range(1..=6)),
                    2 => base - Rational::new(rng.gen_range(1..=6), rng.gen_range(1..=3)),
                    _ => base + random_rational(&mut rng, range),
                };
                let cut = MixingCut::new(alpha, beta, Provenance::Manual);
                total += 1;
                let truth = certify_valid_on(points, &cut).valid;
                valid += truth as usize;
                match g_membership(inst, &cut) {
                    Ok(rep) if rep.member == truth => {}
                    Ok(_) => mismatches += 1,
                    Err(_) => errors += 1,
                }
            }
        }
        let secs = t0.elapsed().as_secs_f64();
        gate.report(
            "1",
            "validity <=> G-membership",
            mismatches == 0 && errors == 0 && secs < 120.0,
            format!("{} cuts ({} valid), {} mismatches, {} errors", total, valid, mismatches, errors),
            t0,
        );
    }

    // 2. Facet family: validity, facet claim vs hull rank, tight points.
    {
        let t0 = Instant::now();
        let (mut specs_seen, mut facets, mut bad) = (0, 0, Vec::new());
        let opts = SpecEnumeration::default();
        for (idx, (inst, points)) in pool.iter().zip(&hulls).chain(cards.iter().zip(&card_hulls)).enumerate() {
            let specs = match enumerate_specs(inst, &opts) {
                Ok(s) => s,
                Err(e) => {
                    bad.push(format!("instance {}: {}", idx, e));
                    continue;
                }
            };
            for spec in specs {
                specs_seen += 1;
                let cut = match fdi_cut(inst, &spec) {
                    Ok(c) => c,
                    Err(e) => {
                        bad.push(format!("instance {} {:?}: {}", idx, spec, e));
                        continue;
                    }
                };
                if !g_membership(inst, &cut).map(|r| r.member).unwrap_or(false) {
                    bad.push(format!("instance {} {:?}: not a G member", idx, spec));
                    continue;
                }
                let claim = cut.facet_claim == Some(true);
                match certify_facet_on(points, inst.n(), &cut) {
                    Ok(fr) if fr.is_facet == claim => {}
                    Ok(fr) => bad.push(format!("instance {} {:?}: claim {} rank {}", idx, spec, claim, fr.rank)),
                    Err(e) => bad.push(format!("instance {} {:?}: {}", idx, spec, e)),
                }
                if claim {
                    facets += 1;
                    let ok = fdi_tight_points(inst, &spec)
                        .map(|pts| verify_tight_points(inst, &cut, &pts))
                        .map(|rep| rep.count == inst.n() + 1 && rep.certifies_facet(inst.n()))
                        .unwrap_or(false);
                    if !ok {
                        bad.push(format!("instance {} {:?}: tight points do not certify", idx, spec));
                    }
                    facet_cuts.push((idx, cut));
                }
            }
        }
        gate.report(
            "2",
            "facet family validity and facetness",
            bad.is_empty() && specs_seen > 0,
            format!("{} specs ({} facet claims), {} mismatches{}", specs_seen, facets, bad.len(), first(bad.first())),
            t0,
        );
    }

    // 3. Cardinality specializations.
    {
        let t0 = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0031);
        let (mut stars, mut tpls, mut slack_checks, mut bad) = (0, 0, 0, Vec::new());
        for (idx, (inst, points)) in cards.iter().zip(&card_hulls).enumerate() {
            let nu = inst.nu();
            for mask in 0u32..(1 << nu) {
                let t: Vec<usize> = (0..nu).filter(|&i| mask >> i & 1 == 1).collect();
                let (alpha, beta) = star_oracle(inst, &t);
                stars += 1;
                match fdi_cut(inst, &FdiSpec::new(nu, t.clone(), Vec::new())) {
                    Ok(c) if c.alpha == alpha && c.beta == beta => {}
                    other => bad.push(format!("(a) instance {} T={:?}: {:?}", idx, t, other.map(|c| c.alpha))),
                }
            }
            let specs = enumerate_specs(inst, &SpecEnumeration::default()).unwrap_or_default();
            let mut cuts: Vec<MixingCut> = Vec::new();
            for spec in &specs {
                let Ok(cut) = fdi_cut(inst, spec) else {
                    bad.push(format!("(b) instance {} {:?}: rejected", idx, spec));
                    continue;
                };
                if !spec.q.is_empty() {
                    tpls += 1;
                    let (alpha, beta) = tpl_oracle(inst, &spec.t, spec.m, &spec.q);
                    if cut.alpha != alpha || cut.beta != beta {
                        bad.push(format!("(b) instance {} {:?}", idx, spec));
                    }
                }
                cuts.push(cut);
            }
            let range = (inst.h_max() - inst.h_tail()).to_i64().unwrap().max(1);
            for _ in 0..20 {
                let alpha: Vec<Rational> = (0..inst.n()).map(|_| random_rational(&mut rng, 2 * range)).collect();
                let beta = hull_min(points, &alpha) + random_rational(&mut rng, 2);
                cuts.push(MixingCut::new(alpha, beta, Provenance::Manual));
            }
            for cut in &cuts {
                slack_checks += 1;
                let expected = cardinality_slacks(inst, &cut.alpha, &cut.beta);
                match g_membership(inst, cut) {
                    Ok(rep) if rep.slacks == expected => {}
                    _ => bad.push(format!("(c) instance {} alpha {:?}", idx, cut.alpha)),
                }
            }
        }
        gate.report(
            "3",
            "cardinality specializations",
            bad.is_empty() && tpls > 0,
            format!(
                "(a) {} star chains, (b) {} recursions, (c) {} slack vectors, {} mismatches{}",
                stars,
                tpls,
                slack_checks,
                bad.len(),
                first(bad.first())
            ),
            t0,
        );
    }

    // 4. Exact separation soundness and completeness.
    {
        let t0 = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0041);
        let (mut inside_n, mut outside_n, mut bad) = (0, 0, Vec::new());
        let mut verdicts = std::collections::BTreeMap::new();
        for (idx, (inst, points)) in pool.iter().zip(&hulls).enumerate() {
            let box_m = default_box(inst);
            for query in sample_inside_on(points, 0x1000 + idx as u64, 100) {
                inside_n += 1;
                match separate_exact(inst, &query, &box_m) {
                    Ok(res) => {
                        *verdicts.entry(res.verdict.as_str()).or_insert(0usize) += 1;
                        let total = &query.y_star + res.lp_value.as_ref().unwrap();
                        if res.verdict != Verdict::Inside || total.is_negative() {
                            bad.push(format!("inside: instance {} verdict {}", idx, res.verdict.as_str()));
                        }
                    }
                    Err(e) => bad.push(format!("inside: instance {}: {}", idx, e)),
                }
            }
            for _ in 0..100 {
                outside_n += 1;
                let pt = &points[rng.gen_range(0..points.len())];
                let cut_back = &pt.y * Rational::new(rng.gen_range(1..=8), 8);
                let z: Vec<Rational> = pt.z.iter().map(|&b| if b { Rational::one() } else { Rational::zero() }).collect();
                let query = SeparationQuery::new(&pt.y - cut_back, z);
                match separate_exact(inst, &query, &box_m) {
                    Ok(res) => {
                        let Some(cut) = res.cut.clone() else {
                            bad.push(format!("outside: instance {} verdict {}", idx, res.verdict.as_str()));
                            continue;
                        };
                        let lp_total = &query.y_star + res.lp_value.as_ref().unwrap();
                        let v = cut.violation(&query.y_star, &query.z_star);
                        if !certify_valid_on(points, &cut).valid || v != -lp_total || v != res.violation {
                            bad.push(format!("outside: instance {} bad cut", idx));
                        }
                        if let Ok(fr) = certify_facet_on(points, inst.n(), &cut) {
                            if fr.is_facet {
                                facet_cuts.push((idx, cut));
                            }
                        }
                    }
                    Err(e) => bad.push(format!("outside: instance {}: {}", idx, e)),
                }
            }
        }
        gate.report(
            "4",
            "exact separation soundness/completeness",
            bad.is_empty(),
            format!(
                "{} inside {:?}, {} outside, {} failures{}",
                inside_n,
                verdicts,
                outside_n,
                bad.len(),
                first(bad.first())
            ),
            t0,
        );
    }

    // 5. Structured separation optimality and runtime.
    {
        let t0 = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0051);
        let spool = structured_pool(0x5eed_0052, 80);
        let (mut checked, mut nonempty, mut cuts, mut bad) = (0, 0, 0, Vec::new());
        for (idx, inst) in spool.iter().enumerate() {
            let points = enumerate_hull_points(inst).expect("hull");
            let mut queries: Vec<SeparationQuery> = (0..15).map(|_| fractional_query(&mut rng, inst)).collect();
            queries.extend(sample_inside_on(&points, 0x2000 + idx as u64, 5));
            for query in queries {
                checked += 1;
                let oracle = structured_oracle(inst, &query);
                match (separate_structured_all(inst, &query), oracle) {
                    (Ok(res), None) if res.verdict == Verdict::FamilyEmpty => {}
                    (Ok(res), Some(best)) if res.verdict != Verdict::FamilyEmpty => {
                        nonempty += 1;
                        let lp = res.lp_value.clone().unwrap();
                        if lp != -&best - &query.y_star {
                            bad.push(format!("instance {}: lp {} vs oracle {}", idx, lp, best));
                        }
                        if let Some(cut) = &res.cut {
                            cuts += 1;
                            if !certify_valid_on(&points, cut).valid || cut.violation(&query.y_star, &query.z_star) != best {
                                bad.push(format!("instance {}: cut disagrees", idx));
                            }
                        }
                    }
                    (Ok(res), o) => bad.push(format!("instance {}: verdict {} oracle {:?}", idx, res.verdict.as_str(), o)),
                    (Err(e), _) => bad.push(format!("instance {}: {}", idx, e)),
                }
            }
        }
        let mut big_rng = ChaCha8Rng::seed_from_u64(0x5eed_0053);
        let n = 2000;
        let h = nonincreasing_h(&mut big_rng, n, 1_000_000);
        let big = MixKnapInstance::canonicalize(&rv(&h), &vec![r(1); n], &r(100)).expect("large instance");
        let z: Vec<Rational> = (0..n).map(|_| Rational::new(big_rng.gen_range(0..=16), 16)).collect();
        let query = SeparationQuery::new(Rational::zero(), z);
        let tb = Instant::now();
        let big_res = separate_structured_all(&big, &query);
        let big_secs = tb.elapsed().as_secs_f64();
        let big_ok = big_res.is_ok() && big_secs < 10.0;
        gate.report(
            "5",
            "structured separation optimality",
            bad.is_empty() && big_ok && nonempty > 0 && cuts > 0,
            format!(
                "{} queries ({} with admissible members, {} cuts), {} mismatches{}; n=2000 p=100 in {:.2} s",
                checked,
                nonempty,
                cuts,
                bad.len(),
                first(bad.first()),
                big_secs
            ),
            t0,
        );
    }

    // 6. Sign-pattern separation.
    {
        let t0 = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0061);
        let (mut uniform_triples, mut bad_a) = (0, Vec::new());
        for i in 0..1000 {
            let inst = &pool[i % pool.len()];
            let n = inst.n();
            let positive: Vec<usize> = (0..n).filter(|&j| inst.a()[j].is_positive()).collect();
            let s: Vec<usize> = if rng.gen_bool(0.5) {
                let w = &inst.a()[positive[rng.gen_range(0..positive.len())]];
                positive.iter().copied().filter(|&j| inst.a()[j] == *w && rng.gen_bool(0.8)).collect()
            } else {
                positive.iter().copied().filter(|_| rng.gen_bool(0.5)).collect()
            };
            let pattern = SignPattern::from_s(inst, &s).expect("positive weights");
            let delta: Vec<Rational> = (0..n).map(|_| Rational::new(rng.gen_range(0..=12), rng.gen_range(1..=2))).collect();
            let k = rng.gen_range(0..=inst.nu());
            let g = g_k(&KnapRestriction::new(inst, k).unwrap(), &s, &delta).unwrap().value;
            let l = match &pattern.m_s {
                Some(m) => s.len() as i64 - (inst.residual(k) / m).floor().to_i64().unwrap(),
                None => 0,
            };
            let b = delta_bracket(&s, &delta, k, l).value;
            let uniform = pattern.is_uniform(inst);
            uniform_triples += uniform as usize;
            if g < b || (uniform && g != b) {
                bad_a.push(format!("triple {}: g {} bracket {}", i, g, b));
            }
        }

        let (mut compared, mut emitted, mut bad_b, mut bad_c) = (0, 0, Vec::new(), Vec::new());
        let small: Vec<(&MixKnapInstance, &Vec<HullPoint>)> = pool
            .iter()
            .zip(&hulls)
            .chain(cards.iter().zip(&card_hulls))
            .filter(|(i, _)| i.n() <= 10)
            .collect();
        for (idx, (inst, points)) in small.iter().enumerate() {
            let n = inst.n();
            let box_m = default_box(inst);
            let positive: Vec<usize> = (0..n).filter(|&j| inst.a()[j].is_positive()).collect();
            for _ in 0..4 {
                let w = &inst.a()[positive[rng.gen_range(0..positive.len())]];
                let s: Vec<usize> = positive.iter().copied().filter(|&j| inst.a()[j] == *w && rng.gen_bool(0.7)).collect();
                let pattern = SignPattern::from_s(inst, &s).unwrap();
                let query = fractional_query(&mut rng, inst);
                let heur = separate_heuristic(inst, &query, &pattern, &box_m);
                let full = separate_pattern_exact(inst, &query, &pattern, &box_m);
                compared += 1;
                match (&heur, &full) {
                    (Ok(h), Ok(f)) if h.lp_value == f.lp_value => {}
                    (Ok(h), Ok(f)) => bad_b.push(format!("instance {} S={:?}: {:?} vs {:?}", idx, s, h.lp_value, f.lp_value)),
                    _ => bad_b.push(format!("instance {} S={:?}: error", idx, s)),
                }
                if let Ok(h) = heur {
                    if let Some(cut) = h.cut {
                        emitted += 1;
                        if !certify_valid_on(points, &cut).valid {
                            bad_c.push(format!("instance {} S={:?}", idx, s));
                        }
                    }
                }
            }
            let query = fractional_query(&mut rng, inst);
            let patterns = suggest_patterns(inst, &query, 8, idx as u64).unwrap();
            match separate_heuristic_patterns(inst, &query, &patterns, &box_m) {
                Ok(res) => {
                    if let Some(cut) = res.cut {
                        emitted += 1;
                        if !certify_valid_on(points, &cut).valid {
                            bad_c.push(format!("instance {} auto patterns", idx));
                        }
                    }
                }
                Err(e) => bad_c.push(format!("instance {}: {}", idx, e)),
            }
        }
        gate.report(
            "6",
            "sign-pattern separation",
            bad_a.is_empty() && bad_b.is_empty() && bad_c.is_empty() && emitted > 0,
            format!(
                "(a) 1000 triples ({} uniform), {} failures; (b) {} uniform LPs, {} mismatches; (c) {} cuts, {} invalid{}",
                uniform_triples,
                bad_a.len(),
                compared,
                bad_b.len(),
                emitted,
                bad_c.len(),
                first(bad_a.first().or(bad_b.first()).or(bad_c.first()))
            ),
            t0,
        );
    }

    // 7. Necessary facet conditions on every certified facet.
    {
        let t0 = Instant::now();
        let mut bad = Vec::new();
        for (idx, cut) in &facet_cuts {
            let (inst, points) = if *idx < pool.len() {
                (&pool[*idx], &hulls[*idx])
            } else {
                (&cards[idx - pool.len()], &card_hulls[idx - pool.len()])
            };
            let rhs_ok = cut.beta == &inst.h()[0] + f0_oracle(points, &cut.alpha);
            let sign_ok = (0..inst.n()).all(|k| !cut.alpha[k].is_negative() || inst.a()[k].is_positive());
            if !rhs_ok || !sign_ok {
                bad.push(format!("instance {} alpha {:?}", idx, cut.alpha));
            }
        }
        gate.report(
            "7",
            "facet necessary conditions",
            bad.is_empty() && !facet_cuts.is_empty(),
            format!("{} certified facets, {} violations{}", facet_cuts.len(), bad.len(), first(bad.first())),
            t0,
        );
    }

    // 8. Strong duality on every optimal LP solve above.
    {
        let t0 = Instant::now();
        let (optimal, failures) = duality_stats();
        gate.report(
            "8",
            "LP strong duality",
            failures == 0 && optimal > 0,
            format!("{} optimal solves, {} duality failures", optimal, failures),
            t0,
        );
    }

    if gate.failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria failed", gate.failed);
        ExitCode::FAILURE
    }
}
