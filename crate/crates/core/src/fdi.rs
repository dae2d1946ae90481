//! Explicit inequality families: strengthened star inequalities, the
//! cardinality-case `(T, Π_L)` inequalities and the general facet family
//! built from a knapsack prefix `m`, a chain `T` and an ordered set `S`.
//!
//! Indexing is 0-based. A prefix count `m` fixes scenarios `0..m`; `h[m]` is
//! the first scenario after the prefix. For the general family:
//!
//! * `T ⊆ {0, …, m-1}` strictly increasing, closed off by `m`;
//! * `S = (q_1, …, q_s)` with `s = p - s_m`, every `q_j ≥ m + 1`,
//!   `q_j ≥ k(j)`, `a = 1` on `S` and `a ≤ s_m` off `S`;
//! * `a_j > 0` for `m ≤ j < ν`;
//! * `k(j) = max { k : j ≥ s_k - s_m }` for positions `j = 1..s`.
//!
//! The coefficients are `α_{q_1} = h[k(1)] - h[m]` and
//! `α_{q_j} = min(α_{q_{j-1}}, h[k(j)] - h[m] - Σ(α_{q_i} : i < j, q_i ≥ k(j)))`,
//! and the cut reads
//! `y + Σ_T (h[t_j] - h[t_{j+1}]) z_{t_j} + Σ_S α_i z_i ≥ h[t_1] + Σ_S α_i`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::cut::{MixingCut, Provenance};
use crate::error::{Error, Result};
use crate::hull::HullPoint;
use crate::instance::MixKnapInstance;
use crate::linalg::affine_rank;
use crate::rational::Rational;

fn check_chain(t: &[usize], bound: usize, what: &str) -> Result<()> {
    if t.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadT(format!("T = {:?} is not strictly increasing", t)));
    }
    if let Some(&last) = t.last() {
        if last >= bound {
            return Err(Error::BadT(format!("T = {:?} must lie below {} = {}", t, what, bound)));
        }
    }
    Ok(())
}

/// Coefficients and right-hand side of the chain part, closed off at `end`.
fn chain_terms(h: &[Rational], t: &[usize], end: usize, alpha: &mut [Rational]) -> Rational {
    for (i, &tj) in t.iter().enumerate() {
        let next = t.get(i + 1).copied().unwrap_or(end);
        alpha[tj] = &h[tj] - &h[next];
    }
    h[t.first().copied().unwrap_or(end)].clone()
}

/// Strengthened star inequality for the chain `T ⊆ {0, …, ν-1}`:
/// `y + Σ_j (h[t_j] - h[t_{j+1}]) z_{t_j} ≥ h[t_1]` with `h[t_{a+1}] = h[ν]`.
/// Facet-defining exactly when `h[t_1] = h_max`.
pub fn star_cut(instance: &MixKnapInstance, t: &[usize]) -> Result<MixingCut> {
    let nu = instance.nu();
    check_chain(t, nu, "nu")?;
    let mut alpha = vec![Rational::zero(); instance.n()];
    let beta = chain_terms(instance.h(), t, nu, &mut alpha);
    let facet = beta == *instance.h_max();
    let mut cut = MixingCut::new(alpha, beta, Provenance::Star);
    cut.facet_claim = Some(facet);
    Ok(cut)
}

/// `k(j)` for the positions `j = 1..=p - s_m` of a prefix `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KIndexMap {
    pub m: usize,
    /// `k_of[i]` is `k(i + 1)`. Nondecreasing, each at least `m`.
    pub k_of: Vec<usize>,
}

impl KIndexMap {
    /// `p - s_m`.
    pub fn len(&self) -> usize {
        self.k_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k_of.is_empty()
    }

    /// `k(j)` for the 1-based position `j`.
    pub fn k(&self, j: usize) -> usize {
        self.k_of[j - 1]
    }

    pub fn strictly_increasing(&self) -> bool {
        self.k_of.windows(2).all(|w| w[0] < w[1])
    }
}

/// `p - s_m` as a count; errors when it is not a nonnegative integer.
pub fn room(instance: &MixKnapInstance, m: usize) -> Result<usize> {
    if m > instance.nu() {
        return Err(Error::SpecViolation(format!("m = {} exceeds nu = {}", m, instance.nu())));
    }
    let r = instance.residual(m);
    if !r.is_integer() {
        return Err(Error::NotIntegral { m, value: format!("{}", r) });
    }
    r.to_i64()
        .and_then(|v| usize::try_from(v).ok())
        .ok_or_else(|| Error::SpecViolation(format!("p - s_{} = {} is out of range", m, r)))
}

pub fn k_index_map(instance: &MixKnapInstance, m: usize) -> Result<KIndexMap> {
    let len = room(instance, m)?;
    let s = instance.s();
    let n = instance.n();
    let mut k_of = Vec::with_capacity(len);
    let mut k = m;
    for j in 1..=len {
        let limit = &s[m] + Rational::from(j);
        while k < n && s[k + 1] <= limit {
            k += 1;
        }
        k_of.push(k);
    }
    Ok(KIndexMap { m, k_of })
}

/// First scenario `j` with `m ≤ j < ν` and `a_j = 0`. The family needs none:
/// such a `j` makes `s_{j+1} = s_j`, and the validity constraint for the
/// prefix `j + 1` then reads `h[j+1] ≥ h[j]`.
pub fn zero_weight_gap(instance: &MixKnapInstance, m: usize) -> Option<usize> {
    (m..instance.nu()).find(|&j| instance.a()[j].is_zero())
}

/// A member of the general facet family.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FdiSpec {
    pub m: usize,
    pub t: Vec<usize>,
    /// `S` in the order `q_1, …, q_s`.
    pub q: Vec<usize>,
    /// Applied to `(a, p)` before any check.
    pub scale: Rational,
}

impl FdiSpec {
    pub fn new(m: usize, t: Vec<usize>, q: Vec<usize>) -> Self {
        FdiSpec { m, t, q, scale: Rational::one() }
    }

    pub fn with_scale(mut self, scale: Rational) -> Self {
        self.scale = scale;
        self
    }
}

fn scaled(instance: &MixKnapInstance, scale: &Rational) -> Result<MixKnapInstance> {
    if !scale.is_positive() {
        return Err(Error::SpecViolation(format!("scale d = {} must be positive", scale)));
    }
    if scale.is_one() {
        Ok(instance.clone())
    } else {
        instance.rescale_knapsack(scale)
    }
}

/// The recursion for `α_{q_1}, …, α_{q_s}`.
pub fn fdi_coefficients(h: &[Rational], m: usize, kmap: &KIndexMap, q: &[usize]) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::with_capacity(q.len());
    for j in 0..q.len() {
        let kj = kmap.k_of[j];
        let earlier: Rational = (0..j).filter(|&i| q[i] >= kj).map(|i| &out[i]).sum();
        let candidate = &h[kj] - &h[m] - earlier;
        let value = match out.last() {
            Some(prev) if *prev < candidate => prev.clone(),
            _ => candidate,
        };
        out.push(value);
    }
    out
}

/// Checks every hypothesis of the family on the (already rescaled) instance.
fn validate(inst: &MixKnapInstance, spec: &FdiSpec) -> Result<KIndexMap> {
    let bad = |msg: alloc::string::String| Err(Error::SpecViolation(msg));
    let n = inst.n();
    let kmap = match k_index_map(inst, spec.m) {
        Ok(k) => k,
        Err(Error::NotIntegral { m, value }) => {
            return bad(format!("p - s_m = {} is not an integer for m = {}", value, m))
        }
        Err(e) => return Err(e),
    };
    if let Some(j) = zero_weight_gap(inst, spec.m) {
        return bad(format!("a_{} = 0 lies in the window m = {} .. nu = {}", j, spec.m, inst.nu()));
    }
    if let Err(Error::BadT(msg)) = check_chain(&spec.t, spec.m, "m") {
        return bad(msg);
    }
    if spec.q.len() != kmap.len() {
        return bad(format!("|S| = {} but p - s_m = {}", spec.q.len(), kmap.len()));
    }
    let mut in_s = vec![false; n];
    for (j, &qj) in spec.q.iter().enumerate() {
        if qj >= n {
            return bad(format!("q_{} = {} is not a scenario", j + 1, qj));
        }
        if in_s[qj] {
            return bad(format!("q_{} = {} repeats", j + 1, qj));
        }
        in_s[qj] = true;
        if qj < spec.m + 1 {
            return bad(format!("q_{} = {} lies below m + 1 = {}", j + 1, qj, spec.m + 1));
        }
        if qj < kmap.k_of[j] {
            return bad(format!("q_{} = {} lies below k({}) = {}", j + 1, qj, j + 1, kmap.k_of[j]));
        }
        if !inst.a()[qj].is_one() {
            return bad(format!("a_{} = {} on S is not 1", qj, inst.a()[qj]));
        }
    }
    let s_m = &inst.s()[spec.m];
    if let Some(j) = (0..n).find(|&j| !in_s[j] && inst.a()[j] > *s_m) {
        return bad(format!("a_{} = {} off S exceeds s_m = {}", j, inst.a()[j], s_m));
    }
    Ok(kmap)
}

/// The cut of a family member. Facet-defining exactly when `h[t_1] = h_max`
/// (with `t_1 = m` for empty `T`).
pub fn fdi_cut(instance: &MixKnapInstance, spec: &FdiSpec) -> Result<MixingCut> {
    let inst = scaled(instance, &spec.scale)?;
    let kmap = validate(&inst, spec)?;
    let h = inst.h();
    let mut alpha = vec![Rational::zero(); inst.n()];
    let head = chain_terms(h, &spec.t, spec.m, &mut alpha);
    let coeffs = fdi_coefficients(h, spec.m, &kmap, &spec.q);
    for (&qj, c) in spec.q.iter().zip(&coeffs) {
        alpha[qj] = c.clone();
    }
    let beta = &head + coeffs.iter().sum::<Rational>();
    let mut cut = MixingCut::new(alpha, beta, Provenance::Fdi);
    cut.facet_claim = Some(head == *instance.h_max());
    Ok(cut)
}

/// `(T, Π_L)` inequality on a cardinality instance: `1 ≤ m ≤ p`,
/// `T ⊆ {0, …, m-1}`, `ℓ_j ≥ m + j` for the 1-based position `j`, and
/// `Δ_1 = h[m] - h[m+1]`,
/// `Δ_j = max(Δ_{j-1}, h[m] - h[m+j] - Σ(Δ_i : i < j, ℓ_i ≥ m + j))`.
/// The cut `y + Σ_T … + Σ_j Δ_j (1 - z_{ℓ_j}) ≥ h[t_1]` is returned in
/// normalized form.
pub fn tpl_cut(instance: &MixKnapInstance, t: &[usize], m: usize, l: &[usize]) -> Result<MixingCut> {
    let bad = |msg: alloc::string::String| Err(Error::SpecViolation(msg));
    if !instance.is_cardinality() {
        return bad("the (T, Pi_L) family needs unit weights".into());
    }
    let n = instance.n();
    let p = instance.nu();
    if m == 0 || m > p {
        return bad(format!("m = {} must lie in 1..={}", m, p));
    }
    check_chain(t, m, "m")?;
    if l.len() != p - m {
        return bad(format!("|L| = {} but p - m = {}", l.len(), p - m));
    }
    let mut seen = vec![false; n];
    for (j, &lj) in l.iter().enumerate() {
        if lj >= n || seen[lj] || lj < m + j + 1 {
            return bad(format!("l_{} = {} is out of place", j + 1, lj));
        }
        seen[lj] = true;
    }
    let h = instance.h();
    let mut delta: Vec<Rational> = Vec::with_capacity(l.len());
    for j in 1..=l.len() {
        let earlier: Rational = (0..j - 1).filter(|&i| l[i] >= m + j).map(|i| &delta[i]).sum();
        let candidate = &h[m] - &h[m + j] - earlier;
        let value = match delta.last() {
            Some(prev) if *prev > candidate => prev.clone(),
            _ => candidate,
        };
        delta.push(value);
    }
    let mut alpha = vec![Rational::zero(); n];
    let head = chain_terms(h, t, m, &mut alpha);
    for (&lj, d) in l.iter().zip(&delta) {
        alpha[lj] = -d;
    }
    let beta = &head - delta.iter().sum::<Rational>();
    let mut cut = MixingCut::new(alpha, beta, Provenance::Tpl);
    cut.facet_claim = Some(head == *instance.h_max());
    Ok(cut)
}

/// The `n + 1` tight points behind the facet claim: one per chain element,
/// one per member of `S`, one per remaining scenario and a base point.
pub fn fdi_tight_points(instance: &MixKnapInstance, spec: &FdiSpec) -> Result<Vec<HullPoint>> {
    let inst = scaled(instance, &spec.scale)?;
    let kmap = validate(&inst, spec)?;
    let h = inst.h();
    let n = inst.n();
    let m = spec.m;
    let head = spec.t.first().copied().unwrap_or(m);
    if h[head] != h[0] {
        return Err(Error::SpecViolation(format!(
            "h[t_1] = {} differs from h_max = {}; the cut is not facet-defining",
            h[head], h[0]
        )));
    }
    let mut in_s = vec![false; n];
    for &qj in &spec.q {
        in_s[qj] = true;
    }
    let coeffs = fdi_coefficients(h, m, &kmap, &spec.q);
    let mut points = Vec::with_capacity(n + 1);

    for &tj in &spec.t {
        let z = (0..n).map(|i| i < tj || in_s[i]).collect();
        points.push(HullPoint { y: h[tj].clone(), z });
    }
    for j in 0..spec.q.len() {
        // Largest position ℓ ≤ j whose recursion term attains α_{q_j}.
        let attains = |l: usize| {
            let kl = kmap.k_of[l];
            let earlier: Rational = (0..l).filter(|&i| spec.q[i] >= kl).map(|i| &coeffs[i]).sum();
            &h[kl] - &h[m] - earlier == coeffs[j]
        };
        let l = (0..=j).rev().find(|&l| attains(l)).ok_or_else(|| {
            Error::SpecViolation(format!("no position attains the coefficient of q_{}", j + 1))
        })?;
        let kl = kmap.k_of[l];
        let mut z = vec![true; n];
        for i in 0..l {
            if spec.q[i] >= kl {
                z[spec.q[i]] = false;
            }
        }
        z[spec.q[j]] = false;
        for t in kl..n {
            if !in_s[t] {
                z[t] = false;
            }
        }
        points.push(HullPoint { y: h[kl].clone(), z });
    }
    for k in 0..n {
        if in_s[k] || spec.t.contains(&k) {
            continue;
        }
        // Below t_1 every h equals h_max: drop k from the chain point instead.
        let z = if k < head {
            (0..n).map(|i| (i < head && i != k) || in_s[i]).collect()
        } else {
            (0..n).map(|i| in_s[i] || i == k).collect()
        };
        points.push(HullPoint { y: h[0].clone(), z });
    }
    let z0 = (0..n).map(|i| i < m || in_s[i]).collect();
    points.push(HullPoint { y: h[m].clone(), z: z0 });
    Ok(points)
}

/// Independent check of a tight-point family against a cut.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightPointReport {
    pub count: usize,
    /// Every point lies in `Q`.
    pub feasible: bool,
    /// Every point satisfies the cut at equality.
    pub tight: bool,
    pub affine_rank: Option<usize>,
}

impl TightPointReport {
    /// Feasible, tight and affinely spanning `R^{n+1}`.
    pub fn certifies_facet(&self, n: usize) -> bool {
        self.feasible && self.tight && self.affine_rank == Some(n)
    }
}

pub fn verify_tight_points(
    instance: &MixKnapInstance,
    cut: &MixingCut,
    points: &[HullPoint],
) -> TightPointReport {
    let feasible = points.iter().all(|pt| pt.is_in_q(instance));
    let tight = points.iter().all(|pt| cut.lhs_binary(&pt.y, &pt.z) == cut.beta);
    let coords: Vec<Vec<Rational>> = points.iter().map(HullPoint::coordinates).collect();
    TightPointReport { count: points.len(), feasible, tight, affine_rank: affine_rank(&coords) }
}

/// Default rescale factors: `1` and `1 / a_j` for each distinct positive weight.
pub fn rescale_candidates(instance: &MixKnapInstance) -> Vec<Rational> {
    let mut out = vec![Rational::one()];
    for a in instance.a() {
        if a.is_positive() {
            let d = a.recip();
            if !out.contains(&d) {
                out.push(d);
            }
        }
    }
    out
}

/// Budget and scope of [`enumerate_specs`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecEnumeration {
    /// Maximum number of specs returned.
    pub limit: usize,
    /// Only chains with `h[t_1] = h_max`.
    pub facets_only: bool,
    /// Rescale factors to try; empty means [`rescale_candidates`].
    pub scales: Vec<Rational>,
    /// Cap on `S` orderings kept per `(d, m)`.
    pub max_orderings: usize,
}

impl Default for SpecEnumeration {
    fn default() -> Self {
        SpecEnumeration { limit: 200, facets_only: false, scales: Vec::new(), max_orderings: 5000 }
    }
}

struct Group {
    scale: Rational,
    m: usize,
    orderings: Vec<Vec<usize>>,
    chains: Vec<Vec<usize>>,
}

impl Group {
    fn size(&self) -> usize {
        self.orderings.len() * self.chains.len()
    }
}

fn orderings(inst: &MixKnapInstance, kmap: &KIndexMap, cap: usize) -> Vec<Vec<usize>> {
    fn extend(
        inst: &MixKnapInstance,
        kmap: &KIndexMap,
        cap: usize,
        current: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        if out.len() >= cap {
            return;
        }
        let j = current.len();
        if j == kmap.len() {
            out.push(current.clone());
            return;
        }
        let lo = kmap.k_of[j].max(kmap.m + 1);
        for qj in lo..inst.n() {
            if used[qj] || !inst.a()[qj].is_one() {
                continue;
            }
            used[qj] = true;
            current.push(qj);
            extend(inst, kmap, cap, current, used, out);
            current.pop();
            used[qj] = false;
        }
    }
    let mut out = Vec::new();
    extend(inst, kmap, cap, &mut Vec::new(), &mut vec![false; inst.n()], &mut out);
    // Off-S weights must not exceed s_m.
    let s_m = &inst.s()[kmap.m];
    out.retain(|q| (0..inst.n()).all(|j| q.contains(&j) || inst.a()[j] <= *s_m));
    out
}

fn chains(inst: &MixKnapInstance, m: usize, facets_only: bool) -> Vec<Vec<usize>> {
    let h = inst.h();
    (0u32..1 << m)
        .map(|mask| (0..m).filter(|&i| mask >> i & 1 == 1).collect::<Vec<usize>>())
        .filter(|t| !facets_only || h[t.first().copied().unwrap_or(m)] == h[0])
        .collect()
}

/// Members of the family over the requested rescale factors and every
/// eligible `m`. When there are more than `limit`, the budget is shared
/// evenly across `(d, m)` groups and each group is sampled at a fixed
/// stride, so the output is deterministic.
pub fn enumerate_specs(instance: &MixKnapInstance, opts: &SpecEnumeration) -> Result<Vec<FdiSpec>> {
    const MAX_PREFIX: usize = 16;
    let scales = if opts.scales.is_empty() { rescale_candidates(instance) } else { opts.scales.clone() };
    let mut groups = Vec::new();
    for scale in scales {
        let inst = scaled(instance, &scale)?;
        for m in 0..=inst.nu().min(MAX_PREFIX) {
            let Ok(kmap) = k_index_map(&inst, m) else { continue };
            if zero_weight_gap(&inst, m).is_some() {
                continue;
            }
            let orderings = orderings(&inst, &kmap, opts.max_orderings);
            if orderings.is_empty() {
                continue;
            }
            let chains = chains(&inst, m, opts.facets_only);
            if chains.is_empty() {
                continue;
            }
            groups.push(Group { scale: scale.clone(), m, orderings, chains });
        }
    }
    // Water-filling: smaller groups are taken whole, the rest share evenly.
    let mut order: Vec<usize> = (0..groups.len()).collect();
    order.sort_by_key(|&g| (groups[g].size(), g));
    let mut quota = vec![0usize; groups.len()];
    let mut remaining = opts.limit;
    for (done, &g) in order.iter().enumerate() {
        let share = remaining / (groups.len() - done);
        quota[g] = groups[g].size().min(share);
        remaining -= quota[g];
    }
    let mut specs = Vec::new();
    for (g, group) in groups.iter().enumerate() {
        let size = group.size();
        for i in 0..quota[g] {
            let idx = i * size / quota[g];
            let ordering = &group.orderings[idx / group.chains.len()];
            let chain = &group.chains[idx % group.chains.len()];
            specs.push(FdiSpec {
                m: group.m,
                t: chain.clone(),
                q: ordering.clone(),
                scale: group.scale.clone(),
            });
        }
    }
    Ok(specs)
}
