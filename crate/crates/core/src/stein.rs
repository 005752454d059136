//! Discrete gradients of the edge counts and Monte Carlo estimates of the
//! Kolmogorov bound for the standardized count.
//!
//! Coordinates are the `C(n,2)` potential arcs, each present independently
//! with probability `p`. For an arc `e`,
//!
//! ```text
//! D_e K     = √(pq) (K(G+e) − K(G−e))
//! D_e D_f K = pq (K(G+e+f) − K(G−e+f) − K(G+e−f) + K(G−e−f)),  D_e D_e K = 0
//! ```
//!
//! Both differences are evaluated by recounting only pairs of arcs that touch
//! an endpoint of `e` (or `f`); no other pair can change status.
//!
//! # Bound terms
//!
//! With `F = (K − E K)/σ` and `Δ` the unscaled differences,
//!
//! ```text
//! B1 = Σ_{j,k,l} (pq)^3 √E[Δ_j² Δ_k²] √E[Δ_lj² Δ_lk²] / σ^4
//! B2 = Σ_{j,k,l} (pq)^3 E[Δ_lj² Δ_lk²] / σ^4
//! B3 = Σ_k        pq E[Δ_k^4] / σ^4
//! B4 = Σ_{k,l}   (pq)^2 √E[Δ_k^4] √E[Δ_lk^4] / σ^4
//! B5 = Σ_{k,l}   (pq)^2 E[Δ_lk^4] / σ^4
//! bound = (√15/2)√B1 + (√3/2)√B2 + 2√B3 + 2√6 √B4 + 2√3 √B5
//! ```
//!
//! Terms with `l ∈ {j, k}` vanish. The sums are stratified by the isomorphism
//! type of the ordered arc tuple: the law of the summand depends only on how
//! the arcs meet, so each type is estimated once on a representative placed
//! on nodes `0..s` and weighted by its cardinality `C(n, s) · c`, where `c`
//! counts the tuples of that type spanning exactly the nodes of `K_s`.
//! [`triple_classes`] lists 11 types of `(j, k, l)`; [`pair_classes`] has the
//! disjoint and the adjacent type of `(k, l)`; single arcs form one type.
//!
//! `E K` and `σ` come from a pilot ensemble. Standard errors are batch-means
//! errors over ten contiguous batches of replicates.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{sample_gnp, Arc, Graph, SimParams};
use crate::numeric::{compensated_sum, CompensatedSum};
use crate::parallel::Workers;
use crate::rng::{self, Purpose};
use crate::sep::{count_edges_by_subgraphs, count_edges_touching};
use crate::tri::{count_tri_edges_touching, shuffled_order, ArcOrder};
use crate::Model;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradientSample {
    pub e: Arc,
    pub f: Option<Arc>,
    pub value: f64,
    pub unscaled_delta: i64,
    pub bound_rhs: f64,
}

impl GradientSample {
    pub fn within_bound(&self) -> bool {
        self.value.abs() <= self.bound_rhs
    }
}

#[derive(Clone, Copy)]
enum Counter<'a> {
    Polytope,
    Triangulation(&'a ArcOrder),
}

impl<'a> Counter<'a> {
    fn new(g: &Graph, model: Model, order: Option<&'a ArcOrder>) -> Result<Self> {
        match model {
            Model::Polytope => Ok(Counter::Polytope),
            Model::Triangulation => {
                let order = order.ok_or(Error::MissingOrder)?;
                if order.n() != g.n() {
                    return Err(Error::OrderSize {
                        expected: crate::graph::potential_arcs(order.n()),
                        found: crate::graph::potential_arcs(g.n()),
                    });
                }
                Ok(Counter::Triangulation(order))
            }
        }
    }

    fn local(&self, g: &Graph, arcs: &[Arc]) -> i64 {
        let c = match self {
            Counter::Polytope => count_edges_touching(g, arcs),
            Counter::Triangulation(order) => count_tri_edges_touching(g, order, arcs),
        };
        c as i64
    }

    /// `K(G+e) − K(G−e)`; `g` is restored afterwards.
    fn delta(&self, g: &mut Graph, e: Arc) -> i64 {
        let was = g.adjacent(e.u(), e.v());
        g.set_arc(e, true);
        let plus = self.local(g, &[e]);
        g.set_arc(e, false);
        let minus = self.local(g, &[e]);
        g.set_arc(e, was);
        plus - minus
    }

    /// Four-term alternating sum; `g` is restored afterwards.
    fn delta2(&self, g: &mut Graph, e: Arc, f: Arc) -> i64 {
        if e == f {
            return 0;
        }
        let (we, wf) = (g.adjacent(e.u(), e.v()), g.adjacent(f.u(), f.v()));
        let mut total = 0;
        for (se, sf, sign) in [(true, true, 1), (false, true, -1), (true, false, -1), (false, false, 1)] {
            g.set_arc(e, se);
            g.set_arc(f, sf);
            total += sign * self.local(g, &[e, f]);
        }
        g.set_arc(e, we);
        g.set_arc(f, wf);
        total
    }
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::ProbabilityOutOfRange(p))
    }
}

fn check_arc(g: &Graph, a: Arc) -> Result<()> {
    g.has_arc(a).map(|_| ())
}

/// `4E + 2W(2) + 6W(3)` for the polytope and `4E + 2 + 2W(2) + 6W(3)` for the
/// triangulation (two extra origin edges), unscaled. `E` counts the arcs of
/// `G+e`; `W(i)` counts `s`–`t` paths of length `i` for `e = st`.
pub fn first_gradient_bound(g: &Graph, e: Arc, model: Model) -> Result<u64> {
    let plus = g.toggle_arc(e, true)?;
    let arcs = plus.arc_count() as u64;
    let w2 = plus.path_count(e.u(), e.v(), 2)?;
    let w3 = plus.path_count(e.u(), e.v(), 3)?;
    let origin = if model == Model::Triangulation { 2 } else { 0 };
    Ok(4 * arcs + origin + 2 * w2 + 6 * w3)
}

/// Unscaled second-gradient bound: 32 for disjoint arcs, `10W(2) + 8` for
/// arcs `e = u_e v`, `f = u_f v`, where `W(2)` counts `u_e`–`u_f` paths of
/// length 2 in `G − e − f`. Zero for `e = f`.
pub fn second_gradient_bound(g: &Graph, e: Arc, f: Arc) -> Result<u64> {
    check_arc(g, e)?;
    check_arc(g, f)?;
    if e == f {
        return Ok(0);
    }
    Ok(match e.shared_node(f) {
        None => 32,
        Some(v) => {
            let w2 = g.common_neighbor_count(e.other(v), f.other(v), Some(v))? as u64;
            10 * w2 + 8
        }
    })
}

pub fn discrete_gradient(g: &Graph, e: Arc, model: Model, order: Option<&ArcOrder>, p: f64) -> Result<GradientSample> {
    check_p(p)?;
    check_arc(g, e)?;
    let counter = Counter::new(g, model, order)?;
    let delta = counter.delta(&mut g.clone(), e);
    let scale = (p * (1.0 - p)).sqrt();
    Ok(GradientSample {
        e,
        f: None,
        value: scale * delta as f64,
        unscaled_delta: delta,
        bound_rhs: scale * first_gradient_bound(g, e, model)? as f64,
    })
}

pub fn second_gradient(
    g: &Graph,
    e: Arc,
    f: Arc,
    model: Model,
    order: Option<&ArcOrder>,
    p: f64,
) -> Result<GradientSample> {
    check_p(p)?;
    check_arc(g, e)?;
    check_arc(g, f)?;
    let counter = Counter::new(g, model, order)?;
    let delta = counter.delta2(&mut g.clone(), e, f);
    let scale = p * (1.0 - p);
    Ok(GradientSample {
        e,
        f: Some(f),
        value: scale * delta as f64,
        unscaled_delta: delta,
        bound_rhs: scale * second_gradient_bound(g, e, f)? as f64,
    })
}

/// Worst observed `|value| / bound` over sampled instances.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct GradientCheck {
    pub instances: u64,
    pub violations: u64,
    pub max_ratio_first: f64,
    pub max_ratio_adjacent: f64,
    pub max_ratio_disjoint: f64,
}

impl GradientCheck {
    pub fn merge(&mut self, other: &GradientCheck) {
        self.instances += other.instances;
        self.violations += other.violations;
        self.max_ratio_first = self.max_ratio_first.max(other.max_ratio_first);
        self.max_ratio_adjacent = self.max_ratio_adjacent.max(other.max_ratio_adjacent);
        self.max_ratio_disjoint = self.max_ratio_disjoint.max(other.max_ratio_disjoint);
    }
}

/// Samples `instances` triples `(g, e, f)` with `g ~ G(n, p)` and a fresh
/// arc order, alternating between `f` adjacent to and disjoint from `e`, and
/// checks both gradient bounds for every model in `models`.
pub fn check_gradient_bounds(
    n: usize,
    p: f64,
    models: &[Model],
    instances: u64,
    rng: &mut impl Rng,
) -> Result<GradientCheck> {
    check_p(p)?;
    if n < 3 {
        return Err(Error::TooFewNodes { n, min: 3 });
    }
    let arcs: Vec<Arc> = crate::graph::all_arcs(n).collect();
    let mut out = GradientCheck::default();
    for i in 0..instances {
        let g = sample_gnp(n, p, rng);
        let order = shuffled_order(n, rng);
        let e = arcs[rng.random_range(0..arcs.len())];
        let adjacent = i % 2 == 0;
        let candidates: Vec<Arc> =
            arcs.iter().copied().filter(|&f| f != e && e.shared_node(f).is_some() == adjacent).collect();
        let f = candidates[rng.random_range(0..candidates.len())];
        for &model in models {
            let ord = (model == Model::Triangulation).then_some(&order);
            let first = discrete_gradient(&g, e, model, ord, p)?;
            let second = second_gradient(&g, e, f, model, ord, p)?;
            for (is_first, s) in [(true, first), (false, second)] {
                let ratio = if s.bound_rhs > 0.0 { s.value.abs() / s.bound_rhs } else { 0.0 };
                let slot = match (is_first, adjacent) {
                    (true, _) => &mut out.max_ratio_first,
                    (false, true) => &mut out.max_ratio_adjacent,
                    (false, false) => &mut out.max_ratio_disjoint,
                };
                *slot = slot.max(ratio);
                out.violations += u64::from(!s.within_bound());
            }
        }
        out.instances += 1;
    }
    Ok(out)
}

/// Full recount of `K` for `g`.
fn full_count(g: &Graph, counter: Counter<'_>) -> u64 {
    match counter {
        Counter::Polytope => count_edges_by_subgraphs(g),
        Counter::Triangulation(order) => crate::tri::count_tri_edges(g, order).expect("order matches graph").total,
    }
}

/// Isomorphism type of an ordered tuple of arcs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexClass {
    /// Representative on nodes `0..nodes`.
    pub arcs: Vec<Arc>,
    pub nodes: usize,
    /// Tuples of this type spanning exactly the nodes of `K_nodes`.
    pub multiplicity: u64,
}

impl IndexClass {
    /// Number of tuples of this type among the arcs of `K_n`.
    pub fn cardinality(&self, n: usize) -> f64 {
        binomial(n, self.nodes) * self.multiplicity as f64
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64).round()
}

fn canonical(arcs: &[Arc]) -> Vec<(usize, usize)> {
    let k = arcs.len();
    let mut best: Option<Vec<(usize, usize)>> = None;
    for mask in 0u32..1 << k {
        let mut labels: Vec<(usize, usize)> = Vec::new();
        let mut label = |x: usize| match labels.iter().find(|(node, _)| *node == x) {
            Some(&(_, l)) => l,
            None => {
                let l = labels.len();
                labels.push((x, l));
                l
            }
        };
        let seq: Vec<(usize, usize)> = arcs
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let (x, y) = if mask >> i & 1 == 1 { (a.v(), a.u()) } else { (a.u(), a.v()) };
                (label(x), label(y))
            })
            .collect();
        if best.as_ref().is_none_or(|b| seq < *b) {
            best = Some(seq);
        }
    }
    best.expect("at least one orientation")
}

fn span(arcs: &[Arc]) -> usize {
    let mut nodes: Vec<usize> = arcs.iter().flat_map(|a| [a.u(), a.v()]).collect();
    nodes.sort_unstable();
    nodes.dedup();
    nodes.len()
}

fn classes_of(len: usize, keep: impl Fn(&[Arc]) -> bool) -> Vec<IndexClass> {
    let mut found: BTreeMap<Vec<(usize, usize)>, (usize, u64)> = BTreeMap::new();
    for s in 2..=2 * len {
        let arcs: Vec<Arc> = crate::graph::all_arcs(s).collect();
        let mut idx = vec![0usize; len];
        loop {
            let tuple: Vec<Arc> = idx.iter().map(|&i| arcs[i]).collect();
            if span(&tuple) == s && keep(&tuple) {
                found.entry(canonical(&tuple)).or_insert((s, 0)).1 += 1;
            }
            let mut pos = 0;
            while pos < len {
                idx[pos] += 1;
                if idx[pos] < arcs.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == len {
                break;
            }
        }
    }
    found
        .into_iter()
        .map(|(key, (nodes, multiplicity))| IndexClass {
            arcs: key.iter().map(|&(a, b)| Arc::new(a, b).expect("distinct labels")).collect(),
            nodes,
            multiplicity,
        })
        .collect()
}

/// Types of `(j, k, l)` with `l ∉ {j, k}`.
pub fn triple_classes() -> Vec<IndexClass> {
    classes_of(3, |t| t[2] != t[0] && t[2] != t[1])
}

/// Types of `(k, l)` with `k ≠ l`.
pub fn pair_classes() -> Vec<IndexClass> {
    classes_of(2, |t| t[0] != t[1])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteinOptions {
    pub pilot_replicates: u64,
    pub threads: Option<usize>,
}

impl Default for SteinOptions {
    fn default() -> Self {
        SteinOptions { pilot_replicates: 500, threads: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteinTerms {
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub b4: f64,
    pub b5: f64,
    pub kolmogorov_bound: f64,
    pub stderr: [f64; 5],
    pub replicates: u64,
    pub pilot_replicates: u64,
    pub pilot_mean: f64,
    pub pilot_variance: f64,
}

impl SteinTerms {
    pub fn terms(&self) -> [f64; 5] {
        [self.b1, self.b2, self.b3, self.b4, self.b5]
    }
}

pub fn kolmogorov_bound(b: [f64; 5]) -> f64 {
    let c = [15f64.sqrt() / 2.0, 3f64.sqrt() / 2.0, 2.0, 2.0 * 6f64.sqrt(), 2.0 * 3f64.sqrt()];
    compensated_sum(c.iter().zip(b).map(|(c, b)| c * b.sqrt()))
}

/// Per-replicate observations in a fixed layout.
struct Layout {
    triples: Vec<IndexClass>,
    pairs: Vec<IndexClass>,
    first_arcs: Vec<Arc>,
    second_pairs: Vec<(Arc, Arc)>,
}

fn key(a: Arc, b: Arc) -> (Arc, Arc) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl Layout {
    fn new(n: usize) -> Self {
        let triples: Vec<IndexClass> = triple_classes().into_iter().filter(|c| c.nodes <= n).collect();
        let pairs: Vec<IndexClass> = pair_classes().into_iter().filter(|c| c.nodes <= n).collect();
        let mut first_arcs = Vec::new();
        let mut second_pairs = Vec::new();
        if n >= 2 {
            first_arcs.push(Arc::new(0, 1).expect("distinct"));
        }
        for c in &triples {
            let (j, k, l) = (c.arcs[0], c.arcs[1], c.arcs[2]);
            first_arcs.extend([j, k]);
            second_pairs.extend([key(l, j), key(l, k)]);
        }
        for c in &pairs {
            second_pairs.push(key(c.arcs[0], c.arcs[1]));
        }
        first_arcs.sort_unstable();
        first_arcs.dedup();
        second_pairs.sort_unstable();
        second_pairs.dedup();
        Layout { triples, pairs, first_arcs, second_pairs }
    }

    fn width(&self) -> usize {
        1 + 2 * self.triples.len() + self.pairs.len()
    }

    /// `[Δ_01^4, (Δ_j²Δ_k², Δ_lj²Δ_lk²) per triple class, Δ_kl^4 per pair class]`.
    fn observe(&self, g: &mut Graph, counter: Counter<'_>) -> Vec<f64> {
        let d1: HashMap<Arc, f64> = self.first_arcs.iter().map(|&a| (a, counter.delta(g, a) as f64)).collect();
        let d2: HashMap<(Arc, Arc), f64> =
            self.second_pairs.iter().map(|&(a, b)| ((a, b), counter.delta2(g, a, b) as f64)).collect();
        let mut out = Vec::with_capacity(self.width());
        out.push(self.first_arcs.first().map_or(0.0, |a| d1[a].powi(4)));
        for c in &self.triples {
            let (j, k, l) = (c.arcs[0], c.arcs[1], c.arcs[2]);
            out.push(d1[&j].powi(2) * d1[&k].powi(2));
            out.push(d2[&key(l, j)].powi(2) * d2[&key(l, k)].powi(2));
        }
        for c in &self.pairs {
            out.push(d2[&key(c.arcs[0], c.arcs[1])].powi(4));
        }
        out
    }

    /// B terms from per-column means (unscaled by σ).
    fn assemble(&self, n: usize, pq: f64, means: &[f64]) -> [f64; 5] {
        let d4 = means[0];
        let (mut b1, mut b2, mut b4, mut b5) =
            (CompensatedSum::new(), CompensatedSum::new(), CompensatedSum::new(), CompensatedSum::new());
        for (i, c) in self.triples.iter().enumerate() {
            let (a, b) = (means[1 + 2 * i], means[2 + 2 * i]);
            let w = c.cardinality(n) * pq.powi(3);
            b1.add(w * a.sqrt() * b.sqrt());
            b2.add(w * b);
        }
        let offset = 1 + 2 * self.triples.len();
        for (i, c) in self.pairs.iter().enumerate() {
            let m = means[offset + i];
            let w = c.cardinality(n) * pq * pq;
            b4.add(w * d4.sqrt() * m.sqrt());
            b5.add(w * m);
        }
        let b3 = binomial(n, 2) * pq * d4;
        [b1.value(), b2.value(), b3, b4.value(), b5.value()]
    }
}

fn column_means(rows: &[Vec<f64>], width: usize) -> Vec<f64> {
    (0..width).map(|c| compensated_sum(rows.iter().map(|r| r[c])) / rows.len() as f64).collect()
}

fn sample_with_order(n: usize, p: f64, model: Model, rng: &mut impl Rng) -> (Graph, Option<ArcOrder>) {
    let g = sample_gnp(n, p, rng);
    let order = (model == Model::Triangulation).then(|| shuffled_order(n, rng));
    (g, order)
}

/// Pilot estimate of `(E K, Var K)` with the unbiased variance.
fn pilot(params: &SimParams, model: Model, replicates: u64, workers: &Workers) -> (f64, f64) {
    let ks = workers.map(replicates, |r| {
        let mut rng = rng::stream(params.seed(), Purpose::Pilot, r);
        let (g, order) = sample_with_order(params.n(), params.p(), model, &mut rng);
        let counter = match &order {
            Some(o) => Counter::Triangulation(o),
            None => Counter::Polytope,
        };
        full_count(&g, counter) as f64
    });
    let mean = compensated_sum(ks.iter().copied()) / ks.len() as f64;
    let var = compensated_sum(ks.iter().map(|k| (k - mean).powi(2))) / (ks.len() as f64 - 1.0);
    (mean, var)
}

pub fn estimate_stein_terms(params: &SimParams, model: Model, replicates: u64) -> Result<SteinTerms> {
    estimate_stein_terms_with(params, model, replicates, &SteinOptions::default())
}

pub fn estimate_stein_terms_with(
    params: &SimParams,
    model: Model,
    replicates: u64,
    options: &SteinOptions,
) -> Result<SteinTerms> {
    if replicates < 1 {
        return Err(Error::TooFewReplicates { needed: 1, got: replicates as usize });
    }
    if options.pilot_replicates < 2 {
        return Err(Error::TooFewReplicates { needed: 2, got: options.pilot_replicates as usize });
    }
    let workers = Workers::new(options.threads);
    let (n, p) = (params.n(), params.p());
    let pq = p * (1.0 - p);
    let (pilot_mean, pilot_variance) = pilot(params, model, options.pilot_replicates, &workers);

    let layout = Layout::new(n);
    let rows = workers.map(replicates, |r| {
        let mut rng = rng::stream(params.seed(), Purpose::Stein, r);
        let (mut g, order) = sample_with_order(n, p, model, &mut rng);
        let counter = match &order {
            Some(o) => Counter::Triangulation(o),
            None => Counter::Polytope,
        };
        layout.observe(&mut g, counter)
    });

    let width = layout.width();
    let raw = layout.assemble(n, pq, &column_means(&rows, width));
    let sigma4 = pilot_variance * pilot_variance;
    let all_zero = rows.iter().all(|r| r.iter().all(|&x| x == 0.0));
    if !(pilot_variance > 0.0 && pilot_variance.is_finite()) {
        if all_zero {
            return Ok(SteinTerms {
                b1: 0.0,
                b2: 0.0,
                b3: 0.0,
                b4: 0.0,
                b5: 0.0,
                kolmogorov_bound: 0.0,
                stderr: [0.0; 5],
                replicates,
                pilot_replicates: options.pilot_replicates,
                pilot_mean,
                pilot_variance,
            });
        }
        return Err(Error::DegenerateVariance(pilot_variance));
    }
    let b = raw.map(|x| x / sigma4);

    let batches = (replicates as usize).min(10);
    let mut stderr = [0.0; 5];
    if batches >= 2 {
        let size = rows.len() / batches;
        let per_batch: Vec<[f64; 5]> = (0..batches)
            .map(|i| {
                let end = if i + 1 == batches { rows.len() } else { (i + 1) * size };
                let chunk = &rows[i * size..end];
                layout.assemble(n, pq, &column_means(chunk, width)).map(|x| x / sigma4)
            })
            .collect();
        for (t, se) in stderr.iter_mut().enumerate() {
            let mean = compensated_sum(per_batch.iter().map(|v| v[t])) / batches as f64;
            let var = compensated_sum(per_batch.iter().map(|v| (v[t] - mean).powi(2))) / (batches as f64 - 1.0);
            *se = (var / batches as f64).sqrt();
        }
    }

    Ok(SteinTerms {
        b1: b[0],
        b2: b[1],
        b3: b[2],
        b4: b[3],
        b5: b[4],
        kolmogorov_bound: kolmogorov_bound(b),
        stderr,
        replicates,
        pilot_replicates: options.pilot_replicates,
        pilot_mean,
        pilot_variance,
    })
}
