//! End-to-end acceptance checks. Each check returns a [`CheckOutcome`]
//! instead of panicking so that test harnesses and the CLI can report every
//! line.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use serde::Serialize;

use crate::closed_forms::{
    expectation_polytope, expectation_polytope_exact, expectation_triangulation, expectation_triangulation_exact,
    variance_case1_polytope, OriginVariant,
};
use crate::graph::{erdos_renyi, sample_gnp, Graph, SimParams};
use crate::harness::{clt, run_ensemble, sweep, to_csv, to_json, OrderPolicy};
use crate::oracle::{enumerate_edges, exhaustive_expectation, ExpectationModel};
use crate::rng::{self, Purpose};
use crate::sep::count_edges;
use crate::stein::{check_gradient_bounds, estimate_stein_terms, GradientCheck};
use crate::tri::{count_tri_edges, shuffled_order};
use crate::Model;

/// Seed shared by all randomized checks.
pub const SEED: u64 = 20_240_917;

pub const CRITERIA: [u8; 11] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11];

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl std::fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] criterion {:>2} {}: {} ({:.1}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.seconds
        )
    }
}

pub fn title(id: u8) -> &'static str {
    match id {
        1 => "small polytope counts",
        2 => "oracle equivalence",
        3 => "polytope expectation",
        4 => "triangulation expectation",
        5 => "order invariance",
        6 => "variance principal terms",
        7 => "variance dip at 1/sqrt(2)",
        8 => "gradient bounds",
        9 => "Kolmogorov distance trend",
        10 => "Stein bound trend",
        11 => "determinism across thread counts",
        _ => "unknown criterion",
    }
}

/// Runs criterion `id`; unknown ids fail.
pub fn run(id: u8) -> CheckOutcome {
    let start = Instant::now();
    let (passed, detail) = match id {
        1 => small_counts(),
        2 => oracle_equivalence(),
        3 => polytope_expectation(),
        4 => triangulation_expectation(),
        5 => order_invariance(),
        6 => variance_principal(),
        7 => variance_dip(),
        8 => gradient_bounds(),
        9 => ks_trend(),
        10 => stein_trend(),
        11 => determinism(),
        _ => (false, "no such criterion".to_string()),
    };
    CheckOutcome { id, title: title(id), passed, detail, seconds: start.elapsed().as_secs_f64() }
}

pub fn run_all() -> Vec<CheckOutcome> {
    CRITERIA.iter().map(|&id| run(id)).collect()
}

type Check = (bool, String);

fn fail(e: impl std::fmt::Display) -> Check {
    (false, format!("error: {e}"))
}

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn small_counts() -> Check {
    let cases = [
        ("triangle", Graph::cycle(3), 6),
        ("K4", Graph::complete(4), 24),
        ("P4", Graph::path(4), 12),
        ("single arc", Graph::from_arcs(2, [(0, 1)]), 0),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, g, expected) in cases {
        let g = match g {
            Ok(g) => g,
            Err(e) => return fail(e),
        };
        let combinatorial = count_edges(&g).total;
        let oracle = match enumerate_edges(&g) {
            Ok(r) => r,
            Err(e) => return fail(e),
        };
        let geometric = oracle.edge_pairs.len() as u64;
        ok &= combinatorial == expected && geometric == expected && oracle.combinatorial_match;
        parts.push(format!("{name} {combinatorial}/{geometric}"));
    }
    (ok, parts.join(", "))
}

fn oracle_equivalence() -> Check {
    let mut checked = 0;
    let mut mismatches = 0;
    for mask in 0..64u64 {
        let g = Graph::from_mask(4, mask).expect("4 nodes");
        if g.arc_count() == 0 {
            checked += 1;
            continue;
        }
        match enumerate_edges(&g) {
            Ok(r) => mismatches += usize::from(!r.combinatorial_match),
            Err(e) => return fail(e),
        }
        checked += 1;
    }
    let params = SimParams::new(5, 0.5, SEED).expect("valid parameters");
    let mut random = 0;
    let mut r = 0;
    while random < 200 {
        let g = erdos_renyi(&params, r);
        r += 1;
        if g.arc_count() == 0 {
            continue;
        }
        match enumerate_edges(&g) {
            Ok(res) => mismatches += usize::from(!res.combinatorial_match),
            Err(e) => return fail(e),
        }
        random += 1;
    }
    (
        mismatches == 0,
        format!("{checked}/64 graphs on 4 nodes and {random} random graphs on 5 nodes, {mismatches} mismatches"),
    )
}

fn mean_within(model: Model, reference: f64) -> Result<(bool, String), crate::Error> {
    let params = SimParams::new(30, 0.1, SEED)?;
    let s = run_ensemble(&params, model, 2000, OrderPolicy::FreshPerReplicate)?;
    let z = (s.sample_mean - reference) / s.standard_error_mean;
    Ok((z.abs() <= 4.0, format!("mean {:.3} vs {:.3} ({z:+.2} SE)", s.sample_mean, reference)))
}

fn polytope_expectation() -> Check {
    let reference = match expectation_polytope(30, 0.1) {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    let (mc, detail) = match mean_within(Model::Polytope, reference) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let mut exact = true;
    for n in 2..=4 {
        for p in [ratio(1, 4), ratio(1, 2), ratio(3, 4)] {
            let closed = expectation_polytope_exact(n, &p).expect("valid p");
            for model in [ExpectationModel::PolytopeCombinatorial, ExpectationModel::PolytopeOracle] {
                match exhaustive_expectation(n, &p, model) {
                    Ok(v) => exact &= v == closed,
                    Err(e) => return fail(e),
                }
            }
        }
    }
    (mc && exact, format!("{detail}; exhaustive = closed form at n in 2..=4: {exact}"))
}

fn triangulation_expectation() -> Check {
    let reference = match expectation_triangulation(30, 0.1, OriginVariant::ProofP) {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    let (mc, detail) = match mean_within(Model::Triangulation, reference) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let half = ratio(1, 2);
    let two = match exhaustive_expectation(2, &half, ExpectationModel::TriangulationCombinatorial) {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    let proof = expectation_triangulation_exact(2, &half, OriginVariant::ProofP).expect("valid p");
    let theorem = expectation_triangulation_exact(2, &half, OriginVariant::TheoremP2).expect("valid p");
    let discriminates = two == ratio(1, 1) && proof == two && theorem != two;
    (mc && discriminates, format!("{detail}; n=2 exhaustive {two} (proof_p {proof}, theorem_p2 {theorem})"))
}

fn order_invariance() -> Check {
    let mut rng = rng::stream(SEED, Purpose::Sampling, 5);
    let mut differing = 0;
    for _ in 0..100 {
        let n = rng.random_range(3..=12);
        let p = rng.random_range(0.1..0.9);
        let g = sample_gnp(n, p, &mut rng);
        let totals: Vec<u64> =
            (0..5).map(|_| count_tri_edges(&g, &shuffled_order(n, &mut rng)).expect("sized order").total).collect();
        differing += usize::from(totals.iter().any(|&t| t != totals[0]));
    }
    (differing == 0, format!("100 graphs x 5 orders, {differing} graphs with differing totals"))
}

fn variance_principal() -> Check {
    let run = || -> crate::Result<Check> {
        let params = SimParams::new(60, 0.3, SEED)?;
        let s = run_ensemble(&params, Model::Polytope, 5000, OrderPolicy::Fixed)?;
        let reference = variance_case1_polytope(60, 0.3)?;
        let r = s.sample_variance / reference;
        Ok((
            (0.5..=2.0).contains(&r),
            format!("sample variance {:.4e} / principal {:.4e} = {r:.3}", s.sample_variance, reference),
        ))
    };
    run().unwrap_or_else(fail)
}

// The middle grid point is the four-digit value, not the exact constant.
#[allow(clippy::approx_constant)]
fn variance_dip() -> Check {
    let n = 60usize;
    let grid = [0.55, 0.7071, 0.85];
    let rows = match sweep(n, &grid, Model::Polytope, 5000, OrderPolicy::Fixed, SEED, None) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let normalized: Vec<f64> =
        rows.iter().map(|r| r.variance / ((n as f64).powi(6) * r.p.powi(3) * (1.0 - r.p))).collect();
    let (lo, mid, hi) = (normalized[0], normalized[1], normalized[2]);
    let ok = mid < lo && mid < hi && mid <= 0.5 * lo && mid <= 0.5 * hi;
    (ok, format!("normalized variance {lo:.4e} / {mid:.4e} / {hi:.4e} at p = 0.55 / 0.7071 / 0.85"))
}

fn gradient_bounds() -> Check {
    let per_cell = 10_000 / 9 + 1;
    let mut total = GradientCheck::default();
    for (ni, &n) in [6usize, 12, 24].iter().enumerate() {
        for (pi, &p) in [0.2, 0.5, 0.8].iter().enumerate() {
            let mut rng = rng::stream(SEED, Purpose::Sampling, 100 + (3 * ni + pi) as u64);
            match check_gradient_bounds(n, p, &[Model::Polytope, Model::Triangulation], per_cell, &mut rng) {
                Ok(c) => total.merge(&c),
                Err(e) => return fail(e),
            }
        }
    }
    (
        total.violations == 0,
        format!(
            "{} (g,e,f) instances, both models, {} violations; max |value|/bound: first {:.3}, adjacent {:.3}, disjoint {:.3}",
            total.instances, total.violations, total.max_ratio_first, total.max_ratio_adjacent, total.max_ratio_disjoint
        ),
    )
}

fn ks_trend() -> Check {
    let ns = [15usize, 30, 60];
    let mut ok = true;
    let mut parts = Vec::new();
    for model in [Model::Polytope, Model::Triangulation] {
        let rows = match clt(&ns, 0.3, model, 5000, OrderPolicy::FreshPerReplicate, 0, SEED, None) {
            Ok(r) => r,
            Err(e) => return fail(e),
        };
        let d: Vec<f64> = rows.iter().map(|r| r.ks_distance.unwrap_or(f64::NAN)).collect();
        ok &= d[0] > d[1] && d[1] > d[2] && d[2] < 0.05;
        parts.push(format!("{model} {:.4} > {:.4} > {:.4}", d[0], d[1], d[2]));
    }
    (ok, parts.join("; "))
}

fn stein_trend() -> Check {
    let mut bounds = Vec::new();
    for n in [15usize, 30, 60] {
        let params = SimParams::new(n, 0.3, SEED).expect("valid parameters");
        match estimate_stein_terms(&params, Model::Polytope, 2000) {
            Ok(t) => bounds.push(t.kolmogorov_bound),
            Err(e) => return fail(e),
        }
    }
    let ok = bounds[0] > bounds[1] && bounds[1] > bounds[2];
    (ok, format!("bound {:.4} > {:.4} > {:.4} at n = 15, 30, 60", bounds[0], bounds[1], bounds[2]))
}

fn determinism() -> Check {
    let config = serde_json::json!({ "check": "determinism" });
    let outputs = |threads: usize| -> crate::Result<Vec<String>> {
        let t = Some(threads);
        let simulate = sweep(12, &[0.4], Model::Triangulation, 300, OrderPolicy::FreshPerReplicate, SEED, t)?;
        let grid = sweep(10, &[0.2, 0.5, 0.8], Model::Polytope, 300, OrderPolicy::Fixed, SEED, t)?;
        let clt_rows = clt(&[6, 9], 0.5, Model::Polytope, 200, OrderPolicy::Fixed, 30, SEED, t)?;
        Ok(vec![
            to_csv(&simulate, &config),
            to_json(&simulate, &config),
            to_csv(&grid, &config),
            to_csv(&clt_rows, &config),
            to_json(&clt_rows, &config),
        ])
    };
    match (outputs(1), outputs(2), outputs(4)) {
        (Ok(a), Ok(b), Ok(c)) => {
            let same = a == b && b == c;
            (same, format!("simulate/sweep/clt outputs at 1, 2 and 4 threads identical: {same}"))
        }
        (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => fail(e),
    }
}
