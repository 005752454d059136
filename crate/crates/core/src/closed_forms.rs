//! Closed-form moments of the edge counts.
//!
//! Every formula is written once over a generic field and evaluated either in
//! `f64` (terms combined by compensated summation) or exactly over
//! [`BigRational`]. `(n)_k` is the falling factorial `n (n-1) ... (n-k+1)`.
//!
//! The polytope variance reference keeps only the covariances between two
//! pairs of disjoint arcs. Pairs of arcs sharing a node contribute terms that
//! are of lower order and are omitted.

use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::compensated_sum;

/// Which origin term to use in the triangulation expectation. Counting two
/// origin edges per present arc gives `2 C(n,2) p`; the `p^2` variant is the
/// closed form as usually quoted. They agree only at `p = 1`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OriginVariant {
    #[default]
    ProofP,
    TheoremP2,
}

impl std::str::FromStr for OriginVariant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "proof_p" => Ok(OriginVariant::ProofP),
            "theorem_p2" => Ok(OriginVariant::TheoremP2),
            other => Err(format!("unknown origin variant `{other}` (expected proof_p|theorem_p2)")),
        }
    }
}

trait Field: Clone + Num + FromPrimitive {}
impl<T: Clone + Num + FromPrimitive> Field for T {}

fn from_u64<T: Field>(x: u64) -> T {
    T::from_u64(x).expect("representable")
}

fn pow<T: Field>(x: &T, k: usize) -> T {
    num_traits::pow(x.clone(), k)
}

fn falling<T: Field>(n: u64, k: u64) -> T {
    if n < k {
        return T::zero();
    }
    (0..k).fold(T::one(), |acc, i| acc * from_u64(n - i))
}

fn binomial<T: Field>(n: u64, k: u64) -> T {
    let fact: T = (1..=k).fold(T::one(), |acc, i| acc * from_u64(i));
    falling::<T>(n, k) / fact
}

fn polytope_expectation_terms<T: Field>(n: u64, p: &T) -> Vec<T> {
    let one = T::one();
    let p2 = p.clone() * p.clone();
    let one_minus_p2 = one.clone() - p2.clone();
    let disjoint = from_u64::<T>(12) * binomial::<T>(n, 4) * p2.clone() * one_minus_p2.clone();
    let adjacent = if n >= 3 {
        let tail = (one.clone() - p.clone()) * pow(&one_minus_p2, (n - 3) as usize);
        from_u64::<T>(6) * binomial::<T>(n, 3) * p2 * (one + tail)
    } else {
        T::zero()
    };
    vec![disjoint, adjacent]
}

fn triangulation_expectation_terms<T: Field>(n: u64, p: &T, variant: OriginVariant) -> Vec<T> {
    let one = T::one();
    let two = from_u64::<T>(2);
    let six = from_u64::<T>(6);
    let p2 = p.clone() * p.clone();
    let pairs = binomial::<T>(n, 2);
    let disjoint = six.clone() * binomial::<T>(n, 4) * p2.clone() * (two.clone() - p2.clone());
    let same = six * binomial::<T>(n, 3) * p2.clone();
    let opposite = if n >= 2 {
        two.clone()
            * pairs.clone()
            * (one.clone() - p.clone())
            * (one.clone() - pow(&(one - p2.clone()), (n - 2) as usize))
    } else {
        T::zero()
    };
    let origin = two
        * pairs
        * match variant {
            OriginVariant::ProofP => p.clone(),
            OriginVariant::TheoremP2 => p2,
        };
    vec![disjoint, same, opposite, origin]
}

fn variance_case1_terms<T: Field>(n: u64, p: &T) -> Vec<T> {
    let one = T::one();
    let two = from_u64::<T>(2);
    let p2 = p.clone() * p.clone();
    let p3 = p2.clone() * p.clone();
    let p4 = p2.clone() * p2.clone();
    let q = one.clone() - p.clone();
    let one_minus_p2 = one.clone() - p2.clone();
    let crit = one.clone() - two.clone() * p2.clone();
    let crit2 = crit.clone() * crit;

    let six = two.clone() * falling::<T>(n, 6) * p3.clone() * q.clone() * crit2.clone();
    let five = from_u64::<T>(8) * falling::<T>(n, 5) * p3.clone() * q.clone() * (p3 * q + crit2);
    let cycle =
        T::zero() - falling::<T>(n, 4) * p4 * one_minus_p2.clone() * (from_u64::<T>(3) - from_u64::<T>(4) * p2.clone());
    let identical = falling::<T>(n, 4)
        * p2.clone()
        * one_minus_p2.clone()
        * (one - p2 * one_minus_p2.clone() + one_minus_p2.clone() * one_minus_p2);
    vec![six, five, cycle, identical]
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::ProbabilityOutOfRange(p))
    }
}

fn check_rational(p: &BigRational) -> Result<()> {
    if *p < BigRational::zero() || *p > BigRational::one() {
        let approx = num_traits::ToPrimitive::to_f64(p).unwrap_or(f64::NAN);
        return Err(Error::ProbabilityOutOfRange(approx));
    }
    Ok(())
}

/// `12 C(n,4) p^2 (1-p^2) + 6 C(n,3) p^2 (1 + (1-p)(1-p^2)^(n-3))`.
pub fn expectation_polytope(n: usize, p: f64) -> Result<f64> {
    check_probability(p)?;
    Ok(compensated_sum(polytope_expectation_terms(n as u64, &p)))
}

pub fn expectation_polytope_exact(n: usize, p: &BigRational) -> Result<BigRational> {
    check_rational(p)?;
    Ok(polytope_expectation_terms(n as u64, p).into_iter().fold(BigRational::zero(), |a, b| a + b))
}

/// `6 C(n,4) p^2 (2-p^2) + 6 C(n,3) p^2 + 2 C(n,2) (1-p)(1-(1-p^2)^(n-2))`
/// plus the origin term `2 C(n,2) p` (or `p^2`, see [`OriginVariant`]).
pub fn expectation_triangulation(n: usize, p: f64, variant: OriginVariant) -> Result<f64> {
    check_probability(p)?;
    Ok(compensated_sum(triangulation_expectation_terms(n as u64, &p, variant)))
}

pub fn expectation_triangulation_exact(n: usize, p: &BigRational, variant: OriginVariant) -> Result<BigRational> {
    check_rational(p)?;
    Ok(triangulation_expectation_terms(n as u64, p, variant).into_iter().fold(BigRational::zero(), |a, b| a + b))
}

/// Principal variance terms of the polytope edge count:
///
/// ```text
///   2 (n)_6 p^3 (1-p) (1-2p^2)^2
/// + 8 (n)_5 p^3 (1-p) (p^3 (1-p) + (1-2p^2)^2)
/// - (n)_4 p^4 (1-p^2)(3-4p^2)
/// + (n)_4 p^2 (1-p^2)(1 - p^2(1-p^2) + (1-p^2)^2)
/// ```
pub fn variance_case1_polytope(n: usize, p: f64) -> Result<f64> {
    check_probability(p)?;
    Ok(compensated_sum(variance_case1_terms(n as u64, &p)))
}

pub fn variance_case1_polytope_exact(n: usize, p: &BigRational) -> Result<BigRational> {
    check_rational(p)?;
    Ok(variance_case1_terms(n as u64, p).into_iter().fold(BigRational::zero(), |a, b| a + b))
}

/// `E[X^4]` for `X ~ Bin(m, p)`: `(m)_4 p^4 + 6 (m)_3 p^3 + 7 (m)_2 p^2 + m p`.
pub fn binomial_moment4(m: u64, p: f64) -> Result<f64> {
    check_probability(p)?;
    let terms = [
        falling::<f64>(m, 4) * p.powi(4),
        6.0 * falling::<f64>(m, 3) * p.powi(3),
        7.0 * falling::<f64>(m, 2) * p.powi(2),
        m as f64 * p,
    ];
    Ok(compensated_sum(terms))
}

/// The arc probability `1/√2` at which `(1 - √2 p)` vanishes.
pub fn critical_p() -> f64 {
    std::f64::consts::FRAC_1_SQRT_2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub expectation: f64,
    pub variance_principal: f64,
    pub regime_label: String,
}

/// Expectation, principal variance and a description of the dominant
/// asymptotic regime for the polytope edge count.
pub fn moment_report(n: usize, p: f64) -> Result<MomentReport> {
    let expectation = expectation_polytope(n, p)?;
    let variance_principal = variance_case1_polytope(n, p)?;
    let nf = n as f64;
    let mean_regime = if nf * (1.0 - p) >= 1.0 { "E ~ n^4 p^2 (1-p)" } else { "E ~ n^3 p^2" };
    let var_regime = if p <= nf.powi(-2) {
        "V ~ n^4 p^2 (sparse)"
    } else if (p - critical_p()).abs() <= nf.powf(-0.5) {
        "V ~ n^5 p^3 (1-p) (critical window)"
    } else {
        "V ~ n^6 p^3 (1-p) (1-sqrt2 p)^2"
    };
    Ok(MomentReport { expectation, variance_principal, regime_label: format!("{mean_regime}; {var_regime}") })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn polytope_expectation_examples() {
        assert_eq!(expectation_polytope(3, 1.0).unwrap(), 6.0);
        assert!((expectation_polytope(4, 0.5).unwrap() - 10.5).abs() < 1e-12);
        assert_eq!(expectation_polytope(2, 0.3).unwrap(), 0.0);
        assert_eq!(expectation_polytope(1, 0.3).unwrap(), 0.0);
        assert_eq!(expectation_polytope_exact(4, &ratio(1, 2)).unwrap(), ratio(21, 2));
        assert!(expectation_polytope(4, 1.5).is_err());
    }

    #[test]
    fn triangulation_expectation_examples() {
        for v in [OriginVariant::ProofP, OriginVariant::TheoremP2] {
            assert!((expectation_triangulation(3, 1.0, v).unwrap() - 12.0).abs() < 1e-12);
            assert!((expectation_triangulation(4, 1.0, v).unwrap() - 42.0).abs() < 1e-12);
        }
        assert_eq!(expectation_triangulation(2, 0.5, OriginVariant::ProofP).unwrap(), 1.0);
        assert_eq!(expectation_triangulation(2, 0.5, OriginVariant::TheoremP2).unwrap(), 0.5);
    }

    #[test]
    fn all_forms_vanish_at_zero() {
        for n in [1, 2, 3, 10, 100] {
            assert_eq!(expectation_polytope(n, 0.0).unwrap(), 0.0);
            assert_eq!(expectation_triangulation(n, 0.0, OriginVariant::ProofP).unwrap(), 0.0);
            assert_eq!(expectation_triangulation(n, 0.0, OriginVariant::TheoremP2).unwrap(), 0.0);
            assert_eq!(variance_case1_polytope(n, 0.0).unwrap(), 0.0);
        }
        assert_eq!(binomial_moment4(20, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn binomial_fourth_moment() {
        assert_eq!(binomial_moment4(1, 0.3).unwrap(), 0.3);
        assert_eq!(binomial_moment4(0, 0.7).unwrap(), 0.0);
        // direct enumeration over {0, 1, 2}: 0.25*0 + 0.5*1 + 0.25*16
        assert_eq!(binomial_moment4(2, 0.5).unwrap(), 4.5);
        for m in 0..12u64 {
            for &p in &[0.1f64, 0.37, 0.5, 0.9] {
                let brute: f64 = (0..=m)
                    .map(|k| {
                        let c = binomial::<f64>(m, k);
                        c * p.powi(k as i32) * (1.0 - p).powi((m - k) as i32) * (k as f64).powi(4)
                    })
                    .sum();
                let v = binomial_moment4(m, p).unwrap();
                assert!((v - brute).abs() <= 1e-10 * brute.max(1.0), "m={m} p={p}: {v} vs {brute}");
            }
        }
    }

    #[test]
    fn critical_probability() {
        let c = critical_p();
        assert!((c * c - 0.5).abs() <= 2.0 * f64::EPSILON);
        assert!((1.0 - std::f64::consts::SQRT_2 * c).abs() <= 2.0 * f64::EPSILON);
        let terms = variance_case1_terms(50, &c);
        assert!(terms[0].abs() < 1e-6 * terms[1].abs());
    }

    /// Contributions per configuration, before simplification.
    fn variance_case1_by_configuration(n: u64, p: f64) -> f64 {
        let q = 1.0 - p;
        let r = 1.0 - p * p;
        let f6 = falling::<f64>(n, 6);
        let f5 = falling::<f64>(n, 5);
        let f4 = falling::<f64>(n, 4);
        let two_nodes = 2.0 * f6 * p.powi(7) * q - 4.0 * f6 * p.powi(5) * q * r + 2.0 * f6 * p.powi(3) * q * r * r;
        let three_nodes =
            -4.0 * f5 * p.powi(5) * q * (4.0 * r - p) + 4.0 * f5 * p.powi(3) * q * (p.powi(3) + 2.0 * r * r);
        let four_nodes = -f4 * p.powi(4) * r * (3.0 - 4.0 * p * p) + f4 * p * p * r * (1.0 - p * p * r + r * r);
        two_nodes + three_nodes + four_nodes
    }

    #[test]
    fn variance_reference_agrees_with_configuration_sum() {
        for &(n, p) in &[(6u64, 0.5f64), (10, 0.3), (60, 0.3), (200, 0.9), (30, 0.05)] {
            let a = variance_case1_polytope(n as usize, p).unwrap();
            let b = variance_case1_by_configuration(n, p);
            assert!(((a - b) / a).abs() < 1e-12, "n={n} p={p}: {a} vs {b}");
        }
        // exact rational route
        let exact = variance_case1_polytope_exact(6, &ratio(1, 2)).unwrap();
        let approx = num_traits::ToPrimitive::to_f64(&exact).unwrap();
        assert!((approx - variance_case1_polytope(6, 0.5).unwrap()).abs() < 1e-9 * approx);
    }

    #[test]
    fn float_route_matches_exact_route_at_large_n() {
        let p = ratio(3, 10);
        for n in [100usize, 1000, 10_000] {
            let e = num_traits::ToPrimitive::to_f64(&expectation_polytope_exact(n, &p).unwrap()).unwrap();
            let f = expectation_polytope(n, 0.3).unwrap();
            assert!(((e - f) / e).abs() < 1e-13, "n={n}");
            let e = num_traits::ToPrimitive::to_f64(&variance_case1_polytope_exact(n, &p).unwrap()).unwrap();
            let f = variance_case1_polytope(n, 0.3).unwrap();
            assert!(((e - f) / e).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn expectation_grows_with_n() {
        for &p in &[0.05, 0.3, 0.5, 0.9, 0.99] {
            let mut prev = 0.0;
            for n in 1..200 {
                let e = expectation_polytope(n, p).unwrap();
                assert!(e >= prev, "n={n} p={p}");
                prev = e;
            }
        }
    }

    #[test]
    fn expectation_scales_like_n4p2() {
        let r200 = expectation_polytope(200, 0.3).unwrap() / (200f64.powi(4) * 0.09);
        let r400 = expectation_polytope(400, 0.3).unwrap() / (400f64.powi(4) * 0.09);
        let ratio = r200 / r400;
        assert!((0.01..=10.0).contains(&ratio));
    }

    #[test]
    fn variance_dips_near_critical_probability() {
        for n in [30usize, 60, 200, 1000] {
            let grid: Vec<f64> = (0..=4000).map(|i| 0.5 + 0.4 * i as f64 / 4000.0).collect();
            let argmin = grid
                .iter()
                .copied()
                .min_by(|a, b| {
                    variance_case1_polytope(n, *a).unwrap().total_cmp(&variance_case1_polytope(n, *b).unwrap())
                })
                .unwrap();
            assert!((argmin - critical_p()).abs() <= 0.01, "n={n}: argmin {argmin}");
        }
    }

    #[test]
    fn moment_report_labels() {
        let r = moment_report(60, 0.3).unwrap();
        assert!(r.expectation > 0.0 && r.variance_principal > 0.0);
        assert!(r.regime_label.contains("n^6"));
        assert!(moment_report(60, 0.7).unwrap().regime_label.contains("critical"));
    }
}
