//! Exact feasibility test for systems `{x : A x = 0, B x ≥ 1}` with free `x`,
//! by phase-one simplex over rationals with Bland's rule.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Whether some `x ∈ Q^d` satisfies `a·x = 0` for every row of `eq` and
/// `b·x ≥ 1` for every row of `ge`.
pub fn feasible(d: usize, eq: &[Vec<BigRational>], ge: &[Vec<BigRational>]) -> bool {
    let rows = eq.len() + ge.len();
    if rows == 0 {
        return true;
    }
    // columns: x+ (d), x- (d), surplus (ge.len()), artificial (rows), rhs
    let surplus0 = 2 * d;
    let art0 = surplus0 + ge.len();
    let rhs = art0 + rows;
    let width = rhs + 1;

    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(rows);
    for (r, a) in eq.iter().chain(ge).enumerate() {
        debug_assert_eq!(a.len(), d);
        let mut row = vec![BigRational::zero(); width];
        for (k, x) in a.iter().enumerate() {
            row[k] = x.clone();
            row[d + k] = -x.clone();
        }
        if r >= eq.len() {
            row[surplus0 + r - eq.len()] = -BigRational::one();
            row[rhs] = BigRational::one();
        }
        row[art0 + r] = BigRational::one();
        t.push(row);
    }
    let mut basis: Vec<usize> = (art0..art0 + rows).collect();

    // Phase-one objective: minimise the sum of artificials. `z[k]` is the
    // reduced gain of column k; the objective value is `z[rhs]`.
    let mut z = vec![BigRational::zero(); width];
    for row in &t {
        for k in 0..width {
            if k < art0 || k == rhs {
                z[k] += &row[k];
            }
        }
    }

    loop {
        if z[rhs].is_zero() {
            return true;
        }
        let Some(col) = (0..art0 + rows).find(|&k| z[k].is_positive()) else {
            return false;
        };
        let mut pivot: Option<(usize, BigRational)> = None;
        for (r, row) in t.iter().enumerate() {
            if row[col].is_positive() {
                let ratio = &row[rhs] / &row[col];
                let better = match &pivot {
                    None => true,
                    Some((best, q)) => ratio < *q || (ratio == *q && basis[r] < basis[*best]),
                };
                if better {
                    pivot = Some((r, ratio));
                }
            }
        }
        let Some((pr, _)) = pivot else {
            // Unbounded in phase one cannot happen: the objective is bounded below.
            unreachable!("phase-one objective is bounded");
        };
        let inv = t[pr][col].recip();
        for x in t[pr].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let nonzero: Vec<usize> = (0..width).filter(|&k| !t[pr][k].is_zero()).collect();
        let pivot_row = t[pr].clone();
        for (r, row) in t.iter_mut().enumerate() {
            if r == pr || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for &k in &nonzero {
                row[k] -= &factor * &pivot_row[k];
            }
        }
        if !z[col].is_zero() {
            let factor = z[col].clone();
            for &k in &nonzero {
                z[k] -= &factor * &pivot_row[k];
            }
        }
        basis[pr] = col;
    }
}
