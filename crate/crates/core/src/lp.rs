//! Delsarte's linear programming bound on `A(n, d)`, solved exactly.
//!
//! The unknowns are the distance distribution `x_0..x_n` of a code with
//! `x_0 = 1` and `x_1 = .. = x_{d-1} = 0`; every Krawtchouk transform
//! `sum_i K_k(i) x_i` is nonnegative and the objective is `sum_i x_i`.

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::classical::{BoundResult, Method};
use crate::error::{Error, Result};
use crate::poly::{int, krawtchouk_value, Rational};

/// The LP in inequality form `max c.x  s.t.  A x <= b, x >= 0` over the
/// free unknowns `x_d..x_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct LpProblem {
    pub n: usize,
    pub d: usize,
    /// One row per Krawtchouk index `k = 0..=n`.
    pub a: Vec<Vec<Rational>>,
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
}

impl LpProblem {
    pub fn delsarte(n: usize, d: usize) -> Result<Self> {
        if d == 0 || d > n {
            return Err(Error::Domain(format!("distance {d} outside 1..={n}")));
        }
        // sum_{i>=d} K_k(i) x_i >= -K_k(0) becomes -sum K_k(i) x_i <= C(n, k)
        let a = (0..=n).map(|k| (d..=n).map(|i| -int(krawtchouk_value(n, k, i))).collect()).collect();
        let b = (0..=n).map(|k| int(krawtchouk_value(n, k, 0))).collect();
        let c = vec![int(1); n - d + 1];
        Ok(LpProblem { n, d, a, b, c })
    }
}

/// Exact optimum and an optimal distance distribution `x_0..x_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub optimum: Rational,
    pub distribution: Vec<Rational>,
    pub pivots: usize,
}

/// Dense tableau simplex with Bland's rule. Requires `b >= 0`, so the
/// slack basis is feasible and no first phase is needed.
fn simplex(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> Result<(Rational, Vec<Rational>, usize)> {
    let rows = a.len();
    let cols = c.len();
    if b.iter().any(|v| v.is_negative()) {
        return Err(Error::Input("simplex needs a nonnegative right-hand side".into()));
    }
    let width = cols + rows;
    let mut t: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut full = row.clone();
            full.resize(width, Rational::zero());
            full[cols + r] = int(1);
            full.push(b[r].clone());
            full
        })
        .collect();
    // reduced costs, stored negated: a negative entry means the column improves
    let mut z: Vec<Rational> = c.iter().map(|v| -v.clone()).collect();
    z.resize(width + 1, Rational::zero());
    let mut basis: Vec<usize> = (cols..width).collect();
    let mut pivots = 0;

    loop {
        let Some(enter) = (0..width).find(|&j| z[j].is_negative()) else { break };
        let mut leave: Option<(usize, Rational)> = None;
        for r in 0..rows {
            if t[r][enter].is_positive() {
                let ratio = &t[r][width] / &t[r][enter];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let (lr, _) = leave.ok_or_else(|| Error::Solver("linear program is unbounded".into()))?;
        let p = t[lr][enter].clone();
        for v in t[lr].iter_mut() {
            *v /= &p;
        }
        let pivot_row = t[lr].clone();
        for (r, row) in t.iter_mut().enumerate() {
            if r != lr && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
        let f = z[enter].clone();
        for (v, pv) in z.iter_mut().zip(&pivot_row) {
            *v -= &f * pv;
        }
        basis[lr] = enter;
        pivots += 1;
    }

    let mut x = vec![Rational::zero(); cols];
    for (r, &j) in basis.iter().enumerate() {
        if j < cols {
            x[j] = t[r][width].clone();
        }
    }
    Ok((z[width].clone(), x, pivots))
}

pub fn solve_lp(p: &LpProblem) -> Result<LpSolution> {
    let (obj, x, pivots) = simplex(&p.a, &p.b, &p.c)?;
    let mut distribution = vec![Rational::zero(); p.n + 1];
    distribution[0] = int(1);
    for (j, v) in x.into_iter().enumerate() {
        distribution[p.d + j] = v;
    }
    Ok(LpSolution { optimum: obj + int(1), distribution, pivots })
}

/// Delsarte bound `floor(LP optimum)` on the size of a binary code of
/// length `n` and minimum distance `d`.
pub fn delsarte_bound(n: usize, d: usize) -> Result<BoundResult> {
    let sol = solve_lp(&LpProblem::delsarte(n, d)?)?;
    let v = sol.optimum.numer().div_floor(sol.optimum.denom());
    let v = v.to_u128().ok_or_else(|| Error::Domain(format!("LP bound {v} does not fit in 128 bits")))?;
    Ok(BoundResult::new(v, Method::Lp)
        .with("n", n)
        .with("d", d)
        .with("optimum", &sol.optimum)
        .with("pivots", sol.pivots))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn small_cases() {
        assert_eq!(delsarte_bound(4, 4).unwrap().value, 2);
        for n in 1..=9 {
            assert_eq!(delsarte_bound(n, 1).unwrap().value, 1 << n);
        }
        assert!(delsarte_bound(10, 4).unwrap().value >= 40);
        // A(n, 2) = 2^{n-1} and the LP is tight there
        assert_eq!(delsarte_bound(7, 2).unwrap().value, 64);
        assert_eq!(delsarte_bound(5, 5).unwrap().value, 2);
    }

    #[test]
    fn known_optima() {
        // Delsarte's value for (n, d) = (7, 3) is 16: the Hamming code is optimal
        assert_eq!(solve_lp(&LpProblem::delsarte(7, 3).unwrap()).unwrap().optimum, int(16));
        assert_eq!(solve_lp(&LpProblem::delsarte(4, 4).unwrap()).unwrap().optimum, int(2));
        assert_eq!(solve_lp(&LpProblem::delsarte(6, 3).unwrap()).unwrap().optimum, int(8));
        assert_eq!(solve_lp(&LpProblem::delsarte(10, 4).unwrap()).unwrap().optimum, rat(128, 3));
        assert_eq!(solve_lp(&LpProblem::delsarte(9, 4).unwrap()).unwrap().optimum, rat(128, 5));
        assert_eq!(delsarte_bound(12, 5).unwrap().value, 40);
    }

    #[test]
    fn optimum_is_feasible() {
        for n in 2..=10 {
            for d in 1..=n {
                let p = LpProblem::delsarte(n, d).unwrap();
                let s = solve_lp(&p).unwrap();
                assert!(s.distribution.iter().all(|v| !v.is_negative()));
                assert!(s.distribution[1..d].iter().all(Zero::is_zero));
                for k in 0..=n {
                    let tr: Rational = (0..=n).map(|i| int(krawtchouk_value(n, k, i)) * &s.distribution[i]).sum();
                    assert!(!tr.is_negative(), "n={n} d={d} k={k}");
                }
                let total: Rational = s.distribution.iter().sum();
                assert_eq!(total, s.optimum);
            }
        }
    }

    #[test]
    fn domain() {
        assert!(matches!(delsarte_bound(4, 5), Err(Error::Domain(_))));
        assert!(matches!(delsarte_bound(4, 0), Err(Error::Domain(_))));
    }
}
