//! Exact self-checks shared by the test suite and the acceptance run.
//!
//! Each function returns a list of human-readable violations; an empty list
//! means the property holds.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Zero;
use rand::Rng;

use crate::classical::PseudoDistanceKind;
use crate::error::Result;
use crate::hamming::{
    apply_automorphism, average_radius, delete, generalized_distance, radius, radius_exhaustive, substitute,
    Automorphism, KTuple, Word,
};
use crate::poly::{binomial, hahn_family, hahn_weight, int, krawtchouk, krawtchouk_value, to_f64, HahnTable, Rational};
use crate::sdp::model::{build_sdp, check_distribution, code_distribution, code_e_matrix, is_psd_exact};
use crate::sdp::{export_sdpa, import_sdpa, solve, solve_block, SolverParams};

type Q = Ratio<i64>;

fn q(v: u32) -> Q {
    Q::from_integer(v as i64)
}

fn rbar(t: &KTuple) -> Q {
    let r = average_radius(t);
    Q::new(*r.numer() as i64, *r.denom() as i64)
}

/// Every inequality and identity relating `d`, `r` and the average radius
/// on one tuple (`k >= 2`); `y` is the free point of the triangle
/// inequalities and `g` an arbitrary automorphism.
pub fn tuple_violations(t: &KTuple, y: Word, g: &Automorphism) -> Result<Vec<String>> {
    let k = t.k();
    let kq = Q::from_integer(k as i64);
    let w = t.words();
    let mut bad = Vec::new();
    let mut check = |ok: bool, what: &str| {
        if !ok {
            bad.push(format!("{what} fails for {t:?}"));
        }
    };
    let d = q(generalized_distance(t)?);
    let r = q(radius(t)?);
    let rb = rbar(t);

    check(d / kq <= rb && rb <= r && r <= d, "d/k <= rbar <= r <= d");
    check(rb * 2 <= d, "rbar <= d/2");
    if k <= 3 {
        check(d == kq * rb, "d = k rbar");
    }
    if k == 2 {
        let dist = w[0].distance(&w[1])?;
        check(d == q(dist), "d of a pair is the Hamming distance");
        check(r == q(dist.div_ceil(2)), "r of a pair is ceil(d/2)");
        check(rb == Q::new(dist as i64, 2), "rbar of a pair is d/2");
    }

    let pair_sum: u32 =
        (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).map(|(i, j)| w[i].distance(&w[j]).unwrap_or(0)).sum();
    check(d * (kq - 1) <= q(pair_sum), "d <= sum of pair distances / (k-1)");
    if k == 3 {
        check(d * 2 == q(pair_sum), "d of a triple is half the pair sum");
        let pr = (0..3).map(|i| w[i].distance(&w[(i + 1) % 3]).unwrap_or(0).div_ceil(2)).max().unwrap_or(0);
        check(r == q(pr), "r of a triple is the largest pair radius");
        check(r == q(radius_exhaustive(t)), "closed-form radius matches exhaustive search");
    }

    // substitution ("triangular") inequalities
    let mut d_sub = Q::zero();
    let mut rb_sub = Q::zero();
    for i in 0..k {
        let s = substitute(t, i, y);
        d_sub += q(generalized_distance(&s)?);
        rb_sub += rbar(&s);
    }
    check(d * (kq - 1) <= d_sub, "d triangle inequality");
    check(rb * (kq - 1) <= rb_sub, "rbar triangle inequality");

    // deletion bounds
    let mut d_del = Q::zero();
    let mut r_del = Q::zero();
    let mut rb_del = Q::zero();
    for i in 0..k {
        let s = delete(t, i);
        if k >= 3 {
            d_del += q(generalized_distance(&s)?);
        }
        r_del = r_del.max(q(radius(&s)?));
        rb_del += rbar(&s);
    }
    if k >= 3 {
        check(d * (kq - 1) <= d_del, "d <= deletions / (k-1)");
        check(d * kq >= d_del, "d >= deletions / k");
        let two_k1 = Q::from_integer(2 * (k as i64 - 1));
        check(rb * kq * (kq - 2) <= two_k1 * rb_del, "rbar <= 2(k-1)/(k(k-2)) deletions");
    }
    check(r >= r_del, "r >= largest deletion radius");
    check(rb * kq >= rb_del, "rbar >= deletions / k");
    if k % 2 == 1 {
        check(rb * kq == rb_del, "rbar = deletions / k for odd k");
    }

    // invariance under reordering and automorphisms
    let mut rev = w.to_vec();
    rev.reverse();
    let mut rot = w.to_vec();
    rot.rotate_left(1);
    let moved = apply_automorphism(g, t)?;
    for (name, other) in [("reversal", KTuple::new(rev)?), ("rotation", KTuple::new(rot)?), ("automorphism", moved)] {
        check(q(generalized_distance(&other)?) == d, &format!("d invariant under {name}"));
        check(q(radius(&other)?) == r, &format!("r invariant under {name}"));
        check(rbar(&other) == rb, &format!("rbar invariant under {name}"));
    }

    // a word in the affine span of the others leaves d unchanged
    if k >= 3 {
        let extra = Word::new(t.n(), w[0].bits() ^ w[1].bits() ^ w[2].bits())?;
        let mut longer = w.to_vec();
        longer.push(extra);
        check(q(generalized_distance(&KTuple::new(longer)?)?) == d, "d unchanged by an affine combination");
    }
    Ok(bad)
}

/// Compares the Gram-Schmidt Hahn family at `(n, s, t)` with its defining
/// properties and with the explicit hypergeometric sum
/// `Q_k(x) = sum_j (-1)^j C(k,j) C(n+1-k,j) / (C(s,j) C(n-t,j)) C(x,j)`.
pub fn hahn_violations(n: usize, s: usize, t: usize) -> Result<Vec<String>> {
    let fam = hahn_family(n, s, t)?;
    let mut bad = Vec::new();
    let polys = fam.polys();
    let weights: Vec<BigInt> = (0..=s).map(|i| hahn_weight(n, s, t, i)).collect::<Result<_>>()?;
    for (k, p) in polys.iter().enumerate() {
        if p.degree() != Some(k) {
            bad.push(format!("Q_{k}({n},{s},{t}) has degree {:?}", p.degree()));
        }
        if p.eval_int(0) != int(1) {
            bad.push(format!("Q_{k}({n},{s},{t})(0) != 1"));
        }
        for (l, other) in polys.iter().enumerate().skip(k + 1) {
            let ip: Rational = weights
                .iter()
                .enumerate()
                .map(|(i, wt)| int(wt.clone()) * p.eval_int(i as i64) * other.eval_int(i as i64))
                .sum();
            if !ip.is_zero() {
                bad.push(format!("<Q_{k}, Q_{l}> = {ip} at ({n},{s},{t})"));
            }
        }
        for x in 0..=s {
            let closed: Rational = (0..=k)
                .map(|j| {
                    let (j, ki, ni, si, ti, xi) = (j as i64, k as i64, n as i64, s as i64, t as i64, x as i64);
                    let num = binomial(ki, j) * binomial(ni + 1 - ki, j) * binomial(xi, j);
                    let den = binomial(si, j) * binomial(ni - ti, j);
                    let v = Rational::new(num, den);
                    if j % 2 == 0 {
                        v
                    } else {
                        -v
                    }
                })
                .sum();
            if closed != p.eval_int(x as i64) {
                bad.push(format!("Q_{k}({n},{s},{t})({x}) differs from the explicit sum"));
            }
        }
    }
    if polys.len() != s.min(n - t) + 1 {
        bad.push(format!("family ({n},{s},{t}) has {} members", polys.len()));
    }
    Ok(bad)
}

/// `sum_i C(n,i) K_k(i) K_l(i) = 2^n C(n,k) [k = l]`, and the polynomial
/// form agrees with the direct sum at every integer point.
pub fn krawtchouk_violations(n: usize) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    let vals: Vec<Vec<BigInt>> = (0..=n).map(|k| (0..=n).map(|i| krawtchouk_value(n, k, i)).collect()).collect();
    for k in 0..=n {
        let p = krawtchouk(n, k)?;
        for i in 0..=n {
            if p.eval_int(i as i64) != int(vals[k][i].clone()) {
                bad.push(format!("K_{k}^{n}({i}) polynomial and sum disagree"));
            }
        }
        for l in k..=n {
            let s: BigInt = (0..=n).map(|i| binomial(n as i64, i as i64) * &vals[k][i] * &vals[l][i]).sum();
            let want = if k == l { (BigInt::from(1) << n) * binomial(n as i64, k as i64) } else { BigInt::zero() };
            if s != want {
                bad.push(format!("Krawtchouk inner product ({k},{l}) for n={n} is {s}"));
            }
        }
    }
    Ok(bad)
}

/// Random code of length `n` with `2..=max_size` distinct words.
pub fn random_code<R: Rng>(rng: &mut R, n: usize, max_size: usize) -> Result<Vec<Word>> {
    let size = rng.gen_range(2..=max_size.min(1 << n.min(20)));
    let mut bits: Vec<u64> = Vec::with_capacity(size);
    while bits.len() < size {
        let b = rng.gen_range(0..1u64 << n);
        if !bits.contains(&b) {
            bits.push(b);
        }
    }
    bits.into_iter().map(|b| Word::new(n, b)).collect()
}

/// Feasibility of a concrete code's triple distribution in the program
/// without a forbidden set, plus the smallest eigenvalue over the
/// matrices `sum E_k(c, c')`.
pub fn code_violations(code: &[Word]) -> Result<(Vec<String>, f64)> {
    let n = code[0].len();
    let mut bad = Vec::new();
    let p = build_sdp(n, PseudoDistanceKind::ClassicalD1, 1, false)?;
    let dist = code_distribution(code)?;
    let report = check_distribution(&p, &dist);
    if !report.feasible() {
        bad.push(format!("distribution infeasible: {report:?}"));
    }
    let size = int(BigInt::from(code.len()));
    if report.objective != size {
        bad.push(format!("objective {} differs from the code size {}", report.objective, code.len()));
    }
    let mut hahn = HahnTable::new();
    let mut min_eig = f64::INFINITY;
    for k in 0..=n / 2 {
        let m = code_e_matrix(n, k, code, &mut hahn)?;
        if !is_psd_exact(m.clone()) {
            bad.push(format!("E_{k} sum is not PSD"));
        }
        let dim = m.len();
        let dense = nalgebra::DMatrix::from_fn(dim, dim, |i, j| to_f64(&m[i][j]));
        if let Some(e) = dense.symmetric_eigenvalues().iter().copied().reduce(f64::min) {
            min_eig = min_eig.min(e);
        }
    }
    Ok((bad, min_eig))
}

/// Instances used for the interchange round trip: `(n, kind, m, even_only)`.
pub const ROUND_TRIP_SET: [(usize, PseudoDistanceKind, usize, bool); 20] = {
    use PseudoDistanceKind::{AverageRadius as Rb, ClassicalD1 as D1, GeneralizedD as D, Radius as R};
    [
        (4, D, 3, false),
        (5, D, 4, false),
        (6, D, 4, false),
        (7, D, 4, false),
        (8, D, 5, false),
        (9, D, 6, false),
        (10, D, 4, false),
        (10, D, 7, false),
        (11, D, 6, false),
        (5, R, 2, false),
        (7, R, 3, false),
        (9, R, 2, false),
        (10, R, 2, true),
        (11, R, 3, true),
        (12, R, 4, true),
        (6, Rb, 2, false),
        (8, Rb, 2, false),
        (7, D1, 3, false),
        (9, D1, 4, false),
        (10, D1, 3, false),
    ]
};

/// Solves the program directly and through an SDPA export and re-import;
/// returns both optima and their relative difference.
pub fn sdpa_round_trip(
    n: usize,
    kind: PseudoDistanceKind,
    m: usize,
    even_only: bool,
    params: &SolverParams,
) -> Result<(f64, f64, f64)> {
    let p = build_sdp(n, kind, m, even_only)?;
    let direct = solve(&p, params)?;
    let again = solve_block(&import_sdpa(&export_sdpa(&p))?, params)?;
    let (a, b) = (direct.dual_objective, again.dual_objective);
    Ok((a, b, (a - b).abs() / a.abs().max(1.0)))
}
