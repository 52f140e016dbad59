//! Combinatorial upper bounds on `A_{k-1}(n, f, m)`: Singleton, Hamming,
//! Plotkin and Elias-Bassalygo, all evaluated in exact arithmetic.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{binomial, int, Rational};

/// Which pseudo-distance constrains the code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PseudoDistanceKind {
    /// Generalized Hamming distance `d`.
    GeneralizedD,
    /// `d` restricted to affinely independent tuples.
    GeneralizedDAff,
    /// Radius `r`.
    Radius,
    /// Average radius.
    AverageRadius,
    /// Ordinary minimum distance (pairs only).
    ClassicalD1,
}

impl PseudoDistanceKind {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::GeneralizedD => "d",
            Self::GeneralizedDAff => "daff",
            Self::Radius => "r",
            Self::AverageRadius => "rbar",
            Self::ClassicalD1 => "d1",
        }
    }

    pub const ALL: [PseudoDistanceKind; 5] =
        [Self::GeneralizedD, Self::GeneralizedDAff, Self::Radius, Self::AverageRadius, Self::ClassicalD1];
}

impl fmt::Display for PseudoDistanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for PseudoDistanceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.tag() == s)
            .ok_or_else(|| Error::Input(format!("unknown pseudo-distance kind {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Singleton,
    Hamming,
    Plotkin,
    Elias,
    Sdp,
    Lp,
    OracleExact,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Method::Singleton => "singleton",
            Method::Hamming => "hamming",
            Method::Plotkin => "plotkin",
            Method::Elias => "elias",
            Method::Sdp => "sdp",
            Method::Lp => "lp",
            Method::OracleExact => "oracle-exact",
        }
    }

    /// Superscript used in the published tables for the four classical methods.
    pub fn superscript(&self) -> Option<u8> {
        match self {
            Method::Singleton => Some(1),
            Method::Hamming => Some(2),
            Method::Plotkin => Some(3),
            Method::Elias => Some(4),
            _ => None,
        }
    }

    pub fn from_superscript(sup: u8) -> Option<Method> {
        [Method::Singleton, Method::Hamming, Method::Plotkin, Method::Elias]
            .into_iter()
            .find(|m| m.superscript() == Some(sup))
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// An integer upper bound together with how it was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundResult {
    pub value: u128,
    pub method: Method,
    pub detail: BTreeMap<String, String>,
}

impl BoundResult {
    pub fn new(value: u128, method: Method) -> Self {
        BoundResult { value: value.max(1), method, detail: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.detail.insert(key.to_string(), value.to_string());
        self
    }
}

fn to_u128(v: &BigInt) -> Result<u128> {
    v.to_u128().ok_or_else(|| Error::Domain(format!("bound {v} does not fit in 128 bits")))
}

fn pow2(e: usize) -> BigInt {
    BigInt::one() << e
}

fn check_k(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::Domain(format!("tuple size k = {k} must be at least 2")));
    }
    Ok(())
}

/// Number of words in a Hamming ball of radius `r` in `H_n`.
pub fn ball_volume(n: usize, r: i64) -> Result<BigInt> {
    if r < 0 || r as usize > n {
        return Err(Error::Domain(format!("ball radius {r} outside 0..={n}")));
    }
    Ok((0..=r).map(|j| binomial(n as i64, j)).sum())
}

/// `(k - 1) 2^{n - d + 1}`.
pub fn singleton_bound(n: usize, k: usize, d: usize) -> Result<BoundResult> {
    check_k(k)?;
    if d < 1 || d > n {
        return Err(Error::Domain(format!("distance {d} outside 1..={n}")));
    }
    let v = BigInt::from(k - 1) * pow2(n - d + 1);
    Ok(BoundResult::new(to_u128(&v)?, Method::Singleton).with("k", k))
}

/// Volume bound from counting (codeword, nearby point) pairs.
pub fn hamming_bound(n: usize, k: usize, m: usize, kind: PseudoDistanceKind) -> Result<BoundResult> {
    check_k(k)?;
    if m < 1 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    let ceil_m_k = m.div_ceil(k) as i64;
    let (numerator, radius) = match kind {
        PseudoDistanceKind::Radius | PseudoDistanceKind::AverageRadius => (BigInt::from(k - 1) * pow2(n), m as i64 - 1),
        PseudoDistanceKind::GeneralizedD => (BigInt::from(k - 1) * pow2(n), ceil_m_k - 1),
        PseudoDistanceKind::GeneralizedDAff => (pow2(n + k - 2), ceil_m_k - 1),
        PseudoDistanceKind::ClassicalD1 => (pow2(n), (m as i64 - 1) / 2),
    };
    let vol = ball_volume(n, radius)?;
    let v = numerator / &vol;
    Ok(BoundResult::new(to_u128(&v)?, Method::Hamming).with("ball_radius", radius).with("ball_volume", vol))
}

/// `j_k(x)`: the falling factorial `x (x-1) ... (x-k+1)`, zero for `x <= k - 1`.
pub fn falling(x: &Rational, k: usize) -> Rational {
    if *x <= int(k as i64 - 1) {
        return Rational::zero();
    }
    (0..k as i64).fold(Rational::one(), |acc, t| acc * (x - int(t)))
}

/// Generalized binomial `C(x, k) = j_k(x) / k!`.
pub fn binom_rat(x: &Rational, k: usize) -> Rational {
    let fact: BigInt = (1..=k as i64).map(BigInt::from).product();
    falling(x, k) / int(fact)
}

/// `j_k^aff(x) = x prod_{t=0}^{k-2} (x - 2^t)`, zero for `x <= 2^{k-2}`.
pub fn falling_aff(x: &Rational, k: usize) -> Rational {
    let lim = int(pow2(k.saturating_sub(2)));
    if *x <= lim {
        return Rational::zero();
    }
    (0..k.saturating_sub(1)).fold(x.clone(), |acc, t| acc * (x - int(pow2(t))))
}

/// Right-hand side of the Plotkin-type inequality `f/n <= rhs(M)`.
///
/// With `omega = None` this is the unrestricted form; with `Some(w/n)` the
/// constant-weight form. Defined for `M >= k`.
pub fn plotkin_rhs(
    m_size: &Rational,
    k: usize,
    kind: PseudoDistanceKind,
    omega: Option<&Rational>,
) -> Result<Rational> {
    check_k(k)?;
    let total = binom_rat(m_size, k);
    if total.is_zero() {
        return Err(Error::Domain(format!("code size {m_size} admits no {k}-tuples")));
    }
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let w = omega.cloned().unwrap_or(half);
    let ones = m_size * &w;
    let zeros = m_size * (Rational::one() - &w);
    let d_form = || Rational::one() - (binom_rat(&ones, k) + binom_rat(&zeros, k)) / &total;
    match kind {
        PseudoDistanceKind::GeneralizedD => Ok(d_form()),
        PseudoDistanceKind::GeneralizedDAff => match omega {
            None => {
                let factor = Rational::one() - Rational::new(BigInt::one(), pow2(k - 1));
                Ok(factor * m_size / (m_size - Rational::one()))
            }
            Some(_) => {
                let aff = falling_aff(m_size, k);
                if aff.is_zero() {
                    return Err(Error::Domain(format!("code size {m_size} too small for affine tuples")));
                }
                Ok(falling(m_size, k) / aff * d_form())
            }
        },
        PseudoDistanceKind::AverageRadius => {
            let kr = int(k as i64);
            let sum: Rational =
                (1..k).map(|i| binom_rat(&ones, i) * binom_rat(&zeros, k - i) * int(i.min(k - i) as i64) / &kr).sum();
            Ok(sum / total)
        }
        other => Err(Error::NotApplicable(format!("no Plotkin form for kind {other}"))),
    }
}

/// Limit of `plotkin_rhs` as `M -> infinity` (ratio of leading coefficients).
fn plotkin_limit(k: usize, kind: PseudoDistanceKind, omega: &Rational) -> Result<Rational> {
    let one_minus = Rational::one() - omega;
    let pw = |x: &Rational, e: usize| (0..e).fold(Rational::one(), |acc, _| acc * x);
    match kind {
        PseudoDistanceKind::GeneralizedD | PseudoDistanceKind::GeneralizedDAff => {
            Ok(Rational::one() - pw(omega, k) - pw(&one_minus, k))
        }
        PseudoDistanceKind::AverageRadius => Ok((1..k)
            .map(|i| {
                int(binomial(k as i64, i as i64)) * pw(omega, i) * pw(&one_minus, k - i) * int(i.min(k - i) as i64)
            })
            .sum::<Rational>()
            / int(k as i64)),
        other => Err(Error::NotApplicable(format!("no Plotkin form for kind {other}"))),
    }
}

/// Largest `M` for which `phi <= rhs(M)` still holds.
///
/// Scans upward from `M = k` and stops at the first failure once `4k`
/// further sizes have also failed. Codes of size at most `k - 1` are always
/// admissible. Returns `None` if the scan reaches `cap` without failing.
fn plotkin_scan(
    phi: &Rational,
    k: usize,
    cap: &BigInt,
    rhs: impl Fn(&Rational) -> Result<Rational>,
) -> Result<Option<BigInt>> {
    let window = 4 * k;
    let mut best = BigInt::from(k - 1);
    let mut m = BigInt::from(k);
    let mut misses = 0usize;
    while &m <= cap {
        if *phi <= rhs(&Rational::from_integer(m.clone()))? {
            best = m.clone();
            misses = 0;
        } else {
            misses += 1;
            if misses > window {
                return Ok(Some(best));
            }
        }
        m += 1;
    }
    Ok(if misses > 0 { Some(best) } else { None })
}

fn plotkin_applicable(kind: PseudoDistanceKind) -> Result<()> {
    match kind {
        PseudoDistanceKind::GeneralizedD | PseudoDistanceKind::GeneralizedDAff | PseudoDistanceKind::AverageRadius => {
            Ok(())
        }
        other => Err(Error::NotApplicable(format!("Plotkin bound does not cover kind {other}"))),
    }
}

/// Plotkin-type bound from the average of the pseudo-distance over all tuples.
pub fn plotkin_bound(n: usize, k: usize, m: usize, kind: PseudoDistanceKind) -> Result<BoundResult> {
    check_k(k)?;
    plotkin_applicable(kind)?;
    let phi = Rational::new(BigInt::from(m), BigInt::from(n));
    let threshold = match kind {
        PseudoDistanceKind::AverageRadius => {
            Rational::new(BigInt::one(), BigInt::from(2))
                - Rational::new(binomial(k as i64 - 1, (k as i64 - 1) / 2), pow2(k))
        }
        _ => Rational::one() - Rational::new(BigInt::one(), pow2(k - 1)),
    };
    if phi < threshold {
        return Err(Error::NotApplicable(format!("m/n = {phi} below the Plotkin regime {threshold}")));
    }
    if phi == threshold {
        // the right-hand side decreases to the threshold from above
        return Err(Error::NotApplicable(format!("m/n = {phi} sits on the Plotkin threshold")));
    }
    let cap = pow2(n) * BigInt::from(k - 1);
    let found = plotkin_scan(&phi, k, &cap, |msize| plotkin_rhs(msize, k, kind, None))?
        .ok_or_else(|| Error::NotApplicable("Plotkin scan reached 2^n".into()))?;
    let mut res = BoundResult::new(to_u128(&found)?, Method::Plotkin);
    if kind == PseudoDistanceKind::GeneralizedDAff && k != 3 {
        res = res.with("hypothesis", "valid for linear codes only when k != 3");
    }
    Ok(res)
}

/// Plotkin-type bound on constant-weight-`w` codes, `None` when it gives nothing.
pub fn constant_weight_plotkin(
    n: usize,
    w: usize,
    k: usize,
    m: usize,
    kind: PseudoDistanceKind,
) -> Result<Option<BigInt>> {
    plotkin_applicable(kind)?;
    let phi = Rational::new(BigInt::from(m), BigInt::from(n));
    let omega = Rational::new(BigInt::from(w), BigInt::from(n));
    if phi <= plotkin_limit(k, kind, &omega)? {
        return Ok(None);
    }
    let cap = binomial(n as i64, w as i64);
    plotkin_scan(&phi, k, &cap, |msize| {
        if kind == PseudoDistanceKind::GeneralizedDAff && falling_aff(msize, k).is_zero() {
            // no affinely independent tuples yet: no constraint
            return Ok(int(i64::MAX));
        }
        plotkin_rhs(msize, k, kind, Some(&omega))
    })
}

/// Elias-Bassalygo: `A(n) <= min_w 2^n A_w / C(n, w)` with `A_w` from the
/// constant-weight Plotkin bound.
pub fn elias_bassalygo_bound(n: usize, k: usize, m: usize, kind: PseudoDistanceKind) -> Result<BoundResult> {
    check_k(k)?;
    plotkin_applicable(kind)?;
    let mut best: Option<(BigInt, usize, BigInt)> = None;
    for w in 0..=n {
        let Some(aw) = constant_weight_plotkin(n, w, k, m, kind)? else {
            continue;
        };
        let v = (pow2(n) * &aw).div_floor(&binomial(n as i64, w as i64));
        if best.as_ref().is_none_or(|(b, _, _)| v < *b) {
            best = Some((v, w, aw));
        }
    }
    let (v, w, aw) = best.ok_or_else(|| Error::NotApplicable("no weight yields a constant-weight bound".into()))?;
    Ok(BoundResult::new(to_u128(&v)?, Method::Elias).with("weight", w).with("constant_weight_bound", aw))
}

/// Smallest applicable classical bound. Ties go to the earlier method in
/// the order Singleton, Hamming, Plotkin, Elias.
pub fn best_classical(n: usize, k: usize, m: usize, kind: PseudoDistanceKind) -> Result<BoundResult> {
    check_k(k)?;
    let mut candidates = Vec::new();
    if matches!(
        kind,
        PseudoDistanceKind::GeneralizedD | PseudoDistanceKind::GeneralizedDAff | PseudoDistanceKind::ClassicalD1
    ) && m >= 1
        && m <= n
    {
        let s = if kind == PseudoDistanceKind::ClassicalD1 {
            let v = pow2(n - m + 1);
            BoundResult::new(to_u128(&v)?, Method::Singleton)
        } else {
            singleton_bound(n, k, m)?
        };
        candidates.push(s);
    }
    candidates.push(hamming_bound(n, k, m, kind)?);
    for attempt in [plotkin_bound(n, k, m, kind), elias_bassalygo_bound(n, k, m, kind)] {
        match attempt {
            Ok(b) => candidates.push(b),
            Err(Error::NotApplicable(_)) => {}
            Err(e) => return Err(e),
        }
    }
    // candidates are already in superscript order, min_by_key keeps the first minimum
    let best = candidates.into_iter().min_by_key(|b| b.value).expect("Hamming always applies");
    Ok(best.with("n", n).with("m", m).with("kind", kind))
}

/// Best classical bound for codes whose pairwise distances are all even.
///
/// Uses `A^+(n, r, m) = A(n - 1, r, m)`: puncturing an even code at one
/// coordinate is injective and keeps the radius of every triple.
pub fn best_classical_even(n: usize, k: usize, m: usize, kind: PseudoDistanceKind) -> Result<BoundResult> {
    if kind != PseudoDistanceKind::Radius {
        return Err(Error::NotApplicable(format!("even-code reduction only covers the radius, got {kind}")));
    }
    if n < 2 {
        return Err(Error::Domain("even-code reduction needs n >= 2".into()));
    }
    Ok(best_classical(n - 1, k, m, kind)?.with("punctured_length", n - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use PseudoDistanceKind::*;

    #[test]
    fn ball_volumes() {
        assert_eq!(ball_volume(10, 1).unwrap(), BigInt::from(11));
        assert_eq!(ball_volume(10, 0).unwrap(), BigInt::from(1));
        assert_eq!(ball_volume(10, 2).unwrap(), BigInt::from(56));
        assert!(ball_volume(10, 11).is_err());
        assert!(ball_volume(10, -1).is_err());
    }

    #[test]
    fn singleton_values() {
        assert_eq!(singleton_bound(10, 3, 8).unwrap().value, 16);
        assert_eq!(singleton_bound(11, 3, 5).unwrap().value, 256);
        assert_eq!(singleton_bound(10, 3, 10).unwrap().value, 4);
        assert!(singleton_bound(10, 3, 11).is_err());
    }

    #[test]
    fn hamming_values() {
        assert_eq!(hamming_bound(10, 3, 4, GeneralizedD).unwrap().value, 186);
        assert_eq!(hamming_bound(12, 3, 7, GeneralizedD).unwrap().value, 103);
        assert_eq!(hamming_bound(9, 3, 1, Radius).unwrap().value, 2 * 512);
    }

    #[test]
    fn plotkin_rhs_examples() {
        assert_eq!(plotkin_rhs(&int(6), 3, GeneralizedD, None).unwrap(), rat(9, 10));
        assert_eq!(plotkin_rhs(&int(4), 3, GeneralizedD, None).unwrap(), int(1));
        assert_eq!(plotkin_rhs(&int(4), 3, AverageRadius, None).unwrap(), rat(1, 3));
        assert!(plotkin_rhs(&int(2), 3, GeneralizedD, None).is_err());
        assert!(matches!(plotkin_rhs(&int(5), 3, Radius, None), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn plotkin_values() {
        assert_eq!(plotkin_bound(10, 3, 9, GeneralizedD).unwrap().value, 6);
        assert_eq!(plotkin_bound(11, 3, 10, GeneralizedD).unwrap().value, 5);
        assert_eq!(plotkin_bound(17, 3, 16, GeneralizedD).unwrap().value, 4);
        assert!(matches!(plotkin_bound(10, 3, 4, GeneralizedD), Err(Error::NotApplicable(_))));
        assert!(matches!(plotkin_bound(20, 3, 15, GeneralizedD), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn elias_values() {
        assert_eq!(elias_bassalygo_bound(17, 3, 6, GeneralizedD).unwrap().value, 7710);
        assert_eq!(elias_bassalygo_bound(18, 3, 9, GeneralizedD).unwrap().value, 1927);
    }

    #[test]
    fn full_weight_contributes_trivially() {
        // a single-word constant-weight code: A_n <= 1 gives 2^n
        let aw = constant_weight_plotkin(10, 10, 3, 9, GeneralizedD).unwrap();
        assert!(aw.is_none() || aw.unwrap() <= BigInt::from(2));
    }

    #[test]
    fn best_classical_examples() {
        let b = best_classical(10, 3, 4, GeneralizedD).unwrap();
        assert_eq!((b.value, b.method), (186, Method::Hamming));
        let b = best_classical(14, 3, 5, GeneralizedD).unwrap();
        assert_eq!((b.value, b.method), (2048, Method::Singleton));
        let b = best_classical(19, 3, 13, GeneralizedD).unwrap();
        assert_eq!((b.value, b.method), (208, Method::Hamming));
        // Singleton and Plotkin tie at 16
        let b = best_classical(10, 3, 8, GeneralizedD).unwrap();
        assert_eq!((b.value, b.method), (16, Method::Singleton));
    }

    #[test]
    fn even_radius_uses_punctured_length() {
        assert_eq!(best_classical_even(10, 3, 2, Radius).unwrap().value, 102);
        assert_eq!(best_classical_even(11, 3, 4, Radius).unwrap().value, 11);
        assert!(best_classical_even(11, 3, 4, GeneralizedD).is_err());
    }

    #[test]
    fn kind_tags_round_trip() {
        for k in PseudoDistanceKind::ALL {
            assert_eq!(k.tag().parse::<PseudoDistanceKind>().unwrap(), k);
        }
        assert!("x".parse::<PseudoDistanceKind>().is_err());
    }
}
