//! Exact univariate polynomials over the rationals, binary Krawtchouk
//! polynomials and Hahn polynomials built by Gram-Schmidt.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: impl Into<BigInt>) -> Rational {
    Rational::from_integer(v.into())
}

/// Binomial coefficient `C(n, k)`; zero when `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator or denominator too wide for the direct path
        let shift = r.numer().bits().max(r.denom().bits()) as i64 - 1000;
        let num = (r.numer() >> shift.max(0) as usize).to_f64().unwrap_or(f64::NAN);
        let den = (r.denom() >> shift.max(0) as usize).to_f64().unwrap_or(f64::NAN);
        num / den
    })
}

/// Dense polynomial with exact rational coefficients in ascending degree.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![] }
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Polynomial::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, x: i64) -> Rational {
        self.eval(&int(x))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Polynomial::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Falling-factorial binomial `C(x - shift, j)` as a polynomial in `x`,
    /// with `sign = -1` giving `C(shift - x, j)`.
    fn binomial_poly(shift: i64, sign: i64, j: usize) -> Self {
        let mut p = Polynomial::constant(Rational::one());
        for i in 0..j as i64 {
            // factor (sign*x - shift - i)
            let f = Polynomial::new(vec![int(-shift - i), int(sign)]);
            p = &p * &f;
        }
        let fact: BigInt = (1..=j as i64).map(BigInt::from).product();
        p.scale(&Rational::new(BigInt::one(), fact))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})x"),
                _ => format!("({c})x^{i}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Rational::zero();
        Polynomial::new(
            (0..len).map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero)).collect(),
        )
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &rhs.scale(&-Rational::one())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

/// Binary Krawtchouk polynomial `K_k^n(x) = sum_j (-1)^j C(x, j) C(n - x, k - j)`.
pub fn krawtchouk(n: usize, k: usize) -> Result<Polynomial> {
    if k > n {
        return Err(Error::Domain(format!("Krawtchouk degree {k} exceeds n = {n}")));
    }
    let mut acc = Polynomial::zero();
    for j in 0..=k {
        let term = &Polynomial::binomial_poly(0, 1, j) * &Polynomial::binomial_poly(-(n as i64), -1, k - j);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    Ok(acc)
}

/// Integer value `K_k^n(i)` by direct summation.
pub fn krawtchouk_value(n: usize, k: usize, i: usize) -> BigInt {
    let (n, k, i) = (n as i64, k as i64, i as i64);
    (0..=k)
        .map(|j| {
            let t = binomial(i, j) * binomial(n - i, k - j);
            if j % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .sum()
}

fn check_hahn_params(n: usize, s: usize, t: usize) -> Result<()> {
    if s > t || t > n {
        return Err(Error::Domain(format!("Hahn parameters need 0 <= s <= t <= n, got n={n} s={s} t={t}")));
    }
    Ok(())
}

/// Hahn weight `w(n, s, t; i) = C(s, i) C(n - s, t - s + i)`.
pub fn hahn_weight(n: usize, s: usize, t: usize, i: usize) -> Result<BigInt> {
    check_hahn_params(n, s, t)?;
    if i > s {
        return Err(Error::Domain(format!("Hahn weight index {i} exceeds s = {s}")));
    }
    let (n, s, t, i) = (n as i64, s as i64, t as i64, i as i64);
    Ok(binomial(s, i) * binomial(n - s, t - s + i))
}

/// The Hahn polynomials `Q_0 .. Q_{min(s, n-t)}` for one parameter triple.
#[derive(Clone, Debug)]
pub struct HahnFamily {
    n: usize,
    s: usize,
    t: usize,
    polys: Vec<Polynomial>,
}

impl HahnFamily {
    pub fn params(&self) -> (usize, usize, usize) {
        (self.n, self.s, self.t)
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    /// `Q_k`, or `None` when `k > min(s, n - t)`.
    pub fn get(&self, k: usize) -> Option<&Polynomial> {
        self.polys.get(k)
    }

    /// Weighted inner product over the support `{0..s}`.
    pub fn inner(&self, p: &Polynomial, q: &Polynomial) -> Rational {
        weighted_inner(&self.weights(), p, q)
    }

    pub fn weights(&self) -> Vec<BigInt> {
        (0..=self.s).map(|i| hahn_weight(self.n, self.s, self.t, i).expect("validated parameters")).collect()
    }
}

fn weighted_inner(weights: &[BigInt], p: &Polynomial, q: &Polynomial) -> Rational {
    weights
        .iter()
        .enumerate()
        .filter(|(_, w)| !w.is_zero())
        .map(|(i, w)| int(w.clone()) * p.eval_int(i as i64) * q.eval_int(i as i64))
        .sum()
}

pub fn hahn_family(n: usize, s: usize, t: usize) -> Result<HahnFamily> {
    check_hahn_params(n, s, t)?;
    let top = s.min(n - t);
    let weights: Vec<BigInt> = (0..=s).map(|i| hahn_weight(n, s, t, i)).collect::<Result<_>>()?;
    let mut polys: Vec<Polynomial> = Vec::with_capacity(top + 1);
    let mut norms: Vec<Rational> = Vec::with_capacity(top + 1);
    let mut monomial = Polynomial::constant(Rational::one());
    for k in 0..=top {
        let mut p = monomial.clone();
        for (q, norm) in polys.iter().zip(&norms) {
            let c = weighted_inner(&weights, &monomial, q) / norm;
            p = &p - &q.scale(&c);
        }
        let at_zero = p.eval_int(0);
        if at_zero.is_zero() {
            return Err(Error::Domain(format!("Gram-Schmidt produced Q_{k}(0) = 0 for n={n} s={s} t={t}")));
        }
        let q = p.scale(&at_zero.recip());
        let norm = weighted_inner(&weights, &q, &q);
        if !norm.is_positive() {
            return Err(Error::Domain(format!("vanishing Gram-Schmidt pivot at k={k}")));
        }
        polys.push(q);
        norms.push(norm);
        monomial = &monomial * &Polynomial::x();
    }
    Ok(HahnFamily { n, s, t, polys })
}

/// Memoizes Hahn families for one `n`; owned by a single builder.
#[derive(Default)]
pub struct HahnTable {
    families: HashMap<(usize, usize, usize), HahnFamily>,
}

impl HahnTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn family(&mut self, n: usize, s: usize, t: usize) -> Result<&HahnFamily> {
        if let std::collections::hash_map::Entry::Vacant(e) = self.families.entry((n, s, t)) {
            let fam = hahn_family(n, s, t)?;
            e.insert(fam);
        }
        Ok(&self.families[&(n, s, t)])
    }
}

/// `gcd`-reduced check used by tests that want an integer out of a rational.
pub fn as_integer(r: &Rational) -> Option<BigInt> {
    r.denom().is_one().then(|| r.numer().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn krawtchouk_small_values() {
        let k0 = krawtchouk(4, 0).unwrap();
        assert_eq!(k0, Polynomial::constant(Rational::one()));
        let k1 = krawtchouk(4, 1).unwrap();
        assert_eq!(k1.eval_int(0), int(4));
        for i in 0..=4 {
            assert_eq!(k1.eval_int(i), int(4 - 2 * i));
        }
        assert!(krawtchouk(3, 4).is_err());
    }

    #[test]
    fn krawtchouk_polynomial_matches_direct_sum() {
        for n in 0..=9 {
            for k in 0..=n {
                let p = krawtchouk(n, k).unwrap();
                assert_eq!(p.degree(), Some(k));
                for i in 0..=n {
                    assert_eq!(p.eval_int(i as i64), int(krawtchouk_value(n, k, i)), "n={n} k={k} i={i}");
                }
            }
        }
    }

    #[test]
    fn krawtchouk_binomial_sum_vanishes() {
        let n = 6;
        for k in 1..=n {
            let s: BigInt = (0..=n).map(|i| binomial(n as i64, i as i64) * krawtchouk_value(n, k, i)).sum();
            assert!(s.is_zero(), "k={k}");
        }
    }

    #[test]
    fn hahn_weight_examples() {
        assert_eq!(hahn_weight(4, 1, 1, 0).unwrap(), BigInt::from(1));
        assert_eq!(hahn_weight(6, 2, 3, 1).unwrap(), BigInt::from(12));
        assert!(hahn_weight(6, 4, 3, 0).is_err());
        assert!(hahn_weight(6, 2, 3, 3).is_err());
    }

    #[test]
    fn hahn_weight_counts_words() {
        // fixed x of weight s; count y of weight t with |x & y| = s - i
        let (n, s, t) = (6usize, 2usize, 3usize);
        let x = 0b11u32;
        let mut counts = vec![0u32; s + 1];
        for y in 0u32..(1 << n) {
            if y.count_ones() as usize == t {
                let i = s - (x & y).count_ones() as usize;
                counts[i] += 1;
            }
        }
        for (i, c) in counts.iter().enumerate() {
            assert_eq!(hahn_weight(n, s, t, i).unwrap(), BigInt::from(*c));
        }
        let total: u32 = counts.iter().sum();
        assert_eq!(total, 20);
    }

    #[test]
    fn hahn_small_family() {
        let fam = hahn_family(4, 1, 1).unwrap();
        assert_eq!(fam.polys().len(), 2);
        assert_eq!(fam.get(0).unwrap(), &Polynomial::constant(Rational::one()));
        let q1 = fam.get(1).unwrap();
        assert_eq!(q1.eval_int(0), int(1));
        assert_eq!(q1.eval_int(1), rat(-1, 3));
    }

    #[test]
    fn hahn_family_is_orthogonal() {
        let fam = hahn_family(8, 3, 4).unwrap();
        let ps = fam.polys();
        assert_eq!(ps.len(), 4);
        for (a, p) in ps.iter().enumerate() {
            for (b, q) in ps.iter().enumerate() {
                let v = fam.inner(p, q);
                assert_eq!(v.is_zero(), a != b, "({a},{b})");
            }
        }
    }

    #[test]
    fn hahn_rejects_bad_params() {
        assert!(hahn_family(5, 3, 2).is_err());
        assert!(hahn_family(5, 2, 6).is_err());
    }

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(5, -1), BigInt::zero());
        assert_eq!(binomial(5, 6), BigInt::zero());
        assert_eq!(binomial(64, 32).to_string(), "1832624140942590534");
    }

    #[test]
    fn to_f64_wide_values() {
        let big = Rational::new(BigInt::from(3) << 2000usize, BigInt::from(2) << 2000usize);
        assert!((to_f64(&big) - 1.5).abs() < 1e-12);
    }
}
