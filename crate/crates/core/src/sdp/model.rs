//! The triple-distance semidefinite program.
//!
//! Variables are indexed by distance triples `(a, b, c)` with
//! `a = d(y, z)`, `b = d(x, z)`, `c = d(x, y)`, folded into classes under
//! permutation of the three entries. Block `k` of the program is built from
//! the Hahn-polynomial entry formula for the isotypic matrices `E_k`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::classical::PseudoDistanceKind;
use crate::error::{Error, Result};
use crate::hamming::Word;
use crate::poly::{binomial, int, HahnTable, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TripleProfile {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl TripleProfile {
    pub fn new(a: usize, b: usize, c: usize) -> Self {
        TripleProfile { a, b, c }
    }

    /// Membership in the realizable-profile set: even sum, sum at most `2n`,
    /// triangle inequalities, entries at most `n`.
    pub fn in_omega(&self, n: usize) -> bool {
        let TripleProfile { a, b, c } = *self;
        a <= n
            && b <= n
            && c <= n
            && (a + b + c) % 2 == 0
            && a + b + c <= 2 * n
            && c <= a + b
            && b <= a + c
            && a <= b + c
    }

    pub fn sorted(&self) -> TripleProfile {
        let mut v = [self.a, self.b, self.c];
        v.sort_unstable();
        TripleProfile::new(v[0], v[1], v[2])
    }

    /// Distinct reorderings of the three entries.
    pub fn permutations(&self) -> Vec<TripleProfile> {
        let TripleProfile { a, b, c } = *self;
        let all = [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)];
        let set: BTreeSet<TripleProfile> = all.iter().map(|&(a, b, c)| TripleProfile::new(a, b, c)).collect();
        set.into_iter().collect()
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == 0 || self.b == 0 || self.c == 0
    }
}

/// Orbit of a profile under permutations of its entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryClass {
    representative: TripleProfile,
    members: Vec<TripleProfile>,
}

impl SymmetryClass {
    pub fn of(p: TripleProfile) -> Self {
        let rep = p.sorted();
        SymmetryClass { representative: rep, members: rep.permutations() }
    }

    pub fn representative(&self) -> TripleProfile {
        self.representative
    }

    pub fn members(&self) -> &[TripleProfile] {
        &self.members
    }
}

/// All classes of realizable profiles, ordered by representative.
pub fn triple_profiles(n: usize) -> Vec<SymmetryClass> {
    let mut out = Vec::new();
    for a in 0..=n {
        for b in a..=n {
            for c in b..=n {
                let p = TripleProfile::new(a, b, c);
                if p.in_omega(n) {
                    out.push(SymmetryClass::of(p));
                }
            }
        }
    }
    out
}

/// Number of `z` with `d(x, z) = b` and `d(y, z) = a` for a fixed pair at distance `c`.
pub fn t_count(n: usize, p: TripleProfile) -> BigInt {
    let TripleProfile { a, b, c } = p;
    let twice_i = a as i64 - b as i64 + c as i64;
    if twice_i < 0 || twice_i % 2 != 0 || c > n {
        return BigInt::zero();
    }
    let i = twice_i / 2;
    binomial(c as i64, i) * binomial((n - c) as i64, a as i64 - i)
}

/// Entry `E_{k,s,t}(x, y)` for `wt(x) = s`, `wt(y) = t`, `|x & y| = overlap`.
///
/// The closed form holds for `s <= t`; for `s > t` the entry equals
/// `E_{k,t,s}(y, x)`.
pub fn e_entry(n: usize, k: usize, s: usize, t: usize, overlap: usize, hahn: &mut HahnTable) -> Result<Rational> {
    let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
    if k > lo || hi + k > n {
        return Err(Error::Domain(format!("E entry needs k <= s,t <= n-k, got n={n} k={k} s={s} t={t}")));
    }
    if overlap > lo || lo + hi > n + overlap {
        return Err(Error::Domain(format!("overlap {overlap} impossible for weights {s}, {t} in H_{n}")));
    }
    let fam = hahn.family(n, lo, hi)?;
    let q = fam
        .get(k)
        .ok_or_else(|| Error::Domain(format!("Q_{k} missing for n={n} s={lo} t={hi}")))?
        .eval_int((lo - overlap) as i64);
    let (n_, k_, s_, t_) = (n as i64, k as i64, lo as i64, hi as i64);
    let coeff = Rational::new(
        (BigInt::one() << n) * binomial(t_ - k_, s_ - k_) * binomial(n_ - 2 * k_, t_ - k_),
        binomial(n_, t_) * binomial(t_, s_),
    );
    Ok(coeff * q)
}

/// Sparse symmetric rational matrix, storing entries with `row <= col`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseSym {
    pub size: usize,
    pub entries: BTreeMap<(usize, usize), Rational>,
}

impl SparseSym {
    pub fn new(size: usize) -> Self {
        SparseSym { size, entries: BTreeMap::new() }
    }

    /// Adds `v` at `(i, j)`; off-diagonal contributions are folded into the
    /// upper triangle, so adding at `(i, j)` and `(j, i)` yields `M_ij = M_ji = v`
    /// after [`SparseSym::finish`] halves the off-diagonal sums.
    fn add_raw(&mut self, i: usize, j: usize, v: &Rational) {
        let key = if i <= j { (i, j) } else { (j, i) };
        *self.entries.entry(key).or_insert_with(Rational::zero) += v;
    }

    /// Averages the two triangles, i.e. returns `(T + T^T) / 2` of the raw sum.
    fn finish(mut self) -> Self {
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        for ((i, j), v) in self.entries.iter_mut() {
            if i != j {
                *v *= &half;
            }
        }
        self.entries.retain(|_, v| !v.is_zero());
        self
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.entries.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut m = vec![vec![Rational::zero(); self.size]; self.size];
        for (&(i, j), v) in &self.entries {
            m[i][j] = v.clone();
            m[j][i] = v.clone();
        }
        m
    }
}

/// `T_k(a, b, c)`: a single entry at local position `(b - k, a - k)` holding
/// `E_{k,b,a}` at overlap `(a + b - c) / 2`; empty when `a` or `b` lies outside `k..=n-k`.
pub fn t_block_contribution(
    n: usize,
    k: usize,
    p: TripleProfile,
    hahn: &mut HahnTable,
) -> Result<Option<(usize, usize, Rational)>> {
    let TripleProfile { a, b, c } = p;
    if !p.in_omega(n) {
        return Err(Error::Domain(format!("profile {p:?} outside Omega for n={n}")));
    }
    if a < k || b < k || a + k > n || b + k > n {
        return Ok(None);
    }
    let overlap = (a + b - c) / 2;
    let v = e_entry(n, k, b, a, overlap, hahn)?;
    Ok(Some((b - k, a - k, v)))
}

/// Profiles forced to zero by the minimum pseudo-distance hypothesis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForbiddenSet {
    pub kind: PseudoDistanceKind,
    pub m: usize,
    pub even_only: bool,
}

impl ForbiddenSet {
    pub fn new(kind: PseudoDistanceKind, m: usize, even_only: bool) -> Self {
        ForbiddenSet { kind, m, even_only }
    }

    pub fn contains(&self, p: &TripleProfile) -> bool {
        let TripleProfile { a, b, c } = *p;
        if self.even_only && (a % 2 == 1 || b % 2 == 1 || c % 2 == 1) {
            return true;
        }
        let m = self.m;
        match self.kind {
            PseudoDistanceKind::ClassicalD1 => [a, b, c].iter().any(|&x| x >= 1 && x < m),
            _ if p.is_degenerate() => false,
            PseudoDistanceKind::GeneralizedD | PseudoDistanceKind::GeneralizedDAff => a + b + c + 2 <= 2 * m,
            PseudoDistanceKind::AverageRadius => a + b + c < 6 * m,
            PseudoDistanceKind::Radius => a.div_ceil(2).max(b.div_ceil(2)).max(c.div_ceil(2)) < m,
        }
    }
}

/// Which of the two PSD families a block belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockFamily {
    /// `sum T_k(a,b,c) x_{a,b,c}`: third point inside the code.
    Inside,
    /// `sum T_k(a,b,c) (t(a,b,c) x_{0,c,c} - x_{a,b,c})`: third point outside.
    Outside,
}

/// One PSD block: `constant + sum_i coeffs[i] x_i >= 0`.
#[derive(Clone, Debug)]
pub struct SdpBlock {
    pub k: usize,
    pub family: BlockFamily,
    pub size: usize,
    pub constant: SparseSym,
    pub coeffs: BTreeMap<usize, SparseSym>,
}

/// `constant + sum coeffs x >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    pub constant: Rational,
    pub coeffs: Vec<(usize, Rational)>,
    pub label: String,
}

/// The assembled program: maximize `objective_constant + sum objective_i x_i`.
#[derive(Clone, Debug)]
pub struct SdpProblem {
    pub n: usize,
    pub forbidden: ForbiddenSet,
    pub variables: Vec<SymmetryClass>,
    pub blocks: Vec<SdpBlock>,
    pub linear: Vec<LinearConstraint>,
    pub objective: Vec<Rational>,
    pub objective_constant: Rational,
}

impl SdpProblem {
    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn variable_index(&self, rep: TripleProfile) -> Option<usize> {
        self.variables.binary_search_by(|c| c.representative.cmp(&rep)).ok()
    }
}

/// Value of `x_p` in terms of the variables: fixed one, a variable, or fixed zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    One,
    Var(usize),
    Zero,
}

fn slot_of(index: &HashMap<TripleProfile, usize>, p: TripleProfile) -> Slot {
    let rep = p.sorted();
    if rep == TripleProfile::new(0, 0, 0) {
        Slot::One
    } else {
        index.get(&rep).map_or(Slot::Zero, |&i| Slot::Var(i))
    }
}

/// Classes left after removing forbidden ones and those forced to zero by
/// `x_{a,b,c} <= t(a,b,c) x_{0,c,c}` with a zero count or a zero pair variable.
fn surviving_classes(n: usize, forbidden: &ForbiddenSet) -> Vec<SymmetryClass> {
    let zero = TripleProfile::new(0, 0, 0);
    let mut alive: BTreeMap<TripleProfile, SymmetryClass> = triple_profiles(n)
        .into_iter()
        .filter(|cl| cl.representative != zero && !forbidden.contains(&cl.representative))
        .map(|cl| (cl.representative, cl))
        .collect();
    loop {
        let dead: Vec<TripleProfile> = alive
            .values()
            .filter(|cl| {
                cl.members.iter().any(|p| {
                    let pair = TripleProfile::new(0, p.c, p.c);
                    t_count(n, *p).is_zero() || (p.c != 0 && !alive.contains_key(&pair))
                })
            })
            .map(|cl| cl.representative)
            .collect();
        if dead.is_empty() {
            break;
        }
        for d in dead {
            alive.remove(&d);
        }
    }
    alive.into_values().collect()
}

/// Assembles the program for codes in `H_n` with minimum pseudo-distance `m`.
pub fn build_sdp(n: usize, kind: PseudoDistanceKind, m: usize, even_only: bool) -> Result<SdpProblem> {
    if n == 0 || n > 64 {
        return Err(Error::Domain(format!("n = {n} outside 1..=64")));
    }
    if m < 1 || m > n {
        return Err(Error::Domain(format!("m = {m} outside 1..={n}")));
    }
    if kind == PseudoDistanceKind::GeneralizedDAff {
        return Err(Error::NotApplicable("no triple program for the affine generalized distance".into()));
    }
    let forbidden = ForbiddenSet::new(kind, m, even_only);
    let variables = surviving_classes(n, &forbidden);
    let index: HashMap<TripleProfile, usize> =
        variables.iter().enumerate().map(|(i, c)| (c.representative, i)).collect();

    let mut linear = Vec::new();
    for (i, cl) in variables.iter().enumerate() {
        linear.push(LinearConstraint {
            constant: Rational::zero(),
            coeffs: vec![(i, Rational::one())],
            label: format!("nonneg {:?}", cl.representative),
        });
    }
    for (i, cl) in variables.iter().enumerate() {
        let mut seen = BTreeSet::new();
        for p in &cl.members {
            let t = t_count(n, *p);
            let pair = TripleProfile::new(0, p.c, p.c);
            let slot = slot_of(&index, pair);
            if !seen.insert((format!("{slot:?}"), t.clone())) {
                continue;
            }
            let (constant, mut coeffs) = match slot {
                Slot::One => (int(t.clone()), vec![]),
                Slot::Var(j) => (Rational::zero(), vec![(j, int(t.clone()))]),
                Slot::Zero => unreachable!("eliminated while filtering classes"),
            };
            if let Some(e) = coeffs.iter_mut().find(|(j, _)| *j == i) {
                e.1 -= Rational::one();
            } else {
                coeffs.push((i, -Rational::one()));
            }
            coeffs.retain(|(_, v)| !v.is_zero());
            coeffs.sort_by_key(|(j, _)| *j);
            linear.push(LinearConstraint { constant, coeffs, label: format!("count {p:?}") });
        }
    }

    let mut hahn = HahnTable::new();
    let omega: Vec<TripleProfile> = triple_profiles(n).iter().flat_map(|cl| cl.members.clone()).collect();
    let mut blocks = Vec::new();
    for family in [BlockFamily::Inside, BlockFamily::Outside] {
        for k in 0..=n / 2 {
            let size = n - 2 * k + 1;
            let mut constant = SparseSym::new(size);
            let mut coeffs: BTreeMap<usize, SparseSym> = BTreeMap::new();
            for &p in &omega {
                let Some((r, c, v)) = t_block_contribution(n, k, p, &mut hahn)? else {
                    continue;
                };
                let mut add = |slot: Slot, w: &Rational| match slot {
                    Slot::One => constant.add_raw(r, c, w),
                    Slot::Var(j) => coeffs.entry(j).or_insert_with(|| SparseSym::new(size)).add_raw(r, c, w),
                    Slot::Zero => {}
                };
                let own = slot_of(&index, p);
                match family {
                    BlockFamily::Inside => add(own, &v),
                    BlockFamily::Outside => {
                        let t = t_count(n, p);
                        if !t.is_zero() {
                            add(slot_of(&index, TripleProfile::new(0, p.c, p.c)), &(&v * int(t)));
                        }
                        add(own, &-v);
                    }
                }
            }
            let coeffs: BTreeMap<usize, SparseSym> =
                coeffs.into_iter().map(|(j, mtx)| (j, mtx.finish())).filter(|(_, mtx)| !mtx.is_zero()).collect();
            blocks.push(SdpBlock { k, family, size, constant: constant.finish(), coeffs });
        }
    }

    let objective = variables
        .iter()
        .map(|cl| {
            let r = cl.representative;
            if r.a == 0 && r.b == r.c {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect();
    Ok(SdpProblem { n, forbidden, variables, blocks, linear, objective, objective_constant: Rational::one() })
}

/// Per-profile triple distribution `x_{a,b,c} = |{(x,y,z) in C^3 : ...}| / |C|`,
/// keyed by class representative (all members of a class share the value).
pub fn code_distribution(code: &[Word]) -> Result<BTreeMap<TripleProfile, Rational>> {
    let first = code.first().ok_or_else(|| Error::Input("empty code".into()))?;
    let n = first.len();
    let distinct: BTreeSet<u64> = code.iter().map(|w| w.bits()).collect();
    if distinct.len() != code.len() {
        return Err(Error::Input("code contains repeated words".into()));
    }
    if code.iter().any(|w| w.len() != n) {
        return Err(Error::Dimension("code mixes word lengths".into()));
    }
    let mut counts: BTreeMap<TripleProfile, u64> = BTreeMap::new();
    for x in code {
        for y in code {
            let c = x.distance(y)? as usize;
            for z in code {
                let a = y.distance(z)? as usize;
                let b = x.distance(z)? as usize;
                *counts.entry(TripleProfile::new(a, b, c)).or_insert(0) += 1;
            }
        }
    }
    let size = int(code.len() as i64);
    let mut out = BTreeMap::new();
    for (p, cnt) in counts {
        let v = int(cnt as i64) / &size;
        if let Some(prev) = out.insert(p.sorted(), v.clone()) {
            debug_assert_eq!(prev, v, "class members disagree");
        }
    }
    Ok(out)
}

/// Outcome of substituting a concrete distribution into a program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityReport {
    /// Nonzero profiles that are not variables of the program.
    pub missing: Vec<TripleProfile>,
    pub violated_linear: Vec<String>,
    pub non_psd_blocks: Vec<(usize, BlockFamily)>,
    pub objective: Rational,
}

impl FeasibilityReport {
    pub fn feasible(&self) -> bool {
        self.missing.is_empty() && self.violated_linear.is_empty() && self.non_psd_blocks.is_empty()
    }
}

/// Variable vector for a distribution, plus the nonzero profiles with no variable.
pub fn assignment(p: &SdpProblem, dist: &BTreeMap<TripleProfile, Rational>) -> (Vec<Rational>, Vec<TripleProfile>) {
    let mut values = vec![Rational::zero(); p.num_vars()];
    let mut missing = Vec::new();
    for (rep, v) in dist {
        if *rep == TripleProfile::new(0, 0, 0) || v.is_zero() {
            continue;
        }
        match p.variable_index(*rep) {
            Some(i) => values[i] = v.clone(),
            None => missing.push(*rep),
        }
    }
    (values, missing)
}

/// Evaluates `constant + sum coeffs x` for a block.
pub fn block_value(block: &SdpBlock, x: &[Rational]) -> Vec<Vec<Rational>> {
    let mut dense = block.constant.to_dense();
    for (&j, mtx) in &block.coeffs {
        if x[j].is_zero() {
            continue;
        }
        for (&(r, c), v) in &mtx.entries {
            let add = v * &x[j];
            dense[r][c] += &add;
            if r != c {
                dense[c][r] += &add;
            }
        }
    }
    dense
}

/// Checks every constraint of `p` exactly at the given distribution.
pub fn check_distribution(p: &SdpProblem, dist: &BTreeMap<TripleProfile, Rational>) -> FeasibilityReport {
    let (x, missing) = assignment(p, dist);
    let one = dist.get(&TripleProfile::new(0, 0, 0)).cloned().unwrap_or_else(Rational::zero);
    let mut violated_linear = Vec::new();
    if !one.is_one() {
        violated_linear.push(format!("x_000 = {one}, expected 1"));
    }
    for lc in &p.linear {
        let v: Rational = lc.constant.clone() + lc.coeffs.iter().map(|(j, c)| c * &x[*j]).sum::<Rational>();
        if v.is_negative() {
            violated_linear.push(lc.label.clone());
        }
    }
    let non_psd_blocks =
        p.blocks.iter().filter(|b| !is_psd_exact(block_value(b, &x))).map(|b| (b.k, b.family)).collect();
    let objective = p.objective_constant.clone() + p.objective.iter().zip(&x).map(|(c, v)| c * v).sum::<Rational>();
    FeasibilityReport { missing, violated_linear, non_psd_blocks, objective }
}

/// Exact positive-semidefiniteness test by symmetric elimination on positive pivots.
pub fn is_psd_exact(mut m: Vec<Vec<Rational>>) -> bool {
    let size = m.len();
    let mut active: Vec<usize> = (0..size).collect();
    while !active.is_empty() {
        if active.iter().any(|&i| m[i][i].is_negative()) {
            return false;
        }
        let Some(pos) = active.iter().position(|&i| m[i][i].is_positive()) else {
            // all remaining diagonal entries vanish: the block must be zero
            return active.iter().all(|&i| active.iter().all(|&j| m[i][j].is_zero()));
        };
        let piv = active.swap_remove(pos);
        let d = m[piv][piv].clone();
        let row: Vec<Rational> = (0..size).map(|j| m[piv][j].clone()).collect();
        for &i in &active {
            if row[i].is_zero() {
                continue;
            }
            let f = &row[i] / &d;
            for &j in &active {
                if !row[j].is_zero() {
                    let delta = &f * &row[j];
                    m[i][j] -= delta;
                }
            }
        }
    }
    true
}

/// `sum_{(c, c') in C^2} E_k(c, c')` as a dense rational matrix indexed by weights `k..=n-k`.
pub fn code_e_matrix(n: usize, k: usize, code: &[Word], hahn: &mut HahnTable) -> Result<Vec<Vec<Rational>>> {
    if 2 * k > n {
        return Err(Error::Domain(format!("block index {k} exceeds n/2 for n={n}")));
    }
    let size = n - 2 * k + 1;
    let mut m = vec![vec![Rational::zero(); size]; size];
    for x in code {
        for y in code {
            let (s, t) = (x.weight() as usize, y.weight() as usize);
            if s < k || t < k || s + k > n || t + k > n {
                continue;
            }
            let overlap = (x.bits() & y.bits()).count_ones() as usize;
            m[s - k][t - k] += e_entry(n, k, s, t, overlap, hahn)?;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use PseudoDistanceKind::*;

    fn tp(a: usize, b: usize, c: usize) -> TripleProfile {
        TripleProfile::new(a, b, c)
    }

    #[test]
    fn profiles_of_length_one() {
        let reps: Vec<_> = triple_profiles(1).iter().map(|c| c.representative()).collect();
        assert_eq!(reps, vec![tp(0, 0, 0), tp(0, 1, 1)]);
        for n in 1..8 {
            assert!(triple_profiles(n).iter().all(|c| c.representative() != tp(1, 1, 1)));
            assert!(triple_profiles(n).iter().all(|c| c.representative() != tp(0, 1, 2)));
        }
    }

    #[test]
    fn class_members() {
        assert_eq!(SymmetryClass::of(tp(2, 2, 2)).members().len(), 1);
        assert_eq!(SymmetryClass::of(tp(0, 2, 2)).members().len(), 3);
        assert_eq!(SymmetryClass::of(tp(2, 4, 6)).members().len(), 6);
    }

    #[test]
    fn t_count_examples() {
        assert_eq!(t_count(4, tp(2, 2, 2)), BigInt::from(4));
        assert_eq!(t_count(7, tp(3, 0, 3)), BigInt::from(1));
        assert_eq!(t_count(3, tp(1, 1, 2)), BigInt::from(2));
    }

    #[test]
    fn t_count_matches_enumeration() {
        let n = 6;
        let x = 0u32;
        for y in [0u32, 0b1, 0b11, 0b111, 0b1111] {
            let c = (x ^ y).count_ones() as usize;
            let mut counts: BTreeMap<(usize, usize), u64> = BTreeMap::new();
            for z in 0u32..(1 << n) {
                let a = (y ^ z).count_ones() as usize;
                let b = (x ^ z).count_ones() as usize;
                *counts.entry((a, b)).or_insert(0) += 1;
            }
            for a in 0..=n {
                for b in 0..=n {
                    let p = tp(a, b, c);
                    let want = counts.get(&(a, b)).copied().unwrap_or(0);
                    assert_eq!(t_count(n, p), BigInt::from(want), "{p:?}");
                }
            }
        }
    }

    #[test]
    fn e_entry_degree_zero() {
        let mut h = HahnTable::new();
        for n in 1..7usize {
            for s in 0..=n {
                assert_eq!(e_entry(n, 0, s, s, s, &mut h).unwrap(), int(BigInt::one() << n));
            }
        }
        // independent of overlap when k = 0
        let a = e_entry(6, 0, 2, 3, 0, &mut h).unwrap();
        let b = e_entry(6, 0, 2, 3, 2, &mut h).unwrap();
        assert_eq!(a, b);
        assert!(e_entry(4, 2, 1, 2, 0, &mut h).is_err());
    }

    #[test]
    fn e_matrix_of_small_code_is_psd() {
        let mut h = HahnTable::new();
        let code: Vec<Word> = ["0000", "1100", "0011"].iter().map(|s| Word::parse(s).unwrap()).collect();
        for k in 0..=2 {
            let m = code_e_matrix(4, k, &code, &mut h).unwrap();
            assert!(is_psd_exact(m), "k={k}");
        }
    }

    #[test]
    fn t_block_examples() {
        let mut h = HahnTable::new();
        let (r, c, v) = t_block_contribution(5, 0, tp(0, 0, 0), &mut h).unwrap().unwrap();
        assert_eq!((r, c, v), (0, 0, int(32)));
        assert!(t_block_contribution(5, 1, tp(0, 0, 0), &mut h).unwrap().is_none());
        assert!(t_block_contribution(6, 2, tp(3, 1, 2), &mut h).unwrap().is_none());
        let (r, c, v) = t_block_contribution(4, 1, tp(2, 2, 2), &mut h).unwrap().unwrap();
        assert_eq!((r, c), (1, 1));
        assert_eq!(v, e_entry(4, 1, 2, 2, 1, &mut h).unwrap());
    }

    #[test]
    fn forbidden_examples() {
        let d4 = ForbiddenSet::new(GeneralizedD, 4, false);
        assert!(d4.contains(&tp(2, 2, 2)));
        assert!(!d4.contains(&tp(2, 2, 4)));
        let r2 = ForbiddenSet::new(Radius, 2, false);
        assert!(r2.contains(&tp(2, 2, 2)));
        assert!(!r2.contains(&tp(2, 2, 4)));
        for f in [d4, r2, ForbiddenSet::new(AverageRadius, 3, false)] {
            for c in 0..10 {
                assert!(!f.contains(&tp(0, c, c)));
            }
        }
        let d1 = ForbiddenSet::new(ClassicalD1, 3, false);
        assert!(d1.contains(&tp(0, 2, 2)));
        assert!(!d1.contains(&tp(0, 3, 3)));
        let even = ForbiddenSet::new(Radius, 1, true);
        assert!(even.contains(&tp(1, 1, 2)));
        assert!(!even.contains(&tp(2, 2, 2)));
    }

    #[test]
    fn coefficient_matrices_are_symmetric_and_sized() {
        let p = build_sdp(6, GeneralizedD, 3, false).unwrap();
        assert_eq!(p.blocks.len(), 2 * (6 / 2 + 1));
        for b in &p.blocks {
            assert_eq!(b.size, 6 - 2 * b.k + 1);
            for mtx in b.coeffs.values() {
                assert!(mtx.entries.keys().all(|&(r, c)| r <= c && c < b.size));
            }
        }
        let total: usize = p.blocks.iter().filter(|b| b.family == BlockFamily::Inside).map(|b| b.size).sum();
        assert_eq!(total, (0..=3).map(|k| 6 - 2 * k + 1).sum::<usize>());
        for j in 0..p.num_vars() {
            assert!(p.blocks.iter().any(|b| b.coeffs.contains_key(&j)), "variable {j} unused");
        }
    }

    #[test]
    fn forbidden_classes_are_not_variables() {
        let p = build_sdp(8, GeneralizedD, 5, false).unwrap();
        assert!(p.variables.iter().all(|c| !p.forbidden.contains(&c.representative())));
        assert!(build_sdp(8, GeneralizedD, 9, false).is_err());
    }

    #[test]
    fn distribution_of_two_words() {
        let code: Vec<Word> = ["00", "11"].iter().map(|s| Word::parse(s).unwrap()).collect();
        let d = code_distribution(&code).unwrap();
        assert_eq!(d[&tp(0, 0, 0)], int(1));
        assert_eq!(d[&tp(0, 2, 2)], int(1));
        let p = build_sdp(2, ClassicalD1, 1, false).unwrap();
        let rep = check_distribution(&p, &d);
        assert!(rep.feasible(), "{rep:?}");
        assert_eq!(rep.objective, int(2));
        let single = code_distribution(&[Word::parse("0").unwrap()]).unwrap();
        assert_eq!(single.len(), 1);
        assert!(code_distribution(&[code[0], code[0]]).is_err());
    }

    #[test]
    fn equidistant_code_is_feasible() {
        let code: Vec<Word> =
            ["0000000000", "1111100000", "0000011111", "1111111111"].iter().map(|s| Word::parse(s).unwrap()).collect();
        let d = code_distribution(&code).unwrap();
        let p = build_sdp(10, GeneralizedD, 10, false).unwrap();
        let rep = check_distribution(&p, &d);
        assert!(rep.feasible(), "{rep:?}");
        assert_eq!(rep.objective, int(4));
    }

    #[test]
    fn exact_psd_test() {
        let m = |rows: &[&[i64]]| rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect::<Vec<Vec<_>>>();
        assert!(is_psd_exact(m(&[&[2, 1], &[1, 2]])));
        assert!(is_psd_exact(m(&[&[1, 1], &[1, 1]])));
        assert!(!is_psd_exact(m(&[&[1, 2], &[2, 1]])));
        assert!(!is_psd_exact(m(&[&[0, 1], &[1, 0]])));
        assert!(is_psd_exact(m(&[&[0, 0], &[0, 0]])));
        assert!(!is_psd_exact(m(&[&[1, 0], &[0, -1]])));
    }
}
