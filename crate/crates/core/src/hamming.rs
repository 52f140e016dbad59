//! Binary Hamming space: words, tuples of words, orbit invariants and the
//! three pseudo-distances (generalized distance, radius, average radius).

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Longest supported word length.
pub const MAX_LEN: usize = 64;

/// Default cap on `n` for the exhaustive radius search used when `k >= 4`.
pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 24;

/// An element of the Hamming space `F_2^n`, stored in the low `len` bits.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    bits: u64,
    len: u8,
}

fn mask(len: usize) -> u64 {
    if len == 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl Word {
    pub fn new(len: usize, bits: u64) -> Result<Self> {
        if len == 0 || len > MAX_LEN {
            return Err(Error::Domain(format!("word length {len} outside 1..=64")));
        }
        if bits & !mask(len) != 0 {
            return Err(Error::Domain(format!("bits {bits:#x} exceed length {len}")));
        }
        Ok(Word { bits, len: len as u8 })
    }

    pub fn zero(len: usize) -> Result<Self> {
        Word::new(len, 0)
    }

    /// Parses a string of `0`/`1` characters; the first character is coordinate 1.
    pub fn parse(s: &str) -> Result<Self> {
        let mut bits = 0u64;
        for (j, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' if j < 64 => bits |= 1 << j,
                _ => return Err(Error::Input(format!("bad word literal {s:?}"))),
            }
        }
        Word::new(s.chars().count(), bits)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn bit(&self, j: usize) -> bool {
        (self.bits >> j) & 1 == 1
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn xor(&self, other: &Word) -> Result<Word> {
        self.check_len(other)?;
        Ok(Word { bits: self.bits ^ other.bits, len: self.len })
    }

    pub fn distance(&self, other: &Word) -> Result<u32> {
        self.check_len(other)?;
        Ok((self.bits ^ other.bits).count_ones())
    }

    fn check_len(&self, other: &Word) -> Result<()> {
        if self.len != other.len {
            return Err(Error::Dimension(format!("word lengths {} and {}", self.len, other.len)));
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.len() {
            f.write_str(if self.bit(j) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// An ordered list of `k >= 1` words sharing one length.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KTuple {
    words: Vec<Word>,
}

impl KTuple {
    pub fn new(words: Vec<Word>) -> Result<Self> {
        let first = words.first().ok_or(Error::Arity { needed: 1, got: 0 })?;
        if let Some(w) = words.iter().find(|w| w.len != first.len) {
            return Err(Error::Dimension(format!("tuple mixes lengths {} and {}", first.len, w.len)));
        }
        Ok(KTuple { words })
    }

    /// Convenience constructor from `0`/`1` literals.
    pub fn parse(literals: &[&str]) -> Result<Self> {
        KTuple::new(literals.iter().map(|s| Word::parse(s)).collect::<Result<_>>()?)
    }

    pub fn k(&self) -> usize {
        self.words.len()
    }

    pub fn n(&self) -> usize {
        self.words[0].len()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    /// Column `j` of the `k x n` matrix as a pattern `u in F_2^k`, bit `i` holding word `i`.
    fn column(&self, j: usize) -> u64 {
        self.words.iter().enumerate().fold(0, |acc, (i, w)| acc | ((w.bit(j) as u64) << i))
    }

    fn without(&self, i: usize) -> KTuple {
        let mut words = self.words.clone();
        words.remove(i);
        KTuple { words }
    }

    fn replaced(&self, i: usize, y: Word) -> KTuple {
        let mut words = self.words.clone();
        words[i] = y;
        KTuple { words }
    }
}

/// Column-pattern counts of a tuple.
///
/// Patterns are encoded as integers: bit `i` of `u` is the entry of word `i`.
/// The symmetrized counts are keyed by `w in F_2^{k-1}`, where bit `i` of `w`
/// is the entry of word `i + 1` after flipping the column so that word 0 reads zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDistribution {
    k: usize,
    counts: BTreeMap<u64, u32>,
    sym_counts: BTreeMap<u64, u32>,
}

impl WeightDistribution {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn count(&self, u: u64) -> u32 {
        self.counts.get(&u).copied().unwrap_or(0)
    }

    pub fn sym_count(&self, w: u64) -> u32 {
        self.sym_counts.get(&w).copied().unwrap_or(0)
    }

    /// Nonzero pattern counts, ascending by pattern.
    pub fn counts(&self) -> &BTreeMap<u64, u32> {
        &self.counts
    }

    pub fn sym_counts(&self) -> &BTreeMap<u64, u32> {
        &self.sym_counts
    }

    /// Rebuilds the symmetrized counts from the raw counts by pairing `u` with its complement.
    pub fn symmetrize(k: usize, counts: &BTreeMap<u64, u32>) -> BTreeMap<u64, u32> {
        let full = mask(k);
        let mut sym = BTreeMap::new();
        for (&u, &c) in counts {
            let u0 = if u & 1 == 1 { u ^ full } else { u };
            *sym.entry(u0 >> 1).or_insert(0) += c;
        }
        sym
    }
}

pub fn weight_distribution(t: &KTuple) -> WeightDistribution {
    let mut counts = BTreeMap::new();
    for j in 0..t.n() {
        *counts.entry(t.column(j)).or_insert(0u32) += 1;
    }
    let sym_counts = WeightDistribution::symmetrize(t.k(), &counts);
    WeightDistribution { k: t.k(), counts, sym_counts }
}

/// Whether two tuples lie in the same orbit of `Aut(H_n)`.
///
/// Both tuples are translated so their first word is zero and their raw
/// pattern counts are compared.
pub fn orbit_equivalent(t1: &KTuple, t2: &KTuple) -> Result<bool> {
    if t1.k() != t2.k() || t1.n() != t2.n() {
        return Err(Error::Dimension(format!("tuples of shape {}x{} and {}x{}", t1.k(), t1.n(), t2.k(), t2.n())));
    }
    let anchor = |t: &KTuple| -> KTuple {
        let x0 = t.words[0];
        KTuple { words: t.words.iter().map(|w| Word { bits: w.bits ^ x0.bits, len: w.len }).collect() }
    };
    Ok(weight_distribution(&anchor(t1)).counts == weight_distribution(&anchor(t2)).counts)
}

/// Number of coordinates on which the words are not all equal.
pub fn generalized_distance(t: &KTuple) -> Result<u32> {
    if t.k() < 2 {
        return Err(Error::Arity { needed: 2, got: t.k() });
    }
    let (all_or, all_and) = t.words.iter().fold((0u64, u64::MAX), |(o, a), w| (o | w.bits, a & w.bits));
    Ok((all_or & !all_and & mask(t.n())).count_ones())
}

/// Smallest radius of a ball containing every word of the tuple.
///
/// Closed forms for `k <= 3`; exhaustive center search for `k >= 4` with
/// `n` capped at [`DEFAULT_EXHAUSTIVE_LIMIT`].
pub fn radius(t: &KTuple) -> Result<u32> {
    radius_with_limit(t, DEFAULT_EXHAUSTIVE_LIMIT)
}

pub fn radius_with_limit(t: &KTuple, exhaustive_limit: usize) -> Result<u32> {
    let w = &t.words;
    let half_up = |d: u32| d.div_ceil(2);
    match t.k() {
        1 => Ok(0),
        2 => Ok(half_up(w[0].distance(&w[1])?)),
        3 => {
            let d01 = w[0].distance(&w[1])?;
            let d12 = w[1].distance(&w[2])?;
            let d02 = w[0].distance(&w[2])?;
            Ok(half_up(d01.max(d12).max(d02)))
        }
        _ => {
            if t.n() > exhaustive_limit {
                return Err(Error::Resource(format!(
                    "exhaustive radius search for k={} needs n <= {exhaustive_limit}, got n={}",
                    t.k(),
                    t.n()
                )));
            }
            Ok(radius_exhaustive(t))
        }
    }
}

/// Minimum over all `2^n` centers of the largest distance to a word of the tuple.
pub fn radius_exhaustive(t: &KTuple) -> u32 {
    let n = t.n();
    // Coordinates where all words agree can be copied into the center.
    let (all_or, all_and) = t.words.iter().fold((0u64, u64::MAX), |(o, a), w| (o | w.bits, a & w.bits));
    let free = all_or & !all_and & mask(n);
    let free_bits: Vec<u32> = (0..n as u32).filter(|j| (free >> j) & 1 == 1).collect();
    let base = all_and & mask(n);
    let mut best = free_bits.len() as u32;
    let count = 1u64 << free_bits.len();
    for sub in 0..count {
        let mut y = base;
        for (i, &j) in free_bits.iter().enumerate() {
            if (sub >> i) & 1 == 1 {
                y |= 1 << j;
            }
        }
        let mut worst = 0;
        for x in &t.words {
            worst = worst.max((x.bits ^ y).count_ones());
            if worst >= best {
                break;
            }
        }
        best = best.min(worst);
    }
    best
}

/// Exact average radius `(1/k) sum_w min(wt(w), k - wt(w)) n_w`.
pub fn average_radius(t: &KTuple) -> Ratio<u64> {
    let k = t.k() as u64;
    let wd = weight_distribution(t);
    let total: u64 = wd
        .sym_counts
        .iter()
        .map(|(&w, &c)| {
            // wt counts the implicit zero of word 0 only through `k - wt`.
            let wt = w.count_ones() as u64;
            wt.min(k - wt) * c as u64
        })
        .sum();
    Ratio::new(total, k)
}

/// An element of `Aut(H_n)`: translate by a word, then permute coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    translation: Word,
    /// `permutation[j]` is the target coordinate of source coordinate `j`.
    permutation: Vec<usize>,
}

impl Automorphism {
    pub fn new(translation: Word, permutation: Vec<usize>) -> Result<Self> {
        let n = translation.len();
        let mut seen = vec![false; n];
        if permutation.len() != n {
            return Err(Error::Dimension(format!(
                "permutation of length {} for words of length {n}",
                permutation.len()
            )));
        }
        for &p in &permutation {
            if p >= n || seen[p] {
                return Err(Error::Input("permutation is not a bijection".into()));
            }
            seen[p] = true;
        }
        Ok(Automorphism { translation, permutation })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Automorphism::new(Word::zero(n)?, (0..n).collect())
    }

    pub fn translation_by(x: Word) -> Self {
        Automorphism { translation: x, permutation: (0..x.len()).collect() }
    }

    /// A uniformly random automorphism drawn from a seeded generator.
    pub fn random(n: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bits = rng.gen::<u64>() & mask(n);
        let mut permutation: Vec<usize> = (0..n).collect();
        permutation.shuffle(&mut rng);
        Automorphism::new(Word::new(n, bits)?, permutation)
    }

    pub fn n(&self) -> usize {
        self.translation.len()
    }

    pub fn apply_word(&self, w: &Word) -> Result<Word> {
        let shifted = w.xor(&self.translation)?;
        let mut bits = 0u64;
        for (j, &p) in self.permutation.iter().enumerate() {
            if shifted.bit(j) {
                bits |= 1 << p;
            }
        }
        Ok(Word { bits, len: w.len })
    }

    pub fn inverse(&self) -> Self {
        let n = self.n();
        let mut inv = vec![0; n];
        for (j, &p) in self.permutation.iter().enumerate() {
            inv[p] = j;
        }
        // g(x) = P(x ^ t), so g^-1(y) = P^-1(y ^ P(t)).
        let mut bits = 0u64;
        for (j, &p) in self.permutation.iter().enumerate() {
            if self.translation.bit(j) {
                bits |= 1 << p;
            }
        }
        Automorphism { translation: Word { bits, len: self.translation.len }, permutation: inv }
    }
}

pub fn apply_automorphism(g: &Automorphism, t: &KTuple) -> Result<KTuple> {
    if g.n() != t.n() {
        return Err(Error::Dimension(format!("automorphism of H_{} applied to words of length {}", g.n(), t.n())));
    }
    Ok(KTuple { words: t.words.iter().map(|w| g.apply_word(w)).collect::<Result<_>>()? })
}

/// Draws a random `k`-tuple of words of length `n`.
pub fn random_tuple<R: Rng>(rng: &mut R, n: usize, k: usize) -> KTuple {
    let words = (0..k).map(|_| Word { bits: rng.gen::<u64>() & mask(n), len: n as u8 }).collect();
    KTuple { words }
}

/// The tuple with word `i` removed; used by the deletion inequalities.
pub fn delete(t: &KTuple, i: usize) -> KTuple {
    t.without(i)
}

/// The tuple with word `i` replaced by `y`.
pub fn substitute(t: &KTuple, i: usize, y: Word) -> KTuple {
    t.replaced(i, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tup(s: &[&str]) -> KTuple {
        KTuple::parse(s).unwrap()
    }

    #[test]
    fn weight_distribution_of_small_triple() {
        let t = tup(&["0000", "1100", "1010"]);
        let wd = weight_distribution(&t);
        // columns (x1 x2 x3) = 011, 010, 001, 000; bit i of the key is word i
        assert_eq!(wd.count(0b110), 1);
        assert_eq!(wd.count(0b010), 1);
        assert_eq!(wd.count(0b100), 1);
        assert_eq!(wd.count(0b000), 1);
        assert_eq!(wd.counts().values().sum::<u32>(), 4);
        assert_eq!(wd.sym_counts().values().sum::<u32>(), 4);
    }

    #[test]
    fn single_word_distribution_is_weight() {
        let t = tup(&["1101001"]);
        let wd = weight_distribution(&t);
        assert_eq!(wd.count(1), 4);
        assert_eq!(wd.count(0), 3);
    }

    #[test]
    fn equal_pair_has_no_disagreement() {
        let t = tup(&["10110", "10110"]);
        let wd = weight_distribution(&t);
        assert_eq!(wd.count(0b00) + wd.count(0b11), 5);
        assert_eq!(wd.count(0b01), 0);
        assert_eq!(wd.count(0b10), 0);
    }

    #[test]
    fn orbit_examples() {
        assert!(orbit_equivalent(&tup(&["00", "11"]), &tup(&["10", "01"])).unwrap());
        assert!(!orbit_equivalent(&tup(&["00", "01"]), &tup(&["00", "11"])).unwrap());
        let t = tup(&["0110", "1011", "0001"]);
        assert!(orbit_equivalent(&t, &t).unwrap());
        assert!(matches!(orbit_equivalent(&tup(&["00", "11"]), &tup(&["000", "111"])), Err(Error::Dimension(_))));
    }

    #[test]
    fn distances_of_small_triple() {
        let t = tup(&["0000", "1100", "1010"]);
        assert_eq!(generalized_distance(&t).unwrap(), 3);
        assert_eq!(radius(&t).unwrap(), 1);
        assert_eq!(radius_exhaustive(&t), 1);
        assert_eq!(average_radius(&t), Ratio::from_integer(1));
    }

    #[test]
    fn pair_values() {
        let t = tup(&["0000000", "1111100"]);
        assert_eq!(generalized_distance(&t).unwrap(), 5);
        assert_eq!(radius(&t).unwrap(), 3);
        assert_eq!(average_radius(&t), Ratio::new(5, 2));
    }

    #[test]
    fn degenerate_tuples() {
        assert_eq!(radius(&tup(&["1010"])).unwrap(), 0);
        let same = tup(&["1011", "1011", "1011"]);
        assert_eq!(generalized_distance(&same).unwrap(), 0);
        assert_eq!(average_radius(&same), Ratio::from_integer(0));
        assert!(matches!(generalized_distance(&tup(&["1"])), Err(Error::Arity { needed: 2, got: 1 })));
    }

    #[test]
    fn exhaustive_radius_respects_limit() {
        let w = |b: u64| Word::new(30, b).unwrap();
        let t = KTuple::new(vec![w(0), w(1), w(2), w(4)]).unwrap();
        assert!(matches!(radius(&t), Err(Error::Resource(_))));
        assert_eq!(radius_with_limit(&t, 30).unwrap(), 1);
    }

    #[test]
    fn automorphism_basics() {
        let t = tup(&["0110", "1011", "0001"]);
        let id = Automorphism::identity(4).unwrap();
        assert_eq!(apply_automorphism(&id, &t).unwrap(), t);
        let g = Automorphism::translation_by(t.words()[0]);
        assert_eq!(apply_automorphism(&g, &t).unwrap().words()[0].weight(), 0);
        for seed in 0..50 {
            let g = Automorphism::random(4, seed).unwrap();
            let back = apply_automorphism(&g.inverse(), &apply_automorphism(&g, &t).unwrap()).unwrap();
            assert_eq!(back, t);
        }
        let g5 = Automorphism::identity(5).unwrap();
        assert!(matches!(apply_automorphism(&g5, &t), Err(Error::Dimension(_))));
    }

    #[test]
    fn word_validation() {
        assert!(Word::new(0, 0).is_err());
        assert!(Word::new(65, 0).is_err());
        assert!(Word::new(3, 0b1000).is_err());
        assert_eq!(Word::new(64, u64::MAX).unwrap().weight(), 64);
        let a = Word::parse("1100").unwrap();
        assert_eq!(a.to_string(), "1100");
        assert_eq!(a.xor(&Word::parse("0110").unwrap()).unwrap().to_string(), "1010");
        assert!(KTuple::new(vec![a, Word::parse("1").unwrap()]).is_err());
    }
}
