//! Exact maximum code sizes for tiny `n` by exhaustive search.
//!
//! Branch and bound over codes that contain the zero word and, as second
//! word, `1^w 0^{n-w}` where `w` is the minimum distance of the code. Every
//! code is equivalent to one of this shape under translation and coordinate
//! permutation. Below the root, branching takes one word per orbit of the
//! coordinate permutations fixing the chosen words and then discards the
//! whole orbit. Pruning uses a greedy incumbent, a colouring bound on the
//! pairwise compatibility graph and a subcube bound: a face of codimension
//! `s` holds at most `A(n - s)` words.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::classical::PseudoDistanceKind;
use crate::error::{Error, Result};
use crate::hamming::{average_radius, generalized_distance, radius, KTuple, Word};

/// Largest length the search accepts.
pub const MAX_ORACLE_N: usize = 10;

const GREEDY_ROUNDS: usize = 64;

const LIMBS: usize = (1 << MAX_ORACLE_N) / 64;

#[derive(Clone, Copy, PartialEq, Eq)]
struct Bits([u64; LIMBS]);

impl Bits {
    fn empty() -> Self {
        Bits([0; LIMBS])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn contains(&self, i: usize) -> bool {
        (self.0[i / 64] >> (i % 64)) & 1 == 1
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn and_count(&self, other: &Bits) -> usize {
        self.0.iter().zip(&other.0).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(l, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(l * 64 + b)
            })
        })
    }
}

/// Admissibility of three distinct words, looked up by their distances.
struct Rules {
    kind: PseudoDistanceKind,
    m: usize,
    /// `ok[a][b][c]` for `d(y,z) = a`, `d(x,z) = b`, `d(x,y) = c`.
    ok: Vec<Vec<Vec<bool>>>,
}

impl Rules {
    fn new(n: usize, kind: PseudoDistanceKind, m: usize) -> Result<Self> {
        let mut ok = vec![vec![vec![false; n + 1]; n + 1]; n + 1];
        for c in 1..=n {
            for b in 1..=n {
                for a in 1..=n {
                    if (a + b + c) % 2 == 1 || a + b + c > 2 * n || a > b + c || b > a + c || c > a + b {
                        continue;
                    }
                    // x = 0, y has ones in 0..c, z shares `i` of them
                    let i = (b + c - a) / 2;
                    let y = (1u64 << c) - 1;
                    let z = ((1u64 << b) - 1) << (c - i);
                    let t = KTuple::new(vec![Word::zero(n)?, Word::new(n, y)?, Word::new(n, z)?])?;
                    ok[a][b][c] = match kind {
                        PseudoDistanceKind::GeneralizedD | PseudoDistanceKind::GeneralizedDAff => {
                            generalized_distance(&t)? as usize >= m
                        }
                        PseudoDistanceKind::Radius => radius(&t)? as usize >= m,
                        PseudoDistanceKind::AverageRadius => average_radius(&t) >= Ratio::from_integer(m as u64),
                        PseudoDistanceKind::ClassicalD1 => a.min(b).min(c) >= m,
                    };
                }
            }
        }
        Ok(Rules { kind, m, ok })
    }

    fn pair_ok(&self, u: usize, v: usize) -> bool {
        self.kind != PseudoDistanceKind::ClassicalD1 || (u ^ v).count_ones() as usize >= self.m
    }

    fn triple_ok(&self, x: usize, y: usize, z: usize) -> bool {
        let d = |p: usize, q: usize| (p ^ q).count_ones() as usize;
        self.ok[d(y, z)][d(x, z)][d(x, y)]
    }
}

/// Faces of codimension 1 and 2 with the capacity of each.
struct Faces {
    masks: Vec<Bits>,
    cap: Vec<usize>,
}

impl Faces {
    fn new(n: usize, sub: &[usize]) -> Self {
        let mut masks = Vec::new();
        let mut cap = Vec::new();
        let face = |fixed: &[(usize, usize)]| {
            let mut b = Bits::empty();
            for w in 0..1usize << n {
                if fixed.iter().all(|&(j, v)| (w >> j) & 1 == v) {
                    b.set(w);
                }
            }
            b
        };
        for j in 0..n {
            for v in 0..2 {
                masks.push(face(&[(j, v)]));
                cap.push(sub[1]);
            }
        }
        if n >= 2 {
            for j in 0..n {
                for k in j + 1..n {
                    for v in 0..4 {
                        masks.push(face(&[(j, v & 1), (k, v >> 1)]));
                        cap.push(sub[2]);
                    }
                }
            }
        }
        Faces { masks, cap }
    }

    /// Upper bound on a code inside `pool`, from each family of faces.
    fn bound(&self, n: usize, pool: &Bits) -> usize {
        let mut best = pool.count();
        let groups: [(usize, usize); 2] = [(0, 2 * n), (2 * n, self.masks.len())];
        for (lo, hi) in groups {
            let per = if lo == 0 { 2 } else { 4 };
            let mut start = lo;
            while start < hi {
                let s: usize = (start..start + per).map(|f| pool.and_count(&self.masks[f]).min(self.cap[f])).sum();
                best = best.min(s);
                start += per;
            }
        }
        best
    }
}

/// Candidates for extending the current code, with the pairwise
/// compatibility left after accounting for every chosen word.
struct Node {
    verts: Vec<usize>,
    /// `compat[i]`: candidates that can join together with `verts[i]`.
    compat: Vec<Bits>,
}

impl Node {
    fn root(verts: Vec<usize>, rules: &Rules, chosen: &[usize], min_dist: usize) -> Self {
        let compat = verts
            .iter()
            .map(|&v| {
                let mut b = Bits::empty();
                for &z in &verts {
                    if (v ^ z).count_ones() as usize >= min_dist
                        && rules.pair_ok(v, z)
                        && chosen.iter().all(|&u| rules.triple_ok(u, v, z))
                    {
                        b.set(z);
                    }
                }
                b
            })
            .collect();
        Node { verts, compat }
    }

    /// Number of colours in a greedy colouring of the compatibility graph.
    /// Words of one colour are pairwise incompatible, so a code takes at
    /// most one word per colour.
    fn colours(&self) -> usize {
        let mut uncoloured: Vec<usize> = (0..self.verts.len()).collect();
        let mut colours = 0;
        while !uncoloured.is_empty() {
            colours += 1;
            let mut class = Bits::empty();
            uncoloured.retain(|&i| {
                if self.compat[i].and_count(&class) == 0 {
                    class.set(self.verts[i]);
                    false
                } else {
                    true
                }
            });
        }
        colours
    }
}

struct Search<'a> {
    n: usize,
    rules: &'a Rules,
    faces: &'a Faces,
    best: &'a AtomicUsize,
    nodes: usize,
}

impl Search<'_> {
    /// `classes[j]` labels coordinate `j` by its column in the chosen words.
    /// Permuting coordinates within a label fixes every chosen word, so the
    /// node is invariant and one word per orbit suffices as the next branch.
    fn extend(&mut self, chosen: &mut Vec<usize>, classes: &[usize], node: Node, witness: &mut Option<Vec<usize>>) {
        self.nodes += 1;
        self.best.fetch_max(chosen.len(), Ordering::Relaxed);
        if chosen.len() > witness.as_ref().map_or(0, Vec::len) {
            *witness = Some(chosen.clone());
        }
        let best = || self.best.load(Ordering::Relaxed);
        if chosen.len() + node.verts.len() <= best() || chosen.len() + node.colours() <= best() {
            return;
        }
        let mut orbits: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for (i, &z) in node.verts.iter().enumerate() {
            let sig =
                (0..self.n).filter(|j| (z >> j) & 1 == 1).map(|j| (self.n as u64 + 1).pow(classes[j] as u32)).sum();
            orbits.entry(sig).or_default().push(i);
        }
        let mut orbits: Vec<Vec<usize>> = orbits.into_values().collect();
        orbits.sort_by_key(|o| o.len());
        let mut live = Bits::empty();
        for &v in &node.verts {
            live.set(v);
        }
        let mut live_count = node.verts.len();
        for orbit in &orbits {
            let mut pool = live;
            for &u in chosen.iter() {
                pool.set(u);
            }
            if chosen.len() + live_count <= self.best.load(Ordering::Relaxed)
                || self.faces.bound(self.n, &pool) <= self.best.load(Ordering::Relaxed)
            {
                return;
            }
            let i = orbit[0];
            let v = node.verts[i];
            let mut keep = node.compat[i];
            keep.0.iter_mut().zip(&live.0).for_each(|(a, b)| *a &= b);
            let mut verts = Vec::new();
            let mut compat = Vec::new();
            for (j, &x) in node.verts.iter().enumerate() {
                if !keep.contains(x) {
                    continue;
                }
                let mut row = node.compat[j];
                row.0.iter_mut().zip(&keep.0).for_each(|(a, b)| *a &= b);
                for z in keep.iter() {
                    if row.contains(z) && !self.rules.triple_ok(v, x, z) {
                        row.clear(z);
                    }
                }
                verts.push(x);
                compat.push(row);
            }
            let refined = refine(classes, v);
            chosen.push(v);
            self.extend(chosen, &refined, Node { verts, compat }, witness);
            chosen.pop();
            for &o in orbit.iter() {
                live.clear(node.verts[o]);
            }
            live_count -= orbit.len();
        }
    }
}

/// Splits every coordinate class by the bit of `v`, relabelling densely.
fn refine(classes: &[usize], v: usize) -> Vec<usize> {
    let mut ids = BTreeMap::new();
    classes
        .iter()
        .enumerate()
        .map(|(j, &c)| {
            let next = ids.len();
            *ids.entry((c, (v >> j) & 1)).or_insert(next)
        })
        .collect()
}

/// Largest of a few greedy codes, used as the starting incumbent.
fn greedy(n: usize, rules: &Rules, even_only: bool) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    let mut order: Vec<usize> = (0..1usize << n).filter(|w| !even_only || w.count_ones() % 2 == 0).collect();
    let mut best: Vec<usize> = Vec::new();
    for round in 0..GREEDY_ROUNDS {
        if round > 0 {
            order[1..].shuffle(&mut rng);
        }
        let mut code: Vec<usize> = Vec::new();
        for &z in &order {
            let fits = code.iter().all(|&u| rules.pair_ok(u, z))
                && code.iter().enumerate().all(|(i, &u)| code[i + 1..].iter().all(|&v| rules.triple_ok(u, v, z)));
            if fits {
                code.push(z);
            }
        }
        if code.len() > best.len() {
            best = code;
        }
    }
    best.sort_unstable();
    best
}

/// Maximum size of a code of length `n` in which every triple of distinct
/// words has pseudo-distance at least `m` (for `d1`, every pair has distance
/// at least `m`), together with one optimal code. The size never depends
/// on scheduling; which optimal code is returned may.
pub fn max_code_with_witness(
    n: usize,
    kind: PseudoDistanceKind,
    m: usize,
    even_only: bool,
) -> Result<(usize, Vec<Word>)> {
    if n == 0 || n > MAX_ORACLE_N {
        return Err(Error::Resource(format!("exhaustive search is limited to 1 <= n <= {MAX_ORACLE_N}, got {n}")));
    }
    let (size, code) = search(n, kind, m, even_only)?;
    let code = code.into_iter().map(|b| Word::new(n, b as u64)).collect::<Result<Vec<_>>>()?;
    Ok((size, code))
}

fn search(n: usize, kind: PseudoDistanceKind, m: usize, even_only: bool) -> Result<(usize, Vec<usize>)> {
    // exact values at shorter lengths feed the face bound
    let mut sizes = vec![1];
    for len in 1..n {
        let sub = [0, sizes[len - 1], if len >= 2 { sizes[len - 2] } else { 0 }];
        sizes.push(search_length(len, kind, m, even_only, &sub)?.0);
    }
    let sub = [0, sizes[n - 1], if n >= 2 { sizes[n - 2] } else { 0 }];
    search_length(n, kind, m, even_only, &sub)
}

fn search_length(
    n: usize,
    kind: PseudoDistanceKind,
    m: usize,
    even_only: bool,
    sub: &[usize; 3],
) -> Result<(usize, Vec<usize>)> {
    let rules = Rules::new(n, kind, m)?;
    let faces = Faces::new(n, sub);
    let admissible = |w: usize| !even_only || w.count_ones().is_multiple_of(2);

    let start = greedy(n, &rules, even_only);
    let best = AtomicUsize::new(start.len());
    // branch on the minimum distance of the code, largest first: those
    // branches are small and leave a strong incumbent for the rest
    let branches: Vec<usize> =
        (1..=n).rev().filter(|&w| admissible((1 << w) - 1) && rules.pair_ok(0, (1 << w) - 1)).collect();
    let results: Vec<(usize, Option<Vec<usize>>)> = branches
        .par_iter()
        .map(|&w| {
            let second = (1usize << w) - 1;
            let verts: Vec<usize> = (1..1usize << n)
                .filter(|&z| {
                    z != second
                        && z.count_ones() as usize >= w
                        && (z ^ second).count_ones() as usize >= w
                        && admissible(z)
                        && rules.pair_ok(0, z)
                        && rules.pair_ok(second, z)
                        && rules.triple_ok(0, second, z)
                })
                .collect();
            let chosen = vec![0, second];
            let root = Node::root(verts, &rules, &chosen, w);
            let mut search = Search { n, rules: &rules, faces: &faces, best: &best, nodes: 0 };
            let mut witness = None;
            let classes = refine(&vec![0; n], second);
            search.extend(&mut chosen.clone(), &classes, root, &mut witness);
            log::debug!("oracle n={n} kind={kind} m={m} w={w}: {} nodes", search.nodes);
            (w, witness)
        })
        .collect();

    let size = best.load(Ordering::Relaxed);
    let code = results
        .into_iter()
        .filter_map(|(_, wit)| wit)
        .chain([start])
        .filter(|c| c.len() == size)
        .min()
        .expect("the incumbent always has a witness");
    Ok((size, code))
}

/// Exact `A_2(n, f, m)`, or `A_2^+(n, f, m)` when `even_only` restricts to
/// codes with all pairwise distances even.
pub fn max_code_exact(n: usize, kind: PseudoDistanceKind, m: usize, even_only: bool) -> Result<usize> {
    Ok(max_code_with_witness(n, kind, m, even_only)?.0)
}

/// True iff `bound` is at least the exact maximum code size.
pub fn verify_bound(n: usize, kind: PseudoDistanceKind, m: usize, bound: u128) -> Result<bool> {
    Ok(max_code_exact(n, kind, m, false)? as u128 <= bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use PseudoDistanceKind::*;

    #[test]
    fn closed_forms() {
        assert_eq!(max_code_exact(5, GeneralizedD, 3, false).unwrap(), 16);
        assert_eq!(max_code_exact(5, GeneralizedD, 5, false).unwrap(), 4);
        assert_eq!(max_code_exact(4, Radius, 1, false).unwrap(), 16);
        assert_eq!(max_code_exact(6, Radius, 3, false).unwrap(), 4);
    }

    #[test]
    fn classical_distance() {
        // A(n, d) for small n
        assert_eq!(max_code_exact(5, ClassicalD1, 3, false).unwrap(), 4);
        assert_eq!(max_code_exact(6, ClassicalD1, 3, false).unwrap(), 8);
        assert_eq!(max_code_exact(7, ClassicalD1, 3, false).unwrap(), 16);
        assert_eq!(max_code_exact(6, ClassicalD1, 4, false).unwrap(), 4);
    }

    #[test]
    fn witness_is_a_valid_code() {
        let (size, code) = max_code_with_witness(6, GeneralizedD, 4, false).unwrap();
        assert_eq!(code.len(), size);
        for i in 0..code.len() {
            for j in i + 1..code.len() {
                for k in j + 1..code.len() {
                    let t = KTuple::new(vec![code[i], code[j], code[k]]).unwrap();
                    assert!(generalized_distance(&t).unwrap() >= 4);
                }
            }
        }
    }

    #[test]
    fn small_radius_exceptions() {
        // the ball-radius value 4 at m = n/2 only holds from n = 6 on
        for (n, m, size) in [(3, 1, 8), (4, 2, 5), (5, 2, 10)] {
            let (got, code) = max_code_with_witness(n, Radius, m, false).unwrap();
            assert_eq!(got, size);
            for i in 0..code.len() {
                for j in i + 1..code.len() {
                    for k in j + 1..code.len() {
                        let t = KTuple::new(vec![code[i], code[j], code[k]]).unwrap();
                        assert!(crate::hamming::radius_exhaustive(&t) as usize >= m);
                    }
                }
            }
        }
    }

    #[test]
    fn even_codes_match_one_longer() {
        for n in 2..=5 {
            for m in 1..=n / 2 + 1 {
                assert_eq!(
                    max_code_exact(n, Radius, m, false).unwrap(),
                    max_code_exact(n + 1, Radius, m, true).unwrap(),
                    "n={n} m={m}"
                );
            }
        }
    }

    #[test]
    fn gate() {
        assert!(matches!(max_code_exact(11, GeneralizedD, 3, false), Err(Error::Resource(_))));
        assert!(verify_bound(5, GeneralizedD, 5, 4).unwrap());
        assert!(!verify_bound(5, GeneralizedD, 5, 3).unwrap());
    }
}
