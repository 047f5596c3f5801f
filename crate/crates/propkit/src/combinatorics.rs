//! Permutations, block tuples and connected permutations.
//!
//! Permutations are one-line words on `1..=N`: position `i` holds `σ(i)`, and
//! composition reads right to left, `(σ∘τ)(i) = σ(τ(i))`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest `N` for which connected permutations are enumerated.
pub const MAX_CONNECTED_N: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    word: Vec<usize>,
}

impl Permutation {
    pub fn new(word: Vec<usize>) -> Result<Self> {
        let n = word.len();
        let mut seen = vec![false; n];
        for &w in &word {
            if w == 0 || w > n || seen[w - 1] {
                return Err(Error::arg(format!("{word:?} is not a permutation of 1..{n}")));
            }
            seen[w - 1] = true;
        }
        Ok(Permutation { word })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            word: (1..=n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// `σ(i)` for `1 <= i <= N`.
    pub fn apply(&self, i: usize) -> usize {
        self.word[i - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &w) in self.word.iter().enumerate() {
            inv[w - 1] = i + 1;
        }
        Permutation { word: inv }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::arg("composing permutations of different sizes"));
        }
        Ok(Permutation {
            word: other.word.iter().map(|&i| self.word[i - 1]).collect(),
        })
    }

    /// All permutations of `1..=n` in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        (1..=n).permutations(n).map(|word| Permutation { word })
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(word: Vec<usize>) -> Result<Self> {
        Permutation::new(word)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.word
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.word.iter().join(","))
    }
}

/// A composition `(k_1, ..., k_b)` with every part positive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct BlockTuple {
    parts: Vec<usize>,
}

impl BlockTuple {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::arg("block tuple must have at least one part"));
        }
        if parts.contains(&0) {
            return Err(Error::arg(format!("block tuple {parts:?} has a zero part")));
        }
        Ok(BlockTuple { parts })
    }

    pub fn ones(n: usize) -> Self {
        BlockTuple { parts: vec![1; n] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn sum(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Block index (0-based) of each of the `sum()` positions.
    fn block_of(&self) -> Vec<usize> {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(b, &s)| std::iter::repeat_n(b, s))
            .collect()
    }
}

impl TryFrom<Vec<usize>> for BlockTuple {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        BlockTuple::new(parts)
    }
}

impl From<BlockTuple> for Vec<usize> {
    fn from(b: BlockTuple) -> Self {
        b.parts
    }
}

impl fmt::Display for BlockTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.parts.iter().join(","))
    }
}

/// The block permutation `τ_ī`: blocks of sizes `ī` are moved as wholes so that
/// block `τ^{-1}(p)` lands in position `p`.
pub fn block_permutation(tau: &Permutation, i_bar: &BlockTuple) -> Result<Permutation> {
    if tau.len() != i_bar.len() {
        return Err(Error::arg(format!(
            "permutation on {} letters with {} blocks",
            tau.len(),
            i_bar.len()
        )));
    }
    let mut starts = Vec::with_capacity(i_bar.len());
    let mut acc = 1;
    for &s in i_bar.parts() {
        starts.push(acc);
        acc += s;
    }
    let inv = tau.inverse();
    let word = (1..=tau.len())
        .flat_map(|p| {
            let b = inv.apply(p) - 1;
            starts[b]..starts[b] + i_bar.parts()[b]
        })
        .collect();
    Ok(Permutation { word })
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

fn check_sizes(n: usize, k_bar: &BlockTuple, j_bar: &BlockTuple) -> Result<()> {
    if k_bar.sum() != n || j_bar.sum() != n {
        return Err(Error::arg(format!(
            "sizes differ: |σ| = {n}, |k̄| = {}, |j̄| = {}",
            k_bar.sum(),
            j_bar.sum()
        )));
    }
    Ok(())
}

/// Connectivity of the graph whose nodes are the blocks of `k̄` (outputs) and
/// `j̄` (inputs), with one edge per position `i` joining the `j̄`-block of `i`
/// to the `k̄`-block of `σ(i)`.
pub fn is_connected(sigma: &Permutation, k_bar: &BlockTuple, j_bar: &BlockTuple) -> Result<bool> {
    check_sizes(sigma.len(), k_bar, j_bar)?;
    Ok(connected_word(
        sigma.word(),
        &k_bar.block_of(),
        &j_bar.block_of(),
        k_bar.len(),
        j_bar.len(),
    ))
}

fn connected_word(word: &[usize], k_of: &[usize], j_of: &[usize], b: usize, a: usize) -> bool {
    let mut uf = UnionFind::new(a + b);
    let mut components = a + b;
    for (i, &w) in word.iter().enumerate() {
        if uf.union(b + j_of[i], k_of[w - 1]) {
            components -= 1;
            if components == 1 {
                return true;
            }
        }
    }
    components == 1
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

type CountKey = (Vec<usize>, Vec<usize>);

fn count_cache() -> &'static Mutex<HashMap<CountKey, u64>> {
    static CACHE: OnceLock<Mutex<HashMap<CountKey, u64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `#S^c_{k̄,j̄}`, by exhaustive enumeration of `S_N` for `N <= 8`.
///
/// The count only depends on the multisets of parts, so results are cached
/// under the sorted tuples.
pub fn connected_count(k_bar: &BlockTuple, j_bar: &BlockTuple) -> Result<u64> {
    connected_count_parts(k_bar.parts(), j_bar.parts())
}

/// Slice form of [`connected_count`].
pub fn connected_count_parts(k: &[usize], j: &[usize]) -> Result<u64> {
    let n: usize = k.iter().sum();
    if j.iter().sum::<usize>() != n {
        return Err(Error::arg(format!("|k̄| = {n} but |j̄| = {}", j.iter().sum::<usize>())));
    }
    if k.contains(&0) || j.contains(&0) || k.is_empty() || j.is_empty() {
        return Err(Error::arg("block tuples need positive parts"));
    }
    let mut ks = k.to_vec();
    let mut js = j.to_vec();
    ks.sort_unstable();
    js.sort_unstable();
    let key = (ks, js);
    if let Some(&c) = count_cache().lock().unwrap().get(&key) {
        return Ok(c);
    }
    if n > MAX_CONNECTED_N {
        return Err(Error::cap(format!(
            "connected permutations are enumerated up to N = {MAX_CONNECTED_N}, asked for N = {n}"
        )));
    }
    let (kt, jt) = (BlockTuple { parts: key.0.clone() }, BlockTuple { parts: key.1.clone() });
    let c = count_exhaustive(&kt, &jt);
    count_cache().lock().unwrap().insert(key, c);
    Ok(c)
}

fn count_exhaustive(k_bar: &BlockTuple, j_bar: &BlockTuple) -> u64 {
    let (b, a) = (k_bar.len(), j_bar.len());
    let n = k_bar.sum();
    if b == 1 || a == 1 {
        return (1..=n as u64).product();
    }
    if b + a - 1 > n {
        return 0;
    }
    let (k_of, j_of) = (k_bar.block_of(), j_bar.block_of());
    let mut word: Vec<usize> = (1..=n).collect();
    let mut count = 0;
    loop {
        if connected_word(&word, &k_of, &j_of, b, a) {
            count += 1;
        }
        if !next_permutation(&mut word) {
            break;
        }
    }
    count
}

/// The connected permutations themselves, in lexicographic order.
pub fn connected_permutations(k_bar: &BlockTuple, j_bar: &BlockTuple) -> Result<Vec<Permutation>> {
    let n = k_bar.sum();
    check_sizes(n, k_bar, j_bar)?;
    if n > MAX_CONNECTED_N {
        return Err(Error::cap(format!(
            "connected permutations are enumerated up to N = {MAX_CONNECTED_N}, asked for N = {n}"
        )));
    }
    let (k_of, j_of) = (k_bar.block_of(), j_bar.block_of());
    let mut word: Vec<usize> = (1..=n).collect();
    let mut out = Vec::new();
    loop {
        if connected_word(&word, &k_of, &j_of, k_bar.len(), j_bar.len()) {
            out.push(Permutation { word: word.clone() });
        }
        if !next_permutation(&mut word) {
            break;
        }
    }
    Ok(out)
}

/// A pair of ordered partitions of `{1..m}` and `{1..n}`, parts listed by
/// increasing minimum.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PartitionPair {
    pub out_parts: Vec<Vec<usize>>,
    pub in_parts: Vec<Vec<usize>>,
}

/// Increasing ordered partitions of `{1..m}` whose part sizes form the multiset `sizes`.
pub fn increasing_partitions(m: usize, sizes: &[usize]) -> Vec<Vec<Vec<usize>>> {
    fn rec(remaining: &[usize], sizes: &mut Vec<usize>, current: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if remaining.is_empty() {
            if sizes.is_empty() {
                out.push(current.clone());
            }
            return;
        }
        let first = remaining[0];
        let rest = &remaining[1..];
        for s in sizes.clone().into_iter().unique() {
            if s > remaining.len() {
                continue;
            }
            let pos = sizes.iter().position(|&x| x == s).unwrap();
            sizes.remove(pos);
            for others in rest.iter().copied().combinations(s - 1) {
                let mut part = vec![first];
                part.extend(&others);
                let left: Vec<usize> = rest.iter().copied().filter(|x| !others.contains(x)).collect();
                current.push(part);
                rec(&left, sizes, current, out);
                current.pop();
            }
            sizes.insert(pos, s);
        }
    }
    let total: usize = sizes.iter().sum();
    if total != m {
        return Vec::new();
    }
    let mut sorted = sizes.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    rec(&(1..=m).collect::<Vec<_>>(), &mut sorted, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// All increasing ordered partition pairs with the given part sizes (matched
/// as multisets), sorted lexicographically.
pub fn partition_pairs(
    m: usize,
    n: usize,
    out_sizes: &BlockTuple,
    in_sizes: &BlockTuple,
) -> Result<Vec<PartitionPair>> {
    if out_sizes.sum() != m || in_sizes.sum() != n {
        return Err(Error::arg(format!(
            "sizes {out_sizes} and {in_sizes} do not partition {m} and {n}"
        )));
    }
    let outs = increasing_partitions(m, out_sizes.parts());
    let ins = increasing_partitions(n, in_sizes.parts());
    Ok(outs
        .iter()
        .cartesian_product(ins.iter())
        .map(|(o, i)| PartitionPair {
            out_parts: o.clone(),
            in_parts: i.clone(),
        })
        .collect())
}

/// All compositions of `n` in lexicographic order.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Compositions of `n` into exactly `k` nonnegative parts.
pub fn weak_compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=n {
        for mut rest in weak_compositions(n - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Integer partitions of `n`, parts in decreasing order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=n.min(max)).rev() {
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// `Π (multiplicity)!` over the distinct parts.
pub fn automorphisms(parts: &[usize]) -> u64 {
    parts
        .iter()
        .counts()
        .values()
        .map(|&c| (1..=c as u64).product::<u64>())
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn perm(w: &[usize]) -> Permutation {
        Permutation::new(w.to_vec()).unwrap()
    }

    fn bt(p: &[usize]) -> BlockTuple {
        BlockTuple::new(p.to_vec()).unwrap()
    }

    #[test]
    fn block_permutation_examples() {
        let id = block_permutation(&Permutation::identity(3), &bt(&[2, 1, 4])).unwrap();
        assert_eq!(id, Permutation::identity(7));
        assert_eq!(
            block_permutation(&perm(&[2, 1]), &bt(&[1, 2])).unwrap(),
            perm(&[2, 3, 1])
        );
        assert_eq!(
            block_permutation(&perm(&[2, 1]), &bt(&[2, 1])).unwrap(),
            perm(&[3, 1, 2])
        );
        assert!(block_permutation(&perm(&[2, 1]), &bt(&[1, 1, 1])).is_err());
    }

    #[test]
    fn connectivity_examples() {
        let s = perm(&[1, 3, 2, 4]);
        assert!(is_connected(&s, &bt(&[2, 2]), &bt(&[2, 2])).unwrap());
        assert!(!is_connected(&s, &bt(&[1, 1, 2]), &bt(&[2, 1, 1])).unwrap());
        assert!(is_connected(&s, &bt(&[4]), &bt(&[1, 3])).unwrap());
        assert!(is_connected(&s, &bt(&[3]), &bt(&[3])).is_err());
    }

    #[test]
    fn count_examples() {
        assert_eq!(connected_count(&bt(&[3]), &bt(&[1, 1, 1])).unwrap(), 6);
        assert_eq!(connected_count(&bt(&[1, 1]), &bt(&[1, 1])).unwrap(), 0);
        assert_eq!(connected_count(&bt(&[1, 1]), &bt(&[2])).unwrap(), 2);
        assert_eq!(connected_count(&bt(&[2, 2]), &bt(&[2, 2])).unwrap(), 16);
        assert!(connected_count(&bt(&[1, 1]), &bt(&[3])).is_err());
        assert!(matches!(
            connected_count(&bt(&[5, 4]), &bt(&[4, 5])),
            Err(Error::Capability(_))
        ));
        assert_eq!(
            connected_permutations(&bt(&[1, 1]), &bt(&[2])).unwrap(),
            vec![perm(&[1, 2]), perm(&[2, 1])]
        );
    }

    #[test]
    fn partition_pair_examples() {
        let p = partition_pairs(2, 2, &bt(&[2]), &bt(&[2])).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].out_parts, vec![vec![1, 2]]);
        let p = partition_pairs(2, 1, &bt(&[1, 1]), &bt(&[1])).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].out_parts, vec![vec![1], vec![2]]);
        assert_eq!(p[0].in_parts, vec![vec![1]]);
        assert_eq!(increasing_partitions(3, &[1, 2]).len(), 3);
        assert_eq!(increasing_partitions(4, &[2, 2]).len(), 3);
        assert!(partition_pairs(3, 1, &bt(&[1, 1]), &bt(&[1])).is_err());
    }

    #[test]
    fn integer_helpers() {
        assert_eq!(compositions(4).len(), 8);
        assert_eq!(partitions(5).len(), 7);
        assert_eq!(weak_compositions(2, 3).len(), 6);
        assert_eq!(automorphisms(&[2, 1, 1, 1]), 6);
    }

    fn arb_perm(max: usize) -> impl Strategy<Value = Permutation> {
        (1..=max).prop_flat_map(|n| {
            Just((1..=n).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(|w| Permutation::new(w).unwrap())
        })
    }

    fn arb_tuple_of(n: usize) -> impl Strategy<Value = BlockTuple> {
        let comps = compositions(n);
        (0..comps.len()).prop_map(move |i| BlockTuple::new(comps[i].clone()).unwrap())
    }

    proptest! {
        #[test]
        fn block_closure(
            (sigma, k, j, tau, nu) in arb_perm(6).prop_flat_map(|s| {
                let n = s.len();
                (Just(s), arb_tuple_of(n), arb_tuple_of(n))
            }).prop_flat_map(|(s, k, j)| {
                let (b, a) = (k.len(), j.len());
                let tau = Just((1..=b).collect::<Vec<_>>()).prop_shuffle();
                let nu = Just((1..=a).collect::<Vec<_>>()).prop_shuffle();
                (Just(s), Just(k), Just(j), tau, nu)
            })
        ) {
            // Block permutations on both sides only relabel blocks.
            let tau = Permutation::new(tau).unwrap();
            let nu = Permutation::new(nu).unwrap();
            let k_new = BlockTuple::new(
                (1..=k.len()).map(|p| k.parts()[tau.apply(p) - 1]).collect()
            ).unwrap();
            let j_new = BlockTuple::new(
                (1..=j.len()).map(|p| j.parts()[nu.inverse().apply(p) - 1]).collect()
            ).unwrap();
            let moved = block_permutation(&tau, &k_new)
                .unwrap()
                .compose(&sigma)
                .unwrap()
                .compose(&block_permutation(&nu, &j).unwrap())
                .unwrap();
            prop_assert_eq!(
                is_connected(&sigma, &k, &j).unwrap(),
                is_connected(&moved, &k_new, &j_new).unwrap()
            );
        }

        #[test]
        fn count_symmetries(n in 1usize..=5, seed in 0usize..1000) {
            let comps = compositions(n);
            let k = &comps[seed % comps.len()];
            let j = &comps[(seed / 7) % comps.len()];
            let c = connected_count_parts(k, j).unwrap();
            let mut kr = k.clone();
            kr.reverse();
            prop_assert_eq!(c, connected_count_parts(&kr, j).unwrap());
            prop_assert_eq!(c, connected_count_parts(j, k).unwrap());
            let brute = Permutation::all(n)
                .filter(|s| is_connected(s, &bt(k), &bt(j)).unwrap())
                .count() as u64;
            prop_assert_eq!(c, brute);
        }

        #[test]
        fn inverse_composes_to_identity(s in arb_perm(7)) {
            prop_assert_eq!(s.compose(&s.inverse()).unwrap(), Permutation::identity(s.len()));
        }
    }
}
