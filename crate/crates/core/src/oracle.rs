//! Brute-force ground truth: enumerate every `m`-tuple of permutations of
//! `n` sheets, close it with `σ = (g_1 ⋯ g_m)^{-1}`, keep the transitive
//! ones and tally them by the cycle type of `σ` and the Riemann–Hurwitz
//! genus. Dividing by `n!` gives the automorphism-weighted count that the
//! generating series produces.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::Rat;
use crate::par::Exec;
use crate::partitions::{factorial, Partition};

/// Default cap on enumerated tuples.
pub const DEFAULT_BUDGET: u128 = 1_000_000_000;

/// A bijection of `0..n`, stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn new(images: Vec<u8>) -> Result<Permutation> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::Parse { what: "permutation", input: format!("{images:?}") });
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation { images: (0..n as u8).collect() }
    }

    /// Permutation with the given cycles (zero-based points); other points fixed.
    pub fn from_cycles(n: usize, cycles: &[&[u8]]) -> Result<Permutation> {
        let mut images: Vec<u8> = (0..n as u8).collect();
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                images[x as usize] = cycle[(i + 1) % cycle.len()];
            }
        }
        Permutation::new(images)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&x| self.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u8; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u8;
        }
        Permutation { images }
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            out.push(len);
        }
        out
    }

    pub fn num_cycles(&self) -> usize {
        self.cycle_lengths().len()
    }

    pub fn cycle_type(&self) -> Partition {
        Partition::from_unsorted(self.cycle_lengths())
    }

    /// Position in lexicographic order of image lists (Lehmer code).
    pub fn rank(&self) -> usize {
        let n = self.images.len();
        let mut rank = 0;
        for i in 0..n {
            let smaller = self.images[i + 1..].iter().filter(|&&x| x < self.images[i]).count();
            rank = rank * (n - i) + smaller;
        }
        rank
    }

    /// Inverse of [`rank`](Self::rank).
    pub fn unrank(n: usize, mut rank: usize) -> Permutation {
        let mut digits = vec![0usize; n];
        for i in (0..n).rev() {
            let radix = n - i;
            digits[i] = rank % radix;
            rank /= radix;
        }
        let mut pool: Vec<u8> = (0..n as u8).collect();
        let images = digits.into_iter().map(|d| pool.remove(d)).collect();
        Permutation { images }
    }
}

/// All of `S_n` in rank order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    (0..factorial(n) as usize).map(|r| Permutation::unrank(n, r)).collect()
}

/// Genus from `2 − 2g = 2n − Σ_P (n − l(g_P))`, summing over the tuple
/// entries and the closing permutation.
pub fn genus_of(tuple: &[Permutation], product: &Permutation, n: usize) -> Result<i64> {
    let cycles = tuple.iter().chain(std::iter::once(product)).map(Permutation::num_cycles);
    genus_from_cycle_counts(cycles, n)
}

fn genus_from_cycle_counts(cycles: impl Iterator<Item = usize>, n: usize) -> Result<i64> {
    let n = n as i64;
    let ramification: i64 = cycles.map(|l| n - l as i64).sum();
    let twice = 2 - 2 * n + ramification;
    if twice % 2 != 0 {
        return Err(Error::NonIntegerGenus(twice));
    }
    Ok(twice / 2)
}

struct UnionFind {
    parent: [u8; 32],
    components: usize,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        let mut parent = [0u8; 32];
        for (i, p) in parent.iter_mut().enumerate().take(n) {
            *p = i as u8;
        }
        UnionFind { parent, components: n }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let up = self.parent[self.parent[x] as usize];
            self.parent[x] = up;
            x = up as usize;
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb as u8;
            self.components -= 1;
        }
    }
}

fn is_transitive<'a>(n: usize, generators: impl Iterator<Item = &'a Permutation>) -> bool {
    let mut uf = UnionFind::new(n);
    for g in generators {
        for x in 0..n {
            uf.union(x, g.apply(x));
            if uf.components <= 1 {
                return true;
            }
        }
    }
    uf.components <= 1
}

/// Weighted counts `#{transitive tuples}/n!` keyed by (cycle type of `σ`, genus).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    pub n: usize,
    pub m: usize,
    cells: BTreeMap<(Partition, usize), Rat>,
    /// Raw tallies, for conservation checks.
    pub transitive_tuples: u128,
    pub intransitive_tuples: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountEntry {
    pub nu: Partition,
    pub genus: usize,
    pub count: Rat,
}

impl CountTable {
    pub fn get(&self, nu: &Partition, genus: usize) -> Option<&Rat> {
        self.cells.get(&(nu.clone(), genus))
    }

    pub fn cells(&self) -> impl Iterator<Item = (&Partition, usize, &Rat)> {
        self.cells.iter().map(|((nu, g), c)| (nu, *g, c))
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Entries sorted by reverse-lex `ν`, then genus.
    pub fn to_entries(&self) -> Vec<CountEntry> {
        self.cells()
            .map(|(nu, genus, count)| CountEntry { nu: nu.clone(), genus, count: count.clone() })
            .collect()
    }

    /// Rebuilds the weighted cells; raw tallies are not part of the JSON form
    /// and come back as the transitive total implied by the cells.
    pub fn from_entries(n: usize, m: usize, entries: &[CountEntry]) -> Result<CountTable> {
        let mut cells = BTreeMap::new();
        let n_fact = Rat::from_integer(BigInt::from(factorial(n)));
        let mut transitive = Rat::zero();
        for e in entries {
            if e.nu.weight() != n {
                return Err(Error::OutOfBounds(format!("cycle type {} is not of weight {n}", e.nu)));
            }
            transitive += &(&e.count * &n_fact);
            cells.insert((e.nu.clone(), e.genus), e.count.clone());
        }
        let transitive_tuples = transitive
            .to_integer()
            .and_then(|t| u128::try_from(t).ok())
            .ok_or_else(|| Error::InvariantViolation("non-integral tuple total".into()))?;
        let total = (factorial(n)).pow(m as u32);
        Ok(CountTable {
            n,
            m,
            cells,
            transitive_tuples,
            intransitive_tuples: total.saturating_sub(transitive_tuples),
        })
    }
}

fn tuple_count(n: usize, m: usize) -> u128 {
    factorial(n).checked_pow(m as u32).unwrap_or(u128::MAX)
}

pub fn enumerate_counts(n: usize, m: usize, budget: u128) -> Result<CountTable> {
    enumerate_counts_with(n, m, budget, Exec::default())
}

#[derive(Default)]
struct Tally {
    cells: BTreeMap<(Partition, usize), u128>,
    transitive: u128,
    intransitive: u128,
}

impl Tally {
    fn merge(&mut self, other: Tally) {
        for (k, v) in other.cells {
            *self.cells.entry(k).or_default() += v;
        }
        self.transitive += other.transitive;
        self.intransitive += other.intransitive;
    }
}

/// Calls `visit(tuple, product)` for every tuple whose first entry has rank
/// `first`; the product `g_1 ∘ ⋯ ∘ g_m` is maintained incrementally.
fn for_each_tuple_in_block(
    perms: &[Permutation],
    m: usize,
    first: usize,
    mut visit: impl FnMut(&[&Permutation], &Permutation),
) {
    let n = perms.first().map_or(0, Permutation::len);
    if m == 0 {
        visit(&[], &Permutation::identity(n));
        return;
    }
    let mut idx = vec![0usize; m];
    idx[0] = first;
    // prefix[k] = g_1 ∘ ⋯ ∘ g_{k+1}
    let mut prefix: Vec<Permutation> = Vec::with_capacity(m);
    prefix.push(perms[first].clone());
    for k in 1..m {
        let next = prefix[k - 1].compose(&perms[0]);
        prefix.push(next);
    }
    let mut tuple: Vec<&Permutation> = idx.iter().map(|&i| &perms[i]).collect();
    loop {
        visit(&tuple, &prefix[m - 1]);
        // Odometer over positions 1..m, last position fastest.
        let mut pos = m;
        loop {
            if pos == 1 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < perms.len() {
                break;
            }
            idx[pos] = 0;
        }
        for k in pos..m {
            tuple[k] = &perms[idx[k]];
            prefix[k] = prefix[k - 1].compose(tuple[k]);
        }
    }
}

pub fn enumerate_counts_with(n: usize, m: usize, budget: u128, exec: Exec) -> Result<CountTable> {
    let required = tuple_count(n, m);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    if n == 0 || n > 32 {
        return Err(Error::OutOfBounds(format!("degree {n} outside 1..=32")));
    }
    let perms = all_permutations(n);
    let blocks = if m == 0 { 1 } else { perms.len() };
    let tallies = exec.map_range(blocks, |first| -> Result<Tally> {
        let mut tally = Tally::default();
        let mut failure = None;
        for_each_tuple_in_block(&perms, m, first, |tuple, product| {
            if failure.is_some() {
                return;
            }
            let gens = tuple.iter().copied().chain(std::iter::once(product));
            if !is_transitive(n, gens) {
                tally.intransitive += 1;
                return;
            }
            let cycles = tuple.iter().map(|g| g.num_cycles()).chain([product.num_cycles()]);
            match genus_from_cycle_counts(cycles, n) {
                Ok(g) if g >= 0 => {
                    tally.transitive += 1;
                    *tally.cells.entry((product.cycle_type(), g as usize)).or_default() += 1;
                }
                Ok(g) => failure = Some(Error::InvariantViolation(format!("negative genus {g}"))),
                Err(e) => failure = Some(e),
            }
        });
        match failure {
            Some(e) => Err(e),
            None => Ok(tally),
        }
    });
    let mut total = Tally::default();
    for t in tallies {
        total.merge(t?);
    }
    let n_fact = BigInt::from(factorial(n));
    let cells = total
        .cells
        .into_iter()
        .map(|(k, v)| (k, Rat::new(BigInt::from(v), n_fact.clone())))
        .collect();
    Ok(CountTable {
        n,
        m,
        cells,
        transitive_tuples: total.transitive,
        intransitive_tuples: total.intransitive,
    })
}

/// Number of simultaneous-conjugation classes of transitive tuples whose
/// closing permutation has cycle type `nu`, by Burnside: each tuple
/// contributes `|centralizer| / n!`.
pub fn count_conjugacy_orbits(n: usize, m: usize, nu: &Partition, budget: u128) -> Result<u128> {
    count_conjugacy_orbits_with(n, m, nu, budget, Exec::default())
}

pub fn count_conjugacy_orbits_with(
    n: usize,
    m: usize,
    nu: &Partition,
    budget: u128,
    exec: Exec,
) -> Result<u128> {
    let required = tuple_count(n, m + 1);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    if n == 0 || n > 32 {
        return Err(Error::OutOfBounds(format!("degree {n} outside 1..=32")));
    }
    let perms = all_permutations(n);
    let blocks = if m == 0 { 1 } else { perms.len() };
    let fixed: Vec<u128> = exec.map_range(blocks, |first| {
        let mut sum = 0u128;
        for_each_tuple_in_block(&perms, m, first, |tuple, product| {
            if product.cycle_type() != *nu {
                return;
            }
            if !is_transitive(n, tuple.iter().copied().chain(std::iter::once(product))) {
                return;
            }
            let commuting = perms
                .iter()
                .filter(|h| tuple.iter().all(|g| h.compose(g) == g.compose(h)))
                .count();
            sum += commuting as u128;
        });
        sum
    });
    let total: u128 = fixed.into_iter().sum();
    let n_fact = factorial(n);
    if !total.is_multiple_of(n_fact) {
        return Err(Error::InvariantViolation("Burnside sum not divisible by n!".into()));
    }
    Ok(total / n_fact)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn rank_roundtrip() {
        for n in 0..=5 {
            let all = all_permutations(n);
            assert_eq!(all.len() as u128, factorial(n));
            for (r, perm) in all.iter().enumerate() {
                assert_eq!(perm.rank(), r);
            }
            let mut sorted = all.clone();
            sorted.sort();
            assert_eq!(sorted, all);
        }
    }

    #[test]
    fn genus_examples() {
        let t = Permutation::from_cycles(2, &[&[0, 1]]).unwrap();
        let e2 = Permutation::identity(2);
        assert_eq!(genus_of(&[t.clone(), t.clone()], &e2, 2), Ok(0));
        let e1 = Permutation::identity(1);
        assert_eq!(genus_of(&[e1.clone(), e1.clone(), e1.clone()], &e1, 1), Ok(0));
        let c = Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        assert_eq!(genus_of(&[c.clone(), c.clone()], &c, 3), Ok(1));
        assert_eq!(genus_of(std::slice::from_ref(&t), &e2, 2), Err(Error::NonIntegerGenus(-1)));
    }

    #[test]
    fn small_tables() {
        let t22 = enumerate_counts(2, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(
            t22.to_entries(),
            vec![
                CountEntry { nu: p(&[2]), genus: 0, count: Rat::from(1) },
                CountEntry { nu: p(&[1, 1]), genus: 0, count: Rat::new(1, 2) },
            ]
        );
        assert_eq!((t22.transitive_tuples, t22.intransitive_tuples), (3, 1));

        let t13 = enumerate_counts(1, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(t13.to_entries(), vec![CountEntry { nu: p(&[1]), genus: 0, count: Rat::from(1) }]);

        // n = 3, m = 2, σ a 3-cycle: ten genus-0 tuples (identity with a
        // 3-cycle either way round, or two distinct transpositions) and two
        // genus-1 tuples (c, c).
        let t32 = enumerate_counts(3, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(t32.get(&p(&[3]), 0), Some(&Rat::new(5, 3)));
        assert_eq!(t32.get(&p(&[3]), 1), Some(&Rat::new(1, 3)));
    }

    #[test]
    fn tuple_conservation() {
        for (n, m) in [(2, 2), (3, 2), (3, 3), (4, 2)] {
            let t = enumerate_counts(n, m, DEFAULT_BUDGET).unwrap();
            assert_eq!(t.transitive_tuples + t.intransitive_tuples, factorial(n).pow(m as u32));
            let weighted: Rat = t.cells().fold(Rat::zero(), |acc, (_, _, c)| acc + c);
            assert_eq!(weighted * Rat::from_integer(BigInt::from(factorial(n))), Rat::from_integer(BigInt::from(t.transitive_tuples)));
        }
    }

    #[test]
    fn budget_is_checked_up_front() {
        assert_eq!(
            enumerate_counts(5, 3, 1000),
            Err(Error::BudgetExceeded { required: 1_728_000, budget: 1000 })
        );
        assert!(matches!(
            count_conjugacy_orbits(4, 3, &p(&[4]), 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn orbit_examples() {
        // (e, t) and (t, e) are not simultaneously conjugate.
        assert_eq!(count_conjugacy_orbits(2, 2, &p(&[2]), DEFAULT_BUDGET), Ok(2));
        assert_eq!(count_conjugacy_orbits(2, 2, &p(&[1, 1]), DEFAULT_BUDGET), Ok(1));
        assert_eq!(count_conjugacy_orbits(1, 1, &p(&[1]), DEFAULT_BUDGET), Ok(1));
    }

    #[test]
    fn serial_and_parallel_agree() {
        for (n, m) in [(3, 3), (4, 2)] {
            assert_eq!(
                enumerate_counts_with(n, m, DEFAULT_BUDGET, Exec::Serial).unwrap(),
                enumerate_counts_with(n, m, DEFAULT_BUDGET, Exec::Parallel).unwrap()
            );
        }
    }

    #[test]
    fn json_roundtrip() {
        let t = enumerate_counts(3, 3, DEFAULT_BUDGET).unwrap();
        let text = serde_json::to_string(&t.to_entries()).unwrap();
        let back: Vec<CountEntry> = serde_json::from_str(&text).unwrap();
        assert_eq!(CountTable::from_entries(3, 3, &back).unwrap(), t);
    }
}
