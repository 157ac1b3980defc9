//! Integer partitions and Young-diagram statistics.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
///
/// Ordered by weight first, then reverse-lexicographically, so that
/// `(4) < (3,1) < (2,2) < (2,1,1) < (1,1,1,1)`; every sorted collection in the
/// crate uses this order.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Partition> {
        let valid = parts.iter().all(|&p| p > 0) && parts.windows(2).all(|w| w[0] >= w[1]);
        if !valid {
            return Err(Error::Parse { what: "partition", input: format!("{parts:?}") });
        }
        Ok(Partition { parts })
    }

    /// Sorts the parts into weakly decreasing order, dropping zeros.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Partition {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Partition {
        Partition { parts: Vec::new() }
    }

    /// `(1^n)`.
    pub fn column(n: usize) -> Partition {
        Partition { parts: vec![1; n] }
    }

    /// `(n)`, or the empty partition for `n = 0`.
    pub fn row(n: usize) -> Partition {
        Partition::from_unsorted(vec![n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `d_i`, the number of parts equal to `i`, for `i` in `1..=largest part`.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in self.parts.iter().rev() {
            match out.last_mut() {
                Some((q, d)) if *q == p => *d += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    pub fn multiplicity(&self, part: usize) -> usize {
        self.parts.iter().filter(|&&p| p == part).count()
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.parts.first().copied().unwrap_or(0);
        let parts = (0..width).map(|j| self.parts.iter().filter(|&&p| p > j).count()).collect();
        Partition { parts }
    }

    /// Cells as zero-based `(row, column)` pairs, row by row.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts.iter().enumerate().flat_map(|(i, &len)| (0..len).map(move |j| (i, j)))
    }

    /// Content `column − row` of every cell, in [`cells`](Self::cells) order.
    pub fn contents(&self) -> Vec<i64> {
        self.cells().map(|(i, j)| j as i64 - i as i64).collect()
    }

    /// Hook length `arm + leg + 1` of every cell, in [`cells`](Self::cells) order.
    pub fn hooks(&self) -> Vec<usize> {
        let conj = self.conjugate();
        self.cells()
            .map(|(i, j)| (self.parts[i] - j - 1) + (conj.parts[j] - i - 1) + 1)
            .collect()
    }

    /// One copy of `part` removed; `None` if `part` does not occur.
    pub fn remove_part(&self, part: usize) -> Option<Partition> {
        let pos = self.parts.iter().position(|&p| p == part)?;
        let mut parts = self.parts.clone();
        parts.remove(pos);
        Some(Partition { parts })
    }

    /// Multiset union of the parts (the index of `p_self · p_other`).
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = Vec::with_capacity(self.len() + other.len());
        let (mut a, mut b) = (self.parts.iter().peekable(), other.parts.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&x), Some(&&y)) if x >= y => {
                    parts.push(x);
                    a.next();
                }
                (_, Some(&&y)) => {
                    parts.push(y);
                    b.next();
                }
                (Some(&&x), None) => {
                    parts.push(x);
                    a.next();
                }
                (None, None) => break,
            }
        }
        Partition { parts }
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Partition) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Partition) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<usize>) -> Result<Partition> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Vec<usize> {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "-");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses `"3,1,1"`; `"-"` is the empty partition.
    fn from_str(s: &str) -> Result<Partition> {
        let bad = || Error::Parse { what: "partition", input: s.to_string() };
        let s = s.trim();
        if s == "-" {
            return Ok(Partition::empty());
        }
        if s.is_empty() {
            return Err(bad());
        }
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| bad())?;
        Partition::new(parts).map_err(|_| bad())
    }
}

/// All partitions of `n` in reverse-lexicographic order.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill(n, n, &mut current, &mut out);
    out
}

fn fill(remaining: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition { parts: current.clone() });
        return;
    }
    for part in (1..=max_part.min(remaining)).rev() {
        current.push(part);
        fill(remaining - part, part, current, out);
        current.pop();
    }
}

/// All partitions of weight `1..=n` (weight 0 excluded), in crate order.
pub fn partitions_up_to(n: usize) -> Vec<Partition> {
    (1..=n).flat_map(partitions_of).collect()
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Statistics of a Young diagram and of the matching conjugacy class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramStats {
    pub contents: Vec<i64>,
    pub hooks: Vec<usize>,
    /// Dimension of the irreducible representation (hook-length formula).
    pub dim: u128,
    /// Centralizer order `∏ i^{d_i} d_i!`.
    pub z: u128,
    pub class_size: u128,
    /// `∏ d_i!`.
    pub aut: u128,
}

/// Largest weight for which the `u128` statistics cannot overflow.
pub const MAX_STATS_WEIGHT: usize = 33;

pub fn diagram_stats(nu: &Partition) -> DiagramStats {
    let n = nu.weight();
    assert!(n <= MAX_STATS_WEIGHT, "diagram statistics limited to weight {MAX_STATS_WEIGHT}");
    let hooks = nu.hooks();
    let hook_product: u128 = hooks.iter().map(|&h| h as u128).product();
    let mut z = 1u128;
    let mut aut = 1u128;
    for (part, d) in nu.multiplicities() {
        aut *= factorial(d);
        z *= (part as u128).pow(d as u32) * factorial(d);
    }
    let n_fact = factorial(n);
    DiagramStats {
        contents: nu.contents(),
        hooks,
        dim: n_fact / hook_product,
        z,
        class_size: n_fact / z,
        aut,
    }
}

pub const DEFAULT_SYT_BOUND: usize = 10;

/// Counts standard Young tableaux of shape `nu` by peeling off corner cells.
pub fn dimension_by_syt(nu: &Partition, bound: usize) -> Result<u128> {
    let n = nu.weight();
    if n > bound {
        return Err(Error::BoundExceeded { size: n, bound });
    }
    let mut shape = nu.parts.clone();
    Ok(count_tableaux(&mut shape))
}

fn count_tableaux(shape: &mut Vec<usize>) -> u128 {
    if shape.is_empty() {
        return 1;
    }
    let mut total = 0;
    for row in 0..shape.len() {
        // The largest entry sits at a corner: end of a row longer than the next.
        let next = shape.get(row + 1).copied().unwrap_or(0);
        if shape[row] > next {
            shape[row] -= 1;
            let popped = shape[row] == 0;
            if popped {
                shape.pop();
            }
            total += count_tableaux(shape);
            if popped {
                shape.push(0);
            }
            shape[row] += 1;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn sorted(mut v: Vec<i64>) -> Vec<i64> {
        v.sort_unstable();
        v
    }

    #[test]
    fn enumeration_order_and_counts() {
        assert_eq!(partitions_of(0), vec![Partition::empty()]);
        let four: Vec<String> = partitions_of(4).iter().map(ToString::to_string).collect();
        assert_eq!(four, ["4", "3,1", "2,2", "2,1,1", "1,1,1,1"]);
        let counts: Vec<usize> = (0..=10).map(|n| partitions_of(n).len()).collect();
        assert_eq!(counts, [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        let mut sorted_four = partitions_of(4);
        sorted_four.sort();
        assert_eq!(sorted_four, partitions_of(4));
    }

    #[test]
    fn stats_examples() {
        let s = diagram_stats(&p(&[2, 1]));
        assert_eq!(sorted(s.contents), [-1, 0, 1]);
        let mut hooks = s.hooks;
        hooks.sort_unstable();
        assert_eq!(hooks, [1, 1, 3]);
        assert_eq!((s.dim, s.z, s.class_size, s.aut), (2, 2, 3, 1));

        let row = diagram_stats(&p(&[5]));
        assert_eq!(row.contents, [0, 1, 2, 3, 4]);
        assert_eq!(row.hooks, [5, 4, 3, 2, 1]);
        assert_eq!(row.dim, 1);

        let s31 = diagram_stats(&p(&[3, 1]));
        assert_eq!(s31.hooks, [4, 2, 1, 1]);
        assert_eq!((s31.dim, s31.class_size), (3, 8));

        let e = diagram_stats(&Partition::empty());
        assert_eq!((e.dim, e.z, e.class_size, e.aut), (1, 1, 1, 1));
        assert!(e.contents.is_empty() && e.hooks.is_empty());

        assert_eq!(diagram_stats(&p(&[2, 2, 1, 1, 1])).aut, 12);
    }

    #[test]
    fn syt_examples() {
        assert_eq!(dimension_by_syt(&p(&[1, 1, 1]), 10), Ok(1));
        assert_eq!(dimension_by_syt(&p(&[2, 2]), 10), Ok(2));
        assert_eq!(dimension_by_syt(&p(&[2, 1]), 10), Ok(2));
        assert_eq!(dimension_by_syt(&Partition::empty(), 10), Ok(1));
        assert!(matches!(
            dimension_by_syt(&Partition::row(11), DEFAULT_SYT_BOUND),
            Err(Error::BoundExceeded { size: 11, bound: 10 })
        ));
    }

    #[test]
    fn text_format() {
        assert_eq!("3,1,1".parse::<Partition>().unwrap(), p(&[3, 1, 1]));
        assert_eq!("-".parse::<Partition>().unwrap(), Partition::empty());
        assert_eq!(Partition::empty().to_string(), "-");
        for bad in ["", "1,3", "2,0", "a", "2,,1"] {
            assert!(bad.parse::<Partition>().is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn union_and_removal() {
        assert_eq!(p(&[3, 1]).union(&p(&[2, 1])), p(&[3, 2, 1, 1]));
        assert_eq!(p(&[3, 1, 1]).remove_part(1), Some(p(&[3, 1])));
        assert_eq!(p(&[3, 1]).remove_part(2), None);
    }

    #[test]
    fn regular_representation_counts() {
        for n in 0..=8 {
            let all = partitions_of(n);
            let dims: u128 = all.iter().map(|nu| diagram_stats(nu).dim.pow(2)).sum();
            let classes: u128 = all.iter().map(|nu| diagram_stats(nu).class_size).sum();
            assert_eq!(dims, factorial(n));
            assert_eq!(classes, factorial(n));
            for nu in &all {
                assert_eq!(dimension_by_syt(nu, 10).unwrap(), diagram_stats(nu).dim, "{nu:?}");
            }
        }
    }

    fn arb_partition() -> impl Strategy<Value = Partition> {
        prop::collection::vec(1usize..7, 0..7).prop_map(Partition::from_unsorted)
    }

    proptest! {
        #[test]
        fn conjugation_negates_contents(nu in arb_partition()) {
            let conj = nu.conjugate();
            prop_assert_eq!(conj.conjugate(), nu.clone());
            let negated: Vec<i64> = nu.contents().iter().map(|c| -c).collect();
            prop_assert_eq!(sorted(conj.contents()), sorted(negated));
            let mut h1 = nu.hooks();
            let mut h2 = conj.hooks();
            h1.sort_unstable();
            h2.sort_unstable();
            prop_assert_eq!(h1, h2);
        }

        #[test]
        fn content_sum_identity(nu in arb_partition()) {
            let choose2 = |k: usize| (k * k.saturating_sub(1) / 2) as i64;
            let expect: i64 = nu.parts().iter().map(|&k| choose2(k)).sum::<i64>()
                - nu.conjugate().parts().iter().map(|&k| choose2(k)).sum::<i64>();
            prop_assert_eq!(nu.contents().iter().sum::<i64>(), expect);
        }

        #[test]
        fn json_roundtrip(nu in arb_partition()) {
            let s = serde_json::to_string(&nu).unwrap();
            prop_assert_eq!(serde_json::from_str::<Partition>(&s).unwrap(), nu.clone());
            prop_assert_eq!(nu.to_string().parse::<Partition>().unwrap(), nu);
        }
    }
}
