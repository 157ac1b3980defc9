//! Graded series in the power sums `p_1, p_2, …` and the Schur-function
//! machinery built on them.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{HPoly, Rat, RatPolyM, Window};
use crate::par::Exec;
use crate::partitions::{diagram_stats, partitions_of, Partition};

/// A finitely supported series `Σ c_μ p_μ` with [`HPoly`] coefficients,
/// truncated at total weight `weight_bound`.
///
/// An optional graded cap drops any term whose `ħ` exponent plus twice its
/// weight exceeds the cap. For series whose every term satisfies
/// `exponent + 2·weight ≥ 0` this grading is additive under products, so
/// the dropped terms never feed back into retained ones.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PSeries {
    weight_bound: usize,
    graded_cap: Option<i64>,
    terms: BTreeMap<Partition, HPoly>,
}

/// One entry of the JSON rendering of a [`PSeries`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PSeriesTerm {
    pub mu: Partition,
    pub coeff: BTreeMap<i64, RatPolyM>,
}

fn meet_cap(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) | (None, x) => x,
    }
}

impl PSeries {
    pub fn zero(weight_bound: usize) -> PSeries {
        PSeries { weight_bound, graded_cap: None, terms: BTreeMap::new() }
    }

    pub fn one(weight_bound: usize, window: Window) -> PSeries {
        PSeries::monomial(Partition::empty(), HPoly::one(window), weight_bound)
    }

    /// `coeff · p_mu`, or zero if `mu` is heavier than the bound.
    pub fn monomial(mu: Partition, coeff: HPoly, weight_bound: usize) -> PSeries {
        let mut out = PSeries::zero(weight_bound);
        out.add_term(mu, &coeff);
        out
    }

    /// `Σ c_μ p_μ` with rational, `ħ`-free coefficients.
    pub fn from_rationals(
        terms: impl IntoIterator<Item = (Partition, Rat)>,
        weight_bound: usize,
    ) -> PSeries {
        let mut out = PSeries::zero(weight_bound);
        for (mu, c) in terms {
            out.add_term(mu, &HPoly::constant(RatPolyM::constant(c), Window::EXACT));
        }
        out
    }

    pub fn with_graded_cap(mut self, cap: Option<i64>) -> PSeries {
        self.graded_cap = cap;
        if let Some(cap) = cap {
            self.terms = std::mem::take(&mut self.terms)
                .into_iter()
                .map(|(mu, c)| {
                    let top = cap - 2 * mu.weight() as i64;
                    (mu, c.truncate_above(top))
                })
                .filter(|(_, c)| !c.is_zero())
                .collect();
        }
        self
    }

    pub fn weight_bound(&self) -> usize {
        self.weight_bound
    }

    pub fn graded_cap(&self) -> Option<i64> {
        self.graded_cap
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms in crate order: by weight, then reverse-lex.
    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &HPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mu: &Partition) -> Option<&HPoly> {
        self.terms.get(mu)
    }

    /// Coefficient of `ħ^exponent p_mu`.
    pub fn coeff_at(&self, mu: &Partition, exponent: i64) -> RatPolyM {
        self.terms.get(mu).map(|c| c.coeff(exponent)).unwrap_or_default()
    }

    /// Coefficient of `p_mu` as a plain rational: the `ħ^0` term evaluated
    /// as a constant polynomial.
    pub fn rational_coeff(&self, mu: &Partition) -> Rat {
        self.coeff_at(mu, 0).coeff(0)
    }

    /// Adds `c · p_mu`, dropping it if too heavy or above the graded cap.
    pub fn add_term(&mut self, mu: Partition, c: &HPoly) {
        let w = mu.weight();
        if w > self.weight_bound || c.is_zero() {
            return;
        }
        let c = match self.graded_cap {
            Some(cap) => c.truncate_above(cap - 2 * w as i64),
            None => c.clone(),
        };
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mu) {
            Some(slot) => {
                let sum = slot.add(&c);
                if sum.is_zero() {
                    self.terms.remove(&mu);
                } else {
                    *slot = sum;
                }
            }
            None => {
                self.terms.insert(mu, c);
            }
        }
    }

    pub fn add(&self, other: &PSeries) -> PSeries {
        let mut out = PSeries {
            weight_bound: self.weight_bound.min(other.weight_bound),
            graded_cap: meet_cap(self.graded_cap, other.graded_cap),
            terms: BTreeMap::new(),
        };
        for (mu, c) in self.terms.iter().chain(&other.terms) {
            out.add_term(mu.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> PSeries {
        self.map_coeffs(|c| Ok(c.neg())).expect("negation cannot fail")
    }

    pub fn sub(&self, other: &PSeries) -> PSeries {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> PSeries {
        self.map_coeffs(|h| Ok(h.scale(c))).expect("scaling cannot fail")
    }

    pub fn scale_hpoly(&self, c: &HPoly) -> Result<PSeries> {
        self.map_coeffs(|h| h.mul(c))
    }

    /// Applies `f` to every coefficient, keeping keys.
    pub fn map_coeffs(&self, f: impl Fn(&HPoly) -> Result<HPoly>) -> Result<PSeries> {
        self.map_terms(|_, c| f(c))
    }

    /// Applies `f` to every `(μ, coefficient)`, keeping keys.
    pub fn map_terms(&self, f: impl Fn(&Partition, &HPoly) -> Result<HPoly>) -> Result<PSeries> {
        let mut out = PSeries { terms: BTreeMap::new(), ..self.clone_shape() };
        for (mu, c) in &self.terms {
            out.add_term(mu.clone(), &f(mu, c)?);
        }
        Ok(out)
    }

    fn clone_shape(&self) -> PSeries {
        PSeries { weight_bound: self.weight_bound, graded_cap: self.graded_cap, terms: BTreeMap::new() }
    }

    /// Only the terms of weight exactly `w`.
    pub fn weight_part(&self, w: usize) -> PSeries {
        self.filter(|mu| mu.weight() == w)
    }

    pub fn filter(&self, keep: impl Fn(&Partition) -> bool) -> PSeries {
        let mut out = self.clone_shape();
        out.terms = self.terms.iter().filter(|(mu, _)| keep(mu)).map(|(m, c)| (m.clone(), c.clone())).collect();
        out
    }

    /// Declares the series valid through `weight_bound`. Raising the bound
    /// is only sound for series known exactly (e.g. homogeneous ones).
    pub fn with_weight_bound(&self, weight_bound: usize) -> PSeries {
        let mut out = self.filter(|mu| mu.weight() <= weight_bound);
        out.weight_bound = weight_bound;
        out
    }

    /// Same terms, lower weight bound.
    pub fn truncate_weight(&self, weight_bound: usize) -> PSeries {
        let mut out = self.filter(|mu| mu.weight() <= weight_bound);
        out.weight_bound = weight_bound.min(self.weight_bound);
        out
    }

    /// Substitutes an integer or rational value for `m`.
    pub fn eval_m(&self, m: &Rat) -> PSeries {
        self.map_coeffs(|c| Ok(c.eval_m(m))).expect("evaluation cannot fail")
    }

    pub fn mul(&self, other: &PSeries) -> Result<PSeries> {
        self.mul_with(other, Exec::default())
    }

    /// Truncated product; output monomials are computed independently under
    /// `exec` and assembled in key order.
    pub fn mul_with(&self, other: &PSeries, exec: Exec) -> Result<PSeries> {
        let mut out = PSeries {
            weight_bound: self.weight_bound.min(other.weight_bound),
            graded_cap: meet_cap(self.graded_cap, other.graded_cap),
            terms: BTreeMap::new(),
        };
        let left: Vec<(&Partition, &HPoly)> = self.terms.iter().collect();
        let right: Vec<(&Partition, &HPoly)> = other.terms.iter().collect();
        let mut plan: BTreeMap<Partition, Vec<(usize, usize)>> = BTreeMap::new();
        for (i, (a, _)) in left.iter().enumerate() {
            for (j, (b, _)) in right.iter().enumerate() {
                if a.weight() + b.weight() <= out.weight_bound {
                    plan.entry(a.union(b)).or_default().push((i, j));
                }
            }
        }
        let plan: Vec<(Partition, Vec<(usize, usize)>)> = plan.into_iter().collect();
        let cap = out.graded_cap;
        let products = exec.map(&plan, |(mu, pairs)| -> Result<HPoly> {
            let top = cap.map_or(i64::MAX, |c| c - 2 * mu.weight() as i64);
            let (i0, j0) = pairs[0];
            let mut acc = HPoly::zero(left[i0].1.window().meet(&right[j0].1.window()));
            for &(i, j) in pairs {
                left[i].1.mul_acc_capped(right[j].1, top, &mut acc)?;
            }
            Ok(acc)
        });
        for ((mu, _), c) in plan.into_iter().zip(products) {
            out.add_term(mu, &c?);
        }
        Ok(out)
    }

    /// The constant (weight-0) coefficient.
    pub fn constant_term(&self) -> Option<&HPoly> {
        self.terms.get(&Partition::empty())
    }

    /// Terms for JSON rendering, in crate order.
    pub fn to_terms(&self) -> Vec<PSeriesTerm> {
        self.terms
            .iter()
            .map(|(mu, c)| PSeriesTerm { mu: mu.clone(), coeff: c.to_map() })
            .collect()
    }

    pub fn from_terms(terms: &[PSeriesTerm], weight_bound: usize, window: Window) -> Result<PSeries> {
        let mut out = PSeries::zero(weight_bound);
        for t in terms {
            let c = HPoly::from_terms(t.coeff.iter().map(|(e, p)| (*e, p.clone())), window)?;
            out.add_term(t.mu.clone(), &c);
        }
        Ok(out)
    }

    /// Moves every coefficient into `window`.
    pub fn with_window(&self, window: Window) -> Result<PSeries> {
        self.map_coeffs(|c| c.with_window(window))
    }
}

/// `log(a) = Σ_{k≥1} (−1)^{k+1} (a−1)^k / k`, truncated at the weight bound.
pub fn log_series(a: &PSeries) -> Result<PSeries> {
    log_series_with(a, Exec::default())
}

pub fn log_series_with(a: &PSeries, exec: Exec) -> Result<PSeries> {
    let constant = a.constant_term().ok_or(Error::BadConstantTerm)?;
    if constant.terms().count() != 1 || !constant.coeff(0).eq(&RatPolyM::one()) {
        return Err(Error::BadConstantTerm);
    }
    let x = a.filter(|mu| !mu.is_empty());
    let mut out = x.clone_shape();
    let mut power = x.clone();
    for k in 1..=a.weight_bound.max(1) {
        if power.is_zero() {
            break;
        }
        let sign = if k % 2 == 1 { 1 } else { -1 };
        out = out.add(&power.scale(&Rat::new(sign, k as i64)));
        if k < a.weight_bound {
            power = power.mul_with(&x, exec)?;
        } else {
            break;
        }
    }
    Ok(out)
}

/// `exp(x) = Σ x^k / k!`; `x` must have no weight-0 term.
pub fn exp_series(x: &PSeries, window: Window) -> Result<PSeries> {
    if x.constant_term().is_some() {
        return Err(Error::InvariantViolation("exp_series argument has a constant term".into()));
    }
    let mut out = PSeries::one(x.weight_bound, window).add(&x.clone_shape());
    let mut term = PSeries::one(x.weight_bound, window);
    for k in 1..=x.weight_bound {
        term = term.mul(x)?.scale(&Rat::new(1, k as i64));
        if term.is_zero() {
            break;
        }
        out = out.add(&term);
    }
    Ok(out)
}

/// `h_k = Σ_{μ⊢k} p_μ / z_μ`, the degree-k coefficient of `exp(Σ p_i t^i / i)`.
pub fn one_part_schur(k: usize, weight_bound: usize) -> PSeries {
    PSeries::from_rationals(
        partitions_of(k).into_iter().map(|mu| {
            let z = diagram_stats(&mu).z;
            (mu, Rat::new(1, BigInt::from(z)))
        }),
        weight_bound,
    )
}

/// Schur function `s_ν` in power sums, via the Jacobi–Trudi determinant
/// `det(h_{ν_i − i + j})` expanded by cofactors.
pub fn schur(nu: &Partition) -> PSeries {
    let n = nu.weight();
    let l = nu.len();
    let h: Vec<PSeries> = (0..=n).map(|k| one_part_schur(k, n)).collect();
    let entry = |i: usize, j: usize| -> Option<&PSeries> {
        let idx = nu.parts()[i] as i64 - i as i64 + j as i64;
        (0..=n as i64).contains(&idx).then(|| &h[idx as usize])
    };
    determinant(l, n, entry)
}

/// Cofactor expansion down the rows, memoized on the set of unused columns,
/// so an `l × l` determinant costs `O(l · 2^l)` series products.
fn determinant<'a>(
    l: usize,
    weight_bound: usize,
    entry: impl Fn(usize, usize) -> Option<&'a PSeries>,
) -> PSeries {
    let one = PSeries::one(weight_bound, Window::EXACT);
    if l == 0 {
        return one;
    }
    // minors[mask] = det of the last popcount(mask) rows on the columns in mask.
    let mut minors: HashMap<u32, PSeries> = HashMap::new();
    minors.insert(0, one);
    for row in (0..l).rev() {
        let size = l - row;
        let mut next: HashMap<u32, PSeries> = HashMap::new();
        for mask in 0u32..(1 << l) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let mut acc = PSeries::zero(weight_bound);
            for (pos, col) in (0..l).filter(|c| mask & (1 << c) != 0).enumerate() {
                let Some(e) = entry(row, col) else { continue };
                let Some(minor) = minors.get(&(mask & !(1 << col))) else { continue };
                let prod = e.mul_with(minor, Exec::Serial).expect("exact window");
                acc = if pos % 2 == 0 { acc.add(&prod) } else { acc.sub(&prod) };
            }
            if !acc.is_zero() {
                next.insert(mask, acc);
            }
        }
        minors = next;
    }
    minors.remove(&((1u32 << l) - 1)).unwrap_or_else(|| PSeries::zero(weight_bound))
}

/// `s_ν(p_1, p_2ħ, p_3ħ², …)`: each `p_μ` picks up `ħ^{|μ|−l(μ)}`.
pub fn scale_schur(nu: &Partition) -> PSeries {
    scale_by_ramification(&schur(nu))
}

/// Multiplies every `p_μ` coefficient by `ħ^{|μ|−l(μ)}`.
pub fn scale_by_ramification(s: &PSeries) -> PSeries {
    s.map_terms(|mu, c| c.shift((mu.weight() - mu.len()) as i64))
        .expect("nonnegative shift stays in window")
}

/// `s_ν(1, …, 1)` with `n_vars` ones: every `p_i` set to `n_vars`.
pub fn principal_specialization(nu: &Partition, n_vars: u64) -> Rat {
    let value = Rat::from_integer(n_vars);
    schur(nu)
        .terms()
        .map(|(mu, c)| c.coeff(0).coeff(0) * value.pow(mu.len() as u32))
        .fold(Rat::zero(), |a, b| a + b)
}

/// Irreducible characters of `S_n`: `χ^λ(C_μ) = z_μ · [p_μ] s_λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    pub n: usize,
    /// Row and column labels, in crate order.
    pub partitions: Vec<Partition>,
    entries: BTreeMap<(Partition, Partition), i64>,
}

pub const DEFAULT_CHARACTER_BOUND: usize = 10;

impl CharacterTable {
    pub fn get(&self, lambda: &Partition, mu: &Partition) -> i64 {
        self.entries[&(lambda.clone(), mu.clone())]
    }

    pub fn row(&self, lambda: &Partition) -> Vec<i64> {
        self.partitions.iter().map(|mu| self.get(lambda, mu)).collect()
    }
}

pub fn character_table(n: usize, bound: usize) -> Result<CharacterTable> {
    character_table_with(n, bound, Exec::default())
}

pub fn character_table_with(n: usize, bound: usize, exec: Exec) -> Result<CharacterTable> {
    if n > bound {
        return Err(Error::BoundExceeded { size: n, bound });
    }
    let partitions = partitions_of(n);
    let rows = exec.map(&partitions, |lambda| -> Result<Vec<i64>> {
        let s = schur(lambda);
        partitions
            .iter()
            .map(|mu| {
                let value = s.rational_coeff(mu) * Rat::from_integer(diagram_stats(mu).z);
                value.to_i64().ok_or_else(|| Error::NonIntegerEntry {
                    lambda: lambda.to_string(),
                    mu: mu.to_string(),
                })
            })
            .collect()
    });
    let mut entries = BTreeMap::new();
    for (lambda, row) in partitions.iter().zip(rows) {
        for (mu, v) in partitions.iter().zip(row?) {
            entries.insert((lambda.clone(), mu.clone()), v);
        }
    }
    Ok(CharacterTable { n, partitions, entries })
}
