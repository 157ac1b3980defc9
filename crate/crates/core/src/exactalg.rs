//! Exact scalars for the whole crate.
//!
//! Three layers: [`Rat`] (big rationals), [`RatPolyM`] (dense polynomials in
//! the free-point count `m`), and [`HPoly`] (sparse Laurent polynomials in
//! `ħ` over `RatPolyM`, confined to an exponent window).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number, always in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Rat {
        Rat(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Rat {
        Rat(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.to_integer())
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.to_integer().and_then(|n| n.to_i64())
    }

    pub fn recip(&self) -> Rat {
        Rat(self.0.recip())
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn pow(&self, exp: u32) -> Rat {
        Rat(num_traits::pow(self.0.clone(), exp as usize))
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::from_integer(n)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Rat {
        Rat::from_integer(n)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rat> {
        let bad = || Error::Parse { what: "rational", input: s.to_string() };
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        Ok(Rat::new(num, den))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! rat_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
        impl $tr<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(self.0.$method(&rhs.0))
            }
        }
    };
}

rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);
rat_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

/// Dense polynomial in `m` with rational coefficients; `coeffs[k]` multiplies `m^k`.
///
/// Canonical form has no trailing zero coefficient, so the zero polynomial
/// is the empty vector and structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Rat>", into = "Vec<Rat>")]
pub struct RatPolyM {
    coeffs: Vec<Rat>,
}

impl From<Vec<Rat>> for RatPolyM {
    fn from(coeffs: Vec<Rat>) -> RatPolyM {
        RatPolyM::from_coeffs(coeffs)
    }
}

impl From<RatPolyM> for Vec<Rat> {
    fn from(p: RatPolyM) -> Vec<Rat> {
        p.coeffs
    }
}

impl RatPolyM {
    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> RatPolyM {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        RatPolyM { coeffs }
    }

    /// Convenience constructor from integer coefficients, lowest degree first.
    pub fn from_ints(coeffs: &[i64]) -> RatPolyM {
        RatPolyM::from_coeffs(coeffs.iter().map(|&c| Rat::from(c)).collect())
    }

    pub fn zero() -> RatPolyM {
        RatPolyM { coeffs: Vec::new() }
    }

    pub fn one() -> RatPolyM {
        RatPolyM::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> RatPolyM {
        RatPolyM::from_coeffs(vec![c])
    }

    /// The indeterminate `m`.
    pub fn m() -> RatPolyM {
        RatPolyM::from_ints(&[0, 1])
    }

    /// `slope·m + offset`.
    pub fn linear(slope: i64, offset: i64) -> RatPolyM {
        RatPolyM::from_ints(&[offset, slope])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Rat) -> RatPolyM {
        if c.is_zero() {
            return RatPolyM::zero();
        }
        RatPolyM { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn eval(&self, m: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * m + c)
    }

    pub fn pow(&self, exp: u32) -> RatPolyM {
        (0..exp).fold(RatPolyM::one(), |acc, _| &acc * self)
    }

    /// Polynomial long division over the rationals.
    pub fn div_rem(&self, den: &RatPolyM) -> Result<(RatPolyM, RatPolyM)> {
        let dd = den.degree().ok_or(Error::DivisionByZero)?;
        let lead = den.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((RatPolyM::zero(), self.clone()));
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + dd] / &lead;
            if q.is_zero() {
                continue;
            }
            for (j, d) in den.coeffs.iter().enumerate() {
                rem[k + j] -= &(&q * d);
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        Ok((RatPolyM::from_coeffs(quot), RatPolyM::from_coeffs(rem)))
    }

    /// Human-readable form, splitting off every rational linear factor.
    pub fn factored(&self) -> String {
        factor::render(self)
    }
}

impl fmt::Display for RatPolyM {
    /// Dense coefficient list, lowest degree first: `[0, 1/6, -1/4, 1/12]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for RatPolyM {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Rat> for RatPolyM {
    fn from(c: Rat) -> RatPolyM {
        RatPolyM::constant(c)
    }
}

impl From<i64> for RatPolyM {
    fn from(c: i64) -> RatPolyM {
        RatPolyM::constant(Rat::from(c))
    }
}

impl Add<&RatPolyM> for &RatPolyM {
    type Output = RatPolyM;
    fn add(self, rhs: &RatPolyM) -> RatPolyM {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&RatPolyM> for &RatPolyM {
    type Output = RatPolyM;
    fn sub(self, rhs: &RatPolyM) -> RatPolyM {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&RatPolyM> for RatPolyM {
    fn add_assign(&mut self, rhs: &RatPolyM) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), Rat::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        *self = RatPolyM::from_coeffs(std::mem::take(&mut self.coeffs));
    }
}

impl SubAssign<&RatPolyM> for RatPolyM {
    fn sub_assign(&mut self, rhs: &RatPolyM) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), Rat::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
        *self = RatPolyM::from_coeffs(std::mem::take(&mut self.coeffs));
    }
}

impl Mul<&RatPolyM> for &RatPolyM {
    type Output = RatPolyM;
    fn mul(self, rhs: &RatPolyM) -> RatPolyM {
        if self.is_zero() || rhs.is_zero() {
            return RatPolyM::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        RatPolyM::from_coeffs(out)
    }
}

impl Neg for &RatPolyM {
    type Output = RatPolyM;
    fn neg(self) -> RatPolyM {
        RatPolyM { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

/// `base·(base−1)·…·(base−k+1)`; the empty product for `k = 0`.
pub fn falling_factorial(base: &RatPolyM, k: usize) -> RatPolyM {
    let mut acc = RatPolyM::one();
    let mut factor = base.clone();
    let one = RatPolyM::one();
    for _ in 0..k {
        acc = &acc * &factor;
        factor -= &one;
    }
    acc
}

/// `i·C(m·i − 1, i)` as a polynomial of degree `i` in `m`.
pub fn cycle_factor_poly(i: usize) -> RatPolyM {
    assert!(i >= 1, "cycle length must be positive");
    let top = RatPolyM::linear(i as i64, -1);
    let factorial: BigInt = (1..=i).map(BigInt::from).product();
    falling_factorial(&top, i).scale(&Rat::new(BigInt::from(i), factorial))
}

/// `C(m, k) = m(m−1)…(m−k+1)/k!`.
pub fn binomial_poly(k: usize) -> RatPolyM {
    let factorial: BigInt = (1..=k).map(BigInt::from).product();
    falling_factorial(&RatPolyM::m(), k).scale(&Rat::new(1, factorial))
}

/// Quotient `num / den`, failing unless the division is exact.
pub fn exact_divide(num: &RatPolyM, den: &RatPolyM) -> Result<RatPolyM> {
    let (q, r) = num.div_rem(den)?;
    if r.is_zero() {
        Ok(q)
    } else {
        Err(Error::NotDivisible)
    }
}

/// Inclusive range of `ħ` exponents an [`HPoly`] may hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    /// No truncation above, nothing below zero.
    pub const EXACT: Window = Window { lo: 0, hi: i64::MAX };

    pub fn new(lo: i64, hi: i64) -> Window {
        assert!(lo <= hi, "empty hbar window [{lo}, {hi}]");
        Window { lo, hi }
    }

    pub fn contains(&self, e: i64) -> bool {
        self.lo <= e && e <= self.hi
    }

    /// Window of a value computed from operands with windows `self` and
    /// `other`: it is only as accurate as the lower ceiling.
    pub fn meet(&self, other: &Window) -> Window {
        Window { lo: self.lo.min(other.lo), hi: self.hi.min(other.hi) }
    }
}

/// Polynomial in `ħ` (negative exponents allowed) over [`RatPolyM`].
///
/// Exponents above `window.hi` are dropped on construction and by every
/// operation; an exponent below `window.lo` is an error.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HPoly {
    window: Window,
    coeffs: BTreeMap<i64, RatPolyM>,
}

impl HPoly {
    pub fn zero(window: Window) -> HPoly {
        HPoly { window, coeffs: BTreeMap::new() }
    }

    pub fn constant(c: RatPolyM, window: Window) -> HPoly {
        HPoly::monomial(0, c, window).expect("constant below window floor")
    }

    pub fn one(window: Window) -> HPoly {
        HPoly::constant(RatPolyM::one(), window)
    }

    /// `c·ħ^exponent`.
    pub fn monomial(exponent: i64, c: RatPolyM, window: Window) -> Result<HPoly> {
        let mut out = HPoly::zero(window);
        out.add_term(exponent, &c)?;
        Ok(out)
    }

    pub fn from_terms(
        terms: impl IntoIterator<Item = (i64, RatPolyM)>,
        window: Window,
    ) -> Result<HPoly> {
        let mut out = HPoly::zero(window);
        for (e, c) in terms {
            out.add_term(e, &c)?;
        }
        Ok(out)
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exponent: i64) -> RatPolyM {
        self.coeffs.get(&exponent).cloned().unwrap_or_default()
    }

    /// Nonzero `(exponent, coefficient)` pairs in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &RatPolyM)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Adds `c·ħ^exponent` in place.
    pub fn add_term(&mut self, exponent: i64, c: &RatPolyM) -> Result<()> {
        if exponent < self.window.lo {
            return Err(Error::WindowUnderflow { exponent, lo: self.window.lo });
        }
        if exponent > self.window.hi || c.is_zero() {
            return Ok(());
        }
        let slot = self.coeffs.entry(exponent).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&exponent);
        }
        Ok(())
    }

    pub fn add(&self, other: &HPoly) -> HPoly {
        let mut out = self.rewindow_lossy(self.window.meet(&other.window));
        for (e, c) in &other.coeffs {
            out.add_term(*e, c).expect("meet window covers both operands");
        }
        out
    }

    pub fn sub(&self, other: &HPoly) -> HPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> HPoly {
        HPoly {
            window: self.window,
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &HPoly) -> Result<HPoly> {
        self.mul_capped(other, i64::MAX)
    }

    /// Product with every exponent above `cap` discarded as well.
    pub fn mul_capped(&self, other: &HPoly, cap: i64) -> Result<HPoly> {
        let mut out = HPoly::zero(self.window.meet(&other.window));
        self.mul_acc_capped(other, cap, &mut out)?;
        Ok(out)
    }

    /// `acc += self · other`, exponents above `cap` or the window dropped.
    pub fn mul_acc_capped(&self, other: &HPoly, cap: i64, acc: &mut HPoly) -> Result<()> {
        let top = cap.min(acc.window.hi);
        for (ea, a) in &self.coeffs {
            for (eb, b) in &other.coeffs {
                let e = ea + eb;
                if e > top {
                    break;
                }
                acc.add_term(e, &(a * b))?;
            }
        }
        Ok(())
    }

    pub fn scale(&self, c: &Rat) -> HPoly {
        self.scale_poly(&RatPolyM::constant(c.clone()))
    }

    pub fn scale_poly(&self, c: &RatPolyM) -> HPoly {
        let mut out = HPoly::zero(self.window);
        for (e, a) in &self.coeffs {
            out.add_term(*e, &(a * c)).expect("exponents already in window");
        }
        out
    }

    /// Multiplies by `ħ^by`.
    pub fn shift(&self, by: i64) -> Result<HPoly> {
        HPoly::from_terms(self.coeffs.iter().map(|(e, c)| (e + by, c.clone())), self.window)
    }

    /// Same value in a new window; fails if a term sits below the new floor.
    pub fn with_window(&self, window: Window) -> Result<HPoly> {
        HPoly::from_terms(self.coeffs.iter().map(|(e, c)| (*e, c.clone())), window)
    }

    fn rewindow_lossy(&self, window: Window) -> HPoly {
        HPoly {
            window,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(e, _)| window.contains(**e))
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Drops every exponent above `hi` (window unchanged).
    pub fn truncate_above(&self, hi: i64) -> HPoly {
        HPoly {
            window: self.window,
            coeffs: self.coeffs.range(..=hi).map(|(e, c)| (*e, c.clone())).collect(),
        }
    }

    /// Substitutes a rational value for `m` in every coefficient.
    pub fn eval_m(&self, m: &Rat) -> HPoly {
        let mut out = HPoly::zero(self.window);
        for (e, c) in &self.coeffs {
            out.add_term(*e, &RatPolyM::constant(c.eval(m))).expect("in window");
        }
        out
    }

    /// Coefficient map for serialization.
    pub fn to_map(&self) -> BTreeMap<i64, RatPolyM> {
        self.coeffs.clone()
    }
}

impl fmt::Debug for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.coeffs.iter()).finish()
    }
}

mod factor {
    //! Rendering of polynomials as a rational constant times linear factors
    //! over the integers, with any irreducible remainder expanded.

    use super::*;

    const DIVISOR_SEARCH_LIMIT: u64 = 1_000_000_000_000;

    fn to_integer_poly(p: &RatPolyM) -> (Rat, Vec<BigInt>) {
        let lcm = p.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = p
            .coeffs
            .iter()
            .map(|c| (c.numer() * &lcm) / c.denom())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().is_some_and(|c| c.is_negative()) {
            g = -g;
        }
        let prim = ints.iter().map(|c| c / &g).collect();
        (Rat::new(g, lcm), prim)
    }

    fn divisors(n: &BigInt) -> Option<Vec<u64>> {
        let n = n.abs().to_u64()?;
        if n == 0 || n > DIVISOR_SEARCH_LIMIT {
            return None;
        }
        let mut small = Vec::new();
        let mut large = Vec::new();
        let mut d = 1u64;
        while d * d <= n {
            if n % d == 0 {
                small.push(d);
                if d * d != n {
                    large.push(n / d);
                }
            }
            d += 1;
        }
        small.extend(large.into_iter().rev());
        Some(small)
    }

    fn eval_int(p: &[BigInt], num: &BigInt, den: &BigInt) -> BigInt {
        // den^deg · p(num/den)
        let mut acc = BigInt::zero();
        let mut den_pow = BigInt::one();
        for c in p.iter().rev() {
            acc = acc * num + c * &den_pow;
            den_pow *= den;
        }
        acc
    }

    /// Synthetic division of `p` by `(den·m − num)`; the root must be exact.
    fn deflate(p: &[BigInt], num: &BigInt, den: &BigInt) -> Vec<BigInt> {
        let q = RatPolyM::from_coeffs(p.iter().cloned().map(Rat::from).collect());
        let lin = RatPolyM::from_coeffs(vec![Rat::from(-num.clone()), Rat::from(den.clone())]);
        let quot = exact_divide(&q, &lin).expect("root was verified");
        quot.coeffs.iter().map(|c| c.to_integer().expect("Gauss lemma")).collect()
    }

    pub(super) fn render(p: &RatPolyM) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let (content, mut prim) = to_integer_poly(p);
        let mut roots: Vec<(BigInt, BigInt, u32)> = Vec::new();
        let push_root = |num: BigInt, den: BigInt, roots: &mut Vec<(BigInt, BigInt, u32)>| {
            match roots.iter_mut().find(|(n, d, _)| *n == num && *d == den) {
                Some(r) => r.2 += 1,
                None => roots.push((num, den, 1)),
            }
        };
        while prim.len() > 1 && prim[0].is_zero() {
            prim.remove(0);
            push_root(BigInt::zero(), BigInt::one(), &mut roots);
        }
        'search: while prim.len() > 1 {
            let (Some(cs), Some(ls)) = (divisors(&prim[0]), divisors(prim.last().unwrap())) else {
                break;
            };
            for &a in &cs {
                for &b in &ls {
                    let (num, den) = (BigInt::from(a), BigInt::from(b));
                    if !num.gcd(&den).is_one() {
                        continue;
                    }
                    for num in [num.clone(), -num] {
                        if eval_int(&prim, &num, &den).is_zero() {
                            prim = deflate(&prim, &num, &den);
                            push_root(num, den, &mut roots);
                            continue 'search;
                        }
                    }
                }
            }
            break;
        }
        roots.sort_by(|x, y| {
            (Rat::new(x.0.clone(), x.1.clone())).cmp(&Rat::new(y.0.clone(), y.1.clone()))
        });

        // `prim` now has positive leading coefficient; fold its constant
        // value (if it is a constant) into the content.
        let mut content = content;
        let rest = if prim.len() == 1 {
            content = content * Rat::from(prim[0].clone());
            None
        } else {
            Some(prim)
        };

        let mut factors = String::new();
        for (num, den, mult) in &roots {
            let body = linear_factor(num, den);
            let needs_parens = !(num.is_zero() && den.is_one());
            if needs_parens {
                factors.push('(');
                factors.push_str(&body);
                factors.push(')');
            } else {
                factors.push_str(&body);
            }
            if *mult > 1 {
                factors.push_str(&format!("^{mult}"));
            }
        }
        if let Some(rest) = rest {
            factors.push('(');
            factors.push_str(&expanded(&rest));
            factors.push(')');
        }

        let mut out = String::new();
        if content.is_negative() {
            out.push('-');
        }
        let numer = content.numer().abs();
        if factors.is_empty() || !numer.is_one() {
            out.push_str(&numer.to_string());
        }
        out.push_str(&factors);
        if !content.denom().is_one() {
            out.push('/');
            out.push_str(&content.denom().to_string());
        }
        out
    }

    /// `den·m − num` written as e.g. `3m-1`, `m`, `m+2`.
    fn linear_factor(num: &BigInt, den: &BigInt) -> String {
        let mut s = if den.is_one() { "m".to_string() } else { format!("{den}m") };
        if num.is_positive() {
            s.push_str(&format!("-{num}"));
        } else if num.is_negative() {
            s.push_str(&format!("+{}", -num));
        }
        s
    }

    fn expanded(p: &[BigInt]) -> String {
        let mut s = String::new();
        for (k, c) in p.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let first = s.is_empty();
            if c.is_negative() {
                s.push('-');
            } else if !first {
                s.push('+');
            }
            let a = c.abs();
            if k == 0 || !a.is_one() {
                s.push_str(&a.to_string());
            }
            match k {
                0 => {}
                1 => s.push('m'),
                _ => s.push_str(&format!("m^{k}")),
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn rat_is_canonical() {
        let x = r(6, -4);
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(2));
        assert_eq!(x.to_string(), "-3/2");
        assert_eq!(r(0, 7).to_string(), "0");
        assert_eq!(r(0, 7).denom(), &BigInt::from(1));
        assert_eq!("10/4".parse::<Rat>().unwrap(), r(5, 2));
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
    }

    #[test]
    fn falling_factorial_examples() {
        let b = RatPolyM::linear(2, -2);
        assert_eq!(falling_factorial(&b, 1), b);
        assert_eq!(falling_factorial(&RatPolyM::from(5), 3), RatPolyM::from(60));
        assert_eq!(
            falling_factorial(&RatPolyM::linear(3, -2), 2),
            RatPolyM::from_ints(&[6, -15, 9])
        );
        assert_eq!(falling_factorial(&RatPolyM::m(), 0), RatPolyM::one());
    }

    #[test]
    fn cycle_factor_examples() {
        assert_eq!(cycle_factor_poly(1), RatPolyM::linear(1, -1));
        assert_eq!(cycle_factor_poly(2), RatPolyM::from_ints(&[2, -6, 4]));
        let expect = (&(&RatPolyM::linear(3, -1) * &RatPolyM::linear(3, -2))
            * &RatPolyM::linear(3, -3))
            .scale(&r(1, 2));
        assert_eq!(cycle_factor_poly(3), expect);
    }

    #[test]
    fn exact_divide_examples() {
        let m2_1 = RatPolyM::from_ints(&[-1, 0, 1]);
        assert_eq!(exact_divide(&m2_1, &RatPolyM::linear(1, -1)).unwrap(), RatPolyM::linear(1, 1));

        let num = &RatPolyM::m() * &cycle_factor_poly(3);
        let den = &RatPolyM::linear(3, -2) * &RatPolyM::linear(3, -3);
        let expect = (&RatPolyM::m() * &RatPolyM::linear(3, -1)).scale(&r(1, 2));
        assert_eq!(exact_divide(&num, &den).unwrap(), expect);

        let m2 = RatPolyM::from_ints(&[0, 0, 1]);
        assert_eq!(exact_divide(&m2, &RatPolyM::linear(1, 1)), Err(Error::NotDivisible));
        assert_eq!(exact_divide(&m2, &RatPolyM::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn dense_and_factored_rendering() {
        let p = RatPolyM::from_coeffs(vec![r(0, 1), r(1, 6), r(-1, 4), r(1, 12)]);
        assert_eq!(p.to_string(), "[0, 1/6, -1/4, 1/12]");
        assert_eq!(p.factored(), "m(m-1)(m-2)/12");
        let q = (&RatPolyM::m() * &RatPolyM::linear(3, -1)).scale(&r(1, 2));
        assert_eq!(q.factored(), "m(3m-1)/2");
        assert_eq!(RatPolyM::one().factored(), "1");
        assert_eq!(RatPolyM::from(-3).factored(), "-3");
        assert_eq!(RatPolyM::zero().factored(), "0");
        let sq = RatPolyM::linear(1, -1).pow(2);
        assert_eq!(sq.scale(&r(5, 3)).factored(), "5(m-1)^2/3");
        let irreducible = RatPolyM::from_ints(&[1, 0, 1]);
        assert_eq!((&irreducible * &RatPolyM::m()).factored(), "m(m^2+1)");
        assert_eq!(RatPolyM::linear(-2, 4).factored(), "-2(m-2)");
    }

    #[test]
    fn hpoly_window_rules() {
        let w = Window::new(-2, 2);
        let h = HPoly::monomial(2, RatPolyM::one(), w).unwrap();
        assert!(h.mul(&h).unwrap().is_zero());
        let low = HPoly::monomial(-2, RatPolyM::one(), w).unwrap();
        assert!(matches!(low.mul(&low), Err(Error::WindowUnderflow { exponent: -4, lo: -2 })));
        assert_eq!(low.mul(&h).unwrap(), HPoly::one(w));
        assert!(HPoly::monomial(3, RatPolyM::one(), w).unwrap().is_zero());
    }

    fn arb_rat() -> impl Strategy<Value = Rat> {
        (-20i64..20, 1i64..12).prop_map(|(n, d)| Rat::new(n, d))
    }

    fn arb_poly() -> impl Strategy<Value = RatPolyM> {
        prop::collection::vec(arb_rat(), 0..6).prop_map(RatPolyM::from_coeffs)
    }

    fn arb_hpoly(window: Window) -> impl Strategy<Value = HPoly> {
        prop::collection::vec((window.lo..=window.hi, arb_poly()), 0..5)
            .prop_map(move |terms| HPoly::from_terms(terms, window).unwrap())
    }

    proptest! {
        #[test]
        fn rat_construction_is_lowest_terms(n in -1000i64..1000, d in -50i64..50) {
            prop_assume!(d != 0);
            let x = Rat::new(n, d);
            prop_assert!(x.denom() > &BigInt::zero());
            prop_assert!(x.numer().gcd(x.denom()).is_one());
        }

        #[test]
        fn poly_ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a + &(-&a)).is_zero());
            prop_assert_eq!(&a + &b, &b + &a);
        }

        #[test]
        fn div_rem_reconstructs(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b).unwrap();
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.degree().is_none_or(|d| d < b.degree().unwrap()));
        }

        #[test]
        fn falling_factorial_splits(base in arb_poly(), j in 0usize..=6, k in 0usize..=6) {
            let lhs = falling_factorial(&base, j + k);
            let shifted = &base - &RatPolyM::from(j as i64);
            let rhs = &falling_factorial(&base, j) * &falling_factorial(&shifted, k);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn hpoly_mul_matches_convolution(
            a in arb_hpoly(Window::new(-3, 3)),
            b in arb_hpoly(Window::new(-3, 3)),
        ) {
            let wide = Window::new(-6, 6);
            let prod = a.with_window(wide).unwrap().mul(&b.with_window(wide).unwrap()).unwrap();
            for e in -6..=6 {
                let mut expect = RatPolyM::zero();
                for i in -3..=3 {
                    expect += &(&a.coeff(i) * &b.coeff(e - i));
                }
                prop_assert_eq!(prod.coeff(e), expect);
            }
        }

        #[test]
        fn factored_rendering_never_panics(a in arb_poly()) {
            let s = a.factored();
            prop_assert!(!s.is_empty());
        }
    }
}
