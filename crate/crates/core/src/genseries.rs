//! The covering-count generating series
//!
//! `S = ħ² log Σ_n Σ_{ν⊢n} ∏_{k∈ν}(1 + c(k)ħ)^m · dim_ν/n! · ħ^{−2n} s_ν(p_1, p_2ħ, p_3ħ², …)`
//!
//! whose `p_ν ħ^{2g}` coefficient is the genus-`g` count `b_{g,ν,m}`, a
//! polynomial in `m`; and the genus-zero closed form it must agree with.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{
    binomial_poly, cycle_factor_poly, exact_divide, falling_factorial, HPoly, Rat, RatPolyM,
    Window,
};
use crate::par::Exec;
use crate::partitions::{diagram_stats, factorial, partitions_of, Partition};
use crate::symfunc::{log_series_with, scale_by_ramification, schur, PSeries};

/// Rule assigning an `ħ`-polynomial weight `y_c` to each content `c`.
#[derive(Clone)]
pub enum ContentWeights {
    /// `y_c = 1`.
    Unit,
    /// `y_c = (1 + cħ)^m` expanded in `ħ`, coefficients `C(m,k)·c^k`.
    Bms,
    Custom(Arc<dyn Fn(i64, Window) -> HPoly + Send + Sync>),
}

impl fmt::Debug for ContentWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContentWeights::Unit => write!(f, "Unit"),
            ContentWeights::Bms => write!(f, "Bms"),
            ContentWeights::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl ContentWeights {
    pub fn weight(&self, content: i64, window: Window) -> HPoly {
        match self {
            ContentWeights::Unit => HPoly::one(window),
            ContentWeights::Bms => {
                if content == 0 {
                    return HPoly::one(window);
                }
                let top = window.hi.max(0) as usize;
                let c = Rat::from(content);
                HPoly::from_terms(
                    (0..=top).map(|k| (k as i64, binomial_poly(k).scale(&c.pow(k as u32)))),
                    window,
                )
                .expect("nonnegative exponents")
            }
            ContentWeights::Custom(rule) => rule(content, window),
        }
    }
}

/// `Y(ν) = ∏_{k∈ν} y_{c(k)}`, truncated to the window.
pub fn content_product(nu: &Partition, weights: &ContentWeights, window: Window) -> HPoly {
    nu.contents().into_iter().fold(HPoly::one(window), |acc, c| {
        acc.mul(&weights.weight(c, window)).expect("weights have no negative exponents")
    })
}

/// Eigenvalue of multiplication by `Σ_{σ∈S_n} ħ^{n − l(σ)} σ` on the
/// character `χ^ν`: `dim_ν/n! · ∏_{k∈ν}(1 + c(k)ħ)`.
pub fn eigenvalue_b(nu: &Partition) -> HPoly {
    let stats = diagram_stats(nu);
    let prefactor = Rat::new(BigInt::from(stats.dim), BigInt::from(factorial(nu.weight())));
    stats
        .contents
        .iter()
        .fold(HPoly::constant(RatPolyM::constant(prefactor), Window::EXACT), |acc, &c| {
            let linear = HPoly::from_terms(
                [(0, RatPolyM::one()), (1, RatPolyM::from(c))],
                Window::EXACT,
            )
            .expect("nonnegative exponents");
            acc.mul(&linear).expect("exact window")
        })
}

/// `Σ_{n≤N} Σ_{ν⊢n} Y(ν) · dim_ν/n! · s_ν`, or with `rescale` the same sum
/// with `s_ν` replaced by `ħ^{−2n} s_ν(p_1, p_2ħ, …)`. Constant term 1.
pub fn build_content_series(
    weights: &ContentWeights,
    weight_bound: usize,
    rescale: bool,
    window: Window,
) -> Result<PSeries> {
    build_content_series_with(weights, weight_bound, rescale, window, None, Exec::default())
}

pub fn build_content_series_with(
    weights: &ContentWeights,
    weight_bound: usize,
    rescale: bool,
    window: Window,
    graded_cap: Option<i64>,
    exec: Exec,
) -> Result<PSeries> {
    if rescale && window.lo > -2 * weight_bound as i64 {
        return Err(Error::WindowUnderflow { exponent: -2 * weight_bound as i64, lo: window.lo });
    }
    let mut total = PSeries::one(weight_bound, window).with_graded_cap(graded_cap);
    for n in 1..=weight_bound {
        let shapes = partitions_of(n);
        let pieces = exec.map(&shapes, |nu| -> Result<PSeries> {
            let stats = diagram_stats(nu);
            let prefactor =
                Rat::new(BigInt::from(stats.dim), BigInt::from(factorial(n)));
            let y = content_product(nu, weights, window).scale(&prefactor);
            let s = schur(nu).with_weight_bound(weight_bound);
            let s = if rescale {
                scale_by_ramification(&s).with_window(window)?.map_coeffs(|c| c.shift(-2 * n as i64))?
            } else {
                s.with_window(window)?
            };
            s.with_graded_cap(graded_cap).scale_hpoly(&y)
        });
        for piece in pieces {
            total = total.add(&piece?);
        }
    }
    Ok(total)
}

/// The assembled series `S`, truncated at weight `weight_bound` and genus
/// `genus_bound`. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenFunction {
    series: PSeries,
    weight_bound: usize,
    genus_bound: usize,
}

/// `ħ` window that holds every term of the log argument needed for the
/// requested bounds.
pub fn assembly_window(weight_bound: usize, genus_bound: usize) -> Window {
    let n = weight_bound as i64;
    let g = genus_bound as i64;
    Window::new(-2 * n, 2 * n + 2 * g)
}

/// Graded cap (`exponent + 2·weight`) for the log argument. A log term of
/// weight `w` and grade `d` lands at genus `(d − 2w + 2)/2`, so grades above
/// `2G − 2 + 2N` only reach genera beyond `G`.
pub fn assembly_cap(weight_bound: usize, genus_bound: usize) -> i64 {
    (2 * genus_bound as i64 - 2 + 2 * weight_bound as i64).max(0)
}

pub fn build_s(weight_bound: usize, genus_bound: usize) -> Result<GenFunction> {
    build_s_with(weight_bound, genus_bound, Exec::default())
}

pub fn build_s_with(weight_bound: usize, genus_bound: usize, exec: Exec) -> Result<GenFunction> {
    let window = assembly_window(weight_bound, genus_bound);
    let cap = assembly_cap(weight_bound, genus_bound);
    let inner = build_content_series_with(
        &ContentWeights::Bms,
        weight_bound,
        true,
        window,
        Some(cap),
        exec,
    )?;
    let logged = log_series_with(&inner, exec)?;
    let top = 2 * genus_bound as i64;
    let kept = Window::new(0, top);
    let mut series = PSeries::zero(weight_bound);
    for (mu, c) in logged.terms() {
        let c = c.shift(2)?;
        for (e, poly) in c.terms() {
            if e < 0 {
                return Err(Error::InvariantViolation(format!(
                    "negative power hbar^{e} at p_{mu}: {poly}"
                )));
            }
            if e <= top && e % 2 != 0 {
                return Err(Error::InvariantViolation(format!(
                    "odd power hbar^{e} at p_{mu}: {poly}"
                )));
            }
        }
        series.add_term(mu.clone(), &c.truncate_above(top).with_window(kept)?);
    }
    Ok(GenFunction { series, weight_bound, genus_bound })
}

impl GenFunction {
    pub fn series(&self) -> &PSeries {
        &self.series
    }

    pub fn weight_bound(&self) -> usize {
        self.weight_bound
    }

    pub fn genus_bound(&self) -> usize {
        self.genus_bound
    }

    fn check(&self, g: usize, weight: usize) -> Result<()> {
        if g > self.genus_bound {
            return Err(Error::OutOfBounds(format!(
                "genus {g} above assembled bound {}",
                self.genus_bound
            )));
        }
        if weight > self.weight_bound {
            return Err(Error::OutOfBounds(format!(
                "weight {weight} above assembled bound {}",
                self.weight_bound
            )));
        }
        Ok(())
    }

    /// `b_{g,ν,m}` as a polynomial in `m`.
    pub fn b_number(&self, g: usize, nu: &Partition) -> Result<RatPolyM> {
        if nu.is_empty() {
            return Err(Error::OutOfBounds("empty ramification type".into()));
        }
        self.check(g, nu.weight())?;
        Ok(self.series.coeff_at(nu, 2 * g as i64))
    }

    /// `b_{g,ν,m}` at a concrete `m`.
    pub fn b_number_at(&self, g: usize, nu: &Partition, m: &Rat) -> Result<Rat> {
        Ok(self.b_number(g, nu)?.eval(m))
    }

    /// The `ħ^{2g}` layer `S_g` as an `ħ`-free series.
    pub fn genus_slice(&self, g: usize) -> Result<PSeries> {
        self.check(g, 0)?;
        let mut out = PSeries::zero(self.weight_bound);
        for (mu, c) in self.series.terms() {
            let poly = c.coeff(2 * g as i64);
            out.add_term(mu.clone(), &HPoly::constant(poly, Window::EXACT));
        }
        Ok(out)
    }

    /// `(genus, μ, b_{g,μ,m})` for every nonzero coefficient, sorted by
    /// genus, then weight, then reverse-lex `μ`.
    pub fn entries(&self) -> Vec<GenEntry> {
        let mut out = Vec::new();
        for g in 0..=self.genus_bound {
            for (mu, c) in self.series.terms() {
                let poly = c.coeff(2 * g as i64);
                if !poly.is_zero() {
                    out.push(GenEntry { genus: g, mu: mu.clone(), m_poly: poly });
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> GenFunctionJson {
        GenFunctionJson {
            weight_bound: self.weight_bound,
            genus_bound: self.genus_bound,
            terms: self.entries(),
        }
    }

    pub fn from_json(json: &GenFunctionJson) -> Result<GenFunction> {
        let window = Window::new(0, 2 * json.genus_bound as i64);
        let mut series = PSeries::zero(json.weight_bound);
        for t in &json.terms {
            if t.genus > json.genus_bound || t.mu.weight() > json.weight_bound {
                return Err(Error::OutOfBounds(format!("term {:?} outside bounds", t.mu)));
            }
            series.add_term(
                t.mu.clone(),
                &HPoly::monomial(2 * t.genus as i64, t.m_poly.clone(), window)?,
            );
        }
        Ok(GenFunction { series, weight_bound: json.weight_bound, genus_bound: json.genus_bound })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenEntry {
    pub genus: usize,
    pub mu: Partition,
    pub m_poly: RatPolyM,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenFunctionJson {
    pub weight_bound: usize,
    pub genus_bound: usize,
    pub terms: Vec<GenEntry>,
}

/// Genus-zero closed form `G(m) = m (mn−n−1)!/(mn−n−l+2)! ∏ (i·C(mi−1, i))^{d_i}`,
/// carried out in `ℚ[m]` so the factorial quotient stays polynomial.
pub fn bms_number(nu: &Partition) -> Result<RatPolyM> {
    if nu.is_empty() {
        return Err(Error::OutOfBounds("empty ramification type".into()));
    }
    let n = nu.weight() as i64;
    let l = nu.len();
    let mut numerator = RatPolyM::m();
    for (part, d) in nu.multiplicities() {
        numerator = &numerator * &cycle_factor_poly(part).pow(d as u32);
    }
    // (A−1)!/(A−l+2)! with A = (m−1)n.
    let a = RatPolyM::linear(n, -n);
    if l >= 3 {
        let top = &a - &RatPolyM::one();
        Ok(&numerator * &falling_factorial(&top, l - 3))
    } else {
        let base = &a + &RatPolyM::from(2 - l as i64);
        exact_divide(&numerator, &falling_factorial(&base, 3 - l))
    }
}
