//! Residual checks of KP-type differential identities on the assembled
//! series, and the genus-one divisibility test.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exactalg::{exact_divide, falling_factorial, HPoly, Rat, RatPolyM, Window};
use crate::genseries::GenFunction;
use crate::partitions::Partition;
use crate::symfunc::PSeries;

/// `∂/∂p_index`: `p_μ ↦ (multiplicity of index in μ) · p_{μ∖index}`.
///
/// The result's weight bound drops by `index`, since heavier terms of the
/// input were never known.
pub fn derive(series: &PSeries, index: usize) -> PSeries {
    assert!(index >= 1, "power sums are indexed from 1");
    let bound = series.weight_bound().saturating_sub(index);
    let mut out = PSeries::zero(bound).with_graded_cap(series.graded_cap());
    for (mu, c) in series.terms() {
        let k = mu.multiplicity(index);
        if k == 0 {
            continue;
        }
        let lowered = mu.remove_part(index).expect("multiplicity checked");
        out.add_term(lowered, &c.scale(&Rat::from(k as i64)));
    }
    out
}

/// Repeated partial derivative, e.g. `[1, 3]` for `∂²/∂p_1∂p_3`.
pub fn derive_multi(series: &PSeries, indices: &[usize]) -> PSeries {
    indices.iter().fold(series.clone(), |s, &i| derive(&s, i))
}

/// One monomial `coeff · (∂_indices S)^power` of a differential form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KpTerm {
    pub coeff: HPoly,
    pub derivatives: Vec<usize>,
    pub power: u32,
}

/// A differential polynomial in `S` whose vanishing is being tested.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KpForm {
    pub id: String,
    pub description: String,
    pub terms: Vec<KpTerm>,
}

fn term(scalar: Rat, hbar: i64, derivatives: &[usize], power: u32) -> KpTerm {
    KpTerm {
        coeff: HPoly::monomial(hbar, RatPolyM::constant(scalar), Window::EXACT)
            .expect("nonnegative exponent"),
        derivatives: derivatives.to_vec(),
        power,
    }
}

impl KpForm {
    /// `S₁₃ − S₂₂ − a·S₁₁^power + b·ħ^hbar·S₁₁₁₁`.
    fn build(id: &str, description: &str, a: Rat, power: u32, b: Rat, hbar: i64) -> KpForm {
        KpForm {
            id: id.to_string(),
            description: description.to_string(),
            terms: vec![
                term(Rat::one(), 0, &[1, 3], 1),
                term(-Rat::one(), 0, &[2, 2], 1),
                term(-a, 0, &[1, 1], power),
                term(b, hbar, &[1, 1, 1, 1], 1),
            ],
        }
    }

    /// Every form the `kp` report evaluates, in report order.
    pub fn candidates() -> Vec<KpForm> {
        let half = Rat::new(1, 2);
        let quarter = Rat::new(1, 4);
        let twelfth = Rat::new(1, 12);
        vec![
            KpForm::build(
                "linear-s11",
                "S13 - S22 - 1/2 S11 + hbar^2/12 S1111",
                half.clone(),
                1,
                twelfth.clone(),
                2,
            ),
            KpForm::build(
                "standard-nonlinear",
                "S13 - S22 - 1/2 (S11)^2 - hbar^2/12 S1111",
                half.clone(),
                2,
                -twelfth.clone(),
                2,
            ),
            KpForm::build(
                "candidate-1",
                "S13 - S22 - 1/2 S11 + 1/12 S1111",
                half.clone(),
                1,
                twelfth.clone(),
                0,
            ),
            KpForm::build(
                "candidate-2",
                "S13 - S22 - 1/2 (S11)^2 + hbar^2/12 S1111",
                half.clone(),
                2,
                twelfth.clone(),
                2,
            ),
            KpForm::build(
                "candidate-3",
                "S13 - S22 + 1/2 (S11)^2 - hbar^2/12 S1111",
                -half.clone(),
                2,
                -twelfth.clone(),
                2,
            ),
            KpForm::build(
                "candidate-4",
                "S13 - S22 - 1/2 (S11)^2 - 1/12 S1111",
                half,
                2,
                -twelfth.clone(),
                0,
            ),
            KpForm::build(
                "candidate-5",
                "S13 - S22 - 1/4 (S11)^2 - hbar^2/12 S1111",
                quarter,
                2,
                -twelfth,
                2,
            ),
        ]
    }

    pub fn by_id(id: &str) -> Option<KpForm> {
        KpForm::candidates().into_iter().find(|f| f.id == id)
    }

    /// Evaluates the form on an arbitrary series, without masking.
    pub fn evaluate(&self, series: &PSeries) -> Result<PSeries> {
        let mut total: Option<PSeries> = None;
        for t in &self.terms {
            let d = derive_multi(series, &t.derivatives);
            let mut value = d.clone();
            for _ in 1..t.power {
                value = value.mul(&d)?;
            }
            let value = value.scale_hpoly(&t.coeff)?;
            total = Some(match total {
                Some(acc) => acc.add(&value),
                None => value,
            });
        }
        Ok(total.unwrap_or_else(|| PSeries::zero(series.weight_bound())))
    }
}

/// Evaluates `form` on the assembled series, keeping only weights
/// `≤ weight_bound − 4` and `ħ` powers `≤ 2·genus_bound`, the range where
/// every contributing coefficient of `S` was computed.
pub fn kp_residual(gf: &GenFunction, form: &KpForm) -> Result<PSeries> {
    let max_weight = gf.weight_bound().saturating_sub(4);
    let top = 2 * gf.genus_bound() as i64;
    let raw = form.evaluate(gf.series())?;
    raw.truncate_weight(max_weight).map_coeffs(|c| Ok(c.truncate_above(top)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualTerm {
    pub mu: Partition,
    pub hbar: i64,
    pub m_poly: RatPolyM,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KpReportEntry {
    pub form: String,
    /// Largest weight through which the residual vanishes; `-1` if it is
    /// already nonzero at weight 0.
    pub vanishes_through_weight: i64,
    pub first_nonzero_term: Option<ResidualTerm>,
}

pub fn kp_report_entry(gf: &GenFunction, form: &KpForm) -> Result<KpReportEntry> {
    let residual = kp_residual(gf, form)?;
    let max_weight = gf.weight_bound().saturating_sub(4) as i64;
    let first = residual.terms().next().map(|(mu, c)| {
        let (hbar, poly) = c.terms().next().expect("stored coefficients are nonzero");
        ResidualTerm { mu: mu.clone(), hbar, m_poly: poly.clone() }
    });
    let vanishes_through_weight = match &first {
        Some(t) => t.mu.weight() as i64 - 1,
        None => max_weight,
    };
    Ok(KpReportEntry { form: form.id.clone(), vanishes_through_weight, first_nonzero_term: first })
}

/// Report over every candidate form, in [`KpForm::candidates`] order.
pub fn kp_report(gf: &GenFunction) -> Result<Vec<KpReportEntry>> {
    KpForm::candidates().iter().map(|f| kp_report_entry(gf, f)).collect()
}

/// Outcome of dividing `b_{1,ν,m}` by `m · ∏_i (mν_i − 2)_{(ν_i − 1)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub nu: Partition,
    pub divisor: RatPolyM,
    /// `None` when the division leaves a remainder.
    pub quotient: Option<RatPolyM>,
    /// Quotient degree is at most `2·l(ν) − 1`.
    pub degree_bound_ok: bool,
}

pub fn conjecture_divisor(nu: &Partition) -> RatPolyM {
    nu.parts().iter().fold(RatPolyM::m(), |acc, &part| {
        let base = RatPolyM::linear(part as i64, -2);
        &acc * &falling_factorial(&base, part - 1)
    })
}

pub fn conjecture_check(gf: &GenFunction, nu: &Partition) -> Result<ConjectureReport> {
    let b1 = gf.b_number(1, nu)?;
    let divisor = conjecture_divisor(nu);
    let quotient = exact_divide(&b1, &divisor).ok();
    let limit = 2 * nu.len() - 1;
    let degree_bound_ok = quotient
        .as_ref()
        .is_some_and(|q| q.degree().is_none_or(|d| d <= limit));
    Ok(ConjectureReport { nu: nu.clone(), divisor, quotient, degree_bound_ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genseries::build_s;
    use crate::partitions::partitions_up_to;
    use proptest::prelude::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn rat_series(terms: &[(&[usize], i64)], bound: usize) -> PSeries {
        PSeries::from_rationals(terms.iter().map(|(mu, a)| (p(mu), Rat::from(*a))), bound)
    }

    #[test]
    fn derive_examples() {
        assert_eq!(derive(&rat_series(&[(&[1, 1], 1)], 4), 1), rat_series(&[(&[1], 2)], 3));
        assert_eq!(derive(&rat_series(&[(&[2, 1], 1)], 4), 2), rat_series(&[(&[1], 1)], 2));
        assert!(derive(&rat_series(&[(&[1, 1], 1)], 4), 3).is_zero());
        let d13 = derive_multi(&rat_series(&[(&[3, 1], 1)], 8), &[1, 3]);
        assert_eq!(d13, rat_series(&[(&[], 1)], 4));
    }

    #[test]
    fn forms_vanish_on_zero() {
        let gf_zero = PSeries::zero(6);
        for form in KpForm::candidates() {
            assert!(form.evaluate(&gf_zero).unwrap().is_zero());
        }
    }

    #[test]
    fn residual_is_masked() {
        let gf = build_s(6, 1).unwrap();
        for form in KpForm::candidates() {
            let r = kp_residual(&gf, &form).unwrap();
            assert!(r.terms().all(|(mu, c)| mu.weight() <= 2 && c.max_exponent().unwrap() <= 2));
        }
    }

    #[test]
    fn conjecture_examples() {
        let gf = build_s(2, 1).unwrap();
        let r2 = conjecture_check(&gf, &p(&[2])).unwrap();
        assert_eq!(r2.divisor, &RatPolyM::m() * &RatPolyM::linear(2, -2));
        assert_eq!(
            r2.quotient,
            Some(RatPolyM::from_coeffs(vec![Rat::new(-2, 24), Rat::new(1, 24)]))
        );
        assert!(r2.degree_bound_ok);

        let r11 = conjecture_check(&gf, &p(&[1, 1])).unwrap();
        assert_eq!(r11.divisor, RatPolyM::m());
        let expect = [(1, -1), (1, -2), (1, -3)]
            .iter()
            .fold(RatPolyM::constant(Rat::new(1, 48)), |acc, &(a, b)| {
                &acc * &RatPolyM::linear(a, b)
            });
        assert_eq!(r11.quotient, Some(expect));
        assert!(r11.degree_bound_ok);

        let r1 = conjecture_check(&gf, &p(&[1])).unwrap();
        assert_eq!(r1.quotient, Some(RatPolyM::zero()));
        assert!(r1.degree_bound_ok);
    }

    #[test]
    fn conjecture_json_roundtrip() {
        let gf = build_s(3, 1).unwrap();
        for nu in partitions_up_to(3) {
            let r = conjecture_check(&gf, &nu).unwrap();
            let text = serde_json::to_string(&r).unwrap();
            assert_eq!(serde_json::from_str::<ConjectureReport>(&text).unwrap(), r);
        }
    }

    fn arb_series() -> impl Strategy<Value = PSeries> {
        let key = prop::collection::vec(1usize..4, 0..4).prop_map(Partition::from_unsorted);
        prop::collection::vec((key, -4i64..5), 0..6).prop_map(|terms| {
            PSeries::from_rationals(terms.into_iter().map(|(mu, a)| (mu, Rat::from(a))), 8)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn partials_commute(s in arb_series(), i in 1usize..=3, j in 1usize..=3) {
            let a = derive(&derive(&s, i), j);
            let b = derive(&derive(&s, j), i);
            prop_assert_eq!(a, b);
        }

        #[test]
        fn product_rule(a in arb_series(), b in arb_series(), i in 1usize..=3) {
            let lhs = derive(&a.mul(&b).unwrap(), i);
            let rhs = derive(&a, i).mul(&b).unwrap().add(&a.mul(&derive(&b, i)).unwrap());
            prop_assert_eq!(lhs, rhs.truncate_weight(8 - i));
        }
    }
}
