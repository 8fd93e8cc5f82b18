//! Invariants that hold for any input, checked on random draws.

mod common;

use proptest::prelude::*;
use rug::Float;

use resum::borel::{borel_leroy_transform, borel_pade_sum, borel_sum, BorelConfig, QuadratureConfig};
use resum::mapping::MappingSpec;
use resum::models::{anharmonic_ground_coeffs, d0_partition_coeffs, rg_series};
use resum::pade::{pade_fit, pade_eval};
use resum::saddle::solve_saddle;
use resum::{PowerSeries, Precision};

fn prec() -> Precision {
    Precision::default()
}

fn series(values: &[f64]) -> PowerSeries {
    PowerSeries::from_f64(values, "x", prec()).unwrap()
}

fn diff(a: &Float, b: &Float) -> f64 {
    Float::with_val(prec().bits(), a - b).abs().to_f64()
}

fn assert_series_close(a: &PowerSeries, b: &PowerSeries, tol: f64) {
    assert_eq!(a.order(), b.order());
    for k in 0..=a.order() {
        let d = diff(a.coeff(k), b.coeff(k));
        let scale = 1.0 + a.coeff(k).to_f64().abs();
        assert!(d <= tol * scale, "coefficient {k}: {} vs {}", a.coeff(k).to_f64(), b.coeff(k).to_f64());
    }
}

fn coeffs(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, len)
}

fn unit_leading(len: usize) -> impl Strategy<Value = Vec<f64>> {
    (0.5f64..2.0, any::<bool>(), coeffs(len - 1)).prop_map(|(m, neg, rest)| {
        let mut v = vec![if neg { -m } else { m }];
        v.extend(rest);
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn product_commutes_and_associates(a in coeffs(8), b in coeffs(8), c in coeffs(8)) {
        let (a, b, c) = (series(&a), series(&b), series(&c));
        assert_series_close(&a.multiply(&b).unwrap(), &b.multiply(&a).unwrap(), 1e-55);
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        assert_series_close(&left, &right, 1e-50);
    }

    #[test]
    fn reciprocal_inverts(a in unit_leading(9)) {
        let a = series(&a);
        let one = PowerSeries::constant(prec().one(), a.order(), "x");
        assert_series_close(&a.multiply(&a.reciprocal().unwrap()).unwrap(), &one, 1e-45);
    }

    #[test]
    fn reversion_inverts_composition(rest in unit_leading(7)) {
        let mut v = vec![0.0];
        v.extend(rest);
        let s = series(&v);
        let r = s.revert().unwrap();
        let x = PowerSeries::variable(s.order(), "x", prec());
        assert_series_close(&s.compose(&r).unwrap(), &x, 1e-45);
        assert_series_close(&r.compose(&s).unwrap(), &x, 1e-45);
        assert_series_close(&r.revert().unwrap(), &s, 1e-45);
    }

    #[test]
    fn derivative_obeys_product_rule(a in coeffs(9), b in coeffs(9)) {
        let (a, b) = (series(&a), series(&b));
        let lhs = a.multiply(&b).unwrap().derivative();
        let rhs = a
            .derivative()
            .multiply(&b.truncate(7))
            .unwrap()
            .add(&a.truncate(7).multiply(&b.derivative()).unwrap())
            .unwrap();
        assert_series_close(&lhs, &rhs, 1e-50);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reexpansion_quartic_integral(rho in 0.2f64..5.0) {
        let p = prec();
        let m = MappingSpec::power_cut(p.real(2), p.ratio(1, 2)).unwrap();
        assert_reexpands(&d0_partition_coeffs(12, p), &m, rho);
    }

    #[test]
    fn reexpansion_oscillator(rho in 0.2f64..5.0) {
        let p = prec();
        let m = MappingSpec::power_cut(p.ratio(3, 2), p.ratio(-1, 2)).unwrap();
        assert_reexpands(&anharmonic_ground_coeffs(12, p), &m, rho);
    }

    #[test]
    fn reexpansion_rg_functions(rho in 0.2f64..5.0) {
        let p = prec();
        let rg = rg_series(p);
        assert_reexpands(&rg.beta, &MappingSpec::beta_covariant(p.ratio(3, 2)).unwrap(), rho);
        let plain = MappingSpec::shifted_power(p.ratio(3, 2), p.zero()).unwrap();
        assert_reexpands(&rg.gamma_inv, &plain, rho);
        assert_reexpands(&rg.eta_reduced(), &plain, rho);
    }
}

fn assert_reexpands(src: &PowerSeries, mapping: &MappingSpec, rho: f64) {
    let worst = common::reexpansion_error(src, mapping, &prec().real(rho));
    assert!(worst <= 1.0, "re-expansion off by {worst} tolerances at rho = {rho}");
}

fn rational() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (0usize..=3, 1usize..=3).prop_flat_map(|(l, m)| {
        let num = unit_leading(l + 1).prop_map(|mut v| {
            v.reverse();
            v
        });
        let den = unit_leading(m).prop_map(|mut v| {
            v.reverse();
            let mut d = vec![1.0];
            d.extend(v);
            d
        });
        (num, den)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pade_recovers_rationals((num, den) in rational(), extra in 0usize..3) {
        let (l, m) = (num.len() - 1, den.len() - 1);
        let order = l + m + extra;
        let pad = |v: &[f64]| {
            let mut v = v.to_vec();
            v.resize(order + 1, 0.0);
            series(&v)
        };
        let s = pad(&num).multiply(&pad(&den).reciprocal().unwrap()).unwrap();
        let fit = pade_fit(&s, l, m, prec()).unwrap();
        for (got, want) in fit.numerator().coeffs().iter().zip(&num) {
            prop_assert!((got.to_f64() - want).abs() < 1e-30, "numerator {} vs {want}", got.to_f64());
        }
        for (got, want) in fit.denominator().coeffs().iter().zip(&den) {
            prop_assert!((got.to_f64() - want).abs() < 1e-30, "denominator {} vs {want}", got.to_f64());
        }
        // the approximant re-expands to the source through every available order
        for (k, c) in fit.taylor(order).iter().enumerate() {
            prop_assert!(diff(c, s.coeff(k)) < 1e-35 * (1.0 + s.coeff(k).to_f64().abs()));
        }
        let x = prec().real(0.05);
        let direct = series(&num).eval(&x) / series(&den).eval(&x);
        prop_assert!(diff(&pade_eval(&fit, &x, prec()).unwrap(), &direct) < 1e-40);
    }
}

fn gamma(x: f64) -> Float {
    prec().real(x).gamma()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Γ(k+σ+1) in the transform cancels against `∫ t^{k+σ} e^{-t} dt`,
    /// so a polynomial is summed exactly when its transform is kept whole.
    #[test]
    fn borel_is_exact_on_polynomials(
        poly in coeffs(4),
        sigma in prop::sample::select(vec![0.0, 0.5, 1.0, 2.5]),
        g in 0.2f64..2.0,
    ) {
        let p = prec();
        let s = series(&poly);
        let sig = p.real(sigma);
        let b = borel_leroy_transform(&s, &sig).unwrap();
        for k in 0..=3 {
            let back = Float::with_val(p.bits(), b.coeff(k) * gamma(k as f64 + sigma + 1.0));
            prop_assert!(diff(&back, s.coeff(k)) < 1e-50);
        }
        let g = p.real(g);
        let exact = s.eval(&g);
        let (value, _) = borel_pade_sum(&s, &sig, 3, 0, &g, &QuadratureConfig::new(p), p).unwrap();
        prop_assert!(diff(&value, &exact) < 1e-20 * (1.0 + exact.to_f64().abs()));
        // the mapped transform of a polynomial is an infinite series in u,
        // so the mapped sum only approaches the polynomial as the truncation grows
        let mapped_error = |k: usize| {
            let cfg = BorelConfig::new(sig.clone(), p.one(), k, p).unwrap();
            diff(&borel_sum(&s, &cfg, &g, p).unwrap().value, &exact)
        };
        let (coarse, fine) = (mapped_error(10), mapped_error(40));
        prop_assert!(fine < coarse, "{fine} vs {coarse}");
        prop_assert!(fine < 1e-3 * (1.0 + exact.to_f64().abs()), "{fine}");
    }
}

fn alternating_factorial(order: usize) -> PowerSeries {
    let p = prec();
    let coeffs = (0..=order)
        .map(|k| {
            let f = Float::with_val(p.bits(), Float::factorial(k as u32));
            if k % 2 == 0 { f } else { -f }
        })
        .collect();
    PowerSeries::new(coeffs, "g").unwrap()
}

#[test]
fn alternating_factorial_matches_quadrature() {
    let p = prec();
    let s = alternating_factorial(60);
    for g in [0.5, 1.0, 2.0] {
        let oracle = common::stieltjes(g);
        let closed = common::stieltjes_closed(g, p).to_f64();
        assert!((oracle - closed).abs() < 1e-12, "oracle {oracle} vs {closed}");
        for sigma in [0.0, 1.0, 2.0] {
            let cfg = BorelConfig::new(p.real(sigma), p.one(), 60, p).unwrap();
            let sum = borel_sum(&s, &cfg, &p.real(g), p).unwrap();
            let v = sum.value.to_f64();
            assert!((v - oracle).abs() < 1e-8, "g={g} sigma={sigma}: {v} vs {oracle}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn saddle_residuals_vanish_and_move_with_alpha(a in 1.1f64..6.0, da in 0.05f64..1.0) {
        let p = prec();
        let lo = solve_saddle(&p.real(a), p).unwrap();
        let hi = solve_saddle(&p.real(a + da), p).unwrap();
        for r in lo.residuals.iter().chain(&hi.residuals) {
            prop_assert!(r.to_f64().abs() < 1e-12);
        }
        prop_assert!(lo.lambda_saddle > -1 && lo.lambda_saddle < 0);
        prop_assert!(hi.mu > lo.mu);
        prop_assert!(hi.lambda_saddle > lo.lambda_saddle);
    }
}
