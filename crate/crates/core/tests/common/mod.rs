//! Reference values computed without the library's own oracles.
#![allow(dead_code)]

use rug::ops::Pow;
use rug::Float;

use resum::mapping::{build_rho_table, lambda_series, zeta_series, MappingSpec};
use resum::series::binomial_series;
use resum::{PowerSeries, Precision};

/// `∫₀^∞ e^{-t}/(1+gt) dt` by the trapezoid rule after `t = e^s`.
pub fn stieltjes(g: f64) -> f64 {
    let h = 1e-3;
    let (lo, hi) = (-40.0, 5.0);
    let n = ((hi - lo) / h) as usize;
    (0..=n)
        .map(|i| {
            let t = (lo + i as f64 * h).exp();
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            w * t * (-t).exp() / (1.0 + g * t)
        })
        .sum::<f64>()
        * h
}

/// `e^{1/g} E₁(1/g) / g`, the closed form of [`stieltjes`].
pub fn stieltjes_closed(g: f64, prec: Precision) -> Float {
    let x = prec.real(1.0 / g);
    let e1 = -Float::with_val(prec.bits(), -&x).eint();
    x.clone().exp() * e1 * &x
}

/// `(2π)^{-1/2} ∫ e^{-s²/2 - g s⁴/24} ds` by the trapezoid rule.
pub fn quartic_integral(g: f64) -> f64 {
    let h = 5e-3;
    let n = 4800;
    let sum: f64 = (-n..=n)
        .map(|i| {
            let s = i as f64 * h;
            let s2 = s * s;
            (-s2 / 2.0 - g * s2 * s2 / 24.0).exp()
        })
        .sum();
    sum * h / (2.0 * std::f64::consts::PI).sqrt()
}

/// `lim g^{1/4} Z(g) = (2π)^{-1/2} ∫ e^{-s⁴/24} ds = 24^{1/4} Γ(1/4) / (2 √(2π))`.
pub fn quartic_strong_amplitude(prec: Precision) -> Float {
    let bits = prec.bits();
    let pi = Float::with_val(bits, rug::float::Constant::Pi);
    let gamma = prec.ratio(1, 4).gamma();
    let root = prec.real(24).pow(prec.ratio(1, 4));
    root * gamma / (Float::with_val(bits, 2 * pi).sqrt() * 2u32)
}

/// Ground-state energy of `p² + x⁴`, from the literature.
pub const PURE_QUARTIC_E0: &str = "1.0603620904841828996";

/// Strong-coupling amplitude of `p²/2 + x²/2 + g x⁴/24`: the pure quartic
/// rescaled, `E₀ / 96^{1/3}`.
pub fn oscillator_amplitude(prec: Precision) -> Float {
    let e0 = prec.parse(PURE_QUARTIC_E0).unwrap();
    e0 / prec.real(96).pow(prec.ratio(1, 3))
}

/// Least-squares slope and intercept.
pub fn fit(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

pub fn ln_abs(x: &Float) -> f64 {
    Float::with_val(x.prec(), x.abs_ref()).ln().to_f64()
}

/// Re-expands the ρ-table of `src` at `rho` back into powers of `g` and
/// returns the worst coefficient mismatch in units of its tolerance.
///
/// Plain mappings invert `f = (1-λ)^p Σ P_k(ρ) λ^k`; covariant ones
/// `β(g) = ρ ζ'(λ) Σ P_k(ρ) λ^k`. Terms of size up to `(1/ρ)^k` cancel,
/// which sets the tolerance.
pub fn reexpansion_error(src: &PowerSeries, mapping: &MappingSpec, rho: &Float) -> f64 {
    let order = src.order();
    let table = build_rho_table(src, mapping).unwrap();
    let lam = lambda_series(rho, mapping, order).unwrap();
    let in_lambda = PowerSeries::new(
        (0..=order).map(|k| table.poly(k).unwrap().eval(rho)).collect(),
        "lambda",
    )
    .unwrap();
    let factor = if mapping.is_beta_covariant() {
        zeta_series(mapping, order + 1).unwrap().derivative().scale(rho)
    } else {
        binomial_series(mapping.prefactor_p(), order, "lambda")
    };
    let back = in_lambda
        .compose(&lam)
        .unwrap()
        .multiply(&factor.compose(&lam).unwrap())
        .unwrap();
    let growth = 1.0 + 1.0 / rho.to_f64();
    (0..=order)
        .map(|k| {
            let tol = 1e-40 * (1.0 + src.coeff(k).to_f64().abs()) * growth.powi(k as i32);
            let d = Float::with_val(rho.prec(), src.coeff(k) - back.coeff(k)).abs().to_f64();
            d / tol
        })
        .fold(0.0, f64::max)
}
