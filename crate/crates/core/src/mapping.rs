//! Change of variables `g = ρ ζ(λ)` and the λ-series with coefficients
//! polynomial in ρ.
//!
//! The stored λ-series `f(λ)` is related to the physical function by
//! `F(g) = (1-λ)^p f(λ)`, so the table is built from `(1-λ)^{-p} F(ρ ζ(λ))`.
//! A beta-covariant mapping instead transforms a β-function,
//! `β_λ = β(ρ ζ(λ)) / (ρ ζ'(λ))`.

use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::coupling::Coupling;
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::series::{binomial_series, PowerSeries, Precision};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MappingFamily {
    /// `g = ρ λ / (1-λ)^α`
    PowerCut,
    /// `g = ρ ((1-λ)^{-α} - 1)`
    ShiftedPower,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MappingSpec {
    family: MappingFamily,
    alpha: Float,
    prefactor_p: Float,
    beta_covariant: bool,
}

impl MappingSpec {
    pub fn new(
        family: MappingFamily,
        alpha: Float,
        prefactor_p: Float,
        beta_covariant: bool,
    ) -> Result<Self> {
        if !alpha.is_finite() || !prefactor_p.is_finite() {
            return Err(Error::usage("mapping parameters must be finite"));
        }
        match family {
            MappingFamily::PowerCut if alpha <= 1 => {
                return Err(Error::usage(format!(
                    "power-cut mapping needs alpha > 1, got {}",
                    alpha.to_f64()
                )))
            }
            MappingFamily::ShiftedPower if alpha <= 0 => {
                return Err(Error::usage(format!(
                    "shifted-power mapping needs alpha > 0, got {}",
                    alpha.to_f64()
                )))
            }
            _ => {}
        }
        if beta_covariant && !prefactor_p.is_zero() {
            return Err(Error::usage(
                "a beta-covariant mapping cannot carry a prefactor",
            ));
        }
        Ok(MappingSpec {
            family,
            alpha,
            prefactor_p,
            beta_covariant,
        })
    }

    pub fn power_cut(alpha: Float, prefactor_p: Float) -> Result<Self> {
        Self::new(MappingFamily::PowerCut, alpha, prefactor_p, false)
    }

    pub fn shifted_power(alpha: Float, prefactor_p: Float) -> Result<Self> {
        Self::new(MappingFamily::ShiftedPower, alpha, prefactor_p, false)
    }

    /// Shifted-power mapping applied covariantly to a β-function.
    pub fn beta_covariant(alpha: Float) -> Result<Self> {
        let bits = alpha.prec();
        Self::new(MappingFamily::ShiftedPower, alpha, Float::new(bits), true)
    }

    pub fn family(&self) -> MappingFamily {
        self.family
    }

    pub fn alpha(&self) -> &Float {
        &self.alpha
    }

    pub fn prefactor_p(&self) -> &Float {
        &self.prefactor_p
    }

    pub fn is_beta_covariant(&self) -> bool {
        self.beta_covariant
    }

    /// `ζ(λ)` at a point of `[0, 1)`.
    pub fn zeta(&self, lambda: &Float) -> Float {
        let bits = lambda.prec().max(self.alpha.prec());
        let one_minus = Float::with_val(bits, 1 - lambda);
        let neg_alpha = Float::with_val(bits, -&self.alpha);
        let pow = one_minus.pow(&neg_alpha);
        match self.family {
            MappingFamily::PowerCut => pow * lambda,
            MappingFamily::ShiftedPower => pow - 1u32,
        }
    }

    /// `ζ'(λ)` at a point of `[0, 1)`.
    pub fn zeta_derivative(&self, lambda: &Float) -> Float {
        let bits = lambda.prec().max(self.alpha.prec());
        let one_minus = Float::with_val(bits, 1 - lambda);
        let exponent = Float::with_val(bits, -&self.alpha) - 1u32;
        let pow = one_minus.pow(&exponent);
        match self.family {
            // (1-λ)^{-α-1} (1 + (α-1) λ)
            MappingFamily::PowerCut => {
                let am1 = Float::with_val(bits, &self.alpha - 1u32);
                let lin = Float::with_val(bits, &am1 * lambda) + 1u32;
                pow * lin
            }
            MappingFamily::ShiftedPower => pow * &self.alpha,
        }
    }
}

/// Taylor coefficients of `ζ(λ)` through `λ^order`.
pub fn zeta_series(mapping: &MappingSpec, order: usize) -> Result<PowerSeries> {
    if order < 1 {
        return Err(Error::usage("zeta_series needs order >= 1"));
    }
    let neg_alpha = Float::with_val(mapping.alpha.prec(), -&mapping.alpha);
    // (1-λ)^{-α}
    let base = binomial_series(&neg_alpha, order, "lambda");
    let coeffs = match mapping.family {
        MappingFamily::PowerCut => {
            let mut c = vec![Float::new(base.bits())];
            c.extend(base.coeffs()[..order].iter().cloned());
            c
        }
        MappingFamily::ShiftedPower => {
            let mut c = base.into_coeffs();
            c[0] = Float::new(c[0].prec());
            c
        }
    };
    PowerSeries::new(coeffs, "lambda")
}

/// λ-series coefficients `P_k(ρ)` for `k = 0..=source_order`.
#[derive(Clone, Debug)]
pub struct RhoPolynomialTable {
    polys: Vec<Polynomial>,
    mapping: MappingSpec,
    source_order: usize,
}

impl RhoPolynomialTable {
    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn poly(&self, k: usize) -> Option<&Polynomial> {
        self.polys.get(k)
    }

    pub fn mapping(&self) -> &MappingSpec {
        &self.mapping
    }

    pub fn source_order(&self) -> usize {
        self.source_order
    }

    pub fn bits(&self) -> u32 {
        self.polys[0].bits()
    }

    /// `Σ_{ℓ≤k} P_ℓ(ρ) λ^ℓ` by Horner's rule in λ.
    pub fn partial_sum(&self, k: usize, rho: &Float, lambda: &Float) -> Float {
        let bits = self.bits().max(rho.prec());
        let mut acc = Float::new(bits);
        for poly in self.polys[..=k.min(self.source_order)].iter().rev() {
            acc *= lambda;
            acc += poly.eval(rho);
        }
        acc
    }

    /// λ-derivative of the truncated series at `λ`.
    pub fn partial_sum_derivative(&self, k: usize, rho: &Float, lambda: &Float) -> Float {
        let bits = self.bits().max(rho.prec());
        let mut acc = Float::new(bits);
        for l in (1..=k.min(self.source_order)).rev() {
            acc *= lambda;
            acc += self.polys[l].eval(rho) * (l as u64);
        }
        acc
    }
}

/// Expands `source` in λ with the mapping of `mapping`.
pub fn build_rho_table(source: &PowerSeries, mapping: &MappingSpec) -> Result<RhoPolynomialTable> {
    let order = source.order();
    if order < 1 {
        return Err(Error::usage("build_rho_table needs a source of order >= 1"));
    }
    if mapping.beta_covariant && !source.coeff(0).is_zero() {
        return Err(Error::usage(
            "a beta-covariant table needs a source without constant term",
        ));
    }
    let bits = source.bits().max(mapping.alpha.prec());
    let zeta = zeta_series(mapping, order)?;
    let prefactor = if mapping.beta_covariant {
        // 1/ζ'(λ); the matching 1/ρ cancels one power of ρ below
        zeta_series(mapping, order + 1)?.derivative().reciprocal()?
    } else {
        let neg_p = Float::with_val(bits, -&mapping.prefactor_p);
        binomial_series(&neg_p, order, "lambda")
    };

    let mut grid = vec![vec![Float::new(bits); order + 1]; order + 1];
    let mut zeta_pow = PowerSeries::constant(Float::with_val(bits, 1), order, "lambda");
    for n in 0..=order {
        if n > 0 {
            zeta_pow = zeta_pow.multiply(&zeta)?;
        }
        let f_n = source.coeff(n);
        if f_n.is_zero() {
            continue;
        }
        let term = prefactor.multiply(&zeta_pow)?;
        let rho_power = if mapping.beta_covariant { n - 1 } else { n };
        for k in n..=order {
            let c = Float::with_val(bits, f_n * term.coeff(k));
            grid[k][rho_power] += c;
        }
    }
    let polys = grid
        .into_iter()
        .enumerate()
        .map(|(k, mut row)| {
            row.truncate(k + 1);
            Polynomial::new(row)
        })
        .collect();
    Ok(RhoPolynomialTable {
        polys,
        mapping: mapping.clone(),
        source_order: order,
    })
}

/// Solves `g = ρ ζ(λ)` for `λ ∈ [0, 1)`; `g = ∞` maps to `λ = 1`.
pub fn lambda_of_g(
    g: &Coupling,
    rho: &Float,
    mapping: &MappingSpec,
    prec: Precision,
) -> Result<Float> {
    g.check_non_negative()?;
    if !(rho.is_finite() && *rho > 0) {
        return Err(Error::domain("rho must be positive"));
    }
    let bits = prec.bits();
    let g = match g {
        Coupling::Infinite => return Ok(prec.one()),
        Coupling::Finite(g) if g.is_zero() => return Ok(prec.zero()),
        Coupling::Finite(g) => Float::with_val(bits, g),
    };
    let target = Float::with_val(bits, &g / rho);
    if mapping.family == MappingFamily::ShiftedPower {
        // λ = 1 - (1 + g/ρ)^{-1/α}
        let inv = -Float::with_val(bits, mapping.alpha.recip_ref());
        let base = Float::with_val(bits, &target + 1u32);
        return Ok(1 - base.pow(&inv));
    }

    // bracket [lo, hi] with ζ(lo) <= g/ρ < ζ(hi)
    let tol = prec.tolerance(6);
    let mut lo = prec.zero();
    let mut hi = prec.ratio(1, 2);
    let mut gap = prec.ratio(1, 2);
    while mapping.zeta(&hi) <= target {
        lo = hi.clone();
        gap /= 2u32;
        hi = Float::with_val(bits, 1 - &gap);
        if gap < tol.clone().square() {
            return Err(Error::Resource(
                "lambda_of_g: coupling too large for the working precision".into(),
            ));
        }
    }
    let mut x = Float::with_val(bits, &lo + &hi) / 2u32;
    for _ in 0..(4 * bits as usize) {
        let fx = Float::with_val(bits, mapping.zeta(&x) - &target);
        if fx.is_zero() {
            return Ok(x);
        }
        if fx.is_sign_negative() {
            lo = x.clone();
        } else {
            hi = x.clone();
        }
        let d = mapping.zeta_derivative(&x);
        let newton = Float::with_val(bits, &x - Float::with_val(bits, &fx / &d));
        let next = if newton > lo && newton < hi {
            newton
        } else {
            Float::with_val(bits, &lo + &hi) / 2u32
        };
        let step = Float::with_val(bits, &next - &x).abs();
        x = next;
        if step <= tol || Float::with_val(bits, &hi - &lo) <= tol {
            return Ok(x);
        }
    }
    Err(Error::Solver("lambda_of_g did not converge".into()))
}

/// Taylor series of `λ(g)` for fixed ρ.
pub fn lambda_series(rho: &Float, mapping: &MappingSpec, order: usize) -> Result<PowerSeries> {
    let zeta = zeta_series(mapping, order)?;
    Ok(zeta.scale(rho).revert()?.with_var("g"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec() -> Precision {
        Precision::default()
    }

    fn close(a: &Float, b: f64, tol: f64) -> bool {
        (a.to_f64() - b).abs() <= tol
    }

    #[test]
    fn zeta_examples() {
        let p = prec();
        let z = zeta_series(&MappingSpec::power_cut(p.real(2), p.zero()).unwrap(), 3).unwrap();
        let got: Vec<f64> = z.coeffs().iter().map(Float::to_f64).collect();
        assert_eq!(got, vec![0.0, 1.0, 2.0, 3.0]);
        let z = zeta_series(&MappingSpec::shifted_power(p.real(1), p.zero()).unwrap(), 3).unwrap();
        let got: Vec<f64> = z.coeffs().iter().map(Float::to_f64).collect();
        assert_eq!(got, vec![0.0, 1.0, 1.0, 1.0]);
        let z = zeta_series(&MappingSpec::power_cut(p.ratio(3, 2), p.zero()).unwrap(), 2).unwrap();
        assert_eq!(z.coeff(2).to_f64(), 1.5);
    }

    #[test]
    fn spec_invariants_enforced() {
        let p = prec();
        assert!(MappingSpec::power_cut(p.one(), p.zero()).is_err());
        assert!(MappingSpec::shifted_power(p.zero(), p.zero()).is_err());
        assert!(MappingSpec::new(MappingFamily::ShiftedPower, p.one(), p.one(), true).is_err());
    }

    #[test]
    fn d0_first_polynomial() {
        let p = prec();
        let src = PowerSeries::from_f64(&[1.0, -0.125, 105.0 / 384.0], "g", p).unwrap();
        let m = MappingSpec::power_cut(p.real(2), p.ratio(1, 2)).unwrap();
        let t = build_rho_table(&src, &m).unwrap();
        assert_eq!(t.poly(0).unwrap().coeffs()[0].to_f64(), 1.0);
        let p1: Vec<f64> = t
            .poly(1)
            .unwrap()
            .coeffs()
            .iter()
            .map(Float::to_f64)
            .collect();
        assert_eq!(p1, vec![0.5, -0.125]);
        for (k, poly) in t.polys().iter().enumerate() {
            assert!(poly.coeffs().len() <= k + 1);
        }
    }

    #[test]
    fn constant_source_is_invariant() {
        let p = prec();
        let src = PowerSeries::from_f64(&[1.0, 0.0, 0.0, 0.0], "g", p).unwrap();
        let m = MappingSpec::shifted_power(p.ratio(3, 2), p.zero()).unwrap();
        let t = build_rho_table(&src, &m).unwrap();
        let rho = p.real(0.7);
        assert_eq!(t.poly(0).unwrap().eval(&rho).to_f64(), 1.0);
        for k in 1..=3 {
            assert!(t.poly(k).unwrap().eval(&rho).is_zero());
        }
    }

    #[test]
    fn covariant_leading_term() {
        let p = prec();
        let src = PowerSeries::from_f64(&[0.0, -1.0, 1.0, 0.3], "g~", p).unwrap();
        let m = MappingSpec::beta_covariant(p.ratio(3, 2)).unwrap();
        let t = build_rho_table(&src, &m).unwrap();
        assert!(t.poly(0).unwrap().eval(&p.one()).is_zero());
        assert!(close(&t.poly(1).unwrap().eval(&p.one()), -1.0, 1e-30));
        assert!(close(&t.poly(1).unwrap().eval(&p.real(3)), -1.0, 1e-30));
        assert!(
            build_rho_table(&PowerSeries::from_f64(&[1.0, 1.0], "g~", p).unwrap(), &m).is_err()
        );
    }

    #[test]
    fn covariant_table_matches_direct_expansion() {
        // β_λ = β(ρζ) / (ρ ζ') computed by series algebra
        let p = prec();
        let src = PowerSeries::from_f64(&[0.0, -1.0, 1.0, -0.4, 0.2, -0.1], "g~", p).unwrap();
        let m = MappingSpec::beta_covariant(p.ratio(3, 2)).unwrap();
        let t = build_rho_table(&src, &m).unwrap();
        let rho = p.real(0.8);
        let zeta = zeta_series(&m, 6).unwrap();
        let inner = zeta.scale(&rho).truncate(5);
        let beta = src.with_var("lambda").compose(&inner).unwrap();
        let denom = zeta
            .derivative()
            .truncate(5)
            .scale(&rho)
            .reciprocal()
            .unwrap();
        let direct = beta.multiply(&denom).unwrap();
        for k in 0..=5 {
            let diff = Float::with_val(p.bits(), t.poly(k).unwrap().eval(&rho) - direct.coeff(k));
            assert!(diff.abs() < p.tolerance(5), "k={k}");
        }
    }

    #[test]
    fn lambda_examples() {
        let p = prec();
        let m = MappingSpec::power_cut(p.real(2), p.zero()).unwrap();
        let one = p.one();
        assert!(lambda_of_g(&Coupling::Finite(p.zero()), &one, &m, p)
            .unwrap()
            .is_zero());
        assert_eq!(lambda_of_g(&Coupling::Infinite, &one, &m, p).unwrap(), 1);
        let l = lambda_of_g(&Coupling::Finite(p.real(2)), &one, &m, p).unwrap();
        assert!(Float::with_val(p.bits(), &l - 0.5f64).abs() < p.tolerance(6));
        assert!(lambda_of_g(&Coupling::Finite(p.real(-1)), &one, &m, p).is_err());
    }

    #[test]
    fn lambda_round_trip_both_families() {
        let p = prec();
        for m in [
            MappingSpec::power_cut(p.ratio(3, 2), p.zero()).unwrap(),
            MappingSpec::shifted_power(p.ratio(3, 2), p.zero()).unwrap(),
        ] {
            for g in [1e-6, 0.3, 5.0, 1e8] {
                let rho = p.real(0.37);
                let l = lambda_of_g(&Coupling::Finite(p.real(g)), &rho, &m, p).unwrap();
                let back = Float::with_val(p.bits(), m.zeta(&l) * &rho);
                // error transported back to λ
                let slope = Float::with_val(p.bits(), m.zeta_derivative(&l) * &rho);
                let dl = Float::with_val(p.bits(), (back - g) / slope).abs();
                assert!(dl < p.tolerance(6), "g={g} dl={}", dl.to_f64());
            }
        }
    }

    #[test]
    fn re_expansion_reproduces_source() {
        let p = prec();
        let src =
            PowerSeries::from_f64(&[1.0, -0.125, 0.2734375, -1.2, 7.5, -50.0], "g", p).unwrap();
        let m = MappingSpec::power_cut(p.real(2), p.ratio(1, 2)).unwrap();
        let t = build_rho_table(&src, &m).unwrap();
        let rho = p.real(0.23);
        let lam = lambda_series(&rho, &m, 5).unwrap();
        let lam_series = PowerSeries::new(
            (0..=5).map(|k| t.poly(k).unwrap().eval(&rho)).collect(),
            "lambda",
        )
        .unwrap();
        let in_g = lam_series.compose(&lam).unwrap();
        let factor = binomial_series(&p.ratio(1, 2), 5, "x")
            .compose(&lam)
            .unwrap();
        let back = in_g.multiply(&factor).unwrap();
        for k in 0..=5 {
            let diff = Float::with_val(p.bits(), back.coeff(k) - src.coeff(k));
            assert!(
                diff.abs() < p.tolerance(8),
                "k={k}: {}",
                back.coeff(k).to_f64()
            );
        }
    }
}
