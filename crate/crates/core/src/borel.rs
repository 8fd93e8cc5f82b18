//! Borel–Leroy summation, with the cut plane of the Borel transform mapped
//! onto the unit disk, and the Borel–Padé variant.
//!
//! The map is `z = (4/a) u/(1-u)²`, i.e. `u = (√(1+az) - 1)/(√(1+az) + 1)`:
//! it sends the plane cut along `z <= -1/a` onto `|u| < 1`.

use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};
use crate::pade::{pade_fit, PadeApproximant};
use crate::quad::exp_sinh;
use crate::series::{PowerSeries, Precision};

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: Float,
    pub max_evals: usize,
}

impl QuadratureConfig {
    pub fn new(prec: Precision) -> Self {
        QuadratureConfig {
            rel_tol: prec.real(1e-25),
            max_evals: 40_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BorelConfig {
    /// Leroy parameter σ.
    pub sigma: Float,
    /// Singularity parameter: the transform is analytic for `|z| < 1/a`.
    pub a: Float,
    /// Highest order of the mapped series that is kept.
    pub truncation: usize,
    pub quadrature: QuadratureConfig,
}

impl BorelConfig {
    pub fn new(sigma: Float, a: Float, truncation: usize, prec: Precision) -> Result<Self> {
        if sigma.is_nan() || sigma.is_sign_negative() && !sigma.is_zero() {
            return Err(Error::usage("sigma must be >= 0"));
        }
        if a.is_nan() || a <= 0 {
            return Err(Error::usage("a must be positive"));
        }
        if truncation < 1 {
            return Err(Error::usage("truncation must be >= 1"));
        }
        Ok(BorelConfig {
            sigma,
            a,
            truncation,
            quadrature: QuadratureConfig::new(prec),
        })
    }
}

/// `b_k = f_k / Γ(k + σ + 1)`.
pub fn borel_leroy_transform(s: &PowerSeries, sigma: &Float) -> Result<PowerSeries> {
    if sigma.is_nan() || sigma.is_sign_negative() && !sigma.is_zero() {
        return Err(Error::usage("sigma must be >= 0"));
    }
    let bits = s.bits();
    let coeffs = s
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, f)| {
            let gamma = (Float::with_val(bits, sigma + (k as u32 + 1))).gamma();
            Float::with_val(bits, f / &gamma)
        })
        .collect();
    PowerSeries::new(coeffs, s.var())
}

/// Re-expands `B(z)` in `u`, `z = (4/a) u/(1-u)²`.
pub fn conformal_map_coeffs(b: &PowerSeries, a: &Float) -> Result<PowerSeries> {
    if a.is_nan() || *a <= 0 {
        return Err(Error::usage("a must be positive"));
    }
    let bits = b.bits();
    let scale = Float::with_val(bits, 4u32 / a);
    // u/(1-u)² = sum n u^n
    let z = PowerSeries::new(
        (0..=b.order())
            .map(|n| Float::with_val(bits, &scale * n as u32))
            .collect(),
        "u",
    )?;
    b.clone().with_var("u").compose(&z)
}

/// `u(z) = (√(1+az) - 1)/(√(1+az) + 1)`.
pub fn u_of_z(z: &Float, a: &Float) -> Float {
    let bits = z.prec().max(a.prec());
    let w = (Float::with_val(bits, a * z) + 1u32).sqrt();
    Float::with_val(bits, &w - 1u32) / (w + 1u32)
}

#[derive(Clone, Debug)]
pub struct BorelSum {
    pub value: Float,
    /// `|S_K - S_{K-1}|` between the two highest truncations of the mapped series.
    pub truncation_error: Float,
    pub quadrature_error: Float,
}

fn laplace<F>(
    sigma: &Float,
    quad: &QuadratureConfig,
    mut b_of: F,
    prec: Precision,
) -> Result<(Float, Float)>
where
    F: FnMut(&Float) -> Float,
{
    let bits = prec.bits();
    let zero = prec.zero();
    let integrand = |t: &Float| {
        let weight = if sigma.is_zero() {
            Float::with_val(bits, -t).exp()
        } else {
            (Float::with_val(bits, t.ln_ref()) * sigma - t).exp()
        };
        b_of(t) * weight
    };
    let out = exp_sinh(integrand, &zero, &quad.rel_tol, quad.max_evals)?;
    Ok((out.value, out.error))
}

fn check_coupling(g: &Float) -> Result<()> {
    if g.is_nan() || *g <= 0 {
        return Err(Error::domain("Borel summation needs g > 0"));
    }
    Ok(())
}

/// `∫₀^∞ t^σ e^{-t} B_σ(g t) dt` with `B_σ` evaluated through the mapped
/// series truncated at `cfg.truncation`.
///
/// A truncation above the source order treats the source as exactly
/// polynomial (missing coefficients are zero); a polynomial becomes an
/// infinite series in `u`, so its sum is exact only as the truncation grows.
pub fn borel_sum(
    s: &PowerSeries,
    cfg: &BorelConfig,
    g: &Float,
    prec: Precision,
) -> Result<BorelSum> {
    check_coupling(g)?;
    let k = cfg.truncation;
    let source = if k <= s.order() {
        s.truncate(k)
    } else {
        let mut c = s.coeffs().to_vec();
        c.resize(k + 1, Float::new(s.bits()));
        PowerSeries::new(c, s.var())?
    };
    let b = borel_leroy_transform(&source, &cfg.sigma)?;
    let mapped = conformal_map_coeffs(&b, &cfg.a)?;
    let bits = prec.bits();
    let c = mapped.coeffs();
    let (value, quad_err) = laplace(
        &cfg.sigma,
        &cfg.quadrature,
        |t| {
            let u = u_of_z(&Float::with_val(bits, g * t), &cfg.a);
            let mut acc = Float::new(bits);
            for coeff in c.iter().rev() {
                acc *= &u;
                acc += coeff;
            }
            acc
        },
        prec,
    )?;
    // contribution of the last mapped term alone
    let (last, _) = laplace(
        &cfg.sigma,
        &cfg.quadrature,
        |t| {
            let u = u_of_z(&Float::with_val(bits, g * t), &cfg.a);
            Float::with_val(bits, (&u).pow(k as u32)) * &c[k]
        },
        prec,
    )?;
    Ok(BorelSum {
        value,
        truncation_error: last.abs(),
        quadrature_error: quad_err,
    })
}

/// Borel–Padé: `[L/M]` of the Borel–Leroy transform inside the same Laplace
/// integral. Poles on the positive axis make the integral meaningless and are
/// reported as a summability violation.
pub fn borel_pade_sum(
    s: &PowerSeries,
    sigma: &Float,
    l: usize,
    m: usize,
    g: &Float,
    quad: &QuadratureConfig,
    prec: Precision,
) -> Result<(Float, PadeApproximant)> {
    check_coupling(g)?;
    let b = borel_leroy_transform(s, sigma)?;
    let approx = pade_fit(&b, l, m, prec)?;
    if let Some(pole) = approx.real_poles(prec)?.into_iter().find(|p| *p > 0) {
        return Err(Error::Summability(format!(
            "Borel-Pade [{l}/{m}] has a pole at z = {:.6e} on the integration path",
            pole.to_f64()
        )));
    }
    let bits = prec.bits();
    let (value, _) = laplace(
        sigma,
        quad,
        |t| {
            let z = Float::with_val(bits, g * t);
            approx.numerator().eval(&z) / approx.denominator().eval(&z)
        },
        prec,
    )?;
    Ok((value, approx))
}

/// Smallest zero of the Borel sum of `s` above `start`: a scan in steps of
/// `step` up to `stop` for a sign change, then Illinois regula falsi until
/// the bracket is below `10^-12` relative.
pub fn borel_zero(
    s: &PowerSeries,
    cfg: &BorelConfig,
    start: f64,
    step: f64,
    stop: f64,
    prec: Precision,
) -> Result<Float> {
    let f = |g: &Float| borel_sum(s, cfg, g, prec).map(|b| b.value);
    let mut lo = prec.real(start);
    let mut f_lo = f(&lo)?;
    let mut hi = lo.clone();
    let mut f_hi = f_lo.clone();
    let mut x = start;
    while f_lo.is_sign_negative() == f_hi.is_sign_negative() {
        x += step;
        if x > stop {
            return Err(Error::Solver(format!(
                "Borel sum has no sign change in [{start}, {stop}]"
            )));
        }
        lo = hi;
        f_lo = f_hi;
        hi = prec.real(x);
        f_hi = f(&hi)?;
    }
    let bits = prec.bits();
    let mut side = 0i8;
    for _ in 0..200 {
        let width = Float::with_val(bits, &hi - &lo);
        if width.to_f64().abs() <= 1e-12 * hi.to_f64().abs() {
            break;
        }
        // secant point of the bracket
        let mid = Float::with_val(
            bits,
            &lo - Float::with_val(bits, &f_lo * &width) / Float::with_val(bits, &f_hi - &f_lo),
        );
        let f_mid = f(&mid)?;
        if f_mid.is_zero() {
            return Ok(mid);
        }
        if f_mid.is_sign_negative() == f_hi.is_sign_negative() {
            hi = mid;
            f_hi = f_mid;
            if side == 1 {
                f_lo /= 2u32;
            }
            side = 1;
        } else {
            lo = mid;
            f_lo = f_mid;
            if side == -1 {
                f_hi /= 2u32;
            }
            side = -1;
        }
    }
    Ok(Float::with_val(bits, &lo + &hi) / 2u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec() -> Precision {
        Precision::default()
    }

    fn alternating_factorial(order: usize) -> PowerSeries {
        let p = prec();
        let mut c = vec![p.one()];
        for k in 1..=order {
            let next = Float::with_val(p.bits(), &c[k - 1] * k as u32);
            c.push(-next);
        }
        PowerSeries::new(c, "g").unwrap()
    }

    #[test]
    fn factorials_become_ones() {
        let p = prec();
        let mut c = vec![p.one()];
        for k in 1..=6u32 {
            let next = Float::with_val(p.bits(), &c[k as usize - 1] * k);
            c.push(next);
        }
        let s = PowerSeries::new(c, "g").unwrap();
        let b = borel_leroy_transform(&s, &p.zero()).unwrap();
        for x in b.coeffs() {
            assert!((x.to_f64() - 1.0).abs() < 1e-40);
        }
    }

    #[test]
    fn map_of_identity() {
        let p = prec();
        let b = PowerSeries::variable(4, "z", p);
        let m = conformal_map_coeffs(&b, &p.real(4)).unwrap();
        let got: Vec<f64> = m.coeffs().iter().map(Float::to_f64).collect();
        assert_eq!(got, vec![0.0, 1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn map_points() {
        let p = prec();
        let a = p.real(0.5);
        assert!(u_of_z(&p.zero(), &a).is_zero());
        assert_eq!(u_of_z(&p.real(-2), &a).to_f64(), -1.0);
        assert!(u_of_z(&p.real(1e30), &a).to_f64() > 0.999);
    }

    #[test]
    fn pade_zero_one_of_alternating_factorial() {
        let p = prec();
        let s = alternating_factorial(4);
        let quad = QuadratureConfig::new(p);
        let (v, _) = borel_pade_sum(&s, &p.zero(), 0, 1, &p.one(), &quad, p).unwrap();
        // e E1(1)
        assert!((v.to_f64() - 0.596_347_362_323_194_1).abs() < 1e-15);
    }

    #[test]
    fn positive_pole_is_rejected() {
        let p = prec();
        // sum k! g^k: Borel transform 1/(1-z)
        let s = PowerSeries::new(
            (0..5u32)
                .map(|k| Float::with_val(p.bits(), Float::factorial(k)))
                .collect(),
            "g",
        )
        .unwrap();
        let quad = QuadratureConfig::new(p);
        let err = borel_pade_sum(&s, &p.zero(), 0, 1, &p.one(), &quad, p).unwrap_err();
        assert!(matches!(err, Error::Summability(_)));
    }

    #[test]
    fn zero_of_a_polynomial() {
        // -g + g^2 is reproduced exactly by the Borel integral
        let p = prec();
        let s = PowerSeries::from_f64(&[0.0, -1.0, 1.0], "g", p).unwrap();
        let cfg = BorelConfig::new(p.one(), p.real(0.5), 40, p).unwrap();
        let z = borel_zero(&s, &cfg, 0.5, 0.25, 4.0, p).unwrap();
        assert!((z.to_f64() - 1.0).abs() < 1e-11);
    }

    #[test]
    fn negative_coupling_is_rejected() {
        let p = prec();
        let cfg = BorelConfig::new(p.zero(), p.one(), 4, p).unwrap();
        assert!(borel_sum(&alternating_factorial(4), &cfg, &p.real(-1), p).is_err());
    }
}
