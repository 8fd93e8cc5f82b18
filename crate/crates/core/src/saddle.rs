//! Convergence constants of the order-dependent mapping: the saddle system
//! in `(μ, λ)`, the exact rate of the quartic integral, and `R = μ A`.

use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};
use crate::series::Precision;

#[derive(Clone, Debug)]
pub struct SaddleSolution {
    pub alpha: Float,
    /// `μ = R/A`
    pub mu: Float,
    /// Saddle point, in `(-1, 0)`.
    pub lambda_saddle: Float,
    /// Residuals of the two saddle equations at `(μ, λ)`.
    pub residuals: [Float; 2],
}

/// Residuals of
/// `μ + (1/λ)(1-λ)^{α-1}((α-1)λ+1) = 0` and `(1/λ)(1-λ)^α - μ ln|λ| = 0`.
pub fn saddle_residuals(alpha: &Float, mu: &Float, lambda: &Float) -> [Float; 2] {
    let bits = alpha.prec().max(mu.prec()).max(lambda.prec());
    let one_minus = Float::with_val(bits, 1 - lambda);
    let am1 = Float::with_val(bits, alpha - 1u32);
    let first = Float::with_val(bits, (&one_minus).pow(&am1))
        * (Float::with_val(bits, &am1 * lambda) + 1u32)
        / lambda
        + mu;
    let ln_abs = Float::with_val(bits, lambda.abs_ref()).ln();
    let second = Float::with_val(bits, (&one_minus).pow(alpha)) / lambda
        - Float::with_val(bits, mu * &ln_abs);
    [first, second]
}

/// Solves the saddle system for `α > 1`.
///
/// Eliminating `μ` through the first equation leaves
/// `h(λ) = (1-λ) + ((α-1)λ+1) ln(-λ)`, whose zero in `(-1, 0)` is unique:
/// `h → -∞` at `0⁻`, and `h > 0` at the left end of the window where
/// `(α-1)λ+1 > 0` (outside it both terms are positive). Bisection on that
/// bracket runs to working precision.
pub fn solve_saddle(alpha: &Float, prec: Precision) -> Result<SaddleSolution> {
    if alpha.is_nan() || *alpha <= 1 {
        return Err(Error::domain("the saddle system needs alpha > 1"));
    }
    let bits = prec.bits();
    let am1 = Float::with_val(bits, alpha - 1u32);
    let h = |l: &Float| {
        let log = Float::with_val(bits, -l).ln();
        Float::with_val(bits, 1 - l) + (Float::with_val(bits, &am1 * l) + 1u32) * log
    };
    let mut lo = if am1 > 1 {
        -Float::with_val(bits, am1.recip_ref())
    } else {
        Float::with_val(bits, -1)
    };
    // first point of the window where h is positive
    let mut hi = Float::with_val(bits, &lo / 2u32);
    while h(&hi) > 0 {
        lo = hi.clone();
        hi /= 2u32;
        if hi.get_exp().is_none_or(|e| e < -(bits as i32)) {
            return Err(Error::Solver(
                "saddle bracket collapsed at lambda = 0".into(),
            ));
        }
    }
    if h(&lo) <= 0 {
        return Err(Error::Solver(
            "no sign change for the saddle equation".into(),
        ));
    }
    for _ in 0..bits + 8 {
        let mid = Float::with_val(bits, &lo + &hi) / 2u32;
        if mid == lo || mid == hi {
            break;
        }
        if h(&mid) > 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda = Float::with_val(bits, &lo + &hi) / 2u32;
    let one_minus = Float::with_val(bits, 1 - &lambda);
    let mu = -(Float::with_val(bits, (&one_minus).pow(&am1))
        * (Float::with_val(bits, &am1 * &lambda) + 1u32)
        / &lambda);
    let residuals = saddle_residuals(alpha, &mu, &lambda);
    let limit = prec.real(1e-12);
    for r in &residuals {
        if Float::with_val(bits, r.abs_ref()) > limit {
            return Err(Error::Solver(format!(
                "saddle residual {:e} too large",
                r.to_f64()
            )));
        }
    }
    Ok(SaddleSolution {
        alpha: alpha.clone(),
        mu,
        lambda_saddle: lambda,
        residuals,
    })
}

/// `(R, e^{-3/R})` for the quartic integral, `R` solving
/// `e^{√(R²+9)/R} = (√(R²+9) + R)/3`.
pub fn d0_exact_rate(prec: Precision) -> Result<(Float, Float)> {
    let bits = prec.bits();
    let h = |r: &Float| {
        let s = (Float::with_val(bits, r.square_ref()) + 9u32).sqrt();
        Float::with_val(bits, &s / r) - (Float::with_val(bits, &s + r) / 3u32).ln()
    };
    let mut lo = prec.real(1);
    let mut hi = prec.real(20);
    if !(h(&lo) > 0 && h(&hi) < 0) {
        return Err(Error::Solver(
            "rate equation is not bracketed by [1, 20]".into(),
        ));
    }
    for _ in 0..bits + 8 {
        let mid = Float::with_val(bits, &lo + &hi) / 2u32;
        if mid == lo || mid == hi {
            break;
        }
        if h(&mid) > 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = Float::with_val(bits, &lo + &hi) / 2u32;
    let rate = (Float::with_val(bits, -3) / &r).exp();
    Ok((r, rate))
}

/// `R = μ(α) A`.
pub fn predicted_r(alpha: &Float, a: &Float, prec: Precision) -> Result<Float> {
    if a.is_nan() || *a <= 0 {
        return Err(Error::domain("A must be positive"));
    }
    Ok(solve_saddle(alpha, prec)?.mu * a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec() -> Precision {
        Precision::default()
    }

    #[test]
    fn alpha_two() {
        let s = solve_saddle(&prec().real(2), prec()).unwrap();
        assert!((s.mu.to_f64() - 4.466846120).abs() < 1e-8);
        assert!((s.lambda_saddle.to_f64() + 0.2136524524).abs() < 1e-9);
        for r in &s.residuals {
            assert!(r.to_f64().abs() < 1e-40);
        }
    }

    #[test]
    fn alpha_at_most_one_is_rejected() {
        assert!(solve_saddle(&prec().real(1), prec()).is_err());
    }

    #[test]
    fn exact_rate_identity() {
        let (r, rate) = d0_exact_rate(prec()).unwrap();
        let back = (Float::with_val(prec().bits(), -3) / &r).exp();
        assert_eq!(rate, back);
        // root of the same equation written as e^{2s/R}(s-R) = s+R, solved independently
        let oracle = prec().parse("4.52663868461495978672965346448").unwrap();
        assert!(Float::with_val(prec().bits(), &r - &oracle).abs().to_f64() < 1e-28);
    }

    #[test]
    fn unit_a_gives_mu() {
        let two = prec().real(2);
        let r = predicted_r(&two, &prec().one(), prec()).unwrap();
        assert_eq!(r, solve_saddle(&two, prec()).unwrap().mu);
    }
}
