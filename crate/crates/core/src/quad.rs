//! Double-exponential quadrature at MPFR precision.
//!
//! `tanh_sinh` handles finite intervals with endpoint singularities of
//! algebraic type, `exp_sinh` handles `[a, inf)` for integrands that decay at
//! least exponentially. Both refine the step by halving until two successive
//! levels agree to the requested relative tolerance.

use rug::Float;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct QuadOutcome {
    pub value: Float,
    /// Difference between the last two refinement levels.
    pub error: Float,
    pub evaluations: usize,
}

const MAX_LEVEL: u32 = 14;
const T_LIMIT: f64 = 8.0;

/// Integrates `f` over `[a, b]`.
pub fn tanh_sinh<F>(
    f: F,
    a: &Float,
    b: &Float,
    rel_tol: &Float,
    max_evals: usize,
) -> Result<QuadOutcome>
where
    F: FnMut(&Float) -> Float,
{
    let bits = a.prec().max(b.prec()).max(rel_tol.prec());
    let half_width = Float::with_val(bits, b - a) / 2u32;
    let half_pi = Float::with_val(bits, rug::float::Constant::Pi) / 2u32;
    let (a, b) = (a.clone(), b.clone());
    let transform = move |t: &Float| -> Option<(Float, Float)> {
        let s = Float::with_val(bits, t.sinh_ref()) * &half_pi;
        let c = Float::with_val(bits, t.cosh_ref()) * &half_pi;
        let ch = Float::with_val(bits, s.cosh_ref());
        let weight = Float::with_val(bits, &half_width * &c) / ch.square();
        if weight.is_zero() || !weight.is_finite() {
            return None;
        }
        // distance to the nearer endpoint, computed without cancellation
        let e = Float::with_val(bits, s.abs_ref()) * 2u32;
        let dist = Float::with_val(bits, &half_width * 2u32) / (e.exp() + 1u32);
        let x = if s.is_sign_negative() {
            Float::with_val(bits, &a + &dist)
        } else {
            Float::with_val(bits, &b - &dist)
        };
        if x == a || x == b {
            return None;
        }
        Some((x, weight))
    };
    double_exponential(f, transform, bits, rel_tol, max_evals)
}

/// Integrates `f` over `[a, inf)`.
pub fn exp_sinh<F>(f: F, a: &Float, rel_tol: &Float, max_evals: usize) -> Result<QuadOutcome>
where
    F: FnMut(&Float) -> Float,
{
    let bits = a.prec().max(rel_tol.prec());
    let half_pi = Float::with_val(bits, rug::float::Constant::Pi) / 2u32;
    let a = a.clone();
    let transform = move |t: &Float| -> Option<(Float, Float)> {
        let s = Float::with_val(bits, t.sinh_ref()) * &half_pi;
        let e = s.exp();
        let c = Float::with_val(bits, t.cosh_ref()) * &half_pi;
        let weight = Float::with_val(bits, &e * &c);
        if weight.is_zero() || !weight.is_finite() {
            return None;
        }
        Some((Float::with_val(bits, &a + &e), weight))
    };
    double_exponential(f, transform, bits, rel_tol, max_evals)
}

fn double_exponential<F, T>(
    mut f: F,
    transform: T,
    bits: u32,
    rel_tol: &Float,
    max_evals: usize,
) -> Result<QuadOutcome>
where
    F: FnMut(&Float) -> Float,
    T: Fn(&Float) -> Option<(Float, Float)>,
{
    let cutoff = Float::with_val(bits, rel_tol * 1e-4);
    let mut evaluations = 0usize;
    let mut eval_at = |t: &Float, evaluations: &mut usize| -> Result<Option<Float>> {
        let Some((x, w)) = transform(t) else {
            return Ok(None);
        };
        *evaluations += 1;
        if *evaluations > max_evals {
            return Err(Error::Resource(format!(
                "quadrature exceeded its budget of {max_evals} evaluations"
            )));
        }
        let fx = f(&x);
        if !fx.is_finite() {
            return Err(Error::domain(format!(
                "integrand is not finite at x = {}",
                x.to_f64()
            )));
        }
        Ok(Some(fx * w))
    };

    // sum over t = (start + j*stride) * h for j >= 0 in both directions
    // returns the signed sum and the sum of magnitudes; `reach` holds, per
    // direction, the furthest |t| with a significant term, and refinement
    // sweeps never stop short of it (narrow peaks far out would be missed)
    let mut sweep = |h: &Float,
                     odd_only: bool,
                     scale: &Float,
                     reach: &mut [Float; 2],
                     evaluations: &mut usize|
     -> Result<(Float, Float)> {
        let mut acc = Float::new(bits);
        let mut mass = Float::new(bits);
        let t_limit = Float::with_val(bits, T_LIMIT);
        for (side, sign) in [1i32, -1].into_iter().enumerate() {
            let mut k: i64 = if odd_only {
                1
            } else if sign == 1 {
                0
            } else {
                1
            };
            let step = if odd_only { 2 } else { 1 };
            let mut small_run = 0;
            loop {
                let t = Float::with_val(bits, h * (k * i64::from(sign)));
                if Float::with_val(bits, t.abs_ref()) > t_limit {
                    break;
                }
                match eval_at(&t, evaluations)? {
                    None => break,
                    Some(term) => {
                        let size = Float::with_val(bits, term.abs_ref());
                        acc += &term;
                        mass += &size;
                        let reference = Float::with_val(bits, scale.abs_ref()).max(&mass);
                        let t_abs = Float::with_val(bits, t.abs_ref());
                        if size <= Float::with_val(bits, &reference * &cutoff) {
                            if t_abs < reach[side] {
                                k += step;
                                continue;
                            }
                            small_run += 1;
                            if small_run >= 3 {
                                break;
                            }
                        } else {
                            small_run = 0;
                            if t_abs > reach[side] {
                                reach[side] = t_abs;
                            }
                        }
                    }
                }
                k += step;
            }
        }
        Ok((acc, mass))
    };

    let mut h = Float::with_val(bits, 1);
    let zero = Float::new(bits);
    let mut reach = [Float::new(bits), Float::new(bits)];
    let (mut raw, mut raw_mass) = sweep(&h, false, &zero, &mut reach, &mut evaluations)?;
    let mut estimate = Float::with_val(bits, &raw * &h);
    for level in 1..=MAX_LEVEL {
        h /= 2u32;
        let (fresh, fresh_mass) = sweep(&h, true, &raw_mass, &mut reach, &mut evaluations)?;
        raw += &fresh;
        raw_mass += &fresh_mass;
        let next = Float::with_val(bits, &raw * &h);
        let diff = Float::with_val(bits, &next - &estimate).abs();
        estimate = next;
        // relative to ∫|f| as well, so integrals that cancel to ~0 still converge
        let mass = Float::with_val(bits, &raw_mass * &h);
        let bound = Float::with_val(bits, estimate.abs_ref()).max(&mass) * rel_tol;
        if level >= 3 && diff <= bound {
            return Ok(QuadOutcome {
                value: estimate,
                error: diff,
                evaluations,
            });
        }
        if estimate.is_zero() && diff.is_zero() && level >= 3 {
            return Ok(QuadOutcome {
                value: estimate,
                error: diff,
                evaluations,
            });
        }
    }
    Err(Error::Resource(format!(
        "quadrature did not reach relative tolerance {:e} within {MAX_LEVEL} levels",
        rel_tol.to_f64()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Precision;

    #[test]
    fn polynomial_on_interval() {
        let p = Precision::default();
        let tol = p.tolerance(10);
        let out = tanh_sinh(
            |x| Float::with_val(p.bits(), x * x),
            &p.zero(),
            &p.real(3),
            &tol,
            100_000,
        )
        .unwrap();
        let err = Float::with_val(p.bits(), &out.value - 9u32).abs();
        assert!(err < p.tolerance(12), "{}", err.to_f64());
    }

    #[test]
    fn endpoint_singularity() {
        // int_0^1 x^{-1/2} dx = 2
        let p = Precision::new(40).unwrap();
        let tol = p.tolerance(10);
        let out = tanh_sinh(
            |x| Float::with_val(p.bits(), x.sqrt_ref()).recip(),
            &p.zero(),
            &p.one(),
            &tol,
            100_000,
        )
        .unwrap();
        assert!(Float::with_val(p.bits(), &out.value - 2u32).abs() < 1e-25);
    }

    #[test]
    fn laplace_moment() {
        // int_0^inf t^3 e^{-t} dt = 6
        let p = Precision::default();
        let tol = p.tolerance(10);
        let out = exp_sinh(
            |t| {
                let e = Float::with_val(p.bits(), -t).exp();
                Float::with_val(p.bits(), t * t) * t * e
            },
            &p.zero(),
            &tol,
            100_000,
        )
        .unwrap();
        assert!(Float::with_val(p.bits(), &out.value - 6u32).abs() < p.tolerance(12));
    }

    #[test]
    fn budget_is_enforced() {
        let p = Precision::default();
        let tol = p.tolerance(10);
        let res = exp_sinh(|t| Float::with_val(p.bits(), -t).exp(), &p.zero(), &tol, 20);
        assert!(matches!(res, Err(Error::Resource(_))));
    }
}
