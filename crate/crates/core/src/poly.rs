//! Dense real polynomials and their roots.
//!
//! Roots come from a simultaneous Aberth–Ehrlich iteration run in MPFR
//! complex arithmetic: first at a cheap precision to locate all roots, then
//! at working precision to polish them.

use rug::ops::NegAssign;
use rug::{Assign, Float};

use crate::complex::{eval_complex_poly, Complex};
use crate::error::{Error, Result};
use crate::series::Precision;

/// Real polynomial `sum_i a_i x^i`, coefficients in ascending order.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Float>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Float>) -> Self {
        assert!(!coeffs.is_empty(), "polynomial needs a coefficient");
        Polynomial { coeffs }
    }

    pub fn from_f64(values: &[f64], prec: Precision) -> Self {
        Polynomial::new(values.iter().map(|&v| prec.real(v)).collect())
    }

    pub fn coeffs(&self) -> &[Float] {
        &self.coeffs
    }

    pub fn bits(&self) -> u32 {
        self.coeffs[0].prec()
    }

    /// Degree ignoring vanishing leading coefficients (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn eval(&self, x: &Float) -> Float {
        let mut acc = Float::with_val(self.bits().max(x.prec()), 0);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// `sum_i |a_i| |x|^i`, the natural size against which a residual is small.
    pub fn abs_scale(&self, x: &Float) -> Float {
        let ax = Float::with_val(x.prec(), x.abs_ref());
        let mut acc = Float::with_val(self.bits().max(x.prec()), 0);
        for c in self.coeffs.iter().rev() {
            acc *= &ax;
            if c.is_sign_negative() {
                acc -= c;
            } else {
                acc += c;
            }
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() == 1 {
            return Polynomial::new(vec![Float::new(self.bits())]);
        }
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Float::with_val(c.prec(), c * i as u64))
                .collect(),
        )
    }
}

/// Workspace for in-place complex arithmetic, so the inner loops do not allocate.
struct Scratch {
    t1: Float,
    t2: Float,
    t3: Float,
}

impl Scratch {
    fn new(bits: u32) -> Self {
        Scratch {
            t1: Float::new(bits),
            t2: Float::new(bits),
            t3: Float::new(bits),
        }
    }

    /// `acc = acc * z + (c, 0)`
    fn mul_add_real(&mut self, acc: &mut Complex, z: &Complex, c: &Float) {
        self.t1.assign(&acc.re * &z.re);
        self.t2.assign(&acc.im * &z.im);
        self.t3.assign(&acc.re * &z.im);
        acc.im *= &z.re;
        acc.im += &self.t3;
        acc.re.assign(&self.t1 - &self.t2);
        acc.re += c;
    }

    /// `out = a / b`
    fn div(&mut self, out: &mut Complex, a: &Complex, b: &Complex) {
        self.t3.assign(b.re.square_ref());
        self.t2.assign(b.im.square_ref());
        self.t3 += &self.t2;
        self.t1.assign(&a.re * &b.re);
        self.t2.assign(&a.im * &b.im);
        self.t1 += &self.t2;
        self.t2.assign(&a.im * &b.re);
        out.im.assign(&a.re * &b.im);
        out.im.neg_assign();
        out.im += &self.t2;
        out.re.assign(&self.t1 / &self.t3);
        out.im /= &self.t3;
    }
}

const MAX_ITER: usize = 800;

/// All complex roots (with multiplicity) of a polynomial of degree >= 1.
pub fn complex_roots(poly: &Polynomial, prec: Precision) -> Result<Vec<Complex>> {
    let degree = poly.degree();
    if degree == 0 {
        return Err(Error::usage(
            "root finding needs a polynomial of degree >= 1",
        ));
    }
    let bits = prec.bits();
    let mut coeffs: Vec<Float> = poly.coeffs[..=degree]
        .iter()
        .map(|c| Float::with_val(bits, c))
        .collect();
    let zeros = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
    coeffs.drain(..zeros);
    let mut roots: Vec<Complex> = (0..zeros).map(|_| Complex::zero(bits)).collect();
    if coeffs.len() == 1 {
        return Ok(roots);
    }
    if coeffs.len() == 2 {
        let mut r = Complex::zero(bits);
        r.re.assign(-(Float::with_val(bits, &coeffs[0] / &coeffs[1])));
        roots.push(r);
        return Ok(roots);
    }
    // monic, so the iteration never sees the leading scale
    let lead = coeffs.last().unwrap().clone();
    for c in coeffs.iter_mut() {
        *c /= &lead;
    }
    let mut z = initial_guesses(&coeffs, 128);
    let coarse: Vec<Float> = coeffs.iter().map(|c| Float::with_val(128, c)).collect();
    aberth(&coarse, &mut z, 128, -100.0);
    for r in z.iter_mut() {
        r.set_prec(bits);
    }
    let target = -(f64::from(prec.digits()) - 4.0) * std::f64::consts::LOG2_10;
    if !aberth(&coeffs, &mut z, bits, target) {
        log::debug!("aberth: not all roots converged to working precision (degree {degree})");
    }
    roots.extend(z);
    Ok(roots)
}

/// Initial points on circles whose radii come from the Newton polygon of
/// `log|a_i|`.
fn initial_guesses(coeffs: &[Float], bits: u32) -> Vec<Complex> {
    let n = coeffs.len() - 1;
    let logs: Vec<f64> = coeffs
        .iter()
        .map(|c| {
            if c.is_zero() {
                f64::NEG_INFINITY
            } else {
                let (m, e) = c.to_f64_exp();
                m.abs().ln() + f64::from(e) * std::f64::consts::LN_2
            }
        })
        .collect();
    // upper convex hull of (i, log|a_i|)
    let mut hull: Vec<usize> = Vec::new();
    for i in 0..=n {
        if logs[i] == f64::NEG_INFINITY {
            continue;
        }
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b as f64 - a as f64) * (logs[i] - logs[a])
                - (i as f64 - a as f64) * (logs[b] - logs[a]);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    let mut out = Vec::with_capacity(n);
    for w in hull.windows(2) {
        let (i, j) = (w[0], w[1]);
        let count = j - i;
        let log_r = (logs[i] - logs[j]) / count as f64;
        for m in 0..count {
            let theta = 2.0 * std::f64::consts::PI * m as f64 / count as f64
                + 2.0 * std::f64::consts::PI * i as f64 / n as f64
                + 0.4;
            let mut c = Complex::zero(bits);
            let r = Float::with_val(bits, log_r).exp();
            c.re.assign(Float::with_val(bits, &r * theta.cos()));
            c.im.assign(r * theta.sin());
            out.push(c);
        }
    }
    out
}

/// Gauss–Seidel Aberth–Ehrlich sweeps on a monic polynomial. Returns whether
/// every correction fell below `2^log2_tol` relative to its root.
fn aberth(coeffs: &[Float], z: &mut [Complex], bits: u32, log2_tol: f64) -> bool {
    let n = z.len();
    let mut s = Scratch::new(bits);
    let mut p = Complex::zero(bits);
    let mut dp = Complex::zero(bits);
    let mut w = Complex::zero(bits);
    let mut diff = Complex::zero(bits);
    let mut inv = Complex::zero(bits);
    let mut sum = Complex::zero(bits);
    let mut one = Complex::zero(bits);
    one.re.assign(1);
    let zero = Float::new(bits);
    let abs_coeffs: Vec<Float> = coeffs
        .iter()
        .map(|c| Float::with_val(bits, c.abs_ref()))
        .collect();
    let mut modulus = Float::new(bits);
    let mut level = Float::new(bits);
    // 8 n ulp
    let noise = (Float::with_val(bits, 1u32) >> (bits - 3)) * (n as u32 + 1);
    let mut done = vec![false; n];
    for _ in 0..MAX_ITER {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            // Horner for p and p', plus sum |a_j| |z|^j for the rounding level
            p.re.assign(&coeffs[n]);
            p.im.assign(0);
            dp.re.assign(0);
            dp.im.assign(0);
            modulus.assign(z[i].abs());
            level.assign(&abs_coeffs[n]);
            for (c, ca) in coeffs[..n].iter().zip(&abs_coeffs[..n]).rev() {
                s.mul_add_real(&mut dp, &z[i], &zero);
                dp.re += &p.re;
                dp.im += &p.im;
                s.mul_add_real(&mut p, &z[i], c);
                level *= &modulus;
                level += ca;
            }
            if p.re.is_zero() && p.im.is_zero() {
                done[i] = true;
                continue;
            }
            // |p| already at rounding level: further steps only chase noise
            let at_noise = {
                let pa = Float::with_val(bits, p.re.abs_ref())
                    .max(&Float::with_val(bits, p.im.abs_ref()));
                level *= &noise;
                pa <= level
            };
            if dp.re.is_zero() && dp.im.is_zero() {
                // stationary point: nudge off it
                z[i].re *= 1.0 + 1e-3;
                z[i].im += Float::with_val(bits, 1e-3);
                all_done = false;
                continue;
            }
            s.div(&mut w, &p, &dp);
            sum.re.assign(0);
            sum.im.assign(0);
            for j in 0..n {
                if j == i {
                    continue;
                }
                diff.re.assign(&z[i].re - &z[j].re);
                diff.im.assign(&z[i].im - &z[j].im);
                if diff.re.is_zero() && diff.im.is_zero() {
                    continue;
                }
                s.div(&mut inv, &one, &diff);
                sum.re += &inv.re;
                sum.im += &inv.im;
            }
            // correction = w / (1 - w * sum)
            let mut denom = Complex::zero(bits);
            denom.re.assign(&w.re * &sum.re);
            denom.re -= Float::with_val(bits, &w.im * &sum.im);
            denom.im.assign(&w.re * &sum.im);
            denom.im += Float::with_val(bits, &w.im * &sum.re);
            denom.re = Float::with_val(bits, 1) - &denom.re;
            denom.im.neg_assign();
            let mut corr = Complex::zero(bits);
            s.div(&mut corr, &w, &denom);
            if !corr.re.is_finite() || !corr.im.is_finite() {
                corr = w.clone();
            }
            z[i].re -= &corr.re;
            z[i].im -= &corr.im;
            let size = z[i].abs();
            let step = corr.abs();
            let small = if size.is_zero() {
                step.is_zero()
            } else {
                let rel = Float::with_val(bits, &step / &size);
                rel.is_zero() || rel.get_exp().is_none_or(|e| f64::from(e) < log2_tol)
            };
            if small || at_noise {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            return true;
        }
    }
    false
}

/// All roots (with multiplicity) of `sum_i c_i z^i` with complex
/// coefficients. Plain allocating Aberth iteration: meant for the low degrees
/// that fixed-point equations produce.
pub fn complex_coeff_roots(coeffs: &[Complex], prec: Precision) -> Result<Vec<Complex>> {
    let degree = coeffs
        .iter()
        .rposition(|c| !(c.re.is_zero() && c.im.is_zero()))
        .unwrap_or(0);
    if degree == 0 {
        return Err(Error::usage(
            "root finding needs a polynomial of degree >= 1",
        ));
    }
    let bits = prec.bits();
    if coeffs[..=degree].iter().all(Complex::is_real) {
        let real = Polynomial::new(
            coeffs[..=degree]
                .iter()
                .map(|c| Float::with_val(bits, &c.re))
                .collect(),
        );
        return complex_roots(&real, prec);
    }
    let lead = coeffs[degree].recip();
    let monic: Vec<Complex> = coeffs[..=degree].iter().map(|c| c.mul(&lead)).collect();
    let deriv: Vec<Complex> = monic
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.scale(&Float::with_val(bits, i)))
        .collect();
    let n = degree;
    // radius from the largest |a_i|^(1/(n-i))
    let radius = (0..n)
        .map(|i| {
            let a = monic[i].abs().to_f64();
            if a == 0.0 {
                0.0
            } else {
                a.powf(1.0 / (n - i) as f64)
            }
        })
        .fold(0.0_f64, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex> = (0..n)
        .map(|m| {
            let theta = 2.0 * std::f64::consts::PI * m as f64 / n as f64 + 0.4;
            Complex::new(
                Float::with_val(bits, radius * theta.cos()),
                Float::with_val(bits, radius * theta.sin()),
            )
        })
        .collect();
    let abs_coeffs: Vec<Float> = monic.iter().map(Complex::abs).collect();
    let noise = (Float::with_val(bits, 1u32) >> (bits - 3)) * (n as u32 + 1);
    let mut done = vec![false; n];
    for _ in 0..MAX_ITER {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let p = eval_complex_poly(&monic, &z[i]);
            let modulus = z[i].abs();
            let mut level = Float::new(bits);
            for a in abs_coeffs.iter().rev() {
                level *= &modulus;
                level += a;
            }
            if p.abs() <= Float::with_val(bits, &level * &noise) {
                done[i] = true;
                continue;
            }
            let dp = eval_complex_poly(&deriv, &z[i]);
            let w = p.div(&dp);
            let mut sum = Complex::zero(bits);
            for j in 0..n {
                if j != i {
                    let d = z[i].sub(&z[j]);
                    if !(d.re.is_zero() && d.im.is_zero()) {
                        sum = sum.add(&d.recip());
                    }
                }
            }
            let denom = w.mul(&sum).rsub_real(&Float::with_val(bits, 1));
            let mut corr = w.div(&denom);
            if !corr.re.is_finite() || !corr.im.is_finite() {
                corr = w;
            }
            z[i] = z[i].sub(&corr);
            let step = corr.abs();
            let size = z[i].abs();
            if step <= Float::with_val(bits, &size * &noise) {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }
    Ok(z)
}

/// Distinct real roots in ascending order.
///
/// A root is accepted as real when its imaginary part is below
/// `10^(-digits/2)` relative to its modulus and the residual at its real
/// part is below `scale * 10^(8 - digits)`, `scale = sum |a_i| |x|^i`.
/// Repeated roots are reported once (a triple root at 0 comes back as `[0]`).
pub fn polynomial_real_roots(poly: &Polynomial, prec: Precision) -> Result<Vec<Float>> {
    let roots = complex_roots(poly, prec)?;
    let bits = prec.bits();
    let im_tol = prec.tolerance(prec.digits() as i32 / 2);
    let residual_tol = prec.tolerance(8);
    let merge_tol = prec.tolerance(2 * prec.digits() as i32 / 3);
    let mut reals: Vec<Float> = Vec::new();
    for r in roots {
        let modulus = r.abs();
        let bound = Float::with_val(bits, &modulus * &im_tol);
        if Float::with_val(bits, r.im.abs_ref()) > bound && !modulus.is_zero() {
            continue;
        }
        let x = r.re;
        let residual = Float::with_val(bits, poly.eval(&x).abs_ref());
        let scale = poly.abs_scale(&x);
        if residual > Float::with_val(bits, &scale * &residual_tol) {
            continue;
        }
        reals.push(x);
    }
    reals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out: Vec<Float> = Vec::with_capacity(reals.len());
    for x in reals {
        if let Some(last) = out.last() {
            let gap = Float::with_val(bits, &x - last).abs();
            let size = Float::with_val(bits, x.abs_ref()).max(&Float::with_val(bits, 1));
            if gap <= Float::with_val(bits, &size * &merge_tol) {
                continue;
            }
        }
        out.push(x);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec() -> Precision {
        Precision::default()
    }

    fn roots_f64(values: &[f64]) -> Vec<f64> {
        polynomial_real_roots(&Polynomial::from_f64(values, prec()), prec())
            .unwrap()
            .iter()
            .map(Float::to_f64)
            .collect()
    }

    #[test]
    fn factorable_quadratic() {
        let r = roots_f64(&[2.0, -3.0, 1.0]);
        assert_eq!(r.len(), 2);
        assert!((r[0] - 1.0).abs() < 1e-40 && (r[1] - 2.0).abs() < 1e-40);
    }

    #[test]
    fn linear_root() {
        let r = roots_f64(&[0.5, -0.125]);
        assert_eq!(r, vec![4.0]);
    }

    #[test]
    fn triple_root_at_zero() {
        assert_eq!(roots_f64(&[0.0, 0.0, 0.0, 1.0]), vec![0.0]);
    }

    #[test]
    fn degree_zero_is_usage_error() {
        let p = Polynomial::from_f64(&[3.0], prec());
        assert!(matches!(
            polynomial_real_roots(&p, prec()),
            Err(Error::Usage(_))
        ));
        let p = Polynomial::from_f64(&[3.0, 0.0, 0.0], prec());
        assert!(polynomial_real_roots(&p, prec()).is_err());
    }

    #[test]
    fn complex_pairs_are_not_real() {
        // (x^2 + 1)(x - 3)
        assert_eq!(roots_f64(&[-3.0, 1.0, -3.0, 1.0]), vec![3.0]);
    }

    #[test]
    fn wilkinson_like_roots_are_resolved() {
        // prod_{i=1}^{20} (x - i)
        let p = prec();
        let mut c = vec![p.one()];
        for i in 1..=20 {
            let mut next = vec![p.zero(); c.len() + 1];
            for (k, a) in c.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= Float::with_val(p.bits(), a * i);
            }
            c = next;
        }
        let r = polynomial_real_roots(&Polynomial::new(c), p).unwrap();
        assert_eq!(r.len(), 20);
        for (i, x) in r.iter().enumerate() {
            assert!((x.to_f64() - (i + 1) as f64).abs() < 1e-30);
        }
    }

    #[test]
    fn complex_coefficients() {
        // (z - i)(z - 2) = z^2 - (2 + i) z + 2i
        let b = prec().bits();
        let c = |re: f64, im: f64| Complex::new(Float::with_val(b, re), Float::with_val(b, im));
        let mut r =
            complex_coeff_roots(&[c(0.0, 2.0), c(-2.0, -1.0), c(1.0, 0.0)], prec()).unwrap();
        r.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap());
        assert!(r[0].re.to_f64().abs() < 1e-40 && (r[0].im.to_f64() - 1.0).abs() < 1e-40);
        assert!((r[1].re.to_f64() - 2.0).abs() < 1e-40 && r[1].im.to_f64().abs() < 1e-40);
    }

    #[test]
    fn derivative_and_degree() {
        let p = Polynomial::from_f64(&[1.0, 2.0, 3.0, 0.0], prec());
        assert_eq!(p.degree(), 2);
        let d = p.derivative();
        assert_eq!(
            d.coeffs().iter().map(Float::to_f64).collect::<Vec<_>>(),
            vec![2.0, 6.0, 0.0]
        );
    }
}
