//! Minimal MPFR complex numbers.
//!
//! Only what complex ρ candidates need: field operations, real powers on the
//! principal branch and Horner evaluation. Hot loops in the root finder use
//! their own in-place scratch arithmetic instead of these allocating methods.

use rug::ops::Pow;
use rug::Float;

#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub fn zero(bits: u32) -> Self {
        Complex {
            re: Float::new(bits),
            im: Float::new(bits),
        }
    }

    pub fn from_real(re: &Float) -> Self {
        Complex {
            re: re.clone(),
            im: Float::new(re.prec()),
        }
    }

    pub fn new(re: Float, im: Float) -> Self {
        Complex { re, im }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub(crate) fn set_prec(&mut self, bits: u32) {
        self.re.set_prec(bits);
        self.im.set_prec(bits);
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> Float {
        let bits = self.prec();
        Float::with_val(bits, self.re.square_ref()) + Float::with_val(bits, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        self.norm_sqr().sqrt()
    }

    /// Principal argument in `(-π, π]`.
    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    pub fn add(&self, other: &Complex) -> Self {
        let bits = self.prec();
        Complex::new(
            Float::with_val(bits, &self.re + &other.re),
            Float::with_val(bits, &self.im + &other.im),
        )
    }

    pub fn sub(&self, other: &Complex) -> Self {
        let bits = self.prec();
        Complex::new(
            Float::with_val(bits, &self.re - &other.re),
            Float::with_val(bits, &self.im - &other.im),
        )
    }

    pub fn add_real(&self, x: &Float) -> Self {
        Complex::new(Float::with_val(self.prec(), &self.re + x), self.im.clone())
    }

    /// `x - self`
    pub fn rsub_real(&self, x: &Float) -> Self {
        Complex::new(Float::with_val(self.prec(), x - &self.re), -self.im.clone())
    }

    pub fn mul(&self, other: &Complex) -> Self {
        let bits = self.prec();
        let re = Float::with_val(bits, &self.re * &other.re)
            - Float::with_val(bits, &self.im * &other.im);
        let im = Float::with_val(bits, &self.re * &other.im)
            + Float::with_val(bits, &self.im * &other.re);
        Complex::new(re, im)
    }

    pub fn scale(&self, x: &Float) -> Self {
        let bits = self.prec();
        Complex::new(
            Float::with_val(bits, &self.re * x),
            Float::with_val(bits, &self.im * x),
        )
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        let bits = self.prec();
        Complex::new(
            Float::with_val(bits, &self.re / &n),
            -Float::with_val(bits, &self.im / &n),
        )
    }

    pub fn div(&self, other: &Complex) -> Self {
        self.mul(&other.recip())
    }

    pub fn ln(&self) -> Self {
        let bits = self.prec();
        Complex::new(
            Float::with_val(bits, self.norm_sqr().ln()) / 2u32,
            self.arg(),
        )
    }

    pub fn exp(&self) -> Self {
        let bits = self.prec();
        let r = Float::with_val(bits, self.re.exp_ref());
        let (s, c) = Float::with_val(bits, &self.im).sin_cos(Float::new(bits));
        Complex::new(Float::with_val(bits, &r * &c), r * s)
    }

    /// `self^x` on the principal branch; real positive bases stay real.
    pub fn powf(&self, x: &Float) -> Self {
        let bits = self.prec();
        if self.im.is_zero() && !self.re.is_sign_negative() {
            return Complex::from_real(&Float::with_val(bits, (&self.re).pow(x)));
        }
        if self.re.is_zero() && self.im.is_zero() {
            return Complex::zero(bits);
        }
        self.ln().scale(x).exp()
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Complex::from_real(&Float::with_val(self.prec(), 1));
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }
}

/// `sum_i c_i z^i` for real coefficients.
pub fn eval_real_poly(coeffs: &[Float], z: &Complex) -> Complex {
    let bits = z.prec().max(coeffs.first().map_or(z.prec(), Float::prec));
    let mut acc = Complex::zero(bits);
    for c in coeffs.iter().rev() {
        acc = acc.mul(z).add_real(c);
    }
    acc
}

/// `sum_i c_i z^i` for complex coefficients.
pub fn eval_complex_poly(coeffs: &[Complex], z: &Complex) -> Complex {
    let mut acc = Complex::zero(z.prec());
    for c in coeffs.iter().rev() {
        acc = acc.mul(z).add(c);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(Float::with_val(200, re), Float::with_val(200, im))
    }

    fn close(a: &Complex, re: f64, im: f64) -> bool {
        (a.re.to_f64() - re).abs() < 1e-14 && (a.im.to_f64() - im).abs() < 1e-14
    }

    #[test]
    fn field_operations() {
        let a = c(1.0, 2.0);
        let b = c(3.0, -1.0);
        assert!(close(&a.mul(&b), 5.0, 5.0));
        assert!(close(&a.mul(&b).div(&b), 1.0, 2.0));
        assert!(close(&a.sub(&b), -2.0, 3.0));
    }

    #[test]
    fn square_root_of_minus_one() {
        let half = Float::with_val(200, 0.5);
        assert!(close(&c(-1.0, 0.0).powf(&half), 0.0, 1.0));
        assert!(close(&c(4.0, 0.0).powf(&half), 2.0, 0.0));
    }

    #[test]
    fn powf_agrees_with_powi() {
        let z = c(0.3, -0.7);
        let three = Float::with_val(200, 3);
        let a = z.powf(&three);
        let b = z.powi(3);
        assert!(close(&a, b.re.to_f64(), b.im.to_f64()));
    }

    #[test]
    fn horner_at_i() {
        // 1 + z^2 at i
        let coeffs = vec![
            Float::with_val(200, 1),
            Float::new(200),
            Float::with_val(200, 1),
        ];
        assert!(close(&eval_real_poly(&coeffs, &c(0.0, 1.0)), 0.0, 0.0));
    }
}
