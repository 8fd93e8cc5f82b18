//! Truncated power series with MPFR coefficients.
//!
//! Perturbative coefficients grow like `k!`, and the mapped coefficients
//! `P_k(rho)` are sums of large terms of alternating sign, so everything here
//! runs at a configurable decimal precision (default 64 digits) instead of
//! `f64`.

use std::fmt;

use rug::float::Round;
use rug::ops::Pow;
use rug::{Assign, Float};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_DIGITS: u32 = 64;
pub const MIN_DIGITS: u32 = 30;
pub const PRECISION_ENV: &str = "RESUM_PRECISION";

/// Working precision of coefficient arithmetic, in decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Precision {
    decimal_digits: u32,
}

impl Precision {
    pub fn new(decimal_digits: u32) -> Result<Self> {
        if decimal_digits < MIN_DIGITS {
            return Err(Error::usage(format!(
                "precision must be at least {MIN_DIGITS} decimal digits, got {decimal_digits}"
            )));
        }
        Ok(Precision { decimal_digits })
    }

    /// Reads `RESUM_PRECISION`, falling back to the default when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(PRECISION_ENV) {
            Ok(v) => {
                let d = v.trim().parse::<u32>().map_err(|_| {
                    Error::usage(format!("{PRECISION_ENV}={v:?} is not an integer"))
                })?;
                Precision::new(d)
            }
            Err(_) => Ok(Precision::default()),
        }
    }

    pub fn digits(self) -> u32 {
        self.decimal_digits
    }

    /// Mantissa bits, with a few guard bits on top of the decimal request.
    pub fn bits(self) -> u32 {
        (f64::from(self.decimal_digits) * std::f64::consts::LOG2_10).ceil() as u32 + 16
    }

    /// A higher precision for internal work that must not lose digits.
    pub fn widened(self, extra_digits: u32) -> Self {
        Precision {
            decimal_digits: self.decimal_digits + extra_digits,
        }
    }

    pub fn real<T>(self, value: T) -> Float
    where
        Float: Assign<T>,
    {
        Float::with_val(self.bits(), value)
    }

    pub fn zero(self) -> Float {
        Float::new(self.bits())
    }

    pub fn one(self) -> Float {
        self.real(1)
    }

    pub fn ratio(self, num: i64, den: i64) -> Float {
        self.real(num) / den
    }

    /// `10^(offset - digits)`, the scale of tolerances tied to precision.
    pub fn tolerance(self, offset: i32) -> Float {
        let exp = offset - self.decimal_digits as i32;
        self.real(10).pow(exp)
    }

    /// Parses a decimal string (e.g. `"-0.3765268283"`, `"1e-3"`, `"-308/729"`).
    pub fn parse(self, text: &str) -> Result<Float> {
        let text = text.trim();
        if let Some((num, den)) = text.split_once('/') {
            let n = self.parse(num)?;
            let d = self.parse(den)?;
            if d.is_zero() {
                return Err(Error::Parse {
                    location: text.to_string(),
                    message: "zero denominator".into(),
                });
            }
            return Ok(n / d);
        }
        let parsed = Float::parse(text).map_err(|e| Error::Parse {
            location: text.to_string(),
            message: e.to_string(),
        })?;
        let value = self.real(parsed);
        if !value.is_finite() {
            return Err(Error::Parse {
                location: text.to_string(),
                message: "value is not finite".into(),
            });
        }
        Ok(value)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            decimal_digits: DEFAULT_DIGITS,
        }
    }
}

impl TryFrom<u32> for Precision {
    type Error = Error;
    fn try_from(d: u32) -> Result<Self> {
        Precision::new(d)
    }
}

impl From<Precision> for u32 {
    fn from(p: Precision) -> u32 {
        p.decimal_digits
    }
}

/// Formats a float with `digits` significant decimal digits.
pub fn to_decimal(x: &Float, digits: usize) -> String {
    x.to_string_radix_round(10, Some(digits), Round::Nearest)
}

/// Truncated formal power series `sum_k c_k x^k`, `k = 0..=order`.
#[derive(Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Float>,
    var: String,
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PowerSeries")
            .field("var", &self.var)
            .field(
                "coeffs",
                &self.coeffs.iter().map(|c| c.to_f64()).collect::<Vec<_>>(),
            )
            .finish()
    }
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Float>, var: impl Into<String>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::usage(
                "a power series needs at least one coefficient",
            ));
        }
        if let Some(k) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::domain(format!("coefficient {k} is not finite")));
        }
        Ok(PowerSeries {
            coeffs,
            var: var.into(),
        })
    }

    pub fn from_f64(values: &[f64], var: impl Into<String>, prec: Precision) -> Result<Self> {
        Self::new(values.iter().map(|&v| prec.real(v)).collect(), var)
    }

    pub fn from_decimals<S: AsRef<str>>(
        values: &[S],
        var: impl Into<String>,
        prec: Precision,
    ) -> Result<Self> {
        let coeffs = values
            .iter()
            .map(|s| prec.parse(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeffs, var)
    }

    /// `c + 0 x + ... + 0 x^order`.
    pub fn constant(c: Float, order: usize, var: impl Into<String>) -> Self {
        let bits = c.prec();
        let mut coeffs = vec![Float::new(bits); order + 1];
        coeffs[0] = c;
        PowerSeries {
            coeffs,
            var: var.into(),
        }
    }

    /// The series `x` truncated at `order >= 1`.
    pub fn variable(order: usize, var: impl Into<String>, prec: Precision) -> Self {
        let mut coeffs = vec![prec.zero(); order.max(1) + 1];
        coeffs[1] = prec.one();
        PowerSeries {
            coeffs,
            var: var.into(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Float] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Float {
        &self.coeffs[k]
    }

    pub fn into_coeffs(self) -> Vec<Float> {
        self.coeffs
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn with_var(mut self, var: impl Into<String>) -> Self {
        self.var = var.into();
        self
    }

    /// Mantissa bits of the stored coefficients.
    pub fn bits(&self) -> u32 {
        self.coeffs[0].prec()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order()) + 1;
        PowerSeries {
            coeffs: self.coeffs[..n].to_vec(),
            var: self.var.clone(),
        }
    }

    /// Divides by `x^shift`; the dropped low coefficients must vanish.
    pub fn shift_down(&self, shift: usize) -> Result<Self> {
        if shift > self.order() {
            return Err(Error::usage("shift exceeds the series order"));
        }
        if let Some(k) = self.coeffs[..shift].iter().position(|c| !c.is_zero()) {
            return Err(Error::domain(format!(
                "coefficient {k} is nonzero, cannot divide by {}^{shift}",
                self.var
            )));
        }
        Self::new(self.coeffs[shift..].to_vec(), self.var.clone())
    }

    /// Horner evaluation of the truncated sum.
    pub fn eval(&self, x: &Float) -> Float {
        let mut acc = Float::with_val(self.bits().max(x.prec()), 0);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn scale(&self, factor: &Float) -> Self {
        PowerSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| Float::with_val(c.prec(), c * factor))
                .collect(),
            var: self.var.clone(),
        }
    }

    fn check_var(&self, other: &PowerSeries, op: &str) -> Result<()> {
        if self.var != other.var {
            return Err(Error::usage(format!(
                "{op}: variable mismatch ({:?} vs {:?})",
                self.var, other.var
            )));
        }
        Ok(())
    }

    /// Term-wise sum truncated at the smaller order.
    pub fn add(&self, other: &PowerSeries) -> Result<Self> {
        self.check_var(other, "add")?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| Float::with_val(a.prec(), a + b))
            .collect();
        Ok(PowerSeries {
            coeffs,
            var: self.var.clone(),
        })
    }

    /// Cauchy product truncated at `min(self.order, other.order)`.
    pub fn multiply(&self, other: &PowerSeries) -> Result<Self> {
        self.check_var(other, "multiply")?;
        let order = self.order().min(other.order());
        Ok(PowerSeries {
            coeffs: cauchy(&self.coeffs, &other.coeffs, order),
            var: self.var.clone(),
        })
    }

    /// `self(inner(x))`, truncated at `min(self.order, inner.order)`.
    ///
    /// The result carries the variable of `inner`.
    pub fn compose(&self, inner: &PowerSeries) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::domain(
                "compose: inner series must have a vanishing constant term",
            ));
        }
        let order = self.order().min(inner.order());
        let bits = self.bits();
        let inner_coeffs = &inner.coeffs[..=order];
        let mut acc = vec![Float::new(bits); order + 1];
        for c in self.coeffs[..=order].iter().rev() {
            acc = cauchy(&acc, inner_coeffs, order);
            acc[0] += c;
        }
        Ok(PowerSeries {
            coeffs: acc,
            var: inner.var.clone(),
        })
    }
}

impl PowerSeries {
    /// Term-wise derivative; the result has order `max(order - 1, 0)`.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return PowerSeries::constant(Float::new(self.bits()), 0, self.var.clone());
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, c)| Float::with_val(c.prec(), c * (i as u64 + 1)))
            .collect();
        PowerSeries {
            coeffs,
            var: self.var.clone(),
        }
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        if self.coeffs[0].is_zero() {
            return Err(Error::domain("reciprocal: constant term vanishes"));
        }
        let bits = self.bits();
        let inv0 = Float::with_val(bits, self.coeffs[0].recip_ref());
        let mut out: Vec<Float> = Vec::with_capacity(self.coeffs.len());
        out.push(inv0.clone());
        for n in 1..=self.order() {
            let mut acc = Float::new(bits);
            for i in 1..=n {
                acc += Float::with_val(bits, &self.coeffs[i] * &out[n - i]);
            }
            out.push(-(acc * &inv0));
        }
        Ok(PowerSeries {
            coeffs: out,
            var: self.var.clone(),
        })
    }

    /// Compositional inverse `r` with `self(r(x)) = x`; needs `c_0 = 0`, `c_1 != 0`.
    pub fn revert(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() || self.order() < 1 || self.coeffs[1].is_zero() {
            return Err(Error::domain(
                "revert: series must start as c_1 x with c_1 != 0",
            ));
        }
        let bits = self.bits();
        let order = self.order();
        let inv1 = Float::with_val(bits, self.coeffs[1].recip_ref());
        let mut r = PowerSeries::constant(Float::new(bits), order, self.var.clone());
        r.coeffs[1] = inv1.clone();
        // each pass fixes one more coefficient
        for _ in 1..order {
            let s_of_r = self.compose(&r)?;
            for k in 2..=order {
                let correction = Float::with_val(bits, &s_of_r.coeffs[k] * &inv1);
                r.coeffs[k] -= correction;
            }
        }
        Ok(r)
    }
}

/// Truncated Cauchy product of two coefficient slices.
pub(crate) fn cauchy(a: &[Float], b: &[Float], order: usize) -> Vec<Float> {
    let bits = a[0].prec().max(b[0].prec());
    let mut out = Vec::with_capacity(order + 1);
    let mut term = Float::new(bits);
    for n in 0..=order {
        let mut acc = Float::new(bits);
        let lo = n.saturating_sub(b.len() - 1);
        let hi = n.min(a.len() - 1);
        for i in lo..=hi {
            if a[i].is_zero() || b[n - i].is_zero() {
                continue;
            }
            term.assign(&a[i] * &b[n - i]);
            acc += &term;
        }
        out.push(acc);
    }
    out
}

/// Taylor coefficients of `(1 - x)^p` up to `order`.
pub fn binomial_series(p: &Float, order: usize, var: impl Into<String>) -> PowerSeries {
    let bits = p.prec();
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(Float::with_val(bits, 1));
    for k in 1..=order {
        let factor = Float::with_val(bits, (k - 1) as u64) - p;
        let next = Float::with_val(bits, &coeffs[k - 1] * &factor) / k as u64;
        coeffs.push(next);
    }
    PowerSeries {
        coeffs,
        var: var.into(),
    }
}

/// Estimates `A = 1/a` from `f_k ~ (-1)^k k^b a^k k!`.
///
/// Averages `-k f_{k-1} / f_k` over the last `tail` orders. The `k^b`
/// correction is not removed, so this is a first-order estimate.
pub fn ratio_growth_constant(s: &PowerSeries, tail: usize) -> Result<Float> {
    if tail < 4 {
        return Err(Error::usage("ratio_growth_constant needs tail >= 4"));
    }
    if s.order() < tail {
        return Err(Error::usage(format!(
            "series order {} is shorter than the tail {tail}",
            s.order()
        )));
    }
    let bits = s.bits();
    let mut sum = Float::new(bits);
    let first = s.order() + 1 - tail;
    for k in first..=s.order() {
        let (prev, cur) = (&s.coeffs[k - 1], &s.coeffs[k]);
        if cur.is_zero() || prev.is_zero() || cur.is_sign_negative() == prev.is_sign_negative() {
            return Err(Error::Diagnostic(format!(
                "coefficients are not sign-alternating at order {k}"
            )));
        }
        let ratio = Float::with_val(bits, prev * k as u64) / cur;
        sum -= ratio;
    }
    Ok(sum / tail as u64)
}
