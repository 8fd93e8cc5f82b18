//! Reference problems: the `d = 0` integral, the quartic anharmonic
//! oscillator and the three-dimensional `phi^4` renormalization-group series.
//!
//! Each generator comes with an independent numerical oracle (quadrature for
//! the integral, Hermite-basis diagonalization for the oscillator) so that
//! summed values can be checked against the function itself.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Assign, Float};

use crate::coupling::Coupling;
use crate::error::{Error, Result};
use crate::quad;
use crate::series::{PowerSeries, Precision};

/// `A = 1/a` in `f_k ~ (-1)^k k^b a^k k!` for dimensions 0 to 3 with the
/// `g/4!` normalization of the quartic coupling. The `d = 2, 3` values are
/// tabulated constants only; no generator exists for those series.
pub const LARGE_ORDER_A: [f64; 4] = [1.5, 8.0, 35.102_689_573_678_96, 113.383_507_815_277_14];

/// Borel-plane singularity parameter of the renormalized `phi^4_3` beta function.
pub const PHI4_3_SINGULARITY_A: &str = "0.147774232";

/// Coefficients `Z_k = (-1/24)^k (4k-1)!! / k!` of
/// `Z(g) = (2 pi)^{-1/2} int dx exp(-x^2/2 - g x^4/24)`.
pub fn d0_partition_coeffs(order: usize, prec: Precision) -> PowerSeries {
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(prec.one());
    for k in 1..=order {
        let kk = k as u64;
        let mut z = Float::with_val(prec.bits(), &coeffs[k - 1] * ((4 * kk - 1) * (4 * kk - 3)));
        z /= 24 * kk;
        z = -z;
        coeffs.push(z);
    }
    PowerSeries::new(coeffs, "g").expect("finite coefficients")
}

/// `lim_{g->inf} g^{1/4} Z(g) = (1/2) 24^{1/4} sqrt(pi) / Gamma(3/4)`.
pub fn d0_strong_coupling_amplitude(prec: Precision) -> Float {
    let bits = prec.bits();
    let root = prec.real(24).pow(prec.ratio(1, 4));
    let sqrt_pi = Float::with_val(bits, Constant::Pi).sqrt();
    let gamma = prec.ratio(3, 4).gamma();
    root * sqrt_pi / gamma / 2u32
}

/// Numeric value of `Z(g)` by double-exponential quadrature, to a relative
/// accuracy of `10^(10 - digits)`. At `g = inf` returns the amplitude of
/// `g^{-1/4}`.
pub fn d0_partition_value(g: &Coupling, prec: Precision) -> Result<Float> {
    g.check_non_negative()?;
    let g = match g {
        Coupling::Infinite => return Ok(d0_strong_coupling_amplitude(prec)),
        Coupling::Finite(g) if g.is_zero() => return Ok(prec.one()),
        Coupling::Finite(g) => g,
    };
    let work = prec.widened(10);
    let bits = work.bits();
    let quartic = Float::with_val(bits, g / 24u32);
    let integrand = |x: &Float| {
        let x2 = Float::with_val(bits, x.square_ref());
        let mut e = Float::with_val(bits, &x2 * &quartic);
        e *= &x2;
        e += Float::with_val(bits, &x2 / 2u32);
        (-e).exp()
    };
    let tol = prec.tolerance(10);
    let out = quad::exp_sinh(
        integrand,
        &work.zero(),
        &Float::with_val(bits, &tol / 100u32),
        2_000_000,
    )?;
    // 2 / sqrt(2 pi) times the half-line integral
    let norm = Float::with_val(bits, Constant::Pi) * 2u32;
    let value = out.value * 2u32 / norm.sqrt();
    Ok(prec.real(&value))
}

/// Ground-state energy coefficients `E_k` of
/// `H = p^2/2 + x^2/2 + (g/4!) x^4`, `E_0 = 1/2`.
///
/// Uses the polynomial ansatz `psi = exp(-x^2/2) sum_k g^k phi_k(x)` with
/// `phi_k = sum_j A_{k,j} x^{2j}`, `A_{k,0} = delta_{k0}`. Order by order,
/// `x phi_k' - phi_k''/2 + x^4 phi_{k-1}/24 = sum_{m=1}^k E_m phi_{k-m}`,
/// which fixes `A_{k,j}` from the top power down and gives `E_k = -A_{k,1}`.
pub fn anharmonic_ground_coeffs(order: usize, prec: Precision) -> PowerSeries {
    let work = prec.widened(order as u32 / 2 + 10);
    let bits = work.bits();
    let mut a: Vec<Vec<Float>> = vec![vec![work.one()]];
    let mut energy = vec![work.ratio(1, 2)];
    let mut rhs = Float::new(bits);
    let mut tmp = Float::new(bits);
    for k in 1..=order {
        let top = 2 * k;
        let mut row = vec![Float::new(bits); top + 2];
        for j in (1..=top).rev() {
            rhs.assign(0);
            if j < top {
                tmp.assign(&row[j + 1] * ((2 * j as u64 + 1) * (j as u64 + 1)));
                rhs += &tmp;
            }
            if j >= 2 && j - 2 < a[k - 1].len() {
                tmp.assign(&a[k - 1][j - 2] / 24u32);
                rhs -= &tmp;
            }
            for m in 1..k {
                if let Some(prev) = a[k - m].get(j) {
                    tmp.assign(&energy[m] * prev);
                    rhs += &tmp;
                }
            }
            row[j].assign(&rhs / (2 * j as u64));
        }
        energy.push(Float::with_val(bits, -&row[1]));
        row.truncate(top + 1);
        a.push(row);
    }
    let coeffs = energy.iter().map(|e| prec.real(e)).collect();
    PowerSeries::new(coeffs, "g").expect("finite coefficients")
}

/// Settings for the Hermite-basis oracle.
#[derive(Clone, Copy, Debug)]
pub struct DiagonalizationConfig {
    /// Relative change between successive basis sizes that counts as converged.
    pub rel_tol: f64,
    pub initial_basis: usize,
    pub max_basis: usize,
}

impl Default for DiagonalizationConfig {
    fn default() -> Self {
        DiagonalizationConfig {
            rel_tol: 1e-12,
            initial_basis: 24,
            max_basis: 4000,
        }
    }
}

/// Lowest eigenvalue of `p^2/2 + x^2/2 + (g/24) x^4`; at `g = inf` the
/// amplitude `lim g^{-1/3} E(g)`, i.e. the ground state of `p^2/2 + x^4/24`.
pub fn anharmonic_ground_value(g: &Coupling, prec: Precision) -> Result<Float> {
    anharmonic_ground_value_with(g, prec, DiagonalizationConfig::default())
}

pub fn anharmonic_ground_value_with(
    g: &Coupling,
    prec: Precision,
    cfg: DiagonalizationConfig,
) -> Result<Float> {
    g.check_non_negative()?;
    let (quadratic, quartic) = match g {
        Coupling::Infinite => (prec.zero(), prec.ratio(1, 24)),
        Coupling::Finite(g) if g.is_zero() => return Ok(prec.ratio(1, 2)),
        Coupling::Finite(g) => (prec.ratio(1, 2), Float::with_val(prec.bits(), g / 24u32)),
    };
    let omega = variational_frequency(quadratic.to_f64(), quartic.to_f64());
    let tol = Float::with_val(prec.bits(), cfg.rel_tol);
    let mut n = cfg.initial_basis.max(4);
    let mut previous = lowest_eigenvalue(&quadratic, &quartic, omega, n, prec)?;
    loop {
        let next_n = n + (n / 2).max(16);
        if next_n > cfg.max_basis {
            return Err(Error::Resource(format!(
                "oscillator eigenvalue not stable to {:e} within {} basis states",
                cfg.rel_tol, cfg.max_basis
            )));
        }
        let current = lowest_eigenvalue(&quadratic, &quartic, omega, next_n, prec)?;
        let change = Float::with_val(prec.bits(), &current - &previous).abs();
        if change <= Float::with_val(prec.bits(), current.abs_ref()) * &tol {
            return Ok(current);
        }
        previous = current;
        n = next_n;
    }
}

/// Minimizer of `<H>` over harmonic trial states of frequency `w`:
/// `w^3/4 - c2 w/2 - 3 c4/2 = 0`.
fn variational_frequency(c2: f64, c4: f64) -> f64 {
    let mut w: f64 = 1.0_f64.max((6.0 * c4).cbrt());
    for _ in 0..100 {
        let f = w.powi(3) / 4.0 - c2 * w / 2.0 - 1.5 * c4;
        let df = 0.75 * w * w - c2 / 2.0;
        let step = f / df;
        w -= step;
        if step.abs() < 1e-15 * w {
            break;
        }
    }
    w
}

/// Symmetric pentadiagonal matrix: `diag[i]`, `off1[i] = H[i][i+1]`,
/// `off2[i] = H[i][i+2]`.
struct Banded {
    diag: Vec<Float>,
    off1: Vec<Float>,
    off2: Vec<Float>,
}

/// Hamiltonian `w(n + 1/2) + (c2 - w^2/2) x^2 + c4 x^4` on the even states
/// `n = 0, 2, ..., 2(size-1)` of the oscillator basis with frequency `w`.
fn even_hamiltonian(
    quadratic: &Float,
    quartic: &Float,
    omega: f64,
    size: usize,
    prec: Precision,
) -> Banded {
    let bits = prec.bits();
    let w = prec.real(omega);
    // q(n, n) = 2n+1, q(n, n+2) = sqrt((n+1)(n+2)) for Q = (a + a^+)^2
    let qd = |n: usize| prec.real(2 * n as u64 + 1);
    let qo_exact = |n: usize| {
        let v = Float::with_val(bits, (n as u64 + 1) * (n as u64 + 2));
        v.sqrt()
    };
    let x2_scale = Float::with_val(bits, &w * 2u32).recip();
    let x4_scale = Float::with_val(bits, x2_scale.square_ref());
    let mut quad_coef = Float::with_val(bits, w.square_ref()) / 2u32;
    quad_coef = Float::with_val(bits, quadratic - &quad_coef);
    let c2 = quad_coef * &x2_scale;
    let c4 = Float::with_val(bits, quartic * &x4_scale);
    let mut diag = Vec::with_capacity(size);
    let mut off1 = Vec::with_capacity(size);
    let mut off2 = Vec::with_capacity(size);
    for i in 0..size {
        let n = 2 * i;
        let up = qo_exact(n);
        let down = if n >= 2 { qo_exact(n - 2) } else { prec.zero() };
        let q4_diag = Float::with_val(bits, qd(n).square_ref())
            + Float::with_val(bits, up.square_ref())
            + Float::with_val(bits, down.square_ref());
        let mut d = Float::with_val(bits, &w * (2 * n as u64 + 1)) / 2u32;
        d += Float::with_val(bits, &c2 * &qd(n));
        d += Float::with_val(bits, &c4 * &q4_diag);
        diag.push(d);
        // Q^2 (n, n+2) = q(n,n) q(n,n+2) + q(n,n+2) q(n+2,n+2)
        let q4_1 = Float::with_val(bits, qd(n) + qd(n + 2)) * &up;
        let mut o1 = Float::with_val(bits, &c2 * &up);
        o1 += Float::with_val(bits, &c4 * &q4_1);
        off1.push(o1);
        // Q^2 (n, n+4) = q(n,n+2) q(n+2,n+4)
        let q4_2 = Float::with_val(bits, &up * &qo_exact(n + 2));
        off2.push(Float::with_val(bits, &c4 * &q4_2));
    }
    Banded { diag, off1, off2 }
}

/// Number of negative pivots of `LDL^T` of `H - sigma`, i.e. the number of
/// eigenvalues below `sigma` (f64, only used to bracket).
fn count_below(h: &[(f64, f64, f64)], sigma: f64) -> usize {
    let n = h.len();
    // L has unit diagonal with subdiagonals l1[i] = L[i][i-1], l2[i] = L[i][i-2]
    let mut d = vec![0.0f64; n];
    let mut l1 = vec![0.0f64; n];
    let mut l2 = vec![0.0f64; n];
    let mut negatives = 0;
    for i in 0..n {
        if i >= 2 {
            l2[i] = h[i - 2].2 / d[i - 2];
        }
        if i >= 1 {
            let mut v = h[i - 1].1;
            if i >= 2 {
                v -= l2[i] * l1[i - 1] * d[i - 2];
            }
            l1[i] = v / d[i - 1];
        }
        let mut v = h[i].0 - sigma;
        if i >= 1 {
            v -= l1[i] * l1[i] * d[i - 1];
        }
        if i >= 2 {
            v -= l2[i] * l2[i] * d[i - 2];
        }
        if v == 0.0 {
            v = -1e-300;
        }
        d[i] = v;
        if v < 0.0 {
            negatives += 1;
        }
    }
    negatives
}

/// Banded Cholesky of `H - sigma`; `None` when not positive definite.
fn cholesky(h: &Banded, sigma: &Float, bits: u32) -> Option<(Vec<Float>, Vec<Float>, Vec<Float>)> {
    let n = h.diag.len();
    let mut l0 = vec![Float::new(bits); n];
    let mut l1 = vec![Float::new(bits); n];
    let mut l2 = vec![Float::new(bits); n];
    for i in 0..n {
        if i >= 2 {
            l2[i] = Float::with_val(bits, &h.off2[i - 2] / &l0[i - 2]);
        }
        if i >= 1 {
            let mut v = h.off1[i - 1].clone();
            if i >= 2 {
                v -= Float::with_val(bits, &l2[i] * &l1[i - 1]);
            }
            l1[i] = v / &l0[i - 1];
        }
        let mut v = Float::with_val(bits, &h.diag[i] - sigma);
        v -= Float::with_val(bits, l1[i].square_ref());
        v -= Float::with_val(bits, l2[i].square_ref());
        if v <= 0 {
            return None;
        }
        l0[i] = v.sqrt();
    }
    Some((l0, l1, l2))
}

fn cholesky_solve(l: &(Vec<Float>, Vec<Float>, Vec<Float>), b: &[Float], bits: u32) -> Vec<Float> {
    let (l0, l1, l2) = l;
    let n = b.len();
    let mut y = vec![Float::new(bits); n];
    for i in 0..n {
        let mut v = b[i].clone();
        if i >= 1 {
            v -= Float::with_val(bits, &l1[i] * &y[i - 1]);
        }
        if i >= 2 {
            v -= Float::with_val(bits, &l2[i] * &y[i - 2]);
        }
        y[i] = v / &l0[i];
    }
    let mut x = vec![Float::new(bits); n];
    for i in (0..n).rev() {
        let mut v = y[i].clone();
        if i + 1 < n {
            v -= Float::with_val(bits, &l1[i + 1] * &x[i + 1]);
        }
        if i + 2 < n {
            v -= Float::with_val(bits, &l2[i + 2] * &x[i + 2]);
        }
        x[i] = v / &l0[i];
    }
    x
}

fn rayleigh(h: &Banded, x: &[Float], bits: u32) -> Float {
    let n = x.len();
    let mut num = Float::new(bits);
    let mut den = Float::new(bits);
    for i in 0..n {
        let mut hx = Float::with_val(bits, &h.diag[i] * &x[i]);
        if i >= 1 {
            hx += Float::with_val(bits, &h.off1[i - 1] * &x[i - 1]);
        }
        if i + 1 < n {
            hx += Float::with_val(bits, &h.off1[i] * &x[i + 1]);
        }
        if i >= 2 {
            hx += Float::with_val(bits, &h.off2[i - 2] * &x[i - 2]);
        }
        if i + 2 < n {
            hx += Float::with_val(bits, &h.off2[i] * &x[i + 2]);
        }
        num += hx * &x[i];
        den += Float::with_val(bits, x[i].square_ref());
    }
    num / den
}

/// Lowest eigenvalue in a basis of `size` even states: f64 inertia bisection
/// for a shift just below the eigenvalue, then shifted inverse iteration at
/// working precision.
fn lowest_eigenvalue(
    quadratic: &Float,
    quartic: &Float,
    omega: f64,
    size: usize,
    prec: Precision,
) -> Result<Float> {
    let work = prec.widened(8);
    let bits = work.bits();
    let h = even_hamiltonian(quadratic, quartic, omega, size, work);
    let hf: Vec<(f64, f64, f64)> = (0..size)
        .map(|i| (h.diag[i].to_f64(), h.off1[i].to_f64(), h.off2[i].to_f64()))
        .collect();
    let mut lo = f64::INFINITY;
    let mut norm: f64 = 0.0;
    for i in 0..size {
        let mut radius = hf[i].1.abs() + hf[i].2.abs();
        if i >= 1 {
            radius += hf[i - 1].1.abs();
        }
        if i >= 2 {
            radius += hf[i - 2].2.abs();
        }
        lo = lo.min(hf[i].0 - radius);
        norm = norm.max(hf[i].0.abs() + radius);
    }
    let mut hi = hf[0].0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(&hf, mid) == 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut margin = (1e3 * f64::EPSILON * norm).max(1e-8 * hi.abs().max(1.0));
    let chol = loop {
        let sigma = work.real(lo - margin);
        if let Some(c) = cholesky(&h, &sigma, bits) {
            break c;
        }
        margin *= 10.0;
        if margin > norm {
            return Err(Error::Solver(
                "no positive-definite shift for inverse iteration".into(),
            ));
        }
    };
    let mut x: Vec<Float> = (0..size)
        .map(|i| work.real(if i == 0 { 1.0 } else { 0.0 }))
        .collect();
    let mut lambda = rayleigh(&h, &x, bits);
    let tol = work.tolerance(4);
    for _ in 0..400 {
        let y = cholesky_solve(&chol, &x, bits);
        let mut norm2 = Float::new(bits);
        for v in &y {
            norm2 += Float::with_val(bits, v.square_ref());
        }
        let inv = norm2.sqrt().recip();
        x = y.into_iter().map(|v| v * &inv).collect();
        let next = rayleigh(&h, &x, bits);
        let change = Float::with_val(bits, &next - &lambda).abs();
        lambda = next;
        if change <= Float::with_val(bits, lambda.abs_ref()) * &tol {
            return Ok(prec.real(&lambda));
        }
    }
    Err(Error::Solver("inverse iteration did not converge".into()))
}

/// The seven-loop renormalized `phi^4_3` series in `g~`.
#[derive(Clone, Debug)]
pub struct RgSeriesSet {
    pub beta: PowerSeries,
    pub gamma_inv: PowerSeries,
    pub eta: PowerSeries,
    pub large_order_a: Float,
}

const BETA: [&str; 8] = [
    "0",
    "-1",
    "1",
    "-308/729",
    "0.3510695977",
    "-0.3765268283",
    "0.49554751",
    "-0.749689",
];
const GAMMA_INV: [&str; 8] = [
    "1",
    "-1/6",
    "1/27",
    "-0.0230696212",
    "0.0198868202",
    "-0.0224595215",
    "0.0303679053",
    "-0.046877951",
];
const ETA: [&str; 8] = [
    "0",
    "0",
    "0.0109739368",
    "0.0009142222",
    "0.0017962228",
    "-0.0006537035",
    "0.0012749100",
    "-0.001697694",
];

/// Published coefficients, converted to working precision at load time.
pub fn rg_series(prec: Precision) -> RgSeriesSet {
    let load =
        |c: &[&str]| PowerSeries::from_decimals(c, "g~", prec).expect("static coefficients parse");
    RgSeriesSet {
        beta: load(&BETA),
        gamma_inv: load(&GAMMA_INV),
        eta: load(&ETA),
        large_order_a: prec
            .parse(PHI4_3_SINGULARITY_A)
            .expect("static constant parses"),
    }
}

impl RgSeriesSet {
    /// `nu^{-1} = (2 - eta) gamma^{-1}`, the series implied by `gamma = nu (2 - eta)`.
    pub fn nu_inv(&self) -> PowerSeries {
        let two_minus_eta = PowerSeries::constant(
            Float::with_val(self.eta.bits(), 2),
            self.eta.order(),
            self.eta.var(),
        )
        .add(&self.eta.scale(&Float::with_val(self.eta.bits(), -1)))
        .expect("same variable");
        two_minus_eta
            .multiply(&self.gamma_inv)
            .expect("same variable")
    }

    /// `eta / g~^2`.
    pub fn eta_reduced(&self) -> PowerSeries {
        self.eta.shift_down(2).expect("eta starts at g~^2")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::ratio_growth_constant;

    fn prec() -> Precision {
        Precision::default()
    }

    #[test]
    fn d0_low_orders() {
        let z = d0_partition_coeffs(2, prec());
        assert_eq!(d0_partition_coeffs(0, prec()).coeffs(), &[prec().one()]);
        assert_eq!(z.coeff(1), &prec().ratio(-1, 8));
        assert_eq!(z.coeff(2), &prec().ratio(35, 384));
    }

    #[test]
    fn d0_growth_constant() {
        let a = ratio_growth_constant(&d0_partition_coeffs(60, prec()), 10)
            .unwrap()
            .to_f64();
        assert!((a / 1.5 - 1.0).abs() < 0.05, "{a}");
    }

    #[test]
    fn d0_value_edge_cases() {
        assert_eq!(
            d0_partition_value(&Coupling::Finite(prec().zero()), prec()).unwrap(),
            1
        );
        let amp = d0_partition_value(&Coupling::Infinite, prec())
            .unwrap()
            .to_f64();
        assert!((amp - 1.600_714_782_452_612).abs() < 1e-14, "{amp}");
        assert!(matches!(
            d0_partition_value(&Coupling::Finite(prec().real(-1)), prec()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn oscillator_low_orders() {
        let e = anharmonic_ground_coeffs(3, prec());
        assert_eq!(
            anharmonic_ground_coeffs(0, prec()).coeffs(),
            &[prec().ratio(1, 2)]
        );
        assert!((e.coeff(1).to_f64() - 1.0 / 32.0).abs() < 1e-40);
        // second order: -(21/8)/576 from the standard x^4 Rayleigh-Schrodinger sum
        assert!((e.coeff(2).to_f64() + 21.0 / 8.0 / 576.0).abs() < 1e-18);
    }

    #[test]
    fn oscillator_growth_constant() {
        let a = ratio_growth_constant(&anharmonic_ground_coeffs(60, prec()), 10)
            .unwrap()
            .to_f64();
        assert!((a / 8.0 - 1.0).abs() < 0.05, "{a}");
    }

    #[test]
    fn oscillator_value_edge_cases() {
        let v = anharmonic_ground_value(&Coupling::Finite(prec().zero()), prec()).unwrap();
        assert_eq!(v, prec().ratio(1, 2));
        assert!(anharmonic_ground_value(&Coupling::Finite(prec().real(-0.5)), prec()).is_err());
    }

    #[test]
    fn tiny_basis_cap_is_a_resource_error() {
        let cfg = DiagonalizationConfig {
            rel_tol: 1e-40,
            initial_basis: 8,
            max_basis: 40,
        };
        let res = anharmonic_ground_value_with(&Coupling::Infinite, prec(), cfg);
        assert!(matches!(res, Err(Error::Resource(_))));
    }

    #[test]
    fn rg_coefficients() {
        let rg = rg_series(prec());
        assert_eq!(rg.beta.order(), 7);
        assert_eq!(rg.gamma_inv.order(), 7);
        assert_eq!(rg.eta.order(), 7);
        assert_eq!(rg.beta.coeff(3), &(prec().real(-308) / 729));
        assert_eq!(rg.gamma_inv.coeff(1), &prec().ratio(-1, 6));
        assert!(rg.eta.coeff(0).is_zero() && rg.eta.coeff(1).is_zero());
        assert_eq!(rg.eta_reduced().order(), 5);
        let nu = rg.nu_inv();
        assert_eq!(nu.coeff(0).to_f64(), 2.0);
        assert!((nu.coeff(1).to_f64() + 1.0 / 3.0).abs() < 1e-30);
    }
}
