//! Order-dependent mapping: ρ selection, approximants, fixed points and
//! convergence fits.
//!
//! ρ may be complex. Approximants built on a complex ρ are evaluated in
//! complex arithmetic and reported by their real part.

use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::complex::{eval_real_poly, Complex};
use crate::coupling::Coupling;
use crate::error::{Error, Result};
use crate::mapping::{lambda_of_g, MappingFamily, MappingSpec, RhoPolynomialTable};
use crate::poly::{complex_coeff_roots, complex_roots, polynomial_real_roots, Polynomial};
use crate::series::Precision;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionMode {
    /// zeros of `P_k`
    Root,
    /// zeros of `P_k'`
    Stationary,
    /// zeros of `P_k` when there are any, stationary points otherwise
    Mixed,
    /// stationary points when there are any, zeros of `P_k` otherwise
    StationaryFirst,
}

/// Which complex candidates take part.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ComplexPolicy {
    RealOnly,
    /// Complex candidates with `|arg ρ| <= max_arg_deg`, replaced by `Re ρ`.
    Project {
        max_arg_deg: f64,
    },
    /// Complex candidates kept as they are (one per conjugate pair, `Re ρ >= 0`).
    Full,
}

/// How one candidate is picked from those that survive the filters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ranking {
    /// Largest `Re ρ` first; the first one passing the smallness test wins,
    /// the largest is taken (and flagged) when none does.
    Largest,
    /// Among candidates with `|ρ|` at least half the largest `|ρ|`, real ones
    /// before complex ones, the smallest smallness ratio wins.
    Smallest,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RhoSelectionCriterion {
    pub mode: SelectionMode,
    /// τ in the smallness test against the neighbour scale.
    pub smallness_factor: Float,
    pub complex: ComplexPolicy,
    pub ranking: Ranking,
}

impl RhoSelectionCriterion {
    /// Real candidates, largest first. `τ = +inf` disables the smallness
    /// test, so the largest candidate wins.
    pub fn new(mode: SelectionMode, smallness_factor: Float) -> Result<Self> {
        if smallness_factor.is_nan() || smallness_factor <= 0 {
            return Err(Error::usage("smallness factor must be positive"));
        }
        Ok(RhoSelectionCriterion {
            mode,
            smallness_factor,
            complex: ComplexPolicy::RealOnly,
            ranking: Ranking::Largest,
        })
    }

    /// τ = 1/2.
    pub fn with_mode(mode: SelectionMode, prec: Precision) -> Self {
        RhoSelectionCriterion {
            mode,
            smallness_factor: prec.ratio(1, 2),
            complex: ComplexPolicy::RealOnly,
            ranking: Ranking::Largest,
        }
    }

    pub fn with_complex(mut self, policy: ComplexPolicy) -> Self {
        self.complex = policy;
        self
    }

    pub fn with_ranking(mut self, ranking: Ranking) -> Self {
        self.ranking = ranking;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateKind {
    Root,
    Stationary,
}

#[derive(Clone, Debug)]
pub struct Candidate {
    pub rho: Complex,
    /// `|P_k(ρ)|`
    pub value_abs: Float,
    /// `|P_k'(ρ)|`
    pub slope_abs: Float,
    /// Tested quantity over the neighbour scale: `|P_k'| ρ / (k |P_{k-1}|)`
    /// for roots, `|P_k| / |P_{k-1}|` for stationary points.
    pub ratio: Float,
    pub kind: CandidateKind,
}

#[derive(Clone, Debug)]
pub struct RhoSelection {
    pub k: usize,
    pub rho: Complex,
    pub kind: CandidateKind,
    pub candidates: Vec<Candidate>,
    /// Set when the chosen candidate failed the smallness test.
    pub diagnostic: Option<String>,
}

impl RhoSelection {
    /// `Re ρ_k`
    pub fn rho_k(&self) -> &Float {
        &self.rho.re
    }

    pub fn is_complex(&self) -> bool {
        !self.rho.is_real()
    }
}

#[derive(Clone, Debug)]
pub struct OdmReport {
    pub selection: RhoSelection,
    /// Real part of the approximant.
    pub value: Float,
    /// Imaginary part, zero unless ρ is complex.
    pub value_im: Float,
    /// `|P_{k+1}(ρ_k) λ^{k+1}|`, absent when the table ends at `k`.
    pub error_estimate: Option<Float>,
    pub lambda: Complex,
}

impl OdmReport {
    pub fn k(&self) -> usize {
        self.selection.k
    }

    pub fn rho_k(&self) -> &Float {
        self.selection.rho_k()
    }

    pub fn value_complex(&self) -> Complex {
        Complex::new(self.value.clone(), self.value_im.clone())
    }
}

fn check_order(table: &RhoPolynomialTable, k: usize) -> Result<()> {
    if k < 1 || k > table.source_order() {
        return Err(Error::usage(format!(
            "order {k} outside 1..={}",
            table.source_order()
        )));
    }
    Ok(())
}

fn descending(mut v: Vec<Complex>) -> Vec<Complex> {
    v.sort_by(|a, b| {
        b.re.partial_cmp(&a.re)
            .expect("finite roots")
            .then(a.im.partial_cmp(&b.im).expect("finite roots"))
    });
    v
}

/// Candidate points of `poly` under `policy`, largest real part first.
fn candidate_points(
    poly: &Polynomial,
    policy: ComplexPolicy,
    prec: Precision,
) -> Result<Vec<Complex>> {
    if poly.degree() == 0 {
        return Ok(Vec::new());
    }
    let bits = prec.bits();
    let tiny = prec.tolerance(prec.digits() as i32 / 2);
    let points = match policy {
        ComplexPolicy::RealOnly => polynomial_real_roots(poly, prec)?
            .into_iter()
            .filter(|r| *r > tiny)
            .map(|r| Complex::from_real(&r))
            .collect(),
        ComplexPolicy::Project { max_arg_deg } => {
            let slope = max_arg_deg.to_radians().tan();
            let mut re: Vec<Float> = complex_roots(poly, prec)?
                .into_iter()
                .filter(|z| z.re > tiny && !z.im.is_sign_negative())
                .filter(|z| {
                    Float::with_val(bits, z.im.abs_ref()) <= Float::with_val(bits, &z.re * slope)
                })
                .map(|z| z.re)
                .collect();
            re.sort_by(|a, b| b.partial_cmp(a).expect("finite roots"));
            re.dedup_by(|a, b| {
                let gap = Float::with_val(bits, &*a - &*b).abs();
                gap <= Float::with_val(bits, &*b * &tiny)
            });
            re.iter().map(Complex::from_real).collect()
        }
        ComplexPolicy::Full => {
            let mut out: Vec<Complex> = Vec::new();
            for mut z in complex_roots(poly, prec)? {
                let modulus = z.abs();
                if modulus <= tiny {
                    continue;
                }
                let cut = Float::with_val(bits, &modulus * &tiny);
                if Float::with_val(bits, z.im.abs_ref()) <= cut {
                    z.im = Float::new(bits);
                }
                if Float::with_val(bits, z.re.abs_ref()) <= cut {
                    z.re = Float::new(bits);
                }
                if z.re.is_sign_negative() && !z.re.is_zero()
                    || z.im.is_sign_negative() && !z.im.is_zero()
                {
                    continue;
                }
                let duplicate = out.iter().any(|w| {
                    Float::with_val(bits, w.sub(&z).abs())
                        <= Float::with_val(bits, &modulus * &tiny)
                });
                if !duplicate {
                    out.push(z);
                }
            }
            out
        }
    };
    Ok(descending(points))
}

/// Picks `ρ_k` for the table at order `k`.
pub fn select_rho(
    table: &RhoPolynomialTable,
    k: usize,
    crit: &RhoSelectionCriterion,
    prec: Precision,
) -> Result<RhoSelection> {
    check_order(table, k)?;
    let bits = prec.bits();
    let pk = &table.polys()[k];
    let dpk = pk.derivative();
    let prev = &table.polys()[k - 1];

    if pk.coeffs().iter().all(Float::is_zero) {
        // any ρ cancels the last term
        let rho = Complex::from_real(&prec.one());
        return Ok(RhoSelection {
            k,
            rho: rho.clone(),
            kind: CandidateKind::Root,
            candidates: vec![Candidate {
                rho,
                value_abs: prec.zero(),
                slope_abs: prec.zero(),
                ratio: prec.zero(),
                kind: CandidateKind::Root,
            }],
            diagnostic: Some(format!("P_{k} vanishes identically; rho set to 1")),
        });
    }

    let candidate = |rho: Complex, kind| {
        let value_abs = eval_real_poly(pk.coeffs(), &rho).abs();
        let slope_abs = eval_real_poly(dpk.coeffs(), &rho).abs();
        let neighbour = eval_real_poly(prev.coeffs(), &rho).abs();
        let mut ratio = match kind {
            CandidateKind::Root => {
                Float::with_val(bits, &slope_abs * rho.abs()) / (neighbour * k as u32)
            }
            CandidateKind::Stationary => Float::with_val(bits, &value_abs / &neighbour),
        };
        if ratio.is_nan() {
            ratio = Float::with_val(bits, f64::INFINITY);
        }
        Candidate {
            rho,
            value_abs,
            slope_abs,
            ratio,
            kind,
        }
    };
    let gather = |kind| -> Result<Vec<Candidate>> {
        let poly = match kind {
            CandidateKind::Root => pk,
            CandidateKind::Stationary => &dpk,
        };
        Ok(candidate_points(poly, crit.complex, prec)?
            .into_iter()
            .map(|r| candidate(r, kind))
            .collect())
    };
    let order = match crit.mode {
        SelectionMode::Root => vec![CandidateKind::Root],
        SelectionMode::Stationary => vec![CandidateKind::Stationary],
        SelectionMode::Mixed => vec![CandidateKind::Root, CandidateKind::Stationary],
        SelectionMode::StationaryFirst => vec![CandidateKind::Stationary, CandidateKind::Root],
    };
    for kind in order {
        let cands = gather(kind)?;
        if let Some(sel) = choose(k, cands, crit) {
            return Ok(sel);
        }
    }
    Err(Error::Selection {
        order: k,
        reason: "no admissible root or stationary point".into(),
    })
}

fn choose(
    k: usize,
    candidates: Vec<Candidate>,
    crit: &RhoSelectionCriterion,
) -> Option<RhoSelection> {
    if candidates.is_empty() {
        return None;
    }
    let passes = |c: &Candidate| c.ratio <= crit.smallness_factor;
    let index = match crit.ranking {
        Ranking::Largest => candidates.iter().position(passes).unwrap_or(0),
        Ranking::Smallest => {
            let largest = candidates
                .iter()
                .map(|c| c.rho.abs())
                .max_by(|a, b| a.partial_cmp(b).expect("finite"))
                .expect("non-empty");
            let main: Vec<usize> = (0..candidates.len())
                .filter(|&i| {
                    Float::with_val(largest.prec(), candidates[i].rho.abs() * 2u32) >= largest
                })
                .collect();
            let real: Vec<usize> = main
                .iter()
                .copied()
                .filter(|&i| candidates[i].rho.is_real())
                .collect();
            let pool = if real.is_empty() { main } else { real };
            pool.into_iter()
                .min_by(|&a, &b| {
                    candidates[a]
                        .ratio
                        .partial_cmp(&candidates[b].ratio)
                        .expect("not NaN")
                })
                .expect("largest candidate is in the pool")
        }
    };
    let picked = &candidates[index];
    let diagnostic = (!passes(picked)).then(|| {
        format!(
            "order {k}: chosen {:?} at rho = {:.6e}{:+.3e}i fails the smallness test (ratio {:.3e})",
            picked.kind,
            picked.rho.re.to_f64(),
            picked.rho.im.to_f64(),
            picked.ratio.to_f64()
        )
    });
    Some(RhoSelection {
        k,
        rho: picked.rho.clone(),
        kind: picked.kind,
        diagnostic,
        candidates,
    })
}

/// ODM approximant of order `k` at the coupling `g`.
pub fn odm_value(
    table: &RhoPolynomialTable,
    k: usize,
    crit: &RhoSelectionCriterion,
    g: &Coupling,
    prec: Precision,
) -> Result<OdmReport> {
    let selection = select_rho(table, k, crit, prec)?;
    value_with_rho(table, selection, g, prec)
}

/// λ(g) for complex ρ.
fn complex_lambda(
    g: &Coupling,
    rho: &Complex,
    mapping: &MappingSpec,
    prec: Precision,
) -> Result<Complex> {
    let bits = prec.bits();
    let g = match g {
        Coupling::Infinite => return Ok(Complex::from_real(&prec.one())),
        Coupling::Finite(g) if g.is_zero() => return Ok(Complex::zero(bits)),
        Coupling::Finite(g) => g,
    };
    let one = prec.one();
    let alpha = mapping.alpha();
    match mapping.family() {
        MappingFamily::ShiftedPower => {
            // 1 - (1 + g/ρ)^(-1/α)
            let exponent = -Float::with_val(bits, alpha.recip_ref());
            let base = rho.recip().scale(g).add_real(&one);
            Ok(base.powf(&exponent).rsub_real(&one))
        }
        MappingFamily::PowerCut => {
            // Newton on ρλ - g(1-λ)^α, from the real solution at |ρ|
            let start = lambda_of_g(&Coupling::Finite(g.clone()), &rho.abs(), mapping, prec)?;
            let mut lam = Complex::from_real(&start);
            let alpha_m1 = Float::with_val(bits, alpha - 1u32);
            let tol = prec.tolerance(6);
            for _ in 0..200 {
                let u = lam.rsub_real(&one);
                let f = rho.mul(&lam).sub(&u.powf(alpha).scale(g));
                let df = rho.add(&u.powf(&alpha_m1).scale(&Float::with_val(bits, g * alpha)));
                let step = f.div(&df);
                lam = lam.sub(&step);
                if step.abs() <= tol {
                    return Ok(lam);
                }
            }
            Err(Error::Solver("complex lambda(g) did not converge".into()))
        }
    }
}

/// Evaluates the order-`k` approximant with an already chosen ρ.
pub fn value_with_rho(
    table: &RhoPolynomialTable,
    selection: RhoSelection,
    g: &Coupling,
    prec: Precision,
) -> Result<OdmReport> {
    let bits = prec.bits();
    let mapping = table.mapping();
    let k = selection.k;
    if g.is_infinite() && mapping.family() != MappingFamily::PowerCut {
        return Err(Error::usage(
            "the strong-coupling limit is only available for the power-cut mapping",
        ));
    }
    if !selection.is_complex() {
        let rho = selection.rho.re.clone();
        let lambda = lambda_of_g(g, &rho, mapping, prec)?;
        let sum = table.partial_sum(k, &rho, &lambda);
        let value = if g.is_infinite() {
            let exponent = Float::with_val(bits, mapping.prefactor_p() / mapping.alpha());
            Float::with_val(bits, (&rho).pow(&exponent)) * sum
        } else {
            let one_minus = Float::with_val(bits, 1 - &lambda);
            one_minus.pow(mapping.prefactor_p()) * sum
        };
        let error_estimate = table.poly(k + 1).map(|next| {
            let lam_pow = Float::with_val(bits, (&lambda).pow((k + 1) as u32));
            Float::with_val(bits, next.eval(&rho) * lam_pow).abs()
        });
        return Ok(OdmReport {
            selection,
            value,
            value_im: prec.zero(),
            error_estimate,
            lambda: Complex::from_real(&lambda),
        });
    }

    let rho = selection.rho.clone();
    let lambda = complex_lambda(g, &rho, mapping, prec)?;
    let mut sum = Complex::zero(bits);
    let mut lam_pow = Complex::from_real(&prec.one());
    for poly in &table.polys()[..=k] {
        sum = sum.add(&eval_real_poly(poly.coeffs(), &rho).mul(&lam_pow));
        lam_pow = lam_pow.mul(&lambda);
    }
    let value = if g.is_infinite() {
        let exponent = Float::with_val(bits, mapping.prefactor_p() / mapping.alpha());
        rho.powf(&exponent).mul(&sum)
    } else {
        lambda
            .rsub_real(&prec.one())
            .powf(mapping.prefactor_p())
            .mul(&sum)
    };
    let error_estimate = table
        .poly(k + 1)
        .map(|next| eval_real_poly(next.coeffs(), &rho).mul(&lam_pow).abs());
    Ok(OdmReport {
        selection,
        value: value.re,
        value_im: value.im,
        error_estimate,
        lambda,
    })
}

#[derive(Clone, Debug)]
pub struct FixedPoint {
    pub k: usize,
    /// `Re g̃*`
    pub g_star: Float,
    /// `Re ω`
    pub omega: Float,
    pub lambda_star: Complex,
    /// ρ or λ* is complex; only real parts are reported.
    pub complex: bool,
    pub selection: RhoSelection,
}

/// Zero of the summed β-function and the slope there.
///
/// λ* is the smallest real zero in (0,1) of the truncated `β_λ/λ`; without
/// one, the complex zero with `Re λ* ∈ (0,1)` closest to the real axis.
/// ω is `dβ̃/dg̃ = (dβ̃/dλ)/(dg̃/dλ)`, which at a zero of `β_λ` reduces to
/// `β_λ'(λ*)` because the covariant prefactor is exactly `1/(dg̃/dλ)`.
pub fn fixed_point(
    table: &RhoPolynomialTable,
    k: usize,
    crit: &RhoSelectionCriterion,
    prec: Precision,
) -> Result<FixedPoint> {
    if !table.mapping().is_beta_covariant() {
        return Err(Error::usage("fixed_point needs a beta-covariant table"));
    }
    let selection = select_rho(table, k, crit, prec)?;
    fixed_point_with_rho(table, selection, prec)
}

/// [`fixed_point`] with an already chosen ρ.
pub fn fixed_point_with_rho(
    table: &RhoPolynomialTable,
    selection: RhoSelection,
    prec: Precision,
) -> Result<FixedPoint> {
    let bits = prec.bits();
    let k = selection.k;
    let rho = selection.rho.clone();
    // β_λ / λ truncated at order k
    let reduced: Vec<Complex> = (1..=k)
        .map(|l| eval_real_poly(table.polys()[l].coeffs(), &rho))
        .collect();
    if reduced
        .iter()
        .skip(1)
        .all(|c| c.re.is_zero() && c.im.is_zero())
    {
        return Err(Error::FixedPoint { order: k });
    }
    let roots = complex_coeff_roots(&reduced, prec)?;
    let real_tol = prec.tolerance(prec.digits() as i32 / 2);
    let mut real: Vec<Complex> = Vec::new();
    let mut complex: Vec<Complex> = Vec::new();
    for mut z in roots {
        if !(z.re > 0 && z.re < 1) {
            continue;
        }
        if Float::with_val(bits, z.im.abs_ref()) <= real_tol {
            z.im = Float::new(bits);
            real.push(z);
        } else {
            complex.push(z);
        }
    }
    let lambda_star = match real
        .into_iter()
        .min_by(|a, b| a.re.partial_cmp(&b.re).expect("finite"))
    {
        Some(l) => l,
        None => complex
            .into_iter()
            .min_by(|a, b| {
                let (ia, ib) = (
                    Float::with_val(bits, a.im.abs_ref()),
                    Float::with_val(bits, b.im.abs_ref()),
                );
                ia.partial_cmp(&ib)
                    .expect("finite")
                    .then(a.re.partial_cmp(&b.re).expect("finite"))
                    .then(a.im.partial_cmp(&b.im).expect("finite"))
            })
            .ok_or(Error::FixedPoint { order: k })?,
    };
    let mapping = table.mapping();
    let one = prec.one();
    let neg_alpha = -mapping.alpha().clone();
    let u = lambda_star.rsub_real(&one).powf(&neg_alpha);
    let zeta = match mapping.family() {
        MappingFamily::PowerCut => lambda_star.mul(&u),
        MappingFamily::ShiftedPower => u.add_real(&Float::with_val(bits, -1)),
    };
    let g_star = rho.mul(&zeta);
    let mut omega = Complex::zero(bits);
    let mut lam_pow = Complex::from_real(&one);
    for (l, c) in reduced.iter().enumerate() {
        omega = omega.add(&c.mul(&lam_pow).scale(&Float::with_val(bits, l + 1)));
        lam_pow = lam_pow.mul(&lambda_star);
    }
    let complex = selection.is_complex() || !lambda_star.is_real();
    Ok(FixedPoint {
        k,
        g_star: g_star.re,
        omega: omega.re,
        lambda_star,
        complex,
        selection,
    })
}

/// Series tables for the critical exponents, all built with one mapping.
pub struct ExponentTables<'a> {
    pub gamma_inv: &'a RhoPolynomialTable,
    /// Independently summed `ν⁻¹`, when available.
    pub nu_inv: Option<&'a RhoPolynomialTable>,
    /// `η/g̃²`, summed two orders lower than the others.
    pub eta_reduced: &'a RhoPolynomialTable,
}

#[derive(Clone, Debug)]
pub struct Exponents {
    pub k: usize,
    pub gamma: Float,
    /// `1/ν⁻¹` from the independent series.
    pub nu: Option<Float>,
    /// `γ/(2-η)`
    pub nu_scaling: Float,
    pub eta: Float,
    /// The `η/g̃²` table had no admissible ρ and borrowed the γ⁻¹ one.
    pub eta_borrowed_rho: bool,
    pub diagnostics: Vec<String>,
}

fn real_part_of_inverse(report: &OdmReport) -> Float {
    report.value_complex().recip().re
}

/// γ, ν and η at `g_star`, each summed at order `k` (η/g̃² at `k-2`).
///
/// When the η table offers no admissible ρ the γ⁻¹ ρ is reused for it.
pub fn exponents_at(
    g_star: &Float,
    tables: &ExponentTables<'_>,
    k: usize,
    crit: &RhoSelectionCriterion,
    prec: Precision,
) -> Result<Exponents> {
    if *g_star <= 0 {
        return Err(Error::domain("the fixed point must be positive"));
    }
    if k < 3 {
        return Err(Error::usage("exponents need k >= 3 (eta is summed at k-2)"));
    }
    let bits = prec.bits();
    let g = Coupling::Finite(g_star.clone());
    let mut diagnostics = Vec::new();
    let gamma_report = odm_value(tables.gamma_inv, k, crit, &g, prec)?;
    diagnostics.extend(gamma_report.selection.diagnostic.clone());
    let gamma = real_part_of_inverse(&gamma_report);

    let nu = match tables.nu_inv {
        Some(t) => {
            let r = odm_value(t, k, crit, &g, prec)?;
            diagnostics.extend(r.selection.diagnostic.clone());
            Some(real_part_of_inverse(&r))
        }
        None => None,
    };

    let (eta_report, borrowed) = match odm_value(tables.eta_reduced, k - 2, crit, &g, prec) {
        Ok(r) => (r, false),
        Err(Error::Selection { .. }) => {
            let mut sel = gamma_report.selection.clone();
            sel.k = k - 2;
            diagnostics.push(format!(
                "order {}: eta/g^2 has no admissible rho; reused the gamma^-1 rho",
                k - 2
            ));
            (value_with_rho(tables.eta_reduced, sel, &g, prec)?, true)
        }
        Err(e) => return Err(e),
    };
    diagnostics.extend(eta_report.selection.diagnostic.clone());
    let g2 = Float::with_val(bits, g_star.square_ref());
    let eta = Float::with_val(bits, &eta_report.value * &g2);
    let nu_scaling = Float::with_val(bits, &gamma / Float::with_val(bits, 2 - &eta));
    Ok(Exponents {
        k,
        gamma,
        nu,
        nu_scaling,
        eta,
        eta_borrowed_rho: borrowed,
        diagnostics,
    })
}

/// Least-squares line `y = intercept + slope * x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
}

pub const MIN_FIT_POINTS: usize = 6;

pub fn linear_fit(points: &[(f64, f64)]) -> Result<LinearFit> {
    let n = points.len();
    if n < 2 {
        return Err(Error::Fit(format!("{n} points are not enough for a line")));
    }
    let nf = n as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    Ok(LinearFit {
        slope,
        intercept: my - slope * mx,
        points: n,
    })
}

/// Fits over all orders and over the even and odd subsequences.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParityFits {
    pub all: LinearFit,
    pub even: Option<LinearFit>,
    pub odd: Option<LinearFit>,
}

fn parity_fits(points: &[(usize, f64, f64)]) -> Result<ParityFits> {
    if points.len() < MIN_FIT_POINTS {
        return Err(Error::Fit(format!(
            "{} usable orders, at least {MIN_FIT_POINTS} needed",
            points.len()
        )));
    }
    let pick = |parity: Option<usize>| -> Vec<(f64, f64)> {
        points
            .iter()
            .filter(|(k, _, _)| parity.is_none_or(|p| k % 2 == p))
            .map(|&(_, x, y)| (x, y))
            .collect()
    };
    let sub = |parity| {
        let pts = pick(Some(parity));
        if pts.len() >= 3 {
            linear_fit(&pts).ok()
        } else {
            None
        }
    };
    Ok(ParityFits {
        all: linear_fit(&pick(None))?,
        even: sub(0),
        odd: sub(1),
    })
}

/// Abscissa used for the error-rate fit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "exponent")]
pub enum RateAbscissa {
    /// `ln|δ_k|` against `k`
    Linear,
    /// `ln|δ_k|` against `k^s`
    Power(f64),
}

impl RateAbscissa {
    /// `k^{1-1/α}`, the general large-order form.
    pub fn for_alpha(alpha: f64) -> Self {
        RateAbscissa::Power(1.0 - 1.0 / alpha)
    }

    pub fn at(self, k: usize) -> f64 {
        match self {
            RateAbscissa::Linear => k as f64,
            RateAbscissa::Power(s) => (k as f64).powf(s),
        }
    }
}

#[derive(Clone, Debug)]
pub struct StudyOrder {
    pub report: OdmReport,
    /// `reference - value`, when a reference is known.
    pub delta: Option<Float>,
}

#[derive(Clone, Debug)]
pub struct ConvergenceStudy {
    pub orders: Vec<StudyOrder>,
    pub failures: Vec<(usize, String)>,
    /// `1/ρ_k` against `k`; `R = 1/slope`.
    pub rho_fit: ParityFits,
    /// For a power abscissa `k^s`: `k ρ_k` against `k^{-s}`, `R = intercept`.
    pub rho_extrapolation: Option<ParityFits>,
    /// `ln|δ_k / reference|` (or of the error estimate without a reference).
    pub rate_fit: Option<ParityFits>,
}

impl ConvergenceStudy {
    /// `R` from the corrected fit when there is one, else from the linear fit.
    pub fn r_fit(&self) -> f64 {
        match &self.rho_extrapolation {
            Some(fit) => fit.all.intercept,
            None => self.r_linear(),
        }
    }

    pub fn r_linear(&self) -> f64 {
        1.0 / self.rho_fit.all.slope
    }

    pub fn order(&self, k: usize) -> Option<&StudyOrder> {
        self.orders.iter().find(|o| o.report.k() == k)
    }
}

/// Runs the approximant over `orders` and fits the ρ and error trends.
pub fn convergence_study(
    table: &RhoPolynomialTable,
    crit: &RhoSelectionCriterion,
    orders: &[usize],
    g: &Coupling,
    reference: Option<&Float>,
    abscissa: RateAbscissa,
    prec: Precision,
) -> Result<ConvergenceStudy> {
    if let Some(&k) = orders.iter().find(|&&k| k + 1 > table.source_order()) {
        return Err(Error::usage(format!(
            "order {k} needs a table of order {}, have {}",
            k + 1,
            table.source_order()
        )));
    }
    let bits = prec.bits();
    let mut done = Vec::new();
    let mut failures = Vec::new();
    for &k in orders {
        match odm_value(table, k, crit, g, prec) {
            Ok(report) => {
                let delta = reference.map(|r| Float::with_val(bits, r - &report.value));
                done.push(StudyOrder { report, delta });
            }
            Err(e @ Error::Selection { .. }) => failures.push((k, e.to_string())),
            Err(e) => return Err(e),
        }
    }
    let rho_points: Vec<(usize, f64, f64)> = done
        .iter()
        .map(|o| {
            (
                o.report.k(),
                o.report.k() as f64,
                1.0 / o.report.rho_k().to_f64(),
            )
        })
        .collect();
    let rho_fit = parity_fits(&rho_points)?;
    let rho_extrapolation = match abscissa {
        RateAbscissa::Linear => None,
        RateAbscissa::Power(exponent) => {
            let pts: Vec<(usize, f64, f64)> = done
                .iter()
                .map(|o| {
                    let k = o.report.k() as f64;
                    (
                        o.report.k(),
                        k.powf(-exponent),
                        k * o.report.rho_k().to_f64(),
                    )
                })
                .collect();
            Some(parity_fits(&pts)?)
        }
    };

    let rate_points: Vec<(usize, f64, f64)> = done
        .iter()
        .filter_map(|o| {
            let err = match (&o.delta, reference) {
                (Some(d), Some(r)) if !r.is_zero() => Float::with_val(bits, d / r).abs(),
                _ => o.report.error_estimate.clone()?,
            };
            let ln = Float::with_val(bits, err.ln_ref()).to_f64();
            ln.is_finite()
                .then(|| (o.report.k(), abscissa.at(o.report.k()), ln))
        })
        .collect();
    let rate_fit = parity_fits(&rate_points).ok();
    Ok(ConvergenceStudy {
        orders: done,
        failures,
        rho_fit,
        rho_extrapolation,
        rate_fit,
    })
}
