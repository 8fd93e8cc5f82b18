//! Convergence study of the anharmonic oscillator ground state at infinite
//! coupling: ρ_k ~ R/k, with the error rate fitted against k^{1/3}.

use resum::coupling::Coupling;
use resum::mapping::{build_rho_table, MappingSpec};
use resum::models::{anharmonic_ground_coeffs, anharmonic_ground_value};
use resum::odm::{convergence_study, ComplexPolicy, RateAbscissa, RhoSelectionCriterion, SelectionMode};
use resum::series::ratio_growth_constant;
use resum::Precision;

fn main() -> resum::Result<()> {
    let prec = Precision::default();
    let series = anharmonic_ground_coeffs(31, prec);
    println!("A from coefficient ratios: {:.4}", ratio_growth_constant(&series, 8)?.to_f64());
    let amp = anharmonic_ground_value(&Coupling::Infinite, prec)?;
    println!("E / g^(1/3) as g -> inf (diagonalization): {:.15}", amp.to_f64());

    let table = build_rho_table(&series, &MappingSpec::power_cut(prec.ratio(3, 2), prec.ratio(-1, 2))?)?;
    let crit = RhoSelectionCriterion::new(SelectionMode::Mixed, prec.real(f64::INFINITY))?
        .with_complex(ComplexPolicy::Project { max_arg_deg: 20.0 });
    let orders: Vec<usize> = (5..=30).collect();
    let study = convergence_study(&table, &crit, &orders, &Coupling::Infinite, Some(&amp), RateAbscissa::for_alpha(1.5), prec)?;
    for o in study.orders.iter().step_by(5) {
        let delta = o.delta.as_ref().map_or(f64::NAN, |d| d.to_f64());
        println!("k = {:2}  k rho_k = {:.4}  delta = {:.2e}", o.report.k(), o.report.k() as f64 * o.report.rho_k().to_f64(), delta);
    }
    println!("R (k^-1/3 extrapolation) = {:.3}, R (linear) = {:.3}", study.r_fit(), study.r_linear());
    if let Some(rate) = study.rate_fit {
        println!("d ln|delta/E| / d k^(1/3) = {:.3}", rate.all.slope);
    }
    Ok(())
}
