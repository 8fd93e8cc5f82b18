//! Order-dependent mapping of the zero-dimensional quartic integral, summed
//! directly at infinite coupling.

use rug::Float;

use resum::coupling::Coupling;
use resum::mapping::{build_rho_table, MappingSpec};
use resum::models::{d0_partition_coeffs, d0_partition_value, d0_strong_coupling_amplitude};
use resum::odm::{odm_value, RhoSelectionCriterion, SelectionMode};
use resum::Precision;

fn main() -> resum::Result<()> {
    let prec = Precision::default();
    let series = d0_partition_coeffs(41, prec);
    let table = build_rho_table(&series, &MappingSpec::power_cut(prec.real(2), prec.ratio(1, 2))?)?;
    let crit = RhoSelectionCriterion::with_mode(SelectionMode::Mixed, prec);
    let amp = d0_strong_coupling_amplitude(prec);
    println!("g^(1/4) Z(g) as g -> inf: {:.15}", amp.to_f64());
    for k in [5, 10, 20, 40] {
        let r = odm_value(&table, k, &crit, &Coupling::Infinite, prec)?;
        let delta = Float::with_val(prec.bits(), &amp - &r.value);
        println!("k = {k:2}  rho = {:.6}  value = {:.15}  delta = {:.2e}", r.rho_k().to_f64(), r.value.to_f64(), delta.to_f64());
    }
    // the same table at finite coupling
    let g = Coupling::Finite(prec.real(2));
    let exact = d0_partition_value(&g, prec)?;
    let r = odm_value(&table, 20, &crit, &g, prec)?;
    println!("Z(2): {:.15} (quadrature {:.15})", r.value.to_f64(), exact.to_f64());
    Ok(())
}
