//! Fixed point of the three-dimensional φ⁴ β-function and the critical
//! exponents there, through the β-covariant shifted mapping.

use resum::reproduce::{phi4_exponents, phi4_fixed_points, scaling_violation};
use resum::Precision;

fn main() -> resum::Result<()> {
    let prec = Precision::default();
    println!(" k   g*        omega");
    for f in phi4_fixed_points(prec)? {
        println!("{:2}   {:.6}  {:.6}{}", f.k, f.g_star.to_f64(), f.omega.to_f64(), if f.complex { "  (complex rho)" } else { "" });
    }
    println!("\n k   gamma     nu        eta      |gamma - nu(2-eta)|");
    for e in phi4_exponents(prec)? {
        let nu = e.nu.as_ref().map_or(f64::NAN, |v| v.to_f64());
        println!("{:2}   {:.6}  {:.6}  {:.5}  {:.1e}", e.k, e.gamma.to_f64(), nu, e.eta.to_f64(), scaling_violation(&e));
    }
    Ok(())
}
