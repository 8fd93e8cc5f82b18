//! Polynomial roots at working precision.

use resum::poly::{complex_roots, polynomial_real_roots, Polynomial};
use resum::Precision;

fn main() -> resum::Result<()> {
    let prec = Precision::default();
    // (x - 1)(x - 2)(x^2 + 1) = x^4 - 3x^3 + 3x^2 - 3x + 2
    let p = Polynomial::from_f64(&[2.0, -3.0, 3.0, -3.0, 1.0], prec);
    for z in complex_roots(&p, prec)? {
        println!("{:+.15} {:+.15}i", z.re.to_f64(), z.im.to_f64());
    }
    let real: Vec<f64> = polynomial_real_roots(&p, prec)?.iter().map(|x| x.to_f64()).collect();
    println!("real: {real:?}");
    Ok(())
}
