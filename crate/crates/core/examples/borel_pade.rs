//! Borel–Padé: a rational approximant of the Borel transform inside the
//! Laplace integral. Exact for the alternating factorial series at [0/1].

use rug::Float;

use resum::borel::{borel_pade_sum, QuadratureConfig};
use resum::{PowerSeries, Precision};

fn main() -> resum::Result<()> {
    let prec = Precision::default();
    let coeffs = (0..=8u32)
        .map(|k| {
            let f = Float::with_val(prec.bits(), Float::factorial(k));
            if k % 2 == 0 { f } else { -f }
        })
        .collect();
    let series = PowerSeries::new(coeffs, "g")?;
    let quad = QuadratureConfig::new(prec);
    for g in [0.5, 1.0, 2.0] {
        let (v, approx) = borel_pade_sum(&series, &prec.zero(), 0, 1, &prec.real(g), &quad, prec)?;
        println!(
            "g = {g}: {:.15}  denominator {:?}",
            v.to_f64(),
            approx.denominator().coeffs().iter().map(|c| c.to_f64()).collect::<Vec<_>>()
        );
    }
    // a pole on the positive axis is reported, not integrated through
    let bad = PowerSeries::from_f64(&[1.0, 1.0, 1.0], "g", prec)?;
    match borel_pade_sum(&bad, &prec.zero(), 0, 1, &prec.one(), &quad, prec) {
        Ok((v, _)) => println!("unexpected value {}", v.to_f64()),
        Err(e) => println!("non-alternating series: {e}"),
    }
    Ok(())
}
