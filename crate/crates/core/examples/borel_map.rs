//! Borel–Leroy summation with conformal mapping of the alternating factorial
//! series, whose sum is `∫ e^{-t}/(1+gt) dt`.

use rug::Float;

use resum::borel::{borel_sum, BorelConfig};
use resum::{PowerSeries, Precision};

fn main() -> resum::Result<()> {
    let prec = Precision::default();
    let coeffs = (0..=40u32)
        .map(|k| {
            let f = Float::with_val(prec.bits(), Float::factorial(k));
            if k % 2 == 0 { f } else { -f }
        })
        .collect();
    let series = PowerSeries::new(coeffs, "g")?;
    let g = prec.real(1);
    // closed form e E₁(1)
    let e1 = -Float::with_val(prec.bits(), -prec.one()).eint();
    let exact = prec.one().exp() * e1;
    println!("exact        {:.20}", exact.to_f64());
    for k in [5, 10, 20, 40] {
        let cfg = BorelConfig::new(prec.zero(), prec.one(), k, prec)?;
        let s = borel_sum(&series, &cfg, &g, prec)?;
        println!(
            "K = {k:2}       {:.20}  truncation error {:.1e}",
            s.value.to_f64(),
            s.truncation_error.to_f64()
        );
    }
    Ok(())
}
