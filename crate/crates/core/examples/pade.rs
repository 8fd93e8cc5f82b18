//! Padé approximants of log(1+x), evaluated beyond the radius of convergence.

use resum::pade::{pade_eval, pade_fit};
use resum::{PowerSeries, Precision};

fn main() -> resum::Result<()> {
    let prec = Precision::default();
    let coeffs: Vec<_> = (0..=12)
        .map(|k| match k {
            0 => prec.zero(),
            _ => prec.ratio(if k % 2 == 1 { 1 } else { -1 }, k),
        })
        .collect();
    let log = PowerSeries::new(coeffs, "x")?;
    let x = prec.real(3);
    println!("log(4) = {:.12}", 4f64.ln());
    for n in [2, 4, 6] {
        let p = pade_fit(&log, n, n, prec)?;
        let poles: Vec<f64> = p.real_poles(prec)?.iter().map(|z| z.to_f64()).collect();
        println!("[{n}/{n}](3) = {:.12}  real poles {poles:.3?}", pade_eval(&p, &x, prec)?.to_f64());
    }
    Ok(())
}
