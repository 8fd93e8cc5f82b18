//! Truncated power series: products, reciprocals, composition, reversion.

use resum::{PowerSeries, Precision};

fn main() -> resum::Result<()> {
    let prec = Precision::default();
    // e^x through x^6
    let exp = PowerSeries::from_decimals(&["1", "1", "1/2", "1/6", "1/24", "1/120", "1/720"], "x", prec)?;
    let inv = exp.reciprocal()?;
    println!("1/e^x  = {:?}", inv.coeffs().iter().map(|c| c.to_f64()).collect::<Vec<_>>());

    // log(1+x) is the reversion of e^x - 1
    let shifted = exp.add(&PowerSeries::constant(prec.real(-1), exp.order(), "x"))?;
    let log = shifted.revert()?;
    println!("log(1+x) = {:?}", log.coeffs().iter().map(|c| c.to_f64()).collect::<Vec<_>>());

    let back = shifted.compose(&log)?;
    println!("(e^x - 1) o log(1+x) = {:?}", back.coeffs().iter().map(|c| c.to_f64()).collect::<Vec<_>>());
    println!("e^0.1 from 7 terms: {}", exp.eval(&prec.real(0.1)).to_f64());
    Ok(())
}
