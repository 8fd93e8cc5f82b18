//! Convergence constants: the saddle (μ, λ) of the mapping, the predicted
//! `R = μ A` and the exact rate of the quartic integral.

use resum::saddle::{d0_exact_rate, predicted_r, solve_saddle};
use resum::Precision;

fn main() -> resum::Result<()> {
    let prec = Precision::default();
    for (n, d) in [(3, 2), (2, 1), (5, 2), (3, 1), (4, 1)] {
        let s = solve_saddle(&prec.ratio(n, d), prec)?;
        println!("alpha = {n}/{d}: mu = {:.10}  lambda = {:.10}", s.mu.to_f64(), s.lambda_saddle.to_f64());
    }
    // quartic integral (A = 3/2) with the alpha = 4 mapping
    println!("predicted R(alpha=4) = {:.6}", predicted_r(&prec.real(4), &prec.ratio(3, 2), prec)?.to_f64());
    let (r, rate) = d0_exact_rate(prec)?;
    println!("exact R = {:.12}, rate e^(-3/R) = {:.12}", r.to_f64(), rate.to_f64());
    Ok(())
}
