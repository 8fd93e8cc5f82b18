//! Double-exponential quadrature on finite and half-infinite intervals.

use rug::Float;

use resum::quad::{exp_sinh, tanh_sinh};
use resum::Precision;

fn main() -> resum::Result<()> {
    let prec = Precision::default();
    let bits = prec.bits();
    let tol = prec.tolerance(10);
    // ∫₀¹ ln(x)/√x dx = -4, endpoint singularity
    let out = tanh_sinh(|x| Float::with_val(bits, x.ln_ref()) / Float::with_val(bits, x.sqrt_ref()), &prec.zero(), &prec.one(), &tol, 20_000)?;
    println!("int_0^1 ln x / sqrt x = {}  ({} evaluations)", out.value.to_string_radix(10, Some(30)), out.evaluations);
    // ∫₀^∞ t^3 e^{-t} dt = 6
    let out = exp_sinh(|t| Float::with_val(bits, t.square_ref()) * t * Float::with_val(bits, -t).exp(), &prec.zero(), &tol, 20_000)?;
    println!("int_0^inf t^3 e^-t   = {}  ({} evaluations)", out.value.to_string_radix(10, Some(30)), out.evaluations);
    Ok(())
}
