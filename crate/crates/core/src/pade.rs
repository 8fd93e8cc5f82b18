//! Padé approximants `[L/M]`.

use rug::Float;

use crate::error::{Error, Result};
use crate::poly::{polynomial_real_roots, Polynomial};
use crate::series::{PowerSeries, Precision};

/// `N(g)/D(g)` with `deg N <= L`, `deg D <= M`, `D(0) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PadeApproximant {
    numerator: Polynomial,
    denominator: Polynomial,
}

impl PadeApproximant {
    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    /// `(L, M)` as fitted (before any trailing zeros).
    pub fn degrees(&self) -> (usize, usize) {
        (
            self.numerator.coeffs().len() - 1,
            self.denominator.coeffs().len() - 1,
        )
    }

    /// Taylor coefficients of `N/D` through `order`.
    pub fn taylor(&self, order: usize) -> Vec<Float> {
        let n = self.numerator.coeffs();
        let d = self.denominator.coeffs();
        let bits = n[0].prec();
        let mut out: Vec<Float> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut c = n.get(k).map_or_else(|| Float::new(bits), Clone::clone);
            for j in 1..d.len().min(k + 1) {
                c -= Float::with_val(bits, &d[j] * &out[k - j]);
            }
            out.push(c);
        }
        out
    }

    /// Real zeros of the denominator.
    pub fn real_poles(&self, prec: Precision) -> Result<Vec<Float>> {
        if self.denominator.degree() == 0 {
            return Ok(Vec::new());
        }
        polynomial_real_roots(&self.denominator, prec)
    }
}

/// Solves the `M x M` system for the denominator, then the numerator by
/// convolution. Gaussian elimination with partial pivoting; a pivot below
/// `10^(8-digits)` of the largest entry counts as a rank deficiency.
pub fn pade_fit(s: &PowerSeries, l: usize, m: usize, prec: Precision) -> Result<PadeApproximant> {
    if l + m > s.order() {
        return Err(Error::usage(format!(
            "[{l}/{m}] needs order {}, series has {}",
            l + m,
            s.order()
        )));
    }
    let bits = prec.bits();
    let f = |i: i64| -> Float {
        if i < 0 {
            Float::new(bits)
        } else {
            Float::with_val(bits, s.coeff(i as usize))
        }
    };
    // sum_{j=1..M} b_j f_{L+i-j} = -f_{L+i},  i = 1..M
    let mut a: Vec<Vec<Float>> = (1..=m)
        .map(|i| {
            let mut row: Vec<Float> = (1..=m).map(|j| f(l as i64 + i as i64 - j as i64)).collect();
            row.push(-f(l as i64 + i as i64));
            row
        })
        .collect();
    let scale = a
        .iter()
        .flat_map(|row| row[..m].iter())
        .map(|x| Float::with_val(bits, x.abs_ref()))
        .fold(Float::new(bits), |acc, x| if x > acc { x } else { acc });
    let tol = Float::with_val(bits, &scale * prec.tolerance(8));
    let mut rank = 0;
    for col in 0..m {
        let pivot = (col..m)
            .max_by(|&x, &y| {
                let (ax, ay) = (a[x][col].clone().abs(), a[y][col].clone().abs());
                ax.partial_cmp(&ay).expect("finite")
            })
            .expect("non-empty range");
        if Float::with_val(bits, a[pivot][col].abs_ref()) <= tol || scale.is_zero() {
            continue;
        }
        rank += 1;
        a.swap(col, pivot);
        for r in col + 1..m {
            let factor = Float::with_val(bits, &a[r][col] / &a[col][col]);
            for c in col..=m {
                let t = Float::with_val(bits, &factor * &a[col][c]);
                a[r][c] -= t;
            }
        }
    }
    if rank < m {
        return Err(Error::Degenerate { l, m, rank });
    }
    let mut b = vec![Float::new(bits); m + 1];
    b[0] = prec.one();
    for row in (0..m).rev() {
        let mut acc = a[row][m].clone();
        for c in row + 1..m {
            acc -= Float::with_val(bits, &a[row][c] * &b[c + 1]);
        }
        b[row + 1] = acc / &a[row][row];
    }
    let numer: Vec<Float> = (0..=l)
        .map(|i| {
            let mut acc = Float::new(bits);
            for (j, bj) in b.iter().enumerate().take(i.min(m) + 1) {
                acc += Float::with_val(bits, bj * &f((i - j) as i64));
            }
            acc
        })
        .collect();
    Ok(PadeApproximant {
        numerator: Polynomial::new(numer),
        denominator: Polynomial::new(b),
    })
}

/// `N(g)/D(g)`. A denominator below `10^(8-digits)` of `sum |b_j||g|^j` is
/// treated as a pole.
pub fn pade_eval(p: &PadeApproximant, g: &Float, prec: Precision) -> Result<Float> {
    let bits = prec.bits();
    let d = p.denominator.eval(g);
    let scale = p.denominator.abs_scale(g);
    if Float::with_val(bits, d.abs_ref()) <= Float::with_val(bits, &scale * prec.tolerance(8)) {
        return Err(Error::Pole(d.to_f64().abs()));
    }
    Ok(p.numerator.eval(g) / d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec() -> Precision {
        Precision::default()
    }

    fn series(v: &[f64]) -> PowerSeries {
        PowerSeries::from_f64(v, "g", prec()).unwrap()
    }

    fn exp_series(order: usize) -> PowerSeries {
        let p = prec();
        let mut c = vec![p.one()];
        for k in 1..=order {
            let next = Float::with_val(p.bits(), &c[k - 1] / k as u32);
            c.push(next);
        }
        PowerSeries::new(c, "g").unwrap()
    }

    #[test]
    fn geometric_is_recovered() {
        let p = pade_fit(&series(&[1.0, 1.0, 1.0, 1.0, 1.0]), 0, 1, prec()).unwrap();
        let d: Vec<f64> = p.denominator().coeffs().iter().map(Float::to_f64).collect();
        assert_eq!(d, vec![1.0, -1.0]);
        assert_eq!(p.numerator().coeffs()[0].to_f64(), 1.0);
    }

    #[test]
    fn exp_two_two() {
        let p = pade_fit(&exp_series(4), 2, 2, prec()).unwrap();
        let n: Vec<f64> = p.numerator().coeffs().iter().map(Float::to_f64).collect();
        let d: Vec<f64> = p.denominator().coeffs().iter().map(Float::to_f64).collect();
        for (x, y) in n.iter().zip([1.0, 0.5, 1.0 / 12.0]) {
            assert!((x - y).abs() < 1e-30);
        }
        for (x, y) in d.iter().zip([1.0, -0.5, 1.0 / 12.0]) {
            assert!((x - y).abs() < 1e-30);
        }
        let v = pade_eval(&p, &prec().one(), prec()).unwrap();
        assert!((v.to_f64() - 19.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn polynomial_is_its_own_approximant() {
        let p = pade_fit(&series(&[1.0, 2.0, 3.0]), 2, 0, prec()).unwrap();
        let n: Vec<f64> = p.numerator().coeffs().iter().map(Float::to_f64).collect();
        assert_eq!(n, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn alternating_geometric_at_one() {
        let p = pade_fit(&series(&[1.0, -1.0, 1.0, -1.0]), 0, 1, prec()).unwrap();
        assert_eq!(pade_eval(&p, &prec().one(), prec()).unwrap().to_f64(), 0.5);
        assert_eq!(pade_eval(&p, &prec().zero(), prec()).unwrap().to_f64(), 1.0);
    }

    #[test]
    fn pole_is_an_error() {
        let p = pade_fit(&series(&[1.0, 1.0, 1.0]), 0, 1, prec()).unwrap();
        assert!(matches!(
            pade_eval(&p, &prec().one(), prec()),
            Err(Error::Pole(_))
        ));
    }

    #[test]
    fn degenerate_table_entry() {
        // [1/1] of a constant: the 1x1 system is 0 * b_1 = 0
        let err = pade_fit(&series(&[1.0, 0.0, 0.0]), 1, 1, prec()).unwrap_err();
        assert!(matches!(err, Error::Degenerate { .. }));
    }

    #[test]
    fn order_too_low() {
        assert!(matches!(
            pade_fit(&series(&[1.0, 1.0]), 1, 1, prec()),
            Err(Error::Usage(_))
        ));
    }
}
