#![allow(dead_code)]

use jc_core::linalg::{ComplexMatrix, DensityMatrix};
use jc_core::Complex64;
use rand::Rng;

pub fn random_density<R: Rng>(rng: &mut R, n: usize) -> DensityMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.scale(Complex64::new(1.0 / tr, 0.0))).unwrap()
}

/// Scaling and squaring over a 30-term Taylor series.
pub fn expm(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    let norm = a.frobenius_norm();
    let mut squarings = 0;
    while norm / 2f64.powi(squarings) > 0.25 {
        squarings += 1;
    }
    let scaled = a.scale(Complex64::new(1.0 / 2f64.powi(squarings), 0.0));
    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=30 {
        term = (&term * &scaled).scale(Complex64::new(1.0 / k as f64, 0.0));
        sum = &sum + &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Element-wise partial trace over an explicit index sum.
pub fn brute_partial_trace(m: &ComplexMatrix, da: usize, db: usize, keep_first: bool) -> ComplexMatrix {
    let (keep, traced) = if keep_first { (da, db) } else { (db, da) };
    let mut data = Vec::with_capacity(keep * keep);
    for i in 0..keep {
        for j in 0..keep {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..traced {
                let (r, c) = if keep_first {
                    (i * db + k, j * db + k)
                } else {
                    (k * db + i, k * db + j)
                };
                acc += m[(r, c)];
            }
            data.push(acc);
        }
    }
    ComplexMatrix::from_vec(keep, keep, data).unwrap()
}

pub fn binary_entropy(p: f64) -> f64 {
    let h = |x: f64| if x > 0.0 { -x * x.ln() } else { 0.0 };
    h(p) + h(1.0 - p)
}
