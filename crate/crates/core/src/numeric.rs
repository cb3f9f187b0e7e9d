//! Small numeric helpers shared by the evaluators: compensated
//! accumulation and the additive character `e(θ) = exp(2πiθ)`.

use num_complex::Complex64;
use std::f64::consts::TAU;

/// Neumaier (improved Kahan–Babuška) summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated accumulator for complex values (real and imaginary parts
/// are summed independently).
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Sum of a slice with compensated accumulation.
pub fn compensated_sum(xs: &[f64]) -> f64 {
    xs.iter().copied().collect::<CompensatedSum>().value()
}

/// `e(θ) = exp(2πiθ)`; the argument is reduced mod 1 first so large
/// integer parts do not cost accuracy.
#[inline]
pub fn e(theta: f64) -> Complex64 {
    let r = theta - theta.round();
    let (s, c) = (TAU * r).sin_cos();
    Complex64::new(c, s)
}

/// `e(n·α)` with the product reduced mod 1 in double-double arithmetic,
/// so that the phase of a large multiple stays accurate.
#[inline]
pub fn e_mul(n: u64, alpha: f64) -> Complex64 {
    let x = n as f64;
    // n fits exactly in f64 for every n we use (< 2^53).
    let p = x * alpha;
    let err = x.mul_add(alpha, -p);
    let r = (p - p.round()) + err;
    e(r)
}
