//! Exponential sums `S_f(α; X) = Σ_{n≤X} f(n) e(αn)` and the trigonometric
//! polynomial quadratures built on them.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use crate::error::{check_range, invalid, Result};
use crate::ntcore::FactorTable;
use crate::numeric::{e, e_mul, ComplexSum};

/// The phase recurrence is re-seeded from an exactly reduced angle this often.
pub const RESEED_INTERVAL: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpSumMethod {
    Direct,
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpSumResult {
    pub alpha: f64,
    pub x: u64,
    pub value: Complex64,
    pub method: ExpSumMethod,
}

impl ExpSumResult {
    pub fn direct(values: &[f64], alpha: f64, x: u64) -> Result<Self> {
        Ok(Self { alpha, x, value: exp_sum(values, alpha, x)?, method: ExpSumMethod::Direct })
    }
}

/// Error-free two-sum accumulator; branch free, so the hot loop pipelines.
#[derive(Clone, Copy, Default)]
struct TwoSumAcc {
    s: f64,
    c: f64,
}

impl TwoSumAcc {
    #[inline(always)]
    fn add(&mut self, x: f64) {
        let t = self.s + x;
        let z = t - self.s;
        self.c += (self.s - (t - z)) + (x - z);
        self.s = t;
    }

    #[inline(always)]
    fn value(self) -> f64 {
        self.s + self.c
    }
}

/// `Σ_{n=1}^{X} values[n]·e(αn)`, where `values[n]` holds `f(n)`.
///
/// Phases come from the recurrence `e(α(n+1)) = e(αn)·e(α)`; every
/// [`RESEED_INTERVAL`] terms the phase is recomputed from `n·α mod 1`,
/// which bounds drift in both modulus and argument.
pub fn exp_sum(values: &[f64], alpha: f64, x: u64) -> Result<Complex64> {
    if x == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    check_range(x, 0, values.len().saturating_sub(1) as u64)?;
    let step = e(alpha);
    let (mut re, mut im) = (TwoSumAcc::default(), TwoSumAcc::default());
    let x = x as usize;
    let mut start = 1usize;
    while start <= x {
        let end = (start + RESEED_INTERVAL - 1).min(x);
        let mut ph = e_mul(start as u64, alpha);
        for &v in &values[start..=end] {
            re.add(v * ph.re);
            im.add(v * ph.im);
            ph *= step;
        }
        start = end + 1;
    }
    Ok(Complex64::new(re.value(), im.value()))
}

/// `Σ_{n≤X, n≡r (mod q)} values[n]` for `r = 0..q`.
pub fn residue_class_sums(values: &[f64], q: u64, x: u64) -> Result<Vec<f64>> {
    if q == 0 {
        return Err(invalid("modulus must be positive"));
    }
    check_range(x, 0, values.len().saturating_sub(1) as u64)?;
    let q = q as usize;
    let mut acc = vec![crate::numeric::CompensatedSum::new(); q];
    for (n, &v) in values.iter().enumerate().take(x as usize + 1).skip(1) {
        acc[n % q].add(v);
    }
    Ok(acc.iter().map(|c| c.value()).collect())
}

/// `S_f(a/q; X)` from residue-class sums, with every phase `e(ra/q)`
/// taken from an exact reduction of `ra mod q`.
pub fn exp_sum_rational(class_sums: &[f64], a: u64) -> Complex64 {
    let q = class_sums.len() as u64;
    let mut acc = ComplexSum::new();
    for (r, &s) in class_sums.iter().enumerate() {
        let k = (r as u128 * a as u128 % q as u128) as f64;
        acc.add(e(k / q as f64) * s);
    }
    acc.value()
}

/// `F(j/K)` for `j = 0..K` via one length-`K` transform of the zero-padded
/// value array. `K` must be at least `values.len()` (no aliasing).
pub fn exp_sum_grid(values: &[f64], k: usize) -> Result<Vec<Complex64>> {
    if k == 0 {
        return Err(invalid("grid size must be positive"));
    }
    if k < values.len() {
        return Err(invalid(format!(
            "grid size {k} is smaller than the value array ({}); frequencies would alias",
            values.len()
        )));
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); k];
    for (b, &v) in buf.iter_mut().zip(values).skip(1) {
        b.re = v;
    }
    // rustfft's inverse transform carries the e(+jn/K) kernel, unnormalized.
    FftPlanner::new().plan_fft_inverse(k).process(&mut buf);
    Ok(buf)
}

/// Smallest power of two `≥ 3N + 4`.
pub fn default_grid_size(n: u64) -> usize {
    (3 * n as usize + 4).next_power_of_two()
}

/// `sin(π·n·r)` with `n·r` reduced mod 2 in double-double arithmetic.
fn sin_pi_mul(n: f64, r: f64) -> f64 {
    let p = n * r;
    let err = n.mul_add(r, -p);
    let red = (p - 2.0 * (p / 2.0).round()) + err;
    (PI * red).sin()
}

/// `u(β) = Σ_{n≤N} e(nβ)` in closed form,
/// `e((N+1)β/2)·sin(πNβ)/sin(πβ)`, and `N` when `e(β) = 1`.
pub fn u_sum(beta: f64, n: u64) -> Complex64 {
    let r = beta - beta.round();
    let den = (PI * r).sin();
    if r == 0.0 || den == 0.0 {
        return Complex64::new(n as f64, 0.0);
    }
    let num = sin_pi_mul(n as f64, r);
    e_mul(n + 1, 0.5 * r) * (num / den)
}

/// `Σ_{p≤X} e(αp)` over primes.
pub fn prime_exp_sum(t: &FactorTable, alpha: f64, x: u64) -> Result<Complex64> {
    check_range(x, 0, t.limit())?;
    let mut acc = ComplexSum::new();
    for &p in &t.primes()[..t.prime_pi(x)] {
        acc.add(e_mul(p as u64, alpha));
    }
    Ok(acc.value())
}

/// Exact grid quadrature of a power of `F_N(α) = Σ_{n≤N} values[n] e(αn)`.
///
/// * `power = 2`: `(1/K) Σ_j |F(j/K)|²`, which equals `Σ f(n)²`.
/// * `power = 3`: `(1/K) Σ_j F(j/K)³ e(−Nj/K)`, which equals the number
///   of weighted representations `N = n₁ + n₂ + n₃`.
///
/// Both are exact for a trigonometric polynomial once `K ≥ power·N + 1`.
pub fn power_integral(values: &[f64], n: u64, power: u32, k: usize) -> Result<Complex64> {
    if power != 2 && power != 3 {
        return Err(invalid("power_integral supports powers 2 and 3"));
    }
    check_range(n, 1, values.len().saturating_sub(1) as u64)?;
    let threshold = power as usize * n as usize + 1;
    if k < threshold {
        return Err(invalid(format!("grid size {k} is below the exactness threshold {threshold}")));
    }
    let grid = exp_sum_grid(&values[..=n as usize], k)?;
    let mut acc = ComplexSum::new();
    match power {
        2 => {
            for f in &grid {
                acc.add(Complex64::new(f.norm_sqr(), 0.0));
            }
        }
        _ => {
            let kk = k as u64;
            for (j, f) in grid.iter().enumerate() {
                let r = (n % kk) * j as u64 % kk;
                acc.add(f * f * f * e(-(r as f64) / k as f64));
            }
        }
    }
    Ok(acc.value() / k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::additive::AdditiveFunction;

    fn omega(n: u64) -> Vec<f64> {
        let t = FactorTable::new(n.max(2)).unwrap();
        AdditiveFunction::big_omega().value_table(&t, n).unwrap().as_slice().to_vec()
    }

    #[test]
    fn direct_sum_examples() {
        let v = omega(10);
        assert!((exp_sum(&v, 0.0, 10).unwrap() - 15.0).norm() < 1e-12);
        assert!((exp_sum(&v, 0.5, 4).unwrap() - 2.0).norm() < 1e-12);
        assert_eq!(exp_sum(&v, 0.3, 0).unwrap(), Complex64::new(0.0, 0.0));
        assert!(exp_sum(&v, 0.3, 11).is_err());
    }

    #[test]
    fn long_sums_match_exactly_reduced_phases() {
        let v = omega(300_000);
        let alpha = std::f64::consts::FRAC_1_PI;
        let mut acc = ComplexSum::new();
        for n in 1..=300_000u64 {
            acc.add(e_mul(n, alpha) * v[n as usize]);
        }
        let got = exp_sum(&v, alpha, 300_000).unwrap();
        assert!((got - acc.value()).norm() < 1e-8 * acc.value().norm().max(1.0));
    }

    #[test]
    fn grid_examples() {
        let v = omega(4);
        let g = exp_sum_grid(&v, 8).unwrap();
        assert!((g[0] - 4.0).norm() < 1e-12);
        assert!((g[4] - 2.0).norm() < 1e-12);
        for j in 1..8 {
            assert!((g[8 - j] - g[j].conj()).norm() < 1e-12);
        }
        assert!(exp_sum_grid(&v, 4).is_err());
    }

    #[test]
    fn grid_agrees_with_direct() {
        let v = omega(5000);
        let k = 16384;
        let g = exp_sum_grid(&v, k).unwrap();
        for j in (0..k).step_by(97) {
            let d = exp_sum(&v, j as f64 / k as f64, 5000).unwrap();
            assert!((g[j] - d).norm() <= 1e-6 * d.norm().max(1.0), "j={j}");
        }
    }

    #[test]
    fn geometric_sum() {
        assert_eq!(u_sum(0.0, 17), Complex64::new(17.0, 0.0));
        assert!(u_sum(0.5, 4).norm() < 1e-12);
        for &(beta, n) in &[(0.123, 50u64), (1e-7, 1000), (-0.37, 333), (0.499, 10_000)] {
            let direct: Complex64 = (1..=n).map(|k| e_mul(k, beta)).sum();
            assert!((u_sum(beta, n) - direct).norm() < 1e-9, "beta={beta}");
            let dist = (beta - beta.round()).abs();
            assert!(u_sum(beta, n).norm() <= (n as f64).min(1.0 / (2.0 * dist)) + 1e-9);
        }
    }

    #[test]
    fn primes_only() {
        let t = FactorTable::new(100).unwrap();
        assert!((prime_exp_sum(&t, 0.0, 100).unwrap() - 25.0).norm() < 1e-12);
        assert!((prime_exp_sum(&t, 0.5, 10).unwrap() + 2.0).norm() < 1e-12);
        assert_eq!(prime_exp_sum(&t, 0.2, 1).unwrap(), Complex64::new(0.0, 0.0));
        assert!(prime_exp_sum(&t, 0.2, 101).is_err());
    }

    #[test]
    fn power_integral_examples() {
        let v = omega(10);
        let p2 = power_integral(&v, 10, 2, default_grid_size(10)).unwrap();
        assert!((p2 - 29.0).norm() < 1e-9);
        let p3 = power_integral(&v, 6, 3, default_grid_size(6)).unwrap();
        assert!((p3 - 1.0).norm() < 1e-9);
        let p3 = power_integral(&v, 9, 3, default_grid_size(9)).unwrap();
        assert!((p3 - 16.0).norm() < 1e-9);
        assert!(power_integral(&v, 9, 3, 27).is_err());
        assert!(power_integral(&v, 9, 3, 28).is_ok());
        assert!(power_integral(&v, 9, 4, 64).is_err());
    }

    #[test]
    fn rational_points_from_class_sums() {
        let t = FactorTable::new(5000).unwrap();
        let v = crate::additive::AdditiveFunction::big_omega().value_table(&t, 5000).unwrap();
        for q in [1u64, 2, 7, 12, 20] {
            let sums = residue_class_sums(v.as_slice(), q, 4999).unwrap();
            assert_eq!(sums.len(), q as usize);
            for a in 0..q {
                let want = exp_sum(v.as_slice(), a as f64 / q as f64, 4999).unwrap();
                let got = exp_sum_rational(&sums, a);
                assert!((got - want).norm() < 1e-8, "a/q={a}/{q}: {got} vs {want}");
            }
        }
    }
}
