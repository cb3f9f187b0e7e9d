//! The major-arc approximation `𝔣(q;x,M)`, the truncated singular series
//! and the main-term prediction for `r_Ω(N)`.

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::ntcore::{FactorTable, RamanujanMethod};
use crate::numeric::CompensatedSum;

use super::coeffs::CoeffTable;

/// Exponent slack in the tail estimate `(M log log N)³ / Q^{1−η}`.
pub const ETA: f64 = 0.1;
/// Exponent slack in the per-term decay `q^{−(2−3ε)}`.
pub const EPSILON: f64 = 0.1;

/// `(Ω * μ)(q)`: 1 when `q` is a prime power, else 0.
pub fn omega_mobius(t: &FactorTable, q: u64) -> Result<i64> {
    let mut s = 0i64;
    for d in t.divisors(q)? {
        s += t.big_omega(d)? as i64 * t.mobius(q / d)?;
    }
    Ok(s)
}

/// `𝔣(q;x,M) = (x/q)·[(Ω*μ)(q) + Σ_{g|q} (gμ(g)/φ(g)) Σ_{j≤M} P_{j,g}(log log(xg/q)) / (log(xg/q))^{j−1}]`.
pub fn frak_f(t: &FactorTable, q: u64, x: f64, m: u32, coeffs: &CoeffTable) -> Result<f64> {
    if q == 0 {
        return Err(invalid("q must be positive"));
    }
    if m == 0 || m > coeffs.m() {
        return Err(Error::Config(format!("M={m} but the coefficient table has M={}", coeffs.m())));
    }
    let xq = x / q as f64;
    if !(xq > std::f64::consts::E) {
        return Err(invalid(format!("x/q = {xq} must exceed e for log log to be defined")));
    }
    let mut acc = CompensatedSum::new();
    acc.add(omega_mobius(t, q)? as f64);
    for g in t.divisors(q)? {
        let mu = t.mobius(g)?;
        if mu == 0 {
            continue;
        }
        let w = (g as f64) * mu as f64 / t.totient(g)? as f64;
        let y = xq * g as f64;
        let (l, ll) = (y.ln(), y.ln().ln());
        let mut inner = 0.0;
        let mut damp = 1.0;
        for j in 1..=m {
            inner += coeffs.poly(j, g, ll)? * damp;
            damp /= l;
        }
        acc.add(w * inner);
    }
    Ok(xq * acc.value())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularSeriesResult {
    pub n: u64,
    pub m: u32,
    pub q_max: u64,
    pub partial: f64,
    pub tail_estimate: f64,
    /// `terms[q − 1] = (𝔣(q;N,M)/N)³ c_q(N)`
    pub terms: Vec<f64>,
}

impl SingularSeriesResult {
    /// `max_q |term(q)|·q^exponent`
    pub fn decay_constant(&self, exponent: f64) -> f64 {
        self.terms.iter().enumerate().map(|(i, t)| t.abs() * ((i + 1) as f64).powf(exponent)).fold(0.0, f64::max)
    }

    /// Partial sum through `q ≤ q_max` for any shorter truncation.
    pub fn partial_at(&self, q_max: u64) -> f64 {
        let k = (q_max as usize).min(self.terms.len());
        crate::numeric::compensated_sum(&self.terms[..k])
    }
}

/// `(M log log N)³ / Q^{1−η}`
pub fn tail_estimate(n: u64, m: u32, q_max: u64) -> f64 {
    (m as f64 * (n as f64).ln().ln()).powi(3) / (q_max as f64).powf(1.0 - ETA)
}

/// `𝔖(N,M;Q) = Σ_{q≤Q} (𝔣(q;N,M)/N)³ c_q(N)`.
pub fn singular_series(
    t: &FactorTable,
    n: u64,
    m: u32,
    q_max: u64,
    coeffs: &CoeffTable,
) -> Result<SingularSeriesResult> {
    if q_max == 0 {
        return Err(invalid("Q must be at least 1"));
    }
    let nf = n as f64;
    let terms = (1..=q_max)
        .into_par_iter()
        .map(|q| {
            let f = frak_f(t, q, nf, m, coeffs)? / nf;
            let c = t.ramanujan_sum(q, n, RamanujanMethod::MobiusFormula)?;
            Ok(f * f * f * c)
        })
        .collect::<Result<Vec<f64>>>()?;
    let partial = crate::numeric::compensated_sum(&terms);
    Ok(SingularSeriesResult { n, m, q_max, partial, tail_estimate: tail_estimate(n, m, q_max), terms })
}

/// `𝔖(N,M;Q)·N²/2`
pub fn predict_r(t: &FactorTable, n: u64, m: u32, q_max: u64, coeffs: &CoeffTable) -> Result<f64> {
    Ok(singular_series(t, n, m, q_max, coeffs)?.partial * (n as f64).powi(2) / 2.0)
}
