//! Closed-form exponential-sum bounds (implied constant 1) and an empirical
//! scanner that measures `|S_f(α; X)|` against them.
//!
//! `log` is the natural logarithm throughout. None of the bounds carries a
//! known constant, so the scanner reports raw ratios; they are regression
//! baselines, not checks that a ratio stays below 1.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::additive::AdditiveFunction;
use crate::diophantine::{dirichlet_approx, farey};
use crate::error::{invalid, Result};
use crate::expsum::exp_sum;
use crate::ntcore::{gcd, FactorTable};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundKind {
    /// Bound for additive `f` with `f(p) = 1`, parameter `Δ ∈ (0, 1/2)`.
    MainF0 { delta: f64 },
    /// Same bound with `|α − a/q| ≤ Υ/q²`.
    Upsilon { delta: f64, upsilon: f64 },
    /// Vinogradov's bound for sums over primes.
    Vinogradov,
    /// `X q^{-1/4} (log X)^{5/2} + X^{6/7} (log X)^{19/7} + X^{3/4} q^{1/4} (log X)^{5/2}`
    Drzz,
    /// `X q^{-1/6} (log X)^{7/3} + X^{16/17} (log X)^{39/17} + X^{7/8} q^{1/8} (log X)^{9/4}`
    Semiprime,
    /// `X loglog X / log X + X loglog X (log X)^{3/2} / R^{1/2}`, `2 ≤ R ≤ q ≤ X/R`.
    Madhudas { r: f64 },
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 0.5 {
        Ok(())
    } else {
        Err(invalid(format!("delta = {delta} must lie strictly inside (0, 1/2)")))
    }
}

fn upsilon_core(x: f64, q: f64, delta: f64, scale: f64, ff: f64) -> f64 {
    let lx = x.ln();
    let arcs = x * scale / q.powf(delta) + x.powf(5.0 / 6.0) + x.powf(1.0 - delta) * q.powf(delta);
    arcs * (lx.powi(4) + lx * ff)
}

/// `(X/q^Δ + X^{5/6} + X^{1−Δ} q^Δ)·((log X)⁴ + (log X)·F_f(X))`.
pub fn main_bound(x: u64, q: u64, delta: f64, ff: f64) -> Result<f64> {
    check_delta(delta)?;
    if x < 3 || q == 0 {
        return Err(invalid("main_bound needs X >= 3 and q >= 1"));
    }
    Ok(upsilon_core(x as f64, q as f64, delta, 1.0, ff))
}

/// The bound with the first term scaled by `max{1, Υ^Δ}`; identical to
/// [`main_bound`] whenever `Υ ≤ 1`.
pub fn upsilon_bound(x: u64, q: u64, delta: f64, upsilon: f64, ff: f64) -> Result<f64> {
    check_delta(delta)?;
    if !(upsilon > 0.0) {
        return Err(invalid("upsilon must be positive"));
    }
    if x < 3 || q == 0 {
        return Err(invalid("upsilon_bound needs X >= 3 and q >= 1"));
    }
    let scale = 1f64.max(upsilon.powf(delta));
    Ok(upsilon_core(x as f64, q as f64, delta, scale, ff))
}

/// `x(q + x|αq − a|)^{−γ} + y + x^{1−γ}(q + x|αq − a|)^γ`.
///
/// An `α` equal to the double nearest `a/q` is taken as exactly `a/q`.
pub fn refined_bound(x: f64, y: f64, gamma: f64, alpha: f64, a: i64, q: u64) -> f64 {
    let dev = if alpha == a as f64 / q as f64 { 0.0 } else { alpha.mul_add(q as f64, -(a as f64)).abs() };
    let s = q as f64 + x * dev;
    x * s.powf(-gamma) + y + x.powf(1.0 - gamma) * s.powf(gamma)
}

/// The unrefined form `x q^{−γ} + y + x^{1−γ} q^γ`.
pub fn simple_bound(x: f64, y: f64, gamma: f64, q: u64) -> f64 {
    let q = q as f64;
    x * q.powf(-gamma) + y + x.powf(1.0 - gamma) * q.powf(gamma)
}

/// Evaluates a comparison bound. `ff` is only used by the `F_0` kinds.
pub fn reference_bound(kind: BoundKind, x: u64, q: u64, ff: f64) -> Result<f64> {
    if x < 3 || q == 0 {
        return Err(invalid("bounds need X >= 3 and q >= 1"));
    }
    let xf = x as f64;
    let qf = q as f64;
    let lx = xf.ln();
    Ok(match kind {
        BoundKind::MainF0 { delta } => main_bound(x, q, delta, ff)?,
        BoundKind::Upsilon { delta, upsilon } => upsilon_bound(x, q, delta, upsilon, ff)?,
        BoundKind::Vinogradov => (xf / qf.sqrt() + xf.powf(0.8) + xf.sqrt() * qf.sqrt()) * lx.powi(3),
        BoundKind::Drzz => {
            xf / qf.powf(0.25) * lx.powf(2.5)
                + xf.powf(6.0 / 7.0) * lx.powf(19.0 / 7.0)
                + xf.powf(0.75) * qf.powf(0.25) * lx.powf(2.5)
        }
        BoundKind::Semiprime => {
            xf / qf.powf(1.0 / 6.0) * lx.powf(7.0 / 3.0)
                + xf.powf(16.0 / 17.0) * lx.powf(39.0 / 17.0)
                + xf.powf(7.0 / 8.0) * qf.powf(1.0 / 8.0) * lx.powf(9.0 / 4.0)
        }
        BoundKind::Madhudas { r } => {
            if !(r >= 2.0 && r <= qf && qf <= xf / r) {
                return Err(invalid(format!("madhudas needs 2 <= R <= q <= X/R (R={r}, q={q}, X={x})")));
            }
            let llx = lx.ln();
            xf * llx / lx + xf * llx * lx.powf(1.5) / r.sqrt()
        }
    })
}

/// One measurement of `|S_f(α; X)|` against a bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioRecord {
    pub alpha: f64,
    pub a: i64,
    pub q: u64,
    pub x: u64,
    pub abs_s: f64,
    pub bound: f64,
    pub ratio: f64,
}

/// How the scanner picks its `α` values.
#[derive(Debug, Clone, PartialEq)]
pub enum AlphaSource {
    /// All Farey fractions of the given order.
    Farey(u64),
    /// `count` uniform draws from `[0, 1)` (ChaCha8, seeded).
    Random {
        count: usize,
        seed: u64,
    },
    /// Irrationals with small partial quotients plus points just off
    /// `1/q`, `q ≤ order`, where the Dirichlet denominator jumps.
    ConvergentStress(u64),
    /// Union of several sources.
    Union(Vec<AlphaSource>),
    Explicit(Vec<f64>),
}

impl AlphaSource {
    pub fn alphas(&self) -> Vec<f64> {
        let mut v = match self {
            AlphaSource::Farey(order) => farey(*order).map(|r| r.to_f64()).collect(),
            AlphaSource::Random { count, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (0..*count).map(|_| rng.gen::<f64>()).collect()
            }
            AlphaSource::ConvergentStress(order) => {
                let mut v = vec![
                    (5f64.sqrt() - 1.0) / 2.0,
                    2f64.sqrt() - 1.0,
                    std::f64::consts::E - 2.0,
                    std::f64::consts::PI - 3.0,
                ];
                for q in 1..=*order {
                    let qf = q as f64;
                    v.push((1.0 / qf + 0.5 / (qf * qf)).fract());
                }
                v
            }
            AlphaSource::Union(parts) => parts.iter().flat_map(|p| p.alphas()).collect(),
            AlphaSource::Explicit(v) => v.clone(),
        };
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }
}

/// Scans `|S_f(α; X)| / bound` over every `(X, α)` pair. Each `α` is paired
/// with `dirichlet_approx(α, √X)`, so `(a, q) = 1` and `|α − a/q| ≤ q⁻²`.
/// Records come back sorted by `X`, then `α`, independent of the thread
/// count.
pub fn ratio_scan(
    values: &[f64],
    f: &AdditiveFunction,
    t: &FactorTable,
    xs: &[u64],
    alphas: &AlphaSource,
    kind: BoundKind,
) -> Result<Vec<RatioRecord>> {
    let n_max = values.len().saturating_sub(1) as u64;
    if let Some(&bad) = xs.iter().find(|&&x| x > n_max || x < 3) {
        return Err(invalid(format!("X = {bad} outside [3, {n_max}]")));
    }
    let mut xs = xs.to_vec();
    xs.sort_unstable();
    xs.dedup();
    let caps: Vec<f64> = xs.iter().map(|&x| f.cap(t, x)).collect::<Result<_>>()?;
    let alphas = alphas.alphas();
    let jobs: Vec<(usize, f64)> = (0..xs.len()).flat_map(|i| alphas.iter().map(move |&a| (i, a))).collect();
    jobs.par_iter()
        .map(|&(i, alpha)| {
            let x = xs[i];
            let approx = dirichlet_approx(alpha, (x as f64).sqrt())?;
            let r = approx.rational;
            debug_assert!(gcd(r.a.unsigned_abs(), r.q) == 1);
            let abs_s = exp_sum(values, alpha, x)?.norm();
            let bound = reference_bound(kind, x, r.q, caps[i])?;
            Ok(RatioRecord { alpha, a: r.a, q: r.q, x, abs_s, bound, ratio: abs_s / bound })
        })
        .collect()
}

/// Largest ratio in a scan (0 for an empty scan).
pub fn max_ratio(records: &[RatioRecord]) -> f64 {
    records.iter().map(|r| r.ratio).fold(0.0, f64::max)
}
