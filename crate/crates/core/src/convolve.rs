//! Exact `r_f(N) = Σ_{n₁+n₂+n₃=N} f(n₁)f(n₂)f(n₃)` over positive parts.
//!
//! Two independent routes: a direct two-stage convolution and a
//! two-prime NTT with CRT reconstruction. The direct route is the oracle.

use rayon::prelude::*;

use crate::error::{check_range, invalid, Error, Result};
use crate::ntt::{inv_mod, Ntt, P1, P2};

/// Default ceiling for the `O(N²)` direct route.
pub const DEFAULT_DIRECT_LIMIT: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvolutionMethod {
    Direct,
    Transform,
}

impl ConvolutionMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            ConvolutionMethod::Direct => "direct",
            ConvolutionMethod::Transform => "transform",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TripleCountResult {
    pub n: u64,
    pub value: i128,
    pub method: ConvolutionMethod,
}

/// Loop order for the pair stage; both must give identical counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairOrder {
    /// `c₂[m] = Σ_i f(i) f(m − i)` over all `1 ≤ i < m`.
    Full,
    /// `c₂[m] = 2 Σ_{i < m/2} f(i) f(m − i) + [m even] f(m/2)²`.
    Folded,
}

/// `c₂[m] = Σ_{i+j=m, i,j≥1} f(i) f(j)` for `m ≤ m_max`.
pub fn pair_counts(values: &[i64], m_max: u64, order: PairOrder) -> Result<Vec<i128>> {
    check_range(m_max, 0, values.len().saturating_sub(1) as u64)?;
    let m_max = m_max as usize;
    let out = (0..=m_max)
        .into_par_iter()
        .map(|m| {
            if m < 2 {
                return 0;
            }
            match order {
                PairOrder::Full => (1..m).map(|i| values[i] as i128 * values[m - i] as i128).sum(),
                PairOrder::Folded => {
                    let mut s: i128 = 0;
                    for i in 1..m.div_ceil(2) {
                        s += values[i] as i128 * values[m - i] as i128;
                    }
                    s *= 2;
                    if m % 2 == 0 {
                        s += values[m / 2] as i128 * values[m / 2] as i128;
                    }
                    s
                }
            }
        })
        .collect();
    Ok(out)
}

/// Direct `O(N²)` evaluation of `r_f(N)`; `values[n]` holds `f(n)`.
pub fn r_omega_direct(values: &[i64], n: u64) -> Result<i128> {
    check_range(n, 0, values.len().saturating_sub(1) as u64)?;
    if n < 3 {
        return Ok(0);
    }
    let c2 = pair_counts(values, n - 1, PairOrder::Folded)?;
    let n = n as usize;
    Ok((1..=n - 2).map(|k| c2[n - k] * values[k] as i128).sum())
}

/// Direct evaluation of `r_f(n)` for every `n ≤ n_max`, sharing one pair
/// stage. Index `n` of the result holds `r_f(n)`.
pub fn r_omega_direct_table(values: &[i64], n_max: u64) -> Result<Vec<i128>> {
    let c2 = pair_counts(values, n_max, PairOrder::Folded)?;
    let n_max = n_max as usize;
    Ok((0..=n_max)
        .into_par_iter()
        .map(|n| if n < 3 { 0 } else { (1..=n - 2).map(|k| c2[n - k] * values[k] as i128).sum() })
        .collect())
}

/// `r_f(n)` for all `n ≤ n_max` (index `n` holds `r_f(n)`) through two
/// exact modular transforms and CRT.
///
/// Fails with [`Error::Precision`] when `max|f|³·N²/2` could reach half the
/// modulus product, since reconstruction would then be ambiguous.
pub fn r_omega_transform(values: &[i64], n_max: u64) -> Result<Vec<i128>> {
    check_range(n_max, 0, values.len().saturating_sub(1) as u64)?;
    let len = n_max as usize + 1;
    let vals = &values[..len];
    let max_abs = vals.iter().skip(1).map(|v| v.unsigned_abs()).max().unwrap_or(0) as f64;
    let bound = max_abs.powi(3) * (n_max as f64).powi(2) / 2.0;
    let modulus = P1.p as f64 * P2.p as f64;
    if bound >= modulus / 2.0 {
        return Err(Error::Precision(format!("|r| may reach {bound:.3e}, above the CRT range {:.3e}", modulus / 2.0)));
    }
    let size = (2 * len).next_power_of_two();
    let (r1, r2) =
        rayon::join(|| cube_mod(&Ntt::new(P1), vals, len, size), || cube_mod(&Ntt::new(P2), vals, len, size));
    let p1 = P1.p as u128;
    let p2 = P2.p as u128;
    let p1_inv = inv_mod(P1.p % P2.p, P2.p) as u128;
    let full = p1 * p2;
    let mut out = Vec::with_capacity(len);
    for (a, b) in r1.into_iter().zip(r2) {
        let (a, b) = (a as u128, b as u128);
        let diff = (b + p2 - a % p2) % p2;
        let k = mul_mod_u128(diff, p1_inv, p2);
        let x = a + p1 * k;
        let v = if x > full / 2 { -((full - x) as i128) } else { x as i128 };
        out.push(v);
    }
    for v in out.iter_mut().take(3.min(len)) {
        *v = 0;
    }
    Ok(out)
}

fn mul_mod_u128(a: u128, b: u128, m: u128) -> u128 {
    // a, b < m < 2^62, so the product fits.
    a * b % m
}

/// Truncated cube of the series `Σ f(n) xⁿ` modulo one prime: returns
/// coefficients `0..len` of `(Σ_{n≥1} f(n) xⁿ)³`.
fn cube_mod(ntt: &Ntt, vals: &[i64], len: usize, size: usize) -> Vec<u64> {
    let m = &ntt.m;
    let p = m.modulus();
    let to_residue = |v: i64| -> u64 {
        if v >= 0 {
            m.enter(v as u64 % p)
        } else {
            m.enter((p - (v.unsigned_abs() % p)) % p)
        }
    };
    let mut f = vec![0u64; size];
    for (slot, &v) in f.iter_mut().zip(vals).skip(1) {
        *slot = to_residue(v);
    }
    ntt.transform(&mut f, false);
    let mut c2: Vec<u64> = f.iter().map(|&x| m.mul(x, x)).collect();
    ntt.transform(&mut c2, true);
    for x in c2[len..].iter_mut() {
        *x = 0;
    }
    ntt.transform(&mut c2, false);
    for (x, &y) in c2.iter_mut().zip(&f) {
        *x = m.mul(*x, y);
    }
    ntt.transform(&mut c2, true);
    c2.truncate(len);
    c2.into_iter().map(|x| m.leave(x)).collect()
}

/// `r_f(N)` by the selected route.
pub fn triple_count(values: &[i64], n: u64, method: ConvolutionMethod) -> Result<TripleCountResult> {
    let value = match method {
        ConvolutionMethod::Direct => r_omega_direct(values, n)?,
        ConvolutionMethod::Transform => {
            if n < 3 {
                0
            } else {
                r_omega_transform(values, n)?[n as usize]
            }
        }
    };
    if value < 0 && values.iter().all(|&v| v >= 0) {
        return Err(invalid("negative count from non-negative weights"));
    }
    Ok(TripleCountResult { n, value, method })
}
