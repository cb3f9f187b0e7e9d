//! Additive functions given by their values on prime powers.

use std::fmt;
use std::sync::Arc;

use crate::error::{check_range, invalid, Result};
use crate::ntcore::FactorTable;

type Rule = dyn Fn(u64, u32) -> f64 + Send + Sync;

/// An additive arithmetic function, `f(n) = Σ_{p^α ‖ n} rule(p, α)`.
///
/// Non-additive functions (the von Mangoldt function, say) cannot be
/// expressed here at all, since the value at `n` is always assembled
/// from the prime-power rule.
#[derive(Clone)]
pub struct AdditiveFunction {
    name: String,
    rule: Arc<Rule>,
    totally_additive: bool,
}

impl fmt::Debug for AdditiveFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AdditiveFunction")
            .field("name", &self.name)
            .field("totally_additive", &self.totally_additive)
            .finish()
    }
}

impl AdditiveFunction {
    /// Builds a function from a prime-power rule. When `totally_additive`
    /// is set the rule is spot-checked for `rule(p, ℓ) = ℓ·rule(p, 1)`.
    pub fn new<F>(name: impl Into<String>, rule: F, totally_additive: bool) -> Result<Self>
    where
        F: Fn(u64, u32) -> f64 + Send + Sync + 'static,
    {
        if totally_additive {
            for p in [2u64, 3, 5, 7, 11, 13, 97] {
                let base = rule(p, 1);
                for l in 2..=8 {
                    let v = rule(p, l);
                    if (v - l as f64 * base).abs() > 1e-12 * (1.0 + v.abs()) {
                        return Err(invalid(format!("rule is not totally additive at p={p}, l={l}")));
                    }
                }
            }
        }
        Ok(Self { name: name.into(), rule: Arc::new(rule), totally_additive })
    }

    /// `Ω_k(n) = Σ α_i^k`; `k = 0` is `ω`, `k = 1` is `Ω`.
    pub fn omega_k(k: u32) -> Self {
        let name = match k {
            0 => "omega".to_string(),
            1 => "Omega".to_string(),
            _ => format!("Omega_{k}"),
        };
        Self { name, rule: Arc::new(move |_p, l| (l as f64).powi(k as i32)), totally_additive: k == 1 }
    }

    pub fn big_omega() -> Self {
        Self::omega_k(1)
    }

    pub fn small_omega() -> Self {
        Self::omega_k(0)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_totally_additive(&self) -> bool {
        self.totally_additive
    }

    #[inline]
    pub fn rule(&self, p: u64, l: u32) -> f64 {
        (self.rule)(p, l)
    }

    pub fn eval(&self, t: &FactorTable, n: u64) -> Result<f64> {
        let f = t.factorize(n)?;
        Ok(f.pairs.iter().map(|&(p, a)| self.rule(p, a)).sum())
    }

    /// Membership in the class with `f(p) = 1` at every prime `p ≤ t.limit`.
    pub fn is_in_f0(&self, t: &FactorTable) -> bool {
        t.primes().iter().all(|&p| self.rule(p as u64, 1) == 1.0)
    }

    /// `F_f(X) = max_{p^ℓ ≤ X} |f(p^ℓ)|`.
    pub fn cap(&self, t: &FactorTable, x: u64) -> Result<f64> {
        if x < 2 {
            return Err(invalid("cap_F needs X >= 2"));
        }
        check_range(x, 2, t.limit())?;
        let mut best = 0.0f64;
        for &p in &t.primes()[..t.prime_pi(x)] {
            let p = p as u64;
            let mut pl = p;
            let mut l = 1;
            loop {
                best = best.max(self.rule(p, l).abs());
                match pl.checked_mul(p) {
                    Some(next) if next <= x => {
                        pl = next;
                        l += 1;
                    }
                    _ => break,
                }
            }
        }
        Ok(best)
    }

    /// Materializes `f(1..=n)`.
    pub fn value_table(&self, t: &FactorTable, n: u64) -> Result<ValueTable> {
        check_range(n, 1, t.limit())?;
        let len = n as usize;
        let mut data = vec![0.0f64; len + 1];
        for m in 2..=len {
            let p = t.spf(m as u64) as usize;
            let mut rest = m / p;
            let mut a = 1;
            while rest.is_multiple_of(p) {
                rest /= p;
                a += 1;
            }
            data[m] = data[rest] + self.rule(p as u64, a);
        }
        Ok(ValueTable { data })
    }
}

/// `f(0..=N)` with the convention `f(0) = 0`; index `n` holds `f(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueTable {
    data: Vec<f64>,
}

impl ValueTable {
    /// Wraps raw values; `data[0]` must be zero.
    pub fn from_vec(data: Vec<f64>) -> Result<Self> {
        match data.first() {
            None => Err(invalid("value table needs at least index 0")),
            Some(&v) if v != 0.0 => Err(invalid("value table index 0 must hold 0")),
            _ => Ok(Self { data }),
        }
    }

    /// Largest `n` covered.
    pub fn n_max(&self) -> u64 {
        (self.data.len() - 1) as u64
    }

    #[inline]
    pub fn get(&self, n: u64) -> f64 {
        self.data[n as usize]
    }

    /// Values indexed by `n`, including the zero at index 0.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// The table as exact integers, if every entry is integral.
    pub fn to_integers(&self) -> Result<Vec<i64>> {
        self.data
            .iter()
            .map(|&v| {
                if v.fract() == 0.0 && v.abs() < 9.0e15 {
                    Ok(v as i64)
                } else {
                    Err(invalid(format!("value {v} is not an exact integer")))
                }
            })
            .collect()
    }
}
