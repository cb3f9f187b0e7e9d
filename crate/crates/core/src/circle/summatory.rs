//! Exact congruence sums of Ω.

use crate::error::{check_range, invalid, Result};
use crate::ntcore::FactorTable;

/// `Σ_{n≤x, n≡h (mod q)} Ω(n)` by walking the progression.
pub fn summatory_omega_ap(t: &FactorTable, x: u64, q: u64, h: u64) -> Result<u64> {
    check_range(x, 0, t.limit())?;
    if q == 0 {
        return Err(invalid("modulus must be positive"));
    }
    check_range(h, 1, q)?;
    let mut s = 0u64;
    let mut n = h;
    while n <= x {
        s += t.big_omega(n)? as u64;
        n += q;
    }
    Ok(s)
}

/// `Ω(n)` for every `n ≤ n_max`, one byte each.
pub struct OmegaTable {
    data: Vec<u8>,
}

impl OmegaTable {
    pub fn new(t: &FactorTable, n_max: u64) -> Result<Self> {
        t.check(n_max)?;
        let len = n_max as usize + 1;
        let mut data = vec![0u8; len];
        for n in 2..len {
            let p = t.spf(n as u64) as usize;
            data[n] = data[n / p] + 1;
        }
        Ok(Self { data })
    }

    pub fn n_max(&self) -> u64 {
        self.data.len() as u64 - 1
    }

    pub fn get(&self, n: u64) -> u32 {
        self.data[n as usize] as u32
    }

    /// `Σ_{n≤x} Ω(n)` at each query point, in one pass.
    pub fn prefix_sums(&self, queries: &[u64]) -> Result<Vec<u64>> {
        let mut order: Vec<usize> = (0..queries.len()).collect();
        order.sort_by_key(|&i| queries[i]);
        let mut out = vec![0u64; queries.len()];
        let mut acc = 0u64;
        let mut n = 0usize;
        for i in order {
            let x = queries[i];
            check_range(x, 0, self.n_max())?;
            while n < x as usize {
                n += 1;
                acc += self.data[n] as u64;
            }
            out[i] = acc;
        }
        Ok(out)
    }
}

/// `Σ_{n≤x, (n,g)=1} Ω(n)` for each `x` in `xs`.
///
/// Uses `Σ_{d|g} μ(d) [Ω(d)⌊x/d⌋ + T(⌊x/d⌋)]` with `T` the Ω prefix sum,
/// which relies on Ω being totally additive.
pub fn coprime_omega_sums(t: &FactorTable, omega: &OmegaTable, g: u64, xs: &[u64]) -> Result<Vec<u64>> {
    Ok(coprime_omega_sums_many(t, omega, &[g], xs)?.pop().unwrap())
}

/// [`coprime_omega_sums`] for several moduli, sharing one prefix pass.
pub fn coprime_omega_sums_many(
    t: &FactorTable,
    omega: &OmegaTable,
    moduli: &[u64],
    xs: &[u64],
) -> Result<Vec<Vec<u64>>> {
    let mut plans = Vec::with_capacity(moduli.len());
    let mut queries = Vec::new();
    for &g in moduli {
        let mut ds = Vec::new();
        for d in t.divisors(g)? {
            let mu = t.mobius(d)?;
            if mu != 0 {
                ds.push((d, mu));
            }
        }
        let offset = queries.len();
        for &x in xs {
            for &(d, _) in &ds {
                queries.push(x / d);
            }
        }
        plans.push((ds, offset));
    }
    let prefix = omega.prefix_sums(&queries)?;
    let mut out = Vec::with_capacity(moduli.len());
    for (ds, offset) in plans {
        let mut sums = Vec::with_capacity(xs.len());
        for (i, &x) in xs.iter().enumerate() {
            let mut s: i128 = 0;
            for (k, &(d, mu)) in ds.iter().enumerate() {
                let term = omega.get(d) as i128 * (x / d) as i128 + prefix[offset + i * ds.len() + k] as i128;
                s += mu as i128 * term;
            }
            sums.push(s as u64);
        }
        out.push(sums);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntcore::gcd;

    #[test]
    fn examples() {
        let t = FactorTable::new(100).unwrap();
        assert_eq!(summatory_omega_ap(&t, 10, 2, 1).unwrap(), 5);
        assert_eq!(summatory_omega_ap(&t, 10, 1, 1).unwrap(), 15);
        assert_eq!(summatory_omega_ap(&t, 2, 5, 3).unwrap(), 0);
        assert!(summatory_omega_ap(&t, 101, 1, 1).is_err());
        assert!(summatory_omega_ap(&t, 10, 3, 0).is_err());
        assert!(summatory_omega_ap(&t, 10, 3, 4).is_err());
    }

    #[test]
    fn residues_partition_the_total() {
        let t = FactorTable::new(100_000).unwrap();
        let omega = OmegaTable::new(&t, 100_000).unwrap();
        for x in [1u64, 17, 1000, 99_999, 100_000] {
            let total = omega.prefix_sums(&[x]).unwrap()[0];
            assert_eq!(summatory_omega_ap(&t, x, 1, 1).unwrap(), total);
            for q in (1..=50).step_by(7) {
                let s: u64 = (1..=q).map(|h| summatory_omega_ap(&t, x, q, h).unwrap()).sum();
                assert_eq!(s, total, "x={x} q={q}");
            }
        }
    }

    #[test]
    fn coprime_sums_match_walk() {
        let t = FactorTable::new(20_000).unwrap();
        let omega = OmegaTable::new(&t, 20_000).unwrap();
        let xs = [3u64, 100, 5_000, 19_999];
        for g in [1u64, 2, 6, 12, 30, 97, 210] {
            let fast = coprime_omega_sums(&t, &omega, g, &xs).unwrap();
            for (&x, &f) in xs.iter().zip(&fast) {
                let slow: u64 =
                    (1..=g).filter(|&h| gcd(h, g) == 1).map(|h| summatory_omega_ap(&t, x, g, h).unwrap()).sum();
                assert_eq!(f, slow, "g={g} x={x}");
            }
        }
    }
}
