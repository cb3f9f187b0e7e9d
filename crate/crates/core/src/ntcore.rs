//! Smallest-prime-factor sieve and the exact arithmetic kernels built on it.
//!
//! Everything downstream (value tables, convolutions, congruence sums)
//! reads factorizations out of a [`FactorTable`], so the table is kept
//! compact: one `u16` per integer. A linear sieve only ever writes
//! `spf[i·p] = p` with `p ≤ spf(i)`, hence `p² ≤ i·p ≤ limit` and every
//! stored factor is below `2^16` as long as `limit < 2^32`. Primes
//! themselves are stored as `0`.

use num_complex::Complex64;

use crate::error::{check_range, invalid, Result};
use crate::numeric::{e, ComplexSum};

/// Largest sieve limit the `u16` encoding supports.
pub const MAX_LIMIT: u64 = u32::MAX as u64;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Prime factorization as `(prime, exponent)` pairs in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    pub pairs: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn is_one(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn value(&self) -> u64 {
        self.pairs.iter().map(|&(p, a)| p.pow(a)).product()
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(p, _)| p)
    }
}

/// Arithmetic functions available through [`FactorTable::arith_value`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithFn {
    Mu,
    Phi,
    BigOmega,
    SmallOmega,
    /// `Ω_k(n) = Σ α_i^k` over the exponents of `n`.
    OmegaK(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RamanujanMethod {
    /// `c_q(n) = Σ_{d | (q,n)} d·μ(q/d)`, exact.
    MobiusFormula,
    /// Direct sum of `e(an/q)` over reduced residues.
    Exponential,
}

/// Smallest-prime-factor table over `[1, limit]`.
#[derive(Clone)]
pub struct FactorTable {
    limit: u64,
    spf: Vec<u16>,
    primes: Vec<u32>,
}

impl std::fmt::Debug for FactorTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FactorTable").field("limit", &self.limit).field("primes", &self.primes.len()).finish()
    }
}

impl FactorTable {
    /// Linear (Euler) sieve, `O(limit)` time.
    pub fn new(limit: u64) -> Result<Self> {
        if limit == 0 {
            return Err(invalid("sieve limit must be at least 1"));
        }
        if limit > MAX_LIMIT {
            return Err(invalid(format!("sieve limit {limit} exceeds {MAX_LIMIT}")));
        }
        let n = limit as usize;
        if n < 2 {
            return Ok(Self { limit, spf: Vec::new(), primes: Vec::new() });
        }
        let mut spf = vec![0u16; n + 1];
        // π(x) < 1.26·x/ln x for x > 1
        let cap = (1.26 * n as f64 / (n as f64).ln()) as usize + 16;
        let mut primes: Vec<u32> = Vec::with_capacity(cap);
        for i in 2..=n {
            let s = if spf[i] == 0 {
                primes.push(i as u32);
                i
            } else {
                spf[i] as usize
            };
            let bound = n / i;
            for &p in &primes {
                let p = p as usize;
                if p > s || p > bound {
                    break;
                }
                spf[i * p] = p as u16;
            }
        }
        Ok(Self { limit, spf, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Primes up to the limit, ascending.
    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Smallest prime factor of `n`, for `2 ≤ n ≤ limit`.
    #[inline]
    pub fn spf(&self, n: u64) -> u64 {
        debug_assert!(n >= 2 && n <= self.limit);
        match self.spf[n as usize] {
            0 => n,
            p => p as u64,
        }
    }

    #[inline]
    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit && self.spf[n as usize] == 0
    }

    /// Number of primes `≤ x` (binary search over the prime list).
    pub fn prime_pi(&self, x: u64) -> usize {
        self.primes.partition_point(|&p| (p as u64) <= x)
    }

    pub(crate) fn check(&self, n: u64) -> Result<()> {
        check_range(n, 1, self.limit)
    }

    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        self.check(n)?;
        Ok(self.factorize_unchecked(n))
    }

    pub(crate) fn factorize_unchecked(&self, mut n: u64) -> Factorization {
        let mut pairs = Vec::new();
        while n > 1 {
            let p = self.spf(n);
            let mut a = 0;
            while n.is_multiple_of(p) {
                n /= p;
                a += 1;
            }
            pairs.push((p, a));
        }
        Factorization { pairs }
    }

    pub fn arith_value(&self, n: u64, which: ArithFn) -> Result<i64> {
        self.check(n)?;
        let f = self.factorize_unchecked(n);
        Ok(match which {
            ArithFn::Mu => mobius_of(&f),
            ArithFn::Phi => totient_of(&f) as i64,
            ArithFn::BigOmega => f.pairs.iter().map(|&(_, a)| a as i64).sum(),
            ArithFn::SmallOmega => f.pairs.len() as i64,
            ArithFn::OmegaK(k) => f.pairs.iter().map(|&(_, a)| (a as i64).pow(k)).sum(),
        })
    }

    pub fn mobius(&self, n: u64) -> Result<i64> {
        self.arith_value(n, ArithFn::Mu)
    }

    pub fn totient(&self, n: u64) -> Result<u64> {
        self.arith_value(n, ArithFn::Phi).map(|v| v as u64)
    }

    pub fn big_omega(&self, n: u64) -> Result<u32> {
        self.arith_value(n, ArithFn::BigOmega).map(|v| v as u32)
    }

    /// Ascending list of divisors.
    pub fn divisors(&self, n: u64) -> Result<Vec<u64>> {
        self.check(n)?;
        Ok(divisors_of(&self.factorize_unchecked(n)))
    }

    pub fn ramanujan_sum(&self, q: u64, n: u64, method: RamanujanMethod) -> Result<f64> {
        if q == 0 {
            return Err(invalid("Ramanujan sum modulus must be positive"));
        }
        self.check(q)?;
        Ok(match method {
            RamanujanMethod::MobiusFormula => {
                let g = gcd(q, n);
                let mut total = 0i64;
                for d in divisors_of(&self.factorize_unchecked(g)) {
                    total += d as i64 * mobius_of(&self.factorize_unchecked(q / d));
                }
                total as f64
            }
            RamanujanMethod::Exponential => {
                let nr = n % q;
                let mut acc = ComplexSum::new();
                for a in 1..=q {
                    if gcd(a, q) == 1 {
                        let r = (a as u128 * nr as u128 % q as u128) as f64;
                        acc.add(e(r / q as f64));
                    }
                }
                acc.value().re
            }
        })
    }

    /// `(f * g)(q) = Σ_{d|q} f(d)·g(q/d)`.
    pub fn dirichlet_convolve_point<F, G>(&self, f: F, g: G, q: u64) -> Result<f64>
    where
        F: Fn(u64) -> f64,
        G: Fn(u64) -> f64,
    {
        let divs = self.divisors(q)?;
        let mut acc = crate::numeric::CompensatedSum::new();
        for d in divs {
            acc.add(f(d) * g(q / d));
        }
        Ok(acc.value())
    }

    /// `σ_s(q) = Σ_{d|q} d^s`.
    pub fn sigma(&self, q: u64, s: f64) -> Result<f64> {
        let divs = self.divisors(q)?;
        Ok(divs.iter().map(|&d| (d as f64).powf(s)).sum())
    }

    /// `ρ(s; z, q) = Π_{p|q} (1 − z/p^s)`.
    pub fn rho(&self, s: f64, z: Complex64, q: u64) -> Result<Complex64> {
        self.check(q)?;
        let f = self.factorize_unchecked(q);
        Ok(f.primes().fold(Complex64::new(1.0, 0.0), |acc, p| acc * (1.0 - z / (p as f64).powf(s))))
    }
}

pub(crate) fn mobius_of(f: &Factorization) -> i64 {
    if f.pairs.iter().any(|&(_, a)| a > 1) {
        0
    } else if f.pairs.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub(crate) fn totient_of(f: &Factorization) -> u64 {
    f.pairs.iter().map(|&(p, a)| (p - 1) * p.pow(a - 1)).product()
}

pub(crate) fn divisors_of(f: &Factorization) -> Vec<u64> {
    let mut divs = vec![1u64];
    for &(p, a) in &f.pairs {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..a {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(n: u64) -> FactorTable {
        FactorTable::new(n).unwrap()
    }

    fn trial_division_is_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn small_tables() {
        assert_eq!(table(10).primes(), &[2, 3, 5, 7]);
        let t1 = table(1);
        assert!(t1.primes().is_empty());
        assert_eq!(t1.factorize(1).unwrap(), Factorization::default());
        assert_eq!(table(100).primes().len(), 25);
        assert!(FactorTable::new(0).is_err());
    }

    #[test]
    fn spf_invariants_match_trial_division() {
        let t = table(5000);
        for n in 2..=5000u64 {
            let p = t.spf(n);
            assert!(trial_division_is_prime(p) && n % p == 0, "n={n}");
            assert!((2..p).all(|d| !n.is_multiple_of(d)));
            assert_eq!(t.is_prime(n), trial_division_is_prime(n));
            assert_eq!(p == n, trial_division_is_prime(n));
        }
        let listed: Vec<u64> = (2..=5000).filter(|&n| t.spf(n) == n).collect();
        let primes: Vec<u64> = t.primes().iter().map(|&p| p as u64).collect();
        assert_eq!(listed, primes);
    }

    #[test]
    fn factorize_examples() {
        let t = table(100);
        assert_eq!(t.factorize(12).unwrap().pairs, vec![(2, 2), (3, 1)]);
        assert_eq!(t.factorize(97).unwrap().pairs, vec![(97, 1)]);
        assert!(t.factorize(1).unwrap().is_one());
        assert!(t.factorize(0).is_err());
        assert!(t.factorize(101).is_err());
        for n in 1..=100 {
            assert_eq!(t.factorize(n).unwrap().value(), n);
        }
    }

    #[test]
    fn arithmetic_values() {
        let t = table(100);
        assert_eq!(t.arith_value(12, ArithFn::BigOmega).unwrap(), 3);
        assert_eq!(t.arith_value(12, ArithFn::SmallOmega).unwrap(), 2);
        assert_eq!(t.arith_value(12, ArithFn::OmegaK(2)).unwrap(), 5);
        assert_eq!(t.arith_value(6, ArithFn::Mu).unwrap(), 1);
        assert_eq!(t.arith_value(12, ArithFn::Phi).unwrap(), 4);
        assert_eq!(t.arith_value(1, ArithFn::BigOmega).unwrap(), 0);
        assert_eq!(t.arith_value(1, ArithFn::SmallOmega).unwrap(), 0);
        assert_eq!(t.arith_value(1, ArithFn::Mu).unwrap(), 1);
        assert_eq!(t.arith_value(1, ArithFn::Phi).unwrap(), 1);
        // Ω_0 = ω and Ω_1 = Ω
        for n in 1..=100 {
            assert_eq!(t.arith_value(n, ArithFn::OmegaK(0)).unwrap(), t.arith_value(n, ArithFn::SmallOmega).unwrap());
            assert_eq!(t.arith_value(n, ArithFn::OmegaK(1)).unwrap(), t.arith_value(n, ArithFn::BigOmega).unwrap());
        }
        assert!(t.arith_value(0, ArithFn::Mu).is_err());
    }

    #[test]
    fn divisor_lists() {
        let t = table(100);
        assert_eq!(t.divisors(12).unwrap(), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(t.divisors(1).unwrap(), vec![1]);
        assert_eq!(t.divisors(97).unwrap(), vec![1, 97]);
        for n in 1..=100u64 {
            let brute: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
            assert_eq!(t.divisors(n).unwrap(), brute);
        }
    }

    #[test]
    fn ramanujan_examples() {
        let t = table(100);
        for n in 0..20 {
            assert_eq!(t.ramanujan_sum(1, n, RamanujanMethod::MobiusFormula).unwrap(), 1.0);
        }
        // brute force: a ∈ {1, 5}, e(6a/6) = 1
        assert_eq!(t.ramanujan_sum(6, 6, RamanujanMethod::MobiusFormula).unwrap(), 2.0);
        assert!((t.ramanujan_sum(6, 6, RamanujanMethod::Exponential).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(t.ramanujan_sum(4, 3, RamanujanMethod::MobiusFormula).unwrap(), 0.0);
        assert!(t.ramanujan_sum(4, 3, RamanujanMethod::Exponential).unwrap().abs() < 1e-12);
        assert!(t.ramanujan_sum(0, 3, RamanujanMethod::MobiusFormula).is_err());
        // c_q(0) = φ(q)
        assert_eq!(t.ramanujan_sum(12, 0, RamanujanMethod::MobiusFormula).unwrap(), 4.0);
    }

    #[test]
    fn dirichlet_convolution_of_omega_and_mu() {
        let t = table(200);
        let omega = |n: u64| t.big_omega(n).unwrap() as f64;
        let mu = |n: u64| t.mobius(n).unwrap() as f64;
        assert_eq!(t.dirichlet_convolve_point(omega, mu, 6).unwrap(), 0.0);
        assert_eq!(t.dirichlet_convolve_point(omega, mu, 4).unwrap(), 1.0);
        for &p in t.primes() {
            assert_eq!(t.dirichlet_convolve_point(omega, mu, p as u64).unwrap(), 1.0);
        }
        // Ω * μ is the indicator of prime powers
        for q in 2..=200u64 {
            let pp = t.factorize(q).unwrap().pairs.len() == 1;
            assert_eq!(t.dirichlet_convolve_point(omega, mu, q).unwrap(), pp as i32 as f64);
        }
    }

    #[test]
    fn sigma_and_rho() {
        let t = table(100);
        assert_eq!(t.sigma(4, -1.0).unwrap(), 1.75);
        assert_eq!(t.sigma(12, 0.0).unwrap(), 6.0);
        let direct = 1.0 + 2f64.powf(-0.5) + 3f64.powf(-0.5) + 6f64.powf(-0.5);
        assert!((t.sigma(6, -0.5).unwrap() - direct).abs() < 1e-15);
        assert!((direct - 2.6928).abs() < 1e-4);
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(t.rho(1.0, one, 1).unwrap(), one);
        assert!((t.rho(1.0, one, 2).unwrap() - 0.5).norm() < 1e-15);
        assert!((t.rho(1.0, one, 12).unwrap() - 1.0 / 3.0).norm() < 1e-15);
        assert!(t.rho(1.0, one, 101).is_err());
    }

    #[test]
    fn mobius_sums_to_indicator() {
        let t = table(10_000);
        for q in 1..=10_000u64 {
            let s: i64 = t.divisors(q).unwrap().iter().map(|&d| t.mobius(d).unwrap()).sum();
            assert_eq!(s, (q == 1) as i64);
        }
    }
}
