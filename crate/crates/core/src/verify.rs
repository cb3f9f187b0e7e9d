//! Invariant suite shared by the test targets and the `verify` command.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::additive::AdditiveFunction;
use crate::bounds::{main_bound, refined_bound, simple_bound, upsilon_bound};
use crate::circle::{summatory_omega_ap, u_cube_integral, OmegaTable};
use crate::convolve::{r_omega_direct_table, r_omega_transform};
use crate::diophantine::{dirichlet_approx, farey, farey_len, ArcSystem};
use crate::error::Result;
use crate::expsum::{default_grid_size, exp_sum, exp_sum_grid, power_integral};
use crate::ntcore::{gcd, FactorTable, RamanujanMethod};
use crate::numeric::e;

pub const SUITE_SEED: u64 = 0x5eed_0001;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

struct Scale {
    sieve: u64,
    divisor_q: u64,
    ramanujan: u64,
    partition_q: u64,
    partition_x: u64,
    conv: u64,
    orth: u64,
    dirichlet: usize,
    farey: u64,
}

const QUICK: Scale = Scale {
    sieve: 10_000,
    divisor_q: 1_000,
    ramanujan: 60,
    partition_q: 12,
    partition_x: 10_000,
    conv: 600,
    orth: 120,
    dirichlet: 2_000,
    farey: 40,
};

const FULL: Scale = Scale {
    sieve: 200_000,
    divisor_q: 10_000,
    ramanujan: 200,
    partition_q: 50,
    partition_x: 100_000,
    conv: 2_000,
    orth: 500,
    dirichlet: 100_000,
    farey: 120,
};

fn check(name: &'static str, r: Result<(bool, String)>) -> CheckResult {
    match r {
        Ok((passed, detail)) => CheckResult { name, passed, detail },
        Err(e) => CheckResult { name, passed: false, detail: format!("error: {e}") },
    }
}

/// Runs every invariant; `quick` uses exhaustive small ranges only.
pub fn run_suite(quick: bool) -> Vec<CheckResult> {
    let s = if quick { &QUICK } else { &FULL };
    vec![
        check("sieve_matches_trial_division", sieve(s)),
        check("mobius_divisor_sum", mobius_divisor_sum(s)),
        check("omega_mobius_prime_powers", omega_mobius(s)),
        check("ramanujan_duality", ramanujan(s)),
        check("additivity", additivity(s)),
        check("residue_partition", partition(s)),
        check("grid_matches_direct", grid_direct()),
        check("parseval", parseval()),
        check("orthogonality", orthogonality(s)),
        check("transform_matches_direct", convolution(s)),
        check("dirichlet_contract", dirichlet(s)),
        check("farey_structure", farey_structure(s)),
        check("arc_partition", arc_partition()),
        check("refined_collapses_at_rationals", refined()),
        check("upsilon_one_is_main", upsilon()),
        check("u_cube_full_circle", u_full_circle()),
    ]
}

fn sieve(s: &Scale) -> Result<(bool, String)> {
    let t = FactorTable::new(s.sieve)?;
    let mut bad = 0u64;
    for n in 2..=s.sieve {
        let p = (2..=n).find(|d| n % d == 0 || d * d > n).map(|d| if n % d == 0 { d } else { n }).unwrap();
        if t.spf(n) != p {
            bad += 1;
        }
    }
    Ok((bad == 0, format!("n <= {}: {bad} mismatches", s.sieve)))
}

fn mobius_divisor_sum(s: &Scale) -> Result<(bool, String)> {
    let t = FactorTable::new(s.divisor_q)?;
    let mut bad = 0;
    for q in 1..=s.divisor_q {
        let sum: i64 = t.divisors(q)?.iter().map(|&d| t.mobius(d)).sum::<Result<i64>>()?;
        if sum != i64::from(q == 1) {
            bad += 1;
        }
    }
    Ok((bad == 0, format!("q <= {}: {bad} failures", s.divisor_q)))
}

fn omega_mobius(s: &Scale) -> Result<(bool, String)> {
    let t = FactorTable::new(s.divisor_q)?;
    let mut bad = 0;
    for q in 1..=s.divisor_q {
        let conv =
            t.dirichlet_convolve_point(|d| t.big_omega(d).unwrap() as f64, |d| t.mobius(d).unwrap() as f64, q)?;
        let f = t.factorize(q)?;
        let want = if f.pairs.len() == 1 { 1.0 } else { 0.0 };
        if conv != want {
            bad += 1;
        }
    }
    Ok((bad == 0, format!("q <= {}: {bad} failures", s.divisor_q)))
}

fn ramanujan(s: &Scale) -> Result<(bool, String)> {
    let t = FactorTable::new(s.ramanujan)?;
    let mut worst = 0.0f64;
    for q in 1..=s.ramanujan {
        for n in 1..=s.ramanujan {
            let a = t.ramanujan_sum(q, n, RamanujanMethod::MobiusFormula)?;
            let b = t.ramanujan_sum(q, n, RamanujanMethod::Exponential)?;
            worst = worst.max((a - b).abs());
        }
    }
    // Σ_{(r,q)=g} e(ra/q) = μ(q/g) for (a,q)=1.
    let qmax = s.ramanujan.min(100);
    let mut worst_mu = 0.0f64;
    for q in 1..=qmax {
        for a in (1..=q).filter(|&a| gcd(a, q) == 1) {
            for g in t.divisors(q)? {
                let sum: num_complex::Complex64 =
                    (1..=q).filter(|&r| gcd(r, q) == g).map(|r| e((r * a % q) as f64 / q as f64)).sum();
                worst_mu = worst_mu.max((sum.re - t.mobius(q / g)? as f64).abs()).max(sum.im.abs());
            }
        }
    }
    Ok((worst <= 1e-9 && worst_mu <= 1e-9, format!("max |diff| {worst:.3e}, mobius identity {worst_mu:.3e}")))
}

fn additivity(s: &Scale) -> Result<(bool, String)> {
    let n = s.partition_x;
    let t = FactorTable::new(n)?;
    let mut bad = 0;
    for f in [AdditiveFunction::big_omega(), AdditiveFunction::small_omega(), AdditiveFunction::omega_k(2)] {
        let v = f.value_table(&t, n)?;
        for a in 1..=100u64 {
            for b in 1..=n / a {
                let ok =
                    if gcd(a, b) == 1 || f.is_totally_additive() { v.get(a * b) == v.get(a) + v.get(b) } else { true };
                if !ok {
                    bad += 1;
                }
            }
        }
    }
    Ok((bad == 0, format!("{bad} failures")))
}

fn partition(s: &Scale) -> Result<(bool, String)> {
    let t = FactorTable::new(s.partition_x)?;
    let omega = OmegaTable::new(&t, s.partition_x)?;
    let mut bad = 0;
    for x in [s.partition_x / 7, s.partition_x] {
        let total = omega.prefix_sums(&[x])?[0];
        for q in 1..=s.partition_q {
            let sum: u64 = (1..=q).map(|h| summatory_omega_ap(&t, x, q, h)).sum::<Result<u64>>()?;
            if sum != total {
                bad += 1;
            }
        }
    }
    Ok((bad == 0, format!("q <= {}: {bad} failures", s.partition_q)))
}

fn omega_values(n: u64) -> Result<(Vec<f64>, Vec<i64>)> {
    let t = FactorTable::new(n)?;
    let v = AdditiveFunction::big_omega().value_table(&t, n)?;
    Ok((v.as_slice().to_vec(), v.to_integers()?))
}

fn grid_direct() -> Result<(bool, String)> {
    let n = 1000;
    let (v, _) = omega_values(n)?;
    let k = 4096;
    let grid = exp_sum_grid(&v, k)?;
    let mut worst = 0.0f64;
    for j in (0..k).step_by(37) {
        let d = exp_sum(&v, j as f64 / k as f64, n)?;
        worst = worst.max((d - grid[j]).norm());
    }
    Ok((worst < 1e-8, format!("max |diff| {worst:.3e}")))
}

fn parseval() -> Result<(bool, String)> {
    let (v, ints) = omega_values(10_000)?;
    let mut worst = 0.0f64;
    for n in [100u64, 1000, 10_000] {
        let exact: i64 = ints[1..=n as usize].iter().map(|x| x * x).sum();
        let z = power_integral(&v, n, 2, default_grid_size(n))?;
        worst = worst.max((z.re - exact as f64).abs() / exact as f64);
    }
    Ok((worst <= 1e-6, format!("max relative error {worst:.3e}")))
}

fn orthogonality(s: &Scale) -> Result<(bool, String)> {
    let (v, ints) = omega_values(s.orth)?;
    let direct = r_omega_direct_table(&ints, s.orth)?;
    let mut worst = 0.0f64;
    for n in (3..=s.orth).step_by(((s.orth / 50) as usize).max(1)) {
        let z = power_integral(&v, n, 3, default_grid_size(n))?;
        worst = worst.max((z.re - direct[n as usize] as f64).abs()).max(z.im.abs());
    }
    Ok((worst <= 1e-6, format!("max absolute error {worst:.3e}")))
}

fn convolution(s: &Scale) -> Result<(bool, String)> {
    let (_, ints) = omega_values(s.conv)?;
    let direct = r_omega_direct_table(&ints, s.conv)?;
    let fast = r_omega_transform(&ints, s.conv)?;
    let bad = direct.iter().zip(&fast).filter(|(a, b)| a != b).count();
    Ok((bad == 0, format!("N <= {}: {bad} mismatches", s.conv)))
}

fn dirichlet(s: &Scale) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    let mut bad = 0;
    for _ in 0..s.dirichlet {
        let alpha: f64 = rng.gen();
        for qmax in [10.0, 100.0, 1000.0] {
            let ap = dirichlet_approx(alpha, qmax)?;
            let q = ap.rational.q as f64;
            if q > qmax || !(ap.gap < 1.0 / (q * qmax)) {
                bad += 1;
            }
        }
    }
    Ok((bad == 0, format!("{} draws: {bad} violations", s.dirichlet)))
}

fn farey_structure(s: &Scale) -> Result<(bool, String)> {
    let mut bad = 0;
    for order in 1..=s.farey {
        let f: Vec<_> = farey(order).collect();
        if f.len() as u64 != farey_len(order) {
            bad += 1;
        }
        for w in f.windows(2) {
            if w[1].a as i128 * w[0].q as i128 - w[0].a as i128 * w[1].q as i128 != 1 {
                bad += 1;
            }
        }
    }
    Ok((bad == 0, format!("orders <= {}: {bad} failures", s.farey)))
}

fn arc_partition() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for (n, b) in [(10_000u64, 1.0), (1_000_000, 1.5), (1_000_000, 0.5)] {
        let sys = ArcSystem::new(n, b)?;
        let minor: f64 = sys.minor_intervals().iter().map(|(lo, hi)| hi - lo).sum();
        worst = worst.max((sys.major_measure() + minor - 1.0).abs());
    }
    Ok((worst <= 1e-12, format!("max |measure - 1| {worst:.3e}")))
}

fn refined() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED ^ 1);
    let mut bad = 0;
    for _ in 0..1000 {
        let x: f64 = rng.gen_range(10.0..1e9);
        let y: f64 = rng.gen_range(0.0..1e6);
        let gamma: f64 = rng.gen_range(0.01..1.0);
        let q: u64 = rng.gen_range(1..10_000);
        let a: i64 = rng.gen_range(0..q as i64);
        let alpha = a as f64 / q as f64;
        if refined_bound(x, y, gamma, alpha, a, q).to_bits() != simple_bound(x, y, gamma, q).to_bits() {
            bad += 1;
        }
    }
    Ok((bad == 0, format!("{bad} mismatches")))
}

fn upsilon() -> Result<(bool, String)> {
    let mut bad = 0;
    for x in [1_000u64, 100_000, 10_000_000] {
        for q in [1u64, 7, 100] {
            for delta in [0.1, 0.25, 0.45] {
                if upsilon_bound(x, q, delta, 1.0, 19.0)?.to_bits() != main_bound(x, q, delta, 19.0)?.to_bits() {
                    bad += 1;
                }
            }
        }
    }
    Ok((bad == 0, format!("{bad} mismatches")))
}

fn u_full_circle() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for n in [10u64, 100, 1000] {
        let z = u_cube_integral(n, n as f64, 40_000);
        let want = ((n - 1) * (n - 2) / 2) as f64;
        worst = worst.max((z.re - want).abs() / want);
    }
    Ok((worst <= 1e-6, format!("max relative error {worst:.3e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        for r in run_suite(true) {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }
}
