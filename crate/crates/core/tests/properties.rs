use num_complex::Complex64;
use omega_core::circle::{coprime_omega_sums, summatory_omega_ap, Coeff, CoeffTable, OmegaTable, Provenance};
use omega_core::convolve::{pair_counts, r_omega_direct_table, r_omega_transform, PairOrder};
use omega_core::diophantine::{dirichlet_approx, farey, ArcClass, ArcSystem, Rational};
use omega_core::expsum::{exp_sum, exp_sum_grid, u_sum};
use omega_core::ntcore::{gcd, FactorTable, RamanujanMethod};
use omega_core::numeric::compensated_sum;
use omega_core::AdditiveFunction;
use proptest::prelude::*;
use std::sync::OnceLock;

const LIMIT: u64 = 200_000;

fn table() -> &'static FactorTable {
    static T: OnceLock<FactorTable> = OnceLock::new();
    T.get_or_init(|| FactorTable::new(LIMIT).unwrap())
}

fn omega_values() -> &'static Vec<f64> {
    static V: OnceLock<Vec<f64>> = OnceLock::new();
    V.get_or_init(|| AdditiveFunction::big_omega().value_table(table(), LIMIT).unwrap().as_slice().to_vec())
}

fn naive_sum(values: &[f64], alpha: f64, x: u64) -> Complex64 {
    (1..=x as usize)
        .map(|n| {
            let th = std::f64::consts::TAU * (n as f64 * alpha).rem_euclid(1.0);
            Complex64::new(th.cos(), th.sin()) * values[n]
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn dirichlet_contract(alpha in 0.0f64..1.0, q_max in 1.0f64..1e6) {
        let ap = dirichlet_approx(alpha, q_max).unwrap();
        let r = ap.rational;
        prop_assert!(r.q >= 1 && r.q as f64 <= q_max);
        prop_assert_eq!(gcd(r.a.unsigned_abs(), r.q), 1);
        // Slack for the 62-bit fixed-point reading of alpha.
        prop_assert!(ap.gap <= 1.0 / (r.q as f64 * q_max) + 1e-15, "gap {} q {}", ap.gap, r.q);
    }

    #[test]
    fn rational_is_reduced(a in -10_000i64..10_000, q in 1u64..10_000) {
        let r = Rational::new(a, q).unwrap();
        prop_assert!(r.a == 0 || gcd(r.a.unsigned_abs(), r.q) == 1);
        prop_assert_eq!(r.a as i128 * q as i128, a as i128 * r.q as i128);
    }

    #[test]
    fn farey_neighbours_have_unit_determinant(order in 1u64..60) {
        let fr: Vec<Rational> = farey(order).collect();
        prop_assert_eq!(fr.first().copied(), Some(Rational { a: 0, q: 1 }));
        prop_assert_eq!(fr.last().copied(), Some(Rational { a: 1, q: 1 }));
        for w in fr.windows(2) {
            prop_assert_eq!(w[1].a * w[0].q as i64 - w[0].a * w[1].q as i64, 1);
        }
    }

    #[test]
    fn totally_additive_on_products(a in 1u64..400, b in 1u64..400) {
        let t = table();
        let f = AdditiveFunction::big_omega();
        prop_assert_eq!(f.eval(t, a * b).unwrap(), f.eval(t, a).unwrap() + f.eval(t, b).unwrap());
    }

    #[test]
    fn additive_on_coprime_products(a in 1u64..400, b in 1u64..400, k in 0u32..4) {
        prop_assume!(gcd(a, b) == 1);
        let t = table();
        for f in [AdditiveFunction::small_omega(), AdditiveFunction::omega_k(k)] {
            let lhs = f.eval(t, a * b).unwrap();
            let rhs = f.eval(t, a).unwrap() + f.eval(t, b).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0));
        }
    }

    #[test]
    fn ramanujan_routes_agree(q in 1u64..2000, n in 0u64..100_000) {
        let t = table();
        let m = t.ramanujan_sum(q, n, RamanujanMethod::MobiusFormula).unwrap();
        let x = t.ramanujan_sum(q, n, RamanujanMethod::Exponential).unwrap();
        prop_assert!((m - x).abs() <= 1e-8 * (q as f64), "q={q} n={n}: {m} vs {x}");
        prop_assert_eq!(m, m.round());
    }

    #[test]
    fn residue_classes_partition_the_sum(x in 0u64..5000, q in 1u64..40) {
        let t = table();
        let parts: u64 = (1..=q).map(|h| summatory_omega_ap(t, x, q, h).unwrap()).sum();
        prop_assert_eq!(parts, summatory_omega_ap(t, x, 1, 1).unwrap());
    }

    #[test]
    fn coprime_sums_match_walk(g in 1u64..300, x in 0u64..20_000) {
        let t = table();
        let om = OmegaTable::new(t, 20_000).unwrap();
        let fast = coprime_omega_sums(t, &om, g, &[x]).unwrap()[0];
        let walk: u64 = (1..=g).filter(|&h| gcd(h, g) == 1).map(|h| summatory_omega_ap(t, x, g, h).unwrap()).sum();
        prop_assert_eq!(fast, walk);
    }

    #[test]
    fn exp_sum_matches_naive(alpha in -2.0f64..2.0, x in 1u64..3000) {
        let v = omega_values();
        let s = exp_sum(v, alpha, x).unwrap();
        let d = naive_sum(v, alpha, x);
        prop_assert!((s - d).norm() <= 1e-9 * x as f64, "{s} vs {d}");
    }

    #[test]
    fn exp_sum_symmetries(alpha in 0.0f64..1.0, x in 1u64..3000) {
        let v = omega_values();
        let s = exp_sum(v, alpha, x).unwrap();
        let neg = exp_sum(v, -alpha, x).unwrap();
        prop_assert!((s - neg.conj()).norm() <= 1e-9 * x as f64);
        let total: f64 = v[1..=x as usize].iter().sum();
        prop_assert!(s.norm() <= total + 1e-9 * x as f64);
    }

    #[test]
    fn grid_matches_direct(n in 1usize..500, j_frac in 0.0f64..1.0) {
        let v = &omega_values()[..=n];
        let k = (3 * n + 4).next_power_of_two();
        let grid = exp_sum_grid(v, k).unwrap();
        let j = ((j_frac * k as f64) as usize).min(k - 1);
        let d = naive_sum(v, j as f64 / k as f64, n as u64);
        prop_assert!((grid[j] - d).norm() <= 1e-9 * n as f64);
    }

    #[test]
    fn u_sum_closed_form(beta in -1.0f64..1.0, n in 1u64..2000) {
        let u = u_sum(beta, n);
        let ones = vec![1.0; n as usize + 1];
        let d = naive_sum(&ones, beta, n);
        prop_assert!((u - d).norm() <= 1e-8 * n as f64, "{u} vs {d}");
        let dist = (beta - beta.round()).abs();
        if dist > 0.0 {
            prop_assert!(u.norm() <= (n as f64).min(0.5 / dist) + 1e-9 * n as f64);
        }
    }

    #[test]
    fn transform_matches_direct(vals in prop::collection::vec(-50i64..50, 4..160)) {
        let mut v = vals;
        v[0] = 0;
        let n = (v.len() - 1) as u64;
        let fast = r_omega_transform(&v, n).unwrap();
        let slow = r_omega_direct_table(&v, n).unwrap();
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn pair_orders_agree_with_naive(vals in prop::collection::vec(0i64..20, 3..100)) {
        let mut v = vals;
        v[0] = 0;
        let m = (v.len() - 1) as u64;
        let full = pair_counts(&v, m, PairOrder::Full).unwrap();
        let folded = pair_counts(&v, m, PairOrder::Folded).unwrap();
        prop_assert_eq!(&full, &folded);
        for (s, &c) in full.iter().enumerate() {
            let naive: i128 = (1..s).map(|a| v[a] as i128 * v[s - a] as i128).sum();
            prop_assert_eq!(c, naive);
        }
    }

    #[test]
    fn compensated_sum_is_exact_on_cancellation(xs in prop::collection::vec(-1e6f64..1e6, 1..200)) {
        let mut with_noise = Vec::new();
        for &x in &xs {
            with_noise.push(x);
            with_noise.push(1e16);
            with_noise.push(-1e16);
        }
        let plain = compensated_sum(&xs);
        let noisy = compensated_sum(&with_noise);
        prop_assert!((plain - noisy).abs() <= 1e-9 * plain.abs().max(1.0));
    }

    #[test]
    fn classification_respects_arcs(alpha in 0.0f64..1.0, n in 10_000u64..1_000_000) {
        let sys = ArcSystem::new(n, 1.0).unwrap();
        match sys.classify(alpha).unwrap() {
            ArcClass::Major { q, a, beta } => {
                prop_assert!(q as f64 <= sys.q());
                prop_assert!(beta.abs() <= sys.half_width());
                prop_assert!((alpha - a as f64 / q as f64 - beta).abs() < 1e-12);
            }
            ArcClass::Minor { .. } => {
                for arc in sys.major_arcs() {
                    prop_assert!(alpha < arc.lo || alpha > arc.hi);
                }
            }
        }
    }

    #[test]
    fn coeff_table_json_round_trip(
        entries in prop::collection::btree_map((1u32..3, 1u64..500), (-10.0f64..10.0, -10.0f64..10.0), 0..20)
    ) {
        let mut tab = CoeffTable::new(2, Provenance::UserSupplied).unwrap();
        for (&(j, g), &(b, big_b)) in &entries {
            tab.insert(j, g, Coeff { b, big_b }).unwrap();
        }
        let back = CoeffTable::from_json(&tab.to_json()).unwrap();
        prop_assert_eq!(back, tab);
    }
}
