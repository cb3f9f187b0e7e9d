//! Quadrature of `F_N(α)³ e(−Nα)` over major and minor arcs, and of the
//! model integrand `u(β)³ e(−Nβ)`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::convolve::r_omega_transform;
use crate::diophantine::ArcSystem;
use crate::error::{invalid, Result};
use crate::expsum::{exp_sum, u_sum};
use crate::ntcore::FactorTable;
use crate::numeric::{e, e_mul, ComplexSum};

use super::coeffs::CoeffTable;
use super::series::frak_f;

/// Nodes per Gauss–Legendre panel.
pub const PANEL_NODES: usize = 16;
/// Smallest node count accepted per major arc.
pub const MIN_ARC_NODES: usize = 64;
/// Largest phase swing of the highest frequency across one panel.
const PANEL_PHASE: f64 = 8.0;

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn panel_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(PANEL_NODES))
}

/// Abscissae and weights of a composite rule with `panels` equal panels.
fn composite_nodes(lo: f64, hi: f64, panels: usize) -> Vec<(f64, f64)> {
    let (x, w) = panel_rule();
    let h = (hi - lo) / panels as f64;
    let mut out = Vec::with_capacity(panels * PANEL_NODES);
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * h;
        for (xi, wi) in x.iter().zip(w) {
            out.push((mid + 0.5 * h * xi, 0.5 * h * wi));
        }
    }
    out
}

/// Composite Gauss–Legendre integral; nodes are evaluated in parallel and
/// summed in a fixed order.
pub fn integrate<F>(lo: f64, hi: f64, panels: usize, f: F) -> Complex64
where
    F: Fn(f64) -> Complex64 + Sync,
{
    let pts = composite_nodes(lo, hi, panels.max(1));
    let vals: Vec<Complex64> = pts.par_iter().map(|&(x, w)| f(x) * w).collect();
    let mut acc = ComplexSum::new();
    for v in vals {
        acc.add(v);
    }
    acc.value()
}

/// Panels needed to keep the phase swing of frequency `2N` per panel
/// below [`PANEL_PHASE`] over an interval of length `len`.
pub fn panels_for(n: u64, len: f64) -> usize {
    ((2.0 * PI * 2.0 * n as f64 * len) / PANEL_PHASE).ceil().max(1.0) as usize
}

/// Node count per major arc that resolves the integrand.
pub fn default_arc_nodes(sys: &ArcSystem) -> usize {
    (panels_for(sys.n(), 2.0 * sys.half_width()) * PANEL_NODES).max(MIN_ARC_NODES)
}

fn u_cube(beta: f64, n: u64) -> Complex64 {
    let u = u_sum(beta, n);
    u * u * u * e_mul(n, -beta)
}

/// `∫_{−w}^{w} u(β)³ e(−Nβ) dβ` with `w = min(Q/N, 1/2)` and about `k`
/// nodes (rounded up to whole panels).
pub fn u_cube_integral(n: u64, q: f64, k: usize) -> Complex64 {
    let w = (q / n as f64).min(0.5);
    u_cube_window(n, -w, w, k.div_ceil(PANEL_NODES))
}

fn u_cube_window(n: u64, lo: f64, hi: f64, panels: usize) -> Complex64 {
    integrate(lo, hi, panels, |b| u_cube(b, n))
}

/// `F_N(α)³ e(−Nα)` by direct summation.
fn f_cube(values: &[f64], n: u64, alpha: f64) -> Complex64 {
    let f = exp_sum(values, alpha, n).expect("values cover N");
    f * f * f * e_mul(n, -alpha)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArcIntegral {
    pub q: u64,
    pub a: u64,
    pub lo: f64,
    pub hi: f64,
    /// `∫ F_N(α)³ e(−Nα) dα` over the arc.
    pub value: Complex64,
    /// `(𝔣(q;N,M)/N)³ e(−Na/q) ∫ u(β)³ e(−Nβ) dβ` over the same arc.
    pub model: Complex64,
    /// `max |F_N(α) − (𝔣(q;N,M)/N) u(α − a/q)|` over the quadrature nodes.
    pub u_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MajorArcReport {
    pub n: u64,
    pub nodes_per_arc: usize,
    pub total: Complex64,
    pub model_total: Complex64,
    pub arcs: Vec<ArcIntegral>,
}

/// Integrates the true `F_N` over every major arc, alongside the
/// u-approximation for comparison. `k` is the node count per arc.
pub fn major_arc_integral(
    t: &FactorTable,
    values: &[f64],
    sys: &ArcSystem,
    m: u32,
    coeffs: &CoeffTable,
    k: usize,
) -> Result<MajorArcReport> {
    let n = sys.n();
    if (values.len() as u64) <= n {
        return Err(invalid(format!("value table stops at {} < N = {n}", values.len().saturating_sub(1))));
    }
    if k < MIN_ARC_NODES {
        return Err(invalid(format!("{k} nodes per arc is below the minimum {MIN_ARC_NODES}")));
    }
    let panels = k.div_ceil(PANEL_NODES);
    let mut arcs = Vec::new();
    for arc in sys.major_arcs() {
        let center = arc.center();
        let scale = frak_f(t, arc.q, n as f64, m, coeffs)? / n as f64;
        let pts = composite_nodes(arc.lo, arc.hi, panels);
        let evals: Vec<(Complex64, Complex64, f64)> = pts
            .par_iter()
            .map(|&(x, w)| {
                let f = exp_sum(values, x, n).expect("values cover N");
                let beta = x - center;
                let u = u_sum(beta, n);
                let resid = (f - u * scale).norm();
                (f * f * f * e_mul(n, -x) * w, u * u * u * e_mul(n, -beta) * w, resid)
            })
            .collect();
        let (mut v, mut mdl, mut resid) = (ComplexSum::new(), ComplexSum::new(), 0.0f64);
        for (a, b, r) in evals {
            v.add(a);
            mdl.add(b);
            resid = resid.max(r);
        }
        let phase = e(-((n % arc.q) as f64 * arc.a as f64 % arc.q as f64) / arc.q as f64);
        arcs.push(ArcIntegral {
            q: arc.q,
            a: arc.a,
            lo: arc.lo,
            hi: arc.hi,
            value: v.value(),
            model: mdl.value() * phase * scale.powi(3),
            u_residual: resid,
        });
    }
    let mut total = ComplexSum::new();
    let mut model_total = ComplexSum::new();
    for a in &arcs {
        total.add(a.value);
        model_total.add(a.model);
    }
    Ok(MajorArcReport {
        n,
        nodes_per_arc: panels * PANEL_NODES,
        total: total.value(),
        model_total: model_total.value(),
        arcs,
    })
}

/// `∫ F_N(α)³ e(−Nα) dα` over the minor intervals, with panel counts
/// chosen from each interval's length.
pub fn minor_arc_integral(values: &[f64], sys: &ArcSystem) -> Result<Complex64> {
    let n = sys.n();
    if (values.len() as u64) <= n {
        return Err(invalid(format!("value table stops at {} < N = {n}", values.len().saturating_sub(1))));
    }
    let mut acc = ComplexSum::new();
    for (lo, hi) in sys.minor_intervals() {
        acc.add(integrate(lo, hi, panels_for(n, hi - lo), |x| f_cube(values, n, x)));
    }
    Ok(acc.value())
}

/// Coefficients of `(Σ_{1≤n≤N} f(n) xⁿ)³` up to degree `3N`.
pub fn cube_coefficients(values: &[i64], n: u64) -> Result<Vec<i128>> {
    let mut ext = values[..=n as usize].to_vec();
    ext.resize(3 * n as usize + 1, 0);
    r_omega_transform(&ext, 3 * n)
}

/// `∫_lo^hi F_N(α)³ e(−Nα) dα` in closed form from the cube coefficients.
pub fn arc_integral_exact(cube: &[i128], n: u64, lo: f64, hi: f64) -> Complex64 {
    let mut acc = ComplexSum::new();
    for (k, &c) in cube.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let d = k as i64 - n as i64;
        let term = if d == 0 {
            Complex64::new(hi - lo, 0.0)
        } else {
            let df = d as f64;
            let (a, b) = (e_signed(d, hi), e_signed(d, lo));
            (a - b) / Complex64::new(0.0, 2.0 * PI * df)
        };
        acc.add(term * c as f64);
    }
    acc.value()
}

fn e_signed(d: i64, x: f64) -> Complex64 {
    let z = e_mul(d.unsigned_abs(), x);
    if d < 0 {
        z.conj()
    } else {
        z
    }
}

#[cfg(test)]
mod tests {
    use super::super::coeffs::{Coeff, Provenance};
    use super::*;
    use crate::additive::AdditiveFunction;
    use crate::convolve::r_omega_direct;

    fn omega(n: u64) -> (FactorTable, Vec<f64>, Vec<i64>) {
        let t = FactorTable::new(n).unwrap();
        let v = AdditiveFunction::big_omega().value_table(&t, n).unwrap();
        let ints = v.to_integers().unwrap();
        (t, v.as_slice().to_vec(), ints)
    }

    fn unit_table(q: u64) -> CoeffTable {
        let mut c = CoeffTable::new(1, Provenance::UserSupplied).unwrap();
        for g in 1..=q {
            c.insert(1, g, Coeff { b: 1.0, big_b: 1.0 }).unwrap();
        }
        c
    }

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let (x, w) = gauss_legendre(16);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        for deg in 0..32u32 {
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg + 1) as f64 };
            assert!((got - want).abs() < 1e-13, "deg {deg}: {got} vs {want}");
        }
    }

    #[test]
    fn full_circle_counts_triples() {
        let z = u_cube_integral(10, 10.0, 16 * 64);
        assert!((z.re - 36.0).abs() < 1e-9 && z.im.abs() < 1e-9, "{z}");
        let n = 1000;
        let z = u_cube_integral(n, 1e9, 10_000);
        let want = ((n - 1) * (n - 2) / 2) as f64;
        assert!((z.re - want).abs() < 1e-3 * want, "{z}");
    }

    #[test]
    fn exact_arc_integral_matches_quadrature() {
        let (_, vals, ints) = omega(300);
        let n = 300;
        let cube = cube_coefficients(&ints, n).unwrap();
        let full = arc_integral_exact(&cube, n, 0.0, 1.0);
        assert!((full.re - r_omega_direct(&ints, n).unwrap() as f64).abs() < 1e-6);
        let (lo, hi) = (0.1, 0.13);
        let quad = integrate(lo, hi, panels_for(n, hi - lo) * 2, |x| f_cube(&vals, n, x));
        let exact = arc_integral_exact(&cube, n, lo, hi);
        assert!((quad - exact).norm() < 1e-8 * exact.norm().max(1.0), "{quad} vs {exact}");
    }

    #[test]
    fn decomposition_is_complete() {
        let n = 600;
        let (t, vals, ints) = omega(n);
        let sys = ArcSystem::new(n, 1.0).unwrap();
        let c = unit_table(sys.max_denominator());
        let major = major_arc_integral(&t, &vals, &sys, 1, &c, default_arc_nodes(&sys)).unwrap();
        let minor = minor_arc_integral(&vals, &sys).unwrap();
        let exact = r_omega_direct(&ints, n).unwrap() as f64;
        let sum = major.total + minor;
        assert!((sum.re - exact).abs() < 1e-6 * exact, "{sum} vs {exact}");
        assert!(sum.im.abs() < 1e-6 * exact);
        let cube = cube_coefficients(&ints, n).unwrap();
        for arc in &major.arcs {
            let want = arc_integral_exact(&cube, n, arc.lo, arc.hi);
            assert!((arc.value - want).norm() < 1e-7 * exact, "arc {}/{}", arc.a, arc.q);
        }
    }

    #[test]
    fn small_arc_nodes_rejected() {
        let (t, vals, _) = omega(1000);
        let sys = ArcSystem::new(1000, 1.0).unwrap();
        assert!(major_arc_integral(&t, &vals, &sys, 1, &unit_table(10), 32).is_err());
    }
}
