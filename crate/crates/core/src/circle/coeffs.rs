//! Coefficient tables for the degree-one polynomials
//! `P_{j,g}(y) = b(j,g)·y + B(j,g)` in the congruence-sum expansion
//! `Σ_{n≤x, n≡h (g)} Ω(n) ≈ (x/φ(g)) Σ_{j≤M} P_{j,g}(log log x)/(log x)^{j−1}`.
//!
//! The coefficients are estimated by least squares against exact data,
//! or loaded from a user-supplied JSON document.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::ntcore::FactorTable;

use super::summatory::{coprime_omega_sums_many, OmegaTable};

pub const COEFF_TABLE_VERSION: u32 = 1;

/// Condition numbers above this reject a fit.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Fitted,
    UserSupplied,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coeff {
    /// slope `b(j,g)` in `log log x`
    pub b: f64,
    /// intercept `B(j,g)`
    pub big_b: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoeffTable {
    m: u32,
    entries: BTreeMap<(u32, u64), Coeff>,
    provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
struct EntryDoc {
    j: u32,
    g: u64,
    b: f64,
    #[serde(rename = "B")]
    big_b: f64,
}

#[derive(Serialize, Deserialize)]
struct TableDoc {
    #[serde(default = "default_version")]
    version: u32,
    #[serde(rename = "M")]
    m: u32,
    entries: Vec<EntryDoc>,
    provenance: Provenance,
}

fn default_version() -> u32 {
    COEFF_TABLE_VERSION
}

impl CoeffTable {
    pub fn new(m: u32, provenance: Provenance) -> Result<Self> {
        if m == 0 {
            return Err(invalid("M must be positive"));
        }
        Ok(Self { m, entries: BTreeMap::new(), provenance })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn insert(&mut self, j: u32, g: u64, c: Coeff) -> Result<()> {
        if j == 0 || j > self.m || g == 0 {
            return Err(invalid(format!("entry (j={j}, g={g}) outside 1 <= j <= {}", self.m)));
        }
        self.entries.insert((j, g), c);
        Ok(())
    }

    pub fn get(&self, j: u32, g: u64) -> Result<Coeff> {
        self.entries.get(&(j, g)).copied().ok_or_else(|| Error::Config(format!("no coefficient for (j={j}, g={g})")))
    }

    /// Moduli that carry a complete set `j = 1..=M`.
    pub fn moduli(&self) -> Vec<u64> {
        let mut gs: Vec<u64> = self.entries.keys().map(|&(_, g)| g).collect();
        gs.sort_unstable();
        gs.dedup();
        gs.retain(|&g| (1..=self.m).all(|j| self.entries.contains_key(&(j, g))));
        gs
    }

    /// A copy restricted to `j ≤ m`.
    pub fn truncated(&self, m: u32) -> Result<Self> {
        if m == 0 || m > self.m {
            return Err(invalid(format!("cannot truncate an M={} table to M={m}", self.m)));
        }
        let entries = self.entries.iter().filter(|(&(j, _), _)| j <= m).map(|(&k, &v)| (k, v)).collect();
        Ok(Self { m, entries, provenance: self.provenance })
    }

    /// `P_{j,g}(y)`
    pub fn poly(&self, j: u32, g: u64, y: f64) -> Result<f64> {
        let c = self.get(j, g)?;
        Ok(c.b * y + c.big_b)
    }

    pub fn to_json(&self) -> String {
        let doc = TableDoc {
            version: COEFF_TABLE_VERSION,
            m: self.m,
            entries: self.entries.iter().map(|(&(j, g), c)| EntryDoc { j, g, b: c.b, big_b: c.big_b }).collect(),
            provenance: self.provenance,
        };
        serde_json::to_string_pretty(&doc).expect("coefficient table serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: TableDoc =
            serde_json::from_str(s).map_err(|e| Error::Config(format!("bad coefficient table: {e}")))?;
        if doc.version != COEFF_TABLE_VERSION {
            return Err(Error::Config(format!("unsupported coefficient table version {}", doc.version)));
        }
        let mut t = Self::new(doc.m, doc.provenance)?;
        for e in doc.entries {
            t.insert(e.j, e.g, Coeff { b: e.b, big_b: e.big_b })?;
        }
        Ok(t)
    }
}

/// Fitted table plus per-modulus diagnostics.
#[derive(Debug, Clone)]
pub struct FitReport {
    pub table: CoeffTable,
    /// `(g, ‖residual‖₂ / ‖data‖₂)` in the unnormalized model space.
    pub residuals: Vec<(u64, f64)>,
    /// `(g, condition number)` of the scaled design matrix.
    pub conditions: Vec<(u64, f64)>,
}

/// One exact sample: `sum ≈ (x/φ(g)) Σ_j P_{j,g}(log log x)/(log x)^{j−1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub x: f64,
    pub sum: f64,
}

/// Ordinary least squares for one modulus; returns `(coefficients, relative
/// residual, condition number)` with coefficients ordered
/// `[(b_1, B_1), (b_2, B_2), ...]`.
pub fn fit_model(samples: &[Sample], phi: f64, m: u32) -> Result<(Vec<Coeff>, f64, f64)> {
    if !(1..=2).contains(&m) {
        return Err(invalid("M must be 1 or 2"));
    }
    let cols = 2 * m as usize;
    if samples.len() < cols {
        return Err(Error::Fit(format!("{} samples for {cols} unknowns", samples.len())));
    }
    if let Some(s) = samples.iter().find(|s| !(s.x > std::f64::consts::E)) {
        return Err(Error::Fit(format!("x = {} is too small for log log x", s.x)));
    }
    let rows = samples.len();
    let mut a = DMatrix::<f64>::zeros(rows, cols);
    let mut rhs = DVector::<f64>::zeros(rows);
    for (i, s) in samples.iter().enumerate() {
        let l = s.x.ln();
        let ll = l.ln();
        let scale = s.x / phi;
        for j in 0..m as usize {
            let damp = l.powi(-(j as i32));
            a[(i, 2 * j)] = scale * ll * damp;
            a[(i, 2 * j + 1)] = scale * damp;
        }
        rhs[i] = s.sum;
    }
    // Column equilibration keeps the singular values meaningful.
    let norms: Vec<f64> = (0..cols).map(|c| a.column(c).norm()).collect();
    for (c, &n) in norms.iter().enumerate() {
        if n == 0.0 {
            return Err(Error::Fit("zero design column".into()));
        }
        a.column_mut(c).scale_mut(1.0 / n);
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(cond < MAX_CONDITION) {
        return Err(Error::Fit(format!(
            "design matrix condition number {cond:.3e} exceeds {MAX_CONDITION:.0e}; widen the x grid"
        )));
    }
    let sol = svd.solve(&rhs, 0.0).map_err(|e| Error::Fit(e.to_string()))?;
    let resid = (&a * &sol - &rhs).norm() / rhs.norm().max(f64::MIN_POSITIVE);
    let coeffs = (0..m as usize)
        .map(|j| Coeff { b: sol[2 * j] / norms[2 * j], big_b: sol[2 * j + 1] / norms[2 * j + 1] })
        .collect();
    Ok((coeffs, resid, cond))
}

/// Log-uniform grid from `lo` to `hi` with `per_decade` points per decade,
/// rounded to integers and deduplicated.
pub fn log_grid(lo: u64, hi: u64, per_decade: u32) -> Vec<u64> {
    let (a, b) = ((lo as f64).log10(), (hi as f64).log10());
    let steps = ((b - a) * per_decade as f64).round().max(1.0) as u32;
    let mut v: Vec<u64> =
        (0..=steps).map(|i| 10f64.powf(a + (b - a) * i as f64 / steps as f64).round() as u64).collect();
    v.dedup();
    v
}

/// Upper end of the default fitting grid.
pub const STANDARD_FIT_LIMIT: u64 = 10_000_000;

/// The default grid: 8 points per decade from `10³` to `x_max`.
pub fn standard_grid(x_max: u64) -> Vec<u64> {
    log_grid(1000, x_max, 8)
}

/// Fits moduli `1..=q_max` on [`standard_grid`]`(t.limit())`.
pub fn fit_standard(t: &FactorTable, q_max: u64, m: u32) -> Result<FitReport> {
    let moduli: Vec<u64> = (1..=q_max).collect();
    fit_coeffs(t, &moduli, m, &standard_grid(t.limit()))
}

/// Fits `P_{j,g}` for each modulus from exact congruence sums.
///
/// The data for modulus `g` is the average over all residues coprime to
/// `g` of `Σ_{n≤x, n≡h (g)} Ω(n)`, computed exactly from Ω prefix sums by
/// Möbius inversion over the divisors of `g`.
pub fn fit_coeffs(t: &FactorTable, moduli: &[u64], m: u32, xgrid: &[u64]) -> Result<FitReport> {
    if xgrid.len() < 2 * m as usize {
        return Err(Error::Fit(format!("x grid has {} points", xgrid.len())));
    }
    let lo = *xgrid.iter().min().unwrap();
    let hi = *xgrid.iter().max().unwrap();
    if lo < 3 || (hi as f64) < 100.0 * lo as f64 {
        return Err(Error::Fit(format!("x grid [{lo}, {hi}] must start at 3 or above and span at least two decades")));
    }
    if hi > t.limit() {
        return Err(Error::OutOfRange { value: hi, lo: 1, hi: t.limit() });
    }
    let omega = OmegaTable::new(t, hi)?;
    let mut table = CoeffTable::new(m, Provenance::Fitted)?;
    let mut residuals = Vec::new();
    let mut conditions = Vec::new();
    if let Some(&g) = moduli.iter().find(|&&g| g == 0 || g > t.limit()) {
        return Err(invalid(format!("modulus {g} out of range")));
    }
    let all = coprime_omega_sums_many(t, &omega, moduli, xgrid)?;
    for (&g, sums) in moduli.iter().zip(all) {
        let phi = t.totient(g)? as f64;
        let samples: Vec<Sample> =
            xgrid.iter().zip(&sums).map(|(&x, &s)| Sample { x: x as f64, sum: s as f64 / phi }).collect();
        let (coeffs, resid, cond) = fit_model(&samples, phi, m).map_err(|e| Error::Fit(format!("modulus {g}: {e}")))?;
        for (j, c) in coeffs.into_iter().enumerate() {
            table.insert(j as u32 + 1, g, c)?;
        }
        residuals.push((g, resid));
        conditions.push((g, cond));
    }
    Ok(FitReport { table, residuals, conditions })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_data_is_recovered() {
        let grid = log_grid(1000, 10_000_000, 4);
        for m in 1..=2u32 {
            let truth = [Coeff { b: 0.8, big_b: 1.3 }, Coeff { b: -0.4, big_b: 0.7 }];
            let phi = 4.0;
            let samples: Vec<Sample> = grid
                .iter()
                .map(|&x| {
                    let x = x as f64;
                    let (l, ll) = (x.ln(), x.ln().ln());
                    let v: f64 = (0..m as usize).map(|j| (truth[j].b * ll + truth[j].big_b) / l.powi(j as i32)).sum();
                    Sample { x, sum: x / phi * v }
                })
                .collect();
            let (c, resid, _) = fit_model(&samples, phi, m).unwrap();
            for j in 0..m as usize {
                assert!((c[j].b - truth[j].b).abs() < 1e-8, "m={m} j={j} {:?}", c[j]);
                assert!((c[j].big_b - truth[j].big_b).abs() < 1e-8);
            }
            assert!(resid < 1e-12);
        }
    }

    #[test]
    fn narrow_grids_are_rejected() {
        let t = FactorTable::new(10_000).unwrap();
        let err = fit_coeffs(&t, &[1], 1, &[1000, 2000, 3000]).unwrap_err();
        assert!(matches!(err, Error::Fit(_)));
        let samples: Vec<Sample> = (0..5).map(|_| Sample { x: 1000.0, sum: 5.0 }).collect();
        assert!(matches!(fit_model(&samples, 1.0, 1), Err(Error::Fit(_))));
    }

    #[test]
    fn json_schema() {
        let mut t = CoeffTable::new(2, Provenance::UserSupplied).unwrap();
        t.insert(1, 1, Coeff { b: 1.0, big_b: 1.0346 }).unwrap();
        t.insert(2, 1, Coeff { b: 0.5, big_b: -0.25 }).unwrap();
        t.insert(1, 3, Coeff { b: 2.0 / 3.0, big_b: 0.1 }).unwrap();
        let s = t.to_json();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["M"], 2);
        assert_eq!(v["provenance"], "user-supplied");
        assert_eq!(v["entries"][0]["j"], 1);
        assert_eq!(v["entries"][0]["B"], 1.0346);
        assert_eq!(CoeffTable::from_json(&s).unwrap(), t);
        assert_eq!(t.moduli(), vec![1]);
        let bare = r#"{"M":1,"entries":[{"j":1,"g":1,"b":1.0,"B":1.0}],"provenance":"fitted"}"#;
        assert_eq!(CoeffTable::from_json(bare).unwrap().get(1, 1).unwrap().big_b, 1.0);
        assert!(
            CoeffTable::from_json(r#"{"M":1,"entries":[{"j":2,"g":1,"b":1,"B":1}],"provenance":"fitted"}"#).is_err()
        );
        assert!(matches!(t.get(1, 5), Err(Error::Config(_))));
    }
}
