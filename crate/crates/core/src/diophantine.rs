//! Rational approximation: continued fractions, Dirichlet's theorem,
//! Farey sequences, and the major/minor arc dissection of `[0, 1]`.

use std::fmt;

use crate::error::{invalid, Result};
use crate::ntcore::gcd;

/// Fixed-point scale for continued-fraction input: `α` is read as
/// `round(frac(α)·2^62) / 2^62`.
pub const FIXED_POINT_BITS: u32 = 62;

/// A reduced fraction `a/q` with `q ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    pub a: i64,
    pub q: u64,
}

impl Rational {
    pub fn new(a: i64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(invalid("denominator must be positive"));
        }
        let g = gcd(a.unsigned_abs(), q).max(1);
        Ok(Self { a: a / g as i64, q: q / g })
    }

    pub fn to_f64(self) -> f64 {
        self.a as f64 / self.q as f64
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.a, self.q)
    }
}

/// Result of [`dirichlet_approx`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Approximation {
    pub rational: Rational,
    /// `|α − a/q|`
    pub gap: f64,
    /// Index of the convergent that was selected.
    pub convergent_index: usize,
}

/// Convergents `p_k/q_k` of `α`, computed from its 62-bit fixed-point image.
pub fn convergents(alpha: f64) -> Vec<Rational> {
    let (int, num) = split_fixed(alpha);
    let den: u128 = 1 << FIXED_POINT_BITS;
    let (mut x, mut y) = (num as u128, den);
    // p_{-1}/q_{-1} = 1/0, p_0/q_0 = int/1
    let (mut p0, mut q0): (i128, i128) = (1, 0);
    let (mut p1, mut q1): (i128, i128) = (int as i128, 1);
    let mut out = vec![Rational { a: int, q: 1 }];
    while x != 0 {
        let c = (y / x) as i128;
        let r = y % x;
        y = x;
        x = r;
        let p2 = c * p1 + p0;
        let q2 = c * q1 + q0;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        out.push(Rational { a: p2 as i64, q: q2 as u64 });
    }
    out
}

fn split_fixed(alpha: f64) -> (i64, u64) {
    let fl = alpha.floor();
    let frac = alpha - fl;
    let scale = (1u64 << FIXED_POINT_BITS) as f64;
    let num = (frac * scale).round() as u64;
    if num >= 1 << FIXED_POINT_BITS {
        (fl as i64 + 1, 0)
    } else {
        (fl as i64, num)
    }
}

/// Dirichlet approximation: reduced `a/q` with `q ≤ Q` and
/// `|α − a/q| < 1/(qQ)`, taken as the last convergent whose denominator
/// does not exceed `Q`.
pub fn dirichlet_approx(alpha: f64, q_max: f64) -> Result<Approximation> {
    if !(q_max >= 1.0) || !alpha.is_finite() {
        return Err(invalid(format!("dirichlet_approx needs Q >= 1 and finite alpha (Q={q_max})")));
    }
    let convs = convergents(alpha);
    let idx = convs.iter().rposition(|r| (r.q as f64) <= q_max).unwrap_or(0);
    let rational = convs[idx];
    Ok(Approximation { rational, gap: gap(alpha, rational), convergent_index: idx })
}

/// `|α − a/q|` with the integer part removed first.
pub fn gap(alpha: f64, r: Rational) -> f64 {
    let fl = alpha.floor();
    let whole = r.a.div_euclid(r.q as i64);
    let rem = r.a.rem_euclid(r.q as i64);
    let shift = fl - whole as f64;
    ((alpha - fl) + shift - rem as f64 / r.q as f64).abs()
}

/// Farey fractions of order `Q` in `[0, 1]`, ascending.
pub fn farey(order: u64) -> Farey {
    Farey { order: order.max(1), cur: Some((0, 1, 1, order.max(1))) }
}

#[derive(Debug, Clone)]
pub struct Farey {
    order: u64,
    cur: Option<(u64, u64, u64, u64)>,
}

impl Iterator for Farey {
    type Item = Rational;

    fn next(&mut self) -> Option<Rational> {
        let (a, b, c, d) = self.cur?;
        let out = Rational { a: a as i64, q: b };
        self.cur = if a == b {
            None
        } else {
            let k = (self.order + b) / d;
            Some((c, d, k * c - a, k * d - b))
        };
        Some(out)
    }
}

/// Number of Farey fractions of order `Q`: `1 + Σ_{q≤Q} φ(q)`.
pub fn farey_len(order: u64) -> u64 {
    1 + (1..=order).map(|q| (1..=q).filter(|&a| gcd(a, q) == 1).count() as u64).sum::<u64>()
}

/// Major/minor arc dissection with `Q = (log N)^B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcSystem {
    n: u64,
    b: f64,
    q: f64,
}

/// One major arc `𝔐(q, a) = [a/q − Q/N, a/q + Q/N] ∩ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MajorArc {
    pub q: u64,
    pub a: u64,
    pub lo: f64,
    pub hi: f64,
}

impl MajorArc {
    pub fn center(&self) -> f64 {
        self.a as f64 / self.q as f64
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArcClass {
    Major { q: u64, a: u64, beta: f64 },
    Minor { q: u64, a: u64, gap: f64 },
}

impl ArcSystem {
    /// Rejects systems where `Q < 1` or where the arcs may overlap
    /// (`2Q³ ≥ N`, the sufficient disjointness condition used here).
    pub fn new(n: u64, b: f64) -> Result<Self> {
        if !(b > 0.0) {
            return Err(invalid("B must be positive"));
        }
        if n < 3 {
            return Err(invalid("N must be at least 3"));
        }
        let q = (n as f64).ln().powf(b);
        if q < 1.0 {
            return Err(invalid(format!("Q = (log N)^B = {q} is below 1")));
        }
        if 2.0 * q * q * q >= n as f64 {
            return Err(invalid(format!(
                "major arcs are not guaranteed disjoint: 2Q^3 = {} >= N = {n}",
                2.0 * q * q * q
            )));
        }
        Ok(Self { n, b, q })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `Q = (log N)^B`
    pub fn q(&self) -> f64 {
        self.q
    }

    /// Half-width `Q/N` of each arc.
    pub fn half_width(&self) -> f64 {
        self.q / self.n as f64
    }

    pub fn max_denominator(&self) -> u64 {
        self.q.floor() as u64
    }

    /// All major arcs, clipped to `[0, 1]`, in ascending order of centre.
    pub fn major_arcs(&self) -> Vec<MajorArc> {
        let w = self.half_width();
        let qmax = self.max_denominator();
        let mut arcs: Vec<MajorArc> = farey(qmax)
            .map(|r| {
                let c = r.to_f64();
                MajorArc { q: r.q, a: r.a as u64, lo: (c - w).max(0.0), hi: (c + w).min(1.0) }
            })
            .collect();
        arcs.sort_by(|x, y| x.lo.total_cmp(&y.lo));
        arcs
    }

    /// Complement of the major arcs in `[0, 1]` as closed intervals.
    pub fn minor_intervals(&self) -> Vec<(f64, f64)> {
        let arcs = self.major_arcs();
        arcs.windows(2).map(|w| (w[0].hi, w[1].lo)).filter(|(lo, hi)| hi > lo).collect()
    }

    pub fn major_measure(&self) -> f64 {
        self.major_arcs().iter().map(MajorArc::len).sum()
    }

    pub fn classify(&self, alpha: f64) -> Result<ArcClass> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(invalid(format!("alpha = {alpha} is outside [0, 1]")));
        }
        let w = self.half_width();
        for q in 1..=self.max_denominator() {
            let a = (alpha * q as f64).round() as u64;
            if gcd(a, q) != 1 {
                continue;
            }
            let beta = alpha - a as f64 / q as f64;
            if beta.abs() <= w {
                return Ok(ArcClass::Major { q, a, beta });
            }
        }
        let approx = dirichlet_approx(alpha, self.n as f64 / self.q)?;
        let r = approx.rational;
        debug_assert!((r.q as f64) > self.q);
        Ok(ArcClass::Minor { q: r.q, a: r.a as u64, gap: approx.gap })
    }
}
