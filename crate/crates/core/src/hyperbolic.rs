//! Holonomy of hyperbolic pairs of pants in SL(2, R) and geodesic lengths.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::word::CyclicWord;

pub const DET_TOLERANCE: f64 = 1e-12;
pub const PARABOLIC_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Isometry {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Hyperbolic,
    Parabolic,
    Elliptic,
}

impl Isometry {
    pub const IDENTITY: Self = Self { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let m = Self { a, b, c, d };
        if (m.det() - 1.0).abs() > DET_TOLERANCE * (1.0 + m.norm_sq()) {
            return Err(Error::Domain(format!("determinant {} is not 1", m.det())));
        }
        Ok(m)
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    fn norm_sq(&self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = *self;
        let mut acc = Self::IDENTITY;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    pub fn kind(&self) -> Kind {
        let t = self.trace().abs();
        if (t - 2.0).abs() <= PARABOLIC_TOLERANCE {
            Kind::Parabolic
        } else if t > 2.0 {
            Kind::Hyperbolic
        } else {
            Kind::Elliptic
        }
    }

    /// Fixed points on the real line (the `f64::INFINITY` marks ∞).
    pub fn fixed_points(&self) -> Vec<f64> {
        if self.c == 0.0 {
            let mut v = vec![f64::INFINITY];
            if self.a != self.d {
                v.push(self.b / (self.d - self.a));
            }
            return v;
        }
        // c z^2 + (d - a) z - b = 0
        let disc = (self.d - self.a).powi(2) + 4.0 * self.b * self.c;
        if disc < 0.0 {
            return Vec::new();
        }
        let r = disc.sqrt();
        let mut v = vec![(self.a - self.d - r) / (2.0 * self.c), (self.a - self.d + r) / (2.0 * self.c)];
        v.dedup();
        v
    }
}

/// Translation length `2 arccosh(|t|/2)` of an element with trace `t`.
pub fn trace_to_length(t: f64) -> Result<f64> {
    let t = t.abs();
    if t < 2.0 - PARABOLIC_TOLERANCE {
        return Err(Error::Elliptic { trace: t });
    }
    if t <= 2.0 + PARABOLIC_TOLERANCE {
        return Ok(0.0);
    }
    Ok(2.0 * ((t + (t * t - 4.0).sqrt()) / 2.0).ln())
}

/// Cuff lengths of a pair of pants; `0` marks a cusp. Cuff 1 is the curve
/// `a`, cuff 2 is `b`, cuff 3 is `aB`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PantsMetric {
    pub cuffs: [f64; 3],
}

impl PantsMetric {
    pub fn new(l1: f64, l2: f64, l3: f64) -> Result<Self> {
        let cuffs = [l1, l2, l3];
        if cuffs.iter().any(|l| !l.is_finite() || *l < 0.0) {
            return Err(Error::Domain(format!("cuff lengths must be finite and nonnegative: {cuffs:?}")));
        }
        Ok(Self { cuffs })
    }

    pub fn thrice_punctured() -> Self {
        Self { cuffs: [0.0; 3] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolonomyRep {
    pub a: Isometry,
    pub b: Isometry,
}

fn half_trace(l: f64) -> f64 {
    2.0 * (l / 2.0).cosh()
}

impl HolonomyRep {
    pub fn generator(&self, g: usize) -> Isometry {
        match g {
            0 => self.a,
            1 => self.b,
            _ => panic!("pants holonomy has two generators"),
        }
    }

    /// Image of a word under the representation.
    pub fn image(&self, word: &CyclicWord) -> Result<Isometry> {
        if word.rank() != 2 {
            return Err(Error::RankMismatch { expected: 2, found: word.rank() });
        }
        let (a_inv, b_inv) = (self.a.inverse(), self.b.inverse());
        Ok(word.letters().iter().fold(Isometry::IDENTITY, |acc, l| {
            let m = match (l.generator, l.inverse) {
                (0, false) => &self.a,
                (0, true) => &a_inv,
                (_, false) => &self.b,
                (_, true) => &b_inv,
            };
            acc.mul(m)
        }))
    }

    /// Largest deviation of the three cuff traces from the metric.
    pub fn trace_defect(&self, metric: &PantsMetric) -> f64 {
        let third = self.a.mul(&self.b.inverse());
        [self.a, self.b, third]
            .iter()
            .zip(metric.cuffs)
            .map(|(m, l)| (m.trace().abs() - half_trace(l)).abs())
            .fold(0.0, f64::max)
    }
}

/// The holonomy of the thrice-punctured sphere:
/// `A = [[1, 2], [0, 1]]`, `B = [[1, 0], [2, 1]]`.
pub fn thrice_punctured_holonomy() -> HolonomyRep {
    HolonomyRep {
        a: Isometry { a: 1.0, b: 2.0, c: 0.0, d: 1.0 },
        b: Isometry { a: 1.0, b: 0.0, c: 2.0, d: 1.0 },
    }
}

/// Exact trace of `A·Bⁿ` for the thrice-punctured holonomy, in integers.
pub fn thrice_punctured_gamma_trace(n: u64) -> i128 {
    type M = [[i128; 2]; 2];
    let mul = |x: M, y: M| -> M {
        [
            [x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]],
            [x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]],
        ]
    };
    let a: M = [[1, 2], [0, 1]];
    let b: M = [[1, 0], [2, 1]];
    let m = (0..n).fold(a, |acc, _| mul(acc, b));
    m[0][0] + m[1][1]
}

/// Triangular normal form `A = [[λ, x], [0, 1/λ]]`, `B = [[μ, 0], [c, 1/μ]]`
/// with `tr(A B⁻¹) = λ/μ + μ/λ − c x` solved for `c > 0` so that
/// `tr(A B⁻¹) = −2 cosh(ℓ₃/2)`.
pub fn pants_holonomy(metric: &PantsMetric) -> Result<HolonomyRep> {
    let [l1, l2, l3] = metric.cuffs;
    let (lambda, x) = if l1 == 0.0 { (1.0, 2.0) } else { ((l1 / 2.0).exp(), 1.0) };
    let mu = (l2 / 2.0).exp();
    let t3 = half_trace(l3);
    let c = (lambda / mu + mu / lambda + t3) / x;
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::NoRealSolution(metric.cuffs));
    }
    Ok(HolonomyRep {
        a: Isometry::new(lambda, x, 0.0, 1.0 / lambda)?,
        b: Isometry::new(mu, 0.0, c, 1.0 / mu)?,
    })
}

/// Length of the geodesic in the free homotopy class of `word`.
pub fn geodesic_length(rep: &HolonomyRep, word: &CyclicWord) -> Result<f64> {
    trace_to_length(rep.image(word)?.trace())
}

/// Length of `γₙ = a·bⁿ` using a fast matrix power.
pub fn gamma_n_length(rep: &HolonomyRep, n: u64) -> Result<f64> {
    trace_to_length(rep.a.mul(&rep.b.pow(n)).trace())
}

/// `ℓα + n·ℓβ + 2D`: length of the curve running once around `α`, across
/// the orthogeodesic, `n` times around `β`, and back.
pub fn gamma_n_length_bound(l_alpha: f64, l_beta: f64, d: f64, n: u64) -> Result<f64> {
    if l_alpha < 0.0 || l_beta < 0.0 || d < 0.0 {
        return Err(Error::Domain("length bound inputs must be nonnegative".into()));
    }
    Ok(l_alpha + n as f64 * l_beta + 2.0 * d)
}

/// Length of the common perpendicular between cuffs 1 and 2, from the
/// right-angled hexagon with alternate sides `ℓ₁/2, ℓ₂/2, ℓ₃/2`.
pub fn ortho_distance(metric: &PantsMetric) -> Result<f64> {
    let [l1, l2, l3] = metric.cuffs.map(|l| l / 2.0);
    if l1 == 0.0 {
        return Err(Error::CuspedCuff(1));
    }
    if l2 == 0.0 {
        return Err(Error::CuspedCuff(2));
    }
    let ratio = (l3.cosh() + l1.cosh() * l2.cosh()) / (l1.sinh() * l2.sinh());
    Ok(ratio.acosh())
}

/// Distance between the axes of two hyperbolic isometries with disjoint
/// axes, measured in the upper half plane.
pub fn axis_distance(x: &Isometry, y: &Isometry) -> Result<f64> {
    let fx = x.fixed_points();
    let fy = y.fixed_points();
    if fx.len() != 2 || fy.len() != 2 {
        return Err(Error::Domain("both isometries must be hyperbolic".into()));
    }
    // Move one axis to the imaginary axis: send fx[0] to 0 and fx[1] to ∞
    // with z -> (z - p) / (z - q), or a translation when q is ∞.
    let (p, q) = match (fx[0].is_infinite(), fx[1].is_infinite()) {
        (true, _) => (fx[1], f64::INFINITY),
        (_, true) => (fx[0], f64::INFINITY),
        _ => (fx[0], fx[1]),
    };
    let map = |z: f64| if q.is_infinite() { z - p } else { (z - p) / (z - q) };
    let (u, v) = (map(fy[0]), map(fy[1]));
    if u * v <= 0.0 {
        return Err(Error::Domain("axes intersect".into()));
    }
    Ok(((u + v) / (v - u)).abs().acosh())
}

/// `2 log(y/s) + n/y`: the cusp excursion at height `y` over `n` horocyclic
/// turns, starting and ending on the circle `|z| = s`.
pub fn cusp_detour_length(y: f64, s: f64, n: u64) -> Result<f64> {
    if !(s > 0.0 && y >= s) {
        return Err(Error::Domain(format!("need y >= s > 0, got y = {y}, s = {s}")));
    }
    Ok(2.0 * (y / s).ln() + n as f64 / y)
}
