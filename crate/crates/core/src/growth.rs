//! Lower bounds for the simple-lift degree growth functions, certified by
//! the curves `γₙ = a·bⁿ`.
//!
//! `γₙ` crosses itself `n` times and needs a cover of degree `n + 1` to
//! lift simply. A witness for length `L` picks `n` from `L`, exhibits an
//! upper bound (the certificate) for the length of `γₙ`, and is valid only
//! when that certificate does not exceed `L`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cover::{min_simple_lift_degree, LiftSearch};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::hyperbolic::{gamma_n_length, gamma_n_length_bound, ortho_distance, pants_holonomy, thrice_punctured_holonomy, PantsMetric};
use crate::intersection::self_intersection;
use crate::ribbon::pants_base;
use crate::word::{gamma_n, CyclicWord};

/// Largest `n` a cusped witness may carry.
pub const N_CAP: u64 = 1 << 62;

/// Upper end of the threshold scan.
pub const THRESHOLD_SCAN_MAX: u64 = 1_000_000;

/// `f_S(n) >= n + 1`, witnessed by `γₙ`.
pub fn f_s_lower(n: usize) -> (usize, CyclicWord) {
    (n + 1, gamma_n(n))
}

/// The word `a·bⁿ`, kept symbolic so that huge `n` stay representable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GammaWord {
    pub n: u64,
}

impl GammaWord {
    pub fn to_word(self) -> CyclicWord {
        gamma_n(self.n as usize)
    }

    /// Parses the `ab^N` shorthand used in witness records.
    pub fn parse(text: &str) -> Option<Self> {
        let rest = text.strip_prefix("ab^")?;
        rest.parse().ok().map(|n| Self { n })
    }
}

impl fmt::Display for GammaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ab^{}", self.n)
    }
}

impl Serialize for GammaWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GammaWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Self::parse(&text).ok_or_else(|| serde::de::Error::custom(format!("expected ab^N, got {text:?}")))
    }
}

/// How the length certificate of a witness is computed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum Certificate {
    /// `ℓα + n·ℓβ + 2D` with `n = ⌊L/(B+ε)⌋`.
    Compact { bers: f64, eps: f64, l_alpha: f64, l_beta: f64, ortho: f64 },
    /// `B − 2 log s + 1 + 2 log n` with `n = ⌊exp(L/(2+ε))⌋`.
    Cusped { eps: f64, s: f64, bers: f64 },
    /// Exact length `2 arccosh(1 + 2n)` with `n = ⌊exp(L/(2+ε))⌋`.
    ThricePunctured { eps: f64 },
}

impl Certificate {
    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Domain(msg.to_string()));
        match *self {
            Self::Compact { bers, eps, l_alpha, l_beta, ortho } => {
                if !(bers > 0.0 && eps > 0.0) {
                    return bad("B and eps must be positive");
                }
                if !(0.0..=bers).contains(&l_alpha) || !(0.0..=bers).contains(&l_beta) {
                    return bad("cuff lengths must lie in [0, B]");
                }
                if ortho.is_nan() || ortho < 0.0 {
                    return bad("D must be nonnegative");
                }
            }
            Self::Cusped { eps, s, bers } => {
                if !(eps > 0.0 && s > 0.0 && bers >= 0.0) {
                    return bad("need eps > 0, s > 0, B >= 0");
                }
            }
            Self::ThricePunctured { eps } => {
                if eps.is_nan() || eps <= 0.0 {
                    return bad("eps must be positive");
                }
            }
        }
        Ok(())
    }

    /// Real number whose floor is `n(L)`; this is also the recorded lower
    /// bound for `f_ρ(L)`.
    pub fn f_lower(&self, l: f64) -> f64 {
        match *self {
            Self::Compact { bers, eps, .. } => l / (bers + eps),
            Self::Cusped { eps, .. } | Self::ThricePunctured { eps } => (l / (2.0 + eps)).exp(),
        }
    }

    pub fn n_of(&self, l: f64) -> Result<u64> {
        let x = self.f_lower(l).max(0.0).floor();
        if x > N_CAP as f64 {
            return Err(Error::CapExceeded(x));
        }
        Ok(x as u64)
    }

    /// Length certificate for `γₙ`; `None` when undefined (`log 0`).
    pub fn certificate(&self, n: u64) -> Option<f64> {
        match *self {
            Self::Compact { l_alpha, l_beta, ortho, .. } => gamma_n_length_bound(l_alpha, l_beta, ortho, n).ok(),
            Self::Cusped { s, bers, .. } => (n > 0).then(|| bers - 2.0 * s.ln() + 1.0 + 2.0 * (n as f64).ln()),
            Self::ThricePunctured { .. } => Some(2.0 * (1.0 + 2.0 * n as f64).acosh()),
        }
    }

    /// Half-open range of `L` on which `n(L) = k`.
    fn band(&self, k: u64) -> (f64, f64) {
        match *self {
            Self::Compact { bers, eps, .. } => (k as f64 * (bers + eps), (k + 1) as f64 * (bers + eps)),
            Self::Cusped { eps, .. } | Self::ThricePunctured { eps } => {
                let lo = if k == 0 { f64::NEG_INFINITY } else { (2.0 + eps) * (k as f64).ln() };
                (lo, (2.0 + eps) * ((k + 1) as f64).ln())
            }
        }
    }

    /// Least `L` in band `k` carrying a valid witness, if any.
    fn valid_in_band(&self, k: u64) -> Option<f64> {
        let (lo, hi) = self.band(k);
        let cert = self.certificate(k)?;
        let candidate = lo.max(cert);
        (candidate < hi).then_some(candidate)
    }

    /// Least `L` admitting a valid witness.
    pub fn minimal_valid_l(&self) -> Option<f64> {
        const LINEAR: u64 = 100_000;
        if let Some(l) = (0..LINEAR).find_map(|k| self.valid_in_band(k)) {
            return Some(l);
        }
        // Past the linear range the slack hi - certificate is increasing
        // in k, so gallop then bisect on "band k has a valid L".
        let has = |k: u64| self.valid_in_band(k).is_some();
        let mut hi = LINEAR;
        while !has(hi) {
            if hi >= N_CAP / 2 {
                return None;
            }
            hi *= 2;
        }
        let mut lo = hi / 2;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if has(mid) { hi = mid } else { lo = mid }
        }
        self.valid_in_band(hi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthWitness {
    #[serde(rename = "L")]
    pub l: f64,
    pub n: u64,
    pub word: GammaWord,
    pub length_certificate: f64,
    pub degree_bound: u64,
    pub f_lower: f64,
    pub certificate: Certificate,
}

impl GrowthWitness {
    /// Re-derives `n`, the certificate and the bounds from the record.
    pub fn verify(&self) -> bool {
        let Ok(n) = self.certificate.n_of(self.l) else { return false };
        let Some(cert) = self.certificate.certificate(n) else { return false };
        n == self.n
            && self.word.n == n
            && cert == self.length_certificate
            && cert <= self.l
            && self.degree_bound == n + 1
            && self.f_lower == self.certificate.f_lower(self.l)
            && self.f_lower <= self.degree_bound as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum WitnessOutcome {
    Valid(GrowthWitness),
    TooSmallL {
        #[serde(rename = "L")]
        l: f64,
        n: u64,
        length_certificate: Option<f64>,
        minimal_valid_l: Option<f64>,
    },
}

impl WitnessOutcome {
    pub fn witness(&self) -> Option<&GrowthWitness> {
        match self {
            Self::Valid(w) => Some(w),
            Self::TooSmallL { .. } => None,
        }
    }
}

pub fn witness(l: f64, certificate: Certificate) -> Result<WitnessOutcome> {
    certificate.validate()?;
    if !l.is_finite() {
        return Err(Error::Domain("L must be finite".into()));
    }
    let n = certificate.n_of(l)?;
    let cert = certificate.certificate(n);
    match cert {
        Some(c) if c <= l => Ok(WitnessOutcome::Valid(GrowthWitness {
            l,
            n,
            word: GammaWord { n },
            length_certificate: c,
            degree_bound: n + 1,
            f_lower: certificate.f_lower(l),
            certificate,
        })),
        _ => Ok(WitnessOutcome::TooSmallL {
            l,
            n,
            length_certificate: cert,
            minimal_valid_l: certificate.minimal_valid_l(),
        }),
    }
}

/// Witness for a pants with geodesic cuffs `α`, `β` joined by an arc of
/// length `D`.
pub fn compact_witness(l: f64, bers: f64, eps: f64, l_alpha: f64, l_beta: f64, ortho: f64) -> Result<WitnessOutcome> {
    witness(l, Certificate::Compact { bers, eps, l_alpha, l_beta, ortho })
}

/// Witness for a pants with a cusp, `b` winding once around it.
pub fn cusped_witness(l: f64, eps: f64, s: f64, bers: f64) -> Result<WitnessOutcome> {
    witness(l, Certificate::Cusped { eps, s, bers })
}

/// Witness on the thrice-punctured sphere using exact lengths.
pub fn thrice_punctured_witness(l: f64, eps: f64) -> Result<WitnessOutcome> {
    witness(l, Certificate::ThricePunctured { eps })
}

/// `2 arccosh(1 + 2n) − 2 log n`, which decreases to `2 log 4`.
pub fn threshold_defect(n: u64) -> f64 {
    2.0 * (1.0 + 2.0 * n as f64).acosh() - 2.0 * (n as f64).ln()
}

/// Least `n₀` with `2 arccosh(1 + 2n) <= (2 + ε) log n` for every `n` in
/// `[n₀, 10⁶]`.
pub fn find_threshold_n0(eps: f64) -> Result<u64> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::Domain("eps must be positive".into()));
    }
    let holds = |n: u64| 2.0 * (1.0 + 2.0 * n as f64).acosh() <= (2.0 + eps) * (n as f64).ln();
    match (1..=THRESHOLD_SCAN_MAX).rev().find(|&n| !holds(n)) {
        None => Ok(1),
        Some(n) if n == THRESHOLD_SCAN_MAX => Err(Error::NotReached(THRESHOLD_SCAN_MAX)),
        Some(n) => Ok(n + 1),
    }
}

/// Which metric the growth table evaluates lengths in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TableMetric {
    ThricePunctured,
    Pants { cuffs: [f64; 3] },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthRow {
    pub n: u64,
    pub intersection: usize,
    pub deg_lower: u64,
    pub deg_exhaustive: Option<usize>,
    pub length: f64,
    pub certificate: Option<f64>,
}

pub const CSV_HEADER: &str = "n,intersection,deg_lower,deg_exhaustive,length,certificate,L,f_lower";

fn opt<T: fmt::Display>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl GrowthRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},,",
            self.n,
            self.intersection,
            self.deg_lower,
            opt(self.deg_exhaustive),
            self.length,
            opt(self.certificate)
        )
    }
}

impl GrowthWitness {
    pub fn csv(&self) -> String {
        format!(
            "{},,{},,,{},{},{}",
            self.n, self.degree_bound, self.length_certificate, self.l, self.f_lower
        )
    }
}

/// One row per `n` in `0..=n_max`; the exhaustive degree column is filled
/// for `n <= exhaustive_cap`.
pub fn growth_table(n_max: u64, metric: TableMetric, exhaustive_cap: Option<u64>, mode: Execution) -> Result<Vec<GrowthRow>> {
    let base = pants_base();
    let (rep, certify): (_, Box<dyn Fn(u64) -> Option<f64> + Send + Sync>) = match metric {
        TableMetric::ThricePunctured => (
            thrice_punctured_holonomy(),
            Box::new(|n| Certificate::ThricePunctured { eps: 1.0 }.certificate(n)),
        ),
        TableMetric::Pants { cuffs } => {
            let m = PantsMetric::new(cuffs[0], cuffs[1], cuffs[2])?;
            let d = ortho_distance(&m).ok();
            (
                pants_holonomy(&m)?,
                Box::new(move |n| d.and_then(|d| gamma_n_length_bound(cuffs[0], cuffs[1], d, n).ok())),
            )
        }
    };
    let rows = exec::map_ordered((0..=n_max).collect(), mode, |n| -> Result<GrowthRow> {
        let word = gamma_n(n as usize);
        let deg_exhaustive = match exhaustive_cap {
            Some(cap) if n <= cap => match min_simple_lift_degree(&base, &word, n as usize + 2, Execution::Sequential)? {
                LiftSearch::Found(w) => Some(w.degree()),
                LiftSearch::NotFoundUpTo(_) => None,
            },
            _ => None,
        };
        Ok(GrowthRow {
            n,
            intersection: self_intersection(&word, &base)?,
            deg_lower: n + 1,
            deg_exhaustive,
            length: gamma_n_length(&rep, n)?,
            certificate: certify(n),
        })
    });
    rows.into_iter().collect()
}
