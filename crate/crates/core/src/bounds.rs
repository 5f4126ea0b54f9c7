//! Numerics around the perimeter upper bound: the exponent, the shape
//! theorem tail functions, the two auxiliary time solvers with their
//! closed-form brackets, and log-log scaling fits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent of the upper bound on the expected perimeter: 1 - 1/(d(2d+5)+1).
pub fn theorem1_exponent(dim: usize) -> f64 {
    let d = dim as f64;
    1.0 - 1.0 / (d * (2.0 * d + 5.0) + 1.0)
}

/// Shape-theorem constants. They are only known to exist; the defaults of
/// 1.0 are placeholders with no physical meaning.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KestenConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
    pub c3_tilde: f64,
    pub k1: f64,
}

impl Default for KestenConstants {
    fn default() -> Self {
        KestenConstants {
            c1: 1.0,
            c2: 1.0,
            c3: 1.0,
            c4: 1.0,
            c5: 1.0,
            c6: 1.0,
            c3_tilde: 1.0,
            k1: 1.0,
        }
    }
}

impl KestenConstants {
    pub fn validate(&self, dim: usize) -> Result<()> {
        let all = [
            ("c1", self.c1),
            ("c2", self.c2),
            ("c3", self.c3),
            ("c4", self.c4),
            ("c5", self.c5),
            ("c6", self.c6),
            ("c3_tilde", self.c3_tilde),
            ("k1", self.k1),
        ];
        if let Some((name, v)) = all.iter().find(|(_, v)| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::Domain(format!("{name} = {v} must be positive")));
        }
        let needed = minimal_c3_tilde(dim, self.c3);
        if self.c3_tilde < needed {
            return Err(Error::Domain(format!(
                "c3_tilde = {} is below {needed} required by c3 = {}",
                self.c3_tilde, self.c3
            )));
        }
        Ok(())
    }
}

/// The smallest C such that c3 t^{-1/(2d+4)} (log t)^{1/(d+2)} <= C t^{-1/(2d+5)}
/// at every point of a log grid on [1, 1e300]. The ratio of the two sides
/// is c3 (log t)^{1/(d+2)} t^{-1/((2d+4)(2d+5))}, which has a single interior
/// maximum well inside that range for small d.
pub fn minimal_c3_tilde(dim: usize, c3: f64) -> f64 {
    let d = dim as f64;
    let p = 1.0 / (d + 2.0);
    let q = 1.0 / ((2.0 * d + 4.0) * (2.0 * d + 5.0));
    (0..=30_000)
        .map(|i| i as f64 * 0.023) // ln t from 0 to 690
        .map(|ln_t| c3 * ln_t.powf(p) * (-q * ln_t).exp())
        .fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailValues {
    pub f: f64,
    pub g: f64,
    pub h: f64,
}

/// f(t) = C3 t^{-1/(2d+4)} (log t)^{1/(d+2)},
/// g(t) = C1 t^{2d} exp(-C2 t^{1/4}),
/// h(t) = C4 t^d exp(-C5 t^{(d+1)/(2d+4)} (log t)^{1/(d+2)}).
pub fn tail_functions(t: f64, dim: usize, c: &KestenConstants) -> Result<TailValues> {
    if !(t > 1.0) || !t.is_finite() {
        return Err(Error::Domain(format!("tail functions need t > 1, got {t}")));
    }
    let d = dim as f64;
    let log_pow = t.ln().powf(1.0 / (d + 2.0));
    Ok(TailValues {
        f: c.c3 * t.powf(-1.0 / (2.0 * d + 4.0)) * log_pow,
        g: c.c1 * t.powf(2.0 * d) * (-c.c2 * t.powf(0.25)).exp(),
        h: c.c4 * t.powf(d) * (-c.c5 * t.powf((d + 1.0) / (2.0 * d + 4.0)) * log_pow).exp(),
    })
}

/// Root of an increasing function on [lo, hi] by bisection until the
/// interval cannot shrink further in floating point.
fn bisect(mut lo: f64, mut hi: f64, phi: impl Fn(f64) -> f64) -> f64 {
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if phi(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if phi(hi).abs() < phi(lo).abs() {
        hi
    } else {
        lo
    }
}

/// Below this `s1` the t1 bracket is not expected to hold.
pub const T1_REGIME: f64 = 100.0;

/// Solves t (1 + t^{-1/4}) = s1 and checks
/// s1 - s1^{3/4} < t1 < s1 - s1^{3/4} + (3/4) s1^{1/2}.
pub fn solve_t1(s1: f64) -> Result<f64> {
    if !(s1 > 0.0) || !s1.is_finite() {
        return Err(Error::Domain(format!("s1 must be positive, got {s1}")));
    }
    let t1 = bisect(f64::MIN_POSITIVE, s1, |t| t * (1.0 + t.powf(-0.25)) - s1);
    let lower = s1 - s1.powf(0.75);
    let upper = lower + 0.75 * s1.sqrt();
    if !(lower < t1 && t1 < upper) {
        return Err(Error::Bracket {
            s: s1,
            detail: format!("t1 = {t1} outside ({lower}, {upper})"),
            below_regime: s1 < T1_REGIME,
        });
    }
    Ok(t1)
}

/// Relative residual |t (1 + t^{-1/4}) - s1| / s1.
pub fn t1_residual(t1: f64, s1: f64) -> f64 {
    (t1 * (1.0 + t1.powf(-0.25)) - s1).abs() / s1
}

/// Upper bound on t2 from the closed-form bracket:
/// s3 + C s3^{(2d+4)/(2d+5)} + 2 C^2 ((2d+4)/(2d+5)) s3^{(2d+3)/(2d+5)}.
pub fn t2_upper_bound(s3: f64, dim: usize, c3_tilde: f64) -> f64 {
    let k = 2.0 * dim as f64 + 5.0;
    let r = (k - 1.0) / k;
    s3 + c3_tilde * s3.powf(r) + 2.0 * c3_tilde * c3_tilde * r * s3.powf((k - 2.0) / k)
}

/// Solves t (1 - C t^{-1/(2d+5)}) = s3 on the branch where the factor is
/// positive, and checks the closed-form upper bound.
///
/// The regime guard is positivity of 1 - C s3^{-1/(2d+5)}; a bracket
/// failure with the guard unmet is flagged `below_regime`.
pub fn solve_t2(s3: f64, dim: usize, c3_tilde: f64) -> Result<f64> {
    let t2 = solve_t2_unchecked(s3, dim, c3_tilde)?;
    if c3_tilde == 0.0 {
        // t = s3 exactly and the bracket collapses to equality
        return Ok(t2);
    }
    let bound = t2_upper_bound(s3, dim, c3_tilde);
    if !(t2 < bound) {
        let factor = 1.0 - c3_tilde * s3.powf(-1.0 / (2.0 * dim as f64 + 5.0));
        return Err(Error::Bracket {
            s: s3,
            detail: format!(
                "t2 = {t2} not below {bound} (d = {dim}, c3_tilde = {c3_tilde}, factor at s3 = {factor:.4}, residual = {:.2e})",
                t2_residual(t2, s3, dim, c3_tilde)
            ),
            below_regime: factor <= 0.0,
        });
    }
    Ok(t2)
}

/// The root that [`solve_t2`] returns, without the bracket check.
pub fn solve_t2_unchecked(s3: f64, dim: usize, c3_tilde: f64) -> Result<f64> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    if !(s3 > 0.0) || !s3.is_finite() || !(c3_tilde >= 0.0) || !c3_tilde.is_finite() {
        return Err(Error::Domain(format!(
            "need s3 > 0 and c3_tilde >= 0, got {s3}, {c3_tilde}"
        )));
    }
    let a = 1.0 / (2.0 * dim as f64 + 5.0);
    let psi = |t: f64| t * (1.0 - c3_tilde * t.powf(-a)) - s3;
    // positive-factor branch starts at C^{1/a}; psi increases from there on
    let lo = s3.max(c3_tilde.powf(1.0 / a));
    let mut hi = 2.0 * lo;
    while psi(hi) < 0.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::Domain(format!("no root for s3 = {s3}")));
        }
    }
    Ok(bisect(lo, hi, psi))
}

pub fn t2_residual(t2: f64, s3: f64, dim: usize, c3_tilde: f64) -> f64 {
    let a = 1.0 / (2.0 * dim as f64 + 5.0);
    (t2 * (1.0 - c3_tilde * t2.powf(-a)) - s3).abs() / s3
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingSample {
    pub n: f64,
    pub mean_perimeter: f64,
    pub std_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingFit {
    pub samples: Vec<ScalingSample>,
    pub exponent: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Minimum spread of the sizes, in decades.
pub const MIN_DECADES: f64 = 1.5;

/// Least-squares line through (ln n, ln perimeter).
pub fn fit_scaling(samples: &[ScalingSample]) -> Result<ScalingFit> {
    if samples.len() < 3 {
        return Err(Error::Degenerate(format!(
            "need at least 3 samples, got {}",
            samples.len()
        )));
    }
    if samples.iter().any(|s| !(s.n > 0.0 && s.mean_perimeter > 0.0)) {
        return Err(Error::Degenerate("sizes and perimeters must be positive".into()));
    }
    if samples.windows(2).any(|w| w[0].n >= w[1].n) {
        return Err(Error::Degenerate("sizes must be strictly increasing".into()));
    }
    let decades = (samples.last().unwrap().n / samples[0].n).log10();
    if decades < MIN_DECADES - 1e-12 {
        return Err(Error::Degenerate(format!(
            "sizes span {decades:.2} decades, need {MIN_DECADES}"
        )));
    }
    let xs: Vec<f64> = samples.iter().map(|s| s.n.ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.mean_perimeter.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - exponent * x).powi(2))
        .sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Ok(ScalingFit {
        samples: samples.to_vec(),
        exponent,
        intercept,
        r_squared,
    })
}
