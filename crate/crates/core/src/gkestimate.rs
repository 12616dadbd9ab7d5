//! Degree estimates for growth sequences.
//!
//! Finite differences are exact. The log-log slopes are the only floating-point
//! computations in the crate.

use serde::Serialize;

use crate::error::{Error, Result};

/// Exact positive values indexed by r = 1..=len.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimSequence {
    pub values: Vec<u128>,
}

impl DimSequence {
    pub fn new(values: Vec<u128>) -> Self {
        DimSequence { values }
    }

    pub fn from_dims(dims: &[usize]) -> Self {
        DimSequence { values: dims.iter().map(|&d| d as u128).collect() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn all_differences_vanish(tail: &[i128], order: usize) -> bool {
    let mut cur = tail.to_vec();
    for _ in 0..order {
        cur = cur.windows(2).map(|w| w[1] - w[0]).collect();
    }
    !cur.is_empty() && cur.iter().all(|&x| x == 0)
}

/// Smallest d whose (d+1)-th differences vanish on the tail of the sequence.
///
/// The tail for candidate d holds the last `max(3, ceil(len/2), d+2)` values,
/// so at least one (d+1)-th difference is always examined. Candidates run up
/// to `len - 2`.
pub fn difference_degree(s: &DimSequence) -> Option<usize> {
    let len = s.len();
    if len < 3 {
        return None;
    }
    let values: Vec<i128> = s.values.iter().map(|&v| v as i128).collect();
    (0..=len - 2).find(|&d| {
        let take = 3.max(len.div_ceil(2)).max(d + 2).min(len);
        all_differences_vanish(&values[len - take..], d + 1)
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlopeEstimates {
    /// `(r, log values[r] / log r)` for r >= 2.
    pub pointwise: Vec<(usize, f64)>,
    /// Least-squares slope of `(log r, log values[r])` over `window`.
    pub slope_window: f64,
    pub window: (usize, usize),
}

/// Top half of 1..=len (at least two points), as an inclusive r-range.
pub fn top_half(len: usize) -> (usize, usize) {
    let count = len.div_ceil(2).max(2).min(len);
    (len - count + 1, len)
}

/// Least-squares slope of `(log r, log values[r])` for r in `lo..=hi`.
pub fn loglog_slope(s: &DimSequence, lo: usize, hi: usize) -> f64 {
    let pts: Vec<(f64, f64)> =
        (lo..=hi).map(|r| ((r as f64).ln(), (s.values[r - 1] as f64).ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

pub fn loglog_slopes(s: &DimSequence) -> Result<SlopeEstimates> {
    if s.len() < 4 {
        return Err(Error::Precondition("slope estimates need at least 4 values".into()));
    }
    if s.values.contains(&0) {
        return Err(Error::Precondition("values must be positive".into()));
    }
    let pointwise = (2..=s.len()).map(|r| (r, (s.values[r - 1] as f64).ln() / (r as f64).ln())).collect();
    let window = top_half(s.len());
    Ok(SlopeEstimates { pointwise, slope_window: loglog_slope(s, window.0, window.1), window })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GkReport {
    pub difference_degree: Option<usize>,
    pub slope_estimates: Vec<(usize, f64)>,
    pub slope_window: f64,
    pub window: (usize, usize),
    /// Emitted only when both estimators agree.
    pub verdict: Option<usize>,
}

pub fn gk_report(s: &DimSequence) -> Result<GkReport> {
    let slopes = loglog_slopes(s)?;
    let difference_degree = difference_degree(s);
    let rounded = slopes.slope_window.round();
    let verdict = difference_degree.filter(|&d| rounded >= 0.0 && d as f64 == rounded);
    Ok(GkReport {
        difference_degree,
        slope_estimates: slopes.pointwise,
        slope_window: slopes.slope_window,
        window: slopes.window,
        verdict,
    })
}

/// For `f(n) = n^d`, checks that the windowed slope of `n -> f(p n^2)` is at
/// most twice that of `f`, plus 0.1.
pub fn limsup_composition_check(d: u32, p: u64, n_max: usize) -> Result<bool> {
    if d > 4 || p < 2 || n_max < 16 {
        return Err(Error::Precondition("need d <= 4, p > 1 and n_max >= 16".into()));
    }
    let f = DimSequence::new((1..=n_max as u128).map(|n| n.pow(d)).collect());
    let g = DimSequence::new((1..=n_max as u128).map(|n| (p as u128 * n * n).pow(d)).collect());
    let (lo, hi) = top_half(n_max);
    Ok(loglog_slope(&g, lo, hi) <= 2.0 * loglog_slope(&f, lo, hi) + 0.1)
}
