//! Robust aggregation across trials: median-of-means and Gini mean
//! difference.

use crate::error::{Error, Result};

/// Median of the means of `groups` contiguous, equally sized blocks.
///
/// With an even number of groups the two middle group means are averaged.
pub fn median_of_means(samples: &[f64], groups: usize) -> Result<f64> {
    if groups == 0 {
        return Err(Error::invalid("groups", "must be >= 1"));
    }
    if samples.is_empty() || samples.len() % groups != 0 {
        return Err(Error::invalid(
            "groups",
            format!("{groups} groups do not divide {} samples", samples.len()),
        ));
    }
    let size = samples.len() / groups;
    let mut means: Vec<f64> = samples
        .chunks_exact(size)
        .map(|c| c.iter().sum::<f64>() / size as f64)
        .collect();
    Ok(median(&mut means))
}

/// Median of `values`, reordering them in place.
pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty(), "median of empty slice");
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Gini mean difference of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gmd {
    /// `S = Σ_j (2j - N - 1) x_(j)` over the sorted sample.
    pub raw: f64,
    /// `2S / (N(N-1))`, the mean absolute difference over distinct pairs.
    pub normalized: f64,
}

pub fn gmd(samples: &[f64]) -> Result<Gmd> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::invalid("samples", format!("GMD needs at least 2 samples, got {n}")));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    // Σ_j (2j - N - 1) x_(j) regrouped over consecutive gaps: every term
    // is non-negative, so the sum cannot cancel below zero.
    let raw: f64 = sorted
        .windows(2)
        .enumerate()
        .map(|(k, w)| (w[1] - w[0]) * ((k + 1) * (n - k - 1)) as f64)
        .sum();
    Ok(Gmd {
        raw,
        normalized: 2.0 * raw / (n as f64 * (n as f64 - 1.0)),
    })
}

/// Normalised GMD of the samples at or below `center` and of those above
/// it, returned as `(below, above)`. A side with fewer than two samples has
/// deviation 0.
pub fn gmd_split(samples: &[f64], center: f64) -> (f64, f64) {
    let (below, above): (Vec<f64>, Vec<f64>) = samples.iter().partition(|&&x| x <= center);
    let side = |v: &[f64]| gmd(v).map(|g| g.normalized).unwrap_or(0.0);
    (side(&below), side(&above))
}

/// Median-of-means center with one-sided GMD deviations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStat {
    pub center: f64,
    pub dev_below: f64,
    pub dev_above: f64,
    pub n_trials: usize,
    pub n_groups: usize,
}

impl SummaryStat {
    pub fn from_samples(samples: &[f64], groups: usize) -> Result<Self> {
        let center = median_of_means(samples, groups)?;
        let (dev_below, dev_above) = gmd_split(samples, center);
        Ok(SummaryStat {
            center,
            dev_below,
            dev_above,
            n_trials: samples.len(),
            n_groups: groups,
        })
    }
}
