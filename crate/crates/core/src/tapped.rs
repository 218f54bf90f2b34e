//! Bandwidth-limited tapped delay channel.
//!
//! Paths whose delays fall into the same interval of length `1/W` cannot be
//! told apart and merge into one tap. With `τ_o = ⌊τ_min·W⌋/W` the `l`-th tap
//! (1-based) collects every path with `(l−1)/W ≤ τ − τ_o < l/W`, and the
//! channel has `L = ⌈(τ_max − τ_o)·W⌉` taps. Empty interior taps are kept
//! with a zero coefficient so the sequence stays dense over `1..=L`.

use num_complex::Complex64;

use crate::channel::PathSet;
use crate::error::{Error, Result};
use crate::geometry::ElementIndex;

#[derive(Debug, Clone, PartialEq)]
pub struct TappedChannel {
    origin: f64,
    bandwidth_hz: f64,
    members: Vec<Vec<ElementIndex>>,
    coefficients: Vec<Complex64>,
}

impl TappedChannel {
    /// `τ_o`, start of the first tap in seconds.
    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn bandwidth_hz(&self) -> f64 {
        self.bandwidth_hz
    }

    /// Number of taps `L`.
    pub fn tap_count(&self) -> usize {
        self.coefficients.len()
    }

    /// Members of tap `l`, 1-based.
    pub fn members(&self, l: usize) -> Result<&[ElementIndex]> {
        self.check_tap(l)?;
        Ok(&self.members[l - 1])
    }

    /// `|T_l|`, 1-based.
    pub fn cardinality(&self, l: usize) -> Result<usize> {
        self.members(l).map(<[_]>::len)
    }

    /// `h_eq[l]`, 1-based.
    pub fn coefficient(&self, l: usize) -> Result<Complex64> {
        self.check_tap(l)?;
        Ok(self.coefficients[l - 1])
    }

    /// The equivalent discrete CIR `h_eq[1], …, h_eq[L]` as a slice; slice
    /// position `i` holds tap `i + 1`.
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// `(tap, members)` pairs with 1-based tap numbers.
    pub fn taps(&self) -> impl Iterator<Item = (usize, &[ElementIndex])> {
        self.members
            .iter()
            .enumerate()
            .map(|(i, m)| (i + 1, m.as_slice()))
    }

    fn check_tap(&self, l: usize) -> Result<()> {
        if l == 0 || l > self.tap_count() {
            Err(Error::TapOutOfRange {
                tap: l,
                taps: self.tap_count(),
            })
        } else {
            Ok(())
        }
    }
}

/// `⌊τ_min·W⌋/W`, stepped back one bin in the rare case rounding pushes it
/// past `τ_min`.
pub(crate) fn tap_origin(min_delay: f64, bandwidth_hz: f64) -> f64 {
    let mut bins = (min_delay * bandwidth_hz).floor();
    while bins > 0.0 && bins / bandwidth_hz > min_delay {
        bins -= 1.0;
    }
    bins / bandwidth_hz
}

/// 0-based bin `k` with `k/W ≤ offset < (k+1)/W`, evaluated literally.
fn bin_of(offset: f64, bandwidth_hz: f64) -> usize {
    let mut k = (offset * bandwidth_hz).floor().max(0.0) as usize;
    while k > 0 && k as f64 / bandwidth_hz > offset {
        k -= 1;
    }
    while (k + 1) as f64 / bandwidth_hz <= offset {
        k += 1;
    }
    k
}

/// Groups the paths into taps of width `1/W`.
pub fn bin_paths(paths: &PathSet, bandwidth_hz: f64) -> Result<TappedChannel> {
    if paths.is_empty() {
        return Err(Error::EmptyPathSet);
    }
    if !(bandwidth_hz > 0.0 && bandwidth_hz.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "bandwidth_hz",
            reason: format!("{bandwidth_hz} must be positive and finite"),
        });
    }
    let origin = tap_origin(paths.min_delay(), bandwidth_hz);
    let bins: Vec<usize> = paths
        .paths()
        .iter()
        .map(|p| bin_of(p.delay - origin, bandwidth_hz))
        .collect();

    // A path sitting exactly on the upper edge of ⌈·⌉ lands one bin higher
    // under the half-open rule, so the count is widened to cover it.
    let ceil = ((paths.max_delay() - origin) * bandwidth_hz).ceil() as usize;
    let highest = bins.iter().copied().max().unwrap_or(0);
    let tap_count = ceil.max(highest + 1).max(1);

    let mut members = vec![Vec::new(); tap_count];
    let mut coefficients = vec![Complex64::new(0.0, 0.0); tap_count];
    for (path, &bin) in paths.paths().iter().zip(&bins) {
        members[bin].push(path.index);
        coefficients[bin] += path.coefficient;
    }

    Ok(TappedChannel {
        origin,
        bandwidth_hz,
        members,
        coefficients,
    })
}

/// `h_eq,l = Σ_{(m,n) ∈ T_l} h_{m,n}`.
pub fn tap_coefficient(paths: &PathSet, members: &[ElementIndex]) -> Result<Complex64> {
    members
        .iter()
        .try_fold(Complex64::new(0.0, 0.0), |acc, &i| {
            paths
                .get(i)
                .map(|p| acc + p.coefficient)
                .ok_or(Error::UnknownIndex(i))
        })
}
