//! Factor classification on recorded interferograms: rescale per candidate N,
//! interpolate the intensity at integer trial-factor positions, and compare
//! against the worst-case non-factor ceiling.
//!
//! The verdict rule is explicit where the visual "dominant maximum" criterion
//! is not: a trial factor l counts as a factor iff its interpolated intensity
//! exceeds threshold(l) = ceiling(l) + rho*(1 - ceiling(l)). The cut sits a
//! margin fraction rho above the largest value any non-divisor can reach, so
//! it adapts per l; as l grows the ceiling approaches 1 and the demanded
//! accuracy shrinks accordingly.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instrument::{Band, Interferogram};
use crate::sumcore::{nonfactor_ceiling, Intensity};
use crate::util::{snap_ceil, snap_floor};

/// Classification outcome for one trial factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Factor,
    NonFactor,
    Uncovered,
}

/// One probed trial factor of `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialCheck {
    pub n: u64,
    pub trial_factor: u64,
    pub lambda_target_nm: f64,
    /// Interpolated intensity; absent when the target wavelength is out of band.
    pub intensity: Option<Intensity>,
    pub ceiling: Intensity,
    pub verdict: Verdict,
}

/// Scan policy knobs: the threshold margin fraction and whether the trivial
/// trial factor 2 is probed (parity is cheaper to test digitally, so scans
/// skip it by default).
#[derive(Debug, Clone, Copy)]
pub struct ScanPolicy {
    pub rho: f64,
    pub include_two: bool,
}

impl Default for ScanPolicy {
    fn default() -> Self {
        ScanPolicy { rho: 0.5, include_two: false }
    }
}

impl ScanPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.rho >= 0.0 && self.rho < 1.0) {
            return Err(Error::Config(format!("margin fraction must be in [0, 1), got {}", self.rho)));
        }
        Ok(())
    }
}

/// All trial checks for one candidate integer.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorReport {
    pub n: u64,
    /// Inclusive interval of checkable trial factors, None when empty.
    pub coverage: Option<(u64, u64)>,
    pub coverage_empty: bool,
    pub checks: Vec<TrialCheck>,
    /// Trial factors classified as divisors, ascending.
    pub factors: Vec<u64>,
}

/// Interval of trial factors readable for `n` from an interferogram at
/// displacement `x` over `band`: [ceil(n*lambda_min/x), floor(n*lambda_max/x)]
/// intersected with [2, n]. None when empty.
pub fn coverage(x_nm: f64, band: Band, n: u64) -> Option<(u64, u64)> {
    let nf = n as f64;
    let lo = snap_ceil(nf * band.lambda_min_nm / x_nm).max(2.0);
    let hi = snap_floor(nf * band.lambda_max_nm / x_nm).min(nf);
    if lo > hi {
        None
    } else {
        Some((lo as u64, hi as u64))
    }
}

/// Factor/non-factor decision boundary for a given non-factor ceiling.
pub fn threshold(ceiling: Intensity, rho: f64) -> f64 {
    ceiling.value() + rho * (1.0 - ceiling.value())
}

/// Quadratic interpolation through the three recorded samples nearest to
/// `lambda_nm`. Exact at grid points.
pub fn sample_at(ig: &Interferogram, lambda_nm: f64) -> Result<Intensity> {
    if !ig.setup.band.contains(lambda_nm) {
        return Err(Error::Domain(format!(
            "{lambda_nm} nm is outside the band [{}, {}]",
            ig.setup.band.lambda_min_nm, ig.setup.band.lambda_max_nm
        )));
    }
    let s = &ig.samples;
    if s.len() < 3 {
        return Err(Error::Validation("interferogram has fewer than 3 samples".into()));
    }
    let idx = s.partition_point(|p| p.lambda_nm < lambda_nm);
    // Contiguous 3-sample window with the smallest total distance to lambda.
    let hi_start = s.len() - 3;
    let candidates = [
        idx.saturating_sub(2).min(hi_start),
        idx.saturating_sub(1).min(hi_start),
        idx.min(hi_start),
    ];
    let dist = |start: usize| -> f64 {
        (0..3).map(|k| (s[start + k].lambda_nm - lambda_nm).abs()).sum()
    };
    let start = candidates
        .into_iter()
        .min_by(|&a, &b| dist(a).total_cmp(&dist(b)))
        .unwrap();

    let (x0, x1, x2) = (s[start].lambda_nm, s[start + 1].lambda_nm, s[start + 2].lambda_nm);
    let (y0, y1, y2) = (
        s[start].intensity.value(),
        s[start + 1].intensity.value(),
        s[start + 2].intensity.value(),
    );
    let x = lambda_nm;
    // Exact node hits return the sample itself; the Lagrange form would be
    // off by an ulp there.
    for k in 0..3 {
        if s[start + k].lambda_nm == x {
            return Ok(s[start + k].intensity);
        }
    }
    let value = y0 * (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2))
        + y1 * (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2))
        + y2 * (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1));
    Ok(Intensity(value))
}

/// Probe one trial factor of `n` on a recorded interferogram.
pub fn check_trial(ig: &Interferogram, n: u64, l: u64, policy: ScanPolicy) -> Result<TrialCheck> {
    if n < 2 {
        return Err(Error::Domain(format!("candidate must be >= 2, got {n}")));
    }
    if l < 2 {
        return Err(Error::Domain(format!("trial factor must be >= 2, got {l}")));
    }
    policy.validate()?;
    let setup = &ig.setup;
    let lambda_target = l as f64 * setup.x_nm / n as f64;
    let ceiling = nonfactor_ceiling(setup.cfg, l)?;

    let covered = coverage(setup.x_nm, setup.band, n)
        .is_some_and(|(lo, hi)| (lo..=hi).contains(&l));
    if !covered {
        return Ok(TrialCheck {
            n,
            trial_factor: l,
            lambda_target_nm: lambda_target,
            intensity: None,
            ceiling,
            verdict: Verdict::Uncovered,
        });
    }
    // Covered targets can land an ulp outside the band; read at the edge.
    let probe = lambda_target.clamp(setup.band.lambda_min_nm, setup.band.lambda_max_nm);
    let intensity = sample_at(ig, probe)?;
    let verdict = if intensity.value() > threshold(ceiling, policy.rho) {
        Verdict::Factor
    } else {
        Verdict::NonFactor
    };
    Ok(TrialCheck {
        n,
        trial_factor: l,
        lambda_target_nm: lambda_target,
        intensity: Some(intensity),
        ceiling,
        verdict,
    })
}

/// Check every integer in [lo, hi] (ascending) against `n`, honoring the
/// trial-factor-2 policy. Used by both single scans and sequence merging.
pub(crate) fn scan_range(
    ig: &Interferogram,
    n: u64,
    lo: u64,
    hi: u64,
    policy: ScanPolicy,
) -> Result<Vec<TrialCheck>> {
    let mut checks = Vec::new();
    for l in lo.max(2)..=hi {
        if l == 2 && !policy.include_two {
            continue;
        }
        checks.push(check_trial(ig, n, l, policy)?);
    }
    Ok(checks)
}

/// Classify every checkable trial factor of `n` on this interferogram.
pub fn factor_scan(ig: &Interferogram, n: u64, policy: ScanPolicy) -> Result<FactorReport> {
    if n < 2 {
        return Err(Error::Domain(format!("candidate must be >= 2, got {n}")));
    }
    policy.validate()?;
    let cov = coverage(ig.setup.x_nm, ig.setup.band, n);
    let checks = match cov {
        Some((lo, hi)) => scan_range(ig, n, lo, hi, policy)?,
        None => Vec::new(),
    };
    let factors = checks
        .iter()
        .filter(|c| c.verdict == Verdict::Factor)
        .map(|c| c.trial_factor)
        .collect();
    Ok(FactorReport {
        n,
        coverage: cov,
        coverage_empty: cov.is_none(),
        checks,
        factors,
    })
}

/// One factor scan per candidate over the same recorded interferogram.
pub fn multi_scan(ig: &Interferogram, ns: &[u64], policy: ScanPolicy) -> Result<Vec<FactorReport>> {
    ns.iter().map(|&n| factor_scan(ig, n, policy)).collect()
}

/// Local maxima of the rescaled interferogram (sample strictly above both
/// neighbors), reported as (xi_n, intensity). Diagnostic only; verdicts come
/// from `check_trial`.
pub fn locate_maxima(ig: &Interferogram, n: u64) -> Vec<(f64, Intensity)> {
    let scale = n as f64 / ig.setup.x_nm;
    ig.samples
        .windows(3)
        .filter(|w| {
            w[1].intensity.value() > w[0].intensity.value()
                && w[1].intensity.value() > w[2].intensity.value()
        })
        .map(|w| (w[1].lambda_nm * scale, w[1].intensity))
        .collect()
}
