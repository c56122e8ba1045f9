//! Feasibility calculus for single interferograms, geometric sequence
//! planning for ranges of candidates, uncertainty budgeting, and end-to-end
//! sequence runs.
//!
//! Method (1) targets trial factors in [3, sqrt(N)], Method (2) in
//! [sqrt(N), N]. A sequence records interferograms at x_i = x_0 / c^i with
//! c = lambda_max/lambda_min, which makes consecutive per-N trial-factor
//! intervals abut exactly; the interferogram count grows with log_c of the
//! range, the displacement x_0 with the range itself.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::analysis::{scan_range, ScanPolicy, TrialCheck, Verdict};
use crate::error::{CoverageGap, Error, Result};
use crate::instrument::{simulate, Band, NoiseSpec, SetupSpec};
use crate::sumcore::SumConfig;
use crate::util::{isqrt, snap_ceil, snap_floor};

/// Which trial-factor range a plan covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Trial factors in [3, sqrt(N)].
    One,
    /// Trial factors in [sqrt(N), N].
    Two,
}

impl Method {
    pub fn from_index(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Method::One),
            2 => Ok(Method::Two),
            other => Err(Error::Planning(format!("unknown method {other}, expected 1 or 2"))),
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Method::One => 1,
            Method::Two => 2,
        }
    }
}

impl Serialize for Method {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.index())
    }
}

impl<'de> Deserialize<'de> for Method {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = u8::deserialize(d)?;
        Method::from_index(v).map_err(serde::de::Error::custom)
    }
}

/// Candidate interval factorable with a single interferogram at displacement x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingleShotRange {
    pub method: Method,
    pub x_nm: f64,
    pub band: Band,
    pub n_lo: u64,
    pub n_hi: u64,
    /// Whether x is within the method's admissible displacement limit.
    pub valid: bool,
}

/// Candidate interval coverable by one interferogram at displacement `x_nm`.
pub fn single_range(x_nm: f64, band: Band, method: Method) -> SingleShotRange {
    let (lmin, lmax) = (band.lambda_min_nm, band.lambda_max_nm);
    let tol = 1.0 + 1e-12;
    match method {
        Method::One => SingleShotRange {
            method,
            x_nm,
            band,
            n_lo: snap_ceil(x_nm * x_nm / (lmax * lmax)).max(1.0) as u64,
            n_hi: snap_floor(3.0 * x_nm / lmin).max(0.0) as u64,
            valid: x_nm <= 3.0 * lmax * lmax / lmin * tol,
        },
        Method::Two => SingleShotRange {
            method,
            x_nm,
            band,
            n_lo: 1,
            n_hi: snap_floor(x_nm * x_nm / (lmin * lmin)).max(0.0) as u64,
            valid: x_nm <= lmax * tol,
        },
    }
}

/// Extremal single-interferogram candidate for a band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MaxSingle {
    pub value: u64,
    /// False when the Method-1 value 9*(lambda_max/lambda_min)^2 is not an
    /// integer and had to be floored.
    pub exact: bool,
}

/// Largest candidate factorable with a single interferogram: 9c^2 for
/// Method 1 (the unique such integer at x = x^(1)), floor(c^2) for Method 2.
pub fn max_single(band: Band, method: Method) -> MaxSingle {
    let c = band.ratio();
    match method {
        Method::One => {
            let v = 9.0 * c * c;
            let snapped = snap_floor(v);
            MaxSingle {
                value: snapped as u64,
                exact: (v - v.round()).abs() <= 1e-9 * v,
            }
        }
        Method::Two => MaxSingle { value: snap_floor(c * c) as u64, exact: true },
    }
}

/// A geometric sequence of displacements covering [n_min, n_max].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequencePlan {
    pub method: Method,
    pub band: Band,
    pub n_min: u64,
    pub n_max: u64,
    pub x0_nm: f64,
    /// Interval ratio c = lambda_max / lambda_min.
    pub ratio: f64,
    /// Number of interferograms.
    pub count: usize,
    /// Displacements x_0, x_0/c, ..., x_0/c^(count-1).
    pub xs_nm: Vec<f64>,
}

impl SequencePlan {
    /// Structural checks for plans loaded from files. Deliberately does not
    /// prove coverage; `verify_coverage` owns that.
    pub fn validate(&self) -> Result<()> {
        self.band.validate()?;
        if self.n_min < 1 || self.n_min > self.n_max {
            return Err(Error::Planning(format!(
                "need 1 <= n_min <= n_max, got [{}, {}]",
                self.n_min, self.n_max
            )));
        }
        if self.xs_nm.len() != self.count || self.count == 0 {
            return Err(Error::Validation(format!(
                "plan lists {} displacements for count {}",
                self.xs_nm.len(),
                self.count
            )));
        }
        if self.xs_nm.iter().any(|&x| !(x.is_finite() && x > 0.0)) {
            return Err(Error::Validation("displacements must be positive".into()));
        }
        if self.xs_nm.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Validation("displacements must be strictly decreasing".into()));
        }
        Ok(())
    }

    /// Method minimum for the starting displacement.
    pub fn min_x0(method: Method, band: Band, n_max: u64) -> f64 {
        match method {
            Method::One => band.lambda_min_nm * n_max as f64 / 3.0,
            Method::Two => band.lambda_min_nm * (n_max as f64).sqrt(),
        }
    }
}

/// Smallest integer n >= 1 with c^n >= ratio (up to 1e-12 relative).
fn log_ceil(c: f64, ratio: f64) -> usize {
    if ratio <= 1.0 {
        return 1;
    }
    let guess = (ratio.ln() / c.ln()).floor() as i64 - 2;
    let mut n = guess.max(1) as usize;
    while c.powi(n as i32) < ratio * (1.0 - 1e-12) {
        n += 1;
    }
    n
}

/// Plan the minimal interferogram sequence factoring every N in
/// [n_min, n_max] over `band`. `x0_nm` defaults to the method minimum; larger
/// values are allowed and lengthen the sequence.
pub fn plan(
    n_min: u64,
    n_max: u64,
    band: Band,
    method: Method,
    x0_nm: Option<f64>,
) -> Result<SequencePlan> {
    band.validate()?;
    if n_min < 1 || n_min > n_max {
        return Err(Error::Planning(format!(
            "need 1 <= n_min <= n_max, got [{n_min}, {n_max}]"
        )));
    }
    let min_x0 = SequencePlan::min_x0(method, band, n_max);
    let x0 = x0_nm.unwrap_or(min_x0);
    if x0 < min_x0 * (1.0 - 1e-12) {
        return Err(Error::InfeasibleStart { x0_nm: x0, min_x0_nm: min_x0 });
    }
    let c = band.ratio();
    let lmin = band.lambda_min_nm;
    let count = match method {
        Method::One => log_ceil(c, x0 / (lmin * (n_min as f64).sqrt())),
        Method::Two => log_ceil(c, x0 / lmin),
    };
    let mut xs = Vec::with_capacity(count);
    let mut x = x0;
    for _ in 0..count {
        xs.push(x);
        x /= c;
    }
    Ok(SequencePlan {
        method,
        band,
        n_min,
        n_max,
        x0_nm: x0,
        ratio: c,
        count,
        xs_nm: xs,
    })
}

/// Trial-factor interval contributed by one interferogram of a plan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IgInterval {
    pub index: usize,
    /// Real-valued covered interval [n*lambda_min/x_i, n*lambda_max/x_i].
    pub xi_lo: f64,
    pub xi_hi: f64,
    /// Integer trial factors owned by this interferogram after endpoint
    /// dedup (shared endpoints go to the lower index); None when it owns none.
    pub owned: Option<(u64, u64)>,
}

/// Proof that a plan covers the method's target interval for one candidate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageProof {
    pub n: u64,
    /// The method's target trial-factor interval for this candidate.
    pub target: (f64, f64),
    pub intervals: Vec<IgInterval>,
}

/// Check that consecutive per-N intervals abut and that their union contains
/// the method's target range; return the interval map on success.
pub fn verify_coverage(plan: &SequencePlan, n: u64) -> Result<CoverageProof> {
    plan.validate()?;
    if n < plan.n_min || n > plan.n_max {
        return Err(Error::Planning(format!(
            "N = {n} outside the planned range [{}, {}]",
            plan.n_min, plan.n_max
        )));
    }
    let nf = n as f64;
    let (lmin, lmax) = (plan.band.lambda_min_nm, plan.band.lambda_max_nm);

    let mut intervals = Vec::with_capacity(plan.count);
    let mut gaps: Vec<CoverageGap> = Vec::new();
    let mut prev_hi_real: Option<f64> = None;
    let mut prev_owned_hi: Option<u64> = None;
    for (i, &x) in plan.xs_nm.iter().enumerate() {
        let xi_lo = nf * lmin / x;
        let xi_hi = nf * lmax / x;
        if let Some(ph) = prev_hi_real {
            // Consecutive intervals must share an endpoint (geometric recursion).
            if (xi_lo - ph).abs() > 1e-9 * ph.abs().max(1.0) && xi_lo > ph {
                gaps.push(CoverageGap { xi_lo: ph, xi_hi: xi_lo });
            }
        }
        prev_hi_real = Some(xi_hi);

        let mut lo = snap_ceil(xi_lo).max(2.0) as u64;
        let hi = (snap_floor(xi_hi) as u64).min(n);
        if let Some(ph) = prev_owned_hi {
            lo = lo.max(ph + 1);
        }
        let owned = if lo <= hi { Some((lo, hi)) } else { None };
        if let Some((_, h)) = owned {
            prev_owned_hi = Some(h.max(prev_owned_hi.unwrap_or(0)));
        }
        intervals.push(IgInterval { index: i, xi_lo, xi_hi, owned });
    }

    let sqrt_n = nf.sqrt();
    let target = match plan.method {
        Method::One => (3.0, sqrt_n),
        Method::Two => (sqrt_n, nf),
    };
    if target.0 <= target.1 {
        let union_lo = intervals.first().unwrap().xi_lo;
        let union_hi = intervals.last().unwrap().xi_hi;
        if union_lo > target.0 * (1.0 + 1e-9) {
            gaps.push(CoverageGap { xi_lo: target.0, xi_hi: union_lo });
        }
        if union_hi < target.1 * (1.0 - 1e-9) {
            gaps.push(CoverageGap { xi_lo: union_hi, xi_hi: target.1 });
        }
    }

    if gaps.is_empty() {
        Ok(CoverageProof { n, target, intervals })
    } else {
        let described: Vec<String> = gaps
            .iter()
            .map(|g| format!("[{:.6}, {:.6}]", g.xi_lo, g.xi_hi))
            .collect();
        Err(Error::Coverage {
            n,
            message: format!("uncovered trial-factor intervals: {}", described.join(", ")),
            gaps,
        })
    }
}

/// Propagated accuracy of the dimensionless readout variable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UncertaintyBudget {
    pub lambda_nm: f64,
    pub x_nm: f64,
    pub dlambda_nm: f64,
    pub dx_nm: f64,
    /// d(xi) = (lambda/x^2) dx + (1/x) dlambda.
    pub dxi: f64,
    /// d(xi_N) = N * d(xi).
    pub dxi_n: f64,
    /// Largest trial factor readable at this wavelength, floor(N*lambda/x).
    pub l_max: u64,
    /// Adjacent integer trial factors distinguishable: dxi_n < 1/2.
    pub resolvable: bool,
    /// Residue spacing at l_max resolvable: dxi_n < 1/(2*l_max).
    pub discriminable: bool,
}

/// Evaluate the readout uncertainty for given instrument accuracies.
pub fn uncertainty(lambda_nm: f64, x_nm: f64, dlambda_nm: f64, dx_nm: f64, n: u64) -> UncertaintyBudget {
    let dxi = lambda_nm / (x_nm * x_nm) * dx_nm + dlambda_nm / x_nm;
    let dxi_n = n as f64 * dxi;
    let l_max = (snap_floor(n as f64 * lambda_nm / x_nm) as u64).max(1);
    UncertaintyBudget {
        lambda_nm,
        x_nm,
        dlambda_nm,
        dx_nm,
        dxi,
        dxi_n,
        l_max,
        resolvable: dxi_n < 0.5,
        discriminable: dxi_n < 1.0 / (2.0 * l_max as f64),
    }
}

/// Merged classification of one candidate across a sequence run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequenceReport {
    pub n: u64,
    /// Union of the owned trial-factor intervals, clipped to [2, n].
    pub coverage: Option<(u64, u64)>,
    /// Whether every trial factor in the method's target range was checked.
    pub complete: bool,
    /// Method 1 only: complete coverage, odd n, and no factor in [3, sqrt(n)].
    pub certified_prime: bool,
    pub checks: Vec<TrialCheck>,
    pub factors: Vec<u64>,
}

/// Simulate every interferogram of a plan and classify each candidate over
/// its owned trial-factor intervals. Per-interferogram seeds derive from
/// `noise.seed + index`, so a run is deterministic end to end.
pub fn run_sequence(
    plan: &SequencePlan,
    cfg: SumConfig,
    ns: &[u64],
    noise: &NoiseSpec,
    dl_nm: f64,
    policy: ScanPolicy,
) -> Result<Vec<SequenceReport>> {
    plan.validate()?;
    policy.validate()?;
    for &n in ns {
        if n < plan.n_min || n > plan.n_max {
            return Err(Error::Planning(format!(
                "N = {n} outside the planned range [{}, {}]",
                plan.n_min, plan.n_max
            )));
        }
    }

    let igs: Vec<_> = plan
        .xs_nm
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let noise_i = NoiseSpec { seed: noise.seed.wrapping_add(i as u64), ..noise.clone() };
            let setup = SetupSpec::new(cfg, x, plan.band, dl_nm, noise_i)?;
            simulate(&setup)
        })
        .collect::<Result<_>>()?;

    let (lmin, lmax) = (plan.band.lambda_min_nm, plan.band.lambda_max_nm);
    let mut reports = Vec::with_capacity(ns.len());
    for &n in ns {
        let nf = n as f64;
        let mut checks: Vec<TrialCheck> = Vec::new();
        let mut union: Option<(u64, u64)> = None;
        let mut prev_owned_hi: Option<u64> = None;
        for (ig, &x) in igs.iter().zip(&plan.xs_nm) {
            let mut lo = snap_ceil(nf * lmin / x).max(2.0) as u64;
            let hi = (snap_floor(nf * lmax / x) as u64).min(n);
            if let Some(ph) = prev_owned_hi {
                lo = lo.max(ph + 1);
            }
            if lo > hi {
                continue;
            }
            prev_owned_hi = Some(hi.max(prev_owned_hi.unwrap_or(0)));
            union = Some(match union {
                None => (lo, hi),
                Some((ulo, uhi)) => (ulo.min(lo), uhi.max(hi)),
            });
            checks.extend(scan_range(ig, n, lo, hi, policy)?);
        }

        let factors: Vec<u64> = checks
            .iter()
            .filter(|c| c.verdict == Verdict::Factor)
            .map(|c| c.trial_factor)
            .collect();

        let sqrt_floor = isqrt(n);
        let complete = match (plan.method, union) {
            (_, None) => false,
            (Method::One, Some((lo, hi))) => {
                // Target [3, sqrt(n)], empty for n < 9.
                sqrt_floor < 3 || (lo <= 3 && hi >= sqrt_floor)
            }
            (Method::Two, Some((lo, hi))) => {
                let sqrt_ceil = if sqrt_floor * sqrt_floor == n { sqrt_floor } else { sqrt_floor + 1 };
                let checked_lo = if lo == 2 && !policy.include_two { 3 } else { lo };
                checked_lo <= sqrt_ceil.max(2) && hi >= n
            }
        };
        let certified_prime = plan.method == Method::One
            && complete
            && n % 2 == 1
            && n > 1
            && !factors.iter().any(|&l| l <= sqrt_floor);

        reports.push(SequenceReport {
            n,
            coverage: union,
            complete,
            certified_prime,
            checks,
            factors,
        });
    }
    Ok(reports)
}
