//! Exact, noiseless evaluation of the multi-path interference intensity
//!
//! I(u) = |(1/M) * sum_{m=1..M} exp(2*pi*i * (m-1)^j * u)|^2
//!
//! together with the worst-case intensity any non-divisor can produce at an
//! integer trial-factor position.
//!
//! Factor/non-factor discrimination lives entirely in the fractional part of
//! the argument, so every evaluation reduces its argument mod 1 before phases
//! are formed; integer-rational arguments N/l are reduced with exact integer
//! arithmetic first. Without this, 2*pi*u for seven-digit arguments has
//! already lost the fraction that carries the signal.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest exponent (M-1)^j accepted; keeps per-arm phase turns exactly
/// representable after scaling by the reduced argument.
const MAX_EXPONENT: u64 = 1 << 52;

/// The (M, j) pair defining a truncated exponential sum: M interfering paths,
/// phase order j. j=1 is the Fourier case, j=2 the Gauss case, j=3 the Kummer
/// case. For M=2 the intensity reduces to cos^2(pi*u) independently of j.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SumConfig {
    m: u32,
    j: u32,
}

impl SumConfig {
    pub fn new(m: u32, j: u32) -> Result<Self> {
        let cfg = SumConfig { m, j };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Re-checks construction invariants (used after deserialization).
    pub fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::Domain(format!("need at least 2 paths, got M = {}", self.m)));
        }
        if self.j < 1 {
            return Err(Error::Domain("sum order j must be >= 1".into()));
        }
        match u64::from(self.m - 1).checked_pow(self.j) {
            Some(k) if k <= MAX_EXPONENT => Ok(()),
            _ => Err(Error::Domain(format!(
                "(M-1)^j = {}^{} exceeds the representable exponent range",
                self.m - 1,
                self.j
            ))),
        }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    /// Path exponents (m-1)^j for m = 1..=M, exact as f64.
    pub fn exponents(&self) -> impl Iterator<Item = f64> + '_ {
        (0..u64::from(self.m)).map(|i| i.pow(self.j) as f64)
    }

    /// Largest path exponent (M-1)^j.
    pub fn max_exponent(&self) -> f64 {
        u64::from(self.m - 1).pow(self.j) as f64
    }
}

/// Normalized interference intensity. Exact evaluations lie in [0, 1] up to a
/// few ulps; instrument samples may carry additive noise up to the 1.2 clamp.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Intensity(pub(crate) f64);

impl Intensity {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Unit phasor exp(2*pi*i*t) with t in turns, reduced mod 1 first.
pub(crate) fn phasor(turns: f64) -> Complex64 {
    let frac = turns - turns.floor();
    let (sin, cos) = (TAU * frac).sin_cos();
    Complex64::new(cos, sin)
}

/// Sum of unit phasors over the configured path exponents at reduced argument
/// `u_frac`, normalized by 1/M^2. Shared by the wavelength wrappers below.
fn intensity_from_frac(cfg: SumConfig, u_frac: f64) -> Intensity {
    let mut s = Complex64::new(0.0, 0.0);
    for k in cfg.exponents() {
        s += phasor(k * u_frac);
    }
    let m = f64::from(cfg.m);
    Intensity(s.norm_sqr() / (m * m))
}

/// Intensity of the truncated exponential sum at dimensionless argument `u`.
pub fn ctes_intensity(cfg: SumConfig, u: f64) -> Result<Intensity> {
    if !u.is_finite() {
        return Err(Error::Domain(format!("sum argument must be finite, got {u}")));
    }
    Ok(intensity_from_frac(cfg, u - u.floor()))
}

/// Intensity read at source wavelength `lambda` for displacement unit `x`,
/// i.e. the sum evaluated at u = x/lambda.
pub fn intensity_at_wavelength(cfg: SumConfig, x_nm: f64, lambda_nm: f64) -> Result<Intensity> {
    if !(x_nm.is_finite() && x_nm > 0.0) {
        return Err(Error::Domain(format!("displacement unit must be positive, got {x_nm}")));
    }
    if !(lambda_nm.is_finite() && lambda_nm > 0.0) {
        return Err(Error::Domain(format!("wavelength must be positive, got {lambda_nm}")));
    }
    ctes_intensity(cfg, x_nm / lambda_nm)
}

/// Intensity of the interferogram rescaled for candidate `n`, read at the
/// dimensionless position `xi_n` (= n*lambda/x). Integer positions are
/// divisor probes: xi_n = l with l | n gives exactly 1.
///
/// Integer `xi_n` is reduced via the exact residue n mod l before any float
/// division; seven-digit n would otherwise cancel catastrophically.
pub fn rescaled_intensity(cfg: SumConfig, n: u64, xi_n: f64) -> Result<Intensity> {
    if n < 1 {
        return Err(Error::Domain("candidate integer must be >= 1".into()));
    }
    if !(xi_n.is_finite() && xi_n > 0.0) {
        return Err(Error::Domain(format!("rescaled position must be positive, got {xi_n}")));
    }
    if xi_n.fract() == 0.0 && xi_n <= MAX_EXPONENT as f64 {
        let l = xi_n as u64;
        let r = n % l;
        return Ok(intensity_from_frac(cfg, r as f64 / l as f64));
    }
    // frac(n / xi_n) via the exact float remainder; dividing n directly would
    // put the whole integer part in front of the fraction we care about.
    let rem = (n as f64).rem_euclid(xi_n);
    Ok(intensity_from_frac(cfg, (rem / xi_n) % 1.0))
}

type CeilingKey = (u32, u32, u64);

fn ceiling_cache() -> &'static Mutex<HashMap<CeilingKey, f64>> {
    static CACHE: OnceLock<Mutex<HashMap<CeilingKey, f64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Largest intensity a non-divisor can exhibit at integer position `l`:
/// max over residues r in 1..l of the sum at u = r/l. Strictly below 1.
///
/// O(l) on first call per (M, j, l); results are cached because factor scans
/// revisit the same trial factors.
pub fn nonfactor_ceiling(cfg: SumConfig, l: u64) -> Result<Intensity> {
    if l < 2 {
        return Err(Error::Domain(format!("trial factor must be >= 2, got {l}")));
    }
    let key = (cfg.m, cfg.j, l);
    if let Some(&v) = ceiling_cache().lock().unwrap().get(&key) {
        return Ok(Intensity(v));
    }
    let mut max = 0.0_f64;
    for r in 1..l {
        let v = intensity_from_frac(cfg, r as f64 / l as f64).0;
        if v > max {
            max = v;
        }
    }
    ceiling_cache().lock().unwrap().insert(key, max);
    Ok(Intensity(max))
}
