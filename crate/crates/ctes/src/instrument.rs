//! Virtual interferometer + spectrometer: samples the interference pattern of
//! an M-arm setup over a wavelength grid, optionally with instrument noise,
//! and reads/writes the result as a CSV file with a JSON header block.
//!
//! Noise model: per-arm path errors and the per-pixel wavelength reading
//! pattern are frozen once per interferogram (calibration is set once), while
//! the additive intensity noise is drawn per sample (shot-like). Everything is
//! driven by one seed, so identical setups produce bit-identical output.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sumcore::{intensity_at_wavelength, phasor, Intensity, SumConfig};

/// Samples-per-fringe floor enforced at construction; below this the
/// quadratic interpolation used by the analysis stage degrades.
pub const MIN_SAMPLES_PER_FRINGE: f64 = 8.0;

/// Additive noise may push samples past unity; clamping at 1.2 instead of 1.0
/// keeps the peak statistics intact for threshold studies.
pub const INTENSITY_CLAMP: f64 = 1.2;

/// Source wavelength window [lambda_min, lambda_max], in nm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub lambda_min_nm: f64,
    pub lambda_max_nm: f64,
}

impl Band {
    pub fn new(lambda_min_nm: f64, lambda_max_nm: f64) -> Result<Self> {
        let band = Band { lambda_min_nm, lambda_max_nm };
        band.validate()?;
        Ok(band)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_min_nm.is_finite() && self.lambda_min_nm > 0.0) {
            return Err(Error::Config(format!(
                "lambda_min must be positive, got {}",
                self.lambda_min_nm
            )));
        }
        if !(self.lambda_max_nm.is_finite() && self.lambda_max_nm > self.lambda_min_nm) {
            return Err(Error::Config(format!(
                "need lambda_min < lambda_max, got [{}, {}]",
                self.lambda_min_nm, self.lambda_max_nm
            )));
        }
        Ok(())
    }

    /// Band ratio c = lambda_max / lambda_min (> 1).
    pub fn ratio(&self) -> f64 {
        self.lambda_max_nm / self.lambda_min_nm
    }

    pub fn span(&self) -> f64 {
        self.lambda_max_nm - self.lambda_min_nm
    }

    pub fn contains(&self, lambda_nm: f64) -> bool {
        let slack = 1e-9 * self.lambda_max_nm;
        lambda_nm >= self.lambda_min_nm - slack && lambda_nm <= self.lambda_max_nm + slack
    }
}

/// Instrument imperfections. All-zero means an ideal instrument.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    /// Std dev of additive per-sample intensity noise (dimensionless).
    pub sigma_i: f64,
    /// Per-pixel wavelength reading error bound (nm), frozen pattern.
    pub dlambda_cal_nm: f64,
    /// Per-arm path calibration error bound (nm), frozen per interferogram.
    pub dx_cal_nm: f64,
    /// Per-arm relative amplitudes; empty means all 1.
    #[serde(default)]
    pub amplitudes: Vec<f64>,
    /// Seed for all pseudo-random draws.
    pub seed: u64,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        NoiseSpec {
            sigma_i: 0.0,
            dlambda_cal_nm: 0.0,
            dx_cal_nm: 0.0,
            amplitudes: Vec::new(),
            seed: 0,
        }
    }
}

impl NoiseSpec {
    /// The bench hardware figures: 0.006 nm wavelength accuracy, 10 nm piezo
    /// resolution, no extra intensity noise.
    pub fn hardware(seed: u64) -> Self {
        NoiseSpec {
            sigma_i: 0.0,
            dlambda_cal_nm: 0.006,
            dx_cal_nm: 10.0,
            amplitudes: Vec::new(),
            seed,
        }
    }

    pub fn validate(&self, m: u32) -> Result<()> {
        if !(self.sigma_i >= 0.0 && self.dlambda_cal_nm >= 0.0 && self.dx_cal_nm >= 0.0) {
            return Err(Error::Config("noise bounds must be non-negative".into()));
        }
        if !self.amplitudes.is_empty() {
            if self.amplitudes.len() != m as usize {
                return Err(Error::Config(format!(
                    "got {} amplitude factors for {} arms",
                    self.amplitudes.len(),
                    m
                )));
            }
            if self.amplitudes.iter().any(|&a| !(a.is_finite() && a > 0.0)) {
                return Err(Error::Config("amplitude factors must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn is_quiet(&self) -> bool {
        self.sigma_i == 0.0 && self.dlambda_cal_nm == 0.0 && self.dx_cal_nm == 0.0
    }
}

/// Full description of one virtual interferogram acquisition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetupSpec {
    pub cfg: SumConfig,
    /// Displacement unit x (nm); arm m sits at (m-1)^j * x.
    pub x_nm: f64,
    pub band: Band,
    /// Spectrometer grid step (nm).
    pub dl_nm: f64,
    pub noise: NoiseSpec,
}

impl SetupSpec {
    pub fn new(cfg: SumConfig, x_nm: f64, band: Band, dl_nm: f64, noise: NoiseSpec) -> Result<Self> {
        let setup = SetupSpec { cfg, x_nm, band, dl_nm, noise };
        setup.validate()?;
        Ok(setup)
    }

    pub fn validate(&self) -> Result<()> {
        self.cfg.validate()?;
        self.band.validate()?;
        self.noise.validate(self.cfg.m())?;
        if !(self.x_nm.is_finite() && self.x_nm > 0.0) {
            return Err(Error::Config(format!(
                "displacement unit must be positive, got {}",
                self.x_nm
            )));
        }
        if !(self.dl_nm.is_finite() && self.dl_nm > 0.0) {
            return Err(Error::Config(format!("grid step must be positive, got {}", self.dl_nm)));
        }
        if self.dl_nm > self.band.span() / 2.0 {
            return Err(Error::Config(format!(
                "grid step {} nm leaves fewer than 3 samples across the band",
                self.dl_nm
            )));
        }
        let max_dl = self.max_grid_step();
        if self.dl_nm > max_dl {
            return Err(Error::InadequateSampling { dl_nm: self.dl_nm, max_dl_nm: max_dl });
        }
        Ok(())
    }

    /// Largest admissible grid step: an eighth of the shortest in-band fringe.
    pub fn max_grid_step(&self) -> f64 {
        let lam = self.band.lambda_min_nm;
        lam * lam / (self.cfg.max_exponent() * self.x_nm) / MIN_SAMPLES_PER_FRINGE
    }
}

/// One recorded point: abscissa as read off the spectrometer, intensity after
/// normalization (and noise, if configured).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub lambda_nm: f64,
    pub intensity: Intensity,
}

/// A sampled interferogram plus the setup that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Interferogram {
    pub setup: SetupSpec,
    pub samples: Vec<Sample>,
}

/// Arm offsets (m-1)^j * x for m = 1..=M; the first is always 0.
pub fn path_offsets(setup: &SetupSpec) -> Vec<f64> {
    setup.cfg.exponents().map(|k| k * setup.x_nm).collect()
}

/// Local oscillation period (in lambda) of the fastest interference term:
/// lambda^2 / ((M-1)^j * x).
pub fn fringe_period(setup: &SetupSpec, lambda_nm: f64) -> Result<f64> {
    if !setup.band.contains(lambda_nm) {
        return Err(Error::Domain(format!(
            "{} nm is outside the band [{}, {}]",
            lambda_nm, setup.band.lambda_min_nm, setup.band.lambda_max_nm
        )));
    }
    Ok(lambda_nm * lambda_nm / (setup.cfg.max_exponent() * setup.x_nm))
}

/// Wavelength grid: lambda_min + k*dl while strictly inside the band, with the
/// final partial step clamped onto lambda_max so both endpoints are sampled.
fn grid(band: Band, dl_nm: f64) -> Vec<f64> {
    let steps = (band.span() / dl_nm + 1e-9).floor() as usize;
    let mut g = Vec::with_capacity(steps + 1);
    for k in 0..steps {
        g.push(band.lambda_min_nm + k as f64 * dl_nm);
    }
    g.push(band.lambda_max_nm);
    g
}

/// Record one interferogram. Deterministic: the same setup (seed included)
/// yields a bit-identical result.
pub fn simulate(setup: &SetupSpec) -> Result<Interferogram> {
    setup.validate()?;
    let cfg = setup.cfg;
    let m = cfg.m() as usize;
    let noise = &setup.noise;
    let lambdas = grid(setup.band, setup.dl_nm);

    // Frozen per-interferogram draws (streams keep the patterns independent
    // of how much per-sample noise is consumed).
    let eps: Vec<f64> = if noise.dx_cal_nm > 0.0 {
        let mut rng = ChaCha12Rng::seed_from_u64(noise.seed);
        rng.set_stream(1);
        (0..m)
            .map(|_| rng.random_range(-noise.dx_cal_nm..=noise.dx_cal_nm))
            .collect()
    } else {
        vec![0.0; m]
    };
    let eta: Vec<f64> = if noise.dlambda_cal_nm > 0.0 {
        let mut rng = ChaCha12Rng::seed_from_u64(noise.seed);
        rng.set_stream(2);
        (0..lambdas.len())
            .map(|_| rng.random_range(-noise.dlambda_cal_nm..=noise.dlambda_cal_nm))
            .collect()
    } else {
        vec![0.0; lambdas.len()]
    };
    let mut shot = if noise.sigma_i > 0.0 {
        let mut rng = ChaCha12Rng::seed_from_u64(noise.seed);
        rng.set_stream(3);
        let normal = Normal::new(0.0, noise.sigma_i)
            .map_err(|e| Error::Config(format!("bad intensity noise spec: {e}")))?;
        Some((rng, normal))
    } else {
        None
    };

    // Equal per-arm amplitudes cancel against the normalization; collapsing
    // them to the unit path keeps noiseless output bit-identical to sumcore.
    let uniform = noise.amplitudes.is_empty()
        || noise.amplitudes.windows(2).all(|w| w[0] == w[1]);
    let offsets = path_offsets(setup);
    let quiet_intensity = noise.dx_cal_nm == 0.0 && uniform;

    let mut samples = Vec::with_capacity(lambdas.len());
    let mut prev_abscissa = f64::NEG_INFINITY;
    for (k, &lambda) in lambdas.iter().enumerate() {
        let value = if quiet_intensity {
            intensity_at_wavelength(cfg, setup.x_nm, lambda)?.value()
        } else {
            let mut s = Complex64::new(0.0, 0.0);
            let mut asum = 0.0;
            for (arm, offset) in offsets.iter().enumerate() {
                let a = if uniform { 1.0 } else { noise.amplitudes[arm] };
                s += a * phasor((offset + eps[arm]) / lambda);
                asum += a;
            }
            s.norm_sqr() / (asum * asum)
        };
        let value = match &mut shot {
            Some((rng, normal)) => value + normal.sample(rng),
            None => value,
        };
        let value = value.clamp(0.0, INTENSITY_CLAMP);

        // Reading errors are bounded but iid, so adjacent pixels could swap;
        // the recorded axis must stay strictly increasing for interpolation.
        let mut abscissa = lambda + eta[k];
        if abscissa <= prev_abscissa {
            abscissa = prev_abscissa + setup.dl_nm * 1e-6;
        }
        prev_abscissa = abscissa;
        samples.push(Sample { lambda_nm: abscissa, intensity: Intensity(value) });
    }
    Ok(Interferogram { setup: setup.clone(), samples })
}

impl Interferogram {
    /// Re-checks the stored-file invariants: valid setup, >= 3 samples,
    /// strictly increasing abscissas spanning the band (up to the reading
    /// error bound), intensities within the clamp range.
    pub fn validate(&self) -> Result<()> {
        self.setup.validate()?;
        if self.samples.len() < 3 {
            return Err(Error::Validation(format!(
                "need at least 3 samples, got {}",
                self.samples.len()
            )));
        }
        for pair in self.samples.windows(2) {
            if pair[1].lambda_nm <= pair[0].lambda_nm {
                return Err(Error::Validation(format!(
                    "wavelengths must be strictly increasing ({} then {})",
                    pair[0].lambda_nm, pair[1].lambda_nm
                )));
            }
        }
        let slack = self.setup.noise.dlambda_cal_nm + 1e-9 * self.setup.band.lambda_max_nm;
        let first = self.samples.first().unwrap().lambda_nm;
        let last = self.samples.last().unwrap().lambda_nm;
        let band = self.setup.band;
        if (first - band.lambda_min_nm).abs() > slack + self.setup.dl_nm * 1e-3
            || (last - band.lambda_max_nm).abs() > slack + self.setup.dl_nm * 1e-3
        {
            return Err(Error::Validation(format!(
                "samples span [{first}, {last}] instead of the band [{}, {}]",
                band.lambda_min_nm, band.lambda_max_nm
            )));
        }
        for s in &self.samples {
            let v = s.intensity.value();
            if !((-1e-9..=INTENSITY_CLAMP + 1e-9).contains(&v)) {
                return Err(Error::Validation(format!(
                    "intensity {v} at {} nm outside [0, {INTENSITY_CLAMP}]",
                    s.lambda_nm
                )));
            }
        }
        Ok(())
    }
}

const FILE_MAGIC: &str = "# ctes interferogram v1";
const SETUP_PREFIX: &str = "# setup: ";
const COLUMNS: &str = "lambda_nm,intensity";

/// Write an interferogram as a two-line header block (magic + setup JSON)
/// followed by a CSV body. Floats carry 17 significant digits so the file
/// round-trips losslessly.
pub fn write_interferogram(ig: &Interferogram, path: &Path) -> Result<()> {
    let mut out = String::new();
    out.push_str(FILE_MAGIC);
    out.push('\n');
    out.push_str(SETUP_PREFIX);
    out.push_str(
        &serde_json::to_string(&ig.setup)
            .map_err(|e| Error::Validation(format!("unserializable setup: {e}")))?,
    );
    out.push('\n');
    out.push_str(COLUMNS);
    out.push('\n');
    for s in &ig.samples {
        let _ = writeln!(out, "{:.16e},{:.16e}", s.lambda_nm, s.intensity.value());
    }
    fs::write(path, out)?;
    Ok(())
}

/// Read an interferogram written by [`write_interferogram`] and validate all
/// type invariants before returning it.
pub fn read_interferogram(path: &Path) -> Result<Interferogram> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();

    let (_, magic) = lines
        .next()
        .ok_or_else(|| Error::Parse { line: 1, message: "empty file".into() })?;
    if magic.trim() != FILE_MAGIC {
        return Err(Error::Parse {
            line: 1,
            message: format!("missing metadata header (expected `{FILE_MAGIC}`)"),
        });
    }
    let (_, setup_line) = lines
        .next()
        .ok_or_else(|| Error::Parse { line: 2, message: "missing setup metadata".into() })?;
    let setup_json = setup_line.strip_prefix(SETUP_PREFIX).ok_or_else(|| Error::Parse {
        line: 2,
        message: format!("missing metadata header (expected `{SETUP_PREFIX}...`)"),
    })?;
    let setup: SetupSpec = serde_json::from_str(setup_json)
        .map_err(|e| Error::Parse { line: 2, message: format!("bad setup metadata: {e}") })?;
    let (_, cols) = lines
        .next()
        .ok_or_else(|| Error::Parse { line: 3, message: "missing column header".into() })?;
    if cols.trim() != COLUMNS {
        return Err(Error::Parse {
            line: 3,
            message: format!("expected column header `{COLUMNS}`, got `{cols}`"),
        });
    }

    let mut samples = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let (a, b) = line.split_once(',').ok_or_else(|| Error::Parse {
            line: lineno,
            message: "expected `lambda,intensity`".into(),
        })?;
        let lambda_nm: f64 = a.trim().parse().map_err(|e| Error::Parse {
            line: lineno,
            message: format!("bad wavelength `{a}`: {e}"),
        })?;
        let intensity: f64 = b.trim().parse().map_err(|e| Error::Parse {
            line: lineno,
            message: format!("bad intensity `{b}`: {e}"),
        })?;
        samples.push(Sample { lambda_nm, intensity: Intensity(intensity) });
    }

    let ig = Interferogram { setup, samples };
    ig.validate()?;
    Ok(ig)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup_207911(dl: f64) -> SetupSpec {
        SetupSpec::new(
            SumConfig::new(3, 2).unwrap(),
            207911.0,
            Band::new(450.173, 461.934).unwrap(),
            dl,
            NoiseSpec::default(),
        )
        .unwrap()
    }

    #[test]
    fn arm_offsets() {
        let s = SetupSpec::new(
            SumConfig::new(3, 2).unwrap(),
            10.0,
            Band::new(400.0, 800.0).unwrap(),
            0.5,
            NoiseSpec::default(),
        )
        .unwrap();
        assert_eq!(path_offsets(&s), vec![0.0, 10.0, 40.0]);

        let s = SetupSpec::new(
            SumConfig::new(2, 5).unwrap(),
            7.0,
            Band::new(400.0, 800.0).unwrap(),
            0.5,
            NoiseSpec::default(),
        )
        .unwrap();
        assert_eq!(path_offsets(&s), vec![0.0, 7.0]);

        let s = setup_207911(0.01);
        let s3 = SetupSpec { cfg: SumConfig::new(3, 3).unwrap(), ..s };
        assert_eq!(path_offsets(&s3), vec![0.0, 207911.0, 8.0 * 207911.0]);
    }

    #[test]
    fn fringe_periods() {
        let s = setup_207911(0.01);
        let p = fringe_period(&s, 456.0).unwrap();
        assert!((p - 0.250_030_06).abs() < 1e-7);
        assert!(fringe_period(&s, 400.0).is_err());

        let dual = SetupSpec::new(
            SumConfig::new(3, 2).unwrap(),
            523426.8,
            Band::new(460.36, 463.24).unwrap(),
            0.002,
            NoiseSpec::default(),
        )
        .unwrap();
        let p = fringe_period(&dual, 462.0).unwrap();
        assert!((p - 0.101_945_5).abs() < 1e-6);

        // Two arms with x = lambda oscillate once per wavelength.
        let s2 = SetupSpec::new(
            SumConfig::new(2, 1).unwrap(),
            600.0,
            Band::new(400.0, 800.0).unwrap(),
            10.0,
            NoiseSpec::default(),
        )
        .unwrap();
        assert!((fringe_period(&s2, 600.0).unwrap() - 600.0).abs() < 1e-9);
    }

    #[test]
    fn grid_counts_and_endpoints() {
        let ig = simulate(&setup_207911(0.01)).unwrap();
        assert_eq!(ig.samples.len(), 1177);
        assert_eq!(ig.samples[0].lambda_nm, 450.173);
        assert_eq!(ig.samples.last().unwrap().lambda_nm, 461.934);
        // Exact fit keeps a uniform grid.
        let s = SetupSpec::new(
            SumConfig::new(2, 1).unwrap(),
            1000.0,
            Band::new(400.0, 500.0).unwrap(),
            0.5,
            NoiseSpec::default(),
        )
        .unwrap();
        let ig = simulate(&s).unwrap();
        assert_eq!(ig.samples.len(), 201);
        assert_eq!(ig.samples.last().unwrap().lambda_nm, 500.0);
    }

    #[test]
    fn inadequate_sampling_names_the_bound() {
        let cfg = SumConfig::new(3, 2).unwrap();
        let band = Band::new(450.173, 461.934).unwrap();
        let err = SetupSpec::new(cfg, 207911.0, band, 0.1, NoiseSpec::default()).unwrap_err();
        match err {
            Error::InadequateSampling { dl_nm, max_dl_nm } => {
                assert_eq!(dl_nm, 0.1);
                assert!((max_dl_nm - 450.173f64.powi(2) / (4.0 * 207911.0) / 8.0).abs() < 1e-12);
            }
            other => panic!("expected sampling error, got {other:?}"),
        }
    }

    #[test]
    fn noiseless_samples_match_sumcore_exactly() {
        for (m, j) in [(2u32, 1u32), (3, 1), (3, 2), (3, 3)] {
            let s = SetupSpec::new(
                SumConfig::new(m, j).unwrap(),
                207911.0,
                Band::new(450.173, 461.934).unwrap(),
                0.01,
                NoiseSpec::default(),
            )
            .unwrap();
            let ig = simulate(&s).unwrap();
            for sample in ig.samples.iter().step_by(97) {
                let reference =
                    intensity_at_wavelength(s.cfg, s.x_nm, sample.lambda_nm).unwrap().value();
                assert!(
                    (sample.intensity.value() - reference).abs() <= 1e-12,
                    "M={m} j={j} at {} nm",
                    sample.lambda_nm
                );
            }
        }
    }

    #[test]
    fn two_path_closed_form() {
        let s = SetupSpec::new(
            SumConfig::new(2, 1).unwrap(),
            812.5,
            Band::new(400.0, 800.0).unwrap(),
            5.0,
            NoiseSpec::default(),
        )
        .unwrap();
        let ig = simulate(&s).unwrap();
        for sample in &ig.samples {
            let expected = (std::f64::consts::PI * 812.5 / sample.lambda_nm).cos().powi(2);
            assert!((sample.intensity.value() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn equal_amplitudes_normalize_away() {
        let mut a = setup_207911(0.01);
        a.noise.amplitudes = vec![1.0, 1.0, 1.0];
        let mut b = setup_207911(0.01);
        b.noise.amplitudes = vec![2.0, 2.0, 2.0];
        assert_eq!(simulate(&a).unwrap().samples, simulate(&b).unwrap().samples);
    }

    #[test]
    fn unequal_amplitudes_lift_the_dark_fringes() {
        // Aligned phasors still normalize to 1 at the peaks, but unbalanced
        // arms can no longer cancel: |1 - 0.25 - 0.25|^2 / 1.5^2 floors the
        // pattern at 1/9.
        let mut s = setup_207911(0.01);
        s.noise.amplitudes = vec![1.0, 0.25, 0.25];
        let ig = simulate(&s).unwrap();
        let max = ig.samples.iter().map(|s| s.intensity.value()).fold(0.0, f64::max);
        let min = ig.samples.iter().map(|s| s.intensity.value()).fold(1.0, f64::min);
        assert!(max > 0.99);
        assert!(min > 0.1);

        let balanced = simulate(&setup_207911(0.01)).unwrap();
        let balanced_min = balanced.samples.iter().map(|s| s.intensity.value()).fold(1.0, f64::min);
        assert!(balanced_min < min);
    }

    #[test]
    fn general_path_agrees_with_sumcore_when_quiet() {
        // Amplitude path exercised with unequal-then-equal values.
        let mut s = setup_207911(0.01);
        s.noise.amplitudes = vec![1.0, 1.0, 1.0 + 1e-13];
        let ig = simulate(&s).unwrap();
        for sample in ig.samples.iter().step_by(131) {
            let reference =
                intensity_at_wavelength(s.cfg, s.x_nm, sample.lambda_nm).unwrap().value();
            assert!((sample.intensity.value() - reference).abs() < 1e-9);
        }
    }

    #[test]
    fn seeded_noise_is_deterministic() {
        let mut s = setup_207911(0.01);
        s.noise = NoiseSpec { sigma_i: 0.01, seed: 7, ..NoiseSpec::hardware(7) };
        let a = simulate(&s).unwrap();
        let b = simulate(&s).unwrap();
        assert_eq!(a.samples, b.samples);
        s.noise.seed = 8;
        let c = simulate(&s).unwrap();
        assert_ne!(a.samples, c.samples);
    }

    #[test]
    fn noisy_abscissas_stay_sorted() {
        let mut s = setup_207911(0.01);
        s.noise = NoiseSpec::hardware(1234);
        let ig = simulate(&s).unwrap();
        ig.validate().unwrap();
        assert!(ig
            .samples
            .windows(2)
            .all(|w| w[1].lambda_nm > w[0].lambda_nm));
    }
}
