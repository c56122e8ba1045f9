//! Acceptance suite: one test per release criterion, each printing a single
//! PASS/FAIL line (run with `--nocapture` to see them all).
//!
//! Criterion 10 (noisy classification at the bench noise figures) is a design
//! target the fixed-threshold policy cannot meet at trial factors near 456;
//! it runs as specified and reports the measured hit rate. See README.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use ctes::analysis::{
    coverage, factor_scan, multi_scan, sample_at, threshold, ScanPolicy, Verdict,
};
use ctes::instrument::{simulate, Band, Interferogram, NoiseSpec, SetupSpec};
use ctes::oracle::{divisors_in, residue_max_intensity};
use ctes::planner::{max_single, plan, run_sequence, uncertainty, verify_coverage, Method};
use ctes::sumcore::{intensity_at_wavelength, nonfactor_ceiling, rescaled_intensity, SumConfig};

fn report(id: u32, name: &str, pass: bool, detail: &str) -> bool {
    let status = if pass { "PASS" } else { "FAIL" };
    if detail.is_empty() {
        println!("ACCEPTANCE {id:02} {name}: {status}");
    } else {
        println!("ACCEPTANCE {id:02} {name}: {status} ({detail})");
    }
    pass
}

fn reference_band() -> Band {
    Band::new(450.173, 461.934).unwrap()
}

fn reference_setup(cfg: SumConfig, noise: NoiseSpec) -> SetupSpec {
    SetupSpec::new(cfg, 207911.0, reference_band(), 0.01, noise).unwrap()
}

/// Width of the >= 1/2 region around the dominant maximum at `center` in
/// rescaled units, measured by walking outward from the nearest sample and
/// interpolating the crossings linearly.
fn half_width_at_half_max(ig: &Interferogram, n: u64, center: f64) -> f64 {
    let scale = n as f64 / ig.setup.x_nm;
    let xi: Vec<f64> = ig.samples.iter().map(|s| s.lambda_nm * scale).collect();
    let y: Vec<f64> = ig.samples.iter().map(|s| s.intensity.value()).collect();
    let peak = xi
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - center).abs().total_cmp(&(b.1 - center).abs()))
        .map(|(i, _)| i)
        .unwrap();
    assert!(y[peak] > 0.9, "no dominant maximum near {center}");

    let cross = |mut i: usize, step: isize| -> f64 {
        loop {
            let j = (i as isize + step) as usize;
            if y[j] < 0.5 {
                let t = (0.5 - y[i]) / (y[j] - y[i]);
                return xi[i] + t * (xi[j] - xi[i]);
            }
            i = j;
        }
    };
    let right = cross(peak, 1);
    let left = cross(peak, -1);
    (right - left) / 2.0
}

#[test]
fn criterion_01_noiseless_reference_scan() {
    let start = Instant::now();
    let cfg = SumConfig::new(3, 2).unwrap();
    let ig = simulate(&reference_setup(cfg, NoiseSpec::default())).unwrap();
    let scan = factor_scan(&ig, 207911, ScanPolicy::default()).unwrap();
    let elapsed = start.elapsed();

    let factors_ok = scan.factors == vec![451, 461];
    let peaks_ok = [451u64, 461].iter().all(|&l| {
        let v = sample_at(&ig, l as f64).unwrap().value();
        v >= 0.9999
    });
    let rejections_ok = (452u64..=460).all(|l| {
        let check = scan.checks.iter().find(|c| c.trial_factor == l).unwrap();
        let cut = threshold(check.ceiling, 0.5);
        check.verdict == Verdict::NonFactor && check.intensity.unwrap().value() <= cut
    });
    let fast = elapsed.as_secs_f64() < 1.0;
    let pass = report(
        1,
        "noiseless 207911 reference scan",
        factors_ok && peaks_ok && rejections_ok && fast,
        &format!("factors {:?}, {:.0} ms", scan.factors, elapsed.as_secs_f64() * 1e3),
    );
    assert!(pass);
}

#[test]
fn criterion_02_dual_candidate_window() {
    // dl left open by the scenario; 0.002 nm keeps the 3-point interpolation
    // error below the ~4e-5 threshold gap at l ~ 1153.
    let setup = SetupSpec::new(
        SumConfig::new(3, 2).unwrap(),
        523426.8,
        Band::new(460.36, 463.24).unwrap(),
        0.002,
        NoiseSpec::default(),
    )
    .unwrap();
    let ig = simulate(&setup).unwrap();
    let reports = multi_scan(&ig, &[1_308_567, 1_306_349], ScanPolicy::default()).unwrap();

    let sets_ok = reports[0].factors == vec![1157] && reports[1].factors == vec![1153];
    let shared_rejected = reports.iter().all(|r| {
        r.checks
            .iter()
            .find(|c| c.trial_factor == 1155)
            .is_some_and(|c| c.verdict == Verdict::NonFactor)
    });
    let pass = report(
        2,
        "dual-candidate window factorization",
        sets_ok && shared_rejected,
        &format!("factors {:?} / {:?}", reports[0].factors, reports[1].factors),
    );
    assert!(pass);
}

#[test]
fn criterion_03_order_variants_and_peak_sharpness() {
    let mut widths = std::collections::BTreeMap::new();
    let mut all_factors_ok = true;
    for (m, j) in [(2u32, 2u32), (3, 1), (3, 2), (3, 3)] {
        let cfg = SumConfig::new(m, j).unwrap();
        let ig = simulate(&reference_setup(cfg, NoiseSpec::default())).unwrap();
        let scan = factor_scan(&ig, 207911, ScanPolicy::default()).unwrap();
        all_factors_ok &= scan.factors == vec![451, 461];
        widths.insert((m, j), half_width_at_half_max(&ig, 207911, 461.0));
    }
    let ordering_ok = widths[&(3, 3)] < widths[&(3, 2)]
        && widths[&(3, 2)] < widths[&(3, 1)]
        && widths[&(2, 2)] > widths[&(3, 2)];
    let pass = report(
        3,
        "M/j variants and peak sharpness",
        all_factors_ok && ordering_ok,
        &format!(
            "HWHM j3 {:.4} < j2 {:.4} < j1 {:.4}; M2 {:.4}",
            widths[&(3, 3)],
            widths[&(3, 2)],
            widths[&(3, 1)],
            widths[&(2, 2)]
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_04_planner_constants() {
    let octave = Band::new(400.0, 800.0).unwrap();
    let m1 = max_single(octave, Method::One);
    let m2 = max_single(octave, Method::Two);
    let p2 = plan(1, 1_000_000, octave, Method::Two, None).unwrap();
    let p1 = plan(10_000, 1_000_000, octave, Method::One, None).unwrap();
    let ok = m1.value == 36
        && m1.exact
        && m2.value == 4
        && p2.count == 10
        && p2.x0_nm == 400_000.0
        && p1.count == 12;
    let pass = report(
        4,
        "planner constants",
        ok,
        &format!(
            "N1 {} N2 {} | n {} x0 {} | n {}",
            m1.value, m2.value, p2.count, p2.x0_nm, p1.count
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_05_scaling_law_property() {
    let mut rng = ChaCha12Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let m = rng.random_range(2u32..=3);
        let j = rng.random_range(1u32..=3);
        let cfg = SumConfig::new(m, j).unwrap();
        let lambda = rng.random_range(200.0..2000.0);
        // u = x/lambda moderate so the 1e-12 budget absorbs the float
        // rounding of xi_n (see sumcore scaling-law test).
        let x = rng.random_range(0.5..50.0) * lambda;
        let n = rng.random_range(1u64..=1_000_000);
        let direct = intensity_at_wavelength(cfg, x, lambda).unwrap().value();
        let xi_n = n as f64 * lambda / x;
        let scaled = rescaled_intensity(cfg, n, xi_n).unwrap().value();
        worst = worst.max((direct - scaled).abs());
    }
    let pass = report(
        5,
        "scaling law over 10^4 random triples",
        worst <= 1e-12,
        &format!("worst |dI| = {worst:.2e}"),
    );
    assert!(pass);
}

#[test]
fn criterion_06_method_two_oracle_equivalence() {
    let start = Instant::now();
    let band = Band::new(400.0, 800.0).unwrap();
    let p = plan(2, 2000, band, Method::Two, None).unwrap();
    // 128 samples per fringe at x0: the interpolation error (~2e-6) must
    // undercut the smallest threshold gap 0.5*(1 - ceiling(2000)) ~ 1.4e-5.
    let dl = 400.0 * 400.0 / (4.0 * p.x0_nm) / 128.0;
    let policy = ScanPolicy { include_two: true, ..ScanPolicy::default() };
    let ns: Vec<u64> = (2..=2000).collect();
    let reports = run_sequence(
        &p,
        SumConfig::new(3, 2).unwrap(),
        &ns,
        &NoiseSpec::default(),
        dl,
        policy,
    )
    .unwrap();

    let mut mismatches = Vec::new();
    for r in &reports {
        let (lo, hi) = r.coverage.expect("nonempty coverage");
        let expected = divisors_in(r.n, lo, hi);
        if r.factors != expected {
            mismatches.push(r.n);
        }
        if !r.complete {
            mismatches.push(r.n);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = report(
        6,
        "method-2 pipeline vs trial division on [2, 2000]",
        mismatches.is_empty() && elapsed < 60.0,
        &format!("{} candidates, {elapsed:.1} s, mismatches {mismatches:?}", reports.len()),
    );
    assert!(pass);
}

#[test]
fn criterion_07_random_plan_coverage() {
    let mut rng = ChaCha12Rng::seed_from_u64(7);
    let mut failures = 0usize;
    for trial in 0..100 {
        let lmin: f64 = rng.random_range(300.0..900.0);
        let c: f64 = rng.random_range(1.5..3.0);
        let band = Band::new(lmin, lmin * c).unwrap();
        let n_max = rng.random_range(10u64..=100_000_000);
        let n_min = rng.random_range(1..=n_max);
        let method = if trial % 2 == 0 { Method::One } else { Method::Two };
        let p = plan(n_min, n_max, band, method, None).unwrap();
        for _ in 0..10 {
            let n = rng.random_range(n_min..=n_max);
            match verify_coverage(&p, n) {
                Ok(proof) => {
                    // Owned ranges must tile their span without gaps.
                    let mut next = None;
                    for iv in proof.intervals.iter().filter(|iv| iv.owned.is_some()) {
                        let (lo, hi) = iv.owned.unwrap();
                        if let Some(expect) = next {
                            if lo != expect {
                                failures += 1;
                            }
                        }
                        next = Some(hi + 1);
                    }
                }
                Err(_) => failures += 1,
            }
        }
    }
    let pass = report(
        7,
        "coverage abutment over 100 random plans",
        failures == 0,
        &format!("{failures} failures"),
    );
    assert!(pass);
}

#[test]
fn criterion_08_ceiling_cross_check() {
    let mut worst = 0.0f64;
    for m in [2u32, 3] {
        for j in [1u32, 2, 3] {
            let cfg = SumConfig::new(m, j).unwrap();
            for l in 2u64..=2000 {
                let enumerated = residue_max_intensity(cfg, l).unwrap().1;
                let cached = nonfactor_ceiling(cfg, l).unwrap().value();
                worst = worst.max((enumerated - cached).abs());
            }
        }
    }
    let pass = report(
        8,
        "residue enumeration vs cached ceilings (l <= 2000)",
        worst <= 1e-12,
        &format!("worst |d| = {worst:.2e}"),
    );
    assert!(pass);
}

#[test]
fn criterion_09_uncertainty_budget() {
    let b = uncertainty(456.0, 207911.0, 0.006, 10.0, 207911);
    let formula = 456.0 * 10.0 / (207911.0 * 207911.0) + 0.006 / 207911.0;
    let formula_ok = (b.dxi - formula).abs() <= 1e-6 * formula;
    let magnitude_ok = (b.dxi_n - 0.0279).abs() < 1e-3;
    let zero = uncertainty(456.0, 207911.0, 0.0, 0.0, 207911);
    let pass = report(
        9,
        "uncertainty budget",
        formula_ok && magnitude_ok && b.resolvable && zero.dxi == 0.0,
        &format!("dxi_N = {:.5}, resolvable {}", b.dxi_n, b.resolvable),
    );
    assert!(pass);
}

#[test]
fn criterion_10_noise_robustness_target() {
    // Design target, not a reproduction: bench noise figures on the reference
    // scenario, 50 seeds, >= 48 correct classifications required.
    let cfg = SumConfig::new(3, 2).unwrap();
    let mut correct = 0usize;
    for seed in 0..50u64 {
        let noise = NoiseSpec {
            sigma_i: 0.01,
            dlambda_cal_nm: 0.006,
            dx_cal_nm: 10.0,
            amplitudes: Vec::new(),
            seed,
        };
        let ig = simulate(&reference_setup(cfg, noise)).unwrap();
        let scan = factor_scan(&ig, 207911, ScanPolicy::default()).unwrap();
        if scan.factors == vec![451, 461] {
            correct += 1;
        }
    }
    let pass = report(
        10,
        "noisy classification target (design target)",
        correct >= 48,
        &format!(
            "{correct}/50 correct; the per-l ceiling threshold demands ~3e-4 \
             accuracy at l~456, far inside the sigma_I=0.01 noise floor"
        ),
    );
    assert!(pass, "known-red design target: {correct}/50 < 48/50");
}

#[test]
fn coverage_endpoints_match_exact_rational_arithmetic() {
    // Supporting check for the snapped float endpoints: compare against u128
    // scaled-integer ceil/floor on decimal-representable inputs.
    let cases: [(u64, u64, u64, u64); 4] = [
        // (x, lmin, lmax, n) scaled by 10 so they are integers
        (2079110, 4501730, 4619340, 207911),
        (5234268, 4603600, 4632400, 1_308_567),
        (5234268, 4603600, 4632400, 1_306_349),
        (4000, 4000, 8000, 36),
    ];
    for (x10, lmin10, lmax10, n) in cases {
        let band = Band::new(lmin10 as f64 / 1e4, lmax10 as f64 / 1e4).unwrap();
        let x = x10 as f64 / 10.0;
        // Adjust scales: x entries use one decimal, bands four.
        let got = coverage(x, band, n);
        let lo_exact = {
            let num = n as u128 * lmin10 as u128;
            let den = x10 as u128 * 1000;
            (num.div_ceil(den)).max(2) as u64
        };
        let hi_exact = {
            let num = n as u128 * lmax10 as u128;
            let den = x10 as u128 * 1000;
            ((num / den) as u64).min(n)
        };
        let expected = if lo_exact > hi_exact { None } else { Some((lo_exact, hi_exact)) };
        assert_eq!(got, expected, "x = {x}, n = {n}");
    }
}
