//! Independent ground truth for the rest of the crate: plain trial division
//! and exhaustive residue search. Deliberately the most boring possible
//! implementations so they stay auditable; anything clever belongs elsewhere.

use crate::error::{Error, Result};
use crate::sumcore::SumConfig;

/// Complete prime factorization obtained by trial division.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    /// (prime, exponent) pairs with primes ascending.
    pub prime_powers: Vec<(u64, u32)>,
}

impl Factorization {
    /// All divisors of n, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.prime_powers {
            let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
            for &d in &divs {
                let mut pk = 1u64;
                for _ in 0..=e {
                    next.push(d * pk);
                    if pk > self.n / p {
                        break;
                    }
                    pk *= p;
                }
            }
            divs = next;
        }
        divs.sort_unstable();
        divs.dedup();
        divs
    }

    pub fn is_prime(&self) -> bool {
        self.prime_powers.len() == 1 && self.prime_powers[0].1 == 1
    }
}

/// Factor `n` by trial division up to sqrt(n).
pub fn trial_division(n: u64) -> Result<Factorization> {
    if n < 2 {
        return Err(Error::Domain(format!("nothing to factor below 2, got {n}")));
    }
    let mut rest = n;
    let mut prime_powers = Vec::new();
    let mut push = |p: u64, rest: &mut u64| {
        let mut e = 0u32;
        while (*rest).is_multiple_of(p) {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            prime_powers.push((p, e));
        }
    };
    push(2, &mut rest);
    let mut d = 3u64;
    // checked_mul: silent wraparound here would poison every downstream test.
    while d.checked_mul(d).is_some_and(|sq| sq <= rest) {
        push(d, &mut rest);
        d += 2;
    }
    if rest > 1 {
        prime_powers.push((rest, 1));
    }
    Ok(Factorization { n, prime_powers })
}

/// Divisors of `n` inside [lo, hi], ascending. Bounds below 2 are raised to 2;
/// an inverted interval is empty.
pub fn divisors_in(n: u64, lo: u64, hi: u64) -> Vec<u64> {
    let lo = lo.max(2);
    if n < 2 || hi < lo {
        return Vec::new();
    }
    match trial_division(n) {
        Ok(f) => f
            .divisors()
            .into_iter()
            .filter(|&d| d >= lo && d <= hi)
            .collect(),
        Err(_) => Vec::new(),
    }
}

/// Exhaustive residue search: the residue r in 1..l maximizing the sum
/// intensity at u = r/l, evaluated by direct trigonometric summation.
///
/// This re-derives `sumcore::nonfactor_ceiling` without sharing its reduction
/// path, so the two can cross-check each other.
pub fn residue_max_intensity(cfg: SumConfig, l: u64) -> Result<(u64, f64)> {
    if l < 2 {
        return Err(Error::Domain(format!("trial factor must be >= 2, got {l}")));
    }
    let ks: Vec<f64> = cfg.exponents().collect();
    let m = f64::from(cfg.m());
    let mut best = (1u64, f64::MIN);
    for r in 1..l {
        let u = r as f64 / l as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for &k in &ks {
            let phase = std::f64::consts::TAU * k * u;
            re += phase.cos();
            im += phase.sin();
        }
        let v = (re * re + im * im) / (m * m);
        if v > best.1 {
            best = (r, v);
        }
    }
    Ok(best)
}
