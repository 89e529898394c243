//! Threshold search: coarse sampling followed by bisection.

use rayon::prelude::*;
use serde::Serialize;

use crate::criterion::{CriterionOptions, CriterionSpec};
use crate::error::{usage, Result};
use crate::family::Family;

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_SAMPLES: usize = 21;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanResult {
    pub family: String,
    pub criterion: String,
    pub parameter: String,
    /// Final bracket: the margin is `≤ 0` at `lo` and `> 0` at `hi`. Equal to
    /// the scanned range when there is no crossing.
    pub lo: f64,
    pub hi: f64,
    /// Midpoint of the final bracket, or `None` when no crossing was found.
    pub threshold: Option<f64>,
    pub iterations: usize,
    /// Coarse samples `(param, margin)`, in increasing `param`.
    pub margins: Vec<(f64, f64)>,
    /// Bisection probes `(param, margin)`, in evaluation order.
    pub bisection: Vec<(f64, f64)>,
}

impl ScanResult {
    pub fn crossed(&self) -> bool {
        self.threshold.is_some()
    }
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
    pub samples: usize,
}

impl ScanConfig {
    pub fn full(family: &Family, tol: f64) -> Self {
        Self {
            lo: 0.0,
            hi: family.upper(),
            tol,
            samples: DEFAULT_SAMPLES,
        }
    }

    fn validate(&self, family: &Family) -> Result<()> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(usage(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        if self.samples < 2 {
            return Err(usage("a scan needs at least 2 samples"));
        }
        let upper = family.upper();
        if !(0.0 <= self.lo && self.lo < self.hi && self.hi <= upper + 1e-12) {
            return Err(usage(format!(
                "scan range [{}, {}] must satisfy 0 <= lo < hi <= {upper}",
                self.lo, self.hi
            )));
        }
        Ok(())
    }
}

pub fn margin_at(
    family: &Family,
    criterion: &CriterionSpec,
    opts: &CriterionOptions,
    t: f64,
) -> Result<f64> {
    Ok(criterion.evaluate(&family.state(t)?, opts)?.margin)
}

/// Samples the range, takes the first `≤ 0 → > 0` sign change and bisects it
/// down to `tol`.
pub fn scan(
    family: &Family,
    criterion: &CriterionSpec,
    opts: &CriterionOptions,
    config: &ScanConfig,
) -> Result<ScanResult> {
    config.validate(family)?;
    let step = (config.hi - config.lo) / (config.samples - 1) as f64;
    let margins: Vec<(f64, f64)> = (0..config.samples)
        .into_par_iter()
        .map(|i| {
            let t = if i + 1 == config.samples {
                config.hi
            } else {
                config.lo + step * i as f64
            };
            margin_at(family, criterion, opts, t).map(|m| (t, m))
        })
        .collect::<Result<_>>()?;
    let mut result = ScanResult {
        family: family.to_string(),
        criterion: criterion.to_string(),
        parameter: family.parameter().to_string(),
        lo: config.lo,
        hi: config.hi,
        threshold: None,
        iterations: 0,
        margins,
        bisection: Vec::new(),
    };
    let Some(i) = result
        .margins
        .windows(2)
        .position(|w| w[0].1 <= 0.0 && w[1].1 > 0.0)
    else {
        return Ok(result);
    };
    let (mut lo, mut hi) = (result.margins[i].0, result.margins[i + 1].0);
    while hi - lo > config.tol {
        let mid = 0.5 * (lo + hi);
        let m = margin_at(family, criterion, opts, mid)?;
        result.bisection.push((mid, m));
        if m > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        result.iterations += 1;
    }
    result.lo = lo;
    result.hi = hi;
    result.threshold = Some(0.5 * (lo + hi));
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(family: &str, criterion: &str) -> ScanResult {
        let family = Family::parse(family).unwrap();
        let criterion = CriterionSpec::parse(criterion).unwrap();
        let config = ScanConfig::full(&family, DEFAULT_TOL);
        scan(&family, &criterion, &CriterionOptions::default(), &config).unwrap()
    }

    #[test]
    fn w_noise_threshold() {
        let r = run("w-noise", "corollary2");
        let t = r.threshold.unwrap();
        assert!((t - 0.647236).abs() < 1e-4, "{t}");
        assert!(r.hi - r.lo <= DEFAULT_TOL);
        assert_eq!(r.margins.len(), DEFAULT_SAMPLES);
        assert_eq!(r.parameter, "y");
    }

    #[test]
    fn ghz_noise_threshold() {
        let t = run("ghz-noise:d=2", "corollary1").threshold.unwrap();
        assert!((t - (3.0 + 33f64.sqrt()) / 12.0).abs() < 1e-5);
    }

    #[test]
    fn maximally_mixed_never_crosses() {
        let r = run("maximally-mixed", "corollary2");
        assert!(!r.crossed());
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn bracket_choice_does_not_move_threshold() {
        let family = Family::WNoise;
        let criterion = CriterionSpec::parse("corollary2").unwrap();
        let opts = CriterionOptions::default();
        let mut found = Vec::new();
        for (lo, hi, samples) in [(0.0, 1.0, 21), (0.3, 0.9, 7), (0.6, 0.7, 2)] {
            let config = ScanConfig {
                lo,
                hi,
                tol: 1e-6,
                samples,
            };
            found.push(
                scan(&family, &criterion, &opts, &config)
                    .unwrap()
                    .threshold
                    .unwrap(),
            );
        }
        for t in &found {
            assert!((t - found[0]).abs() <= 2e-6);
        }
    }

    #[test]
    fn rejects_bad_ranges() {
        let family = Family::parse("ghz-w-mix:x=0.5").unwrap();
        let criterion = CriterionSpec::Corollary2Signs(qfi_gme::criteria::ghz_w_signs());
        let opts = CriterionOptions::default();
        let bad = ScanConfig {
            lo: 0.0,
            hi: 0.8,
            tol: 1e-6,
            samples: 5,
        };
        assert!(scan(&family, &criterion, &opts, &bad).is_err());
        let bad = ScanConfig {
            lo: 0.0,
            hi: 0.5,
            tol: 0.0,
            samples: 5,
        };
        assert!(scan(&family, &criterion, &opts, &bad).is_err());
    }
}
