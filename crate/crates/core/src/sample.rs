//! Deterministic point sampling, check reports and the finite-difference
//! oracle.

use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;

/// Closed coordinate interval of a sampling box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleConfig {
    pub seed: u64,
    pub count: usize,
    pub tolerance: f64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            seed: 42,
            count: 200,
            tolerance: 1e-9,
        }
    }
}

impl SampleConfig {
    pub fn with_tolerance(self, tolerance: f64) -> Self {
        SampleConfig { tolerance, ..self }
    }

    pub fn with_count(self, count: usize) -> Self {
        SampleConfig { count, ..self }
    }
}

/// Points drawn uniformly from a box; identical for identical inputs.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSample {
    pub seed: u64,
    pub count: usize,
    pub points: Vec<Vec<f64>>,
}

impl PointSample {
    pub fn draw(seed: u64, count: usize, domain: &[Interval]) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = (0..count)
            .map(|_| {
                domain
                    .iter()
                    .map(|iv| {
                        if iv.lo == iv.hi {
                            iv.lo
                        } else {
                            rng.random_range(iv.lo..=iv.hi)
                        }
                    })
                    .collect()
            })
            .collect();
        PointSample {
            seed,
            count,
            points,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.points.iter().map(Vec::as_slice)
    }
}

/// Outcome of one verification over a sample.
///
/// `max_abs_err` is the largest residual found, normalised by
/// `max(1, operand magnitude)` where the check says so.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub check_id: String,
    pub manifold_id: String,
    pub sample_count: usize,
    pub max_abs_err: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckReport {
    pub fn new(
        check_id: impl Into<String>,
        manifold_id: impl Into<String>,
        sample_count: usize,
        max_abs_err: f64,
        tolerance: f64,
    ) -> Self {
        CheckReport {
            check_id: check_id.into(),
            manifold_id: manifold_id.into(),
            sample_count,
            max_abs_err,
            tolerance,
            // NaN fails.
            pass: max_abs_err <= tolerance,
        }
    }
}

/// A sample together with the tolerance applied to it.
#[derive(Clone, Debug)]
pub struct Verifier {
    pub sample: PointSample,
    pub tolerance: f64,
}

impl Verifier {
    pub fn new(domain: &[Interval], config: &SampleConfig) -> Self {
        Verifier {
            sample: PointSample::draw(config.seed, config.count, domain),
            tolerance: config.tolerance,
        }
    }

    pub fn with_tolerance(&self, tolerance: f64) -> Self {
        Verifier {
            sample: self.sample.clone(),
            tolerance,
        }
    }

    /// Largest value of `residual` over the sample.
    pub fn max_over(&self, mut residual: impl FnMut(&[f64]) -> Result<f64>) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for x in self.sample.iter() {
            let r = residual(x)?;
            if r.is_nan() {
                return Ok(f64::NAN);
            }
            worst = worst.max(r);
        }
        Ok(worst)
    }

    pub fn check(
        &self,
        check_id: &str,
        manifold_id: &str,
        residual: impl FnMut(&[f64]) -> Result<f64>,
    ) -> Result<CheckReport> {
        let worst = self.max_over(residual)?;
        Ok(CheckReport::new(
            check_id,
            manifold_id,
            self.sample.count,
            worst,
            self.tolerance,
        ))
    }
}

/// Residual normalised by operand size once components exceed unit size.
pub fn scaled(residual: f64, operand_scale: f64) -> f64 {
    residual / operand_scale.max(1.0)
}

/// Central difference `(f(x+h e_i) - f(x-h e_i)) / 2h`.
pub fn fd_partial<E>(
    f: impl Fn(&[f64]) -> core::result::Result<f64, E>,
    x: &[f64],
    i: usize,
    h: f64,
) -> core::result::Result<f64, E> {
    let mut xp = x.to_vec();
    let mut xm = x.to_vec();
    xp[i] += h;
    xm[i] -= h;
    Ok((f(&xp)? - f(&xm)?) / (2.0 * h))
}
