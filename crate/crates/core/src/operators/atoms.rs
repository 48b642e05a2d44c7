use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Result, WfError};
use crate::grid::{pairwise_sum, DyadicInterval, GridFunction};

/// Largest `|int_I a dmu|` accepted as zero mean.
pub const MEAN_TOLERANCE: f64 = 1e-12;

const SUP_SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AtomViolation {
    /// Nonzero values outside the interval.
    Support { points: usize, max_abs: f64 },
    Mean { mean: f64 },
    SupNorm { sup: f64, bound: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct AtomCertificate {
    pub base: usize,
    pub depth: u32,
    pub p: f64,
    pub mean: f64,
    pub sup_norm: f64,
    /// `mu(I)^(-1/p)`.
    pub bound: f64,
    pub violations: Vec<AtomViolation>,
}

impl AtomCertificate {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(WfError::InvalidExponent(p))
    }
}

fn atom_bound(interval: &DyadicInterval, p: f64) -> f64 {
    // mu(I)^(-1/p) = 2^(depth/p)
    (interval.depth() as f64 / p).exp2()
}

/// Checks support, mean and sup-norm of `a` against `interval`. Violations
/// are reported in the certificate; only malformed input is an error.
pub fn validate_atom(a: &GridFunction, p: f64, interval: &DyadicInterval) -> Result<AtomCertificate> {
    check_exponent(p)?;
    if a.scale() != interval.scale() {
        return Err(WfError::ScaleMismatch {
            left: a.scale(),
            right: interval.scale(),
        });
    }
    let values = a.values();
    let mut violations = Vec::new();

    let (outside, outside_max) = values
        .iter()
        .enumerate()
        .filter(|&(i, v)| *v != 0.0 && !interval.contains_index(i))
        .fold((0usize, 0.0f64), |(c, m), (_, v)| (c + 1, m.max(v.abs())));
    if outside > 0 {
        violations.push(AtomViolation::Support {
            points: outside,
            max_abs: outside_max,
        });
    }

    let inside: Vec<f64> = interval.members().map(|i| values[i]).collect();
    let mean = pairwise_sum(&inside) * (-(a.scale() as f64)).exp2();
    if !(mean.abs() <= MEAN_TOLERANCE) {
        violations.push(AtomViolation::Mean { mean });
    }

    let bound = atom_bound(interval, p);
    let sup_norm = a.sup_norm();
    if !(sup_norm <= bound * (1.0 + SUP_SLACK)) {
        violations.push(AtomViolation::SupNorm { sup: sup_norm, bound });
    }

    Ok(AtomCertificate {
        base: interval.base().index(),
        depth: interval.depth(),
        p,
        mean,
        sup_norm,
        bound,
        violations,
    })
}

/// A random `p`-atom on `interval`: uniform values on the interval, cell
/// average subtracted, then rescaled so that `||a||_inf = mu(I)^(-1/p)`.
/// Single-point intervals only carry the zero atom.
pub fn random_atom(interval: &DyadicInterval, p: f64, seed: u64) -> Result<GridFunction> {
    check_exponent(p)?;
    let scale = interval.scale();
    let mut values = vec![0.0; 1usize << scale];
    if interval.len() < 2 {
        return GridFunction::new(scale, values);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let members: Vec<usize> = interval.members().collect();
    let raw: Vec<f64> = members.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
    let average = pairwise_sum(&raw) / raw.len() as f64;
    let centered: Vec<f64> = raw.iter().map(|v| v - average).collect();
    let peak = centered.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let factor = atom_bound(interval, p) / peak;
    for (&i, v) in members.iter().zip(&centered) {
        values[i] = v * factor;
    }
    GridFunction::new(scale, values)
}
