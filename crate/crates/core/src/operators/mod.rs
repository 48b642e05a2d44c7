//! Partial sums, Fejér means and the dyadic maximal function.

mod atoms;
mod maximal;

pub use atoms::{random_atom, validate_atom, AtomCertificate, AtomViolation, MEAN_TOLERANCE};
pub use maximal::{
    atom_functional, corollary2_sequences, full_band_sequence, weighted_maximal,
    MaximalOperatorSpec, WeightSpec,
};
pub(crate) use maximal::weighted_sup;

use rayon::prelude::*;

use crate::error::{Result, WfError};
use crate::grid::{inverse_transform, lp_quasinorm, pairwise_sum, transform, GridFunction};
use crate::kernels;

/// Largest disagreement tolerated between the two Fejér mean paths.
pub const DUAL_PATH_TOLERANCE: f64 = 1e-10;

/// `S_n f = sum_{k<n} f^(k) w_k`. For `n >= 2^M` this is `f` itself.
pub fn partial_sum(f: &GridFunction, n: u64) -> GridFunction {
    if n >= f.len() as u64 {
        return f.clone();
    }
    let mut c = transform(f);
    c[n as usize..].iter_mut().for_each(|v| *v = 0.0);
    inverse_transform(&c).expect("coefficient length is 2^M")
}

/// Applies the Cesàro weights `(n - k)/n`, `k < n`, to precomputed coefficients.
pub(crate) fn fejer_from_coefficients(coefficients: &[f64], n: u64) -> GridFunction {
    let order = n as f64;
    let weighted: Vec<f64> = coefficients
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            if (k as u64) < n {
                c * ((n - k as u64) as f64 / order)
            } else {
                0.0
            }
        })
        .collect();
    inverse_transform(&weighted).expect("coefficient length is 2^M")
}

/// `sigma_n f = (1/n) sum_{k=1}^n S_k f`.
///
/// Averaging the partial sums gives every coefficient `f^(k)`, `k < n`, the
/// weight `(n - k)/n`; the mean is synthesized from those weighted
/// coefficients in one pass.
pub fn fejer_mean(f: &GridFunction, n: u64) -> Result<GridFunction> {
    if n == 0 {
        return Err(WfError::OrderOutOfRange {
            order: 0,
            scale: f.scale(),
        });
    }
    Ok(fejer_from_coefficients(&transform(f), n))
}

/// `sigma_n f(x) = int f(t) K_n(x + t) dmu(t)` with the exact kernel.
/// Quadratic in the grid size; requires `1 <= n <= 2^M`.
pub fn fejer_mean_by_convolution(f: &GridFunction, n: u64) -> Result<GridFunction> {
    let kernel = kernels::fejer_scaled(n, f.scale())?;
    let k = kernel.values();
    let values = f.values();
    let norm = (-(f.scale() as f64)).exp2() / n as f64;
    let out: Vec<f64> = (0..f.len())
        .into_par_iter()
        .map(|x| {
            let terms: Vec<f64> = values
                .iter()
                .enumerate()
                .map(|(t, &v)| v * k[x ^ t] as f64)
                .collect();
            pairwise_sum(&terms) * norm
        })
        .collect();
    GridFunction::new(f.scale(), out)
}

/// Fejér mean computed both ways.
#[derive(Clone, Debug)]
pub struct DualPathMean {
    pub mean: GridFunction,
    pub max_abs_diff: f64,
}

/// Returns the coefficient-path mean after checking it against the
/// convolution path; fails with [`WfError::PathMismatch`] beyond
/// [`DUAL_PATH_TOLERANCE`].
pub fn fejer_mean_checked(f: &GridFunction, n: u64) -> Result<DualPathMean> {
    let mean = fejer_mean(f, n)?;
    let conv = fejer_mean_by_convolution(f, n)?;
    let max_abs_diff = mean.max_abs_diff(&conv)?;
    if !(max_abs_diff <= DUAL_PATH_TOLERANCE) {
        return Err(WfError::PathMismatch(max_abs_diff));
    }
    Ok(DualPathMean { mean, max_abs_diff })
}

/// Dyadic conditional averages: entry `d` of the result has length `2^d`
/// and holds `2^d int_{I_d(x)} f dmu` at position `idx(x) mod 2^d`.
fn conditional_averages(f: &GridFunction) -> Vec<Vec<f64>> {
    let scale = f.scale() as usize;
    let mut levels = vec![Vec::new(); scale + 1];
    levels[scale] = f.values().to_vec();
    for d in (0..scale).rev() {
        let half = 1usize << d;
        let finer = &levels[d + 1];
        levels[d] = (0..half).map(|r| (finer[r] + finer[r + half]) * 0.5).collect();
    }
    levels
}

/// `S_{2^depth} f`, the average of `f` over each `I_depth(x)`.
pub fn conditional_average(f: &GridFunction, depth: u32) -> Result<GridFunction> {
    if depth > f.scale() {
        return Err(WfError::DepthOutOfRange {
            depth,
            scale: f.scale(),
        });
    }
    let levels = conditional_averages(f);
    let level = &levels[depth as usize];
    let mask = (1usize << depth) - 1;
    GridFunction::from_fn(f.scale(), |i| level[i & mask])
}

/// `f^*(x) = max_{0 <= n <= M} |2^n int_{I_n(x)} f dmu|`.
pub fn maximal_function(f: &GridFunction) -> GridFunction {
    let levels = conditional_averages(f);
    let out = (0..f.len())
        .map(|i| {
            levels
                .iter()
                .enumerate()
                .map(|(d, level)| level[i & ((1usize << d) - 1)].abs())
                .fold(0.0, f64::max)
        })
        .collect();
    GridFunction::new(f.scale(), out).expect("same length as input")
}

/// `||f||_{H_p} = ||f^*||_p`, with the martingale `F_n = S_{2^n} f`.
pub fn hardy_norm(f: &GridFunction, p: f64) -> Result<f64> {
    lp_quasinorm(&maximal_function(f), p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{integrate, DyadicInterval};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_function(seed: u64, scale: u32) -> GridFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        GridFunction::new(scale, (0..1usize << scale).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
    }

    // sigma_n f as the literal average of S_1 f, ..., S_n f.
    fn fejer_by_averaging(f: &GridFunction, n: u64) -> GridFunction {
        let mut acc = GridFunction::zeros(f.scale()).unwrap();
        for k in 1..=n {
            acc = acc.zip_with(&partial_sum(f, k), |a, b| a + b).unwrap();
        }
        acc.scaled(1.0 / n as f64)
    }

    #[test]
    fn partial_sum_examples() {
        let f = random_function(1, 6);
        let mean = integrate(&f);
        assert!(partial_sum(&f, 1).values().iter().all(|&v| (v - mean).abs() < 1e-15));
        assert!(partial_sum(&f, 0).values().iter().all(|&v| v == 0.0));
        assert_eq!(partial_sum(&f, 64), f);
        assert_eq!(partial_sum(&f, 1000), f);
        let full = partial_sum(&f, 63);
        assert!(full.max_abs_diff(&f).unwrap() > 0.0);
    }

    #[test]
    fn dyadic_partial_sums_are_conditional_averages() {
        for scale in 0..=10 {
            let f = random_function(10 + scale as u64, scale);
            for m in 0..=scale {
                let s = partial_sum(&f, 1 << m);
                // oracle: average over the residue class, summed directly
                let mask = (1usize << m) - 1;
                let oracle = GridFunction::from_fn(scale, |x| {
                    let cell = DyadicInterval::new(crate::GroupPoint::new(scale, x).unwrap(), m).unwrap();
                    let vals: Vec<f64> = cell.members().map(|i| f.values()[i]).collect();
                    let _ = mask;
                    vals.iter().sum::<f64>() / vals.len() as f64
                })
                .unwrap();
                assert!(s.max_abs_diff(&oracle).unwrap() <= 1e-12);
                assert!(conditional_average(&f, m).unwrap().max_abs_diff(&oracle).unwrap() <= 1e-12);
            }
        }
    }

    #[test]
    fn fejer_examples() {
        let f = random_function(2, 5);
        let mean = integrate(&f);
        assert!(fejer_mean(&f, 1).unwrap().values().iter().all(|&v| (v - mean).abs() < 1e-15));
        assert!(matches!(fejer_mean(&f, 0), Err(WfError::OrderOutOfRange { .. })));
    }

    #[test]
    fn fejer_matches_literal_average() {
        let f = random_function(3, 5);
        for n in 1..=40 {
            let d = fejer_mean(&f, n).unwrap().max_abs_diff(&fejer_by_averaging(&f, n)).unwrap();
            assert!(d <= 1e-12, "n {n}: {d}");
        }
    }

    #[test]
    fn fejer_dual_path_all_orders() {
        for scale in 0..=6 {
            let f = random_function(20 + scale as u64, scale);
            for n in 1..=1u64 << scale {
                let r = fejer_mean_checked(&f, n).unwrap();
                assert!(r.max_abs_diff <= DUAL_PATH_TOLERANCE);
            }
        }
    }

    #[test]
    fn fejer_annihilates_atoms_below_resolution() {
        for depth in 1..=6u32 {
            let scale = depth + 3;
            let interval = DyadicInterval::at_zero(scale, depth).unwrap();
            let a = random_atom(&interval, 0.5, depth as u64).unwrap();
            for n in 1..=1u64 << depth {
                assert!(fejer_mean(&a, n).unwrap().sup_norm() <= 1e-12);
            }
            assert!(fejer_mean(&a, (1 << depth) + 1).unwrap().sup_norm() > 1e-6);
        }
    }

    #[test]
    fn fejer_linear() {
        let f = random_function(4, 7);
        let g = random_function(5, 7);
        let (alpha, beta) = (0.75, -2.5);
        let combo = f.zip_with(&g, |a, b| alpha * a + beta * b).unwrap();
        for n in [1, 3, 17, 64, 127, 128, 500] {
            let lhs = fejer_mean(&combo, n).unwrap();
            let rhs = fejer_mean(&f, n)
                .unwrap()
                .zip_with(&fejer_mean(&g, n).unwrap(), |a, b| alpha * a + beta * b)
                .unwrap();
            assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn fejer_bounded_on_l_infinity() {
        for scale in 0..=10u32 {
            let f = random_function(30 + scale as u64, scale);
            for n in 1..=1u64 << scale {
                let kernel = kernels::fejer_scaled(n, scale).unwrap();
                let l1: f64 = integrate(&kernel.to_grid().abs());
                assert!(l1 <= 2.0 + 1e-12, "n {n}: {l1}");
                if n % 97 == 1 || n == 1 << scale {
                    let s = fejer_mean(&f, n).unwrap().sup_norm();
                    assert!(s <= f.sup_norm() * l1 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn maximal_function_examples() {
        let c = GridFunction::new(5, vec![-2.5; 32]).unwrap();
        assert!(maximal_function(&c).values().iter().all(|&v| v == 2.5));
        for j in 1..32u64 {
            let w = GridFunction::from_fn(5, |x| crate::grid::walsh_sign(j, x) as f64).unwrap();
            assert!(maximal_function(&w).values().iter().all(|&v| v == 1.0), "w_{j}");
        }
        let f = random_function(6, 8);
        let star = maximal_function(&f);
        for (s, v) in star.values().iter().zip(f.values()) {
            assert!(*s >= v.abs());
        }
    }

    #[test]
    fn hardy_norm_examples() {
        let one = GridFunction::new(6, vec![1.0; 64]).unwrap();
        for p in [0.25, 0.5, 1.0, 2.0] {
            assert!((hardy_norm(&one, p).unwrap() - 1.0).abs() < 1e-12);
        }
        for seed in 0..10 {
            let f = random_function(100 + seed, 7);
            for p in [0.25, 0.5, 1.0] {
                assert!(hardy_norm(&f, p).unwrap() >= lp_quasinorm(&f, p).unwrap());
            }
        }
        assert!(hardy_norm(&one, 0.0).is_err());
    }
}
