use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{fejer_from_coefficients, validate_atom};
use crate::dyadic::{self, BandSpectrum};
use crate::error::{Result, WfError};
use crate::grid::{pairwise_sum, transform, DyadicInterval, GridFunction};

/// How each index `n` of a maximal operator is weighted.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightSpec {
    /// `|A_{|n|}|^2`, the band spectrum taken over the operator's own sequence.
    CardSquared,
    /// `log2(n + 1)^2`.
    LogSquared,
    /// `V(n)^2`.
    VariationSquared,
    /// `phi_{|n|}`, indexed by band; positive and nondecreasing.
    Custom(Vec<f64>),
}

impl WeightSpec {
    fn validate(&self) -> Result<()> {
        if let WeightSpec::Custom(phi) = self {
            for (i, &w) in phi.iter().enumerate() {
                if !(w > 0.0 && w.is_finite()) {
                    return Err(WfError::NonPositiveWeight {
                        index: i as u64,
                        weight: w,
                    });
                }
                if i > 0 && w < phi[i - 1] {
                    return Err(WfError::WeightNotMonotone(i));
                }
            }
        }
        Ok(())
    }
}

/// `sup_k |sigma_{n_k} f| / w(n_k)` over a finite strictly increasing sequence.
#[derive(Clone, Debug)]
pub struct MaximalOperatorSpec {
    indices: Vec<u64>,
    weight: WeightSpec,
    spectra: BTreeMap<u32, BandSpectrum>,
    weights: Vec<f64>,
}

impl MaximalOperatorSpec {
    pub fn new(indices: Vec<u64>, weight: WeightSpec) -> Result<Self> {
        if indices.is_empty() {
            return Err(WfError::EmptySequence);
        }
        for (i, &n) in indices.iter().enumerate() {
            if n == 0 || (i > 0 && n <= indices[i - 1]) {
                return Err(WfError::BadSequence(n));
            }
        }
        weight.validate()?;

        let mut by_band: BTreeMap<u32, Vec<u64>> = BTreeMap::new();
        for &n in &indices {
            by_band.entry(dyadic::lead(n)?).or_default().push(n);
        }
        let spectra = by_band
            .iter()
            .map(|(&s, members)| Ok((s, dyadic::band_spectrum(s, members)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;

        let weights = indices
            .iter()
            .map(|&n| {
                let band = dyadic::lead(n)?;
                let w = match &weight {
                    WeightSpec::CardSquared => (spectra[&band].card() as f64).powi(2),
                    WeightSpec::LogSquared => ((n as f64) + 1.0).log2().powi(2),
                    WeightSpec::VariationSquared => f64::from(dyadic::variation(n)).powi(2),
                    WeightSpec::Custom(phi) => *phi
                        .get(band as usize)
                        .ok_or(WfError::MissingWeight(band))?,
                };
                if !(w > 0.0) {
                    return Err(WfError::NonPositiveWeight { index: n, weight: w });
                }
                Ok(w)
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(Self {
            indices,
            weight,
            spectra,
            weights,
        })
    }

    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    pub fn weight(&self) -> &WeightSpec {
        &self.weight
    }

    /// Band spectra of the sequence, keyed by band.
    pub fn spectra(&self) -> &BTreeMap<u32, BandSpectrum> {
        &self.spectra
    }

    /// `w(n_k)`, aligned with [`indices`](Self::indices).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight_of(&self, n: u64) -> Option<f64> {
        self.indices
            .binary_search(&n)
            .ok()
            .map(|i| self.weights[i])
    }
}

/// Pointwise `max_k |sigma_{n_k} f| / w_k`. Each mean is synthesized from
/// one shared coefficient vector; the max-reduction is order independent.
pub(crate) fn weighted_sup(f: &GridFunction, terms: &[(u64, f64)]) -> GridFunction {
    let coefficients = transform(f);
    let zero = || vec![0.0; f.len()];
    let sup = terms
        .par_iter()
        .map(|&(n, w)| {
            fejer_from_coefficients(&coefficients, n)
                .into_values()
                .into_iter()
                .map(|v| v.abs() / w)
                .collect::<Vec<f64>>()
        })
        .reduce(zero, |mut acc, next| {
            for (a, b) in acc.iter_mut().zip(next) {
                *a = a.max(b);
            }
            acc
        });
    GridFunction::new(f.scale(), sup).expect("same length as input")
}

pub fn weighted_maximal(f: &GridFunction, spec: &MaximalOperatorSpec) -> GridFunction {
    let terms: Vec<(u64, f64)> = spec
        .indices
        .iter()
        .copied()
        .zip(spec.weights.iter().copied())
        .collect();
    weighted_sup(f, &terms)
}

/// `{2^k}`, `{2^k + 1}` and `{2^k + 2^floor(k/2)}` for `k = 1..=count`.
pub fn corollary2_sequences(count: u32) -> Result<[Vec<u64>; 3]> {
    if count == 0 {
        return Err(WfError::EmptySequence);
    }
    if count > 62 {
        return Err(WfError::InvalidBand(count));
    }
    let ks = 1..=count;
    Ok([
        ks.clone().map(|k| 1u64 << k).collect(),
        ks.clone().map(|k| (1u64 << k) + 1).collect(),
        ks.map(|k| (1u64 << k) + (1u64 << (k / 2))).collect(),
    ])
}

/// Every index `1..2^scale`, covering bands `0..scale` completely.
pub fn full_band_sequence(scale: u32) -> Vec<u64> {
    (1..1u64 << scale).collect()
}

/// `int_{G \ I} (weighted maximal of a)^(1/2) dmu` for a 1/2-atom `a` on `I`.
pub fn atom_functional(a: &GridFunction, interval: &DyadicInterval, spec: &MaximalOperatorSpec) -> Result<f64> {
    let cert = validate_atom(a, 0.5, interval)?;
    if !cert.is_valid() {
        return Err(WfError::InvalidAtom(format!("{:?}", cert.violations)));
    }
    let sup = weighted_maximal(a, spec);
    let outside: Vec<f64> = sup
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| if interval.contains_index(i) { 0.0 } else { v.sqrt() })
        .collect();
    Ok(pairwise_sum(&outside) * (-(a.scale() as f64)).exp2())
}
