//! The divergence martingale for weights that ignore the band spectrum.
//!
//! For a family `{alpha_k}` with strictly increasing bands `s_k = |alpha_k|`
//! and a weight `phi`, the martingale is `F = sum_k lambda_k a_k` with
//! `lambda_k = phi_{s_k}^(1/2) / |A_{s_k}|` and the 1/2-atoms
//! `a_k = 2^{s_k} (D_{2^{s_k+1}} - D_{2^{s_k}})`. Its Walsh coefficients are
//! `2^s lambda` on each band `s` and zero elsewhere, while
//! `sigma_{alpha_k} F / phi` picks up `|A_{s_k}|^(1/2)` through the Fejér
//! kernel of `alpha_k - 2^{s_k}`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use twofloat::TwoFloat;

use crate::dyadic::{self, BandSpectrum};
use crate::error::{Result, WfError};
use crate::grid::{fwht_in_place, pairwise_sum, power_integral, transform, DyadicInterval, GridFunction};
use crate::kernels::{self, EndpointKind};
use crate::operators::{
    fejer_from_coefficients, fejer_mean, maximal_function, validate_atom, weighted_sup,
    AtomCertificate,
};

/// Tolerance for the coefficient formula and the decomposition.
pub const TOLERANCE: f64 = 1e-10;

/// Weight `phi_s` indexed by band.
#[derive(Clone, Debug, PartialEq)]
pub enum PhiSpec {
    Const(f64),
    /// `phi_s = |A_s|^2`, the admissible choice.
    CardSquared,
    /// Explicit `phi_0, phi_1, ...`; positive and nondecreasing.
    Explicit(Vec<f64>),
}

/// Band-`s` member of the alternating-bits family, `sum_{i <= s/2} 2^{s-2i}`.
pub fn alternating_bits_member(s: u32) -> u64 {
    (0..=s / 2).map(|i| 1u64 << (s - 2 * i)).sum()
}

#[derive(Clone, Debug)]
pub struct CounterexampleSpec {
    family: Vec<u64>,
    /// Band -> witness `alpha` (the largest family member in the band).
    alpha: BTreeMap<u32, u64>,
    spectra: BTreeMap<u32, BandSpectrum>,
    phi: PhiSpec,
}

impl CounterexampleSpec {
    /// Builds a spec from an explicit family. Each band's spectrum is taken
    /// over all family members in that band and its witness is the largest.
    pub fn from_family(family: Vec<u64>, phi: PhiSpec) -> Result<Self> {
        for (i, &n) in family.iter().enumerate() {
            if n == 0 || (i > 0 && n <= family[i - 1]) {
                return Err(WfError::BadSequence(n));
            }
        }
        match &phi {
            PhiSpec::Const(v) if !(*v > 0.0 && v.is_finite()) => {
                return Err(WfError::NonPositiveWeight { index: 0, weight: *v });
            }
            PhiSpec::Explicit(values) => {
                for (i, &w) in values.iter().enumerate() {
                    if !(w > 0.0 && w.is_finite()) {
                        return Err(WfError::NonPositiveWeight { index: i as u64, weight: w });
                    }
                    if i > 0 && w < values[i - 1] {
                        return Err(WfError::WeightNotMonotone(i));
                    }
                }
            }
            _ => {}
        }
        let mut by_band: BTreeMap<u32, Vec<u64>> = BTreeMap::new();
        for &n in &family {
            by_band.entry(dyadic::lead(n)?).or_default().push(n);
        }
        let mut alpha = BTreeMap::new();
        let mut spectra = BTreeMap::new();
        for (s, members) in by_band {
            alpha.insert(s, *members.last().expect("nonempty band"));
            spectra.insert(s, dyadic::band_spectrum(s, &members)?);
        }
        let spec = Self {
            family,
            alpha,
            spectra,
            phi,
        };
        for &s in spec.alpha.keys() {
            spec.phi_at(s)?;
        }
        Ok(spec)
    }

    /// One alternating-bits member in each band `1..=max_band`.
    pub fn alternating_bits(max_band: u32, phi: PhiSpec) -> Result<Self> {
        if max_band > 62 {
            return Err(WfError::InvalidBand(max_band));
        }
        Self::from_family((1..=max_band).map(alternating_bits_member).collect(), phi)
    }

    pub fn family(&self) -> &[u64] {
        &self.family
    }

    pub fn phi(&self) -> &PhiSpec {
        &self.phi
    }

    pub fn bands(&self) -> impl Iterator<Item = u32> + '_ {
        self.alpha.keys().copied()
    }

    pub fn alpha(&self, band: u32) -> Option<u64> {
        self.alpha.get(&band).copied()
    }

    pub fn spectrum(&self, band: u32) -> Option<&BandSpectrum> {
        self.spectra.get(&band)
    }

    pub fn phi_at(&self, band: u32) -> Result<f64> {
        match &self.phi {
            PhiSpec::Const(v) => Ok(*v),
            PhiSpec::CardSquared => {
                let card = self.spectra.get(&band).ok_or(WfError::MissingWeight(band))?.card();
                Ok((card * card) as f64)
            }
            PhiSpec::Explicit(values) => values.get(band as usize).copied().ok_or(WfError::MissingWeight(band)),
        }
    }

    /// `lambda = phi^(1/2) / |A|` for a band of the family.
    pub fn lambda(&self, band: u32) -> Result<f64> {
        let card = self.spectra.get(&band).ok_or(WfError::MissingWeight(band))?.card();
        Ok(self.phi_at(band)?.sqrt() / card as f64)
    }

    /// `sum_k phi_{s_k}^(1/4) / |A_{s_k}|^(1/2)` over bands below `scale`.
    pub fn summability(&self, scale: u32) -> Result<f64> {
        self.bands()
            .filter(|&s| s < scale)
            .map(|s| self.lambda(s).map(f64::sqrt))
            .sum()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AtomTerm {
    pub band: u32,
    pub alpha: u64,
    pub card: usize,
    pub phi: f64,
    pub lambda: f64,
    pub certificate: AtomCertificate,
}

/// `F = sum lambda_k a_k` over the bands below the grid scale.
#[derive(Clone, Debug)]
pub struct MartingaleApprox {
    scale: u32,
    function: GridFunction,
    terms: Vec<AtomTerm>,
}

impl MartingaleApprox {
    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn function(&self) -> &GridFunction {
        &self.function
    }

    pub fn terms(&self) -> &[AtomTerm] {
        &self.terms
    }

    pub fn term(&self, band: u32) -> Option<&AtomTerm> {
        self.terms.iter().find(|t| t.band == band)
    }

    /// `sum lambda_k^(1/2)`, the atomic bound on `||F||_{H_{1/2}}^{1/2}`.
    pub fn lambda_half_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.lambda.sqrt()).sum()
    }

    /// `a_k` for a carried band, on this grid.
    pub fn atom(&self, band: u32) -> Result<GridFunction> {
        self.term(band).ok_or(WfError::BandNotCarried { index: 1 << band })?;
        band_atom(band, self.scale)
    }
}

/// `2^s (D_{2^{s+1}} - D_{2^s})`: `+-2^{2s}` on `I_s`, split by coordinate `s`.
pub fn band_atom(band: u32, scale: u32) -> Result<GridFunction> {
    let hi = kernels::dirichlet(1 << (band + 1), scale)?;
    let lo = kernels::dirichlet(1 << band, scale)?;
    let factor = 1i64 << band;
    let values = hi
        .values()
        .iter()
        .zip(lo.values())
        .map(|(h, l)| (factor * (h - l)) as f64)
        .collect();
    GridFunction::new(scale, values)
}

/// Truncates the spec at `scale`. An empty spec yields the zero function;
/// a nonempty spec with no band below `scale` is an error.
pub fn build(spec: &CounterexampleSpec, scale: u32) -> Result<MartingaleApprox> {
    let mut values = vec![0.0; GridFunction::zeros(scale)?.len()];
    let mut terms = Vec::new();
    for (&band, &alpha) in spec.alpha.iter().filter(|(&s, _)| s < scale) {
        let atom = band_atom(band, scale)?;
        let interval = DyadicInterval::at_zero(scale, band)?;
        let certificate = validate_atom(&atom, 0.5, &interval)?;
        let lambda = spec.lambda(band)?;
        for (v, a) in values.iter_mut().zip(atom.values()) {
            *v += lambda * a;
        }
        terms.push(AtomTerm {
            band,
            alpha,
            card: spec.spectra[&band].card(),
            phi: spec.phi_at(band)?,
            lambda,
            certificate,
        });
    }
    if terms.is_empty() && !spec.alpha.is_empty() {
        return Err(WfError::EmptyTruncation(scale));
    }
    Ok(MartingaleApprox {
        scale,
        function: GridFunction::new(scale, values)?,
        terms,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientMismatch {
    pub index: usize,
    pub expected: f64,
    pub actual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientReport {
    pub scale: u32,
    pub max_error: f64,
    pub mismatches: Vec<CoefficientMismatch>,
}

impl CoefficientReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// `F^(j) = 2^s lambda` for `j` in each carried band `s`, zero elsewhere.
pub fn expected_coefficients(m: &MartingaleApprox) -> Vec<f64> {
    let mut expected = vec![0.0; m.function.len()];
    for t in &m.terms {
        let height = (t.band as f64).exp2() * t.lambda;
        expected[1 << t.band..1 << (t.band + 1)].fill(height);
    }
    expected
}

pub fn coefficients_check(m: &MartingaleApprox) -> CoefficientReport {
    let actual = transform(&m.function);
    let expected = expected_coefficients(m);
    let mut max_error = 0.0f64;
    let mut mismatches = Vec::new();
    for (index, (&e, &a)) in expected.iter().zip(&actual).enumerate() {
        let err = (e - a).abs();
        max_error = max_error.max(err);
        if !(err <= TOLERANCE) {
            mismatches.push(CoefficientMismatch {
                index,
                expected: e,
                actual: a,
            });
        }
    }
    CoefficientReport {
        scale: m.scale,
        max_error,
        mismatches,
    }
}

/// `sigma_n F = III_1 + III_2 + III_3` for `2^s <= n <= 2^{s+1}`.
#[derive(Clone, Debug)]
pub struct FejerDecomposition {
    pub n: u64,
    pub band: u32,
    /// `(2^s / n) sigma_{2^s} F`.
    pub iii1: GridFunction,
    /// `((n - 2^s) / n) S_{2^s} F`.
    pub iii2: GridFunction,
    /// `(2^s lambda / n) sum_{j=2^s}^{n-1} (n - j) w_j`.
    pub iii3: GridFunction,
    pub sigma: GridFunction,
    pub reconstruction_error: f64,
    /// Whether `sum_{j=2^s}^{n-1} (n - j) w_j = w_{2^s} (n - 2^s) K_{n-2^s}`
    /// holds exactly in integers.
    pub shift_identity_holds: bool,
}

impl FejerDecomposition {
    pub fn passed(&self) -> bool {
        self.shift_identity_holds && self.reconstruction_error <= TOLERANCE
    }
}

fn check_band_order(m: &MartingaleApprox, band: u32, n: u64) -> Result<&AtomTerm> {
    let term = m.term(band).ok_or(WfError::BandNotCarried { index: n })?;
    if n < 1 << band || n > 1 << (band + 1) {
        return Err(WfError::OutOfBand { index: n, band });
    }
    Ok(term)
}

/// `F = sum lambda_k a_k` in double-double; every product `lambda a` is exact.
fn exact_function(m: &MartingaleApprox) -> Result<Vec<TwoFloat>> {
    let mut values = vec![TwoFloat::from(0.0); m.function.len()];
    for t in &m.terms {
        let atom = band_atom(t.band, m.scale)?;
        for (v, &a) in values.iter_mut().zip(atom.values()) {
            if a != 0.0 {
                *v += TwoFloat::new_mul(t.lambda, a);
            }
        }
    }
    Ok(values)
}

/// Synthesis from the first `n` coefficients, each scaled by `weight(k)`.
fn synthesize_dd(coefficients: &[TwoFloat], n: u64, weight: impl Fn(u64) -> TwoFloat) -> Vec<TwoFloat> {
    let mut out: Vec<TwoFloat> = coefficients
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            if (k as u64) < n {
                c * weight(k as u64)
            } else {
                TwoFloat::from(0.0)
            }
        })
        .collect();
    fwht_in_place(&mut out);
    out
}

fn rounded(scale: u32, values: &[TwoFloat]) -> Result<GridFunction> {
    GridFunction::new(scale, values.iter().map(|&v| f64::from(v)).collect())
}

/// Splits `sigma_n F` at the start of band `s`.
///
/// Values of `F` reach `4^s`, where one f64 ulp already exceeds the
/// tolerance, so `F`, the three components and `sigma_n F` are all
/// evaluated in double-double arithmetic; the components and the mean are
/// returned rounded to f64 and the reconstruction error is measured before
/// rounding.
pub fn fejer_decomposition(m: &MartingaleApprox, band: u32, n: u64) -> Result<FejerDecomposition> {
    let term = check_band_order(m, band, n)?;
    let scale = m.scale;
    let size = m.function.len();
    let start = 1u64 << band;
    let order = n as f64;

    let mut coefficients = exact_function(m)?;
    fwht_in_place(&mut coefficients);
    let norm = (-(scale as f64)).exp2();
    coefficients.iter_mut().for_each(|c| *c = *c * norm);

    let cesaro = |len: u64| move |k: u64| TwoFloat::from((len - k) as f64) / len as f64;
    let one = |_: u64| TwoFloat::from(1.0);
    let iii1: Vec<TwoFloat> = synthesize_dd(&coefficients, start, cesaro(start))
        .into_iter()
        .map(|v| v * start as f64 / order)
        .collect();
    let iii2: Vec<TwoFloat> = synthesize_dd(&coefficients, start, one)
        .into_iter()
        .map(|v| v * (n - start) as f64 / order)
        .collect();
    let sigma = synthesize_dd(&coefficients, n, cesaro(n));

    let mut tail = vec![0i64; size];
    for j in start..n {
        tail[j as usize] = (n - j) as i64;
    }
    fwht_in_place(&mut tail);
    let shifted: Vec<i64> = if n == start {
        vec![0; size]
    } else {
        let k = kernels::fejer_scaled(n - start, scale)?;
        k.values()
            .iter()
            .enumerate()
            .map(|(x, &v)| crate::grid::walsh_sign(start, x) as i64 * v)
            .collect()
    };
    let shift_identity_holds = tail == shifted;

    let height = (band as f64).exp2() * term.lambda;
    let iii3: Vec<TwoFloat> = tail
        .iter()
        .map(|&v| TwoFloat::new_mul(height, v as f64) / order)
        .collect();

    let reconstruction_error = (0..size)
        .map(|x| f64::from(iii1[x] + iii2[x] + iii3[x] - sigma[x]).abs())
        .fold(0.0, f64::max);
    Ok(FejerDecomposition {
        n,
        band,
        iii1: rounded(scale, &iii1)?,
        iii2: rounded(scale, &iii2)?,
        iii3: rounded(scale, &iii3)?,
        sigma: rounded(scale, &sigma)?,
        reconstruction_error,
        shift_identity_holds,
    })
}

/// One lower-bound set of `n - 2^s` checked against `|sigma_n F / phi|^(1/2)`.
#[derive(Clone, Debug, Serialize)]
pub struct LowerBoundEntry {
    pub n: u64,
    pub kind: EndpointKind,
    pub endpoint: u32,
    pub set_base: usize,
    pub set_depth: u32,
    pub integral: f64,
    /// `mu(E) 2^{(2u-6)/2} / (|A|^(1/2) phi^(1/4))`.
    pub bound: f64,
}

impl LowerBoundEntry {
    pub fn holds(&self) -> bool {
        self.integral >= self.bound
    }

    pub fn margin(&self) -> f64 {
        self.integral / self.bound
    }
}

fn lower_bound_entries(
    m: &MartingaleApprox,
    term: &AtomTerm,
    n: u64,
    sigma: &GridFunction,
    skip_unresolvable: bool,
) -> Result<(Vec<LowerBoundEntry>, usize)> {
    let rest = n - (1u64 << term.band);
    if rest == 0 {
        return Ok((Vec::new(), 0));
    }
    let scale = m.scale;
    let mut entries = Vec::new();
    let mut skipped = 0;
    let scaled_sqrt: Vec<f64> = sigma.values().iter().map(|v| (v.abs() / term.phi).sqrt()).collect();
    let denom = (term.card as f64).sqrt() * term.phi.powf(0.25);
    for &block in dyadic::blocks(rest)?.blocks() {
        let candidates = [
            (EndpointKind::Upper, block.upper, kernels::upper_endpoint_set(block.upper, scale)),
            (EndpointKind::Lower, block.lower, kernels::lower_endpoint_set(block, scale)),
        ];
        for (kind, endpoint, set) in candidates {
            let set = match set {
                Ok(set) => set,
                Err(WfError::Unresolvable { .. }) if skip_unresolvable => {
                    skipped += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            let inside: Vec<f64> = set.members().map(|i| scaled_sqrt[i]).collect();
            let integral = pairwise_sum(&inside) * (-(scale as f64)).exp2();
            let bound = set.measure() * (endpoint as f64 - 3.0).exp2() / denom;
            entries.push(LowerBoundEntry {
                n,
                kind,
                endpoint,
                set_base: set.base().index(),
                set_depth: set.depth(),
                integral,
                bound,
            });
        }
    }
    Ok((entries, skipped))
}

#[derive(Clone, Debug, Serialize)]
pub struct LowerBoundReport {
    pub n: u64,
    pub band: u32,
    pub entries: Vec<LowerBoundEntry>,
}

impl LowerBoundReport {
    pub fn failures(&self) -> impl Iterator<Item = &LowerBoundEntry> {
        self.entries.iter().filter(|e| !e.holds())
    }
}

/// Checks `int_E |sigma_n F / phi|^(1/2) >= mu(E) 2^{(2u-6)/2} / (|A|^(1/2) phi^(1/4))`
/// on the lower-bound set of every block endpoint `u` of `n - 2^s`.
pub fn lower_bound_check(m: &MartingaleApprox, band: u32, n: u64) -> Result<LowerBoundReport> {
    let term = check_band_order(m, band, n)?;
    let sigma = fejer_mean(&m.function, n)?;
    let (entries, _) = lower_bound_entries(m, term, n, &sigma, false)?;
    Ok(LowerBoundReport { n, band, entries })
}

#[derive(Clone, Debug, Serialize)]
pub struct LowerBoundSweep {
    pub scale: u32,
    pub orders_checked: usize,
    pub sets_checked: usize,
    /// Sets deeper than the grid.
    pub sets_skipped: usize,
    pub min_margin: f64,
    pub failures: Vec<LowerBoundEntry>,
}

/// [`lower_bound_check`] for every `n` in every carried band, skipping sets
/// the grid cannot resolve.
pub fn lower_bound_sweep(m: &MartingaleApprox) -> Result<LowerBoundSweep> {
    let coefficients = transform(&m.function);
    let jobs: Vec<(&AtomTerm, u64)> = m
        .terms
        .iter()
        .flat_map(|t| ((1u64 << t.band)..=(1u64 << (t.band + 1))).map(move |n| (t, n)))
        .filter(|&(_, n)| n <= m.function.len() as u64)
        .collect();
    let results = jobs
        .par_iter()
        .map(|&(t, n)| {
            let sigma = fejer_from_coefficients(&coefficients, n);
            lower_bound_entries(m, t, n, &sigma, true)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut sweep = LowerBoundSweep {
        scale: m.scale,
        orders_checked: jobs.len(),
        sets_checked: 0,
        sets_skipped: 0,
        min_margin: f64::INFINITY,
        failures: Vec::new(),
    };
    for (entries, skipped) in results {
        sweep.sets_skipped += skipped;
        sweep.sets_checked += entries.len();
        for e in entries {
            sweep.min_margin = sweep.min_margin.min(e.margin());
            if !e.holds() {
                sweep.failures.push(e);
            }
        }
    }
    Ok(sweep)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatioPoint {
    pub scale: u32,
    pub ratio: f64,
    /// `int (F^*)^(1/2) dmu = ||F||_{H_{1/2}}^{1/2}`.
    pub hardy_half: f64,
    /// `int (max_k |sigma_{alpha_k} F| / phi_{s_k})^(1/2) dmu` over the witnesses.
    pub sup_half: f64,
}

/// The ratio `sup_half / hardy_half` at one scale.
pub fn ratio_at(spec: &CounterexampleSpec, scale: u32) -> Result<RatioPoint> {
    let m = build(spec, scale)?;
    let witnesses: Vec<(u64, f64)> = m.terms.iter().map(|t| (t.alpha, t.phi)).collect();
    let hardy_half = power_integral(&maximal_function(&m.function), 0.5);
    let sup_half = if witnesses.is_empty() {
        0.0
    } else {
        power_integral(&weighted_sup(&m.function, &witnesses), 0.5)
    };
    Ok(RatioPoint {
        scale,
        ratio: sup_half / hardy_half,
        hardy_half,
        sup_half,
    })
}

/// [`ratio_at`] for each scale; scales must be strictly increasing.
pub fn ratio_curve(spec: &CounterexampleSpec, scales: &[u32]) -> Result<Vec<RatioPoint>> {
    for w in scales.windows(2) {
        if w[1] <= w[0] {
            return Err(WfError::BadSequence(w[1] as u64));
        }
    }
    scales.par_iter().map(|&scale| ratio_at(spec, scale)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::integrate;
    use crate::operators::hardy_norm;

    #[test]
    fn alternating_bits_members() {
        assert_eq!(alternating_bits_member(1), 0b10);
        assert_eq!(alternating_bits_member(2), 0b101);
        assert_eq!(alternating_bits_member(5), 0b101010);
        assert_eq!(alternating_bits_member(6), 0b1010101);
        for s in 1..=20 {
            let spec = CounterexampleSpec::alternating_bits(s, PhiSpec::Const(1.0)).unwrap();
            assert_eq!(spec.spectrum(s).unwrap().card() as u32, s / 2 + 1, "s {s}");
        }
    }

    #[test]
    fn spec_validation() {
        assert!(CounterexampleSpec::from_family(vec![3, 2], PhiSpec::Const(1.0)).is_err());
        assert!(CounterexampleSpec::from_family(vec![2], PhiSpec::Const(0.0)).is_err());
        assert!(matches!(
            CounterexampleSpec::from_family(vec![2, 5], PhiSpec::Explicit(vec![1.0, 2.0])),
            Err(WfError::MissingWeight(2))
        ));
        assert!(matches!(
            CounterexampleSpec::from_family(vec![2], PhiSpec::Explicit(vec![2.0, 1.0])),
            Err(WfError::WeightNotMonotone(1))
        ));
        let spec = CounterexampleSpec::from_family(vec![4, 5, 7, 9], PhiSpec::CardSquared).unwrap();
        assert_eq!(spec.alpha(2), Some(7));
        // 4, 5, 7 have endpoints {0, 2}
        assert_eq!(spec.phi_at(2).unwrap(), 4.0);
        assert_eq!(spec.lambda(2).unwrap(), 1.0);
    }

    #[test]
    fn single_band_example() {
        let spec = CounterexampleSpec::from_family(vec![2], PhiSpec::Const(1.0)).unwrap();
        let m = build(&spec, 3).unwrap();
        assert_eq!(m.terms().len(), 1);
        let t = &m.terms()[0];
        assert_eq!((t.band, t.card, t.lambda), (1, 1, 1.0));
        assert!(t.certificate.is_valid());
        // 2 (D_4 - D_2): 4 on I_2, -4 on I_1 \ I_2, 0 off I_1
        assert_eq!(m.function().values(), &[4.0, 0.0, -4.0, 0.0, 4.0, 0.0, -4.0, 0.0]);
        let d4 = kernels::dirichlet(4, 3).unwrap().to_grid();
        let d2 = kernels::dirichlet(2, 3).unwrap().to_grid();
        assert_eq!(m.function(), &d4.zip_with(&d2, |a, b| 2.0 * (a - b)).unwrap());
        assert_eq!(transform(m.function()), vec![0.0, 0.0, 2.0, 2.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(coefficients_check(&m).passed());
    }

    #[test]
    fn empty_and_truncated_specs() {
        let empty = CounterexampleSpec::from_family(vec![], PhiSpec::Const(1.0)).unwrap();
        let m = build(&empty, 6).unwrap();
        assert!(m.function().values().iter().all(|&v| v == 0.0));
        assert!(coefficients_check(&m).passed());
        let high = CounterexampleSpec::from_family(vec![64], PhiSpec::Const(1.0)).unwrap();
        assert!(matches!(build(&high, 6), Err(WfError::EmptyTruncation(6))));
        assert_eq!(build(&high, 7).unwrap().terms().len(), 1);
    }

    #[test]
    fn atoms_and_coefficients_alternating_bits() {
        for scale in 2..=12 {
            for phi in [PhiSpec::Const(1.0), PhiSpec::CardSquared, PhiSpec::Const(3.5)] {
                let spec = CounterexampleSpec::alternating_bits(20, phi).unwrap();
                let m = build(&spec, scale).unwrap();
                assert_eq!(m.terms().len() as u32, scale - 1);
                for t in m.terms() {
                    assert!(t.certificate.is_valid());
                    assert_eq!(t.certificate.sup_norm, (4.0f64).powi(t.band as i32));
                }
                let report = coefficients_check(&m);
                assert!(report.passed(), "M {scale}: {}", report.max_error);
            }
        }
    }

    #[test]
    fn hardy_norm_within_atomic_bound() {
        for scale in 2..=12 {
            for phi in [PhiSpec::Const(1.0), PhiSpec::CardSquared] {
                let spec = CounterexampleSpec::alternating_bits(20, phi).unwrap();
                let m = build(&spec, scale).unwrap();
                let h = hardy_norm(m.function(), 0.5).unwrap().sqrt();
                assert!(h <= m.lambda_half_sum() * (1.0 + 1e-12), "M {scale}: {h}");
                assert!((spec.summability(scale).unwrap() - m.lambda_half_sum()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn decomposition_reconstructs() {
        let spec = CounterexampleSpec::alternating_bits(20, PhiSpec::Const(1.0)).unwrap();
        let m = build(&spec, 9).unwrap();
        for band in 1..9 {
            let start = 1u64 << band;
            for n in start..=2 * start {
                let d = fejer_decomposition(&m, band, n).unwrap();
                assert!(d.passed(), "band {band} n {n}: {}", d.reconstruction_error);
                if n == start {
                    assert!(d.iii2.values().iter().all(|&v| v == 0.0));
                    assert!(d.iii3.values().iter().all(|&v| v == 0.0));
                    assert_eq!(d.iii1, d.sigma);
                }
            }
        }
        assert!(matches!(fejer_decomposition(&m, 3, 17), Err(WfError::OutOfBand { .. })));
        assert!(matches!(fejer_decomposition(&m, 9, 600), Err(WfError::BandNotCarried { .. })));
    }

    #[test]
    fn lower_bounds_hold() {
        let spec = CounterexampleSpec::alternating_bits(20, PhiSpec::Const(1.0)).unwrap();
        let m = build(&spec, 8).unwrap();
        let alpha = spec.alpha(6).unwrap();
        let report = lower_bound_check(&m, 6, alpha).unwrap();
        assert!(!report.entries.is_empty());
        assert_eq!(report.failures().count(), 0);

        // scaling F by c scales every integral by c^(1/2)
        let c = 9.0;
        let scaled = MartingaleApprox {
            function: m.function().scaled(c),
            ..m.clone()
        };
        let again = lower_bound_check(&scaled, 6, alpha).unwrap();
        for (a, b) in report.entries.iter().zip(&again.entries) {
            assert!((b.integral - 3.0 * a.integral).abs() <= 1e-12 * b.integral);
        }

        assert!(matches!(lower_bound_check(&m, 7, 255), Err(WfError::Unresolvable { .. })));
        let sweep = lower_bound_sweep(&m).unwrap();
        assert!(sweep.failures.is_empty());
        assert!(sweep.sets_checked > 0 && sweep.min_margin > 1.0);
    }

    #[test]
    fn ratio_examples() {
        let single = CounterexampleSpec::from_family(vec![5], PhiSpec::Const(1.0)).unwrap();
        let p = ratio_at(&single, 6).unwrap();
        assert!(p.ratio.is_finite() && p.ratio > 0.0);
        assert!(ratio_curve(&single, &[6, 6]).is_err());

        let spec = CounterexampleSpec::alternating_bits(20, PhiSpec::Const(1.0)).unwrap();
        let curve = ratio_curve(&spec, &[4, 6, 8]).unwrap();
        assert_eq!(curve.iter().map(|p| p.scale).collect::<Vec<_>>(), vec![4, 6, 8]);
        for p in &curve {
            let m = build(&spec, p.scale).unwrap();
            let direct = hardy_norm(m.function(), 0.5).unwrap().sqrt();
            assert!((direct - p.hardy_half).abs() <= 1e-12 * direct);
        }
        assert!(integrate(build(&spec, 8).unwrap().function()).abs() < 1e-12);
    }
}
