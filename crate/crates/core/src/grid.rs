//! The truncated dyadic group `G_M = Z_2^M` and functions on it.
//!
//! A point `x = (x_0, ..., x_{M-1})` is stored as the array index
//! `sum_j x_j 2^j`, so coordinate 0 is the least significant bit. With this
//! mapping the Walsh function `w_n(x)` is the parity of `popcount(n & idx)`,
//! the transform below produces coefficients in Paley order without any
//! reordering pass, and `I_n(x)` is the residue class of `idx` mod `2^n`.
//!
//! Floating point reductions go through [`pairwise_sum`], a fixed recursive
//! halving order, so results do not depend on thread count.

use std::ops::{Add, Sub};

use serde::Serialize;

use crate::error::{Result, WfError};
use crate::MAX_SCALE;

fn check_scale(scale: u32) -> Result<()> {
    if scale > MAX_SCALE {
        return Err(WfError::ScaleTooLarge(scale));
    }
    Ok(())
}

/// A point of `G_M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GroupPoint {
    scale: u32,
    index: usize,
}

impl GroupPoint {
    pub fn new(scale: u32, index: usize) -> Result<Self> {
        check_scale(scale)?;
        if index >> scale != 0 {
            return Err(WfError::PointOutOfRange { index, scale });
        }
        Ok(Self { scale, index })
    }

    pub fn from_coords(coords: &[u8]) -> Result<Self> {
        let scale = coords.len() as u32;
        check_scale(scale)?;
        let index = coords
            .iter()
            .enumerate()
            .fold(0usize, |acc, (k, &c)| acc | (((c & 1) as usize) << k));
        Ok(Self { scale, index })
    }

    pub fn zero(scale: u32) -> Result<Self> {
        Self::new(scale, 0)
    }

    /// `e_k`, the point with a single 1 at coordinate `k`.
    pub fn unit(scale: u32, k: u32) -> Result<Self> {
        if k >= scale {
            return Err(WfError::CoordinateOutOfRange { coordinate: k, scale });
        }
        Self::new(scale, 1 << k)
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn coord(&self, k: u32) -> u8 {
        if k >= self.scale {
            0
        } else {
            ((self.index >> k) & 1) as u8
        }
    }

    pub fn coords(&self) -> Vec<u8> {
        (0..self.scale).map(|k| self.coord(k)).collect()
    }

    /// Coordinate-wise addition mod 2.
    pub fn add(&self, other: &GroupPoint) -> Result<GroupPoint> {
        if self.scale != other.scale {
            return Err(WfError::ScaleMismatch {
                left: self.scale,
                right: other.scale,
            });
        }
        Ok(GroupPoint {
            scale: self.scale,
            index: self.index ^ other.index,
        })
    }
}

/// `r_k(x) = (-1)^{x_k}`.
pub fn rademacher(k: u32, x: &GroupPoint) -> Result<i8> {
    if k >= x.scale {
        return Err(WfError::CoordinateOutOfRange {
            coordinate: k,
            scale: x.scale,
        });
    }
    Ok(if x.coord(k) == 0 { 1 } else { -1 })
}

/// Paley-ordered Walsh function `w_n(x)`; requires `n < 2^M`.
pub fn walsh(n: u64, x: &GroupPoint) -> Result<i8> {
    if n >> x.scale != 0 {
        return Err(WfError::OrderOutOfRange {
            order: n,
            scale: x.scale,
        });
    }
    Ok(walsh_sign(n, x.index))
}

#[inline]
pub(crate) fn walsh_sign(n: u64, index: usize) -> i8 {
    if (n & index as u64).count_ones() & 1 == 0 {
        1
    } else {
        -1
    }
}

/// `I_n(x)`: points agreeing with `x` on the first `depth` coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DyadicInterval {
    base: GroupPoint,
    depth: u32,
}

impl DyadicInterval {
    pub fn new(base: GroupPoint, depth: u32) -> Result<Self> {
        if depth > base.scale {
            return Err(WfError::DepthOutOfRange {
                depth,
                scale: base.scale,
            });
        }
        Ok(Self { base, depth })
    }

    /// `I_depth(0)`.
    pub fn at_zero(scale: u32, depth: u32) -> Result<Self> {
        Self::new(GroupPoint::zero(scale)?, depth)
    }

    pub fn base(&self) -> GroupPoint {
        self.base
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn scale(&self) -> u32 {
        self.base.scale
    }

    fn mask(&self) -> usize {
        (1usize << self.depth) - 1
    }

    /// Residue of every member index modulo `2^depth`.
    pub fn residue(&self) -> usize {
        self.base.index & self.mask()
    }

    pub fn contains_index(&self, index: usize) -> bool {
        index & self.mask() == self.residue()
    }

    pub fn contains(&self, y: &GroupPoint) -> bool {
        y.scale == self.base.scale && self.contains_index(y.index)
    }

    pub fn measure(&self) -> f64 {
        (-(self.depth as f64)).exp2()
    }

    pub fn len(&self) -> usize {
        1usize << (self.base.scale - self.depth)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Member indices in ascending order.
    pub fn members(&self) -> impl Iterator<Item = usize> {
        let step = 1usize << self.depth;
        let residue = self.residue();
        (0..self.len()).map(move |i| residue + i * step)
    }
}

/// A real function on `G_M` stored as `2^M` values.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    scale: u32,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(scale: u32, values: Vec<f64>) -> Result<Self> {
        check_scale(scale)?;
        if values.len() != 1usize << scale {
            return Err(WfError::NotPowerOfTwo(values.len()));
        }
        Ok(Self { scale, values })
    }

    /// Infers the scale from the length.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        let len = values.len();
        if !len.is_power_of_two() {
            return Err(WfError::NotPowerOfTwo(len));
        }
        Self::new(len.trailing_zeros(), values)
    }

    pub fn zeros(scale: u32) -> Result<Self> {
        check_scale(scale)?;
        Ok(Self {
            scale,
            values: vec![0.0; 1 << scale],
        })
    }

    pub fn from_fn(scale: u32, f: impl Fn(usize) -> f64) -> Result<Self> {
        check_scale(scale)?;
        Ok(Self {
            scale,
            values: (0..1usize << scale).map(f).collect(),
        })
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn at(&self, x: &GroupPoint) -> f64 {
        self.values[x.index]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> GridFunction {
        GridFunction {
            scale: self.scale,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scaled(&self, factor: f64) -> GridFunction {
        self.map(|v| v * factor)
    }

    pub fn abs(&self) -> GridFunction {
        self.map(f64::abs)
    }

    pub fn zip_with(
        &self,
        other: &GridFunction,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<GridFunction> {
        if self.scale != other.scale {
            return Err(WfError::ScaleMismatch {
                left: self.scale,
                right: other.scale,
            });
        }
        Ok(GridFunction {
            scale: self.scale,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &GridFunction) -> Result<f64> {
        Ok(self.zip_with(other, |a, b| a - b)?.sup_norm())
    }
}

/// Recursive halving sum. Used for every floating point reduction in the
/// crate; the butterfly transform reproduces this order exactly.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        len => {
            let (lo, hi) = values.split_at(len / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}

/// In-place unnormalized Walsh-Hadamard butterfly in Paley order.
///
/// Stage `h` combines entries whose indices differ in bit `log2(h)`, starting
/// from bit 0. Works for floats and exact integers alike.
pub fn fwht_in_place<T>(data: &mut [T])
where
    T: Copy + Add<Output = T> + Sub<Output = T>,
{
    let n = data.len();
    assert!(n.is_power_of_two(), "butterfly length must be a power of two");
    let mut h = 1;
    while h < n {
        for chunk in data.chunks_exact_mut(2 * h) {
            let (lo, hi) = chunk.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// Walsh-Fourier coefficients `c[n] = 2^{-M} sum_x f(x) w_n(x)`.
pub fn transform(f: &GridFunction) -> Vec<f64> {
    let mut c = f.values.clone();
    fwht_in_place(&mut c);
    let norm = (-(f.scale as f64)).exp2();
    c.iter_mut().for_each(|v| *v *= norm);
    c
}

/// Synthesis `f(x) = sum_n c[n] w_n(x)`.
pub fn inverse_transform(coefficients: &[f64]) -> Result<GridFunction> {
    let mut values = coefficients.to_vec();
    if !values.len().is_power_of_two() {
        return Err(WfError::NotPowerOfTwo(values.len()));
    }
    fwht_in_place(&mut values);
    GridFunction::from_values(values)
}

pub fn integrate(f: &GridFunction) -> f64 {
    pairwise_sum(&f.values) * (-(f.scale as f64)).exp2()
}

fn check_exponent(p: f64) -> Result<()> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(WfError::InvalidExponent(p));
    }
    Ok(())
}

/// `(int |f|^p dmu)^{1/p}`, a quasi-norm for `p < 1`.
pub fn lp_quasinorm(f: &GridFunction, p: f64) -> Result<f64> {
    check_exponent(p)?;
    Ok(power_integral(f, p).powf(p.recip()))
}

/// `int |f|^p dmu` without the outer root.
pub fn power_integral(f: &GridFunction, p: f64) -> f64 {
    let powered: Vec<f64> = f.values.iter().map(|v| v.abs().powf(p)).collect();
    pairwise_sum(&powered) * (-(f.scale as f64)).exp2()
}

/// `(sup_{lambda > 0} lambda^p mu(|f| > lambda))^{1/p}`.
///
/// The map `lambda -> mu(|f| > lambda)` is a step function, so the supremum
/// is the limit from below at a jump: `v^p mu(|f| >= v)` for a value `v`
/// taken by `|f|`.
pub fn weak_lp(f: &GridFunction, p: f64) -> Result<f64> {
    check_exponent(p)?;
    let mut mags: Vec<f64> = f.values.iter().map(|v| v.abs()).collect();
    mags.sort_by(|a, b| b.total_cmp(a));
    let total = mags.len() as f64;
    let mut best = 0.0f64;
    let mut i = 0;
    while i < mags.len() {
        let v = mags[i];
        if v == 0.0 {
            break;
        }
        let mut j = i;
        while j < mags.len() && mags[j] == v {
            j += 1;
        }
        best = best.max(v.powf(p) * (j as f64 / total));
        i = j;
    }
    Ok(best.powf(p.recip()))
}

/// The cells `I_{l+1}(e_k + e_l)` for `0 <= k < l < M` followed by
/// `I_M(e_k)` for `0 <= k < M`. Together they tile `G_M \ I_M`.
pub fn complement_partition(scale: u32) -> Result<Vec<DyadicInterval>> {
    check_scale(scale)?;
    if scale < 2 {
        return Err(WfError::ScaleTooSmall { scale, min: 2 });
    }
    let mut cells = Vec::with_capacity((scale * (scale + 1) / 2) as usize);
    for k in 0..scale - 1 {
        for l in k + 1..scale {
            let base = GroupPoint::new(scale, (1 << k) | (1 << l))?;
            cells.push(DyadicInterval::new(base, l + 1)?);
        }
    }
    for k in 0..scale {
        cells.push(DyadicInterval::new(GroupPoint::unit(scale, k)?, scale)?);
    }
    Ok(cells)
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionReport {
    pub scale: u32,
    pub cells: usize,
    pub covered_points: usize,
    pub total_measure: f64,
    pub disjoint: bool,
    pub exhaustive: bool,
}

impl PartitionReport {
    pub fn passed(&self) -> bool {
        self.disjoint && self.exhaustive
    }
}

/// Checks the partition with bitsets: no point is covered twice and the
/// covered set equals `G_M \ I_M` exactly.
pub fn verify_partition(scale: u32) -> Result<PartitionReport> {
    let cells = complement_partition(scale)?;
    let n = 1usize << scale;
    let words = n.div_ceil(64);
    let mut covered = vec![0u64; words];
    let mut disjoint = true;
    for cell in &cells {
        for idx in cell.members() {
            let (w, b) = (idx / 64, idx % 64);
            if covered[w] >> b & 1 == 1 {
                disjoint = false;
            }
            covered[w] |= 1 << b;
        }
    }
    let mut expected = vec![u64::MAX; words];
    if n % 64 != 0 {
        expected[words - 1] = (1u64 << (n % 64)) - 1;
    }
    // I_M = {0}.
    expected[0] &= !1;
    let measures: Vec<f64> = cells.iter().map(DyadicInterval::measure).collect();
    Ok(PartitionReport {
        scale,
        cells: cells.len(),
        covered_points: covered.iter().map(|w| w.count_ones() as usize).sum(),
        total_measure: pairwise_sum(&measures),
        disjoint,
        exhaustive: covered == expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn point(coords: &[u8]) -> GroupPoint {
        GroupPoint::from_coords(coords).unwrap()
    }

    // w_n(x) as the product of Rademacher factors r_k^{n_k}(x).
    fn walsh_by_product(n: u64, x: &GroupPoint) -> i8 {
        let mut w = 1i8;
        for k in 0..x.scale() {
            if (n >> k) & 1 == 1 {
                w *= rademacher(k, x).unwrap();
            }
        }
        w
    }

    fn random_function(rng: &mut ChaCha8Rng, scale: u32) -> GridFunction {
        let values = (0..1usize << scale).map(|_| rng.gen_range(-1.0..1.0)).collect();
        GridFunction::new(scale, values).unwrap()
    }

    fn rand_fn(seed: u64, scale: u32) -> GridFunction {
        random_function(&mut ChaCha8Rng::seed_from_u64(seed), scale)
    }

    #[test]
    fn add_examples() {
        let x = point(&[1, 0, 1, 1]);
        assert_eq!(x.add(&x).unwrap(), GroupPoint::zero(4).unwrap());
        let e01 = GroupPoint::unit(4, 0).unwrap().add(&GroupPoint::unit(4, 1).unwrap()).unwrap();
        assert_eq!(e01.coords(), vec![1, 1, 0, 0]);
        assert_eq!(point(&[1, 0, 1]).add(&point(&[1, 1, 0])).unwrap().coords(), vec![0, 1, 1]);
        assert!(matches!(
            point(&[1, 0]).add(&point(&[1, 0, 0])),
            Err(WfError::ScaleMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn group_axioms_exhaustive() {
        for scale in 0..=4 {
            let pts: Vec<GroupPoint> = (0..1usize << scale).map(|i| GroupPoint::new(scale, i).unwrap()).collect();
            let zero = GroupPoint::zero(scale).unwrap();
            for a in &pts {
                assert_eq!(a.add(&zero).unwrap(), *a);
                assert_eq!(a.add(a).unwrap(), zero);
                for b in &pts {
                    assert_eq!(a.add(b).unwrap(), b.add(a).unwrap());
                    for c in &pts {
                        assert_eq!(
                            a.add(b).unwrap().add(c).unwrap(),
                            a.add(&b.add(c).unwrap()).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn rademacher_examples() {
        let scale = 5;
        let zero = GroupPoint::zero(scale).unwrap();
        for k in 0..scale {
            assert_eq!(rademacher(k, &zero).unwrap(), 1);
            let ek = GroupPoint::unit(scale, k).unwrap();
            assert_eq!(rademacher(k, &ek).unwrap(), -1);
            for j in (0..scale).filter(|&j| j != k) {
                assert_eq!(rademacher(k, &GroupPoint::unit(scale, j).unwrap()).unwrap(), 1);
            }
        }
        assert!(rademacher(5, &zero).is_err());
    }

    #[test]
    fn walsh_examples() {
        let scale = 4;
        for idx in 0..16 {
            let x = GroupPoint::new(scale, idx).unwrap();
            assert_eq!(walsh(0, &x).unwrap(), 1);
            let expected = if (x.coord(0) + x.coord(1)) % 2 == 0 { 1 } else { -1 };
            assert_eq!(walsh(3, &x).unwrap(), expected);
        }
        assert!(walsh(16, &GroupPoint::zero(4).unwrap()).is_err());
    }

    #[test]
    fn walsh_product_definition_matches_parity() {
        for scale in 0..=10 {
            for n in 0..1u64 << scale {
                for idx in 0..1usize << scale {
                    let x = GroupPoint::new(scale, idx).unwrap();
                    assert_eq!(walsh(n, &x).unwrap(), walsh_by_product(n, &x));
                }
            }
        }
    }

    #[test]
    fn walsh_orthonormal() {
        let scale = 10;
        let n = 1usize << scale;
        for a in 0..n as u64 {
            for b in a..n as u64 {
                let s: i64 = (0..n).map(|x| (walsh_sign(a, x) * walsh_sign(b, x)) as i64).sum();
                assert_eq!(s, if a == b { n as i64 } else { 0 });
            }
        }
    }

    #[test]
    fn transform_examples() {
        let one = GridFunction::new(5, vec![1.0; 32]).unwrap();
        let c = transform(&one);
        assert_eq!(c[0], 1.0);
        assert!(c[1..].iter().all(|&v| v == 0.0));

        let r0 = GridFunction::new(1, vec![1.0, -1.0]).unwrap();
        assert_eq!(transform(&r0), vec![0.0, 1.0]);
    }

    #[test]
    fn transform_bit_identical_to_pairwise_double_sum() {
        for scale in 0..=9 {
            let f = rand_fn(100 + scale as u64, scale);
            let c = transform(&f);
            let norm = (-(scale as f64)).exp2();
            for n in 0..1u64 << scale {
                let terms: Vec<f64> = f
                    .values()
                    .iter()
                    .enumerate()
                    .map(|(x, &v)| v * walsh_sign(n, x) as f64)
                    .collect();
                let naive = pairwise_sum(&terms) * norm;
                assert_eq!(c[n as usize].to_bits(), naive.to_bits(), "scale {scale} n {n}");
                // left-to-right order differs only by rounding
                let seq: f64 = terms.iter().sum::<f64>() * norm;
                assert!((seq - naive).abs() <= 1e-13);
            }
        }
    }

    #[test]
    fn inverse_examples() {
        let mut c = vec![0.0; 16];
        c[0] = 1.0;
        assert!(inverse_transform(&c).unwrap().values().iter().all(|&v| v == 1.0));
        for n in 0..16u64 {
            let mut c = vec![0.0; 16];
            c[n as usize] = 1.0;
            let g = inverse_transform(&c).unwrap();
            for x in 0..16 {
                assert_eq!(g.values()[x], walsh_sign(n, x) as f64);
            }
        }
        assert!(matches!(inverse_transform(&[1.0, 2.0, 3.0]), Err(WfError::NotPowerOfTwo(3))));
    }

    #[test]
    fn round_trip_and_parseval() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for scale in 0..=14 {
            let f = random_function(&mut rng, scale);
            let c = transform(&f);
            let back = inverse_transform(&c).unwrap();
            assert!(back.max_abs_diff(&f).unwrap() <= 1e-12);
            let energy = integrate(&f.map(|v| v * v));
            let coeff_energy = pairwise_sum(&c.iter().map(|v| v * v).collect::<Vec<_>>());
            assert!((energy - coeff_energy).abs() <= 1e-12);
        }
    }

    #[test]
    fn integer_butterfly_matches_definition() {
        let mut data: Vec<i64> = (0..64).map(|i| (i * 7 % 11) - 5).collect();
        let orig = data.clone();
        fwht_in_place(&mut data);
        for n in 0..64u64 {
            let direct: i64 = orig.iter().enumerate().map(|(x, &v)| v * walsh_sign(n, x) as i64).sum();
            assert_eq!(data[n as usize], direct);
        }
    }

    #[test]
    fn norms() {
        let c = GridFunction::new(4, vec![-3.0; 16]).unwrap();
        for p in [0.25, 0.5, 1.0, 2.0, 3.5] {
            assert!((lp_quasinorm(&c, p).unwrap() - 3.0).abs() < 1e-12);
            assert!((weak_lp(&c, p).unwrap() - 3.0).abs() < 1e-12);
        }
        // indicator of I_1: int |f|^{1/2} = 1/2, quasi-norm (1/2)^2
        let ind = DyadicInterval::at_zero(4, 1).unwrap();
        let f = GridFunction::from_fn(4, |i| if ind.contains_index(i) { 1.0 } else { 0.0 }).unwrap();
        assert_eq!(power_integral(&f, 0.5), 0.5);
        assert_eq!(lp_quasinorm(&f, 0.5).unwrap(), 0.25);
        assert!(matches!(lp_quasinorm(&f, 0.0), Err(WfError::InvalidExponent(_))));
        assert!(weak_lp(&f, -1.0).is_err());
        assert!(lp_quasinorm(&f, f64::NAN).is_err());
        assert_eq!(weak_lp(&GridFunction::zeros(3).unwrap(), 0.5).unwrap(), 0.0);
    }

    #[test]
    fn weak_lp_two_level() {
        // |f| = 4 on 1/8 of the points, 1 elsewhere: sup over {4^p/8, 1}
        let f = GridFunction::from_fn(3, |i| if i == 0 { 4.0 } else { -1.0 }).unwrap();
        assert_eq!(weak_lp(&f, 1.0).unwrap(), 1.0);
        assert_eq!(weak_lp(&f, 2.0).unwrap(), 2.0f64.sqrt());
    }

    #[test]
    fn weak_below_strong() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let f = random_function(&mut rng, 8);
            for p in [0.5, 1.0, 2.0] {
                assert!(weak_lp(&f, p).unwrap() <= lp_quasinorm(&f, p).unwrap() * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn intervals() {
        let x = point(&[1, 0, 1, 1, 0]);
        let i3 = DyadicInterval::new(x, 3).unwrap();
        assert_eq!(i3.measure(), 0.125);
        let members: Vec<usize> = i3.members().collect();
        assert_eq!(members.len(), 4);
        for idx in 0..32 {
            let y = GroupPoint::new(5, idx).unwrap();
            let agrees = (0..3).all(|j| y.coord(j) == x.coord(j));
            assert_eq!(i3.contains(&y), agrees);
            assert_eq!(members.contains(&idx), agrees);
        }
        assert!(DyadicInterval::new(x, 6).is_err());
    }

    #[test]
    fn partition_examples() {
        let cells = complement_partition(2).unwrap();
        assert_eq!(cells.len(), 3);
        let mut pts: Vec<usize> = cells.iter().flat_map(|c| c.members()).collect();
        pts.sort();
        assert_eq!(pts, vec![1, 2, 3]);
        assert_eq!((cells[0].residue(), cells[0].depth()), (3, 2));
        assert!(matches!(complement_partition(1), Err(WfError::ScaleTooSmall { .. })));
        for scale in 2..=12 {
            let r = verify_partition(scale).unwrap();
            assert!(r.passed(), "scale {scale}");
            assert_eq!(r.cells as u32, scale * (scale - 1) / 2 + scale);
            assert_eq!(r.covered_points, (1 << scale) - 1);
            assert!((r.total_measure - (1.0 - (-(scale as f64)).exp2())).abs() < 1e-15);
        }
    }

    #[test]
    fn pairwise_sum_small() {
        assert_eq!(pairwise_sum(&[]), 0.0);
        assert_eq!(pairwise_sum(&[1.0, 2.0, 3.0]), 6.0);
        assert_eq!(pairwise_sum(&[1.0; 7]), 7.0);
    }
}
