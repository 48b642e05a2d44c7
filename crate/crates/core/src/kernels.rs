//! Dirichlet and Fejér kernels as exact integer grids.
//!
//! A [`ScaledKernel`] stores `scale_factor * kernel(x)` as `i64`, so every
//! identity between kernels is checked as an integer equality. The
//! definitional kernels come from an integer butterfly synthesis of their
//! Walsh coefficients (`D_n` has coefficient 1 below `n`, `n K_n` has
//! coefficient `n - k`); the closed forms are written out pointwise and never
//! touch the transform.

use rayon::prelude::*;
use serde::Serialize;

use crate::dyadic::{self, Block};
use crate::error::{Result, WfError};
use crate::grid::{fwht_in_place, DyadicInterval, GridFunction, GroupPoint};
use crate::MAX_SCALE;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledKernel {
    scale: u32,
    order: u64,
    scale_factor: i64,
    values: Vec<i64>,
}

impl ScaledKernel {
    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn scale_factor(&self) -> i64 {
        self.scale_factor
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// The kernel itself, `values / scale_factor`.
    pub fn to_grid(&self) -> GridFunction {
        let sf = self.scale_factor as f64;
        GridFunction::new(self.scale, self.values.iter().map(|&v| v as f64 / sf).collect())
            .expect("kernel grids always have 2^M entries")
    }

    /// True when both grids represent the same function, whatever their
    /// scale factors.
    pub fn same_function(&self, other: &ScaledKernel) -> bool {
        self.scale == other.scale
            && self.values.iter().zip(&other.values).all(|(&a, &b)| {
                a as i128 * other.scale_factor as i128 == b as i128 * self.scale_factor as i128
            })
    }
}

fn check_order(n: u64, scale: u32) -> Result<()> {
    if scale > MAX_SCALE {
        return Err(WfError::ScaleTooLarge(scale));
    }
    if n > 1u64 << scale {
        return Err(WfError::OrderOutOfRange { order: n, scale });
    }
    Ok(())
}

/// Integer synthesis `sum_k coefficient(k) w_k` over `k < min(len, 2^M)`.
fn synthesize(scale: u32, len: u64, coefficient: impl Fn(u64) -> i64) -> Vec<i64> {
    let size = 1usize << scale;
    let mut data = vec![0i64; size];
    for (k, slot) in data.iter_mut().enumerate().take(len.min(size as u64) as usize) {
        *slot = coefficient(k as u64);
    }
    fwht_in_place(&mut data);
    data
}

/// `D_n = sum_{k<n} w_k`, for `0 <= n <= 2^M`.
pub fn dirichlet(n: u64, scale: u32) -> Result<ScaledKernel> {
    check_order(n, scale)?;
    Ok(ScaledKernel {
        scale,
        order: n,
        scale_factor: 1,
        values: synthesize(scale, n, |_| 1),
    })
}

/// `D_{2^m}` written out: `2^m` on `I_m`, zero elsewhere.
pub fn dirichlet_pow2_closed(m: u32, scale: u32) -> Result<ScaledKernel> {
    if m > scale {
        return Err(WfError::OrderOutOfRange { order: 1 << m, scale });
    }
    check_order(1 << m, scale)?;
    let mask = (1usize << m) - 1;
    let height = 1i64 << m;
    Ok(ScaledKernel {
        scale,
        order: 1 << m,
        scale_factor: 1,
        values: (0..1usize << scale)
            .map(|i| if i & mask == 0 { height } else { 0 })
            .collect(),
    })
}

/// `n K_n = sum_{k=1}^n D_k`, for `1 <= n <= 2^M`. Scale factor `n`.
pub fn fejer_scaled(n: u64, scale: u32) -> Result<ScaledKernel> {
    if n == 0 {
        return Err(WfError::OrderOutOfRange { order: 0, scale });
    }
    check_order(n, scale)?;
    let order = n as i64;
    Ok(ScaledKernel {
        scale,
        order: n,
        scale_factor: order,
        values: synthesize(scale, n, |k| order - k as i64),
    })
}

/// `K_{2^m}` from its piecewise closed form, stored with scale factor
/// `2^{m+1}` so the half-integers stay integral:
/// `(2^m + 1)/2` on `I_m`, `2^{t-1}` on `I_m(e_t)` for `t < m`, zero elsewhere.
pub fn fejer_pow2_closed(m: u32, scale: u32) -> Result<ScaledKernel> {
    if m > scale {
        return Err(WfError::OrderOutOfRange { order: 1 << m, scale });
    }
    check_order(1 << m, scale)?;
    let mask = (1usize << m) - 1;
    let top = (1i64 << m) * ((1i64 << m) + 1);
    let values = (0..1usize << scale)
        .map(|i| {
            let r = i & mask;
            if r == 0 {
                top
            } else if r.is_power_of_two() {
                // r = 2^t with t < m, so x lies in I_m(e_t)
                1i64 << (m + r.trailing_zeros())
            } else {
                0
            }
        })
        .collect();
    Ok(ScaledKernel {
        scale,
        order: 1 << m,
        scale_factor: 1i64 << (m + 1),
        values,
    })
}

/// Right-hand side of the decomposition
/// `n K_n = sum_A (prod_{j<A} w_{2^{n_j}}) (2^{n_A} K_{2^{n_A}} + n^{(A)} D_{2^{n_A}})`
/// built from the closed forms, doubled. Scale factor `2n`.
pub fn gat_decomposition(n: u64, scale: u32) -> Result<ScaledKernel> {
    if n == 0 {
        return Err(WfError::OrderOutOfRange { order: 0, scale });
    }
    check_order(n, scale)?;
    let size = 1usize << scale;
    let positions: Vec<u32> = (0..64).rev().filter(|&j| (n >> j) & 1 == 1).collect();
    let mut values = vec![0i64; size];
    let mut sign = vec![1i64; size];
    for (a, &p) in positions.iter().enumerate() {
        let fejer = fejer_pow2_closed(p, scale)?;
        let dir = dirichlet_pow2_closed(p, scale)?;
        let tail = dyadic::tail(n, a + 1)? as i64;
        for i in 0..size {
            values[i] += sign[i] * (fejer.values[i] + 2 * tail * dir.values[i]);
        }
        // w_{2^p} = r_p
        if p < scale {
            for (i, s) in sign.iter_mut().enumerate() {
                if (i >> p) & 1 == 1 {
                    *s = -*s;
                }
            }
        }
    }
    Ok(ScaledKernel {
        scale,
        order: n,
        scale_factor: 2 * n as i64,
        values,
    })
}

/// Block bound for `|n K_n|`:
/// `sum_A (2^{l_A} K_{2^{l_A}} + 2^{t_A} K_{2^{t_A}} + 2^{l_A} sum_{k=l_A}^{t_A} D_{2^k})`,
/// doubled (scale factor 2).
pub fn lemma4_rhs(n: u64, scale: u32) -> Result<ScaledKernel> {
    if n == 0 {
        return Err(WfError::ZeroIndex);
    }
    check_order(n, scale)?;
    let size = 1usize << scale;
    let mut values = vec![0i64; size];
    for b in dyadic::blocks(n)?.blocks() {
        let kl = fejer_pow2_closed(b.lower, scale)?;
        let kt = fejer_pow2_closed(b.upper, scale)?;
        let mut dsum = vec![0i64; size];
        for k in b.lower..=b.upper {
            let d = dirichlet_pow2_closed(k, scale)?;
            dsum.iter_mut().zip(&d.values).for_each(|(s, v)| *s += v);
        }
        let lower_weight = 1i64 << b.lower;
        for i in 0..size {
            // fejer_pow2_closed stores 2 * 2^m K_{2^m}
            values[i] += kl.values[i] + kt.values[i] + 2 * lower_weight * dsum[i];
        }
    }
    Ok(ScaledKernel {
        scale,
        order: n,
        scale_factor: 2,
        values,
    })
}

/// An exact nonnegative ratio `num / den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Ratio {
    pub num: i64,
    pub den: i64,
}

impl Ratio {
    pub const ZERO: Ratio = Ratio { num: 0, den: 1 };

    fn new(num: i64, den: i64) -> Ratio {
        let g = gcd(num, den).max(1);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn gt(&self, other: &Ratio) -> bool {
        self.num as i128 * other.den as i128 > other.num as i128 * self.den as i128
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma4Report {
    pub n: u64,
    pub max_ratio: Ratio,
    /// Points where the bound vanishes but `n K_n` does not.
    pub support_violations: usize,
}

/// `max_x |n K_n(x)| / RHS(x)` with `0/0 = 0`.
pub fn lemma4_ratio(n: u64, scale: u32) -> Result<Lemma4Report> {
    let lhs = fejer_scaled(n, scale)?;
    let rhs = lemma4_rhs(n, scale)?;
    let mut max_ratio = Ratio::ZERO;
    let mut support_violations = 0;
    for (&l, &r) in lhs.values.iter().zip(&rhs.values) {
        // |n K_n| / RHS = 2|l| / r
        let num = 2 * l.abs();
        if r == 0 {
            if num != 0 {
                support_violations += 1;
            }
            continue;
        }
        let q = Ratio::new(num, r);
        if q.gt(&max_ratio) {
            max_ratio = q;
        }
    }
    Ok(Lemma4Report {
        n,
        max_ratio,
        support_violations,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma4Summary {
    pub scale: u32,
    pub max_n: u64,
    pub max_ratio: Ratio,
    pub argmax: u64,
    pub support_violations: usize,
}

/// Runs [`lemma4_ratio`] for every `1 <= n <= max_n`.
pub fn lemma4_sweep(max_n: u64, scale: u32) -> Result<Lemma4Summary> {
    check_order(max_n, scale)?;
    let reports = (1..=max_n)
        .into_par_iter()
        .map(|n| lemma4_ratio(n, scale))
        .collect::<Result<Vec<_>>>()?;
    let mut summary = Lemma4Summary {
        scale,
        max_n,
        max_ratio: Ratio::ZERO,
        argmax: 0,
        support_violations: 0,
    };
    for r in reports {
        summary.support_violations += r.support_violations;
        if r.max_ratio.gt(&summary.max_ratio) {
            summary.max_ratio = r.max_ratio;
            summary.argmax = r.n;
        }
    }
    Ok(summary)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EndpointKind {
    Lower,
    Upper,
}

/// A set on which `n |K_n|` is bounded below by `2^{bound_exponent}`.
#[derive(Clone, Debug, Serialize)]
pub struct LowerBoundSet {
    pub block: Block,
    pub kind: EndpointKind,
    pub endpoint: u32,
    pub set: DyadicInterval,
    pub bound_exponent: i32,
}

impl LowerBoundSet {
    pub fn bound(&self) -> f64 {
        (self.bound_exponent as f64).exp2()
    }
}

fn interval(scale: u32, endpoint: u32, index: usize, depth: u32) -> Result<DyadicInterval> {
    if depth > scale {
        return Err(WfError::Unresolvable {
            endpoint,
            needed: depth,
            scale,
        });
    }
    DyadicInterval::new(GroupPoint::new(scale, index)?, depth)
}

/// Set carrying the bound for the upper endpoint `t` of a block:
/// first `t + 1` coordinates zero, coordinates `t + 1` and `t + 2` equal 1.
pub fn upper_endpoint_set(t: u32, scale: u32) -> Result<DyadicInterval> {
    interval(scale, t, (1 << (t + 1)) | (1 << (t + 2)), t + 3)
}

/// Set carrying the bound for the lower endpoint of `block`.
///
/// For `l >= 1` this is `I_{l+1}(e_{l-1} + e_l)`. For `l = 0` the set
/// `I_2(e_0 + e_1)` only works for an isolated bit (`t = 0`); when the block
/// is longer `n K_n` vanishes there, and `I_{t+1}(e_0)` is used instead.
pub fn lower_endpoint_set(block: Block, scale: u32) -> Result<DyadicInterval> {
    let l = block.lower;
    match (l, block.upper) {
        (0, 0) => interval(scale, 0, 0b11, 2),
        (0, t) => interval(scale, 0, 1, t + 1),
        (l, _) => interval(scale, l, (1 << (l - 1)) | (1 << l), l + 1),
    }
}

/// Lower-bound sets for every block endpoint of `n`.
pub fn lemma5_sets(n: u64, scale: u32) -> Result<Vec<LowerBoundSet>> {
    let decomposition = dyadic::blocks(n)?;
    let mut out = Vec::with_capacity(2 * decomposition.len());
    for &block in decomposition.blocks() {
        out.push(LowerBoundSet {
            block,
            kind: EndpointKind::Upper,
            endpoint: block.upper,
            set: upper_endpoint_set(block.upper, scale)?,
            bound_exponent: 2 * block.upper as i32 - 5,
        });
        out.push(LowerBoundSet {
            block,
            kind: EndpointKind::Lower,
            endpoint: block.lower,
            set: lower_endpoint_set(block, scale)?,
            bound_exponent: 2 * block.lower as i32 - 5,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma5Violation {
    pub kind: EndpointKind,
    pub endpoint: u32,
    pub index: usize,
    pub scaled_value: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma5Report {
    pub n: u64,
    pub sets: usize,
    pub points_checked: usize,
    pub violations: Vec<Lemma5Violation>,
}

/// `|v| >= 2^{exponent}` for integer `v`, without leaving the integers.
fn meets_power_bound(v: i64, exponent: i32) -> bool {
    let v = v.unsigned_abs() as u128;
    if exponent >= 0 {
        v >= 1u128 << exponent
    } else {
        // 2^e <= v with e < 0 holds for every nonzero integer
        v << (-exponent) as u32 >= 1
    }
}

/// Checks `n |K_n(x)| >= bound` at every point of every set from [`lemma5_sets`].
pub fn lemma5_check(n: u64, scale: u32) -> Result<Lemma5Report> {
    let sets = lemma5_sets(n, scale)?;
    let kernel = fejer_scaled(n, scale)?;
    let mut violations = Vec::new();
    let mut points_checked = 0;
    for s in &sets {
        for idx in s.set.members() {
            points_checked += 1;
            let v = kernel.values[idx];
            if !meets_power_bound(v, s.bound_exponent) {
                violations.push(Lemma5Violation {
                    kind: s.kind,
                    endpoint: s.endpoint,
                    index: idx,
                    scaled_value: v,
                });
            }
        }
    }
    Ok(Lemma5Report {
        n,
        sets: sets.len(),
        points_checked,
        violations,
    })
}
