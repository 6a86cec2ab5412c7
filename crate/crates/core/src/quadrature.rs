//! Globally adaptive Gauss-Kronrod (7-15) quadrature on finite intervals,
//! and a nested tensor-product rule for rectangles.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
// Gauss weights for the odd Kronrod nodes (indices 1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Stopping rule and effort limits for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Equal panels the interval is split into before adapting.
    pub initial_panels: usize,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-12,
            initial_panels: 8,
            max_intervals: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut gauss = fc * WG[3];
    let mut kron = fc * WGK[7];
    for (i, (&x, &w)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let pair = f(center - half * x) + f(center + half * x);
        kron += w * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    let value = kron * half;
    if !value.is_finite() {
        return Err(Error::Quadrature {
            estimate: value,
            tolerance: f64::NAN,
        });
    }
    Ok(Panel {
        a,
        b,
        value,
        error: ((kron - gauss) * half).abs(),
    })
}

/// Integrates `f` over `[a, b]` until the summed error estimate meets
/// `max(abs_tol, rel_tol * |value|)`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter("integration bounds must be finite".into()));
    }
    if a == b {
        return Ok(QuadResult { value: 0.0, error: 0.0 });
    }
    let panels = opts.initial_panels.max(1);
    let step = (b - a) / panels as f64;
    let mut heap = BinaryHeap::with_capacity(panels * 4);
    for p in 0..panels {
        let lo = a + step * p as f64;
        let hi = if p + 1 == panels { b } else { lo + step };
        heap.push(kronrod(&mut f, lo, hi)?);
    }
    loop {
        let value: f64 = heap.iter().map(|p| p.value).sum();
        let error: f64 = heap.iter().map(|p| p.error).sum();
        let target = opts.abs_tol.max(opts.rel_tol * value.abs());
        if error <= target {
            return Ok(QuadResult { value, error });
        }
        let worst = heap.pop().expect("heap is nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if heap.len() + 2 > opts.max_intervals || mid <= worst.a || mid >= worst.b {
            return Err(Error::Quadrature {
                estimate: error,
                tolerance: target,
            });
        }
        heap.push(kronrod(&mut f, worst.a, mid)?);
        heap.push(kronrod(&mut f, mid, worst.b)?);
    }
}

/// `int_{a1}^{b1} int_{a2}^{b2} f(x, y) dy dx` by nesting [`integrate`].
/// The inner tolerance is tightened so the inner errors, summed by the
/// outer rule, stay below the requested tolerance.
pub fn integrate_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    (a1, b1): (f64, f64),
    (a2, b2): (f64, f64),
    opts: &QuadOptions,
) -> Result<QuadResult> {
    let inner_opts = QuadOptions {
        abs_tol: opts.abs_tol / (10.0 * (b1 - a1).abs().max(1.0)),
        rel_tol: opts.rel_tol * 0.1,
        ..*opts
    };
    let mut failure = None;
    let mut inner_error = 0.0f64;
    let outer = integrate(
        |x| {
            if failure.is_some() {
                return 0.0;
            }
            match integrate(|y| f(x, y), a2, b2, &inner_opts) {
                Ok(r) => {
                    inner_error = inner_error.max(r.error);
                    r.value
                }
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            }
        },
        a1,
        b1,
        opts,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let outer = outer?;
    Ok(QuadResult {
        value: outer.value,
        error: outer.error + inner_error * (b1 - a1).abs(),
    })
}
