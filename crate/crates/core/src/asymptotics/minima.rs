use crate::error::{Error, Result};

use super::Landscape;

const GRID: usize = 9;
const GRID_HALF_WIDTH: f64 = 3.0;
const MAX_ITERATIONS: usize = 200;
const DEDUP_TOL: f64 = 1e-8;
const DEGENERATE_DEDUP_TOL: f64 = 1e-3;
const GRAD_TOL: f64 = 1e-12;
const STEP_TOL: f64 = 1e-10;
const EIGEN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StationaryKind {
    Minimum,
    Maximum,
    Saddle,
    /// A Hessian eigenvalue is zero within tolerance.
    Degenerate,
}

impl StationaryKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            StationaryKind::Minimum => "min",
            StationaryKind::Maximum => "max",
            StationaryKind::Saddle => "saddle",
            StationaryKind::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryPoint {
    pub y1: f64,
    pub y2: f64,
    pub value: f64,
    pub kind: StationaryKind,
}

fn norm2(g: [f64; 2]) -> f64 {
    g[0] * g[0] + g[1] * g[1]
}

/// Damped Newton on `grad F = 0`. Steps are halved until `|grad F|^2`
/// decreases, so maxima and saddles are reachable as well as minima; when
/// no Newton step helps, a descent step on `|grad F|^2` is tried instead.
fn newton(ls: &Landscape, start: (f64, f64)) -> Result<(f64, f64)> {
    let (mut y1, mut y2) = start;
    for _ in 0..MAX_ITERATIONS {
        let g = ls.eval_grad_f_y(y1, y2);
        let merit = norm2(g);
        if merit == 0.0 {
            return Ok((y1, y2));
        }
        let h = ls.hessian_y(y1, y2);
        let det = h.det();
        let newton_step = (det.abs() > 1e-300).then(|| {
            [
                -(h.h22 * g[0] - h.h12 * g[1]) / det,
                -(h.h11 * g[1] - h.h12 * g[0]) / det,
            ]
        });
        // A small gradient alone is not enough near degenerate points,
        // where Newton converges only linearly.
        let step_small = newton_step
            .map_or(true, |d| norm2(d).sqrt() <= STEP_TOL * (1.0 + y1.hypot(y2)));
        if merit.sqrt() <= GRAD_TOL && step_small {
            return Ok((y1, y2));
        }
        let descent = [-(h.h11 * g[0] + h.h12 * g[1]), -(h.h12 * g[0] + h.h22 * g[1])];
        let mut moved = false;
        for dir in newton_step.into_iter().chain(std::iter::once(descent)) {
            let mut lambda = 1.0;
            for _ in 0..60 {
                let (c1, c2) = (y1 + lambda * dir[0], y2 + lambda * dir[1]);
                if norm2(ls.eval_grad_f_y(c1, c2)) < merit {
                    y1 = c1;
                    y2 = c2;
                    moved = true;
                    break;
                }
                lambda *= 0.5;
            }
            if moved {
                break;
            }
        }
        if !moved {
            // No representable improvement: accept if already tiny.
            if merit.sqrt() <= 1e3 * GRAD_TOL {
                return Ok((y1, y2));
            }
            break;
        }
    }
    let g = ls.eval_grad_f_y(y1, y2);
    if norm2(g).sqrt() <= 1e3 * GRAD_TOL {
        return Ok((y1, y2));
    }
    Err(Error::NonConvergence {
        y1: start.0,
        y2: start.1,
        iterations: MAX_ITERATIONS,
    })
}

fn classify(ls: &Landscape, y1: f64, y2: f64) -> StationaryKind {
    let [lo, hi] = ls.hessian_y(y1, y2).eigenvalues();
    if lo > EIGEN_TOL {
        StationaryKind::Minimum
    } else if hi < -EIGEN_TOL {
        StationaryKind::Maximum
    } else if lo < -EIGEN_TOL && hi > EIGEN_TOL {
        StationaryKind::Saddle
    } else {
        StationaryKind::Degenerate
    }
}

/// Stationary points of `F` found by multi-start Newton from a 9 x 9 grid
/// over `[-3, 3]^2`, deduplicated and sorted by `(y1, y2)`. A start whose
/// iteration stalls at a nonzero local minimum of `|grad F|^2` is dropped;
/// the search fails only if no start reaches a minimum of `F`.
pub fn find_minima(ls: &Landscape) -> Result<Vec<StationaryPoint>> {
    let step = 2.0 * GRID_HALF_WIDTH / (GRID - 1) as f64;
    let mut found: Vec<StationaryPoint> = Vec::new();
    let mut first_failure = None;
    for a in 0..GRID {
        for b in 0..GRID {
            let start = (-GRID_HALF_WIDTH + a as f64 * step, -GRID_HALF_WIDTH + b as f64 * step);
            let (y1, y2) = match newton(ls, start) {
                Ok(y) => y,
                Err(e) => {
                    first_failure.get_or_insert(e);
                    continue;
                }
            };
            let kind = classify(ls, y1, y2);
            // Degenerate points converge slowly and land less precisely.
            let duplicate = found.iter().any(|p| {
                let loose = kind == StationaryKind::Degenerate || p.kind == StationaryKind::Degenerate;
                let tol = if loose { DEGENERATE_DEDUP_TOL } else { DEDUP_TOL };
                (p.y1 - y1).abs().max((p.y2 - y2).abs()) <= tol
            });
            if !duplicate {
                found.push(StationaryPoint {
                    y1,
                    y2,
                    value: ls.eval_f_y(y1, y2),
                    kind,
                });
            }
        }
    }
    if let Some(e) = first_failure {
        if !found.iter().any(|p| p.kind == StationaryKind::Minimum) {
            return Err(e);
        }
    }
    found.sort_by(|p, q| p.y1.total_cmp(&q.y1).then(p.y2.total_cmp(&q.y2)));
    Ok(found)
}

/// The minimizers attaining the smallest value of `F` (up to `1e-12`).
pub fn global_minima(points: &[StationaryPoint]) -> Vec<StationaryPoint> {
    let best = points
        .iter()
        .filter(|p| p.kind == StationaryKind::Minimum)
        .map(|p| p.value)
        .fold(f64::INFINITY, f64::min);
    points
        .iter()
        .filter(|p| p.kind == StationaryKind::Minimum && p.value <= best + 1e-12)
        .copied()
        .collect()
}
