//! Zero finding for holomorphic functions on rectangles, certified by the
//! argument principle: Newton iterations from a seed grid locate the
//! zeros, and a winding-number integral over the box boundary (adaptively
//! refined until it stabilises on an integer) certifies that none were
//! missed.

use rayon::prelude::*;
use thiserror::Error;

use crate::complex::C;
use crate::expr::EvalError;
use crate::geomspec::DomainRect;
use crate::jet::Jet1;

use super::{cluster, Root, RootSet};

/// A holomorphic function presented through its jets; order 1 suffices for
/// Newton, order 0 for winding integrals.
pub trait AnalyticFn: Sync {
    fn jet(&self, t: C, order: usize) -> Result<Jet1, EvalError>;

    fn value(&self, t: C) -> Result<C, EvalError> {
        Ok(self.jet(t, 0)?.value())
    }
}

impl<F> AnalyticFn for F
where
    F: Fn(C, usize) -> Result<Jet1, EvalError> + Sync,
{
    fn jet(&self, t: C, order: usize) -> Result<Jet1, EvalError> {
        self(t, order)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZeroBoxError {
    #[error("|h| = {min_abs:.3e} on the box boundary: zero on or too close to the boundary")]
    BoundaryZero { min_abs: f64 },
    #[error("winding integral did not stabilise to an integer")]
    WindingUnstable,
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
}

/// Zeros of `h` inside `rect`, each with a multiplicity from a small
/// winding circle, certified against the boundary winding count.
///
/// Requires `h` holomorphic on the closed box with no zero on the
/// boundary; a suspiciously small boundary value is an error rather than a
/// wrong count.
pub fn zeros_in_box(
    h: &dyn AnalyticFn,
    rect: DomainRect,
    grid: usize,
    tol: f64,
) -> Result<RootSet<C>, ZeroBoxError> {
    let grid = grid.max(3);
    let width = rect.re[1] - rect.re[0];
    let height = rect.im[1] - rect.im[0];
    let diam = (width * width + height * height).sqrt().max(1e-12);

    // boundary guard
    let boundary = boundary_points(&rect, 8 * grid);
    let mut min_abs = f64::INFINITY;
    let mut scale: f64 = 0.0;
    for &p in &boundary {
        let v = h.value(p)?;
        min_abs = min_abs.min(v.norm());
        scale = scale.max(v.norm());
    }
    if min_abs <= 1e-9 * scale.max(1.0) {
        return Err(ZeroBoxError::BoundaryZero { min_abs });
    }

    // Newton from a deterministic seed grid (parallel, order restored by
    // collecting in grid order)
    let seeds: Vec<C> = (0..grid)
        .flat_map(|i| {
            (0..grid).map(move |j| {
                C::new(
                    rect.re[0] + width * (i as f64 + 0.5) / grid as f64,
                    rect.im[0] + height * (j as f64 + 0.5) / grid as f64,
                )
            })
        })
        .collect();

    let found: Vec<Option<C>> = seeds
        .par_iter()
        .map(|&seed| newton_converge(h, seed, &rect, diam).ok().flatten())
        .collect();

    let hits: Vec<C> = found.into_iter().flatten().collect();
    let clusters = cluster(&hits, 1e-7 * diam.max(1.0));

    // per-zero multiplicity from a small winding circle
    let mut roots = Vec::new();
    for (idx, (center, _)) in clusters.iter().enumerate() {
        let mut r = 0.45 * boundary_distance(&rect, *center);
        for (jdx, (other, _)) in clusters.iter().enumerate() {
            if jdx != idx {
                r = r.min(0.45 * (center - other).norm());
            }
        }
        let r = r.max(1e-9 * diam);
        let mult = winding_circle(h, *center, r)?;
        if mult == 0 {
            continue; // Newton artifact outside its own basin
        }
        let residual = h.value(*center)?.norm();
        roots.push(Root {
            value: *center,
            multiplicity: mult as usize,
            residual,
        });
    }
    roots.sort_by(|a, b| {
        (a.value.re, a.value.im)
            .partial_cmp(&(b.value.re, b.value.im))
            .unwrap()
    });

    let total: usize = roots.iter().map(|r| r.multiplicity).sum();
    let box_count = winding_rect(h, &rect)?;
    let residual_ok = roots
        .iter()
        .all(|r| r.residual <= tol.max(1e-9) * scale.max(1.0));

    Ok(RootSet {
        certified_count: if box_count as usize == total && residual_ok {
            Some(box_count as usize)
        } else {
            None
        },
        roots,
    })
}

fn newton_converge(
    h: &dyn AnalyticFn,
    seed: C,
    rect: &DomainRect,
    diam: f64,
) -> Result<Option<C>, EvalError> {
    let mut z = seed;
    for _ in 0..60 {
        let j = h.jet(z, 1)?;
        let (v, d) = (j.coeff(0), j.coeff(1));
        if d.norm() == 0.0 {
            return Ok(None);
        }
        let step = v / d;
        z -= step;
        if !z.re.is_finite() || !z.im.is_finite() || !rect.contains(z, 2.0 * diam) {
            return Ok(None);
        }
        if step.norm() <= 1e-14 * (1.0 + z.norm()) {
            // converged; accept only interior zeros
            return Ok(if rect.contains(z, -1e-12 * diam) { Some(z) } else { None });
        }
    }
    Ok(None)
}

fn boundary_points(rect: &DomainRect, n_per_edge: usize) -> Vec<C> {
    let mut pts = Vec::with_capacity(4 * n_per_edge);
    for k in 0..n_per_edge {
        let t = k as f64 / n_per_edge as f64;
        pts.push(C::new(
            rect.re[0] + t * (rect.re[1] - rect.re[0]),
            rect.im[0],
        ));
        pts.push(C::new(
            rect.re[1],
            rect.im[0] + t * (rect.im[1] - rect.im[0]),
        ));
        pts.push(C::new(
            rect.re[1] - t * (rect.re[1] - rect.re[0]),
            rect.im[1],
        ));
        pts.push(C::new(
            rect.re[0],
            rect.im[1] - t * (rect.im[1] - rect.im[0]),
        ));
    }
    pts
}

fn boundary_distance(rect: &DomainRect, z: C) -> f64 {
    let dr = (z.re - rect.re[0]).min(rect.re[1] - z.re);
    let di = (z.im - rect.im[0]).min(rect.im[1] - z.im);
    dr.min(di).max(0.0)
}

/// Winding number of h along the positively oriented rectangle boundary,
/// refined by doubling until two successive levels agree on an integer
/// within 0.25.
fn winding_rect(h: &dyn AnalyticFn, rect: &DomainRect) -> Result<i64, ZeroBoxError> {
    let corners = [
        C::new(rect.re[0], rect.im[0]),
        C::new(rect.re[1], rect.im[0]),
        C::new(rect.re[1], rect.im[1]),
        C::new(rect.re[0], rect.im[1]),
        C::new(rect.re[0], rect.im[0]),
    ];
    let mut prev: Option<(i64, f64)> = None;
    let mut n = 64usize;
    while n <= 65536 {
        match winding_polyline(h, &corners, n) {
            Ok(total) => {
                let count = (total / (2.0 * std::f64::consts::PI)).round();
                let defect = (total / (2.0 * std::f64::consts::PI) - count).abs();
                if defect < 0.25 {
                    if let Some((pc, _)) = prev {
                        if pc == count as i64 {
                            return Ok(count as i64);
                        }
                    }
                    prev = Some((count as i64, defect));
                } else {
                    prev = None;
                }
            }
            Err(WindingStep::TooFast) => {
                prev = None;
            }
            Err(WindingStep::Eval(e)) => return Err(ZeroBoxError::Eval(e)),
            Err(WindingStep::NearZero) => {
                return Err(ZeroBoxError::BoundaryZero { min_abs: 0.0 })
            }
        }
        n *= 2;
    }
    Err(ZeroBoxError::WindingUnstable)
}

fn winding_circle(h: &dyn AnalyticFn, center: C, radius: f64) -> Result<i64, ZeroBoxError> {
    let mut prev: Option<i64> = None;
    let mut n = 64usize;
    while n <= 65536 {
        let pts: Vec<C> = (0..=n)
            .map(|k| {
                center
                    + C::from_polar(
                        radius,
                        2.0 * std::f64::consts::PI * k as f64 / n as f64,
                    )
            })
            .collect();
        match winding_along(h, &pts) {
            Ok(total) => {
                let count = (total / (2.0 * std::f64::consts::PI)).round();
                let defect = (total / (2.0 * std::f64::consts::PI) - count).abs();
                if defect < 0.25 {
                    if prev == Some(count as i64) {
                        return Ok(count as i64);
                    }
                    prev = Some(count as i64);
                } else {
                    prev = None;
                }
            }
            Err(WindingStep::TooFast) => prev = None,
            Err(WindingStep::Eval(e)) => return Err(ZeroBoxError::Eval(e)),
            Err(WindingStep::NearZero) => {
                return Err(ZeroBoxError::BoundaryZero { min_abs: 0.0 })
            }
        }
        n *= 2;
    }
    Err(ZeroBoxError::WindingUnstable)
}

enum WindingStep {
    TooFast,
    NearZero,
    Eval(EvalError),
}

fn winding_polyline(h: &dyn AnalyticFn, corners: &[C], n_per_edge: usize) -> Result<f64, WindingStep> {
    let mut pts = Vec::with_capacity(corners.len() * n_per_edge);
    for w in corners.windows(2) {
        for k in 0..n_per_edge {
            let t = k as f64 / n_per_edge as f64;
            pts.push(w[0] + (w[1] - w[0]) * t);
        }
    }
    pts.push(corners[corners.len() - 1]);
    winding_along(h, &pts)
}

/// Accumulated argument increment of h along a closed sampled path. Each
/// step must rotate by less than π/2, otherwise the sampling is too coarse
/// to trust.
fn winding_along(h: &dyn AnalyticFn, pts: &[C]) -> Result<f64, WindingStep> {
    let mut total = 0.0;
    let mut prev = h.value(pts[0]).map_err(WindingStep::Eval)?;
    if prev.norm() < 1e-300 {
        return Err(WindingStep::NearZero);
    }
    for &p in &pts[1..] {
        let cur = h.value(p).map_err(WindingStep::Eval)?;
        if cur.norm() < 1e-300 {
            return Err(WindingStep::NearZero);
        }
        let delta = (cur / prev).arg();
        if delta.abs() > std::f64::consts::FRAC_PI_2 {
            return Err(WindingStep::TooFast);
        }
        total += delta;
        prev = cur;
    }
    Ok(total)
}
