//! Zero-contour tracing of surface loci (isotropic locus, parabolic set,
//! ridges) on a user-selected real 2-slice of the complex parameter
//! space.
//!
//! The loci are complex curves — real surfaces in the 4-real-dimensional
//! parameter space — so exports trace their intersection with a real
//! 2-plane q(u,v). When the defining function is real-valued on the slice
//! the intersection is a curve (marching squares + Newton refinement);
//! otherwise it is a set of isolated points (2D Newton on (Re g, Im g)).

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{Branch, C};
use crate::error::GeomError;
use crate::geomspec::{GeomSpec, SliceSpec};
use crate::options::NumericOptions;

use super::lift_surface;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LocusKind {
    /// δ = EG − F² = 0.
    IsotropicLocus,
    /// l̄n̄ − m̄² = 0.
    Parabolic,
    /// dκᵢ(eᵢ) = 0 for sheet i ∈ {1, 2}.
    Ridge(usize),
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TracePoint {
    pub u: f64,
    pub v: f64,
    pub z1: C,
    pub z2: C,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LocusTrace {
    pub kind: LocusKind,
    /// Chained polyline segments (real-valued slices).
    pub segments: Vec<Vec<TracePoint>>,
    /// Isolated zeros (slices where the defining function is genuinely
    /// complex-valued).
    pub isolated: Vec<TracePoint>,
    pub identically_zero: bool,
    pub empty: bool,
    pub real_valued_slice: bool,
    pub warnings: Vec<String>,
}

/// Evaluate the defining function and its (u,v) slice gradient at one
/// slice point. The gradient uses the holomorphic chain rule: the slice is
/// complex-affine in its real parameters.
fn defining(
    spec: &GeomSpec,
    kind: LocusKind,
    slice: &SliceSpec,
    u: f64,
    v: f64,
    opts: &NumericOptions,
) -> Result<(C, C, C), GeomError> {
    let q = slice.at(u, v);
    let order = match kind {
        LocusKind::Ridge(_) => 3,
        _ => 2,
    };
    let jets = lift_surface(spec, q, order)?;
    let gjet = match kind {
        LocusKind::IsotropicLocus => jets.delta.clone(),
        LocusKind::Parabolic => jets.lb.mul(&jets.nb).sub(&jets.mb.mul(&jets.mb)),
        LocusKind::Ridge(i) => ridge_jet(&jets, i, opts)?,
    };
    let gz1 = gjet.partial(1, 0);
    let gz2 = gjet.partial(0, 1);
    let udir = (
        C::new(slice.u_dir[0][0], slice.u_dir[0][1]),
        C::new(slice.u_dir[1][0], slice.u_dir[1][1]),
    );
    let vdir = (
        C::new(slice.v_dir[0][0], slice.v_dir[0][1]),
        C::new(slice.v_dir[1][0], slice.v_dir[1][1]),
    );
    let du = gz1 * udir.0 + gz2 * udir.1;
    let dv = gz1 * vdir.0 + gz2 * vdir.1;
    Ok((gjet.value(), du, dv))
}

/// dκᵢ(eᵢ) as an order-(order−2) jet is overkill here; the tracer only
/// needs the value and first slice derivatives, so return the κᵢ-jet
/// contracted with the principal direction at the point.
fn ridge_jet(
    jets: &super::SurfaceJets,
    sheet: usize,
    opts: &NumericOptions,
) -> Result<crate::jet::Jet2, GeomError> {
    use crate::jet::Jet2;
    let shape = super::shape_from_jets(jets, opts)?;
    let a11 = jets.g.mul(&jets.lb).sub(&jets.f.mul(&jets.mb)).div(&jets.delta)?;
    let a12 = jets.g.mul(&jets.mb).sub(&jets.f.mul(&jets.nb)).div(&jets.delta)?;
    let a21 = jets.e.mul(&jets.mb).sub(&jets.f.mul(&jets.lb)).div(&jets.delta)?;
    let a22 = jets.e.mul(&jets.nb).sub(&jets.f.mul(&jets.mb)).div(&jets.delta)?;
    let tr = a11.add(&a22);
    let det = a11.mul(&a22).sub(&a12.mul(&a21));
    let disc = tr.mul(&tr).sub(&det.scale(C::new(4.0, 0.0)));
    let root = disc.sqrt(Branch::Principal)?;
    let half = C::new(0.5, 0.0);
    let lam_p = tr.add(&root).scale(half);
    let lam_m = tr.sub(&root).scale(half);

    let sq = jets.delta.sqrt(opts.branch)?;
    let (want, dir) = if sheet == 1 {
        (shape.kappa1.value, shape.e1)
    } else {
        (shape.kappa2.value, shape.e2)
    };
    let kp = lam_p.div(&sq)?;
    let km = lam_m.div(&sq)?;
    let kappa = if (kp.value() - want).norm() <= (km.value() - want).norm() {
        kp
    } else {
        km
    };
    // directional derivative along the (Hermitian-normalised) principal
    // direction, as a jet so the tracer can refine
    let n = (dir[0].norm_sqr() + dir[1].norm_sqr()).sqrt();
    let d1 = kappa.d1().scale(dir[0] / n);
    let d2 = kappa.d2().scale(dir[1] / n);
    Ok(Jet2::add(&d1, &d2))
}

/// Trace the zero set of the defining function over an n×n grid on the
/// slice rectangle [u_range] × [v_range].
pub fn trace_locus(
    spec: &GeomSpec,
    kind: LocusKind,
    slice: &SliceSpec,
    u_range: [f64; 2],
    v_range: [f64; 2],
    n: usize,
    opts: &NumericOptions,
) -> Result<LocusTrace, GeomError> {
    let n = n.max(8);
    let us: Vec<f64> = (0..n)
        .map(|i| u_range[0] + (u_range[1] - u_range[0]) * i as f64 / (n - 1) as f64)
        .collect();
    let vs: Vec<f64> = (0..n)
        .map(|j| v_range[0] + (v_range[1] - v_range[0]) * j as f64 / (n - 1) as f64)
        .collect();

    let rows: Vec<Vec<Option<C>>> = us
        .par_iter()
        .map(|&u| {
            vs.iter()
                .map(|&v| defining(spec, kind, slice, u, v, opts).ok().map(|t| t.0))
                .collect()
        })
        .collect();

    let mut warnings = Vec::new();
    let defined: usize = rows
        .iter()
        .flatten()
        .filter(|x| x.is_some())
        .count();
    if defined == 0 {
        return Ok(LocusTrace {
            kind,
            segments: Vec::new(),
            isolated: Vec::new(),
            identically_zero: false,
            empty: true,
            real_valued_slice: false,
            warnings: vec!["defining function undefined on the whole grid".into()],
        });
    }
    if defined < rows.len() * rows[0].len() {
        warnings.push(format!(
            "defining function undefined at {} of {} grid points",
            rows.len() * rows[0].len() - defined,
            rows.len() * rows[0].len()
        ));
    }

    let scale = rows
        .iter()
        .flatten()
        .flatten()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if scale <= opts.tol_iso {
        return Ok(LocusTrace {
            kind,
            segments: Vec::new(),
            isolated: Vec::new(),
            identically_zero: true,
            empty: false,
            real_valued_slice: true,
            warnings,
        });
    }

    let max_im = rows
        .iter()
        .flatten()
        .flatten()
        .map(|z| z.im.abs())
        .fold(0.0, f64::max);
    let real_valued = max_im <= 1e-8 * scale;

    let mut trace = LocusTrace {
        kind,
        segments: Vec::new(),
        isolated: Vec::new(),
        identically_zero: false,
        empty: false,
        real_valued_slice: real_valued,
        warnings,
    };

    if real_valued {
        // marching squares on Re g, then Newton along the gradient
        let mut raw_segments: Vec<(TracePoint, TracePoint)> = Vec::new();
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                let cell = [
                    (i, j),
                    (i + 1, j),
                    (i + 1, j + 1),
                    (i, j + 1),
                ];
                let vals: Option<Vec<f64>> = cell
                    .iter()
                    .map(|&(a, b)| rows[a][b].map(|z| z.re))
                    .collect();
                let Some(vals) = vals else { continue };
                let mut crossings = Vec::new();
                for k in 0..4 {
                    let (a, b) = (vals[k], vals[(k + 1) % 4]);
                    if (a <= 0.0 && b > 0.0) || (a > 0.0 && b <= 0.0) {
                        let t = a / (a - b);
                        let (i0, j0) = cell[k];
                        let (i1, j1) = cell[(k + 1) % 4];
                        let uu = us[i0] + (us[i1] - us[i0]) * t;
                        let vv = vs[j0] + (vs[j1] - vs[j0]) * t;
                        crossings.push((uu, vv));
                    }
                }
                if crossings.len() == 2 {
                    let a = refine_real(spec, kind, slice, crossings[0], opts);
                    let b = refine_real(spec, kind, slice, crossings[1], opts);
                    if let (Some(a), Some(b)) = (a, b) {
                        raw_segments.push((a, b));
                    }
                }
            }
        }
        trace.segments = chain_segments(raw_segments);
        trace.empty = trace.segments.is_empty();
    } else {
        // isolated zeros: look for simultaneous sign structure, then 2D
        // Newton from cell centres
        let mut found: Vec<TracePoint> = Vec::new();
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                let vals: Option<Vec<C>> = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]
                    .iter()
                    .map(|&(a, b)| rows[a][b])
                    .collect();
                let Some(vals) = vals else { continue };
                let re_changes = vals.iter().any(|z| z.re <= 0.0) && vals.iter().any(|z| z.re > 0.0);
                let im_changes = vals.iter().any(|z| z.im <= 0.0) && vals.iter().any(|z| z.im > 0.0);
                if !(re_changes && im_changes) {
                    continue;
                }
                let u0 = 0.5 * (us[i] + us[i + 1]);
                let v0 = 0.5 * (vs[j] + vs[j + 1]);
                if let Some(pt) = refine_complex(spec, kind, slice, (u0, v0), opts) {
                    if !found
                        .iter()
                        .any(|p| (p.u - pt.u).hypot(p.v - pt.v) < 1e-6 * (1.0 + pt.u.abs() + pt.v.abs()))
                    {
                        found.push(pt);
                    }
                }
            }
        }
        trace.isolated = found;
        trace.empty = trace.isolated.is_empty();
    }

    Ok(trace)
}

fn refine_real(
    spec: &GeomSpec,
    kind: LocusKind,
    slice: &SliceSpec,
    start: (f64, f64),
    opts: &NumericOptions,
) -> Option<TracePoint> {
    let (mut u, mut v) = start;
    let mut best: Option<TracePoint> = None;
    for _ in 0..30 {
        let (g, du, dv) = defining(spec, kind, slice, u, v, opts).ok()?;
        let grad = (du.re, dv.re);
        let gn2 = grad.0 * grad.0 + grad.1 * grad.1;
        let q = slice.at(u, v);
        let point = TracePoint {
            u,
            v,
            z1: q.0,
            z2: q.1,
            residual: g.norm(),
        };
        if best.as_ref().map_or(true, |b| point.residual < b.residual) {
            best = Some(point);
        }
        if gn2 < 1e-300 {
            break;
        }
        let step = g.re / gn2;
        u -= step * grad.0;
        v -= step * grad.1;
        if (step * step * gn2).sqrt() < 1e-14 * (1.0 + u.abs() + v.abs()) {
            let (g, _, _) = defining(spec, kind, slice, u, v, opts).ok()?;
            let q = slice.at(u, v);
            return Some(TracePoint {
                u,
                v,
                z1: q.0,
                z2: q.1,
                residual: g.norm(),
            });
        }
    }
    best
}

fn refine_complex(
    spec: &GeomSpec,
    kind: LocusKind,
    slice: &SliceSpec,
    start: (f64, f64),
    opts: &NumericOptions,
) -> Option<TracePoint> {
    let (mut u, mut v) = start;
    for _ in 0..40 {
        let (g, du, dv) = defining(spec, kind, slice, u, v, opts).ok()?;
        // real 2×2 system (Re g, Im g) in (u, v)
        let j = [[du.re, dv.re], [du.im, dv.im]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-300 {
            return None;
        }
        let su = (g.re * j[1][1] - j[0][1] * g.im) / det;
        let sv = (j[0][0] * g.im - g.re * j[1][0]) / det;
        u -= su;
        v -= sv;
        if su.hypot(sv) < 1e-13 * (1.0 + u.abs() + v.abs()) {
            let (g, _, _) = defining(spec, kind, slice, u, v, opts).ok()?;
            let q = slice.at(u, v);
            return Some(TracePoint {
                u,
                v,
                z1: q.0,
                z2: q.1,
                residual: g.norm(),
            });
        }
    }
    None
}

/// Greedy chaining of cell-level segments into polylines.
fn chain_segments(raw: Vec<(TracePoint, TracePoint)>) -> Vec<Vec<TracePoint>> {
    let close = |a: &TracePoint, b: &TracePoint| (a.u - b.u).hypot(a.v - b.v) < 1e-7;
    let mut unused: Vec<(TracePoint, TracePoint)> = raw;
    let mut chains = Vec::new();
    while let Some((a, b)) = unused.pop() {
        let mut chain = vec![a, b];
        loop {
            let mut extended = false;
            let tail = *chain.last().unwrap();
            let head = chain[0];
            if let Some(idx) = unused
                .iter()
                .position(|(p, q)| close(p, &tail) || close(q, &tail))
            {
                let (p, q) = unused.swap_remove(idx);
                chain.push(if close(&p, &tail) { q } else { p });
                extended = true;
            } else if let Some(idx) = unused
                .iter()
                .position(|(p, q)| close(p, &head) || close(q, &head))
            {
                let (p, q) = unused.swap_remove(idx);
                chain.insert(0, if close(&p, &head) { q } else { p });
                extended = true;
            }
            if !extended {
                break;
            }
        }
        chains.push(chain);
    }
    chains
}
