use std::ops::ControlFlow;

use super::quadtree::{is_leaf, leaf_pos};
use super::ztree::ZTree;
use crate::error::{Error, Result};
use crate::event::Window;
use crate::morton::{cell_last, cell_prefix, SHIFTS};
use crate::predicates::{dist, dist2, Point2};

/// Stage-one approximation factor of the shifted Z-order candidates in the
/// plane: `sqrt(2) * 12 + 1`.
pub const STAGE_ONE_FACTOR: f64 = std::f64::consts::SQRT_2 * 12.0 + 1.0;

/// Relative slack for floating-point cell tests.
const SLACK: f64 = 1e-9;

pub(crate) fn box_min_dist(q: Point2, lo: Point2, hi: Point2) -> f64 {
    let dx = (lo[0] - q[0]).max(q[0] - hi[0]).max(0.0);
    let dy = (lo[1] - q[1]).max(q[1] - hi[1]).max(0.0);
    dx.hypot(dy)
}

pub(crate) fn box_max_dist(q: Point2, lo: Point2, hi: Point2) -> f64 {
    let dx = (q[0] - lo[0]).abs().max((hi[0] - q[0]).abs());
    let dy = (q[1] - lo[1]).abs().max((hi[1] - q[1]).abs());
    dx.hypot(dy)
}

fn check_params(q: Point2, r: f64, eps: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {r}")));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    if !q.iter().all(|c| c.is_finite()) {
        return Err(Error::InvalidParameter("query point must be finite".into()));
    }
    Ok(())
}

impl ZTree {
    /// Walks the quadtrees of the two covering nodes. Cells within
    /// `(1 + eps) r` of `q` go to `cell` as unshifted code ranges, window
    /// points reached individually within `(1 + eps / 2) r` go to `point`.
    fn shell_walk<B>(
        &self,
        w: Window,
        q: Point2,
        r: f64,
        eps: f64,
        mut cell: impl FnMut(u64, u64) -> ControlFlow<B>,
        mut point: impl FnMut(usize) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        let inner = (1.0 + eps) * r * (1.0 - SLACK);
        let outer = r * (1.0 + SLACK);
        let near = (r * (1.0 + eps / 2.0)).powi(2);
        let (a, b) = self.cover_two(w);
        for v in [Some(a), b].into_iter().flatten() {
            let Some(qt) = self.node_quadtree(v) else {
                continue;
            };
            let list = self.node_list(v, 0);
            let mut stack = vec![qt.root];
            while let Some(x) = stack.pop() {
                if is_leaf(x) {
                    let k = list[leaf_pos(x)] as usize;
                    if w.contains(k) && dist2(q, self.pts[k]) <= near {
                        point(k)?;
                    }
                    continue;
                }
                let node = qt.node(x);
                let level = node.level as u32;
                let code = self.codes[0][list[node.start as usize] as usize];
                let (lo, hi) = self.quant.cell_box(code, level);
                if box_min_dist(q, lo, hi) > outer {
                    continue;
                }
                if box_max_dist(q, lo, hi) <= inner {
                    cell(cell_prefix(code, level), cell_last(code, level))?;
                    continue;
                }
                stack.extend_from_slice(qt.kids(x));
            }
        }
        ControlFlow::Continue(())
    }

    /// Window points within `r` of `q`, plus possibly some within
    /// `(1 + eps) r`, sorted by index.
    pub fn approx_range_report(&self, w: Window, q: Point2, r: f64, eps: f64) -> Result<Vec<usize>> {
        self.check_window(w)?;
        check_params(q, r, eps)?;
        let cover = self.layout.canonical_cover(w);
        let mut out = Vec::new();
        let mut found = Vec::new();
        let _ = self.shell_walk::<()>(
            w,
            q,
            r,
            eps,
            |z0, z1| {
                self.report_z_range(&cover, z0, z1, &mut out);
                ControlFlow::Continue(())
            },
            |k| {
                found.push(k);
                ControlFlow::Continue(())
            },
        );
        out.extend(found);
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Some window point within `(1 + eps) r` of `q`, or `None`, in which case
    /// no window point is within `r`.
    pub fn approx_emptiness(&self, w: Window, q: Point2, r: f64, eps: f64) -> Result<Option<usize>> {
        self.check_window(w)?;
        check_params(q, r, eps)?;
        let cover = self.layout.canonical_cover(w);
        let flow = self.shell_walk(
            w,
            q,
            r,
            eps,
            |z0, z1| match self.any_in_z_range(&cover, z0, z1) {
                Some(k) => ControlFlow::Break(k),
                None => ControlFlow::Continue(()),
            },
            ControlFlow::Break,
        );
        Ok(match flow {
            ControlFlow::Break(k) => Some(k),
            ControlFlow::Continue(()) => None,
        })
    }

    /// Closest of the Z-order neighbors of `q` under every shift: a constant
    /// factor approximation of the nearest window point.
    pub fn ann_stage_one(&self, w: Window, q: Point2) -> Result<(usize, f64)> {
        self.check_window(w)?;
        if !q.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidParameter("query point must be finite".into()));
        }
        let mut best: Option<(f64, usize)> = None;
        for s in 0..SHIFTS {
            let key = self.quant.encode_clamped(q, s)?;
            let cands = [self.successor(w, key)?, self.predecessor(w, key)?];
            for k in cands.into_iter().flatten() {
                let d = dist(q, self.pts[k]);
                if best.is_none_or(|b| (d, k) < b) {
                    best = Some((d, k));
                }
            }
        }
        let (d, k) = best.ok_or(Error::EmptyWindow)?;
        Ok((k, d))
    }

    /// A window point whose distance to `q` is at most `1 + eps` times the
    /// nearest distance.
    pub fn approx_nn(&self, w: Window, q: Point2, eps: f64) -> Result<(usize, f64)> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
        }
        let (mut best, mut hi) = self.ann_stage_one(w, q)?;
        if hi == 0.0 {
            return Ok((best, hi));
        }
        // Invariant: no window point is within `lo`, and `best` is at `hi`.
        let mut lo = hi / STAGE_ONE_FACTOR;
        let delta = (1.0 + eps).powf(0.25) - 1.0;
        for _ in 0..128 {
            if hi <= (1.0 + eps) * lo {
                break;
            }
            let r = (lo * hi).sqrt();
            match self.approx_emptiness(w, q, r, delta)? {
                Some(k) => {
                    let d = dist(q, self.pts[k]);
                    if (d, k) < (hi, best) {
                        hi = d;
                        best = k;
                    }
                }
                None => lo = r,
            }
        }
        Ok((best, dist(q, self.pts[best])))
    }
}
