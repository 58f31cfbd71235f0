//! Slow, independent verifiers.
//!
//! Nothing in here goes through the simplex path for its core decision:
//! Fourier-Motzkin works on exact rationals, and the planar separability
//! sweep only looks at angles. They exist to cross-check the main
//! operations in tests and behind the CLI's `--verify` flag.

use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::cones::PolyhedralCone;
use crate::error::{Error, Result};
use crate::geometry::{Polytope, SetExpr, Tolerance, Vector};
use crate::lp::{LinearConstraint, Relation};

/// Largest system [`fm_feasible`] accepts.
pub const FM_MAX_DIM: usize = 4;
pub const FM_MAX_CONSTRAINTS: usize = 12;

// ---------------------------------------------------------------------------
// Fourier-Motzkin elimination
// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq)]
struct RationalRow {
    /// `coeffs . x <= rhs`
    coeffs: Vec<BigRational>,
    rhs: BigRational,
    /// Original constraints this row was combined from.
    origin: u32,
}

impl RationalRow {
    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Scale so the first nonzero coefficient has magnitude one.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).map(|c| c.abs()) {
            for c in self.coeffs.iter_mut() {
                *c = &*c / &lead;
            }
            self.rhs = &self.rhs / &lead;
        }
        self
    }
}

fn to_rational(x: f64, row: usize) -> Result<BigRational> {
    BigRational::from_float(x).ok_or(Error::NonFiniteCoefficient { row })
}

/// Exact feasibility of a system of non-strict inequalities.
///
/// Eliminates one variable at a time, pairing every lower bound with every
/// upper bound, over exact rationals (every finite `f64` converts exactly).
/// Rows combined from more than `k + 1` original constraints after `k`
/// eliminations are dropped (Chernikov's rule); they are implied by the rest.
pub fn fm_feasible(constraints: &[LinearConstraint]) -> Result<bool> {
    if constraints.len() > FM_MAX_CONSTRAINTS {
        return Err(Error::EliminationEnvelope(format!(
            "{} constraints (at most {FM_MAX_CONSTRAINTS})",
            constraints.len()
        )));
    }
    let Some(first) = constraints.first() else {
        return Ok(true);
    };
    let dim = first.dim();
    if dim > FM_MAX_DIM {
        return Err(Error::EliminationEnvelope(format!(
            "dimension {dim} (at most {FM_MAX_DIM})"
        )));
    }

    let mut rows = Vec::with_capacity(constraints.len());
    for (i, c) in constraints.iter().enumerate() {
        c.coeffs.check_dim(dim)?;
        let sign = match c.rel {
            Relation::Le => 1.0,
            Relation::Ge => -1.0,
            Relation::Eq => {
                return Err(Error::EliminationEnvelope(format!(
                    "constraint {i} is an equality; split it into two inequalities"
                )))
            }
        };
        let coeffs = c
            .coeffs
            .coords()
            .iter()
            .map(|&a| to_rational(sign * a, i))
            .collect::<Result<Vec<_>>>()?;
        rows.push(RationalRow {
            coeffs,
            rhs: to_rational(sign * c.rhs, i)?,
            origin: 1 << i,
        });
    }

    for var in 0..dim {
        let mut next: Vec<RationalRow> = Vec::new();
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        for row in rows {
            let c = &row.coeffs[var];
            if c.is_positive() {
                upper.push(row);
            } else if c.is_negative() {
                lower.push(row);
            } else {
                next.push(row);
            }
        }
        for up in &upper {
            for lo in &lower {
                let a = up.coeffs[var].clone();
                let b = -lo.coeffs[var].clone();
                let coeffs = up
                    .coeffs
                    .iter()
                    .zip(&lo.coeffs)
                    .map(|(u, l)| u / &a + l / &b)
                    .collect();
                next.push(RationalRow {
                    coeffs,
                    rhs: &up.rhs / &a + &lo.rhs / &b,
                    origin: up.origin | lo.origin,
                });
            }
        }
        let limit = var as u32 + 2;
        rows = Vec::with_capacity(next.len());
        for row in next {
            if row.origin.count_ones() > limit {
                continue;
            }
            if row.is_constant() {
                if row.rhs.is_negative() {
                    return Ok(false);
                }
                continue;
            }
            let row = row.normalized();
            // Only exact duplicates are merged, keeping the shorter history.
            // Dropping a looser bound in favour of a tighter one with a longer
            // history would let the history limit discard the tighter row
            // later and lose information.
            match rows
                .iter_mut()
                .find(|r: &&mut RationalRow| r.coeffs == row.coeffs && r.rhs == row.rhs)
            {
                Some(existing) => {
                    if row.origin.count_ones() < existing.origin.count_ones() {
                        *existing = row;
                    }
                }
                None => rows.push(row),
            }
        }
    }
    // Every variable has been eliminated; constant rows were checked as they
    // appeared.
    Ok(rows.iter().all(|r| !r.rhs.is_negative()))
}

// ---------------------------------------------------------------------------
// Planar angles
// ---------------------------------------------------------------------------

/// An arc of directions `[start, start + width]`, counter-clockwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularInterval {
    /// In `[0, 2π)`.
    pub start: f64,
    /// In `[0, 2π]`; `2π` is the full circle.
    pub width: f64,
}

impl AngularInterval {
    pub fn new(start: f64, width: f64) -> Self {
        AngularInterval {
            start: wrap_angle(start),
            width: width.clamp(0.0, TAU),
        }
    }

    pub fn full() -> Self {
        AngularInterval {
            start: 0.0,
            width: TAU,
        }
    }

    /// May exceed `2π`.
    pub fn end(&self) -> f64 {
        self.start + self.width
    }

    pub fn is_full(&self, eps: f64) -> bool {
        self.width >= TAU - eps
    }

    pub fn contains_angle(&self, angle: f64, eps: f64) -> bool {
        if self.is_full(eps) {
            return true;
        }
        let offset = angle_gap(self.start, angle);
        offset <= self.width + eps || offset >= TAU - eps
    }
}

/// Angle in `[0, 2π)`.
pub fn wrap_angle(angle: f64) -> f64 {
    let a = angle.rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Counter-clockwise distance from `from` to `to`, in `[0, 2π)`.
pub fn angle_gap(from: f64, to: f64) -> f64 {
    wrap_angle(to - from)
}

pub fn angle_of(v: &Vector) -> f64 {
    wrap_angle(v[1].atan2(v[0]))
}

pub fn direction(angle: f64) -> Vector {
    Vector::new(vec![angle.cos(), angle.sin()]).expect("finite angle")
}

/// The set of directions covered by a planar cone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArcShape {
    /// No generators: the cone is the apex alone.
    Origin,
    /// A closed arc of width at most a half-turn.
    Arc(AngularInterval),
    /// Two opposite rays.
    Line(AngularInterval, AngularInterval),
    Full,
}

fn sorted_angles(cone: &PolyhedralCone) -> Vec<f64> {
    let mut angles: Vec<f64> = cone.generators().iter().map(angle_of).collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    angles
}

/// Smallest arc containing every generator angle: it starts right after the
/// widest gap between consecutive angles.
fn minimal_covering_arc(angles: &[f64]) -> AngularInterval {
    let n = angles.len();
    let mut widest = (0, f64::NEG_INFINITY);
    for i in 0..n {
        let gap = if n == 1 {
            TAU
        } else {
            angle_gap(angles[i], angles[(i + 1) % n])
        };
        if gap > widest.1 {
            widest = (i, gap);
        }
    }
    let start = angles[(widest.0 + 1) % n];
    AngularInterval::new(start, TAU - widest.1)
}

pub(crate) fn arc_shape(cone: &PolyhedralCone, tol: &Tolerance) -> Result<ArcShape> {
    if cone.dim() != 2 {
        return Err(Error::UnsupportedDimension {
            required: 2,
            found: cone.dim(),
        });
    }
    if cone.is_trivial() {
        return Ok(ArcShape::Full);
    }
    let angles = sorted_angles(cone);
    if angles.is_empty() {
        return Ok(ArcShape::Origin);
    }
    let eps = tol.eps_angle;
    let arc = minimal_covering_arc(&angles);
    if arc.width > PI + eps {
        return Ok(ArcShape::Full);
    }
    if arc.width < PI - eps {
        return Ok(ArcShape::Arc(arc));
    }
    // Half-turn: a closed half-plane when some generator sits strictly
    // inside the arc, otherwise just the two bounding rays.
    let interior = angles.iter().any(|&a| {
        let off = angle_gap(arc.start, a);
        off > eps && off < arc.width - eps
    });
    if interior {
        Ok(ArcShape::Arc(AngularInterval::new(arc.start, PI)))
    } else {
        Ok(ArcShape::Line(
            AngularInterval::new(arc.start, 0.0),
            AngularInterval::new(arc.end(), 0.0),
        ))
    }
}

/// One minimal covering arc per planar cone.
pub fn cones_to_intervals(
    cones: &[PolyhedralCone],
    tol: &Tolerance,
) -> Result<Vec<AngularInterval>> {
    cones
        .iter()
        .map(|k| {
            if k.dim() != 2 {
                return Err(Error::UnsupportedDimension {
                    required: 2,
                    found: k.dim(),
                });
            }
            if k.is_trivial() {
                return Err(Error::TrivialCone);
            }
            let angles = sorted_angles(k);
            if angles.is_empty() {
                return Err(Error::Inconsistent("cone has no generators".to_string()));
            }
            let arc = minimal_covering_arc(&angles);
            if arc.width > PI + tol.eps_angle {
                return Err(Error::Inconsistent(format!(
                    "piece-cone spans {:.6} rad, more than a half-turn",
                    arc.width
                )));
            }
            Ok(arc)
        })
        .collect()
}

/// Merge arcs that overlap or touch (within `eps`) into connected components,
/// sorted by start angle. A covered circle comes back as one full interval.
pub fn merge_arcs(arcs: &[AngularInterval], eps: f64) -> Vec<AngularInterval> {
    if arcs.iter().any(|a| a.is_full(eps)) {
        return vec![AngularInterval::full()];
    }
    let mut sorted = arcs.to_vec();
    sorted.sort_by(|a, b| a.start.partial_cmp(&b.start).unwrap_or(Ordering::Equal));
    // (start, end) with end possibly past 2π
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for a in sorted {
        match merged.last_mut() {
            Some(last) if a.start <= last.1 + eps => last.1 = last.1.max(a.end()),
            _ => merged.push((a.start, a.end())),
        }
    }
    // Components running past 2π may swallow components near 0.
    while merged.len() > 1 {
        let first = merged[0];
        let last = merged.len() - 1;
        if merged[last].1 + eps >= first.0 + TAU {
            merged[last].1 = merged[last].1.max(first.1 + TAU);
            merged.remove(0);
        } else {
            break;
        }
    }
    let mut out: Vec<AngularInterval> = merged
        .into_iter()
        .map(|(s, e)| {
            if e - s >= TAU - eps {
                AngularInterval::full()
            } else {
                AngularInterval::new(s, e - s)
            }
        })
        .collect();
    if out.iter().any(|a| a.is_full(eps)) {
        return vec![AngularInterval::full()];
    }
    out.sort_by(|a, b| a.start.partial_cmp(&b.start).unwrap_or(Ordering::Equal));
    out
}

/// A convex union of planar cones, by its directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlanarCone {
    /// The apex alone.
    Apex,
    Ray(f64),
    /// A closed arc of positive width at most a half-turn.
    Arc(AngularInterval),
    /// Two opposite rays, given by one of them.
    Line(f64),
    Full,
}

/// The shape of the union of planar cones, or `None` when the union is not
/// convex.
pub fn convex_union_shape(cones: &[PolyhedralCone], tol: &Tolerance) -> Result<Option<PlanarCone>> {
    let eps = tol.eps_angle;
    let mut arcs = Vec::new();
    for k in cones {
        match arc_shape(k, tol)? {
            ArcShape::Origin => {}
            ArcShape::Full => return Ok(Some(PlanarCone::Full)),
            ArcShape::Arc(a) => arcs.push(a),
            ArcShape::Line(a, b) => {
                arcs.push(a);
                arcs.push(b);
            }
        }
    }
    if arcs.is_empty() {
        return Ok(Some(PlanarCone::Apex));
    }
    let components = merge_arcs(&arcs, eps);
    Ok(match components.as_slice() {
        [c] if c.is_full(eps) => Some(PlanarCone::Full),
        [c] if c.width <= eps => Some(PlanarCone::Ray(c.start)),
        [c] if c.width <= PI + eps => Some(PlanarCone::Arc(*c)),
        [a, b]
            if a.width <= eps
                && b.width <= eps
                && (angle_gap(a.start, b.start) - PI).abs() <= eps =>
        {
            Some(PlanarCone::Line(a.start))
        }
        _ => None,
    })
}

fn same_angle(a: f64, b: f64, eps: f64) -> bool {
    let g = angle_gap(a, b);
    g <= eps || g >= TAU - eps
}

/// Whether the ray at `angle` meets the relative interior of `k` away from
/// the apex.
fn ray_meets_relint(angle: f64, k: &PlanarCone, eps: f64) -> bool {
    match *k {
        PlanarCone::Apex => false,
        PlanarCone::Ray(r) => same_angle(angle, r, eps),
        PlanarCone::Arc(a) => {
            let off = angle_gap(a.start, angle);
            off > eps && off < a.width - eps
        }
        PlanarCone::Line(r) => same_angle(angle, r, eps) || same_angle(angle, r + PI, eps),
        PlanarCone::Full => true,
    }
}

fn contains_apex_in_relint(k: &PlanarCone) -> bool {
    matches!(k, PlanarCone::Apex | PlanarCone::Line(_) | PlanarCone::Full)
}

/// Whether two convex planar cones have disjoint relative interiors.
pub fn relative_interiors_disjoint(a: &PlanarCone, b: &PlanarCone, eps: f64) -> bool {
    use PlanarCone::*;
    if contains_apex_in_relint(a) && contains_apex_in_relint(b) {
        return false;
    }
    match (*a, *b) {
        (Full, other) | (other, Full) => matches!(other, Apex),
        (Apex, _) | (_, Apex) => true,
        (Ray(r), other) | (other, Ray(r)) => !ray_meets_relint(r, &other, eps),
        (Line(r), other) | (other, Line(r)) => {
            !ray_meets_relint(r, &other, eps) && !ray_meets_relint(r + PI, &other, eps)
        }
        (Arc(x), Arc(y)) => {
            // Overlap length of two arcs on the circle.
            let overlap = |p: AngularInterval, q: AngularInterval| {
                let off = angle_gap(p.start, q.start);
                if off < p.width {
                    (p.width - off).min(q.width)
                } else {
                    0.0
                }
            };
            overlap(x, y).max(overlap(y, x)) <= eps
        }
    }
}

// ---------------------------------------------------------------------------
// Planar separability sweep
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOutcome {
    pub separable: bool,
    /// Angle in `[0, 2π)` of the best separating normal, when one exists.
    pub normal_angle: Option<f64>,
}

/// Whether some line through `p` puts `a` on the `<= 0` side and `b` on the
/// `>= 0` side of its normal.
///
/// The normals that work form a closed arc whose endpoints are perpendicular
/// to data directions, so testing every perpendicular (plus the midpoints
/// between consecutive candidates) is exhaustive. The reported normal is the
/// candidate with the largest angular margin.
pub fn oracle_separable_2d(
    a: &SetExpr,
    b: &SetExpr,
    p: &Vector,
    tol: &Tolerance,
) -> Result<SweepOutcome> {
    for dim in [a.dim(), b.dim(), p.dim()] {
        if dim != 2 {
            return Err(Error::UnsupportedDimension {
                required: 2,
                found: dim,
            });
        }
    }
    let unit_dirs = |s: &SetExpr| -> Result<Vec<Vector>> {
        s.all_points()
            .map(|x| (x - p).normalized(tol).ok_or(Error::DegeneratePoint))
            .collect()
    };
    let dirs_a = unit_dirs(a)?;
    let dirs_b = unit_dirs(b)?;

    let mut candidates: Vec<f64> = dirs_a
        .iter()
        .chain(&dirs_b)
        .flat_map(|d| {
            let phi = angle_of(d);
            [wrap_angle(phi + PI / 2.0), wrap_angle(phi - PI / 2.0)]
        })
        .collect();
    candidates.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    candidates.dedup_by(|x, y| (*x - *y).abs() <= tol.eps_angle);
    let n = candidates.len();
    let midpoints: Vec<f64> = (0..n)
        .map(|i| {
            let from = candidates[i];
            let gap = if n == 1 {
                TAU
            } else {
                angle_gap(from, candidates[(i + 1) % n])
            };
            wrap_angle(from + gap / 2.0)
        })
        .collect();
    candidates.extend(midpoints);
    candidates.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));

    let slack = tol.eps_angle.sin();
    let mut best: Option<(f64, f64)> = None;
    for &theta in &candidates {
        let normal = direction(theta);
        let worst_a = dirs_a
            .iter()
            .map(|d| normal.dot(d))
            .fold(f64::NEG_INFINITY, f64::max);
        let worst_b = dirs_b
            .iter()
            .map(|d| normal.dot(d))
            .fold(f64::INFINITY, f64::min);
        if worst_a <= slack && worst_b >= -slack {
            let margin = (-worst_a).min(worst_b);
            if best.is_none_or(|(_, m)| margin > m + 1e-15) {
                best = Some((theta, margin));
            }
        }
    }
    Ok(SweepOutcome {
        separable: best.is_some(),
        normal_angle: best.map(|(theta, _)| theta),
    })
}

// ---------------------------------------------------------------------------
// Complement-interior witness
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct ComplementBall {
    pub center: Vector,
    pub radius: f64,
}

/// A ball lying entirely outside the convex hull of `c`.
///
/// With `R` the distance from the centroid to the farthest vertex `v`, the
/// center is `centroid + 2 (v - centroid)`. Every vertex satisfies
/// `<u, x - centroid> <= R` for the unit direction `u` towards `v` while the
/// center sits at `2R`, so any radius below `R` is safe. The radius starts
/// just under `R` and is halved until the `2 dim` axis-extreme probe points
/// all test outside the hull.
pub fn complement_interior_witness(c: &Polytope, tol: &Tolerance) -> Result<ComplementBall> {
    let centroid = Vector::centroid(c.vertices()).ok_or(Error::EmptySet)?;
    let (far, reach) = c
        .vertices()
        .iter()
        .map(|v| (v, v.distance(&centroid)))
        .fold((None, f64::NEG_INFINITY), |best, (v, d)| {
            if d > best.1 {
                (Some(v), d)
            } else {
                best
            }
        });
    let dim = c.dim();
    if reach <= tol.eps_zero {
        // A single point: step off along the first axis.
        return Ok(ComplementBall {
            center: &centroid + &Vector::unit(dim, 0),
            radius: 0.5,
        });
    }
    let far = far.expect("nonempty vertex list");
    let center = &centroid + &(far - &centroid).scale(2.0);
    let mut radius = 0.99 * reach;
    for _ in 0..64 {
        if probes_outside(c, &center, radius, tol)? {
            return Ok(ComplementBall { center, radius });
        }
        radius *= 0.5;
    }
    Err(Error::Inconsistent(
        "no probe radius clears the hull".to_string(),
    ))
}

/// Whether the `2 dim` axis-extreme points of the ball avoid the hull.
pub fn probes_outside(c: &Polytope, center: &Vector, radius: f64, tol: &Tolerance) -> Result<bool> {
    for axis in 0..c.dim() {
        for sign in [1.0, -1.0] {
            let probe = center + &Vector::unit(c.dim(), axis).scale(sign * radius);
            if c.contains(&probe, tol)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
