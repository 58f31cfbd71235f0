//! Supporting and separating hyperplanes.
//!
//! Sign convention: the supported set, and the set `A` of a separation,
//! occupy the side `<N, x - p> <= 0`; the set `B` occupies `>= 0`.

use crate::cones::{conic_hull, minkowski_difference, perspective_cone, PolyhedralCone};
use crate::error::{Error, Result};
use crate::geometry::{Polytope, SetExpr, Tolerance, Vector};
use crate::lp::{self, Bound, LinearConstraint, LpProblem, LpStatus};

/// `{x : <normal, x - anchor> = 0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    normal: Vector,
    anchor: Vector,
}

impl Hyperplane {
    pub fn new(normal: Vector, anchor: Vector, tol: &Tolerance) -> Result<Self> {
        anchor.check_dim(normal.dim())?;
        if normal.norm() <= tol.eps_zero {
            return Err(Error::Inconsistent("hyperplane normal is zero".to_string()));
        }
        Ok(Hyperplane { normal, anchor })
    }

    pub fn normal(&self) -> &Vector {
        &self.normal
    }

    pub fn anchor(&self) -> &Vector {
        &self.anchor
    }

    /// `<normal, x - anchor>`
    pub fn offset(&self, x: &Vector) -> f64 {
        self.normal.dot(&(x - &self.anchor))
    }

    /// Largest offset over a point list.
    pub fn max_offset<'a>(&self, points: impl IntoIterator<Item = &'a Vector>) -> f64 {
        points
            .into_iter()
            .map(|x| self.offset(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_offset<'a>(&self, points: impl IntoIterator<Item = &'a Vector>) -> f64 {
        points
            .into_iter()
            .map(|x| self.offset(x))
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparationCertificate {
    pub hyperplane: Hyperplane,
    /// `max <N, a - p>` over every represented point of `A`.
    pub side_a_max: f64,
    /// `min <N, b - p>` over every represented point of `B`.
    pub side_b_min: f64,
    /// `side_b_min - side_a_max`
    pub margin: f64,
}

impl SeparationCertificate {
    /// Evaluate a hyperplane against the raw sets.
    pub fn evaluate(hyperplane: Hyperplane, a: &SetExpr, b: &SetExpr) -> Self {
        let side_a_max = hyperplane.max_offset(a.all_points());
        let side_b_min = hyperplane.min_offset(b.all_points());
        SeparationCertificate {
            hyperplane,
            side_a_max,
            side_b_min,
            margin: side_b_min - side_a_max,
        }
    }

    /// Re-derive the extrema from the raw sets and check both sides.
    pub fn verify(&self, a: &SetExpr, b: &SetExpr, tol: &Tolerance) -> bool {
        let fresh = Self::evaluate(self.hyperplane.clone(), a, b);
        (fresh.side_a_max - self.side_a_max).abs() <= tol.eps_feas
            && (fresh.side_b_min - self.side_b_min).abs() <= tol.eps_feas
            && fresh.side_a_max <= tol.eps_feas
            && fresh.side_b_min >= -tol.eps_feas
    }

    /// True when some represented point lies off the hyperplane, i.e. the
    /// sets are not both contained in it.
    pub fn is_proper(&self, a: &SetExpr, b: &SetExpr, tol: &Tolerance) -> bool {
        a.all_points()
            .chain(b.all_points())
            .any(|x| self.hyperplane.offset(x).abs() > tol.eps_feas)
    }
}

fn normal_from(outcome: lp::LpOutcome) -> Option<Vector> {
    match outcome.status {
        LpStatus::Feasible => outcome.witness,
        _ => None,
    }
}

/// A hyperplane through `p` with the whole polytope on its `<= 0` side.
///
/// Fails with [`Error::PInInterior`] when `p` is an interior point, which is
/// exactly when the homogeneous system over the rows `v - p` admits only
/// `N = 0`.
pub fn supporting_hyperplane(c: &Polytope, p: &Vector, tol: &Tolerance) -> Result<Hyperplane> {
    p.check_dim(c.dim())?;
    let rows: Vec<LinearConstraint> = c
        .vertices()
        .iter()
        .map(|v| LinearConstraint::le(v - p, 0.0))
        .collect();
    let normal = normal_from(lp::homogeneous_nonzero_solve_in(c.dim(), &rows, tol)?)
        .ok_or(Error::PInInterior)?;
    let plane = Hyperplane::new(normal, p.clone(), tol)?;
    let worst = plane.max_offset(c.vertices());
    if worst > tol.eps_feas {
        return Err(Error::Inconsistent(format!(
            "supporting hyperplane leaves a vertex at offset {worst:e}"
        )));
    }
    Ok(plane)
}

/// A hyperplane through the apex with every generator on its `<= 0` side.
pub fn halfspace_containing_cone(k: &PolyhedralCone, tol: &Tolerance) -> Result<Hyperplane> {
    if k.is_trivial() {
        return Err(Error::ConeNotProper);
    }
    let rows: Vec<LinearConstraint> = k
        .generators()
        .iter()
        .map(|g| LinearConstraint::le(g.clone(), 0.0))
        .collect();
    let normal = normal_from(lp::homogeneous_nonzero_solve_in(k.dim(), &rows, tol)?)
        .ok_or(Error::ConeNotProper)?;
    Hyperplane::new(normal, k.apex().clone(), tol)
}

fn hulled_perspective_cone(s: &SetExpr, p: &Vector, tol: &Tolerance) -> Result<PolyhedralCone> {
    let pieces = perspective_cone(s, p, tol)?;
    if pieces.iter().any(PolyhedralCone::is_trivial) {
        return Err(Error::DegeneratePoint);
    }
    conic_hull(&pieces, tol)?.with_apex(Vector::zeros(p.dim()))
}

/// A hyperplane through `p` with `A` on the `<= 0` side and `B` on the
/// `>= 0` side.
///
/// Built from the perspective cones: hull the piece-cones of each set at
/// `p`, form `cone(A) - cone(B)`, and take a half-space containing that
/// difference cone at the origin. The certificate is evaluated and checked
/// on the raw points before it is returned. Touching configurations (for
/// instance two identical rays) yield a zero-margin certificate.
pub fn separate_through_point(
    a: &SetExpr,
    b: &SetExpr,
    p: &Vector,
    tol: &Tolerance,
) -> Result<SeparationCertificate> {
    if b.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    p.check_dim(a.dim())?;
    let ka = hulled_perspective_cone(a, p, tol)?;
    let kb = hulled_perspective_cone(b, p, tol)?;
    let difference = minkowski_difference(&ka, &kb, tol)?;
    let normal = match halfspace_containing_cone(&difference, tol) {
        Ok(h) => h.normal().clone(),
        Err(Error::ConeNotProper) => return Err(Error::NotSeparableThroughP),
        Err(e) => return Err(e),
    };
    let cert = SeparationCertificate::evaluate(Hyperplane::new(normal, p.clone(), tol)?, a, b);
    if cert.side_a_max > tol.eps_feas || cert.side_b_min < -tol.eps_feas {
        // Within tolerance on unit directions but not on the raw points.
        return Err(Error::NotSeparableThroughP);
    }
    Ok(cert)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    /// Candidate points per axis in the fallback grid.
    pub grid_resolution: usize,
    /// Scale factor applied to the bounding box before gridding.
    pub inflation: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            grid_resolution: 21,
            inflation: 2.0,
        }
    }
}

impl SearchConfig {
    pub fn new(grid_resolution: usize, inflation: f64) -> Result<Self> {
        if grid_resolution < 2 {
            return Err(Error::Scene(format!(
                "grid resolution must be at least 2, got {grid_resolution}"
            )));
        }
        if !(inflation.is_finite() && inflation > 1.0) {
            return Err(Error::Scene(format!(
                "inflation must be a finite number above 1, got {inflation}"
            )));
        }
        Ok(SearchConfig {
            grid_resolution,
            inflation,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PerspectiveSearch {
    Found {
        point: Vector,
        certificate: SeparationCertificate,
    },
    NotFound,
}

/// An affine separator `<N, x> = c` with the largest margin, over every
/// coordinate pin of `N`. Variables: the free coordinates of `N`, then `c`,
/// then the margin.
fn affine_separator(a: &SetExpr, b: &SetExpr, tol: &Tolerance) -> Result<Option<(Vector, f64)>> {
    let dim = a.dim();
    let nvars = dim + 1;
    let c_idx = dim - 1;
    let s_idx = dim;
    let mut best: Option<(f64, Vector, f64)> = None;
    for axis in 0..dim {
        for sign in [1.0, -1.0] {
            let row = |x: &Vector, side: f64| -> Result<LinearConstraint> {
                // side = +1 for A: <N,x> - c + s <= 0 ; side = -1 for B: <N,x> - c - s >= 0
                let mut coeffs = Vec::with_capacity(nvars);
                for j in (0..dim).filter(|&j| j != axis) {
                    coeffs.push(x[j]);
                }
                coeffs.push(-1.0);
                coeffs.push(side);
                let rhs = -sign * x[axis];
                let coeffs = Vector::new(coeffs)?;
                Ok(if side > 0.0 {
                    LinearConstraint::le(coeffs, rhs)
                } else {
                    LinearConstraint::ge(coeffs, rhs)
                })
            };
            let mut rows = Vec::new();
            for x in a.all_points() {
                rows.push(row(x, 1.0)?);
            }
            for x in b.all_points() {
                rows.push(row(x, -1.0)?);
            }
            let mut bounds = vec![Bound::symmetric(1.0); nvars];
            bounds[c_idx] = Bound::free();
            bounds[s_idx] = Bound::new(0.0, f64::INFINITY);
            let problem = LpProblem::feasibility(nvars, rows)
                .maximize(Vector::unit(nvars, s_idx))
                .with_bounds(bounds);
            let outcome = lp::solve(&problem, tol)?;
            let Some(w) = outcome.witness else { continue };
            let margin = w[s_idx];
            let mut free = w.coords()[..dim - 1].iter();
            let normal: Vec<f64> = (0..dim)
                .map(|j| {
                    if j == axis {
                        sign
                    } else {
                        *free.next().expect("free coordinate")
                    }
                })
                .collect();
            let candidate = (margin, Vector::new(normal)?, w[c_idx]);
            if best
                .as_ref()
                .is_none_or(|(m, _, _)| margin > m + tol.eps_feas)
            {
                best = Some(candidate);
            }
        }
    }
    Ok(best.map(|(_, n, c)| (n, c)))
}

fn try_point(
    a: &SetExpr,
    b: &SetExpr,
    p: &Vector,
    tol: &Tolerance,
) -> Result<Option<SeparationCertificate>> {
    match separate_through_point(a, b, p, tol) {
        Ok(cert) if cert.is_proper(a, b, tol) => Ok(Some(cert)),
        Ok(_) | Err(Error::DegeneratePoint) | Err(Error::NotSeparableThroughP) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Search for a point from which `A` and `B` are separated by a hyperplane
/// through it.
///
/// First solves for a maximum-margin affine separator of the represented
/// points and projects the midpoint of the two centroids onto it. If that
/// point fails (it landed in one of the sets, or the separation there is
/// improper), a lexicographically ordered grid over the inflated bounding box
/// is scanned. Returns `NotFound` when no affine separator exists at all or
/// no candidate works. Certificates where both sets lie inside the
/// hyperplane are not accepted.
pub fn find_perspective_point(
    a: &SetExpr,
    b: &SetExpr,
    search: &SearchConfig,
    tol: &Tolerance,
) -> Result<PerspectiveSearch> {
    if b.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let Some((normal, offset)) = affine_separator(a, b, tol)? else {
        return Ok(PerspectiveSearch::NotFound);
    };
    let mid = (&a.centroid() + &b.centroid()).scale(0.5);
    let shift = (normal.dot(&mid) - offset) / normal.dot(&normal);
    let projected = &mid - &normal.scale(shift);
    if let Some(certificate) = try_point(a, b, &projected, tol)? {
        return Ok(PerspectiveSearch::Found {
            point: projected,
            certificate,
        });
    }

    let dim = a.dim();
    let (mut lo, mut hi) = (vec![f64::INFINITY; dim], vec![f64::NEG_INFINITY; dim]);
    for x in a.all_points().chain(b.all_points()) {
        for j in 0..dim {
            lo[j] = lo[j].min(x[j]);
            hi[j] = hi[j].max(x[j]);
        }
    }
    let axes: Vec<Vec<f64>> = (0..dim)
        .map(|j| {
            let center = 0.5 * (lo[j] + hi[j]);
            // Flat axes still get a nonzero extent.
            let half = (0.5 * (hi[j] - lo[j])).max(0.5) * search.inflation;
            let n = search.grid_resolution;
            (0..n)
                .map(|k| center - half + 2.0 * half * k as f64 / (n - 1) as f64)
                .collect()
        })
        .collect();
    let mut index = vec![0usize; dim];
    loop {
        let p = Vector::new(index.iter().zip(&axes).map(|(&k, ax)| ax[k]).collect())?;
        if let Some(certificate) = try_point(a, b, &p, tol)? {
            return Ok(PerspectiveSearch::Found {
                point: p,
                certificate,
            });
        }
        // Odometer, last axis fastest.
        let mut j = dim;
        loop {
            if j == 0 {
                return Ok(PerspectiveSearch::NotFound);
            }
            j -= 1;
            index[j] += 1;
            if index[j] < search.grid_resolution {
                break;
            }
            index[j] = 0;
        }
    }
}
