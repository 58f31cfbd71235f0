//! Polyhedral cones given by an apex and a finite generator list.
//!
//! A [`PolyhedralCone`] always denotes the nonnegative span of its
//! generators, i.e. it is convex. Non-convex perspective cones are carried
//! as lists of such piece-cones, one per piece of the underlying set, and
//! [`union_convexity`] decides whether their union is a convex cone.

use std::f64::consts::PI;

use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{translate, Piece, SetExpr, Tolerance, Vector};
use crate::lp::{self, Bound, LinearConstraint, LpProblem};
use crate::oracle::{self, AngularInterval, ArcShape};

/// Number of random pair combinations drawn by the sampled convexity check.
pub const CONVEXITY_SAMPLES: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct PolyhedralCone {
    dim: usize,
    apex: Vector,
    generators: Vec<Vector>,
    trivial: bool,
}

impl PolyhedralCone {
    /// The whole space.
    pub fn trivial(apex: Vector) -> Self {
        PolyhedralCone {
            dim: apex.dim(),
            apex,
            generators: Vec::new(),
            trivial: true,
        }
    }

    /// Unit-normalizes and angularly deduplicates `directions`. A zero
    /// direction makes the cone trivial.
    pub fn from_directions(apex: Vector, directions: &[Vector], tol: &Tolerance) -> Result<Self> {
        let dim = apex.dim();
        let mut generators: Vec<Vector> = Vec::with_capacity(directions.len());
        for d in directions {
            d.check_dim(dim)?;
            let Some(unit) = d.normalized(tol) else {
                return Ok(Self::trivial(apex));
            };
            if !generators
                .iter()
                .any(|g| g.angle_to(&unit) <= tol.eps_angle)
            {
                generators.push(unit);
            }
        }
        Ok(PolyhedralCone {
            dim,
            apex,
            generators,
            trivial: false,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apex(&self) -> &Vector {
        &self.apex
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    pub fn is_trivial(&self) -> bool {
        self.trivial
    }

    /// Same directions, apex moved.
    pub fn with_apex(&self, apex: Vector) -> Result<Self> {
        apex.check_dim(self.dim)?;
        Ok(PolyhedralCone {
            apex,
            ..self.clone()
        })
    }

    pub fn contains(&self, v: &Vector, tol: &Tolerance) -> Result<bool> {
        cone_contains(self, v, tol)
    }
}

/// The perspective cone of `s` seen from `p`, one piece-cone per piece.
///
/// When `p` belongs to `s` the result is a single trivial cone.
pub fn perspective_cone(s: &SetExpr, p: &Vector, tol: &Tolerance) -> Result<Vec<PolyhedralCone>> {
    let shifted = translate(s, p)?;
    let sees_itself = shifted.all_points().any(|v| v.norm() <= tol.eps_zero);
    if sees_itself || point_in_some_polytope(s, p, tol)? {
        return Ok(vec![PolyhedralCone::trivial(p.clone())]);
    }
    shifted
        .pieces()
        .iter()
        .map(|piece| PolyhedralCone::from_directions(p.clone(), piece.points(), tol))
        .collect()
}

fn point_in_some_polytope(s: &SetExpr, p: &Vector, tol: &Tolerance) -> Result<bool> {
    for piece in s.pieces() {
        if let Piece::Polytope(c) = piece {
            if c.contains(p, tol)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

fn check_shared(cones: &[PolyhedralCone], tol: &Tolerance) -> Result<()> {
    let first = cones.first().ok_or(Error::NoCones)?;
    for k in cones {
        if k.dim != first.dim {
            return Err(Error::DimensionMismatch {
                expected: first.dim,
                found: k.dim,
            });
        }
        if k.apex.distance(&first.apex) > tol.eps_zero {
            return Err(Error::ApexMismatch);
        }
    }
    Ok(())
}

/// The smallest convex cone containing all inputs: concatenated generators,
/// deduplicated by direction.
pub fn conic_hull(cones: &[PolyhedralCone], tol: &Tolerance) -> Result<PolyhedralCone> {
    check_shared(cones, tol)?;
    if cones.iter().any(|k| k.trivial) {
        return Err(Error::TrivialCone);
    }
    let directions: Vec<Vector> = cones
        .iter()
        .flat_map(|k| k.generators.iter().cloned())
        .collect();
    PolyhedralCone::from_directions(cones[0].apex.clone(), &directions, tol)
}

/// Whether `v` (a direction relative to the apex) lies in the cone.
pub fn cone_contains(k: &PolyhedralCone, v: &Vector, tol: &Tolerance) -> Result<bool> {
    v.check_dim(k.dim)?;
    if k.trivial {
        return Ok(true);
    }
    nonnegative_span_contains(&k.generators, v, tol)
}

/// Membership of `v` in the nonnegative span of `generators`.
///
/// Solved in its dual form: maximize `<N, v>` over `<N, g> <= 0`,
/// `||N||_inf <= 1`. The optimum equals the smallest L1 residual
/// `min_{lambda >= 0} ||v - sum lambda_i g_i||_1`, so `v` is accepted when
/// that residual is within `eps_feas`. The dual keeps the LP in the ambient
/// dimension no matter how many generators there are.
pub(crate) fn nonnegative_span_contains(
    generators: &[Vector],
    v: &Vector,
    tol: &Tolerance,
) -> Result<bool> {
    let dim = v.dim();
    if v.norm() <= tol.eps_zero {
        return Ok(true);
    }
    let rows = generators
        .iter()
        .map(|g| {
            g.check_dim(dim)?;
            Ok(LinearConstraint::le(g.clone(), 0.0))
        })
        .collect::<Result<Vec<_>>>()?;
    let problem = LpProblem::feasibility(dim, rows)
        .maximize(v.clone())
        .with_bounds(vec![Bound::symmetric(1.0); dim]);
    let outcome = lp::solve(&problem, tol)?;
    match outcome.objective_value {
        Some(residual) => Ok(residual <= tol.eps_feas),
        None => Err(Error::Inconsistent(
            "bounded membership dual did not report an optimum".to_string(),
        )),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Convex,
    NotConvex,
    Unknown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityReport {
    pub verdict: Verdict,
    /// Two directions, each in some piece-cone, whose midpoint lies in none.
    pub witness: Option<(Vector, Vector)>,
}

impl ConvexityReport {
    fn convex() -> Self {
        ConvexityReport {
            verdict: Verdict::Convex,
            witness: None,
        }
    }

    fn unknown() -> Self {
        ConvexityReport {
            verdict: Verdict::Unknown,
            witness: None,
        }
    }

    fn not_convex(u: Vector, w: Vector) -> Self {
        ConvexityReport {
            verdict: Verdict::NotConvex,
            witness: Some((u, w)),
        }
    }
}

/// Whether the union of the piece-cones is a convex cone.
///
/// Exact in the plane. In higher dimensions the answer is `Convex` only when
/// one piece-cone already contains every generator, `NotConvex` when a pair
/// midpoint or a sampled pair combination escapes the union, and `Unknown`
/// otherwise. `rng` drives the sampling and is unused in the plane.
pub fn union_convexity<R: Rng + ?Sized>(
    cones: &[PolyhedralCone],
    tol: &Tolerance,
    rng: &mut R,
) -> Result<ConvexityReport> {
    check_shared(cones, tol)?;
    if cones.iter().any(|k| k.trivial) {
        return Ok(ConvexityReport::convex());
    }
    if cones[0].dim == 2 {
        planar_union_convexity(cones, tol)
    } else {
        sampled_union_convexity(cones, tol, rng)
    }
}

fn in_union(cones: &[PolyhedralCone], v: &Vector, tol: &Tolerance) -> Result<bool> {
    for k in cones {
        if cone_contains(k, v, tol)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn planar_union_convexity(cones: &[PolyhedralCone], tol: &Tolerance) -> Result<ConvexityReport> {
    let mut arcs: Vec<AngularInterval> = Vec::new();
    for k in cones {
        match oracle::arc_shape(k, tol)? {
            ArcShape::Origin => {}
            ArcShape::Full => return Ok(ConvexityReport::convex()),
            ArcShape::Arc(a) => arcs.push(a),
            ArcShape::Line(a, b) => {
                arcs.push(a);
                arcs.push(b);
            }
        }
    }
    if arcs.is_empty() {
        return Ok(ConvexityReport::convex());
    }
    let components = oracle::merge_arcs(&arcs, tol.eps_angle);
    let eps = tol.eps_angle;
    if components.len() == 1 {
        let c = components[0];
        if c.is_full(eps) || c.width <= PI + eps {
            return Ok(ConvexityReport::convex());
        }
    }
    if components.len() == 2 {
        let (a, b) = (components[0], components[1]);
        let antipodal = (oracle::angle_gap(a.start, b.start) - PI).abs() <= eps;
        if a.width <= eps && b.width <= eps && antipodal {
            // Two opposite rays: a line.
            return Ok(ConvexityReport::convex());
        }
    }
    // Some gap between consecutive components is narrower than a half-turn;
    // the bisector of that gap is the escaping midpoint.
    let n = components.len();
    let (i, _) = (0..n)
        .map(|i| {
            let cur = components[i];
            let next = components[(i + 1) % n];
            (i, oracle::angle_gap(cur.end(), next.start))
        })
        .fold((0, f64::INFINITY), |best, cand| {
            if cand.1 < best.1 {
                cand
            } else {
                best
            }
        });
    let u = oracle::direction(components[i].end());
    let w = oracle::direction(components[(i + 1) % n].start);
    Ok(ConvexityReport::not_convex(u, w))
}

fn sampled_union_convexity<R: Rng + ?Sized>(
    cones: &[PolyhedralCone],
    tol: &Tolerance,
    rng: &mut R,
) -> Result<ConvexityReport> {
    let nonempty: Vec<&PolyhedralCone> =
        cones.iter().filter(|k| !k.generators.is_empty()).collect();
    if nonempty.len() <= 1 {
        return Ok(ConvexityReport::convex());
    }
    let pooled: Vec<(usize, &Vector)> = nonempty
        .iter()
        .enumerate()
        .flat_map(|(i, k)| k.generators.iter().map(move |g| (i, g)))
        .collect();

    for k in &nonempty {
        let mut covers = true;
        for (_, g) in &pooled {
            if !cone_contains(k, g, tol)? {
                covers = false;
                break;
            }
        }
        if covers {
            return Ok(ConvexityReport::convex());
        }
    }

    let cross_pairs: Vec<(&Vector, &Vector)> = pooled
        .iter()
        .enumerate()
        .flat_map(|(a, (ia, ga))| {
            pooled[a + 1..]
                .iter()
                .filter(move |(ib, _)| ib != ia)
                .map(move |(_, gb)| (*ga, *gb))
        })
        .collect();
    for &(u, w) in &cross_pairs {
        let mid = (u + w).scale(0.5);
        if !in_union(cones, &mid, tol)? {
            return Ok(ConvexityReport::not_convex(u.clone(), w.clone()));
        }
    }
    for _ in 0..CONVEXITY_SAMPLES {
        let (u, w) = cross_pairs[rng.gen_range(0..cross_pairs.len())];
        let theta: f64 = rng.gen_range(0.0..1.0);
        let su = u.scale(2.0 * theta);
        let sw = w.scale(2.0 * (1.0 - theta));
        let mid = (&su + &sw).scale(0.5);
        if !in_union(cones, &mid, tol)? {
            return Ok(ConvexityReport::not_convex(su, sw));
        }
    }
    Ok(ConvexityReport::unknown())
}

/// `ka - kb` for two convex cones apexed at the origin.
pub fn minkowski_difference(
    ka: &PolyhedralCone,
    kb: &PolyhedralCone,
    tol: &Tolerance,
) -> Result<PolyhedralCone> {
    if ka.trivial || kb.trivial {
        return Err(Error::TrivialCone);
    }
    if kb.dim != ka.dim {
        return Err(Error::DimensionMismatch {
            expected: ka.dim,
            found: kb.dim,
        });
    }
    if ka.apex.norm() > tol.eps_zero || kb.apex.norm() > tol.eps_zero {
        return Err(Error::ApexMismatch);
    }
    let directions: Vec<Vector> = ka
        .generators
        .iter()
        .cloned()
        .chain(kb.generators.iter().map(|g| -g))
        .collect();
    PolyhedralCone::from_directions(Vector::zeros(ka.dim), &directions, tol)
}
