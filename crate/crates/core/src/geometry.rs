//! Vectors, the tolerance policy, and the finite set representations
//! (point clouds, vertex-represented polytopes, and finite unions of both).

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use crate::error::{Error, Result};
use crate::lp::{self, LinearConstraint, LpStatus};

/// The single set of epsilons every approximate comparison goes through.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Slack allowed when checking `a <= b`.
    pub eps_feas: f64,
    /// Vectors with euclidean norm at or below this are zero.
    pub eps_zero: f64,
    /// Angular slack, in radians.
    pub eps_angle: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eps_feas: 1e-9,
            eps_zero: 1e-12,
            eps_angle: 1e-10,
        }
    }
}

impl Tolerance {
    pub fn new(eps_feas: f64, eps_zero: f64, eps_angle: f64) -> Result<Self> {
        let tol = Tolerance {
            eps_feas,
            eps_zero,
            eps_angle,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("eps_feas", self.eps_feas),
            ("eps_zero", self.eps_zero),
            ("eps_angle", self.eps_angle),
        ] {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidTolerance(format!(
                    "{name} must be a finite nonnegative number, got {value}"
                )));
            }
        }
        if self.eps_zero > self.eps_feas {
            return Err(Error::InvalidTolerance(format!(
                "eps_zero ({}) must not exceed eps_feas ({})",
                self.eps_zero, self.eps_feas
            )));
        }
        Ok(())
    }
}

/// `a <= b` up to `eps_feas`.
pub fn approx_leq(a: f64, b: f64, tol: &Tolerance) -> bool {
    a <= b + tol.eps_feas
}

/// A point or direction in R^n with finite coordinates.
#[derive(Clone, PartialEq)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::ZeroDimension);
        }
        if let Some((index, &value)) = coords.iter().enumerate().find(|(_, c)| !c.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Vector(coords))
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Self::new(coords.to_vec())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "zero-dimensional vector");
        Vector(vec![0.0; dim])
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[axis] = 1.0;
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn norm_inf(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn scale(&self, factor: f64) -> Vector {
        Vector(self.0.iter().map(|c| c * factor).collect())
    }

    /// Unit-length copy, or `None` when the norm is at or below `eps_zero`.
    /// Vectors already of unit length (to rounding) come back unchanged, so
    /// normalization is idempotent.
    pub fn normalized(&self, tol: &Tolerance) -> Option<Vector> {
        let n = self.norm();
        if n <= tol.eps_zero {
            None
        } else if (n - 1.0).abs() <= 4.0 * f64::EPSILON {
            Some(self.clone())
        } else {
            Some(self.scale(1.0 / n))
        }
    }

    pub fn distance(&self, other: &Vector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Angle between two nonzero vectors, accurate for nearly parallel inputs.
    pub fn angle_to(&self, other: &Vector) -> f64 {
        let a = self.scale(1.0 / self.norm());
        let b = other.scale(1.0 / other.norm());
        let chord = a.distance(&b);
        2.0 * (chord / 2.0).min(1.0).asin()
    }

    pub fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: self.dim(),
            });
        }
        Ok(())
    }

    /// Arithmetic mean of a nonempty list of same-dimension vectors.
    pub fn centroid<'a>(points: impl IntoIterator<Item = &'a Vector>) -> Option<Vector> {
        let mut iter = points.into_iter();
        let first = iter.next()?;
        let mut sum = first.0.clone();
        let mut count = 1usize;
        for p in iter {
            for (s, c) in sum.iter_mut().zip(&p.0) {
                *s += c;
            }
            count += 1;
        }
        Some(Vector(sum.into_iter().map(|s| s / count as f64).collect()))
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Index<usize> for Vector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Sub for &Vector {
    type Output = Vector;

    fn sub(self, rhs: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Add for &Vector {
    type Output = Vector;

    fn add(self, rhs: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Neg for &Vector {
    type Output = Vector;

    fn neg(self) -> Vector {
        Vector(self.0.iter().map(|c| -c).collect())
    }
}

fn dedup_points(points: Vec<Vector>, tol: &Tolerance) -> Vec<Vector> {
    let mut kept: Vec<Vector> = Vec::with_capacity(points.len());
    for p in points {
        if !kept.iter().any(|k| k.distance(&p) <= tol.eps_zero) {
            kept.push(p);
        }
    }
    kept
}

fn common_dim(points: &[Vector]) -> Result<usize> {
    let dim = points.first().ok_or(Error::EmptySet)?.dim();
    for p in points {
        p.check_dim(dim)?;
    }
    Ok(dim)
}

/// A finite point cloud.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    points: Vec<Vector>,
}

impl PointSet {
    pub fn new(points: Vec<Vector>, tol: &Tolerance) -> Result<Self> {
        let dim = common_dim(&points)?;
        Ok(PointSet {
            dim,
            points: dedup_points(points, tol),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }
}

/// The convex hull of a finite vertex list.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vector>,
}

impl Polytope {
    pub fn new(vertices: Vec<Vector>, tol: &Tolerance) -> Result<Self> {
        let dim = common_dim(&vertices)?;
        Ok(Polytope {
            dim,
            vertices: dedup_points(vertices, tol),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    /// Whether `x` lies in the convex hull of the vertices, within `eps_feas`.
    ///
    /// Decided as cone membership of the lifted point `(x, 1)` in the cone
    /// spanned by the lifted vertices `(v, 1)`.
    pub fn contains(&self, x: &Vector, tol: &Tolerance) -> Result<bool> {
        x.check_dim(self.dim)?;
        let lift = |v: &Vector| {
            let mut c = v.coords().to_vec();
            c.push(1.0);
            Vector(c)
        };
        let generators: Vec<Vector> = self.vertices.iter().map(lift).collect();
        crate::cones::nonnegative_span_contains(&generators, &lift(x), tol)
    }
}

/// One convex-or-discrete building block of a [`SetExpr`].
#[derive(Debug, Clone, PartialEq)]
pub enum Piece {
    Points(PointSet),
    Polytope(Polytope),
}

impl Piece {
    pub fn dim(&self) -> usize {
        match self {
            Piece::Points(s) => s.dim(),
            Piece::Polytope(c) => c.dim(),
        }
    }

    /// The represented points: cloud members or polytope vertices.
    pub fn points(&self) -> &[Vector] {
        match self {
            Piece::Points(s) => s.points(),
            Piece::Polytope(c) => c.vertices(),
        }
    }

    fn map_points(&self, f: impl Fn(&Vector) -> Vector) -> Piece {
        let mapped = self.points().iter().map(f).collect();
        match self {
            Piece::Points(s) => Piece::Points(PointSet {
                dim: s.dim,
                points: mapped,
            }),
            Piece::Polytope(c) => Piece::Polytope(Polytope {
                dim: c.dim,
                vertices: mapped,
            }),
        }
    }
}

/// A finite union of pieces, all of one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct SetExpr {
    dim: usize,
    pieces: Vec<Piece>,
}

impl SetExpr {
    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        let dim = pieces.first().ok_or(Error::EmptySet)?.dim();
        for piece in &pieces {
            if piece.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: piece.dim(),
                });
            }
        }
        Ok(SetExpr { dim, pieces })
    }

    pub fn points(points: Vec<Vector>, tol: &Tolerance) -> Result<Self> {
        Self::new(vec![Piece::Points(PointSet::new(points, tol)?)])
    }

    pub fn polytope(vertices: Vec<Vector>, tol: &Tolerance) -> Result<Self> {
        Self::new(vec![Piece::Polytope(Polytope::new(vertices, tol)?)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Every represented point across all pieces, in piece order.
    pub fn all_points(&self) -> impl Iterator<Item = &Vector> {
        self.pieces.iter().flat_map(|p| p.points().iter())
    }

    pub fn centroid(&self) -> Vector {
        Vector::centroid(self.all_points()).expect("set expressions are nonempty")
    }

    /// Whether `x` belongs to the denoted union: equal to a cloud point or
    /// inside a polytope's hull.
    pub fn contains(&self, x: &Vector, tol: &Tolerance) -> Result<bool> {
        x.check_dim(self.dim)?;
        for piece in &self.pieces {
            let hit = match piece {
                Piece::Points(s) => s.points().iter().any(|q| q.distance(x) <= tol.eps_zero),
                Piece::Polytope(c) => c.contains(x, tol)?,
            };
            if hit {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// `S - p`: every point and vertex shifted by `-p`.
pub fn translate(s: &SetExpr, p: &Vector) -> Result<SetExpr> {
    p.check_dim(s.dim)?;
    Ok(SetExpr {
        dim: s.dim,
        pieces: s
            .pieces
            .iter()
            .map(|piece| piece.map_points(|v| v - p))
            .collect(),
    })
}

/// Whether `p` lies in the (ambient) interior of the polytope's hull.
///
/// `p` is interior exactly when no nonzero `N` has `<N, v - p> <= 0` for every
/// vertex `v`. Lower-dimensional hulls always admit such an `N` (any normal of
/// their affine hull), so they have empty interior.
pub fn hull_interior_contains(c: &Polytope, p: &Vector, tol: &Tolerance) -> Result<bool> {
    p.check_dim(c.dim)?;
    let rows: Vec<LinearConstraint> = c
        .vertices()
        .iter()
        .map(|v| LinearConstraint::le(v - p, 0.0))
        .collect();
    let outcome = lp::homogeneous_nonzero_solve_in(c.dim, &rows, tol)?;
    Ok(outcome.status == LpStatus::Infeasible)
}
