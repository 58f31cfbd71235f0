//! Randomized checks of the cone lemmas and the two hyperplane theorems.
//!
//! Every check draws its instances from a seeded ChaCha stream, so a
//! `(trials, seed)` pair always reproduces the same tallies.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cones::{
    cone_contains, conic_hull, perspective_cone, union_convexity, PolyhedralCone, Verdict,
};
use crate::error::{Error, Result};
use crate::geometry::{
    hull_interior_contains, Piece, PointSet, Polytope, SetExpr, Tolerance, Vector,
};
use crate::lp::{homogeneous_nonzero_solve, LinearConstraint};
use crate::oracle::{
    complement_interior_witness, convex_union_shape, probes_outside, relative_interiors_disjoint,
};
use crate::separation::{separate_through_point, supporting_hyperplane};

pub const DEFAULT_SEED: u64 = 20240917;

/// Instance generators shared by the suite and the examples.
pub mod random {
    use super::*;

    pub fn integer_point<R: Rng + ?Sized>(rng: &mut R, dim: usize, bound: i32) -> Vector {
        let coords = (0..dim)
            .map(|_| f64::from(rng.gen_range(-bound..=bound)))
            .collect();
        Vector::new(coords).expect("integer coordinates are finite")
    }

    /// Direction drawn from the cube and normalized; never zero.
    pub fn unit_direction<R: Rng + ?Sized>(rng: &mut R, dim: usize, tol: &Tolerance) -> Vector {
        loop {
            let coords: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            if let Some(u) = Vector::new(coords).ok().and_then(|v| v.normalized(tol)) {
                return u;
            }
        }
    }

    /// Between 1 and `max_vertices` integer vertices in `[-10, 10]^dim`.
    pub fn polytope<R: Rng + ?Sized>(
        rng: &mut R,
        dim: usize,
        max_vertices: usize,
        tol: &Tolerance,
    ) -> Polytope {
        let n = rng.gen_range(1..=max_vertices);
        let vertices = (0..n).map(|_| integer_point(rng, dim, 10)).collect();
        Polytope::new(vertices, tol).expect("nonempty vertex list")
    }

    /// A point outside the interior of `c`: an integer point by rejection,
    /// or a vertex or edge midpoint when that lands on the boundary.
    pub fn exterior_or_boundary_point<R: Rng + ?Sized>(
        rng: &mut R,
        c: &Polytope,
        tol: &Tolerance,
    ) -> Result<Vector> {
        loop {
            let candidate = match rng.gen_range(0..4) {
                0 => c.vertices()[rng.gen_range(0..c.vertices().len())].clone(),
                1 => {
                    let vs = c.vertices();
                    let (i, j) = (rng.gen_range(0..vs.len()), rng.gen_range(0..vs.len()));
                    (&vs[i] + &vs[j]).scale(0.5)
                }
                _ => integer_point(rng, c.dim(), 12),
            };
            if !hull_interior_contains(c, &candidate, tol)? {
                return Ok(candidate);
            }
        }
    }

    /// A planar set of one to three pieces whose points lie in the sector of
    /// half-width `spread` around `heading`, at integer coordinates.
    pub fn sector_set<R: Rng + ?Sized>(
        rng: &mut R,
        heading: f64,
        spread: f64,
        tol: &Tolerance,
    ) -> SetExpr {
        let pieces = rng.gen_range(1..=3);
        let mut built = Vec::with_capacity(pieces);
        for _ in 0..pieces {
            let n = rng.gen_range(1..=4);
            let mut pts = Vec::with_capacity(n);
            while pts.len() < n {
                let angle = heading + rng.gen_range(-spread..=spread);
                let radius = rng.gen_range(1.0..14.0);
                let x = (radius * angle.cos()).round();
                let y = (radius * angle.sin()).round();
                if x != 0.0 || y != 0.0 {
                    pts.push(Vector::new(vec![x, y]).expect("finite"));
                }
            }
            built.push(if rng.gen_bool(0.5) {
                Piece::Points(PointSet::new(pts, tol).expect("nonempty"))
            } else {
                Piece::Polytope(Polytope::new(pts, tol).expect("nonempty"))
            });
        }
        SetExpr::new(built).expect("nonempty")
    }

    /// A set of random pieces in `[-10, 10]^dim`.
    pub fn set<R: Rng + ?Sized>(rng: &mut R, dim: usize, tol: &Tolerance) -> SetExpr {
        let pieces = rng.gen_range(1..=3);
        let built = (0..pieces)
            .map(|_| {
                let n = rng.gen_range(1..=5);
                let pts: Vec<Vector> = (0..n).map(|_| integer_point(rng, dim, 10)).collect();
                if rng.gen_bool(0.5) {
                    Piece::Points(PointSet::new(pts, tol).expect("nonempty"))
                } else {
                    Piece::Polytope(Polytope::new(pts, tol).expect("nonempty"))
                }
            })
            .collect();
        SetExpr::new(built).expect("nonempty")
    }
}

/// Whether the planar scene at `p` meets the separation hypotheses: both
/// unions of piece-cones are convex and their relative interiors are
/// disjoint. `None` when `p` lies in one of the sets.
pub fn planar_separation_hypotheses(
    a: &SetExpr,
    b: &SetExpr,
    p: &Vector,
    tol: &Tolerance,
) -> Result<Option<bool>> {
    let ka = perspective_cone(a, p, tol)?;
    let kb = perspective_cone(b, p, tol)?;
    if ka.iter().chain(&kb).any(PolyhedralCone::is_trivial) {
        return Ok(None);
    }
    let (Some(sa), Some(sb)) = (convex_union_shape(&ka, tol)?, convex_union_shape(&kb, tol)?)
    else {
        return Ok(Some(false));
    };
    Ok(Some(relative_interiors_disjoint(&sa, &sb, tol.eps_angle)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tally {
    pub name: &'static str,
    pub passed: usize,
    pub trials: usize,
}

impl Tally {
    pub fn all_passed(&self) -> bool {
        self.passed == self.trials
    }
}

fn run<F>(name: &'static str, trials: usize, rng: &mut ChaCha8Rng, mut trial: F) -> Result<Tally>
where
    F: FnMut(&mut ChaCha8Rng) -> Result<bool>,
{
    let mut passed = 0;
    for _ in 0..trials {
        if trial(rng)? {
            passed += 1;
        }
    }
    Ok(Tally {
        name,
        passed,
        trials,
    })
}

fn closure_trial(rng: &mut ChaCha8Rng, tol: &Tolerance) -> Result<bool> {
    let dim = rng.gen_range(2..=4);
    let n = rng.gen_range(1..=6);
    let gens: Vec<Vector> = (0..n)
        .map(|_| random::unit_direction(rng, dim, tol))
        .collect();
    let origin = Vector::zeros(dim);
    let k = PolyhedralCone::from_directions(origin.clone(), &gens, tol)?;
    let hull = conic_hull(&[k], tol)?;
    let mut v = origin;
    for g in &gens {
        v = &v + &g.scale(rng.gen_range(0.0..10.0));
    }
    cone_contains(&hull, &v, tol)
}

/// Two rays that are neither equal nor opposite: their sum lies in neither,
/// so the union is not convex.
fn converse_trial(rng: &mut ChaCha8Rng, tol: &Tolerance) -> Result<bool> {
    let origin = Vector::zeros(2);
    let (u, w) = loop {
        let u = random::unit_direction(rng, 2, tol);
        let w = random::unit_direction(rng, 2, tol);
        if u.dot(&w).abs() < 0.999 {
            break (u, w);
        }
    };
    let ku = PolyhedralCone::from_directions(origin.clone(), std::slice::from_ref(&u), tol)?;
    let kw = PolyhedralCone::from_directions(origin, std::slice::from_ref(&w), tol)?;
    let sum = &u + &w;
    let escapes = !cone_contains(&ku, &sum, tol)? && !cone_contains(&kw, &sum, tol)?;
    let report = union_convexity(&[ku, kw], tol, rng)?;
    Ok(escapes && report.verdict == Verdict::NotConvex)
}

/// From a point outside the interior, the directions to the vertices fit in
/// a closed half-space.
fn chain_trial(rng: &mut ChaCha8Rng, tol: &Tolerance) -> Result<bool> {
    let dim = rng.gen_range(2..=4);
    let c = random::polytope(rng, dim, 12, tol);
    let p = random::exterior_or_boundary_point(rng, &c, tol)?;
    let rows: Vec<LinearConstraint> = c
        .vertices()
        .iter()
        .map(|v| v - &p)
        .filter(|d| d.norm() > tol.eps_zero)
        .map(|d| LinearConstraint::le(d, 0.0))
        .collect();
    if rows.is_empty() {
        return Ok(true);
    }
    let outcome = homogeneous_nonzero_solve(&rows, tol)?;
    Ok(outcome.is_feasible()
        && outcome
            .witness
            .is_some_and(|n| n.norm_inf() > 0.5 && rows.iter().all(|r| r.is_satisfied(&n, tol))))
}

fn complement_trial(rng: &mut ChaCha8Rng, tol: &Tolerance) -> Result<bool> {
    let dim = rng.gen_range(2..=4);
    let c = random::polytope(rng, dim, 12, tol);
    let ball = complement_interior_witness(&c, tol)?;
    if !(ball.radius > 0.0 && probes_outside(&c, &ball.center, ball.radius, tol)?) {
        return Ok(false);
    }
    for _ in 0..100 {
        let u = random::unit_direction(rng, dim, tol);
        if c.contains(&(&ball.center + &u.scale(ball.radius)), tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn degenerate_trial(rng: &mut ChaCha8Rng, tol: &Tolerance) -> Result<bool> {
    let dim = rng.gen_range(2..=4);
    let a = random::set(rng, dim, tol);
    let b = random::set(rng, dim, tol);
    let pieces = a.pieces();
    let piece = &pieces[rng.gen_range(0..pieces.len())];
    let p = piece.points()[rng.gen_range(0..piece.points().len())].clone();
    let cones = perspective_cone(&a, &p, tol)?;
    let trivial = cones.iter().any(PolyhedralCone::is_trivial);
    let degenerate = matches!(
        separate_through_point(&a, &b, &p, tol),
        Err(Error::DegeneratePoint)
    );
    Ok(trivial && degenerate)
}

fn support_trial(rng: &mut ChaCha8Rng, tol: &Tolerance) -> Result<bool> {
    let dim = rng.gen_range(2..=4);
    let c = random::polytope(rng, dim, 12, tol);
    let p = random::exterior_or_boundary_point(rng, &c, tol)?;
    let h = supporting_hyperplane(&c, &p, tol)?;
    Ok(h.max_offset(c.vertices()) <= 1e-9)
}

fn separation_trial(rng: &mut ChaCha8Rng, tol: &Tolerance) -> Result<bool> {
    let p = Vector::zeros(2);
    let (a, b) = loop {
        let heading = rng.gen_range(0.0..std::f64::consts::TAU);
        let spread = rng.gen_range(0.0..1.4);
        let a = random::sector_set(rng, heading, spread, tol);
        let turn = std::f64::consts::PI + rng.gen_range(-1.0..1.0);
        let spread = rng.gen_range(0.0..1.4);
        let b = random::sector_set(rng, heading + turn, spread, tol);
        if planar_separation_hypotheses(&a, &b, &p, tol)? == Some(true) {
            break (a, b);
        }
    };
    match separate_through_point(&a, &b, &p, tol) {
        Ok(cert) => Ok(cert.verify(&a, &b, tol)),
        Err(Error::NotSeparableThroughP) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Run every check `trials` times.
pub fn run_suite(trials: usize, seed: u64, tol: &Tolerance) -> Result<Vec<Tally>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(vec![
        run("cone_closure", trials, &mut rng, |r| closure_trial(r, tol))?,
        run("cone_converse", trials, &mut rng, |r| {
            converse_trial(r, tol)
        })?,
        run("exterior_cone_halfspace", trials, &mut rng, |r| {
            chain_trial(r, tol)
        })?,
        run("complement_interior", trials, &mut rng, |r| {
            complement_trial(r, tol)
        })?,
        run("degenerate_point", trials, &mut rng, |r| {
            degenerate_trial(r, tol)
        })?,
        run("supporting_hyperplane", trials, &mut rng, |r| {
            support_trial(r, tol)
        })?,
        run("separation_2d", trials, &mut rng, |r| {
            separation_trial(r, tol)
        })?,
    ])
}
