use persep::cones::PolyhedralCone;
use persep::lp::{self, homogeneous_nonzero_solve, LinearConstraint, LpProblem, LpStatus};
use persep::oracle::{angle_of, complement_interior_witness, cones_to_intervals};
use persep::plot::{render_plot_2d, Overlay};
use persep::scene::{parse_scene, serialize_scene, Scene};
use persep::{
    hull_interior_contains, supporting_hyperplane, translate, Piece, PointSet, Polytope, SetExpr,
    Tolerance, Vector,
};
use proptest::prelude::*;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn int_coords(
    dim: usize,
    n: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(
        prop::collection::vec((-10i32..=10).prop_map(f64::from), dim),
        n,
    )
}

fn vectors(coords: &[Vec<f64>]) -> Vec<Vector> {
    coords
        .iter()
        .map(|c| Vector::from_slice(c).unwrap())
        .collect()
}

fn set_strategy(dim: usize) -> impl Strategy<Value = SetExpr> {
    prop::collection::vec((any::<bool>(), int_coords(dim, 1..=5)), 1..=3).prop_map(|pieces| {
        let built = pieces
            .into_iter()
            .map(|(poly, coords)| {
                if poly {
                    Piece::Polytope(Polytope::new(vectors(&coords), &tol()).unwrap())
                } else {
                    Piece::Points(PointSet::new(vectors(&coords), &tol()).unwrap())
                }
            })
            .collect();
        SetExpr::new(built).unwrap()
    })
}

fn system_strategy() -> impl Strategy<Value = (usize, Vec<LinearConstraint>)> {
    (1usize..=4).prop_flat_map(|dim| {
        let row = (
            prop::collection::vec(-5i32..=5, dim),
            -5i32..=5,
            any::<bool>(),
        )
            .prop_map(move |(c, rhs, le)| {
                let coeffs = Vector::new(c.into_iter().map(f64::from).collect()).unwrap();
                if le {
                    LinearConstraint::le(coeffs, f64::from(rhs))
                } else {
                    LinearConstraint::ge(coeffs, f64::from(rhs))
                }
            });
        (Just(dim), prop::collection::vec(row, 1..=10))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn translate_round_trip(s in set_strategy(3), p in int_coords(3, 1..=1)) {
        let p = Vector::from_slice(&p[0]).unwrap();
        let back = translate(&translate(&s, &p).unwrap(), &-&p).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn dedup_is_idempotent(coords in int_coords(2, 1..=12)) {
        let once = PointSet::new(vectors(&coords), &tol()).unwrap();
        let twice = PointSet::new(once.points().to_vec(), &tol()).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn feasible_witnesses_reverify((dim, rows) in system_strategy()) {
        let outcome = lp::solve(&LpProblem::feasibility(dim, rows.clone()), &tol()).unwrap();
        if outcome.status == LpStatus::Feasible {
            let w = outcome.witness.unwrap();
            for r in &rows {
                prop_assert!(r.is_satisfied(&w, &tol()));
            }
        } else {
            prop_assert!(outcome.witness.is_none());
        }
    }

    #[test]
    fn homogeneous_scaling_invariance(coords in int_coords(3, 1..=6), lambda in 0.01f64..100.0) {
        let rows: Vec<LinearConstraint> = vectors(&coords).into_iter().map(|g| LinearConstraint::le(g, 0.0)).collect();
        let scaled: Vec<LinearConstraint> = rows
            .iter()
            .map(|r| LinearConstraint::le(r.coeffs.scale(lambda), 0.0))
            .collect();
        let a = homogeneous_nonzero_solve(&rows, &tol()).unwrap();
        let b = homogeneous_nonzero_solve(&scaled, &tol()).unwrap();
        prop_assert_eq!(a.status, b.status);
        if let Some(n) = &a.witness {
            for r in &scaled {
                prop_assert!(r.coeffs.dot(n) <= tol().eps_feas * lambda.max(1.0));
            }
        }
    }

    #[test]
    fn interval_round_trip(coords in prop::collection::vec(prop::collection::vec(1i32..=10, 2), 1..=5), quadrant in 0u8..4) {
        // Generators inside one quadrant span less than a half-turn.
        let (sx, sy) = match quadrant { 0 => (1.0, 1.0), 1 => (-1.0, 1.0), 2 => (-1.0, -1.0), _ => (1.0, -1.0) };
        let dirs: Vec<Vector> = coords.iter().map(|c| Vector::from_slice(&[sx * f64::from(c[0]), sy * f64::from(c[1])]).unwrap()).collect();
        let k = PolyhedralCone::from_directions(Vector::zeros(2), &dirs, &tol()).unwrap();
        let arcs = cones_to_intervals(std::slice::from_ref(&k), &tol()).unwrap();
        for g in k.generators() {
            prop_assert!(arcs[0].contains_angle(angle_of(g), tol().eps_angle));
        }
    }

    #[test]
    fn complement_ball_stays_outside(coords in int_coords(3, 1..=8), dirs in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 3), 100)) {
        let c = Polytope::new(vectors(&coords), &tol()).unwrap();
        let ball = complement_interior_witness(&c, &tol()).unwrap();
        for d in dirs {
            let d = Vector::new(d).unwrap();
            if d.norm() < 1e-3 {
                continue;
            }
            let x = &ball.center + &d.scale(ball.radius / d.norm());
            prop_assert!(!c.contains(&x, &tol()).unwrap());
        }
    }

    #[test]
    fn supporting_certificates_hold(coords in int_coords(3, 1..=10), p in int_coords(3, 1..=1)) {
        let c = Polytope::new(vectors(&coords), &tol()).unwrap();
        let p = Vector::from_slice(&p[0]).unwrap();
        let interior = hull_interior_contains(&c, &p, &tol()).unwrap();
        match supporting_hyperplane(&c, &p, &tol()) {
            Ok(h) => {
                prop_assert!(!interior);
                prop_assert!(h.max_offset(c.vertices()) <= 1e-9);
            }
            Err(e) => {
                prop_assert!(interior);
                prop_assert_eq!(e, persep::Error::PInInterior);
            }
        }
    }

    #[test]
    fn scene_round_trip(a in set_strategy(2), b in prop::option::of(set_strategy(2)), p in prop::option::of(prop::collection::vec(-100.0f64..100.0, 2))) {
        let scene = Scene {
            dim: 2,
            set_a: a,
            set_b: b,
            point_p: p.map(|c| Vector::new(c).unwrap()),
            tolerance_overrides: None,
        };
        let once = parse_scene(&serialize_scene(&scene)).unwrap();
        prop_assert_eq!(&once, &scene);
        let twice = parse_scene(&serialize_scene(&once)).unwrap();
        prop_assert_eq!(twice, once);
    }

    #[test]
    fn plot_is_deterministic(a in set_strategy(2), b in set_strategy(2)) {
        let scene = Scene { dim: 2, set_a: a, set_b: Some(b), point_p: Some(Vector::zeros(2)), tolerance_overrides: None };
        prop_assert_eq!(render_plot_2d(&scene, Overlay::None).unwrap(), render_plot_2d(&scene, Overlay::None).unwrap());
    }
}
