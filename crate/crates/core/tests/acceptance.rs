//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Runs as a plain binary so the lines are always printed.

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::Instant;

use persep::cones::{cone_contains, conic_hull, perspective_cone, PolyhedralCone};
use persep::lemmas::planar_separation_hypotheses;
use persep::lp::{self, homogeneous_nonzero_solve, LinearConstraint, LpProblem, LpStatus};
use persep::oracle::{
    complement_interior_witness, fm_feasible, oracle_separable_2d, probes_outside,
};
use persep::{
    hull_interior_contains, separate_through_point, supporting_hyperplane, Error, Piece, PointSet,
    Polytope, SetExpr, Tolerance, Vector,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CERT_TOL: f64 = 1e-9;

struct Line {
    passed: bool,
    text: String,
}

fn line(id: usize, name: &str, passed: bool, detail: String, started: Instant) -> Line {
    Line {
        passed,
        text: format!(
            "criterion {id} {name}: {} ({detail}; {:.2}s)",
            if passed { "PASS" } else { "FAIL" },
            started.elapsed().as_secs_f64()
        ),
    }
}

fn v(c: &[f64]) -> Vector {
    Vector::from_slice(c).unwrap()
}

fn int_point(rng: &mut ChaCha8Rng, dim: usize, bound: i32) -> Vector {
    Vector::new(
        (0..dim)
            .map(|_| f64::from(rng.gen_range(-bound..=bound)))
            .collect(),
    )
    .unwrap()
}

fn random_polytope(rng: &mut ChaCha8Rng, tol: &Tolerance) -> Polytope {
    let dim = rng.gen_range(2..=4);
    let n = rng.gen_range(1..=12);
    Polytope::new((0..n).map(|_| int_point(rng, dim, 10)).collect(), tol).unwrap()
}

fn dot(a: &Vector, b: &Vector) -> f64 {
    a.coords().iter().zip(b.coords()).map(|(x, y)| x * y).sum()
}

/// Raw offsets `<n, x - p>` straight from coordinates.
fn offsets<'a>(
    n: &'a Vector,
    p: &'a Vector,
    xs: impl Iterator<Item = &'a Vector> + 'a,
) -> impl Iterator<Item = f64> + 'a {
    xs.map(move |x| {
        n.coords()
            .iter()
            .zip(x.coords().iter().zip(p.coords()))
            .map(|(ni, (xi, pi))| ni * (xi - pi))
            .sum()
    })
}

/// Point outside the hull interior by rejection; boundary points come from
/// vertices and vertex midpoints.
fn exterior_point(rng: &mut ChaCha8Rng, c: &Polytope, tol: &Tolerance) -> (Vector, bool) {
    loop {
        let vs = c.vertices();
        let (candidate, on_data) = match rng.gen_range(0..5) {
            0 => (vs[rng.gen_range(0..vs.len())].clone(), true),
            1 => {
                let (i, j) = (rng.gen_range(0..vs.len()), rng.gen_range(0..vs.len()));
                ((&vs[i] + &vs[j]).scale(0.5), true)
            }
            _ => (int_point(rng, c.dim(), 14), false),
        };
        if !hull_interior_contains(c, &candidate, tol).unwrap() {
            return (candidate, on_data);
        }
    }
}

fn criterion_1(tol: &Tolerance) -> Line {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let (mut ok, mut worst) = (0, f64::NEG_INFINITY);
    for _ in 0..500 {
        let c = random_polytope(&mut rng, tol);
        let (p, _) = exterior_point(&mut rng, &c, tol);
        if let Ok(h) = supporting_hyperplane(&c, &p, tol) {
            let n = h.normal();
            let max = offsets(n, &p, c.vertices().iter()).fold(f64::NEG_INFINITY, f64::max);
            worst = worst.max(max);
            if n.norm_inf() > 0.0 && max <= CERT_TOL {
                ok += 1;
            }
        }
    }
    line(
        1,
        "supporting hyperplane",
        ok == 500,
        format!("{ok}/500, worst offset {worst:.3e} <= 1e-9"),
        started,
    )
}

/// Planar set of 1-3 pieces in a sector around `heading`.
fn sector_set(rng: &mut ChaCha8Rng, heading: f64, spread: f64, tol: &Tolerance) -> SetExpr {
    let pieces = (0..rng.gen_range(1..=3))
        .map(|_| {
            let mut pts = Vec::new();
            let n = rng.gen_range(1..=4);
            while pts.len() < n {
                let a = heading + rng.gen_range(-spread..=spread);
                let r = rng.gen_range(1.0..12.0);
                let (x, y) = ((r * a.cos()).round(), (r * a.sin()).round());
                if x != 0.0 || y != 0.0 {
                    pts.push(v(&[x, y]));
                }
            }
            if rng.gen_bool(0.5) {
                Piece::Points(PointSet::new(pts, tol).unwrap())
            } else {
                Piece::Polytope(Polytope::new(pts, tol).unwrap())
            }
        })
        .collect();
    SetExpr::new(pieces).unwrap()
}

fn uniform_set(rng: &mut ChaCha8Rng, tol: &Tolerance) -> SetExpr {
    let pieces = (0..rng.gen_range(1..=3))
        .map(|_| {
            let pts: Vec<Vector> = (0..rng.gen_range(1..=4))
                .map(|_| int_point(rng, 2, 6))
                .collect();
            if rng.gen_bool(0.5) {
                Piece::Points(PointSet::new(pts, tol).unwrap())
            } else {
                Piece::Polytope(Polytope::new(pts, tol).unwrap())
            }
        })
        .collect();
    SetExpr::new(pieces).unwrap()
}

fn sector_pair(rng: &mut ChaCha8Rng, tol: &Tolerance) -> (SetExpr, SetExpr) {
    let heading = rng.gen_range(0.0..std::f64::consts::TAU);
    let spread = rng.gen_range(0.0..1.5);
    let a = sector_set(rng, heading, spread, tol);
    let turn = rng.gen_range(1.5..4.8);
    let spread = rng.gen_range(0.0..1.5);
    let b = sector_set(rng, heading + turn, spread, tol);
    (a, b)
}

fn criterion_2(tol: &Tolerance) -> Line {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let p = Vector::zeros(2);
    let (mut ok, mut accepted, mut drawn) = (0, 0, 0);
    let mut worst = f64::NEG_INFINITY;
    while accepted < 1000 {
        drawn += 1;
        let (a, b) = sector_pair(&mut rng, tol);
        if planar_separation_hypotheses(&a, &b, &p, tol).unwrap() != Some(true) {
            continue;
        }
        accepted += 1;
        if let Ok(cert) = separate_through_point(&a, &b, &p, tol) {
            let n = cert.hyperplane.normal();
            let a_max = offsets(n, &p, a.all_points()).fold(f64::NEG_INFINITY, f64::max);
            let b_min = offsets(n, &p, b.all_points()).fold(f64::INFINITY, f64::min);
            worst = worst.max(a_max).max(-b_min);
            if n.norm_inf() > 0.0 && a_max <= CERT_TOL && b_min >= -CERT_TOL {
                ok += 1;
            }
        }
    }
    line(
        2,
        "planar separation soundness",
        ok == 1000,
        format!("{ok}/1000 from {drawn} drawn scenes, worst violation {worst:.3e} <= 1e-9"),
        started,
    )
}

fn criterion_3(tol: &Tolerance) -> Line {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut scene_agree = 0;
    let mut scenes = 0;
    let mut separable = 0;
    while scenes < 1000 {
        let (a, b, p) = if rng.gen_bool(0.5) {
            let (a, b) = sector_pair(&mut rng, tol);
            (a, b, Vector::zeros(2))
        } else {
            (
                uniform_set(&mut rng, tol),
                uniform_set(&mut rng, tol),
                int_point(&mut rng, 2, 3),
            )
        };
        if a.contains(&p, tol).unwrap() || b.contains(&p, tol).unwrap() {
            continue;
        }
        scenes += 1;
        let main = match separate_through_point(&a, &b, &p, tol) {
            Ok(_) => true,
            Err(Error::NotSeparableThroughP) => false,
            Err(e) => panic!("unexpected error {e}"),
        };
        let oracle = oracle_separable_2d(&a, &b, &p, tol).unwrap().separable;
        separable += usize::from(oracle);
        if main == oracle {
            scene_agree += 1;
        }
    }

    let mut system_agree = 0;
    let mut feasible = 0;
    for _ in 0..2000 {
        let dim = rng.gen_range(1..=4);
        let rows: Vec<LinearConstraint> = (0..rng.gen_range(1..=10))
            .map(|_| {
                let coeffs =
                    Vector::new((0..dim).map(|_| f64::from(rng.gen_range(-5..=5))).collect())
                        .unwrap();
                let rhs = f64::from(rng.gen_range(-5..=5));
                if rng.gen_bool(0.5) {
                    LinearConstraint::le(coeffs, rhs)
                } else {
                    LinearConstraint::ge(coeffs, rhs)
                }
            })
            .collect();
        let exact = fm_feasible(&rows).unwrap();
        let outcome = lp::solve(&LpProblem::feasibility(dim, rows), tol).unwrap();
        feasible += usize::from(exact);
        if (outcome.status == LpStatus::Feasible) == exact {
            system_agree += 1;
        }
    }
    line(
        3,
        "oracle equivalence",
        scene_agree == 1000 && system_agree == 2000,
        format!(
            "sweep {scene_agree}/1000 ({separable} separable), elimination {system_agree}/2000 ({feasible} feasible), 100% required"
        ),
        started,
    )
}

fn criterion_4(tol: &Tolerance) -> Line {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut ok = 0;
    for _ in 0..2000 {
        let dim = rng.gen_range(2..=4);
        let gens: Vec<Vector> = (0..rng.gen_range(1..=6))
            .map(|_| loop {
                let g = int_point(&mut rng, dim, 10);
                if g.norm() > 0.0 {
                    break g;
                }
            })
            .collect();
        let origin = Vector::zeros(dim);
        let k = PolyhedralCone::from_directions(origin.clone(), &gens, tol).unwrap();
        let hull = conic_hull(&[k], tol).unwrap();
        let mut combo = origin;
        for g in &gens {
            let lambda = if rng.gen_bool(0.2) {
                0.0
            } else {
                rng.gen_range(0.0..5.0)
            };
            combo = &combo + &g.scale(lambda);
        }
        if cone_contains(&hull, &combo, tol).unwrap() {
            ok += 1;
        }
    }
    line(
        4,
        "conic closure",
        ok == 2000,
        format!("{ok}/2000"),
        started,
    )
}

fn criterion_5(tol: &Tolerance) -> Line {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let (mut ok, mut boundary) = (0, 0);
    for _ in 0..500 {
        let c = random_polytope(&mut rng, tol);
        let (p, on_data) = exterior_point(&mut rng, &c, tol);
        boundary += usize::from(on_data);
        // Directions from p to every other vertex; at an exterior p these
        // are the perspective-cone generators up to scale.
        let dirs: Vec<Vector> = c
            .vertices()
            .iter()
            .map(|x| x - &p)
            .filter(|d| d.norm() > 0.0)
            .collect();
        if dirs.is_empty() {
            ok += 1;
            continue;
        }
        let rows: Vec<LinearConstraint> = dirs
            .iter()
            .map(|d| LinearConstraint::le(d.clone(), 0.0))
            .collect();
        let outcome = homogeneous_nonzero_solve(&rows, tol).unwrap();
        let holds = outcome.witness.as_ref().is_some_and(|n| {
            n.norm_inf() >= 1.0 - 1e-12 && dirs.iter().all(|d| dot(n, d) <= CERT_TOL)
        });
        if holds {
            ok += 1;
        }
    }
    line(
        5,
        "exterior cone fits a half-space",
        ok == 500,
        format!("{ok}/500, {boundary} with p on the data"),
        started,
    )
}

fn criterion_6(tol: &Tolerance) -> Line {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut ok = 0;
    for _ in 0..200 {
        let c = random_polytope(&mut rng, tol);
        let dim = c.dim();
        let Ok(ball) = complement_interior_witness(&c, tol) else {
            continue;
        };
        // Independent certificate: the hyperplane orthogonal to the
        // centroid-to-center direction separates the ball from every vertex.
        let centroid = Vector::centroid(c.vertices()).unwrap();
        let axis = &ball.center - &centroid;
        let u = axis.scale(1.0 / axis.norm());
        let hull_max = c
            .vertices()
            .iter()
            .map(|x| dot(&u, x))
            .fold(f64::NEG_INFINITY, f64::max);
        let ball_min = dot(&u, &ball.center) - ball.radius;
        let separated = ball.radius > 0.0 && hull_max < ball_min;
        let probes = probes_outside(&c, &ball.center, ball.radius, tol).unwrap();
        let surface = (0..100).all(|_| {
            let d = loop {
                let d = Vector::new((0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
                if d.norm() > 1e-3 {
                    break d;
                }
            };
            let x = &ball.center + &d.scale(ball.radius / d.norm());
            !c.contains(&x, tol).unwrap()
        });
        if separated && probes && surface {
            ok += 1;
        }
    }
    line(
        6,
        "complement interior ball",
        ok == 200,
        format!("{ok}/200"),
        started,
    )
}

fn criterion_7(tol: &Tolerance) -> Line {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut ok = 0;
    for _ in 0..100 {
        let dim = rng.gen_range(2..=4);
        let make = |rng: &mut ChaCha8Rng| {
            let pieces = (0..rng.gen_range(1..=3))
                .map(|_| {
                    let pts: Vec<Vector> = (0..rng.gen_range(1..=5))
                        .map(|_| int_point(rng, dim, 10))
                        .collect();
                    if rng.gen_bool(0.5) {
                        Piece::Points(PointSet::new(pts, tol).unwrap())
                    } else {
                        Piece::Polytope(Polytope::new(pts, tol).unwrap())
                    }
                })
                .collect();
            SetExpr::new(pieces).unwrap()
        };
        let (a, b) = (make(&mut rng), make(&mut rng));
        let source = if rng.gen_bool(0.5) { &a } else { &b };
        let piece = &source.pieces()[rng.gen_range(0..source.pieces().len())];
        let p = piece.points()[rng.gen_range(0..piece.points().len())].clone();
        let trivial = perspective_cone(source, &p, tol)
            .unwrap()
            .iter()
            .any(PolyhedralCone::is_trivial);
        let degenerate = matches!(
            separate_through_point(&a, &b, &p, tol),
            Err(Error::DegeneratePoint)
        );
        if trivial && degenerate {
            ok += 1;
        }
    }
    line(7, "point in a set", ok == 100, format!("{ok}/100"), started)
}

fn fixtures() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    files
}

fn run_cli(args: &[&str]) -> (Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_persep"))
        .args(args)
        .env_remove("PERSEP_SEED")
        .output()
        .unwrap();
    (out.stdout, out.status.code().unwrap_or(-1))
}

fn criterion_8() -> Line {
    let started = Instant::now();
    let files = fixtures();
    let tmp = std::env::temp_dir().join(format!("persep-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&tmp).unwrap();
    let (mut runs, mut identical) = (0, 0);
    let has_xor = files.iter().any(|f| f.ends_with("separate_xor.json"));
    let has_blobs = files.iter().any(|f| f.ends_with("separate_two_blobs.json"));
    for (i, f) in files.iter().enumerate() {
        let path = f.to_str().unwrap();
        let name = f.file_stem().unwrap().to_str().unwrap();
        let mut commands: Vec<Vec<&str>> = Vec::new();
        if name.starts_with("support") {
            commands.push(vec!["support", path]);
        } else {
            commands.push(vec!["separate", path]);
            commands.push(vec!["separate", "--at-point", path]);
        }
        for args in commands {
            runs += 1;
            if run_cli(&args) == run_cli(&args) {
                identical += 1;
            }
        }
        let text = std::fs::read_to_string(f).unwrap();
        if text.contains("\"dim\": 2") {
            let first = tmp.join(format!("{i}-a.svg"));
            let second = tmp.join(format!("{i}-b.svg"));
            let (_, c1) = run_cli(&["plot", path, "--out", first.to_str().unwrap()]);
            let (_, c2) = run_cli(&["plot", path, "--out", second.to_str().unwrap()]);
            runs += 1;
            if c1 == c2 && std::fs::read(&first).unwrap() == std::fs::read(&second).unwrap() {
                identical += 1;
            }
        }
    }
    let _ = std::fs::remove_dir_all(&tmp);
    let passed = files.len() >= 20 && has_xor && has_blobs && identical == runs;
    line(
        8,
        "determinism",
        passed,
        format!(
            "{identical}/{runs} identical command pairs over {} fixtures",
            files.len()
        ),
        started,
    )
}

fn main() -> ExitCode {
    let tol = Tolerance::default();
    let started = Instant::now();
    let lines = vec![
        criterion_1(&tol),
        criterion_2(&tol),
        criterion_3(&tol),
        criterion_4(&tol),
        criterion_5(&tol),
        criterion_6(&tol),
        criterion_7(&tol),
        criterion_8(),
    ];
    for l in &lines {
        println!("{}", l.text);
    }
    let failed = lines.iter().filter(|l| !l.passed).count();
    println!(
        "acceptance: {}/{} criteria passed in {:.2}s",
        lines.len() - failed,
        lines.len(),
        started.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
