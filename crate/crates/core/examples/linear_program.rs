//! The dense LP solver and the homogeneous nonzero solve.

use persep::lp::{self, homogeneous_nonzero_solve, LinearConstraint, LpProblem};
use persep::{Tolerance, Vector};

fn v(c: &[f64]) -> Vector {
    Vector::from_slice(c).unwrap()
}

fn main() -> persep::Result<()> {
    let tol = Tolerance::default();
    let problem = LpProblem::feasibility(
        2,
        vec![
            LinearConstraint::le(v(&[1.0, 1.0]), 1.0),
            LinearConstraint::le(v(&[1.0, -1.0]), 1.0),
            LinearConstraint::le(v(&[-1.0, 0.0]), 0.0),
        ],
    )
    .maximize(v(&[1.0, 0.0]));
    let outcome = lp::solve(&problem, &tol)?;
    println!(
        "{:?} at {:?}, value {:?}",
        outcome.status, outcome.witness, outcome.objective_value
    );

    // Nonzero N with <N, g> <= 0 for both generators.
    let rows = vec![
        LinearConstraint::le(v(&[1.0, 1.0]), 0.0),
        LinearConstraint::le(v(&[-1.0, 1.0]), 0.0),
    ];
    let outcome = homogeneous_nonzero_solve(&rows, &tol)?;
    println!(
        "homogeneous: {:?} N = {:?}",
        outcome.status, outcome.witness
    );
    Ok(())
}
