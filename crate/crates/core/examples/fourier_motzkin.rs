//! Exact feasibility by Fourier-Motzkin elimination, next to the simplex.

use persep::lp::{self, LinearConstraint, LpProblem};
use persep::oracle::fm_feasible;
use persep::{Tolerance, Vector};

fn v(c: &[f64]) -> Vector {
    Vector::from_slice(c).unwrap()
}

fn main() -> persep::Result<()> {
    let systems = [
        vec![
            LinearConstraint::le(v(&[1.0, 1.0]), 1.0),
            LinearConstraint::ge(v(&[1.0, 0.0]), 0.0),
            LinearConstraint::ge(v(&[0.0, 1.0]), 0.0),
        ],
        vec![
            LinearConstraint::le(v(&[1.0, 1.0]), 1.0),
            LinearConstraint::le(v(&[1.0, -1.0]), -2.0),
            LinearConstraint::le(v(&[-1.0, 0.0]), -2.0),
        ],
    ];
    for rows in systems {
        let exact = fm_feasible(&rows)?;
        let simplex = lp::solve(&LpProblem::feasibility(2, rows), &Tolerance::default())?;
        println!("elimination: {exact:5}  simplex: {:?}", simplex.status);
    }
    Ok(())
}
