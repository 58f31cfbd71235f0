//! A ball outside a polytope's hull.

use persep::oracle::{complement_interior_witness, probes_outside};
use persep::{Polytope, Tolerance, Vector};

fn main() -> persep::Result<()> {
    let tol = Tolerance::default();
    let square = Polytope::new(
        [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
            .iter()
            .map(|c| Vector::from_slice(c).unwrap())
            .collect(),
        &tol,
    )?;
    let ball = complement_interior_witness(&square, &tol)?;
    println!("center {:?} radius {:.4}", ball.center, ball.radius);
    println!(
        "probes outside: {}",
        probes_outside(&square, &ball.center, ball.radius, &tol)?
    );
    Ok(())
}
