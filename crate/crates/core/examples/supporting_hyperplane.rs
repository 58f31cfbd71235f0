//! Supporting hyperplane of a square through an outside point, a vertex,
//! and (failing) an interior point.

use persep::{supporting_hyperplane, Polytope, Tolerance, Vector};

fn v(c: &[f64]) -> Vector {
    Vector::from_slice(c).unwrap()
}

fn main() -> persep::Result<()> {
    let tol = Tolerance::default();
    let square = Polytope::new(
        vec![
            v(&[0.0, 0.0]),
            v(&[1.0, 0.0]),
            v(&[1.0, 1.0]),
            v(&[0.0, 1.0]),
        ],
        &tol,
    )?;
    for p in [v(&[2.0, 0.5]), v(&[1.0, 1.0]), v(&[0.5, 0.5])] {
        match supporting_hyperplane(&square, &p, &tol) {
            Ok(h) => println!(
                "p = {:?}: normal {:?}, max <N, v - p> = {:.3e}",
                p,
                h.normal(),
                h.max_offset(square.vertices())
            ),
            Err(e) => println!("p = {p:?}: {e}"),
        }
    }
    Ok(())
}
