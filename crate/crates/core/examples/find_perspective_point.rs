//! Searching for a point from which two clusters separate.

use persep::{find_perspective_point, PerspectiveSearch, SearchConfig, SetExpr, Tolerance, Vector};

fn v(c: &[f64]) -> Vector {
    Vector::from_slice(c).unwrap()
}

fn main() -> persep::Result<()> {
    let tol = Tolerance::default();
    let a = SetExpr::polytope(vec![v(&[0.0, 0.0]), v(&[2.0, 0.0]), v(&[1.0, 2.0])], &tol)?;
    let b = SetExpr::polytope(vec![v(&[5.0, 0.0]), v(&[7.0, 0.0]), v(&[6.0, 2.0])], &tol)?;
    match find_perspective_point(&a, &b, &SearchConfig::default(), &tol)? {
        PerspectiveSearch::Found { point, certificate } => {
            println!("point  {point:?}");
            println!("normal {:?}", certificate.hyperplane.normal());
            println!("margin {:.6}", certificate.margin);
        }
        PerspectiveSearch::NotFound => println!("no perspective point"),
    }
    Ok(())
}
