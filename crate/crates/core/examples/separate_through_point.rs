//! Separating two sets by a line through a given point.

use persep::{separate_through_point, SetExpr, Tolerance, Vector};

fn v(c: &[f64]) -> Vector {
    Vector::from_slice(c).unwrap()
}

fn main() -> persep::Result<()> {
    let tol = Tolerance::default();
    let a = SetExpr::points(vec![v(&[1.0, 1.0]), v(&[2.0, 3.0])], &tol)?;
    let b = SetExpr::polytope(
        vec![v(&[1.0, -1.0]), v(&[3.0, -1.0]), v(&[2.0, -3.0])],
        &tol,
    )?;
    let p = Vector::zeros(2);

    let cert = separate_through_point(&a, &b, &p, &tol)?;
    println!("normal     {:?}", cert.hyperplane.normal());
    println!("side A max {:.6}", cert.side_a_max);
    println!("side B min {:.6}", cert.side_b_min);
    println!("margin     {:.6}", cert.margin);
    println!("verified   {}", cert.verify(&a, &b, &tol));

    // The XOR pattern has no separating line through the origin.
    let xa = SetExpr::points(vec![v(&[1.0, 1.0]), v(&[-1.0, -1.0])], &tol)?;
    let xb = SetExpr::points(vec![v(&[1.0, -1.0]), v(&[-1.0, 1.0])], &tol)?;
    if let Err(e) = separate_through_point(&xa, &xb, &p, &tol) {
        println!("xor: {e}");
    }
    Ok(())
}
