//! Perspective cones of a set and the convexity of their union.

use persep::{
    cone_contains, conic_hull, perspective_cone, union_convexity, SetExpr, Tolerance, Vector,
};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn v(c: &[f64]) -> Vector {
    Vector::from_slice(c).unwrap()
}

fn main() -> persep::Result<()> {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let p = Vector::zeros(2);

    let two_rays = SetExpr::new(vec![
        persep::Piece::Points(persep::PointSet::new(vec![v(&[2.0, 0.0])], &tol)?),
        persep::Piece::Points(persep::PointSet::new(vec![v(&[0.0, 3.0])], &tol)?),
    ])?;
    let cones = perspective_cone(&two_rays, &p, &tol)?;
    for k in &cones {
        println!("piece cone generators {:?}", k.generators());
    }
    let report = union_convexity(&cones, &tol, &mut rng)?;
    println!("union: {:?}, witness {:?}", report.verdict, report.witness);

    let hull = conic_hull(&cones, &tol)?;
    println!(
        "(1, 1) in conic hull: {}",
        cone_contains(&hull, &v(&[1.0, 1.0]), &tol)?
    );

    let inside = perspective_cone(&two_rays, &v(&[2.0, 0.0]), &tol)?;
    println!(
        "p on the set gives a trivial cone: {}",
        inside.iter().any(|k| k.is_trivial())
    );
    Ok(())
}
