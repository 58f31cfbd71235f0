//! Parse a scene, print it back, and render a result document.

use persep::scene::{parse_scene, serialize_scene, ResultDocument};
use persep::{supporting_hyperplane, Polytope};

fn main() -> persep::Result<()> {
    let scene = parse_scene(
        r#"{"dim": 2, "sets": {"C": [{"kind": "polytope", "coords": [[0, 0], [1, 0], [0, 1]]}]}, "p": [1, 1]}"#,
    )?;
    let text = serialize_scene(&scene);
    println!("{text}");
    assert_eq!(parse_scene(&text)?, scene);

    let tol = scene.tolerance()?;
    let c = Polytope::new(scene.set_a.all_points().cloned().collect(), &tol)?;
    let h = supporting_hyperplane(&c, scene.point_p.as_ref().expect("p"), &tol)?;
    let doc = ResultDocument {
        normal: Some(h.normal().clone()),
        anchor: Some(h.anchor().clone()),
        side_a_max: Some(h.max_offset(c.vertices())),
        ..ResultDocument::with_status("supported")
    };
    print!("{}", doc.render(6));
    Ok(())
}
