//! Write the SVG figure of a separation scene to `separation.svg`.

use persep::plot::{emit_plot_2d, Overlay};
use persep::scene::parse_scene;
use persep::{separate_through_point, Error};

const SCENE: &str = r#"{
  "dim": 2,
  "sets": {
    "A": [{"kind": "polytope", "coords": [[-6, 1], [-3, 0], [-2, 3], [-4, 5]]}],
    "B": [{"kind": "polytope", "coords": [[3, -1], [6, -2], [7, 1], [2, 2]]}, {"kind": "points", "coords": [[8, -4]]}]
  },
  "p": [0, 0]
}"#;

fn main() -> persep::Result<()> {
    let scene = parse_scene(SCENE)?;
    let tol = scene.tolerance()?;
    let b = scene.set_b.as_ref().expect("two-set scene");
    let p = scene.point_p.as_ref().expect("scene with p");
    let cert = separate_through_point(&scene.set_a, b, p, &tol)?;
    let mut file =
        std::fs::File::create("separation.svg").map_err(|e| Error::Scene(e.to_string()))?;
    emit_plot_2d(&scene, Overlay::Separation(&cert), &mut file)?;
    println!("wrote separation.svg");
    Ok(())
}
