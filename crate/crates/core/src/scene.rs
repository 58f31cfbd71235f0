//! Scene files and result documents.
//!
//! A scene is a JSON object:
//!
//! ```json
//! {
//!   "dim": 2,
//!   "sets": {
//!     "A": [{"kind": "points", "coords": [[1, 1], [1, 2]]}],
//!     "B": [{"kind": "polytope", "coords": [[1, -1], [2, -1], [1, -2]]}]
//!   },
//!   "p": [0, 0],
//!   "tolerance": {"eps_feas": 1e-9}
//! }
//! ```
//!
//! Sets are named `A` and `B` for separation scenes, or `C` alone for a
//! supporting-hyperplane scene (where `B` is absent). Unknown keys are
//! rejected.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Piece, PointSet, Polytope, SetExpr, Tolerance, Vector};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_feas: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_zero: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_angle: Option<f64>,
}

impl ToleranceOverrides {
    pub fn apply(&self, base: Tolerance) -> Result<Tolerance> {
        Tolerance::new(
            self.eps_feas.unwrap_or(base.eps_feas),
            self.eps_zero.unwrap_or(base.eps_zero),
            self.eps_angle.unwrap_or(base.eps_angle),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub dim: usize,
    pub set_a: SetExpr,
    /// Absent for supporting-hyperplane scenes.
    pub set_b: Option<SetExpr>,
    pub point_p: Option<Vector>,
    pub tolerance_overrides: Option<ToleranceOverrides>,
}

impl Scene {
    /// Defaults with the scene's overrides applied.
    pub fn tolerance(&self) -> Result<Tolerance> {
        match &self.tolerance_overrides {
            Some(o) => o.apply(Tolerance::default()),
            None => Ok(Tolerance::default()),
        }
    }

    /// Every represented point of both sets, then `p`.
    pub fn all_points(&self) -> impl Iterator<Item = &Vector> {
        self.set_a
            .all_points()
            .chain(self.set_b.iter().flat_map(|b| b.all_points()))
            .chain(self.point_p.iter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum PieceKind {
    Points,
    Polytope,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPiece {
    kind: PieceKind,
    coords: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSets {
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    a: Option<Vec<RawPiece>>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    b: Option<Vec<RawPiece>>,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    c: Option<Vec<RawPiece>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScene {
    dim: usize,
    sets: RawSets,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tolerance: Option<ToleranceOverrides>,
}

fn vector_of(coords: &[f64], dim: usize) -> Result<Vector> {
    let v = Vector::from_slice(coords).map_err(|e| match e {
        Error::ZeroDimension => Error::DimensionMismatch {
            expected: dim,
            found: 0,
        },
        other => other,
    })?;
    v.check_dim(dim)?;
    Ok(v)
}

fn build_set(name: &str, pieces: &[RawPiece], dim: usize, tol: &Tolerance) -> Result<SetExpr> {
    if pieces.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut built = Vec::with_capacity(pieces.len());
    for raw in pieces {
        if raw.coords.is_empty() {
            return Err(Error::EmptySet);
        }
        let points = raw
            .coords
            .iter()
            .map(|c| vector_of(c, dim))
            .collect::<Result<Vec<_>>>()?;
        built.push(match raw.kind {
            PieceKind::Points => Piece::Points(PointSet::new(points, tol)?),
            PieceKind::Polytope => Piece::Polytope(Polytope::new(points, tol)?),
        });
    }
    SetExpr::new(built).map_err(|e| match e {
        Error::EmptySet => Error::Scene(format!("set {name} is empty")),
        other => other,
    })
}

/// Parse and validate a scene document.
pub fn parse_scene(text: &str) -> Result<Scene> {
    let raw: RawScene = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if raw.dim == 0 {
        return Err(Error::Scene("dim must be positive".to_string()));
    }
    let tolerance_overrides = raw.tolerance;
    let tol = match &tolerance_overrides {
        Some(o) => o.apply(Tolerance::default())?,
        None => Tolerance::default(),
    };
    let (a, b) = match (&raw.sets.a, &raw.sets.b, &raw.sets.c) {
        (None, None, Some(c)) => (build_set("C", c, raw.dim, &tol)?, None),
        (Some(a), b, None) => (
            build_set("A", a, raw.dim, &tol)?,
            b.as_ref()
                .map(|b| build_set("B", b, raw.dim, &tol))
                .transpose()?,
        ),
        (None, None, None) => return Err(Error::EmptySet),
        (None, Some(_), None) => return Err(Error::Scene("set B requires a set A".to_string())),
        _ => {
            return Err(Error::Scene(
                "set C cannot be combined with sets A or B".to_string(),
            ))
        }
    };
    let point_p = raw
        .p
        .as_deref()
        .map(|c| vector_of(c, raw.dim))
        .transpose()?;
    Ok(Scene {
        dim: raw.dim,
        set_a: a,
        set_b: b,
        point_p,
        tolerance_overrides,
    })
}

fn raw_pieces(s: &SetExpr) -> Vec<RawPiece> {
    s.pieces()
        .iter()
        .map(|piece| RawPiece {
            kind: match piece {
                Piece::Points(_) => PieceKind::Points,
                Piece::Polytope(_) => PieceKind::Polytope,
            },
            coords: piece.points().iter().map(|v| v.coords().to_vec()).collect(),
        })
        .collect()
}

/// Serialize a scene; `parse_scene` reads it back to an equal value.
pub fn serialize_scene(scene: &Scene) -> String {
    let sets = match &scene.set_b {
        Some(b) => RawSets {
            a: Some(raw_pieces(&scene.set_a)),
            b: Some(raw_pieces(b)),
            c: None,
        },
        None => RawSets {
            a: None,
            b: None,
            c: Some(raw_pieces(&scene.set_a)),
        },
    };
    let raw = RawScene {
        dim: scene.dim,
        sets,
        p: scene.point_p.as_ref().map(|p| p.coords().to_vec()),
        tolerance: scene.tolerance_overrides,
    };
    serde_json::to_string_pretty(&raw).expect("scene serialization cannot fail")
}

/// Fixed-precision decimal, with negative zero printed as zero.
pub fn format_number(x: f64, precision: usize) -> String {
    let s = format!("{x:.precision$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

pub fn format_vector(v: &Vector, precision: usize) -> String {
    let parts: Vec<String> = v
        .coords()
        .iter()
        .map(|&c| format_number(c, precision))
        .collect();
    format!("[{}]", parts.join(", "))
}

/// The machine-readable result printed by the CLI.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultDocument {
    pub status: String,
    pub normal: Option<Vector>,
    pub anchor: Option<Vector>,
    pub side_a_max: Option<f64>,
    pub side_b_min: Option<f64>,
    pub margin: Option<f64>,
    pub reason: Option<String>,
    pub verified: Option<bool>,
}

impl ResultDocument {
    pub fn with_status(status: &str) -> Self {
        ResultDocument {
            status: status.to_string(),
            ..Default::default()
        }
    }

    pub fn negative(status: &str, reason: &Error) -> Self {
        ResultDocument {
            status: status.to_string(),
            reason: Some(reason.to_string()),
            ..Default::default()
        }
    }

    /// JSON with fixed field order and fixed-precision numbers.
    pub fn render(&self, precision: usize) -> String {
        let mut fields = vec![format!("\"status\": {}", json_string(&self.status))];
        if let Some(n) = &self.normal {
            fields.push(format!("\"normal\": {}", format_vector(n, precision)));
        }
        if let Some(a) = &self.anchor {
            fields.push(format!("\"anchor\": {}", format_vector(a, precision)));
        }
        for (key, value) in [
            ("side_a_max", self.side_a_max),
            ("side_b_min", self.side_b_min),
            ("margin", self.margin),
        ] {
            if let Some(x) = value {
                fields.push(format!("\"{key}\": {}", format_number(x, precision)));
            }
        }
        if let Some(r) = &self.reason {
            fields.push(format!("\"reason\": {}", json_string(r)));
        }
        if let Some(v) = self.verified {
            fields.push(format!("\"verified\": {v}"));
        }
        format!("{{\n  {}\n}}\n", fields.join(",\n  "))
    }
}

pub fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    const SUPPORT: &str = r#"{
        "dim": 2,
        "sets": {"C": [{"kind": "polytope", "coords": [[0, 0], [1, 0], [1, 1], [0, 1]]}]},
        "p": [2, 0.5]
    }"#;

    const SEPARATION: &str = r#"{
        "dim": 2,
        "sets": {
            "A": [{"kind": "points", "coords": [[1, 1], [1, 2]]}],
            "B": [{"kind": "points", "coords": [[1, -1]]},
                  {"kind": "polytope", "coords": [[2, -1], [3, -1], [2, -2]]}]
        },
        "p": [0, 0],
        "tolerance": {"eps_feas": 1e-8}
    }"#;

    #[test]
    fn minimal_support_scene() {
        let scene = parse_scene(SUPPORT).unwrap();
        assert_eq!(scene.dim, 2);
        assert!(scene.set_b.is_none());
        assert_eq!(
            scene.point_p,
            Some(Vector::from_slice(&[2.0, 0.5]).unwrap())
        );
    }

    #[test]
    fn full_separation_scene() {
        let scene = parse_scene(SEPARATION).unwrap();
        assert_eq!(scene.set_b.as_ref().unwrap().pieces().len(), 2);
        assert_eq!(scene.tolerance().unwrap().eps_feas, 1e-8);
        assert_eq!(scene.tolerance().unwrap().eps_zero, 1e-12);
    }

    #[test]
    fn mismatched_dimensions() {
        let text = r#"{"dim": 2, "sets": {"C": [{"kind": "points", "coords": [[0, 0]]}]}, "p": [1, 2, 3]}"#;
        assert_eq!(
            parse_scene(text),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 3
            })
        );
        let text = r#"{"dim": 2, "sets": {"C": [{"kind": "points", "coords": [[0, 0, 1]]}]}}"#;
        assert!(matches!(
            parse_scene(text),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn unknown_keys_are_rejected_with_position() {
        let text = "{\n  \"dim\": 2,\n  \"sets\": {\"C\": [{\"kind\": \"points\", \"coords\": [[0, 0]]}]},\n  \"q\": [1, 2]\n}";
        match parse_scene(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected a parse error, got {other:?}"),
        }
        let text = r#"{"dim": 2, "sets": {"D": []}}"#;
        assert!(matches!(parse_scene(text), Err(Error::Parse { .. })));
        let text = r#"{"dim": 2, "sets": {"C": [{"kind": "blob", "coords": [[0, 0]]}]}}"#;
        assert!(matches!(parse_scene(text), Err(Error::Parse { .. })));
    }

    #[test]
    fn empty_sets_are_rejected() {
        let text = r#"{"dim": 2, "sets": {"C": []}}"#;
        assert_eq!(parse_scene(text), Err(Error::EmptySet));
        let text = r#"{"dim": 2, "sets": {"C": [{"kind": "points", "coords": []}]}}"#;
        assert_eq!(parse_scene(text), Err(Error::EmptySet));
        let text = r#"{"dim": 2, "sets": {}}"#;
        assert_eq!(parse_scene(text), Err(Error::EmptySet));
    }

    #[test]
    fn set_naming_rules() {
        let text = r#"{"dim": 1, "sets": {"B": [{"kind": "points", "coords": [[0]]}]}}"#;
        assert!(matches!(parse_scene(text), Err(Error::Scene(_))));
        let text = r#"{"dim": 1, "sets": {"A": [{"kind": "points", "coords": [[0]]}], "C": [{"kind": "points", "coords": [[0]]}]}}"#;
        assert!(matches!(parse_scene(text), Err(Error::Scene(_))));
    }

    #[test]
    fn bad_tolerance_is_rejected() {
        let text = r#"{"dim": 1, "sets": {"C": [{"kind": "points", "coords": [[0]]}]}, "tolerance": {"eps_feas": -1}}"#;
        assert!(matches!(parse_scene(text), Err(Error::InvalidTolerance(_))));
    }

    #[test]
    fn round_trip_is_a_fixed_point() {
        for text in [SUPPORT, SEPARATION] {
            let scene = parse_scene(text).unwrap();
            let again = parse_scene(&serialize_scene(&scene)).unwrap();
            assert_eq!(again, scene);
        }
    }

    #[test]
    fn result_document_formatting() {
        let doc = ResultDocument {
            status: "separated".to_string(),
            normal: Some(Vector::from_slice(&[-0.0, -1.0]).unwrap()),
            anchor: Some(Vector::zeros(2)),
            side_a_max: Some(-1.0),
            side_b_min: Some(1.0),
            margin: Some(2.0),
            ..Default::default()
        };
        assert_eq!(
            doc.render(6),
            "{\n  \"status\": \"separated\",\n  \"normal\": [0.000000, -1.000000],\n  \"anchor\": [0.000000, 0.000000],\n  \"side_a_max\": -1.000000,\n  \"side_b_min\": 1.000000,\n  \"margin\": 2.000000\n}\n"
        );
        let parsed: serde_json::Value = serde_json::from_str(&doc.render(3)).unwrap();
        assert_eq!(parsed["margin"], 2.0);
    }

    #[test]
    fn negative_zero_and_rounding() {
        assert_eq!(format_number(-0.0, 6), "0.000000");
        assert_eq!(format_number(-1e-9, 6), "0.000000");
        assert_eq!(format_number(-1e-9, 12), "-0.000000001000");
        assert_eq!(format_number(2.5, 0), "2");
    }
}
