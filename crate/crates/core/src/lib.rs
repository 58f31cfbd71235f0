//! Supporting and separating hyperplanes for finite point sets, computed
//! through perspective cones.
//!
//! A set seen from a point `p` spans a cone of directions. When that cone is
//! convex and proper, a hyperplane through `p` supports the set; when the
//! cones of two sets are convex with disjoint interiors, a hyperplane through
//! `p` separates them. This crate makes those statements executable for point
//! clouds, vertex-represented polytopes, and finite unions of both:
//!
//! - [`geometry`]: vectors, the [`Tolerance`] policy, set representations.
//! - [`lp`]: the small dense LP solver behind every hyperplane search.
//! - [`cones`]: perspective cones, conic hulls, membership, union convexity.
//! - [`separation`]: supporting hyperplanes and separation certificates.
//! - [`oracle`]: exact/independent cross-checks (Fourier-Motzkin, angular sweep).
//! - [`scene`], [`plot`], [`cli`]: scene files, SVG figures, the command line.
//! - [`lemmas`]: the randomized property suite behind `persep check lemmas`.

pub mod cli;
pub mod cones;
pub mod error;
pub mod geometry;
pub mod lemmas;
pub mod lp;
pub mod oracle;
pub mod plot;
pub mod scene;
pub mod separation;

pub use cones::{
    cone_contains, conic_hull, minkowski_difference, perspective_cone, union_convexity,
    ConvexityReport, PolyhedralCone, Verdict,
};
pub use error::{Error, Result};
pub use geometry::{
    approx_leq, hull_interior_contains, translate, Piece, PointSet, Polytope, SetExpr, Tolerance,
    Vector,
};
pub use lp::{
    homogeneous_nonzero_solve, solve, LinearConstraint, LpOutcome, LpProblem, LpStatus, Relation,
};
pub use plot::{emit_plot_2d, render_plot_2d, Overlay};
pub use scene::{parse_scene, serialize_scene, ResultDocument, Scene};
pub use separation::{
    find_perspective_point, halfspace_containing_cone, separate_through_point,
    supporting_hyperplane, Hyperplane, PerspectiveSearch, SearchConfig, SeparationCertificate,
};
