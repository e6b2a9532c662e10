//! Obstacle boundaries and their P1 meshes.

mod curve;
pub mod io;
mod mesh;

pub use curve::{
    make_cavity, make_circle, make_ellipse, make_large_cavity, make_small_cavity, BoundaryCurve,
    CurveSegment, Point,
};
pub use mesh::{
    build_mesh, build_mesh_with_spacing, prolong_p1, refine_mesh, restrict_to_parent,
    BoundaryMesh, ElementParam, MeshId,
};
