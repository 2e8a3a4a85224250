//! Exact solvers for the achievement game GEN(S,W) on finite convex
//! geometries: brute force, the structure digraph and its type calculus, and
//! closed forms for trees, paths and extreme winning sets.

pub mod builders;
pub mod catalog;
pub mod closed;
pub mod dot;
pub mod error;
pub mod explore;
pub mod game;
pub mod geometry;
pub mod io;
pub mod mask;
pub mod structure;

pub use builders::{
    affine_geometry, deleted_affine, path_geometry, tree_vertex_geometry, PointConfig, Rational,
    TreeSpec,
};
pub use error::{Error, Result};
pub use game::{nim_bruteforce, nim_of_position, optimal_move, GameSpec, NimValue, Position};
pub use geometry::{validate_axioms, AxiomViolation, Geometry, ValidationReport};
pub use io::{load_instance, Instance, InstanceFile, Source};
pub use mask::SubsetMask;
pub use structure::{nim_structure, orbit_quotient, StructureDiagram, TypeTriple};
pub use closed::{nim_closed, ClosedFamily};
pub use dot::{emit_game_dot, emit_structure_dot, DiagramKind, DiagramStyle, LabelPolicy};
pub use explore::{
    cross_validate, enumerate_geometries, enumerate_trees, random_instance, spectrum,
    CampaignConfig, CampaignReport, SpectrumReport,
};
