//! Combinatorial workbench for extremal experiments on simplicial spheres.
//!
//! The crate provides:
//!
//! * [`complex`]: a pure `d`-dimensional simplicial complex stored as a
//!   canonical facet set, with faces, links, f-vectors, suspensions,
//!   barycentric subdivision, balancedness, and connected sums;
//! * [`factory`]: generators for sphere families (simplex and cross-polytope
//!   boundaries, cycles, iterated suspensions, octahedral-flip sequences,
//!   trees of simplices, and randomized locally-constructible spheres);
//! * [`check`]: graded sphere recognition with shelling certificates;
//! * [`random`]: the Linial-Meshulam sampler `Y_d(n, p)`;
//! * [`pipeline`]: embedding search, facet-count bounds for balanced spheres,
//!   and the sample/alter/rainbow construction of dense sphere-free complexes;
//! * [`census`]: exhaustive small-sphere enumeration and canonical forms.
//!
//! All operations are deterministic given their seeds, and every type is
//! immutable after construction, so values can be shared freely across
//! threads.

pub mod census;
pub mod check;
pub mod complex;
pub mod error;
pub mod factory;
pub mod pipeline;
pub mod random;
pub mod rng;

pub use census::{
    automorphism_count, canonical_form, census_2lc, distinct_labelings, enumerate_2spheres,
    CensusRecord,
};
pub use check::{find_shelling, is_closed_pseudomanifold, verify_sphere, Effort, SphereStatus, SphereVerdict};
pub use complex::{Coloring, Complex, FVector, Face, Vertex};
pub use error::{Error, Result};
pub use factory::{
    boundary_cross_polytope, boundary_simplex, cross_polytope_pair_coloring, cycle, flip_sequence,
    iterated_suspension_sphere, octahedral_flip, replay_trace, tree_of_simplices, two_lc_generate,
    BuildTrace, FlipPairing, LcMode, TraceKind, TraceStep, TwoLcSearch,
};
pub use pipeline::{
    exponents, find_embedded_copies, gkn_min_facets, labeled_copies_bound, lower_bound_construct,
    max_vertices_for_facets, partite_construction, suspension_witness, CatalogEntry, Embedding,
    ExponentTable, PipelineParams, PipelineReport, SphereCatalog,
};
pub use random::{expected_facets, sample_lm, turan_probability, LMParams};
pub use rng::SplitMix64;
