//! Decision-diagram solver for mixed-integer quadratic optimization with
//! banded matrices and indicator variables.
//!
//! Problems of the form
//!
//! ```text
//!     minimize    d'x + c'z + 1/2 x'Qx
//!     subject to  x_i != 0  =>  z_i = 1,      z in Z subset of {0,1}^n
//! ```
//!
//! with a symmetric positive-definite banded `Q` are solved in two phases:
//! a data-independent *offline* phase that compiles `Q` (and optional
//! combinatorial constraints on `z`) into a layered decision diagram, and an
//! *online* phase that solves any instance `(c, d)` over that diagram as a
//! shortest-path problem in a directed acyclic graph. The split makes the
//! online phase cheap enough for streaming use: one diagram serves every
//! window of a monitored signal, millisecond by millisecond.
//!
//! The crate is `no_std`-compatible (`alloc` required; disable the `std`
//! feature and enable `libm`), so the online solver can run on small edge
//! devices once a diagram has been built elsewhere.
//!
//! Module map:
//!
//! * [`banded`] — band storage, banded Cholesky, and the pseudoinverse
//!   calculus that underlies diagram states.
//! * [`state`] — diagram states (relevant pseudoinverse columns) and their
//!   rank-one transition updates.
//! * [`automaton`] — deterministic automata for side constraints on `z`
//!   (currently contiguity of nonzero runs).
//! * [`diagram`] — exact, epsilon-exact and suffix-truncated diagram
//!   construction, plus path enumeration.
//! * [`solve`] — arc lengths, DAG shortest path, and solution recovery.
//! * [`fptas`] — decay constants, truncation depth selection, and solves
//!   with a certified additive error bound.
//! * [`hull`] — the extended convex-hull formulation induced by a diagram
//!   and feasibility certification of path witnesses.
//! * [`oracle`] — brute-force reference solver for desk-scale verification.
//! * [`filters`] — regularization filter matrices, signal standardization,
//!   instance construction, and sliding-window streaming.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod automaton;
pub mod banded;
pub mod diagram;
pub mod error;
pub mod filters;
pub mod fptas;
pub mod hull;
mod math;
pub mod oracle;
pub mod solve;
pub mod state;

pub use automaton::{contiguity_transition, ConstraintAutomaton, Contiguity};
pub use banded::{
    banded_solve, make_banded, pseudoinverse_oracle, relevance_indexes, BandedCholesky,
    BandedMatrix, RelevanceIndex,
};
pub use diagram::{
    build_diagram, enumerate_paths, BuildConfig, BuildMode, ConstraintKind, Diagram, DiagramArc,
    LayerStats, NodeId,
};
pub use error::{Error, Result};
pub use filters::{
    build_instance, kth_diff_matrix, max_eigenvalue, moving_average_matrix, standardize,
    window_instances, FilterKind, FilterSpec, Signal, WindowStream,
};
pub use fptas::{decay_constants, solve_fptas, truncation_depth, FptasConstants};
pub use hull::{build_hull, certify_path_feasible, HullFormulation, PathWitness, WitnessResiduals};
pub use oracle::{brute_force, contiguity_equivalence_check, ConstraintFilter};
pub use solve::{
    arc_lengths, arc_lengths_into, evaluate_objective, recover_solution, shortest_path, Instance,
    ModeTag, PathSolver, Solution,
};
pub use state::{state_distance, state_extend, transition_vector, DiagramState, TransitionVector};
