//! Exact relative and absolute Gromov-Witten invariants of blowups of the
//! projective plane, computed by the tropical sweep recursion.
//!
//! Relative invariants `n_Γ` are indexed by [`CurveConfig`]s and solved by
//! [`Solver`]; [`absolute_invariant`] turns them into curve counts of the
//! plane blown up in `n` points.

pub mod absolute;
pub mod configs;
pub mod error;
pub mod formal;
pub mod lattice;
pub mod solver;
pub mod store;
pub mod sweep;

pub use absolute::{absolute_invariant, kontsevich, psi_term, GwRecord, HomologyClass};
pub use configs::{canonicalize, CurveConfig, RawConfig};
pub use error::{ConfigError, ParseError, SolveError, StoreError};
pub use formal::{assemble_exp, exp_coefficient, FormalSum, InvariantOracle};
pub use lattice::{in_cone_n, in_universal_cone, is_valid_incoming, wedge, LatticeVector, Rational};
pub use solver::{enumerate_sources, IdentityReport, InvariantTable, Solver, SolverOptions, DEFAULT_Y_SET};
pub use store::{load_table, save_table};
pub use sweep::{expand, expand_left, expand_right, expand_sum, expand_with_order, Side};
