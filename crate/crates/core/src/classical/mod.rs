//! Phase-space fields over `(q, p, t, s)`, the split and generalized Poisson
//! brackets, and densities transported by a Hamiltonian flow.

mod brackets;
mod flow;
mod grid;
mod solution;

pub use brackets::{bracket_qp, bracket_ts, bracket_w, liouville_residual, FORM_TOL};
pub use flow::{SpaceHamiltonian, Trajectory};
pub use grid::{Axis, AxisId, DerivativeBackend, Grid, PhaseField};
pub use solution::{
    analytic_solution, build_solution, mean_value, mollifier, s_marginal,
    space_hamiltonian_field, total_hamiltonian_field,
};
