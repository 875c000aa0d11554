//! Pairings of test functions with characters: Fourier transforms, the compact formulas,
//! the fixed point formula and the integral formula over cycles.

pub mod compact;
pub mod fixed_point;
pub mod integral;
pub mod report;
pub mod test_function;

pub use compact::{
    dh_localization_check, kirillov_pairing_su2, kirillov_pairing_with, orbit_mass_su2, weyl_character_su2,
    weyl_side_pairing, KIRILLOV_MEASURE_NORMALIZATION,
};
pub use fixed_point::{fixed_point_density, fixed_point_pairing, FixedPointOptions, MultiplicityRule};
pub use integral::{
    cycle_pairing, deformed_cycle_pairing, gaussian_fiber_constant, gaussian_fiber_limit,
    gaussian_fiber_target, ball_nodes, CycleQuadrature, DeformedQuadrature,
};
pub use report::{PairingReport, ShellContribution};
pub use test_function::{fourier, fourier_table, FourierTable, Monomial, TestFunction, FOURIER_DEGREE};
