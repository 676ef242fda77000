//! Number statistics and entropy of single-mode bosonic fields governed
//! by a birth-death master equation: laser/maser light on both sides of
//! threshold and the condensate ground state of a trapped Bose gas.
//!
//! The crate is organized around one object, the occupation-number
//! distribution on a truncated ladder ([`fock::FockDistribution`]), and
//! four views of it:
//!
//! - [`numerics`]: log-domain special functions (log-gamma, Stirling,
//!   the confluent hypergeometric normalization sum).
//! - [`fock`]: distribution constructors (exact detailed-balance steady
//!   state, shifted-Poisson and Gaussian approximations, thermal,
//!   condensate ground state) and moments.
//! - [`entropy`]: von Neumann entropy by direct summation, every closed
//!   form, and entropy fluxes.
//! - [`dynamics`]: time evolution of the diagonal master equation,
//!   steady states for arbitrary gain/loss ladders, coherence decay and
//!   linewidths.
//! - [`engine`]: heat-engine entropy budgets and the quantum Carnot
//!   bound.
//!
//! Everything is unit-free: rates in 1/time, entropies in k_B, reservoir
//! parameters as dimensionless energy ratios. Physical units belong to
//! the caller.
//!
//! All functions are pure and all types are immutable after construction,
//! so values can be shared freely across threads.

// Negated float comparisons are deliberate throughout: `!(x > 0.0)` also
// rejects NaN, which `x <= 0.0` would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod engine;
pub mod entropy;
pub mod fock;
pub mod numerics;

pub use dynamics::{
    below_threshold_field_rate, coherence_decay_factor, evolve_diagonal, evolve_observed,
    linewidth, mean_field_envelope, steady_state, CoherenceDecay, DynamicsError, LadderModel,
    Spectrum, ThresholdRegime,
};
pub use engine::{
    carnot_quantum_bound, classical_carnot_check, cycle_entropy_budget, flux_inequality,
    CarnotAssessment, CarnotBudget, EngineError, EngineScenario, FluxAssessment, ReservoirPhoton,
};
pub use entropy::{
    bec_ground_entropy_closed_form, bulk_bose_gas_entropy, entropy_flux_maser,
    entropy_flux_thermal, laser_entropy_closed_form, thermal_entropy_closed_form,
    thermal_entropy_high_t, von_neumann_entropy, EntropyFlux, EntropyMethod, EntropyValue,
};
pub use fock::{
    bec_ground_distribution, laser_exact_distribution, laser_gaussian, laser_log_partition,
    laser_shifted_poisson, moments, planck_occupancy, thermal_distribution, BecParams,
    FockDistribution, FockError, LaserParams, Moments,
};
pub use numerics::{
    hypergeometric_1f1_1, log_factorial, log_gamma, stirling_log_factorial, NumericsError,
    SeriesControl, SeriesResult,
};
