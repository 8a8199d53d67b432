//! Open-system dynamics and quantum discord of two qubits coupled through a
//! plasmonic waveguide under homodyne feedback.
//!
//! Start with the examples; each one exercises one part of the crate:
//!
//! | example | shows |
//! |---|---|
//! | `werner_discord` | T, C, Q of Werner states; X formula vs brute force |
//! | `feedback_dynamics` | discord against time without feedback, with F1 and with F2 |
//! | `stationary_states` | null spaces and stationary states vs closed forms |
//! | `closed_form_trajectories` | closed-form Werner trajectories vs RK4 |
//! | `waveguide_rates` | rates from geometry; steady discord vs separation |
//! | `parameter_sweep` | a μ × a sweep through the scenario API |
//! | `brute_force_oracle` | random X states and a non-X state |
//! | `custom_state` | evolving a JSON density matrix |
//! | `figure_data` | CSV for every figure scenario |
//! | `validation` | every cross-check in one table |
//!
//! ```text
//! cargo run --release --example feedback_dynamics
//! ```
//!
//! Modules, bottom up: [`linalg`] (fixed-size complex matrices, entropies),
//! [`model`] (operators, rates, generators), [`dynamics`] (RK4, stationary
//! states), [`discord`], [`analytic`] (closed forms at μ = ±1), then
//! [`config`], [`scenario`] and [`validate`] behind the `plasmon-qd` binary.

// Index loops read better for fixed-size matrices; `!(x <= y)` rejects NaN on purpose.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod config;
pub mod discord;
pub mod dynamics;
pub mod linalg;
pub mod model;
pub mod output;
pub mod scenario;
pub mod validate;
