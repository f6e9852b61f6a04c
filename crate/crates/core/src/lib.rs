//! Inverse engineering of four-level quantum state transfers from
//! quaternion-parameterized rotations in four dimensions.
//!
//! The real amplitudes of a four-level state evolve under an orthogonal
//! matrix `U_r(t) = M_L(q(t)) M_R(p(t))`, with `q` and `p` unit quaternions
//! written in generalized spherical angles. Choosing the angles fixes the
//! couplings `Ω_nm(t)`; adding linear phases on the bare levels gives the
//! physical Hamiltonian.
//!
//! * [`quat4`]: quaternions, isoclinic matrices and rotation-plane decomposition.
//! * [`rotation_engine`]: angle schedules, `U_r(t)` and the couplings they induce.
//! * [`solvers`]: boundary problems for the inverse tripod, diamond and N-type topologies.
//! * [`hamiltonian`]: phase operator, total Hamiltonian and exact evolution.
//! * [`propagator`]: fourth-order Magnus integrator, fidelities and cross-checks.
//! * [`qo_map`]: lab-frame, interaction-picture and rotating-wave diamond Hamiltonians.
//! * [`scenario`] and [`cli`]: JSON scenarios and the command-line front end.

pub mod cli;
pub mod error;
pub mod hamiltonian;
pub mod propagator;
pub mod qo_map;
pub mod quat4;
pub mod rotation_engine;
pub mod scenario;
pub mod solvers;

pub use error::{Error, Result};
