//! Core algorithms for detecting safety-critical lane-change conflicts in
//! connected-vehicle data and for learning driver evasive behavior.
//!
//! The crate is split along the data flow:
//!
//! - [`ssm`] — the two-dimensional time-to-collision measure (longitudinal
//!   and lateral collision cases plus conflict classification);
//! - [`smooth`] — Gaussian series smoothing used on lane-distance signals;
//! - [`env`] — the six-component kinematic environment, reward functions,
//!   teacher-forced experience generation and closed-loop rollout;
//! - [`nn`] — a dense-network substrate (forward, exact backward, Adam,
//!   soft target updates, binary serialization);
//! - [`ddpg`] — replay buffer, Ornstein–Uhlenbeck exploration and the
//!   actor-critic training loop;
//! - [`stats`] — RMSE / Jensen–Shannon divergence, Pearson correlation with
//!   p-values, risk/crash-rate aggregation and the threshold sweep.
//!
//! Everything here is pure computation over in-memory values; file formats,
//! CSV ingestion and the command-line front end live in the companion
//! `evade-lab` crate. The crate builds without `std` (alloc is required);
//! the `std` feature adds runtime CPU-feature dispatch for the hot kernels.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod ddpg;
pub mod env;
pub(crate) mod fmath;
pub mod nn;
pub mod smooth;
pub mod ssm;
pub mod stats;

#[cfg(feature = "test-oracles")]
pub mod oracle;

pub use env::{Action, ConflictEpisode, EnvState, RewardConfig, RewardKind, Transition};
pub use ssm::{ConflictKind, PairState, TtcResult, VehicleDims};
