//! Exact integer quantum state-vector simulation on a modeled
//! processing-in-memory system.
//!
//! Amplitudes are kept as Gaussian integers over a global power-of-√2
//! denominator, so every Clifford-family circuit executes without a single
//! floating-point operation and normalization can be asserted as an integer
//! identity rather than a tolerance. On top of that engine sit three
//! lowering passes — gate merging, permutation lowering, and separable-state
//! partitioning — plus a multi-DPU execution model that accounts for data
//! movement the way a real PIM deployment would (host→DPU transfer, on-DPU
//! compute, DPU→host transfer, host-side reconstruction).
//!
//! The crate is `no_std`-compatible (it needs `alloc` only); everything
//! OS-flavored (files, threads, CLI) lives in the companion `pimsim` crate.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod circuit;
pub mod gauss;
pub mod intstate;
pub mod oracle;
pub mod passes;
pub mod pim;
pub mod qasm;
