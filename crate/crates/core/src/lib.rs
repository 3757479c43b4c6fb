//! Quantum secret sharing built from three ingredients: a classical secret
//! sharing scheme for the one-time-pad key, the quantum one-time pad itself,
//! and a quantum erasure-correcting code that spreads the encrypted state
//! over the parties.
//!
//! Every construction is simulated exactly on dense state vectors so that
//! correctness (entanglement fidelity) and privacy (trace distance of the
//! reduced states, averaged over every randomness tape) can be checked
//! numerically at small scale.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line front end and the acceptance harness live in the `qss` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod access;
pub mod classical;
pub mod compiler;
pub mod gf;
pub mod qecc;
pub mod qotp;
pub mod qsim;
