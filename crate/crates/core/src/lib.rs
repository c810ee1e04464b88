// SPDX-License-Identifier: Apache-2.0

//! Gravitational decoherence of primordial massive particles in thermal
//! baths, and three observable signatures of their quantum superpositions:
//! lensing interference, gravitational-atom spectra and an entanglement
//! witness.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod decoherence;
pub mod environment;
pub mod error;
pub mod gravatom;
pub mod lensing;
pub mod qstate;
pub mod quadrature;
pub mod units;
pub mod wavepacket;

pub use error::{Error, Result};
