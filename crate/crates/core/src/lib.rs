//! Progressive Reed-Solomon retrieval for distributed storage with
//! crash-stop and Byzantine storage nodes.
//!
//! A data node frames its payload into CRC-protected groups of `k_hat`
//! symbols over GF(2^m), evaluates each group polynomial at every power of
//! alpha and sends symbol `j` of every group to storage node `j`. A
//! collector reads `k_hat` random nodes, interpolates, checks the CRC, and
//! only when that fails reads two nodes at a time while an incremental
//! Welch-Berlekamp decoder raises its error hypothesis by one per stage.

pub mod codec;
pub mod error;
pub mod gf;
pub mod analytics;
pub mod baseline;
pub mod ird;
pub mod retrieval;
pub mod sim;

pub use codec::{CodeParams, Codeword, GroupVector, Shard};
pub use error::{Error, Result};
pub use gf::{Elem, Field, Poly};
pub use ird::{DecoderState, Verdict};
