//! Spectral separability toolkit: absolute-PPT membership, positive-map
//! entanglement witnesses and small SDP certificates.

pub mod absppt;
pub mod bipartite;
pub mod error;
pub mod families;
pub mod matcore;
pub mod par;
pub mod posmaps;
pub mod random;
pub mod scan;
pub mod sdpsolve;
pub mod witness;

pub use error::{Error, Result};
