//! Construction, analysis and Monte Carlo evaluation of short-block LDPC
//! codes.
//!
//! The crate builds Tanner graphs by progressive edge growth under a
//! configurable candidate-pruning pipeline, layers quasi-cyclic,
//! repeat-accumulate and block-fading diversity structure on top, and ships
//! the channel models, decoders and simulation harness needed to compare the
//! resulting codes.
//!
//! Floating-point work (channels, LLRs, decoding) is generic over the
//! scalar type; the aliases below pin the default `f64` lane.

pub mod alist;
pub mod channel;
pub mod cycles;
pub mod decode;
pub mod distribution;
pub mod diversity;
pub mod encode;
pub mod graph;
pub mod peg;
pub mod sim;
pub mod stopping;
pub mod structured;

pub use graph::{tree_expand, GraphError, TannerGraph, Termination, TreeExpansion};

/// Default floating-point scalar used by the simulation harness.
pub type DefaultScalar = f64;
/// Log-likelihood-ratio vector over the default scalar.
pub type Llr = channel::LlrVector<f64>;
/// Single-precision LLR vector.
pub type Llr32 = channel::LlrVector<f32>;
