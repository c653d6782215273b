//! Reusable combinatorial kernels: bipartite matching with a König
//! cover certificate, systems of distinct representatives (plus the
//! necessary-symbol strengthening used by the shuffle step), König
//! decomposition of bounded matrices, and integral flows with lower
//! bounds.

pub mod bigraph;
pub mod flow;
pub mod konig;
pub mod sdr;

pub use bigraph::{maximum_matching, minimum_vertex_cover, Bigraph};
pub use flow::{feasible_flow, BoundedArc, BoundedFlowNetwork, FlowError, Infeasible};
pub use konig::{konig_decompose, Axis, KonigError};
pub use sdr::{sdr, sdr_with_necessary, HallViolation, SdrError, SetFamily};
