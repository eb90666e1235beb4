//! Exact flow computations and residual-network maintenance.

mod network;
mod residual;

pub use network::{
    flow_path_decomposition, max_flow, min_cost_max_flow, min_edge_cut, CutResult, FlowNetwork,
    FlowResult, MinCostResult,
};
pub use residual::{CopyRef, FlowState};
