pub mod circuit;
pub mod phase;
pub mod qasm;
pub mod gf2;
pub mod sim;
pub mod zx;
pub mod simplify;
pub mod gflow;
pub mod frontier_lp;
pub mod extract;
pub mod generators;
pub mod sqg_opt;
pub mod pipeline;
