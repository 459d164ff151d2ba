//! Solvers for the Edge Hamiltonian Path and Cycle problems on graphs and
//! hypergraphs, with brute-force oracles for checking them.

pub mod cert;
pub mod cw;
pub mod generate;
pub mod graph;
pub mod hyper;
pub mod io;
pub mod kernel;
pub mod oracle;
pub mod rng;
pub mod transforms;
pub mod tw;
pub mod typing;

pub use cert::{validate_des, validate_edge_sequence, DesSolution, EdgeSeq, Mode};
pub use graph::{line_graph, EdgeSystem, Graph, Hypergraph};
pub use oracle::{Answer, Certificate, SolveResult};
