//! Toolkit for graph-state preparation: graph analysis under local
//! complementation, press-game solving over GF(2), schedule synthesis for
//! lexicographic (ancilla, operator-size, depth) cost measures, and
//! stabilizer-simulation verification of every schedule.

pub mod bits;
pub mod gf2;
pub mod graph;
pub mod locmin;
pub mod planner;
pub mod schedule;
pub mod sigma;
pub mod stabsim;
pub mod verifier;

pub use graph::{Graph, GraphError, GraphFormat, LcSequence};
