#![allow(dead_code)]

//! Shared helpers for integration tests.

pub mod dense;
pub mod enumerate;

use graphprep::Graph;
use rand::rngs::StdRng;
use rand::Rng;

pub fn random_graph(rng: &mut StdRng, n: usize, p: f64) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}
