//! The sigma game: pressing a vertex flips the 0/1 state of its neighbors.
//! Reachability questions reduce to GF(2) systems on adjacency submatrices.

use crate::bits::BitVec;
use crate::gf2::Gf2Matrix;
use crate::graph::Graph;
use thiserror::Error;

#[derive(Error, Debug, PartialEq, Eq)]
pub enum SigmaError {
    #[error("vertex {0} out of range")]
    OutOfRange(usize),
    #[error("set is not a subset of the vertices")]
    BadSubset,
}

/// Assignment of 0/1 to every vertex.
pub type SigmaConfig = BitVec;

/// Presses `v`, flipping all its neighbors.
pub fn press(g: &Graph, config: &SigmaConfig, v: usize) -> Result<SigmaConfig, SigmaError> {
    if v >= g.n() {
        return Err(SigmaError::OutOfRange(v));
    }
    let mut out = config.clone();
    out.xor_with(g.neighbors(v));
    Ok(out)
}

/// Presses every vertex in `set` (order is irrelevant over GF(2)).
pub fn press_set(g: &Graph, config: &SigmaConfig, set: &BitVec) -> SigmaConfig {
    let mut out = config.clone();
    for v in set.iter_ones() {
        out.xor_with(g.neighbors(v));
    }
    out
}

/// The submatrix of the adjacency matrix with rows indexed by V \ D
/// (ascending) and columns by D (ascending).
pub fn submatrix_a_d(g: &Graph, d_set: &BitVec) -> Gf2Matrix {
    debug_assert_eq!(d_set.len(), g.n());
    let d: Vec<usize> = d_set.ones();
    let outside: Vec<usize> = (0..g.n()).filter(|&v| !d_set.get(v)).collect();
    let mut m = Gf2Matrix::zeros(outside.len(), d.len());
    for (i, &u) in outside.iter().enumerate() {
        for (j, &v) in d.iter().enumerate() {
            if g.has_edge(u, v) {
                m.set(i, j, true);
            }
        }
    }
    m
}

/// True iff every configuration on D is reachable by pressing outside D,
/// i.e. the submatrix has full column rank.
pub fn reachable_all(g: &Graph, d_set: &BitVec) -> bool {
    let d = d_set.count_ones();
    submatrix_a_d(g, d_set).rank() == d
}

/// Finds a press set R ⊆ V \ D whose effect on D is exactly `target`
/// (bits of `target` are indexed by D in ascending vertex order). Returns
/// the characteristic vector of R over all of V, or `None` when the flip
/// pattern is unreachable.
pub fn solve_press_outside(
    g: &Graph,
    d_set: &BitVec,
    target: &BitVec,
) -> Result<Option<BitVec>, SigmaError> {
    if d_set.len() != g.n() || target.len() != d_set.count_ones() {
        return Err(SigmaError::BadSubset);
    }
    // pressing x (over V \ D) flips A_D^T x on D
    let system = submatrix_a_d(g, d_set).transpose();
    let solution = system.solve(target).expect("dimensions match");
    let Some(x) = solution else {
        return Ok(None);
    };
    let outside: Vec<usize> = (0..g.n()).filter(|&v| !d_set.get(v)).collect();
    let mut r = BitVec::zeros(g.n());
    for (i, &v) in outside.iter().enumerate() {
        if x.get(i) {
            r.set(v, true);
        }
    }
    Ok(Some(r))
}

/// Restricts a full configuration to D (ascending vertex order).
pub fn restrict_to(config: &SigmaConfig, d_set: &BitVec) -> BitVec {
    let d: Vec<usize> = d_set.ones();
    let mut out = BitVec::zeros(d.len());
    for (i, &v) in d.iter().enumerate() {
        if config.get(v) {
            out.set(i, true);
        }
    }
    out
}
