//! Minimal degree under local complementation.
//!
//! The central quantity is delta_loc(G): the smallest minimum degree over
//! the orbit of G under local complementations. It is characterized by
//! locally evenly seen sets, computed exactly by an exponential subset
//! sweep, certified by a witness, and cross-checkable against a
//! breadth-first orbit search.

use crate::bits::BitVec;
use crate::gf2::Gf2Matrix;
use crate::graph::{Graph, LcSequence};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Error, Debug, PartialEq, Eq)]
pub enum LocminError {
    #[error("witness sets must satisfy K ⊆ D ⊆ V with K nonempty")]
    BadNesting,
    #[error("witness invariant fails: some vertex outside D sees K oddly")]
    InvalidWitness,
    #[error("graph has {n} vertices, above the exact search limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("orbit budget of {limit} graphs exceeded")]
    Budget { limit: usize },
}

pub const DEFAULT_EXACT_LIMIT: usize = 24;
pub const DEFAULT_ORBIT_LIMIT: usize = 2_000_000;

/// True iff every vertex outside `d_set` has an even number of neighbors
/// in `d_set`.
pub fn is_evenly_seen(g: &Graph, d_set: &BitVec) -> bool {
    debug_assert_eq!(d_set.len(), g.n());
    (0..g.n())
        .filter(|&u| !d_set.get(u))
        .all(|u| !g.neighbors(u).dot(d_set))
}

/// True iff every vertex outside `d_set` has an even number of neighbors
/// in `k_set` (with K ⊆ D required).
pub fn is_locally_evenly_seen(
    g: &Graph,
    k_set: &BitVec,
    d_set: &BitVec,
) -> Result<bool, LocminError> {
    if k_set.is_zero() || !k_set.is_subset_of(d_set) || d_set.len() != g.n() {
        return Err(LocminError::BadNesting);
    }
    Ok((0..g.n())
        .filter(|&u| !d_set.get(u))
        .all(|u| !g.neighbors(u).dot(k_set)))
}

/// A pair (K, D) certifying that K is a |D|-locally evenly seen set.
/// Construction checks the defining parity condition.
#[derive(Clone, Debug)]
pub struct EvenlySeenWitness {
    k_set: BitVec,
    d_set: BitVec,
}

impl EvenlySeenWitness {
    pub fn new(g: &Graph, k_set: BitVec, d_set: BitVec) -> Result<Self, LocminError> {
        if !is_locally_evenly_seen(g, &k_set, &d_set)? {
            return Err(LocminError::InvalidWitness);
        }
        Ok(EvenlySeenWitness { k_set, d_set })
    }

    pub fn k_set(&self) -> &BitVec {
        &self.k_set
    }

    pub fn d_set(&self) -> &BitVec {
        &self.d_set
    }

    pub fn d(&self) -> usize {
        self.d_set.count_ones()
    }
}

/// Runs the constructive degree-reduction loop: while the minimum degree
/// exceeds |D| - 1, either complement at a K-vertex seeing K oddly (and
/// drop it from K), or first complement at an outside neighbor of a
/// K-vertex to make its parity odd.
///
/// Returns at most 2|K| complementations; applying them to `g` yields a
/// graph of minimum degree at most |D| - 1.
pub fn reduce_degree(g: &Graph, witness: &EvenlySeenWitness) -> Result<LcSequence, LocminError> {
    // revalidate against this graph
    if !is_locally_evenly_seen(g, &witness.k_set, &witness.d_set)? {
        return Err(LocminError::InvalidWitness);
    }
    let n = g.n();
    let d = witness.d();
    let mut graph = g.clone();
    let mut k = witness.k_set.clone();
    let d_set = &witness.d_set;
    let mut seq = Vec::new();
    let budget = 2 * k.count_ones() + 1;

    while graph.min_degree() + 1 > d {
        debug_assert!(seq.len() < budget, "reduction exceeded the 2|K| bound");
        // a K-vertex with odd neighborhood parity inside K can be removed
        let odd_v = (0..n).find(|&v| k.get(v) && graph.neighbors(v).dot(&k));
        if let Some(v) = odd_v {
            graph.local_complement_in_place(v);
            k.set(v, false);
            seq.push(v);
            continue;
        }
        // otherwise flip the parity of some K-vertex by complementing at
        // one of its neighbors outside D (one exists while δ > |D| - 1)
        let mut found = None;
        'outer: for v in 0..n {
            if !k.get(v) {
                continue;
            }
            for u in graph.neighbors(v).iter_ones() {
                if !d_set.get(u) {
                    found = Some(u);
                    break 'outer;
                }
            }
        }
        let u = found.expect("in-loop K-vertices always have a neighbor outside D");
        graph.local_complement_in_place(u);
        seq.push(u);
    }
    Ok(seq)
}

/// Exact minimal degree under local complementation, with a certifying
/// witness and the reduction sequence realizing it.
#[derive(Clone, Debug)]
pub struct DeltaLocResult {
    pub value: usize,
    pub witness: EvenlySeenWitness,
    pub reduction: LcSequence,
}

pub fn delta_loc(g: &Graph) -> Result<DeltaLocResult, LocminError> {
    delta_loc_with_limit(g, DEFAULT_EXACT_LIMIT)
}

/// Sweeps every nonempty K ⊆ V in Gray-code order, maintaining per-vertex
/// parity counters, and maximizes the number of outside vertices that see
/// K evenly. delta_loc = n - 1 - that maximum.
pub fn delta_loc_with_limit(g: &Graph, limit: usize) -> Result<DeltaLocResult, LocminError> {
    let n = g.n();
    if n > limit || n >= 64 {
        return Err(LocminError::TooLarge {
            n,
            limit: limit.min(63),
        });
    }
    if n == 0 {
        // vacuous graph: value 0 with an empty-world witness is meaningless;
        // treat the empty graph as already minimal
        let k = BitVec::zeros(0);
        let d = BitVec::zeros(0);
        return Ok(DeltaLocResult {
            value: 0,
            witness: EvenlySeenWitness { k_set: k, d_set: d },
            reduction: Vec::new(),
        });
    }
    let rows: Vec<u64> = (0..n).map(|v| g.neighbors(v).as_u64()).collect();
    let full: u64 = if n == 63 { !0 >> 1 } else { (1u64 << n) - 1 };

    let mut best_count = 0usize;
    let mut best_k = 0u64;
    let mut k_mask = 0u64; // current subset
    let mut parity = 0u64; // bit v: |N(v) ∩ K| mod 2

    // Gray-code walk over all nonempty subsets
    let total = 1u64 << n;
    let mut prev_gray = 0u64;
    for i in 1..total {
        let gray = i ^ (i >> 1);
        let changed = gray ^ prev_gray;
        prev_gray = gray;
        let v = changed.trailing_zeros() as usize;
        k_mask ^= changed;
        parity ^= rows[v];

        let evens_outside = (!parity & !k_mask & full).count_ones() as usize;
        if evens_outside > best_count || (evens_outside == best_count && best_k == 0) {
            best_count = evens_outside;
            best_k = k_mask;
        }
    }

    let value = n - 1 - best_count;

    // D is forced: K plus the outside vertices seeing K oddly
    let mut parity_best = 0u64;
    let mut mask = best_k;
    while mask != 0 {
        let v = mask.trailing_zeros() as usize;
        parity_best ^= rows[v];
        mask &= mask - 1;
    }
    let d_mask = best_k | (parity_best & !best_k & full);
    debug_assert_eq!(d_mask.count_ones() as usize, value + 1);

    let k_set = BitVec::from_indices(n, &ones_of(best_k));
    let d_set = BitVec::from_indices(n, &ones_of(d_mask));
    let witness = EvenlySeenWitness::new(g, k_set, d_set)?;
    let reduction = reduce_degree(g, &witness)?;
    debug_assert!(g.apply_lc_sequence(&reduction).unwrap().min_degree() <= value);
    Ok(DeltaLocResult {
        value,
        witness,
        reduction,
    })
}

fn ones_of(mut mask: u64) -> Vec<usize> {
    let mut out = Vec::new();
    while mask != 0 {
        out.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    out
}

// ---- orbit search --------------------------------------------------------

/// Compact orbit key: adjacency rows packed 8 bits per vertex for n <= 8,
/// otherwise the row words concatenated.
#[derive(Clone, PartialEq, Eq, Hash)]
enum OrbitKey {
    Small(u64),
    Large(Vec<u64>),
}

fn orbit_key(g: &Graph) -> OrbitKey {
    let n = g.n();
    if n <= 8 {
        let mut k = 0u64;
        for v in 0..n {
            k |= g.neighbors(v).as_u64() << (8 * v);
        }
        OrbitKey::Small(k)
    } else {
        let mut words = Vec::new();
        for v in 0..n {
            words.extend_from_slice(g.neighbors(v).words());
        }
        OrbitKey::Large(words)
    }
}

/// The orbit of a labeled graph under local complementation, with a
/// complementation sequence from the seed to each member.
pub struct Orbit {
    members: Vec<Graph>,
    index: HashMap<OrbitKey, usize>,
    // per member: (parent index, complemented vertex); the seed has none
    parent: Vec<Option<(usize, usize)>>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member(&self, i: usize) -> &Graph {
        &self.members[i]
    }

    pub fn members(&self) -> &[Graph] {
        &self.members
    }

    pub fn position(&self, g: &Graph) -> Option<usize> {
        self.index.get(&orbit_key(g)).copied()
    }

    pub fn contains(&self, g: &Graph) -> bool {
        self.position(g).is_some()
    }

    /// Complementation sequence transforming the seed into member `i`.
    pub fn path_to(&self, i: usize) -> LcSequence {
        let mut seq = Vec::new();
        let mut cur = i;
        while let Some((par, v)) = self.parent[cur] {
            seq.push(v);
            cur = par;
        }
        seq.reverse();
        seq
    }
}

pub fn lc_orbit(g: &Graph) -> Result<Orbit, LocminError> {
    lc_orbit_with_limit(g, DEFAULT_ORBIT_LIMIT)
}

pub fn lc_orbit_with_limit(g: &Graph, limit: usize) -> Result<Orbit, LocminError> {
    let n = g.n();
    let mut members = vec![g.clone()];
    let mut parent = vec![None];
    let mut index = HashMap::new();
    index.insert(orbit_key(g), 0);
    let mut head = 0;
    while head < members.len() {
        for v in 0..n {
            if members[head].degree(v) < 2 {
                continue; // identity move
            }
            let next = members[head].local_complement(v).unwrap();
            let key = orbit_key(&next);
            if let std::collections::hash_map::Entry::Vacant(e) = index.entry(key) {
                if members.len() >= limit {
                    return Err(LocminError::Budget { limit });
                }
                e.insert(members.len());
                parent.push(Some((head, v)));
                members.push(next);
            }
        }
        head += 1;
    }
    Ok(Orbit {
        members,
        index,
        parent,
    })
}

/// Minimum degree over the whole orbit, found by exhaustive breadth-first
/// search. Independent of the subset-sweep computation; used as its oracle.
pub fn delta_loc_orbit_min(g: &Graph, limit: usize) -> Result<usize, LocminError> {
    let n = g.n();
    if n == 0 {
        return Ok(0);
    }
    if n <= 8 {
        return delta_loc_orbit_min_small(g, limit);
    }
    let orbit = lc_orbit_with_limit(g, limit)?;
    Ok(orbit
        .members()
        .iter()
        .map(|m| m.min_degree())
        .min()
        .unwrap())
}

/// Fast path with packed u64 keys; avoids materializing Graph values.
fn delta_loc_orbit_min_small(g: &Graph, limit: usize) -> Result<usize, LocminError> {
    let n = g.n();
    let pack = |rows: &[u8; 8]| -> u64 {
        let mut k = 0u64;
        for (v, &r) in rows.iter().enumerate() {
            k |= (r as u64) << (8 * v);
        }
        k
    };
    let mut rows = [0u8; 8];
    for v in 0..n {
        rows[v] = g.neighbors(v).as_u64() as u8;
    }
    let min_deg = |rows: &[u8; 8]| -> usize {
        (0..n)
            .map(|v| rows[v].count_ones() as usize)
            .min()
            .unwrap()
    };
    let mut best = min_deg(&rows);
    let mut seen = std::collections::HashSet::new();
    seen.insert(pack(&rows));
    let mut queue = vec![rows];
    let mut head = 0;
    while head < queue.len() {
        let cur = queue[head];
        head += 1;
        for v in 0..n {
            let nb = cur[v];
            if nb.count_ones() < 2 {
                continue;
            }
            let mut next = cur;
            let mut mask = nb;
            while mask != 0 {
                let u = mask.trailing_zeros() as usize;
                mask &= mask - 1;
                next[u] ^= nb & !(1 << u);
            }
            let key = pack(&next);
            if seen.insert(key) {
                if seen.len() > limit {
                    return Err(LocminError::Budget { limit });
                }
                best = best.min(min_deg(&next));
                queue.push(next);
            }
        }
    }
    Ok(best)
}

// ---- edge chromatic number over the orbit ---------------------------------

/// Minimal exact edge chromatic number over the orbit, plus a
/// complementation sequence reaching a graph achieving it.
pub fn chi_prime_loc(g: &Graph, orbit_limit: usize) -> Result<(usize, LcSequence), LocminError> {
    let orbit = lc_orbit_with_limit(g, orbit_limit)?;
    let mut best: Option<(usize, usize)> = None; // (chi', member index)
    for (i, member) in orbit.members().iter().enumerate() {
        let m = member.edge_count();
        let coloring = crate::graph::edge_coloring_with_limit(member, true, m)
            .expect("limit set to the edge count");
        let chi = coloring.num_colors;
        if best.is_none_or(|(b, _)| chi < b) {
            best = Some((chi, i));
        }
        if chi <= 1 {
            break; // cannot improve on 0 or 1 (0 only for edgeless)
        }
    }
    let (chi, idx) = best.expect("orbit is nonempty");
    Ok((chi, orbit.path_to(idx)))
}

/// The adjacency-rank upper bound: delta_loc(G) <= min(floor(n/2), rank(A)).
pub fn delta_loc_rank_bound(g: &Graph) -> usize {
    let n = g.n();
    let rows: Vec<BitVec> = (0..n).map(|v| g.neighbors(v).clone()).collect();
    let rank = Gf2Matrix::from_rows(rows, n).rank();
    (n / 2).min(rank)
}

/// Checks the rank bound; a false return signals an implementation bug.
pub fn rank_bound_holds(g: &Graph) -> Result<bool, LocminError> {
    let dl = delta_loc(g)?;
    Ok(dl.value <= delta_loc_rank_bound(g))
}
