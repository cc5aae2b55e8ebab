//! Enumeration of small graphs up to isomorphism, by vertex augmentation
//! with canonical-minimum dedup. Edge masks use the column-major pair
//! order: bit index of (i, j), i < j, is j(j-1)/2 + i.

use graphprep::Graph;
use std::collections::HashSet;

#[inline]
fn pair_bit(i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    j * (j - 1) / 2 + i
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut perms = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    heap_permute(&mut items, n, &mut perms);
    perms
}

fn heap_permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k.is_multiple_of(2) {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

fn apply_perm(mask: u64, n: usize, perm: &[usize]) -> u64 {
    let mut out = 0u64;
    let mut m = mask;
    while m != 0 {
        let bit = m.trailing_zeros() as usize;
        m &= m - 1;
        // invert pair_bit: find (i, j)
        let mut j = 1;
        while pair_bit(0, j + 1) <= bit && j + 1 < n {
            j += 1;
        }
        let i = bit - pair_bit(0, j);
        let (a, b) = (perm[i].min(perm[j]), perm[i].max(perm[j]));
        out |= 1 << pair_bit(a, b);
    }
    out
}

fn canonical(mask: u64, n: usize, perms: &[Vec<usize>]) -> u64 {
    let mut best = u64::MAX;
    for p in perms {
        let v = apply_perm(mask, n, p);
        if v < best {
            best = v;
        }
    }
    best
}

fn mask_to_graph(mask: u64, n: usize) -> Graph {
    let mut g = Graph::empty(n);
    for j in 1..n {
        for i in 0..j {
            if mask >> pair_bit(i, j) & 1 == 1 {
                g.add_edge(i, j).unwrap();
            }
        }
    }
    g
}

/// All graphs on exactly `n` vertices up to isomorphism, one canonical
/// labeled representative each.
pub fn graphs_up_to_iso(n: usize) -> Vec<Graph> {
    assert!((1..=8).contains(&n));
    let mut current: Vec<u64> = vec![0]; // the single 1-vertex graph
    for k in 1..n {
        // augment every k-vertex representative with vertex k
        let perms = permutations(k + 1);
        let mut seen = HashSet::new();
        for &mask in &current {
            for attach in 0u64..(1 << k) {
                let mut next = mask;
                for i in 0..k {
                    if attach >> i & 1 == 1 {
                        next |= 1 << pair_bit(i, k);
                    }
                }
                seen.insert(canonical(next, k + 1, &perms));
            }
        }
        let mut v: Vec<u64> = seen.into_iter().collect();
        v.sort_unstable();
        current = v;
    }
    current.into_iter().map(|m| mask_to_graph(m, n)).collect()
}

/// Connected graphs on exactly `n` vertices up to isomorphism.
pub fn connected_graphs_up_to_iso(n: usize) -> Vec<Graph> {
    graphs_up_to_iso(n)
        .into_iter()
        .filter(|g| g.is_connected())
        .collect()
}
