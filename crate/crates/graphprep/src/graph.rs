//! Undirected simple graphs over qubit vertices, with the operations the
//! rest of the toolkit is built from: local complementation, vertex
//! expansion/contraction, edge coloring, and the edge-list / graph6 formats.

use crate::bits::BitVec;
use std::collections::HashMap;
use thiserror::Error;

/// A sequence of local complementations, applied left to right.
pub type LcSequence = Vec<usize>;

#[derive(Error, Debug, PartialEq, Eq)]
pub enum GraphError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {0} out of range")]
    OutOfRange(usize),
    #[error("expansion set must be a nonempty subset of the pivot's neighborhood")]
    NotNeighbors,
    #[error("expansion set is empty")]
    EmptyR,
    #[error("{edges} edges exceeds the exact edge-coloring limit of {limit}")]
    TooLargeForExact { edges: usize, limit: usize },
}

/// Undirected simple graph; row `v` of `adj` is the characteristic vector of
/// the neighborhood of `v`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<BitVec>,
    labels: Option<Vec<String>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: (0..n).map(|_| BitVec::zeros(n)).collect(),
            labels: None,
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n);
        self.labels = Some(labels);
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        if u >= self.n {
            return Err(GraphError::OutOfRange(u));
        }
        if v >= self.n {
            return Err(GraphError::OutOfRange(v));
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.adj[u].set(v, true);
        self.adj[v].set(u, true);
        Ok(())
    }

    pub fn toggle_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.adj[u].toggle(v);
        self.adj[v].toggle(u);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && u != v && self.adj[u].get(v)
    }

    pub fn neighbors(&self, v: usize) -> &BitVec {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edges as (u, v) with u < v, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.adj[u].iter_ones() {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = BitVec::zeros(self.n);
        let mut stack = vec![0];
        seen.set(0, true);
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for u in self.adj[v].iter_ones() {
                if !seen.get(u) {
                    seen.set(u, true);
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.n
    }

    /// Component id per vertex, ids assigned in order of first discovery.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.n];
        let mut next = 0;
        for start in 0..self.n {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = next;
            while let Some(v) = stack.pop() {
                for u in self.adj[v].iter_ones() {
                    if comp[u] == usize::MAX {
                        comp[u] = next;
                        stack.push(u);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    /// Complements the edge set inside the neighborhood of `v`.
    pub fn local_complement(&self, v: usize) -> Result<Graph, GraphError> {
        if v >= self.n {
            return Err(GraphError::OutOfRange(v));
        }
        let mut g = self.clone();
        g.local_complement_in_place(v);
        Ok(g)
    }

    pub(crate) fn local_complement_in_place(&mut self, v: usize) {
        let nb = self.adj[v].clone();
        for u in nb.iter_ones() {
            self.adj[u].xor_with(&nb);
            self.adj[u].set(u, false);
        }
    }

    pub fn apply_lc_sequence(&self, seq: &[usize]) -> Result<Graph, GraphError> {
        let mut g = self.clone();
        for &v in seq {
            if v >= g.n {
                return Err(GraphError::OutOfRange(v));
            }
            g.local_complement_in_place(v);
        }
        Ok(g)
    }

    /// Splits vertex `v`: a degree-2 helper `u` keeps v connected to a new
    /// vertex `w`, and `w` takes over the edges from `v` to `r`.
    pub fn expand(&self, v: usize, r: &[usize]) -> Result<ExpansionRecord, GraphError> {
        let step = self.expand_step(v, r)?;
        let expanded = step.1;
        Ok(ExpansionRecord {
            original: self.clone(),
            expanded,
            steps: vec![step.0],
        })
    }

    fn expand_step(&self, v: usize, r: &[usize]) -> Result<(ExpansionStep, Graph), GraphError> {
        if r.is_empty() {
            return Err(GraphError::EmptyR);
        }
        if v >= self.n {
            return Err(GraphError::OutOfRange(v));
        }
        for &x in r {
            if x >= self.n {
                return Err(GraphError::OutOfRange(x));
            }
            if !self.has_edge(v, x) {
                return Err(GraphError::NotNeighbors);
            }
        }
        let u = self.n;
        let w = self.n + 1;
        let mut g = Graph::empty(self.n + 2);
        for a in 0..self.n {
            for b in self.adj[a].iter_ones() {
                if b > a {
                    g.add_edge(a, b).unwrap();
                }
            }
        }
        for &x in r {
            g.toggle_edge(v, x); // remove
            g.add_edge(w, x).unwrap();
        }
        g.add_edge(v, u).unwrap();
        g.add_edge(u, w).unwrap();
        Ok((
            ExpansionStep {
                v,
                r: r.to_vec(),
                u,
                w,
            },
            g,
        ))
    }

    /// Expands high-degree vertices until the maximum degree is at most 3.
    ///
    /// Each step peels deg(v) - 2 neighbors off the lowest-index vertex of
    /// degree > 3, dropping it to degree exactly 3; the new vertex `w`
    /// inherits the peeled edges and is handled on a later iteration.
    pub fn expand_to_max_degree_3(&self) -> ExpansionRecord {
        let mut g = self.clone();
        let mut steps = Vec::new();
        while let Some(v) = (0..g.n).find(|&v| g.degree(v) > 3) {
            let nb = g.adj[v].ones();
            // keep the two lowest-index neighbors on v, move the rest to w
            let r: Vec<usize> = nb[2..].to_vec();
            let (step, next) = g.expand_step(v, &r).expect("valid expansion step");
            steps.push(step);
            g = next;
        }
        debug_assert!(g.max_degree() <= 3);
        ExpansionRecord {
            original: self.clone(),
            expanded: g,
            steps,
        }
    }

    // ---- formats -------------------------------------------------------

    /// Parses the edge-list format: vertex count on line 1, then one
    /// `u v` pair per line, 0-indexed. Blank lines and `#` comments allowed.
    pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line_no, first) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let n: usize = first.parse().map_err(|_| GraphError::Parse {
            line: line_no,
            msg: format!("expected vertex count, got {first:?}"),
        })?;
        let mut g = Graph::empty(n);
        for (line_no, line) in lines {
            let mut it = line.split_whitespace();
            let parse_one = |tok: Option<&str>| -> Result<usize, GraphError> {
                let tok = tok.ok_or(GraphError::Parse {
                    line: line_no,
                    msg: "expected `u v`".into(),
                })?;
                tok.parse().map_err(|_| GraphError::Parse {
                    line: line_no,
                    msg: format!("bad vertex index {tok:?}"),
                })
            };
            let u = parse_one(it.next())?;
            let v = parse_one(it.next())?;
            if it.next().is_some() {
                return Err(GraphError::Parse {
                    line: line_no,
                    msg: "trailing tokens after edge".into(),
                });
            }
            if u >= n {
                return Err(GraphError::Parse {
                    line: line_no,
                    msg: format!("vertex {u} out of range (n = {n})"),
                });
            }
            if v >= n {
                return Err(GraphError::Parse {
                    line: line_no,
                    msg: format!("vertex {v} out of range (n = {n})"),
                });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Parses the standard graph6 format (short and long vertex counts).
    pub fn parse_graph6(text: &str) -> Result<Graph, GraphError> {
        let s = text.trim();
        let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
        let bytes = s.as_bytes();
        let err = |msg: &str| GraphError::Parse {
            line: 1,
            msg: msg.to_string(),
        };
        if bytes.is_empty() {
            return Err(err("empty graph6 string"));
        }
        let val = |b: u8| -> Result<u64, GraphError> {
            if !(63..=126).contains(&b) {
                return Err(err(&format!("invalid graph6 byte {b:#x}")));
            }
            Ok((b - 63) as u64)
        };
        let (n, mut pos) = if bytes[0] == b'~' {
            if bytes.len() >= 2 && bytes[1] == b'~' {
                if bytes.len() < 8 {
                    return Err(err("truncated graph6 vertex count"));
                }
                let mut n = 0u64;
                for &b in &bytes[2..8] {
                    n = (n << 6) | val(b)?;
                }
                (n as usize, 8)
            } else {
                if bytes.len() < 4 {
                    return Err(err("truncated graph6 vertex count"));
                }
                let mut n = 0u64;
                for &b in &bytes[1..4] {
                    n = (n << 6) | val(b)?;
                }
                (n as usize, 4)
            }
        } else {
            (val(bytes[0])? as usize, 1)
        };
        let bits_needed = n * n.saturating_sub(1) / 2;
        let bytes_needed = bits_needed.div_ceil(6);
        if bytes.len() - pos < bytes_needed {
            return Err(err("truncated graph6 edge data"));
        }
        let mut g = Graph::empty(n);
        let mut bit_idx = 0usize;
        let mut current = 0u64;
        let mut remaining = 0u32;
        'outer: for j in 1..n {
            for i in 0..j {
                if remaining == 0 {
                    current = val(bytes[pos])?;
                    pos += 1;
                    remaining = 6;
                }
                remaining -= 1;
                if (current >> remaining) & 1 == 1 {
                    g.add_edge(i, j).unwrap();
                }
                bit_idx += 1;
                if bit_idx == bits_needed {
                    break 'outer;
                }
            }
        }
        Ok(g)
    }

    pub fn to_graph6(&self) -> String {
        let mut out = Vec::new();
        let n = self.n as u64;
        if n <= 62 {
            out.push((n + 63) as u8);
        } else if n <= 258_047 {
            out.push(b'~');
            for shift in [12, 6, 0] {
                out.push(((n >> shift) & 63) as u8 + 63);
            }
        } else {
            out.push(b'~');
            out.push(b'~');
            for shift in [30, 24, 18, 12, 6, 0] {
                out.push(((n >> shift) & 63) as u8 + 63);
            }
        }
        let mut acc = 0u8;
        let mut nbits = 0u32;
        for j in 1..self.n {
            for i in 0..j {
                acc = (acc << 1) | u8::from(self.has_edge(i, j));
                nbits += 1;
                if nbits == 6 {
                    out.push(acc + 63);
                    acc = 0;
                    nbits = 0;
                }
            }
        }
        if nbits > 0 {
            out.push((acc << (6 - nbits)) + 63);
        }
        String::from_utf8(out).unwrap()
    }

    /// Parses either supported format.
    pub fn parse(text: &str, format: GraphFormat) -> Result<Graph, GraphError> {
        match format {
            GraphFormat::EdgeList => Graph::parse_edge_list(text),
            GraphFormat::Graph6 => Graph::parse_graph6(text),
        }
    }

    // ---- stock constructors (used by tests, CLI examples, corpora) -----

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        let mut edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        edges.push((n - 1, 0));
        Graph::from_edges(n, &edges).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        Graph::from_edges(leaves + 1, &edges).unwrap()
    }

    /// Grid with `rows * cols` vertices indexed row-major.
    pub fn grid(rows: usize, cols: usize) -> Graph {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    edges.push((v, v + 1));
                }
                if r + 1 < rows {
                    edges.push((v, v + cols));
                }
            }
        }
        Graph::from_edges(rows * cols, &edges).unwrap()
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    Graph6,
}

/// One expansion step: `v` lost its edges to `r`, which moved to the new
/// vertex `w`; `u` is the fresh degree-2 vertex between `v` and `w`.
#[derive(Clone, Debug)]
pub struct ExpansionStep {
    pub v: usize,
    pub r: Vec<usize>,
    pub u: usize,
    pub w: usize,
}

/// A sequence of expansions together with both endpoint graphs. Contracting
/// the recorded steps in reverse order recovers `original` exactly.
#[derive(Clone, Debug)]
pub struct ExpansionRecord {
    pub original: Graph,
    pub expanded: Graph,
    pub steps: Vec<ExpansionStep>,
}

impl ExpansionRecord {
    /// Applies all recorded contractions in reverse order.
    pub fn contract_all(&self) -> Graph {
        let mut g = self.expanded.clone();
        for step in self.steps.iter().rev() {
            g = contract_step(&g, step);
        }
        g
    }

    /// Ancilla pairs (u, w) in expanded-graph vertex ids.
    pub fn ancilla_pairs(&self) -> Vec<(usize, usize)> {
        self.steps.iter().map(|s| (s.u, s.w)).collect()
    }
}

fn contract_step(g: &Graph, step: &ExpansionStep) -> Graph {
    debug_assert_eq!(step.w, g.n() - 1);
    debug_assert_eq!(step.u, g.n() - 2);
    debug_assert_eq!(g.degree(step.u), 2);
    let n = g.n() - 2;
    let mut out = Graph::empty(n);
    for (a, b) in g.edges() {
        if a >= n || b >= n {
            continue;
        }
        out.add_edge(a, b).unwrap();
    }
    for x in g.neighbors(step.w).iter_ones() {
        if x != step.u {
            out.add_edge(step.v, x).unwrap();
        }
    }
    out
}

// ---- edge coloring -----------------------------------------------------

/// A proper edge coloring; colors are indices in `0..num_colors`.
#[derive(Clone, Debug)]
pub struct EdgeColoring {
    color: HashMap<(usize, usize), usize>,
    pub num_colors: usize,
}

impl EdgeColoring {
    pub fn color_of(&self, u: usize, v: usize) -> Option<usize> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.color.get(&key).copied()
    }

    /// Edges grouped by color, each group sorted.
    pub fn classes(&self) -> Vec<Vec<(usize, usize)>> {
        let mut classes = vec![Vec::new(); self.num_colors];
        for (&e, &c) in &self.color {
            classes[c].push(e);
        }
        for class in &mut classes {
            class.sort();
        }
        classes
    }

    pub fn is_proper(&self, g: &Graph) -> bool {
        if self.color.len() != g.edge_count() {
            return false;
        }
        for v in 0..g.n() {
            let mut seen = Vec::new();
            for u in g.neighbors(v).iter_ones() {
                match self.color_of(v, u) {
                    None => return false,
                    Some(c) => {
                        if seen.contains(&c) {
                            return false;
                        }
                        seen.push(c);
                    }
                }
            }
        }
        true
    }
}

pub const DEFAULT_EXACT_COLORING_LIMIT: usize = 20;

/// Proper edge coloring. With `exact` the result uses the edge chromatic
/// number (limited to small graphs); otherwise at most max_degree + 1 colors.
pub fn edge_coloring(g: &Graph, exact: bool) -> Result<EdgeColoring, GraphError> {
    edge_coloring_with_limit(g, exact, DEFAULT_EXACT_COLORING_LIMIT)
}

pub fn edge_coloring_with_limit(
    g: &Graph,
    exact: bool,
    limit: usize,
) -> Result<EdgeColoring, GraphError> {
    if exact {
        let m = g.edge_count();
        if m > limit {
            return Err(GraphError::TooLargeForExact { edges: m, limit });
        }
        Ok(exact_coloring(g))
    } else {
        Ok(vizing_coloring(g))
    }
}

/// Exact edge chromatic number: max_degree if a coloring with that many
/// colors exists, else max_degree + 1.
fn exact_coloring(g: &Graph) -> EdgeColoring {
    let m = g.edge_count();
    if m == 0 {
        return EdgeColoring {
            color: HashMap::new(),
            num_colors: 0,
        };
    }
    let delta = g.max_degree();
    // a color class is a matching of at most floor(n/2) edges
    if delta * (g.n() / 2) >= m {
        if let Some(c) = try_color(g, delta) {
            return c;
        }
    }
    try_color(g, delta + 1).expect("max_degree + 1 colors always suffice")
}

fn try_color(g: &Graph, num_colors: usize) -> Option<EdgeColoring> {
    let mut edges = g.edges();
    // most-constrained first: edges with high endpoint degrees
    edges.sort_by_key(|&(u, v)| std::cmp::Reverse(g.degree(u) + g.degree(v)));
    let mut assigned: HashMap<(usize, usize), usize> = HashMap::new();
    let mut used: Vec<Vec<bool>> = vec![vec![false; num_colors]; g.n()];

    fn go(
        idx: usize,
        edges: &[(usize, usize)],
        num_colors: usize,
        assigned: &mut HashMap<(usize, usize), usize>,
        used: &mut [Vec<bool>],
        max_used: usize,
    ) -> bool {
        let Some(&(u, v)) = edges.get(idx) else {
            return true;
        };
        // symmetry break: never open more than one fresh color at a time
        let cap = num_colors.min(max_used + 1);
        for c in 0..cap {
            if used[u][c] || used[v][c] {
                continue;
            }
            used[u][c] = true;
            used[v][c] = true;
            assigned.insert((u, v), c);
            let next_max = max_used.max(c + 1);
            if go(idx + 1, edges, num_colors, assigned, used, next_max) {
                return true;
            }
            assigned.remove(&(u, v));
            used[u][c] = false;
            used[v][c] = false;
        }
        false
    }

    if go(0, &edges, num_colors, &mut assigned, &mut used, 0) {
        let num = assigned.values().copied().max().map_or(0, |c| c + 1);
        Some(EdgeColoring {
            color: assigned,
            num_colors: num,
        })
    } else {
        None
    }
}

/// Misra-Gries style coloring with at most max_degree + 1 colors.
fn vizing_coloring(g: &Graph) -> EdgeColoring {
    let n = g.n();
    let palette = g.max_degree() + 1;
    if g.edge_count() == 0 {
        return EdgeColoring {
            color: HashMap::new(),
            num_colors: 0,
        };
    }
    // col[v][u] = color of edge (v,u) or usize::MAX
    let mut col = vec![vec![usize::MAX; n]; n];
    let free_set = |col: &Vec<Vec<usize>>, v: usize| -> Vec<bool> {
        let mut f = vec![true; palette];
        for u in g.neighbors(v).iter_ones() {
            if col[v][u] != usize::MAX {
                f[col[v][u]] = false;
            }
        }
        f
    };

    let mut edges = g.edges();
    edges.sort_by_key(|&(u, v)| std::cmp::Reverse(g.degree(u) + g.degree(v)));

    for &(u, v) in &edges {
        // maximal fan of u starting at the uncolored edge (u, v)
        let mut fan = vec![v];
        let mut in_fan = vec![false; n];
        in_fan[v] = true;
        loop {
            let last = *fan.last().unwrap();
            let f_last = free_set(&col, last);
            let mut ext = None;
            for x in g.neighbors(u).iter_ones() {
                if !in_fan[x] && col[u][x] != usize::MAX && f_last[col[u][x]] {
                    ext = Some(x);
                    break;
                }
            }
            match ext {
                Some(x) => {
                    fan.push(x);
                    in_fan[x] = true;
                }
                None => break,
            }
        }
        let c = free_set(&col, u)
            .iter()
            .position(|&b| b)
            .expect("palette has a color free at u");
        let d = free_set(&col, *fan.last().unwrap())
            .iter()
            .position(|&b| b)
            .expect("palette has a color free at the fan end");

        if c != d {
            // invert the cd-path starting at u (colors alternate d, c, ...);
            // afterwards d is free at u
            let (mut prev, mut cur, mut want) = (usize::MAX, u, d);
            loop {
                let mut next = None;
                for x in g.neighbors(cur).iter_ones() {
                    if x != prev && col[cur][x] == want {
                        next = Some(x);
                        break;
                    }
                }
                let Some(nx) = next else { break };
                let new = if col[cur][nx] == d { c } else { d };
                col[cur][nx] = new;
                col[nx][cur] = new;
                prev = cur;
                cur = nx;
                want = if want == d { c } else { d };
            }
        }

        // rotate the fan prefix ending at the first vertex with d free
        let w_idx = fan
            .iter()
            .position(|&x| free_set(&col, x)[d])
            .expect("some fan vertex has d free");
        for i in 0..w_idx {
            let ci = col[u][fan[i + 1]];
            col[u][fan[i]] = ci;
            col[fan[i]][u] = ci;
        }
        let w = fan[w_idx];
        col[u][w] = d;
        col[w][u] = d;
    }

    let mut map = HashMap::new();
    let mut max_c = 0;
    for (u, v) in g.edges() {
        let c = col[u][v];
        debug_assert_ne!(c, usize::MAX);
        map.insert((u, v), c);
        max_c = max_c.max(c + 1);
    }
    let coloring = EdgeColoring {
        color: map,
        num_colors: max_c,
    };
    debug_assert!(coloring.is_proper(g));
    coloring
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c4() -> Graph {
        Graph::cycle(4)
    }

    fn random_graph(rng: &mut StdRng, n: usize, p: f64) -> Graph {
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

    #[test]
    fn parse_edge_list_c4() {
        let g = Graph::parse_edge_list("4\n0 1\n1 2\n2 3\n3 0").unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.neighbors(0).ones(), vec![1, 3]);
        assert_eq!(g.neighbors(1).ones(), vec![0, 2]);
        assert_eq!(g.neighbors(2).ones(), vec![1, 3]);
        assert_eq!(g.neighbors(3).ones(), vec![0, 2]);
        assert_eq!(g, c4());
    }

    #[test]
    fn parse_edge_list_single_vertex() {
        let g = Graph::parse_edge_list("1").unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn parse_edge_list_duplicates_collapse() {
        let g = Graph::parse_edge_list("3\n0 1\n1 0\n0 1").unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn parse_edge_list_errors() {
        assert!(matches!(
            Graph::parse_edge_list("2\n0 0"),
            Err(GraphError::SelfLoop(0))
        ));
        assert!(matches!(
            Graph::parse_edge_list("x"),
            Err(GraphError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Graph::parse_edge_list("2\n0 5"),
            Err(GraphError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Graph::parse_edge_list("2\n0"),
            Err(GraphError::Parse { line: 2, .. })
        ));
    }

    // graph6 golden strings generated with an independent reference
    // implementation of the published format.
    #[test]
    fn graph6_goldens() {
        let cases: Vec<(Graph, &str)> = vec![
            (c4(), "Cl"),
            (Graph::empty(1), "@"),
            (Graph::complete(2), "A_"),
            (Graph::path(3), "Bg"),
            (Graph::complete(5), "D~{"),
            (Graph::star(4), "Ds_"),
            (Graph::grid(2, 3), "EkSg"),
            (Graph::empty(5), "D??"),
        ];
        for (g, s) in cases {
            assert_eq!(g.to_graph6(), s);
            assert_eq!(Graph::parse_graph6(s).unwrap(), g);
        }
        // Petersen graph
        let pet = Graph::from_edges(
            10,
            &[
                (0, 1),
                (0, 4),
                (0, 5),
                (1, 2),
                (1, 6),
                (2, 3),
                (2, 7),
                (3, 4),
                (3, 8),
                (4, 9),
                (5, 7),
                (5, 8),
                (6, 8),
                (6, 9),
                (7, 9),
            ],
        )
        .unwrap();
        assert_eq!(pet.to_graph6(), "IheA@GUAo");
    }

    #[test]
    fn graph6_long_form_count() {
        let p70 = Graph::path(70);
        let s = p70.to_graph6();
        assert!(s.starts_with("~?@E"));
        assert_eq!(Graph::parse_graph6(&s).unwrap(), p70);
    }

    #[test]
    fn graph6_round_trip_random() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.gen_range(0..14);
            let g = random_graph(&mut rng, n, 0.4);
            assert_eq!(Graph::parse_graph6(&g.to_graph6()).unwrap(), g);
            assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
        }
    }

    #[test]
    fn local_complement_c4_adds_chord() {
        // complement at vertex 0: neighbors {1, 3} become adjacent
        let g = c4().local_complement(0).unwrap();
        assert!(g.has_edge(1, 3));
        assert_eq!(g.edge_count(), 5);
        for (u, v) in c4().edges() {
            assert!(g.has_edge(u, v));
        }
    }

    #[test]
    fn local_complement_low_degree_is_identity() {
        let g = Graph::path(3);
        assert_eq!(g.local_complement(0).unwrap(), g); // degree 1
        let h = Graph::empty(2);
        assert_eq!(h.local_complement(1).unwrap(), h); // degree 0
    }

    #[test]
    fn local_complement_is_involution() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(1..=10);
            let g = random_graph(&mut rng, n, 0.5);
            let v = rng.gen_range(0..n);
            assert_eq!(
                g.local_complement(v).unwrap().local_complement(v).unwrap(),
                g
            );
        }
    }

    #[test]
    fn local_complement_preserves_components() {
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..100 {
            let n = rng.gen_range(2..=9);
            let g = random_graph(&mut rng, n, 0.3);
            let v = rng.gen_range(0..n);
            assert_eq!(
                g.component_labels(),
                g.local_complement(v).unwrap().component_labels()
            );
        }
    }

    #[test]
    fn lc_sequence_basics() {
        let g = c4();
        assert_eq!(g.apply_lc_sequence(&[]).unwrap(), g);
        assert_eq!(g.apply_lc_sequence(&[2, 2]).unwrap(), g);
        assert_eq!(
            g.apply_lc_sequence(&[0]).unwrap(),
            g.local_complement(0).unwrap()
        );
        assert!(matches!(
            g.apply_lc_sequence(&[9]),
            Err(GraphError::OutOfRange(9))
        ));
    }

    #[test]
    fn expand_star() {
        // star center 0 with 4 leaves, peel two leaves
        let g = Graph::star(4);
        let rec = g.expand(0, &[1, 2]).unwrap();
        let e = &rec.expanded;
        assert_eq!(e.n(), 7);
        assert_eq!(e.degree(0), 3); // leaves 3,4 + u
        assert_eq!(e.degree(5), 2); // u
        assert_eq!(e.degree(6), 3); // w: leaves 1,2 + u
        assert_eq!(rec.contract_all(), g);
    }

    #[test]
    fn expand_c4_single_neighbor_gives_c6() {
        // moving one neighbor of a degree-2 vertex yields the 6-cycle
        // 0, u, w, 1, 2, 3
        let g = c4();
        let rec = g.expand(0, &[1]).unwrap();
        let e = &rec.expanded;
        assert_eq!(e.n(), 6);
        assert_eq!(e.edge_count(), 6);
        assert!((0..6).all(|v| e.degree(v) == 2));
        assert!(e.is_connected());
        assert_eq!(rec.contract_all(), g);
    }

    #[test]
    fn expand_c4_both_neighbors() {
        // enumerating the edge formula: v keeps only the edge to u
        let g = c4();
        let rec = g.expand(0, &[1, 3]).unwrap();
        let e = &rec.expanded;
        assert_eq!(e.n(), 6);
        assert_eq!(
            e.edges(),
            vec![(0, 4), (1, 2), (1, 5), (2, 3), (3, 5), (4, 5)]
        );
        assert_eq!(e.degree(0), 2 - (2 - 1)); // deg(v) drops by |r| - 1
        assert_eq!(e.degree(4), 2); // u
        assert_eq!(e.degree(5), 3); // w: |r| + 1
        assert_eq!(rec.contract_all(), g);
    }

    #[test]
    fn expand_errors() {
        let g = c4();
        assert!(matches!(g.expand(0, &[]), Err(GraphError::EmptyR)));
        assert!(matches!(g.expand(0, &[2]), Err(GraphError::NotNeighbors)));
    }

    #[test]
    fn expand_contract_round_trip_random() {
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..100 {
            let n = rng.gen_range(2..=9);
            let g = random_graph(&mut rng, n, 0.5);
            let Some(v) = (0..n).find(|&v| g.degree(v) >= 1) else {
                continue;
            };
            let nb = g.neighbors(v).ones();
            let take = rng.gen_range(1..=nb.len());
            let rec = g.expand(v, &nb[..take]).unwrap();
            assert_eq!(rec.contract_all(), g);
        }
    }

    #[test]
    fn expand_to_max_degree_3_examples() {
        let rec = c4().expand_to_max_degree_3();
        assert!(rec.steps.is_empty());
        assert_eq!(rec.expanded, c4());

        let k5 = Graph::complete(5);
        let rec = k5.expand_to_max_degree_3();
        assert!(rec.expanded.max_degree() <= 3);
        assert_eq!(rec.contract_all(), k5);

        // star: center degree d needs d - 3 steps
        for d in 4..=8 {
            let s = Graph::star(d);
            let rec = s.expand_to_max_degree_3();
            assert_eq!(rec.steps.len(), d - 3);
            assert!(rec.expanded.max_degree() <= 3);
            assert_eq!(rec.contract_all(), s);
        }
    }

    #[test]
    fn edge_coloring_exact_small() {
        let c = edge_coloring(&c4(), true).unwrap();
        assert_eq!(c.num_colors, 2);
        assert!(c.is_proper(&c4()));

        let k3 = Graph::complete(3);
        let c = edge_coloring(&k3, true).unwrap();
        assert_eq!(c.num_colors, 3);
        assert!(c.is_proper(&k3));

        // odd clique: exact is max_degree + 1
        let k5 = Graph::complete(5);
        let c = edge_coloring(&k5, true).unwrap();
        assert_eq!(c.num_colors, 5);
    }

    #[test]
    fn edge_coloring_greedy_bound() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..60 {
            let n = rng.gen_range(2..=8);
            let g = random_graph(&mut rng, n, 0.5);
            let c = edge_coloring(&g, false).unwrap();
            assert!(c.is_proper(&g), "improper coloring for {g:?}");
            assert!(
                c.num_colors <= g.max_degree() + 1,
                "{} colors for max degree {}",
                c.num_colors,
                g.max_degree()
            );
            if g.edge_count() <= DEFAULT_EXACT_COLORING_LIMIT {
                let ex = edge_coloring(&g, true).unwrap();
                assert!(ex.is_proper(&g));
                assert!(ex.num_colors <= c.num_colors);
            }
        }
    }

    #[test]
    fn edge_coloring_exact_limit() {
        let k8 = Graph::complete(8); // 28 edges
        assert!(matches!(
            edge_coloring(&k8, true),
            Err(GraphError::TooLargeForExact { edges: 28, .. })
        ));
    }
}
