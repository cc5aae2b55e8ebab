//! Stabilizer tableau simulator: graph states, the Clifford gates the
//! planners emit, Pauli measurements with outcome injection, qubit
//! discards, and the Pauli-equivalence check used as the acceptance
//! predicate for schedules.
//!
//! Internal phase convention: an operator is i^phase * X^x * Z^z with the
//! X block written before the Z block; phase is tracked mod 4 and exposed
//! generators are always Hermitian with sign +/-1.

use crate::bits::BitVec;
use crate::gf2::Gf2Matrix;
use crate::graph::Graph;
use thiserror::Error;

#[derive(Error, Debug, PartialEq, Eq)]
pub enum SimError {
    #[error("qubit {0} out of range")]
    OutOfRange(usize),
    #[error("a controlled-Z needs two distinct qubits")]
    SameQubit,
    #[error("operator acts on {0} qubits but the state has {1}")]
    SizeMismatch(usize, usize),
    #[error("cannot force a deterministic outcome to its opposite")]
    ForcedImpossible,
    #[error("a random measurement outcome was needed but none was supplied")]
    OutcomeNeeded,
    #[error("qubit {0} is still entangled and cannot be discarded")]
    StillEntangled(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub fn bits(self) -> (bool, bool) {
        match self {
            PauliLetter::I => (false, false),
            PauliLetter::X => (true, false),
            PauliLetter::Y => (true, true),
            PauliLetter::Z => (false, true),
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(PauliLetter::I),
            'X' => Some(PauliLetter::X),
            'Y' => Some(PauliLetter::Y),
            'Z' => Some(PauliLetter::Z),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }
}

/// A signed Pauli product over a fixed register.
#[derive(Clone, PartialEq, Eq)]
pub struct PauliOperator {
    x: BitVec,
    z: BitVec,
    phase: u8, // exponent of i, mod 4
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        PauliOperator {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
            phase: 0,
        }
    }

    pub fn from_masks(x: BitVec, z: BitVec) -> Self {
        debug_assert_eq!(x.len(), z.len());
        // phase chosen so every (1,1) position reads as +Y
        let phase = (x.clone_and_count(&z) % 4) as u8;
        PauliOperator { x, z, phase }
    }

    /// Builds an operator from per-qubit letters, sign +1.
    pub fn from_support(n: usize, support: &[(usize, PauliLetter)]) -> Self {
        let mut x = BitVec::zeros(n);
        let mut z = BitVec::zeros(n);
        for &(q, letter) in support {
            let (xb, zb) = letter.bits();
            x.set(q, xb);
            z.set(q, zb);
        }
        PauliOperator::from_masks(x, z)
    }

    /// Parses strings like "XZIZ" or "-XZIZ" / "+YdI".
    pub fn parse(s: &str) -> Option<Self> {
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let letters: Option<Vec<PauliLetter>> = body.chars().map(PauliLetter::from_char).collect();
        let letters = letters?;
        let support: Vec<(usize, PauliLetter)> = letters.iter().copied().enumerate().collect();
        let mut p = PauliOperator::from_support(letters.len(), &support);
        if neg {
            p.phase = (p.phase + 2) % 4;
        }
        Some(p)
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x_mask(&self) -> &BitVec {
        &self.x
    }

    pub fn z_mask(&self) -> &BitVec {
        &self.z
    }

    pub fn letter(&self, q: usize) -> PauliLetter {
        match (self.x.get(q), self.z.get(q)) {
            (false, false) => PauliLetter::I,
            (true, false) => PauliLetter::X,
            (true, true) => PauliLetter::Y,
            (false, true) => PauliLetter::Z,
        }
    }

    pub fn is_identity_up_to_sign(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    fn y_count(&self) -> usize {
        self.x.clone_and_count(&self.z)
    }

    pub fn is_hermitian(&self) -> bool {
        (self.phase as usize).wrapping_sub(self.y_count()).is_multiple_of(2)
    }

    /// Sign of a Hermitian operator: +1 or -1.
    pub fn sign(&self) -> i8 {
        debug_assert!(self.is_hermitian());
        let t = (self.phase as usize + 4 - self.y_count() % 4) % 4;
        if t == 0 {
            1
        } else {
            -1
        }
    }

    pub fn negate(&mut self) {
        self.phase = (self.phase + 2) % 4;
    }

    pub fn commutes_with(&self, other: &PauliOperator) -> bool {
        self.x.dot(&other.z) == self.z.dot(&other.x)
    }

    /// self * other, tracking the i exponent exactly.
    pub fn mul(&self, other: &PauliOperator) -> PauliOperator {
        debug_assert_eq!(self.n(), other.n());
        let mut x = self.x.clone();
        x.xor_with(&other.x);
        let mut z = self.z.clone();
        z.xor_with(&other.z);
        // moving self's Z block across other's X block
        let crossings = self.z.clone_and_count(&other.x);
        PauliOperator {
            x,
            z,
            phase: ((self.phase as usize + other.phase as usize + 2 * crossings) % 4) as u8,
        }
    }

    /// Number of qubits acted on nontrivially.
    pub fn weight(&self) -> usize {
        let mut m = self.x.clone();
        m.or_with(&self.z);
        m.count_ones()
    }

    pub fn support(&self) -> Vec<usize> {
        let mut m = self.x.clone();
        m.or_with(&self.z);
        m.ones()
    }
}

impl std::fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", if self.sign() >= 0 { '+' } else { '-' })?;
        for q in 0..self.n() {
            write!(f, "{}", self.letter(q).to_char())?;
        }
        Ok(())
    }
}

impl std::fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

/// A single Pauli product acting as a correction between two states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliCorrection {
    pub x: BitVec,
    pub z: BitVec,
}

impl PauliCorrection {
    pub fn identity(n: usize) -> Self {
        PauliCorrection {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn as_operator(&self) -> PauliOperator {
        PauliOperator::from_masks(self.x.clone(), self.z.clone())
    }
}

/// Outcome of a Pauli measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeasResult {
    /// Measured eigenvalue: false for +1, true for -1.
    pub minus: bool,
    /// True when the observable was already (up to sign) in the stabilizer.
    pub deterministic: bool,
}

impl MeasResult {
    pub fn eigenvalue(&self) -> i8 {
        if self.minus {
            -1
        } else {
            1
        }
    }
}

/// An n-qubit stabilizer state given by n independent commuting generators.
#[derive(Clone)]
pub struct StabilizerState {
    gens: Vec<PauliOperator>,
}

/// Equality of the stabilizer groups (signs included), not of the
/// particular generator lists presenting them.
impl PartialEq for StabilizerState {
    fn eq(&self, other: &Self) -> bool {
        if self.n() != other.n() {
            return false;
        }
        // both groups have 2^n elements, so one-sided containment suffices
        other.gens.iter().all(|g| {
            self.group_decomposition(g)
                .is_some_and(|p| p.phase == g.phase)
        })
    }
}

impl Eq for StabilizerState {}

impl StabilizerState {
    /// |0...0>
    pub fn zeros(n: usize) -> Self {
        let gens = (0..n)
            .map(|q| PauliOperator::from_support(n, &[(q, PauliLetter::Z)]))
            .collect();
        StabilizerState { gens }
    }

    /// |+...+>
    pub fn plus(n: usize) -> Self {
        let gens = (0..n)
            .map(|q| PauliOperator::from_support(n, &[(q, PauliLetter::X)]))
            .collect();
        StabilizerState { gens }
    }

    pub fn n(&self) -> usize {
        self.gens.len()
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.gens
    }

    /// The state stabilized by { X_v Z_N(v) } for the given graph.
    pub fn graph_state(g: &Graph) -> Self {
        let n = g.n();
        let gens = (0..n)
            .map(|v| {
                let mut x = BitVec::zeros(n);
                x.set(v, true);
                PauliOperator::from_masks(x, g.neighbors(v).clone())
            })
            .collect();
        let s = StabilizerState { gens };
        s.debug_check();
        s
    }

    fn debug_check(&self) {
        #[cfg(debug_assertions)]
        {
            let n = self.n();
            for g in &self.gens {
                assert_eq!(g.n(), n);
                assert!(g.is_hermitian(), "non-Hermitian generator {g}");
            }
            for i in 0..n {
                for j in i + 1..n {
                    assert!(
                        self.gens[i].commutes_with(&self.gens[j]),
                        "generators {i} and {j} anticommute"
                    );
                }
            }
            // independence: the (x|z) mask matrix has full rank
            let rows: Vec<BitVec> = self.gens.iter().map(concat_masks).collect();
            assert_eq!(Gf2Matrix::from_rows(rows, 2 * n).rank(), n);
        }
    }

    pub fn apply_h(&mut self, q: usize) -> Result<(), SimError> {
        self.check_qubit(q)?;
        for g in &mut self.gens {
            let (xb, zb) = (g.x.get(q), g.z.get(q));
            if xb && zb {
                g.phase = (g.phase + 2) % 4;
            }
            g.x.set(q, zb);
            g.z.set(q, xb);
        }
        self.debug_check();
        Ok(())
    }

    pub fn apply_s(&mut self, q: usize) -> Result<(), SimError> {
        self.check_qubit(q)?;
        for g in &mut self.gens {
            if g.x.get(q) {
                g.z.toggle(q);
                g.phase = (g.phase + 1) % 4;
            }
        }
        self.debug_check();
        Ok(())
    }

    pub fn apply_x(&mut self, q: usize) -> Result<(), SimError> {
        self.check_qubit(q)?;
        for g in &mut self.gens {
            if g.z.get(q) {
                g.phase = (g.phase + 2) % 4;
            }
        }
        Ok(())
    }

    pub fn apply_z(&mut self, q: usize) -> Result<(), SimError> {
        self.check_qubit(q)?;
        for g in &mut self.gens {
            if g.x.get(q) {
                g.phase = (g.phase + 2) % 4;
            }
        }
        Ok(())
    }

    pub fn apply_gate(&mut self, gate: LocalGate, q: usize) -> Result<(), SimError> {
        match gate {
            LocalGate::H => self.apply_h(q),
            LocalGate::S => self.apply_s(q),
            LocalGate::X => self.apply_x(q),
            LocalGate::Z => self.apply_z(q),
        }
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) -> Result<(), SimError> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(SimError::SameQubit);
        }
        for g in &mut self.gens {
            let (xa, xb) = (g.x.get(a), g.x.get(b));
            if xa && xb {
                g.phase = (g.phase + 2) % 4;
            }
            if xa {
                g.z.toggle(b);
            }
            if xb {
                g.z.toggle(a);
            }
        }
        self.debug_check();
        Ok(())
    }

    /// Conjugates every generator by an (unsigned) Pauli product.
    pub fn apply_pauli(&mut self, p: &PauliOperator) -> Result<(), SimError> {
        if p.n() != self.n() {
            return Err(SimError::SizeMismatch(p.n(), self.n()));
        }
        for g in &mut self.gens {
            if !g.commutes_with(p) {
                g.phase = (g.phase + 2) % 4;
            }
        }
        Ok(())
    }

    fn check_qubit(&self, q: usize) -> Result<(), SimError> {
        if q < self.n() {
            Ok(())
        } else {
            Err(SimError::OutOfRange(q))
        }
    }

    /// Measures a Hermitian Pauli observable.
    ///
    /// Deterministic outcomes ignore `forced` unless it contradicts them.
    /// Random outcomes take `forced`, or fail with `OutcomeNeeded`: the
    /// state never owns randomness, callers inject it.
    pub fn measure_pauli(
        &mut self,
        obs: &PauliOperator,
        forced: Option<bool>,
    ) -> Result<MeasResult, SimError> {
        if obs.n() != self.n() {
            return Err(SimError::SizeMismatch(obs.n(), self.n()));
        }
        debug_assert!(obs.is_hermitian());
        let anti: Vec<usize> = (0..self.n())
            .filter(|&i| !self.gens[i].commutes_with(obs))
            .collect();
        if anti.is_empty() {
            // observable is in the group up to sign
            let product = self
                .group_decomposition(obs)
                .expect("commuting observable decomposes over the generators");
            debug_assert_eq!(product.x, obs.x);
            debug_assert_eq!(product.z, obs.z);
            let diff = (product.phase + 4 - obs.phase) % 4;
            debug_assert!(diff.is_multiple_of(2), "phase difference must be real");
            let minus = diff == 2;
            if let Some(f) = forced {
                if f != minus {
                    return Err(SimError::ForcedImpossible);
                }
            }
            return Ok(MeasResult {
                minus,
                deterministic: true,
            });
        }
        let minus = forced.ok_or(SimError::OutcomeNeeded)?;
        let pivot = anti[0];
        let pivot_gen = self.gens[pivot].clone();
        for &i in &anti[1..] {
            self.gens[i] = pivot_gen.mul(&self.gens[i]);
        }
        let mut new_gen = obs.clone();
        if minus {
            new_gen.negate();
        }
        self.gens[pivot] = new_gen;
        self.debug_check();
        Ok(MeasResult {
            minus,
            deterministic: false,
        })
    }

    /// Expresses `target` (up to phase) as a product of generators; returns
    /// the exact product or None when the masks are not in the row space.
    fn group_decomposition(&self, target: &PauliOperator) -> Option<PauliOperator> {
        let n = self.n();
        let rows: Vec<BitVec> = self.gens.iter().map(concat_masks).collect();
        let m = Gf2Matrix::from_rows(rows, 2 * n).transpose();
        let coeffs = m.solve(&concat_masks(target)).expect("dimensions agree")?;
        let mut product = PauliOperator::identity(n);
        for i in coeffs.iter_ones() {
            product = product.mul(&self.gens[i]);
        }
        Some(product)
    }

    /// Z-basis measurement of one qubit.
    pub fn measure_z(&mut self, q: usize, forced: Option<bool>) -> Result<MeasResult, SimError> {
        self.check_qubit(q)?;
        let obs = PauliOperator::from_support(self.n(), &[(q, PauliLetter::Z)]);
        self.measure_pauli(&obs, forced)
    }

    /// X-basis measurement of one qubit.
    pub fn measure_x(&mut self, q: usize, forced: Option<bool>) -> Result<MeasResult, SimError> {
        self.check_qubit(q)?;
        let obs = PauliOperator::from_support(self.n(), &[(q, PauliLetter::X)]);
        self.measure_pauli(&obs, forced)
    }

    /// Appends a fresh qubit in |+>.
    pub fn alloc_plus(&mut self) -> usize {
        let q = self.n();
        for g in &mut self.gens {
            g.x.push_bit();
            g.z.push_bit();
        }
        let mut x = BitVec::zeros(q + 1);
        x.set(q, true);
        self.gens.push(PauliOperator {
            x,
            z: BitVec::zeros(q + 1),
            phase: 0,
        });
        self.debug_check();
        q
    }

    /// Removes a disentangled qubit from the register.
    ///
    /// The stabilizer group must contain a generator supported on `q`
    /// alone (any sign, any letter); otherwise the qubit is entangled.
    pub fn discard(&mut self, q: usize) -> Result<(), SimError> {
        self.check_qubit(q)?;
        let n = self.n();
        // find a group element supported only on q: kernel of the
        // outside-of-q mask matrix (columns = generators)
        let outside_rows: Vec<BitVec> = self
            .gens
            .iter()
            .map(|g| {
                let mut m = BitVec::zeros(2 * (n - 1));
                let mut k = 0;
                for i in 0..n {
                    if i == q {
                        continue;
                    }
                    m.set(k, g.x.get(i));
                    m.set(n - 1 + k, g.z.get(i));
                    k += 1;
                }
                m
            })
            .collect();
        let m = Gf2Matrix::from_rows(outside_rows, 2 * (n - 1)).transpose();
        let kernel = m.nullspace();
        let combo = kernel
            .iter()
            .find(|c| !c.is_zero())
            .ok_or(SimError::StillEntangled(q))?;
        let mut isolated = PauliOperator::identity(n);
        for i in combo.iter_ones() {
            isolated = isolated.mul(&self.gens[i]);
        }
        debug_assert!(isolated.support() == vec![q], "kernel element must be local");
        let pivot = combo.first_one().unwrap();
        self.gens[pivot] = isolated.clone();
        // clear q from every other generator
        for i in 0..n {
            if i == pivot {
                continue;
            }
            if self.gens[i].x.get(q) || self.gens[i].z.get(q) {
                self.gens[i] = isolated.mul(&self.gens[i]);
            }
        }
        self.gens.remove(pivot);
        for g in &mut self.gens {
            g.x.remove_bit(q);
            g.z.remove_bit(q);
        }
        self.debug_check();
        Ok(())
    }

    /// X-measures each recorded ancilla pair and discards them, realizing
    /// a graph contraction on the state. Outcomes come from `outcome`.
    pub fn contract_by_x_measurements(
        &mut self,
        pairs: &[(usize, usize)],
        mut outcome: impl FnMut() -> bool,
    ) -> Result<Vec<(MeasResult, MeasResult)>, SimError> {
        let mut results = Vec::new();
        for &(u, w) in pairs {
            let ru = self.measure_x_with(u, &mut outcome)?;
            let rw = self.measure_x_with(w, &mut outcome)?;
            results.push((ru, rw));
        }
        let mut discard_order: Vec<usize> = pairs.iter().flat_map(|&(u, w)| [u, w]).collect();
        discard_order.sort_unstable_by(|a, b| b.cmp(a));
        for q in discard_order {
            self.discard(q)?;
        }
        Ok(results)
    }

    fn measure_x_with(
        &mut self,
        q: usize,
        outcome: &mut impl FnMut() -> bool,
    ) -> Result<MeasResult, SimError> {
        match self.measure_x(q, None) {
            Ok(r) => Ok(r),
            Err(SimError::OutcomeNeeded) => self.measure_x(q, Some(outcome())),
            Err(e) => Err(e),
        }
    }

    /// Decides Pauli equivalence with the graph state of `g`; on success
    /// returns the correction P with P(state) = |g>, identity when the
    /// state is exactly |g>.
    pub fn pauli_equivalent_to(&self, g: &Graph) -> Result<Option<PauliCorrection>, SimError> {
        let n = self.n();
        if g.n() != n {
            return Err(SimError::SizeMismatch(g.n(), n));
        }
        let mut rows = self.gens.clone();
        // full elimination on the X block
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
        let mut rank = 0;
        for col in 0..n {
            let Some(r) = (rank..n).find(|&r| rows[r].x.get(col)) else {
                continue;
            };
            rows.swap(rank, r);
            let pivot_row = rows[rank].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != rank && row.x.get(col) {
                    *row = pivot_row.mul(row);
                }
            }
            pivots.push((rank, col));
            rank += 1;
        }
        if rank < n {
            return Ok(None); // X block singular: not a graph state's group
        }
        // reorder rows so row v has X exactly on v
        let mut ordered: Vec<Option<PauliOperator>> = vec![None; n];
        for &(r, c) in &pivots {
            ordered[c] = Some(rows[r].clone());
        }
        let mut signs = BitVec::zeros(n);
        for (v, slot) in ordered.iter().enumerate() {
            let gen = slot.as_ref().unwrap();
            // X mask must be exactly e_v and Z mask the neighborhood row
            let mut expect_x = BitVec::zeros(n);
            expect_x.set(v, true);
            if gen.x != expect_x || gen.z != *g.neighbors(v) {
                return Ok(None);
            }
            if gen.sign() < 0 {
                signs.set(v, true);
            }
        }
        // find P with <P, g_v> = sign bit: rows are [z_v | x_v]
        let sys_rows: Vec<BitVec> = (0..n)
            .map(|v| {
                let mut row = BitVec::zeros(2 * n);
                for j in g.neighbors(v).iter_ones() {
                    row.set(j, true);
                }
                row.set(n + v, true);
                row
            })
            .collect();
        let system = Gf2Matrix::from_rows(sys_rows, 2 * n);
        let sol = system
            .solve(&signs)
            .expect("dimensions agree")
            .expect("the symplectic form is nondegenerate");
        let mut px = BitVec::zeros(n);
        let mut pz = BitVec::zeros(n);
        for i in sol.iter_ones() {
            if i < n {
                px.set(i, true);
            } else {
                pz.set(i - n, true);
            }
        }
        Ok(Some(PauliCorrection { x: px, z: pz }))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalGate {
    H,
    S,
    X,
    Z,
}

impl std::fmt::Display for StabilizerState {
    /// One generator per line in sign-plus-letters form, e.g. "+XZIZ".
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl std::fmt::Debug for StabilizerState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

fn concat_masks(p: &PauliOperator) -> BitVec {
    let n = p.n();
    let mut row = BitVec::zeros(2 * n);
    for i in p.x_mask().iter_ones() {
        row.set(i, true);
    }
    for i in p.z_mask().iter_ones() {
        row.set(n + i, true);
    }
    row
}
