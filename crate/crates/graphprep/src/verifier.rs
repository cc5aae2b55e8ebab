//! Schedule verification: replays every op through the stabilizer
//! simulator over exhaustively enumerated or sampled measurement-outcome
//! branches and certifies Pauli equivalence with the prepared graph state,
//! layer legality, and the claimed metrics.
//!
//! Schedules that carry outcome-conditioned corrections claim exact
//! preparation, so for them the residual Pauli must be the identity;
//! schedules without corrections are accepted up to a Pauli.

use crate::graph::Graph;
use crate::schedule::{ComplexityMetrics, GateKind, OpKind, Schedule, ScheduleOp};
use crate::stabsim::{PauliLetter, PauliOperator, SimError, StabilizerState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Error, Debug)]
pub enum VerifyError {
    #[error("schedule is malformed: {0}")]
    Malformed(String),
    #[error("exhaustive verification needs at most {limit} random outcomes")]
    Budget { limit: usize },
}

#[derive(Clone, Copy, Debug)]
pub enum VerifyMode {
    Exhaustive,
    Sampled { seed: u64, count: usize },
}

pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 20;
pub const DEFAULT_SAMPLE_COUNT: usize = 64;

#[derive(Clone, Debug, Serialize)]
pub struct BranchFailure {
    pub branch: String,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub ok: bool,
    pub branches_checked: usize,
    pub exhaustive: bool,
    pub correction_examples: Vec<CorrectionExample>,
    pub measured_metrics: ComplexityMetrics,
    pub failures: Vec<BranchFailure>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrectionExample {
    pub branch: String,
    pub correction: String,
}

const MAX_RECORDED: usize = 8;

pub fn verify(schedule: &Schedule, mode: VerifyMode) -> Result<VerificationReport, VerifyError> {
    verify_with_limit(schedule, mode, DEFAULT_EXHAUSTIVE_LIMIT)
}

pub fn verify_with_limit(
    schedule: &Schedule,
    mode: VerifyMode,
    exhaustive_limit: usize,
) -> Result<VerificationReport, VerifyError> {
    let prepared = schedule
        .prepared_graph()
        .map_err(|e| VerifyError::Malformed(format!("bad complementation prefix: {e}")))?;
    let mut failures = Vec::new();
    let mut examples = Vec::new();

    if !layers_sorted(&schedule.ops) {
        return Err(VerifyError::Malformed(
            "ops are not sorted by layer".into(),
        ));
    }
    if !verify_layer_disjointness(schedule) {
        failures.push(BranchFailure {
            branch: String::new(),
            reason: "a layer contains ops on overlapping qubits".into(),
        });
    }
    let measured_metrics = schedule.metrics();
    if measured_metrics != schedule.claims {
        failures.push(BranchFailure {
            branch: String::new(),
            reason: format!(
                "claimed metrics {:?} differ from measured {:?}",
                schedule.claims, measured_metrics
            ),
        });
    }

    let exact_required = schedule.has_corrections();
    let mut branches_checked = 0usize;
    let exhaustive = matches!(mode, VerifyMode::Exhaustive);

    match mode {
        VerifyMode::Exhaustive => {
            let mut runner = Runner {
                schedule,
                prepared: &prepared,
                exact_required,
                exhaustive_limit,
                branches_checked: &mut branches_checked,
                failures: &mut failures,
                examples: &mut examples,
            };
            let init = ExecState::new(schedule);
            runner.run_exhaustive(init, 0, 0)?;
        }
        VerifyMode::Sampled { seed, count } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..count {
                let mut state = ExecState::new(schedule);
                let outcome_of = |_bits: usize, rng: &mut ChaCha8Rng| rng.gen_bool(0.5);
                let result = run_single(
                    schedule,
                    &prepared,
                    &mut state,
                    &mut |r| outcome_of(r, &mut rng),
                    exact_required,
                );
                branches_checked += 1;
                record(result, &state, &mut failures, &mut examples);
            }
        }
    }

    let ok = failures.is_empty();
    Ok(VerificationReport {
        ok,
        branches_checked,
        exhaustive,
        correction_examples: examples,
        measured_metrics,
        failures,
    })
}

/// True iff within every layer the ops touch pairwise disjoint qubit sets.
pub fn verify_layer_disjointness(schedule: &Schedule) -> bool {
    use std::collections::HashMap;
    let mut layers: HashMap<usize, std::collections::HashSet<usize>> = HashMap::new();
    for op in &schedule.ops {
        let used = layers.entry(op.layer).or_default();
        for q in op.kind.qubits() {
            if !used.insert(q) {
                return false;
            }
        }
    }
    true
}

fn layers_sorted(ops: &[ScheduleOp]) -> bool {
    ops.windows(2).all(|w| w[0].layer <= w[1].layer)
}

// ---- execution --------------------------------------------------------------

#[derive(Clone)]
struct ExecState {
    sim: StabilizerState,
    /// schedule qubit id -> simulator column
    map: Vec<Option<usize>>,
    /// outcome bits per op index
    outcomes: Vec<Vec<bool>>,
    /// chronological random-outcome bits identifying the branch
    branch_bits: Vec<bool>,
}

impl ExecState {
    fn new(schedule: &Schedule) -> Self {
        let initial = schedule.initial_qubits();
        let max_id = schedule
            .ops
            .iter()
            .flat_map(|op| op.kind.qubits())
            .max()
            .map_or(0, |q| q + 1);
        let mut map = vec![None; max_id.max(schedule.target.n())];
        // pre-existing qubits start in an arbitrary state; the convention
        // here is |0...0>, and robustness against other inputs is covered
        // by Pauli-scrambling tests
        let sim = StabilizerState::zeros(initial.len());
        for (col, q) in initial.iter().enumerate() {
            map[*q] = Some(col);
        }
        ExecState {
            sim,
            map,
            outcomes: vec![Vec::new(); schedule.ops.len()],
            branch_bits: Vec::new(),
        }
    }

    fn branch_id(&self) -> String {
        self.branch_bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }

    fn col(&self, q: usize) -> Result<usize, String> {
        self.map
            .get(q)
            .copied()
            .flatten()
            .ok_or_else(|| format!("qubit {q} is not live"))
    }
}

struct Runner<'a> {
    schedule: &'a Schedule,
    prepared: &'a Graph,
    exact_required: bool,
    exhaustive_limit: usize,
    branches_checked: &'a mut usize,
    failures: &'a mut Vec<BranchFailure>,
    examples: &'a mut Vec<CorrectionExample>,
}

impl Runner<'_> {
    /// Depth-first over random outcomes; `sub` indexes into a global
    /// projective measurement's per-vertex sub-measurements.
    fn run_exhaustive(
        &mut self,
        mut state: ExecState,
        op_idx: usize,
        sub: usize,
    ) -> Result<(), VerifyError> {
        let mut idx = op_idx;
        let mut sub_idx = sub;
        loop {
            if idx == self.schedule.ops.len() {
                *self.branches_checked += 1;
                let result = finish_branch(self.schedule, self.prepared, &mut state, self.exact_required);
                record(result, &state, self.failures, self.examples);
                return Ok(());
            }
            match step(self.schedule, self.prepared, &mut state, idx, sub_idx) {
                StepOutcome::Advance => {
                    idx += 1;
                    sub_idx = 0;
                }
                StepOutcome::SubAdvance => {
                    sub_idx += 1;
                }
                StepOutcome::NeedsOutcome => {
                    if state.branch_bits.len() >= self.exhaustive_limit {
                        return Err(VerifyError::Budget {
                            limit: self.exhaustive_limit,
                        });
                    }
                    let next = advance_past_measurement(self.schedule, idx, sub_idx);
                    for bit in [false, true] {
                        let mut forked = state.clone();
                        forked.branch_bits.push(bit);
                        inject(self.schedule, &mut forked, idx, sub_idx, bit);
                        self.run_exhaustive(forked, next.0, next.1)?;
                    }
                    return Ok(());
                }
                StepOutcome::Failed(reason) => {
                    *self.branches_checked += 1;
                    record(Err(reason), &state, self.failures, self.examples);
                    return Ok(());
                }
            }
        }
    }
}

fn run_single(
    schedule: &Schedule,
    prepared: &Graph,
    state: &mut ExecState,
    draw: &mut impl FnMut(usize) -> bool,
    exact_required: bool,
) -> Result<Option<String>, String> {
    let mut idx = 0;
    let mut sub = 0;
    while idx < schedule.ops.len() {
        match step(schedule, prepared, state, idx, sub) {
            StepOutcome::Advance => {
                idx += 1;
                sub = 0;
            }
            StepOutcome::SubAdvance => {
                sub += 1;
            }
            StepOutcome::NeedsOutcome => {
                let bit = draw(state.branch_bits.len());
                state.branch_bits.push(bit);
                inject(schedule, state, idx, sub, bit);
                let next = advance_past_measurement(schedule, idx, sub);
                idx = next.0;
                sub = next.1;
            }
            StepOutcome::Failed(reason) => return Err(reason),
        }
    }
    finish_branch(schedule, prepared, state, exact_required)
}

/// Position after the measurement at (op, sub) completes.
fn advance_past_measurement(schedule: &Schedule, idx: usize, sub: usize) -> (usize, usize) {
    match &schedule.ops[idx].kind {
        OpKind::GlobalProjMeasure { .. } => (idx, sub + 1),
        _ => (idx + 1, 0),
    }
}

enum StepOutcome {
    Advance,
    SubAdvance,
    NeedsOutcome,
    Failed(String),
}

/// Executes op `idx` (sub-measurement `sub` of a global projection). On a
/// random measurement without an injected outcome, requests one.
fn step(
    schedule: &Schedule,
    prepared: &Graph,
    state: &mut ExecState,
    idx: usize,
    sub: usize,
) -> StepOutcome {
    let op = &schedule.ops[idx];
    let fail = |e: String| StepOutcome::Failed(format!("op {idx}: {e}"));
    match &op.kind {
        OpKind::AllocPlus { qubit } => {
            if state.map.get(*qubit).copied().flatten().is_some() {
                return fail(format!("qubit {qubit} already live"));
            }
            let col = state.sim.alloc_plus();
            if *qubit >= state.map.len() {
                state.map.resize(qubit + 1, None);
            }
            state.map[*qubit] = Some(col);
            StepOutcome::Advance
        }
        OpKind::Unitary { gate, qubits } => {
            let res = (|| -> Result<(), String> {
                match gate {
                    GateKind::Cz => {
                        if qubits.len() != 2 {
                            return Err("controlled-Z needs two qubits".into());
                        }
                        let a = state.col(qubits[0])?;
                        let b = state.col(qubits[1])?;
                        state.sim.apply_cz(a, b).map_err(|e| e.to_string())
                    }
                    GateKind::GlobalPrep => {
                        for (u, v) in prepared.edges() {
                            let a = state.col(u)?;
                            let b = state.col(v)?;
                            state.sim.apply_cz(a, b).map_err(|e| e.to_string())?;
                        }
                        Ok(())
                    }
                    g => {
                        if qubits.len() != 1 {
                            return Err("single-qubit gate needs one qubit".into());
                        }
                        let q = state.col(qubits[0])?;
                        let gate = match g {
                            GateKind::H => crate::stabsim::LocalGate::H,
                            GateKind::S => crate::stabsim::LocalGate::S,
                            GateKind::X => crate::stabsim::LocalGate::X,
                            GateKind::Z => crate::stabsim::LocalGate::Z,
                            _ => unreachable!(),
                        };
                        state.sim.apply_gate(gate, q).map_err(|e| e.to_string())
                    }
                }
            })();
            match res {
                Ok(()) => StepOutcome::Advance,
                Err(e) => fail(e),
            }
        }
        OpKind::PauliMeasure { qubits, letters } => {
            let obs = match mapped_observable(state, qubits, letters) {
                Ok(o) => o,
                Err(e) => return fail(e),
            };
            measure_step(state, &obs, idx)
        }
        OpKind::ComputationalMeasure { qubit } => {
            let col = match state.col(*qubit) {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            let obs =
                PauliOperator::from_support(state.sim.n(), &[(col, PauliLetter::Z)]);
            measure_step(state, &obs, idx)
        }
        OpKind::GlobalProjMeasure { qubits } => {
            if sub == qubits.len() {
                return StepOutcome::Advance;
            }
            // sub-measurement `sub`: the generator of vertex qubits[sub]
            // of the prepared graph state
            let v = qubits[sub];
            if v >= prepared.n() {
                return fail(format!("projective basis has no vertex {v}"));
            }
            let mut support = vec![(v, PauliLetter::X)];
            for k in prepared.neighbors(v).iter_ones() {
                support.push((k, PauliLetter::Z));
            }
            let (qs, ls): (Vec<usize>, Vec<PauliLetter>) = support.into_iter().unzip();
            let obs = match mapped_observable(state, &qs, &ls) {
                Ok(o) => o,
                Err(e) => return fail(e),
            };
            match state.sim.measure_pauli(&obs, None) {
                Ok(r) => {
                    state.outcomes[idx].push(r.minus);
                    StepOutcome::SubAdvance
                }
                Err(SimError::OutcomeNeeded) => StepOutcome::NeedsOutcome,
                Err(e) => fail(e.to_string()),
            }
        }
        OpKind::Discard { qubit } => {
            let col = match state.col(*qubit) {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            match state.sim.discard(col) {
                Ok(()) => {
                    state.map[*qubit] = None;
                    for slot in state.map.iter_mut().flatten() {
                        if *slot > col {
                            *slot -= 1;
                        }
                    }
                    StepOutcome::Advance
                }
                Err(e) => fail(e.to_string()),
            }
        }
        OpKind::PauliCorrect { qubit, pauli, cond } => {
            let mut flip = false;
            for r in cond {
                if r.op >= idx {
                    return fail(format!("correction references later op {}", r.op));
                }
                match state.outcomes[r.op].get(r.bit) {
                    Some(&b) => flip ^= b,
                    None => return fail(format!("no outcome bit {} on op {}", r.bit, r.op)),
                }
            }
            if flip {
                let col = match state.col(*qubit) {
                    Ok(c) => c,
                    Err(e) => return fail(e),
                };
                let obs = PauliOperator::from_support(state.sim.n(), &[(col, *pauli)]);
                if let Err(e) = state.sim.apply_pauli(&obs) {
                    return fail(e.to_string());
                }
            }
            StepOutcome::Advance
        }
    }
}

fn measure_step(state: &mut ExecState, obs: &PauliOperator, idx: usize) -> StepOutcome {
    match state.sim.measure_pauli(obs, None) {
        Ok(r) => {
            state.outcomes[idx].push(r.minus);
            StepOutcome::Advance
        }
        Err(SimError::OutcomeNeeded) => StepOutcome::NeedsOutcome,
        Err(e) => StepOutcome::Failed(e.to_string()),
    }
}

/// Feeds a chosen outcome into the pending random measurement of op `idx`.
fn inject(schedule: &Schedule, state: &mut ExecState, idx: usize, sub: usize, bit: bool) {
    let op = &schedule.ops[idx];
    let obs = match &op.kind {
        OpKind::PauliMeasure { qubits, letters } => {
            mapped_observable(state, qubits, letters).expect("checked by step")
        }
        OpKind::ComputationalMeasure { qubit } => {
            let col = state.col(*qubit).expect("checked by step");
            PauliOperator::from_support(state.sim.n(), &[(col, PauliLetter::Z)])
        }
        OpKind::GlobalProjMeasure { qubits } => {
            let v = qubits[sub];
            let prepared = schedule.prepared_graph().expect("checked by verify");
            let mut support = vec![(v, PauliLetter::X)];
            for k in prepared.neighbors(v).iter_ones() {
                support.push((k, PauliLetter::Z));
            }
            let (qs, ls): (Vec<usize>, Vec<PauliLetter>) = support.into_iter().unzip();
            mapped_observable(state, &qs, &ls).expect("checked by step")
        }
        _ => unreachable!("only measurements request outcomes"),
    };
    let r = state
        .sim
        .measure_pauli(&obs, Some(bit))
        .expect("random measurement accepts either outcome");
    state.outcomes[idx].push(r.minus);
}

fn mapped_observable(
    state: &ExecState,
    qubits: &[usize],
    letters: &[PauliLetter],
) -> Result<PauliOperator, String> {
    let mut support = Vec::with_capacity(qubits.len());
    for (&q, &l) in qubits.iter().zip(letters) {
        support.push((state.col(q)?, l));
    }
    Ok(PauliOperator::from_support(state.sim.n(), &support))
}

/// End-of-branch checks: exactly the target register must survive, and the
/// state must be Pauli-equivalent (exactly equal, for corrected schedules)
/// to the prepared graph state. Returns the correction display.
fn finish_branch(
    schedule: &Schedule,
    prepared: &Graph,
    state: &mut ExecState,
    exact_required: bool,
) -> Result<Option<String>, String> {
    let n = schedule.target.n();
    if state.sim.n() != n {
        return Err(format!(
            "{} qubits remain live, expected the {} target vertices",
            state.sim.n(),
            n
        ));
    }
    for v in 0..n {
        match state.map.get(v).copied().flatten() {
            Some(col) if col == v => {}
            Some(col) => {
                // relabel columns so vertex v sits at column v
                return Err(format!("target vertex {v} ended at column {col}"));
            }
            None => return Err(format!("target vertex {v} is not live")),
        }
    }
    let corr = state
        .sim
        .pauli_equivalent_to(prepared)
        .map_err(|e| e.to_string())?;
    match corr {
        None => Err("final state is not Pauli-equivalent to the target".into()),
        Some(c) if exact_required && !c.is_identity() => Err(format!(
            "residual Pauli {} left by a schedule that claims exact corrections",
            c.as_operator()
        )),
        Some(c) => Ok(Some(c.as_operator().to_string())),
    }
}

fn record(
    result: Result<Option<String>, String>,
    state: &ExecState,
    failures: &mut Vec<BranchFailure>,
    examples: &mut Vec<CorrectionExample>,
) {
    match result {
        Ok(Some(correction)) => {
            if examples.len() < MAX_RECORDED {
                examples.push(CorrectionExample {
                    branch: state.branch_id(),
                    correction,
                });
            }
        }
        Ok(None) => {}
        Err(reason) => {
            if failures.len() < MAX_RECORDED * 4 {
                failures.push(BranchFailure {
                    branch: state.branch_id(),
                    reason,
                });
            }
        }
    }
}
