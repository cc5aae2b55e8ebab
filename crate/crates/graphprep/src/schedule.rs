//! Schedules: layered lists of primitive operations preparing a graph
//! state, their complexity metrics, and the JSON wire format shared by
//! the planner, the verifier, and the command line.

use crate::graph::{Graph, GraphError, LcSequence};
use crate::stabsim::{PauliLetter, PauliOperator};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Error, Debug)]
pub enum ScheduleError {
    #[error("bad schedule JSON: {0}")]
    Json(String),
    #[error("bad graph in schedule: {0}")]
    Graph(#[from] GraphError),
}

/// Reference to one outcome bit of an earlier measurement op.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeRef {
    pub op: usize,
    pub bit: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateKind {
    Cz,
    H,
    S,
    X,
    Z,
    /// The single unitary mapping the all-plus register to the target
    /// graph state (the product of its edge CZs).
    GlobalPrep,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OpKind {
    /// Fresh qubit in the +1 eigenstate of X.
    AllocPlus { qubit: usize },
    Unitary { gate: GateKind, qubits: Vec<usize> },
    /// Measurement of the Pauli product with the given letters on the
    /// given qubits (letters align with the qubit list).
    PauliMeasure {
        qubits: Vec<usize>,
        letters: Vec<PauliLetter>,
    },
    /// Z-basis measurement of one qubit.
    ComputationalMeasure { qubit: usize },
    /// Projective measurement in the basis of Pauli translates of the
    /// (complementation-prefixed) target graph state; yields one outcome
    /// bit per target vertex.
    GlobalProjMeasure { qubits: Vec<usize> },
    Discard { qubit: usize },
    /// Applies `pauli` to `qubit` iff the XOR of the referenced outcome
    /// bits is one.
    PauliCorrect {
        qubit: usize,
        pauli: PauliLetter,
        cond: Vec<OutcomeRef>,
    },
}

impl OpKind {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            OpKind::AllocPlus { qubit }
            | OpKind::ComputationalMeasure { qubit }
            | OpKind::Discard { qubit }
            | OpKind::PauliCorrect { qubit, .. } => vec![*qubit],
            OpKind::Unitary { qubits, .. }
            | OpKind::PauliMeasure { qubits, .. }
            | OpKind::GlobalProjMeasure { qubits } => qubits.clone(),
        }
    }

    /// Number of random outcome bits this op can produce (upper bound).
    pub fn outcome_bits(&self) -> usize {
        match self {
            OpKind::PauliMeasure { .. } | OpKind::ComputationalMeasure { .. } => 1,
            OpKind::GlobalProjMeasure { qubits } => qubits.len(),
            _ => 0,
        }
    }

    /// Ops that occupy a schedule layer for depth accounting. Corrections
    /// are conditioned frame updates and discards release qubits; neither
    /// consumes logical time.
    pub fn counts_for_depth(&self) -> bool {
        !matches!(self, OpKind::PauliCorrect { .. } | OpKind::Discard { .. })
    }

    /// Ops whose qubit count enters the operator-size metric.
    pub fn counts_for_size(&self) -> bool {
        matches!(
            self,
            OpKind::Unitary { .. }
                | OpKind::PauliMeasure { .. }
                | OpKind::ComputationalMeasure { .. }
                | OpKind::GlobalProjMeasure { .. }
        )
    }

    pub fn is_measurement(&self) -> bool {
        matches!(
            self,
            OpKind::PauliMeasure { .. }
                | OpKind::ComputationalMeasure { .. }
                | OpKind::GlobalProjMeasure { .. }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleOp {
    pub layer: usize,
    pub kind: OpKind,
}

/// Ancilla count, maximum operator size, and logical depth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityMetrics {
    pub n_ancilla: usize,
    pub s_max: usize,
    pub l_depth: usize,
}

/// Which of the three cost parameters a lexicographic measure compares.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CostParam {
    Ancillas,
    OpSize,
    Depth,
}

/// One of the six lexicographic orders over (N, S, L).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeasureOrder(pub [CostParam; 3]);

impl MeasureOrder {
    /// Parses compact names: "snl", "sln", "lsn", "lns", "nsl", "nls".
    pub fn parse(s: &str) -> Option<MeasureOrder> {
        let mut params = [CostParam::Ancillas; 3];
        if s.len() != 3 {
            return None;
        }
        let mut seen = [false; 3];
        for (i, c) in s.chars().enumerate() {
            let p = match c.to_ascii_lowercase() {
                'n' => CostParam::Ancillas,
                's' => CostParam::OpSize,
                'l' => CostParam::Depth,
                _ => return None,
            };
            let idx = match p {
                CostParam::Ancillas => 0,
                CostParam::OpSize => 1,
                CostParam::Depth => 2,
            };
            if seen[idx] {
                return None;
            }
            seen[idx] = true;
            params[i] = p;
        }
        Some(MeasureOrder(params))
    }

    pub fn name(&self) -> String {
        self.0
            .iter()
            .map(|p| match p {
                CostParam::Ancillas => 'n',
                CostParam::OpSize => 's',
                CostParam::Depth => 'l',
            })
            .collect()
    }

    pub fn all() -> [MeasureOrder; 6] {
        ["nsl", "nls", "snl", "sln", "lns", "lsn"].map(|s| MeasureOrder::parse(s).unwrap())
    }
}

/// Lexicographic comparison of metrics under a measure order.
pub fn compare_lex(
    a: &ComplexityMetrics,
    b: &ComplexityMetrics,
    measure: MeasureOrder,
) -> std::cmp::Ordering {
    for p in measure.0 {
        let (x, y) = match p {
            CostParam::Ancillas => (a.n_ancilla, b.n_ancilla),
            CostParam::OpSize => (a.s_max, b.s_max),
            CostParam::Depth => (a.l_depth, b.l_depth),
        };
        match x.cmp(&y) {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    std::cmp::Ordering::Equal
}

/// A preparation schedule for one target graph.
#[derive(Clone, Debug)]
pub struct Schedule {
    pub target: Graph,
    /// When nonempty, the schedule prepares the complementation-transformed
    /// graph instead of `target` (an equivalent state up to local
    /// unitaries); this sequence maps `target` to the prepared graph.
    pub lc_prefix: LcSequence,
    pub ops: Vec<ScheduleOp>,
    pub claims: ComplexityMetrics,
}

impl Schedule {
    /// The graph this schedule actually prepares.
    pub fn prepared_graph(&self) -> Result<Graph, GraphError> {
        self.target.apply_lc_sequence(&self.lc_prefix)
    }

    /// Qubit ids that must exist before the schedule starts: every id
    /// touched before (or without) an allocation op.
    pub fn initial_qubits(&self) -> Vec<usize> {
        let mut allocated = std::collections::HashSet::new();
        let mut pre = std::collections::BTreeSet::new();
        for op in self.ops_in_order() {
            if let OpKind::AllocPlus { qubit } = op.kind {
                allocated.insert(qubit);
                continue;
            }
            for q in op.kind.qubits() {
                if !allocated.contains(&q) {
                    pre.insert(q);
                }
            }
        }
        pre.into_iter().collect()
    }

    /// Ops sorted stably by layer (the execution order).
    pub fn ops_in_order(&self) -> Vec<&ScheduleOp> {
        let mut v: Vec<&ScheduleOp> = self.ops.iter().collect();
        v.sort_by_key(|op| op.layer);
        v
    }

    pub fn has_corrections(&self) -> bool {
        self.ops
            .iter()
            .any(|op| matches!(op.kind, OpKind::PauliCorrect { .. }))
    }

    /// Recomputes the metrics from the op stream.
    pub fn metrics(&self) -> ComplexityMetrics {
        let n_target = self.target.n();
        let mut live: std::collections::HashSet<usize> =
            self.initial_qubits().into_iter().collect();
        let mut peak = live.len();
        let mut s_max = 1usize;
        let mut depth_layers = std::collections::BTreeSet::new();
        for op in self.ops_in_order() {
            match &op.kind {
                OpKind::AllocPlus { qubit } => {
                    live.insert(*qubit);
                    peak = peak.max(live.len());
                }
                OpKind::Discard { qubit } => {
                    live.remove(qubit);
                }
                _ => {}
            }
            if op.kind.counts_for_size() {
                s_max = s_max.max(op.kind.qubits().len());
            }
            if op.kind.counts_for_depth() {
                depth_layers.insert(op.layer);
            }
        }
        ComplexityMetrics {
            n_ancilla: peak.saturating_sub(n_target),
            s_max,
            l_depth: depth_layers.len(),
        }
    }

    /// Depth counting only unitary/measurement layers (allocation of the
    /// initial register excluded).
    pub fn content_depth(&self) -> usize {
        self.ops
            .iter()
            .filter(|op| {
                op.kind.counts_for_depth() && !matches!(op.kind, OpKind::AllocPlus { .. })
            })
            .map(|op| op.layer)
            .collect::<std::collections::BTreeSet<_>>()
            .len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&WireSchedule::from(self)).unwrap()
    }

    pub fn from_json(text: &str) -> Result<Schedule, ScheduleError> {
        let wire: WireSchedule =
            serde_json::from_str(text).map_err(|e| ScheduleError::Json(e.to_string()))?;
        wire.try_into()
    }
}

// ---- wire format ---------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct WireSchedule {
    target: String,
    lc_prefix: Vec<usize>,
    ops: Vec<WireOp>,
    metrics: WireMetrics,
}

#[derive(Serialize, Deserialize)]
struct WireMetrics {
    n: usize,
    s: usize,
    l: usize,
}

#[derive(Serialize, Deserialize)]
struct WireOp {
    layer: usize,
    kind: String,
    qubits: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    observable: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cond: Option<Vec<(usize, usize)>>,
}

impl From<&Schedule> for WireSchedule {
    fn from(s: &Schedule) -> Self {
        let ops = s
            .ops
            .iter()
            .map(|op| {
                let (kind, qubits, observable, cond) = match &op.kind {
                    OpKind::AllocPlus { qubit } => {
                        ("alloc_plus".into(), vec![*qubit], None, None)
                    }
                    OpKind::Unitary { gate, qubits } => {
                        let name = match gate {
                            GateKind::Cz => "unitary_cz",
                            GateKind::H => "unitary_h",
                            GateKind::S => "unitary_s",
                            GateKind::X => "unitary_x",
                            GateKind::Z => "unitary_z",
                            GateKind::GlobalPrep => "unitary_global_prep",
                        };
                        (name.into(), qubits.clone(), None, None)
                    }
                    OpKind::PauliMeasure { qubits, letters } => (
                        "pauli_measure".into(),
                        qubits.clone(),
                        Some(letters.iter().map(|l| l.to_char()).collect::<String>()),
                        None,
                    ),
                    OpKind::ComputationalMeasure { qubit } => {
                        ("computational_measure".into(), vec![*qubit], None, None)
                    }
                    OpKind::GlobalProjMeasure { qubits } => {
                        ("global_proj_measure".into(), qubits.clone(), None, None)
                    }
                    OpKind::Discard { qubit } => ("discard".into(), vec![*qubit], None, None),
                    OpKind::PauliCorrect { qubit, pauli, cond } => (
                        "pauli_correct".into(),
                        vec![*qubit],
                        Some(pauli.to_char().to_string()),
                        Some(cond.iter().map(|r| (r.op, r.bit)).collect()),
                    ),
                };
                WireOp {
                    layer: op.layer,
                    kind,
                    qubits,
                    observable,
                    cond,
                }
            })
            .collect();
        WireSchedule {
            target: s.target.to_graph6(),
            lc_prefix: s.lc_prefix.clone(),
            ops,
            metrics: WireMetrics {
                n: s.claims.n_ancilla,
                s: s.claims.s_max,
                l: s.claims.l_depth,
            },
        }
    }
}

impl TryFrom<WireSchedule> for Schedule {
    type Error = ScheduleError;

    fn try_from(wire: WireSchedule) -> Result<Schedule, ScheduleError> {
        let target = Graph::parse_graph6(&wire.target)?;
        let mut ops = Vec::new();
        for (i, op) in wire.ops.into_iter().enumerate() {
            let bad = |msg: &str| ScheduleError::Json(format!("op {i}: {msg}"));
            let one_qubit = |q: &[usize]| -> Result<usize, ScheduleError> {
                if q.len() == 1 {
                    Ok(q[0])
                } else {
                    Err(bad("expected exactly one qubit"))
                }
            };
            let kind = match op.kind.as_str() {
                "alloc_plus" => OpKind::AllocPlus {
                    qubit: one_qubit(&op.qubits)?,
                },
                "unitary_cz" | "unitary_h" | "unitary_s" | "unitary_x" | "unitary_z"
                | "unitary_global_prep" => {
                    let gate = match op.kind.as_str() {
                        "unitary_cz" => GateKind::Cz,
                        "unitary_h" => GateKind::H,
                        "unitary_s" => GateKind::S,
                        "unitary_x" => GateKind::X,
                        "unitary_z" => GateKind::Z,
                        _ => GateKind::GlobalPrep,
                    };
                    if gate == GateKind::Cz && op.qubits.len() != 2 {
                        return Err(bad("controlled-Z takes two qubits"));
                    }
                    OpKind::Unitary {
                        gate,
                        qubits: op.qubits,
                    }
                }
                "pauli_measure" => {
                    let obs = op.observable.ok_or_else(|| bad("missing observable"))?;
                    let letters: Option<Vec<PauliLetter>> =
                        obs.chars().map(PauliLetter::from_char).collect();
                    let letters = letters.ok_or_else(|| bad("bad observable letters"))?;
                    if letters.len() != op.qubits.len() {
                        return Err(bad("observable length differs from qubit list"));
                    }
                    OpKind::PauliMeasure {
                        qubits: op.qubits,
                        letters,
                    }
                }
                "computational_measure" => OpKind::ComputationalMeasure {
                    qubit: one_qubit(&op.qubits)?,
                },
                "global_proj_measure" => OpKind::GlobalProjMeasure { qubits: op.qubits },
                "discard" => OpKind::Discard {
                    qubit: one_qubit(&op.qubits)?,
                },
                "pauli_correct" => {
                    let letter = op
                        .observable
                        .as_deref()
                        .and_then(|s| {
                            let mut it = s.chars();
                            match (it.next().and_then(PauliLetter::from_char), it.next()) {
                                (Some(l), None) => Some(l),
                                _ => None,
                            }
                        })
                        .ok_or_else(|| bad("correction needs a single Pauli letter"))?;
                    OpKind::PauliCorrect {
                        qubit: one_qubit(&op.qubits)?,
                        pauli: letter,
                        cond: op
                            .cond
                            .unwrap_or_default()
                            .into_iter()
                            .map(|(op, bit)| OutcomeRef { op, bit })
                            .collect(),
                    }
                }
                other => return Err(bad(&format!("unknown kind {other:?}"))),
            };
            ops.push(ScheduleOp {
                layer: op.layer,
                kind,
            });
        }
        Ok(Schedule {
            target,
            lc_prefix: wire.lc_prefix,
            ops,
            claims: ComplexityMetrics {
                n_ancilla: wire.metrics.n,
                s_max: wire.metrics.s,
                l_depth: wire.metrics.l,
            },
        })
    }
}

/// Builds the measurement observable of a PauliMeasure op over a register.
pub fn measure_observable(
    n: usize,
    qubits: &[usize],
    letters: &[PauliLetter],
) -> PauliOperator {
    let support: Vec<(usize, PauliLetter)> = qubits
        .iter()
        .copied()
        .zip(letters.iter().copied())
        .collect();
    PauliOperator::from_support(n, &support)
}
