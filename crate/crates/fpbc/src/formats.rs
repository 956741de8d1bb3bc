//! JSON and CSV file formats. Mode indices in files are 1-based.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use fpbc_core::braid::{BraidFactor, BraidWord};
use fpbc_core::circuit::{FermionicCircuit, Gate};
use fpbc_core::compiler::execute::FpbcProgram;
use fpbc_core::compiler::passes::{StaticProgram, Step};
use fpbc_core::compiler::sequence::{Event, MeasurementOp, Origin, Registers, Sequence};
use fpbc_core::compiler::{compile_branch, CompileError};
use fpbc_core::dense::Distribution;
use fpbc_core::device::{DeltaEps, DeviceParams, TriJunctionCouplings};
use fpbc_core::gf2::SignedRelation;
use fpbc_core::layout::{Island, IslandConfig, LadderLayout, Node, Plate, ReadoutOperator};
use fpbc_core::majorana::MajoranaString;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("stored program does not match its recompilation: {0}")]
    Tampered(String),
}

impl FormatError {
    fn invalid(path: impl Into<String>, message: impl ToString) -> Self {
        FormatError::Invalid {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

/// Deserialize with the JSON path of the first schema violation.
pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, FormatError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| FormatError::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn default_sector() -> i8 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitFile {
    pub n: usize,
    pub t: usize,
    #[serde(default = "default_sector")]
    pub parity_sector: i8,
    pub gates: Vec<GateRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GateRecord {
    Braid { string: String, angle: i8 },
    T2 { a: usize, b: usize },
}

impl CircuitFile {
    pub fn of(c: &FermionicCircuit) -> Self {
        CircuitFile {
            n: c.n,
            t: c.t,
            parity_sector: c.parity_sector,
            gates: c
                .gates
                .iter()
                .map(|g| match g {
                    Gate::Braid { string, quarter_turns } => GateRecord::Braid {
                        string: string.to_string(),
                        angle: *quarter_turns,
                    },
                    Gate::T2 { a, b } => GateRecord::T2 { a: a + 1, b: b + 1 },
                })
                .collect(),
        }
    }

    /// Parse strings and convert indices; the circuit invariants are checked separately.
    pub fn to_circuit(&self) -> Result<FermionicCircuit, FormatError> {
        let modes = 2 * self.n + 2;
        let gates = self
            .gates
            .iter()
            .enumerate()
            .map(|(i, g)| match g {
                GateRecord::Braid { string, angle } => Ok(Gate::Braid {
                    string: MajoranaString::parse(string, modes)
                        .map_err(|e| FormatError::invalid(format!("gates[{i}].string"), e))?,
                    quarter_turns: *angle,
                }),
                GateRecord::T2 { a, b } => {
                    let idx = |v: usize, f: &str| {
                        v.checked_sub(1)
                            .ok_or_else(|| FormatError::invalid(format!("gates[{i}].{f}"), "mode indices start at 1"))
                    };
                    Ok(Gate::T2 {
                        a: idx(*a, "a")?,
                        b: idx(*b, "b")?,
                    })
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(FermionicCircuit {
            n: self.n,
            t: self.t,
            parity_sector: self.parity_sector,
            gates,
        })
    }
}

/// Parse and validate a circuit file.
pub fn parse_circuit(text: &str) -> Result<FermionicCircuit, FormatError> {
    let c = from_json::<CircuitFile>(text)?.to_circuit()?;
    if let Some(d) = c.validate().first() {
        let path = d.gate.map_or_else(|| "$".to_string(), |g| format!("gates[{g}]"));
        return Err(FormatError::invalid(path, d));
    }
    Ok(c)
}

pub fn circuit_json(c: &FermionicCircuit) -> String {
    to_json(&CircuitFile::of(c))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorRecord {
    pub string: String,
    pub angle_quarter_turns: i8,
}

pub fn word_records(w: &BraidWord) -> Vec<FactorRecord> {
    w.factors
        .iter()
        .map(|f| FactorRecord {
            string: f.generator().to_string(),
            angle_quarter_turns: f.quarter_turns(),
        })
        .collect()
}

pub fn parse_word(text: &str, num_modes: usize) -> Result<BraidWord, FormatError> {
    let records: Vec<FactorRecord> = from_json(text)?;
    let mut w = BraidWord::new();
    for (i, r) in records.iter().enumerate() {
        let s = MajoranaString::parse(&r.string, num_modes)
            .map_err(|e| FormatError::invalid(format!("[{i}].string"), e))?;
        let f = BraidFactor::new(s, r.angle_quarter_turns).map_err(|e| FormatError::invalid(format!("[{i}]"), e))?;
        w.push(f);
    }
    Ok(w)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum EventRecord {
    Measure {
        string: String,
        origin: OriginKind,
        index: usize,
    },
    Braid {
        string: String,
        angle: i8,
        /// 1-based gadget whose `+1` outcome enables this braid.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        when_gadget_plus: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OriginKind {
    Dummy,
    Gadget,
    Final,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StepRecord {
    Quantum {
        op: usize,
        string: String,
        vars: Vec<usize>,
    },
    Coin {
        op: usize,
    },
    Derived {
        op: usize,
        members: Vec<usize>,
        total_parity: bool,
        sign: i8,
        vars: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProgramFile {
    pub n: usize,
    pub t: usize,
    pub parity_sector: i8,
    /// Gate-level expansion on the combined register (`R_n` modes first).
    pub events: Vec<EventRecord>,
    /// Steps for all gadget outcomes `+1`; other branches are derived from `events`.
    pub steps: Vec<StepRecord>,
    pub quantum_measurements: usize,
}

fn step_record(s: &Step) -> StepRecord {
    match s {
        Step::Quantum { op, string, vars } => StepRecord::Quantum {
            op: *op,
            string: string.to_string(),
            vars: vars.clone(),
        },
        Step::Coin { op } => StepRecord::Coin { op: *op },
        Step::Derived { op, relation, vars } => StepRecord::Derived {
            op: *op,
            members: relation.members.clone(),
            total_parity: relation.includes_total_parity,
            sign: relation.sign,
            vars: vars.clone(),
        },
    }
}

impl ProgramFile {
    pub fn of(p: &FpbcProgram) -> Self {
        let regs = p.registers();
        let events = p
            .sequence
            .events
            .iter()
            .map(|e| match e {
                Event::Measure(m) => {
                    let (origin, index) = match m.origin {
                        Origin::Dummy(k) => (OriginKind::Dummy, k),
                        Origin::Gadget(k) => (OriginKind::Gadget, k),
                        Origin::Final(k) => (OriginKind::Final, k),
                    };
                    EventRecord::Measure {
                        string: m.string.to_string(),
                        origin,
                        index: index + 1,
                    }
                }
                Event::Braid { factor, condition } => EventRecord::Braid {
                    string: factor.generator().to_string(),
                    angle: factor.quarter_turns(),
                    when_gadget_plus: condition.map(|j| j + 1),
                },
            })
            .collect();
        ProgramFile {
            n: regs.n,
            t: regs.t,
            parity_sector: regs.parity_sector,
            events,
            steps: p.default_branch.steps.iter().map(step_record).collect(),
            quantum_measurements: p.default_branch.stats().quantum,
        }
    }

    /// Rebuild the program and check the stored steps against a fresh compilation.
    pub fn to_program(&self) -> Result<FpbcProgram, FormatError> {
        let regs = Registers {
            n: self.n,
            t: self.t,
            parity_sector: self.parity_sector,
        };
        let total = regs.total_modes();
        let mut events = Vec::with_capacity(self.events.len());
        for (i, e) in self.events.iter().enumerate() {
            let path = |f: &str| format!("events[{i}].{f}");
            let parse = |s: &str| MajoranaString::parse(s, total).map_err(|e| FormatError::invalid(path("string"), e));
            events.push(match e {
                EventRecord::Measure { string, origin, index } => {
                    let k = index
                        .checked_sub(1)
                        .ok_or_else(|| FormatError::invalid(path("index"), "indices start at 1"))?;
                    let (origin, output_slot) = match origin {
                        OriginKind::Dummy => (Origin::Dummy(k), None),
                        OriginKind::Gadget => (Origin::Gadget(k), None),
                        OriginKind::Final => (Origin::Final(k), Some(k)),
                    };
                    Event::Measure(MeasurementOp {
                        string: parse(string)?,
                        origin,
                        output_slot,
                    })
                }
                EventRecord::Braid {
                    string,
                    angle,
                    when_gadget_plus,
                } => Event::Braid {
                    factor: BraidFactor::new(parse(string)?, *angle)
                        .map_err(|e| FormatError::invalid(path("string"), e))?,
                    condition: match when_gadget_plus {
                        Some(0) => {
                            return Err(FormatError::invalid(
                                path("when_gadget_plus"),
                                "gadgets are numbered from 1",
                            ))
                        }
                        Some(j) if *j > regs.t => {
                            return Err(FormatError::invalid(path("when_gadget_plus"), "no such gadget"))
                        }
                        c => c.map(|j| j - 1),
                    },
                },
            });
        }
        let sequence = Sequence {
            registers: regs,
            events,
        };
        let default_branch =
            compile_branch(&sequence, &vec![1; regs.t]).map_err(|e| FormatError::Tampered(e.to_string()))?;
        let stored: Vec<StepRecord> = self.steps.clone();
        let fresh: Vec<StepRecord> = default_branch.steps.iter().map(step_record).collect();
        if stored != fresh {
            let at = stored
                .iter()
                .zip(&fresh)
                .position(|(a, b)| a != b)
                .unwrap_or(stored.len().min(fresh.len()));
            return Err(FormatError::Tampered(format!("steps[{at}] differs")));
        }
        let quantum = default_branch.stats().quantum;
        if self.quantum_measurements != quantum {
            return Err(FormatError::Tampered(format!(
                "quantum_measurements is {} but the steps contain {quantum}",
                self.quantum_measurements
            )));
        }
        Ok(FpbcProgram {
            sequence,
            default_branch,
        })
    }
}

pub fn program_json(p: &FpbcProgram) -> String {
    to_json(&ProgramFile::of(p))
}

pub fn parse_program(text: &str) -> Result<FpbcProgram, FormatError> {
    from_json::<ProgramFile>(text)?.to_program()
}

/// Steps of any branch program in file form.
pub fn branch_steps(b: &StaticProgram) -> Vec<StepRecord> {
    b.steps.iter().map(step_record).collect()
}

pub fn relation_text(r: &SignedRelation) -> String {
    let mut s = if r.sign < 0 { "-".to_string() } else { "+".to_string() };
    for m in &r.members {
        s += &format!(" m{}", m + 1);
    }
    if r.includes_total_parity {
        s += " Γ";
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DeltaEpsRecord {
    Given([f64; 2]),
    Keyword(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceFile {
    #[serde(rename = "E_J")]
    pub e_j: f64,
    #[serde(rename = "E_C")]
    pub e_c: f64,
    pub omega0: f64,
    pub g: f64,
    pub delta_eps: DeltaEpsRecord,
}

impl DeviceFile {
    pub fn to_params(&self) -> Result<DeviceParams, FormatError> {
        let delta_eps = match &self.delta_eps {
            DeltaEpsRecord::Given(d) => DeltaEps::Given(*d),
            DeltaEpsRecord::Keyword(k) if k == "derive" => DeltaEps::Derive,
            DeltaEpsRecord::Keyword(k) => {
                return Err(FormatError::invalid(
                    "delta_eps",
                    format!("expected [e0, e1] or \"derive\", got {k:?}"),
                ))
            }
        };
        let p = DeviceParams {
            e_j: self.e_j,
            e_c: self.e_c,
            omega0: self.omega0,
            g: self.g,
            delta_eps,
        };
        p.validate().map_err(|e| FormatError::invalid("$", e))?;
        Ok(p)
    }
}

pub fn parse_device(text: &str) -> Result<DeviceParams, FormatError> {
    from_json::<DeviceFile>(text)?.to_params()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingRecord {
    pub e_m: f64,
    pub a: [f64; 3],
}

pub fn island_name(i: Island) -> String {
    match i {
        Island::Top(c) => format!("top{}", c + 1),
        Island::Bottom(c) => format!("bottom{}", c + 1),
        Island::Vertical(c) => format!("vertical{}", c + 1),
    }
}

pub fn parse_island(s: &str, columns: usize) -> Option<Island> {
    let (kind, num) = s.find(|c: char| c.is_ascii_digit()).map(|k| s.split_at(k))?;
    let c = num.parse::<usize>().ok()?.checked_sub(1).filter(|&c| c < columns)?;
    match kind {
        "top" => Some(Island::Top(c)),
        "bottom" => Some(Island::Bottom(c)),
        "vertical" => Some(Island::Vertical(c)),
        _ => None,
    }
}

fn node_name(layout: &LadderLayout, n: Node) -> String {
    match n {
        Node::Island(i) => island_name(layout.island(i)),
        Node::Plate(Plate::Bus) => "bus".into(),
        Node::Plate(Plate::Ground) => "ground".into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JunctionRecord {
    pub from: String,
    pub to: String,
    pub on: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorEntry {
    pub mzm: usize,
    pub bus_legs: Vec<u8>,
    pub alpha: Option<u8>,
    pub factor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutFile {
    pub columns: usize,
    pub mzms: Vec<usize>,
    /// `true` for the sparse junction graph (plates reach only vertical islands).
    #[serde(default)]
    pub sparse: bool,
    pub bus: Vec<String>,
    pub ground: Vec<String>,
    pub junctions: Vec<JunctionRecord>,
    pub couplings: Vec<CouplingRecord>,
    pub q_string: String,
    pub scalar: f64,
    pub shift_magnitude: f64,
    pub junction_factors: Vec<FactorEntry>,
}

impl LayoutFile {
    pub fn of(
        layout: &LadderLayout,
        sparse: bool,
        mzms: &[usize],
        config: &IslandConfig,
        couplings: &[TriJunctionCouplings],
        q: &ReadoutOperator,
    ) -> Self {
        let names = |want: bool| {
            (0..layout.island_count())
                .filter(|&i| config.bus[i] == want)
                .map(|i| island_name(layout.island(i)))
                .collect()
        };
        LayoutFile {
            columns: layout.columns(),
            mzms: mzms.iter().map(|m| m + 1).collect(),
            sparse,
            bus: names(true),
            ground: names(false),
            junctions: layout
                .junctions
                .edges
                .iter()
                .zip(&config.jj_on)
                .map(|(&(a, b), &on)| JunctionRecord {
                    from: node_name(layout, a),
                    to: node_name(layout, b),
                    on,
                })
                .collect(),
            couplings: couplings
                .iter()
                .map(|c| CouplingRecord { e_m: c.e_m, a: c.a })
                .collect(),
            q_string: q.q_string.to_string(),
            scalar: q.scalar,
            shift_magnitude: q.shift_magnitude,
            junction_factors: q
                .junctions
                .iter()
                .map(|f| FactorEntry {
                    mzm: f.mzm + 1,
                    bus_legs: f.bus_legs.clone(),
                    alpha: f.alpha,
                    factor: f.factor,
                })
                .collect(),
        }
    }

    /// Layout, configuration and couplings as stored; the junction list must match the layout's.
    pub fn to_parts(&self) -> Result<(LadderLayout, IslandConfig, Vec<TriJunctionCouplings>), FormatError> {
        let layout = if self.sparse {
            LadderLayout::sparse(self.columns)
        } else {
            LadderLayout::new(self.columns)
        }
        .map_err(|e| FormatError::invalid("columns", e))?;
        let mut bus = vec![false; layout.island_count()];
        for (k, name) in self.bus.iter().enumerate() {
            let isl = parse_island(name, self.columns)
                .ok_or_else(|| FormatError::invalid(format!("bus[{k}]"), format!("unknown island {name:?}")))?;
            bus[layout.island_index(isl)] = true;
        }
        if self.junctions.len() != layout.junctions.edges.len() {
            return Err(FormatError::invalid(
                "junctions",
                format!(
                    "{} entries, layout has {}",
                    self.junctions.len(),
                    layout.junctions.edges.len()
                ),
            ));
        }
        let mut jj_on = Vec::with_capacity(self.junctions.len());
        for (k, (rec, &(a, b))) in self.junctions.iter().zip(&layout.junctions.edges).enumerate() {
            if rec.from != node_name(&layout, a) || rec.to != node_name(&layout, b) {
                return Err(FormatError::invalid(
                    format!("junctions[{k}]"),
                    "does not match the layout's junction list",
                ));
            }
            jj_on.push(rec.on);
        }
        let couplings = self
            .couplings
            .iter()
            .map(|c| TriJunctionCouplings::new(c.e_m, c.a))
            .collect();
        Ok((layout, IslandConfig { bus, jj_on }, couplings))
    }
}

pub fn parse_couplings(text: &str) -> Result<Vec<TriJunctionCouplings>, FormatError> {
    let recs: Vec<CouplingRecord> = from_json(text)?;
    Ok(recs
        .into_iter()
        .map(|c| TriJunctionCouplings::new(c.e_m, c.a))
        .collect())
}

pub fn distribution_map(d: &Distribution) -> BTreeMap<String, f64> {
    d.probs.clone()
}

/// `key,value` rows under a header.
pub fn csv_rows<K: Serialize, V: Serialize>(header: [&str; 2], rows: impl IntoIterator<Item = (K, V)>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

/// One header row and one data row.
pub fn csv_record<T: Serialize>(value: &T) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.serialize(value).expect("in-memory write");
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

/// Compile errors map onto user-facing messages at the CLI boundary.
pub fn compile_message(e: &CompileError) -> String {
    match e {
        CompileError::InvalidCircuit(d) => d.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "),
        e => e.to_string(),
    }
}
