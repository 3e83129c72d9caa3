//! Observation perspectives: derive the network an observer effectively sees.
//!
//! A perspective hides some automata and declares that a block of automata is
//! caught in a shared rhythm, updating through a fixed periodic
//! micro-schedule with the observer sampling once per period. Composing the
//! local functions symbolically along that period, dropping the hidden
//! automata and (optionally) propagating observed constants yields the
//! observed network — typically a different-looking object than the
//! underlying one, with arcs missing or signs scrambled, even though the
//! observation itself is flawless.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::dynamics::NetTables;
use crate::error::{Error, Result};
use crate::expr::{BoolExpr, VarId, DEFAULT_MAX_SUPPORT};
use crate::network::Network;
use crate::schedule::Schedule;
use crate::state::State;

/// What the observer can and cannot see, and when.
///
/// Text form: `hidden=4; rhythm=1,2,3,4; micro=3,2,4,1; propagate=on`.
/// `micro` uses the schedule block syntax (without a periodic `*`; the
/// micro-schedule is one period by definition).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObservationSpec {
    /// Automata whose existence escapes the observer. Must be part of the
    /// rhythm: an invisible automaton outside it could never be eliminated by
    /// composition.
    pub hidden: BTreeSet<VarId>,
    /// Automata caught in the shared rhythm.
    pub rhythmic: BTreeSet<VarId>,
    /// One period of updates within the rhythmic block; the observer samples
    /// after the full period.
    pub micro: Vec<BTreeSet<VarId>>,
    /// Propagate observed constants after hiding (partial evaluation under
    /// the post-transient invariants).
    pub propagate: bool,
}

impl ObservationSpec {
    pub fn new(
        hidden: BTreeSet<VarId>,
        rhythmic: BTreeSet<VarId>,
        micro: Vec<BTreeSet<VarId>>,
        propagate: bool,
    ) -> ObservationSpec {
        ObservationSpec {
            hidden,
            rhythmic,
            micro,
            propagate,
        }
    }

    /// Check this observation spec's invariants and its fit with a network.
    pub fn validate(&self, net: &Network) -> Result<()> {
        for &id in self.rhythmic.iter().chain(&self.hidden) {
            if !net.contains(id) {
                return Err(Error::UnknownAutomaton(id));
            }
        }
        if let Some(&id) = self.hidden.difference(&self.rhythmic).next() {
            return Err(Error::InvalidSpec(format!(
                "hidden automaton {id} is outside the rhythmic block"
            )));
        }
        let fired: BTreeSet<VarId> = self.micro.iter().flatten().copied().collect();
        if let Some(&id) = fired.difference(&self.rhythmic).next() {
            return Err(Error::InvalidSpec(format!(
                "micro-schedule updates automaton {id} outside the rhythmic block"
            )));
        }
        if let Some(&id) = self.hidden.difference(&fired).next() {
            return Err(Error::InvalidSpec(format!(
                "hidden automaton {id} never fires in the micro-schedule"
            )));
        }
        if self.micro.iter().any(BTreeSet::is_empty) {
            return Err(Error::EmptyBlock);
        }
        Ok(())
    }
}

impl FromStr for ObservationSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<ObservationSpec> {
        let mut spec = ObservationSpec::new(BTreeSet::new(), BTreeSet::new(), Vec::new(), false);
        for field in s.split(';') {
            let field = field.trim();
            if field.is_empty() {
                continue;
            }
            let Some((key, value)) = field.split_once('=') else {
                return Err(Error::InvalidSpec(format!(
                    "expected `key=value`, found `{field}`"
                )));
            };
            let value = value.trim();
            match key.trim() {
                "hidden" => spec.hidden = parse_id_set(value)?,
                "rhythm" => spec.rhythmic = parse_id_set(value)?,
                "micro" => {
                    let sched: Schedule = value.parse()?;
                    if sched.is_periodic() {
                        return Err(Error::InvalidSpec(
                            "the micro-schedule is one period; drop the `*`".into(),
                        ));
                    }
                    spec.micro = sched.blocks().to_vec();
                }
                "propagate" => {
                    spec.propagate = match value {
                        "on" => true,
                        "off" => false,
                        other => {
                            return Err(Error::InvalidSpec(format!(
                                "propagate is `on` or `off`, not `{other}`"
                            )))
                        }
                    }
                }
                other => {
                    return Err(Error::InvalidSpec(format!("unknown field `{other}`")));
                }
            }
        }
        Ok(spec)
    }
}

fn parse_id_set(text: &str) -> Result<BTreeSet<VarId>> {
    let mut out = BTreeSet::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let id: VarId = part
            .parse()
            .map_err(|_| Error::InvalidSpec(format!("`{part}` is not an automaton id")))?;
        if id == 0 {
            return Err(Error::InvalidSpec("automaton ids start at 1".into()));
        }
        out.insert(id);
    }
    Ok(out)
}

impl fmt::Display for ObservationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |set: &BTreeSet<VarId>| {
            set.iter()
                .map(VarId::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        let micro = Schedule::new(self.micro.clone(), false).expect("blocks already validated");
        write!(
            f,
            "hidden={}; rhythm={}; micro={}; propagate={}",
            join(&self.hidden),
            join(&self.rhythmic),
            micro,
            if self.propagate { "on" } else { "off" }
        )
    }
}

/// Symbolic state of every automaton after one period of `blocks`, as a
/// function of the state before the period. Automata never updated map to
/// their own variable.
pub fn compose_along(
    net: &Network,
    blocks: &[BTreeSet<VarId>],
) -> Result<BTreeMap<VarId, BoolExpr>> {
    compose_along_with_limit(net, blocks, DEFAULT_MAX_SUPPORT)
}

pub fn compose_along_with_limit(
    net: &Network,
    blocks: &[BTreeSet<VarId>],
    max_support: usize,
) -> Result<BTreeMap<VarId, BoolExpr>> {
    for &id in blocks.iter().flatten() {
        if !net.contains(id) {
            return Err(Error::UnknownAutomaton(id));
        }
    }
    let mut current: BTreeMap<VarId, BoolExpr> = net
        .ids()
        .iter()
        .map(|&id| (id, BoolExpr::Var(id)))
        .collect();
    for block in blocks {
        let mut next = current.clone();
        for &id in block {
            let composed = net
                .function(id)
                .expect("block members are automata")
                .substitute(&current);
            next.insert(id, composed.simplify_with_limit(max_support)?);
        }
        current = next;
    }
    Ok(current)
}

/// Where a projected function came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceOrigin {
    /// Composed through the micro-schedule (rhythmic automata).
    Composed,
    /// The original local function, kept because the automaton updates
    /// outside the observed rhythm.
    Original,
}

/// Per-automaton record of the projection pipeline.
#[derive(Clone, Debug)]
pub struct FunctionTrace {
    pub automaton: VarId,
    pub origin: TraceOrigin,
    /// Expression after composition and hiding, before constant propagation.
    pub composed: BoolExpr,
    /// Final projected function.
    pub final_expr: BoolExpr,
    /// Constants substituted into this function during propagation.
    pub applied_constants: Vec<(VarId, bool)>,
}

/// The observed network, with its observer-side update set and provenance.
#[derive(Clone, Debug)]
pub struct Projection {
    pub network: Network,
    /// Visible automata updated within one observed macro-step.
    pub updated_set: BTreeSet<VarId>,
    /// Constants discovered and propagated (empty when propagation is off).
    pub propagated: Vec<(VarId, bool)>,
    pub traces: Vec<FunctionTrace>,
}

/// Derive the observed network induced by a perspective.
pub fn project(net: &Network, spec: &ObservationSpec) -> Result<Projection> {
    project_with_limit(net, spec, DEFAULT_MAX_SUPPORT)
}

pub fn project_with_limit(
    net: &Network,
    spec: &ObservationSpec,
    max_support: usize,
) -> Result<Projection> {
    spec.validate(net)?;
    let composed = compose_along_with_limit(net, &spec.micro, max_support)?;

    // Hide: visible rhythmic automata take their composed expressions,
    // visible non-rhythmic automata keep their originals. Any surviving
    // reference to a hidden automaton is an error, not an approximation —
    // except a semantically void one, which simplification removes.
    let mut functions: BTreeMap<VarId, BoolExpr> = BTreeMap::new();
    let mut origins: BTreeMap<VarId, TraceOrigin> = BTreeMap::new();
    for &id in net.ids() {
        if spec.hidden.contains(&id) {
            continue;
        }
        let (origin, mut expr) = if spec.rhythmic.contains(&id) {
            (TraceOrigin::Composed, composed[&id].clone())
        } else {
            (TraceOrigin::Original, net.function(id).unwrap().clone())
        };
        if expr.vars().intersection(&spec.hidden).next().is_some() {
            expr = expr.simplify_with_limit(max_support)?;
        }
        if let Some(&hidden) = expr.vars().intersection(&spec.hidden).next() {
            return Err(Error::HidingFailed {
                automaton: id,
                hidden,
            });
        }
        origins.insert(id, origin);
        functions.insert(id, expr);
    }
    let raw: BTreeMap<VarId, BoolExpr> = functions.clone();

    // Constant propagation: whenever a visible function is semantically
    // constant, fix that automaton's variable everywhere and iterate.
    let mut propagated: Vec<(VarId, bool)> = Vec::new();
    let mut applied: BTreeMap<VarId, Vec<(VarId, bool)>> = BTreeMap::new();
    if spec.propagate {
        let mut known: BTreeSet<VarId> = BTreeSet::new();
        loop {
            let mut found: Option<(VarId, bool)> = None;
            for (&id, expr) in &functions {
                if known.contains(&id) {
                    continue;
                }
                if let BoolExpr::Const(c) = expr.simplify_with_limit(max_support)? {
                    found = Some((id, c));
                    break;
                }
            }
            let Some((id, value)) = found else { break };
            known.insert(id);
            propagated.push((id, value));
            functions.insert(id, BoolExpr::Const(value));
            let binding: BTreeMap<VarId, BoolExpr> =
                [(id, BoolExpr::Const(value))].into_iter().collect();
            for (&other, expr) in functions.iter_mut() {
                if other == id || !expr.vars().contains(&id) {
                    continue;
                }
                *expr = expr.substitute(&binding).simplify_with_limit(max_support)?;
                applied.entry(other).or_default().push((id, value));
            }
        }
    }

    let fired: BTreeSet<VarId> = spec.micro.iter().flatten().copied().collect();
    let updated_set: BTreeSet<VarId> = fired
        .into_iter()
        .filter(|id| !spec.hidden.contains(id))
        .collect();

    let traces = functions
        .iter()
        .map(|(&id, expr)| FunctionTrace {
            automaton: id,
            origin: origins[&id],
            composed: raw[&id].clone(),
            final_expr: expr.clone(),
            applied_constants: applied.remove(&id).unwrap_or_default(),
        })
        .collect();

    Ok(Projection {
        network: Network::new(functions)?,
        updated_set,
        propagated,
        traces,
    })
}

/// One observed coordinate disagreeing with the underlying system.
#[derive(Clone, Debug)]
pub struct Disagreement {
    /// Underlying state the period was started from.
    pub state: State,
    pub automaton: VarId,
    /// What the underlying network does.
    pub expected: bool,
    /// What the projected network predicts.
    pub predicted: bool,
}

/// Exhaustive comparison of a projection against its underlying network.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    /// Underlying states checked (all of `2^n`).
    pub states_checked: u64,
    /// Underlying states with at least one disagreeing coordinate, ascending.
    pub disagreeing_states: Vec<State>,
    pub details: Vec<Disagreement>,
    /// The propagated constants defining the invariant region.
    pub constants: Vec<(VarId, bool)>,
    /// States satisfying the propagated constants.
    pub invariant_region_size: u64,
    /// Disagreeing states within the invariant region.
    pub invariant_disagreements: u64,
}

impl VerificationReport {
    pub fn full_disagreements(&self) -> u64 {
        self.disagreeing_states.len() as u64
    }
}

/// Check the projection against every underlying state.
///
/// For each state `x`, one micro-schedule period is simulated on the
/// underlying network and each visible automaton is compared against the
/// projection's prediction:
///
/// * automata of the observed update set must match the underlying end-of-
///   period value (the observed macro-transition);
/// * visible automata outside the rhythm keep modelling their own future
///   updates, so their projected function is compared against the underlying
///   local function pointwise.
///
/// With constant propagation the projected functions are only meant to hold
/// once the observed constants do, so the report counts disagreements both
/// over the full space and within that invariant region.
pub fn verify_projection(
    net: &Network,
    spec: &ObservationSpec,
    projection: &Projection,
) -> Result<VerificationReport> {
    verify_projection_with_limit(
        net,
        spec,
        projection,
        crate::dynamics::DEFAULT_MAX_EXHAUSTIVE,
    )
}

pub fn verify_projection_with_limit(
    net: &Network,
    spec: &ObservationSpec,
    projection: &Projection,
    max_states: usize,
) -> Result<VerificationReport> {
    spec.validate(net)?;
    let tables = NetTables::build(net, max_states)?;
    let blocks: Vec<u64> = spec
        .micro
        .iter()
        .map(|b| tables.block_mask(b))
        .collect::<Result<_>>()?;

    // Projected functions and kept originals, tabulated over the full
    // underlying state so that everything evaluates on the same mask.
    let full_vars: Vec<VarId> = net.ids().to_vec();
    let position =
        |id: VarId| -> usize { full_vars.binary_search(&id).expect("id is an automaton") };
    let updated: Vec<(VarId, usize, crate::table::Table)> = projection
        .updated_set
        .iter()
        .map(|&id| {
            let g = projection.network.function(id).expect("visible automaton");
            (
                id,
                position(id),
                crate::table::Table::over(g, full_vars.clone()),
            )
        })
        .collect();
    let free_running: Vec<(VarId, usize, crate::table::Table, crate::table::Table)> = projection
        .network
        .ids()
        .iter()
        .filter(|id| !spec.rhythmic.contains(id))
        .map(|&id| {
            let g = projection.network.function(id).expect("visible automaton");
            let f = net.function(id).expect("visible automaton");
            (
                id,
                position(id),
                crate::table::Table::over(f, full_vars.clone()),
                crate::table::Table::over(g, full_vars.clone()),
            )
        })
        .collect();

    let constant_positions: Vec<(usize, bool)> = projection
        .propagated
        .iter()
        .map(|&(id, value)| (position(id), value))
        .collect();

    let mut details = Vec::new();
    let mut disagreeing = Vec::new();
    let mut invariant_region_size = 0u64;
    let mut invariant_disagreements = 0u64;
    for mask in 0..tables.state_count() {
        let end = blocks.iter().fold(mask, |acc, &b| tables.step(acc, b));
        let mut bad = false;
        for &(id, pos, ref table) in &updated {
            let expected = end >> pos & 1 == 1;
            let predicted = table.bit(mask);
            if expected != predicted {
                bad = true;
                details.push(Disagreement {
                    state: tables.state(mask),
                    automaton: id,
                    expected,
                    predicted,
                });
            }
        }
        for &(id, _, ref f, ref g) in &free_running {
            let expected = f.bit(mask);
            let predicted = g.bit(mask);
            if expected != predicted {
                bad = true;
                details.push(Disagreement {
                    state: tables.state(mask),
                    automaton: id,
                    expected,
                    predicted,
                });
            }
        }
        let in_region = constant_positions
            .iter()
            .all(|&(pos, value)| (mask >> pos & 1 == 1) == value);
        if in_region {
            invariant_region_size += 1;
        }
        if bad {
            disagreeing.push(tables.state(mask));
            if in_region {
                invariant_disagreements += 1;
            }
        }
    }

    Ok(VerificationReport {
        states_checked: tables.state_count(),
        disagreeing_states: disagreeing,
        details,
        constants: projection.propagated.clone(),
        invariant_region_size,
        invariant_disagreements,
    })
}

/// The projection formatted as a network file with provenance comments; the
/// optional verification summary goes at the end.
pub fn render_projection(projection: &Projection, report: Option<&VerificationReport>) -> String {
    let updated: Vec<String> = projection
        .updated_set
        .iter()
        .map(VarId::to_string)
        .collect();
    let mut out = String::new();
    out.push_str(&format!(
        "# observed network: {} automata; updated per observed step: {}\n",
        projection.network.n(),
        if updated.is_empty() {
            "(none)".to_string()
        } else {
            updated.join(",")
        }
    ));
    out.push_str(&projection.network.to_string());
    out.push_str("# provenance:\n");
    for trace in &projection.traces {
        let mut line = format!("#   {}: ", trace.automaton);
        match trace.origin {
            TraceOrigin::Composed => {
                line.push_str(&format!(
                    "composed through the period -> {}",
                    trace.composed
                ));
            }
            TraceOrigin::Original => {
                line.push_str(&format!("kept original {}", trace.composed));
            }
        }
        if !trace.applied_constants.is_empty() {
            let used: Vec<String> = trace
                .applied_constants
                .iter()
                .map(|(id, v)| format!("x{id}={}", *v as u8))
                .collect();
            line.push_str(&format!(
                "; with {} -> {}",
                used.join(", "),
                trace.final_expr
            ));
        }
        out.push_str(&line);
        out.push('\n');
    }
    if !projection.propagated.is_empty() {
        let consts: Vec<String> = projection
            .propagated
            .iter()
            .map(|(id, v)| format!("x{id}={}", *v as u8))
            .collect();
        out.push_str(&format!("# propagated constants: {}\n", consts.join(", ")));
    }
    if let Some(report) = report {
        out.push_str(&format!(
            "# verification: {} states checked, {} disagreeing (full space); invariant region: {} states, {} disagreeing\n",
            report.states_checked,
            report.full_disagreements(),
            report.invariant_region_size,
            report.invariant_disagreements,
        ));
    }
    out
}
