//! Update semantics on top of a network: subset updates, schedules, the
//! parallel map, the fully asynchronous relation, exhaustive transition
//! graphs, fixed points and attractors.
//!
//! Exhaustive enumerations walk all of `2^n` states in numeric order
//! (coordinate 1 as least significant bit) so every output is reproducible
//! bit for bit.

use std::collections::BTreeSet;
use std::fmt;
use std::io;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::VarId;
use crate::network::Network;
use crate::schedule::Schedule;
use crate::state::State;
use crate::table::Table;

/// Default cap on exhaustive state-space enumeration (about a million
/// states); raise it explicitly for bigger sweeps.
pub const DEFAULT_MAX_EXHAUSTIVE: usize = 20;

/// How the network is driven.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UpdateMode {
    /// Every step updates all automata.
    Parallel,
    /// Every step updates exactly one unstable automaton (nondeterministic).
    Asynchronous,
    /// One step applies one full pass of the schedule's blocks.
    Scheduled(Schedule),
}

impl fmt::Display for UpdateMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UpdateMode::Parallel => f.write_str("parallel"),
            UpdateMode::Asynchronous => f.write_str("asynchronous"),
            UpdateMode::Scheduled(s) => write!(f, "scheduled({s})"),
        }
    }
}

/// Update the automata of `updated` simultaneously: `x'_i = f_i(x)` for
/// members, `x'_i = x_i` otherwise. Updating a stable automaton is a no-op.
pub fn step(net: &Network, x: &State, updated: &BTreeSet<VarId>) -> Result<State> {
    net.check_state(x)?;
    let mut bits: Vec<bool> = (0..net.n()).map(|k| x.bit(k)).collect();
    for &id in updated {
        let pos = net.position(id).ok_or(Error::UnknownAutomaton(id))?;
        bits[pos] = net.eval_function(id, x)?;
    }
    net.state_from_bits(bits)
}

/// The parallel map: `x` goes to `(f_1(x), ..., f_n(x))`.
pub fn parallel_step(net: &Network, x: &State) -> Result<State> {
    let all: BTreeSet<VarId> = net.ids().iter().copied().collect();
    step(net, x, &all)
}

/// Run `steps` block applications of the schedule from `x0`; the result has
/// `steps + 1` states beginning at `x0`. A non-periodic schedule cannot be
/// run past its last block.
pub fn run_schedule(
    net: &Network,
    x0: &State,
    sched: &Schedule,
    steps: usize,
) -> Result<Vec<State>> {
    net.check_state(x0)?;
    sched.validate_for(net)?;
    let exhausted = if sched.is_periodic() {
        sched.is_empty() && steps > 0
    } else {
        steps > sched.len()
    };
    if exhausted {
        return Err(Error::ScheduleExhausted {
            blocks: sched.len(),
            steps,
        });
    }
    let mut out = Vec::with_capacity(steps + 1);
    out.push(x0.clone());
    for k in 0..steps {
        let block = sched.block_at(k).expect("bounds checked above");
        let next = step(net, out.last().unwrap(), block)?;
        out.push(next);
    }
    Ok(out)
}

/// Per-automaton truth tables over the full id list; the engine behind every
/// exhaustive sweep. States are `u64` masks with coordinate k at bit k.
pub(crate) struct NetTables {
    ids: Arc<[VarId]>,
    tables: Vec<Table>,
}

impl NetTables {
    pub fn build(net: &Network, limit: usize) -> Result<NetTables> {
        let n = net.n();
        // Masks cap the usable width at 63 regardless of the caller's limit.
        if n > limit.min(63) {
            return Err(Error::TooManyStates {
                n,
                limit: limit.min(63),
            });
        }
        let vars = net.ids().to_vec();
        let tables = net
            .functions()
            .map(|(_, f)| Table::over(f, vars.clone()))
            .collect();
        Ok(NetTables {
            ids: net.ids_arc(),
            tables,
        })
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn state_count(&self) -> u64 {
        1u64 << self.n()
    }

    pub fn ids(&self) -> Arc<[VarId]> {
        self.ids.clone()
    }

    /// `f` of the automaton at `pos`, evaluated on the state mask.
    pub fn eval(&self, pos: usize, mask: u64) -> bool {
        self.tables[pos].bit(mask)
    }

    /// Positions (as a mask) of the automata unstable in `mask`.
    pub fn unstable(&self, mask: u64) -> u64 {
        let mut out = 0u64;
        for pos in 0..self.n() {
            if self.eval(pos, mask) != (mask >> pos & 1 == 1) {
                out |= 1 << pos;
            }
        }
        out
    }

    /// Simultaneous update of the positions in `block`.
    pub fn step(&self, mask: u64, block: u64) -> u64 {
        let mut out = mask & !block;
        let mut rest = block;
        while rest != 0 {
            let pos = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.eval(pos, mask) {
                out |= 1 << pos;
            }
        }
        out
    }

    pub fn parallel(&self, mask: u64) -> u64 {
        self.step(mask, self.all_mask())
    }

    pub fn all_mask(&self) -> u64 {
        if self.n() == 0 {
            0
        } else {
            (1u64 << self.n()) - 1
        }
    }

    /// Positions mask of an id set.
    pub fn block_mask(&self, block: &BTreeSet<VarId>) -> Result<u64> {
        let mut out = 0u64;
        for &id in block {
            let pos = self
                .ids
                .binary_search(&id)
                .map_err(|_| Error::UnknownAutomaton(id))?;
            out |= 1 << pos;
        }
        Ok(out)
    }

    pub fn state(&self, mask: u64) -> State {
        State::from_mask(self.ids.clone(), mask)
    }
}

/// Options for exhaustive graph construction.
#[derive(Clone, Copy, Debug)]
pub struct GraphOptions {
    /// Give stable states a self-loop in asynchronous graphs (default: off,
    /// so "no outgoing edge" and "fixed point" coincide).
    pub self_loops: bool,
    pub max_states: usize,
}

impl Default for GraphOptions {
    fn default() -> Self {
        GraphOptions {
            self_loops: false,
            max_states: DEFAULT_MAX_EXHAUSTIVE,
        }
    }
}

/// Bit-string label order for graph exports.
///
/// `MsbFirst` writes coordinate n leftmost, so labels read as binary numbers;
/// `Coord1First` matches the tuple notation used everywhere else.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BitOrder {
    #[default]
    MsbFirst,
    Coord1First,
}

pub(crate) fn state_label(mask: u64, n: usize, order: BitOrder) -> String {
    let mut s: String = (0..n)
        .map(|k| if mask >> k & 1 == 1 { '1' } else { '0' })
        .collect();
    if order == BitOrder::MsbFirst {
        s = s.chars().rev().collect();
    }
    s
}

#[derive(Debug)]
enum GraphData {
    /// One successor per state.
    Deterministic(Vec<u64>),
    /// Per state: `(updated automaton, successor)`, plus optional labelless
    /// self-loops on stable states.
    Async(Vec<Vec<(Option<VarId>, u64)>>),
}

/// An exhaustively enumerated transition graph over all of `2^n` states.
#[derive(Debug)]
pub struct TransitionGraph {
    ids: Arc<[VarId]>,
    mode: UpdateMode,
    data: GraphData,
}

/// Build the transition graph of the network under the given mode.
pub fn transition_graph(net: &Network, mode: UpdateMode) -> Result<TransitionGraph> {
    transition_graph_with(net, mode, &GraphOptions::default())
}

pub fn transition_graph_with(
    net: &Network,
    mode: UpdateMode,
    options: &GraphOptions,
) -> Result<TransitionGraph> {
    let tables = NetTables::build(net, options.max_states)?;
    let count = tables.state_count();
    let data = match &mode {
        UpdateMode::Parallel => {
            GraphData::Deterministic((0..count).map(|m| tables.parallel(m)).collect())
        }
        UpdateMode::Scheduled(sched) => {
            sched.validate_for(net)?;
            let blocks: Vec<u64> = sched
                .blocks()
                .iter()
                .map(|b| tables.block_mask(b))
                .collect::<Result<_>>()?;
            let succ = (0..count)
                .map(|m| blocks.iter().fold(m, |acc, &b| tables.step(acc, b)))
                .collect();
            GraphData::Deterministic(succ)
        }
        UpdateMode::Asynchronous => {
            let succ = (0..count)
                .map(|m| {
                    let unstable = tables.unstable(m);
                    if unstable == 0 && options.self_loops {
                        return vec![(None, m)];
                    }
                    let mut edges = Vec::new();
                    let mut rest = unstable;
                    while rest != 0 {
                        let pos = rest.trailing_zeros() as usize;
                        rest &= rest - 1;
                        edges.push((Some(tables.ids[pos]), m ^ (1u64 << pos)));
                    }
                    edges
                })
                .collect();
            GraphData::Async(succ)
        }
    };
    Ok(TransitionGraph {
        ids: tables.ids(),
        mode,
        data,
    })
}

impl TransitionGraph {
    pub fn mode(&self) -> &UpdateMode {
        &self.mode
    }

    pub fn ids(&self) -> &[VarId] {
        &self.ids
    }

    pub fn n_vars(&self) -> usize {
        self.ids.len()
    }

    pub fn state_count(&self) -> u64 {
        1u64 << self.ids.len()
    }

    pub fn states(&self) -> impl Iterator<Item = State> + '_ {
        (0..self.state_count()).map(|m| State::from_mask(self.ids.clone(), m))
    }

    /// Successors of a state, with the updated automaton on asynchronous
    /// edges.
    pub fn successors(&self, x: &State) -> Result<Vec<(Option<VarId>, State)>> {
        if *x.ids() != *self.ids {
            return Err(Error::StateIdMismatch);
        }
        Ok(self
            .successor_masks(x.mask())
            .into_iter()
            .map(|(via, m)| (via, State::from_mask(self.ids.clone(), m)))
            .collect())
    }

    pub(crate) fn successor_masks(&self, mask: u64) -> Vec<(Option<VarId>, u64)> {
        match &self.data {
            GraphData::Deterministic(succ) => vec![(None, succ[mask as usize])],
            GraphData::Async(succ) => succ[mask as usize].clone(),
        }
    }

    pub fn out_degree(&self, x: &State) -> Result<usize> {
        if *x.ids() != *self.ids {
            return Err(Error::StateIdMismatch);
        }
        Ok(match &self.data {
            GraphData::Deterministic(_) => 1,
            GraphData::Async(succ) => succ[x.mask() as usize].len(),
        })
    }

    pub fn edge_count(&self) -> usize {
        match &self.data {
            GraphData::Deterministic(succ) => succ.len(),
            GraphData::Async(succ) => succ.iter().map(Vec::len).sum(),
        }
    }

    fn edges(&self) -> impl Iterator<Item = (u64, Option<VarId>, u64)> + '_ {
        (0..self.state_count()).flat_map(move |m| {
            self.successor_masks(m)
                .into_iter()
                .map(move |(via, to)| (m, via, to))
        })
    }

    /// DOT rendering; nodes are bit-string labels in the requested order.
    pub fn to_dot(&self, order: BitOrder) -> String {
        let n = self.n_vars();
        let mut out = String::from("digraph transitions {\n");
        for m in 0..self.state_count() {
            out.push_str(&format!("  \"{}\";\n", state_label(m, n, order)));
        }
        for (from, via, to) in self.edges() {
            let from = state_label(from, n, order);
            let to = state_label(to, n, order);
            match via {
                Some(id) => out.push_str(&format!("  \"{from}\" -> \"{to}\" [label=\"{id}\"];\n")),
                None => out.push_str(&format!("  \"{from}\" -> \"{to}\";\n")),
            }
        }
        out.push_str("}\n");
        out
    }

    /// Line-oriented JSON: one edge object per line, states as
    /// coordinate-1-first bit-strings.
    pub fn write_jsonl(&self, w: &mut impl io::Write) -> io::Result<()> {
        #[derive(serde::Serialize)]
        struct Edge {
            from: String,
            to: String,
            #[serde(skip_serializing_if = "Option::is_none")]
            via: Option<VarId>,
        }
        let n = self.n_vars();
        for (from, via, to) in self.edges() {
            let record = Edge {
                from: state_label(from, n, BitOrder::Coord1First),
                to: state_label(to, n, BitOrder::Coord1First),
                via,
            };
            serde_json::to_writer(&mut *w, &record)?;
            writeln!(w)?;
        }
        Ok(())
    }
}

/// States with an empty unstable set; independent of any schedule.
pub fn fixed_points(net: &Network) -> Result<Vec<State>> {
    fixed_points_with_limit(net, DEFAULT_MAX_EXHAUSTIVE)
}

pub fn fixed_points_with_limit(net: &Network, max_states: usize) -> Result<Vec<State>> {
    let tables = NetTables::build(net, max_states)?;
    Ok((0..tables.state_count())
        .filter(|&m| tables.unstable(m) == 0)
        .map(|m| tables.state(m))
        .collect())
}

/// A minimal set of recurrent states closed under the dynamics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attractor {
    pub kind: AttractorKind,
    /// Members in ascending state order.
    pub states: Vec<State>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttractorKind {
    FixedPoint,
    Cycle,
    /// A terminal strongly connected component that is not a simple cycle
    /// (asynchronous mode only).
    Complex,
}

impl fmt::Display for AttractorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttractorKind::FixedPoint => f.write_str("fixed point"),
            AttractorKind::Cycle => f.write_str("cycle"),
            AttractorKind::Complex => f.write_str("complex"),
        }
    }
}

/// Attractors under the given mode: cycles of the step map for deterministic
/// modes, terminal strongly connected components for the asynchronous
/// relation.
pub fn attractors(net: &Network, mode: UpdateMode) -> Result<Vec<Attractor>> {
    attractors_with(net, mode, &GraphOptions::default())
}

pub fn attractors_with(
    net: &Network,
    mode: UpdateMode,
    options: &GraphOptions,
) -> Result<Vec<Attractor>> {
    let graph = transition_graph_with(net, mode, options)?;
    Ok(match &graph.data {
        GraphData::Deterministic(succ) => deterministic_attractors(&graph, succ),
        GraphData::Async(succ) => async_attractors(&graph, succ),
    })
}

fn deterministic_attractors(graph: &TransitionGraph, succ: &[u64]) -> Vec<Attractor> {
    let count = succ.len();
    // 0 = unvisited, 1 = on the current path, 2 = finished.
    let mut color = vec![0u8; count];
    let mut attractors = Vec::new();
    for start in 0..count as u64 {
        if color[start as usize] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut cur = start;
        while color[cur as usize] == 0 {
            color[cur as usize] = 1;
            path.push(cur);
            cur = succ[cur as usize];
        }
        if color[cur as usize] == 1 {
            // New cycle: everything from `cur` onwards in the path.
            let cut = path
                .iter()
                .position(|&m| m == cur)
                .expect("cur is on the path");
            let mut members: Vec<u64> = path[cut..].to_vec();
            members.sort_unstable();
            let kind = if members.len() == 1 {
                AttractorKind::FixedPoint
            } else {
                AttractorKind::Cycle
            };
            attractors.push(Attractor {
                kind,
                states: members
                    .into_iter()
                    .map(|m| State::from_mask(graph.ids.clone(), m))
                    .collect(),
            });
        }
        for m in path {
            color[m as usize] = 2;
        }
    }
    attractors.sort_by_key(|a| a.states[0].mask());
    attractors
}

fn async_attractors(graph: &TransitionGraph, succ: &[Vec<(Option<VarId>, u64)>]) -> Vec<Attractor> {
    let count = succ.len();
    let components = kosaraju(succ);
    let mut terminal = vec![true; components.component_count];
    for (s, edges) in succ.iter().enumerate() {
        for &(_, t) in edges {
            if components.of[s] != components.of[t as usize] {
                terminal[components.of[s]] = false;
            }
        }
    }
    let mut members: Vec<Vec<u64>> = vec![Vec::new(); components.component_count];
    for s in 0..count {
        members[components.of[s]].push(s as u64);
    }
    let mut attractors = Vec::new();
    for (comp, states) in members.into_iter().enumerate() {
        if !terminal[comp] {
            continue;
        }
        let kind = if states.len() == 1 {
            AttractorKind::FixedPoint
        } else if states.iter().all(|&s| succ[s as usize].len() == 1) {
            AttractorKind::Cycle
        } else {
            AttractorKind::Complex
        };
        attractors.push(Attractor {
            kind,
            states: states
                .into_iter()
                .map(|m| State::from_mask(graph.ids.clone(), m))
                .collect(),
        });
    }
    attractors.sort_by_key(|a| a.states[0].mask());
    attractors
}

struct Components {
    of: Vec<usize>,
    component_count: usize,
}

/// Iterative Kosaraju over the successor lists.
fn kosaraju(succ: &[Vec<(Option<VarId>, u64)>]) -> Components {
    let count = succ.len();
    let mut reverse: Vec<Vec<u32>> = vec![Vec::new(); count];
    for (s, edges) in succ.iter().enumerate() {
        for &(_, t) in edges {
            reverse[t as usize].push(s as u32);
        }
    }

    // First pass: forward DFS, record finish order.
    let mut finish = Vec::with_capacity(count);
    let mut seen = vec![false; count];
    for start in 0..count {
        if seen[start] {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        seen[start] = true;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if *next < succ[node].len() {
                let t = succ[node][*next].1 as usize;
                *next += 1;
                if !seen[t] {
                    seen[t] = true;
                    stack.push((t, 0));
                }
            } else {
                finish.push(node);
                stack.pop();
            }
        }
    }

    // Second pass: reverse DFS in decreasing finish order.
    let mut of = vec![usize::MAX; count];
    let mut component_count = 0;
    for &start in finish.iter().rev() {
        if of[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        of[start] = component_count;
        while let Some(node) = stack.pop() {
            for &p in &reverse[node] {
                if of[p as usize] == usize::MAX {
                    of[p as usize] = component_count;
                    stack.push(p as usize);
                }
            }
        }
        component_count += 1;
    }
    Components {
        of,
        component_count,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::Network;

    const BASE6: &str = "\
1: x4 & (!x2 | !x3)
2: x3
3: !x3
4: x2 | x3
5: x1 | x6
6: x6 | x5
";

    fn set(ids: &[VarId]) -> BTreeSet<VarId> {
        ids.iter().copied().collect()
    }

    #[test]
    fn the_worked_subset_update() {
        let net = Network::parse(BASE6).unwrap();
        let x = net.state_from_str("111001").unwrap();
        let next = step(&net, &x, &set(&[1, 2, 4])).unwrap();
        assert_eq!(next.to_string(), "011101");
    }

    #[test]
    fn empty_update_is_identity() {
        let net = Network::parse(BASE6).unwrap();
        let x = net.state_from_str("101010").unwrap();
        assert_eq!(step(&net, &x, &set(&[])).unwrap(), x);
    }

    #[test]
    fn updating_unknown_automaton_fails() {
        let net = Network::negation(3);
        let x = net.zero_state();
        assert_eq!(
            step(&net, &x, &set(&[9])).unwrap_err(),
            Error::UnknownAutomaton(9)
        );
    }

    #[test]
    fn global_negation() {
        let net = Network::negation(3);
        let x = net.state_from_str("010").unwrap();
        assert_eq!(step(&net, &x, &set(&[1, 2, 3])).unwrap().to_string(), "101");
        assert_eq!(parallel_step(&net, &x).unwrap().to_string(), "101");
    }

    #[test]
    fn parallel_step_of_the_running_example() {
        let net = Network::parse(BASE6).unwrap();
        let x = net.state_from_str("111001").unwrap();
        assert_eq!(parallel_step(&net, &x).unwrap().to_string(), "010111");
    }

    #[test]
    fn schedules_run_block_by_block() {
        let net = Network::parse(BASE6).unwrap();
        let x0 = net.state_from_str("111001").unwrap();
        let sched: Schedule = "3,2,4,1".parse().unwrap();
        let traj = run_schedule(&net, &x0, &sched, 4).unwrap();
        assert_eq!(traj.len(), 5);
        assert_eq!(traj[0], x0);
        // After one full period the first automaton reads 0.
        assert_eq!(traj[4].get(1), Some(false));
    }

    #[test]
    fn zero_steps_yield_only_the_start() {
        let net = Network::negation(2);
        let x0 = net.state_from_str("01").unwrap();
        let sched: Schedule = "{1,2}".parse().unwrap();
        assert_eq!(run_schedule(&net, &x0, &sched, 0).unwrap(), vec![x0]);
    }

    #[test]
    fn periodic_schedule_wraps() {
        let net = Network::negation(2);
        let x0 = net.state_from_str("01").unwrap();
        let sched: Schedule = "{1,2}*".parse().unwrap();
        let traj = run_schedule(&net, &x0, &sched, 2).unwrap();
        let strings: Vec<String> = traj.iter().map(State::to_string).collect();
        assert_eq!(strings, vec!["01", "10", "01"]);
    }

    #[test]
    fn non_periodic_schedule_exhausts() {
        let net = Network::negation(2);
        let x0 = net.zero_state();
        let sched: Schedule = "1,2".parse().unwrap();
        assert!(matches!(
            run_schedule(&net, &x0, &sched, 3).unwrap_err(),
            Error::ScheduleExhausted {
                blocks: 2,
                steps: 3
            }
        ));
    }

    #[test]
    fn parallel_graph_of_the_negation_pair() {
        let g = transition_graph(&Network::negation(2), UpdateMode::Parallel).unwrap();
        let succ: Vec<u64> = (0..4).map(|m| g.successor_masks(m)[0].1).collect();
        assert_eq!(succ, vec![3, 2, 1, 0]);
    }

    #[test]
    fn async_graph_edges_match_the_unstable_set() {
        let net = Network::negation(1);
        let g = transition_graph(&net, UpdateMode::Asynchronous).unwrap();
        assert_eq!(g.successor_masks(0), vec![(Some(1), 1)]);
        assert_eq!(g.successor_masks(1), vec![(Some(1), 0)]);

        let id = Network::identity(3);
        let g = transition_graph(&id, UpdateMode::Asynchronous).unwrap();
        assert_eq!(g.edge_count(), 0);
        let with_loops = transition_graph_with(
            &id,
            UpdateMode::Asynchronous,
            &GraphOptions {
                self_loops: true,
                ..GraphOptions::default()
            },
        )
        .unwrap();
        assert_eq!(with_loops.edge_count(), 8);
    }

    #[test]
    fn graph_size_limit() {
        let net = Network::negation(5);
        let err = transition_graph_with(
            &net,
            UpdateMode::Parallel,
            &GraphOptions {
                max_states: 4,
                ..GraphOptions::default()
            },
        )
        .unwrap_err();
        assert_eq!(err, Error::TooManyStates { n: 5, limit: 4 });
    }

    #[test]
    fn fixed_points_of_small_networks() {
        assert!(fixed_points(&Network::negation(4)).unwrap().is_empty());
        assert_eq!(fixed_points(&Network::identity(3)).unwrap().len(), 8);
        // The observed network of the projection example has none: its third
        // automaton negates itself.
        let net = Network::parse("1: 0\n2: !x3\n3: !x3\n5: x6\n6: x6 | x5\n").unwrap();
        assert!(fixed_points(&net).unwrap().is_empty());
    }

    #[test]
    fn deterministic_attractors_of_the_negation_pair() {
        let found = attractors(&Network::negation(2), UpdateMode::Parallel).unwrap();
        assert_eq!(found.len(), 2);
        for a in &found {
            assert_eq!(a.kind, AttractorKind::Cycle);
            assert_eq!(a.states.len(), 2);
        }
        let labels: Vec<String> = found[0].states.iter().map(State::to_string).collect();
        assert_eq!(labels, vec!["00", "11"]);
    }

    #[test]
    fn identity_attractors_are_all_fixed_points() {
        let found = attractors(&Network::identity(3), UpdateMode::Parallel).unwrap();
        assert_eq!(found.len(), 8);
        assert!(found.iter().all(|a| a.kind == AttractorKind::FixedPoint));
        let found = attractors(&Network::identity(3), UpdateMode::Asynchronous).unwrap();
        assert_eq!(found.len(), 8);
        assert!(found.iter().all(|a| a.kind == AttractorKind::FixedPoint));
    }

    #[test]
    fn single_negation_cycles_under_parallel() {
        let found = attractors(&Network::negation(1), UpdateMode::Parallel).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].kind, AttractorKind::Cycle);
        assert_eq!(found[0].states.len(), 2);
    }

    #[test]
    fn async_attractor_of_the_negation_pair_is_complex() {
        // All four states are unstable everywhere and flip one coordinate at
        // a time: the whole space is one terminal component.
        let found = attractors(&Network::negation(2), UpdateMode::Asynchronous).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].kind, AttractorKind::Complex);
        assert_eq!(found[0].states.len(), 4);
    }

    #[test]
    fn scheduled_attractors_use_whole_periods() {
        let net = Network::negation(2);
        let sched: Schedule = "1,2*".parse().unwrap();
        let found = attractors(&net, UpdateMode::Scheduled(sched)).unwrap();
        // One period flips both coordinates in turn, pairing each state with
        // its complement.
        assert_eq!(found.len(), 2);
        assert!(found.iter().all(|a| a.kind == AttractorKind::Cycle));
    }

    #[test]
    fn dot_and_jsonl_exports() {
        let g = transition_graph(&Network::negation(1), UpdateMode::Asynchronous).unwrap();
        let dot = g.to_dot(BitOrder::MsbFirst);
        assert!(dot.contains("\"0\" -> \"1\" [label=\"1\"];"));
        let mut buf = Vec::new();
        g.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "{\"from\":\"0\",\"to\":\"1\",\"via\":1}\n{\"from\":\"1\",\"to\":\"0\",\"via\":1}\n"
        );

        let g = transition_graph(&Network::negation(2), UpdateMode::Parallel).unwrap();
        let dot = g.to_dot(BitOrder::Coord1First);
        assert!(dot.contains("\"10\" -> \"01\";"));
    }
}
