//! The network itself: automata, local functions, interaction structure.
//!
//! A network is nothing more than one Boolean function per automaton; no
//! update discipline is implied here. Automaton ids need not be contiguous —
//! a network over `{1,2,3,5,6}` indexes its states by the sorted id list.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::{BoolExpr, ConnectorUsage, InfluenceSign, VarId, VarNames, DEFAULT_MAX_SUPPORT};
use crate::state::State;
use crate::table::Table;

#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    ids: Arc<[VarId]>,
    functions: BTreeMap<VarId, BoolExpr>,
}

impl Network {
    /// Build a network from one function per automaton; every variable of
    /// every function must name an automaton of the network.
    pub fn new(functions: BTreeMap<VarId, BoolExpr>) -> Result<Network> {
        if functions.contains_key(&0) {
            return Err(Error::ZeroId);
        }
        let ids: Arc<[VarId]> = functions.keys().copied().collect::<Vec<_>>().into();
        for (&automaton, f) in &functions {
            for var in f.vars() {
                if !functions.contains_key(&var) {
                    return Err(Error::ForeignVariable { automaton, var });
                }
            }
        }
        Ok(Network { ids, functions })
    }

    /// The pure-negation network: `f_i = !x_i` for `i` in `1..=n`.
    pub fn negation(n: u32) -> Network {
        let functions = (1..=n).map(|i| (i, BoolExpr::Var(i).negated())).collect();
        Network::new(functions).expect("negation network is well-formed")
    }

    /// The identity network: `f_i = x_i` for `i` in `1..=n`; every state is a
    /// fixed point.
    pub fn identity(n: u32) -> Network {
        let functions = (1..=n).map(|i| (i, BoolExpr::Var(i))).collect();
        Network::new(functions).expect("identity network is well-formed")
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[VarId] {
        &self.ids
    }

    pub(crate) fn ids_arc(&self) -> Arc<[VarId]> {
        self.ids.clone()
    }

    pub fn contains(&self, id: VarId) -> bool {
        self.functions.contains_key(&id)
    }

    pub fn function(&self, id: VarId) -> Option<&BoolExpr> {
        self.functions.get(&id)
    }

    pub fn functions(&self) -> impl Iterator<Item = (VarId, &BoolExpr)> {
        self.functions.iter().map(|(&id, f)| (id, f))
    }

    /// Position of an automaton in the sorted id list.
    pub(crate) fn position(&self, id: VarId) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    pub fn zero_state(&self) -> State {
        State::zeros(self.ids.clone())
    }

    pub fn state_from_bits(&self, bits: Vec<bool>) -> Result<State> {
        if bits.len() != self.n() {
            return Err(Error::StateLength {
                expected: self.n(),
                got: bits.len(),
            });
        }
        State::new(self.ids.clone(), bits)
    }

    /// Parse a coordinate-1-first bit-string such as `110001`.
    pub fn state_from_str(&self, text: &str) -> Result<State> {
        let bits: Vec<bool> = text
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::parse(
                    1,
                    format!("invalid state character `{other}`"),
                )),
            })
            .collect::<Result<_>>()?;
        self.state_from_bits(bits)
    }

    pub(crate) fn check_state(&self, x: &State) -> Result<()> {
        if *self.ids != *x.ids() {
            return Err(Error::StateIdMismatch);
        }
        Ok(())
    }

    pub(crate) fn eval_function(&self, id: VarId, x: &State) -> Result<bool> {
        self.functions
            .get(&id)
            .ok_or(Error::UnknownAutomaton(id))?
            .eval(x)
    }

    /// The automata able to change in `x`: `U(x) = {i : f_i(x) != x_i}`.
    pub fn unstable_set(&self, x: &State) -> Result<BTreeSet<VarId>> {
        self.check_state(x)?;
        let mut unstable = BTreeSet::new();
        for (&id, f) in &self.functions {
            if f.eval(x)? != x.get(id).expect("state covers the network") {
                unstable.insert(id);
            }
        }
        Ok(unstable)
    }

    /// The signed interaction digraph: an arc `i -> j` for every essential
    /// dependency of `f_j` on `x_i`, labeled with its influence sign.
    pub fn interaction_digraph(&self) -> Result<SignedDigraph> {
        self.interaction_digraph_with_limit(DEFAULT_MAX_SUPPORT)
    }

    pub fn interaction_digraph_with_limit(&self, max_support: usize) -> Result<SignedDigraph> {
        let mut arcs = Vec::new();
        for (&target, f) in &self.functions {
            let table = Table::from_expr(f, max_support)?;
            for j in table.essential_positions() {
                let source = table.vars()[j];
                let sign = match table.influence(j) {
                    (true, false) => InfluenceSign::Positive,
                    (false, true) => InfluenceSign::Negative,
                    (true, true) => InfluenceSign::NonMonotone,
                    (false, false) => unreachable!("essential variables influence the value"),
                };
                arcs.push(SignedArc {
                    source,
                    target,
                    sign,
                });
            }
        }
        arcs.sort_by_key(|a| (a.source, a.target));
        Ok(SignedDigraph {
            vertices: self.ids.to_vec(),
            arcs,
        })
    }

    /// Monotony check with a two-state witness on failure.
    pub fn is_monotone(&self) -> Result<MonotonyReport> {
        self.is_monotone_with_limit(DEFAULT_MAX_SUPPORT)
    }

    /// Scans arcs in `(target, source)` order and returns, for the first
    /// non-monotone arc, the numerically smallest pair of witness states.
    /// Both witness states have the source coordinate at 0; setting it to 1
    /// raises the target function at one state and lowers it at the other.
    pub fn is_monotone_with_limit(&self, max_support: usize) -> Result<MonotonyReport> {
        for (&target, f) in &self.functions {
            let table = Table::from_expr(f, max_support)?;
            for j in 0..table.vars().len() {
                if table.influence(j) != (true, true) {
                    continue;
                }
                let raise_row = table
                    .first_flip_witness(j, false)
                    .expect("a raising pair exists");
                let lower_row = table
                    .first_flip_witness(j, true)
                    .expect("a lowering pair exists");
                let witness = MonotonyWitness {
                    source: table.vars()[j],
                    target,
                    raises_at: self.embed_row(table.vars(), raise_row),
                    lowers_at: self.embed_row(table.vars(), lower_row),
                };
                return Ok(MonotonyReport {
                    monotone: false,
                    witness: Some(witness),
                });
            }
        }
        Ok(MonotonyReport {
            monotone: true,
            witness: None,
        })
    }

    /// Lift an assignment over `vars` into a full network state (other
    /// coordinates 0).
    fn embed_row(&self, vars: &[VarId], row: u64) -> State {
        let mut bits = vec![false; self.n()];
        for (j, &var) in vars.iter().enumerate() {
            if row >> j & 1 == 1 {
                let pos = self.position(var).expect("function variables are automata");
                bits[pos] = true;
            }
        }
        State::new(self.ids.clone(), bits).expect("lengths match")
    }

    /// Connector usage across all local functions.
    pub fn connectors(&self) -> ConnectorUsage {
        let mut usage = ConnectorUsage::default();
        for f in self.functions.values() {
            usage.merge(f.connectors());
        }
        usage
    }

    /// Parse the line-oriented network format: one `<id>: <expression>` per
    /// line, `#` starts a comment, blank lines are ignored.
    pub fn parse(text: &str) -> Result<Network> {
        Network::parse_with_names(text, None)
    }

    pub fn parse_with_names(text: &str, names: Option<&VarNames>) -> Result<Network> {
        let mut functions: BTreeMap<VarId, BoolExpr> = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = match raw.find('#') {
                Some(h) => &raw[..h],
                None => raw,
            };
            if line.trim().is_empty() {
                continue;
            }
            let Some((id_part, expr_part)) = line.split_once(':') else {
                return Err(Error::Parse {
                    line: line_no,
                    col: line.len() + 1,
                    msg: "expected `<id>: <expression>`".into(),
                });
            };
            let id: VarId = id_part.trim().parse().map_err(|_| Error::Parse {
                line: line_no,
                col: 1,
                msg: format!("`{}` is not an automaton id", id_part.trim()),
            })?;
            if id == 0 {
                return Err(Error::Parse {
                    line: line_no,
                    col: 1,
                    msg: "automaton ids start at 1".into(),
                });
            }
            if functions.contains_key(&id) {
                return Err(Error::DuplicateAutomaton(id));
            }
            let expr = crate::parse::parse_expr(expr_part, names)
                .map_err(|e| e.at(line_no, id_part.len() + 1))?;
            functions.insert(id, expr);
        }
        Network::new(functions)
    }
}

impl FromStr for Network {
    type Err = Error;

    fn from_str(s: &str) -> Result<Network> {
        Network::parse(s)
    }
}

impl fmt::Display for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (id, expr) in &self.functions {
            writeln!(f, "{id}: {expr}")?;
        }
        Ok(())
    }
}

/// Interaction digraph with signed arcs.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SignedDigraph {
    pub vertices: Vec<VarId>,
    pub arcs: Vec<SignedArc>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SignedArc {
    pub source: VarId,
    pub target: VarId,
    pub sign: InfluenceSign,
}

impl SignedDigraph {
    pub fn sign(&self, source: VarId, target: VarId) -> Option<InfluenceSign> {
        self.arcs
            .iter()
            .find(|a| a.source == source && a.target == target)
            .map(|a| a.sign)
    }

    pub fn has_arc(&self, source: VarId, target: VarId) -> bool {
        self.sign(source, target).is_some()
    }

    pub fn sources_into(&self, target: VarId) -> Vec<VarId> {
        self.arcs
            .iter()
            .filter(|a| a.target == target)
            .map(|a| a.source)
            .collect()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph interactions {\n");
        for v in &self.vertices {
            out.push_str(&format!("  {v};\n"));
        }
        for a in &self.arcs {
            out.push_str(&format!(
                "  {} -> {} [label=\"{}\"];\n",
                a.source,
                a.target,
                a.sign.symbol()
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// Outcome of the monotony check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotonyReport {
    pub monotone: bool,
    pub witness: Option<MonotonyWitness>,
}

/// Two states proving an arc acts in both directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotonyWitness {
    pub source: VarId,
    pub target: VarId,
    /// Source coordinate is 0 here; setting it to 1 raises the target function.
    pub raises_at: State,
    /// Source coordinate is 0 here; setting it to 1 lowers the target function.
    pub lowers_at: State,
}
