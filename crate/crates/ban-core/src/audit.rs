//! Synchronism consistency auditing.
//!
//! Under forced asynchronous updating, two automata that are ever unstable in
//! the same state are implicitly assumed to influence each other — otherwise
//! nothing justifies ruling out their joint update. This module finds those
//! synchronously unstable pairs, checks them against the interaction digraph,
//! counts the arcs such an assumption would require but the digraph lacks,
//! and sizes the space of update disciplines the parallel/asynchronous
//! dichotomy skips over.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;

use crate::dynamics::{NetTables, DEFAULT_MAX_EXHAUSTIVE};
use crate::error::Result;
use crate::expr::{BoolExpr, VarId, DEFAULT_MAX_SUPPORT};
use crate::network::Network;
use crate::schedule::Schedule;
use crate::state::State;

/// Pairs of automata that can be unstable together, and the arcs missing for
/// that simultaneity to be causally accounted for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyncConflictReport {
    /// Unordered pairs `(i, j)` with `i < j` and some state where both are
    /// unstable; ascending.
    pub conflicting_pairs: Vec<(VarId, VarId)>,
    /// Ordered pairs from the conflicting set with no interaction arc;
    /// ascending.
    pub missing_arcs: Vec<(VarId, VarId)>,
    /// First witness state (numeric order) per conflicting pair.
    pub witnesses: BTreeMap<(VarId, VarId), State>,
}

impl SyncConflictReport {
    pub fn ordered_missing_count(&self) -> usize {
        self.missing_arcs.len()
    }

    pub fn unordered_missing_count(&self) -> usize {
        let unordered: BTreeSet<(VarId, VarId)> = self
            .missing_arcs
            .iter()
            .map(|&(i, j)| (i.min(j), i.max(j)))
            .collect();
        unordered.len()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "conflicting_pairs": self.conflicting_pairs,
            "missing_arcs": self.missing_arcs,
            "missing_arcs_ordered": self.ordered_missing_count(),
            "missing_arcs_unordered": self.unordered_missing_count(),
            "witnesses": self
                .witnesses
                .iter()
                .map(|(&(i, j), state)| {
                    serde_json::json!({ "pair": [i, j], "state": state })
                })
                .collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for SyncConflictReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "synchronously unstable pairs: {}",
            self.conflicting_pairs.len()
        )?;
        writeln!(
            f,
            "missing arcs (ordered): {}",
            self.ordered_missing_count()
        )?;
        writeln!(
            f,
            "missing arcs (unordered): {}",
            self.unordered_missing_count()
        )?;
        Ok(())
    }
}

/// Find all synchronously unstable pairs and the arcs their forced
/// asynchrony would presuppose.
///
/// The all-negation family (`f_i = !x_i`) has a closed form — every pair is
/// everywhere synchronously unstable and the digraph has only self-loops, so
/// all `n(n-1)` ordered non-loop arcs are missing — used automatically so the
/// question scales past exhaustive enumeration.
pub fn sync_conflicts(net: &Network) -> Result<SyncConflictReport> {
    sync_conflicts_with_limit(net, DEFAULT_MAX_EXHAUSTIVE)
}

pub fn sync_conflicts_with_limit(net: &Network, max_states: usize) -> Result<SyncConflictReport> {
    if is_negation_family(net) {
        return Ok(negation_family_report(net));
    }
    exhaustive_conflicts(net, max_states)
}

fn exhaustive_conflicts(net: &Network, max_states: usize) -> Result<SyncConflictReport> {
    let tables = NetTables::build(net, max_states)?;
    let digraph = net.interaction_digraph_with_limit(max_states.min(63))?;
    let ids = net.ids();

    let mut conflicting: Vec<(VarId, VarId)> = Vec::new();
    let mut witnesses: BTreeMap<(VarId, VarId), State> = BTreeMap::new();
    for mask in 0..tables.state_count() {
        let unstable = tables.unstable(mask);
        if unstable.count_ones() < 2 {
            continue;
        }
        let members: Vec<usize> = (0..tables.n())
            .filter(|&p| unstable >> p & 1 == 1)
            .collect();
        for (a, &p) in members.iter().enumerate() {
            for &q in &members[a + 1..] {
                let pair = (ids[p], ids[q]);
                witnesses.entry(pair).or_insert_with(|| tables.state(mask));
            }
        }
    }
    conflicting.extend(witnesses.keys().copied());

    let mut missing: Vec<(VarId, VarId)> = Vec::new();
    for &(i, j) in &conflicting {
        if !digraph.has_arc(i, j) {
            missing.push((i, j));
        }
        if !digraph.has_arc(j, i) {
            missing.push((j, i));
        }
    }
    missing.sort_unstable();

    Ok(SyncConflictReport {
        conflicting_pairs: conflicting,
        missing_arcs: missing,
        witnesses,
    })
}

/// Is every local function semantically `!x_i`?
fn is_negation_family(net: &Network) -> bool {
    net.n() >= 2
        && net.functions().all(|(id, f)| {
            let negated = BoolExpr::Var(id).negated();
            f.semantically_equals_with_limit(&negated, DEFAULT_MAX_SUPPORT)
                .unwrap_or(false)
        })
}

fn negation_family_report(net: &Network) -> SyncConflictReport {
    // Every automaton is unstable in every state, so the numerically first
    // witness is always the all-zeros state — the same one the exhaustive
    // sweep finds.
    let ids = net.ids();
    let zero = net.zero_state();
    let mut conflicting = Vec::new();
    let mut witnesses = BTreeMap::new();
    let mut missing = Vec::new();
    for (a, &i) in ids.iter().enumerate() {
        for &j in &ids[a + 1..] {
            conflicting.push((i, j));
            witnesses.insert((i, j), zero.clone());
        }
    }
    for &i in ids {
        for &j in ids {
            if i != j {
                missing.push((i, j));
            }
        }
    }
    SyncConflictReport {
        conflicting_pairs: conflicting,
        missing_arcs: missing,
        witnesses,
    }
}

/// The count of update disciplines neither purely parallel nor purely
/// asynchronous setups consider: `2^(n + 2^n)`, exact up to `n = 16`, in
/// exponent form past that.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Census {
    Exact(BigUint),
    Exponent { n: u32 },
}

pub fn schedule_census(n: u32) -> Census {
    if n <= 16 {
        let exponent = n as usize + (1usize << n);
        Census::Exact(BigUint::from(1u8) << exponent)
    } else {
        Census::Exponent { n }
    }
}

impl fmt::Display for Census {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Census::Exact(value) => write!(f, "{value}"),
            Census::Exponent { n } => write!(f, "2^({n}+2^{n})"),
        }
    }
}

/// The coarse dichotomy a schedule falls into.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScheduleClass {
    /// Every block updates all automata.
    Parallel,
    /// Every block updates exactly one automaton.
    Asynchronous,
    /// Anything in between — the neglected middle ground.
    Intermediary,
}

impl fmt::Display for ScheduleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScheduleClass::Parallel => f.write_str("parallel"),
            ScheduleClass::Asynchronous => f.write_str("asynchronous"),
            ScheduleClass::Intermediary => f.write_str("intermediary"),
        }
    }
}

/// Whether some block jointly updates two automata that are simultaneously
/// unstable in a reachable state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SyncHazard {
    /// State space too large to evaluate.
    NotEvaluated,
    NoneFound,
    Found {
        /// Block position within the (first pass of the) schedule.
        block: usize,
        pair: (VarId, VarId),
        state: State,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleAudit {
    pub class: ScheduleClass,
    pub hazard: SyncHazard,
}

/// Classify a schedule as parallel, asynchronous or intermediary, and report
/// whether it ever exercises synchronism between simultaneously unstable
/// automata.
///
/// For `n = 1` the parallel and asynchronous readings coincide; the schedule
/// is reported parallel. Reachability takes the initial state to be
/// unconstrained, so the states seen before block `k` are the images of the
/// whole space under blocks `0..k` — for a periodic schedule, later passes
/// revisit subsets of those, so one pass decides.
pub fn classify_schedule(sched: &Schedule, net: &Network) -> Result<ScheduleAudit> {
    classify_schedule_with_limit(sched, net, DEFAULT_MAX_EXHAUSTIVE)
}

pub fn classify_schedule_with_limit(
    sched: &Schedule,
    net: &Network,
    max_states: usize,
) -> Result<ScheduleAudit> {
    sched.validate_for(net)?;
    let n = net.n();
    let class = if !sched.is_empty() && sched.blocks().iter().all(|b| b.len() == n) {
        ScheduleClass::Parallel
    } else if !sched.is_empty() && sched.blocks().iter().all(|b| b.len() == 1) {
        ScheduleClass::Asynchronous
    } else {
        ScheduleClass::Intermediary
    };

    let hazard = match NetTables::build(net, max_states) {
        Err(_) => SyncHazard::NotEvaluated,
        Ok(tables) => find_hazard(sched, &tables)?,
    };
    Ok(ScheduleAudit { class, hazard })
}

fn find_hazard(sched: &Schedule, tables: &NetTables) -> Result<SyncHazard> {
    let count = tables.state_count() as usize;
    let mut reachable = vec![true; count];
    for (k, block) in sched.blocks().iter().enumerate() {
        let block_mask = tables.block_mask(block)?;
        if block_mask.count_ones() >= 2 {
            for mask in 0..count as u64 {
                if !reachable[mask as usize] {
                    continue;
                }
                let joint = tables.unstable(mask) & block_mask;
                if joint.count_ones() >= 2 {
                    let ids = tables.ids();
                    let first = joint.trailing_zeros() as usize;
                    let second = (joint & !(1u64 << first)).trailing_zeros() as usize;
                    return Ok(SyncHazard::Found {
                        block: k,
                        pair: (ids[first], ids[second]),
                        state: tables.state(mask),
                    });
                }
            }
        }
        let mut next = vec![false; count];
        for mask in 0..count as u64 {
            if reachable[mask as usize] {
                next[tables.step(mask, block_mask) as usize] = true;
            }
        }
        reachable = next;
    }
    Ok(SyncHazard::NoneFound)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negation_triple_conflicts_everywhere() {
        let report = sync_conflicts(&Network::negation(3)).unwrap();
        assert_eq!(report.conflicting_pairs, vec![(1, 2), (1, 3), (2, 3)]);
        assert_eq!(report.ordered_missing_count(), 6);
        assert_eq!(report.unordered_missing_count(), 3);
        assert_eq!(report.witnesses[&(1, 2)].to_string(), "000");
    }

    #[test]
    fn identity_network_has_no_conflicts() {
        let report = sync_conflicts(&Network::identity(3)).unwrap();
        assert!(report.conflicting_pairs.is_empty());
        assert!(report.missing_arcs.is_empty());
    }

    #[test]
    fn the_large_negation_count() {
        let report = sync_conflicts(&Network::negation(153)).unwrap();
        assert_eq!(report.ordered_missing_count(), 23256);
        assert_eq!(report.conflicting_pairs.len(), 153 * 152 / 2);
    }

    #[test]
    fn closed_form_matches_exhaustive_small() {
        for n in 2..=8 {
            let net = Network::negation(n);
            let fast = negation_family_report(&net);
            let slow = exhaustive_conflicts(&net, 16).unwrap();
            assert_eq!(fast, slow, "n = {n}");
        }
    }

    #[test]
    fn conflicts_respect_existing_arcs() {
        // f1 = x2, f2 = x1: both unstable in 01 and 10, but the arcs exist
        // in both directions, so nothing is missing.
        let net = Network::parse("1: x2\n2: x1\n").unwrap();
        let report = sync_conflicts(&net).unwrap();
        assert_eq!(report.conflicting_pairs, vec![(1, 2)]);
        assert!(report.missing_arcs.is_empty());
    }

    #[test]
    fn census_values() {
        assert_eq!(schedule_census(1).to_string(), "8");
        assert_eq!(schedule_census(2).to_string(), "64");
        assert_eq!(schedule_census(3).to_string(), "2048");
        assert_eq!(schedule_census(153).to_string(), "2^(153+2^153)");
        match schedule_census(4) {
            Census::Exact(v) => assert_eq!(v, BigUint::from(1u8) << 20),
            other => panic!("expected exact census, got {other:?}"),
        }
    }

    #[test]
    fn classification_partition() {
        let net = Network::negation(3);
        let audit = |s: &str| classify_schedule(&s.parse().unwrap(), &net).unwrap();
        assert_eq!(audit("{1,2,3}*").class, ScheduleClass::Parallel);
        assert_eq!(audit("3,2,1*").class, ScheduleClass::Asynchronous);
        assert_eq!(audit("{1,2},3").class, ScheduleClass::Intermediary);
        assert_eq!(audit("{1,2,3},1").class, ScheduleClass::Intermediary);

        // One automaton: the two readings coincide; report parallel.
        let single = Network::negation(1);
        let audit = classify_schedule(&"1*".parse().unwrap(), &single).unwrap();
        assert_eq!(audit.class, ScheduleClass::Parallel);
    }

    #[test]
    fn hazard_detection() {
        let net = Network::negation(2);
        let audit = classify_schedule(&"{1,2}*".parse().unwrap(), &net).unwrap();
        match audit.hazard {
            SyncHazard::Found { block, pair, state } => {
                assert_eq!(block, 0);
                assert_eq!(pair, (1, 2));
                assert_eq!(state.to_string(), "00");
            }
            other => panic!("expected a hazard, got {other:?}"),
        }

        // Sequential singletons never update two automata at once.
        let audit = classify_schedule(&"1,2*".parse().unwrap(), &net).unwrap();
        assert_eq!(audit.hazard, SyncHazard::NoneFound);

        // Identity network: nothing is ever unstable.
        let audit = classify_schedule(&"{1,2}*".parse().unwrap(), &Network::identity(2)).unwrap();
        assert_eq!(audit.hazard, SyncHazard::NoneFound);
    }

    #[test]
    fn hazard_uses_reachability_not_the_whole_space() {
        // f1 = 1, f2 = x1: after updating 1, automaton 1 is stable in every
        // reachable state, and {1,2} only ever fires on those.
        let net = Network::parse("1: 1\n2: x1\n").unwrap();
        let audit = classify_schedule(&"1,{1,2}".parse().unwrap(), &net).unwrap();
        assert_eq!(audit.hazard, SyncHazard::NoneFound);
        // Flipping the order exposes the joint instability at 00.
        let audit = classify_schedule(&"{1,2},1".parse().unwrap(), &net).unwrap();
        assert!(matches!(audit.hazard, SyncHazard::Found { .. }));
    }
}
