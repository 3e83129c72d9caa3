//! Shared test support: seeded generators and evaluation-based oracles.
//!
//! The oracles here deliberately go through `BoolExpr::eval` state by state,
//! independent of the truth-table machinery the library uses internally.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use ban_core::{BoolExpr, Network, Schedule, State, VarId};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random expression over the given variables, biased toward small trees.
pub fn random_expr(rng: &mut ChaCha8Rng, vars: &[VarId], depth: usize) -> BoolExpr {
    if depth == 0 || vars.is_empty() || rng.gen_bool(0.25) {
        if vars.is_empty() || rng.gen_bool(0.1) {
            return BoolExpr::Const(rng.gen());
        }
        return BoolExpr::Var(*vars.choose(rng).unwrap());
    }
    match rng.gen_range(0..4) {
        0 => random_expr(rng, vars, depth - 1).negated(),
        kind => {
            let children: Vec<BoolExpr> = (0..rng.gen_range(2..=3))
                .map(|_| random_expr(rng, vars, depth - 1))
                .collect();
            match kind {
                1 => BoolExpr::And(children),
                2 => BoolExpr::Or(children),
                _ => BoolExpr::Xor(children),
            }
        }
    }
}

/// Random network over ids `1..=n`.
pub fn random_network(rng: &mut ChaCha8Rng, n: u32) -> Network {
    let vars: Vec<VarId> = (1..=n).collect();
    let functions: BTreeMap<VarId, BoolExpr> = vars
        .iter()
        .map(|&i| (i, random_expr(rng, &vars, 3)))
        .collect();
    Network::new(functions).unwrap()
}

/// Random nonempty update blocks over the network's ids.
pub fn random_blocks(
    rng: &mut ChaCha8Rng,
    ids: &[VarId],
    max_blocks: usize,
) -> Vec<BTreeSet<VarId>> {
    let count = rng.gen_range(1..=max_blocks);
    (0..count)
        .map(|_| {
            let size = rng.gen_range(1..=ids.len());
            ids.choose_multiple(rng, size).copied().collect()
        })
        .collect()
}

pub fn schedule_of(blocks: Vec<BTreeSet<VarId>>, periodic: bool) -> Schedule {
    Schedule::new(blocks, periodic).unwrap()
}

/// All states over an id list, ascending.
pub fn all_states(ids: &[VarId]) -> Vec<State> {
    let ids: Arc<[VarId]> = ids.to_vec().into();
    (0u64..1 << ids.len())
        .map(|mask| {
            let bits = (0..ids.len()).map(|k| mask >> k & 1 == 1).collect();
            State::new(ids.clone(), bits).unwrap()
        })
        .collect()
}

/// Truth-table equality by direct evaluation over every assignment.
pub fn eval_equal(a: &BoolExpr, b: &BoolExpr) -> bool {
    let vars: Vec<VarId> = a.vars().union(&b.vars()).copied().collect();
    all_states(&vars)
        .iter()
        .all(|x| a.eval(x).unwrap() == b.eval(x).unwrap())
}

/// Essential variables by direct evaluation: flip each variable everywhere.
pub fn essential_by_eval(e: &BoolExpr) -> BTreeSet<VarId> {
    let vars: Vec<VarId> = e.vars().into_iter().collect();
    let states = all_states(&vars);
    vars.iter()
        .copied()
        .filter(|&v| {
            states
                .iter()
                .any(|x| e.eval(x).unwrap() != e.eval(&x.flipped(v).unwrap()).unwrap())
        })
        .collect()
}
