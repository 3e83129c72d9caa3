//! Property suites backed by brute-force oracles on small instances.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use ban_core::{audit, dynamics, perspective, BoolExpr, Network, UpdateMode, VarId};
use common::*;
use proptest::prelude::*;

fn arb_expr(max_var: u32) -> impl Strategy<Value = BoolExpr> {
    let leaf = prop_oneof![
        1 => any::<bool>().prop_map(BoolExpr::Const),
        4 => (1..=max_var).prop_map(BoolExpr::Var),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(BoolExpr::negated),
            prop::collection::vec(inner.clone(), 2..4).prop_map(BoolExpr::And),
            prop::collection::vec(inner.clone(), 2..4).prop_map(BoolExpr::Or),
            prop::collection::vec(inner, 2..4).prop_map(BoolExpr::Xor),
        ]
    })
}

fn arb_network(n: u32) -> impl Strategy<Value = Network> {
    prop::collection::vec(arb_expr(n), n as usize)
        .prop_map(move |fs| Network::new((1..=n).zip(fs).collect()).unwrap())
}

fn arb_blocks(n: u32, max_blocks: usize) -> impl Strategy<Value = Vec<BTreeSet<VarId>>> {
    prop::collection::vec(
        prop::collection::btree_set(1..=n, 1..=n as usize),
        1..=max_blocks,
    )
}

proptest! {
    // Printing and reparsing preserves the truth table.
    #[test]
    fn print_parse_round_trip(e in arb_expr(6)) {
        let reparsed: BoolExpr = e.to_string().parse().unwrap();
        prop_assert!(eval_equal(&e, &reparsed), "{e}");
    }

    // Simplification preserves the truth table and canonicalizes: a second
    // pass is the identity.
    #[test]
    fn simplify_preserves_semantics(e in arb_expr(6)) {
        let s = e.simplify().unwrap();
        prop_assert!(eval_equal(&e, &s), "{e} vs {s}");
        prop_assert_eq!(s.simplify().unwrap(), s.clone(), "second pass moved {}", s);
    }

    // Substitution agrees with evaluating the bindings first.
    #[test]
    fn substitute_evaluate_coherence(
        e in arb_expr(4),
        b1 in arb_expr(4),
        b3 in arb_expr(4),
    ) {
        let mut bindings = BTreeMap::new();
        bindings.insert(1 as VarId, b1);
        bindings.insert(3 as VarId, b3);
        let substituted = e.substitute(&bindings);

        let vars: Vec<VarId> = (1..=4).collect();
        for x in all_states(&vars) {
            let mut bits = Vec::new();
            for &v in &vars {
                match bindings.get(&v) {
                    Some(binding) => bits.push(binding.eval(&x).unwrap()),
                    None => bits.push(x.get(v).unwrap()),
                }
            }
            let shifted = ban_core::State::new(x.ids().to_vec().into(), bits).unwrap();
            prop_assert_eq!(
                substituted.eval(&x).unwrap(),
                e.eval(&shifted).unwrap(),
                "state {}", x
            );
        }
    }

    // Simplification neither adds nor removes essential variables, and the
    // library's essential set matches the evaluation oracle.
    #[test]
    fn essential_vars_stable_under_simplify(e in arb_expr(6)) {
        let oracle = essential_by_eval(&e);
        prop_assert_eq!(e.essential_vars().unwrap(), oracle.clone());
        prop_assert_eq!(e.simplify().unwrap().essential_vars().unwrap(), oracle);
    }

    // The sign is None exactly on inessential variables.
    #[test]
    fn influence_none_iff_inessential(e in arb_expr(5)) {
        let essential = e.essential_vars().unwrap();
        for v in 1..=5 {
            let sign = e.influence_sign(v).unwrap();
            prop_assert_eq!(
                sign == ban_core::InfluenceSign::None,
                !essential.contains(&v),
                "var {} sign {:?}", v, sign
            );
        }
    }

    // Interaction arcs match a double-loop brute force over states.
    #[test]
    fn digraph_matches_brute_force(net in arb_network(5)) {
        let digraph = net.interaction_digraph().unwrap();
        let states = all_states(net.ids());
        for &j in net.ids() {
            let f = net.function(j).unwrap();
            for &i in net.ids() {
                let depends = states.iter().any(|x| {
                    f.eval(x).unwrap() != f.eval(&x.flipped(i).unwrap()).unwrap()
                });
                prop_assert_eq!(digraph.has_arc(i, j), depends, "arc {} -> {}", i, j);
            }
        }
    }

    // A network with a parity-shaped local function is never monotone.
    #[test]
    fn xor_functions_break_monotony(net in arb_network(4)) {
        let has_xor = net.ids().iter().any(|&i| {
            matches!(
                net.function(i).unwrap().simplify().unwrap(),
                BoolExpr::Xor(_)
            )
        });
        if has_xor {
            prop_assert!(!net.is_monotone().unwrap().monotone);
        }
    }

    // A monotony witness proves both orders by direct evaluation.
    #[test]
    fn monotony_witness_is_valid(net in arb_network(4)) {
        let report = net.is_monotone().unwrap();
        if let Some(w) = report.witness {
            prop_assert!(!report.monotone);
            let f = net.function(w.target).unwrap();
            prop_assert_eq!(w.raises_at.get(w.source), Some(false));
            prop_assert_eq!(w.lowers_at.get(w.source), Some(false));
            let up = w.raises_at.updated(w.source, true).unwrap();
            prop_assert!(!f.eval(&w.raises_at).unwrap() && f.eval(&up).unwrap());
            let down = w.lowers_at.updated(w.source, true).unwrap();
            prop_assert!(f.eval(&w.lowers_at).unwrap() && !f.eval(&down).unwrap());
        }
    }

    // Updating outside the unstable set changes nothing.
    #[test]
    fn stable_updates_are_noops(net in arb_network(5), block in prop::collection::btree_set(1u32..=5, 0..=5)) {
        for x in all_states(net.ids()) {
            let unstable = net.unstable_set(&x).unwrap();
            if block.intersection(&unstable).next().is_none() {
                prop_assert_eq!(dynamics::step(&net, &x, &block).unwrap(), x);
            }
        }
    }

    // The parallel map is the full-set update.
    #[test]
    fn parallel_is_full_update(net in arb_network(5)) {
        let everyone: BTreeSet<VarId> = net.ids().iter().copied().collect();
        for x in all_states(net.ids()) {
            prop_assert_eq!(
                dynamics::parallel_step(&net, &x).unwrap(),
                dynamics::step(&net, &x, &everyone).unwrap()
            );
        }
    }

    // Asynchronous out-edges are in bijection with the unstable set, and a
    // state is fixed under every reading at once.
    #[test]
    fn async_edges_match_unstable_sets(net in arb_network(5)) {
        let graph = dynamics::transition_graph(&net, UpdateMode::Asynchronous).unwrap();
        let fixed: BTreeSet<_> = dynamics::fixed_points(&net).unwrap().into_iter().collect();
        for x in all_states(net.ids()) {
            let unstable = net.unstable_set(&x).unwrap();
            let successors = graph.successors(&x).unwrap();
            prop_assert_eq!(successors.len(), unstable.len());
            for (via, y) in successors {
                let id = via.expect("asynchronous edges are labeled");
                prop_assert!(unstable.contains(&id));
                prop_assert_eq!(y, x.flipped(id).unwrap());
            }
            let parallel_fixed = dynamics::parallel_step(&net, &x).unwrap() == x;
            prop_assert_eq!(unstable.is_empty(), parallel_fixed);
            prop_assert_eq!(fixed.contains(&x), parallel_fixed);
        }
    }

    // Fixed points are schedule-invariant.
    #[test]
    fn fixed_points_are_mode_invariant(net in arb_network(4), blocks in arb_blocks(4, 3)) {
        let sched = schedule_of(blocks, false);
        let steps = sched.len();
        for x in dynamics::fixed_points(&net).unwrap() {
            let traj = dynamics::run_schedule(&net, &x, &sched, steps).unwrap();
            for y in traj {
                prop_assert_eq!(y, x.clone());
            }
        }
    }

    // Deterministic attractors partition the recurrent states and are closed
    // under the step map.
    #[test]
    fn deterministic_attractors_are_closed(net in arb_network(4)) {
        let graph = dynamics::transition_graph(&net, UpdateMode::Parallel).unwrap();
        let attractors = dynamics::attractors(&net, UpdateMode::Parallel).unwrap();
        let mut seen = BTreeSet::new();
        for a in &attractors {
            for x in &a.states {
                prop_assert!(seen.insert(x.clone()), "attractors overlap at {}", x);
                let (_, y) = graph.successors(x).unwrap().pop().unwrap();
                prop_assert!(a.states.contains(&y), "attractor not closed at {}", x);
            }
        }
        // Every long-enough trajectory ends inside some attractor.
        for x in all_states(net.ids()) {
            let mut cur = x;
            for _ in 0..16 {
                cur = dynamics::parallel_step(&net, &cur).unwrap();
            }
            prop_assert!(seen.contains(&cur));
        }
    }

    // Disjoint blocks with no cross-dependency fuse into one update.
    #[test]
    fn independent_disjoint_blocks_fuse(net in arb_network(5), w in prop::collection::btree_set(1u32..=5, 1..=5)) {
        let mut independent: BTreeSet<VarId> = BTreeSet::new();
        for &j in net.ids() {
            if w.contains(&j) {
                continue;
            }
            let deps = net.function(j).unwrap().essential_vars().unwrap();
            if deps.intersection(&w).next().is_none() {
                independent.insert(j);
            }
        }
        prop_assume!(!independent.is_empty());
        let fused: BTreeSet<VarId> = w.union(&independent).copied().collect();
        for x in all_states(net.ids()) {
            let sequential = dynamics::step(
                &net,
                &dynamics::step(&net, &x, &w).unwrap(),
                &independent,
            )
            .unwrap();
            let joint = dynamics::step(&net, &x, &fused).unwrap();
            prop_assert_eq!(sequential, joint);
        }
    }

    // Composing one singleton block substitutes exactly that function.
    #[test]
    fn single_block_composition(net in arb_network(4)) {
        for &i in net.ids() {
            let block: BTreeSet<VarId> = [i].into_iter().collect();
            let composed = perspective::compose_along(&net, &[block]).unwrap();
            for &j in net.ids() {
                if j == i {
                    prop_assert!(eval_equal(&composed[&j], net.function(j).unwrap()));
                } else {
                    prop_assert_eq!(composed[&j].clone(), BoolExpr::Var(j));
                }
            }
        }
    }

    // Symbolic composition agrees with concrete schedule runs everywhere.
    #[test]
    fn composition_matches_running(net in arb_network(4), blocks in arb_blocks(4, 4)) {
        let composed = perspective::compose_along(&net, &blocks).unwrap();
        let sched = schedule_of(blocks.clone(), false);
        for x in all_states(net.ids()) {
            let traj = dynamics::run_schedule(&net, &x, &sched, blocks.len()).unwrap();
            let end = traj.last().unwrap();
            for &i in net.ids() {
                prop_assert_eq!(
                    composed[&i].eval(&x).unwrap(),
                    end.get(i).unwrap(),
                    "automaton {} from {}", i, x
                );
            }
        }
    }

    // Whenever hiding succeeds without propagation, the projection agrees
    // with the underlying network on every state, and no hidden variable
    // survives anywhere.
    #[test]
    fn projection_soundness_without_propagation(
        net in arb_network(5),
        blocks in arb_blocks(5, 3),
        hidden_pick in prop::collection::vec(any::<bool>(), 5),
    ) {
        let rhythmic: BTreeSet<VarId> = blocks.iter().flatten().copied().collect();
        let hidden: BTreeSet<VarId> = rhythmic
            .iter()
            .copied()
            .filter(|&id| hidden_pick[(id - 1) as usize])
            .collect();
        prop_assume!(hidden.len() < net.n());
        let spec = perspective::ObservationSpec::new(hidden.clone(), rhythmic, blocks, false);
        match perspective::project(&net, &spec) {
            Err(ban_core::Error::HidingFailed { .. }) => {}
            Err(e) => return Err(TestCaseError::fail(format!("unexpected error {e}"))),
            Ok(projection) => {
                for (_, f) in projection.network.functions() {
                    prop_assert!(f.vars().intersection(&hidden).next().is_none());
                }
                let report = perspective::verify_projection(&net, &spec, &projection).unwrap();
                prop_assert_eq!(report.full_disagreements(), 0);
            }
        }
    }

    // With propagation on, the invariant region never disagrees.
    #[test]
    fn propagation_preserves_the_invariant_region(
        net in arb_network(4),
        blocks in arb_blocks(4, 3),
    ) {
        let rhythmic: BTreeSet<VarId> = blocks.iter().flatten().copied().collect();
        let hidden = BTreeSet::new();
        let spec = perspective::ObservationSpec::new(hidden, rhythmic, blocks, true);
        let projection = perspective::project(&net, &spec).unwrap();
        let report = perspective::verify_projection(&net, &spec, &projection).unwrap();
        prop_assert_eq!(report.invariant_disagreements, 0);
    }

    // Every schedule lands in exactly one class.
    #[test]
    fn classifier_is_a_partition(net in arb_network(4), blocks in arb_blocks(4, 4), periodic in any::<bool>()) {
        let sched = schedule_of(blocks, periodic);
        let audit = audit::classify_schedule(&sched, &net).unwrap();
        let n = net.n();
        let parallel = sched.blocks().iter().all(|b| b.len() == n);
        let asynchronous = sched.blocks().iter().all(|b| b.len() == 1);
        let expected = if parallel {
            audit::ScheduleClass::Parallel
        } else if asynchronous {
            audit::ScheduleClass::Asynchronous
        } else {
            audit::ScheduleClass::Intermediary
        };
        prop_assert_eq!(audit.class, expected);
    }

    // Missing-arc counts are bounded by n(n-1), with equality exactly in the
    // "all pairs conflict, no non-loop arcs" situation.
    #[test]
    fn missing_arc_bound(net in arb_network(4)) {
        let report = audit::sync_conflicts(&net).unwrap();
        let n = net.n();
        prop_assert!(report.ordered_missing_count() <= n * (n - 1));
        let digraph = net.interaction_digraph().unwrap();
        let non_loop_arcs = digraph.arcs.iter().filter(|a| a.source != a.target).count();
        let all_pairs = report.conflicting_pairs.len() == n * (n - 1) / 2;
        prop_assert_eq!(
            report.ordered_missing_count() == n * (n - 1),
            all_pairs && non_loop_arcs == 0
        );
    }
}

#[test]
fn census_matches_direct_arithmetic() {
    use num_bigint::BigUint;
    for n in 1..=16u32 {
        let expected = BigUint::from(2u8).pow(n + 2u32.pow(n));
        match audit::schedule_census(n) {
            audit::Census::Exact(value) => assert_eq!(value, expected, "n = {n}"),
            other => panic!("expected exact value for n = {n}, got {other:?}"),
        }
    }
    assert_eq!(audit::schedule_census(17).to_string(), "2^(17+2^17)");
}
