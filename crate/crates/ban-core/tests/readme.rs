//! The README library example, kept compiling and honest.

use ban_core::{dynamics, perspective, Network, UpdateMode};

#[test]
fn readme_example() -> Result<(), ban_core::Error> {
    let net = Network::parse("1: !x2\n2: x1\n")?;
    let graph = net.interaction_digraph()?;
    assert_eq!(graph.arcs.len(), 2);

    let spec: perspective::ObservationSpec =
        "hidden=; rhythm=1,2; micro=1,2; propagate=off".parse()?;
    let projection = perspective::project(&net, &spec)?;
    let report = perspective::verify_projection(&net, &spec, &projection)?;
    assert_eq!(report.full_disagreements(), 0);

    for attractor in dynamics::attractors(&net, UpdateMode::Parallel)? {
        println!("{:?}: {} states", attractor.kind, attractor.states.len());
    }

    let attractors = dynamics::attractors(&net, UpdateMode::Parallel)?;
    assert_eq!(attractors.len(), 1);
    assert_eq!(attractors[0].states.len(), 4);
    Ok(())
}
