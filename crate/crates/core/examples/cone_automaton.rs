//! Cone types of the genus-2 group: automaton size, growth rate from the
//! transition matrix, essential states, and the path counts that should
//! reproduce the sphere sizes.

use hypergrowth::cayley::build_ball;
use hypergrowth::conetypes::{build_automaton, classify_essential, spectral_radius, verify_heredity};
use hypergrowth::presentation::{CompletionLimits, GroupOracle, Presentation};

fn main() -> hypergrowth::Result<()> {
    let p = Presentation::parse(include_str!("../presentations/genus2.grp"))?;
    let oracle = GroupOracle::from_presentation(&p, CompletionLimits::default())?;
    let ball = build_ball(&oracle, 6, None)?;
    let a = build_automaton(&ball, 3)?;

    let lambda = spectral_radius(&a)?;
    let c = classify_essential(&a, lambda, 1e-9)?;
    println!("states: {}", a.num_states());
    println!("lambda: {lambda:.12}");
    println!("essential: {} of {}", c.essential_states().len(), a.num_states());
    println!("heredity holds: {}", verify_heredity(&c, &a).violations.is_empty());

    let paths = a.path_counts(6);
    for (r, (n, s)) in paths.iter().zip(ball.sphere_counts()).enumerate() {
        println!("r = {r}: paths {n}, sphere {s}");
    }
    Ok(())
}
