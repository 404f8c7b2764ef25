//! Sphere and ball counts for the genus-2 surface group, with a thinness
//! estimate and the crude growth bound from the counts.

use hypergrowth::cayley::{build_ball, estimate_delta_within, growth_upper_estimate};
use hypergrowth::presentation::{CompletionLimits, GroupOracle, Presentation};

fn main() -> hypergrowth::Result<()> {
    let p = Presentation::parse(include_str!("../presentations/genus2.grp"))?;
    let oracle = GroupOracle::from_presentation(&p, CompletionLimits::default())?;
    let ball = build_ball(&oracle, 6, None)?;

    println!("r  sphere  ball");
    for (r, (s, b)) in ball.sphere_counts().iter().zip(ball.ball_counts()).enumerate() {
        println!("{r:<2} {s:<7} {b}");
    }
    let counts = ball.ball_counts();
    println!("growth <= {:.4}", growth_upper_estimate(&counts)?);
    println!("delta on B(2) = {}", estimate_delta_within(&ball, 2));
    Ok(())
}
