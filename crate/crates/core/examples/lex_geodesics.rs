//! Lexicographically least geodesics in Z² and the prefix property.

use hypergrowth::cayley::build_ball;
use hypergrowth::lexgeo::{count_lex_types, lex_geodesics, verify_prefix_property};
use hypergrowth::presentation::{CompletionLimits, GroupOracle, Presentation};

fn main() -> hypergrowth::Result<()> {
    let p = Presentation::parse(include_str!("../presentations/z2.grp"))?;
    let oracle = GroupOracle::from_presentation(&p, CompletionLimits::default())?;
    let ball = build_ball(&oracle, 8, None)?;
    let lex = lex_geodesics(&ball);
    let al = ball.alphabet();

    for s in ["bab", "BaB", "abAb", "bbbaa"] {
        let g = ball.lookup(&oracle.normal_form(&al.parse_word(s)?)).expect("inside the ball");
        println!("{s:>6}: sigma = {}", al.format(&lex.sigma(g)));
    }
    let report = verify_prefix_property(&ball, &lex);
    println!("prefix property: {}", report.violations.is_empty());
    println!("lex types with lookahead 2: {:?}", count_lex_types(&ball, &lex, 2)?);
    Ok(())
}
