//! Words without m-th powers in F₂, the recurrence they satisfy, and the
//! same counts through the geodesic-neighbourhood search.

use hypergrowth::aperiodic::{count_aperiodic_free, count_f_lm, verify_free_recurrence};
use hypergrowth::cayley::build_ball;
use hypergrowth::lexgeo::lex_geodesics;
use hypergrowth::presentation::GroupOracle;

fn main() -> hypergrowth::Result<()> {
    let table = count_aperiodic_free(2, 3, 12)?;
    println!("s  |B(s)|   cube-free");
    for (s, c) in table.counts.iter().enumerate() {
        println!("{s:<2} {:<8} {c}", 2 * 3u64.pow(s as u32) - 1);
    }
    let report = verify_free_recurrence(&table);
    println!("recurrence violations: {:?}", report.violations());

    let ball = build_ball(&GroupOracle::free(2), 8, None)?;
    let lex = lex_geodesics(&ball);
    for (l, m) in [(0, 3), (1, 6)] {
        println!("L = {l}, m = {m}: {:?}", count_f_lm(&ball, &lex, l, m, 6, 0.0, None)?);
    }
    Ok(())
}
