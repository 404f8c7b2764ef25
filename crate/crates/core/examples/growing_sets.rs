//! The pruning iteration H and the layered set F inside F₂.

use hypergrowth::cayley::build_ball;
use hypergrowth::fset::{build_f, build_h, verify_f_properties, HParams};
use hypergrowth::lexgeo::lex_geodesics;
use hypergrowth::presentation::GroupOracle;

fn main() -> hypergrowth::Result<()> {
    let ball = build_ball(&GroupOracle::free(2), 10, None)?;
    let lex = lex_geodesics(&ball);
    for nu in [0.5, 1.0, 1.8] {
        let params = HParams { r: 2, nu, delta: 0.0, lambda: 3.0 };
        let h = build_h(&ball, &lex, params)?;
        let f = build_f(&h);
        let sizes: Vec<usize> = f.stages.iter().map(Vec::len).collect();
        let report = verify_f_properties(&f, &h, &ball, &lex);
        println!("nu = {nu}: H stages {:?}, F layers {sizes:?}, properties hold: {}", h.stage_sizes(), report.holds());
    }
    Ok(())
}
