//! Completes a presentation and reduces a few words to shortlex normal form.

use hypergrowth::presentation::{kb_complete, normal_form, CompletionLimits, Presentation};

fn main() -> hypergrowth::Result<()> {
    let p = Presentation::parse(include_str!("../presentations/genus2.grp"))?;
    for r in &p.relators {
        println!("relator: {}", p.alphabet.format(r));
    }
    let rs = kb_complete(&p, CompletionLimits::default());
    println!("letter order: {}", p.alphabet.format_letter_order());
    println!("{} rules, confluent: {}", rs.rules().len(), rs.is_confluent());
    for (lhs, rhs) in rs.rules().iter().take(8) {
        println!("  {} -> {}", p.alphabet.format(lhs), p.alphabet.format(rhs));
    }

    for s in ["abAB", "abABcd", "aA", "dcDCbaBA", "cdCDab"] {
        let w = p.alphabet.parse_word(s)?;
        let nf = normal_form(&rs, &w)?;
        println!("{s:>10} = {:?}", p.alphabet.format(&nf));
    }
    Ok(())
}
