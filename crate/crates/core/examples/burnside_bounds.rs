//! Threshold m₀ for F₂ and the resulting growth bounds for periodic quotients.

use hypergrowth::bounds::{
    burnside_bound_free, find_m0_free, find_m0_general, general_bound_value, ConstantsLedger, FreeBoundParams,
    Provenance, TailExponent,
};

fn main() -> hypergrowth::Result<()> {
    let m0 = find_m0_free(2, 5.0, 64, 1000)?;
    println!("free m0 (k = 2, a = 5): {}", m0.m0);

    for n in [13, 15, 21, 41, 665] {
        let b = burnside_bound_free(&FreeBoundParams { k: 2, n, a: 5.0, m0: m0.m0, n0: 1, eta: 0 })?;
        println!("n = {n:>3}: growth >= {:.15}", b.value);
    }

    let ledger = ConstantsLedger::new()
        .with("lambda", 3.0, Provenance::Exact)
        .with("tau", 1.0, Provenance::Exact)
        .with("delta", 0.0, Provenance::Exact)
        .with("kappa1", 0.9, Provenance::User)
        .with("kappa2", 1.0, Provenance::User);
    let cert = find_m0_general(&ledger, 1.0, 16, 10_000, TailExponent::Four)?;
    println!("general m0 = {} (a = {:.3}, b = {:.3})", cert.m0, cert.a, cert.b);
    for c in &cert.conditions {
        println!("  {}: margin {:.3e}", c.name, c.margin);
    }
    println!("general bound at n = 10^6: {:.9}", general_bound_value(3.0, 5.0, 0.01, 1_000_000)?);
    Ok(())
}
