use hypergrowth::cayley::{build_ball, Ball};
use hypergrowth::fset::{build_f, build_h, greedy_separated, separation_bound, verify_f_properties, verify_h_density, HParams};
use hypergrowth::lexgeo::{lex_geodesics, LexMap};
use hypergrowth::presentation::{CompletionLimits, GroupOracle, Presentation};
use proptest::prelude::*;

fn f2(n: usize) -> (Ball, LexMap) {
    let ball = build_ball(&GroupOracle::free(2), n, None).unwrap();
    let lex = lex_geodesics(&ball);
    (ball, lex)
}

fn tree(nu: f64) -> HParams {
    HParams {
        r: 2,
        nu,
        delta: 0.0,
        lambda: 3.0,
    }
}

#[test]
fn tree_mode_h_and_f() {
    let (ball, lex) = f2(10);
    let h = build_h(&ball, &lex, tree(1.0)).unwrap();
    assert_eq!(h.size(), h.interior);
    let f = build_f(&h);
    assert_eq!(f.stages[0], vec![0]);
    assert_eq!(f.stages[1].len(), 16);
    assert!(f.stages[1].iter().all(|&g| (1..=2).contains(&ball.length(g))));
    let report = verify_f_properties(&f, &h, &ball, &lex);
    assert!(report.holds());
    let all = vec![true; ball.len()];
    assert!(verify_h_density(&h, &all, &ball).violations.is_empty());
    assert!(verify_h_density(&h, &[], &ball).violations.is_empty());

    // 16 < 9ν empties H at the first stage
    let h = build_h(&ball, &lex, tree(1.8)).unwrap();
    assert_eq!(h.size(), 0);
    assert_eq!(h.stages.len(), 2);
    let f = build_f(&h);
    assert_eq!(f.members(), vec![0]);
    let report = verify_f_properties(&f, &h, &ball, &lex);
    assert!(!report.growth_violations.is_empty());
    assert!(!verify_h_density(&h, &all, &ball).violations.is_empty());

    let h = build_h(&ball, &lex, tree(0.0)).unwrap();
    assert_eq!(h.stages.len(), 1);
}

#[test]
fn stages_nest_and_the_weak_definition_holds() {
    let p = Presentation::parse(include_str!("../presentations/genus2.grp")).unwrap();
    let o = GroupOracle::from_presentation(&p, CompletionLimits::default()).unwrap();
    let ball = build_ball(&o, 5, None).unwrap();
    let lex = lex_geodesics(&ball);
    for nu in [0.3, 0.6, 0.9] {
        let params = HParams {
            r: 2,
            nu,
            delta: 0.0,
            lambda: 6.9798,
        };
        let h = build_h(&ball, &lex, params).unwrap();
        for w in h.stages.windows(2) {
            assert!(w[1].iter().zip(&w[0]).all(|(&next, &cur)| !next || cur));
        }
        for (i, stage) in h.stages.iter().enumerate().skip(1) {
            let prev = &h.stages[i - 1];
            for g in 0..h.interior as u32 {
                let enough = h.lex_count(g, prev) as f64 >= params.threshold() * (1.0 - 1e-12);
                assert_eq!(stage[g as usize], prev[g as usize] && enough);
            }
        }
        let f = build_f(&h);
        assert!(f.members().iter().all(|&g| h.contains(g)));
    }
}

proptest! {
    #[test]
    fn separated_subsets(points in prop::collection::vec(0u32..1457, 1..60), t in 0.0f64..4.0) {
        let (ball, _) = f2(6);
        let s = greedy_separated(&ball, &points, t);
        for (i, &a) in s.chosen.iter().enumerate() {
            for &b in &s.chosen[i + 1..] {
                prop_assert!(ball.distance(a, b) as f64 > t);
            }
        }
        for &p in &points {
            prop_assert!(s.chosen.iter().any(|&c| ball.distance(p, c) as f64 <= t));
        }
        prop_assert!(s.ratio() >= separation_bound(&ball, t).unwrap() - 1e-15);
    }
}

#[test]
fn separated_examples() {
    let (ball, _) = f2(6);
    let sphere: Vec<u32> = ball.sphere_ids(2).collect();
    assert_eq!(greedy_separated(&ball, &sphere, 2.0).chosen.len(), 4);
    assert_eq!(greedy_separated(&ball, &sphere, 0.0).chosen.len(), 12);
    assert_eq!(greedy_separated(&ball, &sphere, 4.0).chosen.len(), 1);
}
