use std::collections::{HashMap, VecDeque};

use hypergrowth::cayley::{annulus, build_ball, coornaert_alpha, estimate_delta, gromov_product, growth_upper_estimate, Ball};
use hypergrowth::conetypes::{
    build_automaton, classify_essential, cone_signature, estimate_beta_gamma, spectral_radius, verify_heredity,
    ConeAutomaton,
};
use hypergrowth::lexgeo::{lex_geodesics, lex_type_sample};
use hypergrowth::presentation::{CompletionLimits, GroupOracle, Presentation};
use hypergrowth::words::{Letter, Word};
use num_rational::Ratio;
use proptest::prelude::*;

fn bundled(text: &str) -> GroupOracle {
    GroupOracle::from_presentation(&Presentation::parse(text).unwrap(), CompletionLimits::default()).unwrap()
}

fn z2() -> GroupOracle {
    bundled(include_str!("../presentations/z2.grp"))
}

fn genus2() -> GroupOracle {
    bundled(include_str!("../presentations/genus2.grp"))
}

/// Independent BFS on Z² lattice points.
fn lattice_spheres(n: usize) -> Vec<usize> {
    let mut dist: HashMap<(i32, i32), usize> = HashMap::from([((0, 0), 0)]);
    let mut queue = VecDeque::from([(0, 0)]);
    while let Some(p) = queue.pop_front() {
        let d = dist[&p];
        if d == n {
            continue;
        }
        for q in [(p.0 + 1, p.1), (p.0 - 1, p.1), (p.0, p.1 + 1), (p.0, p.1 - 1)] {
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(q) {
                e.insert(d + 1);
                queue.push_back(q);
            }
        }
    }
    (0..=n).map(|r| dist.values().filter(|&&d| d == r).count()).collect()
}

#[test]
fn ball_examples() {
    let f2 = build_ball(&GroupOracle::free(2), 12, None).unwrap();
    assert_eq!(f2.count_within(2), 17);
    assert_eq!(f2.len(), 1_062_881);
    let z = build_ball(&z2(), 12, None).unwrap();
    assert_eq!(z.sphere_counts(), lattice_spheres(12).as_slice());
    assert_eq!(z.count_within(3), 25);

    assert_eq!(annulus(&f2, 2.0, 1.0).unwrap().elements.len(), 16);
    assert_eq!(annulus(&f2, 0.0, 1.0).unwrap().elements, vec![0]);

    let g = (growth_upper_estimate(&f2.ball_counts()).unwrap() - 1_062_881f64.powf(1.0 / 12.0)).abs();
    assert!(g < 1e-12);
    assert!((growth_upper_estimate(&z.ball_counts()).unwrap() - 313f64.powf(1.0 / 12.0)).abs() < 1e-12);
    let alpha = coornaert_alpha(&f2.ball_counts(), 3.0).unwrap();
    assert!((alpha - (2.0 - 3f64.powi(-12))).abs() < 1e-12);
    let f3 = build_ball(&GroupOracle::free(3), 8, None).unwrap();
    let alpha = coornaert_alpha(&f3.ball_counts(), 5.0).unwrap();
    assert!((alpha - (1.5 - 0.5 * 5f64.powi(-8))).abs() < 1e-12);
}

#[test]
fn gromov_and_delta() {
    let f2 = build_ball(&GroupOracle::free(2), 6, None).unwrap();
    let id = |s: &str| f2.lookup(&f2.alphabet().parse_word(s).unwrap()).unwrap();
    assert_eq!(gromov_product(&f2, id("a"), id("ab"), 0).unwrap(), Ratio::from_integer(1));
    assert_eq!(gromov_product(&f2, id("a"), id("b"), 0).unwrap(), Ratio::from_integer(0));
    assert_eq!(gromov_product(&f2, id("ab"), id("ab"), 0).unwrap(), Ratio::from_integer(2));
    assert_eq!(estimate_delta(&f2), Ratio::from_integer(0));
    let z4 = build_ball(&z2(), 4, None).unwrap();
    let z8 = build_ball(&z2(), 8, None).unwrap();
    assert!(estimate_delta(&z8) > estimate_delta(&z4));
}

proptest! {
    #[test]
    fn metric_axioms_in_genus2(i in 0u32..3193, j in 0u32..3193, k in 0u32..3193) {
        let ball = genus2_ball();
        let (d_ij, d_ji) = (ball.distance(i, j), ball.distance(j, i));
        prop_assert_eq!(d_ij, d_ji);
        prop_assert!(d_ij <= ball.distance(i, k) + ball.distance(k, j));
        prop_assert_eq!(d_ij == 0, i == j);
    }

    #[test]
    fn thin_triangles_in_f2(x in 0u32..161, y in 0u32..161) {
        // in a tree the geodesics [1,x] and [1,y] agree up to the Gromov product
        let ball = f2_ball();
        let gp = gromov_product(ball, x, y, 0).unwrap().to_integer() as usize;
        let (wx, wy) = (ball.word(x), ball.word(y));
        prop_assert_eq!(wx.prefix(gp), wy.prefix(gp));
    }
}

fn genus2_ball() -> &'static Ball {
    static B: std::sync::OnceLock<Ball> = std::sync::OnceLock::new();
    B.get_or_init(|| build_ball(&genus2(), 6, None).unwrap())
}

fn f2_ball() -> &'static Ball {
    static B: std::sync::OnceLock<Ball> = std::sync::OnceLock::new();
    B.get_or_init(|| build_ball(&GroupOracle::free(2), 8, None).unwrap())
}

fn check_automaton(ball: &Ball, a: &ConeAutomaton) {
    let paths = a.path_counts(ball.radius());
    for (r, (&p, &s)) in paths.iter().zip(ball.sphere_counts()).enumerate() {
        assert_eq!(p, s as u128, "radius {r}");
    }
}

#[test]
fn automata_for_bundled_groups() {
    let f2 = build_ball(&GroupOracle::free(2), 8, None).unwrap();
    let a = build_automaton(&f2, 1).unwrap();
    assert_eq!(a.num_states(), 5);
    check_automaton(&f2, &a);
    let c = classify_essential(&a, spectral_radius(&a).unwrap(), 1e-9).unwrap();
    assert!(c.essential.iter().all(|&e| e));

    let f3 = build_ball(&GroupOracle::free(3), 6, None).unwrap();
    let a = build_automaton(&f3, 1).unwrap();
    assert_eq!(a.num_states(), 7);
    assert!((spectral_radius(&a).unwrap() - 5.0).abs() < 1e-9);

    let z = build_ball(&z2(), 12, None).unwrap();
    let a = build_automaton(&z, 2).unwrap();
    check_automaton(&z, &a);
    assert!((spectral_radius(&a).unwrap() - 1.0).abs() < 1e-9);
    assert!(z.sphere_counts()[1..].iter().enumerate().all(|(i, &s)| s == 4 * (i + 1)));

    let g = genus2_ball();
    let a = build_automaton(g, 3).unwrap();
    check_automaton(g, &a);
    let lambda = spectral_radius(&a).unwrap();
    let c = classify_essential(&a, lambda, 1e-9).unwrap();
    assert!(c.is_essential(a.start()));
    assert!(verify_heredity(&c, &a).violations.is_empty());
    let tight = classify_essential(&a, lambda, 1e-10).unwrap();
    assert_eq!(tight.essential, c.essential);
    // path counts beyond the ball grow like λ^r
    let far = a.path_counts(40);
    let ratio = far[40] as f64 / far[39] as f64;
    assert!((ratio - lambda).abs() < 1e-6);
}

#[test]
fn essential_states_are_reachable_perron_components() {
    // start -> 1 (self loops on two letters) and start -> 2 (dead end)
    let edges = [
        (0, Letter(0), 1),
        (0, Letter(2), 2),
        (1, Letter(0), 1),
        (1, Letter(2), 1),
    ];
    let a = ConeAutomaton::from_edges(3, 4, 0, &edges);
    let lambda = spectral_radius(&a).unwrap();
    assert!((lambda - 2.0).abs() < 1e-9);
    let c = classify_essential(&a, lambda, 1e-9).unwrap();
    assert_eq!(c.essential, vec![true, true, false]);
    assert!(verify_heredity(&c, &a).violations.is_empty());
}

#[test]
fn beta_gamma_are_positive() {
    let f2 = build_ball(&GroupOracle::free(2), 8, None).unwrap();
    let a = build_automaton(&f2, 1).unwrap();
    let c = classify_essential(&a, 3.0, 1e-9).unwrap();
    let bg = estimate_beta_gamma(&f2, &a, &c, 0, 1.0).unwrap();
    assert_eq!(bg.beta, 1.0);
    let bg = estimate_beta_gamma(&f2, &a, &c, 3, 1.0).unwrap();
    assert!((bg.beta - 4.0 / 3.0).abs() < 1e-12);
    assert!(bg.gamma > 0.0);

    let g = genus2_ball();
    let a = build_automaton(g, 3).unwrap();
    let c = classify_essential(&a, spectral_radius(&a).unwrap(), 1e-9).unwrap();
    let bg = estimate_beta_gamma(g, &a, &c, 1, 1.0).unwrap();
    assert!(bg.beta > 0.0 && bg.gamma > 0.0);
}

#[test]
fn cone_signatures_match_brute_force() {
    // T_g ∩ B(R) = {u : |gu| = |g| + |u|}, evaluated straight from the oracle
    let g2 = genus2();
    let ball = genus2_ball();
    for g in ball.ids_within(2) {
        let sig = cone_signature(ball, g, 2).unwrap();
        let gw = ball.word(g);
        let brute: Vec<u32> = ball
            .ids_within(2)
            .filter(|&u| g2.length(&gw.concat(ball.word(u))) == gw.len() + ball.length(u))
            .collect();
        assert_eq!(sig.members, brute);
        assert!(sig.members.contains(&0));
    }
    assert_eq!(cone_signature(ball, 0, 2).unwrap().members.len(), ball.count_within(2));
}

#[test]
fn lex_geodesics_are_geodesic_and_inside_cones() {
    for (oracle, n, r) in [(z2(), 8, 2), (genus2(), 5, 2), (GroupOracle::free(2), 6, 2)] {
        let ball = build_ball(&oracle, n, None).unwrap();
        let lex = lex_geodesics(&ball);
        for g in ball.ids_within(n) {
            let s = lex.sigma(g);
            assert_eq!(s.len(), ball.length(g));
            assert_eq!(oracle.normal_form(&s), *ball.word(g));
        }
        for g in ball.ids_within(n - r) {
            let l = lex_type_sample(&ball, &lex, g, r).unwrap();
            let t = cone_signature(&ball, g, r).unwrap();
            assert!(l.members.contains(&0));
            assert!(l.members.iter().all(|u| t.members.contains(u)));
        }
    }
}

#[test]
fn lex_minimality_by_enumeration_in_genus2() {
    let ball = build_ball(&genus2(), 4, None).unwrap();
    let lex = lex_geodesics(&ball);
    let letters = ball.alphabet().letters().to_vec();
    let mut least: HashMap<u32, Word> = HashMap::new();
    for len in 0..=4u32 {
        for code in 0..8usize.pow(len) {
            let w = Word::new((0..len).map(|i| letters[code / 8usize.pow(i) % 8]).collect());
            let g = ball.lookup(&w).unwrap();
            if ball.length(g) != len as usize {
                continue;
            }
            let e = least.entry(g).or_insert_with(|| w.clone());
            if ball.alphabet().lex_compare(&w, e).is_lt() {
                *e = w;
            }
        }
    }
    for g in ball.ids_within(4) {
        assert_eq!(lex.sigma(g), least[&g]);
    }
}
