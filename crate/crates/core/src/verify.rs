//! The invariant battery behind `hypergrowth verify`.
//!
//! Each bundled group runs a fixed list of checks; group-independent checks on
//! free-group counting and the bound calculators run under `formulas`. A group
//! whose presentation fails to load has every one of its checks marked
//! errored. Reports carry no timings, so repeated runs are byte-identical.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::aperiodic::{count_aperiodic_free, count_dominates_power, verify_free_recurrence, PowerSearch};
use crate::bounds::{f_m_exact, find_m0_free, free_bound_value, general_bound_value, mu_m};
use crate::cayley::{build_ball, Ball, ElementId};
use crate::conetypes::{build_automaton, classify_essential, spectral_radius, verify_heredity};
use crate::error::Result;
use crate::fset::{build_f, build_h, verify_f_properties, HParams};
use crate::lexgeo::{lex_geodesics, verify_prefix_property, LexMap};
use crate::presentation::{CompletionLimits, GroupOracle, Presentation};
use crate::words::{cyclic_reduce, enumerate_reduced, reduce, Alphabet, Word};

pub const FORMULAS: &str = "formulas";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub group: String,
    pub check: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub entries: Vec<Entry>,
    pub passed: usize,
    pub failed: usize,
    pub errored: usize,
}

impl Report {
    fn new(entries: Vec<Entry>) -> Self {
        let count = |s| entries.iter().filter(|e| e.status == s).count();
        Report {
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            errored: count(Status::Error),
            entries,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0 && self.errored == 0
    }

    /// Pretty JSON with sorted keys.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&value).expect("report serializes")
    }
}

/// Sizes used for one bundled group.
#[derive(Clone, Copy, Debug)]
pub struct BundledGroup {
    pub name: &'static str,
    pub file: &'static str,
    pub text: &'static str,
    /// Radius for the closed-form ball count check.
    pub count_radius: usize,
    pub closed_form: Option<fn(usize) -> u128>,
    /// Ball radius and lookahead for the automaton.
    pub automaton: (usize, usize),
    pub expected_lambda: Option<f64>,
    pub prefix_radius: usize,
    /// Radius over which monotonicity along `σ_g` is checked.
    pub monotonicity_radius: Option<usize>,
    pub lex_minimality_radius: Option<usize>,
    /// Tree-mode H/F check: `(N, r, ν)`.
    pub fset: Option<(usize, usize, f64)>,
}

fn free_ball(k: u128) -> fn(usize) -> u128 {
    match k {
        2 => |r| 2 * 3u128.pow(r as u32) - 1,
        _ => |r| (3 * 5u128.pow(r as u32) - 1) / 2,
    }
}

pub fn bundle() -> Vec<BundledGroup> {
    vec![
        BundledGroup {
            name: "f2",
            file: "f2.grp",
            text: include_str!("../presentations/f2.grp"),
            count_radius: 12,
            closed_form: Some(free_ball(2)),
            automaton: (8, 1),
            expected_lambda: Some(3.0),
            prefix_radius: 8,
            monotonicity_radius: Some(10),
            lex_minimality_radius: None,
            fset: Some((10, 2, 1.0)),
        },
        BundledGroup {
            name: "f3",
            file: "f3.grp",
            text: include_str!("../presentations/f3.grp"),
            count_radius: 7,
            closed_form: Some(free_ball(3)),
            automaton: (6, 1),
            expected_lambda: Some(5.0),
            prefix_radius: 6,
            monotonicity_radius: None,
            lex_minimality_radius: None,
            fset: None,
        },
        BundledGroup {
            name: "z2",
            file: "z2.grp",
            text: include_str!("../presentations/z2.grp"),
            count_radius: 12,
            closed_form: Some(|r| 2 * (r as u128).pow(2) + 2 * r as u128 + 1),
            automaton: (12, 2),
            expected_lambda: None,
            prefix_radius: 8,
            monotonicity_radius: Some(8),
            lex_minimality_radius: Some(6),
            fset: None,
        },
        BundledGroup {
            name: "genus2",
            file: "genus2.grp",
            text: include_str!("../presentations/genus2.grp"),
            count_radius: 6,
            closed_form: None,
            automaton: (6, 3),
            expected_lambda: None,
            prefix_radius: 5,
            monotonicity_radius: None,
            lex_minimality_radius: None,
            fset: None,
        },
    ]
}

impl BundledGroup {
    pub fn checks(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.closed_form.is_some() {
            out.push("ball-counts");
        }
        out.push("automaton-paths");
        if self.expected_lambda.is_some() {
            out.push("spectral-radius");
        }
        out.extend(["growth-lower-bound", "heredity", "prefix-property"]);
        if self.lex_minimality_radius.is_some() {
            out.push("lex-minimality");
        }
        if self.monotonicity_radius.is_some() {
            out.push("monotonicity");
        }
        if self.fset.is_some() {
            out.push("f-properties");
        }
        out
    }
}

pub const FORMULA_CHECKS: [&str; 5] = [
    "recurrence",
    "m0-free",
    "fixed-point-growth",
    "power-oracle",
    "bound-calculators",
];

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Run only this group (`formulas` selects the group-independent checks).
    pub group: Option<String>,
    /// Read presentations from this directory instead of the bundled copies.
    pub bundle_dir: Option<std::path::PathBuf>,
}

type Outcome = Result<(bool, String)>;

fn entry(group: &str, check: &str, outcome: Outcome) -> Entry {
    let (status, detail) = match outcome {
        Ok((true, d)) => (Status::Pass, d),
        Ok((false, d)) => (Status::Fail, d),
        Err(e) => (Status::Error, format!("{}: {e}", e.kind())),
    };
    Entry {
        group: group.to_string(),
        check: check.to_string(),
        status,
        detail,
    }
}

pub fn run_battery(opts: &VerifyOptions) -> Report {
    let wanted = |name: &str| opts.group.as_deref().map_or(true, |g| g == name);
    let mut entries = Vec::new();
    for bg in bundle() {
        if !wanted(bg.name) {
            continue;
        }
        let text = match &opts.bundle_dir {
            Some(dir) => std::fs::read_to_string(dir.join(bg.file)).map_err(Into::into),
            None => Ok(bg.text.to_string()),
        };
        entries.extend(run_group(&bg, text));
    }
    if wanted(FORMULAS) {
        entries.extend(run_formulas());
    }
    Report::new(entries)
}

fn load(text: &str) -> Result<GroupOracle> {
    let p = Presentation::parse(text)?;
    GroupOracle::from_presentation(&p, CompletionLimits::default())
}

fn run_group(bg: &BundledGroup, text: Result<String>) -> Vec<Entry> {
    let oracle = match text.and_then(|t| load(&t)) {
        Ok(o) => o,
        Err(e) => {
            let detail = format!("presentation failed to load ({}: {e})", e.kind());
            return bg
                .checks()
                .into_iter()
                .map(|c| Entry {
                    group: bg.name.to_string(),
                    check: c.to_string(),
                    status: Status::Error,
                    detail: detail.clone(),
                })
                .collect();
        }
    };
    bg.checks()
        .into_iter()
        .map(|c| entry(bg.name, c, run_check(bg, &oracle, c)))
        .collect()
}

fn run_check(bg: &BundledGroup, oracle: &GroupOracle, check: &str) -> Outcome {
    match check {
        "ball-counts" => {
            let ball = build_ball(oracle, bg.count_radius, None)?;
            let f = bg.closed_form.expect("closed form");
            let bad: Vec<usize> = ball
                .ball_counts()
                .iter()
                .enumerate()
                .filter(|&(r, &c)| c as u128 != f(r))
                .map(|(r, _)| r)
                .collect();
            Ok((
                bad.is_empty(),
                format!("radius {}: mismatches at {bad:?}", bg.count_radius),
            ))
        }
        "automaton-paths" => {
            let (n, r) = bg.automaton;
            let ball = build_ball(oracle, n, None)?;
            let a = build_automaton(&ball, r)?;
            let paths = a.path_counts(n);
            let ok = paths
                .iter()
                .zip(ball.sphere_counts())
                .all(|(&p, &s)| p == s as u128);
            Ok((ok, format!("N = {n}, R = {r}, {} states", a.num_states())))
        }
        "spectral-radius" => {
            let (n, r) = bg.automaton;
            let ball = build_ball(oracle, n, None)?;
            let lambda = spectral_radius(&build_automaton(&ball, r)?)?;
            let expected = bg.expected_lambda.expect("expected λ");
            Ok((
                (lambda - expected).abs() <= 1e-9,
                format!("λ = {lambda:.12}, expected {expected}"),
            ))
        }
        "growth-lower-bound" => {
            let (n, r) = bg.automaton;
            let ball = build_ball(oracle, n, None)?;
            let lambda = spectral_radius(&build_automaton(&ball, r)?)?;
            let bad: Vec<usize> = ball
                .ball_counts()
                .iter()
                .enumerate()
                .filter(|&(r, &c)| !(c as f64 >= lambda.powi(r as i32)))
                .map(|(r, _)| r)
                .collect();
            Ok((bad.is_empty(), format!("λ = {lambda:.12}, failures at {bad:?}")))
        }
        "heredity" => {
            let (n, r) = bg.automaton;
            let ball = build_ball(oracle, n, None)?;
            let a = build_automaton(&ball, r)?;
            let lambda = spectral_radius(&a)?;
            let c = classify_essential(&a, lambda, 1e-9)?;
            let h = verify_heredity(&c, &a);
            Ok((
                h.violations.is_empty(),
                format!(
                    "{} transitions, {} violations",
                    h.transitions_checked,
                    h.violations.len()
                ),
            ))
        }
        "prefix-property" => {
            let ball = build_ball(oracle, bg.prefix_radius, None)?;
            let p = verify_prefix_property(&ball, &lex_geodesics(&ball));
            Ok((
                p.violations.is_empty(),
                format!(
                    "N = {}, {} prefixes, {} violations",
                    bg.prefix_radius,
                    p.pairs_checked,
                    p.violations.len()
                ),
            ))
        }
        "lex-minimality" => {
            let n = bg.lex_minimality_radius.expect("radius");
            let ball = build_ball(oracle, n, None)?;
            let bad = lex_minimality_failures(&ball, &lex_geodesics(&ball));
            Ok((bad == 0, format!("|g| ≤ {n}, {bad} failures")))
        }
        "monotonicity" => {
            let n = bg.monotonicity_radius.expect("radius");
            let (checked, bad) = monotonicity_failures(oracle, n)?;
            Ok((
                bad == 0,
                format!("|g| ≤ {n}, L in 0..=1, m in 2..=3, {checked} elements, {bad} violations"),
            ))
        }
        "f-properties" => {
            let (n, r, nu) = bg.fset.expect("fset sizes");
            let ball = build_ball(oracle, n, None)?;
            let lex = lex_geodesics(&ball);
            let lambda = spectral_radius(&build_automaton(&ball, 1)?)?;
            let h = build_h(
                &ball,
                &lex,
                HParams {
                    r,
                    nu,
                    delta: 0.0,
                    lambda,
                },
            )?;
            let f = build_f(&h);
            let rep = verify_f_properties(&f, &h, &ball, &lex);
            Ok((
                rep.holds(),
                format!(
                    "N = {n}, r = {r}, ν = {nu}, |F| = {}, {} growth, {} gap, {} outside H",
                    f.size(),
                    rep.growth_violations.len(),
                    rep.gap_violations.len(),
                    rep.outside_h.len()
                ),
            ))
        }
        other => unreachable!("unknown check {other}"),
    }
}

/// Geodesic words of length `|g|`, evaluated by brute force; `σ_g` must be the
/// lexicographically least of those representing `g`.
fn lex_minimality_failures(ball: &Ball, lex: &LexMap) -> usize {
    let alphabet = ball.alphabet();
    let letters = alphabet.letters().to_vec();
    let mut least: HashMap<ElementId, Word> = HashMap::new();
    let q = letters.len();
    for len in 0..=ball.radius() {
        for code in 0..q.pow(len as u32) {
            let w = Word::new((0..len).map(|i| letters[code / q.pow(i as u32) % q]).collect());
            let Some(g) = ball.lookup(&w) else { continue };
            if ball.length(g) != len {
                continue;
            }
            match least.get(&g) {
                Some(cur) if alphabet.lex_compare(cur, &w).is_le() => {}
                _ => {
                    least.insert(g, w);
                }
            }
        }
    }
    (0..ball.len() as ElementId)
        .filter(|g| least.get(g) != Some(&lex.sigma(*g)))
        .count()
}

fn monotonicity_failures(oracle: &GroupOracle, n: usize) -> Result<(usize, usize)> {
    let ball = build_ball(oracle, n + 1, None)?;
    let lex = lex_geodesics(&ball);
    let mut bad = 0;
    for l in 0..=1 {
        for m in 2..=3 {
            let search = PowerSearch::new(&ball, &lex, l, m, 0.0)?;
            let mut aperiodic = vec![false; ball.count_within(n)];
            for g in ball.ids_within(n) {
                aperiodic[g as usize] = search.detect(g)?.is_none();
                if aperiodic[g as usize] {
                    if let Some(p) = lex.parent(g) {
                        bad += usize::from(!aperiodic[p as usize]);
                    }
                }
            }
        }
    }
    Ok((ball.count_within(n), bad))
}

fn run_formulas() -> Vec<Entry> {
    FORMULA_CHECKS
        .iter()
        .map(|&c| entry(FORMULAS, c, run_formula(c)))
        .collect()
}

fn run_formula(check: &str) -> Outcome {
    match check {
        "recurrence" => {
            let mut bad = Vec::new();
            for m in 2..=4 {
                let t = count_aperiodic_free(2, m, 12)?;
                let v = verify_free_recurrence(&t).violations();
                if !v.is_empty() {
                    bad.push((m, v));
                }
            }
            Ok((bad.is_empty(), format!("k = 2, m in 2..=4, s ≤ 12, violations {bad:?}")))
        }
        "m0-free" => {
            let m0 = find_m0_free(2, 5.0, 64, 1000)?.m0;
            let exact = exact_m0_free(2, 5, 80);
            Ok((
                m0 == 5 && exact == Some(5),
                format!("high precision {m0}, exact rational {exact:?}"),
            ))
        }
        "fixed-point-growth" => {
            let mut bad = Vec::new();
            for m in 5..=6 {
                let t = count_aperiodic_free(2, m, 12)?;
                let mu = mu_m(2, m, &BigRational::from_integer(BigInt::from(5)));
                let f = count_dominates_power(&t, &mu);
                if !f.is_empty() {
                    bad.push((m, f));
                }
            }
            Ok((bad.is_empty(), format!("m in 5..=6, s ≤ 12, failures {bad:?}")))
        }
        "power-oracle" => {
            let ball = build_ball(&GroupOracle::free(2), 10, None)?;
            let lex = lex_geodesics(&ball);
            let mut disagreements = 0;
            for l in 0..=2 {
                for m in 2..=3 {
                    let search = PowerSearch::new(&ball, &lex, l, m, 0.0)?;
                    let brute = BrutePowers::new(ball.alphabet(), m, (8 + 2 * l) / m);
                    for g in ball.ids_within(8) {
                        let fast = search.detect(g)?.is_some();
                        if fast != brute.has_power(&ball, &lex, g, l) {
                            disagreements += 1;
                        }
                    }
                }
            }
            Ok((
                disagreements == 0,
                format!("F2, |g| ≤ 8, L in 0..=2, m in 2..=3, {disagreements} disagreements"),
            ))
        }
        "bound-calculators" => Ok(bound_calculators()),
        other => unreachable!("unknown check {other}"),
    }
}

/// Least `m₀` with `f_m(μ_m) ≥ μ_m` on `[m₀, m_max]`, in exact arithmetic.
fn exact_m0_free(k: usize, a: i64, m_max: usize) -> Option<usize> {
    let a = BigRational::from_integer(BigInt::from(a));
    let mut m0 = None;
    for m in 1..=m_max {
        let mu = mu_m(k, m, &a);
        let ok = f_m_exact(k, m, &mu).is_ok_and(|f| f >= mu);
        match (ok, m0) {
            (true, None) => m0 = Some(m),
            (false, _) => m0 = None,
            _ => {}
        }
    }
    m0
}

/// Every cyclically reduced `w` with `1 ≤ |w| ≤ max_root` raised to `m`,
/// compared against `x⁻¹y` for all pairs of neighbourhood points.
struct BrutePowers {
    powers: HashSet<Word>,
}

impl BrutePowers {
    fn new(alphabet: &Alphabet, m: usize, max_root: usize) -> Self {
        let powers = enumerate_reduced(alphabet, max_root)
            .filter(|w| !w.is_empty() && cyclic_reduce(w).len() == w.len())
            .map(|w| reduce(&w.power(m)))
            .collect();
        BrutePowers { powers }
    }

    fn has_power(&self, ball: &Ball, lex: &LexMap, g: ElementId, l: usize) -> bool {
        let mut points: Vec<Word> = Vec::new();
        for v in lex.vertices(g) {
            for u in ball.ids_within(l) {
                points.push(reduce(&ball.word(v).concat(ball.word(u))));
            }
        }
        points.sort_by(|a, b| ball.alphabet().shortlex_compare(a, b));
        points.dedup();
        points.iter().any(|x| {
            points
                .iter()
                .any(|y| self.powers.contains(&reduce(&x.inverse().concat(y))))
        })
    }
}

fn bound_calculators() -> (bool, String) {
    let mut notes = Vec::new();
    let hand = general_bound_value(3.0, 5.0, 0.01, 10_000).ok();
    let hand_ok = hand == Some(2.7);
    notes.push(format!("general hand value {hand:?}"));
    let free_hand = free_bound_value(2, 5.0, 0, 101);
    let expect = 3.0 * (1.0 - 15.0 * 3f64.powf(-50.5));
    let free_ok = (free_hand - expect).abs() <= 1e-12;
    notes.push(format!("free hand value {free_hand:.15}"));

    let ns: Vec<u64> = (0..40).map(|i| 101 + 2 * 7919 * i).chain([999_999_999]).collect();
    let free: Vec<f64> = ns.iter().map(|&n| free_bound_value(2, 5.0, 0, n)).collect();
    let general: Vec<f64> = ns
        .iter()
        .map(|&n| general_bound_value(3.0, 0.05, 0.5, n).unwrap_or(f64::NAN))
        .collect();
    let mono = |v: &[f64]| v.windows(2).all(|w| w[1] >= w[0]);
    let free_limit = (free.last().copied().unwrap_or(0.0) - 3.0).abs();
    let general_limit = (general.last().copied().unwrap_or(0.0) - 3.0).abs();
    notes.push(format!(
        "limits at n = 999999999: free {free_limit:.3e}, general {general_limit:.3e}"
    ));
    let ok = hand_ok
        && free_ok
        && mono(&free)
        && mono(&general)
        && free_limit <= 1e-9
        && general_limit <= 1e-9;
    (ok, notes.join("; "))
}

/// Loads a presentation from disk or a bundled name (`f2`, `genus2`, ...).
pub fn resolve_presentation(name: &str) -> Result<Presentation> {
    if let Some(g) = bundle().into_iter().find(|g| g.name == name) {
        if !Path::new(name).exists() {
            return Presentation::parse(g.text);
        }
    }
    Presentation::load(name)
}
