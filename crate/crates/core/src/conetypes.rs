//! Cone types, the cone-type automaton and its Perron growth rate.
//!
//! States are truncated signatures of elements of `B(N − R)`. A state records
//! both the cone `T_g ∩ B(R)` and the lexicographic type `L_g ∩ B(R)`, and
//! transitions follow letters `x` with `σ_{gx} = σ_g x`. Paths from the start
//! state are then in bijection with group elements, so the number of paths of
//! length `r` is exactly `|S(r)|` and the Perron value is the growth rate.

use std::collections::HashMap;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use rayon::prelude::*;

use crate::cayley::{annulus, Ball, ElementId};
use crate::error::{Error, Result};
use crate::words::{Letter, Word};

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeSignature {
    pub lookahead: usize,
    /// Ids in `B(R)` of the `u` with `|gu| = |g| + |u|`.
    pub members: Vec<ElementId>,
}

fn check_lookahead(ball: &Ball, g: ElementId, lookahead: usize) -> Result<()> {
    if ball.length(g) + lookahead > ball.radius() {
        return Err(Error::Guard(format!(
            "|g| + R = {} exceeds ball radius {}",
            ball.length(g) + lookahead,
            ball.radius()
        )));
    }
    Ok(())
}

/// `gu` and whether the concatenation of normal forms is geodesic.
fn extend(ball: &Ball, g: ElementId, u: ElementId) -> (ElementId, bool) {
    let gu = ball.walk(g, ball.word(u)).expect("guarded walk stays in the ball");
    (gu, ball.length(gu) == ball.length(g) + ball.length(u))
}

/// `u` lies in `L_g` iff `σ_{gu}` passes through `g`. Normal forms are the
/// lexicographic geodesics, so this is a prefix test on words.
fn on_lex_path(ball: &Ball, g: ElementId, gu: ElementId) -> bool {
    ball.word(gu).letters().starts_with(ball.word(g).letters())
}

pub fn cone_signature(ball: &Ball, g: ElementId, lookahead: usize) -> Result<ConeSignature> {
    check_lookahead(ball, g, lookahead)?;
    let members = ball
        .ids_within(lookahead)
        .filter(|&u| extend(ball, g, u).1)
        .collect();
    Ok(ConeSignature { lookahead, members })
}

/// Lexicographic type sample `L_g ∩ B(R)` as ids.
pub fn lex_signature(ball: &Ball, g: ElementId, lookahead: usize) -> Result<Vec<ElementId>> {
    check_lookahead(ball, g, lookahead)?;
    Ok(ball
        .ids_within(lookahead)
        .filter(|&u| {
            let (gu, geo) = extend(ball, g, u);
            geo && on_lex_path(ball, g, gu)
        })
        .collect())
}

// Bitsets over B(R): cone bits then lex bits.
fn signature_key(ball: &Ball, g: &Word, lookahead: usize) -> Vec<u64> {
    let n = ball.count_within(lookahead);
    let words = n.div_ceil(64);
    let mut key = vec![0u64; 2 * words];
    for u in 0..n as ElementId {
        let gu = ball.oracle().multiply(g, ball.word(u));
        if gu.len() == g.len() + ball.length(u) {
            key[u as usize / 64] |= 1 << (u % 64);
            if gu.letters().starts_with(g.letters()) {
                key[words + u as usize / 64] |= 1 << (u % 64);
            }
        }
    }
    key
}

/// Letters `x` with `σ_{gx} = σ_g x`, and the normal form of `gx`.
fn lex_steps(ball: &Ball, g: &Word) -> Vec<(Letter, Word)> {
    ball.alphabet()
        .letters()
        .iter()
        .filter_map(|&x| {
            let gx = ball.oracle().normal_form(&g.with_letter(x));
            (gx.len() == g.len() + 1 && gx.letters().starts_with(g.letters())).then_some((x, gx))
        })
        .collect()
}

/// Upper limit on states discovered beyond the ball.
pub const MAX_STATES: usize = 100_000;

#[derive(Clone, Debug)]
pub struct ConeAutomaton {
    lookahead: usize,
    alphabet_size: usize,
    start: usize,
    /// Shortlex-least known element carrying each state.
    representatives: Vec<Word>,
    /// Per state, per letter value.
    transitions: Vec<u32>,
    keys: Vec<Vec<u64>>,
    /// State of each element of `B(N − R)`.
    element_state: Vec<u32>,
}

/// Builds the automaton from the signatures of all elements of `B(N − R)`,
/// checking that equal signatures have equal successors wherever the ball
/// allows. States whose transitions the ball cannot see are closed off by
/// following lexicographic successors of a representative through the oracle.
pub fn build_automaton(ball: &Ball, lookahead: usize) -> Result<ConeAutomaton> {
    if lookahead == 0 || 2 * lookahead > ball.radius() {
        return Err(Error::InvalidParameter(format!(
            "lookahead R = {lookahead} needs 1 ≤ R and 2R ≤ N = {}",
            ball.radius()
        )));
    }
    let depth = ball.radius() - lookahead;
    let n = ball.count_within(depth);
    let keys: Vec<Vec<u64>> = (0..n as ElementId)
        .into_par_iter()
        .map(|g| signature_key(ball, ball.word(g), lookahead))
        .collect();

    let size = ball.alphabet().size();
    let mut ids: HashMap<Vec<u64>, u32> = HashMap::new();
    let mut representatives: Vec<Word> = Vec::new();
    let mut witnesses: Vec<ElementId> = Vec::new();
    let mut element_state = Vec::with_capacity(n);
    for (g, key) in keys.into_iter().enumerate() {
        let next = representatives.len() as u32;
        let s = *ids.entry(key).or_insert(next);
        if s == next {
            representatives.push(ball.word(g as ElementId).clone());
            witnesses.push(g as ElementId);
        }
        element_state.push(s);
    }

    let mut transitions = vec![NONE; representatives.len() * size];
    let mut defined = vec![false; representatives.len()];
    for g in 0..ball.count_within(depth - 1) as ElementId {
        let s = element_state[g as usize] as usize;
        let first = !defined[s];
        defined[s] = true;
        let mut seen = 0usize;
        for &x in ball.alphabet().letters() {
            let Some(gx) = ball.neighbor(g, x) else { continue };
            if ball.length(gx) != ball.length(g) + 1 || !on_lex_path(ball, g, gx) {
                continue;
            }
            seen += 1;
            let t = element_state[gx as usize];
            let slot = &mut transitions[s * size + x.index()];
            if *slot == NONE && first {
                *slot = t;
            } else if *slot != t {
                return Err(collision(ball, lookahead, witnesses[s], g));
            }
        }
        let expected = (0..size).filter(|&i| transitions[s * size + i] != NONE).count();
        if seen != expected {
            return Err(collision(ball, lookahead, witnesses[s], g));
        }
    }

    // Close off states first seen on the boundary of B(N − R).
    let mut pending: Vec<usize> = (0..defined.len()).filter(|&s| !defined[s]).collect();
    while let Some(s) = pending.pop() {
        let g = representatives[s].clone();
        for (x, gx) in lex_steps(ball, &g) {
            let key = signature_key(ball, &gx, lookahead);
            let next = representatives.len() as u32;
            let t = *ids.entry(key).or_insert(next);
            if t == next {
                if representatives.len() >= MAX_STATES {
                    return Err(Error::IncompleteState(format!(
                        "more than {MAX_STATES} states at lookahead {lookahead}"
                    )));
                }
                representatives.push(gx);
                transitions.extend(std::iter::repeat(NONE).take(size));
                pending.push(t as usize);
            }
            transitions[s * size + x.index()] = t;
        }
    }
    let mut keys_by_state = vec![Vec::new(); representatives.len()];
    for (k, s) in ids {
        keys_by_state[s as usize] = k;
    }

    Ok(ConeAutomaton {
        lookahead,
        alphabet_size: size,
        start: 0,
        representatives,
        transitions,
        keys: keys_by_state,
        element_state,
    })
}

fn collision(ball: &Ball, lookahead: usize, a: ElementId, b: ElementId) -> Error {
    let f = |g| ball.alphabet().format(ball.word(g));
    Error::SignatureCollision {
        lookahead,
        first: f(a),
        second: f(b),
    }
}

impl ConeAutomaton {
    /// Bare automaton from an edge list, without signatures.
    pub fn from_edges(states: usize, alphabet_size: usize, start: usize, edges: &[(usize, Letter, usize)]) -> Self {
        let mut transitions = vec![NONE; states * alphabet_size];
        for &(s, x, t) in edges {
            transitions[s * alphabet_size + x.index()] = t as u32;
        }
        ConeAutomaton {
            lookahead: 0,
            alphabet_size,
            start,
            representatives: Vec::new(),
            transitions,
            keys: Vec::new(),
            element_state: Vec::new(),
        }
    }

    pub fn lookahead(&self) -> usize {
        self.lookahead
    }

    pub fn num_states(&self) -> usize {
        self.transitions.len() / self.alphabet_size
    }

    pub fn start(&self) -> usize {
        self.start
    }

    /// Shortlex-least known element of the state.
    pub fn representative(&self, s: usize) -> Option<&Word> {
        self.representatives.get(s)
    }

    pub fn transition(&self, s: usize, x: Letter) -> Option<usize> {
        let t = self.transitions[s * self.alphabet_size + x.index()];
        (t != NONE).then_some(t as usize)
    }

    /// Transitions of `s` in letter-value order.
    pub fn successors(&self, s: usize) -> impl Iterator<Item = (Letter, usize)> + '_ {
        (0..self.alphabet_size).filter_map(move |i| {
            let t = self.transitions[s * self.alphabet_size + i];
            (t != NONE).then_some((Letter(i as u8), t as usize))
        })
    }

    /// State of an element of `B(N − R)`.
    pub fn state_of(&self, g: ElementId) -> Option<usize> {
        self.element_state.get(g as usize).map(|&s| s as usize)
    }

    /// Stable short identifier of a state's signature.
    pub fn signature_hash(&self, s: usize) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        for w in &self.keys[s] {
            h.update(w.to_le_bytes());
        }
        hex::encode(&h.finalize()[..8])
    }

    /// Number of accepted paths of each length `0..=r_max` from the start.
    pub fn path_counts(&self, r_max: usize) -> Vec<u128> {
        let n = self.num_states();
        let mut cur = vec![0u128; n];
        cur[self.start] = 1;
        let mut out = vec![1u128];
        for _ in 0..r_max {
            let mut next = vec![0u128; n];
            for (s, &c) in cur.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (_, t) in self.successors(s) {
                    next[t] += c;
                }
            }
            out.push(next.iter().sum());
            cur = next;
        }
        out
    }

    /// Reads a word from the start state.
    pub fn run(&self, w: &Word) -> Option<usize> {
        w.letters()
            .iter()
            .try_fold(self.start, |s, &x| self.transition(s, x))
    }
}

/// Perron value of every strongly connected component, with the component of
/// each state. Components are listed sinks first.
#[derive(Clone, Debug)]
pub struct Components {
    pub members: Vec<Vec<usize>>,
    pub perron: Vec<f64>,
    pub of_state: Vec<usize>,
    pub successors: Vec<Vec<usize>>,
}

const POWER_TOL: f64 = 1e-12;
const POWER_CAP: usize = 200_000;

pub fn components(a: &ConeAutomaton) -> Result<Components> {
    let n = a.num_states();
    let mut graph = DiGraph::<(), ()>::with_capacity(n, n);
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for s in 0..n {
        for (_, t) in a.successors(s) {
            graph.add_edge(nodes[s], nodes[t], ());
        }
    }
    let sccs = tarjan_scc(&graph);
    let mut of_state = vec![0; n];
    let members: Vec<Vec<usize>> = sccs
        .iter()
        .map(|c| {
            let mut m: Vec<usize> = c.iter().map(|v| v.index()).collect();
            m.sort_unstable();
            m
        })
        .collect();
    for (ci, m) in members.iter().enumerate() {
        for &s in m {
            of_state[s] = ci;
        }
    }
    let mut successors = vec![Vec::new(); members.len()];
    for (ci, m) in members.iter().enumerate() {
        for &s in m {
            for (_, t) in a.successors(s) {
                let ct = of_state[t];
                if ct != ci && !successors[ci].contains(&ct) {
                    successors[ci].push(ct);
                }
            }
        }
        successors[ci].sort_unstable();
    }
    let perron = members
        .iter()
        .map(|m| component_perron(a, m, &of_state))
        .collect::<Result<Vec<_>>>()?;
    Ok(Components {
        members,
        perron,
        of_state,
        successors,
    })
}

/// Power iteration on `A + I` restricted to one component; the shift makes
/// the irreducible block primitive. Collatz–Wielandt bounds give the stop rule.
fn component_perron(a: &ConeAutomaton, members: &[usize], of_state: &[usize]) -> Result<f64> {
    let comp = of_state[members[0]];
    let local: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut edges = Vec::new();
    for (i, &s) in members.iter().enumerate() {
        for (_, t) in a.successors(s) {
            if of_state[t] == comp {
                edges.push((i, local[&t]));
            }
        }
    }
    if edges.is_empty() {
        return Ok(0.0);
    }
    let n = members.len();
    let mut v = vec![1.0f64; n];
    let mut residual = f64::INFINITY;
    for _ in 0..POWER_CAP {
        let mut w = v.clone();
        for &(i, j) in &edges {
            w[i] += v[j];
        }
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..n {
            let q = w[i] / v[i];
            lo = lo.min(q);
            hi = hi.max(q);
        }
        residual = (hi - lo) / hi;
        if residual <= POWER_TOL {
            return Ok(0.5 * (lo + hi) - 1.0);
        }
        let top = w.iter().cloned().fold(0.0, f64::max);
        v = w.into_iter().map(|x| x / top).collect();
    }
    Err(Error::NoConvergence {
        iterations: POWER_CAP,
        residual,
    })
}

/// Growth rate: the largest Perron value among components.
pub fn spectral_radius(a: &ConeAutomaton) -> Result<f64> {
    Ok(components(a)?.perron.into_iter().fold(0.0, f64::max))
}

#[derive(Clone, Debug)]
pub struct EssentialClassification {
    pub lambda: f64,
    pub tol: f64,
    /// Best Perron value reachable from each state.
    pub growth: Vec<f64>,
    pub essential: Vec<bool>,
}

impl EssentialClassification {
    pub fn is_essential(&self, s: usize) -> bool {
        self.essential[s]
    }

    pub fn essential_states(&self) -> Vec<usize> {
        (0..self.essential.len()).filter(|&s| self.essential[s]).collect()
    }
}

pub fn classify_essential(a: &ConeAutomaton, lambda: f64, tol: f64) -> Result<EssentialClassification> {
    let c = components(a)?;
    // Sinks come first, so successors are settled before their predecessors.
    let mut best = vec![0.0f64; c.members.len()];
    for ci in 0..c.members.len() {
        let mut v = c.perron[ci];
        for &cj in &c.successors[ci] {
            v = v.max(best[cj]);
        }
        best[ci] = v;
    }
    let growth: Vec<f64> = (0..a.num_states()).map(|s| best[c.of_state[s]]).collect();
    let essential = growth
        .iter()
        .map(|&g| (g - lambda).abs() <= tol * lambda.max(1.0))
        .collect();
    Ok(EssentialClassification {
        lambda,
        tol,
        growth,
        essential,
    })
}

#[derive(Clone, Debug, Default)]
pub struct HeredityReport {
    pub transitions_checked: usize,
    /// `(s, x, t)` with `t` essential but `s` not.
    pub violations: Vec<(usize, Letter, usize)>,
}

pub fn verify_heredity(c: &EssentialClassification, a: &ConeAutomaton) -> HeredityReport {
    let mut report = HeredityReport::default();
    for s in 0..a.num_states() {
        for (x, t) in a.successors(s) {
            report.transitions_checked += 1;
            if c.essential[t] && !c.essential[s] {
                report.violations.push((s, x, t));
            }
        }
    }
    report
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BetaGamma {
    pub beta: f64,
    pub gamma: f64,
}

/// Truncated witnesses for `|T ∩ B(r)| ≥ βλ^r` over essential types and
/// `|T_g ∩ g⁻¹E ∩ A(r,e)| ≥ γλ^r` over essential `g`, for `r` in `1..=r_max`
/// (just `r = 0` when `r_max = 0`).
pub fn estimate_beta_gamma(
    ball: &Ball,
    a: &ConeAutomaton,
    c: &EssentialClassification,
    r_max: usize,
    e: f64,
) -> Result<BetaGamma> {
    let radii: Vec<usize> = if r_max == 0 { vec![0] } else { (1..=r_max).collect() };
    let depth = ball.radius() - a.lookahead;
    let scale = |r: usize| c.lambda.powi(r as i32);

    if r_max > ball.radius() {
        return Err(Error::OutOfRange {
            requested: r_max as f64,
            radius: ball.radius(),
        });
    }
    let mut beta = f64::INFINITY;
    for s in c.essential_states() {
        let g = &a.representatives[s];
        for &r in &radii {
            let count = ball
                .ids_within(r)
                .filter(|&u| ball.oracle().length(&g.concat(ball.word(u))) == g.len() + ball.length(u))
                .count();
            beta = beta.min(count as f64 / scale(r));
        }
    }

    let in_e = |h: ElementId| a.state_of(h).is_some_and(|s| c.essential[s]);
    if depth < r_max {
        return Err(Error::Guard(format!(
            "r_max = {r_max} leaves no room below B({depth}) for essential extensions"
        )));
    }
    let mut gamma = f64::INFINITY;
    for g in ball.ids_within(depth - r_max) {
        if !in_e(g) {
            continue;
        }
        for &r in &radii {
            let ann = annulus(ball, r as f64, e)?;
            let count = ann
                .elements
                .iter()
                .filter(|&&u| {
                    let (gu, geo) = extend(ball, g, u);
                    geo && in_e(gu)
                })
                .count();
            gamma = gamma.min(count as f64 / scale(r));
        }
    }
    Ok(BetaGamma { beta, gamma })
}
