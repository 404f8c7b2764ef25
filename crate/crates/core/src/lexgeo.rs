//! Lexicographic geodesics `σ_g` and truncated lexicographic types.
//!
//! `σ` is computed for the whole ball layer by layer: candidates for a vertex
//! of length `r + 1` are `σ_p x` over its predecessors `p`, and since all
//! `σ_p` on a layer have the same length, comparing `σ_p x` reduces to
//! comparing the rank of `σ_p` in its layer and then the letter.

use std::collections::HashSet;

use crate::cayley::{Ball, ElementId};
use crate::error::{Error, Result};
use crate::words::{Letter, Word};

const ROOT: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct LexMap {
    parent: Vec<u32>,
    last: Vec<Letter>,
    /// Position of `σ_g` in lexicographic order among its sphere.
    rank: Vec<u32>,
}

pub fn lex_geodesics(ball: &Ball) -> LexMap {
    let n = ball.len();
    let alphabet = ball.alphabet();
    let mut parent = vec![ROOT; n];
    let mut last = vec![Letter(0); n];
    let mut rank = vec![0u32; n];
    for r in 1..=ball.radius() {
        let layer = ball.sphere_ids(r);
        let mut keyed: Vec<((u32, u8), ElementId)> = Vec::with_capacity(layer.len());
        for v in layer {
            let mut best: Option<((u32, u8), ElementId, Letter)> = None;
            for &x in alphabet.letters() {
                let Some(p) = ball.neighbor(v, x.inverse()) else { continue };
                if ball.length(p) + 1 != r {
                    continue;
                }
                let key = (rank[p as usize], alphabet.position(x));
                if best.map_or(true, |(k, _, _)| key < k) {
                    best = Some((key, p, x));
                }
            }
            let (key, p, x) = best.expect("every non-identity vertex has a predecessor");
            parent[v as usize] = p;
            last[v as usize] = x;
            keyed.push((key, v));
        }
        keyed.sort_unstable();
        for (i, &(_, v)) in keyed.iter().enumerate() {
            rank[v as usize] = i as u32;
        }
    }
    LexMap { parent, last, rank }
}

impl LexMap {
    pub fn sigma(&self, g: ElementId) -> Word {
        let mut letters = Vec::new();
        let mut cur = g;
        while self.parent[cur as usize] != ROOT {
            letters.push(self.last[cur as usize]);
            cur = self.parent[cur as usize];
        }
        letters.reverse();
        Word::new(letters)
    }

    /// The `|g| + 1` vertices of `σ_g`, starting at the identity.
    pub fn vertices(&self, g: ElementId) -> Vec<ElementId> {
        let mut out = vec![g];
        let mut cur = g;
        while self.parent[cur as usize] != ROOT {
            cur = self.parent[cur as usize];
            out.push(cur);
        }
        out.reverse();
        out
    }

    pub fn parent(&self, g: ElementId) -> Option<ElementId> {
        let p = self.parent[g as usize];
        (p != ROOT).then_some(p)
    }

    /// Vertex of `σ_g` at distance `i` from the identity, `i ≤ |g|`.
    pub fn vertex_at(&self, ball: &Ball, g: ElementId, i: usize) -> ElementId {
        let mut cur = g;
        for _ in i..ball.length(g) {
            cur = self.parent[cur as usize];
        }
        cur
    }

    pub fn rank(&self, g: ElementId) -> u32 {
        self.rank[g as usize]
    }
}

#[derive(Clone, Debug)]
pub struct LexTypeSample {
    pub base: ElementId,
    pub lookahead: usize,
    pub members: Vec<ElementId>,
}

/// `L_g ∩ B(R)`: the `u` such that `σ_{gu}` passes through `g`.
pub fn lex_type_sample(ball: &Ball, lex: &LexMap, g: ElementId, lookahead: usize) -> Result<LexTypeSample> {
    let len = ball.length(g);
    if len + lookahead > ball.radius() {
        return Err(Error::Guard(format!(
            "|g| + R = {} exceeds ball radius {}",
            len + lookahead,
            ball.radius()
        )));
    }
    let members = ball
        .ids_within(lookahead)
        .filter(|&u| {
            let gu = ball.walk(g, ball.word(u)).expect("guarded walk");
            ball.length(gu) == len + ball.length(u) && lex.vertex_at(ball, gu, len) == g
        })
        .collect();
    Ok(LexTypeSample {
        base: g,
        lookahead,
        members,
    })
}

#[derive(Clone, Debug, Default)]
pub struct PrefixReport {
    pub pairs_checked: usize,
    /// `(g, i)`: the prefix of `σ_g` of length `i` is not `σ` of its endpoint.
    pub violations: Vec<(ElementId, usize)>,
}

/// For every `g` and every prefix of `σ_g`, evaluates the prefix with the
/// oracle and compares it with the stored `σ` of that element.
pub fn verify_prefix_property(ball: &Ball, lex: &LexMap) -> PrefixReport {
    let mut report = PrefixReport::default();
    for g in 0..ball.len() as ElementId {
        let sigma = lex.sigma(g);
        for i in 0..=sigma.len() {
            report.pairs_checked += 1;
            let prefix = sigma.prefix(i);
            let ok = ball
                .lookup(&prefix)
                .is_some_and(|h| lex.sigma(h) == prefix);
            if !ok {
                report.violations.push((g, i));
            }
        }
    }
    report
}

/// Number of distinct samples `L_g ∩ B(R)` among `g` of each length `r` with
/// `r + R ≤ N`.
pub fn count_lex_types(ball: &Ball, lex: &LexMap, lookahead: usize) -> Result<Vec<usize>> {
    if lookahead > ball.radius() {
        return Err(Error::OutOfRange {
            requested: lookahead as f64,
            radius: ball.radius(),
        });
    }
    (0..=ball.radius() - lookahead)
        .map(|r| {
            let mut seen = HashSet::new();
            for g in ball.sphere_ids(r) {
                seen.insert(lex_type_sample(ball, lex, g, lookahead)?.members);
            }
            Ok(seen.len())
        })
        .collect()
}
