//! Separated subsets, the `H_i` iteration and the growing sets `F_i`, all
//! truncated to a ball.
//!
//! Membership is only decided on the interior `|g| ≤ N − r`, where every
//! extension `gu` with `u ∈ A(r, e)` is still inside the ball. Elements beyond
//! the interior cannot be evaluated and count as members of `H` and `F`, so
//! the boundary never erodes the interior.

use crate::cayley::{annulus, effective_width, Ball, ElementId};
use crate::error::{Error, Result};
use crate::lexgeo::LexMap;

/// Relative slack when comparing a count with `νλ^r`.
const COUNT_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct SeparatedSubset {
    pub threshold: f64,
    pub source_len: usize,
    pub chosen: Vec<ElementId>,
}

impl SeparatedSubset {
    pub fn ratio(&self) -> f64 {
        if self.source_len == 0 {
            1.0
        } else {
            self.chosen.len() as f64 / self.source_len as f64
        }
    }
}

/// Greedy sweep in shortlex order keeping points pairwise farther apart than
/// `threshold`.
pub fn greedy_separated(ball: &Ball, points: &[ElementId], threshold: f64) -> SeparatedSubset {
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut chosen: Vec<ElementId> = Vec::new();
    for &p in &sorted {
        if chosen.iter().all(|&c| ball.distance(p, c) as f64 > threshold) {
            chosen.push(p);
        }
    }
    SeparatedSubset {
        threshold,
        source_len: sorted.len(),
        chosen,
    }
}

/// `1/|B(threshold)|`, the ratio the greedy sweep always achieves.
pub fn separation_bound(ball: &Ball, threshold: f64) -> Result<f64> {
    let r = threshold.max(0.0).floor() as usize;
    if r > ball.radius() {
        return Err(Error::OutOfRange {
            requested: threshold,
            radius: ball.radius(),
        });
    }
    Ok(1.0 / ball.count_within(r) as f64)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HParams {
    pub r: usize,
    pub nu: f64,
    pub delta: f64,
    pub lambda: f64,
}

impl HParams {
    pub fn width(&self) -> f64 {
        effective_width(self.delta)
    }

    pub fn threshold(&self) -> f64 {
        self.nu * self.lambda.powi(self.r as i32)
    }
}

fn meets(count: usize, threshold: f64) -> bool {
    count as f64 >= threshold * (1.0 - COUNT_TOL)
}

/// For each interior `g`, the elements `gu` with `u ∈ L_g ∩ A(r, e)`.
fn lex_extensions(ball: &Ball, lex: &LexMap, p: &HParams, interior: usize) -> Result<Vec<Vec<ElementId>>> {
    let ann = annulus(ball, p.r as f64, p.width())?;
    Ok((0..interior as ElementId)
        .map(|g| {
            let len = ball.length(g);
            ann.elements
                .iter()
                .filter_map(|&u| {
                    let gu = ball.walk(g, ball.word(u)).expect("interior walk");
                    (ball.length(gu) == len + ball.length(u) && lex.vertex_at(ball, gu, len) == g)
                        .then_some(gu)
                })
                .collect()
        })
        .collect())
}

#[derive(Clone, Debug)]
pub struct HIteration {
    pub params: HParams,
    /// Interior elements are the ids `0..interior`.
    pub interior: usize,
    /// Membership of interior elements, one vector per stage `H_0, H_1, ...`.
    pub stages: Vec<Vec<bool>>,
    extensions: Vec<Vec<ElementId>>,
}

impl HIteration {
    pub fn fixed_point(&self) -> &[bool] {
        self.stages.last().expect("at least one stage")
    }

    /// Membership in `H`; elements beyond the interior count as members.
    pub fn contains(&self, g: ElementId) -> bool {
        (g as usize) >= self.interior || self.fixed_point()[g as usize]
    }

    pub fn size(&self) -> usize {
        self.fixed_point().iter().filter(|&&b| b).count()
    }

    pub fn stage_sizes(&self) -> Vec<usize> {
        self.stages
            .iter()
            .map(|s| s.iter().filter(|&&b| b).count())
            .collect()
    }

    pub fn contains_identity(&self) -> bool {
        self.contains(0)
    }

    /// `|L_g ∩ g⁻¹X ∩ A(r, e)|` for an interior `g`, where `X` is given by
    /// interior membership plus everything beyond the interior.
    pub fn lex_count(&self, g: ElementId, member: &[bool]) -> usize {
        self.extensions[g as usize]
            .iter()
            .filter(|&&h| (h as usize) >= self.interior || member[h as usize])
            .count()
    }
}

pub fn build_h(ball: &Ball, lex: &LexMap, params: HParams) -> Result<HIteration> {
    if params.delta > 0.0 && (params.r as f64) < 10.0 * params.delta {
        return Err(Error::InvalidParameter(format!(
            "r = {} is below 10δ = {}",
            params.r,
            10.0 * params.delta
        )));
    }
    if params.r == 0 || 2 * params.r > ball.radius() {
        return Err(Error::Guard(format!(
            "need 1 ≤ r ≤ N/2, got r = {} with N = {}",
            params.r,
            ball.radius()
        )));
    }
    let interior = ball.count_within(ball.radius() - params.r);
    let extensions = lex_extensions(ball, lex, &params, interior)?;
    let threshold = params.threshold();
    let mut h = HIteration {
        params,
        interior,
        stages: vec![vec![true; interior]],
        extensions,
    };
    loop {
        let cur = h.fixed_point();
        let next: Vec<bool> = (0..interior)
            .map(|g| cur[g] && meets(h.lex_count(g as ElementId, cur), threshold))
            .collect();
        if &next == cur {
            break;
        }
        h.stages.push(next);
    }
    Ok(h)
}

#[derive(Clone, Debug)]
pub struct FSet {
    /// Interior elements added at each stage; stage 0 is the identity.
    pub stages: Vec<Vec<ElementId>>,
    member: Vec<bool>,
    interior: usize,
}

impl FSet {
    pub fn contains(&self, g: ElementId) -> bool {
        (g as usize) >= self.interior || self.member[g as usize]
    }

    pub fn members(&self) -> Vec<ElementId> {
        (0..self.interior as ElementId).filter(|&g| self.member[g as usize]).collect()
    }

    pub fn size(&self) -> usize {
        self.member.iter().filter(|&&b| b).count()
    }

    pub fn membership(&self) -> &[bool] {
        &self.member
    }
}

/// `F_{i+1} = ⋃_{g ∈ F_i} g(L_g ∩ g⁻¹H ∩ A(r, e))`, keeping interior elements,
/// until a stage adds nothing new.
pub fn build_f(h: &HIteration) -> FSet {
    let mut member = vec![false; h.interior];
    member[0] = true;
    let mut stages = vec![vec![0 as ElementId]];
    loop {
        let mut next = Vec::new();
        for &g in stages.last().expect("non-empty") {
            for &gu in &h.extensions[g as usize] {
                if (gu as usize) < h.interior && h.contains(gu) && !member[gu as usize] {
                    member[gu as usize] = true;
                    next.push(gu);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_unstable();
        stages.push(next);
    }
    FSet {
        stages,
        member,
        interior: h.interior,
    }
}

#[derive(Clone, Debug, Default)]
pub struct FReport {
    pub identity_in_f: bool,
    pub checked: usize,
    /// `(g, count)` with `count < νλ^r`.
    pub growth_violations: Vec<(ElementId, usize)>,
    /// `(g, x)`: no element of `F` on `σ_g` within `r` before vertex `x`.
    pub gap_violations: Vec<(ElementId, ElementId)>,
    /// Elements of `F` missing from `H`.
    pub outside_h: Vec<ElementId>,
}

impl FReport {
    pub fn holds(&self) -> bool {
        self.identity_in_f
            && self.growth_violations.is_empty()
            && self.gap_violations.is_empty()
            && self.outside_h.is_empty()
    }
}

/// Checks, on the interior: `1 ∈ F`; `|L_g ∩ g⁻¹F ∩ A(r, e)| ≥ νλ^r` for
/// `g ∈ F`; and every vertex of `σ_g`, `g ∈ F`, is within `r` of an earlier
/// vertex in `F`.
pub fn verify_f_properties(f: &FSet, h: &HIteration, ball: &Ball, lex: &LexMap) -> FReport {
    let r = h.params.r;
    let threshold = h.params.threshold();
    let mut report = FReport {
        identity_in_f: f.contains(0),
        ..FReport::default()
    };
    for g in f.members() {
        report.checked += 1;
        if !h.contains(g) {
            report.outside_h.push(g);
        }
        let count = h.lex_count(g, &f.member);
        if !meets(count, threshold) {
            report.growth_violations.push((g, count));
        }
        let mut last_in_f = 0usize;
        for x in lex.vertices(g) {
            let len = ball.length(x);
            if f.contains(x) {
                last_in_f = len;
            } else if len - last_in_f > r {
                report.gap_violations.push((g, x));
            }
        }
    }
    report
}

#[derive(Clone, Debug, Default)]
pub struct DensityReport {
    pub checked: usize,
    /// Essential interior elements with no member of `H` within `4δ`.
    pub violations: Vec<ElementId>,
}

/// `B(g, 4δ) ∩ H ≠ ∅` for every essential interior `g`. `essential` is
/// indexed by element id; ids past its end are skipped.
pub fn verify_h_density(h: &HIteration, essential: &[bool], ball: &Ball) -> DensityReport {
    let radius = (4.0 * h.params.delta).floor() as usize;
    let offsets: Vec<ElementId> = ball.ids_within(radius).collect();
    let mut report = DensityReport::default();
    for g in 0..h.interior.min(essential.len()) as ElementId {
        if !essential[g as usize] {
            continue;
        }
        report.checked += 1;
        let hit = offsets.iter().any(|&u| match ball.walk(g, ball.word(u)) {
            Some(gu) => h.contains(gu),
            None => true,
        });
        if !hit {
            report.violations.push(g);
        }
    }
    report
}

/// `ν = ργλ^{−4δ}/|B(4δ)|` with `ρ = 1/|B(20δ)|`.
pub fn default_nu(ball: &Ball, gamma: f64, lambda: f64, delta: f64) -> Result<f64> {
    let rho = separation_bound(ball, 20.0 * delta)?;
    let b4 = ball.count_within((4.0 * delta).floor() as usize) as f64;
    if 4.0 * delta > ball.radius() as f64 {
        return Err(Error::OutOfRange {
            requested: 4.0 * delta,
            radius: ball.radius(),
        });
    }
    Ok(rho * gamma * lambda.powf(-4.0 * delta) / b4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::build_ball;
    use crate::lexgeo::lex_geodesics;
    use crate::presentation::GroupOracle;

    fn tree(n: usize) -> (Ball, LexMap) {
        let ball = build_ball(&GroupOracle::free(2), n, None).unwrap();
        let lex = lex_geodesics(&ball);
        (ball, lex)
    }

    fn params(nu: f64) -> HParams {
        HParams {
            r: 2,
            nu,
            delta: 0.0,
            lambda: 3.0,
        }
    }

    #[test]
    fn separated_examples() {
        let (ball, _) = tree(4);
        let sphere: Vec<ElementId> = ball.sphere_ids(2).collect();
        let s = greedy_separated(&ball, &sphere, 0.0);
        assert_eq!(s.chosen.len(), 12);
        assert_eq!(s.ratio(), 1.0);
        let s = greedy_separated(&ball, &sphere, 2.0);
        assert_eq!(s.chosen.len(), 4);
        assert!(s.ratio() >= separation_bound(&ball, 2.0).unwrap());
        let s = greedy_separated(&ball, &sphere, 4.0);
        assert_eq!(s.chosen.len(), 1);
    }

    #[test]
    fn h_examples() {
        let (ball, lex) = tree(10);
        let h = build_h(&ball, &lex, params(4.0 / 3.0)).unwrap();
        assert_eq!(h.size(), h.interior);
        assert!(h.contains_identity());
        let h = build_h(&ball, &lex, params(1.8)).unwrap();
        assert_eq!(h.size(), 0);
        assert_eq!(h.stages.len(), 2);
        let h = build_h(&ball, &lex, params(0.0)).unwrap();
        assert_eq!(h.stages.len(), 1);
    }

    #[test]
    fn f_examples() {
        let (ball, lex) = tree(10);
        let h = build_h(&ball, &lex, params(1.0)).unwrap();
        let f = build_f(&h);
        assert_eq!(f.stages[0], vec![0]);
        assert_eq!(f.stages[1].len(), 16);
        assert!(f.stages[1].iter().all(|&g| (1..=2).contains(&ball.length(g))));
        assert!(verify_f_properties(&f, &h, &ball, &lex).holds());

        let h = build_h(&ball, &lex, params(2.0)).unwrap();
        let f = build_f(&h);
        assert_eq!(f.members(), vec![0]);
        let report = verify_f_properties(&f, &h, &ball, &lex);
        assert_eq!(report.growth_violations.len(), 1);
    }

    #[test]
    fn density() {
        let (ball, lex) = tree(8);
        let h = build_h(&ball, &lex, params(1.0)).unwrap();
        let all = vec![true; ball.len()];
        assert!(verify_h_density(&h, &all, &ball).violations.is_empty());
        assert_eq!(verify_h_density(&h, &[], &ball).checked, 0);
        let h = build_h(&ball, &lex, params(2.0)).unwrap();
        assert!(!verify_h_density(&h, &all, &ball).violations.is_empty());
    }

    #[test]
    fn nu_default_in_tree_mode() {
        let (ball, _) = tree(4);
        assert_eq!(default_nu(&ball, 4.0 / 3.0, 3.0, 0.0).unwrap(), 4.0 / 3.0);
    }
}
