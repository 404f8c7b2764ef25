//! Exhaustive Cayley-ball geometry.
//!
//! A [`Ball`] stores every element of length at most `N` as its normal form,
//! in shortlex order, together with the generator edges that stay inside the
//! ball. Metric quantities are computed from normal forms, so they are exact;
//! operations that take several points still refuse arguments outside the
//! core `B(N/2)` where pairwise products are guaranteed to be in the ball.

use std::collections::HashMap;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::presentation::GroupOracle;
use crate::words::{Alphabet, Letter, Word};

pub type ElementId = u32;

const NONE: u32 = u32::MAX;

pub struct Ball {
    oracle: GroupOracle,
    radius: usize,
    elements: Vec<Word>,
    index: HashMap<Word, ElementId>,
    // elements.len() * alphabet.size(), indexed by letter value.
    neighbors: Vec<u32>,
    spheres: Vec<usize>,
}

impl std::fmt::Debug for Ball {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Ball")
            .field("radius", &self.radius)
            .field("spheres", &self.spheres)
            .finish()
    }
}

/// Exact enumeration of `B(N)`. `budget` caps the number of elements.
pub fn build_ball(oracle: &GroupOracle, radius: usize, budget: Option<usize>) -> Result<Ball> {
    let alphabet = oracle.alphabet().clone();
    let size = alphabet.size();
    let mut elements = vec![Word::identity()];
    let mut index = HashMap::new();
    index.insert(Word::identity(), 0);
    let mut neighbors = vec![NONE; size];
    let mut spheres = vec![1usize];
    let mut layer_start = 0usize;

    for r in 0..=radius {
        let layer_end = elements.len();
        for g in layer_start..layer_end {
            for &x in alphabet.letters() {
                if neighbors[g * size + x.index()] != NONE {
                    continue;
                }
                let h = oracle.normal_form(&elements[g].with_letter(x));
                let hid = match index.get(&h) {
                    Some(&id) => id,
                    None if h.len() == r + 1 && r < radius => {
                        if let Some(b) = budget {
                            if elements.len() >= b {
                                return Err(Error::BallBudget {
                                    budget: b,
                                    radius_reached: r,
                                });
                            }
                        }
                        let id = elements.len() as u32;
                        index.insert(h.clone(), id);
                        elements.push(h);
                        neighbors.extend(std::iter::repeat(NONE).take(size));
                        id
                    }
                    None => continue,
                };
                neighbors[g * size + x.index()] = hid;
                neighbors[hid as usize * size + x.inverse().index()] = g as u32;
            }
        }
        if r < radius {
            spheres.push(elements.len() - layer_end);
        }
        layer_start = layer_end;
    }

    Ok(Ball {
        oracle: oracle.clone(),
        radius,
        elements,
        index,
        neighbors,
        spheres,
    })
}

impl Ball {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn oracle(&self) -> &GroupOracle {
        &self.oracle
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.oracle.alphabet()
    }

    pub fn word(&self, g: ElementId) -> &Word {
        &self.elements[g as usize]
    }

    /// `|g|`.
    pub fn length(&self, g: ElementId) -> usize {
        self.elements[g as usize].len()
    }

    pub fn id_of(&self, w: &Word) -> Option<ElementId> {
        self.index.get(w).copied()
    }

    /// Normal form lookup of an arbitrary word.
    pub fn lookup(&self, w: &Word) -> Option<ElementId> {
        self.id_of(&self.oracle.normal_form(w))
    }

    pub fn neighbor(&self, g: ElementId, x: Letter) -> Option<ElementId> {
        let n = self.neighbors[g as usize * self.alphabet().size() + x.index()];
        (n != NONE).then_some(n)
    }

    /// Follows generator edges from `g`; `None` if the path leaves the ball.
    pub fn walk(&self, g: ElementId, w: &Word) -> Option<ElementId> {
        w.letters()
            .iter()
            .try_fold(g, |cur, &x| self.neighbor(cur, x))
    }

    /// `|S(r)|` for `r = 0..=N`.
    pub fn sphere_counts(&self) -> &[usize] {
        &self.spheres
    }

    /// `|B(r)|` for `r = 0..=N`.
    pub fn ball_counts(&self) -> Vec<usize> {
        self.spheres
            .iter()
            .scan(0usize, |acc, &s| {
                *acc += s;
                Some(*acc)
            })
            .collect()
    }

    /// Elements of `B(r)` are exactly the ids `0..count_within(r)`.
    pub fn count_within(&self, r: usize) -> usize {
        self.spheres[..=r.min(self.radius)].iter().sum()
    }

    pub fn ids_within(&self, r: usize) -> std::ops::Range<ElementId> {
        0..self.count_within(r) as ElementId
    }

    pub fn sphere_ids(&self, r: usize) -> std::ops::Range<ElementId> {
        let lo = if r == 0 { 0 } else { self.count_within(r - 1) };
        lo as ElementId..self.count_within(r) as ElementId
    }

    /// Exact `d(g, h)` from the normal form of `g⁻¹h`.
    pub fn distance(&self, g: ElementId, h: ElementId) -> usize {
        self.oracle.distance(self.word(g), self.word(h))
    }

    /// Normal form of `g·w`.
    pub fn translate(&self, g: ElementId, w: &Word) -> Word {
        self.oracle.multiply(self.word(g), w)
    }

    fn core_radius(&self) -> usize {
        self.radius / 2
    }

    fn require_core(&self, g: ElementId) -> Result<()> {
        if self.length(g) > self.core_radius() {
            return Err(Error::Guard(format!(
                "|{}| = {} exceeds N/2 = {}",
                self.alphabet().format(self.word(g)),
                self.length(g),
                self.core_radius()
            )));
        }
        Ok(())
    }
}

/// Effective annulus width for a hyperbolicity constant: `max(9δ, 1)`.
pub fn effective_width(delta: f64) -> f64 {
    (9.0 * delta).max(1.0)
}

#[derive(Clone, Debug)]
pub struct Annulus {
    pub r: f64,
    pub e: f64,
    pub elements: Vec<ElementId>,
}

/// `A(r, e) = { g : r − e ≤ |g| ≤ r }`, with `e` clamped to at least 1.
pub fn annulus(ball: &Ball, r: f64, e: f64) -> Result<Annulus> {
    if r > ball.radius() as f64 || r < 0.0 {
        return Err(Error::OutOfRange {
            requested: r,
            radius: ball.radius(),
        });
    }
    let e = e.max(1.0);
    let hi = r.floor() as usize;
    let lo = (r - e).ceil().max(0.0) as usize;
    let start = if lo == 0 { 0 } else { ball.count_within(lo - 1) };
    let end = ball.count_within(hi);
    Ok(Annulus {
        r,
        e,
        elements: (start as ElementId..end as ElementId).collect(),
    })
}

/// `⟨x | y⟩_z`, a half-integer.
pub fn gromov_product(ball: &Ball, x: ElementId, y: ElementId, z: ElementId) -> Result<Ratio<i64>> {
    for g in [x, y, z] {
        ball.require_core(g)?;
    }
    let dxz = ball.distance(x, z) as i64;
    let dyz = ball.distance(y, z) as i64;
    let dxy = ball.distance(x, y) as i64;
    Ok(Ratio::new(dxz + dyz - dxy, 2))
}

/// Least `δ̂` such that `⟨x|y⟩₁ ≥ min(⟨x|z⟩₁, ⟨z|y⟩₁) − δ̂` over the core
/// `B(N/2)`. A lower bound for the four-point constant.
pub fn estimate_delta(ball: &Ball) -> Ratio<i64> {
    estimate_delta_within(ball, ball.radius() / 2)
}

/// Same scan restricted to `B(min(core, N/2))`.
pub fn estimate_delta_within(ball: &Ball, core: usize) -> Ratio<i64> {
    let n = ball.count_within(core.min(ball.radius() / 2));
    if n <= 1 {
        return Ratio::from_integer(0);
    }
    // Doubled products 2⟨x|y⟩₁ = |x| + |y| − d(x, y) are integers.
    let dist: Vec<i64> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / n, k % n);
            if i <= j {
                ball.distance(i as u32, j as u32) as i64
            } else {
                0
            }
        })
        .collect();
    let d = |i: usize, j: usize| if i <= j { dist[i * n + j] } else { dist[j * n + i] };
    let len: Vec<i64> = (0..n).map(|i| ball.length(i as u32) as i64).collect();
    let gp = |i: usize, j: usize| len[i] + len[j] - d(i, j);
    let worst = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut worst = 0i64;
            for y in 0..n {
                let xy = gp(x, y);
                for z in 0..n {
                    let v = gp(x, z).min(gp(z, y)) - xy;
                    worst = worst.max(v);
                }
            }
            worst
        })
        .max()
        .unwrap_or(0);
    Ratio::new(worst, 2)
}

/// `min_r |B(r)|^{1/r}` over `r ≥ 1`; an upper bound for the growth rate.
pub fn growth_upper_estimate(ball_counts: &[usize]) -> Result<f64> {
    ball_counts
        .iter()
        .enumerate()
        .skip(1)
        .map(|(r, &c)| (c as f64).powf(1.0 / r as f64))
        .min_by(|a, b| a.total_cmp(b))
        .ok_or_else(|| Error::InvalidParameter("need ball counts for some r ≥ 1".into()))
}

/// `max_r |B(r)| / λ^r`, the empirical witness for `|B(r)| ≤ α λ^r`.
pub fn coornaert_alpha(ball_counts: &[usize], lambda: f64) -> Result<f64> {
    if lambda.is_nan() || lambda <= 1.0 {
        return Err(Error::Domain(format!(
            "growth rate {lambda} ≤ 1 makes the estimator meaningless"
        )));
    }
    Ok(ball_counts
        .iter()
        .enumerate()
        .map(|(r, &c)| c as f64 / lambda.powi(r as i32))
        .fold(1.0, f64::max))
}
