//! Power-free words and elements.
//!
//! The free-group side counts reduced words with no subword `u^m` exactly.
//! The general side looks for pairs `x, y` in the `L`-neighbourhood of `σ_g`
//! with `x⁻¹y = w^m` for a non-trivial cyclically reduced `w`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::cayley::{Ball, ElementId};
use crate::error::{Error, Result};
use crate::lexgeo::LexMap;
use crate::words::{Letter, Word};

/// `w[start .. start + m·period]` is a power `u^m` with `|u| = period`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WordPower {
    pub start: usize,
    pub period: usize,
    pub m: usize,
}

impl WordPower {
    pub fn root(&self, w: &Word) -> Word {
        w.subword(self.start, self.start + self.period)
    }
}

fn is_periodic(s: &[Letter], period: usize) -> bool {
    (period..s.len()).all(|i| s[i] == s[i - period])
}

/// First power by start index, then by period.
pub fn find_word_power(w: &Word, m: usize) -> Option<WordPower> {
    assert!(m >= 2, "m must be at least 2");
    let s = w.letters();
    for start in 0..s.len() {
        for period in 1..=(s.len() - start) / m {
            if is_periodic(&s[start..start + m * period], period) {
                return Some(WordPower { start, period, m });
            }
        }
    }
    None
}

// A new last letter can only complete a power that ends at the last position.
fn has_power_suffix(s: &[u8], m: usize) -> bool {
    let n = s.len();
    (1..=n / m).any(|p| (1..(m - 1) * p + 1).all(|i| s[n - i] == s[n - i - p]))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AperiodicCountTable {
    pub k: usize,
    pub m: usize,
    /// `|F_m ∩ B(s)|` for `s = 0..=s_max`.
    pub counts: Vec<u64>,
}

impl AperiodicCountTable {
    pub fn s_max(&self) -> usize {
        self.counts.len() - 1
    }

    /// `|F_m ∩ S(s)|`.
    pub fn sphere(&self, s: usize) -> u64 {
        if s == 0 {
            self.counts[0]
        } else {
            self.counts[s] - self.counts[s - 1]
        }
    }
}

/// Exact `|F_m ∩ B(s)|` in the free group of rank `k` by depth-first search
/// over reduced words, pruned as soon as a power appears.
pub fn count_aperiodic_free(k: usize, m: usize, s_max: usize) -> Result<AperiodicCountTable> {
    if k < 1 || m < 2 {
        return Err(Error::InvalidParameter(format!("need k ≥ 1 and m ≥ 2, got k = {k}, m = {m}")));
    }
    fn dfs(word: &mut Vec<u8>, spheres: &mut [u64], size: u8, m: usize) {
        spheres[word.len()] += 1;
        if word.len() + 1 == spheres.len() {
            return;
        }
        let last = *word.last().expect("dfs starts below the root");
        for x in 0..size {
            if x == last ^ 1 {
                continue;
            }
            word.push(x);
            if !has_power_suffix(word, m) {
                dfs(word, spheres, size, m);
            }
            word.pop();
        }
    }
    let size = (2 * k) as u8;
    let mut spheres = vec![0u64; s_max + 1];
    spheres[0] = 1;
    if s_max > 0 {
        let parts: Vec<Vec<u64>> = (0..size)
            .into_par_iter()
            .map(|x| {
                let mut local = vec![0u64; s_max + 1];
                dfs(&mut vec![x], &mut local, size, m);
                local
            })
            .collect();
        for part in parts {
            for (s, c) in part.into_iter().enumerate() {
                spheres[s] += c;
            }
        }
    }
    let counts = spheres
        .iter()
        .scan(0u64, |acc, &c| {
            *acc += c;
            Some(*acc)
        })
        .collect();
    Ok(AperiodicCountTable { k, m, counts })
}

#[derive(Clone, Debug)]
pub struct RecurrenceRow {
    pub s: usize,
    pub lhs: BigRational,
    pub rhs: BigRational,
}

impl RecurrenceRow {
    pub fn margin(&self) -> BigRational {
        &self.lhs - &self.rhs
    }

    pub fn holds(&self) -> bool {
        self.lhs >= self.rhs
    }
}

#[derive(Clone, Debug)]
pub struct RecurrenceReport {
    pub rows: Vec<RecurrenceRow>,
}

impl RecurrenceReport {
    pub fn violations(&self) -> Vec<usize> {
        self.rows.iter().filter(|r| !r.holds()).map(|r| r.s).collect()
    }
}

/// Checks `c(s+1) ≥ λ c(s) − (2k/λ) Σ_{j≥1} λ^j c(s+1−mj)` with
/// `c(s) = |F_m ∩ B(s)|`, `c(negative) = 0` and `λ = 2k − 1`, exactly.
pub fn verify_free_recurrence(table: &AperiodicCountTable) -> RecurrenceReport {
    let k = table.k as i64;
    let lambda = BigRational::from_integer(BigInt::from(2 * k - 1));
    let coeff = BigRational::new(BigInt::from(2 * k), BigInt::from(2 * k - 1));
    let c = |s: usize| BigRational::from_integer(BigInt::from(table.counts[s]));
    let rows = (0..table.s_max())
        .map(|s| {
            let mut tail = BigRational::zero();
            let mut power = lambda.clone();
            let mut j = 1;
            while s + 1 >= table.m * j {
                tail += &power * c(s + 1 - table.m * j);
                power *= &lambda;
                j += 1;
            }
            RecurrenceRow {
                s,
                lhs: c(s + 1),
                rhs: &lambda * c(s) - &coeff * tail,
            }
        })
        .collect();
    RecurrenceReport { rows }
}

/// `(l, l·w^m)` both within `L` of `σ_g`; `i ≤ j` index the vertices of `σ_g`
/// the two points were found near.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerWitness {
    pub l: Word,
    pub w: Word,
    pub m: usize,
    pub i: usize,
    pub j: usize,
}

/// Cyclically reduced roots in a free group, read off the word.
fn free_root(z: &[Letter], m: usize) -> Option<usize> {
    let n = z.len();
    if n == 0 || n % m != 0 {
        return None;
    }
    let p = n / m;
    (is_periodic(z, p) && z[0] != z[p - 1].inverse()).then_some(p)
}

/// m-th root of an element with cyclically reduced root, if any.
///
/// Free groups: exact via word periodicity. Otherwise candidates `w` with
/// `|w| ≤ ⌊|x|/m⌋ + slack` are drawn from the ball, and cyclic reduction is
/// judged by displacement over the core `B(N/2)`.
pub fn mth_root(ball: &Ball, x: &Word, m: usize, slack: usize) -> Result<Option<Word>> {
    let z = ball.oracle().normal_form(x);
    if ball.oracle().is_free() {
        return Ok(free_root(z.letters(), m).map(|p| z.prefix(p)));
    }
    let table = RootTable::new(ball, m, z.len() / m + slack)?;
    Ok(table.roots(&z).first().cloned())
}

/// Displacement `min_{x ∈ B(c)} |x⁻¹ w x|` over the guarded core.
pub fn core_displacement(ball: &Ball, w: &Word) -> usize {
    let o = ball.oracle();
    ball.ids_within(ball.radius() / 2)
        .map(|x| {
            let xw = ball.word(x);
            o.length(&xw.inverse().concat(w).concat(xw))
        })
        .min()
        .unwrap_or(w.len())
}

/// Table of `w^m` for non-trivial `w` of length at most `max_len` that are
/// cyclically reduced by core displacement.
pub struct RootTable {
    m: usize,
    max_len: usize,
    powers: HashMap<Word, Vec<Word>>,
}

impl RootTable {
    pub fn new(ball: &Ball, m: usize, max_len: usize) -> Result<Self> {
        if max_len > ball.radius() {
            return Err(Error::Guard(format!(
                "root length bound {max_len} exceeds ball radius {}",
                ball.radius()
            )));
        }
        let o = ball.oracle();
        let entries: Vec<(Word, Word)> = (1..ball.count_within(max_len) as ElementId)
            .into_par_iter()
            .filter_map(|w| {
                let w = ball.word(w);
                (core_displacement(ball, w) == w.len()).then(|| (o.normal_form(&w.power(m)), w.clone()))
            })
            .collect();
        let mut powers: HashMap<Word, Vec<Word>> = HashMap::new();
        // Entries arrive in shortlex order of the root.
        for (p, w) in entries {
            powers.entry(p).or_default().push(w);
        }
        Ok(RootTable { m, max_len, powers })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Roots of a normal form, shortest first.
    pub fn roots(&self, z: &Word) -> &[Word] {
        self.powers.get(z).map_or(&[], |v| v.as_slice())
    }
}

/// Reusable (L,m)-power detector over one ball.
pub struct PowerSearch<'a> {
    ball: &'a Ball,
    lex: &'a LexMap,
    l: usize,
    m: usize,
    slack: usize,
    table: Option<RootTable>,
}

impl<'a> PowerSearch<'a> {
    /// `delta` sets the root-length slack `50δ`; it is ignored for free
    /// groups, where roots are exact.
    pub fn new(ball: &'a Ball, lex: &'a LexMap, l: usize, m: usize, delta: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("m must be at least 1".into()));
        }
        let slack = (50.0 * delta.max(0.0)).ceil() as usize;
        let table = if ball.oracle().is_free() {
            None
        } else {
            let longest = ball.radius().saturating_sub(l) + 2 * l;
            Some(RootTable::new(ball, m, (longest / m + slack).min(ball.radius()))?)
        };
        Ok(PowerSearch {
            ball,
            lex,
            l,
            m,
            slack,
            table,
        })
    }

    pub fn slack(&self) -> usize {
        self.slack
    }

    fn check_guard(&self, g: ElementId) -> Result<()> {
        if self.ball.length(g) + self.l > self.ball.radius() {
            return Err(Error::Guard(format!(
                "|g| + L = {} exceeds ball radius {}",
                self.ball.length(g) + self.l,
                self.ball.radius()
            )));
        }
        Ok(())
    }

    /// First witness with vertex pairs by increasing distance along `σ_g`,
    /// neighbourhood points in shortlex order, roots shortest first.
    pub fn detect(&self, g: ElementId) -> Result<Option<PowerWitness>> {
        self.check_guard(g)?;
        let ball = self.ball;
        let vertices = self.lex.vertices(g);
        let offsets: Vec<ElementId> = ball.ids_within(self.l).collect();
        let near: Vec<Vec<ElementId>> = vertices
            .iter()
            .map(|&v| {
                offsets
                    .iter()
                    .map(|&u| ball.walk(v, ball.word(u)).expect("guarded walk"))
                    .collect()
            })
            .collect();
        let n = vertices.len();
        for d in 0..n {
            for i in 0..n - d {
                let j = i + d;
                for &x in &near[i] {
                    for &y in &near[j] {
                        if x == y {
                            continue;
                        }
                        if let Some(w) = self.root_of_quotient(x, y) {
                            return Ok(Some(PowerWitness {
                                l: ball.word(x).clone(),
                                w,
                                m: self.m,
                                i,
                                j,
                            }));
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    fn root_of_quotient(&self, x: ElementId, y: ElementId) -> Option<Word> {
        let (xw, yw) = (self.ball.word(x).letters(), self.ball.word(y).letters());
        match &self.table {
            None => {
                let c = xw.iter().zip(yw).take_while(|(a, b)| a == b).count();
                let len = xw.len() + yw.len() - 2 * c;
                if len % self.m != 0 {
                    return None;
                }
                let z: Vec<Letter> = xw[c..]
                    .iter()
                    .rev()
                    .map(|l| l.inverse())
                    .chain(yw[c..].iter().copied())
                    .collect();
                free_root(&z, self.m).map(|p| Word::new(z[..p].to_vec()))
            }
            Some(table) => {
                let z = self.ball.oracle().distance_word(self.ball.word(x), self.ball.word(y));
                table.roots(&z).first().cloned()
            }
        }
    }
}

/// One-shot (L,m)-power detection for `g`.
pub fn detect_lm_power(
    ball: &Ball,
    lex: &LexMap,
    g: ElementId,
    l: usize,
    m: usize,
    delta: f64,
) -> Result<Option<PowerWitness>> {
    PowerSearch::new(ball, lex, l, m, delta)?.detect(g)
}

/// `|{g ∈ ground : |g| ≤ s, g (L,m)-aperiodic}|` for `s = 0..=s_max`.
/// Without a ground set every element of the ball is eligible.
pub fn count_f_lm(
    ball: &Ball,
    lex: &LexMap,
    l: usize,
    m: usize,
    s_max: usize,
    delta: f64,
    ground: Option<&[bool]>,
) -> Result<Vec<u64>> {
    if s_max + l > ball.radius() {
        return Err(Error::Guard(format!(
            "s_max + L = {} exceeds ball radius {}",
            s_max + l,
            ball.radius()
        )));
    }
    let search = PowerSearch::new(ball, lex, l, m, delta)?;
    let ids: Vec<ElementId> = ball
        .ids_within(s_max)
        .filter(|&g| ground.map_or(true, |f| f[g as usize]))
        .collect();
    let flags: Vec<(usize, bool)> = ids
        .par_iter()
        .map(|&g| Ok((ball.length(g), search.detect(g)?.is_none())))
        .collect::<Result<_>>()?;
    let mut spheres = vec![0u64; s_max + 1];
    for (len, free) in flags {
        if free {
            spheres[len] += 1;
        }
    }
    Ok(spheres
        .iter()
        .scan(0u64, |acc, &c| {
            *acc += c;
            Some(*acc)
        })
        .collect())
}

/// Exact check of `|F_m ∩ B(s)| ≥ μ^s` for every `s` in the table.
pub fn count_dominates_power(table: &AperiodicCountTable, mu: &BigRational) -> Vec<usize> {
    let mut failures = Vec::new();
    let mut power = BigRational::one();
    for (s, &c) in table.counts.iter().enumerate() {
        if BigRational::from_integer(BigInt::from(c)) < power {
            failures.push(s);
        }
        power *= mu;
    }
    failures
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::build_ball;
    use crate::lexgeo::lex_geodesics;
    use crate::presentation::GroupOracle;
    use crate::words::{enumerate_reduced, Alphabet};

    fn w(s: &str) -> Word {
        Alphabet::free(2).parse_word(s).unwrap()
    }

    #[test]
    fn word_power_examples() {
        let a = Alphabet::free(2);
        let root = |s: &str| find_word_power(&w(s), 2).map(|p| a.format(&p.root(&w(s))));
        assert_eq!(root("abab").as_deref(), Some("ab"));
        assert_eq!(root("aabb").as_deref(), Some("a"));
        assert_eq!(root("abba").as_deref(), Some("b"));
        assert_eq!(root("abAb"), None);
        assert_eq!(find_word_power(&w("abab"), 2).unwrap().start, 0);
    }

    #[test]
    fn small_counts() {
        assert_eq!(count_aperiodic_free(2, 2, 2).unwrap().counts, vec![1, 5, 13]);
        assert_eq!(count_aperiodic_free(2, 3, 3).unwrap().counts[3], 49);
        assert_eq!(count_aperiodic_free(2, 2, 0).unwrap().counts, vec![1]);
    }

    #[test]
    fn pruned_counts_match_naive_filter() {
        let a = Alphabet::free(2);
        for m in 2..=4 {
            let table = count_aperiodic_free(2, m, 8).unwrap();
            let mut naive = vec![0u64; 9];
            for word in enumerate_reduced(&a, 8) {
                if find_word_power(&word, m).is_none() {
                    naive[word.len()] += 1;
                }
            }
            for s in 1..=8 {
                naive[s] += naive[s - 1];
            }
            assert_eq!(table.counts, naive);
        }
    }

    #[test]
    fn recurrence_holds_for_small_tables() {
        for m in 2..=4 {
            let report = verify_free_recurrence(&count_aperiodic_free(2, m, 10).unwrap());
            assert!(report.violations().is_empty(), "m = {m}");
        }
        // before any power fits the inequality compares plain ball growth
        let report = verify_free_recurrence(&count_aperiodic_free(2, 5, 3).unwrap());
        let row = &report.rows[2];
        assert_eq!(row.margin(), BigRational::from_integer(BigInt::from(2)));
    }

    #[test]
    fn free_roots() {
        let ball = build_ball(&GroupOracle::free(2), 6, None).unwrap();
        let a = ball.alphabet().clone();
        let root = |s: &str, m| mth_root(&ball, &w(s), m, 0).unwrap().map(|r| a.format(&r));
        assert_eq!(root("aaaaaa", 3).as_deref(), Some("aa"));
        assert_eq!(root("abab", 2).as_deref(), Some("ab"));
        assert_eq!(root("ab", 2), None);
        assert_eq!(root("abAbaB", 2), None);
    }

    #[test]
    fn detection_examples() {
        let ball = build_ball(&GroupOracle::free(2), 8, None).unwrap();
        let lex = lex_geodesics(&ball);
        let a = ball.alphabet().clone();
        let id = |s: &str| ball.lookup(&w(s)).unwrap();
        let hit = detect_lm_power(&ball, &lex, id("ababab"), 0, 3, 0.0).unwrap().unwrap();
        assert_eq!((a.format(&hit.l), a.format(&hit.w)), (String::new(), "ab".into()));
        let hit = detect_lm_power(&ball, &lex, id("aab"), 0, 2, 0.0).unwrap().unwrap();
        assert_eq!((a.format(&hit.l), a.format(&hit.w)), (String::new(), "a".into()));
        assert!(detect_lm_power(&ball, &lex, id("abAb"), 0, 2, 0.0).unwrap().is_none());
        assert!(matches!(
            detect_lm_power(&ball, &lex, id("aaaaaaaa"), 1, 2, 0.0),
            Err(Error::Guard(_))
        ));
    }

    #[test]
    fn tree_counts_match_word_counts() {
        let ball = build_ball(&GroupOracle::free(2), 8, None).unwrap();
        let lex = lex_geodesics(&ball);
        for m in [2, 3] {
            let counts = count_f_lm(&ball, &lex, 0, m, 8, 0.0, None).unwrap();
            assert_eq!(counts, count_aperiodic_free(2, m, 8).unwrap().counts);
        }
        assert_eq!(count_f_lm(&ball, &lex, 0, 1, 8, 0.0, None).unwrap(), vec![1; 9]);
        assert_eq!(count_f_lm(&ball, &lex, 0, 2, 0, 0.0, None).unwrap(), vec![1]);
    }

    #[test]
    fn power_domination_is_exact() {
        let table = count_aperiodic_free(2, 2, 2).unwrap();
        let mu = BigRational::new(BigInt::from(13), BigInt::from(5));
        // 13 ≥ (13/5)^2 = 6.76, 5 ≥ 13/5, 1 ≥ 1
        assert!(count_dominates_power(&table, &mu).is_empty());
        let mu = BigRational::from_integer(BigInt::from(4));
        assert_eq!(count_dominates_power(&table, &mu), vec![2]);
    }
}
