//! Translation lengths, the constants ledger, the `f_m` / `f_{L,m}`
//! calculators, `m₀` solvers and the lower bounds for periodic quotients.

use std::collections::BTreeMap;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cayley::{Ball, ElementId};
use crate::error::{Error, Result};
use crate::presentation::GroupOracle;
use crate::words::{cyclic_reduce, Word};

/// Working precision in bits (about 77 decimal digits).
pub const PRECISION: usize = 256;

const RM: RoundingMode = RoundingMode::ToEven;

/// Small wrapper so formulas read like formulas.
struct Hp {
    p: usize,
    cc: Consts,
}

impl Hp {
    fn new(p: usize) -> Self {
        Hp {
            p,
            cc: Consts::new().expect("astro-float constants"),
        }
    }
    fn num(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.p)
    }
    fn int(&self, x: u64) -> BigFloat {
        BigFloat::from_u64(x, self.p)
    }
    fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.p, RM)
    }
    fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.p, RM)
    }
    fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.p, RM)
    }
    fn powi(&self, a: &BigFloat, n: usize) -> BigFloat {
        a.powi(n, self.p, RM)
    }
    fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.p, RM, &mut self.cc)
    }
    fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.p, RM, &mut self.cc)
    }
    /// `a^y` for `a > 0` and real `y`.
    fn powr(&mut self, a: &BigFloat, y: &BigFloat) -> BigFloat {
        let l = self.ln(a);
        let t = self.mul(&l, y);
        self.exp(&t)
    }
    fn to_f64(&mut self, a: &BigFloat) -> f64 {
        if a.is_zero() {
            return 0.0;
        }
        a.format(Radix::Dec, RM, &mut self.cc)
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(f64::NAN)
    }
}

fn positive(x: &BigFloat) -> bool {
    x.is_positive() && !x.is_zero()
}

// ---------------------------------------------------------------------------
// Lengths

/// `ℓ(g) = min_x |x⁻¹ g x|` over `x ∈ B(N/2)`, for `|g| ≤ N/2`.
pub fn translation_length(ball: &Ball, g: ElementId) -> Result<usize> {
    let core = ball.radius() / 2;
    if ball.length(g) > core {
        return Err(Error::Guard(format!(
            "|g| = {} exceeds N/2 = {core}",
            ball.length(g)
        )));
    }
    let o = ball.oracle();
    let gw = ball.word(g);
    Ok(ball
        .ids_within(core)
        .map(|x| {
            let xw = ball.word(x);
            o.length(&xw.inverse().concat(gw).concat(xw))
        })
        .min()
        .unwrap_or(0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StableLength {
    pub value: Ratio<i64>,
    /// False when the value is read off a finite stretch of `|gⁿ|`.
    pub exact: bool,
}

/// `lim |gⁿ|/n`. Exact in free groups; otherwise the slope
/// `(|gⁿ| − |gʰ|)/(n − h)` with `h = ⌊n/2⌋`, `n = n_max`.
pub fn stable_length(oracle: &GroupOracle, g: &Word, n_max: usize) -> StableLength {
    let nf = oracle.normal_form(g);
    if oracle.is_free() {
        return StableLength {
            value: Ratio::from_integer(cyclic_reduce(&nf).len() as i64),
            exact: true,
        };
    }
    let n = n_max.max(2);
    let h = n / 2;
    let len = |k: usize| oracle.length(&nf.power(k)) as i64;
    StableLength {
        value: Ratio::new(len(n) - len(h), (n - h) as i64),
        exact: false,
    }
}

/// Largest `τ` with every sample in `τ·ℕ`: gcd of numerators over lcm of
/// denominators. Zero samples are ignored.
pub fn estimate_tau(samples: &[Ratio<i64>]) -> Result<Ratio<i64>> {
    let nonzero: Vec<&Ratio<i64>> = samples.iter().filter(|s| !s.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(Error::InvalidParameter("all stable-length samples are zero".into()));
    }
    let num = nonzero.iter().fold(0i64, |g, s| g.gcd(s.numer()));
    let den = nonzero.iter().fold(1i64, |l, s| l.lcm(s.denom()));
    Ok(Ratio::new(num, den))
}

// ---------------------------------------------------------------------------
// Ledger

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Exact,
    Empirical,
    User,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constant {
    pub value: f64,
    pub provenance: Provenance,
}

impl Constant {
    pub fn new(value: f64, provenance: Provenance) -> Self {
        Constant { value, provenance }
    }
}

/// Named constants with provenance. Keys: `alpha`, `beta`, `delta`, `gamma`,
/// `kappa1`, `kappa2`, `lambda`, `nu`, `rho`, `tau`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConstantsLedger {
    entries: BTreeMap<String, Constant>,
}

pub const LEDGER_KEYS: [&str; 10] = [
    "alpha", "beta", "delta", "gamma", "kappa1", "kappa2", "lambda", "nu", "rho", "tau",
];

impl ConstantsLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, key: &str, value: f64, provenance: Provenance) -> Result<()> {
        if !LEDGER_KEYS.contains(&key) {
            return Err(Error::InvalidParameter(format!("unknown ledger constant '{key}'")));
        }
        self.entries.insert(key.to_string(), Constant::new(value, provenance));
        Ok(())
    }

    pub fn with(mut self, key: &str, value: f64, provenance: Provenance) -> Self {
        self.set(key, value, provenance).expect("known key");
        self
    }

    pub fn entry(&self, key: &str) -> Option<Constant> {
        self.entries.get(key).copied()
    }

    pub fn get(&self, key: &str) -> Result<f64> {
        self.entries
            .get(key)
            .map(|c| c.value)
            .ok_or_else(|| Error::InvalidParameter(format!("ledger is missing '{key}'")))
    }

    /// `κ₁ = ρν` and `κ₂ = α³λ^{50δ}`, tagged with the weakest input provenance.
    pub fn derive_kappas(&mut self) -> Result<()> {
        let worst = |keys: &[&str]| {
            keys.iter()
                .filter_map(|k| self.entry(k).map(|c| c.provenance))
                .max()
                .unwrap_or(Provenance::Exact)
        };
        let k1 = self.get("rho")? * self.get("nu")?;
        let p1 = worst(&["rho", "nu"]);
        let k2 = self.get("alpha")?.powi(3) * self.get("lambda")?.powf(50.0 * self.get("delta")?);
        let p2 = worst(&["alpha", "lambda", "delta"]);
        self.set("kappa1", k1, p1)?;
        self.set("kappa2", k2, p2)
    }

    /// `a = 5(1 − κ₁)/τ`.
    pub fn a(&self) -> Result<f64> {
        Ok(5.0 * (1.0 - self.get("kappa1")?) / self.get("tau")?)
    }

    /// `b = τ/4`.
    pub fn b(&self) -> Result<f64> {
        Ok(self.get("tau")? / 4.0)
    }

    /// Violated invariants, by name.
    pub fn check(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let mut need = |key: &str, ok: fn(f64) -> bool, what: &str| {
            if let Some(c) = self.entry(key) {
                if !ok(c.value) {
                    bad.push(format!("{key} = {} violates {what}", c.value));
                }
            }
        };
        need("lambda", |x| x > 1.0, "λ > 1");
        need("alpha", |x| x >= 1.0, "α ≥ 1");
        need("tau", |x| x > 0.0, "τ > 0");
        need("kappa1", |x| x > 0.0 && x <= 1.0, "0 < κ₁ ≤ 1");
        need("delta", |x| x >= 0.0, "δ ≥ 0");
        bad
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ledger serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let ledger: ConstantsLedger = serde_json::from_str(text)?;
        for key in ledger.entries.keys() {
            if !LEDGER_KEYS.contains(&key.as_str()) {
                return Err(Error::InvalidParameter(format!("unknown ledger constant '{key}'")));
            }
        }
        Ok(ledger)
    }
}

// ---------------------------------------------------------------------------
// Free case

fn big(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::Domain(format!("{x} is not a finite number")))
}

/// `f_m(μ) = λ − 2kμ/(μ^m − λ)`, `λ = 2k − 1`, exactly, on `(λ^{1/m}, λ)`.
pub fn f_m_exact(k: usize, m: usize, mu: &BigRational) -> Result<BigRational> {
    let lambda = big(2 * k as i64 - 1);
    let pm = num_traits::pow(mu.clone(), m);
    if !mu.is_positive() || pm <= lambda || *mu >= lambda {
        return Err(Error::Domain(format!(
            "μ = {} outside (λ^(1/m), λ) for λ = {lambda}, m = {m}",
            mu.to_f64().unwrap_or(f64::NAN)
        )));
    }
    Ok(&lambda - big(2 * k as i64) * mu / (pm - &lambda))
}

pub fn f_m_eval(k: usize, m: usize, mu: f64) -> Result<f64> {
    Ok(f_m_exact(k, m, &rational(mu)?)?.to_f64().unwrap_or(f64::NAN))
}

/// `μ_m = λ(1 − aλ^{−m})`.
pub fn mu_m(k: usize, m: usize, a: &BigRational) -> BigRational {
    let lambda = big(2 * k as i64 - 1);
    let lm = num_traits::pow(lambda.clone(), m);
    &lambda * (BigRational::one() - a / lm)
}

#[derive(Clone, Debug)]
pub struct FreeM0 {
    pub m0: usize,
    pub window: usize,
    /// `f_m(μ_m) − μ_m` for `m` from 1 to `m₀ + window`; `None` off the domain.
    pub margins: Vec<(usize, Option<f64>)>,
    /// `λ^{m−1}(f_m(μ_m) − μ_m)` at the end of the window; tends to `a − 2k`.
    pub scaled_margin: f64,
}

/// `f_m(μ_m) − μ_m` in floating point with enough bits to survive the
/// cancellation (the difference is of order `λ^{1−m}`).
fn free_margin(k: usize, m: usize, a: f64) -> (Option<f64>, f64) {
    let lam = (2 * k - 1) as u64;
    let bits = 128 + (2.0 * m as f64 * (lam as f64).log2()).ceil() as usize;
    let mut hp = Hp::new(bits.max(PRECISION));
    let lambda = hp.int(lam);
    let lm = hp.powi(&lambda, m);
    let a_over = hp.div(&hp.num(a), &lm);
    let one = hp.int(1);
    let mu = hp.mul(&lambda, &hp.sub(&one, &a_over));
    if !positive(&mu) {
        return (None, f64::NAN);
    }
    let pm = hp.powi(&mu, m);
    let denom = hp.sub(&pm, &lambda);
    if !positive(&denom) {
        return (None, f64::NAN);
    }
    let tail = hp.div(&hp.mul(&hp.int(2 * k as u64), &mu), &denom);
    let f = hp.sub(&lambda, &tail);
    let margin = hp.sub(&f, &mu);
    let scaled = hp.mul(&margin, &hp.powi(&lambda, m - 1));
    (Some(hp.to_f64(&margin)), hp.to_f64(&scaled))
}

/// Least `m₀` with `f_m(μ_m) ≥ μ_m` for every `m` in `[m₀, m₀ + window]`
/// and a positive scaled margin at the end of the window.
pub fn find_m0_free(k: usize, a: f64, window: usize, cap: usize) -> Result<FreeM0> {
    if k < 1 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if !(a > 2.0 * k as f64) {
        return Err(Error::Domain(format!("need a > 2k = {}, got a = {a}", 2 * k)));
    }
    let mut margins = Vec::new();
    let mut run_start: Option<usize> = None;
    for m in 1..=cap + window {
        let (margin, scaled) = free_margin(k, m, a);
        margins.push((m, margin));
        if margin.is_some_and(|x| x >= 0.0) {
            let start = *run_start.get_or_insert(m);
            if m == start + window {
                if scaled > 0.0 {
                    return Ok(FreeM0 {
                        m0: start,
                        window,
                        margins,
                        scaled_margin: scaled,
                    });
                }
                run_start = None;
            }
        } else {
            run_start = None;
            if m > cap {
                break;
            }
        }
    }
    Err(Error::M0Unattainable {
        cap: cap as u64,
        last_m: cap as u64,
        blocking: vec!["f_m(μ_m) ≥ μ_m".into()],
    })
}

// ---------------------------------------------------------------------------
// General case

/// Exponent of `λ` in the tail of `f_{L,m}`: `4(L + r)` as displayed with
/// the function, or `2(L + r)` as in the proposition it comes from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailExponent {
    #[default]
    Four,
    Two,
}

impl TailExponent {
    fn factor(self) -> f64 {
        match self {
            TailExponent::Four => 4.0,
            TailExponent::Two => 2.0,
        }
    }
}

struct GeneralInputs {
    lambda: f64,
    tau: f64,
    kappa1: f64,
    kappa2: f64,
}

impl GeneralInputs {
    fn from_ledger(ledger: &ConstantsLedger) -> Result<Self> {
        Ok(GeneralInputs {
            lambda: ledger.get("lambda")?,
            tau: ledger.get("tau")?,
            kappa1: ledger.get("kappa1")?,
            kappa2: ledger.get("kappa2")?,
        })
    }
}

/// `f_{L,m}(μ, r) = κ₁λ^r − κ₂λ^{c(L+r)}λ^τ/(μ^{mτ} − λ^τ)` in high precision.
fn f_lm_hp(
    hp: &mut Hp,
    g: &GeneralInputs,
    l: f64,
    m: usize,
    mu: &BigFloat,
    r: f64,
    exponent: TailExponent,
) -> Result<BigFloat> {
    let lambda = hp.num(g.lambda);
    let tau = hp.num(g.tau);
    let mtau = hp.num(m as f64 * g.tau);
    if !positive(mu) {
        return Err(Error::Domain("μ must be positive".into()));
    }
    let lam_tau = hp.powr(&lambda, &tau);
    let mu_mtau = hp.powr(mu, &mtau);
    let denom = hp.sub(&mu_mtau, &lam_tau);
    let pm = hp.powi(mu, m);
    if !positive(&denom) || pm.cmp(&lambda).unwrap_or(0) <= 0 || mu.cmp(&lambda).unwrap_or(0) >= 0 {
        return Err(Error::Domain(format!(
            "μ = {} outside (λ^(1/m), λ) for λ = {}, m = {m}",
            hp.to_f64(mu),
            g.lambda
        )));
    }
    let lam_r = hp.powr(&lambda, &hp.num(r));
    let head = hp.mul(&hp.num(g.kappa1), &lam_r);
    let lam_tail = hp.powr(&lambda, &hp.num(exponent.factor() * (l + r)));
    let numer = hp.mul(&hp.mul(&hp.num(g.kappa2), &lam_tail), &lam_tau);
    let tail = hp.div(&numer, &denom);
    Ok(hp.sub(&head, &tail))
}

pub fn f_lm_eval(ledger: &ConstantsLedger, l: f64, m: usize, mu: f64, r: f64, exponent: TailExponent) -> Result<f64> {
    let g = GeneralInputs::from_ledger(ledger)?;
    let mut hp = Hp::new(PRECISION);
    let mu = hp.num(mu);
    let v = f_lm_hp(&mut hp, &g, l, m, &mu, r, exponent)?;
    Ok(hp.to_f64(&v))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionMargin {
    pub name: String,
    pub margin: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct M0Certificate {
    pub m0: usize,
    pub a: f64,
    pub b: f64,
    pub window: usize,
    pub exponent: TailExponent,
    /// Margins of the four conditions at `m₀`.
    pub conditions: Vec<ConditionMargin>,
    /// `κ₁ − e^{−ab}`, the large-`m` limit of `f_{L,m}(μ, mb)/λ^{mb} − (1 − a/m)^{mb}`.
    pub asymptotic_margin: f64,
}

pub const CONDITION_NAMES: [&str; 4] = [
    "(1) mb ≥ 10δ",
    "(2) mτ ≥ 2L + mb",
    "(3) μ^m > λ",
    "(4) f_{L,m}(μ, mb) ≥ μ^{mb}",
];

fn general_conditions(
    hp: &mut Hp,
    g: &GeneralInputs,
    delta: f64,
    l: f64,
    m: usize,
    a: f64,
    b: f64,
    exponent: TailExponent,
) -> Vec<ConditionMargin> {
    let mf = m as f64;
    let c1 = mf * b - 10.0 * delta;
    let c2 = mf * g.tau - 2.0 * l - mf * b;
    let mu_f = g.lambda * (1.0 - a / mf);
    let (c3, c4) = if mu_f > 0.0 {
        let mu = hp.mul(&hp.num(g.lambda), &hp.sub(&hp.int(1), &hp.div(&hp.num(a), &hp.num(mf))));
        let ln_mu = hp.ln(&mu);
        let ln_lam = hp.ln(&hp.num(g.lambda));
        let c3 = hp.sub(&hp.mul(&hp.num(mf), &ln_mu), &ln_lam);
        let c3 = hp.to_f64(&c3);
        let r = mf * b;
        let c4 = match f_lm_hp(hp, g, l, m, &mu, r, exponent) {
            Ok(f) => {
                let target = hp.powr(&mu, &hp.num(r));
                // Compare relative to λ^{mb} so the margin stays O(1).
                let scale = hp.powr(&hp.num(g.lambda), &hp.num(r));
                let d = hp.div(&hp.sub(&f, &target), &scale);
                hp.to_f64(&d)
            }
            Err(_) => f64::NEG_INFINITY,
        };
        (c3, c4)
    } else {
        (f64::NEG_INFINITY, f64::NEG_INFINITY)
    };
    [c1, c2, c3, c4]
        .iter()
        .zip(CONDITION_NAMES)
        .enumerate()
        .map(|(i, (&margin, name))| ConditionMargin {
            name: name.to_string(),
            margin,
            holds: if i == 2 { margin > 0.0 } else { margin >= 0.0 },
        })
        .collect()
}

/// Least `m₀` such that conditions (1)–(4) hold on `[m₀, m₀ + window]`,
/// provided condition (4) also holds asymptotically (`κ₁ > e^{−ab}`).
pub fn find_m0_general(
    ledger: &ConstantsLedger,
    l: f64,
    window: usize,
    cap: usize,
    exponent: TailExponent,
) -> Result<M0Certificate> {
    let g = GeneralInputs::from_ledger(ledger)?;
    let delta = ledger.get("delta")?;
    let bad = ledger.check();
    if !bad.is_empty() {
        return Err(Error::InvalidParameter(bad.join("; ")));
    }
    let a = ledger.a()?;
    let b = ledger.b()?;
    let asymptotic = g.kappa1 - (-a * b).exp();
    if asymptotic <= 0.0 {
        return Err(Error::M0Unattainable {
            cap: cap as u64,
            last_m: cap as u64,
            blocking: vec![format!(
                "{} fails for every large m: κ₁ = {} ≤ e^(-ab) = {}",
                CONDITION_NAMES[3],
                g.kappa1,
                (-a * b).exp()
            )],
        });
    }
    let mut hp = Hp::new(PRECISION);
    let mut run_start: Option<(usize, Vec<ConditionMargin>)> = None;
    let mut last = Vec::new();
    for m in 1..=cap + window {
        let conds = general_conditions(&mut hp, &g, delta, l, m, a, b, exponent);
        if conds.iter().all(|c| c.holds) {
            let start = run_start.get_or_insert_with(|| (m, conds.clone())).0;
            if m == start + window {
                let (m0, conditions) = run_start.expect("run started");
                return Ok(M0Certificate {
                    m0,
                    a,
                    b,
                    window,
                    exponent,
                    conditions,
                    asymptotic_margin: asymptotic,
                });
            }
        } else {
            run_start = None;
            last = conds;
            if m >= cap {
                break;
            }
        }
    }
    Err(Error::M0Unattainable {
        cap: cap as u64,
        last_m: cap as u64,
        blocking: last
            .into_iter()
            .filter(|c| !c.holds)
            .map(|c| c.name)
            .collect(),
    })
}

// ---------------------------------------------------------------------------
// Periodic quotients

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FreeBoundParams {
    pub k: usize,
    pub n: u64,
    pub a: f64,
    pub m0: usize,
    pub n0: u64,
    pub eta: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bound {
    pub value: f64,
    pub kappa: f64,
}

/// `(2k−1)(1 − a(2k−1)^{η+1}/(2k−1)^{n/2})`, no validity checks.
pub fn free_bound_value(k: usize, a: f64, eta: u64, n: u64) -> f64 {
    let mut hp = Hp::new(PRECISION);
    let lambda = hp.int(2 * k as u64 - 1);
    let kappa = hp.mul(&hp.num(a), &hp.powi(&lambda, eta as usize + 1));
    let half = hp.div(&hp.int(n), &hp.int(2));
    let denom = hp.powr(&lambda, &half);
    let v = hp.mul(&lambda, &hp.sub(&hp.int(1), &hp.div(&kappa, &denom)));
    hp.to_f64(&v)
}

pub fn burnside_bound_free(p: &FreeBoundParams) -> Result<Bound> {
    let mut bad = Vec::new();
    if p.n % 2 == 0 {
        bad.push(format!("n = {} must be odd", p.n));
    }
    if !(p.a > 2.0 * p.k as f64) {
        bad.push(format!("a = {} must exceed 2k = {}", p.a, 2 * p.k));
    }
    let floor = p.n0.max(2 * p.m0 as u64 + 2 * p.eta + 2);
    if p.n < floor {
        bad.push(format!(
            "n = {} below max(n0, 2m0 + 2η + 2) = {floor}",
            p.n
        ));
    }
    if !bad.is_empty() {
        return Err(Error::Validity(bad));
    }
    let lambda = (2 * p.k - 1) as f64;
    Ok(Bound {
        value: free_bound_value(p.k, p.a, p.eta, p.n),
        kappa: p.a * lambda.powi(p.eta as i32 + 1),
    })
}

/// `λ(1 − 2a/(εn))`, computed exactly from the given floats and rounded once.
pub fn general_bound_value(lambda: f64, a: f64, eps: f64, n: u64) -> Result<f64> {
    let (lambda, a, eps) = (rational(lambda)?, rational(a)?, rational(eps)?);
    let n = BigRational::from_integer(BigInt::from(n));
    if eps.is_zero() || n.is_zero() {
        return Err(Error::Domain("ε and n must be non-zero".into()));
    }
    let v = &lambda * (BigRational::one() - big(2) * a / (eps * n));
    Ok(v.to_f64().unwrap_or(f64::NAN))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralBoundParams {
    pub l: f64,
    pub eps: f64,
    pub n_g: u64,
    pub n: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneralBound {
    pub value: f64,
    pub kappa: f64,
    pub m: u64,
    pub certificate: M0Certificate,
}

pub fn burnside_bound_general(
    ledger: &ConstantsLedger,
    p: &GeneralBoundParams,
    certificate: M0Certificate,
) -> Result<GeneralBound> {
    let lambda = ledger.get("lambda")?;
    let a = ledger.a()?;
    let mut bad = Vec::new();
    if p.n % 2 == 0 {
        bad.push(format!("n = {} must be odd", p.n));
    }
    if !(p.eps > 0.0) {
        bad.push(format!("ε = {} must be positive", p.eps));
    } else {
        let n = p.n as f64;
        let need_m0 = (certificate.m0 as f64 + 1.0) / p.eps;
        if n < need_m0 {
            bad.push(format!("n = {} below (m0 + 1)/ε = {need_m0}", p.n));
        }
        if n < 2.0 / p.eps {
            bad.push(format!("n = {} below 2/ε = {}", p.n, 2.0 / p.eps));
        }
    }
    if p.n < p.n_g {
        bad.push(format!("n = {} below n(G) = {}", p.n, p.n_g));
    }
    if !bad.is_empty() {
        return Err(Error::Validity(bad));
    }
    Ok(GeneralBound {
        value: general_bound_value(lambda, a, p.eps, p.n)?,
        kappa: 2.0 * a / p.eps,
        m: (p.eps * p.n as f64).floor() as u64,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::build_ball;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn lengths_in_f2() {
        let ball = build_ball(&GroupOracle::free(2), 6, None).unwrap();
        let al = ball.alphabet().clone();
        let id = |s: &str| ball.lookup(&al.parse_word(s).unwrap()).unwrap();
        assert_eq!(translation_length(&ball, id("abA")).unwrap(), 1);
        assert_eq!(translation_length(&ball, id("ab")).unwrap(), 2);
        assert_eq!(translation_length(&ball, 0).unwrap(), 0);
        assert!(translation_length(&ball, id("abab")).is_err());

        let o = GroupOracle::free(2);
        let sl = |s: &str| stable_length(&o, &al.parse_word(s).unwrap(), 8);
        assert_eq!(sl("ab").value, Ratio::from_integer(2));
        assert_eq!(sl("abA").value, Ratio::from_integer(1));
        assert_eq!(sl("").value, Ratio::from_integer(0));
        assert!(sl("ab").exact);
    }

    #[test]
    fn tau_examples() {
        let r = |n: i64, d: i64| Ratio::new(n, d);
        let ints = |v: &[i64]| v.iter().map(|&x| r(x, 1)).collect::<Vec<_>>();
        assert_eq!(estimate_tau(&ints(&[1, 2, 3, 5])).unwrap(), r(1, 1));
        assert_eq!(estimate_tau(&ints(&[2, 4, 6])).unwrap(), r(2, 1));
        assert_eq!(estimate_tau(&[r(3, 2), r(3, 1)]).unwrap(), r(3, 2));
        assert_eq!(estimate_tau(&ints(&[0, 4])).unwrap(), r(4, 1));
        assert!(estimate_tau(&ints(&[0, 0])).is_err());
    }

    #[test]
    fn f_m_examples() {
        assert!(close(f_m_eval(2, 3, 2.5).unwrap(), 3.0 - 10.0 / 12.625, 1e-15));
        let mu5 = 3.0 * (1.0 - 5.0 / 243.0);
        assert!(close(mu5, 2.93827, 1e-5));
        assert!(close(f_m_eval(2, 5, mu5).unwrap(), 2.94559, 1e-5));
        assert!(matches!(f_m_eval(2, 3, 1.4), Err(Error::Domain(_))));
        assert!(matches!(f_m_eval(2, 3, 3.0), Err(Error::Domain(_))));
        // just inside the pole the value plunges
        let edge = 3f64.powf(1.0 / 3.0) * (1.0 + 1e-9);
        assert!(f_m_eval(2, 3, edge).unwrap() < -1e8);
    }

    #[test]
    fn m0_free_examples() {
        let r = find_m0_free(2, 5.0, 64, 1000).unwrap();
        assert_eq!(r.m0, 5);
        let m4 = r.margins[3].1.unwrap();
        let m5 = r.margins[4].1.unwrap();
        assert!(close(m4, -0.00317, 5e-5) && close(m5, 0.00732, 5e-5));
        assert!(close(r.scaled_margin, 1.0, 1e-6));
        assert_eq!(find_m0_free(2, 100.0, 64, 1000).unwrap().m0, 5);
        assert_eq!(find_m0_free(3, 7.0, 64, 1000).unwrap().m0, 4);
        assert!(matches!(find_m0_free(2, 4.0, 64, 1000), Err(Error::Domain(_))));
    }

    fn ledger(k1: f64, k2: f64, delta: f64) -> ConstantsLedger {
        ConstantsLedger::new()
            .with("lambda", 3.0, Provenance::Exact)
            .with("tau", 1.0, Provenance::Exact)
            .with("delta", delta, Provenance::User)
            .with("kappa1", k1, Provenance::User)
            .with("kappa2", k2, Provenance::User)
    }

    #[test]
    fn f_lm_examples() {
        let l = ledger(0.5, 0.0, 0.0);
        assert!(close(f_lm_eval(&l, 0.0, 20, 2.9, 5.0, TailExponent::Four).unwrap(), 121.5, 1e-9));
        let l = ledger(0.5, 1.0, 0.0);
        let v = f_lm_eval(&l, 0.0, 20, 2.9, 5.0, TailExponent::Four).unwrap();
        let expect = 121.5 - 3f64.powi(21) / (2.9f64.powi(20) - 3.0);
        assert!(close(v, expect, 1e-9));
        // the tail vanishes as μ approaches λ for large m
        let near = f_lm_eval(&l, 0.0, 400, 2.999, 5.0, TailExponent::Four).unwrap();
        assert!(close(near, 121.5, 1e-6));
        assert!(f_lm_eval(&l, 0.0, 20, 1.0, 5.0, TailExponent::Four).is_err());
    }

    #[test]
    fn m0_general() {
        // a = 0.5, b = 1/4; (1) needs m ≥ 40δ
        let cert = find_m0_general(&ledger(0.9, 1.0, 2.0), 0.0, 16, 10_000, TailExponent::Four).unwrap();
        assert!(cert.m0 >= 80);
        assert!(cert.conditions.iter().all(|c| c.holds));
        // condition (2) with δ = 0 forces m ≥ 8L/(3τ)
        let cert = find_m0_general(&ledger(0.99, 0.0, 0.0), 30.0, 8, 10_000, TailExponent::Four).unwrap();
        assert!(cert.m0 >= 80);
        match find_m0_general(&ledger(0.5, 1.0, 0.0), 0.0, 8, 1000, TailExponent::Four) {
            Err(Error::M0Unattainable { blocking, .. }) => assert!(blocking[0].starts_with("(4)")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bounds_hand_values() {
        let v = general_bound_value(3.0, 5.0, 0.01, 10_000).unwrap();
        assert_eq!(v, 2.7);
        let v = free_bound_value(2, 5.0, 0, 101);
        assert!(close(v, 3.0 * (1.0 - 15.0 * 3f64.powf(-50.5)), 1e-15));
        let p = FreeBoundParams {
            k: 2,
            n: 101,
            a: 5.0,
            m0: 5,
            n0: 1,
            eta: 0,
        };
        assert!(burnside_bound_free(&p).is_ok());
        let even = FreeBoundParams { n: 100, ..p };
        assert!(matches!(burnside_bound_free(&even), Err(Error::Validity(_))));
        let short = FreeBoundParams { n: 11, m0: 5, ..p };
        assert!(matches!(burnside_bound_free(&short), Err(Error::Validity(v)) if v.len() == 1));
    }

    #[test]
    fn ledger_roundtrip_and_kappas() {
        let mut l = ConstantsLedger::new()
            .with("rho", 0.5, Provenance::Exact)
            .with("nu", 0.8, Provenance::Empirical)
            .with("alpha", 2.0, Provenance::Empirical)
            .with("lambda", 3.0, Provenance::Exact)
            .with("delta", 0.0, Provenance::User);
        l.derive_kappas().unwrap();
        assert_eq!(l.entry("kappa1").unwrap(), Constant::new(0.4, Provenance::Empirical));
        assert_eq!(l.entry("kappa2").unwrap(), Constant::new(8.0, Provenance::User));
        let back = ConstantsLedger::from_json(&l.to_json()).unwrap();
        assert_eq!(back, l);
        assert!(ConstantsLedger::from_json(r#"{"zeta": {"value": 1, "provenance": "user"}}"#).is_err());
    }
}
