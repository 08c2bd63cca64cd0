//! Nefness of the classes `Λ(n, d, ρ, γ)` on the rational quotient.
//!
//! `Λ` is the quotient class whose pullback is
//! `nC + (2d-1)F - ρ s_0 - sum γ_i r_i`. For `ρ = 1` and
//! `γ^(2) = (2d-1)(2n-2) + 3` its pairing with an exceptional curve `Γ~_α`
//! only depends on `q(α) = |γ - (2d-1)α|^2` and on whether `Γ~_α` meets `s~0`:
//!
//! ```text
//! 4(2d-1) Λ·Γ~_α = q(α) - (2d-1)^2 - 3             if k(α) = 0
//!                = q(α) - (2d-1)^2 - 3 + 2(2d-1)    otherwise
//! ```
//!
//! Nefness is decided two ways: the closed criterion on the decomposition
//! `γ = (2d-1)μ + 2ε`, and a brute-force minimisation of `q` over a box of
//! exceptional indices around `μ` together with the fixed (-2)-curves.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::cover::{genus_tilde, parity_error};
use crate::curves::{c_o_tilde, check_n_d_rho, negative_curve_catalog, ExceptionalSpec};
use crate::error::{check_param, Error, Result};
use crate::lattice::{DivisorClass, QuotientClass};
use crate::types::{check_natural, l1, l2, odd_one_out, CharPConfig, Vec4};

/// Parameters of `Λ(n, d, ρ, γ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LambdaSpec {
    pub n: i64,
    pub d: i64,
    pub rho: i64,
    pub gamma: Vec4,
}

impl LambdaSpec {
    /// `ρ = 1`, the only case the nef analysis covers.
    pub fn new(n: i64, d: i64, gamma: Vec4) -> Self {
        LambdaSpec { n, d, rho: 1, gamma }
    }

    pub fn odd_d(&self) -> i128 {
        2 * self.d as i128 - 1
    }

    /// `(2d-1)(2n-2) + 3`, the value of `γ^(2)` making the image rational.
    pub fn rational_gamma_sq(&self) -> i128 {
        self.odd_d() * (2 * self.n as i128 - 2) + 3
    }

    /// Checks parity, the rational-image constraint (when `ρ = 1`) and the
    /// characteristic bound.
    pub fn validate(&self, cfg: &CharPConfig) -> Result<()> {
        check_n_d_rho(self.n, self.d, self.rho)?;
        check_natural("gamma", &self.gamma)?;
        parity_error(self.n, &self.gamma)?;
        if self.rho == 1 {
            let sq = l2(&self.gamma);
            let expected = self.rational_gamma_sq();
            if sq != expected {
                return Err(Error::RationalImageViolation { gamma_sq: sq, expected });
            }
        }
        if let Some(p) = cfg.p {
            let sum = l1(&self.gamma);
            let bound = p as i128 * self.odd_d();
            if sum > bound {
                return Err(Error::CharPExcluded {
                    id: "4.4.5",
                    p,
                    lhs: sum,
                    rhs: bound,
                });
            }
        }
        Ok(())
    }

    /// Builds the spec for `(d, γ)` when `γ^(2) = (2d-1)(2n-2) + 3` has an
    /// integral solution `n >= 1`.
    pub fn from_type(d: i64, gamma: Vec4) -> Option<LambdaSpec> {
        let big_d = 2 * d as i128 - 1;
        let sq = l2(&gamma);
        if d < 1 || sq < 3 || (sq - 3) % (2 * big_d) != 0 {
            return None;
        }
        let n = (sq - 3) / (2 * big_d) + 1;
        Some(LambdaSpec::new(i64::try_from(n).ok()?, d, gamma))
    }
}

pub fn lambda_class(spec: &LambdaSpec, cfg: &CharPConfig) -> Result<QuotientClass> {
    spec.validate(cfg)?;
    Ok(QuotientClass::from_pullback(DivisorClass::new(
        spec.n,
        2 * spec.d - 1,
        [-spec.rho, 0, 0, 0],
        spec.gamma.map(|g| -g),
    )))
}

/// The unique split `γ = (2d-1)μ + 2ε` with `μ ≡ γ (mod 2)` and
/// `|ε_i| <= d-1`, with the two perturbed companions of `μ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub mu: Vec4,
    pub eps: Vec4,
    /// `μ_i + 1` where `ε_i >= 0`, `μ_i - 1` where `ε_i < 0`.
    pub nat_mu: Vec4,
    /// Every choice of `♭μ`: `♮μ` on a pair of indices carrying the two largest
    /// `|ε_i|`, `μ` elsewhere.
    pub flat_mu_set: BTreeSet<Vec4>,
}

impl Decomposition {
    pub fn eps_sq(&self) -> i128 {
        l2(&self.eps)
    }

    pub fn eps_abs_sum(&self) -> i128 {
        self.eps.iter().map(|&e| e.abs() as i128).sum()
    }

    /// `max_{i != j} |ε_i| + |ε_j|`.
    pub fn eps_top_pair(&self) -> i128 {
        let mut a: Vec<i128> = self.eps.iter().map(|&e| e.abs() as i128).collect();
        a.sort_unstable_by(|x, y| y.cmp(x));
        a[0] + a[1]
    }

    /// `{μ, ♮μ} ∪ ♭μ-set`.
    pub fn candidates(&self) -> BTreeSet<Vec4> {
        let mut c = self.flat_mu_set.clone();
        c.insert(self.mu);
        c.insert(self.nat_mu);
        c
    }
}

pub fn decompose_type(gamma: &Vec4, d: i64) -> Result<Decomposition> {
    check_natural("gamma", gamma)?;
    check_param("d", d)?;
    if d < 1 {
        return Err(Error::InvalidParameter {
            name: "d",
            detail: format!("d must be >= 1, got {d}"),
        });
    }
    let big_d = 2 * d - 1;
    let mut mu = [0i64; 4];
    let mut eps = [0i64; 4];
    for i in 0..4 {
        let par = gamma[i].rem_euclid(2);
        // x is even; pick the unique j with x - 2Dj in [-(D-1), D-1].
        let x = gamma[i] - big_d * par;
        let j = (x + big_d - 1).div_euclid(2 * big_d);
        mu[i] = par + 2 * j;
        eps[i] = (gamma[i] - big_d * mu[i]) / 2;
        assert!(mu[i] >= 0, "mu is natural for natural gamma");
        debug_assert!(eps[i].abs() <= d - 1);
    }
    let nat_mu = std::array::from_fn(|i| if eps[i] >= 0 { mu[i] + 1 } else { mu[i] - 1 });
    let abs: Vec<i64> = eps.iter().map(|e| e.abs()).collect();
    let best = (0..4)
        .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
        .map(|(i, j)| abs[i] + abs[j])
        .max()
        .expect("four coordinates");
    let flat_mu_set = (0..4)
        .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
        .filter(|&(i, j)| abs[i] + abs[j] == best)
        .map(|(i, j)| {
            let mut v = mu;
            v[i] = nat_mu[i];
            v[j] = nat_mu[j];
            v
        })
        .collect();
    Ok(Decomposition {
        mu,
        eps,
        nat_mu,
        flat_mu_set,
    })
}

/// `Λ(n,d,1,γ)·Γ~_α` from the closed formula, as an exact rational.
pub fn lambda_dot_exceptional_closed(d: i64, gamma: &Vec4, alpha: &ExceptionalSpec) -> BigRational {
    let big_d = 2 * d as i128 - 1;
    let q = q_value(gamma, big_d, &alpha.alpha);
    let mut num = q - big_d * big_d - 3;
    if alpha.k != 0 {
        num += 2 * big_d;
    }
    BigRational::new(BigInt::from(num), BigInt::from(4 * big_d))
}

fn q_value(gamma: &Vec4, big_d: i128, alpha: &Vec4) -> i128 {
    (0..4)
        .map(|i| {
            let t = gamma[i] as i128 - big_d * alpha[i] as i128;
            t * t
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum NefMode {
    Closed,
    Brute,
    #[default]
    Both,
}

/// How the third closed condition is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Reading {
    /// `(2d-1)·max(|ε_i|+|ε_j|) <= d^2 - 1 + ε^(2)`.
    #[default]
    Factored,
    /// `max(|ε_i|+|ε_j|) <= d^2 - 1 + ε^(2)`.
    Literal,
}

pub const DEFAULT_RADIUS: i64 = 3;
/// The box is doubled at most this many times before giving up.
const MAX_ENLARGEMENTS: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NefOptions {
    pub mode: NefMode,
    pub reading: Reading,
    pub radius: i64,
    pub cfg: CharPConfig,
}

impl Default for NefOptions {
    fn default() -> Self {
        NefOptions {
            mode: NefMode::Both,
            reading: Reading::Factored,
            radius: DEFAULT_RADIUS,
            cfg: CharPConfig::zero(),
        }
    }
}

impl NefOptions {
    pub fn with_mode(mut self, mode: NefMode) -> Self {
        self.mode = mode;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Nef,
    NotNef,
}

impl Verdict {
    fn from_bool(nef: bool) -> Self {
        if nef {
            Verdict::Nef
        } else {
            Verdict::NotNef
        }
    }

    pub fn is_nef(self) -> bool {
        self == Verdict::Nef
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NefReport {
    pub verdict: Verdict,
    pub mode: NefMode,
    pub failing_constraint: Option<String>,
    pub witness: Option<Vec4>,
    pub boundary_contacts: Vec<Vec4>,
    pub agreement: Option<bool>,
    pub nef_closed: Option<bool>,
    pub nef_brute: Option<bool>,
    /// Smallest `Λ·Γ~_α` found by the box search.
    pub min_exceptional_pairing: Option<i128>,
}

/// Outcome of the closed criterion: per-condition pass flags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosedCriterion {
    pub conditions: [(String, bool); 3],
}

impl ClosedCriterion {
    pub fn nef(&self) -> bool {
        self.conditions.iter().all(|(_, ok)| *ok)
    }

    pub fn first_failure(&self) -> Option<&str> {
        self.conditions.iter().find(|(_, ok)| !ok).map(|(id, _)| id.as_str())
    }
}

pub fn closed_criterion(dec: &Decomposition, d: i64, reading: Reading) -> ClosedCriterion {
    let d = d as i128;
    let big_d = 2 * d - 1;
    let e2 = dec.eps_sq();
    let c1 = e2 >= d * d - d + 1;
    let c2 = big_d * dec.eps_abs_sum() <= 3 * d * d - 3 * d + e2;
    let factor = match reading {
        Reading::Factored => big_d,
        Reading::Literal => 1,
    };
    let c3 = factor * dec.eps_top_pair() <= d * d - 1 + e2;
    ClosedCriterion {
        conditions: [
            ("5.12.1".to_string(), c1),
            ("5.12.2".to_string(), c2),
            ("5.12.3".to_string(), c3),
        ],
    }
}

/// Exhaustive scan of exceptional indices in a box around `μ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoxSearch {
    pub radius: i64,
    /// Minimum of `q` over `k(α) = 0` and its minimisers.
    pub k0_min_q: Option<i128>,
    pub k0_argmin: Vec<Vec4>,
    /// Minimum of `q` over `k(α) != 0` and its minimisers.
    pub other_min_q: Option<i128>,
    pub other_argmin: Vec<Vec4>,
    /// `4(2d-1)` times the minimal pairing `Λ·Γ~_α`.
    pub min_scaled_pairing: i128,
    pub pairing_argmin: Vec<Vec4>,
    pub contacts: Vec<Vec4>,
}

impl BoxSearch {
    pub fn min_pairing(&self, d: i64) -> i128 {
        let scale = 4 * (2 * d as i128 - 1);
        debug_assert_eq!(self.min_scaled_pairing % scale, 0);
        self.min_scaled_pairing.div_euclid(scale)
    }
}

struct Bounds {
    lo: Vec4,
    hi: Vec4,
    lo_natural: [bool; 4],
    hi_natural: [bool; 4],
}

fn bounds(mu: &Vec4, radius: i64, cfg: &CharPConfig) -> Bounds {
    let mut b = Bounds {
        lo: [0; 4],
        hi: [0; 4],
        lo_natural: [false; 4],
        hi_natural: [false; 4],
    };
    for i in 0..4 {
        let lo = mu[i] - radius;
        b.lo[i] = lo.max(0);
        b.lo_natural[i] = lo <= 0;
        let hi = mu[i] + radius;
        match cfg.p {
            Some(p) if hi >= p => {
                b.hi[i] = p;
                b.hi_natural[i] = true;
            }
            _ => b.hi[i] = hi,
        }
    }
    b
}

fn scan(gamma: &Vec4, d: i64, b: &Bounds, cfg: &CharPConfig, radius: i64) -> BoxSearch {
    let big_d = 2 * d as i128 - 1;
    let base = big_d * big_d + 3;
    let mut out = BoxSearch {
        radius,
        k0_min_q: None,
        k0_argmin: Vec::new(),
        other_min_q: None,
        other_argmin: Vec::new(),
        min_scaled_pairing: i128::MAX,
        pairing_argmin: Vec::new(),
        contacts: Vec::new(),
    };
    let p_bound = cfg.p.map(|p| p as i128);
    for a0 in b.lo[0]..=b.hi[0] {
        for a1 in b.lo[1]..=b.hi[1] {
            for a2 in b.lo[2]..=b.hi[2] {
                for a3 in b.lo[3]..=b.hi[3] {
                    let alpha = [a0, a1, a2, a3];
                    let Some(k) = odd_one_out(&alpha) else { continue };
                    if let Some(p) = p_bound {
                        if l1(&alpha) > p {
                            continue;
                        }
                    }
                    let q = q_value(gamma, big_d, &alpha);
                    let (slot, argmin) = if k == 0 {
                        (&mut out.k0_min_q, &mut out.k0_argmin)
                    } else {
                        (&mut out.other_min_q, &mut out.other_argmin)
                    };
                    update_min(slot, argmin, q, alpha);
                    let scaled = if k == 0 { q - base } else { q - base + 2 * big_d };
                    if scaled < out.min_scaled_pairing {
                        out.min_scaled_pairing = scaled;
                        out.pairing_argmin.clear();
                    }
                    if scaled == out.min_scaled_pairing {
                        out.pairing_argmin.push(alpha);
                    }
                    if scaled == 0 {
                        out.contacts.push(alpha);
                    }
                }
            }
        }
    }
    out
}

fn update_min(slot: &mut Option<i128>, argmin: &mut Vec<Vec4>, q: i128, alpha: Vec4) {
    match *slot {
        Some(m) if q > m => {}
        Some(m) if q == m => argmin.push(alpha),
        _ => {
            *slot = Some(q);
            argmin.clear();
            argmin.push(alpha);
        }
    }
}

fn touches_artificial_boundary(alpha: &Vec4, b: &Bounds) -> bool {
    (0..4).any(|i| (alpha[i] == b.lo[i] && !b.lo_natural[i]) || (alpha[i] == b.hi[i] && !b.hi_natural[i]))
}

/// Minimises `q` over every valid `α` in the box of the given radius around
/// `μ`, enlarging the box while a minimiser sits on an artificial face.
pub fn search_box(spec: &LambdaSpec, radius: i64, cfg: &CharPConfig) -> Result<BoxSearch> {
    if radius < 2 {
        return Err(Error::InvalidParameter {
            name: "search_radius",
            detail: format!("radius must be >= 2, got {radius}"),
        });
    }
    let dec = decompose_type(&spec.gamma, spec.d)?;
    let mut r = radius;
    for _ in 0..=MAX_ENLARGEMENTS {
        let b = bounds(&dec.mu, r, cfg);
        let found = scan(&spec.gamma, spec.d, &b, cfg, r);
        let on_face = found
            .k0_argmin
            .iter()
            .chain(&found.other_argmin)
            .any(|a| touches_artificial_boundary(a, &b));
        if !on_face {
            return Ok(found);
        }
        r *= 2;
    }
    Err(Error::SearchBoxExhausted { radius: r / 2 })
}

fn catalog_failure(lambda: &QuotientClass, cfg: &CharPConfig) -> Result<Option<String>> {
    for entry in negative_curve_catalog(cfg) {
        let v = lambda.dot(&QuotientClass::from_pullback(entry.pullback))?;
        if v < BigInt::from(0) {
            return Ok(Some(format!("5.7-catalog:{}", entry.name)));
        }
    }
    Ok(None)
}

pub fn nef_check(spec: &LambdaSpec, opts: &NefOptions) -> Result<NefReport> {
    if spec.rho != 1 {
        return Err(Error::ConstraintViolation {
            id: "5.12-rho",
            detail: format!("nef analysis needs rho = 1, got {}", spec.rho),
        });
    }
    let lambda = lambda_class(spec, &opts.cfg)?;
    let dec = decompose_type(&spec.gamma, spec.d)?;

    let closed =
        matches!(opts.mode, NefMode::Closed | NefMode::Both).then(|| closed_criterion(&dec, spec.d, opts.reading));

    let brute = if matches!(opts.mode, NefMode::Brute | NefMode::Both) {
        let search = search_box(spec, opts.radius, &opts.cfg)?;
        let catalog = catalog_failure(&lambda, &opts.cfg)?;
        Some((search, catalog))
    } else {
        None
    };

    let nef_closed = closed.as_ref().map(ClosedCriterion::nef);
    let nef_brute = brute
        .as_ref()
        .map(|(s, cat)| s.min_scaled_pairing >= 0 && cat.is_none());

    let verdict = Verdict::from_bool(nef_brute.or(nef_closed).expect("at least one mode"));
    let failing_constraint = match (&closed, &brute) {
        (Some(c), _) if c.first_failure().is_some() => c.first_failure().map(str::to_string),
        (_, Some((_, Some(cat)))) => Some(cat.clone()),
        _ => None,
    };
    let witness = brute
        .as_ref()
        .and_then(|(s, _)| (s.min_scaled_pairing < 0).then(|| s.pairing_argmin[0]));
    let (boundary_contacts, min_exceptional_pairing) = match &brute {
        Some((s, _)) => (s.contacts.clone(), Some(s.min_pairing(spec.d))),
        None => (Vec::new(), None),
    };
    Ok(NefReport {
        verdict,
        mode: opts.mode,
        failing_constraint,
        witness,
        boundary_contacts,
        agreement: nef_closed.zip(nef_brute).map(|(a, b)| a == b),
        nef_closed,
        nef_brute,
        min_exceptional_pairing,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimizerReport {
    pub decomposition: Decomposition,
    pub k0_min_q: Option<i128>,
    pub k0_argmin: Vec<Vec4>,
    pub other_min_q: Option<i128>,
    pub other_argmin: Vec<Vec4>,
    pub argmin: Vec<Vec4>,
    pub candidates: Vec<Vec4>,
    /// The minimal pairing is attained at some candidate.
    pub holds: bool,
    pub counterexample: Option<Vec4>,
}

/// Compares the brute-force minimiser of `Λ·Γ~_α` with `{μ, ♮μ} ∪ ♭μ-set`.
pub fn verify_minimizer_claim(spec: &LambdaSpec, radius: i64, cfg: &CharPConfig) -> Result<MinimizerReport> {
    if spec.rho != 1 {
        return Err(Error::ConstraintViolation {
            id: "5.11-rho",
            detail: format!("rho must be 1, got {}", spec.rho),
        });
    }
    spec.validate(cfg)?;
    let dec = decompose_type(&spec.gamma, spec.d)?;
    if dec.mu.iter().skip(1).any(|&m| (m - dec.mu[0]).rem_euclid(2) == 0) {
        return Err(Error::ConstraintViolation {
            id: "5.11-mu-parity",
            detail: format!("mu = {:?} violates mu_0 + 1 ≡ mu_j", dec.mu),
        });
    }
    let search = search_box(spec, radius, cfg)?;
    let candidates = dec.candidates();
    let holds = search.pairing_argmin.iter().any(|a| candidates.contains(a));
    let counterexample = (!holds).then(|| search.pairing_argmin[0]);
    Ok(MinimizerReport {
        k0_min_q: search.k0_min_q,
        k0_argmin: search.k0_argmin,
        other_min_q: search.other_min_q,
        other_argmin: search.other_argmin,
        argmin: search.pairing_argmin,
        candidates: candidates.into_iter().collect(),
        holds,
        counterexample,
        decomposition: dec,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZDivisorReport {
    /// At most one exceptional curve per `j ∈ {1,2,3}` with `Λ·Γ~ = 0` and `Γ~·s~_j = 1`.
    pub components: Vec<ExceptionalSpec>,
    /// Number of contacts found for `j = 1, 2, 3`.
    pub contacts_per_j: [usize; 3],
    pub unique: bool,
    pub anomalies: Vec<String>,
}

impl ZDivisorReport {
    /// Pullback of the reduced divisor `Z~`.
    pub fn pullback(&self) -> DivisorClass {
        self.components.iter().map(ExceptionalSpec::pullback).sum()
    }
}

pub fn z_divisor(spec: &LambdaSpec, radius: i64, cfg: &CharPConfig) -> Result<ZDivisorReport> {
    if spec.d < 2 {
        return Err(Error::ConstraintViolation {
            id: "5.15-d",
            detail: format!("d must be >= 2, got {}", spec.d),
        });
    }
    let opts = NefOptions {
        mode: NefMode::Brute,
        radius,
        cfg: *cfg,
        ..NefOptions::default()
    };
    if !nef_check(spec, &opts)?.verdict.is_nef() {
        return Err(Error::NotNef);
    }
    let search = search_box(spec, radius, cfg)?;
    let mut per_j: [Vec<ExceptionalSpec>; 3] = Default::default();
    for alpha in search.contacts {
        let e = ExceptionalSpec::new(alpha, cfg)?;
        if e.k != 0 {
            per_j[e.k - 1].push(e);
        }
    }
    let mut anomalies = Vec::new();
    for (j, found) in per_j.iter().enumerate() {
        if found.len() > 1 {
            anomalies.push(format!(
                "j = {}: {} contacts {:?}",
                j + 1,
                found.len(),
                found.iter().map(|e| e.alpha).collect::<Vec<_>>()
            ));
        }
    }
    Ok(ZDivisorReport {
        contacts_per_j: std::array::from_fn(|j| per_j[j].len()),
        unique: anomalies.is_empty(),
        anomalies,
        components: per_j.into_iter().flatten().collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LinearSystemDims {
    pub dim_lambda: i128,
    pub dim_lambda_minus_co: i128,
}

fn harbourne_dim(class: &QuotientClass) -> Result<i128> {
    let k = QuotientClass::canonical();
    let v = class.dot(&(class - &k))?;
    let v = v.to_i128().expect("pairings of bounded parameters fit in i128");
    if v % 2 != 0 {
        return Err(Error::IdentityFailure {
            id: "5.16",
            detail: format!("D.(D-K) = {v} is odd"),
        });
    }
    Ok(v / 2)
}

/// Harbourne dimensions of `|Λ|` and `|Λ - C~o|`, cross-checked against
/// `2d-2` and `d-2`.
pub fn linear_system_dims(spec: &LambdaSpec, opts: &NefOptions) -> Result<LinearSystemDims> {
    if spec.d < 2 {
        return Err(Error::ConstraintViolation {
            id: "5.17-d",
            detail: format!("d must be >= 2, got {}", spec.d),
        });
    }
    let lambda = lambda_class(spec, &opts.cfg)?;
    let anti = -lambda.dot(&QuotientClass::canonical())?.to_i128().expect("bounded");
    if anti < 2 {
        return Err(Error::AnticanonicalDegreeTooSmall { degree: anti });
    }
    let brute = NefOptions {
        mode: NefMode::Brute,
        ..*opts
    };
    if !nef_check(spec, &brute)?.verdict.is_nef() {
        return Err(Error::NotNef);
    }
    let dim_lambda = harbourne_dim(&lambda)?;
    let dim_lambda_minus_co = harbourne_dim(&(&lambda - &c_o_tilde()))?;
    let d = spec.d as i128;
    if dim_lambda != 2 * d - 2 || dim_lambda_minus_co != d - 2 {
        return Err(Error::IdentityFailure {
            id: "5.17.4",
            detail: format!(
                "Harbourne dims ({dim_lambda}, {dim_lambda_minus_co}) differ from ({}, {})",
                2 * d - 2,
                d - 2
            ),
        });
    }
    Ok(LinearSystemDims {
        dim_lambda,
        dim_lambda_minus_co,
    })
}

/// Dimension of the moduli space of minimal-hyperelliptic covers of type γ.
pub fn moduli_dimension(spec: &LambdaSpec, opts: &NefOptions) -> Result<i64> {
    spec.validate(&opts.cfg)?;
    if spec.rho != 1 {
        return Err(Error::ConstraintViolation {
            id: "5.20-rho",
            detail: format!("rho must be 1, got {}", spec.rho),
        });
    }
    if spec.d == 1 {
        // γ = μ with μ^(2) = 2n + 1: a single cover.
        let dec = decompose_type(&spec.gamma, 1)?;
        if dec.mu != spec.gamma || l2(&dec.mu) != 2 * spec.n as i128 + 1 {
            return Err(Error::ConstraintViolation {
                id: "5.20-d1",
                detail: format!("gamma = {:?} is not mu with mu^(2) = 2n+1", spec.gamma),
            });
        }
        return Ok(0);
    }
    let brute = NefOptions {
        mode: NefMode::Brute,
        ..*opts
    };
    if !nef_check(spec, &brute)?.verdict.is_nef() {
        return Err(Error::NotNef);
    }
    Ok(spec.d - 1)
}

/// Genus of the image curve of `Λ` on the quotient (`m = 1`).
pub fn lambda_genus_tilde(spec: &LambdaSpec) -> Result<i64> {
    genus_tilde(spec.n, spec.d, spec.rho, 1, &spec.gamma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn cfg0() -> CharPConfig {
        CharPConfig::zero()
    }

    fn worked() -> LambdaSpec {
        LambdaSpec::new(4, 2, [3, 2, 2, 2])
    }

    fn non_nef() -> LambdaSpec {
        LambdaSpec::new(6, 3, [7, 2, 0, 0])
    }

    fn set(v: &[Vec4]) -> BTreeSet<Vec4> {
        v.iter().copied().collect()
    }

    #[test]
    fn lambda_class_examples() {
        let k = QuotientClass::canonical();
        let l = lambda_class(&worked(), &cfg0()).unwrap();
        assert_eq!(l.self_intersection().unwrap(), big(1));
        assert_eq!(l.dot(&k).unwrap(), big(-3));

        let l = lambda_class(&LambdaSpec::new(2, 1, [1, 0, 0, 2]), &cfg0()).unwrap();
        assert_eq!(l.self_intersection().unwrap(), big(-1));
        assert_eq!(l.dot(&k).unwrap(), big(-1));

        assert!(matches!(
            lambda_class(&LambdaSpec::new(4, 2, [3, 2, 2, 1]), &cfg0()),
            Err(Error::ParityViolation { .. })
        ));
        assert!(matches!(
            lambda_class(&LambdaSpec::new(6, 2, [3, 2, 2, 2]), &cfg0()),
            Err(Error::RationalImageViolation { .. })
        ));
        assert!(matches!(
            lambda_class(
                &LambdaSpec::new(8, 3, [5, 4, 4, 4]),
                &CharPConfig::new(Some(3)).unwrap()
            ),
            Err(Error::CharPExcluded { .. })
        ));
    }

    #[test]
    fn decomposition_examples() {
        let dec = decompose_type(&[3, 2, 2, 2], 2).unwrap();
        assert_eq!(dec.mu, [1, 0, 0, 0]);
        assert_eq!(dec.eps, [0, 1, 1, 1]);
        assert_eq!(dec.nat_mu, [2, 1, 1, 1]);
        assert_eq!(dec.flat_mu_set, set(&[[1, 1, 1, 0], [1, 1, 0, 1], [1, 0, 1, 1]]));

        let dec = decompose_type(&[7, 2, 0, 0], 3).unwrap();
        assert_eq!(dec.mu, [1, 0, 0, 0]);
        assert_eq!(dec.eps, [1, 1, 0, 0]);
        assert_eq!(dec.nat_mu, [2, 1, 1, 1]);
        assert_eq!(dec.flat_mu_set, set(&[[2, 1, 0, 0]]));

        for d in 1..6 {
            let mu = [3, 2, 0, 4];
            let gamma = mu.map(|m| (2 * d - 1) * m);
            let dec = decompose_type(&gamma, d).unwrap();
            assert_eq!(dec.mu, mu);
            assert_eq!(dec.eps, [0; 4]);
        }
    }

    #[test]
    fn decomposition_invariants() {
        for d in 1..6i64 {
            let big_d = 2 * d - 1;
            for g in 0..40i64 {
                let gamma = [g, (g * 7) % 23, (g * 3) % 17, 40 - g];
                let dec = decompose_type(&gamma, d).unwrap();
                for i in 0..4 {
                    assert_eq!(gamma[i], big_d * dec.mu[i] + 2 * dec.eps[i]);
                    assert!(dec.eps[i].abs() <= d - 1);
                    assert_eq!((dec.mu[i] - gamma[i]).rem_euclid(2), 0);
                    assert_eq!((dec.nat_mu[i] - dec.mu[i]) * dec.eps[i], dec.eps[i].abs());
                }
                for flat in &dec.flat_mu_set {
                    let changed: Vec<usize> = (0..4).filter(|&i| flat[i] != dec.mu[i]).collect();
                    assert_eq!(changed.len(), 2);
                    assert!(changed.iter().all(|&i| flat[i] == dec.nat_mu[i]));
                }
            }
        }
    }

    #[test]
    fn closed_pairing_examples() {
        let cfg = cfg0();
        let e = ExceptionalSpec::new([1, 0, 0, 0], &cfg).unwrap();
        assert_eq!(
            lambda_dot_exceptional_closed(2, &[3, 2, 2, 2], &e),
            BigRational::from_integer(big(0))
        );
        let e = ExceptionalSpec::new([0, 1, 0, 0], &cfg).unwrap();
        assert_eq!(
            lambda_dot_exceptional_closed(2, &[3, 2, 2, 2], &e),
            BigRational::from_integer(big(1))
        );
        let lambda = lambda_class(&worked(), &cfg).unwrap();
        assert_eq!(lambda.dot(&e.class()).unwrap(), big(1));
        for mu in [[1, 0, 0, 0], [3, 2, 0, 0], [2, 1, 1, 1]] {
            let e = ExceptionalSpec::new(mu, &cfg).unwrap();
            assert_eq!(
                lambda_dot_exceptional_closed(1, &mu, &e),
                BigRational::from_integer(big(-1))
            );
        }
    }

    #[test]
    fn nef_examples() {
        let r = nef_check(&worked(), &NefOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Nef);
        assert_eq!(r.agreement, Some(true));
        for a in [[1, 0, 0, 0], [1, 1, 1, 0], [1, 1, 0, 1], [1, 0, 1, 1]] {
            assert!(r.boundary_contacts.contains(&a), "{a:?}");
        }
        assert_eq!(r.witness, None);

        let r = nef_check(&non_nef(), &NefOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::NotNef);
        assert_eq!(r.witness, Some([1, 0, 0, 0]));
        assert_eq!(r.failing_constraint.as_deref(), Some("5.12.1"));
        assert_eq!(r.agreement, Some(true));
        assert_eq!(r.min_exceptional_pairing, Some(-1));

        let r = nef_check(&LambdaSpec::new(4, 1, [3, 0, 0, 0]), &NefOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::NotNef);
        assert_eq!(r.min_exceptional_pairing, Some(-1));
        assert_eq!(r.witness, Some([3, 0, 0, 0]));
    }

    #[test]
    fn nef_modes_are_independent() {
        let closed = nef_check(&worked(), &NefOptions::default().with_mode(NefMode::Closed)).unwrap();
        assert_eq!(closed.nef_brute, None);
        assert_eq!(closed.agreement, None);
        assert!(closed.boundary_contacts.is_empty());
        let brute = nef_check(&non_nef(), &NefOptions::default().with_mode(NefMode::Brute)).unwrap();
        assert_eq!(brute.nef_closed, None);
        assert_eq!(brute.failing_constraint, None);
        assert!(brute.witness.is_some());
    }

    #[test]
    fn nef_report_json() {
        let r = nef_check(&non_nef(), &NefOptions::default()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["verdict"], "not_nef");
        assert_eq!(v["mode"], "both");
        assert_eq!(v["witness"], serde_json::json!([1, 0, 0, 0]));
    }

    #[test]
    fn search_radius_validation() {
        assert!(search_box(&worked(), 1, &cfg0()).is_err());
        let a = search_box(&worked(), 2, &cfg0()).unwrap();
        let b = search_box(&worked(), 5, &cfg0()).unwrap();
        assert_eq!(a.min_scaled_pairing, b.min_scaled_pairing);
        assert_eq!(a.contacts, b.contacts);
    }

    #[test]
    fn minimizer_examples() {
        let r = verify_minimizer_claim(&worked(), 3, &cfg0()).unwrap();
        assert_eq!(r.k0_min_q, Some(12));
        assert!(r.k0_argmin.contains(&[1, 0, 0, 0]));
        assert_eq!(r.other_min_q, Some(6));
        assert_eq!(set(&r.other_argmin), set(&[[1, 1, 1, 0], [1, 1, 0, 1], [1, 0, 1, 1]]));
        assert!(r.holds);

        let r = verify_minimizer_claim(&non_nef(), 3, &cfg0()).unwrap();
        assert_eq!(r.k0_min_q, Some(8));
        assert_eq!(r.argmin, vec![[1, 0, 0, 0]]);
        assert!(r.holds);
    }

    #[test]
    fn z_divisor_examples() {
        let z = z_divisor(&worked(), 3, &cfg0()).unwrap();
        let alphas: Vec<(Vec4, usize)> = z.components.iter().map(|e| (e.alpha, e.k)).collect();
        assert_eq!(alphas, vec![([1, 0, 1, 1], 1), ([1, 1, 0, 1], 2), ([1, 1, 1, 0], 3)]);
        assert!(z.unique);
        assert_eq!(z.contacts_per_j, [1, 1, 1]);
        assert_eq!(z_divisor(&non_nef(), 3, &cfg0()), Err(Error::NotNef));
    }

    #[test]
    fn dims_examples() {
        let opts = NefOptions::default();
        let dims = linear_system_dims(&worked(), &opts).unwrap();
        assert_eq!((dims.dim_lambda, dims.dim_lambda_minus_co), (2, 0));
        // d = 3 nef type from the (0, d-1, d-1, d-1) family.
        let spec = LambdaSpec::new(8, 3, [5, 4, 4, 4]);
        let dims = linear_system_dims(&spec, &opts).unwrap();
        assert_eq!((dims.dim_lambda, dims.dim_lambda_minus_co), (4, 1));
        assert_eq!(linear_system_dims(&non_nef(), &opts), Err(Error::NotNef));
    }

    #[test]
    fn moduli_examples() {
        let opts = NefOptions::default();
        assert_eq!(moduli_dimension(&worked(), &opts).unwrap(), 1);
        assert_eq!(
            moduli_dimension(&LambdaSpec::new(4, 1, [3, 0, 0, 0]), &opts).unwrap(),
            0
        );
        assert_eq!(moduli_dimension(&non_nef(), &opts), Err(Error::NotNef));
    }

    #[test]
    fn automatic_minus_two_nonnegativity() {
        let cfg = CharPConfig::new(Some(7)).unwrap();
        let spec = worked();
        let lambda = lambda_class(&spec, &cfg).unwrap();
        for i in 0..4 {
            assert_eq!(lambda.dot(&crate::curves::r_tilde(i)).unwrap(), big(spec.gamma[i]));
            assert_eq!(
                lambda.dot(&crate::curves::s_tilde(i)).unwrap(),
                big(if i == 0 { 1 } else { 0 })
            );
        }
        assert_eq!(lambda.dot(&c_o_tilde()).unwrap(), big(1));
        // (p(2d-1) - γ^(1)) / 2 = (21 - 9) / 2
        assert_eq!(lambda.dot(&crate::curves::c_p_tilde(7)).unwrap(), big(6));
        assert_eq!(lambda.dot(&QuotientClass::canonical()).unwrap(), big(-3));
    }

    #[test]
    fn char_p_restricts_exceptional_set() {
        let cfg = CharPConfig::new(Some(11)).unwrap();
        let opts = NefOptions {
            cfg,
            ..NefOptions::default()
        };
        let r = nef_check(&worked(), &opts).unwrap();
        assert_eq!(r.verdict, Verdict::Nef);
    }
}
