//! Self-check suite: thirteen numbered criteria, each an exhaustive sweep or
//! a seeded random sample compared against an oracle.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::census::{census, write_csv, CensusGrid};
use crate::cover::genus_tilde;
use crate::curves::{c_o_tilde, enumerate_exceptional, gamma_perp_class, negative_curve_catalog, ExceptionalSpec};
use crate::error::Result;
use crate::expr::{format, parse};
use crate::families::{construction_kit, generate_nef_types, generate_non_nef_types, mu_patterns};
use crate::lattice::{DivisorClass, QuotientClass};
use crate::nef::{
    decompose_type, lambda_class, lambda_dot_exceptional_closed, moduli_dimension, nef_check, verify_minimizer_claim,
    z_divisor, LambdaSpec, NefMode, NefOptions, Reading, DEFAULT_RADIUS,
};
use crate::types::{l1, l2, odd_one_out, CharPConfig, Vec4};

pub const CRITERIA: [(u8, &str); 13] = [
    (1, "exceptional-catalog"),
    (2, "negative-curve-catalog"),
    (3, "pairing-closed-form"),
    (4, "nef-agreement"),
    (5, "families"),
    (6, "adjunction"),
    (7, "dimensions"),
    (8, "minimizer"),
    (9, "z-uniqueness"),
    (10, "construction-kit"),
    (11, "decomposition"),
    (12, "parser-round-trip"),
    (13, "census-determinism"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerifyOptions {
    pub seed: u64,
    pub reading: Reading,
    pub radius: i64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0x5eed,
            reading: Reading::Factored,
            radius: DEFAULT_RADIUS,
        }
    }
}

impl VerifyOptions {
    fn nef(&self, mode: NefMode) -> NefOptions {
        NefOptions {
            mode,
            reading: self.reading,
            radius: self.radius,
            cfg: CharPConfig::zero(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub checked: u64,
    pub failures: u64,
    /// First few failures, verbatim.
    pub samples: Vec<String>,
    pub elapsed_ms: u128,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        let status = if self.pass { "PASS" } else { "FAIL" };
        let mut s = format!(
            "criterion {:>2} {:<24} {status}  checked={} failures={} ({} ms)",
            self.id, self.name, self.checked, self.failures, self.elapsed_ms
        );
        for x in &self.samples {
            s.push_str("\n    ");
            s.push_str(x);
        }
        s
    }
}

const MAX_SAMPLES: usize = 5;

#[derive(Default)]
struct Tally {
    checked: u64,
    failures: u64,
    samples: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.failures += 1;
        if self.samples.len() < MAX_SAMPLES {
            self.samples.push(what);
        }
    }

    fn result<T>(&mut self, r: Result<T>, ctx: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checked += 1;
                self.fail(format!("{}: {e}", ctx()));
                None
            }
        }
    }
}

/// Every valid `Λ(n, d, 1, γ)` with `d` in range, `μ_i <= mu_max` and
/// `|ε_i| <= d-1`.
pub fn sweep_specs(d_range: std::ops::RangeInclusive<i64>, mu_max: i64) -> Vec<LambdaSpec> {
    let mut out = Vec::new();
    let cfg = CharPConfig::zero();
    for d in d_range {
        let w = d - 1;
        let big_d = 2 * d - 1;
        for mu in mu_patterns(mu_max) {
            for e0 in -w..=w {
                for e1 in -w..=w {
                    for e2 in -w..=w {
                        for e3 in -w..=w {
                            let eps = [e0, e1, e2, e3];
                            let gamma: Vec4 = std::array::from_fn(|i| big_d * mu[i] + 2 * eps[i]);
                            if gamma.iter().any(|&g| g < 0) {
                                continue;
                            }
                            if let Some(spec) = LambdaSpec::from_type(d, gamma) {
                                if spec.validate(&cfg).is_ok() {
                                    out.push(spec);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn half(v: BigInt) -> BigRational {
    BigRational::new(v, BigInt::from(2))
}

fn c1_exceptional() -> Tally {
    let mut t = Tally::default();
    let cfg = CharPConfig::zero();
    let k = QuotientClass::canonical();
    // Oracle: scan the cube directly and build the pullback by hand.
    let mut count = 0;
    for a0 in 0..15i64 {
        for a1 in 0..15 {
            for a2 in 0..15 {
                for a3 in 0..15 {
                    let alpha = [a0, a1, a2, a3];
                    let sq = l2(&alpha);
                    if sq % 2 == 0 || sq > 199 {
                        continue;
                    }
                    count += 1;
                    let kk = odd_one_out(&alpha).expect("odd square");
                    let mut s = [0; 4];
                    s[kk] = -1;
                    let a = ((sq - 1) / 2) as i64;
                    let pb = DivisorClass::new(a, 1, s, alpha.map(|x| -x));
                    let self_int = half(pb.dot(&pb));
                    let kdeg = half(pb.dot(&k.pullback));
                    let minus_one = BigRational::from_integer(BigInt::from(-1));
                    t.check(self_int == minus_one && kdeg == minus_one, || {
                        format!("alpha={alpha:?}: self={self_int} K={kdeg}")
                    });
                    let lib = ExceptionalSpec::new(alpha, &cfg).map(|e| e.pullback());
                    t.check(lib.as_ref() == Ok(&pb), || {
                        format!("alpha={alpha:?}: library class {lib:?}")
                    });
                }
            }
        }
    }
    let listed = enumerate_exceptional(199, &cfg);
    t.check(listed.len() == count, || {
        format!("enumeration lists {} classes, oracle {count}", listed.len())
    });
    t
}

fn c2_catalog() -> Tally {
    let mut t = Tally::default();
    let base = negative_curve_catalog(&CharPConfig::zero());
    t.check(base.len() == 9, || format!("{} base entries", base.len()));
    let p3 = negative_curve_catalog(&CharPConfig::new(Some(3)).expect("3 is prime"));
    t.check(p3.len() == 10 && p3.iter().any(|e| e.name == "C~3"), || {
        "C~3 missing in characteristic 3".into()
    });
    for e in base.iter().chain(&p3) {
        let q = QuotientClass::from_pullback(e.pullback.clone());
        let s = q.self_intersection();
        t.check(s == Ok(BigInt::from(-2)) && e.self_int == BigInt::from(-2), || {
            format!("{}: self-intersection {s:?}", e.name)
        });
    }
    t
}

fn random_spec(rng: &mut ChaCha8Rng) -> LambdaSpec {
    loop {
        let d = rng.gen_range(1..=8i64);
        let big_d = 2 * d - 1;
        let mu0 = rng.gen_range(0..=4i64);
        let mu: Vec4 = std::array::from_fn(|i| {
            if i == 0 {
                mu0
            } else {
                2 * rng.gen_range(0..=2i64) + (mu0 + 1) % 2
            }
        });
        let eps: Vec4 = std::array::from_fn(|_| rng.gen_range(-(d - 1)..=d - 1));
        let gamma: Vec4 = std::array::from_fn(|i| big_d * mu[i] + 2 * eps[i]);
        if gamma.iter().any(|&g| g < 0) {
            continue;
        }
        if let Some(spec) = LambdaSpec::from_type(d, gamma) {
            if spec.validate(&CharPConfig::zero()).is_ok() {
                return spec;
            }
        }
    }
}

fn c3_pairing(opts: &VerifyOptions) -> Tally {
    let mut t = Tally::default();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let cfg = CharPConfig::zero();
    while t.checked < 1000 {
        let spec = random_spec(&mut rng);
        let Ok(dec) = decompose_type(&spec.gamma, spec.d) else {
            continue;
        };
        let alpha: Vec4 = std::array::from_fn(|i| (dec.mu[i] + rng.gen_range(-3..=3i64)).max(0));
        if l2(&alpha) % 2 == 0 {
            continue;
        }
        let e = ExceptionalSpec::new(alpha, &cfg).expect("odd square");
        let closed = lambda_dot_exceptional_closed(spec.d, &spec.gamma, &e);
        let direct = lambda_class(&spec, &cfg).and_then(|l| l.dot(&e.class()));
        t.check(
            direct.as_ref().map(|v| BigRational::from_integer(v.clone())) == Ok(closed.clone()),
            || format!("{spec:?} alpha={alpha:?}: closed {closed} direct {direct:?}"),
        );
    }
    t
}

fn c4_agreement(specs: &[LambdaSpec], opts: &VerifyOptions) -> Tally {
    let mut t = Tally::default();
    let nef = opts.nef(NefMode::Both);
    for spec in specs {
        let Some(r) = t.result(nef_check(spec, &nef), || format!("{spec:?}")) else {
            continue;
        };
        t.check(r.agreement == Some(true), || {
            format!(
                "{spec:?}: closed={:?} brute={:?} failing={:?} witness={:?}",
                r.nef_closed, r.nef_brute, r.failing_constraint, r.witness
            )
        });
    }
    t
}

fn c5_families(opts: &VerifyOptions) -> Tally {
    let mut t = Tally::default();
    let cfg = CharPConfig::zero();
    let brute = opts.nef(NefMode::Brute);
    let both = opts.nef(NefMode::Both);
    for d in 2..=8 {
        for mu in mu_patterns(3) {
            for k in 0..4 {
                let Some(members) = t.result(generate_nef_types(d, k, &mu, &cfg), || format!("d={d} k={k} mu={mu:?}"))
                else {
                    continue;
                };
                for m in members {
                    let r = nef_check(&m.spec(d), &brute);
                    t.check(matches!(&r, Ok(r) if r.verdict.is_nef()), || {
                        format!("nef family d={d} {m:?}: {r:?}")
                    });
                }
            }
        }
    }
    for d in 3..=8 {
        for mu in mu_patterns(3) {
            let members = match generate_non_nef_types(d, &mu, d - 1, &cfg) {
                Ok(m) => m,
                Err(crate::Error::NoSolutions { .. }) => continue,
                Err(e) => {
                    t.fail(format!("non-nef d={d} mu={mu:?}: {e}"));
                    continue;
                }
            };
            for m in members {
                let r = nef_check(&m.spec(d), &both);
                t.check(
                    matches!(&r, Ok(r) if !r.verdict.is_nef()
                        && r.witness.is_some()
                        && r.failing_constraint.as_deref() == Some("5.12.1")),
                    || format!("non-nef family d={d} {m:?}: {r:?}"),
                );
            }
        }
    }
    t
}

fn c6_adjunction() -> Tally {
    let mut t = Tally::default();
    for d in 1..=5i64 {
        for n in 1..=12i64 {
            for a in 0..8 {
                for b in 0..8 {
                    for c in 0..8 {
                        for e in 0..8 {
                            let gamma = [a, b, c, e];
                            let Ok(gt) = genus_tilde(n, d, 1, 1, &gamma) else {
                                continue;
                            };
                            let Ok(class) = gamma_perp_class(n, d, 1, gamma) else {
                                continue;
                            };
                            let lhs = class.arithmetic_genus();
                            let rhs = BigInt::from(2 * gt as i128 + (1 - 2 + l1(&gamma)) / 2);
                            t.check(lhs == rhs, || format!("n={n} d={d} gamma={gamma:?}: {lhs} != {rhs}"));
                        }
                    }
                }
            }
        }
    }
    t
}

fn c7_dimensions(nef_specs: &[LambdaSpec], opts: &VerifyOptions) -> Tally {
    let mut t = Tally::default();
    let k = QuotientClass::canonical();
    let co = c_o_tilde();
    let brute = opts.nef(NefMode::Brute);
    for spec in nef_specs {
        let Some(l) = t.result(lambda_class(spec, &CharPConfig::zero()), || format!("{spec:?}")) else {
            continue;
        };
        let d = spec.d as i128;
        let lm = &l - &co;
        let a = l.dot(&(&l - &k)).map(half);
        let b = lm.dot(&(&lm - &k)).map(half);
        let want_a = BigRational::from_integer(BigInt::from(2 * d - 2));
        let want_b = BigRational::from_integer(BigInt::from(d - 2));
        t.check(a == Ok(want_a) && b == Ok(want_b), || format!("{spec:?}: {a:?} {b:?}"));
        let m = moduli_dimension(spec, &brute);
        t.check(m == Ok(spec.d - 1), || format!("{spec:?}: moduli dimension {m:?}"));
    }
    t
}

fn c8_minimizer(specs: &[LambdaSpec], opts: &VerifyOptions) -> Tally {
    let mut t = Tally::default();
    for spec in specs {
        let r = verify_minimizer_claim(spec, opts.radius, &CharPConfig::zero());
        t.check(matches!(&r, Ok(r) if r.holds), || match &r {
            Ok(r) => format!("{spec:?}: argmin {:?} outside candidates {:?}", r.argmin, r.candidates),
            Err(e) => format!("{spec:?}: {e}"),
        });
    }
    t
}

fn c9_z_unique(nef_specs: &[LambdaSpec], opts: &VerifyOptions) -> Tally {
    let mut t = Tally::default();
    for spec in nef_specs {
        let r = z_divisor(spec, opts.radius, &CharPConfig::zero());
        t.check(
            matches!(&r, Ok(r) if r.unique && r.contacts_per_j.iter().all(|&c| c <= 1)),
            || format!("{spec:?}: {r:?}"),
        );
    }
    t
}

fn c10_kit() -> Tally {
    let mut t = Tally::default();
    let patterns = mu_patterns(3);
    for d in 2..=6i64 {
        for mu in &patterns {
            let Some(kit) = t.result(construction_kit(d, mu), || format!("d={d} mu={mu:?}")) else {
                continue;
            };
            let big_d = 2 * d as i128 - 1;
            let d128 = d as i128;
            let g = kit.genus as i128;
            let n = kit.n as i128;
            let checks = [
                kit.d0 == kit.d1,
                kit.f.len() as i64 == d - 1 && kit.f.iter().all(|f| *f == kit.lambda_pullback),
                kit.g == kit.lambda_pullback,
                2 * g + 1 == big_d * l1(mu) + 6 * (d128 - 1),
                2 * n == big_d * l2(mu) + 4 * (d128 - 1) * (mu[1] + mu[2] + mu[3]) as i128 + 6 * d128 - 7,
                l1(&kit.gamma) == 2 * g + 1,
                l2(&kit.gamma) == big_d * (2 * n - 2) + 3,
                kit.lambda_pullback == DivisorClass::new(kit.n, 2 * d - 1, [-1, 0, 0, 0], kit.gamma.map(|x| -x)),
            ];
            for (i, ok) in checks.iter().enumerate() {
                t.check(*ok, || format!("d={d} mu={mu:?}: identity #{i}"));
            }
        }
    }
    t
}

fn c11_decomposition() -> Tally {
    let mut t = Tally::default();
    for d in 1..=5i64 {
        let big_d = 2 * d - 1;
        let top = 6 * big_d;
        // Oracle: the conditions are coordinatewise, so count per coordinate.
        let mut unique: Vec<(i64, i64)> = Vec::new();
        for x in 0..=top {
            let sols: Vec<(i64, i64)> = (-2..=top)
                .filter(|&m| (x - big_d * m) % 2 == 0 && ((x - big_d * m) / 2).abs() <= d - 1)
                .map(|m| (m, (x - big_d * m) / 2))
                .collect();
            t.check(sols.len() == 1 && sols[0].0 >= 0, || format!("d={d} x={x}: {sols:?}"));
            unique.push(sols[0]);
        }
        for a in 0..=top {
            for b in 0..=top {
                for c in 0..=top {
                    for e in 0..=top {
                        let gamma = [a, b, c, e];
                        let Ok(dec) = decompose_type(&gamma, d) else {
                            t.fail(format!("d={d} gamma={gamma:?}: rejected"));
                            continue;
                        };
                        let ok = (0..4).all(|i| (dec.mu[i], dec.eps[i]) == unique[gamma[i] as usize]);
                        t.check(ok, || format!("d={d} gamma={gamma:?}: {dec:?}"));
                    }
                }
            }
        }
    }
    t
}

/// Strings outside the grammar, each rejected at a known position.
pub const MALFORMED: [(&str, usize); 14] = [
    ("", 0),
    ("+", 0),
    ("s0 +", 4),
    ("s0 - -r1", 5),
    ("3 s0", 2),
    ("3*", 2),
    ("(s0", 3),
    ("s0)", 2),
    ("s0 r0", 3),
    ("Co", 0),
    ("s0 + So", 5),
    ("e*(s1)", 3),
    ("t0", 0),
    ("s0 & r0", 3),
];

fn c12_parser(opts: &VerifyOptions) -> Tally {
    let mut t = Tally::default();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e37_79b9);
    for i in 0..10_000 {
        let big = i % 10 == 0;
        let mut coeff = || -> BigInt {
            if big {
                BigInt::from(rng.gen::<i64>()) * BigInt::from(rng.gen::<i64>())
            } else {
                BigInt::from(rng.gen_range(-20..=20i64))
            }
        };
        let d = DivisorClass {
            c: coeff(),
            f: coeff(),
            s: std::array::from_fn(|_| coeff()),
            r: std::array::from_fn(|_| coeff()),
        };
        let text = format(&d);
        let back = parse(&text);
        t.check(back.as_ref() == Ok(&d), || format!("{text:?} -> {back:?}"));
    }
    for (text, pos) in MALFORMED {
        let r = parse(text);
        t.check(matches!(&r, Err(e) if e.pos() == pos), || format!("{text:?}: {r:?}"));
    }
    t
}

/// Grid used for the determinism check.
pub fn determinism_grid() -> CensusGrid {
    CensusGrid {
        n: 1..=12,
        d: 1..=3,
        gamma_max: 9,
    }
}

fn c13_determinism(opts: &VerifyOptions) -> Tally {
    let mut t = Tally::default();
    let nef = opts.nef(NefMode::Both);
    let mut outputs = Vec::new();
    for workers in [1, 2, 8] {
        let bytes = census(&determinism_grid(), &nef, workers).and_then(|recs| {
            let mut buf = Vec::new();
            write_csv(&recs, &mut buf)?;
            Ok(buf)
        });
        if let Some(b) = t.result(bytes, || format!("{workers} partitions")) {
            outputs.push((workers, b));
        }
    }
    for w in outputs.windows(2) {
        t.check(w[0].1 == w[1].1, || {
            format!("{} vs {} partitions differ", w[0].0, w[1].0)
        });
    }
    t.check(
        outputs
            .first()
            .is_some_and(|(_, b)| b.iter().filter(|&&c| c == b'\n').count() > 1),
        || "census is empty".into(),
    );
    t
}

/// Specs shared by the sweeps of criteria 4 and 6-9.
pub struct Sweep {
    pub all: Vec<LambdaSpec>,
    pub nef: Vec<LambdaSpec>,
}

impl Sweep {
    pub fn new(opts: &VerifyOptions) -> Sweep {
        let all = sweep_specs(2..=5, 3);
        let brute = opts.nef(NefMode::Brute);
        let nef = all
            .iter()
            .filter(|s| nef_check(s, &brute).is_ok_and(|r| r.verdict.is_nef()))
            .copied()
            .collect();
        Sweep { all, nef }
    }
}

pub fn run_criterion(id: u8, opts: &VerifyOptions, sweep: &Sweep) -> CriterionOutcome {
    let start = Instant::now();
    let t = match id {
        1 => c1_exceptional(),
        2 => c2_catalog(),
        3 => c3_pairing(opts),
        4 => c4_agreement(&sweep.all, opts),
        5 => c5_families(opts),
        6 => c6_adjunction(),
        7 => c7_dimensions(&sweep.nef, opts),
        8 => c8_minimizer(&sweep.all, opts),
        9 => c9_z_unique(&sweep.nef, opts),
        10 => c10_kit(),
        11 => c11_decomposition(),
        12 => c12_parser(opts),
        13 => c13_determinism(opts),
        _ => {
            let mut t = Tally::default();
            t.fail(format!("no criterion {id}"));
            t
        }
    };
    let name = CRITERIA.iter().find(|(i, _)| *i == id).map_or("unknown", |(_, n)| n);
    CriterionOutcome {
        id,
        name,
        pass: t.failures == 0 && t.checked > 0,
        checked: t.checked,
        failures: t.failures,
        samples: t.samples,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

pub fn run_all(opts: &VerifyOptions) -> Vec<CriterionOutcome> {
    let sweep = Sweep::new(opts);
    CRITERIA
        .iter()
        .map(|(id, _)| run_criterion(*id, opts, &sweep))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_criteria() {
        let opts = VerifyOptions::default();
        let sweep = Sweep {
            all: sweep_specs(2..=2, 1),
            nef: Vec::new(),
        };
        for id in [1, 2, 3, 12] {
            let r = run_criterion(id, &opts, &sweep);
            assert!(r.pass, "{}", r.line());
        }
        assert!(run_criterion(4, &opts, &sweep).pass);
        assert!(!run_criterion(99, &opts, &sweep).pass);
    }

    #[test]
    fn sweep_contains_worked_example() {
        let s = sweep_specs(2..=2, 1);
        assert!(s.contains(&LambdaSpec::new(4, 2, [3, 2, 2, 2])));
        assert!(s.iter().all(|x| x.validate(&CharPConfig::zero()).is_ok()));
    }
}
