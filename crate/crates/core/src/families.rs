//! Explicit families of types: nef types, non-nef types, and the divisors of
//! the construction kit that span the moduli space for
//! `ε = (0, d-1, d-1, d-1)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::curves::ExceptionalSpec;
use crate::error::{check_param, Error, Result};
use crate::lattice::{DivisorClass, QuotientClass};
use crate::nef::LambdaSpec;
use crate::types::{check_natural, l1, l2, odd_one_out, CharPConfig, Vec4};

/// A generated type `γ = (2d-1)μ + 2ε` with its degree `n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FamilyMember {
    pub n: i64,
    pub gamma: Vec4,
    pub eps: Vec4,
}

impl FamilyMember {
    pub fn spec(&self, d: i64) -> LambdaSpec {
        LambdaSpec::new(self.n, d, self.gamma)
    }
}

fn check_mu_pattern(mu: &Vec4) -> Result<()> {
    check_natural("mu", mu)?;
    if odd_one_out(mu) != Some(0) {
        return Err(Error::ParityViolation {
            id: "5.13-mu-parity",
            detail: format!("mu = {mu:?} violates mu_0 + 1 ≡ mu_j (mod 2)"),
        });
    }
    Ok(())
}

fn check_d(d: i64, min: i64) -> Result<()> {
    check_param("d", d)?;
    if d < min {
        return Err(Error::InvalidParameter {
            name: "d",
            detail: format!("d must be >= {min}, got {d}"),
        });
    }
    Ok(())
}

/// Every sign assignment of the magnitudes `abs`.
fn sign_choices(abs: &Vec4) -> Vec<Vec4> {
    let mut out = vec![*abs];
    for i in 0..4 {
        if abs[i] == 0 {
            continue;
        }
        let flipped: Vec<Vec4> = out
            .iter()
            .map(|v| {
                let mut w = *v;
                w[i] = -w[i];
                w
            })
            .collect();
        out.extend(flipped);
    }
    out
}

fn member(d: i64, mu: &Vec4, eps: Vec4, cfg: &CharPConfig) -> Option<FamilyMember> {
    let big_d = 2 * d - 1;
    let gamma: Vec4 = std::array::from_fn(|i| big_d * mu[i] + 2 * eps[i]);
    if gamma.iter().any(|&g| g < 0) {
        return None;
    }
    let spec = LambdaSpec::from_type(d, gamma)?;
    if let Some(p) = cfg.p {
        if l1(&gamma) > p as i128 * big_d as i128 {
            return None;
        }
    }
    Some(FamilyMember { n: spec.n, gamma, eps })
}

/// The two magnitude patterns `|ε|` of the nef family for `(d, k)`.
pub fn nef_magnitudes(d: i64, k: usize) -> [Vec4; 2] {
    let a: Vec4 = std::array::from_fn(|i| if i == k { 0 } else { d - 1 });
    let b: Vec4 = if d % 2 == 1 {
        std::array::from_fn(|i| if i == k { (d + 1) / 2 } else { (d - 1) / 2 })
    } else {
        std::array::from_fn(|i| if i == k { (d - 2) / 2 } else { d / 2 })
    };
    [a, b]
}

/// Nef types for fixed `d >= 2`, `k` and `μ`. Sign choices giving a
/// non-natural `γ` (or violating the characteristic bound) are skipped.
pub fn generate_nef_types(d: i64, k: usize, mu: &Vec4, cfg: &CharPConfig) -> Result<Vec<FamilyMember>> {
    check_d(d, 2)?;
    check_mu_pattern(mu)?;
    if k > 3 {
        return Err(Error::InvalidParameter {
            name: "k",
            detail: format!("k = {k} not in 0..=3"),
        });
    }
    let mut out: Vec<FamilyMember> = nef_magnitudes(d, k)
        .iter()
        .flat_map(sign_choices)
        .filter_map(|eps| member(d, mu, eps, cfg))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// `ε^(2)` prescribed for the non-nef family: `4ε^(2) = 3 + (2d-1)(d-2+k)`
/// with `k = (d+1) mod 4`.
pub fn non_nef_eps_sq(d: i64) -> Result<i64> {
    check_d(d, 3)?;
    let k = (d + 1).rem_euclid(4);
    let rhs = 3 + (2 * d - 1) * (d - 2 + k);
    if rhs % 4 != 0 {
        return Err(Error::IdentityFailure {
            id: "5.14-divisibility",
            detail: format!("3 + (2d-1)(d-2+k) = {rhs} not divisible by 4"),
        });
    }
    let eps_sq = rhs / 4;
    // d = 4h + k - 1
    let h = (d + 1 - k) / 4;
    let via_h = 8 * h * h + 3 * (2 * k - 3) * h + k * k - 3 * k + 3;
    if via_h != eps_sq {
        return Err(Error::IdentityFailure {
            id: "5.14-h",
            detail: format!("eps^(2) = {eps_sq} but the h-parametrisation gives {via_h}"),
        });
    }
    Ok(eps_sq)
}

/// Non-nef types for fixed `d >= 3` and `μ`, searching `|ε_i| <= bound`.
pub fn generate_non_nef_types(d: i64, mu: &Vec4, bound: i64, cfg: &CharPConfig) -> Result<Vec<FamilyMember>> {
    check_mu_pattern(mu)?;
    check_param("bound", bound)?;
    let target = non_nef_eps_sq(d)? as i128;
    let mut out = Vec::new();
    let range = -bound..=bound;
    for e0 in range.clone() {
        for e1 in range.clone() {
            for e2 in range.clone() {
                for e3 in range.clone() {
                    let eps = [e0, e1, e2, e3];
                    if l2(&eps) != target {
                        continue;
                    }
                    if let Some(m) = member(d, mu, eps, cfg) {
                        out.push(m);
                    }
                }
            }
        }
    }
    if out.is_empty() {
        return Err(Error::NoSolutions { bound });
    }
    Ok(out)
}

/// One lattice identity checked while building the kit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub id: &'static str,
    pub holds: bool,
}

/// The divisors of the construction kit, all on the blown-up surface.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KitDivisors {
    pub d: i64,
    pub mu: Vec4,
    pub gamma: Vec4,
    pub n: i64,
    pub genus: i64,
    pub zbar: DivisorClass,
    pub zunder: DivisorClass,
    pub zprime: DivisorClass,
    pub zsecond: DivisorClass,
    pub z: DivisorClass,
    pub zk: [DivisorClass; 3],
    pub d0: DivisorClass,
    pub d1: DivisorClass,
    pub f: Vec<DivisorClass>,
    pub g: DivisorClass,
    pub lambda_pullback: DivisorClass,
    pub identities: Vec<IdentityCheck>,
}

fn shifted(mu: &Vec4, delta: Vec4) -> Vec4 {
    std::array::from_fn(|i| mu[i] + delta[i])
}

/// Pullback of the exceptional curve for `α`, checking it meets `s_k`.
fn kit_curve(alpha: Vec4, k: usize) -> Result<DivisorClass> {
    let e = ExceptionalSpec::new(alpha, &CharPConfig::zero())?;
    if e.k != k {
        return Err(Error::IdentityFailure {
            id: "5.21-fiber-index",
            detail: format!("alpha = {alpha:?} meets s_{} instead of s_{k}", e.k),
        });
    }
    Ok(e.pullback())
}

pub fn construction_kit(d: i64, mu: &Vec4) -> Result<KitDivisors> {
    check_d(d, 2)?;
    check_mu_pattern(mu)?;
    let big_d = 2 * d - 1;
    let eps = [0, d - 1, d - 1, d - 1];
    let gamma: Vec4 = std::array::from_fn(|i| big_d * mu[i] + 2 * eps[i]);

    let mu_bar = shifted(mu, [1, 1, 1, 1]);
    let mu_prime = shifted(mu, [0, 2, 1, 1]);
    let mu_second = shifted(mu, [0, 0, 1, 1]);
    let mu_k = [mu_second, shifted(mu, [0, 1, 0, 1]), shifted(mu, [0, 1, 1, 0])];

    let zbar = kit_curve(mu_bar, 0)?;
    let zunder = if mu[0] != 0 {
        kit_curve(shifted(mu, [-1, 1, 1, 1]), 0)?
    } else {
        &zbar + &(2 * DivisorClass::r_exc(0))
    };
    let zprime = kit_curve(mu_prime, 1)?;
    let zsecond = kit_curve(mu_second, 1)?;
    let zk = [kit_curve(mu_k[0], 1)?, kit_curve(mu_k[1], 2)?, kit_curve(mu_k[2], 3)?];
    let z = kit_curve(*mu, 0)?;

    let d0 = &(&zbar + &zunder) + &(2 * DivisorClass::s_exc(0));
    let d1 = &(&zprime + &zsecond) + &(2 * DivisorClass::s_exc(1));
    let c_o_perp = DivisorClass::new(1, 0, [-1; 4], [0; 4]);
    let base = (1..=3).fold(c_o_perp, |acc, k| &(&acc + &zk[k - 1]) + &(2 * DivisorClass::s_exc(k)));
    let f: Vec<DivisorClass> = (0..=d - 2)
        .map(|j| &(&base + &(&BigInt::from(j) * &d0)) + &(&BigInt::from(d - 2 - j) * &d1))
        .collect();
    let g = &z + &(&BigInt::from(d - 1) * &d0);

    // Genus and degree from the explicit identities.
    let mu1 = l1(mu);
    let mu2 = l2(mu);
    let (d128, bd) = (d as i128, big_d as i128);
    let two_g1 = bd * mu1 + 6 * (d128 - 1);
    let two_n = bd * mu2 + 4 * (d128 - 1) * (mu[1] + mu[2] + mu[3]) as i128 + 6 * d128 - 7;
    if two_g1 % 2 == 0 || two_n % 2 != 0 {
        return Err(Error::IdentityFailure {
            id: "5.21-parity",
            detail: format!("2g+1 = {two_g1}, 2n = {two_n}"),
        });
    }
    let genus = ((two_g1 - 1) / 2) as i64;
    let n = (two_n / 2) as i64;
    let lambda_pullback = DivisorClass::new(n, big_d, [-1, 0, 0, 0], gamma.map(|x| -x));

    let g1 = l1(&gamma);
    let g2 = l2(&gamma);
    let quotient_genus = QuotientClass::from_pullback(lambda_pullback.clone()).genus()?;
    let identities = vec![
        IdentityCheck {
            id: "D0=D1",
            holds: d0 == d1,
        },
        IdentityCheck {
            id: "F_j=Lambda",
            holds: f.iter().all(|fj| *fj == lambda_pullback),
        },
        IdentityCheck {
            id: "G=Lambda",
            holds: g == lambda_pullback,
        },
        IdentityCheck {
            id: "gamma1=2g+1",
            holds: g1 == two_g1,
        },
        IdentityCheck {
            id: "gamma2=(2d-1)(2n-2)+3",
            holds: g2 == bd * (two_n - 2) + 3,
        },
        IdentityCheck {
            id: "genus(Lambda_perp)=g",
            holds: lambda_pullback.arithmetic_genus() == BigInt::from(genus),
        },
        IdentityCheck {
            id: "genus(Lambda)=0",
            holds: quotient_genus == BigInt::from(0),
        },
    ];
    if let Some(bad) = identities.iter().find(|c| !c.holds) {
        return Err(Error::IdentityFailure {
            id: bad.id,
            detail: format!("construction kit for d = {d}, mu = {mu:?}"),
        });
    }
    Ok(KitDivisors {
        d,
        mu: *mu,
        gamma,
        n,
        genus,
        zbar,
        zunder,
        zprime,
        zsecond,
        z,
        zk,
        d0,
        d1,
        f,
        g,
        lambda_pullback,
        identities,
    })
}

/// All `μ ∈ N^4` with `μ_0 + 1 ≡ μ_j (mod 2)` and coordinates at most `max`.
pub fn mu_patterns(max: i64) -> Vec<Vec4> {
    let mut out = Vec::new();
    for a in 0..=max {
        for b in 0..=max {
            for c in 0..=max {
                for e in 0..=max {
                    let mu = [a, b, c, e];
                    if odd_one_out(&mu) == Some(0) {
                        out.push(mu);
                    }
                }
            }
        }
    }
    out
}

/// Group members by `n`, used when reporting families.
pub fn by_degree(members: &[FamilyMember]) -> BTreeMap<i64, Vec<Vec4>> {
    let mut m: BTreeMap<i64, Vec<Vec4>> = BTreeMap::new();
    for x in members {
        m.entry(x.n).or_default().push(x.gamma);
    }
    m
}
