//! Named classes on the blown-up surface and the negative curves of the
//! rational quotient.
//!
//! The negative curves of the quotient are of two kinds: the exceptional
//! curves `Γ~_α`, one for every `α ∈ N^4` with `α^(2)` odd, and a fixed list
//! of (-2)-curves (`C~o`, `s~i`, `r~i`, plus `C~p` in characteristic `p ≥ 3`).

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{check_param, Error, Result};
use crate::lattice::{DivisorClass, QuotientClass};
use crate::types::{check_natural, l1, l2, odd_one_out, CharPConfig, Vec4};

/// An exceptional curve of the first kind on the quotient, indexed by `α`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ExceptionalSpec {
    pub alpha: Vec4,
    /// `2a + 1 = α^(2)`.
    pub a: i64,
    /// The coordinate whose parity differs from the other three.
    pub k: usize,
}

impl ExceptionalSpec {
    pub fn new(alpha: Vec4, cfg: &CharPConfig) -> Result<Self> {
        check_natural("alpha", &alpha)?;
        let sq = l2(&alpha);
        if sq % 2 == 0 {
            return Err(Error::ParityViolation {
                id: "5.6-alpha-odd",
                detail: format!("alpha^(2) = {sq} is even for alpha = {alpha:?}"),
            });
        }
        if let Some(p) = cfg.p {
            let sum = l1(&alpha);
            if sum > p as i128 {
                return Err(Error::CharPExcluded {
                    id: "5.6-alpha-charp",
                    p,
                    lhs: sum,
                    rhs: p as i128,
                });
            }
        }
        let k = odd_one_out(&alpha).expect("odd alpha^(2) has a unique odd-one-out index");
        Ok(ExceptionalSpec {
            alpha,
            a: ((sq - 1) / 2) as i64,
            k,
        })
    }

    /// Pullback `aC + F - s_k - sum α_i r_i`.
    pub fn pullback(&self) -> DivisorClass {
        let mut d = DivisorClass::new(self.a, 1, [0; 4], self.alpha.map(|x| -x));
        d.s[self.k] = BigInt::from(-1);
        d
    }

    pub fn class(&self) -> QuotientClass {
        QuotientClass::from_pullback(self.pullback())
    }
}

pub fn exceptional_class(alpha: Vec4, cfg: &CharPConfig) -> Result<QuotientClass> {
    Ok(ExceptionalSpec::new(alpha, cfg)?.class())
}

/// All `α` with `α^(2)` odd and at most `max_sq`, lexicographically ordered.
pub fn enumerate_exceptional(max_sq: i64, cfg: &CharPConfig) -> Vec<ExceptionalSpec> {
    let mut out = Vec::new();
    if max_sq < 1 {
        return out;
    }
    let bound = (max_sq as f64).sqrt() as i64 + 1;
    let limit = max_sq as i128;
    for a0 in 0..=bound {
        for a1 in 0..=bound {
            for a2 in 0..=bound {
                for a3 in 0..=bound {
                    let alpha = [a0, a1, a2, a3];
                    let sq = l2(&alpha);
                    if sq > limit || sq % 2 == 0 {
                        continue;
                    }
                    if let Ok(spec) = ExceptionalSpec::new(alpha, cfg) {
                        out.push(spec);
                    }
                }
            }
        }
    }
    out
}

/// One entry of the (-2)-curve catalog.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub pullback: DivisorClass,
    #[serde(rename = "self", serialize_with = "ser_bigint")]
    pub self_int: BigInt,
}

fn ser_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    use num_traits::ToPrimitive;
    match v.to_i64() {
        Some(x) => s.serialize_i64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

/// Pullback of `C~o`, the image of the strict transform of `C_o`.
pub fn c_o_tilde() -> QuotientClass {
    QuotientClass::from_pullback(DivisorClass::new(1, 0, [-1; 4], [0; 4]))
}

pub fn s_tilde(i: usize) -> QuotientClass {
    QuotientClass::from_pullback(2 * DivisorClass::s_exc(i))
}

pub fn r_tilde(i: usize) -> QuotientClass {
    QuotientClass::from_pullback(2 * DivisorClass::r_exc(i))
}

/// `C_p` strict transform, `pC - sum r_i`.
pub fn c_p_perp(p: i64) -> DivisorClass {
    DivisorClass::new(p, 0, [0; 4], [-1; 4])
}

pub fn c_p_tilde(p: i64) -> QuotientClass {
    QuotientClass::from_pullback(c_p_perp(p))
}

/// The complete list of (-2)-curves on the quotient.
pub fn negative_curve_catalog(cfg: &CharPConfig) -> Vec<CatalogEntry> {
    let mut named: Vec<(String, QuotientClass)> = vec![("C~o".to_string(), c_o_tilde())];
    named.extend((0..4).map(|i| (format!("s~{i}"), s_tilde(i))));
    named.extend((0..4).map(|i| (format!("r~{i}"), r_tilde(i))));
    if let Some(p) = cfg.p {
        named.push((format!("C~{p}"), c_p_tilde(p)));
    }
    named
        .into_iter()
        .map(|(name, q)| {
            let self_int = q.self_intersection().expect("catalog pullbacks pair evenly");
            CatalogEntry {
                name,
                pullback: q.pullback,
                self_int,
            }
        })
        .collect()
}

/// `S_i⊥ = F - s_i - r_i`, the strict transform of the fiber over `ω_i`.
pub fn fiber_component_class(i: usize) -> Result<DivisorClass> {
    if i > 3 {
        return Err(Error::InvalidParameter {
            name: "i",
            detail: format!("fiber index {i} not in 0..=3"),
        });
    }
    Ok(DivisorClass::fiber() - DivisorClass::s_exc(i) - DivisorClass::r_exc(i))
}

/// Validates `(n, d, ρ)` for the `Γ⊥` class template.
pub(crate) fn check_n_d_rho(n: i64, d: i64, rho: i64) -> Result<()> {
    check_param("n", n)?;
    check_param("d", d)?;
    check_param("rho", rho)?;
    if n < 1 {
        return Err(Error::InvalidParameter {
            name: "n",
            detail: format!("degree must be >= 1, got {n}"),
        });
    }
    if d < 1 {
        return Err(Error::InvalidParameter {
            name: "d",
            detail: format!("osculating order must be >= 1, got {d}"),
        });
    }
    if rho.rem_euclid(2) == 0 {
        return Err(Error::RhoEven { rho });
    }
    if rho < 1 || rho > 2 * d - 1 {
        return Err(Error::RhoOutOfRange { rho, max: 2 * d - 1 });
    }
    Ok(())
}

/// `nC + (2d-1)F - ρ s_0 - sum γ_i r_i`, the class of the image curve.
pub fn gamma_perp_class(n: i64, d: i64, rho: i64, gamma: Vec4) -> Result<DivisorClass> {
    check_n_d_rho(n, d, rho)?;
    check_natural("gamma", &gamma)?;
    Ok(DivisorClass::new(n, 2 * d - 1, [-rho, 0, 0, 0], gamma.map(|g| -g)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::QuotientClass;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn exceptional_examples() {
        let cfg = CharPConfig::zero();
        let g = exceptional_class([1, 0, 0, 0], &cfg).unwrap();
        assert_eq!(g.pullback, DivisorClass::new(0, 1, [-1, 0, 0, 0], [-1, 0, 0, 0]));
        assert_eq!(g.self_intersection().unwrap(), big(-1));

        let spec = ExceptionalSpec::new([2, 1, 0, 0], &cfg).unwrap();
        assert_eq!((spec.a, spec.k), (2, 1));
        let g = spec.class();
        assert_eq!(g.pullback, DivisorClass::new(2, 1, [0, -1, 0, 0], [-2, -1, 0, 0]));
        assert_eq!(g.self_intersection().unwrap(), big(-1));
        assert_eq!(g.dot(&QuotientClass::canonical()).unwrap(), big(-1));

        assert!(matches!(
            exceptional_class([1, 1, 0, 0], &cfg),
            Err(Error::ParityViolation { .. })
        ));
    }

    #[test]
    fn char_p_excludes_large_alpha() {
        let cfg = CharPConfig::new(Some(3)).unwrap();
        assert!(matches!(
            exceptional_class([3, 1, 1, 0], &cfg),
            Err(Error::CharPExcluded { .. })
        ));
        assert!(exceptional_class([1, 1, 1, 0], &cfg).is_ok());
    }

    #[test]
    fn enumeration_small_bounds() {
        let cfg = CharPConfig::zero();
        let alphas: Vec<Vec4> = enumerate_exceptional(1, &cfg).into_iter().map(|e| e.alpha).collect();
        assert_eq!(alphas, vec![[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]]);

        let alphas: Vec<Vec4> = enumerate_exceptional(3, &cfg).into_iter().map(|e| e.alpha).collect();
        assert_eq!(alphas.len(), 8);
        assert!(alphas.contains(&[1, 1, 1, 0]));
        assert!(alphas.windows(2).all(|w| w[0] < w[1]));

        let p3 = CharPConfig::new(Some(3)).unwrap();
        assert_eq!(enumerate_exceptional(3, &p3).len(), 8);
        assert!(enumerate_exceptional(0, &cfg).is_empty());
    }

    #[test]
    fn enumeration_matches_brute_scan() {
        // Independent scan over a larger cube.
        let cfg = CharPConfig::zero();
        let mut expected = 0;
        for a in 0..8i64 {
            for b in 0..8i64 {
                for c in 0..8i64 {
                    for d in 0..8i64 {
                        let q = a * a + b * b + c * c + d * d;
                        if q <= 49 && q % 2 == 1 {
                            expected += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(enumerate_exceptional(49, &cfg).len(), expected);
    }

    #[test]
    fn exceptional_property_up_to_bound() {
        let k = QuotientClass::canonical();
        for e in enumerate_exceptional(60, &CharPConfig::zero()) {
            let g = e.class();
            assert_eq!(g.self_intersection().unwrap(), big(-1), "{:?}", e.alpha);
            assert_eq!(g.dot(&k).unwrap(), big(-1));
            assert_eq!(g.genus().unwrap(), big(0));
            for j in 0..4 {
                let expected = if j == e.k { 1 } else { 0 };
                assert_eq!(g.dot(&s_tilde(j)).unwrap(), big(expected));
            }
        }
    }

    #[test]
    fn catalog_entries() {
        let cat = negative_curve_catalog(&CharPConfig::zero());
        assert_eq!(cat.len(), 9);
        assert!(cat.iter().all(|e| e.self_int == big(-2)));
        let k = QuotientClass::canonical();
        for e in &cat {
            let q = QuotientClass::from_pullback(e.pullback.clone());
            assert_eq!(q.dot(&k).unwrap(), big(0));
        }

        let cat = negative_curve_catalog(&CharPConfig::new(Some(3)).unwrap());
        assert_eq!(cat.len(), 10);
        assert_eq!(cat[9].name, "C~3");
        assert_eq!(cat[9].self_int, big(-2));

        assert_eq!(c_o_tilde().dot(&s_tilde(0)).unwrap(), big(1));
    }

    #[test]
    fn catalog_json_shape() {
        let cat = negative_curve_catalog(&CharPConfig::zero());
        let v = serde_json::to_value(&cat).unwrap();
        assert_eq!(v[1]["name"], "s~0");
        assert_eq!(v[1]["self"], -2);
        assert_eq!(v[1]["pullback"]["s"][0], 2);
    }

    #[test]
    fn fiber_components() {
        let s0 = fiber_component_class(0).unwrap();
        assert_eq!(s0, DivisorClass::new(0, 1, [-1, 0, 0, 0], [-1, 0, 0, 0]));
        assert_eq!(s0.self_intersection(), big(-2));
        assert_eq!(s0.dot(&DivisorClass::section()), big(1));
        assert_eq!(s0.arithmetic_genus(), big(0));
        assert!(fiber_component_class(4).is_err());
    }

    #[test]
    fn gamma_perp_examples() {
        let d = gamma_perp_class(4, 2, 1, [3, 2, 2, 2]).unwrap();
        assert_eq!(d, DivisorClass::new(4, 3, [-1, 0, 0, 0], [-3, -2, -2, -2]));

        let d = gamma_perp_class(2, 1, 1, [1, 0, 0, 2]).unwrap();
        assert_eq!(d.self_intersection(), big(-2));
        assert_eq!(d.arithmetic_genus(), big(1));

        assert!(matches!(
            gamma_perp_class(3, 2, 2, [1, 1, 1, 1]),
            Err(Error::RhoEven { .. })
        ));
        assert!(matches!(
            gamma_perp_class(3, 2, 5, [1, 1, 1, 1]),
            Err(Error::RhoOutOfRange { .. })
        ));
    }

    #[test]
    fn gamma_perp_self_intersection_formula() {
        for n in 1..6i64 {
            for d in 1..5i64 {
                for g0 in 0..5i64 {
                    let gamma = [g0, 1, 3, 2];
                    let rho = 2 * d - 1;
                    let dc = gamma_perp_class(n, d, rho, gamma).unwrap();
                    let expected = 2 * n * (2 * d - 1) - rho * rho - l2(&gamma) as i64;
                    assert_eq!(dc.self_intersection(), big(expected));
                }
            }
        }
    }

    #[test]
    fn parity_makes_valid_pullback() {
        // gamma_0 + 1 ≡ gamma_j ≡ n (mod 2) gives an even self-pairing.
        for n in 1..7i64 {
            for d in 1..4i64 {
                for g in 0..4i64 {
                    let gamma = [
                        g * 2 + 1 - n.rem_euclid(2),
                        n.rem_euclid(2),
                        n.rem_euclid(2) + 2,
                        n.rem_euclid(2),
                    ];
                    let dc = gamma_perp_class(n, d, 1, gamma).unwrap();
                    let q = QuotientClass::from_pullback(dc);
                    assert!(q.self_intersection().is_ok());
                }
            }
        }
    }
}
