//! Numerical invariants of a hyperelliptic d-osculating cover.
//!
//! Checks are returned as data: census workflows record failures instead of
//! stopping on the first one.

use serde::Serialize;

use crate::error::{check_param, Error, Result};
use crate::types::{check_natural, l1, l2, CharPConfig, Vec4};

/// The tuple `(n, d, g, g~, ρ, m, γ)` of a cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverInvariants {
    pub n: i64,
    pub d: i64,
    pub g: i64,
    pub g_tilde: i64,
    pub rho: i64,
    pub m: i64,
    pub gamma: Vec4,
}

impl CoverInvariants {
    fn check_ranges(&self) -> Result<()> {
        for (name, v) in [
            ("n", self.n),
            ("d", self.d),
            ("g", self.g),
            ("g_tilde", self.g_tilde),
            ("rho", self.rho),
            ("m", self.m),
        ] {
            check_param(name, v)?;
        }
        check_natural("gamma", &self.gamma)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: &'static str,
    pub pass: bool,
    pub lhs: i128,
    pub rhs: i128,
    /// Informational checks are reported but never count as failures.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub informational: bool,
}

impl Check {
    fn le(id: &'static str, lhs: i128, rhs: i128) -> Self {
        Check {
            id,
            pass: lhs <= rhs,
            lhs,
            rhs,
            informational: false,
        }
    }

    fn eq(id: &'static str, lhs: i128, rhs: i128) -> Self {
        Check {
            id,
            pass: lhs == rhs,
            lhs,
            rhs,
            informational: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub checks: Vec<Check>,
    pub minimal: bool,
}

impl CoverReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass || c.informational)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass && !c.informational)
    }
}

/// A single parity violation of `γ_0 + 1 ≡ γ_1 ≡ γ_2 ≡ γ_3 ≡ n (mod 2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParityViolation {
    pub index: usize,
    pub value: i64,
    pub expected_parity: i64,
}

pub fn validate_type(n: i64, gamma: &Vec4) -> Vec<ParityViolation> {
    let target = n.rem_euclid(2);
    (0..4)
        .filter_map(|i| {
            let expected = if i == 0 { 1 - target } else { target };
            (gamma[i].rem_euclid(2) != expected).then_some(ParityViolation {
                index: i,
                value: gamma[i],
                expected_parity: expected,
            })
        })
        .collect()
}

pub(crate) fn parity_error(n: i64, gamma: &Vec4) -> Result<()> {
    let v = validate_type(n, gamma);
    if v.is_empty() {
        return Ok(());
    }
    let detail = v
        .iter()
        .map(|p| {
            format!(
                "gamma_{} = {} should be {}",
                p.index,
                p.value,
                if p.expected_parity == 0 { "even" } else { "odd" }
            )
        })
        .collect::<Vec<_>>()
        .join(", ");
    Err(Error::ParityViolation {
        id: "4.3.5-parity",
        detail,
    })
}

/// Numerator `(2d-1)(2n-2m) + 4m^2 - ρ^2 - γ^(2)` of `4m^2 g~`.
pub fn genus_tilde_numerator(n: i64, d: i64, rho: i64, m: i64, gamma: &Vec4) -> i128 {
    let (n, d, rho, m) = (n as i128, d as i128, rho as i128, m as i128);
    (2 * d - 1) * (2 * n - 2 * m) + 4 * m * m - rho * rho - l2(gamma)
}

/// Genus of the image curve on the quotient.
pub fn genus_tilde(n: i64, d: i64, rho: i64, m: i64, gamma: &Vec4) -> Result<i64> {
    for (name, v) in [("n", n), ("d", d), ("rho", rho), ("m", m)] {
        check_param(name, v)?;
    }
    check_natural("gamma", gamma)?;
    if m < 1 {
        return Err(Error::InvalidParameter {
            name: "m",
            detail: format!("degree m must be >= 1, got {m}"),
        });
    }
    let num = genus_tilde_numerator(n, d, rho, m, gamma);
    if num < 0 {
        return Err(Error::NegativeGenus { numerator: num });
    }
    let den = 4 * (m as i128) * (m as i128);
    if num % den != 0 {
        return Err(Error::NotDivisible {
            id: "4.4.2-genus-tilde",
            detail: format!("{num} is not divisible by 4m^2 = {den}"),
        });
    }
    Ok((num / den) as i64)
}

/// Bound `γ^(2) <= 2(2d-1)(n-m) + 4m^2 - ρ^2` equivalent to `g~ >= 0`.
pub fn genus_tilde_bound(n: i64, d: i64, rho: i64, m: i64, gamma: &Vec4) -> Check {
    let (n128, d128, r, m128) = (n as i128, d as i128, rho as i128, m as i128);
    Check::le(
        "4.4.2-bound",
        l2(gamma),
        2 * (2 * d128 - 1) * (n128 - m128) + 4 * m128 * m128 - r * r,
    )
}

/// Runs every numerical constraint on a cover and reports each one.
pub fn validate_cover(inv: &CoverInvariants, cfg: &CharPConfig) -> Result<CoverReport> {
    inv.check_ranges()?;
    let CoverInvariants {
        n,
        d,
        g,
        g_tilde,
        rho,
        m,
        ref gamma,
    } = *inv;
    let (n128, d128, g128, r, m128) = (n as i128, d as i128, g as i128, rho as i128, m as i128);
    let big_d = 2 * d128 - 1;
    let g1 = l1(gamma);
    let mut checks = Vec::new();

    checks.push(Check::eq("4.3.3-rho-odd", r.rem_euclid(2), 1));
    checks.push(Check::le("4.3.3-rho-min", 1, r));
    checks.push(Check::le("4.3.3-rho-max", r, big_d));

    let divides = |x: i128| m128 >= 1 && x % m128 == 0;
    let all_div = divides(n128) && divides(big_d) && divides(r) && gamma.iter().all(|&x| divides(x as i128));
    checks.push(Check {
        id: "4.3.4-divisibility",
        pass: all_div,
        lhs: m128,
        rhs: 0,
        informational: false,
    });

    let parity_bad = validate_type(n, gamma).len() as i128;
    checks.push(Check::eq("4.3.5-parity", parity_bad, 0));

    let two_g1 = 2 * g128 + 1;
    checks.push(Check::le("4.4.1", two_g1, g1));

    if m >= 1 {
        let num = genus_tilde_numerator(n, d, rho, m, gamma);
        let den = 4 * m128 * m128;
        checks.push(Check::eq("4.4.2-divisible", num.rem_euclid(den), 0));
        checks.push(Check::eq("4.4.2-genus-tilde", den * g_tilde as i128, num));
        checks.push(Check::le("4.4.2-nonnegative", 0, num));
        checks.push(genus_tilde_bound(n, d, rho, m, gamma));
    }

    let lhs3 = two_g1 * two_g1;
    let mid3 = 8 * big_d * (n128 - m128) + 13 * m128 * m128 - 4 * r * r;
    checks.push(Check::le("4.4.3", lhs3, mid3));
    let mut right = Check::le("4.4.3-right", mid3, 8 * big_d * n128 + big_d * big_d);
    right.informational = true;
    checks.push(right);

    if rho == 1 {
        checks.push(Check::eq("4.4.4-m", m128, 1));
        checks.push(Check::le("4.4.4", lhs3, 8 * big_d * (n128 - 1) + 9));
    }

    if let Some(p) = cfg.p {
        checks.push(Check::le("4.4.5", g1, p as i128 * big_d));
    }

    if r >= 1 && r % 2 == 1 {
        checks.push(Check::le("2.5.3", g128, 2 * n128 - (r + 1) / 2));
    }

    Ok(CoverReport {
        minimal: two_g1 == g1,
        checks,
    })
}

/// Records the osculating-order ordering `d <= d'` of a cover dominated by
/// another one of order `d'`.
pub fn domination_order(dominated_d: i64, dominating_d: i64) -> Check {
    Check::le("2.8", dominated_d as i128, dominating_d as i128)
}

/// `(d_b, g_b)` with `2d-1 = m(2d_b-1)` and `2g+1 = m(2g_b+1)`.
pub fn factorization_relations(d: i64, g: i64, m: i64) -> Result<(i64, i64)> {
    for (name, v) in [("d", d), ("g", g), ("m", m)] {
        check_param(name, v)?;
    }
    if m < 1 || m % 2 == 0 {
        return Err(Error::InvalidParameter {
            name: "m",
            detail: format!("m must be odd and >= 1, got {m}"),
        });
    }
    let big_d = 2 * d - 1;
    let big_g = 2 * g + 1;
    if big_d % m != 0 {
        return Err(Error::NotDivisible {
            id: "3.11.3",
            detail: format!("m = {m} does not divide 2d-1 = {big_d}"),
        });
    }
    if big_g % m != 0 {
        return Err(Error::NotDivisible {
            id: "3.11.5",
            detail: format!("m = {m} does not divide 2g+1 = {big_g}"),
        });
    }
    // Quotients of odd numbers by an odd m are odd.
    Ok(((big_d / m + 1) / 2, (big_g / m - 1) / 2))
}

/// Smallest `d >= 1` with `(2d-1)(2n-2) >= g^2 + g - 2`.
pub fn osculating_bound(n: i64, g: i64) -> Result<i64> {
    check_param("n", n)?;
    check_param("g", g)?;
    if n < 2 {
        return Err(Error::DegreeTooSmall { n });
    }
    let rhs = (g as i128) * (g as i128) + g as i128 - 2;
    let step = 2 * n as i128 - 2;
    if rhs <= step {
        return Ok(1);
    }
    // ceil(rhs / step) bounds 2d-1 from below.
    let odd_min = (rhs + step - 1) / step;
    Ok(((odd_min + 2) / 2) as i64)
}

/// Maximal arithmetic genus `2n - (ρ+1)/2` of the cover dominated at a point of
/// ramification index ρ.
pub fn max_genus_dominated(n: i64, rho: i64) -> Result<i64> {
    check_param("n", n)?;
    check_param("rho", rho)?;
    if rho.rem_euclid(2) == 0 {
        return Err(Error::RhoEven { rho });
    }
    if rho < 1 {
        return Err(Error::RhoOutOfRange { rho, max: i64::MAX });
    }
    Ok(2 * n - (rho + 1) / 2)
}
