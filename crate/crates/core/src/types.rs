//! Small vocabulary shared by the analysis modules.

use serde::Serialize;

use crate::error::{check_param, Error, Result};

/// A vector in N^4 (or Z^4 for perturbations), indexed by the half-periods.
pub type Vec4 = [i64; 4];

/// `v^(1) = sum v_i`.
pub fn l1(v: &Vec4) -> i128 {
    v.iter().map(|&x| x as i128).sum()
}

/// `v^(2) = sum v_i^2`.
pub fn l2(v: &Vec4) -> i128 {
    v.iter().map(|&x| (x as i128) * (x as i128)).sum()
}

pub fn dot4(a: &Vec4, b: &Vec4) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

pub(crate) fn check_vec(name: &'static str, v: &Vec4) -> Result<()> {
    v.iter().try_for_each(|&x| check_param(name, x))
}

pub(crate) fn check_natural(name: &'static str, v: &Vec4) -> Result<()> {
    check_vec(name, v)?;
    if v.iter().any(|&x| x < 0) {
        return Err(Error::InvalidParameter {
            name,
            detail: format!("{v:?} has a negative coordinate"),
        });
    }
    Ok(())
}

/// The index whose parity differs from the other three, if there is exactly one.
///
/// This is well defined precisely when `v^(2)` is odd (one or three odd
/// coordinates).
pub fn odd_one_out(v: &Vec4) -> Option<usize> {
    let odd: Vec<usize> = (0..4).filter(|&i| v[i].rem_euclid(2) == 1).collect();
    match odd.len() {
        1 => Some(odd[0]),
        3 => (0..4).find(|i| !odd.contains(i)),
        _ => None,
    }
}

/// Positive characteristic setting. `None` means characteristic 0.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CharPConfig {
    pub p: Option<i64>,
}

impl CharPConfig {
    pub fn zero() -> Self {
        CharPConfig { p: None }
    }

    pub fn new(p: Option<i64>) -> Result<Self> {
        if let Some(p) = p {
            check_param("p", p)?;
            if p < 3 || p % 2 == 0 {
                return Err(Error::InvalidParameter {
                    name: "p",
                    detail: format!("characteristic must be an odd prime >= 3, got {p}"),
                });
            }
            if !is_prime(p) {
                return Err(Error::InvalidParameter {
                    name: "p",
                    detail: format!("{p} is not prime"),
                });
            }
        }
        Ok(CharPConfig { p })
    }
}

fn is_prime(p: i64) -> bool {
    if p < 2 {
        return false;
    }
    let mut q = 2;
    while q * q <= p {
        if p % q == 0 {
            return false;
        }
        q += 1;
    }
    true
}
