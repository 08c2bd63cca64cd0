//! Census of types `(n, d, γ)` over a parameter grid.
//!
//! Work is split into blocks keyed by `(n, d)` and spread over scoped
//! threads; the merged records are sorted by key so the output does not
//! depend on the number of workers.

use std::collections::BTreeMap;
use std::io::Write;
use std::ops::RangeInclusive;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::nef::{decompose_type, moduli_dimension, nef_check, LambdaSpec, NefMode, NefOptions};
use crate::types::{l1, CharPConfig, Vec4};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusGrid {
    pub n: RangeInclusive<i64>,
    pub d: RangeInclusive<i64>,
    pub gamma_max: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusRecord {
    pub n: i64,
    pub d: i64,
    pub gamma: Vec4,
    pub mu: Vec4,
    pub eps: Vec4,
    pub nef_closed: bool,
    pub nef_brute: bool,
    pub agreement: bool,
    pub dim_moduli: Option<i64>,
    pub genus_g: i64,
    pub genus_tilde: i64,
}

impl CensusRecord {
    fn key(&self) -> (i64, i64, Vec4) {
        (self.n, self.d, self.gamma)
    }
}

pub const CSV_HEADER: [&str; 20] = [
    "n",
    "d",
    "gamma0",
    "gamma1",
    "gamma2",
    "gamma3",
    "mu0",
    "mu1",
    "mu2",
    "mu3",
    "eps0",
    "eps1",
    "eps2",
    "eps3",
    "nef_closed",
    "nef_brute",
    "agreement",
    "dim_moduli",
    "genus_g",
    "genus_tilde",
];

/// Valid types in the grid, grouped by `(n, d)`.
fn blocks(grid: &CensusGrid, cfg: &CharPConfig) -> BTreeMap<(i64, i64), Vec<LambdaSpec>> {
    let mut out: BTreeMap<(i64, i64), Vec<LambdaSpec>> = BTreeMap::new();
    let g = grid.gamma_max;
    if g < 0 {
        return out;
    }
    for d in grid.d.clone().filter(|&d| d >= 1) {
        for a in 0..=g {
            for b in 0..=g {
                for c in 0..=g {
                    for e in 0..=g {
                        let gamma = [a, b, c, e];
                        let Some(spec) = LambdaSpec::from_type(d, gamma) else {
                            continue;
                        };
                        if !grid.n.contains(&spec.n) || spec.validate(cfg).is_err() {
                            continue;
                        }
                        out.entry((spec.n, d)).or_default().push(spec);
                    }
                }
            }
        }
    }
    out
}

fn record(spec: &LambdaSpec, opts: &NefOptions) -> Result<CensusRecord> {
    let dec = decompose_type(&spec.gamma, spec.d)?;
    let report = nef_check(spec, &opts.with_mode(NefMode::Both))?;
    let nef_closed = report.nef_closed.unwrap_or(false);
    let nef_brute = report.nef_brute.unwrap_or(false);
    let dim_moduli = match moduli_dimension(spec, opts) {
        Ok(v) => Some(v),
        Err(Error::NotNef) | Err(Error::ConstraintViolation { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(CensusRecord {
        n: spec.n,
        d: spec.d,
        gamma: spec.gamma,
        mu: dec.mu,
        eps: dec.eps,
        nef_closed,
        nef_brute,
        agreement: nef_closed == nef_brute,
        dim_moduli,
        genus_g: ((l1(&spec.gamma) - 1) / 2) as i64,
        genus_tilde: crate::nef::lambda_genus_tilde(spec)?,
    })
}

/// Runs the census with `workers` threads (at least one).
pub fn census(grid: &CensusGrid, opts: &NefOptions, workers: usize) -> Result<Vec<CensusRecord>> {
    let blocks: Vec<Vec<LambdaSpec>> = blocks(grid, &opts.cfg).into_values().collect();
    let workers = workers.max(1).min(blocks.len().max(1));
    let mut assigned: Vec<Vec<&LambdaSpec>> = vec![Vec::new(); workers];
    for (i, block) in blocks.iter().enumerate() {
        assigned[i % workers].extend(block);
    }
    let results: Vec<Result<Vec<CensusRecord>>> = std::thread::scope(|s| {
        let handles: Vec<_> = assigned
            .iter()
            .map(|specs| s.spawn(move || specs.iter().map(|spec| record(spec, opts)).collect()))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("census worker panicked"))
            .collect()
    });
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    out.sort_by_key(CensusRecord::key);
    Ok(out)
}

pub fn write_csv<W: Write>(records: &[CensusRecord], w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let io = |e: csv::Error| Error::InvalidParameter {
        name: "output",
        detail: e.to_string(),
    };
    wtr.write_record(CSV_HEADER).map_err(io)?;
    for r in records {
        let mut row: Vec<String> = vec![r.n.to_string(), r.d.to_string()];
        for v in [r.gamma, r.mu, r.eps] {
            row.extend(v.iter().map(i64::to_string));
        }
        row.push(r.nef_closed.to_string());
        row.push(r.nef_brute.to_string());
        row.push(r.agreement.to_string());
        row.push(r.dim_moduli.map(|v| v.to_string()).unwrap_or_default());
        row.push(r.genus_g.to_string());
        row.push(r.genus_tilde.to_string());
        wtr.write_record(&row).map_err(io)?;
    }
    wtr.flush().map_err(|e| Error::InvalidParameter {
        name: "output",
        detail: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: i64, d: i64, g: i64) -> CensusGrid {
        CensusGrid {
            n: 1..=n,
            d: 1..=d,
            gamma_max: g,
        }
    }

    #[test]
    fn empty_ranges() {
        let opts = NefOptions::default();
        #[allow(clippy::reversed_empty_ranges)]
        let g = CensusGrid {
            n: 5..=1,
            d: 1..=3,
            gamma_max: 9,
        };
        assert!(census(&g, &opts, 4).unwrap().is_empty());
        assert!(census(&grid(4, 3, -1), &opts, 4).unwrap().is_empty());
    }

    #[test]
    fn deterministic_across_workers() {
        let opts = NefOptions::default();
        let g = grid(8, 3, 9);
        let a = census(&g, &opts, 1).unwrap();
        let b = census(&g, &opts, 5).unwrap();
        assert_eq!(a, b);
        assert!(!a.is_empty());
        assert!(a.iter().all(|r| r.agreement));
        assert!(a.windows(2).all(|w| w[0].key() < w[1].key()));
        let r = a.iter().find(|r| r.gamma == [3, 2, 2, 2] && r.d == 2).unwrap();
        assert_eq!((r.n, r.dim_moduli, r.genus_g, r.genus_tilde), (4, Some(1), 4, 0));
    }

    #[test]
    fn csv_shape() {
        let recs = census(&grid(4, 2, 4), &NefOptions::default(), 2).unwrap();
        let mut buf = Vec::new();
        write_csv(&recs, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "n,d,gamma0,gamma1,gamma2,gamma3,mu0,mu1,mu2,mu3,eps0,eps1,eps2,eps3,nef_closed,nef_brute,agreement,dim_moduli,genus_g,genus_tilde"
        );
        assert_eq!(lines.count(), recs.len());
    }
}
