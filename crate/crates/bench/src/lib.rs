//! Shared inputs for the benchmarks.

use hyperosc_core::verify::sweep_specs;
use hyperosc_core::LambdaSpec;

/// Nef and non-nef types of a fixed `d`, in sweep order.
pub fn specs_for(d: i64) -> Vec<LambdaSpec> {
    sweep_specs(d..=d, 2)
}

/// A spec per `d` in `2..=max_d`, taken from the middle of each sweep.
pub fn representative(max_d: i64) -> Vec<LambdaSpec> {
    (2..=max_d)
        .filter_map(|d| {
            let s = specs_for(d);
            s.get(s.len() / 2).copied()
        })
        .collect()
}
