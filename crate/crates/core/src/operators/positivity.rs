use crate::error::{Error, Result};
use crate::operators::weights::mod1_weight;
use crate::operators::SequenceSpec;

/// Smallest first-order weight found on a grid, and where.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositivityScan {
    pub min_weight: f64,
    pub argmin_k: u64,
    pub argmin_x: f64,
}

/// Minimum of `p^1_{n,k}(x)` over `x_grid x {0, ..., k_max}`. Ties keep the
/// first location in grid order, then ascending `k`.
pub fn empirical_positivity(
    spec: &SequenceSpec,
    n: u64,
    x_grid: &[f64],
    k_max: u64,
) -> Result<PositivityScan> {
    if x_grid.is_empty() {
        return Err(Error::Domain("positivity grid is empty".into()));
    }
    let mut best = PositivityScan { min_weight: f64::INFINITY, argmin_k: 0, argmin_x: x_grid[0] };
    for &x in x_grid {
        for k in 0..=k_max {
            let w = mod1_weight(spec, n, k, x)?;
            if w < best.min_weight {
                best = PositivityScan { min_weight: w, argmin_k: k, argmin_x: x };
            }
        }
    }
    Ok(best)
}

/// `[0, 2]` in steps of 0.1.
pub fn default_grid() -> Vec<f64> {
    (0..=20).map(|i| i as f64 / 10.0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn scan(a0: (i64, i64), a1: (i64, i64)) -> PositivityScan {
        let spec = SequenceSpec::constant(rat(a0.0, a0.1), rat(a1.0, a1.1)).unwrap();
        empirical_positivity(&spec, 10, &default_grid(), 80).unwrap()
    }

    #[test]
    fn classical_and_averaged_weights_are_nonnegative() {
        assert!(scan((1, 1), (1, 1)).min_weight >= 0.0);
        assert!(scan((1, 2), (0, 1)).min_weight >= 0.0);
    }

    #[test]
    fn case_five_is_not_positive() {
        assert!(scan((0, 1), (-1, 1)).min_weight < 0.0);
    }

    #[test]
    fn a1_above_one_goes_negative_next_to_the_origin() {
        // At x = 0 the k = 1 weight is b(0, n) = a0 - a1 = 1 - a0 < 0.
        let s = scan((2, 1), (3, 1));
        assert!(s.min_weight < 0.0);
        let spec = SequenceSpec::constant(rat(2, 1), rat(3, 1)).unwrap();
        assert_eq!(mod1_weight(&spec, 10, 1, 0.0).unwrap(), -1.0);
    }

    #[test]
    fn empty_grid_is_rejected() {
        assert!(empirical_positivity(&SequenceSpec::classical(), 10, &[], 5).is_err());
    }
}
