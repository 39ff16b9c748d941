//! Trapezoid quadrature on a given node grid.

use alloc::vec::Vec;


use crate::error::{check_dim, Error, Result};

/// A trapezoid value with its half-grid comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadEstimate {
    pub value: f64,
    pub coarse: f64,
    /// |value − coarse| / 3, the Richardson estimate of the error in `value`.
    pub error: f64,
}

pub fn trapezoid(times: &[f64], values: &[f64]) -> Result<f64> {
    check_dim(times.len(), values.len())?;
    if times.len() < 2 {
        return Err(Error::TooFewNodes);
    }
    Ok(times
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
        .sum())
}

/// Composite trapezoid over the nodes plus a second estimate on every other
/// node (the last node is always kept).
pub fn quad_nodes(times: &[f64], values: &[f64]) -> Result<QuadEstimate> {
    let value = trapezoid(times, values)?;
    let n = times.len();
    let mut idx: Vec<usize> = (0..n).step_by(2).collect();
    if *idx.last().expect("n >= 2") != n - 1 {
        idx.push(n - 1);
    }
    let ct: Vec<f64> = idx.iter().map(|&i| times[i]).collect();
    let cv: Vec<f64> = idx.iter().map(|&i| values[i]).collect();
    let coarse = trapezoid(&ct, &cv)?;
    Ok(QuadEstimate { value, coarse, error: (value - coarse).abs() / 3.0 })
}

/// Composite Simpson rule from node values and one midpoint value per
/// segment. `coarse` is the node trapezoid; `error` is |S − T_{h/2}|, which
/// bounds the Simpson error from above on smooth integrands.
pub fn simpson_midpoints(times: &[f64], values: &[f64], mids: &[f64]) -> Result<QuadEstimate> {
    check_dim(times.len(), values.len())?;
    if times.len() < 2 {
        return Err(Error::TooFewNodes);
    }
    check_dim(times.len() - 1, mids.len())?;
    let coarse = trapezoid(times, values)?;
    let midpoint: f64 = times.windows(2).zip(mids).map(|(t, m)| (t[1] - t[0]) * m).sum();
    let value = (coarse + 2.0 * midpoint) / 3.0;
    Ok(QuadEstimate { value, coarse, error: (midpoint - coarse).abs() / 6.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_linear_are_exact() {
        let t = [0.0, 0.1, 0.35, 0.9, 1.0];
        assert_eq!(quad_nodes(&t, &[1.0; 5]).unwrap().value, 1.0);
        let t: Vec<f64> = (0..=20).map(|i| 0.1 * i as f64).collect();
        let q = quad_nodes(&t, &t).unwrap();
        assert!((q.value - 2.0).abs() < 1e-15);
        assert!(q.error < 1e-15);
    }

    #[test]
    fn single_node_rejected() {
        assert_eq!(quad_nodes(&[0.0], &[1.0]), Err(Error::TooFewNodes));
        assert!(quad_nodes(&[0.0, 1.0], &[1.0]).is_err());
    }

    #[test]
    fn simpson_exact_for_cubics() {
        let t = [0.0, 0.3, 1.1, 2.0];
        let f = |x: f64| x * x * x - 2.0 * x;
        let v: Vec<f64> = t.iter().map(|&x| f(x)).collect();
        let m: Vec<f64> = t.windows(2).map(|w| f(0.5 * (w[0] + w[1]))).collect();
        let q = simpson_midpoints(&t, &v, &m).unwrap();
        assert!((q.value - 0.0).abs() < 1e-14);
    }
}
