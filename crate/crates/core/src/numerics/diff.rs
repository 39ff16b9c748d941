//! Central finite differences.

use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{check_dim, Error, Result};
use crate::numerics::linalg::Matrix;

/// Central-difference Jacobian of `f` at `x`. The default step is
/// ε^(1/3)·max(1, |xⱼ|).
pub fn finite_difference_jacobian<F>(mut f: F, x: &[f64], h: Option<f64>) -> Result<Matrix>
where
    F: FnMut(&[f64]) -> Vec<f64>,
{
    try_jacobian(&mut |y: &[f64]| Ok(f(y)), x, h)
}

pub(crate) fn try_jacobian<F>(f: &mut F, x: &[f64], h: Option<f64>) -> Result<Matrix>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    let n = x.len();
    let mut probe = x.to_vec();
    let mut jac: Option<Matrix> = None;
    for j in 0..n {
        let hj = h.unwrap_or_else(|| f64::EPSILON.cbrt() * x[j].abs().max(1.0));
        probe[j] = x[j] + hj;
        let fp = f(&probe)?;
        probe[j] = x[j] - hj;
        let fm = f(&probe)?;
        probe[j] = x[j];
        check_dim(fp.len(), fm.len())?;
        let m = jac.get_or_insert_with(|| Matrix::zeros(fp.len(), n));
        check_dim(m.rows(), fp.len())?;
        for i in 0..fp.len() {
            let d = (fp[i] - fm[i]) / (2.0 * hj);
            if !d.is_finite() {
                return Err(Error::NonFinite { t: x[j] });
            }
            m[(i, j)] = d;
        }
    }
    jac.ok_or(Error::DimensionMismatch { expected: 1, found: 0 })
}

/// Trace of the finite-difference Jacobian.
pub fn divergence<F>(f: F, x: &[f64], h: Option<f64>) -> Result<f64>
where
    F: FnMut(&[f64]) -> Vec<f64>,
{
    let j = finite_difference_jacobian(f, x, h)?;
    check_dim(j.rows(), j.cols())?;
    Ok((0..j.rows()).map(|i| j[(i, i)]).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn linear_map_is_recovered() {
        let a = Matrix::from_rows(&[[1.0, -2.0, 0.5], [3.0, 0.0, 4.0]]);
        let j = finite_difference_jacobian(|x| a.mul_vec(x).unwrap(), &[0.3, -1.2, 2.0], None).unwrap();
        assert!(j.max_abs_diff(&a) < 1e-9);
    }

    #[test]
    fn non_finite_values_rejected() {
        let r = finite_difference_jacobian(|x| vec![1.0 / x[0]], &[0.0], Some(0.0));
        assert!(r.is_err());
    }
}
