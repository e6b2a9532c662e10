use super::{CMat, C64};
use crate::error::{Error, Result};

pub fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

pub fn matvec(a: &CMat, x: &[C64]) -> Vec<C64> {
    assert_eq!(a.ncols(), x.len());
    let mut y = vec![zero(); a.nrows()];
    // column-major storage: accumulate column by column
    for (j, &xj) in x.iter().enumerate() {
        if xj == zero() {
            continue;
        }
        let col = a.col(j);
        for (yi, &aij) in y.iter_mut().zip(col.iter()) {
            *yi += aij * xj;
        }
    }
    y
}

pub fn vec_norm(x: &[C64]) -> f64 {
    // scaled to avoid overflow in the sum of squares
    let scale = x.iter().fold(0.0_f64, |m, v| m.max(v.re.abs()).max(v.im.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    let s: f64 = x.iter().map(|v| (v / scale).norm_sqr()).sum();
    scale * s.sqrt()
}

pub fn frobenius(a: &CMat) -> f64 {
    let mut s = 0.0;
    for j in 0..a.ncols() {
        for v in a.col(j).iter() {
            s += v.norm_sqr();
        }
    }
    s.sqrt()
}

pub fn transpose(a: &CMat) -> CMat {
    CMat::from_fn(a.ncols(), a.nrows(), |i, j| a[(j, i)])
}

pub fn identity(n: usize) -> CMat {
    CMat::from_fn(n, n, |i, j| if i == j { C64::new(1.0, 0.0) } else { zero() })
}

pub fn from_real(a: &faer::Mat<f64>) -> CMat {
    CMat::from_fn(a.nrows(), a.ncols(), |i, j| C64::new(a[(i, j)], 0.0))
}

/// Singular values in decreasing order.
pub fn singular_values(a: &CMat) -> Result<Vec<f64>> {
    let mut s = a
        .singular_values()
        .map_err(|e| Error::NoConvergence(format!("singular value decomposition: {e:?}")))?;
    s.sort_by(|x, y| y.total_cmp(x));
    Ok(s)
}

pub fn norm2(a: &CMat) -> Result<f64> {
    Ok(singular_values(a)?.first().copied().unwrap_or(0.0))
}

pub fn min_singular_value(a: &CMat) -> Result<f64> {
    Ok(singular_values(a)?.last().copied().unwrap_or(0.0))
}

/// Cheap content hash used to label matrices in diagnostics.
pub fn fingerprint(a: &CMat) -> u64 {
    use std::hash::{Hash, Hasher};
    let mut h = std::collections::hash_map::DefaultHasher::new();
    a.nrows().hash(&mut h);
    a.ncols().hash(&mut h);
    for j in 0..a.ncols() {
        for v in a.col(j).iter() {
            v.re.to_bits().hash(&mut h);
            v.im.to_bits().hash(&mut h);
        }
    }
    h.finish()
}
