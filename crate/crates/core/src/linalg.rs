//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;

/// Singular values in descending order together with the matching right
/// singular vectors (as columns).
fn sorted_svd<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> (Vec<f64>, DMatrix<T>) {
    let (rows, cols) = m.shape();
    // nalgebra returns min(rows, cols) right singular vectors; pad so the
    // full null space is available.
    let padded = if rows < cols {
        let mut p = DMatrix::<T>::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sigma: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let v = DMatrix::from_fn(cols, order.len(), |r, c| v_t[(order[c], r)].clone().conjugate());
    (sigma, v)
}

/// Null space of `m` cut at `rel * σ_max`.
#[derive(Clone, Debug)]
pub struct NullSpace<T: nalgebra::Scalar> {
    /// Orthonormal basis vectors as columns.
    pub basis: DMatrix<T>,
    pub singular_values: Vec<f64>,
    pub threshold: f64,
    /// Smallest singular value kept above the threshold, if any.
    pub smallest_kept: Option<f64>,
}

pub fn null_space<T: ComplexField<RealField = f64>>(m: &DMatrix<T>, rel: f64) -> NullSpace<T> {
    let cols = m.ncols();
    let (sigma, v) = sorted_svd(m);
    let smax = sigma.first().copied().unwrap_or(0.0);
    let threshold = rel * smax.max(f64::MIN_POSITIVE);
    let kept = sigma.iter().filter(|&&s| s > threshold).count();
    let null_cols: Vec<usize> = (kept..cols).collect();
    let basis = DMatrix::from_fn(cols, null_cols.len(), |r, c| v[(r, null_cols[c])].clone());
    NullSpace {
        basis,
        smallest_kept: kept.checked_sub(1).map(|i| sigma[i]),
        singular_values: sigma,
        threshold,
    }
}

/// Numerical rank with cut `rel * σ_max`.
pub fn rank<T: ComplexField<RealField = f64>>(m: &DMatrix<T>, rel: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().singular_values();
    let smax = sv.iter().fold(0.0f64, |a, &b| a.max(b));
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel * smax).count()
}

/// Orthonormal basis (columns) for the column span of `m`.
pub fn column_span(m: &DMatrix<f64>, rel: f64) -> DMatrix<f64> {
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.iter().fold(0.0f64, |a, &b| a.max(b));
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| smax > 0.0 && svd.singular_values[i] > rel * smax)
        .collect();
    DMatrix::from_fn(m.nrows(), keep.len(), |r, c| u[(r, keep[c])])
}

/// Symmetric eigendecomposition with eigenvalues ascending.
pub fn symmetric_eigen(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let sym = (a + a.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(a.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Symmetric square root `B` with `B² = A` for symmetric positive
/// definite `A`. Returns the eigenvalues of `A` so callers can report the
/// failing one.
pub fn symmetric_sqrt(a: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>) {
    let (values, q) = symmetric_eigen(a);
    let d = DVector::from_iterator(values.len(), values.iter().map(|v| v.max(0.0).sqrt()));
    let b = &q * DMatrix::from_diagonal(&d) * q.transpose();
    (b, values)
}

/// Characteristic polynomial `det(tI - M)` as coefficients
/// `[c_0, c_1, ..., c_d]` of `t^0 .. t^d` (monic, `c_d = 1`), by
/// Faddeev-LeVerrier. Intended for the small dimensions used here.
pub fn charpoly(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut coeffs = vec![0.0; n + 1];
    coeffs[n] = 1.0;
    let id = DMatrix::<f64>::identity(n, n);
    let mut mk = DMatrix::<f64>::zeros(n, n);
    for k in 1..=n {
        mk = m * &mk + &id * coeffs[n - k + 1];
        let am = m * &mk;
        coeffs[n - k] = -am.trace() / k as f64;
    }
    coeffs
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |a, b| a.max(b.abs()))
}

pub fn max_abs_c(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0f64, |a, b| a.max(b.norm()))
}

pub fn to_complex(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|x| Complex64::new(x, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_rank_one() {
        let m = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0]);
        let ns = null_space(&m, 1e-10);
        assert_eq!(ns.basis.ncols(), 2);
        assert!(max_abs(&(&m * &ns.basis)) < 1e-12);
        assert_eq!(rank(&m, 1e-10), 1);
    }

    #[test]
    fn sqrt_of_spd() {
        let a = DMatrix::from_row_slice(2, 2, &[4.0, 1.0, 1.0, 3.0]);
        let (b, ev) = symmetric_sqrt(&a);
        assert!(ev.iter().all(|&v| v > 0.0));
        assert!(max_abs(&(&b * &b - &a)) < 1e-12);
        assert!(max_abs(&(&b - b.transpose())) < 1e-14);
    }

    #[test]
    fn charpoly_small() {
        // rotation by 120 degrees: t^2 + t + 1
        let c = (2.0 * std::f64::consts::PI / 3.0).cos();
        let s = (2.0 * std::f64::consts::PI / 3.0).sin();
        let m = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
        let p = charpoly(&m);
        assert!((p[0] - 1.0).abs() < 1e-12 && (p[1] - 1.0).abs() < 1e-12 && p[2] == 1.0);
        let id3 = DMatrix::<f64>::identity(3, 3);
        assert_eq!(charpoly(&id3), vec![-1.0, 3.0, -3.0, 1.0]);
    }
}
