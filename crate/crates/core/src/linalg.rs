//! Dense linear-algebra helpers shared across the crate.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};

/// Symmetric part `(a + aᵀ)/2`.
pub(crate) fn sym(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a + a.transpose()) * 0.5
}

/// Largest absolute entry; zero for empty matrices.
pub(crate) fn max_abs(a: &DMatrix<f64>) -> f64 {
    a.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Symmetric eigendecomposition with eigenvalues sorted ascending and the
/// eigenvector columns permuted to match.
pub(crate) fn symmetric_eigen_sorted(a: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let d = a.nrows();
    if d == 0 {
        return (DVector::zeros(0), DMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(sym(a));
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = DVector::from_iterator(d, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = DMatrix::zeros(d, d);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Column-orthonormal basis of the column span of `a`. Directions whose
/// singular value is at most `rel_tol · σ_max` are discarded.
pub(crate) fn orthonormal_column_basis(a: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let n = a.nrows();
    if a.ncols() == 0 {
        return DMatrix::zeros(n, 0);
    }
    let svd = a.clone().svd(true, false);
    let u = svd.u.expect("SVD with U requested");
    let smax = svd.singular_values.iter().fold(0.0_f64, |m, s| m.max(*s));
    if smax <= 0.0 {
        return DMatrix::zeros(n, 0);
    }
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > rel_tol * smax)
        .collect();
    let mut basis = DMatrix::zeros(n, keep.len());
    for (k, &i) in keep.iter().enumerate() {
        basis.set_column(k, &u.column(i));
    }
    basis
}

/// Orthonormal basis of the null space of `a`, returned as columns.
///
/// The matrix is padded with zero rows when it is wider than tall so that
/// the thin SVD carries a full right factor.
pub(crate) fn null_space_basis(a: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let (n, k) = a.shape();
    if k == 0 {
        return DMatrix::zeros(0, 0);
    }
    let padded = if n < k {
        let mut p = DMatrix::zeros(k, k);
        p.view_mut((0, 0), (n, k)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("SVD with Vᵀ requested");
    let smax = svd.singular_values.iter().fold(0.0_f64, |m, s| m.max(*s));
    let kernel: Vec<usize> = (0..k)
        .filter(|&i| {
            svd.singular_values
                .get(i)
                .is_none_or(|&s| s <= rel_tol * smax)
        })
        .collect();
    let mut basis = DMatrix::zeros(k, kernel.len());
    for (c, &i) in kernel.iter().enumerate() {
        basis.set_column(c, &v_t.row(i).transpose());
    }
    basis
}

/// Numerical rank with a relative singular-value cutoff.
pub(crate) fn rank(a: &DMatrix<f64>, rel_tol: f64) -> usize {
    if a.ncols() == 0 || a.nrows() == 0 {
        return 0;
    }
    let sv = a.clone().singular_values();
    let smax = sv.iter().fold(0.0_f64, |m, s| m.max(*s));
    if smax <= 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * smax).count()
}

/// Extreme eigenvalues `(min, max)` of the symmetric-definite pencil
/// `(a, g)`, computed by reducing with the Cholesky factor of `g`.
/// Returns `None` when `g` is not positive definite.
pub(crate) fn pencil_extremes(a: &DMatrix<f64>, g: &DMatrix<f64>) -> Option<(f64, f64)> {
    let d = g.nrows();
    if d == 0 {
        return None;
    }
    let chol = Cholesky::new(sym(g))?;
    let l = chol.l();
    // C = L⁻¹ A L⁻ᵀ shares the pencil spectrum.
    let y = l.solve_lower_triangular(&sym(a))?;
    let c = l.solve_lower_triangular(&y.transpose())?.transpose();
    let (values, _) = symmetric_eigen_sorted(&c);
    Some((values[0], values[d - 1]))
}

/// Least-squares solve of `a · x = b`; returns the solution together with
/// the largest absolute residual entry of `a·x − b`.
pub(crate) fn least_squares(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    rel_tol: f64,
) -> Option<(DMatrix<f64>, f64)> {
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().fold(0.0_f64, |m, s| m.max(*s));
    let x = svd.solve(b, rel_tol * smax.max(f64::MIN_POSITIVE)).ok()?;
    let residual = max_abs(&(a * &x - b));
    Some((x, residual))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_sorted_ascending() {
        let a = DMatrix::from_row_slice(3, 3, &[2.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.5]);
        let (vals, vecs) = symmetric_eigen_sorted(&a);
        assert!(vals[0] <= vals[1] && vals[1] <= vals[2]);
        let recon = &vecs * DMatrix::from_diagonal(&vals) * vecs.transpose();
        assert!(max_abs(&(recon - a)) < 1e-12);
    }

    #[test]
    fn null_space_of_wide_matrix() {
        // 2×4 matrix: kernel has dimension 2.
        let a = DMatrix::from_row_slice(2, 4, &[1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0]);
        let ker = null_space_basis(&a, 1e-12);
        assert_eq!(ker.ncols(), 2);
        assert!(max_abs(&(&a * &ker)) < 1e-12);
        let gram = ker.transpose() * &ker;
        assert!(max_abs(&(gram - DMatrix::identity(2, 2))) < 1e-12);
    }

    #[test]
    fn pencil_reduces_to_standard_problem_for_identity_metric() {
        let a = DMatrix::from_row_slice(2, 2, &[3.0, 1.0, 1.0, 3.0]);
        let g = DMatrix::identity(2, 2);
        let (lo, hi) = pencil_extremes(&a, &g).unwrap();
        assert!((lo - 2.0).abs() < 1e-12);
        assert!((hi - 4.0).abs() < 1e-12);
    }

    #[test]
    fn pencil_rejects_indefinite_metric() {
        let a = DMatrix::identity(2, 2);
        let g = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(pencil_extremes(&a, &g).is_none());
    }
}
