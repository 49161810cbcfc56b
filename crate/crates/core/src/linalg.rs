//! Small dense linear algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

#[inline]
pub fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn frobenius_vec(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues sorted in
/// descending order with eigenvectors as matching columns. Only the
/// Hermitian part of `m` is used.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let h = (m + m.adjoint()).scale(0.5);
    let eig = nalgebra::SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Orthonormal basis (columns) of the null space of `m`, computed from the
/// eigenvectors of `m^† m`. Singular values below `rel * sigma_max` count
/// as zero.
pub fn null_space(m: &CMatrix, rel: f64) -> CMatrix {
    let n = m.ncols();
    let gram = m.adjoint() * m;
    let (values, vectors) = hermitian_eigen(&gram);
    let smax = values.first().copied().unwrap_or(0.0).max(0.0).sqrt();
    let keep: Vec<usize> = (0..n)
        .filter(|&i| values[i].max(0.0).sqrt() <= rel * smax || smax == 0.0)
        .collect();
    select_columns(&vectors, &keep)
}

/// Numerical rank of `m` with relative singular value cutoff `rel`.
pub fn rank(m: &CMatrix, rel: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel * smax).count()
}

pub fn pseudo_inverse(m: &CMatrix, rel: f64) -> CMatrix {
    if m.nrows() == 0 || m.ncols() == 0 {
        return CMatrix::zeros(m.ncols(), m.nrows());
    }
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let eps = (rel * smax).max(f64::MIN_POSITIVE);
    svd.pseudo_inverse(eps)
        .expect("svd computed with both factors")
}

pub fn select_columns(m: &CMatrix, cols: &[usize]) -> CMatrix {
    let mut out = CMatrix::zeros(m.nrows(), cols.len());
    for (dst, &src) in cols.iter().enumerate() {
        out.set_column(dst, &m.column(src));
    }
    out
}

/// Kronecker product with row index `(i, k) -> i * b.nrows() + k`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Orthogonal projector onto the column span of `basis`, which must have
/// orthonormal columns.
pub fn projector(basis: &CMatrix, n: usize) -> CMatrix {
    if basis.ncols() == 0 {
        return CMatrix::zeros(n, n);
    }
    basis * basis.adjoint()
}

/// Orthonormalizes the columns of `m`, dropping dependent directions.
pub fn orthonormal_span(m: &CMatrix, rel: f64) -> CMatrix {
    if m.ncols() == 0 || m.nrows() == 0 {
        return CMatrix::zeros(m.nrows(), 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| smax > 0.0 && svd.singular_values[i] > rel * smax)
        .collect();
    select_columns(&u, &keep)
}

/// `vec` with column-major stacking, matching `nalgebra` storage order.
pub fn vectorize(m: &CMatrix) -> CVector {
    CVector::from_column_slice(m.as_slice())
}
