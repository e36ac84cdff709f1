//! Proximal and projection primitives.
//!
//! Complex soft-thresholding is the proximal mapping of the l1 norm extended
//! to complex vectors with `sign(y) = y / |y|`; the Hermitian PSD projection
//! clips negative eigenvalues after a full spectral decomposition.

use nalgebra::SymmetricEigen;

use crate::error::{invalid, Error, Result};
use crate::{CMatrix, CVector, C64};

/// Entrywise complex soft-thresholding with threshold `kappa`:
/// `y -> y (1 - kappa/|y|)` when `|y| > kappa`, zero otherwise.
pub fn soft_threshold(y: &CVector, kappa: f64) -> Result<CVector> {
    if kappa < 0.0 {
        return Err(invalid(format!("threshold must be nonnegative, got {kappa}")));
    }
    Ok(y.map(|v| soft_threshold_scalar(v, kappa)))
}

#[inline]
pub fn soft_threshold_scalar(v: C64, kappa: f64) -> C64 {
    let mag = v.norm();
    if mag <= kappa {
        C64::ZERO
    } else {
        v * ((mag - kappa) / mag)
    }
}

/// Full spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigPair {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: CMatrix,
}

impl EigPair {
    /// Eigenvalues in descending order (convenience for rank selection).
    pub fn values_descending(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.reverse();
        v
    }
}

/// Spectral decomposition `P = V diag(values) V^H` of a Hermitian matrix.
/// The caller is responsible for symmetrizing the input first.
pub fn hermitian_eig(p: &CMatrix) -> Result<EigPair> {
    if p.nrows() != p.ncols() {
        return Err(invalid(format!(
            "eigendecomposition requires a square matrix, got {} x {}",
            p.nrows(),
            p.ncols()
        )));
    }
    if p.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::Numeric(
            "matrix contains non-finite entries".to_string(),
        ));
    }
    let eig = SymmetricEigen::try_new(p.clone(), f64::EPSILON, 0)
        .ok_or_else(|| Error::Numeric("Hermitian eigensolver did not converge".to_string()))?;

    // nalgebra returns eigenvalues unsorted; reorder ascending with the
    // matching eigenvector columns.
    let n = p.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(EigPair { values, vectors })
}

/// Projection onto the Hermitian PSD cone: symmetrizes the input as
/// `(P + P^H) / 2`, then clips negative eigenvalues at exactly zero.
pub fn psd_project(p: &CMatrix) -> Result<CMatrix> {
    let sym = hermitian_part(p);
    let eig = hermitian_eig(&sym)?;
    let n = sym.nrows();
    let mut scaled = eig.vectors.clone();
    for (j, &val) in eig.values.iter().enumerate() {
        let clipped = val.max(0.0);
        for i in 0..n {
            scaled[(i, j)] *= clipped;
        }
    }
    let out = &scaled * eig.vectors.adjoint();
    // Reconstruction leaves roundoff-level asymmetry; keep iterates Hermitian.
    Ok(hermitian_part(&out))
}

/// `(P + P^H) / 2`.
pub fn hermitian_part(p: &CMatrix) -> CMatrix {
    (p + p.adjoint()).scale(0.5)
}
