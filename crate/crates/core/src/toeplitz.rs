//! Two-level block-Toeplitz operators.
//!
//! `T(U)` maps a `(2M-1) x (2N-1)` coefficient array onto an `MN x MN` matrix
//! made of `N x N` Toeplitz-arranged blocks, each block an `M x M` Toeplitz
//! matrix. `T*` is the diagonal-averaging pseudo-adjoint with `T*(T(U)) = U`;
//! it solves the coefficient stationarity conditions of the solver in closed
//! form. Positive block index `l` addresses blocks below the block diagonal,
//! positive element index `m` addresses entries below the main diagonal of a
//! block.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::{CMatrix, C64};

/// Coefficient array `u_l(m)` for the two-level block-Toeplitz matrix.
///
/// `l` ranges over `[-(N-1), N-1]` (block diagonals), `m` over
/// `[-(M-1), M-1]` (diagonals within a block). Hermitian `T(U)` corresponds to
/// `u_{-l}(-m) = conj(u_l(m))`; that symmetry is not enforced on construction
/// because solver iterates may transiently violate it at roundoff level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockToeplitzCoeffs {
    m: usize,
    n: usize,
    /// Row-major storage, rows indexed by `m + M - 1`, columns by `l + N - 1`.
    data: Vec<C64>,
}

impl BlockToeplitzCoeffs {
    pub fn zeros(m: usize, n: usize) -> Self {
        assert!(m >= 1 && n >= 1, "dimensions must be positive");
        Self {
            m,
            n,
            data: vec![C64::ZERO; (2 * m - 1) * (2 * n - 1)],
        }
    }

    /// The unit coefficient array: 1 at `(l, m) = (0, 0)`, zero elsewhere.
    /// `T` of it is the `MN x MN` identity.
    pub fn unit(m: usize, n: usize) -> Self {
        let mut u = Self::zeros(m, n);
        *u.get_mut(0, 0) = C64::ONE;
        u
    }

    pub fn block_rows(&self) -> usize {
        self.m
    }

    pub fn block_count(&self) -> usize {
        self.n
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    #[inline]
    fn index(&self, l: isize, m: isize) -> usize {
        debug_assert!(l.unsigned_abs() < self.n && m.unsigned_abs() < self.m);
        let row = (m + self.m as isize - 1) as usize;
        let col = (l + self.n as isize - 1) as usize;
        row * (2 * self.n - 1) + col
    }

    #[inline]
    pub fn get(&self, l: isize, m: isize) -> C64 {
        self.data[self.index(l, m)]
    }

    #[inline]
    pub fn get_mut(&mut self, l: isize, m: isize) -> &mut C64 {
        let idx = self.index(l, m);
        &mut self.data[idx]
    }

    /// The column vector `u_l` with entries `u_l(-M+1), ..., u_l(M-1)`.
    pub fn column(&self, l: isize) -> Vec<C64> {
        let mm = self.m as isize;
        (1 - mm..mm).map(|m| self.get(l, m)).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (isize, isize, C64)> + '_ {
        let (mm, nn) = (self.m as isize, self.n as isize);
        (1 - nn..nn).flat_map(move |l| (1 - mm..mm).map(move |m| (l, m, self.get(l, m))))
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn amax(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Whether `u_{-l}(-m) = conj(u_l(m))` holds to the given tolerance.
    pub fn is_hermitian_consistent(&self, tol: f64) -> bool {
        self.iter()
            .all(|(l, m, v)| (self.get(-l, -m).conj() - v).norm() <= tol)
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            m: self.m,
            n: self.n,
            data: self.data.iter().copied().map(f).collect(),
        }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        assert_eq!(self.dims(), other.dims());
        Self {
            m: self.m,
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }
}

/// Builds the `M x M` Toeplitz matrix with entry `(p, q) = u_l(p - q)` from a
/// length `2M-1` coefficient vector ordered `u_l(-M+1), ..., u_l(M-1)`.
pub fn toep(coeffs: &[C64]) -> Result<CMatrix> {
    if coeffs.len() % 2 == 0 {
        return Err(invalid(format!(
            "Toeplitz coefficient vector must have odd length, got {}",
            coeffs.len()
        )));
    }
    let m = (coeffs.len() + 1) / 2;
    Ok(DMatrix::from_fn(m, m, |p, q| {
        coeffs[(p as isize - q as isize + m as isize - 1) as usize]
    }))
}

/// Materializes the full `MN x MN` block-Toeplitz matrix `T(U)`: block
/// `(J, J')` equals `Toep(u_{J - J'})`.
pub fn t_apply(u: &BlockToeplitzCoeffs) -> CMatrix {
    let (m, n) = u.dims();
    let size = m * n;
    DMatrix::from_fn(size, size, |row, col| {
        let (bj, p) = (row / m, row % m);
        let (bk, q) = (col / m, col % m);
        u.get(bj as isize - bk as isize, p as isize - q as isize)
    })
}

/// Extracts the `(l, j)`-th `M x M` submatrix of `P`: the position occupied by
/// the `j`-th copy (1-based, left to right) of `Toep(u_l)` in `T(U)`.
pub fn subblock(p: &CMatrix, m: usize, n: usize, l: isize, j: usize) -> Result<CMatrix> {
    check_square(p, m * n)?;
    if l.unsigned_abs() >= n {
        return Err(invalid(format!("block index l={l} out of range for N={n}")));
    }
    if j < 1 || j > n - l.unsigned_abs() {
        return Err(invalid(format!(
            "position j={j} out of range for l={l}, N={n}"
        )));
    }
    let (block_row, block_col) = subblock_position(l, j);
    Ok(p.view((block_row * m, block_col * m), (m, m)).into_owned())
}

#[inline]
fn subblock_position(l: isize, j: usize) -> (usize, usize) {
    if l >= 0 {
        (l as usize + j - 1, j - 1)
    } else {
        (j - 1, l.unsigned_abs() + j - 1)
    }
}

/// Sum of the entries on the `m`-th sub-diagonal of a square matrix
/// (`M - |m|` terms; positive `m` lies below the main diagonal).
pub fn tr_m(a: &CMatrix, m: isize) -> Result<C64> {
    let size = a.nrows();
    check_square(a, size)?;
    if m.unsigned_abs() >= size {
        return Err(invalid(format!(
            "diagonal index m={m} out of range for size {size}"
        )));
    }
    let mut acc = C64::ZERO;
    let (lo, hi) = if m >= 0 {
        (m as usize, size)
    } else {
        (0, size - m.unsigned_abs())
    };
    for p in lo..hi {
        let q = (p as isize - m) as usize;
        acc += a[(p, q)];
    }
    Ok(acc)
}

/// Diagonal-averaging pseudo-adjoint: returns `Q` with
/// `q_l(m) = (sum_j Tr_m(S_{l,j}(P))) / ((N - |l|)(M - |m|))`,
/// the average of `P` over the `(l, m)` two-level diagonal. Satisfies
/// `t_star(t_apply(U)) = U`.
pub fn t_star(p: &CMatrix, m: usize, n: usize) -> Result<BlockToeplitzCoeffs> {
    check_square(p, m * n)?;
    let mut q = BlockToeplitzCoeffs::zeros(m, n);
    let (mm, nn) = (m as isize, n as isize);
    for l in 1 - nn..nn {
        let blocks = n - l.unsigned_abs();
        for m_idx in 1 - mm..mm {
            let mut acc = C64::ZERO;
            for j in 1..=blocks {
                let (block_row, block_col) = subblock_position(l, j);
                // Streamed Tr_m over the (l, j) block without materializing it.
                let (lo, hi) = if m_idx >= 0 {
                    (m_idx as usize, m)
                } else {
                    (0, m - m_idx.unsigned_abs())
                };
                for pp in lo..hi {
                    let qq = (pp as isize - m_idx) as usize;
                    acc += p[(block_row * m + pp, block_col * m + qq)];
                }
            }
            let count = (blocks * (m - m_idx.unsigned_abs())) as f64;
            *q.get_mut(l, m_idx) = acc / count;
        }
    }
    Ok(q)
}

/// Assembles the bordered matrix `[[T(U), z], [z^H, eps]]` of size `MN + 1`.
pub fn bordered(u: &BlockToeplitzCoeffs, z: &crate::CVector, eps: f64) -> CMatrix {
    let size = z.len();
    assert_eq!(size, u.block_rows() * u.block_count());
    let mut out = DMatrix::zeros(size + 1, size + 1);
    out.view_mut((0, 0), (size, size)).copy_from(&t_apply(u));
    for i in 0..size {
        out[(i, size)] = z[i];
        out[(size, i)] = z[i].conj();
    }
    out[(size, size)] = Complex64::new(eps, 0.0);
    out
}

fn check_square(p: &CMatrix, expect: usize) -> Result<()> {
    if p.nrows() != expect || p.ncols() != expect {
        return Err(invalid(format!(
            "expected a {expect} x {expect} matrix, got {} x {}",
            p.nrows(),
            p.ncols()
        )));
    }
    Ok(())
}
