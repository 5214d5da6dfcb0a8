use super::matrix::{CMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// Pivots below this fraction of the largest entry count as zero.
pub const PIVOT_TOL: f64 = 1e-12;

/// Inverse by LU with partial pivoting.
pub fn invert(a: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!("cannot invert a {}x{} matrix", a.rows(), a.cols())));
    }
    let n = a.rows();
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let (piv, mag) = (col..n)
            .map(|r| (r, lu[(r, col)].norm()))
            .fold((col, -1.0), |best, x| if x.1 > best.1 { x } else { best });
        if mag < PIVOT_TOL * scale {
            return Err(Error::Singular { pivot: mag / scale });
        }
        if piv != col {
            perm.swap(piv, col);
            for k in 0..n {
                let t = lu[(piv, k)];
                lu[(piv, k)] = lu[(col, k)];
                lu[(col, k)] = t;
            }
        }
        let p = lu[(col, col)];
        for r in col + 1..n {
            let f = lu[(r, col)] / p;
            lu[(r, col)] = f;
            if f != ZERO {
                for k in col + 1..n {
                    let v = lu[(col, k)];
                    lu[(r, k)] -= f * v;
                }
            }
        }
    }
    // solve LU x = P e_j column by column
    let mut inv = CMatrix::zeros(n, n);
    let mut x = vec![ZERO; n];
    for j in 0..n {
        for i in 0..n {
            x[i] = if perm[i] == j { ONE } else { ZERO };
            for k in 0..i {
                x[i] = x[i] - lu[(i, k)] * x[k];
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                x[i] = x[i] - lu[(i, k)] * x[k];
            }
            x[i] /= lu[(i, i)];
        }
        for i in 0..n {
            inv[(i, j)] = x[i];
        }
    }
    Ok(inv)
}

/// `max |A A⁻¹ - I|`
pub fn inverse_residual(a: &CMatrix, inv: &CMatrix) -> f64 {
    a.mul_plain(inv).max_diff(&CMatrix::identity(a.rows()))
}

/// Unitary polar factor by the Newton iteration `X <- (X + X^{-H}) / 2`.
pub fn unitarize(a: &CMatrix) -> Result<CMatrix> {
    let n = a.rows();
    let mut x = a.clone();
    for _ in 0..100 {
        let xinv_h = invert(&x)?.adjoint();
        let next = x.add(&xinv_h).scale(C64::new(0.5, 0.0));
        let step = next.max_diff(&x);
        x = next;
        if step < 1e-15 * n as f64 {
            break;
        }
    }
    if unitarity_defect(&x) > 1e-10 {
        return Err(Error::Singular { pivot: unitarity_defect(&x) });
    }
    Ok(x)
}

/// `max |UᴴU - I|`
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    u.adjoint().mul_plain(u).max_diff(&CMatrix::identity(u.cols()))
}

/// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues and
/// orthonormal eigenvectors as columns.
pub fn hermitian_eigen(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("eigen-decomposition of a non-square matrix".into()));
    }
    let n = a.rows();
    let m = faer::Mat::<faer::c64>::from_fn(n, n, |i, j| {
        // symmetrize so rounding noise cannot break self-adjointness
        (a[(i, j)] + a[(j, i)].conj()) * 0.5
    });
    let evd = m
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::DecompositionFailed(format!("eigensolver: {e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let values = (0..n).map(|i| s[i].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| u[(i, j)]);
    Ok((values, vectors))
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Orthonormal basis of the column space, by Gram-Schmidt with column
/// pivoting (largest remaining residual first). Columns whose residual falls
/// below `tol` times the largest column norm are dropped.
pub fn orthonormal_basis(m: &CMatrix, tol: f64) -> Vec<Vec<C64>> {
    let mut cols: Vec<Vec<C64>> = (0..m.cols()).map(|j| m.column(j)).collect();
    let scale = cols.iter().map(|c| norm(c)).fold(0.0, f64::max);
    let mut basis: Vec<Vec<C64>> = Vec::new();
    if scale == 0.0 {
        return basis;
    }
    while !cols.is_empty() {
        let (idx, best) = cols
            .iter()
            .enumerate()
            .map(|(i, c)| (i, norm(c)))
            .fold((0, -1.0), |b, x| if x.1 > b.1 { x } else { b });
        if best <= tol * scale {
            break;
        }
        let mut v = cols.swap_remove(idx);
        // second pass of orthogonalization for stability
        for _ in 0..2 {
            for q in &basis {
                let p = dot(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= p * qi;
                }
            }
        }
        let nv = norm(&v);
        if nv <= tol * scale {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= nv);
        for c in cols.iter_mut() {
            let p = dot(&v, c);
            for (ci, vi) in c.iter_mut().zip(&v) {
                *ci -= p * vi;
            }
        }
        basis.push(v);
    }
    basis
}
