//! Symmetric eigensolver: Householder tridiagonalization followed by
//! implicit-shift QL iteration, the classic EISPACK tred2/tql2 pair.
//! Pure scalar f64 code with a fixed operation order, so results are
//! bit-identical across runs, platforms and thread counts.

use crate::error::{Error, Result};
use crate::numerics::matrix::Matrix;

/// Top-k eigenpairs of a symmetric matrix, eigenvalues non-increasing.
#[derive(Debug, Clone)]
pub struct SymEig {
    /// Eigenvalues, descending. Ties keep their pre-sort order.
    pub values: Vec<f64>,
    /// Matching eigenvectors as orthonormal columns (dim × k).
    pub vectors: Matrix,
}

const MAX_QL_ITERS: usize = 64;

/// Relative symmetry tolerance accepted by [`sym_eig`].
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Eigendecomposition of a symmetric matrix, returning the `k` largest pairs.
///
/// The input must be square and symmetric to within `1e-12` relative to its
/// largest entry; it is symmetrized before factorization so the result is
/// exactly the decomposition of `(A + Aᵀ)/2`. Eigenvector signs follow the
/// crate convention: the largest-magnitude entry of each vector is positive,
/// ties resolved toward the lowest index.
pub fn sym_eig(a: &Matrix, k: usize) -> Result<SymEig> {
    let n = a.rows();
    if n == 0 || a.cols() != n {
        return Err(Error::InvalidInput(format!(
            "sym_eig expects a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !a.is_finite() {
        return Err(Error::InvalidInput("sym_eig input has non-finite entries".into()));
    }
    if k > n {
        return Err(Error::InvalidInput(format!(
            "requested {k} eigenpairs from a {n}x{n} matrix"
        )));
    }
    let scale = a.max_abs();
    if scale > 0.0 && a.asymmetry() > SYMMETRY_TOL * scale {
        return Err(Error::InvalidInput(format!(
            "matrix is asymmetric beyond {SYMMETRY_TOL:e} relative tolerance"
        )));
    }

    // Symmetrize, then factor. Row-major scratch buffer.
    let mut z = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            z[i * n + j] = 0.5 * (a.get(i, j) + a.get(j, i));
        }
    }
    let mut d = vec![0.0f64; n];
    let mut e = vec![0.0f64; n];
    tridiagonalize(&mut z, n, &mut d, &mut e);
    ql_implicit(&mut z, n, &mut d, &mut e)?;

    // Stable descending sort; original position breaks ties.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[j].partial_cmp(&d[i]).unwrap().then(i.cmp(&j)));

    let mut values = Vec::with_capacity(k);
    let mut vectors = Matrix::zeros(n, k);
    for (out_col, &src) in order.iter().take(k).enumerate() {
        values.push(d[src]);
        for r in 0..n {
            vectors.set(r, out_col, z[r * n + src]);
        }
        fix_sign(&mut vectors, out_col);
    }
    Ok(SymEig { values, vectors })
}

/// Flip column `c` so its largest-magnitude entry is positive (ties: lowest index).
pub(crate) fn fix_sign(m: &mut Matrix, c: usize) {
    let col = m.col(c);
    let mut best = 0usize;
    let mut best_abs = col[0].abs();
    for (i, v) in col.iter().enumerate().skip(1) {
        if v.abs() > best_abs {
            best_abs = v.abs();
            best = i;
        }
    }
    if m.get(best, c) < 0.0 {
        m.scale_col(c, -1.0);
    }
}

/// Householder reduction to tridiagonal form with accumulated transform.
/// On exit `d` holds the diagonal, `e[1..]` the subdiagonal, and `z` the
/// orthogonal transform (row-major).
fn tridiagonalize(z: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) {
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += z[i * n + k].abs();
            }
            if scale == 0.0 {
                e[i] = z[i * n + l];
            } else {
                for k in 0..=l {
                    z[i * n + k] /= scale;
                    h += z[i * n + k] * z[i * n + k];
                }
                let f = z[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                z[i * n + l] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    z[j * n + i] = z[i * n + j] / h;
                    let mut g_acc = 0.0;
                    for k in 0..=j {
                        g_acc += z[j * n + k] * z[i * n + k];
                    }
                    for k in (j + 1)..=l {
                        g_acc += z[k * n + j] * z[i * n + k];
                    }
                    e[j] = g_acc / h;
                    f_acc += e[j] * z[i * n + j];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = z[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        z[j * n + k] -= f * e[k] + g * z[i * n + k];
                    }
                }
            }
        } else {
            e[i] = z[i * n + l];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let mut g = 0.0;
                for k in 0..i {
                    g += z[i * n + k] * z[k * n + j];
                }
                for k in 0..i {
                    z[k * n + j] -= g * z[k * n + i];
                }
            }
        }
        d[i] = z[i * n + i];
        z[i * n + i] = 1.0;
        for j in 0..i {
            z[j * n + i] = 0.0;
            z[i * n + j] = 0.0;
        }
    }
}

/// Implicit-shift QL on the tridiagonal (`d`, `e`), rotating `z` along.
fn ql_implicit(z: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if iter == MAX_QL_ITERS {
                return Err(Error::InvalidInput(
                    "eigensolver failed to converge".into(),
                ));
            }
            iter += 1;
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + copysign_nonzero(r, g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    f = z[k * n + i + 1];
                    z[k * n + i + 1] = s * z[k * n + i] + c * f;
                    z[k * n + i] = c * z[k * n + i] - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[inline]
fn hypot(a: f64, b: f64) -> f64 {
    // Explicit formulation instead of f64::hypot for cross-platform
    // bit-reproducibility (libm implementations differ).
    let (a, b) = (a.abs(), b.abs());
    let (big, small) = if a > b { (a, b) } else { (b, a) };
    if big == 0.0 {
        return 0.0;
    }
    let t = small / big;
    big * (1.0 + t * t).sqrt()
}

#[inline]
fn copysign_nonzero(mag: f64, sign: f64) -> f64 {
    if sign >= 0.0 {
        mag
    } else {
        -mag
    }
}
