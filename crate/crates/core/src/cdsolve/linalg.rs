//! Small linear-algebra kernels for the time-stepping solvers.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// Solves a tridiagonal system in place. `lower[0]` and `upper[n-1]` are
/// ignored.
pub fn thomas(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64]) -> Result<()> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut beta = diag[0];
    if beta == 0.0 {
        return Err(Error::Solver("zero pivot in tridiagonal solve at row 0".into()));
    }
    rhs[0] /= beta;
    for i in 1..n {
        c[i] = upper[i - 1] / beta;
        beta = diag[i] - lower[i] * c[i];
        if beta == 0.0 || !beta.is_finite() {
            return Err(Error::Solver(format!("zero pivot in tridiagonal solve at row {i}")));
        }
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i + 1] * rhs[i + 1];
    }
    Ok(())
}

/// Compressed sparse row matrix.
#[derive(Debug, Clone, Default)]
pub struct Csr {
    pub n: usize,
    pub indptr: Vec<usize>,
    pub indices: Vec<usize>,
    pub data: Vec<f64>,
}

impl Csr {
    /// Builds from per-row `(column, value)` lists; duplicates are summed.
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Self {
        let n = rows.len();
        let mut indptr = vec![0];
        let mut indices = Vec::new();
        let mut data = Vec::new();
        for mut row in rows {
            row.sort_by_key(|e| e.0);
            let mut last: Option<usize> = None;
            for (c, v) in row {
                if last == Some(c) {
                    *data.last_mut().unwrap() += v;
                } else {
                    indices.push(c);
                    data.push(v);
                    last = Some(c);
                }
            }
            indptr.push(indices.len());
        }
        Csr { n, indptr, indices, data }
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let mut acc = 0.0;
            for p in self.indptr[i]..self.indptr[i + 1] {
                acc += self.data[p] * x[self.indices[p]];
            }
            y[i] = acc;
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        (self.indptr[i]..self.indptr[i + 1]).find(|&p| self.indices[p] == j).map_or(0.0, |p| self.data[p])
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// Tridiagonal bands `(lower, diag, upper)` if the matrix has no other
    /// entries.
    pub fn tridiagonal(&self) -> Option<(Vec<f64>, Vec<f64>, Vec<f64>)> {
        let mut lo = vec![0.0; self.n];
        let mut di = vec![0.0; self.n];
        let mut up = vec![0.0; self.n];
        for i in 0..self.n {
            for p in self.indptr[i]..self.indptr[i + 1] {
                let j = self.indices[p];
                match j as isize - i as isize {
                    -1 => lo[i] = self.data[p],
                    0 => di[i] = self.data[p],
                    1 => up[i] = self.data[p],
                    _ => return None,
                }
            }
        }
        Some((lo, di, up))
    }
}

/// Outcome of an iterative solve.
#[derive(Debug, Clone, Copy)]
pub struct IterStats {
    pub iterations: usize,
    pub relative_residual: f64,
}

/// Jacobi-preconditioned BiCGSTAB for `A x = b`, starting from the given
/// `x`. Stops when `‖b − Ax‖ ≤ tol·‖b‖`.
pub fn bicgstab(
    apply: impl Fn(&[f64], &mut [f64]),
    diag: &[f64],
    b: &[f64],
    x: &mut [f64],
    tol: f64,
    max_iter: usize,
) -> Result<IterStats> {
    let n = b.len();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let norm = |a: &[f64]| dot(a, a).sqrt();
    let precond = |v: &[f64], out: &mut [f64]| {
        for i in 0..n {
            out[i] = if diag[i] != 0.0 { v[i] / diag[i] } else { v[i] };
        }
    };
    let bnorm = norm(b);
    if bnorm == 0.0 {
        x.fill(0.0);
        return Ok(IterStats { iterations: 0, relative_residual: 0.0 });
    }
    let mut r = vec![0.0; n];
    apply(x, &mut r);
    for i in 0..n {
        r[i] = b[i] - r[i];
    }
    let r_hat = r.clone();
    let (mut rho, mut alpha, mut omega) = (1.0, 1.0, 1.0);
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut s = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut t = vec![0.0; n];
    let mut rel = norm(&r) / bnorm;
    for it in 0..max_iter {
        if rel <= tol {
            return Ok(IterStats { iterations: it, relative_residual: rel });
        }
        let rho_new = dot(&r_hat, &r);
        if rho_new == 0.0 || !rho_new.is_finite() {
            return Err(Error::Solver(format!("BiCGSTAB breakdown (rho = {rho_new}) at iteration {it}")));
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        precond(&p, &mut y);
        apply(&y, &mut v);
        alpha = rho / dot(&r_hat, &v);
        for i in 0..n {
            s[i] = r[i] - alpha * v[i];
        }
        if norm(&s) / bnorm <= tol {
            for i in 0..n {
                x[i] += alpha * y[i];
            }
            return Ok(IterStats { iterations: it + 1, relative_residual: norm(&s) / bnorm });
        }
        precond(&s, &mut z);
        apply(&z, &mut t);
        let tt = dot(&t, &t);
        omega = if tt > 0.0 { dot(&t, &s) / tt } else { 0.0 };
        for i in 0..n {
            x[i] += alpha * y[i] + omega * z[i];
            r[i] = s[i] - omega * t[i];
        }
        rel = norm(&r) / bnorm;
        if omega == 0.0 && rel > tol {
            return Err(Error::Solver(format!("BiCGSTAB stagnated at iteration {it}, residual {rel:.3e}")));
        }
    }
    if rel <= tol {
        return Ok(IterStats { iterations: max_iter, relative_residual: rel });
    }
    Err(Error::Solver(format!("BiCGSTAB did not converge in {max_iter} iterations (residual {rel:.3e})")))
}

/// LU factorisation of a dense matrix, reused across right-hand sides.
pub struct DenseLu {
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl DenseLu {
    pub fn new(a: DMatrix<f64>) -> Result<Self> {
        let lu = a.lu();
        if !lu.is_invertible() {
            return Err(Error::Solver("singular step matrix".into()));
        }
        Ok(DenseLu { lu })
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let x = self
            .lu
            .solve(&DVector::from_column_slice(b))
            .ok_or_else(|| Error::Solver("dense solve failed".into()))?;
        Ok(x.iter().copied().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thomas_solves_poisson() {
        let n = 20;
        let lower = vec![-1.0; n];
        let diag = vec![2.0; n];
        let upper = vec![-1.0; n];
        let x: Vec<f64> = (0..n).map(|i| (i as f64 * 0.3).sin()).collect();
        let mut b = vec![0.0; n];
        for i in 0..n {
            b[i] = 2.0 * x[i] - if i > 0 { x[i - 1] } else { 0.0 } - if i + 1 < n { x[i + 1] } else { 0.0 };
        }
        thomas(&lower, &diag, &upper, &mut b).unwrap();
        for i in 0..n {
            assert!((b[i] - x[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn bicgstab_nonsymmetric() {
        let n = 30;
        let rows: Vec<Vec<(usize, f64)>> = (0..n)
            .map(|i| {
                let mut r = vec![(i, 4.0)];
                if i > 0 {
                    r.push((i - 1, -1.5));
                }
                if i + 1 < n {
                    r.push((i + 1, -0.5));
                }
                if i + 5 < n {
                    r.push((i + 5, 0.3));
                }
                r
            })
            .collect();
        let a = Csr::from_rows(rows);
        assert!(a.tridiagonal().is_none());
        let xe: Vec<f64> = (0..n).map(|i| 1.0 / (1.0 + i as f64)).collect();
        let mut b = vec![0.0; n];
        a.matvec(&xe, &mut b);
        let mut x = vec![0.0; n];
        let stats = bicgstab(|v, o| a.matvec(v, o), &a.diagonal(), &b, &mut x, 1e-13, 200).unwrap();
        assert!(stats.relative_residual <= 1e-13);
        for i in 0..n {
            assert!((x[i] - xe[i]).abs() < 1e-11);
        }
    }

    #[test]
    fn csr_sums_duplicates_and_lu_solves() {
        let a = Csr::from_rows(vec![vec![(0, 1.0), (0, 1.0), (1, 1.0)], vec![(1, 3.0)]]);
        assert_eq!(a.get(0, 0), 2.0);
        let (lo, di, up) = a.tridiagonal().unwrap();
        assert_eq!((lo[1], di[1], up[0]), (0.0, 3.0, 1.0));
        let lu = DenseLu::new(DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 0.0, 3.0])).unwrap();
        let x = lu.solve(&[3.0, 3.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 1.0).abs() < 1e-15);
        assert!(DenseLu::new(DMatrix::zeros(2, 2)).is_err());
    }
}
