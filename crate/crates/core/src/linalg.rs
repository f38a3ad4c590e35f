//! Dense helpers: a small row-major matrix, Gaussian elimination for the
//! Newton polish, and the nonsymmetric eigensolver bridge.

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Scalar};

/// Row-major dense square or rectangular matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            m.data[i * c..(i + 1) * c].copy_from_slice(row);
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }
    pub fn ncols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// Max absolute row sum (the infinity norm).
    pub fn max_abs_row_sum(&self) -> T {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.abs()).sum::<T>())
            .fold(T::zero(), T::max)
    }
}

/// Solves `A x = rhs` by Gaussian elimination with partial pivoting.
/// Returns `None` when a pivot vanishes.
pub fn solve_dense<T: Scalar>(a: &DenseMatrix<T>, rhs: &[T]) -> Option<Vec<T>> {
    let n = a.nrows();
    assert_eq!(a.ncols(), n);
    assert_eq!(rhs.len(), n);
    let mut m = a.clone();
    let mut b = rhs.to_vec();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            m.get(i, col)
                .abs()
                .partial_cmp(&m.get(j, col).abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        let pv = m.get(pivot, col);
        if pv.abs() <= T::min_positive_value() || !pv.is_finite() {
            return None;
        }
        if pivot != col {
            for j in 0..n {
                let tmp = m.get(col, j);
                m.set(col, j, m.get(pivot, j));
                m.set(pivot, j, tmp);
            }
            b.swap(col, pivot);
        }
        for i in col + 1..n {
            let f = m.get(i, col) / pv;
            if f == T::zero() {
                continue;
            }
            for j in col..n {
                m.set(i, j, m.get(i, j) - f * m.get(col, j));
            }
            b[i] = b[i] - f * b[col];
        }
    }
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let tail: T = (i + 1..n).map(|j| m.get(i, j) * x[j]).sum();
        x[i] = (b[i] - tail) / m.get(i, i);
    }
    Some(x)
}

/// Complex number as a plain pair, in the solver's scalar type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex<T> {
    pub re: T,
    pub im: T,
}

impl<T: Scalar> Complex<T> {
    pub fn norm(&self) -> T {
        self.re.hypot(self.im)
    }
}

/// Eigenvalues and right eigenvectors (columns) of a real matrix.
#[derive(Debug, Clone)]
pub struct EigenPairs<T> {
    pub values: Vec<Complex<T>>,
    /// `vectors[k]` is the eigenvector of `values[k]`.
    pub vectors: Vec<Vec<Complex<T>>>,
}

fn to_faer<T: Scalar>(m: &DenseMatrix<T>) -> faer::Mat<f64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| to_f64(m.get(i, j)))
}

/// Full eigendecomposition. The decomposition itself runs in `f64`.
pub fn eigen<T: Scalar>(m: &DenseMatrix<T>) -> Result<EigenPairs<T>> {
    let fm = to_faer(m);
    let evd = faer::linalg::solvers::Eigen::new_from_real(fm.as_ref())
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let s = evd.S();
    let u = evd.U();
    let n = m.nrows();
    let values = (0..n)
        .map(|k| Complex {
            re: lit(s[k].re),
            im: lit(s[k].im),
        })
        .collect();
    let vectors = (0..n)
        .map(|k| {
            (0..n)
                .map(|i| {
                    let z = u[(i, k)];
                    Complex {
                        re: lit(z.re),
                        im: lit(z.im),
                    }
                })
                .collect()
        })
        .collect();
    Ok(EigenPairs { values, vectors })
}

/// Eigenvalues only.
pub fn eigenvalues<T: Scalar>(m: &DenseMatrix<T>) -> Result<Vec<Complex<T>>> {
    let fm = to_faer(m);
    let vals = fm
        .eigenvalues()
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    Ok(vals
        .into_iter()
        .map(|z| Complex {
            re: lit(z.re),
            im: lit(z.im),
        })
        .collect())
}

pub fn spectral_radius<T: Scalar>(values: &[Complex<T>]) -> T {
    values.iter().map(Complex::norm).fold(T::zero(), T::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_elimination_solves() {
        let a = DenseMatrix::<f64>::from_rows(&[vec![0.0, 2.0, 1.0], vec![1.0, 1.0, 0.0], vec![3.0, 0.0, 1.0]]);
        let x = solve_dense(&a, &[5.0, 3.0, 6.0]).unwrap();
        let back = a.mul_vec(&x);
        for (u, v) in back.iter().zip([5.0, 3.0, 6.0]) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_system_is_none() {
        let a = DenseMatrix::<f64>::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(solve_dense(&a, &[1.0, 1.0]).is_none());
    }

    #[test]
    fn rotation_has_imaginary_spectrum() {
        let a = DenseMatrix::<f64>::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]);
        let vals = eigenvalues(&a).unwrap();
        for v in &vals {
            assert!(v.re.abs() < 1e-14);
            assert!((v.im.abs() - 1.0).abs() < 1e-14);
        }
        assert!((spectral_radius(&vals) - 1.0_f64).abs() < 1e-14);
    }

    #[test]
    fn eigenvectors_satisfy_definition() {
        let a = DenseMatrix::<f64>::from_rows(&[vec![2.0, 1.0], vec![0.5, -1.0]]);
        let e = eigen(&a).unwrap();
        for (val, vec) in e.values.iter().zip(&e.vectors) {
            assert!(val.im.abs() < 1e-14);
            let re: Vec<f64> = vec.iter().map(|z| z.re).collect();
            let av = a.mul_vec(&re);
            for (x, y) in av.iter().zip(&re) {
                assert!((x - val.re * y).abs() < 1e-12);
            }
        }
    }
}
