use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Cplx<T>>,
}

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Cplx::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Cplx::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cplx<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from its columns.
    pub fn from_columns(columns: &[Vec<Cplx<T>>]) -> Self {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        Self::from_fn(rows, cols, |i, j| columns[j][i])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Cplx<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Cplx<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn matvec(&self, x: &[Cplx<T>]) -> Vec<Cplx<T>> {
        assert_eq!(x.len(), self.cols, "dimension mismatch in matvec");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(Cplx::new(T::zero(), T::zero()), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matmul");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other[(l, j)];
                    out[(i, j)] += a * b;
                }
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> T {
        crate::scalar::norm2(&self.data)
    }

    /// `I − self`
    pub fn identity_minus(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            let id = if i == j { T::one() } else { T::zero() };
            Cplx::new(id, T::zero()) - self[(i, j)]
        })
    }
}

impl<T> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = Cplx<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Cplx<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for DenseMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cplx<T> {
        &mut self.data[i * self.cols + j]
    }
}

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct DenseLu<T> {
    lu: DenseMatrix<T>,
    piv: Vec<usize>,
}

impl<T: Real> DenseLu<T> {
    pub fn factor(a: &DenseMatrix<T>) -> Result<Self> {
        Self::factor_with_floor(a, T::zero())
    }

    /// Pivots smaller than `floor` are replaced by `floor` (inverse iteration
    /// deliberately factors nearly singular shifted matrices).
    pub fn factor_with_floor(a: &DenseMatrix<T>, floor: T) -> Result<Self> {
        assert!(a.is_square(), "LU needs a square matrix");
        let n = a.rows();
        let mut lu = a.clone();
        let mut piv = Vec::with_capacity(n);
        for k in 0..n {
            let (p, pmax) =
                (k..n)
                    .map(|i| (i, lu[(i, k)].norm()))
                    .fold(
                        (k, -T::one()),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            piv.push(p);
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
            }
            if !(pmax > floor) {
                if floor > T::zero() {
                    lu[(k, k)] = Cplx::new(floor, T::zero());
                } else {
                    return Err(Error::SingularMatrix { column: k });
                }
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let l = lu[(i, k)] / pivot;
                lu[(i, k)] = l;
                if l.re == T::zero() && l.im == T::zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= l * u;
                }
            }
        }
        Ok(Self { lu, piv })
    }

    pub fn solve(&self, b: &[Cplx<T>]) -> Vec<Cplx<T>> {
        let n = self.lu.rows();
        let mut x = b.to_vec();
        // rows were swapped in full, so the permutation goes first
        for k in 0..n {
            x.swap(k, self.piv[k]);
        }
        for k in 0..n {
            let xk = x[k];
            for i in k + 1..n {
                x[i] = x[i] - self.lu[(i, k)] * xk;
            }
        }
        for k in (0..n).rev() {
            let mut acc = x[k];
            for j in k + 1..n {
                acc -= self.lu[(k, j)] * x[j];
            }
            x[k] = acc / self.lu[(k, k)];
        }
        x
    }
}
