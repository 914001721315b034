//! Dense matrices over any [`Scalar`] ring.

use std::fmt;

use super::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize, zero: &F) -> Self {
        Matrix { rows, cols, data: vec![zero.zero_like(); rows * cols] }
    }

    pub fn identity(n: usize, one: &F) -> Self {
        let mut m = Self::zeros(n, n, one);
        for i in 0..n {
            m.data[i * n + i] = one.one_like();
        }
        m
    }

    /// Builds a matrix from row vectors; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn mul(&self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let zero = self.data.first().or(rhs.data.first()).expect("empty matrix product").zero_like();
        let mut out = Matrix::zeros(self.rows, rhs.cols, &zero);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j).add(&a.mul(rhs.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = v[0].zero_like();
                for (a, x) in self.row(i).iter().zip(v) {
                    acc = acc.add(&a.mul(x));
                }
                acc
            })
            .collect()
    }

    pub fn sub(&self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    /// Solves `A x = b` for every right-hand side in `rhs` with a single elimination.
    ///
    /// Pivots are the first invertible entry in row order; free variables are set
    /// to zero. Over a field this is the first nonzero entry. Returns `None` for an
    /// inconsistent system.
    pub fn solve_many(&self, rhs: &[Vec<F>]) -> Vec<Option<Vec<F>>> {
        let n = self.rows;
        let m = self.cols;
        let k = rhs.len();
        if k == 0 {
            return Vec::new();
        }
        let zero = rhs[0].first().or(self.data.first()).map(|z| z.zero_like());
        let Some(zero) = zero else {
            return vec![Some(Vec::new()); k];
        };
        // augmented rows
        let mut aug: Vec<Vec<F>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                for b in rhs {
                    row.push(b[i].clone());
                }
                row
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m {
            if r == n {
                break;
            }
            let Some((pr, inv)) = (r..n).find_map(|i| aug[i][c].inv().map(|inv| (i, inv))) else {
                continue;
            };
            aug.swap(r, pr);
            let pivot_row: Vec<F> = aug[r].iter().map(|x| x.mul(&inv)).collect();
            aug[r] = pivot_row;
            for i in 0..n {
                if i == r || aug[i][c].is_zero() {
                    continue;
                }
                let factor = aug[i][c].clone();
                let (head, tail) = if i < r {
                    let (a, b) = aug.split_at_mut(r);
                    (&mut a[i], &b[0])
                } else {
                    let (a, b) = aug.split_at_mut(i);
                    (&mut b[0], &a[r])
                };
                for j in c..m + k {
                    if !tail[j].is_zero() {
                        head[j] = head[j].sub(&factor.mul(&tail[j]));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (0..k)
            .map(|t| {
                if (r..n).any(|i| !aug[i][m + t].is_zero()) {
                    return None;
                }
                let mut x = vec![zero.clone(); m];
                for (row, &c) in pivots.iter().enumerate() {
                    x[c] = aug[row][m + t].clone();
                }
                Some(x)
            })
            .collect()
    }

    /// Basis of the null space over a field, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let (n, m) = (self.rows, self.cols);
        let Some(zero) = self.data.first().map(|z| z.zero_like()) else {
            return Vec::new();
        };
        let one = zero.one_like();
        let mut a = self.to_rows();
        let mut pivots: Vec<usize> = Vec::new();
        let mut r = 0;
        for c in 0..m {
            if r == n {
                break;
            }
            let Some((pr, inv)) = (r..n).find_map(|i| a[i][c].inv().map(|inv| (i, inv))) else {
                continue;
            };
            a.swap(r, pr);
            a[r] = a[r].iter().map(|x| x.mul(&inv)).collect();
            for i in 0..n {
                if i != r && !a[i][c].is_zero() {
                    let factor = a[i][c].clone();
                    for j in c..m {
                        let t = factor.mul(&a[r][j]);
                        a[i][j] = a[i][j].sub(&t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (0..m)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![zero.clone(); m];
                v[free] = one.clone();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = a[row][free].neg();
                }
                v
            })
            .collect()
    }

    /// One particular solution of `A x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        self.solve_many(&[b.to_vec()]).pop().flatten()
    }

    /// Inverse of a square matrix, `None` when singular (or not a unit over a ring).
    pub fn inverse(&self) -> Option<Matrix<F>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let one = self.data[0].one_like();
        let id = Matrix::identity(n, &one);
        let cols: Vec<Vec<F>> = (0..n).map(|j| (0..n).map(|i| id.get(i, j).clone()).collect()).collect();
        let sols = self.solve_many(&cols);
        let mut out = Matrix::zeros(n, n, &one);
        for (j, s) in sols.into_iter().enumerate() {
            let s = s?;
            // a solution exists for every column only if the pivots cover all columns
            for (i, v) in s.into_iter().enumerate() {
                out.set(i, j, v);
            }
        }
        if self.mul(&out) == id {
            Some(out)
        } else {
            None
        }
    }
}

impl<F: Scalar> Matrix<F> {
    /// Characteristic polynomial `det(xI - M)`, coefficients lowest degree first.
    ///
    /// Reduces to upper Hessenberg form by similarity and runs the usual
    /// recurrence, so it works over any field (including small `F_p`).
    pub fn charpoly(&self) -> Vec<F> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return Vec::new();
        }
        let one = self.data[0].one_like();
        let zero = one.zero_like();
        let mut h = self.clone();
        for j in 0..n.saturating_sub(2) {
            let Some(i) = (j + 1..n).find(|&i| !h.get(i, j).is_zero()) else {
                continue;
            };
            if i != j + 1 {
                h.swap_rows(i, j + 1);
                h.swap_cols(i, j + 1);
            }
            let t_inv = h.get(j + 1, j).inv().expect("field element");
            for i in j + 2..n {
                let u = h.get(i, j).mul(&t_inv);
                if u.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let v = h.get(i, c).sub(&u.mul(h.get(j + 1, c)));
                    h.set(i, c, v);
                }
                for r in 0..n {
                    let v = h.get(r, j + 1).add(&u.mul(h.get(r, i)));
                    h.set(r, j + 1, v);
                }
            }
        }
        // p[m] = charpoly of leading m x m block
        let mut polys: Vec<Vec<F>> = vec![vec![one.clone()]];
        for m in 1..=n {
            let prev = &polys[m - 1];
            let mut next = vec![zero.clone(); m + 1];
            for (k, c) in prev.iter().enumerate() {
                next[k + 1] = next[k + 1].add(c);
                next[k] = next[k].sub(&h.get(m - 1, m - 1).mul(c));
            }
            let mut t = one.clone();
            for i in (1..m).rev() {
                t = t.mul(h.get(i, i - 1));
                let coef = h.get(i - 1, m - 1).mul(&t);
                if coef.is_zero() {
                    continue;
                }
                for (k, c) in polys[i - 1].iter().enumerate() {
                    next[k] = next[k].sub(&coef.mul(c));
                }
            }
            polys.push(next);
        }
        polys.pop().unwrap()
    }
}

impl<F: Scalar + fmt::Display> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<F: Scalar> Matrix<F> {
    /// Determinant by Gaussian elimination; requires a field.
    pub fn determinant(&self) -> F {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.to_rows();
        let one = match self.data.first() {
            Some(x) => x.one_like(),
            None => panic!("determinant of an empty matrix needs a coefficient ring"),
        };
        let mut det = one;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !a[i][c].is_zero()) else {
                return det.zero_like();
            };
            if pr != c {
                a.swap(pr, c);
                det = det.neg();
            }
            let inv = a[c][c].inv().expect("determinant needs a field");
            det = det.mul(&a[c][c]);
            for i in c + 1..n {
                if a[i][c].is_zero() {
                    continue;
                }
                let factor = a[i][c].mul(&inv);
                for j in c..n {
                    let t = factor.mul(&a[c][j]);
                    a[i][j] = a[i][j].sub(&t);
                }
            }
        }
        det
    }
}
