use super::{ArithError, Field};

/// Dense row-major matrix over an exact field.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Field> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, ArithError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(ArithError::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Principal submatrix on the given index list, in that order.
    pub fn principal_submatrix(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(idx.len(), idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>, ArithError> {
        if v.len() != self.cols {
            return Err(ArithError::DimensionMismatch(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    pub fn solve(&self, b: &[T]) -> Result<Vec<T>, ArithError> {
        solve_linear_system(self, b)
    }

    pub fn determinant(&self) -> Result<T, ArithError> {
        if !self.is_square() {
            return Err(ArithError::DimensionMismatch("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = T::one();
        for k in 0..n {
            let Some(p) = choose_pivot(&a, n, k, k) else {
                return Ok(T::zero());
            };
            if p != k {
                swap_rows(&mut a, n, p, k);
                det = -det;
            }
            let pivot = a[k * n + k].clone();
            det = det * pivot.clone();
            eliminate_below(&mut a, n, k, &pivot, None);
        }
        Ok(det)
    }

    /// Pivots of elimination without row exchanges. `None` once a zero pivot
    /// appears, since the leading minors stop determining the rest.
    fn unpivoted_pivots(&self) -> Vec<Option<T>> {
        let n = self.rows;
        let mut a = self.data.clone();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let pivot = a[k * n + k].clone();
            if pivot.is_zero() {
                out.extend((k..n).map(|_| None));
                break;
            }
            out.push(Some(pivot.clone()));
            eliminate_below(&mut a, n, k, &pivot, None);
        }
        out
    }

    /// Determinants of the leading `k x k` blocks for `k = 1..=n`.
    pub fn leading_principal_minors(&self) -> Result<Vec<T>, ArithError> {
        if !self.is_square() {
            return Err(ArithError::DimensionMismatch("minors of non-square matrix".into()));
        }
        let pivots = self.unpivoted_pivots();
        let mut minors = Vec::with_capacity(self.rows);
        let mut acc = T::one();
        for (k, p) in pivots.into_iter().enumerate() {
            match p {
                Some(p) => {
                    acc = acc * p;
                    minors.push(acc.clone());
                }
                None => {
                    let idx: Vec<usize> = (0..=k).collect();
                    minors.push(self.principal_submatrix(&idx).determinant()?);
                }
            }
        }
        Ok(minors)
    }

    /// Sylvester's criterion on `-self`. The empty matrix counts as definite.
    pub fn is_negative_definite(&self) -> bool {
        self.is_symmetric()
            && self
                .unpivoted_pivots()
                .iter()
                .all(|p| p.as_ref().is_some_and(|p| p.is_negative()))
    }
}

fn swap_rows<T>(a: &mut [T], cols: usize, i: usize, j: usize) {
    for c in 0..cols {
        a.swap(i * cols + c, j * cols + c);
    }
}

fn choose_pivot<T: Field>(a: &[T], cols: usize, k: usize, col: usize) -> Option<usize> {
    let rows = a.len() / cols;
    let mut best: Option<(usize, T)> = None;
    for i in k..rows {
        let v = &a[i * cols + col];
        if v.is_zero() {
            continue;
        }
        let score = v.pivot_rank();
        if best.as_ref().is_none_or(|(_, s)| score > *s) {
            best = Some((i, score));
        }
    }
    best.map(|(i, _)| i)
}

fn eliminate_below<T: Field>(a: &mut [T], cols: usize, k: usize, pivot: &T, rhs: Option<&mut [T]>) {
    let rows = a.len() / cols;
    let mut rhs = rhs;
    for i in k + 1..rows {
        let f = a[i * cols + k].clone();
        if f.is_zero() {
            continue;
        }
        let f = f / pivot.clone();
        for c in k..cols {
            let v = a[k * cols + c].clone();
            a[i * cols + c] = a[i * cols + c].clone() - f.clone() * v;
        }
        if let Some(b) = rhs.as_deref_mut() {
            b[i] = b[i].clone() - f * b[k].clone();
        }
    }
}

/// Solves `m x = b` by Gaussian elimination with partial pivoting.
///
/// Fails with [`ArithError::SingularMatrix`] when `m` is not invertible.
pub fn solve_linear_system<T: Field>(m: &Matrix<T>, b: &[T]) -> Result<Vec<T>, ArithError> {
    if !m.is_square() || b.len() != m.rows {
        return Err(ArithError::DimensionMismatch(format!(
            "{}x{} system with right side of length {}",
            m.rows,
            m.cols,
            b.len()
        )));
    }
    let n = m.rows;
    let mut a = m.data.clone();
    let mut rhs = b.to_vec();
    for k in 0..n {
        let p = choose_pivot(&a, n, k, k).ok_or(ArithError::SingularMatrix)?;
        if p != k {
            swap_rows(&mut a, n, p, k);
            rhs.swap(p, k);
        }
        let pivot = a[k * n + k].clone();
        eliminate_below(&mut a, n, k, &pivot, Some(&mut rhs));
    }
    let mut x = vec![T::zero(); n];
    for k in (0..n).rev() {
        let mut acc = rhs[k].clone();
        for c in k + 1..n {
            acc = acc - a[k * n + c].clone() * x[c].clone();
        }
        x[k] = acc / a[k * n + k].clone();
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::Rational;

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn solves_a1_chain_pullback() {
        // Two (-2)-curves, curve meeting the first one: hand solution (2/3, 1/3).
        let x = m(&[&[-2, 1], &[1, -2]]).solve(&[int(-1), int(0)]).unwrap();
        assert_eq!(x, vec![rat(2, 3), rat(1, 3)]);
    }

    #[test]
    fn solves_two_five_chain() {
        let x = m(&[&[-2, 1], &[1, -5]]).solve(&[int(-1), int(0)]).unwrap();
        assert_eq!(x, vec![rat(5, 9), rat(1, 9)]);
    }

    #[test]
    fn singular_is_reported() {
        let e = m(&[&[1, 2], &[2, 4]]).solve(&[int(1), int(1)]).unwrap_err();
        assert_eq!(e, ArithError::SingularMatrix);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            m(&[&[1, 0], &[0, 1]]).solve(&[int(1)]),
            Err(ArithError::DimensionMismatch(_))
        ));
        assert!(Matrix::<Rational>::from_rows(vec![vec![int(1)], vec![]]).is_err());
    }

    #[test]
    fn needs_row_exchange() {
        let x = m(&[&[0, 1], &[1, 0]]).solve(&[int(3), int(4)]).unwrap();
        assert_eq!(x, vec![int(4), int(3)]);
    }

    #[test]
    fn determinant_and_minors() {
        let a = m(&[&[-2, 1, 0], &[1, -2, 1], &[0, 1, -2]]);
        assert_eq!(a.determinant().unwrap(), int(-4));
        assert_eq!(a.leading_principal_minors().unwrap(), vec![int(-2), int(3), int(-4)]);
        assert!(a.is_negative_definite());
        let b = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(b.leading_principal_minors().unwrap(), vec![int(0), int(-1)]);
        assert!(!b.is_negative_definite());
    }

    #[test]
    fn minus_one_pair_is_not_definite() {
        // Two (-1)-curves meeting once: det 0.
        assert!(!m(&[&[-1, 1], &[1, -1]]).is_negative_definite());
        assert!(m(&[&[-1]]).is_negative_definite());
    }

    #[test]
    fn mul_vec_roundtrip() {
        let a = m(&[&[-3, 1], &[1, -2]]);
        let x = a.solve(&[int(1), int(2)]).unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), vec![int(1), int(2)]);
    }
}
