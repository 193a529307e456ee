use std::fmt;

use super::{Field, FieldError, Rational};

/// Dense row-major matrix over an exact field.
///
/// `unit` is the field's `1`; it lets empty matrices and fresh zero entries
/// know which field they live in (relevant for `Q(ζ_p)`).
#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
    unit: F,
}

/// Reduced row echelon form plus the pivot column of each nonzero row.
struct Echelon<F: Field> {
    m: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize, unit: &F) -> Self {
        let unit = unit.one_like();
        Self {
            rows,
            cols,
            data: vec![unit.zero_like(); rows * cols],
            unit,
        }
    }

    pub fn identity(n: usize, unit: &F) -> Self {
        let mut m = Self::zeros(n, n, unit);
        for i in 0..n {
            m.data[i * n + i] = m.unit.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>, unit: &F) -> Result<Self, FieldError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(FieldError::Shape("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
            unit: unit.one_like(),
        })
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, cols: &[Vec<F>], unit: &F) -> Result<Self, FieldError> {
        let mut m = Self::zeros(rows, cols.len(), unit);
        for (j, col) in cols.iter().enumerate() {
            if col.len() != rows {
                return Err(FieldError::Shape(format!(
                    "column {j} has length {}, expected {rows}",
                    col.len()
                )));
            }
            for (i, x) in col.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn from_fn(rows: usize, cols: usize, unit: &F, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            data,
            unit: unit.one_like(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn unit(&self) -> &F {
        &self.unit
    }

    pub fn zero(&self) -> F {
        self.unit.zero_like()
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: F) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> Vec<F> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<F>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Field::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn map<G: Field>(&self, unit: &G, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
            unit: unit.one_like(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, &self.unit, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, FieldError> {
        if self.cols != rhs.rows {
            return Err(FieldError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols, &self.unit);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F]) -> Result<Vec<F>, FieldError> {
        if self.cols != v.len() {
            return Err(FieldError::Shape(format!(
                "cannot apply {}x{} matrix to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = self.zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.add(&a.mul(x));
                    }
                }
                acc
            })
            .collect())
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&F, &F) -> F) -> Result<Self, FieldError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(FieldError::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
            unit: self.unit.clone(),
        })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, FieldError> {
        self.zip_with(rhs, F::add)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, FieldError> {
        self.zip_with(rhs, F::sub)
    }

    pub fn scale(&self, c: &F) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.mul(c)).collect(),
            unit: self.unit.clone(),
        }
    }

    /// `self - c·I`.
    pub fn sub_scalar_identity(&self, c: &F) -> Result<Self, FieldError> {
        if !self.is_square() {
            return Err(FieldError::Shape("not square".into()));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            let idx = i * self.cols + i;
            out.data[idx] = out.data[idx].sub(c);
        }
        Ok(out)
    }

    pub fn pow(&self, mut k: u64) -> Result<Self, FieldError> {
        if !self.is_square() {
            return Err(FieldError::Shape("not square".into()));
        }
        let mut acc = Self::identity(self.rows, &self.unit);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            k >>= 1;
        }
        Ok(acc)
    }

    pub fn hstack(&self, rhs: &Self) -> Result<Self, FieldError> {
        if self.rows != rhs.rows {
            return Err(FieldError::Shape("hstack row mismatch".into()));
        }
        Ok(Self::from_fn(self.rows, self.cols + rhs.cols, &self.unit, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                rhs.get(i, j - self.cols).clone()
            }
        }))
    }

    pub fn vstack(&self, rhs: &Self) -> Result<Self, FieldError> {
        if self.cols != rhs.cols {
            return Err(FieldError::Shape("vstack column mismatch".into()));
        }
        let mut data = self.data.clone();
        data.extend(rhs.data.iter().cloned());
        Ok(Self {
            rows: self.rows + rhs.rows,
            cols: self.cols,
            data,
            unit: self.unit.clone(),
        })
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, rhs: &Self) -> Self {
        Self::from_fn(self.rows + rhs.rows, self.cols + rhs.cols, &self.unit, |i, j| {
            match (i < self.rows, j < self.cols) {
                (true, true) => self.get(i, j).clone(),
                (false, false) => rhs.get(i - self.rows, j - self.cols).clone(),
                _ => self.zero(),
            }
        })
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), self.cols, &self.unit, |i, j| self.get(idx[i], j).clone())
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), &self.unit, |i, j| self.get(i, idx[j]).clone())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Gauss–Jordan elimination, pivoting on the first nonzero entry.
    fn echelon(&self) -> Echelon<F> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = m.get(r, c).inverse().expect("pivot is nonzero");
            for j in c..m.cols {
                let idx = r * m.cols + j;
                m.data[idx] = m.data[idx].mul(&inv);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let sub = f.mul(m.get(r, j));
                    let idx = i * m.cols + j;
                    m.data[idx] = m.data[idx].sub(&sub);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of the null space. Empty iff the matrix is injective.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        let Echelon { m, pivots } = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![self.zero(); self.cols];
                v[fc] = self.unit.clone();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = m.get(r, fc).neg();
                }
                v
            })
            .collect()
    }

    /// Solves `self · x = v`. `Ok(None)` certifies that no solution exists;
    /// otherwise one particular solution (free variables set to zero).
    pub fn solve_linear(&self, v: &[F]) -> Result<Option<Vec<F>>, FieldError> {
        if v.len() != self.rows {
            return Err(FieldError::Shape(format!(
                "right-hand side has length {}, expected {}",
                v.len(),
                self.rows
            )));
        }
        let rhs = Self::from_columns(self.rows, &[v.to_vec()], &self.unit)?;
        let aug = self.hstack(&rhs)?;
        let Echelon { m, pivots } = aug.echelon();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![self.zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = m.get(r, self.cols).clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<Option<Self>, FieldError> {
        if !self.is_square() {
            return Err(FieldError::Shape("not square".into()));
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(n, &self.unit))?;
        let Echelon { m, pivots } = aug.echelon();
        if pivots.iter().take(n).filter(|&&c| c < n).count() < n {
            return Ok(None);
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Ok(Some(m.select_columns(&cols)))
    }

    pub fn det(&self) -> Result<F, FieldError> {
        if !self.is_square() {
            return Err(FieldError::Shape("not square".into()));
        }
        let mut m = self.clone();
        let n = self.rows;
        let mut det = self.unit.clone();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(self.zero());
            };
            if pr != c {
                m.swap_rows(c, pr);
                det = det.neg();
            }
            let piv = m.get(c, c).clone();
            det = det.mul(&piv);
            let inv = piv.inverse().expect("pivot is nonzero");
            for i in c + 1..n {
                let f = m.get(i, c).mul(&inv);
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let sub = f.mul(m.get(c, j));
                    let idx = i * n + j;
                    m.data[idx] = m.data[idx].sub(&sub);
                }
            }
        }
        Ok(det)
    }

    /// Indices of a maximal linearly independent subset of the columns,
    /// chosen greedily left to right.
    pub fn independent_columns(&self) -> Vec<usize> {
        self.echelon().pivots
    }

    /// Standard basis vectors completing the column span to all of `F^rows`.
    pub fn complement_basis(&self) -> Vec<Vec<F>> {
        let n = self.rows;
        let aug = self
            .hstack(&Self::identity(n, &self.unit))
            .expect("same row count");
        aug.independent_columns()
            .into_iter()
            .filter(|&c| c >= self.cols)
            .map(|c| aug.column(c))
            .collect()
    }
}

impl Matrix<Rational> {
    /// Rational matrix from small integer rows.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self, FieldError> {
        let unit = super::rational(1, 1);
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| super::rational(x, 1)).collect())
                .collect(),
            &unit,
        )
    }
}

impl<F: Field + fmt::Display> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matrix")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("data", &self.data)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rational, CyclotomicNumber};
    use proptest::prelude::*;

    fn q1() -> Rational {
        rational(1, 1)
    }

    #[test]
    fn kernel_examples() {
        let z = Matrix::zeros(2, 2, &q1());
        assert_eq!(z.kernel_basis().len(), 2);
        let id = Matrix::identity(3, &q1());
        assert!(id.kernel_basis().is_empty());
        assert_eq!(id.rank(), 3);
    }

    #[test]
    fn swap_eigenvector_minus_one() {
        let a = Matrix::from_i64_rows(&[&[0, 1], &[1, 0]]).unwrap();
        let m = a.sub_scalar_identity(&rational(-1, 1)).unwrap();
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        // Proportional to (1, -1).
        assert_eq!(&k[0][0] + &k[0][1], rational(0, 1));
        assert!(!Field::is_zero(&k[0][0]));
    }

    #[test]
    fn solve_diagonal() {
        let m = Matrix::from_i64_rows(&[&[2, 0], &[0, 2]]).unwrap();
        let x = m.solve_linear(&[q1(), q1()]).unwrap().unwrap();
        assert_eq!(x, vec![rational(1, 2), rational(1, 2)]);
    }

    #[test]
    fn solve_inconsistent() {
        let m = Matrix::from_i64_rows(&[&[1, 1], &[2, 2]]).unwrap();
        assert_eq!(m.solve_linear(&[q1(), q1()]).unwrap(), None);
        assert!(m.solve_linear(&[q1()]).is_err());
    }

    #[test]
    fn det_and_inverse() {
        let m = Matrix::from_i64_rows(&[&[2, 1], &[7, 4]]).unwrap();
        assert_eq!(m.det().unwrap(), q1());
        let inv = m.inverse().unwrap().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(2, &q1()));
        let s = Matrix::from_i64_rows(&[&[1, 2], &[2, 4]]).unwrap();
        assert_eq!(s.inverse().unwrap(), None);
    }

    #[test]
    fn complement_extends_to_basis() {
        let m = Matrix::from_i64_rows(&[&[1], &[1], &[0]]).unwrap();
        let comp = m.complement_basis();
        assert_eq!(comp.len(), 2);
        let full = Matrix::from_columns(3, &comp, &q1()).unwrap().hstack(&m).unwrap();
        assert_eq!(full.rank(), 3);
    }

    #[test]
    fn cyclotomic_kernel() {
        // The 3-cycle permutation has eigenvalue ζ_3 over Q(ζ_3).
        let unit = CyclotomicNumber::one(3).unwrap();
        let p = Matrix::from_i64_rows(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]])
            .unwrap()
            .map(&unit, |q| unit.embed(q));
        let z = CyclotomicNumber::zeta(3).unwrap();
        let k = p.sub_scalar_identity(&z).unwrap().kernel_basis();
        assert_eq!(k.len(), 1);
        let pv = p.mul_vec(&k[0]).unwrap();
        let zv: Vec<_> = k[0].iter().map(|x| x.mul(&z)).collect();
        assert_eq!(pv, zv);
    }

    fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix<Rational>> {
        prop::collection::vec(-3i64..=3, rows * cols).prop_map(move |v| {
            Matrix::from_fn(rows, cols, &rational(1, 1), |i, j| rational(v[i * cols + j], 1))
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in (1usize..6, 1usize..6).prop_flat_map(|(r, c)| arb_matrix(r, c))) {
            prop_assert_eq!(m.rank() + m.kernel_basis().len(), m.cols());
            for v in m.kernel_basis() {
                prop_assert!(m.mul_vec(&v).unwrap().iter().all(Field::is_zero));
            }
        }

        #[test]
        fn solve_round_trip(m in arb_matrix(4, 4), v in prop::collection::vec(-5i64..=5, 4)) {
            let v: Vec<Rational> = v.into_iter().map(|x| rational(x, 1)).collect();
            match m.solve_linear(&v).unwrap() {
                Some(x) => prop_assert_eq!(m.mul_vec(&x).unwrap(), v),
                None => prop_assert!(m.rank() < 4),
            }
        }
    }
}
