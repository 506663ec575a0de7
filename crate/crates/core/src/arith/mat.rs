use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::rat::Rat;
use crate::error::{Error, Result};
use crate::poly::UPoly;

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

/// Which characteristic polynomial to build: `det(M + X I)` or `det(M - X I)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharSign {
    Plus,
    Minus,
}

impl Mat {
    pub fn new(rows: usize, cols: usize, data: Vec<Rat>) -> Result<Mat> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Mat> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Mat::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Integer-entry convenience constructor, mostly for tests.
    pub fn from_i64(rows: &[&[i64]]) -> Mat {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rat::from(x)).collect()).collect())
            .expect("rectangular input")
    }

    pub fn diag(entries: &[Rat]) -> Mat {
        let mut m = Mat::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
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

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Rat] {
        &self.data
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Mat, f: impl Fn(&Rat, &Rat) -> Rat) -> Result<Mat> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("shape mismatch".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(Mat { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, c: &Rat) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn trace(&self) -> Rat {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Principal submatrix on the given (sorted) index set.
    pub fn principal_submatrix(&self, idx: &[usize]) -> Mat {
        let mut m = Mat::zeros(idx.len(), idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<Rat> {
        if !self.is_square() {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        if self.rows == 0 {
            return Ok(Rat::one());
        }
        let (ints, scale) = integer_rows(self);
        let ech = bareiss(ints, self.cols);
        if ech.rank < self.rows {
            return Ok(Rat::zero());
        }
        let last = ech.rows[self.rows - 1][self.cols - 1].clone();
        let sign = if ech.swaps % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        Ok(Rat::from(last * sign) / scale)
    }

    /// Characteristic polynomial `det(M + X I)` (`Plus`) or `det(M - X I)`
    /// (`Minus`), computed by the Faddeev-LeVerrier recursion.
    pub fn charpoly(&self, sign: CharSign) -> Result<UPoly> {
        if !self.is_square() {
            return Err(Error::Dimension("characteristic polynomial of a non-square matrix".into()));
        }
        let n = self.rows;
        match sign {
            // det(M + XI) = det(XI - (-M))
            CharSign::Plus => Ok(UPoly::new(faddeev_leverrier(&self.scale(&Rat::from(-1))))),
            CharSign::Minus => {
                let c = faddeev_leverrier(self);
                let s = if n % 2 == 0 { Rat::one() } else { Rat::from(-1) };
                Ok(UPoly::new(c.into_iter().map(|x| x * &s).collect()))
            }
        }
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let (ints, _) = integer_rows(self);
        bareiss(ints, self.cols).rank
    }

    /// One exact solution of `A x = b`, or `None` when the system is
    /// inconsistent. Free variables are set to zero.
    pub fn solve(&self, b: &[Rat]) -> Result<Option<Vec<Rat>>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!("right-hand side of length {} for {} rows", b.len(), self.rows)));
        }
        let aug = self.augmented(b);
        let (ints, _) = integer_rows(&aug);
        let ech = bareiss(ints, aug.cols);
        Ok(back_substitute(&ech, self.cols, true))
    }

    /// Basis of the right null space. Each basis vector has a 1 in exactly one
    /// free coordinate and 0 in the other free coordinates.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        self.affine_solution().map(|(_, n)| n).unwrap_or_default()
    }

    /// Particular solution (free coordinates zero) plus null-space basis of
    /// `A x = b`, or `None` when inconsistent.
    pub fn affine_solution_of(&self, b: &[Rat]) -> Result<Option<(Vec<Rat>, Vec<Vec<Rat>>)>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!("right-hand side of length {} for {} rows", b.len(), self.rows)));
        }
        let aug = self.augmented(b);
        let (ints, _) = integer_rows(&aug);
        let ech = bareiss(ints, aug.cols);
        let Some(x0) = back_substitute(&ech, self.cols, true) else {
            return Ok(None);
        };
        let pivots: Vec<usize> = ech.pivots.iter().copied().filter(|&c| c < self.cols).collect();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            basis.push(nullspace_vector(&ech, self.cols, free));
        }
        Ok(Some((x0, basis)))
    }

    fn affine_solution(&self) -> Option<(Vec<Rat>, Vec<Vec<Rat>>)> {
        self.affine_solution_of(&vec![Rat::zero(); self.rows]).ok().flatten()
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut inv = Mat::zeros(n, n);
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rat::one());
        }
        let (ints, _) = integer_rows(&aug);
        let ech = bareiss(ints, 2 * n);
        if ech.pivots.iter().filter(|&&c| c < n).count() < n {
            return None;
        }
        for col in 0..n {
            let mut x = vec![Rat::zero(); n];
            for r in (0..n).rev() {
                let row = &ech.rows[r];
                let mut acc = Rat::from(row[n + col].clone());
                for j in (r + 1)..n {
                    if !row[j].is_zero() {
                        acc -= Rat::from(row[j].clone()) * &x[j];
                    }
                }
                x[r] = acc / Rat::from(row[r].clone());
            }
            for (i, v) in x.into_iter().enumerate() {
                inv.set(i, col, v);
            }
        }
        Some(inv)
    }

    fn augmented(&self, b: &[Rat]) -> Mat {
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        aug
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.data.iter().map(Rat::to_f64).collect()
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(Rat::to_string).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

fn faddeev_leverrier(a: &Mat) -> Vec<Rat> {
    // det(XI - A) = sum c_k X^k, c_n = 1
    let n = a.rows;
    let mut c = vec![Rat::zero(); n + 1];
    c[n] = Rat::one();
    let mut m = Mat::zeros(n, n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = a.mul(&m).expect("square");
        for i in 0..n {
            let v = next.get(i, i) + &c[n - k + 1];
            next.set(i, i, v);
        }
        let am = a.mul(&next).expect("square");
        c[n - k] = -am.trace() / Rat::from(k as i64);
        m = next;
    }
    c
}

struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    rank: usize,
    swaps: usize,
}

/// Scale every row by the lcm of its denominators. Returns the integer rows
/// and the product of the scale factors.
fn integer_rows(m: &Mat) -> (Vec<Vec<BigInt>>, Rat) {
    let mut scale = Rat::one();
    let rows = (0..m.rows)
        .map(|i| {
            let row = m.row(i);
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= Rat::from(l.clone());
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    (rows, scale)
}

fn bareiss(mut a: Vec<Vec<BigInt>>, cols: usize) -> Echelon {
    let nrows = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    let mut swaps = 0;
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            swaps += 1;
        }
        let (top, bottom) = a.split_at_mut(r + 1);
        let prow = &top[r];
        for row in bottom.iter_mut() {
            for j in (c + 1)..cols {
                let v = &prow[c] * &row[j] - &row[c] * &prow[j];
                debug_assert!((&v % &prev).is_zero(), "Bareiss division must be exact");
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        // entries left of the pivot in untouched positions stay as they were
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    Echelon { rows: a, pivots, rank: r, swaps }
}

/// Back substitution on an echelon form of `[A | b]` with `n` unknowns.
fn back_substitute(ech: &Echelon, n: usize, augmented: bool) -> Option<Vec<Rat>> {
    if augmented && ech.pivots.contains(&n) {
        return None;
    }
    let mut x = vec![Rat::zero(); n];
    for (r, &c) in ech.pivots.iter().enumerate().rev() {
        let row = &ech.rows[r];
        let mut acc = if augmented { Rat::from(row[n].clone()) } else { Rat::zero() };
        for j in (c + 1)..n {
            if !row[j].is_zero() && !x[j].is_zero() {
                acc -= Rat::from(row[j].clone()) * &x[j];
            }
        }
        x[c] = acc / Rat::from(row[c].clone());
    }
    Some(x)
}

fn nullspace_vector(ech: &Echelon, n: usize, free: usize) -> Vec<Rat> {
    let mut x = vec![Rat::zero(); n];
    x[free] = Rat::one();
    for (r, &c) in ech.pivots.iter().enumerate().rev() {
        if c >= n {
            continue;
        }
        let row = &ech.rows[r];
        let mut acc = Rat::zero();
        for j in (c + 1)..n {
            if !row[j].is_zero() && !x[j].is_zero() {
                acc -= Rat::from(row[j].clone()) * &x[j];
            }
        }
        x[c] = acc / Rat::from(row[c].clone());
    }
    x
}

/// Symmetric rational matrix stored as its upper triangle.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymMat {
    dim: usize,
    upper: Vec<Rat>,
}

impl SymMat {
    pub fn zeros(dim: usize) -> SymMat {
        SymMat { dim, upper: vec![Rat::zero(); dim * (dim + 1) / 2] }
    }

    pub fn identity(dim: usize) -> SymMat {
        let mut s = SymMat::zeros(dim);
        for i in 0..dim {
            s.set(i, i, Rat::one());
        }
        s
    }

    pub fn from_mat(m: &Mat) -> Result<SymMat> {
        if !m.is_symmetric() {
            return Err(Error::Asymmetric);
        }
        let mut s = SymMat::zeros(m.rows());
        for i in 0..m.rows() {
            for j in i..m.rows() {
                s.set(i, j, m.get(i, j).clone());
            }
        }
        Ok(s)
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<SymMat> {
        SymMat::from_mat(&Mat::from_rows(rows)?)
    }

    pub fn from_i64(rows: &[&[i64]]) -> SymMat {
        SymMat::from_mat(&Mat::from_i64(rows)).expect("symmetric input")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        // row i of the triangle starts after sum_{k<i} (dim - k) entries
        i * self.dim - i * (i + 1) / 2 + j
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.upper[self.index(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        let k = self.index(i, j);
        self.upper[k] = v;
    }

    pub fn to_mat(&self) -> Mat {
        let mut m = Mat::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn rows(&self) -> Vec<Vec<Rat>> {
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.get(i, j).clone()).collect()).collect()
    }

    pub fn add(&self, other: &SymMat) -> Result<SymMat> {
        if self.dim != other.dim {
            return Err(Error::Dimension("symmetric matrices of different size".into()));
        }
        Ok(SymMat { dim: self.dim, upper: self.upper.iter().zip(&other.upper).map(|(a, b)| a + b).collect() })
    }

    pub fn scale(&self, c: &Rat) -> SymMat {
        SymMat { dim: self.dim, upper: self.upper.iter().map(|a| a * c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.upper.iter().all(Rat::is_zero)
    }

    /// `x^T M x`.
    pub fn quadratic_form(&self, x: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let m = self.get(i, j);
                if !m.is_zero() {
                    acc += m * &x[i] * &x[j];
                }
            }
        }
        acc
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.get(i, j).to_f64()).collect()).collect()
    }
}

impl fmt::Debug for SymMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.to_mat(), f)
    }
}
