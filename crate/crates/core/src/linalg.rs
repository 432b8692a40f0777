//! Dense exact matrices over a generic integer scalar.
//!
//! Everything here is exact: Hermite and Smith normal forms over the integer
//! type itself, and Gaussian elimination over `Ratio<T>`.  The domain layers
//! instantiate `T = BigInt`; the small-integer instantiations exist for tests
//! and for callers that can bound their entries.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Integer scalars usable by the exact linear algebra.
pub trait ExactInt:
    Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

impl<T> ExactInt for T where
    T: Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Debug> Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:?} ", self.data[i * self.cols + j])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_cols(rows: usize, cols: &[Vec<T>]) -> Self {
        Matrix::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn to_cols(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + std::ops::Add<Output = T> + std::ops::Mul<Output = T>,
{
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = acc + a.clone() * other.get(k, j).clone();
                }
                out.push(acc);
            }
        }
        Matrix { rows: self.rows, cols: other.cols, data: out }
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in product");
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    acc = acc + self.get(i, k).clone() * v[k].clone();
                }
                acc
            })
            .collect()
    }
}

impl<T: Clone + PartialEq> Matrix<T> {
    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

/// `x^T M y` for a square matrix.
pub fn bilinear<T>(m: &Matrix<T>, x: &[T], y: &[T]) -> T
where
    T: Clone + Zero + std::ops::Add<Output = T> + std::ops::Mul<Output = T>,
{
    let my = m.mul_vec(y);
    x.iter().zip(my).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b)
}

/// Lifts an integer matrix to rationals.
pub fn to_rational<T: ExactInt>(m: &Matrix<T>) -> Matrix<Ratio<T>> {
    m.map(|x| Ratio::from_integer(x.clone()))
}

// ---------------------------------------------------------------------------
// Hermite normal form
// ---------------------------------------------------------------------------

fn col_axpy<T: ExactInt>(a: &mut Matrix<T>, dst: usize, src: usize, q: &T) {
    // col_dst -= q * col_src
    if q.is_zero() {
        return;
    }
    for i in 0..a.rows {
        let s = a.get(i, src).clone();
        if !s.is_zero() {
            let v = a.get(i, dst).clone() - q.clone() * s;
            a.set(i, dst, v);
        }
    }
}

fn row_axpy<T: ExactInt>(a: &mut Matrix<T>, dst: usize, src: usize, q: &T) {
    // row_dst -= q * row_src
    if q.is_zero() {
        return;
    }
    for j in 0..a.cols {
        let s = a.get(src, j).clone();
        if !s.is_zero() {
            let v = a.get(dst, j).clone() - q.clone() * s;
            a.set(dst, j, v);
        }
    }
}

fn negate_col<T: ExactInt>(a: &mut Matrix<T>, j: usize) {
    for i in 0..a.rows {
        let v = -a.get(i, j).clone();
        a.set(i, j, v);
    }
}

fn negate_row<T: ExactInt>(a: &mut Matrix<T>, i: usize) {
    for j in 0..a.cols {
        let v = -a.get(i, j).clone();
        a.set(i, j, v);
    }
}

/// Column-style Hermite normal form of the lattice spanned by the columns of `m`.
///
/// The result has one column per basis vector, in echelon form: column `j` has
/// its first nonzero entry (positive) in pivot row `p_j`, pivot rows strictly
/// increase, and entries to the left of a pivot are reduced into `[0, pivot)`.
/// The form depends only on the lattice, so it serves as a hashing key.
pub fn hnf_cols<T: ExactInt>(m: &Matrix<T>) -> Matrix<T> {
    let mut a = m.clone();
    let (n, k) = (a.rows, a.cols);
    let mut pc = 0;
    for i in 0..n {
        if pc == k {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for j in pc..k {
                if !a.get(i, j).is_zero()
                    && best.map_or(true, |b| a.get(i, j).abs() < a.get(i, b).abs())
                {
                    best = Some(j);
                }
            }
            let Some(b) = best else { break };
            a.swap_cols(pc, b);
            let mut clean = true;
            for j in pc + 1..k {
                if !a.get(i, j).is_zero() {
                    let q = a.get(i, j).div_floor(a.get(i, pc));
                    col_axpy(&mut a, j, pc, &q);
                    if !a.get(i, j).is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        if !a.get(i, pc).is_zero() {
            if a.get(i, pc).is_negative() {
                negate_col(&mut a, pc);
            }
            for j in 0..pc {
                let q = a.get(i, j).div_floor(a.get(i, pc));
                col_axpy(&mut a, j, pc, &q);
            }
            pc += 1;
        }
    }
    Matrix::from_fn(n, pc, |i, j| a.get(i, j).clone())
}

// ---------------------------------------------------------------------------
// Smith normal form
// ---------------------------------------------------------------------------

/// Smith form `u * m * v = diag(d)` with `d[i] | d[i+1]` and `u`, `v` unimodular.
#[derive(Clone, Debug)]
pub struct Smith<T> {
    pub d: Vec<T>,
    pub u: Matrix<T>,
    pub v: Matrix<T>,
}

pub fn smith<T: ExactInt>(m: &Matrix<T>) -> Smith<T> {
    let (n, k) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = Matrix::<T>::identity(n);
    let mut v = Matrix::<T>::identity(k);
    let r = n.min(k);
    for t in 0..r {
        // pivot of minimal absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..n {
            for j in t..k {
                let x = a.get(i, j);
                if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap_rows(t, bi);
        u.swap_rows(t, bi);
        a.swap_cols(t, bj);
        v.swap_cols(t, bj);
        loop {
            let mut dirty = false;
            // clear column t
            for i in t + 1..n {
                if !a.get(i, t).is_zero() {
                    let q = a.get(i, t).div_floor(a.get(t, t));
                    row_axpy(&mut a, i, t, &q);
                    row_axpy(&mut u, i, t, &q);
                    if !a.get(i, t).is_zero() {
                        dirty = true;
                    }
                }
            }
            // clear row t
            for j in t + 1..k {
                if !a.get(t, j).is_zero() {
                    let q = a.get(t, j).div_floor(a.get(t, t));
                    col_axpy(&mut a, j, t, &q);
                    col_axpy(&mut v, j, t, &q);
                    if !a.get(t, j).is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                // move the smallest remaining entry of row/column t into the pivot
                let mut bi = t;
                let mut bj = t;
                for i in t + 1..n {
                    let x = a.get(i, t);
                    if !x.is_zero() && x.abs() < a.get(bi, bj).abs() {
                        bi = i;
                        bj = t;
                    }
                }
                for j in t + 1..k {
                    let x = a.get(t, j);
                    if !x.is_zero() && x.abs() < a.get(bi, bj).abs() {
                        bi = t;
                        bj = j;
                    }
                }
                a.swap_rows(t, bi);
                u.swap_rows(t, bi);
                a.swap_cols(t, bj);
                v.swap_cols(t, bj);
                continue;
            }
            // divisibility of the trailing block
            let p = a.get(t, t).clone();
            let mut bad = None;
            'scan: for i in t + 1..n {
                for j in t + 1..k {
                    if !a.get(i, j).is_multiple_of(&p) {
                        bad = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad {
                Some(i) => {
                    // row_t += row_i, then repeat the elimination
                    let m1 = -T::one();
                    row_axpy(&mut a, t, i, &m1);
                    row_axpy(&mut u, t, i, &m1);
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            negate_row(&mut a, t);
            negate_row(&mut u, t);
        }
    }
    let d = (0..r).map(|i| a.get(i, i).clone()).collect();
    Smith { d, u, v }
}

/// Elementary divisors only (nonzero diagonal of the Smith form).
pub fn elementary_divisors<T: ExactInt>(m: &Matrix<T>) -> Vec<T> {
    smith(m).d.into_iter().filter(|x| !x.is_zero()).collect()
}

// ---------------------------------------------------------------------------
// Determinants and rational elimination
// ---------------------------------------------------------------------------

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det<T: ExactInt>(m: &Matrix<T>) -> T {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return T::one();
    }
    let mut a = m.clone();
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a.get(k, k).is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a.get(i, k).is_zero()) else {
                return T::zero();
            };
            a.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (a.get(i, j).clone() * a.get(k, k).clone()
                    - a.get(i, k).clone() * a.get(k, j).clone())
                    / prev.clone();
                a.set(i, j, v);
            }
        }
        prev = a.get(k, k).clone();
    }
    sign * a.get(n - 1, n - 1).clone()
}

/// Inverse over the rationals; `None` when singular.
pub fn inverse<T: ExactInt>(m: &Matrix<Ratio<T>>) -> Option<Matrix<Ratio<T>>> {
    assert!(m.is_square());
    let n = m.rows;
    let mut a = m.clone();
    let mut inv = Matrix::<Ratio<T>>::identity(n);
    for c in 0..n {
        let p = (c..n).find(|&i| !a.get(i, c).is_zero())?;
        a.swap_rows(c, p);
        inv.swap_rows(c, p);
        let piv = a.get(c, c).clone();
        for j in 0..n {
            let x = a.get(c, j).clone() / piv.clone();
            a.set(c, j, x);
            let y = inv.get(c, j).clone() / piv.clone();
            inv.set(c, j, y);
        }
        for i in 0..n {
            if i == c || a.get(i, c).is_zero() {
                continue;
            }
            let f = a.get(i, c).clone();
            for j in 0..n {
                let x = a.get(i, j).clone() - f.clone() * a.get(c, j).clone();
                a.set(i, j, x);
                let y = inv.get(i, j).clone() - f.clone() * inv.get(c, j).clone();
                inv.set(i, j, y);
            }
        }
    }
    Some(inv)
}

/// Solves `m x = b` for a matrix of full column rank; `None` if inconsistent.
pub fn solve<T: ExactInt>(m: &Matrix<Ratio<T>>, b: &[Ratio<T>]) -> Option<Vec<Ratio<T>>> {
    let (n, k) = (m.rows, m.cols);
    assert_eq!(b.len(), n);
    let mut a = m.hstack(&Matrix::from_cols(n, &[b.to_vec()]));
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..n).find(|&i| !a.get(i, c).is_zero()) else { continue };
        a.swap_rows(r, p);
        let piv = a.get(r, c).clone();
        for j in 0..=k {
            let x = a.get(r, j).clone() / piv.clone();
            a.set(r, j, x);
        }
        for i in 0..n {
            if i != r && !a.get(i, c).is_zero() {
                let f = a.get(i, c).clone();
                for j in 0..=k {
                    let x = a.get(i, j).clone() - f.clone() * a.get(r, j).clone();
                    a.set(i, j, x);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if (r..n).any(|i| !a.get(i, k).is_zero()) {
        return None;
    }
    if pivots.len() < k {
        // not of full column rank: pick the solution with free variables zero
    }
    let mut x = vec![Ratio::zero(); k];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = a.get(row, k).clone();
    }
    Some(x)
}

/// Rank over the rationals.
pub fn rank<T: ExactInt>(m: &Matrix<Ratio<T>>) -> usize {
    let (n, k) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..n).find(|&i| !a.get(i, c).is_zero()) else { continue };
        a.swap_rows(r, p);
        for i in r + 1..n {
            if !a.get(i, c).is_zero() {
                let f = a.get(i, c).clone() / a.get(r, c).clone();
                for j in c..k {
                    let x = a.get(i, j).clone() - f.clone() * a.get(r, j).clone();
                    a.set(i, j, x);
                }
            }
        }
        r += 1;
    }
    r
}

/// Signature `(n_plus, n_minus)` of a symmetric rational matrix, by congruence
/// diagonalisation.
pub fn signature<T: ExactInt>(m: &Matrix<Ratio<T>>) -> (usize, usize) {
    assert!(m.is_symmetric());
    let mut a = m.clone();
    let n = a.rows;
    let (mut pos, mut neg) = (0, 0);
    let mut active: Vec<usize> = (0..n).collect();
    while let Some(&first) = active.first() {
        let _ = first;
        // a usable diagonal pivot, or create one from an off-diagonal entry
        let piv = active.iter().copied().find(|&i| !a.get(i, i).is_zero());
        let p = match piv {
            Some(p) => p,
            None => {
                let mut found = None;
                'f: for &i in &active {
                    for &j in &active {
                        if i != j && !a.get(i, j).is_zero() {
                            found = Some((i, j));
                            break 'f;
                        }
                    }
                }
                let Some((i, j)) = found else { break };
                // e_i <- e_i + e_j makes the diagonal entry 2 a_ij (+ a_jj = 0)
                for c in 0..n {
                    let x = a.get(i, c).clone() + a.get(j, c).clone();
                    a.set(i, c, x);
                }
                for r in 0..n {
                    let x = a.get(r, i).clone() + a.get(r, j).clone();
                    a.set(r, i, x);
                }
                i
            }
        };
        let d = a.get(p, p).clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for &i in &active {
            if i == p || a.get(i, p).is_zero() {
                continue;
            }
            let f = a.get(i, p).clone() / d.clone();
            for c in 0..n {
                let x = a.get(i, c).clone() - f.clone() * a.get(p, c).clone();
                a.set(i, c, x);
            }
            for r in 0..n {
                let x = a.get(r, i).clone() - f.clone() * a.get(r, p).clone();
                a.set(r, i, x);
            }
        }
        active.retain(|&i| i != p);
    }
    (pos, neg)
}

/// Lowest common multiple of a list (1 for the empty list).
pub fn lcm_all<T: ExactInt>(xs: impl IntoIterator<Item = T>) -> T {
    xs.into_iter().fold(T::one(), |acc, x| if x.is_zero() { acc } else { acc.lcm(&x) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn m(rows: Vec<Vec<i64>>) -> Matrix<i64> {
        Matrix::from_rows(rows)
    }

    #[test]
    fn hnf_is_canonical() {
        let a = m(vec![vec![2, 4, 6], vec![1, 3, 5]]);
        let b = m(vec![vec![4, 2], vec![3, 1]]);
        assert_eq!(hnf_cols(&a), hnf_cols(&b));
        let h = hnf_cols(&a);
        assert_eq!(h.cols(), 2);
    }

    #[test]
    fn smith_reconstructs() {
        let a = m(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = smith(&a);
        assert_eq!(s.d, vec![2, 6, 12]);
        let d = s.u.mul(&a).mul(&s.v);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(*d.get(i, j), if i == j { s.d[i] } else { 0 });
            }
        }
        assert_eq!(det(&s.u).abs(), 1);
        assert_eq!(det(&s.v).abs(), 1);
    }

    #[test]
    fn generic_over_bigint() {
        let a: Matrix<BigInt> = m(vec![vec![-2, 1], vec![1, -2]]).map(|&x| BigInt::from(x));
        assert_eq!(det(&a), BigInt::from(3));
        assert_eq!(elementary_divisors(&a), vec![BigInt::from(1), BigInt::from(3)]);
        let inv = inverse(&to_rational(&a)).unwrap();
        assert_eq!(inv.mul(&to_rational(&a)), Matrix::identity(2));
    }

    #[test]
    fn signature_of_hyperbolic_plane() {
        let u = to_rational(&m(vec![vec![0, 1], vec![1, 0]]));
        assert_eq!(signature(&u), (1, 1));
        let e = to_rational(&m(vec![vec![2, 1], vec![1, -2]]));
        assert_eq!(signature(&e), (1, 1));
    }
}
