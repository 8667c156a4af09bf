//! Exact integer matrices: column Hermite form, integer solving, kernels,
//! Smith invariants, and ranks over GF(2).
//!
//! Entries are `i128` during elimination and every operation is checked, so an
//! overflow surfaces as [`Error::Overflow`] rather than a wrong answer.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

fn add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(Error::Overflow)
}

fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

/// `(g, s, t)` with `g = gcd(a, b) >= 0` and `s a + t b = g`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        Self::from_rows_with_cols(rows, cols)
    }

    /// Like [`IntMatrix::from_rows`] but keeps the column count when `rows` is empty.
    pub fn from_rows_with_cols<R: AsRef<[i64]>>(rows: &[R], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged matrix rows");
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, v as i128);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i128 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i128) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: i128) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[i128] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i128> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Contract(format!(
                "matrix product {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = add(out.get(i, j), mul(a, other.get(k, j))?)?;
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[i128]) -> Result<Vec<i128>> {
        if x.len() != self.cols {
            return Err(Error::Contract("vector length does not match matrix".into()));
        }
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .try_fold(0i128, |acc, (&a, &b)| add(acc, mul(a, b)?))
            })
            .collect()
    }

    /// `col[dst] += k * col[src]`
    fn col_axpy(&mut self, dst: usize, src: usize, k: i128) -> Result<()> {
        if k == 0 {
            return Ok(());
        }
        for i in 0..self.rows {
            let v = add(self.get(i, dst), mul(k, self.get(i, src))?)?;
            self.set(i, dst, v);
        }
        Ok(())
    }

    /// Replace columns `a, b` by `(s a + t b, u a + v b)`.
    fn col_combine(&mut self, a: usize, b: usize, s: i128, t: i128, u: i128, v: i128) -> Result<()> {
        for i in 0..self.rows {
            let (x, y) = (self.get(i, a), self.get(i, b));
            self.set(i, a, add(mul(s, x)?, mul(t, y)?)?);
            self.set(i, b, add(mul(u, x)?, mul(v, y)?)?);
        }
        Ok(())
    }

    fn col_negate(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = self.get(i, j);
            self.set(i, j, -v);
        }
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn row_combine(&mut self, a: usize, b: usize, s: i128, t: i128, u: i128, v: i128) -> Result<()> {
        for j in 0..self.cols {
            let (x, y) = (self.get(a, j), self.get(b, j));
            self.set(a, j, add(mul(s, x)?, mul(t, y)?)?);
            self.set(b, j, add(mul(u, x)?, mul(v, y)?)?);
        }
        Ok(())
    }

    fn row_swap(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Column Hermite form `A U = H`, `U` unimodular.
///
/// `H` is in column echelon form: pivot `k` sits in row `pivot_rows[k]`, is
/// positive, the rows of pivots increase with `k`, and entries left of a pivot
/// in its row are reduced into `[0, pivot)`. Columns `rank..` of `H` are zero,
/// so the matching columns of `U` span the integer kernel of `A`.
#[derive(Debug, Clone)]
pub struct ColumnHermite {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub pivot_rows: Vec<usize>,
}

impl ColumnHermite {
    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }
}

pub fn column_hermite(a: &IntMatrix) -> Result<ColumnHermite> {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.cols);
    let mut pivot_rows = Vec::new();
    let mut k = 0;
    for r in 0..a.rows {
        if k == a.cols {
            break;
        }
        for j in k + 1..a.cols {
            let (x, y) = (h.get(r, k), h.get(r, j));
            if y == 0 {
                continue;
            }
            let (g, s, t) = ext_gcd(x, y);
            let (xg, yg) = (x / g, y / g);
            // [s -yg; t xg] has determinant s xg + t yg = 1
            h.col_combine(k, j, s, t, -yg, xg)?;
            u.col_combine(k, j, s, t, -yg, xg)?;
        }
        let piv = h.get(r, k);
        if piv == 0 {
            continue;
        }
        if piv < 0 {
            h.col_negate(k);
            u.col_negate(k);
        }
        let piv = h.get(r, k);
        for j in 0..k {
            let q = h.get(r, j).div_euclid(piv);
            h.col_axpy(j, k, -q)?;
            u.col_axpy(j, k, -q)?;
        }
        pivot_rows.push(r);
        k += 1;
    }
    Ok(ColumnHermite { h, u, pivot_rows })
}

/// Integer solution set `{x0 + K t}` of `A x = b`.
#[derive(Debug, Clone)]
pub struct IntegerSolution {
    pub particular: Vec<i128>,
    pub kernel: Vec<Vec<i128>>,
}

/// Solve `A x = b` over the integers.
///
/// The particular solution is `U y` where `y` is obtained by forward
/// substitution on the Hermite form with every free coordinate set to zero,
/// so it depends only on `A` and `b`.
pub fn solve_integer(a: &IntMatrix, b: &[i128]) -> Result<IntegerSolution> {
    if b.len() != a.rows {
        return Err(Error::Contract("right-hand side length does not match matrix".into()));
    }
    let herm = column_hermite(a)?;
    let rank = herm.rank();
    let mut y = vec![0i128; a.cols];
    let mut k = 0;
    for (r, &br) in b.iter().enumerate().take(a.rows) {
        let mut acc = br;
        for (j, &yj) in y.iter().enumerate().take(k) {
            acc = add(acc, -mul(herm.h.get(r, j), yj)?)?;
        }
        if k < rank && herm.pivot_rows[k] == r {
            let piv = herm.h.get(r, k);
            if acc % piv != 0 {
                return Err(Error::Inconsistent(format!(
                    "row {r} needs {acc} to be divisible by {piv}"
                )));
            }
            y[k] = acc / piv;
            k += 1;
        } else if acc != 0 {
            return Err(Error::Inconsistent(format!(
                "row {r} has residual {acc} outside the column span"
            )));
        }
    }
    let particular = herm.u.mul_vec(&y)?;
    let kernel = (rank..a.cols).map(|j| herm.u.column(j)).collect();
    Ok(IntegerSolution { particular, kernel })
}

/// Basis of the integer kernel of `A`, as column vectors.
pub fn integer_kernel(a: &IntMatrix) -> Result<Vec<Vec<i128>>> {
    let herm = column_hermite(a)?;
    Ok((herm.rank()..a.cols).map(|j| herm.u.column(j)).collect())
}

/// Nonzero Smith invariants `d_1 | d_2 | ...`, all positive.
pub fn smith_invariants(a: &IntMatrix) -> Result<Vec<i128>> {
    let mut m = a.clone();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.rows.min(m.cols) {
        // smallest nonzero entry in the remaining block as pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..m.rows {
            for j in t..m.cols {
                let v = m.get(i, j);
                if v != 0 && best.is_none_or(|(bi, bj)| v.abs() < m.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.row_swap(t, bi);
        m.col_swap(t, bj);
        loop {
            let mut changed = false;
            for i in t + 1..m.rows {
                let (x, y) = (m.get(t, t), m.get(i, t));
                if y == 0 {
                    continue;
                }
                if y % x == 0 {
                    m.row_combine(t, i, 1, 0, -(y / x), 1)?;
                } else {
                    let (g, s, tt) = ext_gcd(x, y);
                    m.row_combine(t, i, s, tt, -y / g, x / g)?;
                }
                changed = true;
            }
            for j in t + 1..m.cols {
                let (x, y) = (m.get(t, t), m.get(t, j));
                if y == 0 {
                    continue;
                }
                if y % x == 0 {
                    m.col_combine(t, j, 1, 0, -(y / x), 1)?;
                } else {
                    let (g, s, tt) = ext_gcd(x, y);
                    m.col_combine(t, j, s, tt, -y / g, x / g)?;
                }
                changed = true;
            }
            if !changed {
                break;
            }
        }
        diag.push(m.get(t, t).abs());
        t += 1;
    }
    // enforce the divisibility chain: (a, b) -> (gcd, lcm)
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let (g, _, _) = ext_gcd(diag[i], diag[j]);
            let l = mul(diag[i] / g, diag[j])?;
            diag[i] = g;
            diag[j] = l;
        }
    }
    Ok(diag)
}

pub fn rank(a: &IntMatrix) -> Result<usize> {
    Ok(column_hermite(a)?.rank())
}

/// Rank of the matrix reduced mod 2.
pub fn gf2_rank(a: &IntMatrix) -> usize {
    let mut rows: Vec<Vec<bool>> = (0..a.rows)
        .map(|i| a.row(i).iter().map(|v| v.rem_euclid(2) == 1).collect())
        .collect();
    let mut rank = 0;
    for col in 0..a.cols {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][col]) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[col] {
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}
