//! Real symmetric banded eigensolver with partial eigenvector accumulation.
//!
//! The band is reduced to tridiagonal form by Givens rotations with bulge
//! chasing, then diagonalized by implicit QL. Only the eigenvector rows that
//! the caller asks for are accumulated, so a chain of a few thousand sites
//! costs `O(n^2 (b + rows))` instead of `O(n^3)`.

use crate::error::{Error, Result};

/// Symmetric matrix with half-bandwidth `b`; one extra diagonal of storage
/// holds the transient bulge.
#[derive(Clone, Debug)]
pub struct SymmetricBand {
    n: usize,
    b: usize,
    w: usize,
    data: Vec<f64>,
}

impl SymmetricBand {
    pub fn zeros(n: usize, b: usize) -> Self {
        let w = b + 1;
        Self {
            n,
            b,
            w,
            data: vec![0.0; n * (2 * w + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.b
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        let off = j as isize - i as isize;
        if off.unsigned_abs() > self.w {
            None
        } else {
            Some(i * (2 * self.w + 1) + (off + self.w as isize) as usize)
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |s| self.data[s])
    }

    #[inline]
    fn put(&mut self, i: usize, j: usize, v: f64) {
        match self.slot(i, j) {
            Some(s) => self.data[s] = v,
            None => debug_assert!(v == 0.0, "fill-in outside band at ({i},{j})"),
        }
    }

    /// Sets `A[i][j] = A[j][i] = v`; `|i - j|` must not exceed the bandwidth.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(
            i.abs_diff(j) <= self.b,
            "entry ({i},{j}) outside bandwidth {}",
            self.b
        );
        self.put(i, j, v);
        self.put(j, i, v);
    }

    /// `A <- G A G^T` with `G` acting on rows `p` and `q = p + 1`.
    fn rotate(&mut self, p: usize, c: f64, s: f64) {
        let q = p + 1;
        let lo = p.saturating_sub(self.w);
        let hi = (q + self.w + 1).min(self.n);
        for j in lo..hi {
            let x = self.get(p, j);
            let y = self.get(q, j);
            self.put(p, j, c * x + s * y);
            self.put(q, j, -s * x + c * y);
        }
        for i in lo..hi {
            let x = self.get(i, p);
            let y = self.get(i, q);
            self.put(i, p, c * x + s * y);
            self.put(i, q, -s * x + c * y);
        }
    }
}

/// Eigenvalues (ascending) and the selected rows of the eigenvector matrix.
#[derive(Clone, Debug)]
pub struct PartialEigen {
    pub values: Vec<f64>,
    pub rows: Vec<usize>,
    /// `rows.len() x n`, row-major: `vectors[r * n + k]` is component `rows[r]`
    /// of eigenvector `k`.
    pub vectors: Vec<f64>,
}

impl PartialEigen {
    #[inline]
    pub fn component(&self, row_slot: usize, k: usize) -> f64 {
        self.vectors[row_slot * self.values.len() + k]
    }
}

/// Transposed accumulator: `acc[i * r + slot]` holds `Q[rows[slot]][i]`.
struct Accumulator {
    r: usize,
    acc: Vec<f64>,
}

impl Accumulator {
    fn new(n: usize, rows: &[usize]) -> Self {
        let r = rows.len();
        let mut acc = vec![0.0; n * r];
        for (slot, &row) in rows.iter().enumerate() {
            acc[row * r + slot] = 1.0;
        }
        Self { r, acc }
    }

    /// Column update `Q <- Q G^T` on columns `p`, `q`.
    #[inline]
    fn rotate(&mut self, p: usize, q: usize, c: f64, s: f64) {
        let r = self.r;
        let (head, tail) = self.acc.split_at_mut(q * r);
        let colp = &mut head[p * r..p * r + r];
        let colq = &mut tail[..r];
        for (x, y) in colp.iter_mut().zip(colq.iter_mut()) {
            let (a, b) = (*x, *y);
            *x = c * a + s * b;
            *y = -s * a + c * b;
        }
    }

    #[inline]
    fn swap(&mut self, p: usize, q: usize) {
        let r = self.r;
        for slot in 0..r {
            self.acc.swap(p * r + slot, q * r + slot);
        }
    }
}

/// Diagonalizes a symmetric band matrix, returning all eigenvalues and the
/// eigenvector components on `rows`.
pub fn band_eig(mut a: SymmetricBand, rows: &[usize]) -> Result<PartialEigen> {
    let n = a.n;
    if let Some(&bad) = rows.iter().find(|&&r| r >= n) {
        return Err(Error::DimensionMismatch(format!(
            "requested row {bad} of a {n}-dimensional matrix"
        )));
    }
    let mut acc = Accumulator::new(n, rows);
    let b = a.b;

    if b > 1 {
        for k in 0..n.saturating_sub(2) {
            for r0 in (k + 2..=(k + b).min(n - 1)).rev() {
                let (mut row, mut col) = (r0, k);
                loop {
                    let x = a.get(row - 1, col);
                    let y = a.get(row, col);
                    if y == 0.0 {
                        break;
                    }
                    let rho = x.hypot(y);
                    let (c, s) = (x / rho, y / rho);
                    a.rotate(row - 1, c, s);
                    a.put(row, col, 0.0);
                    a.put(col, row, 0.0);
                    acc.rotate(row - 1, row, c, s);
                    let next = row + b;
                    if next >= n {
                        break;
                    }
                    col = row - 1;
                    row = next;
                }
            }
        }
    }

    let mut d: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    let mut e: Vec<f64> = (0..n)
        .map(|i| if i + 1 < n { a.get(i + 1, i) } else { 0.0 })
        .collect();
    tql2(&mut d, &mut e, &mut acc)?;

    let r = rows.len();
    let mut vectors = vec![0.0; r * n];
    for k in 0..n {
        for slot in 0..r {
            vectors[slot * n + k] = acc.acc[k * r + slot];
        }
    }
    Ok(PartialEigen {
        values: d,
        rows: rows.to_vec(),
        vectors,
    })
}

/// Symmetric tridiagonal eigen-decomposition (diagonal `d`, subdiagonal
/// `e[i] = T[i+1][i]`). Returns ascending eigenvalues and, when `rows` is
/// given, those rows of the eigenvector matrix.
pub fn tridiagonal_eig(d: &[f64], e: &[f64], rows: &[usize]) -> Result<PartialEigen> {
    let n = d.len();
    let mut band = SymmetricBand::zeros(n, 1);
    for i in 0..n {
        band.set(i, i, d[i]);
        if i + 1 < n {
            band.set(i + 1, i, e[i]);
        }
    }
    band_eig(band, rows)
}

/// Implicit QL with Wilkinson-type shifts (EISPACK `tql2` lineage).
fn tql2(d: &mut [f64], e: &mut [f64], acc: &mut Accumulator) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let max_iter = 60 * n.max(1);
    let mut iterations = 0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            loop {
                iterations += 1;
                if iterations > max_iter {
                    return Err(Error::NoConvergence(format!(
                        "tridiagonal QL exceeded {max_iter} iterations"
                    )));
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    // Z <- Z R with R mixing columns i, i+1
                    acc.rotate(i, i + 1, c, -s);
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        let mut p = d[i];
        for (j, &dj) in d.iter().enumerate().skip(i + 1) {
            if dj < p {
                k = j;
                p = dj;
            }
        }
        if k != i {
            d[k] = d[i];
            d[i] = p;
            acc.swap(i, k);
        }
    }
    Ok(())
}
