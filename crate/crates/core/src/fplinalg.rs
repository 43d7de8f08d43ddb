//! Dense linear algebra over a prime field F_p.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("row has {found} entries, expected {expected}")]
    Width { expected: usize, found: usize },
    #[error("vector is not in the span of the given rows")]
    NotInSpan,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Reduce an integer into `[0, p)`.
pub fn residue(x: i64, p: u64) -> u64 {
    x.rem_euclid(p as i64) as u64
}

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Multiplicative inverse of a nonzero residue.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat
    let mut base = a % p;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Row-major matrix with entries in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixFp {
    p: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl MatrixFp {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Result<Self, LinalgError> {
        if !is_prime(p) {
            return Err(LinalgError::NotPrime(p));
        }
        Ok(MatrixFp {
            p,
            rows,
            cols,
            entries: vec![0; rows * cols],
        })
    }

    pub fn identity(p: u64, n: usize) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(p, n, n)?;
        for i in 0..n {
            m.set(i, i, 1);
        }
        Ok(m)
    }

    /// Build from integer rows, reducing mod p.
    pub fn from_rows<R: AsRef<[i64]>>(p: u64, cols: usize, rows: &[R]) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(p, rows.len(), cols)?;
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(LinalgError::Width {
                    expected: cols,
                    found: r.len(),
                });
            }
            for (j, &x) in r.iter().enumerate() {
                m.entries[i * cols + j] = residue(x, p);
            }
        }
        Ok(m)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.entries[i * self.cols + j] = v % self.p;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.row(i).iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> MatrixFp {
        let mut t = MatrixFp {
            p: self.p,
            rows: self.cols,
            cols: self.rows,
            entries: vec![0; self.entries.len()],
        };
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    /// Row vector times matrix.
    pub fn left_mul(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![0u64; self.cols];
        for (i, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(self.row(i)) {
                *o = (*o + mulmod(c, x, self.p)) % self.p;
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> MatrixFp {
        let mut entries = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            entries.extend_from_slice(self.row(i));
        }
        MatrixFp {
            p: self.p,
            rows: idx.len(),
            cols: self.cols,
            entries,
        }
    }

    /// Comma-separated rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(u64::to_string).collect();
            s.push_str(&line.join(","));
            s.push('\n');
        }
        s
    }

    /// Reduced row echelon form, rank and pivot columns.
    pub fn rref(&self) -> (MatrixFp, usize, Vec<usize>) {
        let mut m = self.clone();
        let p = self.p;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..m.cols {
                    m.entries.swap(piv * m.cols + j, r * m.cols + j);
                }
            }
            let inv = inv_mod(m.get(r, c), p);
            for j in c..m.cols {
                let v = mulmod(m.get(r, j), inv, p);
                m.entries[r * m.cols + j] = v;
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c);
                if f == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let v = (m.get(i, j) + p - mulmod(f, m.get(r, j), p)) % p;
                    m.entries[i * m.cols + j] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, r, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Basis of `{c : c M = 0}` in reduced echelon form, so rows of `M` that
    /// are zero show up as unit vectors.
    pub fn left_kernel_basis(&self) -> Vec<Vec<u64>> {
        let n = self.rows;
        // [M | I] reduced; rows whose M part vanishes give the kernel.
        let mut aug = MatrixFp {
            p: self.p,
            rows: n,
            cols: self.cols + n,
            entries: vec![0; n * (self.cols + n)],
        };
        for i in 0..n {
            for j in 0..self.cols {
                aug.entries[i * aug.cols + j] = self.get(i, j);
            }
            aug.entries[i * aug.cols + self.cols + i] = 1;
        }
        let (red, _, _) = aug.rref();
        let kernel: Vec<Vec<i64>> = (0..n)
            .filter(|&i| red.row(i)[..self.cols].iter().all(|&x| x == 0))
            .map(|i| red.row(i)[self.cols..].iter().map(|&x| x as i64).collect())
            .collect();
        if kernel.is_empty() {
            return Vec::new();
        }
        let k = MatrixFp::from_rows(self.p, n, &kernel).expect("prime already checked");
        // Echelonize with the last coordinate as the leading one, so that later
        // rows of M are eliminated first and zero rows surface as unit vectors.
        let rev = k.reverse_columns();
        let (r, rank, _) = rev.rref();
        let mut out: Vec<Vec<u64>> = (0..rank)
            .map(|i| r.row(i).iter().rev().copied().collect())
            .collect();
        out.sort_by_key(|v| v.iter().rposition(|&x| x != 0));
        out
    }

    fn reverse_columns(&self) -> MatrixFp {
        let mut m = self.clone();
        for i in 0..self.rows {
            m.entries[i * self.cols..(i + 1) * self.cols].reverse();
        }
        m
    }

    /// Greedy maximal independent subset of rows, in input order.
    pub fn select_independent_rows(&self) -> Vec<usize> {
        let mut e = Echelon::new(self.p, self.cols);
        (0..self.rows).filter(|&i| e.insert(self.row(i))).collect()
    }

    /// Coefficients `a` with `sum a_k row(basis_rows[k]) = v`.
    pub fn express_in_basis(&self, basis_rows: &[usize], v: &[u64]) -> Result<Vec<u64>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::Width {
                expected: self.cols,
                found: v.len(),
            });
        }
        // Solve a B = v, i.e. B^T a^T = v^T, by reducing [B^T | v^T].
        let b = self.select_rows(basis_rows);
        let k = basis_rows.len();
        let mut aug = MatrixFp {
            p: self.p,
            rows: self.cols,
            cols: k + 1,
            entries: vec![0; self.cols * (k + 1)],
        };
        for j in 0..self.cols {
            for i in 0..k {
                aug.entries[j * (k + 1) + i] = b.get(i, j);
            }
            aug.entries[j * (k + 1) + k] = v[j] % self.p;
        }
        let (red, rank, pivots) = aug.rref();
        if pivots.contains(&k) {
            return Err(LinalgError::NotInSpan);
        }
        let mut a = vec![0u64; k];
        for (r, &c) in pivots.iter().enumerate().take(rank) {
            a[c] = red.get(r, k);
        }
        if b.left_mul(&a) != v.iter().map(|x| x % self.p).collect::<Vec<_>>() {
            return Err(LinalgError::NotInSpan);
        }
        Ok(a)
    }
}

impl fmt::Debug for MatrixFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatrixFp(p={}, {}x{})", self.p, self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Incrementally built echelon basis of a row space.
#[derive(Debug, Clone)]
pub struct Echelon {
    p: u64,
    cols: usize,
    // (pivot column, normalized row)
    basis: Vec<(usize, Vec<u64>)>,
}

impl Echelon {
    pub fn new(p: u64, cols: usize) -> Self {
        Echelon {
            p,
            cols,
            basis: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Reduce `v` against the basis in place.
    pub fn reduce(&self, v: &mut [u64]) {
        let p = self.p;
        for (c, row) in &self.basis {
            let f = v[*c];
            if f == 0 {
                continue;
            }
            for (x, &y) in v.iter_mut().zip(row) {
                if y != 0 {
                    *x = (*x + p - mulmod(f, y, p)) % p;
                }
            }
        }
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Add `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let mut w: Vec<u64> = v.iter().map(|x| x % self.p).collect();
        self.reduce(&mut w);
        let Some(c) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(w[c], self.p);
        for x in &mut w {
            *x = mulmod(*x, inv, self.p);
        }
        self.basis.push((c, w));
        true
    }
}

pub fn rref(m: &MatrixFp) -> (MatrixFp, usize, Vec<usize>) {
    m.rref()
}

pub fn left_kernel_basis(m: &MatrixFp) -> Vec<Vec<u64>> {
    m.left_kernel_basis()
}

pub fn select_independent_rows(m: &MatrixFp) -> Vec<usize> {
    m.select_independent_rows()
}

pub fn express_in_basis(m: &MatrixFp, basis_rows: &[usize], row: &[u64]) -> Result<Vec<u64>, LinalgError> {
    m.express_in_basis(basis_rows, row)
}
