//! Linear algebra over a prime field F_p.

use crate::arith::{inv_mod, mul_mod};

pub type Vector = Vec<u64>;
pub type Mat = Vec<Vec<u64>>;

fn axpy(y: &mut [u64], c: u64, x: &[u64], p: u64) {
    if c == 0 {
        return;
    }
    for (a, &b) in y.iter_mut().zip(x) {
        *a = (*a + mul_mod(c, b, p)) % p;
    }
}

/// A subspace of F_p^dim kept in echelon form; each basis row has a leading 1 at its pivot.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub p: u64,
    pub dim: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn new(p: u64, dim: usize) -> Self {
        Subspace { p, dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_vectors<'a, I: IntoIterator<Item = &'a Vector>>(p: u64, dim: usize, vs: I) -> Self {
        let mut s = Subspace::new(p, dim);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    /// Reduces `v` against the basis; returns the residual and the coefficients used.
    pub fn reduce_with_coeffs(&self, v: &[u64]) -> (Vector, Vec<u64>) {
        let p = self.p;
        let mut r = v.to_vec();
        let mut coeffs = vec![0u64; self.rows.len()];
        for (k, (row, &piv)) in self.rows.iter().zip(&self.pivots).enumerate() {
            let c = r[piv];
            if c != 0 {
                coeffs[k] = c;
                axpy(&mut r, p - c, row, p);
            }
        }
        (r, coeffs)
    }

    pub fn reduce(&self, v: &[u64]) -> Vector {
        self.reduce_with_coeffs(v).0
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&c| c == 0)
    }

    /// Inserts `v`; returns the normalized new basis row if the rank grew.
    pub fn insert(&mut self, v: &[u64]) -> Option<Vector> {
        let mut r = self.reduce(v);
        let piv = r.iter().position(|&c| c != 0)?;
        let inv = inv_mod(r[piv], self.p).unwrap();
        for c in r.iter_mut() {
            *c = mul_mod(*c, inv, self.p);
        }
        self.rows.push(r.clone());
        self.pivots.push(piv);
        Some(r)
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn equals(&self, other: &Subspace) -> bool {
        self.rank() == other.rank() && self.is_subspace_of(other)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for r in other.basis() {
            s.insert(r);
        }
        s
    }

    /// Coordinates of `v` with respect to the echelon basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[u64]) -> Option<Vec<u64>> {
        let (r, c) = self.reduce_with_coeffs(v);
        if r.iter().all(|&x| x == 0) {
            Some(c)
        } else {
            None
        }
    }
}

/// Null space of the linear map given by `rows` (m x n), as a list of basis vectors of F_p^n.
pub fn nullspace(rows: &[Vector], n: usize, p: u64) -> Vec<Vector> {
    let mut m: Mat = rows.to_vec();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(k) = (r..m.len()).find(|&k| m[k][c] != 0) else { continue };
        m.swap(r, k);
        let inv = inv_mod(m[r][c], p).unwrap();
        for x in m[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pr = m[r].clone();
        for (k, row) in m.iter_mut().enumerate() {
            if k != r && row[c] != 0 {
                let f = p - row[c];
                axpy(row, f, &pr, p);
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let mut out = Vec::new();
    for free in (0..n).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![0u64; n];
        v[free] = 1;
        for (i, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = (p - m[i][free]) % p;
        }
        out.push(v);
    }
    out
}

pub fn rank(rows: &[Vector], p: u64) -> usize {
    let n = rows.first().map_or(0, |r| r.len());
    Subspace::from_vectors(p, n, rows.iter()).rank()
}

pub fn mat_mul(a: &Mat, b: &Mat, p: u64) -> Mat {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            let mut out = vec![0u64; n];
            for (k, &x) in row.iter().enumerate() {
                axpy(&mut out, x, &b[k], p);
            }
            out
        })
        .collect()
}

pub fn mat_vec(a: &Mat, v: &[u64], p: u64) -> Vector {
    a.iter()
        .map(|row| row.iter().zip(v).fold(0, |acc, (&x, &y)| (acc + mul_mod(x, y, p)) % p))
        .collect()
}

pub fn transpose(a: &Mat) -> Mat {
    let n = a.first().map_or(0, |r| r.len());
    (0..n).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

pub fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect()
}

/// Characteristic polynomial det(tI - A), little-endian, via Hessenberg reduction.
pub fn charpoly(a: &Mat, p: u64) -> Vec<u64> {
    let n = a.len();
    let mut h: Mat = a.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| h[i][m - 1] != 0) else { continue };
        if i != m {
            h.swap(i, m);
            for row in h.iter_mut() {
                row.swap(i, m);
            }
        }
        let inv = inv_mod(h[m][m - 1], p).unwrap();
        for i in m + 1..n {
            let u = mul_mod(h[i][m - 1], inv, p);
            if u == 0 {
                continue;
            }
            for j in 0..n {
                let t = mul_mod(u, h[m][j], p);
                h[i][j] = (h[i][j] + p - t) % p;
            }
            for row in h.iter_mut() {
                let t = mul_mod(u, row[i], p);
                row[m] = (row[m] + t) % p;
            }
        }
    }
    // polys[k] = charpoly of the leading k x k block
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 0..n {
        let mut next = crate::poly_fp::mul(&polys[k], &[(p - h[k][k]) % p, 1], p);
        let mut prod = 1u64;
        for i in (0..k).rev() {
            prod = mul_mod(prod, h[i + 1][i], p);
            let c = mul_mod(prod, h[i][k], p);
            if c != 0 {
                let term = crate::poly_fp::scale(&polys[i], c, p);
                next = crate::poly_fp::sub(&next, &term, p);
            }
        }
        polys.push(next);
    }
    let mut out = polys.pop().unwrap();
    out.resize(n + 1, 0);
    out
}

/// Incremental affine system A x = b over F_p that can explain inconsistency.
///
/// Each added equation gets an index; an inconsistency is reported as a combination of
/// equation indices whose left sides cancel and whose right sides do not.
#[derive(Clone, Debug)]
pub struct AffineSystem {
    p: u64,
    n: usize,
    pivots: Vec<(usize, Vector, u64, Vec<(usize, u64)>)>,
    count: usize,
}

impl AffineSystem {
    pub fn new(p: u64, n: usize) -> Self {
        AffineSystem { p, n, pivots: Vec::new(), count: 0 }
    }

    pub fn equations(&self) -> usize {
        self.count
    }

    /// Adds `lhs . x = rhs`. Returns the inconsistency combination if one arises.
    pub fn add(&mut self, lhs: &[u64], rhs: u64) -> Result<(), Vec<(usize, u64)>> {
        let p = self.p;
        let idx = self.count;
        self.count += 1;
        let mut l = lhs.to_vec();
        let mut r = rhs % p;
        let mut combo: Vec<(usize, u64)> = vec![(idx, 1)];
        for (col, prow, prhs, pcombo) in &self.pivots {
            let c = l[*col];
            if c == 0 {
                continue;
            }
            let f = p - c;
            axpy(&mut l, f, prow, p);
            r = (r + mul_mod(f, *prhs, p)) % p;
            for &(i, w) in pcombo {
                combo.push((i, mul_mod(f, w, p)));
            }
        }
        let Some(col) = l.iter().position(|&c| c != 0) else {
            if r == 0 {
                return Ok(());
            }
            return Err(compact(combo, p));
        };
        let inv = inv_mod(l[col], p).unwrap();
        for x in l.iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        r = mul_mod(r, inv, p);
        let combo = compact(combo, p).into_iter().map(|(i, w)| (i, mul_mod(w, inv, p))).collect();
        self.pivots.push((col, l, r, combo));
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// A particular solution with free variables set to zero.
    pub fn solution(&self) -> Vector {
        let p = self.p;
        let mut x = vec![0u64; self.n];
        for (col, row, rhs, _) in self.pivots.iter().rev() {
            let mut v = *rhs;
            for (k, &a) in row.iter().enumerate() {
                if k != *col && a != 0 {
                    v = (v + p - mul_mod(a, x[k], p)) % p;
                }
            }
            x[*col] = v;
        }
        x
    }
}

fn compact(mut combo: Vec<(usize, u64)>, p: u64) -> Vec<(usize, u64)> {
    combo.sort_unstable_by_key(|t| t.0);
    let mut out: Vec<(usize, u64)> = Vec::new();
    for (i, w) in combo {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 = (last.1 + w) % p,
            _ => out.push((i, w)),
        }
    }
    out.retain(|t| t.1 != 0);
    out
}
