//! Small dense complex linear algebra: row-major matrices, partially pivoted LU,
//! determinants and smallest singular values by inverse iteration.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
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

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Complex64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `Aᴴ x`
    pub fn adjoint_mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.rows);
        let mut out = vec![Complex64::new(0.0, 0.0); self.cols];
        for (i, xi) in x.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a.conj() * xi;
            }
        }
        out
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let src = other.row(k);
                for (o, b) in out.row_mut(i).iter_mut().zip(src) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn norm2(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(x: &mut [Complex64]) -> f64 {
    let n = norm2(x);
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
    n
}

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    lu: CMatrix,
    perm: Vec<usize>,
    swaps: usize,
    /// Pivots whose magnitude fell below the singularity threshold were
    /// replaced by the threshold so that solves stay finite.
    regularized: bool,
}

impl Lu {
    pub fn new(a: &CMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Input("LU needs a square matrix".into()));
        }
        if !a.is_finite() {
            return Err(Error::Input("matrix has non-finite entries".into()));
        }
        let n = a.rows;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        let threshold = f64::EPSILON * (n.max(1) as f64) * a.max_abs();
        let mut regularized = false;
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].norm();
            for i in k + 1..n {
                let v = lu[(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            if lu[(k, k)].norm() <= threshold {
                regularized = true;
                let t = if threshold > 0.0 { threshold } else { f64::MIN_POSITIVE };
                lu[(k, k)] = Complex64::new(t, 0.0);
            }
            let pivot_inv = lu[(k, k)].inv();
            let (upper, lower) = lu.data.split_at_mut((k + 1) * n);
            let pivot_row = &upper[k * n..(k + 1) * n];
            for row in lower.chunks_mut(n) {
                let factor = row[k] * pivot_inv;
                row[k] = factor;
                if factor == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (r, p) in row[k + 1..].iter_mut().zip(&pivot_row[k + 1..]) {
                    *r -= factor * p;
                }
            }
        }
        Ok(Self {
            n,
            lu,
            perm,
            swaps,
            regularized,
        })
    }

    /// True when a pivot vanished to working precision.
    pub fn is_singular(&self) -> bool {
        self.regularized
    }

    pub fn determinant(&self) -> Complex64 {
        let mut d = if self.swaps % 2 == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(-1.0, 0.0)
        };
        for i in 0..self.n {
            d *= self.lu[(i, i)];
        }
        d
    }

    /// `log det`, imaginary part taken modulo 2π.
    pub fn log_determinant(&self) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..self.n {
            s += self.lu[(i, i)].ln();
        }
        if self.swaps % 2 == 1 {
            s += Complex64::new(0.0, std::f64::consts::PI);
        }
        s
    }

    pub fn min_abs_pivot(&self) -> f64 {
        (0..self.n).map(|i| self.lu[(i, i)].norm()).fold(f64::INFINITY, f64::min)
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            let mut s = x[i];
            for j in 0..i {
                s -= row[j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let mut s = x[i];
            for j in i + 1..n {
                s -= row[j] * x[j];
            }
            x[i] = s / row[i];
        }
        x
    }

    /// Solve `Aᴴ x = b`.
    pub fn solve_adjoint(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        // Aᴴ = Uᴴ Lᴴ P, so solve Uᴴ y = b, Lᴴ w = y, x = Pᵀ w.
        let mut y = b.to_vec();
        for i in 0..n {
            let s = y[i] / self.lu[(i, i)].conj();
            y[i] = s;
            let row = self.lu.row(i);
            for j in i + 1..n {
                y[j] -= row[j].conj() * s;
            }
        }
        for i in (0..n).rev() {
            let s = y[i];
            let row = self.lu.row(i);
            for j in 0..i {
                y[j] -= row[j].conj() * s;
            }
        }
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = y[i];
        }
        x
    }
}

/// Result of a smallest-singular-value computation.
#[derive(Debug, Clone)]
pub struct SmallestSingular {
    /// `σ_min ≥ 0`; exactly zero when the LU factorization was singular.
    pub sigma: f64,
    /// Right singular vector (unit 2-norm), usable as a null vector.
    pub vector: Vec<Complex64>,
    pub singular: bool,
}

fn seed_vector(n: usize, shift: usize) -> Vec<Complex64> {
    // Deterministic, generic start vector.
    (0..n)
        .map(|i| {
            let t = (i + 1 + 7 * shift) as f64;
            Complex64::new((0.7 * t).sin() + 1.3, (1.1 * t).cos())
        })
        .collect()
}

/// Smallest singular value and right singular vector via inverse iteration on `AᴴA`.
pub fn smallest_singular(a: &CMatrix) -> Result<SmallestSingular> {
    let lu = Lu::new(a)?;
    smallest_singular_with(a, &lu)
}

pub fn smallest_singular_with(a: &CMatrix, lu: &Lu) -> Result<SmallestSingular> {
    let n = a.rows();
    if n == 0 {
        return Err(Error::Input("empty matrix".into()));
    }
    let mut x = seed_vector(n, 0);
    normalize(&mut x);
    let mut sigma = f64::INFINITY;
    for _ in 0..200 {
        let y = lu.solve_adjoint(&x);
        let mut z = lu.solve(&y);
        let growth = normalize(&mut z);
        if !growth.is_finite() || growth == 0.0 {
            return Err(Error::Consistency("inverse iteration broke down".into()));
        }
        let estimate = norm2(&a.mul_vec(&z));
        let dot: Complex64 = x.iter().zip(&z).map(|(p, q)| p.conj() * q).sum();
        let phase = if dot.norm() > 0.0 { dot / dot.norm() } else { Complex64::new(1.0, 0.0) };
        let diff = z
            .iter()
            .zip(&x)
            .map(|(p, q)| (p - q * phase).norm_sqr())
            .sum::<f64>()
            .sqrt();
        x = z;
        let done = (sigma.is_finite() && (estimate - sigma).abs() <= 1e-13 * sigma.max(1e-300)) || diff < 1e-12;
        sigma = estimate;
        if done {
            break;
        }
    }
    if lu.is_singular() {
        return Ok(SmallestSingular {
            sigma: 0.0,
            vector: x,
            singular: true,
        });
    }
    Ok(SmallestSingular {
        sigma,
        vector: x,
        singular: false,
    })
}

/// Largest singular value by power iteration on `AᴴA`.
pub fn largest_singular(a: &CMatrix) -> f64 {
    let mut x = seed_vector(a.cols(), 3);
    normalize(&mut x);
    let mut sigma = 0.0;
    for _ in 0..300 {
        let y = a.mul_vec(&x);
        let mut z = a.adjoint_mul_vec(&y);
        let s2 = normalize(&mut z);
        let s = s2.sqrt();
        x = z;
        if s == 0.0 || (s - sigma).abs() <= 1e-12 * s {
            sigma = s;
            break;
        }
        sigma = s;
    }
    sigma
}

/// Orthonormal basis of the `k`-dimensional right singular subspace belonging to
/// the `k` smallest singular values (block inverse iteration), with the
/// residual norms `‖A v_i‖`.
pub fn smallest_singular_subspace(a: &CMatrix, k: usize) -> Result<(Vec<Vec<Complex64>>, Vec<f64>)> {
    let n = a.rows();
    if k == 0 || k > n {
        return Err(Error::Input(format!("subspace dimension {k} invalid for n = {n}")));
    }
    let lu = Lu::new(a)?;
    let mut basis: Vec<Vec<Complex64>> = (0..k).map(|s| seed_vector(n, s)).collect();
    orthonormalize(&mut basis)?;
    for _ in 0..200 {
        let mut next: Vec<Vec<Complex64>> = basis
            .iter()
            .map(|v| lu.solve(&lu.solve_adjoint(v)))
            .collect();
        orthonormalize(&mut next)?;
        // Subspace change measured by the residual of projecting the new
        // basis onto the old one.
        let mut change: f64 = 0.0;
        for v in &next {
            let mut r = v.clone();
            for b in &basis {
                let c: Complex64 = b.iter().zip(v).map(|(p, q)| p.conj() * q).sum();
                for (ri, bi) in r.iter_mut().zip(b) {
                    *ri -= c * bi;
                }
            }
            change = change.max(norm2(&r));
        }
        basis = next;
        if change < 1e-12 {
            break;
        }
    }
    let residuals = basis.iter().map(|v| norm2(&a.mul_vec(v))).collect();
    Ok((basis, residuals))
}

fn orthonormalize(vs: &mut [Vec<Complex64>]) -> Result<()> {
    for i in 0..vs.len() {
        for j in 0..i {
            let c: Complex64 = vs[j].iter().zip(&vs[i]).map(|(p, q)| p.conj() * q).sum();
            let (head, tail) = vs.split_at_mut(i);
            for (t, h) in tail[0].iter_mut().zip(&head[j]) {
                *t -= c * h;
            }
        }
        if normalize(&mut vs[i]) == 0.0 {
            return Err(Error::Consistency("subspace iteration lost rank".into()));
        }
    }
    Ok(())
}
