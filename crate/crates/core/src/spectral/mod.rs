//! Combinatorial Laplacians, spectral density functions, exact Betti
//! numbers and the limiting spectral measures of regular trees and lattices.
//!
//! The limit measures are graph analogs of a Plancherel measure: the
//! spectral measure of the universal cover.

mod limits;
mod rank;

use std::fmt::Write as _;

use faer::{Mat, Side};

pub use limits::{kesten_mckay_adjacency_cdf, kesten_mckay_adjacency_density, LimitSpectralMeasure};
pub use rank::rank;

use crate::covers::{CellComplex, IntMatrix};
use crate::error::{domain, Error, Result};
use crate::graphs::RootedGraph;

/// Largest dense matrix handed to the eigensolver.
pub const MAX_DENSE: usize = 5000;

/// Eigenvalue membership tolerance in CDFs.
pub const CDF_TOL: f64 = 1e-9;

/// Dense real square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    pub n: usize,
    pub data: Vec<f64>,
}

impl RealMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum()
    }
}

impl From<&IntMatrix> for RealMatrix {
    fn from(m: &IntMatrix) -> Self {
        assert_eq!(m.rows, m.cols, "square matrix expected");
        Self { n: m.rows, data: m.data.iter().map(|&x| x as f64).collect() }
    }
}

fn transpose(m: &IntMatrix) -> IntMatrix {
    let mut t = IntMatrix::zeros(m.cols, m.rows);
    for r in 0..m.rows {
        for c in 0..m.cols {
            t.data[c * m.rows + r] = m.get(r, c);
        }
    }
    t
}

fn add_into(acc: &mut IntMatrix, m: &IntMatrix) {
    for (a, b) in acc.data.iter_mut().zip(&m.data) {
        *a += b;
    }
}

/// `Delta_k = d_{k+1} d_{k+1}^T + d_k^T d_k` on `k`-cochains.
pub fn laplacian(c: &CellComplex, k: usize) -> Result<IntMatrix> {
    let dim = c.dimension();
    if k > dim {
        return Err(Error::DegreeOutOfRange { k, dim });
    }
    let n = c.cell_count(k);
    let mut out = IntMatrix::zeros(n, n);
    if k < 2 {
        let up = c.boundary(k + 1)?;
        add_into(&mut out, &up.mul(&transpose(&up)));
    }
    if k > 0 {
        let down = c.boundary(k)?;
        add_into(&mut out, &transpose(&down).mul(&down));
    }
    Ok(out)
}

/// Graph Laplacian `D - A`. Loops contribute nothing.
pub fn graph_laplacian(g: &RootedGraph) -> IntMatrix {
    let n = g.vertex_count();
    let mut l = IntMatrix::zeros(n, n);
    for e in g.edges() {
        if e.is_loop() {
            continue;
        }
        l.add(e.u, e.u, 1);
        l.add(e.v, e.v, 1);
        l.add(e.u, e.v, -1);
        l.add(e.v, e.u, -1);
    }
    l
}

/// Adjacency matrix; a loop adds 2 to its diagonal entry.
pub fn adjacency(g: &RootedGraph) -> IntMatrix {
    let n = g.vertex_count();
    let mut a = IntMatrix::zeros(n, n);
    for e in g.edges() {
        a.add(e.u, e.v, 1);
        a.add(e.v, e.u, 1);
    }
    a
}

/// Full spectrum of a symmetric matrix, sorted nondecreasing.
pub fn eigenvalues(m: &RealMatrix) -> Result<Vec<f64>> {
    let n = m.n;
    if n > MAX_DENSE {
        return Err(Error::MatrixTooLarge(n));
    }
    let scale = m.data.iter().fold(1.0f64, |s, x| s.max(x.abs()));
    for i in 0..n {
        for j in 0..i {
            let defect = (m.get(i, j) - m.get(j, i)).abs();
            if defect > 1e-12 * scale {
                return Err(Error::NotSymmetric { row: i, col: j, defect });
            }
        }
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let a = Mat::<f64>::from_fn(n, n, |i, j| m.get(i, j));
    let mut ev = a.self_adjoint_eigenvalues(Side::Lower).map_err(|_| Error::NoConvergence)?;
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Sorted eigenvalues with a normalization (vertex count or cover index).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDensity {
    eigenvalues: Vec<f64>,
    normalization: f64,
}

impl SpectralDensity {
    pub fn new(mut eigenvalues: Vec<f64>, normalization: f64) -> Result<Self> {
        if !(normalization > 0.0 && normalization.is_finite()) {
            return Err(domain("normalization", format!("{normalization} is not positive")));
        }
        if eigenvalues.iter().any(|x| !x.is_finite()) {
            return Err(domain("eigenvalues", "non-finite value"));
        }
        eigenvalues.sort_by(f64::total_cmp);
        Ok(Self { eigenvalues, normalization })
    }

    /// Spectrum of a symmetric integer matrix, normalized by its size.
    pub fn of_matrix(m: &IntMatrix) -> Result<Self> {
        let ev = eigenvalues(&RealMatrix::from(m))?;
        Self::new(ev, m.rows.max(1) as f64)
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn with_normalization(&self, normalization: f64) -> Result<Self> {
        Self::new(self.eigenvalues.clone(), normalization)
    }

    /// Disjoint union of spectra; normalizations add.
    pub fn union(&self, other: &Self) -> Self {
        let mut ev = self.eigenvalues.clone();
        ev.extend_from_slice(&other.eigenvalues);
        Self::new(ev, self.normalization + other.normalization).expect("valid parts")
    }
}

/// `#{mu <= lambda} / N`, counting eigenvalues within `1e-9` above `lambda`.
pub fn spectral_cdf(sd: &SpectralDensity, lambda: f64) -> f64 {
    let count = sd.eigenvalues.partition_point(|&mu| mu <= lambda + CDF_TOL);
    count as f64 / sd.normalization
}

/// `b_k = #k-cells - rank d_k - rank d_{k+1}`, exact.
pub fn betti(c: &CellComplex, k: usize) -> Result<usize> {
    if k > 2 {
        return Err(Error::DegreeOutOfRange { k, dim: c.dimension() });
    }
    let rk = |j: usize| -> Result<usize> {
        if j == 0 || j > 2 {
            Ok(0)
        } else {
            Ok(rank(&c.boundary(j)?))
        }
    };
    Ok(c.cell_count(k) - rk(k)? - rk(k + 1)?)
}

/// `sup_grid (F(lambda) - F(0)) * (-log lambda)` with `F` the normalized CDF.
pub fn lueck_tail_statistic(sd: &SpectralDensity, grid: &[f64]) -> Result<f64> {
    let f0 = spectral_cdf(sd, 0.0);
    let mut best: f64 = 0.0;
    for &l in grid {
        if !(l > 0.0 && l < 1.0) {
            return Err(Error::GridOutOfRange(l));
        }
        best = best.max((spectral_cdf(sd, l) - f0) * -l.ln());
    }
    Ok(best)
}

/// Ceiling on the tail statistic for an integer Laplacian: the product of
/// the nonzero eigenvalues is a nonzero integer, so
/// `#{0 < mu <= lambda} * (-log lambda) <= size * log ||Delta||`.
pub fn lueck_ceiling(laplacian: &IntMatrix, normalization: f64) -> f64 {
    let norm = (0..laplacian.rows)
        .map(|r| (0..laplacian.cols).map(|c| laplacian.get(r, c).abs()).sum::<i64>())
        .max()
        .unwrap_or(0)
        .max(1) as f64;
    laplacian.rows as f64 / normalization * norm.ln()
}

/// Geometric grid of `count` points from `lo` to `hi`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count).map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp()).collect()
}

/// Uniform grid of `count` points on `[lo, hi]`.
pub fn uniform_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect()
}

/// `max_grid |F1 - F2|`.
pub fn kolmogorov_distance<F1: Fn(f64) -> f64, F2: Fn(f64) -> f64>(f1: F1, f2: F2, grid: &[f64]) -> Result<f64> {
    if grid.is_empty() {
        return Err(domain("grid", "empty"));
    }
    Ok(grid.iter().map(|&x| (f1(x) - f2(x)).abs()).fold(0.0, f64::max))
}

/// CSV `index,value`.
pub fn write_eigenvalues_csv(sd: &SpectralDensity) -> String {
    let mut out = String::from("index,value\n");
    for (i, v) in sd.eigenvalues.iter().enumerate() {
        writeln!(out, "{i},{v:.17e}").expect("string write");
    }
    out
}

/// CSV `lambda,F_empirical,F_limit,abs_diff`.
pub fn write_cdf_comparison_csv(sd: &SpectralDensity, limit: &LimitSpectralMeasure, grid: &[f64]) -> Result<String> {
    let mut out = String::from("lambda,F_empirical,F_limit,abs_diff\n");
    for &l in grid {
        let fe = spectral_cdf(sd, l);
        let fl = limit.cdf(l)?;
        writeln!(out, "{l:.17e},{fe:.17e},{fl:.17e},{:.17e}", (fe - fl).abs()).expect("string write");
    }
    Ok(out)
}
