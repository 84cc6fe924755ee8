//! Density matrices, pure states and probability vectors in the fixed
//! incoherent basis, plus the dephasing and entrywise-modulus maps.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, projector, CMatrix, CVector};

/// Absolute tolerance for Hermiticity, trace and normalization checks.
pub const STATE_TOL: f64 = 1e-10;
/// Squared moduli at or below this are treated as exact zeros.
pub const AMPLITUDE_EPS: f64 = 1e-12;

/// A validated d x d density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: CMatrix,
}

impl DensityMatrix {
    /// Validates a raw square complex matrix.
    ///
    /// Checks run in the order shape, Hermiticity, trace, positivity so the
    /// reported violation is the most basic one.
    pub fn new(entries: CMatrix) -> Result<Self> {
        let (rows, cols) = entries.shape();
        if rows != cols {
            return Err(Error::NonSquare { rows, cols });
        }
        if rows == 0 {
            return Err(Error::Empty);
        }
        for i in 0..rows {
            for j in i..cols {
                let deviation = (entries[(i, j)] - entries[(j, i)].conj()).norm();
                if deviation > STATE_TOL {
                    return Err(Error::NotHermitian { row: i, col: j, deviation });
                }
            }
        }
        let trace = entries.trace().re;
        if (trace - 1.0).abs() > STATE_TOL {
            return Err(Error::TraceNotOne { trace });
        }
        let min_eigenvalue = hermitian_eigenvalues(&entries)[0];
        if min_eigenvalue < -STATE_TOL {
            return Err(Error::NotPsd { min_eigenvalue });
        }
        Ok(Self { entries })
    }

    /// Builds from row-major nested rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NonSquare { rows: n, cols: bad.len() });
        }
        Self::new(CMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Diagonal (incoherent) state from a probability vector.
    pub fn diagonal(weights: &ProbabilityVector) -> Self {
        let w = weights.as_slice();
        let entries = CMatrix::from_fn(w.len(), w.len(), |i, j| {
            if i == j {
                Complex64::new(w[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Self { entries }
    }

    /// The rank-1 state |psi><psi|.
    pub fn from_pure(psi: &PureStateVector) -> Self {
        Self { entries: projector(psi.amplitudes()) }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    /// Populations rho_ii.
    pub fn diagonal_entries(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.entries[(i, i)].re).collect()
    }

    /// rho (x) sigma.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix { entries: crate::linalg::kron(&self.entries, &other.entries) }
    }

    /// Relabels basis indices: output index `perm[i]` carries input index `i`.
    pub fn permuted(&self, perm: &[usize]) -> Result<DensityMatrix> {
        check_permutation(perm, self.dim())?;
        let d = self.dim();
        let mut out = CMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                out[(perm[i], perm[j])] = self.entries[(i, j)];
            }
        }
        Ok(DensityMatrix { entries: out })
    }

    /// True when every off-diagonal modulus is at most `STATE_TOL`.
    pub fn is_incoherent(&self) -> bool {
        let abs = entrywise_abs(self);
        let deph = dephase(self);
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| (abs[(i, j)] - deph.get(i, j).re).abs() <= STATE_TOL))
    }
}

fn check_permutation(perm: &[usize], d: usize) -> Result<()> {
    let mut seen = vec![false; d];
    if perm.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "permutation has length {} for dimension {d}",
            perm.len()
        )));
    }
    for &p in perm {
        if p >= d || seen[p] {
            return Err(Error::DimensionMismatch(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    Ok(())
}

/// A normalized pure state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureStateVector {
    amplitudes: CVector,
}

impl PureStateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Empty);
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self { amplitudes: CVector::from_vec(amplitudes) })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// Real nonnegative amplitudes sqrt(p_i) for a probability profile.
    pub fn from_profile(profile: &[f64]) -> Result<Self> {
        Self::from_real(&profile.iter().map(|p| p.max(0.0).sqrt()).collect::<Vec<_>>())
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm_sq: norm * norm });
        }
        Self::new(amplitudes.into_iter().map(|a| a / norm).collect())
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn amplitude(&self, i: usize) -> Complex64 {
        self.amplitudes[i]
    }

    /// |phi_i|^2 in basis order (the dephased vector).
    pub fn squared_moduli(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Squared moduli sorted nonincreasing, entries below `AMPLITUDE_EPS` zeroed.
    pub fn sorted_profile(&self) -> Vec<f64> {
        let mut p: Vec<f64> = self
            .squared_moduli()
            .into_iter()
            .map(|x| if x <= AMPLITUDE_EPS { 0.0 } else { x })
            .collect();
        p.sort_by(|a, b| b.total_cmp(a));
        p
    }

    /// Indices with nonzero amplitude, in basis order.
    pub fn support(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.amplitudes[i].norm_sqr() > AMPLITUDE_EPS).collect()
    }

    /// Support indices ordered by nonincreasing modulus; ties keep basis order.
    pub fn support_by_modulus(&self) -> Vec<usize> {
        let mut idx = self.support();
        idx.sort_by(|&a, &b| {
            self.amplitudes[b].norm_sqr().total_cmp(&self.amplitudes[a].norm_sqr())
        });
        idx
    }

    /// Kronecker product of amplitude vectors.
    pub fn tensor(&self, other: &PureStateVector) -> PureStateVector {
        PureStateVector { amplitudes: self.amplitudes.kronecker(&other.amplitudes) }
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }
}

/// A probability vector: nonnegative entries summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    weights: Vec<f64>,
}

impl ProbabilityVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDistribution("empty vector".into()));
        }
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidDistribution(format!("entry {i} is {w}")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidDistribution(format!("entries sum to {sum}")));
        }
        Ok(Self { weights })
    }

    pub fn uniform(d: usize) -> Self {
        Self { weights: vec![1.0 / d as f64; d] }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Entries sorted nonincreasing (stable by original index).
    pub fn sorted_desc(&self) -> Vec<f64> {
        sorted_desc(&self.weights)
    }

    /// Zero-padded copy of length `len` (never truncates).
    pub fn padded(&self, len: usize) -> Vec<f64> {
        let mut w = self.weights.clone();
        if w.len() < len {
            w.resize(len, 0.0);
        }
        w
    }
}

/// Stable descending sort.
pub(crate) fn sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Delta(rho): keeps the diagonal, drops all coherences.
pub fn dephase(rho: &DensityMatrix) -> DensityMatrix {
    let d = rho.dim();
    let entries = CMatrix::from_fn(d, d, |i, j| {
        if i == j {
            rho.entries[(i, i)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    DensityMatrix { entries }
}

/// |rho|: the matrix of entrywise moduli.
pub fn entrywise_abs(rho: &DensityMatrix) -> DMatrix<f64> {
    rho.entries.map(|z| z.norm())
}
