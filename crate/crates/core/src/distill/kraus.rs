use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector};

/// Entries with modulus at or below this are read as zero when parsing a
/// dense matrix.
const ENTRY_EPS: f64 = 1e-14;

/// One nonzero entry of a strictly incoherent Kraus operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrausEntry {
    pub row: usize,
    pub col: usize,
    pub value: Complex64,
}

/// A `rows x cols` operator with at most one nonzero entry per row and per
/// column.
#[derive(Debug, Clone, PartialEq)]
pub struct StrictlyIncoherentKraus {
    rows: usize,
    cols: usize,
    entries: Vec<KrausEntry>,
}

/// `K = P_π · K_Δ · P`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausDecomposition {
    /// Partial permutation (a genuine permutation when K is square).
    pub permutation: CMatrix,
    /// `diag(a_1, ..., a_n, 0, ...)` indexed by input basis.
    pub diagonal: CMatrix,
    /// Incoherent projector onto the columns K acts on.
    pub projector: CMatrix,
}

impl StrictlyIncoherentKraus {
    pub fn new(rows: usize, cols: usize, mut entries: Vec<KrausEntry>) -> Result<Self> {
        entries.retain(|e| e.value.norm() > 0.0);
        let mut row_used = vec![false; rows];
        let mut col_used = vec![false; cols];
        for e in &entries {
            if e.row >= rows || e.col >= cols {
                return Err(Error::DimensionMismatch(format!(
                    "entry ({}, {}) outside {rows}x{cols}",
                    e.row, e.col
                )));
            }
            if row_used[e.row] || col_used[e.col] {
                return Err(Error::NotStrictlyIncoherent {
                    id: String::new(),
                    reason: format!("entry ({}, {}) shares a row or column", e.row, e.col),
                });
            }
            row_used[e.row] = true;
            col_used[e.col] = true;
        }
        entries.sort_by_key(|e| e.col);
        Ok(Self { rows, cols, entries })
    }

    /// Parses a dense matrix, rejecting any row or column with two nonzeros.
    pub fn from_matrix(m: &CMatrix) -> Result<Self> {
        let mut entries = Vec::new();
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                if m[(r, c)].norm() > ENTRY_EPS {
                    entries.push(KrausEntry { row: r, col: c, value: m[(r, c)] });
                }
            }
        }
        Self::new(m.nrows(), m.ncols(), entries)
    }

    pub fn identity_on(dim: usize, support: &[usize]) -> Self {
        let entries =
            support.iter().map(|&i| KrausEntry { row: i, col: i, value: Complex64::new(1.0, 0.0) }).collect();
        Self::new(dim, dim, entries).expect("identity is strictly incoherent")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[KrausEntry] {
        &self.entries
    }

    pub fn matrix(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.rows, self.cols);
        for e in &self.entries {
            m[(e.row, e.col)] = e.value;
        }
        m
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        let mut out = CVector::zeros(self.rows);
        for e in &self.entries {
            out[e.row] += e.value * v[e.col];
        }
        out
    }

    /// `K ρ K^dag`.
    pub fn sandwich(&self, rho: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.rows, self.rows);
        for a in &self.entries {
            for b in &self.entries {
                out[(a.row, b.row)] = a.value * rho[(a.col, b.col)] * b.value.conj();
            }
        }
        out
    }

    /// `Tr(K ρ K^dag)`.
    pub fn probability(&self, rho: &CMatrix) -> f64 {
        self.entries.iter().map(|e| e.value.norm_sqr() * rho[(e.col, e.col)].re).sum()
    }

    /// `K^dag K`, which is diagonal for a strictly incoherent K.
    pub fn gram_diagonal(&self) -> Vec<f64> {
        let mut g = vec![0.0; self.cols];
        for e in &self.entries {
            g[e.col] += e.value.norm_sqr();
        }
        g
    }

    pub fn decompose(&self) -> KrausDecomposition {
        let mut permutation = CMatrix::zeros(self.rows, self.cols);
        let mut diagonal = CMatrix::zeros(self.cols, self.cols);
        let mut projector = CMatrix::zeros(self.cols, self.cols);
        let one = Complex64::new(1.0, 0.0);
        let mut free_rows: Vec<bool> = vec![true; self.rows];
        let mut mapped_cols: Vec<bool> = vec![false; self.cols];
        for e in &self.entries {
            permutation[(e.row, e.col)] = one;
            diagonal[(e.col, e.col)] = e.value;
            projector[(e.col, e.col)] = one;
            free_rows[e.row] = false;
            mapped_cols[e.col] = true;
        }
        // complete to a full (partial, if rectangular) permutation
        let mut rows = (0..self.rows).filter(|&r| free_rows[r]);
        for c in (0..self.cols).filter(|&c| !mapped_cols[c]) {
            match rows.next() {
                Some(r) => permutation[(r, c)] = one,
                None => break,
            }
        }
        KrausDecomposition { permutation, diagonal, projector }
    }
}

/// `Σ K^dag K` over a set of strictly incoherent operators; diagonal.
pub fn completeness_diagonal<'a>(cols: usize, ops: impl IntoIterator<Item = &'a StrictlyIncoherentKraus>) -> Vec<f64> {
    let mut total = vec![0.0; cols];
    for k in ops {
        for (t, g) in total.iter_mut().zip(k.gram_diagonal()) {
            *t += g;
        }
    }
    total
}
