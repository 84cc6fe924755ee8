//! Pure coherent-state subspaces of a mixed state.
//!
//! An index set is a pure subspace exactly when the corresponding principal
//! submatrix of `A = (Δρ)^{-1/2} |ρ| (Δρ)^{-1/2}` is all ones. Finding the
//! maximal ones is maximal-clique enumeration on the graph whose edges are
//! the off-diagonal unit entries of `A`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::clique::Graph;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix};
use crate::measures::min_cl_ratio;
use crate::registry::SubspaceFinder;
use crate::states::{DensityMatrix, PureStateVector, AMPLITUDE_EPS};

/// Tolerance for "A_ij equals one".
pub const A_TOL: f64 = 1e-9;
/// Bound on the second eigenvalue of a normalized restriction deemed pure.
pub const RANK1_TOL: f64 = 1e-9;
/// Value ties in family selection.
const TIE_TOL: f64 = 1e-12;

/// `A_ij = |ρ_ij| / sqrt(ρ_ii ρ_jj)`, zero where either population vanishes.
pub fn a_matrix(rho: &DensityMatrix) -> DMatrix<f64> {
    let d = rho.dim();
    let pops = rho.diagonal_entries();
    DMatrix::from_fn(d, d, |i, j| {
        if pops[i] > AMPLITUDE_EPS && pops[j] > AMPLITUDE_EPS {
            rho.get(i, j).norm() / (pops[i] * pops[j]).sqrt()
        } else {
            0.0
        }
    })
}

/// Graph on populated indices with an edge wherever `|A_ij - 1| <= A_TOL`.
#[derive(Debug, Clone)]
pub struct CoherenceSupportGraph {
    vertices: Vec<usize>,
    graph: Graph,
}

impl CoherenceSupportGraph {
    pub fn new(rho: &DensityMatrix) -> Self {
        let a = a_matrix(rho);
        let d = rho.dim();
        let vertices: Vec<usize> =
            (0..d).filter(|&i| rho.get(i, i).re > AMPLITUDE_EPS).collect();
        let mut graph = Graph::new(d);
        for (n, &i) in vertices.iter().enumerate() {
            for &j in &vertices[n + 1..] {
                if (a[(i, j)] - 1.0).abs() <= A_TOL {
                    graph.add_edge(i, j);
                }
            }
        }
        Self { vertices, graph }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.graph.has_edge(i, j)
    }

    pub fn maximal_cliques(&self) -> Vec<Vec<usize>> {
        if self.vertices.is_empty() {
            return Vec::new();
        }
        self.graph.maximal_cliques(&self.vertices)
    }
}

/// An index set on which the normalized restriction of ρ is pure.
#[derive(Debug, Clone, PartialEq)]
pub struct PureSubspace {
    indices: Vec<usize>,
    weight: f64,
    state: PureStateVector,
    purity_defect: f64,
}

impl PureSubspace {
    /// Restricts `rho` to `indices` and extracts the dominant eigenvector as
    /// the subspace state, phase-fixed so its first nonzero amplitude is
    /// real positive.
    pub fn from_indices(rho: &DensityMatrix, indices: &[usize]) -> Result<Self> {
        let mut indices = indices.to_vec();
        indices.sort_unstable();
        indices.dedup();
        let n = indices.len();
        let d = rho.dim();
        if n == 0 || indices[n - 1] >= d {
            return Err(Error::DimensionMismatch(format!("index set {indices:?} for dimension {d}")));
        }
        let restriction = CMatrix::from_fn(n, n, |a, b| rho.get(indices[a], indices[b]));
        let weight = restriction.trace().re;
        if weight <= AMPLITUDE_EPS {
            return Err(Error::DegenerateState);
        }
        let (values, vectors) = hermitian_eigen(&restriction.unscale(weight));
        let purity_defect = if n > 1 { values[n - 2].max(0.0) } else { 0.0 };
        let mut amps = vec![Complex64::new(0.0, 0.0); d];
        for (a, &i) in indices.iter().enumerate() {
            amps[i] = vectors[(a, n - 1)];
        }
        let state = phase_fixed(amps)?;
        Ok(Self { indices, weight, state, purity_defect })
    }

    /// Assembles a subspace from known parts (used for product states).
    pub fn from_parts(indices: Vec<usize>, weight: f64, state: PureStateVector) -> Self {
        Self { indices, weight, state, purity_defect: 0.0 }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// p_μ = Tr(P_μ ρ P_μ).
    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// ψ_μ embedded in the full space.
    pub fn state(&self) -> &PureStateVector {
        &self.state
    }

    pub fn coherence_rank(&self) -> usize {
        self.indices.len()
    }

    /// Second-largest eigenvalue of the normalized restriction.
    pub fn purity_defect(&self) -> f64 {
        self.purity_defect
    }

    pub fn is_disjoint(&self, other: &PureSubspace) -> bool {
        disjoint(&self.indices, &other.indices)
    }
}

fn phase_fixed(mut amps: Vec<Complex64>) -> Result<PureStateVector> {
    if let Some(lead) = amps.iter().find(|a| a.norm_sqr() > AMPLITUDE_EPS).copied() {
        let rot = lead.conj() / lead.norm();
        for a in &mut amps {
            *a *= rot;
        }
    }
    PureStateVector::normalized(amps)
}

pub(crate) fn disjoint(a: &[usize], b: &[usize]) -> bool {
    !a.iter().any(|i| b.contains(i))
}

/// Descending coherence rank, then lexicographic indices.
pub(crate) fn sort_subspaces(subspaces: &mut [PureSubspace]) {
    subspaces.sort_by(|a, b| {
        b.indices.len().cmp(&a.indices.len()).then_with(|| a.indices.cmp(&b.indices))
    });
}

/// Every inclusion-maximal pure subspace, found by clique enumeration.
pub fn maximal_pure_subspaces(rho: &DensityMatrix) -> Result<Vec<PureSubspace>> {
    let graph = CoherenceSupportGraph::new(rho);
    if graph.vertices().is_empty() {
        return Err(Error::DegenerateState);
    }
    let mut out = graph
        .maximal_cliques()
        .iter()
        .map(|c| PureSubspace::from_indices(rho, c))
        .collect::<Result<Vec<_>>>()?;
    sort_subspaces(&mut out);
    Ok(out)
}

/// Clique-based finder, registered as `clique`.
#[derive(Debug, Default, Clone, Copy)]
pub struct CliqueFinder;

impl SubspaceFinder for CliqueFinder {
    fn name(&self) -> &'static str {
        "clique"
    }

    fn find(&self, rho: &DensityMatrix) -> Result<Vec<PureSubspace>> {
        maximal_pure_subspaces(rho)
    }
}

/// True iff some off-diagonal pair has `A_ij = 1`, i.e. ρ has a rank-2 pure
/// subspace and some pure coherent state is distillable.
pub fn has_rank2_subspace(rho: &DensityMatrix) -> bool {
    let graph = CoherenceSupportGraph::new(rho);
    let v = graph.vertices();
    v.iter().enumerate().any(|(n, &i)| v[n + 1..].iter().any(|&j| graph.has_edge(i, j)))
}

/// Pairwise-disjoint selection of pure subspaces used as a measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct DisjointFamily {
    pub members: Vec<PureSubspace>,
    pub total_weight: f64,
    /// Cliques dropped because they overlapped the chosen ones.
    pub discarded: usize,
}

impl DisjointFamily {
    pub fn empty() -> Self {
        Self { members: Vec::new(), total_weight: 0.0, discarded: 0 }
    }

    pub fn index_sets(&self) -> Vec<Vec<usize>> {
        self.members.iter().map(|m| m.indices().to_vec()).collect()
    }
}

/// Picks the pairwise-disjoint sub-family maximizing
/// `Σ p_μ · P_max(ψ_μ → φ)`.
///
/// Only inclusion-maximal disjoint families are considered (adding a
/// disjoint member never lowers the value); value ties go to the
/// lexicographically smallest family of index sets.
pub fn select_disjoint_family(subspaces: &[PureSubspace], target: &PureStateVector) -> DisjointFamily {
    let target_profile = target.squared_moduli();
    let values: Vec<f64> = subspaces
        .iter()
        .map(|s| s.weight() * min_cl_ratio(&s.state().squared_moduli(), &target_profile).0)
        .collect();
    let sets: Vec<Vec<usize>> = subspaces.iter().map(|s| s.indices().to_vec()).collect();
    let chosen = best_disjoint_selection(&sets, &values);
    let members: Vec<PureSubspace> = chosen.iter().map(|&i| subspaces[i].clone()).collect();
    let total_weight = members.iter().map(PureSubspace::weight).sum();
    DisjointFamily { members, total_weight, discarded: subspaces.len() - chosen.len() }
}

/// Exact branch-and-bound over maximal disjoint selections of `sets`.
/// Returns chosen positions sorted by their index sets.
pub fn best_disjoint_selection(sets: &[Vec<usize>], values: &[f64]) -> Vec<usize> {
    struct Search<'a> {
        sets: &'a [Vec<usize>],
        values: &'a [f64],
        suffix: Vec<f64>,
        best: Option<(f64, Vec<Vec<usize>>, Vec<usize>)>,
    }

    impl Search<'_> {
        fn run(&mut self, i: usize, chosen: &mut Vec<usize>, value: f64) {
            if let Some((best, _, _)) = &self.best {
                if value + self.suffix[i] < best - TIE_TOL {
                    return;
                }
            }
            if i == self.sets.len() {
                self.consider(chosen, value);
                return;
            }
            if chosen.iter().all(|&c| disjoint(&self.sets[c], &self.sets[i])) {
                chosen.push(i);
                self.run(i + 1, chosen, value + self.values[i]);
                chosen.pop();
            }
            self.run(i + 1, chosen, value);
        }

        fn consider(&mut self, chosen: &[usize], value: f64) {
            let maximal = (0..self.sets.len())
                .filter(|k| !chosen.contains(k))
                .all(|k| chosen.iter().any(|&c| !disjoint(&self.sets[c], &self.sets[k])));
            if !maximal {
                return;
            }
            let mut order = chosen.to_vec();
            order.sort_by(|&a, &b| self.sets[a].cmp(&self.sets[b]));
            let key: Vec<Vec<usize>> = order.iter().map(|&k| self.sets[k].clone()).collect();
            let replace = match &self.best {
                None => true,
                Some((best, best_key, _)) => {
                    value > best + TIE_TOL || ((value - best).abs() <= TIE_TOL && key < *best_key)
                }
            };
            if replace {
                self.best = Some((value, key, order));
            }
        }
    }

    let mut suffix = vec![0.0; sets.len() + 1];
    for i in (0..sets.len()).rev() {
        suffix[i] = suffix[i + 1] + values[i].max(0.0);
    }
    let mut search = Search { sets, values, suffix, best: None };
    search.run(0, &mut Vec::new(), 0.0);
    search.best.map(|(_, _, order)| order).unwrap_or_default()
}
