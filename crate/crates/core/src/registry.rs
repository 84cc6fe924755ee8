//! Named, runtime-selectable strategies.
//!
//! Two families are interchangeable: how maximal pure subspaces are found
//! (`clique`, `exhaustive`) and what a catalyst search optimizes
//! (`probabilistic`, `deterministic`). Each registry maps a name to a
//! boxed trait object; the CLI picks one by name.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::states::DensityMatrix;
use crate::subspaces::PureSubspace;

/// Produces every inclusion-maximal pure subspace of a state, sorted by
/// descending rank then lexicographic indices.
pub trait SubspaceFinder: Send + Sync {
    fn name(&self) -> &'static str;
    fn find(&self, rho: &DensityMatrix) -> Result<Vec<PureSubspace>>;
}

/// Decides what a catalyst search is looking for.
pub trait CatalystObjective: Send + Sync {
    fn name(&self) -> &'static str;

    /// Whether `achieved` counts as a success against `baseline`.
    fn accepts(&self, achieved: f64, baseline: f64) -> bool;

    /// Whether the first accepted candidate ends the search.
    fn stops_at_first(&self) -> bool;

    /// Whether the objective makes sense at all for this baseline.
    fn check_baseline(&self, _baseline: f64) -> Result<()> {
        Ok(())
    }
}

/// Name-keyed store of boxed strategies.
pub struct Registry<T: ?Sized> {
    entries: BTreeMap<&'static str, Box<T>>,
    kind: &'static str,
}

impl<T: ?Sized> Registry<T> {
    pub fn empty(kind: &'static str) -> Self {
        Self { entries: BTreeMap::new(), kind }
    }

    pub fn insert(&mut self, name: &'static str, strategy: Box<T>) {
        self.entries.insert(name, strategy);
    }

    pub fn get(&self, name: &str) -> Result<&T> {
        self.entries.get(name).map(|b| b.as_ref()).ok_or_else(|| Error::UnknownStrategy {
            name: format!("{} `{name}`", self.kind),
            available: self.names().join(", "),
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}

impl<T: ?Sized> fmt::Debug for Registry<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Registry").field("kind", &self.kind).field("names", &self.names()).finish()
    }
}

impl Registry<dyn SubspaceFinder> {
    pub fn register_finder(&mut self, finder: Box<dyn SubspaceFinder>) {
        self.insert(finder.name(), finder);
    }
}

impl Registry<dyn CatalystObjective> {
    pub fn register_objective(&mut self, objective: Box<dyn CatalystObjective>) {
        self.insert(objective.name(), objective);
    }
}

/// Registry preloaded with the built-in finders.
pub fn finders() -> Registry<dyn SubspaceFinder> {
    let mut r: Registry<dyn SubspaceFinder> = Registry::empty("subspace finder");
    r.register_finder(Box::new(crate::subspaces::CliqueFinder));
    r.register_finder(Box::new(crate::oracles::ExhaustiveFinder));
    r
}

/// Registry preloaded with the built-in catalyst objectives.
pub fn objectives() -> Registry<dyn CatalystObjective> {
    let mut r: Registry<dyn CatalystObjective> = Registry::empty("catalyst objective");
    r.register_objective(Box::new(crate::catalysis::Probabilistic));
    r.register_objective(Box::new(crate::catalysis::Deterministic));
    r
}

pub const DEFAULT_FINDER: &str = "clique";
