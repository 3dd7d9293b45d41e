//! Greedy verticial and quasi-verticial clustering, and the split-LBG
//! driver that attaches centers to the result.
//!
//! A verticial clustering is a cut through the dendrogram: a set of nodes
//! whose member sets partition the data. Each step replaces one vertex of
//! the cut by its children, choosing the split that lowers the energy the
//! most while keeping the number of clusters within the budget `k`. Splits
//! always lower the energy strictly, so the descent ends when the budget is
//! exhausted.
//!
//! The quasi-verticial variant sets aside, whenever a vertex is split, the
//! children whose energy is below a threshold `ε` ("quasi-singletons"). Set
//! aside clusters are final and count against the budget; the descent goes
//! on over the remaining data.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::Serialize;

use crate::centers::{center_candidates, CenterResult};
use crate::energy::{clustering_energy, family_energy, vertex_energy, EnergyValue, Threshold};
use crate::error::{Error, Result};
use crate::padic::FieldParams;
use crate::partition::Clustering;
use crate::tree::{Node, Tree};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClusteringOptions {
    /// Largest number of tied clusterings carried from one step to the next.
    pub family_cap: usize,
}

impl Default for ClusteringOptions {
    fn default() -> Self {
        ClusteringOptions { family_cap: 16 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyEntry {
    /// The surviving cut, as nodes of the full dendrogram.
    pub nodes: Vec<Node>,
    /// Quasi-singletons set aside, in the order they were removed.
    pub remnants: Vec<Node>,
    pub clustering: Clustering,
    /// Energy of the cut over the data that is still in play.
    pub energy: EnergyValue,
    /// Energy of the full clustering over all data.
    pub total_energy: EnergyValue,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Split {
    /// Position of the parent entry in the previous family.
    pub entry: usize,
    pub vertex: Node,
    pub removed: Vec<Node>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitStep {
    pub step: usize,
    pub energy: EnergyValue,
    pub splits: Vec<Split>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostic {
    /// The first split already needs more than `budget` clusters; the
    /// result is the one-cluster clustering.
    RootExceedsBudget { clusters: usize, budget: usize },
    /// Tied clusterings beyond the family cap were dropped.
    FamilyTruncated { step: usize, kept: usize, dropped: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusteringFamily {
    pub budget: usize,
    pub entries: Vec<FamilyEntry>,
    pub steps: Vec<SplitStep>,
    pub diagnostics: Vec<Diagnostic>,
}

impl ClusteringFamily {
    /// True when no split was possible and `{X}` was returned.
    pub fn is_trivial_fallback(&self) -> bool {
        self.diagnostics
            .iter()
            .any(|d| matches!(d, Diagnostic::RootExceedsBudget { .. }))
    }

    pub fn clusterings(&self) -> impl Iterator<Item = &Clustering> {
        self.entries.iter().map(|e| &e.clustering)
    }
}

/// Quasi-singleton test: `E(v) < ε`, exactly.
pub fn is_quasi_singleton(tree: &Tree, field: &FieldParams, node: Node, epsilon: &Threshold) -> bool {
    epsilon.exceeds(&vertex_energy(tree, field, node))
}

/// Working state of one family member.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct State {
    nodes: Vec<Node>,
    remnants: Vec<Node>,
    removed: BTreeSet<usize>,
}

impl State {
    fn key(&self) -> Vec<Node> {
        let mut all: Vec<Node> = self.nodes.iter().chain(&self.remnants).copied().collect();
        all.sort();
        all
    }

    fn cluster_count(&self) -> usize {
        self.nodes.len() + self.remnants.len()
    }
}

struct Search<'a> {
    tree: &'a Tree,
    field: FieldParams,
    k: usize,
    epsilon: Option<&'a Threshold>,
    options: ClusteringOptions,
}

impl Search<'_> {
    fn kept_members(&self, node: Node, removed: &BTreeSet<usize>) -> Vec<usize> {
        self.tree
            .members(&node)
            .iter()
            .copied()
            .filter(|l| !removed.contains(l))
            .collect()
    }

    /// `E(v)` over the data not yet removed.
    fn reduced_energy(&self, node: Node, removed: &BTreeSet<usize>) -> EnergyValue {
        let keep = |l: usize| !removed.contains(&l);
        match self.tree.collapse(node, &keep) {
            Some(c) => EnergyValue::from_norm(
                self.field,
                self.tree.mu(c),
                (self.kept_members(node, removed).len() - 1) as u64,
            ),
            None => EnergyValue::zero(self.field),
        }
    }

    fn state_energy(&self, state: &State) -> EnergyValue {
        match self.epsilon {
            None => family_energy(self.tree, &self.field, &state.nodes),
            Some(_) => {
                let parts: Vec<EnergyValue> =
                    state.nodes.iter().map(|&n| self.reduced_energy(n, &state.removed)).collect();
                EnergyValue::sum(self.field, &parts).expect("one field")
            }
        }
    }

    /// Children of `node` that survive, and those set aside as
    /// quasi-singletons.
    fn split_children(&self, node: Node, removed: &BTreeSet<usize>) -> (Vec<Node>, Vec<Node>) {
        let keep = |l: usize| !removed.contains(&l);
        let children = self.tree.reduced_children(node, &keep);
        match self.epsilon {
            None => (children, Vec::new()),
            Some(eps) => children
                .into_iter()
                .partition(|&c| !eps.exceeds(&self.reduced_energy(c, removed))),
        }
    }

    fn split(&self, state: &State, v: Node) -> Option<State> {
        let (survivors, quasi) = self.split_children(v, &state.removed);
        if state.cluster_count() - 1 + survivors.len() + quasi.len() > self.k {
            return None;
        }
        let mut next = state.clone();
        next.nodes.retain(|&n| n != v);
        next.nodes.extend(survivors);
        next.nodes.sort();
        for &q in &quasi {
            next.removed.extend(self.kept_members(q, &state.removed));
        }
        next.remnants.extend(quasi);
        Some(next)
    }

    fn entry(&self, state: &State) -> FamilyEntry {
        let mut clusters: Vec<Vec<usize>> =
            state.nodes.iter().map(|&n| self.kept_members(n, &state.removed)).collect();
        clusters.extend(state.remnants.iter().map(|n| self.tree.members(n).to_vec()));
        let clustering = Clustering::new(clusters).expect("cut of the dendrogram");
        let total_energy = clustering_energy(self.tree, &self.field, &clustering).expect("members of the tree");
        FamilyEntry {
            nodes: state.nodes.clone(),
            remnants: state.remnants.clone(),
            clustering,
            energy: self.state_energy(state),
            total_energy,
        }
    }

    fn run(&self) -> Result<ClusteringFamily> {
        if self.k == 0 {
            return Err(Error::InvalidBudget);
        }
        let root = self.tree.root();
        if root.is_end() {
            return Err(Error::TooFewPoints { needed: 2, got: 1 });
        }
        let whole = State { nodes: vec![root], remnants: Vec::new(), removed: BTreeSet::new() };
        let Some(first) = self.split(&whole, root) else {
            let (survivors, quasi) = self.split_children(root, &whole.removed);
            return Ok(ClusteringFamily {
                budget: self.k,
                entries: vec![self.entry(&whole)],
                steps: Vec::new(),
                diagnostics: vec![Diagnostic::RootExceedsBudget {
                    clusters: survivors.len() + quasi.len(),
                    budget: self.k,
                }],
            });
        };
        let first_removed = first.remnants.clone();
        let mut steps = vec![SplitStep {
            step: 1,
            energy: self.state_energy(&first),
            splits: vec![Split { entry: 0, vertex: root, removed: first_removed }],
        }];
        let mut family = vec![first];
        let mut diagnostics = Vec::new();
        loop {
            let mut best: Option<EnergyValue> = None;
            let mut found: Vec<(State, Split)> = Vec::new();
            for (i, state) in family.iter().enumerate() {
                for &v in state.nodes.iter().filter(|n| !n.is_end()) {
                    let Some(next) = self.split(state, v) else { continue };
                    let e = self.state_energy(&next);
                    let split = Split { entry: i, vertex: v, removed: next.remnants[state.remnants.len()..].to_vec() };
                    match best.as_ref().map(|b| e.compare(b).expect("one field")) {
                        None | Some(Ordering::Less) => {
                            best = Some(e);
                            found = vec![(next, split)];
                        }
                        Some(Ordering::Equal) => found.push((next, split)),
                        Some(Ordering::Greater) => {}
                    }
                }
            }
            let Some(energy) = best else { break };
            found.sort_by(|a, b| a.0.key().cmp(&b.0.key()).then(a.1.entry.cmp(&b.1.entry)));
            found.dedup_by(|a, b| a.0.key() == b.0.key());
            let step = steps.len() + 1;
            if found.len() > self.options.family_cap {
                diagnostics.push(Diagnostic::FamilyTruncated {
                    step,
                    kept: self.options.family_cap,
                    dropped: found.len() - self.options.family_cap,
                });
                found.truncate(self.options.family_cap);
            }
            let (states, splits): (Vec<State>, Vec<Split>) = found.into_iter().unzip();
            steps.push(SplitStep { step, energy, splits });
            family = states;
        }
        Ok(ClusteringFamily {
            budget: self.k,
            entries: family.iter().map(|s| self.entry(s)).collect(),
            steps,
            diagnostics,
        })
    }
}

/// Greedy descent over verticial clusterings with at most `k` clusters.
pub fn verticial_clustering(
    tree: &Tree,
    field: &FieldParams,
    k: usize,
    options: ClusteringOptions,
) -> Result<ClusteringFamily> {
    Search { tree, field: *field, k, epsilon: None, options }.run()
}

/// Greedy descent that sets quasi-singletons for `epsilon` aside as it
/// splits.
pub fn quasi_verticial_clustering(
    tree: &Tree,
    field: &FieldParams,
    k: usize,
    epsilon: &Threshold,
    options: ClusteringOptions,
) -> Result<ClusteringFamily> {
    if epsilon.is_zero() {
        return Err(Error::InvalidThreshold("the quasi-singleton threshold must be positive".into()));
    }
    Search { tree, field: *field, k, epsilon: Some(epsilon), options }.run()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CenteredClustering {
    pub entry: FamilyEntry,
    /// Center search result per cluster, in the clustering's order.
    pub centers: Vec<CenterResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitLbgResult {
    pub family: ClusteringFamily,
    pub clusterings: Vec<CenteredClustering>,
}

/// Clustering followed by a center search in every cluster. With
/// `epsilon`, quasi-singletons are set aside during the descent and get
/// centers like any other cluster.
pub fn split_lbg(
    tree: &Tree,
    field: &FieldParams,
    k: usize,
    epsilon: Option<&Threshold>,
    options: ClusteringOptions,
) -> Result<SplitLbgResult> {
    let family = match epsilon {
        Some(eps) => quasi_verticial_clustering(tree, field, k, eps, options)?,
        None => verticial_clustering(tree, field, k, options)?,
    };
    let clusterings = family
        .entries
        .iter()
        .map(|entry| {
            let centers = entry
                .clustering
                .iter()
                .map(|c| center_candidates(tree, c))
                .collect::<Result<Vec<_>>>()?;
            Ok(CenteredClustering { entry: entry.clone(), centers })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SplitLbgResult { family, clusterings })
}
