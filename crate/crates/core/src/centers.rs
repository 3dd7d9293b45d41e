//! Cluster centers: members `α` minimizing `ε(α) = Σ_{a∈C} |a − α|`.
//!
//! The greedy search descends the dendrogram `D(C)` of the cluster, keeping
//! at each level the largest branches and, among those, the tightest ones.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::Serialize;

use crate::energy::EnergyValue;
use crate::error::{Error, Result};
use crate::padic::{FieldParams, NormValue};
use crate::tree::{Node, Tree};

/// One branch of the rooted tree `D(C)`: a child of its root together with
/// everything below it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Branch {
    pub members: Vec<usize>,
    /// Diameter of the branch, `μ(v_B)`; zero for a singleton branch.
    pub mu: NormValue,
}

impl Branch {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchDecomposition {
    pub cluster: Vec<usize>,
    /// `μ(v0)` of the cluster.
    pub root_mu: NormValue,
    pub branches: Vec<Branch>,
}

impl BranchDecomposition {
    pub fn branch_of(&self, alpha: usize) -> Option<&Branch> {
        self.branches.iter().find(|b| b.members.contains(&alpha))
    }

    /// `N_α = #(C \ C_α)`.
    pub fn residual(&self, alpha: usize) -> Option<usize> {
        self.branch_of(alpha).map(|b| self.cluster.len() - b.size())
    }
}

/// Output of the center search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CenterResult {
    /// Union of the terminal clusters, sorted.
    pub candidates: Vec<usize>,
    /// The terminal clusters themselves, in order of smallest member.
    pub terminal_clusters: Vec<Vec<usize>>,
    /// Smallest candidate index.
    pub representative: usize,
}

fn cluster_tree(tree: &Tree, cluster: &[usize]) -> Result<Tree> {
    tree.lca(cluster)?;
    let keep: BTreeSet<usize> = cluster.iter().copied().collect();
    Ok(tree.restrict(|l| keep.contains(&l)).expect("cluster is nonempty"))
}

/// `ε(α) = Σ_{a∈C} |a − α|`, read off the tree.
pub fn epsilon_energy(tree: &Tree, field: &FieldParams, cluster: &[usize], alpha: usize) -> Result<EnergyValue> {
    if !cluster.contains(&alpha) {
        return Err(Error::UnknownMember(alpha));
    }
    let mut out = EnergyValue::zero(*field);
    for &a in cluster {
        let d = EnergyValue::from_norm(*field, tree.diameter(&[a, alpha])?, 1u32);
        out = out.checked_add(&d)?;
    }
    Ok(out)
}

/// The branches of `D(C)` at its root.
pub fn branch_decomposition(tree: &Tree, cluster: &[usize]) -> Result<BranchDecomposition> {
    let sub = cluster_tree(tree, cluster)?;
    let root = sub.root();
    let mut sorted = cluster.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let branches = match root {
        Node::End(l) => vec![Branch { members: vec![l], mu: NormValue::Zero }],
        Node::Vertex(_) => sub
            .children(root)
            .iter()
            .map(|c| Branch { members: sub.members(c).to_vec(), mu: sub.mu(*c) })
            .collect(),
    };
    Ok(BranchDecomposition { cluster: sorted, root_mu: sub.mu(root), branches })
}

/// Greedy center search on `D(C)`. Every candidate minimizes `ε` over `C`
/// when the greedy choice is optimal; see the guide for instances where it
/// is not.
pub fn center_candidates(tree: &Tree, cluster: &[usize]) -> Result<CenterResult> {
    let sub = cluster_tree(tree, cluster)?;
    let mut items = vec![sub.root()];
    loop {
        let single_vertex = |n: &Node| sub.children(*n).iter().all(Node::is_end);
        if items.iter().all(single_vertex) {
            break;
        }
        let branches: Vec<Node> = items.iter().flat_map(|&n| sub.children(n).iter().copied()).collect();
        let largest = branches.iter().map(|&b| sub.size(b)).max().expect("items have children");
        let sized: Vec<Node> = branches.into_iter().filter(|&b| sub.size(b) == largest).collect();
        let tightest = sized.iter().map(|&b| sub.mu(b)).min().unwrap();
        items = sized.into_iter().filter(|&b| sub.mu(b) == tightest).collect();
    }
    let mut terminal: Vec<Vec<usize>> = items.iter().map(|n| sub.members(n).to_vec()).collect();
    terminal.sort();
    let mut candidates: Vec<usize> = terminal.iter().flatten().copied().collect();
    candidates.sort_unstable();
    Ok(CenterResult { representative: candidates[0], candidates, terminal_clusters: terminal })
}

/// All minimizers of `ε` over the cluster, by exhaustive evaluation.
pub fn brute_force_centers(tree: &Tree, field: &FieldParams, cluster: &[usize]) -> Result<Vec<usize>> {
    let mut members = cluster.to_vec();
    members.sort_unstable();
    members.dedup();
    let mut best: Vec<usize> = Vec::new();
    let mut best_e: Option<EnergyValue> = None;
    for &a in &members {
        let e = epsilon_energy(tree, field, &members, a)?;
        match best_e.as_ref().map(|b| e.compare(b)).transpose()? {
            None | Some(Ordering::Less) => {
                best = vec![a];
                best_e = Some(e);
            }
            Some(Ordering::Equal) => best.push(a),
            Some(Ordering::Greater) => {}
        }
    }
    if best.is_empty() {
        return Err(Error::EmptySubset);
    }
    Ok(best)
}
