//! The dendrogram `D(X)` of a finite set of p-adic values.
//!
//! Vertices are the disks of `X` with at least two members, ends are the
//! data. Construction partitions the data by digit: the members of a vertex
//! share every digit below its level and split on the digit at its level.
//! The result depends only on the set of values, not on their order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::padic::{FieldParams, NormValue, PAdicValue};
use crate::partition::Clustering;
use crate::tree::{AbstractDendrogram, Node, RawNode, Tree, VertexId};

#[derive(Debug, Clone)]
pub struct Dendrogram {
    field: FieldParams,
    data: Vec<PAdicValue>,
    tree: Tree,
}

impl Dendrogram {
    /// Builds `D(X)`. Ends are labelled by position in `data`.
    pub fn build(data: Vec<PAdicValue>) -> Result<Self> {
        let field = *data.first().ok_or(Error::EmptyDataset)?.field();
        if data.iter().any(|x| *x.field() != field) {
            return Err(Error::FieldMismatch);
        }
        let lo = data.iter().map(PAdicValue::start_index).min().unwrap();
        let hi = data.iter().map(PAdicValue::end_index).max().unwrap();
        let raw = radix_split(&data, (0..data.len()).collect(), lo, hi)?;
        let tree = Tree::from_raw(raw)?;
        Ok(Dendrogram { field, data, tree })
    }

    pub fn field(&self) -> &FieldParams {
        &self.field
    }

    pub fn data(&self) -> &[PAdicValue] {
        &self.data
    }

    pub fn datum(&self, index: usize) -> Result<&PAdicValue> {
        self.data.get(index).ok_or(Error::UnknownMember(index))
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn root(&self) -> Node {
        self.tree.root()
    }

    /// Diameter `μ(v0)` of the whole dataset.
    pub fn diameter(&self) -> NormValue {
        self.tree.mu(self.tree.root())
    }

    pub fn index_of(&self, value: &PAdicValue) -> Option<usize> {
        self.data.iter().position(|x| x == value)
    }

    /// Distance between two data, from their digit words.
    pub fn distance(&self, i: usize, j: usize) -> Result<NormValue> {
        self.datum(i)?.distance(self.datum(j)?)
    }

    fn check_subset(&self, subset: &[usize]) -> Result<()> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        match subset.iter().find(|&&i| i >= self.data.len()) {
            Some(&i) => Err(Error::UnknownMember(i)),
            None => Ok(()),
        }
    }

    /// The cluster property: no datum outside `subset` is closer than the
    /// subset's diameter to any of its members.
    pub fn is_cluster(&self, subset: &[usize]) -> Result<bool> {
        self.check_subset(subset)?;
        let mu = self.tree.diameter(subset)?;
        for &a in subset {
            for x in 0..self.data.len() {
                if !subset.contains(&x) && self.distance(x, a)? < mu {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// True when `subset` is a disk `{x ∈ X : |x − a| < ε}`: an end, the
    /// member set of a vertex, or all of `X`.
    pub fn is_verticial(&self, subset: &[usize]) -> Result<bool> {
        self.check_subset(subset)?;
        let node = self.tree.lca(subset)?;
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        Ok(self.tree.members(&node) == sorted.as_slice())
    }

    /// Every disk of `X`: singletons first, then vertex member sets by id.
    pub fn disks(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = (0..self.data.len()).map(|i| vec![i]).collect();
        out.extend(self.tree.vertices().iter().map(|v| v.members.clone()));
        out
    }

    /// The clustering formed by the member sets of `nodes`.
    pub fn clustering_of(&self, nodes: &[Node]) -> Result<Clustering> {
        Clustering::new(nodes.iter().map(|n| self.tree.members(n).to_vec()).collect())
    }

    /// Adds a datum and returns its index. The tree is updated by
    /// descending along the common prefix and splicing in one end, and at
    /// most one new vertex.
    pub fn insert(&mut self, value: PAdicValue) -> Result<usize> {
        if *value.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        if let Some(i) = self.index_of(&value) {
            return Err(Error::DuplicateValue { first: i, second: self.data.len() });
        }
        let label = self.data.len();
        let raw = splice(&self.data, self.tree.to_raw(), &value, label);
        self.data.push(value);
        self.tree = Tree::from_raw(raw)?;
        Ok(label)
    }

    /// The dendrogram with the point at infinity attached above the root.
    pub fn extended(self) -> ExtendedDendrogram {
        ExtendedDendrogram { inner: self }
    }

    pub fn to_dot(&self) -> String {
        tree_to_dot(&self.tree, false)
    }
}

fn radix_split(data: &[PAdicValue], members: Vec<usize>, from: i64, hi: i64) -> Result<RawNode> {
    if members.len() == 1 {
        return Ok(RawNode::Leaf(members[0]));
    }
    let first = &data[members[0]];
    let level = (from..hi)
        .find(|&i| members.iter().any(|&m| data[m].digit(i) != first.digit(i)))
        .ok_or_else(|| Error::DuplicateValue { first: members[0], second: members[1] })?;
    let mut groups: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for m in members {
        groups.entry(data[m].digit(level)).or_default().push(m);
    }
    let children = groups
        .into_values()
        .map(|g| radix_split(data, g, level + 1, hi))
        .collect::<Result<Vec<_>>>()?;
    Ok(RawNode::Internal(level, children))
}

fn representative(raw: &RawNode) -> usize {
    match raw {
        RawNode::Leaf(l) => *l,
        RawNode::Internal(_, ch) => representative(&ch[0]),
    }
}

fn splice(data: &[PAdicValue], raw: RawNode, value: &PAdicValue, label: usize) -> RawNode {
    let rep = &data[representative(&raw)];
    let split = value.first_difference(rep).expect("value is not a duplicate");
    match raw {
        RawNode::Leaf(l) => RawNode::Internal(split, vec![RawNode::Leaf(l), RawNode::Leaf(label)]),
        RawNode::Internal(level, _) if split < level => {
            RawNode::Internal(split, vec![raw, RawNode::Leaf(label)])
        }
        RawNode::Internal(level, mut children) => {
            let digit = value.digit(level);
            match children
                .iter()
                .position(|c| data[representative(c)].digit(level) == digit)
            {
                Some(k) => {
                    let child = children.swap_remove(k);
                    children.push(splice(data, child, value, label));
                }
                None => children.push(RawNode::Leaf(label)),
            }
            RawNode::Internal(level, children)
        }
    }
}

/// `D_∞(X)`: the dendrogram of `X ∪ {∞}`. The point at infinity hangs above
/// the root on an unbounded edge; removing it gives back `D(X)`.
#[derive(Debug, Clone)]
pub struct ExtendedDendrogram {
    inner: Dendrogram,
}

impl ExtendedDendrogram {
    pub fn build(data: Vec<PAdicValue>) -> Result<Self> {
        Ok(Dendrogram::build(data)?.extended())
    }

    pub fn dendrogram(&self) -> &Dendrogram {
        &self.inner
    }

    pub fn into_dendrogram(self) -> Dendrogram {
        self.inner
    }

    /// Vertices met on the geodesic from `∞` down to the end of `index`.
    pub fn path_from_infinity(&self, index: usize) -> Result<Vec<VertexId>> {
        let node = self.inner.tree.end_node(index)?;
        Ok(self.inner.tree.ancestors(node))
    }

    pub fn to_dot(&self) -> String {
        tree_to_dot(&self.inner.tree, true)
    }
}

/// True when every vertex has at most `q` children, i.e. the tree can be
/// realized by digit words over `field`.
pub fn is_realizable(tree: &Tree, field: &FieldParams) -> bool {
    tree.max_fan_out() as u64 <= field.q()
}

/// Digit words whose dendrogram is `tree`: the `i`-th value is the end with
/// the `i`-th smallest label. Each datum carries, at the level of every
/// vertex on its root path, the position of the child it descends into.
pub fn synthesize(tree: &Tree, field: &FieldParams) -> Result<Vec<PAdicValue>> {
    if !is_realizable(tree, field) {
        return Err(Error::Unrealizable { children: tree.max_fan_out(), q: field.q() });
    }
    let Some(top) = tree.level(tree.root()) else {
        return Ok(vec![PAdicValue::zero(*field)]);
    };
    let bottom = tree.vertices().iter().map(|v| v.level).max().unwrap();
    let width = (bottom - top + 1) as usize;
    let mut words: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for label in tree.leaves() {
        let mut digits = vec![0u64; width];
        let mut node = Node::End(label);
        while let Some(parent) = tree.parent(node) {
            let vx = tree.vertex(parent);
            let pos = vx.children.iter().position(|&c| c == node).unwrap();
            digits[(vx.level - top) as usize] = pos as u64;
            node = Node::Vertex(parent);
        }
        words.insert(label, digits);
    }
    words
        .into_values()
        .map(|d| PAdicValue::new(*field, top, d))
        .collect()
}

/// Convenience: synthesize data for an abstract tree and build its
/// dendrogram.
pub fn realize(tree: &AbstractDendrogram, field: &FieldParams) -> Result<Dendrogram> {
    Dendrogram::build(synthesize(tree.tree(), field)?)
}

/// DOT digraph of a tree. Vertices show id, level and member count, ends
/// show the datum index; `with_infinity` adds the point at infinity.
pub fn tree_to_dot(tree: &Tree, with_infinity: bool) -> String {
    let mut out = String::from("digraph dendrogram {\n");
    out.push_str("  node [shape=circle];\n");
    if with_infinity {
        out.push_str("  inf [shape=plaintext, label=\"inf\"];\n");
    }
    for v in tree.vertices() {
        let _ = writeln!(
            out,
            "  {} [label=\"{}\\nlevel {}\\n{} members\"];",
            v.id,
            v.id,
            v.level,
            v.size()
        );
    }
    for l in tree.leaves() {
        let _ = writeln!(out, "  x{l} [shape=plaintext, label=\"x{l}\"];");
    }
    if with_infinity {
        let _ = writeln!(out, "  inf -> {} [style=dashed];", tree.root());
    }
    for v in tree.vertices() {
        for c in &v.children {
            let _ = writeln!(out, "  {} -> {};", v.id, c);
        }
    }
    out.push_str("}\n");
    out
}
