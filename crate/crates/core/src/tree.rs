//! Rooted level-labelled trees.
//!
//! [`Tree`] is the shape shared by concrete dendrograms and by abstract trees
//! given without coordinates. Internal vertices carry an integer level `ℓ`
//! (diameter `p^(−ℓ/e)`), leaves ("ends") carry a data label. Children are
//! ordered by their smallest leaf label and vertex ids follow depth-first
//! preorder, so two trees with the same labelled shape are equal field by
//! field.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::NormValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// A vertex or an end of a tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Vertex(VertexId),
    End(usize),
}

impl Node {
    pub fn vertex(&self) -> Option<VertexId> {
        match *self {
            Node::Vertex(v) => Some(v),
            Node::End(_) => None,
        }
    }

    pub fn is_end(&self) -> bool {
        matches!(self, Node::End(_))
    }
}

impl Serialize for Node {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Vertex(v) => write!(f, "{v}"),
            Node::End(i) => write!(f, "x{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: VertexId,
    pub parent: Option<VertexId>,
    pub children: Vec<Node>,
    pub level: i64,
    /// Leaf labels below this vertex, sorted.
    pub members: Vec<usize>,
}

impl Vertex {
    pub fn mu(&self) -> NormValue {
        NormValue::Pow(self.level)
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Recursive description used to assemble trees before ids are assigned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawNode {
    Leaf(usize),
    Internal(i64, Vec<RawNode>),
}

impl RawNode {
    fn min_label(&self) -> usize {
        match self {
            RawNode::Leaf(l) => *l,
            RawNode::Internal(_, ch) => ch.iter().map(RawNode::min_label).min().unwrap_or(usize::MAX),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    vertices: Vec<Vertex>,
    root: Node,
    end_parent: BTreeMap<usize, Option<VertexId>>,
}

impl Tree {
    /// Assigns ids and validates the shape: every vertex has at least two
    /// children, levels strictly increase downwards, leaf labels are unique.
    pub fn from_raw(raw: RawNode) -> Result<Tree> {
        let mut tree = Tree {
            vertices: Vec::new(),
            root: Node::End(0),
            end_parent: BTreeMap::new(),
        };
        tree.root = tree.assemble(raw, None)?;
        Ok(tree)
    }

    fn assemble(&mut self, raw: RawNode, parent: Option<(VertexId, i64)>) -> Result<Node> {
        match raw {
            RawNode::Leaf(label) => {
                if self.end_parent.insert(label, parent.map(|p| p.0)).is_some() {
                    return Err(Error::InvalidTree(format!("leaf label {label} occurs twice")));
                }
                Ok(Node::End(label))
            }
            RawNode::Internal(level, mut children) => {
                if children.len() < 2 {
                    return Err(Error::InvalidTree(format!(
                        "vertex at level {level} has {} child(ren), needs at least 2",
                        children.len()
                    )));
                }
                if let Some((_, parent_level)) = parent {
                    if level <= parent_level {
                        return Err(Error::InvalidTree(format!(
                            "level {level} does not exceed parent level {parent_level}"
                        )));
                    }
                }
                let id = VertexId(self.vertices.len());
                self.vertices.push(Vertex {
                    id,
                    parent: parent.map(|p| p.0),
                    children: Vec::new(),
                    level,
                    members: Vec::new(),
                });
                children.sort_by_key(RawNode::min_label);
                let mut nodes = Vec::with_capacity(children.len());
                let mut members = Vec::new();
                for child in children {
                    let node = self.assemble(child, Some((id, level)))?;
                    members.extend_from_slice(self.members(&node));
                    nodes.push(node);
                }
                members.sort_unstable();
                let v = &mut self.vertices[id.0];
                v.children = nodes;
                v.members = members;
                Ok(Node::Vertex(id))
            }
        }
    }

    pub fn to_raw(&self) -> RawNode {
        self.raw_at(self.root)
    }

    fn raw_at(&self, node: Node) -> RawNode {
        match node {
            Node::End(l) => RawNode::Leaf(l),
            Node::Vertex(v) => {
                let vx = self.vertex(v);
                RawNode::Internal(vx.level, vx.children.iter().map(|&c| self.raw_at(c)).collect())
            }
        }
    }

    pub fn root(&self) -> Node {
        self.root
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, id: VertexId) -> &Vertex {
        &self.vertices[id.0]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.end_parent.len()
    }

    /// Leaf labels in increasing order.
    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        self.end_parent.keys().copied()
    }

    pub fn contains_leaf(&self, label: usize) -> bool {
        self.end_parent.contains_key(&label)
    }

    pub fn children(&self, node: Node) -> &[Node] {
        match node {
            Node::Vertex(v) => &self.vertex(v).children,
            Node::End(_) => &[],
        }
    }

    pub fn members<'a>(&'a self, node: &'a Node) -> &'a [usize] {
        match node {
            Node::Vertex(v) => &self.vertex(*v).members,
            Node::End(l) => std::slice::from_ref(l),
        }
    }

    pub fn size(&self, node: Node) -> usize {
        match node {
            Node::Vertex(v) => self.vertex(v).size(),
            Node::End(_) => 1,
        }
    }

    pub fn level(&self, node: Node) -> Option<i64> {
        node.vertex().map(|v| self.vertex(v).level)
    }

    /// Diameter of the node's member set; zero for ends.
    pub fn mu(&self, node: Node) -> NormValue {
        match node {
            Node::Vertex(v) => self.vertex(v).mu(),
            Node::End(_) => NormValue::Zero,
        }
    }

    pub fn parent(&self, node: Node) -> Option<VertexId> {
        match node {
            Node::Vertex(v) => self.vertex(v).parent,
            Node::End(l) => self.end_parent.get(&l).copied().flatten(),
        }
    }

    pub fn end_node(&self, label: usize) -> Result<Node> {
        if self.contains_leaf(label) {
            Ok(Node::End(label))
        } else {
            Err(Error::UnknownMember(label))
        }
    }

    /// Vertices from the root down to (excluding) the given node.
    pub fn ancestors(&self, node: Node) -> Vec<VertexId> {
        let mut path = Vec::new();
        let mut cur = self.parent(node);
        while let Some(v) = cur {
            path.push(v);
            cur = self.vertex(v).parent;
        }
        path.reverse();
        path
    }

    /// Smallest node whose member set contains every given label.
    pub fn lca(&self, labels: &[usize]) -> Result<Node> {
        let (&first, rest) = labels.split_first().ok_or(Error::EmptySubset)?;
        for &l in labels {
            self.end_node(l)?;
        }
        if rest.iter().all(|&l| l == first) {
            return Ok(Node::End(first));
        }
        let mut path = self.ancestors(Node::End(first));
        for &l in rest {
            let other = self.ancestors(Node::End(l));
            let common = path.iter().zip(&other).take_while(|(a, b)| a == b).count();
            path.truncate(common);
        }
        Ok(Node::Vertex(*path.last().expect("distinct leaves share the root")))
    }

    /// Diameter of a leaf set, read off the tree.
    pub fn diameter(&self, labels: &[usize]) -> Result<NormValue> {
        Ok(self.mu(self.lca(labels)?))
    }

    /// The tree of the sub-dataset `keep`, with collapsed single-child
    /// vertices. Levels and leaf labels are preserved. `None` when nothing
    /// is kept.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> Option<Tree> {
        let raw = self.restrict_raw(self.root, &keep)?;
        Some(Tree::from_raw(raw).expect("restriction of a valid tree is valid"))
    }

    fn restrict_raw(&self, node: Node, keep: &impl Fn(usize) -> bool) -> Option<RawNode> {
        match node {
            Node::End(l) => keep(l).then_some(RawNode::Leaf(l)),
            Node::Vertex(v) => {
                let vx = self.vertex(v);
                let mut kept: Vec<RawNode> =
                    vx.children.iter().filter_map(|&c| self.restrict_raw(c, keep)).collect();
                match kept.len() {
                    0 => None,
                    1 => kept.pop(),
                    _ => Some(RawNode::Internal(vx.level, kept)),
                }
            }
        }
    }

    /// Children of `node` in the tree restricted to the leaves accepted by
    /// `keep`, expressed as nodes of this tree: each child with surviving
    /// leaves is followed down while it has exactly one surviving child.
    pub fn reduced_children(&self, node: Node, keep: &impl Fn(usize) -> bool) -> Vec<Node> {
        self.children(node)
            .iter()
            .filter_map(|&c| self.collapse(c, keep))
            .collect()
    }

    /// The node of the restricted tree that `node` becomes.
    pub fn collapse(&self, node: Node, keep: &impl Fn(usize) -> bool) -> Option<Node> {
        if !self.members(&node).iter().any(|&l| keep(l)) {
            return None;
        }
        let mut cur = node;
        loop {
            let alive: Vec<Node> = self
                .children(cur)
                .iter()
                .copied()
                .filter(|c| self.members(c).iter().any(|&l| keep(l)))
                .collect();
            if alive.len() == 1 {
                cur = alive[0];
            } else {
                return Some(cur);
            }
        }
    }

    /// Largest number of children of any vertex.
    pub fn max_fan_out(&self) -> usize {
        self.vertices.iter().map(|v| v.children.len()).max().unwrap_or(0)
    }

    /// Label-free canonical form; two trees have equal forms exactly when
    /// they are isomorphic as level-labelled rooted trees.
    pub fn shape(&self) -> String {
        self.shape_at(self.root)
    }

    fn shape_at(&self, node: Node) -> String {
        match node {
            Node::End(_) => "L".to_string(),
            Node::Vertex(v) => {
                let vx = self.vertex(v);
                let mut parts: Vec<String> = vx.children.iter().map(|&c| self.shape_at(c)).collect();
                parts.sort();
                format!("({} {})", vx.level, parts.join(" "))
            }
        }
    }

    /// Member sets of all vertices, sorted; with [`Tree::shape`] this pins
    /// a labelled tree up to vertex numbering.
    pub fn vertex_member_sets(&self) -> Vec<(i64, Vec<usize>)> {
        let mut sets: Vec<_> = self.vertices.iter().map(|v| (v.level, v.members.clone())).collect();
        sets.sort();
        sets
    }

    pub(crate) fn write_grammar(&self, node: Node, out: &mut String) {
        match node {
            Node::End(_) => out.push('L'),
            Node::Vertex(v) => {
                let vx = self.vertex(v);
                out.push('(');
                out.push_str(&vx.level.to_string());
                for &c in &vx.children {
                    out.push(' ');
                    self.write_grammar(c, out);
                }
                out.push(')');
            }
        }
    }
}

/// A dendrogram given by shape and levels alone, written as nested groups
/// `(level child child …)` with `L` for an end, e.g.
/// `(0 (1 (2 L L) (2 L L)) (1 (2 L L) (2 (3 L L)(3 L L)(3 L L L))))`.
///
/// Ends are labelled `0, 1, 2, …` in order of appearance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractDendrogram {
    tree: Tree,
}

impl AbstractDendrogram {
    pub fn parse(text: &str) -> Result<Self> {
        let mut parser = TreeParser { chars: text.char_indices().peekable(), next_leaf: 0, text };
        parser.skip_ws();
        let raw = parser.node()?;
        parser.skip_ws();
        if let Some((pos, c)) = parser.chars.next() {
            return Err(Error::Syntax(format!("unexpected `{c}` at offset {pos} after the tree")));
        }
        Ok(AbstractDendrogram { tree: Tree::from_raw(raw)? })
    }

    pub fn from_tree(tree: Tree) -> Self {
        AbstractDendrogram { tree }
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn into_tree(self) -> Tree {
        self.tree
    }
}

impl fmt::Display for AbstractDendrogram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        self.tree.write_grammar(self.tree.root(), &mut out);
        f.write_str(&out)
    }
}

impl std::str::FromStr for AbstractDendrogram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

struct TreeParser<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    next_leaf: usize,
    text: &'a str,
}

impl TreeParser<'_> {
    fn skip_ws(&mut self) {
        while self.chars.peek().is_some_and(|(_, c)| c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn node(&mut self) -> Result<RawNode> {
        match self.chars.next() {
            Some((_, 'L')) => {
                let label = self.next_leaf;
                self.next_leaf += 1;
                Ok(RawNode::Leaf(label))
            }
            Some((_, '(')) => {
                self.skip_ws();
                let level = self.integer()?;
                let mut children = Vec::new();
                loop {
                    self.skip_ws();
                    match self.chars.peek() {
                        Some((_, ')')) => {
                            self.chars.next();
                            break;
                        }
                        Some(_) => children.push(self.node()?),
                        None => return Err(Error::Syntax("unbalanced parentheses".into())),
                    }
                }
                Ok(RawNode::Internal(level, children))
            }
            Some((pos, c)) => Err(Error::Syntax(format!("unexpected `{c}` at offset {pos}"))),
            None => Err(Error::Syntax("unexpected end of tree".into())),
        }
    }

    fn integer(&mut self) -> Result<i64> {
        let start = match self.chars.peek() {
            Some(&(pos, _)) => pos,
            None => return Err(Error::Syntax("expected a level".into())),
        };
        let mut end = start;
        while let Some(&(pos, c)) = self.chars.peek() {
            if c.is_ascii_digit() || (c == '-' && pos == start) {
                end = pos + c.len_utf8();
                self.chars.next();
            } else {
                break;
            }
        }
        self.text[start..end]
            .parse()
            .map_err(|_| Error::Syntax(format!("expected a level at offset {start}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const THIRTEEN: &str = "(0 (1 (2 L L) (2 L L)) (1 (2 L L) (2 (3 L L)(3 L L)(3 L L L))))";

    #[test]
    fn parse_thirteen_point_tree() {
        let t = AbstractDendrogram::parse(THIRTEEN).unwrap();
        let tree = t.tree();
        assert_eq!(tree.leaf_count(), 13);
        assert_eq!(tree.vertex_count(), 10);
        assert_eq!(tree.max_fan_out(), 3);
        let root = tree.vertex(VertexId(0));
        assert_eq!(root.level, 0);
        assert_eq!(root.size(), 13);
        let sizes: Vec<usize> = root.children.iter().map(|&c| tree.size(c)).collect();
        assert_eq!(sizes, vec![4, 9]);
        assert_eq!(t.to_string(), "(0 (1 (2 L L) (2 L L)) (1 (2 L L) (2 (3 L L) (3 L L) (3 L L L))))");
    }

    #[test]
    fn parse_errors() {
        assert!(AbstractDendrogram::parse("(0 L)").is_err());
        assert!(AbstractDendrogram::parse("(1 (1 L L) L)").is_err());
        assert!(AbstractDendrogram::parse("(0 L L").is_err());
        assert!(AbstractDendrogram::parse("(0 L L) L").is_err());
        assert!(AbstractDendrogram::parse("(x L L)").is_err());
        assert!(AbstractDendrogram::parse("").is_err());
    }

    #[test]
    fn single_leaf_and_negative_levels() {
        let t = AbstractDendrogram::parse("L").unwrap();
        assert_eq!(t.tree().vertex_count(), 0);
        assert_eq!(t.tree().root(), Node::End(0));
        let t = AbstractDendrogram::parse("(-2 L (0 L L))").unwrap();
        assert_eq!(t.tree().vertex(VertexId(0)).level, -2);
    }

    #[test]
    fn lca_and_restrict() {
        let t = AbstractDendrogram::parse(THIRTEEN).unwrap().into_tree();
        assert_eq!(t.lca(&[0, 1]).unwrap(), Node::Vertex(VertexId(2)));
        assert_eq!(t.lca(&[0, 5]).unwrap(), Node::Vertex(VertexId(0)));
        assert_eq!(t.lca(&[7]).unwrap(), Node::End(7));
        assert_eq!(t.diameter(&[6, 12]).unwrap(), NormValue::Pow(2));
        assert!(t.lca(&[]).is_err());
        assert!(t.lca(&[40]).is_err());

        // keep {x0, x6, x7}: x6 and x7 meet at level 3, x0 joins at level 0
        let r = t.restrict(|l| [0, 6, 7].contains(&l)).unwrap();
        assert_eq!(r.shape(), "(0 (3 L L) L)");
        assert_eq!(r.leaves().collect::<Vec<_>>(), vec![0, 6, 7]);
        assert!(t.restrict(|_| false).is_none());

        let keep = |l: usize| [0, 6, 7].contains(&l);
        let ch = t.reduced_children(t.root(), &keep);
        assert_eq!(ch, vec![Node::End(0), Node::Vertex(VertexId(7))]);
    }

    #[test]
    fn shape_is_label_free() {
        let a = AbstractDendrogram::parse("(0 L (1 L L))").unwrap();
        let b = AbstractDendrogram::parse("(0 (1 L L) L)").unwrap();
        assert_eq!(a.tree().shape(), b.tree().shape());
        assert_ne!(a.tree(), b.tree());
    }
}
