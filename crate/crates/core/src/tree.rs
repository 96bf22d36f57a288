//! Constituency-tree algebra: arena trees, traversal orders, head finding,
//! label compatibility, and realization of trimmed trees.
//!
//! A tree is an arena of [`TreeNode`]s. Leaves are preterminals: the node
//! label is the POS tag and [`TreeNode::word`] holds the surface form, so a
//! tree's yield can be read off without the owning sentence.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Index of a node in its tree's arena.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Compression label for one constituent. The declaration order fixes the
/// expansion and tie-break order used by the decoder: Retain < Remove < Partial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeLabel {
    Retain,
    Remove,
    Partial,
}

impl NodeLabel {
    pub const ALL: [NodeLabel; 3] = [NodeLabel::Retain, NodeLabel::Remove, NodeLabel::Partial];

    pub fn name(self) -> &'static str {
        match self {
            NodeLabel::Retain => "RETAIN",
            NodeLabel::Remove => "REMOVE",
            NodeLabel::Partial => "PARTIAL",
        }
    }
}

impl std::fmt::Display for NodeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeNode {
    pub label: String,
    /// Surface form for leaves, `None` for internal nodes.
    pub word: Option<String>,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    /// Covered token range `[start, end)`.
    pub span: (usize, usize),
    /// Index into `children` of the syntactic head, once resolved.
    pub head_child: Option<usize>,
}

impl TreeNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn span_len(&self) -> usize {
        self.span.1 - self.span.0
    }
}

/// Recursive node description used to build a [`ParseTree`].
#[derive(Debug, Clone, PartialEq)]
pub enum RawNode {
    Leaf {
        label: String,
        word: String,
    },
    Internal {
        label: String,
        children: Vec<RawNode>,
    },
}

impl RawNode {
    pub fn leaf(label: impl Into<String>, word: impl Into<String>) -> Self {
        RawNode::Leaf {
            label: label.into(),
            word: word.into(),
        }
    }

    pub fn internal(label: impl Into<String>, children: Vec<RawNode>) -> Self {
        RawNode::Internal {
            label: label.into(),
            children,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseTree {
    nodes: Vec<TreeNode>,
    root: NodeId,
    /// Leaf node ids in surface order; `leaves[i]` covers token `i`.
    leaves: Vec<NodeId>,
}

impl ParseTree {
    /// Build a tree from a recursive description. Node ids are assigned in
    /// preorder; spans are computed from the leaf sequence.
    pub fn build(root: RawNode) -> Result<ParseTree> {
        let mut tree = ParseTree {
            nodes: Vec::new(),
            root: NodeId(0),
            leaves: Vec::new(),
        };
        let mut next_token = 0usize;
        tree.add_raw(&root, None, &mut next_token)?;
        if tree.nodes.is_empty() {
            return Err(Error::validation("empty tree"));
        }
        Ok(tree)
    }

    fn add_raw(
        &mut self,
        raw: &RawNode,
        parent: Option<NodeId>,
        next_token: &mut usize,
    ) -> Result<NodeId> {
        let id = NodeId(self.nodes.len());
        match raw {
            RawNode::Leaf { label, word } => {
                if label.is_empty() {
                    return Err(Error::validation("leaf with empty label"));
                }
                let start = *next_token;
                *next_token += 1;
                self.nodes.push(TreeNode {
                    label: label.clone(),
                    word: Some(word.clone()),
                    parent,
                    children: Vec::new(),
                    span: (start, start + 1),
                    head_child: None,
                });
                self.leaves.push(id);
            }
            RawNode::Internal { label, children } => {
                if label.is_empty() {
                    return Err(Error::validation("constituent with empty label"));
                }
                if children.is_empty() {
                    return Err(Error::validation(format!(
                        "constituent {label} has no children"
                    )));
                }
                let start = *next_token;
                self.nodes.push(TreeNode {
                    label: label.clone(),
                    word: None,
                    parent,
                    children: Vec::new(),
                    span: (start, start),
                    head_child: None,
                });
                let mut child_ids = Vec::with_capacity(children.len());
                for child in children {
                    child_ids.push(self.add_raw(child, Some(id), next_token)?);
                }
                self.nodes[id.0].children = child_ids;
                self.nodes[id.0].span = (start, *next_token);
            }
        }
        Ok(id)
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &TreeNode {
        &self.nodes[id.0]
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len()).map(NodeId)
    }

    /// Leaf ids in surface order.
    pub fn leaves(&self) -> &[NodeId] {
        &self.leaves
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    /// Leaf covering token `index`.
    pub fn leaf_for_token(&self, index: usize) -> NodeId {
        self.leaves[index]
    }

    /// Leaf words in surface order.
    pub fn yield_words(&self) -> Vec<&str> {
        self.leaves
            .iter()
            .map(|id| self.node(*id).word.as_deref().unwrap_or_default())
            .collect()
    }

    /// Distance from the root (root is depth 0).
    pub fn depth(&self, id: NodeId) -> usize {
        let mut d = 0;
        let mut cur = id;
        while let Some(p) = self.node(cur).parent {
            d += 1;
            cur = p;
        }
        d
    }

    /// Ancestors from the node's parent up to the root.
    pub fn ancestors(&self, id: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut cur = id;
        while let Some(p) = self.node(cur).parent {
            out.push(p);
            cur = p;
        }
        out
    }

    /// All ids in the subtree rooted at `id`, including `id`.
    pub fn subtree(&self, id: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(n) = stack.pop() {
            out.push(n);
            for &c in self.node(n).children.iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    /// Position of `id` in its parent's child list, with the parent.
    pub fn child_position(&self, id: NodeId) -> Option<(NodeId, usize)> {
        let parent = self.node(id).parent?;
        let pos = self
            .node(parent)
            .children
            .iter()
            .position(|&c| c == id)
            .expect("child listed under its parent");
        Some((parent, pos))
    }

    /// Head child id of an internal node, if resolved.
    pub fn head_child_id(&self, id: NodeId) -> Option<NodeId> {
        let node = self.node(id);
        node.head_child.map(|i| node.children[i])
    }

    /// Follow head children down to the lexical head leaf.
    pub fn head_leaf(&self, id: NodeId) -> Option<NodeId> {
        let mut cur = id;
        loop {
            if self.node(cur).is_leaf() {
                return Some(cur);
            }
            cur = self.head_child_id(cur)?;
        }
    }

    /// Override the head child of an internal node.
    pub fn set_head_child(&mut self, id: NodeId, child_index: usize) {
        assert!(
            child_index < self.nodes[id.index()].children.len(),
            "head child index out of range"
        );
        self.nodes[id.index()].head_child = Some(child_index);
    }

    /// Resolve `head_child` for every internal node using `rules`.
    pub fn resolve_heads(&mut self, rules: &HeadRules) {
        for i in 0..self.nodes.len() {
            if self.nodes[i].is_leaf() {
                continue;
            }
            let idx = find_head_child(self, NodeId(i), rules);
            self.nodes[i].head_child = Some(idx);
        }
    }

    /// Serialize back to a bracketed s-expression. Leaves whose label equals
    /// the word (bare-terminal input) render as the bare word.
    pub fn to_bracketing(&self) -> String {
        let mut out = String::new();
        self.write_node(self.root, &mut out);
        out
    }

    fn write_node(&self, id: NodeId, out: &mut String) {
        let node = self.node(id);
        if let Some(word) = &node.word {
            if *word == node.label {
                out.push_str(word);
            } else {
                out.push('(');
                out.push_str(&node.label);
                out.push(' ');
                out.push_str(word);
                out.push(')');
            }
            return;
        }
        out.push('(');
        out.push_str(&node.label);
        for &child in &node.children {
            out.push(' ');
            self.write_node(child, out);
        }
        out.push(')');
    }
}

/// A partial or complete assignment of labels to tree nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    labels: Vec<Option<NodeLabel>>,
}

impl Labeling {
    pub fn empty(tree: &ParseTree) -> Self {
        Labeling {
            labels: vec![None; tree.len()],
        }
    }

    pub fn get(&self, id: NodeId) -> Option<NodeLabel> {
        self.labels[id.index()]
    }

    pub fn set(&mut self, id: NodeId, label: NodeLabel) {
        self.labels[id.index()] = Some(label);
    }

    pub fn clear(&mut self, id: NodeId) {
        self.labels[id.index()] = None;
    }

    pub fn is_complete(&self) -> bool {
        self.labels.iter().all(|l| l.is_some())
    }

    pub fn assigned(&self) -> impl Iterator<Item = (NodeId, NodeLabel)> + '_ {
        self.labels
            .iter()
            .enumerate()
            .filter_map(|(i, l)| l.map(|l| (NodeId(i), l)))
    }
}

/// A bottom-up visiting order over a tree's nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraversalOrder {
    order: Vec<NodeId>,
    position: Vec<usize>,
}

impl TraversalOrder {
    fn from_order(order: Vec<NodeId>) -> Self {
        let mut position = vec![0usize; order.len()];
        for (pos, id) in order.iter().enumerate() {
            position[id.index()] = pos;
        }
        TraversalOrder { order, position }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn at(&self, pos: usize) -> NodeId {
        self.order[pos]
    }

    /// Position of `id` within the traversal.
    pub fn position(&self, id: NodeId) -> usize {
        self.position[id.index()]
    }
}

/// Standard left-to-right postorder: children before parents.
pub fn postorder(tree: &ParseTree) -> TraversalOrder {
    let mut order = Vec::with_capacity(tree.len());
    fn walk(tree: &ParseTree, id: NodeId, out: &mut Vec<NodeId>) {
        for &child in &tree.node(id).children {
            walk(tree, child, out);
        }
        out.push(id);
    }
    walk(tree, tree.root(), &mut order);
    TraversalOrder::from_order(order)
}

/// Postorder variant that visits each node's head-child subtree first, with
/// the remaining children in their original relative order.
pub fn head_driven_order(tree: &ParseTree) -> Result<TraversalOrder> {
    fn walk(tree: &ParseTree, id: NodeId, out: &mut Vec<NodeId>) -> Result<()> {
        let node = tree.node(id);
        if !node.is_leaf() {
            let head = node.head_child.ok_or_else(|| {
                Error::validation(format!(
                    "node {} ({}) has no head annotation",
                    id.index(),
                    node.label
                ))
            })?;
            walk(tree, node.children[head], out)?;
            for (i, &child) in node.children.iter().enumerate() {
                if i != head {
                    walk(tree, child, out)?;
                }
            }
        }
        out.push(id);
        Ok(())
    }
    let mut order = Vec::with_capacity(tree.len());
    walk(tree, tree.root(), &mut order)?;
    Ok(TraversalOrder::from_order(order))
}

/// Head-percolation table: per constituent label, a scan direction and a
/// priority list of child labels.
#[derive(Debug, Clone)]
pub struct HeadRules {
    rules: std::collections::HashMap<String, (ScanDirection, Vec<String>)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanDirection {
    Left,
    Right,
}

impl HeadRules {
    /// Parse the table format: one line per label, `label direction child...`,
    /// `#` comments and blank lines ignored.
    pub fn parse(text: &str) -> Result<HeadRules> {
        let mut rules = std::collections::HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let label = parts
                .next()
                .ok_or_else(|| Error::validation(format!("head rule line {}: empty", i + 1)))?;
            let dir = match parts.next() {
                Some("left") => ScanDirection::Left,
                Some("right") => ScanDirection::Right,
                other => {
                    return Err(Error::validation(format!(
                        "head rule line {}: bad direction {:?}",
                        i + 1,
                        other
                    )))
                }
            };
            let priorities: Vec<String> = parts.map(str::to_string).collect();
            rules.insert(label.to_string(), (dir, priorities));
        }
        Ok(HeadRules { rules })
    }

    fn lookup(&self, label: &str) -> Option<&(ScanDirection, Vec<String>)> {
        self.rules.get(label)
    }
}

/// The shipped Collins-style head-percolation table.
pub fn default_head_rules() -> &'static HeadRules {
    static RULES: OnceLock<HeadRules> = OnceLock::new();
    RULES.get_or_init(|| {
        HeadRules::parse(include_str!("../data/head_rules.txt")).expect("bundled head rules parse")
    })
}

/// Deterministic head child for an internal node. Unknown labels fall back to
/// the rightmost child; this never fails.
pub fn find_head_child(tree: &ParseTree, id: NodeId, rules: &HeadRules) -> usize {
    let node = tree.node(id);
    debug_assert!(!node.is_leaf(), "head finding on a leaf");
    let n = node.children.len();
    if n == 1 {
        return 0;
    }
    match rules.lookup(&node.label) {
        Some((dir, priorities)) => {
            let scan: Vec<usize> = match dir {
                ScanDirection::Left => (0..n).collect(),
                ScanDirection::Right => (0..n).rev().collect(),
            };
            for want in priorities {
                for &i in &scan {
                    if tree.node(node.children[i]).label == *want {
                        return i;
                    }
                }
            }
            // No priority label present: take the scan-side edge child.
            match dir {
                ScanDirection::Left => 0,
                ScanDirection::Right => n - 1,
            }
        }
        None => n - 1,
    }
}

/// Whether `label` on `node` is compatible with the labels assigned so far.
///
/// Retain/Remove require all children to carry the same label; Partial
/// requires at least one Retained and one Removed node among the already
/// labeled descendants. For leaves, Retain and Remove are always compatible
/// and Partial never is.
pub fn compatible(label: NodeLabel, node: NodeId, tree: &ParseTree, assigned: &Labeling) -> bool {
    let t = tree.node(node);
    if t.is_leaf() {
        return label != NodeLabel::Partial;
    }
    match label {
        NodeLabel::Retain => t
            .children
            .iter()
            .all(|&c| assigned.get(c) == Some(NodeLabel::Retain)),
        NodeLabel::Remove => t
            .children
            .iter()
            .all(|&c| assigned.get(c) == Some(NodeLabel::Remove)),
        NodeLabel::Partial => {
            let mut saw_retain = false;
            let mut saw_remove = false;
            for d in tree.subtree(node) {
                if d == node {
                    continue;
                }
                match assigned.get(d) {
                    Some(NodeLabel::Retain) => saw_retain = true,
                    Some(NodeLabel::Remove) => saw_remove = true,
                    _ => {}
                }
                if saw_retain && saw_remove {
                    return true;
                }
            }
            false
        }
    }
}

/// Token indices kept by a complete labeling: a token survives iff no node on
/// its root path is labeled Remove. Indices come back in surface order.
pub fn realize(tree: &ParseTree, labels: &Labeling) -> Result<Vec<usize>> {
    if !labels.is_complete() {
        return Err(Error::validation("realize requires a complete labeling"));
    }
    let mut kept = Vec::new();
    'tokens: for (tok, &leaf) in tree.leaves().iter().enumerate() {
        let mut cur = Some(leaf);
        while let Some(id) = cur {
            if labels.get(id) == Some(NodeLabel::Remove) {
                continue 'tokens;
            }
            cur = tree.node(id).parent;
        }
        kept.push(tok);
    }
    Ok(kept)
}

/// Node ids whose token span lies entirely inside one of `spans`.
pub fn nodes_within_spans(tree: &ParseTree, spans: &[(usize, usize)]) -> BTreeSet<NodeId> {
    let mut out = BTreeSet::new();
    for id in tree.node_ids() {
        let (s, e) = tree.node(id).span;
        if spans.iter().any(|&(ms, me)| ms <= s && e <= me) {
            out.insert(id);
        }
    }
    out
}
