//! Plane trees on `[n]`: labeled rooted trees whose child lists are
//! linearly ordered. Provides the smallest-descendant statistic β, the
//! younger/elder classification of vertices, exhaustive enumeration in
//! canonical text order, the tree-side generating function, and the
//! canonical text / JSON forms.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::disposition::rl_min;
use crate::error::{Error, Result};
use crate::poly::{Polynomial, VarSet};

/// A plane tree on `[n]`. `children[v-1]` lists the children of vertex `v`
/// in their linear order; the parent table is precomputed on construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlaneTree {
    root: usize,
    children: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
}

impl PlaneTree {
    /// Builds and validates a tree: labels must be exactly `[n]` where
    /// `n = children.len()`, every non-root must have one parent, and all
    /// vertices must be reachable from the root.
    pub fn new(root: usize, children: Vec<Vec<usize>>) -> Result<Self> {
        let n = children.len();
        if n == 0 {
            return Err(Error::InvalidTree("no vertices".into()));
        }
        if root == 0 || root > n {
            return Err(Error::InvalidTree(format!("root {root} outside 1..={n}")));
        }
        let mut parent: Vec<Option<usize>> = vec![None; n];
        for (i, kids) in children.iter().enumerate() {
            for &c in kids {
                if c == 0 || c > n {
                    return Err(Error::InvalidTree(format!("vertex {c} outside 1..={n}")));
                }
                if c == root {
                    return Err(Error::InvalidTree("root has a parent".into()));
                }
                if parent[c - 1].is_some() {
                    return Err(Error::InvalidTree(format!("vertex {c} has two parents")));
                }
                parent[c - 1] = Some(i + 1);
            }
        }
        // Reachability from the root doubles as the acyclicity check.
        let mut reached = 0usize;
        let mut stack = vec![root];
        let mut seen = vec![false; n];
        seen[root - 1] = true;
        while let Some(v) = stack.pop() {
            reached += 1;
            for &c in &children[v - 1] {
                if !seen[c - 1] {
                    seen[c - 1] = true;
                    stack.push(c);
                }
            }
        }
        if reached != n {
            return Err(Error::InvalidTree("not connected".into()));
        }
        Ok(PlaneTree {
            root,
            children,
            parent,
        })
    }

    pub fn singleton() -> Self {
        PlaneTree::new(1, vec![vec![]]).expect("single vertex")
    }

    pub fn n(&self) -> usize {
        self.children.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn children_of(&self, v: usize) -> Result<&[usize]> {
        self.check_label(v)?;
        Ok(&self.children[v - 1])
    }

    pub fn parent_of(&self, v: usize) -> Result<Option<usize>> {
        self.check_label(v)?;
        Ok(self.parent[v - 1])
    }

    fn check_label(&self, v: usize) -> Result<()> {
        if v == 0 || v > self.n() {
            return Err(Error::OutOfRange(format!("vertex {v}")));
        }
        Ok(())
    }

    /// Vertices in preorder (parents before children).
    fn preorder(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.n());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            order.push(v);
            for &c in self.children[v - 1].iter().rev() {
                stack.push(c);
            }
        }
        order
    }

    /// β for every vertex: `beta_table()[v-1]` is the smallest label in the
    /// subtree rooted at `v` (each vertex counts as its own descendant).
    pub fn beta_table(&self) -> Vec<usize> {
        let mut beta: Vec<usize> = (1..=self.n()).collect();
        for &v in self.preorder().iter().rev() {
            for &c in &self.children[v - 1] {
                beta[v - 1] = beta[v - 1].min(beta[c - 1]);
            }
        }
        beta
    }

    /// The smallest descendant of `v`.
    pub fn beta(&self, v: usize) -> Result<usize> {
        self.check_label(v)?;
        Ok(self.beta_table()[v - 1])
    }

    /// Whether `v` has a brother to its right whose subtree contains a
    /// smaller label. The root has no brothers and is never elder.
    pub fn is_elder(&self, v: usize) -> Result<bool> {
        self.check_label(v)?;
        Ok(self.elder_flags(&self.beta_table())[v - 1])
    }

    fn elder_flags(&self, beta: &[usize]) -> Vec<bool> {
        let mut elder = vec![false; self.n()];
        for kids in &self.children {
            // Scanning right to left keeps the running minimum of β.
            let mut min_right = usize::MAX;
            for &c in kids.iter().rev() {
                if min_right < beta[c - 1] {
                    elder[c - 1] = true;
                }
                min_right = min_right.min(beta[c - 1]);
            }
        }
        elder
    }

    /// Number of younger children of `v`: the right-to-left minima of the
    /// children's β-sequence.
    pub fn young_children(&self, v: usize) -> Result<usize> {
        self.check_label(v)?;
        let beta = self.beta_table();
        let seq: Vec<usize> = self.children[v - 1].iter().map(|&c| beta[c - 1]).collect();
        rl_min(&seq)
    }

    /// Number of elder children of `v`, counted by the direct
    /// brother-to-the-right scan.
    pub fn eld_children(&self, v: usize) -> Result<usize> {
        self.check_label(v)?;
        let elder = self.elder_flags(&self.beta_table());
        Ok(self.children[v - 1]
            .iter()
            .filter(|&&c| elder[c - 1])
            .count())
    }

    /// Total number of elder vertices.
    pub fn eld_total(&self) -> usize {
        self.elder_flags(&self.beta_table())
            .iter()
            .filter(|&&e| e)
            .count()
    }

    /// Total number of younger vertices (the root included).
    pub fn young_total(&self) -> usize {
        self.n() - self.eld_total()
    }

    /// All per-vertex and total statistics in one pass.
    pub fn stats(&self) -> TreeStats {
        let beta = self.beta_table();
        let elder = self.elder_flags(&beta);
        let young_children: Vec<usize> = self
            .children
            .iter()
            .map(|kids| kids.iter().filter(|&&c| !elder[c - 1]).count())
            .collect();
        let eld_children: Vec<usize> = self
            .children
            .iter()
            .map(|kids| kids.iter().filter(|&&c| elder[c - 1]).count())
            .collect();
        let eld_total = elder.iter().filter(|&&e| e).count();
        TreeStats {
            beta,
            young_children,
            eld_children,
            eld_total,
            young_total: self.n() - eld_total,
        }
    }
}

/// Per-vertex statistics of a plane tree, each vector indexed by label − 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeStats {
    pub beta: Vec<usize>,
    pub young_children: Vec<usize>,
    pub eld_children: Vec<usize>,
    pub eld_total: usize,
    pub young_total: usize,
}

impl fmt::Display for PlaneTree {
    /// Canonical text: root-first preorder with parenthesized child lists,
    /// e.g. `2(4(6) 5(3 1))`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        enum Tok {
            Vertex(usize),
            Char(char),
        }
        let mut stack = vec![Tok::Vertex(self.root)];
        while let Some(tok) = stack.pop() {
            match tok {
                Tok::Char(c) => write!(f, "{c}")?,
                Tok::Vertex(v) => {
                    write!(f, "{v}")?;
                    let kids = &self.children[v - 1];
                    if !kids.is_empty() {
                        write!(f, "(")?;
                        stack.push(Tok::Char(')'));
                        for (i, &c) in kids.iter().enumerate().rev() {
                            stack.push(Tok::Vertex(c));
                            if i > 0 {
                                stack.push(Tok::Char(' '));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

impl FromStr for PlaneTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<PlaneTree> {
        let bytes = s.trim().as_bytes();
        let mut pos = 0usize;
        // (label, children) pairs for every vertex seen so far.
        let mut kids: Vec<(usize, Vec<usize>)> = Vec::new();
        let mut open: Vec<usize> = Vec::new();

        fn read_label(bytes: &[u8], pos: &mut usize) -> Result<usize> {
            let start = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            if start == *pos {
                return Err(Error::Parse(format!("expected a label at byte {start}")));
            }
            std::str::from_utf8(&bytes[start..*pos])
                .expect("digits are ascii")
                .parse::<usize>()
                .map_err(|_| Error::Parse("label out of range".into()))
        }

        let root = read_label(bytes, &mut pos)?;
        kids.push((root, Vec::new()));
        let mut current = 0usize; // index into kids of the vertex just read
        while pos < bytes.len() {
            match bytes[pos] {
                b'(' => {
                    pos += 1;
                    open.push(current);
                    let l = read_label(bytes, &mut pos)?;
                    kids.push((l, Vec::new()));
                    current = kids.len() - 1;
                    let parent = *open.last().expect("just pushed");
                    kids[parent].1.push(l);
                }
                b' ' => {
                    pos += 1;
                    let parent = *open
                        .last()
                        .ok_or_else(|| Error::Parse("sibling outside a child list".into()))?;
                    let l = read_label(bytes, &mut pos)?;
                    kids.push((l, Vec::new()));
                    current = kids.len() - 1;
                    kids[parent].1.push(l);
                }
                b')' => {
                    pos += 1;
                    current = open
                        .pop()
                        .ok_or_else(|| Error::Parse("unbalanced `)`".into()))?;
                }
                other => {
                    return Err(Error::Parse(format!(
                        "unexpected byte `{}` at {pos}",
                        other as char
                    )));
                }
            }
        }
        if !open.is_empty() {
            return Err(Error::Parse("unbalanced `(`".into()));
        }
        let _ = current;
        let n = kids.len();
        let mut children = vec![Vec::new(); n];
        let mut seen = vec![false; n];
        for (label, list) in kids {
            if label == 0 || label > n {
                return Err(Error::InvalidTree(format!(
                    "vertex {label} outside 1..={n}"
                )));
            }
            if seen[label - 1] {
                return Err(Error::InvalidTree(format!("vertex {label} repeated")));
            }
            seen[label - 1] = true;
            children[label - 1] = list;
        }
        PlaneTree::new(root, children)
    }
}

/// Recursive JSON node: `{"label": v, "children": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeNode {
    pub label: usize,
    #[serde(default)]
    pub children: Vec<TreeNode>,
}

#[derive(Serialize, Deserialize)]
struct TreeRepr {
    n: usize,
    tree: TreeNode,
}

impl PlaneTree {
    pub fn to_node(&self) -> TreeNode {
        fn build(t: &PlaneTree, v: usize) -> TreeNode {
            TreeNode {
                label: v,
                children: t.children[v - 1].iter().map(|&c| build(t, c)).collect(),
            }
        }
        build(self, self.root)
    }

    pub fn from_node(node: &TreeNode) -> Result<PlaneTree> {
        let mut pairs: Vec<(usize, Vec<usize>)> = Vec::new();
        let mut stack = vec![node];
        while let Some(nd) = stack.pop() {
            pairs.push((nd.label, nd.children.iter().map(|c| c.label).collect()));
            for c in &nd.children {
                stack.push(c);
            }
        }
        let n = pairs.len();
        let mut children = vec![Vec::new(); n];
        let mut seen = vec![false; n];
        for (label, list) in pairs {
            if label == 0 || label > n {
                return Err(Error::InvalidTree(format!(
                    "vertex {label} outside 1..={n}"
                )));
            }
            if seen[label - 1] {
                return Err(Error::InvalidTree(format!("vertex {label} repeated")));
            }
            seen[label - 1] = true;
            children[label - 1] = list;
        }
        PlaneTree::new(node.label, children)
    }
}

impl Serialize for PlaneTree {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        TreeRepr {
            n: self.n(),
            tree: self.to_node(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PlaneTree {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = TreeRepr::deserialize(deserializer)?;
        let t = PlaneTree::from_node(&repr.tree).map_err(D::Error::custom)?;
        if t.n() != repr.n {
            return Err(D::Error::custom("n field disagrees with tree"));
        }
        Ok(t)
    }
}

/// Every plane tree on `[n]` (restricted to a fixed root when given),
/// streamed in lexicographic order of the canonical text form.
///
/// The stream performs a depth-first walk over all valid canonical texts,
/// choosing continuations in byte order, so trees come out sorted without
/// the family ever being materialized; memory stays O(n). The construction
/// is independent of any tree/disposition correspondence, so it can serve
/// as an oracle for one.
pub fn enumerate_plane_trees(n: usize, root: Option<usize>) -> PlaneTrees {
    assert!(n >= 1, "need n >= 1");
    if let Some(r) = root {
        assert!(r >= 1 && r <= n, "root in 1..=n");
    }
    // Candidate labels in the byte order of their decimal forms, which is
    // what lexicographic comparison of the text sees.
    let mut label_order: Vec<usize> = (1..=n).collect();
    label_order.sort_by_key(|v| v.to_string());
    PlaneTrees {
        n,
        fixed_root: root,
        label_order,
        children: vec![Vec::new(); n],
        open: Vec::new(),
        used: vec![false; n],
        used_count: 0,
        root: 0,
        frames: Vec::new(),
        moves: Vec::new(),
        started: false,
        done: false,
    }
}

#[derive(Clone, Copy, Debug)]
enum Alt {
    /// Place `label` as the root (first move only).
    Root(usize),
    /// Place `label` as the next sibling in the innermost open list.
    Sibling(usize),
    /// Open the child list of the vertex just placed and put `label` in it.
    OpenChild { parent: usize, label: usize },
    /// Close the innermost open child list.
    Close,
}

struct Frame {
    alts: Vec<Alt>,
    next: usize,
}

pub struct PlaneTrees {
    n: usize,
    fixed_root: Option<usize>,
    label_order: Vec<usize>,
    children: Vec<Vec<usize>>,
    /// Vertices whose child lists are currently open, outermost first.
    open: Vec<usize>,
    used: Vec<bool>,
    used_count: usize,
    root: usize,
    frames: Vec<Frame>,
    moves: Vec<Alt>,
    started: bool,
    done: bool,
}

impl PlaneTrees {
    fn unused_labels(&self) -> impl Iterator<Item = usize> + '_ {
        self.label_order
            .iter()
            .copied()
            .filter(|&l| !self.used[l - 1])
    }

    /// Choices available after a vertex was just placed (`fresh`) or after
    /// a child list closed over it, in canonical byte order: siblings
    /// (` `), then opening a child list (`(`), then closing (`)`).
    fn make_frame(&self, current: usize, fresh: bool) -> Frame {
        let mut alts = Vec::new();
        if !self.open.is_empty() {
            for l in self.unused_labels() {
                alts.push(Alt::Sibling(l));
            }
        }
        if fresh {
            for l in self.unused_labels() {
                alts.push(Alt::OpenChild {
                    parent: current,
                    label: l,
                });
            }
        }
        // Closing the outermost list ends the tree, which is only viable
        // once every label has been placed.
        if !self.open.is_empty() && (self.open.len() > 1 || self.used_count == self.n) {
            alts.push(Alt::Close);
        }
        Frame { alts, next: 0 }
    }

    fn place(&mut self, label: usize) {
        self.used[label - 1] = true;
        self.used_count += 1;
        if let Some(&top) = self.open.last() {
            self.children[top - 1].push(label);
        } else {
            self.root = label;
        }
    }

    fn apply(&mut self, alt: Alt) -> (usize, bool) {
        match alt {
            Alt::Root(l) | Alt::Sibling(l) => {
                self.place(l);
                (l, true)
            }
            Alt::OpenChild { parent, label } => {
                self.open.push(parent);
                self.place(label);
                (label, true)
            }
            Alt::Close => {
                let p = self.open.pop().expect("close only with open lists");
                (p, false)
            }
        }
    }

    fn undo(&mut self, alt: Alt) {
        match alt {
            Alt::Root(l) => {
                self.used[l - 1] = false;
                self.used_count -= 1;
                self.root = 0;
            }
            Alt::Sibling(l) => {
                self.used[l - 1] = false;
                self.used_count -= 1;
                let top = *self.open.last().expect("sibling had an open list");
                self.children[top - 1].pop();
            }
            Alt::OpenChild { parent, label } => {
                self.used[label - 1] = false;
                self.used_count -= 1;
                self.children[parent - 1].pop();
                self.open.pop();
            }
            Alt::Close => {
                // Reopen the list that was closed: its owner is the last
                // child of the enclosing list (or the root).
                let reopened = match self.open.last() {
                    Some(&top) => *self.children[top - 1]
                        .last()
                        .expect("closed vertex was a child"),
                    None => self.root,
                };
                self.open.push(reopened);
            }
        }
    }

    fn snapshot(&self) -> PlaneTree {
        PlaneTree::new(self.root, self.children.clone()).expect("construction is valid")
    }
}

impl Iterator for PlaneTrees {
    type Item = PlaneTree;

    fn next(&mut self) -> Option<PlaneTree> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            let roots: Vec<Alt> = match self.fixed_root {
                Some(r) => vec![Alt::Root(r)],
                None => self.label_order.iter().map(|&l| Alt::Root(l)).collect(),
            };
            self.frames.push(Frame {
                alts: roots,
                next: 0,
            });
        }
        loop {
            let Some(frame) = self.frames.last_mut() else {
                self.done = true;
                return None;
            };
            if frame.next >= frame.alts.len() {
                self.frames.pop();
                if let Some(mv) = self.moves.pop() {
                    self.undo(mv);
                }
                continue;
            }
            let alt = frame.alts[frame.next];
            frame.next += 1;
            let (current, fresh) = self.apply(alt);
            self.moves.push(alt);
            if self.open.is_empty() && self.used_count == self.n {
                // Complete tree. Leave an exhausted frame so the next call
                // backtracks over the final move.
                self.frames.push(Frame {
                    alts: Vec::new(),
                    next: 0,
                });
                return Some(self.snapshot());
            }
            self.frames.push(self.make_frame(current, fresh));
        }
    }
}

/// `Σ_T t^{eld(T)} ∏_i x_i^{young_T(i)}` over all plane trees on `[n]`
/// (or those with the given root), by exhaustive enumeration, over the
/// context `x1,…,xn,t`.
pub fn tree_generating_function(n: usize, root: Option<usize>) -> Result<Polynomial> {
    if n == 0 {
        return Err(Error::Domain("need n >= 1".into()));
    }
    let mut sum = Polynomial::zero(VarSet::xs_t(n));
    let mut exps = vec![0u16; n + 1];
    for t in enumerate_plane_trees(n, root) {
        let stats = t.stats();
        for (i, &y) in stats.young_children.iter().enumerate() {
            exps[i] = y as u16;
        }
        exps[n] = stats.eld_total as u16;
        sum.add_term(&exps, 1)?;
    }
    Ok(sum)
}

/// Closed-form plane tree counts: `|P_n| = (2n−2)!/(n−1)!`, and with a
/// fixed root `|P_n^{(r)}| = (2n−2)!/n!` independently of `r`.
pub fn plane_tree_count(n: usize, rooted: bool) -> u64 {
    assert!(n >= 1);
    let num: u64 = (1..=2 * n as u64 - 2).product();
    let den: u64 = (1..=n as u64 - u64::from(!rooted)).product();
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{BTreeMap, BTreeSet};

    pub(crate) fn figure_tree_small() -> PlaneTree {
        "2(4(6) 5(3 1))".parse().unwrap()
    }

    /// The 17-vertex worked example: root 8, child orders as drawn.
    pub(crate) fn figure_tree_large() -> PlaneTree {
        "8(2(14(16) 12) 5 3(1(4 6(15) 11 9(10 7) 17 13)))"
            .parse()
            .unwrap()
    }

    #[test]
    fn beta_of_leaf_and_root() {
        let t = figure_tree_small();
        assert_eq!(t.beta(6).unwrap(), 6);
        assert_eq!(t.beta(t.root()).unwrap(), 1);
        // Children of 5 are 3 and 1.
        assert_eq!(t.beta(5).unwrap(), 1);
    }

    #[test]
    fn beta_is_min_over_children() {
        for t in enumerate_plane_trees(5, None) {
            let beta = t.beta_table();
            for v in 1..=5 {
                let kids_min = t
                    .children_of(v)
                    .unwrap()
                    .iter()
                    .map(|&c| beta[c - 1])
                    .min()
                    .unwrap_or(usize::MAX);
                assert_eq!(beta[v - 1], v.min(kids_min));
            }
        }
    }

    #[test]
    fn elder_vertices_of_large_figure() {
        let t = figure_tree_large();
        let elders: Vec<usize> = (1..=17).filter(|&v| t.is_elder(v).unwrap()).collect();
        assert_eq!(elders, vec![2, 5, 10, 11, 14, 17]);
        assert_eq!(t.eld_total(), 6);
        assert_eq!(t.young_total(), 11);
    }

    #[test]
    fn root_and_only_children_are_never_elder() {
        let t = figure_tree_small();
        assert!(!t.is_elder(2).unwrap());
        // 6 is an only child.
        assert!(!t.is_elder(6).unwrap());
    }

    #[test]
    fn young_children_of_large_figure_vertex_one() {
        let t = figure_tree_large();
        assert_eq!(t.young_children(1).unwrap(), 4);
        assert_eq!(t.eld_children(1).unwrap(), 2);
        // Cross-check against the β-sequence of the children of 1; it is
        // order-isomorphic to the mark sequence (4,6,10,7,16,12), so both
        // carry the same right-to-left minima.
        let beta = t.beta_table();
        let seq: Vec<usize> = t
            .children_of(1)
            .unwrap()
            .iter()
            .map(|&c| beta[c - 1])
            .collect();
        assert_eq!(seq, vec![4, 6, 11, 7, 17, 13]);
        assert_eq!(rl_min(&seq).unwrap(), 4);
        assert_eq!(rl_min(&[4, 6, 10, 7, 16, 12]).unwrap(), 4);
    }

    #[test]
    fn leaf_and_single_child_counts() {
        let t = figure_tree_small();
        assert_eq!(t.young_children(6).unwrap(), 0);
        assert_eq!(t.young_children(4).unwrap(), 1);
    }

    #[test]
    fn paths_have_no_elders() {
        let t: PlaneTree = "3(1(2))".parse().unwrap();
        assert_eq!(t.eld_total(), 0);
        assert_eq!(PlaneTree::singleton().eld_total(), 0);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_plane_trees(1, None).count(), 1);
        assert_eq!(enumerate_plane_trees(3, None).count(), 12);
        assert_eq!(enumerate_plane_trees(3, Some(1)).count(), 4);
        for n in 1..=6 {
            assert_eq!(
                enumerate_plane_trees(n, None).count() as u64,
                plane_tree_count(n, false)
            );
            // Rooted counts are independent of the root.
            for r in 1..=n {
                assert_eq!(
                    enumerate_plane_trees(n, Some(r)).count() as u64,
                    plane_tree_count(n, true)
                );
            }
        }
    }

    #[test]
    fn enumeration_is_in_canonical_text_order() {
        for n in 1..=4 {
            let texts: Vec<String> = enumerate_plane_trees(n, None)
                .map(|t| t.to_string())
                .collect();
            let mut sorted = texts.clone();
            sorted.sort();
            assert_eq!(texts, sorted);
            sorted.dedup();
            assert_eq!(texts.len(), sorted.len());
        }
    }

    #[test]
    fn enumeration_order_holds_with_multi_digit_labels() {
        // The full family at n=12 is astronomically large; a long prefix
        // already exercises the "10" < "2" byte-order cases.
        let mut last = String::new();
        for t in enumerate_plane_trees(12, None).take(20_000) {
            let text = t.to_string();
            assert!(last < text, "{last} !< {text}");
            last = text;
        }
    }

    /// Child lists under construction: ordered children per parent label.
    type ChildMap = BTreeMap<usize, Vec<usize>>;

    /// Independent recursive oracle: pick the root, split the remaining
    /// labels into an ordered sequence of nonempty blocks for the root's
    /// subtrees, and recurse into each block.
    fn oracle_trees(labels: &BTreeSet<usize>, root: usize) -> Vec<ChildMap> {
        let rest: BTreeSet<usize> = labels.iter().copied().filter(|&v| v != root).collect();
        let mut out = Vec::new();
        for blocks in ordered_set_partitions(&rest) {
            let mut combos: Vec<(Vec<usize>, ChildMap)> = vec![(Vec::new(), BTreeMap::new())];
            for block in &blocks {
                let mut next = Vec::new();
                for &sub_root in block {
                    for sub in oracle_trees(block, sub_root) {
                        for (kids, map) in &combos {
                            let mut kids = kids.clone();
                            kids.push(sub_root);
                            let mut map = map.clone();
                            map.extend(sub.clone());
                            next.push((kids, map));
                        }
                    }
                }
                combos = next;
            }
            for (kids, mut map) in combos {
                map.insert(root, kids);
                out.push(map);
            }
        }
        out
    }

    /// All ways to split a set into an ordered sequence of nonempty blocks.
    fn ordered_set_partitions(set: &BTreeSet<usize>) -> Vec<Vec<BTreeSet<usize>>> {
        if set.is_empty() {
            return vec![Vec::new()];
        }
        let items: Vec<usize> = set.iter().copied().collect();
        let first = items[0];
        let rest = &items[1..];
        let mut out = Vec::new();
        // Choose the block containing the smallest element, then recurse;
        // that block may sit at any position of the sequence.
        for mask in 0..(1u32 << rest.len()) {
            let mut block = BTreeSet::from([first]);
            let mut remaining = BTreeSet::new();
            for (i, &v) in rest.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    block.insert(v);
                } else {
                    remaining.insert(v);
                }
            }
            for tail in ordered_set_partitions(&remaining) {
                for at in 0..=tail.len() {
                    let mut seq = tail.clone();
                    seq.insert(at, block.clone());
                    out.push(seq);
                }
            }
        }
        out
    }

    #[test]
    fn enumeration_matches_recursive_oracle() {
        for n in 1..=4 {
            let labels: BTreeSet<usize> = (1..=n).collect();
            let mut expected = BTreeSet::new();
            for root in 1..=n {
                for map in oracle_trees(&labels, root) {
                    let children: Vec<Vec<usize>> = (1..=n)
                        .map(|v| map.get(&v).cloned().unwrap_or_default())
                        .collect();
                    expected.insert(PlaneTree::new(root, children).unwrap().to_string());
                }
            }
            let got: BTreeSet<String> = enumerate_plane_trees(n, None)
                .map(|t| t.to_string())
                .collect();
            assert_eq!(got, expected, "n={n}");
        }
    }

    #[test]
    fn rooted_enumeration_agrees_with_filtering() {
        for n in 1..=4 {
            for r in 1..=n {
                let rooted: Vec<String> = enumerate_plane_trees(n, Some(r))
                    .map(|t| t.to_string())
                    .collect();
                let filtered: Vec<String> = enumerate_plane_trees(n, None)
                    .filter(|t| t.root() == r)
                    .map(|t| t.to_string())
                    .collect();
                assert_eq!(rooted, filtered);
            }
        }
    }

    #[test]
    fn statistic_totals_balance() {
        for n in 1..=5 {
            for t in enumerate_plane_trees(n, None) {
                let stats = t.stats();
                assert_eq!(stats.young_total + stats.eld_total, n);
                let young_sum: usize = stats.young_children.iter().sum();
                assert_eq!(young_sum, n - 1 - stats.eld_total);
            }
        }
    }

    #[test]
    fn young_children_equals_rl_min_of_betas() {
        for t in enumerate_plane_trees(5, None) {
            let beta = t.beta_table();
            for v in 1..=5 {
                let seq: Vec<usize> = t
                    .children_of(v)
                    .unwrap()
                    .iter()
                    .map(|&c| beta[c - 1])
                    .collect();
                assert_eq!(t.young_children(v).unwrap(), rl_min(&seq).unwrap());
                assert_eq!(
                    t.young_children(v).unwrap() + t.eld_children(v).unwrap(),
                    t.children_of(v).unwrap().len()
                );
            }
        }
    }

    #[test]
    fn generating_function_small_cases() {
        assert_eq!(tree_generating_function(1, None).unwrap().to_string(), "1");
        assert_eq!(
            tree_generating_function(2, None).unwrap().to_string(),
            "x1 + x2"
        );
    }

    #[test]
    fn text_round_trip() {
        for s in ["1", "2(4(6) 5(3 1))", "3(1(2))", "1(2 3)"] {
            let t: PlaneTree = s.parse().unwrap();
            assert_eq!(t.to_string(), s);
        }
        let t = figure_tree_large();
        assert_eq!(
            t.to_string(),
            "8(2(14(16) 12) 5 3(1(4 6(15) 11 9(10 7) 17 13)))"
        );
    }

    #[test]
    fn parse_rejects_malformed_input() {
        assert!("".parse::<PlaneTree>().is_err());
        assert!("1(2".parse::<PlaneTree>().is_err());
        assert!("1)".parse::<PlaneTree>().is_err());
        assert!("1(1)".parse::<PlaneTree>().is_err());
        // Labels must be exactly [n].
        assert!("1(3)".parse::<PlaneTree>().is_err());
        assert!("2 3".parse::<PlaneTree>().is_err());
    }

    #[test]
    fn json_round_trip() {
        let t = figure_tree_small();
        let json = serde_json::to_string(&t).unwrap();
        let back: PlaneTree = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
        assert!(json.starts_with(r#"{"n":6,"tree":{"label":2,"#));
    }

    #[test]
    fn constructor_rejects_broken_trees() {
        // Two parents for vertex 2.
        assert!(PlaneTree::new(1, vec![vec![2], vec![], vec![2]]).is_err());
        // Root listed as a child.
        assert!(PlaneTree::new(1, vec![vec![2], vec![1]]).is_err());
        // Disconnected: 2 and 3 form their own cycle.
        assert!(PlaneTree::new(1, vec![vec![], vec![3], vec![2]]).is_err());
    }
}
