//! The Prüfer-style correspondence φ between plane trees on `[n]` and
//! dispositions from `[n−1]` to `[n]`.
//!
//! Marks: repeatedly delete the maximum leaf of the tree, counting down
//! from `n−1`; the root ends up marked 0, and the mark of any vertex is the
//! smallest mark among its descendants. φ sends a tree to the disposition
//! whose segment `i` lists the marks of the children of vertex `i` in child
//! order. The inverse recovers the marks from the disposition alone by the
//! rightmost-empty-segment rule and rebuilds the tree top-down.
//!
//! Forgetting the linear orders specializes φ to a correspondence between
//! labeled rooted (non-plane) trees and decompositions of `[n−1]` into `n`
//! disjoint sets.

use std::collections::BTreeSet;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::disposition::Disposition;
use crate::error::{Error, Result};
use crate::tree::PlaneTree;

/// A bijection between vertex labels `[n]` and marks `{0,…,n−1}`. For
/// tree-derived tables the root carries mark 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkTable {
    /// `marks[v-1]` is the mark of vertex `v`.
    marks: Vec<usize>,
}

impl MarkTable {
    pub fn new(marks: Vec<usize>) -> Result<Self> {
        let n = marks.len();
        let mut seen = vec![false; n];
        for &mk in &marks {
            if mk >= n {
                return Err(Error::OutOfRange(format!("mark {mk} not below {n}")));
            }
            if seen[mk] {
                return Err(Error::Domain(format!("mark {mk} repeated")));
            }
            seen[mk] = true;
        }
        Ok(MarkTable { marks })
    }

    pub fn n(&self) -> usize {
        self.marks.len()
    }

    pub fn mark(&self, vertex: usize) -> Result<usize> {
        if vertex == 0 || vertex > self.n() {
            return Err(Error::OutOfRange(format!("vertex {vertex}")));
        }
        Ok(self.marks[vertex - 1])
    }

    /// The inverse lookup: which vertex carries `mark`.
    pub fn vertex_with_mark(&self, mark: usize) -> Result<usize> {
        self.marks
            .iter()
            .position(|&mk| mk == mark)
            .map(|i| i + 1)
            .ok_or_else(|| Error::OutOfRange(format!("mark {mark}")))
    }

    /// Marks indexed by vertex label − 1.
    pub fn marks(&self) -> &[usize] {
        &self.marks
    }
}

impl fmt::Display for MarkTable {
    /// Text form: `vertex:mark` pairs sorted by vertex, space separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, mk) in self.marks.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}:{}", i + 1, mk)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MarkRepr {
    marks: std::collections::BTreeMap<String, usize>,
}

impl Serialize for MarkTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MarkRepr {
            marks: self
                .marks
                .iter()
                .enumerate()
                .map(|(i, &mk)| ((i + 1).to_string(), mk))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MarkTable {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = MarkRepr::deserialize(deserializer)?;
        let n = repr.marks.len();
        let mut marks = vec![usize::MAX; n];
        for (vertex, mk) in repr.marks {
            let v: usize = vertex
                .parse()
                .map_err(|_| D::Error::custom(format!("bad vertex key `{vertex}`")))?;
            if v == 0 || v > n {
                return Err(D::Error::custom(format!("vertex {v} outside 1..={n}")));
            }
            marks[v - 1] = mk;
        }
        MarkTable::new(marks).map_err(D::Error::custom)
    }
}

/// Marks a plane tree by repeated maximum-leaf deletion: the first deleted
/// leaf gets `n−1`, counting down until the root alone remains and gets 0.
/// A leaf is a vertex with no children left in the partially deleted tree;
/// "maximum" compares vertex labels.
pub fn prufer_marks(tree: &PlaneTree) -> MarkTable {
    let n = tree.n();
    let mut child_count: Vec<usize> = (1..=n)
        .map(|v| tree.children_of(v).expect("label in range").len())
        .collect();
    let mut leaves: BTreeSet<usize> = (1..=n).filter(|&v| child_count[v - 1] == 0).collect();
    let mut marks = vec![0usize; n];
    for counter in (1..n).rev() {
        let &leaf = leaves.iter().next_back().expect("a leaf always exists");
        leaves.remove(&leaf);
        marks[leaf - 1] = counter;
        let parent = tree
            .parent_of(leaf)
            .expect("label in range")
            .expect("only the root is parentless and it is deleted last");
        child_count[parent - 1] -= 1;
        if child_count[parent - 1] == 0 {
            leaves.insert(parent);
        }
    }
    // The root is the sole survivor and keeps mark 0.
    MarkTable { marks }
}

/// φ: the disposition whose segment `i` holds the marks of the children of
/// vertex `i`, in child order. Segment sizes are the child counts, segment
/// `i` has `young(i)` right-to-left minima, and the root's segment is the
/// one containing the element 1 (for `n ≥ 2`).
pub fn phi(tree: &PlaneTree) -> Disposition {
    let marks = prufer_marks(tree);
    let segments: Vec<Vec<usize>> = (1..=tree.n())
        .map(|v| {
            tree.children_of(v)
                .expect("label in range")
                .iter()
                .map(|&c| marks.mark(c).expect("label in range"))
                .collect()
        })
        .collect();
    Disposition::new(segments).expect("marks of children partition [n-1]")
}

/// Recovers the mark table from a disposition with `m = n−1` alone, without
/// building the tree: count down from `n−1`, each time marking the
/// rightmost unmarked index whose current segment is empty, deleting that
/// segment, and removing the counter value from the segment containing it.
/// The last unmarked index receives 0.
pub fn marks_from_disposition(d: &Disposition) -> Result<MarkTable> {
    let n = d.n();
    if d.m() + 1 != n {
        return Err(Error::Domain(format!(
            "need m = n-1, got m={}, n={}",
            d.m(),
            n
        )));
    }
    let mut segments: Vec<Vec<usize>> = d.segments().to_vec();
    let mut marked = vec![false; n];
    let mut marks = vec![0usize; n];
    for counter in (1..n).rev() {
        let idx = (0..n)
            .rev()
            .find(|&i| !marked[i] && segments[i].is_empty())
            // Guaranteed for genuine dispositions with m = n-1; asserted
            // rather than assumed.
            .expect("an unmarked empty segment exists at every step");
        marked[idx] = true;
        marks[idx] = counter;
        let holder = segments
            .iter()
            .position(|seg| seg.contains(&counter))
            .expect("counter value is present");
        segments[holder].retain(|&a| a != counter);
    }
    Ok(MarkTable { marks })
}

/// φ⁻¹: rebuilds the plane tree from a disposition with `m = n−1`. The root
/// is the vertex marked 0 and the children of any vertex `v` are the
/// vertices whose marks appear in segment `v`, in segment order.
pub fn phi_inverse(d: &Disposition) -> Result<PlaneTree> {
    let marks = marks_from_disposition(d)?;
    let n = d.n();
    let mut vertex_of_mark = vec![0usize; n];
    for v in 1..=n {
        vertex_of_mark[marks.mark(v)?] = v;
    }
    let children: Vec<Vec<usize>> = d
        .segments()
        .iter()
        .map(|seg| seg.iter().map(|&mk| vertex_of_mark[mk]).collect())
        .collect();
    PlaneTree::new(vertex_of_mark[0], children)
}

/// A decomposition of `[m]` into `n` disjoint unordered blocks: the image
/// of a disposition once each segment's linear order is forgotten. These
/// correspond to labeled rooted (non-plane) trees.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Decomposition {
    /// Blocks stored sorted ascending.
    blocks: Vec<Vec<usize>>,
}

impl Decomposition {
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidDecomposition(
                "need at least one block".into(),
            ));
        }
        let m: usize = blocks.iter().map(Vec::len).sum();
        let mut seen = vec![false; m];
        let mut blocks = blocks;
        for block in &mut blocks {
            block.sort_unstable();
            for &a in block.iter() {
                if a == 0 || a > m {
                    return Err(Error::InvalidDecomposition(format!(
                        "element {a} outside 1..={m}"
                    )));
                }
                if seen[a - 1] {
                    return Err(Error::InvalidDecomposition(format!(
                        "element {a} repeated"
                    )));
                }
                seen[a - 1] = true;
            }
        }
        Ok(Decomposition { blocks })
    }

    pub fn n(&self) -> usize {
        self.blocks.len()
    }

    pub fn m(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// The canonical lift back to a disposition: each block ascending.
    pub fn to_disposition(&self) -> Disposition {
        Disposition::new(self.blocks.clone()).expect("blocks partition [m]")
    }

    pub fn from_disposition(d: &Disposition) -> Self {
        Decomposition::new(d.segments().to_vec()).expect("segments partition [m]")
    }
}

/// The order-forgetting specialization of φ: block `i` is the set of marks
/// of the children of vertex `i`. Marks depend only on labels and the
/// parent relation, never on child order, so this is well defined on the
/// underlying rooted tree; empty blocks correspond to leaves and block
/// sizes to child counts.
pub fn tree_to_decomposition(tree: &PlaneTree) -> Decomposition {
    Decomposition::from_disposition(&phi(tree))
}

/// Inverse of [`tree_to_decomposition`] up to child order: lifts the blocks
/// to the ascending-order disposition and applies φ⁻¹. Any other lift
/// yields the same tree once child order is disregarded.
pub fn decomposition_to_tree(dec: &Decomposition) -> Result<PlaneTree> {
    phi_inverse(&dec.to_disposition())
}

#[derive(Serialize, Deserialize)]
struct DecompositionRepr {
    m: usize,
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Serialize for Decomposition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        DecompositionRepr {
            m: self.m(),
            n: self.n(),
            blocks: self.blocks.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Decomposition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = DecompositionRepr::deserialize(deserializer)?;
        let dec = Decomposition::new(repr.blocks).map_err(D::Error::custom)?;
        if dec.m() != repr.m || dec.n() != repr.n {
            return Err(D::Error::custom("m/n fields disagree with blocks"));
        }
        Ok(dec)
    }
}
