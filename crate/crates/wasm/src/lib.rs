//! Browser bindings for the demo page. Every export returns a JSON string
//! so the page needs nothing beyond `JSON.parse`; the bundle builders are
//! plain Rust and are unit-tested on the host.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use treedisp::bijection::{phi, phi_inverse, prufer_marks};
use treedisp::disposition::{sample_seeded, Disposition};
use treedisp::tree::{enumerate_plane_trees, plane_tree_count, PlaneTree, TreeNode};
use treedisp::verify::{plan, preflight, run_cell, Caps, Identity, VerificationReport};
use treedisp::{Error, Result};

/// Everything the page needs to draw one tree/disposition pair.
#[derive(Serialize)]
struct Bundle {
    n: usize,
    root: usize,
    tree_text: String,
    tree: TreeNode,
    disposition_text: String,
    segments: Vec<Vec<usize>>,
    /// `marks[v-1]` is the mark of vertex `v`.
    marks: Vec<usize>,
    beta: Vec<usize>,
    /// `elder[v-1]`: whether vertex `v` is elder.
    elder: Vec<bool>,
    young_children: Vec<usize>,
    eld_children: Vec<usize>,
    eld_total: usize,
    young_total: usize,
    rlmin: Vec<usize>,
    gdes: usize,
    tree_count: u64,
}

fn bundle_from_tree(tree: &PlaneTree) -> Result<String> {
    let n = tree.n();
    let d = phi(tree);
    let marks = prufer_marks(tree);
    let tree_stats = tree.stats();
    let d_stats = d.stats();
    let elder = (1..=n)
        .map(|v| tree.is_elder(v))
        .collect::<Result<Vec<bool>>>()?;
    let bundle = Bundle {
        n,
        root: tree.root(),
        tree_text: tree.to_string(),
        tree: tree.to_node(),
        disposition_text: d.to_string(),
        segments: d.segments().to_vec(),
        marks: marks.marks().to_vec(),
        beta: tree_stats.beta,
        elder,
        young_children: tree_stats.young_children,
        eld_children: tree_stats.eld_children,
        eld_total: tree_stats.eld_total,
        young_total: tree_stats.young_total,
        rlmin: d_stats.rlmin,
        gdes: d_stats.gdes,
        tree_count: plane_tree_count(n, false),
    };
    serde_json::to_string(&bundle).map_err(|e| Error::Parse(e.to_string()))
}

fn sample_bundle_impl(n: usize, seed: u64) -> Result<String> {
    if n == 0 || n > 12 {
        return Err(Error::Domain("n must be between 1 and 12".into()));
    }
    let d = sample_seeded(n - 1, n, seed);
    bundle_from_tree(&phi_inverse(&d)?)
}

fn tree_bundle_impl(text: &str) -> Result<String> {
    bundle_from_tree(&text.parse::<PlaneTree>()?)
}

fn disposition_bundle_impl(text: &str) -> Result<String> {
    let d: Disposition = text.parse()?;
    bundle_from_tree(&phi_inverse(&d)?)
}

fn enumerate_bundles_impl(n: usize, offset: usize, limit: usize) -> Result<String> {
    if n == 0 || n > 5 {
        return Err(Error::Domain("gallery supports n between 1 and 5".into()));
    }
    let texts: Vec<String> = enumerate_plane_trees(n, None)
        .skip(offset)
        .take(limit.min(64))
        .map(|t| t.to_string())
        .collect();
    serde_json::to_string(&texts).map_err(|e| Error::Parse(e.to_string()))
}

fn verify_bundle_impl(identity: &str, m_cap: usize, n_cap: usize) -> Result<String> {
    let identity = match identity {
        "all" => None,
        token => Some(token.parse::<Identity>()?),
    };
    // Keep the page responsive: clamp below the CLI defaults.
    let caps = Caps {
        m: Some(m_cap.min(5)),
        n: Some(n_cap.min(5)),
    };
    let cells = plan(identity, &caps);
    preflight(&cells)?;
    let reports: Vec<VerificationReport> = cells
        .iter()
        .map(run_cell)
        .collect::<Result<Vec<_>>>()?;
    serde_json::to_string(&reports).map_err(|e| Error::Parse(e.to_string()))
}

/// A uniformly random tree on `[n]` drawn through the correspondence.
#[wasm_bindgen]
pub fn sample_bundle(n: usize, seed: u64) -> std::result::Result<String, JsError> {
    Ok(sample_bundle_impl(n, seed)?)
}

/// Bundle for a tree given in canonical text, e.g. `2(4(6) 5(3 1))`.
#[wasm_bindgen]
pub fn tree_bundle(text: &str) -> std::result::Result<String, JsError> {
    Ok(tree_bundle_impl(text)?)
}

/// Bundle for a disposition given in one-line text, e.g. `[|4 1||5|3 2|]`.
#[wasm_bindgen]
pub fn disposition_bundle(text: &str) -> std::result::Result<String, JsError> {
    Ok(disposition_bundle_impl(text)?)
}

/// A page of canonical tree texts from the full enumeration.
#[wasm_bindgen]
pub fn enumerate_bundles(n: usize, offset: usize, limit: usize) -> std::result::Result<String, JsError> {
    Ok(enumerate_bundles_impl(n, offset, limit)?)
}

/// Verification reports for one identity (or `all`) at clamped caps.
#[wasm_bindgen]
pub fn verify_bundle(identity: &str, m_cap: usize, n_cap: usize) -> std::result::Result<String, JsError> {
    Ok(verify_bundle_impl(identity, m_cap, n_cap)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundle_contains_the_worked_example() {
        let json = tree_bundle_impl("2(4(6) 5(3 1))").unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["n"], 6);
        assert_eq!(v["root"], 2);
        assert_eq!(v["disposition_text"], "[|4 1||5|3 2|]");
        assert_eq!(v["marks"], serde_json::json!([2, 0, 3, 4, 1, 5]));
        assert_eq!(v["tree_count"], 30240);
    }

    #[test]
    fn sample_and_disposition_bundles_agree() {
        let a = sample_bundle_impl(5, 7).unwrap();
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        let b = disposition_bundle_impl(v["disposition_text"].as_str().unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn gallery_pages_through_the_enumeration() {
        let json = enumerate_bundles_impl(3, 0, 100).unwrap();
        let texts: Vec<String> = serde_json::from_str(&json).unwrap();
        assert_eq!(texts.len(), 12);
        let second: Vec<String> =
            serde_json::from_str(&enumerate_bundles_impl(3, 10, 100).unwrap()).unwrap();
        assert_eq!(second.len(), 2);
        assert_eq!(texts[10], second[0]);
    }

    #[test]
    fn verify_bundle_reports_pass() {
        let json = verify_bundle_impl("eq3", 3, 3).unwrap();
        let reports: Vec<serde_json::Value> = serde_json::from_str(&json).unwrap();
        assert_eq!(reports.len(), 3);
        assert!(reports.iter().all(|r| r["pass"] == true));
    }

    #[test]
    fn errors_surface_as_errors() {
        assert!(tree_bundle_impl("not a tree").is_err());
        assert!(disposition_bundle_impl("[1 2|]").is_err()); // m != n-1
        assert!(sample_bundle_impl(0, 1).is_err());
        assert!(verify_bundle_impl("bogus", 2, 2).is_err());
    }
}
