//! Exhaustive verification of the product identities: each check compares
//! a generating function computed by brute-force enumeration against its
//! closed form (or against a second independent enumeration) by exact
//! polynomial equality, never by spot evaluation. Failures carry the first
//! differing monomial in canonical term order together with both
//! coefficients.

use std::fmt;

use serde::Serialize;

use crate::disposition::{self, enumerate_dispositions};
use crate::error::{Error, Result};
use crate::perm::{cycle_color_generating_function, enumerate_colored};
use crate::poly::{
    disposition_polynomial, gessel_seo_polynomial, homogeneous_disposition_polynomial, Polynomial,
    VarSet,
};
use crate::tree::{enumerate_plane_trees, tree_generating_function};

/// The identities the verifier knows how to check. `FromStr` accepts the
/// CLI tokens given in parentheses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identity {
    /// (`thm2.1`) Σ over dispositions of ∏ x_i^RLmin equals R_m.
    DispositionProduct,
    /// (`q`) the t-graded sum over dispositions equals Q_m.
    HomogeneousProduct,
    /// (`thm2.2`) Σ over colored cycle decompositions equals R_m.
    ColoredCycleProduct,
    /// (`eq3`) the plane-tree sum equals ∏_{k=0}^{n-2}(x1+⋯+xn+kt).
    TreeProduct,
    /// (`eq4`) the rooted plane-tree sum equals x_r ∏_{k=1}^{n-2}(…+kt).
    RootedTreeProduct,
    /// (`transport`) tree-side and disposition-side sums agree, with no
    /// product formula consulted.
    Transport,
    /// (`gessel-seo`) the three-variable rooted expansion, in both the
    /// (t−z)-weight form and the t→t+z shifted form.
    GesselSeo,
}

impl Identity {
    pub const ALL: [Identity; 7] = [
        Identity::DispositionProduct,
        Identity::HomogeneousProduct,
        Identity::ColoredCycleProduct,
        Identity::TreeProduct,
        Identity::RootedTreeProduct,
        Identity::Transport,
        Identity::GesselSeo,
    ];

    pub fn token(&self) -> &'static str {
        match self {
            Identity::DispositionProduct => "thm2.1",
            Identity::HomogeneousProduct => "q",
            Identity::ColoredCycleProduct => "thm2.2",
            Identity::TreeProduct => "eq3",
            Identity::RootedTreeProduct => "eq4",
            Identity::Transport => "transport",
            Identity::GesselSeo => "gessel-seo",
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.token())
    }
}

impl std::str::FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Identity> {
        Identity::ALL
            .iter()
            .copied()
            .find(|id| id.token() == s)
            .ok_or_else(|| Error::Parse(format!("unknown identity `{s}`")))
    }
}

/// Grid ceilings for the verifier, applied per identity. `None` keeps the
/// default desk-scale caps.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Caps {
    pub m: Option<usize>,
    pub n: Option<usize>,
}

impl Caps {
    /// Parses `key=value` pairs separated by commas, e.g. `m=4,n=3`.
    pub fn parse(spec: &str) -> Result<Caps> {
        let mut caps = Caps::default();
        for pair in spec.split(',').filter(|p| !p.is_empty()) {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{pair}`")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad cap value `{value}`")))?;
            match key.trim() {
                "m" => caps.m = Some(value),
                "n" => caps.n = Some(value),
                other => return Err(Error::Parse(format!("unknown cap `{other}`"))),
            }
        }
        Ok(caps)
    }
}

/// One grid cell: an identity at specific parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub identity: Identity,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
}

/// The first differing monomial between the two sides, in canonical term
/// order, with both coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub monomial: String,
    pub lhs: i64,
    pub rhs: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub identity: Identity,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    pub objects_enumerated: u64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl VerificationReport {
    /// Builds a report by exact comparison of the two sides.
    pub fn from_comparison(
        cell: Cell,
        objects_enumerated: u64,
        lhs: &Polynomial,
        rhs: &Polynomial,
    ) -> VerificationReport {
        let counterexample = first_difference(lhs, rhs);
        VerificationReport {
            identity: cell.identity,
            m: cell.m,
            n: cell.n,
            r: cell.r,
            objects_enumerated,
            pass: counterexample.is_none(),
            counterexample,
        }
    }

    /// One human-readable line per report.
    pub fn render_line(&self) -> String {
        let mut params = String::new();
        if let Some(m) = self.m {
            params.push_str(&format!(" m={m}"));
        }
        if let Some(n) = self.n {
            params.push_str(&format!(" n={n}"));
        }
        if let Some(r) = self.r {
            params.push_str(&format!(" r={r}"));
        }
        let status = if self.pass { "PASS" } else { "FAIL" };
        let mut line = format!(
            "{:<10}{params}  objects={}  {status}",
            self.identity.token(),
            self.objects_enumerated
        );
        if let Some(ce) = &self.counterexample {
            line.push_str(&format!(
                "  first difference at {}: lhs={} rhs={}",
                ce.monomial, ce.lhs, ce.rhs
            ));
        }
        line
    }
}

/// Scans both term maps in canonical order and reports the first monomial
/// whose coefficients differ.
pub fn first_difference(lhs: &Polynomial, rhs: &Polynomial) -> Option<Counterexample> {
    if lhs.vars() != rhs.vars() {
        // Incomparable contexts never arise from the verifier's own cells.
        return Some(Counterexample {
            monomial: "<context mismatch>".into(),
            lhs: 0,
            rhs: 0,
        });
    }
    let mut monos: Vec<_> = lhs.terms().map(|(m, _)| m.clone()).collect();
    monos.extend(rhs.terms().map(|(m, _)| m.clone()));
    monos.sort_by(|a, b| b.cmp(a));
    monos.dedup();
    for mono in monos {
        let a = lhs.coefficient(&mono);
        let b = rhs.coefficient(&mono);
        if a != b {
            return Some(Counterexample {
                monomial: lhs.monomial_text(&mono),
                lhs: a,
                rhs: b,
            });
        }
    }
    None
}

fn cell(identity: Identity, m: Option<usize>, n: Option<usize>, r: Option<usize>) -> Cell {
    Cell { identity, m, n, r }
}

/// Σ over D_{m,n} of ∏ x_i^RLmin versus the closed-form product R_m.
pub fn verify_disposition_product(m: usize, n: usize) -> Result<VerificationReport> {
    let rhs = disposition_polynomial(m, n)?;
    let mut lhs = Polynomial::zero(VarSet::xs(n));
    let mut exps = vec![0u16; n];
    let mut objects = 0u64;
    for d in enumerate_dispositions(m, n) {
        let stats = d.stats();
        for (i, &c) in stats.rlmin.iter().enumerate() {
            exps[i] = c as u16;
        }
        lhs.add_term(&exps, 1)?;
        objects += 1;
    }
    Ok(VerificationReport::from_comparison(
        cell(Identity::DispositionProduct, Some(m), Some(n), None),
        objects,
        &lhs,
        &rhs,
    ))
}

/// The t-graded disposition sum versus the homogeneous product Q_m.
pub fn verify_homogeneous_product(m: usize, n: usize) -> Result<VerificationReport> {
    let rhs = homogeneous_disposition_polynomial(m, n)?;
    let lhs = disposition::generating_function(m, n)?;
    let objects = enumerate_dispositions(m, n).count() as u64;
    Ok(VerificationReport::from_comparison(
        cell(Identity::HomogeneousProduct, Some(m), Some(n), None),
        objects,
        &lhs,
        &rhs,
    ))
}

/// The colored-cycle sum versus R_m.
pub fn verify_colored_cycle_product(m: usize, n: usize) -> Result<VerificationReport> {
    let rhs = disposition_polynomial(m, n)?;
    let lhs = cycle_color_generating_function(m, n)?;
    let objects = enumerate_colored(m, n).count() as u64;
    Ok(VerificationReport::from_comparison(
        cell(Identity::ColoredCycleProduct, Some(m), Some(n), None),
        objects,
        &lhs,
        &rhs,
    ))
}

/// The plane-tree sum versus ∏_{k=0}^{n-2}(x1+⋯+xn+kt), which is the
/// homogeneous product with m = n−1.
pub fn verify_tree_product(n: usize) -> Result<VerificationReport> {
    let rhs = homogeneous_disposition_polynomial(n.saturating_sub(1), n)?;
    let lhs = tree_generating_function(n, None)?;
    let objects = enumerate_plane_trees(n, None).count() as u64;
    Ok(VerificationReport::from_comparison(
        cell(Identity::TreeProduct, None, Some(n), None),
        objects,
        &lhs,
        &rhs,
    ))
}

/// The rooted plane-tree sum versus x_r ∏_{k=1}^{n-2}(x1+⋯+xn+kt). The
/// identity needs n ≥ 2: on a single vertex the left side is 1 while the
/// right side degenerates to x_1.
pub fn verify_rooted_tree_product(n: usize, r: usize) -> Result<VerificationReport> {
    if n < 2 {
        return Err(Error::Domain("rooted product needs n >= 2".into()));
    }
    if r == 0 || r > n {
        return Err(Error::OutOfRange(format!("root {r}")));
    }
    let vars = VarSet::xs_t(n);
    let t = Polynomial::var_at(vars.clone(), n);
    let mut sum_x = Polynomial::zero(vars.clone());
    for i in 0..n {
        sum_x = sum_x.add(&Polynomial::var_at(vars.clone(), i))?;
    }
    let mut rhs = Polynomial::var_at(vars.clone(), r - 1);
    for k in 1..=n.saturating_sub(2) {
        rhs = rhs.mul(&sum_x.add(&t.scaled(k as i64)?)?)?;
    }
    let lhs = tree_generating_function(n, Some(r))?;
    let objects = enumerate_plane_trees(n, Some(r)).count() as u64;
    Ok(VerificationReport::from_comparison(
        cell(Identity::RootedTreeProduct, None, Some(n), Some(r)),
        objects,
        &lhs,
        &rhs,
    ))
}

/// Tree-side and disposition-side generating functions from two
/// independent enumerations. No product formula is consulted, so this
/// isolates the bijective content from the algebraic content.
pub fn verify_transport(n: usize) -> Result<VerificationReport> {
    let tree_side = tree_generating_function(n, None)?;
    let disp_side = disposition::generating_function(n.saturating_sub(1), n)?;
    let trees = enumerate_plane_trees(n, None).count() as u64;
    let dispositions = enumerate_dispositions(n.saturating_sub(1), n).count() as u64;
    if trees != dispositions {
        return Err(Error::Domain(format!(
            "family sizes differ: {trees} trees vs {dispositions} dispositions"
        )));
    }
    Ok(VerificationReport::from_comparison(
        cell(Identity::Transport, None, Some(n), None),
        trees + dispositions,
        &tree_side,
        &disp_side,
    ))
}

/// The rooted three-variable expansion over trees on `[n+1]` with root
/// `r`: checks the (t−z)-weight form against x ∏_{k=1}^{n-1}(x+(n-k)z+kt)
/// and the shifted form (weights t^eld) against the same product with
/// t → t+z, both from one enumeration pass.
pub fn verify_gessel_seo(n: usize, r: usize) -> Result<VerificationReport> {
    if n == 0 {
        return Err(Error::Domain("need n >= 1".into()));
    }
    if r == 0 || r > n + 1 {
        return Err(Error::OutOfRange(format!("root {r}")));
    }
    let vars = VarSet::xzt();
    let x = Polynomial::var_at(vars.clone(), 0);
    let z = Polynomial::var_at(vars.clone(), 1);
    let t = Polynomial::var_at(vars.clone(), 2);
    let t_minus_z = t.sub(&z)?;

    let mut lhs_weighted = Polynomial::zero(vars.clone());
    let mut lhs_shifted = Polynomial::zero(vars.clone());
    let mut objects = 0u64;
    for tree in enumerate_plane_trees(n + 1, Some(r)) {
        let stats = tree.stats();
        let young_r = stats.young_children[r - 1] as u16;
        let eld = stats.eld_total as u16;
        let z_exp = (n - young_r as usize - eld as usize) as u16;
        // x^young_r (t−z)^eld z^(n−young_r−eld)
        let term = x
            .pow(young_r)?
            .mul(&t_minus_z.pow(eld)?)?
            .mul(&z.pow(z_exp)?)?;
        lhs_weighted = lhs_weighted.add(&term)?;
        // x^young_r t^eld z^(n−young_r−eld)
        lhs_shifted.add_term(&[young_r, z_exp, eld], 1)?;
        objects += 1;
    }

    let rhs = gessel_seo_polynomial(n)?;
    let rhs_shifted = rhs.substitute("t", &t.add(&z)?)?;

    let mut report = VerificationReport::from_comparison(
        cell(Identity::GesselSeo, None, Some(n), Some(r)),
        objects,
        &lhs_weighted,
        &rhs,
    );
    if report.pass {
        report = VerificationReport::from_comparison(
            cell(Identity::GesselSeo, None, Some(n), Some(r)),
            objects,
            &lhs_shifted,
            &rhs_shifted,
        );
    }
    Ok(report)
}

/// Default desk-scale caps: disposition and colored-cycle grids at
/// m ≤ 5, n ≤ 4; tree identities at n ≤ 6; the three-variable rooted
/// expansion at n ≤ 4 (trees on [5]).
pub const DEFAULT_DISPOSITION_M: usize = 5;
pub const DEFAULT_DISPOSITION_N: usize = 4;
pub const DEFAULT_TREE_N: usize = 6;
pub const DEFAULT_GESSEL_N: usize = 4;

/// Expands an identity (or all of them) into its parameter grid under the
/// given caps.
pub fn plan(identity: Option<Identity>, caps: &Caps) -> Vec<Cell> {
    let identities: Vec<Identity> = match identity {
        Some(id) => vec![id],
        None => Identity::ALL.to_vec(),
    };
    let mut cells = Vec::new();
    for id in identities {
        match id {
            Identity::DispositionProduct
            | Identity::HomogeneousProduct
            | Identity::ColoredCycleProduct => {
                let m_cap = caps.m.unwrap_or(DEFAULT_DISPOSITION_M);
                let n_cap = caps.n.unwrap_or(DEFAULT_DISPOSITION_N);
                for n in 1..=n_cap {
                    for m in 0..=m_cap {
                        cells.push(cell(id, Some(m), Some(n), None));
                    }
                }
            }
            Identity::TreeProduct | Identity::Transport => {
                let n_cap = caps.n.unwrap_or(DEFAULT_TREE_N);
                for n in 1..=n_cap {
                    cells.push(cell(id, None, Some(n), None));
                }
            }
            Identity::RootedTreeProduct => {
                let n_cap = caps.n.unwrap_or(DEFAULT_TREE_N);
                for n in 2..=n_cap {
                    for r in 1..=n {
                        cells.push(cell(id, None, Some(n), Some(r)));
                    }
                }
            }
            Identity::GesselSeo => {
                let n_cap = caps.n.unwrap_or(DEFAULT_GESSEL_N);
                for n in 1..=n_cap {
                    for r in 1..=n + 1 {
                        cells.push(cell(id, None, Some(n), Some(r)));
                    }
                }
            }
        }
    }
    cells
}

/// Runs one grid cell.
pub fn run_cell(cell: &Cell) -> Result<VerificationReport> {
    match cell.identity {
        Identity::DispositionProduct => {
            verify_disposition_product(cell.m.expect("m"), cell.n.expect("n"))
        }
        Identity::HomogeneousProduct => {
            verify_homogeneous_product(cell.m.expect("m"), cell.n.expect("n"))
        }
        Identity::ColoredCycleProduct => {
            verify_colored_cycle_product(cell.m.expect("m"), cell.n.expect("n"))
        }
        Identity::TreeProduct => verify_tree_product(cell.n.expect("n")),
        Identity::RootedTreeProduct => {
            verify_rooted_tree_product(cell.n.expect("n"), cell.r.expect("r"))
        }
        Identity::Transport => verify_transport(cell.n.expect("n")),
        Identity::GesselSeo => verify_gessel_seo(cell.n.expect("n"), cell.r.expect("r")),
    }
}

/// Computes every requested closed form before any enumeration begins, so
/// coefficient overflow at oversized caps surfaces immediately.
pub fn preflight(cells: &[Cell]) -> Result<()> {
    for c in cells {
        match c.identity {
            Identity::DispositionProduct | Identity::ColoredCycleProduct => {
                disposition_polynomial(c.m.expect("m"), c.n.expect("n"))?;
            }
            Identity::HomogeneousProduct => {
                homogeneous_disposition_polynomial(c.m.expect("m"), c.n.expect("n"))?;
            }
            Identity::TreeProduct => {
                let n = c.n.expect("n");
                homogeneous_disposition_polynomial(n.saturating_sub(1), n)?;
            }
            Identity::GesselSeo => {
                gessel_seo_polynomial(c.n.expect("n"))?;
            }
            // No closed form, or one too cheap to matter.
            Identity::RootedTreeProduct | Identity::Transport => {}
        }
    }
    Ok(())
}

/// Runs every identity over its default (or capped) grid, serially.
pub fn verify_all(caps: &Caps) -> Result<Vec<VerificationReport>> {
    let cells = plan(None, caps);
    preflight(&cells)?;
    cells.iter().map(run_cell).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disposition_product_cells() {
        let r = verify_disposition_product(1, 1).unwrap();
        assert!(r.pass);
        assert_eq!(r.objects_enumerated, 1);
        let r = verify_disposition_product(2, 2).unwrap();
        assert!(r.pass);
        assert_eq!(r.objects_enumerated, 6);
        let r = verify_disposition_product(4, 3).unwrap();
        assert!(r.pass);
        assert_eq!(r.objects_enumerated, 360);
    }

    #[test]
    fn homogeneous_cells() {
        for n in 1..=4 {
            assert!(verify_homogeneous_product(1, n).unwrap().pass);
        }
        let r = verify_homogeneous_product(2, 1).unwrap();
        assert!(r.pass);
        assert_eq!(r.objects_enumerated, 2);
        assert!(verify_homogeneous_product(5, 3).unwrap().pass);
    }

    #[test]
    fn colored_cycle_cells() {
        assert!(verify_colored_cycle_product(1, 2).unwrap().pass);
        let r = verify_colored_cycle_product(2, 2).unwrap();
        assert!(r.pass);
        assert_eq!(r.objects_enumerated, 6);
        assert!(verify_colored_cycle_product(5, 3).unwrap().pass);
    }

    #[test]
    fn tree_product_cells() {
        let r = verify_tree_product(1).unwrap();
        assert!(r.pass);
        assert_eq!(r.objects_enumerated, 1);
        let r = verify_tree_product(3).unwrap();
        assert!(r.pass);
        assert_eq!(r.objects_enumerated, 12);
    }

    #[test]
    fn rooted_tree_product_cells() {
        let r = verify_rooted_tree_product(2, 1).unwrap();
        assert!(r.pass);
        let r = verify_rooted_tree_product(3, 2).unwrap();
        assert!(r.pass);
        assert_eq!(r.objects_enumerated, 4);
        for root in 1..=5 {
            assert!(verify_rooted_tree_product(5, root).unwrap().pass);
        }
        assert!(verify_rooted_tree_product(1, 1).is_err());
    }

    #[test]
    fn transport_cells() {
        assert!(verify_transport(2).unwrap().pass);
        let r = verify_transport(4).unwrap();
        assert!(r.pass);
        assert_eq!(r.objects_enumerated, 240);
    }

    #[test]
    fn gessel_seo_cells() {
        let r = verify_gessel_seo(1, 1).unwrap();
        assert!(r.pass);
        // 4 trees in the rooted family on [3].
        let r = verify_gessel_seo(2, 1).unwrap();
        assert!(r.pass);
        assert_eq!(r.objects_enumerated, 4);
        for root in 1..=4 {
            assert!(verify_gessel_seo(3, root).unwrap().pass);
        }
    }

    #[test]
    fn full_grid_passes_at_reduced_caps() {
        let caps = Caps {
            m: Some(3),
            n: Some(3),
        };
        let reports = verify_all(&caps).unwrap();
        assert!(reports.iter().all(|r| r.pass));
        assert!(!reports.is_empty());
    }

    #[test]
    fn tiny_caps_pass_trivially() {
        let caps = Caps {
            m: Some(0),
            n: Some(1),
        };
        let reports = verify_all(&caps).unwrap();
        assert!(reports.iter().all(|r| r.pass));
    }

    #[test]
    fn corrupted_statistic_fails_with_counterexample() {
        // Swap the roles of younger and elder children on the tree side.
        let n = 3;
        let mut corrupted = Polynomial::zero(VarSet::xs_t(n));
        let mut exps = vec![0u16; n + 1];
        for t in enumerate_plane_trees(n, None) {
            let stats = t.stats();
            for (i, &e) in stats.eld_children.iter().enumerate() {
                exps[i] = e as u16;
            }
            exps[n] = (stats.young_total - 1) as u16;
            corrupted.add_term(&exps, 1).unwrap();
        }
        let rhs = homogeneous_disposition_polynomial(n - 1, n).unwrap();
        let report = VerificationReport::from_comparison(
            cell(Identity::TreeProduct, None, Some(n), None),
            12,
            &corrupted,
            &rhs,
        );
        assert!(!report.pass);
        let ce = report.counterexample.expect("differs somewhere");
        assert_ne!(ce.lhs, ce.rhs);
    }

    #[test]
    fn preflight_detects_overflow_before_enumerating() {
        // c(22,1) = 21! overflows i64, and the grid includes m=22 cells
        // whose enumeration would never finish; preflight must bail first.
        let caps = Caps {
            m: Some(22),
            n: Some(1),
        };
        let cells = plan(Some(Identity::DispositionProduct), &caps);
        assert_eq!(preflight(&cells), Err(Error::Overflow));
    }

    #[test]
    fn caps_parsing() {
        assert_eq!(Caps::parse("").unwrap(), Caps::default());
        assert_eq!(
            Caps::parse("m=4,n=3").unwrap(),
            Caps {
                m: Some(4),
                n: Some(3)
            }
        );
        assert!(Caps::parse("k=2").is_err());
        assert!(Caps::parse("m").is_err());
    }

    #[test]
    fn identity_tokens_round_trip() {
        for id in Identity::ALL {
            assert_eq!(id.token().parse::<Identity>().unwrap(), id);
        }
        assert!("thm9".parse::<Identity>().is_err());
    }

    #[test]
    fn report_lines_and_json() {
        let r = verify_disposition_product(2, 2).unwrap();
        let line = r.render_line();
        assert!(line.contains("thm2.1"));
        assert!(line.contains("PASS"));
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains(r#""identity":"disposition-product""#));
        assert!(json.contains(r#""pass":true"#));
    }
}
