//! Exact sparse multivariate polynomial arithmetic over the integers.
//!
//! Coefficients are `i64` and every arithmetic step is overflow-checked;
//! at desk scale all coefficients are bounded by object counts, so a hard
//! error on overflow beats silent wraparound. Terms are keyed by dense
//! exponent vectors under a graded reverse-lexicographic order, which fixes
//! the canonical term order used for display and serialization: larger
//! total degree first, ties broken so that lower exponents on later
//! variables rank higher (`x2^2` before `x1*t`).

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An ordered list of distinct variable names. Polynomials can only be
/// combined when they were built over equal contexts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarSet {
    names: Vec<String>,
}

impl VarSet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::Domain("variable context must not be empty".into()));
        }
        for (i, a) in names.iter().enumerate() {
            if a.is_empty() {
                return Err(Error::Domain("empty variable name".into()));
            }
            if names[..i].contains(a) {
                return Err(Error::Domain(format!("duplicate variable `{a}`")));
            }
        }
        Ok(VarSet { names })
    }

    /// The context `x1, …, xn`.
    pub fn xs(n: usize) -> Self {
        VarSet::new((1..=n).map(|i| format!("x{i}"))).expect("n >= 1")
    }

    /// The context `x1, …, xn, t`.
    pub fn xs_t(n: usize) -> Self {
        let mut names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        names.push("t".into());
        VarSet::new(names).expect("n >= 0")
    }

    /// The context `x, z, t`.
    pub fn xzt() -> Self {
        VarSet::new(["x", "z", "t"]).expect("static names")
    }

    pub fn arity(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|v| v == name)
    }
}

/// A dense exponent vector, one entry per context variable.
///
/// The `Ord` impl ranks by total degree and then reverse-lexicographically,
/// so the canonical term order for output walks it from greatest to least.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    pub fn new(exponents: Vec<u16>) -> Self {
        Monomial(exponents)
    }

    pub fn unit(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    fn mul(&self, other: &Monomial) -> Result<Monomial> {
        let exps = self
            .0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_add(b).ok_or(Error::Overflow))
            .collect::<Result<Vec<u16>>>()?;
        Ok(Monomial(exps))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for i in (0..self.0.len()).rev() {
                if self.0[i] != other.0[i] {
                    // Smaller exponent on the later variable ranks higher.
                    return other.0[i].cmp(&self.0[i]);
                }
            }
            std::cmp::Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial with exact integer coefficients. Zero coefficients are
/// never stored, so equal polynomials have equal term maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    vars: VarSet,
    terms: BTreeMap<Monomial, i64>,
}

fn add_into(terms: &mut BTreeMap<Monomial, i64>, mono: Monomial, coef: i64) -> Result<()> {
    if coef == 0 {
        return Ok(());
    }
    match terms.entry(mono) {
        Entry::Vacant(e) => {
            e.insert(coef);
        }
        Entry::Occupied(mut e) => {
            let sum = e.get().checked_add(coef).ok_or(Error::Overflow)?;
            if sum == 0 {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
    Ok(())
}

fn pow_i64(base: i64, exp: u16) -> Result<i64> {
    base.checked_pow(u32::from(exp)).ok_or(Error::Overflow)
}

impl Polynomial {
    pub fn zero(vars: VarSet) -> Self {
        Polynomial {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: VarSet) -> Self {
        Polynomial::constant(vars, 1)
    }

    pub fn constant(vars: VarSet, c: i64) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(Monomial::unit(vars.arity()), c);
        }
        Polynomial { vars, terms }
    }

    /// The variable with the given name, as a polynomial.
    pub fn var(vars: VarSet, name: &str) -> Result<Self> {
        let idx = vars
            .index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.into()))?;
        Ok(Polynomial::var_at(vars, idx))
    }

    /// The `idx`-th context variable (0-based), as a polynomial.
    pub fn var_at(vars: VarSet, idx: usize) -> Self {
        assert!(idx < vars.arity(), "variable index in range");
        let mut exps = vec![0u16; vars.arity()];
        exps[idx] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(exps), 1);
        Polynomial { vars, terms }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical order: graded lex, largest first.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.terms.iter().rev().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, mono: &Monomial) -> i64 {
        self.terms.get(mono).copied().unwrap_or(0)
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// `Some(d)` when every term has total degree `d` (and the polynomial
    /// is nonzero), else `None`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    fn same_context(&self, other: &Polynomial) -> Result<()> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    /// Adds `coef * x^exponents` in place. The workhorse for accumulating
    /// generating functions over enumeration streams.
    pub fn add_term(&mut self, exponents: &[u16], coef: i64) -> Result<()> {
        if exponents.len() != self.vars.arity() {
            return Err(Error::ContextMismatch);
        }
        add_into(&mut self.terms, Monomial(exponents.to_vec()), coef)
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.same_context(other)?;
        let mut terms = self.terms.clone();
        for (m, &c) in &other.terms {
            add_into(&mut terms, m.clone(), c)?;
        }
        Ok(Polynomial {
            vars: self.vars.clone(),
            terms,
        })
    }

    pub fn neg(&self) -> Result<Polynomial> {
        let mut terms = BTreeMap::new();
        for (m, &c) in &self.terms {
            terms.insert(m.clone(), c.checked_neg().ok_or(Error::Overflow)?);
        }
        Ok(Polynomial {
            vars: self.vars.clone(),
            terms,
        })
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.neg()?)
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.same_context(other)?;
        let mut terms = BTreeMap::new();
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                let mono = ma.mul(mb)?;
                let coef = ca.checked_mul(cb).ok_or(Error::Overflow)?;
                add_into(&mut terms, mono, coef)?;
            }
        }
        Ok(Polynomial {
            vars: self.vars.clone(),
            terms,
        })
    }

    pub fn scaled(&self, c: i64) -> Result<Polynomial> {
        let mut terms = BTreeMap::new();
        for (m, &a) in &self.terms {
            let v = a.checked_mul(c).ok_or(Error::Overflow)?;
            if v != 0 {
                terms.insert(m.clone(), v);
            }
        }
        Ok(Polynomial {
            vars: self.vars.clone(),
            terms,
        })
    }

    pub fn pow(&self, exp: u16) -> Result<Polynomial> {
        let mut acc = Polynomial::one(self.vars.clone());
        for _ in 0..exp {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Replaces every occurrence of `var` by `replacement` (same context),
    /// re-expanding the result.
    pub fn substitute(&self, var: &str, replacement: &Polynomial) -> Result<Polynomial> {
        self.same_context(replacement)?;
        let idx = self
            .vars
            .index_of(var)
            .ok_or_else(|| Error::UnknownVariable(var.into()))?;
        let mut out = Polynomial::zero(self.vars.clone());
        for (m, &c) in &self.terms {
            let e = m.exponents()[idx];
            let mut rest = m.exponents().to_vec();
            rest[idx] = 0;
            let mut term = Polynomial {
                vars: self.vars.clone(),
                terms: BTreeMap::from([(Monomial(rest), c)]),
            };
            if e > 0 {
                term = term.mul(&replacement.pow(e)?)?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Exact value at an integer point; `assignment[i]` is the value of the
    /// `i`-th context variable.
    pub fn evaluate(&self, assignment: &[i64]) -> Result<i64> {
        if assignment.len() != self.vars.arity() {
            return Err(Error::ContextMismatch);
        }
        let mut total: i64 = 0;
        for (m, &c) in &self.terms {
            let mut v = c;
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    v = v
                        .checked_mul(pow_i64(assignment[i], e)?)
                        .ok_or(Error::Overflow)?;
                }
            }
            total = total.checked_add(v).ok_or(Error::Overflow)?;
        }
        Ok(total)
    }

    /// Projects away a variable that no term actually uses, shrinking the
    /// context. Errors if the variable occurs with positive exponent.
    pub fn remove_unused_var(&self, var: &str) -> Result<Polynomial> {
        let idx = self
            .vars
            .index_of(var)
            .ok_or_else(|| Error::UnknownVariable(var.into()))?;
        let names: Vec<String> = self
            .vars
            .names()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != idx)
            .map(|(_, n)| n.clone())
            .collect();
        let vars = VarSet::new(names)?;
        let mut terms = BTreeMap::new();
        for (m, &c) in &self.terms {
            if m.exponents()[idx] != 0 {
                return Err(Error::Domain(format!("variable `{var}` is in use")));
            }
            let mut exps = m.exponents().to_vec();
            exps.remove(idx);
            terms.insert(Monomial(exps), c);
        }
        Ok(Polynomial { vars, terms })
    }

    /// Renders one monomial in the canonical product form, e.g. `x1^2*t`;
    /// the unit monomial renders as `1`.
    pub fn monomial_text(&self, mono: &Monomial) -> String {
        let mut factors = Vec::new();
        for (name, &e) in self.vars.names().iter().zip(mono.exponents()) {
            match e {
                0 => {}
                1 => factors.push(name.clone()),
                _ => factors.push(format!("{name}^{e}")),
            }
        }
        if factors.is_empty() {
            "1".into()
        } else {
            factors.join("*")
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (mono, coef)) in self.terms().enumerate() {
            let mag = coef.unsigned_abs();
            if i == 0 {
                if coef < 0 {
                    write!(f, "-")?;
                }
            } else if coef < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let text = self.monomial_text(mono);
            if text == "1" {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "{text}")?;
            } else {
                write!(f, "{mag}*{text}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<u16>,
    coef: i64,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    vars: Vec<String>,
    terms: Vec<TermRepr>,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = PolyRepr {
            vars: self.vars.names().to_vec(),
            terms: self
                .terms()
                .map(|(m, c)| TermRepr {
                    exp: m.exponents().to_vec(),
                    coef: c,
                })
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(deserializer)?;
        let vars = VarSet::new(repr.vars).map_err(D::Error::custom)?;
        let mut poly = Polynomial::zero(vars);
        for term in repr.terms {
            poly.add_term(&term.exp, term.coef)
                .map_err(D::Error::custom)?;
        }
        Ok(poly)
    }
}

/// `x1 + x2 + … + xn` over an arbitrary context whose first `n` variables
/// are the `x_i`.
fn sum_of_first_vars(vars: &VarSet, n: usize) -> Polynomial {
    let mut acc = Polynomial::zero(vars.clone());
    for i in 0..n {
        acc = acc
            .add(&Polynomial::var_at(vars.clone(), i))
            .expect("distinct linear terms cannot overflow");
    }
    acc
}

/// The disposition polynomial `R_m(x1,…,xn) = ∏_{k=0}^{m-1}(x1+⋯+xn+k)`,
/// the generating function of dispositions from `[m]` to `[n]` by
/// right-to-left minima per segment. `m = 0` yields the constant 1.
pub fn disposition_polynomial(m: usize, n: usize) -> Result<Polynomial> {
    if n == 0 {
        return Err(Error::Domain("need n >= 1".into()));
    }
    let vars = VarSet::xs(n);
    let xsum = sum_of_first_vars(&vars, n);
    let mut acc = Polynomial::one(vars.clone());
    for k in 0..m {
        let factor = xsum.add(&Polynomial::constant(vars.clone(), k as i64))?;
        acc = acc.mul(&factor)?;
    }
    Ok(acc)
}

/// The homogeneous variant `Q_m(x1,…,xn,t) = ∏_{k=0}^{m-1}(x1+⋯+xn+kt)`,
/// with `m` factors starting at `k = 0`. Setting `t = 1` recovers
/// [`disposition_polynomial`].
pub fn homogeneous_disposition_polynomial(m: usize, n: usize) -> Result<Polynomial> {
    if n == 0 {
        return Err(Error::Domain("need n >= 1".into()));
    }
    let vars = VarSet::xs_t(n);
    let xsum = sum_of_first_vars(&vars, n);
    let t = Polynomial::var_at(vars.clone(), n);
    let mut acc = Polynomial::one(vars);
    for k in 0..m {
        let factor = xsum.add(&t.scaled(k as i64)?)?;
        acc = acc.mul(&factor)?;
    }
    Ok(acc)
}

/// The Gessel–Seo polynomial `P_n(t,z,x) = x·∏_{k=1}^{n-1}(x+(n-k)z+kt)`
/// over the context `x, z, t`.
pub fn gessel_seo_polynomial(n: usize) -> Result<Polynomial> {
    if n == 0 {
        return Err(Error::Domain("need n >= 1".into()));
    }
    let vars = VarSet::xzt();
    let x = Polynomial::var_at(vars.clone(), 0);
    let z = Polynomial::var_at(vars.clone(), 1);
    let t = Polynomial::var_at(vars.clone(), 2);
    let mut acc = x.clone();
    for k in 1..n {
        let factor = x
            .add(&z.scaled((n - k) as i64)?)?
            .add(&t.scaled(k as i64)?)?;
        acc = acc.mul(&factor)?;
    }
    Ok(acc)
}
