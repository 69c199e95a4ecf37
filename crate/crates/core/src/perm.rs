//! Cycle decompositions of permutations of `[m]`, the fundamental
//! (standard-representation) bijection onto words, colorings of cycles by
//! `[n]`, and the correspondence between colored cycle decompositions and
//! dispositions.
//!
//! Cycles are stored in standard form — minimum element last — and the
//! cycle list is kept sorted by increasing minima, so the fundamental word
//! is plain concatenation and equality is structural.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::disposition::{rl_min_positions, Disposition};
use crate::error::{Error, Result};
use crate::poly::{Polynomial, VarSet};

/// Rotates a nonempty cycle (given as any of its rotations) so that its
/// minimum element comes last.
pub fn standard_word(cycle: &[usize]) -> Result<Vec<usize>> {
    if cycle.is_empty() {
        return Err(Error::InvalidCycles("empty cycle".into()));
    }
    for (i, a) in cycle.iter().enumerate() {
        if cycle[..i].contains(a) {
            return Err(Error::DuplicateEntries);
        }
    }
    let min_at = cycle
        .iter()
        .enumerate()
        .min_by_key(|&(_, &a)| a)
        .map(|(i, _)| i)
        .expect("nonempty");
    let mut word = Vec::with_capacity(cycle.len());
    word.extend_from_slice(&cycle[min_at + 1..]);
    word.extend_from_slice(&cycle[..=min_at]);
    Ok(word)
}

/// Cuts a word of distinct integers after each right-to-left minimum,
/// recovering the standard words of the cycles it concatenates.
pub fn cut_at_rl_minima(word: &[usize]) -> Result<Vec<Vec<usize>>> {
    let cuts = rl_min_positions(word)?;
    let mut cycles = Vec::with_capacity(cuts.len());
    let mut start = 0;
    for &cut in &cuts {
        cycles.push(word[start..=cut].to_vec());
        start = cut + 1;
    }
    Ok(cycles)
}

/// The cycles of a permutation of `[m]`, disjoint and covering `[m]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleDecomposition {
    m: usize,
    cycles: Vec<Vec<usize>>,
}

impl CycleDecomposition {
    /// Normalizes arbitrary cyclic words: each is rotated to standard form
    /// and the list is sorted by increasing minima. The cycles must be
    /// disjoint and cover `[m]` exactly.
    pub fn from_cycles(m: usize, cycles: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; m];
        let mut normalized = Vec::with_capacity(cycles.len());
        for cycle in cycles {
            let word = standard_word(&cycle)?;
            for &a in &word {
                if a == 0 || a > m {
                    return Err(Error::InvalidCycles(format!("element {a} outside 1..={m}")));
                }
                if seen[a - 1] {
                    return Err(Error::InvalidCycles(format!("element {a} repeated")));
                }
                seen[a - 1] = true;
            }
            normalized.push(word);
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::InvalidCycles("cycles do not cover [m]".into()));
        }
        normalized.sort_by_key(|w| *w.last().expect("cycles are nonempty"));
        Ok(CycleDecomposition {
            m,
            cycles: normalized,
        })
    }

    /// The empty permutation of `[0]`.
    pub fn empty() -> Self {
        CycleDecomposition {
            m: 0,
            cycles: Vec::new(),
        }
    }

    /// Extracts the cycles of the function `i ↦ one_line[i-1]`.
    pub fn from_one_line(one_line: &[usize]) -> Result<Self> {
        let m = one_line.len();
        let mut seen = vec![false; m];
        for &a in one_line {
            if a == 0 || a > m {
                return Err(Error::InvalidCycles(format!("value {a} outside 1..={m}")));
            }
            if seen[a - 1] {
                return Err(Error::DuplicateEntries);
            }
            seen[a - 1] = true;
        }
        let mut visited = vec![false; m];
        let mut cycles = Vec::new();
        for start in 1..=m {
            if visited[start - 1] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut v = start;
            while !visited[v - 1] {
                visited[v - 1] = true;
                cycle.push(v);
                v = one_line[v - 1];
            }
            cycles.push(cycle);
        }
        CycleDecomposition::from_cycles(m, cycles)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Cycles in standard form, sorted by increasing minima.
    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles.len()
    }

    /// The standard representation: standard words of the cycles, sorted by
    /// increasing minima, concatenated. Its right-to-left minima are exactly
    /// the cycle minima.
    pub fn fundamental_word(&self) -> Vec<usize> {
        self.cycles.iter().flatten().copied().collect()
    }
}

/// Inverse of the fundamental bijection: cut the word after each
/// right-to-left minimum. Requires the word to be a permutation of `[m]`.
pub fn word_to_cycles(word: &[usize]) -> Result<CycleDecomposition> {
    CycleDecomposition::from_cycles(word.len(), cut_at_rl_minima(word)?)
}

/// A cycle decomposition with each cycle colored; `colors[i]` belongs to
/// `cycles()[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColoredCyclePermutation {
    perm: CycleDecomposition,
    colors: Vec<usize>,
}

impl ColoredCyclePermutation {
    pub fn new(perm: CycleDecomposition, colors: Vec<usize>) -> Result<Self> {
        if colors.len() != perm.cycle_count() {
            return Err(Error::InvalidCycles(format!(
                "{} colors for {} cycles",
                colors.len(),
                perm.cycle_count()
            )));
        }
        if colors.contains(&0) {
            return Err(Error::OutOfRange("color 0".into()));
        }
        Ok(ColoredCyclePermutation { perm, colors })
    }

    pub fn perm(&self) -> &CycleDecomposition {
        &self.perm
    }

    pub fn m(&self) -> usize {
        self.perm.m()
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    /// Number of cycles carrying color `i`.
    pub fn color_count(&self, i: usize) -> usize {
        self.colors.iter().filter(|&&c| c == i).count()
    }

    /// Builds the disposition whose segment `i` concatenates the standard
    /// words of the color-`i` cycles in increasing order of minima. Segment
    /// `i` then has exactly `color_count(i)` right-to-left minima.
    pub fn to_disposition(&self, n: usize) -> Result<Disposition> {
        let mut segments = vec![Vec::new(); n];
        for (cycle, &color) in self.perm.cycles.iter().zip(&self.colors) {
            if color > n {
                return Err(Error::OutOfRange(format!("color {color} exceeds n={n}")));
            }
            segments[color - 1].extend_from_slice(cycle);
        }
        Disposition::new(segments)
    }

    /// Inverse construction: each segment is cut into standard words at its
    /// right-to-left minima, and every cycle found in segment `i` receives
    /// color `i`.
    pub fn from_disposition(d: &Disposition) -> Result<Self> {
        let mut paired: Vec<(Vec<usize>, usize)> = Vec::new();
        for (i, seg) in d.segments().iter().enumerate() {
            for cycle in cut_at_rl_minima(seg)? {
                paired.push((cycle, i + 1));
            }
        }
        // Normalization sorts cycles by minima; keep the colors aligned.
        paired.sort_by_key(|(w, _)| *w.last().expect("cycles are nonempty"));
        let (cycles, colors): (Vec<_>, Vec<_>) = paired.into_iter().unzip();
        let perm = CycleDecomposition::from_cycles(d.m(), cycles)?;
        ColoredCyclePermutation::new(perm, colors)
    }
}

/// Every colored cycle decomposition of a permutation of `[m]` with colors
/// in `[n]`: permutations in lexicographic one-line order, colorings in
/// mixed-radix order (first cycle most significant). The stream has length
/// `n(n+1)…(n+m-1)`.
pub fn enumerate_colored(m: usize, n: usize) -> impl Iterator<Item = ColoredCyclePermutation> {
    assert!(n >= 1, "need n >= 1");
    let perms: Box<dyn Iterator<Item = Vec<usize>>> = if m == 0 {
        Box::new(std::iter::once(Vec::new()))
    } else {
        Box::new((1..=m).permutations(m))
    };
    perms.flat_map(move |one_line| {
        let perm = CycleDecomposition::from_one_line(&one_line).expect("valid one-line form");
        let k = perm.cycle_count();
        let mut counter = vec![1usize; k];
        let mut exhausted = false;
        std::iter::from_fn(move || {
            if exhausted {
                return None;
            }
            let item = ColoredCyclePermutation::new(perm.clone(), counter.clone())
                .expect("colors within range");
            // Mixed-radix increment, last cycle fastest.
            let mut i = k;
            loop {
                if i == 0 {
                    exhausted = true;
                    break;
                }
                i -= 1;
                counter[i] += 1;
                if counter[i] <= n {
                    break;
                }
                counter[i] = 1;
            }
            Some(item)
        })
    })
}

/// `Σ_π ∏_i x_i^{c_i(π)}` over all colored cycle decompositions, computed
/// by exhaustive enumeration over the context `x1,…,xn`.
pub fn cycle_color_generating_function(m: usize, n: usize) -> Result<Polynomial> {
    if n == 0 {
        return Err(Error::Domain("need n >= 1".into()));
    }
    let mut sum = Polynomial::zero(VarSet::xs(n));
    let mut exps = vec![0u16; n];
    for p in enumerate_colored(m, n) {
        exps.fill(0);
        for &c in p.colors() {
            exps[c - 1] += 1;
        }
        sum.add_term(&exps, 1)?;
    }
    Ok(sum)
}

impl fmt::Display for ColoredCyclePermutation {
    /// Text form: cycles in canonical order, `@c` closing each run of
    /// equally colored cycles, e.g. `(6 1)(8)@6`. The empty permutation
    /// renders as the empty string.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (cycle, &color)) in self.perm.cycles.iter().zip(&self.colors).enumerate() {
            write!(f, "(")?;
            for (j, a) in cycle.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
            if self.colors.get(i + 1) != Some(&color) {
                write!(f, "@{color}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for ColoredCyclePermutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut colors: Vec<Option<usize>> = Vec::new();
        let bytes = s.as_bytes();
        let mut pos = 0;
        while pos < bytes.len() {
            match bytes[pos] {
                b'(' => {
                    let end = s[pos..]
                        .find(')')
                        .map(|i| pos + i)
                        .ok_or_else(|| Error::Parse("unbalanced `(`".into()))?;
                    let cycle = s[pos + 1..end]
                        .split_whitespace()
                        .map(|tok| {
                            tok.parse::<usize>()
                                .map_err(|_| Error::Parse(format!("bad element `{tok}`")))
                        })
                        .collect::<Result<Vec<usize>>>()?;
                    cycles.push(cycle);
                    colors.push(None);
                    pos = end + 1;
                }
                b'@' => {
                    let start = pos + 1;
                    let mut end = start;
                    while end < bytes.len() && bytes[end].is_ascii_digit() {
                        end += 1;
                    }
                    let color = s[start..end]
                        .parse::<usize>()
                        .map_err(|_| Error::Parse("bad color".into()))?;
                    // The color applies to every preceding uncolored cycle.
                    let mut assigned = false;
                    for slot in colors.iter_mut().rev() {
                        if slot.is_some() {
                            break;
                        }
                        *slot = Some(color);
                        assigned = true;
                    }
                    if !assigned {
                        return Err(Error::Parse("`@` with no cycle".into()));
                    }
                    pos = end;
                }
                c if c.is_ascii_whitespace() => pos += 1,
                other => {
                    return Err(Error::Parse(format!(
                        "unexpected byte `{}` at {pos}",
                        other as char
                    )));
                }
            }
        }
        let colors = colors
            .into_iter()
            .collect::<Option<Vec<usize>>>()
            .ok_or_else(|| Error::Parse("uncolored cycle".into()))?;
        let m: usize = cycles.iter().map(Vec::len).sum();
        let mut paired: Vec<(Vec<usize>, usize)> = Vec::new();
        for (cycle, color) in cycles.into_iter().zip(colors) {
            paired.push((standard_word(&cycle)?, color));
        }
        paired.sort_by_key(|(w, _)| *w.last().expect("cycles are nonempty"));
        let (cycles, colors): (Vec<_>, Vec<_>) = paired.into_iter().unzip();
        ColoredCyclePermutation::new(CycleDecomposition::from_cycles(m, cycles)?, colors)
    }
}

#[derive(Serialize, Deserialize)]
struct ColoredRepr {
    m: usize,
    cycles: Vec<Vec<usize>>,
    colors: Vec<usize>,
}

impl Serialize for ColoredCyclePermutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ColoredRepr {
            m: self.m(),
            cycles: self.perm.cycles.clone(),
            colors: self.colors.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ColoredCyclePermutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = ColoredRepr::deserialize(deserializer)?;
        if repr.cycles.len() != repr.colors.len() {
            return Err(D::Error::custom("cycles and colors differ in length"));
        }
        let mut paired: Vec<(Vec<usize>, usize)> = Vec::new();
        for (cycle, color) in repr.cycles.into_iter().zip(repr.colors) {
            paired.push((standard_word(&cycle).map_err(D::Error::custom)?, color));
        }
        paired.sort_by_key(|(w, _)| *w.last().expect("cycles are nonempty"));
        let (cycles, colors): (Vec<_>, Vec<_>) = paired.into_iter().unzip();
        let perm = CycleDecomposition::from_cycles(repr.m, cycles).map_err(D::Error::custom)?;
        ColoredCyclePermutation::new(perm, colors).map_err(D::Error::custom)
    }
}
