//! Dispositions from `[m]` to `[n]`: `n` disjoint linearly ordered segments
//! whose union is exactly `[m]`. Provides the right-to-left-minimum and
//! general-descent statistics, exhaustive enumeration by the insertion
//! construction, uniform sampling, and the segment-wise generating function.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::{Polynomial, VarSet};

/// Name of the seedable generator behind [`sample_seeded`]; recorded in
/// sampler output metadata.
pub const SAMPLER_RNG: &str = "ChaCha12";

/// Number of right-to-left minima of a sequence of distinct integers: the
/// entries smaller than everything to their right.
pub fn rl_min(segment: &[usize]) -> Result<usize> {
    Ok(rl_min_positions(segment)?.len())
}

/// Positions (0-based, left to right) of the right-to-left minima.
pub fn rl_min_positions(segment: &[usize]) -> Result<Vec<usize>> {
    check_distinct(segment)?;
    let mut positions = Vec::new();
    let mut min = usize::MAX;
    for (i, &a) in segment.iter().enumerate().rev() {
        if a < min {
            positions.push(i);
            min = a;
        }
    }
    positions.reverse();
    Ok(positions)
}

fn check_distinct(seq: &[usize]) -> Result<()> {
    for (i, a) in seq.iter().enumerate() {
        if seq[..i].contains(a) {
            return Err(Error::DuplicateEntries);
        }
    }
    Ok(())
}

/// A disposition: segment `i` holds the pre-image of `i`, in its linear
/// order. Elements are the labels `1..=m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Disposition {
    segments: Vec<Vec<usize>>,
}

impl Disposition {
    /// Validates that the segments partition `[m]` where `m` is the total
    /// number of entries.
    pub fn new(segments: Vec<Vec<usize>>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidDisposition("need at least one segment".into()));
        }
        let m: usize = segments.iter().map(Vec::len).sum();
        let mut seen = vec![false; m];
        for &a in segments.iter().flatten() {
            if a == 0 || a > m {
                return Err(Error::InvalidDisposition(format!(
                    "element {a} outside 1..={m}"
                )));
            }
            if seen[a - 1] {
                return Err(Error::InvalidDisposition(format!("element {a} repeated")));
            }
            seen[a - 1] = true;
        }
        Ok(Disposition { segments })
    }

    /// The unique disposition of zero elements into `n` segments.
    pub fn empty(n: usize) -> Result<Self> {
        Disposition::new(vec![Vec::new(); n])
    }

    pub fn n(&self) -> usize {
        self.segments.len()
    }

    pub fn m(&self) -> usize {
        self.segments.iter().map(Vec::len).sum()
    }

    pub fn segments(&self) -> &[Vec<usize>] {
        &self.segments
    }

    pub fn segment(&self, idx: usize) -> &[usize] {
        &self.segments[idx]
    }

    /// Number of general descents: positions whose entry exceeds some later
    /// entry of the same segment. Computed from the definition directly, not
    /// via the right-to-left-minimum identity.
    pub fn gdes(&self) -> usize {
        self.segments
            .iter()
            .map(|seg| {
                (0..seg.len())
                    .filter(|&i| seg[i + 1..].iter().any(|&b| b < seg[i]))
                    .count()
            })
            .sum()
    }

    pub fn stats(&self) -> DispositionStats {
        let rlmin = self
            .segments
            .iter()
            .map(|seg| rl_min(seg).expect("segments of a valid disposition are distinct"))
            .collect();
        DispositionStats {
            rlmin,
            gdes: self.gdes(),
        }
    }

    /// Inserts element `m+1` into segment `segment` (0-based) before the
    /// entry at `position`; `position = segment length` appends at the end.
    pub fn insert_element(&self, segment: usize, position: usize) -> Result<Disposition> {
        if segment >= self.n() {
            return Err(Error::OutOfRange(format!("segment {segment}")));
        }
        if position > self.segments[segment].len() {
            return Err(Error::OutOfRange(format!("position {position}")));
        }
        let mut segments = self.segments.clone();
        segments[segment].insert(position, self.m() + 1);
        Ok(Disposition { segments })
    }
}

/// Right-to-left-minimum counts per segment together with the general
/// descent count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DispositionStats {
    pub rlmin: Vec<usize>,
    pub gdes: usize,
}

/// Inserts `element` at global slot `slot`, where slots run over segments
/// left to right and positions front to back (position `len` is the back).
fn insert_at_slot(segments: &mut [Vec<usize>], element: usize, mut slot: usize) {
    for seg in segments.iter_mut() {
        if slot <= seg.len() {
            seg.insert(slot, element);
            return;
        }
        slot -= seg.len() + 1;
    }
    panic!("slot out of range");
}

/// Every disposition from `[m]` to `[n]` exactly once.
///
/// Order: element `k` is inserted at one of the `n+k-1` slots (segments
/// scanned left to right, positions front to back), with the slot of the
/// last element varying fastest. The stream has length `n(n+1)…(n+m-1)`.
pub fn enumerate_dispositions(m: usize, n: usize) -> Dispositions {
    assert!(n >= 1, "need n >= 1");
    Dispositions {
        m,
        n,
        counter: vec![0; m],
        done: false,
    }
}

pub struct Dispositions {
    m: usize,
    n: usize,
    counter: Vec<usize>,
    done: bool,
}

impl Iterator for Dispositions {
    type Item = Disposition;

    fn next(&mut self) -> Option<Disposition> {
        if self.done {
            return None;
        }
        let mut segments = vec![Vec::new(); self.n];
        for (k, &slot) in self.counter.iter().enumerate() {
            insert_at_slot(&mut segments, k + 1, slot);
        }
        // Mixed-radix increment, last digit fastest; digit k has base n+k.
        let mut i = self.m;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.counter[i] += 1;
            if self.counter[i] < self.n + i {
                break;
            }
            self.counter[i] = 0;
        }
        Some(Disposition { segments })
    }
}

/// Draws a uniformly random disposition by inserting each element at a
/// uniformly chosen slot, mirroring the enumeration construction.
pub fn sample_uniform<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> Disposition {
    assert!(n >= 1, "need n >= 1");
    let mut segments = vec![Vec::new(); n];
    for k in 1..=m {
        let slot = rng.random_range(0..n + k - 1);
        insert_at_slot(&mut segments, k, slot);
    }
    Disposition { segments }
}

/// Seeded convenience wrapper around [`sample_uniform`] using [`SAMPLER_RNG`].
pub fn sample_seeded(m: usize, n: usize, seed: u64) -> Disposition {
    sample_uniform(m, n, &mut ChaCha12Rng::seed_from_u64(seed))
}

/// `Σ_D t^{gdes(D)} ∏_i x_i^{RLmin(D_i)}` over all of `D_{m,n}`, computed by
/// exhaustive enumeration over the context `x1,…,xn,t`.
pub fn generating_function(m: usize, n: usize) -> Result<Polynomial> {
    if n == 0 {
        return Err(Error::Domain("need n >= 1".into()));
    }
    let mut sum = Polynomial::zero(VarSet::xs_t(n));
    let mut exps = vec![0u16; n + 1];
    for d in enumerate_dispositions(m, n) {
        let stats = d.stats();
        for (i, &r) in stats.rlmin.iter().enumerate() {
            exps[i] = r as u16;
        }
        exps[n] = stats.gdes as u16;
        sum.add_term(&exps, 1)?;
    }
    Ok(sum)
}

impl fmt::Display for Disposition {
    /// One-line text form: segments joined by `|` inside brackets, entries
    /// space-separated, e.g. `[2 9|7 4||5||6 1 8|3|]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, seg) in self.segments.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            for (j, a) in seg.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{a}")?;
            }
        }
        write!(f, "]")
    }
}

impl FromStr for Disposition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Disposition> {
        let body = s
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::Parse("disposition text must be bracketed".into()))?;
        let segments = body
            .split('|')
            .map(|seg| {
                seg.split_whitespace()
                    .map(|tok| {
                        tok.parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad element `{tok}`")))
                    })
                    .collect::<Result<Vec<usize>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Disposition::new(segments)
    }
}

#[derive(Serialize, Deserialize)]
struct DispositionRepr {
    m: usize,
    n: usize,
    segments: Vec<Vec<usize>>,
}

impl Serialize for Disposition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        DispositionRepr {
            m: self.m(),
            n: self.n(),
            segments: self.segments.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Disposition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = DispositionRepr::deserialize(deserializer)?;
        let d = Disposition::new(repr.segments).map_err(D::Error::custom)?;
        if d.m() != repr.m || d.n() != repr.n {
            return Err(D::Error::custom("m/n fields disagree with segments"));
        }
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The worked example disposition from `[9]` to `[8]`.
    pub(crate) fn example_disposition() -> Disposition {
        "[2 9|7 4||5||6 1 8|3|]".parse().unwrap()
    }

    #[test]
    fn rl_min_known_segments() {
        assert_eq!(rl_min(&[2, 9]).unwrap(), 2);
        assert_eq!(rl_min(&[6, 1, 8]).unwrap(), 2);
        assert_eq!(rl_min(&[]).unwrap(), 0);
        assert_eq!(rl_min(&[7, 4]).unwrap(), 1);
    }

    #[test]
    fn rl_min_rejects_duplicates() {
        assert_eq!(rl_min(&[3, 3]), Err(Error::DuplicateEntries));
    }

    #[test]
    fn rl_min_positions_match_naive_scan() {
        // Oracle: position i is a right-to-left minimum iff every later
        // entry is larger.
        fn naive(seq: &[usize]) -> Vec<usize> {
            (0..seq.len())
                .filter(|&i| seq[i + 1..].iter().all(|&b| b > seq[i]))
                .collect()
        }
        for seq in [
            vec![6, 1, 8],
            vec![7, 4],
            vec![1, 2, 3],
            vec![],
            vec![5],
            vec![3, 1, 4, 2],
        ] {
            assert_eq!(rl_min_positions(&seq).unwrap(), naive(&seq));
        }
        assert_eq!(rl_min_positions(&[6, 1, 8]).unwrap(), vec![1, 2]);
        assert_eq!(rl_min_positions(&[7, 4]).unwrap(), vec![1]);
        assert_eq!(rl_min_positions(&[1, 2, 3]).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn example_disposition_statistics() {
        let d = example_disposition();
        assert_eq!(d.m(), 9);
        assert_eq!(d.n(), 8);
        let stats = d.stats();
        assert_eq!(stats.rlmin, vec![2, 1, 0, 1, 0, 2, 1, 0]);
        // 9 − (2+1+0+1+0+2+1+0) = 2.
        assert_eq!(stats.gdes, 2);
    }

    #[test]
    fn gdes_all_singletons_is_zero() {
        let d = Disposition::new(vec![vec![1], vec![2], vec![3]]).unwrap();
        assert_eq!(d.gdes(), 0);
    }

    #[test]
    fn gdes_single_decreasing_segment() {
        let d = Disposition::new(vec![vec![3, 2, 1]]).unwrap();
        assert_eq!(d.gdes(), 2);
    }

    #[test]
    fn enumerate_counts_are_rising_factorials() {
        fn rising(n: usize, m: usize) -> usize {
            (0..m).map(|k| n + k).product()
        }
        assert_eq!(enumerate_dispositions(0, 3).count(), 1);
        assert_eq!(enumerate_dispositions(1, 2).count(), 2);
        assert_eq!(enumerate_dispositions(2, 2).count(), 6);
        for n in 1..=4 {
            for m in 0..=6 {
                assert_eq!(enumerate_dispositions(m, n).count(), rising(n, m));
            }
        }
    }

    #[test]
    fn enumerate_emits_valid_and_distinct_objects() {
        for n in 1..=3 {
            for m in 0..=4 {
                let all: Vec<Disposition> = enumerate_dispositions(m, n).collect();
                for d in &all {
                    assert_eq!(d.m(), m);
                    assert_eq!(d.n(), n);
                    // Re-validating exercises the partition invariant.
                    Disposition::new(d.segments().to_vec()).unwrap();
                }
                let mut seen = std::collections::HashSet::new();
                for d in &all {
                    assert!(seen.insert(d.clone()), "duplicate {d}");
                }
            }
        }
    }

    #[test]
    fn gdes_complements_rlmin_over_families() {
        for n in 1..=4 {
            for m in 0..=5 {
                for d in enumerate_dispositions(m, n) {
                    let stats = d.stats();
                    assert_eq!(stats.gdes, m - stats.rlmin.iter().sum::<usize>());
                }
            }
        }
    }

    #[test]
    fn insert_at_back_raises_rlmin_by_one() {
        let d = Disposition::new(vec![vec![2, 1]]).unwrap();
        let d2 = d.insert_element(0, 2).unwrap();
        assert_eq!(d2.segments()[0], vec![2, 1, 3]);
        assert_eq!(rl_min(&[2, 1]).unwrap(), 1);
        assert_eq!(rl_min(&[2, 1, 3]).unwrap(), 2);
    }

    #[test]
    fn insert_into_empty_segment() {
        let d = Disposition::empty(2).unwrap();
        let d2 = d.insert_element(1, 0).unwrap();
        assert_eq!(d2.segments(), &[vec![], vec![1]]);
        assert_eq!(d2.stats().rlmin, vec![0, 1]);
    }

    #[test]
    fn insert_before_existing_entries_preserves_rlmin() {
        // Checked over every disposition in D_{3,2} and every segment.
        for d in enumerate_dispositions(3, 2) {
            let before = d.stats().rlmin;
            for seg in 0..d.n() {
                for pos in 0..d.segment(seg).len() {
                    let d2 = d.insert_element(seg, pos).unwrap();
                    assert_eq!(d2.stats().rlmin, before, "{d} -> {d2}");
                }
                // Appending at the back raises that segment's count by one.
                let d2 = d.insert_element(seg, d.segment(seg).len()).unwrap();
                let mut expect = before.clone();
                expect[seg] += 1;
                assert_eq!(d2.stats().rlmin, expect);
            }
        }
    }

    #[test]
    fn insert_out_of_range_is_rejected() {
        let d = Disposition::empty(2).unwrap();
        assert!(matches!(d.insert_element(2, 0), Err(Error::OutOfRange(_))));
        assert!(matches!(d.insert_element(0, 1), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn insertion_is_a_bijection() {
        // (disposition of [m−1], slot) -> disposition of [m] hits every
        // member of D_{m,n} exactly once.
        for n in 1..=3 {
            for m in 1..=4 {
                let mut built = std::collections::HashSet::new();
                for d in enumerate_dispositions(m - 1, n) {
                    for seg in 0..n {
                        for pos in 0..=d.segment(seg).len() {
                            assert!(built.insert(d.insert_element(seg, pos).unwrap()));
                        }
                    }
                }
                let all: std::collections::HashSet<Disposition> =
                    enumerate_dispositions(m, n).collect();
                assert_eq!(built, all);
            }
        }
    }

    #[test]
    fn generating_function_small_cases() {
        assert_eq!(generating_function(1, 2).unwrap().to_string(), "x1 + x2");
        // Dispositions (1,2) and (2,1): x1^2 + x1·t.
        assert_eq!(generating_function(2, 1).unwrap().to_string(), "x1^2 + x1*t");
    }

    #[test]
    fn sampling_is_reproducible() {
        let a = sample_seeded(6, 3, 42);
        let b = sample_seeded(6, 3, 42);
        assert_eq!(a, b);
        assert_eq!(a.m(), 6);
        assert_eq!(a.n(), 3);
    }

    #[test]
    fn sample_of_zero_elements_is_empty() {
        assert_eq!(sample_seeded(0, 4, 7), Disposition::empty(4).unwrap());
    }

    #[test]
    fn sample_frequencies_look_uniform() {
        // 24000 draws over the 24 members of D_{3,2}: under the uniform
        // null each count has mean 1000 and σ = sqrt(24000·(1/24)(23/24))
        // ≈ 31, so 5σ ≈ 155.
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = ChaCha12Rng::seed_from_u64(1234);
        let mut counts = std::collections::HashMap::<Disposition, u64>::new();
        for _ in 0..24_000 {
            *counts.entry(sample_uniform(3, 2, &mut rng)).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 24);
        let sigma = (24_000f64 * (1.0 / 24.0) * (23.0 / 24.0)).sqrt();
        for (d, &count) in &counts {
            let dev = (count as f64 - 1000.0).abs();
            assert!(dev <= 5.0 * sigma, "{d}: count {count}");
        }
    }

    #[test]
    fn text_round_trip() {
        let d = example_disposition();
        assert_eq!(d.to_string(), "[2 9|7 4||5||6 1 8|3|]");
        let back: Disposition = d.to_string().parse().unwrap();
        assert_eq!(back, d);
        let empty = Disposition::empty(1).unwrap();
        assert_eq!(empty.to_string(), "[]");
        assert_eq!("[]".parse::<Disposition>().unwrap(), empty);
    }

    #[test]
    fn parse_rejects_bad_partitions() {
        assert!("[1 1|]".parse::<Disposition>().is_err());
        assert!("[3|]".parse::<Disposition>().is_err());
        assert!("1 2".parse::<Disposition>().is_err());
    }

    #[test]
    fn json_round_trip() {
        let d = example_disposition();
        let json = serde_json::to_string(&d).unwrap();
        assert!(json.starts_with(r#"{"m":9,"n":8,"segments":[[2,9],[7,4],[],[5],[],[6,1,8],[3],[]]}"#));
        let back: Disposition = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);
        assert!(serde_json::from_str::<Disposition>(r#"{"m":2,"n":1,"segments":[[1]]}"#).is_err());
    }
}
