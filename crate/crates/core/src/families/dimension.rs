//! Exact VC dimension and the three k-ary generalizations (Natarajan, graph,
//! Pollard).
//!
//! Both searches walk index sets depth-first in lexicographic order and only
//! extend sets that are already shattered: every subset of a shattered set is
//! shattered, so a set that fails can never be part of a larger shattered
//! set. The search stops early once it reaches `floor(log2 m)`, the largest
//! size a class of `m` vectors can shatter.

use std::collections::HashSet;

use serde::Serialize;

use super::FunctionClass;
use crate::error::{Error, Result};

/// Result of a dimension search. `lower == upper` when the search finished.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionRange {
    pub lower: usize,
    pub upper: usize,
    /// A shattered index set of size `lower`.
    pub witness: Vec<usize>,
}

impl DimensionRange {
    pub fn exact(&self) -> Option<usize> {
        (self.lower == self.upper).then_some(self.lower)
    }
}

fn log2_floor(m: usize) -> usize {
    if m <= 1 {
        0
    } else {
        (usize::BITS - 1 - m.leading_zeros()) as usize
    }
}

/// Exact VC dimension of a binary class.
pub fn vc_dimension(f: &FunctionClass) -> Result<usize> {
    Ok(vc_dimension_bounded(f, None)?.lower)
}

/// VC dimension search that gives up after `budget` shattering tests, in
/// which case the result is a range with upper end `floor(log2 m)`.
pub fn vc_dimension_bounded(f: &FunctionClass, budget: Option<u64>) -> Result<DimensionRange> {
    if !f.is_binary() {
        return Err(Error::domain(format!(
            "vc_dimension requires a binary class, got k = {}",
            f.k()
        )));
    }
    let cap = log2_floor(f.len());
    let mut search = VcSearch {
        f,
        cap,
        best: 0,
        best_set: Vec::new(),
        tests: 0,
        budget,
        aborted: false,
        stamp: vec![0; 1 << (cap + 1).min(31)],
        generation: 0,
    };
    if cap > 0 {
        let patterns = vec![0u32; f.len()];
        search.dfs(0, &mut Vec::new(), &patterns);
    }
    Ok(DimensionRange {
        lower: search.best,
        upper: if search.aborted { cap } else { search.best },
        witness: search.best_set,
    })
}

struct VcSearch<'a> {
    f: &'a FunctionClass,
    cap: usize,
    best: usize,
    best_set: Vec<usize>,
    tests: u64,
    budget: Option<u64>,
    aborted: bool,
    stamp: Vec<u32>,
    generation: u32,
}

impl VcSearch<'_> {
    /// Returns true when the search should stop.
    fn dfs(&mut self, start: usize, set: &mut Vec<usize>, patterns: &[u32]) -> bool {
        let n = self.f.n();
        let s = set.len();
        let mut extended = vec![0u32; patterns.len()];
        for j in start..n {
            if s + (n - j) <= self.best {
                break;
            }
            self.tests += 1;
            if self.budget.is_some_and(|b| self.tests > b) {
                self.aborted = true;
                return true;
            }
            for (r, (e, &p)) in extended.iter_mut().zip(patterns).enumerate() {
                *e = p | ((self.f.symbol(r, j) as u32) << s);
            }
            if !self.is_full(&extended, s + 1) {
                continue;
            }
            set.push(j);
            if s + 1 > self.best {
                self.best = s + 1;
                self.best_set = set.clone();
                if self.best == self.cap {
                    return true;
                }
            }
            let next = extended.clone();
            if self.dfs(j + 1, set, &next) {
                return true;
            }
            set.pop();
        }
        false
    }

    fn is_full(&mut self, patterns: &[u32], size: usize) -> bool {
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.generation = 1;
        }
        let want = 1usize << size;
        let mut count = 0;
        for &p in patterns {
            let slot = &mut self.stamp[p as usize];
            if *slot != self.generation {
                *slot = self.generation;
                count += 1;
                if count == want {
                    return true;
                }
            }
        }
        false
    }
}

/// The generalized combinatorial dimensions for k-ary classes.
///
/// * Natarajan: witnesses `f1(i) != f2(i)`; every `S` realized by a vector
///   equal to `f1` on `S` and `f2` off `S`.
/// * Graph: one witness `g`; every `S` realized by a vector agreeing with
///   `g` exactly on `S`.
/// * Pollard: thresholds `w_i in 1..k`; every pattern of `x_i >= w_i`
///   realized.
///
/// For `k = 2` all three equal the VC dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GeneralizedDimension {
    Natarajan,
    Graph,
    Pollard,
}

impl GeneralizedDimension {
    pub const ALL: [GeneralizedDimension; 3] = [
        GeneralizedDimension::Natarajan,
        GeneralizedDimension::Graph,
        GeneralizedDimension::Pollard,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneralizedDimension::Natarajan => "natarajan",
            GeneralizedDimension::Graph => "graph",
            GeneralizedDimension::Pollard => "pollard",
        }
    }

    /// Per-coordinate witness choices, restricted to symbols that occur in
    /// the column.
    fn options(self, present: &[bool]) -> Vec<Witness> {
        let k = present.len() as u8;
        let symbols: Vec<u8> = (0..k).filter(|&s| present[s as usize]).collect();
        match self {
            GeneralizedDimension::Natarajan => {
                let mut out = Vec::new();
                for &a in &symbols {
                    for &b in &symbols {
                        if a != b {
                            out.push(Witness::Pair(a, b));
                        }
                    }
                }
                out
            }
            GeneralizedDimension::Graph => {
                if symbols.len() < 2 {
                    Vec::new()
                } else {
                    symbols.iter().map(|&g| Witness::Equal(g)).collect()
                }
            }
            GeneralizedDimension::Pollard => {
                let (Some(&lo), Some(&hi)) = (symbols.first(), symbols.last()) else {
                    return Vec::new();
                };
                (lo + 1..=hi).map(Witness::Threshold).collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Witness {
    Pair(u8, u8),
    Equal(u8),
    Threshold(u8),
}

impl Witness {
    fn classify(self, x: u8) -> Option<bool> {
        match self {
            Witness::Pair(a, b) => {
                if x == a {
                    Some(true)
                } else if x == b {
                    Some(false)
                } else {
                    None
                }
            }
            Witness::Equal(g) => Some(x == g),
            Witness::Threshold(t) => Some(x >= t),
        }
    }
}

/// Per-row masks on the current index set; `None` marks rows that a
/// Natarajan witness excludes.
type Masks = Vec<Option<u32>>;

/// Exact generalized dimension, optionally budgeted like
/// [`vc_dimension_bounded`].
pub fn generalized_dimension(
    f: &FunctionClass,
    kind: GeneralizedDimension,
    budget: Option<u64>,
) -> DimensionRange {
    let cap = log2_floor(f.len());
    let mut search = GenSearch {
        f,
        kind,
        cap,
        best: 0,
        best_set: Vec::new(),
        tests: 0,
        budget,
        aborted: false,
    };
    if cap > 0 {
        let start = vec![vec![Some(0u32); f.len()]];
        search.dfs(0, &mut Vec::new(), &start);
    }
    DimensionRange {
        lower: search.best,
        upper: if search.aborted { cap } else { search.best },
        witness: search.best_set,
    }
}

pub fn natarajan_dim(f: &FunctionClass) -> usize {
    generalized_dimension(f, GeneralizedDimension::Natarajan, None).lower
}

pub fn graph_dim(f: &FunctionClass) -> usize {
    generalized_dimension(f, GeneralizedDimension::Graph, None).lower
}

pub fn pollard_dim(f: &FunctionClass) -> usize {
    generalized_dimension(f, GeneralizedDimension::Pollard, None).lower
}

struct GenSearch<'a> {
    f: &'a FunctionClass,
    kind: GeneralizedDimension,
    cap: usize,
    best: usize,
    best_set: Vec<usize>,
    tests: u64,
    budget: Option<u64>,
    aborted: bool,
}

impl GenSearch<'_> {
    fn dfs(&mut self, start: usize, set: &mut Vec<usize>, candidates: &[Masks]) -> bool {
        let n = self.f.n();
        let s = set.len();
        for j in start..n {
            if s + (n - j) <= self.best {
                break;
            }
            let mut present = vec![false; self.f.k() as usize];
            for r in 0..self.f.len() {
                present[self.f.symbol(r, j) as usize] = true;
            }
            let options = self.kind.options(&present);
            let mut survivors: Vec<Masks> = Vec::new();
            let mut seen: HashSet<Masks> = HashSet::new();
            for cand in candidates {
                for &w in &options {
                    self.tests += 1;
                    if self.budget.is_some_and(|b| self.tests > b) {
                        self.aborted = true;
                        return true;
                    }
                    let masks: Masks = cand
                        .iter()
                        .enumerate()
                        .map(|(r, m)| {
                            let m = (*m)?;
                            let bit = w.classify(self.f.symbol(r, j))?;
                            Some(m | ((bit as u32) << s))
                        })
                        .collect();
                    if is_full(&masks, s + 1) && seen.insert(masks.clone()) {
                        survivors.push(masks);
                    }
                }
            }
            if survivors.is_empty() {
                continue;
            }
            set.push(j);
            if s + 1 > self.best {
                self.best = s + 1;
                self.best_set = set.clone();
                if self.best == self.cap {
                    return true;
                }
            }
            if self.dfs(j + 1, set, &survivors) {
                return true;
            }
            set.pop();
        }
        false
    }
}

fn is_full(masks: &Masks, size: usize) -> bool {
    let want = 1usize << size;
    let mut seen = vec![false; want];
    let mut count = 0;
    for m in masks.iter().flatten() {
        let slot = &mut seen[*m as usize];
        if !*slot {
            *slot = true;
            count += 1;
            if count == want {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::sylvester_hadamard;
    use crate::families::shatters;

    fn cube(k: u8, n: usize) -> FunctionClass {
        let mut rows = vec![vec![]];
        for _ in 0..n {
            rows = rows
                .into_iter()
                .flat_map(|r: Vec<u8>| {
                    (0..k).map(move |s| {
                        let mut r = r.clone();
                        r.push(s);
                        r
                    })
                })
                .collect();
        }
        FunctionClass::new(k as u32, n, rows).unwrap()
    }

    /// Brute force over every index subset, independent of the search.
    fn vc_brute(f: &FunctionClass) -> usize {
        let n = f.n();
        (0u32..1 << n)
            .filter_map(|mask| {
                let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                shatters(f, &idx).unwrap().then_some(idx.len())
            })
            .max()
            .unwrap_or(0)
    }

    fn all_subsets_of_cube3() -> Vec<FunctionClass> {
        let c = cube(2, 3);
        (1u32..256)
            .map(|mask| {
                let rows = (0..8)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| c.row(i).to_vec())
                    .collect();
                FunctionClass::new(2, 3, rows).unwrap()
            })
            .collect()
    }

    #[test]
    fn hadamard_vc_dimension() {
        for n in 0..=4 {
            assert_eq!(
                vc_dimension(&sylvester_hadamard(n).unwrap()).unwrap(),
                n as usize
            );
        }
    }

    #[test]
    fn trivial_cases() {
        let single = FunctionClass::new(2, 4, vec![vec![0, 1, 1, 0]]).unwrap();
        assert_eq!(vc_dimension(&single).unwrap(), 0);
        for n in 1..=6 {
            assert_eq!(vc_dimension(&cube(2, n)).unwrap(), n);
        }
        for k in [3u8, 4] {
            let c = cube(k, 2);
            for kind in GeneralizedDimension::ALL {
                assert_eq!(
                    generalized_dimension(&c, kind, None).lower,
                    2,
                    "{kind:?} k={k}"
                );
            }
            let s = FunctionClass::new(k as u32, 2, vec![vec![0, 1]]).unwrap();
            for kind in GeneralizedDimension::ALL {
                assert_eq!(generalized_dimension(&s, kind, None).lower, 0);
            }
        }
        let ternary = FunctionClass::new(3, 1, vec![vec![0]]).unwrap();
        assert!(vc_dimension(&ternary).is_err());
    }

    #[test]
    fn exhaustive_cube3_all_dimensions_agree() {
        for f in all_subsets_of_cube3() {
            let vc = vc_dimension(&f).unwrap();
            assert_eq!(vc, vc_brute(&f));
            assert_eq!(natarajan_dim(&f), vc);
            assert_eq!(graph_dim(&f), vc);
            assert_eq!(pollard_dim(&f), vc);
        }
    }

    #[test]
    fn witness_is_shattered() {
        let h = sylvester_hadamard(3).unwrap();
        let r = vc_dimension_bounded(&h, None).unwrap();
        assert_eq!(r.exact(), Some(3));
        assert!(shatters(&h, &r.witness).unwrap());
    }

    #[test]
    fn budget_yields_range() {
        let h = sylvester_hadamard(4).unwrap();
        let r = vc_dimension_bounded(&h, Some(1)).unwrap();
        assert!(r.lower <= 4 && r.upper == 4);
    }

    #[test]
    fn graph_dimension_of_a_star() {
        // one coordinate with three distinct symbols: all dims are 1
        let f = FunctionClass::new(3, 1, vec![vec![0], vec![1], vec![2]]).unwrap();
        for kind in GeneralizedDimension::ALL {
            assert_eq!(generalized_dimension(&f, kind, None).lower, 1);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn binary_class() -> impl Strategy<Value = FunctionClass> {
            (1usize..8).prop_flat_map(|n| {
                proptest::collection::vec(proptest::collection::vec(0u8..2, n), 1..24)
                    .prop_map(move |rows| FunctionClass::with_dedup(2, n, rows).unwrap())
            })
        }

        proptest! {
            #[test]
            fn search_matches_brute_force(f in binary_class()) {
                let vc = vc_dimension(&f).unwrap();
                prop_assert_eq!(vc, vc_brute(&f));
                prop_assert!(1usize << vc <= f.len());
                prop_assert_eq!(natarajan_dim(&f), vc);
                prop_assert_eq!(graph_dim(&f), vc);
                prop_assert_eq!(pollard_dim(&f), vc);
            }

            #[test]
            fn projection_does_not_increase_dimension(f in binary_class(), seed in any::<u64>()) {
                use rand::{seq::index::sample, SeedableRng};
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let size = 1 + (seed as usize % f.n());
                let idx = sample(&mut rng, f.n(), size).into_vec();
                let p = crate::families::project(&f, &idx).unwrap();
                prop_assert!(vc_dimension(&p).unwrap() <= vc_dimension(&f).unwrap());
            }
        }
    }
}
