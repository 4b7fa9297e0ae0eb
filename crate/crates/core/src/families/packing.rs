//! Exact packing numbers: the largest subset with all pairwise normalized
//! distances `>= eps`, found as a maximum clique of the separation graph.
//!
//! Branch and bound in the style of Tomita's MCQ: vertices in degeneracy
//! order, candidate sets as bitsets, greedy coloring as the upper bound.
//! Tie-breaking is by position only, so results are reproducible.

use num_rational::Rational64;
use serde::Serialize;

use super::FunctionClass;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PackingResult {
    /// Separation threshold as `p/q`.
    pub eps: String,
    pub size: usize,
    /// Row indices of an eps-separated subset of size `size`, ascending.
    pub witness: Vec<usize>,
    /// False when the search ran out of budget; `size` is then a lower bound.
    pub exact: bool,
}

pub fn packing_number(f: &FunctionClass, eps: Rational64) -> Result<PackingResult> {
    packing_number_bounded(f, eps, None)
}

pub fn packing_number_bounded(
    f: &FunctionClass,
    eps: Rational64,
    node_budget: Option<u64>,
) -> Result<PackingResult> {
    if eps <= Rational64::from_integer(0) || eps > Rational64::from_integer(1) {
        return Err(Error::domain(format!("packing eps = {eps} outside (0, 1]")));
    }
    let m = f.len();
    let n = f.n() as i64;
    // rho >= p/q  <=>  disagreements * q >= p * n
    let (p, q) = (*eps.numer(), *eps.denom());
    let separated = |i: usize, j: usize| f.disagreements(i, j) as i64 * q >= p * n;

    let mut adj = vec![vec![false; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            if separated(i, j) {
                adj[i][j] = true;
                adj[j][i] = true;
            }
        }
    }
    let order = degeneracy_order(&adj);
    let words = m.div_ceil(64).max(1);
    let mut bits = vec![vec![0u64; words]; m];
    for (a, &u) in order.iter().enumerate() {
        for (b, &v) in order.iter().enumerate() {
            if adj[u][v] {
                bits[a][b / 64] |= 1u64 << (b % 64);
            }
        }
    }
    let mut search = CliqueSearch {
        adj: bits,
        best: Vec::new(),
        nodes: 0,
        budget: node_budget,
        aborted: false,
    };
    let mut all = vec![0u64; words];
    for v in 0..m {
        all[v / 64] |= 1u64 << (v % 64);
    }
    search.expand(&mut Vec::new(), all);
    let mut witness: Vec<usize> = search.best.iter().map(|&v| order[v]).collect();
    witness.sort_unstable();
    Ok(PackingResult {
        eps: format!("{}/{}", p, q),
        size: witness.len(),
        witness,
        exact: !search.aborted,
    })
}

/// Vertices ordered so that high-core vertices come first.
fn degeneracy_order(adj: &[Vec<bool>]) -> Vec<usize> {
    let m = adj.len();
    let mut degree: Vec<usize> = adj
        .iter()
        .map(|r| r.iter().filter(|&&e| e).count())
        .collect();
    let mut removed = vec![false; m];
    let mut peel = Vec::with_capacity(m);
    for _ in 0..m {
        let v = (0..m)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (degree[v], v))
            .unwrap_or(0);
        removed[v] = true;
        peel.push(v);
        for u in 0..m {
            if adj[v][u] && !removed[u] {
                degree[u] -= 1;
            }
        }
    }
    peel.reverse();
    peel
}

struct CliqueSearch {
    adj: Vec<Vec<u64>>,
    best: Vec<usize>,
    nodes: u64,
    budget: Option<u64>,
    aborted: bool,
}

fn first_bit(set: &[u64]) -> Option<usize> {
    set.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn is_empty(set: &[u64]) -> bool {
    set.iter().all(|&w| w == 0)
}

impl CliqueSearch {
    /// Greedy coloring of `candidates`; returns vertices with their color,
    /// in nondecreasing color order.
    fn color(&self, candidates: &[u64]) -> Vec<(usize, usize)> {
        let mut uncolored = candidates.to_vec();
        let mut out = Vec::new();
        let mut color = 0;
        while !is_empty(&uncolored) {
            color += 1;
            let mut q = uncolored.clone();
            while let Some(v) = first_bit(&q) {
                q[v / 64] &= !(1u64 << (v % 64));
                uncolored[v / 64] &= !(1u64 << (v % 64));
                for (w, a) in q.iter_mut().zip(&self.adj[v]) {
                    *w &= !a;
                }
                out.push((v, color));
            }
        }
        out
    }

    fn expand(&mut self, current: &mut Vec<usize>, mut candidates: Vec<u64>) {
        let colored = self.color(&candidates);
        for &(v, c) in colored.iter().rev() {
            if current.len() + c <= self.best.len() {
                return;
            }
            self.nodes += 1;
            if self.budget.is_some_and(|b| self.nodes > b) {
                self.aborted = true;
                return;
            }
            current.push(v);
            let next: Vec<u64> = candidates
                .iter()
                .zip(&self.adj[v])
                .map(|(a, b)| a & b)
                .collect();
            if is_empty(&next) {
                if current.len() > self.best.len() {
                    self.best = current.clone();
                }
            } else {
                self.expand(current, next);
                if self.aborted {
                    return;
                }
            }
            current.pop();
            candidates[v / 64] &= !(1u64 << (v % 64));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::sylvester_hadamard;

    fn r(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    /// Largest separated subset by enumerating all subsets.
    fn brute(f: &FunctionClass, eps: Rational64) -> usize {
        let m = f.len();
        (0u32..1 << m)
            .filter(|mask| {
                let idx: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
                idx.iter()
                    .enumerate()
                    .all(|(a, &i)| idx[a + 1..].iter().all(|&j| f.rho(i, j) >= eps))
            })
            .map(|mask| mask.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn hadamard_half_separated() {
        for n in 0..=4 {
            let h = sylvester_hadamard(n).unwrap();
            let p = packing_number(&h, r(1, 2)).unwrap();
            assert_eq!(p.size, 1 << n);
            assert!(p.exact);
        }
    }

    #[test]
    fn one_over_n_gives_everything() {
        let f =
            FunctionClass::new(2, 3, vec![vec![0, 0, 0], vec![0, 0, 1], vec![1, 1, 1]]).unwrap();
        assert_eq!(packing_number(&f, r(1, 3)).unwrap().size, 3);
    }

    #[test]
    fn eps_one_needs_antipodes() {
        let f =
            FunctionClass::new(2, 3, vec![vec![0, 0, 0], vec![1, 1, 1], vec![0, 1, 0]]).unwrap();
        assert_eq!(packing_number(&f, r(1, 1)).unwrap().size, 2);
        let g =
            FunctionClass::new(2, 3, vec![vec![0, 0, 0], vec![1, 1, 0], vec![0, 1, 0]]).unwrap();
        assert_eq!(packing_number(&g, r(1, 1)).unwrap().size, 1);
    }

    #[test]
    fn rejects_bad_eps() {
        let h = sylvester_hadamard(1).unwrap();
        assert!(packing_number(&h, r(0, 1)).is_err());
        assert!(packing_number(&h, r(3, 2)).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn matches_subset_enumeration(
                n in 1usize..7,
                rows in proptest::collection::vec(proptest::collection::vec(0u8..3, 6), 1..13),
                p in 1i64..7,
            ) {
                let rows: Vec<Vec<u8>> = rows.into_iter().map(|r| r[..n].to_vec()).collect();
                let f = FunctionClass::with_dedup(3, n, rows).unwrap();
                let eps = r(p.min(n as i64), n as i64);
                let res = packing_number(&f, eps).unwrap();
                prop_assert_eq!(res.size, brute(&f, eps));
                for (a, &i) in res.witness.iter().enumerate() {
                    for &j in &res.witness[a + 1..] {
                        prop_assert!(f.rho(i, j) >= eps);
                    }
                }
                prop_assert_eq!(packing_number(&f, r(1, n as i64)).unwrap().size, f.len());
            }
        }
    }
}
