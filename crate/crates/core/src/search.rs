//! Exact maximum code sizes for tiny n, as maximum cliques of the graph on
//! S_n joining permutations at Kendall distance at least dmin.
//!
//! Branch and bound in the style of Tomita's MCQ: candidates are greedily
//! colored and a branch is cut once the clique plus the number of colors
//! left cannot beat the incumbent. Left multiplication is an automorphism of
//! the graph, so by default the identity is put into the clique up front.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{check_dmin, Error, Result};
use crate::limits::{check_cap, Limits, SEARCH_CAP};
use crate::metrics::kendall_distance;
use crate::permgroup::{enumerate_group, Permutation};

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;
/// At n = 5 smaller distances (other than the trivial dmin = 1) are only
/// searched when the caller raises the node budget.
pub const N5_DEFAULT_MIN_DMIN: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// branch nodes allowed before the search gives up
    pub node_budget: u64,
    pub fix_identity: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { node_budget: DEFAULT_NODE_BUDGET, fix_identity: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSearchResult {
    pub n: usize,
    pub dmin: usize,
    /// size of the best code found; the maximum when `exact`
    pub size: usize,
    /// false if the node budget ran out first
    pub exact: bool,
    pub witness: Vec<Permutation>,
    pub nodes: u64,
}

/// Elements of S_n in lexicographic order, adjacent when far enough apart.
pub struct CodeGraph {
    pub n: usize,
    pub dmin: usize,
    pub elements: Vec<Permutation>,
    adjacency: Vec<FixedBitSet>,
}

impl CodeGraph {
    pub fn new(n: usize, dmin: usize) -> Result<Self> {
        check_cap("code graph", n, SEARCH_CAP)?;
        check_dmin(n, dmin)?;
        let elements = enumerate_group(n, &Limits::default())?;
        let inverses: Vec<Permutation> = elements.iter().map(Permutation::inverse).collect();
        let size = elements.len();
        let mut adjacency = vec![FixedBitSet::with_capacity(size); size];
        for x in 0..size {
            for y in x + 1..size {
                if inverses[x].compose(&elements[y])?.inversions() >= dmin {
                    adjacency[x].insert(y);
                    adjacency[y].insert(x);
                }
            }
        }
        Ok(CodeGraph { n, dmin, elements, adjacency })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_edge(&self, x: usize, y: usize) -> bool {
        self.adjacency[x].contains(y)
    }

    pub fn neighbors(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[x].ones()
    }
}

pub fn max_code(n: usize, dmin: usize) -> Result<CodeSearchResult> {
    max_code_with(n, dmin, &SearchOptions::default())
}

pub fn max_code_with(n: usize, dmin: usize, options: &SearchOptions) -> Result<CodeSearchResult> {
    check_cap("max_code", n, SEARCH_CAP)?;
    check_dmin(n, dmin)?;
    if needs_larger_budget(n, dmin, options) {
        return Err(Error::InvalidArgument(format!(
            "max_code at n = 5 needs dmin >= {N5_DEFAULT_MIN_DMIN} (or 1) unless the node budget is raised above {DEFAULT_NODE_BUDGET}"
        )));
    }
    let graph = CodeGraph::new(n, dmin)?;
    let mut search = Search {
        graph: &graph,
        budget: options.node_budget,
        nodes: 0,
        exhausted: false,
        clique: Vec::new(),
        best: Vec::new(),
    };
    let mut candidates = FixedBitSet::with_capacity(graph.len());
    if options.fix_identity {
        search.clique.push(0);
        search.best.push(0);
        candidates.union_with(&graph.adjacency[0]);
    } else {
        candidates.insert_range(..);
    }
    search.expand(candidates);

    let witness: Vec<Permutation> = search.best.iter().map(|&i| graph.elements[i].clone()).collect();
    validate(&witness, dmin)?;
    Ok(CodeSearchResult {
        n,
        dmin,
        size: witness.len(),
        exact: !search.exhausted,
        witness,
        nodes: search.nodes,
    })
}

/// True for the n = 5 searches that are refused at the default budget.
pub fn needs_larger_budget(n: usize, dmin: usize, options: &SearchOptions) -> bool {
    n == 5 && dmin > 1 && dmin < N5_DEFAULT_MIN_DMIN && options.node_budget <= DEFAULT_NODE_BUDGET
}

/// Pairwise distance check of a claimed code.
pub fn validate(code: &[Permutation], dmin: usize) -> Result<()> {
    for (i, g) in code.iter().enumerate() {
        for h in &code[i + 1..] {
            let distance = kendall_distance(g, h)?;
            if distance < dmin {
                return Err(Error::NotACode { first: g.to_string(), second: h.to_string(), distance, dmin });
            }
        }
    }
    Ok(())
}

struct Search<'a> {
    graph: &'a CodeGraph,
    budget: u64,
    nodes: u64,
    exhausted: bool,
    clique: Vec<usize>,
    best: Vec<usize>,
}

impl Search<'_> {
    fn expand(&mut self, mut candidates: FixedBitSet) {
        let (order, colors) = self.color(&candidates);
        for k in (0..order.len()).rev() {
            if self.exhausted || self.clique.len() + colors[k] <= self.best.len() {
                return;
            }
            if self.nodes >= self.budget {
                self.exhausted = true;
                return;
            }
            self.nodes += 1;
            let v = order[k];
            self.clique.push(v);
            let mut next = candidates.clone();
            next.intersect_with(&self.graph.adjacency[v]);
            if next.is_clear() {
                if self.clique.len() > self.best.len() {
                    self.best = self.clique.clone();
                    self.best.sort_unstable();
                }
            } else {
                self.expand(next);
            }
            self.clique.pop();
            candidates.set(v, false);
        }
    }

    /// Greedy sequential coloring in index order; returns the vertices
    /// sorted by color with the color count up to each one.
    fn color(&self, candidates: &FixedBitSet) -> (Vec<usize>, Vec<usize>) {
        let mut uncolored = candidates.clone();
        let mut order = Vec::with_capacity(candidates.count_ones(..));
        let mut colors = Vec::with_capacity(order.capacity());
        let mut color = 0;
        while !uncolored.is_clear() {
            color += 1;
            let mut open = uncolored.clone();
            while let Some(v) = open.ones().next() {
                open.set(v, false);
                open.difference_with(&self.graph.adjacency[v]);
                uncolored.set(v, false);
                order.push(v);
                colors.push(color);
            }
        }
        (order, colors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unrestricted() -> SearchOptions {
        SearchOptions { fix_identity: false, ..SearchOptions::default() }
    }

    #[test]
    fn s3_sizes_and_witness() {
        let sizes: Vec<usize> = (1..=3).map(|d| max_code(3, d).unwrap().size).collect();
        assert_eq!(sizes, vec![6, 3, 2]);
        let r = max_code(3, 2).unwrap();
        assert!(r.exact);
        let cycles: Vec<String> = r.witness.iter().map(Permutation::cycle_notation).collect();
        assert_eq!(cycles, vec!["e", "(123)", "(132)"]);
    }

    #[test]
    fn s4_sizes() {
        let sizes: Vec<usize> = (1..=6).map(|d| max_code(4, d).unwrap().size).collect();
        assert_eq!(sizes, vec![24, 12, 5, 3, 2, 2]);
    }

    #[test]
    fn fixing_identity_is_sound() {
        for n in 3..=4 {
            for d in 1..=n * (n - 1) / 2 {
                let fixed = max_code(n, d).unwrap();
                let free = max_code_with(n, d, &unrestricted()).unwrap();
                assert!(fixed.exact && free.exact);
                assert_eq!(fixed.size, free.size, "n = {n}, dmin = {d}");
                assert!(fixed.witness.contains(&Permutation::identity(n)));
            }
        }
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let options = SearchOptions { node_budget: 2, ..SearchOptions::default() };
        let r = max_code_with(4, 3, &options).unwrap();
        assert!(!r.exact);
        assert!(r.size < 5);
        validate(&r.witness, 3).unwrap();
    }

    #[test]
    fn graph_is_left_invariant_and_loop_free() {
        let g = CodeGraph::new(4, 3).unwrap();
        for x in 0..g.len() {
            assert!(!g.is_edge(x, x));
        }
        let rank = |p: &Permutation| p.rank();
        for a in &g.elements {
            for x in 0..g.len() {
                for y in g.neighbors(x) {
                    let ax = rank(&a.compose(&g.elements[x]).unwrap());
                    let ay = rank(&a.compose(&g.elements[y]).unwrap());
                    assert!(g.is_edge(ax, ay));
                }
            }
        }
    }

    #[test]
    fn preconditions() {
        assert!(max_code(6, 10).is_err());
        assert!(max_code(4, 0).is_err());
        assert!(max_code(4, 7).is_err());
        assert!(max_code(5, 3).is_err());
        assert_eq!(max_code(5, 1).unwrap().size, 120);
        assert_eq!(max_code(2, 1).unwrap().size, 2);
        assert!(validate(&[Permutation::identity(3), Permutation::identity(3)], 1).is_err());
    }
}
