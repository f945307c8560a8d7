//! Exact maximum clique by bitset branch-and-bound.
//!
//! Vertices are renumbered so that bit order follows a degeneracy ordering
//! (highest core first). Each search node colours its candidate set greedily
//! and branches on vertices in reverse colour order, pruning once the
//! current clique plus the colour number cannot beat the incumbent.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::BitSet;
use crate::ncgraph::BitGraph;

/// Largest graph [`brute_force_omega`] accepts.
pub const BRUTE_FORCE_MAX: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CliqueError {
    #[error("colour class {class} is not independent: vertices {u} and {v} are adjacent")]
    HintNotIndependent { class: usize, u: usize, v: usize },
    #[error("colour hint does not partition the vertex set (vertex {0})")]
    HintNotPartition(usize),
    #[error("vertices {0} and {1} of the proposed clique are not adjacent")]
    NotAClique(usize, usize),
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(usize),
    #[error("brute force is limited to {BRUTE_FORCE_MAX} vertices, got {0}")]
    TooLarge(usize),
}

/// Disjoint independent sets covering the vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorClasses {
    classes: Vec<Vec<usize>>,
}

impl ColorClasses {
    pub fn new(classes: Vec<Vec<usize>>) -> Self {
        ColorClasses { classes }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Checks that the classes partition `0..g.len()` into independent sets.
    pub fn validate(&self, g: &BitGraph) -> Result<(), CliqueError> {
        let mut seen = BitSet::new(g.len());
        for (ci, class) in self.classes.iter().enumerate() {
            for (i, &u) in class.iter().enumerate() {
                if u >= g.len() {
                    return Err(CliqueError::VertexOutOfRange(u));
                }
                if !seen.insert(u) {
                    return Err(CliqueError::HintNotPartition(u));
                }
                if let Some(&v) = class[i + 1..].iter().find(|&&v| g.has_edge(u, v)) {
                    return Err(CliqueError::HintNotIndependent { class: ci, u, v });
                }
            }
        }
        match (0..g.len()).find(|&v| !seen.contains(v)) {
            Some(v) => Err(CliqueError::HintNotPartition(v)),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum VertexOrder {
    Natural,
    #[default]
    Degeneracy,
}

/// Vertex order with the highest-core vertices first; ties by lowest index.
pub fn degeneracy_order(g: &BitGraph) -> Vec<usize> {
    let n = g.len();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (deg[v], v))
            .unwrap();
        removed[v] = true;
        order.push(v);
        for u in g.neighbors(v).iter() {
            if !removed[u] {
                deg[u] -= 1;
            }
        }
    }
    order.reverse();
    order
}

/// Sequential greedy colouring: each vertex takes the smallest colour unused
/// by its already-coloured neighbours.
pub fn greedy_coloring(g: &BitGraph, order: VertexOrder) -> ColorClasses {
    let seq = match order {
        VertexOrder::Natural => (0..g.len()).collect(),
        VertexOrder::Degeneracy => degeneracy_order(g),
    };
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut members: Vec<BitSet> = Vec::new();
    for v in seq {
        let nb = g.neighbors(v);
        match members.iter().position(|m| m.intersection_count(nb) == 0) {
            Some(c) => {
                classes[c].push(v);
                members[c].insert(v);
            }
            None => {
                classes.push(vec![v]);
                members.push(BitSet::from_indices(g.len(), [v]));
            }
        }
    }
    ColorClasses::new(classes)
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub initial_clique: Option<Vec<usize>>,
    pub color_hint: Option<ColorClasses>,
    pub node_limit: u64,
    pub time_limit: Option<Duration>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            initial_clique: None,
            color_hint: None,
            node_limit: 100_000_000,
            time_limit: Some(Duration::from_secs(600)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Exact,
    LowerBoundOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundSource {
    Coloring,
    Hint,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveStats {
    pub nodes: u64,
    pub elapsed_ms: u64,
    pub root_bound: usize,
    pub bound_source: BoundSource,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CliqueResult {
    pub members: Vec<usize>,
    pub size: usize,
    pub status: Status,
    pub stats: SolveStats,
}

struct Search<'a> {
    rows: &'a [BitSet],
    best: Vec<usize>,
    current: Vec<usize>,
    upper: usize,
    nodes: u64,
    node_limit: u64,
    deadline: Option<Instant>,
    aborted: bool,
}

impl Search<'_> {
    /// Greedy colouring of `p`; returns vertices in non-decreasing colour.
    fn color(&self, p: &BitSet, order: &mut Vec<usize>, colors: &mut Vec<usize>) {
        order.clear();
        colors.clear();
        let mut uncolored = p.clone();
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut q = uncolored.clone();
            while let Some(v) = q.first() {
                q.remove(v);
                uncolored.remove(v);
                q.difference_with(&self.rows[v]);
                order.push(v);
                colors.push(color);
            }
        }
    }

    fn done(&self) -> bool {
        self.aborted || self.best.len() >= self.upper
    }

    fn expand(&mut self, mut p: BitSet) {
        self.nodes += 1;
        if self.nodes >= self.node_limit
            || (self.nodes.is_multiple_of(256)
                && self.deadline.is_some_and(|d| Instant::now() >= d))
        {
            self.aborted = true;
            return;
        }
        let mut order = Vec::new();
        let mut colors = Vec::new();
        self.color(&p, &mut order, &mut colors);
        for i in (0..order.len()).rev() {
            if self.current.len() + colors[i] <= self.best.len() || self.done() {
                return;
            }
            let v = order[i];
            self.current.push(v);
            let mut np = p.clone();
            np.intersect_with(&self.rows[v]);
            if np.is_empty() {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(np);
            }
            self.current.pop();
            p.remove(v);
        }
    }
}

/// Maximum clique with optional seed clique and external colouring bound.
pub fn max_clique_exact(g: &BitGraph, opts: &SolveOptions) -> Result<CliqueResult, CliqueError> {
    let start = Instant::now();
    let n = g.len();
    let mut seed = Vec::new();
    if let Some(c) = &opts.initial_clique {
        check_clique(g, c)?;
        seed = c.clone();
    }
    if let Some(h) = &opts.color_hint {
        h.validate(g)?;
    }
    // renumber so bit order is the degeneracy order
    let order = degeneracy_order(g);
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let rows: Vec<BitSet> = order
        .iter()
        .map(|&v| BitSet::from_indices(n, g.neighbors(v).iter().map(|u| pos[u])))
        .collect();
    let coloring_bound = greedy_coloring(g, VertexOrder::Degeneracy).len();
    let (root_bound, bound_source) = match &opts.color_hint {
        Some(h) if h.len() < coloring_bound => (h.len(), BoundSource::Hint),
        _ => (coloring_bound, BoundSource::Coloring),
    };
    let mut search = Search {
        rows: &rows,
        best: seed.iter().map(|&v| pos[v]).collect(),
        current: Vec::new(),
        upper: root_bound,
        nodes: 0,
        node_limit: opts.node_limit.max(1),
        deadline: opts.time_limit.map(|t| start + t),
        aborted: false,
    };
    if n > 0 && !search.done() {
        search.expand(BitSet::full(n));
    }
    let mut members: Vec<usize> = search.best.iter().map(|&i| order[i]).collect();
    members.sort_unstable();
    check_clique(g, &members).expect("solver produced a non-clique");
    let status = if search.aborted && members.len() < root_bound {
        Status::LowerBoundOnly
    } else {
        Status::Exact
    };
    Ok(CliqueResult {
        size: members.len(),
        members,
        status,
        stats: SolveStats {
            nodes: search.nodes,
            elapsed_ms: start.elapsed().as_millis() as u64,
            root_bound,
            bound_source,
        },
    })
}

fn check_clique(g: &BitGraph, vs: &[usize]) -> Result<(), CliqueError> {
    if let Some(&v) = vs.iter().find(|&&v| v >= g.len()) {
        return Err(CliqueError::VertexOutOfRange(v));
    }
    for (i, &u) in vs.iter().enumerate() {
        for &v in &vs[i + 1..] {
            if !g.has_edge(u, v) {
                return Err(CliqueError::NotAClique(u, v));
            }
        }
    }
    Ok(())
}

/// Greedily completes `partial` to a maximal clique, adding the lowest
/// eligible vertex each step.
pub fn extend_clique(g: &BitGraph, partial: &[usize]) -> Result<Vec<usize>, CliqueError> {
    check_clique(g, partial)?;
    let mut cand = BitSet::full(g.len());
    for &v in partial {
        cand.remove(v);
        cand.intersect_with(g.neighbors(v));
    }
    let mut out = partial.to_vec();
    while let Some(v) = cand.first() {
        out.push(v);
        cand.remove(v);
        cand.intersect_with(g.neighbors(v));
    }
    Ok(out)
}

/// Clique number by enumerating every vertex subset.
pub fn brute_force_omega(g: &BitGraph) -> Result<usize, CliqueError> {
    let n = g.len();
    if n > BRUTE_FORCE_MAX {
        return Err(CliqueError::TooLarge(n));
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, u| m | 1 << u))
        .collect();
    // is_clique[mask] from is_clique[mask minus its lowest bit]
    let mut is_clique = vec![false; 1 << n];
    is_clique[0] = true;
    let mut best = 0;
    for mask in 1u32..(1u32 << n) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        if is_clique[rest as usize] && rest & !adj[low] == 0 {
            is_clique[mask as usize] = true;
            best = best.max(mask.count_ones() as usize);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn complete(n: usize) -> BitGraph {
        let mut g = BitGraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    fn random_graph(n: usize, density: f64, seed: u64) -> BitGraph {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut g = BitGraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(density) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    #[test]
    fn coloring_of_basic_graphs() {
        assert_eq!(greedy_coloring(&complete(4), VertexOrder::Natural).len(), 4);
        assert_eq!(
            greedy_coloring(&BitGraph::new(5), VertexOrder::Degeneracy).len(),
            1
        );
    }

    #[test]
    fn solves_complete_and_empty() {
        let r = max_clique_exact(&complete(6), &SolveOptions::default()).unwrap();
        assert_eq!((r.size, r.status), (6, Status::Exact));
        let r = max_clique_exact(&BitGraph::new(4), &SolveOptions::default()).unwrap();
        assert_eq!(r.size, 1);
        let r = max_clique_exact(&BitGraph::new(0), &SolveOptions::default()).unwrap();
        assert_eq!(r.size, 0);
    }

    #[test]
    fn matches_brute_force_on_random_graphs() {
        for seed in 0..200u64 {
            let n = 1 + (seed as usize % 20);
            let density = [0.2, 0.5, 0.8, 0.95][seed as usize % 4];
            let g = random_graph(n, density, seed);
            let r = max_clique_exact(&g, &SolveOptions::default()).unwrap();
            assert_eq!(r.status, Status::Exact);
            assert_eq!(r.size, brute_force_omega(&g).unwrap(), "seed {seed}");
            assert!(g.is_clique(&r.members));
            assert!(r.size <= greedy_coloring(&g, VertexOrder::Natural).len());
        }
    }

    #[test]
    fn rejects_bad_hints_and_seeds() {
        let mut g = BitGraph::new(3);
        g.add_edge(0, 1);
        let bad = ColorClasses::new(vec![vec![0, 1], vec![2]]);
        let opts = SolveOptions {
            color_hint: Some(bad),
            ..Default::default()
        };
        assert_eq!(
            max_clique_exact(&g, &opts).unwrap_err(),
            CliqueError::HintNotIndependent {
                class: 0,
                u: 0,
                v: 1
            }
        );
        let partial = ColorClasses::new(vec![vec![0], vec![1]]);
        assert!(partial.validate(&g).is_err());
        let opts = SolveOptions {
            initial_clique: Some(vec![0, 2]),
            ..Default::default()
        };
        assert_eq!(
            max_clique_exact(&g, &opts).unwrap_err(),
            CliqueError::NotAClique(0, 2)
        );
    }

    #[test]
    fn node_limit_reports_lower_bound() {
        let g = random_graph(120, 0.9, 7);
        let opts = SolveOptions {
            node_limit: 5,
            ..Default::default()
        };
        let r = max_clique_exact(&g, &opts).unwrap();
        assert_eq!(r.status, Status::LowerBoundOnly);
        assert!(g.is_clique(&r.members));
    }

    #[test]
    fn seeded_hint_closes_immediately() {
        let g = complete(5);
        let hint = ColorClasses::new((0..5).map(|v| vec![v]).collect());
        let opts = SolveOptions {
            initial_clique: Some(vec![0, 1, 2, 3, 4]),
            color_hint: Some(hint),
            ..Default::default()
        };
        let r = max_clique_exact(&g, &opts).unwrap();
        assert_eq!((r.size, r.stats.nodes, r.status), (5, 0, Status::Exact));
    }

    #[test]
    fn extension_is_maximal() {
        let g = random_graph(30, 0.5, 3);
        let c = extend_clique(&g, &[]).unwrap();
        assert!(g.is_clique(&c));
        for v in 0..30 {
            if !c.contains(&v) {
                assert!(c.iter().any(|&u| !g.has_edge(u, v)));
            }
        }
        assert_eq!(extend_clique(&g, &c).unwrap(), c);
        assert!(brute_force_omega(&BitGraph::new(25)).is_err());
    }

    proptest! {
        #[test]
        fn greedy_coloring_is_proper(n in 1usize..40, seed in any::<u64>()) {
            let g = random_graph(n, 0.4, seed);
            for order in [VertexOrder::Natural, VertexOrder::Degeneracy] {
                let c = greedy_coloring(&g, order);
                prop_assert!(c.validate(&g).is_ok());
            }
        }

        #[test]
        fn exact_result_is_bounded_by_coloring(n in 1usize..18, seed in any::<u64>(), d in 0.1f64..0.95) {
            let g = random_graph(n, d, seed);
            let r = max_clique_exact(&g, &SolveOptions::default()).unwrap();
            prop_assert_eq!(r.size, brute_force_omega(&g).unwrap());
            prop_assert!(r.size <= greedy_coloring(&g, VertexOrder::Degeneracy).len());
        }
    }
}
