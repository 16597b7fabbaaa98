//! Rooted finite multigraphs and their local statistics.
//!
//! A finite graph is turned into a random rooted graph by choosing the root
//! uniformly. Sequences of graphs converge locally when the distributions of
//! their rooted `R`-balls converge for every `R`; the operations here compute
//! those distributions exactly, measure how far a graph is from looking like
//! its universal cover, and test the mass-transport identity that uniformly
//! rooted graphs satisfy.

mod canon;
mod io;

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

pub use canon::{certificate, CanonInput};
pub use io::{parse_edge_list, write_edge_list, write_statistics_csv};

/// Generator label carried by Schreier and Cayley graph edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeLabel {
    pub generator: usize,
    /// `true` when the edge is read against the generator direction.
    pub inverse: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub label: Option<EdgeLabel>,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

#[derive(Debug, PartialEq)]
struct Topology {
    vertex_count: usize,
    edges: Vec<Edge>,
    // (neighbor, edge index); loops appear twice
    adjacency: Vec<Vec<(usize, usize)>>,
}

/// Finite multigraph (loops and parallel edges allowed) with a root.
///
/// The topology is shared, so re-rooting is cheap.
#[derive(Debug, Clone, PartialEq)]
pub struct RootedGraph {
    topo: Arc<Topology>,
    root: usize,
}

impl RootedGraph {
    pub fn new(vertex_count: usize, edges: Vec<Edge>, root: usize) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidVertex { vertex: 0, count: 0 });
        }
        let mut adjacency = vec![Vec::new(); vertex_count];
        for (i, e) in edges.iter().enumerate() {
            for x in [e.u, e.v] {
                if x >= vertex_count {
                    return Err(Error::InvalidVertex { vertex: x, count: vertex_count });
                }
            }
            adjacency[e.u].push((e.v, i));
            adjacency[e.v].push((e.u, i));
        }
        if root >= vertex_count {
            return Err(Error::InvalidVertex { vertex: root, count: vertex_count });
        }
        Ok(Self { topo: Arc::new(Topology { vertex_count, edges, adjacency }), root })
    }

    /// Unlabeled graph from vertex pairs, rooted at vertex 0.
    pub fn from_pairs(vertex_count: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let edges = pairs.iter().map(|&(u, v)| Edge { u, v, label: None }).collect();
        Self::new(vertex_count, edges, 0)
    }

    pub fn cycle(n: usize) -> Self {
        let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_pairs(n, &pairs).expect("valid cycle")
    }

    pub fn path(n: usize) -> Self {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_pairs(n, &pairs).expect("valid path")
    }

    pub fn complete(n: usize) -> Self {
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i, j));
            }
        }
        Self::from_pairs(n, &pairs).expect("valid complete graph")
    }

    pub fn edgeless(n: usize) -> Self {
        Self::from_pairs(n, &[]).expect("valid edgeless graph")
    }

    /// Uniformly random labeled tree on `n` vertices (random Prüfer-like attachment).
    pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Self {
        let pairs: Vec<_> = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
        Self::from_pairs(n, &pairs).expect("valid tree")
    }

    /// Erdős-Rényi graph `G(n, p)`.
    pub fn random_gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Self {
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(p) {
                    pairs.push((i, j));
                }
            }
        }
        Self::from_pairs(n, &pairs).expect("valid gnp graph")
    }

    pub fn vertex_count(&self) -> usize {
        self.topo.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.topo.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.topo.edges
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn with_root(&self, root: usize) -> Result<Self> {
        self.check_vertex(root)?;
        Ok(Self { topo: Arc::clone(&self.topo), root })
    }

    /// Same graph with vertices renamed by `perm` (vertex `v` becomes `perm[v]`).
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        let edges = self
            .edges()
            .iter()
            .map(|e| Edge { u: perm[e.u], v: perm[e.v], label: e.label })
            .collect();
        Self::new(self.vertex_count(), edges, perm[self.root]).expect("relabeling is a bijection")
    }

    /// Neighbors of `v` with the connecting edge index. Loops are listed twice.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.topo.adjacency[v]
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, v: usize) -> usize {
        self.topo.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::InvalidVertex { vertex: v, count: self.vertex_count() })
        }
    }

    /// BFS distances from `source`, truncated at `radius` (`None` = unbounded).
    pub fn distances(&self, source: usize, radius: Option<usize>) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].expect("queued vertices have distances");
            if radius.is_some_and(|r| du >= r) {
                continue;
            }
            for &(w, _) in self.neighbors(u) {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.distances(0, None).iter().all(Option::is_some)
    }

    /// Induced ball of radius `radius` around `center`, re-indexed so that
    /// the center is local vertex 0. Also returns the local-to-global map.
    pub fn ball(&self, center: usize, radius: usize) -> (RootedGraph, Vec<usize>) {
        let dist = self.distances(center, Some(radius));
        let mut members: Vec<usize> = Vec::new();
        let mut local = vec![usize::MAX; self.vertex_count()];
        // BFS order keeps the center first
        let mut order: Vec<(usize, usize)> = dist
            .iter()
            .enumerate()
            .filter_map(|(v, d)| d.map(|d| (d, v)))
            .collect();
        order.sort_unstable();
        for (_, v) in order {
            local[v] = members.len();
            members.push(v);
        }
        let mut edges = Vec::new();
        for e in self.edges() {
            if local[e.u] != usize::MAX && local[e.v] != usize::MAX {
                edges.push(Edge { u: local[e.u], v: local[e.v], label: e.label });
            }
        }
        let g = RootedGraph::new(members.len(), edges, 0).expect("ball is well formed");
        (g, members)
    }

    fn canon_input(&self) -> CanonInput {
        CanonInput::from_graph(self)
    }
}

/// Rooted-isomorphism class of a radius-`R` ball, as an exact canonical form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BallClass {
    pub radius: usize,
    pub certificate: Vec<u8>,
}

impl BallClass {
    pub fn hex(&self) -> String {
        self.certificate.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Ball class of the rooted ball of radius `radius` around `v`.
pub fn ball_class(g: &RootedGraph, v: usize, radius: usize) -> Result<BallClass> {
    g.check_vertex(v)?;
    let (ball, _) = g.ball(v, radius);
    Ok(BallClass { radius, certificate: certificate(&ball.canon_input()) })
}

/// Ball of radius `radius` in the universal cover, rooted at a lift of `v`.
///
/// Built by unfolding non-backtracking edge walks. Stops and returns `None`
/// once the unfolded ball exceeds `size_cap` vertices.
fn universal_cover_ball(g: &RootedGraph, v: usize, radius: usize, size_cap: usize) -> Option<RootedGraph> {
    // frontier entries: (cover vertex, base vertex, arriving edge, arriving direction)
    // A loop can be traversed in two directions, which are distinct in the cover.
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut frontier: Vec<(usize, usize, Option<(usize, usize)>)> = vec![(0, v, None)];
    let mut count = 1usize;
    for _ in 0..radius {
        let mut next = Vec::new();
        for &(cv, base, arrived) in &frontier {
            for (slot, &(w, e)) in g.neighbors(base).iter().enumerate() {
                // a loop shows up twice in the adjacency list; slot parity marks direction
                let dir = if g.edges()[e].is_loop() { slot_direction(g, base, slot) } else { 0 };
                if let Some((ae, adir)) = arrived {
                    // skip the reverse of the arriving step
                    if ae == e && (!g.edges()[e].is_loop() || dir == reverse_of(adir)) {
                        continue;
                    }
                }
                if count >= size_cap {
                    return None;
                }
                let child = count;
                count += 1;
                pairs.push((cv, child));
                next.push((child, w, Some((e, dir))));
            }
        }
        frontier = next;
    }
    Some(RootedGraph::from_pairs(count, &pairs).expect("cover ball is a tree"))
}

// For a loop at `base`, the two adjacency entries correspond to the two
// traversal directions: the first occurrence is direction 0, the second 1.
fn slot_direction(g: &RootedGraph, base: usize, slot: usize) -> usize {
    let e = g.neighbors(base)[slot].1;
    let first = g.neighbors(base).iter().position(|&(_, x)| x == e).expect("present");
    usize::from(first != slot)
}

fn reverse_of(dir: usize) -> usize {
    1 - dir
}

/// Graph injectivity radius at `v`: the largest `R <= r_max` such that the
/// induced ball `B(v, R)` is rooted-isomorphic to the radius-`R` ball of the
/// universal cover. Returns `r_max` when the cap is reached.
pub fn injectivity_radius(g: &RootedGraph, v: usize, r_max: usize) -> Result<usize> {
    g.check_vertex(v)?;
    for r in 1..=r_max {
        let (ball, _) = g.ball(v, r);
        let matches = match universal_cover_ball(g, v, r, ball.vertex_count() + 1) {
            Some(cover) if cover.vertex_count() == ball.vertex_count() => {
                ball.edge_count() == cover.edge_count()
                    && certificate(&ball.canon_input()) == certificate(&cover.canon_input())
            }
            _ => false,
        };
        if !matches {
            return Ok(r - 1);
        }
    }
    Ok(r_max)
}

/// Fraction of vertices whose injectivity radius is below `radius`.
pub fn thin_fraction(g: &RootedGraph, radius: usize) -> f64 {
    if radius == 0 {
        return 0.0;
    }
    let thin = (0..g.vertex_count())
        .filter(|&v| injectivity_radius(g, v, radius).expect("valid vertex") < radius)
        .count();
    thin as f64 / g.vertex_count() as f64
}

/// Empirical distribution of rooted `R`-balls under a uniformly random root.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalStatistics {
    pub radius: usize,
    pub distribution: BTreeMap<Vec<u8>, f64>,
}

impl LocalStatistics {
    pub fn total_mass(&self) -> f64 {
        self.distribution.values().sum()
    }

    pub fn class_count(&self) -> usize {
        self.distribution.len()
    }
}

pub fn ball_statistics(g: &RootedGraph, radius: usize) -> LocalStatistics {
    let mut counts: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
    for v in 0..g.vertex_count() {
        let class = ball_class(g, v, radius).expect("valid vertex");
        *counts.entry(class.certificate).or_default() += 1;
    }
    let n = g.vertex_count() as f64;
    LocalStatistics {
        radius,
        distribution: counts.into_iter().map(|(k, c)| (k, c as f64 / n)).collect(),
    }
}

/// Total-variation distance between two ball distributions of equal radius.
pub fn bs_distance(s1: &LocalStatistics, s2: &LocalStatistics) -> Result<f64> {
    if s1.radius != s2.radius {
        return Err(Error::RadiusMismatch(s1.radius, s2.radius));
    }
    let mut sum = 0.0;
    for (k, &f) in &s1.distribution {
        sum += (f - s2.distribution.get(k).copied().unwrap_or(0.0)).abs();
    }
    for (k, &f) in &s2.distribution {
        if !s1.distribution.contains_key(k) {
            sum += f;
        }
    }
    Ok((0.5 * sum).clamp(0.0, 1.0))
}

/// Payoff `f(graph, from, to)` for the mass-transport test.
pub type Payoff<'a> = dyn Fn(&RootedGraph, usize, usize) -> f64 + 'a;

/// Expected mass sent out of the root versus received by it.
///
/// `ensemble` is a weighted list of rooted graphs. For each, sums
/// `payoff(root, v)` and `payoff(v, root)` over `v` in the radius-`R` ball
/// around the root. Uniformly rooted finite graphs are unimodular, so the
/// two sides agree.
pub fn mass_transport_check(ensemble: &[(RootedGraph, f64)], payoff: &Payoff<'_>, radius: usize) -> (f64, f64) {
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for (g, w) in ensemble {
        let root = g.root();
        let dist = g.distances(root, Some(radius));
        let (mut out, mut inn) = (0.0, 0.0);
        for (v, d) in dist.iter().enumerate() {
            if d.is_some() {
                out += payoff(g, root, v);
                inn += payoff(g, v, root);
            }
        }
        lhs += w * out;
        rhs += w * inn;
    }
    (lhs, rhs)
}

/// Every vertex as root, each with weight `1/n`.
pub fn uniform_root_ensemble(g: &RootedGraph) -> Vec<(RootedGraph, f64)> {
    let w = 1.0 / g.vertex_count() as f64;
    (0..g.vertex_count()).map(|v| (g.with_root(v).expect("valid vertex"), w)).collect()
}

fn edge_multiplicity(g: &RootedGraph, u: usize, v: usize) -> usize {
    let m = g.neighbors(u).iter().filter(|&&(w, _)| w == v).count();
    if u == v {
        m / 2
    } else {
        m
    }
}

/// Built-in payoffs used by the unimodularity checks, with names.
///
/// Each depends only on the radius-2 neighborhood of the pair, and several
/// are deliberately asymmetric in their arguments.
pub fn payoff_suite() -> Vec<(&'static str, Box<Payoff<'static>>)> {
    vec![
        ("adjacency", Box::new(|g: &RootedGraph, u, v| edge_multiplicity(g, u, v) as f64)),
        (
            "target_degree",
            Box::new(|g: &RootedGraph, u, v| {
                if u != v && edge_multiplicity(g, u, v) > 0 {
                    g.degree(v) as f64
                } else {
                    0.0
                }
            }),
        ),
        (
            "leaf_neighbor",
            Box::new(|g: &RootedGraph, u, v| {
                if u != v && edge_multiplicity(g, u, v) > 0 && g.degree(v) == 1 {
                    1.0
                } else {
                    0.0
                }
            }),
        ),
        (
            "distance_two_share",
            Box::new(|g: &RootedGraph, u, v| {
                let d = g.distances(u, Some(2));
                if d[v] == Some(2) {
                    let total = d.iter().filter(|x| **x == Some(2)).count();
                    1.0 / total as f64
                } else {
                    0.0
                }
            }),
        ),
        (
            "split_by_degree",
            Box::new(|g: &RootedGraph, u, v| {
                if u != v && edge_multiplicity(g, u, v) > 0 {
                    edge_multiplicity(g, u, v) as f64 / g.degree(u) as f64 * (1.0 + g.degree(v) as f64).ln()
                } else {
                    0.0
                }
            }),
        ),
    ]
}

/// Random vertex relabeling of `g` (root follows its vertex).
pub fn shuffled<R: Rng>(g: &RootedGraph, rng: &mut R) -> RootedGraph {
    let mut perm: Vec<usize> = (0..g.vertex_count()).collect();
    perm.shuffle(rng);
    g.relabeled(&perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    // Independent oracle: a ball is acyclic iff it is a simple forest.
    fn ball_is_acyclic(g: &RootedGraph, v: usize, r: usize) -> bool {
        let (ball, _) = g.ball(v, r);
        let mut parent: Vec<usize> = (0..ball.vertex_count()).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for e in ball.edges() {
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        true
    }

    #[test]
    fn injectivity_radius_examples() {
        let c8 = RootedGraph::cycle(8);
        for v in 0..8 {
            assert_eq!(injectivity_radius(&c8, v, 10).unwrap(), 3);
        }
        let k4 = RootedGraph::complete(4);
        assert_eq!(injectivity_radius(&k4, 2, 10).unwrap(), 0);
        let single = RootedGraph::edgeless(1);
        assert_eq!(injectivity_radius(&single, 0, 5).unwrap(), 5);
        assert!(matches!(injectivity_radius(&c8, 8, 3), Err(Error::InvalidVertex { .. })));
    }

    #[test]
    fn injectivity_radius_multigraph_cases() {
        // a single loop: cover is the bi-infinite path, the 1-ball has a loop
        let loop1 = RootedGraph::from_pairs(1, &[(0, 0)]).unwrap();
        assert_eq!(injectivity_radius(&loop1, 0, 4).unwrap(), 0);
        // a double edge: 2-cycle
        let double = RootedGraph::from_pairs(2, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(injectivity_radius(&double, 0, 4).unwrap(), 0);
        // pendant vertex hanging off a triangle
        let g = RootedGraph::from_pairs(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        assert_eq!(injectivity_radius(&g, 3, 5).unwrap(), 1);
    }

    #[test]
    fn thin_fraction_examples() {
        let c8 = RootedGraph::cycle(8);
        assert_eq!(thin_fraction(&c8, 3), 0.0);
        assert_eq!(thin_fraction(&c8, 4), 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = RootedGraph::random_tree(40, &mut rng);
        for r in 0..6 {
            assert_eq!(thin_fraction(&t, r), 0.0);
        }
    }

    #[test]
    fn ball_statistics_examples() {
        let s = ball_statistics(&RootedGraph::cycle(1000), 2);
        assert_eq!(s.class_count(), 1);
        let (&ref cert, &f) = s.distribution.iter().next().unwrap();
        assert_eq!(f, 1.0);
        // the class is the path on 5 vertices rooted at its center
        let p5 = RootedGraph::path(5).with_root(2).unwrap();
        assert_eq!(cert, &ball_class(&p5, 2, 2).unwrap().certificate);

        let tri = ball_statistics(&RootedGraph::cycle(3), 1);
        assert_eq!(tri.class_count(), 1);
        let e7 = ball_statistics(&RootedGraph::edgeless(7), 3);
        assert_eq!(e7.class_count(), 1);
        assert_eq!(e7.total_mass(), 1.0);
    }

    #[test]
    fn bs_distance_examples() {
        let c8 = ball_statistics(&RootedGraph::cycle(8), 2);
        let c1000 = ball_statistics(&RootedGraph::cycle(1000), 2);
        assert_eq!(bs_distance(&c8, &c8).unwrap(), 0.0);
        assert_eq!(bs_distance(&c8, &c1000).unwrap(), 0.0);
        let c3 = ball_statistics(&RootedGraph::cycle(3), 1);
        let big1 = ball_statistics(&RootedGraph::cycle(1000), 1);
        assert_eq!(bs_distance(&c3, &big1).unwrap(), 1.0);
        assert_eq!(bs_distance(&c3, &c8), Err(Error::RadiusMismatch(1, 2)));
    }

    #[test]
    fn mass_transport_examples() {
        let adjacency = |g: &RootedGraph, u: usize, v: usize| edge_multiplicity(g, u, v) as f64;
        let c4 = uniform_root_ensemble(&RootedGraph::cycle(4));
        assert_eq!(mass_transport_check(&c4, &adjacency, 1), (2.0, 2.0));
        let p3 = RootedGraph::path(3);
        let (l, r) = mass_transport_check(&uniform_root_ensemble(&p3), &adjacency, 1);
        assert!((l - 4.0 / 3.0).abs() < 1e-15 && (r - 4.0 / 3.0).abs() < 1e-15);

        let leaf = |g: &RootedGraph, u: usize, v: usize| {
            if u != v && edge_multiplicity(g, u, v) > 0 && g.degree(v) == 1 {
                1.0
            } else {
                0.0
            }
        };
        let centered = vec![(p3.with_root(1).unwrap(), 1.0)];
        assert_eq!(mass_transport_check(&centered, &leaf, 1), (2.0, 0.0));
    }

    #[test]
    fn cover_ball_handles_loops() {
        // bouquet of two loops: universal cover is the 4-regular tree
        let b = RootedGraph::from_pairs(1, &[(0, 0), (0, 0)]).unwrap();
        let cover = universal_cover_ball(&b, 0, 2, 1000).unwrap();
        assert_eq!(cover.vertex_count(), 1 + 4 + 12);
        let c5 = RootedGraph::cycle(5);
        assert_eq!(universal_cover_ball(&c5, 0, 3, 1000).unwrap().vertex_count(), 7);
    }

    #[test]
    fn injectivity_agrees_with_cycle_detection() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let g = RootedGraph::random_gnp(25, 0.1, &mut rng);
            for v in 0..g.vertex_count() {
                let r = injectivity_radius(&g, v, 6).unwrap();
                assert!(ball_is_acyclic(&g, v, r));
                if r < 6 {
                    assert!(!ball_is_acyclic(&g, v, r + 1));
                }
            }
        }
    }
}
