use std::collections::VecDeque;
use std::fmt::Write as _;

use rand::Rng;

use super::mobius::{inv, mul, projective_distance, trace, MobiusTransform, M2, IDENTITY};
use crate::error::{domain, Error, Result};
use crate::graphs::RootedGraph;

/// Holonomy of a pair of pants with boundary lengths `l1, l2, l3`: hyperbolic
/// `X, Y, Z` with positive traces `2 cosh(l_i / 2)` and `XYZ = -I`.
pub fn build_pants(l1: f64, l2: f64, l3: f64) -> Result<[MobiusTransform; 3]> {
    for (name, l) in [("l1", l1), ("l2", l2), ("l3", l3)] {
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::Domain { name, reason: format!("length {l} must be positive") });
        }
    }
    let lam = (l1 / 2.0).exp();
    let y = 2.0 * (l2 / 2.0).cosh();
    let z = 2.0 * (l3 / 2.0).cosh();
    // X = diag(lam, 1/lam), tr Y = y, tr XY = -z
    let a = (-z - y / lam) / (lam - 1.0 / lam);
    let d = y - a;
    let s = (1.0 - a * d).sqrt();
    let x = [lam, 0.0, 0.0, 1.0 / lam];
    let ym = [a, s, -s, d];
    let xy = mul(&x, &ym);
    let zm = inv(&xy).map(|v| -v);
    Ok([x, ym, zm].map(MobiusTransform::from_raw))
}

/// Where a pants cuff goes: glued along an internal edge or left free.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Internal(usize),
    Boundary(usize),
}

/// Internal edge joining cuff `i` of pants `u` to cuff `j` of pants `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeEdge {
    pub u: usize,
    pub i: usize,
    pub v: usize,
    pub j: usize,
}

/// A finite subtree of the 3-valent tree: one pair of pants per vertex,
/// one glued cuff per edge, remaining cuffs free.
#[derive(Debug, Clone, PartialEq)]
pub struct TreePortion {
    graph: RootedGraph,
    edges: Vec<TreeEdge>,
    slots: Vec<[Slot; 3]>,
    boundary: Vec<(usize, usize)>,
}

impl TreePortion {
    pub fn from_graph(graph: &RootedGraph) -> Result<Self> {
        let n = graph.vertex_count();
        if n == 0 || !graph.is_connected() {
            return Err(Error::Disconnected);
        }
        if graph.edge_count() != n - 1 || graph.edges().iter().any(|e| e.is_loop()) {
            return Err(domain("tree_portion", "not a tree"));
        }
        if graph.max_degree() > 3 {
            return Err(domain("tree_portion", "a vertex has degree above 3"));
        }
        let mut used = vec![0usize; n];
        let mut slots = vec![[Slot::Boundary(usize::MAX); 3]; n];
        let mut edges = Vec::with_capacity(n - 1);
        for (k, e) in graph.edges().iter().enumerate() {
            let (i, j) = (used[e.u], used[e.v]);
            used[e.u] += 1;
            used[e.v] += 1;
            slots[e.u][i] = Slot::Internal(k);
            slots[e.v][j] = Slot::Internal(k);
            edges.push(TreeEdge { u: e.u, i, v: e.v, j });
        }
        let mut boundary = Vec::new();
        for v in 0..n {
            for s in used[v]..3 {
                slots[v][s] = Slot::Boundary(boundary.len());
                boundary.push((v, s));
            }
        }
        Ok(Self { graph: graph.clone(), edges, slots, boundary })
    }

    /// The radius-`r` ball around a vertex of the 3-valent tree.
    pub fn regular_ball(radius: usize) -> Self {
        let mut pairs = Vec::new();
        let mut frontier = vec![0usize];
        let mut count = 1;
        for depth in 0..radius {
            let mut next = Vec::new();
            for &v in &frontier {
                let children = if depth == 0 { 3 } else { 2 };
                for _ in 0..children {
                    pairs.push((v, count));
                    next.push(count);
                    count += 1;
                }
            }
            frontier = next;
        }
        let g = RootedGraph::from_pairs(count, &pairs).expect("valid tree");
        Self::from_graph(&g).expect("3-valent ball")
    }

    pub fn graph(&self) -> &RootedGraph {
        &self.graph
    }

    pub fn pants_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    pub fn slots(&self, v: usize) -> [Slot; 3] {
        self.slots[v]
    }

    /// Free cuffs as `(pants, slot)`.
    pub fn boundary(&self) -> &[(usize, usize)] {
        &self.boundary
    }
}

/// Fenchel-Nielsen data: per internal edge a length and a twist (fraction of
/// the length, in `[0, 1)`), and a length for every free cuff.
#[derive(Debug, Clone, PartialEq)]
pub struct FenchelNielsen {
    pub lengths: Vec<f64>,
    pub twists: Vec<f64>,
    pub boundary_lengths: Vec<f64>,
}

impl FenchelNielsen {
    /// Lengths uniform on `[lo, hi]`, twists uniform on `[0, 1)`.
    pub fn sample<R: Rng>(tree: &TreePortion, lo: f64, hi: f64, boundary_length: f64, rng: &mut R) -> Result<Self> {
        if !(lo > 0.0 && hi >= lo) {
            return Err(domain("length_range", format!("[{lo}, {hi}] is not a positive interval")));
        }
        let m = tree.edges.len();
        let mut lengths = Vec::with_capacity(m);
        let mut twists = Vec::with_capacity(m);
        for _ in 0..m {
            lengths.push(if hi > lo { rng.gen_range(lo..=hi) } else { lo });
            twists.push(rng.gen_range(0.0..1.0));
        }
        Ok(Self { lengths, twists, boundary_lengths: vec![boundary_length; tree.boundary.len()] })
    }
}

/// Hyperbolic structure glued from pants along a tree portion.
#[derive(Debug, Clone)]
pub struct PantsSurface {
    tree: TreePortion,
    coords: FenchelNielsen,
    local: Vec<[M2; 3]>,
    normalizers: Vec<[M2; 3]>,
    frames: Vec<M2>,
}

// Conjugator taking a hyperbolic cuff with positive trace to diag(lam, 1/lam), lam > 1.
fn normalizer(c: &M2) -> M2 {
    let m = MobiusTransform::from_raw(*c);
    let (att, rep) = m.axis().expect("cuffs are hyperbolic");
    match (att, rep) {
        (None, Some(r)) => [1.0, -r, 0.0, 1.0],
        (Some(a), None) => [0.0, -1.0, 1.0, -a],
        (Some(a), Some(r)) => {
            // z -> (z - r) / (z - a), scaled to determinant 1
            let det = r - a;
            let (p, q) = if det > 0.0 { (1.0, -r) } else { (-1.0, r) };
            let s = 1.0 / det.abs().sqrt();
            [p * s, q * s, s, -a * s]
        }
        (None, None) => unreachable!("distinct fixed points"),
    }
}

const ROTATION: M2 = [0.0, 1.0, -1.0, 0.0];

fn translation(s: f64) -> M2 {
    [(s / 2.0).exp(), 0.0, 0.0, (-s / 2.0).exp()]
}

/// Glue pants along the internal edges. Adjacent frames differ by
/// `N_u^-1 T(t l) R N_v`: normalize both cuffs onto the imaginary axis,
/// rotate the second pants to the other side, then twist along the axis.
pub fn glue_forest(tree: &TreePortion, coords: &FenchelNielsen) -> Result<PantsSurface> {
    let m = tree.edges.len();
    if coords.lengths.len() != m || coords.twists.len() != m {
        return Err(domain("coordinates", format!("expected {m} lengths and twists")));
    }
    if coords.boundary_lengths.len() != tree.boundary.len() {
        return Err(Error::Domain {
            name: "boundary_lengths",
            reason: format!("expected {} values", tree.boundary.len()),
        });
    }
    for &l in coords.lengths.iter().chain(&coords.boundary_lengths) {
        if !(l > 0.0 && l.is_finite()) {
            return Err(domain("length", format!("{l} must be positive")));
        }
    }
    for &t in &coords.twists {
        if !(0.0..1.0).contains(&t) {
            return Err(domain("twist", format!("{t} outside [0, 1)")));
        }
    }
    let n = tree.pants_count();
    let cuff_length = |v: usize, s: usize| match tree.slots[v][s] {
        Slot::Internal(e) => coords.lengths[e],
        Slot::Boundary(b) => coords.boundary_lengths[b],
    };
    let mut local = Vec::with_capacity(n);
    let mut normalizers = Vec::with_capacity(n);
    for v in 0..n {
        let p = build_pants(cuff_length(v, 0), cuff_length(v, 1), cuff_length(v, 2))?;
        let mats = p.map(|x| x.matrix());
        normalizers.push(mats.map(|c| normalizer(&c)));
        local.push(mats);
    }
    let root = tree.graph.root();
    let mut frames = vec![None; n];
    frames[root] = Some(IDENTITY);
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        let gx = frames[x].expect("placed");
        for &(y, k) in tree.graph.neighbors(x) {
            if frames[y].is_some() {
                continue;
            }
            let e = tree.edges[k];
            let (sx, sy) = if e.u == x { (e.i, e.j) } else { (e.j, e.i) };
            let s = coords.twists[k] * coords.lengths[k];
            let step = mul(
                &mul(&mul(&inv(&normalizers[x][sx]), &translation(s)), &ROTATION),
                &normalizers[y][sy],
            );
            frames[y] = Some(mul(&gx, &step));
            queue.push_back(y);
        }
    }
    let frames = frames.into_iter().map(|f| f.expect("connected")).collect();
    Ok(PantsSurface { tree: tree.clone(), coords: coords.clone(), local, normalizers, frames })
}

impl PantsSurface {
    pub fn tree(&self) -> &TreePortion {
        &self.tree
    }

    pub fn coordinates(&self) -> &FenchelNielsen {
        &self.coords
    }

    /// `X, Y, Z` of pants `v` in its own frame.
    pub fn local_pants(&self, v: usize) -> [M2; 3] {
        self.local[v]
    }

    pub(crate) fn normalizer(&self, v: usize, slot: usize) -> M2 {
        self.normalizers[v][slot]
    }

    /// Cuff `slot` of pants `v` in the common frame.
    pub fn cuff(&self, v: usize, slot: usize) -> MobiusTransform {
        let g = self.frames[v];
        MobiusTransform::from_raw(mul(&mul(&g, &self.local[v][slot]), &inv(&g)))
    }

    /// Generators `a_v, b_v` of the compact-core group, in pants order.
    pub fn generators(&self) -> Vec<MobiusTransform> {
        (0..self.tree.pants_count()).flat_map(|v| [self.cuff(v, 0), self.cuff(v, 1)]).collect()
    }

    pub fn generator_names(&self) -> Vec<String> {
        (0..self.tree.pants_count()).flat_map(|v| [format!("a{v}"), format!("b{v}")]).collect()
    }

    /// Largest `|XYZ -/+ I|` over all pants, in the common frame.
    pub fn relation_defect(&self) -> f64 {
        (0..self.tree.pants_count())
            .map(|v| {
                let p = self.cuff(v, 0).mul(&self.cuff(v, 1)).mul(&self.cuff(v, 2));
                projective_distance(&p.matrix(), &IDENTITY)
            })
            .fold(0.0, f64::max)
    }

    /// Largest defect in the gluing: traces against `2 cosh(l / 2)` on both
    /// sides, and the two glued cuffs against mutual inverses.
    pub fn gluing_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, e) in self.tree.edges.iter().enumerate() {
            let expected = 2.0 * (self.coords.lengths[k] / 2.0).cosh();
            let cu = self.cuff(e.u, e.i);
            let cv = self.cuff(e.v, e.j);
            worst = worst
                .max((cu.trace() - expected).abs())
                .max((cv.trace() - expected).abs())
                .max(projective_distance(&cu.matrix(), &cv.inverse().matrix()) / cu.matrix().iter().fold(1.0f64, |s, x| s.max(x.abs())));
        }
        worst
    }

    /// Trace of a free cuff.
    pub fn boundary_trace(&self, b: usize) -> f64 {
        let (v, s) = self.tree.boundary[b];
        trace(&self.local[v][s])
    }
}

/// Edge-list serialization of the tree portion.
pub fn write_tree(surface: &PantsSurface) -> String {
    crate::graphs::write_edge_list(surface.tree.graph())
}

/// CSV `edge,u,v,length,twist`.
pub fn write_coordinates_csv(surface: &PantsSurface) -> String {
    let mut out = String::from("edge,u,v,length,twist\n");
    for (k, e) in surface.tree.edges.iter().enumerate() {
        writeln!(out, "{k},{},{},{:.17e},{:.17e}", e.u, e.v, surface.coords.lengths[k], surface.coords.twists[k])
            .expect("string write");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::translation_length;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unit_pants_traces() {
        let [x, y, z] = build_pants(1.0, 1.0, 1.0).unwrap();
        for m in [x, y, z] {
            assert!((m.trace() - 2.2552519304127614).abs() < 1e-10);
        }
        assert!(projective_distance(&x.mul(&y).mul(&z).matrix(), &IDENTITY) < 1e-12);
        assert!(build_pants(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn random_pants_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let l = [0; 3].map(|_| rng.gen_range(0.5..5.0));
            let [x, y, z] = build_pants(l[0], l[1], l[2]).unwrap();
            for (m, li) in [x, y, z].iter().zip(l) {
                assert!((translation_length(m) - li).abs() < 1e-9);
                assert!((m.trace() - 2.0 * (li / 2.0).cosh()).abs() < 1e-10 * m.trace());
            }
            assert!(projective_distance(&x.mul(&y).mul(&z).matrix(), &IDENTITY) <= 1e-10);
        }
    }

    // Each normalized cuff axis is the imaginary axis; the other two cuffs
    // must sit strictly on its right, for every cuff of every pants.
    #[test]
    fn pants_lie_right_of_every_normalized_cuff() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let l = [0; 3].map(|_| rng.gen_range(0.02..6.0));
            let mats = build_pants(l[0], l[1], l[2]).unwrap().map(|m| m.matrix());
            for s in 0..3 {
                let n = normalizer(&mats[s]);
                let c = mul(&mul(&n, &mats[s]), &inv(&n));
                assert!(c[1].abs() < 1e-8 * c[0] && c[2].abs() < 1e-8 * c[0] && c[0] > 1.0);
                for o in (0..3).filter(|&o| o != s) {
                    let other = MobiusTransform::from_raw(mul(&mul(&n, &mats[o]), &inv(&n)));
                    let (p, q) = other.axis().unwrap();
                    for end in [p, q] {
                        let e = end.expect("finite endpoint");
                        assert!(e > 0.0, "lengths {l:?}, cuff {s}, other {o}: endpoint {e}");
                    }
                }
            }
        }
    }

    // Two pants glued along a cuff lie on opposite sides of it.
    #[test]
    fn glued_neighbors_on_opposite_sides() {
        let tree = TreePortion::regular_ball(1);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let coords = FenchelNielsen::sample(&tree, 0.5, 2.0, 1.0, &mut rng).unwrap();
        let s = glue_forest(&tree, &coords).unwrap();
        for e in tree.edges() {
            let g = inv(&s.normalizer(e.u, e.i));
            let to_norm = |m: MobiusTransform| MobiusTransform::from_raw(mul(&mul(&inv(&g), &m.matrix()), &g));
            let frame_u = s.frames[e.u];
            let into_u = |m: MobiusTransform| {
                MobiusTransform::from_raw(mul(&mul(&inv(&frame_u), &m.matrix()), &frame_u))
            };
            let side = |v: usize, slot: usize| {
                let (p, q) = to_norm(into_u(s.cuff(v, slot))).axis().unwrap();
                (p.unwrap(), q.unwrap())
            };
            let other_u = (0..3).find(|&k| k != e.i).unwrap();
            let other_v = (0..3).find(|&k| k != e.j).unwrap();
            let (a, b) = side(e.u, other_u);
            let (c, d) = side(e.v, other_v);
            assert!(a > 0.0 && b > 0.0 && c < 0.0 && d < 0.0, "{a} {b} {c} {d}");
        }
    }

    #[test]
    fn single_pants_surface_matches_build_pants() {
        let tree = TreePortion::regular_ball(0);
        assert_eq!(tree.boundary().len(), 3);
        let coords = FenchelNielsen { lengths: vec![], twists: vec![], boundary_lengths: vec![1.0, 2.0, 3.0] };
        let s = glue_forest(&tree, &coords).unwrap();
        let p = build_pants(1.0, 2.0, 3.0).unwrap();
        for k in 0..3 {
            assert!(projective_distance(&s.cuff(0, k).matrix(), &p[k].matrix()) < 1e-15);
        }
    }

    #[test]
    fn twist_leaves_free_cuffs_unchanged() {
        let two = TreePortion::from_graph(&RootedGraph::path(2)).unwrap();
        let mk = |t: f64| {
            let c = FenchelNielsen { lengths: vec![1.3], twists: vec![t], boundary_lengths: vec![0.7, 1.1, 2.0, 0.9] };
            glue_forest(&two, &c).unwrap()
        };
        let (s0, s1) = (mk(0.0), mk(0.5));
        for b in 0..4 {
            let (v, slot) = two.boundary()[b];
            assert!((s0.cuff(v, slot).trace() - s1.cuff(v, slot).trace()).abs() < 1e-10);
            assert!((s0.boundary_trace(b) - 2.0 * (s0.coords.boundary_lengths[b] / 2.0).cosh()).abs() < 1e-10);
        }
        // a crossing element does feel the twist
        let cross = |s: &PantsSurface| s.cuff(0, 1).mul(&s.cuff(1, 1)).trace();
        assert!((cross(&s0) - cross(&s1)).abs() > 1e-3);
    }

    #[test]
    fn domain_errors() {
        let two = TreePortion::from_graph(&RootedGraph::path(2)).unwrap();
        let bad_twist = FenchelNielsen { lengths: vec![1.0], twists: vec![1.0], boundary_lengths: vec![1.0; 4] };
        assert!(matches!(glue_forest(&two, &bad_twist), Err(Error::Domain { name: "twist", .. })));
        let bad_len = FenchelNielsen { lengths: vec![-1.0], twists: vec![0.0], boundary_lengths: vec![1.0; 4] };
        assert!(glue_forest(&two, &bad_len).is_err());
        assert!(matches!(TreePortion::from_graph(&RootedGraph::edgeless(2)), Err(Error::Disconnected)));
        assert!(TreePortion::from_graph(&RootedGraph::cycle(3)).is_err());
        assert!(TreePortion::from_graph(&RootedGraph::from_pairs(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap()).is_err());
    }

    #[test]
    fn ball_sizes() {
        let t = TreePortion::regular_ball(2);
        assert_eq!(t.pants_count(), 10);
        assert_eq!(t.edges().len(), 9);
        assert_eq!(t.boundary().len(), 12);
    }

    #[test]
    fn serialization() {
        let tree = TreePortion::regular_ball(1);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = glue_forest(&tree, &FenchelNielsen::sample(&tree, 1.0, 2.0, 1.0, &mut rng).unwrap()).unwrap();
        let csv = write_coordinates_csv(&s);
        assert!(csv.starts_with("edge,u,v,length,twist\n"));
        assert_eq!(csv.lines().count(), 4);
        assert!(write_tree(&s).starts_with("4 3 0\n"));
    }

    proptest! {
        #[test]
        fn glued_surfaces_satisfy_invariants(seed in any::<u64>(), lo in 0.05f64..3.0, width in 0.0f64..2.0) {
            let tree = TreePortion::regular_ball(2);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let coords = FenchelNielsen::sample(&tree, lo, lo + width, 1.0, &mut rng).unwrap();
            let s = glue_forest(&tree, &coords).unwrap();
            prop_assert!(s.relation_defect() <= 1e-10 * scale(&s), "relation {}", s.relation_defect());
            prop_assert!(s.gluing_defect() <= 1e-10 * scale(&s), "gluing {}", s.gluing_defect());
        }
    }

    fn scale(s: &PantsSurface) -> f64 {
        s.generators().iter().flat_map(|g| g.matrix()).fold(1.0f64, |m, x| m.max(x.abs())).powi(2)
    }
}
