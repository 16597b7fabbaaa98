use bslab_core::arithmetic::{torsion_growth_rate, IntPolynomial};
use bslab_core::covers::{
    build_cover, cayley_graph, projective_line_rep, random_perm, schreier_graph, sl2_order, sl2_quotient,
    surface_cover_assignment, CellComplex,
};
use bslab_core::graphs::{ball_statistics, bs_distance, parse_edge_list, shuffled, write_edge_list, ball_class, RootedGraph};
use bslab_core::hyperbolic::{glue_forest, FenchelNielsen, TreePortion};
use bslab_core::spectral::{betti, graph_laplacian, SpectralDensity};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn euler_from_betti(c: &CellComplex) -> i64 {
    (0..=c.dimension()).map(|k| (-1i64).pow(k as u32) * betti(c, k).unwrap() as i64).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn wedge_covers_multiply_euler_characteristic(seed in any::<u64>(), n in 1usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = CellComplex::wedge_of_circles(2);
        let perms = vec![random_perm(n, &mut rng), random_perm(n, &mut rng)];
        let cover = build_cover(&base, &perms, n).unwrap();
        prop_assert_eq!(cover.euler_characteristic(), n as i64 * base.euler_characteristic());
        prop_assert_eq!(euler_from_betti(&cover), cover.euler_characteristic());
        prop_assert_eq!(betti(&cover, 0).unwrap(), cover.components());
    }

    #[test]
    fn edge_lists_round_trip(seed in any::<u64>(), n in 1usize..25) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = RootedGraph::random_gnp(n, 0.2, &mut rng);
        let h = parse_edge_list(&write_edge_list(&g)).unwrap();
        prop_assert_eq!(h.vertex_count(), g.vertex_count());
        prop_assert_eq!(h.edge_count(), g.edge_count());
        let s = shuffled(&g, &mut rng);
        for v in 0..n.min(4) {
            prop_assert_eq!(ball_class(&g, v, 2).unwrap(), ball_class(&h, v, 2).unwrap());
        }
        prop_assert_eq!(ball_statistics(&g, 2), ball_statistics(&s, 2));
    }
}

#[test]
fn surface_covers_have_euler_characteristic_n_chi() {
    let base = CellComplex::surface(2).unwrap();
    for n in 2..=4 {
        let perms = surface_cover_assignment(2, n).unwrap();
        let cover = build_cover(&base, &perms, n).unwrap();
        assert_eq!(cover.euler_characteristic(), -2 * n as i64);
        assert_eq!(euler_from_betti(&cover), -2 * n as i64);
        assert_eq!(betti(&cover, 2).unwrap(), 1);
    }
}

#[test]
fn large_cycles_are_locally_indistinguishable() {
    let stats = |n| ball_statistics(&RootedGraph::cycle(n), 3);
    assert_eq!(bs_distance(&stats(20), &stats(40)).unwrap(), 0.0);
    // a path differs from the cycle only near its ends
    let mut prev = f64::INFINITY;
    for n in [10, 20, 40, 80] {
        let d = bs_distance(&stats(n), &ball_statistics(&RootedGraph::path(n), 3)).unwrap();
        assert!(d < prev && d <= 6.0 / n as f64 + 1e-12, "n = {n}: {d}");
        prev = d;
    }
}

#[test]
fn cycle_laplacian_spectrum_matches_closed_form() {
    let n = 37;
    let sd = SpectralDensity::of_matrix(&graph_laplacian(&RootedGraph::cycle(n))).unwrap();
    let mut exact: Vec<f64> =
        (0..n).map(|k| 2.0 - 2.0 * (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos()).collect();
    exact.sort_by(f64::total_cmp);
    for (a, b) in sd.eigenvalues().iter().zip(&exact) {
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn congruence_quotients_give_connected_regular_graphs() {
    for p in [3u32, 5, 7] {
        let g = sl2_quotient(p).unwrap();
        assert_eq!(g.order() as u64, sl2_order(p as u64));
        let cay = cayley_graph(&g).unwrap();
        assert!(cay.is_connected());
        let d = cay.degree(0);
        assert!((0..cay.vertex_count()).all(|v| cay.degree(v) == d));
        let line = schreier_graph(&projective_line_rep(&g).unwrap()).unwrap();
        assert_eq!(line.vertex_count(), p as usize + 1);
        assert!(line.is_connected());
    }
}

#[test]
fn glued_surfaces_keep_boundary_lengths() {
    let tree = TreePortion::regular_ball(2);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let fnc = FenchelNielsen::sample(&tree, 0.5, 3.0, 2.0, &mut rng).unwrap();
        let s = glue_forest(&tree, &fnc).unwrap();
        // entries grow in the common frame; defects are relative to their square
        let scale = s.generators().iter().flat_map(|g| g.matrix()).fold(1.0f64, |m, x| m.max(x.abs())).powi(2);
        assert!(s.relation_defect() <= 1e-10 * scale);
        assert!(s.gluing_defect() <= 1e-10 * scale);
        for b in 0..tree.boundary().len() {
            assert!((s.boundary_trace(b).abs() - 2.0 * 1f64.cosh()).abs() < 1e-8);
        }
    }
}

#[test]
fn quadratic_torsion_growth_tracks_the_larger_root() {
    for k in 3..8i64 {
        let delta = IntPolynomial::new(vec![1, -k, 1]).unwrap();
        let g = torsion_growth_rate(&delta, 200).unwrap();
        let root = (k as f64 + ((k * k - 4) as f64).sqrt()) / 2.0;
        assert!((g.limit_estimate - root.ln()).abs() < 1e-6, "k = {k}");
    }
}
