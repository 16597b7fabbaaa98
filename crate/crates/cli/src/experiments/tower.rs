use std::collections::BTreeMap;

use bslab_core::covers::{random_perm, schreier_graph, PermRep};
use bslab_core::graphs::RootedGraph;
use bslab_core::numeric::task_rng;
use bslab_core::spectral::{
    adjacency, graph_laplacian, kesten_mckay_adjacency_cdf, kolmogorov_distance, log_grid, lueck_ceiling,
    lueck_tail_statistic, spectral_cdf, uniform_grid, write_cdf_comparison_csv, write_eigenvalues_csv,
    LimitSpectralMeasure, SpectralDensity, MAX_DENSE,
};

use super::{csv, fmt_f};
use crate::error::{bad, CliResult};
use crate::params::{Kind, ParamSpec, Params};
use crate::{par_map, Assertion, Outcome, Relation};

pub const PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "family",
        kind: Kind::Str,
        default: "\"cycle\"",
        help: "cycle (Laplacian vs cycle_limit) or permutation-regular (adjacency vs Kesten-McKay)",
    },
    ParamSpec { name: "sizes", kind: Kind::IntList, default: "[64, 256, 1024, 4096]", help: "tower levels n" },
    ParamSpec { name: "degree", kind: Kind::Int, default: "4", help: "even degree of permutation-regular graphs" },
    ParamSpec { name: "samples", kind: Kind::Int, default: "5", help: "random graphs per size, spectra pooled" },
    ParamSpec { name: "grid_points", kind: Kind::Int, default: "10001", help: "uniform Kolmogorov grid size" },
    ParamSpec {
        name: "max_distance",
        kind: Kind::Float,
        default: "0.0",
        help: "asserted distance bound; 0 selects 0.01 (cycle, last size) or 0.05 (permutation-regular)",
    },
    ParamSpec {
        name: "lueck_levels",
        kind: Kind::Int,
        default: "12",
        help: "cycle family: tail statistic on C_(2^k), k = 1..levels; 0 disables",
    },
    ParamSpec { name: "lueck_bound", kind: Kind::Float, default: "4.0", help: "asserted tail statistic bound" },
    ParamSpec { name: "lueck_grid_points", kind: Kind::Int, default: "400", help: "log grid on [1e-8, 0.999]" },
];

pub fn run(p: &Params, seed: u64) -> CliResult<Outcome> {
    let sizes = p.usize_list("sizes", 1, MAX_DENSE)?;
    let grid_points = p.usize_in("grid_points", 2, 1_000_000)?;
    let max_distance = p.float("max_distance");
    if !(max_distance >= 0.0) {
        return Err(bad("max_distance", "must be non-negative"));
    }
    match p.string("family") {
        "cycle" => cycle(p, &sizes, grid_points, max_distance),
        "permutation-regular" => regular(p, seed, &sizes, grid_points, max_distance),
        other => Err(bad("family", format!("unknown family {other:?}"))),
    }
}

fn cycle(p: &Params, sizes: &[usize], grid_points: usize, max_distance: f64) -> CliResult<Outcome> {
    let levels = p.usize_in("lueck_levels", 0, 12)?;
    let lueck_bound = p.float_above("lueck_bound", 0.0)?;
    let lueck_points = p.usize_in("lueck_grid_points", 1, 100_000)?;
    let limit = LimitSpectralMeasure::CycleLimit;
    let grid = uniform_grid(0.0, 4.0, grid_points);
    let mut needed: Vec<usize> = sizes.to_vec();
    needed.extend((1..=levels).map(|k| 1usize << k));
    needed.sort_unstable();
    needed.dedup();
    let spectra: Vec<SpectralDensity> = par_map(&needed, |_, &n| SpectralDensity::of_matrix(&graph_laplacian(&RootedGraph::cycle(n))))
        .into_iter()
        .collect::<Result<_, _>>()?;
    let spectra: BTreeMap<usize, SpectralDensity> = needed.iter().copied().zip(spectra).collect();

    let mut out = Outcome::default();
    let mut distances = Vec::new();
    for &n in sizes {
        let sd = &spectra[&n];
        let d = kolmogorov_distance(|x| spectral_cdf(sd, x), |x| limit.cdf(x).expect("inside support"), &grid)?;
        distances.push(d);
    }
    out.file("distances.csv", csv("n,kolmogorov_distance", sizes.iter().zip(&distances).map(|(n, d)| vec![n.to_string(), fmt_f(*d)])));
    if let Some(&last) = sizes.last() {
        out.file(format!("eigenvalues_n{last}.csv"), write_eigenvalues_csv(&spectra[&last]));
        out.file(format!("cdf_n{last}.csv"), write_cdf_comparison_csv(&spectra[&last], &limit, &grid)?);
        let bound = if max_distance > 0.0 { max_distance } else { 0.01 };
        out.assert(Assertion::new("final_distance", Relation::AtMost { bound }, vec![distances[distances.len() - 1]]).labeled([last]));
        out.assert(Assertion::new("distance_strictly_decreasing", Relation::StrictlyDecreasing, distances.clone()).labeled(sizes));
    }
    out.result("sizes", sizes);
    out.result("distances", &distances);

    if levels > 0 {
        let lgrid = log_grid(1e-8, 0.999, lueck_points);
        let mut rows = Vec::new();
        let (mut stats, mut ceilings, mut ns) = (Vec::new(), Vec::new(), Vec::new());
        for k in 1..=levels {
            let n = 1usize << k;
            let sd = &spectra[&n];
            let s = lueck_tail_statistic(sd, &lgrid)?;
            let c = lueck_ceiling(&graph_laplacian(&RootedGraph::cycle(n)), n as f64);
            rows.push(vec![k.to_string(), n.to_string(), fmt_f(s), fmt_f(c)]);
            stats.push(s);
            ceilings.push(c);
            ns.push(n);
        }
        out.file("lueck.csv", csv("k,n,tail_statistic,ceiling", rows));
        out.result("lueck_sizes", &ns);
        out.result("lueck_statistics", &stats);
        out.result("lueck_ceilings", &ceilings);
        out.result("lueck_max", stats.iter().cloned().fold(0.0, f64::max));
        out.assert(Assertion::new("lueck_tail_bounded", Relation::AtMost { bound: lueck_bound }, stats).labeled(ns));
    }
    Ok(out)
}

fn regular(p: &Params, seed: u64, sizes: &[usize], grid_points: usize, max_distance: f64) -> CliResult<Outcome> {
    let degree = p.usize_in("degree", 2, 64)?;
    if degree % 2 != 0 {
        return Err(bad("degree", format!("{degree} must be even")));
    }
    let samples = p.usize_in("samples", 1, 1000)?;
    let d = degree as u32;
    let grid = uniform_grid(-(degree as f64), degree as f64, grid_points);
    let limit = |x: f64| kesten_mckay_adjacency_cdf(d, x);

    let tasks: Vec<(usize, usize)> = sizes.iter().enumerate().flat_map(|(i, _)| (0..samples).map(move |s| (i, s))).collect();
    let spectra = par_map(&tasks, |task, &(i, _)| -> CliResult<SpectralDensity> {
        let n = sizes[i];
        let mut rng = task_rng(seed, task as u64);
        let perms = (0..degree / 2).map(|_| random_perm(n, &mut rng)).collect();
        let g = schreier_graph(&PermRep::new(n, perms)?)?;
        Ok(SpectralDensity::of_matrix(&adjacency(&g))?)
    });
    let spectra: Vec<SpectralDensity> = spectra.into_iter().collect::<CliResult<_>>()?;

    let mut out = Outcome::default();
    let mut pooled_distances = Vec::new();
    let mut sample_rows = Vec::new();
    let mut last_pool = None;
    for (i, &n) in sizes.iter().enumerate() {
        let parts = &spectra[i * samples..(i + 1) * samples];
        for (s, sd) in parts.iter().enumerate() {
            let dist = kolmogorov_distance(|x| spectral_cdf(sd, x), limit, &grid)?;
            sample_rows.push(vec![n.to_string(), s.to_string(), fmt_f(dist)]);
        }
        let pool = parts[1..].iter().fold(parts[0].clone(), |acc, sd| acc.union(sd));
        pooled_distances.push(kolmogorov_distance(|x| spectral_cdf(&pool, x), limit, &grid)?);
        last_pool = Some((n, pool));
    }
    out.file("distances.csv", csv("n,kolmogorov_distance", sizes.iter().zip(&pooled_distances).map(|(n, d)| vec![n.to_string(), fmt_f(*d)])));
    out.file("samples.csv", csv("n,sample,kolmogorov_distance", sample_rows));
    if let Some((n, pool)) = last_pool {
        let rows = grid.iter().map(|&x| {
            let (fe, fl) = (spectral_cdf(&pool, x), limit(x));
            vec![fmt_f(x), fmt_f(fe), fmt_f(fl), fmt_f((fe - fl).abs())]
        });
        out.file(format!("cdf_n{n}.csv"), csv("lambda,F_empirical,F_limit,abs_diff", rows));
    }
    let bound = if max_distance > 0.0 { max_distance } else { 0.05 };
    out.result("sizes", sizes);
    out.result("distances", &pooled_distances);
    out.assert(Assertion::new("pooled_distance", Relation::AtMost { bound }, pooled_distances).labeled(sizes));
    Ok(out)
}
