use bslab_core::graphs::{mass_transport_check, payoff_suite, uniform_root_ensemble, RootedGraph};
use bslab_core::numeric::task_rng;
use rand::Rng;

use super::{csv, fmt_f};
use crate::error::CliResult;
use crate::params::{Kind, ParamSpec, Params};
use crate::{par_map, Assertion, Outcome, Relation};

pub const PARAMS: &[ParamSpec] = &[
    ParamSpec { name: "graphs", kind: Kind::Int, default: "20", help: "random graphs tested" },
    ParamSpec { name: "min_vertices", kind: Kind::Int, default: "5", help: "smallest graph" },
    ParamSpec { name: "max_vertices", kind: Kind::Int, default: "40", help: "largest graph" },
    ParamSpec { name: "edge_probability", kind: Kind::Float, default: "0.15", help: "G(n, p) density for odd-indexed graphs" },
    ParamSpec { name: "radius", kind: Kind::Int, default: "2", help: "ball radius of the check" },
    ParamSpec { name: "tolerance", kind: Kind::Float, default: "1e-12", help: "allowed |lhs - rhs|" },
];

pub fn run(p: &Params, seed: u64) -> CliResult<Outcome> {
    let count = p.usize_in("graphs", 1, 100_000)?;
    let n_lo = p.usize_in("min_vertices", 1, 10_000)?;
    let n_hi = p.usize_in("max_vertices", n_lo, 10_000)?;
    let prob = p.float("edge_probability");
    if !(0.0..=1.0).contains(&prob) {
        return Err(crate::error::bad("edge_probability", format!("{prob} outside [0, 1]")));
    }
    let radius = p.usize_in("radius", 0, 64)?;
    let tol = p.float_above("tolerance", 0.0)?;
    let mut out = Outcome::default();

    // even-indexed graphs are random trees, odd-indexed are G(n, p)
    let graphs: Vec<RootedGraph> = (0..count)
        .map(|i| {
            let mut rng = task_rng(seed, i as u64);
            let n = rng.gen_range(n_lo..=n_hi);
            if i % 2 == 0 {
                RootedGraph::random_tree(n, &mut rng)
            } else {
                RootedGraph::random_gnp(n, prob, &mut rng)
            }
        })
        .collect();
    let names: Vec<&str> = payoff_suite().iter().map(|(n, _)| *n).collect();
    let results = par_map(&graphs, |_, g| {
        let ensemble = uniform_root_ensemble(g);
        payoff_suite().iter().map(|(_, f)| mass_transport_check(&ensemble, f.as_ref(), radius)).collect::<Vec<_>>()
    });
    let mut rows = Vec::new();
    let mut gaps = Vec::new();
    let mut labels = Vec::new();
    for (i, (g, res)) in graphs.iter().zip(&results).enumerate() {
        for (name, (lhs, rhs)) in names.iter().zip(res) {
            rows.push(vec![
                i.to_string(),
                g.vertex_count().to_string(),
                g.edge_count().to_string(),
                name.to_string(),
                fmt_f(*lhs),
                fmt_f(*rhs),
            ]);
            gaps.push((lhs - rhs).abs());
            labels.push(format!("{i}:{name}"));
        }
    }
    out.file("transport.csv", csv("graph,vertices,edges,payoff,lhs,rhs", rows));
    out.result("max_gap", gaps.iter().cloned().fold(0.0, f64::max));
    out.assert(Assertion::new("uniform_root_unimodular", Relation::AtMost { bound: tol }, gaps).labeled(labels));

    // a fixed root is not unimodular: center of P3, mass sent to leaves
    let p3 = RootedGraph::path(3).with_root(1)?;
    let suite = payoff_suite();
    let leaf = &suite.iter().find(|(n, _)| *n == "leaf_neighbor").expect("in the suite").1;
    let (lhs, rhs) = mass_transport_check(&[(p3, 1.0)], leaf.as_ref(), radius.max(1));
    out.file("counterexample.csv", csv("lhs,rhs", vec![vec![fmt_f(lhs), fmt_f(rhs)]]));
    out.result("counterexample", [lhs, rhs]);
    out.assert(Assertion::new("fixed_center_lhs", Relation::Within { target: 2.0, tol: 0.0 }, vec![lhs]));
    out.assert(Assertion::new("fixed_center_rhs", Relation::Within { target: 0.0, tol: 0.0 }, vec![rhs]));
    Ok(out)
}
