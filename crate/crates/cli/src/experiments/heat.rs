use bslab_core::hyperbolic::{heat_kernel, heat_shape_constant, thin_part_report, HeatQuery, HyperbolicCylinder};
use bslab_core::numeric::integrate_to_infinity;
use std::f64::consts::PI;

use super::{csv, fmt_f};
use crate::error::{bad, CliResult};
use crate::params::{Kind, ParamSpec, Params};
use crate::{par_map, Assertion, Outcome, Relation};

pub const PARAMS: &[ParamSpec] = &[
    ParamSpec { name: "t", kind: Kind::Float, default: "1.0", help: "heat time for the cylinder runs" },
    ParamSpec { name: "epsilon", kind: Kind::Float, default: "0.5", help: "thin-part displacement cutoff" },
    ParamSpec { name: "taus", kind: Kind::FloatList, default: "[0.02, 0.05, 0.1, 0.2]", help: "core geodesic lengths" },
    ParamSpec { name: "tail_tol", kind: Kind::Float, default: "1e-12", help: "certified orbit-sum tail" },
    ParamSpec { name: "heat_times", kind: Kind::FloatList, default: "[0.1, 1.0, 10.0]", help: "times for the normalization check" },
    ParamSpec { name: "norm_tol", kind: Kind::Float, default: "1e-6", help: "allowed |integral of p_t - 1|" },
    ParamSpec { name: "rho_range", kind: Kind::FloatList, default: "[0.0, 10.0]", help: "distance range of the shape grid" },
    ParamSpec { name: "t_range", kind: Kind::FloatList, default: "[0.1, 10.0]", help: "time range of the shape grid" },
    ParamSpec { name: "grid_points", kind: Kind::Int, default: "41", help: "points per axis of the shape grid" },
    ParamSpec { name: "spread_factor", kind: Kind::Float, default: "10.0", help: "allowed max/min across taus" },
];

fn sphere_area(dim: u32, rho: f64) -> f64 {
    if dim == 2 {
        2.0 * PI * rho.sinh()
    } else {
        4.0 * PI * rho.sinh().powi(2)
    }
}

fn total_mass(q: &HeatQuery) -> f64 {
    let (v, _) = integrate_to_infinity(
        |rho| heat_kernel(q, rho).map_or(f64::NAN, |p| p * sphere_area(q.dim, rho)),
        0.0,
        1e-12,
        1e-14,
    );
    v
}

pub fn run(p: &Params, _seed: u64) -> CliResult<Outcome> {
    let t = p.float_above("t", 0.0)?;
    let epsilon = p.float_above("epsilon", 0.0)?;
    let taus = p.float_list("taus", 0.0)?;
    let tail_tol = p.float_above("tail_tol", 0.0)?;
    let heat_times = p.float_list("heat_times", 0.0)?;
    let norm_tol = p.float_above("norm_tol", 0.0)?;
    let (rho_lo, rho_hi) = p.range("rho_range", -1.0)?;
    if rho_lo < 0.0 {
        return Err(bad("rho_range", "distances must be nonnegative"));
    }
    let (t_lo, t_hi) = p.range("t_range", 0.0)?;
    let grid = p.usize_in("grid_points", 2, 10_000)?;
    let spread = p.float_above("spread_factor", 1.0)?;
    let mut out = Outcome::default();

    // normalization in both dimensions
    let mut rows = Vec::new();
    let mut errs3 = Vec::new();
    let mut errs2 = Vec::new();
    for &s in &heat_times {
        for dim in [2u32, 3] {
            let q = HeatQuery::new(s, dim, tail_tol, epsilon)?;
            let m = total_mass(&q);
            rows.push(vec![dim.to_string(), fmt_f(s), fmt_f(m)]);
            if dim == 3 { &mut errs3 } else { &mut errs2 }.push((m - 1.0).abs());
        }
    }
    out.file("normalization.csv", csv("dim,t,total_mass", rows));
    out.assert(Assertion::new("normalization_d3", Relation::AtMost { bound: norm_tol }, errs3.clone()).labeled(&heat_times));
    out.assert(Assertion::new("normalization_d2", Relation::AtMost { bound: norm_tol }, errs2).labeled(&heat_times));

    // p_t(rho) <= c t^{-3/2} exp(-rho^2 / 5t) on a log-t by linear-rho grid
    let c = heat_shape_constant(3);
    let step = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (grid - 1) as f64;
    let times: Vec<f64> = (0..grid).map(|i| step(t_lo.ln(), t_hi.ln(), i).exp()).collect();
    let ratios = par_map(&times, |_, &s| -> CliResult<f64> {
        let q = HeatQuery::new(s, 3, tail_tol, epsilon)?;
        let mut worst: f64 = 0.0;
        for i in 0..grid {
            let rho = step(rho_lo, rho_hi, i);
            let bound = c * s.powf(-1.5) * (-rho * rho / (5.0 * s)).exp();
            worst = worst.max(heat_kernel(&q, rho)? / bound);
        }
        Ok(worst)
    })
    .into_iter()
    .collect::<CliResult<Vec<f64>>>()?;
    let worst = ratios.iter().cloned().fold(0.0, f64::max);
    out.file(
        "shape_bound.csv",
        csv("t,max_ratio", times.iter().zip(&ratios).map(|(s, r)| vec![fmt_f(*s), fmt_f(*r)]).collect::<Vec<_>>()),
    );
    out.result("shape_constant", c);
    out.result("shape_ratio_max", worst);
    out.assert(Assertion::new("gaussian_shape_bound", Relation::AtMost { bound: 1.0 }, vec![worst]));

    // cylinders
    let q = HeatQuery::new(t, 2, tail_tol, epsilon)?;
    let reports = par_map(&taus, |_, &tau| thin_part_report(&HyperbolicCylinder::new(tau)?, &q))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let axis: Vec<f64> = reports.iter().map(|r| r.f_axis * r.tau).collect();
    let ratio: Vec<f64> = reports.iter().map(|r| r.ratio).collect();
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            vec![
                fmt_f(r.tau),
                fmt_f(r.rho_thin),
                fmt_f(r.vol_thin_per_period),
                fmt_f(r.integral_f_over_thin),
                fmt_f(r.ratio),
                fmt_f(r.f_axis),
                fmt_f(r.f_axis * r.tau),
            ]
        })
        .collect();
    out.file("thin.csv", csv("tau,rho_thin,vol_thin_per_period,integral_f_over_thin,ratio,f_axis,f_axis_times_tau", rows));
    let json: Vec<serde_json::Value> = reports.iter().map(|r| serde_json::to_value(r).expect("plain record")).collect();
    out.file("thin_part.json", serde_json::to_string_pretty(&json).expect("plain records") + "\n");
    out.result("taus", &taus);
    out.result("f_axis_times_tau", &axis);
    out.result("thin_ratio", &ratio);
    out.result("empirical_c1", axis.iter().cloned().fold(0.0, f64::max));
    out.result("empirical_c0", ratio.iter().cloned().fold(0.0, f64::max));
    out.assert(Assertion::new("axis_f_times_tau_spread", Relation::SpreadAtMost { factor: spread }, axis).labeled(&taus));
    out.assert(Assertion::new("thin_ratio_spread", Relation::SpreadAtMost { factor: spread }, ratio).labeled(&taus));
    Ok(out)
}
