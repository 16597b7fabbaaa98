use bslab_core::arithmetic::{mahler_measure, torsion_growth_rate, write_growth_csv, IntPolynomial};

use super::{csv, fmt_f};
use crate::error::{bad, CliResult};
use crate::params::{Kind, ParamSpec, Params};
use crate::{Assertion, Outcome, Relation};

pub const PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "polynomials",
        kind: Kind::StrList,
        default: "[\"1 -3 1\", \"1 -2\"]",
        help: "monic Delta, coefficients leading first",
    },
    ParamSpec { name: "n_max", kind: Kind::Int, default: "500", help: "largest cover degree" },
    ParamSpec { name: "tolerance", kind: Kind::Float, default: "1e-3", help: "asserted |a_nmax - log m(Delta)|" },
];

pub fn run(p: &Params, _seed: u64) -> CliResult<Outcome> {
    let n_max = p.usize_in("n_max", 1, 100_000)?;
    let tol = p.float_above("tolerance", 0.0)?;
    let polys = p.string_list("polynomials");
    if polys.is_empty() {
        return Err(bad("polynomials", "empty list"));
    }
    let mut out = Outcome::default();
    let mut summary = Vec::new();
    let (mut errors, mut labels) = (Vec::new(), Vec::new());
    let mut ks = Vec::new();
    for (i, text) in polys.iter().enumerate() {
        let delta = IntPolynomial::parse(text).map_err(|e| bad("polynomials", format!("{text:?}: {e}")))?;
        let g = torsion_growth_rate(&delta, n_max)?;
        // root-based measure, independent of the resultants
        let target = mahler_measure(&delta)?.ln();
        out.file(format!("growth_{i}.csv"), write_growth_csv(&g));
        summary.push(vec![format!("\"{delta}\""), fmt_f(g.limit_estimate), fmt_f(target), fmt_f(g.empirical_k)]);
        errors.push((g.limit_estimate - target).abs());
        labels.push(delta.to_string());
        ks.push(g.empirical_k);
    }
    out.file("summary.csv", csv("polynomial,a_nmax,log_mahler,empirical_k", summary));
    out.result("polynomials", &labels);
    out.result("errors", &errors);
    out.result("empirical_k", &ks);
    out.assert(Assertion::new("growth_rate_matches_log_mahler", Relation::AtMost { bound: tol }, errors).labeled(labels));
    Ok(out)
}
