use bslab_core::arithmetic::{
    census, dubickas_konyagin_bound, mahler_measure, write_census_csv, CensusQuery, IntPolynomial, MEASURE_TOL,
};

use super::{csv, fmt_f};
use crate::error::CliResult;
use crate::params::{Kind, ParamSpec, Params};
use crate::{Assertion, Outcome, Relation};

pub const PARAMS: &[ParamSpec] = &[
    ParamSpec { name: "degrees", kind: Kind::IntList, default: "[3, 4, 5, 6]", help: "census degrees n" },
    ParamSpec { name: "theta", kind: Kind::Float, default: "1.3", help: "measure threshold, at least 1" },
    ParamSpec { name: "lehmer", kind: Kind::Bool, default: "true", help: "check Lehmer's polynomial" },
    ParamSpec {
        name: "oracle_theta",
        kind: Kind::Float,
        default: "1.5",
        help: "quadratic census compared with a wider-box closed-form oracle; 0 disables",
    },
];

const LEHMER: [i64; 11] = [1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1];
const LEHMER_MEASURE: f64 = 1.176280818;

// Independent route for degree 2: box |a_i| <= 2 C(2, i) theta and roots
// from the quadratic formula.
fn quadratic_oracle(theta: f64) -> usize {
    let (b1, b2) = ((4.0 * theta) as i64, (2.0 * theta) as i64);
    let mut count = 0;
    for b in -b1..=b1 {
        for c in -b2..=b2 {
            let disc = (b * b - 4 * c) as f64;
            let m = if disc >= 0.0 {
                let s = disc.sqrt();
                [(-b as f64 + s) / 2.0, (-b as f64 - s) / 2.0].iter().map(|r| r.abs().max(1.0)).product()
            } else {
                (c as f64).sqrt().max(1.0).powi(2)
            };
            if m <= theta + MEASURE_TOL {
                count += 1;
            }
        }
    }
    count
}

pub fn run(p: &Params, _seed: u64) -> CliResult<Outcome> {
    let degrees = p.usize_list("degrees", 1, 10)?;
    let theta = p.float("theta");
    let mut out = Outcome::default();
    let mut counts = Vec::new();
    let mut summary = Vec::new();
    let (mut dk_counts, mut dk_bounds, mut dk_degrees) = (Vec::new(), Vec::new(), Vec::new());
    for &n in &degrees {
        let c = census(&CensusQuery::new(n, theta)?)?;
        out.file(format!("census_n{n}.csv"), write_census_csv(&c));
        let bound = dubickas_konyagin_bound(n, theta);
        if let Some(b) = bound {
            dk_counts.push(c.count() as f64);
            dk_bounds.push(b);
            dk_degrees.push(n);
        }
        summary.push(vec![
            n.to_string(),
            fmt_f(theta),
            c.count().to_string(),
            bound.map(fmt_f).unwrap_or_default(),
            c.min_m_above_1().map(fmt_f).unwrap_or_default(),
        ]);
        counts.push(c.count());
    }
    out.file("summary.csv", csv("n,theta,count,dk_bound,min_m_above_1", summary));
    out.result("degrees", &degrees);
    out.result("counts", &counts);
    out.result("count", counts.iter().sum::<usize>());
    out.result("dk_bounds", &dk_bounds);
    if !dk_degrees.is_empty() {
        out.assert(
            Assertion::with_reference("dubickas_konyagin_bound", Relation::AtMostReference, dk_counts, dk_bounds)
                .labeled(&dk_degrees),
        );
    }

    if p.bool("lehmer") {
        let m = mahler_measure(&IntPolynomial::from_descending(&LEHMER)?)?;
        out.result("lehmer_measure", m);
        out.assert(Assertion::new("lehmer_measure", Relation::Within { target: LEHMER_MEASURE, tol: 1e-8 }, vec![m]));
    }

    let oracle_theta = p.float("oracle_theta");
    if oracle_theta > 0.0 {
        let c = census(&CensusQuery::new(2, oracle_theta)?)?.count();
        let o = quadratic_oracle(oracle_theta);
        out.result("oracle_census_count", c);
        out.result("oracle_count", o);
        out.assert(Assertion::with_reference("quadratic_census_matches_oracle", Relation::EqualsReference, vec![c as f64], vec![o as f64]));
    }
    Ok(out)
}
