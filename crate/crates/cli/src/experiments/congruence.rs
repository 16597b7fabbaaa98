use bslab_core::covers::{
    cayley_graph, fixity_scan, girth, is_prime, projective_fixity, projective_line_rep, sl2_quotient, write_fixity_csv,
    write_girth_csv,
};

use super::csv;
use crate::error::{bad, CliResult};
use crate::params::{Kind, ParamSpec, Params};
use crate::{par_map, Assertion, Outcome, Relation};

pub const FIXITY_PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "primes",
        kind: Kind::IntList,
        default: "[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]",
        help: "PSL2(Z/p) acting on the projective line over F_p",
    },
    ParamSpec { name: "max_fix", kind: Kind::Int, default: "2", help: "asserted fixed-point bound" },
    ParamSpec { name: "scan_prime", kind: Kind::Int, default: "7", help: "prime for the word fixity scan" },
    ParamSpec { name: "scan_word_length", kind: Kind::Int, default: "6", help: "reduced words up to this length" },
];

pub const GIRTH_PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "primes",
        kind: Kind::IntList,
        default: "[5, 7, 11, 13, 17, 19, 23]",
        help: "levels p of SL2(Z/p) with generators [[1,1],[0,1]], [[1,0],[1,1]]",
    },
    ParamSpec { name: "floor_from", kind: Kind::Int, default: "11", help: "girth floor applies from this level" },
    ParamSpec { name: "girth_floor", kind: Kind::Int, default: "4", help: "asserted minimum girth" },
];

fn primes(p: &Params) -> CliResult<Vec<u32>> {
    let ps = p.usize_list("primes", 2, 1000)?;
    if let Some(q) = ps.iter().find(|&&q| !is_prime(q as u32)) {
        return Err(bad("primes", format!("{q} is not prime")));
    }
    Ok(ps.into_iter().map(|q| q as u32).collect())
}

pub fn run_fixity(p: &Params, _seed: u64) -> CliResult<Outcome> {
    let ps = primes(p)?;
    let max_fix = p.usize_in("max_fix", 0, 1000)?;
    let scan_prime = p.usize_in("scan_prime", 2, 31)? as u32;
    if !is_prime(scan_prime) {
        return Err(bad("scan_prime", format!("{scan_prime} is not prime")));
    }
    let len = p.usize_in("scan_word_length", 1, 12)?;

    let reports = par_map(&ps, |_, &q| -> CliResult<_> { Ok(projective_fixity(&sl2_quotient(q)?)?) });
    let reports = reports.into_iter().collect::<CliResult<Vec<_>>>()?;
    let mut out = Outcome::default();
    out.file(
        "fixity.csv",
        csv(
            "p,sl_order,psl_order,points,burnside_sum,max_nontrivial_fix",
            reports.iter().map(|r| {
                vec![
                    r.p.to_string(),
                    r.sl_order.to_string(),
                    r.psl_order.to_string(),
                    (r.p + 1).to_string(),
                    r.burnside_sum.to_string(),
                    r.max_nontrivial_fix.to_string(),
                ]
            }),
        ),
    );
    let fixes: Vec<f64> = reports.iter().map(|r| r.max_nontrivial_fix as f64).collect();
    let sums: Vec<f64> = reports.iter().map(|r| r.burnside_sum as f64).collect();
    // transitive: one orbit, so the fixed points sum to |G|
    let orders: Vec<f64> = reports.iter().map(|r| r.psl_order as f64).collect();
    out.assert(Assertion::new("max_nontrivial_fix", Relation::AtMost { bound: max_fix as f64 }, fixes.clone()).labeled(&ps));
    out.assert(Assertion::with_reference("burnside_identity", Relation::EqualsReference, sums, orders).labeled(&ps));
    out.result("primes", &ps);
    out.result("max_nontrivial_fix", &fixes);

    let rep = projective_line_rep(&sl2_quotient(scan_prime)?)?;
    let scan = fixity_scan(&rep, len)?;
    out.file(format!("scan_p{scan_prime}.csv"), write_fixity_csv(&scan));
    out.result("scan_max_ratio", scan.max_ratio);
    out.result("scan_max_exponent", scan.max_exponent);
    Ok(out)
}

pub fn run_girth(p: &Params, _seed: u64) -> CliResult<Outcome> {
    let ps = primes(p)?;
    let from = p.usize_in("floor_from", 0, 1000)? as u32;
    let floor = p.usize_in("girth_floor", 0, 1000)?;
    let rows = par_map(&ps, |_, &q| -> CliResult<(u32, usize, Option<usize>)> {
        let g = sl2_quotient(q)?;
        Ok((q, g.order(), girth(&cayley_graph(&g)?)))
    });
    let rows = rows.into_iter().collect::<CliResult<Vec<_>>>()?;
    let mut out = Outcome::default();
    out.file("girth.csv", write_girth_csv(&rows));
    // a forest has infinite girth
    let girths: Vec<f64> = rows.iter().map(|r| r.2.map_or(f64::INFINITY, |g| g as f64)).collect();
    out.result("primes", &ps);
    out.result("girths", rows.iter().map(|r| r.2).collect::<Vec<_>>());
    out.assert(Assertion::new("girth_nondecreasing", Relation::NonDecreasing, girths.clone()).labeled(&ps));
    let (late_p, late): (Vec<u32>, Vec<f64>) =
        ps.iter().zip(&girths).filter(|(q, _)| **q >= from).map(|(q, g)| (*q, *g)).unzip();
    out.assert(Assertion::new("girth_floor", Relation::AtLeast { bound: floor as f64 }, late).labeled(late_p));
    Ok(out)
}
