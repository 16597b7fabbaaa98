use bslab_core::covers::{
    assignment_is_transitive, build_cover, random_perm, surface_cover_assignment, torus_grid_assignment, CellComplex,
};
use bslab_core::numeric::task_rng;
use bslab_core::spectral::betti;

use super::{csv, fmt_f};
use crate::error::{bad, CliResult};
use crate::params::{Kind, ParamSpec, Params};
use crate::{par_map, Assertion, Outcome, Relation};

pub const PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "families",
        kind: Kind::StrList,
        default: "[\"wedge\", \"surface\", \"torus\"]",
        help: "wedge of two circles, genus-g surface, torus grid covers",
    },
    ParamSpec { name: "wedge_degree", kind: Kind::Int, default: "500", help: "sheets of random wedge covers" },
    ParamSpec { name: "wedge_samples", kind: Kind::Int, default: "5", help: "connected random wedge covers" },
    ParamSpec { name: "surface_genus", kind: Kind::Int, default: "2", help: "genus of the base surface" },
    ParamSpec { name: "surface_degrees", kind: Kind::IntList, default: "[2, 3, 4]", help: "surface cover degrees" },
    ParamSpec { name: "torus_sizes", kind: Kind::IntList, default: "[1, 2, 3, 4, 5, 6, 7, 8]", help: "n for the n x n torus grid cover" },
];

struct Row {
    family: &'static str,
    n: usize,
    sample: usize,
    sheets: usize,
    b: [usize; 3],
}

fn bettis(c: &CellComplex) -> CliResult<[usize; 3]> {
    Ok([betti(c, 0)?, betti(c, 1)?, betti(c, 2)?])
}

pub fn run(p: &Params, seed: u64) -> CliResult<Outcome> {
    let mut out = Outcome::default();
    let mut rows: Vec<Row> = Vec::new();
    for family in p.string_list("families") {
        match family.as_str() {
            "wedge" => {
                let n = p.usize_in("wedge_degree", 1, 5000)?;
                let samples = p.usize_in("wedge_samples", 1, 1000)?;
                let base = CellComplex::wedge_of_circles(2);
                let idx: Vec<usize> = (0..samples).collect();
                let found = par_map(&idx, |s, _| -> CliResult<[usize; 3]> {
                    let mut rng = task_rng(seed, s as u64);
                    // rejection sampling of connected covers
                    let perms = loop {
                        let perms = vec![random_perm(n, &mut rng), random_perm(n, &mut rng)];
                        if assignment_is_transitive(&perms, n) {
                            break perms;
                        }
                    };
                    bettis(&build_cover(&base, &perms, n)?)
                });
                let mut b1 = Vec::new();
                for (s, b) in found.into_iter().enumerate() {
                    let b = b?;
                    b1.push(b[1] as f64);
                    rows.push(Row { family: "wedge", n, sample: s, sheets: n, b });
                }
                let expect = vec![(n + 1) as f64; b1.len()];
                out.assert(Assertion::with_reference("wedge_b1_equals_n_plus_1", Relation::EqualsReference, b1, expect));
            }
            "surface" => {
                let genus = p.usize_in("surface_genus", 1, 4)?;
                let degrees = p.usize_list("surface_degrees", 1, 6)?;
                let base = CellComplex::surface(genus)?;
                let (mut gaps, mut expect) = (Vec::new(), Vec::new());
                for &n in &degrees {
                    let assignment = surface_cover_assignment(genus, n)
                        .ok_or_else(|| bad("surface_degrees", format!("no connected cover of degree {n}")))?;
                    let b = bettis(&build_cover(&base, &assignment, n)?)?;
                    // |b1/n - (2g - 2)| = 2/n, compared as integers: |b1 - (2g - 2) n| = 2
                    gaps.push((b[1] as f64 - ((2 * genus - 2) * n) as f64).abs());
                    expect.push(2.0);
                    rows.push(Row { family: "surface", n, sample: 0, sheets: n, b });
                }
                out.assert(
                    Assertion::with_reference("surface_b1_gap_is_2", Relation::EqualsReference, gaps, expect)
                        .labeled(&degrees),
                );
            }
            "torus" => {
                let sizes = p.usize_list("torus_sizes", 1, 12)?;
                let base = CellComplex::torus();
                let mut b1 = Vec::new();
                for &n in &sizes {
                    let b = bettis(&build_cover(&base, &torus_grid_assignment(n), n * n)?)?;
                    b1.push(b[1] as f64);
                    rows.push(Row { family: "torus", n, sample: 0, sheets: n * n, b });
                }
                let expect = vec![2.0; b1.len()];
                out.assert(Assertion::with_reference("torus_b1_equals_2", Relation::EqualsReference, b1, expect).labeled(&sizes));
            }
            other => return Err(bad("families", format!("unknown family {other:?}"))),
        }
    }
    out.result(
        "rows",
        rows.iter()
            .map(|r| serde_json::json!({"family": r.family, "n": r.n, "sample": r.sample, "b0": r.b[0], "b1": r.b[1], "b2": r.b[2]}))
            .collect::<Vec<_>>(),
    );
    out.file(
        "betti.csv",
        csv(
            "family,n,sample,sheets,b0,b1,b2,b1_over_sheets",
            rows.iter().map(|r| {
                vec![
                    r.family.to_string(),
                    r.n.to_string(),
                    r.sample.to_string(),
                    r.sheets.to_string(),
                    r.b[0].to_string(),
                    r.b[1].to_string(),
                    r.b[2].to_string(),
                    fmt_f(r.b[1] as f64 / r.sheets as f64),
                ]
            }),
        ),
    );
    Ok(out)
}
