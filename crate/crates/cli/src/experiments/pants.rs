use bslab_core::hyperbolic::{
    glue_forest, pants_crossing_lower_bound, short_geodesics, write_coordinates_csv, write_geodesics_csv,
    FenchelNielsen, GeodesicKind, GeodesicSearch, PantsSurface, TreePortion,
};
use bslab_core::numeric::task_rng;

use super::{csv, fmt_f};
use crate::error::CliResult;
use crate::params::{Kind, ParamSpec, Params};
use crate::{par_map, Assertion, Outcome, Relation};

pub const PARAMS: &[ParamSpec] = &[
    ParamSpec { name: "samples", kind: Kind::Int, default: "50", help: "surfaces per regime" },
    ParamSpec { name: "radius", kind: Kind::Int, default: "2", help: "radius of the 3-valent tree portion" },
    ParamSpec { name: "thin_lengths", kind: Kind::FloatList, default: "[0.05, 0.1]", help: "internal cuff lengths, uniform" },
    ParamSpec { name: "thick_lengths", kind: Kind::FloatList, default: "[4.0, 5.0]", help: "internal cuff lengths, uniform" },
    ParamSpec { name: "thin_boundary_length", kind: Kind::Float, default: "1.0", help: "free cuff length, thin regime" },
    ParamSpec { name: "thick_boundary_length", kind: Kind::Float, default: "4.5", help: "free cuff length, thick regime" },
    ParamSpec { name: "tau", kind: Kind::Float, default: "0.12", help: "length cutoff" },
    ParamSpec { name: "word_length", kind: Kind::Int, default: "8", help: "word bound inside one pants" },
    ParamSpec {
        name: "bound_taus",
        kind: Kind::FloatList,
        default: "[4.0, 10.0]",
        help: "cutoffs for the lower-bound check, thick regime",
    },
    ParamSpec {
        name: "bound_word_length",
        kind: Kind::Int,
        default: "6",
        help: "word bound in two-pants windows for the lower-bound check",
    },
];

struct Regime {
    lo: f64,
    hi: f64,
    boundary: f64,
}

fn surfaces(tree: &TreePortion, r: &Regime, samples: usize, seed: u64, offset: u64) -> CliResult<Vec<PantsSurface>> {
    (0..samples)
        .map(|s| {
            let mut rng = task_rng(seed, offset + s as u64);
            let fn_coords = FenchelNielsen::sample(tree, r.lo, r.hi, r.boundary, &mut rng)?;
            Ok(glue_forest(tree, &fn_coords)?)
        })
        .collect()
}

pub fn run(p: &Params, seed: u64) -> CliResult<Outcome> {
    let samples = p.usize_in("samples", 1, 100_000)?;
    let radius = p.usize_in("radius", 0, 6)?;
    let (thin_lo, thin_hi) = p.range("thin_lengths", 0.0)?;
    let (thick_lo, thick_hi) = p.range("thick_lengths", 0.0)?;
    let thin = Regime { lo: thin_lo, hi: thin_hi, boundary: p.float_above("thin_boundary_length", 0.0)? };
    let thick = Regime { lo: thick_lo, hi: thick_hi, boundary: p.float_above("thick_boundary_length", 0.0)? };
    let tau = p.float_above("tau", 0.0)?;
    let word_length = p.usize_in("word_length", 1, 16)?;
    let bound_taus = p.float_list("bound_taus", 0.0)?;
    let bound_word_length = p.usize_in("bound_word_length", 1, 16)?;

    let tree = TreePortion::regular_ball(radius);
    let edges = tree.edges().len();
    let mut out = Outcome::default();
    let search = GeodesicSearch { word_length_bound: word_length, cutoff: tau, crossing_word_bound: None };

    // thin regime: exactly the internal cuffs, one per edge
    let thin_surfaces = surfaces(&tree, &thin, samples, seed, 0)?;
    let thin_found = par_map(&thin_surfaces, |_, s| short_geodesics(s, search));
    let mut exact = Vec::with_capacity(samples);
    let mut rows = Vec::new();
    for (s, found) in thin_found.iter().enumerate() {
        let mut cuffs: Vec<usize> = found
            .iter()
            .filter_map(|g| match g.kind {
                GeodesicKind::InternalCuff(e) => Some(e),
                _ => None,
            })
            .collect();
        cuffs.sort_unstable();
        let ok = found.len() == edges && cuffs == (0..edges).collect::<Vec<_>>();
        exact.push(if ok { 1.0 } else { 0.0 });
        rows.push(vec![s.to_string(), found.len().to_string(), cuffs.len().to_string(), (ok as u8).to_string()]);
    }
    out.file("tree.txt", bslab_core::hyperbolic::write_tree(&thin_surfaces[0]));
    out.file("thin_coordinates_s0.csv", write_coordinates_csv(&thin_surfaces[0]));
    out.file("thin_geodesics_s0.csv", write_geodesics_csv(&thin_found[0]));
    out.file("thin.csv", csv("sample,found,internal_cuffs,exact", rows));
    out.result("internal_edges", edges);
    out.assert(Assertion::with_reference(
        "thin_returns_internal_cuffs",
        Relation::EqualsReference,
        exact,
        vec![1.0; samples],
    ));

    // thick regime: nothing below tau
    let thick_surfaces = surfaces(&tree, &thick, samples, seed, samples as u64)?;
    let counts: Vec<f64> = par_map(&thick_surfaces, |_, s| short_geodesics(s, search).len() as f64);
    out.file(
        "thick.csv",
        csv("sample,found", counts.iter().enumerate().map(|(s, c)| vec![s.to_string(), c.to_string()]).collect::<Vec<_>>()),
    );
    out.assert(Assertion::new("thick_returns_nothing", Relation::AtMost { bound: 0.0 }, counts));

    // every geodesic found up to each cutoff respects the pants lower bound
    let bound = pants_crossing_lower_bound(thick_lo);
    out.result("pants_lower_bound", bound);
    let mut all = Vec::new();
    let mut rows = Vec::new();
    for (k, &cutoff) in bound_taus.iter().enumerate() {
        let wide = GeodesicSearch {
            word_length_bound: word_length,
            cutoff,
            crossing_word_bound: Some(bound_word_length),
        };
        let found = par_map(&thick_surfaces, |_, s| short_geodesics(s, wide));
        for (s, f) in found.iter().enumerate() {
            let shortest = f.iter().map(|g| g.length).reduce(f64::min);
            rows.push(vec![fmt_f(cutoff), s.to_string(), f.len().to_string(), shortest.map(fmt_f).unwrap_or_default()]);
            all.extend(f.iter().map(|g| g.length));
        }
        out.file(format!("bound_check_c{k}_s0.csv"), write_geodesics_csv(&found[0]));
    }
    out.file("bound_check.csv", csv("cutoff,sample,found,shortest", rows));
    out.result("bound_check_found", all.len());
    out.result("bound_check_shortest", all.iter().cloned().reduce(f64::min));
    out.assert(Assertion::new("pants_lower_bound_holds", Relation::AtLeast { bound }, all));
    Ok(out)
}
