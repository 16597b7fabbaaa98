//! The nine experiments.
//!
//! Every experiment is a pure function of its parameters and seed. Random
//! instances draw from `task_rng(seed, index)`, so results do not depend
//! on scheduling.

mod betti;
mod census;
mod congruence;
mod heat;
mod pants;
mod torsion;
mod tower;
mod transport;

use std::fmt::Write as _;

use crate::error::{CliError, CliResult};
use crate::params::{ParamSpec, Params};
use crate::Outcome;

pub struct Experiment {
    pub name: &'static str,
    /// The statement the experiment exercises.
    pub statement: &'static str,
    pub params: &'static [ParamSpec],
    pub run: fn(&Params, u64) -> CliResult<Outcome>,
}

static EXPERIMENTS: [Experiment; 9] = [
    Experiment {
        name: "tower-spectra",
        statement: "normalized spectral measures along a tower of finite quotients converge to the spectral \
                    measure of the universal cover (graph analog with closed-form limits); Lück's \
                    logarithmic tail bound for integer Laplacians",
        params: tower::PARAMS,
        run: tower::run,
    },
    Experiment {
        name: "betti-tower",
        statement: "Lück approximation: normalized Betti numbers of finite covers converge to the \
                    L2-Betti numbers of the universal cover, vanishing off the middle degree",
        params: betti::PARAMS,
        run: betti::run,
    },
    Experiment {
        name: "congruence-fixity",
        statement: "in any transitive action of a congruence quotient, nontrivial elements fix few points",
        params: congruence::FIXITY_PARAMS,
        run: congruence::run_fixity,
    },
    Experiment {
        name: "congruence-girth",
        statement: "principal congruence quotients have injectivity radius (Cayley girth) growing with the level",
        params: congruence::GIRTH_PARAMS,
        run: congruence::run_girth,
    },
    Experiment {
        name: "mahler-census",
        statement: "the number of integer polynomials of degree n with Mahler measure at most theta is at \
                    most theta^(n(1 + 16 log log n / log n)) (Dubickas-Konyagin); Lehmer's polynomial",
        params: census::PARAMS,
        run: census::run,
    },
    Experiment {
        name: "torsion-growth",
        statement: "torsion in cyclic covers grows exponentially at rate log m(Delta), the exponential \
                    Mahler measure of the Alexander polynomial",
        params: torsion::PARAMS,
        run: torsion::run,
    },
    Experiment {
        name: "cylinder-heat",
        statement: "the periodized heat kernel f_t on a hyperbolic cylinder is at most C/tau on the axis and \
                    its integral over the thin part is bounded by C0 vol(thin part); Gaussian heat kernel bound",
        params: heat::PARAMS,
        run: heat::run,
    },
    Experiment {
        name: "pants-forest",
        statement: "on random trees of pants the short closed geodesics are exactly the short cuffs; thick \
                    pants obey the collar lower bounds min((l - 1)/2, sinh(1/sinh l))",
        params: pants::PARAMS,
        run: pants::run,
    },
    Experiment {
        name: "mass-transport",
        statement: "invariant random rooted graphs are unimodular: expected mass sent equals expected mass \
                    received, for every transport rule",
        params: transport::PARAMS,
        run: transport::run,
    },
];

pub fn experiments() -> &'static [Experiment] {
    &EXPERIMENTS
}

pub fn find_experiment(name: &str) -> CliResult<&'static Experiment> {
    EXPERIMENTS.iter().find(|e| e.name == name).ok_or_else(|| CliError::UnknownExperiment(name.to_string()))
}

/// `{x:.17e}`, the float format of every CSV.
pub(crate) fn fmt_f(x: f64) -> String {
    format!("{x:.17e}")
}

/// CSV from a header and rows of already formatted cells.
pub(crate) fn csv(header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = format!("{header}\n");
    for r in rows {
        writeln!(out, "{}", r.join(",")).expect("string write");
    }
    out
}
