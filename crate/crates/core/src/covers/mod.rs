//! Permutation representations, congruence quotients of SL2(Z), girth and
//! finite covers of cell complexes.

mod complex;
mod perm;
mod sl2;

use std::collections::VecDeque;
use std::fmt::Write as _;

pub use complex::{
    assignment_is_transitive, build_cover, surface_cover_assignment, surface_relator, torus_grid_assignment,
    CellComplex, IntMatrix, Side,
};
pub use perm::{
    compose, fixed_points, fixity_scan, identity_perm, invert, is_perm, parse_assignment, random_perm,
    schreier_graph, write_assignment, FixityRow, FixityScan, Letter, Perm, PermRep, Word,
};
pub use sl2::{
    cayley_graph, default_generators, det, is_prime, mat_inv, mat_mul, projective_fixity, projective_line_rep,
    projective_perm, sl2_order, sl2_quotient, FiniteMatrixGroup, Mat2, ProjectiveFixity, MAX_GROUP_ORDER,
};

use crate::graphs::RootedGraph;

/// Length of a shortest cycle; `None` for forests. Loops have length 1 and
/// parallel edges length 2.
pub fn girth(g: &RootedGraph) -> Option<usize> {
    let n = g.vertex_count();
    if g.edges().iter().any(|e| e.is_loop()) {
        return Some(1);
    }
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut via = vec![usize::MAX; n];
    for s in 0..n {
        let mut touched = vec![s];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        'bfs: while let Some(u) = queue.pop_front() {
            if 2 * dist[u] + 1 >= best {
                break;
            }
            for &(w, e) in g.neighbors(u) {
                if e == via[u] {
                    continue;
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    via[w] = e;
                    touched.push(w);
                    queue.push_back(w);
                } else {
                    // non-tree edge closes a cycle through s of length at most this
                    best = best.min(dist[u] + dist[w] + 1);
                    if best <= 2 {
                        break 'bfs;
                    }
                }
            }
        }
        for v in touched {
            dist[v] = usize::MAX;
            via[v] = usize::MAX;
        }
    }
    (best != usize::MAX).then_some(best)
}

/// CSV `word_string,length,fix,index,ratio`.
pub fn write_fixity_csv(scan: &FixityScan) -> String {
    let mut out = String::from("word_string,length,fix,index,ratio\n");
    for r in &scan.rows {
        let ratio = r.fix as f64 / scan.index as f64;
        writeln!(out, "{},{},{},{},{ratio:.17e}", r.word, r.word.len(), r.fix, scan.index).expect("string write");
    }
    out
}

/// CSV `p,group_order,girth` (empty girth for a forest).
pub fn write_girth_csv(rows: &[(u32, usize, Option<usize>)]) -> String {
    let mut out = String::from("p,group_order,girth\n");
    for (p, order, g) in rows {
        let g = g.map(|x| x.to_string()).unwrap_or_default();
        writeln!(out, "{p},{order},{g}").expect("string write");
    }
    out
}
