//! Exact canonical forms for small rooted multigraphs.
//!
//! Pendant trees are folded into vertex labels first (canonical tree codes),
//! which leaves a small core. The core is labeled by color refinement and
//! exhaustive individualization of the first non-singleton cell, keeping the
//! lexicographically smallest encoding. Two rooted multigraphs get the same
//! certificate iff they are rooted-isomorphic.

use super::RootedGraph;

/// Multigraph in adjacency-count form: `mult[u][v]` parallel edges, with
/// `mult[v][v]` the number of loops at `v`. Vertex 0 is the root.
#[derive(Debug, Clone)]
pub struct CanonInput {
    mult: Vec<Vec<u32>>,
}

impl CanonInput {
    pub fn from_graph(g: &RootedGraph) -> Self {
        let n = g.vertex_count();
        let mut mult = vec![vec![0u32; n]; n];
        for e in g.edges() {
            if e.u == e.v {
                mult[e.u][e.u] += 1;
            } else {
                mult[e.u][e.v] += 1;
                mult[e.v][e.u] += 1;
            }
        }
        // move the root to index 0
        let r = g.root();
        if r != 0 {
            mult.swap(0, r);
            for row in &mut mult {
                row.swap(0, r);
            }
        }
        Self { mult }
    }
}

fn push_u32(out: &mut Vec<u8>, x: u32) {
    out.extend_from_slice(&x.to_be_bytes());
}

fn push_bytes(out: &mut Vec<u8>, b: &[u8]) {
    push_u32(out, b.len() as u32);
    out.extend_from_slice(b);
}

/// Canonical certificate of a rooted multigraph.
pub fn certificate(input: &CanonInput) -> Vec<u8> {
    let n = input.mult.len();
    let mut mult = input.mult.clone();
    let mut alive = vec![true; n];
    // labels[v] = canonical code of the pendant forest folded into v
    let mut children: Vec<Vec<Vec<u8>>> = vec![Vec::new(); n];

    // Fold non-root vertices attached by exactly one single edge. Leaves are
    // stripped in simultaneous rounds so the result does not depend on the
    // vertex order.
    loop {
        let mut leaves = Vec::new();
        for v in 1..n {
            if !alive[v] {
                continue;
            }
            let mut parent = None;
            let mut links = 0;
            for u in 0..n {
                if u != v && alive[u] && mult[v][u] > 0 {
                    links += mult[v][u];
                    parent = Some(u);
                }
            }
            if links == 1 {
                let code = vertex_code(mult[v][v], &mut children[v]);
                leaves.push((v, parent.expect("one link"), code));
            }
        }
        if leaves.is_empty() {
            break;
        }
        let is_leaf = |x: usize| leaves.iter().position(|l| l.0 == x);
        let mut folded = Vec::new();
        for (i, (v, p, code)) in leaves.iter().enumerate() {
            if let Some(j) = is_leaf(*p) {
                // an isolated edge: keep the endpoint with the smaller code
                let other = &leaves[j].2;
                if (code, i) < (other, j) {
                    continue;
                }
            }
            folded.push((*v, *p, code.clone()));
        }
        for (v, p, code) in folded {
            children[p].push(code);
            alive[v] = false;
            mult[v][p] = 0;
            mult[p][v] = 0;
        }
    }

    let core: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    let labels: Vec<Vec<u8>> = core
        .iter()
        .map(|&v| {
            let mut c = children[v].clone();
            vertex_code(mult[v][v], &mut c)
        })
        .collect();
    let m = core.len();
    let sub: Vec<Vec<u32>> = core.iter().map(|&u| core.iter().map(|&v| mult[u][v]).collect()).collect();

    let mut out = Vec::new();
    push_u32(&mut out, n as u32);
    push_u32(&mut out, m as u32);
    let labeling = canonical_order(&sub, &labels);
    for &v in &labeling {
        push_bytes(&mut out, &labels[v]);
    }
    for &u in &labeling {
        for &v in &labeling {
            push_u32(&mut out, sub[u][v]);
        }
    }
    out
}

fn vertex_code(loops: u32, kids: &mut [Vec<u8>]) -> Vec<u8> {
    kids.sort();
    let mut code = vec![b'('];
    push_u32(&mut code, loops);
    for k in kids.iter() {
        code.extend_from_slice(k);
    }
    code.push(b')');
    code
}

// Core vertex 0 is the root (it is never folded).
fn canonical_order(mult: &[Vec<u32>], labels: &[Vec<u8>]) -> Vec<usize> {
    let n = mult.len();
    if n == 0 {
        return Vec::new();
    }
    // initial colors: root first, then by label
    let mut keys: Vec<(bool, &Vec<u8>)> = (0..n).map(|v| (v != 0, &labels[v])).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    sorted.dedup();
    let colors: Vec<usize> = keys.iter_mut().map(|k| sorted.binary_search(k).expect("present")).collect();
    let colors = refine(mult, colors);
    let mut best: Option<(Vec<u32>, Vec<usize>)> = None;
    search(mult, colors, &mut best);
    best.expect("search visits at least one leaf").1
}

// Equitable refinement. New colors are ranks of (old color, neighbor
// signature), so the refinement commutes with relabeling.
fn refine(mult: &[Vec<u32>], mut colors: Vec<usize>) -> Vec<usize> {
    let n = mult.len();
    let mut count = distinct(&colors);
    loop {
        let mut sigs: Vec<(usize, Vec<(usize, u32)>)> = (0..n)
            .map(|v| {
                let mut s: Vec<(usize, u32)> = (0..n)
                    .filter(|&u| u != v && mult[v][u] > 0)
                    .map(|u| (colors[u], mult[v][u]))
                    .collect();
                s.sort_unstable();
                (colors[v], s)
            })
            .collect();
        let mut sorted = sigs.clone();
        sorted.sort();
        sorted.dedup();
        colors = sigs
            .iter_mut()
            .map(|s| sorted.binary_search(s).expect("present"))
            .collect();
        let c = sorted.len();
        if c == count {
            return colors;
        }
        count = c;
    }
}

fn distinct(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn search(mult: &[Vec<u32>], colors: Vec<usize>, best: &mut Option<(Vec<u32>, Vec<usize>)>) {
    let n = mult.len();
    let mut sizes = vec![0usize; n];
    for &c in &colors {
        sizes[c] += 1;
    }
    let target = (0..n).find(|&c| sizes[c] > 1);
    let Some(cell) = target else {
        // discrete: colors are a permutation
        let mut order = vec![0usize; n];
        for (v, &c) in colors.iter().enumerate() {
            order[c] = v;
        }
        let mut enc = Vec::with_capacity(n * n);
        for &u in &order {
            for &v in &order {
                enc.push(mult[u][v]);
            }
        }
        if best.as_ref().map_or(true, |(b, _)| enc < *b) {
            *best = Some((enc, order));
        }
        return;
    };
    for v in (0..n).filter(|&v| colors[v] == cell) {
        // individualize v: it keeps the cell's color, the rest of the cell moves up
        let next: Vec<usize> = colors
            .iter()
            .enumerate()
            .map(|(u, &c)| {
                let base = 2 * c;
                if c == cell && u != v {
                    base + 1
                } else {
                    base
                }
            })
            .collect();
        let next = refine(mult, compress(next));
        search(mult, next, best);
    }
}

fn compress(colors: Vec<usize>) -> Vec<usize> {
    let mut sorted = colors.clone();
    sorted.sort_unstable();
    sorted.dedup();
    colors.iter().map(|c| sorted.binary_search(c).expect("present")).collect()
}
