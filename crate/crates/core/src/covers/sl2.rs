use std::collections::{HashMap, VecDeque};

use super::perm::{Perm, PermRep};
use crate::error::{domain, Error, Result};
use crate::graphs::{Edge, EdgeLabel, RootedGraph};

/// 2x2 matrix over `Z/N`, row-major `(a, b, c, d)`.
pub type Mat2 = [u32; 4];

/// Size guard for materialized groups.
pub const MAX_GROUP_ORDER: u64 = 1_000_000;

pub fn mat_mul(x: &Mat2, y: &Mat2, n: u32) -> Mat2 {
    let n = n as u64;
    let [a, b, c, d] = x.map(u64::from);
    let [e, f, g, h] = y.map(u64::from);
    [
        ((a * e + b * g) % n) as u32,
        ((a * f + b * h) % n) as u32,
        ((c * e + d * g) % n) as u32,
        ((c * f + d * h) % n) as u32,
    ]
}

pub fn det(x: &Mat2, n: u32) -> u32 {
    let n = n as u64;
    let [a, b, c, d] = x.map(u64::from);
    ((a * d % n + n - b * c % n) % n) as u32
}

/// Inverse of a determinant-1 matrix.
pub fn mat_inv(x: &Mat2, n: u32) -> Mat2 {
    let [a, b, c, d] = *x;
    [d, (n - b) % n, (n - c) % n, a]
}

fn reduce(x: [i64; 4], n: u32) -> Mat2 {
    x.map(|v| v.rem_euclid(n as i64) as u32)
}

/// `|SL2(Z/N)| = N^3 prod_{p | N} (1 - 1/p^2)`.
pub fn sl2_order(n: u64) -> u64 {
    let mut order = n * n * n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            order = order / (p * p) * (p * p - 1);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        order = order / (m * m) * (m * m - 1);
    }
    order
}

/// Materialized matrix group over `Z/N` with a symmetric generating list.
#[derive(Debug, Clone)]
pub struct FiniteMatrixGroup {
    modulus: u32,
    elements: Vec<Mat2>,
    index: HashMap<Mat2, usize>,
    generators: Vec<usize>,
}

impl FiniteMatrixGroup {
    /// Subgroup of `SL2(Z/N)` generated by `gens`, closed under inverses in
    /// the generator list (inverses are appended if missing).
    pub fn generated(modulus: u32, gens: &[Mat2]) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidModulus(modulus as u64));
        }
        let limit = MAX_GROUP_ORDER.min(sl2_order(modulus as u64));
        let id = [1, 0, 0, 1];
        let mut list: Vec<Mat2> = Vec::new();
        for g in gens {
            let g = reduce(g.map(i64::from), modulus);
            if det(&g, modulus) != 1 {
                return Err(domain("generators", format!("{g:?} has determinant != 1")));
            }
            if !list.contains(&g) {
                list.push(g);
            }
        }
        for i in 0..list.len() {
            let inv = mat_inv(&list[i], modulus);
            if !list.contains(&inv) {
                list.push(inv);
            }
        }
        if list.contains(&id) {
            return Err(Error::IdentityGenerator);
        }
        let mut elements = vec![id];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &list {
                let y = mat_mul(&x, g, modulus);
                if !index.contains_key(&y) {
                    if elements.len() as u64 >= limit {
                        return Err(Error::GroupTooLarge {
                            modulus: modulus as u64,
                            order: sl2_order(modulus as u64),
                            limit: MAX_GROUP_ORDER,
                        });
                    }
                    index.insert(y, elements.len());
                    elements.push(y);
                    queue.push_back(y);
                }
            }
        }
        let generators = list.iter().map(|g| index[g]).collect();
        Ok(Self { modulus, elements, index, generators })
    }

    /// Replace the generating list. It must be symmetric and avoid the identity.
    pub fn with_generators(&self, gens: &[Mat2]) -> Result<Self> {
        let mut idx = Vec::with_capacity(gens.len());
        for g in gens {
            let g = reduce(g.map(i64::from), self.modulus);
            let i = *self
                .index
                .get(&g)
                .ok_or_else(|| domain("generators", format!("{g:?} not in group")))?;
            if i == self.identity() {
                return Err(Error::IdentityGenerator);
            }
            idx.push(i);
        }
        for &i in &idx {
            let inv = self.inverse(i);
            if !idx.contains(&inv) {
                return Err(Error::AsymmetricGenerators);
            }
        }
        Ok(Self { generators: idx, ..self.clone() })
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Mat2] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> Mat2 {
        self.elements[i]
    }

    pub fn index_of(&self, m: &Mat2) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.index[&mat_mul(&self.elements[i], &self.elements[j], self.modulus)]
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.index[&mat_inv(&self.elements[i], self.modulus)]
    }
}

/// Default generators `(1,1;0,1)` and `(1,0;1,1)`, followed by their inverses.
pub fn default_generators(modulus: u32) -> Vec<Mat2> {
    let m = modulus;
    vec![[1, 1, 0, 1], [1, 0, 1, 1], [1, m - 1, 0, 1], [1, 0, m - 1, 1]]
}

/// `SL2(Z/N)` with the default generators.
pub fn sl2_quotient(modulus: u32) -> Result<FiniteMatrixGroup> {
    if modulus < 2 {
        return Err(Error::InvalidModulus(modulus as u64));
    }
    let order = sl2_order(modulus as u64);
    if order > MAX_GROUP_ORDER {
        return Err(Error::GroupTooLarge { modulus: modulus as u64, order, limit: MAX_GROUP_ORDER });
    }
    let gens = default_generators(modulus);
    let g = FiniteMatrixGroup::generated(modulus, &gens)?;
    // the elementary matrices generate SL2(Z/N)
    debug_assert_eq!(g.order() as u64, order);
    // keep the documented order (A, B, A^-1, B^-1) even when A = A^-1 (N = 2)
    g.with_generators(&gens)
}

/// Cayley graph rooted at the identity: one edge `g -- g s` per element and
/// inverse pair `{s, s^-1}` (one per involution orbit).
pub fn cayley_graph(group: &FiniteMatrixGroup) -> Result<RootedGraph> {
    let gens = group.generators();
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    if gens.contains(&group.identity()) {
        return Err(Error::IdentityGenerator);
    }
    let mut edges = Vec::new();
    for (gi, &s) in gens.iter().enumerate() {
        let inv = group.inverse(s);
        let Some(inv_pos) = gens.iter().position(|&x| x == inv) else {
            return Err(Error::AsymmetricGenerators);
        };
        // first occurrence of s; duplicates are dropped
        if gens[..gi].contains(&s) {
            continue;
        }
        if inv == s {
            for g in 0..group.order() {
                let h = group.mul(g, s);
                if g < h {
                    edges.push(Edge { u: g, v: h, label: Some(EdgeLabel { generator: gi, inverse: false }) });
                }
            }
        } else if gi < inv_pos {
            for g in 0..group.order() {
                let h = group.mul(g, s);
                edges.push(Edge { u: g, v: h, label: Some(EdgeLabel { generator: gi, inverse: false }) });
            }
        }
    }
    RootedGraph::new(group.order(), edges, group.identity())
}

/// Action of a matrix on `P^1(F_p)`: point `x < p` is `[x : 1]`, point `p` is `[1 : 0]`.
pub fn projective_perm(m: &Mat2, p: u32) -> Perm {
    let p64 = p as u64;
    let inv = |x: u64| -> u64 { modpow(x, p64 - 2, p64) };
    let [a, b, c, d] = m.map(u64::from);
    (0..=p)
        .map(|pt| {
            let (x, y) = if pt == p { (1, 0) } else { (pt as u64, 1) };
            let nx = (a * x + b * y) % p64;
            let ny = (c * x + d * y) % p64;
            if ny == 0 {
                p
            } else {
                (nx * inv(ny) % p64) as u32
            }
        })
        .collect()
}

fn modpow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

pub fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Permutation representation of the group on the projective line `P^1(F_p)`.
/// The generators are the images of the group's generator list. `-I` acts
/// trivially, so fixities computed through this representation are PSL2 fixities.
pub fn projective_line_rep(group: &FiniteMatrixGroup) -> Result<PermRep> {
    let p = group.modulus();
    if !is_prime(p) {
        return Err(domain("modulus", format!("{p} is not prime")));
    }
    let gens = group.generators().iter().map(|&g| projective_perm(&group.element(g), p)).collect();
    PermRep::new(p as usize + 1, gens)
}

/// Exhaustive PSL2(F_p) fixity on the projective line.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveFixity {
    pub p: u32,
    pub sl_order: usize,
    pub psl_order: usize,
    /// Sum of fixed-point counts over all PSL2 elements.
    pub burnside_sum: usize,
    /// Largest fixed-point count of a nontrivial PSL2 element.
    pub max_nontrivial_fix: usize,
}

pub fn projective_fixity(group: &FiniteMatrixGroup) -> Result<ProjectiveFixity> {
    let p = group.modulus();
    if !is_prime(p) {
        return Err(domain("modulus", format!("{p} is not prime")));
    }
    let minus_one = [p - 1, 0, 0, p - 1];
    let mut psl_order = 0;
    let mut burnside_sum = 0;
    let mut max_nontrivial_fix = 0;
    for m in group.elements() {
        // one representative of each pair {g, -g}
        let neg = m.map(|x| (p - x) % p);
        if p > 2 && neg < *m {
            continue;
        }
        psl_order += 1;
        let fix = super::perm::fixed_points(&projective_perm(m, p));
        burnside_sum += fix;
        if *m != [1, 0, 0, 1] && *m != minus_one {
            max_nontrivial_fix = max_nontrivial_fix.max(fix);
        }
    }
    Ok(ProjectiveFixity { p, sl_order: group.order(), psl_order, burnside_sum, max_nontrivial_fix })
}
