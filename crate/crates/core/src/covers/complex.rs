use super::perm::{compose, identity_perm, invert, is_perm, Perm};
use crate::error::{Error, Result};
use crate::graphs::RootedGraph;

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn add(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] += v;
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }
}

/// Oriented edge in a 2-cell boundary word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Side {
    pub edge: usize,
    pub forward: bool,
}

/// Cell complex of dimension at most 2. 1-cells run tail to head; each 2-cell
/// is attached along a closed edge walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellComplex {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    faces: Vec<Vec<Side>>,
}

impl CellComplex {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>, faces: Vec<Vec<Side>>) -> Result<Self> {
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= vertices || v >= vertices {
                return Err(Error::BadComplex(format!("1-cell {i} has an endpoint out of range")));
            }
        }
        for (fi, face) in faces.iter().enumerate() {
            if face.is_empty() {
                return Err(Error::BadComplex(format!("2-cell {fi} has an empty boundary")));
            }
            let ends = |s: &Side| -> Result<(usize, usize)> {
                let &(t, h) =
                    edges.get(s.edge).ok_or_else(|| Error::BadComplex(format!("2-cell {fi} uses unknown 1-cell {}", s.edge)))?;
                Ok(if s.forward { (t, h) } else { (h, t) })
            };
            for k in 0..face.len() {
                let (_, end) = ends(&face[k])?;
                let (start, _) = ends(&face[(k + 1) % face.len()])?;
                if end != start {
                    return Err(Error::BadComplex(format!("boundary of 2-cell {fi} is not a closed walk")));
                }
            }
        }
        Ok(Self { vertices, edges, faces })
    }

    /// One 0-cell, one 1-cell.
    pub fn circle() -> Self {
        Self::wedge_of_circles(1)
    }

    pub fn wedge_of_circles(k: usize) -> Self {
        Self { vertices: 1, edges: vec![(0, 0); k], faces: Vec::new() }
    }

    /// Closed orientable surface of genus `g >= 1`: one 0-cell, `2g` 1-cells
    /// `a1, b1, ..., ag, bg`, one 2-cell along `[a1,b1]...[ag,bg]`.
    pub fn surface(genus: usize) -> Result<Self> {
        if genus == 0 {
            return Err(Error::BadComplex("genus must be at least 1".into()));
        }
        let mut word = Vec::with_capacity(4 * genus);
        for i in 0..genus {
            let (a, b) = (2 * i, 2 * i + 1);
            word.push(Side { edge: a, forward: true });
            word.push(Side { edge: b, forward: true });
            word.push(Side { edge: a, forward: false });
            word.push(Side { edge: b, forward: false });
        }
        Self::new(1, vec![(0, 0); 2 * genus], vec![word])
    }

    pub fn torus() -> Self {
        Self::surface(1).expect("genus 1")
    }

    /// A single filled triangle.
    pub fn triangle() -> Self {
        let faces = vec![vec![
            Side { edge: 0, forward: true },
            Side { edge: 1, forward: true },
            Side { edge: 2, forward: true },
        ]];
        Self::new(3, vec![(0, 1), (1, 2), (2, 0)], faces).expect("closed walk")
    }

    /// The 1-dimensional complex of a graph.
    pub fn from_graph(g: &RootedGraph) -> Self {
        Self { vertices: g.vertex_count(), edges: g.edges().iter().map(|e| (e.u, e.v)).collect(), faces: Vec::new() }
    }

    pub fn dimension(&self) -> usize {
        if !self.faces.is_empty() {
            2
        } else if !self.edges.is_empty() {
            1
        } else {
            0
        }
    }

    /// Number of `k`-cells.
    pub fn cell_count(&self, k: usize) -> usize {
        match k {
            0 => self.vertices,
            1 => self.edges.len(),
            2 => self.faces.len(),
            _ => 0,
        }
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn faces(&self) -> &[Vec<Side>] {
        &self.faces
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Boundary map `C_k -> C_{k-1}` as a `cells(k-1) x cells(k)` matrix, for `k` in 1..=2.
    pub fn boundary(&self, k: usize) -> Result<IntMatrix> {
        match k {
            1 => {
                let mut d = IntMatrix::zeros(self.vertices, self.edges.len());
                for (j, &(t, h)) in self.edges.iter().enumerate() {
                    d.add(h, j, 1);
                    d.add(t, j, -1);
                }
                Ok(d)
            }
            2 => {
                let mut d = IntMatrix::zeros(self.edges.len(), self.faces.len());
                for (j, face) in self.faces.iter().enumerate() {
                    for s in face {
                        d.add(s.edge, j, if s.forward { 1 } else { -1 });
                    }
                }
                Ok(d)
            }
            _ => Err(Error::DegreeOutOfRange { k, dim: 2 }),
        }
    }

    /// Number of connected components of the 1-skeleton.
    pub fn components(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut count = self.vertices;
        for &(u, v) in &self.edges {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a != b {
                parent[a] = b;
                count -= 1;
            }
        }
        count
    }
}

/// The `n`-sheeted cover of `base` determined by one permutation of the
/// sheets per 1-cell. Cells are `(cell, sheet)` with index `cell * n + sheet`;
/// the lift of 1-cell `e` on sheet `s` runs from `(tail, s)` to `(head, sigma_e(s))`.
pub fn build_cover(base: &CellComplex, assignment: &[Perm], n: usize) -> Result<CellComplex> {
    if n == 0 {
        return Err(Error::BadAssignment("cover degree must be positive".into()));
    }
    if assignment.len() != base.edges.len() {
        return Err(Error::BadAssignment(format!(
            "{} permutations for {} 1-cells",
            assignment.len(),
            base.edges.len()
        )));
    }
    for (i, p) in assignment.iter().enumerate() {
        if p.len() != n || !is_perm(p) {
            return Err(Error::BadAssignment(format!("entry {i} is not a permutation of {n} sheets")));
        }
    }
    let inverses: Vec<Perm> = assignment.iter().map(|p| invert(p)).collect();
    let step = |s: &Side| if s.forward { &assignment[s.edge] } else { &inverses[s.edge] };

    let mut edges = Vec::with_capacity(base.edges.len() * n);
    for (e, &(t, h)) in base.edges.iter().enumerate() {
        for s in 0..n {
            edges.push((t * n + s, h * n + assignment[e][s] as usize));
        }
    }
    let mut faces = Vec::with_capacity(base.faces.len() * n);
    for (fi, face) in base.faces.iter().enumerate() {
        let monodromy = face.iter().fold(identity_perm(n), |acc, s| compose(&acc, step(s)));
        if monodromy != identity_perm(n) {
            return Err(Error::BadAssignment(format!("boundary of 2-cell {fi} does not lift to closed loops")));
        }
        for start in 0..n {
            let mut sheet = start;
            let mut word = Vec::with_capacity(face.len());
            for side in face {
                let next = step(side)[sheet] as usize;
                // traversing edge e backwards from sheet s uses the lift starting on sigma_e^{-1}(s)
                let lift_sheet = if side.forward { sheet } else { next };
                word.push(Side { edge: side.edge * n + lift_sheet, forward: side.forward });
                sheet = next;
            }
            faces.push(word);
        }
    }
    CellComplex::new(base.vertices * n, edges, faces)
}

/// Orbit of sheet 0 under the group generated by the assignment.
pub fn assignment_is_transitive(assignment: &[Perm], n: usize) -> bool {
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0usize];
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for p in assignment {
            for y in [p[x] as usize, p.iter().position(|&v| v as usize == x).expect("bijection")] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
    }
    count == n
}

/// `[a1,b1][a2,b2]...` as a left-to-right product of permutations.
pub fn surface_relator(assignment: &[Perm], n: usize) -> Perm {
    let mut acc = identity_perm(n);
    for pair in assignment.chunks(2) {
        let (a, b) = (&pair[0], &pair[1]);
        for p in [a.clone(), b.clone(), invert(a), invert(b)] {
            acc = compose(&acc, &p);
        }
    }
    acc
}

/// Transitive permutation assignments of degree `n` for the genus-`g` surface,
/// found by deterministic search in lexicographic order. Returns the first one.
pub fn surface_cover_assignment(genus: usize, n: usize) -> Option<Vec<Perm>> {
    let perms = all_perms(n);
    let k = 2 * genus;
    let mut idx = vec![0usize; k];
    loop {
        let assignment: Vec<Perm> = idx.iter().map(|&i| perms[i].clone()).collect();
        if assignment_is_transitive(&assignment, n) && surface_relator(&assignment, n) == identity_perm(n) {
            return Some(assignment);
        }
        // odometer
        let mut pos = k;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < perms.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

fn all_perms(n: usize) -> Vec<Perm> {
    fn rec(cur: &mut Perm, used: &mut [bool], out: &mut Vec<Perm>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i as u32);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// The `n x n` cyclic cover of the torus: sheets are `Z/n x Z/n`, `a` shifts
/// the first coordinate and `b` the second.
pub fn torus_grid_assignment(n: usize) -> Vec<Perm> {
    let idx = |i: usize, j: usize| (i * n + j) as u32;
    let a = (0..n * n).map(|s| idx((s / n + 1) % n, s % n)).collect();
    let b = (0..n * n).map(|s| idx(s / n, (s % n + 1) % n)).collect();
    vec![a, b]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::perm::random_perm;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn boundaries_compose_to_zero(c: &CellComplex) -> bool {
        c.boundary(1).unwrap().mul(&c.boundary(2).unwrap()).is_zero()
    }

    #[test]
    fn standard_complexes() {
        assert_eq!(CellComplex::circle().euler_characteristic(), 0);
        assert_eq!(CellComplex::torus().euler_characteristic(), 0);
        assert_eq!(CellComplex::surface(2).unwrap().euler_characteristic(), -2);
        assert_eq!(CellComplex::triangle().euler_characteristic(), 1);
        for c in [CellComplex::torus(), CellComplex::surface(3).unwrap(), CellComplex::triangle()] {
            assert!(boundaries_compose_to_zero(&c));
        }
        assert!(matches!(
            CellComplex::new(2, vec![(0, 1)], vec![vec![Side { edge: 0, forward: true }]]),
            Err(Error::BadComplex(_))
        ));
        assert!(matches!(CellComplex::torus().boundary(3), Err(Error::DegreeOutOfRange { k: 3, .. })));
    }

    #[test]
    fn trivial_cover_is_isomorphic() {
        let base = CellComplex::surface(2).unwrap();
        let cover = build_cover(&base, &vec![vec![0]; 4], 1).unwrap();
        assert_eq!(cover, base);
    }

    #[test]
    fn circle_double_cover() {
        let cover = build_cover(&CellComplex::circle(), &[vec![1, 0]], 2).unwrap();
        assert_eq!(cover.cell_count(0), 2);
        assert_eq!(cover.cell_count(1), 2);
        assert_eq!(cover.euler_characteristic(), 0);
        assert_eq!(cover.components(), 1);
    }

    #[test]
    fn genus_two_triple_cover() {
        let base = CellComplex::surface(2).unwrap();
        let assignment = surface_cover_assignment(2, 3).expect("transitive degree-3 cover exists");
        let cover = build_cover(&base, &assignment, 3).unwrap();
        // direct cell count
        let chi = cover.cell_count(0) as i64 - cover.cell_count(1) as i64 + cover.cell_count(2) as i64;
        assert_eq!(chi, -6);
        assert_eq!(chi, 3 * base.euler_characteristic());
        assert!(boundaries_compose_to_zero(&cover));
        assert_eq!(cover.components(), 1);
    }

    #[test]
    fn inconsistent_face_rejected() {
        let base = CellComplex::torus();
        // a and b do not commute
        let bad = vec![vec![1, 0, 2], vec![0, 2, 1]];
        assert!(matches!(build_cover(&base, &bad, 3), Err(Error::BadAssignment(_))));
        assert!(matches!(build_cover(&base, &[vec![0]], 1), Err(Error::BadAssignment(_))));
        assert!(matches!(build_cover(&base, &[vec![0, 0], vec![0, 1]], 2), Err(Error::BadAssignment(_))));
    }

    #[test]
    fn torus_grid_cover_is_connected_torus() {
        for n in 1..5 {
            let cover = build_cover(&CellComplex::torus(), &torus_grid_assignment(n), n * n).unwrap();
            assert_eq!(cover.euler_characteristic(), 0);
            assert_eq!(cover.components(), 1);
            assert!(boundaries_compose_to_zero(&cover));
        }
    }

    proptest! {
        #[test]
        fn wedge_cover_invariants(seed in any::<u64>(), n in 1usize..40) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let base = CellComplex::wedge_of_circles(2);
            let assignment = vec![random_perm(n, &mut rng), random_perm(n, &mut rng)];
            let cover = build_cover(&base, &assignment, n).unwrap();
            prop_assert_eq!(cover.euler_characteristic(), n as i64 * base.euler_characteristic());
            prop_assert_eq!(cover.components() == 1, assignment_is_transitive(&assignment, n));
        }

        #[test]
        fn torus_cover_boundaries_vanish(seed in any::<u64>(), n in 1usize..6) {
            // commuting pair: powers of one random permutation
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_perm(n, &mut rng);
            let b = compose(&a, &a);
            let cover = build_cover(&CellComplex::torus(), &[a, b], n).unwrap();
            prop_assert!(boundaries_compose_to_zero(&cover));
            prop_assert_eq!(cover.cell_count(2), n);
        }
    }
}
