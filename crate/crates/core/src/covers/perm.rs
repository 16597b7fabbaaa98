use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::graphs::{Edge, EdgeLabel, RootedGraph};

/// Permutation of `{0..n}` in one-line notation (`p[i]` is the image of `i`).
pub type Perm = Vec<u32>;

pub fn identity_perm(n: usize) -> Perm {
    (0..n as u32).collect()
}

pub fn is_perm(p: &[u32]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        let x = x as usize;
        if x >= p.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

pub fn invert(p: &[u32]) -> Perm {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x as usize] = i as u32;
    }
    inv
}

/// `compose(p, q)` acts as `p` first, then `q`.
pub fn compose(p: &[u32], q: &[u32]) -> Perm {
    p.iter().map(|&x| q[x as usize]).collect()
}

/// Number of points fixed by `p`.
pub fn fixed_points(p: &[u32]) -> usize {
    p.iter().enumerate().filter(|&(i, &x)| i as u32 == x).count()
}

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn inv(self) -> Self {
        Self { generator: self.generator, inverse: !self.inverse }
    }
}

/// Word in the generators. Displays as `aBc` (uppercase = inverse).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All freely reduced words of length `1..=max_len` over `generators`
    /// generators, shortest first.
    pub fn reduced_words(generators: usize, max_len: usize) -> Vec<Word> {
        let letters: Vec<Letter> = (0..generators)
            .flat_map(|g| [Letter { generator: g, inverse: false }, Letter { generator: g, inverse: true }])
            .collect();
        let mut out = Vec::new();
        let mut layer: Vec<Word> = vec![Word::default()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for &l in &letters {
                    if w.0.last().is_some_and(|&last| last == l.inv()) {
                        continue;
                    }
                    let mut v = w.0.clone();
                    v.push(l);
                    next.push(Word(v));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for l in &self.0 {
            let base = if l.generator < 26 {
                (b'a' + l.generator as u8) as char
            } else {
                return write!(f, "?");
            };
            let c = if l.inverse { base.to_ascii_uppercase() } else { base };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Permutation representation of a finitely generated group on `{0..n}`,
/// with base point 0.
#[derive(Debug, Clone, PartialEq)]
pub struct PermRep {
    degree: usize,
    generators: Vec<Perm>,
    inverses: Vec<Perm>,
    transitive: bool,
}

impl PermRep {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::NotAPermutation("degree 0".into()));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.len() != degree || !is_perm(g) {
                return Err(Error::NotAPermutation(format!("generator {i} is not a permutation of 0..{degree}")));
            }
        }
        let inverses = generators.iter().map(|g| invert(g)).collect();
        let mut rep = Self { degree, generators, inverses, transitive: false };
        rep.transitive = rep.orbit_of_base().len() == degree;
        Ok(rep)
    }

    /// Regular representation of `Z/n` with the shift generator.
    pub fn cyclic_shift(n: usize) -> Self {
        let shift = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        Self::new(n, vec![shift]).expect("shift is a permutation")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn is_transitive(&self) -> bool {
        self.transitive
    }

    pub fn orbit_of_base(&self) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        seen[0] = true;
        let mut stack = vec![0usize];
        let mut orbit = vec![0usize];
        while let Some(x) = stack.pop() {
            for g in self.generators.iter().chain(&self.inverses) {
                let y = g[x] as usize;
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                    stack.push(y);
                }
            }
        }
        orbit
    }

    pub fn letter_perm(&self, l: Letter) -> &Perm {
        if l.inverse {
            &self.inverses[l.generator]
        } else {
            &self.generators[l.generator]
        }
    }

    /// Image of a word; letters act left to right.
    pub fn word_perm(&self, word: &Word) -> Perm {
        word.0
            .iter()
            .fold(identity_perm(self.degree), |acc, &l| compose(&acc, self.letter_perm(l)))
    }

    /// Number of points fixed by the image of `word`.
    pub fn fixed_points(&self, word: &Word) -> usize {
        fixed_points(&self.word_perm(word))
    }
}

/// Schreier graph: one labeled edge `p -> g(p)` per point and generator,
/// rooted at the base point.
pub fn schreier_graph(rep: &PermRep) -> Result<RootedGraph> {
    if rep.generators.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let mut edges = Vec::with_capacity(rep.degree * rep.generators.len());
    for (gi, g) in rep.generators.iter().enumerate() {
        for p in 0..rep.degree {
            edges.push(Edge {
                u: p,
                v: g[p] as usize,
                label: Some(EdgeLabel { generator: gi, inverse: false }),
            });
        }
    }
    RootedGraph::new(rep.degree, edges, 0)
}

/// Random permutation of `{0..n}`.
pub fn random_perm<R: rand::Rng>(n: usize, rng: &mut R) -> Perm {
    use rand::seq::SliceRandom;
    let mut p = identity_perm(n);
    p.shuffle(rng);
    p
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixityRow {
    pub word: Word,
    pub fix: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixityScan {
    pub index: usize,
    /// One row per distinct image, with the first (shortest) reduced word reaching it.
    pub rows: Vec<FixityRow>,
    pub max_ratio: f64,
    /// `max log(fix) / log(N)` over nontrivial images with at least one fixed point.
    pub max_exponent: f64,
}

/// Fixed-point counts of all images of reduced words of length `<= max_len`.
pub fn fixity_scan(rep: &PermRep, max_len: usize) -> Result<FixityScan> {
    if !rep.is_transitive() {
        return Err(Error::NotTransitive { orbit: rep.orbit_of_base().len(), degree: rep.degree });
    }
    let n = rep.degree;
    let mut seen: HashSet<Perm> = HashSet::new();
    seen.insert(identity_perm(n));
    let mut rows = Vec::new();
    let mut max_ratio: f64 = 0.0;
    let mut max_exponent: f64 = f64::NEG_INFINITY;
    for word in Word::reduced_words(rep.generators.len(), max_len) {
        let p = rep.word_perm(&word);
        if !seen.insert(p.clone()) {
            continue;
        }
        let fix = fixed_points(&p);
        max_ratio = max_ratio.max(fix as f64 / n as f64);
        if fix > 0 && n > 1 {
            max_exponent = max_exponent.max((fix as f64).ln() / (n as f64).ln());
        }
        rows.push(FixityRow { word, fix });
    }
    Ok(FixityScan { index: n, rows, max_ratio, max_exponent })
}

/// Parse a permutation assignment: one line per 1-cell, each a permutation
/// of `1..n` in one-line notation.
pub fn parse_assignment(text: &str) -> Result<Vec<Perm>> {
    let mut perms = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let p: Perm = line
            .split_whitespace()
            .map(|t| match t.parse::<u32>() {
                Ok(x) if x >= 1 => Ok(x - 1),
                _ => Err(Error::Parse { line: i + 1, msg: format!("bad point {t:?}") }),
            })
            .collect::<Result<_>>()?;
        if !is_perm(&p) {
            return Err(Error::Parse { line: i + 1, msg: "not a permutation".into() });
        }
        perms.push(p);
    }
    Ok(perms)
}

pub fn write_assignment(perms: &[Perm]) -> String {
    perms
        .iter()
        .map(|p| p.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(" ") + "\n")
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::girth;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn schreier_examples() {
        let bouquet = schreier_graph(&PermRep::new(1, vec![vec![0], vec![0]]).unwrap()).unwrap();
        assert_eq!(bouquet.vertex_count(), 1);
        assert_eq!(bouquet.edge_count(), 2);
        assert!(bouquet.edges().iter().all(|e| e.is_loop()));
        assert_eq!(bouquet.degree(0), 4);

        let c5 = schreier_graph(&PermRep::cyclic_shift(5)).unwrap();
        assert_eq!(girth(&c5), Some(5));
        assert!((0..5).all(|v| c5.degree(v) == 2));

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rep = PermRep::new(100, vec![random_perm(100, &mut rng), random_perm(100, &mut rng)]).unwrap();
        let g = schreier_graph(&rep).unwrap();
        let degree_sum: usize = (0..100).map(|v| g.degree(v)).sum();
        assert_eq!(degree_sum, 2 * g.edge_count());
        assert!((0..100).all(|v| g.degree(v) == 4));

        assert_eq!(schreier_graph(&PermRep::new(3, vec![]).unwrap()), Err(Error::EmptyGenerators));
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(PermRep::new(3, vec![vec![0, 0, 1]]).is_err());
        assert!(PermRep::new(3, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn transitivity_flag() {
        assert!(PermRep::cyclic_shift(7).is_transitive());
        let split = PermRep::new(4, vec![vec![1, 0, 3, 2]]).unwrap();
        assert!(!split.is_transitive());
        assert!(matches!(fixity_scan(&split, 3), Err(Error::NotTransitive { orbit: 2, degree: 4 })));
    }

    #[test]
    fn words_and_fixity() {
        let rep = PermRep::cyclic_shift(6);
        assert_eq!(rep.fixed_points(&Word::default()), 6);
        let words = Word::reduced_words(2, 3);
        assert_eq!(words.len(), 4 + 12 + 36);
        let scan = fixity_scan(&rep, 5).unwrap();
        // Z/6 acting regularly: every nontrivial element is fixed-point free
        assert_eq!(scan.rows.len(), 5);
        assert_eq!(scan.max_ratio, 0.0);
        assert_eq!(scan.rows[0].word.to_string(), "a");
    }

    #[test]
    fn assignment_text_round_trip() {
        let text = "2 3 1\n1 2 3\n";
        let perms = parse_assignment(text).unwrap();
        assert_eq!(perms, vec![vec![1, 2, 0], vec![0, 1, 2]]);
        assert_eq!(write_assignment(&perms), text);
        assert!(parse_assignment("1 1 2\n").is_err());
        assert!(parse_assignment("0 1\n").is_err());
    }
}
