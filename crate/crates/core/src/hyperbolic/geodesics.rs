//! Short closed geodesics on glued pants surfaces by bounded word enumeration.
//!
//! Words are enumerated inside windows: each pants on its own (free group on
//! `a_v, b_v`) and each pair of adjacent pants (free group on `h, c, g`, with
//! `c` the shared cuff, `<h, c>` one pants group and `<c, g>` the other).
//! Within a window the basis is free, so conjugacy classes are cyclic words
//! up to rotation and inversion. A class crosses the shared cuff iff its
//! cyclically reduced word uses both `h` and `g`.

use std::fmt::Write as _;

use super::mobius::{inv, length_from_trace, mul, trace, M2};
use super::pants::{PantsSurface, Slot};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeodesicKind {
    /// The cuff of an internal edge.
    InternalCuff(usize),
    /// A free cuff.
    BoundaryCuff(usize),
    /// Non-peripheral, contained in one pants.
    Pants(usize),
    /// Crosses the cuff of an internal edge once through both adjacent pants.
    Crossing(usize),
}

impl GeodesicKind {
    pub fn is_cuff(&self) -> bool {
        matches!(self, Self::InternalCuff(_) | Self::BoundaryCuff(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShortGeodesic {
    pub word: String,
    pub length: f64,
    pub kind: GeodesicKind,
}

/// Options for [`short_geodesics`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicSearch {
    pub word_length_bound: usize,
    pub cutoff: f64,
    /// Word bound inside two-pants windows; defaults to `word_length_bound`.
    pub crossing_word_bound: Option<usize>,
}

/// Half-width of the embedded collar around a geodesic of length `l`.
pub fn collar_width(l: f64) -> f64 {
    (1.0 / (l / 2.0).sinh()).asinh()
}

/// Lower bound on a geodesic arc through a pants whose cuff lengths lie in
/// `[l, l + 1]`: `min((l - 1) / 2, sinh(1 / sinh(l)))`.
pub fn pants_crossing_lower_bound(l: f64) -> f64 {
    ((l - 1.0) / 2.0).min((1.0 / l.sinh()).sinh())
}

// Letters: 2k is generator k, 2k + 1 its inverse.
fn inverse_letter(x: u8) -> u8 {
    x ^ 1
}

fn is_proper_power(w: &[u8]) -> bool {
    let n = w.len();
    (1..n).filter(|p| n % p == 0).any(|p| (p..n).all(|i| w[i] == w[i - p]))
}

fn min_rotation(w: &[u8]) -> Vec<u8> {
    (0..w.len()).map(|r| [&w[r..], &w[..r]].concat()).min().expect("nonempty")
}

/// Canonical representative of a cyclic word up to rotation and inversion.
pub(crate) fn canonical_cyclic(w: &[u8]) -> Vec<u8> {
    let inverse: Vec<u8> = w.iter().rev().map(|&x| inverse_letter(x)).collect();
    min_rotation(w).min(min_rotation(&inverse))
}

/// Primitive, cyclically reduced words of length `<= max_len` in canonical
/// form whose translation length is below `cutoff`.
fn enumerate(gens: &[M2], max_len: usize, cutoff: f64, keep: &dyn Fn(&[u8]) -> bool) -> Vec<(Vec<u8>, f64)> {
    let mut letters: Vec<M2> = Vec::with_capacity(2 * gens.len());
    for g in gens {
        letters.push(*g);
        letters.push(inv(g));
    }
    let mut out = Vec::new();
    let mut word: Vec<u8> = Vec::with_capacity(max_len);
    let mut prefix: Vec<M2> = Vec::with_capacity(max_len);
    fn dfs(
        letters: &[M2],
        max_len: usize,
        cutoff: f64,
        keep: &dyn Fn(&[u8]) -> bool,
        word: &mut Vec<u8>,
        prefix: &mut Vec<M2>,
        out: &mut Vec<(Vec<u8>, f64)>,
    ) {
        let k = word.len();
        if k > 0 && word[k - 1] != inverse_letter(word[0]) {
            let len = length_from_trace(trace(&prefix[k - 1]));
            if len < cutoff && len > 0.0 && !is_proper_power(word) && canonical_cyclic(word) == *word && keep(word) {
                out.push((word.clone(), len));
            }
        }
        if k == max_len {
            return;
        }
        for (x, m) in letters.iter().enumerate() {
            let x = x as u8;
            if k > 0 && word[k - 1] == inverse_letter(x) {
                continue;
            }
            let p = if k == 0 { *m } else { mul(&prefix[k - 1], m) };
            word.push(x);
            prefix.push(p);
            dfs(letters, max_len, cutoff, keep, word, prefix, out);
            word.pop();
            prefix.pop();
        }
    }
    dfs(&letters, max_len, cutoff, keep, &mut word, &mut prefix, &mut out);
    out
}

fn render(word: &[u8], names: &[Vec<(String, bool)>]) -> String {
    let mut s = String::new();
    for &x in word {
        let parts = &names[(x / 2) as usize];
        let inverse = x % 2 == 1;
        let seq: Vec<&(String, bool)> = if inverse { parts.iter().rev().collect() } else { parts.iter().collect() };
        for (name, flip) in seq {
            let upper = flip ^ inverse;
            if upper {
                s.push_str(&name.to_uppercase());
            } else {
                s.push_str(name);
            }
        }
    }
    s
}

// Global spelling of each local cuff: slot 0 = a, slot 1 = b, slot 2 = (ab)^-1 = BA.
fn cuff_spelling(v: usize, slot: usize) -> Vec<(String, bool)> {
    match slot {
        0 => vec![(format!("a{v}"), false)],
        1 => vec![(format!("b{v}"), false)],
        _ => vec![(format!("b{v}"), true), (format!("a{v}"), true)],
    }
}

/// Closed geodesics shorter than `cutoff` among windowed words of bounded
/// length, sorted by length.
///
/// Complete only relative to the word bound and the windows. Geodesics that
/// cross an internal cuff traverse its collar, so their length is at least
/// `2 * collar_width(l_c)`; when the cutoff is below that for every internal
/// cuff the two-pants windows are skipped.
pub fn short_geodesics(surface: &PantsSurface, search: GeodesicSearch) -> Vec<ShortGeodesic> {
    let tree = surface.tree();
    let coords = surface.coordinates();
    let cutoff = search.cutoff;
    let mut found: Vec<ShortGeodesic> = Vec::new();
    if search.word_length_bound == 0 || cutoff <= 0.0 {
        return found;
    }
    let mut internal_seen = vec![false; tree.edges().len()];
    for v in 0..tree.pants_count() {
        let [x, y, _] = surface.local_pants(v);
        let names = vec![cuff_spelling(v, 0), cuff_spelling(v, 1)];
        let slot_of = |w: &[u8]| -> Option<usize> {
            match w {
                [0] => Some(0),
                [2] => Some(1),
                _ if canonical_cyclic(w) == canonical_cyclic(&[0, 2]) => Some(2),
                _ => None,
            }
        };
        for (w, len) in enumerate(&[x, y], search.word_length_bound, cutoff, &|_| true) {
            let kind = match slot_of(&w) {
                Some(s) => match tree.slots(v)[s] {
                    Slot::Internal(e) => {
                        if internal_seen[e] {
                            continue;
                        }
                        internal_seen[e] = true;
                        GeodesicKind::InternalCuff(e)
                    }
                    Slot::Boundary(b) => GeodesicKind::BoundaryCuff(b),
                },
                None => GeodesicKind::Pants(v),
            };
            let word = match slot_of(&w) {
                Some(s) => render(&[0], &[cuff_spelling(v, s)]),
                None => render(&w, &names),
            };
            found.push(ShortGeodesic { word, length: len, kind });
        }
    }

    let collar_bound = coords.lengths.iter().map(|&l| 2.0 * collar_width(l)).fold(f64::INFINITY, f64::min);
    if cutoff > collar_bound {
        let bound = search.crossing_word_bound.unwrap_or(search.word_length_bound);
        for (k, e) in tree.edges().iter().enumerate() {
            let pu = surface.local_pants(e.u);
            let pv = surface.local_pants(e.v);
            let c = pu[e.i];
            let h_slot = if e.i == 0 { 1 } else { 0 };
            let g_slot = if e.j == 0 { 1 } else { 0 };
            let h = pu[h_slot];
            // pants v brought into the frame of pants u
            let s = coords.twists[k] * coords.lengths[k];
            let step = mul(
                &mul(
                    &mul(&inv(&surface.normalizer(e.u, e.i)), &[(s / 2.0).exp(), 0.0, 0.0, (-s / 2.0).exp()]),
                    &[0.0, 1.0, -1.0, 0.0],
                ),
                &surface.normalizer(e.v, e.j),
            );
            let g = mul(&mul(&step, &pv[g_slot]), &inv(&step));
            let names = vec![cuff_spelling(e.u, h_slot), cuff_spelling(e.u, e.i), cuff_spelling(e.v, g_slot)];
            // letters 0/1 = h, 2/3 = c, 4/5 = g
            let crossing = |w: &[u8]| w.iter().any(|&x| x / 2 == 0) && w.iter().any(|&x| x / 2 == 2);
            for (w, len) in enumerate(&[h, c, g], bound, cutoff, &crossing) {
                found.push(ShortGeodesic { word: render(&w, &names), length: len, kind: GeodesicKind::Crossing(k) });
            }
        }
    }
    found.sort_by(|a, b| a.length.total_cmp(&b.length).then_with(|| a.word.cmp(&b.word)));
    found
}

/// CSV `word,length`.
pub fn write_geodesics_csv(geodesics: &[ShortGeodesic]) -> String {
    let mut out = String::from("word,length\n");
    for g in geodesics {
        writeln!(out, "{},{:.17e}", g.word, g.length).expect("string write");
    }
    out
}
