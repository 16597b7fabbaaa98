//! Mahler measures of monic integer polynomials, censuses of polynomials of
//! bounded measure, and torsion growth of cyclic covers through resultants.
//!
//! Polynomials are stored with ascending coefficients; text and CSV forms
//! list them leading coefficient first.

use std::collections::HashSet;
use std::fmt;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use faer::Mat;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};

/// Largest census degree.
pub const MAX_CENSUS_DEGREE: usize = 10;
/// Largest coefficient box a census will enumerate.
pub const MAX_CENSUS_BOX: f64 = 2e9;
/// Slack on the measure threshold.
pub const MEASURE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    /// From ascending coefficients; zero high-order terms are dropped.
    pub fn new(mut ascending: Vec<i64>) -> Result<Self> {
        while ascending.last() == Some(&0) {
            ascending.pop();
        }
        match ascending.last() {
            None => Err(Error::ZeroPolynomial),
            Some(1) => Ok(Self { coeffs: ascending }),
            Some(_) => Err(Error::NotMonic),
        }
    }

    /// From coefficients listed leading first.
    pub fn from_descending(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().rev().copied().collect())
    }

    /// Leading-first, space-separated integers.
    pub fn parse(text: &str) -> Result<Self> {
        let c: Vec<i64> = text
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse { line: 1, msg: format!("bad coefficient {t:?}") }))
            .collect::<Result<_>>()?;
        Self::from_descending(&c)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Ascending coefficients.
    pub fn coefficients(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn descending(&self) -> Vec<i64> {
        self.coeffs.iter().rev().copied().collect()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::zero(), |acc, &c| acc * z + c as f64)
    }

    fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::zero();
        let mut dp = Complex64::zero();
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c as f64;
        }
        (p, dp)
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        let mut c = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        IntPolynomial { coeffs: c }
    }

    /// `x^n p(1/x)`, negated if needed to be monic. Requires the constant
    /// term to be `±1`.
    pub fn reciprocal(&self) -> Result<IntPolynomial> {
        let c0 = self.coeffs[0];
        if c0.abs() != 1 {
            return Err(Error::NotMonic);
        }
        IntPolynomial::new(self.coeffs.iter().rev().map(|&c| c * c0).collect())
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.descending().iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// All complex roots with multiplicity. Each squarefree part is solved
/// separately (companion eigenvalues polished by Newton steps that decrease
/// `|q|`), so every root is found as a simple root.
pub fn roots(p: &IntPolynomial) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(p.degree());
    for q in squarefree_parts(p)? {
        out.extend(simple_roots(&q)?);
    }
    Ok(out)
}

/// Squarefree factors `q_1, q_2, ...` with `p = q_1 q_2 ...`: `q_1 = p / gcd(p, p')`,
/// then recursively on the gcd.
pub fn squarefree_parts(p: &IntPolynomial) -> Result<Vec<IntPolynomial>> {
    let mut parts = Vec::new();
    let mut cur: Vec<BigInt> = p.coeffs.iter().map(|&c| BigInt::from(c)).collect();
    while cur.len() > 1 {
        let deriv: Vec<BigInt> = cur.iter().enumerate().skip(1).map(|(i, c)| c * i).collect();
        let g = poly_gcd(cur.clone(), deriv);
        // g divides a monic polynomial and is primitive with positive lead, so it is monic
        let q = div_monic(&cur, &g);
        parts.push(to_int_poly(&q)?);
        cur = g;
    }
    Ok(parts)
}

fn to_int_poly(c: &[BigInt]) -> Result<IntPolynomial> {
    let v: Option<Vec<i64>> = c.iter().map(|x| x.to_i64()).collect();
    let v = v.ok_or_else(|| domain("polynomial", "factor coefficients exceed i64"))?;
    IntPolynomial::new(v)
}

fn trim(a: &mut Vec<BigInt>) {
    while a.len() > 1 && a.last().is_some_and(|x| x.is_zero()) {
        a.pop();
    }
}

fn primitive(mut a: Vec<BigInt>) -> Vec<BigInt> {
    trim(&mut a);
    let content = a.iter().fold(BigInt::zero(), |g, x| num_integer::Integer::gcd(&g, x));
    if content.is_zero() {
        return a;
    }
    let sign = if a.last().expect("nonempty").is_negative() { -BigInt::one() } else { BigInt::one() };
    a.iter().map(|x| x / &content * &sign).collect()
}

// Primitive pseudo-remainder sequence over Z; the result is primitive with
// positive leading coefficient.
fn poly_gcd(a: Vec<BigInt>, b: Vec<BigInt>) -> Vec<BigInt> {
    let (mut a, mut b) = (primitive(a), primitive(b));
    while !(b.len() == 1 && b[0].is_zero()) {
        let r = pseudo_remainder(&a, &b);
        a = b;
        b = primitive(r);
    }
    primitive(a)
}

fn pseudo_remainder(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let lb = b.last().expect("nonempty").clone();
    while r.len() >= b.len() && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - b.len();
        let lr = r.last().expect("nonempty").clone();
        for x in r.iter_mut() {
            *x *= &lb;
        }
        for (i, y) in b.iter().enumerate() {
            r[i + shift] -= &lr * y;
        }
        r.pop();
        trim(&mut r);
        if r.is_empty() {
            r.push(BigInt::zero());
        }
    }
    r
}

// Exact quotient a / b for monic b dividing a.
fn div_monic(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].clone();
        for (i, y) in b.iter().enumerate() {
            r[k + i] -= &c * y;
        }
        q[k] = c;
    }
    debug_assert!(r.iter().all(|x| x.is_zero()));
    q
}

fn simple_roots(p: &IntPolynomial) -> Result<Vec<Complex64>> {
    let zeros = p.coeffs.iter().take_while(|&&c| c == 0).count();
    let c = &p.coeffs[zeros..];
    let d = c.len() - 1;
    let mut out = vec![Complex64::zero(); zeros];
    if d == 0 {
        return Ok(out);
    }
    let comp = Mat::<f64>::from_fn(d, d, |i, j| {
        if j == d - 1 {
            -(c[i] as f64)
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let ev = comp.eigenvalues().map_err(|_| Error::NoConvergence)?;
    for z in ev {
        let mut z = Complex64::new(z.re, z.im);
        for _ in 0..3 {
            let (v, dv) = p.eval_with_derivative(z);
            if dv.norm() == 0.0 || v.norm() == 0.0 {
                break;
            }
            let next = z - v / dv;
            if p.eval(next).norm() < v.norm() {
                z = next;
            } else {
                break;
            }
        }
        out.push(z);
    }
    Ok(out)
}

/// `m(p) = prod max(1, |alpha_i|)`. Values within `1e-4` of 1 are settled by
/// the exact Kronecker test.
pub fn mahler_measure(p: &IntPolynomial) -> Result<f64> {
    let m: f64 = roots(p)?.iter().map(|z| z.norm().max(1.0)).product();
    if (m - 1.0).abs() < 1e-4 && is_kronecker(p) {
        return Ok(1.0);
    }
    Ok(m.max(1.0))
}

/// Exact test for all roots in the closed unit disc (equivalently
/// `m(p) = 1`): the Graeffe iterates of such a polynomial stay inside the
/// finite box `|a_i| <= C(d, i)` and so eventually repeat, while any root
/// outside the disc makes them leave the box.
pub fn is_kronecker(p: &IntPolynomial) -> bool {
    let zeros = p.coeffs.iter().take_while(|&&c| c == 0).count();
    let c = &p.coeffs[zeros..];
    if c[0].abs() != 1 {
        return false;
    }
    let d = c.len() - 1;
    let bounds: Vec<BigInt> = (0..=d).map(|i| BigInt::from(binomial(d, i))).collect();
    let mut q: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
    let mut seen = HashSet::new();
    loop {
        if q.iter().zip(&bounds).any(|(a, b)| a.abs() > *b) {
            return false;
        }
        if !seen.insert(q.clone()) {
            return true;
        }
        q = graeffe_big(&q);
    }
}

// Graeffe step on ascending coefficients: q(x^2) = (-1)^n p(x) p(-x).
fn graeffe_big(c: &[BigInt]) -> Vec<BigInt> {
    let n = c.len() - 1;
    let mut q = vec![BigInt::zero(); n + 1];
    for i in 0..=n {
        for j in 0..=n {
            if (i + j) % 2 == 0 {
                let term = &c[i] * &c[j];
                // p(x)p(-x) carries (-1)^j on c_j
                if j % 2 == 0 {
                    q[(i + j) / 2] += term;
                } else {
                    q[(i + j) / 2] -= term;
                }
            }
        }
    }
    if n % 2 == 1 {
        for x in &mut q {
            *x = -x.clone();
        }
    }
    q
}

fn graeffe_i64(c: &[i64], out: &mut [i64]) -> Option<()> {
    let n = c.len() - 1;
    out.iter_mut().for_each(|x| *x = 0);
    for i in 0..=n {
        for j in (i % 2..=n).step_by(2) {
            let term = c[i].checked_mul(c[j])?;
            let k = (i + j) / 2;
            out[k] = if j % 2 == 0 { out[k].checked_add(term)? } else { out[k].checked_sub(term)? };
        }
    }
    if n % 2 == 1 {
        out.iter_mut().for_each(|x| *x = -*x);
    }
    Some(())
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CensusQuery {
    degree: usize,
    theta: f64,
}

impl CensusQuery {
    /// `theta = 1` is accepted: it enumerates the Kronecker polynomials.
    pub fn new(degree: usize, theta: f64) -> Result<Self> {
        if degree == 0 || degree > MAX_CENSUS_DEGREE {
            return Err(Error::CensusGuard(format!("degree {degree} outside 1..={MAX_CENSUS_DEGREE}")));
        }
        if !(theta >= 1.0 && theta.is_finite()) {
            return Err(domain("theta", format!("{theta} must be at least 1")));
        }
        let q = Self { degree, theta };
        let size = q.box_size();
        if size > MAX_CENSUS_BOX {
            return Err(Error::CensusGuard(format!("coefficient box has {size:.3e} points")));
        }
        Ok(q)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `B_i = floor(C(n, i) theta)` bounding the coefficient of `x^(n-i)`, for `i = 1..=n`.
    pub fn coefficient_box(&self) -> Vec<i64> {
        (1..=self.degree)
            .map(|i| (binomial(self.degree, i) as f64 * (self.theta + MEASURE_TOL)).floor() as i64)
            .collect()
    }

    pub fn box_size(&self) -> f64 {
        self.coefficient_box().iter().map(|&b| (2 * b + 1) as f64).product()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CensusEntry {
    pub polynomial: IntPolynomial,
    pub measure: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Census {
    pub query: CensusQuery,
    /// In lexicographic order of the leading-first coefficients.
    pub entries: Vec<CensusEntry>,
}

impl Census {
    pub fn count(&self) -> usize {
        self.entries.len()
    }

    /// Smallest measure exceeding `1 + 1e-9`.
    pub fn min_m_above_1(&self) -> Option<f64> {
        self.entries.iter().map(|e| e.measure).filter(|&m| m > 1.0 + MEASURE_TOL).min_by(f64::total_cmp)
    }
}

/// Count bound `theta^(n (1 + 16 log log n / log n))`, defined for `n >= 3`.
pub fn dubickas_konyagin_bound(n: usize, theta: f64) -> Option<f64> {
    if n < 3 {
        return None;
    }
    let l = (n as f64).ln();
    Some(theta.powf(n as f64 * (1.0 + 16.0 * l.ln() / l)))
}

const GRAEFFE_STEPS: usize = 5;

// Rigorous lower bound: |e_i(roots of G_k p)| <= C(n, i) m(p)^(2^k), so any
// coefficient of the k-th Graeffe iterate above C(n, i) theta^(2^k)
// certifies m(p) > theta.
struct GraeffeFilter {
    limits: Vec<Vec<i64>>,
    cur: Vec<i64>,
    next: Vec<i64>,
}

impl GraeffeFilter {
    fn new(n: usize, theta: f64) -> Self {
        let limits = (1..=GRAEFFE_STEPS)
            .map(|k| {
                let power = (theta + MEASURE_TOL).powi(1 << k) * (1.0 + 1e-12);
                (0..=n).map(|i| (binomial(n, i) as f64 * power).floor().min(i64::MAX as f64 / 4.0) as i64).collect()
            })
            .collect();
        Self { limits, cur: vec![0; n + 1], next: vec![0; n + 1] }
    }

    fn rejects(&mut self, asc: &[i64]) -> bool {
        self.cur.copy_from_slice(asc);
        for lim in &self.limits {
            if graeffe_i64(&self.cur, &mut self.next).is_none() {
                return false;
            }
            std::mem::swap(&mut self.cur, &mut self.next);
            if self.cur.iter().zip(lim).any(|(c, &l)| c.unsigned_abs() > l as u64) {
                return true;
            }
        }
        false
    }
}

struct Scan<'a> {
    n: usize,
    bounds: &'a [i64],
    power_limits: &'a [f64],
    limit: f64,
    desc: Vec<i64>,
    power: Vec<i64>,
    asc: Vec<i64>,
    filter: GraeffeFilter,
    out: Vec<CensusEntry>,
}

impl Scan<'_> {
    // Set a_k = value, then recurse over a_{k+1}.
    fn descend(&mut self, k: usize, value: i64) -> Result<()> {
        self.desc[k] = value;
        // Newton: p_k = -(a_1 p_{k-1} + ... + a_{k-1} p_1) - k a_k
        let mut pk = -(k as i64) * value;
        for j in 1..k {
            pk -= self.desc[j] * self.power[k - j];
        }
        if pk.unsigned_abs() as f64 > self.power_limits[k] {
            return Ok(());
        }
        self.power[k] = pk;
        if k == self.n {
            return self.leaf();
        }
        let b = self.bounds[k];
        for v in -b..=b {
            self.descend(k + 1, v)?;
        }
        Ok(())
    }

    fn leaf(&mut self) -> Result<()> {
        let n = self.n;
        for (k, &c) in self.desc.iter().enumerate() {
            self.asc[n - k] = c;
        }
        if self.filter.rejects(&self.asc) {
            return Ok(());
        }
        let p = IntPolynomial::from_descending(&self.desc)?;
        let m = mahler_measure(&p)?;
        if m <= self.limit {
            self.out.push(CensusEntry { polynomial: p, measure: m });
        }
        Ok(())
    }
}

/// Every monic integer polynomial of degree `n` with `m(p) <= theta`.
pub fn census(q: &CensusQuery) -> Result<Census> {
    let n = q.degree;
    let bounds = q.coefficient_box();
    let limit = q.theta + MEASURE_TOL;
    let first: Vec<i64> = (-bounds[0]..=bounds[0]).collect();
    let results: Vec<Mutex<Option<Result<Vec<CensusEntry>>>>> = first.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = std::thread::available_parallelism().map_or(1, |x| x.get()).min(first.len());

    // Power sums p_k = sum alpha_i^k depend on a_1..a_k only, and for
    // m(p) <= theta satisfy |p_k| <= n - 1 + theta^k (x + y <= xy + 1 for
    // x, y >= 1), which prunes prefixes of the box.
    let power_limits: Vec<f64> = (0..=n).map(|k| (n - 1) as f64 + limit.powi(k as i32) + 1e-9).collect();
    let scan = |a1: i64| -> Result<Vec<CensusEntry>> {
        let mut s = Scan {
            n,
            bounds: &bounds,
            power_limits: &power_limits,
            limit,
            desc: vec![0; n + 1],
            power: vec![0; n + 1],
            asc: vec![0; n + 1],
            filter: GraeffeFilter::new(n, q.theta),
            out: Vec::new(),
        };
        s.desc[0] = 1;
        s.descend(1, a1)?;
        Ok(s.out)
    };

    let work = || loop {
        let i = next.fetch_add(1, Ordering::Relaxed);
        if i >= first.len() {
            break;
        }
        *results[i].lock().expect("unpoisoned") = Some(scan(first[i]));
    };
    // inline when single-threaded; wasm32 cannot spawn
    if workers <= 1 {
        work();
    } else {
        std::thread::scope(|s| {
            for _ in 0..workers {
                s.spawn(work);
            }
        });
    }
    let mut entries = Vec::new();
    for r in results {
        entries.extend(r.into_inner().expect("unpoisoned").expect("every chunk scanned")?);
    }
    Ok(Census { query: *q, entries })
}

/// `Res(delta, t^n - 1) = prod over roots alpha of (alpha^n - 1)`, exactly:
/// the determinant of multiplication by `t^n - 1` on `Z[t]/(delta)`.
pub fn cyclic_resultant(delta: &IntPolynomial, n: usize) -> BigInt {
    let d = delta.degree();
    let mut r = power_of_t(delta, n);
    if d == 0 {
        return BigInt::one();
    }
    r[0] -= 1;
    multiplication_det(delta, &r)
}

// t^n reduced modulo the monic delta, ascending, length deg(delta).
fn power_of_t(delta: &IntPolynomial, n: usize) -> Vec<BigInt> {
    let d = delta.degree();
    let mut r = vec![BigInt::zero(); d];
    if d == 0 {
        return r;
    }
    r[0] = BigInt::one();
    for _ in 0..n {
        times_t(delta, &mut r);
    }
    r
}

// r <- t r mod delta, using t^d = -sum c_i t^i.
fn times_t(delta: &IntPolynomial, r: &mut [BigInt]) {
    let d = r.len();
    let top = r[d - 1].clone();
    for i in (1..d).rev() {
        r[i] = &r[i - 1] - &top * delta.coeffs[i];
    }
    r[0] = -(&top * delta.coeffs[0]);
}

fn multiplication_det(delta: &IntPolynomial, s: &[BigInt]) -> BigInt {
    let d = s.len();
    let mut cols = Vec::with_capacity(d);
    let mut col = s.to_vec();
    for _ in 0..d {
        cols.push(col.clone());
        times_t(delta, &mut col);
    }
    let mut a: Vec<Vec<BigInt>> = (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect();
    bareiss_det(&mut a)
}

fn bareiss_det(a: &mut [Vec<BigInt>]) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * prev
}

/// Natural log of `|x|` for `x != 0`, without overflowing `f64`.
pub fn ln_abs(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.abs().to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top: BigInt = x.abs() >> shift;
    top.to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthRow {
    pub n: usize,
    pub log_resultant: f64,
    pub a_n: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorsionGrowth {
    pub rows: Vec<GrowthRow>,
    /// `a_{n_max}`.
    pub limit_estimate: f64,
    pub log_mahler: f64,
    /// `max_n n |a_n - log m(delta)|`.
    pub empirical_k: f64,
}

/// `a_n = log|Res(delta, t^n - 1)| / n` for `n = 1..=n_max`.
pub fn torsion_growth_rate(delta: &IntPolynomial, n_max: usize) -> Result<TorsionGrowth> {
    if n_max == 0 {
        return Err(domain("n_max", "must be positive"));
    }
    let log_mahler = mahler_measure(delta)?.ln();
    let d = delta.degree();
    let mut rows = Vec::with_capacity(n_max);
    let mut r = power_of_t(delta, 0);
    for n in 1..=n_max {
        let res = if d == 0 {
            BigInt::one()
        } else {
            times_t(delta, &mut r);
            let mut s = r.clone();
            s[0] -= 1;
            multiplication_det(delta, &s)
        };
        if res.is_zero() {
            return Err(Error::CyclotomicVanishing(n));
        }
        let log_resultant = ln_abs(&res);
        rows.push(GrowthRow { n, log_resultant, a_n: log_resultant / n as f64 });
    }
    let empirical_k = rows.iter().map(|r| r.n as f64 * (r.a_n - log_mahler).abs()).fold(0.0, f64::max);
    Ok(TorsionGrowth { limit_estimate: rows[n_max - 1].a_n, rows, log_mahler, empirical_k })
}

/// CSV with columns `coefficients,mahler_measure`.
pub fn write_census_csv(c: &Census) -> String {
    let mut out = String::from("coefficients,mahler_measure\n");
    for e in &c.entries {
        writeln!(out, "{},{:.17e}", e.polynomial, e.measure).expect("string write");
    }
    out
}

/// CSV with columns `n,log_resultant,a_n`.
pub fn write_growth_csv(g: &TorsionGrowth) -> String {
    let mut out = String::from("n,log_resultant,a_n\n");
    for r in &g.rows {
        writeln!(out, "{},{:.17e},{:.17e}", r.n, r.log_resultant, r.a_n).expect("string write");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn poly(desc: &[i64]) -> IntPolynomial {
        IntPolynomial::from_descending(desc).unwrap()
    }

    const LEHMER: [i64; 11] = [1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1];

    #[test]
    fn construction() {
        assert_eq!(IntPolynomial::new(vec![]), Err(Error::ZeroPolynomial));
        assert_eq!(IntPolynomial::new(vec![0, 0]), Err(Error::ZeroPolynomial));
        assert_eq!(IntPolynomial::new(vec![1, 2]), Err(Error::NotMonic));
        let p = IntPolynomial::new(vec![-2, 1, 0]).unwrap();
        assert_eq!(p.degree(), 1);
        assert_eq!(p.to_string(), "1 -2");
        assert_eq!(IntPolynomial::parse("1 0 -1").unwrap(), poly(&[1, 0, -1]));
        assert!(IntPolynomial::parse("1 x").is_err());
    }

    #[test]
    fn measure_examples() {
        assert!((mahler_measure(&poly(&[1, -2])).unwrap() - 2.0).abs() < 1e-12);
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((mahler_measure(&poly(&[1, -1, -1])).unwrap() - golden).abs() < 1e-9);
        assert_eq!(mahler_measure(&poly(&[1])).unwrap(), 1.0);
        assert_eq!(mahler_measure(&poly(&[1, 0, 0])).unwrap(), 1.0);
    }

    // Lehmer's polynomial has a single root outside the unit circle, a real
    // root in (1.1, 1.3); bisection on p gives it independently.
    #[test]
    fn lehmer_measure_matches_bisection() {
        let p = poly(&LEHMER);
        let f = |x: f64| p.eval(Complex64::new(x, 0.0)).re;
        let (mut lo, mut hi) = (1.1, 1.3);
        assert!(f(lo) * f(hi) < 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(lo) * f(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let m = mahler_measure(&p).unwrap();
        assert!((m - lo).abs() < 1e-10, "{m} vs {lo}");
        assert!((m - 1.176280818).abs() < 1e-8);
    }

    #[test]
    fn kronecker_exact() {
        // cyclotomic products, with repeated factors and x
        for desc in [&[1, -1][..], &[1, 1, 1], &[1, 0, 1], &[1, -2, 1], &[1, 0, 0, 0, -1], &[1, 1, 1, 1, 1, 0]] {
            assert!(is_kronecker(&poly(desc)), "{desc:?}");
            assert_eq!(mahler_measure(&poly(desc)).unwrap(), 1.0);
        }
        for desc in [&LEHMER[..], &[1, -1, -1], &[1, 0, 2], &[1, -3, 1]] {
            assert!(!is_kronecker(&poly(desc)), "{desc:?}");
        }
        // every root of x^12 - 1 times x^5 - 1, expanded
        let p = poly(&[1, 0, 0, 0, 0, 0, 0, -1]).mul(&poly(&[1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1]));
        assert!(is_kronecker(&p));
    }

    #[test]
    fn squarefree_split() {
        // x (x - 1)^3 (x^2 + x + 1)^2
        let p = poly(&[1, -1]).mul(&poly(&[1, -1])).mul(&poly(&[1, -1])).mul(&poly(&[1, 0]));
        let p = p.mul(&poly(&[1, 1, 1])).mul(&poly(&[1, 1, 1]));
        let parts = squarefree_parts(&p).unwrap();
        let names: Vec<String> = parts.iter().map(|q| q.to_string()).collect();
        assert_eq!(names, ["1 0 0 -1 0", "1 0 0 -1", "1 -1"]);
        let rs = roots(&p).unwrap();
        assert_eq!(rs.len(), 8);
        assert!(rs.iter().all(|z| p.eval(*z).norm() < 1e-12));
        assert!(rs.iter().filter(|z| (*z - 1.0).norm() < 1e-12).count() == 3);
    }

    #[test]
    fn graeffe_squares_roots() {
        let p = poly(&[1, -3, 1]);
        let c: Vec<BigInt> = p.coefficients().iter().map(|&x| BigInt::from(x)).collect();
        let q = graeffe_big(&c);
        // roots phi^2, phi^-2 squared: x^2 - 7x + 1
        assert_eq!(q, vec![BigInt::from(1), BigInt::from(-7), BigInt::from(1)]);
        let mut out = vec![0i64; 3];
        graeffe_i64(&[1, -3, 1], &mut out).unwrap();
        assert_eq!(out, vec![1, -7, 1]);
    }

    #[test]
    fn small_censuses() {
        let c = census(&CensusQuery::new(1, 1.0).unwrap()).unwrap();
        let names: Vec<String> = c.entries.iter().map(|e| e.polynomial.to_string()).collect();
        assert_eq!(names, ["1 -1", "1 0", "1 1"]);
        assert_eq!(census(&CensusQuery::new(1, 2.0).unwrap()).unwrap().count(), 5);
        assert!(CensusQuery::new(11, 1.1).is_err());
        assert!(CensusQuery::new(2, 0.9).is_err());
        assert!(CensusQuery::new(10, 1.3).is_err());
    }

    fn quadratic_measure(b: i64, c: i64) -> f64 {
        let disc = (b * b - 4 * c) as f64;
        let roots = if disc >= 0.0 {
            let s = disc.sqrt();
            [(-b as f64 + s) / 2.0, (-b as f64 - s) / 2.0].map(f64::abs)
        } else {
            let r = (c as f64).sqrt();
            [r, r]
        };
        roots.iter().map(|r| r.max(1.0)).product()
    }

    // Wider box, closed-form roots, no prefilter.
    #[test]
    fn quadratic_census_matches_wide_oracle() {
        let theta = 1.5;
        let c = census(&CensusQuery::new(2, theta).unwrap()).unwrap();
        let mut oracle = Vec::new();
        let (b1, b2) = ((2.0 * 2.0 * theta) as i64, (2.0 * theta) as i64);
        for b in -b1..=b1 {
            for cc in -b2..=b2 {
                if quadratic_measure(b, cc) <= theta + MEASURE_TOL {
                    oracle.push(format!("1 {b} {cc}"));
                }
            }
        }
        let got: Vec<String> = c.entries.iter().map(|e| e.polynomial.to_string()).collect();
        assert_eq!(got, oracle);
    }

    #[test]
    fn cubic_census_matches_unfiltered_scan() {
        let q = CensusQuery::new(3, 1.4).unwrap();
        let fast = census(&q).unwrap();
        let bounds = q.coefficient_box();
        let mut slow = Vec::new();
        for a in -bounds[0]..=bounds[0] {
            for b in -bounds[1]..=bounds[1] {
                for c in -bounds[2]..=bounds[2] {
                    let p = poly(&[1, a, b, c]);
                    if mahler_measure(&p).unwrap() <= 1.4 + MEASURE_TOL {
                        slow.push(p);
                    }
                }
            }
        }
        let got: Vec<IntPolynomial> = fast.entries.into_iter().map(|e| e.polynomial).collect();
        assert_eq!(got, slow);
    }

    #[test]
    fn quartic_census_matches_unfiltered_scan() {
        let q = CensusQuery::new(4, 1.35).unwrap();
        let b = q.coefficient_box();
        let mut slow = Vec::new();
        for a in -b[0]..=b[0] {
            for c in -b[1]..=b[1] {
                for d in -b[2]..=b[2] {
                    for e in -b[3]..=b[3] {
                        let p = poly(&[1, a, c, d, e]);
                        if mahler_measure(&p).unwrap() <= 1.35 + MEASURE_TOL {
                            slow.push(p);
                        }
                    }
                }
            }
        }
        let got: Vec<IntPolynomial> = census(&q).unwrap().entries.into_iter().map(|e| e.polynomial).collect();
        assert_eq!(got, slow);
    }

    #[test]
    fn census_monotone_in_theta() {
        for n in 1..=4 {
            let mut prev = 0;
            for theta in [1.0, 1.1, 1.2, 1.3, 1.5, 1.8] {
                let c = census(&CensusQuery::new(n, theta).unwrap()).unwrap().count();
                assert!(c >= prev, "n {n} theta {theta}");
                prev = c;
            }
        }
    }

    #[test]
    fn measure_one_members_are_kronecker_rootwise() {
        let c = census(&CensusQuery::new(4, 1.75).unwrap()).unwrap();
        for e in c.entries.iter().filter(|e| (e.measure - 1.0).abs() < 1e-9) {
            assert!(roots(&e.polynomial).unwrap().iter().all(|z| z.norm() <= 1.0 + 1e-6), "{}", e.polynomial);
            let n = e.polynomial.degree();
            for (i, &a) in e.polynomial.descending().iter().enumerate() {
                assert!(a.unsigned_abs() as u128 <= binomial(n, i));
            }
        }
        // reducible members count: x (x^3 - x - 1) gives the plastic number
        let min = c.min_m_above_1().unwrap();
        assert!((min - 1.324_717_957_244_746).abs() < 1e-9, "{min}");
    }

    #[test]
    fn multiplicative_on_census_pairs() {
        let pool: Vec<IntPolynomial> = (1..=3)
            .flat_map(|n| census(&CensusQuery::new(n, 1.6).unwrap()).unwrap().entries)
            .map(|e| e.polynomial)
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let p = &pool[rng.gen_range(0..pool.len())];
            let q = &pool[rng.gen_range(0..pool.len())];
            let (mp, mq) = (mahler_measure(p).unwrap(), mahler_measure(q).unwrap());
            let mpq = mahler_measure(&p.mul(q)).unwrap();
            assert!((mpq - mp * mq).abs() <= 1e-8 * mp * mq, "{p} * {q}: {mpq} vs {}", mp * mq);
        }
    }

    proptest! {
        #[test]
        fn reciprocal_invariance(mid in proptest::collection::vec(-4i64..=4, 0..7), c0 in prop_oneof![Just(-1i64), Just(1)]) {
            let mut asc = vec![c0];
            asc.extend(mid);
            asc.push(1);
            let p = IntPolynomial::new(asc).unwrap();
            let r = p.reciprocal().unwrap();
            let (a, b) = (mahler_measure(&p).unwrap(), mahler_measure(&r).unwrap());
            prop_assert!((a - b).abs() <= 1e-9 * a, "{} vs {}: {} {}", p, r, a, b);
        }

        #[test]
        fn measure_at_least_constant_term(asc in proptest::collection::vec(-6i64..=6, 1..8)) {
            let mut asc = asc;
            asc.push(1);
            let p = IntPolynomial::new(asc).unwrap();
            let m = mahler_measure(&p).unwrap();
            prop_assert!(m >= 1.0 - 1e-10);
            prop_assert!(m >= p.coefficients()[0].abs() as f64 * (1.0 - 1e-9));
        }
    }

    #[test]
    fn dk_bound_domain() {
        assert!(dubickas_konyagin_bound(2, 1.3).is_none());
        let b = dubickas_konyagin_bound(3, 1.3).unwrap();
        let expo = 3.0 * (1.0 + 16.0 * 3f64.ln().ln() / 3f64.ln());
        assert!((b - 1.3f64.powf(expo)).abs() < 1e-12);
    }

    // Independent route: prod over n-th roots of unity of delta(zeta).
    #[test]
    fn resultant_matches_root_of_unity_product() {
        for desc in [&[1, -3, 1][..], &[1, -2], &[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1], &[1, 2, -5, 3]] {
            let p = poly(desc);
            for n in 1..=25 {
                let prod: Complex64 = (0..n)
                    .map(|j| p.eval(Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n as f64)))
                    .product();
                let exact = cyclic_resultant(&p, n).abs().to_f64().unwrap();
                assert!((exact - prod.norm()).abs() <= 1e-8 * exact.max(1.0), "{desc:?} n {n}: {exact} vs {prod}");
            }
        }
    }

    #[test]
    fn linear_closed_form() {
        let p = poly(&[1, -2]);
        for n in 1..=80 {
            let expect = (BigInt::one() << n) - 1;
            assert_eq!(cyclic_resultant(&p, n).abs(), expect);
        }
        let g = torsion_growth_rate(&p, 500).unwrap();
        assert!((g.limit_estimate - 2f64.ln()).abs() < 1e-3);
        assert!(g.empirical_k < 1.0);
    }

    #[test]
    fn growth_rates() {
        let p = poly(&[1, -3, 1]);
        let g = torsion_growth_rate(&p, 500).unwrap();
        let target = ((3.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((g.limit_estimate - target).abs() < 1e-3);
        assert!((g.log_mahler - target).abs() < 1e-12);
        assert_eq!(g.rows.len(), 500);
        assert!(g.rows.iter().all(|r| (r.a_n - target).abs() <= g.empirical_k / r.n as f64 + 1e-12));
    }

    #[test]
    fn cyclotomic_vanishing() {
        assert_eq!(torsion_growth_rate(&poly(&[1, -1]), 5), Err(Error::CyclotomicVanishing(1)));
        // x^2 + x + 1 divides t^3 - 1
        assert_eq!(torsion_growth_rate(&poly(&[1, 1, 1]), 5), Err(Error::CyclotomicVanishing(3)));
    }

    #[test]
    fn csv_output() {
        let c = census(&CensusQuery::new(1, 1.0).unwrap()).unwrap();
        assert!(write_census_csv(&c).starts_with("coefficients,mahler_measure\n1 -1,1.00000000000000000e0\n"));
        let g = torsion_growth_rate(&poly(&[1, -2]), 2).unwrap();
        let csv = write_growth_csv(&g);
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.starts_with("n,log_resultant,a_n\n1,0.00000000000000000e0,"));
    }

    #[test]
    fn big_log() {
        let x = BigInt::from(3).pow(2000);
        assert!((ln_abs(&x) - 2000.0 * 3f64.ln()).abs() < 1e-9);
        assert!((ln_abs(&BigInt::from(-7)) - 7f64.ln()).abs() < 1e-15);
    }
}
