//! Degree 4 → 3 elimination over `k = F_{q^{2^i}}`.
//!
//! Polynomials `f = Σ a_ij x_i^q x_j` (`i, j ∈ {0, 1, 2}`) map to
//! `Φ = Σ a_ij s_i t_j` with `t = (1, x, y)` and `s = t ∘ τ_Q`; at `𝓘`,
//! `s(P_𝓘) = t(P_𝓘)^q`, so `Φ` agrees with `f(1, x, y)` there. Asking `Φ`
//! to vanish on the four points of `D` cuts a hyperplane `H` (four linear
//! conditions) in the nine coefficients. Polynomials of `H` that split into
//! linear forms are found through the plane curve `C′` of lines `t`: a point
//! of `C′` determines `f` by linear algebra, and every linear factor of `f`
//! then lies on the line `{u : u·t = 0}`, so splitting `f` reduces to
//! factoring a binary form of degree `q + 1`.

use std::sync::Arc;

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::algebra::linalg::{self, Matrix};
use crate::algebra::poly::{self, Poly};
use crate::algebra::{factor, Fe, Field, Tower};
use crate::curve::{Curve, Pt};
use crate::divisor::{translate, Divisor, Func};
use crate::elim32::split_roots;
use crate::error::{Error, Result};
use crate::leveled;
use crate::model::Model;
use crate::policy::Policy;
use crate::relation::{Relation, RelationKind};
use crate::rng::Rng;

/// The six ways to pick two of the four points, in the fixed order
/// `(D₃,D₄), (D₂,D₃), (D₂,D₄), (D₁,D₄), (D₁,D₃), (D₁,D₂)` (zero-based).
pub const PAIRS: [(usize, usize); 6] = [(2, 3), (1, 2), (1, 3), (0, 3), (0, 2), (0, 1)];

/// Aligned triples of `V`-points forced by the construction (zero-based
/// indices into [`PAIRS`]).
pub const EXPECTED_V_ALIGNED: [[usize; 3]; 4] = [[0, 1, 2], [0, 3, 4], [1, 4, 5], [2, 3, 5]];

/// Aligned triples of `U`-points forced by the construction.
pub const EXPECTED_U_ALIGNED: [[usize; 3]; 4] = [[0, 1, 4], [0, 2, 3], [1, 2, 5], [3, 4, 5]];

/// Projective coordinates `(1 : x : y)`, or `(0 : 0 : 1)` for `0_E`.
pub fn proj(l: &Field, pt: &Pt) -> [Fe; 3] {
    if pt.inf {
        [Fe::ZERO, Fe::ZERO, l.one()]
    } else {
        [l.one(), pt.x, pt.y]
    }
}

/// Coefficients `(l₀, l₁, l₂)` of the line `l₀ + l₁x + l₂y` through `R` and
/// `S` (the tangent when they coincide).
pub fn line_through(c: &Curve, l: &Field, r: &Pt, s: &Pt) -> [Fe; 3] {
    if r != s {
        return linalg::cross(l, &proj(l, r), &proj(l, s));
    }
    if r.inf {
        return [l.one(), Fe::ZERO, Fe::ZERO];
    }
    let [a1, a2, a3, a4, _] = c.coeffs(l);
    // Gradient of y² + a₁xy + a₃y − x³ − a₂x² − a₄x − a₆.
    let gx = l.sub(
        &l.sub(&l.mul(&a1, &r.y), &l.scale(&l.sqr(&r.x), 3)),
        &l.add(&l.scale(&l.mul(&a2, &r.x), 2), &a4),
    );
    let gy = l.add(&l.add(&l.scale(&r.y, 2), &l.mul(&a1, &r.x)), &a3);
    let g0 = l.neg(&l.add(&l.mul(&gx, &r.x), &l.mul(&gy, &r.y)));
    [g0, gx, gy]
}

fn det3(l: &Field, a: &[Fe; 3], b: &[Fe; 3], c: &[Fe; 3]) -> Fe {
    linalg::dot(l, a, &linalg::cross(l, b, c))
}

fn frob3(l: &Field, v: &[Fe; 3], j: i64) -> [Fe; 3] {
    [l.frob(&v[0], j), l.frob(&v[1], j), l.frob(&v[2], j)]
}

/// Four distinct finite points of `D` avoiding `−Q`, in the splitting field.
fn usable_points(m: &Model, d: &Divisor) -> Result<(Arc<Field>, Vec<Pt>)> {
    let c = &m.curve;
    if d.degree() != 4 || !d.is_effective() {
        return Err(Error::Params("4-to-3 input must be effective of degree 4".into()));
    }
    let (l, pts) = d.expand(c);
    let mq = c.neg(&l, &m.q_in(&l));
    if pts.iter().any(|p| p.inf || *p == mq) {
        return Err(Error::Degenerate("divisor meets the base locus {0_E, -Q}".into()));
    }
    for i in 0..4 {
        for j in 0..i {
            if pts[i] == pts[j] {
                return Err(Error::Degenerate("divisor has a repeated point".into()));
            }
        }
    }
    Ok((l, pts))
}

/// Rows `s_i(D_j)·t_l(D_j)` of the vanishing conditions, over `l`.
fn condition_rows(m: &Model, l: &Field, pts: &[Pt]) -> Matrix {
    let c = &m.curve;
    let ql = m.q_in(l);
    pts.iter()
        .map(|p| {
            let s = proj(l, &c.add(l, p, &ql));
            let t = proj(l, p);
            let mut row = Vec::with_capacity(9);
            for si in &s {
                for tj in &t {
                    row.push(l.mul(si, tj));
                }
            }
            row
        })
        .collect()
}

/// The hyperplane `H` as a reduced 4×9 matrix over `k`.
pub fn hyperplane_from_divisor(m: &Model, d: &Divisor) -> Result<Matrix> {
    let (l, pts) = usable_points(m, d)?;
    let mut rows = condition_rows(m, &l, &pts);
    let piv = linalg::rref(&l, &mut rows);
    if piv.len() != 4 {
        return Err(Error::Degenerate(format!("hyperplane conditions have rank {}", piv.len())));
    }
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|v| l.restrict_to(d.base, v))
                .collect::<Option<Vec<Fe>>>()
                .ok_or_else(|| Error::Internal("hyperplane is not defined over k".into()))
        })
        .collect()
}

/// `Φ = Σ a_ij s_i t_j` over `k`, with `a` indexed by `3i + j`.
pub fn phi43(m: &Model, k: &Field, a: &[Fe; 9]) -> Func {
    let c = &m.curve;
    let (xq, yq) = translate(c, k, &m.q_in(k));
    let s = [Func::one(k), xq, yq];
    let t = [Func::one(k), Func::x(k), Func::y(k)];
    let mut out = Func::zero(k);
    for i in 0..3 {
        let mut inner = Func::zero(k);
        for j in 0..3 {
            if !a[3 * i + j].is_zero() {
                inner = inner.add(c, k, &t[j].scale(k, &a[3 * i + j]));
            }
        }
        if !inner.is_zero() {
            out = out.add(c, k, &s[i].mul(c, k, &inner));
        }
    }
    out
}

/// `f(x) = Σ a_ij x_i^q x_j` at a point of `k³`.
pub fn eval_f(k: &Field, r: usize, a: &[Fe; 9], x: &[Fe; 3]) -> Fe {
    let mut acc = Fe::ZERO;
    for i in 0..3 {
        let xq = k.frob(&x[i], r as i64);
        for j in 0..3 {
            acc = k.add(&acc, &k.mul(&a[3 * i + j], &k.mul(&xq, &x[j])));
        }
    }
    acc
}

fn embed_rows(f: &Field, from: usize, h: &Matrix) -> Matrix {
    h.iter().map(|r| r.iter().map(|v| f.embed_from(from, v)).collect()).collect()
}

/// The 9×9 matrix whose determinant defines `C′` at `t = (t₀, t₁, t₂)`:
/// rows `f₀, f₁` (coefficients of `Σ_i a_ik t_i^q`), `e₀, e₁, e₂`
/// (coefficients of `Σ_j a_kj t_j`) and the four rows of `H`.
fn cprime_matrix(f: &Field, r: usize, h: &Matrix, t: &[Fe; 3]) -> Matrix {
    let tq = frob3(f, t, r as i64);
    let mut mat = Vec::with_capacity(9);
    for kk in 0..2 {
        let mut row = vec![Fe::ZERO; 9];
        for i in 0..3 {
            row[3 * i + kk] = tq[i];
        }
        mat.push(row);
    }
    for kk in 0..3 {
        let mut row = vec![Fe::ZERO; 9];
        for j in 0..3 {
            row[3 * kk + j] = t[j];
        }
        mat.push(row);
    }
    mat.extend(h.iter().cloned());
    mat
}

/// The equation of `C′` on the line `t₀ = const`, `t₂ = 1`, as a polynomial
/// in `t₁` over `k` (degree at most `2q + 2`), by interpolation.
pub fn cprime_poly(m: &Model, k: &Field, h: &Matrix, t0: &Fe) -> Poly {
    let q = m.q() as usize;
    let need = 2 * q + 4;
    let tower = Tower::get(m.p());
    let mut deg = k.degree();
    while Tower::get(m.p()).field(deg).order().map_or(false, |o| o < need as u128) {
        deg *= 2;
    }
    let f = tower.field(deg);
    let hf = embed_rows(&f, k.degree(), h);
    let t0f = f.embed_from(k.degree(), t0);
    let xs: Vec<Fe> = (0..need as u128).map(|i| f.from_index(i)).collect();
    let ys: Vec<Fe> = xs
        .iter()
        .map(|t1| linalg::det(&f, &cprime_matrix(&f, m.r(), &hf, &[t0f, *t1, f.one()])))
        .collect();
    let g = poly::interpolate(&f, &xs, &ys);
    poly::trimmed(poly::restrict(&f, k.degree(), &g).expect("C' equation is defined over k"))
}

/// Points `(t₀ : t₁ : 1)` of `C′(k)` with the given `t₀`.
pub fn cprime_points(m: &Model, k: &Field, h: &Matrix, t0: &Fe) -> Vec<[Fe; 3]> {
    let g = cprime_poly(m, k, h, t0);
    if g.is_empty() {
        return Vec::new();
    }
    factor::distinct_roots(k, &g).into_iter().map(|t1| [*t0, t1, k.one()]).collect()
}

/// The polynomial `f ∈ H` attached to the point `t` of `C′`: the solution of
/// `e₀ = e₁ = e₂ = f₀ = f₁ = f₂ = 0` in `H`. `None` unless the solution is a
/// single projective point.
pub fn lift_to_f(m: &Model, k: &Field, h: &Matrix, t: &[Fe; 3]) -> Option<[Fe; 9]> {
    let r = m.r();
    let tq = frob3(k, t, r as i64);
    let mut rows: Matrix = Vec::with_capacity(10);
    for kk in 0..3 {
        let mut row = vec![Fe::ZERO; 9];
        for j in 0..3 {
            row[3 * kk + j] = t[j];
        }
        rows.push(row);
    }
    for kk in 0..3 {
        let mut row = vec![Fe::ZERO; 9];
        for i in 0..3 {
            row[3 * i + kk] = tq[i];
        }
        rows.push(row);
    }
    rows.extend(h.iter().cloned());
    let ker = linalg::kernel(k, &rows, 9);
    if ker.len() != 1 {
        return None;
    }
    let mut a = [Fe::ZERO; 9];
    a.copy_from_slice(&ker[0]);
    Some(a)
}

/// Basis `(A, B)` of the linear forms vanishing at `t`, and the first two
/// columns `(c₀, c₁)` of the inverse of the matrix with rows `A, B, C`.
fn line_frame(k: &Field, t: &[Fe; 3]) -> Option<([Fe; 3], [Fe; 3], [Fe; 3], [Fe; 3])> {
    let ker = linalg::kernel(k, &[t.to_vec()], 3);
    if ker.len() != 2 {
        return None;
    }
    let a: [Fe; 3] = [ker[0][0], ker[0][1], ker[0][2]];
    let b: [Fe; 3] = [ker[1][0], ker[1][1], ker[1][2]];
    for e in 0..3 {
        let mut cvec = [Fe::ZERO; 3];
        cvec[e] = k.one();
        let mat = vec![a.to_vec(), b.to_vec(), cvec.to_vec()];
        if linalg::det(k, &mat).is_zero() {
            continue;
        }
        let c0 = linalg::solve(k, &mat, &[k.one(), Fe::ZERO, Fe::ZERO])?;
        let c1 = linalg::solve(k, &mat, &[Fe::ZERO, k.one(), Fe::ZERO])?;
        return Some((a, b, [c0[0], c0[1], c0[2]], [c1[0], c1[1], c1[2]]));
    }
    None
}

/// Splits `f` into `q + 1` linear forms lying on the line `t`, or `None`
/// when its restriction to the line does not split with at least three
/// distinct factors.
pub fn split_on_line(m: &Model, k: &Field, a: &[Fe; 9], t: &[Fe; 3]) -> Option<Vec<[Fe; 3]>> {
    let r = m.r() as i64;
    let q = m.q() as usize;
    let (fa, fb, c0, c1) = line_frame(k, t)?;
    let coef = |u: &[Fe; 3], v: &[Fe; 3]| {
        let mut acc = Fe::ZERO;
        for i in 0..3 {
            let uq = k.frob(&u[i], r);
            for j in 0..3 {
                acc = k.add(&acc, &k.mul(&a[3 * i + j], &k.mul(&uq, &v[j])));
            }
        }
        acc
    };
    // Binary form A'X^{q+1} + B'X^qY + C'XY^q + D'Y^{q+1}.
    let form = [coef(&c0, &c0), coef(&c0, &c1), coef(&c1, &c0), coef(&c1, &c1)];
    let roots = split_roots(k, q, &form)?;
    Some(
        roots
            .iter()
            .map(|root| match root {
                Some(rho) => [
                    k.sub(&fa[0], &k.mul(rho, &fb[0])),
                    k.sub(&fa[1], &k.mul(rho, &fb[1])),
                    k.sub(&fa[2], &k.mul(rho, &fb[2])),
                ],
                None => fb,
            })
            .collect(),
    )
}

/// `ψ(L) = l₀ + l₁x + l₂y`.
pub fn psi_of(k: &Field, l: &[Fe; 3]) -> Func {
    Func::poly(k, poly::trimmed(vec![l[0], l[1]]), poly::trimmed(vec![l[2]]))
}

/// Scalar `κ` with `f = κ·∏ L_i`, checked at two random points.
fn product_scale(m: &Model, k: &Field, a: &[Fe; 9], forms: &[[Fe; 3]], rng: &mut Rng) -> Option<Fe> {
    let mut found: Option<Fe> = None;
    let mut tries = 0;
    let mut agree = 0;
    while agree < 2 {
        tries += 1;
        if tries > 64 {
            return None;
        }
        let x = [k.random(rng), k.random(rng), k.random(rng)];
        let prod = forms.iter().fold(k.one(), |acc, l| k.mul(&acc, &linalg::dot(k, l, &x)));
        if prod.is_zero() {
            continue;
        }
        let s = k.div(&eval_f(k, m.r(), a, &x), &prod);
        match found {
            None => found = Some(s),
            Some(prev) if prev != s => return None,
            _ => {}
        }
        agree += 1;
    }
    found.filter(|s| !s.is_zero())
}

/// The relation attached to `f` split into `forms`.
pub fn relation_from(
    m: &Model,
    level: usize,
    d: &Divisor,
    a: &[Fe; 9],
    forms: &[[Fe; 3]],
    rng: &mut Rng,
) -> Result<Relation> {
    let k = m.level_field(level);
    let scale = product_scale(m, &k, a, forms, rng)
        .ok_or_else(|| Error::Degenerate("f is not the product of its line factors".into()))?;
    let phi = phi43(m, &k, a);
    let factors = forms.iter().map(|l| psi_of(&k, l)).collect();
    Relation::assemble(m, &k, RelationKind::Elim43, level, d.clone(), phi, factors, scale)
}

/// Candidate values of `t₀`: random draws, then (or only) all of `k` in a
/// shuffled order when `k` is small.
struct T0Source {
    random: bool,
    listed: Option<std::vec::IntoIter<Fe>>,
    fallback: bool,
}

impl T0Source {
    fn new(k: &Field, policy: &Policy, budget: u64) -> T0Source {
        let order = k.order();
        let small = order.map_or(false, |o| o <= policy.exhaustive_bound as u128);
        let direct = small && order.map_or(false, |o| o <= budget as u128);
        T0Source { random: !direct, listed: None, fallback: small }
    }

    fn next(&mut self, k: &Field, rng: &mut Rng, exhausted: bool) -> Option<Fe> {
        if self.random && !exhausted {
            return Some(k.random(rng));
        }
        if self.listed.is_none() && self.fallback {
            self.fallback = false;
            let mut all: Vec<Fe> = (0..k.order()?).map(|i| k.from_index(i)).collect();
            all.shuffle(rng);
            self.listed = Some(all.into_iter());
        }
        self.listed.as_mut()?.next()
    }
}

/// Samples points of `C′` until one yields a split `f`; returns the number
/// of `C′` points used and the split. `None` after `max` points.
pub fn first_split43(
    m: &Model,
    level: usize,
    d: &Divisor,
    rng: &mut Rng,
    max: u64,
) -> Result<Option<(u64, [Fe; 9], Vec<[Fe; 3]>)>> {
    let k = m.level_field(level);
    let h = hyperplane_from_divisor(m, d)?;
    let mut samples = 0;
    while samples < max {
        let t0 = k.random(rng);
        for t in cprime_points(m, &k, &h, &t0) {
            samples += 1;
            let Some(a) = lift_to_f(m, &k, &h, &t) else { continue };
            if let Some(forms) = split_on_line(m, &k, &a, &t) {
                return Ok(Some((samples, a, forms)));
            }
        }
    }
    Ok(None)
}

/// Eliminates `D` (effective, degree 4 over level `level`), keeping the
/// first relation that `accept` approves. Returns it with the number of
/// `C′` points examined.
pub fn eliminate43_with(
    m: &Model,
    level: usize,
    d: &Divisor,
    rng: &mut Rng,
    policy: &Policy,
    accept: &mut dyn FnMut(&Relation) -> bool,
) -> Result<(Relation, u64)> {
    let k = m.level_field(level);
    if d.base != k.degree() {
        return Err(Error::Params("4-to-3 input is over the wrong field".into()));
    }
    let report = trap4_check(m, d, level, policy);
    if report.is_trap() {
        return Err(Error::Degenerate(format!("4-to-3 input is a trap: {report:?}")));
    }
    let h = hyperplane_from_divisor(m, d)?;
    let budget = policy.trials(m.q());
    let mut source = T0Source::new(&k, policy, budget);
    let mut samples = 0u64;
    while let Some(t0) = source.next(&k, rng, samples >= budget) {
        for t in cprime_points(m, &k, &h, &t0) {
            samples += 1;
            let Some(a) = lift_to_f(m, &k, &h, &t) else { continue };
            let Some(forms) = split_on_line(m, &k, &a, &t) else { continue };
            let Ok(rel) = relation_from(m, level, d, &a, &forms, rng) else { continue };
            if accept(&rel) {
                return Ok((rel, samples));
            }
        }
    }
    Err(Error::Budget(format!("no acceptable 4-to-3 relation after {samples} C' points")))
}

/// Eliminates `D` accepting the first split.
pub fn try_eliminate43(m: &Model, level: usize, d: &Divisor, rng: &mut Rng, policy: &Policy) -> Result<Relation> {
    eliminate43_with(m, level, d, rng, policy, &mut |_| true).map(|(r, _)| r)
}

/// The linear forms of one exceptional point `(V)^q·U`: `U` is the line
/// through one pair of points and `V^{(q)}` the line through the
/// `Q`-translates of the other two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalPair {
    pub u: [Fe; 3],
    pub v: [Fe; 3],
    pub vq: [Fe; 3],
}

impl ExceptionalPair {
    /// Coefficients `a_ij = v_i^q u_j` of the exceptional polynomial.
    pub fn coefficients(&self, l: &Field) -> [Fe; 9] {
        let mut a = [Fe::ZERO; 9];
        for i in 0..3 {
            for j in 0..3 {
                a[3 * i + j] = l.mul(&self.vq[i], &self.u[j]);
            }
        }
        a
    }

    /// The line of `P(Λ)` through `U` and `V`, as a point of `C′`.
    pub fn line(&self, l: &Field) -> [Fe; 3] {
        linalg::cross(l, &self.u, &self.v)
    }
}

#[derive(Clone, Debug)]
pub struct PairsReport {
    pub field: Arc<Field>,
    pub pairs: Vec<ExceptionalPair>,
    /// Aligned triples among the `U` points.
    pub u_aligned: Vec<[usize; 3]>,
    /// Aligned triples among the `V` points.
    pub v_aligned: Vec<[usize; 3]>,
}

impl PairsReport {
    /// Exactly the eight forced alignments and no others.
    pub fn alignments_as_expected(&self) -> bool {
        self.u_aligned == EXPECTED_U_ALIGNED.to_vec() && self.v_aligned == EXPECTED_V_ALIGNED.to_vec()
    }
}

fn pairs_in(m: &Model, l: &Field, pts: &[Pt]) -> Vec<ExceptionalPair> {
    let c = &m.curve;
    let ql = m.q_in(l);
    let shifted: Vec<Pt> = pts.iter().map(|p| c.add(l, p, &ql)).collect();
    PAIRS
        .iter()
        .map(|&(j, kk)| {
            let rest: Vec<usize> = (0..4).filter(|&i| i != j && i != kk).collect();
            let u = line_through(c, l, &pts[j], &pts[kk]);
            let vq = line_through(c, l, &shifted[rest[0]], &shifted[rest[1]]);
            let v = frob3(l, &vq, -(m.r() as i64));
            ExceptionalPair { u, v, vq }
        })
        .collect()
}

fn aligned(l: &Field, vs: &[[Fe; 3]]) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..vs.len() {
        for b in a + 1..vs.len() {
            for c in b + 1..vs.len() {
                if det3(l, &vs[a], &vs[b], &vs[c]).is_zero() {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

/// The six exceptional pairs of `D` with their alignment report.
pub fn exceptional_pairs43(m: &Model, d: &Divisor) -> Result<PairsReport> {
    let (l, pts) = usable_points(m, d)?;
    let pairs = pairs_in(m, &l, &pts);
    let us: Vec<[Fe; 3]> = pairs.iter().map(|p| p.u).collect();
    let vs: Vec<[Fe; 3]> = pairs.iter().map(|p| p.v).collect();
    Ok(PairsReport { u_aligned: aligned(&l, &us), v_aligned: aligned(&l, &vs), field: l, pairs })
}

/// Membership of a degree-4 divisor in the trap sets.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Trap4Report {
    /// Two equal points.
    pub repeated: bool,
    /// A point at `0_E` or `−Q`.
    pub base_locus: bool,
    /// Three chords through a common point (no index common to all three).
    pub t0: bool,
    /// The same for the `Q`-translates.
    pub t1: bool,
    /// `ℓ(D_i,D_j)^{(q)}`, `ℓ(D_m,D_n)^{(q)}` and `ℓ(D_r+Q, D_s+Q)` concurrent.
    pub t2: bool,
    /// `ℓ(D_i+Q,D_j+Q)`, `ℓ(D_m+Q,D_n+Q)` and `ℓ(D_r,D_s)^{(q)}` concurrent.
    pub t3: bool,
    /// Three of the points sum to `0_E`.
    pub t4: bool,
    /// The exceptional-point condition holds at all six pairs (`None` when
    /// not evaluated).
    pub t5: Option<bool>,
    /// Every pair lies in the leveled set `T₄(i)` (`None` when not evaluated).
    pub leveled: Option<bool>,
}

impl Trap4Report {
    pub fn is_trap(&self) -> bool {
        self.repeated
            || self.base_locus
            || self.t0
            || self.t1
            || self.t2
            || self.t3
            || self.t4
            || self.t5 == Some(true)
            || self.leveled == Some(true)
    }
}

/// `D₁₁·D₁₂^q − D₁₁^q·D₂₁` at each exceptional pair after moving `V` to
/// `x₀` and `U` to `x₁`; `D` is in the set when it vanishes at all six
/// (a singular pivot block counts as vanishing).
pub fn t45_member(m: &Model, l: &Field, pts: &[Pt]) -> bool {
    let c = &m.curve;
    let r = m.r() as i64;
    let ql = m.q_in(l);
    let pairs = pairs_in(m, l, pts);
    pairs.iter().all(|pair| {
        let mut frame = None;
        for e in [2usize, 1, 0] {
            let mut third = [Fe::ZERO; 3];
            third[e] = l.one();
            let mat = vec![pair.v.to_vec(), pair.u.to_vec(), third.to_vec()];
            if !linalg::det(l, &mat).is_zero() {
                frame = Some(mat);
                break;
            }
        }
        let Some(mat) = frame else { return true };
        let matq: Matrix = mat.iter().map(|row| row.iter().map(|v| l.frob(v, r)).collect()).collect();
        let mut h: Matrix = pts
            .iter()
            .map(|p| {
                let a = linalg::mat_vec(l, &mat, &proj(l, p));
                let b = linalg::mat_vec(l, &matq, &proj(l, &c.add(l, p, &ql)));
                let mut row = Vec::with_capacity(9);
                for bi in &b {
                    for al in &a {
                        row.push(l.mul(bi, al));
                    }
                }
                row
            })
            .collect();
        let cols = [0usize, 2, 3, 6];
        let block: Matrix = h.iter().map(|row| cols.iter().map(|&cc| row[cc]).collect()).collect();
        if linalg::det(l, &block).is_zero() {
            return true;
        }
        // Reduce so that the block becomes the identity.
        for (ri, &cc) in cols.iter().enumerate() {
            let piv = (ri..4).find(|&i| !h[i][cc].is_zero()).expect("nonsingular block");
            h.swap(ri, piv);
            let inv = l.inv(&h[ri][cc]);
            for v in h[ri].iter_mut() {
                *v = l.mul(v, &inv);
            }
            let prow = h[ri].clone();
            for (i, row) in h.iter_mut().enumerate() {
                if i != ri && !row[cc].is_zero() {
                    let s = row[cc];
                    for (x, y) in row.iter_mut().zip(&prow) {
                        *x = l.sub(x, &l.mul(&s, y));
                    }
                }
            }
        }
        let (d11, d12, d21) = (h[3][4], h[3][5], h[3][7]);
        let lhs = l.mul(&d11, &l.frob(&d12, r));
        let rhs = l.mul(&l.frob(&d11, r), &d21);
        lhs == rhs
    })
}

/// The point and line conditions `𝒯₄⁰`–`𝒯₄⁴`, plus `𝒯₄⁵` when `strict`,
/// for four points in `l`.
pub fn trap4_base(m: &Model, l: &Field, pts: &[Pt], strict: bool) -> Trap4Report {
    assert_eq!(pts.len(), 4);
    let c = &m.curve;
    let r = m.r() as i64;
    let ql = m.q_in(l);
    let mq = c.neg(l, &ql);
    let mut rep = Trap4Report::default();
    for i in 0..4 {
        for j in 0..i {
            rep.repeated |= pts[i] == pts[j];
        }
    }
    rep.base_locus = pts.iter().any(|p| p.inf || *p == mq);
    let shifted: Vec<Pt> = pts.iter().map(|p| c.add(l, p, &ql)).collect();
    let all_pairs: Vec<(usize, usize)> = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).collect();
    let lines: Vec<[Fe; 3]> = all_pairs.iter().map(|&(i, j)| line_through(c, l, &pts[i], &pts[j])).collect();
    let lines_q: Vec<[Fe; 3]> = all_pairs
        .iter()
        .map(|&(i, j)| line_through(c, l, &shifted[i], &shifted[j]))
        .collect();
    let frob_lines: Vec<[Fe; 3]> = lines.iter().map(|v| frob3(l, v, r)).collect();
    let share = |a: (usize, usize), b: (usize, usize), cc: (usize, usize)| {
        (0..4).any(|x| [a, b, cc].iter().all(|p| p.0 == x || p.1 == x))
    };
    for a in 0..6 {
        for b in a + 1..6 {
            for cc in b + 1..6 {
                if share(all_pairs[a], all_pairs[b], all_pairs[cc]) {
                    continue;
                }
                rep.t0 |= det3(l, &lines[a], &lines[b], &lines[cc]).is_zero();
                rep.t1 |= det3(l, &lines_q[a], &lines_q[b], &lines_q[cc]).is_zero();
            }
        }
    }
    for a in 0..6 {
        for b in a + 1..6 {
            for cc in 0..6 {
                rep.t2 |= det3(l, &frob_lines[a], &frob_lines[b], &lines_q[cc]).is_zero();
                rep.t3 |= det3(l, &lines_q[a], &lines_q[b], &frob_lines[cc]).is_zero();
            }
        }
    }
    for skip in 0..4 {
        let mut s = Pt::O;
        for (i, p) in pts.iter().enumerate() {
            if i != skip {
                s = c.add(l, &s, p);
            }
        }
        rep.t4 |= s.inf;
    }
    if strict {
        rep.t5 = if rep.repeated || rep.base_locus { None } else { Some(t45_member(m, l, pts)) };
    }
    rep
}

/// Full trap report for `D` at level `i`; `𝒯₄⁵` and the leveled sets are
/// only evaluated under a strict policy.
pub fn trap4_check(m: &Model, d: &Divisor, level: usize, policy: &Policy) -> Trap4Report {
    let (l, pts) = d.expand(&m.curve);
    if pts.len() != 4 {
        return Trap4Report { repeated: true, ..Trap4Report::default() };
    }
    let mut rep = trap4_base(m, &l, &pts, policy.strict_traps);
    if policy.strict_traps {
        rep.leveled = Some(leveled::all_pairs_in_t4(m, &l, &pts, level, policy.c));
    }
    rep
}
