//! Degree 3 → 2 elimination over `k = F_{q^{2^i}}`.
//!
//! For a point `P ∈ E(k)` write `T = Q + P^{(q)}`, `X_P = x∘τ_P` and
//! `X_T = x∘τ_T`. A polynomial `f = a₃x^{q+1} + a₂x^q + a₁x + a₀` maps to
//! `Φ = a₃·X_T·X_P + a₂·X_T + a₁·X_P + a₀`, which agrees with `f(X_P)` at
//! `𝓘` because `x(P_𝓘 + T) = x(P_𝓘 + P)^q`. Requiring `Φ` to vanish on the
//! three points of `D` is a 3×4 linear system in `(a₃, a₂, a₁, a₀)`; when
//! `f` then splits over `k`, `f(X_P)` is a product of `q + 1` functions
//! `X_P − r` whose divisors have degree 2.

use std::sync::Arc;

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::algebra::field::MAX_DEGREE;
use crate::algebra::linalg::{self, Matrix};
use crate::algebra::poly::{self, Poly};
use crate::algebra::{factor, int, Fe, Field, Tower};
use crate::curve::{isqrt, Pt};
use crate::divisor::{translate_x, Divisor, Func};
use crate::error::{Error, Result};
use crate::leveled;
use crate::model::Model;
use crate::policy::Policy;
use crate::relation::{Relation, RelationKind};
use crate::rng::Rng;

/// A point `(f, P)` of `X₀`: `a = (a₃, a₂, a₁, a₀)` over `k`, `P ∈ E(k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct X0Point {
    pub a: [Fe; 4],
    pub p: Pt,
}

/// `P` and `T = Q + P^{(q)}` for a point `P` over the subfield of degree
/// `from`, moved into `l`.
fn side_points(m: &Model, l: &Field, from: usize, p: &Pt) -> (Pt, Pt) {
    let c = &m.curve;
    let pl = c.embed(l, from, p);
    let t = c.add(l, &m.q_in(l), &c.frob(l, &pl, 1));
    (pl, t)
}

/// Whether `P` avoids the pole configuration: `D_i + P ≠ 0_E` and
/// `D_i + T ≠ 0_E` for every point of `D`.
fn admissible(m: &Model, l: &Field, pts: &[Pt], pl: &Pt, tl: &Pt) -> bool {
    let c = &m.curve;
    pts.iter().all(|d| !c.add(l, d, pl).inf && !c.add(l, d, tl).inf)
}

/// Rows `(u·v, v, u, 1)` with `u = x(D_i + P)` and `v = x(D_i + T)`.
fn x0_rows(m: &Model, l: &Field, pts: &[Pt], pl: &Pt, tl: &Pt) -> Matrix {
    let c = &m.curve;
    pts.iter()
        .map(|d| {
            let u = c.add(l, d, pl).x;
            let v = c.add(l, d, tl).x;
            vec![l.mul(&u, &v), v, u, l.one()]
        })
        .collect()
}

/// Dimension of the solution space of the `X₀` system for `(D, P)`. Fails
/// when `P` is in the pole configuration.
pub fn x0_kernel_dim(m: &Model, k: &Field, d: &Divisor, p: &Pt) -> Result<usize> {
    let (l, pts) = d.expand(&m.curve);
    let (pl, tl) = side_points(m, &l, k.degree(), p);
    if !admissible(m, &l, &pts, &pl, &tl) {
        return Err(Error::Degenerate("P meets the pole configuration of D".into()));
    }
    Ok(4 - linalg::rank(&l, &x0_rows(m, &l, &pts, &pl, &tl)))
}

/// The unique `f` with `(f, P) ∈ X₀`. The system is solved in the splitting
/// field of `D`; its reduced echelon form is Galois-stable, so the kernel
/// vector has coordinates in `k`.
pub fn x0_solve(m: &Model, k: &Field, d: &Divisor, p: &Pt) -> Result<X0Point> {
    let (l, pts) = d.expand(&m.curve);
    x0_solve_in(m, k, &l, &pts, p)
}

fn x0_solve_in(m: &Model, k: &Field, l: &Field, pts: &[Pt], p: &Pt) -> Result<X0Point> {
    let (pl, tl) = side_points(m, l, k.degree(), p);
    if !admissible(m, l, pts, &pl, &tl) {
        return Err(Error::Degenerate("P meets the pole configuration of D".into()));
    }
    let ker = linalg::kernel(l, &x0_rows(m, l, pts, &pl, &tl), 4);
    if ker.len() != 1 {
        return Err(Error::Degenerate(format!("X0 system has a {}-dimensional kernel", ker.len())));
    }
    let mut a = [Fe::ZERO; 4];
    for (dst, v) in a.iter_mut().zip(&ker[0]) {
        *dst = l
            .restrict_to(k.degree(), v)
            .ok_or_else(|| Error::Internal("X0 kernel vector is not defined over k".into()))?;
    }
    Ok(X0Point { a, p: *p })
}

/// `Φ = a₃·X_T·X_P + a₂·X_T + a₁·X_P + a₀` over `k`.
pub fn phi_p(m: &Model, k: &Field, a: &[Fe; 4], p: &Pt) -> Func {
    let c = &m.curve;
    let (_, t) = side_points(m, k, k.degree(), p);
    let xp = translate_x(c, k, p);
    let xt = translate_x(c, k, &t);
    let mut phi = xt.mul(c, k, &xp).scale(k, &a[0]);
    phi = phi.add(c, k, &xt.scale(k, &a[1]));
    phi = phi.add(c, k, &xp.scale(k, &a[2]));
    phi.add(c, k, &Func::constant(k, a[3]))
}

/// `f = a₃x^{q+1} + a₂x^q + a₁x + a₀` as a polynomial.
pub fn f_poly(q: usize, a: &[Fe; 4]) -> Poly {
    let mut f = vec![Fe::ZERO; q + 2];
    f[q + 1] = a[0];
    f[q] = a[1];
    f[1] = a[2];
    f[0] = a[3];
    poly::trimmed(f)
}

/// Roots of `f` on `P¹(k)` with multiplicity (`None` is the root at
/// infinity, of multiplicity `q + 1 − deg f`), when `f` splits completely
/// with at least three distinct roots.
pub fn split_roots(k: &Field, q: usize, a: &[Fe; 4]) -> Option<Vec<Option<Fe>>> {
    let f = f_poly(q, a);
    let deg = poly::degree(&f)?;
    if deg + 2 < q + 1 {
        return None;
    }
    let roots = factor::roots(k, &f);
    let total: usize = roots.iter().map(|(_, e)| e).sum();
    let at_inf = q + 1 - deg;
    if total != deg || roots.len() + usize::from(at_inf > 0) < 3 {
        return None;
    }
    let mut out = Vec::with_capacity(q + 1);
    for (r, e) in roots {
        out.extend(std::iter::repeat(Some(r)).take(e));
    }
    out.extend(std::iter::repeat(None).take(at_inf));
    Some(out)
}

/// The relation attached to a split `X₀` point.
pub fn relation_from(m: &Model, level: usize, d: &Divisor, x0: &X0Point, roots: &[Option<Fe>]) -> Result<Relation> {
    let k = m.level_field(level);
    let c = &m.curve;
    let phi = phi_p(m, &k, &x0.a, &x0.p);
    let xp = translate_x(c, &k, &x0.p);
    let factors: Vec<Func> = roots
        .iter()
        .flatten()
        .map(|r| xp.sub(c, &k, &Func::constant(&k, *r)))
        .collect();
    let scale = poly::lead(&f_poly(m.q() as usize, &x0.a));
    Relation::assemble(m, &k, RelationKind::Elim32, level, d.clone(), phi, factors, scale)
}

/// Source of candidate points `P`: random draws, then (or only) a shuffled
/// enumeration of `E(k)` when it is small enough.
struct PointSource {
    random_left: u64,
    listed: Option<std::vec::IntoIter<Pt>>,
    fallback: bool,
}

impl PointSource {
    fn new(m: &Model, k: &Field, policy: &Policy, budget: u64) -> PointSource {
        let bound = k.order().map(|o| o + 1 + 2 * isqrt(o) + 1);
        let small = bound.map_or(false, |b| b <= policy.exhaustive_bound as u128);
        let _ = m;
        // Enumerate straight away when the whole group is within the budget.
        let direct = small && bound.map_or(false, |b| b <= budget as u128);
        PointSource { random_left: if direct { 0 } else { budget }, listed: None, fallback: small }
    }

    fn next(&mut self, m: &Model, k: &Field, rng: &mut Rng) -> Option<Pt> {
        if self.random_left > 0 {
            self.random_left -= 1;
            return Some(m.curve.random_point(k, rng));
        }
        if self.listed.is_none() && self.fallback {
            self.fallback = false;
            let mut pts = m.curve.points(k).ok()?;
            pts.shuffle(rng);
            self.listed = Some(pts.into_iter());
        }
        self.listed.as_mut()?.next()
    }
}

/// Samples `P` until `f` splits; returns the number of samples used, the
/// point and its roots. `None` when `max` samples did not suffice.
pub fn first_split32(
    m: &Model,
    level: usize,
    d: &Divisor,
    rng: &mut Rng,
    max: u64,
) -> Option<(u64, X0Point, Vec<Option<Fe>>)> {
    let k = m.level_field(level);
    let (l, pts) = d.expand(&m.curve);
    let q = m.q() as usize;
    for trial in 1..=max {
        let p = m.curve.random_point(&k, rng);
        let Ok(x0) = x0_solve_in(m, &k, &l, &pts, &p) else { continue };
        if let Some(roots) = split_roots(&k, q, &x0.a) {
            return Some((trial, x0, roots));
        }
    }
    None
}

/// Eliminates `D` (effective, degree 3 over level `level`), keeping the
/// first relation that `accept` approves. Returns it with the number of
/// sampled points.
pub fn eliminate32_with(
    m: &Model,
    level: usize,
    d: &Divisor,
    rng: &mut Rng,
    policy: &Policy,
    accept: &mut dyn FnMut(&Relation) -> bool,
) -> Result<(Relation, u64)> {
    let k = m.level_field(level);
    if d.base != k.degree() || d.degree() != 3 || !d.is_effective() || d.at_infinity() != 0 {
        return Err(Error::Params("3-to-2 input must be an effective finite divisor of degree 3 over k".into()));
    }
    let report = trap3_check(m, d, level, policy);
    if report.is_trap() {
        return Err(Error::Degenerate(format!("3-to-2 input is a trap: {report:?}")));
    }
    let (l, pts) = d.expand(&m.curve);
    let q = m.q() as usize;
    let budget = policy.trials(m.q());
    let mut source = PointSource::new(m, &k, policy, budget);
    let mut trials = 0u64;
    while let Some(p) = source.next(m, &k, rng) {
        trials += 1;
        let Ok(x0) = x0_solve_in(m, &k, &l, &pts, &p) else { continue };
        let Some(roots) = split_roots(&k, q, &x0.a) else { continue };
        let Ok(rel) = relation_from(m, level, d, &x0, &roots) else { continue };
        if accept(&rel) {
            return Ok((rel, trials));
        }
    }
    Err(Error::Budget(format!("no acceptable 3-to-2 relation after {trials} samples")))
}

/// Eliminates `D` accepting the first split.
pub fn try_eliminate32(m: &Model, level: usize, d: &Divisor, rng: &mut Rng, policy: &Policy) -> Result<Relation> {
    eliminate32_with(m, level, d, rng, policy, &mut |_| true).map(|(r, _)| r)
}

/// An exceptional point `((x − β)^q (x − α), P)` of `X₀`, over the field
/// returned alongside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exceptional32 {
    pub p: Pt,
    pub alpha: Fe,
    /// `β^q`.
    pub beta_q: Fe,
    pub a: [Fe; 4],
}

/// Exceptional points of `X₀` for the degree-3 divisor `D`.
pub fn exceptional_points32(m: &Model, d: &Divisor) -> Result<(Arc<Field>, Vec<Exceptional32>)> {
    let (l, pts) = d.expand(&m.curve);
    exceptional_points_in(m, &l, &pts)
}

/// Exceptional points for three points given in `l`. For each way of
/// writing `D = [D₁] + [D₂] + [D₃]` with `{D₁, D₂}` unordered, `P` solves
/// either `2P = −(D₁ + D₂)` with `α = x(P + D₁)`, `β^q = x(T + D₃)`, or
/// `2P^{(q)} = −(D₁ + D₂ + 2Q)` with `α = x(P + D₃)`, `β^q = x(T + D₁)`.
/// Each equation has one solution per 2-torsion point, so the count is 24
/// in odd characteristic and 12 in characteristic 2.
pub fn exceptional_points_in(m: &Model, l: &Arc<Field>, pts: &[Pt]) -> Result<(Arc<Field>, Vec<Exceptional32>)> {
    assert_eq!(pts.len(), 3);
    let c = &m.curve;
    let ql = m.q_in(l);
    let two_q = c.double(l, &ql);
    // (single index, orientation b?, S to halve)
    let mut targets = Vec::new();
    for j in 0..3 {
        let (i1, i2) = match j {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let pair = c.add(l, &pts[i1], &pts[i2]);
        targets.push((j, i1, false, c.neg(l, &pair)));
        targets.push((j, i1, true, c.neg(l, &c.add(l, &pair, &two_q))));
    }
    let mut ext: u128 = 1;
    for (_, _, _, s) in &targets {
        for (g, _) in factor::factor(l, &c.halving_poly(l, s)) {
            ext = int::lcm(ext, (g.len() - 1) as u128);
        }
    }
    let torsion = if c.characteristic() == 2 { 2 } else { 4 };
    let tower = Tower::get(c.characteristic());
    let mut deg = l.degree() * ext as usize;
    let big = loop {
        if deg > MAX_DEGREE {
            return Err(Error::Degenerate(format!("exceptional points need a field of degree {deg}")));
        }
        let big = tower.field(deg);
        let ok = targets
            .iter()
            .all(|(_, _, _, s)| c.halve(&big, &c.embed(&big, l.degree(), s)).len() == torsion);
        if ok {
            break big;
        }
        if deg % (2 * l.degree() * ext as usize) == 0 {
            return Err(Error::Internal("halving points not found in the expected extension".into()));
        }
        deg *= 2;
    };
    let e = |pt: &Pt| c.embed(&big, l.degree(), pt);
    let pb: Vec<Pt> = pts.iter().map(e).collect();
    let qb = e(&ql);
    let mut out: Vec<Exceptional32> = Vec::new();
    for (j, i1, orient_b, s) in &targets {
        for r in c.halve(&big, &e(s)) {
            let p = if *orient_b { c.frob(&big, &r, -1) } else { r };
            let t = c.add(&big, &qb, &c.frob(&big, &p, 1));
            let (da, db) = if *orient_b { (&pb[*j], &pb[*i1]) } else { (&pb[*i1], &pb[*j]) };
            let sa = c.add(&big, &p, da);
            let sb = c.add(&big, &t, db);
            if sa.inf || sb.inf {
                continue;
            }
            let (alpha, beta_q) = (sa.x, sb.x);
            let a = [big.one(), big.neg(&alpha), big.neg(&beta_q), big.mul(&alpha, &beta_q)];
            let pt = Exceptional32 { p, alpha, beta_q, a };
            if !out.contains(&pt) {
                out.push(pt);
            }
        }
    }
    Ok((big, out))
}

/// Whether the 4×4 tangent matrix at the exceptional point is singular
/// (the `β`-preimage of the point on the root cover is then singular).
/// Points of `D` must be given in `big`.
pub fn exceptional_singular(m: &Model, big: &Field, pts: &[Pt], e: &Exceptional32) -> bool {
    let c = &m.curve;
    let [a1, a2, a3, a4, _] = c.coeffs(big);
    let p = &e.p;
    if p.inf {
        return true;
    }
    let beta = big.frob(&e.beta_q, -(m.r() as i64));
    let t = c.add(big, &m.q_in(big), &c.frob(big, p, 1));
    let dex = big.sub(
        &big.sub(&big.mul(&a1, &p.y), &big.scale(&big.sqr(&p.x), 3)),
        &big.add(&big.scale(&big.mul(&a2, &p.x), 2), &a4),
    );
    let dey = big.add(&big.add(&big.scale(&p.y, 2), &big.mul(&a1, &p.x)), &a3);
    let mut mat: Matrix = vec![vec![Fe::ZERO, Fe::ZERO, dex, dey]];
    for d in pts {
        if d.inf || d.x == p.x {
            return true;
        }
        let su = c.add(big, p, d);
        let sv = c.add(big, &t, d);
        if su.inf || sv.inf {
            return true;
        }
        let dx = big.sub(&p.x, &d.x);
        let lam = big.div(&big.sub(&p.y, &d.y), &dx);
        let dlx = big.neg(&big.div(&lam, &dx));
        let dly = big.inv(&dx);
        let w = big.add(&big.scale(&lam, 2), &a1);
        let dux = big.sub(&big.mul(&w, &dlx), &big.one());
        let duy = big.mul(&w, &dly);
        let vv = big.sub(&sv.x, &e.beta_q);
        mat.push(vec![vv, big.sub(&su.x, &beta), big.mul(&dux, &vv), big.mul(&duy, &vv)]);
    }
    linalg::det(big, &mat).is_zero()
}

/// Membership of a degree-3 divisor in the trap sets.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Trap3Report {
    /// A repeated point.
    pub t0: bool,
    /// `(D₁ + D₂)^{(q)} = D₁ + D_i + 2Q` for some labelling and `i ≠ 1`.
    pub t1: bool,
    /// `D₁^{(q)} = D_i + Q` for some labelling.
    pub t2: bool,
    /// Singular at every exceptional point (`None` when not evaluated).
    pub t3: Option<bool>,
    /// Every pair lies in the leveled set `T₃(i)` (`None` when not evaluated).
    pub leveled: Option<bool>,
}

impl Trap3Report {
    pub fn is_trap(&self) -> bool {
        self.t0 || self.t1 || self.t2 || self.t3 == Some(true) || self.leveled == Some(true)
    }
}

const PERMS3: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// The point conditions `𝒯₃⁰`–`𝒯₃²`, plus the rank condition `𝒯₃³` when
/// `strict`, for three points in `l`.
pub fn trap3_base(m: &Model, l: &Arc<Field>, pts: &[Pt], strict: bool) -> Trap3Report {
    assert_eq!(pts.len(), 3);
    let c = &m.curve;
    let ql = m.q_in(l);
    let two_q = c.double(l, &ql);
    let mut rep = Trap3Report {
        t0: pts[0] == pts[1] || pts[0] == pts[2] || pts[1] == pts[2],
        ..Trap3Report::default()
    };
    for perm in PERMS3 {
        let [d1, d2, d3] = perm.map(|i| pts[i]);
        let lhs = c.frob(l, &c.add(l, &d1, &d2), 1);
        for di in [d2, d3] {
            if lhs == c.add(l, &c.add(l, &d1, &di), &two_q) {
                rep.t1 = true;
            }
        }
    }
    for d1 in pts {
        let f = c.frob(l, d1, 1);
        if pts.iter().any(|di| f == c.add(l, di, &ql)) {
            rep.t2 = true;
        }
    }
    if strict && !rep.t0 {
        rep.t3 = match exceptional_points_in(m, l, pts) {
            Ok((big, ex)) => {
                let pb: Vec<Pt> = pts.iter().map(|p| c.embed(&big, l.degree(), p)).collect();
                Some(!ex.is_empty() && ex.iter().all(|e| exceptional_singular(m, &big, &pb, e)))
            }
            Err(_) => None,
        };
    }
    rep
}

/// Full trap report for `D` at level `i`; the rank condition and the
/// leveled sets are only evaluated under a strict policy.
pub fn trap3_check(m: &Model, d: &Divisor, level: usize, policy: &Policy) -> Trap3Report {
    let (l, pts) = d.expand(&m.curve);
    if pts.len() != 3 || pts.iter().any(|p| p.inf) {
        return Trap3Report { t0: true, ..Trap3Report::default() };
    }
    let mut rep = trap3_base(m, &l, &pts, policy.strict_traps);
    if policy.strict_traps {
        rep.leveled = Some(leveled::all_pairs_in_t3(m, &l, &pts, level, policy.c));
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn model() -> Model {
        Model::build(5, 5, Some(1)).unwrap()
    }

    fn random_divisor(m: &Model, k: &Field, r: &mut Rng) -> Divisor {
        let mut d = Divisor::new(k.degree());
        for _ in 0..3 {
            d.add_point(&m.curve, k, &m.curve.random_affine(k, r), 1);
        }
        d
    }

    #[test]
    fn x0_solution_vanishes_on_divisor() {
        let m = model();
        let k = m.level_field(2);
        let mut r = rng::stream(1, "x0");
        let mut checked = 0;
        while checked < 20 {
            let d = random_divisor(&m, &k, &mut r);
            let p = m.curve.random_affine(&k, &mut r);
            let Ok(x0) = x0_solve(&m, &k, &d, &p) else { continue };
            let phi = phi_p(&m, &k, &x0.a, &p);
            let div = crate::divisor::divisor_of_function(&m.curve, &k, &phi);
            for (pl, mult) in &d.terms {
                assert!(div.terms.get(pl).copied().unwrap_or(0) >= *mult);
            }
            checked += 1;
        }
    }

    #[test]
    fn phi_agrees_with_translate_at_kernel() {
        let m = model();
        let k = m.level_field(2);
        let mut r = rng::stream(2, "phi");
        for _ in 0..10 {
            let a = [k.random(&mut r), k.random(&mut r), k.random(&mut r), k.random(&mut r)];
            let p = m.curve.random_affine(&k, &mut r);
            let phi = phi_p(&m, &k, &a, &p);
            let f = Func::from_x_poly(&k, f_poly(m.q() as usize, &a));
            let ft = crate::model::compose_translate(&m.curve, &k, &f, &p);
            assert_eq!(m.eval_at_kernel(&k, &phi).unwrap(), m.eval_at_kernel(&k, &ft).unwrap());
        }
    }

    #[test]
    fn repeated_point_gives_degenerate_kernel() {
        let m = model();
        let k = m.level_field(2);
        let mut r = rng::stream(3, "rep");
        let pt = m.curve.random_affine(&k, &mut r);
        let d = Divisor::from_place(crate::divisor::Place::of_point(&m.curve, &k, &pt, k.degree()), 3);
        let p = m.curve.random_affine(&k, &mut r);
        assert_eq!(x0_kernel_dim(&m, &k, &d, &p).unwrap(), 3);
        assert!(trap3_check(&m, &d, 1, &Policy::default()).t0);
    }

    #[test]
    fn relations_verify() {
        let m = model();
        let mut r = rng::stream(4, "rel");
        let k = m.level_field(2);
        let pol = Policy::default();
        let mut done = 0;
        while done < 3 {
            let d = random_divisor(&m, &k, &mut r);
            if trap3_check(&m, &d, 2, &pol).is_trap() {
                continue;
            }
            let rel = try_eliminate32(&m, 2, &d, &mut r, &pol).unwrap();
            rel.verify(&m).unwrap();
            assert_eq!(rel.factors.len() + rel.rhs.terms.len() > 0, true);
            done += 1;
        }
    }
}
