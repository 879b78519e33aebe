//! Rational functions on a curve, places, divisors, divisors of functions,
//! norms of divisors down the tower and Miller-style construction of a
//! function with a given principal divisor.
//!
//! A function is stored as `(a(x) + b(x)·y) / d(x)` with `d` monic and
//! `gcd(a, b, d) = 1`, which makes the representation unique. Coefficients
//! live in one field `k` whose absolute degree is recorded in the function.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::factor;
use crate::algebra::int;
use crate::algebra::poly::{self, Poly};
use crate::algebra::{Fe, Field, Tower};
use crate::curve::{Curve, Pt};
use crate::error::{Error, Result};

/// Rational function `(a + b·y) / d` on a curve, over the field of absolute
/// degree `m`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Func {
    pub m: usize,
    pub a: Poly,
    pub b: Poly,
    pub d: Poly,
}

impl Func {
    pub fn zero(k: &Field) -> Func {
        Func { m: k.degree(), a: Vec::new(), b: Vec::new(), d: vec![k.one()] }
    }

    pub fn constant(k: &Field, c: Fe) -> Func {
        Func { m: k.degree(), a: poly::constant(c), b: Vec::new(), d: vec![k.one()] }
    }

    pub fn one(k: &Field) -> Func {
        Func::constant(k, k.one())
    }

    pub fn x(k: &Field) -> Func {
        Func { m: k.degree(), a: poly::x(k), b: Vec::new(), d: vec![k.one()] }
    }

    pub fn y(k: &Field) -> Func {
        Func { m: k.degree(), a: Vec::new(), b: vec![k.one()], d: vec![k.one()] }
    }

    /// Polynomial function `a(x) + b(x)·y`.
    pub fn poly(k: &Field, a: Poly, b: Poly) -> Func {
        Func::new(k, a, b, vec![k.one()])
    }

    pub fn from_x_poly(k: &Field, a: Poly) -> Func {
        Func::new(k, a, Vec::new(), vec![k.one()])
    }

    /// Normalizes an arbitrary triple into canonical form.
    pub fn new(k: &Field, a: Poly, b: Poly, d: Poly) -> Func {
        let mut a = poly::trimmed(a);
        let mut b = poly::trimmed(b);
        let mut d = poly::trimmed(d);
        assert!(!d.is_empty(), "function with zero denominator");
        if a.is_empty() && b.is_empty() {
            return Func::zero(k);
        }
        let g = poly::gcd(k, &poly::gcd(k, &a, &b), &d);
        if g.len() > 1 {
            a = poly::div_exact(k, &a, &g);
            b = poly::div_exact(k, &b, &g);
            d = poly::div_exact(k, &d, &g);
        }
        let li = k.inv(&poly::lead(&d));
        Func {
            m: k.degree(),
            a: poly::scale(k, &a, &li),
            b: poly::scale(k, &b, &li),
            d: poly::scale(k, &d, &li),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_empty() && self.b.is_empty()
    }

    /// Whether the function is a polynomial in `x` and `y`.
    pub fn is_polynomial(&self) -> bool {
        self.d.len() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.b.is_empty() && self.a.len() <= 1 && self.d.len() == 1
    }

    pub fn add(&self, c: &Curve, k: &Field, o: &Func) -> Func {
        let a = poly::add(k, &poly::mul(k, &self.a, &o.d), &poly::mul(k, &o.a, &self.d));
        let b = poly::add(k, &poly::mul(k, &self.b, &o.d), &poly::mul(k, &o.b, &self.d));
        let _ = c;
        Func::new(k, a, b, poly::mul(k, &self.d, &o.d))
    }

    pub fn neg(&self, k: &Field) -> Func {
        Func { m: self.m, a: poly::neg(k, &self.a), b: poly::neg(k, &self.b), d: self.d.clone() }
    }

    pub fn sub(&self, c: &Curve, k: &Field, o: &Func) -> Func {
        self.add(c, k, &o.neg(k))
    }

    pub fn scale(&self, k: &Field, s: &Fe) -> Func {
        Func::new(k, poly::scale(k, &self.a, s), poly::scale(k, &self.b, s), self.d.clone())
    }

    pub fn mul(&self, c: &Curve, k: &Field, o: &Func) -> Func {
        let (a, b) = mul_parts(c, k, (&self.a, &self.b), (&o.a, &o.b));
        Func::new(k, a, b, poly::mul(k, &self.d, &o.d))
    }

    /// Image under `y ↦ -y - h(x)`, i.e. composition with negation on `E`.
    pub fn conj(&self, c: &Curve, k: &Field) -> Func {
        let h = c.h_poly(k);
        let a = poly::sub(k, &self.a, &poly::mul(k, &self.b, &h));
        Func::new(k, a, poly::neg(k, &self.b), self.d.clone())
    }

    /// Norm of the numerator `a^2 - a·b·h - b^2·f`, a polynomial in `x`.
    pub fn numerator_norm(&self, c: &Curve, k: &Field) -> Poly {
        norm_parts(c, k, &self.a, &self.b)
    }

    pub fn inv(&self, c: &Curve, k: &Field) -> Func {
        assert!(!self.is_zero(), "inverse of the zero function");
        let nrm = self.numerator_norm(c, k);
        let h = c.h_poly(k);
        let ca = poly::sub(k, &self.a, &poly::mul(k, &self.b, &h));
        let cb = poly::neg(k, &self.b);
        Func::new(k, poly::mul(k, &ca, &self.d), poly::mul(k, &cb, &self.d), nrm)
    }

    pub fn div(&self, c: &Curve, k: &Field, o: &Func) -> Func {
        self.mul(c, k, &o.inv(c, k))
    }

    pub fn pow(&self, c: &Curve, k: &Field, mut e: u64) -> Func {
        let mut acc = Func::one(k);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(c, k, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(c, k, &base);
            }
        }
        acc
    }

    /// Pole order at `0_E` of the polynomial part `a + b·y`.
    pub fn numerator_pole_order(&self) -> usize {
        poly_pole_order(&self.a, &self.b)
    }

    /// Leading coefficient at `0_E` with respect to the local parameter
    /// `x/y`: the coefficient of the dominant monomial of the numerator
    /// divided by the leading coefficient of the denominator (which is 1).
    pub fn lc(&self) -> Fe {
        poly_lc(&self.a, &self.b)
    }

    /// Value at an affine point whose coordinates live in `big` (a field
    /// containing the coefficient field). Fails at poles, and at points where
    /// the canonical denominator vanishes.
    pub fn eval(&self, c: &Curve, big: &Field, pt: &Pt) -> Result<Fe> {
        let _ = c;
        if pt.inf {
            if self.is_constant() {
                return Ok(self.a.first().map(|v| big.embed_from(self.m, v)).unwrap_or(Fe::ZERO));
            }
            return Err(Error::Degenerate("evaluation of a nonconstant function at 0_E".into()));
        }
        let ev = |p: &Poly| -> Fe {
            let mut acc = Fe::ZERO;
            for coef in p.iter().rev() {
                acc = big.add(&big.mul(&acc, &pt.x), &big.embed_from(self.m, coef));
            }
            acc
        };
        let dv = ev(&self.d);
        if dv.is_zero() {
            return Err(Error::Degenerate("denominator vanishes at the evaluation point".into()));
        }
        let num = big.add(&ev(&self.a), &big.mul(&ev(&self.b), &pt.y));
        Ok(big.div(&num, &dv))
    }

    /// Coefficients mapped into the field of degree `to` (which contains the
    /// current coefficient field).
    pub fn embed(&self, to: &Field) -> Func {
        let m = self.m;
        Func {
            m: to.degree(),
            a: poly::embed(to, m, &self.a),
            b: poly::embed(to, m, &self.b),
            d: poly::embed(to, m, &self.d),
        }
    }

    /// Coefficients expressed in the subfield of degree `d`, when possible.
    pub fn restrict(&self, k: &Field, d: usize) -> Option<Func> {
        Some(Func {
            m: d,
            a: poly::restrict(k, d, &self.a)?,
            b: poly::restrict(k, d, &self.b)?,
            d: poly::restrict(k, d, &self.d)?,
        })
    }

    /// Applies `c ↦ c^{p^j}` to every coefficient.
    pub fn frob(&self, k: &Field, j: i64) -> Func {
        Func {
            m: self.m,
            a: poly::frob_coeffs(k, &self.a, j),
            b: poly::frob_coeffs(k, &self.b, j),
            d: poly::frob_coeffs(k, &self.d, j),
        }
    }

    pub fn to_doc(&self, k: &Field) -> FuncDoc {
        let hex = |p: &Poly| p.iter().map(|v| k.to_hex(v)).collect();
        FuncDoc { m: self.m, a: hex(&self.a), b: hex(&self.b), d: hex(&self.d) }
    }

    pub fn from_doc(doc: &FuncDoc, k: &Field) -> Result<Func> {
        if doc.m != k.degree() {
            return Err(Error::Format("function field degree mismatch".into()));
        }
        let parse = |v: &[String]| -> Result<Poly> {
            v.iter()
                .map(|s| k.from_hex(s).ok_or_else(|| Error::Format(format!("bad coefficient {s}"))))
                .collect()
        };
        let f = Func { m: doc.m, a: parse(&doc.a)?, b: parse(&doc.b)?, d: parse(&doc.d)? };
        if f.d.is_empty() || f.d.last().map_or(true, |v| v.is_zero()) {
            return Err(Error::Format("bad denominator".into()));
        }
        Ok(f)
    }
}

/// Serialized function: hex coefficient lists, low degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuncDoc {
    pub m: usize,
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub d: Vec<String>,
}

/// Product of `a1 + b1·y` and `a2 + b2·y` reduced with `y^2 = f - h·y`.
pub fn mul_parts(c: &Curve, k: &Field, l: (&[Fe], &[Fe]), r: (&[Fe], &[Fe])) -> (Poly, Poly) {
    let (a1, b1) = l;
    let (a2, b2) = r;
    let bb = poly::mul(k, b1, b2);
    let a = poly::add(k, &poly::mul(k, a1, a2), &poly::mul(k, &bb, &c.f_poly(k)));
    let cross = poly::add(k, &poly::mul(k, a1, b2), &poly::mul(k, a2, b1));
    let b = poly::sub(k, &cross, &poly::mul(k, &bb, &c.h_poly(k)));
    (a, b)
}

/// `a^2 - a·b·h - b^2·f`.
pub fn norm_parts(c: &Curve, k: &Field, a: &[Fe], b: &[Fe]) -> Poly {
    let aa = poly::mul(k, a, a);
    let abh = poly::mul(k, &poly::mul(k, a, b), &c.h_poly(k));
    let bbf = poly::mul(k, &poly::mul(k, b, b), &c.f_poly(k));
    poly::sub(k, &poly::sub(k, &aa, &abh), &bbf)
}

/// Pole order at `0_E` of `a(x) + b(x)·y` (zero for the zero function).
pub fn poly_pole_order(a: &[Fe], b: &[Fe]) -> usize {
    let pa = poly::degree(a).map(|d| 2 * d);
    let pb = poly::degree(b).map(|d| 2 * d + 3);
    pa.max(pb).unwrap_or(0)
}

/// Leading coefficient of `a(x) + b(x)·y` at `0_E` in the parameter `x/y`.
pub fn poly_lc(a: &[Fe], b: &[Fe]) -> Fe {
    let pa = poly::degree(a).map(|d| 2 * d);
    let pb = poly::degree(b).map(|d| 2 * d + 3);
    match (pa, pb) {
        (None, None) => Fe::ZERO,
        (Some(_), None) => poly::lead(a),
        (None, Some(_)) => poly::lead(b),
        (Some(x), Some(y)) => {
            if x > y {
                poly::lead(a)
            } else {
                poly::lead(b)
            }
        }
    }
}

/// The function `x ∘ τ_S`, i.e. `P ↦ x(P + S)`.
pub fn translate_x(c: &Curve, k: &Field, s: &Pt) -> Func {
    translate(c, k, s).0
}

/// The pair `(x ∘ τ_S, y ∘ τ_S)`.
pub fn translate(c: &Curve, k: &Field, s: &Pt) -> (Func, Func) {
    if s.inf {
        return (Func::x(k), Func::y(k));
    }
    let co = c.coeffs(k);
    let lam = Func::new(k, vec![k.neg(&s.y)], vec![k.one()], vec![k.neg(&s.x), k.one()]);
    let xs = Func::constant(k, s.x);
    let lam2 = lam.mul(c, k, &lam);
    let mut x3 = lam2.add(c, k, &lam.scale(k, &co[0]));
    x3 = x3.sub(c, k, &Func::constant(k, k.add(&co[1], &s.x)));
    x3 = x3.sub(c, k, &Func::x(k));
    // nu = y_S - lam * x_S
    let nu = Func::constant(k, s.y).sub(c, k, &lam.mul(c, k, &xs));
    let lam_a1 = lam.add(c, k, &Func::constant(k, co[0]));
    let y3 = lam_a1
        .mul(c, k, &x3)
        .neg(k)
        .sub(c, k, &nu)
        .sub(c, k, &Func::constant(k, co[2]));
    (x3, y3)
}

/// Line through `A` and `B` as a polynomial function: its divisor is
/// `[A] + [B] + [-(A+B)] - 3[0_E]`, or `[A] + [-A] - 2[0_E]` (a vertical
/// line) when `B = -A`.
pub fn line(c: &Curve, k: &Field, pa: &Pt, pb: &Pt) -> Func {
    assert!(!pa.inf && !pb.inf, "line through the point at infinity");
    let co = c.coeffs(k);
    if pa.x == pb.x && c.add(k, pa, pb).inf {
        return Func::from_x_poly(k, poly::linear(k, &pa.x));
    }
    let lambda = if pa.x == pb.x {
        let num = k.sub(
            &k.add(&k.add(&k.scale(&k.sqr(&pa.x), 3), &k.scale(&k.mul(&co[1], &pa.x), 2)), &co[3]),
            &k.mul(&co[0], &pa.y),
        );
        let den = k.add(&k.add(&k.scale(&pa.y, 2), &k.mul(&co[0], &pa.x)), &co[2]);
        k.div(&num, &den)
    } else {
        k.div(&k.sub(&pb.y, &pa.y), &k.sub(&pb.x, &pa.x))
    };
    // y - y_A - λ(x - x_A)
    let a0 = k.sub(&k.mul(&lambda, &pa.x), &pa.y);
    Func::poly(k, vec![a0, k.neg(&lambda)], vec![k.one()])
}

/// Vertical line `x - x(A)` (the constant 1 at `0_E`).
pub fn vertical(k: &Field, pa: &Pt) -> Func {
    if pa.inf {
        return Func::one(k);
    }
    Func::from_x_poly(k, poly::linear(k, &pa.x))
}

/// A place over the base field of absolute degree `base`: the orbit of
/// `pt` under the `p^base`-Frobenius, of size `deg`. The representative is
/// expressed in the field of absolute degree `base·deg` and is the smallest
/// element of the orbit.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Place {
    pub base: usize,
    pub deg: usize,
    pub pt: Pt,
}

impl Place {
    pub fn infinity(base: usize) -> Place {
        Place { base, deg: 1, pt: Pt::O }
    }

    pub fn is_infinity(&self) -> bool {
        self.pt.inf
    }

    /// Absolute degree of the field holding the representative.
    pub fn field_degree(&self) -> usize {
        self.base * self.deg
    }

    /// Place over the field of degree `base` containing the point `pt`,
    /// whose coordinates live in `big`.
    pub fn of_point(c: &Curve, big: &Field, pt: &Pt, base: usize) -> Place {
        if pt.inf {
            return Place::infinity(base);
        }
        let md = c.min_degree(big, pt);
        let fd = int::lcm(md as u128, base as u128) as usize;
        let deg = fd / base;
        let home = Tower::get(c.characteristic()).field(fd);
        let local = c.restrict(big, fd, pt).expect("point lies in its minimal field");
        let mut best = local;
        let mut cur = local;
        for _ in 1..deg {
            cur = Pt::new(home.frob(&cur.x, base as i64), home.frob(&cur.y, base as i64));
            if cur < best {
                best = cur;
            }
        }
        Place { base, deg, pt: best }
    }

    /// The `deg` geometric points of the place, in the representative's field.
    pub fn conjugates(&self, c: &Curve) -> Vec<Pt> {
        if self.pt.inf {
            return vec![Pt::O];
        }
        let home = Tower::get(c.characteristic()).field(self.field_degree());
        let mut out = Vec::with_capacity(self.deg);
        let mut cur = self.pt;
        for _ in 0..self.deg {
            out.push(cur);
            cur = Pt::new(home.frob(&cur.x, self.base as i64), home.frob(&cur.y, self.base as i64));
        }
        out
    }

    /// Conjugate points embedded into `big`.
    pub fn points_in(&self, c: &Curve, big: &Field) -> Vec<Pt> {
        let fd = self.field_degree();
        self.conjugates(c).into_iter().map(|p| c.embed(big, fd, &p)).collect()
    }

    /// Sum of the geometric points, as a point over the base field.
    pub fn sigma(&self, c: &Curve) -> Pt {
        if self.pt.inf {
            return Pt::O;
        }
        let home = Tower::get(c.characteristic()).field(self.field_degree());
        let mut s = Pt::O;
        for pt in self.conjugates(c) {
            s = c.add(&home, &s, &pt);
        }
        c.restrict(&home, self.base, &s).expect("orbit sum is rational over the base")
    }

    /// The same place viewed over a subfield of degree `sub` (dividing
    /// `base`), together with the multiplicity it receives in the norm.
    pub fn norm_to(&self, c: &Curve, sub: usize) -> (Place, i64) {
        assert!(self.base % sub == 0, "norm target is not a subfield");
        if self.pt.inf {
            return (Place::infinity(sub), (self.base / sub) as i64);
        }
        let home = Tower::get(c.characteristic()).field(self.field_degree());
        let pl = Place::of_point(c, &home, &self.pt, sub);
        let mult = (self.base / sub * self.deg) / pl.deg;
        (pl, mult as i64)
    }

    /// Extends the place to the overfield of degree `ext` (a multiple of
    /// `base`): the sum of the places over `ext` above it (each with
    /// multiplicity one, since extensions of finite fields are unramified).
    pub fn extend_to(&self, c: &Curve, ext: usize) -> Vec<Place> {
        assert!(ext % self.base == 0);
        if self.pt.inf {
            return vec![Place::infinity(ext)];
        }
        let fd = int::lcm(self.field_degree() as u128, ext as u128) as usize;
        let big = Tower::get(c.characteristic()).field(fd);
        let mut out: Vec<Place> = self
            .points_in(c, &big)
            .iter()
            .map(|pt| Place::of_point(c, &big, pt, ext))
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Divisor over the field of absolute degree `base`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Divisor {
    pub base: usize,
    pub terms: BTreeMap<Place, i64>,
}

impl Divisor {
    pub fn new(base: usize) -> Divisor {
        Divisor { base, terms: BTreeMap::new() }
    }

    pub fn from_place(pl: Place, mult: i64) -> Divisor {
        let mut d = Divisor::new(pl.base);
        d.add_place(pl, mult);
        d
    }

    pub fn add_place(&mut self, pl: Place, mult: i64) {
        assert_eq!(pl.base, self.base, "place over a different field");
        if mult == 0 {
            return;
        }
        let e = self.terms.entry(pl).or_insert(0);
        *e += mult;
        if *e == 0 {
            self.terms.remove(&pl);
        }
    }

    pub fn add_point(&mut self, c: &Curve, big: &Field, pt: &Pt, mult: i64) {
        let pl = Place::of_point(c, big, pt, self.base);
        self.add_place(pl, mult);
    }

    pub fn add(&self, o: &Divisor) -> Divisor {
        let mut d = self.clone();
        for (pl, m) in &o.terms {
            d.add_place(*pl, *m);
        }
        d
    }

    pub fn scale(&self, s: i64) -> Divisor {
        let mut d = Divisor::new(self.base);
        for (pl, m) in &self.terms {
            d.add_place(*pl, m * s);
        }
        d
    }

    pub fn sub(&self, o: &Divisor) -> Divisor {
        self.add(&o.scale(-1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.terms.iter().map(|(pl, m)| pl.deg as i64 * m).sum()
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&m| m > 0)
    }

    /// The divisor with the `0_E` term removed.
    pub fn finite_part(&self) -> Divisor {
        let mut d = self.clone();
        d.terms.retain(|pl, _| !pl.is_infinity());
        d
    }

    /// Multiplicity at `0_E`.
    pub fn at_infinity(&self) -> i64 {
        self.terms.get(&Place::infinity(self.base)).copied().unwrap_or(0)
    }

    /// `D - deg(D)·[0_E]`.
    pub fn degree_zero_part(&self) -> Divisor {
        let mut d = self.clone();
        let deg = d.degree();
        d.add_place(Place::infinity(self.base), -deg);
        d
    }

    /// `σ(D)`: the sum on `E` of the geometric points with multiplicity.
    pub fn sigma(&self, c: &Curve) -> Pt {
        let k = Tower::get(c.characteristic()).field(self.base);
        let mut s = Pt::O;
        for (pl, m) in &self.terms {
            let ps = pl.sigma(c);
            s = c.add(&k, &s, &c.mul_signed(&k, &ps, *m as i128));
        }
        s
    }

    /// Whether the divisor is principal: degree zero and `σ = 0_E`.
    pub fn is_principal(&self, c: &Curve) -> bool {
        self.degree() == 0 && self.sigma(c).inf
    }

    /// Norm to the subfield of absolute degree `sub`.
    pub fn norm_to(&self, c: &Curve, sub: usize) -> Divisor {
        let mut d = Divisor::new(sub);
        for (pl, m) in &self.terms {
            let (np, e) = pl.norm_to(c, sub);
            d.add_place(np, m * e);
        }
        d
    }

    /// Conorm: the same divisor viewed over the overfield of degree `ext`.
    pub fn extend_to(&self, c: &Curve, ext: usize) -> Divisor {
        let mut d = Divisor::new(ext);
        for (pl, m) in &self.terms {
            for up in pl.extend_to(c, ext) {
                d.add_place(up, *m);
            }
        }
        d
    }

    /// A random place of degree `deg` over the field of degree `base`, as a
    /// divisor with multiplicity one.
    pub fn random_place<R: rand::Rng + ?Sized>(c: &Curve, base: usize, deg: usize, rng: &mut R) -> Divisor {
        let big = Tower::get(c.characteristic()).field(base * deg);
        loop {
            let pt = c.random_affine(&big, rng);
            if c.min_degree(&big, &pt) == big.degree() {
                return Divisor::from_place(Place::of_point(c, &big, &pt, base), 1);
            }
        }
    }

    /// Geometric points with multiplicities, embedded into `big`.
    pub fn geometric_points(&self, c: &Curve, big: &Field) -> Vec<(Pt, i64)> {
        let mut out = Vec::new();
        for (pl, m) in &self.terms {
            for pt in pl.points_in(c, big) {
                out.push((pt, *m));
            }
        }
        out
    }

    /// Geometric points of an effective divisor, each repeated by its
    /// multiplicity, in the splitting field (sorted by place).
    pub fn expand(&self, c: &Curve) -> (std::sync::Arc<Field>, Vec<Pt>) {
        assert!(self.terms.values().all(|&m| m > 0), "expand needs an effective divisor");
        let big = Tower::get(c.characteristic()).field(self.splitting_degree());
        let mut out = Vec::new();
        for (pt, m) in self.geometric_points(c, &big) {
            for _ in 0..m {
                out.push(pt);
            }
        }
        (big, out)
    }

    /// Smallest field degree holding every geometric point.
    pub fn splitting_degree(&self) -> usize {
        self.terms
            .keys()
            .fold(self.base as u128, |acc, pl| int::lcm(acc, pl.field_degree() as u128)) as usize
    }

    pub fn to_doc(&self, c: &Curve) -> DivisorDoc {
        DivisorDoc {
            base: self.base,
            terms: self
                .terms
                .iter()
                .map(|(pl, m)| PlaceTerm::new(c, pl, *m))
                .collect(),
        }
    }

    pub fn from_doc(c: &Curve, doc: &DivisorDoc) -> Result<Divisor> {
        let mut d = Divisor::new(doc.base);
        for t in &doc.terms {
            let pl = t.place(c, doc.base)?;
            if d.terms.contains_key(&pl) {
                return Err(Error::Format("repeated place in divisor".into()));
            }
            if t.mult == 0 {
                return Err(Error::Format("zero multiplicity in divisor".into()));
            }
            d.add_place(pl, t.mult);
        }
        Ok(d)
    }
}

/// Serialized place with multiplicity. `x`/`y` are hex in the field of
/// absolute degree `base·deg`; both are empty for `0_E`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceTerm {
    pub deg: usize,
    pub x: String,
    pub y: String,
    pub mult: i64,
}

impl PlaceTerm {
    pub fn new(c: &Curve, pl: &Place, mult: i64) -> PlaceTerm {
        if pl.pt.inf {
            return PlaceTerm { deg: 1, x: String::new(), y: String::new(), mult };
        }
        let home = Tower::get(c.characteristic()).field(pl.field_degree());
        PlaceTerm { deg: pl.deg, x: home.to_hex(&pl.pt.x), y: home.to_hex(&pl.pt.y), mult }
    }

    /// Parses and re-canonicalizes the place; rejects points off the curve
    /// and non-canonical representatives.
    pub fn place(&self, c: &Curve, base: usize) -> Result<Place> {
        if self.x.is_empty() && self.y.is_empty() {
            if self.deg != 1 {
                return Err(Error::Format("infinite place must have degree 1".into()));
            }
            return Ok(Place::infinity(base));
        }
        let fd = base
            .checked_mul(self.deg)
            .filter(|&v| v >= 1 && v <= crate::algebra::field::MAX_DEGREE)
            .ok_or_else(|| Error::Format("place field too large".into()))?;
        let home = Tower::get(c.characteristic()).field(fd);
        let x = home.from_hex(&self.x).ok_or_else(|| Error::Format("bad place x".into()))?;
        let y = home.from_hex(&self.y).ok_or_else(|| Error::Format("bad place y".into()))?;
        let pt = Pt::new(x, y);
        if !c.is_on(&home, &pt) {
            return Err(Error::Format("place point is not on the curve".into()));
        }
        let pl = Place::of_point(c, &home, &pt, base);
        if pl.deg != self.deg || pl.pt != pt {
            return Err(Error::Format("place is not in canonical form".into()));
        }
        Ok(pl)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorDoc {
    pub base: usize,
    pub terms: Vec<PlaceTerm>,
}

/// Places over `k` at the roots of the polynomial `u(x)`: for each monic
/// irreducible factor `g` with multiplicity `e`, calls `visit` with the
/// field of degree `deg(k)·deg(g)` and one root of `g` in it.
fn for_each_root<F: FnMut(&Field, &Fe, usize)>(c: &Curve, k: &Field, u: &[Fe], mut visit: F) {
    if poly::degree(u).map_or(true, |d| d == 0) {
        return;
    }
    let tower = Tower::get(c.characteristic());
    for (g, e) in factor::factor(k, u) {
        let dg = g.len() - 1;
        let big = tower.field(k.degree() * dg);
        let gb = poly::embed(&big, k.degree(), &g);
        let root = if dg == 1 {
            big.neg(&gb[0])
        } else {
            factor::distinct_roots(&big, &gb)[0]
        };
        visit(&big, &root, e);
    }
}

/// Zeros of the vertical factor `u(x)` counted as a function on `E`:
/// each root `x0` contributes the points above it.
fn vertical_divisor(c: &Curve, k: &Field, u: &[Fe], sign: i64, out: &mut Divisor) {
    let tower = Tower::get(c.characteristic());
    for_each_root(c, k, u, |big, x0, e| {
        let mut pts = c.lift_x(big, x0);
        let mut field = tower.field(big.degree());
        if pts.is_empty() {
            field = tower.field(big.degree() * 2);
            let x0b = field.embed_from(big.degree(), x0);
            pts = c.lift_x(&field, &x0b);
        }
        if pts.len() == 1 {
            // Ramified: x - x0 vanishes to order 2 at a 2-torsion point.
            out.add_point(c, &field, &pts[0], sign * 2 * e as i64);
            return;
        }
        let mut places: Vec<Place> = pts.iter().map(|pt| Place::of_point(c, &field, pt, k.degree())).collect();
        places.sort();
        places.dedup();
        for pl in places {
            out.add_place(pl, sign * e as i64);
        }
    });
}

/// Divisor of a nonzero function over `k`.
pub fn divisor_of_function(c: &Curve, k: &Field, f: &Func) -> Divisor {
    assert!(!f.is_zero(), "divisor of the zero function");
    let mut out = Divisor::new(k.degree());
    let g = poly::gcd(k, &f.a, &f.b);
    let (a1, b1) = if g.len() > 1 {
        (poly::div_exact(k, &f.a, &g), poly::div_exact(k, &f.b, &g))
    } else {
        (f.a.clone(), f.b.clone())
    };
    if g.len() > 1 {
        vertical_divisor(c, k, &g, 1, &mut out);
    }
    if b1.is_empty() {
        vertical_divisor(c, k, &a1, 1, &mut out);
    } else {
        let nrm = norm_parts(c, k, &a1, &b1);
        for_each_root(c, k, &nrm, |big, x0, e| {
            let av = poly::eval(big, &poly::embed(big, k.degree(), &a1), x0);
            let bv = poly::eval(big, &poly::embed(big, k.degree(), &b1), x0);
            let y0 = big.neg(&big.div(&av, &bv));
            out.add_point(c, big, &Pt::new(*x0, y0), e as i64);
        });
    }
    vertical_divisor(c, k, &f.d, -1, &mut out);
    let deg = out.degree();
    out.add_place(Place::infinity(k.degree()), -deg);
    out
}

/// Miller function `f_{n,P}` with divisor `n[P] - [nP] - (n-1)[0_E]`,
/// together with `nP`.
fn miller(c: &Curve, k: &Field, pt: &Pt, n: i64) -> (Func, Pt) {
    if n == 0 {
        return (Func::one(k), Pt::O);
    }
    if n < 0 {
        let (f, np) = miller(c, k, pt, -n);
        // div = -|n|[P] - [-|n|P] + (|n|+1)[0_E]
        let g = Func::one(k).div(c, k, &f.mul(c, k, &vertical(k, &np)));
        return (g, c.neg(k, &np));
    }
    let mut f = Func::one(k);
    let mut t = *pt;
    let bits = 64 - (n as u64).leading_zeros();
    for i in (0..bits - 1).rev() {
        let h = chord(c, k, &t, &t);
        f = f.mul(c, k, &f).mul(c, k, &h);
        t = c.double(k, &t);
        if (n >> i) & 1 == 1 {
            let h = chord(c, k, &t, pt);
            f = f.mul(c, k, &h);
            t = c.add(k, &t, pt);
        }
    }
    (f, t)
}

/// `h_{A,B}` with divisor `[A] + [B] - [A+B] - [0_E]`.
fn chord(c: &Curve, k: &Field, pa: &Pt, pb: &Pt) -> Func {
    if pa.inf || pb.inf {
        return Func::one(k);
    }
    let s = c.add(k, pa, pb);
    let l = line(c, k, pa, pb);
    if s.inf {
        return l;
    }
    l.div(c, k, &vertical(k, &s))
}

/// A function over the field of `d` with divisor exactly `d`, normalized to
/// leading coefficient 1 at `0_E`. Fails if `d` is not principal.
pub fn function_with_divisor(c: &Curve, d: &Divisor) -> Result<Func> {
    if !d.is_principal(c) {
        return Err(Error::Degenerate("divisor is not principal".into()));
    }
    let tower = Tower::get(c.characteristic());
    let big = tower.field(d.splitting_degree());
    let mut f = Func::one(&big);
    let mut s = Pt::O;
    for (pt, m) in d.geometric_points(c, &big) {
        if pt.inf {
            continue;
        }
        let (fm, r) = miller(c, &big, &pt, m);
        f = f.mul(c, &big, &fm).mul(c, &big, &chord(c, &big, &s, &r));
        s = c.add(&big, &s, &r);
    }
    debug_assert!(s.inf);
    let lc = f.lc();
    let f = f.scale(&big, &big.inv(&lc));
    let out = f
        .restrict(&big, d.base)
        .ok_or_else(|| Error::Internal("normalized function is not defined over the base".into()))?;
    debug_assert_eq!(divisor_of_function(c, &tower.field(d.base), &out), *d);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::curve_search;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_poly_func(c: &Curve, k: &Field, rng: &mut ChaCha8Rng, da: usize, db: usize) -> Func {
        let a: Poly = (0..=da).map(|_| k.random(rng)).collect();
        let b: Poly = (0..=db).map(|_| k.random(rng)).collect();
        let _ = c;
        Func::poly(k, a, b)
    }

    #[test]
    fn divisor_of_x_is_two_points_minus_two_infinity() {
        let (c, _) = curve_search(5, 1, 3).unwrap();
        let k = c.base_field().clone();
        let d = divisor_of_function(&c, &k, &Func::x(&k));
        assert_eq!(d.degree(), 0);
        assert_eq!(d.at_infinity(), -2);
        assert!(d.sigma(&c).inf);
        assert!(divisor_of_function(&c, &k, &Func::constant(&k, k.from_int(3))).is_zero());
    }

    #[test]
    fn random_functions_have_principal_divisors() {
        for (p, r, n) in [(7u32, 1usize, 5u128), (2, 3, 5), (3, 2, 5)] {
            let (c, _) = curve_search(p, r, n).unwrap();
            let k = Tower::get(p).field(2 * r);
            let mut rng = ChaCha8Rng::seed_from_u64(p as u64);
            for _ in 0..15 {
                let f = random_poly_func(&c, &k, &mut rng, 3, 2);
                let g = random_poly_func(&c, &k, &mut rng, 2, 1);
                let h = f.div(&c, &k, &g);
                let dv = divisor_of_function(&c, &k, &h);
                assert_eq!(dv.degree(), 0);
                assert!(dv.sigma(&c).inf);
                assert_eq!(dv.at_infinity(), g.numerator_pole_order() as i64 - f.numerator_pole_order() as i64);
                let df = divisor_of_function(&c, &k, &f);
                let dg = divisor_of_function(&c, &k, &g);
                assert_eq!(dv, df.sub(&dg));
            }
        }
    }

    #[test]
    fn miller_round_trip() {
        let (c, _) = curve_search(5, 1, 5).unwrap();
        let k = Tower::get(5).field(2);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let a = c.random_affine(&k, &mut rng);
            let b = c.random_affine(&k, &mut rng);
            let s = c.add(&k, &a, &b);
            let mut d = Divisor::new(2);
            d.add_point(&c, &k, &a, 1);
            d.add_point(&c, &k, &b, 1);
            d.add_point(&c, &k, &c.neg(&k, &s), 1);
            d.add_place(Place::infinity(2), -3);
            let f = function_with_divisor(&c, &d).unwrap();
            assert_eq!(divisor_of_function(&c, &k, &f), d);
            assert_eq!(f.lc(), k.one());
        }
        // N·([P] - [0_E]) is principal.
        let n = c.order_over_field(&k).unwrap() as i64;
        let a = c.random_affine(&k, &mut rng);
        let mut d = Divisor::new(2);
        d.add_point(&c, &k, &a, n);
        d.add_place(Place::infinity(2), -n);
        let f = function_with_divisor(&c, &d).unwrap();
        assert_eq!(divisor_of_function(&c, &k, &f), d);
        let mut bad = Divisor::new(2);
        bad.add_point(&c, &k, &a, 1);
        bad.add_place(Place::infinity(2), -1);
        assert!(function_with_divisor(&c, &bad).is_err());
    }

    #[test]
    fn translation_functions_match_pointwise() {
        let (c, q) = curve_search(7, 1, 5).unwrap();
        let k = Tower::get(7).field(2);
        let qk = c.embed(&k, 1, &q);
        let (xs, ys) = translate(&c, &k, &qk);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let pt = c.random_affine(&k, &mut rng);
            let sum = c.add(&k, &pt, &qk);
            if sum.inf || pt.x == qk.x {
                continue;
            }
            assert_eq!(xs.eval(&c, &k, &pt).unwrap(), sum.x);
            assert_eq!(ys.eval(&c, &k, &pt).unwrap(), sum.y);
        }
    }

    #[test]
    fn norms_are_transitive() {
        let (c, _) = curve_search(3, 1, 5).unwrap();
        let k4 = Tower::get(3).field(4);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..10 {
            let mut d = Divisor::new(4);
            for _ in 0..3 {
                let pt = c.random_affine(&k4, &mut rng);
                d.add_point(&c, &k4, &pt, 1);
            }
            let direct = d.norm_to(&c, 1);
            let stepped = d.norm_to(&c, 2).norm_to(&c, 1);
            assert_eq!(direct, stepped);
            assert_eq!(direct.degree(), 4 * d.degree());
        }
        // A degree-1 place over F_9 with a non-rational point normalizes to
        // one degree-2 place over F_3.
        let k2 = Tower::get(3).field(2);
        loop {
            let pt = c.random_affine(&k2, &mut rng);
            if c.min_degree(&k2, &pt) == 2 {
                let d = Divisor::from_place(Place::of_point(&c, &k2, &pt, 2), 1);
                let nd = d.norm_to(&c, 1);
                assert_eq!(nd.terms.len(), 1);
                assert_eq!(nd.terms.keys().next().unwrap().deg, 2);
                break;
            }
        }
    }
}
