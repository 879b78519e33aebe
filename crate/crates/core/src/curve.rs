//! Elliptic curves in generalized Weierstrass form
//! `y^2 + a1·x·y + a3·y = x^3 + a2·x^2 + a4·x + a6` over F_q, with points over
//! any extension of F_q, point counting and the deterministic curve search.
//!
//! A [`Curve`] stores its coefficients in the representation of F_q. Every
//! point operation takes the field the coordinates live in explicitly; that
//! field must contain F_q.

use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::factor;
use crate::algebra::int;
use crate::algebra::poly;
use crate::algebra::{Fe, Field, Tower};
use crate::error::{Error, Result};

/// Point on a curve over some field; `inf` marks the neutral element `0_E`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Pt {
    pub inf: bool,
    pub x: Fe,
    pub y: Fe,
}

impl Pt {
    pub const O: Pt = Pt { inf: true, x: Fe::ZERO, y: Fe::ZERO };

    pub fn new(x: Fe, y: Fe) -> Pt {
        Pt { inf: false, x, y }
    }
}

/// Largest base field for which point counting by enumeration is allowed.
pub const ENUMERATION_BOUND: u128 = 1 << 22;

pub struct Curve {
    p: u32,
    r: usize,
    a: [Fe; 5],
    base: Arc<Field>,
    embedded: RwLock<BTreeMap<usize, [Fe; 5]>>,
    order: RwLock<Option<u128>>,
}

impl Clone for Curve {
    fn clone(&self) -> Self {
        Curve::new(self.p, self.r, self.a)
    }
}

impl PartialEq for Curve {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.r == other.r && self.a == other.a
    }
}

impl Eq for Curve {}

impl std::fmt::Debug for Curve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Curve(p={}, r={}, a={:?})", self.p, self.r, self.a)
    }
}

/// JSON form of a curve: characteristic, base degree and hex coefficients
/// `a1, a2, a3, a4, a6`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveDoc {
    pub p: u32,
    pub r: usize,
    pub a: [String; 5],
}

impl Curve {
    /// Curve over F_{p^r} with coefficients `[a1, a2, a3, a4, a6]`.
    pub fn new(p: u32, r: usize, a: [Fe; 5]) -> Curve {
        let base = Tower::get(p).field(r);
        Curve {
            p,
            r,
            a,
            base,
            embedded: RwLock::new(BTreeMap::new()),
            order: RwLock::new(None),
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Absolute degree `r` of F_q over F_p.
    pub fn base_degree(&self) -> usize {
        self.r
    }

    pub fn base_field(&self) -> &Arc<Field> {
        &self.base
    }

    /// `q = p^r`.
    pub fn q(&self) -> u128 {
        self.base.order().expect("base field order fits in 128 bits")
    }

    /// Coefficients in the representation of F_q.
    pub fn coefficients(&self) -> [Fe; 5] {
        self.a
    }

    /// Coefficients embedded into `k`.
    pub fn coeffs(&self, k: &Field) -> [Fe; 5] {
        let m = k.degree();
        assert!(m % self.r == 0, "{k:?} does not contain the base field of the curve");
        if let Some(c) = self.embedded.read().expect("coefficient cache").get(&m) {
            return *c;
        }
        let c = self.a.map(|v| k.embed_from(self.r, &v));
        self.embedded.write().expect("coefficient cache").insert(m, c);
        c
    }

    pub fn to_doc(&self) -> CurveDoc {
        CurveDoc {
            p: self.p,
            r: self.r,
            a: self.a.map(|v| self.base.to_hex(&v)),
        }
    }

    pub fn from_doc(doc: &CurveDoc) -> Result<Curve> {
        if !crate::algebra::int::is_prime(doc.p as u128) || doc.p > crate::algebra::field::MAX_CHAR {
            return Err(Error::Format(format!("unsupported characteristic {}", doc.p)));
        }
        if doc.r == 0 || doc.r > crate::algebra::field::MAX_DEGREE {
            return Err(Error::Format(format!("unsupported base degree {}", doc.r)));
        }
        let base = Tower::get(doc.p).field(doc.r);
        let mut a = [Fe::ZERO; 5];
        for (slot, s) in a.iter_mut().zip(&doc.a) {
            *slot = base.from_hex(s).ok_or_else(|| Error::Format(format!("bad coefficient {s}")))?;
        }
        let c = Curve::new(doc.p, doc.r, a);
        if c.discriminant().is_zero() {
            return Err(Error::Format("singular curve".into()));
        }
        Ok(c)
    }

    /// `h(x) = a1·x + a3`, so that the equation reads `y^2 + h·y = f`.
    pub fn h_at(&self, k: &Field, x: &Fe) -> Fe {
        let c = self.coeffs(k);
        k.add(&k.mul(&c[0], x), &c[2])
    }

    /// `f(x) = x^3 + a2·x^2 + a4·x + a6`.
    pub fn f_at(&self, k: &Field, x: &Fe) -> Fe {
        let c = self.coeffs(k);
        let x2 = k.sqr(x);
        let mut v = k.mul(&x2, x);
        v = k.add(&v, &k.mul(&c[1], &x2));
        v = k.add(&v, &k.mul(&c[3], x));
        k.add(&v, &c[4])
    }

    /// `h` as a polynomial in `x` over `k`.
    pub fn h_poly(&self, k: &Field) -> Vec<Fe> {
        let c = self.coeffs(k);
        crate::algebra::poly::trimmed(vec![c[2], c[0]])
    }

    /// `f` as a polynomial in `x` over `k`.
    pub fn f_poly(&self, k: &Field) -> Vec<Fe> {
        let c = self.coeffs(k);
        vec![c[4], c[3], c[1], k.one()]
    }

    pub fn discriminant(&self) -> Fe {
        let k = &*self.base;
        let [a1, a2, a3, a4, a6] = self.a;
        let b2 = k.add(&k.sqr(&a1), &k.scale(&a2, 4));
        let b4 = k.add(&k.scale(&a4, 2), &k.mul(&a1, &a3));
        let b6 = k.add(&k.sqr(&a3), &k.scale(&a6, 4));
        let b8 = k.sub(
            &k.add(&k.mul(&k.sqr(&a1), &a6), &k.scale(&k.mul(&a2, &a6), 4)),
            &k.add(&k.mul(&k.mul(&a1, &a3), &a4), &k.sub(&k.sqr(&a4), &k.mul(&a2, &k.sqr(&a3)))),
        );
        let t1 = k.neg(&k.mul(&k.sqr(&b2), &b8));
        let t2 = k.scale(&k.mul(&k.sqr(&b4), &b4), 8);
        let t3 = k.scale(&k.sqr(&b6), 27);
        let t4 = k.scale(&k.mul(&k.mul(&b2, &b4), &b6), 9);
        k.add(&k.sub(&k.sub(&t1, &t2), &t3), &t4)
    }

    /// `(b2, b4, b6, b8)` over `k`.
    pub fn b_invariants(&self, k: &Field) -> [Fe; 4] {
        let [a1, a2, a3, a4, a6] = self.coeffs(k);
        let b2 = k.add(&k.sqr(&a1), &k.scale(&a2, 4));
        let b4 = k.add(&k.scale(&a4, 2), &k.mul(&a1, &a3));
        let b6 = k.add(&k.sqr(&a3), &k.scale(&a6, 4));
        let b8 = k.sub(
            &k.add(&k.mul(&k.sqr(&a1), &a6), &k.scale(&k.mul(&a2, &a6), 4)),
            &k.add(&k.mul(&k.mul(&a1, &a3), &a4), &k.sub(&k.sqr(&a4), &k.mul(&a2, &k.sqr(&a3)))),
        );
        [b2, b4, b6, b8]
    }

    /// Polynomial in `x` whose roots are the x-coordinates of the points `R`
    /// with `2R = S` (for `S ≠ 0_E`), or of the nonzero 2-torsion points
    /// (for `S = 0_E`).
    pub fn halving_poly(&self, k: &Field, s: &Pt) -> Vec<Fe> {
        let [b2, b4, b6, b8] = self.b_invariants(k);
        // x(2R) = (x^4 - b4 x^2 - 2 b6 x - b8) / (4x^3 + b2 x^2 + 2 b4 x + b6)
        let den = vec![b6, k.scale(&b4, 2), b2, k.from_int(4)];
        if s.inf {
            return poly::trimmed(den);
        }
        let num = vec![k.neg(&b8), k.neg(&k.scale(&b6, 2)), k.neg(&b4), Fe::ZERO, k.one()];
        poly::sub(k, &num, &poly::scale(k, &den, &s.x))
    }

    /// All `R ∈ E(k)` with `2R = S`.
    pub fn halve(&self, k: &Field, s: &Pt) -> Vec<Pt> {
        let mut out = Vec::new();
        if s.inf {
            out.push(Pt::O);
        }
        for x in factor::distinct_roots(k, &self.halving_poly(k, s)) {
            for r in self.lift_x(k, &x) {
                if self.double(k, &r) == *s {
                    out.push(r);
                }
            }
        }
        out.sort();
        out
    }

    pub fn is_on(&self, k: &Field, pt: &Pt) -> bool {
        if pt.inf {
            return true;
        }
        let lhs = k.add(&k.sqr(&pt.y), &k.mul(&self.h_at(k, &pt.x), &pt.y));
        lhs == self.f_at(k, &pt.x)
    }

    pub fn neg(&self, k: &Field, pt: &Pt) -> Pt {
        if pt.inf {
            return *pt;
        }
        Pt::new(pt.x, k.sub(&k.neg(&pt.y), &self.h_at(k, &pt.x)))
    }

    pub fn add(&self, k: &Field, a: &Pt, b: &Pt) -> Pt {
        if a.inf {
            return *b;
        }
        if b.inf {
            return *a;
        }
        let c = self.coeffs(k);
        let lambda = if a.x == b.x {
            let denom = k.add(&k.add(&k.scale(&a.y, 2), &k.mul(&c[0], &a.x)), &c[2]);
            if a.y != b.y || denom.is_zero() {
                return Pt::O;
            }
            let num = k.sub(
                &k.add(&k.add(&k.scale(&k.sqr(&a.x), 3), &k.scale(&k.mul(&c[1], &a.x), 2)), &c[3]),
                &k.mul(&c[0], &a.y),
            );
            k.div(&num, &denom)
        } else {
            k.div(&k.sub(&b.y, &a.y), &k.sub(&b.x, &a.x))
        };
        let nu = k.sub(&a.y, &k.mul(&lambda, &a.x));
        let x3 = k.sub(
            &k.sub(&k.sub(&k.add(&k.sqr(&lambda), &k.mul(&c[0], &lambda)), &c[1]), &a.x),
            &b.x,
        );
        let y3 = k.sub(&k.sub(&k.neg(&k.mul(&k.add(&lambda, &c[0]), &x3)), &nu), &c[2]);
        Pt::new(x3, y3)
    }

    pub fn sub(&self, k: &Field, a: &Pt, b: &Pt) -> Pt {
        self.add(k, a, &self.neg(k, b))
    }

    pub fn double(&self, k: &Field, a: &Pt) -> Pt {
        self.add(k, a, a)
    }

    /// `[e]·P` for a nonnegative scalar.
    pub fn mul(&self, k: &Field, pt: &Pt, mut e: u128) -> Pt {
        let mut acc = Pt::O;
        let mut base = *pt;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add(k, &acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.double(k, &base);
            }
        }
        acc
    }

    /// `[e]·P` for a signed scalar.
    pub fn mul_signed(&self, k: &Field, pt: &Pt, e: i128) -> Pt {
        let r = self.mul(k, pt, e.unsigned_abs());
        if e < 0 {
            self.neg(k, &r)
        } else {
            r
        }
    }

    /// Exact order of `pt`, given a multiple `n` of it.
    pub fn point_order(&self, k: &Field, pt: &Pt, n: u128) -> u128 {
        debug_assert!(self.mul(k, pt, n).inf);
        let mut ord = n;
        for (l, _) in int::factorize(n) {
            while ord % l == 0 && self.mul(k, pt, ord / l).inf {
                ord /= l;
            }
        }
        ord
    }

    /// Applies the `q^j`-power Frobenius to the coordinates.
    pub fn frob(&self, k: &Field, pt: &Pt, j: i64) -> Pt {
        if pt.inf {
            return *pt;
        }
        let e = j * self.r as i64;
        Pt::new(k.frob(&pt.x, e), k.frob(&pt.y, e))
    }

    /// Moves a point from the subfield `from` into `to`.
    pub fn embed(&self, to: &Field, from_degree: usize, pt: &Pt) -> Pt {
        if pt.inf {
            return *pt;
        }
        Pt::new(to.embed_from(from_degree, &pt.x), to.embed_from(from_degree, &pt.y))
    }

    /// Expresses a point of `k` in the subfield of degree `d`, if it lies there.
    pub fn restrict(&self, k: &Field, d: usize, pt: &Pt) -> Option<Pt> {
        if pt.inf {
            return Some(*pt);
        }
        Some(Pt::new(k.restrict_to(d, &pt.x)?, k.restrict_to(d, &pt.y)?))
    }

    /// Smallest absolute degree of a subfield of `k` containing both
    /// coordinates and F_q.
    pub fn min_degree(&self, k: &Field, pt: &Pt) -> usize {
        if pt.inf {
            return self.r;
        }
        let dx = k.minimal_degree(&pt.x);
        let dy = k.minimal_degree(&pt.y);
        int::lcm(int::lcm(dx as u128, dy as u128), self.r as u128) as usize
    }

    /// All points with the given x-coordinate, sorted.
    pub fn lift_x(&self, k: &Field, x: &Fe) -> Vec<Pt> {
        let h = self.h_at(k, x);
        let f = self.f_at(k, x);
        factor::solve_quadratic(k, &h, &k.neg(&f))
            .into_iter()
            .map(|y| Pt::new(*x, y))
            .collect()
    }

    /// Uniformly random point of `E(k)` (including `0_E`), by rejection on
    /// the x-coordinate.
    pub fn random_point<R: Rng + ?Sized>(&self, k: &Field, rng: &mut R) -> Pt {
        let size = k.order();
        loop {
            // Index `|k|` stands for the point at infinity.
            if let Some(q) = size {
                if rng.gen_range(0..=q) == q {
                    if rng.gen_bool(0.5) {
                        return Pt::O;
                    }
                    continue;
                }
            }
            let x = k.random(rng);
            let ys = self.lift_x(k, &x);
            match ys.len() {
                0 => continue,
                1 => {
                    if rng.gen_bool(0.5) {
                        return ys[0];
                    }
                }
                _ => return ys[rng.gen_range(0..2)],
            }
        }
    }

    /// Uniformly random affine point.
    pub fn random_affine<R: Rng + ?Sized>(&self, k: &Field, rng: &mut R) -> Pt {
        loop {
            let p = self.random_point(k, rng);
            if !p.inf {
                return p;
            }
        }
    }

    /// All points of `E(k)` in enumeration order: `0_E` first, then by the
    /// index of x and sorted y.
    pub fn points(&self, k: &Field) -> Result<Vec<Pt>> {
        let q = k.order().filter(|&q| q <= ENUMERATION_BOUND).ok_or_else(|| {
            Error::Params(format!("{k:?} is too large for point enumeration"))
        })?;
        let mut out = vec![Pt::O];
        for i in 0..q {
            let x = k.from_index(i);
            out.extend(self.lift_x(k, &x));
        }
        Ok(out)
    }

    /// Number of points over `k` by direct enumeration of x-coordinates.
    pub fn count_by_enumeration(&self, k: &Field) -> Result<u128> {
        let q = k.order().filter(|&q| q <= ENUMERATION_BOUND).ok_or_else(|| {
            Error::Params(format!("{k:?} is too large for point enumeration"))
        })?;
        let mut n: u128 = 1;
        if self.p == 2 {
            for i in 0..q {
                let x = k.from_index(i);
                let h = self.h_at(k, &x);
                if h.is_zero() {
                    n += 1;
                } else {
                    let c = k.div(&self.f_at(k, &x), &k.sqr(&h));
                    if k.trace(&c) == 0 {
                        n += 2;
                    }
                }
            }
        } else {
            let half = (q - 1) / 2;
            let one = k.one();
            for i in 0..q {
                let x = k.from_index(i);
                let h = self.h_at(k, &x);
                let disc = k.add(&k.sqr(&h), &k.scale(&self.f_at(k, &x), 4));
                if disc.is_zero() {
                    n += 1;
                } else if k.pow(&disc, half) == one {
                    n += 2;
                }
            }
        }
        Ok(n)
    }

    /// `N = |E(F_q)|`, cached after the first call.
    pub fn order(&self) -> Result<u128> {
        if let Some(n) = *self.order.read().expect("order cache") {
            return Ok(n);
        }
        let n = self.count_by_enumeration(&self.base)?;
        *self.order.write().expect("order cache") = Some(n);
        Ok(n)
    }

    /// Trace of Frobenius `t = q + 1 - N`.
    pub fn trace(&self) -> Result<i128> {
        Ok(self.q() as i128 + 1 - self.order()? as i128)
    }

    pub fn is_ordinary(&self) -> Result<bool> {
        Ok(self.trace()?.rem_euclid(self.p as i128) != 0)
    }

    /// `|E(F_{q^j})|` from the trace recursion, when it fits in 128 bits.
    pub fn order_over(&self, j: u32) -> Result<Option<u128>> {
        let t = self.trace()?;
        let q = self.q() as i128;
        let (mut s0, mut s1): (i128, i128) = (2, t);
        for _ in 1..j {
            let s2 = t.checked_mul(s1).and_then(|a| q.checked_mul(s0).and_then(|b| a.checked_sub(b)));
            match s2 {
                Some(v) => {
                    s0 = s1;
                    s1 = v;
                }
                None => return Ok(None),
            }
        }
        let qj = match int::ipow(q as u128, j) {
            Some(v) => v as i128,
            None => return Ok(None),
        };
        Ok(qj.checked_add(1).and_then(|v| v.checked_sub(s1)).map(|v| v as u128))
    }

    /// Group order over the field `k` (which must contain F_q).
    pub fn order_over_field(&self, k: &Field) -> Result<u128> {
        let j = (k.degree() / self.r) as u32;
        self.order_over(j)?
            .ok_or_else(|| Error::Params(format!("group order over {k:?} exceeds 128 bits")))
    }

    /// First point of `E(F_q)` in enumeration order with exact order `n`.
    pub fn find_point_of_order(&self, n: u128) -> Result<Option<Pt>> {
        if n == 1 {
            return Ok(Some(Pt::O));
        }
        let total = self.order()?;
        if total % n != 0 {
            return Ok(None);
        }
        let k = &*self.base;
        for pt in self.points(k)? {
            if self.mul(k, &pt, n).inf && self.point_order(k, &pt, n) == n {
                return Ok(Some(pt));
            }
        }
        Ok(None)
    }

    /// All points of exact order `n` over F_q, in enumeration order.
    pub fn points_of_order(&self, n: u128) -> Result<Vec<Pt>> {
        let total = self.order()?;
        if total % n != 0 {
            return Ok(Vec::new());
        }
        let k = &*self.base;
        Ok(self
            .points(k)?
            .into_iter()
            .filter(|pt| self.mul(k, pt, n).inf && self.point_order(k, pt, n) == n)
            .collect())
    }
}

/// Ordered candidate curves for the search over F_{p^r}: in odd
/// characteristic `a1 = a3 = 0` with `(a2, a4, a6)` in lexicographic index
/// order (`a2 ≠ 0` in characteristic 3, where `a2 = 0` forces a
/// supersingular curve); in characteristic 2 the ordinary family
/// `a1 = 1, a3 = a4 = 0` with `(a2, a6)` in lexicographic order.
pub fn candidate_curves(p: u32, r: usize) -> impl Iterator<Item = Curve> {
    let k = Tower::get(p).field(r);
    let q = k.order().expect("base field order fits in 128 bits");
    let dims: u32 = if p == 2 { 2 } else { 3 };
    let total = q.pow(dims);
    (0..total).filter_map(move |idx| {
        let mut v = idx;
        let mut digits = Vec::with_capacity(dims as usize);
        for _ in 0..dims {
            digits.push(v % q);
            v /= q;
        }
        digits.reverse();
        let a = if p == 2 {
            [k.one(), k.from_index(digits[0]), Fe::ZERO, Fe::ZERO, k.from_index(digits[1])]
        } else {
            if p == 3 && digits[0] == 0 {
                return None;
            }
            [Fe::ZERO, k.from_index(digits[0]), Fe::ZERO, k.from_index(digits[1]), k.from_index(digits[2])]
        };
        let c = Curve::new(p, r, a);
        if c.discriminant().is_zero() {
            None
        } else {
            Some(c)
        }
    })
}

/// First ordinary curve over F_{p^r} (in candidate order) whose group has a
/// point of exact order `n`, with that point.
pub fn curve_search(p: u32, r: usize, n: u128) -> Result<(Curve, Pt)> {
    let q = Tower::get(p).field(r).order().unwrap_or(u128::MAX);
    if q > ENUMERATION_BOUND {
        return Err(Error::Params(format!("F_{p}^{r} is too large for the exhaustive curve search")));
    }
    let hasse_max = q + 1 + 2 * isqrt(q) + 2;
    if n > hasse_max {
        return Err(Error::Params(format!("no curve over F_{p}^{r} has a point of order {n}")));
    }
    for c in candidate_curves(p, r) {
        let order = c.order()?;
        if order % n != 0 || !c.is_ordinary()? {
            continue;
        }
        if let Some(pt) = c.find_point_of_order(n)? {
            return Ok((c, pt));
        }
    }
    Err(Error::Params(format!("exhausted all curves over F_{p}^{r} without a point of order {n}")))
}

pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn curve(p: u32, r: usize, a: [i64; 5]) -> Curve {
        let k = Tower::get(p).field(r);
        Curve::new(p, r, a.map(|v| k.from_int(v)))
    }

    #[test]
    fn y2_x3_plus_x_over_f3_has_four_points() {
        let c = curve(3, 1, [0, 0, 0, 1, 0]);
        assert_eq!(c.order().unwrap(), 4);
        assert_eq!(c.points(c.base_field()).unwrap().len(), 4);
    }

    #[test]
    fn group_law_axioms_on_random_points() {
        for (p, r, a) in [(5u32, 2usize, [0i64, 1, 0, 2, 1]), (2, 5, [1, 1, 0, 0, 1]), (3, 3, [0, 1, 0, 1, 2])] {
            let c = curve(p, r, a);
            assert!(!c.discriminant().is_zero());
            let k = Tower::get(p).field(r * 2);
            let mut rng = ChaCha8Rng::seed_from_u64(p as u64);
            let n = c.order_over_field(&k).unwrap();
            for _ in 0..30 {
                let a = c.random_point(&k, &mut rng);
                let b = c.random_point(&k, &mut rng);
                let d = c.random_point(&k, &mut rng);
                assert!(c.is_on(&k, &a));
                assert_eq!(c.add(&k, &a, &b), c.add(&k, &b, &a));
                assert_eq!(c.add(&k, &c.add(&k, &a, &b), &d), c.add(&k, &a, &c.add(&k, &b, &d)));
                assert!(c.add(&k, &a, &c.neg(&k, &a)).inf);
                assert!(c.mul(&k, &a, n).inf);
                assert_eq!(c.frob(&k, &c.add(&k, &a, &b), 1), c.add(&k, &c.frob(&k, &a, 1), &c.frob(&k, &b, 1)));
            }
        }
    }

    #[test]
    fn trace_recursion_matches_enumeration() {
        for (p, r, a) in [(3u32, 1usize, [0i64, 1, 0, 1, 1]), (2, 2, [1, 1, 0, 0, 1]), (7, 1, [0, 0, 0, 3, 2])] {
            let c = curve(p, r, a);
            for j in 1..=4u32 {
                let k = Tower::get(p).field(r * j as usize);
                assert_eq!(c.order_over(j).unwrap().unwrap(), c.count_by_enumeration(&k).unwrap());
            }
            let q = c.q() as i128;
            let t = c.trace().unwrap();
            assert!(t * t <= 4 * q);
        }
    }

    #[test]
    fn point_of_order_four_on_cyclic_group_of_order_eight() {
        // Find a cyclic E(F_5) of order 8 by enumeration, then ask for order 4.
        let mut found = false;
        for c in candidate_curves(5, 1) {
            if c.order().unwrap() != 8 {
                continue;
            }
            let k = c.base_field().clone();
            let pts = c.points(&k).unwrap();
            if !pts.iter().any(|pt| c.point_order(&k, pt, 8) == 8) {
                continue;
            }
            let pt = c.find_point_of_order(4).unwrap().unwrap();
            assert_eq!(c.point_order(&k, &pt, 8), 4);
            found = true;
            break;
        }
        assert!(found);
    }

    #[test]
    fn search_results_are_ordinary_with_requested_torsion() {
        let (c, q) = curve_search(5, 1, 2).unwrap();
        assert!(c.is_ordinary().unwrap());
        assert_eq!(c.point_order(c.base_field(), &q, 2), 2);
        assert!(curve_search(2, 1, 100).is_err());
        assert_eq!(c.find_point_of_order(1).unwrap(), Some(Pt::O));
    }
}
