//! The elliptic-curve model of F_{q^n}: an ordinary curve `E/F_q`, a rational
//! point `Q` of order `n`, and a degree-`n` place `𝓘` whose points satisfy
//! `φ_q(P) = P + Q`. The residue field at `𝓘` is F_{q^n}.
//!
//! The field F_{q^n} is the registry field of absolute degree `r·n`; the
//! representative `P_𝓘` is stored with coordinates in it, so evaluation of a
//! function at `𝓘` is plain evaluation at `P_𝓘`.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::factor;
use crate::algebra::field::MAX_DEGREE;
use crate::algebra::int;
use crate::algebra::poly::{self, Poly};
use crate::algebra::{Fe, Field, Tower};
use crate::curve::{candidate_curves, Curve, CurveDoc, Pt};
use crate::divisor::{self, Func, Place};
use crate::error::{Error, Result};

/// Version tag carried by every JSON document the crate writes.
pub const SCHEMA_VERSION: u32 = 1;

/// Largest supported `q^n` (group-order arithmetic uses 64-bit moduli).
pub const MAX_FIELD_BITS: u32 = 62;

/// Parameters derived from a requested `(p, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub p: u32,
    /// Requested extension degree.
    pub n_requested: usize,
    /// Extension degree actually modelled (`n` or `5n`).
    pub n: usize,
    /// `q = p^r`.
    pub r: usize,
    pub r_override: bool,
}

/// Smallest `r ≥ 1` with `4·p^r ≥ n^4`, i.e. `p^r ≥ n^4 / 4` in exact
/// integer arithmetic.
pub fn default_r(p: u32, n: usize) -> usize {
    let target = (n as u128).pow(4);
    let mut r = 1;
    let mut pr = p as u128;
    while 4 * pr < target {
        pr *= p as u128;
        r += 1;
    }
    r
}

/// `n` itself if it has a prime factor at least 5, otherwise `5n`, so that
/// the order of `Q` is never a product of 2s and 3s.
pub fn effective_n(n: usize) -> usize {
    let has_big = int::factorize(n as u128).iter().any(|&(l, _)| l >= 5);
    if has_big {
        n
    } else {
        5 * n
    }
}

pub fn choose_parameters(p: u32, n: usize, r_override: Option<usize>) -> Result<Params> {
    if !int::is_prime(p as u128) || p > crate::algebra::field::MAX_CHAR {
        return Err(Error::Params(format!("p = {p} is not a supported prime (p ≤ 251)")));
    }
    if n < 2 {
        return Err(Error::Params(format!("extension degree n = {n} must be at least 2")));
    }
    let r = match r_override {
        Some(0) => return Err(Error::Params("r must be positive".into())),
        Some(r) => r,
        None => default_r(p, n),
    };
    Ok(Params { p, n_requested: n, n: effective_n(n), r, r_override: r_override.is_some() })
}

fn check_size(p: u32, r: usize, n: usize) -> Result<()> {
    if r * n > MAX_DEGREE {
        return Err(Error::Params(format!(
            "F_{p}^{} exceeds the supported absolute degree {MAX_DEGREE}",
            r * n
        )));
    }
    let bits = (r * n) as f64 * (p as f64).log2();
    if bits > MAX_FIELD_BITS as f64 {
        return Err(Error::Params(format!("q^n = {p}^{} exceeds 2^{MAX_FIELD_BITS}", r * n)));
    }
    Ok(())
}

pub struct Model {
    pub params: Params,
    pub curve: Curve,
    /// `Q` over F_q.
    pub q_pt: Pt,
    /// Representative of `𝓘` over F_{q^n}.
    pub pi: Pt,
    /// Minimal polynomial of `x(P_𝓘)` over F_q.
    pub ipoly: Poly,
    /// `y ≡ η(x) mod I(x)` on `𝓘`.
    pub eta: Poly,
    /// `N = |E(F_q)|`.
    pub order: u128,
    /// Largest divisor of `q^n - 1` coprime to `N`.
    pub ell: u128,
    /// `(q^n - 1) / ℓ`.
    pub s: u128,
    base: Arc<Field>,
    field: Arc<Field>,
}

impl std::fmt::Debug for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Model(p={}, r={}, n={}, {:?})", self.params.p, self.params.r, self.params.n, self.curve)
    }
}

/// One Frobenius orbit of `𝒬`.
#[derive(Clone, Debug)]
pub struct Component {
    /// Smallest point of the orbit.
    pub rep: Pt,
    pub points: Vec<Pt>,
}

/// All of `𝒬 = {P : φ_q(P) = P + Q}` grouped into orbits under `φ_q`, for a
/// curve and a point `Q` of order `n`. Points are over F_{q^n}.
pub fn kernel_components(c: &Curve, q_pt: &Pt, n: usize) -> Result<Vec<Component>> {
    let r = c.base_degree();
    let tower = Tower::get(c.characteristic());
    let k = tower.field(r);
    let big = tower.field(r * n);
    let qpow = c.q();
    // x(φ_q P) = x(P + Q):  x^q·d - a = b·y  with x∘τ_Q = (a + b·y)/d.
    let xq = divisor::translate_x(c, &k, q_pt);
    let mut xpow = vec![Fe::ZERO; qpow as usize + 1];
    xpow[qpow as usize] = k.one();
    let lhs = poly::sub(&k, &poly::mul(&k, &xpow, &xq.d), &xq.a);
    let h = c.h_poly(&k);
    let f = c.f_poly(&k);
    let res = poly::sub(
        &k,
        &poly::add(&k, &poly::mul(&k, &lhs, &lhs), &poly::mul(&k, &poly::mul(&k, &h, &lhs), &xq.b)),
        &poly::mul(&k, &f, &poly::mul(&k, &xq.b, &xq.b)),
    );
    let res_big = poly::embed(&big, r, &res);
    let lhs_big = poly::embed(&big, r, &lhs);
    let b_big = poly::embed(&big, r, &xq.b);
    let qb = c.embed(&big, r, q_pt);
    let mut members: Vec<Pt> = Vec::new();
    for x0 in factor::distinct_roots(&big, &res_big) {
        let bv = poly::eval(&big, &b_big, &x0);
        let cands = if bv.is_zero() {
            c.lift_x(&big, &x0)
        } else {
            let y0 = big.div(&poly::eval(&big, &lhs_big, &x0), &bv);
            vec![Pt::new(x0, y0)]
        };
        for pt in cands {
            if c.is_on(&big, &pt) && c.frob(&big, &pt, 1) == c.add(&big, &pt, &qb) {
                members.push(pt);
            }
        }
    }
    members.sort();
    members.dedup();
    let mut seen = std::collections::BTreeSet::new();
    let mut comps = Vec::new();
    for pt in &members {
        if seen.contains(pt) {
            continue;
        }
        let mut orbit = vec![*pt];
        let mut cur = c.frob(&big, pt, 1);
        while cur != *pt {
            orbit.push(cur);
            cur = c.frob(&big, &cur, 1);
        }
        for o in &orbit {
            seen.insert(*o);
        }
        let rep = *orbit.iter().min().expect("nonempty orbit");
        comps.push(Component { rep, points: orbit });
    }
    comps.sort_by(|a, b| a.rep.cmp(&b.rep));
    Ok(comps)
}

/// Minimal polynomial over F_q of `x(P)` and the interpolant `η` with
/// `η(x) = y` on the orbit, when `x(P)` has degree `n`.
fn place_data(c: &Curve, big: &Field, comp: &Component, n: usize) -> Option<(Poly, Poly)> {
    let r = c.base_degree();
    if comp.points.len() != n {
        return None;
    }
    let mut xs: Vec<Fe> = comp.points.iter().map(|p| p.x).collect();
    xs.sort();
    xs.dedup();
    if xs.len() != n {
        return None;
    }
    let ipoly_big = poly::from_roots(big, &comp.points.iter().map(|p| p.x).collect::<Vec<_>>());
    let ipoly = poly::restrict(big, r, &ipoly_big)?;
    // Lagrange interpolation of y over the n conjugates.
    let mut eta_big: Poly = Vec::new();
    for (i, pi) in comp.points.iter().enumerate() {
        let mut num = poly::constant(big.one());
        let mut den = big.one();
        for (j, pj) in comp.points.iter().enumerate() {
            if i != j {
                num = poly::mul(big, &num, &poly::linear(big, &pj.x));
                den = big.mul(&den, &big.sub(&pi.x, &pj.x));
            }
        }
        let term = poly::scale(big, &num, &big.div(&pi.y, &den));
        eta_big = poly::add(big, &eta_big, &term);
    }
    let eta = poly::restrict(big, r, &eta_big)?;
    Some((ipoly, eta))
}

/// Factors `q^n - 1 = ℓ·s` with `gcd(ℓ, N) = 1` and every prime of `s`
/// dividing `N`.
pub fn split_order(qn1: u128, n_order: u128) -> (u128, u128) {
    let mut ell = 1u128;
    let mut s = 1u128;
    for (l, e) in int::factorize(qn1) {
        let pe = l.pow(e);
        if n_order % l == 0 {
            s *= pe;
        } else {
            ell *= pe;
        }
    }
    (ell, s)
}

impl Model {
    /// Builds the model for `(p, n)`. Without an override, `r` is raised
    /// until the curve search succeeds.
    pub fn build(p: u32, n: usize, r_override: Option<usize>) -> Result<Model> {
        let mut params = choose_parameters(p, n, r_override)?;
        loop {
            check_size(p, params.r, params.n)?;
            match Model::build_with(params) {
                Ok(m) => return Ok(m),
                Err(Error::Params(msg)) if !params.r_override => {
                    log::debug!("r = {} failed ({msg}); trying r + 1", params.r);
                    params.r += 1;
                }
                Err(e) => return Err(e),
            }
        }
    }

    /// Builds the model for fixed parameters.
    pub fn build_with(params: Params) -> Result<Model> {
        let Params { p, r, n, .. } = params;
        check_size(p, r, n)?;
        let tower = Tower::get(p);
        let base = tower.field(r);
        let big = tower.field(r * n);
        let q = base.order().expect("small base field");
        if (n as u128) > q + 1 + 2 * crate::curve::isqrt(q) + 2 {
            return Err(Error::Params(format!("no curve over F_{p}^{r} has a point of order {n}")));
        }
        if q > crate::curve::ENUMERATION_BOUND {
            return Err(Error::Params(format!("F_{p}^{r} is too large for the exhaustive curve search")));
        }
        for c in candidate_curves(p, r) {
            let order = c.order()?;
            if order % n as u128 != 0 || !c.is_ordinary()? {
                continue;
            }
            for q_pt in c.points_of_order(n as u128)? {
                let comps = kernel_components(&c, &q_pt, n)?;
                for comp in &comps {
                    let Some((ipoly, eta)) = place_data(&c, &big, comp, n) else {
                        continue;
                    };
                    let qn = big.order().expect("bounded field size");
                    let (ell, s) = split_order(qn - 1, order);
                    let model = Model {
                        params,
                        curve: c.clone(),
                        q_pt,
                        pi: comp.rep,
                        ipoly,
                        eta,
                        order,
                        ell,
                        s,
                        base: base.clone(),
                        field: big.clone(),
                    };
                    return Ok(model);
                }
            }
        }
        Err(Error::Params(format!(
            "no ordinary curve over F_{p}^{r} with a point of order {n} and a usable degree-{n} place"
        )))
    }

    pub fn p(&self) -> u32 {
        self.params.p
    }

    pub fn r(&self) -> usize {
        self.params.r
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn q(&self) -> u128 {
        self.curve.q()
    }

    /// F_q.
    pub fn base(&self) -> &Arc<Field> {
        &self.base
    }

    /// F_{q^n}, the residue field at `𝓘`.
    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    /// `q^n - 1`.
    pub fn group_order(&self) -> u128 {
        self.field.order().expect("bounded field size") - 1
    }

    /// F_{q^{2^i}} (absolute degree `r·2^i`).
    pub fn level_field(&self, i: usize) -> Arc<Field> {
        Tower::get(self.p()).field(self.r() << i)
    }

    /// `𝓘` as a place over F_q.
    pub fn kernel_place(&self) -> Place {
        Place::of_point(&self.curve, &self.field, &self.pi, self.r())
    }

    /// `Q` over the field `k`.
    pub fn q_in(&self, k: &Field) -> Pt {
        self.curve.embed(k, self.r(), &self.q_pt)
    }

    /// Field holding the values at `P_𝓘` of functions over `k`: the
    /// compositum of `k` and F_{q^n}.
    pub fn eval_field(&self, k: &Field) -> Arc<Field> {
        let d = int::lcm(k.degree() as u128, self.field.degree() as u128) as usize;
        Tower::get(self.p()).field(d)
    }

    /// Value of a function over `k` at `P_𝓘`, in the compositum field.
    pub fn eval_at_kernel(&self, k: &Field, f: &Func) -> Result<Fe> {
        let big = self.eval_field(k);
        let pi = self.curve.embed(&big, self.field.degree(), &self.pi);
        debug_assert_eq!(f.m, k.degree());
        f.eval(&self.curve, &big, &pi)
            .map_err(|_| Error::Degenerate("function has a pole or an indeterminate form at the kernel place".into()))
    }

    /// Residue at `𝓘` of a function over F_q, as an element of F_{q^n}.
    pub fn residue_eval(&self, f: &Func) -> Result<Fe> {
        if f.m != self.r() {
            return Err(Error::Params("residue_eval expects a function over F_q".into()));
        }
        self.eval_at_kernel(&self.base, f)
    }

    /// `N_{k/F_q}(f)` evaluated at `𝓘`, as an element of F_{q^n}.
    ///
    /// The norm function is the product of the coefficient conjugates
    /// `f^{(q^j)}`, so its value is the product of their values at `P_𝓘`.
    /// This differs from the field norm of `f(P_𝓘)` when `k` and F_{q^n}
    /// share more than F_q.
    pub fn norm_eval(&self, k: &Field, f: &Func) -> Result<Fe> {
        let big = self.eval_field(k);
        let pi = self.curve.embed(&big, self.field.degree(), &self.pi);
        let mut acc = big.one();
        for j in 0..k.degree() / self.r() {
            let g = f.frob(k, (j * self.r()) as i64);
            let v = g
                .eval(&self.curve, &big, &pi)
                .map_err(|_| Error::Degenerate("function has a pole or an indeterminate form at the kernel place".into()))?;
            acc = big.mul(&acc, &v);
        }
        big.restrict_to(self.field.degree(), &acc)
            .ok_or_else(|| Error::Internal("norm does not lie in F_{q^n}".into()))
    }

    /// The model's checks, each with its outcome.
    pub fn verify(&self) -> ModelReport {
        let mut checks = Vec::new();
        let c = &self.curve;
        let big = &*self.field;
        let k = &*self.base;
        let n = self.n();
        let qb = self.q_in(big);
        let mut push = |name: &str, ok: bool| checks.push(Check { name: name.to_string(), ok });
        push("curve_nonsingular", !c.discriminant().is_zero());
        push("curve_ordinary", c.is_ordinary().unwrap_or(false));
        push("q_on_curve", c.is_on(k, &self.q_pt));
        push(
            "q_order_n",
            c.mul(k, &self.q_pt, n as u128).inf && c.point_order(k, &self.q_pt, n as u128) == n as u128,
        );
        push("pi_on_curve", c.is_on(big, &self.pi));
        let phi = c.frob(big, &self.pi, 1);
        push("frobenius_translation", phi == c.add(big, &self.pi, &qb));
        let mut orbit_ok = true;
        let mut cur = self.pi;
        let mut seen = Vec::new();
        for i in 0..n {
            let expect = c.add(big, &self.pi, &c.mul(big, &qb, i as u128));
            orbit_ok &= cur == expect && !seen.contains(&cur);
            seen.push(cur);
            cur = c.frob(big, &cur, 1);
        }
        orbit_ok &= cur == self.pi;
        push("place_degree_n", orbit_ok && self.kernel_place().deg == n);
        let ip_ok = self.ipoly.len() == n + 1
            && factor::is_irreducible(k, &self.ipoly)
            && poly::eval(big, &poly::embed(big, self.r(), &self.ipoly), &self.pi.x).is_zero();
        push("kernel_polynomial_irreducible", ip_ok);
        let eta_ok = poly::eval(big, &poly::embed(big, self.r(), &self.eta), &self.pi.x) == self.pi.y;
        push("eta_matches_y", eta_ok);
        let qn1 = self.group_order();
        push(
            "ell_and_s",
            self.ell * self.s == qn1
                && int::gcd(self.ell, self.order) == 1
                && int::factorize(self.s).iter().all(|&(l, _)| self.order % l == 0),
        );
        push("group_order", c.order().map(|v| v == self.order).unwrap_or(false));
        // Residue congruence f∘φ_q ≡ f∘τ_Q at 𝓘 for structured and random f.
        let mut funcs = vec![
            ("congruence_x", Func::x(k)),
            ("congruence_y", Func::y(k)),
            ("congruence_xy", Func::x(k).mul(c, k, &Func::y(k))),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(0x6d6f_64656c);
        let mut random_ok = true;
        for (name, f) in funcs.drain(..) {
            push(name, self.congruence_holds(&f).unwrap_or(false));
        }
        for _ in 0..100 {
            let f = random_function(c, k, &mut rng);
            random_ok &= self.congruence_holds(&f).unwrap_or(false);
        }
        push("congruence_random_100", random_ok);
        ModelReport { ok: checks.iter().all(|c| c.ok), checks }
    }

    /// Whether `f(P_𝓘)^q = (f∘τ_Q)(P_𝓘)` for a function over F_q.
    pub fn congruence_holds(&self, f: &Func) -> Result<bool> {
        let k = &*self.base;
        let lhs = self.residue_eval(f)?;
        let lhs_q = self.field.frob(&lhs, self.r() as i64);
        let composed = compose_translate(&self.curve, k, f, &self.q_pt);
        let rhs = self.residue_eval(&composed)?;
        Ok(lhs_q == rhs)
    }

    pub fn to_doc(&self) -> ModelDoc {
        let big = &*self.field;
        let k = &*self.base;
        ModelDoc {
            schema_version: SCHEMA_VERSION,
            p: self.p(),
            n_requested: self.params.n_requested,
            n: self.n(),
            r: self.r(),
            r_override: self.params.r_override,
            curve: self.curve.to_doc(),
            q_point: [k.to_hex(&self.q_pt.x), k.to_hex(&self.q_pt.y)],
            kernel_point: [big.to_hex(&self.pi.x), big.to_hex(&self.pi.y)],
            kernel_poly: self.ipoly.iter().map(|v| k.to_hex(v)).collect(),
            eta: self.eta.iter().map(|v| k.to_hex(v)).collect(),
            group_order: self.order.to_string(),
            ell: self.ell.to_string(),
            s: self.s.to_string(),
        }
    }

    /// Loads a model document and re-validates it.
    pub fn from_doc(doc: &ModelDoc) -> Result<Model> {
        if doc.schema_version != SCHEMA_VERSION {
            return Err(Error::Format(format!("unsupported schema version {}", doc.schema_version)));
        }
        let params = Params { p: doc.p, n_requested: doc.n_requested, n: doc.n, r: doc.r, r_override: doc.r_override };
        check_size(doc.p, doc.r, doc.n)?;
        let curve = Curve::from_doc(&doc.curve)?;
        if curve.base_degree() != doc.r || curve.characteristic() != doc.p {
            return Err(Error::Format("curve does not match the model parameters".into()));
        }
        let tower = Tower::get(doc.p);
        let base = tower.field(doc.r);
        let big = tower.field(doc.r * doc.n);
        let hex = |f: &Field, s: &str| f.from_hex(s).ok_or_else(|| Error::Format(format!("bad field element {s}")));
        let q_pt = Pt::new(hex(&base, &doc.q_point[0])?, hex(&base, &doc.q_point[1])?);
        let pi = Pt::new(hex(&big, &doc.kernel_point[0])?, hex(&big, &doc.kernel_point[1])?);
        let ipoly = doc.kernel_poly.iter().map(|s| hex(&base, s)).collect::<Result<Poly>>()?;
        let eta = doc.eta.iter().map(|s| hex(&base, s)).collect::<Result<Poly>>()?;
        let parse = |s: &str| s.parse::<u128>().map_err(|_| Error::Format(format!("bad integer {s}")));
        let model = Model {
            params,
            curve,
            q_pt,
            pi,
            ipoly,
            eta,
            order: parse(&doc.group_order)?,
            ell: parse(&doc.ell)?,
            s: parse(&doc.s)?,
            base,
            field: big,
        };
        let report = model.verify();
        if !report.ok {
            let failed: Vec<_> = report.checks.iter().filter(|c| !c.ok).map(|c| c.name.clone()).collect();
            return Err(Error::Verify(format!("model document fails checks: {}", failed.join(", "))));
        }
        Ok(model)
    }

    /// SHA-256 of the canonical JSON encoding of the model document.
    pub fn digest(&self) -> String {
        let json = serde_json::to_vec(&self.to_doc()).expect("model serializes");
        hex::encode(Sha256::digest(&json))
    }
}

/// `f ∘ τ_S` for a function over `k` and a point `S` over `k`.
pub fn compose_translate(c: &Curve, k: &Field, f: &Func, s: &Pt) -> Func {
    let (xs, ys) = divisor::translate(c, k, s);
    let horner = |p: &Poly| -> Func {
        let mut acc = Func::zero(k);
        for coef in p.iter().rev() {
            acc = acc.mul(c, k, &xs).add(c, k, &Func::constant(k, *coef));
        }
        acc
    };
    let num = horner(&f.a).add(c, k, &horner(&f.b).mul(c, k, &ys));
    num.div(c, k, &horner(&f.d))
}

/// Random function `(a + b·y)/d` over `k` with small degrees, used by the
/// model checks.
pub fn random_function<R: rand::Rng + ?Sized>(c: &Curve, k: &Field, rng: &mut R) -> Func {
    let _ = c;
    loop {
        let da = rng.gen_range(0..4);
        let db = rng.gen_range(0..3);
        let dd = rng.gen_range(0..3);
        let a: Poly = (0..=da).map(|_| k.random(rng)).collect();
        let b: Poly = (0..=db).map(|_| k.random(rng)).collect();
        let mut d: Poly = (0..dd).map(|_| k.random(rng)).collect();
        d.push(k.one());
        let f = Func::new(k, a, b, d);
        if !f.is_zero() {
            return f;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelReport {
    pub ok: bool,
    pub checks: Vec<Check>,
}

/// JSON form of a model. Integers that may exceed 2^53 are strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDoc {
    pub schema_version: u32,
    pub p: u32,
    pub n_requested: usize,
    pub n: usize,
    pub r: usize,
    pub r_override: bool,
    pub curve: CurveDoc,
    pub q_point: [String; 2],
    pub kernel_point: [String; 2],
    pub kernel_poly: Vec<String>,
    pub eta: Vec<String>,
    pub group_order: String,
    pub ell: String,
    pub s: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_formula_values() {
        assert_eq!(default_r(2, 5), 8);
        assert_eq!(default_r(3, 2), 2);
        // Independent check with floating point on a grid.
        for p in [2u32, 3, 5, 7] {
            for n in 2..12usize {
                let r = default_r(p, n);
                let exact = |r: usize| 4.0 * (p as f64).powi(r as i32) >= (n as f64).powi(4);
                assert!(exact(r));
                assert!(r == 1 || !exact(r - 1));
            }
        }
    }

    #[test]
    fn effective_degree() {
        assert_eq!(effective_n(5), 5);
        assert_eq!(effective_n(2), 10);
        assert_eq!(effective_n(6), 30);
        assert_eq!(effective_n(7), 7);
    }

    #[test]
    fn small_model_verifies_and_round_trips() {
        let m = Model::build(3, 5, Some(1)).unwrap();
        let rep = m.verify();
        assert!(rep.ok, "{rep:?}");
        let doc = m.to_doc();
        let again = Model::from_doc(&doc).unwrap();
        assert_eq!(again.to_doc(), doc);
        assert_eq!(again.digest(), m.digest());
    }

    #[test]
    fn corrupted_q_fails_congruence() {
        let m = Model::build(7, 5, Some(1)).unwrap();
        let mut doc = m.to_doc();
        let k = m.base();
        // Replace Q by 2Q: still on the curve, but the translation is wrong.
        let q2 = m.curve.double(k, &m.q_pt);
        doc.q_point = [k.to_hex(&q2.x), k.to_hex(&q2.y)];
        assert!(Model::from_doc(&doc).is_err());
    }

    #[test]
    fn kernel_census_small() {
        let m = Model::build(5, 5, Some(1)).unwrap();
        let comps = kernel_components(&m.curve, &m.q_pt, m.n()).unwrap();
        let total: usize = comps.iter().map(|c| c.points.len()).sum();
        assert_eq!(total as u128, m.order);
        assert_eq!(comps.len() as u128, m.order / m.n() as u128);
        assert!(comps.iter().all(|c| c.points.len() == m.n()));
    }

    #[test]
    fn rejects_n_one() {
        assert!(matches!(Model::build(3, 1, None), Err(Error::Params(_))));
    }
}
