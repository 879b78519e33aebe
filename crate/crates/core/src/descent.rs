//! Descent from a lifted target down to the factor base.
//!
//! Tasks are places `Π` over F_q. A place of degree `δ` is handled by its
//! degree alone:
//!
//! * `δ | 2^{c+1}`: a factor-base place (leaf);
//! * `δ = 2^a` with `a ≥ c + 2`: 4-to-3 elimination at level `a − 2` on one
//!   degree-4 component of `Π` over F_{q^{2^{a−2}}};
//! * `δ = 3·2^a` with `a ≥ c`: 3-to-2 elimination at level `a` on one
//!   degree-3 component over F_{q^{2^a}};
//! * any other degree is a dead end.
//!
//! Every output place of an elimination has strictly smaller degree than its
//! input, so the recursion terminates. Components of one place are Galois
//! conjugate, and the trap sets are stable under conjugation, so checking the
//! first component decides the whole place.

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::Rng as _;

use crate::algebra::linalg;
use crate::algebra::poly::{self, Poly};
use crate::algebra::{factor, Fe, Field, Tower};
use crate::curve::Curve;
use crate::divisor::{divisor_of_function, Divisor, Func, Place};
use crate::elim32;
use crate::elim43;
use crate::error::{Error, Result};
use crate::model::Model;
use crate::policy::Policy;
use crate::relation::Relation;
use crate::rng::{self, Rng};

/// How a place of a given degree is processed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Plan {
    Leaf,
    Elim43 { level: usize },
    Elim32 { level: usize },
}

impl Plan {
    pub fn level(&self) -> Option<usize> {
        match self {
            Plan::Leaf => None,
            Plan::Elim43 { level } | Plan::Elim32 { level } => Some(*level),
        }
    }
}

/// The plan for a place of degree `delta` over F_q, with lowest level `c`.
pub fn plan_for(delta: usize, c: usize) -> Option<Plan> {
    if delta == 0 {
        return None;
    }
    if delta.is_power_of_two() {
        let a = delta.trailing_zeros() as usize;
        return if a <= c + 1 {
            Some(Plan::Leaf)
        } else {
            Some(Plan::Elim43 { level: a - 2 })
        };
    }
    if delta % 3 == 0 && (delta / 3).is_power_of_two() {
        let a = (delta / 3).trailing_zeros() as usize;
        if a >= c {
            return Some(Plan::Elim32 { level: a });
        }
    }
    None
}

/// The factor base: all places of degree dividing `2^{c+1}` except `𝓘`.
///
/// Only the places of degree dividing `2^c` are enumerated (and indexed);
/// places of the top degree `2^{c+1}` are recognised by their degree and
/// resolved one at a time when a descent reaches them.
pub struct FactorBase {
    pub c: usize,
    /// Enumerated places, sorted by degree and then by representative.
    pub places: Vec<Place>,
    index: HashMap<Place, usize>,
    kernel: Place,
}

impl FactorBase {
    /// Enumerates `E(F_{q^{2^c}})` and groups the points into places.
    pub fn build(m: &Model, c: usize, bound: u64) -> Result<FactorBase> {
        let deg = m.r() << c;
        let field = Tower::get(m.p()).field(deg);
        let size = field.order().filter(|&o| o <= bound as u128).ok_or_else(|| {
            Error::Params(format!("factor base over F_{}^{deg} exceeds the enumeration bound {bound}", m.p()))
        })?;
        log::debug!("enumerating factor base over a field of size {size}");
        let curve = &m.curve;
        let kernel = m.kernel_place();
        let set: BTreeSet<Place> = curve
            .points(&field)?
            .iter()
            .filter(|pt| !pt.inf)
            .map(|pt| Place::of_point(curve, &field, pt, m.r()))
            .filter(|pl| *pl != kernel)
            .collect();
        let mut places: Vec<Place> = set.into_iter().collect();
        places.sort_by_key(|pl| (pl.deg, *pl));
        let index = places.iter().enumerate().map(|(i, pl)| (*pl, i)).collect();
        Ok(FactorBase { c, places, index, kernel })
    }

    /// Number of enumerated places.
    pub fn len(&self) -> usize {
        self.places.len()
    }

    pub fn is_empty(&self) -> bool {
        self.places.is_empty()
    }

    /// Index of an enumerated place.
    pub fn index_of(&self, pl: &Place) -> Option<usize> {
        self.index.get(pl).copied()
    }

    /// Degree `2^{c+1}` of the largest factor-base places.
    pub fn top_degree(&self) -> usize {
        1 << (self.c + 1)
    }

    /// Whether `pl` is a top-degree factor-base place.
    pub fn is_top(&self, pl: &Place) -> bool {
        !pl.is_infinity() && pl.deg == self.top_degree() && *pl != self.kernel
    }

    /// Whether `pl` belongs to the factor base.
    pub fn contains(&self, pl: &Place) -> bool {
        self.index.contains_key(pl) || self.is_top(pl)
    }
}

/// A random solution `(c_j) ∈ F_q^J` of `Σ c_j·v_j = w` for `v_j, w` in a
/// field containing F_q (random over the solution space when `rng` is
/// given, otherwise the solution with free variables zero).
pub fn solve_over_base(m: &Model, big: &Field, vs: &[Fe], w: &Fe, rng: Option<&mut Rng>) -> Option<Vec<Fe>> {
    let r = m.r();
    let base = m.base();
    let fp = Tower::get(m.p()).field(1);
    let basis: Vec<Fe> = (0..r).map(|t| base.pow(&base.gen(), t as u128)).collect();
    let cols: Vec<Vec<u32>> = vs
        .iter()
        .flat_map(|v| basis.iter().map(move |b| (v, b)))
        .map(|(v, b)| big.coeffs(&big.mul(v, &big.embed_from(r, b))))
        .collect();
    let wc = big.coeffs(w);
    let nvars = cols.len();
    let mut mat: linalg::Matrix = (0..big.degree())
        .map(|i| {
            let mut row: Vec<Fe> = cols.iter().map(|c| Fe::from_fp(c[i])).collect();
            row.push(Fe::from_fp(wc[i]));
            row
        })
        .collect();
    let pivots = linalg::rref(&fp, &mut mat);
    if pivots.last() == Some(&nvars) {
        return None;
    }
    let mut sol = vec![Fe::ZERO; nvars];
    let free: Vec<usize> = (0..nvars).filter(|c| !pivots.contains(c)).collect();
    if let Some(rng) = rng {
        for &f in &free {
            sol[f] = fp.random(rng);
        }
    }
    for (i, &pc) in pivots.iter().enumerate() {
        let mut v = mat[i][nvars];
        for &f in &free {
            v = fp.sub(&v, &fp.mul(&mat[i][f], &sol[f]));
        }
        sol[pc] = v;
    }
    Some(
        sol.chunks(r)
            .map(|ch| {
                ch.iter()
                    .zip(&basis)
                    .fold(Fe::ZERO, |acc, (a, b)| base.add(&acc, &base.mul(&base.embed_from(1, a), b)))
            })
            .collect(),
    )
}

/// The polynomial `F` over F_q of degree below `n` with `F(x(P_𝓘)) = value`.
pub fn represent(m: &Model, value: &Fe) -> Result<Poly> {
    let big = m.field();
    let xi = m.pi.x;
    let vs: Vec<Fe> = (0..m.n()).map(|j| big.pow(&xi, j as u128)).collect();
    let coeffs = solve_over_base(m, big, &vs, value, None)
        .ok_or_else(|| Error::Internal("x(P_I) does not generate F_{q^n}".into()))?;
    Ok(poly::trimmed(coeffs))
}

/// `G = F + I·a + (y − η)·b` over F_q; `G ≡ F` on `𝓘`.
pub fn lift_function(m: &Model, f: &[Fe], a: &[Fe], b: &[Fe]) -> Func {
    let k = m.base();
    let ia = poly::mul(k, &m.ipoly, a);
    let eb = poly::mul(k, &m.eta, b);
    let num = poly::sub(k, &poly::add(k, f, &ia), &eb);
    Func::poly(k, num, b.to_vec())
}

fn random_poly(k: &Field, deg: usize, monic_nonzero_lead: bool, rng: &mut Rng) -> Poly {
    let mut p: Poly = (0..=deg).map(|_| k.random(rng)).collect();
    if monic_nonzero_lead {
        p[deg] = k.random_nonzero(rng);
    }
    poly::trimmed(p)
}

/// Finds `G ≡ F (mod 𝓘)` whose zero divisor is one place of degree
/// `2^{e+2}`, where `F` represents `value`. Returns `G` and the place.
pub fn lift_to_place(m: &Model, value: &Fe, e: usize, rng: &mut Rng, attempts: u64) -> Result<(Func, Place)> {
    let pole = 1usize << (e + 2);
    let n = m.n();
    if pole / 2 < n {
        return Err(Error::Params(format!("lift level {e} is too small for n = {n}")));
    }
    let k = m.base();
    let c = &m.curve;
    let f = represent(m, value)?;
    let da = pole / 2 - n;
    let db = (pole / 2 + 1 - n).min(pole / 2 - 2);
    for _ in 0..attempts {
        let a = random_poly(k, da, true, rng);
        let b = random_poly(k, db, false, rng);
        let g = lift_function(m, &f, &a, &b);
        if g.numerator_pole_order() != pole {
            continue;
        }
        let norm = g.numerator_norm(c, k);
        if poly::degree(&norm) != Some(pole) || !factor::is_irreducible(k, &norm) {
            continue;
        }
        let div = divisor_of_function(c, k, &g);
        let finite: Vec<(&Place, &i64)> = div.terms.iter().filter(|(pl, _)| !pl.is_infinity()).collect();
        if let [(pl, 1)] = finite.as_slice() {
            if pl.deg == pole {
                return Ok((g, **pl));
            }
        }
    }
    Err(Error::Budget(format!("no irreducible lift of degree {pole} after {attempts} attempts")))
}

/// Stable text label of a place, used to key random substreams.
pub fn place_label(c: &Curve, pl: &Place) -> String {
    if pl.is_infinity() {
        return format!("{}:inf", pl.base);
    }
    let home = Tower::get(c.characteristic()).field(pl.field_degree());
    format!("{}:{}:{}:{}", pl.base, pl.deg, home.to_hex(&pl.pt.x), home.to_hex(&pl.pt.y))
}

/// The component of `pl` processed by `plan`, as a divisor over the level
/// field.
pub fn component(m: &Model, pl: &Place, plan: Plan) -> Option<(usize, Divisor)> {
    let level = plan.level()?;
    let k = m.level_field(level);
    let comps = pl.extend_to(&m.curve, k.degree());
    let first = *comps.first()?;
    let want = match plan {
        Plan::Elim43 { .. } => 4,
        Plan::Elim32 { .. } => 3,
        Plan::Leaf => return None,
    };
    (first.deg == want).then(|| (level, Divisor::from_place(first, 1)))
}

/// Whether the component of `pl` is a trap for its elimination.
pub fn is_trap(m: &Model, pl: &Place, plan: Plan, policy: &Policy) -> bool {
    let Some((level, d)) = component(m, pl, plan) else { return true };
    match plan {
        Plan::Elim43 { .. } => elim43::trap4_check(m, &d, level, policy).is_trap(),
        Plan::Elim32 { .. } => elim32::trap3_check(m, &d, level, policy).is_trap(),
        Plan::Leaf => false,
    }
}

/// One eliminated place: the relation on its component and the F_q places
/// of the normed right-hand side.
#[derive(Clone, Debug)]
pub struct Node {
    pub place: Place,
    pub relation: Relation,
    /// Places of `N(R)` other than `0_E`, with multiplicities.
    pub children: Vec<(Place, i64)>,
}

/// Memoized descent over one model and factor base.
pub struct Descent<'a> {
    pub m: &'a Model,
    pub fb: &'a FactorBase,
    pub policy: &'a Policy,
    seed: u64,
    nodes: HashMap<Place, Node>,
    dead: HashSet<Place>,
    trap_cache: HashMap<Place, bool>,
    /// Elimination samples consumed so far.
    pub samples: u64,
}

impl<'a> Descent<'a> {
    pub fn new(m: &'a Model, fb: &'a FactorBase, policy: &'a Policy, seed: u64) -> Descent<'a> {
        Descent {
            m,
            fb,
            policy,
            seed,
            nodes: HashMap::new(),
            dead: HashSet::new(),
            trap_cache: HashMap::new(),
            samples: 0,
        }
    }

    pub fn node(&self, pl: &Place) -> Option<&Node> {
        self.nodes.get(pl)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn usable(&mut self, pl: &Place) -> bool {
        if pl.is_infinity() || self.fb.contains(pl) || self.nodes.contains_key(pl) {
            return true;
        }
        if self.dead.contains(pl) {
            return false;
        }
        let Some(plan) = plan_for(pl.deg, self.fb.c) else { return false };
        if plan == Plan::Leaf {
            // A leaf-sized place outside the factor base is `𝓘` itself.
            return false;
        }
        let (m, policy) = (self.m, self.policy);
        !*self.trap_cache.entry(*pl).or_insert_with(|| is_trap(m, pl, plan, policy))
    }

    /// Eliminates `pl` recursively down to the factor base. Returns whether
    /// it succeeded; on success every place below it has a node.
    pub fn descend(&mut self, pl: &Place) -> bool {
        if pl.is_infinity() || self.fb.contains(pl) || self.nodes.contains_key(pl) {
            return true;
        }
        if self.dead.contains(pl) || !self.usable(pl) {
            self.dead.insert(*pl);
            return false;
        }
        let plan = plan_for(pl.deg, self.fb.c).expect("usable places have a plan");
        let (level, d) = component(self.m, pl, plan).expect("usable places have a component");
        let label = place_label(&self.m.curve, pl);
        let mut failed: HashSet<Vec<(Place, i64)>> = HashSet::new();
        for attempt in 0..self.policy.relation_attempts {
            if self.samples > self.policy.descent_budget {
                log::debug!("descent budget exhausted");
                break;
            }
            let mut rng = rng::stream(self.seed, &format!("descent/{label}/{attempt}"));
            let m = self.m;
            let policy = self.policy;
            let children_of = |rel: &Relation| -> Vec<(Place, i64)> {
                let (_, rhs) = rel.normed(m);
                rhs.terms.iter().filter(|(p, _)| !p.is_infinity()).map(|(p, e)| (*p, *e)).collect()
            };
            let result = {
                let mut accept = |rel: &Relation| {
                    let (input, _) = rel.normed(m);
                    if input.terms.len() != 1 || input.terms.get(pl) != Some(&1) {
                        return false;
                    }
                    let ch = children_of(rel);
                    if failed.contains(&ch) {
                        return false;
                    }
                    ch.iter().all(|(p, _)| self.usable(p))
                };
                match plan {
                    Plan::Elim43 { .. } => elim43::eliminate43_with(m, level, &d, &mut rng, policy, &mut accept),
                    Plan::Elim32 { .. } => elim32::eliminate32_with(m, level, &d, &mut rng, policy, &mut accept),
                    Plan::Leaf => unreachable!(),
                }
            };
            let (rel, used) = match result {
                Ok(v) => v,
                Err(err) => {
                    log::debug!("elimination of a degree-{} place failed: {err}", pl.deg);
                    break;
                }
            };
            self.samples += used;
            let children = children_of(&rel);
            if children.iter().all(|(p, _)| self.descend(p)) {
                self.nodes.insert(*pl, Node { place: *pl, relation: rel, children });
                return true;
            }
            failed.insert(children);
        }
        self.dead.insert(*pl);
        false
    }

    /// Nodes below `root` in a deterministic order (children first).
    pub fn nodes_below(&self, root: &Place) -> Vec<&Node> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        self.collect(root, &mut seen, &mut out);
        out
    }

    fn collect<'b>(&'b self, pl: &Place, seen: &mut HashSet<Place>, out: &mut Vec<&'b Node>) {
        let Some(node) = self.nodes.get(pl) else { return };
        if !seen.insert(*pl) {
            return;
        }
        for (ch, _) in &node.children {
            self.collect(ch, seen, out);
        }
        out.push(node);
    }
}

/// Draws a uniformly random exponent below `order`.
pub fn random_exponent(rng: &mut Rng, order: u128) -> u128 {
    rng.gen_range(0..order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plans_follow_the_degree_rule() {
        assert_eq!(plan_for(1, 2), Some(Plan::Leaf));
        assert_eq!(plan_for(8, 2), Some(Plan::Leaf));
        assert_eq!(plan_for(16, 2), Some(Plan::Elim43 { level: 2 }));
        assert_eq!(plan_for(64, 2), Some(Plan::Elim43 { level: 4 }));
        assert_eq!(plan_for(12, 2), Some(Plan::Elim32 { level: 2 }));
        assert_eq!(plan_for(6, 2), None);
        assert_eq!(plan_for(5, 2), None);
        assert_eq!(plan_for(3, 0), Some(Plan::Elim32 { level: 0 }));
    }

    #[test]
    fn representation_evaluates_back() {
        let m = Model::build(3, 5, Some(1)).unwrap();
        let mut r = rng::stream(1, "rep");
        let big = m.field();
        for _ in 0..10 {
            let v = big.random(&mut r);
            let f = represent(&m, &v).unwrap();
            let fe: Vec<Fe> = f.iter().map(|c| big.embed_from(m.r(), c)).collect();
            assert_eq!(poly::eval(big, &fe, &m.pi.x), v);
        }
    }

    #[test]
    fn lifted_place_has_the_target_residue() {
        let m = Model::build(3, 5, Some(1)).unwrap();
        let mut r = rng::stream(2, "lift");
        let v = m.field().random_nonzero(&mut r);
        let (g, pl) = lift_to_place(&m, &v, 3, &mut r, 1 << 14).unwrap();
        assert_eq!(pl.deg, 32);
        assert_eq!(m.residue_eval(&g).unwrap(), v);
    }

    #[test]
    fn factor_base_counts_places() {
        let m = Model::build(3, 5, Some(1)).unwrap();
        let fb = FactorBase::build(&m, 2, 1 << 16).unwrap();
        // Points of E over F_{3^4} other than 0_E, grouped by orbit size.
        let big = Tower::get(3).field(4);
        let total: usize = fb.places.iter().map(|pl| pl.deg).sum();
        assert_eq!(total as u128 + 1, m.curve.order_over_field(&big).unwrap());
        assert!(fb.places.iter().all(|pl| 4 % pl.deg == 0));
        assert!(fb.places.iter().all(|pl| fb.contains(pl) && !fb.is_top(pl)));
    }
}
