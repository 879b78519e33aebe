//! Discrete logarithms in F_{q^n}^× through the model.
//!
//! Write `q^n − 1 = ℓ·s` with `gcd(ℓ, N) = 1` and every prime of `s`
//! dividing `N = |E(F_q)|`. The residue mod `s` comes from Pohlig–Hellman
//! with baby-step giant-step. The residue mod `ℓ` comes from the map
//! `Log`, which sends a degree-zero divisor `D` to `log(f(𝓘))/N` for any
//! `f` with `div f = N·D`:
//!
//! 1. factor-base relations: lifts `G ≡ g^t (mod 𝓘)` whose divisors only
//!    involve enumerated factor-base places give rows
//!    `Σ v_Π·Log(Π) = t − log lc(G)`, solved modulo each prime power of `ℓ`;
//! 2. a top-degree factor-base place `Π` is resolved by one lift that vanishes
//!    on `Π` exactly once and otherwise only involves enumerated places;
//! 3. the target is lifted to a single place, which the descent reduces to
//!    the factor base.

use std::collections::{BTreeMap, HashMap};

use rand::Rng as _;
use rayon::prelude::*;

use crate::algebra::int;
use crate::algebra::poly::{self, Poly};
use crate::algebra::{factor, Fe, Field, Tower};
use crate::descent::{self, Descent, FactorBase, Node};
use crate::divisor::{divisor_of_function, Func, Place};
use crate::error::{Error, Result};
use crate::model::Model;
use crate::policy::Policy;
use crate::rng::{self, Rng};

/// Baby-step giant-step: the `x` in `[0, order)` with `g^x = h`, where
/// `order` is a multiple of the order of `g`.
pub fn bsgs(f: &Field, g: &Fe, h: &Fe, order: u128) -> Option<u128> {
    if order == 0 {
        return None;
    }
    let steps = int_sqrt_ceil(order);
    let mut table: HashMap<u128, u128> = HashMap::with_capacity(steps as usize);
    let mut cur = f.one();
    for j in 0..steps {
        table.entry(f.index_of(&cur)).or_insert(j);
        cur = f.mul(&cur, g);
    }
    let giant = f.inv(&f.pow(g, steps));
    let mut gamma = *h;
    for i in 0..steps {
        if let Some(&j) = table.get(&f.index_of(&gamma)) {
            let x = i * steps + j;
            if x < order {
                return Some(x);
            }
        }
        gamma = f.mul(&gamma, &giant);
    }
    None
}

fn int_sqrt_ceil(n: u128) -> u128 {
    let r = crate::curve::isqrt(n);
    if r * r == n {
        r
    } else {
        r + 1
    }
}

/// Pohlig–Hellman over the given factorization of `order` (a multiple of
/// the order of `g`), with baby-step giant-step in each prime subgroup.
pub fn pohlig_hellman(f: &Field, g: &Fe, h: &Fe, order: u128, factors: &[(u128, u32)]) -> Option<u128> {
    let mut acc = 0u128;
    let mut modulus = 1u128;
    for &(p, e) in factors {
        let pe = p.pow(e);
        let cof = order / pe;
        let gi = f.pow(g, cof);
        let hi = f.pow(h, cof);
        // gi has order dividing p^e; recover the digits of the log base p.
        let gamma = f.pow(&gi, pe / p);
        let mut x = 0u128;
        let mut pk = 1u128;
        for _ in 0..e {
            let shifted = f.mul(&hi, &f.inv(&f.pow(&gi, x)));
            let hk = f.pow(&shifted, pe / p / pk);
            let d = bsgs(f, &gamma, &hk, p)?;
            x += d * pk;
            pk *= p;
        }
        acc = int::crt(acc, modulus, x % pe, pe)?;
        modulus *= pe;
    }
    Some(acc % modulus.max(1))
}

/// Reference discrete logarithm for small groups: plain baby-step giant-step
/// over the full group order. Refuses orders above `bound`.
pub fn oracle_dlog(f: &Field, g: &Fe, h: &Fe, order: u128, bound: u128) -> Result<u128> {
    if order > bound {
        return Err(Error::Params(format!("group order {order} exceeds the oracle bound {bound}")));
    }
    bsgs(f, g, h, order).ok_or_else(|| Error::Params("target is not in the subgroup generated by g".into()))
}

/// Whether `g` has order exactly `order` (whose prime factors are `primes`).
pub fn has_order(f: &Field, g: &Fe, order: u128, primes: &[u128]) -> bool {
    f.pow(g, order) == f.one() && primes.iter().all(|&p| f.pow(g, order / p) != f.one())
}

/// A random generator of F_{q^n}^×.
pub fn find_generator(m: &Model, rng: &mut Rng) -> Fe {
    let f = m.field();
    let order = m.group_order();
    let primes: Vec<u128> = int::factorize(order).into_iter().map(|(p, _)| p).collect();
    loop {
        let g = f.random_nonzero(rng);
        if has_order(f, &g, order, &primes) {
            return g;
        }
    }
}

/// The deterministic default generator: the generator of smallest index.
pub fn default_generator(m: &Model) -> Fe {
    let f = m.field();
    let order = m.group_order();
    let primes: Vec<u128> = int::factorize(order).into_iter().map(|(p, _)| p).collect();
    (1..=order)
        .map(|i| f.from_index(i))
        .find(|g| has_order(f, g, order, &primes))
        .expect("finite fields have generators")
}

/// `log_g h mod s` by Pohlig–Hellman in the subgroup of order `s`.
pub fn solve_mod_s(m: &Model, g: &Fe, h: &Fe) -> Result<u128> {
    if m.s == 1 {
        return Ok(0);
    }
    let f = m.field();
    let gs = f.pow(g, m.ell);
    let hs = f.pow(h, m.ell);
    pohlig_hellman(f, &gs, &hs, m.s, &int::factorize(m.s))
        .ok_or_else(|| Error::Internal("Pohlig-Hellman failed in the s-part".into()))
}

/// Logs of F_q^× elements: `g^M` with `M = (q^n − 1)/(q − 1)` generates
/// F_q^×, so every `u ∈ F_q^×` is `g^{M·j}`.
pub struct BaseLogs {
    table: HashMap<u128, u128>,
    m_exp: u128,
}

impl BaseLogs {
    pub fn new(m: &Model, g: &Fe) -> BaseLogs {
        let big = m.field();
        let base = m.base();
        let q = m.q();
        let m_exp = m.group_order() / (q - 1);
        let gm = big.pow(g, m_exp);
        let mut table = HashMap::with_capacity(q as usize);
        let mut cur = big.one();
        for j in 0..q - 1 {
            let v = big.restrict_to(m.r(), &cur).expect("g^M lies in F_q");
            table.entry(base.index_of(&v)).or_insert(j);
            cur = big.mul(&cur, &gm);
        }
        BaseLogs { table, m_exp }
    }

    /// `log_g u` modulo `q^n − 1` for nonzero `u ∈ F_q`.
    pub fn log(&self, base: &Field, u: &Fe) -> u128 {
        self.m_exp * self.table[&base.index_of(u)]
    }
}

/// Row reduction modulo a prime power `p^k`, one relation at a time. Rows
/// are kept in reduced echelon form with unit pivots.
pub struct Echelon {
    pub prime: u128,
    pub modulus: u128,
    cols: usize,
    rows: Vec<(Vec<u128>, u128)>,
    pivot_row: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(prime: u128, modulus: u128, cols: usize) -> Echelon {
        Echelon { prime, modulus, cols, rows: Vec::new(), pivot_row: vec![None; cols] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.cols
    }

    /// Adds `Σ coeffs[j]·x_j = rhs`; returns whether the rank grew.
    pub fn insert(&mut self, coeffs: &[u128], rhs: u128) -> bool {
        let md = self.modulus;
        let mut row: Vec<u128> = coeffs.iter().map(|c| c % md).collect();
        let mut b = rhs % md;
        for (col, pr) in self.pivot_row.iter().enumerate() {
            let Some(i) = pr else { continue };
            let s = row[col];
            if s == 0 {
                continue;
            }
            let (prow, pb) = &self.rows[*i];
            for (x, y) in row.iter_mut().zip(prow) {
                *x = (*x + md - int::mulmod(s, *y, md)) % md;
            }
            b = (b + md - int::mulmod(s, *pb, md)) % md;
        }
        let Some(col) = (0..self.cols).find(|&j| row[j] % self.prime != 0) else {
            return false;
        };
        let inv = int::invmod(row[col], md).expect("unit pivot");
        for x in row.iter_mut() {
            *x = int::mulmod(*x, inv, md);
        }
        b = int::mulmod(b, inv, md);
        for (orow, ob) in self.rows.iter_mut() {
            let s = orow[col];
            if s == 0 {
                continue;
            }
            for (x, y) in orow.iter_mut().zip(&row) {
                *x = (*x + md - int::mulmod(s, *y, md)) % md;
            }
            *ob = (*ob + md - int::mulmod(s, b, md)) % md;
        }
        self.pivot_row[col] = Some(self.rows.len());
        self.rows.push((row, b));
        true
    }

    /// The unique solution once the rank is full.
    pub fn solution(&self) -> Option<Vec<u128>> {
        if !self.is_full() {
            return None;
        }
        Some(self.pivot_row.iter().map(|i| self.rows[i.expect("full rank")].1).collect())
    }
}

/// One factor-base relation: `G(𝓘) = g^shift` and
/// `div G = Σ mult·Π − deg·[0_E]`, so `Σ mult·Log(Π) = shift − log lc(G)`.
#[derive(Clone, Debug)]
pub struct FbRow {
    pub shift: u128,
    pub func: Func,
    pub lc_log: u128,
    pub terms: Vec<(Place, i64)>,
}

fn finite_terms(m: &Model, g: &Func) -> Vec<(Place, i64)> {
    divisor_of_function(&m.curve, m.base(), g)
        .terms
        .into_iter()
        .filter(|(pl, _)| !pl.is_infinity())
        .collect()
}

/// Whether every irreducible factor of `u` has degree at most `d`.
fn degrees_at_most(k: &Field, u: &[Fe], d: usize) -> bool {
    let sf = poly::monic(k, u);
    factor::distinct_degree(k, &sf, Some(d)).iter().all(|(h, tag)| *tag != 0 || h.len() <= 1)
}

/// One attempt at a relation among enumerated factor-base places.
pub fn small_row(m: &Model, fb: &FactorBase, g: &Fe, logs: &BaseLogs, rng: &mut Rng) -> Option<FbRow> {
    let k = m.base();
    let big = m.field();
    let shift = rng.gen_range(0..m.group_order());
    let f = descent::represent(m, &big.pow(g, shift)).ok()?;
    let a: Poly = poly::trimmed(vec![k.random(rng)]);
    // Degree 2 is needed to reach places whose x-coordinate lies in a
    // quadratic subfield with `−P` conjugate to `P`: `b` must vanish there.
    let db = rng.gen_range(0..3usize);
    let mut b: Poly = (0..=db).map(|_| k.random(rng)).collect();
    b[db] = k.random_nonzero(rng);
    let func = descent::lift_function(m, &f, &a, &b);
    let norm = func.numerator_norm(&m.curve, k);
    if !degrees_at_most(k, &norm, 1 << fb.c) {
        return None;
    }
    let terms = finite_terms(m, &func);
    if !terms.iter().all(|(pl, _)| fb.index_of(pl).is_some()) {
        return None;
    }
    let lc_log = logs.log(k, &func.lc());
    Some(FbRow { shift, func, lc_log, terms })
}

/// A relation containing the top-degree place `pl` exactly once, all other
/// places being enumerated factor-base places.
pub fn top_row(m: &Model, fb: &FactorBase, g: &Fe, logs: &BaseLogs, pl: &Place, rng: &mut Rng, attempts: u64) -> Option<FbRow> {
    let k = m.base();
    let big = m.field();
    let r = m.r();
    let home = Tower::get(m.p()).field(pl.field_degree());
    let (x0, y0) = (pl.pt.x, pl.pt.y);
    let lift = |p: &[Fe]| -> Fe { poly::eval(&home, &poly::embed(&home, r, p), &x0) };
    let iv = lift(&m.ipoly);
    let yv = home.sub(&y0, &lift(&m.eta));
    let da = pl.deg / 2 - 1;
    let db = pl.deg / 2;
    let mut vs = Vec::with_capacity(da + db + 2);
    for j in 0..=da {
        vs.push(home.mul(&iv, &home.pow(&x0, j as u128)));
    }
    for j in 0..=db {
        vs.push(home.mul(&yv, &home.pow(&x0, j as u128)));
    }
    for _ in 0..attempts {
        let shift = rng.gen_range(0..m.group_order());
        let f = descent::represent(m, &big.pow(g, shift)).ok()?;
        let w = home.neg(&lift(&f));
        let Some(sol) = descent::solve_over_base(m, &home, &vs, &w, Some(rng)) else { continue };
        let a: Poly = poly::trimmed(sol[..=da].to_vec());
        let b: Poly = poly::trimmed(sol[da + 1..].to_vec());
        let func = descent::lift_function(m, &f, &a, &b);
        if func.is_zero() {
            continue;
        }
        let terms = finite_terms(m, &func);
        let ok = terms.iter().all(|(p, e)| if p == pl { *e == 1 } else { fb.index_of(p).is_some() });
        if ok && terms.iter().any(|(p, _)| p == pl) {
            let lc_log = logs.log(k, &func.lc());
            return Some(FbRow { shift, func, lc_log, terms });
        }
    }
    None
}

/// Logs of all enumerated factor-base places modulo `ℓ`, with the rows that
/// determine them.
///
/// Candidate `i` draws from its own stream, and each round of
/// `policy.batch` candidates is evaluated in parallel and then inserted in
/// index order, so the result does not depend on the thread count.
pub fn solve_factor_base(
    m: &Model,
    fb: &FactorBase,
    g: &Fe,
    logs: &BaseLogs,
    policy: &Policy,
    seed: u64,
) -> Result<(Vec<u128>, Vec<FbRow>)> {
    let ell = m.ell;
    let parts = int::factorize(ell);
    let mut ech: Vec<Echelon> = parts.iter().map(|&(p, e)| Echelon::new(p, p.pow(e), fb.len())).collect();
    let mut rows = Vec::new();
    let round = policy.batch.max(1) as u64;
    let mut next = 0u64;
    while !ech.iter().all(Echelon::is_full) {
        if next >= policy.lift_attempts {
            return Err(Error::Budget(format!(
                "factor-base matrix has rank {:?} of {} after {} lifts",
                ech.iter().map(Echelon::rank).collect::<Vec<_>>(),
                fb.len(),
                next
            )));
        }
        let hi = (next + round).min(policy.lift_attempts);
        let found: Vec<FbRow> = (next..hi)
            .into_par_iter()
            .filter_map(|i| small_row(m, fb, g, logs, &mut rng::stream(seed, &format!("factor-base/{i}"))))
            .collect();
        next = hi;
        for row in found {
            let mut coeffs = vec![0u128; fb.len()];
            for (pl, e) in &row.terms {
                coeffs[fb.index_of(pl).expect("small row")] = mod_mult(*e, ell);
            }
            let rhs = (row.shift + ell - row.lc_log % ell) % ell;
            let mut useful = false;
            for e in ech.iter_mut() {
                useful |= e.insert(&coeffs, rhs);
            }
            if useful {
                rows.push(row);
            }
            if ech.iter().all(Echelon::is_full) {
                break;
            }
        }
    }
    let sols: Vec<Vec<u128>> = ech.iter().map(|e| e.solution().expect("full rank")).collect();
    let logs_ell = (0..fb.len())
        .map(|j| {
            let mut acc = 0u128;
            let mut md = 1u128;
            for (e, sol) in ech.iter().zip(&sols) {
                acc = int::crt(acc, md, sol[j], e.modulus).expect("coprime moduli");
                md *= e.modulus;
            }
            acc
        })
        .collect();
    Ok((logs_ell, rows))
}

/// Signed multiplicity reduced modulo `m`.
pub fn mod_mult(e: i64, m: u128) -> u128 {
    (e as i128).rem_euclid(m as i128) as u128
}

/// The lift of the target and its place.
#[derive(Clone, Debug)]
pub struct LiftRecord {
    pub shift: u128,
    pub func: Func,
    pub place: Place,
    pub lc_log: u128,
}

/// Everything a solved instance consists of; the certificate is built from
/// it.
#[derive(Clone, Debug)]
pub struct DlogRun {
    pub generator: Fe,
    pub target: Fe,
    pub answer: u128,
    pub answer_mod_ell: u128,
    pub answer_mod_s: u128,
    pub lift: Option<LiftRecord>,
    /// Descent nodes, children before parents, with `(log κ, Log(Π))`.
    pub nodes: Vec<(Node, u128, u128)>,
    /// Factor-base places used anywhere, with their logs mod `ℓ`.
    pub fb_logs: BTreeMap<Place, u128>,
    pub small_rows: Vec<FbRow>,
    pub top_rows: Vec<(Place, FbRow)>,
    pub factor_base_size: usize,
    pub samples: u64,
}

/// Computes `log_g h` modulo `ℓ` and assembles the provenance.
pub fn solve_mod_ell(m: &Model, g: &Fe, h: &Fe, policy: &Policy, seed: u64) -> Result<DlogRun> {
    let ell = m.ell;
    let big = m.field();
    let k = m.base();
    let mut run = DlogRun {
        generator: *g,
        target: *h,
        answer: 0,
        answer_mod_ell: 0,
        answer_mod_s: 0,
        lift: None,
        nodes: Vec::new(),
        fb_logs: BTreeMap::new(),
        small_rows: Vec::new(),
        top_rows: Vec::new(),
        factor_base_size: 0,
        samples: 0,
    };
    if ell == 1 {
        return Ok(run);
    }
    let fb = FactorBase::build(m, policy.c, policy.exhaustive_bound)?;
    run.factor_base_size = fb.len();
    let logs = BaseLogs::new(m, g);
    let e = policy.lift_level_for(m.n());

    // Target lift and descent.
    let mut descent = Descent::new(m, &fb, policy, seed);
    let mut lift_rng = rng::stream(seed, "lift");
    let mut found = None;
    for attempt in 0..policy.relation_attempts {
        let shift = lift_rng.gen_range(0..m.group_order());
        let value = big.mul(h, &big.pow(g, shift));
        let (func, place) = descent::lift_to_place(m, &value, e, &mut lift_rng, policy.lift_attempts)?;
        log::info!("lift attempt {attempt}: degree-{} place", place.deg);
        if descent.descend(&place) {
            let lc_log = logs.log(k, &func.lc());
            found = Some(LiftRecord { shift, func, place, lc_log });
            break;
        }
        log::info!("descent failed; lifting again");
    }
    let lift = found.ok_or_else(|| Error::Budget("descent failed for every lift of the target".into()))?;
    run.samples = descent.samples;
    let ordered: Vec<Node> = descent.nodes_below(&lift.place).into_iter().cloned().collect();
    log::info!("descent tree has {} nodes", ordered.len());

    // Factor-base logs.
    let (small_logs, small_rows) = solve_factor_base(m, &fb, g, &logs, policy, seed)?;
    run.small_rows = small_rows;
    let mut values: HashMap<Place, u128> = HashMap::new();
    for (i, pl) in fb.places.iter().enumerate() {
        values.insert(*pl, small_logs[i]);
    }
    let mut tops: Vec<Place> = ordered
        .iter()
        .flat_map(|n| n.children.iter().map(|(p, _)| *p))
        .chain(std::iter::once(lift.place))
        .filter(|p| fb.is_top(p))
        .collect();
    tops.sort();
    tops.dedup();
    let top_found: Vec<Option<FbRow>> = tops
        .par_iter()
        .map(|pl| {
            let mut r = rng::stream(seed, &format!("top/{}", descent::place_label(&m.curve, pl)));
            top_row(m, &fb, g, &logs, pl, &mut r, policy.lift_attempts)
        })
        .collect();
    for (pl, row) in tops.iter().zip(top_found) {
        let row = row.ok_or_else(|| Error::Budget("no relation isolates a top-degree factor-base place".into()))?;
        let mut v = (row.shift + ell - row.lc_log % ell) % ell;
        for (p, e) in &row.terms {
            if p != pl {
                v = (v + ell - int::mulmod(mod_mult(*e, ell), values[p], ell)) % ell;
            }
        }
        values.insert(*pl, v);
        run.top_rows.push((*pl, row));
    }

    // Fold the descent tree.
    for node in ordered {
        let kappa_log = logs.log(k, &node.relation.kappa) % ell;
        let mut v = kappa_log;
        for (p, e) in &node.children {
            v = (v + int::mulmod(mod_mult(*e, ell), values[p], ell)) % ell;
        }
        values.insert(node.place, v);
        run.nodes.push((node, kappa_log, v));
    }
    let root = values[&lift.place];
    run.answer_mod_ell = (root + lift.lc_log % ell + ell - lift.shift % ell) % ell;

    let mut used: Vec<Place> = run.nodes.iter().flat_map(|(n, _, _)| n.children.iter().map(|(p, _)| *p)).collect();
    used.extend(run.small_rows.iter().flat_map(|r| r.terms.iter().map(|(p, _)| *p)));
    used.extend(run.top_rows.iter().flat_map(|(_, r)| r.terms.iter().map(|(p, _)| *p)));
    used.push(lift.place);
    for p in used {
        if fb.contains(&p) {
            run.fb_logs.insert(p, values[&p]);
        }
    }
    run.lift = Some(lift);
    Ok(run)
}

/// `log_g h` modulo `q^n − 1`, with provenance. `g` must generate
/// F_{q^n}^×; the result is checked by exponentiation before returning.
pub fn dlog(m: &Model, g: &Fe, h: &Fe, policy: &Policy, seed: u64) -> Result<DlogRun> {
    let big = m.field();
    let order = m.group_order();
    let primes: Vec<u128> = int::factorize(order).into_iter().map(|(p, _)| p).collect();
    if h.is_zero() {
        return Err(Error::Params("target must be nonzero".into()));
    }
    if !has_order(big, g, order, &primes) {
        return Err(Error::Params("generator does not have order q^n - 1".into()));
    }
    let x_s = solve_mod_s(m, g, h)?;
    let mut run = solve_mod_ell(m, g, h, policy, seed)?;
    run.answer_mod_s = x_s;
    run.answer = int::crt(run.answer_mod_ell, m.ell, x_s, m.s).ok_or_else(|| Error::Internal("ℓ and s are not coprime".into()))?;
    if big.pow(g, run.answer) != *h {
        return Err(Error::Internal(format!("g^{} does not equal the target", run.answer)));
    }
    Ok(run)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bsgs_and_pohlig_hellman_round_trip() {
        let m = Model::build(5, 5, Some(1)).unwrap();
        let f = m.field();
        let g = default_generator(&m);
        let order = m.group_order();
        let mut r = rng::stream(1, "bsgs");
        for _ in 0..10 {
            let x = r.gen_range(0..order);
            let h = f.pow(&g, x);
            assert_eq!(bsgs(f, &g, &h, order), Some(x));
            assert_eq!(pohlig_hellman(f, &g, &h, order, &int::factorize(order)), Some(x));
        }
        assert_eq!(oracle_dlog(f, &g, &f.one(), order, 1 << 22).unwrap(), 0);
        assert_eq!(oracle_dlog(f, &g, &g, order, 1 << 22).unwrap(), 1);
    }

    #[test]
    fn s_part_matches_exponent() {
        let m = Model::build(5, 5, Some(1)).unwrap();
        assert_eq!(m.s, 4);
        let f = m.field();
        let g = default_generator(&m);
        let mut r = rng::stream(2, "s");
        for _ in 0..10 {
            let x = r.gen_range(0..m.group_order());
            assert_eq!(solve_mod_s(&m, &g, &f.pow(&g, x)).unwrap(), x % m.s);
        }
    }

    #[test]
    fn echelon_solves_modulo_prime_powers() {
        // x0 = 3, x1 = 5 modulo 121.
        let mut e = Echelon::new(11, 121, 2);
        assert!(e.insert(&[1, 1], 8));
        assert!(!e.insert(&[2, 2], 16));
        assert!(!e.insert(&[11, 0], 33));
        assert!(e.insert(&[1, 2], 13));
        assert_eq!(e.solution().unwrap(), vec![3, 5]);
    }

    #[test]
    fn base_logs_are_consistent() {
        let m = Model::build(3, 5, Some(1)).unwrap();
        let g = default_generator(&m);
        let logs = BaseLogs::new(&m, &g);
        let k = m.base();
        for i in 1..m.q() {
            let u = k.from_index(i);
            let l = logs.log(k, &u);
            assert_eq!(m.field().pow(&g, l), m.field().embed_from(m.r(), &u));
        }
    }
}
