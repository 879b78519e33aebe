//! Factorization and root finding for polynomials over a [`Field`]:
//! square-free decomposition, distinct-degree and equal-degree splitting,
//! plus square roots and quadratic solving used by the curve layer.
//!
//! Equal-degree splitting is randomized. The random choices only affect the
//! running time, never the result: outputs are sorted into a canonical order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{Fe, Field};
use super::poly::{self, Poly};

/// Canonical ordering of monic factors: by degree, then coefficients.
fn sort_factors(v: &mut [(Poly, usize)]) {
    v.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));
}

/// `p`-th root of a polynomial all of whose exponents are multiples of `p`.
fn pth_root(f: &Field, a: &[Fe]) -> Poly {
    let p = f.characteristic() as usize;
    let n = (a.len() - 1) / p + 1;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(f.frob(&a[i * p], -1));
    }
    poly::trimmed(out)
}

/// Square-free decomposition of a nonzero polynomial: monic pairwise coprime
/// square-free `g_i` with `monic(a) = ∏ g_i^{e_i}`.
pub fn squarefree(f: &Field, a: &[Fe]) -> Vec<(Poly, usize)> {
    let a = poly::monic(f, a);
    assert!(!a.is_empty(), "square-free decomposition of zero");
    let mut out = Vec::new();
    if a.len() == 1 {
        return out;
    }
    let da = poly::derivative(f, &a);
    let mut c = poly::gcd(f, &a, &da);
    let mut w = poly::div_exact(f, &a, &c);
    let mut i = 1;
    while w.len() > 1 {
        let y = poly::gcd(f, &w, &c);
        let z = poly::div_exact(f, &w, &y);
        if z.len() > 1 {
            out.push((z, i));
        }
        i += 1;
        c = poly::div_exact(f, &c, &y);
        w = y;
    }
    if c.len() > 1 {
        let root = pth_root(f, &c);
        let p = f.characteristic() as usize;
        for (g, j) in squarefree(f, &root) {
            out.push((g, j * p));
        }
    }
    out
}

/// Distinct-degree factorization of a monic square-free polynomial. Returns
/// pairs `(h, d)` where `h` is the product of all irreducible factors of
/// degree `d`. Stops after degree `max_degree` when given, in which case the
/// unprocessed remainder is returned with degree tag `0`.
pub fn distinct_degree(f: &Field, a: &[Fe], max_degree: Option<usize>) -> Vec<(Poly, usize)> {
    let mut g = poly::monic(f, a);
    let mut out = Vec::new();
    let xpoly = poly::x(f);
    let mut h = poly::rem(f, &xpoly, &g);
    let mut d = 0;
    while g.len() > 1 {
        d += 1;
        if g.len() - 1 < 2 * d {
            let deg = g.len() - 1;
            if max_degree.map_or(true, |m| deg <= m) {
                out.push((g, deg));
            } else {
                out.push((g, 0));
            }
            return out;
        }
        if max_degree.map_or(false, |m| d > m) {
            out.push((g, 0));
            return out;
        }
        h = poly::frobenius_pow(f, &h, f.degree(), &g);
        let t = poly::gcd(f, &g, &poly::sub(f, &h, &xpoly));
        if t.len() > 1 {
            g = poly::div_exact(f, &g, &t);
            h = poly::rem(f, &h, &g);
            out.push((t, d));
        }
    }
    out
}

/// Absolute trace map `Σ_{j<J} a^{p^j} mod g` with `J = m·d`.
fn trace_poly(f: &Field, a: &[Fe], d: usize, g: &[Fe]) -> Poly {
    let mut cur = poly::rem(f, a, g);
    let mut acc = cur.clone();
    for _ in 1..f.degree() * d {
        cur = poly::powmod(f, &cur, f.characteristic() as u128, g);
        acc = poly::add(f, &acc, &cur);
    }
    acc
}

/// Splits a monic product of distinct irreducible factors, all of degree `d`,
/// into its irreducible factors.
pub fn equal_degree<R: Rng + ?Sized>(f: &Field, g: &[Fe], d: usize, rng: &mut R) -> Vec<Poly> {
    let g = poly::monic(f, g);
    let n = g.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    if n == d {
        return vec![g];
    }
    assert!(n % d == 0, "equal-degree input has inconsistent degree");
    let p = f.characteristic();
    loop {
        let a: Poly = poly::trimmed((0..n).map(|_| f.random(rng)).collect());
        if a.len() <= 1 {
            continue;
        }
        let t = trace_poly(f, &a, d, &g);
        let mut parts: Vec<Poly> = Vec::new();
        let mut covered = 0;
        for c in 0..p {
            let shifted = poly::sub(f, &t, &poly::constant(Fe::from_fp(c)));
            let h = poly::gcd(f, &g, &shifted);
            if h.len() > 1 {
                covered += h.len() - 1;
                parts.push(h);
            }
            if covered == n {
                break;
            }
        }
        if parts.len() > 1 {
            let mut out = Vec::new();
            for part in parts {
                out.extend(equal_degree(f, &part, d, rng));
            }
            return out;
        }
    }
}

fn seeded_rng(f: &Field, a: &[Fe]) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ (f.degree() as u64) << 8 ^ f.characteristic() as u64;
    for c in a {
        for i in 0..f.degree().min(8) {
            h = (h ^ c.coeff(i) as u64).wrapping_mul(0x0100_0000_01b3);
        }
    }
    ChaCha8Rng::seed_from_u64(h)
}

/// Complete factorization into monic irreducible factors with multiplicities,
/// in canonical order. The leading coefficient is dropped.
pub fn factor(f: &Field, a: &[Fe]) -> Vec<(Poly, usize)> {
    let mut rng = seeded_rng(f, a);
    factor_with_rng(f, a, &mut rng)
}

/// As [`factor`], with caller-supplied randomness for the splitting step.
pub fn factor_with_rng<R: Rng + ?Sized>(f: &Field, a: &[Fe], rng: &mut R) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    for (g, e) in squarefree(f, a) {
        for (h, d) in distinct_degree(f, &g, None) {
            for irr in equal_degree(f, &h, d, rng) {
                out.push((irr, e));
            }
        }
    }
    sort_factors(&mut out);
    out
}

/// Whether a polynomial of positive degree is irreducible.
pub fn is_irreducible(f: &Field, a: &[Fe]) -> bool {
    let a = poly::monic(f, a);
    let n = a.len().saturating_sub(1);
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let da = poly::derivative(f, &a);
    if poly::gcd(f, &a, &da).len() > 1 {
        return false;
    }
    let dd = distinct_degree(f, &a, Some(n / 2));
    dd.len() == 1 && dd[0].1 == 0
}

/// Roots of `a` in `f` with multiplicities, sorted by element.
pub fn roots(f: &Field, a: &[Fe]) -> Vec<(Fe, usize)> {
    let mut rng = seeded_rng(f, a);
    roots_with_rng(f, a, &mut rng)
}

pub fn roots_with_rng<R: Rng + ?Sized>(f: &Field, a: &[Fe], rng: &mut R) -> Vec<(Fe, usize)> {
    let mut out = Vec::new();
    if poly::degree(a).map_or(true, |d| d == 0) {
        return out;
    }
    for (g, e) in squarefree(f, a) {
        let lin = linear_part(f, &g);
        for r in equal_degree(f, &lin, 1, rng) {
            out.push((f.neg(&r[0]), e));
        }
    }
    out.sort();
    out
}

/// Distinct roots of `a` in `f`, sorted.
pub fn distinct_roots(f: &Field, a: &[Fe]) -> Vec<Fe> {
    roots(f, a).into_iter().map(|(r, _)| r).collect()
}

/// `gcd(g, x^{|F|} - x)`: the product of the distinct linear factors.
pub fn linear_part(f: &Field, g: &[Fe]) -> Poly {
    let g = poly::monic(f, g);
    if g.len() <= 1 {
        return g;
    }
    if g.len() == 2 {
        return g;
    }
    let h = poly::x_pow_field_order(f, &g);
    poly::gcd(f, &g, &poly::sub(f, &h, &poly::x(f)))
}

/// Number of distinct roots in `f` (cheaper than listing them).
pub fn count_distinct_roots(f: &Field, a: &[Fe]) -> usize {
    let g = poly::monic(f, a);
    if g.len() <= 1 {
        return 0;
    }
    linear_part(f, &g).len() - 1
}

/// Square root by Tonelli–Shanks in a field of odd order `q`.
pub fn sqrt_tonelli(f: &Field, a: &Fe, q: u128) -> Option<Fe> {
    if a.is_zero() {
        return Some(Fe::ZERO);
    }
    let one = f.one();
    if f.pow(a, (q - 1) / 2) != one {
        return None;
    }
    let mut s = 0u32;
    let mut t = q - 1;
    while t % 2 == 0 {
        t /= 2;
        s += 1;
    }
    let mut idx: u128 = 2;
    let z = loop {
        let cand = f.from_index(idx);
        if !cand.is_zero() && f.pow(&cand, (q - 1) / 2) != one {
            break cand;
        }
        idx += 1;
    };
    let mut m = s;
    let mut c = f.pow(&z, t);
    let mut tt = f.pow(a, t);
    let mut r = f.pow(a, (t + 1) / 2);
    while tt != one {
        let mut i = 0;
        let mut t2 = tt;
        while t2 != one {
            t2 = f.sqr(&t2);
            i += 1;
        }
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b = f.sqr(&b);
        }
        m = i;
        c = f.sqr(&b);
        tt = f.mul(&tt, &c);
        r = f.mul(&r, &b);
    }
    Some(r)
}

/// Distinct roots in `f` of `y^2 + b·y + c`, sorted.
pub fn solve_quadratic(f: &Field, b: &Fe, c: &Fe) -> Vec<Fe> {
    if f.characteristic() == 2 {
        if b.is_zero() {
            return vec![f.frob(c, -1)];
        }
        return distinct_roots(f, &[*c, *b, f.one()]);
    }
    let four = f.from_int(4);
    let disc = f.sub(&f.sqr(b), &f.mul(&four, c));
    let s = match f.sqrt(&disc) {
        Some(s) => s,
        None => return Vec::new(),
    };
    let inv2 = f.inv(&f.from_int(2));
    let r1 = f.mul(&f.sub(&s, b), &inv2);
    let r2 = f.mul(&f.sub(&f.neg(&s), b), &inv2);
    let mut v = vec![r1, r2];
    v.sort();
    v.dedup();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::Tower;

    fn expand(f: &Field, facs: &[(Poly, usize)]) -> Poly {
        let mut acc = poly::constant(f.one());
        for (g, e) in facs {
            for _ in 0..*e {
                acc = poly::mul(f, &acc, g);
            }
        }
        acc
    }

    #[test]
    fn factor_round_trip_many_fields() {
        for &(p, m) in &[(2u32, 1usize), (2, 3), (3, 2), (5, 1), (7, 2)] {
            let f = Tower::get(p).field(m);
            let mut rng = ChaCha8Rng::seed_from_u64(p as u64 * 100 + m as u64);
            for _ in 0..25 {
                let n = rng.gen_range(1..12);
                let mut a: Poly = (0..n).map(|_| f.random(&mut rng)).collect();
                a.push(f.one());
                // Square one random factor to exercise multiplicities.
                let sq: Poly = vec![f.random(&mut rng), f.one()];
                let a = poly::mul(&f, &a, &poly::mul(&f, &sq, &sq));
                let facs = factor(&f, &a);
                assert_eq!(expand(&f, &facs), a);
                for (g, _) in &facs {
                    assert!(is_irreducible(&f, g));
                }
            }
        }
    }

    #[test]
    fn roots_match_exhaustive_evaluation_over_f9() {
        let f = Tower::get(3).field(2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let a: Poly = poly::trimmed((0..7).map(|_| f.random(&mut rng)).collect());
            if a.len() < 2 {
                continue;
            }
            let mut brute: Vec<Fe> = (0..9u128)
                .map(|i| f.from_index(i))
                .filter(|t| poly::eval(&f, &a, t).is_zero())
                .collect();
            brute.sort();
            assert_eq!(distinct_roots(&f, &a), brute);
        }
    }

    #[test]
    fn x_to_the_q_minus_x_splits() {
        let f = Tower::get(2).field(3);
        let mut a = vec![Fe::ZERO; 9];
        a[8] = f.one();
        a[1] = f.one();
        let facs = factor(&f, &a);
        assert_eq!(facs.len(), 8);
        assert!(facs.iter().all(|(g, e)| g.len() == 2 && *e == 1));
    }

    #[test]
    fn x2_plus_1_irreducible_over_f3() {
        let f = Tower::get(3).field(1);
        let a = vec![f.one(), Fe::ZERO, f.one()];
        assert!(is_irreducible(&f, &a));
        assert_eq!(factor(&f, &a), vec![(a, 1)]);
    }

    #[test]
    fn square_roots_and_quadratics() {
        for &(p, m) in &[(3u32, 3usize), (5, 2), (2, 5), (2, 4)] {
            let f = Tower::get(p).field(m);
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..40 {
                let a = f.random(&mut rng);
                let s = f.sqrt(&f.sqr(&a)).unwrap();
                assert_eq!(f.sqr(&s), f.sqr(&a));
                let b = f.random(&mut rng);
                let c = f.random(&mut rng);
                for y in solve_quadratic(&f, &b, &c) {
                    let v = f.add(&f.add(&f.sqr(&y), &f.mul(&b, &y)), &c);
                    assert!(v.is_zero());
                }
            }
        }
    }
}
