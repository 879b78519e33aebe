//! Dense univariate polynomials over a [`Field`].
//!
//! A polynomial is a `Vec<Fe>` of coefficients from low to high degree with
//! no trailing zeros; the zero polynomial is the empty vector. All functions
//! take the coefficient field explicitly.

use super::field::{Fe, Field};

pub type Poly = Vec<Fe>;

pub fn trim(a: &mut Poly) {
    while a.last().map_or(false, |c| c.is_zero()) {
        a.pop();
    }
}

pub fn trimmed(mut a: Poly) -> Poly {
    trim(&mut a);
    a
}

/// Degree, with `None` for the zero polynomial.
pub fn degree(a: &[Fe]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

pub fn constant(c: Fe) -> Poly {
    trimmed(vec![c])
}

/// The monomial `x`.
pub fn x(f: &Field) -> Poly {
    vec![Fe::ZERO, f.one()]
}

/// `x - a`.
pub fn linear(f: &Field, a: &Fe) -> Poly {
    vec![f.neg(a), f.one()]
}

pub fn lead(a: &[Fe]) -> Fe {
    a.last().copied().unwrap_or(Fe::ZERO)
}

pub fn add(f: &Field, a: &[Fe], b: &[Fe]) -> Poly {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(Fe::ZERO);
        let y = b.get(i).copied().unwrap_or(Fe::ZERO);
        out.push(f.add(&x, &y));
    }
    trimmed(out)
}

pub fn sub(f: &Field, a: &[Fe], b: &[Fe]) -> Poly {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(Fe::ZERO);
        let y = b.get(i).copied().unwrap_or(Fe::ZERO);
        out.push(f.sub(&x, &y));
    }
    trimmed(out)
}

pub fn neg(f: &Field, a: &[Fe]) -> Poly {
    a.iter().map(|c| f.neg(c)).collect()
}

pub fn scale(f: &Field, a: &[Fe], s: &Fe) -> Poly {
    if s.is_zero() {
        return Vec::new();
    }
    trimmed(a.iter().map(|c| f.mul(c, s)).collect())
}

pub fn mul(f: &Field, a: &[Fe], b: &[Fe]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Fe::ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let t = f.mul(x, y);
            out[i + j] = f.add(&out[i + j], &t);
        }
    }
    trimmed(out)
}

/// Quotient and remainder of `a` by a nonzero `b`.
pub fn divrem(f: &Field, a: &[Fe], b: &[Fe]) -> (Poly, Poly) {
    let db = degree(b).expect("division by the zero polynomial");
    let mut r: Poly = trimmed(a.to_vec());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let li = f.inv(&b[db]);
    let mut q = vec![Fe::ZERO; r.len() - db];
    while r.len() > db {
        let top = r.len() - 1;
        let c = f.mul(&r[top], &li);
        let shift = top - db;
        q[shift] = c;
        for k in 0..=db {
            if b[k].is_zero() {
                continue;
            }
            let t = f.mul(&c, &b[k]);
            r[shift + k] = f.sub(&r[shift + k], &t);
        }
        r.pop();
        trim(&mut r);
    }
    (trimmed(q), r)
}

pub fn rem(f: &Field, a: &[Fe], b: &[Fe]) -> Poly {
    divrem(f, a, b).1
}

/// Exact division; panics if `b` does not divide `a`.
pub fn div_exact(f: &Field, a: &[Fe], b: &[Fe]) -> Poly {
    let (q, r) = divrem(f, a, b);
    assert!(r.is_empty(), "inexact polynomial division");
    q
}

pub fn monic(f: &Field, a: &[Fe]) -> Poly {
    match a.last() {
        None => Vec::new(),
        Some(l) => scale(f, a, &f.inv(l)),
    }
}

/// Monic greatest common divisor (zero if both inputs are zero).
pub fn gcd(f: &Field, a: &[Fe], b: &[Fe]) -> Poly {
    let mut x = trimmed(a.to_vec());
    let mut y = trimmed(b.to_vec());
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

/// Extended gcd: returns `(g, s, t)` with `s·a + t·b = g`, `g` monic.
pub fn xgcd(f: &Field, a: &[Fe], b: &[Fe]) -> (Poly, Poly, Poly) {
    let (mut r0, mut r1) = (trimmed(a.to_vec()), trimmed(b.to_vec()));
    let (mut s0, mut s1) = (constant(f.one()), Vec::new());
    let (mut t0, mut t1) = (Vec::new(), constant(f.one()));
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s2 = sub(f, &s0, &mul(f, &q, &s1));
        let t2 = sub(f, &t0, &mul(f, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_empty() {
        return (r0, s0, t0);
    }
    let li = f.inv(&lead(&r0));
    (scale(f, &r0, &li), scale(f, &s0, &li), scale(f, &t0, &li))
}

pub fn mulmod(f: &Field, a: &[Fe], b: &[Fe], m: &[Fe]) -> Poly {
    rem(f, &mul(f, a, b), m)
}

/// `a^e mod m`.
pub fn powmod(f: &Field, a: &[Fe], mut e: u128, m: &[Fe]) -> Poly {
    let mut result = rem(f, &constant(f.one()), m);
    let mut base = rem(f, a, m);
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(f, &result, &base, m);
        }
        e >>= 1;
        if e > 0 {
            base = mulmod(f, &base, &base, m);
        }
    }
    result
}

/// `a^{p^j} mod m` where `p` is the characteristic: coefficients are raised
/// through the field Frobenius and the variable through repeated powering.
pub fn frobenius_pow(f: &Field, a: &[Fe], j: usize, m: &[Fe]) -> Poly {
    let mut cur = rem(f, a, m);
    for _ in 0..j {
        cur = powmod(f, &cur, f.characteristic() as u128, m);
    }
    cur
}

/// `x^{|F|} mod m`, computed by `m_F` successive `p`-th powers.
pub fn x_pow_field_order(f: &Field, m: &[Fe]) -> Poly {
    frobenius_pow(f, &x(f), f.degree(), m)
}

pub fn eval(f: &Field, a: &[Fe], t: &Fe) -> Fe {
    let mut acc = Fe::ZERO;
    for c in a.iter().rev() {
        acc = f.add(&f.mul(&acc, t), c);
    }
    acc
}

pub fn derivative(f: &Field, a: &[Fe]) -> Poly {
    if a.len() <= 1 {
        return Vec::new();
    }
    trimmed(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.scale(c, (i as u32) % f.characteristic()))
            .collect(),
    )
}

/// Product of `(x - r)` over the given roots.
pub fn from_roots(f: &Field, roots: &[Fe]) -> Poly {
    let mut acc = constant(f.one());
    for r in roots {
        acc = mul(f, &acc, &linear(f, r));
    }
    acc
}

/// Composition `a(b(x))`.
pub fn compose(f: &Field, a: &[Fe], b: &[Fe]) -> Poly {
    let mut acc: Poly = Vec::new();
    for c in a.iter().rev() {
        acc = add(f, &mul(f, &acc, b), &constant(*c));
    }
    acc
}

/// Maps each coefficient through `g`.
pub fn map(a: &[Fe], g: impl Fn(&Fe) -> Fe) -> Poly {
    trimmed(a.iter().map(g).collect())
}

/// Embeds the coefficients of a polynomial over the subfield of degree `d`
/// into `f`.
pub fn embed(f: &Field, d: usize, a: &[Fe]) -> Poly {
    map(a, |c| f.embed_from(d, c))
}

/// Restricts every coefficient to the subfield of degree `d`, if possible.
pub fn restrict(f: &Field, d: usize, a: &[Fe]) -> Option<Poly> {
    a.iter().map(|c| f.restrict_to(d, c)).collect()
}

/// Applies `c ↦ c^{p^j}` to every coefficient.
pub fn frob_coeffs(f: &Field, a: &[Fe], j: i64) -> Poly {
    map(a, |c| f.frob(c, j))
}

/// The polynomial of degree `< xs.len()` taking the values `ys` at the
/// distinct points `xs` (Newton divided differences).
pub fn interpolate(f: &Field, xs: &[Fe], ys: &[Fe]) -> Poly {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = f.sub(&coef[i], &coef[i - 1]);
            let den = f.sub(&xs[i], &xs[i - j]);
            coef[i] = f.div(&num, &den);
        }
    }
    let mut acc: Poly = Vec::new();
    for i in (0..n).rev() {
        acc = add(f, &mul(f, &acc, &linear(f, &xs[i])), &constant(coef[i]));
    }
    trimmed(acc)
}
