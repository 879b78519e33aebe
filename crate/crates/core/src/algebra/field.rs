//! Finite fields F_{p^m} in an absolute representation over F_p, with a
//! registry that builds every field together with coherent embeddings of all
//! of its subfields.
//!
//! Every field of a given characteristic is keyed by its absolute degree `m`.
//! Building F_{p^m} first builds F_{p^d} for each proper divisor `d` of `m` and
//! fixes an embedding F_{p^d} → F_{p^m}. The embeddings are chosen so that the
//! diagram of all subfield inclusions commutes, which makes embedding and
//! restriction path-independent.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use rand::Rng;

use super::fpoly::{self, FpPoly};

/// Largest supported absolute extension degree.
pub const MAX_DEGREE: usize = 128;

/// Largest supported characteristic (coefficients are stored as bytes).
pub const MAX_CHAR: u32 = 251;

/// An element of some F_{p^m}: coefficients of `t^0 .. t^{m-1}` in the
/// defining modulus of that field. Entries at index `≥ m` are always zero, so
/// derived equality, hashing and ordering are those of the coefficient vector.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe(pub(crate) [u8; MAX_DEGREE]);

impl Fe {
    pub const ZERO: Fe = Fe([0; MAX_DEGREE]);

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Coefficient of `t^i`.
    pub fn coeff(&self, i: usize) -> u32 {
        self.0[i] as u32
    }

    /// Element of the prime field embedded as a constant.
    pub fn from_fp(c: u32) -> Fe {
        let mut a = Fe::ZERO;
        a.0[0] = c as u8;
        a
    }

    /// Returns the prime-field value if the element is a constant.
    pub fn as_fp(&self) -> Option<u32> {
        if self.0[1..].iter().all(|&c| c == 0) {
            Some(self.0[0] as u32)
        } else {
            None
        }
    }
}

impl Default for Fe {
    fn default() -> Self {
        Fe::ZERO
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.0.iter().rposition(|&c| c != 0).map(|i| i + 1).unwrap_or(1);
        write!(f, "[")?;
        for (i, c) in self.0[..last].iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Data of an embedding F_{p^d} → F_{p^m} plus a left inverse used for
/// restriction.
struct Embedding {
    d: usize,
    /// Images of `t_d^i` for `i < d`.
    images: Vec<Fe>,
    /// Coordinates of F_{p^m} on which the image matrix has full rank.
    pivots: Vec<usize>,
    /// Inverse of the `d×d` submatrix of the image matrix on `pivots`.
    inverse: Vec<Vec<u32>>,
}

/// The finite field F_{p^m}.
pub struct Field {
    p: u32,
    m: usize,
    modulus: FpPoly,
    /// `t^m = Σ red_k t^k` with nonzero `red_k`.
    red: Vec<(usize, u32)>,
    inv_table: Vec<u32>,
    /// `frob[j][i]` is the image of `t^i` under `a ↦ a^{p^j}`.
    frob: Vec<OnceLock<Vec<Fe>>>,
    subs: BTreeMap<usize, Embedding>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p, self.m)
    }
}

impl Field {
    fn bare(p: u32, m: usize) -> Field {
        let modulus = fpoly::find_irreducible(p, m);
        let red = (0..m)
            .filter(|&k| modulus[k] != 0)
            .map(|k| (k, (p - modulus[k]) % p))
            .collect();
        let mut inv_table = vec![0u32; p as usize];
        for a in 1..p {
            inv_table[a as usize] = fpoly::inv_mod(a, p);
        }
        Field {
            p,
            m,
            modulus,
            red,
            inv_table,
            frob: (0..m).map(|_| OnceLock::new()).collect(),
            subs: BTreeMap::new(),
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Absolute degree over F_p.
    pub fn degree(&self) -> usize {
        self.m
    }

    /// Defining modulus over F_p, low-to-high, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Cardinality `p^m` when it fits in 128 bits.
    pub fn order(&self) -> Option<u128> {
        let mut n: u128 = 1;
        for _ in 0..self.m {
            n = n.checked_mul(self.p as u128)?;
        }
        Some(n)
    }

    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    pub fn one(&self) -> Fe {
        Fe::from_fp(1)
    }

    pub fn from_int(&self, c: i64) -> Fe {
        Fe::from_fp(c.rem_euclid(self.p as i64) as u32)
    }

    /// The generator `t` of the power basis (for `m > 1`).
    pub fn gen(&self) -> Fe {
        let mut a = Fe::ZERO;
        if self.m == 1 {
            a.0[0] = ((self.p - self.modulus[0]) % self.p) as u8;
        } else {
            a.0[1] = 1;
        }
        a
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Fe {
        assert!(c.len() <= self.m, "too many coefficients for {self:?}");
        let mut a = Fe::ZERO;
        for (i, &x) in c.iter().enumerate() {
            a.0[i] = (x % self.p) as u8;
        }
        a
    }

    pub fn coeffs(&self, a: &Fe) -> Vec<u32> {
        a.0[..self.m].iter().map(|&c| c as u32).collect()
    }

    /// Mixed-radix index of an element (coefficient `i` has weight `p^i`).
    pub fn index_of(&self, a: &Fe) -> u128 {
        let mut v: u128 = 0;
        for i in (0..self.m).rev() {
            v = v * self.p as u128 + a.0[i] as u128;
        }
        v
    }

    /// Inverse of [`Field::index_of`].
    pub fn from_index(&self, mut v: u128) -> Fe {
        let mut a = Fe::ZERO;
        for i in 0..self.m {
            a.0[i] = (v % self.p as u128) as u8;
            v /= self.p as u128;
        }
        a
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        let mut a = Fe::ZERO;
        for i in 0..self.m {
            a.0[i] = rng.gen_range(0..self.p) as u8;
        }
        a
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        loop {
            let a = self.random(rng);
            if !a.is_zero() {
                return a;
            }
        }
    }

    pub fn add(&self, a: &Fe, b: &Fe) -> Fe {
        let p = self.p as u16;
        let mut c = Fe::ZERO;
        for i in 0..self.m {
            let s = a.0[i] as u16 + b.0[i] as u16;
            c.0[i] = if s >= p { (s - p) as u8 } else { s as u8 };
        }
        c
    }

    pub fn sub(&self, a: &Fe, b: &Fe) -> Fe {
        let p = self.p as u16;
        let mut c = Fe::ZERO;
        for i in 0..self.m {
            let s = a.0[i] as u16 + p - b.0[i] as u16;
            c.0[i] = if s >= p { (s - p) as u8 } else { s as u8 };
        }
        c
    }

    pub fn neg(&self, a: &Fe) -> Fe {
        self.sub(&Fe::ZERO, a)
    }

    /// Multiplication by a prime-field scalar.
    pub fn scale(&self, a: &Fe, s: u32) -> Fe {
        let s = s % self.p;
        let mut c = Fe::ZERO;
        for i in 0..self.m {
            c.0[i] = ((a.0[i] as u32 * s) % self.p) as u8;
        }
        c
    }

    fn reduce(&self, acc: &mut [u32]) -> Fe {
        let m = self.m;
        let p = self.p;
        let len = acc.len();
        if len > m {
            for i in (m..len).rev() {
                let c = acc[i] % p;
                if c == 0 {
                    continue;
                }
                let base = i - m;
                for &(k, r) in &self.red {
                    acc[base + k] += c * r;
                }
            }
        }
        let mut out = Fe::ZERO;
        for i in 0..m.min(len) {
            out.0[i] = (acc[i] % p) as u8;
        }
        out
    }

    pub fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        let m = self.m;
        if m == 1 {
            return Fe::from_fp(a.0[0] as u32 * b.0[0] as u32 % self.p);
        }
        let la = match a.0[..m].iter().rposition(|&c| c != 0) {
            Some(i) => i + 1,
            None => return Fe::ZERO,
        };
        let lb = match b.0[..m].iter().rposition(|&c| c != 0) {
            Some(i) => i + 1,
            None => return Fe::ZERO,
        };
        let mut acc = [0u32; 2 * MAX_DEGREE];
        for i in 0..la {
            let x = a.0[i] as u32;
            if x == 0 {
                continue;
            }
            let row = &mut acc[i..i + lb];
            for (slot, &y) in row.iter_mut().zip(&b.0[..lb]) {
                *slot += x * y as u32;
            }
        }
        self.reduce(&mut acc[..la + lb - 1])
    }

    pub fn sqr(&self, a: &Fe) -> Fe {
        self.mul(a, a)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm over F_p.
    pub fn inv(&self, a: &Fe) -> Fe {
        assert!(!a.is_zero(), "inverse of zero in {self:?}");
        let p = self.p;
        if self.m == 1 {
            return Fe::from_fp(self.inv_table[a.0[0] as usize]);
        }
        // Invariant: s·a ≡ r0 (mod M), u·a ≡ r1 (mod M).
        let mut r0: Vec<u32> = self.modulus.clone();
        let mut r1: Vec<u32> = self.coeffs(a);
        fpoly::trim(&mut r1);
        let mut s0: Vec<u32> = Vec::new();
        let mut s1: Vec<u32> = vec![1];
        while r1.len() > 1 {
            // r0 = qt*r1 + rem
            let mut rem = r0.clone();
            let d1 = r1.len() - 1;
            let li = self.inv_table[r1[d1] as usize];
            let mut qt = vec![0u32; rem.len().saturating_sub(d1).max(1)];
            while rem.len() > d1 {
                let top = rem.len() - 1;
                let c = rem[top] * li % p;
                let shift = top - d1;
                qt[shift] = c;
                if c != 0 {
                    for (k, &v) in r1.iter().enumerate() {
                        rem[shift + k] = (rem[shift + k] + p - c * v % p) % p;
                    }
                }
                rem.pop();
                fpoly::trim(&mut rem);
            }
            let prod = fpoly::mul(&qt, &s1, p);
            let s2 = fpoly::sub(&s0, &prod, p);
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        let c = self.inv_table[r1[0] as usize];
        let mut out = Fe::ZERO;
        for (i, &v) in s1.iter().enumerate() {
            out.0[i] = (v * c % p) as u8;
        }
        out
    }

    pub fn div(&self, a: &Fe, b: &Fe) -> Fe {
        self.mul(a, &self.inv(b))
    }

    pub fn pow(&self, a: &Fe, mut e: u128) -> Fe {
        let mut r = self.one();
        let mut b = *a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.sqr(&b);
            e >>= 1;
        }
        r
    }

    fn frob_table(&self, j: usize) -> &Vec<Fe> {
        self.frob[j].get_or_init(|| {
            if j == 0 {
                return (0..self.m).map(|i| self.monomial(i)).collect();
            }
            if j == 1 {
                let tp = self.pow(&self.gen(), self.p as u128);
                let mut out = Vec::with_capacity(self.m);
                let mut cur = self.one();
                for _ in 0..self.m {
                    out.push(cur);
                    cur = self.mul(&cur, &tp);
                }
                return out;
            }
            let prev = self.frob_table(j - 1).clone();
            prev.iter().map(|x| self.frob_p(x, 1)).collect()
        })
    }

    fn monomial(&self, i: usize) -> Fe {
        let mut a = Fe::ZERO;
        if i < self.m {
            a.0[i] = 1;
        }
        a
    }

    fn frob_p(&self, a: &Fe, j: usize) -> Fe {
        let table = self.frob_table(j);
        let mut acc = [0u32; MAX_DEGREE];
        for i in 0..self.m {
            let c = a.0[i] as u32;
            if c == 0 {
                continue;
            }
            let img = &table[i];
            for (slot, &v) in acc[..self.m].iter_mut().zip(&img.0[..self.m]) {
                *slot += c * v as u32;
            }
        }
        let mut out = Fe::ZERO;
        for i in 0..self.m {
            out.0[i] = (acc[i] % self.p) as u8;
        }
        out
    }

    /// `a^{p^j}` for any integer `j` (negative values invert the Frobenius).
    pub fn frob(&self, a: &Fe, j: i64) -> Fe {
        let j = j.rem_euclid(self.m as i64) as usize;
        if j == 0 || self.m == 1 {
            return *a;
        }
        self.frob_p(a, j)
    }

    /// Trace to F_p.
    pub fn trace(&self, a: &Fe) -> u32 {
        let mut s = *a;
        let mut cur = *a;
        for _ in 1..self.m {
            cur = self.frob(&cur, 1);
            s = self.add(&s, &cur);
        }
        s.0[0] as u32
    }

    /// Norm relative to the subfield of absolute degree `d` (with `d | m`),
    /// returned as an element of this field.
    pub fn norm_to(&self, a: &Fe, d: usize) -> Fe {
        assert!(self.m % d == 0);
        let mut prod = *a;
        let mut cur = *a;
        for _ in 1..self.m / d {
            cur = self.frob(&cur, d as i64);
            prod = self.mul(&prod, &cur);
        }
        prod
    }

    /// Square root, when one exists (any characteristic).
    pub fn sqrt(&self, a: &Fe) -> Option<Fe> {
        if a.is_zero() {
            return Some(Fe::ZERO);
        }
        if self.p == 2 {
            return Some(self.frob(a, -1));
        }
        match self.order() {
            Some(q) => super::factor::sqrt_tonelli(self, a, q),
            None => {
                // Orders beyond 128 bits: split y^2 - a directly.
                let poly = vec![self.neg(a), Fe::ZERO, self.one()];
                super::factor::distinct_roots(self, &poly).into_iter().next()
            }
        }
    }

    /// Whether `a` lies in the subfield of absolute degree `d`.
    pub fn in_subfield(&self, a: &Fe, d: usize) -> bool {
        self.m % d == 0 && self.frob(a, d as i64) == *a
    }

    /// Embeds an element of the subfield of degree `d` (given in that
    /// subfield's own representation).
    pub fn embed_from(&self, d: usize, a: &Fe) -> Fe {
        if d == self.m {
            return *a;
        }
        let e = self.subs.get(&d).unwrap_or_else(|| panic!("F_{}^{d} is not a subfield of {self:?}", self.p));
        let mut acc = [0u32; MAX_DEGREE];
        for i in 0..e.d {
            let c = a.0[i] as u32;
            if c == 0 {
                continue;
            }
            for (slot, &v) in acc[..self.m].iter_mut().zip(&e.images[i].0[..self.m]) {
                *slot += c * v as u32;
            }
        }
        let mut out = Fe::ZERO;
        for i in 0..self.m {
            out.0[i] = (acc[i] % self.p) as u8;
        }
        out
    }

    /// Expresses `a` in the representation of the subfield of degree `d`, or
    /// returns `None` when `a` does not lie in that subfield.
    pub fn restrict_to(&self, d: usize, a: &Fe) -> Option<Fe> {
        if d == self.m {
            return Some(*a);
        }
        let e = self.subs.get(&d)?;
        let mut c = Fe::ZERO;
        for r in 0..e.d {
            let mut s = 0u32;
            for (k, &piv) in e.pivots.iter().enumerate() {
                s += e.inverse[r][k] * a.0[piv] as u32;
            }
            c.0[r] = (s % self.p) as u8;
        }
        if self.embed_from(d, &c) == *a {
            Some(c)
        } else {
            None
        }
    }

    /// Smallest subfield degree containing `a`.
    pub fn minimal_degree(&self, a: &Fe) -> usize {
        for d in divisors(self.m) {
            if d == self.m || self.frob(a, d as i64) == *a {
                return d;
            }
        }
        self.m
    }

    pub fn to_hex(&self, a: &Fe) -> String {
        let mut s = String::with_capacity(2 * self.m);
        for i in 0..self.m {
            s.push_str(&format!("{:02x}", a.0[i]));
        }
        s
    }

    pub fn from_hex(&self, s: &str) -> Option<Fe> {
        if s.len() != 2 * self.m {
            return None;
        }
        let mut a = Fe::ZERO;
        for i in 0..self.m {
            let v = u8::from_str_radix(s.get(2 * i..2 * i + 2)?, 16).ok()?;
            if v as u32 >= self.p {
                return None;
            }
            a.0[i] = v;
        }
        Some(a)
    }

    fn set_embedding(&mut self, d: usize, images: Vec<Fe>) {
        // Gaussian elimination on the m×d image matrix to find pivot rows.
        let p = self.p;
        let m = self.m;
        let mat: Vec<Vec<u32>> = (0..m)
            .map(|row| (0..d).map(|col| images[col].0[row] as u32).collect())
            .collect();
        // Work on the transpose view by selecting rows greedily.
        let mut pivots = Vec::with_capacity(d);
        let mut basis: Vec<(usize, Vec<u32>)> = Vec::new(); // (lead col, reduced row)
        for (row_idx, row) in mat.iter().enumerate() {
            let mut r = row.clone();
            for (lead, b) in &basis {
                let c = r[*lead];
                if c != 0 {
                    for k in 0..d {
                        r[k] = (r[k] + p - c * b[k] % p) % p;
                    }
                }
            }
            if let Some(lead) = r.iter().position(|&c| c != 0) {
                let li = self.inv_table[r[lead] as usize];
                for v in r.iter_mut() {
                    *v = *v * li % p;
                }
                for (_, b) in basis.iter_mut() {
                    let c = b[lead];
                    if c != 0 {
                        for k in 0..d {
                            b[k] = (b[k] + p - c * r[k] % p) % p;
                        }
                    }
                }
                basis.push((lead, r));
                pivots.push(row_idx);
                if pivots.len() == d {
                    break;
                }
            }
        }
        assert_eq!(pivots.len(), d, "embedding image is not injective");
        // Invert the d×d submatrix S with S[k][col] = images[col][pivots[k]].
        let mut aug: Vec<Vec<u32>> = (0..d)
            .map(|k| {
                let mut row: Vec<u32> = (0..d).map(|col| images[col].0[pivots[k]] as u32).collect();
                row.extend((0..d).map(|j| u32::from(j == k)));
                row
            })
            .collect();
        for col in 0..d {
            let piv = (col..d).find(|&r| aug[r][col] != 0).expect("singular pivot block");
            aug.swap(col, piv);
            let li = self.inv_table[aug[col][col] as usize];
            for v in aug[col].iter_mut() {
                *v = *v * li % p;
            }
            for r in 0..d {
                if r != col && aug[r][col] != 0 {
                    let c = aug[r][col];
                    for k in 0..2 * d {
                        aug[r][k] = (aug[r][k] + p - c * aug[col][k] % p) % p;
                    }
                }
            }
        }
        // S·c = a[pivots] gives c = S^{-1}·a[pivots].
        let inverse = aug.into_iter().map(|row| row[d..].to_vec()).collect();
        self.subs.insert(d, Embedding { d, images, pivots, inverse });
    }
}

pub fn divisors(m: usize) -> Vec<usize> {
    (1..=m).filter(|d| m % d == 0).collect()
}

fn prime_divisors(m: usize) -> Vec<usize> {
    (2..=m).filter(|&l| m % l == 0 && (2..l).all(|k| l % k != 0)).collect()
}

/// Registry of all fields of one characteristic.
pub struct Tower {
    p: u32,
    fields: RwLock<BTreeMap<usize, Arc<Field>>>,
}

static TOWERS: OnceLock<Mutex<HashMap<u32, Arc<Tower>>>> = OnceLock::new();

impl Tower {
    /// Shared registry for characteristic `p`.
    pub fn get(p: u32) -> Arc<Tower> {
        assert!(p >= 2 && p <= MAX_CHAR, "unsupported characteristic {p}");
        let map = TOWERS.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = map.lock().expect("tower registry poisoned");
        guard
            .entry(p)
            .or_insert_with(|| Arc::new(Tower { p, fields: RwLock::new(BTreeMap::new()) }))
            .clone()
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// The field of absolute degree `m`, building it (and its subfields) on
    /// first use.
    pub fn field(&self, m: usize) -> Arc<Field> {
        assert!((1..=MAX_DEGREE).contains(&m), "field degree {m} exceeds the supported bound {MAX_DEGREE}");
        if let Some(f) = self.fields.read().expect("field registry poisoned").get(&m) {
            return f.clone();
        }
        let subfields: Vec<Arc<Field>> = divisors(m)
            .into_iter()
            .filter(|&d| d < m)
            .map(|d| self.field(d))
            .collect();
        let built = Arc::new(self.build(m, &subfields));
        let mut w = self.fields.write().expect("field registry poisoned");
        w.entry(m).or_insert(built).clone()
    }

    fn build(&self, m: usize, subfields: &[Arc<Field>]) -> Field {
        let p = self.p;
        let mut f = Field::bare(p, m);
        if m == 1 {
            return f;
        }
        let by_degree: BTreeMap<usize, &Arc<Field>> = subfields.iter().map(|s| (s.m, s)).collect();
        let mut maximal: Vec<usize> = prime_divisors(m).into_iter().map(|l| m / l).collect();
        maximal.sort_unstable();
        // Root images of the generators of maximal subfields.
        let mut chosen: Vec<(usize, Fe)> = Vec::new();
        for &d in &maximal {
            let sub = by_degree[&d];
            let root = if d == 1 {
                f.from_coeffs(&[(p - sub.modulus[0]) % p])
            } else {
                let r0 = root_of_fp_poly(&f, &sub.modulus, d);
                let mut conj: Vec<Fe> = (0..d).map(|j| f.frob(&r0, j as i64)).collect();
                conj.sort();
                let mut pick = None;
                'cand: for c in conj {
                    for (d2, r2) in &chosen {
                        let g = gcd(d, *d2);
                        if g == 1 {
                            continue;
                        }
                        let s1 = by_degree[&d];
                        let s2 = by_degree[d2];
                        let img1 = eval_in(&f, &s1.subs[&g].images[1], &c, d);
                        let img2 = eval_in(&f, &s2.subs[&g].images[1], r2, *d2);
                        if img1 != img2 {
                            continue 'cand;
                        }
                    }
                    pick = Some(c);
                    break;
                }
                pick.expect("no compatible subfield embedding")
            };
            chosen.push((d, root));
        }
        for &(d, root) in &chosen {
            let mut images = Vec::with_capacity(d);
            let mut cur = f.one();
            for _ in 0..d {
                images.push(cur);
                cur = f.mul(&cur, &root);
            }
            if d == 1 {
                images = vec![f.one()];
            }
            f.set_embedding(d, images);
        }
        for d in divisors(m) {
            if d == m || f.subs.contains_key(&d) {
                continue;
            }
            let via = *maximal.iter().find(|&&big| big % d == 0).expect("divisor lattice");
            let mid = by_degree[&via];
            let images: Vec<Fe> = (0..d)
                .map(|i| {
                    let in_mid = if d == 1 {
                        mid.one()
                    } else {
                        mid.subs[&d].images[i]
                    };
                    f.embed_from(via, &in_mid)
                })
                .collect();
            f.set_embedding(d, images);
        }
        f
    }
}

/// Evaluates an element `a` of F_{p^d} (given in F_{p^d}'s representation) at
/// the image `root` of `t_d` inside `f`.
fn eval_in(f: &Field, a: &Fe, root: &Fe, d: usize) -> Fe {
    let mut acc = Fe::ZERO;
    for i in (0..d).rev() {
        acc = f.mul(&acc, root);
        acc = f.add(&acc, &Fe::from_fp(a.0[i] as u32));
    }
    acc
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Finds one root in `f` of the irreducible F_p-polynomial `g` of degree `d`
/// (with `d | m`), by splitting along traces of random multiples of `x`.
///
/// Since all roots lie in F_{p^d}, the powers `x^{p^j} mod g` have period `d`
/// and can be computed over F_p; `Tr(δx) mod g` is then a short F_m-linear
/// combination of them.
fn root_of_fp_poly(f: &Field, g: &FpPoly, d: usize) -> Fe {
    use rand::SeedableRng;
    let p = f.p;
    let xs: Vec<FpPoly> = fpoly::frobenius_orbit(g, p, d);
    let lift = |c: &FpPoly| -> Vec<Fe> { c.iter().map(|&v| Fe::from_fp(v)).collect::<Vec<_>>() };
    let mut cur: Vec<Fe> = lift(g);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_0000 + f.m as u64 * 131 + d as u64);
    while cur.len() > 2 {
        let delta = f.random(&mut rng);
        // c_j = Σ_{i ≡ j mod d} δ^{p^i}
        let mut coeffs = vec![Fe::ZERO; d];
        let mut pw = delta;
        for i in 0..f.m {
            coeffs[i % d] = f.add(&coeffs[i % d], &pw);
            pw = f.frob(&pw, 1);
        }
        // T = Σ c_j X_j reduced mod cur.
        let mut t: Vec<Fe> = Vec::new();
        for (j, xj) in xs.iter().enumerate() {
            let xj_red = super::poly::rem(f, &lift(xj), &cur);
            let term = super::poly::scale(f, &xj_red, &coeffs[j]);
            t = super::poly::add(f, &t, &term);
        }
        let mut best: Option<Vec<Fe>> = None;
        for c in 0..p {
            let shifted = super::poly::sub(f, &t, &vec![Fe::from_fp(c)]);
            let h = super::poly::gcd(f, &cur, &shifted);
            if h.len() > 1 && h.len() < cur.len() {
                let better = match &best {
                    None => true,
                    Some(b) => h.len() < b.len(),
                };
                if better {
                    best = Some(h);
                }
            }
        }
        if let Some(b) = best {
            cur = b;
        }
    }
    // cur = x + c0 (monic)
    f.neg(&cur[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn field_axioms_small() {
        let t = Tower::get(3);
        let f = t.field(4);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let a = f.random(&mut rng);
            let b = f.random(&mut rng);
            let c = f.random(&mut rng);
            assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
            if !a.is_zero() {
                assert_eq!(f.mul(&a, &f.inv(&a)), f.one());
            }
            assert_eq!(f.frob(&a, 4), a);
            assert_eq!(f.frob(&f.frob(&a, 1), -1), a);
            assert_eq!(f.frob(&a, 1), f.pow(&a, 3));
        }
    }

    #[test]
    fn embeddings_commute() {
        let t = Tower::get(2);
        let f12 = t.field(12);
        let f6 = t.field(6);
        let f4 = t.field(4);
        let f2 = t.field(2);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let a = f2.random(&mut rng);
            let via6 = f12.embed_from(6, &f6.embed_from(2, &a));
            let via4 = f12.embed_from(4, &f4.embed_from(2, &a));
            assert_eq!(via6, via4);
            assert_eq!(via6, f12.embed_from(2, &a));
            let b = f2.random(&mut rng);
            let e = |x: &Fe| f12.embed_from(2, x);
            assert_eq!(e(&f2.mul(&a, &b)), f12.mul(&e(&a), &e(&b)));
            assert_eq!(f12.restrict_to(2, &e(&a)), Some(a));
        }
        let g = f12.gen();
        assert!(f12.restrict_to(6, &g).is_none());
    }
}
