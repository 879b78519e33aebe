//! Dense polynomials over a prime field F_p with `u32` coefficients.
//!
//! These are used while a field is being constructed (modulus search,
//! irreducibility tests, Frobenius orbits of the defining polynomial), before
//! any extension-field context exists.

/// Coefficients low-to-high, trimmed so the last entry is nonzero.
pub type FpPoly = Vec<u32>;

pub fn trim(a: &mut FpPoly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

pub fn pow_mod(mut a: u32, mut e: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = (a % p) as u64;
    let pm = p as u64;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % pm;
        }
        b = b * b % pm;
        e >>= 1;
    }
    a = r as u32;
    a
}

pub fn mul(a: &FpPoly, b: &FpPoly, p: u32) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            acc[i + j] += (x * y) as u64;
        }
    }
    let mut out: FpPoly = acc.into_iter().map(|v| (v % p as u64) as u32).collect();
    trim(&mut out);
    out
}

/// Remainder of `a` modulo `m` (any nonzero `m`).
pub fn rem(a: &FpPoly, m: &FpPoly, p: u32) -> FpPoly {
    let mut r = a.clone();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] * lead_inv % p;
        if c != 0 {
            let shift = top - dm;
            for (k, &mk) in m.iter().enumerate() {
                r[shift + k] = (r[shift + k] + p - (c * mk) % p) % p;
            }
        }
        r.pop();
        trim(&mut r);
    }
    r
}

pub fn sub(a: &FpPoly, b: &FpPoly, p: u32) -> FpPoly {
    let n = a.len().max(b.len());
    let mut out = vec![0u32; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + p - y) % p;
    }
    trim(&mut out);
    out
}

pub fn gcd(a: &FpPoly, b: &FpPoly, p: u32) -> FpPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(&l) = x.last() {
        let li = inv_mod(l, p);
        for c in x.iter_mut() {
            *c = *c * li % p;
        }
    }
    x
}

pub fn mulmod(a: &FpPoly, b: &FpPoly, m: &FpPoly, p: u32) -> FpPoly {
    rem(&mul(a, b, p), m, p)
}

/// `a^e mod m` for a machine-size exponent.
pub fn powmod(a: &FpPoly, mut e: u64, m: &FpPoly, p: u32) -> FpPoly {
    let mut result: FpPoly = vec![1];
    let mut base = rem(a, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(&result, &base, m, p);
        }
        base = mulmod(&base, &base, m, p);
        e >>= 1;
    }
    rem(&result, m, p)
}

/// Successive images `x^{p^j} mod m` for `j = 0..count`.
pub fn frobenius_orbit(m: &FpPoly, p: u32, count: usize) -> Vec<FpPoly> {
    let mut out = Vec::with_capacity(count);
    let mut cur: FpPoly = rem(&vec![0, 1], m, p);
    for _ in 0..count {
        out.push(cur.clone());
        cur = powmod(&cur, p as u64, m, p);
    }
    out
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a monic polynomial of degree `m ≥ 1`.
pub fn is_irreducible(f: &FpPoly, p: u32) -> bool {
    let m = f.len() - 1;
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let orbit = frobenius_orbit(f, p, m + 1);
    let x: FpPoly = vec![0, 1];
    if rem(&sub(&orbit[m], &x, p), f, p) != Vec::<u32>::new() {
        return false;
    }
    for l in prime_factors(m) {
        let g = gcd(f, &sub(&orbit[m / l], &x, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Deterministic choice of a monic irreducible polynomial of degree `m`:
/// binomials and trinomials `x^m + a·x^k + b` in increasing `k`, `a`, `b`,
/// then all monic polynomials in lexicographic counting order.
pub fn find_irreducible(p: u32, m: usize) -> FpPoly {
    if m == 1 {
        return vec![0, 1];
    }
    for k in 0..m {
        let a_range: Vec<u32> = if k == 0 { vec![0] } else { (1..p).collect() };
        for &a in &a_range {
            for b in 1..p {
                let mut f = vec![0u32; m + 1];
                f[m] = 1;
                f[0] = b;
                if k > 0 {
                    f[k] = a;
                }
                if is_irreducible(&f, p) {
                    return f;
                }
            }
        }
    }
    let mut low = vec![0u32; m];
    loop {
        let mut i = 0;
        while i < m {
            low[i] += 1;
            if low[i] < p {
                break;
            }
            low[i] = 0;
            i += 1;
        }
        assert!(i < m, "no irreducible polynomial found");
        let mut f = low.clone();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_irreducibles() {
        assert!(is_irreducible(&vec![1, 0, 1], 3));
        assert!(!is_irreducible(&vec![1, 0, 1], 5));
        assert!(is_irreducible(&vec![1, 1, 0, 1, 1, 0, 0, 0, 1], 2));
        assert!(is_irreducible(&vec![1, 1, 1], 2));
    }

    #[test]
    fn found_moduli_are_irreducible_by_exhaustion() {
        // For tiny degrees compare against a brute-force root/factor search.
        for &p in &[2u32, 3, 5] {
            for m in 1..=4usize {
                let f = find_irreducible(p, m);
                assert_eq!(f.len(), m + 1);
                // No factor of degree ≤ m/2 divides f.
                for d in 1..=m / 2 {
                    let total = (p as usize).pow(d as u32);
                    for idx in 0..total {
                        let mut g = vec![0u32; d + 1];
                        g[d] = 1;
                        let mut v = idx;
                        for c in g.iter_mut().take(d) {
                            *c = (v % p as usize) as u32;
                            v /= p as usize;
                        }
                        assert!(!rem(&f, &g, p).is_empty(), "p={p} m={m} factor {g:?}");
                    }
                }
            }
        }
    }
}
