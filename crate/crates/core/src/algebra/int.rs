//! Machine-integer number theory: modular arithmetic for moduli below
//! `2^64`, primality, factorization and the Chinese remainder theorem.

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u128, b: u128) -> u128 {
    a / gcd(a, b) * b
}

/// `a·b mod m` for `m < 2^64`.
pub fn mulmod(a: u128, b: u128, m: u128) -> u128 {
    debug_assert!(m <= u64::MAX as u128 + 1);
    (a % m) * (b % m) % m
}

pub fn powmod(a: u128, mut e: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let mut r = 1u128;
    let mut b = a % m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn invmod(a: u128, m: u128) -> Option<u128> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u128)
}

/// Deterministic Miller–Rabin for `n < 2^64`.
pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u128) -> u128 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u128;
    loop {
        let f = |x: u128| (mulmod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u128, 2u128, 1u128);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization as sorted `(prime, exponent)` pairs (`n < 2^64`).
pub fn factorize(n: u128) -> Vec<(u128, u32)> {
    let mut primes = Vec::new();
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            primes.push(m);
            continue;
        }
        let mut small = None;
        for p in 2..1000u128 {
            if m % p == 0 {
                small = Some(p);
                break;
            }
        }
        let d = small.unwrap_or_else(|| pollard_rho(m));
        stack.push(d);
        stack.push(m / d);
    }
    primes.sort_unstable();
    let mut out: Vec<(u128, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// All positive divisors of `n`, sorted.
pub fn divisors_of(n: u128) -> Vec<u128> {
    let mut out = vec![1u128];
    for (p, e) in factorize(n) {
        let cur = out.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            out.extend(cur.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

/// Combines `x ≡ a1 (mod m1)` and `x ≡ a2 (mod m2)` for coprime moduli.
pub fn crt(a1: u128, m1: u128, a2: u128, m2: u128) -> Option<u128> {
    let inv = invmod(m1 % m2, m2)?;
    let diff = (a2 % m2 + m2 - a1 % m2) % m2;
    let k = mulmod(diff, inv, m2);
    Some(a1 % m1 + m1 * k)
}

pub fn ipow(b: u128, e: u32) -> Option<u128> {
    let mut r: u128 = 1;
    for _ in 0..e {
        r = r.checked_mul(b)?;
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn factorization_of_known_values() {
        assert_eq!(factorize(242), vec![(2, 1), (11, 2)]);
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(600851475143), vec![(71, 1), (839, 1), (1471, 1), (6857, 1)]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(561));
    }

    proptest! {
        #[test]
        fn factorization_multiplies_back(n in 1u64..u64::MAX / 4) {
            let f = factorize(n as u128);
            let prod: u128 = f.iter().map(|&(p, e)| p.pow(e)).product();
            prop_assert_eq!(prod, n as u128);
            for (p, _) in f {
                prop_assert!(is_prime(p));
            }
        }

        #[test]
        fn crt_agrees(a in 0u64..1000, b in 0u64..1000) {
            let x = crt(a as u128 % 7, 7, b as u128 % 11, 11).unwrap();
            prop_assert_eq!(x % 7, a as u128 % 7);
            prop_assert_eq!(x % 11, b as u128 % 11);
        }
    }
}
