//! Small integer helpers: primes, modular arithmetic, polynomials over F_p.

use alloc::vec::Vec;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as (prime, exponent) pairs, primes increasing.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Product of the distinct primes dividing `n` (1 for n = 1).
pub fn radical(n: u64) -> u64 {
    factorize(n).iter().map(|&(p, _)| p).product()
}

/// If `n = p^k` with k ≥ 1 returns `(p, k)`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    let f = factorize(n);
    if f.len() == 1 {
        Some(f[0])
    } else {
        None
    }
}

pub fn modp(a: i64, m: u64) -> u64 {
    a.rem_euclid(m as i64) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut nt) = (0i64, 1i64);
    let (mut r, mut nr) = (m as i64, (a % m) as i64);
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(m as i64) as u64)
}

pub fn is_square_mod(a: u64, p: u64) -> bool {
    let a = a % p;
    (0..p).any(|x| x * x % p == a)
}

/// Least quadratic non-residue modulo an odd prime.
pub fn least_nonresidue(p: u64) -> u64 {
    (2..p).find(|&a| !is_square_mod(a, p)).unwrap_or(0)
}

/// Monic polynomial over F_p, coefficients from the constant term up
/// (the leading 1 is implicit): `[b0, b1]` means x² + b1 x + b0.
pub fn has_root(coeffs: &[u64], p: u64) -> bool {
    (0..p).any(|x| eval_monic(coeffs, x, p) == 0)
}

pub fn eval_monic(coeffs: &[u64], x: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    for &c in coeffs.iter().rev() {
        acc = (acc * x + c) % p;
    }
    acc
}

/// Irreducibility of a monic polynomial of degree 2 or 3 (no roots).
pub fn is_irreducible_low(coeffs: &[u64], p: u64) -> bool {
    assert!(coeffs.len() == 2 || coeffs.len() == 3, "degree 2 or 3 only");
    !has_root(coeffs, p)
}

/// All monic irreducible polynomials of degree 2 or 3 over F_p, listed in
/// lexicographic order of the coefficient vector read from the top.
pub fn irreducible_monic(degree: usize, p: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let total = p.pow(degree as u32);
    for code in 0..total {
        // constant term varies fastest, top coefficient slowest
        let coeffs: Vec<u64> = (0..degree).map(|i| code / p.pow(i as u32) % p).collect();
        if is_irreducible_low(&coeffs, p) {
            out.push(coeffs);
        }
    }
    out
}

/// Multiplicative order of `a` modulo `m` (requires gcd(a, m) = 1).
pub fn mult_order(a: u64, m: u64) -> u64 {
    let mut x = a % m;
    let mut k = 1;
    while x != 1 % m {
        x = x * a % m;
        k += 1;
    }
    k
}

/// x with x ≡ r_i (mod m_i) for pairwise coprime moduli.
pub fn crt(residues: &[(u64, u64)]) -> u64 {
    let mut x = 0u64;
    let mut m = 1u64;
    for &(r, mi) in residues {
        // solve x + m*t ≡ r (mod mi)
        let inv = inv_mod(m % mi, mi).expect("coprime moduli");
        let t = ((r % mi + mi - x % mi) % mi) * inv % mi;
        x += m * t;
        m *= mi;
        x %= m;
    }
    x
}
