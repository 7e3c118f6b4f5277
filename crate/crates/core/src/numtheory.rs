//! Integer helpers: primality, factoring, multiplicative orders, the small
//! Diophantine solvers used by the closed forms, class numbers and Legendre
//! symbols.

use num_integer::{Integer, Roots};

use crate::error::{Error, Result};

/// Upper bound on the loop length of the exhaustive Diophantine searches.
pub const SEARCH_LIMIT: u128 = 1 << 28;

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    result
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

/// Prime factorization as sorted (prime, exponent) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        while n % p == 0 {
            primes.push(p);
            n /= p;
        }
    }
    factor_into(n, &mut primes);
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// All positive divisors in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factorize(n) {
        let len = divs.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// If `n = t^k` for a prime `t` and `k >= 1`, returns `(t, k)`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    match factorize(n).as_slice() {
        [(t, k)] => Some((*t, *k)),
        _ => None,
    }
}

/// Exponent of the prime `t` in `n`; `n` must be nonzero.
pub fn valuation(mut n: u64, t: u64) -> u32 {
    let mut v = 0;
    while n % t == 0 {
        n /= t;
        v += 1;
    }
    v
}

/// Smallest `k >= 1` with `base^k = 1 (mod modulus)`.
pub fn mult_order(base: u64, modulus: u64) -> Result<u64> {
    if modulus == 0 {
        return Err(Error::InvalidParameter("modulus must be positive".into()));
    }
    if modulus == 1 {
        return Ok(1);
    }
    if base.gcd(&modulus) != 1 {
        return Err(Error::NotCoprime { base, modulus });
    }
    let mut order = euler_phi(modulus);
    for (p, _) in factorize(order) {
        while order % p == 0 && pow_mod(base, order / p, modulus) == 1 {
            order /= p;
        }
    }
    Ok(order)
}

/// Smallest primitive root modulo the prime `p`.
pub fn primitive_root(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Ok(1);
    }
    let factors = factorize(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&(f, _)| pow_mod(g, (p - 1) / f, p) != 1))
        .ok_or_else(|| Error::InvalidParameter(format!("no primitive root mod {p}")))
}

pub fn legendre(x: i64, l: u64) -> i8 {
    let r = x.rem_euclid(l as i64) as u64;
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (l - 1) / 2, l) == 1 {
        1
    } else {
        -1
    }
}

/// Least `j` with `p^j = -1 (mod n1)`, if any.
pub fn semiprimitive_j(p: u64, n1: u64) -> Option<u64> {
    if n1 < 3 || p.gcd(&n1) != 1 {
        return None;
    }
    let order = mult_order(p, n1).ok()?;
    let mut x = 1u64;
    for j in 1..=order {
        x = mul_mod(x, p % n1, n1);
        if x == n1 - 1 {
            return Some(j);
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RepKind {
    /// `4M = c^2 + 27 d^2`
    CubicForm,
    /// `M = u^2 + 4 v^2`
    QuarticForm,
    /// `4 p^h = a^2 + l b^2`
    NormForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DiophantineRep {
    pub kind: RepKind,
    pub first: i128,
    pub second: i128,
    pub note: &'static str,
}

fn search_bound(bound: u128) -> Result<()> {
    if bound > SEARCH_LIMIT {
        return Err(Error::SizeBudgetExceeded {
            what: "Diophantine search",
            needed: bound.to_string(),
            budget: SEARCH_LIMIT as u64,
        });
    }
    Ok(())
}

fn exact_sqrt(x: u128) -> Option<u128> {
    let s = x.sqrt();
    (s * s == x).then_some(s)
}

/// `(c, d)` with `4M = c^2 + 27 d^2`, `c = 1 (mod 3)`, `d >= 0`, and
/// `gcd(c, p) = 1` when `p = 1 (mod 3)`.
pub fn solve_c27d(m: u128, p: u64) -> Result<DiophantineRep> {
    let four_m = m
        .checked_mul(4)
        .ok_or_else(|| Error::InvalidParameter("M too large".into()))?;
    search_bound((four_m / 27).sqrt())?;
    let want_gcd = p % 3 == 1;
    let mut d: u128 = 0;
    while 27 * d * d <= four_m {
        if let Some(c) = exact_sqrt(four_m - 27 * d * d) {
            for c in [c as i128, -(c as i128)] {
                if c.rem_euclid(3) == 1 && (!want_gcd || c.unsigned_abs().gcd(&(p as u128)) == 1) {
                    let rep = DiophantineRep {
                        kind: RepKind::CubicForm,
                        first: c,
                        second: d as i128,
                        note: "d taken nonnegative",
                    };
                    debug_assert_eq!(c * c + 27 * rep.second * rep.second, four_m as i128);
                    return Ok(rep);
                }
            }
        }
        d += 1;
    }
    Err(Error::NoRepresentation(format!("4*{m} = c^2 + 27d^2")))
}

/// `(u, v)` with `M = u^2 + 4 v^2`, `u = 1 (mod 4)`, `v >= 0`, and
/// `gcd(u, p) = 1` when `p = 1 (mod 4)`.
pub fn solve_u4v(m: u128, p: u64) -> Result<DiophantineRep> {
    search_bound((m / 4).sqrt())?;
    let want_gcd = p % 4 == 1;
    let mut v: u128 = 0;
    while 4 * v * v <= m {
        if let Some(u) = exact_sqrt(m - 4 * v * v) {
            for u in [u as i128, -(u as i128)] {
                if u.rem_euclid(4) == 1 && (!want_gcd || u.unsigned_abs().gcd(&(p as u128)) == 1) {
                    return Ok(DiophantineRep {
                        kind: RepKind::QuarticForm,
                        first: u,
                        second: v as i128,
                        note: "v taken nonnegative",
                    });
                }
            }
        }
        v += 1;
    }
    Err(Error::NoRepresentation(format!("{m} = u^2 + 4v^2")))
}

fn check_discriminant(l: u64) -> Result<()> {
    if l <= 3 || l % 4 != 3 || !is_prime(l) {
        return Err(Error::BadDiscriminant(l));
    }
    Ok(())
}

/// Class number of the imaginary quadratic field of discriminant `-l`,
/// counted as the number of reduced forms `(a, b, c)`.
pub fn class_number(l: u64) -> Result<u64> {
    check_discriminant(l)?;
    let l = l as i128;
    let mut h = 0;
    let mut a: i128 = 1;
    while 3 * a * a <= l {
        for b in (1 - a)..=a {
            let num = b * b + l;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (b < 0 && a == c) {
                continue;
            }
            if a.gcd(&b).gcd(&c) == 1 {
                h += 1;
            }
        }
        a += 1;
    }
    Ok(h)
}

/// `(a, b)` with `a^2 + l b^2 = 4 p^h`, `a = -2 p^((l-1+2h)/4) (mod l)` and `b > 0`.
pub fn solve_alb(p: u64, l: u64, h: u64) -> Result<DiophantineRep> {
    check_discriminant(l)?;
    if (l - 1 + 2 * h) % 4 != 0 {
        return Err(Error::NoRepresentation(format!(
            "exponent (l-1+2h)/4 is not an integer for l={l}, h={h}"
        )));
    }
    let e = (l - 1 + 2 * h) / 4;
    let target = (l - 2 * pow_mod(p, e, l) % l) % l;
    let four_ph = (p as u128)
        .checked_pow(h as u32)
        .and_then(|x| x.checked_mul(4))
        .ok_or_else(|| Error::InvalidParameter("4p^h too large".into()))?;
    let l128 = l as u128;
    search_bound((four_ph / l128).sqrt())?;
    let mut b: u128 = 1;
    while l128 * b * b <= four_ph {
        if let Some(a) = exact_sqrt(four_ph - l128 * b * b) {
            for a in [a as i128, -(a as i128)] {
                if a.rem_euclid(l as i128) as u64 == target {
                    return Ok(DiophantineRep {
                        kind: RepKind::NormForm,
                        first: a,
                        second: b as i128,
                        note: "b taken positive",
                    });
                }
            }
        }
        b += 1;
    }
    Err(Error::NoRepresentation(format!(
        "a^2 + {l} b^2 = 4*{p}^{h} with the required residue"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(mult_order(4, 1).unwrap(), 1);
        assert_eq!(mult_order(4, 27).unwrap(), 9);
        assert_eq!(mult_order(3, 121).unwrap(), 5);
        assert_eq!(mult_order(2, 49).unwrap(), 21);
        assert!(matches!(mult_order(6, 9), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn cubic_and_quartic_forms() {
        let r = solve_c27d(7, 7).unwrap();
        assert_eq!((r.first, r.second), (1, 1));
        let r = solve_c27d(64, 2).unwrap();
        assert_eq!((r.first, r.second), (16, 0));
        let r = solve_c27d(343, 7).unwrap();
        assert_eq!((r.first, r.second), (-20, 6));
        let r = solve_u4v(81, 3).unwrap();
        assert_eq!((r.first, r.second), (9, 0));
        let r = solve_u4v(25, 5).unwrap();
        assert_eq!((r.first, r.second), (-3, 2));
        let r = solve_u4v(625, 5).unwrap();
        assert_eq!((r.first, r.second), (-7, 12));
        assert!(solve_u4v(3, 3).is_err());
    }

    #[test]
    fn class_numbers_and_norm_forms() {
        assert_eq!(class_number(7).unwrap(), 1);
        assert_eq!(class_number(11).unwrap(), 1);
        assert_eq!(class_number(23).unwrap(), 3);
        assert_eq!(class_number(47).unwrap(), 5);
        assert!(class_number(13).is_err());
        assert!(class_number(3).is_err());
        let r = solve_alb(2, 7, 1).unwrap();
        assert_eq!((r.first, r.second), (-1, 1));
        let r = solve_alb(3, 11, 1).unwrap();
        assert_eq!((r.first, r.second), (1, 1));
        let r = solve_alb(2, 23, 3).unwrap();
        assert_eq!((r.first, r.second), (-3, 1));
        assert!(matches!(solve_alb(2, 7, 2), Err(Error::NoRepresentation(_))));
    }

    #[test]
    fn legendre_and_semiprimitive() {
        assert_eq!(legendre(0, 7), 0);
        assert_eq!(legendre(2, 7), 1);
        assert_eq!(legendre(3, 7), -1);
        assert_eq!(legendre(-1, 7), -1);
        assert_eq!(semiprimitive_j(2, 3), Some(1));
        assert_eq!(semiprimitive_j(3, 4), Some(1));
        assert_eq!(semiprimitive_j(7, 12), None);
        assert_eq!(semiprimitive_j(2, 9), Some(3));
    }

    #[test]
    fn factoring() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(4095), vec![(3, 2), (5, 1), (7, 1), (13, 1)]);
        assert_eq!(factorize((1 << 42) - 1).iter().map(|&(p, e)| p.pow(e)).product::<u64>(), (1 << 42) - 1);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(euler_phi(121), 110);
        assert!(is_prime(2305843009213693951));
        assert!(!is_prime(3215031751));
        assert_eq!(primitive_root(7).unwrap(), 3);
        assert_eq!(prime_power(49), Some((7, 2)));
        assert_eq!(prime_power(12), None);
    }
}
