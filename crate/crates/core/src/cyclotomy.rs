//! Cyclotomic classes `C_i = alpha^i <alpha^N>`, cyclotomic numbers, exact
//! Gaussian periods and floating-point Gauss sums.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::ff::{FieldElement, FieldTower};
use crate::numtheory::{is_prime, mul_mod, pow_mod, primitive_root};

/// An element `sum_j c_j zeta_p^j` of `Z[zeta_p]`.
///
/// Stored sparsely in canonical form: no zero coefficients and no term at
/// exponent `p - 1`, which is eliminated with `1 + zeta + ... + zeta^{p-1} = 0`.
/// In this basis the representation is unique.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootOfUnitySum {
    p: u64,
    terms: Vec<(u64, i64)>,
}

impl RootOfUnitySum {
    pub fn zero(p: u64) -> Self {
        Self { p, terms: Vec::new() }
    }

    pub fn integer(p: u64, v: i64) -> Self {
        Self::from_terms(p, [(0, v)])
    }

    /// From a dense raw count vector of length `p`.
    pub fn from_counts(p: u64, counts: &[i64]) -> Self {
        assert_eq!(counts.len() as u64, p, "count vector must have length p");
        Self::from_terms(p, counts.iter().enumerate().map(|(j, &c)| (j as u64, c)))
    }

    /// From raw `(exponent, count)` pairs; exponents are reduced mod `p`.
    pub fn from_terms(p: u64, raw: impl IntoIterator<Item = (u64, i64)>) -> Self {
        let mut terms: Vec<(u64, i64)> = raw.into_iter().map(|(e, c)| (e % p, c)).filter(|t| t.1 != 0).collect();
        terms.sort_unstable();
        Self::normalize(p, terms)
    }

    fn normalize(p: u64, sorted: Vec<(u64, i64)>) -> Self {
        let mut merged: Vec<(u64, i64)> = Vec::with_capacity(sorted.len());
        for (e, c) in sorted {
            match merged.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|t| t.1 != 0);
        match merged.last() {
            Some(&(e, top)) if e == p - 1 => {
                merged.pop();
                let mut dense = vec![0i64; (p - 1) as usize];
                for (e, c) in merged {
                    dense[e as usize] = c;
                }
                let terms = dense
                    .into_iter()
                    .enumerate()
                    .map(|(e, c)| (e as u64, c - top))
                    .filter(|t| t.1 != 0)
                    .collect();
                Self { p, terms }
            }
            _ => Self { p, terms: merged },
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Nonzero canonical coefficients in increasing exponent order.
    pub fn terms(&self) -> &[(u64, i64)] {
        &self.terms
    }

    /// Dense canonical coefficients; entry `p - 1` is always 0.
    pub fn counts(&self) -> Vec<i64> {
        let mut dense = vec![0i64; self.p as usize];
        for &(e, c) in &self.terms {
            dense[e as usize] = c;
        }
        dense
    }

    pub fn as_integer(&self) -> Option<i64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(0, c)] => Some(*c),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        Self::from_terms(self.p, self.terms.iter().chain(other.terms.iter()).copied())
    }

    pub fn neg(&self) -> Self {
        Self {
            p: self.p,
            terms: self.terms.iter().map(|&(e, c)| (e, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let mut acc: HashMap<u64, i64> = HashMap::new();
        for &(e1, c1) in &self.terms {
            for &(e2, c2) in &other.terms {
                *acc.entry((e1 + e2) % self.p).or_insert(0) += c1 * c2;
            }
        }
        Self::from_terms(self.p, acc)
    }

    /// The automorphism `zeta -> zeta^j`, for `j` prime to `p`.
    pub fn galois(&self, j: u64) -> Self {
        Self::from_terms(self.p, self.terms.iter().map(|&(e, c)| (mul_mod(e, j, self.p), c)))
    }

    pub fn to_complex(&self) -> Complex64 {
        self.terms
            .iter()
            .map(|&(e, c)| Complex64::from_polar(c as f64, TAU * e as f64 / self.p as f64))
            .sum()
    }

    /// Image under the ring map `zeta -> omega` into `Z / modulus`, where
    /// `omega_powers[j] = omega^j`.
    pub fn eval_mod(&self, omega_powers: &[u64], modulus: u64) -> u64 {
        self.terms.iter().fold(0u64, |acc, &(e, c)| {
            let c = c.rem_euclid(modulus as i64) as u64;
            (acc + mul_mod(c, omega_powers[e as usize], modulus)) % modulus
        })
    }
}

/// Written in `z = zeta_p`, e.g. `-1 - 2z^3 + z^4`.
impl fmt::Display for RootOfUnitySum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, &(e, c)) in self.terms.iter().enumerate() {
            let mag = c.unsigned_abs();
            match (i, c < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            match e {
                0 => write!(f, "{mag}")?,
                _ if mag == 1 => {}
                _ => write!(f, "{mag}")?,
            }
            match e {
                0 => {}
                1 => f.write_str("z")?,
                _ => write!(f, "z^{e}")?,
            }
        }
        Ok(())
    }
}

fn check_divisor(tower: &FieldTower, n_classes: u64) -> Result<u64> {
    if n_classes == 0 || (tower.r() - 1) % n_classes != 0 {
        return Err(Error::NotADivisor {
            divisor: n_classes.to_string(),
            value: (tower.r() - 1).to_string(),
        });
    }
    Ok((tower.r() - 1) / n_classes)
}

fn require_tables(tower: &FieldTower) -> Result<()> {
    if !tower.has_tables() {
        return Err(Error::SizeBudgetExceeded {
            what: "enumeration of GF(r)",
            needed: tower.r().to_string(),
            budget: tower.table_budget(),
        });
    }
    Ok(())
}

pub fn cyclotomic_class(tower: &FieldTower, n_classes: u64, i: u64) -> Result<impl Iterator<Item = FieldElement> + '_> {
    let n = check_divisor(tower, n_classes)?;
    if i >= n_classes {
        return Err(Error::InvalidParameter(format!("class index {i} not below {n_classes}")));
    }
    Ok((0..n).map(move |j| tower.alpha_pow((i + n_classes * j) as i128)))
}

/// Index of the class of order `n_classes` containing `x`.
pub fn class_of(tower: &FieldTower, n_classes: u64, x: FieldElement) -> Result<u64> {
    check_divisor(tower, n_classes)?;
    Ok(tower.discrete_log(x)? % n_classes)
}

/// The cyclotomic numbers `(i, j) = |(C_i + 1) ∩ C_j|`, stored sparsely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicTable {
    r: u64,
    order: u64,
    entries: Vec<((u64, u64), u64)>,
}

impl CyclotomicTable {
    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn get(&self, i: u64, j: u64) -> u64 {
        self.entries
            .binary_search_by_key(&(i, j), |e| e.0)
            .map(|k| self.entries[k].1)
            .unwrap_or(0)
    }

    /// Nonzero entries in row-major order.
    pub fn nonzero_entries(&self) -> &[((u64, u64), u64)] {
        &self.entries
    }

    pub fn to_dense(&self) -> Vec<Vec<u64>> {
        let mut dense = vec![vec![0; self.order as usize]; self.order as usize];
        for &((i, j), c) in &self.entries {
            dense[i as usize][j as usize] = c;
        }
        dense
    }

    /// `sum_u (u, u + k)` for every `k`.
    pub fn diagonal_sums(&self) -> Vec<u64> {
        let mut sums = vec![0u64; self.order as usize];
        for &((i, j), c) in &self.entries {
            sums[((j + self.order - i) % self.order) as usize] += c;
        }
        sums
    }

    /// The diagonal sums are `n - 1` for `k = 0` and `n` otherwise.
    pub fn row_sums_hold(&self) -> bool {
        let n = (self.r - 1) / self.order;
        self.diagonal_sums()
            .iter()
            .enumerate()
            .all(|(k, &s)| s == if k == 0 { n - 1 } else { n })
    }
}

pub fn cyclotomic_numbers(tower: &FieldTower, n_classes: u64) -> Result<CyclotomicTable> {
    check_divisor(tower, n_classes)?;
    require_tables(tower)?;
    let mut acc: HashMap<(u64, u64), u64> = HashMap::new();
    for k in 0..tower.r() - 1 {
        let x = tower.alpha_pow(k as i128);
        let y = tower.add_one(x);
        if y.is_zero() {
            continue;
        }
        let j = tower.discrete_log(y)? % n_classes;
        *acc.entry((k % n_classes, j)).or_insert(0) += 1;
    }
    let mut entries: Vec<_> = acc.into_iter().collect();
    entries.sort_unstable();
    Ok(CyclotomicTable {
        r: tower.r(),
        order: n_classes,
        entries,
    })
}

/// The Gaussian periods `eta_i = sum_{x in C_i} zeta_p^{Tr(x)}` of one order.
#[derive(Debug, Clone)]
pub struct GaussianPeriodSet {
    r: u64,
    order: u64,
    p: u64,
    values: Vec<RootOfUnitySum>,
    integer_values: Option<Vec<i64>>,
    minus_one_class: u64,
}

impl GaussianPeriodSet {
    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Length of each class, `(r-1)/N`.
    pub fn class_size(&self) -> u64 {
        (self.r - 1) / self.order
    }

    pub fn values(&self) -> &[RootOfUnitySum] {
        &self.values
    }

    pub fn integer_values(&self) -> Option<&[i64]> {
        self.integer_values.as_deref()
    }

    /// The class `k` with `-1 in C_k`.
    pub fn minus_one_class(&self) -> u64 {
        self.minus_one_class
    }

    pub fn sum_is_minus_one(&self) -> bool {
        let total = RootOfUnitySum::from_terms(self.p, self.values.iter().flat_map(|v| v.terms().iter().copied()));
        total.as_integer() == Some(-1)
    }

    fn correlation_target(&self, k: u64) -> i128 {
        let theta = (k == self.minus_one_class) as i128;
        self.r as i128 * theta - self.class_size() as i128
    }

    /// Checks `sum_i eta_i eta_{i+k} = r theta_k - n` for every `k`.
    ///
    /// Non-integer periods are first shown to satisfy
    /// `sigma_g(eta_c) = eta_{c + log g}` for a generator `g` of GF(p)*,
    /// which makes every correlation sum a rational integer. All sums are
    /// then computed at once modulo a prime `P = 1 (mod p)` larger than twice
    /// their possible size, through a ring map `Z[zeta_p] -> Z/P` and a
    /// number-theoretic transform.
    pub fn correlations_hold(&self, tower: &FieldTower) -> bool {
        let n_cls = self.order as usize;
        if self.integer_values.is_none() {
            let g = primitive_root(self.p).expect("p is prime");
            let shift = match tower.discrete_log(tower.constant(g)) {
                Ok(l) => (l % self.order) as usize,
                Err(_) => return false,
            };
            let galois_ok = (0..n_cls).all(|c| self.values[c].galois(g) == self.values[(c + shift) % n_cls]);
            if !galois_ok {
                return false;
            }
        }
        let prime = ntt_prime(self.p);
        let modulus = prime.modulus;
        let mut powers = Vec::with_capacity(self.p as usize);
        let mut w = 1u64;
        for _ in 0..self.p {
            powers.push(w);
            w = mul_mod(w, prime.zeta_p, modulus);
        }
        let images: Vec<u64> = self.values.iter().map(|v| v.eval_mod(&powers, modulus)).collect();
        let sums = cyclic_autocorrelation(&images, &prime);
        sums.iter()
            .enumerate()
            .all(|(k, &s)| s == self.correlation_target(k as u64).rem_euclid(modulus as i128) as u64)
    }
}

/// Largest transform length supported by `ntt_prime`, as a power of two.
pub const NTT_TWO_ADICITY: u32 = 26;

/// A prime `P = 1 (mod p 2^NTT_TWO_ADICITY)` below `2^61` with roots of
/// unity of order `p` and `2^NTT_TWO_ADICITY`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NttPrime {
    pub modulus: u64,
    pub zeta_p: u64,
    pub root_of_two_power: u64,
}

pub fn ntt_prime(p: u64) -> NttPrime {
    let step = (p as u128) << NTT_TWO_ADICITY;
    assert!(step < 1 << 60, "p too large for the transform prime");
    let step = step as u64;
    let mut k = ((1u64 << 61) - 1) / step;
    let modulus = loop {
        let cand = k * step + 1;
        if is_prime(cand) {
            break cand;
        }
        k -= 1;
    };
    let zeta_p = (2..)
        .map(|g| pow_mod(g, (modulus - 1) / p, modulus))
        .find(|&w| w != 1)
        .unwrap();
    let root_of_two_power = (2..)
        .map(|g| pow_mod(g, (modulus - 1) >> NTT_TWO_ADICITY, modulus))
        .find(|&w| pow_mod(w, 1 << (NTT_TWO_ADICITY - 1), modulus) != 1)
        .unwrap();
    NttPrime {
        modulus,
        zeta_p,
        root_of_two_power,
    }
}

fn ntt(a: &mut [u64], invert: bool, prime: &NttPrime) {
    let n = a.len();
    let modulus = prime.modulus;
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w_len = pow_mod(prime.root_of_two_power, (1u64 << NTT_TWO_ADICITY) / len as u64, modulus);
        if invert {
            w_len = pow_mod(w_len, modulus - 2, modulus);
        }
        for start in (0..n).step_by(len) {
            let mut w = 1u64;
            for i in 0..len / 2 {
                let u = a[start + i];
                let v = mul_mod(a[start + i + len / 2], w, modulus);
                a[start + i] = (u + v) % modulus;
                a[start + i + len / 2] = (u + modulus - v) % modulus;
                w = mul_mod(w, w_len, modulus);
            }
        }
        len <<= 1;
    }
    if invert {
        let n_inv = pow_mod(n as u64, modulus - 2, modulus);
        for x in a.iter_mut() {
            *x = mul_mod(*x, n_inv, modulus);
        }
    }
}

/// `s_k = sum_i a_i a_{(i+k) mod e}` modulo the transform prime.
fn cyclic_autocorrelation(a: &[u64], prime: &NttPrime) -> Vec<u64> {
    let e = a.len();
    let modulus = prime.modulus;
    if e <= 64 {
        return (0..e)
            .map(|k| (0..e).fold(0u64, |acc, i| (acc + mul_mod(a[i], a[(i + k) % e], modulus)) % modulus))
            .collect();
    }
    let len = (2 * e).next_power_of_two();
    assert!(len <= 1 << NTT_TWO_ADICITY, "transform length exceeds the prime's two-adicity");
    let mut x = vec![0u64; len];
    let mut y = vec![0u64; len];
    x[..e].copy_from_slice(a);
    for (t, v) in a.iter().rev().enumerate() {
        y[t] = *v;
    }
    ntt(&mut x, false, prime);
    ntt(&mut y, false, prime);
    for (u, v) in x.iter_mut().zip(&y) {
        *u = mul_mod(*u, *v, modulus);
    }
    ntt(&mut x, true, prime);
    // x[j] = sum_i a_i a_{e-1-j+i}, the linear correlation at lag e-1-j.
    (0..e)
        .map(|k| {
            let wrapped = if k == 0 { 0 } else { x[2 * e - 1 - k] };
            (x[e - 1 - k] + wrapped) % modulus
        })
        .collect()
}

pub fn gaussian_periods_exact(tower: &FieldTower, n_classes: u64) -> Result<GaussianPeriodSet> {
    let n = check_divisor(tower, n_classes)?;
    require_tables(tower)?;
    let p = tower.p();
    let mut buckets: Vec<Vec<u64>> = vec![Vec::with_capacity(n as usize); n_classes as usize];
    for k in 0..tower.r() - 1 {
        let x = tower.alpha_pow(k as i128);
        buckets[(k % n_classes) as usize].push(tower.absolute_trace(x));
    }
    let values: Vec<RootOfUnitySum> = buckets
        .into_iter()
        .map(|mut traces| {
            traces.sort_unstable();
            let mut terms: Vec<(u64, i64)> = Vec::new();
            for t in traces {
                match terms.last_mut() {
                    Some(last) if last.0 == t => last.1 += 1,
                    _ => terms.push((t, 1)),
                }
            }
            RootOfUnitySum::normalize(p, terms)
        })
        .collect();
    let integer_values = values.iter().map(|v| v.as_integer()).collect::<Option<Vec<_>>>();
    let minus_one_class = tower.discrete_log(tower.neg(tower.one()))? % n_classes;
    let set = GaussianPeriodSet {
        r: tower.r(),
        order: n_classes,
        p,
        values,
        integer_values,
        minus_one_class,
    };
    assert!(set.sum_is_minus_one(), "periods must sum to -1");
    Ok(set)
}

fn zeta(k: u64, j: u64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * ((j % k) as f64) / k as f64)
}

/// `G(psi_j) = sum_{l} psi_j(alpha^l) chi(alpha^l)` with `psi_j(alpha^l) = zeta_k^{jl}`,
/// summed directly over GF(r)*.
pub fn gauss_sum_numeric(tower: &FieldTower, k: u64, j: u64) -> Result<Complex64> {
    check_divisor(tower, k)?;
    require_tables(tower)?;
    if j >= k {
        return Err(Error::InvalidParameter(format!("character index {j} not below {k}")));
    }
    let p = tower.p();
    let mut sum = Complex64::new(0.0, 0.0);
    for l in 0..tower.r() - 1 {
        let t = tower.absolute_trace(tower.alpha_pow(l as i128));
        let phase = (j * (l % k)) % k;
        sum += Complex64::from_polar(1.0, TAU * (phase as f64 / k as f64 + t as f64 / p as f64));
    }
    Ok(sum)
}

/// Per-class sums of the additive character, in floating point.
pub fn class_character_sums(tower: &FieldTower, k: u64) -> Result<Vec<Complex64>> {
    check_divisor(tower, k)?;
    require_tables(tower)?;
    let p = tower.p();
    let chi: Vec<Complex64> = (0..p).map(|t| zeta(p, t)).collect();
    let mut sums = vec![Complex64::new(0.0, 0.0); k as usize];
    for l in 0..tower.r() - 1 {
        let t = tower.absolute_trace(tower.alpha_pow(l as i128));
        sums[(l % k) as usize] += chi[t as usize];
    }
    Ok(sums)
}

/// `G(psi_j)` for every `j < k` from the class sums by a discrete Fourier transform.
pub fn gauss_sums_numeric(tower: &FieldTower, k: u64) -> Result<Vec<Complex64>> {
    let mut buf = class_character_sums(tower, k)?;
    FftPlanner::new().plan_fft_inverse(k as usize).process(&mut buf);
    Ok(buf)
}

/// `eta_i = (1/k) sum_j zeta_k^{-ij} G(psi_j)`.
pub fn periods_from_gauss_sums(gauss: &[Complex64]) -> Vec<Complex64> {
    let k = gauss.len();
    let mut buf = gauss.to_vec();
    FftPlanner::new().plan_fft_forward(k).process(&mut buf);
    buf.iter().map(|z| z / k as f64).collect()
}

/// `sum_{c in GF(r)} zeta_p^{Tr(a2 c^2 + a1 c + a0)}` by direct summation.
pub fn quadratic_char_sum(tower: &FieldTower, a2: FieldElement, a1: FieldElement, a0: FieldElement) -> Result<RootOfUnitySum> {
    if tower.p() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    if a2.is_zero() {
        return Err(Error::InvalidParameter("leading coefficient must be nonzero".into()));
    }
    let mut hist: HashMap<u64, i64> = HashMap::new();
    for c in tower.elements() {
        let v = tower.add(tower.add(tower.mul(a2, tower.mul(c, c)), tower.mul(a1, c)), a0);
        *hist.entry(tower.absolute_trace(v)).or_insert(0) += 1;
    }
    Ok(RootOfUnitySum::from_terms(tower.p(), hist))
}

/// Checks that `{xy : y in GF(q)*, x in C_i^(e1)}` is `mult` copies of
/// `C_i^(g)` for every `i`, with `g = gcd((r-1)/(q-1), e1)` and
/// `mult = (q-1) g / e1`.
///
/// The multiplicity of `z` in the product multiset is the number of
/// `y in GF(q)*` with `log y = log z - i (mod e1)`, so it is enough to count
/// the subfield logarithms by residue. GF(q)* is found as the nonzero fixed
/// points of `x -> x^q`.
pub fn subfield_products_hold(tower: &FieldTower, e1: u64) -> Result<bool> {
    check_divisor(tower, e1)?;
    require_tables(tower)?;
    let q = tower.q();
    let g = tower.subfield_embedding().gcd(&e1);
    let mult = (q - 1) * g / e1;
    let mut hist = vec![0u64; e1 as usize];
    let mut found = 0;
    for x in tower.elements().skip(1) {
        if tower.pow(x, q) == x {
            hist[(tower.discrete_log(x)? % e1) as usize] += 1;
            found += 1;
        }
    }
    if found != q - 1 {
        return Ok(false);
    }
    Ok(hist
        .iter()
        .enumerate()
        .all(|(c, &h)| h == if c as u64 % g == 0 { mult } else { 0 }))
}
