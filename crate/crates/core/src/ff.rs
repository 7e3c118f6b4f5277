//! The field tower GF(p) < GF(q) < GF(r), with q = p^s and r = q^m.
//!
//! GF(r) is built in a polynomial basis of degree s*m over GF(p). An element
//! is packed into a `u64` as its base-p coordinate vector, so index 0 is zero,
//! index 1 is one and the indices `0..p` are the prime field. GF(q) is not
//! built separately: it is the set of elements fixed by `x -> x^q`.

use std::collections::HashMap;
use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numtheory::{factorize, is_prime, mul_mod, pow_mod};

pub const DEFAULT_TABLE_BUDGET: u64 = 1 << 24;

/// Largest field order the packed representation accepts.
pub const MAX_FIELD_ORDER: u64 = 1 << 48;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TowerConfig {
    /// Log, antilog and trace tables are built when `r` is at most this.
    pub table_budget: u64,
}

impl Default for TowerConfig {
    fn default() -> Self {
        Self {
            table_budget: DEFAULT_TABLE_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(u64);

impl FieldElement {
    pub fn index(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TraceLevel {
    RToQ,
    QToP,
    RToP,
}

#[derive(Debug, Clone)]
struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
    trace_rp: Vec<u32>,
    trace_rq: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct FieldTower {
    p: u64,
    s: u32,
    m: u32,
    degree: usize,
    q: u64,
    r: u64,
    pow_p: Vec<u64>,
    /// Monic modulus, lowest coefficient first.
    modulus: Vec<u64>,
    /// Packed modulus without its leading term, used for `p = 2`.
    modulus_mask: u64,
    alpha: FieldElement,
    alpha_digits: Vec<u64>,
    tables: Option<Tables>,
    table_budget: u64,
}

fn checked_order(p: u64, d: u32) -> Result<u64> {
    p.checked_pow(d)
        .filter(|&r| r <= MAX_FIELD_ORDER)
        .ok_or(Error::SizeBudgetExceeded {
            what: "field order",
            needed: format!("{p}^{d}"),
            budget: MAX_FIELD_ORDER,
        })
}

impl FieldTower {
    pub fn build(p: u64, s: u32, m: u32) -> Result<Self> {
        Self::build_with(p, s, m, &TowerConfig::default())
    }

    pub fn build_with(p: u64, s: u32, m: u32, config: &TowerConfig) -> Result<Self> {
        Self::validate(p, s, m)?;
        let modulus = first_irreducible(p, (s * m) as usize);
        Self::assemble(p, s, m, modulus, config)
    }

    /// Builds the tower on a caller-chosen monic modulus, lowest coefficient first.
    pub fn with_modulus(p: u64, s: u32, m: u32, modulus: Vec<u64>, config: &TowerConfig) -> Result<Self> {
        Self::validate(p, s, m)?;
        let d = (s * m) as usize;
        if modulus.len() != d + 1 || modulus[d] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidParameter("modulus must be monic of degree s*m with coefficients below p".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidParameter("modulus is reducible".into()));
        }
        Self::assemble(p, s, m, modulus, config)
    }

    fn validate(p: u64, s: u32, m: u32) -> Result<()> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if s == 0 || m == 0 {
            return Err(Error::InvalidParameter("s and m must be positive".into()));
        }
        checked_order(p, s * m).map(|_| ())
    }

    fn assemble(p: u64, s: u32, m: u32, modulus: Vec<u64>, config: &TowerConfig) -> Result<Self> {
        let degree = (s * m) as usize;
        let r = checked_order(p, s * m)?;
        let q = p.pow(s);
        let pow_p: Vec<u64> = (0..=degree as u32).map(|i| p.pow(i)).collect();
        let modulus_mask = if p == 2 {
            modulus[..degree].iter().enumerate().fold(0u64, |acc, (i, &c)| acc | (c << i))
        } else {
            0
        };
        let mut tower = FieldTower {
            p,
            s,
            m,
            degree,
            q,
            r,
            pow_p,
            modulus,
            modulus_mask,
            alpha: FieldElement(1),
            alpha_digits: vec![1],
            tables: None,
            table_budget: config.table_budget,
        };
        let alpha = tower.find_primitive();
        tower.alpha = alpha;
        tower.alpha_digits = tower.coeffs(alpha);
        if r <= config.table_budget {
            tower.tables = Some(tower.build_tables());
        }
        Ok(tower)
    }

    fn find_primitive(&self) -> FieldElement {
        if self.r == 2 {
            return FieldElement(1);
        }
        let factors = factorize(self.r - 1);
        (2..self.r)
            .map(FieldElement)
            .find(|&x| {
                factors
                    .iter()
                    .all(|&(l, _)| self.pow_slow(x, (self.r - 1) / l) != self.one())
            })
            .expect("a finite field has a primitive element")
    }

    fn build_tables(&self) -> Tables {
        let r = self.r as usize;
        let mut exp = Vec::with_capacity(r - 1);
        let mut log = vec![0u32; r];
        let mut x = self.one();
        for k in 0..r - 1 {
            exp.push(x.0 as u32);
            log[x.0 as usize] = k as u32;
            x = self.mul_by_alpha(x);
        }
        debug_assert_eq!(x, self.one());

        let basis_rp: Vec<u64> = (0..self.degree)
            .map(|j| self.trace_by_definition(FieldElement(self.pow_p[j]), TraceLevel::RToP).unwrap().0)
            .collect();
        let basis_rq: Vec<FieldElement> = (0..self.degree)
            .map(|j| self.trace_by_definition(FieldElement(self.pow_p[j]), TraceLevel::RToQ).unwrap())
            .collect();
        let mut trace_rp = vec![0u32; r];
        let mut trace_rq = vec![0u32; r];
        for idx in 1..r {
            let j = self.lowest_nonzero_digit(idx as u64);
            let prev = idx - self.pow_p[j] as usize;
            trace_rp[idx] = ((trace_rp[prev] as u64 + basis_rp[j]) % self.p) as u32;
            trace_rq[idx] = self.add(FieldElement(trace_rq[prev] as u64), basis_rq[j]).0 as u32;
        }
        Tables {
            exp,
            log,
            trace_rp,
            trace_rq,
        }
    }

    fn lowest_nonzero_digit(&self, idx: u64) -> usize {
        if self.p == 2 {
            return idx.trailing_zeros() as usize;
        }
        let mut j = 0;
        let mut x = idx;
        while x % self.p == 0 {
            x /= self.p;
            j += 1;
        }
        j
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Degree of GF(r) over GF(p).
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    /// Monic modulus of GF(r) over GF(p), lowest coefficient first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn alpha(&self) -> FieldElement {
        self.alpha
    }

    /// `(r-1)/(q-1)`: GF(q)* is generated by `alpha` to this power.
    pub fn subfield_embedding(&self) -> u64 {
        (self.r - 1) / (self.q - 1)
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn table_budget(&self) -> u64 {
        self.table_budget
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    pub fn element(&self, index: u64) -> Result<FieldElement> {
        if index >= self.r {
            return Err(Error::InvalidParameter(format!("index {index} outside GF({})", self.r)));
        }
        Ok(FieldElement(index))
    }

    /// The prime-field constant `c mod p`.
    pub fn constant(&self, c: u64) -> FieldElement {
        FieldElement(c % self.p)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() > self.degree || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidParameter("bad coordinate vector".into()));
        }
        Ok(FieldElement(self.encode(coeffs)))
    }

    pub fn coeffs(&self, x: FieldElement) -> Vec<u64> {
        let mut out = vec![0; self.degree];
        self.decode(x.0, &mut out);
        out
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.r).map(FieldElement)
    }

    /// Elements of the subfield GF(q), zero first, then `g^0, g^1, ...`
    /// for `g = alpha^((r-1)/(q-1))`.
    pub fn subfield_elements(&self) -> Vec<FieldElement> {
        let g = self.pow(self.alpha, self.subfield_embedding());
        let mut out = Vec::with_capacity(self.q as usize);
        out.push(self.zero());
        let mut y = self.one();
        for _ in 0..self.q - 1 {
            out.push(y);
            y = self.mul(y, g);
        }
        out
    }

    fn decode(&self, mut x: u64, out: &mut [u64]) {
        for d in out.iter_mut() {
            *d = x % self.p;
            x /= self.p;
        }
    }

    fn encode(&self, digits: &[u64]) -> u64 {
        digits.iter().rev().fold(0u64, |acc, &d| acc * self.p + d)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u64;
        for k in 0..self.degree {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * self.pow_p[k];
            x /= self.p;
            y /= self.p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.scale(self.p - 1, a)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    /// Adds one, touching only the constant coordinate.
    pub fn add_one(&self, a: FieldElement) -> FieldElement {
        if a.0 % self.p == self.p - 1 {
            FieldElement(a.0 + 1 - self.p)
        } else {
            FieldElement(a.0 + 1)
        }
    }

    /// Multiplication by the prime-field constant `c`.
    pub fn scale(&self, c: u64, a: FieldElement) -> FieldElement {
        let c = c % self.p;
        if self.p == 2 {
            return if c == 0 { FieldElement(0) } else { a };
        }
        let mut x = a.0;
        let mut out = 0u64;
        for k in 0..self.degree {
            out += mul_mod(x % self.p, c, self.p) * self.pow_p[k];
            x /= self.p;
        }
        FieldElement(out)
    }

    fn mul_by_x(&self, a: FieldElement) -> FieldElement {
        if self.p == 2 {
            let shifted = a.0 << 1;
            return if shifted >> self.degree & 1 == 1 {
                FieldElement((shifted ^ (1 << self.degree)) ^ self.modulus_mask)
            } else {
                FieldElement(shifted)
            };
        }
        let top_weight = self.pow_p[self.degree - 1];
        let top = a.0 / top_weight;
        let shifted = FieldElement((a.0 % top_weight) * self.p);
        if top == 0 {
            return shifted;
        }
        let mut low = 0u64;
        for k in 0..self.degree {
            low += mul_mod(self.modulus[k], self.p - top, self.p) * self.pow_p[k];
        }
        self.add(shifted, FieldElement(low))
    }

    fn mul_by_alpha(&self, a: FieldElement) -> FieldElement {
        let mut acc = FieldElement(0);
        let mut cur = a;
        for (i, &c) in self.alpha_digits.iter().enumerate() {
            if c != 0 {
                acc = self.add(acc, self.scale(c, cur));
            }
            if i + 1 < self.alpha_digits.len() {
                cur = self.mul_by_x(cur);
            }
        }
        acc
    }

    fn mul_slow(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            let mut acc = 0u64;
            let mut cur = a;
            let mut bits = b.0;
            while bits != 0 {
                if bits & 1 == 1 {
                    acc ^= cur.0;
                }
                bits >>= 1;
                if bits != 0 {
                    cur = self.mul_by_x(cur);
                }
            }
            return FieldElement(acc);
        }
        let d = self.degree;
        let x = self.coeffs(a);
        let y = self.coeffs(b);
        let mut prod = vec![0u64; 2 * d - 1];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mul_mod(xi, yj, self.p)) % self.p;
            }
        }
        reduce(&mut prod, &self.modulus, self.p);
        FieldElement(self.encode(&prod[..d]))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement(0);
        }
        match &self.tables {
            Some(t) => {
                let e = t.log[a.0 as usize] as u64 + t.log[b.0 as usize] as u64;
                FieldElement(t.exp[(e % (self.r - 1)) as usize] as u64)
            }
            None => self.mul_slow(a, b),
        }
    }

    fn pow_slow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut result = self.one();
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul_slow(result, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_slow(base, base);
            }
        }
        result
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return self.one();
        }
        if a.0 == 0 {
            return a;
        }
        match &self.tables {
            Some(t) => {
                let k = (t.log[a.0 as usize] as u128 * e as u128 % (self.r - 1) as u128) as usize;
                FieldElement(t.exp[k] as u64)
            }
            None => self.pow_slow(a, e),
        }
    }

    /// `alpha^k` for any integer `k`.
    pub fn alpha_pow(&self, k: i128) -> FieldElement {
        let e = k.rem_euclid((self.r - 1) as i128) as u64;
        match &self.tables {
            Some(t) => FieldElement(t.exp[e as usize] as u64),
            None => self.pow_slow(self.alpha, e),
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::ZeroHasNoLog);
        }
        Ok(self.pow(a, self.r - 2))
    }

    pub fn in_subfield(&self, x: FieldElement) -> bool {
        if x.0 == 0 {
            return true;
        }
        match &self.tables {
            Some(t) => t.log[x.0 as usize] as u64 % self.subfield_embedding() == 0,
            None => self.pow_slow(x, self.q) == x,
        }
    }

    /// Sum of the Frobenius orbit, computed from the definition.
    pub fn trace_by_definition(&self, x: FieldElement, level: TraceLevel) -> Result<FieldElement> {
        let (base, terms) = match level {
            TraceLevel::RToQ => (self.q, self.m),
            TraceLevel::QToP => {
                if self.pow_slow(x, self.q) != x {
                    return Err(Error::DomainMismatch("trace from GF(q) needs an element of GF(q)"));
                }
                (self.p, self.s)
            }
            TraceLevel::RToP => (self.p, self.degree as u32),
        };
        let mut acc = self.zero();
        let mut y = x;
        for _ in 0..terms {
            acc = self.add(acc, y);
            y = self.pow_slow(y, base);
        }
        Ok(acc)
    }

    pub fn trace(&self, x: FieldElement, level: TraceLevel) -> Result<FieldElement> {
        match (&self.tables, level) {
            (Some(t), TraceLevel::RToQ) => Ok(FieldElement(t.trace_rq[x.0 as usize] as u64)),
            (Some(t), TraceLevel::RToP) => Ok(FieldElement(t.trace_rp[x.0 as usize] as u64)),
            _ => self.trace_by_definition(x, level),
        }
    }

    /// `Tr_{r/p}(x)` as an integer in `0..p`.
    pub fn absolute_trace(&self, x: FieldElement) -> u64 {
        match &self.tables {
            Some(t) => t.trace_rp[x.0 as usize] as u64,
            None => self.trace_by_definition(x, TraceLevel::RToP).unwrap().0,
        }
    }

    /// `Tr_{r/q}(x)` as an element of GF(q) inside GF(r).
    pub fn relative_trace(&self, x: FieldElement) -> FieldElement {
        match &self.tables {
            Some(t) => FieldElement(t.trace_rq[x.0 as usize] as u64),
            None => self.trace_by_definition(x, TraceLevel::RToQ).unwrap(),
        }
    }

    /// The canonical additive character `zeta_p^{Tr_{r/p}(x)}`.
    pub fn additive_character(&self, x: FieldElement) -> Complex64 {
        Complex64::from_polar(1.0, TAU * self.absolute_trace(x) as f64 / self.p as f64)
    }

    pub fn discrete_log(&self, x: FieldElement) -> Result<u64> {
        if x.0 == 0 {
            return Err(Error::ZeroHasNoLog);
        }
        if let Some(t) = &self.tables {
            return Ok(t.log[x.0 as usize] as u64);
        }
        let order = self.r - 1;
        let step = (order as f64).sqrt().ceil() as u64;
        if step > self.table_budget {
            return Err(Error::SizeBudgetExceeded {
                what: "baby-step table",
                needed: step.to_string(),
                budget: self.table_budget,
            });
        }
        let mut baby = HashMap::with_capacity(step as usize);
        let mut y = self.one();
        for j in 0..step {
            baby.entry(y.0).or_insert(j);
            y = self.mul_slow(y, self.alpha);
        }
        let giant = self.pow_slow(self.pow_slow(self.alpha, step), self.r - 2);
        let mut g = x;
        for i in 0..=step {
            if let Some(&j) = baby.get(&g.0) {
                return Ok((i * step + j) % order);
            }
            g = self.mul_slow(g, giant);
        }
        unreachable!("alpha generates GF(r)*")
    }
}

/// Reduces a coefficient vector modulo the monic `modulus` in place.
fn reduce(poly: &mut [u64], modulus: &[u64], p: u64) {
    let d = modulus.len() - 1;
    for i in (d..poly.len()).rev() {
        let c = poly[i];
        if c == 0 {
            continue;
        }
        poly[i] = 0;
        for j in 0..d {
            poly[i - d + j] = (poly[i - d + j] + mul_mod(p - c, modulus[j], p)) % p;
        }
    }
}

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    let d = f.len() - 1;
    if prod.len() > d {
        reduce(&mut prod, f, p);
        prod.truncate(d);
    }
    trim(prod)
}

fn poly_powmod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mulmod(&result, &b, f, p);
        }
        e >>= 1;
        if e > 0 {
            b = poly_mulmod(&b, &b, f, p);
        }
    }
    result
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let db = b.len() - 1;
    let lead_inv = pow_mod(b[db], p - 2, p);
    while a.len() > db && !(a.len() == 1 && a[0] == 0) {
        let shift = a.len() - 1 - db;
        let c = mul_mod(*a.last().unwrap(), lead_inv, p);
        for j in 0..=db {
            a[shift + j] = (a[shift + j] + mul_mod(p - c, b[j], p)) % p;
        }
        a = trim(a);
        if a.len() - 1 < db || (a.len() == 1 && a[0] == 0) {
            break;
        }
    }
    a
}

fn poly_gcd_degree(a: &[u64], b: &[u64], p: u64) -> usize {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !(y.len() == 1 && y[0] == 0) {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x.len() - 1
}

/// Rabin's test for a monic polynomial over GF(p), lowest coefficient first.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let d = f.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let x = vec![0u64, 1];
    let mut frob = Vec::with_capacity(d + 1);
    let mut h = x.clone();
    frob.push(h.clone());
    for _ in 0..d {
        h = poly_powmod(&h, p, f, p);
        frob.push(h.clone());
    }
    if frob[d] != x {
        return false;
    }
    factorize(d as u64).iter().all(|&(l, _)| {
        let mut g = frob[d / l as usize].clone();
        g.resize(g.len().max(2), 0);
        g[1] = (g[1] + p - 1) % p;
        poly_gcd_degree(f, &g, p) == 0
    })
}

/// Monic irreducible polynomials of degree `d` in increasing packed order,
/// i.e. compared coefficient by coefficient from `x^{d-1}` down.
pub fn irreducible_polynomials(p: u64, d: usize) -> impl Iterator<Item = Vec<u64>> {
    let count = p.pow(d as u32);
    (0..count).filter_map(move |idx| {
        let mut f = Vec::with_capacity(d + 1);
        let mut x = idx;
        for _ in 0..d {
            f.push(x % p);
            x /= p;
        }
        f.push(1);
        is_irreducible(&f, p).then_some(f)
    })
}

fn first_irreducible(p: u64, d: usize) -> Vec<u64> {
    irreducible_polynomials(p, d)
        .next()
        .expect("irreducible polynomials exist in every degree")
}
