//! Code parameters, the period-to-weight map, and the dispatcher that picks a
//! closed form for the full weight distribution.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::closed_forms::{
    big_pow, cubic_roots, index2_params, periods_order2, quartic_roots, semiprimitive_periods, IndexTwoParams,
};
use crate::cyclotomy::{gaussian_periods_exact, GaussianPeriodSet};
use crate::error::{Error, Result};
use crate::ff::{FieldTower, TowerConfig, DEFAULT_TABLE_BUDGET};
use crate::numtheory::{
    divisors, euler_phi, is_prime, legendre, mult_order, prime_power, semiprimitive_j, solve_c27d, solve_u4v,
    valuation,
};
use crate::oracle;

/// Largest `r` enumerated by default.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1 << 22;

/// The parameters of the code `C(r, N)` over GF(q), `q = p^s`, `r = q^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSpec {
    pub p: u64,
    pub s: u32,
    pub m: u32,
    /// `N`, the index of `<theta>` in GF(r)*.
    pub big_n: u64,
    pub q: BigUint,
    pub r: BigUint,
    /// Length `(r-1)/N`.
    pub n: BigUint,
    /// `gcd((r-1)/(q-1), N)`.
    pub n1: u64,
    /// Dimension, the order of `q` modulo `n`.
    pub m0: u32,
    /// `r / q^m0`.
    pub kernel_size: BigUint,
}

pub fn code_params(p: u64, s: u32, m: u32, big_n: u64) -> Result<CodeSpec> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if s == 0 || m == 0 || big_n == 0 {
        return Err(Error::InvalidParameter("s, m and N must be positive".into()));
    }
    let q = BigUint::from(p).pow(s);
    let r = q.pow(m);
    let r1 = &r - 1u32;
    if !(&r1 % big_n).is_zero() {
        return Err(Error::NotADivisor {
            divisor: big_n.to_string(),
            value: r1.to_string(),
        });
    }
    let n = &r1 / big_n;
    let residue = ((&r1 / (&q - 1u32)) % big_n).to_u64().expect("residue below N");
    let n1 = residue.gcd(&big_n);
    let one = BigUint::one() % &n;
    let m0 = divisors(m as u64)
        .into_iter()
        .find(|&d| q.modpow(&BigUint::from(d), &n) == one)
        .expect("q^m = 1 (mod n)") as u32;
    let kernel_size = q.pow(m - m0);
    if BigUint::from(n1) * BigUint::from(n1.saturating_sub(1)) < r {
        assert_eq!(m0, m, "N1(N1-1) < r forces full dimension");
    }
    Ok(CodeSpec {
        p,
        s,
        m,
        big_n,
        q,
        r,
        n,
        n1,
        m0,
        kernel_size,
    })
}

impl CodeSpec {
    pub fn sm(&self) -> u32 {
        self.s * self.m
    }

    /// `m0 < m`: distinct values of `beta` can give the same codeword.
    pub fn is_degenerate(&self) -> bool {
        self.m0 < self.m
    }

    pub fn q_u64(&self) -> Option<u64> {
        self.q.to_u64()
    }

    pub fn r_u64(&self) -> Option<u64> {
        self.r.to_u64()
    }

    pub fn n_u64(&self) -> Option<u64> {
        self.n.to_u64()
    }

    fn qn(&self) -> BigUint {
        &self.q * self.big_n
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ConstantWeight,
    Quadratic,
    Cubic,
    Quartic,
    IndexTwo,
    PrimePower,
    SemiPrimitive,
    Brute,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::ConstantWeight => "thm16",
            Method::Quadratic => "thm18",
            Method::Cubic => "thm19",
            Method::Quartic => "thm21",
            Method::IndexTwo => "thm22",
            Method::PrimePower => "thm23",
            Method::SemiPrimitive => "thm24",
            Method::Brute => "brute",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// How `weight_distribution` may obtain its answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// A closed form, else exact periods by enumeration within the budget.
    #[default]
    Auto,
    Closed,
    /// The codeword-enumeration oracle.
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DispatchOptions {
    /// Largest `r` for which enumeration is attempted.
    pub budget: u64,
    pub parallel: bool,
    /// Use the opposite sign for `d`, `v` and `b` in the Diophantine data.
    pub flip_signs: bool,
}

impl Default for DispatchOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_ENUMERATION_BUDGET,
            parallel: true,
            flip_signs: false,
        }
    }
}

/// Nonzero weights with their codeword counts, sorted by weight. The zero
/// word is implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDistribution {
    entries: Vec<(BigUint, BigUint)>,
    method: Method,
}

impl WeightDistribution {
    /// Merges equal weights and drops zero counts.
    pub fn new(entries: impl IntoIterator<Item = (BigUint, BigUint)>, method: Method) -> Self {
        let mut merged: BTreeMap<BigUint, BigUint> = BTreeMap::new();
        for (w, c) in entries {
            *merged.entry(w).or_default() += c;
        }
        Self {
            entries: merged.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
            method,
        }
    }

    pub fn entries(&self) -> &[(BigUint, BigUint)] {
        &self.entries
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn weights(&self) -> impl Iterator<Item = &BigUint> {
        self.entries.iter().map(|(w, _)| w)
    }

    pub fn count(&self, weight: &BigUint) -> Option<&BigUint> {
        self.entries.iter().find(|(w, _)| w == weight).map(|(_, c)| c)
    }

    pub fn min_weight(&self) -> Option<&BigUint> {
        self.entries.first().map(|(w, _)| w)
    }

    pub fn nonzero_codewords(&self) -> BigUint {
        self.entries.iter().map(|(_, c)| c).sum()
    }

    /// `sum_w w A_w`.
    pub fn first_moment(&self) -> BigUint {
        self.entries.iter().map(|(w, c)| w * c).sum()
    }

    /// Equal weights and counts, whatever the method.
    pub fn same_multiset(&self, other: &Self) -> bool {
        self.entries == other.entries
    }

    /// `1 + 40x^24 + 40x^30`.
    pub fn enumerator(&self) -> String {
        let mut out = String::from("1");
        for (w, c) in &self.entries {
            out.push_str(&format!(" + {c}x^{w}"));
        }
        out
    }
}

impl fmt::Display for WeightDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.enumerator())
    }
}

/// The weight taken on one group of order-`N1` cyclotomic classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassWeight {
    pub weight: BigUint,
    /// Number of classes in the group.
    pub classes: u64,
    /// The Gaussian period of those classes, when known to be an integer.
    pub period: Option<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassWeights {
    pub method: Method,
    pub classes: Vec<ClassWeight>,
}

impl ClassWeights {
    pub fn periods(&self) -> Option<Vec<(BigInt, u64)>> {
        self.classes
            .iter()
            .map(|c| c.period.clone().map(|p| (p, c.classes)))
            .collect()
    }
}

fn non_integral(what: String) -> Error {
    Error::NonIntegralWeight(what)
}

/// `(q-1)(r - 1 - N1 eta) / (qN)`.
pub fn weight_from_period(spec: &CodeSpec, eta: &BigInt) -> Result<BigUint> {
    let r1 = BigInt::from(&spec.r - 1u32);
    let num = BigInt::from(&spec.q - 1u32) * (r1 - eta * spec.n1);
    let den = BigInt::from(spec.qn());
    let (w, rem) = num.div_rem(&den);
    if !rem.is_zero() || w.is_negative() || w > BigInt::from(spec.n.clone()) {
        return Err(non_integral(format!("period {eta} gives weight {num}/{den}")));
    }
    Ok(w.to_biguint().expect("nonnegative"))
}

fn class_weight_from_period(spec: &CodeSpec, eta: BigInt, classes: u64) -> Result<ClassWeight> {
    Ok(ClassWeight {
        weight: weight_from_period(spec, &eta)?,
        classes,
        period: Some(eta),
    })
}

/// Turns per-class weights into codeword counts: each class holds
/// `(r-1)/N1` values of `beta`, and each codeword arises from `kernel_size`
/// of them.
pub fn from_class_weights(spec: &CodeSpec, classes: &[ClassWeight], method: Method) -> Result<WeightDistribution> {
    let total: u64 = classes.iter().map(|c| c.classes).sum();
    if total != spec.n1 {
        return Err(Error::InvalidParameter(format!("{total} classes given, expected {}", spec.n1)));
    }
    let per_class = (&spec.r - 1u32) / spec.n1;
    let mut zero = BigUint::zero();
    let mut entries: BTreeMap<BigUint, BigUint> = BTreeMap::new();
    for c in classes {
        let count = &per_class * c.classes;
        if c.weight.is_zero() {
            zero += count;
        } else {
            *entries.entry(c.weight.clone()).or_default() += count;
        }
    }
    if &zero + 1u32 != spec.kernel_size {
        return Err(Error::NotDivisible(format!(
            "{zero} nonzero elements give the zero word, expected {} - 1",
            spec.kernel_size
        )));
    }
    let mut scaled = Vec::with_capacity(entries.len());
    for (w, count) in entries {
        let (quo, rem) = count.div_rem(&spec.kernel_size);
        if !rem.is_zero() {
            return Err(Error::NotDivisible(format!("{count} by kernel size {}", spec.kernel_size)));
        }
        scaled.push((w, quo));
    }
    Ok(WeightDistribution::new(scaled, method))
}

/// Any failure of a closed form caused only by a search limit means the
/// closed form is not usable here.
fn usable<T>(res: Result<T>) -> Result<Option<T>> {
    match res {
        Ok(v) => Ok(Some(v)),
        Err(Error::SizeBudgetExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn constant_classes(spec: &CodeSpec) -> Result<Option<ClassWeights>> {
    if spec.n1 != 1 {
        return Ok(None);
    }
    Ok(Some(ClassWeights {
        method: Method::ConstantWeight,
        classes: vec![class_weight_from_period(spec, BigInt::from(-1), 1)?],
    }))
}

fn quadratic_classes(spec: &CodeSpec) -> Result<Option<ClassWeights>> {
    if spec.n1 != 2 {
        return Ok(None);
    }
    let (e0, e1) = periods_order2(spec.p, spec.s, spec.m)?;
    Ok(Some(ClassWeights {
        method: Method::Quadratic,
        classes: vec![class_weight_from_period(spec, e0, 1)?, class_weight_from_period(spec, e1, 1)?],
    }))
}

fn semiprimitive_classes(spec: &CodeSpec) -> Result<Option<ClassWeights>> {
    let Some(j) = semiprimitive_j(spec.p, spec.n1) else {
        return Ok(None);
    };
    let sm = spec.sm() as u64;
    if sm % (2 * j) != 0 {
        return Ok(None);
    }
    let periods = semiprimitive_periods(spec.p, j, sm / (2 * j), spec.n1)?;
    Ok(Some(ClassWeights {
        method: Method::SemiPrimitive,
        classes: vec![
            class_weight_from_period(spec, periods.special_value, 1)?,
            class_weight_from_period(spec, periods.common_value, spec.n1 - 1)?,
        ],
    }))
}

fn single_classes(spec: &CodeSpec, method: Method, roots: Vec<BigInt>) -> Result<ClassWeights> {
    let classes = roots
        .into_iter()
        .map(|eta| class_weight_from_period(spec, eta, 1))
        .collect::<Result<_>>()?;
    Ok(ClassWeights { method, classes })
}

fn cubic_classes(spec: &CodeSpec, flip: bool) -> Result<Option<ClassWeights>> {
    let sm = spec.sm();
    if spec.n1 != 3 || spec.p % 3 != 1 || sm % 3 != 0 {
        return Ok(None);
    }
    let t = big_pow(spec.p, (sm / 3) as u64);
    let Some(t_small) = t.to_u128() else {
        return Ok(None);
    };
    let Some(rep) = usable(solve_c27d(t_small, spec.p))? else {
        return Ok(None);
    };
    let d = if flip { -rep.second } else { rep.second };
    let roots = cubic_roots(&t, rep.first, d)?;
    single_classes(spec, Method::Cubic, roots).map(Some)
}

fn quartic_classes(spec: &CodeSpec, flip: bool) -> Result<Option<ClassWeights>> {
    let sm = spec.sm();
    if spec.n1 != 4 || spec.p % 4 != 1 || sm % 4 != 0 {
        return Ok(None);
    }
    let t = big_pow(spec.p, (sm / 4) as u64);
    let Some(t2) = (&t * &t).to_u128() else {
        return Ok(None);
    };
    let Some(rep) = usable(solve_u4v(t2, spec.p))? else {
        return Ok(None);
    };
    let v = if flip { -rep.second } else { rep.second };
    let roots = quartic_roots(&t, rep.first, v)?;
    single_classes(spec, Method::Quartic, roots).map(Some)
}

/// `(r - 1 - bracket) / N1` and `(q-1) bracket / (qN)` for one group of classes.
fn index2_group(spec: &CodeSpec, params: &IndexTwoParams, i2: u32, leg: i8) -> Result<(BigUint, Option<BigInt>)> {
    let l = params.l;
    let mut sum = BigRational::zero();
    for t in 0..=i2 {
        let lt = BigRational::from_integer(BigInt::from(l).pow(t));
        let here = params.a_t(t) * BigRational::from_integer(params.p_t(t));
        let next = params.a_t(t + 1) * BigRational::from_integer(params.p_t(t + 1));
        sum += lt * (here - next);
    }
    let tail = params.b_t(i2 + 1)
        * BigRational::from_integer(params.p_t(i2 + 1) * BigInt::from(l).pow(i2 + 1) * i64::from(leg));
    let r = BigRational::from_integer(BigInt::from(spec.r.clone()));
    let bracket = &r - sum - tail;
    let scale = BigRational::new(BigInt::from(&spec.q - 1u32), BigInt::from(spec.qn()));
    let w = &bracket * scale;
    if !w.is_integer() || w.is_negative() || w.to_integer() > BigInt::from(spec.n.clone()) {
        return Err(non_integral(format!("index-2 weight {w} at i2={i2}, sign {leg}")));
    }
    let eta = (r - BigRational::one() - bracket) / BigRational::from_integer(BigInt::from(spec.n1));
    let period = eta.is_integer().then(|| eta.to_integer());
    Ok((w.to_integer().to_biguint().expect("nonnegative"), period))
}

fn check_index2(spec: &CodeSpec, params: &IndexTwoParams) -> Result<()> {
    let order = params.l.checked_pow(params.lambda);
    if params.p != spec.p || order != Some(spec.n1) {
        return Err(Error::InvalidParameter(format!(
            "index-2 data for p={}, {}^{} does not match p={}, N1={}",
            params.p, params.l, params.lambda, spec.p, spec.n1
        )));
    }
    if BigUint::from(spec.p).pow((params.f * params.s) as u32) != spec.r {
        return Err(Error::InvalidParameter("index-2 data describes a different field".into()));
    }
    Ok(())
}

/// Weight of `c(beta)` for `beta` in the order-`N1` class `i`, `N1 = l^lambda`.
pub fn index2_weight(spec: &CodeSpec, i: u64, params: &IndexTwoParams) -> Result<BigUint> {
    check_index2(spec, params)?;
    if i >= spec.n1 {
        return Err(Error::InvalidParameter(format!("class {i} out of range 0..{}", spec.n1)));
    }
    let (i2, i1) = if i == 0 {
        (params.lambda, 0)
    } else {
        let v = valuation(i, params.l);
        (v, i / params.l.pow(v))
    };
    let leg = legendre((i1 % params.l) as i64, params.l);
    Ok(index2_group(spec, params, i2, leg)?.0)
}

/// Weights of all order-`N1` classes, grouped by `(v_l(i), (i1/l))`.
pub fn index2_class_weights(spec: &CodeSpec, params: &IndexTwoParams) -> Result<Vec<ClassWeight>> {
    check_index2(spec, params)?;
    let (l, lambda) = (params.l, params.lambda);
    let mut out = Vec::new();
    for i2 in 0..lambda {
        let half = euler_phi(l.pow(lambda - i2)) / 2;
        for leg in [1i8, -1] {
            let (weight, period) = index2_group(spec, params, i2, leg)?;
            out.push(ClassWeight {
                weight,
                classes: half,
                period,
            });
        }
    }
    let (weight, period) = index2_group(spec, params, lambda, 0)?;
    out.push(ClassWeight {
        weight,
        classes: 1,
        period,
    });
    Ok(out)
}

fn index2_classes(spec: &CodeSpec, flip: bool) -> Result<Option<ClassWeights>> {
    let Some((l, lambda)) = prime_power(spec.n1) else {
        return Ok(None);
    };
    if l % 4 != 3 || l == 3 || spec.p % l == 0 {
        return Ok(None);
    }
    let f = euler_phi(spec.n1) / 2;
    let sm = spec.sm() as u64;
    if mult_order(spec.p, spec.n1)? != f || sm % f != 0 {
        return Ok(None);
    }
    let Some(mut params) = usable(index2_params(spec.p, l, lambda, sm / f))? else {
        return Ok(None);
    };
    if flip {
        params = params.conjugate();
    }
    Ok(Some(ClassWeights {
        method: Method::IndexTwo,
        classes: index2_class_weights(spec, &params)?,
    }))
}

fn binomial(n: u64, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Distribution of the code of length `t^jj` over GF(q) when the order of
/// `q` modulo `t^ell` is `t^d`, with `m = t^d`.
pub fn prime_power_distribution(q: u64, t: u64, ell: u32, jj: u32) -> Result<WeightDistribution> {
    if t == 2 || !is_prime(t) {
        return Err(Error::InvalidParameter(format!("{t} is not an odd prime")));
    }
    if jj == 0 || jj > ell {
        return Err(Error::InvalidParameter(format!("need 1 <= jj <= ell, got jj={jj}, ell={ell}")));
    }
    let modulus = t
        .checked_pow(ell)
        .ok_or_else(|| Error::InvalidParameter(format!("{t}^{ell} overflows")))?;
    let not_power = || Error::OrderNotPrimePower(format!("order of {q} modulo {t}^{ell}"));
    let order = mult_order(q % modulus, modulus).map_err(|_| not_power())?;
    let d = match order {
        1 => 0,
        _ => match prime_power(order) {
            Some((base, d)) if base == t => d,
            _ => return Err(not_power()),
        },
    };
    let q1 = BigUint::from(q - 1);
    if jj <= ell - d {
        let w = BigUint::from(t.pow(jj));
        return Ok(WeightDistribution::new([(w, q1)], Method::PrimePower));
    }
    let top = t.pow(jj + d - ell);
    let step = BigUint::from(t.pow(ell - d));
    let entries = (1..=top).map(|w| (&step * w, binomial(top, w) * q1.pow(w as u32)));
    Ok(WeightDistribution::new(entries, Method::PrimePower))
}

fn prime_power_classes(spec: &CodeSpec) -> Result<Option<WeightDistribution>> {
    let (Some(n), Some(q)) = (spec.n_u64(), spec.q_u64()) else {
        return Ok(None);
    };
    let (Some((t, jj)), Some((mt, d))) = (prime_power(n), prime_power(spec.m as u64)) else {
        return Ok(None);
    };
    if t != mt || t == 2 {
        return Ok(None);
    }
    let e0 = valuation(q - 1, t);
    if e0 == 0 || t.checked_pow(e0 + d).is_none() {
        return Ok(None);
    }
    prime_power_distribution(q, t, e0 + d, jj).map(Some)
}

/// The first closed form that applies, as per-class weights. The
/// prime-power-length family has no class form and is not covered.
pub fn closed_form_classes(spec: &CodeSpec, options: &DispatchOptions) -> Result<Option<ClassWeights>> {
    let flip = options.flip_signs;
    if let Some(c) = constant_classes(spec)? {
        return Ok(Some(c));
    }
    if let Some(c) = quadratic_classes(spec)? {
        return Ok(Some(c));
    }
    if let Some(c) = semiprimitive_classes(spec)? {
        return Ok(Some(c));
    }
    if let Some(c) = cubic_classes(spec, flip)? {
        return Ok(Some(c));
    }
    if let Some(c) = quartic_classes(spec, flip)? {
        return Ok(Some(c));
    }
    index2_classes(spec, flip)
}

pub fn closed_form(spec: &CodeSpec, options: &DispatchOptions) -> Result<Option<WeightDistribution>> {
    if let Some(c) = closed_form_classes(spec, options)? {
        return from_class_weights(spec, &c.classes, c.method).map(Some);
    }
    prime_power_classes(spec)
}

fn enumeration_tower(spec: &CodeSpec, budget: u64) -> Result<FieldTower> {
    match spec.r_u64() {
        Some(r) if r <= budget => {}
        _ => {
            return Err(Error::SizeBudgetExceeded {
                what: "enumeration",
                needed: spec.r.to_string(),
                budget,
            })
        }
    }
    let config = TowerConfig {
        table_budget: budget.max(DEFAULT_TABLE_BUDGET),
    };
    FieldTower::build_with(spec.p, spec.s, spec.m, &config)
}

/// Per-class weights from the exact order-`N1` periods of GF(r).
pub fn enumerated_classes(spec: &CodeSpec, tower: &FieldTower) -> Result<ClassWeights> {
    let periods = gaussian_periods_exact(tower, spec.n1)?;
    let values = periods
        .integer_values()
        .ok_or_else(|| Error::IrrationalPeriod(format!("order-{} periods over GF({})", spec.n1, spec.r)))?;
    let mut grouped: BTreeMap<i64, u64> = BTreeMap::new();
    for &v in values {
        *grouped.entry(v).or_default() += 1;
    }
    let classes = grouped
        .into_iter()
        .map(|(eta, count)| class_weight_from_period(spec, BigInt::from(eta), count))
        .collect::<Result<_>>()?;
    Ok(ClassWeights {
        method: Method::Brute,
        classes,
    })
}

pub fn weight_distribution(spec: &CodeSpec, strategy: Strategy) -> Result<WeightDistribution> {
    weight_distribution_with(spec, strategy, &DispatchOptions::default())
}

pub fn weight_distribution_with(
    spec: &CodeSpec,
    strategy: Strategy,
    options: &DispatchOptions,
) -> Result<WeightDistribution> {
    let unsupported = || Error::Unsupported(format!("no closed form for (p,s,m,N) = ({}, {}, {}, {})", spec.p, spec.s, spec.m, spec.big_n));
    match strategy {
        Strategy::Closed => closed_form(spec, options)?.ok_or_else(unsupported),
        Strategy::Brute => {
            let tower = enumeration_tower(spec, options.budget)?;
            oracle::brute_weight_distribution_with(spec, &tower, options.parallel)
        }
        Strategy::Auto => {
            if let Some(d) = closed_form(spec, options)? {
                return Ok(d);
            }
            match enumeration_tower(spec, options.budget) {
                Ok(tower) => {
                    let c = enumerated_classes(spec, &tower)?;
                    from_class_weights(spec, &c.classes, c.method)
                }
                Err(Error::SizeBudgetExceeded { .. }) => Err(unsupported()),
                Err(e) => Err(e),
            }
        }
    }
}

/// The order-`N1` periods with their class counts: from a closed form when
/// one gives them, else by enumeration within the budget.
pub fn period_values(spec: &CodeSpec, options: &DispatchOptions) -> Result<Option<Vec<(BigInt, u64)>>> {
    if let Some(periods) = closed_form_classes(spec, options)?.and_then(|c| c.periods()) {
        return Ok(Some(periods));
    }
    match enumeration_tower(spec, options.budget) {
        Ok(tower) => Ok(enumerated_classes(spec, &tower)?.periods()),
        Err(Error::SizeBudgetExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// `(q-1)/gcd(q-1, N/N1)` divides every weight.
pub fn divisibility(spec: &CodeSpec) -> BigUint {
    let q1 = &spec.q - 1u32;
    let g = q1.gcd(&BigUint::from(spec.big_n / spec.n1));
    q1 / g
}

/// `floor((N1 - 1) sqrt(r))`.
fn spread(spec: &CodeSpec) -> BigUint {
    let k = BigUint::from(spec.n1 - 1);
    (&k * &k * &spec.r).sqrt()
}

/// Lower and upper bounds on every nonzero weight. The rounding is applied
/// to the whole quotient `(q-1)(r -+ F)/(qN)`.
pub fn bounds(spec: &CodeSpec) -> (BigUint, BigUint) {
    let f = BigInt::from(spread(spec));
    let r = BigInt::from(spec.r.clone());
    let q1 = BigInt::from(&spec.q - 1u32);
    let den = BigInt::from(spec.qn());
    let lower = (&q1 * (&r - &f)).div_ceil(&den).max(BigInt::zero());
    let upper = (&q1 * (&r + &f)).div_floor(&den);
    (
        lower.to_biguint().expect("clamped"),
        upper.to_biguint().unwrap_or_default(),
    )
}

pub fn is_constant_weight(spec: &CodeSpec) -> bool {
    spec.n1 == 1
}

/// Per-class results of the three period properties: integrality,
/// `N1 eta + 1 = 0 (mod q)`, and `|N1 eta + 1| <= floor((N1 - 1) sqrt(r))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodCheck {
    pub integral: Vec<bool>,
    pub congruent: Vec<bool>,
    pub bounded: Vec<bool>,
}

impl PeriodCheck {
    pub fn integral_all(&self) -> bool {
        self.integral.iter().all(|&b| b)
    }

    pub fn congruent_all(&self) -> bool {
        self.congruent.iter().all(|&b| b)
    }

    pub fn bounded_all(&self) -> bool {
        self.bounded.iter().all(|&b| b)
    }

    pub fn all_hold(&self) -> bool {
        self.integral_all() && self.congruent_all() && self.bounded_all()
    }
}

fn check_one(spec: &CodeSpec, eta: &BigInt, f: &BigInt) -> (bool, bool) {
    let v: BigInt = eta * spec.n1 + 1;
    let q = BigInt::from(spec.q.clone());
    (v.mod_floor(&q).is_zero(), v.abs() <= *f)
}

pub fn check_period_values(spec: &CodeSpec, values: &[BigInt]) -> PeriodCheck {
    let f = BigInt::from(spread(spec));
    let (congruent, bounded) = values.iter().map(|eta| check_one(spec, eta, &f)).unzip();
    PeriodCheck {
        integral: vec![true; values.len()],
        congruent,
        bounded,
    }
}

pub fn check_period_properties(periods: &GaussianPeriodSet, spec: &CodeSpec) -> Result<PeriodCheck> {
    if periods.order() != spec.n1 || spec.r_u64() != Some(periods.r()) {
        return Err(Error::DomainMismatch("periods must have order N1 over GF(r)"));
    }
    let f = BigInt::from(spread(spec));
    let bound = f.to_f64().unwrap_or(f64::INFINITY);
    let mut check = PeriodCheck {
        integral: Vec::new(),
        congruent: Vec::new(),
        bounded: Vec::new(),
    };
    for v in periods.values() {
        match v.as_integer() {
            Some(eta) => {
                let (c, b) = check_one(spec, &BigInt::from(eta), &f);
                check.integral.push(true);
                check.congruent.push(c);
                check.bounded.push(b);
            }
            None => {
                let z = v.to_complex() * spec.n1 as f64 + 1.0;
                check.integral.push(false);
                check.congruent.push(false);
                check.bounded.push(z.norm() <= bound + 1e-6);
            }
        }
    }
    Ok(check)
}

/// One row of the table of minimum distances against the lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundTableRow {
    pub p: u64,
    pub s: u32,
    pub m: u32,
    pub big_n: u64,
    pub length: u64,
    pub dimension: u32,
    pub min_distance: u64,
    pub printed_lower_bound: u64,
    /// `(r-1)/(q-1) mod N`.
    pub printed_residue: u64,
}

const fn row(p: u64, s: u32, m: u32, big_n: u64, length: u64, min_distance: u64, printed_lower_bound: u64, printed_residue: u64) -> BoundTableRow {
    BoundTableRow {
        p,
        s,
        m,
        big_n,
        length,
        dimension: m,
        min_distance,
        printed_lower_bound,
        printed_residue,
    }
}

/// Published minimum distances and lower bounds. The last row's printed
/// bound is 236; the bound evaluates to 240.
pub const BOUND_TABLE: [BoundTableRow; 8] = [
    row(2, 1, 4, 3, 5, 2, 2, 0),
    row(2, 1, 6, 3, 21, 8, 8, 0),
    row(2, 2, 3, 3, 21, 12, 12, 0),
    row(2, 2, 4, 3, 85, 64, 64, 1),
    row(3, 1, 3, 2, 13, 9, 9, 1),
    row(3, 1, 4, 2, 40, 24, 24, 0),
    row(3, 1, 5, 2, 121, 81, 81, 1),
    row(5, 1, 4, 2, 312, 240, 236, 0),
];

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(pairs: &[(u64, u64)]) -> Vec<(BigUint, BigUint)> {
        pairs.iter().map(|&(w, c)| (w.into(), c.into())).collect()
    }

    #[test]
    fn classes_sharing_a_weight_are_merged_before_scaling() {
        let spec = code_params(2, 1, 3, 7).unwrap();
        let d = weight_distribution(&spec, Strategy::Closed).unwrap();
        assert_eq!((d.method(), d.enumerator()), (Method::IndexTwo, "1 + 1x^1".to_string()));
    }

    #[test]
    fn params() {
        let c = code_params(3, 1, 4, 2).unwrap();
        assert_eq!((c.n.clone(), c.n1, c.m0), (40u32.into(), 2, 4));
        let c = code_params(3, 2, 2, 16).unwrap();
        assert_eq!((c.n.clone(), c.n1), (5u32.into(), 2));
        let c = code_params(2, 1, 4, 15).unwrap();
        assert_eq!((c.n1, c.m0, c.is_degenerate()), (15, 1, true));
        assert_eq!(c.kernel_size, BigUint::from(8u32));
        assert!(matches!(code_params(4, 1, 2, 3), Err(Error::NotPrime(4))));
        assert!(matches!(code_params(3, 1, 4, 7), Err(Error::NotADivisor { .. })));
    }

    #[test]
    fn period_to_weight() {
        let c = code_params(3, 1, 4, 2).unwrap();
        assert_eq!(weight_from_period(&c, &BigInt::from(-5)).unwrap(), BigUint::from(30u32));
        assert_eq!(weight_from_period(&c, &BigInt::from(4)).unwrap(), BigUint::from(24u32));
        let c = code_params(7, 1, 3, 6).unwrap();
        for (eta, w) in [(2, 48u32), (9, 45), (-12, 54)] {
            assert_eq!(weight_from_period(&c, &BigInt::from(eta)).unwrap(), BigUint::from(w));
        }
        assert!(weight_from_period(&c, &BigInt::from(3)).is_err());
    }

    #[test]
    fn dispatch_small_examples() {
        let cases: &[((u64, u32, u32, u64), &[(u64, u64)], Method)] = &[
            ((3, 1, 4, 2), &[(24, 40), (30, 40)], Method::Quadratic),
            ((3, 1, 4, 4), &[(12, 60), (18, 20)], Method::SemiPrimitive),
            ((2, 2, 3, 9), &[(4, 21), (6, 42)], Method::SemiPrimitive),
            ((2, 2, 2, 3), &[(4, 15)], Method::ConstantWeight),
            ((7, 1, 2, 12), &[(2, 12), (4, 36)], Method::SemiPrimitive),
            ((7, 1, 3, 6), &[(45, 114), (48, 114), (54, 114)], Method::Cubic),
            ((5, 1, 4, 4), &[(112, 156), (124, 156), (128, 156), (136, 156)], Method::Quartic),
            ((2, 2, 9, 29127), &[(3, 9), (6, 27), (9, 27)], Method::PrimePower),
        ];
        for &((p, s, m, n), want, method) in cases {
            let spec = code_params(p, s, m, n).unwrap();
            let d = weight_distribution(&spec, Strategy::Closed).unwrap();
            assert_eq!(d.entries(), dist(want).as_slice(), "{p} {s} {m} {n}");
            assert_eq!(d.method(), method);
        }
    }

    #[test]
    fn prime_power_family() {
        let d = prime_power_distribution(4, 3, 3, 2).unwrap();
        assert_eq!(d.entries(), dist(&[(3, 9), (6, 27), (9, 27)]).as_slice());
        let d = prime_power_distribution(4, 3, 1, 1).unwrap();
        assert_eq!(d.entries(), dist(&[(3, 3)]).as_slice());
        assert!(matches!(prime_power_distribution(2, 3, 2, 1), Err(Error::OrderNotPrimePower(_))));
    }

    #[test]
    fn index2_groups_agree_with_single_classes() {
        let spec = code_params(2, 1, 21, 49).unwrap();
        let params = index2_params(2, 7, 2, 1).unwrap();
        let classes = index2_class_weights(&spec, &params).unwrap();
        let got: Vec<(u64, u64)> = classes.iter().map(|c| (c.weight.to_u64().unwrap(), c.classes)).collect();
        let mut per_weight: BTreeMap<u64, u64> = BTreeMap::new();
        for (w, c) in got {
            *per_weight.entry(w).or_default() += c;
        }
        assert_eq!(per_weight.into_iter().collect::<Vec<_>>(), vec![(21056, 3), (21376, 21), (21440, 21), (21568, 4)]);
        let mut direct: BTreeMap<BigUint, u64> = BTreeMap::new();
        for i in 0..49 {
            *direct.entry(index2_weight(&spec, i, &params).unwrap()).or_default() += 1;
        }
        let grouped: BTreeMap<BigUint, u64> = classes.iter().fold(BTreeMap::new(), |mut acc, c| {
            *acc.entry(c.weight.clone()).or_default() += c.classes;
            acc
        });
        assert_eq!(direct, grouped);
    }

    #[test]
    fn divisor_and_bounds() {
        let c = code_params(5, 1, 4, 4).unwrap();
        assert_eq!(divisibility(&c), BigUint::from(4u32));
        let c = code_params(3, 1, 4, 2).unwrap();
        assert_eq!(divisibility(&c), BigUint::from(2u32));
        assert_eq!(bounds(&c), (BigUint::from(24u32), BigUint::from(30u32)));
        let c = code_params(2, 1, 4, 3).unwrap();
        assert_eq!(bounds(&c).0, BigUint::from(2u32));
        let c = code_params(2, 2, 4, 3).unwrap();
        let b = bounds(&c);
        assert_eq!((b.0.clone(), b.1), (BigUint::from(64u32), BigUint::from(64u32)));
        assert!(is_constant_weight(&c));
        assert!(!is_constant_weight(&code_params(3, 2, 2, 8).unwrap()));
    }

    #[test]
    fn period_property_checks() {
        let c = code_params(3, 2, 2, 2).unwrap();
        assert!(check_period_values(&c, &[BigInt::from(-5), BigInt::from(4)]).all_hold());
        let c = code_params(3, 1, 4, 4).unwrap();
        let vals: Vec<BigInt> = [-7, 2, 2, 2].into_iter().map(BigInt::from).collect();
        assert!(check_period_values(&c, &vals).all_hold());
        let c = code_params(2, 2, 2, 3).unwrap();
        assert!(check_period_values(&c, &[BigInt::from(-1)]).all_hold());
    }
}
