use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{big_pow, QuadraticValue};
use crate::cyclotomy::RootOfUnitySum;
use crate::error::{Error, Result};
use crate::ff::{FieldElement, FieldTower};
use crate::numtheory::{solve_c27d, solve_u4v};

fn exact_div(num: BigInt, den: i64, what: &str) -> Result<BigInt> {
    let (q, rem) = num.div_rem(&BigInt::from(den));
    if !rem.is_zero() {
        return Err(Error::NotDivisible(format!("{what}: {num} is not divisible by {den}")));
    }
    Ok(q)
}

fn to_u128(x: &BigInt) -> Result<u128> {
    x.to_u128().ok_or(Error::SizeBudgetExceeded {
        what: "Diophantine search argument",
        needed: x.to_string(),
        budget: u64::MAX,
    })
}

/// The quadratic Gauss sum of GF(p^s) with the canonical additive character.
///
/// For odd `s` the value is `c * sqrt(d)` with `d = p` or `d = -p` according
/// to `p mod 4`.
pub fn quadratic_gauss_sum(p: u64, s: u32) -> Result<QuadraticValue> {
    if p == 2 {
        return Err(Error::EvenPrime(p));
    }
    let sign: i64 = if s % 2 == 1 { 1 } else { -1 };
    let three_mod_four = p % 4 == 3;
    if s % 2 == 0 {
        // (sqrt(-1))^s = (-1)^(s/2)
        let i_power: i64 = if three_mod_four && (s / 2) % 2 == 1 { -1 } else { 1 };
        let v = big_pow(p, (s / 2) as u64) * (sign * i_power);
        return Ok(QuadraticValue::integer(v, p as i64));
    }
    let base = big_pow(p, ((s - 1) / 2) as u64);
    if three_mod_four {
        // (sqrt(-1))^s sqrt(p) = (-1)^((s-1)/2) sqrt(-p)
        let i_power: i64 = if ((s - 1) / 2) % 2 == 1 { -1 } else { 1 };
        QuadraticValue::new(BigInt::zero(), base * (2 * sign * i_power), -(p as i64))
    } else {
        QuadraticValue::new(BigInt::zero(), base * (2 * sign), p as i64)
    }
}

/// `(eta_0, eta_1)` for order 2 over GF(p^(s m)): `eta_0 = (G - 1)/2`.
pub fn periods_order2(p: u64, s: u32, m: u32) -> Result<(BigInt, BigInt)> {
    let g = quadratic_gauss_sum(p, s * m)?;
    let g = g
        .as_integer()
        .ok_or_else(|| Error::IrrationalPeriod(format!("order-2 period over GF({p}^{})", s * m)))?;
    let eta0 = exact_div(g - 1, 2, "order-2 period")?;
    let eta1 = -BigInt::one() - &eta0;
    Ok((eta0, eta1))
}

/// The polynomial `prod_i (X - eta_i)` of order 3 or 4.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodPolynomial {
    pub order: u32,
    /// Coefficients from `X^order` down to the constant term.
    pub coeffs: Vec<BigInt>,
    /// The periods with multiplicity, when they are rational integers.
    pub roots: Option<Vec<BigInt>>,
}

impl PeriodPolynomial {
    fn new(order: u32, coeffs: Vec<BigInt>, roots: Option<Vec<BigInt>>) -> Self {
        if let Some(rs) = &roots {
            assert_eq!(expand(rs), coeffs, "roots must reproduce the coefficients");
        }
        Self { order, coeffs, roots }
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Human readable form, e.g. `X^3 + X^2 - 21X - 45`.
    pub fn display(&self) -> String {
        let deg = self.coeffs.len() - 1;
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let power = deg - i;
            let mag = if c < &BigInt::zero() { -c } else { c.clone() };
            if out.is_empty() {
                if c < &BigInt::zero() {
                    out.push('-');
                }
            } else {
                out.push_str(if c < &BigInt::zero() { " - " } else { " + " });
            }
            if !mag.is_one() || power == 0 {
                out.push_str(&mag.to_string());
            }
            match power {
                0 => {}
                1 => out.push('X'),
                _ => out.push_str(&format!("X^{power}")),
            }
        }
        out
    }
}

/// Coefficients of `prod (X - root)`, leading first.
pub(crate) fn expand(roots: &[BigInt]) -> Vec<BigInt> {
    let mut coeffs = vec![BigInt::one()];
    for root in roots {
        let mut next = coeffs.clone();
        next.push(BigInt::zero());
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] -= c * root;
        }
        coeffs = next;
    }
    coeffs
}

/// The three order-3 periods given `t = r^(1/3)` and `(c1, d1)` with
/// `4t = c1^2 + 27 d1^2`.
pub fn cubic_roots(t: &BigInt, c1: i128, d1: i128) -> Result<Vec<BigInt>> {
    let c1 = BigInt::from(c1);
    let d1 = BigInt::from(d1);
    let first = exact_div(&c1 * t - 1, 3, "order-3 period")?;
    let nine_d = &d1 * 9;
    let second = exact_div(-(exact_div((&c1 + &nine_d) * t, 2, "order-3 period")?) - 1, 3, "order-3 period")?;
    let third = exact_div(-(exact_div((&c1 - &nine_d) * t, 2, "order-3 period")?) - 1, 3, "order-3 period")?;
    Ok(vec![first, second, third])
}

/// The four order-4 periods given `t = r^(1/4)` and `(u1, v1)` with `t^2 = u1^2 + 4 v1^2`.
pub fn quartic_roots(t: &BigInt, u1: i128, v1: i128) -> Result<Vec<BigInt>> {
    let sqrt_r = t * t;
    let u1 = BigInt::from(u1);
    let v1 = BigInt::from(v1);
    let low = -BigInt::one() - &sqrt_r;
    let high = &sqrt_r - 1;
    Ok(vec![
        exact_div(&low - &u1 * t * 2, 4, "order-4 period")?,
        exact_div(&low + &u1 * t * 2, 4, "order-4 period")?,
        exact_div(&high - &v1 * t * 4, 4, "order-4 period")?,
        exact_div(&high + &v1 * t * 4, 4, "order-4 period")?,
    ])
}

fn check_order(p: u64, sm: u32, order: u64) -> Result<BigInt> {
    let r = big_pow(p, sm as u64);
    if !((&r - 1u32) % order).is_zero() {
        return Err(Error::NotDivisible(format!("{order} does not divide {p}^{sm} - 1")));
    }
    Ok(r)
}

/// The order-3 periods when they are rational integers, otherwise `None`.
pub fn order3_roots(p: u64, s: u32, m: u32) -> Result<Option<Vec<BigInt>>> {
    let sm = s * m;
    check_order(p, sm, 3)?;
    if p % 3 == 2 {
        let sqrt_r = big_pow(p, (sm / 2) as u64);
        let sigma: i64 = if (sm / 2) % 2 == 1 { 1 } else { -1 };
        let single = exact_div(&sqrt_r * (2 * sigma) - 1, 3, "order-3 period")?;
        let double = exact_div(&sqrt_r * (-sigma) - 1, 3, "order-3 period")?;
        return Ok(Some(vec![single, double.clone(), double]));
    }
    if sm % 3 == 0 {
        let t = big_pow(p, (sm / 3) as u64);
        let rep = solve_c27d(to_u128(&t)?, p)?;
        return cubic_roots(&t, rep.first, rep.second).map(Some);
    }
    Ok(None)
}

/// The order-4 periods when they are rational integers, otherwise `None`.
pub fn order4_roots(p: u64, s: u32, m: u32) -> Result<Option<Vec<BigInt>>> {
    let sm = s * m;
    check_order(p, sm, 4)?;
    if p % 4 == 3 {
        let sqrt_r = big_pow(p, (sm / 2) as u64);
        let sigma: i64 = if (sm / 2) % 2 == 1 { 1 } else { -1 };
        let single = exact_div(&sqrt_r * (3 * sigma) - 1, 4, "order-4 period")?;
        let triple = exact_div(&sqrt_r * (-sigma) - 1, 4, "order-4 period")?;
        return Ok(Some(vec![single, triple.clone(), triple.clone(), triple]));
    }
    if sm % 4 == 0 {
        let t = big_pow(p, (sm / 4) as u64);
        let rep = solve_u4v(to_u128(&(&t * &t))?, p)?;
        return quartic_roots(&t, rep.first, rep.second).map(Some);
    }
    Ok(None)
}

pub fn period_poly_order3(p: u64, s: u32, m: u32) -> Result<PeriodPolynomial> {
    let r = check_order(p, s * m, 3)?;
    let rep = solve_c27d(to_u128(&r)?, p)?;
    let c = BigInt::from(rep.first);
    let coeffs = vec![
        BigInt::one(),
        BigInt::one(),
        -exact_div(&r - 1, 3, "order-3 coefficient")?,
        -exact_div((c + 3) * &r - 1, 27, "order-3 coefficient")?,
    ];
    Ok(PeriodPolynomial::new(3, coeffs, order3_roots(p, s, m)?))
}

pub fn period_poly_order4(p: u64, s: u32, m: u32) -> Result<PeriodPolynomial> {
    let r = check_order(p, s * m, 4)?;
    let rep = solve_u4v(to_u128(&r)?, p)?;
    let u = BigInt::from(rep.first);
    let n_even = ((&r - BigInt::one()) / BigInt::from(4)).is_even();
    let r2 = &r * &r;
    let u2 = &u * &u;
    let coeffs = if n_even {
        vec![
            BigInt::one(),
            BigInt::one(),
            -exact_div(&r * 3 - 3, 8, "order-4 coefficient")?,
            exact_div((&u * 2 - 3) * &r + 1, 16, "order-4 coefficient")?,
            exact_div(&r2 - (&u2 * 4 - &u * 8 + 6) * &r + 1, 256, "order-4 coefficient")?,
        ]
    } else {
        vec![
            BigInt::one(),
            BigInt::one(),
            exact_div(&r + 3, 8, "order-4 coefficient")?,
            exact_div((&u * 2 + 1) * &r + 1, 16, "order-4 coefficient")?,
            exact_div(&r2 * 9 - (&u2 * 4 - &u * 8 - 2) * &r + 1, 256, "order-4 coefficient")?,
        ]
    };
    Ok(PeriodPolynomial::new(4, coeffs, order4_roots(p, s, m)?))
}

/// `sum_c chi(a2 c^2 + a1 c + a0) = chi(a0 - a1^2/(4 a2)) eta(a2) G(eta)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedQuadraticSum {
    /// `Tr_{r/p}(a0 - a1^2 / (4 a2))`.
    pub shift: u64,
    /// Quadratic character of `a2`.
    pub sign: i64,
    pub gauss: QuadraticValue,
    p: u64,
}

impl ClosedQuadraticSum {
    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(self.sign as f64, std::f64::consts::TAU * self.shift as f64 / self.p as f64)
            * self.gauss.to_complex()
    }

    /// The exact value when the Gauss sum is a rational integer.
    pub fn to_root_sum(&self) -> Option<RootOfUnitySum> {
        let g = self.gauss.as_integer()?.to_i64()?;
        Some(RootOfUnitySum::from_terms(self.p, [(self.shift, self.sign * g)]))
    }
}

pub fn quadratic_character_sum_closed(
    tower: &FieldTower,
    a2: FieldElement,
    a1: FieldElement,
    a0: FieldElement,
) -> Result<ClosedQuadraticSum> {
    let p = tower.p();
    if p == 2 {
        return Err(Error::EvenCharacteristic);
    }
    let four_a2_inv = tower.inv(tower.scale(4, a2))?;
    let shifted = tower.sub(a0, tower.mul(tower.mul(a1, a1), four_a2_inv));
    let sign = if tower.discrete_log(a2)? % 2 == 0 { 1 } else { -1 };
    Ok(ClosedQuadraticSum {
        shift: tower.absolute_trace(shifted),
        sign,
        gauss: quadratic_gauss_sum(p, tower.degree() as u32)?,
        p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn gauss_sums_of_order_two() {
        let g = quadratic_gauss_sum(5, 1).unwrap();
        assert_eq!((g.half_x().clone(), g.half_y().clone(), g.d()), (0.into(), 2.into(), 5));
        assert_eq!(quadratic_gauss_sum(3, 2).unwrap().as_integer(), Some(3.into()));
        assert_eq!(quadratic_gauss_sum(5, 2).unwrap().as_integer(), Some((-5).into()));
        assert_eq!(quadratic_gauss_sum(3, 1).unwrap().d(), -3);
        assert!(matches!(quadratic_gauss_sum(2, 2), Err(Error::EvenPrime(2))));
    }

    #[test]
    fn order_two_periods() {
        assert_eq!(periods_order2(3, 1, 4).unwrap(), (BigInt::from(-5), BigInt::from(4)));
        assert_eq!(periods_order2(5, 1, 2).unwrap(), (BigInt::from(-3), BigInt::from(2)));
        assert_eq!(periods_order2(7, 1, 2).unwrap(), (BigInt::from(3), BigInt::from(-4)));
        assert!(matches!(periods_order2(5, 1, 1), Err(Error::IrrationalPeriod(_))));
    }

    #[test]
    fn cubic_polynomials() {
        let f = period_poly_order3(2, 1, 6).unwrap();
        assert_eq!(f.coeffs, ints(&[1, 1, -21, -45]));
        assert_eq!(f.roots, Some(ints(&[5, -3, -3])));
        assert_eq!(f.display(), "X^3 + X^2 - 21X - 45");
        let f = period_poly_order3(7, 1, 3).unwrap();
        assert_eq!(f.coeffs, ints(&[1, 1, -114, 216]));
        assert_eq!(f.roots, Some(ints(&[2, -12, 9])));
        let f = period_poly_order3(7, 1, 1).unwrap();
        assert_eq!(f.roots, None);
        assert!(period_poly_order3(3, 1, 2).is_err());
    }

    #[test]
    fn quartic_polynomials() {
        let f = period_poly_order4(3, 1, 4).unwrap();
        assert_eq!(f.coeffs, ints(&[1, 1, -30, 76, -56]));
        assert_eq!(f.roots, Some(ints(&[-7, 2, 2, 2])));
        let f = period_poly_order4(5, 1, 4).unwrap();
        assert_eq!(f.roots, Some(ints(&[1, -14, -4, 16])));
        let f = period_poly_order4(5, 1, 1).unwrap();
        assert_eq!(f.coeffs, ints(&[1, 1, 1, 1, 1]));
        assert_eq!(f.roots, None);
    }
}
