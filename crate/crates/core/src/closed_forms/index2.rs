use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{big_pow, QuadraticValue};
use crate::error::{Error, Result};
use crate::numtheory::{class_number, euler_phi, is_prime, mult_order, solve_alb};

/// Gauss-sum data for characters of order `l^lambda` when `p` generates the
/// squares modulo `l^lambda`: for `1 <= t <= lambda`,
/// `G(psi^(l^(lambda-t))) = P_t (A_t + B_t sqrt(-l))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexTwoParams {
    pub p: u64,
    pub l: u64,
    pub lambda: u32,
    /// `r = p^(f s)`.
    pub s: u64,
    pub f: u64,
    pub h: u64,
    pub a: i128,
    pub b: i128,
    /// Whether `f` is really the order of `p` modulo `l^lambda`.
    pub order_matches: bool,
    p_seq: Vec<BigInt>,
    a_seq: Vec<BigRational>,
    b_seq: Vec<BigRational>,
}

fn check_l(l: u64, lambda: u32) -> Result<()> {
    if !is_prime(l) || l % 4 != 3 || l == 3 {
        return Err(Error::NotIndexTwo(format!("{l} is not a prime = 3 (mod 4) other than 3")));
    }
    if lambda == 0 {
        return Err(Error::InvalidParameter("lambda must be positive".into()));
    }
    Ok(())
}

pub fn index2_params(p: u64, l: u64, lambda: u32, s: u64) -> Result<IndexTwoParams> {
    check_l(l, lambda)?;
    let n1 = l.pow(lambda);
    let f = mult_order(p, n1)?;
    if f != euler_phi(n1) / 2 {
        return Err(Error::NotIndexTwo(format!(
            "order of {p} mod {n1} is {f}, not {}",
            euler_phi(n1) / 2
        )));
    }
    build(p, l, lambda, s, f, true)
}

/// Evaluates the same formulas with `f = phi(l^lambda)/2` even when the
/// order of `p` modulo `l^lambda` differs; `order_matches` records the check.
pub fn index2_params_nominal(p: u64, l: u64, lambda: u32, s: u64) -> Result<IndexTwoParams> {
    check_l(l, lambda)?;
    let n1 = l.pow(lambda);
    let f = euler_phi(n1) / 2;
    let order_matches = mult_order(p, n1)? == f;
    build(p, l, lambda, s, f, order_matches)
}

fn build(p: u64, l: u64, lambda: u32, s: u64, f: u64, order_matches: bool) -> Result<IndexTwoParams> {
    if s == 0 {
        return Err(Error::InvalidParameter("s must be positive".into()));
    }
    let h = class_number(l)?;
    let rep = solve_alb(p, l, h)?;
    let base = QuadraticValue::new(rep.first.into(), rep.second.into(), -(l as i64))?;
    let sign = if s % 2 == 1 { 1 } else { -1 };
    let mut p_seq = vec![BigInt::zero()];
    let mut a_seq = vec![BigRational::zero()];
    let mut b_seq = vec![BigRational::zero()];
    for t in 1..=lambda {
        let spread = l.pow(lambda - t);
        let span = f
            .checked_sub(h * spread)
            .filter(|x| (s * x) % 2 == 0)
            .ok_or_else(|| Error::NotIndexTwo(format!("exponent s(f - h l^(lambda-t))/2 is not a nonnegative integer at t={t}")))?;
        p_seq.push(big_pow(p, s * span / 2) * sign);
        let power = base.pow(s * spread);
        assert_eq!(
            power.norm(),
            big_pow(p, s * h * spread),
            "A_t^2 + l B_t^2 must equal p^(s h l^(lambda-t))"
        );
        a_seq.push(power.rational_part());
        b_seq.push(power.surd_part());
    }
    Ok(IndexTwoParams {
        p,
        l,
        lambda,
        s,
        f,
        h,
        a: rep.first,
        b: rep.second,
        order_matches,
        p_seq,
        a_seq,
        b_seq,
    })
}

impl IndexTwoParams {
    /// `P_t` for `0 <= t <= lambda + 1`, zero outside `1..=lambda`.
    pub fn p_t(&self, t: u32) -> BigInt {
        self.p_seq.get(t as usize).cloned().unwrap_or_default()
    }

    /// `A_t`, with `A_0 = A_(lambda+1) = 0`.
    pub fn a_t(&self, t: u32) -> BigRational {
        self.a_seq.get(t as usize).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `B_t`, with `B_(lambda+1) = 0`.
    pub fn b_t(&self, t: u32) -> BigRational {
        self.b_seq.get(t as usize).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `P_t (A_t + B_t sqrt(-l))` as an exact value.
    pub fn gauss_sum(&self, t: u32) -> QuadraticValue {
        let pt = self.p_t(t);
        let two = BigRational::from_integer(BigInt::from(2));
        let x = (self.a_t(t) * &two).to_integer() * &pt;
        let y = (self.b_t(t) * &two).to_integer() * &pt;
        QuadraticValue::new(x, y, -(self.l as i64)).expect("Gauss sums are algebraic integers")
    }

    /// The same data with `b` replaced by `-b`.
    pub fn conjugate(&self) -> Self {
        let mut out = self.clone();
        out.b = -self.b;
        out.b_seq = self.b_seq.iter().map(|x| -x.clone()).collect();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seven_squared() {
        let params = index2_params(2, 7, 2, 2).unwrap();
        assert_eq!((params.f, params.h, params.a, params.b), (21, 1, -1, 1));
        for t in 1..=2 {
            let a = params.a_t(t);
            let b = params.b_t(t);
            let lhs = &a * &a + &b * &b * BigRational::from_integer(7.into());
            let spread = 7u64.pow(2 - t);
            assert_eq!(lhs, BigRational::from_integer(big_pow(2, 2 * spread)));
        }
        assert_eq!(params.p_t(1), big_pow(2, 14) * -1);
        assert!(matches!(index2_params(3, 11, 2, 1), Err(Error::NotIndexTwo(_))));
        let nominal = index2_params_nominal(3, 11, 2, 1).unwrap();
        assert!(!nominal.order_matches);
        assert_eq!(nominal.f, 55);
    }

    #[test]
    fn single_level_value() {
        let params = index2_params(2, 7, 1, 1).unwrap();
        let g = params.gauss_sum(1);
        assert_eq!(g, QuadraticValue::new((-2).into(), 2.into(), -7).unwrap());
    }
}
