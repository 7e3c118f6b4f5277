use num_bigint::{BigInt, BigUint};
use num_integer::Integer;

use super::big_pow;
use crate::error::{Error, Result};
use crate::numtheory::semiprimitive_j;

fn check(p: u64, j: u64, n: u64) -> Result<()> {
    if semiprimitive_j(p, n) != Some(j) {
        return Err(Error::NotSemiprimitive { p, modulus: n });
    }
    Ok(())
}

/// `(p^j + 1) / n` is odd.
fn quotient_odd(p: u64, j: u64, n: u64) -> bool {
    let v = BigUint::from(p).pow(j as u32) + 1u32;
    (v / n).is_odd()
}

/// `G(psi)` for a character of order `n` over GF(p^(2 j gamma)), `p^j = -1 (mod n)`.
pub fn semiprimitive_gauss_sum(p: u64, j: u64, gamma: u64, n: u64) -> Result<BigInt> {
    check(p, j, n)?;
    let root = big_pow(p, j * gamma);
    let odd_exponent = if p == 2 {
        (gamma - 1) % 2 == 1
    } else {
        let q_odd = quotient_odd(p, j, n);
        ((gamma - 1) + if gamma % 2 == 1 && q_odd { 1 } else { 0 }) % 2 == 1
    };
    Ok(if odd_exponent { -root } else { root })
}

/// `G(psi^i)` for `i = 1..n-1`.
pub fn semiprimitive_gauss_sums(p: u64, j: u64, gamma: u64, n: u64) -> Result<Vec<BigInt>> {
    check(p, j, n)?;
    let root = big_pow(p, j * gamma);
    let alternating = n % 2 == 0 && p % 2 == 1 && gamma % 2 == 1 && quotient_odd(p, j, n);
    Ok((1..n)
        .map(|i| {
            let negative = if alternating { i % 2 == 1 } else { gamma % 2 == 0 };
            if negative {
                -root.clone()
            } else {
                root.clone()
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiprimitivePeriods {
    pub special_value: BigInt,
    pub special_index: u64,
    pub common_value: BigInt,
}

impl SemiprimitivePeriods {
    pub fn value(&self, i: u64) -> &BigInt {
        if i == self.special_index {
            &self.special_value
        } else {
            &self.common_value
        }
    }
}

/// Gaussian periods of order `n1` over GF(p^(2 j gamma)) when `p^j = -1 (mod n1)`.
pub fn semiprimitive_periods(p: u64, j: u64, gamma: u64, n1: u64) -> Result<SemiprimitivePeriods> {
    check(p, j, n1)?;
    let root = big_pow(p, j * gamma);
    let n = BigInt::from(n1);
    let k = BigInt::from(n1 - 1);
    let divide = |num: BigInt| -> Result<BigInt> {
        let (q, rem) = num.div_rem(&n);
        if rem != BigInt::from(0) {
            return Err(Error::NotDivisible(format!("semi-primitive period {num}/{n}")));
        }
        Ok(q)
    };
    if gamma % 2 == 1 && p % 2 == 1 && quotient_odd(p, j, n1) {
        return Ok(SemiprimitivePeriods {
            special_value: divide(&k * &root - 1)?,
            special_index: n1 / 2,
            common_value: divide(-&root - 1)?,
        });
    }
    let sign = if gamma % 2 == 0 { -1 } else { 1 };
    Ok(SemiprimitivePeriods {
        special_value: divide(&k * &root * sign - 1)?,
        special_index: 0,
        common_value: divide(-&root * sign - 1)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_sums() {
        assert_eq!(semiprimitive_gauss_sum(2, 1, 3, 3).unwrap(), BigInt::from(8));
        assert_eq!(semiprimitive_gauss_sum(2, 1, 2, 3).unwrap(), BigInt::from(-4));
        let g = semiprimitive_gauss_sums(3, 1, 1, 4).unwrap();
        assert_eq!(g, vec![BigInt::from(-3), BigInt::from(3), BigInt::from(-3)]);
        let g = semiprimitive_gauss_sums(3, 1, 2, 4).unwrap();
        assert_eq!(g, vec![BigInt::from(-9); 3]);
        assert!(matches!(
            semiprimitive_gauss_sums(7, 1, 1, 12),
            Err(Error::NotSemiprimitive { .. })
        ));
    }

    #[test]
    fn periods() {
        let e = semiprimitive_periods(2, 1, 6, 3).unwrap();
        assert_eq!((e.special_value, e.common_value), (BigInt::from(-43), BigInt::from(21)));
        let e = semiprimitive_periods(3, 1, 2, 4).unwrap();
        assert_eq!((e.special_value, e.common_value), (BigInt::from(-7), BigInt::from(2)));
        let e = semiprimitive_periods(7, 1, 1, 4).unwrap();
        assert_eq!((e.special_value, e.special_index, e.common_value), (BigInt::from(5), 0, BigInt::from(-2)));
        let e = semiprimitive_periods(3, 1, 1, 4).unwrap();
        assert_eq!((e.special_value, e.special_index, e.common_value), (BigInt::from(2), 2, BigInt::from(-1)));
    }
}
