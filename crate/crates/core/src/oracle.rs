//! Ground truth by enumeration: codewords built literally from traces.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ff::{FieldElement, FieldTower};
use crate::weights::{from_class_weights, ClassWeight, CodeSpec, Method, WeightDistribution};

/// Largest `r` for which every `beta` is expanded into a full codeword.
pub const LITERAL_LIMIT: u64 = 1 << 12;

/// `(Tr(beta), Tr(beta theta), ..., Tr(beta theta^(n-1)))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Codeword {
    entries: Vec<FieldElement>,
    beta_log: Option<u64>,
}

impl Codeword {
    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn beta_log(&self) -> Option<u64> {
        self.beta_log
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.entries.iter().filter(|x| !x.is_zero()).count()
    }
}

fn check_tower(spec: &CodeSpec, tower: &FieldTower) -> Result<u64> {
    if (tower.p(), tower.s(), tower.m()) != (spec.p, spec.s, spec.m) {
        return Err(Error::InvalidParameter(format!(
            "tower GF({}^({}*{})) does not match the code's GF({}^({}*{}))",
            tower.p(),
            tower.s(),
            tower.m(),
            spec.p,
            spec.s,
            spec.m
        )));
    }
    Ok(spec.n.to_u64().expect("r fits in the tower"))
}

pub fn codeword(spec: &CodeSpec, tower: &FieldTower, beta: FieldElement) -> Result<Codeword> {
    let n = check_tower(spec, tower)?;
    let theta = tower.alpha_pow(spec.big_n as i128);
    let mut entries = Vec::with_capacity(n as usize);
    let mut x = beta;
    for _ in 0..n {
        entries.push(tower.relative_trace(x));
        x = tower.mul(x, theta);
    }
    let beta_log = if beta.is_zero() {
        None
    } else {
        Some(tower.discrete_log(beta)?)
    };
    Ok(Codeword { entries, beta_log })
}

fn require_tables(tower: &FieldTower) -> Result<()> {
    if !tower.has_tables() {
        return Err(Error::SizeBudgetExceeded {
            what: "enumeration",
            needed: tower.r().to_string(),
            budget: tower.table_budget(),
        });
    }
    Ok(())
}

/// Weight of `c(alpha^c)`, counted along the orbit `alpha^c theta^j`.
fn orbit_weight(tower: &FieldTower, c: u64, big_n: u64, n: u64) -> u64 {
    let theta = tower.alpha_pow(big_n as i128);
    let mut x = tower.alpha_pow(c as i128);
    let mut w = 0;
    for _ in 0..n {
        if !tower.relative_trace(x).is_zero() {
            w += 1;
        }
        x = tower.mul(x, theta);
    }
    w
}

pub fn brute_weight_distribution(spec: &CodeSpec, tower: &FieldTower) -> Result<WeightDistribution> {
    brute_weight_distribution_with(spec, tower, true)
}

/// Scaling `beta` by GF(q)* and by `theta` preserves the weight, and those
/// together generate `<alpha^N1>`, so one `beta = alpha^c` per `c < N1`
/// suffices.
pub fn brute_weight_distribution_with(spec: &CodeSpec, tower: &FieldTower, parallel: bool) -> Result<WeightDistribution> {
    let n = check_tower(spec, tower)?;
    require_tables(tower)?;
    let weights: Vec<u64> = if parallel {
        (0..spec.n1)
            .into_par_iter()
            .map(|c| orbit_weight(tower, c, spec.big_n, n))
            .collect()
    } else {
        (0..spec.n1).map(|c| orbit_weight(tower, c, spec.big_n, n)).collect()
    };
    let mut grouped: BTreeMap<u64, u64> = BTreeMap::new();
    for w in weights {
        *grouped.entry(w).or_default() += 1;
    }
    let classes: Vec<ClassWeight> = grouped
        .into_iter()
        .map(|(w, classes)| ClassWeight {
            weight: BigUint::from(w),
            classes,
            period: None,
        })
        .collect();
    from_class_weights(spec, &classes, Method::Brute)
}

/// Expands every `beta` and counts distinct nonzero codewords.
pub fn brute_weight_distribution_literal(spec: &CodeSpec, tower: &FieldTower) -> Result<WeightDistribution> {
    check_tower(spec, tower)?;
    if tower.r() > LITERAL_LIMIT {
        return Err(Error::SizeBudgetExceeded {
            what: "literal enumeration",
            needed: tower.r().to_string(),
            budget: LITERAL_LIMIT,
        });
    }
    let mut seen: HashSet<Vec<FieldElement>> = HashSet::new();
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for beta in tower.elements().skip(1) {
        let word = codeword(spec, tower, beta)?;
        let w = word.weight() as u64;
        if w > 0 && seen.insert(word.entries) {
            *counts.entry(w).or_default() += 1;
        }
    }
    Ok(WeightDistribution::new(
        counts.into_iter().map(|(w, c)| (BigUint::from(w), BigUint::from(c))),
        Method::Brute,
    ))
}

/// `|{x in GF(r) : Tr_{r/q}(a x^N) = 0}|`.
pub fn count_z(spec: &CodeSpec, tower: &FieldTower, a: FieldElement) -> Result<u64> {
    check_tower(spec, tower)?;
    require_tables(tower)?;
    Ok(tower
        .elements()
        .filter(|&x| tower.relative_trace(tower.mul(a, tower.pow(x, spec.big_n))).is_zero())
        .count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::code_params;

    #[test]
    fn codewords_shift() {
        let spec = code_params(3, 1, 4, 2).unwrap();
        let tower = FieldTower::build(3, 1, 4).unwrap();
        let zero = codeword(&spec, &tower, tower.zero()).unwrap();
        assert_eq!((zero.len(), zero.weight(), zero.beta_log()), (40, 0, None));
        let beta = tower.alpha_pow(5);
        let theta = tower.alpha_pow(2);
        let a = codeword(&spec, &tower, beta).unwrap();
        let b = codeword(&spec, &tower, tower.mul(beta, theta)).unwrap();
        let mut rotated = a.entries().to_vec();
        rotated.rotate_left(1);
        assert_eq!(rotated, b.entries());
        assert_eq!(codeword(&spec, &tower, tower.one()).unwrap().weight(), 30);
        assert_eq!(codeword(&spec, &tower, tower.alpha()).unwrap().weight(), 24);
    }

    #[test]
    fn distributions() {
        let spec = code_params(3, 1, 4, 2).unwrap();
        let tower = FieldTower::build(3, 1, 4).unwrap();
        let d = brute_weight_distribution(&spec, &tower).unwrap();
        assert_eq!(d.enumerator(), "1 + 40x^24 + 40x^30");
        assert!(d.same_multiset(&brute_weight_distribution_literal(&spec, &tower).unwrap()));
        assert_eq!(count_z(&spec, &tower, tower.one()).unwrap(), 21);
        assert_eq!(count_z(&spec, &tower, tower.zero()).unwrap(), 81);
    }

    #[test]
    fn degenerate_code_counts_distinct_words() {
        let spec = code_params(2, 1, 4, 15).unwrap();
        let tower = FieldTower::build(2, 1, 4).unwrap();
        let d = brute_weight_distribution(&spec, &tower).unwrap();
        assert_eq!(d.enumerator(), "1 + 1x^1");
        assert!(d.same_multiset(&brute_weight_distribution_literal(&spec, &tower).unwrap()));
    }
}
