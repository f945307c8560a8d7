//! Closed formulas for clique numbers and partition data.
//!
//! Everything is exact integer arithmetic; quotients are checked to divide.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::prime_power;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("{0} is not a prime power ≥ 2")]
    NotPrimePower(u64),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("{num} is not divisible by {den}")]
    NotIntegral { num: BigUint, den: BigUint },
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn exact_div(num: BigUint, den: BigUint) -> Result<BigUint, FormulaError> {
    if (&num % &den).is_zero() {
        Ok(num / den)
    } else {
        Err(FormulaError::NotIntegral { num, den })
    }
}

fn check_q(q: u64) -> Result<(), FormulaError> {
    match prime_power(q) {
        Some(_) => Ok(()),
        None => Err(FormulaError::NotPrimePower(q)),
    }
}

/// `ω` of the non-commuting graph of `PGL(2, q)`.
pub fn omega_pgl2(q: u64) -> Result<BigUint, FormulaError> {
    check_q(q)?;
    Ok(match q {
        2 => big(4),
        3 => big(10),
        _ => big(q) * big(q) + big(q) + 1u32,
    })
}

/// `ω` of the non-commuting graph of `PSL(2, q)`; the small cases come from
/// `PSL(2,2) ≅ S3`, `PSL(2,3) ≅ A4` and `PSL(2,4) ≅ PSL(2,5) ≅ A5`.
pub fn omega_psl2(q: u64) -> Result<BigUint, FormulaError> {
    check_q(q)?;
    Ok(match q {
        2 => big(4),
        3 => big(5),
        4 | 5 => big(21),
        _ => big(q) * big(q) + big(q) + 1u32,
    })
}

/// The four summands of the Suzuki formula and their total.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuzukiOmega {
    /// `(q²+1)(q−1)`: Sylow 2-subgroups times `ω` of each.
    pub sylow_term: BigUint,
    /// `q²(q²+1)/2`.
    pub split_torus_term: BigUint,
    /// `q²(q²+1)(q−1) / 4(q+2r+1)`.
    pub minus_torus_term: BigUint,
    /// `q²(q²+1)(q−1) / 4(q−2r+1)`.
    pub plus_torus_term: BigUint,
    pub total: BigUint,
}

fn suzuki_qr(m: u32) -> Result<(BigUint, BigUint), FormulaError> {
    if m < 1 {
        return Err(FormulaError::OutOfRange(format!("m = {m} must be ≥ 1")));
    }
    if m > 1000 {
        return Err(FormulaError::OutOfRange(format!("m = {m} is too large")));
    }
    Ok((BigUint::from(1u32) << (2 * m + 1), BigUint::from(1u32) << m))
}

/// `ω(Sz(q))` for `q = 2^{2m+1}`, `r = 2^m`.
pub fn omega_suzuki(m: u32) -> Result<SuzukiOmega, FormulaError> {
    let (q, r) = suzuki_qr(m)?;
    let q2 = &q * &q;
    let q2p1 = &q2 + 1u32;
    let qm1 = &q - 1u32;
    let core = &q2 * &q2p1 * &qm1;
    let two_r = &r * 2u32;
    let sylow_term = &q2p1 * &qm1;
    let split_torus_term = exact_div(&q2 * &q2p1, big(2))?;
    let minus_torus_term = exact_div(core.clone(), (&q + &two_r + 1u32) * 4u32)?;
    let plus_torus_term = exact_div(core, (&q - &two_r + 1u32) * 4u32)?;
    let total = &sylow_term + &split_torus_term + &minus_torus_term + &plus_torus_term;
    Ok(SuzukiOmega {
        sylow_term,
        split_torus_term,
        minus_torus_term,
        plus_torus_term,
        total,
    })
}

/// Whether `4(q ± 2r + 1)` both divide `|Sz(q)| = q²(q²+1)(q−1)`.
pub fn suzuki_divisibility(m: u32) -> Result<bool, FormulaError> {
    let (q, r) = suzuki_qr(m)?;
    let order = &q * &q * (&q * &q + 1u32) * (&q - 1u32);
    let two_r = &r * 2u32;
    Ok([&q + &two_r + 1u32, &q - &two_r + 1u32]
        .into_iter()
        .all(|d| (&order % (d * 4u32)).is_zero()))
}

/// `2m+1` for an extra-special group of order `2^{2m+1}`.
pub fn extraspecial_omega_even(m: u32) -> Result<BigUint, FormulaError> {
    if m < 1 {
        return Err(FormulaError::OutOfRange(format!("m = {m} must be ≥ 1")));
    }
    Ok(big(2 * m as u64 + 1))
}

/// Bounds on `ω` for the extra-special group of order `p^{2n+3}` and odd
/// `p`: `(np+1, (p(p−1)^n − 2)/(p−2))`, or `(p+1, p+1)` when `n = 0`.
pub fn extraspecial_bounds_odd(p: u64, n: u32) -> Result<(BigUint, BigUint), FormulaError> {
    if p < 3 || prime_power(p) != Some((p as u32, 1)) {
        return Err(FormulaError::OutOfRange(format!(
            "p = {p} must be an odd prime"
        )));
    }
    if n == 0 {
        return Ok((big(p + 1), big(p + 1)));
    }
    let lower = big(n as u64) * big(p) + 1u32;
    let upper = exact_div(big(p) * big(p - 1).pow(n) - 2u32, big(p - 2))?;
    Ok((lower, upper))
}

/// One family of conjugate subgroups in a partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartFamily {
    pub name: String,
    pub order: BigUint,
    pub count: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionCounts {
    pub group_order: BigUint,
    pub parts: Vec<PartFamily>,
}

impl PartitionCounts {
    /// `Σ count·(order − 1) = |G| − 1`.
    pub fn identity_holds(&self) -> bool {
        let covered: BigUint = self
            .parts
            .iter()
            .map(|p| &p.count * (&p.order - 1u32))
            .sum();
        covered + 1u32 == self.group_order
    }

    pub fn count_of(&self, name: &str) -> Option<u64> {
        self.parts
            .iter()
            .find(|p| p.name == name)
            .and_then(|p| p.count.to_u64())
    }
}

fn part(name: &str, order: BigUint, count: BigUint) -> PartFamily {
    PartFamily {
        name: name.into(),
        order,
        count,
    }
}

/// `P`, `D`, `I` of orders `q`, `q−1`, `q+1` with `q+1`, `q(q+1)/2`,
/// `q(q−1)/2` conjugates in `PGL(2, q)`.
pub fn pgl2_partition_counts(q: u64) -> Result<PartitionCounts, FormulaError> {
    check_q(q)?;
    let bq = big(q);
    Ok(PartitionCounts {
        group_order: &bq * (&bq * &bq - 1u32),
        parts: vec![
            part("P", bq.clone(), &bq + 1u32),
            part("D", &bq - 1u32, exact_div(&bq * (&bq + 1u32), big(2))?),
            part("I", &bq + 1u32, exact_div(&bq * (&bq - 1u32), big(2))?),
        ],
    })
}

/// `F`, `A`, `B`, `C` of orders `q²`, `q−1`, `q−2r+1`, `q+2r+1` with
/// `δ`, `γ`, `β`, `α` conjugates in `Sz(q)`.
pub fn suzuki_partition_counts(m: u32) -> Result<PartitionCounts, FormulaError> {
    let (q, r) = suzuki_qr(m)?;
    let q2 = &q * &q;
    let q2p1 = &q2 + 1u32;
    let core = &q2 * &q2p1 * (&q - 1u32);
    let two_r = &r * 2u32;
    let b_order = &q - &two_r + 1u32;
    let c_order = &q + &two_r + 1u32;
    Ok(PartitionCounts {
        group_order: core.clone(),
        parts: vec![
            part("F", q2.clone(), q2p1.clone()),
            part("A", &q - 1u32, exact_div(&q2 * &q2p1, big(2))?),
            part(
                "B",
                b_order.clone(),
                exact_div(core.clone(), &b_order * 4u32)?,
            ),
            part("C", c_order.clone(), exact_div(core, &c_order * 4u32)?),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(x: &BigUint) -> u64 {
        x.to_u64().unwrap()
    }

    #[test]
    fn pgl2_and_psl2_cases() {
        let pgl: Vec<u64> = [2, 3, 4, 5, 7]
            .iter()
            .map(|&q| u(&omega_pgl2(q).unwrap()))
            .collect();
        assert_eq!(pgl, [4, 10, 21, 31, 57]);
        let psl: Vec<u64> = [2, 3, 4, 5, 7, 8, 9, 11]
            .iter()
            .map(|&q| u(&omega_psl2(q).unwrap()))
            .collect();
        assert_eq!(psl, [4, 5, 21, 21, 57, 73, 91, 133]);
        assert_eq!(omega_pgl2(6), Err(FormulaError::NotPrimePower(6)));
        assert!(omega_psl2(1).is_err());
    }

    #[test]
    fn suzuki_q8() {
        let s = omega_suzuki(1).unwrap();
        let terms = [
            &s.sylow_term,
            &s.split_torus_term,
            &s.minus_torus_term,
            &s.plus_torus_term,
        ];
        assert_eq!(terms.map(u), [455, 2080, 560, 1456]);
        assert_eq!(u(&s.total), 4551);
        assert!(omega_suzuki(0).is_err());
    }

    #[test]
    fn suzuki_q32_terms_are_integral() {
        // independent evaluation at q = 32, r = 4 with u128
        let (q, r) = (32u128, 4u128);
        let core = q * q * (q * q + 1) * (q - 1);
        assert_eq!(core % (4 * (q + 2 * r + 1)), 0);
        assert_eq!(core % (4 * (q - 2 * r + 1)), 0);
        let expect = (q * q + 1) * (q - 1)
            + q * q * (q * q + 1) / 2
            + core / (4 * (q + 2 * r + 1))
            + core / (4 * (q - 2 * r + 1));
        assert_eq!(omega_suzuki(2).unwrap().total, BigUint::from(expect));
    }

    #[test]
    fn suzuki_divisibility_small_m() {
        for m in 1..=6 {
            assert!(suzuki_divisibility(m).unwrap());
        }
    }

    #[test]
    fn extraspecial_values() {
        assert_eq!(u(&extraspecial_omega_even(2).unwrap()), 5);
        let b = |p, n| {
            let (l, h) = extraspecial_bounds_odd(p, n).unwrap();
            (u(&l), u(&h))
        };
        assert_eq!(b(3, 0), (4, 4));
        assert_eq!(b(3, 1), (4, 4));
        assert_eq!(b(3, 2), (7, 10));
        assert_eq!(b(5, 1), (6, 6));
        assert!(extraspecial_bounds_odd(2, 1).is_err());
        assert!(extraspecial_bounds_odd(9, 1).is_err());
        for p in [3u64, 5, 7, 11] {
            for n in 0..6 {
                let (l, h) = extraspecial_bounds_odd(p, n).unwrap();
                assert!(l <= h);
            }
        }
    }

    #[test]
    fn pgl2_partition_q7() {
        let c = pgl2_partition_counts(7).unwrap();
        assert_eq!(
            (c.count_of("P"), c.count_of("D"), c.count_of("I")),
            (Some(8), Some(28), Some(21))
        );
        let covered: u64 = 8 * 6 + 28 * 5 + 21 * 7;
        assert_eq!(covered, 335);
        assert_eq!(u(&c.group_order) - 1, covered);
        assert!(c.identity_holds());
    }

    #[test]
    fn suzuki_partition_m1() {
        let c = suzuki_partition_counts(1).unwrap();
        let got = ["F", "A", "B", "C"].map(|n| c.count_of(n).unwrap());
        assert_eq!(got, [65, 2080, 1456, 560]);
        assert!(c.identity_holds());
    }

    #[test]
    fn partition_identities_up_to_2_13() {
        for q in 2..=8192u64 {
            if prime_power(q).is_some() {
                assert!(
                    pgl2_partition_counts(q).unwrap().identity_holds(),
                    "q = {q}"
                );
            }
        }
        for m in 1..=6 {
            assert!(
                suzuki_partition_counts(m).unwrap().identity_holds(),
                "m = {m}"
            );
        }
    }
}
