//! Interaction quality between a query vector `m` and an associator `A`.
//!
//! Three forms are provided:
//!
//! * [`quality_arith`]: the normalized score over ternary cubes, the mean of a
//!   coordinate agreement term and two power-of-two membership terms. Higher is
//!   better and equal vectors score exactly 1.
//! * [`criterion_arith`]: the integer criterion over binary vectors. Zero means
//!   equal, larger is worse.
//! * [`criterion_vector`]: the same criterion kept as logic vectors, built only
//!   from `and`, `or`, `xor` and `not`. Its ones mark the coordinates where the
//!   interaction is poor; [`BitVector::sls`] turns it into a comparable
//!   [`QualityIndex`].
//!
//! [`choose_best`] compares two compacted criterion vectors without any
//! counting, using `and`, `xor` and `orf`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{check_len, Error, Result};
use crate::scalar::Scalar;
use crate::ternary::TernaryVector;
use crate::vector::BitVector;

/// Normalized quality score; every field lies in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QualityScoreNorm<T> {
    pub value: T,
    /// Share of coordinates whose intersection is not empty.
    pub d: T,
    /// Fraction of the associator's points covered by the intersection.
    pub mu_m_in_a: T,
    /// Fraction of the query's points covered by the intersection.
    pub mu_a_in_m: T,
}

/// Normalized interaction quality of two ternary vectors.
///
/// When the intersection is empty both membership terms are 0, since the cubes
/// share no point.
pub fn quality_arith<T: Scalar>(
    m: &TernaryVector,
    a: &TernaryVector,
) -> Result<QualityScoreNorm<T>> {
    let meet = m.intersect(a)?;
    let n = m.len();
    if n == 0 {
        return Err(Error::ZeroLength);
    }
    let d = T::ratio(n - meet.empty_count(), n);
    let (mu_m_in_a, mu_a_in_m) = if meet.is_empty() {
        (T::zero(), T::zero())
    } else {
        let shared = meet.card_x();
        (
            T::inv_pow2(a.card_x() - shared),
            T::inv_pow2(m.card_x() - shared),
        )
    };
    let value = (d.clone() + mu_m_in_a.clone() + mu_a_in_m.clone()) / T::from_count(3);
    Ok(QualityScoreNorm {
        value,
        d,
        mu_m_in_a,
        mu_a_in_m,
    })
}

/// Integer criterion over binary vectors; 0 iff the vectors are equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QualityScoreInt {
    pub value: usize,
    /// Ones of `m ⊕ A`.
    pub d_card: usize,
    /// Ones of `A` not shared with `m`.
    pub nonmembership_m_in_a: usize,
    /// Ones of `m` not shared with `A`.
    pub nonmembership_a_in_m: usize,
}

pub fn criterion_arith(m: &BitVector, a: &BitVector) -> Result<QualityScoreInt> {
    let shared = m.and(a)?.count_ones();
    let d_card = m.xor(a)?.count_ones();
    let nonmembership_m_in_a = a.count_ones() - shared;
    let nonmembership_a_in_m = m.count_ones() - shared;
    Ok(QualityScoreInt {
        value: d_card + nonmembership_m_in_a + nonmembership_a_in_m,
        d_card,
        nonmembership_m_in_a,
        nonmembership_a_in_m,
    })
}

/// Criterion kept as vectors: ones mark poorly interacting coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QualityVector {
    pub d_vec: BitVector,
    pub mu_m_in_a_vec: BitVector,
    pub mu_a_in_m_vec: BitVector,
    pub q_vec: BitVector,
    pub q_compacted: BitVector,
}

impl QualityVector {
    pub fn index(&self) -> QualityIndex {
        QualityIndex {
            k: self.q_compacted.count_ones(),
            n: self.q_compacted.len(),
        }
    }
}

pub fn criterion_vector(m: &BitVector, a: &BitVector) -> Result<QualityVector> {
    let not_shared = m.and(a)?.not();
    let d_vec = m.xor(a)?;
    let mu_m_in_a_vec = a.and(&not_shared)?;
    let mu_a_in_m_vec = m.and(&not_shared)?;
    let q_vec = d_vec.or(&mu_m_in_a_vec)?.or(&mu_a_in_m_vec)?;
    let q_compacted = q_vec.sls();
    Ok(QualityVector {
        d_vec,
        mu_m_in_a_vec,
        mu_a_in_m_vec,
        q_vec,
        q_compacted,
    })
}

/// `(k, n)`: ones in the compacted criterion vector over its width. Smaller
/// `k` is better.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QualityIndex {
    pub k: usize,
    pub n: usize,
}

impl PartialOrd for QualityIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QualityIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.k.cmp(&other.k).then(self.n.cmp(&other.n))
    }
}

impl fmt::Display for QualityIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.k, self.n)
    }
}

pub fn quality_index(m: &BitVector, a: &BitVector) -> Result<QualityIndex> {
    Ok(criterion_vector(m, a)?.index())
}

/// Result of comparing two compacted criterion vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub winner: BitVector,
    /// 0 keeps the first vector, 1 selects the second.
    pub flag: bool,
}

/// Picks the better of two compacted criterion vectors.
///
/// `flag = orf((q1 ∧ q2) ⊕ q1)`, which is set exactly when `q1` has a 1 where
/// `q2` has a 0, i.e. when `q2` is strictly shorter. Equal inputs keep `q1`.
pub fn choose_best(q1: &BitVector, q2: &BitVector) -> Result<Decision> {
    check_len(q1.len(), q2.len())?;
    if !q1.is_compacted() || !q2.is_compacted() {
        return Err(Error::NotCompacted);
    }
    let flag = q1.and(q2)?.xor(q1)?.orf();
    let winner = if flag { q2.clone() } else { q1.clone() };
    Ok(Decision { winner, flag })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    fn tv(s: &str) -> TernaryVector {
        s.parse().unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn arith_scenarios() {
        let s = quality_arith::<BigRational>(&tv("x0"), &tv("xx")).unwrap();
        assert_eq!(
            (s.d.clone(), s.mu_m_in_a.clone(), s.mu_a_in_m.clone()),
            (q(1, 1), q(1, 2), q(1, 1))
        );
        assert_eq!(s.value, q(5, 6));

        let s = quality_arith::<BigRational>(&tv("x1"), &tv("1x")).unwrap();
        assert_eq!(
            (s.d.clone(), s.mu_m_in_a.clone(), s.mu_a_in_m.clone()),
            (q(1, 1), q(1, 2), q(1, 2))
        );
        assert_eq!(s.value, q(2, 3));

        let s = quality_arith::<BigRational>(&tv("1x0x"), &tv("1x0x")).unwrap();
        assert_eq!(s.value, q(1, 1));

        let s = quality_arith::<BigRational>(&tv("0101"), &tv("1010")).unwrap();
        assert_eq!(s.value, q(0, 1));
    }

    #[test]
    fn arith_partial_clash() {
        // 3 of 4 coordinates agree but one clashes: memberships drop to 0.
        let s = quality_arith::<BigRational>(&tv("1100"), &tv("1101")).unwrap();
        assert_eq!(s.d, q(3, 4));
        assert_eq!(s.mu_m_in_a, q(0, 1));
        assert_eq!(s.value, q(1, 4));
    }

    #[test]
    fn arith_float_matches_exact() {
        let s = quality_arith::<f64>(&tv("x0"), &tv("xx")).unwrap();
        assert!((s.value - 5.0 / 6.0).abs() < 1e-12);
        let s = quality_arith::<f32>(&tv("x1"), &tv("1x")).unwrap();
        assert!((s.value - 2.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn arith_errors() {
        assert_eq!(
            quality_arith::<f64>(&tv("x0"), &tv("x")),
            Err(Error::LengthMismatch { left: 2, right: 1 })
        );
        let empty = TernaryVector::from_symbols([]).unwrap();
        assert_eq!(quality_arith::<f64>(&empty, &empty), Err(Error::ZeroLength));
    }

    #[test]
    fn int_criterion_examples() {
        let s = criterion_arith(&bv("110011001100"), &bv("000011110101")).unwrap();
        assert_eq!(
            (s.d_card, s.nonmembership_m_in_a, s.nonmembership_a_in_m),
            (6, 3, 3)
        );
        assert_eq!(s.value, 12);
        assert_eq!(criterion_arith(&bv("0110"), &bv("0110")).unwrap().value, 0);
        let s = criterion_arith(&bv("1111"), &bv("0000")).unwrap();
        assert_eq!(
            (
                s.d_card,
                s.nonmembership_m_in_a,
                s.nonmembership_a_in_m,
                s.value
            ),
            (4, 0, 4, 8)
        );
    }

    #[test]
    fn vector_criterion_examples() {
        let qv = criterion_vector(&bv("110011001100"), &bv("000011110101")).unwrap();
        assert_eq!(qv.mu_a_in_m_vec.ones_positions(), vec![1, 2, 9]);
        assert_eq!(qv.mu_m_in_a_vec.ones_positions(), vec![7, 8, 12]);
        assert_eq!(qv.q_vec, qv.d_vec);
        assert_eq!(qv.q_vec.count_ones(), 6);
        assert_eq!(qv.q_compacted, bv("111111000000"));
        assert_eq!(qv.index(), QualityIndex { k: 6, n: 12 });

        let qv = criterion_vector(&bv("1011"), &bv("1011")).unwrap();
        for v in [&qv.d_vec, &qv.mu_m_in_a_vec, &qv.mu_a_in_m_vec, &qv.q_vec] {
            assert!(!v.orf());
        }

        let qv = criterion_vector(&bv("10"), &bv("01")).unwrap();
        assert_eq!(qv.d_vec, bv("11"));
        assert_eq!(qv.mu_a_in_m_vec, bv("10"));
        assert_eq!(qv.mu_m_in_a_vec, bv("01"));
        assert_eq!(qv.q_vec, bv("11"));
    }

    #[test]
    fn index_examples() {
        assert_eq!(
            quality_index(&bv("1111"), &bv("0000")).unwrap(),
            QualityIndex { k: 4, n: 4 }
        );
        assert_eq!(
            quality_index(&bv("101"), &bv("101")).unwrap(),
            QualityIndex { k: 0, n: 3 }
        );
        assert_eq!(QualityIndex { k: 6, n: 12 }.to_string(), "6/12");
    }

    #[test]
    fn choose_best_examples() {
        let six = BitVector::prefix(12, 6);
        let eight = BitVector::prefix(12, 8);
        let d = choose_best(&six, &eight).unwrap();
        assert_eq!((d.winner, d.flag), (six.clone(), false));
        let d = choose_best(&eight, &six).unwrap();
        assert_eq!((d.winner, d.flag), (six.clone(), true));
        let d = choose_best(&six, &six).unwrap();
        assert!(!d.flag);
        assert_eq!(
            choose_best(&bv("0110"), &bv("1000")),
            Err(Error::NotCompacted)
        );
        assert_eq!(
            choose_best(&bv("1000"), &bv("0100")),
            Err(Error::NotCompacted)
        );
        assert!(matches!(
            choose_best(&bv("10"), &bv("100")),
            Err(Error::LengthMismatch { .. })
        ));
    }
}
