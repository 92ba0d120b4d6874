//! Library results checked against independent brute-force oracles.

use std::collections::BTreeSet;

use lamp_core::{
    choose_best, criterion_arith, criterion_vector, quality_arith, quality_index, AssocTable,
    BitVector, InteractionClass, Rational, Symbol, TernaryVector,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn all_binary(n: usize) -> Vec<Vec<bool>> {
    (0..1u32 << n)
        .map(|x| (0..n).map(|i| x >> i & 1 == 1).collect())
        .collect()
}

fn all_ternary(n: usize) -> Vec<Vec<char>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<char>| {
                ['0', '1', 'x'].into_iter().map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}

fn points(v: &[char]) -> BTreeSet<Vec<bool>> {
    let mut out = BTreeSet::from([vec![]]);
    for &c in v {
        let opts: Vec<bool> = match c {
            '0' => vec![false],
            '1' => vec![true],
            _ => vec![false, true],
        };
        out = out
            .into_iter()
            .flat_map(|p| {
                opts.iter().map(move |&b| {
                    let mut q = p.clone();
                    q.push(b);
                    q
                })
            })
            .collect();
    }
    out
}

fn scalar_criterion(m: &[bool], a: &[bool]) -> usize {
    let mut d = 0;
    let mut ones_m = 0;
    let mut ones_a = 0;
    let mut shared = 0;
    for (&x, &y) in m.iter().zip(a) {
        d += (x != y) as usize;
        ones_m += x as usize;
        ones_a += y as usize;
        shared += (x && y) as usize;
    }
    d + (ones_a - shared) + (ones_m - shared)
}

#[test]
fn binary_collapse_exhaustive() {
    for n in 1..=6 {
        let vs = all_binary(n);
        for x in &vs {
            for y in &vs {
                let m = BitVector::from_bits(x.iter().copied());
                let a = BitVector::from_bits(y.iter().copied());
                let qv = criterion_vector(&m, &a).unwrap();
                let hamming = x.iter().zip(y).filter(|(p, q)| p != q).count();
                assert_eq!(qv.q_vec, m.xor(&a).unwrap());
                assert_eq!(qv.mu_m_in_a_vec, a.and(&m.not()).unwrap());
                assert_eq!(qv.mu_a_in_m_vec, m.and(&a.not()).unwrap());
                assert!(!qv.mu_m_in_a_vec.and(&qv.mu_a_in_m_vec).unwrap().orf());
                assert_eq!(qv.mu_m_in_a_vec.or(&qv.mu_a_in_m_vec).unwrap(), qv.d_vec);
                let arith = criterion_arith(&m, &a).unwrap();
                assert_eq!(arith.value, 2 * hamming);
                assert_eq!(arith.value, scalar_criterion(x, y));
                assert_eq!(qv.q_compacted, BitVector::prefix(n, hamming));
            }
        }
    }
}

#[test]
fn ternary_matches_point_sets_exhaustive() {
    for n in 1..=4 {
        let vs = all_ternary(n);
        for x in &vs {
            for y in &vs {
                let m: TernaryVector = x.iter().collect::<String>().parse().unwrap();
                let a: TernaryVector = y.iter().collect::<String>().parse().unwrap();
                let (pm, pa) = (points(x), points(y));
                let common: BTreeSet<_> = pm.intersection(&pa).cloned().collect();

                let meet = m.intersect(&a).unwrap();
                assert_eq!(meet.is_empty(), common.is_empty());
                if let Some(t) = meet.to_ternary() {
                    let chars: Vec<char> = t.symbols().map(Symbol::as_char).collect();
                    assert_eq!(points(&chars), common);
                }

                let s = quality_arith::<Rational>(&m, &a).unwrap();
                let clash = x
                    .iter()
                    .zip(y)
                    .filter(|(p, q)| matches!((p, q), ('0', '1') | ('1', '0')))
                    .count();
                assert_eq!(s.d, Rational::new((n - clash).into(), n.into()));
                let ratio = |num: usize, den: usize| Rational::new(num.into(), den.into());
                let (mu_ma, mu_am) = if common.is_empty() {
                    (ratio(0, 1), ratio(0, 1))
                } else {
                    (ratio(common.len(), pa.len()), ratio(common.len(), pm.len()))
                };
                assert_eq!(s.mu_m_in_a, mu_ma);
                assert_eq!(s.mu_a_in_m, mu_am);

                let expected = if common.is_empty() {
                    InteractionClass::Disjoint
                } else if pm == pa {
                    InteractionClass::Equal
                } else if pm.is_subset(&pa) {
                    InteractionClass::QueryInsideAssociator
                } else if pa.is_subset(&pm) {
                    InteractionClass::AssociatorInsideQuery
                } else {
                    InteractionClass::Overlap
                };
                let class = m.classify_interaction(&a).unwrap();
                assert_eq!(class, expected);
                assert_eq!(a.classify_interaction(&m).unwrap(), class.mirror());

                let swapped = a.intersect(&m).unwrap();
                assert_eq!(swapped.to_string(), meet.to_string());
            }
        }
    }
}

#[test]
fn query_winners_match_scalar_argmin() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let n = rng.gen_range(1..=64);
        let rows = rng.gen_range(1..=64);
        let table: Vec<Vec<bool>> = (0..rows)
            .map(|_| (0..n).map(|_| rng.gen_bool(0.5)).collect())
            .collect();
        let m: Vec<bool> = if rng.gen_bool(0.3) {
            table[rng.gen_range(0..rows)].clone()
        } else {
            (0..n).map(|_| rng.gen_bool(0.5)).collect()
        };
        let scores: Vec<usize> = table.iter().map(|r| scalar_criterion(&m, r)).collect();
        let min = *scores.iter().min().unwrap();
        let expected: Vec<usize> = (0..rows).filter(|&i| scores[i] == min).collect();

        let bit_rows: Vec<BitVector> = table
            .iter()
            .map(|r| BitVector::from_bits(r.iter().copied()))
            .collect();
        let t = AssocTable::from_binary_rows("r", &bit_rows).unwrap();
        let mv = BitVector::from_bits(m.iter().copied());
        let r = t.query(&TernaryVector::from_binary(&mv)).unwrap();
        let got: Vec<usize> = r.best_rows.iter().map(|b| b.index).collect();
        assert_eq!(got, expected);

        // Fold with choose_best equals first minimal k.
        let mut best = 0;
        let mut best_q = criterion_vector(&mv, &bit_rows[0]).unwrap().q_compacted;
        for (i, row) in bit_rows.iter().enumerate().skip(1) {
            let q = criterion_vector(&mv, row).unwrap().q_compacted;
            if choose_best(&best_q, &q).unwrap().flag {
                best = i;
                best_q = q;
            }
        }
        assert_eq!(best, expected[0]);

        let ranked = t.rank(&TernaryVector::from_binary(&mv), rows).unwrap();
        let mut order: Vec<usize> = ranked.iter().map(|(rm, _)| rm.index).collect();
        let mut by_scalar: Vec<usize> = (0..rows).collect();
        by_scalar.sort_by_key(|&i| scores[i]);
        assert_eq!(order, by_scalar);
        order.sort();
        assert_eq!(order, (0..rows).collect::<Vec<_>>());
    }
}

#[test]
fn ternary_row_equal_to_query_is_unique_best() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.gen_range(1..=12);
        let gen = |rng: &mut ChaCha8Rng| -> String {
            (0..n)
                .map(|_| ['0', '1', 'x'][rng.gen_range(0..3)])
                .collect()
        };
        let mut rows: Vec<String> = (0..rng.gen_range(1..10)).map(|_| gen(&mut rng)).collect();
        let m = gen(&mut rng);
        rows.retain(|r| *r != m);
        let at = rng.gen_range(0..=rows.len());
        rows.insert(at, m.clone());
        if rows.iter().all(|r| !r.contains('x')) {
            rows.push("x".repeat(n));
        }
        let t = AssocTable::parse("t", &rows.join("\n")).unwrap();
        let r = t.query(&m.parse().unwrap()).unwrap();
        assert_eq!(r.best_rows.len(), 1);
        assert_eq!(r.best_rows[0].index, at);
        assert_eq!(
            r.best.norm().unwrap().value,
            Rational::from_integer(1.into())
        );
    }
}

fn arb_binary_pair(max: usize) -> impl Strategy<Value = (Vec<bool>, Vec<bool>)> {
    (1usize..max).prop_flat_map(|n| {
        (
            proptest::collection::vec(any::<bool>(), n),
            proptest::collection::vec(any::<bool>(), n),
        )
    })
}

proptest! {
    #[test]
    fn collapse_holds_for_wide_vectors((x, y) in arb_binary_pair(4096)) {
        let m = BitVector::from_bits(x.iter().copied());
        let a = BitVector::from_bits(y.iter().copied());
        let qv = criterion_vector(&m, &a).unwrap();
        prop_assert_eq!(&qv.q_vec, &m.xor(&a).unwrap());
        prop_assert_eq!(criterion_arith(&m, &a).unwrap().value, 2 * qv.q_vec.count_ones());
    }

    #[test]
    fn ranking_consistency(
        (m, a1, a2) in (1usize..200).prop_flat_map(|n| (
            proptest::collection::vec(any::<bool>(), n),
            proptest::collection::vec(any::<bool>(), n),
            proptest::collection::vec(any::<bool>(), n),
        ))
    ) {
        let m = BitVector::from_bits(m);
        let a1 = BitVector::from_bits(a1);
        let a2 = BitVector::from_bits(a2);
        let lhs = criterion_arith(&m, &a1).unwrap().value < criterion_arith(&m, &a2).unwrap().value;
        let rhs = quality_index(&m, &a1).unwrap().k < quality_index(&m, &a2).unwrap().k;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn choose_best_picks_fewer_ones(n in 1usize..300, k1 in 0usize..300, k2 in 0usize..300) {
        let (k1, k2) = (k1 % (n + 1), k2 % (n + 1));
        let d = choose_best(&BitVector::prefix(n, k1), &BitVector::prefix(n, k2)).unwrap();
        prop_assert_eq!(d.flag, k2 < k1);
        prop_assert_eq!(d.winner.count_ones(), k1.min(k2));
    }
}
