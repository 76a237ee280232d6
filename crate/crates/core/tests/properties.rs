use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;

use nullsolve_core::arith::canonical;
use nullsolve_core::covering::{build_kappa_covering, covers, kappa, r_zero_set};
use nullsolve_core::lift::{psi_h, solve_explicit_cn};
use nullsolve_core::olson::{reduce_even_sum, solve_olson};
use nullsolve_core::ppa::{all_terms, follow_path, mate, neighbors, ExplicitPoly};
use nullsolve_core::{
    Engine, Error, FactoredIvp, GeneralFormPoly, IntMultiPoly, IntegerValued, IvPoly, Monomial, Node,
    OlsonInstance, ResidueSet, UnitSumPoly,
};

fn modulus() -> impl Strategy<Value = (u64, u32)> {
    prop_oneof![
        (Just(2u64), 1..=5u32),
        (Just(3u64), 1..=3u32),
        (Just(5u64), 1..=2u32),
        (Just(7u64), 1..=2u32),
    ]
}

fn nonzero_set() -> impl Strategy<Value = ResidueSet> {
    modulus().prop_flat_map(|(p, d)| {
        let m = p.pow(d);
        proptest::collection::btree_set(1..m, 0..m as usize)
            .prop_map(move |elems| ResidueSet::new(p, d, elems).unwrap())
    })
}

/// κ written as a plain recursion on the exponent.
fn kappa_recursive(elems: &[u64], p: u64, d: u32) -> u64 {
    if d == 0 {
        return 0;
    }
    let unit = p.pow(d - 1);
    let k = elems.iter().filter(|&&b| b % unit == 0).count() as u64;
    let mut counts = BTreeMap::new();
    for &b in elems {
        *counts.entry(b % unit).or_insert(0u64) += 1;
    }
    let rest: Vec<u64> = counts.into_iter().filter(|&(_, c)| c > k).map(|(r, _)| r).collect();
    k * unit + kappa_recursive(&rest, p, d - 1)
}

fn unit_sum() -> impl Strategy<Value = UnitSumPoly> {
    (1..=6usize).prop_flat_map(|m| {
        proptest::collection::vec(0..1u64 << m, 0..8).prop_map(move |masks| {
            UnitSumPoly::new(m, masks.into_iter().map(Monomial::from_bits).collect()).unwrap()
        })
    })
}

fn general_form() -> impl Strategy<Value = GeneralFormPoly> {
    (1..=5usize)
        .prop_flat_map(|m| {
            let factor = proptest::collection::vec(0..1u64 << m, 1..4);
            let block = proptest::collection::vec(factor, 1..=3);
            (Just(m), proptest::collection::vec(block, 1..=2))
        })
        .prop_filter_map("degree or parity", |(m, blocks)| {
            let blocks = blocks
                .into_iter()
                .map(|block| {
                    block
                        .into_iter()
                        .map(|masks| ExplicitPoly::new(masks.into_iter().map(Monomial::from_bits).collect()))
                        .collect()
                })
                .collect();
            GeneralFormPoly::with_consecutive_full_pairing(m, blocks).ok()
        })
}

proptest! {
    #[test]
    fn kappa_matches_recursion(b in nonzero_set()) {
        let elems: Vec<u64> = b.iter().collect();
        prop_assert_eq!(kappa(&b), kappa_recursive(&elems, b.p(), b.d()));
    }

    #[test]
    fn kappa_covering_is_sound(b in nonzero_set()) {
        let family = build_kappa_covering(&b).unwrap();
        prop_assert!(covers(&family, &b));
        prop_assert_eq!(family.total_degree() as u64, kappa(&b));
        prop_assert!(!family.covered_set().contains(0));
        for h in family.polys() {
            prop_assert!(h.is_unit_at_zero(b.p()));
        }
    }

    #[test]
    fn factored_matches_binomial_basis(
        roots in proptest::collection::vec(-30i64..30, 0..7),
        t in -100i64..100,
    ) {
        let h = FactoredIvp::new(roots, 2, 0).unwrap();
        let basis = h.to_binomial_basis();
        prop_assert_eq!(basis.eval_i64(t), h.eval_i64(t));
        prop_assert_eq!(basis.degree(), h.degree());
    }

    #[test]
    fn lift_evaluates_composition(
        f in unit_sum(),
        coeffs in proptest::collection::vec(-9i64..9, 1..5),
        point in any::<u64>(),
    ) {
        let s = point & ((1u64 << f.m()) - 1);
        let h = IvPoly::from_i64s(&coeffs);
        let lifted = psi_h(&f, &h);
        prop_assert_eq!(lifted.eval(s), h.eval(&BigInt::from(f.eval(s))));
    }

    #[test]
    fn r_zero_set_by_digits((p, d) in modulus(), bits in any::<u32>()) {
        let positions: Vec<u32> = (0..d).filter(|r| bits >> r & 1 == 1).collect();
        let set = r_zero_set(&positions, p, d).unwrap();
        for c in 0..p.pow(d) {
            let digits_ok = positions.iter().all(|&r| (c / p.pow(r)) % p == 0);
            prop_assert_eq!(set.contains(c), digits_ok);
        }
    }

    #[test]
    fn explicit_solver_hits_one(m in 1..=12usize, masks in proptest::collection::vec(any::<u64>(), 0..30)) {
        let full = (1u64 << m) - 1;
        let mut terms: Vec<u64> = masks.into_iter().map(|x| x & full).filter(|&x| x != full).collect();
        terms.sort_unstable();
        terms.dedup();
        terms.push(full);
        let f = IntMultiPoly::from_terms(m, terms.iter().map(|&t| (Monomial::from_bits(t), BigInt::from(1)))).unwrap();
        let s = solve_explicit_cn(&f).unwrap();
        prop_assert_eq!(canonical(i64::try_from(f.eval(s)).unwrap(), 2), 1);
    }

    #[test]
    fn brute_solver_agrees_with_enumeration(
        d in 1..=3u32,
        row in proptest::collection::vec(0i64..8, 1..=8),
    ) {
        let inst = OlsonInstance::zero_sum(2, vec![d], vec![row.clone()]).unwrap();
        let modulus = 1i64 << d;
        let exists = (1u64..1 << row.len()).any(|mask| {
            let sum: i64 = (0..row.len()).filter(|j| mask >> j & 1 == 1).map(|j| row[j]).sum();
            sum % modulus == 0
        });
        match solve_olson(&inst, Engine::Brute) {
            Ok(j) => prop_assert!(exists && inst.is_solution(&j)),
            Err(e) => prop_assert!(!exists && e == Error::NoSolution),
        }
    }

    #[test]
    fn even_sum_reduction_preserves_solutions(
        d in 1..=3u32,
        top in proptest::collection::vec(0i64..8, 1..=7),
        parity in proptest::collection::vec(0i64..4, 7),
    ) {
        // Choose the second row so every column sum is even.
        let bottom: Vec<i64> = top.iter().zip(&parity).map(|(&a, &k)| 2 * k + a % 2).collect();
        let inst = OlsonInstance::zero_sum(2, vec![d, d], vec![top, bottom]).unwrap();
        let reduced = reduce_even_sum(&inst).unwrap();
        if let Ok(j) = solve_olson(&reduced, Engine::Brute) {
            prop_assert!(inst.is_solution(&j));
        }
    }

    #[test]
    fn pairing_is_an_involution(poly in general_form()) {
        let mut nodes = vec![Node::Leaf];
        nodes.extend((0..1u64 << poly.m()).map(Node::Vector));
        nodes.extend(all_terms(&poly).unwrap().into_iter().map(Node::Term));
        for v in &nodes {
            let incident = neighbors(&poly, v).unwrap();
            let mut unmatched = 0;
            for w in &incident {
                match mate(&poly, v, w).unwrap() {
                    Some(u) => prop_assert_eq!(mate(&poly, v, &u).unwrap(), Some(w.clone())),
                    None => unmatched += 1,
                }
            }
            prop_assert_eq!(unmatched, incident.len() % 2);
        }
        let report = follow_path(&poly, None).unwrap();
        prop_assert!(poly.eval(report.solution));
    }
}
