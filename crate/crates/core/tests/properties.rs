use std::sync::OnceLock;

use burnside::linalg::{hermite_rows, in_row_span, integer_kernel};
use burnside::scalar::rat;
use burnside::{named_group, BurnsideElement, Engine, FiniteGroup, MarkVariant, PLocalScalar, PairSpace};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use std::sync::Arc;

const GROUPS: [&str; 7] = ["1", "C2", "C3", "C4", "C2xC2", "S3", "D8"];

fn engine() -> &'static Engine {
    static E: OnceLock<Engine> = OnceLock::new();
    E.get_or_init(Engine::new)
}

fn group(i: usize) -> FiniteGroup {
    named_group(GROUPS[i % GROUPS.len()]).unwrap()
}

fn element(space: &Arc<PairSpace>, seed: &[i64]) -> BurnsideElement {
    let terms: Vec<(usize, i64)> = seed.iter().enumerate().map(|(i, &c)| (i % space.len(), c)).collect();
    BurnsideElement::from_ints(space, &terms).unwrap()
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn composition_is_bilinear_and_associative(
        gs in prop::array::uniform4(0usize..GROUPS.len()),
        a in coeffs(), b in coeffs(), c in coeffs(), d in coeffs(),
    ) {
        let e = engine();
        let [g1, g2, g3, k] = gs.map(group);
        let x1 = element(&e.space(&g3, &k).unwrap(), &a);
        let x2 = element(&e.space(&g3, &k).unwrap(), &b);
        let y = element(&e.space(&g2, &g3).unwrap(), &c);
        let z = element(&e.space(&g1, &g2).unwrap(), &d);
        let sum = e.compose(&(&x1 + &x2), &y).unwrap();
        prop_assert_eq!(sum, &e.compose(&x1, &y).unwrap() + &e.compose(&x2, &y).unwrap());
        let left = e.compose(&e.compose(&x1, &y).unwrap(), &z).unwrap();
        let right = e.compose(&x1, &e.compose(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn augmentation_is_multiplicative(
        gs in prop::array::uniform3(0usize..GROUPS.len()),
        a in coeffs(), b in coeffs(),
    ) {
        let e = engine();
        let [g1, g2, k] = gs.map(group);
        let x = element(&e.space(&g2, &k).unwrap(), &a);
        let y = element(&e.space(&g1, &g2).unwrap(), &b);
        let xy = e.compose(&x, &y).unwrap();
        prop_assert_eq!(e.orbit_augmentation(&xy), e.orbit_augmentation(&x) * e.orbit_augmentation(&y));
    }

    #[test]
    fn effective_composition_matches_oracle(
        gs in prop::array::uniform3(0usize..5),
        a in prop::collection::vec(0i64..=2, 1..3),
        b in prop::collection::vec(0i64..=2, 1..3),
    ) {
        let e = engine();
        let [g1, g2, k] = gs.map(group);
        let x = element(&e.space(&g2, &k).unwrap(), &a);
        let y = element(&e.space(&g1, &g2).unwrap(), &b);
        prop_assert_eq!(e.compose(&x, &y).unwrap(), e.compose_oracle(&x, &y).unwrap());
    }

    #[test]
    fn marks_are_linear_and_match_oracle(
        gi in 0usize..GROUPS.len(), ki in 0usize..3,
        a in prop::collection::vec(0i64..=2, 1..4), b in coeffs(),
    ) {
        let e = engine();
        let (g, k) = (group(gi), group(ki));
        let space = e.space(&g, &k).unwrap();
        let x = element(&space, &a);
        let y = element(&space, &b);
        for c in space.classes() {
            for v in [MarkVariant::Raw, MarkVariant::WithW] {
                let sum = e.mark(c, &(&x + &y), v).unwrap();
                prop_assert_eq!(sum, e.mark(c, &x, v).unwrap() + e.mark(c, &y, v).unwrap());
                prop_assert_eq!(e.mark(c, &x, v).unwrap(), e.mark_oracle(&c.canonical, &x, v).unwrap());
            }
        }
    }

    #[test]
    fn projection_is_idempotent_and_preserves_p_marks(
        gi in 0usize..GROUPS.len(), ki in 0usize..4, p in prop::sample::select(vec![2u64, 3]),
        a in coeffs(),
    ) {
        let e = engine();
        let (g, k) = (group(gi), group(ki));
        let x = element(&e.space(&g, &k).unwrap(), &a);
        let pi = e.pi_p(&x, p).unwrap();
        prop_assert_eq!(e.pi_p(&pi, p).unwrap(), pi.clone());
        prop_assert_eq!(
            e.chi_p(&pi, p, MarkVariant::Raw).unwrap().values,
            e.chi_p(&x, p, MarkVariant::Raw).unwrap().values
        );
        for (_, c) in pi.terms() {
            prop_assert!(burnside::scalar::is_p_integral(c, p));
        }
    }

    #[test]
    fn integer_kernels_are_exact(
        rows in prop::collection::vec(prop::collection::vec(-6i64..=6, 4), 0..4),
    ) {
        let m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        let kernel = integer_kernel(&m, 4);
        let rank = burnside::linalg::rank(
            &rows.iter().map(|r| r.iter().map(|&v| rat(v, 1)).collect()).collect::<Vec<_>>(),
        );
        prop_assert_eq!(kernel.len() + rank, 4);
        for v in &kernel {
            for row in &m {
                let dot: BigInt = row.iter().zip(v).map(|(a, b)| a * b).sum();
                prop_assert!(dot.is_zero());
            }
            prop_assert!(in_row_span(&kernel, v));
        }
        prop_assert_eq!(hermite_rows(&kernel), kernel);
    }

    #[test]
    fn p_adic_residues(num in -500i64..500, den in 1i64..200, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        prop_assume!(den % p as i64 != 0);
        let q = PLocalScalar::new(rat(num, den), p).unwrap();
        let modulus = BigInt::from(p).pow(6);
        let r = q.residue(6);
        prop_assert!(r >= BigInt::zero() && r < modulus);
        let diff: BigInt = &r * den - num;
        prop_assert!((diff % &modulus).is_zero());
        let digits = q.digits(6);
        let back = digits.iter().fold(BigInt::zero(), |acc, &d| acc * p + d);
        prop_assert_eq!(back, r);
    }
}
