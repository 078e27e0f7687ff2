mod common;

use common::*;
use crnf::coeff::{GaussCoeff, Rational};
use crnf::polycore::*;
use proptest::prelude::*;

fn poly(seed: u64, n: usize, m: u32, k: u32) -> BihomPoly {
    random_bihom(&mut rng(seed), n, m, k, 0.5)
}

fn series(seed: u64, n: usize, d: u32) -> MixedSeries {
    let mut r = rng(seed);
    let mut s = MixedSeries::zero(n, d);
    for total in 0..=d {
        for m in 0..=total {
            s.add_part(&random_bihom(&mut r, n, m, total - m, 0.3));
        }
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(a in any::<u64>(), b in any::<u64>(), c in any::<u64>(), n in 1usize..=3, d in 2u32..=5) {
        let (x, y, z) = (series(a, n, d), series(b, n, d), series(c, n, d));
        prop_assert_eq!(x.add(&y), y.add(&x));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        prop_assert!(x.sub(&x).is_zero());
        let one = MixedSeries::from_part(BihomPoly::constant(n, GaussCoeff::from_int(1)), d);
        prop_assert_eq!(x.mul(&one), x.clone());
        prop_assert_eq!(x.conjugate().conjugate(), x.clone());
        prop_assert_eq!(x.mul(&y).conjugate(), x.conjugate().mul(&y.conjugate()));
    }

    #[test]
    fn truncation_is_enforced(a in any::<u64>(), b in any::<u64>(), n in 1usize..=2, d in 3u32..=5) {
        let (x, y) = (series(a, n, d), series(b, n, d));
        let p = x.mul(&y);
        prop_assert!(p.parts().all(|((m, k), _)| m + k <= d));
        let low = series(b, n, d - 1);
        let q = poly_arith(ArithOp::Mul, &x, Operand::Series(&low)).unwrap();
        prop_assert_eq!(q.max_degree(), d - 1);
        prop_assert_eq!(q, x.truncate(d - 1).mul(&low));
    }

    #[test]
    fn leibniz_and_evaluation(a in any::<u64>(), b in any::<u64>(), n in 1usize..=3, k in 0usize..3, anti in any::<bool>()) {
        let k = k % n;
        let (p, q) = (poly(a, n, 2, 1), poly(b, n, 1, 2));
        let lhs = p.mul(&q).derive(k, anti);
        let rhs = p.derive(k, anti).mul(&q).add(&p.mul(&q.derive(k, anti)));
        prop_assert_eq!(lhs, rhs);
        let mut r = rng(a ^ b);
        let pt: Vec<GaussCoeff> = (0..n).map(|_| small_coeff(&mut r, true)).collect();
        prop_assert_eq!(p.mul(&q).evaluate(&pt), &p.evaluate(&pt) * &q.evaluate(&pt));
    }

    #[test]
    fn conjugation_swaps_bidegree(a in any::<u64>(), n in 1usize..=3, m in 0u32..4, k in 0u32..4) {
        let p = poly(a, n, m, k);
        let c = p.conjugate();
        prop_assert_eq!(c.bidegree(), (k, m));
        for (mono, coef) in p.terms() {
            prop_assert_eq!(c.coeff(&mono.conjugate()), coef.conj());
        }
    }

    #[test]
    fn scale_by_rationals(a in any::<u64>(), p in -20i64..20, q in 1i64..20) {
        let x = poly(a, 2, 2, 2);
        let r = Rational::new(p.into(), q.into());
        prop_assert_eq!(x.scale_rational(&r), x.scale(&GaussCoeff::from_rational(r.clone())));
    }
}

#[test]
fn quadric_and_basis() {
    let q = hermitian_quadric(3);
    assert_eq!(q.bidegree(), (1, 1));
    assert_eq!(q.len(), 3);
    let b = monomial_basis(2, 2, 0);
    let shown: Vec<String> = b.iter().map(|m| m.to_string()).collect();
    assert_eq!(shown, ["z1^2", "z1*z2", "z2^2"]);
    assert_eq!(MixedSeries::zero(2, 4).weight_and_order(3), (ExtNat::Infinite, ExtNat::Infinite));
    let p = MixedSeries::from_part(BihomPoly::monomial(Monomial::new(&[1, 0], &[0, 2]), GaussCoeff::from_int(1)), 5);
    assert_eq!(p.weight_and_order(3), (ExtNat::Finite(5), ExtNat::Finite(3)));
}

#[test]
fn mismatched_operands_are_rejected() {
    let x = MixedSeries::zero(2, 4);
    let y = MixedSeries::zero(3, 4);
    assert!(poly_arith(ArithOp::Add, &x, Operand::Series(&y)).is_err());
    let c = GaussCoeff::from_int(2);
    assert!(poly_arith(ArithOp::Add, &x, Operand::Scalar(&c)).is_err());
}
