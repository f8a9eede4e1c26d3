use gwlines::binforms::{self, BinaryForm};
use gwlines::rings::{GwField, PrimeField, Ring};
use proptest::prelude::*;

const P: u64 = 101;

fn quadratic() -> impl Strategy<Value = BinaryForm<u64>> {
    prop::array::uniform3(0..P).prop_map(|c| BinaryForm::new(c.to_vec()))
}

proptest! {
    #[test]
    fn resultant_of_a_pencil_scales_by_the_square_determinant(
        q1 in quadratic(),
        q2 in quadratic(),
        m in prop::array::uniform4(0..P),
    ) {
        let k = PrimeField::new(P).unwrap();
        let [a, b, c, d] = m;
        let comb = |x: u64, y: u64| binforms::add(&k, &binforms::scale(&k, &q1, &x), &binforms::scale(&k, &q2, &y));
        let lhs = binforms::resultant(&k, &comb(a, b), &comb(c, d));
        let det = k.sub(&k.mul(&a, &d), &k.mul(&b, &c));
        let rhs = k.mul(&k.mul(&det, &det), &binforms::resultant(&k, &q1, &q2));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn wronskian_discriminant_has_the_class_of_the_resultant(q1 in quadratic(), q2 in quadratic()) {
        let k = PrimeField::new(P).unwrap();
        let r = binforms::resultant(&k, &q1, &q2);
        prop_assume!(r != 0);
        let w = binforms::wronskian(&k, &q1, &q2).unwrap();
        prop_assert!(k.same_class(&binforms::discriminant(&k, &w), &r).unwrap());
    }
}
