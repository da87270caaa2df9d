use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use thue_family::forms::{coeffs, eval_form, symmetry_image, Symmetry};
use thue_family::OrderElement;

fn b(v: i64) -> BigInt {
    BigInt::from(v)
}

fn element(n: i64) -> impl Strategy<Value = OrderElement> {
    prop::array::uniform3(-1000i64..=1000).prop_map(move |c| OrderElement::new(n, c[0], c[1], c[2]))
}

fn pair() -> impl Strategy<Value = (OrderElement, OrderElement)> {
    (0i64..=100).prop_flat_map(|n| (element(n), element(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn norm_is_multiplicative((u, v) in pair()) {
        prop_assert_eq!((&u * &v).norm(), u.norm() * v.norm());
    }

    #[test]
    fn product_of_conjugates_is_norm(u in (0i64..=100).prop_flat_map(element)) {
        let p = &(&u * &u.galois()) * &u.galois_pow(2);
        prop_assert_eq!(p, OrderElement::from_int(u.n(), u.norm()));
    }

    #[test]
    fn norm_form_identity(n in 0i64..=100, a in 1i64..=30, x in -50i64..=50, y in -50i64..=50) {
        let l0 = OrderElement::lambda0(n);
        let mut la = OrderElement::one(n);
        for _ in 0..a {
            la = &la * &l0;
        }
        let el = &OrderElement::from_int(n, x) - &la.scale(&b(y));
        prop_assert_eq!(el.norm(), eval_form(n, a, &b(x), &b(y)).unwrap());
    }

    #[test]
    fn embedding_respects_products((u, v) in pair()) {
        let eu = u.embed(96).unwrap();
        let ev = v.embed(96).unwrap();
        let euv = (&u * &v).embed(96).unwrap();
        for i in 0..3 {
            prop_assert!(euv[i].intersects(&(&eu[i] * &ev[i])));
            let s = (&u + &v).embed(96).unwrap();
            prop_assert!(s[i].intersects(&(&eu[i] + &ev[i])));
        }
    }

    #[test]
    fn homogeneity(n in -20i64..=40, a in prop_oneof![-12i64..=-1, 1i64..=12], x in -60i64..=60, y in -60i64..=60, t in -9i64..=9) {
        let f = eval_form(n, a, &b(x), &b(y)).unwrap();
        let ft = eval_form(n, a, &b(t * x), &b(t * y)).unwrap();
        prop_assert_eq!(ft, f * b(t).pow(3));
    }

    #[test]
    fn symmetries(
        n in prop_oneof![Just(0i64), Just(-1), -50i64..=50],
        a in prop_oneof![-15i64..=-1, 1i64..=15],
        x in prop_oneof![Just(0i64), -40i64..=40],
        y in prop_oneof![Just(0i64), -40i64..=40],
    ) {
        let f = eval_form(n, a, &b(x), &b(y)).unwrap();
        for which in Symmetry::ALL {
            let img = symmetry_image(n, a, &b(x), &b(y), which);
            let g = eval_form(img.n, img.a, &img.x, &img.y).unwrap();
            prop_assert_eq!(g, &f * img.sign, "{:?}", which);
        }
    }
}

#[test]
fn unit_inverses() {
    for n in [0, 1, 2, 7, 100, -3] {
        for i in 0..3 {
            let l = OrderElement::lambda(n, i);
            assert_eq!(&l * &l.invert_unit().unwrap(), OrderElement::one(n));
            assert_eq!(l.powi(-5).unwrap(), l.pow(5).invert_unit().unwrap());
        }
        let l0 = OrderElement::lambda0(n);
        assert_eq!(l0.galois_pow(3), l0);
        assert!(OrderElement::new(n, 2, 0, 0).invert_unit().is_err());
    }
}

#[test]
fn form_is_norm_with_x_zero() {
    // F(0, y) = -y^3 for every a
    for a in 1..=20 {
        assert_eq!(eval_form(4, a, &BigInt::zero(), &b(3)).unwrap(), b(-27));
        assert_eq!(coeffs(4, a).unwrap().eval(&b(2), &BigInt::zero()), b(8));
    }
}
