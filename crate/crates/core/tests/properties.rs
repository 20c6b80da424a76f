//! Property tests for the arithmetic and elimination invariants.

use proptest::prelude::*;
use vessel_elim::classical::bezout_matrix;
use vessel_elim::poly::UniPoly;
use vessel_elim::scalar::Scalar;
use vessel_elim::Matrix;

fn rational() -> impl Strategy<Value = Scalar> {
    (-50i64..=50, 1i64..=20).prop_map(|(n, d)| Scalar::ratio(n, d))
}

fn gaussian() -> impl Strategy<Value = Scalar> {
    (-20i64..=20, -20i64..=20).prop_map(|(re, im)| Scalar::gaussian_int(re, im))
}

fn unipoly(max_deg: usize) -> impl Strategy<Value = UniPoly> {
    proptest::collection::vec(-9i64..=9, 1..=max_deg + 1)
        .prop_map(|c| UniPoly::new(c.into_iter().map(Scalar::from_int).collect()))
}

proptest! {
    #[test]
    fn field_axioms_exact(a in gaussian(), b in gaussian(), c in gaussian()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv(), Scalar::one());
        }
        prop_assert_eq!(a.conj().conj(), a);
    }

    #[test]
    fn rational_order_embeds(a in rational(), b in rational()) {
        // promotion to float respects exact arithmetic up to rounding
        let exact = (&a + &b).to_c64();
        let float = a.to_c64() + b.to_c64();
        prop_assert!((exact - float).norm() <= 1e-12 * (1.0 + exact.norm()));
    }

    #[test]
    fn bezout_matrix_is_antisymmetric_in_arguments(
        p in unipoly(4),
        q in unipoly(4),
    ) {
        let n = 4;
        let bpq = bezout_matrix(&p, &q, n).unwrap().entries;
        let bqp = bezout_matrix(&q, &p, n).unwrap().entries;
        prop_assert_eq!(&bpq, &bqp.neg());
        prop_assert_eq!(&bpq, &bpq.transpose());
        // bilinearity in the first argument
        let r = unipoly_sample();
        let sum = p.add(&r);
        let bsum = bezout_matrix(&sum, &q, n).unwrap().entries;
        let brq = bezout_matrix(&r, &q, n).unwrap().entries;
        prop_assert_eq!(bsum, bpq.add(&brq));
    }

    #[test]
    fn division_identity(p in unipoly(6), q in unipoly(3)) {
        prop_assume!(!q.is_zero());
        let (d, r) = p.div_rem(&q);
        prop_assert_eq!(q.mul(&d).add(&r), p);
        prop_assert!(r.is_zero() || r.degree().unwrap() < q.degree().unwrap());
    }

    #[test]
    fn json_scalar_round_trip(a in prop_oneof![rational(), gaussian()]) {
        let s = serde_json::to_string(&a).unwrap();
        let back: Scalar = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn json_matrix_round_trip(entries in proptest::collection::vec(-9i64..=9, 4)) {
        let m = Matrix::from_rows(vec![
            vec![Scalar::from_int(entries[0]), Scalar::from_int(entries[1])],
            vec![Scalar::from_int(entries[2]), Scalar::from_int(entries[3])],
        ]);
        let s = serde_json::to_string(&m).unwrap();
        let back: Matrix = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, m);
    }
}

fn unipoly_sample() -> UniPoly {
    UniPoly::from_ints(&[2, -1, 3])
}
