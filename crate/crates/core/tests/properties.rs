use proptest::prelude::*;
use rankmetric::linpoly::LinearizedPoly;
use rankmetric::rank_metric::{rank_distance, rank_norm};
use rankmetric::{ExtensionField, FieldElement, GabidulinCode, RankVector};

fn elems(f: &ExtensionField, raw: &[u128]) -> Vec<FieldElement> {
    raw.iter().map(|&v| FieldElement::from_packed(v % f.order())).collect()
}

proptest! {
    #[test]
    fn field_distributes(a in 0u128..81, b in 0u128..81, c in 0u128..81) {
        let f = ExtensionField::new(3, 4).unwrap();
        let [a, b, c] = [a, b, c].map(FieldElement::from_packed);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        if b != FieldElement::ZERO {
            prop_assert_eq!(f.mul(f.div(a, b).unwrap(), b), a);
        }
    }

    #[test]
    fn frobenius_is_additive(a in any::<u128>(), b in any::<u128>(), i in 0usize..12) {
        let f = ExtensionField::new(5, 6).unwrap();
        let x = elems(&f, &[a, b]);
        prop_assert_eq!(
            f.frobenius(f.add(x[0], x[1]), i),
            f.add(f.frobenius(x[0], i), f.frobenius(x[1], i))
        );
        prop_assert_eq!(f.frobenius_inv(f.frobenius(x[0], i), i), x[0]);
    }

    #[test]
    fn rank_distance_is_a_metric(
        x in prop::collection::vec(any::<u128>(), 5),
        y in prop::collection::vec(any::<u128>(), 5),
        z in prop::collection::vec(any::<u128>(), 5),
    ) {
        let f = ExtensionField::new(2, 4).unwrap();
        let [x, y, z] = [x, y, z].map(|v| RankVector(elems(&f, &v)));
        let dxy = rank_distance(&f, &x, &y).unwrap();
        prop_assert_eq!(dxy, rank_distance(&f, &y, &x).unwrap());
        prop_assert_eq!(dxy == 0, x == y);
        prop_assert!(dxy <= rank_distance(&f, &x, &z).unwrap() + rank_distance(&f, &z, &y).unwrap());
        prop_assert!(dxy <= 4);
    }

    #[test]
    fn linearized_poly_is_linear(
        coeffs in prop::collection::vec(any::<u128>(), 1..5),
        a in any::<u128>(),
        b in any::<u128>(),
        c in 0u8..2,
    ) {
        let f = ExtensionField::new(2, 8).unwrap();
        let p = LinearizedPoly::from_coeffs(elems(&f, &coeffs));
        let x = elems(&f, &[a, b]);
        prop_assert_eq!(p.eval(&f, f.add(x[0], x[1])), f.add(p.eval(&f, x[0]), p.eval(&f, x[1])));
        prop_assert_eq!(p.eval(&f, f.scale(x[0], c)), f.scale(p.eval(&f, x[0]), c));
    }

    #[test]
    fn right_division_reconstructs(
        a in prop::collection::vec(any::<u128>(), 1..7),
        b in prop::collection::vec(any::<u128>(), 1..4),
    ) {
        let f = ExtensionField::new(3, 5).unwrap();
        let a = LinearizedPoly::from_coeffs(elems(&f, &a));
        let b = LinearizedPoly::from_coeffs(elems(&f, &b));
        prop_assume!(!b.is_zero());
        let (quot, rem) = a.right_divide(&f, &b).unwrap();
        prop_assert_eq!(quot.compose(&f, &b).add(&f, &rem), a);
        prop_assert!(rem.is_zero() || rem.q_degree() < b.q_degree());
    }

    #[test]
    fn encoding_is_linear(
        x in prop::collection::vec(any::<u128>(), 4),
        y in prop::collection::vec(any::<u128>(), 4),
    ) {
        let code = GabidulinCode::new(2, 8, 8, 4).unwrap();
        let f = code.field();
        let (x, y) = (elems(f, &x), elems(f, &y));
        let sum: Vec<FieldElement> = x.iter().zip(&y).map(|(&a, &b)| f.add(a, b)).collect();
        let cx = code.encode(&x).unwrap();
        let cy = code.encode(&y).unwrap();
        prop_assert_eq!(code.encode(&sum).unwrap(), cx.add(f, &cy).unwrap());
        prop_assert!(code.is_codeword(&cx).unwrap());
    }

    #[test]
    fn decoder_never_moves_beyond_radius(
        msg in prop::collection::vec(any::<u128>(), 2),
        noise in prop::collection::vec(any::<u128>(), 6),
    ) {
        let code = GabidulinCode::new(2, 6, 6, 2).unwrap();
        let f = code.field();
        let c = code.encode(&elems(f, &msg)).unwrap();
        let e = RankVector(elems(f, &noise));
        let y = c.add(f, &e).unwrap();
        let out = code.decode(&y).unwrap();
        if rank_norm(f, &e) <= code.t() {
            prop_assert_eq!(out.codeword(), Some(&c));
        } else if let Some(w) = out.codeword() {
            prop_assert!(code.is_codeword(w).unwrap());
            prop_assert!(rank_distance(f, w, &y).unwrap() <= code.t());
        }
    }
}
