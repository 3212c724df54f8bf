use bidisk::bipoly::{sup_norm_torus, Var};
use bidisk::funcalc::{difference_direct, identity_rhs};
use bidisk::matnum::{op_norm, schatten_norm};
use bidisk::pairs::{gen_pair, perturb_pair};
use bidisk::{BiPolynomial, LittlewoodPaley, MatrixOperator, PairScheme, SchemeKind, TrigPolynomial2D, C64};
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = C64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| C64::new(a, b))
}

fn matrix(d: usize) -> impl Strategy<Value = MatrixOperator> {
    prop::collection::vec(complex(), d * d).prop_map(move |v| MatrixOperator::from_vec(d, d, v))
}

fn poly(max_deg: usize) -> impl Strategy<Value = BiPolynomial> {
    (0..=max_deg, 0..=max_deg).prop_flat_map(|(d1, d2)| {
        prop::collection::vec(complex(), (d1 + 1) * (d2 + 1))
            .prop_map(move |c| BiPolynomial::new(d1, d2, c).unwrap())
    })
}

fn scheme() -> impl Strategy<Value = SchemeKind> {
    prop_oneof![Just(SchemeKind::Diagonal), Just(SchemeKind::Poly), Just(SchemeKind::Triangular)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schatten_norms_decrease_in_p(m in matrix(5)) {
        let ps = [1.0, 1.5, 2.0, 3.0, 4.0, 8.0, f64::INFINITY];
        for w in ps.windows(2) {
            prop_assert!(schatten_norm(&m, w[1]).unwrap() <= schatten_norm(&m, w[0]).unwrap() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn schatten_norms_are_unitarily_invariant(m in matrix(4), g in matrix(4), p in 1.0..6.0f64) {
        let u = g.clone().qr().q();
        let v = (&g * &g.adjoint() + MatrixOperator::identity(4, 4)).qr().q();
        let a = schatten_norm(&m, p).unwrap();
        let b = schatten_norm(&(&u * &m * &v), p).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a.max(1.0));
    }

    #[test]
    fn schatten_triangle_inequality(a in matrix(4), b in matrix(4), p in 1.0..6.0f64) {
        let lhs = schatten_norm(&(&a + &b), p).unwrap();
        prop_assert!(lhs <= (schatten_norm(&a, p).unwrap() + schatten_norm(&b, p).unwrap()) * (1.0 + 1e-12));
    }

    #[test]
    fn shifts_are_linear(f in poly(5), g in poly(5), s in complex(), j in 0usize..7) {
        for var in [Var::Z1, Var::Z2] {
            let lhs = f.add(&g.scale(s)).shift_power(var, j);
            let rhs = f.shift_power(var, j).add(&g.shift_power(var, j).scale(s));
            for k in 0..=6 {
                for m in 0..=6 {
                    prop_assert!((lhs.coeff(k, m) - rhs.coeff(k, m)).norm() <= 1e-14);
                }
            }
        }
    }

    #[test]
    fn identity_holds_on_random_pairs(f in poly(6), kind in scheme(), d in 1usize..9, seed in any::<u64>(), eps in 0.0..0.6f64) {
        let g1 = gen_pair(&PairScheme { kind, dim: d, seed, perturbation_scale: eps }).unwrap();
        let g2 = perturb_pair(&g1, eps, seed ^ 1).unwrap();
        let direct = difference_direct(&f, &g1.pair, &g2.pair).unwrap();
        let rhs = identity_rhs(&f, &g1.pair, &g2.pair).unwrap();
        prop_assert!(op_norm(&(rhs - &direct)) <= 1e-9 * (1e-12 + op_norm(&direct)) + 1e-13);
    }

    #[test]
    fn identity_rhs_is_linear_in_f(f in poly(4), g in poly(4), kind in scheme(), seed in any::<u64>()) {
        let g1 = gen_pair(&PairScheme { kind, dim: 3, seed, perturbation_scale: 0.1 }).unwrap();
        let g2 = gen_pair(&PairScheme { kind, dim: 3, seed: seed.wrapping_add(1), perturbation_scale: 0.1 }).unwrap();
        let sum = identity_rhs(&f.add(&g), &g1.pair, &g2.pair).unwrap();
        let parts = identity_rhs(&f, &g1.pair, &g2.pair).unwrap() + identity_rhs(&g, &g1.pair, &g2.pair).unwrap();
        prop_assert!(op_norm(&(sum - parts)) <= 1e-12 * (1.0 + f.l1_norm() + g.l1_norm()));
    }

    #[test]
    fn sup_norm_is_subadditive(f in poly(4), g in poly(4)) {
        let a = sup_norm_torus(&f.add(&g), 8).grid_max;
        let b = sup_norm_torus(&f, 8).grid_max + sup_norm_torus(&g, 8).grid_max;
        prop_assert!(a <= b * (1.0 + 1e-9) + 1e-12);
    }

    #[test]
    fn holder_norm_is_a_norm(f in poly(6), s in complex(), alpha in 0.05..0.95f64) {
        let lp = LittlewoodPaley::default();
        let tf = TrigPolynomial2D::from(&f);
        let scaled = lp.holder_norm(&tf.scale(s), alpha).unwrap();
        prop_assert!((scaled - s.norm() * lp.holder_norm(&tf, alpha).unwrap()).abs() <= 1e-9 * (1.0 + scaled));
    }
}
