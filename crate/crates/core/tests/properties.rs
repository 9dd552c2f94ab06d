use proptest::prelude::*;

use slowdiff_core::weyl::weyl_sum_signed;
use slowdiff_core::{BumpProfile, ChartPoint, FourierSeries, Harmonic, MapConfig, RotationNumber, Variant};

fn series() -> impl Strategy<Value = FourierSeries> {
    prop::collection::btree_map(1u64..12, (-1.0f64..1.0, -1.0f64..1.0), 1..4).prop_map(|hs| {
        let hs = hs.into_iter().map(|(m, (a, b))| Harmonic { m, a, b }).collect();
        FourierSeries::new(0.0, hs).unwrap()
    })
}

fn map(dim: usize) -> impl Strategy<Value = MapConfig> {
    (series(), 0.01f64..0.99).prop_map(move |(f, a)| {
        MapConfig::new(
            f,
            RotationNumber::explicit(a).unwrap(),
            BumpProfile::with_defaults(dim).unwrap(),
            Variant::Chart,
        )
        .unwrap()
    })
}

fn point(dim: usize) -> impl Strategy<Value = ChartPoint> {
    (0.0f64..1.0, 0.0f64..1.0, prop::collection::vec(-0.55f64..0.55, dim))
        .prop_map(|(p1, p2, u)| ChartPoint::new(p1, p2, u).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_undoes_apply(c in map(2), p in point(2)) {
        let back = c.f1_inverse(&c.f1_apply(&p).unwrap()).unwrap();
        prop_assert!(back.dist(&p) < 1e-12);
    }

    #[test]
    fn group_law(c in map(1), p in point(1), n in -300i64..300, m in -300i64..300) {
        let two = c.f1_iterate_closed(m, &c.f1_iterate_closed(n, &p).unwrap()).unwrap();
        let one = c.f1_iterate_closed(n + m, &p).unwrap();
        prop_assert!(two.dist(&one) < 1e-9);
    }

    #[test]
    fn signed_cocycle(f in series(), a in 0.0f64..1.0, x in 0.0f64..1.0, n in -500i64..500, m in -500i64..500) {
        let lhs = weyl_sum_signed(&f, a, n + m, x);
        let rhs = weyl_sum_signed(&f, a, n, x) + weyl_sum_signed(&f, a, m, x + n as f64 * a);
        prop_assert!((lhs - rhs).abs() < 1e-8);
    }

    #[test]
    fn jacobian_is_unimodular(c in map(3), p in point(3), m in -10_000i64..10_000) {
        let det = c.jacobian_closed(m, &p).unwrap().determinant();
        prop_assert!((det - 1.0).abs() < 1e-10);
    }
}
