use proptest::prelude::*;
use rlsnet::geometry::hausdorff;
use rlsnet::grid::{BoundarySpec, Grid};
use rlsnet::regional::{construct, reconstruct, Indicator, RegionalField};
use rlsnet::reinit::{reinitialize, ReinitPlan};
use rlsnet::schemes::{one_sided, SchemeKind};
use rlsnet::transport::{advance, Operator, RkOrder, StepPlan, VelocitySpec};

fn point() -> impl Strategy<Value = [f64; 2]> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(x, y)| [x, y])
}

/// Three regions cut by two random lines through the unit square.
fn three_regions(n: usize, a: [f64; 2], b: f64, periodic: bool) -> RegionalField {
    let bc = if periodic { BoundarySpec::periodic() } else { BoundarySpec::symmetry() };
    let g = Grid::unit_square(n, bc).unwrap();
    RegionalField::from_fn(g, |p| {
        let d1 = p[0] - a[0] - 0.3 * (p[1] - 0.5);
        let d2 = p[1] - a[1];
        let (chi, d) = if d1 < 0.0 {
            (1, -d1)
        } else if d2 < 0.0 {
            (2, d1.min(-d2))
        } else {
            (3, d1.min(d2))
        };
        (d * b, chi)
    })
}

proptest! {
    #[test]
    fn construct_then_reconstruct(varphi in 1e-6..10.0f64, chi in 1u32..6, extra in proptest::collection::btree_set(1u32..9, 0..5)) {
        let mut set: Vec<Indicator> = extra.into_iter().collect();
        if !set.contains(&chi) {
            set.push(chi);
        }
        let values: Vec<f64> = set.iter().map(|&r| construct(varphi, chi, r)).collect();
        prop_assert_eq!(reconstruct(&values, &set).unwrap(), (varphi, chi));
    }

    #[test]
    fn reconstruct_picks_a_maximum(values in proptest::collection::vec(-5.0..5.0f64, 1..6)) {
        let ind: Vec<Indicator> = (1..=values.len() as u32).collect();
        let (v, c) = reconstruct(&values, &ind).unwrap();
        let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(v >= 0.0);
        prop_assert_eq!(v, max.abs());
        prop_assert_eq!(values[(c - 1) as usize], max);
    }

    #[test]
    fn ghost_fill_is_idempotent(seed in any::<u64>(), periodic in any::<bool>(), n in 8usize..20) {
        let bc = if periodic { BoundarySpec::periodic() } else { BoundarySpec::symmetry() };
        let g = Grid::unit_square(n, bc).unwrap();
        let mut data: Vec<u64> = (0..g.padded_len() as u64).map(|k| k.wrapping_mul(seed | 1)).collect();
        g.fill_ghosts(&mut data);
        let once = data.clone();
        g.fill_ghosts(&mut data);
        prop_assert_eq!(once, data);
    }

    #[test]
    fn hausdorff_symmetric(a in proptest::collection::vec(point(), 1..20), b in proptest::collection::vec(point(), 1..20)) {
        let ab = hausdorff(&a, &b).unwrap();
        prop_assert_eq!(ab, hausdorff(&b, &a).unwrap());
        prop_assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
        // Brute force over both directions.
        let directed = |p: &[[f64; 2]], q: &[[f64; 2]]| {
            p.iter()
                .map(|x| q.iter().map(|y| (x[0] - y[0]).hypot(x[1] - y[1])).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max)
        };
        prop_assert!((ab - directed(&a, &b).max(directed(&b, &a))).abs() < 1e-12);
    }

    #[test]
    fn weno_exact_on_linear_data(slope in -10.0..10.0f64, offset in -5.0..5.0f64, h in 1e-3..0.1f64) {
        let s: [f64; 7] = std::array::from_fn(|k| offset + slope * (k as f64 - 3.0) * h);
        for scheme in [SchemeKind::Upwind1, SchemeKind::Weno5, SchemeKind::WenoCu6] {
            let d = one_sided(scheme, &s, h);
            prop_assert!((d.minus - slope).abs() < 1e-8 * (1.0 + slope.abs()), "{scheme} {}", d.minus);
            prop_assert!((d.plus - slope).abs() < 1e-8 * (1.0 + slope.abs()), "{scheme} {}", d.plus);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn reinit_keeps_indicators(x in 0.3..0.7f64, y in 0.3..0.7f64, scale in 0.5..3.0f64) {
        let f = three_regions(24, [x, y], scale, false);
        let out = reinitialize(&f, &ReinitPlan::default());
        prop_assert_eq!(&out.chi, &f.chi);
        prop_assert!(out.varphi.iter().all(|v| v.is_finite() && *v >= 0.0));
    }

    #[test]
    fn zero_velocity_changes_nothing(x in 0.3..0.7f64, y in 0.3..0.7f64, periodic in any::<bool>(), pick in 0usize..4) {
        let f = three_regions(20, [x, y], 1.0, periodic);
        let scheme = SchemeKind::ALL[pick];
        let plan = StepPlan { dt: 0.01, rk: RkOrder::Ssp3, scheme, operator: Operator::CrStar };
        let out = advance(&f, &VelocitySpec::Uniform([0.0, 0.0]), &plan, 0.0, None).unwrap();
        prop_assert!(out.chi == f.chi);
        // Runge-Kutta stage weights recombine the same value up to rounding.
        let worst = out.varphi.iter().zip(&f.varphi).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(worst < 1e-15, "worst {worst:e}");
    }
}
