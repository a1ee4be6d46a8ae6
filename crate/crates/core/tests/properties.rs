use conjlab::conjugate::{biconjugate, brute_conjugate, conjugate_nd, fast_conjugate_1d};
use conjlab::report::samples::{random_convex_1d, random_convex_2d};
use conjlab::seminorm::{psi_star_table, rho_seminorm, RealGrid, TestFunction};
use conjlab::weights::{make_radial_family, Condition, ProbeGrid, Profile};
use conjlab::{ExtendedReal, GridFunction, MultiIndex};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn deviation(a: ExtendedReal, b: ExtendedReal) -> f64 {
    match (a, b) {
        (ExtendedReal::Finite(x), ExtendedReal::Finite(y)) => (x - y).abs(),
        (ExtendedReal::PosInf, ExtendedReal::PosInf) => 0.0,
        _ => f64::INFINITY,
    }
}

fn sample_1d(seed: u64) -> (GridFunction, Vec<f64>) {
    let (f, mut d) = random_convex_1d(&mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
    d.dedup();
    (f, d)
}

fn column(d: &[f64]) -> Vec<Vec<f64>> {
    d.iter().map(|&x| vec![x]).collect()
}

fn test_function() -> impl Strategy<Value = TestFunction> {
    (0.3f64..1.0, 0u32..3).prop_map(|(a, k)| TestFunction::hermite_gaussian(k, a, 1).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fast_1d_agrees_with_brute(seed in any::<u64>()) {
        let (f, d) = sample_1d(seed);
        let fast = fast_conjugate_1d(&f, &d).unwrap();
        let brute = brute_conjugate(&f, &column(&d)).unwrap();
        for (a, b) in fast.iter().zip(&brute) {
            prop_assert!(deviation(*a, *b) <= 1e-10);
        }
    }

    #[test]
    fn nd_agrees_with_brute(seed in any::<u64>()) {
        let (f, axes) = random_convex_2d(&mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let g = conjugate_nd(&f, &axes).unwrap();
        let nodes: Vec<Vec<f64>> = (0..g.len()).map(|i| g.node(i)).collect();
        let brute = brute_conjugate(&f, &nodes).unwrap();
        for (a, b) in g.values().iter().zip(&brute) {
            prop_assert!(deviation(*a, *b) <= 1e-10);
        }
    }

    #[test]
    fn conjugation_reverses_order(seed in any::<u64>(), bump in 0.0f64..3.0) {
        let (f, d) = sample_1d(seed);
        let g = GridFunction::from_fn(f.axes().to_vec(), |y| {
            let i = f.axis(0).iter().position(|&a| a == y[0]).unwrap();
            f.value(i).to_f64() + bump * (1.0 + y[0].sin().abs())
        }).unwrap();
        let (fs, gs) = (fast_conjugate_1d(&f, &d).unwrap(), fast_conjugate_1d(&g, &d).unwrap());
        for (a, b) in fs.iter().zip(&gs) {
            if let (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) = (a, b) {
                prop_assert!(a + 1e-12 >= *b);
            }
        }
    }

    #[test]
    fn linear_tilt_shifts_the_conjugate(seed in any::<u64>(), b in -2.0f64..2.0, c in -5.0f64..5.0) {
        let (f, d) = sample_1d(seed);
        let values = f.iter().map(|(y, v)| match v {
            ExtendedReal::Finite(v) => ExtendedReal::Finite(v + b * y[0] + c),
            inf => inf,
        }).collect();
        let g = GridFunction::new(f.axes().to_vec(), values).unwrap();
        let shifted: Vec<f64> = d.iter().map(|x| x - b).collect();
        let lhs = brute_conjugate(&g, &column(&d)).unwrap();
        let rhs = brute_conjugate(&f, &column(&shifted)).unwrap();
        for (l, r) in lhs.iter().zip(&rhs) {
            prop_assert!((l.to_f64() - (r.to_f64() - c)).abs() <= 1e-9 * (1.0 + l.to_f64().abs()));
        }
    }

    #[test]
    fn fenchel_young_and_biconjugate_below(seed in any::<u64>()) {
        let (f, d) = sample_1d(seed);
        let star = fast_conjugate_1d(&f, &d).unwrap();
        for (y, v) in f.iter() {
            if let ExtendedReal::Finite(v) = v {
                for (x, s) in d.iter().zip(&star) {
                    prop_assert!(v + s.to_f64() >= x * y[0] - 1e-9 * (1.0 + (x * y[0]).abs()));
                }
            }
        }
        let bi = biconjugate(&f).unwrap();
        for i in 0..f.len() {
            if let ExtendedReal::Finite(v) = f.value(i) {
                prop_assert!(bi.value(i).to_f64() <= v + 1e-9 * (1.0 + v.abs()));
            }
        }
    }

    #[test]
    fn first_differences_match_next_derivative(f in test_function(), x in -4.0f64..4.0, k in 1u32..=6) {
        let h = 1e-4;
        let lower = MultiIndex::new(vec![k - 1]);
        let fd = (f.derivative(&lower, &[x + h]) - f.derivative(&lower, &[x - h])) / (2.0 * h);
        let exact = f.derivative(&MultiIndex::new(vec![k]), &[x]);
        prop_assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn rho_seminorm_scales_and_grows_in_m(f in test_function(), c in -4.0f64..4.0) {
        prop_assume!(c.abs() > 1e-3);
        let fam = make_radial_family(Profile::Square, 2.0, 1).unwrap();
        let table = psi_star_table(&fam, 1, 12).unwrap();
        let grid = RealGrid { radius: 6.0, nodes: 241 };
        let values: Vec<f64> = (0..=2).map(|m| rho_seminorm(&f, &table, m, &grid, 12).unwrap().value).collect();
        for w in values.windows(2) {
            prop_assert!(w[1] >= w[0] * (1.0 - 1e-12));
        }
        let scaled = rho_seminorm(&f.scaled(c).unwrap(), &table, 1, &grid, 12).unwrap().value;
        prop_assert!((scaled - c.abs() * values[1]).abs() <= 1e-12 * c.abs() * values[1]);
    }

    #[test]
    fn refined_grids_never_lower_estimates(nu in 0u32..3, nodes in 11usize..60, which in 0usize..4) {
        let fam = make_radial_family(Profile::ExpMinusOne, 2.0, 1).unwrap();
        let c = [Condition::I0 { a: 1.0 }, Condition::I2, Condition::I3, Condition::I4][which];
        let grid = ProbeGrid { radius: 8.0, nodes };
        let coarse = fam.estimate(c, nu, &grid).unwrap().value;
        let fine = fam.estimate(c, nu, &grid.refined()).unwrap().value;
        prop_assert!(fine >= coarse);
    }
}
