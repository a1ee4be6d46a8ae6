//! Closed-form values against the numerical routes.

use approx::assert_relative_eq;
use conjlab::conjugate::{
    brute_conjugate, discrete_log_conjugate, duality_gap, fast_conjugate_1d,
    lattice_conjugate_table,
};
use conjlab::fourier::{
    closed_form_transform, fourier, stirling_certified, surface_constant, QuadratureSpec,
};
use conjlab::grid::uniform_axis;
use conjlab::numerics::optimize::SearchConfig;
use conjlab::seminorm::TestFunction;
use conjlab::weights::{Profile, WeightFunction};
use conjlab::{ExtendedReal, GridFunction, MultiIndex};
use statrs::function::factorial::binomial;
use statrs::function::gamma::gamma;

#[test]
fn half_square_is_self_conjugate_up_to_mesh() {
    let axis = uniform_axis(-5.0, 5.0, 1001);
    let h = axis[1] - axis[0];
    let f = GridFunction::from_fn(vec![axis], |y| 0.5 * y[0] * y[0]).unwrap();
    let duals = uniform_axis(-4.0, 4.0, 97);
    for (x, v) in duals.iter().zip(fast_conjugate_1d(&f, &duals).unwrap()) {
        let exact = 0.5 * x * x;
        assert!(v.to_f64() <= exact + 1e-12);
        assert!(exact - v.to_f64() <= h * h / 8.0 + 1e-12);
    }
}

#[test]
fn exponential_conjugates_to_entropy() {
    let f = GridFunction::from_fn(vec![uniform_axis(-12.0, 4.0, 16001)], |y| y[0].exp()).unwrap();
    let duals = [0.05, 0.5, 1.0, 3.0, 20.0];
    for (&x, v) in duals.iter().zip(fast_conjugate_1d(&f, &duals).unwrap()) {
        assert_relative_eq!(
            v.to_f64(),
            x * x.ln() - x,
            epsilon = 1e-5,
            max_relative = 1e-5
        );
    }
}

#[test]
fn absolute_value_conjugates_to_indicator_on_the_box() {
    let f = GridFunction::from_fn(vec![uniform_axis(-50.0, 50.0, 201)], |y| y[0].abs()).unwrap();
    let duals = [-1.0, -0.3, 0.0, 0.7, 1.0];
    for v in fast_conjugate_1d(&f, &duals).unwrap() {
        assert_eq!(v, ExtendedReal::Finite(0.0));
    }
    // Slope 2 grows like (2 - 1)·R on the truncated box.
    assert_relative_eq!(fast_conjugate_1d(&f, &[2.0]).unwrap()[0].to_f64(), 50.0);
}

#[test]
fn brute_conjugate_skips_infinite_nodes() {
    let values = vec![
        ExtendedReal::PosInf,
        ExtendedReal::Finite(1.0),
        ExtendedReal::Finite(0.0),
        ExtendedReal::PosInf,
    ];
    let f = GridFunction::new(vec![vec![-2.0, -1.0, 0.0, 1.0]], values).unwrap();
    let v = brute_conjugate(&f, &[vec![3.0], vec![-3.0]]).unwrap();
    assert_eq!(
        v,
        vec![ExtendedReal::Finite(0.0), ExtendedReal::Finite(2.0)]
    );
}

#[test]
fn log_conjugate_of_square_matches_closed_form() {
    // g(e^t) = e^{2t}, so sup_t (α t - e^{2t}) = (α/2)(ln(α/2) - 1).
    let g = WeightFunction::radial(Profile::Square, 1.0, 1).unwrap();
    let cfg = SearchConfig::default();
    for alpha in [1.0f64, 2.0, 5.0, 12.0] {
        let v = discrete_log_conjugate(&g, &[alpha], &cfg).unwrap().to_f64();
        assert_relative_eq!(v, 0.5 * alpha * ((0.5 * alpha).ln() - 1.0), epsilon = 1e-9);
    }
    assert_relative_eq!(
        discrete_log_conjugate(&g, &[0.0], &cfg).unwrap().to_f64(),
        0.0
    );
    let table = lattice_conjugate_table(&g, 6, &cfg).unwrap();
    let at = |a: u32| table.get(&MultiIndex::new(vec![a])).unwrap();
    assert_relative_eq!(at(2), -1.0, epsilon = 1e-9);
}

#[test]
fn square_duality_gap_vanishes() {
    let u = WeightFunction::radial(Profile::Square, 1.0, 1).unwrap();
    let cfg = SearchConfig::default();
    for x in [0.0, 0.3, 1.0, 4.0, 7.5] {
        assert!(
            duality_gap(&u, &[x], &cfg).unwrap().abs() <= 1e-6,
            "x = {x}"
        );
    }
}

#[test]
fn gaussian_transform_quadrature_matches_closed_form() {
    let f = TestFunction::gaussian(0.5, 1).unwrap();
    let spec = QuadratureSpec::for_function(&f, 0).unwrap();
    let points: Vec<Vec<f64>> = [-3.0, 0.0, 0.5, 2.0].iter().map(|&x| vec![x]).collect();
    let zero = MultiIndex::zero(1);
    for (x, v) in points.iter().zip(fourier(&f, &spec, &points).unwrap()) {
        let exact = (2.0 * std::f64::consts::PI).sqrt() * (-0.5 * x[0] * x[0]).exp();
        assert_relative_eq!(v.value().re, exact, epsilon = 1e-12);
        assert_relative_eq!(
            closed_form_transform(&f, &zero, x).re,
            exact,
            epsilon = 1e-14
        );
    }
}

#[test]
fn surface_constants_match_gamma_formula() {
    for n in 1..=3 {
        let expected = 2.0 * std::f64::consts::PI.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0);
        assert_relative_eq!(
            surface_constant(n).unwrap().s_n,
            expected,
            max_relative = 1e-14
        );
    }
}

#[test]
fn binomial_below_exponential_agrees_with_certificate() {
    for m1 in 0..=20u64 {
        for m2 in 0..=20u64 {
            let k = m1 + m2;
            assert!(binomial(k, m1) <= (k as f64).exp());
            assert!(stirling_certified(m1 as u32, m2 as u32));
        }
    }
}

#[test]
fn gaussian_derivatives_match_hand_formulas() {
    let f = TestFunction::gaussian(0.5, 1).unwrap();
    let x = 1.3f64;
    let e = (-0.5 * x * x).exp();
    let d = |k: u32| f.derivative(&MultiIndex::new(vec![k]), &[x]);
    assert_relative_eq!(d(1), -x * e, epsilon = 1e-14);
    assert_relative_eq!(d(2), (x * x - 1.0) * e, epsilon = 1e-14);
    assert_relative_eq!(d(3), (3.0 * x - x.powi(3)) * e, epsilon = 1e-14);
}
