//! Seeded random convex grid functions for the oracle sweeps.

use rand::Rng;

use crate::error::Result;
use crate::extended::ExtendedReal;
use crate::grid::{uniform_axis, GridFunction};

/// A convex function on a random 1-D grid, `+inf` outside a random
/// subinterval in a quarter of the draws, and sorted random dual points.
pub fn random_convex_1d<R: Rng>(rng: &mut R) -> Result<(GridFunction, Vec<f64>)> {
    let nodes = rng.random_range(5..=200);
    let axis = uniform_axis(
        rng.random_range(-5.0..-0.5),
        rng.random_range(0.5..5.0),
        nodes,
    );
    let q = rng.random_range(0.0..3.0);
    let c = rng.random_range(0.0..2.0);
    let s = rng.random_range(-2.0..2.0);
    let e = rng.random_range(0.0..1.0);
    let k = rng.random_range(-2.0..2.0);
    let b = rng.random_range(-3.0..3.0);
    let window = rng.random_bool(0.25).then(|| {
        let a = rng.random_range(0..nodes / 2);
        (a, rng.random_range(a + 1..nodes))
    });
    let values = axis
        .iter()
        .enumerate()
        .map(|(i, &y)| match window {
            Some((a, z)) if i < a || i > z => ExtendedReal::PosInf,
            _ => ExtendedReal::Finite(q * y * y + c * (y - s).abs() + e * (k * y).exp() + b * y),
        })
        .collect();
    let f = GridFunction::new(vec![axis], values)?;
    let mut duals: Vec<f64> = (0..rng.random_range(1..=60))
        .map(|_| rng.random_range(-20.0..20.0))
        .collect();
    duals.sort_by(f64::total_cmp);
    Ok((f, duals))
}

/// A convex function on a random 2-D grid and random dual axes.
pub fn random_convex_2d<R: Rng>(rng: &mut R) -> Result<(GridFunction, Vec<Vec<f64>>)> {
    let axes: Vec<Vec<f64>> = (0..2)
        .map(|_| {
            uniform_axis(
                rng.random_range(-4.0..-0.5),
                rng.random_range(0.5..4.0),
                rng.random_range(5..=40),
            )
        })
        .collect();
    let q0: f64 = rng.random_range(0.0..2.0);
    let q1: f64 = rng.random_range(0.0..2.0);
    let r = rng.random_range(-1.0..1.0) * 2.0 * (q0 * q1).sqrt();
    let c = rng.random_range(0.0..2.0);
    let s = rng.random_range(-1.0..1.0);
    let e = rng.random_range(0.0..1.0);
    let k = [rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5)];
    let f = GridFunction::from_fn(axes, |y| {
        q0 * y[0] * y[0]
            + q1 * y[1] * y[1]
            + r * y[0] * y[1]
            + c * (y[0] + y[1] - s).abs()
            + e * (k[0] * y[0] + k[1] * y[1]).exp()
    })?;
    let duals = (0..2)
        .map(|_| {
            uniform_axis(
                rng.random_range(-15.0..-1.0),
                rng.random_range(1.0..15.0),
                rng.random_range(3..=20),
            )
        })
        .collect();
    Ok((f, duals))
}
