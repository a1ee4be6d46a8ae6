//! The checks behind each command, grouped into independent sections.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::check::{worst, InequalityRecord};
use crate::conjugate::lemmas::{
    corollary2_suite, lemma1_suite, lemma2_suite, lemma3_suite, lemma5_ratios, lemma6_suite,
};
use crate::conjugate::{
    biconjugate, brute_conjugate, conjugate_nd, duality_sum, fast_conjugate_1d,
    lattice_conjugate_table, log_entropy, series_partial_sums, SeriesMode,
};
use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::fourier::{
    closed_form_transform, fourier, fourier_derivative, fourier_on_grid, inverse_fourier,
    parseval_check, surface_constant, verify_contour_shift, verify_pre_supremum, verify_stirling,
    verify_theorem3_bound, BlockSettings, QuadratureSpec, TransformTable,
};
use crate::grid::{uniform_axis, GridFunction};
use crate::multi_index::MultiIndex;
use crate::numerics::optimize::SearchConfig;
use crate::seminorm::{
    conjugate_on_grid, derivative_decay, g_seminorm, log_shift_suite, p_seminorm, psi_star_table,
    q_seminorm, rho_seminorm, taylor_extend, verify_embedding_chain, verify_theorem4_equivalence,
    ChainSettings, Factor, SeminormReport, TestFunction, TestFunctionSpec,
};
use crate::weights::conditions::composition_midpoint_check;
use crate::weights::{
    bump_mollifier, check_class_a, grid_sup, mollify, verify_mollify_chain, Condition, FamilySpec,
    FnWeight, ProbeGrid, Profile, Weight, WeightFamily, WeightFunction, DEFAULT_QUADRATURE_ORDER,
};

use super::{CheckRecord, Command, PlotData, Tolerances};

pub(crate) struct Context {
    pub seed: u64,
    pub tol: Tolerances,
    pub dims: Vec<usize>,
    pub profiles: Vec<String>,
    pub points: usize,
    pub oracle_samples: usize,
    pub family: Option<FamilySpec>,
    pub test_function: Option<TestFunctionSpec>,
    pub grid: Option<GridFunction>,
}

/// A file written next to the report.
pub(crate) enum Artifact {
    Transform { name: String, table: TransformTable },
    Conjugate { name: String, grid: GridFunction },
}

#[derive(Default)]
pub(crate) struct Output {
    pub records: Vec<CheckRecord>,
    pub plots: BTreeMap<String, PlotData>,
    pub artifacts: Vec<Artifact>,
}

impl Output {
    pub fn merge(&mut self, other: Output) {
        self.records.extend(other.records);
        self.plots.extend(other.plots);
        self.artifacts.extend(other.artifacts);
    }

    fn push(&mut self, r: CheckRecord) {
        self.records.push(r);
    }

    /// Runs `f`, turning an error into one failed record.
    fn guard(&mut self, id: &str, anchor: &str, f: impl FnOnce(&mut Output) -> Result<()>) {
        if let Err(e) = f(self) {
            self.records
                .push(CheckRecord::error(format!("{id}.error"), anchor, &e));
        }
    }
}

pub(crate) type Section = fn(&Context) -> Output;

pub(crate) fn sections(command: Command) -> Vec<Section> {
    match command {
        Command::Conjugate => vec![conjugate_section],
        Command::Duality => vec![duality_section],
        Command::FamilyCheck => vec![family_section, mollifier_section],
        Command::Seminorm => vec![seminorm_section],
        Command::Embedding => vec![embedding_section],
        Command::FourierVerify => vec![fourier_section],
        Command::FullSuite => vec![
            conjugate_section,
            duality_section,
            family_section,
            mollifier_section,
            seminorm_section,
            embedding_section,
            fourier_section,
        ],
    }
}

/// An independent random stream per section and sub-check.
fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn random_point(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

fn ext_deviation(a: ExtendedReal, b: ExtendedReal) -> f64 {
    match (a, b) {
        (ExtendedReal::Finite(x), ExtendedReal::Finite(y)) => (x - y).abs(),
        (ExtendedReal::PosInf, ExtendedReal::PosInf) => 0.0,
        _ => f64::INFINITY,
    }
}

fn product_points(axis: &[f64], n: usize) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

fn worst_record(id: String, anchor: &str, records: &[InequalityRecord], tol: f64) -> CheckRecord {
    match worst(records) {
        Some(w) => CheckRecord::new(id, anchor)
            .margin(w.margin, tol)
            .witness(&json!({ "worst": w, "checked": records.len() })),
        None => CheckRecord::new(id, anchor).witness(&json!({ "error": "no points checked" })),
    }
}

/// Keyed test functions of dimension `n`: the input function when one was
/// given, otherwise the built-ins (`all` adds the odd Hermite and polynomial
/// cases).
fn test_functions(ctx: &Context, n: usize, all: bool) -> Result<Vec<(String, TestFunction)>> {
    if let Some(spec) = &ctx.test_function {
        let f = TestFunction::from_spec(spec)?;
        return Ok(if f.dim() == n {
            vec![("input".into(), f)]
        } else {
            Vec::new()
        });
    }
    let mut out = vec![
        ("gauss".to_string(), TestFunction::gaussian(0.5, n)?),
        (
            "herm2".to_string(),
            TestFunction::hermite_gaussian(2, 0.5, n)?,
        ),
    ];
    if all {
        out.push(("herm1".into(), TestFunction::hermite_gaussian(1, 0.5, n)?));
        out.push((
            "poly".into(),
            TestFunction::poly_gaussian(vec![1.0, 0.0, 1.0], 0.5, n)?,
        ));
    }
    Ok(out)
}

/// Keyed radial families of dimension `n` with their bases.
fn families(
    ctx: &Context,
    n: usize,
    with_exp: bool,
) -> Result<Vec<(String, Arc<WeightFamily>, f64)>> {
    if let Some(spec) = &ctx.family {
        return Ok(if spec.dim == n {
            vec![(
                "input".into(),
                Arc::new(WeightFamily::from_spec(spec)?),
                spec.base,
            )]
        } else {
            Vec::new()
        });
    }
    let mut out = vec![(
        "t2".to_string(),
        Arc::new(crate::weights::make_radial_family(Profile::Square, 2.0, n)?),
        2.0,
    )];
    if with_exp {
        out.push((
            "exp".into(),
            Arc::new(crate::weights::make_radial_family(
                Profile::ExpMinusOne,
                2.0,
                n,
            )?),
            2.0,
        ));
    }
    Ok(out)
}

// ---------------------------------------------------------------- conjugate

fn conjugate_section(ctx: &Context) -> Output {
    let mut out = Output::default();
    for &n in &ctx.dims {
        out.guard(
            &format!("conjugate.oracle.n{n}"),
            "Young-Fenchel conjugate",
            |o| oracle_checks(ctx, n, o),
        );
        out.guard(
            &format!("conjugate.biconjugate.n{n}"),
            "Proposition 1",
            |o| involutivity_checks(ctx, n, o),
        );
    }
    out.guard("conjugate.order-reversal", "Young-Fenchel conjugate", |o| {
        order_reversal(ctx, o)
    });
    out.guard("conjugate.curve", "Young-Fenchel conjugate", |o| {
        conjugate_curve(o)
    });
    if let Some(grid) = &ctx.grid {
        out.guard("conjugate.input", "Young-Fenchel conjugate", |o| {
            input_conjugate(ctx, grid, o)
        });
    }
    out
}

fn oracle_checks(ctx: &Context, n: usize, out: &mut Output) -> Result<()> {
    let mut r = rng(ctx.seed, 100 + n as u64);
    let mut worst = (0.0f64, 0usize, Vec::new());
    let mut checked = 0usize;
    for sample in 0..ctx.oracle_samples {
        let (f, duals) = if n == 1 {
            let (f, mut d) = super::samples::random_convex_1d(&mut r)?;
            d.dedup();
            (f, vec![d])
        } else {
            super::samples::random_convex_2d(&mut r)?
        };
        let nd = conjugate_nd(&f, &duals)?;
        let points: Vec<Vec<f64>> = (0..nd.len()).map(|i| nd.node(i)).collect();
        let brute = brute_conjugate(&f, &points)?;
        let mut candidates: Vec<Vec<ExtendedReal>> = vec![nd.values().to_vec()];
        if n == 1 {
            candidates.push(fast_conjugate_1d(&f, &duals[0])?);
        }
        for values in candidates {
            for (i, (a, b)) in values.iter().zip(&brute).enumerate() {
                checked += 1;
                let d = ext_deviation(*a, *b);
                if d > worst.0 || d.is_nan() {
                    worst = (d, sample, points[i].clone());
                }
            }
        }
    }
    out.push(
        CheckRecord::new(format!("conjugate.oracle.n{n}"), "Young-Fenchel conjugate")
            .deviation(worst.0, ctx.tol.oracle)
            .witness(&json!({ "sample": worst.1, "dual_point": worst.2, "comparisons": checked }))
            .truncation(&json!({ "samples": ctx.oracle_samples })),
    );
    Ok(())
}

type Sample = (&'static str, fn(&[f64]) -> f64);

fn involutivity_checks(ctx: &Context, n: usize, out: &mut Output) -> Result<()> {
    let (samples, levels): (Vec<Sample>, [usize; 3]) = if n == 1 {
        (
            vec![
                ("y4", |y| y[0].powi(4)),
                ("exp", |y| y[0].exp()),
                ("cosh-cubic", |y| y[0].cosh() + y[0].powi(3) / 10.0),
            ],
            [101, 201, 401],
        )
    } else {
        (
            vec![
                ("r4", |y| (y[0] * y[0] + y[1] * y[1]).powi(2)),
                ("exp-sum", |y| y[0].exp() + y[1].exp()),
                ("cosh-coupled", |y| {
                    y[0].cosh() + y[1].cosh() + 0.5 * y[0] * y[1]
                }),
            ],
            [21, 41, 81],
        )
    };
    for (key, f) in samples {
        let errors = levels
            .iter()
            .map(|&m| {
                let axis = uniform_axis(-2.0, 2.0, m);
                let g = GridFunction::from_fn(vec![axis; n], f)?;
                let bi = biconjugate(&g)?;
                Ok((0..g.len())
                    .filter(|&i| !g.on_boundary(i))
                    .map(|i| ext_deviation(bi.value(i), g.value(i)))
                    .fold(0.0, f64::max))
            })
            .collect::<Result<Vec<f64>>>()?;
        let ratios: Vec<f64> = errors.windows(2).map(|w| w[0] / w[1]).collect();
        let min_ratio = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        out.push(
            CheckRecord::new(format!("conjugate.biconjugate.n{n}.{key}"), "Proposition 1")
                .at_least(min_ratio, ctx.tol.halving_ratio)
                .witness(&json!({ "errors": errors, "ratios": ratios }))
                .truncation(&json!({ "box": [-2.0, 2.0], "nodes": levels })),
        );
    }
    Ok(())
}

fn order_reversal(ctx: &Context, out: &mut Output) -> Result<()> {
    let mut r = rng(ctx.seed, 103);
    let mut worst = (f64::INFINITY, 0usize);
    for sample in 0..20 {
        let (f, mut duals) = super::samples::random_convex_1d(&mut r)?;
        duals.dedup();
        let bumped = f
            .values()
            .iter()
            .map(|v| match v {
                ExtendedReal::Finite(x) => ExtendedReal::Finite(x + r.random_range(0.0..2.0)),
                inf => *inf,
            })
            .collect();
        let g = GridFunction::new(f.axes().to_vec(), bumped)?;
        let (fs, gs) = (
            fast_conjugate_1d(&f, &duals)?,
            fast_conjugate_1d(&g, &duals)?,
        );
        for (a, b) in fs.iter().zip(&gs) {
            let m = match (a, b) {
                (ExtendedReal::Finite(x), ExtendedReal::Finite(y)) => x - y,
                (ExtendedReal::PosInf, _) => f64::INFINITY,
                (ExtendedReal::Finite(_), ExtendedReal::PosInf) => f64::NEG_INFINITY,
            };
            if m < worst.0 {
                worst = (m, sample);
            }
        }
    }
    out.push(
        CheckRecord::new("conjugate.order-reversal", "Young-Fenchel conjugate")
            .margin(worst.0, ctx.tol.oracle)
            .witness(&json!({ "sample": worst.1 }))
            .truncation(&json!({ "samples": 20 })),
    );
    Ok(())
}

/// `(y²/2)*` on a grid with mesh `h`: the discrete conjugate is below `x²/2`
/// by at most `h²/8`.
fn conjugate_curve(out: &mut Output) -> Result<()> {
    let axis = uniform_axis(-4.0, 4.0, 401);
    let h = axis[1] - axis[0];
    let f = GridFunction::from_fn(vec![axis], |y| 0.5 * y[0] * y[0])?;
    let duals = uniform_axis(-3.0, 3.0, 61);
    let values = fast_conjugate_1d(&f, &duals)?;
    let mut plot = PlotData::new(&["x", "conjugate"]);
    let mut dev = 0.0f64;
    for (&x, v) in duals.iter().zip(&values) {
        plot.rows.push(vec![x, v.to_f64()]);
        dev = dev.max((v.to_f64() - 0.5 * x * x).abs());
    }
    out.plots.insert("conjugate-curve".into(), plot);
    out.push(
        CheckRecord::new("conjugate.curve.half-square", "Young-Fenchel conjugate")
            .deviation(dev, h * h / 8.0)
            .truncation(&json!({ "primal": [-4.0, 4.0, 401], "dual": [-3.0, 3.0, 61] })),
    );
    Ok(())
}

fn input_conjugate(ctx: &Context, grid: &GridFunction, out: &mut Output) -> Result<()> {
    let duals = crate::conjugate::slope_dual_axes(grid);
    let star = conjugate_nd(grid, &duals)?;
    let points: Vec<Vec<f64>> = (0..star.len()).map(|i| star.node(i)).collect();
    let brute = brute_conjugate(grid, &points)?;
    let dev = star
        .values()
        .iter()
        .zip(&brute)
        .map(|(a, b)| ext_deviation(*a, *b))
        .fold(0.0, f64::max);
    out.push(
        CheckRecord::new("conjugate.input.oracle", "Young-Fenchel conjugate")
            .deviation(dev, ctx.tol.oracle)
            .truncation(&json!({ "shape": grid.shape(), "dual_shape": star.shape() })),
    );
    out.artifacts.push(Artifact::Conjugate {
        name: "conjugate-input.csv".into(),
        grid: star,
    });
    Ok(())
}

// ----------------------------------------------------------------- duality

fn duality_weight(profile: &str, n: usize) -> Result<(String, WeightFunction)> {
    match profile {
        "t^2" => Ok((
            "t2".into(),
            WeightFunction::radial(Profile::Square, 1.0, n)?,
        )),
        "t^4" => Ok((
            "t4".into(),
            WeightFunction::radial(Profile::Power(4.0), 1.0, n)?,
        )),
        "cosh(t)-1" => Ok((
            "cosh".into(),
            WeightFunction::separable(Profile::CoshMinusOne, 1.0, n)?,
        )),
        other => Err(Error::InvalidArgument(format!(
            "unknown duality profile {other:?}"
        ))),
    }
}

fn duality_section(ctx: &Context) -> Output {
    let mut out = Output::default();
    for &n in &ctx.dims {
        for (k, profile) in ctx.profiles.iter().enumerate() {
            out.guard(&format!("duality.{profile}.n{n}"), "Proposition 3", |o| {
                duality_checks(ctx, profile, n, 200 + 10 * k as u64 + n as u64, o)
            });
        }
        out.guard(&format!("duality.lemma5.n{n}"), "Lemma 5", |o| {
            let u = WeightFunction::radial(Profile::Square, 1.0, n)?;
            let radii = [10.0, 20.0, 40.0];
            let ratios = lemma5_ratios(u, 0.5, &vec![1.0; n], &radii)?;
            let increasing = ratios.windows(2).all(|w| w[1] > w[0]);
            let growth = ratios[2] / ratios[0];
            o.push(
                CheckRecord::new(format!("duality.lemma5.n{n}"), "Lemma 5")
                    .at_least(growth, 2.0)
                    .flag(increasing && growth >= 2.0)
                    .witness(
                        &json!({ "u": "‖x‖²", "delta": 0.5, "radii": radii, "ratios": ratios }),
                    ),
            );
            Ok(())
        });
    }
    out
}

fn duality_checks(
    ctx: &Context,
    profile: &str,
    n: usize,
    stream: u64,
    out: &mut Output,
) -> Result<()> {
    let (key, u) = duality_weight(profile, n)?;
    let cfg = SearchConfig::default();
    let mut r = rng(ctx.seed, stream);
    let points: Vec<Vec<f64>> = (0..ctx.points)
        .map(|_| random_point(&mut r, n, 0.05, 8.0))
        .collect();
    let sums = points
        .iter()
        .map(|x| duality_sum(&u, x, &cfg))
        .collect::<Result<Vec<f64>>>()?;
    let columns: Vec<&str> = if n == 1 {
        vec!["x", "gap"]
    } else {
        vec!["x1", "x2", "gap"]
    };
    let mut plot = PlotData::new(&columns);
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for (i, (x, &s)) in points.iter().zip(&sums).enumerate() {
        let entropy = log_entropy(x);
        let gap = s - entropy;
        let mut row = x.clone();
        row.push(gap);
        plot.rows.push(row);
        out.push(
            CheckRecord::new(format!("duality.{key}.n{n}.gap{i:02}"), "Proposition 3")
                .deviation(gap.abs(), ctx.tol.duality)
                .witness(&json!({ "x": x, "sum": s, "entropy": entropy, "gap": gap })),
        );
        upper.push(InequalityRecord::new(
            "duality upper bound",
            x.clone(),
            s,
            entropy,
        ));
        let lo = x.iter().map(|&v| v * (v + 1.0).ln() - v).sum::<f64>() - n as f64;
        lower.push(InequalityRecord::new(
            "duality lower bound",
            x.clone(),
            lo,
            s,
        ));
    }
    out.push(worst_record(
        format!("duality.{key}.n{n}.upper"),
        "Lemma 6",
        &upper,
        ctx.tol.inequality,
    ));
    out.push(worst_record(
        format!("duality.{key}.n{n}.lower"),
        "Corollary 2",
        &lower,
        ctx.tol.duality_lower,
    ));
    let zero = vec![0.0; n];
    let gap0 = duality_sum(&u, &zero, &cfg)? - log_entropy(&zero);
    out.push(
        CheckRecord::new(format!("duality.{key}.n{n}.zero"), "Proposition 4")
            .deviation(gap0.abs(), 0.0)
            .witness(&json!({ "x": zero, "gap": gap0 })),
    );
    out.plots.insert(format!("duality-gaps-{key}-n{n}"), plot);
    Ok(())
}

// ------------------------------------------------------------------ family

fn family_section(ctx: &Context) -> Output {
    let mut out = Output::default();
    for &n in &ctx.dims {
        let fams = match families(ctx, n, true) {
            Ok(f) => f,
            Err(e) => {
                out.push(CheckRecord::error(
                    format!("family.n{n}.error"),
                    "plumbing",
                    &e,
                ));
                continue;
            }
        };
        for (key, fam, base) in fams {
            for nu in 0..=1 {
                let id = format!("family.{key}.n{n}.nu{nu}");
                out.guard(&id, "Conditions i0-i4", |o| {
                    family_checks(ctx, &id, &fam, base, nu, o)
                });
            }
            if n == 1 {
                let id = format!("family.{key}.n{n}.series");
                out.guard(&id, "Corollary 1", |o| series_checks(ctx, &id, &fam, o));
            }
        }
    }
    out
}

fn family_checks(
    ctx: &Context,
    id: &str,
    fam: &WeightFamily,
    base: f64,
    nu: u32,
    out: &mut Output,
) -> Result<()> {
    let n = fam.dim();
    let grid = ProbeGrid::default_for(n);
    let cfg = SearchConfig::default();
    let tol = &ctx.tol;
    let member = fam.member(nu)?;
    let next = fam.member(nu + 1)?;

    let class_a = check_class_a(member.as_ref(), &grid, ctx.seed);
    out.push(
        CheckRecord::new(format!("{id}.class-a"), "Class A")
            .flag(class_a.passed())
            .witness(&class_a)
            .truncation(&grid),
    );

    for c in [
        Condition::I0 { a: 1.0 },
        Condition::I2,
        Condition::I3,
        Condition::I4,
    ] {
        let e = fam.estimate(c, nu, &grid)?;
        out.push(
            CheckRecord::new(format!("{id}.{}", c.id()), "Conditions i0-i4")
                .flag(e.value.is_finite() && !e.divergence.unbounded)
                .witness(&e)
                .truncation(&grid),
        );
    }

    // The dilation condition with σ = base, γ = 0 is an identity for radial families.
    let sigma = base;
    let identity = grid_sup(n, &grid, |x| {
        let s: Vec<f64> = x.iter().map(|v| sigma * v).collect();
        let hi = next.eval(x);
        (member.eval(&s) - hi).abs() / hi.abs().max(1.0)
    });
    out.push(
        CheckRecord::new(format!("{id}.i1"), "Conditions i0-i4")
            .deviation(identity.value, tol.identity)
            .witness(&json!({ "sigma": sigma, "gamma": 0.0, "witness": identity.witness }))
            .truncation(&grid),
    );

    let bound = if n == 1 { 12 } else { 6 };
    let lattice = json!({ "lattice_bound": bound, "next_lattice_bound": 2 * bound });
    let tu = lattice_conjugate_table(member.as_ref(), bound, &cfg)?;
    let tv = lattice_conjugate_table(next.as_ref(), 2 * bound, &cfg)?;

    let l1 = lemma1_suite(member.as_ref(), &tu, &[0.5, 1.0, 2.0], &cfg)?;
    out.push(
        worst_record(format!("{id}.lemma1"), "Lemma 1", &l1, tol.inequality).truncation(&lattice),
    );

    let l = fam.estimate(Condition::I4, nu, &grid)?;
    let mut rec = worst_record(
        format!("{id}.lemma2"),
        "Lemma 2",
        &lemma2_suite(&tu, &tv, l.value),
        tol.inequality,
    );
    rec.passed &= l.value.is_finite() && !l.divergence.unbounded;
    out.push(rec.truncation(&lattice));

    let gamma = fam
        .estimate(Condition::I1 { sigma }, nu, &grid)?
        .value
        .max(0.0);
    let l3 = lemma3_suite(&tu, &tv, sigma, gamma);
    out.push(
        worst_record(format!("{id}.lemma3"), "Lemma 3", &l3, tol.inequality).truncation(&lattice),
    );

    let growth = tu.ray_growth();
    out.push(
        CheckRecord::new(format!("{id}.remark2"), "Remark 2")
            .flag(growth.convex && growth.slopes_nondecreasing)
            .witness(&growth)
            .truncation(&lattice),
    );

    let inner: Vec<FnWeight<_>> = (0..n)
        .map(|j| FnWeight::new(n, move |x: &[f64]| x[j] * x[j]))
        .collect();
    let mut pairs = composition_midpoint_check(member.as_ref(), &inner, 2.0, 1000, ctx.seed);
    for p in &mut pairs {
        p.margin /= p.rhs.abs().max(1.0);
    }
    out.push(
        worst_record(format!("{id}.lemma4"), "Lemma 4", &pairs, tol.convexity)
            .truncation(&json!({ "inner": "x_j^2", "radius": 2.0, "pairs": 1000 })),
    );

    let mut r = rng(ctx.seed, 300 + 10 * n as u64 + nu as u64);
    let points: Vec<Vec<f64>> = (0..10).map(|_| random_point(&mut r, n, 0.0, 6.0)).collect();
    let l6 = lemma6_suite(member.as_ref(), &points, &cfg)?;
    out.push(worst_record(
        format!("{id}.lemma6"),
        "Lemma 6",
        &l6,
        tol.inequality,
    ));
    let c2 = corollary2_suite(member.as_ref(), &points, &cfg)?;
    out.push(worst_record(
        format!("{id}.corollary2"),
        "Corollary 2",
        &c2,
        tol.duality_lower,
    ));
    Ok(())
}

fn series_checks(ctx: &Context, id: &str, fam: &WeightFamily, out: &mut Output) -> Result<()> {
    const SHELLS: u32 = 50;
    const EXTRA: u32 = 10;
    let g = fam.member(0)?;
    let cases = [
        (0.5, SeriesMode::Factorial),
        (1.0, SeriesMode::Factorial),
        (10.0, SeriesMode::Factorial),
        (1.0, SeriesMode::ModulusFactorial),
    ];
    for (b, mode) in cases {
        let s = series_partial_sums(
            g.as_ref(),
            b,
            mode,
            SHELLS + EXTRA,
            &SearchConfig::default(),
        )?;
        let total = s.partial_sums[(SHELLS + EXTRA) as usize];
        let change = (total - s.partial_sums[SHELLS as usize]).abs() / total.abs().max(1.0);
        let within = s.converged_at.is_some_and(|k| k <= SHELLS as usize);
        let tag = match mode {
            SeriesMode::Factorial => "factorial",
            SeriesMode::ModulusFactorial => "modulus",
        };
        let rec = CheckRecord::new(format!("{id}.b{b}.{tag}"), "Corollary 1")
            .deviation(change, ctx.tol.series);
        let passed = rec.passed && within && !s.diverging;
        out.push(
            rec.flag(passed)
                .witness(&json!({
                    "sum": total,
                    "converged_at": s.converged_at,
                    "tail_estimate": s.tail_estimate,
                    "diverging": s.diverging,
                }))
                .truncation(&json!({ "shells": SHELLS, "extra_shells": EXTRA })),
        );
    }
    Ok(())
}

// --------------------------------------------------------------- mollifier

fn mollifier_section(ctx: &Context) -> Output {
    let mut out = Output::default();
    for &n in &ctx.dims {
        out.guard(&format!("mollifier.n{n}"), "Mollifier construction", |o| {
            mollifier_checks(ctx, n, o)
        });
        let fams = match families(ctx, n, n == 1) {
            Ok(f) => f,
            Err(e) => {
                out.push(CheckRecord::error(
                    format!("mollifier.n{n}.families"),
                    "plumbing",
                    &e,
                ));
                continue;
            }
        };
        for (key, fam, _) in fams {
            let id = format!("mollifier.{key}.n{n}.chain");
            out.guard(&id, "Mollifier construction", |o| {
                chain_checks(&id, &fam, o)
            });
        }
    }
    out
}

fn mollifier_checks(ctx: &Context, n: usize, out: &mut Output) -> Result<()> {
    let kernel = bump_mollifier(n)?;
    let mut r = rng(ctx.seed, 400 + n as u64);
    let points: Vec<Vec<f64>> = (0..100)
        .map(|_| random_point(&mut r, n, -5.0, 5.0))
        .collect();
    for (key, profile) in [("x2", Profile::Square), ("x4", Profile::Power(4.0))] {
        let phi = Arc::new(WeightFunction::radial(profile, 1.0, n)?);
        let smooth = mollify(phi.clone(), &kernel, DEFAULT_QUADRATURE_ORDER)?;
        let records: Vec<InequalityRecord> = points
            .iter()
            .map(|x| InequalityRecord::new("dominance", x.clone(), phi.eval(x), smooth.eval(x)))
            .collect();
        out.push(
            worst_record(
                format!("mollifier.n{n}.{key}.dominance"),
                "Mollifier construction",
                &records,
                ctx.tol.inequality,
            )
            .truncation(
                &json!({ "points": 100, "box": [-5.0, 5.0], "order": DEFAULT_QUADRATURE_ORDER }),
            ),
        );
        let fine = mollify(phi, &kernel, 48)?;
        let dev = points
            .iter()
            .take(10)
            .map(|x| {
                let (a, b) = (smooth.eval(x), fine.eval(x));
                (a - b).abs() / b.abs().max(1.0)
            })
            .fold(0.0, f64::max);
        out.push(
            CheckRecord::new(format!("mollifier.n{n}.{key}.quadrature"), "plumbing")
                .deviation(dev, ctx.tol.quadrature)
                .truncation(&json!({ "orders": [DEFAULT_QUADRATURE_ORDER, 48], "points": 10 })),
        );
    }
    Ok(())
}

fn chain_checks(id: &str, fam: &Arc<WeightFamily>, out: &mut Output) -> Result<()> {
    let n = fam.dim();
    let grid = ProbeGrid {
        radius: 10.0,
        nodes: if n == 1 { 201 } else { 21 },
    };
    let report = verify_mollify_chain(fam, 0..=1, &grid, DEFAULT_QUADRATURE_ORDER, 1.0)?;
    for d in &report.dominance {
        out.push(
            CheckRecord::new(
                format!("{id}.{}", d.label.replace([' ', '='], "-")),
                "Mollifier construction",
            )
            .margin(d.margin, 1e-8)
            .witness(d)
            .truncation(&grid),
        );
    }
    for c in &report.constants {
        out.push(
            CheckRecord::new(
                format!("{id}.{}.m{}", c.label, c.m),
                "Mollifier construction",
            )
            .flag(c.holds)
            .witness(c)
            .truncation(&grid),
        );
    }
    for e in &report.subfamily {
        out.push(
            CheckRecord::new(
                format!("{id}.subfamily.{}.m{}", e.condition.id(), e.nu),
                "Mollifier construction",
            )
            .flag(e.value.is_finite() && !e.divergence.unbounded)
            .witness(e)
            .truncation(&grid),
        );
    }
    Ok(())
}

// ---------------------------------------------------------------- seminorm

fn seminorm_section(ctx: &Context) -> Output {
    let mut out = Output::default();
    for &n in &ctx.dims {
        out.guard(&format!("seminorm.n{n}"), "plumbing", |o| {
            for (key, f) in test_functions(ctx, n, true)? {
                taylor_checks(ctx, &key, &f, o)?;
                derivative_oracle(ctx, &key, &f, o)?;
                let settings = ChainSettings::default_for(n);
                let d = derivative_decay(&f, &settings.real, settings.max_order, 0.5);
                o.push(
                    CheckRecord::new(format!("seminorm.{key}.n{n}.derivative-decay"), "Theorem 1")
                        .flag(d.c_eps.is_finite() && d.geometric_tail)
                        .witness(&d)
                        .truncation(
                            &json!({ "grid": settings.real, "max_order": settings.max_order }),
                        ),
                );
            }
            Ok(())
        });
        let fams = match families(ctx, n, false) {
            Ok(f) => f,
            Err(e) => {
                out.push(CheckRecord::error(
                    format!("seminorm.n{n}.families"),
                    "plumbing",
                    &e,
                ));
                continue;
            }
        };
        for (fkey, fam, _) in fams {
            let fns = match test_functions(ctx, n, false) {
                Ok(f) => f,
                Err(e) => {
                    out.push(CheckRecord::error(
                        format!("seminorm.n{n}.functions"),
                        "plumbing",
                        &e,
                    ));
                    continue;
                }
            };
            for (key, f) in fns {
                let id = format!("seminorm.{key}.n{n}.{fkey}");
                out.guard(&id, "plumbing", |o| {
                    seminorm_checks(ctx, &id, &key, &f, &fam, o)
                });
            }
        }
    }
    out
}

fn taylor_checks(ctx: &Context, key: &str, f: &TestFunction, out: &mut Output) -> Result<()> {
    let n = f.dim();
    let order = if n == 1 { 30 } else { 24 };
    let xs: Vec<Vec<f64>> = product_points(&[-2.0, -0.5, 0.0, 1.3, 3.0], n);
    let ys: Vec<Vec<f64>> = if n == 1 {
        [-2.0, -1.0, 0.0, 0.5, 2.0]
            .iter()
            .map(|&y| vec![y])
            .collect()
    } else {
        vec![
            vec![0.0, 0.0],
            vec![1.0, -1.0],
            vec![-1.4, 1.4],
            vec![2.0, 0.0],
            vec![0.3, -1.9],
        ]
    };
    // Each point may deviate by max(tol·max(1, |f|), 10 × last-shell estimate).
    let mut worst = (0.0f64, json!(null));
    for x in &xs {
        for y in &ys {
            let t = taylor_extend(f, x, y, order)?;
            let z: Vec<Complex64> = x
                .iter()
                .zip(y)
                .map(|(&a, &b)| Complex64::new(a, b))
                .collect();
            let exact = f.eval(&z);
            let d = (t.value() - exact).norm();
            let allowed = (ctx.tol.taylor * exact.norm().max(1.0)).max(10.0 * t.error_estimate);
            let ratio = d / allowed;
            if ratio > worst.0 || ratio.is_nan() {
                worst = (
                    ratio,
                    json!({ "x": x, "y": y, "deviation": d, "error_estimate": t.error_estimate, "allowed": allowed }),
                );
            }
        }
    }
    out.push(
        CheckRecord::new(format!("seminorm.{key}.n{n}.taylor"), "Taylor extension")
            .deviation(worst.0, 1.0)
            .witness(&json!({ "function": f.name(), "worst_ratio": worst.1 }))
            .truncation(&json!({ "order": order, "max_imaginary_norm": 2.0 })),
    );
    Ok(())
}

/// Central differences of `D^{α-e_j} f` against `D^α f`.
fn derivative_oracle(ctx: &Context, key: &str, f: &TestFunction, out: &mut Output) -> Result<()> {
    const STEP: f64 = 1e-4;
    const REL_TOL: f64 = 1e-6;
    let n = f.dim();
    let mut r = rng(ctx.seed, 500 + n as u64);
    let alphas: Vec<MultiIndex> = MultiIndex::up_to(n, 6)
        .into_iter()
        .filter(|a| a.modulus() > 0)
        .collect();
    let mut worst = (0.0f64, Vec::new(), None);
    for _ in 0..50 {
        let x = random_point(&mut r, n, -4.0, 4.0);
        for alpha in &alphas {
            let j = alpha.components().iter().position(|&c| c > 0).unwrap();
            let lower = alpha.checked_sub(&MultiIndex::unit(n, j, 1)).unwrap();
            let (mut xp, mut xm) = (x.clone(), x.clone());
            xp[j] += STEP;
            xm[j] -= STEP;
            let fd = (f.derivative(&lower, &xp) - f.derivative(&lower, &xm)) / (2.0 * STEP);
            let exact = f.derivative(alpha, &x);
            let d = (fd - exact).abs() / exact.abs().max(1.0);
            if d > worst.0 || d.is_nan() {
                worst = (d, x.clone(), Some(alpha.clone()));
            }
        }
    }
    out.push(
        CheckRecord::new(format!("seminorm.{key}.n{n}.derivative-oracle"), "plumbing")
            .deviation(worst.0, REL_TOL)
            .witness(&json!({ "x": worst.1, "alpha": worst.2 }))
            .truncation(&json!({ "points": 50, "max_order": 6, "step": STEP })),
    );
    Ok(())
}

fn seminorm_checks(
    ctx: &Context,
    id: &str,
    key: &str,
    f: &TestFunction,
    fam: &WeightFamily,
    out: &mut Output,
) -> Result<()> {
    const NU: u32 = 1;
    const SCALE: f64 = -2.5;
    let n = f.dim();
    let s = ChainSettings::default_for(n);
    let phi = fam.member(NU)?;
    let table = psi_star_table(fam, NU, s.max_order)?;
    let star = conjugate_on_grid(phi.as_ref(), &s.real, s.primal_nodes)?;
    let eval = |g: &TestFunction, which: &str, m: u32| -> Result<SeminormReport> {
        match which {
            "p" => p_seminorm(g, phi.as_ref(), m, &s.complex),
            "rho" => rho_seminorm(g, &table, m, &s.real, s.max_order),
            "g" => g_seminorm(g, &table, m, &s.real, s.max_order),
            _ => q_seminorm(g, &star, m),
        }
    };
    let scaled = f.scaled(SCALE)?;
    for which in ["p", "rho", "g", "q"] {
        let reports = (0..=2)
            .map(|m| eval(f, which, m))
            .collect::<Result<Vec<_>>>()?;
        let values: Vec<f64> = reports.iter().map(|r| r.value).collect();
        let step = values
            .windows(2)
            .map(|w| (w[1] - w[0]) / w[0].abs().max(1.0))
            .fold(f64::INFINITY, f64::min);
        out.push(
            CheckRecord::new(format!("{id}.{which}.monotone"), "plumbing")
                .margin(step, ctx.tol.inequality)
                .witness(&json!({ "values": values, "reports": reports }))
                .truncation(&reports[0].truncation),
        );
        let c = eval(&scaled, which, 1)?;
        let dev = (c.value - SCALE.abs() * values[1]).abs()
            / (SCALE.abs() * values[1]).max(f64::MIN_POSITIVE);
        out.push(
            CheckRecord::new(format!("{id}.{which}.scaling"), "plumbing")
                .deviation(dev, ctx.tol.identity)
                .witness(&json!({ "c": SCALE, "scaled": c.value, "unscaled": values[1] })),
        );
        if which == "g" {
            let mut plot = PlotData::new(&["shell", "max"]);
            for (k, v) in reports[0].shell_maxima.iter().enumerate() {
                plot.rows.push(vec![k as f64, *v]);
            }
            out.plots
                .insert(format!("seminorm-shells-{key}-n{n}"), plot);
        }
    }
    Ok(())
}

// --------------------------------------------------------------- embedding

fn embedding_section(ctx: &Context) -> Output {
    const NU: u32 = 1;
    let mut out = Output::default();
    for &n in &ctx.dims {
        let setup =
            families(ctx, n, false).and_then(|fams| Ok((fams, test_functions(ctx, n, false)?)));
        let (fams, fns) = match setup {
            Ok(s) => s,
            Err(e) => {
                out.push(CheckRecord::error(
                    format!("embedding.n{n}.setup"),
                    "plumbing",
                    &e,
                ));
                continue;
            }
        };
        let settings = ChainSettings::default_for(n);
        for (fkey, fam, _) in &fams {
            for (key, f) in &fns {
                for m in 0..=2 {
                    let id = format!("embedding.{key}.n{n}.{fkey}.m{m}");
                    out.guard(&id, "Theorem 1", |o| {
                        let r = verify_embedding_chain(f, fam, m, NU, &settings)?;
                        let truncation = json!({
                            "real": settings.real,
                            "complex": settings.complex,
                            "probe": settings.probe,
                            "max_order": settings.max_order,
                        });
                        o.push(
                            CheckRecord::new(format!("{id}.rho-bound"), "Theorem 1")
                                .margin(r.margin_rho, ctx.tol.chain)
                                .witness(&json!({
                                    "c_nu_m": r.c_nu_m,
                                    "p_nu": r.p_nu,
                                    "rho_next": r.rho_next,
                                }))
                                .truncation(&truncation),
                        );
                        o.push(
                            CheckRecord::new(format!("{id}.growth-bound"), "Theorem 2")
                                .margin(r.margin_growth, ctx.tol.chain)
                                .witness(&json!({
                                    "b_nu": r.b_nu,
                                    "c1": r.c1,
                                    "k_shift": r.k_shift,
                                    "k_nu_m": r.k_nu_m,
                                    "rho_nu": r.rho_nu,
                                    "p_shift": r.p_shift,
                                }))
                                .truncation(&truncation),
                        );
                        Ok(())
                    });
                    let id = format!("equivalence.{key}.n{n}.{fkey}.m{m}");
                    out.guard(&id, "Theorem 4", |o| {
                        let r = verify_theorem4_equivalence(f, fam, m, NU, &settings)?;
                        let truncation = json!({
                            "real": settings.real,
                            "max_order": settings.max_order,
                            "primal_nodes": settings.primal_nodes,
                        });
                        o.push(
                            CheckRecord::new(format!("{id}.g-below-q"), "Theorem 4")
                                .margin(r.margin, ctx.tol.chain)
                                .witness(&json!({ "g_nu": r.g_nu, "q_nu": r.q_nu }))
                                .truncation(&truncation),
                        );
                        o.push(
                            CheckRecord::new(format!("{id}.reverse-ratio"), "Theorem 4")
                                .flag(r.ratio.is_none_or(f64::is_finite))
                                .witness(&json!({ "ratio": r.ratio, "q_shift": r.q_shift }))
                                .truncation(&truncation),
                        );
                        Ok(())
                    });
                }
            }
            if n == 1 {
                let id = format!("embedding.{fkey}.n{n}.log-shift");
                out.guard(&id, "Theorem 2", |o| {
                    let points: Vec<Vec<f64>> = [-1.0, -0.5, 0.0, 0.5, 1.0, 1.5]
                        .iter()
                        .map(|&x| vec![x])
                        .collect();
                    for a in [1.0, 2.0] {
                        let recs = log_shift_suite(fam, NU + 1, a, &points)?;
                        o.push(
                            worst_record(
                                format!("{id}.a{a}"),
                                "Theorem 2",
                                &recs,
                                ctx.tol.inequality,
                            )
                            .truncation(&json!({ "points": points })),
                        );
                    }
                    Ok(())
                });
            }
        }
    }
    out
}

// ----------------------------------------------------------------- fourier

fn fourier_section(ctx: &Context) -> Output {
    let mut out = Output::default();
    let st = verify_stirling(20);
    out.push(
        CheckRecord::new("fourier.stirling", "Stirling-type inequality")
            .flag(st.passed)
            .witness(&st),
    );
    for &n in &ctx.dims {
        out.guard(&format!("fourier.n{n}.surface"), "Theorem 3", |o| {
            let s = surface_constant(n)?;
            let exact = if n == 1 {
                2.0
            } else {
                2.0 * std::f64::consts::PI
            };
            o.push(
                CheckRecord::new(format!("fourier.n{n}.surface"), "Theorem 3")
                    .deviation((s.s_n - exact).abs(), 1e-14)
                    .witness(&s),
            );
            Ok(())
        });
        out.guard(
            &format!("fourier.gauss.n{n}.self-duality"),
            "Fourier transform",
            |o| self_duality(ctx, n, o),
        );
        let setup =
            families(ctx, n, false).and_then(|fams| Ok((fams, test_functions(ctx, n, false)?)));
        let (fams, fns) = match setup {
            Ok(s) => s,
            Err(e) => {
                out.push(CheckRecord::error(
                    format!("fourier.n{n}.setup"),
                    "plumbing",
                    &e,
                ));
                continue;
            }
        };
        for (key, f) in &fns {
            let id = format!("fourier.{key}.n{n}");
            out.guard(&id, "Fourier transform", |o| {
                transform_checks(ctx, &id, key, f, o)
            });
            for (fkey, fam, _) in &fams {
                let id = format!("fourier.{key}.n{n}.{fkey}");
                out.guard(&id, "Theorem 3", |o| bound_checks(ctx, &id, f, fam, o));
            }
        }
    }
    out
}

fn grid_points(n: usize) -> Vec<Vec<f64>> {
    if n == 1 {
        product_points(&uniform_axis(-4.0, 4.0, 41), 1)
    } else {
        product_points(&uniform_axis(-4.0, 4.0, 9), 2)
    }
}

fn self_duality(ctx: &Context, n: usize, out: &mut Output) -> Result<()> {
    let f = TestFunction::gaussian(0.5, n)?;
    let spec = QuadratureSpec::for_function(&f, 0)?;
    let points = grid_points(n);
    let values = fourier(&f, &spec, &points)?;
    let c = (2.0 * std::f64::consts::PI).powf(n as f64 / 2.0);
    let (dev, at) = points
        .iter()
        .zip(&values)
        .map(|(x, v)| {
            let r2: f64 = x.iter().map(|t| t * t).sum();
            (
                (v.value() - Complex64::new(c * (-0.5 * r2).exp(), 0.0)).norm(),
                x,
            )
        })
        .fold(
            (0.0, &points[0]),
            |acc, (d, x)| if d > acc.0 { (d, x) } else { acc },
        );
    out.push(
        CheckRecord::new(
            format!("fourier.gauss.n{n}.self-duality"),
            "Fourier transform",
        )
        .deviation(dev, ctx.tol.self_duality)
        .witness(&json!({ "x": at }))
        .truncation(&spec),
    );
    Ok(())
}

fn max_deviation(a: &[Complex64], b: &[Complex64]) -> (f64, usize) {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .enumerate()
        .fold(
            (0.0, 0),
            |acc, (i, d)| if d > acc.0 || d.is_nan() { (d, i) } else { acc },
        )
}

/// Expansion of a product of polynomial-Gaussian factors into products of
/// monomial-Gaussian factors with their coefficients.
fn monomial_terms(f: &TestFunction) -> Result<Vec<(f64, TestFunction)>> {
    let mut terms: Vec<(f64, Vec<Factor>)> = vec![(f.scale(), Vec::new())];
    for factor in f.factors() {
        let a = factor.a();
        let poly = factor.polynomial();
        terms = terms
            .into_iter()
            .flat_map(|(c, fs)| {
                poly.iter()
                    .enumerate()
                    .filter(|(_, &p)| p != 0.0)
                    .map(|(i, &p)| {
                        let mut coeffs = vec![0.0; i + 1];
                        coeffs[i] = 1.0;
                        let mut g = fs.clone();
                        g.push(Factor::PolyGaussian { coeffs, a });
                        (c * p, g)
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    terms
        .into_iter()
        .map(|(c, fs)| Ok((c, TestFunction::product(fs)?)))
        .collect()
}

fn transform_checks(
    ctx: &Context,
    id: &str,
    key: &str,
    f: &TestFunction,
    out: &mut Output,
) -> Result<()> {
    let n = f.dim();
    let tol = ctx.tol.transform;
    let points = grid_points(n);
    let spec = QuadratureSpec::for_function(f, 2)?;

    let mut worst = (0.0f64, MultiIndex::zero(n));
    for alpha in MultiIndex::up_to(n, 2) {
        let q: Vec<Complex64> = fourier_derivative(f, &alpha, &spec, &points)?
            .iter()
            .map(|v| v.value())
            .collect();
        let exact: Vec<Complex64> = points
            .iter()
            .map(|x| closed_form_transform(f, &alpha, x))
            .collect();
        let (d, _) = max_deviation(&q, &exact);
        if d > worst.0 || d.is_nan() {
            worst = (d, alpha);
        }
    }
    out.push(
        CheckRecord::new(format!("{id}.closed-form"), "Fourier transform")
            .deviation(worst.0, tol)
            .witness(&json!({ "alpha": worst.1 }))
            .truncation(&json!({ "quadrature": spec, "max_order": 2, "points": points.len() })),
    );

    let base = QuadratureSpec::for_function(f, 0)?;
    let whole: Vec<Complex64> = fourier(f, &base, &points)?
        .iter()
        .map(|v| v.value())
        .collect();
    let mut summed = vec![Complex64::new(0.0, 0.0); points.len()];
    let terms = monomial_terms(f)?;
    for (c, g) in &terms {
        let spec = QuadratureSpec::for_function(g, 0)?;
        for (s, v) in summed.iter_mut().zip(fourier(g, &spec, &points)?) {
            *s += *c * v.value();
        }
    }
    let (d, i) = max_deviation(&whole, &summed);
    out.push(
        CheckRecord::new(format!("{id}.linearity"), "Fourier transform")
            .deviation(d, tol)
            .witness(&json!({ "x": points[i], "terms": terms.len() })),
    );

    let grid = QuadratureSpec::for_transform(f)?;
    let p = parseval_check(f, &base, &grid)?;
    out.push(
        CheckRecord::new(format!("{id}.parseval"), "Fourier transform")
            .deviation(p.difference.abs(), tol)
            .witness(&p)
            .truncation(&json!({ "forward": base, "transform_grid": grid })),
    );

    let sampled = fourier_on_grid(f, &base, &grid)?;
    let back: Vec<Complex64> = inverse_fourier(&sampled, &points)?
        .iter()
        .map(|v| v.value())
        .collect();
    let exact: Vec<Complex64> = points
        .iter()
        .map(|x| Complex64::new(f.eval_real(x), 0.0))
        .collect();
    let (d, i) = max_deviation(&back, &exact);
    out.push(
        CheckRecord::new(format!("{id}.round-trip"), "Fourier transform")
            .deviation(d, tol)
            .witness(&json!({ "x": points[i] }))
            .truncation(&json!({ "forward": base, "transform_grid": grid })),
    );

    out.artifacts.push(Artifact::Transform {
        name: format!("transform-{key}-n{n}.csv"),
        table: TransformTable::compute(f, &base, points)?,
    });
    Ok(())
}

fn bound_checks(
    ctx: &Context,
    id: &str,
    f: &TestFunction,
    fam: &WeightFamily,
    out: &mut Output,
) -> Result<()> {
    const NU: u32 = 1;
    let n = f.dim();
    let settings = ChainSettings::default_for(n);
    for m in 0..=2 {
        let r = verify_theorem3_bound(f, fam, NU, m, &settings)?;
        out.push(
            CheckRecord::new(format!("{id}.m{m}.bound"), "Theorem 3")
                .margin(r.margin, ctx.tol.chain)
                .witness(&json!({
                    "surface": r.surface,
                    "transform_norm": r.transform_norm,
                    "p_shift": r.p_shift,
                    "bound": r.bound,
                    "transform_error": r.transform_error,
                }))
                .truncation(&json!({ "quadrature": r.quadrature, "real": settings.real, "complex": settings.complex })),
        );
    }
    let block = BlockSettings {
        seed: ctx.seed,
        ..BlockSettings::default()
    };
    let c = verify_contour_shift(f, fam, NU, &settings, &block)?;
    let rec = CheckRecord::new(format!("{id}.contour-shift"), "Theorem 3")
        .margin(c.worst_margin, ctx.tol.chain);
    let passed = rec.passed && c.passed;
    out.push(
        rec.flag(passed)
            .witness(&json!({
                "max_relative_discrepancy": c.max_relative_discrepancy,
                "samples": c.samples,
            }))
            .truncation(&block),
    );
    let p = verify_pre_supremum(f, fam, NU, &settings, &block)?;
    let rec = CheckRecord::new(format!("{id}.pre-supremum"), "Theorem 3")
        .margin(p.worst_margin, ctx.tol.chain);
    let passed = rec.passed && p.passed;
    let worst = p
        .records
        .iter()
        .min_by(|a, b| a.record.margin.total_cmp(&b.record.margin));
    out.push(
        rec.flag(passed)
            .witness(&json!({ "worst": worst, "checked": p.records.len() }))
            .truncation(&block),
    );
    Ok(())
}
