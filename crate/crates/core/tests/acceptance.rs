//! Acceptance criteria. Prints one PASS/FAIL line per criterion.

mod common;

use std::f64::consts::{FRAC_PI_4, PI};
use std::process::ExitCode;
use std::time::Instant;

use common::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use warped_cas::generators::{self, classify, ClassifyOptions, Family, GeneratorSpec, ProfileFunction, Verdict};
use warped_cas::surface::{to_half_space, Immersion, ParamDomain};
use warped_cas::verify::{applicable_suites, run_suites, Subject, Tolerances};
use warped_cas::warped_space::AmbientVector;

const N: usize = 64;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn max_of(xs: impl Iterator<Item = f64>) -> f64 {
    xs.fold(0.0, |m, x| if x.is_nan() { f64::INFINITY } else { m.max(x) })
}

fn canonical_angle(s: &Immersion, u: f64, v: f64) -> f64 {
    let th = s.angle(u, v).unwrap();
    th.min(PI - th)
}

/// Worst case over the matrix, with the label where it occurred.
fn worst(values: &[(String, f64)]) -> (f64, String) {
    let mut best = (0.0, String::from("-"));
    for (label, x) in values {
        let x = if x.is_nan() { f64::INFINITY } else { *x };
        if x >= best.0 {
            best = (x, label.clone());
        }
    }
    best
}

fn criterion_1(cases: &[Case]) -> Outcome {
    let start = Instant::now();
    let stds: Vec<(String, f64)> = cases
        .iter()
        .map(|c| {
            let s = generators::generate(&c.spec).unwrap();
            let thetas: Vec<f64> = grid(N)
                .points(s.domain())
                .par_iter()
                .map(|&(u, v)| canonical_angle(&s, u, v))
                .collect();
            (c.label.clone(), mean_std(&thetas).1)
        })
        .collect();
    let elapsed = start.elapsed().as_secs_f64();
    let (w, at) = worst(&stds);
    outcome(
        w < 1e-8 && elapsed < 10.0,
        format!(
            "{} surfaces at {N}x{N}: max theta stddev {w:.2e} ({at}) < 1e-8, {elapsed:.2} s < 10 s",
            cases.len()
        ),
    )
}

/// Per-surface maxima of the pointwise residuals used by several criteria.
struct Residuals {
    label: String,
    principal: f64,
    gauss: f64,
    codazzi: f64,
    laplacian: f64,
    oracles: f64,
}

fn residuals(case: &Case) -> Residuals {
    let s = generators::generate(&case.spec).unwrap();
    let w = case.warping.as_str();
    let g = grid(N);
    let principal = max_of(
        g.points(s.domain())
            .par_iter()
            .map(|&(u, v)| {
                let (c, a) = canonical_shape(&s, u, v);
                let t = s.point(u, v).unwrap().t;
                let tc = t_coords(&s, u, v);
                let at = apply2(a, tc);
                let k = c * log_d1(w, t);
                gnorm(
                    s.first_fundamental_form(u, v).unwrap(),
                    [at[0] + k * tc[0], at[1] + k * tc[1]],
                )
            })
            .collect::<Vec<_>>()
            .into_iter(),
    );
    let interior = interior_points(&s, g);
    let per_point: Vec<[f64; 4]> = interior
        .par_iter()
        .map(|&(u, v)| {
            let gm = s.first_fundamental_form(u, v).unwrap();
            let (o1, o2) = orthonormal(gm);
            let r1 = s.gauss_residual(u, v, o1, o2, o1).unwrap();
            let r2 = s.gauss_residual(u, v, o1, o2, o2).unwrap();
            let cz = s.codazzi_residual(u, v, o1, o2).unwrap();

            let (c, a) = canonical_shape(&s, u, v);
            let t = s.point(u, v).unwrap().t;
            let h = 0.5 * (a[0][0] + a[1][1]);
            let (lhs, _) = s.laplacian_height(u, v).unwrap();
            let rhs = 2.0 * c * h + log_d1(w, t) * (1.0 + c * c);

            let o = s.curvature_oracles(u, v).unwrap();
            let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
            let trace = det - log_d1(w, t).powi(2) - log_d2(w, t) * (1.0 - c * c);
            let ks = [o.brioschi, o.gauss_trace, o.ambient_sectional, trace];
            let mut spread: f64 = 0.0;
            for i in 0..4 {
                for j in 0..i {
                    spread = spread.max((ks[i] - ks[j]).abs());
                }
            }
            [
                gnorm(gm, r1).max(gnorm(gm, r2)),
                gnorm(gm, cz),
                (lhs - rhs).abs(),
                spread,
            ]
        })
        .collect();
    let col = |k: usize| max_of(per_point.iter().map(|p| p[k]));
    Residuals {
        label: case.label.clone(),
        principal,
        gauss: col(0),
        codazzi: col(1),
        laplacian: col(2),
        oracles: col(3),
    }
}

fn criterion_2(r: &[Residuals]) -> Outcome {
    let (w, at) = worst(&r.iter().map(|x| (x.label.clone(), x.principal)).collect::<Vec<_>>());
    outcome(
        w < 1e-6,
        format!(
            "{} surfaces: max |A T + cos(theta) (log f)' T| {w:.2e} ({at}) < 1e-6",
            r.len()
        ),
    )
}

fn criterion_3(cases: &[Case]) -> Outcome {
    let mut gaps = Vec::new();
    let mut hs = Vec::new();
    for c in cases.iter().filter(|c| c.spec.family == Family::TypeII) {
        let s = generators::generate(&c.spec).unwrap();
        let vals: Vec<(f64, f64)> = grid(N)
            .points(s.domain())
            .par_iter()
            .map(|&(u, v)| {
                let (cos, a) = canonical_shape(&s, u, v);
                let [k1, k2] = eig2(a);
                let t = s.point(u, v).unwrap().t;
                let (f, df, _) = warp_oracle(&c.warping, t);
                ((k2 - k1).abs(), (0.5 * (k1 + k2) + cos * df / f).abs())
            })
            .collect();
        gaps.push((c.label.clone(), max_of(vals.iter().map(|x| x.0))));
        hs.push((c.label.clone(), max_of(vals.iter().map(|x| x.1))));
    }
    let (g, ga) = worst(&gaps);
    let (h, ha) = worst(&hs);
    outcome(
        g < 1e-6 && h < 1e-6,
        format!("{} type (ii) surfaces: max |k1 - k2| {g:.2e} ({ga}), max |H + cos(theta) f'/f| {h:.2e} ({ha}), both < 1e-6", gaps.len()),
    )
}

fn max_intrinsic_k(spec: &GeneratorSpec, shift: f64) -> f64 {
    let s = generators::generate(spec).unwrap();
    max_of(
        interior_points(&s, grid(N))
            .par_iter()
            .map(|&(u, v)| (s.gauss_curvature_intrinsic(u, v).unwrap() - shift).abs())
            .collect::<Vec<_>>()
            .into_iter(),
    )
}

fn criterion_4() -> Outcome {
    let mut flat = Vec::new();
    for w in ["linear:1,1", "linear:2,0.5"] {
        for th in THETAS_DEG {
            let spec = GeneratorSpec::type_ii(warping(w), rad(th));
            flat.push((format!("{w} {th}"), max_intrinsic_k(&spec, 0.0)));
        }
    }
    let (k, at) = worst(&flat);
    let curved = max_intrinsic_k(&GeneratorSpec::type_ii(warping("exp"), PI / 3.0), -0.75);
    outcome(
        k < 1e-6 && curved < 1e-5,
        format!("linear f: max |K| {k:.2e} ({at}) < 1e-6; f = e^t at 60 deg: max |K + 3/4| {curved:.2e} < 1e-5"),
    )
}

fn criterion_5() -> Outcome {
    let mut exact = true;
    let mut hmax: Vec<(String, f64)> = Vec::new();
    let mut measured: f64 = 0.0;
    for m in MINIMAL_EXPONENTS {
        let expected = ((1.0 - m) / (1.0 + m)).sqrt().acos();
        let spec = GeneratorSpec::minimal_power(m).unwrap();
        exact &= spec.theta == expected;
        let s = generators::generate(&spec).unwrap();
        let vals: Vec<(f64, f64)> = grid(N)
            .points(s.domain())
            .par_iter()
            .map(|&(u, v)| {
                let (_, a) = canonical_shape(&s, u, v);
                (
                    (0.5 * (a[0][0] + a[1][1])).abs(),
                    (canonical_angle(&s, u, v) - expected).abs(),
                )
            })
            .collect();
        hmax.push((format!("m = {m:.4}"), max_of(vals.iter().map(|x| x.0))));
        measured = measured.max(max_of(vals.iter().map(|x| x.1)));
    }
    let quarter = (GeneratorSpec::minimal_power(1.0 / 3.0).unwrap().theta - FRAC_PI_4).abs();
    let (h, at) = worst(&hmax);
    outcome(
        exact && h < 1e-6 && quarter <= 2.0 * f64::EPSILON && measured < 1e-8,
        format!(
            "theta formula exact: {exact}; measured theta deviation {measured:.2e}; max |H| {h:.2e} ({at}) < 1e-6; m = 1/3: |theta - pi/4| {quarter:.1e}"
        ),
    )
}

/// Criterion 6 has one clause that is checked literally but cannot hold for
/// the constant angle surface; the result records that clause separately.
struct Harmonic {
    outcome: Outcome,
    only_literal_cone_fails: bool,
}

fn criterion_6() -> Harmonic {
    let mut lap: f64 = 0.0;
    let mut hdev: f64 = 0.0;
    let mut kmax: f64 = 0.0;
    let mut sect: f64 = 0.0;
    let mut literal: f64 = 0.0;
    let mut corrected: f64 = 0.0;
    let mut rng = StdRng::seed_from_u64(6);
    for th in [30.0, 45.0, 60.0] {
        let theta = rad(th);
        let s = generators::generate(&GeneratorSpec::harmonic_exp(theta)).unwrap();
        let cot2 = (theta.cos() / theta.sin()).powi(2);
        let target = -(1.0 + theta.cos().powi(2)) / (2.0 * theta.cos());
        let interior: Vec<[f64; 2]> = interior_points(&s, grid(N))
            .par_iter()
            .map(|&(u, v)| {
                [
                    s.laplacian_height(u, v).unwrap().0.abs(),
                    s.gauss_curvature_intrinsic(u, v).unwrap().abs(),
                ]
            })
            .collect();
        lap = lap.max(max_of(interior.iter().map(|x| x[0])));
        kmax = kmax.max(max_of(interior.iter().map(|x| x[1])));
        for (u, v) in grid(N).points(s.domain()) {
            let (_, a) = canonical_shape(&s, u, v);
            hdev = hdev.max((0.5 * (a[0][0] + a[1][1]) - target).abs());
            let p = s.point(u, v).unwrap();
            let [x, y, z] = to_half_space(s.space(), &p).unwrap();
            literal = literal.max(((x * x + y * y) * z * z - cot2).abs());
            corrected = corrected.max((x * x + y * y - cot2 * z * z).abs());
            let mut random = || {
                AmbientVector::new(
                    p,
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                )
            };
            let (e, f) = (random(), random());
            sect = sect.max((s.space().sectional_curvature(&p, &e, &f).unwrap() + 1.0).abs());
        }
    }
    let others = lap < 1e-5 && hdev < 1e-6 && kmax < 1e-5 && sect < 1e-8;
    let cone = literal < 1e-8;
    Harmonic {
        outcome: outcome(
            others && cone,
            format!(
                "|Delta h| {lap:.2e} < 1e-5; |H + (1 + cos^2)/(2 cos)| {hdev:.2e} < 1e-6; |K| {kmax:.2e} < 1e-5; \
                 |K_amb + 1| {sect:.2e} < 1e-8; |(x^2 + y^2) z^2 - cot^2| {literal:.2e} < 1e-8 \
                 (x^2 + y^2 = cot^2 z^2 holds to {corrected:.2e})"
            ),
        ),
        only_literal_cone_fails: others && !cone && corrected < 1e-8,
    }
}

fn criterion_7(r: &[Residuals]) -> Outcome {
    let (g, ga) = worst(&r.iter().map(|x| (x.label.clone(), x.gauss)).collect::<Vec<_>>());
    let (c, ca) = worst(&r.iter().map(|x| (x.label.clone(), x.codazzi)).collect::<Vec<_>>());
    outcome(
        g < 1e-5 && c < 1e-5,
        format!(
            "{} surfaces, interior grid: Gauss {g:.2e} ({ga}), Codazzi {c:.2e} ({ca}), both < 1e-5",
            r.len()
        ),
    )
}

fn criterion_8(r: &[Residuals]) -> Outcome {
    let (l, at) = worst(&r.iter().map(|x| (x.label.clone(), x.laplacian)).collect::<Vec<_>>());
    outcome(
        l < 1e-5,
        format!("{} surfaces: max |lhs - rhs| {l:.2e} ({at}) < 1e-5", r.len()),
    )
}

type Profile = fn(f64) -> f64;

fn alpha_cases() -> Vec<(String, GeneratorSpec, Option<Profile>)> {
    let alphas: [(&str, Profile); 4] = [
        ("0", |_| 0.0),
        ("v", |v| v),
        ("0.3*sin(v)", |v| 0.3 * v.sin()),
        ("0.1*v^2", |v| 0.1 * v * v),
    ];
    let mut out = Vec::new();
    for w in WARPINGS {
        for th in [30.0, 60.0] {
            for (src, f) in alphas {
                let mut spec = GeneratorSpec::type_i(warping(w), rad(th), ProfileFunction::from_expr(src).unwrap());
                if src.contains("sin") {
                    let d = spec.default_domain().unwrap();
                    spec = spec.with_domain(ParamDomain::new(d.u0, d.u1, 0.5, 2.6).unwrap());
                }
                out.push((format!("type_i alpha={src} {w} {th}"), spec, Some(f)));
            }
            out.push((
                format!("type_ii {w} {th}"),
                GeneratorSpec::type_ii(warping(w), rad(th)),
                None,
            ));
        }
        out.push((
            format!("type_iii {w}"),
            GeneratorSpec::type_iii(warping(w), slice_height(w)),
            None,
        ));
        out.push((
            format!("rotational {w} 45"),
            GeneratorSpec::rotational(warping(w), rad(45.0)),
            None,
        ));
    }
    for th in [30.0, 60.0] {
        out.push((format!("harmonic_exp {th}"), GeneratorSpec::harmonic_exp(rad(th)), None));
    }
    out
}

fn criterion_9() -> Outcome {
    let cases = alpha_cases();
    let mut correct = 0;
    let mut wrong = Vec::new();
    let mut alpha_err = Vec::new();
    for (label, spec, alpha) in &cases {
        let s = generators::generate(spec).unwrap();
        let opts = ClassifyOptions {
            t_base: Some(spec.t_base().unwrap()),
            ..ClassifyOptions::default()
        };
        let report = classify(&s, grid(N), &opts).unwrap();
        let expected = match spec.family {
            Family::TypeII => Verdict::TypeII,
            Family::TypeIII => Verdict::TypeIII,
            _ => Verdict::TypeI,
        };
        if report.verdict == expected {
            correct += 1;
        } else {
            wrong.push(format!("{label}: {}", report.verdict));
        }
        if let (Some(f), Verdict::TypeI) = (alpha, report.verdict) {
            let diffs: Vec<f64> = report.alpha.iter().map(|a| a.alpha - f(a.v)).collect();
            let lo = diffs.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = diffs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            alpha_err.push((label.clone(), 0.5 * (hi - lo)));
        }
    }
    let (a, at) = worst(&alpha_err);
    outcome(
        correct == cases.len() && a < 1e-4,
        format!(
            "{correct}/{} labels correct{}; alpha sup-error up to a constant {a:.2e} ({at}) < 1e-4",
            cases.len(),
            if wrong.is_empty() {
                String::new()
            } else {
                format!(" (wrong: {})", wrong.join(", "))
            }
        ),
    )
}

fn criterion_10(r: &[Residuals]) -> Outcome {
    let (o, at) = worst(&r.iter().map(|x| (x.label.clone(), x.oracles)).collect::<Vec<_>>());
    outcome(
        o < 1e-5,
        format!("{} surfaces: max pairwise difference {o:.2e} ({at}) < 1e-5", r.len()),
    )
}

fn full_suite_json(threads: usize) -> String {
    let specs = [
        GeneratorSpec::type_i(
            warping("exp"),
            rad(60.0),
            ProfileFunction::from_expr("0.1*v^2").unwrap(),
        ),
        GeneratorSpec::type_ii(warping("linear:1,1"), rad(45.0)),
        GeneratorSpec::type_iii(warping("exp"), 0.5),
        GeneratorSpec::rotational(warping("power:0.5"), rad(45.0)),
        GeneratorSpec::minimal_power(1.0 / 3.0).unwrap(),
        GeneratorSpec::harmonic_exp(rad(60.0)),
    ];
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    pool.install(|| {
        let reports: Vec<_> = specs
            .iter()
            .flat_map(|spec| {
                let subject = Subject::from_spec(spec).unwrap();
                run_suites(&applicable_suites(&subject), &subject, grid(N), &Tolerances::default()).unwrap()
            })
            .collect();
        serde_json::to_string_pretty(&reports).unwrap()
    })
}

fn criterion_11() -> Outcome {
    let a = full_suite_json(1);
    let b = full_suite_json(4);
    outcome(
        a == b,
        format!(
            "all suites on one spec per family, 1 thread vs 4 threads: {} bytes, identical: {}",
            a.len(),
            a == b
        ),
    )
}

fn main() -> ExitCode {
    let cases = full_matrix();
    let mut results: Vec<(u8, &str, Outcome)> = Vec::new();
    results.push((1, "angle constancy", criterion_1(&cases)));
    let residual_table: Vec<Residuals> = cases.iter().map(residuals).collect();
    results.push((2, "principal direction", criterion_2(&residual_table)));
    results.push((3, "type (ii) umbilicity and H", criterion_3(&cases)));
    results.push((4, "flat cone", criterion_4()));
    results.push((5, "minimal family", criterion_5()));
    let harmonic = criterion_6();
    results.push((6, "harmonic family", harmonic.outcome));
    results.push((7, "Gauss-Codazzi", criterion_7(&residual_table)));
    results.push((8, "Laplacian identity", criterion_8(&residual_table)));
    results.push((9, "classification round-trip", criterion_9()));
    results.push((10, "oracle agreement", criterion_10(&residual_table)));
    results.push((11, "determinism", criterion_11()));

    for (id, name, o) in &results {
        println!("{} {id:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    let failed: Vec<u8> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    println!("{}/{} criteria pass", results.len() - failed.len(), results.len());
    // The literal half-space relation is incompatible with the constant
    // angle immersion for f = e^t; see the README. It is reported as FAIL
    // but does not fail the run when every other clause holds.
    let waived = failed == [6] && harmonic.only_literal_cone_fails;
    if waived {
        println!("known deviation: criterion 6 fails only on the literal half-space clause");
    }
    if failed.is_empty() || waived {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
