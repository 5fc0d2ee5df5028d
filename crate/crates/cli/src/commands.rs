use std::fs;

use epkit::ep::{EpStatus, PointProfile};
use epkit::matrix::dense_csv;
use epkit::metric::{admissible_v_interval, crypto_residual, MetricBundle};
use epkit::poly::multiplicity_profile;
use epkit::rational::parse_rational;
use epkit::spectra::{detect_complexification, sweep as run_sweep};
use epkit::{ep_for_path, fixture, secular_on_path, Error, Grid, ModelSpec, PathSpec};
use serde_json::{json, Value};

use crate::output::{io_err, CliError, RunDir};
use crate::{Common, PathArgs, SpecArgs};

struct Loaded {
    spec: ModelSpec,
    raw: Value,
    path: Option<String>,
}

fn load(args: &SpecArgs) -> Result<Loaded, CliError> {
    let text = fs::read_to_string(&args.spec).map_err(io_err(&args.spec))?;
    let raw: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", args.spec.display())))?;
    let mut spec = ModelSpec::from_json(&text)?;
    if let Some(shift) = &args.shift {
        spec = spec.with_shift(parse_rational(shift)?)?;
        spec.validate()?;
    }
    let path = match raw.get("path") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(other) => return Err(Error::Parse(format!("spec field \"path\" must be a string, got {other}")).into()),
    };
    Ok(Loaded { spec, raw, path })
}

fn record_spec(run: &mut RunDir, args: &SpecArgs, loaded: &Loaded) -> Result<(), CliError> {
    run.input("spec_file", args.spec.display().to_string())?;
    run.input("spec", &loaded.raw)?;
    if let Some(shift) = &args.shift {
        run.input("shift", shift)?;
    }
    Ok(())
}

fn resolve_path(loaded: &Loaded, args: &PathArgs) -> Result<PathSpec, CliError> {
    let slots = match (&args.path, &loaded.path) {
        (Some(p), _) | (None, Some(p)) => p.clone(),
        (None, None) => match loaded.spec.couplings() {
            Some(c) if c.k() == 0 => String::new(),
            _ => {
                return Err(Error::Constraint("no path given: pass --path or add \"path\" to the spec".into()).into())
            }
        },
    };
    Ok(PathSpec::for_model(&loaded.spec, &slots)?)
}

pub fn build(args: &SpecArgs, common: &Common) -> Result<(), CliError> {
    let loaded = load(args)?;
    let m = loaded.spec.build()?;
    let mut run = RunDir::create(common, "build")?;
    record_spec(&mut run, args, &loaded)?;
    let mut doc = serde_json::to_value(m.to_json())?;
    doc["family"] = loaded.spec.family().into();
    run.write_json("matrix.json", &doc)?;
    run.write("matrix.csv", &dense_csv(&m.to_f64().to_nalgebra()))?;
    println!("{} matrix, N = {}: matrix.json, matrix.csv", loaded.spec.family(), m.dim());
    run.finish()
}

pub fn metric(args: &SpecArgs, tridiag: bool, v: Option<&str>, tol: f64, common: &Common) -> Result<(), CliError> {
    let loaded = load(args)?;
    let couplings = loaded
        .spec
        .couplings()
        .ok_or_else(|| Error::Constraint(format!("metrics are built for boundary_well, not {}", loaded.spec.family())))?;
    let n = loaded.spec.dim();
    let v = v.map(parse_rational).transpose()?;
    let tridiag = tridiag || v.is_some();
    let bundle = MetricBundle::build(&couplings, n, tridiag.then(|| v.clone().unwrap_or_default()))?;
    let h = loaded.spec.build()?;
    let theta = bundle.theta();
    let residual = crypto_residual(&h, &theta)?;

    let mut run = RunDir::create(common, "metric")?;
    record_spec(&mut run, args, &loaded)?;
    run.input("tridiag", tridiag)?;
    if let Some(v) = &v {
        run.input("v", v.to_string())?;
    }

    let nonzero = residual.nonzero_count();
    if nonzero == 0 {
        println!("residual: exact-zero");
    } else {
        println!("residual: {nonzero} nonzero entries");
    }
    let mut doc = json!({ "metric": bundle, "residual_nonzero_entries": nonzero });
    if tridiag {
        run.input("tol", tol)?;
        let iv = admissible_v_interval(&bundle.diagonal, &bundle.pseudometric, tol)?;
        println!("admissible v: ({:.12}, {:.12})", iv.v_min(), iv.v_max());
        if let Some(v) = &v {
            let x = epkit::rational::to_f64(v);
            match iv.contains(x) {
                Some(true) => {}
                Some(false) => eprintln!("warning: metric not positive at v = {v}"),
                None => eprintln!("warning: v = {v} lies within {tol} of an end of the admissible interval"),
            }
        }
        doc["admissible_v"] = serde_json::to_value(&iv)?;
    }
    run.write_json("metric.json", &doc)?;
    run.write("metric.csv", &dense_csv(&theta.to_f64()))?;
    run.finish()
}

pub fn secular(args: &SpecArgs, path_args: &PathArgs, eval_t: Option<&str>, common: &Common) -> Result<(), CliError> {
    let loaded = load(args)?;
    let path = resolve_path(&loaded, path_args)?;
    let p = secular_on_path(&path);
    let mut run = RunDir::create(common, "secular")?;
    record_spec(&mut run, args, &loaded)?;
    run.input("path", &path)?;
    let pretty = p.display("s", "t");
    println!("{path}:");
    println!("p(s, t) = {pretty}");
    run.write_json("secular.json", &json!({ "path": path, "polynomial": p.to_json(), "pretty": pretty }))?;
    if let Some(t_text) = eval_t {
        let t = parse_rational(t_text)?;
        run.input("eval_t", t.to_string())?;
        let at = p.eval_inner(&t);
        let profile = multiplicity_profile(&at);
        println!("p(s, {t}) = {}", at.display("s"));
        println!("roots: {}", profile.describe("s"));
        run.write_json(
            "secular_at_t.json",
            &json!({ "t": t.to_string(), "polynomial": at.to_json("s"), "profile": profile }),
        )?;
    }
    run.finish()
}

pub fn sweep(
    args: &SpecArgs,
    path_args: &PathArgs,
    grid: &str,
    tol: f64,
    tracks: bool,
    common: &Common,
) -> Result<(), CliError> {
    let loaded = load(args)?;
    let path = resolve_path(&loaded, path_args)?;
    let grid: Grid = grid.parse()?;
    let res = run_sweep(&path, &grid)?;
    let events = detect_complexification(&res, tol)?;
    let mut run = RunDir::create(common, "sweep")?;
    record_spec(&mut run, args, &loaded)?;
    run.input("path", &path)?;
    run.input("grid", grid.to_string())?;
    run.input("tol", tol)?;
    run.input("tracks", tracks)?;
    run.write("sweep.csv", &if tracks { res.to_csv_tracks() } else { res.to_csv() })?;
    run.write_json("events.json", &json!({ "path": path, "events": events }))?;
    println!("{path}: {} grid points, {} complexification events", res.rows.len(), events.len());
    for e in &events {
        println!(
            "  t* ~ {:.9} in [{:.9}, {:.9}]: real count {} -> {}",
            e.t_star, e.t_lo, e.t_hi, e.real_before, e.real_after
        );
    }
    run.finish()
}

pub fn ep(args: &SpecArgs, path_args: &PathArgs, common: &Common) -> Result<(), CliError> {
    let loaded = load(args)?;
    let path = resolve_path(&loaded, path_args)?;
    let report = ep_for_path(&path)?;
    let mut run = RunDir::create(common, "ep")?;
    record_spec(&mut run, args, &loaded)?;
    run.input("path", &path)?;
    run.write_json("ep.json", &report)?;
    println!("{path}:");
    if report.status == EpStatus::DegenerateDiscriminant {
        println!("  discriminant vanishes identically: multiple roots along the whole path");
    }
    for point in &report.points {
        let location = match point.location.exact() {
            Some(t) => format!("t* = {t}"),
            None => format!("t* ~ {:.12}", point.approx),
        };
        let profile = match &point.profile {
            PointProfile::Exact(p) => p.describe("s"),
            PointProfile::Numerical(clusters) => clusters
                .iter()
                .filter(|c| c.multiplicity > 1)
                .map(|c| format!("s ~ {:.6}{:+.6}i (x{})", c.re, c.im, c.multiplicity))
                .collect::<Vec<_>>()
                .join(", "),
        };
        println!("  {location}: {profile}");
    }
    run.finish()
}

pub fn verify_fixtures(common: &Common) -> Result<(), CliError> {
    let report = fixture::verify_atm_fixture()?;
    let mut run = RunDir::create(common, "verify-fixtures")?;
    run.input("fixture", "atm_n8")?;
    run.write_json("fixtures.json", &report)?;
    println!("checksum: ok (sha256 {})", report.sha256);
    println!("degree: {} (labelled {})", report.degree, report.stated_degree_label);
    println!("p({}) = {}", report.root, report.residual);
    println!("positive real roots: {}", report.positive_real_roots);
    run.finish()?;
    if report.vanishes {
        Ok(())
    } else {
        Err(CliError::Check(format!("fixture polynomial does not vanish at D = {}", report.root)))
    }
}
