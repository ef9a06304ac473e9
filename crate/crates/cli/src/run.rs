use std::fmt;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use minkowski_fdm::export::{
    write_error_csv, write_matrix_csv, write_snapshots_csv, write_vertices_csv,
    write_vertices_json, ErrorRecord, RunRecord, StabilityRecord,
};
use minkowski_fdm::geometry::{cell_count, check_level};
use minkowski_fdm::{
    build_graph, dirichlet_error, heat_holder_bound, heat_solve, laplacian_matrix,
    renormalized_laplacian, stability_check, wave_holder_bound, wave_reversal_error, wave_solve,
    Boundary, Config, Dirichlet, Graph, Holder, Initial, Scheme, Stability,
};
use serde::Serialize;

use crate::args::{
    BoundArgs, CurveArgs, DirichletArgs, Format, HeatArgs, InitialSpec, LaplacianArgs, RunArgs,
    SchemeArg, WaveArgs,
};
use crate::manifest::sidecar;

/// Argument problem detected by the CLI itself (exit code 2).
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Rendered output plus the sidecar files that go next to it.
pub struct Rendered {
    pub body: Vec<u8>,
    pub sidecars: Vec<(&'static str, Vec<u8>)>,
}

impl Rendered {
    fn new(body: Vec<u8>) -> Self {
        Rendered {
            body,
            sidecars: Vec::new(),
        }
    }
}

fn json_bytes<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut b = serde_json::to_vec_pretty(v)?;
    b.push(b'\n');
    Ok(b)
}

pub fn curve(a: &CurveArgs) -> Result<Rendered> {
    let g: Graph = build_graph(a.m)?;
    let mut buf = Vec::new();
    match a.output.format {
        Format::Csv => write_vertices_csv(&g, &mut buf)?,
        Format::Json => {
            write_vertices_json(&g, &mut buf)?;
            buf.push(b'\n');
        }
    }
    Ok(Rendered::new(buf))
}

#[derive(Serialize)]
struct MatrixRecord {
    m: u32,
    renormalized: bool,
    dim: usize,
    sub: Vec<f64>,
    diag: Vec<f64>,
    sup: Vec<f64>,
}

pub fn laplacian(a: &LaplacianArgs) -> Result<Rendered> {
    let mat = if a.renormalized {
        renormalized_laplacian::<f64>(a.m)?
    } else {
        laplacian_matrix::<f64>(a.m)?
    };
    let body = match a.output.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_matrix_csv(&mat, &mut buf)?;
            buf
        }
        Format::Json => json_bytes(&MatrixRecord {
            m: a.m,
            renormalized: a.renormalized,
            dim: mat.dim(),
            sub: mat.sub().to_vec(),
            diag: mat.diag().to_vec(),
            sup: mat.sup().to_vec(),
        })?,
    };
    Ok(Rendered::new(body))
}

fn read_samples(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read samples {}", path.display()))?;
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .unwrap_or("");
    if first.parse::<f64>().is_ok() {
        return text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.parse::<f64>()
                    .map_err(|e| usage(format!("{}: {l:?}: {e}", path.display())))
            })
            .collect();
    }
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let col = rdr
        .headers()?
        .iter()
        .position(|h| h.trim() == "u")
        .ok_or_else(|| {
            usage(format!(
                "{}: expected one number per line or a CSV with a `u` column",
                path.display()
            ))
        })?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let v = rec.get(col).unwrap_or("").trim();
        out.push(
            v.parse::<f64>()
                .map_err(|e| usage(format!("{}: {v:?}: {e}", path.display())))?,
        );
    }
    Ok(out)
}

fn initial(spec: &InitialSpec, m: u32) -> Result<Initial> {
    check_level(m)?;
    Ok(match spec {
        InitialSpec::Zero => Initial::Zero,
        InitialSpec::Impulse(j) => Initial::Impulse(j.unwrap_or(cell_count(m) / 2)),
        InitialSpec::Harmonic(a, b) => Initial::Harmonic { a: *a, b: *b },
        InitialSpec::Sine(f) => Initial::ParameterSine { frequency: *f },
        InitialSpec::Samples(p) => Initial::Samples(read_samples(p)?),
    })
}

fn config(r: &RunArgs) -> Result<Config> {
    if !(r.horizon.is_finite() && r.horizon > 0.0) {
        return Err(usage(format!("--T must be positive, got {}", r.horizon)));
    }
    if r.steps == 0 {
        return Err(usage("--N must be at least 1"));
    }
    let growth = if r.blowup_factor == 0.0 {
        None
    } else if r.blowup_factor > 1.0 {
        Some(r.blowup_factor)
    } else {
        return Err(usage(format!(
            "--blowup-factor must exceed 1 (or be 0 to disable), got {}",
            r.blowup_factor
        )));
    };
    let mut cfg =
        Config::new(r.m, r.horizon, r.steps, initial(&r.initial, r.m)?).with_growth_limit(growth);
    if !r.snapshots.is_empty() {
        let (kept, dropped): (Vec<usize>, Vec<usize>) =
            r.snapshots.iter().partition(|&&s| s <= r.steps);
        if !dropped.is_empty() {
            eprintln!(
                "warning: snapshot steps {dropped:?} exceed N = {} and were clipped",
                r.steps
            );
        }
        cfg = cfg.with_snapshots(kept);
    }
    Ok(cfg)
}

fn report_stability(s: &Stability) {
    if !s.stable {
        let limit = match s.scheme {
            Scheme::Heat => "2",
            Scheme::Wave => "4",
        };
        eprintln!(
            "warning: {} scheme is unstable (ratio {}, spectral bound {} > {limit}); divergence is expected",
            s.scheme, s.ratio, s.spectral_bound
        );
    }
}

fn render_run(
    scheme: Scheme,
    r: &RunArgs,
    cfg: &Config,
    velocity: Option<String>,
    stability: &Stability,
    snaps: &[minkowski_fdm::Snapshot],
) -> Result<Rendered> {
    match r.output.format {
        Format::Csv => {
            let g: Graph = build_graph(r.m)?;
            let mut buf = Vec::new();
            write_snapshots_csv(&g, snaps, &mut buf)?;
            let mut out = Rendered::new(buf);
            out.sidecars.push((
                "stability.json",
                json_bytes(&StabilityRecord::from(stability))?,
            ));
            Ok(out)
        }
        Format::Json => {
            let initial = r.initial.to_string();
            let rec = RunRecord::new(
                scheme,
                r.m,
                &cfg.horizon,
                cfg.steps,
                initial,
                velocity,
                stability,
                snaps,
            );
            Ok(Rendered::new(json_bytes(&rec)?))
        }
    }
}

pub fn heat(a: &HeatArgs) -> Result<Rendered> {
    let cfg = config(&a.run)?;
    let stability = stability_check(Scheme::Heat, a.run.m, &cfg.step_size())?;
    report_stability(&stability);
    let snaps = heat_solve(&cfg)?;
    render_run(Scheme::Heat, &a.run, &cfg, None, &stability, &snaps)
}

#[derive(Serialize)]
struct ReverseRecord {
    steps: usize,
    recovery_error: f64,
}

pub fn wave(a: &WaveArgs) -> Result<Rendered> {
    let cfg = config(&a.run)?.with_velocity(initial(&a.velocity, a.run.m)?);
    let stability = stability_check(Scheme::Wave, a.run.m, &cfg.step_size())?;
    report_stability(&stability);
    let snaps = wave_solve(&cfg)?;
    let mut out = render_run(
        Scheme::Wave,
        &a.run,
        &cfg,
        Some(a.velocity.to_string()),
        &stability,
        &snaps,
    )?;
    if a.check_reverse {
        let err = wave_reversal_error(&cfg)?;
        eprintln!(
            "reverse check: max-norm recovery error of U(0) after {} steps = {err:e}",
            cfg.steps
        );
        out.sidecars.push((
            "reverse.json",
            json_bytes(&ReverseRecord {
                steps: cfg.steps,
                recovery_error: err,
            })?,
        ));
    }
    Ok(out)
}

pub fn dirichlet(a: &DirichletArgs) -> Result<Rendered> {
    if !(a.q.is_finite() && a.q > 0.0) {
        return Err(usage(format!("--q must be positive, got {}", a.q)));
    }
    let records =
        a.m.levels()
            .map(|m| {
                let p = Dirichlet::new(m, a.q, Boundary::new(a.a, a.b));
                Ok(ErrorRecord::from(&dirichlet_error(&p)?))
            })
            .collect::<Result<Vec<_>>>()?;
    let body = match a.output.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_error_csv(&records, &mut buf)?;
            buf
        }
        Format::Json => json_bytes(&records)?,
    };
    Ok(Rendered::new(body))
}

#[derive(Serialize)]
struct BoundRecord {
    scheme: String,
    alpha: f64,
    c: f64,
    m: u32,
    h: f64,
    bound: f64,
    ratio: f64,
}

pub fn bound(a: &BoundArgs) -> Result<Rendered> {
    if !(a.h.is_finite() && a.h > 0.0) {
        return Err(usage(format!("--h must be positive, got {}", a.h)));
    }
    let p = Holder::new(a.alpha, a.c)?;
    let (scheme, bound) = match a.scheme {
        SchemeArg::Heat => (Scheme::Heat, heat_holder_bound(&p, a.m, a.h)?),
        SchemeArg::Wave => (Scheme::Wave, wave_holder_bound(&p, a.m, a.h)?),
    };
    let stability = stability_check(scheme, a.m, &a.h)?;
    let rec = BoundRecord {
        scheme: scheme.to_string(),
        alpha: a.alpha,
        c: a.c,
        m: a.m,
        h: a.h,
        bound,
        ratio: stability.ratio,
    };
    let body = match a.output.format {
        Format::Json => json_bytes(&rec)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.serialize(&rec)?;
            w.into_inner().map_err(|e| e.into_error())?
        }
    };
    Ok(Rendered::new(body))
}

/// Write the body to `out` (or stdout) and any sidecars next to it.
pub fn emit(r: &Rendered, out: Option<&Path>) -> Result<()> {
    use std::io::Write;
    match out {
        Some(path) => {
            fs::write(path, &r.body).with_context(|| format!("cannot write {}", path.display()))?;
            for (suffix, bytes) in &r.sidecars {
                let p = sidecar(path, suffix);
                fs::write(&p, bytes).with_context(|| format!("cannot write {}", p.display()))?;
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(&r.body)?;
            stdout.flush()?;
        }
    }
    Ok(())
}
