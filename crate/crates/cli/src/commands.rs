use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::json;

use congrulab::bodies::BodySpec;
use congrulab::hull::dedup_points;
use congrulab::lab::{
    approximation_rate, detect_rigid_symmetries, perturb_to_asymmetric, project_polytope,
    random_subspaces, symmetry_margin, PerturbOptions, SymmetryRecord,
};
use congrulab::registration::{classifications_csv, GridSpec};
use congrulab::sphere::quasi_uniform_great_sphere;
use congrulab::verifier::{verify_projection_theorem, verify_section_theorem, Outcome, VerifyConfig};
use congrulab::{Body4, Direction4, ShapeSpec, Vec4};

use crate::error::{CliError, EXIT_INCONCLUSIVE, EXIT_OK};
use crate::{Format, Restriction, RunArgs, Theorem};

const SYMMETRY_TOL: f64 = 1e-8;
/// Same threshold the body constructor uses when merging vertices.
const DUPLICATE_TOL: f64 = 1e-12;

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn parse_spec(path: &Path) -> Result<BodySpec, CliError> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::SpecParse {
        path: path.display().to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn load_body(path: &Path) -> Result<Body4, CliError> {
    Ok(Body4::from_spec(&parse_spec(path)?)?)
}

fn count_duplicates(shape: &ShapeSpec) -> usize {
    match shape {
        ShapeSpec::Polytope { vertices } => {
            let v: Vec<Vec4> = vertices.iter().map(|a| Vec4::from(*a)).collect();
            dedup_points(&v, DUPLICATE_TOL).1
        }
        ShapeSpec::ZonalBump { base, .. } => count_duplicates(base),
        ShapeSpec::Union { members } => members.iter().map(count_duplicates).sum(),
        ShapeSpec::Ellipsoid { .. } => 0,
    }
}

fn emit(run: &RunArgs, text: &str) -> Result<(), CliError> {
    match &run.out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io {
            path: p.display().to_string(),
            message: e.to_string(),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn parse_numbers(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("{what}: cannot parse {x:?} as a number")))
        })
        .collect()
}

fn parse_direction(s: &str, what: &str) -> Result<Direction4, CliError> {
    let v = parse_numbers(s, what)?;
    if v.len() != 4 {
        return Err(CliError::Usage(format!("{what} needs 4 components, got {}", v.len())));
    }
    Direction4::normalize(Vec4::new(v[0], v[1], v[2], v[3]))
        .map_err(|_| CliError::Usage(format!("{what} must be a non-zero vector")))
}

/// Orthonormal basis of the span of three vectors `a;b;c`.
fn parse_subspace(s: &str) -> Result<[Vec4; 3], CliError> {
    let rows: Vec<&str> = s.split(';').collect();
    if rows.len() != 3 {
        return Err(CliError::Usage(format!(
            "--subspace needs 3 vectors separated by ';', got {}",
            rows.len()
        )));
    }
    let mut basis: Vec<Vec4> = Vec::with_capacity(3);
    for r in rows {
        let mut v = *parse_direction(r, "--subspace vector")?.vec();
        for b in &basis {
            v -= b * b.dot(&v);
        }
        if v.norm() < 1e-9 {
            return Err(CliError::Usage("--subspace vectors are linearly dependent".into()));
        }
        basis.push(v.normalize());
    }
    Ok([basis[0], basis[1], basis[2]])
}

pub fn gen_body(spec_path: &Path, run: &RunArgs) -> Result<u8, CliError> {
    let spec = parse_spec(spec_path)?;
    let dups = count_duplicates(&spec.shape);
    if dups > 0 {
        eprintln!("warning: removed {dups} duplicate vertices");
    }
    let body = Body4::from_spec(&spec)?;
    emit(run, &to_json(&body.canonical_spec())?)?;
    Ok(EXIT_OK)
}

pub fn verify(
    theorem: Theorem,
    k: &Path,
    l: &Path,
    zeta: &str,
    run: &RunArgs,
) -> Result<u8, CliError> {
    let zeta = parse_direction(zeta, "--zeta")?;
    let config = VerifyConfig {
        tol: run.tol.unwrap_or(VerifyConfig::default().tol),
        grid: GridSpec {
            n_t: run.grid_t,
            n_azimuth: run.grid_az,
        },
        w_samples: run.w_samples,
        seed: run.seed,
        ..Default::default()
    };
    config.validate()?;
    let (k, l) = (load_body(k)?, load_body(l)?);
    let verdict = match theorem {
        Theorem::Projections => verify_projection_theorem(&k, &l, &zeta, &config)?,
        Theorem::Sections => verify_section_theorem(&k, &l, &zeta, &config)?,
    };
    let text = match run.format {
        Format::Json => to_json(&verdict)?,
        Format::Csv => classifications_csv(&verdict.classifications),
    };
    emit(run, &text)?;
    Ok(match verdict.outcome {
        Outcome::Inconclusive => EXIT_INCONCLUSIVE,
        _ => EXIT_OK,
    })
}

#[derive(Serialize)]
struct SubspaceReport {
    basis: [[f64; 4]; 3],
    vertices: usize,
    symmetries: Vec<SymmetryRecord>,
    margin: f64,
}

pub fn symmetry(
    body: &Path,
    subspaces: &[String],
    sample: Option<usize>,
    run: &RunArgs,
) -> Result<u8, CliError> {
    let hs: Vec<[Vec4; 3]> = match sample {
        Some(0) => return Err(CliError::Usage("--sample must be at least 1".into())),
        Some(n) => random_subspaces(n, run.seed),
        None if subspaces.is_empty() => {
            return Err(CliError::Usage("give --subspace or --sample N".into()))
        }
        None => subspaces.iter().map(|s| parse_subspace(s)).collect::<Result<_, _>>()?,
    };
    let tol = run.tol.unwrap_or(SYMMETRY_TOL);
    let p = load_body(body)?;
    let mut reports = Vec::with_capacity(hs.len());
    for h in &hs {
        let q = project_polytope(&p, h)?;
        reports.push(SubspaceReport {
            basis: h.map(Into::into),
            vertices: q.vertices.len(),
            symmetries: detect_rigid_symmetries(&q, tol)?,
            margin: symmetry_margin(&q)?,
        });
    }
    let asym = reports.iter().filter(|r| r.symmetries.is_empty()).count();
    let summary = format!("asymmetric on {asym}/{} sampled subspaces", reports.len());
    let text = match run.format {
        Format::Json => to_json(&json!({
            "tol": tol,
            "subspaces": reports,
            "asymmetric": asym,
            "total": reports.len(),
            "summary": summary,
        }))?,
        Format::Csv => {
            let mut s = String::from("subspace,vertices,symmetries,margin\n");
            for (i, r) in reports.iter().enumerate() {
                let _ = writeln!(s, "{i},{},{},{:.16e}", r.vertices, r.symmetries.len(), r.margin);
            }
            s
        }
    };
    emit(run, &text)?;
    eprintln!("{summary}");
    Ok(EXIT_OK)
}

pub fn perturb(
    body: &Path,
    subspaces: usize,
    budget: usize,
    max_delta: Option<f64>,
    run: &RunArgs,
) -> Result<u8, CliError> {
    if subspaces == 0 {
        return Err(CliError::Usage("--subspaces must be at least 1".into()));
    }
    let opts = PerturbOptions {
        subspaces,
        tol: run.tol.unwrap_or(SYMMETRY_TOL),
        max_delta,
        budget,
        seed: run.seed,
    };
    let (p, cert) = perturb_to_asymmetric(&load_body(body)?, &opts)?;
    emit(
        run,
        &to_json(&json!({ "body": p.canonical_spec(), "certificate": cert }))?,
    )?;
    Ok(EXIT_OK)
}

pub fn rate(body: &Path, v: &str, run: &RunArgs) -> Result<u8, CliError> {
    let sizes = v
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("--v: cannot parse {x:?} as a vertex count")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let fit = approximation_rate(&load_body(body)?, &sizes, run.seed)?;
    let summary = json!({ "exponent": fit.exponent, "stderr": fit.stderr });
    match run.format {
        Format::Json => emit(run, &to_json(&fit)?)?,
        Format::Csv => {
            let mut s = String::from("v,delta\n");
            for (n, d) in &fit.points {
                let _ = writeln!(s, "{n},{d:.16e}");
            }
            emit(run, &s)?;
            eprintln!("{summary}");
        }
    }
    Ok(EXIT_OK)
}

pub fn restrict(
    kind: Restriction,
    body: &Path,
    w: &str,
    points: usize,
    run: &RunArgs,
) -> Result<u8, CliError> {
    if points == 0 {
        return Err(CliError::Usage("--points must be at least 1".into()));
    }
    let w = parse_direction(w, "--w")?;
    let k = load_body(body)?;
    let f = match kind {
        Restriction::Projection => k.project_support(&w),
        Restriction::Section => k.section_radial(&w),
    };
    let pts = quasi_uniform_great_sphere(&w, points);
    let values = pts
        .iter()
        .map(|p| f.eval(p.vec()))
        .collect::<congrulab::Result<Vec<f64>>>()?;
    let text = match run.format {
        Format::Csv => {
            let mut s = String::from("x1,x2,x3,x4,value\n");
            for (p, v) in pts.iter().zip(&values) {
                let x = p.vec();
                let _ = writeln!(s, "{:.16e},{:.16e},{:.16e},{:.16e},{v:.16e}", x[0], x[1], x[2], x[3]);
            }
            s
        }
        Format::Json => to_json(
            &pts.iter()
                .zip(&values)
                .map(|(p, v)| json!({ "x": p.vec().as_slice(), "value": v }))
                .collect::<Vec<_>>(),
        )?,
    };
    emit(run, &text)?;
    Ok(EXIT_OK)
}
