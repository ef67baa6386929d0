use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tempfile::TempDir;

use congrulab::registration::GridSpec;
use congrulab::synthetic::{
    polytope_with_diameter, random_direction, random_orthogonal_direction, star_union_with_diameter,
    RandomPolynomial,
};
use congrulab::transforms::reflection_o;
use congrulab::verifier::{decide_functional_equation, Outcome, VerifyConfig};
use congrulab::{Body4, Direction4, Vec4};

const QUICK: [&str; 6] = ["--grid-t", "16", "--grid-az", "64", "--w-samples", "40"];

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_congrulab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn write_body(dir: &TempDir, name: &str, b: &Body4) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string(&b.spec()).unwrap()).unwrap();
    p
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn zeta_arg(z: &Direction4) -> String {
    let v = z.vec();
    format!("{},{},{},{}", v[0], v[1], v[2], v[3])
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn assert_schema_valid(v: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas/verdict.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).unwrap();
    if let Err(errors) = compiled.validate(v) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("verdict does not match schema: {msgs:#?}");
    };
}

#[test]
fn gen_body_canonical_round_trip() {
    let dir = TempDir::new().unwrap();
    let spec = write(
        &dir,
        "ell.json",
        r#"{"kind":"convex","shape":{"type":"ellipsoid","semiaxes":[1,2,3,4]},
            "transforms":[{"shift":[0.1,0,0,0]},{"rot":[0,1,0,0, 1,0,0,0, 0,0,1,0, 0,0,0,-1]}]}"#,
    );
    let first = run(&["gen-body", s(&spec)]);
    assert_eq!(first.status.code(), Some(0));
    let canon = write(&dir, "canon.json", std::str::from_utf8(&first.stdout).unwrap());
    let second = run(&["gen-body", s(&canon)]);
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let v: Value = stdout_json(&first);
    assert_eq!(v["transforms"], Value::Array(vec![]));
}

#[test]
fn gen_body_warns_on_duplicates() {
    let dir = TempDir::new().unwrap();
    let spec = write(
        &dir,
        "dup.json",
        r#"{"kind":"convex","shape":{"type":"polytope","vertices":[
            [1,0,0,0],[-1,0,0,0],[0,1,0,0],[0,-1,0,0],[0,0,1,0],[0,0,-1,0],
            [0,0,0,1],[0,0,0,-1],[1,0,0,0],[0,0,0,1]]}}"#,
    );
    let o = run(&["gen-body", s(&spec)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("removed 2 duplicate vertices"));
    let v = stdout_json(&o);
    assert_eq!(v["shape"]["vertices"].as_array().unwrap().len(), 8);
}

#[test]
fn gen_body_reports_parse_position() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "bad.json", "{\"kind\": \"convex\",\n  \"shape\": {\"type\": 3}}");
    let o = run(&["gen-body", s(&spec)]);
    assert_eq!(o.status.code(), Some(1));
    let v = stdout_json(&o);
    assert_eq!(v["error"]["kind"], "SpecParseError");
    assert_eq!(v["error"]["line"], 2);
    assert!(v["error"]["column"].as_u64().unwrap() > 0);
}

#[test]
fn verify_planted_projections() {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let zeta = random_direction(&mut rng);
    let k = polytope_with_diameter(&mut rng, &zeta, 16, 1.25, 1.15).unwrap();
    let b = random_direction(&mut rng).into_vec() * 0.3;
    let kp = write_body(&dir, "k.json", &k);
    let cases = [
        (k.translate(&b), "Equal", -b),
        (k.apply(&reflection_o(&zeta), &b), "OEqual", -reflection_o(&zeta).apply(&b)),
    ];
    for (l, outcome, expected) in cases {
        let lp = write_body(&dir, "l.json", &l);
        let z = zeta_arg(&zeta);
        let mut args = vec!["verify", "projections", s(&kp), s(&lp), "--zeta", &z];
        args.extend(QUICK);
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
        let v = stdout_json(&o);
        assert_schema_valid(&v);
        assert_eq!(v["outcome"], outcome);
        let t: Vec<f64> = serde_json::from_value(v["translation"].clone()).unwrap();
        assert!((Vec4::from_column_slice(&t) - expected).norm() < 1e-9);
    }
}

#[test]
fn verify_planted_sections() {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let zeta = random_direction(&mut rng);
    let k = star_union_with_diameter(&mut rng, &zeta, 3, 8, 1.25, 1.15).unwrap();
    let b = zeta.vec() * rng.gen_range(-0.1..0.1);
    let kp = write_body(&dir, "k.json", &k);
    let lp = write_body(&dir, "l.json", &k.apply(&reflection_o(&zeta), &b));
    let z = zeta_arg(&zeta);
    let mut args = vec!["verify", "sections", s(&kp), s(&lp), "--zeta", &z];
    args.extend(QUICK);
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_schema_valid(&v);
    assert_eq!(v["outcome"], "OEqual");
}

#[test]
fn verify_ball_vs_cube_is_a_hypothesis_failure() {
    let dir = TempDir::new().unwrap();
    let ball = write_body(&dir, "ball.json", &Body4::ball(1.0).unwrap());
    let cube = write_body(&dir, "cube.json", &Body4::cube(1.0));
    let o = run(&["verify", "projections", s(&ball), s(&cube), "--zeta", "1,1,1,1"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout_json(&o)["error"]["kind"], "DiameterHypothesisFailed");
}

#[test]
fn verify_csv_output() {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let zeta = random_direction(&mut rng);
    let k = polytope_with_diameter(&mut rng, &zeta, 16, 1.25, 1.15).unwrap();
    let kp = write_body(&dir, "k.json", &k);
    let z = zeta_arg(&zeta);
    let mut args = vec!["verify", "projections", s(&kp), s(&kp), "--zeta", &z, "--format", "csv"];
    args.extend(QUICK);
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0));
    let csv = String::from_utf8(o.stdout).unwrap();
    assert!(csv.starts_with("w1,w2,w3,w4,label,parameter,residual\n"));
    assert!(csv.lines().count() > 30);
}

#[test]
fn inconclusive_verdict_matches_schema() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let zeta = random_direction(&mut rng);
    let u = *random_orthogonal_direction(&mut rng, &zeta).vec();
    let f = RandomPolynomial::new(&mut rng, 8, 4);
    let o = *reflection_o(&zeta).matrix();
    let z = *zeta.vec();
    // same even part as f, unrelated odd part
    let g = |x: &Vec4| 0.5 * (f.value(x) + f.value(&(o * x))) + 0.5 * x.dot(&z) * x.dot(&u);
    let config = VerifyConfig {
        grid: GridSpec { n_t: 16, n_azimuth: 64 },
        w_samples: 16,
        even_t_nodes: 6,
        even_w_nodes: 16,
        circle_nodes: 32,
        certificate_points: 200,
        ..Default::default()
    };
    let v = decide_functional_equation(&f, &g, &zeta, &config).unwrap();
    assert_eq!(v.outcome, Outcome::Inconclusive);
    assert_schema_valid(&serde_json::to_value(&v).unwrap());
}

#[test]
fn symmetry_subcommand() {
    let dir = TempDir::new().unwrap();
    let cube = write_body(&dir, "cube.json", &Body4::cube(1.0));
    let o = run(&["symmetry", s(&cube), "--subspace", "1,0,0,0;0,1,0,0;0,0,1,0"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["subspaces"][0]["symmetries"].as_array().unwrap().len(), 47);
    assert!(String::from_utf8_lossy(&o.stderr).contains("asymmetric on 0/1 sampled subspaces"));

    let o = run(&["symmetry", s(&cube), "--sample", "0"]);
    assert_eq!(o.status.code(), Some(64));

    let out = dir.path().join("perturbed.json");
    let o = run(&["perturb", s(&cube), "--subspaces", "5", "--seed", "3", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let body = write(&dir, "p.json", &v["body"].to_string());
    let o = run(&["symmetry", s(&body), "--sample", "5", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("asymmetric on 5/5 sampled subspaces"));
}

#[test]
fn rate_subcommand() {
    let dir = TempDir::new().unwrap();
    let ball = write_body(&dir, "ball.json", &Body4::ball(1.0).unwrap());
    let o = run(&["rate", s(&ball), "--v", "40"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout_json(&o)["error"]["kind"], "InsufficientData");

    let args = ["rate", s(&ball), "--v", "40,80,160,320,640", "--seed", "2", "--format", "csv"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let csv = String::from_utf8(a.stdout).unwrap();
    assert_eq!(csv.lines().count(), 6);
    let summary: Value = serde_json::from_str(String::from_utf8_lossy(&a.stderr).trim()).unwrap();
    let e = summary["exponent"].as_f64().unwrap();
    assert!((e + 2.0 / 3.0).abs() <= 0.15, "{e}");
}

#[test]
fn restrict_exports_projection_support() {
    let dir = TempDir::new().unwrap();
    let cube = write_body(&dir, "cube.json", &Body4::cube(1.0));
    let o = run(&["restrict", "projection", s(&cube), "--w", "0,0,0,1", "--points", "10", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    for line in text.lines().skip(1) {
        let x: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!(x[3].abs() < 1e-12);
        assert!((x[4] - (x[0].abs() + x[1].abs() + x[2].abs())).abs() < 1e-12);
    }
}

#[test]
fn thread_count_must_be_positive() {
    let o = bin()
        .env("CONGRULAB_THREADS", "0")
        .args(["symmetry", "x.json", "--sample", "1"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(64));
}
