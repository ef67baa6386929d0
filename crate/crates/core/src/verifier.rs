//! End-to-end decisions: the functional equation `f∘φ_w = g` on S³, and the
//! two congruence theorems for projections and sections built on it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bodies::Body4;
use crate::error::{Error, Result};
use crate::func::{parity_decompose, Composed, SphereFn};
use crate::funk::{even_parts_equal, EvenPartReport};
use crate::lab::{detect_rigid_symmetries, project_polytope};
use crate::registration::{
    classify_direction, detect_u_pi_symmetry, zeta_symmetry_residual, Classification, GridSpec,
    Label, PiSymmetry,
};
use crate::sphere::{
    gauss_legendre, orthonormal_complement, quasi_uniform_great_sphere, quasi_uniform_s3,
    Direction4, SphereFrame, Vec4,
};
use crate::synthetic::random_direction;
use crate::transforms::reflection_o;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TolMode {
    /// `tol` is multiplied by the sup norm of the inputs.
    Relative,
    Absolute,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub tol: f64,
    pub tol_mode: TolMode,
    pub grid: GridSpec,
    pub w_samples: usize,
    /// Latitudes and great circles for the even-part comparison.
    pub even_t_nodes: usize,
    pub even_w_nodes: usize,
    pub circle_nodes: usize,
    /// Fresh points for the final certificate.
    pub certificate_points: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            tol_mode: TolMode::Relative,
            grid: GridSpec::default(),
            w_samples: 200,
            even_t_nodes: 16,
            even_w_nodes: 128,
            circle_nodes: 64,
            certificate_points: 2000,
            seed: 0,
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::ConfigInvalid(m.into()));
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return bad("tol must be positive");
        }
        if self.grid.n_t < 2 || self.grid.n_t > 1024 {
            return bad("grid n_t must lie in [2, 1024]");
        }
        if self.grid.n_azimuth < 8 || !self.grid.n_azimuth.is_multiple_of(2) || self.grid.n_azimuth > 8192 {
            return bad("grid n_azimuth must be even and lie in [8, 8192]");
        }
        if self.w_samples == 0 || self.even_t_nodes == 0 || self.even_w_nodes == 0 {
            return bad("sample counts must be positive");
        }
        if self.circle_nodes < 4 || self.certificate_points == 0 {
            return bad("circle_nodes >= 4 and certificate_points >= 1 required");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    /// `f = g` (bodies: `K = L + b`).
    Equal,
    /// `f = g∘𝒪` (bodies: `K = 𝒪L + b`).
    OEqual,
    Both,
    /// The odd parts vanish, found through the mixed-label route.
    ZeroOdd,
    Inconclusive,
}

impl Outcome {
    pub fn is_conclusive(&self) -> bool {
        !matches!(self, Outcome::Inconclusive)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiameterSummary {
    pub length: f64,
    pub count: usize,
    pub midpoint: [f64; 4],
}

/// Witnesses for a direction labeled Ψ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsiReport {
    pub w: Direction4,
    pub axis_azimuth: f64,
    /// `sup |f∘φ − f|` for the half-turn about ζ on S²(w).
    pub zeta_pi_residual: f64,
    pub u_pi_symmetry: Option<PiSymmetry>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    /// Absolute tolerance used by the registrations.
    pub tol_abs: f64,
    pub even_parts: Option<EvenPartReport>,
    pub odd_sup: f64,
    /// Directions whose odd parts vanish to tolerance.
    pub vanishing_directions: usize,
    pub max_verification_residual: f64,
    /// `sup |f − g|` (Equal) or `sup |f − g∘𝒪|` (OEqual) on fresh points.
    pub certificate_residual: Option<f64>,
    pub symmetry_violations: Vec<Direction4>,
    pub psi: Vec<PsiReport>,
    pub diameters_k: Option<DiameterSummary>,
    pub diameters_l: Option<DiameterSummary>,
    pub width_k_zeta: Option<f64>,
    pub width_l_zeta: Option<f64>,
    pub excluded_directions: usize,
    pub congruence_residual_max: Option<f64>,
    /// Non-identity rigid symmetries of `K|ζ⊥` (polytopes, outcome Both).
    pub ground_symmetries: Option<usize>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub reason: Option<String>,
    pub translation: Option<[f64; 4]>,
    pub tol: f64,
    pub tol_mode: TolMode,
    pub grid: GridSpec,
    pub classifications: Vec<Classification>,
    pub hypothesis_report: HypothesisReport,
}

impl Verdict {
    fn new(config: &VerifyConfig, report: HypothesisReport) -> Self {
        Self {
            outcome: Outcome::Inconclusive,
            reason: None,
            translation: None,
            tol: config.tol,
            tol_mode: config.tol_mode,
            grid: config.grid,
            classifications: Vec::new(),
            hypothesis_report: report,
        }
    }

    fn inconclusive(mut self, reason: impl Into<String>) -> Self {
        self.outcome = Outcome::Inconclusive;
        self.reason = Some(reason.into());
        self
    }
}

fn sup_on(f: &dyn SphereFn, pts: &[Vec4]) -> Result<f64> {
    let v: Vec<f64> = pts
        .par_iter()
        .map(|p| f.eval(p).map(f64::abs))
        .collect::<Result<_>>()?;
    Ok(v.into_iter().fold(0.0, f64::max))
}

fn sup_diff(f: &dyn SphereFn, g: &dyn SphereFn, pts: &[Vec4]) -> Result<f64> {
    let v: Vec<f64> = pts
        .par_iter()
        .map(|p| Ok((f.eval(p)? - g.eval(p)?).abs()))
        .collect::<Result<_>>()?;
    Ok(v.into_iter().fold(0.0, f64::max))
}

fn fresh_points(n: usize, seed: u64) -> Vec<Vec4> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x5eed));
    (0..n).map(|_| random_direction(&mut rng).into_vec()).collect()
}

fn absolute_tol(f: &dyn SphereFn, g: &dyn SphereFn, config: &VerifyConfig) -> Result<f64> {
    Ok(match config.tol_mode {
        TolMode::Absolute => config.tol,
        TolMode::Relative => {
            let pts: Vec<Vec4> = quasi_uniform_s3(4096).iter().map(|p| *p.vec()).collect();
            let scale = sup_on(f, &pts)?.max(sup_on(g, &pts)?);
            config.tol * scale.max(f64::MIN_POSITIVE)
        }
    })
}

/// Decides whether `f = g` or `f = g∘𝒪` on S³ from per-direction
/// registrations of the 𝒪-odd parts.
pub fn decide_functional_equation(
    f: &dyn SphereFn,
    g: &dyn SphereFn,
    zeta: &Direction4,
    config: &VerifyConfig,
) -> Result<Verdict> {
    config.validate()?;
    let ws = quasi_uniform_great_sphere(zeta, config.w_samples);
    let tol_abs = absolute_tol(f, g, config)?;
    decide_on(f, g, zeta, config, &ws, tol_abs, HypothesisReport::default())
}

fn decide_on(
    f: &dyn SphereFn,
    g: &dyn SphereFn,
    zeta: &Direction4,
    config: &VerifyConfig,
    ws: &[Direction4],
    tol_abs: f64,
    mut report: HypothesisReport,
) -> Result<Verdict> {
    report.tol_abs = tol_abs;
    let verdict = Verdict::new(config, HypothesisReport::default());

    // even parts
    let (t_nodes, _) = gauss_legendre(config.even_t_nodes);
    let even_ws = quasi_uniform_great_sphere(zeta, config.even_w_nodes);
    let even = even_parts_equal(f, g, zeta, &t_nodes, &even_ws, config.circle_nodes, tol_abs)?;
    let even_ok = even.equal;
    let even_dev = even.direct_deviation;
    report.even_parts = Some(even);
    if !even_ok {
        return Ok(Verdict {
            hypothesis_report: report,
            ..verdict
        }
        .inconclusive(format!("even parts differ (deviation {even_dev:.3e})")));
    }

    // odd parts
    let (_, fo) = parity_decompose(f, zeta);
    let (_, go) = parity_decompose(g, zeta);
    let fresh = fresh_points(config.certificate_points, config.seed);
    report.odd_sup = sup_on(&fo, &fresh)?.max(sup_on(&go, &fresh)?);

    let classes: Vec<Classification> = ws
        .par_iter()
        .map(|w| classify_direction(&fo, &go, &SphereFrame::new(*zeta, *w)?, config.grid, tol_abs))
        .collect::<Result<_>>()?;

    let vanishing = |c: &Classification| c.signal <= tol_abs;
    report.vanishing_directions = classes.iter().filter(|c| vanishing(c)).count();
    report.symmetry_violations = classes
        .iter()
        .filter(|c| c.symmetry_violation && !vanishing(c))
        .map(|c| c.w)
        .collect();
    report.max_verification_residual = classes
        .iter()
        .filter(|c| !vanishing(c))
        .map(|c| c.witness.residual)
        .fold(0.0, f64::max);

    let active: Vec<&Classification> = classes.iter().filter(|c| !vanishing(c)).collect();
    let count = |pred: &dyn Fn(&Label) -> bool| active.iter().filter(|c| pred(&c.label)).count();
    let n_xi0 = count(&|l| matches!(l, Label::Xi { alpha } if *alpha == 0.0));
    let n_xi1 = count(&|l| matches!(l, Label::Xi { alpha } if *alpha == 1.0));
    let n_psi = count(&|l| matches!(l, Label::Psi { .. }));
    let n_none = count(&|l| matches!(l, Label::None));
    let n_other = active.len() - n_xi0 - n_xi1 - n_psi - n_none;

    let o = *reflection_o(zeta).matrix();
    let g_o = Composed { f: g, m: o };
    let mut out = Verdict {
        classifications: classes.clone(),
        ..verdict
    };

    if active.is_empty() {
        let d_eq = sup_diff(f, g, &fresh)?;
        let d_o = sup_diff(f, &g_o, &fresh)?;
        report.certificate_residual = Some(d_eq.max(d_o));
        out.hypothesis_report = report;
        if d_eq <= 5.0 * tol_abs && d_o <= 5.0 * tol_abs {
            out.outcome = Outcome::Both;
            return Ok(out);
        }
        return Ok(out.inconclusive("odd parts vanish on the sample but not on fresh points"));
    }
    if n_none > 0 {
        out.hypothesis_report = report;
        return Ok(out.inconclusive(format!(
            "{n_none} of {} directions admit no rotation within tolerance",
            active.len()
        )));
    }
    if n_psi > 0 {
        for c in active.iter().filter(|c| matches!(c.label, Label::Psi { .. })).take(8) {
            let frame = SphereFrame::new(*zeta, c.w)?;
            report.psi.push(PsiReport {
                w: c.w,
                axis_azimuth: c.witness.parameter,
                zeta_pi_residual: zeta_symmetry_residual(&fo, &c.w, zeta, 1.0, config.grid)?,
                u_pi_symmetry: detect_u_pi_symmetry(&fo, &frame, config.grid, tol_abs)?,
            });
        }
        out.hypothesis_report = report;
        return Ok(out.inconclusive(format!(
            "{n_psi} directions need a rotation flipping zeta; this is excluded in exact \
             arithmetic, so the data violate the symmetry hypotheses"
        )));
    }
    if n_other > 0 {
        out.hypothesis_report = report;
        return Ok(out.inconclusive(format!(
            "{n_other} directions register with a rotation angle away from 0 and pi while \
             the odd part is non-zero there"
        )));
    }
    if n_xi0 > 0 && n_xi1 > 0 {
        out.hypothesis_report = report.clone();
        if report.odd_sup <= tol_abs {
            out.outcome = Outcome::ZeroOdd;
            return Ok(out);
        }
        return Ok(out.inconclusive(format!(
            "mixed labels ({n_xi0} identity, {n_xi1} half-turn) with non-zero odd part"
        )));
    }
    let (outcome, residual) = if n_xi0 > 0 {
        (Outcome::Equal, sup_diff(f, g, &fresh)?)
    } else {
        (Outcome::OEqual, sup_diff(f, &g_o, &fresh)?)
    };
    report.certificate_residual = Some(residual);
    out.hypothesis_report = report;
    if residual > 5.0 * tol_abs {
        return Ok(out.inconclusive(format!(
            "certificate failed on fresh points (residual {residual:.3e})"
        )));
    }
    out.outcome = outcome;
    Ok(out)
}

fn summary(d: &crate::bodies::DiameterSet, idx: usize) -> DiameterSummary {
    let (z, y) = d.endpoints[idx];
    DiameterSummary {
        length: d.length,
        count: d.directions.len(),
        midpoint: ((Vec4::from(z) + Vec4::from(y)) * 0.5).into(),
    }
}

/// Sample directions of S²(ζ), minus those orthogonal (to 1e−3) to another
/// diameter direction.
fn omega_sample(zeta: &Direction4, n: usize, others: &[Direction4]) -> (Vec<Direction4>, usize) {
    let all = quasi_uniform_great_sphere(zeta, n);
    let total = all.len();
    let kept: Vec<Direction4> = all
        .into_iter()
        .filter(|w| others.iter().all(|e| w.dot(e).abs() >= 1e-3))
        .collect();
    let excluded = total - kept.len();
    (kept, excluded)
}

/// Certifies `f∘φ_w = g` on every sampled S²(w).
fn certify_congruence(
    f: &dyn SphereFn,
    g: &dyn SphereFn,
    zeta: &Direction4,
    ws: &[Direction4],
    grid: GridSpec,
    tol_abs: f64,
) -> Result<f64> {
    let res: Vec<(Direction4, f64)> = ws
        .par_iter()
        .map(|w| {
            let c = classify_direction(f, g, &SphereFrame::new(*zeta, *w)?, grid, tol_abs)?;
            Ok((*w, c.witness.residual))
        })
        .collect::<Result<_>>()?;
    let worst = res
        .iter()
        .cloned()
        .fold(None::<(Direction4, f64)>, |b, x| match b {
            Some(b) if b.1 >= x.1 => Some(b),
            _ => Some(x),
        });
    match worst {
        Some((w, r)) if r > tol_abs => Err(Error::CongruenceHypothesisFailed {
            w: (*w.vec()).into(),
            residual: r,
        }),
        Some((_, r)) => Ok(r),
        None => Err(Error::EmptyInput),
    }
}

fn diameters_of(b: &Body4, name: &str) -> Result<crate::bodies::DiameterSet> {
    match b.find_diameters(None) {
        Err(Error::DegenerateBody) => Err(Error::DiameterHypothesisFailed(format!(
            "{name} has constant width, so every direction is a diameter"
        ))),
        other => other,
    }
}

/// Decides `K = L + b` or `K = 𝒪L + b` from congruent side projections.
pub fn verify_projection_theorem(
    k: &Body4,
    l: &Body4,
    zeta: &Direction4,
    config: &VerifyConfig,
) -> Result<Verdict> {
    config.validate()?;
    let dk = diameters_of(k, "K")?;
    let dl = diameters_of(l, "L")?;
    let angle = 1e-4;
    let ik = dk.find(zeta, angle).ok_or_else(|| {
        Error::DiameterHypothesisFailed("zeta is not a diameter direction of K".into())
    })?;
    let il = dl.find(zeta, angle).ok_or_else(|| {
        Error::DiameterHypothesisFailed("zeta is not a diameter direction of L".into())
    })?;
    let len_tol = config.tol * dk.length.max(dl.length);
    if (dk.length - dl.length).abs() > len_tol {
        return Err(Error::DiameterHypothesisFailed(format!(
            "diameter lengths differ: {} vs {}",
            dk.length, dl.length
        )));
    }
    let (sk, sl) = (summary(&dk, ik), summary(&dl, il));
    let a_k = -Vec4::from(sk.midpoint);
    let a_l = -Vec4::from(sl.midpoint);
    let kt = k.translate(&a_k);
    let lt = l.translate(&a_l);

    let others: Vec<Direction4> = dk
        .directions
        .iter()
        .chain(&dl.directions)
        .filter(|d| d.line_angle_to(zeta) > angle)
        .copied()
        .collect();
    let (ws, excluded) = omega_sample(zeta, config.w_samples, &others);
    if ws.is_empty() {
        return Err(Error::DiameterHypothesisFailed(
            "every sampled direction is excluded by other diameters".into(),
        ));
    }
    let (hk, hl) = (kt.support_fn(), lt.support_fn());
    let tol_abs = absolute_tol(&hk, &hl, config)?;
    let congruence = certify_congruence(&hk, &hl, zeta, &ws, config.grid, tol_abs)?;

    let report = HypothesisReport {
        diameters_k: Some(sk),
        diameters_l: Some(sl),
        width_k_zeta: Some(k.width(zeta.vec())?),
        width_l_zeta: Some(l.width(zeta.vec())?),
        excluded_directions: excluded,
        congruence_residual_max: Some(congruence),
        ..Default::default()
    };
    let mut v = decide_on(&hk, &hl, zeta, config, &ws, tol_abs, report)?;
    let o = reflection_o(zeta);
    v.translation = match v.outcome {
        Outcome::Equal | Outcome::Both | Outcome::ZeroOdd => Some((a_l - a_k).into()),
        Outcome::OEqual => Some((o.apply(&a_l) - a_k).into()),
        Outcome::Inconclusive => None,
    };
    if v.outcome == Outcome::Both {
        if let (Some(_), Some(_)) = (k.vertices(), l.vertices()) {
            let ground = orthonormal_complement(zeta);
            let q = project_polytope(k, &ground)?;
            let n = detect_rigid_symmetries(&q, 1e-8 * dk.length)?.len();
            v.hypothesis_report.ground_symmetries = Some(n);
            v.hypothesis_report
                .notes
                .push("translation reported for K = L + b; K = OL + Ob also holds".into());
        }
    }
    Ok(v)
}

fn star_check(body: &Body4, zeta: &Direction4) -> Result<()> {
    let probe: Vec<Vec4> = quasi_uniform_s3(512)
        .iter()
        .map(|p| *p.vec())
        .chain([*zeta.vec(), -zeta.vec()])
        .collect();
    for p in &probe {
        match body.radial(p) {
            Ok(_) => {}
            Err(Error::OriginOutside) => return Err(Error::StarShapednessLost),
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

/// Decides `K = L + b` or `K = 𝒪L + b`, `b ∥ ζ`, from congruent central
/// sections.
pub fn verify_section_theorem(
    k: &Body4,
    l: &Body4,
    zeta: &Direction4,
    config: &VerifyConfig,
) -> Result<Verdict> {
    config.validate()?;
    star_check(k, zeta)?;
    star_check(l, zeta)?;
    let z = *zeta.vec();
    let dk = k.hull_diameters(None)?;
    let dl = l.hull_diameters(None)?;
    let chord = |b: &Body4| -> Result<f64> { Ok(b.radial(&z)? + b.radial(&-z)?) };
    let (ck, cl) = (chord(k)?, chord(l)?);
    let slack = config.tol * dk.length.max(dl.length);
    if ck < dk.length - slack {
        return Err(Error::DiameterHypothesisFailed(format!(
            "K has no diameter through the origin parallel to zeta (chord {ck}, diameter {})",
            dk.length
        )));
    }
    if cl < dl.length - slack {
        return Err(Error::DiameterHypothesisFailed(format!(
            "L has no diameter through the origin parallel to zeta (chord {cl}, diameter {})",
            dl.length
        )));
    }
    if (ck - cl).abs() > slack {
        return Err(Error::DiameterHypothesisFailed(format!(
            "diameter lengths differ: {ck} vs {cl}"
        )));
    }

    let ws = quasi_uniform_great_sphere(zeta, config.w_samples);
    let rk = k.radial_fn();
    let a1 = z * (k.radial(&z)? - l.radial(&z)?);
    let a2 = z * (k.radial(&-z)? - l.radial(&z)?);
    let mut candidates = vec![a1];
    if (a2 - a1).norm() > slack {
        candidates.push(a2);
    }
    let probe: Vec<Direction4> = ws.iter().step_by((ws.len() / 8).max(1)).copied().collect();
    let mut best: Option<(Vec4, Body4, f64)> = None;
    let mut star_lost = 0;
    let mut tol_abs = config.tol;
    for a in candidates {
        let shifted = l.translate(&a);
        match star_check(&shifted, zeta) {
            Err(Error::StarShapednessLost) => {
                star_lost += 1;
                continue;
            }
            other => other?,
        }
        let rl = shifted.radial_fn();
        let t = absolute_tol(&rk, &rl, config)?;
        let worst = probe
            .par_iter()
            .map(|w| {
                let c = classify_direction(&rk, &rl, &SphereFrame::new(*zeta, *w)?, config.grid, t)?;
                Ok(c.witness.residual)
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        if best.as_ref().is_none_or(|b| worst < b.2) {
            tol_abs = t;
            best = Some((a, shifted, worst));
        }
    }
    let Some((a, shifted, _)) = best else {
        debug_assert!(star_lost > 0);
        return Err(Error::StarShapednessLost);
    };
    let rl = shifted.radial_fn();
    let congruence = certify_congruence(&rk, &rl, zeta, &ws, config.grid, tol_abs)?;
    let report = HypothesisReport {
        diameters_k: Some(DiameterSummary {
            length: ck,
            count: dk.directions.len(),
            midpoint: (z * 0.5 * (k.radial(&z)? - k.radial(&-z)?)).into(),
        }),
        diameters_l: Some(DiameterSummary {
            length: cl,
            count: dl.directions.len(),
            midpoint: (z * 0.5 * (l.radial(&z)? - l.radial(&-z)?)).into(),
        }),
        congruence_residual_max: Some(congruence),
        ..Default::default()
    };
    let mut v = decide_on(&rk, &rl, zeta, config, &ws, tol_abs, report)?;
    let o = reflection_o(zeta);
    v.translation = match v.outcome {
        Outcome::Equal | Outcome::Both | Outcome::ZeroOdd => Some(a.into()),
        Outcome::OEqual => Some(o.apply(&a).into()),
        Outcome::Inconclusive => None,
    };
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::RandomPolynomial;

    fn quick() -> VerifyConfig {
        VerifyConfig {
            grid: GridSpec { n_t: 12, n_azimuth: 32 },
            w_samples: 12,
            even_t_nodes: 6,
            even_w_nodes: 16,
            circle_nodes: 32,
            certificate_points: 300,
            ..Default::default()
        }
    }

    fn zeta() -> Direction4 {
        Direction4::from_array([0.5, 0.5, -0.5, 0.5]).unwrap()
    }

    #[test]
    fn config_validation() {
        let mut c = quick();
        c.tol = 0.0;
        assert!(matches!(c.validate(), Err(Error::ConfigInvalid(_))));
        let mut c = quick();
        c.grid.n_azimuth = 31;
        assert!(matches!(c.validate(), Err(Error::ConfigInvalid(_))));
        let f = |p: &Vec4| p[0];
        let mut c = quick();
        c.w_samples = 0;
        assert!(decide_functional_equation(&f, &f, &zeta(), &c).is_err());
    }

    #[test]
    fn trichotomy_examples() {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = RandomPolynomial::new(&mut rng, 8, 4);
        let z = zeta();
        let o = *reflection_o(&z).matrix();
        let f = |x: &Vec4| p.value(x);
        let v = decide_functional_equation(&f, &f, &z, &quick()).unwrap();
        assert_eq!(v.outcome, Outcome::Equal, "{:?}", v.reason);
        let fo = Composed { f: &f, m: o };
        let v = decide_functional_equation(&f, &fo, &z, &quick()).unwrap();
        assert_eq!(v.outcome, Outcome::OEqual, "{:?}", v.reason);
        let even = |x: &Vec4| p.value(x) + p.value(&(o * x));
        let v = decide_functional_equation(&even, &even, &z, &quick()).unwrap();
        assert_eq!(v.outcome, Outcome::Both, "{:?}", v.reason);
    }

    #[test]
    fn unrelated_functions_are_inconclusive() {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let p = RandomPolynomial::new(&mut rng, 8, 4);
        let q = RandomPolynomial::new(&mut rng, 8, 4);
        let v = decide_functional_equation(&p, &q, &zeta(), &quick()).unwrap();
        assert_eq!(v.outcome, Outcome::Inconclusive);
        assert!(v.reason.unwrap().contains("even parts"));
    }

    #[test]
    fn ball_against_ellipsoid_fails_diameter_hypothesis() {
        let k = Body4::ellipsoid([2.0, 1.0, 1.0, 1.0], None).unwrap();
        let l = Body4::ball(1.0).unwrap();
        let z = Direction4::axis(0);
        let e = verify_projection_theorem(&k, &l, &z, &quick()).unwrap_err();
        assert!(matches!(e, Error::DiameterHypothesisFailed(_)), "{e:?}");
        let e = verify_projection_theorem(&l, &k, &z, &quick()).unwrap_err();
        assert!(matches!(e, Error::DiameterHypothesisFailed(_)), "{e:?}");
    }

    #[test]
    fn verdict_json_round_trip() {
        let f = |p: &Vec4| p[0] * p[1];
        let v = decide_functional_equation(&f, &f, &zeta(), &quick()).unwrap();
        let s = serde_json::to_string(&v).unwrap();
        let back: Verdict = serde_json::from_str(&s).unwrap();
        assert_eq!(back.outcome, v.outcome);
        assert_eq!(back.classifications.len(), v.classifications.len());
    }
}
