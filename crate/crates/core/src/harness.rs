//! Problem specifications, ε-sweeps, cross-checks between solvers and
//! convergence reports.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{slope_simple, TraceBundle};
use crate::bs_integral::BsProblem;
use crate::coupling::Coupling;
use crate::error::{Error, Result};
use crate::geometry::{max_parallel_range, ClosedCurve, CurveKind};
use crate::numerics::fit::{fit_anchored, fit_expansion, log_log_slope, remainder_order, FitResult};
use crate::one_dim;
use crate::radial::{self, RadialProblem};

pub const DEFAULT_NODES: usize = 256;
pub const DEFAULT_RADIAL_TRACE_NODES: usize = 64;
pub const FIT_DEGREE: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Onedim,
    Radial,
    Curve,
}

/// Problem description as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub kind: ProblemKind,
    pub alpha_plus: Complex64,
    pub alpha_minus: Complex64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<CurveKind>,
    /// Boundary nodes of the integral solver; `nodes` takes precedence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Boundary nodes (curves) or angular trace nodes (radial).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Starting decay rate `κ` for the `ε = 0` root search.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<Complex64>,
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text).map_err(|e| Error::Input(format!("problem spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn coupling(&self) -> Coupling {
        Coupling::new(self.alpha_plus, self.alpha_minus)
    }

    pub fn validate(&self) -> Result<()> {
        self.coupling().check_finite()?;
        match self.kind {
            ProblemKind::Onedim => Ok(()),
            ProblemKind::Radial => self.radial(0.0).map(|_| ()),
            ProblemKind::Curve => {
                if self.geometry.is_none() {
                    return Err(Error::Input("curve problems need a \"geometry\"".into()));
                }
                self.closed_curve().map(|_| ())
            }
        }
    }

    pub fn with_nodes(mut self, nodes: Option<usize>) -> Self {
        if nodes.is_some() {
            self.nodes = nodes;
        }
        self
    }

    fn radial(&self, epsilon: f64) -> Result<RadialProblem> {
        RadialProblem::new(self.d.unwrap_or(2), self.r.unwrap_or(1.0), epsilon, self.coupling(), self.m.unwrap_or(0))
    }

    fn curve_nodes(&self) -> usize {
        self.nodes.or(self.samples).unwrap_or(DEFAULT_NODES)
    }

    fn closed_curve(&self) -> Result<ClosedCurve> {
        let kind = self
            .geometry
            .clone()
            .ok_or_else(|| Error::Input("curve problems need a \"geometry\"".into()))?;
        ClosedCurve::new(kind, self.curve_nodes())
    }

    fn solver_id(&self) -> &'static str {
        match self.kind {
            ProblemKind::Onedim => "onedim",
            ProblemKind::Radial => "radial",
            ProblemKind::Curve => "bs_integral",
        }
    }

    /// Geometric ladder `ε₀, ε₀/2, ε₀/4, ε₀/8` with
    /// `ε₀ = min(10⁻², 0.1·admissible range)`.
    pub fn default_epsilons(&self) -> Result<Vec<f64>> {
        let range = match self.kind {
            ProblemKind::Onedim => one_dim::max_epsilon(&self.coupling())?,
            ProblemKind::Radial => radial::MAX_RELATIVE_EPSILON * self.r.unwrap_or(1.0),
            ProblemKind::Curve => max_parallel_range(&self.closed_curve()?),
        };
        let e0 = 1e-2f64.min(0.1 * range);
        Ok((0..4).map(|k| e0 / f64::powi(2.0, k)).collect())
    }
}

/// The `ε = 0` problem: eigenvalue and traces on `Σ₀`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSolution {
    pub kappa: Complex64,
    pub lambda: Complex64,
    pub bundle: TraceBundle,
    pub predicted_slope: Complex64,
}

/// One solved shell distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub lambda: Complex64,
    pub kappa: Complex64,
    /// Secular or determinant residual at the returned root.
    pub residual: f64,
    pub solver: String,
}

pub fn solve_limit(spec: &ProblemSpec) -> Result<LimitSolution> {
    let c = spec.coupling();
    let (kappa, bundle) = match spec.kind {
        ProblemKind::Onedim => (one_dim::limit_kappa(&c)?, one_dim::trace_bundle(&c)?),
        ProblemKind::Radial => {
            let p = spec.radial(0.0)?;
            let e = radial::solve_eigenvalue(&p, spec.seed)?;
            let nodes = spec.nodes.unwrap_or(DEFAULT_RADIAL_TRACE_NODES);
            (e.kappa, e.trace_bundle(nodes)?)
        }
        ProblemKind::Curve => {
            let p = BsProblem::new(spec.geometry.clone().unwrap(), 0.0, c, spec.curve_nodes())?;
            let e = p.find_eigenvalue(spec.seed.unwrap_or_else(|| p.default_seed()), 1)?;
            let t = p.eigen_traces(e.kappa, 1)?;
            (e.kappa, t.bundles.into_iter().next().unwrap())
        }
    };
    let predicted_slope = slope_simple(&bundle, &c)?;
    Ok(LimitSolution {
        kappa,
        lambda: -kappa * kappa,
        bundle,
        predicted_slope,
    })
}

/// Eigenvalue at shell distance `ε`, following the branch of the limit decay
/// rate `kappa0`.
pub fn solve_at(spec: &ProblemSpec, epsilon: f64, kappa0: Complex64) -> Result<SweepRow> {
    let c = spec.coupling();
    let (kappa, residual) = match spec.kind {
        ProblemKind::Onedim => {
            let k = one_dim::solve_kappa(epsilon, &c)?;
            (k, one_dim::secular_residual(k, epsilon, &c).norm())
        }
        ProblemKind::Radial => {
            let e = radial::solve_eigenvalue(&spec.radial(epsilon)?, Some(kappa0))?;
            (e.kappa, e.det_residual)
        }
        ProblemKind::Curve => {
            let p = BsProblem::new(spec.geometry.clone().unwrap(), epsilon, c, spec.curve_nodes())?;
            let e = p.find_eigenvalue(kappa0, 1)?;
            (e.kappa, e.det_residual)
        }
    };
    Ok(SweepRow {
        epsilon,
        lambda: -kappa * kappa,
        kappa,
        residual,
        solver: spec.solver_id().to_string(),
    })
}

/// Pass/fail thresholds, echoed in every report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub slope_rel: f64,
    pub remainder_order: [f64; 2],
    pub uniform_order: [f64; 2],
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            slope_rel: 1e-2,
            remainder_order: [1.9, 2.1],
            uniform_order: [0.9, 1.1],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowFailure {
    pub epsilon: f64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPass {
    pub slope: bool,
    pub remainder_order: bool,
    pub all_rows_solved: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub problem: ProblemSpec,
    pub thresholds: Thresholds,
    /// Sorted by decreasing ε.
    pub rows: Vec<SweepRow>,
    pub failures: Vec<RowFailure>,
    pub lambda0: Option<Complex64>,
    pub predicted_slope: Option<Complex64>,
    /// Degree-2 fit of `(λ_ε − λ₀)/ε`, anchored at the solved `λ₀`.
    pub fitted: Option<FitResult>,
    /// Unconstrained degree-2 fit of `λ_ε`.
    pub free_fit: Option<FitResult>,
    pub slope_rel_error: Option<f64>,
    pub remainder_order: Option<f64>,
    pub pass: SweepPass,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.pass.slope && self.pass.remainder_order && self.pass.all_rows_solved
    }
}

fn check_epsilons(eps: &[f64], min: usize) -> Result<()> {
    if eps.len() < min {
        return Err(Error::Input(format!("need at least {min} ε values, got {}", eps.len())));
    }
    if eps.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(Error::Input("ε values must be positive".into()));
    }
    Ok(())
}

fn sorted_desc(eps: &[f64]) -> Vec<f64> {
    let mut e = eps.to_vec();
    e.sort_by(|a, b| b.total_cmp(a));
    e
}

pub fn run_sweep(spec: &ProblemSpec, epsilons: &[f64], thresholds: Thresholds) -> Result<SweepReport> {
    spec.validate()?;
    check_epsilons(epsilons, 4)?;
    let mut report = SweepReport {
        problem: spec.clone(),
        thresholds,
        rows: Vec::new(),
        failures: Vec::new(),
        lambda0: None,
        predicted_slope: None,
        fitted: None,
        free_fit: None,
        slope_rel_error: None,
        remainder_order: None,
        pass: SweepPass {
            slope: false,
            remainder_order: false,
            all_rows_solved: false,
        },
    };
    let limit = match solve_limit(spec) {
        Ok(l) => l,
        Err(e) => {
            report.failures.push(RowFailure {
                epsilon: 0.0,
                error: e.to_string(),
            });
            return Ok(report);
        }
    };
    report.lambda0 = Some(limit.lambda);
    report.predicted_slope = Some(limit.predicted_slope);
    for eps in sorted_desc(epsilons) {
        match solve_at(spec, eps, limit.kappa) {
            Ok(row) => report.rows.push(row),
            Err(e) => report.failures.push(RowFailure {
                epsilon: eps,
                error: e.to_string(),
            }),
        }
    }
    report.pass.all_rows_solved = report.failures.is_empty();
    let points: Vec<(f64, Complex64)> = report.rows.iter().map(|r| (r.epsilon, r.lambda)).collect();
    report.free_fit = fit_expansion(&points, FIT_DEGREE).ok();
    report.fitted = fit_anchored(&points, limit.lambda, FIT_DEGREE).ok();
    report.remainder_order = remainder_order(&points);
    if let Some(fit) = &report.fitted {
        let p = limit.predicted_slope;
        if p.norm() > 0.0 {
            let err = (fit.coefficients[1] - p).norm() / p.norm();
            report.slope_rel_error = Some(err);
            report.pass.slope = err <= thresholds.slope_rel;
        }
    }
    if let Some(q) = report.remainder_order {
        report.pass.remainder_order = (thresholds.remainder_order[0]..=thresholds.remainder_order[1]).contains(&q);
    }
    Ok(report)
}

/// Comparison of the radial and boundary-integral solvers on a circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrosscheckRow {
    pub epsilon: f64,
    pub lambda_radial: Complex64,
    pub lambda_integral: Complex64,
    pub eigenvalue_rel: f64,
    /// Largest relative discrepancy over the nodes: of `ψ₀²/∫ψ₀²` and
    /// `∂ₙ±ψ₀/ψ₀` at `ε = 0`, of the shell traces relative to one outer
    /// value otherwise.
    pub trace_rel: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrosscheckReport {
    pub radius: f64,
    pub nodes: usize,
    pub rows: Vec<CrosscheckRow>,
    pub max_discrepancy: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub const CROSSCHECK_TOL: f64 = 1e-6;

fn circle_radius(spec: &ProblemSpec) -> Result<f64> {
    match (spec.kind, &spec.geometry) {
        (ProblemKind::Radial, _) if spec.d.unwrap_or(2) == 2 && spec.m.unwrap_or(0) == 0 => Ok(spec.r.unwrap_or(1.0)),
        (ProblemKind::Curve, Some(CurveKind::Circle { r })) => Ok(*r),
        _ => Err(Error::Input("cross-checks need a circle (radial d = 2, m = 0, or curve geometry circle)".into())),
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

pub fn run_crosscheck(spec: &ProblemSpec, epsilons: &[f64], nodes: usize) -> Result<CrosscheckReport> {
    let radius = circle_radius(spec)?;
    let c = spec.coupling();
    let circle = CurveKind::Circle { r: radius };
    let radial0 = RadialProblem::new(2, radius, 0.0, c, 0)?;
    let limit = radial::solve_eigenvalue(&radial0, spec.seed)?;
    let mut rows = Vec::new();
    for &eps in epsilons {
        let rp = radial0.with_epsilon(eps)?;
        let re = radial::solve_eigenvalue(&rp, Some(limit.kappa))?;
        let bp = BsProblem::new(circle.clone(), eps, c, nodes)?;
        let be = bp.find_eigenvalue(limit.kappa, 1)?;
        let trace_rel = if eps == 0.0 {
            let t = bp.eigen_traces(be.kappa, 1)?;
            let b = &t.bundles[0];
            let r = re.trace_bundle(nodes)?;
            let mut worst: f64 = rel(b.psi0[0] * b.psi0[0] / b.norm_sq, r.psi0[0] * r.psi0[0] / r.norm_sq);
            for j in 0..nodes {
                worst = worst
                    .max(rel(b.psi0[j] * b.psi0[j] / b.norm_sq, r.psi0[j] * r.psi0[j] / r.norm_sq))
                    .max(rel(b.dn_plus[j] / b.psi0[j], r.dn_plus[j] / r.psi0[j]))
                    .max(rel(b.dn_minus[j] / b.psi0[j], r.dn_minus[j] / r.psi0[j]));
            }
            worst
        } else {
            // shell traces relative to the outer-shell value at the first node
            let u = bp.shell_traces(be.kappa)?;
            let outer = re.profile(radius + eps)?;
            let mut worst: f64 = 0.0;
            for (s, t) in [eps, -eps].into_iter().enumerate() {
                let want = re.profile(radius + t)? / outer;
                for j in 0..nodes {
                    worst = worst.max(rel(u[s][j] / u[0][0], want));
                }
            }
            worst
        };
        rows.push(CrosscheckRow {
            epsilon: eps,
            lambda_radial: re.lambda,
            lambda_integral: be.lambda,
            eigenvalue_rel: rel(be.lambda, re.lambda),
            trace_rel,
        });
    }
    let max_discrepancy = rows
        .iter()
        .map(|r| r.eigenvalue_rel.max(r.trace_rel))
        .fold(0.0, f64::max);
    Ok(CrosscheckReport {
        radius,
        nodes,
        rows,
        max_discrepancy,
        tolerance: CROSSCHECK_TOL,
        pass: max_discrepancy < CROSSCHECK_TOL,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformRow {
    pub epsilon: f64,
    /// `sup_{Σ±ε}|ψ_ε − ψ₀|` for normalized, sign-matched eigenfunctions.
    pub trace_difference: f64,
    pub eigenvalue_difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformReport {
    pub problem: ProblemSpec,
    pub thresholds: Thresholds,
    pub rows: Vec<UniformRow>,
    pub trace_order: Option<f64>,
    pub eigenvalue_order: Option<f64>,
    pub pass: bool,
}

fn loglog_order(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<_> = points.iter().filter(|(e, v)| *e > 0.0 && *v > 0.0).collect();
    let xs: Vec<f64> = pts.iter().map(|(e, _)| e.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|(_, v)| v.ln()).collect();
    log_log_slope(&xs, &ys)
}

pub fn run_uniform_check(spec: &ProblemSpec, epsilons: &[f64], thresholds: Thresholds) -> Result<UniformReport> {
    spec.validate()?;
    check_epsilons(epsilons, 2)?;
    let c = spec.coupling();
    let mut rows = vec![UniformRow {
        epsilon: 0.0,
        trace_difference: 0.0,
        eigenvalue_difference: 0.0,
    }];
    for eps in sorted_desc(epsilons) {
        let (trace_difference, eigenvalue_difference) = match spec.kind {
            ProblemKind::Onedim => (
                one_dim::uniform_difference(eps, &c)?,
                (one_dim::eigenvalue(eps, &c)? - one_dim::limit_eigenvalue(&c)?).norm(),
            ),
            ProblemKind::Radial => {
                let p0 = spec.radial(0.0)?;
                let e0 = radial::solve_eigenvalue(&p0, spec.seed)?;
                let pe = p0.with_epsilon(eps)?;
                let ee = radial::solve_eigenvalue(&pe, Some(e0.kappa))?;
                (radial::uniform_difference(&pe, spec.seed)?, (ee.lambda - e0.lambda).norm())
            }
            ProblemKind::Curve => {
                return Err(Error::Input("trace differences are available for onedim and radial problems".into()))
            }
        };
        rows.insert(
            rows.len() - 1,
            UniformRow {
                epsilon: eps,
                trace_difference,
                eigenvalue_difference,
            },
        );
    }
    let trace_order = loglog_order(&rows.iter().map(|r| (r.epsilon, r.trace_difference)).collect::<Vec<_>>());
    let eigenvalue_order = loglog_order(&rows.iter().map(|r| (r.epsilon, r.eigenvalue_difference)).collect::<Vec<_>>());
    let ok = |o: Option<f64>| o.is_some_and(|o| (thresholds.uniform_order[0]..=thresholds.uniform_order[1]).contains(&o));
    Ok(UniformReport {
        problem: spec.clone(),
        thresholds,
        pass: ok(trace_order) && ok(eigenvalue_order),
        rows,
        trace_order,
        eigenvalue_order,
    })
}

/// Input of the offline slope evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticsInput {
    pub alpha_plus: Complex64,
    pub alpha_minus: Complex64,
    pub bundles: Vec<TraceBundle>,
    /// Pairings `∫ψⁱψʲ`; defaults to the diagonal of `norm_sq`.
    #[serde(default)]
    pub gram: Option<Vec<Vec<Complex64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticsOutput {
    pub slopes: Vec<Complex64>,
    pub jump_residuals: Vec<f64>,
}

pub fn run_asymptotics(input: &AsymptoticsInput) -> Result<AsymptoticsOutput> {
    let c = Coupling::new(input.alpha_plus, input.alpha_minus);
    let gram = input
        .gram
        .as_ref()
        .map(|g| crate::numerics::CMatrix::from_rows(g));
    let slopes = if input.bundles.len() == 1 && gram.is_none() {
        vec![slope_simple(&input.bundles[0], &c)?]
    } else {
        crate::asymptotics::slope_matrix(&input.bundles, &c, gram.as_ref())?.slopes
    };
    Ok(AsymptoticsOutput {
        slopes,
        jump_residuals: input.bundles.iter().map(|b| b.jump_residual(&c)).collect(),
    })
}

/// Sweep rows as CSV with 17 significant digits.
pub fn sweep_csv(report: &SweepReport) -> String {
    let mut out = String::from("epsilon,lambda_re,lambda_im,kappa_re,kappa_im,residual,solver\n");
    for r in &report.rows {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}\n",
            r.epsilon, r.lambda.re, r.lambda.im, r.kappa.re, r.kappa.im, r.residual, r.solver
        ));
    }
    out
}

pub fn uniform_csv(report: &UniformReport) -> String {
    let mut out = String::from("epsilon,trace_difference,eigenvalue_difference\n");
    for r in &report.rows {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e}\n",
            r.epsilon, r.trace_difference, r.eigenvalue_difference
        ));
    }
    out
}

pub fn crosscheck_csv(report: &CrosscheckReport) -> String {
    let mut out = String::from("epsilon,lambda_radial_re,lambda_radial_im,lambda_integral_re,lambda_integral_im,eigenvalue_rel,trace_rel\n");
    for r in &report.rows {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            r.epsilon,
            r.lambda_radial.re,
            r.lambda_radial.im,
            r.lambda_integral.re,
            r.lambda_integral.im,
            r.eigenvalue_rel,
            r.trace_rel
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn onedim(ap: f64, am: f64) -> ProblemSpec {
        ProblemSpec::from_json(&format!(
            r#"{{"kind":"onedim","alpha_plus":[{ap},0],"alpha_minus":[{am},0]}}"#
        ))
        .unwrap()
    }

    #[test]
    fn spec_parsing() {
        let s = ProblemSpec::from_json(
            r#"{"kind":"curve","alpha_plus":[-3,0],"alpha_minus":[-2,0.5],
                "geometry":{"kind":"ellipse","a":1.5,"b":1.0},"nodes":64}"#,
        )
        .unwrap();
        assert_eq!(s.geometry, Some(CurveKind::Ellipse { a: 1.5, b: 1.0 }));
        assert_eq!(s.curve_nodes(), 64);
        assert!(ProblemSpec::from_json(r#"{"kind":"curve","alpha_plus":[-3,0],"alpha_minus":[-2,0]}"#).is_err());
        assert!(ProblemSpec::from_json(r#"{"kind":"radial","alpha_plus":[-3,0],"alpha_minus":[-2,0],"d":5}"#).is_err());
        assert!(ProblemSpec::from_json(r#"{"kind":"onedim","alpha_plus":[-3,0],"alpha_minus":[-2,0],"bogus":1}"#).is_err());
    }

    #[test]
    fn onedim_sweep_passes() {
        let spec = onedim(-1.0, -3.0);
        let r = run_sweep(&spec, &spec.default_epsilons().unwrap(), Thresholds::default()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.rows.windows(2).all(|w| w[0].epsilon > w[1].epsilon));
        let fit = r.fitted.unwrap();
        assert!((fit.coefficients[0] + 4.0).norm() < 1e-12);
        assert!((fit.coefficients[1] - 12.0).norm() < 1e-3);
    }

    #[test]
    fn csv_is_deterministic() {
        let spec = onedim(-1.0, -1.0);
        let eps = [1e-2, 5e-3, 2.5e-3, 1.25e-3];
        let a = sweep_csv(&run_sweep(&spec, &eps, Thresholds::default()).unwrap());
        let b = sweep_csv(&run_sweep(&spec, &eps, Thresholds::default()).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.lines().count(), 5);
        let first: Vec<&str> = a.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(first[0], "1.0000000000000000e-2");
        assert_eq!(first[6], "onedim");
    }

    #[test]
    fn too_few_epsilons_rejected() {
        assert!(run_sweep(&onedim(-1.0, -1.0), &[1e-2, 5e-3, 2.5e-3], Thresholds::default()).is_err());
    }

    #[test]
    fn unsolvable_rows_are_recorded() {
        // α₊ + α₋ = 0: no bound state at ε = 0
        let spec = onedim(-1.0, 1.0);
        let r = run_sweep(&spec, &[1e-2, 5e-3, 2.5e-3, 1.25e-3], Thresholds::default()).unwrap();
        assert!(!r.passed());
        assert!(!r.failures.is_empty());
    }

    #[test]
    fn uniform_check_onedim() {
        let spec = onedim(-1.0, -3.0);
        let r = run_uniform_check(&spec, &[1e-2, 5e-3, 2.5e-3, 1.25e-3], Thresholds::default()).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.rows.last().unwrap().epsilon, 0.0);
        assert_eq!(r.rows.last().unwrap().trace_difference, 0.0);
    }

    #[test]
    fn asymptotics_roundtrip() {
        let spec = onedim(-1.0, -3.0);
        let limit = solve_limit(&spec).unwrap();
        let input = AsymptoticsInput {
            alpha_plus: spec.alpha_plus,
            alpha_minus: spec.alpha_minus,
            bundles: vec![limit.bundle],
            gram: None,
        };
        let text = serde_json::to_string(&input).unwrap();
        let out = run_asymptotics(&serde_json::from_str(&text).unwrap()).unwrap();
        assert!((out.slopes[0] - 12.0).norm() < 1e-10);
    }
}
