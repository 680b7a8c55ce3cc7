//! Scenario ingestion, command dispatch, and report assembly.
//!
//! A scenario is a small JSON document carrying states as `[re, im]` pairs
//! and an observable either as a dense complex matrix or as its
//! `(a_i, a_l, alpha)` decomposition. Every geometric result in a report is
//! accompanied by its direct-oracle residual, and the report `passed` flag
//! gates on that residual, so a scenario corpus doubles as a regression
//! suite. Reports serialize with sorted keys and are byte-stable across
//! runs of the same scenario.

use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bloch::{self, BlochVector};
use crate::error::{Error, Result};
use crate::matrix::{CMatrix, HermitianMatrix, StateVector};
use crate::observables::{compose, decompose, ObservableDecomposition};
use crate::pointer::{default_g_list, extract_weak_value, GaussianPointer};
use crate::qubit::{self, QubitObservable};
use crate::sun_algebra::{verify_algebra, SunAlgebra, ORDERING_VERSION};
use crate::uncertainty::{heisenberg_check, moments};
use crate::weak_values::{
    argument_decomposition, weak_value_direct, weak_value_geometric, PrePostSelection,
};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// States off unit norm by more than this are rejected outright.
pub const NORM_REJECT: f64 = 1e-6;

/// An observable, as a dense matrix or as its decomposition.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ObservableSpec {
    Matrix { matrix: Vec<Vec<[f64; 2]>> },
    Decomposition { a_i: f64, a_l: f64, alpha: Vec<f64> },
}

/// Qubit observable family parameters for the gamma sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QubitSpec {
    #[serde(default = "default_qubit_scale")]
    pub a: f64,
    pub r: [f64; 3],
}

fn default_qubit_scale() -> f64 {
    1.0
}

/// Pointer grid overrides; unset fields use the defaults.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct PointerSpec {
    pub grid_min: Option<f64>,
    pub grid_max: Option<f64>,
    pub num_points: Option<usize>,
    pub sigma: Option<f64>,
}

impl PointerSpec {
    fn to_pointer(&self) -> GaussianPointer {
        let d = GaussianPointer::default();
        GaussianPointer {
            grid_min: self.grid_min.unwrap_or(d.grid_min),
            grid_max: self.grid_max.unwrap_or(d.grid_max),
            num_points: self.num_points.unwrap_or(d.num_points),
            sigma: self.sigma.unwrap_or(d.sigma),
        }
    }
}

/// One parsed scenario document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub n: usize,
    /// Optional per-file command override for batch runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi_i: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi_f: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observable: Option<ObservableSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observable_b: Option<ObservableSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qubit: Option<QubitSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_list: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pointer: Option<PointerSpec>,
    /// Resolution of the canonical `(0, sin s, cos s)` geodesic sweep for
    /// the embed command.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Parse a scenario document, reporting schema violations with their field
/// path.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let scenario: Scenario = serde_path_to_error::deserialize(de).map_err(|e| Error::Scenario {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    if scenario.n < 2 {
        return Err(Error::Scenario {
            path: "n".into(),
            message: format!("dimension must be at least 2, got {}", scenario.n),
        });
    }
    Ok(scenario)
}

/// The CLI command set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    WeakValue,
    Moments,
    QubitSweep,
    Pointer,
    AlgebraCheck,
    Embed,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::WeakValue => "weak-value",
            Command::Moments => "moments",
            Command::QubitSweep => "qubit-sweep",
            Command::Pointer => "pointer",
            Command::AlgebraCheck => "algebra-check",
            Command::Embed => "embed",
        }
    }

    /// Default residual gate: tight for closed-form routes, the documented
    /// extrapolation target for the pointer readout.
    pub fn default_tolerance(&self) -> f64 {
        match self {
            Command::Pointer => 1e-6,
            _ => 1e-10,
        }
    }
}

impl FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weak-value" => Ok(Command::WeakValue),
            "moments" => Ok(Command::Moments),
            "qubit-sweep" => Ok(Command::QubitSweep),
            "pointer" => Ok(Command::Pointer),
            "algebra-check" => Ok(Command::AlgebraCheck),
            "embed" => Ok(Command::Embed),
            other => Err(Error::Scenario {
                path: "command".into(),
                message: format!("unknown command `{other}`"),
            }),
        }
    }
}

/// Run-wide options carried by the CLI flags.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Overrides the per-command oracle-residual gate when set.
    pub tolerance: Option<f64>,
    pub tensor_cache: Option<PathBuf>,
    pub seed: Option<u64>,
}

/// The deterministic result document of one scenario run.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub tool_version: String,
    pub tensor_ordering_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_residual: Option<f64>,
    pub passed: bool,
    pub warnings: Vec<String>,
    pub results: Value,
    pub scenario: Scenario,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn require<'a, T>(field: &'a Option<T>, name: &'static str) -> Result<&'a T> {
    field.as_ref().ok_or(Error::MissingField(name))
}

fn complex_pair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// Decode a state, auto-normalizing with a warning when the norm is off by
/// less than [`NORM_REJECT`] and rejecting anything worse.
fn decode_state(
    parts: &[[f64; 2]],
    n: usize,
    label: &str,
    warnings: &mut Vec<String>,
) -> Result<StateVector> {
    if parts.len() != n {
        return Err(Error::Scenario {
            path: label.to_string(),
            message: format!("expected {n} amplitudes, got {}", parts.len()),
        });
    }
    let v = StateVector::from_vec(
        parts
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect(),
    );
    let norm = v.norm();
    let defect = (norm - 1.0).abs();
    if defect > NORM_REJECT {
        return Err(Error::Scenario {
            path: label.to_string(),
            message: format!("state norm {norm} is off by {defect:.3e}, beyond {NORM_REJECT:.0e}"),
        });
    }
    if defect > 1e-10 {
        warnings.push(format!(
            "{label}: norm off by {defect:.3e}; amplitudes renormalized"
        ));
    }
    Ok(v / Complex64::new(norm, 0.0))
}

/// Decode an observable into both representations.
fn decode_observable(
    alg: &SunAlgebra,
    spec: &ObservableSpec,
    label: &str,
) -> Result<(HermitianMatrix, ObservableDecomposition)> {
    let n = alg.n();
    match spec {
        ObservableSpec::Matrix { matrix } => {
            if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
                return Err(Error::Scenario {
                    path: label.to_string(),
                    message: format!("matrix must be {n}x{n}"),
                });
            }
            let mat = CMatrix::from_fn(n, n, |r, c| {
                Complex64::new(matrix[r][c][0], matrix[r][c][1])
            });
            let h = HermitianMatrix::new(mat)?;
            let dec = decompose(alg, &h)?;
            Ok((h, dec))
        }
        ObservableSpec::Decomposition { a_i, a_l, alpha } => {
            // assemble the literal a_I I + a_L alpha.L, then canonicalize
            // through decompose (folds |alpha| into a_l, fixes the sign)
            if alpha.len() != n * n - 1 {
                return Err(Error::Scenario {
                    path: format!("{label}.alpha"),
                    message: format!("expected {} components, got {}", n * n - 1, alpha.len()),
                });
            }
            let mut mat = CMatrix::identity(n, n) * Complex64::new(*a_i, 0.0);
            for (idx, &x) in alpha.iter().enumerate() {
                if x != 0.0 {
                    mat += alg.generator(idx) * Complex64::new(a_l * x, 0.0);
                }
            }
            let h = HermitianMatrix::new(mat)?;
            let dec = decompose(alg, &h)?;
            Ok((h, dec))
        }
    }
}

fn decomposition_echo(dec: &ObservableDecomposition) -> Value {
    json!({
        "a_i": dec.a_i,
        "a_l": dec.a_l,
        "alpha": dec.alpha.as_ref().map(|a| a.components().to_vec()),
    })
}

/// Execute a command on a scenario and assemble the report.
pub fn run(scenario: &Scenario, command: Command, options: &RunOptions) -> Result<Report> {
    let mut warnings = Vec::new();
    let alg = match &options.tensor_cache {
        Some(dir) => SunAlgebra::cached_with_disk(scenario.n, dir)?,
        None => SunAlgebra::cached(scenario.n)?,
    };
    let tolerance = options
        .tolerance
        .unwrap_or_else(|| command.default_tolerance());

    let (results, max_residual) = match command {
        Command::WeakValue => run_weak_value(&alg, scenario, &mut warnings)?,
        Command::Moments => run_moments(&alg, scenario, &mut warnings)?,
        Command::QubitSweep => run_qubit_sweep(&alg, scenario, &mut warnings)?,
        Command::Pointer => run_pointer(&alg, scenario, &mut warnings)?,
        Command::AlgebraCheck => run_algebra_check(&alg)?,
        Command::Embed => run_embed(&alg, scenario, &mut warnings)?,
    };

    let passed = max_residual.is_none_or(|r| r <= tolerance);
    Ok(Report {
        command: command.name().to_string(),
        tool_version: TOOL_VERSION.to_string(),
        tensor_ordering_version: ORDERING_VERSION.to_string(),
        seed: options.seed.or(scenario.seed),
        tolerance,
        max_residual,
        passed,
        warnings,
        results,
        scenario: scenario.clone(),
    })
}

fn selection_from_scenario(
    alg: &SunAlgebra,
    scenario: &Scenario,
    warnings: &mut Vec<String>,
) -> Result<PrePostSelection> {
    let psi_i = decode_state(require(&scenario.psi_i, "psi_i")?, alg.n(), "psi_i", warnings)?;
    let psi_f = decode_state(require(&scenario.psi_f, "psi_f")?, alg.n(), "psi_f", warnings)?;
    PrePostSelection::new(alg, psi_i, psi_f)
}

fn run_weak_value(
    alg: &SunAlgebra,
    scenario: &Scenario,
    warnings: &mut Vec<String>,
) -> Result<(Value, Option<f64>)> {
    let sel = selection_from_scenario(alg, scenario, warnings)?;
    let (matrix, dec) = decode_observable(alg, require(&scenario.observable, "observable")?, "observable")?;

    let oracle = weak_value_direct(&matrix, &sel)?;
    let geo = weak_value_geometric(alg, &dec, &sel.i_vec, &sel.f_vec)?;
    let residual = (geo.value - oracle).norm() / (1.0 + oracle.norm());

    let mut results = json!({
        "value": complex_pair(geo.value),
        "argument": geo.argument,
        "phi": geo.phi_term,
        "boundary": geo.boundary,
        "amplified": geo.amplified,
        "invariants": {
            "dot_fi": geo.dot_fi,
            "dot_fa": geo.dot_fa,
            "dot_ai": geo.dot_ai,
            "star": geo.star_invariant,
            "wedge": geo.wedge_invariant,
        },
        "decomposition": decomposition_echo(&dec),
        "oracle": complex_pair(oracle),
        "oracle_residual": residual,
    });
    if let Ok(split) = argument_decomposition(&matrix, &sel) {
        results["argument_decomposition"] = json!({
            "arg_projector": split.arg_projector,
            "arg_mean": split.arg_mean,
            "total": split.total,
        });
    }
    Ok((results, Some(residual)))
}

fn run_moments(
    alg: &SunAlgebra,
    scenario: &Scenario,
    warnings: &mut Vec<String>,
) -> Result<(Value, Option<f64>)> {
    let psi_i = decode_state(require(&scenario.psi_i, "psi_i")?, alg.n(), "psi_i", warnings)?;
    let i_vec = bloch::state_to_bloch(alg, &psi_i)?;
    let (mat_a, dec_a) =
        decode_observable(alg, require(&scenario.observable, "observable")?, "observable")?;
    let (mat_b, dec_b) = match &scenario.observable_b {
        Some(spec) => decode_observable(alg, spec, "observable_b")?,
        None => (mat_a.clone(), dec_a.clone()),
    };

    let rep = moments(alg, &dec_a, &dec_b, &i_vec)?;

    // matrix-element oracle
    let mean = |m: &HermitianMatrix| m.expectation(&psi_i).unwrap();
    let expect = |m: &CMatrix| psi_i.dotc(&(m * &psi_i));
    let mean_a = mean(&mat_a);
    let mean_b = mean(&mat_b);
    let var_a = expect(&(mat_a.matrix() * mat_a.matrix())).re - mean_a * mean_a;
    let var_b = expect(&(mat_b.matrix() * mat_b.matrix())).re - mean_b * mean_b;
    let anti = mat_a.matrix() * mat_b.matrix() + mat_b.matrix() * mat_a.matrix();
    let cov = expect(&anti).re / 2.0 - mean_a * mean_b;
    let comm = mat_a.matrix() * mat_b.matrix() - mat_b.matrix() * mat_a.matrix();
    let comm_avg = expect(&comm).im;
    let comm_sq = expect(&(comm.adjoint() * &comm)).re;

    let residual = [
        (rep.mean_a - mean_a).abs(),
        (rep.mean_b - mean_b).abs(),
        (rep.var_a - var_a).abs(),
        (rep.var_b - var_b).abs(),
        (rep.cov_ab - cov).abs(),
        (rep.comm_avg - comm_avg).abs(),
        (rep.comm_sq_avg - comm_sq).abs(),
    ]
    .into_iter()
    .fold(0.0_f64, f64::max);

    let results = json!({
        "report": rep,
        "heisenberg_satisfied": heisenberg_check(&rep),
        "oracle": {
            "mean_a": mean_a, "mean_b": mean_b,
            "var_a": var_a, "var_b": var_b,
            "cov_ab": cov, "comm_avg": comm_avg, "comm_sq_avg": comm_sq,
        },
        "oracle_residual": residual,
    });
    Ok((results, Some(residual)))
}

fn run_qubit_sweep(
    alg: &SunAlgebra,
    scenario: &Scenario,
    warnings: &mut Vec<String>,
) -> Result<(Value, Option<f64>)> {
    if alg.n() != 2 {
        return Err(Error::Scenario {
            path: "n".into(),
            message: "qubit-sweep requires n = 2".into(),
        });
    }
    let sel = selection_from_scenario(alg, scenario, warnings)?;
    let spec = require(&scenario.qubit, "qubit")?;
    let norm = (spec.r[0] * spec.r[0] + spec.r[1] * spec.r[1] + spec.r[2] * spec.r[2]).sqrt();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(Error::Scenario {
            path: "qubit.r".into(),
            message: format!("axis must be unit norm, got {norm}"),
        });
    }
    let r = [spec.r[0] / norm, spec.r[1] / norm, spec.r[2] / norm];
    let iv = sel.i_vec.components();
    let fv = sel.f_vec.components();
    let i3 = [iv[0], iv[1], iv[2]];
    let f3 = [fv[0], fv[1], fv[2]];

    let grid = match &scenario.gamma_grid {
        Some(g) => g.clone(),
        None => qubit::default_gamma_grid(&i3, &r),
    };
    let profile = qubit::angle_profile(&r, &i3, &grid)?;

    let mut rows = Vec::with_capacity(grid.len());
    let mut residual = 0.0_f64;
    for row in &profile.rows {
        let obs = QubitObservable::new(spec.a, row.gamma, r)?;
        let wv = qubit::qubit_weak_value(&obs, &i3, &f3)?;
        // direct oracle for this gamma
        let dec = ObservableDecomposition::new(
            2,
            spec.a,
            (spec.a * row.gamma).abs(),
            if spec.a * row.gamma == 0.0 {
                None
            } else {
                let s = (spec.a * row.gamma).signum();
                Some(BlochVector::new(2, r.iter().map(|x| s * x).collect())?)
            },
        )?;
        let matrix = compose(alg, &dec)?;
        let oracle = weak_value_direct(&matrix, &sel)?;
        residual = residual.max((wv.value - oracle).norm() / (1.0 + oracle.norm()));
        rows.push(json!({
            "gamma": row.gamma,
            "phi_i_iprime": row.phi_i_iprime,
            "phi_r_iprime": row.phi_r_iprime,
            "re_wv": wv.value.re,
            "im_wv": wv.value.im,
            "arg_wv": wv.argument,
        }));
    }

    let results = json!({
        "constants": {
            "phi_ir": profile.phi_ir,
            "phi_i_mirror": profile.phi_i_mirror,
            "phi_r_mirror_raw": profile.phi_r_mirror_raw,
            "phi_r_mirror": profile.phi_r_mirror,
            "critical_gamma": qubit::critical_gamma(&i3, &r).ok(),
        },
        "rows": rows,
        "oracle_residual": residual,
    });
    Ok((results, Some(residual)))
}

fn run_pointer(
    alg: &SunAlgebra,
    scenario: &Scenario,
    warnings: &mut Vec<String>,
) -> Result<(Value, Option<f64>)> {
    let sel = selection_from_scenario(alg, scenario, warnings)?;
    let (matrix, _) =
        decode_observable(alg, require(&scenario.observable, "observable")?, "observable")?;
    let ptr = scenario
        .pointer
        .as_ref()
        .map(|p| p.to_pointer())
        .unwrap_or_default();
    let g_list = scenario.g_list.clone().unwrap_or_else(default_g_list);

    let est = extract_weak_value(&matrix, &sel, &ptr, &g_list)?;
    let oracle = weak_value_direct(&matrix, &sel)?;
    let residual = (est.estimate() - oracle).norm();

    let outcomes: Vec<Value> = est
        .outcomes
        .iter()
        .map(|o| {
            json!({
                "g": o.g,
                "mean_x": o.mean_x,
                "mean_p": o.mean_p,
                "postselect_prob": o.postselect_prob,
                "weak_regime": o.weak_regime,
            })
        })
        .collect();
    let results = json!({
        "estimate": [est.estimate_re, est.estimate_im],
        "convergence_order": est.convergence_order,
        "momentum_calibration": est.momentum_calibration,
        "outcomes": outcomes,
        "per_g_estimates": est.per_g_estimates,
        "pointer": ptr,
        "oracle": complex_pair(oracle),
        "oracle_residual": residual,
    });
    Ok((results, Some(residual)))
}

fn run_algebra_check(alg: &SunAlgebra) -> Result<(Value, Option<f64>)> {
    let report = verify_algebra(alg.generators(), alg.tensors())?;
    let max = report.max_residual();
    let results = json!({
        "residuals": report,
        "max_residual": max,
        "pass": report.passes(),
        "f_nonzeros": alg.tensors().f.nnz(),
        "d_nonzeros": alg.tensors().d.nnz(),
    });
    Ok((results, Some(max)))
}

fn run_embed(
    alg: &SunAlgebra,
    scenario: &Scenario,
    warnings: &mut Vec<String>,
) -> Result<(Value, Option<f64>)> {
    if alg.n() != 3 {
        return Err(Error::Scenario {
            path: "n".into(),
            message: "embed requires n = 3".into(),
        });
    }
    let mut results = serde_json::Map::new();
    let mut gate = 0.0_f64;

    if let Some(psi_parts) = &scenario.psi_i {
        let psi = decode_state(psi_parts, 3, "psi_i", warnings)?;
        let e = bloch::embed_s7(&psi)?;
        let octant = bloch::octant_projection(&psi)?;
        let unit = bloch::state_to_bloch(alg, &psi)?;

        // reconstruction oracle: Pi = I/3 + sum_a e_a lambda_a
        let mut rec = CMatrix::identity(3, 3) * Complex64::new(1.0 / 3.0, 0.0);
        for (a, &ea) in e.components().iter().enumerate() {
            rec += alg.generator(a) * Complex64::new(ea, 0.0);
        }
        let proj = HermitianMatrix::projector_onto(&psi)?;
        let residual = crate::matrix::max_entry_abs(&(rec - proj.matrix()));
        gate = gate.max(residual);

        results.insert("embedding".into(), json!(e.components()));
        results.insert("octant".into(), json!(octant));
        results.insert("bloch_unit".into(), json!(unit.components()));
        results.insert("reconstruction_residual".into(), json!(residual));
    } else if scenario.s_grid.is_none() {
        return Err(Error::MissingField("psi_i"));
    }

    if let Some(points) = scenario.s_grid {
        if points < 2 {
            return Err(Error::Scenario {
                path: "s_grid".into(),
                message: "need at least 2 sweep points".into(),
            });
        }
        // canonical geodesic (0, sin s, cos s); circle of radius 1/2 in the
        // half-trace embedding, sqrt(3)/2 on the unit sphere
        let center_half = [0., 0., -0.25, 0., 0., 0., 0., -1.0 / (4.0 * 3.0_f64.sqrt())];
        let center_unit = [0., 0., -3.0_f64.sqrt() / 4.0, 0., 0., 0., 0., -0.25];
        let mut rows = Vec::with_capacity(points);
        let mut radius_defect = 0.0_f64;
        for j in 0..points {
            let s = std::f64::consts::PI * j as f64 / (points - 1) as f64;
            let psi = StateVector::from_vec(vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(s.sin(), 0.0),
                Complex64::new(s.cos(), 0.0),
            ]);
            let e = bloch::embed_s7(&psi)?;
            let unit = bloch::state_to_bloch(alg, &psi)?;
            let r_half = radius_about(e.components(), &center_half);
            let r_unit = radius_about(unit.components(), &center_unit);
            radius_defect = radius_defect
                .max((r_half - 0.5).abs())
                .max((r_unit - 3.0_f64.sqrt() / 2.0).abs());
            rows.push(json!({
                "s": s,
                "embedding": e.components(),
                "bloch_unit": unit.components(),
            }));
        }
        gate = gate.max(radius_defect);
        results.insert(
            "sweep".into(),
            json!({
                "rows": rows,
                "radius_half_trace": 0.5,
                "radius_unit": 3.0_f64.sqrt() / 2.0,
                "max_radius_defect": radius_defect,
            }),
        );
    }

    Ok((Value::Object(results), Some(gate)))
}

fn radius_about(point: &[f64], center: &[f64]) -> f64 {
    point
        .iter()
        .zip(center)
        .map(|(p, c)| (p - c) * (p - c))
        .sum::<f64>()
        .sqrt()
}
