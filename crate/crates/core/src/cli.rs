//! Config-driven runner behind the `elasto-np` binary.
//!
//! A run is `<command> --config <path> [--out <dir>] [--seed <u64>]
//! [--threads <n>]`. The TOML config is schema-checked (unknown keys are
//! rejected) before any computation; each command writes one CSV of sweep
//! records and one JSON summary that embeds the fully-resolved config. CSV
//! output is RFC-4180 (CRLF, header row) with floats at 17 significant
//! digits, so identical configs produce byte-identical files. JSON keys are
//! emitted in sorted order.
//!
//! Exit codes: 0 all assertions pass, 1 assertion failure (summary still
//! written), 2 config error.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::calr::{
    self, critical_radius, denominator_d, point_source_spectrum, solve_coreshell, tune_p2,
    Classification, CoreShellConfig,
};
use crate::error::{Error, Result};
use crate::harmonics::{verify_prop_identities, ModeIndex, PropId, VshKind};
use crate::layer_coeffs::{
    action_field, kernel_quadrature_oracle, make_medium, ElasticMedium,
};
use crate::np_spectrum::{eigen_residual, np_eigensystem, np_matrix, TOL_D1N};
use crate::resonance::{resonance_quantity, tune_p1, tune_re_mu, CoreFreeConfig};
use crate::specfun::{sph_fn, wronskian_residual, Kind};

// ---------------------------------------------------------------------------
// Config schema
// ---------------------------------------------------------------------------

/// Run mode; must match the CLI subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    NpSpectrum,
    ResonanceSweep,
    CalrDesign,
    FieldGrid,
    Validate,
}

impl Mode {
    /// File stem for the artifacts of this mode.
    pub fn stem(self) -> &'static str {
        match self {
            Mode::NpSpectrum => "np_spectrum",
            Mode::ResonanceSweep => "resonance_sweep",
            Mode::CalrDesign => "calr_design",
            Mode::FieldGrid => "field_grid",
            Mode::Validate => "validate",
        }
    }
}

/// A complex scalar in config files: either a bare float or `[re, im]`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(from = "CxRepr", into = "[f64; 2]")]
pub struct Cx {
    pub re: f64,
    pub im: f64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CxRepr {
    Re(f64),
    ReIm([f64; 2]),
}

impl From<CxRepr> for Cx {
    fn from(r: CxRepr) -> Self {
        match r {
            CxRepr::Re(re) => Cx { re, im: 0.0 },
            CxRepr::ReIm([re, im]) => Cx { re, im },
        }
    }
}

impl From<Cx> for [f64; 2] {
    fn from(c: Cx) -> Self {
        [c.re, c.im]
    }
}

impl Cx {
    pub fn value(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// One material block: Lame parameters at the shared frequency.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumBlock {
    pub lambda: Cx,
    pub mu: Cx,
}

impl MediumBlock {
    fn build(&self, omega: f64) -> Result<ElasticMedium> {
        make_medium(self.lambda.value(), self.mu.value(), omega)
    }
}

/// Geometry: sphere radius, optionally a core radius.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Geometry {
    pub r_e: f64,
    #[serde(default)]
    pub r_i: Option<f64>,
}

/// Frequency, working order(s), and tuning switches.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunBlock {
    pub omega: f64,
    #[serde(default)]
    pub n0: Option<usize>,
    #[serde(default)]
    pub n_min: Option<usize>,
    #[serde(default)]
    pub n_max: Option<usize>,
    /// Tune the shell modulus before the main computation.
    #[serde(default)]
    pub tune: bool,
    /// Resonance magnitude target M for p_1 tuning.
    #[serde(default)]
    pub m_target: Option<f64>,
}

/// Sweep grid over a named scalar variable.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    /// One of "im_mu_hat", "p1", "p2".
    pub variable: String,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub log_scale: bool,
}

impl SweepBlock {
    fn grid(&self) -> Result<Vec<f64>> {
        if self.points < 2 || !(self.start < self.stop) {
            return Err(Error::ConfigInvalid("sweep needs start < stop, points >= 2".into()));
        }
        if self.log_scale && self.start <= 0.0 {
            return Err(Error::ConfigInvalid("log sweep needs start > 0".into()));
        }
        let f = |t: f64| {
            if self.log_scale {
                (self.start.ln() + t * (self.stop / self.start).ln()).exp()
            } else {
                self.start + t * (self.stop - self.start)
            }
        };
        Ok((0..self.points)
            .map(|k| f(k as f64 / (self.points - 1) as f64))
            .collect())
    }
}

/// Point-like T-mode source outside the shell.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceBlock {
    pub r_0: f64,
    pub n_min: usize,
    pub n_max: usize,
    /// Energy threshold separating resonant from non-resonant.
    #[serde(default = "default_threshold")]
    pub threshold: f64,
}

fn default_threshold() -> f64 {
    1e6
}

/// Radial evaluation ray for field export.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    pub r_start: f64,
    pub r_stop: f64,
    pub points: usize,
    #[serde(default = "default_theta")]
    pub theta: f64,
    #[serde(default)]
    pub phi: f64,
}

fn default_theta() -> f64 {
    1.2
}

/// Assertion tolerances; every field has the pinned default.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub wronskian: f64,
    pub identity: f64,
    pub oracle: f64,
    pub np_residual: f64,
    /// Peak-to-endpoint factor for the unimodal resonance sweep.
    pub peak_factor: f64,
    /// Required |d| suppression factor for shell tuning.
    pub suppression: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            wronskian: 1e-10,
            identity: 1e-9,
            oracle: 1e-7,
            np_residual: 1e-11,
            peak_factor: 100.0,
            suppression: 1e6,
        }
    }
}

/// Whole config file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Mode,
    #[serde(default)]
    pub seed: u64,
    pub run: RunBlock,
    pub geometry: Geometry,
    pub exterior: MediumBlock,
    #[serde(default)]
    pub shell: Option<MediumBlock>,
    #[serde(default)]
    pub core: Option<MediumBlock>,
    #[serde(default)]
    pub sweep: Option<SweepBlock>,
    #[serde(default)]
    pub source: Option<SourceBlock>,
    #[serde(default)]
    pub grid: Option<GridBlock>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl RunConfig {
    /// Parse and schema-check a TOML config file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::ConfigInvalid(format!("{}: {e}", path.display())))?;
        let cfg: RunConfig = toml::from_str(&text)
            .map_err(|e| Error::ConfigInvalid(format!("{}: {e}", path.display())))?;
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<()> {
        if !(self.run.omega > 0.0 && self.run.omega.is_finite()) {
            return Err(Error::ConfigInvalid("run.omega must be positive".into()));
        }
        if !(self.geometry.r_e > 0.0) {
            return Err(Error::ConfigInvalid("geometry.r_e must be positive".into()));
        }
        if let Some(r_i) = self.geometry.r_i {
            if !(0.0 < r_i && r_i < self.geometry.r_e) {
                return Err(Error::ConfigInvalid("need 0 < r_i < r_e".into()));
            }
        }
        Ok(())
    }

    fn shell(&self) -> Result<MediumBlock> {
        self.shell
            .ok_or_else(|| Error::ConfigInvalid("this mode needs a [shell] block".into()))
    }

    fn corefree(&self) -> Result<CoreFreeConfig> {
        let ext = self.exterior.build(self.run.omega)?;
        let shell = self.shell()?.build(self.run.omega)?;
        CoreFreeConfig::new(self.geometry.r_e, ext, shell)
    }

    fn coreshell(&self) -> Result<CoreShellConfig> {
        let r_i = self
            .geometry
            .r_i
            .ok_or_else(|| Error::ConfigInvalid("this mode needs geometry.r_i".into()))?;
        let core = self
            .core
            .ok_or_else(|| Error::ConfigInvalid("this mode needs a [core] block".into()))?
            .build(self.run.omega)?;
        let shell = self.shell()?.build(self.run.omega)?;
        let ext = self.exterior.build(self.run.omega)?;
        CoreShellConfig::new(r_i, self.geometry.r_e, core, shell, ext)
    }

    fn n0(&self) -> Result<usize> {
        self.run
            .n0
            .ok_or_else(|| Error::ConfigInvalid("this mode needs run.n0".into()))
    }
}

// ---------------------------------------------------------------------------
// Deterministic artifact writing
// ---------------------------------------------------------------------------

/// 17-significant-digit float formatting shared by every CSV column.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_escape(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Render rows as RFC-4180 CSV (CRLF line breaks, mandatory header).
pub fn render_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    let _ = write!(out, "{}\r\n", header.join(","));
    for row in rows {
        let cells: Vec<String> = row.iter().map(|f| csv_escape(f)).collect();
        let _ = write!(out, "{}\r\n", cells.join(","));
    }
    out
}

/// Atomic write: temp file in the target directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name().and_then(|s| s.to_str()).unwrap_or("out")
    ));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// One named pass/fail check with its measured value and bound.
#[derive(Clone, Debug, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub bound: f64,
}

impl Assertion {
    fn below(name: &str, value: f64, bound: f64) -> Self {
        Assertion {
            name: name.to_string(),
            passed: value.is_finite() && value < bound,
            value,
            bound,
        }
    }

    fn above(name: &str, value: f64, bound: f64) -> Self {
        Assertion {
            name: name.to_string(),
            passed: value.is_finite() && value > bound,
            value,
            bound,
        }
    }
}

/// Everything a finished run reports.
pub struct RunOutcome {
    pub passed: bool,
    pub csv_path: PathBuf,
    pub summary_path: PathBuf,
}

struct Artifacts {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    assertions: Vec<Assertion>,
    extra: serde_json::Value,
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn run_np_spectrum(cfg: &RunConfig) -> Result<Artifacts> {
    let medium = cfg.exterior.build(cfg.run.omega)?;
    let r = cfg.geometry.r_e;
    let n_min = cfg.run.n_min.unwrap_or(1).max(1);
    let n_max = cfg.run.n_max.unwrap_or(40);
    if n_min > n_max {
        return Err(Error::ConfigInvalid("run.n_min must not exceed run.n_max".into()));
    }
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for n in n_min..=n_max {
        let sys = np_eigensystem(n, &medium, r, TOL_D1N)?;
        let (_, block) = np_matrix(n, &medium, r)?;
        let res = eigen_residual(&block, &sys);
        worst = worst.max(res);
        rows.push(vec![
            n.to_string(),
            fmt17(sys.lambda_1.re),
            fmt17(sys.lambda_1.im),
            fmt17(sys.lambda_2.re),
            fmt17(sys.lambda_2.im),
            fmt17(sys.lambda_3.re),
            fmt17(sys.lambda_3.im),
            fmt17(res),
            format!("{:?}", sys.branch),
        ]);
    }
    let assertions = vec![Assertion::below(
        "max_eigen_residual",
        worst,
        cfg.tolerances.np_residual,
    )];
    Ok(Artifacts {
        header: vec![
            "n",
            "lambda_1_re",
            "lambda_1_im",
            "lambda_2_re",
            "lambda_2_im",
            "lambda_3_re",
            "lambda_3_im",
            "eigen_residual",
            "branch",
        ],
        rows,
        assertions,
        extra: json!({ "max_eigen_residual": worst }),
    })
}

fn run_resonance_sweep(cfg: &RunConfig) -> Result<Artifacts> {
    let n0 = cfg.n0()?;
    let base = cfg.corefree()?;
    let sweep = cfg
        .sweep
        .clone()
        .unwrap_or(SweepBlock {
            variable: "im_mu_hat".into(),
            start: 1e-6,
            stop: 1.0,
            points: 61,
            log_scale: true,
        });
    let grid = sweep.grid()?;
    let shell_mu = cfg.shell()?.mu.value();
    let remake = |mu_hat: Complex64| -> Result<CoreFreeConfig> {
        let shell = make_medium(base.shell.lambda, mu_hat, cfg.run.omega)?;
        CoreFreeConfig::new(base.r, base.exterior, shell)
    };
    let mu_of: Box<dyn Fn(f64) -> Complex64> = match sweep.variable.as_str() {
        "im_mu_hat" => Box::new(move |v| Complex64::new(shell_mu.re, v)),
        "p1" => {
            let mu_ext = base.exterior.mu.re;
            let loss = 1.0 / cfg.run.m_target.unwrap_or(1e10);
            Box::new(move |p| Complex64::new(-mu_ext + p, loss))
        }
        other => {
            return Err(Error::ConfigInvalid(format!(
                "unknown sweep variable {other:?} for resonance-sweep"
            )))
        }
    };
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for &v in &grid {
        let q = resonance_quantity(n0, &remake(mu_of(v))?)?;
        values.push(q);
        rows.push(vec![sweep.variable.clone(), fmt17(v), fmt17(q), fmt17(q.log10())]);
    }
    let (peak_idx, &peak) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    let mut assertions = vec![
        Assertion::above(
            "interior_peak",
            if peak_idx > 0 && peak_idx + 1 < grid.len() {
                1.0
            } else {
                0.0
            },
            0.5,
        ),
        Assertion::above(
            "peak_over_endpoint",
            peak / values[values.len() - 1],
            cfg.tolerances.peak_factor,
        ),
    ];
    let mut extra = BTreeMap::new();
    extra.insert("peak_variable".to_string(), json!(grid[peak_idx]));
    extra.insert("peak_quantity".to_string(), json!(peak));
    if sweep.variable == "p1" {
        let m_target = cfg.run.m_target.unwrap_or(1e10);
        let p_star = tune_p1(n0, &base, m_target)?;
        let tuned = remake(mu_of(p_star))?;
        let q_star = resonance_quantity(n0, &tuned)?;
        assertions.push(Assertion::above("tuned_quantity_over_target", q_star / m_target, 1.0));
        extra.insert("p1_star".to_string(), json!(p_star));
        extra.insert("tuned_quantity".to_string(), json!(q_star));
    } else if cfg.run.tune {
        let span = 0.7;
        let tuned_re = tune_re_mu(n0, &base, (shell_mu.re - span, shell_mu.re + span))?;
        extra.insert("tuned_re_mu".to_string(), json!(tuned_re));
    }
    Ok(Artifacts {
        header: vec!["variable", "value", "resonance_quantity", "log10_quantity"],
        rows,
        assertions,
        extra: json!(extra),
    })
}

fn run_calr_design(cfg: &RunConfig) -> Result<Artifacts> {
    let n0 = cfg.n0()?;
    let base = cfg.coreshell()?;
    let rho = base.rho();
    let loss = rho.powi(n0 as i32);
    let rho2n0 = rho.powi(2 * n0 as i32);
    let mu_ext = base.exterior.mu.re;
    let with_p2 = |p2: Complex64| -> Result<CoreShellConfig> {
        let shell = make_medium(
            base.shell.lambda,
            Complex64::new(-mu_ext, loss) + p2,
            cfg.run.omega,
        )?;
        CoreShellConfig::new(base.r_i, base.r_e, base.core, shell, base.exterior)
    };
    let dmag = |p2: Complex64| -> Result<f64> {
        Ok(denominator_d(n0, &with_p2(p2)?)?.norm())
    };
    let untuned = dmag(Complex64::new(0.0, 0.0))?;
    let p2_star = tune_p2(n0, &base)?;
    let tuned = dmag(p2_star)?;
    let suppression = untuned / tuned;
    let (r_star, bound_radius) = critical_radius(&base);

    let sweep = cfg.sweep.clone().unwrap_or(SweepBlock {
        variable: "p2".into(),
        start: -0.1,
        stop: 0.1,
        points: 201,
        log_scale: false,
    });
    if sweep.variable != "p2" {
        return Err(Error::ConfigInvalid(
            "calr-design sweeps over variable = \"p2\"".into(),
        ));
    }
    let mut rows = Vec::new();
    for v in sweep.grid()? {
        let d = dmag(Complex64::new(v, 0.0))?;
        rows.push(vec![fmt17(v), fmt17(d), fmt17(d.log10())]);
    }
    let assertions = vec![Assertion::above(
        "suppression_factor",
        suppression,
        cfg.tolerances.suppression,
    )];
    Ok(Artifacts {
        header: vec!["p2", "abs_d", "log10_abs_d"],
        rows,
        assertions,
        extra: json!({
            "bound_radius": bound_radius,
            "d_tuned": tuned,
            "d_untuned": untuned,
            "p2_star_im": p2_star.im,
            "p2_star_re": p2_star.re,
            "r_star": r_star,
            "rho_2n0": rho2n0,
            "suppression": suppression,
        }),
    })
}

fn run_field_grid(cfg: &RunConfig) -> Result<Artifacts> {
    let base = cfg.coreshell()?;
    let source = cfg
        .source
        .ok_or_else(|| Error::ConfigInvalid("field-grid needs a [source] block".into()))?;
    let grid = cfg
        .grid
        .ok_or_else(|| Error::ConfigInvalid("field-grid needs a [grid] block".into()))?;
    if grid.points < 2 || !(grid.r_start < grid.r_stop) {
        return Err(Error::ConfigInvalid("grid needs r_start < r_stop, points >= 2".into()));
    }
    let shell_cfg = if cfg.run.tune {
        let n0 = cfg.n0()?;
        let rho = base.rho();
        let loss = rho.powi(n0 as i32);
        let mu_ext = base.exterior.mu.re;
        let p2 = tune_p2(n0, &base)?;
        let shell = make_medium(
            base.shell.lambda,
            Complex64::new(-mu_ext, loss) + p2,
            cfg.run.omega,
        )?;
        CoreShellConfig::new(base.r_i, base.r_e, base.core, shell, base.exterior)?
    } else {
        base
    };
    let src = point_source_spectrum(
        source.r_0,
        shell_cfg.exterior.k_s,
        (source.n_min, source.n_max),
        shell_cfg.r_e,
    )?;
    let sol = solve_coreshell(&shell_cfg, &src, source.threshold)?;
    let (sin_t, cos_t) = grid.theta.sin_cos();
    let (sin_p, cos_p) = grid.phi.sin_cos();
    let dir = [sin_t * cos_p, sin_t * sin_p, cos_t];
    let mut rows = Vec::new();
    let mut max_outside = 0.0f64;
    let (r_star, bound_radius) = critical_radius(&shell_cfg);
    for k in 0..grid.points {
        let r = grid.r_start
            + (grid.r_stop - grid.r_start) * k as f64 / (grid.points - 1) as f64;
        let x = [r * dir[0], r * dir[1], r * dir[2]];
        let u = match calr::field_eval(x, &shell_cfg, &sol, &src) {
            Ok(u) => u,
            // Grid points landing on an interface carry no information.
            Err(Error::OnInterface(_)) => continue,
            Err(e) => return Err(e),
        };
        let u_abs = u.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if r >= bound_radius {
            max_outside = max_outside.max(u_abs);
        }
        rows.push(vec![
            fmt17(r),
            fmt17(x[0]),
            fmt17(x[1]),
            fmt17(x[2]),
            fmt17(u_abs),
            fmt17(u[0].re),
            fmt17(u[0].im),
            fmt17(u[1].re),
            fmt17(u[1].im),
            fmt17(u[2].re),
            fmt17(u[2].im),
        ]);
    }
    let resonant = sol.classification == Classification::Resonant;
    let expected_resonant = source.r_0 < r_star;
    let assertions = vec![Assertion::above(
        "classification_matches_critical_radius",
        if resonant == expected_resonant { 1.0 } else { 0.0 },
        0.5,
    )];
    Ok(Artifacts {
        header: vec![
            "r", "x", "y", "z", "u_abs", "ux_re", "ux_im", "uy_re", "uy_im", "uz_re", "uz_im",
        ],
        rows,
        assertions,
        extra: json!({
            "bound_radius": bound_radius,
            "classification": format!("{:?}", sol.classification),
            "energy": sol.energy,
            "max_u_beyond_bound_radius": max_outside,
            "r_star": r_star,
            "source_radius": source.r_0,
        }),
    })
}

fn rel_err3(a: &[Complex64; 3], b: &[Complex64; 3]) -> f64 {
    let diff: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let scale: f64 = b.iter().map(|y| y.norm_sqr()).sum::<f64>().sqrt();
    diff / scale.max(1e-300)
}

fn run_validate(cfg: &RunConfig, seed: u64) -> Result<Artifacts> {
    let tol = &cfg.tolerances;
    let r = cfg.geometry.r_e;
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut suite_worst: BTreeMap<&'static str, f64> = BTreeMap::new();
    let mut record = |suite: &'static str, case: String, residual: f64, bound: f64| {
        let w = suite_worst.entry(suite).or_insert(0.0);
        *w = w.max(residual);
        rows.push(vec![
            suite.to_string(),
            case,
            fmt17(residual),
            fmt17(bound),
            (residual.is_finite() && residual < bound).to_string(),
        ]);
    };

    // Wronskian of the spherical Bessel pair.
    for n in [0usize, 1, 2, 5, 10, 20, 40, 80] {
        for t in [0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 100.0] {
            record(
                "wronskian",
                format!("n={n} t={t}"),
                wronskian_residual(n, t)?,
                tol.wronskian,
            );
        }
    }

    // Three-term recurrence closure at moderate arguments.
    for kind in [Kind::J, Kind::H] {
        for n in [5usize, 20, 60] {
            for t in [1.0f64, 10.0] {
                let z = Complex64::new(t, 0.0);
                let lo = sph_fn(kind, n - 1, z)?.value();
                let mid = sph_fn(kind, n, z)?.value();
                let hi = sph_fn(kind, n + 1, z)?.value();
                let lhs = lo + hi;
                let rhs = (2.0 * n as f64 + 1.0) / t * mid;
                let scale = lo.norm().max(hi.norm()).max(rhs.norm());
                record(
                    "recurrence",
                    format!("{kind:?} n={n} t={t}"),
                    (lhs - rhs).norm() / scale,
                    tol.wronskian * 10.0,
                );
            }
        }
    }

    // Coefficient-vector integral identities.
    for which in [PropId::P1, PropId::P2, PropId::P3] {
        for n in 1..=4usize {
            for m in -(n as i64)..=n as i64 {
                record(
                    "identities",
                    format!("{which:?} n={n} m={m}"),
                    verify_prop_identities(which, n, m)?,
                    tol.identity,
                );
            }
        }
    }

    // Analytic layer actions vs direct kernel quadrature.
    for omega in [0.5f64, 2.0, 5.0] {
        let medium = cfg.exterior.build(omega)?;
        for kind in [VshKind::T, VshKind::I, VshKind::N] {
            for n in 1..=3usize {
                let mode = ModeIndex::new(n, 1.min(n as i64), kind)?;
                for radius in [0.5 * r, 2.0 * r] {
                    let x = [radius * 0.36, radius * 0.48, radius * 0.8];
                    let analytic = action_field(&mode, &medium, r, x)?;
                    let oracle = kernel_quadrature_oracle(&mode, &medium, r, x)?;
                    record(
                        "oracle",
                        format!("{kind:?} n={n} omega={omega} |x|={radius}"),
                        rel_err3(&analytic, &oracle),
                        tol.oracle,
                    );
                }
            }
        }
    }

    // N-P eigen-residuals: the configured medium plus seeded random draws.
    let mut media = vec![(cfg.exterior, cfg.run.omega, "config".to_string())];
    let mut rng = StdRng::seed_from_u64(seed);
    for k in 0..3 {
        let lambda = rng.gen_range(0.5..3.0);
        let mu = rng.gen_range(0.3..2.0);
        let omega = rng.gen_range(0.5..5.0);
        media.push((
            MediumBlock {
                lambda: Cx { re: lambda, im: 0.0 },
                mu: Cx { re: mu, im: 0.0 },
            },
            omega,
            format!("draw{k}"),
        ));
    }
    for (block, omega, label) in media {
        let medium = block.build(omega)?;
        for n in 1..=40usize {
            let sys = np_eigensystem(n, &medium, r, TOL_D1N)?;
            let (_, bl) = np_matrix(n, &medium, r)?;
            record(
                "np_residual",
                format!("{label} n={n}"),
                eigen_residual(&bl, &sys),
                tol.np_residual,
            );
        }
    }

    let bounds: BTreeMap<&'static str, f64> = BTreeMap::from([
        ("wronskian", tol.wronskian),
        ("recurrence", tol.wronskian * 10.0),
        ("identities", tol.identity),
        ("oracle", tol.oracle),
        ("np_residual", tol.np_residual),
    ]);
    let assertions: Vec<Assertion> = suite_worst
        .iter()
        .map(|(suite, worst)| Assertion::below(suite, *worst, bounds[suite]))
        .collect();
    Ok(Artifacts {
        header: vec!["suite", "case", "residual", "bound", "pass"],
        rows,
        assertions,
        extra: json!(suite_worst),
    })
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

/// Execute one command against a config file; writes `<mode>.csv` and
/// `<mode>.json` under `out_dir` and reports whether all assertions passed.
pub fn run(
    command: Mode,
    config_path: &Path,
    out_dir: &Path,
    seed: Option<u64>,
    threads: Option<usize>,
) -> Result<RunOutcome> {
    if let Some(t) = threads {
        if t == 0 {
            return Err(Error::ConfigInvalid("--threads must be positive".into()));
        }
    }
    let mut cfg = RunConfig::load(config_path)?;
    if cfg.mode != command {
        return Err(Error::ConfigInvalid(format!(
            "config mode {:?} does not match the {:?} command",
            cfg.mode, command
        )));
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let artifacts = match command {
        Mode::NpSpectrum => run_np_spectrum(&cfg)?,
        Mode::ResonanceSweep => run_resonance_sweep(&cfg)?,
        Mode::CalrDesign => run_calr_design(&cfg)?,
        Mode::FieldGrid => run_field_grid(&cfg)?,
        Mode::Validate => run_validate(&cfg, cfg.seed)?,
    };
    let passed = artifacts.assertions.iter().all(|a| a.passed);
    let csv_path = out_dir.join(format!("{}.csv", command.stem()));
    let summary_path = out_dir.join(format!("{}.json", command.stem()));
    write_atomic(&csv_path, &render_csv(&artifacts.header, &artifacts.rows))?;
    let summary = json!({
        "assertions": artifacts.assertions,
        "config": cfg,
        "mode": command,
        "passed": passed,
        "results": artifacts.extra,
        "rows": artifacts.rows.len(),
    });
    let mut text = serde_json::to_string_pretty(&summary).map_err(|e| {
        Error::ConfigInvalid(format!("summary serialization: {e}"))
    })?;
    text.push('\n');
    write_atomic(&summary_path, &text)?;
    Ok(RunOutcome {
        passed,
        csv_path,
        summary_path,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unknown_keys() {
        let text = "mode = \"validate\"\nnot_a_key = 1\n[run]\nomega = 1.0\n[geometry]\nr_e = 1.0\n[exterior]\nlambda = 1.0\nmu = 1.0\n";
        let parsed: std::result::Result<RunConfig, _> = toml::from_str(text);
        assert!(parsed.is_err());
    }

    #[test]
    fn complex_entries_accept_scalar_and_pair() {
        let text = "mode = \"np-spectrum\"\n[run]\nomega = 1.0\n[geometry]\nr_e = 1.0\n[exterior]\nlambda = [1.0, 0.5]\nmu = 2.0\n";
        let cfg: RunConfig = toml::from_str(text).unwrap();
        assert_eq!(cfg.exterior.lambda.im, 0.5);
        assert_eq!(cfg.exterior.mu.re, 2.0);
        assert_eq!(cfg.exterior.mu.im, 0.0);
    }

    #[test]
    fn csv_is_rfc4180() {
        let rendered = render_csv(&["a", "b"], &[vec!["1".into(), "x,\"y\"".into()]]);
        assert_eq!(rendered, "a,b\r\n1,\"x,\"\"y\"\"\"\r\n");
    }

    #[test]
    fn fmt17_is_deterministic() {
        assert_eq!(fmt17(1.0 / 3.0), fmt17(1.0 / 3.0));
        assert_eq!(fmt17(1.0 / 3.0), "3.3333333333333331e-1");
    }

    #[test]
    fn sweep_grids() {
        let lin = SweepBlock {
            variable: "p1".into(),
            start: 0.0,
            stop: 1.0,
            points: 3,
            log_scale: false,
        };
        assert_eq!(lin.grid().unwrap(), vec![0.0, 0.5, 1.0]);
        let log = SweepBlock {
            variable: "im_mu_hat".into(),
            start: 1e-4,
            stop: 1.0,
            points: 5,
            log_scale: true,
        };
        let g = log.grid().unwrap();
        assert!((g[1] / g[0] - 10.0).abs() < 1e-12);
        assert!((g[4] - 1.0).abs() < 1e-12);
    }
}
