//! One function per subcommand. Each builds its work items, hands them to
//! [`run_items`] and writes its tables.

use crate::config::{ConfigError, ExperimentConfig, FormulationName, Geometry};
use crate::run::{finish, run_items, Item, RunContext, RunResult, Rows, PROBLEM_TABLE};
use crate::synthetic::{self, synthetic_system};
use crate::table::{num, Table};
use cavitylab::bem::{
    assemble_system, evaluate_field, plane_wave_rhs, Formulation, MassMatrix, PlaneWave,
};
use cavitylab::bound::{compute_bound, ClusterBoundInput, OutlierRegion};
use cavitylab::geometry::{build_mesh, refine_mesh, prolong_p1, BoundaryMesh};
use cavitylab::gmres::{direct_solve, gmres_solve, Preconditioner, SolveConfig};
use cavitylab::linalg::{identity, CMat, C64};
use cavitylab::quasimodes::{certify_mode, find_mode, BoundaryCondition, EllipseSpec, Parity, QUASIMODE_COLUMNS};
use cavitylab::spectral::{
    fit_exponent, full_spectrum_with, rotate_two_over_i, summary_record, track_eigenpaths, SpectrumOptions,
    SPECTRUM_COLUMNS, SUMMARY_COLUMNS,
};
use cavitylab::weyl::{predicted_window_count, v_loc, WeylConfig};
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    SweepIterations,
    Spectrum,
    Flow,
    Bound,
    Quasimodes,
    Weyl,
    Field,
    GalerkinError,
    GmresError,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::SweepIterations,
        Command::Spectrum,
        Command::Flow,
        Command::Bound,
        Command::Quasimodes,
        Command::Weyl,
        Command::Field,
        Command::GalerkinError,
        Command::GmresError,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::SweepIterations => "sweep-iterations",
            Command::Spectrum => "spectrum",
            Command::Flow => "flow",
            Command::Bound => "bound",
            Command::Quasimodes => "quasimodes",
            Command::Weyl => "weyl",
            Command::Field => "field",
            Command::GalerkinError => "galerkin-error",
            Command::GmresError => "gmres-error",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug)]
pub struct Report {
    pub command: Command,
    pub result: RunResult,
    pub extra: Vec<Table>,
    pub output_dir: PathBuf,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.result.failures.is_empty() {
            0
        } else {
            2
        }
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.result.table(name).or_else(|| self.extra.iter().find(|t| t.name == name))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub fresh: bool,
}

/// Hash of everything that changes results; the output directory and the
/// worker count do not.
pub fn config_hash(command: Command, cfg: &ExperimentConfig) -> u64 {
    let mut c = cfg.clone();
    c.output_dir = PathBuf::new();
    c.workers = 1;
    crate::checkpoint::fnv1a(format!("{}\n{}", command.name(), c.to_toml_string()).as_bytes())
}

pub fn run(command: Command, cfg: &ExperimentConfig, opts: RunOptions) -> Result<Report, CliError> {
    cfg.validate()?;
    let ctx = RunContext {
        command: command.name().to_string(),
        output_dir: cfg.output_dir.clone(),
        workers: cfg.workers,
        config_hash: config_hash(command, cfg),
        fresh: opts.fresh,
    };
    let (result, extra) = match command {
        Command::SweepIterations => sweep_iterations(&ctx, cfg)?,
        Command::Spectrum => spectrum(&ctx, cfg)?,
        Command::Flow => flow(&ctx, cfg)?,
        Command::Bound => bound(&ctx, cfg)?,
        Command::Quasimodes => quasimodes(&ctx, cfg)?,
        Command::Weyl => weyl(&ctx, cfg)?,
        Command::Field => field(&ctx, cfg)?,
        Command::GalerkinError => galerkin_error(&ctx, cfg)?,
        Command::GmresError => gmres_error(&ctx, cfg)?,
    };
    finish(&ctx, &result, &extra)?;
    Ok(Report { command, result, extra, output_dir: cfg.output_dir.clone() })
}

fn wavenumber_items(cfg: &ExperimentConfig) -> Result<Vec<Item>, CliError> {
    Ok(cfg.wavenumbers()?.into_iter().map(Item::wavenumber).collect())
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

struct System {
    mesh: BoundaryMesh,
    a: CMat,
    mass: MassMatrix,
    rhs: Vec<C64>,
}

fn system_on(cfg: &ExperimentConfig, mesh: BoundaryMesh, k: f64) -> Result<System, String> {
    let f: Formulation = cfg.formulation.into();
    let a = if cfg.debug_identity {
        identity(mesh.len())
    } else {
        assemble_system(&mesh, f, k).map_err(err)?.entries
    };
    let wave = PlaneWave::new(k, cfg.theta).map_err(err)?;
    let rhs = plane_wave_rhs(&mesh, f, &wave).map_err(err)?;
    let mass = MassMatrix::new(&mesh);
    Ok(System { mesh, a, mass, rhs })
}

fn system(cfg: &ExperimentConfig, k: f64) -> Result<System, String> {
    let mesh = build_mesh(&cfg.geometry.curve(), k, cfg.ppw).map_err(err)?;
    system_on(cfg, mesh, k)
}

fn preconditioned(cfg: &ExperimentConfig, s: &System) -> CMat {
    if cfg.debug_identity {
        // the identity hook bypasses the mass matrix as well
        return s.a.clone();
    }
    s.mass.solve_matrix(&s.a)
}

fn gmres_config(tol: f64) -> SolveConfig {
    SolveConfig { tolerance: tol, max_iterations: None, preconditioner: Preconditioner::Mass, reorthogonalize: false }
}

fn mass_norm(mass: &MassMatrix, x: &[C64]) -> f64 {
    let mx = mass.apply(x);
    x.iter().zip(&mx).map(|(a, b)| (a.conj() * b).re).sum::<f64>().max(0.0).sqrt()
}

const FIT_COLUMNS: &[&str] = &["quantity", "exponent", "prefactor", "residual_norm", "points"];

/// Power-law fit of one numeric column against `k`, skipping
/// non-positive values.
fn fit_row(quantity: &str, ks: &[f64], values: &[f64]) -> Option<Vec<String>> {
    let (k, v): (Vec<f64>, Vec<f64>) = ks.iter().zip(values).filter(|(_, &v)| v > 0.0).map(|(&k, &v)| (k, v)).unzip();
    if k.len() < 2 {
        return None;
    }
    let f = fit_exponent(&k, &v).ok()?;
    Some(vec![quantity.into(), num(f.exponent), num(f.prefactor), num(f.residual_norm), k.len().to_string()])
}

fn column(t: &Table, name: &str) -> Vec<f64> {
    let j = t.columns.iter().position(|c| *c == name).expect("known column");
    t.rows.iter().map(|r| r[j].parse().unwrap_or(f64::NAN)).collect()
}

const ITERATION_COLUMNS: &[&str] = &["k", "n", "iterations", "converged", "final_relative_residual"];

fn sweep_iterations(ctx: &RunContext, cfg: &ExperimentConfig) -> Result<(RunResult, Vec<Table>), CliError> {
    let items = wavenumber_items(cfg)?;
    let result = run_items(ctx, &items, &[("iterations", ITERATION_COLUMNS)], |it| {
        let s = system(cfg, it.k)?;
        let (_, tr) = gmres_solve(&s.a, &s.rhs, Some(&s.mass), &gmres_config(cfg.tolerance)).map_err(err)?;
        Ok(vec![(
            "iterations".into(),
            vec![it.label.clone(), s.mesh.len().to_string(), tr.iterations.to_string(), tr.converged.to_string(), num(tr.final_relative())],
        )])
    })?;
    let t = result.table("iterations").expect("declared");
    let mut fit = Table::new("iterations_fit", FIT_COLUMNS);
    fit.rows.extend(fit_row("iterations", &column(t, "k"), &column(t, "iterations")));
    Ok((result, vec![fit]))
}

fn rotated(f: FormulationName) -> bool {
    matches!(f, FormulationName::NeumannB | FormulationName::NeumannBreg)
}

fn spectrum_rows(table: &str, k: &str, eigs: &[C64], kappas: &[f64], svs: &[f64]) -> Rows {
    eigs.iter()
        .enumerate()
        .map(|(j, z)| {
            let kappa = kappas.get(j).map(|v| num(*v)).unwrap_or_default();
            let sigma = svs.get(j).map(|v| num(*v)).unwrap_or_default();
            (table.to_string(), vec![k.to_string(), j.to_string(), num(z.re), num(z.im), kappa, sigma])
        })
        .collect()
}

fn spectrum(ctx: &RunContext, cfg: &ExperimentConfig) -> Result<(RunResult, Vec<Table>), CliError> {
    let items = wavenumber_items(cfg)?;
    let rotate = rotated(cfg.formulation);
    let opts = SpectrumOptions { condition_numbers: true, rectangle: cfg.rectangle.rectangle() };
    let tables: Vec<(&str, &'static [&'static str])> = vec![
        ("spectrum", &SPECTRUM_COLUMNS),
        ("spectrum_rotated", &SPECTRUM_COLUMNS),
        ("spectrum_summary", &SUMMARY_COLUMNS),
    ];
    let result = run_items(ctx, &items, &tables, |it| {
        let s = system(cfg, it.k)?;
        let b = preconditioned(cfg, &s);
        let sum = full_spectrum_with(&b, &opts).map_err(err)?;
        let mut rows = spectrum_rows("spectrum", &it.label, &sum.eigenvalues, &sum.kappas, &sum.singular_values);
        if rotate {
            rows.extend(spectrum_rows("spectrum_rotated", &it.label, &rotate_two_over_i(&sum.eigenvalues), &sum.kappas, &sum.singular_values));
        }
        let mut summary = summary_record(it.k, &sum).to_vec();
        summary[0] = it.label.clone();
        rows.push(("spectrum_summary".into(), summary));
        Ok(rows)
    })?;
    let t = result.table("spectrum_summary").expect("declared");
    let ks = column(t, "k");
    let mut fit = Table::new("spectrum_fit", FIT_COLUMNS);
    for q in ["norm2", "ell"] {
        fit.rows.extend(fit_row(q, &ks, &column(t, q)));
    }
    Ok((result, vec![fit]))
}

const FLOW_SPECTRA_COLUMNS: &[&str] = &["k", "index", "re_lambda", "im_lambda"];
const FLOW_COLUMNS: &[&str] = &["path", "k", "re_lambda", "im_lambda", "speed"];

/// Eigenvalues of `M⁻¹A` on the mesh of the largest `k`, tracked through
/// the grid. Only paths that visit the configured rectangle are written.
fn flow(ctx: &RunContext, cfg: &ExperimentConfig) -> Result<(RunResult, Vec<Table>), CliError> {
    let items = wavenumber_items(cfg)?;
    let mut flow = Table::new("flow", FLOW_COLUMNS);
    let Some(kmax) = items.last().map(|i| i.k) else {
        let result = run_items(ctx, &items, &[("flow_spectra", FLOW_SPECTRA_COLUMNS)], |_| Ok(Vec::new()))?;
        return Ok((result, vec![flow]));
    };
    let mesh = build_mesh(&cfg.geometry.curve(), kmax, cfg.ppw).map_err(|e| CliError::Usage(e.to_string()))?;
    let opts = SpectrumOptions { condition_numbers: false, rectangle: cfg.rectangle.rectangle() };
    let result = run_items(ctx, &items, &[("flow_spectra", FLOW_SPECTRA_COLUMNS)], |it| {
        let s = system_on(cfg, mesh.clone(), it.k)?;
        let sum = full_spectrum_with(&preconditioned(cfg, &s), &opts).map_err(err)?;
        Ok(sum
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(j, z)| ("flow_spectra".to_string(), vec![it.label.clone(), j.to_string(), num(z.re), num(z.im)]))
            .collect())
    })?;
    if !result.failures.is_empty() {
        return Ok((result, vec![flow]));
    }
    let t = result.table("flow_spectra").expect("declared");
    let mut ks: Vec<f64> = Vec::new();
    let mut spectra: Vec<Vec<C64>> = Vec::new();
    for r in &t.rows {
        let k: f64 = r[0].parse().expect("own output");
        if ks.last() != Some(&k) {
            ks.push(k);
            spectra.push(Vec::new());
        }
        let z = C64::new(r[2].parse().expect("own output"), r[3].parse().expect("own output"));
        spectra.last_mut().expect("pushed").push(z);
    }
    if ks.len() >= 2 {
        let paths = track_eigenpaths(&ks, &spectra).map_err(|e| CliError::Usage(e.to_string()))?;
        if paths.coarse_grid {
            eprintln!("warning: eigenvalues move more than the grid resolves; reduce the k step");
        }
        let rect = cfg.rectangle.rectangle();
        for (p, path) in paths.paths.iter().enumerate().filter(|(_, p)| p.values.iter().any(|z| rect.contains(*z))) {
            for (j, (k, z)) in path.k.iter().zip(&path.values).enumerate() {
                let speed = if j == 0 { String::new() } else { num(path.speeds[j - 1]) };
                flow.rows.push(vec![p.to_string(), num(*k), num(z.re), num(z.im), speed]);
            }
        }
    }
    Ok((result, vec![flow]))
}

const BOUND_COLUMNS: &[&str] = &[
    "item", "n", "ell", "delta", "gamma_beta", "m_star", "iterations", "converged", "assumptions_ok", "dominates",
];

fn bound(ctx: &RunContext, cfg: &ExperimentConfig) -> Result<(RunResult, Vec<Table>), CliError> {
    let bc = &cfg.bound;
    let synthetic = bc.synthetic;
    let items: Vec<Item> = match synthetic {
        Some(count) => (0..count as u64).map(Item::index).collect(),
        None => wavenumber_items(cfg)?,
    };
    let result = run_items(ctx, &items, &[("bound", BOUND_COLUMNS)], |it| {
        let (b, rhs, s_thr, l0, l1, region) = match synthetic {
            Some(_) => {
                let s = synthetic_system(it.key, bc.synthetic_size);
                let region = OutlierRegion::LeftOfThreshold { radius: synthetic::OUTLIER_RADIUS };
                (s.matrix, s.rhs, synthetic::THRESHOLD, synthetic::L0, synthetic::L1, Some(region))
            }
            None => {
                let s = system(cfg, it.k)?;
                let b = preconditioned(cfg, &s);
                let rhs = s.mass.solve(&s.rhs);
                (b, rhs, bc.threshold(), bc.l0, bc.l1, None)
            }
        };
        let sum = full_spectrum_with(&b, &SpectrumOptions::default()).map_err(err)?;
        let input = ClusterBoundInput {
            eigenvalues: sum.eigenvalues.clone(),
            norm2: sum.norm2,
            kappa_star: sum.kappa_max().ok_or("no condition numbers")?,
            n: b.nrows(),
            s_threshold: s_thr,
            l0,
            l1,
            region: region.unwrap_or_else(|| bc.region(sum.norm2)),
            epsilon: bc.epsilon,
        };
        let res = compute_bound(&input).map_err(err)?;
        let solve = SolveConfig { preconditioner: Preconditioner::None, reorthogonalize: true, ..gmres_config(bc.epsilon) };
        let (_, tr) = gmres_solve(&b, &rhs, None, &solve).map_err(err)?;
        let ok = res.report.ok();
        let dominates = res.m_star >= tr.iterations;
        let mut rows = vec![(
            "bound".to_string(),
            vec![
                it.label.clone(),
                b.nrows().to_string(),
                res.ell.to_string(),
                num(res.delta),
                num(res.gamma_beta),
                res.m_star.to_string(),
                tr.iterations.to_string(),
                tr.converged.to_string(),
                ok.to_string(),
                dominates.to_string(),
            ],
        )];
        if ok && !dominates {
            rows.push((PROBLEM_TABLE.into(), vec![format!("m* = {} below {} GMRES iterations", res.m_star, tr.iterations)]));
        }
        Ok(rows)
    })?;
    Ok((result, Vec::new()))
}

const CERTIFICATE_COLUMNS: &[&str] = &["parity", "bc", "m", "n", "radial_residual", "angular_residual"];

fn quasimodes(ctx: &RunContext, cfg: &ExperimentConfig) -> Result<(RunResult, Vec<Table>), CliError> {
    let q = &cfg.quasimodes;
    let ellipse = EllipseSpec::new(q.a1, q.a2).map_err(|e| CliError::Usage(e.to_string()))?;
    let parity: Parity = q.parity.parse().map_err(|e: cavitylab::error::Error| CliError::Usage(e.to_string()))?;
    let bcond: BoundaryCondition = q.bc.parse().map_err(|e: cavitylab::error::Error| CliError::Usage(e.to_string()))?;
    let items: Vec<Item> = (q.m[0] as u64..q.m[1] as u64).map(Item::index).collect();
    let tables: Vec<(&str, &'static [&'static str])> =
        vec![("quasimodes", &QUASIMODE_COLUMNS), ("quasimode_certificates", CERTIFICATE_COLUMNS)];
    let result = run_items(ctx, &items, &tables, |it| {
        let md = find_mode(it.key as usize, q.n, parity, bcond, &ellipse).map_err(err)?;
        let c = certify_mode(&md, &ellipse);
        Ok(vec![
            (
                "quasimodes".into(),
                vec![
                    md.parity.to_string(),
                    md.bc.to_string(),
                    md.m.to_string(),
                    md.n.to_string(),
                    num(md.alpha),
                    num(md.q),
                    num(md.k),
                ],
            ),
            (
                "quasimode_certificates".into(),
                vec![md.parity.to_string(), md.bc.to_string(), md.m.to_string(), md.n.to_string(), num(c.radial), num(c.angular)],
            ),
        ])
    })?;
    Ok((result, Vec::new()))
}

const WEYL_COLUMNS: &[&str] = &["k", "v_loc", "predicted_count"];

fn weyl(ctx: &RunContext, cfg: &ExperimentConfig) -> Result<(RunResult, Vec<Table>), CliError> {
    let wc = match cfg.geometry {
        Geometry::SmallCavity => WeylConfig::small_cavity(),
        Geometry::LargeCavity => WeylConfig::large_cavity(),
        g => return Err(CliError::Usage(format!("weyl needs a cavity geometry, got {g:?}"))),
    };
    let v = v_loc(&wc).map_err(|e| CliError::Usage(e.to_string()))?;
    let items = wavenumber_items(cfg)?;
    let result = run_items(ctx, &items, &[("weyl", WEYL_COLUMNS)], |it| {
        let p = predicted_window_count(it.k, &wc).map_err(err)?;
        Ok(vec![("weyl".into(), vec![it.label.clone(), num(v), num(p)])])
    })?;
    Ok((result, Vec::new()))
}

const FIELD_COLUMNS: &[&str] = &["x", "y", "re_u", "im_u", "abs_u", "inside", "near_singular"];

fn field(ctx: &RunContext, cfg: &ExperimentConfig) -> Result<(RunResult, Vec<Table>), CliError> {
    if cfg.formulation != FormulationName::DirichletAprime {
        return Err(CliError::Usage("field needs formulation = \"dirichlet-aprime\"".into()));
    }
    let ks = cfg.wavenumbers()?;
    let Some(&k) = ks.first() else {
        return Err(CliError::Usage("field needs one wavenumber".into()));
    };
    let g = cfg.field.clone();
    let items = [Item::wavenumber(k)];
    let result = run_items(ctx, &items, &[("field", FIELD_COLUMNS)], |it| {
        let s = system(cfg, it.k)?;
        let dn = direct_solve(&s.a, &s.rhs).map_err(err)?;
        let zero = vec![C64::new(0.0, 0.0); dn.len()];
        let wave = PlaneWave::new(it.k, cfg.theta).map_err(err)?;
        let at = |i: usize, n: usize, r: [f64; 2]| if n == 1 { r[0] } else { r[0] + (r[1] - r[0]) * i as f64 / (n - 1) as f64 };
        let mut rows = Rows::new();
        for iy in 0..g.ny {
            for ix in 0..g.nx {
                let p = [at(ix, g.nx, g.x), at(iy, g.ny, g.y)];
                let (x, y) = (num(p[0]), num(p[1]));
                if s.mesh.contains(p) {
                    rows.push(("field".into(), vec![x, y, String::new(), String::new(), String::new(), "true".into(), "false".into()]));
                    continue;
                }
                let v = match evaluate_field(&s.mesh, &zero, &dn, &wave, &[p]) {
                    Ok(v) => v[0],
                    // on the boundary itself
                    Err(_) => {
                        rows.push(("field".into(), vec![x, y, String::new(), String::new(), String::new(), "false".into(), "true".into()]));
                        continue;
                    }
                };
                rows.push((
                    "field".into(),
                    vec![x, y, num(v.total.re), num(v.total.im), num(v.total.norm()), "false".into(), v.near_singular.to_string()],
                ));
            }
        }
        Ok(rows)
    })?;
    Ok((result, Vec::new()))
}

const GALERKIN_COLUMNS: &[&str] = &["k", "level", "n", "relative_l2_error"];

/// Solutions on the coarse mesh and its refinements, compared on the
/// finest one after P1 interpolation.
fn galerkin_error(ctx: &RunContext, cfg: &ExperimentConfig) -> Result<(RunResult, Vec<Table>), CliError> {
    let finest = *cfg.refinements.iter().max().expect("validated non-empty");
    if let Some(f) = cfg.refinements.iter().find(|&&f| finest % f != 0) {
        return Err(CliError::Usage(format!("refinement {f} does not divide the finest factor {finest}")));
    }
    let mut levels: Vec<usize> = std::iter::once(1).chain(cfg.refinements.iter().copied()).collect();
    levels.sort_unstable();
    levels.dedup();
    let items = wavenumber_items(cfg)?;
    let result = run_items(ctx, &items, &[("galerkin_error", GALERKIN_COLUMNS)], |it| {
        let coarse = build_mesh(&cfg.geometry.curve(), it.k, cfg.ppw).map_err(err)?;
        let mut sols = Vec::new();
        for &l in &levels {
            let mesh = if l == 1 { coarse.clone() } else { refine_mesh(&coarse, l).map_err(err)? };
            let s = system_on(cfg, mesh, it.k)?;
            let x = direct_solve(&s.a, &s.rhs).map_err(err)?;
            sols.push((l, x, s.mass));
        }
        let (_, reference, mass) = sols.last().expect("at least the coarse level");
        let ref_norm = mass_norm(mass, reference);
        let rows = sols
            .iter()
            .map(|(l, x, _)| {
                let up = if *l == finest { x.clone() } else { prolong_p1(x, finest / l) };
                let diff: Vec<C64> = up.iter().zip(reference).map(|(a, b)| a - b).collect();
                let e = if ref_norm > 0.0 { mass_norm(mass, &diff) / ref_norm } else { 0.0 };
                ("galerkin_error".to_string(), vec![it.label.clone(), l.to_string(), x.len().to_string(), num(e)])
            })
            .collect();
        Ok(rows)
    })?;
    Ok((result, Vec::new()))
}

const GMRES_ERROR_COLUMNS: &[&str] = &["k", "n", "iterations", "converged", "relative_l2_error"];

fn gmres_error(ctx: &RunContext, cfg: &ExperimentConfig) -> Result<(RunResult, Vec<Table>), CliError> {
    let items = wavenumber_items(cfg)?;
    let result = run_items(ctx, &items, &[("gmres_error", GMRES_ERROR_COLUMNS)], |it| {
        let s = system(cfg, it.k)?;
        let exact = direct_solve(&s.a, &s.rhs).map_err(err)?;
        let (x, tr) = gmres_solve(&s.a, &s.rhs, Some(&s.mass), &gmres_config(cfg.tolerance)).map_err(err)?;
        let diff: Vec<C64> = x.iter().zip(&exact).map(|(a, b)| a - b).collect();
        let e = mass_norm(&s.mass, &diff) / mass_norm(&s.mass, &exact);
        Ok(vec![(
            "gmres_error".into(),
            vec![it.label.clone(), s.mesh.len().to_string(), tr.iterations.to_string(), tr.converged.to_string(), num(e)],
        )])
    })?;
    Ok((result, Vec::new()))
}
