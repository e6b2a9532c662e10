use cavitylab_cli::config::{ExperimentConfig, FormulationName, Geometry, KSource};
use cavitylab_cli::{run, Command, RunOptions};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cavitylab", version, about = "Helmholtz BEM and GMRES experiments on trapping cavities")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// GMRES iteration counts per wavenumber
    SweepIterations(Overrides),
    /// Eigenvalues, condition numbers and singular values of M⁻¹A
    Spectrum(Overrides),
    /// Eigenvalue paths on a uniform k grid
    Flow(Overrides),
    /// Cluster-plus-outliers bound against actual iterations
    Bound(Overrides),
    /// Ellipse quasimode frequencies
    Quasimodes(Overrides),
    /// Predicted near-zero eigenvalue counts
    Weyl(Overrides),
    /// Total field on a grid
    Field(Overrides),
    /// Galerkin errors under nested refinement
    GalerkinError(Overrides),
    /// GMRES solution error against a direct solve
    GmresError(Overrides),
}

#[derive(Args)]
struct Overrides {
    /// TOML configuration file; defaults apply without one
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated wavenumbers, replacing the configured source
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<f64>>,
    #[arg(long, value_parser = parse_geometry)]
    geometry: Option<Geometry>,
    #[arg(long, value_parser = parse_formulation)]
    formulation: Option<FormulationName>,
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    #[arg(long)]
    ppw: Option<f64>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    /// Replace every system matrix by the identity
    #[arg(long)]
    debug_identity: bool,
    /// Bound comparison on this many random cluster matrices
    #[arg(long)]
    synthetic: Option<usize>,
    /// Ignore an existing checkpoint
    #[arg(long)]
    fresh: bool,
}

fn parse_geometry(s: &str) -> Result<Geometry, String> {
    match s {
        "small-cavity" => Ok(Geometry::SmallCavity),
        "large-cavity" => Ok(Geometry::LargeCavity),
        "ellipse" => Ok(Geometry::Ellipse),
        "circle" => Ok(Geometry::Circle),
        _ => Err("expected small-cavity, large-cavity, ellipse or circle".into()),
    }
}

fn parse_formulation(s: &str) -> Result<FormulationName, String> {
    match s {
        "dirichlet-aprime" => Ok(FormulationName::DirichletAprime),
        "neumann-b" => Ok(FormulationName::NeumannB),
        "neumann-breg" => Ok(FormulationName::NeumannBreg),
        _ => Err("expected dirichlet-aprime, neumann-b or neumann-breg".into()),
    }
}

impl Overrides {
    fn apply(self) -> Result<(ExperimentConfig, RunOptions), String> {
        let mut c = match &self.config {
            Some(p) => ExperimentConfig::load(p).map_err(|e| format!("{}: {e}", p.display()))?,
            None => ExperimentConfig::default(),
        };
        if let Some(k) = self.k {
            c.k = KSource::List(k);
        }
        if let Some(g) = self.geometry {
            c.geometry = g;
        }
        if let Some(f) = self.formulation {
            c.formulation = f;
        }
        if let Some(t) = self.theta {
            c.theta = t;
        }
        if let Some(p) = self.ppw {
            c.ppw = p;
        }
        if let Some(t) = self.tolerance {
            c.tolerance = t;
        }
        if let Some(o) = self.output {
            c.output_dir = o;
        }
        if let Some(w) = self.workers {
            c.workers = w;
        }
        if self.synthetic.is_some() {
            c.bound.synthetic = self.synthetic;
        }
        c.debug_identity |= self.debug_identity;
        c.validate().map_err(|e| e.to_string())?;
        Ok((c, RunOptions { fresh: self.fresh }))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, ov) = match cli.command {
        Cmd::SweepIterations(o) => (Command::SweepIterations, o),
        Cmd::Spectrum(o) => (Command::Spectrum, o),
        Cmd::Flow(o) => (Command::Flow, o),
        Cmd::Bound(o) => (Command::Bound, o),
        Cmd::Quasimodes(o) => (Command::Quasimodes, o),
        Cmd::Weyl(o) => (Command::Weyl, o),
        Cmd::Field(o) => (Command::Field, o),
        Cmd::GalerkinError(o) => (Command::GalerkinError, o),
        Cmd::GmresError(o) => (Command::GmresError, o),
    };
    let (cfg, opts) = match ov.apply() {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match run(command, &cfg, opts) {
        Ok(report) => {
            let r = &report.result;
            eprintln!(
                "{}: {} items computed, {} reused, {} failed; output in {}",
                command.name(),
                r.computed,
                r.reused,
                r.failures.len(),
                report.output_dir.display()
            );
            for f in &r.failures {
                eprintln!("  {}: {}", f.item, f.error);
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
