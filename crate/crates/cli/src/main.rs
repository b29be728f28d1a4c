use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use triwell::construction::{SolvableSeed, WellSpec};
use triwell::oracle::{FdSolver, GridSpec, Parity, SolverOptions, DEFAULT_STEP};
use triwell::scaling::{derive_length, MassPreset, PhysicalScale, DEFAULT_COHERENCE_TIME};
use triwell::sweep::{self, parse_grid, parse_number, SweepConfig, SweepError};
use triwell::triple::{self, TripleParams};
use triwell::verify::{self, Suite, VerifyOptions};

const EXIT_ASSERTION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "triwell", version, about = "Exactly solvable multi-well potentials: sweeps, bounds and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate quantities over a (lambda, a) grid
    Sweep(SweepArgs),
    /// Run a verification suite and report every check
    Verify(VerifyArgs),
    /// Ground state of a triple well or a general N-well specification
    Ground(GroundArgs),
    /// Closed-form excited-level bounds of the triple well
    Bounds(BoundsArgs),
    /// Convert adimensional energies and frequencies to SI units
    Scale(ScaleArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Flat `key = value` file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// `start:stop:step` or a comma list; fractions like 2/3 are accepted
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Comma list of potential, density, alpha, bounds, q, c, f, oracle_spectrum
    #[arg(long)]
    quantity: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    xmin: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    xmax: Option<String>,
    #[arg(long)]
    dx: Option<String>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// construction, bounds, appendix, scaling or all
    #[arg(long, default_value = "all")]
    suite: String,
    /// Multiplies every tolerance
    #[arg(long, default_value_t = 1.0)]
    tolerance_scale: f64,
}

#[derive(Args)]
struct GroundArgs {
    #[arg(long, value_parser = number, default_value = "2/3")]
    lambda: f64,
    #[arg(long, value_parser = number, default_value = "5")]
    a: f64,
    /// Weights of a general specification (overrides --lambda/--a)
    #[arg(long, requires = "shifts")]
    weights: Option<String>,
    #[arg(long, requires = "weights", allow_hyphen_values = true)]
    shifts: Option<String>,
    /// Also solve on a grid and compare
    #[arg(long)]
    oracle: bool,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, value_parser = number)]
    lambda: f64,
    #[arg(long, value_parser = number)]
    a: f64,
    /// Also compute E0, E1, E2 on a grid
    #[arg(long)]
    oracle: bool,
}

#[derive(Args)]
struct ScaleArgs {
    /// electron or reference (1.7e-27 kg)
    #[arg(long, default_value = "reference")]
    mass_preset: String,
    /// Mass in kg, overriding the preset
    #[arg(long, value_parser = number)]
    mass: Option<f64>,
    /// Length unit L in metres
    #[arg(long, value_parser = number, conflicts_with = "width")]
    length: Option<f64>,
    /// Physical width in metres; L = width / dispersion
    #[arg(long, value_parser = number, default_value = "5e-8")]
    width: f64,
    /// Adimensional width
    #[arg(long, value_parser = number, default_value = "2.34")]
    dispersion: f64,
    /// Adimensional level spacing
    #[arg(long, value_parser = number, default_value = "1e-6")]
    omega: f64,
    /// Coherence time in seconds
    #[arg(long, value_parser = number, default_value_t = DEFAULT_COHERENCE_TIME)]
    tau: f64,
}

fn number(s: &str) -> Result<f64, String> {
    parse_number("value", s).map_err(|e| e.to_string())
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn sweep_exit(e: &SweepError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(match e {
        SweepError::Usage { .. } => EXIT_USAGE,
        SweepError::Io { .. } => EXIT_IO,
        SweepError::Compute { .. } => EXIT_ASSERTION,
    })
}

fn run_sweep(args: SweepArgs) -> ExitCode {
    let mut cfg = SweepConfig::default();
    if let Some(path) = &args.config {
        if let Err(e) = cfg.apply_file(path) {
            return sweep_exit(&e);
        }
    }
    let overrides = [
        ("lambda", args.lambda),
        ("a", args.a),
        ("quantity", args.quantity),
        ("xmin", args.xmin),
        ("xmax", args.xmax),
        ("dx", args.dx),
        ("format", args.format),
        ("out", args.out.map(|p| p.display().to_string())),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            if let Err(e) = cfg.set(key, &v) {
                return sweep_exit(&e);
            }
        }
    }
    let report = match sweep::run_sweep(&cfg) {
        Ok(r) => r,
        Err(e) => return sweep_exit(&e),
    };
    println!("triwell {} sweep", report.version);
    for (k, v) in &report.config {
        println!("  {k} = {v}");
    }
    for (name, path, rows) in &report.tables {
        println!("{name}: {rows} rows -> {}", path.display());
    }
    for d in &report.discrepancies {
        println!("discrepancy: {d}");
    }
    println!("elapsed {:.2?}", report.elapsed);
    ExitCode::SUCCESS
}

fn run_verify(args: VerifyArgs) -> ExitCode {
    let suite: Suite = match args.suite.parse() {
        Ok(s) => s,
        Err(e) => return usage(e),
    };
    if !(args.tolerance_scale > 0.0 && args.tolerance_scale.is_finite()) {
        return usage(format!("invalid `tolerance-scale`: {}", args.tolerance_scale));
    }
    let report = verify::run_verify(
        suite,
        VerifyOptions {
            tolerance_scale: args.tolerance_scale,
            ..Default::default()
        },
    );
    println!("{report}");
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_ASSERTION)
    }
}

fn run_ground(args: GroundArgs) -> ExitCode {
    let spec = match (&args.weights, &args.shifts) {
        (Some(w), Some(s)) => {
            let parsed = parse_grid("weights", w).and_then(|w| Ok((w, parse_grid("shifts", s)?)));
            match parsed {
                Ok((w, s)) => WellSpec::from_parts(SolvableSeed::poschl_teller(), w, s),
                Err(e) => return usage(e),
            }
        }
        _ => match TripleParams::new(args.lambda, args.a) {
            Ok(p) => match p.well_spec() {
                Ok(s) => {
                    println!("triple well lambda = {}, a = {}", p.lambda(), p.a());
                    println!("  Q = {:.12e}", triple::q_ratio(&p));
                    println!("  C = {:.12e}", triple::c_ratio(&p));
                    Ok(s)
                }
                Err(e) => return usage(e),
            },
            Err(e) => return usage(e),
        },
    };
    let spec = match spec {
        Ok(s) => s,
        Err(e) => return usage(e),
    };
    let ground = match spec.ground_state() {
        Ok(g) => g,
        Err(e) => return usage(e),
    };
    println!("  N = {}", spec.len());
    println!("  weights = {:?}", spec.weights().as_slice());
    println!("  shifts = {:?}", spec.shifts().as_slice());
    println!("  E0 = {}", ground.energy());
    println!("  alpha = {:.12e}", ground.alpha());
    if args.oracle {
        let solved = GridSpec::symmetric(spec.domain_half_width(), DEFAULT_STEP, Parity::None)
            .and_then(|g| FdSolver::new(SolverOptions::default()).solve(|x| spec.potential(x), &g, 1));
        match solved {
            Ok(s) => {
                println!("  oracle E0 = {:.10}", s.energies[0]);
                println!("  oracle |E0 + 1| = {:.3e}", (s.energies[0] - ground.energy()).abs());
                println!("  grid-L2 distance = {:.3e}", s.l2_distance(0, |x| ground.psi(x)));
                for w in &s.warnings {
                    println!("  warning: {w}");
                }
            }
            Err(e) => {
                eprintln!("error: oracle solve failed: {e}");
                return ExitCode::from(EXIT_ASSERTION);
            }
        }
    }
    ExitCode::SUCCESS
}

fn run_bounds(args: BoundsArgs) -> ExitCode {
    let p = match TripleParams::new(args.lambda, args.a) {
        Ok(p) => p,
        Err(e) => return usage(e),
    };
    let b = match triple::bounds(&p) {
        Ok(b) => b,
        Err(e) => return usage(e),
    };
    println!("triple well lambda = {}, a = {}", p.lambda(), p.a());
    println!("  O(+,-) = 2a csch 2a = {:.12e}", b.overlap_pm);
    println!("  O(0,+) = a csch a   = {:.12e}", b.overlap_0p);
    println!("  alpha = {:.12e}", b.alpha);
    println!("  E1 <= {:.12e}", b.e1_upper);
    println!("  E2 - E0 <= f_a = {:.12e}", b.e2_gap_upper);
    println!(
        "  f_a peaks at lambda* = {:.8} with sup f_a = {:.6e}",
        triple::gap_bound_argmax(p.a()),
        triple::gap_bound_sup(p.a())
    );
    if args.oracle {
        match triple::oracle_levels(&p, DEFAULT_STEP) {
            Ok(lv) => {
                println!("  oracle E0 = {:.10}, E1 = {:.10}, E2 = {:.10}", lv.e0, lv.e1, lv.e2);
                println!("  oracle E1 - E0 = {:.6e}, E2 - E0 = {:.6e}", lv.gap1(), lv.gap2());
            }
            Err(e) => {
                eprintln!("error: oracle solve failed: {e}");
                return ExitCode::from(EXIT_ASSERTION);
            }
        }
    }
    ExitCode::SUCCESS
}

fn run_scale(args: ScaleArgs) -> ExitCode {
    let mass = match args.mass {
        Some(m) => m,
        None => match args.mass_preset.parse::<MassPreset>() {
            Ok(p) => p.kilograms(),
            Err(e) => return usage(e),
        },
    };
    let length = match args.length {
        Some(l) => Ok(l),
        None => derive_length(args.width, args.dispersion),
    };
    let scale = match length.and_then(|l| PhysicalScale::new(mass, l)) {
        Ok(s) => s,
        Err(e) => return usage(e),
    };
    let c = scale.coherence(args.omega, args.tau);
    println!("mass m = {:e} kg", scale.mass());
    println!("length unit L = {:e} m", scale.length());
    println!("energy unit hbar^2/2mL^2 = {:e} J", scale.energy_unit());
    println!("frequency unit hbar/2mL^2 = {:e} s^-1", scale.frequency_unit());
    println!("Omega = {:e} s^-1 for adimensional spacing {:e}", c.frequency, args.omega);
    println!("period 2pi/Omega = {:e} s, coherence time {:e} s, Omega tau = {:e}", c.period, c.tau, c.product);
    println!("observable within coherence time: {}", if c.observable { "yes" } else { "no" });
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Sweep(a) => run_sweep(a),
        Command::Verify(a) => run_verify(a),
        Command::Ground(a) => run_ground(a),
        Command::Bounds(a) => run_bounds(a),
        Command::Scale(a) => run_scale(a),
    }
}
