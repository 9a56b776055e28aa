//! cartan-lab command line: experiment runner over the library.
//!
//! Exit codes: 0 on success, 1 when a verified invariant fails, 2 on
//! config/schema errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cartan_lab::runner::{batch, run, ExperimentConfig, RunError};

#[derive(Parser)]
#[command(
    name = "cartan-lab",
    version,
    about = "Exceptional-ball covers and trace-inequality experiments for logarithmic potentials on regular sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Output report path (JSON; CSV curves land next to it)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed recorded in the manifest and driving any generated randomness
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a sampled self-similar set with its natural measure
    GenSet {
        /// Built-in name (cantor, cantor:a,b, segment, four-corner,
        /// sequence, arc) or a JSON file of similarity maps
        #[arg(long)]
        ifs: String,
        #[arg(long, default_value_t = 6)]
        depth: u32,
        #[arg(long, default_value_t = 1)]
        ambient_n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Scan regularity ratios over scales and certify the constants
    Regularity {
        #[arg(long)]
        set: PathBuf,
        /// Comma-separated scale list
        #[arg(long)]
        scales: String,
        #[command(flatten)]
        common: Common,
    },
    /// Build a greedy exceptional cover for an atomic measure
    Cover {
        #[arg(long)]
        measure: PathBuf,
        /// Majorant spec `power:p,d` (ignored when --h is given)
        #[arg(long)]
        majorant: Option<String>,
        /// Potential-bound form: majorant derived from H and d
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        d: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Verify a lower bound off a cover on a grid
    Verify {
        #[arg(long)]
        function: PathBuf,
        /// Either a prebuilt cover with an explicit bound...
        #[arg(long)]
        cover: Option<PathBuf>,
        #[arg(long)]
        bound: Option<f64>,
        /// ...or a measure with H and d, building the cover first
        #[arg(long)]
        measure: Option<PathBuf>,
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        d: Option<f64>,
        /// Rectangle grid `xmin,xmax,ymin,ymax,n`
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[command(flatten)]
        common: Common,
    },
    /// Localized cover check on a disk
    LocalCheck {
        #[arg(long)]
        function: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        h: f64,
        #[arg(long)]
        d: f64,
        #[arg(long)]
        c_hat: f64,
        #[arg(long)]
        m1: f64,
        #[arg(long)]
        m2: f64,
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[command(flatten)]
        common: Common,
    },
    /// Supremum-gap experiment on one (x, t, omega) triple
    Remez {
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        function: PathBuf,
        /// Point `re,im`
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        omega_radius: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Mean-oscillation scan over a ball family
    Bmo {
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        function: PathBuf,
        /// Comma-separated radii (defaults to the dyadic family)
        #[arg(long)]
        radii: Option<String>,
        /// Single center `re,im` (defaults to every sample point)
        #[arg(long, allow_hyphen_values = true)]
        center: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Reverse Hölder ratios on one ball
    Revholder {
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        function: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        t: f64,
        /// Comma-separated exponents, `inf` allowed
        #[arg(long)]
        p_list: String,
        #[command(flatten)]
        common: Common,
    },
    /// Distribution-function decay against the exponential bound
    Distcheck {
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        function: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        lambda_max: Option<f64>,
        #[arg(long)]
        lambda_steps: Option<usize>,
        #[arg(long)]
        c_hat: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Growth check for degree-normalized log-moduli
    BernsteinWalsh {
        #[arg(long)]
        function: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        q: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Regularity-necessity scan across scales
    Sharpness {
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        d: Option<f64>,
        #[arg(long)]
        scales: String,
        #[arg(long)]
        c: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Exceptional cover and lower bound for log|F| in the half ball
    MdimCartan {
        /// Gallery name or map JSON path
        #[arg(long)]
        map: String,
        #[arg(long)]
        h: f64,
        #[arg(long)]
        d: f64,
        #[arg(long)]
        grid_count: Option<usize>,
        #[arg(long)]
        mass_override: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Lower-envelope check for log|F| against its zero potential
    Envelope {
        #[arg(long)]
        map: String,
        #[arg(long)]
        grid_count: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Directional leading-exponent probe at a zero
    Ellipticity {
        #[arg(long)]
        map: String,
        #[arg(long)]
        zero_index: Option<usize>,
        #[arg(long)]
        directions: Option<usize>,
        #[arg(long)]
        t0: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Supremum-gap experiment for log|F|
    Mcol1 {
        #[arg(long)]
        map: String,
        #[arg(long)]
        set: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        omega_radius: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Run one experiment from a config file
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run several config files; fails when any child fails
    Batch { configs: Vec<PathBuf> },
}

fn set_opt<T: std::fmt::Display>(c: &mut ExperimentConfig, key: &str, v: &Option<T>) {
    if let Some(v) = v {
        c.set(key, v);
    }
}

fn build_config(cmd: &Command) -> Result<ExperimentConfig, RunError> {
    let c = match cmd {
        Command::GenSet {
            ifs,
            depth,
            ambient_n,
            common,
        } => {
            let mut c = ExperimentConfig::new("gen-set", common.seed, common.out.clone());
            c.set("ifs", ifs)
                .set("depth", depth)
                .set("ambient_n", ambient_n);
            c
        }
        Command::Regularity {
            set,
            scales,
            common,
        } => {
            let mut c = ExperimentConfig::new("regularity", common.seed, common.out.clone());
            c.set("set", set.display()).set("scales", scales);
            c
        }
        Command::Cover {
            measure,
            majorant,
            h,
            d,
            alpha,
            beta,
            gamma,
            common,
        } => {
            let mut c = ExperimentConfig::new("cover", common.seed, common.out.clone());
            c.set("measure", measure.display());
            set_opt(&mut c, "majorant", majorant);
            set_opt(&mut c, "h", h);
            set_opt(&mut c, "d", d);
            set_opt(&mut c, "alpha", alpha);
            set_opt(&mut c, "beta", beta);
            set_opt(&mut c, "gamma", gamma);
            c
        }
        Command::Verify {
            function,
            cover,
            bound,
            measure,
            h,
            d,
            grid,
            common,
        } => {
            let mut c = ExperimentConfig::new("verify", common.seed, common.out.clone());
            c.set("function", function.display()).set("grid", grid);
            set_opt(
                &mut c,
                "cover",
                &cover.as_ref().map(|p| p.display().to_string()),
            );
            set_opt(&mut c, "bound", bound);
            set_opt(
                &mut c,
                "measure",
                &measure.as_ref().map(|p| p.display().to_string()),
            );
            set_opt(&mut c, "h", h);
            set_opt(&mut c, "d", d);
            c
        }
        Command::LocalCheck {
            function,
            x,
            t,
            r,
            h,
            d,
            c_hat,
            m1,
            m2,
            grid,
            common,
        } => {
            let mut c = ExperimentConfig::new("local-check", common.seed, common.out.clone());
            c.set("function", function.display())
                .set("x", x)
                .set("t", t)
                .set("r", r)
                .set("h", h)
                .set("d", d)
                .set("c_hat", c_hat)
                .set("m1", m1)
                .set("m2", m2)
                .set("grid", grid);
            c
        }
        Command::Remez {
            set,
            function,
            x,
            t,
            r,
            omega_radius,
            common,
        } => {
            let mut c = ExperimentConfig::new("remez", common.seed, common.out.clone());
            c.set("set", set.display())
                .set("function", function.display())
                .set("x", x)
                .set("t", t)
                .set("r", r);
            set_opt(&mut c, "omega_radius", omega_radius);
            c
        }
        Command::Bmo {
            set,
            function,
            radii,
            center,
            common,
        } => {
            let mut c = ExperimentConfig::new("bmo", common.seed, common.out.clone());
            c.set("set", set.display())
                .set("function", function.display());
            set_opt(&mut c, "radii", radii);
            set_opt(&mut c, "center", center);
            c
        }
        Command::Revholder {
            set,
            function,
            x,
            t,
            p_list,
            common,
        } => {
            let mut c = ExperimentConfig::new("revholder", common.seed, common.out.clone());
            c.set("set", set.display())
                .set("function", function.display())
                .set("x", x)
                .set("t", t)
                .set("p_list", p_list);
            c
        }
        Command::Distcheck {
            set,
            function,
            x,
            t,
            r,
            lambda_max,
            lambda_steps,
            c_hat,
            common,
        } => {
            let mut c = ExperimentConfig::new("distcheck", common.seed, common.out.clone());
            c.set("set", set.display())
                .set("function", function.display())
                .set("x", x)
                .set("t", t)
                .set("r", r);
            set_opt(&mut c, "lambda_max", lambda_max);
            set_opt(&mut c, "lambda_steps", lambda_steps);
            set_opt(&mut c, "c_hat", c_hat);
            c
        }
        Command::BernsteinWalsh {
            function,
            x,
            t,
            q,
            common,
        } => {
            let mut c = ExperimentConfig::new("bernstein-walsh", common.seed, common.out.clone());
            c.set("function", function.display())
                .set("x", x)
                .set("t", t)
                .set("q", q);
            c
        }
        Command::Sharpness {
            set,
            d,
            scales,
            c: c_log,
            common,
        } => {
            let mut c = ExperimentConfig::new("sharpness", common.seed, common.out.clone());
            c.set("set", set.display()).set("scales", scales);
            set_opt(&mut c, "d", d);
            set_opt(&mut c, "c", c_log);
            c
        }
        Command::MdimCartan {
            map,
            h,
            d,
            grid_count,
            mass_override,
            common,
        } => {
            let mut c = ExperimentConfig::new("mdim-cartan", common.seed, common.out.clone());
            c.set("map", map).set("h", h).set("d", d);
            set_opt(&mut c, "grid_count", grid_count);
            set_opt(&mut c, "mass_override", mass_override);
            c
        }
        Command::Envelope {
            map,
            grid_count,
            common,
        } => {
            let mut c = ExperimentConfig::new("envelope", common.seed, common.out.clone());
            c.set("map", map);
            set_opt(&mut c, "grid_count", grid_count);
            c
        }
        Command::Ellipticity {
            map,
            zero_index,
            directions,
            t0,
            common,
        } => {
            let mut c = ExperimentConfig::new("ellipticity", common.seed, common.out.clone());
            c.set("map", map);
            set_opt(&mut c, "zero_index", zero_index);
            set_opt(&mut c, "directions", directions);
            set_opt(&mut c, "t0", t0);
            c
        }
        Command::Mcol1 {
            map,
            set,
            x,
            t,
            r,
            omega_radius,
            common,
        } => {
            let mut c = ExperimentConfig::new("mcol1", common.seed, common.out.clone());
            c.set("map", map)
                .set("set", set.display())
                .set("x", x)
                .set("t", t)
                .set("r", r);
            set_opt(&mut c, "omega_radius", omega_radius);
            c
        }
        Command::Run { .. } | Command::Batch { .. } => unreachable!("handled in main"),
    };
    Ok(c)
}

fn report_manifest(m: cartan_lab::runner::RunManifest) {
    println!(
        "{}: {} ({:.1} ms){}",
        m.kind,
        if m.passed { "ok" } else { "FAILED" },
        m.wall_clock_ms,
        if m.outputs.is_empty() {
            String::new()
        } else {
            format!(
                " -> {}",
                m.outputs
                    .iter()
                    .map(|p| p.display().to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        }
    );
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<(), RunError> = match &cli.command {
        Command::Run { config } => {
            ExperimentConfig::parse_file(config).and_then(|c| run(&c).map(report_manifest))
        }
        Command::Batch { configs } => {
            if configs.is_empty() {
                Err(RunError::Schema("batch needs at least one config".into()))
            } else {
                configs
                    .iter()
                    .map(|p| ExperimentConfig::parse_file(p))
                    .collect::<Result<Vec<_>, _>>()
                    .and_then(|cs| batch(&cs))
                    .and_then(|agg| {
                        for m in &agg.runs {
                            report_manifest(m.clone());
                        }
                        if agg.passed {
                            Ok(())
                        } else {
                            Err(RunError::Invariant(
                                agg.runs.iter().flat_map(|m| m.failures.clone()).collect(),
                            ))
                        }
                    })
            }
        }
        other => build_config(other).and_then(|c| run(&c).map(report_manifest)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cartan-lab: {e}");
            if let RunError::Invariant(list) = &e {
                for v in list {
                    eprintln!("  violation: {v}");
                }
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
