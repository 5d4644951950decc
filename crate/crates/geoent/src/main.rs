//! Command-line front end: state evaluation, parameter sweeps, domain maps,
//! brute-force oracle runs, nearest-product-state output, and the
//! self-verification suite.

use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use geoent::analytic::{self, BranchEigenvalue};
use geoent::checks::{self, CheckConfig};
use geoent::oracle;
use geoent::qstate::{fmt_f64, named_state, NamedState, SymmetricState, UVPoint};
use geoent::solver;
use geoent::stationarity;
use geoent::sweep;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "geoent",
    about = "Geometric entanglement measure of symmetric three-qubit states",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct StateArgs {
    /// Amplitude of |000>
    #[arg(long)]
    g: Option<f64>,
    /// Common amplitude of |011>, |101>, |110>
    #[arg(long)]
    t: Option<f64>,
    /// Amplitude of |111>
    #[arg(long)]
    h: Option<f64>,
    /// Chart coordinate u (radians)
    #[arg(long)]
    u: Option<f64>,
    /// Chart coordinate v (radians)
    #[arg(long)]
    v: Option<f64>,
    /// Phase in radians
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    gamma: f64,
    /// Phase as a fraction of pi (overrides --gamma)
    #[arg(long, allow_negative_numbers = true)]
    gamma_pi: Option<f64>,
}

impl StateArgs {
    fn gamma(&self) -> f64 {
        self.gamma_pi.map(|f| f * PI).unwrap_or(self.gamma)
    }

    fn build(&self) -> Result<SymmetricState, String> {
        let gamma = self.gamma();
        match (self.g, self.t, self.h, self.u, self.v) {
            (Some(g), Some(t), Some(h), None, None) => {
                SymmetricState::from_params(g, t, h, gamma).map_err(|e| e.to_string())
            }
            (None, None, None, Some(u), Some(v)) => {
                let p = UVPoint::new(u, v).map_err(|e| e.to_string())?;
                SymmetricState::from_uv(p, gamma).map_err(|e| e.to_string())
            }
            _ => Err("supply either all of --g --t --h or both --u --v".into()),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate P_max, the geometric measure and all branch eigenvalues
    Eval {
        #[command(flatten)]
        state: StateArgs,
        /// Emit a JSON report
        #[arg(long)]
        json: bool,
    },
    /// Write a P_max sweep over the (u, v) square as CSV
    Sweep {
        /// Phase in radians
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        gamma: f64,
        /// Phase as a fraction of pi (overrides --gamma)
        #[arg(long, allow_negative_numbers = true)]
        gamma_pi: Option<f64>,
        /// Cells per axis
        #[arg(long, default_value_t = 200)]
        grid: usize,
        /// Output CSV path
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Count applicable domains on a grid (optionally writing the CSV too)
    Domains {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, allow_negative_numbers = true)]
        gamma_pi: Option<f64>,
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Brute-force product-state maximization, with the analytic value for
    /// comparison
    Oracle {
        #[command(flatten)]
        state: StateArgs,
        /// Independent random restarts
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        /// Convergence tolerance on the overlap gain
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// RNG seed
        #[arg(long, default_value_t = oracle::DEFAULT_SEED)]
        seed: u64,
        /// Replace the |110> amplitude to break full symmetry
        #[arg(long)]
        t3: Option<f64>,
    },
    /// Closed-form nearest product state of the zero-multiplier branch
    Nearest {
        #[command(flatten)]
        state: StateArgs,
    },
    /// Run the self-verification suite
    Verify {
        /// Override per-check sample counts
        #[arg(long)]
        samples: Option<usize>,
        /// RNG seed
        #[arg(long, default_value_t = oracle::DEFAULT_SEED)]
        seed: u64,
        /// Grid size for domain-count checks
        #[arg(long, default_value_t = 200)]
        grid: usize,
        /// Run only the named checks (repeatable)
        #[arg(long)]
        only: Vec<String>,
        /// List check names and exit
        #[arg(long)]
        list: bool,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("GEOENT_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not usage errors.
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };

    match cli.command {
        Command::Eval { state, json } => cmd_eval(&state, json),
        Command::Sweep {
            gamma,
            gamma_pi,
            grid,
            output,
        } => cmd_sweep(
            gamma_pi.map(|f| f * PI).unwrap_or(gamma),
            grid,
            Some(&output),
            false,
        ),
        Command::Domains {
            gamma,
            gamma_pi,
            grid,
            output,
        } => cmd_sweep(
            gamma_pi.map(|f| f * PI).unwrap_or(gamma),
            grid,
            output.as_deref(),
            true,
        ),
        Command::Oracle {
            state,
            restarts,
            tol,
            seed,
            t3,
        } => cmd_oracle(&state, restarts, tol, seed, t3),
        Command::Nearest { state } => cmd_nearest(&state),
        Command::Verify {
            samples,
            seed,
            grid,
            only,
            list,
        } => cmd_verify(samples, seed, grid, &only, list),
    }
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn branch_table(entries: &[BranchEigenvalue]) -> String {
    let mut out = String::from(
        "  branch  avail  mu_sq                   lambda                  theta        phi\n",
    );
    for e in entries {
        let fmt_opt = |x: Option<f64>| match x {
            Some(v) => format!("{v:<23.16e}"),
            None => format!("{:<23}", "-"),
        };
        let (theta, phi) = match e.direction {
            Some(d) => (format!("{:<12.6}", d.theta), format!("{:<12.6}", d.phi)),
            None => (format!("{:<12}", "-"), format!("{:<12}", "-")),
        };
        out.push_str(&format!(
            "  {:<7} {:<6} {} {} {} {}\n",
            e.branch.to_string(),
            if e.available { "yes" } else { "no" },
            fmt_opt(e.mu_sq),
            fmt_opt(e.lambda),
            theta,
            phi,
        ));
    }
    out
}

fn cmd_eval(state_args: &StateArgs, json: bool) -> ExitCode {
    let state = match state_args.build() {
        Ok(s) => s,
        Err(e) => return usage_error(&e),
    };
    let result = match solver::pmax_general(&state) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CHECK_FAILED);
        }
    };
    let report = match solver::solve_report(&state) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CHECK_FAILED);
        }
    };
    let uv = state.to_uv();
    let crit = result.criteria;

    let nearest = report
        .winner()
        .and_then(|w| oracle::triple_from_direction(&state, &w.direction));

    if json {
        let points: Vec<String> = report
            .points
            .iter()
            .map(|p| {
                format!(
                    "{{\"branch\":\"{}\",\"mu_sq\":{},\"lambda\":{},\"theta\":{},\"phi\":{}}}",
                    p.branch,
                    fmt_f64(p.mu_sq),
                    fmt_f64(p.lambda),
                    fmt_f64(p.direction.theta),
                    fmt_f64(p.direction.phi)
                )
            })
            .collect();
        let nearest_json = nearest
            .map(|t| {
                let q = |i: usize| {
                    let f = &t.factors[i];
                    format!(
                        "[{},{},{},{}]",
                        fmt_f64(f.a0.re),
                        fmt_f64(f.a0.im),
                        fmt_f64(f.a1.re),
                        fmt_f64(f.a1.im)
                    )
                };
                format!("[{},{},{}]", q(0), q(1), q(2))
            })
            .unwrap_or_else(|| "null".into());
        println!(
            "{{\"state\":{},\"u\":{},\"v\":{},\"p_max\":{},\"geometric_measure\":{},\"branch\":\"{}\",\"boundary\":{},\"criteria\":{{\"D1\":{},\"C1\":{},\"C2\":{},\"C3\":{},\"Cplus\":{}}},\"nearest_product\":{},\"points\":[{}]}}",
            state.to_json(),
            fmt_f64(uv.u()),
            fmt_f64(uv.v()),
            fmt_f64(result.p_max),
            fmt_f64(1.0 - result.p_max),
            result.branch,
            result.boundary,
            fmt_f64(crit.d1),
            fmt_f64(crit.c1),
            fmt_f64(crit.c2),
            fmt_f64(crit.c3),
            fmt_f64(crit.c_plus),
            nearest_json,
            points.join(",")
        );
        return ExitCode::SUCCESS;
    }

    println!(
        "state: g={} t={} h={} gamma={}",
        fmt_f64(state.g()),
        fmt_f64(state.t()),
        fmt_f64(state.h()),
        fmt_f64(state.gamma())
    );
    println!("chart: u={} v={}", fmt_f64(uv.u()), fmt_f64(uv.v()));
    println!("P_max = {}", fmt_f64(result.p_max));
    println!("G     = {}", fmt_f64(1.0 - result.p_max));
    println!(
        "branch = {}{}",
        result.branch,
        if result.boundary { " (boundary)" } else { "" }
    );
    println!(
        "criteria: D1={:.6e} C1={:.6e} C2={:.6e} C3={:.6e} C+={:.6e}",
        crit.d1, crit.c1, crit.c2, crit.c3, crit.c_plus
    );
    if let Some(t) = &nearest {
        println!("nearest product state |q q q'>:");
        for (i, q) in t.factors.iter().enumerate() {
            println!(
                "  q{} = ({:+.12}{:+.12}i)|0> + ({:+.12}{:+.12}i)|1>",
                i + 1,
                q.a0.re,
                q.a0.im,
                q.a1.re,
                q.a1.im
            );
        }
    }
    let ga = state.gamma().abs();
    if ga < 1e-12 {
        print!("{}", branch_table(&analytic::eigenvalues_gamma0(&state)));
    } else if (ga - PI / 2.0).abs() < 1e-12 {
        print!(
            "{}",
            branch_table(&analytic::eigenvalues_gamma_half(&state))
        );
    } else {
        println!("  stationary points (solver):");
        for p in &report.points {
            println!(
                "  {:<7} mu_sq={:.16e} lambda={:.16e} theta={:.6} phi={:.6}",
                p.branch.to_string(),
                p.mu_sq,
                p.lambda,
                p.direction.theta,
                p.direction.phi
            );
        }
        for r in &report.rejected {
            println!("  rejected root {}: {}", r.root, r.reason);
        }
    }
    ExitCode::SUCCESS
}

fn cmd_sweep(gamma: f64, grid: usize, output: Option<&std::path::Path>, domains: bool) -> ExitCode {
    if grid < 2 {
        return usage_error("--grid must be at least 2");
    }
    if !gamma.is_finite() {
        return usage_error("--gamma must be finite");
    }
    let records = match sweep::run_sweep(gamma, grid) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CHECK_FAILED);
        }
    };
    if let Some(path) = output {
        let file = match std::fs::File::create(path) {
            Ok(f) => f,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_IO);
            }
        };
        let mut w = std::io::BufWriter::new(file);
        if let Err(e) = sweep::write_csv(&records, &mut w).and_then(|_| w.flush()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_IO);
        }
        println!("wrote {} records to {}", records.len(), path.display());
    }
    if domains {
        match sweep::domain_map(gamma, grid) {
            Ok(map) => {
                println!("domains: {}", map.domain_count);
                println!(
                    "boundary cells: {} / {} ({:.4}%)",
                    map.boundary_cells,
                    grid * grid,
                    100.0 * map.boundary_cells as f64 / (grid * grid) as f64
                );
            }
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_CHECK_FAILED);
            }
        }
    }
    ExitCode::SUCCESS
}

fn cmd_oracle(
    state_args: &StateArgs,
    restarts: usize,
    tol: f64,
    seed: u64,
    t3: Option<f64>,
) -> ExitCode {
    if restarts == 0 {
        return usage_error("--restarts must be at least 1");
    }
    if !(tol > 0.0) {
        return usage_error("--tol must be positive");
    }
    let state = match state_args.build() {
        Ok(s) => s,
        Err(e) => return usage_error(&e),
    };
    println!("seed: {seed}");
    let psi = match t3 {
        None => state.state_vector().general(),
        Some(t3) => match named_state(NamedState::PartialSym {
            g: state.g(),
            t: state.t(),
            t3,
            h: state.h(),
            gamma: state.gamma(),
        }) {
            Ok(p) => p,
            Err(e) => return usage_error(&e.to_string()),
        },
    };
    let r = oracle::alternating_maximize_seeded(&psi, restarts, tol, seed);
    println!(
        "oracle P_max = {} ({} restarts, {} cycles)",
        fmt_f64(r.p_max),
        r.restarts_used,
        r.iterations
    );
    for (i, q) in r.triple.factors.iter().enumerate() {
        println!(
            "  q{} = ({:+.12}{:+.12}i)|0> + ({:+.12}{:+.12}i)|1>",
            i + 1,
            q.a0.re,
            q.a0.im,
            q.a1.re,
            q.a1.im
        );
    }
    if t3.is_none() {
        let grid = oracle::grid_maximize_symmetric(&state, 512);
        println!("grid oracle P_max = {}", fmt_f64(grid.p_max));
        match solver::pmax_general(&state) {
            Ok(a) => {
                println!(
                    "analytic P_max = {} (branch {})",
                    fmt_f64(a.p_max),
                    a.branch
                );
                println!("|oracle - analytic| = {:.3e}", (r.p_max - a.p_max).abs());
            }
            Err(e) => eprintln!("analytic pipeline failed: {e}"),
        }
    }
    ExitCode::SUCCESS
}

fn cmd_nearest(state_args: &StateArgs) -> ExitCode {
    let state = match state_args.build() {
        Ok(s) => s,
        Err(e) => return usage_error(&e),
    };
    let point = match stationarity::lambda_zero_branch(&state) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CHECK_FAILED);
        }
    };
    let pair = match stationarity::nearest_product_lambda_zero(&state) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CHECK_FAILED);
        }
    };
    println!("zero-multiplier branch:");
    println!("  mu0^2 = {}", fmt_f64(point.mu_sq));
    println!(
        "  direction: theta={} phi={}",
        fmt_f64(point.direction.theta),
        fmt_f64(point.direction.phi)
    );
    println!(
        "  q  = ({:+.12}{:+.12}i)|0> + ({:+.12}{:+.12}i)|1>",
        pair.q.a0.re, pair.q.a0.im, pair.q.a1.re, pair.q.a1.im
    );
    println!(
        "  q' = ({:+.12}{:+.12}i)|0> + ({:+.12}{:+.12}i)|1>",
        pair.q_prime.a0.re, pair.q_prime.a0.im, pair.q_prime.a1.re, pair.q_prime.a1.im
    );
    let mu0 = point.mu_sq.sqrt();
    let psi = state.state_vector().general();
    let v = oracle::contract_first_pair(&psi, &pair.q, &pair.q);
    let resid = ((v[0] - mu0 * pair.q_prime.a0).norm_sqr()
        + (v[1] - mu0 * pair.q_prime.a1).norm_sqr())
    .sqrt();
    println!("  reconstruction residual = {resid:.3e}");
    println!("  <q|q'> = {:.3e}", pair.q.inner(&pair.q_prime).norm());
    ExitCode::SUCCESS
}

fn cmd_verify(
    samples: Option<usize>,
    seed: u64,
    grid: usize,
    only: &[String],
    list: bool,
) -> ExitCode {
    if list {
        for id in checks::CHECK_IDS {
            println!("{id}");
        }
        return ExitCode::SUCCESS;
    }
    if samples == Some(0) {
        return usage_error("--samples must be at least 1");
    }
    if grid < 50 {
        return usage_error("--grid must be at least 50 for reliable domain counts");
    }
    for o in only {
        if !checks::CHECK_IDS.contains(&o.as_str()) {
            return usage_error(&format!(
                "unknown check '{o}' (use --list to see the names)"
            ));
        }
    }
    println!("seed: {seed}");
    let cfg = CheckConfig {
        samples,
        seed,
        grid,
    };
    let reports = checks::run_checks(only, &cfg);
    let mut all_pass = true;
    for r in &reports {
        println!(
            "{}  {:<28} tol {:<9.1e} worst {:<10.3e} {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.id,
            r.tolerance,
            r.worst,
            r.detail
        );
        all_pass &= r.pass;
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_CHECK_FAILED)
    }
}
