use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use qkbalance::algebra::{Checker, FactoredRational, DEFAULT_SEED};
use qkbalance::quot::{enumerate_fixed_points, tangent_weights, GrassFixedPoint};
use qkbalance::report::{Report, SCHEMA_VERSION};
use qkbalance::{bethe, gw, qdiff, suite};

#[derive(Parser)]
#[command(name = "qkbal", version, about = "Exact checks for balanced I-functions and vertex functions")]
struct Cli {
    /// Emit JSON instead of text tables.
    #[arg(long, global = true)]
    json: bool,
    /// Seed of the randomized inequality filter; never affects verdicts.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads. Falls back to QKBAL_JOBS, then to all cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Shape {
    #[arg(long)]
    r: usize,
    #[arg(long)]
    n: usize,
}

#[derive(Args, Clone)]
struct PointArgs {
    #[command(flatten)]
    shape: Shape,
    /// Fixed point of G(r,n) as 1-based coordinate indices, e.g. 1,3.
    #[arg(long, value_delimiter = ',', required = true)]
    point: Vec<usize>,
    /// Degree vector, one entry per index of the point.
    #[arg(long, value_delimiter = ',', required = true)]
    dvec: Vec<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// List torus-fixed points of the Quot scheme of degree d.
    Enumerate {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        zero_supported: bool,
    },
    /// Tangent weights at every fixed point of degree d.
    Weights {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        zero_supported: bool,
    },
    /// Localized I-function coefficient.
    Icoeff(PointArgs),
    /// Vertex coefficient of T*G(r,n).
    Vertex {
        #[command(flatten)]
        point: PointArgs,
        /// Keep the (-q^(1/2) hbar^(-1/2))^d and q^(nd/2) factors.
        #[arg(long)]
        unnormalized: bool,
    },
    /// B_y of the I-coefficient at y = -hbar/q, next to the vertex coefficient.
    Balance(PointArgs),
    VerifyMain {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        dmax: u32,
    },
    VerifyCross {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        dmax: u32,
    },
    VerifyDegenerations {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        dmax: u32,
    },
    VerifyOps {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trunc: u32,
    },
    VerifyAppendixB {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        trunc: u32,
    },
    VerifyBethe {
        #[command(flatten)]
        shape: Shape,
    },
    /// Every verification over the standard ranges.
    Suite,
}

enum Failure {
    Usage(String),
    Verification,
}

impl From<qkbalance::Error> for Failure {
    fn from(e: qkbalance::Error) -> Failure {
        Failure::Usage(e.to_string())
    }
}

fn check_shape(s: Shape) -> Result<(), Failure> {
    if s.r == 0 || s.r > s.n {
        return Err(Failure::Usage(format!("need 1 <= r <= n, got r={} n={}", s.r, s.n)));
    }
    Ok(())
}

fn grass_point(p: &PointArgs) -> Result<GrassFixedPoint, Failure> {
    check_shape(p.shape)?;
    if p.point.len() != p.shape.r || p.dvec.len() != p.shape.r {
        return Err(Failure::Usage(format!("--point and --dvec need {} entries each", p.shape.r)));
    }
    Ok(GrassFixedPoint::new(p.shape.n, p.shape.r, p.point.clone())?)
}

fn factored_json(f: &FactoredRational) -> Value {
    json!({ "factored": f, "expanded": f.expand() })
}

fn print_value(cli: &Cli, command: &str, value: Value, text: impl FnOnce() -> String) {
    if cli.json {
        let out = json!({ "schema_version": SCHEMA_VERSION, "command": command, "result": value });
        println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
    } else {
        print!("{}", text());
    }
}

fn print_report(cli: &Cli, rep: &Report) {
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&rep.body()).expect("serializable"));
        eprintln!("wall_time_ms: {}", rep.wall_time_ms);
        return;
    }
    println!("{}", rep.command);
    let width = rep.cases.iter().map(|c| c.id.len()).max().unwrap_or(0);
    for c in &rep.cases {
        let status = if c.passed() { "pass" } else { "FAIL" };
        match &c.detail {
            Some(d) => println!("  {status}  {:<width$}  {d}", c.id),
            None => println!("  {status}  {}", c.id),
        }
        if let Some(w) = &c.witness {
            println!("        lhs = {}", w.lhs_expanded);
            println!("        rhs = {}", w.rhs_expanded);
        }
    }
    let s = rep.summary;
    println!("{} passed, {} failed, {} total ({} ms)", s.passed, s.failed, s.total, rep.wall_time_ms);
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let checker = Checker::new(cli.seed);
    let start = Instant::now();
    let report = match &cli.command {
        Command::Enumerate { shape, d, zero_supported } => {
            check_shape(*shape)?;
            let pts = enumerate_fixed_points(shape.r, shape.n, *d, *zero_supported)?;
            let command = format!("enumerate --r {} --n {} --d {d}{}", shape.r, shape.n, zs(*zero_supported));
            print_value(cli, &command, json!(pts), || {
                let mut s = format!("{} points\n", pts.len());
                for p in &pts {
                    s.push_str(&format!("  delta={:?} a={:?} b={:?}\n", p.delta, p.a, p.b));
                }
                s
            });
            return Ok(());
        }
        Command::Weights { shape, d, zero_supported } => {
            check_shape(*shape)?;
            let pts = enumerate_fixed_points(shape.r, shape.n, *d, *zero_supported)?;
            let rows: Vec<_> = pts.iter().map(|p| (p, tangent_weights(p))).collect();
            let command = format!("weights --r {} --n {} --d {d}{}", shape.r, shape.n, zs(*zero_supported));
            let value = json!(rows
                .iter()
                .map(|(p, w)| json!({ "point": p, "weights": w, "dim": w.dim() }))
                .collect::<Vec<_>>());
            print_value(cli, &command, value, || {
                rows.iter()
                    .map(|(p, w)| format!("delta={:?} a={:?} b={:?} dim={}\n  {w}\n", p.delta, p.a, p.b, w.dim()))
                    .collect()
            });
            return Ok(());
        }
        Command::Icoeff(p) => {
            let g = grass_point(p)?;
            let f = gw::i_coefficient_direct(&g, &p.dvec)?;
            print_value(cli, &point_command("icoeff", p, ""), factored_json(&f), || format!("{f}\n"));
            return Ok(());
        }
        Command::Vertex { point, unnormalized } => {
            let g = grass_point(point)?;
            let f = gw::vertex_coefficient_psz(&g, &point.dvec, !unnormalized)?;
            let flag = if *unnormalized { " --unnormalized" } else { "" };
            print_value(cli, &point_command("vertex", point, flag), factored_json(&f), || format!("{f}\n"));
            return Ok(());
        }
        Command::Balance(p) => {
            let g = grass_point(p)?;
            let b = gw::balanced_specialized(&g, &p.dvec)?;
            let v = gw::vertex_coefficient_psz(&g, &p.dvec, true)?;
            let equal = checker.factored_equal(&b, &v);
            let value = json!({ "balanced": factored_json(&b), "vertex": factored_json(&v), "equal": equal });
            print_value(cli, &point_command("balance", p, ""), value, || {
                format!("balanced = {b}\nvertex   = {v}\nequal    = {equal}\n")
            });
            return if equal { Ok(()) } else { Err(Failure::Verification) };
        }
        Command::VerifyMain { shape, dmax } => {
            check_shape(*shape)?;
            gw::verify_main_theorem(shape.r, shape.n, *dmax, &checker)?
        }
        Command::VerifyCross { shape, dmax } => {
            check_shape(*shape)?;
            gw::verify_cross_paths(shape.r, shape.n, *dmax, &checker)?
        }
        Command::VerifyDegenerations { shape, dmax } => {
            check_shape(*shape)?;
            let mut rep = gw::verify_degenerations(shape.r, shape.n, *dmax, &checker)?;
            rep.absorb("abelian", bethe::verify_abelian_degenerations(shape.r, shape.n, *dmax, &checker)?);
            rep
        }
        Command::VerifyOps { n, trunc } => {
            if *n == 0 {
                return Err(Failure::Usage("need n >= 1".into()));
            }
            qdiff::verify_compatibility(*n, *trunc, &checker)?
        }
        Command::VerifyAppendixB { shape, trunc } => {
            check_shape(*shape)?;
            bethe::verify_appendix_b(shape.r, shape.n, *trunc, &checker)?
        }
        Command::VerifyBethe { shape } => {
            check_shape(*shape)?;
            bethe::bethe_correspondence(shape.r, shape.n, &checker)?
        }
        Command::Suite => suite::run_suite(&checker)?,
    };
    let mut report = report;
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    print_report(cli, &report);
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn zs(on: bool) -> &'static str {
    if on {
        " --zero-supported"
    } else {
        ""
    }
}

fn point_command(name: &str, p: &PointArgs, extra: &str) -> String {
    let join = |v: &[String]| v.join(",");
    format!(
        "{name} --r {} --n {} --point {} --dvec {}{extra}",
        p.shape.r,
        p.shape.n,
        join(&p.point.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
        join(&p.dvec.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let jobs = cli.jobs.or_else(|| std::env::var("QKBAL_JOBS").ok().and_then(|v| v.parse().ok()));
    if let Some(j) = jobs {
        if j == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global().expect("thread pool set once");
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
