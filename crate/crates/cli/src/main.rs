use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qq::commands::{self, Emit, Format, Orientations, Output, Route, SweepSpec};
use qq::config::QuiverConfig;
use qq::error::{CliError, CliResult};
use qq_core::qchar::Target;
use qq_core::quiver::DynkinType;
use qq_core::{Context, ZVertex};

/// Hammock functions, mapping cones and truncated q-characters for Dynkin quivers.
#[derive(Parser)]
#[command(name = "qq", version)]
struct Cli {
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct QuiverArg {
    /// Quiver config: a JSON file path or inline JSON.
    #[arg(long)]
    quiver: String,
}

impl QuiverArg {
    fn context(&self) -> CliResult<Context> {
        QuiverConfig::load(&self.quiver)?.context()
    }
}

#[derive(Subcommand)]
enum Command {
    /// Positive roots with their dominant monomials.
    Roots {
        #[command(flatten)]
        q: QuiverArg,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
    },
    /// Values of a hammock function on a window of ZQ.
    Hammock {
        #[command(flatten)]
        q: QuiverArg,
        /// Vertex `i,p` of ZQ.
        #[arg(long)]
        vertex: String,
        /// Inclusive p-range `p_min:p_max`.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
    },
    /// The complex attached to a root.
    Complex {
        #[command(flatten)]
        q: QuiverArg,
        /// `a1,...,an`, or `-i` for a negative simple root.
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, value_enum, default_value = "terms")]
        emit: Emit,
        /// Keep the f variables in the Euler characteristic.
        #[arg(long)]
        keep_f: bool,
    },
    /// Truncated q-character along one or all routes.
    Qchar {
        #[command(flatten)]
        q: QuiverArg,
        /// `a1,...,an`, or `-i` for a negative simple root.
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, value_enum, default_value = "all")]
        route: Route,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Cluster variables of the finite-type cluster algebra.
    Cluster {
        #[command(flatten)]
        q: QuiverArg,
        /// List every cluster variable keyed by denominator vector.
        #[arg(long)]
        list: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Sweep the route comparison over many quivers.
    Verify {
        /// Comma separated Dynkin types.
        #[arg(long, default_value = "A,D")]
        types: String,
        #[arg(long, default_value_t = 4)]
        max_rank: usize,
        /// `all` or `random:k`.
        #[arg(long, default_value = "all")]
        orientations: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, hide = true)]
        inject_bad_nu: bool,
    },
    /// DOT drawing of a window of ZQ.
    ArView {
        #[command(flatten)]
        q: QuiverArg,
        /// Inclusive p-range `p_min:p_max`.
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        /// Overlay the hammock function of this vertex.
        #[arg(long)]
        vertex: Option<String>,
    },
}

fn parse_window(s: &str) -> CliResult<(i32, i32)> {
    let (a, b) = s.split_once(':').ok_or_else(|| CliError::Input(format!("window {s:?}: expected p_min:p_max")))?;
    let parse = |t: &str| t.trim().parse::<i32>().map_err(|_| CliError::Input(format!("window {s:?}")));
    Ok((parse(a)?, parse(b)?))
}

fn parse_vertex(s: &str) -> CliResult<ZVertex> {
    Ok(s.parse()?)
}

fn run(command: Command) -> CliResult<Output> {
    match command {
        Command::Roots { q, format } => commands::roots(&q.context()?, format),
        Command::Hammock { q, vertex, window, format } => {
            let ctx = q.context()?;
            let x = parse_vertex(&vertex)?;
            let w = match window {
                Some(w) => parse_window(&w)?,
                None => commands::default_window(&ctx, x),
            };
            commands::hammock(&ctx, x, w, format)
        }
        Command::Complex { q, beta, emit, keep_f } => {
            let t: Target = beta.parse()?;
            commands::complex(&q.context()?, &t, emit, keep_f)
        }
        Command::Qchar { q, beta, route, format } => {
            let t: Target = beta.parse()?;
            commands::qchar(&q.context()?, &t, route, format)
        }
        Command::Cluster { q, list, format } => {
            if !list {
                return Err(CliError::Input("cluster needs --list".into()));
            }
            commands::cluster_list(&q.context()?, format)
        }
        Command::Verify { types, max_rank, orientations, seed, inject_bad_nu } => {
            let types = types.split(',').map(|t| t.parse::<DynkinType>()).collect::<Result<Vec<_>, _>>()?;
            let orientations: Orientations = orientations.parse()?;
            commands::verify(&SweepSpec { types, max_rank, orientations, seed, inject_bad_nu })
        }
        Command::ArView { q, window, vertex } => {
            let overlay = vertex.as_deref().map(parse_vertex).transpose()?;
            commands::ar_view(&q.context()?, parse_window(&window)?, overlay)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli.command).and_then(|out| {
        match &cli.out {
            Some(path) => std::fs::write(path, &out.body)?,
            None => print!("{}", out.body),
        }
        Ok(out.passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
