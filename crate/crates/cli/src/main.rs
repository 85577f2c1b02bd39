use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use simlab_cli::commands::{self, TermArgs};
use simlab_cli::{CliError, Output, Workspace};
use simlab_core::kernel::DEFAULT_CAP;
use simlab_core::Budget;

/// Interaction systems, simulations and the differential lambda-calculus.
///
/// Exit codes: 0 holds, 1 fails, 2 budget exhausted, 3 usage error.
#[derive(Parser)]
#[command(name = "simlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    budget: BudgetArgs,

    /// Workspace file holding loaded and built objects.
    #[arg(long, global = true, default_value = simlab_cli::workspace::DEFAULT_PATH)]
    ws: PathBuf,
}

#[derive(Args)]
struct BudgetArgs {
    /// Largest bag (multiset) size enumerated.
    #[arg(long, global = true, default_value_t = 3)]
    bag: usize,
    /// Largest tree depth of reflexive states.
    #[arg(long, global = true, default_value_t = 3)]
    depth: usize,
    /// Cap on the number of actions enumerated at one state.
    #[arg(long, global = true, env = "SIMLAB_CAP", default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Reduction steps allowed.
    #[arg(long, global = true, default_value_t = 10_000)]
    fuel: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Load object documents (JSON) into the workspace.
    Load {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Name a connective expression: `build <name> = <expr>`.
    Build {
        #[arg(required = true, num_args = 1.., allow_hyphen_values = true)]
        words: Vec<String>,
    },
    /// List the workspace objects.
    List,
    /// Print a finite system as a JSON document.
    Export { system: String },
    /// Run a check: sim | iso | refine <relation> <w1> <w2>, safety <states> <w>, soundness <term>.
    Check {
        kind: String,
        args: Vec<String>,
        #[command(flatten)]
        term: TermFlags,
    },
    /// Evaluate a term: reduce | interp | interp-untyped.
    Eval {
        mode: String,
        term: String,
        #[command(flatten)]
        flags: TermFlags,
        /// Base system of the reflexive object (interp-untyped).
        #[arg(long, default_value = "I")]
        base: String,
    },
    /// Run an acceptance suite by number or name, or `all`.
    Laws {
        #[arg(default_value = "all")]
        suite: String,
    },
}

#[derive(Args)]
struct TermFlags {
    /// Typing context, e.g. "y : a, f : a -> a" (inferred when omitted).
    #[arg(long)]
    ctx: Option<String>,
    /// Type to interpret the term at.
    #[arg(long = "type")]
    ty: Option<String>,
    /// Valuation: a workspace name, a file, or inline "a=flip;b=stack1".
    #[arg(long)]
    val: Option<String>,
}

impl TermFlags {
    fn as_args(&self) -> TermArgs<'_> {
        TermArgs {
            ctx: self.ctx.as_deref(),
            ty: self.ty.as_deref(),
            val: self.val.as_deref(),
        }
    }
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let b = &cli.budget;
    let budget = Budget {
        bag: b.bag,
        depth: b.depth,
        cap: b.cap,
        fuel: b.fuel,
    };
    if let Command::Laws { suite } = &cli.command {
        return commands::run_laws(suite);
    }
    let mut ws = Workspace::open(&cli.ws, budget)?;
    match &cli.command {
        Command::Load { files } => commands::load(&mut ws, files),
        Command::Build { words } => commands::build(&mut ws, words),
        Command::List => commands::list(&ws),
        Command::Export { system } => commands::export(&ws, system),
        Command::Check { kind, args, term } => commands::check(&ws, kind, args, &term.as_args()),
        Command::Eval { mode, term, flags, base } => commands::eval(&ws, mode, term, &flags.as_args(), base),
        Command::Laws { .. } => unreachable!("handled above"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.text.as_bytes());
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
