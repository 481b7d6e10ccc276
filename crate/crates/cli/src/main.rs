use clap::{Parser, Subcommand, ValueEnum};
use jetvar_cli::model::max_order_from_env;
use jetvar_cli::{execute, Command, Failure, Format, LepageMethod, Node};
use std::io::Read;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "jetvar", version, about = "Variational calculus on jet spaces, in exact arithmetic")]
struct Cli {
    #[arg(long, value_enum, default_value_t = OutFormat::Text, global = true)]
    format: OutFormat,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Text,
    Json,
    Latex,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Theta,
    Delta,
}

#[derive(Subcommand)]
enum Cmd {
    /// Euler-Lagrange expressions of the model Lagrangian
    Euler { model: String },
    /// A Lepage equivalent of the Lagrangian form
    Lepage {
        #[arg(long, value_enum, default_value_t = Method::Theta)]
        method: Method,
        model: String,
    },
    /// Canonical split of an n-form (the Lagrangian form by default)
    Split {
        #[arg(long)]
        form: Option<String>,
        model: String,
    },
    /// Null-Lagrangian test, with a closed certificate when possible
    Nulltest { model: String },
    /// The null Lagrangian h(d eta) of a named (n-1)-form
    Makenull {
        #[arg(long)]
        form: String,
        model: String,
    },
    /// Noether equation for a named field
    Noether {
        #[arg(long)]
        field: String,
        model: String,
    },
    /// Invariance and generalized invariance for a named field
    Invariance {
        #[arg(long)]
        field: String,
        model: String,
    },
    /// Noether currents for a named field
    Current {
        #[arg(long)]
        field: String,
        model: String,
    },
    /// Euler expressions of L and of its Lie derivatives
    Symmetric {
        #[arg(long, value_delimiter = ',', required = true)]
        fields: Vec<String>,
        model: String,
    },
    /// General covariance conditions for the declared tensor type
    Covariance { model: String },
    /// Weak critical system for the declared tensor type
    Weakcritical { model: String },
    /// Euler-Lagrange residual along a named section
    Residual {
        #[arg(long)]
        section: String,
        model: String,
    },
    /// Discrete action gradient against the Euler expressions
    Gradcheck {
        #[arg(long)]
        section: String,
        #[arg(long, default_value_t = 100)]
        grid: usize,
        model: String,
    },
}

fn split(cmd: Cmd) -> (Command, String) {
    match cmd {
        Cmd::Euler { model } => (Command::Euler, model),
        Cmd::Lepage { method, model } => {
            let m = match method {
                Method::Theta => LepageMethod::Theta,
                Method::Delta => LepageMethod::Delta,
            };
            (Command::Lepage(m), model)
        }
        Cmd::Split { form, model } => (Command::Split { form }, model),
        Cmd::Nulltest { model } => (Command::NullTest, model),
        Cmd::Makenull { form, model } => (Command::MakeNull { form }, model),
        Cmd::Noether { field, model } => (Command::Noether { field }, model),
        Cmd::Invariance { field, model } => (Command::Invariance { field }, model),
        Cmd::Current { field, model } => (Command::Current { field }, model),
        Cmd::Symmetric { fields, model } => (Command::Symmetric { fields }, model),
        Cmd::Covariance { model } => (Command::Covariance, model),
        Cmd::Weakcritical { model } => (Command::WeakCritical, model),
        Cmd::Residual { section, model } => (Command::Residual { section }, model),
        Cmd::Gradcheck { section, grid, model } => (Command::GradCheck { section, grid }, model),
    }
}

fn read_model(path: &str) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if path == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?;
    Ok(text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format {
        OutFormat::Text => Format::Text,
        OutFormat::Json => Format::Json,
        OutFormat::Latex => Format::Latex,
    };
    let (cmd, path) = split(cli.command);
    let outcome = max_order_from_env().map_err(Failure::Usage).and_then(|cap| execute(&cmd, &read_model(&path)?, cap));
    match outcome {
        Ok(doc) => {
            print!("{}", doc.render(format));
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error[{}]: {f}", f.code());
            if matches!(format, Format::Json) {
                let body = Node::map([("code", Node::Str(f.code().into())), ("message", Node::Str(f.to_string()))]);
                let v = serde_json::json!({ "error": body.to_json() });
                println!("{}", serde_json::to_string_pretty(&v).expect("values serialize"));
            }
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
