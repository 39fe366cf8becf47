use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pencil_core::analysis::{analyze, run_corpus, Options, Status, DEFAULT_SEED};
use pencil_core::decomp::{decompose, express_in_f, is_composite, Decomposed, RETRY_BUDGET};
use pencil_core::ratfunc::{algebraically_dependent, jacobian_derivation, RationalFunction};
use pencil_core::spectrum::{analyze_spectrum, Rho};
use pencil_core::{parse::parse, Error};
use serde_json::{json, Value};

/// Spectra, reducibility orders and decompositions of rational functions
/// over Q.
#[derive(Parser)]
#[command(name = "pencil-lab", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Comma-separated variable names in graded-lex order.
    #[arg(long, global = true, default_value = "x,y", value_delimiter = ',')]
    vars: Vec<String>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "PENCIL_LAB_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Refuse inputs of higher degree.
    #[arg(long, global = true, default_value_t = 8)]
    max_degree: usize,
    /// Fibers tried while extracting a decomposition.
    #[arg(long, global = true, default_value_t = RETRY_BUDGET)]
    retry_budget: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Full report: spectrum, rho, bounds and decomposition.
    Analyze { f: String },
    /// Spectrum with per-fiber component counts.
    Spectrum { f: String },
    /// Order of reducibility.
    Rho { f: String },
    /// Whether f = r∘g with deg r >= 2.
    Composite { f: String },
    /// Find r and g with f = r∘g.
    Decompose { f: String },
    /// The Jacobian derivation D_f(g) = f_x g_y - f_y g_x.
    Jacobian { f: String, g: String },
    /// Whether f and g are algebraically dependent.
    Depend { f: String, g: String },
    /// Write g as s∘f.
    Express { g: String, f: String },
    /// Corpus operations.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    /// Run every entry of a JSON Lines corpus and check its expectations.
    Run { file: String },
}

enum Failure {
    Input(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_)
            | Error::ExtractionFailed(_)
            | Error::SliceDegenerate(_)
            | Error::Arith(_) => Failure::Other(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

struct Output {
    json: Value,
    text: String,
    gate_failed: bool,
}

impl Output {
    fn plain(json: Value, text: String) -> Self {
        Output {
            json,
            text,
            gate_failed: false,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    match run(&cli.command, g) {
        Ok(out) => {
            if g.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("json"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(if out.gate_failed { 3 } else { 0 })
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(command: &Command, g: &Global) -> Result<Output, Failure> {
    let options = Options {
        seed: g.seed,
        retry_budget: g.retry_budget,
        max_degree: g.max_degree,
    };
    let read = |text: &str| -> Result<RationalFunction, Failure> {
        let f = parse(text, &g.vars)?;
        options.check_degree(&f)?;
        Ok(f)
    };
    let show = |f: &RationalFunction| f.to_string_with(&g.vars);
    Ok(match command {
        Command::Analyze { f } => {
            let a = analyze(&read(f)?, &g.vars, &options)?;
            Output {
                json: a.to_json(),
                text: a.to_text(),
                gate_failed: a.bound_failed(),
            }
        }
        Command::Spectrum { f } => {
            let r = analyze_spectrum(&read(f)?, g.seed)?;
            let mut text = String::new();
            if r.composite {
                text += "composite: every fiber is reducible\n";
            }
            for e in &r.entries {
                text += &format!(
                    "{:<16} n = {} (conjugacy {})\n",
                    e.location(),
                    e.n,
                    e.conjugacy()
                );
            }
            let json = json!({"entries": r.entries, "composite": r.composite, "seed": r.seed, "confidence": r.confidence});
            Output {
                json,
                text,
                gate_failed: false,
            }
        }
        Command::Rho { f } => {
            let r = analyze_spectrum(&read(f)?, g.seed)?;
            let json =
                json!({"rho": r.rho, "degree": r.degree, "bounds": r.bounds, "seed": r.seed});
            let text = format!("{}\n", r.rho);
            Output {
                json,
                text,
                gate_failed: r.bounds.any_failed(),
            }
        }
        Command::Composite { f } => {
            let c = is_composite(&read(f)?, g.seed)?;
            Output::plain(json!({"composite": c, "seed": g.seed}), format!("{c}\n"))
        }
        Command::Decompose { f } => {
            let f = read(f)?;
            match decompose(&f, g.seed, g.retry_budget)? {
                Decomposed::Composite(d) => {
                    let text = format!(
                        "outer: {}\ninner: {}\n",
                        d.outer,
                        d.inner.to_string_with(&g.vars)
                    );
                    Output::plain(d.to_json(&g.vars), text)
                }
                Decomposed::NotComposite => {
                    Output::plain(json!({"composite": false}), "not composite\n".into())
                }
            }
        }
        Command::Jacobian { f, g: h } => {
            let d = jacobian_derivation(&read(f)?, &read(h)?)?;
            Output::plain(
                json!({"derivation": show(&d), "zero": d.is_zero()}),
                format!("{}\n", show(&d)),
            )
        }
        Command::Depend { f, g: h } => {
            let dep = algebraically_dependent(&read(f)?, &read(h)?)?;
            Output::plain(json!({"dependent": dep}), format!("{dep}\n"))
        }
        Command::Express { g: h, f } => match express_in_f(&read(h)?, &read(f)?, g.seed)? {
            Some(s) => Output::plain(
                json!({"in_kf": true, "s": s.to_string()}),
                format!("s = {s}\n"),
            ),
            None => Output::plain(json!({"in_kf": false}), "not in Q(f)\n".into()),
        },
        Command::Corpus {
            action: CorpusAction::Run { file },
        } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| Failure::Input(format!("{file}: {e}")))?;
            let outcomes = run_corpus(&text, &options);
            let mut table = String::new();
            let mut failed = false;
            let mut errored = false;
            for o in &outcomes {
                let (status, detail) = match &o.status {
                    Status::Pass => ("pass", String::new()),
                    Status::Fail(why) => {
                        failed = true;
                        ("FAIL", why.join("; "))
                    }
                    Status::Error(e) => {
                        errored = true;
                        ("ERROR", e.clone())
                    }
                };
                let rho = o
                    .analysis
                    .as_ref()
                    .map_or("-".to_string(), |a| match a.spectrum.rho {
                        Rho::Finite(r) => r.to_string(),
                        Rho::Infinite => "inf".into(),
                    });
                table += &format!(
                    "{:>4}  {:<28} {:<6} rho={:<5} {}\n",
                    o.line, o.name, status, rho, detail
                );
            }
            let passed = outcomes.iter().filter(|o| o.status == Status::Pass).count();
            table += &format!("{passed}/{} entries passed\n", outcomes.len());
            let json = json!({
                "seed": g.seed,
                "entries": outcomes.iter().map(|o| o.to_json()).collect::<Vec<_>>(),
            });
            if errored && !failed {
                if g.json {
                    println!("{}", serde_json::to_string_pretty(&json).expect("json"));
                } else {
                    print!("{table}");
                }
                return Err(Failure::Input(
                    "some corpus entries could not be processed".into(),
                ));
            }
            Output {
                json,
                text: table,
                gate_failed: failed,
            }
        }
    })
}
