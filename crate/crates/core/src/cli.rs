//! `qp-recur` command-line front end.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage or parse error,
//! 3 internal (self-check) error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::analytic::{exp_p, exp_term_count, log_p, log_term_count};
use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicNumber, Valuation};
use crate::recursion::{
    backward_evaluate, check_case1, residual, solve_stationary, solve_with_tails, steps_for_digits,
    verify_contraction_chain, ProblemSpec,
};

#[derive(Debug, Parser)]
#[command(name = "qp-recur", version, about = "p-adic arithmetic and recursion solver")]
struct Cli {
    /// Emit the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ContextArgs {
    /// Odd prime.
    #[arg(long)]
    p: u32,
    /// Absolute working precision N (values are known mod p^N).
    #[arg(long)]
    prec: Option<u32>,
}

impl ContextArgs {
    fn context(&self, default_precision: u32) -> Result<PadicContext> {
        PadicContext::new(self.p, self.prec.unwrap_or(default_precision))
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Read a value (`num/den` or canonical form), optionally combine it with a second one.
    Eval {
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long)]
        x: String,
        #[arg(long, requires = "y")]
        op: Option<Op>,
        #[arg(long, requires = "op")]
        y: Option<String>,
    },
    /// p-adic exponential, v(x) >= 1.
    Exp {
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long)]
        x: String,
    },
    /// p-adic logarithm, v(x - 1) >= 1.
    Log {
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long)]
        x: String,
    },
    /// h_n modulo p^k for a problem file.
    Solve {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 1)]
        n: u64,
        #[arg(long)]
        k: i64,
        /// Primary tail `u1,u2` (default `1,1`).
        #[arg(long)]
        tail: Option<String>,
    },
    /// Fixed point of ((a u + b)/(c + u))^2 for constant parameters.
    Stationary {
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        k: i64,
    },
    /// Whether a_k + b_k = c_k + 1 for every k.
    #[command(name = "check-case1")]
    CheckCase1 {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        horizon: Option<u64>,
    },
    /// Per-index defect of a window h_n, h_{n+1}, ... (repeat --h).
    Residual {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 1)]
        n: u64,
        #[arg(long = "h", required = true)]
        h: Vec<String>,
    },
    /// Contraction-chain check between runs from the default tail and `--tail`.
    Verify {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 1)]
        n: u64,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        tail: Option<String>,
    },
}

enum Field {
    Number(PadicNumber),
    Numbers(Vec<PadicNumber>),
    Valuation(Valuation),
    Valuations(Vec<Valuation>),
    Int(i64),
    Bool(bool),
}

impl Field {
    fn text(&self) -> String {
        fn list<T: ToString>(items: &[T]) -> String {
            let parts: Vec<String> = items.iter().map(ToString::to_string).collect();
            format!("[{}]", parts.join(", "))
        }
        match self {
            Field::Number(x) => x.format(),
            Field::Numbers(xs) => list(xs),
            Field::Valuation(v) => v.to_string(),
            Field::Valuations(vs) => list(vs),
            Field::Int(i) => i.to_string(),
            Field::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        fn number(x: &PadicNumber) -> Value {
            let j = x.to_json();
            json!({"text": x.format(), "valuation": j.valuation, "digits": j.digits, "prec": j.prec})
        }
        match self {
            Field::Number(x) => number(x),
            Field::Numbers(xs) => Value::Array(xs.iter().map(number).collect()),
            Field::Valuation(v) => serde_json::to_value(v).expect("valuation serializes"),
            Field::Valuations(vs) => serde_json::to_value(vs).expect("valuation serializes"),
            Field::Int(i) => json!(i),
            Field::Bool(b) => json!(b),
        }
    }
}

struct Report {
    command: &'static str,
    ctx: PadicContext,
    result: Vec<(String, Field)>,
    certificate: Vec<(String, Field)>,
}

impl Report {
    fn new(command: &'static str, ctx: PadicContext) -> Self {
        Report { command, ctx, result: Vec::new(), certificate: Vec::new() }
    }

    fn result(mut self, name: impl Into<String>, field: Field) -> Self {
        self.result.push((name.into(), field));
        self
    }

    fn cert(mut self, name: impl Into<String>, field: Field) -> Self {
        self.certificate.push((name.into(), field));
        self
    }

    fn render_text(&self) -> String {
        let mut out =
            format!("command: {}\ncontext: p={} precision={}\n", self.command, self.ctx.p(), self.ctx.precision());
        for (name, field) in &self.result {
            out.push_str(&format!("{name} = {}\n", field.text()));
        }
        if !self.certificate.is_empty() {
            out.push_str("certificate:\n");
            for (name, field) in &self.certificate {
                out.push_str(&format!("  {name} = {}\n", field.text()));
            }
        }
        out
    }

    fn render_json(&self) -> String {
        let section = |fields: &[(String, Field)]| {
            Value::Object(fields.iter().map(|(k, f)| (k.clone(), f.json())).collect::<Map<_, _>>())
        };
        let doc = json!({
            "command": self.command,
            "context": {"p": self.ctx.p(), "precision": self.ctx.precision()},
            "result": section(&self.result),
            "certificate": section(&self.certificate),
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Split on commas that are not inside `[...]`.
fn split_top_level(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(text[start..].trim());
    parts
}

fn parse_tail(text: &str, ctx: PadicContext) -> Result<(PadicNumber, PadicNumber)> {
    match split_top_level(text).as_slice() {
        [a, b] => Ok((PadicNumber::parse_literal(a, ctx)?, PadicNumber::parse_literal(b, ctx)?)),
        _ => Err(Error::usage(format!("--tail expects two values `u1,u2`, got {text:?}"))),
    }
}

fn load_spec(path: &PathBuf) -> Result<ProblemSpec> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::usage(format!("cannot read {}: {e}", path.display())))?;
    ProblemSpec::from_json(&text)
}

fn default_check_tail(ctx: PadicContext) -> Result<PadicNumber> {
    exp_p(&PadicNumber::from_integer(ctx.p() as i128, ctx))
}

fn execute(command: Command) -> Result<Report> {
    Ok(match command {
        Command::Eval { ctx, x, op, y } => {
            let ctx = ctx.context(20)?;
            let x = PadicNumber::parse_literal(&x, ctx)?;
            let value = match (op, y) {
                (Some(op), Some(y)) => {
                    let y = PadicNumber::parse_literal(&y, ctx)?;
                    match op {
                        Op::Add => x.add(&y)?,
                        Op::Sub => x.sub(&y)?,
                        Op::Mul => x.mul(&y)?,
                        Op::Div => x.div(&y)?,
                    }
                }
                _ => x,
            };
            let abs = value.absolute_precision();
            let mut report = Report::new("eval", ctx)
                .result("value", Field::Number(value.clone()))
                .result("valuation", Field::Valuation(value.valuation()));
            if let Some(abs) = abs {
                report = report.result("absolute_precision", Field::Int(abs));
            }
            report
        }
        Command::Exp { ctx, x } => {
            let ctx = ctx.context(20)?;
            let x = PadicNumber::parse_literal(&x, ctx)?;
            let e = exp_p(&x)?;
            let terms = match x.valuation().finite() {
                Some(v) => exp_term_count(v, e.absolute_precision().unwrap_or(0), ctx.p()) as i64,
                None => 0,
            };
            let drop = e.sub(&PadicNumber::one(ctx))?.valuation();
            Report::new("exp", ctx)
                .result("x", Field::Number(x))
                .result("exp_p(x)", Field::Number(e))
                .cert("v(exp_p(x) - 1)", Field::Valuation(drop))
                .cert("terms", Field::Int(terms))
        }
        Command::Log { ctx, x } => {
            let ctx = ctx.context(20)?;
            let x = PadicNumber::parse_literal(&x, ctx)?;
            let l = log_p(&x)?;
            let y = x.sub(&PadicNumber::one(ctx))?;
            let terms = match y.valuation().finite() {
                Some(v) => log_term_count(v, y.absolute_precision().unwrap_or(0), ctx.p()) as i64,
                None => 0,
            };
            Report::new("log", ctx)
                .result("x", Field::Number(x))
                .result("log_p(x)", Field::Number(l.clone()))
                .cert("v(log_p(x))", Field::Valuation(l.valuation()))
                .cert("terms", Field::Int(terms))
        }
        Command::Solve { spec, n, k, tail } => {
            let spec = load_spec(&spec)?;
            let ctx = spec.context();
            let (t1, t2) = match tail {
                Some(t) => parse_tail(&t, ctx)?,
                None => (PadicNumber::one(ctx), PadicNumber::one(ctx)),
            };
            let check = default_check_tail(ctx)?;
            let r = solve_with_tails(&spec, n, k, (&t1, &t2), (&check, &check))?;
            let agreement = r.certificate.tail_agreement.as_ref().map_or(Valuation::Infinite, |a| a[0]);
            Report::new("solve", ctx)
                .result(format!("h_{n}"), Field::Number(r.h_start().truncate(k)))
                .result(format!("u_{n}"), Field::Number(r.u_start().truncate(k)))
                .cert("depth", Field::Int(r.depth as i64))
                .cert("guaranteed_digits", Field::Int(r.certificate.guaranteed_digits))
                .cert("tail_agreement", Field::Valuation(agreement))
                .cert("min_factor_gain", Field::Valuation(r.certificate.min_factor_gain()))
                .cert("factor_gains", Field::Valuations(r.certificate.factor_gains.clone()))
                .cert("min_residual", Field::Valuation(r.min_residual()))
        }
        Command::Stationary { ctx, alpha, beta, gamma, k } => {
            let ctx = ctx.context(k.max(1).min(u32::MAX as i64) as u32)?;
            let alpha = PadicNumber::parse_literal(&alpha, ctx)?;
            let beta = PadicNumber::parse_literal(&beta, ctx)?;
            let gamma = PadicNumber::parse_literal(&gamma, ctx)?;
            let fp = solve_stationary(&alpha, &beta, &gamma, k)?;
            Report::new("stationary", ctx)
                .result("zeta", Field::Number(fp.zeta.truncate(k)))
                .result("log_p(zeta)", Field::Number(log_p(&fp.zeta)?.truncate(k)))
                .result("residual", Field::Valuation(fp.residual))
                .cert("iterations", Field::Int(fp.iterations as i64))
                .cert("step_valuations", Field::Valuations(fp.step_valuations))
        }
        Command::CheckCase1 { spec, horizon } => {
            let spec = load_spec(&spec)?;
            let horizon = horizon.unwrap_or((spec.preamble_len() + spec.period_len()) as u64);
            let holds = check_case1(&spec, horizon)?;
            Report::new("check-case1", spec.context())
                .result("case1", Field::Bool(holds))
                .result("horizon", Field::Int(horizon as i64))
        }
        Command::Residual { spec, n, h } => {
            let spec = load_spec(&spec)?;
            let ctx = spec.context();
            let window = h.iter().map(|s| PadicNumber::parse_literal(s, ctx)).collect::<Result<Vec<_>>>()?;
            let r = residual(&spec, &window, n)?;
            let satisfied = r.iter().all(|v| v.is_at_least(ctx.precision() as i64));
            Report::new("residual", ctx)
                .result("residual_valuations", Field::Valuations(r))
                .result("satisfied", Field::Bool(satisfied))
        }
        Command::Verify { spec, n, k, tail } => {
            let spec = load_spec(&spec)?;
            let ctx = spec.context();
            let precision = ctx.precision() as i64;
            if k < 1 || k > precision {
                return Err(Error::usage(format!("--k must lie in 1..={precision}")));
            }
            let (t1, t2) = match tail {
                Some(t) => parse_tail(&t, ctx)?,
                None => {
                    let t = default_check_tail(ctx)?;
                    (t.clone(), t)
                }
            };
            let one = PadicNumber::one(ctx);
            let depth = steps_for_digits(k);
            let a = backward_evaluate(&spec, n, depth, (&one, &one))?;
            let b = backward_evaluate(&spec, n, depth, (&t1, &t2))?;
            let chain = verify_contraction_chain(&spec, &a.h_values, &b.h_values, n)?;
            let differences = chain.steps.iter().map(|s| s.difference).collect();
            Report::new("verify", ctx)
                .result("all_hold", Field::Bool(chain.all_hold))
                .result("min_gain", Field::Int(chain.min_gain.unwrap_or(0)))
                .result(format!("h_{n}"), Field::Numbers(vec![a.h_start().clone(), b.h_start().clone()]))
                .cert("depth", Field::Int(depth as i64))
                .cert("differences", Field::Valuations(differences))
        }
    })
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Domain(_) => 1,
        Error::Usage(_) | Error::Parse(_) => 2,
        Error::Internal(_) => 3,
    }
}

/// Run the CLI on `argv` (including the program name), writing the report to
/// `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let json = cli.json;
    match execute(cli.command) {
        Ok(report) => {
            let text = if json { report.render_json() } else { report.render_text() };
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
