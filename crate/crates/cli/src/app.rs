//! Command definitions and dispatch. [`run`] never touches the process
//! streams, so tests can drive it directly.

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use hahn_core::coefficients::FieldDescriptor;
use hahn_core::exponents::{GroupDescriptor, GroupElement};
use hahn_core::parallel::Exec;
use hahn_core::series::{support_up_to, Domain, Evaluator, Horizon, Series, SeriesError};
use hahn_core::supports::{
    check_all_conditions, check_condition, CheckBudget, Condition, SupportError, SupportSet,
};
use hahn_core::theorems::{classify_khull, run_suite, SuiteConfig, TheoremError};

use crate::descriptor::parse_family;
use crate::semantics::{build_series, parse_exponent_in, parse_field, parse_group, SemanticError};
use crate::syntax::{parse_expression, Expr};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

const DEFAULT_EXP_BOUND: i64 = 10;

#[derive(Debug, Parser)]
#[command(name = "hahn", version, about = "Exact generalised power series and k-hull checks")]
struct Cli {
    #[command(flatten)]
    session: SessionArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SessionArgs {
    /// Exponent group: Z, Q, Z^n or trivial.
    #[arg(long, global = true, default_value = "Z", value_parser = group_arg)]
    group: GroupDescriptor,
    /// Coefficient field: Q, Fp or Fp(x) for a prime p.
    #[arg(long, global = true, default_value = "Q", value_parser = field_arg)]
    field: FieldDescriptor,
    /// Largest exponent to expand to (an element of the group).
    #[arg(long, global = true, allow_hyphen_values = true)]
    exp_bound: Option<String>,
    /// Maximal number of terms computed per node.
    #[arg(long, global = true, default_value_t = 10_000)]
    term_bound: usize,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Expand an expression up to the exponent bound.
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Expand the inverse of an expression.
    Invert {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Valuation of the expression, which skips the search for it.
        #[arg(long, allow_hyphen_values = true)]
        g0: Option<String>,
    },
    /// List the support of an expression up to the exponent bound.
    Support {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Print the smallest exponent with a nonzero coefficient.
    Vmin {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Expand the truncation of an expression below `at`.
    Trunc {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(allow_hyphen_values = true)]
        at: String,
    },
    /// Check closure conditions on a family of supports.
    CheckFamily {
        family: String,
        /// S1..S6, A1..A5 or all.
        #[arg(long, default_value = "all")]
        condition: String,
    },
    /// Classify the k-hull of a family.
    Classify {
        #[arg(long)]
        family: String,
    },
    /// Run the verification procedures with default parameters.
    Suite {
        /// Only procedures whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
    },
}

fn group_arg(s: &str) -> Result<GroupDescriptor, String> {
    parse_group(s).map_err(|e| e.to_string())
}

fn field_arg(s: &str) -> Result<FieldDescriptor, String> {
    parse_field(s).map_err(|e| e.to_string())
}

/// Exit code with the text destined for stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn error(code: i32, message: impl std::fmt::Display) -> Self {
        Outcome { code, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

/// A failed command together with its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

fn series_code(e: &SeriesError) -> i32 {
    match e {
        SeriesError::TermBudgetExceeded { .. } | SeriesError::ZeroUpToHorizon { .. } => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

impl From<SeriesError> for Failure {
    fn from(e: SeriesError) -> Self {
        Failure { code: series_code(&e), message: e.to_string() }
    }
}

impl From<SemanticError> for Failure {
    fn from(e: SemanticError) -> Self {
        let code = match &e {
            SemanticError::Series(s) => series_code(s),
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<SupportError> for Failure {
    fn from(e: SupportError) -> Self {
        let code = match &e {
            SupportError::Series(s) => series_code(s),
            SupportError::TermBudgetExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<TheoremError> for Failure {
    fn from(e: TheoremError) -> Self {
        let code = match &e {
            TheoremError::Series(s) => series_code(s),
            TheoremError::Support(s) => Failure::from(s.clone()).code,
            TheoremError::SearchBudget(_) => EXIT_BUDGET,
            TheoremError::InvalidParameter(_) => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome::ok(text),
                _ => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text },
            };
        }
    };
    let session = Session::new(cli.session);
    match session.dispatch(cli.command) {
        Ok(outcome) => outcome,
        Err(f) => Outcome::error(f.code, f.message),
    }
}

struct Session {
    args: SessionArgs,
    domain: Domain,
}

impl Session {
    fn new(args: SessionArgs) -> Self {
        let domain = Domain::new(args.group, args.field);
        Session { args, domain }
    }

    fn exp_bound(&self) -> Result<GroupElement, Failure> {
        match &self.args.exp_bound {
            Some(s) => Ok(parse_exponent_in(s, self.domain.group)?),
            None => Ok(self.domain.group.multiple_of_unit(DEFAULT_EXP_BOUND)),
        }
    }

    fn horizon(&self) -> Result<Horizon, Failure> {
        Ok(Horizon::new(self.exp_bound()?, self.args.term_bound)?)
    }

    fn evaluator(&self) -> Result<Evaluator, Failure> {
        Ok(Evaluator::new(self.domain, self.horizon()?)?)
    }

    /// Parses an expression, insisting on an explicit bound when some
    /// inverse has to search for its valuation.
    fn expression(&self, src: &str) -> Result<Expr, Failure> {
        let e = parse_expression(src).map_err(SemanticError::from)?;
        self.require_bound_for(&e)?;
        Ok(e)
    }

    fn require_bound_for(&self, e: &Expr) -> Result<(), Failure> {
        if e.has_unwitnessed_inverse() && self.args.exp_bound.is_none() {
            return Err(Failure::usage("--exp-bound is required when inv(..) is used without a g0 witness"));
        }
        Ok(())
    }

    fn series(&self, e: &Expr) -> Result<Series, Failure> {
        Ok(build_series(e, self.domain)?)
    }

    fn header(&self, command: &str) -> serde_json::Map<String, Value> {
        let mut m = serde_json::Map::new();
        m.insert("command".into(), json!(command));
        m.insert("group".into(), json!(self.domain.group.to_string()));
        m.insert("field".into(), json!(self.domain.field.to_string()));
        m
    }

    fn render(&self, text: String, json: Value) -> String {
        if self.args.json {
            let mut s = serde_json::to_string_pretty(&json).expect("JSON values serialize");
            s.push('\n');
            s
        } else {
            text
        }
    }

    fn dispatch(&self, command: Command) -> Result<Outcome, Failure> {
        match command {
            Command::Eval { expr } => {
                let e = self.expression(&expr)?;
                self.expand("eval", &expr, &self.series(&e)?)
            }
            Command::Invert { expr, g0 } => {
                let e = parse_expression(&expr).map_err(SemanticError::from)?;
                let e = Expr::Inv {
                    child: Box::new(e),
                    witness: g0
                        .map(|w| crate::syntax::parse_exponent(&w))
                        .transpose()
                        .map_err(SemanticError::from)?,
                };
                self.require_bound_for(&e)?;
                self.expand("invert", &expr, &self.series(&e)?)
            }
            Command::Trunc { expr, at } => {
                let e = self.expression(&expr)?;
                let at_lit = crate::syntax::parse_exponent(&at).map_err(SemanticError::from)?;
                let e = Expr::Trunc { child: Box::new(e), at: at_lit, inclusive: false };
                self.expand("trunc", &expr, &self.series(&e)?)
            }
            Command::Support { expr } => {
                let s = self.series(&self.expression(&expr)?)?;
                let h = self.horizon()?;
                let support = support_up_to(&s, &h)?;
                let set = SupportSet::finite(support.iter().cloned());
                let mut j = self.header("support");
                j.insert("expression".into(), json!(expr));
                j.insert("exp_bound".into(), json!(h.exp_bound.to_string()));
                j.insert(
                    "support".into(),
                    Value::Array(support.iter().map(|g| json!(g.to_string())).collect()),
                );
                Ok(Outcome::ok(self.render(format!("{set}\n"), Value::Object(j))))
            }
            Command::Vmin { expr } => {
                let s = self.series(&self.expression(&expr)?)?;
                let v = self.evaluator()?.vmin(&s)?;
                let mut j = self.header("vmin");
                j.insert("expression".into(), json!(expr));
                j.insert("vmin".into(), json!(v.to_string()));
                Ok(Outcome::ok(self.render(format!("{v}\n"), Value::Object(j))))
            }
            Command::CheckFamily { family, condition } => self.check_family(&family, &condition),
            Command::Classify { family } => {
                let fam = parse_family(&family, self.domain.group)?;
                fam.validate(self.domain.group)?;
                let c = classify_khull(self.domain.group, self.domain.field, &fam, &self.budget()?);
                Ok(Outcome::ok(self.render(format!("{c}\n"), c.to_json())))
            }
            Command::Suite { filter } => {
                let config = SuiteConfig {
                    filter,
                    seed: self.args.seed,
                    term_bound: self.args.term_bound,
                    exec: Exec::default(),
                };
                let reports = run_suite(&config)?;
                let failed = reports.iter().any(|r| r.status.is_failure());
                let text: String = reports.iter().map(|r| format!("{r}\n")).collect();
                let json = json!({
                    "seed": self.args.seed,
                    "reports": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
                });
                let mut out = Outcome::ok(self.render(text, json));
                if failed {
                    out.code = EXIT_VERIFICATION_FAILED;
                    out.stderr = "error: at least one verification failed\n".into();
                }
                Ok(out)
            }
        }
    }

    fn budget(&self) -> Result<CheckBudget, Failure> {
        Ok(CheckBudget::new(self.horizon()?))
    }

    /// Prints the expansion of `s`. A list cut short by the term budget is
    /// still printed, but the exit code reports the shortfall.
    fn expand(&self, command: &str, src: &str, s: &Series) -> Result<Outcome, Failure> {
        let list = self.evaluator()?.term_list(s)?;
        let mut j = self.header(command);
        j.insert("expression".into(), json!(src));
        j.insert("exp_bound".into(), json!(list.exp_bound.to_string()));
        j.insert("result".into(), list.to_json());
        let mut out = Outcome::ok(self.render(format!("{list}\n"), Value::Object(j)));
        if !list.is_complete() {
            out.code = EXIT_BUDGET;
            out.stderr = format!(
                "error: term budget of {} exhausted; the expansion is exact only through t^({})\n",
                self.args.term_bound,
                list.exact_through()
            );
        }
        Ok(out)
    }

    fn check_family(&self, family: &str, condition: &str) -> Result<Outcome, Failure> {
        let group = self.domain.group;
        let fam = parse_family(family, group)?;
        fam.validate(group)?;
        let budget = self.budget()?;
        let verdicts = if condition.eq_ignore_ascii_case("all") {
            check_all_conditions(group, &fam, &budget)
        } else {
            let c: Condition = condition.parse().map_err(Failure::usage)?;
            vec![(c, check_condition(group, &fam, c, &budget))]
        };
        let text: String = verdicts.iter().map(|(c, v)| format!("{c}: {v}\n")).collect();
        let mut j = self.header("check-family");
        j.insert("family".into(), json!(fam.to_string()));
        let conditions: serde_json::Map<String, Value> =
            verdicts.iter().map(|(c, v)| (c.to_string(), v.to_json())).collect();
        j.insert("conditions".into(), Value::Object(conditions));
        Ok(Outcome::ok(self.render(text, Value::Object(j))))
    }
}
