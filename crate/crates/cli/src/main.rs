//! `qspace`: command-line front end for the q-deformed operator engine.
//!
//! Exit codes: 0 success, 1 mathematical failure, 2 usage or parse error,
//! 3 configuration error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use qspace::hopf::Hopf;
use qspace::ncalg::{Calculus, GenKind, NCPolynomial, Ordering, RewriteSystem, Side, SpaceDef};
use qspace::poly::{coords, CommPolynomial};
use qspace::qcalc::{gen_d_apply_bruteforce, gen_d_reduce, KOperatorSpec};
use qspace::reps::{calculus_of, Direction, Reps};
use qspace::scalar::parse_qrational;
use qspace::verify::{self, IdentityBounds, SuiteReport};
use qspace::{Error, QRational};

#[derive(Parser)]
#[command(name = "qspace", version, about = "Exact q-deformed differential calculi on euclid3, euclid4 and minkowski")]
struct Cli {
    /// Directory with `<space>.relations` files replacing the shipped ones.
    #[arg(long, global = true, env = "QSPACE_RELATIONS_DIR")]
    relations_dir: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, env = "QSPACE_FORMAT", default_value = "text")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum CalcArg {
    Unhatted,
    Hatted,
}

impl From<CalcArg> for Calculus {
    fn from(c: CalcArg) -> Self {
        match c {
            CalcArg::Unhatted => Calculus::Unhatted,
            CalcArg::Hatted => Calculus::Hatted,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Forward,
    Reversed,
}

impl From<OrderArg> for Ordering {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Forward => Ordering::Forward,
            OrderArg::Reversed => Ordering::Reversed,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    All,
    Validation,
    Equivalence,
    Identities,
    Classical,
    Worked,
    AppendixB,
}

#[derive(Subcommand)]
enum Command {
    /// Applies a generator to a commutative polynomial.
    Apply {
        #[arg(long, default_value = "euclid3")]
        space: String,
        /// Generator name, see `qspace generators`.
        #[arg(long)]
        gen: String,
        #[arg(long)]
        f: String,
        /// Restricts the generator to one calculus.
        #[arg(long, value_enum)]
        calculus: Option<CalcArg>,
        #[arg(long, value_enum, default_value = "forward")]
        ordering: OrderArg,
        #[arg(long, value_enum, default_value = "left")]
        side: SideArg,
        /// Uses the rewrite oracle instead of the closed forms.
        #[arg(long)]
        oracle: bool,
    },
    /// Star product of two polynomials.
    Star {
        #[arg(long, default_value = "euclid3")]
        space: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long, value_enum, default_value = "forward")]
        ordering: OrderArg,
    },
    /// Normal ordering of an expression such as `d- x+ x3`.
    NormalOrder {
        #[arg(long, default_value = "euclid3")]
        space: String,
        #[arg(long)]
        expr: String,
        #[arg(long, value_enum, default_value = "unhatted")]
        calculus: CalcArg,
        #[arg(long, value_enum, default_value = "forward")]
        ordering: OrderArg,
        /// Side on which derivatives and symmetry generators are collected.
        #[arg(long, value_enum, default_value = "left")]
        side: SideArg,
    },
    /// Ordering conversion Û (forward to reversed) or its inverse.
    Uhat {
        #[arg(long, default_value = "euclid3")]
        space: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        inverse: bool,
    },
    /// Reduces a generalized derivative to binomial derivatives.
    ReduceD {
        /// Comma-separated orders k_1..k_l.
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<u32>,
        /// Comma-separated bases: rational functions of q, or of one other
        /// symbol used throughout.
        #[arg(long, value_delimiter = ',', required = true)]
        bases: Vec<String>,
        /// Polynomial in `x` to evaluate both ways.
        #[arg(long)]
        f: Option<String>,
    },
    /// Runs verification suites and exits nonzero on any failure.
    Verify {
        #[arg(long, default_value = "euclid3")]
        space: String,
        /// Monomial degree bound; defaults to the acceptance bound.
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long, value_enum)]
        calculus: Option<CalcArg>,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Lists every case, not only the failures.
        #[arg(long)]
        verbose: bool,
    },
    /// Coproduct, antipode axiom and Leibniz checks of the Hopf tables.
    HopfCheck {
        #[arg(long, default_value = "euclid3")]
        space: String,
        #[arg(long, value_enum)]
        calculus: Option<CalcArg>,
        #[arg(long)]
        gen: Option<String>,
        #[arg(long, default_value_t = 3)]
        degree: u32,
        /// With `--gen`, `--f` and `--g`: evaluates the Leibniz rule on `f g`.
        #[arg(long)]
        f: Option<String>,
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        verbose: bool,
    },
    /// Lists the generators of a space with their kinds.
    Generators {
        #[arg(long, default_value = "euclid3")]
        space: String,
    },
}

/// Failure of a command, carrying its exit code.
enum Failure {
    Engine(Error),
    /// A check ran and did not hold.
    Math(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) => 3,
        Error::Pole(_) | Error::Internal(_) => 1,
        _ => 2,
    }
}

struct Ctx {
    relations_dir: Option<PathBuf>,
    format: Format,
}

impl Ctx {
    fn space(&self, name: &str) -> Result<Arc<SpaceDef>, Error> {
        let sp = match &self.relations_dir {
            Some(dir) => SpaceDef::from_dir(dir, name)?,
            None => SpaceDef::builtin(name)?,
        };
        Ok(Arc::new(sp))
    }

    fn emit(&self, text: String, value: serde_json::Value) {
        match self.format {
            Format::Text => out(&format!("{text}\n")),
            Format::Json => out(&format!("{}\n", serde_json::to_string_pretty(&value).expect("json values serialize"))),
        }
    }

    fn report(&self, r: &SuiteReport, verbose: bool) -> Result<(), Failure> {
        match self.format {
            Format::Text => out(&r.render_text(verbose)),
            Format::Json => out(&format!("{}\n", r.to_json())),
        }
        if r.ok() {
            Ok(())
        } else {
            Err(Failure::Math(format!("{} of {} cases failed", r.summary.failed, r.summary.total)))
        }
    }
}

/// Writes to stdout; a reader that closed the pipe early is not an error.
fn out(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn poly(space: &SpaceDef, text: &str) -> Result<CommPolynomial<QRational>, Error> {
    CommPolynomial::parse(space.coords().clone(), text)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let ctx = Ctx {
        relations_dir: cli.relations_dir,
        format: cli.format,
    };
    match cli.command {
        Command::Apply { space, gen, f, calculus, ordering, side, oracle } => {
            let sp = ctx.space(&space)?;
            let g = sp.gen(&gen)?;
            let f = poly(&sp, &f)?;
            let o = Ordering::from(ordering);
            let calc = calculus.map(Calculus::from);
            let out = if oracle {
                let c = calc.unwrap_or_else(|| calculus_of(&sp, g));
                match side {
                    SideArg::Left => RewriteSystem::new(sp.clone(), c, o, Side::Left)?.left_action_word(&[g], &f)?,
                    SideArg::Right => RewriteSystem::new(sp.clone(), c, o, Side::Right)?.right_action_word(&f, &[g])?,
                }
            } else {
                let reps = Reps::<QRational>::new(sp.clone())?;
                match side {
                    SideArg::Left => reps.rep_left(calc, g, &f, o)?,
                    SideArg::Right => reps.rep_right(g, &f, o)?,
                }
            };
            ctx.emit(out.render(), json!({ "result": out.render() }));
        }
        Command::Star { space, f, g, ordering } => {
            let sp = ctx.space(&space)?;
            let sys = RewriteSystem::<QRational>::new(sp.clone(), Calculus::Unhatted, ordering.into(), Side::Left)?;
            let out = sys.star(&poly(&sp, &f)?, &poly(&sp, &g)?)?;
            ctx.emit(out.render(), json!({ "result": out.render() }));
        }
        Command::NormalOrder { space, expr, calculus, ordering, side } => {
            let sp = ctx.space(&space)?;
            let side = match side {
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
            };
            let sys = RewriteSystem::<QRational>::new(sp.clone(), calculus.into(), ordering.into(), side)?;
            let p = NCPolynomial::from_terms(sp.parse_expression(&expr)?);
            let out = sys.normal_order(&p)?.render(&sp);
            ctx.emit(out.clone(), json!({ "result": out }));
        }
        Command::Uhat { space, f, inverse } => {
            let sp = ctx.space(&space)?;
            let reps = Reps::<QRational>::new(sp.clone())?;
            let dir = if inverse { Direction::Inverse } else { Direction::Forward };
            let out = reps.u_hat(dir, &poly(&sp, &f)?)?;
            ctx.emit(out.render(), json!({ "result": out.render() }));
        }
        Command::ReduceD { orders, bases, f } => reduce_d(&ctx, orders, bases, f)?,
        Command::Verify { space, degree, calculus, suite, verbose } => {
            let r = run_verify(&ctx, &space, degree, calculus.map(Calculus::from), suite)?;
            ctx.report(&r, verbose)?;
        }
        Command::HopfCheck { space, calculus, gen, degree, f, g, verbose } => {
            let sp = ctx.space(&space)?;
            let gid = gen.as_deref().map(|g| sp.gen(g)).transpose()?;
            if let (Some(gid), Some(f), Some(g)) = (gid, &f, &g) {
                let c = calculus.map(Calculus::from).unwrap_or_else(|| calculus_of(&sp, gid));
                let h = Hopf::<QRational>::builtin(sp.clone(), c)?;
                let (f, g) = (poly(&sp, f)?, poly(&sp, g)?);
                let lhs = h.leibniz_apply(gid, &f, &g)?;
                let rhs = h.reps().rep_left(None, gid, &h.star(&f, &g)?, Ordering::Forward)?;
                let equal = lhs == rhs;
                ctx.emit(
                    format!("leibniz: {}\naction on star product: {}\nequal: {equal}", lhs.render(), rhs.render()),
                    json!({ "leibniz": lhs.render(), "action": rhs.render(), "equal": equal }),
                );
                if !equal {
                    return Err(Failure::Math("Leibniz rule does not hold".into()));
                }
            } else {
                let r = verify::hopf_suite_for(&sp, calculus.map(Calculus::from), gid, degree, degree.min(4))?;
                ctx.report(&r, verbose)?;
            }
        }
        Command::Generators { space } => {
            let sp = ctx.space(&space)?;
            let mut lines = Vec::new();
            let mut rows = Vec::new();
            for (i, g) in sp.generators().iter().enumerate() {
                let kind = match g.kind {
                    GenKind::Coordinate => "coordinate",
                    GenKind::Unhatted => "unhatted derivative",
                    GenKind::Hatted => "hatted derivative",
                    GenKind::Symmetry => "symmetry",
                    GenKind::Scaling => "scaling",
                };
                let native = Reps::<QRational>::new(sp.clone())
                    .ok()
                    .and_then(|r| r.native_ordering(i as u16))
                    .map_or("-".to_string(), |o| o.to_string());
                lines.push(format!("{:<10} {:<6} {:<20} closed form: {native}", g.name, g.id, kind));
                rows.push(json!({ "name": g.name, "id": g.id, "kind": kind, "closed_form_ordering": native }));
            }
            ctx.emit(lines.join("\n"), json!(rows));
        }
    }
    Ok(())
}

fn run_verify(
    ctx: &Ctx,
    space: &str,
    degree: Option<u32>,
    calculus: Option<Calculus>,
    suite: Suite,
) -> Result<SuiteReport, Error> {
    if suite == Suite::AppendixB {
        let n = degree.unwrap_or(10);
        return verify::appendix_b_suite(n, 3, 3, n + 2);
    }
    if suite == Suite::Worked {
        return verify::worked_identity_suite(degree.unwrap_or(5));
    }
    let sp = ctx.space(space)?;
    let default = match space {
        "euclid3" => 6,
        "euclid4" => 5,
        _ => 4,
    };
    let d = degree.unwrap_or(default);
    let mut r = SuiteReport::new(format!("{space} degree {d}"));
    let all = suite == Suite::All;
    if all || suite == Suite::Validation {
        r.extend(verify::validation_suite(&sp, 6)?);
    }
    if all || suite == Suite::Equivalence {
        r.extend(verify::run_equivalence(&sp, calculus, d)?);
    }
    if all || suite == Suite::Identities {
        r.extend(verify::run_identity_suites(&sp, IdentityBounds::for_space(space).capped(d))?);
    }
    if all || suite == Suite::Classical {
        r.extend(verify::classical_suite(&sp, d.min(5))?);
    }
    if all && space == "minkowski" {
        r.extend(verify::worked_identity_suite(d.min(5))?);
    }
    Ok(r)
}

/// Splits into alphabetic words and the text between them.
fn words(text: &str) -> Vec<(bool, String)> {
    let mut out: Vec<(bool, String)> = Vec::new();
    for c in text.chars() {
        let alpha = c.is_ascii_alphabetic();
        match out.last_mut() {
            Some((a, s)) if *a == alpha => s.push(c),
            _ => out.push((alpha, c.to_string())),
        }
    }
    out
}

fn replace_word(text: &str, from: &str, to: &str) -> String {
    words(text)
        .into_iter()
        .map(|(alpha, w)| if alpha && w == from { to.to_string() } else { w })
        .collect()
}

fn reduce_d(ctx: &Ctx, orders: Vec<u32>, bases: Vec<String>, f: Option<String>) -> Result<(), Failure> {
    // A single symbol other than q stands in for q; results are printed in it.
    let mut syms: Vec<String> = bases
        .iter()
        .flat_map(|b| words(b))
        .filter(|(alpha, w)| *alpha && !matches!(w.as_str(), "lambda" | "lambdap"))
        .map(|(_, w)| w)
        .collect();
    syms.sort();
    syms.dedup();
    let symbol = match syms.as_slice() {
        [s] if s != "q" => Some(s.clone()),
        [] | [_] => None,
        _ => return Err(Error::parse(0, "bases may use q or one other symbol, not both").into()),
    };
    let to_q = |b: &str| match &symbol {
        Some(s) => replace_word(b, s, "q"),
        None => b.to_string(),
    };
    let from_q = |text: String| match &symbol {
        Some(s) => replace_word(&text, "q", s),
        None => text,
    };
    let bases: Vec<QRational> = bases.iter().map(|b| parse_qrational(&to_q(b))).collect::<Result<_, _>>()?;
    let spec = KOperatorSpec::new(orders, bases, "x")?;
    let red = gen_d_reduce(&spec);
    let shown = from_q(red.to_string());
    let Some(f) = f else {
        ctx.emit(shown.clone(), json!({ "reduction": shown }));
        return Ok(());
    };
    let fp = CommPolynomial::parse(coords(&["x"]), &f)?;
    let brute = gen_d_apply_bruteforce(&fp, &spec)?;
    let reduced = red.apply(&fp, "x")?;
    let equal = brute == reduced;
    let (b, r) = (from_q(brute.render()), from_q(reduced.render()));
    ctx.emit(
        format!("reduction: {shown}\nbrute force: {b}\nreduced: {r}\nequal: {equal}"),
        json!({ "reduction": shown, "brute_force": b, "reduced": r, "equal": equal }),
    );
    if equal {
        Ok(())
    } else {
        Err(Failure::Math("the two evaluations differ".into()))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Engine(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Math(msg)) => {
            eprintln!("failed: {msg}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replaces_whole_words_only() {
        assert_eq!(replace_word("(1+2*a)*x + a^2/lambda", "a", "q"), "(1+2*q)*x + q^2/lambda");
        assert_eq!(replace_word("q^-2 d/dx", "q", "b"), "b^-2 d/dx");
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
