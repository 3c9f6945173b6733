use std::fmt::Write as _;

use serde_json::{json, Value};
use terminus::quadrature::{
    default_precision, history_tsv, terminate_numeric, Preset, QuadratureError, QuadratureState,
};
use terminus::seq::{
    epsilontic_check, eval_lc, limit_shadow, parse_lc_expr, parse_seq_expr, terminate_closed_form, EpsError,
    EvalError, Fault, LimitError, ParseError, Verdict,
};
use terminus::{Coefficient, FieldConfig, LcError, Rational, RatInterval};

use crate::render::{expansion, scientific, Render};
use crate::{exit, Cli, Command, Mode, PresetArg, QuadratureArgs, Report};

/// A failed command: exit code, error class and message, plus whatever
/// partial result is worth printing.
#[derive(Debug, Clone)]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
    pub details: Option<Value>,
    pub plain: Option<String>,
}

impl CliError {
    pub fn new(code: i32, kind: &'static str, message: impl Into<String>) -> Self {
        Self {
            code,
            kind,
            message: message.into(),
            details: None,
            plain: None,
        }
    }

    fn domain(kind: &'static str, message: impl Into<String>) -> Self {
        Self::new(exit::DOMAIN, kind, message)
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::new(exit::PARSE, "parse", e.to_string())
    }
}

fn lc_kind(e: &LcError) -> &'static str {
    match e {
        LcError::NotPerfectSquare(_) => "not-perfect-square",
        LcError::NotFinite(_) => "not-finite",
        LcError::Undecidable(_) => "undecidable",
        _ => "domain",
    }
}

fn lc_error(e: &LcError) -> CliError {
    CliError::domain(lc_kind(e), e.to_string())
}

fn eval_error(e: &EvalError, prefix: &str) -> CliError {
    let kind = match &e.fault {
        Fault::Field(inner) => lc_kind(inner),
        _ => "domain",
    };
    CliError::domain(kind, format!("{prefix}{e}"))
}

fn limit_error<C: Coefficient + Render>(e: LimitError<C>, digits: usize) -> CliError {
    let message = e.to_string();
    match e {
        LimitError::Eval { source, .. } => CliError {
            message,
            ..eval_error(&source, "")
        },
        LimitError::Diverges { .. } => CliError::domain("diverges", message),
        LimitError::Undecidable { source, .. } => CliError::domain(lc_kind(&source), message),
        LimitError::NotAdequal { gap, lower, upper } => CliError {
            details: Some(json!({
                "lower": lower.to_json(digits),
                "upper": upper.to_json(digits),
                "gap": gap.to_json(digits),
            })),
            plain: Some(format!(
                "lower {}\nlower decimal {}\nupper {}\nupper decimal {}\ngap {}\ngap decimal {}\n",
                lower.exact(),
                lower.decimal(digits),
                upper.exact(),
                upper.decimal(digits),
                gap.exact(),
                gap.decimal(digits)
            )),
            ..CliError::domain("not-adequal", message)
        },
    }
}

fn quadrature_error(e: QuadratureError) -> CliError {
    let message = e.to_string();
    match e {
        QuadratureError::BudgetExceeded { .. } => CliError::new(exit::BUDGET, "budget-exceeded", message),
        QuadratureError::InvariantViolation { .. } => CliError::new(exit::INTERNAL, "internal", message),
        _ => CliError::domain("domain", message),
    }
}

pub(crate) fn name(command: &Command) -> &'static str {
    match command {
        Command::Quadrature(_) => "quadrature",
        Command::Limit { .. } => "limit",
        Command::Terminate { .. } => "terminate",
        Command::Adequal { .. } => "adequal",
        Command::Shadow { .. } => "shadow",
        Command::Epscheck { .. } => "epscheck",
    }
}

pub(crate) fn run(cli: &Cli) -> Result<Report, CliError> {
    let cfg = FieldConfig::new(cli.window.clone())
        .map_err(|e| CliError::new(exit::PARSE, "usage", e.to_string()))?
        .with_sqrt_bits(cli.precision.unwrap_or(FieldConfig::DEFAULT_SQRT_BITS));
    let ctx = Ctx {
        cfg,
        digits: cli.digits as usize,
        terms: cli.terms,
    };
    match &cli.command {
        Command::Quadrature(args) => quadrature(&ctx, args, cli.precision),
        Command::Limit { expr } => {
            let e = parse_seq_expr(expr)?;
            by_mode(cli.mode, || limit::<Rational>(&ctx, &e), || limit::<RatInterval>(&ctx, &e))
        }
        Command::Terminate { lower, upper } => {
            let (lo, hi) = (parse_seq_expr(lower)?, parse_seq_expr(upper)?);
            by_mode(
                cli.mode,
                || terminate::<Rational>(&ctx, &lo, &hi),
                || terminate::<RatInterval>(&ctx, &lo, &hi),
            )
        }
        Command::Adequal { lhs, rhs } => {
            let (x, y) = (parse_lc_expr(lhs)?, parse_lc_expr(rhs)?);
            by_mode(cli.mode, || adequal::<Rational>(&ctx, &x, &y), || adequal::<RatInterval>(&ctx, &x, &y))
        }
        Command::Shadow { expr } => {
            let x = parse_lc_expr(expr)?;
            by_mode(cli.mode, || shadow::<Rational>(&ctx, &x), || shadow::<RatInterval>(&ctx, &x))
        }
        Command::Epscheck { expr, limit, eps, nmax } => epscheck(&ctx, expr, limit, eps, *nmax),
    }
}

struct Ctx {
    cfg: FieldConfig,
    digits: usize,
    terms: usize,
}

fn by_mode<E, I>(mode: Mode, exact: E, interval: I) -> Result<Report, CliError>
where
    E: FnOnce() -> Result<Report, CliError>,
    I: FnOnce() -> Result<Report, CliError>,
{
    match mode {
        Mode::Exact => exact(),
        Mode::Interval => interval(),
        Mode::Auto => match exact() {
            Err(e) if e.kind == "not-perfect-square" => interval(),
            other => other,
        },
    }
}

fn limit<C: Coefficient + Render>(ctx: &Ctx, e: &terminus::seq::SeqExpr) -> Result<Report, CliError> {
    let l = limit_shadow::<C>(e, &ctx.cfg).map_err(|err| limit_error(err, ctx.digits))?;
    let (text, lc) = expansion(&l.expansion, ctx.terms);
    let plain = format!(
        "expr {e}\nlimit {}\ndecimal {}\nexpansion {text}\n",
        l.value.exact(),
        l.value.decimal(ctx.digits)
    );
    let json = json!({
        "command": "limit",
        "status": "ok",
        "expr": e.to_string(),
        "method": "shadow",
        "mode": C::MODE,
        "value": l.value.to_json(ctx.digits),
        "lc_expansion": lc,
    });
    Ok(Report { plain, json })
}

fn terminate<C: Coefficient + Render>(
    ctx: &Ctx,
    lower: &terminus::seq::SeqExpr,
    upper: &terminus::seq::SeqExpr,
) -> Result<Report, CliError> {
    let value = terminate_closed_form::<C>(lower, upper, &ctx.cfg).map_err(|err| limit_error(err, ctx.digits))?;
    let plain = format!(
        "lower {lower}\nupper {upper}\ntermination {}\ndecimal {}\n",
        value.exact(),
        value.decimal(ctx.digits)
    );
    let json = json!({
        "command": "terminate",
        "status": "ok",
        "lower": lower.to_string(),
        "upper": upper.to_string(),
        "mode": C::MODE,
        "value": value.to_json(ctx.digits),
    });
    Ok(Report { plain, json })
}

fn eval_side<C: Coefficient>(
    ctx: &Ctx,
    e: &terminus::seq::SeqExpr,
    prefix: &str,
) -> Result<terminus::LcNumber<C>, CliError> {
    eval_lc::<C>(e, &ctx.cfg).map_err(|err| eval_error(&err, prefix))
}

fn adequal<C: Coefficient + Render>(
    ctx: &Ctx,
    x: &terminus::seq::SeqExpr,
    y: &terminus::seq::SeqExpr,
) -> Result<Report, CliError> {
    let a = eval_side::<C>(ctx, x, "lhs: ")?;
    let b = eval_side::<C>(ctx, y, "rhs: ")?;
    let verdict = a.adequal(&b).map_err(|e| lc_error(&e))?;
    let (diff_text, diff) = expansion(&(&a - &b), ctx.terms);
    let (lhs_text, lhs) = expansion(&a, ctx.terms);
    let (rhs_text, rhs) = expansion(&b, ctx.terms);
    let plain = format!("lhs {lhs_text}\nrhs {rhs_text}\ndifference {diff_text}\nadequal {verdict}\n");
    let json = json!({
        "command": "adequal",
        "status": "ok",
        "mode": C::MODE,
        "lhs": lhs,
        "rhs": rhs,
        "difference": diff,
        "adequal": verdict,
    });
    Ok(Report { plain, json })
}

fn shadow<C: Coefficient + Render>(ctx: &Ctx, x: &terminus::seq::SeqExpr) -> Result<Report, CliError> {
    let a = eval_side::<C>(ctx, x, "")?;
    let class = a.classify().map_err(|e| lc_error(&e))?;
    let value = a.standard_part().map_err(|e| lc_error(&e))?;
    let (text, lc) = expansion(&a, ctx.terms);
    let plain = format!(
        "expr {x}\nexpansion {text}\nclass {}\nshadow {}\ndecimal {}\n",
        class.as_str(),
        value.exact(),
        value.decimal(ctx.digits)
    );
    let json = json!({
        "command": "shadow",
        "status": "ok",
        "expr": x.to_string(),
        "mode": C::MODE,
        "class": class.as_str(),
        "value": value.to_json(ctx.digits),
        "lc_expansion": lc,
    });
    Ok(Report { plain, json })
}

fn verdict_parts(v: &Verdict) -> (&'static str, &'static str, u64) {
    match v {
        Verdict::Confirmed { witness } => ("confirmed", "N", *witness),
        Verdict::Refuted { at } => ("refuted", "at", *at),
        Verdict::Inconclusive { at } => ("inconclusive", "at", *at),
    }
}

fn epscheck(ctx: &Ctx, text: &str, limit: &Rational, eps: &[Rational], n_max: u64) -> Result<Report, CliError> {
    let e = parse_seq_expr(text)?;
    let report = epsilontic_check(&e, limit, eps, n_max).map_err(|err| match err {
        EpsError::Eval { .. } => CliError::domain("domain", err.to_string()),
        other => CliError::new(exit::PARSE, "usage", other.to_string()),
    })?;
    let result = match report.holds() {
        Some(true) => "confirmed",
        Some(false) => "refuted",
        None => "inconclusive",
    };
    let mut plain = format!(
        "expr {e}\nlimit {}\ndecimal {}\nn_max {n_max}\nsamples {}\n",
        limit.exact(),
        limit.decimal(ctx.digits),
        report.samples
    );
    let mut outcomes = Vec::new();
    for o in &report.outcomes {
        let (verdict, key, n) = verdict_parts(&o.verdict);
        let _ = writeln!(
            plain,
            "eps {} = {} {verdict} {key}={n}",
            o.eps.exact(),
            o.eps.decimal(ctx.digits)
        );
        outcomes.push(json!({
            "eps": o.eps.to_json(ctx.digits),
            "verdict": verdict,
            (if key == "N" { "witness" } else { "at" }): n,
        }));
    }
    let _ = writeln!(plain, "result {result}");
    let json = json!({
        "command": "epscheck",
        "status": "ok",
        "expr": e.to_string(),
        "method": "epsilontic",
        "value": limit.to_json(ctx.digits),
        "n_max": n_max,
        "samples": report.samples,
        "outcomes": outcomes,
        "result": result,
    });
    Ok(Report { plain, json })
}

fn state_json(s: &QuadratureState, digits: usize) -> Value {
    let fields = [
        ("I.lo", s.inscribed.lo()),
        ("I.hi", s.inscribed.hi()),
        ("C.lo", s.circumscribed.lo()),
        ("C.hi", s.circumscribed.hi()),
    ];
    let mut exact = serde_json::Map::new();
    let mut decimal = serde_json::Map::new();
    exact.insert("n".into(), json!(s.n));
    for (k, v) in fields {
        exact.insert(k.into(), json!(v.exact()));
        decimal.insert(k.into(), json!(v.decimal(digits)));
    }
    exact.insert("decimal".into(), Value::Object(decimal));
    Value::Object(exact)
}

fn quadrature(ctx: &Ctx, args: &QuadratureArgs, precision: Option<u32>) -> Result<Report, CliError> {
    let (label, start): (String, Box<dyn Fn(u32) -> (RatInterval, RatInterval)>) = match (args.preset, &args.i0, &args.c0)
    {
        (Some(p), _, _) => {
            let preset = match p {
                PresetArg::Squares => Preset::Squares,
                PresetArg::Hexagons => Preset::Hexagons,
            };
            (preset.name().to_string(), Box::new(move |bits| preset.start(bits)))
        }
        (None, Some(i0), Some(c0)) => {
            let (i0, c0) = (RatInterval::point(i0.clone()), RatInterval::point(c0.clone()));
            ("custom".to_string(), Box::new(move |_| (i0.clone(), c0.clone())))
        }
        _ => {
            return Err(CliError::new(
                exit::PARSE,
                "usage",
                "quadrature needs --preset or both --i0 and --c0",
            ))
        }
    };
    let p = precision.unwrap_or_else(|| {
        let (i0, c0) = start(64);
        default_precision(&i0, &c0, &args.tol)
    });
    let (i0, c0) = start(p);
    let t = terminate_numeric(&i0, &c0, &args.tol, args.max_iter, p).map_err(quadrature_error)?;
    let digits = ctx.digits;
    let iterations = t.history.len() - 1;
    let width = t.enclosure.width();
    let mut plain = format!(
        "start {label}\ntolerance {}\nprecision {p}\n",
        scientific(&args.tol)
    );
    if args.tsv {
        plain.push_str(&history_tsv(&t.history));
    } else {
        plain.push_str("n\tI.lo\tI.hi\tC.lo\tC.hi\n");
        for s in &t.history {
            let _ = writeln!(
                plain,
                "{}\t{}\t{}\t{}\t{}",
                s.n,
                s.inscribed.lo().decimal(digits),
                s.inscribed.hi().decimal(digits),
                s.circumscribed.lo().decimal(digits),
                s.circumscribed.hi().decimal(digits)
            );
        }
    }
    let _ = write!(
        plain,
        "iterations {iterations}\nwidth {}\nenclosure {}\n",
        scientific(&width),
        t.enclosure.decimal(digits)
    );
    let json = json!({
        "command": "quadrature",
        "status": "ok",
        "start": {
            "name": label,
            "inscribed": i0.to_json(digits),
            "circumscribed": c0.to_json(digits),
        },
        "tolerance": args.tol.to_json(digits),
        "precision": p,
        "iterations": iterations,
        "history": t.history.iter().map(|s| state_json(s, digits)).collect::<Vec<_>>(),
        "width": scientific(&width),
        "enclosure": t.enclosure.to_json(digits),
    });
    Ok(Report { plain, json })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_error_classes() {
        let internal = QuadratureError::InvariantViolation { step: 3, detail: "x".into() };
        assert_eq!(quadrature_error(internal).code, exit::INTERNAL);
        let budget = QuadratureError::BudgetExceeded {
            iterations: 1,
            width: "1".into(),
            precision: 8,
            floor: "1".into(),
        };
        assert_eq!(quadrature_error(budget).code, exit::BUDGET);
        let start = QuadratureError::NonPositiveTolerance("0".into());
        assert_eq!(quadrature_error(start).code, exit::DOMAIN);
    }

    #[test]
    fn field_error_classes() {
        assert_eq!(lc_error(&LcError::NotFinite("x".into())).kind, "not-finite");
        assert_eq!(lc_error(&LcError::Undecidable("x".into())).kind, "undecidable");
        assert_eq!(lc_error(&LcError::DivisionByZero).code, exit::DOMAIN);
    }
}
