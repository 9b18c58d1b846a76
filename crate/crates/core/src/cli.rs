//! The `digrow` command line: presentation files, verbs and reports.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::dimonomial::{is_identifier, Alphabet, Disequence};
use crate::element::{axiom_residuals, DiElement};
use crate::error::{Error, Result};
use crate::growth::{
    default_window, gap_check, gk_estimate, growth_series, identity_class_check, series_of_table,
    special_basis_check, theorem_a_check, GkEstimate, GrowthSeries,
};
use crate::parse::Lexer;
use crate::presentation::{basis_upto, prefix_suffix_check, Mode, Presentation, Scheme};
use crate::scalar::{Scalar, ScalarKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_CAP: i32 = 3;

/// Default and unforced ceiling of `--max-degree` for dialgebra runs on
/// two or more generators.
pub const DEFAULT_MAX_DEGREE: usize = 12;

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses the `.dpres` format.
///
/// ```text
/// # comment
/// field Q                 (or: field gf 7; optional, defaults to Q)
/// generators a b          (order is the well-order)
/// rel [b]@1 - [a a]@2 + [a a]@1
/// idrel lcomm             (lcomm | rcomm | cross)
/// slack 2
/// ```
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut kind: Option<ScalarKind> = None;
    let mut pres: Option<Presentation> = None;
    let mut slack: Option<usize> = None;
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = content[..content.len() - trimmed.len()].chars().count();
        let keyword = trimmed.split_whitespace().next().unwrap();
        let rest = &trimmed[keyword.len()..];
        let rest_col = 1 + indent + keyword.chars().count();
        let col_of = |sub: &str| -> usize {
            let offset = sub.as_ptr() as usize - rest.as_ptr() as usize;
            rest_col + rest[..offset].chars().count()
        };
        let words: Vec<&str> = rest.split_whitespace().collect();
        match keyword {
            "field" => {
                if kind.is_some() || pres.is_some() {
                    return Err(perr(line, indent + 1, "field must come once, before generators"));
                }
                kind = Some(match words.as_slice() {
                    ["Q"] => ScalarKind::Rational,
                    ["gf", p] => {
                        let col = col_of(p);
                        let p: u64 = p
                            .parse()
                            .map_err(|_| perr(line, col, format!("expected a prime modulus, found {p:?}")))?;
                        ScalarKind::prime(p).map_err(|_| perr(line, col, format!("modulus {p} is not prime")))?
                    }
                    _ => return Err(perr(line, rest_col, "expected 'Q' or 'gf <prime>'")),
                });
            }
            "generators" => {
                if pres.is_some() {
                    return Err(perr(line, indent + 1, "generators given twice"));
                }
                if words.is_empty() {
                    return Err(perr(line, rest_col, "expected at least one generator"));
                }
                for (j, w) in words.iter().enumerate() {
                    if !is_identifier(w) {
                        return Err(perr(line, col_of(w), format!("malformed generator name {w:?}")));
                    }
                    if words[..j].contains(w) {
                        return Err(perr(line, col_of(w), format!("duplicate generator {w:?}")));
                    }
                }
                let alphabet = Alphabet::new(words.iter().copied())?;
                pres = Some(Presentation::free(alphabet, kind.unwrap_or(ScalarKind::Rational)));
            }
            "rel" => {
                let p = pres
                    .as_mut()
                    .ok_or_else(|| perr(line, indent + 1, "rel before generators"))?;
                let mut lx = Lexer::with_column(rest, line, rest_col);
                let e = lx.element(p.alphabet(), p.kind())?;
                lx.expect_end()?;
                if e.is_zero() {
                    return Err(perr(line, rest_col, "zero relator"));
                }
                p.add_relator(e)?;
            }
            "idrel" => {
                let p = pres
                    .as_mut()
                    .ok_or_else(|| perr(line, indent + 1, "idrel before generators"))?;
                match words.as_slice() {
                    [tag] => {
                        let s = Scheme::from_tag(tag).ok_or_else(|| {
                            perr(line, col_of(tag), format!("unknown identity {tag:?}, expected lcomm, rcomm or cross"))
                        })?;
                        p.add_scheme(s);
                    }
                    _ => return Err(perr(line, rest_col, "expected one of lcomm, rcomm, cross")),
                }
            }
            "slack" => match words.as_slice() {
                [k] => {
                    slack = Some(
                        k.parse()
                            .map_err(|_| perr(line, col_of(k), "expected a nonnegative integer"))?,
                    )
                }
                _ => return Err(perr(line, rest_col, "expected a nonnegative integer")),
            },
            other => {
                return Err(perr(
                    line,
                    indent + 1,
                    format!("unknown directive {other:?}, expected field, generators, rel, idrel or slack"),
                ))
            }
        }
    }
    let mut pres = pres.ok_or_else(|| perr(last_line + 1, 1, "missing generators line"))?;
    pres.set_slack(slack);
    Ok(pres)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Verb {
    /// Normal form of --expr
    Nf,
    /// Basis table
    Basis,
    /// Growth series
    Growth,
    /// Gelfand-Kirillov estimate
    Gk,
    /// Run every check
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Dialgebra,
    Assoc,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Dialgebra => Mode::Dialgebra,
            ModeArg::Assoc => Mode::Associative,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

fn parse_window(s: &str) -> std::result::Result<(usize, usize), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected <lo>:<hi>, found {s:?}"))?;
    let lo = lo.trim().parse().map_err(|_| format!("bad window start {lo:?}"))?;
    let hi = hi.trim().parse().map_err(|_| format!("bad window end {hi:?}"))?;
    Ok((lo, hi))
}

#[derive(Clone, Debug, Parser)]
#[command(name = "digrow", version, about = "Normal forms, bases and growth of finitely presented dialgebras")]
pub struct Command {
    #[arg(value_enum)]
    pub verb: Verb,
    /// Presentation file (.dpres)
    pub input: PathBuf,
    #[arg(long = "max-degree")]
    pub max_degree: Option<usize>,
    #[arg(long, value_enum, default_value = "dialgebra")]
    pub mode: ModeArg,
    /// Overrides the slack given in the file
    #[arg(long)]
    pub slack: Option<usize>,
    #[arg(long, value_parser = parse_window)]
    pub window: Option<(usize, usize)>,
    /// Element literal for `nf`
    #[arg(long)]
    pub expr: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Lifts the --max-degree cap
    #[arg(long)]
    pub force: bool,
}

/// What a run produced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    /// The report (written to `--out` or standard output).
    pub output: String,
    /// Warnings and errors for standard error.
    pub messages: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceCap(_) => EXIT_CAP,
        _ => EXIT_INVALID,
    }
}

/// Runs a command, reading the input file. Never panics on bad input.
pub fn run(cmd: &Command) -> Outcome {
    let text = match std::fs::read_to_string(&cmd.input) {
        Ok(t) => t,
        Err(e) => {
            return Outcome {
                code: EXIT_INVALID,
                output: String::new(),
                messages: format!("{}: {e}\n", cmd.input.display()),
            }
        }
    };
    run_text(cmd, &text)
}

/// Runs a command on presentation text already in memory.
pub fn run_text(cmd: &Command, text: &str) -> Outcome {
    let mut messages = String::new();
    let result = parse_presentation(text)
        .map_err(|e| {
            let _ = writeln!(messages, "{}: {e}", cmd.input.display());
            e
        })
        .and_then(|mut pres| {
            if let Some(k) = cmd.slack {
                pres.set_slack(Some(k));
            }
            dispatch(cmd, &pres, &mut messages)
        });
    match result {
        Ok((code, output)) => Outcome { code, output, messages },
        Err(e) => {
            if !messages.contains(&e.to_string()) {
                let _ = writeln!(messages, "error: {e}");
            }
            Outcome {
                code: exit_code(&e),
                output: String::new(),
                messages,
            }
        }
    }
}

fn degree_bound(cmd: &Command, pres: &Presentation, mode: Mode, fallback: usize) -> Result<usize> {
    let n = cmd.max_degree.unwrap_or(fallback);
    if n == 0 {
        return Err(Error::Domain("--max-degree must be at least 1".into()));
    }
    if mode == Mode::Dialgebra && pres.alphabet().len() >= 2 && n > DEFAULT_MAX_DEGREE && !cmd.force {
        return Err(Error::ResourceCap(format!(
            "--max-degree {n} above {DEFAULT_MAX_DEGREE} on {} generators needs --force",
            pres.alphabet().len()
        )));
    }
    Ok(n)
}

fn window_for(cmd: &Command, n: usize) -> Result<(usize, usize)> {
    let w = cmd.window.unwrap_or_else(|| default_window(n));
    if w.0 < 2 || w.0 >= w.1 || w.1 > n {
        return Err(Error::Domain(format!(
            "window {}:{} must satisfy 2 <= lo < hi <= max-degree {n}",
            w.0, w.1
        )));
    }
    Ok(w)
}

fn dispatch(cmd: &Command, pres: &Presentation, messages: &mut String) -> Result<(i32, String)> {
    let mode: Mode = cmd.mode.into();
    match cmd.verb {
        Verb::Nf => {
            let expr = cmd
                .expr
                .as_deref()
                .ok_or_else(|| Error::Domain("nf needs --expr".into()))?;
            let x = crate::parse::parse_element(pres.alphabet(), pres.kind(), expr)?;
            let n = degree_bound(cmd, pres, mode, x.max_len().max(1))?;
            let table = basis_upto(pres, n, mode)?;
            let nf = table.normal_form(&x)?;
            warn_approximate(messages, table.approximate());
            let out = match cmd.format.unwrap_or(Format::Text) {
                Format::Json => pretty(&json!({
                    "input": x.to_string(),
                    "normal_form": nf.to_string(),
                    "mode": mode.tag(),
                    "degree_bound": n,
                    "approximate": table.approximate(),
                })),
                _ => format!("{nf}\n"),
            };
            Ok((EXIT_OK, out))
        }
        Verb::Basis => {
            let n = degree_bound(cmd, pres, mode, DEFAULT_MAX_DEGREE)?;
            let table = basis_upto(pres, n, mode)?;
            warn_approximate(messages, table.approximate());
            let out = match cmd.format.unwrap_or(Format::Json) {
                Format::Json => table.to_json() + "\n",
                Format::Csv => series_of_table(&table, pres.fingerprint()).to_csv(),
                Format::Text => table
                    .basis()
                    .iter()
                    .map(|d| format!("{}\n", d.display(pres.alphabet())))
                    .collect(),
            };
            Ok((EXIT_OK, out))
        }
        Verb::Growth => {
            let n = degree_bound(cmd, pres, mode, DEFAULT_MAX_DEGREE)?;
            let s = growth_series(pres, n, mode)?;
            warn_approximate(messages, s.approximate());
            let out = match cmd.format.unwrap_or(Format::Csv) {
                Format::Csv => s.to_csv(),
                Format::Json => pretty(&series_json(&s)),
                Format::Text => {
                    let mut t = String::new();
                    for k in 1..=n {
                        let _ = writeln!(t, "{k} {} {}", s.count(k), s.cumulative(k));
                    }
                    t
                }
            };
            Ok((EXIT_OK, out))
        }
        Verb::Gk => {
            let n = degree_bound(cmd, pres, mode, DEFAULT_MAX_DEGREE)?;
            let w = window_for(cmd, n)?;
            let s = growth_series(pres, n, mode)?;
            warn_approximate(messages, s.approximate());
            let e = gk_estimate(&s, w)?;
            let out = match cmd.format.unwrap_or(Format::Json) {
                Format::Text => format!("{}\n", describe_estimate(&e)),
                _ => e.to_json() + "\n",
            };
            Ok((EXIT_OK, out))
        }
        Verb::Verify => verify(cmd, pres, messages),
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("plain data") + "\n"
}

fn warn_approximate(messages: &mut String, approximate: bool) {
    if approximate {
        let _ = writeln!(
            messages,
            "warning: inhomogeneous presentation; the ideal is truncated (basis is an upper bound)"
        );
    }
}

fn series_json(s: &GrowthSeries) -> serde_json::Value {
    json!({
        "mode": s.mode().tag(),
        "fingerprint": s.fingerprint(),
        "approximate": s.approximate(),
        "counts": s.counts().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "cumulative": s.cumulative_counts().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
    })
}

fn describe_estimate(e: &GkEstimate) -> String {
    let class = match &e.classification {
        crate::growth::Classification::Bounded => "bounded".to_string(),
        crate::growth::Classification::Polynomial { degree } => format!("polynomial, degree ~ {degree:.3}"),
        crate::growth::Classification::Superpolynomial => "superpolynomial".to_string(),
    };
    format!(
        "window {}:{} slope {:.4} residual {:.4} ({}) {class}",
        e.window.0,
        e.window.1,
        e.slope,
        e.residual,
        if e.stable { "stable" } else { "unstable" }
    )
}

fn random_element(rng: &mut ChaCha8Rng, alphabet: &Alphabet, kind: ScalarKind, max_len: usize) -> DiElement {
    let k = alphabet.len();
    let terms = rng.gen_range(1..=3);
    let mut e = DiElement::zero(alphabet, kind);
    for _ in 0..terms {
        let len = rng.gen_range(1..=max_len);
        let word = (0..len).map(|_| rng.gen_range(0..k) as u16).collect();
        let middle = rng.gen_range(1..=len);
        let d = Disequence::new(alphabet, word, middle).expect("valid by construction");
        let c = Scalar::from_i64(rng.gen_range(-5..=5), kind);
        let term = DiElement::from_terms(alphabet, kind, [(d, c)]).expect("same alphabet");
        e = e.add(&term).expect("same alphabet");
    }
    e
}

/// Number of random triples checked by `verify`.
pub const VERIFY_TRIPLES: u64 = 200;

fn axiom_suite(pres: &Presentation) -> usize {
    let alphabet = pres.alphabet();
    let kind = pres.kind();
    (0..VERIFY_TRIPLES)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = ChaCha8Rng::seed_from_u64(i);
            let x = random_element(&mut rng, alphabet, kind, 3);
            let y = random_element(&mut rng, alphabet, kind, 3);
            let z = random_element(&mut rng, alphabet, kind, 3);
            !axiom_residuals(&x, &y, &z)
                .expect("same alphabet")
                .iter()
                .all(DiElement::is_zero)
        })
        .count()
}

fn verify(cmd: &Command, pres: &Presentation, messages: &mut String) -> Result<(i32, String)> {
    let n = degree_bound(cmd, pres, Mode::Dialgebra, DEFAULT_MAX_DEGREE)?;
    let mut hard = Vec::new();
    let mut lines = Vec::new();

    let axiom_failures = axiom_suite(pres);
    lines.push(format!(
        "axioms: {} of {VERIFY_TRIPLES} random triples with nonzero residuals",
        axiom_failures
    ));
    if axiom_failures > 0 {
        hard.push("axioms");
    }

    let d = basis_upto(pres, n, Mode::Dialgebra)?;
    let a = basis_upto(pres, n, Mode::Associative)?;
    let sd = series_of_table(&d, pres.fingerprint());
    let sa = series_of_table(&a, pres.fingerprint());
    warn_approximate(messages, d.approximate());
    lines.push(format!(
        "basis: |B_D^<={n}| = {}, |B_A^<={n}| = {}{}",
        d.len(),
        a.len(),
        if d.approximate() { " (approximate)" } else { "" }
    ));

    let ta = theorem_a_check(&sd, &sa, pres.alphabet().len());
    match &ta.first_violation {
        None => lines.push(format!("theorem A bounds: hold for n <= {}", ta.checked_up_to)),
        Some(v) => {
            lines.push(format!(
                "theorem A bounds: {} bound fails at n = {} (|B_D| = {}, |B_A| = {})",
                v.side, v.n, v.dialgebra, v.associative
            ));
            if ta.truncated {
                let _ = writeln!(messages, "warning: theorem A violation on a truncated table");
            } else {
                hard.push("theorem A");
            }
        }
    }

    let ps = prefix_suffix_check(&d, &a)?;
    lines.push(format!("prefix/suffix: {} violations", ps.violations.len()));
    for v in ps.violations.iter().take(5) {
        lines.push(format!(
            "  {} {:?} part {} not in the associative basis",
            v.monomial.display(pres.alphabet()),
            v.side,
            v.missing.display(pres.alphabet())
        ));
    }
    if !ps.passed() {
        if ps.truncated {
            let _ = writeln!(messages, "warning: prefix/suffix violations on a truncated table");
        } else {
            hard.push("prefix/suffix");
        }
    }

    let sb = special_basis_check(&d)?;
    lines.push(match sb.m {
        Some(m) => format!("special basis: m = {m}, predicts GK(D) = GK(A_D)"),
        None => format!("special basis: no m <= {}", sb.searched_up_to),
    });

    let ic = identity_class_check(pres, &d)?;
    let holding: Vec<&str> = ic
        .outcomes
        .iter()
        .filter(|o| o.holds)
        .map(|o| o.scheme.tag())
        .collect();
    lines.push(format!(
        "identities: {}",
        if holding.is_empty() { "none hold".to_string() } else { holding.join(", ") + " hold" }
    ));
    if let Some(p) = &ic.prediction {
        lines.push(format!("identity prediction: {p}"));
    }

    let mut estimates = Vec::new();
    if n >= 3 {
        let w = window_for(cmd, n)?;
        let ed = gk_estimate(&sd, w)?;
        let ea = gk_estimate(&sa, w)?;
        lines.push(format!("gk D: {}", describe_estimate(&ed)));
        lines.push(format!("gk A: {}", describe_estimate(&ea)));
        if ed.is_polynomial() && ea.is_polynomial() && ea.slope > 0.0 {
            lines.push(format!("gk ratio D/A: {:.3}", ed.slope / ea.slope));
        }
        estimates.push(ed);
        estimates.push(ea);
    }
    let gap = gap_check(&estimates);
    if gap.flagged() {
        let _ = writeln!(
            messages,
            "warning: slope strictly between {} and {} with stable fit; rerun at a higher degree",
            crate::growth::GAP_LOW,
            crate::growth::GAP_HIGH
        );
        lines.push("gap check: anomaly, rerun at a higher degree".into());
    } else {
        lines.push("gap check: no anomaly".into());
    }

    let code = if hard.is_empty() { EXIT_OK } else { EXIT_VERIFY };
    lines.push(if hard.is_empty() {
        "verify: ok".into()
    } else {
        format!("verify: FAILED ({})", hard.join(", "))
    });
    let out = match cmd.format.unwrap_or(Format::Text) {
        Format::Json => pretty(&json!({
            "degree_bound": n,
            "approximate": d.approximate(),
            "axiom_failures": axiom_failures,
            "theorem_a": ta,
            "prefix_suffix_violations": ps.violations.len(),
            "special_basis": sb,
            "identities": ic,
            "estimates": estimates,
            "gap": gap,
            "failures": hard,
        })),
        _ => lines.join("\n") + "\n",
    };
    Ok((code, out))
}
