use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use mahler_core::parser::render_residues;
use mahler_core::scan::CellOutcome;
use mahler_core::{
    derive_scheme, known_scheme, load_scheme, parse_ratfun, render_ratfun, save_scheme,
    scan_grid, verify_scheme, Derivation, DigitEvaluator, Error, Execution, FunctionalEquation,
    KnownLabel, ModRatFun, Rat, ScanRequest, Scheme, SchemeFile, SectionSelect,
};
use num_rational::BigRational;
use serde::Serialize;

use crate::{exit, Command, EquationArgs, OptionalEquationArgs};

/// An error together with the exit code it maps to.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure { code: exit::USAGE, message: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Syntax { .. } | Error::UnboundM { .. } | Error::InvalidArgument(_) => exit::USAGE,
            Error::InternalInvariant(_) => exit::INTERNAL,
            _ => exit::REPRESENTATION,
        };
        Failure { code, message: format!("{}: {e}", e.kind()) }
    }
}

type Outcome = Result<i32, Failure>;

pub(crate) fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let res = match cmd {
        Command::Derive { eq, json } => derive(&eq, json.as_deref(), out),
        Command::Coeff { scheme, eq, n } => coeff(scheme.as_deref(), &eq, n, out),
        Command::Verify { scheme, eq, count } => verify(scheme.as_deref(), &eq, count, out),
        Command::Scan { m_from, m_to, s, r, f0, i, count, json, sequential } => {
            let exec = if sequential { Execution::Sequential } else { Execution::Parallel };
            scan(m_from, m_to, s, r, f0, &i, count, json, exec, out)
        }
        Command::Known { prop, m } => known(prop, m, out),
    };
    match res {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn parse_f0(text: Option<&str>) -> Result<Option<Rat>, Failure> {
    text.map(|t| {
        t.trim()
            .parse::<BigRational>()
            .map_err(|_| Failure::usage(format!("--f0 {t:?} is not a rational number")))
    })
    .transpose()
}

fn parse_expr(flag: &str, text: &str, m: usize) -> Result<mahler_core::RatFun, Failure> {
    parse_ratfun(text, Some(m as u64)).map_err(|e| Failure::usage(format!("--{flag}: {}: {e}", e.kind())))
}

fn equation(eq: &EquationArgs) -> Result<FunctionalEquation, Failure> {
    let s = parse_expr("S", &eq.s, eq.m)?;
    let r = parse_expr("R", &eq.r, eq.m)?;
    let f0 = parse_f0(eq.f0.as_deref())?;
    if eq.i >= eq.m {
        return Err(Failure::usage(format!("--i {} must be below --m {}", eq.i, eq.m)));
    }
    Ok(FunctionalEquation::new(s, r, eq.m, f0)?.with_sources(&eq.s, &eq.r))
}

fn required(eq: &OptionalEquationArgs) -> Result<EquationArgs, Failure> {
    match (eq.m, eq.i, &eq.s, &eq.r) {
        (Some(m), Some(i), Some(s), Some(r)) => Ok(EquationArgs {
            m,
            i,
            s: s.clone(),
            r: r.clone(),
            f0: eq.f0.clone(),
        }),
        _ => Err(Failure::usage("give either --scheme PATH or all of --m, --i, --S, --R")),
    }
}

fn derive_required(eq: &EquationArgs) -> Result<(FunctionalEquation, Scheme), Failure> {
    let fe = equation(eq)?;
    match derive_scheme(&fe, eq.i)? {
        Derivation::Scheme(s) => Ok((fe, s)),
        Derivation::NoMiracle(nm) => Err(Failure {
            code: exit::NO_MIRACLE,
            message: format!("FAIL: no miracle; proper part {}", render_ratfun(&nm.proper_part)),
        }),
    }
}

fn render_e(e: &ModRatFun) -> String {
    if e.den() == [1] || e.is_zero() {
        return render_residues(e.num());
    }
    render_ratfun(&e.to_ratfun())
}

fn print_scheme(s: &Scheme, out: &mut dyn Write) -> std::io::Result<()> {
    let (m, i) = (s.m(), s.i());
    let e = render_e(s.e());
    let p = render_residues(s.p());
    writeln!(out, "F_{i}(q) = ({e}) + ({p})*F_{i}(q^{m})  (mod {m})")?;
    writeln!(out, "E = {e}")?;
    writeln!(out, "P = {p}")?;
    writeln!(out, "seed = {}", s.seed())?;
    if let Some(pv) = s.provenance() {
        writeln!(out, "A = {}", render_ratfun(&pv.a))?;
        writeln!(out, "G = {}", render_ratfun(&pv.g))?;
    }
    Ok(())
}

fn read_scheme(path: &Path) -> Result<Scheme, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    load_scheme(&text).map_err(|e| Failure::usage(e.to_string()))
}

fn io(e: std::io::Error) -> Failure {
    Failure { code: exit::INTERNAL, message: format!("output failed: {e}") }
}

fn derive(eq: &EquationArgs, json: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let fe = equation(eq)?;
    match derive_scheme(&fe, eq.i)? {
        Derivation::Scheme(s) => {
            print_scheme(&s, out).map_err(io)?;
            if let Some(path) = json {
                fs::write(path, save_scheme(&s))
                    .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
                writeln!(out, "wrote {}", path.display()).map_err(io)?;
            }
            Ok(exit::OK)
        }
        Derivation::NoMiracle(nm) => {
            writeln!(out, "FAIL: no miracle").map_err(io)?;
            writeln!(out, "polynomial part = {}", nm.polynomial_part).map_err(io)?;
            writeln!(out, "proper part = {}", render_ratfun(&nm.proper_part)).map_err(io)?;
            Ok(exit::NO_MIRACLE)
        }
    }
}

fn coeff(path: Option<&Path>, eq: &OptionalEquationArgs, n: u64, out: &mut dyn Write) -> Outcome {
    if n > i64::MAX as u64 {
        return Err(Failure::usage(format!("--n {n} exceeds 2^63 - 1")));
    }
    let scheme = match path {
        Some(p) => read_scheme(p)?,
        None => derive_required(&required(eq)?)?.1,
    };
    let start = Instant::now();
    let value = DigitEvaluator::new(&scheme).coeff(n);
    let elapsed = start.elapsed();
    writeln!(out, "f_{}({n}) = {value} (mod {})", scheme.i(), scheme.m()).map_err(io)?;
    writeln!(out, "elapsed: {:.6} s", elapsed.as_secs_f64()).map_err(io)?;
    Ok(exit::OK)
}

fn verify(path: Option<&Path>, eq: &OptionalEquationArgs, count: usize, out: &mut dyn Write) -> Outcome {
    let (fe, scheme) = match path {
        Some(p) => {
            let scheme = read_scheme(p)?;
            let pv = scheme.provenance().ok_or_else(|| {
                Failure::usage("scheme file has no provenance; cannot rebuild the equation")
            })?;
            let args = EquationArgs {
                m: scheme.m(),
                i: scheme.i(),
                s: pv.s.clone(),
                r: pv.r.clone(),
                f0: pv.f0.as_ref().map(Rat::to_string),
            };
            (equation(&args)?, scheme)
        }
        None => derive_required(&required(eq)?)?,
    };
    let report = verify_scheme(&fe, scheme.i(), &scheme, count)?;
    writeln!(out, "{}/{} match", report.matched, report.n).map_err(io)?;
    match report.first_mismatch {
        None => Ok(exit::OK),
        Some(mm) => {
            writeln!(
                out,
                "first mismatch at n = {}: oracle {}, scheme {}",
                mm.index, mm.expected, mm.got
            )
            .map_err(io)?;
            Ok(exit::MISMATCH)
        }
    }
}

#[derive(Serialize)]
struct ScanRecord {
    m: String,
    i: Option<String>,
    verdict: String,
    scheme: Option<SchemeFile>,
    check: Option<String>,
    proper_part: Option<String>,
    error: Option<String>,
}

#[allow(clippy::too_many_arguments)]
fn scan(
    m_from: usize,
    m_to: usize,
    s: String,
    r: String,
    f0: Option<String>,
    i: &str,
    count: usize,
    json: bool,
    exec: Execution,
    out: &mut dyn Write,
) -> Outcome {
    let req = ScanRequest {
        s,
        r,
        f0: parse_f0(f0.as_deref())?,
        m_from,
        m_to,
        sections: SectionSelect::parse(i),
        check_n: count,
    };
    let cells = scan_grid(&req, exec).map_err(|e| Failure::usage(e.to_string()))?;
    let check_text = |c: &Option<mahler_core::VerificationReport>| {
        c.as_ref().map(|r| format!("{}/{}", r.matched, r.n))
    };
    if json {
        let records: Vec<ScanRecord> = cells
            .iter()
            .map(|c| {
                let mut rec = ScanRecord {
                    m: c.m.to_string(),
                    i: c.i.map(|i| i.to_string()),
                    verdict: c.verdict().to_string(),
                    scheme: None,
                    check: None,
                    proper_part: None,
                    error: None,
                };
                match &c.outcome {
                    CellOutcome::Miracle { scheme, check } => {
                        rec.scheme = Some(SchemeFile::from_scheme(scheme));
                        rec.check = check_text(check);
                    }
                    CellOutcome::NoMiracle { proper_part } => rec.proper_part = Some(proper_part.clone()),
                    CellOutcome::Failed(e) => rec.error = Some(e.to_string()),
                }
                rec
            })
            .collect();
        let text = serde_json::to_string_pretty(&records).expect("strings serialize");
        writeln!(out, "{text}").map_err(io)?;
        return Ok(exit::OK);
    }
    writeln!(out, "{:>4} {:>4}  {:<22} {:<10} P", "m", "i", "verdict", "check").map_err(io)?;
    for c in &cells {
        let i = c.i.map_or("-".to_string(), |i| i.to_string());
        let (check, detail) = match &c.outcome {
            CellOutcome::Miracle { scheme, check } => (
                check_text(check).unwrap_or_else(|| "-".into()),
                render_residues(scheme.p()),
            ),
            CellOutcome::NoMiracle { proper_part } => ("-".into(), format!("proper part {proper_part}")),
            CellOutcome::Failed(e) => ("-".into(), e.to_string()),
        };
        writeln!(out, "{:>4} {:>4}  {:<22} {:<10} {}", c.m, i, c.verdict(), check, detail).map_err(io)?;
    }
    Ok(exit::OK)
}

fn known(label: KnownLabel, m: usize, out: &mut dyn Write) -> Outcome {
    let k = known_scheme(label, m)?;
    let (fe, i) = mahler_core::known::fixture(label, m)?;
    writeln!(out, "family {label}, m = {m}, section i = {i}").map_err(io)?;
    writeln!(out, "S = {}, R = {}", fe.s_text(), fe.r_text()).map_err(io)?;
    let derived = derive_scheme(&fe, i)?;
    let ok = match (&k.scheme, &derived) {
        (Some((e, p)), Derivation::Scheme(s)) => {
            writeln!(out, "E = {}", k.e_text).map_err(io)?;
            writeln!(out, "P = {}", render_residues(p)).map_err(io)?;
            let same = s.e() == e && s.p() == p.as_slice();
            if !same {
                writeln!(out, "derived E = {}, P = {}", render_e(s.e()), render_residues(s.p()))
                    .map_err(io)?;
            }
            same
        }
        (None, Derivation::NoMiracle(_)) => {
            writeln!(out, "no miracle (m ≡ 2 mod 4)").map_err(io)?;
            true
        }
        (None, Derivation::Scheme(s)) => {
            writeln!(out, "no miracle expected, but derived P = {}", render_residues(s.p())).map_err(io)?;
            false
        }
        (Some((_, p)), Derivation::NoMiracle(_)) => {
            writeln!(out, "P = {}; derivation found no miracle", render_residues(p)).map_err(io)?;
            false
        }
    };
    if ok {
        writeln!(out, "OK").map_err(io)?;
        Ok(exit::OK)
    } else {
        writeln!(out, "MISMATCH").map_err(io)?;
        Ok(exit::MISMATCH)
    }
}
