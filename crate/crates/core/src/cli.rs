//! Command-line front end. `run` is the whole program minus process setup,
//! so tests can drive it with in-memory streams.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::json;

use crate::approx::{decimal, pade, product_series, rational_approximations, valuation, IntSeries};
use crate::classify::{classify, count_apwenian, scan_family, Family};
use crate::criteria::{check_01, check_pm};
use crate::error::{Error, Result};
use crate::hankel::{hankel_exact, hankel_gf2, pm_profile, ProfilePath};
use crate::jfraction::{format_rational, jfrac_expand_gf2, jfrac_expand_rational};
use crate::sequences::{
    conjugate, fixed_point, named_sequence, project_to_01, sturmian_characteristic, Alphabet,
    BitSeq, NamedSequence, Sequence, SignSeq, SturmianSpec, Substitution,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "apwenian",
    version,
    about = "Apwenian sequences, Hankel determinants mod 2 and substitutions"
)]
pub struct Cli {
    /// Output format; defaults to text on a terminal and JSON lines otherwise
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for scans
    #[arg(long, global = true, env = "APW_THREADS")]
    threads: Option<usize>,
    /// Write output to FILE instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<std::path::PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AlphabetArg {
    #[value(name = "01")]
    ZeroOne,
    #[value(name = "pm")]
    PlusMinus,
}

impl From<AlphabetArg> for Alphabet {
    fn from(a: AlphabetArg) -> Self {
        match a {
            AlphabetArg::ZeroOne => Alphabet::ZeroOne,
            AlphabetArg::PlusMinus => Alphabet::PlusMinus,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a sequence prefix
    Gen(GenArgs),
    /// Check the apwenian recurrence criterion on a prefix
    Check(CheckArgs),
    /// Hankel determinants of a prefix
    Hankel(HankelArgs),
    /// J-fraction expansion of a prefix
    Jfrac(JfracArgs),
    /// Cycle structure and apwenian count for an odd length
    Classify(ClassifyArgs),
    /// Table of apwenian counts for p = 2..=pmax
    Count(CountArgs),
    /// Exhaustive scan of a substitution family
    Scan(ScanArgs),
    /// Padé approximant of a product series or a given sequence
    Pade(PadeArgs),
    /// Rational approximations of the product at z = 1/b
    Approx(ApproxArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GenFamily {
    ThueMorsePm,
    ThueMorse01,
    PeriodDoubling,
    DoubledThueMorse,
    CodedMorphism,
    /// fixed point of --image1/--image0
    Substitution,
    /// fixed point of the type II substitution given by --v
    Type2,
    /// characteristic Sturmian word given by --directives
    Sturmian,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: GenFamily,
    #[arg(long)]
    len: usize,
    /// Alphabet of --image1/--image0
    #[arg(long, value_enum, default_value = "01")]
    alphabet: AlphabetArg,
    #[arg(long)]
    image1: Option<String>,
    #[arg(long)]
    image0: Option<String>,
    /// Comma-separated ±1 values, e.g. 1,1,-1
    #[arg(long, allow_hyphen_values = true)]
    v: Option<String>,
    /// Comma-separated directives, e.g. 1,1,1
    #[arg(long)]
    directives: Option<String>,
    /// Map a ±1 result to 0-1 by c_i = (d_i - d_{i+2})/2 mod 2
    #[arg(long)]
    project: bool,
    /// Flip every symbol of a 0-1 result
    #[arg(long)]
    conjugate: bool,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long, value_enum)]
    alphabet: AlphabetArg,
    /// Sequence text; read from stdin when absent or "-"
    seq: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum HankelMode {
    Gf2,
    Exact,
    PmProfile,
}

#[derive(Args, Debug)]
struct HankelArgs {
    #[arg(long, value_enum)]
    mode: HankelMode,
    /// Largest order
    #[arg(long)]
    n: usize,
    /// Use exact determinants for the pm-profile instead of the GF(2) reduction
    #[arg(long)]
    exact_path: bool,
    /// Sequence as 0/1, +/- or comma-separated integers; stdin when absent
    #[arg(allow_hyphen_values = true)]
    seq: Option<String>,
}

#[derive(Args, Debug)]
struct JfracArgs {
    #[arg(long)]
    depth: usize,
    /// Expand over the rationals instead of GF(2)
    #[arg(long)]
    rational: bool,
    #[arg(allow_hyphen_values = true)]
    seq: Option<String>,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long)]
    p: u64,
    /// Also list every apwenian v-vector
    #[arg(long)]
    enumerate: bool,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[arg(long)]
    pmax: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    #[value(name = "type1_01")]
    Type1,
    #[value(name = "type2_pm")]
    Type2,
    #[value(name = "general_pm")]
    General,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Type1 => Family::Type1_01,
            FamilyArg::Type2 => Family::Type2Pm,
            FamilyArg::General => Family::GeneralPm,
        }
    }
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 512)]
    depth: usize,
}

#[derive(Args, Debug)]
struct PadeArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    p: usize,
    #[arg(long, allow_hyphen_values = true, default_value = "1,-1")]
    v: String,
    /// Use this sequence instead of the product series
    #[arg(long, allow_hyphen_values = true)]
    seq: Option<String>,
}

#[derive(Args, Debug)]
struct ApproxArgs {
    #[arg(long)]
    b: u64,
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    #[arg(long, default_value_t = 2)]
    p: usize,
    #[arg(long, allow_hyphen_values = true, default_value = "1,-1")]
    v: String,
}

/// Outcome of a subcommand: rendered output plus whether a criterion failed.
struct Rendered {
    text: String,
    failed: bool,
}

impl Rendered {
    fn ok(text: String) -> Self {
        Rendered {
            text,
            failed: false,
        }
    }
}

fn parse_ints(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .enumerate()
        .map(|(i, tok)| {
            tok.trim().parse::<i64>().map_err(|e| Error::Parse {
                index: i,
                message: format!("{tok:?}: {e}"),
            })
        })
        .collect()
}

fn parse_signs(s: &str) -> Result<Vec<i8>> {
    parse_ints(s)?
        .into_iter()
        .enumerate()
        .map(|(i, x)| match x {
            1 => Ok(1),
            -1 => Ok(-1),
            _ => Err(Error::Parse {
                index: i,
                message: format!("expected 1 or -1, got {x}"),
            }),
        })
        .collect()
}

enum Input {
    Bits(BitSeq),
    Signs(SignSeq),
    Ints(Vec<BigInt>),
}

fn parse_input(text: &str) -> Result<Input> {
    let t = text.trim();
    if t.contains(',') {
        return Ok(Input::Ints(
            parse_ints(t)?.into_iter().map(BigInt::from).collect(),
        ));
    }
    match t.chars().next() {
        Some('+') | Some('-') => Ok(Input::Signs(t.parse()?)),
        _ => Ok(Input::Bits(t.parse()?)),
    }
}

fn read_seq(arg: Option<String>, stdin: &mut dyn Read) -> Result<String> {
    match arg {
        Some(s) if s != "-" => Ok(s),
        _ => {
            let mut buf = String::new();
            stdin
                .read_to_string(&mut buf)
                .map_err(|e| Error::InvalidArgument(format!("reading stdin: {e}")))?;
            Ok(buf)
        }
    }
}

fn line(out: &mut String, s: impl std::fmt::Display) {
    let _ = writeln!(out, "{s}");
}

fn cmd_gen(a: GenArgs) -> Result<Rendered> {
    let named = |n: NamedSequence| Ok(named_sequence(n, a.len));
    let mut seq = match a.family {
        GenFamily::ThueMorsePm => named(NamedSequence::ThueMorsePm)?,
        GenFamily::ThueMorse01 => named(NamedSequence::ThueMorse01)?,
        GenFamily::PeriodDoubling => named(NamedSequence::PeriodDoubling)?,
        GenFamily::DoubledThueMorse => named(NamedSequence::DoubledThueMorse)?,
        GenFamily::CodedMorphism => named(NamedSequence::CodedMorphism)?,
        GenFamily::Substitution => {
            let (Some(i1), Some(i0)) = (&a.image1, &a.image0) else {
                return Err(Error::InvalidArgument(
                    "--image1 and --image0 are required".into(),
                ));
            };
            fixed_point(&Substitution::parse(a.alphabet.into(), i1, i0)?, a.len)?
        }
        GenFamily::Type2 => {
            let v =
                a.v.as_deref()
                    .ok_or_else(|| Error::InvalidArgument("--v is required".into()))?;
            fixed_point(&Substitution::type2(&parse_signs(v)?)?, a.len)?
        }
        GenFamily::Sturmian => {
            let d = a
                .directives
                .as_deref()
                .ok_or_else(|| Error::InvalidArgument("--directives is required".into()))?;
            Sequence::Binary(sturmian_characteristic(&d.parse::<SturmianSpec>()?, a.len)?)
        }
    };
    if a.project {
        let Sequence::Signed(d) = &seq else {
            return Err(Error::InvalidArgument(
                "--project needs a ±1 sequence".into(),
            ));
        };
        seq = Sequence::Binary(project_to_01(d)?);
    }
    if a.conjugate {
        let Sequence::Binary(c) = &seq else {
            return Err(Error::InvalidArgument(
                "--conjugate needs a 0-1 sequence".into(),
            ));
        };
        seq = Sequence::Binary(conjugate(c));
    }
    Ok(Rendered::ok(seq.to_string()))
}

fn cmd_check(a: CheckArgs, fmt: Format, stdin: &mut dyn Read) -> Result<Rendered> {
    let text = read_seq(a.seq, stdin)?;
    let alphabet: Alphabet = a.alphabet.into();
    let report = match alphabet {
        Alphabet::ZeroOne => check_01(&text.trim().parse()?)?,
        Alphabet::PlusMinus => check_pm(&text.trim().parse()?)?,
    };
    let text = match fmt {
        Format::Text => report.to_string(),
        Format::Json => json!({
            "alphabet": alphabet.tag(),
            "passed": report.passed(),
            "checked_up_to": report.checked_up_to(),
            "violation": report.violation(),
        })
        .to_string(),
    };
    Ok(Rendered {
        text,
        failed: !report.passed(),
    })
}

fn cmd_hankel(a: HankelArgs, fmt: Format, stdin: &mut dyn Read) -> Result<Rendered> {
    let input = parse_input(&read_seq(a.seq, stdin)?)?;
    let mut out = String::new();
    match a.mode {
        HankelMode::PmProfile => {
            let Input::Signs(d) = input else {
                return Err(Error::InvalidArgument(
                    "pm-profile needs a ±1 sequence".into(),
                ));
            };
            let path = if a.exact_path {
                ProfilePath::Exact
            } else {
                ProfilePath::Fast
            };
            let prof = pm_profile(&d, a.n, path)?;
            match fmt {
                Format::Text => line(&mut out, &prof),
                Format::Json => line(
                    &mut out,
                    json!({"nmax": prof.nmax(), "profile": prof.to_string(), "first_zero": prof.first_zero()}),
                ),
            }
        }
        HankelMode::Gf2 | HankelMode::Exact => {
            for n in 1..=a.n {
                let value: String = match (&a.mode, &input) {
                    (HankelMode::Gf2, Input::Bits(c)) => hankel_gf2(c, n)?.to_string(),
                    (HankelMode::Gf2, _) => {
                        return Err(Error::InvalidArgument(
                            "gf2 mode needs a 0-1 sequence".into(),
                        ))
                    }
                    (_, Input::Bits(c)) => hankel_exact(c, n)?.to_string(),
                    (_, Input::Signs(d)) => hankel_exact(d, n)?.to_string(),
                    (_, Input::Ints(v)) => hankel_exact(v.as_slice(), n)?.to_string(),
                };
                match fmt {
                    Format::Text => line(&mut out, format!("{n}\t{value}")),
                    Format::Json => line(&mut out, json!({"n": n, "value": value})),
                }
            }
        }
    }
    Ok(Rendered::ok(out.trim_end().to_string()))
}

fn cmd_jfrac(a: JfracArgs, fmt: Format, stdin: &mut dyn Read) -> Result<Rendered> {
    let input = parse_input(&read_seq(a.seq, stdin)?)?;
    let mut out = String::new();
    if a.rational {
        let j = match &input {
            Input::Bits(c) => jfrac_expand_rational(c, a.depth)?,
            Input::Signs(d) => jfrac_expand_rational(d, a.depth)?,
            Input::Ints(v) => jfrac_expand_rational(v.as_slice(), a.depth)?,
        };
        for k in 0..j.v.len() {
            let (v, u) = (format_rational(&j.v[k]), format_rational(&j.u[k]));
            match fmt {
                Format::Text => line(&mut out, format!("{k}\tv={v}\tu={u}")),
                Format::Json => line(&mut out, json!({"k": k, "v": v, "u": u})),
            }
        }
    } else {
        let Input::Bits(c) = input else {
            return Err(Error::InvalidArgument(
                "GF(2) expansion needs a 0-1 sequence; use --rational otherwise".into(),
            ));
        };
        let j = jfrac_expand_gf2(&c, a.depth)?;
        match fmt {
            Format::Text => line(&mut out, &j),
            Format::Json => line(&mut out, json!({"depth": j.depth(), "u": j.to_string()})),
        }
    }
    Ok(Rendered::ok(out.trim_end().to_string()))
}

fn cmd_classify(a: ClassifyArgs, fmt: Format) -> Result<Rendered> {
    let r = classify(a.p, a.enumerate)?;
    let text = match fmt {
        Format::Json => serde_json::to_string(&r).map_err(|e| Error::Invariant(e.to_string()))?,
        Format::Text => {
            let mut out = String::new();
            let cycles = crate::classify::CycleDecomposition {
                p: r.p,
                cycles: r.cycles.clone(),
            };
            line(&mut out, format!("p              {}", r.p));
            line(&mut out, format!("mu             {}", r.mu));
            line(&mut out, format!("cycles         {cycles}"));
            line(&mut out, format!("k              {}", r.k));
            line(&mut out, format!("has_odd_cycle  {}", r.has_odd_cycle));
            line(&mut out, format!("n_p            {}", r.n_p));
            line(&mut out, format!("n_prime        {}", r.n_prime));
            for v in r.vectors.iter().flatten() {
                let items: Vec<String> = v.iter().map(|x| format!("{x:>2}")).collect();
                line(&mut out, format!("v              {}", items.join(" ")));
            }
            out.trim_end().to_string()
        }
    };
    Ok(Rendered::ok(text))
}

fn cmd_count(a: CountArgs, fmt: Format) -> Result<Rendered> {
    let mut out = String::new();
    for p in 2..=a.pmax {
        let n_p = count_apwenian(p)?;
        match fmt {
            Format::Text => line(&mut out, format!("{p:>4}  {n_p}")),
            Format::Json => {
                let mut rec = json!({"p": p, "n_p": u64::try_from(&n_p).ok()});
                if p % 2 == 1 {
                    rec["n_prime"] = json!(u64::try_from(&(n_p >> 1)).ok());
                }
                line(&mut out, rec)
            }
        }
    }
    Ok(Rendered::ok(out.trim_end().to_string()))
}

fn cmd_scan(a: ScanArgs, fmt: Format) -> Result<Rendered> {
    let r = scan_family(a.family.into(), a.p, a.depth)?;
    let text = match fmt {
        Format::Json => serde_json::to_string(&r).map_err(|e| Error::Invariant(e.to_string()))?,
        Format::Text => {
            let mut out = String::new();
            line(
                &mut out,
                format!(
                    "family {} p={} depth={} verify={} candidates={} survivors={} screen_only={}",
                    r.family,
                    r.p,
                    r.depth,
                    r.verify_depth,
                    r.candidates,
                    r.survivors.len(),
                    r.screen_only
                ),
            );
            for s in &r.survivors {
                line(
                    &mut out,
                    format!(
                        "{}  type2={} novel={} sha256={}",
                        s.substitution, s.type2, s.novel, s.prefix_hash
                    ),
                );
            }
            out.trim_end().to_string()
        }
    };
    Ok(Rendered::ok(text))
}

fn cmd_pade(a: PadeArgs, fmt: Format) -> Result<Rendered> {
    let f = match &a.seq {
        Some(s) => match parse_input(s)? {
            Input::Bits(c) => IntSeries::from_coeffs(c.iter().map(BigInt::from).collect()),
            Input::Signs(d) => IntSeries::from_coeffs(d.iter().map(BigInt::from).collect()),
            Input::Ints(v) => IntSeries::from_coeffs(v),
        },
        None => product_series(a.p, &parse_ints(&a.v)?, 2 * a.n + 1)?,
    };
    let pa = pade(&f, a.n)?;
    let err = pa.error_series(&f);
    let fmt_poly = |p: &Vec<num_rational::BigRational>| -> Vec<String> {
        p.iter().map(format_rational).collect()
    };
    let val = valuation(&err);
    let lead = val.map(|v| format_rational(&err[v]));
    let text = match fmt {
        Format::Json => json!({
            "n": pa.n,
            "P": fmt_poly(&pa.p),
            "Q": fmt_poly(&pa.q),
            "error_valuation": val,
            "error_leading": lead,
        })
        .to_string(),
        Format::Text => {
            let mut out = String::new();
            line(&mut out, format!("P  {}", fmt_poly(&pa.p).join(" ")));
            line(&mut out, format!("Q  {}", fmt_poly(&pa.q).join(" ")));
            match (val, lead) {
                (Some(v), Some(c)) => line(&mut out, format!("error  {c} z^{v} + ...")),
                _ => line(&mut out, format!("error  0 below z^{}", f.terms())),
            }
            out.trim_end().to_string()
        }
    };
    Ok(Rendered::ok(text))
}

fn cmd_approx(a: ApproxArgs, fmt: Format) -> Result<Rendered> {
    let run = rational_approximations(a.p, &parse_ints(&a.v)?, a.b, a.n_max)?;
    let mut out = String::new();
    match fmt {
        Format::Text => {
            line(&mut out, format!("# xi ~ {}", decimal(&run.xi, 20)));
            line(&mut out, "n\tr\ts\terr_log\texponent_estimate");
            for r in &run.records {
                let est = r
                    .exponent_estimate
                    .map_or_else(|| "NA".to_string(), |e| format!("{e:.6}"));
                line(
                    &mut out,
                    format!("{}\t{}\t{}\t{:.6}\t{est}", r.n, r.r, r.s, r.err_log),
                );
            }
        }
        Format::Json => {
            for r in &run.records {
                line(
                    &mut out,
                    serde_json::to_string(r).map_err(|e| Error::Invariant(e.to_string()))?,
                );
            }
        }
    }
    Ok(Rendered::ok(out.trim_end().to_string()))
}

fn dispatch(
    cmd: Command,
    fmt: Format,
    stdin: &mut dyn Read,
    pool: &rayon::ThreadPool,
) -> Result<Rendered> {
    match cmd {
        Command::Gen(a) => cmd_gen(a),
        Command::Check(a) => cmd_check(a, fmt, stdin),
        Command::Hankel(a) => cmd_hankel(a, fmt, stdin),
        Command::Jfrac(a) => cmd_jfrac(a, fmt, stdin),
        Command::Classify(a) => cmd_classify(a, fmt),
        Command::Count(a) => cmd_count(a, fmt),
        Command::Scan(a) => pool.install(|| cmd_scan(a, fmt)),
        Command::Pade(a) => cmd_pade(a, fmt),
        Command::Approx(a) => cmd_approx(a, fmt),
    }
}

/// Runs the program on `args` (including the program name) and returns the
/// exit code. `stdout_is_terminal` selects the default output format.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
    stdout_is_terminal: bool,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(stdout, "{rendered}");
            } else {
                let _ = write!(stderr, "{rendered}");
            }
            return code;
        }
    };
    let fmt = cli
        .format
        .unwrap_or(if stdout_is_terminal && cli.out.is_none() {
            Format::Text
        } else {
            Format::Json
        });
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot start thread pool: {e}");
            return EXIT_INTERNAL;
        }
    };
    let result = dispatch(cli.command, fmt, stdin, &pool);
    match result {
        Ok(r) => {
            let mut text = r.text;
            text.push('\n');
            let written = match &cli.out {
                Some(path) => std::fs::write(path, text.as_bytes()),
                None => stdout.write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: writing output: {e}");
                return EXIT_INTERNAL;
            }
            if r.failed {
                EXIT_FAIL
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_internal() {
                EXIT_INTERNAL
            } else {
                EXIT_USAGE
            }
        }
    }
}
