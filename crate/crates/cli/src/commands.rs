use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use semialg_core::conic::{conic_decompose, linear_nns, newton_halved_lattice, ConicOutcome, LinearNns};
use semialg_core::lasserre::{
    build_relaxation, emit_sdpa, find_module_cert, lower_bound_bisect, verify_module_membership, BisectSettings,
    ModuleCertJson,
};
use semialg_core::quadform::{diagonalize, inertia, is_psd, signature_descartes};
use semialg_core::rootcount::{
    count_complex_distinct, count_real_roots, count_real_with_signs, decide_strict_system, is_real_rooted,
    positive_root_count_bound, sign_changes,
};
use semialg_core::sos::{cassels_descent, find_gram, verify_gram, CertJson, GramJson, Outcome, SosCert};
use semialg_core::{Error, MPoly, Rat};

use crate::input;

pub const OK: i32 = 0;
pub const NEGATIVE: i32 = 1;
pub const INPUT_ERROR: i32 = 2;
pub const UNKNOWN: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "semialg", version, about = "Exact real algebra over the rationals")]
struct Cli {
    /// Print a JSON object instead of the plain text summary.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct PolyArg {
    /// Polynomial text, `@file` or `-` for stdin.
    #[arg(long, short = 'p', allow_hyphen_values = true)]
    poly: String,
}

#[derive(Args, Debug)]
struct MatrixArg {
    /// Rows separated by `;`, entries by `,` (or `@file`).
    #[arg(long, short = 'm', allow_hyphen_values = true)]
    matrix: String,
}

#[derive(Args, Debug)]
struct SystemArgs {
    /// Number of variables.
    #[arg(short = 'n', long)]
    nvars: usize,
    /// Relaxation degree.
    #[arg(short = 'd', long)]
    degree: u32,
    /// Constraint `g >= 0`; repeatable.
    #[arg(short = 'g', long = "constraint", allow_hyphen_values = true)]
    gs: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Real and distinct complex roots of a univariate polynomial.
    CountRoots(PolyArg),
    /// Real roots at which every side condition is positive.
    CountWithSigns {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(short = 'g', long = "condition", allow_hyphen_values = true)]
        gs: Vec<String>,
    },
    /// Whether some real x makes every g_i(x) positive.
    DecideStrict {
        #[arg(short = 'g', long = "condition", required = true, allow_hyphen_values = true)]
        gs: Vec<String>,
    },
    /// Sign changes and the positive-root bound.
    Descartes(PolyArg),
    /// Signature and rank of a symmetric matrix.
    Signature(MatrixArg),
    /// Congruence diagonalization M = P^T D P.
    Diagonalize(MatrixArg),
    /// Positive semidefiniteness.
    PsdCheck(MatrixArg),
    /// Conic combination of vectors, or a separating functional.
    Conic {
        /// Generators: rows separated by `;`.
        #[arg(long, short = 'e', allow_hyphen_values = true)]
        vectors: String,
        /// Target vector, comma separated.
        #[arg(long, short = 'x', allow_hyphen_values = true)]
        point: String,
    },
    /// Nonnegativity of an affine-linear f on a polyhedron.
    LinNns {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(short = 'g', long = "constraint", allow_hyphen_values = true)]
        ls: Vec<String>,
        #[arg(short = 'n', long)]
        nvars: Option<usize>,
    },
    /// Lattice points of half the Newton polytope.
    Newton {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(short = 'n', long)]
        nvars: Option<usize>,
    },
    /// Sum-of-squares certificates.
    #[command(subcommand)]
    Sos(SosCommand),
    /// Denominator-free sum of squares from a rational one.
    Cassels {
        /// Comma-separated weights.
        #[arg(long, short = 'w', allow_hyphen_values = true)]
        weights: String,
        /// Numerators; repeatable, one per weight.
        #[arg(long = "numerator", short = 'f', allow_hyphen_values = true)]
        fs: Vec<String>,
        /// Common denominator.
        #[arg(long, short = 'q', allow_hyphen_values = true)]
        denominator: String,
    },
    /// Moment relaxations of truncated quadratic modules.
    #[command(subcommand)]
    Lasserre(LasserreCommand),
    /// Runs every line of a file as a separate invocation.
    Batch {
        /// One argument list per line; blank lines and `#` comments skipped.
        file: String,
        /// Worker threads (default: all cores).
        #[arg(long, short = 'j')]
        jobs: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum SosCommand {
    /// Searches for a Gram certificate.
    Find {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(short = 'n', long)]
        nvars: Option<usize>,
        /// Writes the certificate JSON here.
        #[arg(short = 'o', long)]
        output: Option<String>,
    },
    /// Checks a certificate JSON against a polynomial.
    Check {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(short = 'n', long)]
        nvars: Option<usize>,
        #[arg(long, short = 'c')]
        cert: String,
    },
}

#[derive(Subcommand, Debug)]
enum LasserreCommand {
    /// Writes the relaxation in sparse SDPA format.
    Build {
        #[command(flatten)]
        system: SystemArgs,
        /// Objective to minimize (default 0).
        #[arg(long)]
        objective: Option<String>,
        #[arg(short = 'o', long)]
        output: Option<String>,
    },
    /// Checks membership in the truncated quadratic module, searching for a
    /// certificate unless one is given.
    Check {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long, short = 'c')]
        cert: Option<String>,
        #[arg(short = 'o', long)]
        output: Option<String>,
    },
    /// Certified lower bound for min f by bisection.
    Bound {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long, short = 'k', default_value_t = 12)]
        iterations: usize,
        #[arg(long, allow_hyphen_values = true)]
        lo: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        hi: Option<String>,
        #[arg(short = 'o', long)]
        output: Option<String>,
    },
}

/// Everything one invocation produces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Reply {
    code: i32,
    text: String,
    json: Value,
}

impl Reply {
    fn new(code: i32, text: impl Into<String>, json: Value) -> Reply {
        Reply { code, text: text.into(), json }
    }
}

pub fn run(argv: &[String]) -> Output {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { INPUT_ERROR } else { OK };
            let text = e.render().to_string();
            return if code == OK {
                Output { code, stdout: text, stderr: String::new() }
            } else {
                Output { code, stdout: String::new(), stderr: text }
            };
        }
    };
    if let Command::Batch { file, jobs } = &cli.command {
        return batch(file, *jobs, cli.json);
    }
    match dispatch(cli.command) {
        Ok(r) => {
            let body = if cli.json { r.json.to_string() } else { r.text };
            Output { code: r.code, stdout: with_newline(body), stderr: String::new() }
        }
        Err(e) => {
            let stdout = if cli.json { with_newline(json!({ "error": e.to_string() }).to_string()) } else { String::new() };
            Output { code: INPUT_ERROR, stdout, stderr: format!("error: {e}\n") }
        }
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn batch(file: &str, jobs: Option<usize>, json: bool) -> Output {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => return Output { code: INPUT_ERROR, stdout: String::new(), stderr: format!("error: {file}: {e}\n") },
    };
    let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
    let work = || -> Vec<Output> {
        lines
            .par_iter()
            .map(|line| match shlex::split(line) {
                Some(mut args) if args.first().map(String::as_str) != Some("batch") => {
                    args.insert(0, "semialg".into());
                    if json && !args.iter().any(|a| a == "--json") {
                        args.push("--json".into());
                    }
                    run(&args)
                }
                Some(_) => Output { code: INPUT_ERROR, stdout: String::new(), stderr: "nested batch\n".into() },
                None => Output { code: INPUT_ERROR, stdout: String::new(), stderr: "unbalanced quotes\n".into() },
            })
            .collect()
    };
    let results = match jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(work),
            Err(e) => return Output { code: INPUT_ERROR, stdout: String::new(), stderr: format!("error: {e}\n") },
        },
        None => work(),
    };
    let code = results.iter().map(|r| r.code).max().unwrap_or(OK);
    let mut stdout = String::new();
    let mut stderr = String::new();
    for (i, r) in results.iter().enumerate() {
        if json {
            let body: Value = serde_json::from_str(r.stdout.trim()).unwrap_or(Value::Null);
            stdout.push_str(&json!({ "index": i, "exit": r.code, "result": body }).to_string());
            stdout.push('\n');
        } else {
            stdout.push_str(&format!("[{i}] exit={}\n{}", r.code, r.stdout));
        }
        if !r.stderr.is_empty() {
            stderr.push_str(&format!("[{i}] {}", r.stderr));
        }
    }
    Output { code, stdout, stderr }
}

fn rats_json(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(|r| Value::String(r.to_string())).collect())
}

fn rats_text(v: &[Rat]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn squares_text(c: &SosCert) -> String {
    c.terms().iter().map(|t| format!("{} * ({})^2", t.weight, t.poly)).collect::<Vec<_>>().join("\n")
}

fn write_file(path: &Option<String>, contents: &str) -> Result<(), Error> {
    if let Some(p) = path {
        std::fs::write(p, contents).map_err(|e| Error::Input(format!("{p}: {e}")))?;
    }
    Ok(())
}

fn dispatch(cmd: Command) -> Result<Reply, Error> {
    match cmd {
        Command::CountRoots(p) => {
            let f = input::upoly(&p.poly)?;
            let (real, complex) = (count_real_roots(&f)?, count_complex_distinct(&f)?);
            Ok(Reply::new(
                OK,
                format!("real={real} complex_distinct={complex}"),
                json!({ "real": real, "complex_distinct": complex }),
            ))
        }
        Command::CountWithSigns { poly, gs } => {
            let f = input::upoly(&poly.poly)?;
            let gs = gs.iter().map(|g| input::upoly(g)).collect::<Result<Vec<_>, _>>()?;
            let count = count_real_with_signs(&f, &gs)?;
            Ok(Reply::new(OK, format!("count={count}"), json!({ "count": count })))
        }
        Command::DecideStrict { gs } => {
            let gs = gs.iter().map(|g| input::upoly(g)).collect::<Result<Vec<_>, _>>()?;
            let sat = decide_strict_system(&gs)?;
            let word = if sat { "satisfiable" } else { "unsatisfiable" };
            Ok(Reply::new(if sat { OK } else { NEGATIVE }, word, json!({ "satisfiable": sat })))
        }
        Command::Descartes(p) => {
            let f = input::upoly(&p.poly)?;
            let (bound, parity) = positive_root_count_bound(&f)?;
            let neg = sign_changes(&f.compose_neg())?;
            let real_rooted = is_real_rooted(&f)?;
            let mut text = format!("sign_changes={bound} parity={parity} negative_sign_changes={neg}");
            let mut j = json!({ "sign_changes": bound, "parity": parity, "negative_sign_changes": neg, "real_rooted": real_rooted });
            if real_rooted {
                text.push_str(&format!(" positive_roots={bound}"));
                j["positive_roots"] = json!(bound);
            }
            Ok(Reply::new(OK, text, j))
        }
        Command::Signature(m) => {
            let s = input::sym_matrix(&m.matrix)?;
            let i = inertia(&s);
            let sig = i.positive as i64 - i.negative as i64;
            debug_assert_eq!(sig, signature_descartes(&s));
            let rank = i.positive + i.negative;
            Ok(Reply::new(
                OK,
                format!("signature={sig} rank={rank} positive={} negative={} zero={}", i.positive, i.negative, i.zero),
                json!({ "signature": sig, "rank": rank, "positive": i.positive, "negative": i.negative, "zero": i.zero }),
            ))
        }
        Command::Diagonalize(m) => {
            let s = input::sym_matrix(&m.matrix)?;
            let dc = diagonalize(&s);
            let p_rows: Vec<Vec<Rat>> = (0..dc.p.rows()).map(|r| dc.p.row(r).to_vec()).collect();
            let p_text = p_rows.iter().map(|r| rats_text(r)).collect::<Vec<_>>().join(";");
            Ok(Reply::new(
                OK,
                format!("D={}\nP={}", rats_text(&dc.d), p_text),
                json!({ "d": rats_json(&dc.d), "p": p_rows.iter().map(|r| rats_json(r)).collect::<Vec<_>>() }),
            ))
        }
        Command::PsdCheck(m) => {
            let s = input::sym_matrix(&m.matrix)?;
            let psd = is_psd(&s);
            Ok(Reply::new(if psd { OK } else { NEGATIVE }, if psd { "psd" } else { "not-psd" }, json!({ "psd": psd })))
        }
        Command::Conic { vectors, point } => {
            let e = input::rows(&vectors)?;
            let x = input::vector(&input::payload(&point)?)?;
            Ok(match conic_decompose(&e, &x)? {
                ConicOutcome::Member { basis, coeffs } => Reply::new(
                    OK,
                    format!(
                        "member basis={} coeffs={}",
                        basis.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
                        rats_text(&coeffs)
                    ),
                    json!({ "outcome": "member", "basis": basis, "coeffs": rats_json(&coeffs) }),
                ),
                ConicOutcome::Separated { functional, kernel } => Reply::new(
                    NEGATIVE,
                    format!("separated functional={}", rats_text(&functional)),
                    json!({ "outcome": "separated", "functional": rats_json(&functional), "kernel": kernel }),
                ),
                ConicOutcome::OutsideSpan { functional } => Reply::new(
                    NEGATIVE,
                    format!("outside-span functional={}", rats_text(&functional)),
                    json!({ "outcome": "outside-span", "functional": rats_json(&functional) }),
                ),
            })
        }
        Command::LinNns { poly, ls, nvars } => {
            let mut all = vec![poly.poly];
            all.extend(ls);
            let ps = input::polys(&all, nvars)?;
            let (f, ls) = (&ps[0], &ps[1..]);
            Ok(match linear_nns(f, ls)? {
                LinearNns::Certificate { lambda0, lambdas } => Reply::new(
                    OK,
                    format!("certificate lambda0={lambda0} lambdas={}", rats_text(&lambdas)),
                    json!({ "outcome": "certificate", "lambda0": lambda0.to_string(), "lambdas": rats_json(&lambdas) }),
                ),
                LinearNns::Witness(x) => Reply::new(
                    NEGATIVE,
                    format!("witness x={}", rats_text(&x)),
                    json!({ "outcome": "witness", "point": rats_json(&x) }),
                ),
                LinearNns::EmptySet { lambda0, lambdas } => Reply::new(
                    OK,
                    format!("empty-set lambda0={lambda0} lambdas={}", rats_text(&lambdas)),
                    json!({ "outcome": "empty-set", "lambda0": lambda0.to_string(), "lambdas": rats_json(&lambdas) }),
                ),
            })
        }
        Command::Newton { poly, nvars } => {
            let f = input::poly(&poly.poly, nvars)?;
            let pts = newton_halved_lattice(&f)?;
            let text = pts
                .iter()
                .map(|e| format!("({})", e.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
                .collect::<Vec<_>>()
                .join(" ");
            Ok(Reply::new(OK, text, json!({ "monomials": pts })))
        }
        Command::Sos(SosCommand::Find { poly, nvars, output }) => {
            let f = input::poly(&poly.poly, nvars)?;
            Ok(match find_gram(&f)? {
                Outcome::Certified(g) => {
                    let cert = serde_json::to_string_pretty(&GramJson::new(&f, &g.monomials, &g.gram)).expect("serializable");
                    write_file(&output, &cert)?;
                    let squares = g.squares();
                    Reply::new(
                        OK,
                        format!("certified\n{}", squares_text(&squares)),
                        json!({ "status": "certified", "certificate": serde_json::from_str::<Value>(&cert).expect("json"), "squares": squares.to_json() }),
                    )
                }
                Outcome::Infeasible(r) => Reply::new(
                    NEGATIVE,
                    format!("certified-infeasible\nreason: {r}"),
                    json!({ "status": "certified-infeasible", "reason": r.to_string() }),
                ),
                Outcome::Unknown(s) => {
                    Reply::new(UNKNOWN, format!("unknown\nreason: {s}"), json!({ "status": "unknown", "reason": s }))
                }
            })
        }
        Command::Sos(SosCommand::Check { poly, nvars, cert }) => {
            let f = input::poly(&poly.poly, nvars)?;
            let text = input::payload(&cert)?;
            let parsed: CertJson = serde_json::from_str(&text).map_err(|e| Error::Input(format!("certificate: {e}")))?;
            let verdict = match parsed {
                CertJson::Gram(g) => verify_gram(&f, &g.gram_matrix()?, &g.monomials),
                CertJson::Terms(t) => SosCert::from_json(&t, f.nvars())?.verify(&f),
            };
            Ok(match verdict {
                Ok(()) => Reply::new(OK, "valid", json!({ "valid": true })),
                Err(r) => Reply::new(NEGATIVE, format!("invalid: {r}"), json!({ "valid": false, "reason": r.to_string() })),
            })
        }
        Command::Cassels { weights, fs, denominator } => {
            let w = input::vector(&weights)?;
            let fs = fs.iter().map(|f| input::upoly(f)).collect::<Result<Vec<_>, _>>()?;
            let g = input::upoly(&denominator)?;
            let out = cassels_descent(&w, &fs, &g)?;
            let degs = out.denominator_degrees.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
            Ok(Reply::new(
                OK,
                format!("h={}\ndenominator_degrees={degs}\n{}", MPoly::from_upoly(&out.h, 1, 0), squares_text(&out.cert)),
                json!({ "h": MPoly::from_upoly(&out.h, 1, 0).to_string(), "denominator_degrees": out.denominator_degrees, "squares": out.cert.to_json() }),
            ))
        }
        Command::Lasserre(LasserreCommand::Build { system, objective, output }) => {
            let gs = input::polys(&system.gs, Some(system.nvars))?;
            let rel = build_relaxation(system.nvars, &gs, system.degree)?;
            let obj = match objective {
                Some(o) => input::poly(&o, Some(system.nvars))?,
                None => MPoly::zero(system.nvars),
            };
            let sdpa = emit_sdpa(&rel, &obj)?;
            let sizes = rel.block_sizes();
            let sizes_text = sizes.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
            let summary = format!("variables={} blocks={}", rel.num_vars(), sizes_text);
            let text = if output.is_some() {
                write_file(&output, &sdpa)?;
                summary
            } else {
                sdpa
            };
            Ok(Reply::new(OK, text, json!({ "variables": rel.num_vars(), "blocks": sizes })))
        }
        Command::Lasserre(LasserreCommand::Check { system, poly, cert, output }) => {
            let gs = input::polys(&system.gs, Some(system.nvars))?;
            let f = input::poly(&poly.poly, Some(system.nvars))?;
            let d = system.degree;
            if let Some(c) = cert {
                let parsed: ModuleCertJson = serde_json::from_str(&input::payload(&c)?)
                    .map_err(|e| Error::Input(format!("certificate: {e}")))?;
                let (_, _, cert) = parsed.decode(system.nvars)?;
                return Ok(match verify_module_membership(&f, &gs, d, &cert) {
                    Ok(()) => Reply::new(OK, "valid", json!({ "valid": true })),
                    Err(r) => Reply::new(NEGATIVE, format!("invalid: {r}"), json!({ "valid": false, "reason": r.to_string() })),
                });
            }
            Ok(match find_module_cert(&f, &gs, d)? {
                Outcome::Certified(c) => {
                    let j = ModuleCertJson::new(&f, &gs, d, &c);
                    write_file(&output, &serde_json::to_string_pretty(&j).expect("serializable"))?;
                    Reply::new(OK, "member", json!({ "status": "member", "certificate": j }))
                }
                Outcome::Infeasible(r) => Reply::new(
                    NEGATIVE,
                    format!("certified-non-member\nreason: {r}"),
                    json!({ "status": "certified-non-member", "reason": r.to_string() }),
                ),
                Outcome::Unknown(s) => {
                    Reply::new(UNKNOWN, format!("unknown\nreason: {s}"), json!({ "status": "unknown", "reason": s }))
                }
            })
        }
        Command::Lasserre(LasserreCommand::Bound { system, poly, iterations, lo, hi, output }) => {
            let gs = input::polys(&system.gs, Some(system.nvars))?;
            let f = input::poly(&poly.poly, Some(system.nvars))?;
            let bracket = match (lo, hi) {
                (Some(l), Some(h)) => Some((input::rat(&l)?, input::rat(&h)?)),
                (None, None) => None,
                _ => return Err(Error::Input("--lo and --hi must be given together".into())),
            };
            let d = system.degree;
            Ok(match lower_bound_bisect(&f, &gs, d, iterations, bracket, &BisectSettings::default())? {
                Outcome::Certified(b) => {
                    let certified = b.is_certified();
                    let mut j = json!({ "lo": b.lo.to_string(), "hi": b.hi.to_string(), "certified": certified });
                    if let Some(c) = &b.cert {
                        let shifted = &f - &MPoly::constant(f.nvars(), b.lo.clone());
                        let cj = ModuleCertJson::new(&shifted, &gs, d, c);
                        write_file(&output, &serde_json::to_string_pretty(&cj).expect("serializable"))?;
                        j["certificate"] = serde_json::to_value(&cj).expect("serializable");
                    }
                    Reply::new(
                        if certified { OK } else { UNKNOWN },
                        format!("lo={} hi={} certified={certified}", b.lo, b.hi),
                        j,
                    )
                }
                Outcome::Infeasible(r) => Reply::new(NEGATIVE, format!("infeasible\nreason: {r}"), json!({ "status": "infeasible" })),
                Outcome::Unknown(s) => {
                    Reply::new(UNKNOWN, format!("unknown\nreason: {s}"), json!({ "status": "unknown", "reason": s }))
                }
            })
        }
        Command::Batch { .. } => unreachable!("handled by run"),
    }
}
