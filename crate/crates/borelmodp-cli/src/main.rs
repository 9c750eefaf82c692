use std::process::ExitCode;
use std::str::FromStr;

use borelmodp::arith::{digit_profile, FieldConfig, PadicInt, DEFAULT_PREC_P};
use borelmodp::borel::{hecke_t_sym, s_generator, w_ln, BorelMat, InducedChar, SmoothChar, SymInducedElement, Window};
use borelmodp::phigamma::PGModule;
use borelmodp::seqspace::v_kn;
use borelmodp::series::GammaElement;
use borelmodp::suites::{self, Params, Record, Verdict, DEFAULT_SEED};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "borelmodp", version, about = "Verification suites and exact objects for mod-p Borel representations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a verification suite (or `all`) over a parameter grid
    Verify(VerifyArgs),
    /// Print one exact object
    Show(ShowArgs),
}

#[derive(Clone, Copy, Debug)]
struct WindowArg(Window);

impl FromStr for WindowArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').collect();
        let [l, m, n] = parts[..] else {
            return Err(format!("expected L,m,N, got {s:?}"));
        };
        let bad = |x: &str| format!("not a number: {x:?}");
        Ok(WindowArg(Window::new(
            l.parse().map_err(|_| bad(l))?,
            m.parse().map_err(|_| bad(m))?,
            n.parse().map_err(|_| bad(n))?,
        )))
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// suite name, see `--list`
    #[arg(required_unless_present = "list")]
    suite: Option<String>,
    /// list the suites and exit
    #[arg(long)]
    list: bool,
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<u32>>,
    /// explicit exponents; default is every primitive h
    #[arg(long, value_delimiter = ',')]
    h: Option<Vec<u64>>,
    /// X-precision of random series and stub layers
    #[arg(long)]
    prec: Option<i64>,
    /// oracle window L,m,N
    #[arg(long)]
    window: Option<WindowArg>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// write the JSON report here (`-` for stdout)
    #[arg(long)]
    json: Option<String>,
    /// include elapsed times in the JSON report
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Object {
    VKn,
    WLn,
    SGenerator,
    PgMatrices,
    HeckeImage,
    DigitProfile,
}

#[derive(Args)]
struct ShowArgs {
    object: Object,
    #[arg(long, default_value_t = 2)]
    p: u32,
    #[arg(long, default_value_t = 2)]
    n: u32,
    #[arg(long, default_value_t = 1)]
    h: u64,
    /// index of v_{k,n}
    #[arg(long, default_value_t = 0)]
    k: u64,
    /// index of w_{l,n}
    #[arg(long, default_value_t = 0)]
    l: u64,
    /// weight of Sym^r
    #[arg(long, default_value_t = 0)]
    r: usize,
    /// monomial x^(r-i) y^i
    #[arg(long, default_value_t = 0)]
    i: usize,
    /// chi = omega^m mu_lambda
    #[arg(long, default_value_t = 0)]
    m: i64,
    #[arg(long, default_value_t = 1)]
    lambda: i64,
    /// unit a of gamma_a for pg_matrices
    #[arg(long, default_value_t = 0)]
    a: i64,
    #[arg(long, default_value_t = 8)]
    prec: i64,
    #[arg(long)]
    json: bool,
}

#[derive(Serialize)]
struct JsonRecord {
    suite: String,
    params: serde_json::Map<String, serde_json::Value>,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<f64>,
}

#[derive(Serialize)]
struct Summary {
    pass: usize,
    fail: usize,
    skipped: usize,
}

#[derive(Serialize)]
struct Report {
    schema: u32,
    suite: String,
    seed: u64,
    records: Vec<JsonRecord>,
    summary: Summary,
}

fn json_record(r: &Record, timings: bool) -> JsonRecord {
    let params = r.params.iter().map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone()))).collect();
    let (verdict, reason) = match &r.verdict {
        Verdict::Pass => ("pass", None),
        Verdict::Fail => ("fail", None),
        Verdict::Skipped(why) => ("skipped", Some(why.clone())),
    };
    JsonRecord {
        suite: r.suite.clone(),
        params,
        verdict,
        reason,
        witness: r.witness.clone(),
        elapsed_ms: timings.then(|| r.elapsed.as_secs_f64() * 1e3),
    }
}

fn verify(args: VerifyArgs) -> ExitCode {
    if args.list {
        for s in suites::SUITES {
            println!("{s}");
        }
        println!("all");
        return ExitCode::SUCCESS;
    }
    let suite = args.suite.expect("clap enforces the suite");
    let params = Params {
        p: args.p,
        n: args.n,
        h: args.h,
        prec: args.prec,
        window: args.window.map(|w| w.0),
        trials: args.trials,
        seed: args.seed,
    };
    let records = match suites::run(&suite, &params) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("configuration error: {e}");
            return ExitCode::from(2);
        }
    };
    // with the report on stdout, the text lines go to stderr
    let to_stdout = args.json.as_deref() == Some("-");
    let say = |line: String| {
        if to_stdout {
            eprintln!("{line}");
        } else {
            println!("{line}");
        }
    };
    let mut summary = Summary { pass: 0, fail: 0, skipped: 0 };
    for r in &records {
        let ps: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let tag = match r.verdict {
            Verdict::Pass => {
                summary.pass += 1;
                "PASS"
            }
            Verdict::Fail => {
                summary.fail += 1;
                "FAIL"
            }
            Verdict::Skipped(_) => {
                summary.skipped += 1;
                "SKIP"
            }
        };
        say(format!("{tag} {} {} ({:.1} ms)", r.suite, ps.join(" "), r.elapsed.as_secs_f64() * 1e3));
        if let Some(w) = &r.witness {
            for line in w.lines() {
                say(format!("    {line}"));
            }
        }
        if let Verdict::Skipped(why) = &r.verdict {
            say(format!("    {why}"));
        }
    }
    say(format!("{} passed, {} failed, {} skipped", summary.pass, summary.fail, summary.skipped));
    let failed = summary.fail > 0;
    if let Some(path) = args.json {
        let report = Report {
            schema: 1,
            suite,
            seed: params.seed,
            records: records.iter().map(|r| json_record(r, args.timings)).collect(),
            summary,
        };
        let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
        let written = if path == "-" {
            print!("{text}");
            Ok(())
        } else {
            std::fs::write(&path, text)
        };
        if let Err(e) = written {
            eprintln!("cannot write {path}: {e}");
            return ExitCode::from(2);
        }
    }
    if failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn sym_dump(x: &SymInducedElement) -> String {
    let f = x.field();
    let mut s = String::new();
    for (v, c) in x.coeffs() {
        let cs: Vec<String> = c.iter().map(|&e| f.format(e)).collect();
        s.push_str(&format!("{} {} {}\n", v.delta, v.beta_string(), cs.join(",")));
    }
    s
}

fn show_text(args: &ShowArgs) -> borelmodp::Result<String> {
    let p = args.p;
    let f = FieldConfig::prime(p)?;
    let chi = SmoothChar::new(&f, args.m, f.from_int(args.lambda))?;
    Ok(match args.object {
        Object::VKn => format!("{:?}\n", v_kn(&f, args.k, args.n)?),
        Object::WLn => w_ln(args.l, args.n, &InducedChar::for_galois(&chi, args.h))?.dump(),
        Object::SGenerator => s_generator(args.h, args.n, &InducedChar::for_galois(&chi, args.h))?.dump(),
        Object::DigitProfile => {
            let d = digit_profile(args.h, args.n, p)?;
            let i: Vec<String> = d.i.iter().map(|x| x.to_string()).collect();
            let hk: Vec<String> = d.hk.iter().map(|x| x.to_string()).collect();
            format!("i=({}), hk=({})\n", i.join(","), hk.join(","))
        }
        Object::PgMatrices => {
            let pgm = PGModule::new(&f, args.n, args.h, chi)?;
            let a = if args.a == 0 { 1 + p as i64 } else { args.a };
            let g = GammaElement::new(PadicInt::from_i64(a, p, DEFAULT_PREC_P))?;
            pgm.matrices_text(&g, args.prec)?
        }
        Object::HeckeImage => {
            let x = SymInducedElement::monomial(&f, args.r, &BorelMat::identity(p), args.i)?;
            sym_dump(&hecke_t_sym(&x)?)
        }
    })
}

fn show(args: ShowArgs) -> ExitCode {
    match show_text(&args) {
        Ok(text) => {
            if args.json {
                let v = serde_json::json!({
                    "schema": 1,
                    "object": args.object.to_possible_value().expect("named").get_name(),
                    "lines": text.lines().collect::<Vec<_>>(),
                });
                println!("{}", serde_json::to_string_pretty(&v).expect("serializes"));
            } else {
                print!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    match Cli::parse().cmd {
        Cmd::Verify(a) => verify(a),
        Cmd::Show(a) => show(a),
    }
}
