use clap::{Args, Parser, Subcommand};
use kisin::components::{count_polynomial, format_polynomial};
use kisin::decorate::{decorate, render_moebius};
use kisin::expr::{eval, mentions_p};
use kisin::field::format_point;
use kisin::gene::{spaced, Symbols};
use kisin::params::realize_h;
use kisin::pipeline::{enumerate_abstract_genes, run_pipeline, Input, Options, Report, SCHEMA};
use kisin::{Error, Params, Result};
use num_bigint::{BigInt, BigUint};
use serde_json::{json, Value};
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "kisin", version, about = "Genes, Kisin varieties and genre strata of tame two-dimensional types")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// prime field over which points are enumerated
    #[arg(long, global = true, default_value_t = 5)]
    field: u64,
    /// maximal number of points (and oracle candidates) to enumerate
    #[arg(long, global = true, default_value_t = 1_000_000)]
    budget: u64,
    /// seed for sampled oracle runs
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// work from a symbol string such as "A,A,B,0|B,AB,0,A" instead of parameters
    #[arg(long = "abstract", global = true, value_name = "GENE")]
    abstract_gene: Option<String>,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args, Debug, Default)]
struct ParamArgs {
    /// the prime p
    #[arg(long, global = true)]
    p: Option<String>,
    /// residue degree f
    #[arg(long, global = true)]
    f: Option<String>,
    /// exponent h, as an integer or a polynomial in p
    #[arg(long, global = true, allow_hyphen_values = true)]
    h: Option<String>,
    /// comma-separated digits h_0,…,h_{f-1}, solved for h
    #[arg(long, global = true, conflicts_with = "h")]
    digits: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    gamma: Option<String>,
    #[arg(long = "gamma-prime", global = true, allow_hyphen_values = true)]
    gamma_prime: Option<String>,
    #[arg(long, global = true, default_value = "1")]
    theta: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// α-sequences, symbols and structural checks
    Gene,
    /// equations, reduced diagram, factors and points
    Variety,
    /// irreducible components, dimension and connectivity
    Components {
        /// print the component-count polynomial of an alternating chain of this length
        #[arg(long, value_name = "LEN")]
        polynomial: Option<usize>,
    },
    /// genre census and ring descriptors
    Strata,
    /// compare the equations with the lattice integrality test
    Oracle,
    /// list abstract genes up to symmetry
    /// (the number of columns is given by --f)
    Enumerate {
        /// keep genes with a (0,0) couple
        #[arg(long)]
        with_zero_zero: bool,
        #[arg(long, default_value_t = 6)]
        cap: usize,
    },
    /// draw the decorated gene on its band
    Render,
}

fn required<'a>(v: &'a Option<String>, name: &str) -> Result<&'a str> {
    v.as_deref().ok_or_else(|| Error::Parse(format!("missing --{name}")))
}

fn parse_params(a: &ParamArgs) -> Result<Params> {
    let p_src = required(&a.p, "p")?;
    if mentions_p(p_src) {
        return Err(Error::Parse("--p cannot refer to p".into()));
    }
    let p = eval(p_src, &BigInt::from(0))?;
    let p = BigUint::try_from(p).map_err(|_| Error::Parse("p must be positive".into()))?;
    let pi = BigInt::from(p.clone());
    let f = eval(required(&a.f, "f")?, &pi)?;
    let f = usize::try_from(f).map_err(|_| Error::Parse("f must be a small positive integer".into()))?;
    let gamma = eval(required(&a.gamma, "gamma")?, &pi)?;
    let gamma_prime = eval(required(&a.gamma_prime, "gamma-prime")?, &pi)?;
    let h = match (&a.h, &a.digits) {
        (Some(h), _) => eval(h, &pi)?,
        (None, Some(d)) => {
            let digits = d
                .split(',')
                .map(|x| eval(x.trim(), &pi).and_then(|v| BigUint::try_from(v).map_err(|_| Error::Parse("negative digit".into()))))
                .collect::<Result<Vec<_>>>()?;
            BigInt::from(realize_h(&digits, &gamma, &gamma_prime, &p, f)?)
        }
        (None, None) => return Err(Error::Parse("missing --h or --digits".into())),
    };
    let theta = eval(&a.theta, &pi)?;
    let theta = u64::try_from(theta).map_err(|_| Error::Parse("theta must be a nonnegative machine integer".into()))?;
    Params::new(&p, f, &h, &gamma, &gamma_prime, theta)
}

fn input(cli: &Cli) -> Result<Input> {
    match &cli.abstract_gene {
        Some(s) => Ok(Input::Abstract(Symbols::parse(s)?)),
        None => Ok(Input::Params(parse_params(&cli.params)?)),
    }
}

fn options(cli: &Cli) -> Options {
    Options { field: cli.field, budget: cli.budget, seed: cli.seed, ..Options::default() }
}

fn pick(report: &Value, keys: &[&str]) -> Value {
    let mut m = serde_json::Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    for k in keys {
        if let Some(v) = report.get(*k) {
            m.insert((*k).into(), v.clone());
        }
    }
    Value::Object(m)
}

struct Output {
    json: Value,
    text: String,
    code: u8,
}

fn text_gene(r: &Report) -> String {
    let mut t = format!("gene  {}\n", spaced(&r.symbols));
    if let Some(g) = &r.gene {
        let pr = &g.params;
        t += &format!("q = {}  e = {}  nu = {}  h = {}\n", pr.q, pr.e, pr.nu, pr.h);
        for i in 0..2 * pr.f {
            t += &format!("  alpha_{i:<3} {:>12}   alpha'_{i:<3} {:>12}   {}\n", g.alpha[i], g.alpha_prime[i], g.symbols.at(i));
        }
    }
    for c in &r.checks {
        t += &format!("  [{}] {}\n", if c.passed { "ok" } else { "FAIL" }, c.name);
    }
    t
}

fn text_variety(r: &Report) -> String {
    let mut t = format!("gene  {}\nequations:\n", spaced(&r.symbols));
    for e in &r.equations.equations {
        t += &format!("  {e}\n");
    }
    for (k, fv) in r.reduced.factors.iter().enumerate() {
        let o: String = fv.orientation.iter().map(|o| o.glyph()).collect();
        t += &format!("factor {k}: {} of length {} on columns {:?} {o}\n", fv.kind.as_str(), fv.len(), fv.columns());
    }
    if let Some(pts) = &r.points {
        t += &format!("{} points over F_{}\n", pts.len(), r.field);
        for p in pts.iter().take(20) {
            t += &format!("  {}\n", format_point(p));
        }
        if pts.len() > 20 {
            t += "  ...\n";
        }
    }
    t
}

fn text_components(r: &Report) -> String {
    let mut t = String::new();
    if r.empty {
        t += "empty variety\n";
    }
    for c in &r.components {
        t += &format!("  dim {}  {}\n", c.dimension, c.shape());
    }
    t += &format!("dimension {:?}, connected {:?}\n", r.dimension, r.connected);
    t
}

fn text_strata(r: &Report) -> String {
    let mut t = String::new();
    if let Some(c) = &r.census {
        for (k, n) in &c.strata {
            t += &format!("  {k:<30} {n}\n");
        }
    }
    for (k, c) in &r.candidates {
        match c {
            Ok(d) => t += &format!("factor {k} candidate: {} balls, annuli {:?}\n", d.balls, d.annuli),
            Err(e) => t += &format!("factor {k} candidate: none ({e})\n"),
        }
    }
    t
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Enumerate { with_zero_zero, cap } => {
            let f = eval(required(&cli.params.f, "f")?, &BigInt::from(0))?;
            let columns = usize::try_from(f).map_err(|_| Error::Parse("f must be a small positive integer".into()))?;
            let table = enumerate_abstract_genes(columns, *with_zero_zero, *cap)?;
            let mut text = String::new();
            for e in &table {
                text += &format!("{:<40} {:>3}  {}\n", spaced(&e.canonical), e.orbit_size, if e.empty { "empty".to_string() } else { e.shapes.join(" u ") });
            }
            let json = json!({"schema": SCHEMA, "f": columns, "entries": table.iter().map(|e| e.json()).collect::<Vec<_>>()});
            Ok(Output { json, text, code: 0 })
        }
        Command::Components { polynomial: Some(len) } => {
            let c = count_polynomial(*len);
            let json = json!({"schema": SCHEMA, "length": len, "polynomial": c.iter().map(|x| x.to_string()).collect::<Vec<_>>()});
            Ok(Output { json, text: format!("{}\n", format_polynomial(&c)), code: 0 })
        }
        Command::Render => {
            let s = match input(cli)? {
                Input::Abstract(s) => s,
                Input::Params(pr) => kisin::compute_gene(&pr)?.symbols,
            };
            let text = render_moebius(&s, &decorate(&s));
            let json = json!({"schema": SCHEMA, "gene": s.to_string(), "render": text});
            Ok(Output { json, text, code: 0 })
        }
        cmd => {
            let inp = input(cli)?;
            let mut opt = options(cli);
            opt.census = matches!(cmd, Command::Variety | Command::Strata | Command::Components { .. });
            opt.oracle = matches!(cmd, Command::Oracle);
            if opt.oracle && matches!(inp, Input::Abstract(_)) {
                return Err(Error::Parse("the oracle needs numeric parameters".into()));
            }
            let r = run_pipeline(&inp, &opt)?;
            let full = r.json();
            let (json, text, code) = match cmd {
                Command::Gene => (pick(&full, &["input", "params", "gene", "validation"]), text_gene(&r), 0),
                Command::Variety => (
                    pick(&full, &["input", "params", "gene", "decoration", "equations", "reduced", "factors", "point_count", "empty", "field"]),
                    text_variety(&r),
                    0,
                ),
                Command::Components { .. } => (
                    pick(&full, &["input", "gene", "factors", "components", "dimension", "connected", "empty"]),
                    text_components(&r),
                    0,
                ),
                Command::Strata => (pick(&full, &["input", "gene", "census", "points", "descriptors", "field"]), text_strata(&r), 0),
                Command::Oracle => {
                    let o = r.oracle.as_ref().expect("oracle requested");
                    let text = format!(
                        "{} candidates ({}), {} integrality mismatches, {} genre mismatches\n",
                        o.checked,
                        if o.exhaustive { "exhaustive" } else { "sampled" },
                        o.integrality_mismatches.len(),
                        o.genre_mismatches.len()
                    );
                    (pick(&full, &["input", "params", "gene", "oracle"]), text, if o.passed() { 0 } else { 4 })
                }
                _ => unreachable!(),
            };
            Ok(Output { json, text, code })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let body = if cli.json { serde_json::to_string_pretty(&out.json).expect("serializable") + "\n" } else { out.text };
            // a closed pipe is not an error worth reporting
            let _ = std::io::stdout().write_all(body.as_bytes());
            ExitCode::from(out.code)
        }
        Err(e) => {
            if cli.json {
                let v = json!({"schema": SCHEMA, "error": {"code": e.code(), "message": e.to_string()}});
                println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
