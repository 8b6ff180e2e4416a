//! `ltphi`: command-line front end for the ltphi kernel.

mod demo;

use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use ltphi_core::acceptance::{self, Config};
use ltphi_core::lubin_tate::{FpiKind, LubinTateData};
use ltphi_core::padic::{field_ctx, PadicScalar};
use ltphi_core::phigamma::{matrix, ModuleVector, PhiGammaModule};
use ltphi_core::series::{parse_series, LaurentWindow};
use ltphi_core::twist::run_pipeline;
use num_rational::Rational64;
use serde_json::{json, Value};

/// Default working precision when neither `--prec-p` nor the environment sets one.
const DEFAULT_PREC: i32 = 12;
const PREC_ENV: &str = "LTPHI_PREC";

#[derive(Parser, Debug)]
#[command(name = "ltphi", version, about = "Lubin-Tate formal groups and (phi_q, Gamma)-modules over p-adic fields")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Residue characteristic.
    #[arg(long, global = true, default_value_t = 3)]
    p: u64,
    /// Degree of the unramified field F over Q_p (default 1, or 2 for frobenius-demo).
    #[arg(long, global = true)]
    deg: Option<usize>,
    /// Absolute precision N (digits of p); falls back to $LTPHI_PREC, then 12.
    #[arg(long = "prec-p", global = true)]
    prec: Option<i32>,
    /// T-adic window (highest tracked exponent).
    #[arg(long, global = true, default_value_t = 20)]
    window: i64,
    /// Frobenius power series: standard, cyclotomic or coeffs:a1,a2,...
    #[arg(long, global = true, default_value = "standard")]
    f: String,
    #[arg(long, global = true, conflicts_with = "plain")]
    json: bool,
    #[arg(long, global = true)]
    plain: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 20240601)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the formal group law, formal logarithm and exponential.
    Fglaw {
        /// Total degree of the group law.
        #[arg(long, default_value_t = 4)]
        degree: u32,
    },
    /// Print the endomorphism [a](T).
    Mult {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
    },
    /// Apply gamma_u or phi to a series.
    Act {
        #[arg(long, allow_hyphen_values = true, conflicts_with = "phi", required_unless_present = "phi")]
        u: Option<String>,
        #[arg(long)]
        phi: bool,
        #[arg(long, allow_hyphen_values = true)]
        series: String,
    },
    /// Annulus valuation v^r, or the box valuation over [s, r].
    Val {
        #[arg(long, allow_hyphen_values = true)]
        series: String,
        #[arg(long)]
        s: Option<String>,
        #[arg(long)]
        r: String,
    },
    /// Apply nabla_beta to a module vector.
    Nabla {
        /// trivial, identity-char, frobenius-demo, or @file.json.
        #[arg(long)]
        module: String,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        beta: String,
        /// Coordinates, comma separated (default T, 0, ...).
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
    },
    /// F-analyticity defect report.
    Analytic {
        #[arg(long)]
        module: String,
    },
    /// Constants, twist character and verification for a rank-1 module.
    Twist {
        #[arg(long)]
        module: String,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Only these criteria (comma separated ids).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

enum Failure {
    Usage(String),
    Compute(String),
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn compute(e: impl std::fmt::Display) -> Failure {
    Failure::Compute(e.to_string())
}

/// Resolved settings, echoed as metadata.
struct Env {
    g: Global,
    prec: i32,
    prec_source: &'static str,
    prec_env: Option<String>,
}

impl Env {
    fn deg(&self, module: Option<&str>) -> usize {
        self.g.deg.unwrap_or(if module == Some("frobenius-demo") { 2 } else { 1 })
    }

    fn lt(&self, deg: usize) -> Result<Arc<LubinTateData>, Failure> {
        let ctx = field_ctx(self.g.p, deg).map_err(usage)?;
        let kind: FpiKind = self.g.f.parse().map_err(usage)?;
        Ok(Arc::new(LubinTateData::new(ctx, kind, self.prec).map_err(usage)?))
    }

    fn meta(&self, deg: usize) -> Value {
        json!({
            "p": self.g.p,
            "deg": deg,
            "f": self.g.f,
            "prec": self.prec,
            "prec_source": self.prec_source,
            "prec_env": self.prec_env,
            "window": self.g.window,
            "seed": self.g.seed,
        })
    }
}

/// Parsed output: a JSON value and its plain rendering.
struct Output {
    deg: usize,
    json: Value,
    plain: String,
    ok: bool,
}

/// Literals are exact, so scalars keep full storage precision.
fn scalar_arg(lt: &LubinTateData, src: &str) -> Result<PadicScalar, Failure> {
    let s = parse_series(src, lt.ctx(), 1, lt.ctx().emax() as i32).map_err(usage)?;
    if s.n_min() < 0 || s.coeff(1).is_some_and(|c| !c.is_zero()) {
        return Err(usage(format!("{src:?} is not a constant")));
    }
    Ok(s.coeff(0).unwrap())
}

fn rational_arg(src: &str) -> Result<Rational64, Failure> {
    src.trim().parse().map_err(|_| usage(format!("bad rational {src:?}")))
}

fn series_arg(lt: &LubinTateData, src: &str, window: i64) -> Result<LaurentWindow, Failure> {
    parse_series(src, lt.ctx(), window, lt.prec()).map_err(usage)
}

fn module_arg(env: &Env, name: &str) -> Result<PhiGammaModule, Failure> {
    if let Some(path) = name.strip_prefix('@') {
        let text = std::fs::read_to_string(path).map_err(usage)?;
        let j = serde_json::from_str(&text).map_err(usage)?;
        return PhiGammaModule::from_json(&j).map_err(usage);
    }
    let lt = env.lt(env.deg(Some(name)))?;
    demo::build(name, lt, env.g.window)
}

fn run(cmd: &Command, env: &Env) -> Result<Output, Failure> {
    let w = env.g.window;
    match cmd {
        Command::Fglaw { degree } => {
            let lt = env.lt(env.deg(None))?;
            let g = lt.group_law(*degree).map_err(compute)?;
            let log = lt.formal_log(w).map_err(compute)?;
            let exp = lt.formal_exp(w).map_err(compute)?;
            let terms: Vec<Value> = g
                .terms()
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| json!({"exps": m, "coeff": c}))
                .collect();
            Ok(Output {
                deg: lt.ctx().deg(),
                json: json!({"group_law": {"degree": degree, "terms": terms}, "log": log, "exp": exp}),
                plain: format!("G(X, Y) = {g}\nlog(T) = {log}\nexp(T) = {exp}"),
                ok: true,
            })
        }
        Command::Mult { a } => {
            let lt = env.lt(env.deg(None))?;
            let x = scalar_arg(&lt, a)?;
            let s = lt.mult_by(&x, w).map_err(compute)?;
            Ok(Output { deg: lt.ctx().deg(), plain: format!("[{a}](T) = {s}"), json: json!({"a": x, "series": s}), ok: true })
        }
        Command::Act { u, phi, series } => {
            let lt = env.lt(env.deg(None))?;
            let g = series_arg(&lt, series, w)?;
            let (label, out) = if *phi {
                ("phi".to_string(), lt.phi_act(&g).map_err(compute)?)
            } else {
                let src = u.as_deref().unwrap();
                let unit = scalar_arg(&lt, src)?;
                (format!("gamma_{src}"), lt.gamma_act(&unit, &g).map_err(compute)?)
            };
            Ok(Output {
                deg: lt.ctx().deg(),
                plain: format!("{label}({series}) = {out}"),
                json: json!({"action": label, "input": g, "series": out}),
                ok: true,
            })
        }
        Command::Val { series, s, r } => {
            let lt = env.lt(env.deg(None))?;
            let f = series_arg(&lt, series, w)?;
            let r = rational_arg(r)?;
            let v = match s {
                Some(s) => f.v_box(rational_arg(s)?, r).map_err(usage)?,
                None => f.v_annulus(r),
            };
            Ok(Output {
                deg: lt.ctx().deg(),
                plain: v.to_string(),
                json: json!({"value": v.value.to_string(), "lower_bound_only": v.lower_bound_only}),
                ok: true,
            })
        }
        Command::Nabla { module, beta, x } => {
            let m = module_arg(env, module)?;
            let b = scalar_arg(m.lt(), beta)?;
            let coords = match x {
                Some(src) => src.split(',').map(|c| series_arg(m.lt(), c, m.window())).collect::<Result<Vec<_>, _>>()?,
                None => (0..m.rank())
                    .map(|j| if j == 0 { LaurentWindow::t(m.ctx(), m.window()) } else { LaurentWindow::zero(m.ctx(), m.window()) })
                    .collect(),
            };
            if coords.len() != m.rank() {
                return Err(usage(format!("module has rank {}, got {} coordinates", m.rank(), coords.len())));
            }
            let v = ModuleVector::new(coords).map_err(usage)?;
            let out = m.nabla(&b, &v).map_err(compute)?;
            let plain = out.coords().iter().enumerate().map(|(j, c)| format!("e{}: {c}", j + 1)).collect::<Vec<_>>().join("\n");
            Ok(Output {
                deg: m.ctx().deg(),
                plain,
                json: json!({"module": m.to_json(), "beta": b, "x": v, "nabla": out}),
                ok: true,
            })
        }
        Command::Analytic { module } => {
            let m = module_arg(env, module)?;
            let a = m.is_f_analytic(None).map_err(compute)?;
            let vals: Vec<Option<i32>> = a
                .defects
                .iter()
                .map(|d| {
                    if matrix::is_zero(d) {
                        None
                    } else {
                        d.iter().flatten().filter(|e| !e.is_zero()).map(|e| e.min_coeff_valuation()).min()
                    }
                })
                .collect();
            let mut plain = format!("{}: {}", m.label(), if a.analytic { "F-analytic" } else { "not F-analytic" });
            if let Some(c) = &a.constants {
                let cs: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                plain.push_str(&format!("\nconstants: {}", cs.join(", ")));
            }
            for (j, v) in vals.iter().enumerate() {
                let v = v.map_or("zero".to_string(), |v| format!("min valuation {v}"));
                plain.push_str(&format!("\ndefect {}: {v}", j + 2));
            }
            let defects: Vec<Value> = a.defects.iter().map(|d| json!(matrix::to_json(d))).collect();
            Ok(Output {
                deg: m.ctx().deg(),
                plain,
                json: json!({
                    "module": m.to_json(),
                    "analytic": a.analytic,
                    "constants": a.constants,
                    "defect_valuations": vals,
                    "defects": defects,
                }),
                ok: true,
            })
        }
        Command::Twist { module } => {
            let m = module_arg(env, module)?;
            let r = run_pipeline(&m).map_err(compute)?;
            let plain = format!(
                "{}: verdict {}\nconstants: {}\nprecision: {}\nroot obligations: {}",
                m.label(),
                r.verdict,
                r.constants.len(),
                r.precision,
                r.root_obligations.len()
            );
            Ok(Output { deg: m.ctx().deg(), plain, ok: r.passed(), json: json!({"module": m.to_json(), "report": r}) })
        }
        Command::Selftest { only } => {
            let cfg = Config { seed: env.g.seed, prec: env.prec, window: env.g.window.max(1) };
            let results: Vec<_> = if only.is_empty() {
                acceptance::run_all(&cfg)
            } else {
                only.iter().map(|&id| acceptance::run_one(id, &cfg).ok_or_else(|| usage(format!("no criterion {id}")))).collect::<Result<_, _>>()?
            };
            let plain = results.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n");
            let ok = results.iter().all(|r| r.passed);
            Ok(Output { deg: env.deg(None), plain, ok, json: json!({"config": cfg, "criteria": results, "passed": ok}) })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let prec_env = std::env::var(PREC_ENV).ok();
    let (prec, prec_source) = match (cli.global.prec, &prec_env) {
        (Some(n), _) => (n, "flag"),
        (None, Some(v)) => match v.trim().parse() {
            Ok(n) => (n, "env"),
            Err(_) => {
                eprintln!("error: {PREC_ENV}={v:?} is not an integer");
                return ExitCode::from(2);
            }
        },
        (None, None) => (DEFAULT_PREC, "default"),
    };
    let env = Env { g: cli.global.clone(), prec, prec_source, prec_env };
    match run(&cli.cmd, &env) {
        Ok(out) => {
            let text = if env.g.json {
                let doc = json!({"meta": env.meta(out.deg), "result": out.json, "ok": out.ok});
                serde_json::to_string_pretty(&doc).unwrap()
            } else {
                out.plain
            };
            // A closed pipe (e.g. `| head`) is not an error.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if out.ok { ExitCode::SUCCESS } else { ExitCode::from(1) }
        }
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
