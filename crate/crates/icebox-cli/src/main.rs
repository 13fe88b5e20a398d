use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use icebox::coxeter::{demazure_product, sigma_from_flag, state_flags};
use icebox::duality::{all_sigmas, check_left_right_duality, replay_duality};
use icebox::gt::{gt_from_state, schutzenberger, ssyt_from_gt, t_k};
use icebox::lattice::{enumerate_states, partition_function, state_weight};
use icebox::report::{table_report, Report};
use icebox::suites::{crystal_involutions, plus_rho, schutzenberger_suite, twist_checks, CheckLine};
use icebox::weights::RegimeTag;
use icebox::ybe::{check_rl_inverse, ybe_suite};
use icebox::{
    GTPattern, LatticeKind, LaurentPoly, Registry, RowType, Spin, State, SystemSpec, WeightRegime, Weights, YbeReport,
};

const DEFAULT_SEED: u64 = 20240601;

#[derive(Parser)]
#[command(name = "icebox", version, about = "Exact enumeration and verification for colored lattice models")]
struct Cli {
    /// Emit a versioned JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads (overrides ICEBOX_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Suite size: `ci` stays at r, m <= 3; `full` goes to r = 4, m = 4.
    #[arg(long, global = true, value_enum, default_value_t = Profile::Ci)]
    profile: Profile,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Profile {
    Ci,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite; exit status 1 if any check fails.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// List the states of a system with their weights.
    Enumerate(SystemArgs),
    /// Partition function of a system.
    Partition {
        #[command(flatten)]
        system: SystemArgs,
        /// Substitution `name=expr`, or `swap=a,b` to exchange two indeterminates. Repeatable.
        #[arg(long = "set")]
        set: Vec<String>,
    },
    /// Dump a weight table (`T_R`, `T_L`, `R_LL`, `R_RR`, `R_LR`, `R_RL`, or `crystal_` + any of these).
    Table {
        name: String,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value = "generic")]
        regime: String,
    },
    /// Gelfand-Tsetlin pattern operations.
    Gt {
        #[command(subcommand)]
        op: GtOp,
    },
    /// Print the flag table and exit colors of a crystal state.
    Flags {
        #[arg(long)]
        state: PathBuf,
    },
    /// 0-Hecke monoid operations.
    Monoid {
        #[command(subcommand)]
        op: MonoidOp,
    },
}

#[derive(Subcommand)]
enum Suite {
    /// RTT and RRR equations for every row-type combination and vertex color.
    Ybe {
        #[arg(long, default_value = "generic")]
        regime: String,
        #[arg(long)]
        m: Option<usize>,
        /// Include RRR diagrams built from the right-over-left R-vertex.
        #[arg(long)]
        all_rrr: bool,
    },
    /// The right-over-left R-vertex inverts the left-over-right one up to a scalar.
    RlInverse {
        #[arg(long)]
        m: Option<usize>,
    },
    /// Right-moving against left-moving partition functions.
    Duality {
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        mu: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        sigma: Option<Vec<Spin>>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value = "generic")]
        regime: String,
        /// Skip the row-by-row replay.
        #[arg(long)]
        no_replay: bool,
    },
    /// Schutzenberger involution against evacuation, and the crystal replay.
    Schutzenberger {
        #[arg(long, value_delimiter = ',')]
        lambda: Vec<usize>,
    },
    /// State-level involutions for every crystal row-type word.
    Crystal {
        #[arg(long, value_delimiter = ',')]
        lambda: Vec<usize>,
    },
    /// The generic suite under seeded random twists.
    Twist {
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 10)]
        count: u64,
    },
}

#[derive(Subcommand)]
enum GtOp {
    /// Apply `t_k` (acting on row `r - k`).
    Bk {
        pattern: String,
        #[arg(long)]
        k: usize,
    },
    /// Apply `q_{r-1}`.
    Schutzenberger { pattern: String },
    /// Convert to a semistandard tableau.
    ToSsyt { pattern: String },
}

#[derive(Subcommand)]
enum MonoidOp {
    /// Canonical reduced word of a product such as `1,2,1` or `m2 m1 m1`.
    Reduce {
        word: String,
        #[arg(long)]
        r: Option<usize>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    Unfused,
    Crystal,
    Fusion,
}

#[derive(Args)]
struct SystemArgs {
    #[arg(long, value_enum, default_value_t = Model::Unfused)]
    model: Model,
    /// Row types top to bottom, e.g. `RLR` or `GDG`.
    #[arg(long)]
    theta: Option<String>,
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Top column numbers (for crystal models, `lambda + rho`).
    #[arg(long, value_delimiter = ',')]
    mu: Option<Vec<usize>>,
    /// Partition; `rho` is added to obtain the top column numbers.
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    sigma: Option<Vec<Spin>>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value = "generic")]
    regime: String,
    /// Crystal top-boundary colors, left to right.
    #[arg(long, value_delimiter = ',')]
    top_colors: Option<Vec<Spin>>,
}

/// Marks errors caused by bad input, reported with exit status 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage<T>(e: impl std::fmt::Display) -> Result<T> {
    Err(anyhow!(Usage(e.to_string())))
}

fn regime_tag(s: &str) -> Result<RegimeTag> {
    RegimeTag::parse(s).or_else(usage)
}

impl SystemArgs {
    fn build(&self) -> Result<SystemSpec> {
        let mu = match (&self.mu, &self.lambda) {
            (Some(mu), None) => mu.clone(),
            (None, Some(l)) => plus_rho(l),
            (None, None) => return usage("one of --mu or --lambda is required"),
            (Some(_), Some(_)) => return usage("--mu and --lambda are exclusive"),
        };
        let r = mu.len();
        let theta = match &self.theta {
            Some(t) => RowType::parse_list(t).or_else(usage)?,
            None => vec![RowType::R; r],
        };
        if theta.len() != r {
            return usage(format!("{} row types for {r} top columns", theta.len()));
        }
        let mut spec = match self.model {
            Model::Unfused => {
                let reg = Registry::standard(r, self.m);
                let regime = WeightRegime::from_tag(regime_tag(&self.regime)?, &reg, self.m);
                let n = self.n.unwrap_or(mu.first().map_or(0, |&c| c / self.m) + 1);
                SystemSpec::unfused(theta, self.m, mu, n, regime).or_else(usage)?
            }
            Model::Crystal | Model::Fusion => {
                let mut s = SystemSpec::crystal(theta, mu, self.top_colors.clone()).or_else(usage)?;
                if let Some(n) = self.n {
                    s = s.with_columns(n);
                }
                if self.model == Model::Fusion {
                    s = s.with_kind(LatticeKind::CrystalFusion);
                }
                s
            }
        };
        if let Some(sig) = &self.sigma {
            spec = spec.with_sigma(sig.clone());
        }
        spec.validate().or_else(usage)?;
        Ok(spec)
    }
}

fn theta_string(theta: &[RowType]) -> String {
    theta.iter().map(|t| t.to_string()).collect()
}

fn system_params(spec: &SystemSpec) -> Value {
    json!({
        "theta": theta_string(&spec.theta),
        "m": spec.m,
        "mu": spec.mu,
        "n": spec.n,
        "sigma": spec.sigma,
        "regime": spec.regime.tag.to_string(),
    })
}

/// Text and JSON output of one command.
struct Output {
    report: Report,
    text: String,
}

fn check_lines_output(command: &str, params: Value, lines: &[CheckLine]) -> Output {
    let pass = lines.iter().all(|l| l.pass);
    let mut text: String = lines
        .iter()
        .map(|l| format!("{} {}: {}\n", if l.pass { "PASS" } else { "FAIL" }, l.check, l.detail))
        .collect();
    text.push_str(&format!("{} of {} checks passed\n", lines.iter().filter(|l| l.pass).count(), lines.len()));
    Output { report: Report::new(command, pass, params, serde_json::to_value(lines).unwrap_or(Value::Null)), text }
}

fn ybe_lines(reports: &[YbeReport]) -> Vec<CheckLine> {
    reports
        .iter()
        .map(|r| {
            let mut detail = format!("m={} {}", r.m, r.regime);
            if let Some(d) = &r.detail {
                detail.push_str(&format!(", {d}"));
            }
            if let Some(c) = &r.counterexample {
                detail.push_str(&format!(", first difference {:?} -> {:?}: {} vs {}", c.input, c.output, c.lhs, c.rhs));
            }
            let k = r.k.map(|k| format!(" k={k}")).unwrap_or_default();
            CheckLine { check: format!("{} {}{k}", r.equation, r.rows), pass: r.pass, detail }
        })
        .collect()
}

fn ybe_output(command: &str, params: Value, reports: &[YbeReport]) -> Output {
    let mut out = check_lines_output(command, params, &ybe_lines(reports));
    out.report.results = serde_json::to_value(reports).unwrap_or(Value::Null);
    out
}

fn verify(suite: &Suite, profile: Profile, seed: u64) -> Result<Output> {
    match suite {
        Suite::Ybe { regime, m, all_rrr } => {
            let m = m.unwrap_or(if profile == Profile::Full { 4 } else { 3 });
            let all = *all_rrr || profile == Profile::Full;
            let tag = regime_tag(regime)?;
            let reg = Registry::standard(3, m);
            let w = match tag {
                RegimeTag::Crystal => Weights::Crystal { reg, m },
                _ => Weights::Unfused(WeightRegime::from_tag(tag, &reg, m)),
            };
            let reports = ybe_suite(&w, all)?;
            Ok(ybe_output("verify ybe", json!({"regime": regime, "m": m, "all_rrr": all}), &reports))
        }
        Suite::RlInverse { m } => {
            let ms: Vec<usize> = match m {
                Some(m) => vec![*m],
                None => (1..=4).collect(),
            };
            let mut reports = Vec::new();
            for m in &ms {
                reports.extend(check_rl_inverse(*m)?);
            }
            Ok(ybe_output("verify rl-inverse", json!({"m": ms}), &reports))
        }
        Suite::Duality { r, m, mu, sigma, n, regime, no_replay } => {
            let cases: Vec<(usize, usize, Vec<usize>)> = match (mu, m) {
                (Some(mu), m) => vec![(r.unwrap_or(mu.len()), m.unwrap_or(1), mu.clone())],
                (None, None) => {
                    let mut c = vec![(2, 1, vec![1, 0]), (2, 2, vec![3, 0]), (3, 2, vec![4, 2, 0]), (3, 3, vec![5, 4, 0])];
                    if profile == Profile::Full {
                        c.push((4, 2, vec![3, 2, 1, 0]));
                    }
                    c
                }
                (None, Some(_)) => return usage("--m requires --mu"),
            };
            let tag = regime_tag(regime)?;
            let mut lines = Vec::new();
            let mut reports = Vec::new();
            for (r, m, mu) in cases {
                if mu.len() != r {
                    return usage(format!("mu has {} entries for r = {r}", mu.len()));
                }
                let reg = Registry::standard(r, m);
                let regime = WeightRegime::from_tag(tag, &reg, m);
                let n = n.unwrap_or(mu[0] / m + 1);
                let sigmas: Vec<Vec<Spin>> = match sigma {
                    Some(s) => vec![s.clone()],
                    None => all_sigmas(m, r),
                };
                for s in sigmas {
                    let direct = check_left_right_duality(&mu, Some(&s), n, m, r, &regime).or_else(usage)?;
                    let mut pass = direct.pass;
                    let mut detail = format!(
                        "m={m} N={n} states {} vs {}",
                        direct.lhs_system.states, direct.rhs_system.states
                    );
                    let mut entry = json!({"direct": direct});
                    if !no_replay {
                        let rep = replay_duality(&mu, Some(&s), n, m, r, &regime)?;
                        pass &= rep.pass;
                        detail.push_str(&format!(", replay {:?} {}", rep.swap_word, rep.pass));
                        entry["replay"] = serde_json::to_value(&rep)?;
                    }
                    lines.push(CheckLine { check: format!("mu={mu:?} sigma={s:?}"), pass, detail });
                    reports.push(entry);
                }
            }
            let mut out = check_lines_output("verify duality", json!({"regime": regime.to_string()}), &lines);
            out.report.results = Value::Array(reports);
            Ok(out)
        }
        Suite::Schutzenberger { lambda } => {
            let lines = schutzenberger_suite(lambda).or_else(usage)?;
            Ok(check_lines_output("verify schutzenberger", json!({"lambda": lambda}), &lines))
        }
        Suite::Crystal { lambda } => {
            let lines = crystal_involutions(lambda).or_else(usage)?;
            Ok(check_lines_output("verify crystal", json!({"lambda": lambda}), &lines))
        }
        Suite::Twist { m, count } => {
            let lines = twist_checks(*m, *count, seed)?;
            Ok(check_lines_output("verify twist", json!({"m": m, "count": count, "seed": seed}), &lines))
        }
    }
}

fn enumerate(args: &SystemArgs) -> Result<Output> {
    let spec = args.build()?;
    let states = enumerate_states(&spec)?;
    let crystal = spec.kind != LatticeKind::Unfused;
    let mut text = String::new();
    let mut items = Vec::new();
    for (idx, s) in states.iter().enumerate() {
        let w = state_weight(s, &spec)?;
        let sigma = s.sigma(&spec.theta);
        let pattern = if crystal { gt_from_state(s, &spec.theta).ok() } else { None };
        text.push_str(&format!("state {idx}: sigma={sigma:?} weight={w}"));
        if let Some(t) = &pattern {
            text.push_str(&format!(" pattern={t}"));
        }
        text.push('\n');
        for i in 0..s.rows() {
            text.push_str(&format!("  h{i}: {:?}\n", s.horizontal[i]));
        }
        let mut v = s.to_json(&spec.theta, Some(&w));
        v["sigma"] = json!(sigma);
        if let Some(t) = pattern {
            v["pattern"] = json!(t.to_text());
        }
        items.push(v);
    }
    text.push_str(&format!("{} states\n", states.len()));
    let report = Report::new("enumerate", true, system_params(&spec), json!({"count": states.len(), "states": items}));
    Ok(Output { report, text })
}

fn parse_bindings(spec: &SystemSpec, set: &[String]) -> Result<Vec<(String, LaurentPoly)>> {
    let reg = spec.registry();
    let mut out = Vec::new();
    for item in set {
        let Some((name, expr)) = item.split_once('=') else {
            return usage(format!("--set expects name=value, got {item:?}"));
        };
        let var = |n: &str| LaurentPoly::var(reg, n.trim()).or_else(usage);
        if name.trim() == "swap" {
            let Some((a, b)) = expr.split_once(',') else {
                return usage("swap expects two indeterminates, e.g. swap=z1,z2");
            };
            out.push((a.trim().to_string(), var(b)?));
            out.push((b.trim().to_string(), var(a)?));
        } else {
            var(name)?;
            out.push((name.trim().to_string(), LaurentPoly::parse(reg, expr).or_else(usage)?));
        }
    }
    Ok(out)
}

fn partition(args: &SystemArgs, set: &[String]) -> Result<Output> {
    let spec = args.build()?;
    let mut z = partition_function(&spec)?;
    let bindings = parse_bindings(&spec, set)?;
    if !bindings.is_empty() {
        let refs: Vec<(&str, LaurentPoly)> = bindings.iter().map(|(n, p)| (n.as_str(), p.clone())).collect();
        z = z.substitute_named(&refs).or_else(usage)?;
    }
    let mut params = system_params(&spec);
    params["set"] = json!(set);
    let report = Report::new("partition", true, params, json!({"Z": z.to_string(), "poly": z.to_json()}));
    Ok(Output { report, text: format!("{z}\n") })
}

fn gt(op: &GtOp) -> Result<Output> {
    let parse = |s: &str| GTPattern::parse(s).or_else(usage);
    let (name, input, result) = match op {
        GtOp::Bk { pattern, k } => {
            let t = parse(pattern)?;
            ("gt bk", t.clone(), t_k(&t, *k).or_else(usage)?)
        }
        GtOp::Schutzenberger { pattern } => {
            let t = parse(pattern)?;
            ("gt schutzenberger", t.clone(), schutzenberger(&t)?)
        }
        GtOp::ToSsyt { pattern } => {
            let t = parse(pattern)?;
            let s = ssyt_from_gt(&t).or_else(usage)?;
            let report = Report::new(
                "gt to-ssyt",
                true,
                json!({"pattern": t.to_text()}),
                json!({"rows": s.rows, "shape": s.shape(), "content": s.content()}),
            );
            let text = s.rows.iter().map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ") + "\n").collect();
            return Ok(Output { report, text });
        }
    };
    let report = Report::new(name, true, json!({"pattern": input.to_text()}), json!({"pattern": result.to_text()}));
    let text = result.rows.iter().map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ") + "\n").collect();
    Ok(Output { report, text })
}

fn flags(path: &PathBuf) -> Result<Output> {
    let raw = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: Value = serde_json::from_str(&raw).or_else(usage)?;
    let (s, theta) = State::from_json(&v).or_else(usage)?;
    let table = state_flags(&s, &theta).or_else(usage)?;
    let sigma = sigma_from_flag(&table.last, &theta);
    let mut text = String::new();
    for (i, row) in table.flags.iter().enumerate() {
        for (j, f) in row.iter().enumerate() {
            text.push_str(&format!("Sigma_{i},{j} = {f:?}\n"));
        }
    }
    text.push_str(&format!("Sigma_{} = {:?}\n", theta.len(), table.last));
    for mt in &table.meetings {
        text.push_str(&format!("row {} vertex {}: m{}\n", mt.row, mt.j + 1, mt.k));
    }
    text.push_str(&format!("sigma = {sigma:?}\n"));
    let report = Report::new(
        "flags",
        true,
        json!({"theta": theta_string(&theta)}),
        json!({"flags": table.flags, "last": table.last, "meetings": table.meetings, "sigma": sigma}),
    );
    Ok(Output { report, text })
}

fn parse_word(s: &str) -> Result<Vec<usize>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.trim_start_matches(['m', 's']).parse::<usize>().or_else(usage))
        .collect()
}

fn monoid(op: &MonoidOp) -> Result<Output> {
    let MonoidOp::Reduce { word, r } = op;
    let w = parse_word(word)?;
    let r = r.unwrap_or(w.iter().max().map_or(1, |&i| i + 1));
    let e = demazure_product(r, &w).or_else(usage)?;
    let report = Report::new(
        "monoid reduce",
        true,
        json!({"word": w, "r": r}),
        json!({"reduced": e.reduced_word(), "perm": e.perm.iter().map(|p| p + 1).collect::<Vec<_>>(), "text": e.to_string()}),
    );
    Ok(Output { report, text: format!("{e}\n") })
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Verify { suite } => verify(suite, cli.profile, cli.seed),
        Command::Enumerate(args) => enumerate(args),
        Command::Partition { system, set } => partition(system, set),
        Command::Table { name, m, regime } => {
            let reg = Registry::standard(2, *m);
            let regime = WeightRegime::from_tag(regime_tag(regime)?, &reg, *m);
            let report = table_report(name, *m, &regime).or_else(usage)?;
            let text = report
                .results
                .as_object()
                .map(|o| {
                    o.iter()
                        .map(|(k, v)| {
                            let p = LaurentPoly::from_json(v, Some(&reg)).map(|p| p.to_string()).unwrap_or_default();
                            format!("{k}: {p}\n")
                        })
                        .collect()
                })
                .unwrap_or_default();
            Ok(Output { report, text })
        }
        Command::Gt { op } => gt(op),
        Command::Flags { state } => flags(state),
        Command::Monoid { op } => monoid(op),
    }
}

fn configure_threads(flag: Option<usize>) -> Result<()> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var("ICEBOX_THREADS") {
            Ok(v) => Some(v.parse::<usize>().map_err(|_| anyhow!(Usage(format!("ICEBOX_THREADS={v:?} is not a number"))))?),
            Err(_) => None,
        },
    };
    if let Some(n) = n {
        if n == 0 {
            bail!(Usage("thread count must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads(cli.threads).and_then(|_| run(&cli));
    match result {
        Ok(out) => {
            if cli.json {
                println!("{}", out.report.to_pretty());
            } else {
                print!("{}", out.text);
            }
            if out.report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
