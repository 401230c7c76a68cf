use std::f64::consts::PI;
use std::path::Path;
use std::time::Instant;

use serde_json::{json, Value};

use kronloc_core::bounds::{self, BoundReport, CoefficientConvention, CompareOptions, ProofParameters};
use kronloc_core::fejer::{self, FejerConfig, FejerLaw, PZero, PZeroMethod};
use kronloc_core::lattice::{self, LatticeConfig, LinearFormInstance};
use kronloc_core::poly::{self, DirichletPolynomial, GeneralizedPolynomial, PolyFile, TorusSampler, TransferOptions};
use kronloc_core::replay::{self, ReplayConfig, WeightedSumDistribution};
use kronloc_core::search::{self, LiminfGrid, SearchMode, SearchOptions, TargetInstance};
use kronloc_core::verify::{self, SuiteReport};

use crate::config::{parse_zero_policy, RunConfig, CONFIG_ENV};
use crate::report::{csv_f64, csv_opt, write_file, Report, Summary};
use crate::{
    Cli, CliError, Command, ConventionArg, FejerCommand, GlobalArgs, MethodArg, ModeArg, Outcome, ReplayCommand, Suite,
    EXIT_CHECK_FAILED, EXIT_NOT_FOUND, EXIT_OK,
};

struct Output {
    name: &'static str,
    results: Value,
    summary: Summary,
    /// File name and contents of a CSV table.
    csv: Option<(String, String)>,
    /// Print the CSV instead of the JSON report.
    csv_to_stdout: bool,
}

impl Output {
    fn json(name: &'static str, results: Value) -> Self {
        Self { name, results, summary: Summary::none(), csv: None, csv_to_stdout: false }
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

fn resolve_config(g: &GlobalArgs) -> Result<RunConfig, CliError> {
    let path = g.config.clone().or_else(|| std::env::var_os(CONFIG_ENV).map(Into::into));
    let mut c = match path {
        Some(p) => RunConfig::load(&p)?,
        None => RunConfig::default(),
    };
    if let Some(v) = g.precision {
        c.precision = v;
    }
    if let Some(v) = g.c0 {
        c.c0 = v;
    }
    if let Some(v) = &g.zero_policy {
        c.zero_policy = parse_zero_policy(v)?;
    }
    if let Some(v) = g.enumeration_cap {
        c.enumeration_cap = v;
    }
    if let Some(v) = g.slack {
        c.slack = Some(v);
    }
    if let Some(v) = g.search_cap {
        c.search_cap = v;
    }
    if let Some(v) = g.support_cap {
        c.support_cap = v;
    }
    if let Some(v) = g.tuple_cap {
        c.tuple_cap = v;
    }
    if let Some(v) = &g.output_dir {
        c.output_dir = Some(v.clone());
    }
    if let Some(v) = g.seed {
        c.seed = v;
    }
    if let Some(v) = g.workers {
        c.workers = Some(v);
    }
    c.validate()?;
    Ok(c)
}

fn lattice_cfg(c: &RunConfig) -> LatticeConfig {
    LatticeConfig { enumeration_cap: c.enumeration_cap, zero_policy: c.zero_policy }
}

fn fejer_cfg(c: &RunConfig) -> FejerConfig {
    FejerConfig { support_cap: c.support_cap, ..FejerConfig::default() }
}

fn replay_cfg(c: &RunConfig) -> ReplayConfig {
    ReplayConfig { fejer: fejer_cfg(c), lattice: lattice_cfg(c), tuple_cap: c.tuple_cap, ..ReplayConfig::default() }
}

fn search_opts(c: &RunConfig) -> SearchOptions {
    SearchOptions { slack: c.slack, max_points: c.search_cap }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_instance(path: &Path, c: &RunConfig) -> Result<LinearFormInstance, CliError> {
    let kinds = lattice::parse_frequency_file(&read(path)?)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Ok(LinearFormInstance::from_specs(&kinds, c.precision)?)
}

fn check_len(what: &str, got: usize, n: usize) -> Result<(), CliError> {
    if got == n {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{what} has {got} entries, the frequency system has {n}")))
    }
}

/// Theorem 1 interval length and the quantities behind it.
fn auto_length(instance: &LinearFormInstance, omega: u64, c: &RunConfig) -> Result<(f64, Value), CliError> {
    let n = instance.len();
    let u = lattice::coefficient_bound(n, omega, c.c0)?;
    let xi = lattice::xi(instance, u, &lattice_cfg(c))?;
    let params = ProofParameters::choose(n, omega, c.c0)?;
    let t = bounds::theorem1_bound(&params, xi.value)?;
    let info = json!({ "U": u, "xi": xi, "parameters": params, "t_theorem1": t });
    Ok((t.value(), info))
}

fn parse_length(s: &str) -> Result<Option<f64>, CliError> {
    if s == "auto" {
        return Ok(None);
    }
    let t: f64 = s.parse().map_err(|_| CliError::Usage(format!("T must be a number or `auto`, got {s:?}")))?;
    if !(t >= 0.0) || !t.is_finite() {
        return Err(CliError::Usage(format!("T must be finite and >= 0, got {t}")));
    }
    Ok(Some(t))
}

pub fn execute(cli: Cli, echo: Vec<String>) -> Outcome {
    let cfg = match resolve_config(&cli.global) {
        Ok(c) => c,
        Err(e) => return failure(e),
    };
    if let Some(w) = cfg.workers {
        kronloc_core::configure_workers(w);
    }
    let compact = cli.global.compact;
    let start = Instant::now();
    let result = dispatch(cli.command, &cfg);
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    match result {
        Ok(out) => {
            let code = if out.summary.passed == Some(false) { EXIT_CHECK_FAILED } else { EXIT_OK };
            let report = Report::new(echo, cfg.clone(), out.results, out.summary, elapsed);
            let json = render(&report, compact);
            if let Some(dir) = &cfg.output_dir {
                let mut writes = vec![write_file(dir, &format!("{}.json", out.name), &render(&report, false))];
                if let Some((name, csv)) = &out.csv {
                    writes.push(write_file(dir, name, csv));
                }
                if let Some(Err(e)) = writes.into_iter().find(Result::is_err) {
                    return failure(e);
                }
            }
            let stdout = match (&out.csv, out.csv_to_stdout) {
                (Some((_, csv)), true) => csv.clone(),
                _ => json,
            };
            let stderr = if code == EXIT_CHECK_FAILED {
                format!("checks failed: {}\n", report.summary.failed.join(", "))
            } else {
                String::new()
            };
            Outcome { stdout, stderr, code }
        }
        Err(CliError::NotFound { message, diagnostics }) => {
            let results = json!({ "error": "witness-not-found", "message": message, "diagnostics": diagnostics });
            let summary = Summary { passed: Some(false), checks: 1, failed: vec!["witness".into()] };
            let report = Report::new(echo, cfg.clone(), results, summary, elapsed);
            if let Some(dir) = &cfg.output_dir {
                let _ = write_file(dir, "not-found.json", &render(&report, false));
            }
            Outcome { stdout: render(&report, compact), stderr: format!("error: {message}\n"), code: EXIT_NOT_FOUND }
        }
        Err(e) => failure(e),
    }
}

fn render(report: &Report, compact: bool) -> String {
    let text = if compact { serde_json::to_string(report) } else { serde_json::to_string_pretty(report) };
    text.unwrap_or_default() + "\n"
}

fn failure(e: CliError) -> Outcome {
    Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: e.exit_code() }
}

fn dispatch(cmd: Command, c: &RunConfig) -> Result<Output, CliError> {
    match cmd {
        Command::Xi(a) => cmd_xi(&a.freq, a.u, a.from_theorem.as_deref(), c),
        Command::Bound(a) => cmd_bound(a, c),
        Command::Search(a) => cmd_search(a, c),
        Command::Verify(a) => cmd_verify(a.suite, a.quick, c),
        Command::Dirichlet(a) => cmd_dirichlet(a, c),
        Command::Fejer(f) => cmd_fejer(f, c),
        Command::Replay(r) => cmd_replay(r, c),
        Command::Liminf(a) => cmd_liminf(a, c),
    }
}

fn cmd_xi(freq: &Path, u: Option<u64>, from_theorem: Option<&[u64]>, c: &RunConfig) -> Result<Output, CliError> {
    let instance = load_instance(freq, c)?;
    let (bound, origin) = match (u, from_theorem) {
        (Some(u), _) => (u, json!({ "source": "explicit" })),
        (None, Some(&[n, omega])) => {
            check_len("--from-theorem N", n as usize, instance.len())
                .map_err(|_| CliError::Usage(format!("N = {n} but the frequency file has {} entries", instance.len())))?;
            let u = lattice::coefficient_bound(n as usize, omega, c.c0)?;
            (u, json!({ "source": "theorem", "N": n, "omega": omega, "C0": c.c0 }))
        }
        _ => return Err(CliError::Usage("give --U or --from-theorem N OMEGA".into())),
    };
    let xi = lattice::xi(&instance, bound, &lattice_cfg(c))?;
    Ok(Output::json("xi", json!({ "U": bound, "origin": origin, "frequencies": instance.specs(), "xi": xi })))
}

const BOUND_CSV_HEADER: &str = "omega,N,m,k,U,convention,xi,ln_t_theorem1,t_theorem1,ln_t_abstract,comparison_m,\
ln_bacon,bacon,chen_accuracy,chen_m0,chen_lambda,ln_chen_t0,ln_dirichlet,ln_turan,turan_in_range,\
ln_xi_logprime_lower,xi_above_logprime_lower";

fn bound_csv_row(r: &BoundReport) -> String {
    let p = &r.parameters;
    let conv = match r.coefficient_convention {
        CoefficientConvention::Theorem => "theorem",
        CoefficientConvention::Proof => "proof",
    };
    [
        p.omega.to_string(),
        p.n.to_string(),
        p.m.to_string(),
        p.k.to_string(),
        r.coefficient_bound.to_string(),
        conv.to_string(),
        csv_f64(r.xi.value),
        csv_f64(r.t_theorem1.ln),
        csv_opt(r.t_theorem1.linear),
        csv_f64(r.t_abstract.ln),
        r.comparison_m.to_string(),
        csv_opt(r.bacon_accuracy.map(|b| b.ln)),
        csv_opt(r.bacon_accuracy.and_then(|b| b.linear)),
        csv_f64(r.chen_accuracy),
        r.chen.m0.to_string(),
        csv_f64(r.chen.lambda.value),
        csv_f64(r.chen.t0.ln),
        csv_f64(r.dirichlet_t.ln),
        csv_f64(r.turan.value.ln),
        r.turan.in_range.to_string(),
        csv_f64(r.xi_logprime_lower.ln),
        r.xi_above_logprime_lower.to_string(),
    ]
    .join(",")
}

fn parse_sweep(s: &str) -> Result<(u64, u64), CliError> {
    let bad = || CliError::Usage(format!("sweep must look like omega=a..b, got {s:?}"));
    let range = s.strip_prefix("omega=").ok_or_else(bad)?;
    let (a, b) = range.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let (a, b): (u64, u64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn cmd_bound(a: crate::BoundArgs, c: &RunConfig) -> Result<Output, CliError> {
    let instance = load_instance(&a.freq, c)?;
    if let Some(n) = a.n {
        check_len("N", n, instance.len())
            .map_err(|_| CliError::Usage(format!("N = {n} but the frequency file has {} entries", instance.len())))?;
    }
    let opts = CompareOptions {
        epsilon: a.epsilon,
        chen_epsilon: a.chen_epsilon,
        comparison_m: a.comparison_m,
        convention: match a.convention {
            ConventionArg::Theorem => CoefficientConvention::Theorem,
            ConventionArg::Proof => CoefficientConvention::Proof,
        },
        lattice: lattice_cfg(c),
    };
    match (&a.sweep, a.omega) {
        (Some(s), _) => {
            let (lo, hi) = parse_sweep(s)?;
            let mut rows = vec![BOUND_CSV_HEADER.to_string()];
            let mut reports = Vec::new();
            for omega in lo..=hi {
                let r = bounds::compare_bounds(&instance, omega, c.c0, &opts)?;
                rows.push(bound_csv_row(&r));
                reports.push(r);
            }
            let csv = rows.join("\n") + "\n";
            Ok(Output {
                name: "bound-sweep",
                results: json!({ "omega": [lo, hi], "reports": reports }),
                summary: Summary::none(),
                csv: Some(("bound-sweep.csv".into(), csv)),
                csv_to_stdout: true,
            })
        }
        (None, Some(omega)) => {
            let r = bounds::compare_bounds(&instance, omega, c.c0, &opts)?;
            let row = bound_csv_row(&r);
            let csv = format!("{BOUND_CSV_HEADER}\n{row}\n");
            Ok(Output {
                name: "bound",
                results: json!({ "report": r, "turan_applicable": r.turan.in_range, "csv_row": row }),
                summary: Summary::none(),
                csv: Some(("bound.csv".into(), csv)),
                csv_to_stdout: false,
            })
        }
        (None, None) => Err(CliError::Usage("give N OMEGA or --sweep omega=a..b".into())),
    }
}

fn cmd_search(a: crate::SearchArgs, c: &RunConfig) -> Result<Output, CliError> {
    let instance = load_instance(&a.freq, c)?;
    check_len("--betas", a.betas.len(), instance.len())?;
    if a.omega == 0 {
        return Err(CliError::Usage("omega must be >= 1".into()));
    }
    let (length, theorem) = match parse_length(&a.t)? {
        Some(t) => (t, Value::Null),
        None => auto_length(&instance, a.omega, c)?,
    };
    let target = TargetInstance::new(instance.values_f64(), a.betas.clone(), a.d, length, a.omega)?;
    let mode = match a.mode {
        ModeArg::First => SearchMode::FirstHit,
        ModeArg::Best => SearchMode::BestInInterval,
    };
    let w = search::find_witness(&target, mode, &search_opts(c))?;
    let ok = w.sup_discrepancy <= target.accuracy();
    Ok(Output {
        name: "search",
        results: json!({ "T": length, "theorem": theorem, "witness": w }),
        summary: Summary::from_checks([("sup-discrepancy <= 1/omega", ok)]),
        csv: None,
        csv_to_stdout: false,
    })
}

fn cmd_verify(suite: Suite, quick: bool, c: &RunConfig) -> Result<Output, CliError> {
    let f = fejer_cfg(c);
    let r = replay_cfg(c);
    let report: SuiteReport = match suite {
        Suite::Fejer => verify::verify_fejer(quick, &f)?,
        Suite::Replay => verify::verify_replay(quick, &r)?,
        Suite::All => verify::verify_all(quick, &f, &r)?,
    };
    let summary = Summary::from_checks(report.checks.iter().filter(|c| !c.informational).map(|c| (c.name.as_str(), c.passed)));
    Ok(Output { name: "verify", results: to_value(&report), summary, csv: None, csv_to_stdout: false })
}

fn cmd_dirichlet(a: crate::DirichletArgs, c: &RunConfig) -> Result<Output, CliError> {
    let file = poly::parse_poly_file(&read(&a.poly)?)?;
    let (gpoly, instance, kind, extra) = match file {
        PolyFile::Dirichlet { coefficients } => {
            let d = DirichletPolynomial::new(coefficients)?;
            let inst = LinearFormInstance::from_specs(&d.frequency_kinds(), c.precision)?;
            let extra = json!({ "L": d.len(), "primes": d.table.primes, "big_omega": d.table.big_omega });
            (d.poly, inst, "dirichlet", extra)
        }
        PolyFile::Generalized { frequency_file, exponents, coefficients } => {
            let base = a.poly.parent().unwrap_or(Path::new("."));
            let inst = load_instance(&base.join(&frequency_file), c)?;
            let g = GeneralizedPolynomial::new(inst.values_f64(), exponents, coefficients)?;
            let independence = g.injectivity_check(&inst, &lattice_cfg(c))?;
            let extra = json!({ "frequency_file": frequency_file, "injectivity": independence });
            (g, inst, "generalized", extra)
        }
    };
    let theta: Vec<f64> = match a.tau0 {
        Some(tau) => gpoly.lambdas.iter().map(|l| (tau * l).rem_euclid(1.0)).collect(),
        None => a.theta.clone(),
    };
    check_len("--theta", theta.len(), gpoly.n_frequencies())?;
    if a.omega == 0 {
        return Err(CliError::Usage("omega must be >= 1".into()));
    }
    let length = parse_length(&a.t)?;
    let opts = TransferOptions { c0: c.c0, precision: c.precision, lattice: lattice_cfg(c), search: search_opts(c) };
    let report = poly::transfer_check(&gpoly, Some(&instance), &theta, a.omega, a.d, length, &opts)?;
    let torus = match a.sup_budget {
        Some(budget) => Some(poly::sup_torus_from(
            &gpoly,
            &[theta.clone()],
            TorusSampler::Random { budget, seed: c.seed },
            c.search_cap,
        )?),
        None => None,
    };
    let q_abs = report.q_value.0.hypot(report.q_value.1);
    Ok(Output {
        name: "dirichlet",
        results: json!({
            "kind": kind,
            "polynomial": extra,
            "transfer": report,
            "abs_q_target": q_abs,
            "sup_torus_lower_bound": torus,
        }),
        summary: Summary::from_checks([("gap <= (2π/ω) Σ|α_n| Ω(n)", report.passes)]),
        csv: None,
        csv_to_stdout: false,
    })
}

fn p_zero_json(p: &PZero) -> Value {
    match p {
        PZero::Exact(q) => json!({ "exact": q.to_string(), "value": p.to_f64() }),
        PZero::Approx(v) => json!({ "value": v }),
    }
}

fn cmd_fejer(cmd: FejerCommand, c: &RunConfig) -> Result<Output, CliError> {
    let cfg = fejer_cfg(c);
    match cmd {
        FejerCommand::Pmf { m, k } => {
            let d = fejer::convolve(FejerLaw::new(m)?, k, &cfg)?;
            let mut csv = String::from("nu,count,probability,value\n");
            let rows: Vec<Value> = d
                .iter()
                .map(|(nu, p)| {
                    let count = d.count(nu).to_string();
                    csv.push_str(&format!("{nu},{count},{p},{}\n", csv_f64(d.pmf_f64(nu))));
                    json!({ "nu": nu, "count": count, "probability": p.to_string(), "value": d.pmf_f64(nu) })
                })
                .collect();
            Ok(Output {
                name: "fejer-pmf",
                results: json!({
                    "m": m,
                    "k": k,
                    "denominator": d.denominator().to_string(),
                    "total_mass": d.total_mass().to_string(),
                    "symmetric": d.is_symmetric(),
                    "pmf": rows,
                }),
                summary: Summary::none(),
                csv: Some(("fejer-pmf.csv".into(), csv)),
                csv_to_stdout: false,
            })
        }
        FejerCommand::Charfn { m, k, t } => {
            if t.is_empty() {
                return Err(CliError::Usage("give at least one --t".into()));
            }
            let d = fejer::convolve(FejerLaw::new(m)?, k, &cfg)?;
            let rows: Vec<Value> = t
                .iter()
                .map(|&t| {
                    let (phi, sum) = (d.char_fn(t), d.char_fn_fourier(t));
                    json!({ "t": t, "char_fn": phi, "fourier_sum": sum, "difference": (phi - sum).abs() })
                })
                .collect();
            Ok(Output::json("fejer-charfn", json!({ "m": m, "k": k, "values": rows })))
        }
        FejerCommand::Pzero { m, k, method } => {
            let mut out = serde_json::Map::new();
            let want = |x: MethodArg| matches!(method, MethodArg::All) || std::mem::discriminant(&method) == std::mem::discriminant(&x);
            if want(MethodArg::Exact) {
                match fejer::p_zero(m, k, PZeroMethod::Exact, &cfg) {
                    Ok(p) => {
                        out.insert("exact".into(), p_zero_json(&p));
                    }
                    Err(e @ fejer::FejerError::SupportCap { .. }) if matches!(method, MethodArg::All) => {
                        out.insert("exact".into(), json!({ "skipped": e.to_string() }));
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            if want(MethodArg::Quadrature) {
                out.insert("quadrature".into(), p_zero_json(&fejer::p_zero(m, k, PZeroMethod::Quadrature, &cfg)?));
            }
            if want(MethodArg::Asymptotic) {
                out.insert("asymptotic".into(), p_zero_json(&fejer::p_zero(m, k, PZeroMethod::Asymptotic, &cfg)?));
                out.insert("local_limit".into(), json!(fejer::p_zero_local_limit(m, k)));
            }
            out.insert("lower_bound".into(), json!(fejer::p_zero_lower_bound(m, k, c.c0)));
            Ok(Output::json("fejer-pzero", json!({ "m": m, "k": k, "p_zero": out })))
        }
        FejerCommand::Calibrate { m_max, k_max } => {
            let cal = fejer::calibrate_c0(m_max, k_max, &cfg)?;
            let summary = Summary::from_checks([("C0 = 0.2, k0 = 1 holds", cal.default_violations.is_empty())]);
            Ok(Output {
                name: "fejer-calibrate",
                results: json!({ "m_max": m_max, "k_max": k_max, "calibration": cal }),
                summary,
                csv: None,
                csv_to_stdout: false,
            })
        }
    }
}

fn cmd_replay(cmd: ReplayCommand, c: &RunConfig) -> Result<Output, CliError> {
    let cfg = replay_cfg(c);
    match cmd {
        ReplayCommand::Sinc { freq, m, k, t } => {
            let instance = load_instance(&freq, c)?;
            let wsd = WeightedSumDistribution::from_parameters(&instance, m, k, &cfg)?;
            let sinc = replay::sinc_expectation(&wsd, t);
            let inverse = replay::inverse_moment(&wsd);
            let radius = u64::from(m - 1) * u64::from(k);
            let bound = if radius == 0 {
                None
            } else {
                Some(1.0 / (PI * lattice::xi(&instance, radius, &cfg.lattice)?.value))
            };
            Ok(Output::json(
                "replay-sinc",
                json!({
                    "m": m, "k": k, "T": t, "tuples": wsd.tuples(),
                    "sinc_expectation": sinc,
                    "inverse_moment": inverse,
                    "one_over_pi_xi": bound,
                }),
            ))
        }
        ReplayCommand::Smalldev { freq, m, k, eps } => {
            if eps.is_empty() {
                return Err(CliError::Usage("give at least one --eps".into()));
            }
            let instance = load_instance(&freq, c)?;
            let wsd = WeightedSumDistribution::from_parameters(&instance, m, k, &cfg)?;
            let rows = eps
                .iter()
                .map(|&e| {
                    let p = replay::small_deviation(&wsd, e)?;
                    let v = num_traits::ToPrimitive::to_f64(&p).unwrap_or(f64::NAN);
                    Ok(json!({ "epsilon": e, "probability": p.to_string(), "value": v }))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok(Output::json("replay-smalldev", json!({ "m": m, "k": k, "values": rows })))
        }
        ReplayCommand::Kr { r, x } => {
            let kr = replay::k_of_r(r)?;
            let identity = x.map(|x| replay::absr_identity_check(x, r, cfg.quad)).transpose()?;
            Ok(Output::json("replay-kr", json!({ "k_of_r": kr, "identity": identity })))
        }
    }
}

fn parse_grid(s: &str) -> Result<LiminfGrid, CliError> {
    if s == "integers" {
        return Ok(LiminfGrid::Integers);
    }
    s.strip_prefix("uniform:")
        .and_then(|n| n.parse().ok())
        .map(|samples| LiminfGrid::Uniform { samples })
        .ok_or_else(|| CliError::Usage(format!("grid must be `integers` or `uniform:<samples>`, got {s:?}")))
}

fn cmd_liminf(a: crate::LiminfArgs, c: &RunConfig) -> Result<Output, CliError> {
    let instance = load_instance(&a.freq, c)?;
    let betas = if a.betas.is_empty() { vec![0.0; instance.len()] } else { a.betas.clone() };
    check_len("--betas", betas.len(), instance.len())?;
    let grid = parse_grid(&a.grid)?;
    let trace = search::liminf_scan(&instance.values_f64(), &betas, a.t_max, grid)?;
    let mut csv = String::from("t,f,running_min,product,product_running_min\n");
    for p in &trace {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            csv_f64(p.t),
            csv_f64(p.f),
            csv_f64(p.running_min),
            csv_opt(p.product),
            csv_opt(p.product_running_min)
        ));
    }
    let last = trace.last().cloned();
    Ok(Output {
        name: "liminf",
        results: json!({ "points": trace.len(), "final": last, "trace": trace }),
        summary: Summary::none(),
        csv: Some(("liminf.csv".into(), csv)),
        csv_to_stdout: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_syntax() {
        assert_eq!(parse_sweep("omega=1..8").unwrap(), (1, 8));
        assert_eq!(parse_sweep("omega=2..=3").unwrap(), (2, 3));
        assert!(parse_sweep("n=1..2").is_err());
        assert!(parse_sweep("omega=3..1").is_err());
        assert!(parse_sweep("omega=0..1").is_err());
    }

    #[test]
    fn length_syntax() {
        assert_eq!(parse_length("auto").unwrap(), None);
        assert_eq!(parse_length("2.5").unwrap(), Some(2.5));
        assert!(parse_length("-1").is_err());
        assert!(parse_length("x").is_err());
    }

    #[test]
    fn grid_syntax() {
        assert_eq!(parse_grid("integers").unwrap(), LiminfGrid::Integers);
        assert_eq!(parse_grid("uniform:10").unwrap(), LiminfGrid::Uniform { samples: 10 });
        assert!(parse_grid("uniform").is_err());
    }
}
