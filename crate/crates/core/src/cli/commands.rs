use serde_json::{json, Value};

use super::output::{emit, Rendered};
use super::{CliConfig, Cli, Command, EXIT_FAIL, EXIT_OK};
use crate::calogero::suites::{run_suite, Status, Suite, SuiteConfig};
use crate::calogero::{CalogeroError, Model};
use crate::polyring::{Backend, Poly};
use crate::rootsys::{RepKind, RepSet};

pub fn execute(cli: &Cli) -> Result<i32, CalogeroError> {
    let cfg = CliConfig::from_args(&cli.system)?;
    if let Some(n) = &cfg.notice {
        eprintln!("notice: {n}");
    }
    let (rendered, code) = match &cli.command {
        Command::Info => (info(&cfg)?, EXIT_OK),
        Command::Spectrum => (spectrum(&cfg)?, EXIT_OK),
        Command::Eigen { state } => eigen(&cfg, &parse_state(state)?)?,
        Command::Eta { j } => (eta(&cfg, *j)?, EXIT_OK),
        Command::Heisenberg { j, state } => heisenberg(&cfg, *j, &parse_state(state)?)?,
        Command::Verify { suite, inject_fault } => verify(&cfg, suite.parse()?, *inject_fault)?,
    };
    let banner = (cfg.backend == Some(Backend::Float)).then_some("backend: float, 17 significant digits");
    emit(&rendered.render(cfg.format, banner)?, cfg.out.as_deref())?;
    Ok(code)
}

fn parse_state(text: &str) -> Result<Vec<u32>, CalogeroError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .map_err(|_| CalogeroError::Usage(format!("bad quantum number {s:?} in --state")))
        })
        .collect()
}

fn to_json<T: serde::Serialize>(x: &T) -> Result<Value, CalogeroError> {
    serde_json::to_value(x).map_err(|e| CalogeroError::Internal(format!("json encoding failed: {e}")))
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn poly_rows(p: &Poly) -> (Vec<String>, Vec<Vec<String>>) {
    let mut header: Vec<String> = (1..=p.nvars()).map(|i| format!("q{i}")).collect();
    header.push("coeff".into());
    let rows = p
        .terms()
        .map(|(m, c)| {
            let mut row: Vec<String> = m.exps().iter().map(ToString::to_string).collect();
            row.push(c.to_exact_string());
            row
        })
        .collect();
    (header, rows)
}

fn with_poly_table(r: Rendered, p: &Poly) -> Rendered {
    let (header, rows) = poly_rows(p);
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    r.table(&header, rows)
}

fn info(cfg: &CliConfig) -> Result<Rendered, CalogeroError> {
    let rs = cfg.root_system()?;
    let summary = rs.summary();
    let default = cfg.repset.unwrap_or_else(|| RepKind::default_for(&rs));
    let sets: Vec<(RepKind, usize)> = RepKind::ALL
        .into_iter()
        .filter_map(|k| RepSet::build(&rs, k).ok().map(|s| (k, s.len())))
        .collect();
    let e0 = rs.ground_state_energy().to_exact_string();
    let json = json!({
        "system": summary,
        "degrees": rs.degrees(),
        "ground_state_energy": e0,
        "energy_unit": "omega",
        "repsets": sets.iter().map(|(k, d)| json!({"kind": k.name(), "dim": d, "default": *k == default})).collect::<Vec<_>>(),
        "notice": cfg.notice,
    });
    let mut text = format!("system {} in R^{} (backend {})\n", rs.name(), rs.dim(), rs.backend().name());
    text.push_str(&format!("degrees {{{}}}\n", join(rs.degrees())));
    if rs.hidden_modes() > 0 {
        text.push_str(&format!("{} free centre-of-mass mode(s) not counted in the degrees or E0\n", rs.hidden_modes()));
    }
    text.push_str(&format!("E0 = {e0} ω\n"));
    for (orbit, g) in rs.couplings() {
        text.push_str(&format!("g_{orbit} = {g}\n"));
    }
    text.push_str(&format!("positive roots ({})\n", rs.positive_roots().len()));
    for entry in &summary.positive_roots {
        let mark = if entry.simple { "  simple" } else { "" };
        text.push_str(&format!("  ({})  {}{mark}\n", entry.vector.join(", "), entry.orbit));
    }
    text.push_str("representation sets\n");
    for (k, d) in &sets {
        let mark = if *k == default { "  default" } else { "" };
        text.push_str(&format!("  {} ({d}){mark}\n", k.name()));
    }
    let mut rows = vec![
        vec!["system".into(), rs.name()],
        vec!["backend".into(), rs.backend().name()],
        vec!["degrees".into(), join(rs.degrees())],
        vec!["ground_state_energy".into(), e0],
        vec!["positive_roots".into(), rs.positive_roots().len().to_string()],
    ];
    for (k, d) in &sets {
        rows.push(vec![format!("repset:{}", k.name()), d.to_string()]);
    }
    Ok(Rendered::new(json, text).table(&["key", "value"], rows))
}

fn spectrum(cfg: &CliConfig) -> Result<Rendered, CalogeroError> {
    let rs = cfg.root_system()?;
    let s = rs.spectrum_levels(cfg.max_level);
    let mut text = format!("{}: degrees {{{}}}, E0 = {} ω\n", rs.name(), join(&s.degrees), s.ground_state_energy);
    text.push_str("level  energy  degeneracy\n");
    let mut rows = Vec::new();
    for l in &s.levels {
        text.push_str(&format!("{:>5}  {} ω  {}\n", l.level, l.energy, l.degeneracy));
        rows.push(vec![l.level.to_string(), l.energy.clone(), l.degeneracy.to_string()]);
    }
    Ok(Rendered::new(to_json(&s)?, text).table(&["level", "energy", "degeneracy"], rows))
}

fn eigen(cfg: &CliConfig, n: &[u32]) -> Result<(Rendered, i32), CalogeroError> {
    let m = cfg.model()?;
    let e = m.build_eigenfunction(n)?;
    let text = format!(
        "P({}) at E - E0 = {} ω ({})\n{}\n",
        join(&e.n),
        e.eigenvalue,
        if e.verified { "verified" } else { "NOT an eigenfunction" },
        e.poly
    );
    let code = if e.verified { EXIT_OK } else { EXIT_FAIL };
    Ok((with_poly_table(Rendered::new(to_json(&e)?, text), &e.poly), code))
}

fn eta(cfg: &CliConfig, j: usize) -> Result<Rendered, CalogeroError> {
    let m = cfg.model()?;
    let s = m.sinusoidal_coordinate(j)?;
    let pieces: Vec<String> = s
        .pieces
        .iter()
        .map(|p| format!("{}{} ({})", if p.sign < 0 { "-" } else { "+" }, p.repset, p.dim))
        .collect();
    let text = format!("eta({j}), f = {}, from {}\n{}\n", s.f, pieces.join(" "), s.eta);
    Ok(with_poly_table(Rendered::new(to_json(&s)?, text), &s.eta))
}

fn heisenberg(cfg: &CliConfig, j: usize, n: &[u32]) -> Result<(Rendered, i32), CalogeroError> {
    let m: Model = cfg.model()?;
    let state = m.build_eigenfunction(n)?;
    let d = m.heisenberg_on(j, &state.n, &state.poly)?;
    let check = m.check_heisenberg(&d, &state.poly, state.eigenvalue)?;
    let mut text = format!("eta({j}) on P({}), f = {}\n", join(&d.state), d.f);
    let mut rows = Vec::new();
    for c in &d.components {
        text.push_str(&format!("freq {:>3}: {}\n", c.freq, c.poly));
        rows.push(vec![c.freq.to_string(), c.poly.to_string()]);
    }
    let code = if check.pass() && state.verified {
        EXIT_OK
    } else {
        text.push_str(&format!("check failed: {}\n", check.failure.clone().unwrap_or_else(|| "eigenvalue".into())));
        EXIT_FAIL
    };
    Ok((Rendered::new(to_json(&d)?, text).table(&["freq", "poly"], rows), code))
}

fn verify(cfg: &CliConfig, suite: Suite, inject_fault: bool) -> Result<(Rendered, i32), CalogeroError> {
    let m = cfg.model()?;
    let sc = SuiteConfig { max_degree: cfg.max_degree, max_level: cfg.max_level, seed: cfg.seed, inject_fault };
    let report = run_suite(&m, suite, &sc)?;
    let mut text = String::new();
    let mut rows = Vec::new();
    for c in &report.cases {
        let status = if c.status == Status::Pass { "PASS" } else { "FAIL" };
        match &c.detail {
            Some(d) => text.push_str(&format!("{status} {}: {d}\n", c.id)),
            None => text.push_str(&format!("{status} {}\n", c.id)),
        }
        rows.push(vec![
            report.suite.clone(),
            c.id.clone(),
            status.to_lowercase(),
            c.detail.clone().unwrap_or_default(),
        ]);
    }
    for s in &report.budget.skipped {
        text.push_str(&format!("SKIP {s}\n"));
    }
    let failed = report.failures().count();
    text.push_str(&format!(
        "{} on {}: {} cases, {} failed, {} skipped\n",
        report.suite,
        report.system.name,
        report.cases.len(),
        failed,
        report.budget.skipped.len()
    ));
    let code = if report.pass() { EXIT_OK } else { EXIT_FAIL };
    Ok((Rendered::new(to_json(&report)?, text).table(&["suite", "id", "status", "detail"], rows), code))
}
