use std::time::Instant;

use num_rational::BigRational;
use serde_json::{json, Value};

use g2re_core::aq_g2::{check_intertwiner_props, solve_intertwiner, IntertwinerTable, SolveOptions};
use g2re_core::geometry::{build_pappus, positive_roots};
use g2re_core::golden::reproduce_golden;
use g2re_core::quantized_re::{match_all_components, verify_boundary_conjecture, verify_qre};
use g2re_core::reduction::{block_decomposition, build_g, build_r, highest_entry_checks, Kind};
use g2re_core::verify::{rescaling_check, verify_g2re, verify_ybe, EquationReport};

use crate::{Cli, Command, TableArgs};

pub struct Outcome {
    pub summary: Vec<String>,
    pub artifact: Value,
    pub passed: bool,
    pub first_failure: Option<String>,
}

impl Outcome {
    fn new(summary: Vec<String>, artifact: Value, failures: Vec<String>) -> Outcome {
        Outcome { summary, artifact, passed: failures.is_empty(), first_failure: failures.into_iter().next() }
    }
}

fn status(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn load_or_solve(t: &TableArgs) -> Result<(IntertwinerTable, String), String> {
    let (pmax, qmax) = (t.cutoffs.pmax, t.cutoffs.qmax);
    if pmax < 0 || qmax < 0 {
        return Err("cutoffs must be non-negative".into());
    }
    if let Some(path) = &t.table {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        let table = IntertwinerTable::from_json(&v)?;
        if table.pmax < pmax || table.qmax < qmax {
            return Err(format!("table covers ({}, {}), need ({pmax}, {qmax})", table.pmax, table.qmax));
        }
        return Ok((table, format!("loaded {}", path.display())));
    }
    let start = Instant::now();
    let table = solve_intertwiner(pmax, qmax, &SolveOptions::default()).map_err(|e| e.to_string())?;
    Ok((table, format!("solved in {:.1}s", start.elapsed().as_secs_f64())))
}

fn equation_outcome(rep: EquationReport) -> Outcome {
    let ok = rep.passed();
    let mode = match &rep.mode {
        g2re_core::verify::VerifyMode::Symbolic => "symbolic".to_string(),
        g2re_core::verify::VerifyMode::Points { count, seed, .. } => format!("{count} points, seed {seed}"),
    };
    let mut summary = vec![format!(
        "{} kind={} n={} u={} ({mode}): {} entries checked, {} nonzero residuals, {} ms: {}",
        rep.equation,
        rep.kind,
        rep.n,
        rep.umode.label(),
        rep.entries_checked,
        rep.residuals.len(),
        rep.elapsed_ms,
        status(ok)
    )];
    for r in rep.residuals.iter().take(5) {
        summary.push(format!("  residual {} -> {}: {}", r.input, r.output, r.detail));
    }
    let failures = rep.residuals.first().map(|r| format!("{} residual at {} -> {}", rep.equation, r.input, r.output));
    Outcome::new(summary, json!(rep), failures.into_iter().collect())
}

pub fn run(cli: &Cli) -> Result<Outcome, String> {
    match &cli.command {
        Command::Roots => {
            let roots = positive_roots();
            let summary = roots.iter().enumerate().map(|(k, r)| format!("theta_{} = {r}", k + 1)).collect();
            Ok(Outcome::new(summary, json!({ "roots": roots }), vec![]))
        }
        Command::Pappus { u, v } => {
            let (cfg, rep) = build_pappus(*u, *v).map_err(|e| e.to_string())?;
            let ok = rep.passed();
            let summary = vec![
                format!("w = {:.12}, |tan w - tan u - tan v| = {:.2e}", cfg.w, rep.tan_identity),
                format!("max angle identity error = {:.2e}", rep.angle_errors.iter().cloned().fold(0.0, f64::max)),
                format!("P2, P3, O1 collinearity defect = {:.2e}: {}", rep.collinearity, status(ok)),
            ];
            let failures = if ok { vec![] } else { vec!["configuration checks exceed 1e-9".into()] };
            Ok(Outcome::new(summary, json!({ "config": cfg, "report": rep }), failures))
        }
        Command::Intertwiner(c) => {
            let (table, how) = load_or_solve(&TableArgs { cutoffs: *c, table: None })?;
            let summary = vec![format!(
                "intertwiner to ({}, {}): {} blocks, {} entries, {how}",
                c.pmax,
                c.qmax,
                table.blocks.len(),
                table.total_entries()
            )];
            Ok(Outcome::new(summary, table.to_json(), vec![]))
        }
        Command::CheckF(t) => {
            let (table, how) = load_or_solve(t)?;
            let rep = check_intertwiner_props(&table);
            let mut failures: Vec<String> = rep
                .blocks
                .iter()
                .filter(|b| !(b.involution && b.integral && b.symmetric))
                .map(|b| format!("block {}", b.weight))
                .collect();
            failures.extend(rep.relation_failures.iter().cloned());
            let summary = vec![format!(
                "{} blocks ({how}), {} relations checked, {} failures: {}",
                rep.blocks.len(),
                rep.relations_checked,
                failures.len(),
                status(failures.is_empty())
            )];
            Ok(Outcome::new(summary, json!(rep), failures))
        }
        Command::VerifyQre { table, u } => {
            let u = u.resolve()?;
            let (t, how) = load_or_solve(table)?;
            let rep = verify_qre(&t, table.cutoffs.pmax, table.cutoffs.qmax, &u);
            let failures: Vec<String> = rep
                .components
                .iter()
                .filter(|c| !c.failures.is_empty())
                .map(|c| format!("component {}: {}", c.component, c.failures.join(", ")))
                .collect();
            let blocks: usize = rep.components.iter().map(|c| c.blocks_checked).sum();
            let summary = vec![format!(
                "{} components, {blocks} block checks ({how}), u={}: {}",
                rep.components.len(),
                rep.u_mode,
                status(rep.passed())
            )];
            Ok(Outcome::new(summary, json!(rep), failures))
        }
        Command::MatchAppendixA { u } => {
            let rep = match_all_components(&u.resolve()?);
            let failures: Vec<String> = rep
                .entries
                .iter()
                .filter(|e| e.constant.is_none())
                .map(|e| format!("component {} vs t_{}{}", e.component, e.generator.0, e.generator.1))
                .collect();
            let mut summary: Vec<String> = rep
                .entries
                .iter()
                .map(|e| {
                    let c = e.constant.as_deref().unwrap_or("not proportional");
                    format!("{} ~ t_{}{}: {c}", e.component, e.generator.0, e.generator.1)
                })
                .collect();
            summary.push(format!("{} of 64 matched: {}", 64 - failures.len(), status(rep.passed())));
            Ok(Outcome::new(summary, json!(rep), failures))
        }
        Command::CheckConjecture(t) => {
            let (table, how) = load_or_solve(t)?;
            let rep = verify_boundary_conjecture(&table, t.cutoffs.pmax, t.cutoffs.qmax);
            let mut summary: Vec<String> = rep
                .blocks
                .iter()
                .map(|b| format!("block {} dim {}: ket {} bra {}", b.weight, b.dim, status(b.ket), status(b.bra)))
                .collect();
            summary.push(format!("{} blocks ({how}): {}; {}", rep.blocks.len(), status(rep.all_hold()), rep.note));
            let failures = rep
                .blocks
                .iter()
                .filter(|b| !(b.ket && b.bra))
                .map(|b| format!("block {}", b.weight))
                .collect();
            Ok(Outcome::new(summary, json!(rep), failures))
        }
        Command::BuildR { kind, n } => {
            check_n(*n)?;
            let m = build_r((*kind).into(), *n);
            Ok(matrix_outcome("R", &m))
        }
        Command::BuildG { kind, n, u } => {
            check_n(*n)?;
            let m = build_g((*kind).into(), *n, &u.resolve()?);
            Ok(matrix_outcome("G", &m))
        }
        Command::VerifyYbe { kind, n, mode } => {
            check_n(*n)?;
            let mode = mode.resolve()?;
            Ok(equation_outcome(verify_ybe(&build_r((*kind).into(), *n), &mode)))
        }
        Command::VerifyG2re { kind, n, u, mode, rescale } => {
            check_n(*n)?;
            let mode = mode.resolve()?;
            let u = u.resolve()?;
            let kind: Kind = (*kind).into();
            let r = build_r(kind, *n);
            let g = build_g(kind, *n, &u);
            let rep = match rescale {
                None => verify_g2re(&r, &g, &mode),
                Some(c) => {
                    if kind != Kind::Trace {
                        return Err("--rescale applies to the trace kind only".into());
                    }
                    let c: BigRational = c.parse().map_err(|_| format!("--rescale {c:?} is not a rational"))?;
                    rescaling_check(&r, &g, &c, &mode)
                }
            };
            Ok(equation_outcome(rep))
        }
        Command::ReproduceAppendixB => {
            let rep = reproduce_golden();
            let mut summary = vec![format!(
                "{} matrices, {} entries compared, {} diffs: {}",
                rep.matrices.len(),
                rep.entries_compared,
                rep.diffs.len(),
                status(rep.passed())
            )];
            for d in rep.diffs.iter().take(10) {
                summary.push(format!("  {} {} -> {}: expected {}, found {}", d.matrix, d.input, d.output, d.expected, d.found));
            }
            let failures = rep.diffs.iter().map(|d| format!("{} {} -> {}", d.matrix, d.input, d.output)).collect();
            Ok(Outcome::new(summary, json!(rep), failures))
        }
    }
}

fn check_n(n: usize) -> Result<(), String> {
    if (1..=4).contains(&n) {
        Ok(())
    } else {
        Err(format!("n = {n} is outside 1..=4"))
    }
}

fn matrix_outcome(name: &str, m: &g2re_core::reduction::SpectralMatrix) -> Outcome {
    let high = highest_entry_checks(m);
    let blocks = block_decomposition(m);
    let mut failures: Vec<String> = high
        .checks
        .iter()
        .filter(|c| !c.ok)
        .map(|c| format!("distinguished entry {} -> {}", c.input, c.output))
        .collect();
    failures.extend(blocks.stray.iter().cloned());
    let summary = vec![
        format!(
            "{name} kind={} n={} u={}: {} nonzero entries, {} blocks",
            m.kind,
            m.n,
            m.umode.label(),
            m.entries.len(),
            blocks.blocks.len()
        ),
        format!("distinguished entries: {}, selection rules: {}", status(high.passed()), status(blocks.passed())),
    ];
    Outcome::new(summary, m.to_json(), failures)
}
