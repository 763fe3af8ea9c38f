//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p g2re-core --test acceptance`.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use g2re_core::aq_g2::{check_intertwiner_props, solve_intertwiner, IntertwinerTable, SolveOptions};
use g2re_core::geometry::{build_pappus, positive_roots, RootVector};
use g2re_core::golden::reproduce_golden;
use g2re_core::lj::UParams;
use g2re_core::qboson::{boundary_normaliser_series, truncated_sandwich_oracle, truncated_trace_oracle, Flavor, Op};
use g2re_core::quantized_re::{match_all_components, verify_boundary_conjecture, verify_qre};
use g2re_core::reduction::{build_g, build_r, Kind};
use g2re_core::scalar::Series;
use g2re_core::scalar::{sc, Scalar};
use g2re_core::tensor::WeightVector;
use g2re_core::verify::{rescaling_check, verify_g2re, verify_ybe, EquationReport, VerifyMode};

use num_rational::BigRational;
use num_traits::One;

type Outcome = Result<String, String>;

fn equation(rep: &EquationReport, want_entries: Option<usize>) -> Outcome {
    let line = format!("{} {} n={}: {} entries, {} residuals", rep.equation, rep.kind, rep.n, rep.entries_checked, rep.residuals.len());
    if let Some(w) = want_entries {
        if rep.entries_checked != w {
            return Err(format!("{line}; expected {w} entries"));
        }
    }
    if rep.passed() {
        Ok(line)
    } else {
        let r = &rep.residuals[0];
        Err(format!("{line}; first at {} -> {}: {}", r.input, r.output, r.detail))
    }
}

fn all(parts: Vec<Outcome>) -> Outcome {
    let mut ok = Vec::new();
    for p in parts {
        ok.push(p?);
    }
    Ok(ok.join("; "))
}

fn intertwiner_example() -> Outcome {
    let t = solve_intertwiner(2, 4, &SolveOptions::default()).map_err(|e| e.to_string())?;
    let want = [
        ([0, 0, 0, 2, 0, 0], "-q^3*(1 - q^4)*(1 - q^6)*(1 - q^2 - q^6)"),
        ([0, 0, 1, 0, 0, 1], "-q^2*(1 - q^4)^2*(1 - q^6)*(1 + q^4)"),
        ([0, 1, 0, 0, 1, 0], "(1 - q^4)*(1 - q^6)*(1 - q^2 + q^10)"),
        ([2, 0, 0, 0, 0, 4], "q^11"),
        ([0, 2, 0, 0, 0, 2], "q^3*(1 - q^6)*(1 - q^4 - q^6 - 2*q^8 - q^10 - q^12)"),
        ([1, 0, 0, 0, 1, 1], "q^2*(1 - q^4)*(1 - q^6 + q^14)"),
        ([1, 0, 0, 1, 0, 2], "q^4*(1 + q^2 - 2*q^6 - q^8 - q^10 + q^14 + q^16 + q^18)"),
        ([1, 1, 0, 0, 0, 3], "q^6*(1 + q^2)*(1 - q^8 - q^12)"),
        ([0, 1, 0, 1, 0, 1], "q*(1 + q^2)*(1 - q^6)*(1 - q^2 - q^4 - q^6 + q^10 + q^12 + q^14)"),
    ];
    let inp = [1, 0, 0, 1, 0, 2];
    let blk = t.block(WeightVector::new(2, 4)).ok_or("block (2,4) missing")?;
    let mut nonzero = 0;
    for out in &blk.basis {
        let got = t.entry(out, &inp).unwrap_or_else(Scalar::zero);
        let exp = want.iter().find(|w| &w.0 == out).map(|w| sc(w.1)).unwrap_or_else(Scalar::zero);
        if got != exp {
            return Err(format!("F^{out:?}_100102 = {got}, expected {exp}"));
        }
        nonzero += usize::from(!got.is_zero());
    }
    if nonzero != want.len() {
        return Err(format!("{nonzero} nonzero entries, expected {}", want.len()));
    }
    Ok(format!("block (2,4) dim {}, {nonzero} nonzero entries exact", blk.dim()))
}

fn intertwiner_props(t: &IntertwinerTable) -> Outcome {
    let rep = check_intertwiner_props(t);
    let line = format!("{} blocks, {} relations", rep.blocks.len(), rep.relations_checked);
    if rep.passed() {
        Ok(line)
    } else {
        Err(format!("{line}; failures {:?}", rep.relation_failures.iter().take(3).collect::<Vec<_>>()))
    }
}

fn quantized_equation(t: &IntertwinerTable) -> Outcome {
    let rep = verify_qre(t, 3, 6, &UParams::generic());
    let bad: Vec<&String> = rep.components.iter().filter(|c| !c.failures.is_empty()).map(|c| &c.component).collect();
    if !rep.passed() || rep.components.len() != 64 {
        return Err(format!("{} components, failing {bad:?}", rep.components.len()));
    }
    let m = match_all_components(&UParams::generic());
    let unmatched = m.entries.iter().filter(|e| e.constant.is_none()).count();
    if !m.passed() || m.entries.len() != 64 {
        return Err(format!("{unmatched} of {} components not proportional to their partner", m.entries.len()));
    }
    Ok("64 components hold on blocks to (3,6); 64 partner matches".into())
}

fn golden() -> Outcome {
    let rep = reproduce_golden();
    let line = format!("{} matrices, {} entries", rep.matrices.len(), rep.entries_compared);
    match rep.diffs.first() {
        None => Ok(line),
        Some(d) => Err(format!("{line}; {} {} -> {}: expected {}, found {}", d.matrix, d.input, d.output, d.expected, d.found)),
    }
}

fn yang_baxter() -> Outcome {
    let mut parts = Vec::new();
    for kind in [Kind::Trace, Kind::Boundary] {
        parts.push(equation(&verify_ybe(&build_r(kind, 1), &VerifyMode::Symbolic), None));
        parts.push(equation(&verify_ybe(&build_r(kind, 2), &VerifyMode::points(5, 11)), None));
    }
    all(parts)
}

fn g2_reflection() -> Outcome {
    let generic = UParams::generic();
    let spec = UParams::default_specialized();
    let mut parts = Vec::new();
    for kind in [Kind::Trace, Kind::Boundary] {
        let (r, g) = (build_r(kind, 1), build_g(kind, 1, &generic));
        // Three-fold space at n = 1 is 8-dimensional.
        parts.push(equation(&verify_g2re(&r, &g, &VerifyMode::Symbolic), Some(64)));
    }
    for kind in [Kind::Trace, Kind::Boundary] {
        let (r, g) = (build_r(kind, 2), build_g(kind, 2, &spec));
        parts.push(equation(&verify_g2re(&r, &g, &VerifyMode::points(3, 7)), None));
    }
    all(parts)
}

fn boundary_conjecture(t: &IntertwinerTable) -> Outcome {
    let rep = verify_boundary_conjecture(t, 3, 6);
    let line = format!("{} blocks; {}", rep.blocks.len(), rep.note);
    if rep.all_hold() && !rep.blocks.is_empty() {
        Ok(line)
    } else {
        Err(line)
    }
}

fn random_word(rng: &mut ChaCha8Rng, fl: Flavor) -> Op {
    let letters = [Op::a_plus(fl), Op::a_minus(fl), Op::k(fl)];
    let len = rng.gen_range(0..=5);
    let mut w = Op::scalar(fl, Scalar::from_int(rng.gen_range(1..=4i64).into()));
    for _ in 0..len {
        w = w.compose(&letters[rng.gen_range(0..3)]).expect("same flavor");
    }
    w
}

fn formula_cross_checks() -> Outcome {
    let order = 20;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for fl in [Flavor::One, Flavor::Three] {
        let norm = boundary_normaliser_series(fl, order);
        for k in 0..50 {
            let w = random_word(&mut rng, fl);
            let tr = Series::expand(&w.trace_z(), order).map_err(|e| e.to_string())?;
            if tr != truncated_trace_oracle(&w, order) {
                return Err(format!("{fl:?} word {k}: trace differs"));
            }
            // Ladder shifts are at most 5, so 5 extra states keep every order exact.
            let oracle = truncated_sandwich_oracle(&w, order as u32 + 5);
            let built = Series::expand(&w.sandwich_reduced(), order).map_err(|e| e.to_string())?.mul(&norm);
            if oracle.coeffs[..=order] != built.coeffs[..] {
                return Err(format!("{fl:?} word {k}: sandwich differs"));
            }
        }
    }
    Ok(format!("50 words per flavor, orders 0..={order}"))
}

fn geometry() -> Outcome {
    let want = [(1, 0), (1, 1), (2, 3), (1, 2), (1, 3), (0, 1)].map(|(a, b)| RootVector::new(a, b));
    if positive_roots() != want {
        return Err(format!("roots {:?}", positive_roots()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let v: f64 = rng.gen_range(0.02..1.2);
        let u: f64 = rng.gen_range(v + 0.02..1.3);
        let (_, rep) = build_pappus(u, v).map_err(|e| e.to_string())?;
        if !rep.passed() {
            return Err(format!("u={u}, v={v}: {rep:?}"));
        }
        worst = rep.angle_errors.iter().fold(worst.max(rep.collinearity).max(rep.tan_identity), |a, b| a.max(*b));
    }
    Ok(format!("roots exact; 100 configurations, worst defect {worst:.1e}"))
}

fn rescaling() -> Outcome {
    let (r, g) = (build_r(Kind::Trace, 1), build_g(Kind::Trace, 1, &UParams::generic()));
    equation(&rescaling_check(&r, &g, &BigRational::one(), &VerifyMode::Symbolic), Some(64))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let table = solve_intertwiner(3, 6, &SolveOptions::default());
    let solve_note = format!("table (3,6) solved in {:.1}s", start.elapsed().as_secs_f64());
    let with_table = |f: fn(&IntertwinerTable) -> Outcome| match &table {
        Ok(t) => f(t),
        Err(e) => Err(format!("solve failed: {e}")),
    };
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("intertwiner example column", Box::new(intertwiner_example)),
        ("intertwiner properties to (3,6)", Box::new(move || with_table(intertwiner_props))),
        ("quantized equation components", Box::new(move || with_table(quantized_equation))),
        ("golden n=1,2 matrices", Box::new(golden)),
        ("Yang-Baxter equation", Box::new(yang_baxter)),
        ("G2 reflection equation", Box::new(g2_reflection)),
        ("boundary vector identities", Box::new(move || with_table(boundary_conjecture))),
        ("trace and sandwich formulas vs oracle", Box::new(formula_cross_checks)),
        ("scattering geometry and roots", Box::new(geometry)),
        ("rescaled R keeps the equation", Box::new(rescaling)),
    ];
    println!("{solve_note}");
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = f();
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(d) => println!("[PASS] {:>2} {name} ({secs:.1}s): {d}", k + 1),
            Err(d) => {
                failed += 1;
                println!("[FAIL] {:>2} {name} ({secs:.1}s): {d}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
