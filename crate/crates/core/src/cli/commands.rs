use std::fmt::Write;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{check_budget, load_coefficients, load_monoid, CliError, Command, Report, BUILTIN_COEFFICIENTS};
use crate::cohomology::{cd_probe, cochain_level, default_battery, CochainComplex, DEFAULT_MAX_DEGREE};
use crate::facnerve::nerve;
use crate::monoid::{builtin, is_zero_cancellative, CancellationWitness, MonoidWithZero, BUILTIN_MONOIDS};
use crate::natsys::NaturalSystem;
use crate::resolution::{
    augmentation, check_resolution_exact_with, psi, psi_check, psi_inverse, BarComplex, ComplexPosition, FailureKind,
};

/// Random cochains drawn per degree by `psi-check`.
const PSI_SAMPLES: usize = 8;

pub(super) fn dispatch(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Validate { monoid } => validate(&monoid.monoid),
        Command::Nerve { monoid, max_degree } => nerve_report(&monoid.monoid, *max_degree),
        Command::Cohomology { monoid, coeff, budget } => {
            let m = load_monoid(&monoid.monoid)?;
            let n = budget.max_degree.unwrap_or(DEFAULT_MAX_DEGREE);
            check_budget(&m, n, budget.force)?;
            cohomology(&monoid.monoid, &m, coeff, n)
        }
        Command::CdProbe { monoid, battery, budget } => {
            let m = load_monoid(&monoid.monoid)?;
            let n = budget.max_degree.unwrap_or(DEFAULT_MAX_DEGREE);
            check_budget(&m, n, budget.force)?;
            if battery != "default" {
                return Err(CliError::Invalid(format!("unknown battery {battery:?} (only \"default\")")));
            }
            cd(&monoid.monoid, &m, n)
        }
        Command::ResolutionCheck { monoid, budget } => {
            let m = load_monoid(&monoid.monoid)?;
            let n = budget.max_degree.unwrap_or(DEFAULT_MAX_DEGREE).max(1);
            check_budget(&m, n, budget.force)?;
            resolution(&monoid.monoid, &m, n)
        }
        Command::PsiCheck {
            monoid,
            coeff,
            budget,
            seed,
        } => {
            let m = load_monoid(&monoid.monoid)?;
            let n = budget.max_degree.unwrap_or(2);
            check_budget(&m, n, budget.force)?;
            psi_report(&monoid.monoid, &m, coeff, n, *seed)
        }
        Command::ZeroCancellative { monoid } => zero_cancellative(&monoid.monoid),
    }
}

pub(super) fn list_builtins() -> Report {
    let mut text = String::from("monoids:\n");
    let mut monoids = Vec::new();
    for name in BUILTIN_MONOIDS {
        let m = builtin(name).expect("builtin names resolve");
        let _ = writeln!(text, "  {name} ({} elements: {})", m.order(), m.names().join(" "));
        monoids.push(json!({"name": name, "elements": m.names()}));
    }
    text.push_str("coefficients:\n");
    for c in BUILTIN_COEFFICIENTS {
        let _ = writeln!(text, "  {c}");
    }
    text.push_str("coefficient file kinds:\n  trivial-Z zero-module bar natural-system\n");
    Report {
        text,
        json: json!({
            "monoids": monoids,
            "coefficients": BUILTIN_COEFFICIENTS,
            "coefficient_file_kinds": ["trivial-Z", "zero-module", "bar", "natural-system"],
        }),
        passed: true,
        note: None,
    }
}

fn validate(spec: &str) -> Result<Report, CliError> {
    let m = load_monoid(spec)?;
    let one = m.name(m.identity());
    let zero = m.name(m.zero());
    let text = format!(
        "{spec}: valid monoid with zero\n  elements: {}\n  identity: {one}\n  zero: {zero}\n  commutative: {}\n",
        m.names().join(" "),
        yes_no(m.is_commutative())
    );
    Ok(Report {
        text,
        json: json!({
            "monoid": spec,
            "valid": true,
            "elements": m.names(),
            "identity": one,
            "zero": zero,
            "commutative": m.is_commutative(),
        }),
        passed: true,
        note: None,
    })
}

fn nerve_report(spec: &str, max_degree: usize) -> Result<Report, CliError> {
    let m = load_monoid(spec)?;
    let mut text = format!("monoid: {spec}\n");
    let mut levels = Vec::new();
    for n in 0..=max_degree {
        let tuples = nerve(&m, n);
        let shown: Vec<String> = tuples.iter().map(|t| t.display(&m).to_string()).collect();
        let _ = writeln!(text, "Ner_{n} ({}): {}", tuples.len(), shown.join(" "));
        let named: Vec<Vec<&str>> = tuples
            .iter()
            .map(|t| t.entries().iter().map(|&e| m.name(e)).collect())
            .collect();
        levels.push(json!({"degree": n, "size": tuples.len(), "tuples": named}));
    }
    Ok(Report {
        text,
        json: json!({"monoid": spec, "nerve": levels}),
        passed: true,
        note: None,
    })
}

fn cohomology(spec: &str, m: &MonoidWithZero, coeff: &str, n: usize) -> Result<Report, CliError> {
    let (name, d) = load_coefficients(m, coeff)?;
    let start = Instant::now();
    let complex = CochainComplex::new(m, &d, n).map_err(|e| CliError::Invalid(e.to_string()))?;
    let mut text = format!("monoid: {spec}\ncoefficients: {name}\n");
    let mut sizes = Vec::new();
    for k in 0..=n {
        let size = complex.level(k).tuples().len();
        let _ = writeln!(text, "|Ner_{k}| = {size}");
        sizes.push(size);
    }
    let mut groups = Vec::new();
    for k in 0..=n {
        let h = complex.cohomology(k).map_err(|e| CliError::Math(e.to_string()))?;
        let _ = writeln!(text, "H^{k} = {h}");
        groups.push(json!({"degree": k, "group": h}));
    }
    Ok(Report {
        text,
        json: json!({
            "monoid": spec,
            "coefficients": name,
            "max_degree": n,
            "nerve_sizes": sizes,
            "cohomology": groups,
        }),
        passed: true,
        note: Some(elapsed(start)),
    })
}

fn cd(spec: &str, m: &MonoidWithZero, n: usize) -> Result<Report, CliError> {
    let start = Instant::now();
    let battery = default_battery(m).map_err(|e| CliError::Invalid(e.to_string()))?;
    let report = cd_probe(m, &battery, n).map_err(|e| CliError::Math(e.to_string()))?;
    let mut text = format!("monoid: {spec}\nbattery: default ({} coefficient systems)\n", battery.len());
    for e in &report.entries {
        let _ = writeln!(text, "{}  H^{} = {}", e.coefficient, e.degree, e.group);
    }
    let high: Vec<_> = report.nonvanishing_from(2).collect();
    if high.is_empty() {
        text.push_str("no nonvanishing H^n for n ≥ 2 across battery\n");
    }
    for e in &high {
        let _ = writeln!(text, "H^{} nonzero for coefficient {}", e.degree, e.coefficient);
    }
    match report.top_nonvanishing {
        Some(k) => {
            let _ = writeln!(text, "c.d. evidence {k}");
        }
        None => text.push_str("c.d. evidence: all groups vanish\n"),
    }
    let _ = writeln!(text, "{}", report.verdict);
    Ok(Report {
        text,
        json: json!({"monoid": spec, "report": report}),
        passed: true,
        note: Some(elapsed(start)),
    })
}

fn resolution(spec: &str, m: &MonoidWithZero, n: usize) -> Result<Report, CliError> {
    let start = Instant::now();
    let bar = BarComplex::new(m, n);
    let mut text = format!("monoid: {spec}\naugmented bar complex up to B_{n}\n");
    let mut naturality = Vec::new();
    let eps = augmentation(m);
    naturality.push(("ε".to_string(), eps.is_natural(m)));
    for k in 1..=n {
        let d = bar.boundary(m, k).map_err(|e| CliError::Math(e.to_string()))?;
        naturality.push((format!("∂_{k}"), d.is_natural(m)));
    }
    let nat_line: Vec<String> = naturality
        .iter()
        .map(|(name, ok)| format!("{name} {}", ok_fail(*ok)))
        .collect();
    let _ = writeln!(text, "naturality: {}", nat_line.join(", "));
    let exact = check_resolution_exact_with(m, &bar);
    let positions: Vec<String> = std::iter::once("Z".to_string())
        .chain((0..n).map(|k| format!("B_{k}")))
        .collect();
    let failure_json = match &exact {
        Ok(()) => {
            let _ = writeln!(text, "exact at {} for every object", positions.join(", "));
            serde_json::Value::Null
        }
        Err(f) => {
            let what = match &f.kind {
                FailureKind::NotAComplex => "consecutive maps do not compose to zero".to_string(),
                FailureKind::Homology(h) => format!("homology {h}"),
            };
            let _ = writeln!(text, "object {}: not exact at {} ({what})", m.name(f.object), f.position);
            json!({
                "object": m.name(f.object),
                "position": match f.position {
                    ComplexPosition::Augmentation => "Z".to_string(),
                    ComplexPosition::Bar(k) => format!("B_{k}"),
                },
                "detail": what,
            })
        }
    };
    let passed = exact.is_ok() && naturality.iter().all(|(_, ok)| *ok);
    let _ = writeln!(text, "result: {}", pass_fail(passed));
    Ok(Report {
        text,
        json: json!({
            "monoid": spec,
            "max_degree": n,
            "naturality": naturality.iter().map(|(k, ok)| json!({"map": k, "natural": ok})).collect::<Vec<_>>(),
            "positions": positions,
            "failure": failure_json,
            "passed": passed,
        }),
        passed,
        note: Some(elapsed(start)),
    })
}

fn psi_report(spec: &str, m: &MonoidWithZero, coeff: &str, n: usize, seed: u64) -> Result<Report, CliError> {
    let (name, d) = load_coefficients(m, coeff)?;
    let start = Instant::now();
    let degrees = psi_check(m, &d, n).map_err(|e| CliError::Math(e.to_string()))?;
    let mut text = format!("monoid: {spec}\ncoefficients: {name}\n");
    let mut rows = Vec::new();
    let mut passed = true;
    for r in &degrees {
        let _ = writeln!(
            text,
            "degree {}: C^{} rank {} ({}), Hom(B_{},D) rank {} ({})",
            r.degree, r.degree, r.cochain_rank, r.cochain_group, r.degree, r.hom_rank, r.hom_group
        );
        let _ = writeln!(
            text,
            "  Ψ injective {}, surjective {}, Ψ∘Ψ⁻¹ {}, Ψ⁻¹∘Ψ {}, Ψ⁻¹ natural {}, chain map {}",
            ok_fail(r.injective),
            ok_fail(r.surjective),
            ok_fail(r.roundtrip_cochains),
            ok_fail(r.roundtrip_hom),
            ok_fail(r.inverse_natural),
            ok_fail(r.chain_map)
        );
        let _ = writeln!(
            text,
            "  H^{} = {} (cochains), {} (Hom-complex)",
            r.degree, r.cochain_cohomology, r.hom_cohomology
        );
        passed &= r.passed();
        rows.push(json!({
            "degree": r.degree,
            "cochain_rank": r.cochain_rank,
            "hom_rank": r.hom_rank,
            "cochain_group": r.cochain_group,
            "hom_group": r.hom_group,
            "injective": r.injective,
            "surjective": r.surjective,
            "roundtrip_cochains": r.roundtrip_cochains,
            "roundtrip_hom": r.roundtrip_hom,
            "inverse_natural": r.inverse_natural,
            "chain_map": r.chain_map,
            "cochain_cohomology": r.cochain_cohomology,
            "hom_cohomology": r.hom_cohomology,
            "failures": r.failures(),
        }));
    }
    let (good, total) = random_roundtrips(m, &d, n, seed)?;
    let _ = writeln!(text, "random elementwise roundtrips: {good}/{total} (seed {seed})");
    passed &= good == total;
    let _ = writeln!(text, "result: {}", pass_fail(passed));
    Ok(Report {
        text,
        json: json!({
            "monoid": spec,
            "coefficients": name,
            "max_degree": n,
            "degrees": rows,
            "random_roundtrips": {"passed": good, "total": total, "seed": seed},
            "passed": passed,
        }),
        passed,
        note: Some(elapsed(start)),
    })
}

/// `Ψ(Ψ⁻¹ f) = f` and naturality of `Ψ⁻¹ f` for random cochains `f`.
fn random_roundtrips(m: &MonoidWithZero, d: &NaturalSystem, n: usize, seed: u64) -> Result<(usize, usize), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = Arc::new(d.clone());
    let mut good = 0;
    let mut total = 0;
    for k in 0..=n {
        let level = cochain_level(m, &d, k).map_err(|e| CliError::Math(e.to_string()))?;
        for _ in 0..PSI_SAMPLES {
            let f: Vec<BigInt> = (0..level.rank()).map(|_| BigInt::from(rng.gen_range(-9..=9))).collect();
            let phi = psi_inverse(m, &d, k, &f).map_err(|e| CliError::Math(e.to_string()))?;
            let back = psi(m, &d, k, &phi);
            let diff: Vec<BigInt> = back.iter().zip(&f).map(|(a, b)| a - b).collect();
            total += 1;
            if phi.is_natural(m) && level.group().is_zero_element(&diff) {
                good += 1;
            }
        }
    }
    Ok((good, total))
}

fn zero_cancellative(spec: &str) -> Result<Report, CliError> {
    let m = load_monoid(spec)?;
    let result = is_zero_cancellative(&m);
    let (text, witness) = match result {
        Ok(()) => (format!("{spec}: 0-cancellative\n"), serde_json::Value::Null),
        Err(w) => {
            let (law, a, b, x, eq) = match w {
                CancellationWitness::Right { a, b, x } => ("right", a, b, x, format!(
                    "{}·{} = {}·{} ≠ 0",
                    m.name(a),
                    m.name(x),
                    m.name(b),
                    m.name(x)
                )),
                CancellationWitness::Left { a, b, x } => ("left", a, b, x, format!(
                    "{}·{} = {}·{} ≠ 0",
                    m.name(x),
                    m.name(a),
                    m.name(x),
                    m.name(b)
                )),
            };
            (
                format!("{spec}: not 0-cancellative ({law} cancellation fails: {eq})\n"),
                json!({"side": law, "a": m.name(a), "b": m.name(b), "x": m.name(x)}),
            )
        }
    };
    Ok(Report {
        text,
        json: json!({"monoid": spec, "zero_cancellative": witness.is_null(), "witness": witness}),
        passed: true,
        note: None,
    })
}

fn elapsed(start: Instant) -> String {
    format!("elapsed: {:.1} ms", start.elapsed().as_secs_f64() * 1000.0)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn ok_fail(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAIL"
    }
}

fn pass_fail(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}
