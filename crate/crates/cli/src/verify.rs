//! The invariant battery behind `chainforge verify`.

use chainforge::chains::{assemble_chain, chain_from_positive_family, check_assembly, plan, probe_maximality, Carrier, ChainTarget};
use chainforge::compactsets::{ClassLabel, CompactDescriptor};
use chainforge::forcing::{generic_run, is_condition, leq, replay, RunConfig};
use chainforge::gmunu::{dense_jumps_check, positive_family_check, random_copy_chain, Family};
use chainforge::henson::{ceiling_obstruction, scheduled_coverage};
use chainforge::qline::{jclass, Rat, Window};
use chainforge::OrderTypeExpr;
use serde::Serialize;

use crate::{print_json, CliError, VerifyArgs};

pub struct Settings {
    pub seed: u64,
    pub probes: usize,
    pub samples: usize,
}

impl From<VerifyArgs> for Settings {
    fn from(a: VerifyArgs) -> Self {
        Settings { seed: a.seed, probes: a.probes, samples: a.samples }
    }
}

#[derive(Serialize)]
struct Check {
    name: String,
    passed: bool,
    detail: String,
}

#[derive(Serialize)]
struct Battery {
    seed: u64,
    checks: Vec<Check>,
    all_passed: bool,
}

fn check(checks: &mut Vec<Check>, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
    checks.push(Check { name: name.into(), passed, detail: detail.into() });
}

pub fn run(s: &Settings) -> Result<bool, CliError> {
    if s.probes == 0 || s.samples == 0 {
        return Err(CliError::Config("--probes and --samples must be positive".into()));
    }
    let mut checks = Vec::new();
    forcing_checks(&mut checks);
    chain_checks(&mut checks, s);
    gmunu_checks(&mut checks, s);
    classify_checks(&mut checks);
    let all_passed = checks.iter().all(|c| c.passed);
    print_json(&Battery { seed: s.seed, checks, all_passed });
    Ok(all_passed)
}

fn forcing_checks(checks: &mut Vec<Check>) {
    let window = Window::bounded(Rat::int(-5), Rat::int(5), 16).expect("nonempty");
    for n in [3, 4] {
        let run = match generic_run(n, 120, window, RunConfig::default()) {
            Ok(r) => r,
            Err(e) => {
                check(checks, format!("forcing n={n}"), false, e.to_string());
                continue;
            }
        };
        let union = run.union_graph();
        let valid = is_condition(&union, n).valid;
        check(checks, format!("union is a condition n={n}"), valid, format!("{} vertices", union.vertex_count()));
        let decreasing = run.conditions.windows(2).all(|w| leq(&w[1], &w[0]) == Ok(true));
        check(checks, format!("conditions decrease n={n}"), decreasing, "");
        let replayed = replay(n, &run.log).ok();
        check(checks, format!("log replays n={n}"), replayed.as_ref() == run.final_condition(), "");
        let cov = scheduled_coverage(&run);
        check(checks, format!("scheduled saturation n={n}"), cov.all_verified(), format!("{}/{} applicable", cov.verified, cov.applicable));
        let mut tried = 0;
        let mut held = 0;
        for q in union.vertices().filter(|&q| jclass(q) == 0 && union.has_vertex(q - Rat::ONE)) {
            tried += 1;
            if ceiling_obstruction(&union, q, &window) == Ok(true) {
                held += 1;
            }
        }
        check(checks, format!("ceiling obstruction n={n}"), tried > 0 && held == tried, format!("{held}/{tried}"));
    }
}

fn chain_checks(checks: &mut Vec<Check>, s: &Settings) {
    let mut targets: Vec<(OrderTypeExpr, usize)> = (1..=7).map(|k| (OrderTypeExpr::Finite(k), 1)).collect();
    targets.extend((1..=3).map(|d| (OrderTypeExpr::Cantor, d)));
    targets.extend((1..=10).map(|d| (OrderTypeExpr::OmegaStar, d)));
    for (t, depth) in targets {
        let name = format!("assembly {t} depth {depth}");
        let target = ChainTarget::Order(t);
        let result = plan(&target, depth).and_then(|p| {
            let chain = assemble_chain(&p)?;
            let report = check_assembly(&p, &chain);
            let carriers: Vec<Carrier> = chain.into_iter().map(|e| e.carrier).collect();
            let probe = probe_maximality(&carriers, s.probes, s.seed)?;
            Ok((report.ok(), probe.clean, report.length))
        });
        match result {
            Ok((ok, clean, len)) => check(checks, name, ok && clean, format!("length {len}, probes clean: {clean}")),
            Err(e) => check(checks, name, false, e.to_string()),
        }
    }
    for family in [Family::Pqr, Family::OmegaOmega] {
        let name = format!("family chain {family}");
        match chain_from_positive_family(&OrderTypeExpr::OmegaStar, family, 8) {
            Ok(fc) => {
                let mut asc: Vec<Carrier> = fc.elements.iter().map(|e| e.carrier.clone()).collect();
                asc.reverse();
                let clean = probe_maximality(&asc, s.probes.min(500), s.seed).is_ok_and(|p| p.clean);
                let ok = fc.members && fc.single_point_steps && fc.prefix_matches && clean;
                check(checks, name, ok, format!("{} elements", fc.elements.len()));
            }
            Err(e) => check(checks, name, false, e.to_string()),
        }
    }
}

fn gmunu_checks(checks: &mut Vec<Check>, s: &Settings) {
    for family in [Family::CopiesOmegaN(3), Family::CopiesMOmega(2), Family::OmegaOmega, Family::Pqr] {
        let name = format!("positive family {family}");
        match positive_family_check(family, s.samples, s.seed) {
            Ok(r) => check(checks, name, r.all_passed(), r.coinfinite_witness),
            Err(e) => check(checks, name, false, e.to_string()),
        }
    }
    let mut verified = 0;
    for k in 0..10 {
        let chain = random_copy_chain(20, s.seed.wrapping_add(k));
        if dense_jumps_check(&chain).is_ok_and(|r| r.all_verified) {
            verified += 1;
        }
    }
    check(checks, "dense jumps", verified == 10, format!("{verified}/10 chains"));
}

fn classify_checks(checks: &mut Vec<Check>) {
    let rows = [
        ("interval(0,1)", ClassLabel::Ic),
        ("union(point(0), geoseq(0,1,1/2))", ClassLabel::IIc),
        ("point(0)", ClassLabel::Neither),
        ("cantor(0,1)", ClassLabel::IIc),
    ];
    for (src, expected) in rows {
        let got = src.parse::<CompactDescriptor>().ok().and_then(|d| d.classify().ok());
        let passed = got.as_ref().is_some_and(|r| {
            r.class == expected && (!r.min_nonisolated || r.order_type.is_boolean() == r.nowhere_dense)
        });
        check(checks, format!("classify {src}"), passed, expected.to_string());
    }
}
