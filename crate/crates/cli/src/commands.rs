use std::time::Instant;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use ehrhart_core::digraph::arc_polytope;
use ehrhart_core::ehrhart::{
    ehrhart_from_hstar, hstar, is_log_concave, is_unimodal, log_concavity_violations, normalized_volume,
};
use ehrhart_core::idp::{default_bound, is_idp_with_budget, IdpStatus};
use ehrhart_core::io::{MapJson, PolytopeJson};
use ehrhart_core::lattice::Enumerator;
use ehrhart_core::polytope::{point_to_i64, unimodular_equivalence, Equivalence, Polytope};
use ehrhart_core::search::{local_search, write_results, IdpLevel, SearchConfig};
use ehrhart_core::triangulation::{hstar_halfopen, triangulation_reports, PointConfig};
use ehrhart_core::verify::{verify, ClaimStatus, Target};

use crate::{
    input, ArcArgs, Command, CountArgs, EquivArgs, Failure, HstarArgs, HstarMethod, IdpArgs, IdpLevelArg, Outcome,
    PointsArgs, PolyArg, SearchArgs, VerifyArgs, VerifyTarget, EXIT_FAIL, EXIT_NOT_IDP, EXIT_UNDECIDED,
};

pub fn run(cmd: Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Verify(a) => cmd_verify(a),
        Command::Hstar(a) => cmd_hstar(a),
        Command::Idp(a) => cmd_idp(a),
        Command::Points(a) => cmd_points(a),
        Command::Count(a) => cmd_count(a),
        Command::ArcPolytope(a) => cmd_arc_polytope(a),
        Command::Triangulations(a) => cmd_triangulations(a),
        Command::Equiv(a) => cmd_equiv(a),
        Command::Search(a) => cmd_search(a),
    }
}

fn ok(v: Value) -> Result<Outcome, Failure> {
    Ok(Outcome { stdout: format!("{}\n", serde_json::to_string_pretty(&v)?), code: 0 })
}

/// Integers as JSON numbers when they fit in `i64`, as strings otherwise.
fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn timing(start: Instant) -> Value {
    json!({ "seconds": start.elapsed().as_secs_f64() })
}

fn cmd_verify(a: VerifyArgs) -> Result<Outcome, Failure> {
    let target = match a.target {
        VerifyTarget::Theorem1 => Target::Theorem1,
        VerifyTarget::Theorem2 => Target::Theorem2,
        VerifyTarget::Proposition => Target::Proposition,
    };
    let report = verify(target);
    let code = if report.any_fail() {
        EXIT_FAIL
    } else if report.claims.iter().any(|c| c.status == ClaimStatus::Undecided) {
        EXIT_UNDECIDED
    } else {
        0
    };
    let stdout = if a.json {
        format!("{}\n", serde_json::to_string_pretty(&report)?)
    } else {
        let mut s = String::new();
        for line in report.lines() {
            s.push_str(&line);
            s.push('\n');
        }
        s.push_str(&format!("{} {}\n", if code == 0 { "PASS" } else { "FAIL" }, report.target));
        s
    };
    Ok(Outcome { stdout, code })
}

fn cmd_hstar(a: HstarArgs) -> Result<Outcome, Failure> {
    let start = Instant::now();
    let p = input::polytope(&a.input)?;
    let h = match a.method {
        HstarMethod::Counting => hstar(&p)?,
        HstarMethod::HalfOpen => hstar_halfopen(&p)?,
        HstarMethod::Both => {
            let h = hstar(&p)?;
            let h2 = hstar_halfopen(&p)?;
            if h != h2 {
                return Err(Failure {
                    code: crate::EXIT_INTERNAL,
                    message: format!("methods disagree: {:?} vs {:?}", h.coeffs(), h2.coeffs()),
                });
            }
            h
        }
    };
    let c = h.coeffs();
    let e = ehrhart_from_hstar(&h);
    ok(json!({
        "dim": p.dim(),
        "hstar": c.iter().map(int).collect::<Vec<_>>(),
        "ehrhart_coeffs": e.coeffs().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "unimodal": is_unimodal(c),
        "log_concave": is_log_concave(c),
        "log_concavity_violations": log_concavity_violations(c),
        "volume_normalized": int(&normalized_volume(&h)),
        "timing": timing(start),
    }))
}

fn cmd_idp(a: IdpArgs) -> Result<Outcome, Failure> {
    let start = Instant::now();
    let p = input::polytope(&a.input)?;
    let d = p.dim();
    if let Some(k) = a.paranoid {
        if k < default_bound(d) {
            return Err(Failure::input(format!(
                "--paranoid {k} is below the default bound d - 2 = {}",
                default_bound(d)
            )));
        }
    }
    let v = is_idp_with_budget(&p, a.paranoid, a.budget)?;
    let source = if a.paranoid.is_some() { "paranoid" } else { "default d-2" };
    eprintln!("checking levels k = 1..{} (bound {source})", v.bound);
    let (holds, witness, code): (Value, Value, u8) = match &v.status {
        IdpStatus::Holds => (json!(true), Value::Null, 0),
        IdpStatus::Fails { level, dilation, witness } => {
            (json!(false), json!({ "level": level, "dilation": dilation, "point": witness }), EXIT_NOT_IDP)
        }
        IdpStatus::Undecided { .. } => (Value::Null, Value::Null, EXIT_UNDECIDED),
    };
    let status = match &v.status {
        IdpStatus::Holds => "idp",
        IdpStatus::Fails { .. } => "not_idp",
        IdpStatus::Undecided { .. } => "undecided",
    };
    let reason = match &v.status {
        IdpStatus::Undecided { level, reason } => json!(format!("level {level}: {reason}")),
        _ => Value::Null,
    };
    let out = json!({
        "dim": v.dim,
        "bound": v.bound,
        "bound_source": source,
        "status": status,
        "holds": holds,
        "checked_k": v.checked_k,
        "witness": witness,
        "reason": reason,
        "timing": timing(start),
    });
    Ok(Outcome { stdout: format!("{}\n", serde_json::to_string_pretty(&out)?), code })
}

/// Lattice points of `kP` in the coordinates of the input.
fn ambient_points(p: &Polytope, k: u64) -> Result<Vec<Vec<i64>>, Failure> {
    if k == 0 {
        return Err(Failure::input("dilation factor must be positive"));
    }
    let (q, emb) = p.normalized();
    if q.ambient_dim() == 0 {
        let x: Vec<BigInt> = emb.to_ambient_dilated(&[], &BigInt::from(k));
        return Ok(vec![point_to_i64(&x)?]);
    }
    let pts = Enumerator::new(q)?.enumerate(k)?;
    let kk = BigInt::from(k);
    let mut out = pts
        .iter()
        .map(|y| {
            let y: Vec<BigInt> = y.into_iter().map(BigInt::from).collect();
            point_to_i64(&emb.to_ambient_dilated(&y, &kk))
        })
        .collect::<Result<Vec<_>, _>>()?;
    out.sort();
    Ok(out)
}

fn cmd_points(a: PointsArgs) -> Result<Outcome, Failure> {
    let start = Instant::now();
    let p = input::polytope(&a.input)?;
    let pts = ambient_points(&p, a.k)?;
    ok(json!({ "k": a.k, "count": pts.len(), "points": pts, "timing": timing(start) }))
}

fn cmd_count(a: CountArgs) -> Result<Outcome, Failure> {
    let start = Instant::now();
    let p = input::polytope(&a.input)?;
    let q = &p.normalized().0;
    let e = if q.ambient_dim() == 0 { None } else { Some(Enumerator::new(q)?) };
    let mut counts = Vec::new();
    for &k in &a.k {
        if k == 0 {
            return Err(Failure::input("dilation factor must be positive"));
        }
        let n = match &e {
            Some(e) => BigInt::from(e.count(k)?),
            None => BigInt::from(1),
        };
        counts.push(json!({ "k": k, "count": int(&n) }));
    }
    ok(json!({ "dim": p.dim(), "counts": counts, "timing": timing(start) }))
}

fn cmd_arc_polytope(a: ArcArgs) -> Result<Outcome, Failure> {
    let g = input::digraph(&a.input)?;
    let p = arc_polytope(&g)?;
    let j = if a.normalize {
        PolytopeJson::from_vertices(&p.normalized().0)?
    } else {
        PolytopeJson::from_vertices(&p)?
    };
    Ok(Outcome { stdout: format!("{}\n", serde_json::to_string_pretty(&j)?), code: 0 })
}

fn cmd_triangulations(a: PolyArg) -> Result<Outcome, Failure> {
    let p = input::polytope(&a.input)?;
    let q = &p.normalized().0;
    let c = PointConfig::lattice_points(q)?;
    let reports = triangulation_reports(&c)?;
    let out: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "simplices": r.triangulation.simplices(),
                "regular": r.regular,
                "unimodular": r.unimodular,
                "flag": r.flag,
            })
        })
        .collect();
    ok(Value::Array(out))
}

fn cmd_equiv(a: EquivArgs) -> Result<Outcome, Failure> {
    let start = Instant::now();
    let p = input::polytope(&a.first)?;
    let q = input::polytope(&a.second)?;
    let direct = p.is_full_dimensional() && q.is_full_dimensional() && p.ambient_dim() == q.ambient_dim();
    let (pp, qq) = if direct { (&p, &q) } else { (&p.normalized().0, &q.normalized().0) };
    let (equivalent, map, reason) = match unimodular_equivalence(pp, qq)? {
        Equivalence::Equivalent(m) => (true, serde_json::to_value(MapJson::from_map(&m)?)?, Value::Null),
        Equivalence::NotEquivalent(why) => (false, Value::Null, json!(why)),
    };
    ok(json!({
        "equivalent": equivalent,
        "normalized": !direct,
        "map": map,
        "reason": reason,
        "timing": timing(start),
    }))
}

fn cmd_search(a: SearchArgs) -> Result<Outcome, Failure> {
    let start = Instant::now();
    let init = a.init.as_deref().map(input::polytope).transpose()?;
    let dim = match (a.dim, &init) {
        (Some(d), _) => d,
        (None, Some(p)) => p.ambient_dim(),
        (None, None) => return Err(Failure::input("search needs --dim or --init")),
    };
    let mut cfg = SearchConfig::new(dim, a.seed);
    cfg.steps = a.steps;
    cfg.vertex_budget = a.vertex_budget.unwrap_or(dim + 3);
    if let Some(p) = &init {
        cfg.vertex_budget = cfg.vertex_budget.max(p.vertices().len());
    }
    cfg.coord_range = a.coord_range;
    cfg.initial_temperature = a.temperature;
    cfg.cooling = a.cooling;
    cfg.idp_level = match a.idp_level {
        IdpLevelArg::Off => IdpLevel::Off,
        IdpLevelArg::Necessary => IdpLevel::Necessary,
        IdpLevelArg::Full => IdpLevel::Full,
    };
    cfg.init = init;
    let outcome = local_search(&cfg)?;
    write_results(&a.out, &outcome)?;
    ok(json!({
        "config": cfg,
        "steps": a.steps,
        "candidates": outcome.candidates,
        "out": a.out.display().to_string(),
        "timing": timing(start),
    }))
}
