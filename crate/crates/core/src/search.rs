//! Simulated annealing over lattice polytopes, looking for IDP polytopes whose
//! h*-vector is not log-concave.
//!
//! A chain keeps one full-dimensional polytope in `Z^d` and proposes local
//! moves (add a point, drop a vertex, nudge a vertex). Proposals are scored by
//! [`lc_violation_score`]; every polytope with a positive score is passed
//! through the IDP filters of [`IdpLevel`] and, if it survives, recorded as a
//! [`Candidate`]. A chain is a pure function of its configuration.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ehrhart::{hstar, HStarVector};
use crate::error::{Error, Result};
use crate::idp::is_idp;
use crate::lattice::{minkowski_covers, Enumerator};
use crate::linalg::{snf, IntMatrix};
use crate::polytope::{lattice_point, point_to_i64, LatticePoint, Polytope};

/// How far positive-score polytopes are pushed through the IDP checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdpLevel {
    Off,
    Necessary,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdpCheck {
    Unknown,
    PassedNecessary,
    Verified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    Add,
    Remove,
    Translate,
}

/// A concrete local modification of a vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    Add(LatticePoint),
    Remove(LatticePoint),
    Translate { from: LatticePoint, to: LatticePoint },
}

impl Move {
    pub fn kind(&self) -> MoveKind {
        match self {
            Move::Add(_) => MoveKind::Add,
            Move::Remove(_) => MoveKind::Remove,
            Move::Translate { .. } => MoveKind::Translate,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchConfig {
    pub dim: usize,
    /// Largest vertex count a proposal may have.
    pub vertex_budget: usize,
    /// Coordinates stay in `[-coord_range, coord_range]`.
    pub coord_range: i64,
    /// Relative weights of add, remove and translate moves.
    pub move_weights: [u32; 3],
    pub initial_temperature: f64,
    pub cooling: f64,
    pub steps: u64,
    pub seed: u64,
    pub idp_level: IdpLevel,
    /// Start here instead of at a random polytope.
    #[serde(skip)]
    pub init: Option<Polytope>,
}

impl SearchConfig {
    pub fn new(dim: usize, seed: u64) -> Self {
        SearchConfig {
            dim,
            vertex_budget: dim + 3,
            coord_range: 2,
            move_weights: [1, 1, 2],
            initial_temperature: 0.05,
            cooling: 0.995,
            steps: 200,
            seed,
            idp_level: IdpLevel::Full,
            init: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidInput(m.to_string()));
        if self.dim == 0 {
            return bad("search dimension must be positive");
        }
        if self.vertex_budget < self.dim + 1 {
            return bad("vertex budget must be at least dim + 1");
        }
        if self.coord_range <= 0 {
            return bad("coordinate range must be positive");
        }
        if self.move_weights.iter().all(|&w| w == 0) {
            return bad("at least one move weight must be positive");
        }
        if !(self.initial_temperature > 0.0) || !(self.cooling > 0.0 && self.cooling <= 1.0) {
            return bad("temperature must be positive and cooling in (0, 1]");
        }
        if let Some(p) = &self.init {
            if p.ambient_dim() != self.dim || !p.is_full_dimensional() {
                return bad("initial polytope must be full-dimensional in the search dimension");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub seed: u64,
    pub step: u64,
    pub vertices: Vec<Vec<i64>>,
    pub hstar: Vec<String>,
    /// Exact score as `p/q`.
    pub score: String,
    /// Largest unnormalized violation `h_{i-1} h_{i+1} - h_i^2`.
    pub raw_violation: String,
    pub idp: IdpCheck,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogEntry {
    pub step: u64,
    #[serde(rename = "move")]
    pub kind: Option<MoveKind>,
    pub proposed: bool,
    pub accepted: bool,
    pub score: String,
    pub raw_violation: String,
    pub current_score: String,
    pub temperature: f64,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    /// Recorded candidates, best score first.
    pub candidates: Vec<Candidate>,
    pub log: Vec<LogEntry>,
}

/// Largest `h_{i-1} h_{i+1} - h_i^2` over interior `i`, or `None` for short vectors.
pub fn raw_violation(h: &[BigInt]) -> Option<BigInt> {
    (1..h.len().saturating_sub(1)).map(|i| &h[i - 1] * &h[i + 1] - &h[i] * &h[i]).max()
}

/// `max_i (h_{i-1} h_{i+1} - h_i^2) / max(1, h_i^2)` over interior `i`;
/// positive exactly when the vector is not log-concave. Vectors without an
/// interior index score 0.
pub fn lc_violation_score(h: &[BigInt]) -> BigRational {
    (1..h.len().saturating_sub(1))
        .map(|i| {
            let sq = &h[i] * &h[i];
            let den = if sq.is_zero() { BigInt::one() } else { sq.clone() };
            BigRational::new(&h[i - 1] * &h[i + 1] - sq, den)
        })
        .max()
        .unwrap_or_else(BigRational::zero)
}

/// Vertex set after `mv`, or `None` if the move is not legal: the result
/// must be full-dimensional and differ from the input exactly as the move says.
pub fn apply_move(p: &Polytope, mv: &Move) -> Option<Polytope> {
    let old: BTreeSet<LatticePoint> = p.vertices().iter().cloned().collect();
    let mut want = old.clone();
    match mv {
        Move::Add(x) => {
            if !want.insert(x.clone()) {
                return None;
            }
        }
        Move::Remove(x) => {
            if !want.remove(x) {
                return None;
            }
        }
        Move::Translate { from, to } => {
            if !want.remove(from) || !want.insert(to.clone()) {
                return None;
            }
        }
    }
    let q = Polytope::new(p.ambient_dim(), want.iter().cloned().collect()).ok()?;
    if !q.is_full_dimensional() {
        return None;
    }
    let got: BTreeSet<LatticePoint> = q.vertices().iter().cloned().collect();
    (got == want).then_some(q)
}

/// Result of [`mutate`]; `changed` is false when every retry was rejected.
#[derive(Debug, Clone)]
pub struct Mutation {
    pub polytope: Polytope,
    pub kind: Option<MoveKind>,
    pub changed: bool,
}

const MUTATION_RETRIES: usize = 64;

pub fn mutate(p: &Polytope, rng: &mut ChaCha8Rng, cfg: &SearchConfig) -> Mutation {
    let total: u32 = cfg.move_weights.iter().sum();
    for _ in 0..MUTATION_RETRIES {
        let mut pick = rng.gen_range(0..total);
        let mut kind = MoveKind::Translate;
        for (w, k) in cfg.move_weights.iter().zip([MoveKind::Add, MoveKind::Remove, MoveKind::Translate]) {
            if pick < *w {
                kind = k;
                break;
            }
            pick -= w;
        }
        let Some(mv) = propose(p, rng, cfg, kind) else { continue };
        if let Some(q) = apply_move(p, &mv) {
            return Mutation { polytope: q, kind: Some(kind), changed: true };
        }
    }
    Mutation { polytope: p.clone(), kind: None, changed: false }
}

fn random_point(rng: &mut ChaCha8Rng, d: usize, r: i64) -> LatticePoint {
    (0..d).map(|_| BigInt::from(rng.gen_range(-r..=r))).collect()
}

fn propose(p: &Polytope, rng: &mut ChaCha8Rng, cfg: &SearchConfig, kind: MoveKind) -> Option<Move> {
    let verts = p.vertices();
    match kind {
        MoveKind::Add => {
            if verts.len() >= cfg.vertex_budget {
                return None;
            }
            Some(Move::Add(random_point(rng, cfg.dim, cfg.coord_range)))
        }
        MoveKind::Remove => {
            if verts.len() <= cfg.dim + 1 {
                return None;
            }
            Some(Move::Remove(verts.choose(rng)?.clone()))
        }
        MoveKind::Translate => {
            let from = verts.choose(rng)?.clone();
            let step: Vec<i64> = (0..cfg.dim).map(|_| rng.gen_range(-1..=1)).collect();
            if step.iter().all(|&s| s == 0) {
                return None;
            }
            let to: LatticePoint = from.iter().zip(&step).map(|(a, s)| a + s).collect();
            if to.iter().any(|x| x.abs() > BigInt::from(cfg.coord_range)) {
                return None;
            }
            Some(Move::Translate { from, to })
        }
    }
}

/// Cheap conditions implied by IDP: the lattice points of `P` affinely
/// generate the lattice, and every lattice point of `2P` is a sum of two
/// lattice points of `P`.
pub fn idp_necessary_conditions(p: &Polytope) -> Result<bool> {
    let q = &p.normalized().0;
    let d = q.ambient_dim();
    if d == 0 {
        return Ok(true);
    }
    let e = Enumerator::new(q)?;
    let base = e.enumerate(1)?;
    let pts = base.to_vec();
    let diffs: Vec<Vec<i64>> = pts[1..].iter().map(|x| x.iter().zip(&pts[0]).map(|(a, b)| a - b).collect()).collect();
    let rows: Vec<&[i64]> = diffs.iter().map(|r| r.as_slice()).collect();
    let factors = snf(&IntMatrix::from_i64(&rows)).invariant_factors();
    if factors.len() != d || factors.iter().any(|f| !f.abs().is_one()) {
        return Ok(false);
    }
    Ok(minkowski_covers(&base, &base, &e.enumerate(2)?)?.is_covered())
}

struct Evaluation {
    hstar: HStarVector,
    score: BigRational,
    raw: BigInt,
}

fn evaluate(p: &Polytope) -> Result<Evaluation> {
    let h = hstar(p)?;
    let score = lc_violation_score(h.coeffs());
    let raw = raw_violation(h.coeffs()).unwrap_or_else(BigInt::zero);
    Ok(Evaluation { hstar: h, score, raw })
}

fn escalate(p: &Polytope, level: IdpLevel) -> Result<Option<IdpCheck>> {
    if level == IdpLevel::Off {
        return Ok(Some(IdpCheck::Unknown));
    }
    if !idp_necessary_conditions(p)? {
        return Ok(None);
    }
    if level == IdpLevel::Necessary {
        return Ok(Some(IdpCheck::PassedNecessary));
    }
    Ok(is_idp(p, None)?.holds().then_some(IdpCheck::Verified))
}

fn initial_polytope(rng: &mut ChaCha8Rng, cfg: &SearchConfig) -> Polytope {
    if let Some(p) = &cfg.init {
        return p.clone();
    }
    loop {
        let pts: Vec<LatticePoint> = (0..=cfg.dim).map(|_| random_point(rng, cfg.dim, cfg.coord_range)).collect();
        if let Ok(p) = Polytope::new(cfg.dim, pts) {
            if p.is_full_dimensional() {
                return p;
            }
        }
    }
}

/// Runs one annealing chain.
pub fn local_search(cfg: &SearchConfig) -> Result<SearchOutcome> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut current = initial_polytope(&mut rng, cfg);
    let mut cur = evaluate(&current)?;
    let mut seen: BTreeSet<Vec<LatticePoint>> = BTreeSet::new();
    let mut candidates = Vec::new();
    let mut log = Vec::new();
    let mut temperature = cfg.initial_temperature;

    let mut consider = |p: &Polytope, ev: &Evaluation, step: u64, out: &mut Vec<Candidate>| -> Result<()> {
        if !ev.score.is_positive() || !seen.insert(p.vertices().to_vec()) {
            return Ok(());
        }
        if let Some(idp) = escalate(p, cfg.idp_level)? {
            out.push(Candidate {
                seed: cfg.seed,
                step,
                vertices: p.vertices().iter().map(|v| point_to_i64(v)).collect::<Result<_>>()?,
                hstar: ev.hstar.coeffs().iter().map(|x| x.to_string()).collect(),
                score: ev.score.to_string(),
                raw_violation: ev.raw.to_string(),
                idp,
            });
        }
        Ok(())
    };

    consider(&current, &cur, 0, &mut candidates)?;
    log.push(LogEntry {
        step: 0,
        kind: None,
        proposed: false,
        accepted: true,
        score: cur.score.to_string(),
        raw_violation: cur.raw.to_string(),
        current_score: cur.score.to_string(),
        temperature,
    });

    for step in 1..=cfg.steps {
        let m = mutate(&current, &mut rng, cfg);
        let u: f64 = rng.gen();
        let mut entry = LogEntry {
            step,
            kind: m.kind,
            proposed: m.changed,
            accepted: false,
            score: cur.score.to_string(),
            raw_violation: cur.raw.to_string(),
            current_score: cur.score.to_string(),
            temperature,
        };
        if m.changed {
            let ev = evaluate(&m.polytope)?;
            consider(&m.polytope, &ev, step, &mut candidates)?;
            let delta = (&ev.score - &cur.score).to_f64().unwrap_or(f64::NEG_INFINITY);
            let accept = delta >= 0.0 || u < (delta / temperature).exp();
            entry.score = ev.score.to_string();
            entry.raw_violation = ev.raw.to_string();
            if accept {
                current = m.polytope;
                cur = ev;
                entry.accepted = true;
                entry.current_score = cur.score.to_string();
            }
        }
        log.push(entry);
        temperature *= cfg.cooling;
    }

    candidates.sort_by(|a, b| {
        let sa: BigRational = a.score.parse().expect("score written above");
        let sb: BigRational = b.score.parse().expect("score written above");
        sb.cmp(&sa).then(a.step.cmp(&b.step))
    });
    Ok(SearchOutcome { candidates, log })
}

/// Rebuilds a candidate's polytope and checks its score and, when recorded
/// as verified, its IDP status from scratch.
pub fn recheck_candidate(c: &Candidate, dim: usize) -> Result<bool> {
    let p = Polytope::new(dim, c.vertices.iter().map(|v| lattice_point(v)).collect())?;
    let ev = evaluate(&p)?;
    let hs: Vec<String> = ev.hstar.coeffs().iter().map(|x| x.to_string()).collect();
    let mut ok = ev.score.is_positive() && ev.score.to_string() == c.score && hs == c.hstar;
    if c.idp == IdpCheck::Verified {
        ok &= is_idp(&p, None)?.holds();
    }
    if c.idp >= IdpCheck::PassedNecessary {
        ok &= idp_necessary_conditions(&p)?;
    }
    Ok(ok)
}

fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> std::io::Result<()> {
    let mut f = std::io::BufWriter::new(fs::File::create(path)?);
    for item in items {
        serde_json::to_writer(&mut f, item)?;
        f.write_all(b"\n")?;
    }
    f.flush()
}

/// Writes `candidates.jsonl` and `runlog.jsonl` into `dir`.
pub fn write_results(dir: &Path, outcome: &SearchOutcome) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    write_jsonl(&dir.join("candidates.jsonl"), &outcome.candidates)?;
    write_jsonl(&dir.join("runlog.jsonl"), &outcome.log)
}
