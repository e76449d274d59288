//! Claim checklists for the bundled examples.

use std::time::Instant;

use num_bigint::BigInt;
use serde::Serialize;

use crate::data;
use crate::digraph::arc_polytope;
use crate::ehrhart::{ehrhart_from_hstar, hstar, is_log_concave, is_unimodal, log_concavity_violations, HStarVector};
use crate::error::Result;
use crate::idp::{is_idp, IdpStatus};
use crate::lattice::Enumerator;
use crate::polytope::{unimodular_equivalence, Polytope};
use crate::triangulation::{all_spanning_simplices_unimodular, exists_quadratic_triangulation, hstar_halfopen, QuadraticVerdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ClaimStatus {
    Pass,
    Fail,
    Undecided,
}

impl std::fmt::Display for ClaimStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ClaimStatus::Pass => "PASS",
            ClaimStatus::Fail => "FAIL",
            ClaimStatus::Undecided => "UNDECIDED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub name: String,
    pub status: ClaimStatus,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    /// Seconds per claim, in claim order.
    pub claims: Vec<f64>,
    pub total: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub target: String,
    pub claims: Vec<Claim>,
    pub timing: Timing,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(|c| c.status == ClaimStatus::Pass)
    }

    pub fn any_fail(&self) -> bool {
        self.claims.iter().any(|c| c.status == ClaimStatus::Fail)
    }

    /// One line per claim.
    pub fn lines(&self) -> Vec<String> {
        self.claims
            .iter()
            .zip(&self.timing.claims)
            .map(|(c, t)| format!("{} {}: {} ({t:.2}s)", c.status, c.name, c.detail))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Theorem1,
    Theorem2,
    Proposition,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Theorem1 => "theorem1",
            Target::Theorem2 => "theorem2",
            Target::Proposition => "proposition",
        }
    }
}

struct Recorder {
    claims: Vec<Claim>,
    times: Vec<f64>,
    start: Instant,
}

impl Recorder {
    fn new() -> Self {
        Recorder { claims: Vec::new(), times: Vec::new(), start: Instant::now() }
    }

    fn check(&mut self, name: &str, f: impl FnOnce() -> Result<(ClaimStatus, String)>) {
        let t = Instant::now();
        let (status, detail) = f().unwrap_or_else(|e| (ClaimStatus::Fail, format!("error: {e}")));
        self.times.push(t.elapsed().as_secs_f64());
        self.claims.push(Claim { name: name.to_string(), status, detail });
    }

    fn finish(self, target: Target) -> VerifyReport {
        VerifyReport {
            target: target.name().to_string(),
            claims: self.claims,
            timing: Timing { claims: self.times, total: self.start.elapsed().as_secs_f64() },
        }
    }
}

fn pass_if(ok: bool, detail: String) -> (ClaimStatus, String) {
    (if ok { ClaimStatus::Pass } else { ClaimStatus::Fail }, detail)
}

fn fmt_vec(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

const HSTAR: [i64; 8] = [1, 2, 3, 4, 5, 3, 2, 1];

pub fn verify(target: Target) -> VerifyReport {
    match target {
        Target::Theorem1 => verify_theorem1(),
        Target::Theorem2 => verify_theorem2(),
        Target::Proposition => verify_proposition(),
    }
}

fn dim_claim(r: &mut Recorder, p: &Polytope, d: usize) {
    r.check("dimension", || Ok(pass_if(p.dim() == d, format!("dim = {} (expected {d})", p.dim()))));
}

fn idp_claim(r: &mut Recorder, p: &Polytope, k: usize) {
    r.check("idp", || {
        let v = is_idp(p, None)?;
        let expected: Vec<usize> = (1..=k).collect();
        Ok(match &v.status {
            IdpStatus::Holds => pass_if(
                v.checked_k == expected,
                format!("(k+1)P ⊆ P + kP for k = 1..{} (bound d-2 = {})", v.checked_k.len(), v.bound),
            ),
            IdpStatus::Fails { level, witness, .. } => (ClaimStatus::Fail, format!("uncovered point {witness:?} at level {level}")),
            IdpStatus::Undecided { level, reason } => (ClaimStatus::Undecided, format!("level {level}: {reason}")),
        })
    });
}

fn positivity_claim(r: &mut Recorder, h: &Option<HStarVector>, n: usize) {
    r.check("ehrhart-positivity", || {
        let Some(h) = h else { return Ok((ClaimStatus::Fail, "h* unavailable".into())) };
        let e = ehrhart_from_hstar(h);
        let coeffs: Vec<String> = e.coeffs().iter().map(|c| c.to_string()).collect();
        Ok(pass_if(
            e.coeffs().len() == n && e.all_coefficients_positive(),
            format!("{} coefficients [{}]", e.coeffs().len(), coeffs.join(", ")),
        ))
    });
}

fn verify_theorem1() -> VerifyReport {
    let mut r = Recorder::new();
    let p = data::theorem1();
    dim_claim(&mut r, &p, 7);
    r.check("vertices", || Ok(pass_if(p.vertices().len() == 9, format!("{} vertices", p.vertices().len()))));
    idp_claim(&mut r, &p, 5);
    let mut counted = None;
    r.check("hstar", || {
        let h = hstar(&p)?;
        let h2 = hstar_halfopen(&p)?;
        let expected = HStarVector::from_i64(&HSTAR)?;
        let c = h.coeffs();
        let viol = log_concavity_violations(c);
        let ok = h == expected && h2 == expected && is_unimodal(c) && !is_log_concave(c) && viol == vec![5];
        let detail = format!(
            "counting {} half-open {} unimodal={} log_concave={} violations at {viol:?}",
            fmt_vec(c),
            fmt_vec(h2.coeffs()),
            is_unimodal(c),
            is_log_concave(c)
        );
        counted = Some(h);
        Ok(pass_if(ok, detail))
    });
    positivity_claim(&mut r, &counted, 8);
    r.finish(Target::Theorem1)
}

fn verify_theorem2() -> VerifyReport {
    let mut r = Recorder::new();
    let p = data::theorem2();
    dim_claim(&mut r, &p, 12);
    r.check("vertices", || {
        let v = p.vertices().len();
        let n = Enumerator::new(&p)?.count(1)?;
        Ok(pass_if(v == 15 && n == 15, format!("{v} vertices, {n} lattice points")))
    });
    idp_claim(&mut r, &p, 10);
    let mut counted = None;
    r.check("hstar", || {
        let h = hstar(&p)?;
        let mut want = HSTAR.to_vec();
        want.resize(13, 0);
        let ok = h == HStarVector::from_i64(&want)?;
        let detail = format!("counting {}", fmt_vec(h.coeffs()));
        counted = Some(h);
        Ok(pass_if(ok, detail))
    });
    positivity_claim(&mut r, &counted, 13);
    r.check("spanning-simplices", || {
        let s = all_spanning_simplices_unimodular(&p)?;
        Ok(pass_if(
            s.subsets == 105 && s.all_unimodular(),
            format!("{} subsets, {} spanning, {} with |det| > 1", s.subsets, s.spanning, s.violations.len()),
        ))
    });
    r.check("no-quadratic-triangulation", || {
        Ok(match exists_quadratic_triangulation(&p)? {
            QuadraticVerdict::Exists(t) => {
                (ClaimStatus::Fail, format!("regular unimodular flag triangulation {:?}", t.triangulation.simplices()))
            }
            QuadraticVerdict::NoneExists(all) => {
                let count = |f: fn(&crate::triangulation::TriangulationReport) -> bool| all.iter().filter(|t| f(t)).count();
                let uni = count(|t| t.unimodular);
                pass_if(
                    uni == all.len(),
                    format!(
                        "{} triangulations ({} regular, {} unimodular, {} flag), none regular+unimodular+flag",
                        all.len(),
                        count(|t| t.regular),
                        uni,
                        count(|t| t.flag)
                    ),
                )
            }
        })
    });
    r.finish(Target::Theorem2)
}

fn verify_proposition() -> VerifyReport {
    let mut r = Recorder::new();
    r.check("arc-polytope-equivalence", || {
        let a = arc_polytope(&data::figure1())?;
        let q = &a.normalized().0;
        let shape = format!("normalized dim {}, {} vertices", q.ambient_dim(), q.vertices().len());
        if q.ambient_dim() != 12 || q.vertices().len() != 15 {
            return Ok((ClaimStatus::Fail, shape));
        }
        let eq = unimodular_equivalence(q, &data::theorem2())?;
        Ok(match eq.map() {
            Some(m) => {
                let image = m.apply_polytope(q)?;
                pass_if(image.vertices() == data::theorem2().vertices(), format!("{shape}, equivalent to theorem2"))
            }
            None => (ClaimStatus::Fail, format!("{shape}, not equivalent: {eq:?}")),
        })
    });
    r.finish(Target::Proposition)
}
