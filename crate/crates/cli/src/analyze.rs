use std::path::Path;

use freecurve::analyze::{is_modular_point, is_supersolvable, sampled_lines_agreement, total_inflection};
use freecurve::classify::{classify_curve, Verdict};
use freecurve::coeff::{Field, FieldConfig};
use freecurve::construct::{load_catalog, reduce_mod_p, CatalogEntry, Check, Expected, Recipe};
use freecurve::graded::{find_saito_pair, global_tjurina, mdr, saito_certificate, SyzygyVector};
use freecurve::local::analyze_point_with_hessian;
use freecurve::parse::{parse_homog, parse_point};
use freecurve::poly::{HomogPoly, Point};
use freecurve::Error;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::output::{self, error_value, Failure, EXIT_CHECK_FAILED, EXIT_MATH, SCHEMA};
use crate::{AnalyzeArgs, Outcome};

pub const TASKS: [&str; 8] = ["mdr", "tjurina", "classify", "local", "flexes", "modular", "supersolvable", "saito"];

/// Seed of the sampled-lines check; fixed so reports are reproducible.
const SAMPLE_SEED: u64 = 0x5eed;
const SAMPLED_LINES: usize = 50;

/// Polynomial text, a catalog reference or a recipe.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CurveRef {
    Text(String),
    Catalog { catalog: String },
    Recipe { recipe: Recipe },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub curve: CurveRef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldConfig>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub singular_points: Vec<String>,
    pub tasks: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<String>,
    /// Syzygies `[a, b, c]` to test with the Saito criterion.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub syzygies: Vec<[String; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claim: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalog_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recipe: Option<Recipe>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JobFile {
    schema: String,
    #[serde(default)]
    command: Option<String>,
    #[serde(default)]
    family: Option<String>,
    jobs: Vec<JobSpec>,
}

#[derive(Deserialize)]
struct SingleJob {
    schema: String,
    #[serde(flatten)]
    job: JobSpec,
}

fn split_points(s: &Option<String>) -> Vec<String> {
    s.as_deref()
        .map(|s| s.split(';').map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect())
        .unwrap_or_default()
}

fn parse_field(text: &Option<String>) -> Result<Option<FieldConfig>, Failure> {
    text.as_deref()
        .map(|t| serde_json::from_str(t).map_err(|e| Failure::input("FieldJson", e)))
        .transpose()
}

fn read_jobs(path: &Path) -> Result<Vec<JobSpec>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input("Io", format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Failure::input("Json", e))?;
    let schema_ok = |s: &str| {
        if s == SCHEMA {
            Ok(())
        } else {
            Err(Failure::input("Schema", format!("unsupported schema '{s}'")))
        }
    };
    if value.get("jobs").is_some() {
        let file: JobFile = serde_json::from_value(value).map_err(|e| Failure::input("Json", e))?;
        schema_ok(&file.schema)?;
        let _ = (file.command, file.family);
        Ok(file.jobs)
    } else {
        let single: SingleJob = serde_json::from_value(value).map_err(|e| Failure::input("Json", e))?;
        schema_ok(&single.schema)?;
        Ok(vec![single.job])
    }
}

fn jobs_from_args(a: &AnalyzeArgs) -> Result<Vec<JobSpec>, Failure> {
    if let Some(path) = &a.input {
        let mut jobs = read_jobs(path)?;
        // command-line values override the file
        let field = parse_field(&a.field)?;
        for j in &mut jobs {
            if let Some(t) = &a.tasks {
                j.tasks = split_tasks(t);
            }
            if field.is_some() {
                j.field = field.clone();
            }
        }
        return Ok(jobs);
    }
    let curve = match (&a.curve, &a.entry) {
        (Some(c), _) => CurveRef::Text(c.clone()),
        (None, Some(e)) => CurveRef::Catalog { catalog: e.clone() },
        (None, None) => return Err(Failure::input("Usage", "one of --input, --curve or --entry is required")),
    };
    Ok(vec![JobSpec {
        label: None,
        curve,
        field: parse_field(&a.field)?,
        singular_points: split_points(&a.points),
        tasks: a.tasks.as_deref().map(split_tasks).unwrap_or_default(),
        candidates: split_points(&a.candidates),
        syzygies: Vec::new(),
        expected: None,
        claim: None,
        catalog_id: None,
        recipe: None,
    }])
}

fn split_tasks(t: &str) -> Vec<String> {
    t.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

fn validate(job: &JobSpec) -> Result<(), Failure> {
    if job.tasks.is_empty() {
        return Err(Failure::input("EmptyTasks", "the task list is empty"));
    }
    for t in &job.tasks {
        if !TASKS.contains(&t.as_str()) {
            return Err(Failure::input("UnknownTask", format!("unknown task '{t}'; expected one of {}", TASKS.join(", "))));
        }
    }
    Ok(())
}

pub fn run(a: &AnalyzeArgs) -> Outcome {
    let jobs = jobs_from_args(a)?;
    if jobs.is_empty() {
        return Err(Failure::input("EmptyJobs", "no jobs"));
    }
    for j in &jobs {
        validate(j)?;
    }
    let needs_catalog = jobs.iter().any(|j| matches!(j.curve, CurveRef::Catalog { .. }));
    let catalog = if needs_catalog {
        let text = std::fs::read_to_string(&a.catalog).map_err(|e| Failure::no_catalog(&a.catalog, e))?;
        load_catalog(&text).map_err(|e| Failure::from(Error::from(e)))?
    } else {
        Vec::new()
    };
    let mut reports = Vec::new();
    for job in &jobs {
        reports.push(run_job(job, &catalog, &a.modular_check)?);
    }
    let math_error = reports.iter().any(|r| r.math_error);
    let failed = reports.iter().any(|r| r.checks.iter().any(|c| !c.pass));
    let doc = json!({
        "schema": SCHEMA,
        "command": "analyze",
        "jobs": reports.iter().map(|r| &r.value).collect::<Vec<_>>(),
    });
    output::emit(&output::to_json(&doc), a.output.as_deref())?;
    Ok(if math_error {
        EXIT_MATH
    } else if failed {
        EXIT_CHECK_FAILED
    } else {
        0
    })
}

struct JobReport {
    value: Value,
    checks: Vec<Check>,
    math_error: bool,
}

/// Polynomial and field of a job, with the singular points a catalog
/// entry contributes.
struct Resolved {
    f: HomogPoly,
    singular_points: Vec<String>,
    entry: Option<CatalogEntry>,
}

fn resolve(job: &JobSpec, catalog: &[CatalogEntry]) -> Result<Resolved, Failure> {
    match &job.curve {
        CurveRef::Text(text) => {
            let field = job.field.clone().unwrap_or(FieldConfig::Rationals).build().map_err(Error::from)?;
            let f = parse_homog(text, &field).map_err(Error::from)?;
            Ok(Resolved {
                f,
                singular_points: job.singular_points.clone(),
                entry: None,
            })
        }
        CurveRef::Catalog { catalog: id } => {
            let entry = catalog
                .iter()
                .find(|e| &e.id == id)
                .ok_or_else(|| Failure::input("UnknownEntry", format!("no catalog entry '{id}'")))?;
            let mut spec = entry.spec.clone();
            if let Some(fc) = &job.field {
                spec.field = fc.clone();
            }
            let f = spec.instantiate().map_err(Error::from)?;
            let singular_points = if job.singular_points.is_empty() {
                entry.singular_points.iter().map(|p| p.point.clone()).collect()
            } else {
                job.singular_points.clone()
            };
            Ok(Resolved {
                f,
                singular_points,
                entry: Some(entry.clone()),
            })
        }
        CurveRef::Recipe { recipe } => {
            let fc = match &job.field {
                Some(fc) => fc.clone(),
                None => recipe.required_field().map_err(Error::from)?,
            };
            let f = recipe.build(&fc.build().map_err(Error::from)?).map_err(Error::from)?;
            Ok(Resolved {
                f,
                singular_points: job.singular_points.clone(),
                entry: None,
            })
        }
    }
}

fn points(field: &Field, texts: &[String]) -> Result<Vec<Point>, Failure> {
    texts
        .iter()
        .map(|t| parse_point(t, field).map_err(|e| Failure::from(Error::from(e))))
        .collect()
}

fn check(name: &str, op: &str, expected: impl ToString, computed: impl ToString) -> Check {
    let (expected, computed) = (expected.to_string(), computed.to_string());
    Check {
        name: name.into(),
        op: op.into(),
        pass: expected == computed,
        expected,
        computed,
    }
}

fn verdict_text(v: &Verdict, tau: u64, maximizing: bool) -> String {
    match v {
        Verdict::Other if tau == 0 => "Other(smooth)".into(),
        _ if maximizing => format!("{v}, maximizing"),
        _ => v.to_string(),
    }
}

/// Lazily computed global invariants shared by several tasks.
struct Globals<'a> {
    f: &'a HomogPoly,
    mdr: Option<Result<u32, Error>>,
    tau: Option<Result<u64, Error>>,
}

impl Globals<'_> {
    fn mdr(&mut self) -> Result<u32, Error> {
        let f = self.f;
        self.mdr.get_or_insert_with(|| mdr(f).map_err(Error::from)).clone()
    }

    fn tau(&mut self) -> Result<u64, Error> {
        let f = self.f;
        self.tau
            .get_or_insert_with(|| global_tjurina(f).map(|t| t as u64).map_err(Error::from))
            .clone()
    }
}

fn task_value(r: Result<Value, Error>, math_error: &mut bool) -> Value {
    r.unwrap_or_else(|e| {
        *math_error = true;
        json!({"error": error_value(&e)})
    })
}

fn syzygy(f: &HomogPoly, comps: &[String; 3]) -> Result<SyzygyVector, Error> {
    let field = f.field();
    let polys: Vec<HomogPoly> = comps.iter().map(|c| parse_homog(c, field)).collect::<Result<_, _>>()?;
    let degree = polys.iter().filter(|p| !p.is_zero()).map(|p| p.degree()).max().unwrap_or(0);
    let comps: [HomogPoly; 3] = polys.try_into().expect("three components");
    Ok(SyzygyVector::new(degree, comps))
}

fn run_job(job: &JobSpec, catalog: &[CatalogEntry], primes: &[u64]) -> Result<JobReport, Failure> {
    let Resolved { f, singular_points, entry } = resolve(job, catalog)?;
    if !f.is_squarefree().map_err(Error::from)? {
        return Err(Error::Construct(freecurve::construct::ConstructError::NotReduced).into());
    }
    let field = f.field().clone();
    let sing = points(&field, &singular_points)?;
    let cand = if job.candidates.is_empty() { sing.clone() } else { points(&field, &job.candidates)? };
    let wants = |t: &str| job.tasks.iter().any(|x| x == t);
    let d = f.degree();
    let mut g = Globals { f: &f, mdr: None, tau: None };
    let mut math_error = false;
    let mut results = Map::new();

    if wants("mdr") {
        let v = g.mdr().map(|r| json!({"value": r, "op": "graded::mdr"}));
        results.insert("mdr".into(), task_value(v, &mut math_error));
    }
    if wants("tjurina") {
        let v = g.tau().map(|t| json!({"value": t, "op": "graded::global_tjurina"}));
        results.insert("tjurina".into(), task_value(v, &mut math_error));
    }

    // local reports at the listed singular points, shared by local and classify
    let need_local = wants("local") || wants("classify") || wants("flexes") || job.expected.is_some();
    let local = if need_local && !sing.is_empty() {
        let r: Result<Vec<_>, Error> = f.hessian().map_err(Error::from).and_then(|h| {
            sing.par_iter()
                .map(|p| analyze_point_with_hessian(&f, &h, p).map_err(Error::from))
                .collect()
        });
        Some(r)
    } else {
        None
    };
    let local_sum: Option<u64> = match &local {
        Some(Ok(reps)) => Some(reps.iter().map(|r| r.tau as u64).sum()),
        _ => None,
    };
    // a singular point has τ ≥ 1, so a matching sum proves the list complete
    let ade = |tau: u64| match &local {
        None => tau == 0,
        Some(Ok(reps)) => local_sum == Some(tau) && reps.iter().all(|r| r.is_simple()),
        Some(Err(_)) => false,
    };

    if wants("local") {
        let v = match &local {
            None => Ok(json!({"points": [], "op": "local::analyze_point"})),
            Some(Err(e)) => Err(e.clone()),
            Some(Ok(reps)) => g.tau().map(|tau| {
                let pts: Vec<Value> = reps
                    .iter()
                    .map(|r| {
                        let mut v = serde_json::to_value(r).expect("serializable");
                        v["simple"] = json!(r.is_simple());
                        v
                    })
                    .collect();
                json!({
                    "points": pts,
                    "sum_tau": local_sum,
                    "complete": local_sum == Some(tau),
                    "op": "local::analyze_point",
                })
            }),
        };
        results.insert("local".into(), task_value(v, &mut math_error));
    }

    let mut classification = None;
    if wants("classify") || job.expected.as_ref().is_some_and(|e| e.verdict.is_some() || e.maximizing.is_some()) {
        let v = (|| {
            let (r, tau) = (g.mdr()?, g.tau()?);
            let c = classify_curve(d, r, tau, ade(tau))?;
            classification = Some(c.clone());
            Ok(json!({
                "verdict": c.verdict,
                "summary": verdict_text(&c.verdict, tau, c.maximizing),
                "maximizing": c.maximizing,
                "ade_attested": ade(tau),
                "mdr": r,
                "tau": tau,
                "bound": c.bound,
                "rule": c.rule,
                "op": "classify::classify_curve",
            }))
        })();
        if wants("classify") {
            results.insert("classify".into(), task_value(v, &mut math_error));
        }
    }

    if wants("flexes") {
        let v = (|| {
            let tau = g.tau()?;
            let sum = match &local {
                Some(Ok(reps)) => reps.iter().map(|r| r.tau as u64).sum(),
                Some(Err(e)) => return Err(e.clone()),
                None => 0,
            };
            if sum != tau {
                return Ok(json!({
                    "error": {"kind": "IncompleteSingularPoints",
                              "message": format!("local tau sum {sum} differs from the global tau {tau}")},
                }));
            }
            let rep = total_inflection(&f, &sing, &job.candidates_points(&field)?, &[])?;
            let mut v = serde_json::to_value(&rep).expect("serializable");
            v["op"] = json!("analyze::total_inflection");
            Ok(v)
        })();
        if v.as_ref().is_ok_and(|v| v.get("error").is_some()) {
            math_error = true;
        }
        results.insert("flexes".into(), task_value(v, &mut math_error));
    }

    if wants("modular") {
        let v: Result<Value, Error> = cand
            .par_iter()
            .map(|p| {
                let rep = is_modular_point(&f, p)?;
                let mut v = serde_json::to_value(&rep).expect("serializable");
                if rep.is_modular {
                    let s = sampled_lines_agreement(&f, p, &rep, SAMPLED_LINES, SAMPLE_SEED)?;
                    v["sampled_lines"] = json!({
                        "sampled": s.sampled,
                        "agreeing": s.agreeing,
                        "components_skipped": s.components_skipped,
                        "all_agree": s.all_agree(),
                        "op": "analyze::sampled_lines_agreement",
                    });
                }
                v["op"] = json!("analyze::is_modular_point");
                Ok(v)
            })
            .collect::<Result<Vec<_>, Error>>()
            .map(Value::Array);
        results.insert("modular".into(), task_value(v, &mut math_error));
    }

    if wants("supersolvable") {
        let v = is_supersolvable(&f, &cand).map_err(Error::from).map(|rep| {
            let mut v = serde_json::to_value(&rep).expect("serializable");
            v["supersolvable"] = json!(rep.modular_point.is_some());
            v["op"] = json!("analyze::is_supersolvable");
            v
        });
        results.insert("supersolvable".into(), task_value(v, &mut math_error));
    }

    if wants("saito") {
        let v = (|| {
            if job.syzygies.len() == 2 {
                let r1 = syzygy(&f, &job.syzygies[0])?;
                let r2 = syzygy(&f, &job.syzygies[1])?;
                let certified = saito_certificate(&f, &r1, &r2)?;
                return Ok(json!({
                    "certified": certified,
                    "annihilates": [r1.annihilates(&f), r2.annihilates(&f)],
                    "exponents": [r1.degree, r2.degree],
                    "r1": r1.to_text(),
                    "r2": r2.to_text(),
                    "op": "graded::saito_certificate",
                }));
            }
            if !job.syzygies.is_empty() {
                return Err(Error::Graded(freecurve::graded::GradedError::DegreeMismatch {
                    d1: job.syzygies.len() as u32,
                    d2: 0,
                    expected: 2,
                }));
            }
            let r = g.mdr()?;
            let pair = find_saito_pair(&f, r)?;
            Ok(match pair {
                Some((a, b)) => json!({
                    "certified": true,
                    "exponents": [a.degree, b.degree],
                    "r1": a.to_text(),
                    "r2": b.to_text(),
                    "op": "graded::find_saito_pair",
                }),
                None => json!({"certified": false, "mdr": r, "op": "graded::find_saito_pair"}),
            })
        })();
        results.insert("saito".into(), task_value(v, &mut math_error));
    }

    // expected values
    let mut checks = Vec::new();
    if let Some(exp) = &job.expected {
        checks.push(check("degree", "parse::parse_homog", exp.degree, d));
        if let Some(m) = exp.mdr {
            checks.push(check("mdr", "graded::mdr", m, fmt(g.mdr())));
        }
        if let Some(t) = exp.tau {
            checks.push(check("tau", "graded::global_tjurina", t, fmt(g.tau())));
        }
        if let Some(v) = &exp.verdict {
            let got = classification.as_ref().map_or("error".to_string(), |c| c.verdict.to_string());
            checks.push(check("verdict", "classify::classify_curve", v, got));
        }
        if let Some(m) = exp.maximizing {
            let got = classification.as_ref().map_or("error".to_string(), |c| c.maximizing.to_string());
            checks.push(check("maximizing", "classify::classify_curve", m, got));
        }
    }

    // prime double check
    let mut cross = Vec::new();
    for &p in primes {
        let name = format!("mod {p}");
        let op = "construct::reduce_mod_p, graded::mdr, graded::global_tjurina";
        let here = format!("({}, {})", fmt(g.mdr()), fmt(g.tau()));
        let there = match reduce_mod_p(&f, p) {
            Ok(Some(h)) => match (mdr(&h), global_tjurina(&h)) {
                (Ok(r), Ok(t)) => format!("({r}, {t})"),
                (Err(e), _) | (_, Err(e)) => format!("error: {e}"),
            },
            Ok(None) => "no reduction for this prime".into(),
            Err(e) => format!("error: {e}"),
        };
        cross.push(check(&name, op, here, there));
    }
    checks.extend(cross.iter().cloned());

    let mut value = json!({
        "curve": f.to_text(),
        "degree": d,
        "field": FieldConfig::of(&field),
        "tasks": results,
        "checks": checks,
        "provenance": {
            "field": field.describe(),
            "primes": primes,
            "cross_checks_passed": cross.iter().all(|c| c.pass),
            "singular_points": singular_points,
        },
    });
    if let Some(l) = &job.label {
        value["label"] = json!(l);
    }
    let claim = job.claim.clone().or_else(|| entry.as_ref().map(|e| e.claim.clone()));
    if let Some(c) = claim {
        value["claim"] = json!(c);
    }
    if let Some(id) = job.catalog_id.clone().or_else(|| entry.as_ref().map(|e| e.id.clone())) {
        value["catalog_id"] = json!(id);
    }
    Ok(JobReport { value, checks, math_error })
}

fn fmt<T: ToString>(r: Result<T, Error>) -> String {
    r.map_or_else(|e| format!("error: {e}"), |v| v.to_string())
}

impl JobSpec {
    fn candidates_points(&self, field: &Field) -> Result<Vec<Point>, Error> {
        self.candidates
            .iter()
            .map(|t| parse_point(t, field).map_err(Error::from))
            .collect()
    }
}
