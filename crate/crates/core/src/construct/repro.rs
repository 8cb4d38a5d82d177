//! Checks a catalog entry against freshly computed invariants.

use serde::Serialize;

use super::{add_line, line_addition_predicate, line_coeffs, CatalogEntry, LineAddition, ConstructError};
use crate::analyze::{is_modular_point, line_text, sampled_lines_agreement};
use crate::classify::classify_curve;
use crate::coeff::{Field, Scalar};
use crate::graded::{global_tjurina, mdr};
use crate::local::{analyze_point_with_hessian, LocalReport};
use crate::parse::{parse_homog, parse_point};
use crate::poly::{roots, HomogPoly, UniPoly};

/// Two primes `≡ 1 mod 24`, so that `i`, `√−3` and the primitive sixth
/// roots of unity all exist modulo them.
pub const DEFAULT_PRIMES: [u64; 2] = [2_147_483_497, 2_147_483_353];

/// Number of random lines tested through every claimed modular point.
const SAMPLED_LINES: usize = 50;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReproOptions {
    pub max_degree: u32,
    pub allow_large: bool,
    /// Primes for the modular double check; empty disables it.
    pub primes: Vec<u64>,
}

impl Default for ReproOptions {
    fn default() -> Self {
        ReproOptions {
            max_degree: 13,
            allow_large: false,
            primes: DEFAULT_PRIMES.to_vec(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One expected-versus-computed comparison, naming the operation that
/// produced the computed value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub op: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryOutcome {
    pub id: String,
    pub family: String,
    pub degree: Option<u32>,
    pub field: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub checks: Vec<Check>,
}

impl EntryOutcome {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: impl Into<String>, op: &str, expected: impl ToString, computed: impl ToString) {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        let pass = expected == computed;
        self.0.push(Check {
            name: name.into(),
            op: op.into(),
            expected,
            computed,
            pass,
        });
    }

    fn error(&mut self, name: impl Into<String>, op: &str, e: impl ToString) {
        self.0.push(Check {
            name: name.into(),
            op: op.into(),
            expected: "success".into(),
            computed: format!("error: {}", e.to_string()),
            pass: false,
        });
    }
}

/// Image of `f` modulo `p`, sending the generator of a simple extension of
/// the rationals to the smallest root of its modulus mod `p`. `None` when
/// the modulus has no root or a denominator vanishes.
pub fn reduce_mod_p(f: &HomogPoly, p: u64) -> Result<Option<HomogPoly>, ConstructError> {
    let field = f.field();
    let target = Field::prime(p)?;
    let reduce_rational = |s: &Scalar| -> Option<Scalar> {
        let q = field.as_rational(s).or_else(|| field.base().and_then(|b| b.as_rational(s)))?;
        target.from_rational(&q).ok()
    };
    let image: Box<dyn Fn(&Scalar) -> Option<Scalar>> = if field.is_rationals() {
        Box::new(move |s| reduce_rational(s))
    } else if field.prime_modulus() == Some(p) {
        Box::new(|s| Some(s.clone()))
    } else if let (Some(base), Some(modulus)) = (field.base(), field.modulus()) {
        if !base.is_rationals() {
            return Ok(None);
        }
        let mut m = Vec::with_capacity(modulus.len());
        for c in modulus {
            match base.as_rational(c).and_then(|q| target.from_rational(&q).ok()) {
                Some(r) => m.push(r),
                None => return Ok(None),
            }
        }
        let Some((root, _)) = roots(&UniPoly::new(&target, m))?.into_iter().next() else {
            return Ok(None);
        };
        let target = target.clone();
        let base = base.clone();
        Box::new(move |s: &Scalar| {
            let Scalar::Ext(v) = s else { return None };
            let mut acc = target.zero();
            let mut pw = target.one();
            for c in v {
                let c = target.from_rational(&base.as_rational(c)?).ok()?;
                acc = target.add(&acc, &target.mul(&c, &pw));
                pw = target.mul(&pw, &root);
            }
            Some(acc)
        })
    } else {
        return Ok(None);
    };
    let mut ok = true;
    let g = f.poly().map_coeffs(&target, |c| {
        image(c).unwrap_or_else(|| {
            ok = false;
            target.zero()
        })
    });
    if !ok {
        return Ok(None);
    }
    let h = HomogPoly::new(g)?;
    Ok((h.degree() == f.degree()).then_some(h))
}

/// Runs every check of one catalog entry. `catalog` supplies base entries
/// for line additions.
pub fn verify_entry(entry: &CatalogEntry, catalog: &[CatalogEntry], opts: &ReproOptions) -> EntryOutcome {
    let mut out = EntryOutcome {
        id: entry.id.clone(),
        family: entry.family().to_string(),
        degree: None,
        field: String::new(),
        status: Status::Pass,
        reason: None,
        checks: Vec::new(),
    };
    let mut checks = Checks(Vec::new());
    let f = match entry.spec.instantiate() {
        Ok(f) => f,
        Err(e) => {
            checks.error("instantiate", "construct::instantiate", e);
            return finish(out, checks);
        }
    };
    out.field = f.field().describe();
    out.degree = Some(f.degree());
    if f.degree() > opts.max_degree && !opts.allow_large {
        out.status = Status::Skipped;
        out.reason = Some(format!("degree {} above --max-degree {}", f.degree(), opts.max_degree));
        return out;
    }
    run_checks(entry, catalog, opts, &f, &mut checks);
    finish(out, checks)
}

fn finish(mut out: EntryOutcome, checks: Checks) -> EntryOutcome {
    out.checks = checks.0;
    if out.checks.iter().any(|c| !c.pass) {
        out.status = Status::Fail;
    }
    out
}

fn run_checks(entry: &CatalogEntry, catalog: &[CatalogEntry], opts: &ReproOptions, f: &HomogPoly, checks: &mut Checks) {
    let field = f.field();
    let exp = &entry.expected;
    checks.push("degree", "construct::instantiate", exp.degree, f.degree());
    checks.push("reduced", "HomogPoly::is_squarefree", true, true);

    let r = match mdr(f) {
        Ok(r) => r,
        Err(e) => return checks.error("mdr", "graded::mdr", e),
    };
    let tau = match global_tjurina(f) {
        Ok(t) => t as u64,
        Err(e) => return checks.error("tau", "graded::global_tjurina", e),
    };
    if let Some(m) = exp.mdr {
        checks.push("mdr", "graded::mdr", m, r);
    }
    if let Some(t) = exp.tau {
        checks.push("tau", "graded::global_tjurina", t, tau);
    }

    // singular points; the ADE attestation needs a complete list
    let reports: Vec<Option<LocalReport>> = match f.hessian() {
        Ok(h) => entry
            .singular_points
            .iter()
            .map(|pc| {
                let name = format!("local {}", pc.point);
                let p = match parse_point(&pc.point, field) {
                    Ok(p) => p,
                    Err(e) => {
                        checks.error(name, "parse::parse_point", e);
                        return None;
                    }
                };
                match analyze_point_with_hessian(f, &h, &p) {
                    Ok(rep) => {
                        let verdict = pc.claim.verify(&rep).map(|_| "ok".to_string()).unwrap_or_else(|e| e);
                        checks.push(format!("{name} type"), "local::analyze_point", "ok", verdict);
                        checks.push(format!("{name} identities"), "local::analyze_point", true, rep.checks.all_hold());
                        Some(rep)
                    }
                    Err(e) => {
                        checks.error(name, "local::analyze_point", e);
                        None
                    }
                }
            })
            .collect(),
        Err(e) => {
            checks.error("hessian", "HomogPoly::hessian", e);
            Vec::new()
        }
    };
    let local_sum: Option<u64> = reports.iter().map(|r| r.as_ref().map(|r| r.tau as u64)).sum();
    let complete = !entry.singular_points.is_empty() && entry.singular_points_complete;
    if complete {
        checks.push(
            "sum of local tau",
            "local::analyze_point",
            tau,
            local_sum.map_or("incomplete".into(), |s| s.to_string()),
        );
    }
    let ade = complete
        && local_sum == Some(tau)
        && entry.singular_points.iter().all(|pc| pc.claim.label.is_ade())
        && checks.0.iter().all(|c| c.pass);

    if exp.verdict.is_some() || exp.maximizing.is_some() {
        match classify_curve(f.degree(), r, tau, ade) {
            Ok(c) => {
                if let Some(v) = &exp.verdict {
                    checks.push("verdict", "classify::classify_curve", v, &c.verdict);
                }
                if let Some(m) = exp.maximizing {
                    checks.push("maximizing", "classify::classify_curve", m, c.maximizing);
                }
            }
            Err(e) => checks.error("verdict", "classify::classify_curve", e),
        }
    }

    // the family's closed form, where it has one
    if let Some(pred) = entry.spec.recipe.predicted(f.degree()) {
        if let Some(m) = pred.mdr {
            checks.push("closed-form mdr", "graded::mdr", m, r);
        }
        if let Some(t) = pred.tau {
            checks.push("closed-form tau", "graded::global_tjurina", t, tau);
        }
    }

    for text in &exp.modular_points {
        let name = format!("modular {text}");
        let p = match parse_point(text, field) {
            Ok(p) => p,
            Err(e) => {
                checks.error(name, "parse::parse_point", e);
                continue;
            }
        };
        match is_modular_point(f, &p) {
            Ok(rep) => {
                checks.push(name.clone(), "analyze::is_modular_point", true, rep.is_modular);
                match sampled_lines_agreement(f, &p, &rep, SAMPLED_LINES, 0x5eed) {
                    Ok(s) => checks.push(format!("{name} sampled lines"), "analyze::sampled_lines_agreement", true, s.all_agree()),
                    Err(e) => checks.error(format!("{name} sampled lines"), "analyze::sampled_lines_agreement", e),
                }
            }
            Err(e) => checks.error(name, "analyze::is_modular_point", e),
        }
    }
    for nm in &exp.non_modular {
        let name = format!("not modular {}", nm.point);
        let p = match parse_point(&nm.point, field) {
            Ok(p) => p,
            Err(e) => {
                checks.error(name, "parse::parse_point", e);
                continue;
            }
        };
        match is_modular_point(f, &p) {
            Ok(rep) => {
                checks.push(name.clone(), "analyze::is_modular_point", false, rep.is_modular);
                if let Some(w) = &nm.witness {
                    let canonical = parse_homog(w, field).map(|l| line_text(field, &line_coeffs(&l))).unwrap_or_else(|e| e.to_string());
                    let found = rep.witnesses.iter().any(|c| c.line == canonical && !c.good);
                    checks.push(format!("{name} witness"), "analyze::is_modular_point", &canonical, if found {
                        canonical.clone()
                    } else {
                        let ws: Vec<&str> = rep.witnesses.iter().map(|c| c.line.as_str()).collect();
                        format!("[{}]", ws.join(", "))
                    });
                }
            }
            Err(e) => checks.error(name, "analyze::is_modular_point", e),
        }
    }

    if let Some(a) = &exp.added_line {
        added_line_check(a, catalog, f, r, checks);
    }

    for &p in &opts.primes {
        let name = format!("mod {p}");
        match reduce_mod_p(f, p) {
            Ok(Some(g)) => match (mdr(&g), global_tjurina(&g)) {
                (Ok(rp), Ok(tp)) => checks.push(name, "graded::mdr, graded::global_tjurina", format!("({r}, {tau})"), format!("({rp}, {tp})")),
                (Err(e), _) | (_, Err(e)) => checks.error(name, "graded::mdr", e),
            },
            Ok(None) => checks.push(name, "construct::reduce_mod_p", "reduction", "no reduction for this prime"),
            Err(e) => checks.error(name, "construct::reduce_mod_p", e),
        }
    }
}

fn added_line_check(a: &super::catalog::AddedLine, catalog: &[CatalogEntry], f: &HomogPoly, r: u32, checks: &mut Checks) {
    let name = "line addition";
    let Some(base) = catalog.iter().find(|e| e.id == a.base) else {
        return checks.error(name, "catalog", format!("unknown base entry {}", a.base));
    };
    let f1 = match base.spec.recipe.build(f.field()) {
        Ok(g) => g,
        Err(e) => return checks.error(name, "construct::build", e),
    };
    let l = match parse_homog(&a.line, f.field()) {
        Ok(l) => l,
        Err(e) => return checks.error(name, "parse::parse_homog", e),
    };
    match add_line(&f1, &l) {
        Ok(g) => checks.push("curve equals base times line up to scalar", "construct::add_line", f.monic().to_text(), g.monic().to_text()),
        Err(e) => return checks.error(name, "construct::add_line", e),
    }
    let r1 = match mdr(&f1) {
        Ok(r1) => r1,
        Err(e) => return checks.error(name, "graded::mdr", e),
    };
    match line_addition_predicate(&f1, r1, &l) {
        Ok(LineAddition::Predicted { mdr: pred, .. }) => {
            checks.push("predicate applies", "construct::line_addition_predicate", a.predicted, true);
            checks.push("predicted mdr", "construct::line_addition_predicate", pred, r);
        }
        Ok(LineAddition::NotApplicable { reason }) => {
            checks.push("predicate applies", "construct::line_addition_predicate", a.predicted, false);
            if a.predicted {
                checks.error("predicted mdr", "construct::line_addition_predicate", reason);
            }
        }
        Err(e) => checks.error(name, "construct::line_addition_predicate", e),
    }
}
