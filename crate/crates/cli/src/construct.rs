use freecurve::coeff::FieldConfig;
use freecurve::construct::{load_catalog, CatalogEntry, CurveSpec, Expected, Part, Recipe};
use freecurve::Error;
use serde_json::json;

use crate::analyze::{CurveRef, JobSpec};
use crate::output::{self, Failure, SCHEMA};
use crate::{ConstructArgs, Outcome};

fn need<T: Copy>(v: Option<T>, flag: &str, family: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::input("BadParams", format!("{family} needs --{flag}")))
}

fn parse_part(s: &str) -> Result<Part, Failure> {
    serde_json::from_value(json!(s)).map_err(|_| Failure::input("BadParams", format!("unknown part '{s}'")))
}

fn label(part: Part) -> &'static str {
    match part {
        Part::Base => "C",
        Part::Prime => "C'",
        Part::DoublePrime => "C''",
        Part::Triangle => "triangle",
        Part::TangentsAndTriangle => "tangents-and-triangle",
        Part::FlexTangents => "flex-tangents",
        Part::Monomial => "monomial",
    }
}

/// Labelled recipes requested on the command line.
fn recipes(a: &ConstructArgs) -> Result<Vec<(String, Recipe)>, Failure> {
    let fam = a.family.as_str();
    let only = a.part.as_deref().map(parse_part).transpose()?;
    let parts = |all: &[Part]| -> Vec<Part> {
        match only {
            Some(p) => vec![p],
            None => all.to_vec(),
        }
    };
    let with_parts = |all: &[Part], make: &dyn Fn(Part) -> Recipe| {
        parts(all)
            .into_iter()
            .map(|p| (label(p).to_string(), make(p)))
            .collect::<Vec<_>>()
    };
    use Part::*;
    Ok(match fam {
        "thom-sebastiani" => {
            let d = need(a.d, "d", fam)?;
            if a.ell.is_empty() {
                return Err(Failure::input("BadParams", "thom-sebastiani needs --ell"));
            }
            with_parts(&[Base, Prime, DoublePrime], &|part| Recipe::ThomSebastiani {
                lines: a.ell.clone(),
                k: a.k.clone(),
                d,
                part,
            })
        }
        "fermat-extended" => {
            let d = need(a.d, "d", fam)?;
            with_parts(&[Prime, DoublePrime], &|part| Recipe::FermatExtended { d, part })
        }
        "fermat-arrangement" => {
            let d = need(a.d, "d", fam)?;
            with_parts(&[Prime, DoublePrime, TangentsAndTriangle], &|part| Recipe::FermatArrangement { d, part })
        }
        "fermat-lines" => {
            let d = need(a.d, "d", fam)?;
            with_parts(&[FlexTangents, Monomial], &|part| Recipe::FermatArrangement { d, part })
        }
        "cross" => {
            let m = need(a.m, "m", fam)?;
            with_parts(&[Base, Prime, DoublePrime, Triangle], &|part| Recipe::Cross { m, part })
        }
        "tangent-chain" => {
            let d = need(a.d, "d", fam)?;
            let ks: Vec<u32> = if a.k.is_empty() { (0..=d).collect() } else { a.k.clone() };
            ks.into_iter().map(|k| (format!("k={k}"), Recipe::TangentChain { d, k })).collect()
        }
        "conicline" => {
            let m = need(a.m, "m", fam)?;
            let js: Vec<u32> = match a.j {
                Some(j) => vec![j],
                None => (0..=m + 1).collect(),
            };
            js.into_iter().map(|j| (format!("j={j}"), Recipe::Conicline { m, j })).collect()
        }
        "bitangent" => {
            let m = need(a.m, "m", fam)?;
            let ks: Vec<u32> = if a.k.is_empty() { (0..=2 * m + 1).collect() } else { a.k.clone() };
            ks.into_iter().map(|k| (format!("k={k}"), Recipe::Bitangent { m, k })).collect()
        }
        "ciani" => {
            let lambda = a.lambda.clone().ok_or_else(|| Failure::input("BadParams", "ciani needs --lambda"))?;
            vec![(format!("lambda={lambda}"), Recipe::Ciani { lambda })]
        }
        "named" => {
            let name = a.name.clone().ok_or_else(|| Failure::input("BadParams", "named needs --name"))?;
            vec![(name.clone(), Recipe::Named { name })]
        }
        "explicit" => {
            let polynomial = a
                .polynomial
                .clone()
                .ok_or_else(|| Failure::input("BadParams", "explicit needs --polynomial"))?;
            vec![("C".into(), Recipe::Explicit { polynomial })]
        }
        _ => return Err(Failure::input("UnknownFamily", format!("unknown family '{fam}'"))),
    })
}

fn load(a: &ConstructArgs) -> Vec<CatalogEntry> {
    match std::fs::read_to_string(&a.catalog) {
        Ok(text) => load_catalog(&text).unwrap_or_else(|e| {
            eprintln!("warning: ignoring catalog {}: {e}", a.catalog.display());
            Vec::new()
        }),
        Err(_) => Vec::new(),
    }
}

pub fn run(a: &ConstructArgs) -> Outcome {
    let field_override: Option<FieldConfig> = a
        .field
        .as_deref()
        .map(|t| serde_json::from_str(t).map_err(|e| Failure::input("FieldJson", e)))
        .transpose()?;
    let catalog = load(a);
    let mut jobs = Vec::new();
    for (label, recipe) in recipes(a)? {
        // a catalog entry declares the field its points are written in
        let entry = catalog.iter().find(|e| e.spec.recipe == recipe);
        let field = match (&field_override, entry) {
            (Some(fc), _) => fc.clone(),
            (None, Some(e)) => e.spec.field.clone(),
            (None, None) => recipe.required_field().map_err(Error::from)?,
        };
        let spec = CurveSpec {
            recipe: recipe.clone(),
            field: field.clone(),
        };
        let f = spec.instantiate().map_err(Error::from)?;
        let entry = entry.filter(|e| e.spec.field == field);
        let expected = match entry {
            Some(e) => e.expected.clone(),
            None => recipe.predicted(f.degree()).unwrap_or(Expected {
                degree: f.degree(),
                ..Default::default()
            }),
        };
        // a line-addition claim refers to the catalog and is not re-derived here
        let expected = Expected {
            added_line: None,
            modular_points: Vec::new(),
            non_modular: Vec::new(),
            ..expected
        };
        let singular_points = entry
            .filter(|e| e.singular_points_complete)
            .map(|e| e.singular_points.iter().map(|p| p.point.clone()).collect())
            .unwrap_or_default();
        jobs.push(JobSpec {
            label: Some(label),
            curve: CurveRef::Text(f.to_text()),
            field: Some(field),
            singular_points,
            tasks: vec!["mdr".into(), "tjurina".into(), "classify".into()],
            candidates: Vec::new(),
            syzygies: Vec::new(),
            expected: Some(expected),
            claim: entry.map(|e| e.claim.clone()),
            catalog_id: entry.map(|e| e.id.clone()),
            recipe: Some(recipe),
        });
    }
    let doc = json!({
        "schema": SCHEMA,
        "command": "construct",
        "family": a.family,
        "jobs": jobs,
    });
    output::emit(&output::to_json(&doc), a.output.as_deref())?;
    Ok(0)
}
