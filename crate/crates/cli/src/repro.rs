use freecurve::construct::{load_catalog, verify_entry, CatalogEntry, EntryOutcome, ReproOptions, Status, DEFAULT_PRIMES};
use freecurve::Error;
use rayon::prelude::*;
use serde_json::json;

use crate::output::{self, Failure, EXIT_CHECK_FAILED, SCHEMA};
use crate::{Outcome, ReproArgs};

#[derive(Debug, PartialEq)]
enum Key {
    Degree,
    Family,
    Id,
}

#[derive(Debug, PartialEq)]
struct Predicate {
    key: Key,
    op: &'static str,
    value: String,
}

fn parse_filter(text: &str) -> Result<Predicate, Failure> {
    let bad = || Failure::input("Filter", format!("cannot parse filter '{text}'; use e.g. degree>13 or family=cross"));
    // longest operators first
    for op in ["<=", ">=", "!=", "==", "<", ">", "="] {
        if let Some((k, v)) = text.split_once(op) {
            let key = match k.trim() {
                "degree" => Key::Degree,
                "family" => Key::Family,
                "id" => Key::Id,
                _ => return Err(bad()),
            };
            let value = v.trim().to_string();
            if key == Key::Degree && value.parse::<u32>().is_err() {
                return Err(bad());
            }
            if key != Key::Degree && !matches!(op, "=" | "==" | "!=") {
                return Err(bad());
            }
            return Ok(Predicate { key, op, value });
        }
    }
    Err(bad())
}

impl Predicate {
    fn accepts(&self, e: &CatalogEntry) -> bool {
        match self.key {
            Key::Degree => {
                let (d, v) = (e.expected.degree, self.value.parse::<u32>().expect("validated"));
                match self.op {
                    "<" => d < v,
                    "<=" => d <= v,
                    ">" => d > v,
                    ">=" => d >= v,
                    "!=" => d != v,
                    _ => d == v,
                }
            }
            Key::Family | Key::Id => {
                let s = if self.key == Key::Family { e.family() } else { e.id.as_str() };
                (s == self.value) != (self.op == "!=")
            }
        }
    }
}

fn table(rows: &[EntryOutcome]) -> String {
    let mut out = String::new();
    let w = rows.iter().map(|r| r.id.len()).max().unwrap_or(2).max(2);
    out.push_str(&format!("{:<7}  {:<w$}  {:>6}  {:<20}  {}\n", "STATUS", "ID", "DEGREE", "FAMILY", "NOTE"));
    for r in rows {
        let status = match r.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        };
        let note = match r.status {
            Status::Skipped => r.reason.clone().unwrap_or_default(),
            Status::Fail => r
                .checks
                .iter()
                .filter(|c| !c.pass)
                .map(|c| format!("{} [{}]: expected {}, computed {}", c.name, c.op, c.expected, c.computed))
                .collect::<Vec<_>>()
                .join("; "),
            Status::Pass => format!("{} checks", r.checks.len()),
        };
        let degree = r.degree.map_or("-".into(), |d| d.to_string());
        out.push_str(&format!("{status:<7}  {:<w$}  {degree:>6}  {:<20}  {note}\n", r.id, r.family));
    }
    let count = |s: Status| rows.iter().filter(|r| r.status == s).count();
    out.push_str(&format!(
        "{} passed, {} failed, {} skipped\n",
        count(Status::Pass),
        count(Status::Fail),
        count(Status::Skipped)
    ));
    out
}

pub fn run(a: &ReproArgs) -> Outcome {
    let text = std::fs::read_to_string(&a.catalog).map_err(|e| Failure::no_catalog(&a.catalog, e))?;
    let catalog = load_catalog(&text).map_err(|e| Failure::from(Error::from(e)))?;
    let mut preds = a.filter.iter().map(|f| parse_filter(f)).collect::<Result<Vec<_>, _>>()?;
    if let Some(f) = &a.family {
        preds.push(Predicate {
            key: Key::Family,
            op: "=",
            value: f.clone(),
        });
    }
    let selected: Vec<&CatalogEntry> = catalog
        .iter()
        .filter(|e| preds.iter().all(|p| p.accepts(e)))
        .filter(|e| a.id.as_ref().is_none_or(|s| e.id.contains(s.as_str())))
        .collect();
    if selected.is_empty() {
        return Err(Failure::input("EmptySelection", "no catalog entry matches the filters"));
    }
    let opts = ReproOptions {
        max_degree: a.max_degree,
        allow_large: a.allow_large,
        primes: if a.modular_check.is_empty() { DEFAULT_PRIMES.to_vec() } else { a.modular_check.clone() },
    };
    // rows come back in catalog order whatever the completion order
    let rows: Vec<EntryOutcome> = selected.par_iter().map(|e| verify_entry(e, &catalog, &opts)).collect();
    let count = |s: Status| rows.iter().filter(|r| r.status == s).count();
    let doc = json!({
        "schema": SCHEMA,
        "command": "repro",
        "options": {
            "catalog": a.catalog.display().to_string(),
            "max_degree": opts.max_degree,
            "allow_large": opts.allow_large,
            "primes": opts.primes,
            "filters": a.filter,
            "family": a.family,
        },
        "summary": {"pass": count(Status::Pass), "fail": count(Status::Fail), "skipped": count(Status::Skipped)},
        "entries": rows,
    });
    let text = output::to_json(&doc);
    if let Some(p) = &a.output {
        output::emit(&text, Some(p))?;
    }
    if a.json {
        println!("{text}");
    } else {
        print!("{}", table(&rows));
    }
    Ok(if count(Status::Fail) > 0 { EXIT_CHECK_FAILED } else { 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filters() {
        let p = parse_filter("degree>13").unwrap();
        assert_eq!((p.key, p.op, p.value.as_str()), (Key::Degree, ">", "13"));
        assert_eq!(parse_filter("degree<=9").unwrap().op, "<=");
        assert_eq!(parse_filter("family=cross").unwrap().key, Key::Family);
        assert!(parse_filter("family>cross").is_err());
        assert!(parse_filter("colour=red").is_err());
        assert!(parse_filter("degree>big").is_err());
    }
}
