use freecurve::construct::{load_catalog, verify_entry, ReproOptions, Status};
use rayon::prelude::*;

#[test]
fn every_catalog_entry_reproduces() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../catalog.json")).unwrap();
    let entries = load_catalog(&text).unwrap();
    let opts = ReproOptions {
        allow_large: true,
        ..Default::default()
    };
    let outcomes: Vec<_> = entries.par_iter().map(|e| verify_entry(e, &entries, &opts)).collect();
    let mut failures = Vec::new();
    for o in &outcomes {
        if o.status != Status::Pass {
            let bad: Vec<String> = o
                .checks
                .iter()
                .filter(|c| !c.pass)
                .map(|c| format!("{}: expected {}, computed {}", c.name, c.expected, c.computed))
                .collect();
            failures.push(format!("{} {:?} {:?} {}", o.id, o.status, o.reason, bad.join("; ")));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
    assert!(outcomes.len() >= 60);
}
