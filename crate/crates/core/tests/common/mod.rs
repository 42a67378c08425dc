#![allow(dead_code)]

use std::path::PathBuf;

use qlogic::propositions::Context;
use qlogic::scenario::{self, Scenario};

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// Every `.scn` file under `fixtures/`, sorted by path.
pub fn fixture_paths() -> Vec<PathBuf> {
    let mut paths = vec![fixture_dir().join("wigner.scn")];
    let mut corpus: Vec<PathBuf> = std::fs::read_dir(fixture_dir().join("corpus"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "scn"))
        .collect();
    corpus.sort();
    paths.extend(corpus);
    paths
}

pub fn corpus() -> Vec<(String, Scenario)> {
    let mut out = vec![("builtin".to_string(), scenario::builtin_scenario())];
    for p in fixture_paths() {
        let text = std::fs::read_to_string(&p).unwrap();
        let s = scenario::parse(&text).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        out.push((p.file_name().unwrap().to_string_lossy().into_owned(), s));
    }
    out
}

/// Every choice of one observable per subsystem.
pub fn spanning_contexts(s: &Scenario) -> Vec<Context> {
    let reg = s.registry();
    let subsystems = s.layout().subsystems().len();
    let mut choices: Vec<Vec<&str>> = vec![vec![]];
    for sub in 0..subsystems {
        let here: Vec<&str> = reg
            .observables()
            .iter()
            .filter(|o| o.subsystem() == sub)
            .map(|o| o.name())
            .collect();
        choices = choices
            .into_iter()
            .flat_map(|c| {
                here.iter().map(move |n| {
                    let mut c = c.clone();
                    c.push(*n);
                    c
                })
            })
            .collect();
    }
    choices
        .into_iter()
        .filter(|c| !c.is_empty())
        .map(|c| reg.context(&c).unwrap())
        .collect()
}
