use eichler_core::orders::Mode;
use eichler_core::report::{cache_key, cache_lookup, cache_store, run, CacheEntry, RunConfig, SCHEMA_VERSION};
use eichler_core::Error;

fn body(config: &RunConfig) -> String {
    run(config).unwrap().0.body_json().unwrap()
}

#[test]
fn q11_run() {
    let (r, t) = run(&RunConfig::new(1, 11, Mode::LevelP, 30)).unwrap();
    assert_eq!(r.class_count, 2);
    assert_eq!(r.span.rank, 1);
    assert_eq!(r.mass, "5/6");
    assert!(r.passed);
    assert_eq!(t.stages.len(), 4);
}

#[test]
fn errors_carry_codes() {
    let e = run(&RunConfig::new(5, 5, Mode::LevelP, 10)).unwrap_err();
    assert_eq!(e.code(), "RamifiedPrime");
    let e = run(&RunConfig::new(5, 11, Mode::LevelOne, 10)).unwrap_err();
    assert_eq!(e.code(), "LevelOneImpossible");
    let e = run(&RunConfig::new(1, 11, Mode::LevelP, 0)).unwrap_err();
    assert!(matches!(e, Error::Config(_)));
}

#[test]
fn worker_count_does_not_change_body() {
    let mut c = RunConfig::new(5, 11, Mode::LevelP, 12);
    let one = body(&c);
    c.workers = 8;
    assert_eq!(one, body(&c));
    assert_eq!(one, body(&c));
}

#[test]
fn cold_and_warm_cache_agree() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = RunConfig::new(5, 11, Mode::LevelP, 10);
    c.cache_dir = Some(dir.path().to_path_buf());
    let cold = body(&c);
    assert!(dir.path().join(cache_key(5, 11, Mode::LevelP, 2)).exists());
    assert!(cache_lookup(dir.path(), 5, 11, Mode::LevelP, 2).is_some());
    assert!(cache_lookup(dir.path(), 5, 11, Mode::LevelP, 3).is_none());
    assert_eq!(cold, body(&c));
    // a run without a cache directory neither reads nor writes one
    c.cache_dir = None;
    assert_eq!(cold, body(&c));
}

#[test]
fn stale_and_corrupt_entries_are_ignored() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = RunConfig::new(1, 23, Mode::LevelP, 10);
    c.cache_dir = Some(dir.path().to_path_buf());
    let cold = body(&c);
    let (order, classes) = cache_lookup(dir.path(), 1, 23, Mode::LevelP, 2).unwrap();
    let path = dir.path().join(cache_key(1, 23, Mode::LevelP, 2));

    let old = CacheEntry {
        schema: SCHEMA_VERSION - 1,
        d: 1,
        p: 23,
        mode: Mode::LevelP,
        ell: 2,
        order: order.clone(),
        classes: classes.clone(),
    };
    std::fs::write(&path, serde_json::to_string(&old).unwrap()).unwrap();
    assert!(cache_lookup(dir.path(), 1, 23, Mode::LevelP, 2).is_none());

    std::fs::write(&path, "{ not json").unwrap();
    assert!(cache_lookup(dir.path(), 1, 23, Mode::LevelP, 2).is_none());
    assert_eq!(cold, body(&c));

    // an entry with a missing class fails the mass check and is recomputed
    let mut short = old;
    short.schema = SCHEMA_VERSION;
    short.classes.pop();
    cache_store(dir.path(), &short);
    assert_eq!(
        cache_lookup(dir.path(), 1, 23, Mode::LevelP, 2).unwrap().1.len(),
        classes.len() - 1
    );
    assert_eq!(cold, body(&c));
    assert_eq!(cache_lookup(dir.path(), 1, 23, Mode::LevelP, 2).unwrap().1, classes);
}

#[test]
fn explicit_primes() {
    let mut c = RunConfig::new(1, 11, Mode::LevelP, 20);
    c.aux_prime = Some(3);
    c.hecke_primes = vec![2, 3];
    let r = run(&c).unwrap().0;
    assert_eq!(r.config.hecke.len(), 2);
    assert_eq!(r.brandt.len(), 2);
    assert_eq!(r.eigenvalues.len(), 2);
    c.hecke_primes = vec![11];
    assert_eq!(run(&c).unwrap_err().code(), "BadPrime");
    c.hecke_primes = vec![];
    c.aux_prime = Some(4);
    assert_eq!(run(&c).unwrap_err().code(), "BadPrime");
}

#[test]
fn writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = RunConfig::new(1, 11, Mode::LevelP, 12);
    let out = dir.path().join("r.json");
    c.out = Some(out.clone());
    let (r, _) = run(&c).unwrap();
    let text = std::fs::read_to_string(out).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["class_count"], 2);
    assert_eq!(v["schema"], SCHEMA_VERSION);
    assert!(v["timings"]["stages"].is_array());
    // fixed key order: schema first, timings last
    assert!(text.starts_with("{\n  \"schema\""));
    let top: Vec<&str> = text.lines().filter(|l| l.starts_with("  \"")).collect();
    assert!(top.last().unwrap().starts_with("  \"timings\""));
    assert!(r.passed);
}
