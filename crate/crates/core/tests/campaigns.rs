use std::sync::Arc;

use hecke_core::error::{QuiverError, VerifyError};
use hecke_core::hecke::KLCache;
use hecke_core::verify::{self, Options, FAMILIES};
use hecke_core::{CoxeterSystem, Exec, HasseQuiver, HeckeAlgebra};

fn quiver(ty: &str) -> HasseQuiver {
    HasseQuiver::from_system(Arc::new(CoxeterSystem::from_type(ty).unwrap()))
}

fn quick(exec: Exec) -> Options {
    Options { fuzz_triples: 40, random_paths: 40, exec, ..Options::default() }
}

#[test]
fn every_family_runs_on_a3() {
    let q = quiver("A3");
    let families: Vec<&str> = FAMILIES
        .iter()
        .copied()
        .filter(|f| !matches!(*f, "refined-braid" | "dihedral-hook" | "remark74"))
        .collect();
    let report = verify::run(&q, &families, &quick(Exec::default())).unwrap();
    assert!(report.passed(), "{:#?}", report.failures().collect::<Vec<_>>());
    assert_eq!(report.summary().len(), families.len());
}

#[test]
fn strategies_give_identical_reports() {
    let q = quiver("I2(6)");
    let fams = ["hecke", "eq23", "j3", "refined-braid", "cor62", "rewrite", "spanning"];
    let seq = verify::run(&q, &fams, &quick(Exec::Sequential)).unwrap();
    let par = verify::run(&q, &fams, &quick(Exec::Parallel)).unwrap();
    assert_eq!(seq.checks, par.checks);
}

#[test]
fn family_names_are_case_insensitive() {
    let q = quiver("A3");
    let upper = verify::run_family(&q, "T1", &quick(Exec::default())).unwrap();
    let lower = verify::run_family(&q, "t1", &quick(Exec::default())).unwrap();
    assert_eq!(upper, lower);
    assert_eq!(upper.len(), 4);
}

#[test]
fn torsion_families_need_a_supported_type() {
    let q = quiver("B3");
    let err = verify::run_family(&q, "t2", &quick(Exec::default())).unwrap_err();
    assert_eq!(err, VerifyError::Quiver(QuiverError::UnsupportedTorsion));
    let err = verify::run_family(&quiver("A3"), "refined-braid", &quick(Exec::default())).unwrap_err();
    assert_eq!(err, VerifyError::Quiver(QuiverError::UnsupportedTorsion));
    for f in ["j1", "j2", "j3", "r-level", "thm65", "factorize"] {
        let checks = verify::run_family(&q, f, &quick(Exec::default())).unwrap();
        assert!(checks.iter().all(|c| c.passed), "{f}");
    }
}

#[test]
fn kl_cache_round_trip() {
    let sys = Arc::new(CoxeterSystem::from_type("B3").unwrap());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b3.json");
    let h = HeckeAlgebra::new(sys.clone());
    h.fill_cache(Exec::default());
    h.cache().save(&sys, &path).unwrap();
    let loaded = HeckeAlgebra::with_cache(sys.clone(), KLCache::load(&sys, &path).unwrap());
    for y in sys.elements() {
        for w in sys.elements() {
            assert_eq!(h.kl_poly(y, w), loaded.kl_poly(y, w));
        }
    }
    let other = CoxeterSystem::from_type("A3").unwrap();
    assert!(KLCache::load(&other, &path).is_err());
}

#[test]
fn report_serializes() {
    let q = quiver("I2(3)");
    let report = verify::run(&q, &["j1", "refined-braid"], &quick(Exec::default())).unwrap();
    let v = serde_json::to_value(&report).unwrap();
    assert_eq!(v["system"], "I2(3)");
    assert!(v["checks"][0]["family"].is_string());
}
