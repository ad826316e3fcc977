use cubing_core::verify::suites::{remark_n_search, run_lemma_suite, verify_solvability_boundary, verify_table1, verify_theorem31};
use cubing_core::verify::{LemmaScope, Report, SuiteConfig};

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

fn small_scope() -> LemmaScope {
    LemmaScope { exhaustive_cap: 12, sample_cap: 60, min_samples: 60 }
}

#[test]
fn theorem31_on_small_catalog() {
    let r = verify_theorem31(32, &SuiteConfig::default());
    assert!(r.passed(), "{}", r.to_json());
    assert!(r.instances > 50);
}

#[test]
fn lemma_suite_small_scope() {
    let cfg = SuiteConfig { seed: 7, ..SuiteConfig::default() };
    let r = run_lemma_suite(small_scope(), &cfg);
    assert!(r.passed(), "{}", r.to_json());
    assert!(r.data["sampled_instances"].as_u64().unwrap() >= 60);
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    let cfg = SuiteConfig { seed: 11, ..SuiteConfig::default() };
    let run = |threads| -> Vec<String> {
        in_pool(threads, || {
            let reports: Vec<Report> = vec![
                run_lemma_suite(small_scope(), &cfg),
                verify_theorem31(24, &cfg),
                remark_n_search(5, 16, &cfg),
            ];
            reports.iter().map(Report::canonical_json).collect()
        })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn different_seeds_sample_differently() {
    let a = run_lemma_suite(small_scope(), &SuiteConfig { seed: 1, ..SuiteConfig::default() });
    let b = run_lemma_suite(small_scope(), &SuiteConfig { seed: 2, ..SuiteConfig::default() });
    assert_ne!(a.canonical_json(), b.canonical_json());
}

#[test]
fn boundary_and_table() {
    let r = verify_solvability_boundary(60, &SuiteConfig::default());
    assert!(r.passed(), "{}", r.to_json());
    let t = verify_table1(9, 10_000_000, 0);
    assert!(t.passed(), "{}", t.to_json());
    assert_eq!(t.instances, 4);
}

#[test]
fn known_exponents_force_commuting() {
    for n in [-1, 2, -2, 3] {
        let r = remark_n_search(n, 32, &SuiteConfig::default());
        assert!(r.passed());
        assert!(r.data["witness"].is_null());
    }
}
