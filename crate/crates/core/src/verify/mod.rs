//! Machine checks of statements about cube maps over a catalog of finite groups.

pub mod catalog;
pub mod lemmas;
pub mod report;
pub mod suites;

pub use catalog::{catalog, label, resolve};
pub use lemmas::{check_instance, check_lemma, Counterexample, GroupContext, LemmaId, LemmaReport};
pub use report::Report;
pub use suites::{
    remark_n_search, run_lemma_suite, verify_solvability_boundary, verify_table1, verify_theorem31, LemmaScope,
    SuiteConfig,
};
