//! Random generators, elementwise oracles, named examples and the property
//! suites built on them.

pub mod finite;
pub mod gallery;
pub mod gen;
pub mod suites;

pub use gallery::{gallery, GALLERY};
pub use gen::{case_seed, gen_complex, Gen, GenProfile, Generated, Style};
pub use suites::{run_all, run_suite, Counterexample, SuiteReport, SUITES};
