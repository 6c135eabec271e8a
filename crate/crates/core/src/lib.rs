//! Exact decision procedures for purity and minimality of chain complexes
//! of finitely presented modules over ℤ, ℤ/n, ℤ[1/S] and ℤ_(p).

pub mod complex;
pub mod crt;
pub mod error;
pub mod harness;
pub mod int;
pub mod json;
pub mod linalg;
pub mod matrix;
pub mod minimality;
pub mod module;
pub mod resolution;
pub mod ring;

pub use complex::{
    chain_map_generators, chain_retraction, classify_map, classify_ses, cone, homotopy_between, null_homotopy, total_hom,
    total_tensor, ChainComplex, ChainMap, ConeData, Homotopy, MapFlags, SesComplexes, SesFlags, Shape, Subquotient,
    SubquotientKind,
};
pub use error::{Error, Issue, Result};
pub use int::Int;
pub use linalg::{kernel, snf, solve, LinearSystem, Snf, Term};
pub use matrix::Matrix;
pub use resolution::{
    dimension, free_resolution, module_dimension, pure_minimal_replacement, resolve_module, Dimension, DimensionKind,
    Resolution,
};
pub use ring::{Elem, RingSpec};
pub use minimality::{
    diagnose, is_minimal, is_pure_minimal, is_split_minimal, minimality, reduce, split_minimality, DiagnosisReport,
    Minimality, Move, Reduction, Tri,
};
pub use module::{
    character_dual, character_dual_hom, classify_module, hom_modules, is_pure_ses, tensor_modules, CanonicalForm,
    FPModule, HomModule, Kic, ModuleFlags, ModuleHom, PurityVerdict, SesModules,
};
