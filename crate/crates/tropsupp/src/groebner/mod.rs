//! Module Groebner machinery: term orders, initial submodules, stratifications,
//! transversality and flat limits.

pub mod charts;
pub mod flatlimit;
pub mod gb;
pub mod module;
pub mod poly;
pub mod q;
pub mod strat;
pub mod support;
pub mod torus;

pub use strat::{groebner_stratification, TropicalSupport};
pub use module::{initial_form, initial_submodule, Element, Module, Ring, WeightOrder};
pub use charts::{check_strict_total, is_transverse, verify_flatness_conditions, FlatnessReport};
pub use flatlimit::{flat_limit, verify_model, FlatLimit};
pub use support::tropical_support;
