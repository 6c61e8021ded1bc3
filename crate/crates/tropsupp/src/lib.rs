//! Exact polyhedral and Groebner machinery for tropical supports of module
//! quotients on toric varieties.

pub mod error;
pub mod flat;
pub mod lattice;
pub mod cone;
pub mod complex;
pub mod groebner;
pub mod io;
pub mod par;
pub mod pl;
pub mod supp;
