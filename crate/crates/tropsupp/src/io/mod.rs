//! File formats: module text, JSON documents, SVG slices and DOT graphs.

pub mod json;
pub mod pl;
pub mod poset;
pub mod svg;
pub mod text;
