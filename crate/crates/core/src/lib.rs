//! Engine for affine-style structures carried by hom-sets from a fixed
//! dualizing object, over pluggable base categories (finite sets, finite
//! modules over Z/m, and graph-folded free groups).
//!
//! The crate is organized bottom-up:
//!
//! * [`words`] / [`stallings`] — free-group words and folded subgroup graphs;
//! * [`howell`] — canonical normal forms for matrices over Z/m;
//! * [`theory`] — operation signatures and T-algebras;
//! * [`instances`] — the three base-category plugins behind one trait;
//! * [`affine`] — structured spaces, initial/final structures, universal
//!   arrows and the explicit left adjoint;
//! * [`zariski`] — the quotient closure operator, its classifier and laws;
//! * [`completeness`] — separation/completeness classifiers and the copower
//!   splitting check.

pub mod error;
pub mod howell;
pub mod stallings;
pub mod theory;
pub mod words;

pub mod instances;

pub mod affine;
pub mod completeness;
pub mod zariski;

pub use error::{Error, Result};
pub use words::ReducedWord;
