//! The three worked examples, bundled as instance documents.
//!
//! * `grigorchuk`: `A = ℤ₂×ℤ₂ = {e, b, c, d}`, `B = ℤ₂ = {e, a}`,
//!   `Ψ(0)(x, y) = y`, `Ψ(1)(x, y) = (y, x + y)`.
//! * `nonsimple-variant`: as above with `Ψ(1)(x, y) = (y, x)`.
//! * `z3-squared`: `A = ℤ₃×ℤ₃`, `B = X = ℤ₃`, `Ψ(0) = [[1,1],[0,1]]`,
//!   `Ψ(1) = [[1,0],[1,1]]` acting on column vectors, `Ψ(2)(x, y) = y`.
//!   Elements are declared in the order `a₀, a₂, a₁, a₃, a₄` followed by the
//!   inverses in the same order, with `a₁ = (1,0)`, `a₂ = (0,1)`,
//!   `a₃ = (1,1)`, `a₄ = (1,2)`.

use crate::document::load_str;
use crate::model::MultispinalInstance;

pub const GRIGORCHUK_JSON: &str = include_str!("../fixtures/grigorchuk.json");
pub const NONSIMPLE_VARIANT_JSON: &str = include_str!("../fixtures/nonsimple-variant.json");
pub const Z3_SQUARED_JSON: &str = include_str!("../fixtures/z3-squared.json");

pub fn grigorchuk() -> MultispinalInstance {
    load_str(GRIGORCHUK_JSON).expect("bundled fixture")
}

pub fn nonsimple_variant() -> MultispinalInstance {
    load_str(NONSIMPLE_VARIANT_JSON).expect("bundled fixture")
}

pub fn z3_squared() -> MultispinalInstance {
    load_str(Z3_SQUARED_JSON).expect("bundled fixture")
}

/// `(name, instance)` for every bundled fixture.
pub fn all() -> Vec<(&'static str, MultispinalInstance)> {
    vec![("grigorchuk", grigorchuk()), ("nonsimple-variant", nonsimple_variant()), ("z3-squared", z3_squared())]
}
