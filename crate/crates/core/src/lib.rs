//! Exact engine for congruences of Mahler-type power series.
//!
//! Given `F(q) = S(q) + R(q) F(q^m)` with rational `S` and `R`, this crate
//! derives, when it exists, a scheme `F_i(q) = E(q) + P(q) F_i(q^m) (mod m)`
//! for the `i`-th m-section of `F`, and evaluates its coefficients modulo `m`
//! in time polylogarithmic in the index. A brute-force oracle checks every
//! scheme against exact expansions.
//!
//! ```
//! use mahler_core::{derive_scheme, parse_ratfun, scheme_coeff, FunctionalEquation, RatFun};
//!
//! let r = parse_ratfun("1/(1-q)", None).unwrap();
//! let fe = FunctionalEquation::new(RatFun::zero(), r, 3, None).unwrap();
//! let scheme = derive_scheme(&fe, 0).unwrap().into_scheme().unwrap();
//! assert_eq!(scheme.p(), &[1, 2]);
//! assert_eq!(scheme_coeff(&scheme, 5), 0);
//! ```

pub mod derive;
pub mod error;
pub mod known;
pub mod modular;
pub mod msection;
pub mod oracle;
pub mod parser;
pub mod poly;
pub mod ratfun;
pub mod scan;
pub mod schemefile;

pub use derive::{
    derive_scheme, proper_split, reduce_ratfun_mod, section_fe, DerivedFE, Derivation,
    FunctionalEquation, NoMiracle, Provenance, Scheme,
};
pub use error::{Error, Result};
pub use known::{
    a002623, digit_product_prop_a, known_scheme, prop_a_poly, prop_b_scheme, prop_c_nes,
    KnownLabel, KnownScheme,
};
pub use modular::{
    ratfun_coeff_mod, scheme_coeff, scheme_coeff_block, DigitEvaluator, ModCoeffEvaluator,
    ModRatFun,
};
pub use msection::{denominator_norm, msect, msect_all, SectionSet};
pub use oracle::{
    expand_fe, expand_infinite_product, section_prefix, verify_scheme, SeriesPrefix,
    VerificationReport,
};
pub use parser::{parse_ratfun, render_ratfun, ExprText};
pub use poly::{Poly, Rat};
pub use ratfun::{ArithOp, RatFun};
pub use scan::{scan_grid, scheme_coeff_batch, Execution, ScanCell, ScanRequest, SectionSelect};
pub use schemefile::{load_scheme, save_scheme, SchemeFile};
