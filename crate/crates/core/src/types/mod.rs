//! Types, constraints and type patterns, their engine encoding, and the
//! relations used by the solver (`unmu`, `subst_t`, `eq_t`).

mod encode;
mod parse;
mod pretty;
mod relations;
mod tags;
mod term;

pub use encode::{
    ctor, decode_constraint, decode_pattern, decode_type, encode_rigid, free_name, t_arr, t_arrow,
    t_int, t_mu, t_name, t_sexp, t_str, tag_term, DecodeError, Encoder, Rigid, VarSource,
};
pub mod functors {
    pub use super::encode::{
        CALL, CTOR, EQ, IND, MATCH, PARR, PAT, PSEXP, PSHAPE, PWILD, SEXP, TARR, TARROW, TINT, TMU,
        TNAME, TSEXP, TSTR,
    };
}
pub use parse::{parse_constraint, parse_type, parse_type_interning, TypeParser, TypeSyntaxError};
pub use pretty::{canonical_name, pretty_constraint, pretty_type, Namer, Printer};
pub use relations::{
    eq_c, eq_t, eq_ts, ground_equal, mu_name, occurs_hook_t, set_occurs_hook_t, subst_t,
    subst_term, unmu, with_unmu,
};
pub use tags::{TagId, TagTable};
pub use term::{
    free_vars_of, Arrow, AtomicConstraint, Ctor, ShapeKind, TypePattern, TypeSubst, TypeTerm,
};

/// Equality modulo μ-unfolding of two types whose names are all treated as
/// rigid. Binder names of distinct μ-types do not matter; names of free and
/// quantified variables do.
pub fn types_equivalent(a: &TypeTerm, b: &TypeTerm) -> bool {
    ground_equal(&encode_rigid(a), &encode_rigid(b))
}
