//! Shape-type inference for a small untyped functional language with
//! S-expressions, closures and pattern matching.
//!
//! A program is parsed ([`frontend`]), turned into a list of typing
//! constraints ([`infer`]), and the constraints are solved by a relational
//! search ([`solver`]) built on a small logic engine ([`engine`]).

pub mod driver;
pub mod engine;
pub mod frontend;
pub mod infer;
pub mod solver;
pub mod types;
