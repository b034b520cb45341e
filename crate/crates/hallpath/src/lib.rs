//! Exact computer algebra for the double Dyck path algebra DB_{q,t}, its
//! polynomial representation on the glued ladder V, elliptic-Hall-algebra
//! elements (e_m, f_m, psi, Y), a special-form word rewriter, and a
//! machine-verification harness for the defining relations and identities,
//! all over the exact field Q(q,t).

pub mod checker;
pub mod combinatorics;
pub mod eha;
pub mod polyrep;
pub mod qt;
pub mod rewriter;
pub mod word;

pub use qt::{PointEval, RatFunc, Scalar};
