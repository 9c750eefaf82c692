//! The Borel subgroup of GL_2(Q_p), its action on the tree, compactly
//! induced representations and the quotients by S_n(h, sigma).

pub mod chars;
pub mod checks;
pub mod group;
pub mod induced;
pub mod oracle;
pub mod reduce;
pub mod sym;

pub use chars::{InducedChar, SmoothChar};
pub use checks::{ssg_inclusion_check, theorem_d_check, theta_pairing};
pub use group::{canonicalize, BorelGen, BorelMat, BorelWord, Vertex};
pub use induced::{
    existfix_average, hecke_t, hecke_t_minus, hecke_t_plus, s_generator, twist_by_det, w_ln, InducedElement,
};
pub use oracle::{Certificate, SpanOracle, Window};
pub use reduce::{reduce_mod_s, replay, validate, AuditStep, Move, ReduceConfig, Reducer, Reduction, Stage};
pub use sym::{enghecke_generators, formule_check, hecke_t_sym, HeckeGenerator, SymInducedElement};
