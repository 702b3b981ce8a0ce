//! Lifts of Γ̄ to SL2(Z) as sign characters, their generators, and the
//! congruence test modulo `2N`.

mod action;
mod character;
mod classify;
mod witness;

pub use action::{st_word, word_matrix, Cocycle, LiftAction, Word};
pub use character::{
    classify_certificate, enumerate_lifts, is_congruence, lift_generators, lift_generators_with,
    signed_generators, Certificate, Classification, LiftContext, LiftDescriptor, SignCharacter,
    Transversal, ENUMERATION_LIMIT,
};
pub use classify::{
    classify_all, classify_all_with, classify_generator_set, CharacterRoute, ClassificationReport,
    Route,
};
pub use witness::{find_witness, propagate_from, propagate_witness, verify_witness, Witness};
