//! Presentations of Γ̄0(N) and Γ̄1(N): coset action, elliptic data, cusps and
//! Farey-symbol generators.

mod coset;
mod farey;

pub use coset::{
    build_coset_action, cusp_widths, elliptic_counts, free_rank, general_level, index_formula,
    CosetAction, Letter,
};
pub use farey::{
    farey_symbol, generators_from_symbol, FareySymbol, Generator, GeneratorSet, GeneratorType,
    SideLabel,
};
