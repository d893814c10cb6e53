//! Finite groups given by tables, with subgroup and homomorphism search.

pub mod finite;
pub mod hom;

pub use finite::{
    all_sylow_subgroups, cyclic_subgroups, enumerate_subgroups_of, is_power_of, o_p, p_element_generated, p_part,
    p_prime_generated, quotient_group, sylow_subgroup, Elem, FiniteGroup, Group, Subgroup,
};
pub use hom::{injective_homs, GroupHom};
