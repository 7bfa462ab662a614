//! Shared fixtures for the criterion benches.

use terwilliger_core::groups::{build_group, GroupDescriptor};
use terwilliger_core::orbitals::{H1Action, Orbitals, DEFAULT_PAIR_BUDGET};
use terwilliger_core::scheme::{build_scheme, ClassScheme};

/// Class scheme of `S_n × C2`.
pub fn scheme(n: u32) -> ClassScheme {
    build_scheme(build_group(&GroupDescriptor::Symmetric(n)).expect("symmetric group"))
}

pub fn orbitals(s: &ClassScheme) -> Orbitals {
    let action = H1Action::new(&s.group, &s.classes);
    Orbitals::compute(&s.group, &s.classes, &action, DEFAULT_PAIR_BUDGET).expect("within budget")
}
