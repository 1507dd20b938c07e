//! Fixed problem instances shared by the benchmarks.

use freeplate_core::DomainSpec;

pub fn unit_square() -> DomainSpec {
    DomainSpec::rectangle(1.0, 1.0).expect("valid square")
}

pub fn unit_disk() -> DomainSpec {
    DomainSpec::disk(1.0).expect("valid disk")
}

/// Degrees swept by the assembly and eigensolver benchmarks.
pub const DEGREES: [usize; 3] = [8, 12, 16];
