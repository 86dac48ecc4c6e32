//! Exact q-series machinery, certified bound evaluation and multiprecision
//! zero counting for the partial theta function
//! `θ(q, z) = Σ_{j≥0} q^{j(j+1)/2} z^j`.
//!
//! The crate is `no_std` (it needs `alloc`). IO, report formats and the
//! command line live in the `theta-atlas` crate.
//!
//! * [`qseries`]: truncated power series in `q` with exact integer
//!   coefficients, the named series `U`, `U_{j,n}`, `V_{j,n}`, `S_r`,
//!   `Ũ_{j,n}` and the exact coefficient-domination checks.
//! * [`bounds`]: enclosures of `P_∞`, `U`, `R`, `T`, `M`, the tail split
//!   index `m` and the certified threshold `n₀(δ₀, δ)`.
//! * [`analytic`]: multiprecision evaluation of `θ`, `θ′`, `u` and
//!   `(q;q)_n`, argument-principle zero counting and Newton zero finding.
#![no_std]

extern crate alloc;

pub mod analytic;
pub mod bounds;
mod error;
pub mod interval;
pub mod mp;
pub mod qseries;

pub use error::{Error, Result};

/// Upper limit of a product or a sum that may run to infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extent {
    Finite(usize),
    Infinite,
}

impl Extent {
    /// Finite bound clipped to `cap`; the infinite marker maps to `cap`.
    pub fn clip(self, cap: usize) -> usize {
        match self {
            Extent::Finite(k) => k.min(cap),
            Extent::Infinite => cap,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Extent::Infinite)
    }
}

impl core::fmt::Display for Extent {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Extent::Finite(k) => write!(f, "{k}"),
            Extent::Infinite => f.write_str("inf"),
        }
    }
}
