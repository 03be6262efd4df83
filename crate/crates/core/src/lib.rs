//! Finite cylindric-type algebras presented as atom structures, together with
//! the machinery to validate the RC/DC/SC axiom systems, to build relativized
//! set-algebra representations by playing a network game to saturation, and to
//! verify the resulting embeddings.
//!
//! The crate is organized around the pipeline
//!
//! ```text
//! unit file ──import──▶ AtomStructure ──validate──▶ game ──▶ Representation ──verify──▶ report
//! ```
//!
//! with [`transform`] providing the index-set combinatorics everything else
//! rests on.

pub mod algebra;
pub mod axioms;
pub mod game;
pub mod network;
pub mod represent;
pub mod transform;

use serde::{Deserialize, Serialize};

/// The axiom class an algebra is checked against and the closure discipline
/// its networks must obey.
///
/// `DcMinus` and `ScMinus` are the same as `Dc`/`Sc` with the infinite axiom
/// schema disabled; their games build modified networks (no zigzag condition).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgebraClass {
    Rc,
    Dc,
    Sc,
    DcMinus,
    ScMinus,
}

/// Closure demanded of a network's edge set (and of a concrete unit).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeClosure {
    /// No closure requirement.
    None,
    /// Closed under right composition with non-surjective transformations.
    Diagonalizable,
    /// Closed under right composition with every transformation.
    Permutable,
}

impl AlgebraClass {
    pub const ALL: [AlgebraClass; 5] = [
        AlgebraClass::Rc,
        AlgebraClass::Dc,
        AlgebraClass::Sc,
        AlgebraClass::DcMinus,
        AlgebraClass::ScMinus,
    ];

    /// Closure condition imposed on edge sets of networks for this class.
    pub fn edge_closure(self) -> EdgeClosure {
        match self {
            AlgebraClass::Rc => EdgeClosure::None,
            AlgebraClass::Dc | AlgebraClass::DcMinus => EdgeClosure::Diagonalizable,
            AlgebraClass::Sc | AlgebraClass::ScMinus => EdgeClosure::Permutable,
        }
    }

    /// Whether validation includes instances of the infinite axiom schema.
    pub fn includes_ax7(self) -> bool {
        matches!(self, AlgebraClass::Rc | AlgebraClass::Dc | AlgebraClass::Sc)
    }

    /// Whether games and checks use modified networks (condition (c') instead
    /// of zigzag connectivity).
    pub fn modified(self) -> bool {
        matches!(self, AlgebraClass::DcMinus | AlgebraClass::ScMinus)
    }

    pub fn name(self) -> &'static str {
        match self {
            AlgebraClass::Rc => "rc",
            AlgebraClass::Dc => "dc",
            AlgebraClass::Sc => "sc",
            AlgebraClass::DcMinus => "dc-minus",
            AlgebraClass::ScMinus => "sc-minus",
        }
    }

    pub fn parse(s: &str) -> Option<AlgebraClass> {
        match s {
            "rc" => Some(AlgebraClass::Rc),
            "dc" => Some(AlgebraClass::Dc),
            "sc" => Some(AlgebraClass::Sc),
            "dc-minus" => Some(AlgebraClass::DcMinus),
            "sc-minus" => Some(AlgebraClass::ScMinus),
            _ => None,
        }
    }
}

impl std::fmt::Display for AlgebraClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
