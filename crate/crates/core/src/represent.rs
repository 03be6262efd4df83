//! From plays to representations and back: packaging a final network as a
//! relativized set algebra with its embedding table, verifying that the
//! embedding preserves the operations, and importing concrete units as atom
//! structures (the soundness direction used for round-trip testing).

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AtomId, AtomStructure, Element, StructureError};
use crate::game::{run_to_saturation, GameError, GameOptions, PlayStatus};
use crate::network::{Edge, NodeId, PreNetwork};
use crate::transform::{Transformation, TransformationKind};
use crate::{AlgebraClass, EdgeClosure};

#[derive(Debug, Error)]
pub enum UnitError {
    #[error("unit must be nonempty")]
    Empty,
    #[error("sequence {seq:?} has length {got}, expected {expected}")]
    SequenceArity {
        seq: Vec<usize>,
        got: usize,
        expected: usize,
    },
    #[error("sequence {seq:?} refers to base element {entry} but the base has {base} elements")]
    EntryOutOfRange {
        seq: Vec<usize>,
        entry: usize,
        base: usize,
    },
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error(
        "unit is not {required} closed: {seq:?} composed with {tau} gives {missing:?}, which is absent"
    )]
    NotClosed {
        required: &'static str,
        seq: Vec<usize>,
        tau: String,
        missing: Vec<usize>,
    },
    #[error("structure: {0}")]
    Structure(#[from] StructureError),
}

/// A concrete set of sequences over a named base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcreteUnit {
    pub dimension: usize,
    pub base: Vec<String>,
    pub sequences: BTreeSet<Vec<usize>>,
}

impl ConcreteUnit {
    pub fn new(
        dimension: usize,
        base: Vec<String>,
        sequences: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<Self, UnitError> {
        if dimension < 2 {
            return Err(UnitError::DimensionTooSmall(dimension));
        }
        let sequences: BTreeSet<Vec<usize>> = sequences.into_iter().collect();
        if sequences.is_empty() {
            return Err(UnitError::Empty);
        }
        for seq in &sequences {
            if seq.len() != dimension {
                return Err(UnitError::SequenceArity {
                    seq: seq.clone(),
                    got: seq.len(),
                    expected: dimension,
                });
            }
            for &entry in seq {
                if entry >= base.len() {
                    return Err(UnitError::EntryOutOfRange {
                        seq: seq.clone(),
                        entry,
                        base: base.len(),
                    });
                }
            }
        }
        Ok(ConcreteUnit {
            dimension,
            base,
            sequences,
        })
    }

    pub fn sequence_name(&self, seq: &[usize]) -> String {
        let parts: Vec<&str> = seq.iter().map(|&k| self.base[k].as_str()).collect();
        format!("({})", parts.join(","))
    }
}

/// Which closure [`close_unit`] takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitClosure {
    /// Close under right composition with non-surjective transformations.
    Diagonalizable,
    /// Close under right composition with all transformations (this implies
    /// diagonalizability).
    Permutable,
}

/// Least superset of `unit` closed under the requested composition family.
pub fn close_unit(unit: &ConcreteUnit, kind: UnitClosure) -> ConcreteUnit {
    let tau_kind = match kind {
        UnitClosure::Diagonalizable => TransformationKind::NonSurjective,
        UnitClosure::Permutable => TransformationKind::All,
    };
    let taus = Transformation::enumerate(unit.dimension, tau_kind).expect("dimension checked");
    let mut sequences = unit.sequences.clone();
    let mut frontier: Vec<Vec<usize>> = sequences.iter().cloned().collect();
    while let Some(seq) = frontier.pop() {
        for tau in &taus {
            let image = tau.apply_to(&seq).expect("arity matches");
            if sequences.insert(image.clone()) {
                frontier.push(image);
            }
        }
    }
    ConcreteUnit {
        dimension: unit.dimension,
        base: unit.base.clone(),
        sequences,
    }
}

fn closure_violation(unit: &ConcreteUnit, closure: EdgeClosure) -> Option<UnitError> {
    let (kind, required) = match closure {
        EdgeClosure::None => return None,
        EdgeClosure::Diagonalizable => (TransformationKind::NonSurjective, "diagonalizable"),
        EdgeClosure::Permutable => (TransformationKind::All, "permutable"),
    };
    let taus = Transformation::enumerate(unit.dimension, kind).expect("dimension checked");
    for seq in &unit.sequences {
        for tau in &taus {
            let image = tau.apply_to(seq).expect("arity matches");
            if !unit.sequences.contains(&image) {
                return Some(UnitError::NotClosed {
                    required,
                    seq: seq.clone(),
                    tau: tau.to_string(),
                    missing: image,
                });
            }
        }
    }
    None
}

/// The atom structure of the full set algebra over a unit, with the sequence
/// each atom came from.
#[derive(Debug, Clone)]
pub struct ImportedUnit {
    pub algebra: AtomStructure,
    /// Sequences in atom order (lexicographic).
    pub atom_sequences: Vec<Vec<usize>>,
    pub atom_names: Vec<String>,
}

impl ImportedUnit {
    pub fn atom_of(&self, seq: &[usize]) -> Option<AtomId> {
        self.atom_sequences
            .binary_search_by(|s| s.as_slice().cmp(seq))
            .ok()
    }
}

/// Evaluates the set-algebra operations on a unit to produce its atom
/// structure: atoms are the sequences, cylinder images group sequences that
/// agree away from one index, diagonal atoms are the sequences with a
/// repeated entry.
pub fn import_unit(
    unit: &ConcreteUnit,
    klass_expect: Option<AlgebraClass>,
) -> Result<ImportedUnit, UnitError> {
    if let Some(klass) = klass_expect {
        if let Some(err) = closure_violation(unit, klass.edge_closure()) {
            return Err(err);
        }
    }
    let n = unit.dimension;
    let atom_sequences: Vec<Vec<usize>> = unit.sequences.iter().cloned().collect();
    let count = atom_sequences.len();

    let mut cyl_images = vec![vec![Element::empty(count); count]; n];
    for (i, images) in cyl_images.iter_mut().enumerate() {
        // group by the sequence with index i blanked out
        let mut classes: HashMap<Vec<usize>, Vec<AtomId>> = HashMap::new();
        for (idx, seq) in atom_sequences.iter().enumerate() {
            let mut key = seq.clone();
            key[i] = usize::MAX;
            classes.entry(key).or_default().push(idx);
        }
        for members in classes.values() {
            let class = Element::from_atoms(count, members.iter().copied());
            for &idx in members {
                images[idx] = class.clone();
            }
        }
    }
    let mut diag_atoms = vec![vec![Element::empty(count); n]; n];
    for (i, row) in diag_atoms.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = Element::from_atoms(
                count,
                atom_sequences
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| s[i] == s[j])
                    .map(|(idx, _)| idx),
            );
        }
    }
    let algebra = AtomStructure::new(n, count, cyl_images, diag_atoms)?;
    let atom_names = atom_sequences
        .iter()
        .map(|s| unit.sequence_name(s))
        .collect();
    Ok(ImportedUnit {
        algebra,
        atom_sequences,
        atom_names,
    })
}

/// A relativized set algebra extracted from a play, together with the
/// labeling that defines the embedding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    pub dimension: usize,
    pub base: Vec<NodeId>,
    pub unit: Vec<Edge>,
    /// Atom labeling the corresponding entry of `unit`.
    pub labels: Vec<AtomId>,
    pub status: PlayStatus,
}

impl Representation {
    pub fn from_network(network: &PreNetwork, status: PlayStatus) -> Representation {
        let unit: Vec<Edge> = network.edges_in_order().cloned().collect();
        let labels = unit
            .iter()
            .map(|e| network.label(e).expect("listed edge"))
            .collect();
        Representation {
            dimension: network.arity(),
            base: network.nodes().iter().copied().collect(),
            unit,
            labels,
            status,
        }
    }

    pub fn is_saturated(&self) -> bool {
        self.status == PlayStatus::Saturated
    }

    /// The embedding: the set of unit sequences labeled by an atom of `x`.
    pub fn image(&self, x: &Element) -> BTreeSet<Edge> {
        self.unit
            .iter()
            .zip(&self.labels)
            .filter(|(_, &label)| x.contains(label))
            .map(|(e, _)| e.clone())
            .collect()
    }

    /// `C_i` of an edge set, relativized to the unit.
    pub fn cylindrify_edges(&self, i: usize, xs: &BTreeSet<Edge>) -> BTreeSet<Edge> {
        let mut keys: BTreeSet<Edge> = BTreeSet::new();
        for e in xs {
            let mut key = e.clone();
            key[i] = NodeId::MAX;
            keys.insert(key);
        }
        self.unit
            .iter()
            .filter(|e| {
                let mut key = (**e).clone();
                key[i] = NodeId::MAX;
                keys.contains(&key)
            })
            .cloned()
            .collect()
    }

    /// `D_ij` relativized to the unit.
    pub fn diagonal_edges(&self, i: usize, j: usize) -> BTreeSet<Edge> {
        self.unit.iter().filter(|e| e[i] == e[j]).cloned().collect()
    }
}

/// Builds a representation by running the game to saturation (or to the
/// limits) and packaging the final network.
pub fn build_representation(
    algebra: &AtomStructure,
    klass: AlgebraClass,
    opts: &GameOptions,
) -> Result<Representation, GameError> {
    let outcome = run_to_saturation(algebra, klass, opts)?;
    Ok(Representation::from_network(
        &outcome.network,
        outcome.status,
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct EmbeddingCheck {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EmbeddingReport {
    pub status: String,
    pub checks: Vec<EmbeddingCheck>,
    pub pass: bool,
}

impl EmbeddingReport {
    pub fn failing(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect()
    }
}

fn push_check(out: &mut Vec<EmbeddingCheck>, name: String, pass: bool, detail: Option<String>) {
    out.push(EmbeddingCheck { name, pass, detail });
}

/// Verifies that the labeling of a representation defines an embedding of the
/// algebra into the full set algebra over its unit: every atom is realized,
/// atom images partition the unit, cylindrifications and diagonals are
/// preserved, and the Boolean structure is preserved on sampled elements.
pub fn verify_embedding(algebra: &AtomStructure, rep: &Representation) -> EmbeddingReport {
    let mut checks = Vec::new();
    let n = algebra.dimension();

    // injectivity: every atom labels at least one unit sequence
    let mut seen = vec![0usize; algebra.atom_count()];
    for &label in &rep.labels {
        if label < seen.len() {
            seen[label] += 1;
        }
    }
    for atom in algebra.atoms() {
        let pass = seen[atom] > 0;
        push_check(
            &mut checks,
            format!("injectivity: atom {atom} realized"),
            pass,
            (!pass).then(|| "no unit sequence carries this atom".to_string()),
        );
    }

    // atom images partition the unit
    let total: usize = seen.iter().sum();
    push_check(
        &mut checks,
        "atom images cover the unit".to_string(),
        total == rep.unit.len(),
        (total != rep.unit.len()).then(|| format!("{total} labeled of {}", rep.unit.len())),
    );
    {
        let mut disjoint = true;
        let mut detail = None;
        let mut by_edge: BTreeMap<&Edge, usize> = BTreeMap::new();
        for e in &rep.unit {
            *by_edge.entry(e).or_default() += 1;
        }
        if let Some((e, _)) = by_edge.iter().find(|(_, &c)| c > 1) {
            disjoint = false;
            detail = Some(format!("unit sequence {e:?} listed more than once"));
        }
        push_check(
            &mut checks,
            "atom images are disjoint".to_string(),
            disjoint,
            detail,
        );
    }

    // cylindrifications: image(c_i {a}) = C_i image({a})
    for atom in algebra.atoms() {
        let single = algebra.atom_element(atom);
        let image_atom = rep.image(&single);
        for i in 0..n {
            let lhs = rep.image(&algebra.cylindrify(i, &single));
            let rhs = rep.cylindrify_edges(i, &image_atom);
            let pass = lhs == rhs;
            let detail = (!pass).then(|| {
                let missing: Vec<&Edge> = lhs.symmetric_difference(&rhs).take(3).collect();
                format!("differs at {missing:?}")
            });
            push_check(
                &mut checks,
                format!("cylinder preservation: atom {atom}, index {i}"),
                pass,
                detail,
            );
        }
    }

    // diagonals: image(d_ij) = D_ij
    for i in 0..n {
        for j in 0..n {
            let lhs = rep.image(algebra.diag(i, j));
            let rhs = rep.diagonal_edges(i, j);
            let pass = lhs == rhs;
            let detail = (!pass).then(|| {
                let missing: Vec<&Edge> = lhs.symmetric_difference(&rhs).take(3).collect();
                format!("differs at {missing:?}")
            });
            push_check(
                &mut checks,
                format!("diagonal preservation: d_{i}{j}"),
                pass,
                detail,
            );
        }
    }

    // Boolean preservation on sampled elements (structural, spot-checked)
    let mut rng = ChaCha8Rng::seed_from_u64(0x43594c52);
    let count = algebra.atom_count();
    let mut boolean_ok = true;
    let mut boolean_detail = None;
    let unit_set: BTreeSet<Edge> = rep.unit.iter().cloned().collect();
    for _ in 0..20 {
        let x = Element::from_atoms(count, (0..count).filter(|_| rng.gen_bool(0.5)));
        let y = Element::from_atoms(count, (0..count).filter(|_| rng.gen_bool(0.5)));
        let ux = rep.image(&x);
        let uy = rep.image(&y);
        let join_ok = rep.image(&x.union(&y)) == ux.union(&uy).cloned().collect();
        let meet_ok = rep.image(&x.intersect(&y)) == ux.intersection(&uy).cloned().collect();
        let compl_ok = rep.image(&x.complement()) == unit_set.difference(&ux).cloned().collect();
        if !(join_ok && meet_ok && compl_ok) {
            boolean_ok = false;
            boolean_detail = Some(format!("fails on sampled elements {x:?}, {y:?}"));
            break;
        }
    }
    push_check(
        &mut checks,
        "boolean preservation (sampled)".to_string(),
        boolean_ok,
        boolean_detail,
    );

    let pass = checks.iter().all(|c| c.pass);
    EmbeddingReport {
        status: match rep.status {
            PlayStatus::Saturated => "saturated".to_string(),
            PlayStatus::Bounded => "bounded".to_string(),
        },
        checks,
        pass,
    }
}

/// On-disk form of a unit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UnitDoc {
    pub n: usize,
    pub base: Vec<String>,
    pub sequences: Vec<Vec<usize>>,
}

impl UnitDoc {
    pub fn from_unit(u: &ConcreteUnit) -> UnitDoc {
        UnitDoc {
            n: u.dimension,
            base: u.base.clone(),
            sequences: u.sequences.iter().cloned().collect(),
        }
    }

    pub fn to_unit(&self) -> Result<ConcreteUnit, UnitError> {
        ConcreteUnit::new(self.n, self.base.clone(), self.sequences.iter().cloned())
    }
}

/// On-disk form of a representation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepresentationDoc {
    pub n: usize,
    pub base: Vec<NodeId>,
    pub unit: Vec<Edge>,
    pub labels: Vec<AtomId>,
    pub status: String,
}

#[derive(Debug, Error)]
pub enum RepresentationDocError {
    #[error("status must be \"saturated\" or \"bounded\", got {0:?}")]
    BadStatus(String),
    #[error("unit and labels have different lengths ({unit} vs {labels})")]
    LengthMismatch { unit: usize, labels: usize },
    #[error("unit sequence {seq:?} has length {got}, expected {expected}")]
    SequenceArity {
        seq: Edge,
        got: usize,
        expected: usize,
    },
    #[error("node id {0} is reserved")]
    ReservedNode(NodeId),
}

impl RepresentationDoc {
    pub fn from_representation(r: &Representation) -> RepresentationDoc {
        RepresentationDoc {
            n: r.dimension,
            base: r.base.clone(),
            unit: r.unit.clone(),
            labels: r.labels.clone(),
            status: match r.status {
                PlayStatus::Saturated => "saturated".into(),
                PlayStatus::Bounded => "bounded".into(),
            },
        }
    }

    pub fn to_representation(&self) -> Result<Representation, RepresentationDocError> {
        let status = match self.status.as_str() {
            "saturated" => PlayStatus::Saturated,
            "bounded" => PlayStatus::Bounded,
            other => return Err(RepresentationDocError::BadStatus(other.to_string())),
        };
        if self.unit.len() != self.labels.len() {
            return Err(RepresentationDocError::LengthMismatch {
                unit: self.unit.len(),
                labels: self.labels.len(),
            });
        }
        for seq in &self.unit {
            if seq.len() != self.n {
                return Err(RepresentationDocError::SequenceArity {
                    seq: seq.clone(),
                    got: seq.len(),
                    expected: self.n,
                });
            }
        }
        let mut base: BTreeSet<NodeId> = self.base.iter().copied().collect();
        for seq in &self.unit {
            base.extend(seq.iter().copied());
        }
        // NodeId::MAX is the mask sentinel used by the edge indexes
        if base.contains(&NodeId::MAX) {
            return Err(RepresentationDocError::ReservedNode(NodeId::MAX));
        }
        Ok(Representation {
            dimension: self.n,
            base: base.into_iter().collect(),
            unit: self.unit.clone(),
            labels: self.labels.clone(),
            status,
        })
    }
}
