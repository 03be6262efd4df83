//! Finite atomic cylindric-type algebras presented by their atom structure:
//! per-atom cylinder images and per-index-pair diagonal atom sets.
//!
//! Elements of such an algebra are just sets of atoms, so the Boolean
//! operations are set operations and the operators are determined by their
//! action on atoms. Wellformedness (the cylinder images partition the atoms,
//! `d_ii` is everything) is a check rather than a construction invariant, so
//! that deliberately broken structures remain expressible for negative tests.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::transform::Transformation;

pub type AtomId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("cylinder image table has wrong shape at index {index}")]
    CylShape { index: usize },
    #[error("diagonal table has wrong shape at ({i},{j})")]
    DiagShape { i: usize, j: usize },
    #[error("element universe {got} does not match atom count {expected}")]
    UniverseMismatch { got: usize, expected: usize },
    #[error("index {0} out of range for dimension {1}")]
    IndexOutOfRange(usize, usize),
    #[error("atom {0} out of range")]
    AtomOutOfRange(AtomId),
    #[error("substitution of atom {atom} at ({i},{j}) is not an atom: {found:?}")]
    SubstitutionNotAtomic {
        i: usize,
        j: usize,
        atom: AtomId,
        found: Vec<AtomId>,
    },
}

/// A set of atoms of a fixed finite algebra, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element {
    universe: usize,
    words: Vec<u64>,
}

impl Element {
    fn word_count(universe: usize) -> usize {
        universe.div_ceil(64).max(1)
    }

    pub fn empty(universe: usize) -> Self {
        Element {
            universe,
            words: vec![0; Self::word_count(universe)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut e = Element::empty(universe);
        for a in 0..universe {
            e.insert(a);
        }
        e
    }

    pub fn singleton(universe: usize, atom: AtomId) -> Self {
        let mut e = Element::empty(universe);
        e.insert(atom);
        e
    }

    pub fn from_atoms<I: IntoIterator<Item = AtomId>>(universe: usize, atoms: I) -> Self {
        let mut e = Element::empty(universe);
        for a in atoms {
            e.insert(a);
        }
        e
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, atom: AtomId) {
        assert!(
            atom < self.universe,
            "atom {atom} out of range {}",
            self.universe
        );
        self.words[atom / 64] |= 1 << (atom % 64);
    }

    pub fn remove(&mut self, atom: AtomId) {
        assert!(atom < self.universe);
        self.words[atom / 64] &= !(1 << (atom % 64));
    }

    pub fn contains(&self, atom: AtomId) -> bool {
        atom < self.universe && self.words[atom / 64] & (1 << (atom % 64)) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn zip(&self, other: &Element, op: impl Fn(u64, u64) -> u64) -> Element {
        assert_eq!(self.universe, other.universe, "element universe mismatch");
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| op(a, b))
            .collect();
        Element {
            universe: self.universe,
            words,
        }
    }

    pub fn union(&self, other: &Element) -> Element {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersect(&self, other: &Element) -> Element {
        self.zip(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Element) -> Element {
        self.zip(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Element {
        Element::full(self.universe).difference(self)
    }

    pub fn is_subset_of(&self, other: &Element) -> bool {
        assert_eq!(self.universe, other.universe, "element universe mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .all(|(&a, &b)| a & !b == 0)
    }

    pub fn union_with(&mut self, other: &Element) {
        assert_eq!(self.universe, other.universe, "element universe mismatch");
        for (a, &b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    pub fn first(&self) -> Option<AtomId> {
        self.iter().next()
    }
}

impl std::fmt::Debug for Element {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (k, a) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

/// A violation found by [`AtomStructure::wellformed`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoAtoms,
    /// `atom` is not below its own cylinder image at `index`.
    CylNotReflexive {
        index: usize,
        atom: AtomId,
    },
    /// `other` lies in `atom`'s cylinder image at `index` but their images differ.
    CylNotPartition {
        index: usize,
        atom: AtomId,
        other: AtomId,
    },
    /// `d_ii` does not contain `atom`.
    DiagIdentityNotFull {
        index: usize,
        atom: AtomId,
    },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NoAtoms => write!(f, "structure has no atoms"),
            Violation::CylNotReflexive { index, atom } => {
                write!(f, "atom {atom} not in its own cylinder image at index {index}")
            }
            Violation::CylNotPartition { index, atom, other } => write!(
                f,
                "atom {other} is in the cylinder image of {atom} at index {index} but their images differ"
            ),
            Violation::DiagIdentityNotFull { index, atom } => {
                write!(f, "atom {atom} missing from d_{index}{index}")
            }
        }
    }
}

/// A finite atomic algebra given by the action of the cylinder and diagonal
/// operations on atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomStructure {
    dimension: usize,
    atom_count: usize,
    /// `cyl_images[i][a]` = atoms below `c_i {a}`.
    cyl_images: Vec<Vec<Element>>,
    /// `diag_atoms[i][j]` = atoms below `d_ij`.
    diag_atoms: Vec<Vec<Element>>,
}

impl AtomStructure {
    pub fn new(
        dimension: usize,
        atom_count: usize,
        cyl_images: Vec<Vec<Element>>,
        diag_atoms: Vec<Vec<Element>>,
    ) -> Result<Self, StructureError> {
        if dimension < 2 {
            return Err(StructureError::DimensionTooSmall(dimension));
        }
        if cyl_images.len() != dimension {
            return Err(StructureError::CylShape {
                index: cyl_images.len(),
            });
        }
        for (i, per_atom) in cyl_images.iter().enumerate() {
            if per_atom.len() != atom_count {
                return Err(StructureError::CylShape { index: i });
            }
            for e in per_atom {
                if e.universe() != atom_count {
                    return Err(StructureError::UniverseMismatch {
                        got: e.universe(),
                        expected: atom_count,
                    });
                }
            }
        }
        if diag_atoms.len() != dimension {
            return Err(StructureError::DiagShape {
                i: diag_atoms.len(),
                j: 0,
            });
        }
        for (i, row) in diag_atoms.iter().enumerate() {
            if row.len() != dimension {
                return Err(StructureError::DiagShape { i, j: row.len() });
            }
            for (j, e) in row.iter().enumerate() {
                if e.universe() != atom_count {
                    return Err(StructureError::DiagShape { i, j });
                }
            }
        }
        Ok(AtomStructure {
            dimension,
            atom_count,
            cyl_images,
            diag_atoms,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    pub fn atoms(&self) -> impl Iterator<Item = AtomId> {
        0..self.atom_count
    }

    pub fn cyl_image(&self, i: usize, a: AtomId) -> &Element {
        &self.cyl_images[i][a]
    }

    pub fn diag(&self, i: usize, j: usize) -> &Element {
        &self.diag_atoms[i][j]
    }

    pub fn empty_element(&self) -> Element {
        Element::empty(self.atom_count)
    }

    pub fn full_element(&self) -> Element {
        Element::full(self.atom_count)
    }

    pub fn atom_element(&self, a: AtomId) -> Element {
        Element::singleton(self.atom_count, a)
    }

    /// Collects every violation of the atom-structure invariants. An empty
    /// result means the structure is wellformed.
    pub fn wellformed(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.atom_count == 0 {
            out.push(Violation::NoAtoms);
        }
        for i in 0..self.dimension {
            for a in 0..self.atom_count {
                if !self.cyl_images[i][a].contains(a) {
                    out.push(Violation::CylNotReflexive { index: i, atom: a });
                }
                for b in self.cyl_images[i][a].iter() {
                    if self.cyl_images[i][b] != self.cyl_images[i][a] {
                        out.push(Violation::CylNotPartition {
                            index: i,
                            atom: a,
                            other: b,
                        });
                    }
                }
            }
        }
        for i in 0..self.dimension {
            for a in 0..self.atom_count {
                if !self.diag_atoms[i][i].contains(a) {
                    out.push(Violation::DiagIdentityNotFull { index: i, atom: a });
                }
            }
        }
        out
    }

    pub fn is_wellformed(&self) -> bool {
        self.wellformed().is_empty()
    }

    fn check_index(&self, i: usize) -> Result<(), StructureError> {
        if i < self.dimension {
            Ok(())
        } else {
            Err(StructureError::IndexOutOfRange(i, self.dimension))
        }
    }

    /// `c_i X`: union of the cylinder images of the atoms of `X`. Normal and
    /// completely additive by construction.
    pub fn cylindrify(&self, i: usize, x: &Element) -> Element {
        let mut out = self.empty_element();
        for a in x.iter() {
            out.union_with(&self.cyl_images[i][a]);
        }
        out
    }

    /// `s^i_j X`: `X` when `i = j`, otherwise `c_i (X · d_ij)`.
    pub fn substitute(&self, i: usize, j: usize, x: &Element) -> Element {
        if i == j {
            return x.clone();
        }
        self.cylindrify(i, &x.intersect(&self.diag_atoms[i][j]))
    }

    /// The atom below `c_i {a} · d_ij`, if any. On a structure satisfying the
    /// axioms this intersection is a singleton or empty; two or more atoms are
    /// reported as an error because they certify an axiom violation.
    pub fn substitute_atom(
        &self,
        i: usize,
        j: usize,
        a: AtomId,
    ) -> Result<Option<AtomId>, StructureError> {
        self.check_index(i)?;
        self.check_index(j)?;
        if a >= self.atom_count {
            return Err(StructureError::AtomOutOfRange(a));
        }
        if i == j {
            return Ok(Some(a));
        }
        let meet = self.cyl_images[i][a].intersect(&self.diag_atoms[i][j]);
        match meet.len() {
            0 => Ok(None),
            1 => Ok(meet.first()),
            _ => Err(StructureError::SubstitutionNotAtomic {
                i,
                j,
                atom: a,
                found: meet.iter().collect(),
            }),
        }
    }

    /// The action of a non-surjective transformation on an atom: the
    /// replacement decomposition of `tau` folded through
    /// [`AtomStructure::substitute_atom`], first factor applied first.
    pub fn transform_atom(
        &self,
        tau: &Transformation,
        a: AtomId,
    ) -> Result<Option<AtomId>, StructureError> {
        let steps = tau
            .replacement_decomposition()
            .expect("transform_atom requires a non-surjective transformation");
        let mut cur = a;
        for (i, j) in steps {
            match self.substitute_atom(i, j, cur)? {
                Some(next) => cur = next,
                None => return Ok(None),
            }
        }
        Ok(Some(cur))
    }

    /// The element whose atoms are the admissible transposition labels:
    /// `s^i_j c_j X · s^j_i c_i X · Π_{k ≠ i,j} s^k_i s^i_j s^j_k c_k X`,
    /// with the empty product read as the unit. Returns `X` when `i = j`.
    pub fn transposition_image(&self, i: usize, j: usize, x: &Element) -> Element {
        if i == j {
            return x.clone();
        }
        let mut out = self.substitute(i, j, &self.cylindrify(j, x));
        out = out.intersect(&self.substitute(j, i, &self.cylindrify(i, x)));
        for k in 0..self.dimension {
            if k == i || k == j {
                continue;
            }
            let term = self.substitute(
                k,
                i,
                &self.substitute(i, j, &self.substitute(j, k, &self.cylindrify(k, x))),
            );
            out = out.intersect(&term);
        }
        out
    }
}

/// On-disk form of an algebra: atom names are presentation only, indices are
/// canonical.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub n: usize,
    pub atoms: Vec<String>,
    /// `cyl[i][a]` lists the atoms below `c_i {a}`.
    pub cyl: Vec<Vec<Vec<AtomId>>>,
    /// Keyed by `"i,j"`; each entry lists the atoms below `d_ij`. All pairs
    /// must be present, including `i = j`.
    pub diag: BTreeMap<String, Vec<AtomId>>,
}

#[derive(Debug, Error)]
pub enum AlgebraDocError {
    #[error("invalid algebra: {0}")]
    Structure(#[from] StructureError),
    #[error("atom index {atom} out of range (atom count {count}) in {place}")]
    AtomIndex {
        atom: AtomId,
        count: usize,
        place: String,
    },
    #[error("diag table missing key \"{0}\"")]
    MissingDiag(String),
    #[error("diag key \"{0}\" is not of the form \"i,j\" with indices below n")]
    BadDiagKey(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl AlgebraDoc {
    pub fn from_structure(a: &AtomStructure, atom_names: &[String]) -> AlgebraDoc {
        let atoms = if atom_names.len() == a.atom_count() {
            atom_names.to_vec()
        } else {
            (0..a.atom_count()).map(|k| format!("a{k}")).collect()
        };
        let cyl = (0..a.dimension())
            .map(|i| {
                (0..a.atom_count())
                    .map(|at| a.cyl_image(i, at).iter().collect())
                    .collect()
            })
            .collect();
        let mut diag = BTreeMap::new();
        for i in 0..a.dimension() {
            for j in 0..a.dimension() {
                diag.insert(format!("{i},{j}"), a.diag(i, j).iter().collect());
            }
        }
        AlgebraDoc {
            n: a.dimension(),
            atoms,
            cyl,
            diag,
        }
    }

    pub fn to_structure(&self) -> Result<AtomStructure, AlgebraDocError> {
        let count = self.atoms.len();
        let check_atom = |atom: AtomId, place: String| -> Result<AtomId, AlgebraDocError> {
            if atom < count {
                Ok(atom)
            } else {
                Err(AlgebraDocError::AtomIndex { atom, count, place })
            }
        };
        if self.cyl.len() != self.n {
            return Err(StructureError::CylShape {
                index: self.cyl.len(),
            }
            .into());
        }
        let mut cyl_images = Vec::with_capacity(self.n);
        for (i, per_atom) in self.cyl.iter().enumerate() {
            if per_atom.len() != count {
                return Err(StructureError::CylShape { index: i }.into());
            }
            let mut row = Vec::with_capacity(count);
            for (a, atoms) in per_atom.iter().enumerate() {
                let mut e = Element::empty(count);
                for &b in atoms {
                    e.insert(check_atom(b, format!("cyl[{i}][{a}]"))?);
                }
                row.push(e);
            }
            cyl_images.push(row);
        }
        let mut diag_atoms = vec![vec![Element::empty(count); self.n]; self.n];
        for (i, row) in diag_atoms.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let key = format!("{i},{j}");
                let atoms = self
                    .diag
                    .get(&key)
                    .ok_or_else(|| AlgebraDocError::MissingDiag(key.clone()))?;
                let mut e = Element::empty(count);
                for &b in atoms {
                    e.insert(check_atom(b, format!("diag[{key}]"))?);
                }
                *cell = e;
            }
        }
        for key in self.diag.keys() {
            let ok = key
                .split_once(',')
                .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)))
                .map(|(a, b)| a < self.n && b < self.n)
                .unwrap_or(false);
            if !ok {
                return Err(AlgebraDocError::BadDiagKey(key.clone()));
            }
        }
        Ok(AtomStructure::new(self.n, count, cyl_images, diag_atoms)?)
    }
}


#[cfg(test)]
mod tests {
    use super::test_fixtures::*;
    use super::*;

    fn elem(a: &AtomStructure, atoms: &[AtomId]) -> Element {
        Element::from_atoms(a.atom_count(), atoms.iter().copied())
    }

    #[test]
    fn element_ops() {
        let x = Element::from_atoms(70, [0, 3, 69]);
        let y = Element::from_atoms(70, [3, 5]);
        assert_eq!(x.union(&y).iter().collect::<Vec<_>>(), vec![0, 3, 5, 69]);
        assert_eq!(x.intersect(&y).iter().collect::<Vec<_>>(), vec![3]);
        assert_eq!(x.difference(&y).iter().collect::<Vec<_>>(), vec![0, 69]);
        assert!(y.complement().contains(69));
        assert!(!y.complement().contains(5));
        assert_eq!(x.len(), 3);
        assert!(Element::empty(70).is_subset_of(&x));
        assert!(!x.is_subset_of(&y));
        assert_eq!(x.first(), Some(0));
        assert_eq!(Element::full(70).len(), 70);
    }

    #[test]
    fn full_square_is_wellformed() {
        assert!(full_square().wellformed().is_empty());
    }

    #[test]
    fn broken_reflexivity_is_reported() {
        let a = full_square();
        let mut cyl: Vec<Vec<Element>> = (0..2)
            .map(|i| (0..4).map(|at| a.cyl_image(i, at).clone()).collect())
            .collect();
        let mut img = cyl[0][SQ00].clone();
        img.remove(SQ00);
        cyl[0][SQ00] = img;
        let diag: Vec<Vec<Element>> = (0..2)
            .map(|i| (0..2).map(|j| a.diag(i, j).clone()).collect())
            .collect();
        let broken = AtomStructure::new(2, 4, cyl, diag).unwrap();
        let violations = broken.wellformed();
        assert!(violations.iter().any(|v| matches!(
            v,
            Violation::CylNotReflexive {
                index: 0,
                atom: SQ00
            }
        )));
    }

    #[test]
    fn empty_structure_is_a_violation() {
        let a = AtomStructure::new(
            2,
            0,
            vec![vec![], vec![]],
            vec![
                vec![Element::empty(0), Element::empty(0)],
                vec![Element::empty(0), Element::empty(0)],
            ],
        )
        .unwrap();
        assert!(a.wellformed().contains(&Violation::NoAtoms));
    }

    #[test]
    fn cylindrification_on_full_square() {
        let a = full_square();
        assert_eq!(a.cylindrify(0, &elem(&a, &[SQ01])), elem(&a, &[SQ01, SQ11]));
        assert!(a.cylindrify(0, &a.empty_element()).is_empty());
        assert_eq!(a.cylindrify(1, &a.full_element()), a.full_element());
    }

    #[test]
    fn cylindrification_is_additive() {
        let a = full_square();
        for xs in 0..16u32 {
            for ys in 0..16u32 {
                let x = Element::from_atoms(4, (0..4).filter(|k| xs & (1 << k) != 0));
                let y = Element::from_atoms(4, (0..4).filter(|k| ys & (1 << k) != 0));
                for i in 0..2 {
                    assert_eq!(
                        a.cylindrify(i, &x.union(&y)),
                        a.cylindrify(i, &x).union(&a.cylindrify(i, &y))
                    );
                    assert!(x.is_subset_of(&a.cylindrify(i, &x)));
                }
            }
        }
    }

    #[test]
    fn substitution_on_full_square() {
        let a = full_square();
        let x = elem(&a, &[SQ01]);
        assert_eq!(a.substitute(0, 0, &x), x);
        assert!(a.substitute(0, 1, &x).is_empty());
        assert_eq!(
            a.substitute(0, 1, &elem(&a, &[SQ11])),
            elem(&a, &[SQ01, SQ11])
        );
    }

    #[test]
    fn atom_substitution() {
        let a = full_square();
        // atoms below a diagonal are fixed
        assert_eq!(a.substitute_atom(0, 1, SQ00).unwrap(), Some(SQ00));
        assert_eq!(a.substitute_atom(0, 1, SQ10).unwrap(), Some(SQ00));
        assert_eq!(a.substitute_atom(1, 1, SQ10).unwrap(), Some(SQ10));
        assert_eq!(
            a.substitute_atom(2, 0, SQ00),
            Err(StructureError::IndexOutOfRange(2, 2))
        );
    }

    #[test]
    fn atom_substitution_empty_and_ambiguous() {
        // single off-diagonal sequence: d_01 is empty
        let (a, _) = structure_from_sequences(2, &[&[0, 1]]);
        assert_eq!(a.substitute_atom(0, 1, 0).unwrap(), None);

        // corrupt the full square so c_0{(1,0)} meets d_01 in two atoms
        let sq = full_square();
        let mut cyl: Vec<Vec<Element>> = (0..2)
            .map(|i| (0..4).map(|at| sq.cyl_image(i, at).clone()).collect())
            .collect();
        cyl[0][SQ10].insert(SQ11);
        let diag: Vec<Vec<Element>> = (0..2)
            .map(|i| (0..2).map(|j| sq.diag(i, j).clone()).collect())
            .collect();
        let bad = AtomStructure::new(2, 4, cyl, diag).unwrap();
        assert!(matches!(
            bad.substitute_atom(0, 1, SQ10),
            Err(StructureError::SubstitutionNotAtomic { .. })
        ));
    }

    #[test]
    fn transposition_image_on_full_square() {
        let a = full_square();
        let x = elem(&a, &[SQ01]);
        assert_eq!(a.transposition_image(0, 0, &x), x);
        assert_eq!(a.transposition_image(0, 1, &x), elem(&a, &[SQ10]));
        // an atom below d_01 is contained in its own transposition image
        let d = elem(&a, &[SQ00]);
        assert!(d.is_subset_of(&a.transposition_image(0, 1, &d)));
        assert_eq!(
            a.transposition_image(0, 1, &d),
            a.cylindrify(0, &d).intersect(&a.cylindrify(1, &d))
        );
    }

    #[test]
    fn transform_atom_on_full_square() {
        let a = full_square();
        let drop1 = Transformation::replacement(2, 1, 0);
        assert_eq!(a.transform_atom(&drop1, SQ01).unwrap(), Some(SQ00));
        let const1 = Transformation::new(vec![1, 1]).unwrap();
        assert_eq!(a.transform_atom(&const1, SQ01).unwrap(), Some(SQ11));
    }

    #[test]
    fn transform_atom_matches_sequence_action() {
        // on a set algebra the action on the atom of f is the atom of f ∘ tau
        let units: Vec<Vec<Vec<usize>>> = vec![
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]],
            vec![vec![0, 0], vec![1, 1], vec![0, 1]],
        ];
        for unit in units {
            let refs: Vec<&[usize]> = unit.iter().map(|s| s.as_slice()).collect();
            let (a, sorted) = structure_from_sequences(2, &refs);
            for tau in crate::transform::Transformation::enumerate(
                2,
                crate::transform::TransformationKind::NonSurjective,
            )
            .unwrap()
            {
                for (idx, f) in sorted.iter().enumerate() {
                    let image = tau.apply_to(f).unwrap();
                    let expected = sorted.iter().position(|g| *g == image);
                    assert_eq!(a.transform_atom(&tau, idx).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn transform_atom_is_decomposition_independent() {
        // fold the substitution through an alternative decomposition found by
        // breadth-first search and compare
        use std::collections::{HashMap, VecDeque};
        let (a, _) = structure_from_sequences(2, &[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        let n = 2;
        for tau in crate::transform::Transformation::enumerate(
            n,
            crate::transform::TransformationKind::NonSurjective,
        )
        .unwrap()
        {
            // shortest word in replacements reaching tau
            let mut prev: HashMap<Transformation, (Transformation, (usize, usize))> =
                HashMap::new();
            let mut queue = VecDeque::from([Transformation::identity(n)]);
            let mut found = false;
            while let Some(cur) = queue.pop_front() {
                if cur == tau {
                    found = true;
                    break;
                }
                for i in 0..n {
                    for j in 0..n {
                        if i == j {
                            continue;
                        }
                        let next = cur.compose(&Transformation::replacement(n, i, j)).unwrap();
                        if next != Transformation::identity(n) && !prev.contains_key(&next) {
                            prev.insert(next.clone(), (cur.clone(), (i, j)));
                            queue.push_back(next);
                        }
                    }
                }
            }
            assert!(found);
            let mut steps = Vec::new();
            let mut cur = tau.clone();
            while cur != Transformation::identity(n) {
                let (p, step) = prev[&cur].clone();
                steps.push(step);
                cur = p;
            }
            steps.reverse();
            for atom in a.atoms() {
                let mut via_bfs = Some(atom);
                for (i, j) in &steps {
                    via_bfs = match via_bfs {
                        Some(at) => a.substitute_atom(*i, *j, at).unwrap(),
                        None => None,
                    };
                }
                assert_eq!(a.transform_atom(&tau, atom).unwrap(), via_bfs, "tau {tau}");
            }
        }
    }

    #[test]
    fn doc_round_trip() {
        let a = full_square();
        let names: Vec<String> = ["(0,0)", "(0,1)", "(1,0)", "(1,1)"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let doc = AlgebraDoc::from_structure(&a, &names);
        let back = doc.to_structure().unwrap();
        assert_eq!(a, back);
        let json = serde_json::to_string(&doc).unwrap();
        let doc2: AlgebraDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(doc2.to_structure().unwrap(), a);
    }

    #[test]
    fn doc_rejects_bad_indices() {
        let a = full_square();
        let names: Vec<String> = (0..4).map(|k| format!("a{k}")).collect();
        let mut doc = AlgebraDoc::from_structure(&a, &names);
        doc.diag.insert("0,1".into(), vec![9]);
        assert!(matches!(
            doc.to_structure(),
            Err(AlgebraDocError::AtomIndex { .. })
        ));
        let mut doc2 = AlgebraDoc::from_structure(&a, &names);
        doc2.diag.remove("1,0");
        assert!(matches!(
            doc2.to_structure(),
            Err(AlgebraDocError::MissingDiag(_))
        ));
    }
}
