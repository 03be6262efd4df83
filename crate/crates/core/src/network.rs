//! Pre-networks (partial labelings of node tuples by atoms), the network
//! conditions, zigzag search, mosaic construction, and conflict-detecting
//! merge.
//!
//! A network for a class must have a suitably closed edge set, labels whose
//! diagonal memberships mirror the repetition pattern of the tuple, and a
//! zigzag between any two edges whose ranges partially overlap. Modified
//! networks replace the zigzag condition with a pointwise label equation.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AtomId, AtomStructure, StructureError};
use crate::transform::{permutation_chain, Transformation, TransformationKind};
use crate::{AlgebraClass, EdgeClosure};

pub type NodeId = u32;
pub type Edge = Vec<NodeId>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NetworkError {
    #[error("edge {edge:?} already labeled {existing}, refusing {new}")]
    LabelConflict {
        edge: Edge,
        existing: AtomId,
        new: AtomId,
    },
    #[error("edge {edge:?} has length {got}, expected {expected}")]
    EdgeArity {
        edge: Edge,
        got: usize,
        expected: usize,
    },
    #[error("node id {0} is reserved")]
    ReservedNode(NodeId),
}

#[derive(Debug, Error)]
pub enum MosaicError {
    #[error("generator {edge:?} does not match the diagonal pattern of atom {atom} at ({i},{j})")]
    PatternMismatch {
        edge: Edge,
        atom: AtomId,
        i: usize,
        j: usize,
    },
    #[error("no atom available to label {edge:?} (transforming atom {atom} by {tau})")]
    UnlabelableEdge {
        edge: Edge,
        atom: AtomId,
        tau: String,
    },
    #[error("transposition image of atom {atom} at ({k},{l}) is empty")]
    EmptyTranspositionImage { atom: AtomId, k: usize, l: usize },
    #[error("inconsistent labels inside a mosaic: {0}")]
    Inconsistent(#[from] NetworkError),
    #[error(
        "label equation fails in mosaic: edge {edge:?} ∘ [{i}/{j}] is labeled {found:?}, expected {expected:?}"
    )]
    ConditionViolated {
        edge: Edge,
        i: usize,
        j: usize,
        found: Option<AtomId>,
        expected: Option<AtomId>,
    },
    #[error("structure error while labeling mosaic: {0}")]
    Structure(#[from] StructureError),
}

/// A finite set of nodes with a partial map from n-tuples of nodes to atoms.
/// Edge insertion order is preserved; it drives the deterministic scheduling
/// in the game.
#[derive(Debug, Clone)]
pub struct PreNetwork {
    arity: usize,
    nodes: BTreeSet<NodeId>,
    labels: BTreeMap<Edge, AtomId>,
    order: Vec<Edge>,
}

impl PartialEq for PreNetwork {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.nodes == other.nodes && self.labels == other.labels
    }
}

impl Eq for PreNetwork {}

impl PreNetwork {
    pub fn new(arity: usize) -> Self {
        PreNetwork {
            arity,
            nodes: BTreeSet::new(),
            labels: BTreeMap::new(),
            order: Vec::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn nodes(&self) -> &BTreeSet<NodeId> {
        &self.nodes
    }

    pub fn add_node(&mut self, node: NodeId) {
        self.nodes.insert(node);
    }

    pub fn edge_count(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty() && self.nodes.is_empty()
    }

    pub fn label(&self, edge: &[NodeId]) -> Option<AtomId> {
        self.labels.get(edge).copied()
    }

    pub fn contains_edge(&self, edge: &[NodeId]) -> bool {
        self.labels.contains_key(edge)
    }

    /// Edges in insertion order.
    pub fn edges_in_order(&self) -> impl Iterator<Item = &Edge> {
        self.order.iter()
    }

    /// Edges in lexicographic tuple order.
    pub fn edges_canonical(&self) -> impl Iterator<Item = (&Edge, AtomId)> {
        self.labels.iter().map(|(e, &a)| (e, a))
    }

    /// Labels an edge, inserting its nodes. Re-labeling with the same atom is
    /// a no-op returning `false`; a different atom is a conflict.
    pub fn insert(&mut self, edge: Edge, atom: AtomId) -> Result<bool, NetworkError> {
        if edge.len() != self.arity {
            return Err(NetworkError::EdgeArity {
                got: edge.len(),
                expected: self.arity,
                edge,
            });
        }
        // NodeId::MAX is the mask sentinel used by the edge indexes
        if let Some(&bad) = edge.iter().find(|&&u| u == NodeId::MAX) {
            return Err(NetworkError::ReservedNode(bad));
        }
        if let Some(&existing) = self.labels.get(&edge) {
            if existing == atom {
                return Ok(false);
            }
            return Err(NetworkError::LabelConflict {
                edge,
                existing,
                new: atom,
            });
        }
        self.nodes.extend(edge.iter().copied());
        self.labels.insert(edge.clone(), atom);
        self.order.push(edge);
        Ok(true)
    }

    /// Union with label-conflict detection; `other`'s new edges are appended
    /// in `other`'s insertion order.
    pub fn merge_in(&mut self, other: &PreNetwork) -> Result<(), NetworkError> {
        for edge in other.edges_in_order() {
            self.insert(edge.clone(), other.label(edge).expect("edge in order map"))?;
        }
        self.nodes.extend(other.nodes.iter().copied());
        Ok(())
    }
}

/// Node/edge union of two pre-networks; shared edges must agree on labels.
pub fn merge(a: &PreNetwork, b: &PreNetwork) -> Result<PreNetwork, NetworkError> {
    let mut out = a.clone();
    out.merge_in(b)?;
    Ok(out)
}

/// A path of edges witnessing condition (c): consecutive edges differ at one
/// index with equal cylinder classes of their labels, and every edge's range
/// contains the endpoints' range intersection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Zigzag {
    pub path: Vec<Edge>,
    pub step_indices: Vec<usize>,
}

impl Zigzag {
    pub fn len(&self) -> usize {
        self.step_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.step_indices.is_empty()
    }
}

fn range_of(edge: &[NodeId]) -> BTreeSet<NodeId> {
    edge.iter().copied().collect()
}

/// Edges grouped by their tuple with one position blanked out; two edges in
/// the same group differ at most at that position.
struct MaskIndex {
    groups: BTreeMap<(usize, Edge), Vec<Edge>>,
}

impl MaskIndex {
    fn build(network: &PreNetwork) -> MaskIndex {
        let mut groups: BTreeMap<(usize, Edge), Vec<Edge>> = BTreeMap::new();
        for (edge, _) in network.edges_canonical() {
            for i in 0..network.arity() {
                let mut key = edge.clone();
                key[i] = NodeId::MAX;
                groups.entry((i, key)).or_default().push(edge.clone());
            }
        }
        MaskIndex { groups }
    }

    fn neighbors(&self, edge: &[NodeId], i: usize) -> &[Edge] {
        let mut key = edge.to_vec();
        key[i] = NodeId::MAX;
        self.groups
            .get(&(i, key))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }
}

fn zigzag_with_index(
    algebra: &AtomStructure,
    network: &PreNetwork,
    index: &MaskIndex,
    f: &[NodeId],
    g: &[NodeId],
) -> Option<Zigzag> {
    if !network.contains_edge(f) || !network.contains_edge(g) {
        return None;
    }
    if f == g {
        return Some(Zigzag {
            path: vec![f.to_vec()],
            step_indices: vec![],
        });
    }
    let needed: BTreeSet<NodeId> = range_of(f).intersection(&range_of(g)).copied().collect();
    let admissible = |edge: &[NodeId]| needed.iter().all(|u| edge.contains(u));
    if !admissible(f) || !admissible(g) {
        return None;
    }

    let mut prev: BTreeMap<Edge, (Edge, usize)> = BTreeMap::new();
    let mut queue: VecDeque<Edge> = VecDeque::from([f.to_vec()]);
    let mut seen: BTreeSet<Edge> = BTreeSet::from([f.to_vec()]);

    while let Some(cur) = queue.pop_front() {
        let cur_label = network.label(&cur).expect("edge present");
        for i in 0..network.arity() {
            for next in index.neighbors(&cur, i) {
                if next == &cur || seen.contains(next) || !admissible(next) {
                    continue;
                }
                let next_label = network.label(next).expect("indexed edge");
                if algebra.cyl_image(i, cur_label) != algebra.cyl_image(i, next_label) {
                    continue;
                }
                prev.insert(next.clone(), (cur.clone(), i));
                if next.as_slice() == g {
                    let mut path = vec![g.to_vec()];
                    let mut steps = Vec::new();
                    let mut at = g.to_vec();
                    while let Some((p, i)) = prev.get(&at) {
                        steps.push(*i);
                        path.push(p.clone());
                        at = p.clone();
                    }
                    path.reverse();
                    steps.reverse();
                    return Some(Zigzag {
                        path,
                        step_indices: steps,
                    });
                }
                seen.insert(next.clone());
                queue.push_back(next.clone());
            }
        }
    }
    None
}

/// Breadth-first search for a shortest zigzag from `f` to `g`, expanding
/// neighbours by index ascending and then in tuple order. Returns `None` when
/// the two edges are not connected above their range intersection.
pub fn zigzag_search(
    algebra: &AtomStructure,
    network: &PreNetwork,
    f: &[NodeId],
    g: &[NodeId],
) -> Option<Zigzag> {
    let index = MaskIndex::build(network);
    zigzag_with_index(algebra, network, &index, f, g)
}

/// Diagonal-pattern condition (b): an edge's label lies below `d_ij` exactly
/// when the tuple repeats between `i` and `j`.
pub fn diagonal_condition(
    algebra: &AtomStructure,
    network: &PreNetwork,
) -> Result<(), (Edge, usize, usize)> {
    for (edge, atom) in network.edges_canonical() {
        for i in 0..network.arity() {
            for j in 0..network.arity() {
                let on_diag = algebra.diag(i, j).contains(atom);
                if on_diag != (edge[i] == edge[j]) {
                    return Err((edge.clone(), i, j));
                }
            }
        }
    }
    Ok(())
}

/// Closure condition (a): the edge set is closed under right composition with
/// the transformation family demanded by the class. On failure returns the
/// edge and the missing image.
pub fn closure_condition(network: &PreNetwork, klass: AlgebraClass) -> Result<(), (Edge, Edge)> {
    let kind = match klass.edge_closure() {
        EdgeClosure::None => return Ok(()),
        EdgeClosure::Diagonalizable => TransformationKind::NonSurjective,
        EdgeClosure::Permutable => TransformationKind::All,
    };
    let taus = Transformation::enumerate(network.arity(), kind).expect("arity from network");
    for edge in network.edges_in_order() {
        for tau in &taus {
            let image = tau.apply_to(edge).expect("arity matches");
            if !network.contains_edge(&image) {
                return Err((edge.clone(), image));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetworkFailure {
    BadLabel {
        edge: Edge,
        atom: AtomId,
    },
    Diagonal {
        edge: Edge,
        i: usize,
        j: usize,
    },
    Closure {
        edge: Edge,
        missing: Edge,
    },
    NoZigzag {
        from: Edge,
        to: Edge,
    },
    /// Modified-network condition (c'): the label of `edge ∘ [i/j]` is not the
    /// substitution image of the label of `edge`.
    LabelEquation {
        edge: Edge,
        i: usize,
        j: usize,
    },
}

impl std::fmt::Display for NetworkFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NetworkFailure::BadLabel { edge, atom } => {
                write!(f, "edge {edge:?} labeled by out-of-range atom {atom}")
            }
            NetworkFailure::Diagonal { edge, i, j } => {
                write!(f, "condition (b) fails at edge {edge:?} for ({i},{j})")
            }
            NetworkFailure::Closure { edge, missing } => {
                write!(
                    f,
                    "condition (a) fails: image {missing:?} of edge {edge:?} is unlabeled"
                )
            }
            NetworkFailure::NoZigzag { from, to } => {
                write!(f, "condition (c) fails: no zigzag from {from:?} to {to:?}")
            }
            NetworkFailure::LabelEquation { edge, i, j } => {
                write!(f, "condition (c') fails at edge {edge:?} under [{i}/{j}]")
            }
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct NetworkReport {
    pub failures: Vec<NetworkFailure>,
}

impl NetworkReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

fn label_sanity(algebra: &AtomStructure, network: &PreNetwork, out: &mut Vec<NetworkFailure>) {
    for (edge, atom) in network.edges_canonical() {
        if atom >= algebra.atom_count() {
            out.push(NetworkFailure::BadLabel {
                edge: edge.clone(),
                atom,
            });
        }
    }
}

/// Full network check: conditions (a), (b), and — for every edge pair whose
/// ranges overlap in a proper nonempty set — zigzag existence.
pub fn check_network(
    algebra: &AtomStructure,
    network: &PreNetwork,
    klass: AlgebraClass,
) -> NetworkReport {
    let mut failures = Vec::new();
    label_sanity(algebra, network, &mut failures);
    if !failures.is_empty() {
        return NetworkReport { failures };
    }
    if let Err((edge, missing)) = closure_condition(network, klass) {
        failures.push(NetworkFailure::Closure { edge, missing });
    }
    if let Err((edge, i, j)) = diagonal_condition(algebra, network) {
        failures.push(NetworkFailure::Diagonal { edge, i, j });
    }
    if failures.is_empty() {
        let n = network.arity();
        let index = MaskIndex::build(network);
        let edges: Vec<&Edge> = network.edges_canonical().map(|(e, _)| e).collect();
        let ranges: Vec<BTreeSet<NodeId>> = edges.iter().map(|e| range_of(e)).collect();
        for (idx, f) in edges.iter().enumerate() {
            for (jdx, g) in edges.iter().enumerate().skip(idx + 1) {
                let overlap = ranges[idx].intersection(&ranges[jdx]).count();
                if overlap == 0 || overlap >= n {
                    continue;
                }
                if zigzag_with_index(algebra, network, &index, f, g).is_none() {
                    failures.push(NetworkFailure::NoZigzag {
                        from: (*f).clone(),
                        to: (*g).clone(),
                    });
                }
            }
        }
    }
    NetworkReport { failures }
}

/// Modified-network check: closure (a), diagonal condition (b), and the label
/// equation (c') for every labeled replacement image. No zigzag requirement.
pub fn check_modified_network(
    algebra: &AtomStructure,
    network: &PreNetwork,
    klass: AlgebraClass,
) -> NetworkReport {
    let mut failures = Vec::new();
    label_sanity(algebra, network, &mut failures);
    if !failures.is_empty() {
        return NetworkReport { failures };
    }
    if let Err((edge, missing)) = closure_condition(network, klass) {
        failures.push(NetworkFailure::Closure { edge, missing });
    }
    if let Err((edge, i, j)) = diagonal_condition(algebra, network) {
        failures.push(NetworkFailure::Diagonal { edge, i, j });
    }
    let n = network.arity();
    for (edge, atom) in network.edges_canonical() {
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let mut image = edge.clone();
                image[i] = edge[j];
                if let Some(found) = network.label(&image) {
                    let expected = algebra.substitute_atom(i, j, atom).ok().flatten();
                    if expected != Some(found) {
                        failures.push(NetworkFailure::LabelEquation {
                            edge: edge.clone(),
                            i,
                            j,
                        });
                    }
                }
            }
        }
    }
    NetworkReport { failures }
}

/// Dispatches to the plain or modified checker according to the class.
pub fn check_for_class(
    algebra: &AtomStructure,
    network: &PreNetwork,
    klass: AlgebraClass,
) -> NetworkReport {
    if klass.modified() {
        check_modified_network(algebra, network, klass)
    } else {
        check_network(algebra, network, klass)
    }
}

fn pattern_matches(
    algebra: &AtomStructure,
    f: &[NodeId],
    atom: AtomId,
) -> Result<(), (usize, usize)> {
    let n = algebra.dimension();
    for i in 0..n {
        for j in 0..n {
            if (f[i] == f[j]) != algebra.diag(i, j).contains(atom) {
                return Err((i, j));
            }
        }
    }
    Ok(())
}

/// Builds the mosaic generated by an edge and an atom whose diagonal pattern
/// matches the edge's repetitions.
///
/// - `Rc`: the single labeled edge.
/// - `Dc`/`DcMinus`, and `Sc`/`ScMinus` when the generator repeats a node:
///   the generator plus its images under all non-surjective transformations,
///   labeled by the transformation action on the atom.
/// - `Sc`/`ScMinus` with a repetition-free generator: images under all
///   transformations; the repetition-free edges are labeled along the
///   breadth-first permutation chain, each by the least atom of the
///   transposition image of its parent's label.
///
/// After construction the label equation `label(g ∘ [i/j]) = t^i_j label(g)`
/// is asserted for every labeled image, so an invalid input algebra surfaces
/// here rather than corrupting a play.
pub fn build_mosaic(
    algebra: &AtomStructure,
    f: &[NodeId],
    atom: AtomId,
    klass: AlgebraClass,
) -> Result<PreNetwork, MosaicError> {
    let n = algebra.dimension();
    assert_eq!(f.len(), n, "generator length must equal the dimension");
    if let Err((i, j)) = pattern_matches(algebra, f, atom) {
        return Err(MosaicError::PatternMismatch {
            edge: f.to_vec(),
            atom,
            i,
            j,
        });
    }

    let mut mosaic = PreNetwork::new(n);
    mosaic.insert(f.to_vec(), atom)?;

    let closure = klass.edge_closure();
    let repetition_free = range_of(f).len() == n;

    if closure != EdgeClosure::None {
        for tau in Transformation::enumerate(n, TransformationKind::NonSurjective).unwrap() {
            let edge = tau.apply_to(f).expect("arity matches");
            match algebra.transform_atom(&tau, atom)? {
                Some(label) => {
                    mosaic.insert(edge, label)?;
                }
                None => {
                    return Err(MosaicError::UnlabelableEdge {
                        edge,
                        atom,
                        tau: tau.to_string(),
                    })
                }
            }
        }
    }

    if closure == EdgeClosure::Permutable && repetition_free {
        let chain = permutation_chain(n).expect("dimension at least 2");
        let mut chain_labels: Vec<AtomId> = Vec::with_capacity(chain.len());
        for entry in chain.entries() {
            match (entry.parent, entry.transposition) {
                (None, None) => chain_labels.push(atom),
                (Some(p), Some((k, l))) => {
                    let parent_label = chain_labels[p];
                    let pool =
                        algebra.transposition_image(k, l, &algebra.atom_element(parent_label));
                    let label = pool.first().ok_or(MosaicError::EmptyTranspositionImage {
                        atom: parent_label,
                        k,
                        l,
                    })?;
                    chain_labels.push(label);
                    let edge = entry.permutation.apply_to(f).expect("arity matches");
                    mosaic.insert(edge, label)?;
                }
                _ => unreachable!("chain entries are parented"),
            }
        }
    }

    // label equation: every labeled replacement image agrees with the
    // substitution action on atoms
    for (edge, label) in mosaic.edges_canonical() {
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let mut image = edge.clone();
                image[i] = edge[j];
                if let Some(found) = mosaic.label(&image) {
                    let expected = algebra.substitute_atom(i, j, label)?;
                    if expected != Some(found) {
                        return Err(MosaicError::ConditionViolated {
                            edge: edge.clone(),
                            i,
                            j,
                            found: Some(found),
                            expected,
                        });
                    }
                }
            }
        }
    }

    Ok(mosaic)
}

/// Serialized form of a pre-network.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetworkDoc {
    pub nodes: Vec<NodeId>,
    pub edges: Vec<NetworkDocEdge>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetworkDocEdge {
    pub tuple: Edge,
    pub atom: AtomId,
}

impl NetworkDoc {
    pub fn from_network(network: &PreNetwork) -> NetworkDoc {
        NetworkDoc {
            nodes: network.nodes().iter().copied().collect(),
            edges: network
                .edges_in_order()
                .map(|e| NetworkDocEdge {
                    tuple: e.clone(),
                    atom: network.label(e).unwrap(),
                })
                .collect(),
        }
    }

    pub fn to_network(&self, arity: usize) -> Result<PreNetwork, NetworkError> {
        let mut out = PreNetwork::new(arity);
        for node in &self.nodes {
            if *node == NodeId::MAX {
                return Err(NetworkError::ReservedNode(*node));
            }
            out.add_node(*node);
        }
        for e in &self.edges {
            out.insert(e.tuple.clone(), e.atom)?;
        }
        Ok(out)
    }
}
