//! The two-player witness game. One side demands that every atom label some
//! edge and that every cylinder-class member of an edge label be witnessed at
//! a neighbouring edge; the builder answers each demand by gluing a mosaic
//! onto the current network. Demands are scheduled exhaustively in a fixed
//! order, so a play is a deterministic function of the algebra, the class and
//! the limits.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AtomId, AtomStructure};
use crate::network::{
    build_mosaic, check_for_class, Edge, MosaicError, NetworkError, NodeId, PreNetwork,
};
use crate::AlgebraClass;

#[derive(Debug, Error)]
pub enum GameError {
    #[error("mosaic construction failed: {0}")]
    Mosaic(#[from] MosaicError),
    #[error("merge conflict while absorbing a mosaic: {0}")]
    Merge(#[from] NetworkError),
    #[error("diagonal memberships of atom {atom} do not form an equivalence on indices")]
    DiagonalPattern { atom: AtomId },
    #[error(
        "edge {edge:?} is labeled {found} but the strategy requires {expected}; the algebra violates its declared class"
    )]
    LabelDisagreement {
        edge: Edge,
        found: AtomId,
        expected: AtomId,
    },
    #[error("network check failed after round {round}: {failures:?}")]
    InvariantViolated { round: usize, failures: Vec<String> },
}

/// A pending demand.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Obligation {
    /// Some edge must carry this label.
    AtomWitness { atom: AtomId },
    /// `edge` changed at `index` must somewhere carry the label `atom`, which
    /// lies in the cylinder class of `edge`'s label at `index`.
    CylWitness {
        edge: Edge,
        index: usize,
        atom: AtomId,
    },
}

impl std::fmt::Display for Obligation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Obligation::AtomWitness { atom } => write!(f, "atom-witness({atom})"),
            Obligation::CylWitness { edge, index, atom } => {
                write!(f, "cyl-witness({edge:?}, i={index}, atom={atom})")
            }
        }
    }
}

/// Every unmet demand against `network`, in the canonical order: unlabeled
/// atoms ascending, then per edge in insertion order, per index ascending,
/// per class atom ascending.
pub fn pending_obligations(
    algebra: &AtomStructure,
    network: &PreNetwork,
    _klass: AlgebraClass,
) -> Vec<Obligation> {
    let n = algebra.dimension();
    let mut labeled = vec![false; algebra.atom_count()];
    let mut witnesses: HashSet<(usize, Edge, AtomId)> = HashSet::new();
    for edge in network.edges_in_order() {
        let label = network.label(edge).expect("listed edge");
        labeled[label] = true;
        for i in 0..n {
            witnesses.insert((i, masked(edge, i), label));
        }
    }
    let mut out: Vec<Obligation> = (0..algebra.atom_count())
        .filter(|&a| !labeled[a])
        .map(|atom| Obligation::AtomWitness { atom })
        .collect();
    for edge in network.edges_in_order() {
        let label = network.label(edge).expect("listed edge");
        for i in 0..n {
            for b in algebra.cyl_image(i, label).iter() {
                if !witnesses.contains(&(i, masked(edge, i), b)) {
                    out.push(Obligation::CylWitness {
                        edge: edge.clone(),
                        index: i,
                        atom: b,
                    });
                }
            }
        }
    }
    out
}

fn masked(edge: &[NodeId], i: usize) -> Edge {
    let mut m = edge.to_vec();
    m[i] = NodeId::MAX;
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_rounds: usize,
    pub max_nodes: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_rounds: 10_000,
            max_nodes: 5_000,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct GameOptions {
    pub limits: Limits,
    /// Check the network conditions after every round and fail the play if
    /// they break.
    pub check_networks: bool,
    pub record_transcript: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PlayStatus {
    Saturated,
    Bounded,
}

#[derive(Debug, Clone, Serialize)]
pub struct RoundRecord {
    pub round: usize,
    pub obligation: String,
    pub nodes_added: usize,
    pub edges_added: usize,
}

#[derive(Debug)]
pub struct PlayOutcome {
    pub status: PlayStatus,
    pub network: PreNetwork,
    pub rounds: usize,
    /// Unmet demands at the moment the play stopped; empty iff saturated.
    pub pending: Vec<Obligation>,
    pub transcript: Option<Vec<RoundRecord>>,
}

/// The evolving state of one play.
pub struct PlayState<'a> {
    algebra: &'a AtomStructure,
    klass: AlgebraClass,
    network: PreNetwork,
    next_node: NodeId,
    rounds: usize,
    queue: VecDeque<Obligation>,
    atom_labeled: Vec<bool>,
    witnesses: HashSet<(usize, Edge, AtomId)>,
}

impl<'a> PlayState<'a> {
    pub fn new(algebra: &'a AtomStructure, klass: AlgebraClass) -> Self {
        let queue = (0..algebra.atom_count())
            .map(|atom| Obligation::AtomWitness { atom })
            .collect();
        PlayState {
            algebra,
            klass,
            network: PreNetwork::new(algebra.dimension()),
            next_node: 0,
            rounds: 0,
            queue,
            atom_labeled: vec![false; algebra.atom_count()],
            witnesses: HashSet::new(),
        }
    }

    pub fn network(&self) -> &PreNetwork {
        &self.network
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn klass(&self) -> AlgebraClass {
        self.klass
    }

    pub fn into_network(self) -> PreNetwork {
        self.network
    }

    fn fresh_node(&mut self) -> NodeId {
        let u = self.next_node;
        self.next_node += 1;
        u
    }

    pub fn is_met(&self, ob: &Obligation) -> bool {
        match ob {
            Obligation::AtomWitness { atom } => self.atom_labeled[*atom],
            Obligation::CylWitness { edge, index, atom } => {
                self.witnesses
                    .contains(&(*index, masked(edge, *index), *atom))
            }
        }
    }

    /// Glues a mosaic onto the network, indexing new edges and queueing the
    /// demands they give rise to. Returns (nodes added, edges added).
    fn absorb(&mut self, mosaic: &PreNetwork) -> Result<(usize, usize), GameError> {
        let n = self.algebra.dimension();
        let nodes_before = self.network.nodes().len();
        let mut edges_added = 0;
        for edge in mosaic.edges_in_order() {
            let label = mosaic.label(edge).expect("listed edge");
            if self.network.insert(edge.clone(), label)? {
                edges_added += 1;
                self.atom_labeled[label] = true;
                for i in 0..n {
                    self.witnesses.insert((i, masked(edge, i), label));
                }
                for i in 0..n {
                    for b in self.algebra.cyl_image(i, label).iter() {
                        self.queue.push_back(Obligation::CylWitness {
                            edge: edge.clone(),
                            index: i,
                            atom: b,
                        });
                    }
                }
            }
        }
        Ok((self.network.nodes().len() - nodes_before, edges_added))
    }

    /// Builds the generator tuple for a fresh mosaic of `atom`: one new node
    /// per class of the relation `i ~ j ⟺ atom ≤ d_ij`, which must be an
    /// equivalence for the tuple to exist.
    fn fresh_generator(&mut self, atom: AtomId) -> Result<Edge, GameError> {
        let n = self.algebra.dimension();
        let rel = |i: usize, j: usize| self.algebra.diag(i, j).contains(atom);
        for i in 0..n {
            if !rel(i, i) {
                return Err(GameError::DiagonalPattern { atom });
            }
            for j in 0..n {
                if rel(i, j) != rel(j, i) {
                    return Err(GameError::DiagonalPattern { atom });
                }
                for k in 0..n {
                    if rel(i, j) && rel(j, k) && !rel(i, k) {
                        return Err(GameError::DiagonalPattern { atom });
                    }
                }
            }
        }
        let mut assigned: Vec<Option<NodeId>> = vec![None; n];
        for i in 0..n {
            if assigned[i].is_none() {
                let u = self.fresh_node();
                for (j, slot) in assigned.iter_mut().enumerate().skip(i) {
                    if rel(i, j) {
                        *slot = Some(u);
                    }
                }
            }
        }
        Ok(assigned
            .into_iter()
            .map(|x| x.expect("every index assigned"))
            .collect())
    }

    /// The builder's move answering one demand. A demand that is already met
    /// leaves the state unchanged.
    pub fn answer(&mut self, ob: &Obligation) -> Result<(usize, usize), GameError> {
        if self.is_met(ob) {
            return Ok((0, 0));
        }
        match ob {
            Obligation::AtomWitness { atom } => {
                let f = self.fresh_generator(*atom)?;
                let mosaic = build_mosaic(self.algebra, &f, *atom, self.klass)?;
                self.absorb(&mosaic)
            }
            Obligation::CylWitness { edge, index, atom } => {
                let i = *index;
                let b = *atom;
                let diag_j = (0..self.algebra.dimension())
                    .find(|&j| j != i && self.algebra.diag(i, j).contains(b));
                let target = match diag_j {
                    Some(j) => {
                        let mut t = edge.clone();
                        t[i] = edge[j];
                        if let Some(found) = self.network.label(&t) {
                            // an existing edge here must already carry b
                            if found != b {
                                return Err(GameError::LabelDisagreement {
                                    edge: t,
                                    found,
                                    expected: b,
                                });
                            }
                            return Ok((0, 0));
                        }
                        t
                    }
                    None => {
                        let u = self.fresh_node();
                        let mut t = edge.clone();
                        t[i] = u;
                        t
                    }
                };
                let mosaic = build_mosaic(self.algebra, &target, b, self.klass)?;
                self.absorb(&mosaic)
            }
        }
    }

    fn next_unmet(&mut self) -> Option<Obligation> {
        while let Some(ob) = self.queue.pop_front() {
            if !self.is_met(&ob) {
                return Some(ob);
            }
        }
        None
    }
}

/// Plays demands first-in-first-out until none remain (saturated) or a limit
/// is hit (bounded, with the remaining demands). The processing order equals
/// rescanning [`pending_obligations`] after every move and answering the
/// first entry; a final rescan re-verifies saturation.
pub fn run_to_saturation(
    algebra: &AtomStructure,
    klass: AlgebraClass,
    opts: &GameOptions,
) -> Result<PlayOutcome, GameError> {
    let mut state = PlayState::new(algebra, klass);
    let mut transcript = opts.record_transcript.then(Vec::new);

    loop {
        let Some(ob) = state.next_unmet() else {
            let pending = pending_obligations(algebra, &state.network, klass);
            debug_assert!(pending.is_empty(), "incremental queue missed {pending:?}");
            if pending.is_empty() {
                return Ok(PlayOutcome {
                    status: PlayStatus::Saturated,
                    rounds: state.rounds,
                    pending,
                    transcript,
                    network: state.into_network(),
                });
            }
            state.queue.extend(pending);
            continue;
        };
        if state.rounds >= opts.limits.max_rounds {
            return Ok(bounded(state, algebra, klass, transcript));
        }
        let (nodes_added, edges_added) = state.answer(&ob)?;
        state.rounds += 1;
        if let Some(t) = transcript.as_mut() {
            t.push(RoundRecord {
                round: state.rounds,
                obligation: ob.to_string(),
                nodes_added,
                edges_added,
            });
        }
        if opts.check_networks {
            // TODO: the network conditions are monotone across rounds, so this
            // could recheck only pairs that involve the round's new edges;
            // full rechecking makes debug replays of long plays expensive.
            let report = check_for_class(algebra, &state.network, klass);
            if !report.pass() {
                return Err(GameError::InvariantViolated {
                    round: state.rounds,
                    failures: report.failures.iter().map(|f| f.to_string()).collect(),
                });
            }
        }
        if state.network.nodes().len() > opts.limits.max_nodes {
            return Ok(bounded(state, algebra, klass, transcript));
        }
    }
}

fn bounded(
    state: PlayState<'_>,
    algebra: &AtomStructure,
    klass: AlgebraClass,
    transcript: Option<Vec<RoundRecord>>,
) -> PlayOutcome {
    let pending = pending_obligations(algebra, state.network(), klass);
    PlayOutcome {
        status: PlayStatus::Bounded,
        rounds: state.rounds(),
        pending,
        transcript,
        network: state.into_network(),
    }
}
