//! Total transformations on the index set `{0, …, n-1}`.
//!
//! Composition is written the functional way: `(sigma ∘ tau)(x) = sigma(tau(x))`,
//! and a sequence is acted on from the right, `(f ∘ tau)(i) = f(tau(i))`.
//! Non-surjective transformations decompose into replacements `[i/j]` (send
//! `i` to `j`, fix the rest); permutations are enumerated along a
//! breadth-first chain of transpositions `[i,j]`.

use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransformError {
    #[error("arity must be at least 2, got {0}")]
    ArityTooSmall(usize),
    #[error("image {image} out of range for arity {arity}")]
    ImageOutOfRange { image: usize, arity: usize },
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("sequence length {seq} does not match arity {arity}")]
    LengthMismatch { seq: usize, arity: usize },
    #[error("permutations have no replacement decomposition")]
    NotDecomposable,
}

/// A total map on `{0, …, n-1}`, stored as its image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transformation {
    images: Vec<usize>,
}

/// Which family of transformations to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformationKind {
    All,
    /// Non-surjective transformations only.
    NonSurjective,
    Permutations,
}

impl Transformation {
    pub fn new(images: Vec<usize>) -> Result<Self, TransformError> {
        let n = images.len();
        if n < 2 {
            return Err(TransformError::ArityTooSmall(n));
        }
        for &im in &images {
            if im >= n {
                return Err(TransformError::ImageOutOfRange {
                    image: im,
                    arity: n,
                });
            }
        }
        Ok(Transformation { images })
    }

    pub fn identity(n: usize) -> Self {
        Transformation {
            images: (0..n).collect(),
        }
    }

    /// The replacement `[i/j]`: sends `i` to `j`, fixes everything else.
    pub fn replacement(n: usize, i: usize, j: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images[i] = j;
        Transformation { images }
    }

    /// The transposition `[i,j]`: swaps `i` and `j`, fixes everything else.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i, j);
        Transformation { images }
    }

    pub fn arity(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn range(&self) -> BTreeSet<usize> {
        self.images.iter().copied().collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &im)| x == im)
    }

    /// True iff the image set has size `n`.
    pub fn is_permutation(&self) -> bool {
        self.range().len() == self.arity()
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Transformation) -> Result<Transformation, TransformError> {
        if self.arity() != other.arity() {
            return Err(TransformError::ArityMismatch(self.arity(), other.arity()));
        }
        let images = (0..self.arity())
            .map(|x| self.images[other.images[x]])
            .collect();
        Ok(Transformation { images })
    }

    /// Right action on a sequence: `result[i] = seq[self(i)]`, i.e. `seq ∘ self`.
    pub fn apply_to<T: Clone>(&self, seq: &[T]) -> Result<Vec<T>, TransformError> {
        if seq.len() != self.arity() {
            return Err(TransformError::LengthMismatch {
                seq: seq.len(),
                arity: self.arity(),
            });
        }
        Ok(self.images.iter().map(|&x| seq[x].clone()).collect())
    }

    /// Decomposes a non-surjective transformation into replacements
    /// `(i_1,j_1), …, (i_m,j_m)` with
    /// `[i_1/j_1] ∘ ⋯ ∘ [i_m/j_m] = self` (rightmost factor applied first to
    /// arguments; equivalently, a sequence is rewritten left to right:
    /// step `(i,j)` copies slot `j` into slot `i`).
    ///
    /// Deterministic: the cycles of the slot→image map are rotated first,
    /// each routed through the least index absent from the range as a spare
    /// slot, then the remaining slots are written leaves-first in ascending
    /// order. Produces at most `2n` steps.
    pub fn replacement_decomposition(&self) -> Result<Vec<(usize, usize)>, TransformError> {
        if self.is_permutation() {
            return Err(TransformError::NotDecomposable);
        }
        let n = self.arity();
        let range = self.range();
        let spare = (0..n).find(|k| !range.contains(k)).expect("non-surjective");
        let tau = &self.images;

        let mut steps: Vec<(usize, usize)> = Vec::new();
        // cur[x] = the original slot whose value currently sits in slot x
        let mut cur: Vec<usize> = (0..n).collect();

        // Cycles of x ↦ tau(x) restricted to moved slots. The spare is never
        // on a cycle: spare ∉ range forces tau(spare) ≠ spare, and no slot
        // maps to it.
        let mut on_cycle = vec![false; n];
        for start in 0..n {
            if tau[start] == start || on_cycle[start] {
                continue;
            }
            let mut seen = vec![start];
            let mut x = tau[start];
            while x != start && tau[x] != x && !seen.contains(&x) && !on_cycle[x] {
                seen.push(x);
                x = tau[x];
            }
            if x == start {
                for &s in &seen {
                    on_cycle[s] = true;
                }
                // Rotate seen = z1, z2 = tau(z1), … through the spare.
                steps.push((spare, seen[0]));
                cur[spare] = cur[seen[0]];
                for w in seen.windows(2) {
                    steps.push((w[0], w[1]));
                    cur[w[0]] = cur[w[1]];
                }
                let last = *seen.last().unwrap();
                steps.push((last, spare));
                cur[last] = cur[spare];
            }
        }

        // Remaining slots form a forest; write a slot only once every slot
        // drawing from it is settled.
        loop {
            let mut progressed = false;
            for x in 0..n {
                if cur[x] == tau[x] {
                    continue;
                }
                let children_done = (0..n).all(|y| y == x || tau[y] != x || cur[y] == tau[y]);
                if !children_done {
                    continue;
                }
                let src = (0..n).find(|&z| cur[z] == tau[x]).expect("value available");
                steps.push((x, src));
                cur[x] = cur[src];
                progressed = true;
            }
            if !progressed {
                break;
            }
        }
        debug_assert_eq!(cur, *tau);
        debug_assert!(steps.len() <= 2 * n);
        Ok(steps)
    }

    /// All transformations of the requested family, in lexicographic order of
    /// their image tables.
    pub fn enumerate(
        n: usize,
        kind: TransformationKind,
    ) -> Result<Vec<Transformation>, TransformError> {
        if n < 2 {
            return Err(TransformError::ArityTooSmall(n));
        }
        let mut out = Vec::new();
        let mut images = vec![0usize; n];
        loop {
            let t = Transformation {
                images: images.clone(),
            };
            let keep = match kind {
                TransformationKind::All => true,
                TransformationKind::NonSurjective => !t.is_permutation(),
                TransformationKind::Permutations => t.is_permutation(),
            };
            if keep {
                out.push(t);
            }
            // odometer over image tables
            let mut pos = n;
            while pos > 0 {
                pos -= 1;
                images[pos] += 1;
                if images[pos] < n {
                    break;
                }
                images[pos] = 0;
                if pos == 0 {
                    return Ok(out);
                }
            }
        }
    }
}

impl std::fmt::Display for Transformation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (k, im) in self.images.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{im}")?;
        }
        write!(f, "]")
    }
}

/// One entry of a [`PermutationChain`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainEntry {
    pub permutation: Transformation,
    /// Index of the entry this one extends; `None` only for the identity.
    pub parent: Option<usize>,
    /// The transposition `(k,l)` with `permutation = parent ∘ [k,l]`.
    pub transposition: Option<(usize, usize)>,
}

/// All `n!` permutations enumerated so that each non-identity entry is a
/// predecessor composed with one transposition.
#[derive(Debug, Clone)]
pub struct PermutationChain {
    arity: usize,
    entries: Vec<ChainEntry>,
}

impl PermutationChain {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn entries(&self) -> &[ChainEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Breadth-first enumeration of all permutations of `n` starting from the
/// identity, extending by transpositions `(k,l)` in lexicographic order, ties
/// broken by first discovery.
pub fn permutation_chain(n: usize) -> Result<PermutationChain, TransformError> {
    if n < 2 {
        return Err(TransformError::ArityTooSmall(n));
    }
    let generators: Vec<(usize, usize)> = (0..n)
        .flat_map(|k| (k + 1..n).map(move |l| (k, l)))
        .collect();

    let mut entries = vec![ChainEntry {
        permutation: Transformation::identity(n),
        parent: None,
        transposition: None,
    }];
    let mut seen: HashMap<Transformation, usize> = HashMap::new();
    seen.insert(Transformation::identity(n), 0);
    let mut queue: VecDeque<usize> = VecDeque::from([0usize]);

    while let Some(idx) = queue.pop_front() {
        for &(k, l) in &generators {
            let next = entries[idx]
                .permutation
                .compose(&Transformation::transposition(n, k, l))
                .expect("same arity");
            if !seen.contains_key(&next) {
                let new_idx = entries.len();
                seen.insert(next.clone(), new_idx);
                entries.push(ChainEntry {
                    permutation: next,
                    parent: Some(idx),
                    transposition: Some((k, l)),
                });
                queue.push_back(new_idx);
            }
        }
    }
    Ok(PermutationChain { arity: n, entries })
}
