//! The axiom catalogs for the five algebra classes, a small term language to
//! state them in, and two inequality checkers: the default atomwise checker
//! (sound for inequalities whose left side is additive in each variable and
//! whose right side is monotone) and an exhaustive oracle that tries every
//! element assignment.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AtomId, AtomStructure, Element};
use crate::transform::Transformation;
use crate::AlgebraClass;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AxiomsError {
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("index {0} out of range for dimension {1}")]
    IndexOutOfRange(usize, usize),
    #[error("inequality `{0}` is not declared atomwise-checkable")]
    NotAtomwise(String),
    #[error("atom count {count} exceeds the exhaustive checker bound {bound}")]
    BoundExceeded { count: usize, bound: usize },
}

/// Terms over the algebra signature. `s^i_j` and `t^i_j` are definable and
/// provided as constructors rather than variants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Zero,
    One,
    Diag(usize, usize),
    Complement(Box<Term>),
    Cyl(usize, Box<Term>),
    Join(Box<Term>, Box<Term>),
    Meet(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn cyl(i: usize, t: Term) -> Term {
        Term::Cyl(i, Box::new(t))
    }

    pub fn complement(t: Term) -> Term {
        Term::Complement(Box::new(t))
    }

    pub fn join(a: Term, b: Term) -> Term {
        Term::Join(Box::new(a), Box::new(b))
    }

    pub fn meet(a: Term, b: Term) -> Term {
        Term::Meet(Box::new(a), Box::new(b))
    }

    /// `s^i_j t`: `t` itself when `i = j`, otherwise `c_i (t · d_ij)`.
    pub fn subst(i: usize, j: usize, t: Term) -> Term {
        if i == j {
            t
        } else {
            Term::cyl(i, Term::meet(t, Term::Diag(i, j)))
        }
    }

    /// `t^i_j t = c_i t · d_ij` for `i ≠ j`, and `t` itself when `i = j`.
    pub fn atom_subst(i: usize, j: usize, t: Term) -> Term {
        if i == j {
            t
        } else {
            Term::meet(Term::cyl(i, t), Term::Diag(i, j))
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Zero | Term::One | Term::Diag(..) => {}
            Term::Complement(t) | Term::Cyl(_, t) => t.collect_variables(out),
            Term::Join(a, b) | Term::Meet(a, b) => {
                a.collect_variables(out);
                b.collect_variables(out);
            }
        }
    }
}

impl std::fmt::Display for Term {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Zero => write!(f, "0"),
            Term::One => write!(f, "1"),
            Term::Diag(i, j) => write!(f, "d{i}{j}"),
            Term::Complement(t) => write!(f, "-({t})"),
            Term::Cyl(i, t) => write!(f, "c{i}({t})"),
            Term::Join(a, b) => write!(f, "({a} + {b})"),
            Term::Meet(a, b) => write!(f, "({a} · {b})"),
        }
    }
}

/// An inequality `lhs ≤ rhs`. Equations appear in catalogs split into the two
/// directions. `atomwise_valid` declares that the left side is additive in
/// each variable and the right side monotone, which makes the atomwise check
/// equivalent to full validity.
#[derive(Debug, Clone)]
pub struct Inequality {
    pub name: String,
    pub lhs: Term,
    pub rhs: Term,
    pub atomwise_valid: bool,
}

impl Inequality {
    fn new(name: String, lhs: Term, rhs: Term) -> Inequality {
        Inequality {
            name,
            lhs,
            rhs,
            atomwise_valid: true,
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut vars = self.lhs.variables();
        vars.extend(self.rhs.variables());
        vars
    }
}

pub fn eval_term(
    a: &AtomStructure,
    t: &Term,
    env: &BTreeMap<String, Element>,
) -> Result<Element, AxiomsError> {
    match t {
        Term::Var(v) => env
            .get(v)
            .cloned()
            .ok_or_else(|| AxiomsError::UnboundVariable(v.clone())),
        Term::Zero => Ok(a.empty_element()),
        Term::One => Ok(a.full_element()),
        Term::Diag(i, j) => {
            check_index(a, *i)?;
            check_index(a, *j)?;
            Ok(a.diag(*i, *j).clone())
        }
        Term::Complement(t) => Ok(eval_term(a, t, env)?.complement()),
        Term::Cyl(i, t) => {
            check_index(a, *i)?;
            Ok(a.cylindrify(*i, &eval_term(a, t, env)?))
        }
        Term::Join(x, y) => Ok(eval_term(a, x, env)?.union(&eval_term(a, y, env)?)),
        Term::Meet(x, y) => Ok(eval_term(a, x, env)?.intersect(&eval_term(a, y, env)?)),
    }
}

fn check_index(a: &AtomStructure, i: usize) -> Result<(), AxiomsError> {
    if i < a.dimension() {
        Ok(())
    } else {
        Err(AxiomsError::IndexOutOfRange(i, a.dimension()))
    }
}

/// Checks the inequality over all assignments of single atoms to variables.
/// Returns the first failing assignment, or `None` if every one passes.
pub fn holds_atomwise(
    a: &AtomStructure,
    ineq: &Inequality,
) -> Result<Option<BTreeMap<String, AtomId>>, AxiomsError> {
    if !ineq.atomwise_valid {
        return Err(AxiomsError::NotAtomwise(ineq.name.clone()));
    }
    let vars: Vec<String> = ineq.variables().into_iter().collect();
    let count = a.atom_count();
    if count == 0 && !vars.is_empty() {
        return Ok(None);
    }
    let mut assignment = vec![0usize; vars.len()];
    loop {
        let env: BTreeMap<String, Element> = vars
            .iter()
            .zip(&assignment)
            .map(|(v, &at)| (v.clone(), a.atom_element(at)))
            .collect();
        let lhs = eval_term(a, &ineq.lhs, &env)?;
        let rhs = eval_term(a, &ineq.rhs, &env)?;
        if !lhs.is_subset_of(&rhs) {
            return Ok(Some(
                vars.iter()
                    .cloned()
                    .zip(assignment.iter().copied())
                    .collect(),
            ));
        }
        // odometer; a variable-free inequality is checked exactly once
        let mut pos = vars.len();
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            assignment[pos] += 1;
            if assignment[pos] < count {
                break;
            }
            assignment[pos] = 0;
        }
    }
}

/// Checks the inequality over every assignment of arbitrary elements to
/// variables. Exponential in the atom count; refuses to run past `bound`.
pub fn holds_exhaustive(
    a: &AtomStructure,
    ineq: &Inequality,
    bound: usize,
) -> Result<Option<BTreeMap<String, Vec<AtomId>>>, AxiomsError> {
    let count = a.atom_count();
    if count > bound || count >= 64 {
        return Err(AxiomsError::BoundExceeded {
            count,
            bound: bound.min(63),
        });
    }
    let vars: Vec<String> = ineq.variables().into_iter().collect();
    let subsets: u64 = 1u64 << count;
    let mut assignment = vec![0u64; vars.len()];
    loop {
        let env: BTreeMap<String, Element> = vars
            .iter()
            .zip(&assignment)
            .map(|(v, &bits)| {
                (
                    v.clone(),
                    Element::from_atoms(count, (0..count).filter(|k| bits & (1 << k) != 0)),
                )
            })
            .collect();
        let lhs = eval_term(a, &ineq.lhs, &env)?;
        let rhs = eval_term(a, &ineq.rhs, &env)?;
        if !lhs.is_subset_of(&rhs) {
            return Ok(Some(
                vars.iter()
                    .zip(&assignment)
                    .map(|(v, &bits)| {
                        (
                            v.clone(),
                            (0..count).filter(|k| bits & (1 << k) != 0).collect(),
                        )
                    })
                    .collect(),
            ));
        }
        let mut pos = vars.len();
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            assignment[pos] += 1;
            if assignment[pos] < subsets {
                break;
            }
            assignment[pos] = 0;
        }
    }
}

/// The finite part of a class's axiom catalog plus whether the class also
/// demands instances of the infinite schema.
#[derive(Debug, Clone)]
pub struct Catalog {
    pub axioms: Vec<Inequality>,
    pub includes_ax7: bool,
}

fn equation(out: &mut Vec<Inequality>, name: &str, lhs: Term, rhs: Term) {
    out.push(Inequality::new(
        format!("{name}.le"),
        lhs.clone(),
        rhs.clone(),
    ));
    out.push(Inequality::new(format!("{name}.ge"), rhs, lhs));
}

/// Builds the axiom list for a class at dimension `n`.
///
/// The Boolean axioms hold structurally in an atom-set representation and are
/// not listed. The two "minus" classes share the finite catalog of their base
/// class with the schema switched off.
pub fn catalog(klass: AlgebraClass, n: usize) -> Result<Catalog, AxiomsError> {
    if n < 2 {
        return Err(AxiomsError::DimensionTooSmall(n));
    }
    let x = || Term::var("x");
    let y = || Term::var("y");
    let mut axioms = Vec::new();

    for i in 0..n {
        axioms.push(Inequality::new(
            format!("Ax1[i={i}]"),
            Term::cyl(i, Term::Zero),
            Term::Zero,
        ));
    }
    for i in 0..n {
        axioms.push(Inequality::new(
            format!("Ax2[i={i}]"),
            x(),
            Term::cyl(i, x()),
        ));
    }
    for i in 0..n {
        equation(
            &mut axioms,
            &format!("Ax3[i={i}]"),
            Term::cyl(i, Term::meet(x(), Term::cyl(i, y()))),
            Term::meet(Term::cyl(i, x()), Term::cyl(i, y())),
        );
    }
    for i in 0..n {
        axioms.push(Inequality::new(
            format!("Ax4[i={i}]"),
            Term::One,
            Term::Diag(i, i),
        ));
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                axioms.push(Inequality::new(
                    format!("Ax5[i={i},j={j},k={k}].prod"),
                    Term::meet(Term::Diag(i, k), Term::Diag(k, j)),
                    Term::Diag(i, j),
                ));
                equation(
                    &mut axioms,
                    &format!("Ax5[i={i},j={j},k={k}].sym"),
                    Term::Diag(i, j),
                    Term::Diag(j, i),
                );
                equation(
                    &mut axioms,
                    &format!("Ax5[i={i},j={j},k={k}].cyl"),
                    Term::Diag(j, i),
                    Term::cyl(k, Term::Diag(j, i)),
                );
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            axioms.push(Inequality::new(
                format!("Ax6[i={i},j={j}]"),
                Term::meet(
                    Term::cyl(i, Term::meet(x(), Term::Diag(i, j))),
                    Term::Diag(i, j),
                ),
                x(),
            ));
        }
    }

    let dc_like = matches!(
        klass,
        AlgebraClass::Dc | AlgebraClass::Sc | AlgebraClass::DcMinus | AlgebraClass::ScMinus
    );
    if dc_like {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    axioms.push(Inequality::new(
                        format!("Ax8[i={i},j={j},k={k}]"),
                        Term::meet(Term::cyl(j, Term::cyl(i, x())), Term::Diag(j, k)),
                        Term::cyl(i, Term::cyl(j, x())),
                    ));
                    equation(
                        &mut axioms,
                        &format!("Ax9[i={i},j={j},k={k}]"),
                        Term::Diag(i, j),
                        Term::cyl(k, Term::meet(Term::Diag(i, k), Term::Diag(k, j))),
                    );
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for m in 0..n {
                        if k == i || k == j || k == m || m == i || m == j {
                            continue;
                        }
                        let base = Term::cyl(k, x());
                        equation(
                            &mut axioms,
                            &format!("Ax10[i={i},j={j},k={k},m={m}]"),
                            Term::subst(
                                k,
                                i,
                                Term::subst(
                                    i,
                                    j,
                                    Term::subst(j, m, Term::subst(m, k, base.clone())),
                                ),
                            ),
                            Term::subst(
                                k,
                                m,
                                Term::subst(m, i, Term::subst(i, j, Term::subst(j, k, base))),
                            ),
                        );
                    }
                }
            }
        }
    }

    let sc_like = matches!(klass, AlgebraClass::Sc | AlgebraClass::ScMinus);
    if sc_like {
        if n == 2 {
            // x · -d01 ≤ c0 c1 (-d01 · s^0_1 c1 x · s^1_0 c0 x)
            let inner = Term::meet(
                Term::complement(Term::Diag(0, 1)),
                Term::meet(
                    Term::subst(0, 1, Term::cyl(1, x())),
                    Term::subst(1, 0, Term::cyl(0, x())),
                ),
            );
            axioms.push(Inequality::new(
                "Ax11".to_string(),
                Term::meet(x(), Term::complement(Term::Diag(0, 1))),
                Term::cyl(0, Term::cyl(1, inner)),
            ));
        } else {
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let mut body = Term::meet(
                        Term::subst(i, j, Term::cyl(j, x())),
                        Term::subst(j, i, Term::cyl(i, x())),
                    );
                    for k in 0..n {
                        if k == i || k == j {
                            continue;
                        }
                        body = Term::meet(
                            body,
                            Term::subst(
                                k,
                                i,
                                Term::subst(i, j, Term::subst(j, k, Term::cyl(k, x()))),
                            ),
                        );
                    }
                    axioms.push(Inequality::new(
                        format!("Ax12[i={i},j={j}]"),
                        x(),
                        Term::cyl(i, Term::cyl(j, body)),
                    ));
                }
            }
        }
    }

    Ok(Catalog {
        axioms,
        includes_ax7: klass.includes_ax7(),
    })
}

/// How the step-zero side condition of the schema is treated when generating
/// instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ax7Mode {
    /// Enforce the condition only for steps `1 ≤ t < m`.
    SkipStepZero,
    /// Enforce it for every `0 ≤ t < m`; at `t = 0` the empty composition is
    /// the identity, which forces `k_1` to equal the target index.
    IncludeStepZero,
}

impl Ax7Mode {
    pub fn name(self) -> &'static str {
        match self {
            Ax7Mode::SkipStepZero => "skip-t0",
            Ax7Mode::IncludeStepZero => "include-t0",
        }
    }

    pub fn parse(s: &str) -> Option<Ax7Mode> {
        match s {
            "skip-t0" => Some(Ax7Mode::SkipStepZero),
            "include-t0" => Some(Ax7Mode::IncludeStepZero),
            _ => None,
        }
    }
}

/// One instance of the schema
/// `s^{i_m}_{j_m} c_{k_m} ⋯ s^{i_1}_{j_1} c_{k_1} x · Π{d_{l,τ(l)} : l ∈ K} ≤ c_i x`
/// with `τ = [i_m/j_m] ∘ ⋯ ∘ [i_1/j_1]` and `K = {i_1…i_m, k_1…k_m} \ {i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ax7Instance {
    pub arity: usize,
    pub i_seq: Vec<usize>,
    pub j_seq: Vec<usize>,
    pub k_seq: Vec<usize>,
    pub target: usize,
}

impl Ax7Instance {
    pub fn depth(&self) -> usize {
        self.i_seq.len()
    }

    /// `[i_m/j_m] ∘ ⋯ ∘ [i_1/j_1]`.
    pub fn tau(&self) -> Transformation {
        let mut acc = Transformation::identity(self.arity);
        for t in 0..self.depth() {
            let step = Transformation::replacement(self.arity, self.i_seq[t], self.j_seq[t]);
            acc = step.compose(&acc).expect("same arity");
        }
        acc
    }

    pub fn index_pool(&self) -> BTreeSet<usize> {
        self.i_seq
            .iter()
            .chain(self.k_seq.iter())
            .copied()
            .filter(|&l| l != self.target)
            .collect()
    }

    /// Whether the side condition holds under `mode`: for each checked step
    /// `t`, `k_{t+1} ∉ τ_t* K` where `τ_t` composes the first `t` replacements.
    pub fn side_condition_holds(&self, mode: Ax7Mode) -> bool {
        let pool = self.index_pool();
        let start = match mode {
            Ax7Mode::SkipStepZero => 1,
            Ax7Mode::IncludeStepZero => 0,
        };
        let mut tau_t = Transformation::identity(self.arity);
        for t in 0..self.depth() {
            if t >= start {
                let image: BTreeSet<usize> = pool.iter().map(|&l| tau_t.image(l)).collect();
                if image.contains(&self.k_seq[t]) {
                    return false;
                }
            }
            if t + 1 < self.depth() {
                let step = Transformation::replacement(self.arity, self.i_seq[t], self.j_seq[t]);
                tau_t = step.compose(&tau_t).expect("same arity");
            }
        }
        true
    }

    pub fn name(&self) -> String {
        let mut parts = Vec::new();
        for t in 0..self.depth() {
            parts.push(format!(
                "{},{},{}",
                self.i_seq[t], self.j_seq[t], self.k_seq[t]
            ));
        }
        format!(
            "Ax7[m={};{};i={}]",
            self.depth(),
            parts.join(";"),
            self.target
        )
    }

    pub fn inequality(&self) -> Inequality {
        let mut lhs = Term::var("x");
        for t in 0..self.depth() {
            lhs = Term::subst(self.i_seq[t], self.j_seq[t], Term::cyl(self.k_seq[t], lhs));
        }
        let tau = self.tau();
        for l in self.index_pool() {
            lhs = Term::meet(lhs, Term::Diag(l, tau.image(l)));
        }
        Inequality::new(self.name(), lhs, Term::cyl(self.target, Term::var("x")))
    }
}

/// All schema instances with `1 ≤ m ≤ m_max` whose side condition holds under
/// `mode`, ordered by depth and then by the odometer over
/// `(i_1, j_1, k_1, …, i_m, j_m, k_m, target)`. The output for a smaller
/// `m_max` is a prefix of the output for a larger one.
pub fn ax7_instances(n: usize, m_max: usize, mode: Ax7Mode) -> Vec<Ax7Instance> {
    let mut out = Vec::new();
    for m in 1..=m_max {
        let digits = 3 * m + 1;
        let mut tuple = vec![0usize; digits];
        'odometer: loop {
            let inst = Ax7Instance {
                arity: n,
                i_seq: (0..m).map(|t| tuple[3 * t]).collect(),
                j_seq: (0..m).map(|t| tuple[3 * t + 1]).collect(),
                k_seq: (0..m).map(|t| tuple[3 * t + 2]).collect(),
                target: tuple[digits - 1],
            };
            if inst.side_condition_holds(mode) {
                out.push(inst);
            }
            let mut pos = digits;
            loop {
                if pos == 0 {
                    break 'odometer;
                }
                pos -= 1;
                tuple[pos] += 1;
                if tuple[pos] < n {
                    break;
                }
                tuple[pos] = 0;
            }
        }
    }
    out
}

/// A generated, compiled batch of schema instances, reusable across
/// structures of the same dimension.
#[derive(Debug, Clone)]
pub struct Ax7Set {
    pub mode: Ax7Mode,
    pub depth: usize,
    entries: Vec<(Ax7Instance, Inequality)>,
}

impl Ax7Set {
    pub fn generate(n: usize, depth: usize, mode: Ax7Mode) -> Ax7Set {
        let entries = ax7_instances(n, depth, mode)
            .into_iter()
            .map(|i| {
                let q = i.inequality();
                (i, q)
            })
            .collect();
        Ax7Set {
            mode,
            depth,
            entries,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(Ax7Instance, Inequality)] {
        &self.entries
    }
}

pub const DEFAULT_AX7_DEPTH: usize = 3;
/// Shipped default for the schema's side condition. The permissive skip-t0
/// reading admits instances that fail on honest set algebras, so the
/// step-zero check stays on; see the soundness suite.
pub const DEFAULT_AX7_MODE: Ax7Mode = Ax7Mode::IncludeStepZero;
pub const DEFAULT_ORACLE_BOUND: usize = 10;

#[derive(Debug, Clone)]
pub struct ValidationOptions {
    pub ax7_depth: usize,
    pub ax7_mode: Ax7Mode,
    /// Cross-check every catalog axiom with the exhaustive oracle and record
    /// disagreements (structures above `oracle_bound` atoms are rejected).
    pub use_oracle: bool,
    pub oracle_bound: usize,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions {
            ax7_depth: DEFAULT_AX7_DEPTH,
            ax7_mode: DEFAULT_AX7_MODE,
            use_oracle: false,
            oracle_bound: DEFAULT_ORACLE_BOUND,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomResult {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Ax7Report {
    pub mode: String,
    pub depth: usize,
    pub instance_count: usize,
    pub failures: Vec<AxiomResult>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub klass: String,
    pub dimension: usize,
    pub atom_count: usize,
    pub wellformed: Vec<String>,
    pub axioms: Vec<AxiomResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ax7: Option<Ax7Report>,
    pub pass: bool,
}

impl ValidationReport {
    /// Names of the failing axioms (wellformedness violations excluded).
    pub fn failing_axioms(&self) -> Vec<&str> {
        let mut out: Vec<&str> = self
            .axioms
            .iter()
            .filter(|r| !r.pass)
            .map(|r| r.name.as_str())
            .collect();
        if let Some(ax7) = &self.ax7 {
            out.extend(ax7.failures.iter().map(|r| r.name.as_str()));
        }
        out
    }
}

fn atom_env_string(env: &BTreeMap<String, AtomId>) -> String {
    env.iter()
        .map(|(v, a)| format!("{v}={a}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn check_one(a: &AtomStructure, ineq: &Inequality, opts: &ValidationOptions) -> AxiomResult {
    let atomwise = holds_atomwise(a, ineq);
    match atomwise {
        Ok(None) => {
            if opts.use_oracle {
                match holds_exhaustive(a, ineq, opts.oracle_bound) {
                    Ok(None) => {}
                    Ok(Some(cx)) => {
                        return AxiomResult {
                            name: ineq.name.clone(),
                            pass: false,
                            counterexample: Some(format!(
                                "oracle disagreement: exhaustive found {cx:?}"
                            )),
                        }
                    }
                    Err(e) => {
                        return AxiomResult {
                            name: ineq.name.clone(),
                            pass: false,
                            counterexample: Some(format!("oracle unavailable: {e}")),
                        }
                    }
                }
            }
            AxiomResult {
                name: ineq.name.clone(),
                pass: true,
                counterexample: None,
            }
        }
        Ok(Some(env)) => AxiomResult {
            name: ineq.name.clone(),
            pass: false,
            counterexample: Some(atom_env_string(&env)),
        },
        Err(e) => AxiomResult {
            name: ineq.name.clone(),
            pass: false,
            counterexample: Some(format!("checker error: {e}")),
        },
    }
}

/// Validates a structure against a class: wellformedness, the finite catalog,
/// and (for classes that include it) schema instances up to the configured
/// depth. A pre-generated [`Ax7Set`] can be supplied to amortize instance
/// generation across many structures of the same dimension.
pub fn validate_with_ax7(
    a: &AtomStructure,
    klass: AlgebraClass,
    opts: &ValidationOptions,
    ax7: Option<&Ax7Set>,
) -> ValidationReport {
    let wellformed: Vec<String> = a.wellformed().iter().map(|v| v.to_string()).collect();
    let cat = catalog(klass, a.dimension()).expect("dimension checked by AtomStructure");
    let axioms: Vec<AxiomResult> = cat.axioms.iter().map(|q| check_one(a, q, opts)).collect();

    let ax7_report = if cat.includes_ax7 && opts.ax7_depth > 0 {
        let generated;
        let set = match ax7 {
            Some(s) => s,
            None => {
                generated = Ax7Set::generate(a.dimension(), opts.ax7_depth, opts.ax7_mode);
                &generated
            }
        };
        let mut failures = Vec::new();
        for (_, ineq) in set.entries() {
            let r = check_one(a, ineq, opts);
            if !r.pass {
                failures.push(r);
            }
        }
        Some(Ax7Report {
            mode: set.mode.name().to_string(),
            depth: set.depth,
            instance_count: set.len(),
            pass: failures.is_empty(),
            failures,
        })
    } else {
        None
    };

    let pass = wellformed.is_empty()
        && axioms.iter().all(|r| r.pass)
        && ax7_report.as_ref().map(|r| r.pass).unwrap_or(true);
    ValidationReport {
        klass: klass.name().to_string(),
        dimension: a.dimension(),
        atom_count: a.atom_count(),
        wellformed,
        axioms,
        ax7: ax7_report,
        pass,
    }
}

pub fn validate(
    a: &AtomStructure,
    klass: AlgebraClass,
    opts: &ValidationOptions,
) -> ValidationReport {
    validate_with_ax7(a, klass, opts, None)
}
