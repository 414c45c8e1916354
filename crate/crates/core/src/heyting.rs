//! Finite complete Heyting algebras: construction, validation, implication,
//! down-sets, and the algebra of down-sets `D(H)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Index of an element in its algebra's declaration order.
pub type Elem = usize;

/// A subset of an algebra's elements, stored as a bitmask.
///
/// Algebras are capped at 64 elements so one word always suffices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ElemSet(pub u64);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    pub fn singleton(e: Elem) -> Self {
        ElemSet(1 << e)
    }

    pub fn full(n: usize) -> Self {
        if n == 64 {
            ElemSet(u64::MAX)
        } else {
            ElemSet((1u64 << n) - 1)
        }
    }

    pub fn contains(self, e: Elem) -> bool {
        self.0 >> e & 1 == 1
    }

    pub fn insert(&mut self, e: Elem) {
        self.0 |= 1 << e;
    }

    pub fn union(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 | other.0)
    }

    pub fn inter(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & other.0)
    }

    pub fn is_subset(self, other: ElemSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = Elem> {
        (0..64).filter(move |e| self.contains(*e))
    }
}

impl FromIterator<Elem> for ElemSet {
    fn from_iter<I: IntoIterator<Item = Elem>>(iter: I) -> Self {
        let mut s = ElemSet::EMPTY;
        for e in iter {
            s.insert(e);
        }
        s
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Validation failures of [`build_algebra`]. Witnesses carry element names.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("element list is empty")]
    Empty,
    #[error("too many elements ({0}); at most 64 supported")]
    TooLarge(usize),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}` in order pair")]
    UnknownElement(String),
    #[error("not a poset: `{a}` and `{b}` are order-equivalent but distinct")]
    NotAPoset { a: String, b: String },
    #[error("no {which} element")]
    NoBounds { which: &'static str },
    #[error("not a lattice: `{a}` and `{b}` have no {which}")]
    NotALattice {
        a: String,
        b: String,
        which: &'static str,
    },
    #[error(
        "not a Heyting algebra: adjunction fails at y={y}, x={x}, z={z} \
         (y∧x ≤ z is {lhs}, y ≤ x⇒z is {rhs})"
    )]
    NotHeyting {
        x: String,
        y: String,
        z: String,
        lhs: bool,
        rhs: bool,
    },
}

/// A finite complete Heyting algebra with all derived tables precomputed.
///
/// Immutable after construction; all operations are pure table lookups or
/// folds, so values can be shared freely across threads.
#[derive(Clone, PartialEq, Eq)]
pub struct HeytingAlgebra {
    names: Vec<String>,
    leq: Vec<bool>,
    meet_t: Vec<Elem>,
    join_t: Vec<Elem>,
    imp_t: Vec<Elem>,
    top: Elem,
    bottom: Elem,
}

impl fmt::Debug for HeytingAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HeytingAlgebra({:?})", self.names)
    }
}

/// Builds and fully validates an algebra from element names and a generating
/// set of order pairs. The reflexive-transitive closure is applied first.
pub fn build_algebra<S: AsRef<str>>(
    elements: &[S],
    leq_pairs: &[(S, S)],
) -> Result<HeytingAlgebra, LatticeError> {
    let n = elements.len();
    if n == 0 {
        return Err(LatticeError::Empty);
    }
    if n > 64 {
        return Err(LatticeError::TooLarge(n));
    }
    let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_owned()).collect();
    let mut index = HashMap::new();
    for (i, name) in names.iter().enumerate() {
        if index.insert(name.clone(), i).is_some() {
            return Err(LatticeError::DuplicateElement(name.clone()));
        }
    }

    let mut leq = vec![false; n * n];
    for i in 0..n {
        leq[i * n + i] = true;
    }
    for (a, b) in leq_pairs {
        let ia = *index
            .get(a.as_ref())
            .ok_or_else(|| LatticeError::UnknownElement(a.as_ref().to_owned()))?;
        let ib = *index
            .get(b.as_ref())
            .ok_or_else(|| LatticeError::UnknownElement(b.as_ref().to_owned()))?;
        leq[ia * n + ib] = true;
    }
    // transitive closure
    for k in 0..n {
        for i in 0..n {
            if leq[i * n + k] {
                for j in 0..n {
                    if leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            if leq[i * n + j] && leq[j * n + i] {
                return Err(LatticeError::NotAPoset {
                    a: names[j].clone(),
                    b: names[i].clone(),
                });
            }
        }
    }

    let bottom = (0..n)
        .find(|&b| (0..n).all(|x| leq[b * n + x]))
        .ok_or(LatticeError::NoBounds { which: "bottom" })?;
    let top = (0..n)
        .find(|&t| (0..n).all(|x| leq[x * n + t]))
        .ok_or(LatticeError::NoBounds { which: "top" })?;

    let bound = |x: Elem, y: Elem, lower: bool| -> Option<Elem> {
        let cands: Vec<Elem> = (0..n)
            .filter(|&z| {
                if lower {
                    leq[z * n + x] && leq[z * n + y]
                } else {
                    leq[x * n + z] && leq[y * n + z]
                }
            })
            .collect();
        cands.iter().copied().find(|&m| {
            cands.iter().all(|&c| {
                if lower {
                    leq[c * n + m]
                } else {
                    leq[m * n + c]
                }
            })
        })
    };

    let mut meet_t = vec![0; n * n];
    let mut join_t = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            meet_t[x * n + y] = bound(x, y, true).ok_or(LatticeError::NotALattice {
                a: names[x].clone(),
                b: names[y].clone(),
                which: "greatest lower bound",
            })?;
            join_t[x * n + y] = bound(x, y, false).ok_or(LatticeError::NotALattice {
                a: names[x].clone(),
                b: names[y].clone(),
                which: "least upper bound",
            })?;
        }
    }

    // implication by the supremum formula, then the adjunction law over all triples
    let mut imp_t = vec![0; n * n];
    for x in 0..n {
        for z in 0..n {
            let mut s = bottom;
            for y in 0..n {
                if leq[meet_t[y * n + x] * n + z] {
                    s = join_t[s * n + y];
                }
            }
            imp_t[x * n + z] = s;
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let lhs = leq[meet_t[y * n + x] * n + z];
                let rhs = leq[y * n + imp_t[x * n + z]];
                if lhs != rhs {
                    return Err(LatticeError::NotHeyting {
                        x: names[x].clone(),
                        y: names[y].clone(),
                        z: names[z].clone(),
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }

    Ok(HeytingAlgebra {
        names,
        leq,
        meet_t,
        join_t,
        imp_t,
        top,
        bottom,
    })
}

impl HeytingAlgebra {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty element lists
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.len()
    }

    pub fn name(&self, e: Elem) -> &str {
        &self.names[e]
    }

    pub fn index_of(&self, name: &str) -> Option<Elem> {
        self.names.iter().position(|n| n == name)
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a * self.len() + b]
    }

    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet_t[a * self.len() + b]
    }

    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join_t[a * self.len() + b]
    }

    /// `x ⇒ z`, precomputed from `⋁{y | y∧x ≤ z}`.
    pub fn imp(&self, x: Elem, z: Elem) -> Elem {
        self.imp_t[x * self.len() + z]
    }

    /// `x ⟺ z = (x⇒z) ∧ (z⇒x)`.
    pub fn bi_imp(&self, x: Elem, z: Elem) -> Elem {
        self.meet(self.imp(x, z), self.imp(z, x))
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    /// Supremum of an arbitrary subset; the empty set yields `⊥`.
    pub fn sup(&self, xs: ElemSet) -> Elem {
        xs.iter().fold(self.bottom, |s, x| self.join(s, x))
    }

    /// Infimum of an arbitrary subset; the empty set yields `⊤`.
    pub fn inf(&self, xs: ElemSet) -> Elem {
        xs.iter().fold(self.top, |s, x| self.meet(s, x))
    }

    pub fn is_down_closed(&self, xs: ElemSet) -> bool {
        xs.iter()
            .all(|a| (0..self.len()).all(|b| !self.leq(b, a) || xs.contains(b)))
    }

    /// `X† = {b | ∃a∈X, b ≤ a}`: the smallest down-closed superset of `X`.
    pub fn down_closure(&self, xs: ElemSet) -> DownSet {
        let mut out = ElemSet::EMPTY;
        for a in xs.iter() {
            for b in 0..self.len() {
                if self.leq(b, a) {
                    out.insert(b);
                }
            }
        }
        DownSet { set: out }
    }

    /// `{a}†`, the principal down-set of a single element.
    pub fn principal(&self, a: Elem) -> DownSet {
        self.down_closure(ElemSet::singleton(a))
    }

    /// All down-closed subsets, in ascending bitmask order (the canonical
    /// element order of `D(H)`).
    pub fn all_down_sets(&self) -> Vec<ElemSet> {
        let n = self.len();
        assert!(n < 32, "down-set enumeration needs |H| < 32");
        (0u64..1 << n)
            .map(ElemSet)
            .filter(|s| self.is_down_closed(*s))
            .collect()
    }

    pub fn format_set(&self, xs: ElemSet) -> String {
        let inner: Vec<&str> = xs.iter().map(|e| self.name(e)).collect();
        format!("{{{}}}", inner.join(","))
    }
}

/// A down-closed subset of a specific algebra. Only constructed through
/// closure operators, so the invariant always holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DownSet {
    set: ElemSet,
}

impl DownSet {
    pub fn members(&self) -> ElemSet {
        self.set
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.set.contains(e)
    }

    /// A down-set is principal when it is `{⋁D}†`; the empty set is not
    /// principal since `{⊥}† = {⊥}` is already nonempty.
    pub fn is_principal(&self, algebra: &HeytingAlgebra) -> bool {
        !self.set.is_empty() && self.set.contains(algebra.sup(self.set))
    }
}

/// `D(H)` together with its base algebra and the bidirectional mapping
/// between `D(H)`'s elements and the down-sets of `H` they stand for.
#[derive(Debug, Clone)]
pub struct DownsetAlgebra {
    pub base: Arc<HeytingAlgebra>,
    pub algebra: Arc<HeytingAlgebra>,
    masks: Vec<ElemSet>,
    index: HashMap<u64, Elem>,
}

impl DownsetAlgebra {
    pub fn mask(&self, e: Elem) -> ElemSet {
        self.masks[e]
    }

    pub fn index_of(&self, mask: ElemSet) -> Elem {
        self.index[&mask.0]
    }

    /// The element of `D(H)` standing for `h†`.
    pub fn principal_index(&self, h: Elem) -> Elem {
        self.index_of(self.base.principal(h).members())
    }
}

/// The Heyting algebra of down-sets of `H`, ordered by inclusion with
/// meet `∩` and join `∪`. Built through [`build_algebra`] so it re-runs the
/// full validation suite.
pub fn downset_algebra(base: Arc<HeytingAlgebra>) -> DownsetAlgebra {
    let masks = base.all_down_sets();
    let names: Vec<String> = masks.iter().map(|m| base.format_set(*m)).collect();
    let mut pairs = Vec::new();
    for (i, a) in masks.iter().enumerate() {
        for (j, b) in masks.iter().enumerate() {
            if i != j && a.is_subset(*b) {
                pairs.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    let algebra = build_algebra(&names, &pairs)
        .expect("down-sets of a Heyting algebra always form a Heyting algebra");
    // inclusion order gives ∩/∪ as the bounds; pin that here rather than trust it
    for (i, a) in masks.iter().enumerate() {
        for (j, b) in masks.iter().enumerate() {
            debug_assert_eq!(masks[algebra.meet(i, j)], a.inter(*b));
            debug_assert_eq!(masks[algebra.join(i, j)], a.union(*b));
        }
    }
    let index = masks.iter().enumerate().map(|(i, m)| (m.0, i)).collect();
    DownsetAlgebra {
        base,
        algebra: Arc::new(algebra),
        masks,
        index,
    }
}

/// Witness for a failed `⋁ ⊣ ()†` check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjunctionWitness {
    pub down_set: ElemSet,
    pub element: Elem,
}

/// Verifies `⋁X ≤ h ⟺ X ⊆ h†` for every down-set `X` and element `h`;
/// returns the first violation if any.
pub fn sup_dagger_adjunction(h: &HeytingAlgebra) -> Option<AdjunctionWitness> {
    for x in h.all_down_sets() {
        for e in h.elements() {
            let lhs = h.leq(h.sup(x), e);
            let rhs = x.is_subset(h.principal(e).members());
            if lhs != rhs {
                return Some(AdjunctionWitness {
                    down_set: x,
                    element: e,
                });
            }
        }
    }
    None
}
