//! Finite sets and relations with target-first pair storage, composition,
//! converse, and the inclusion order on hom-sets.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// A named finite carrier. Carriers are nominal: two sets with identical
/// members but different labels are different objects.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteSet {
    label: String,
    members: Vec<String>,
}

impl FiniteSet {
    pub fn new(label: impl Into<String>, members: Vec<String>) -> Self {
        let label = label.into();
        for (i, m) in members.iter().enumerate() {
            assert!(
                !members[..i].contains(m),
                "duplicate member `{m}` in carrier `{label}`"
            );
        }
        FiniteSet { label, members }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member(&self, i: usize) -> &str {
        &self.members[i]
    }

    pub fn members(&self) -> &[String] {
        &self.members
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.members.iter().position(|m| m == name)
    }
}

impl fmt::Debug for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.label, self.members)
    }
}

pub type SetRef = Arc<FiniteSet>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelError {
    #[error("carrier mismatch: expected `{expected}`, found `{found}`")]
    CarrierMismatch { expected: String, found: String },
}

pub(crate) fn same_carrier(a: &SetRef, b: &SetRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub(crate) fn require_carrier(expected: &SetRef, found: &SetRef) -> Result<(), RelError> {
    if same_carrier(expected, found) {
        Ok(())
    } else {
        Err(RelError::CarrierMismatch {
            expected: expected.label().to_owned(),
            found: found.label().to_owned(),
        })
    }
}

/// A relation `A → B`, stored as a subset of `B×A`: `bits[b*|A| + a]`.
#[derive(Clone, PartialEq, Eq)]
pub struct Relation {
    source: SetRef,
    target: SetRef,
    bits: Vec<bool>,
}

impl Relation {
    pub fn empty(source: SetRef, target: SetRef) -> Self {
        let bits = vec![false; source.len() * target.len()];
        Relation {
            source,
            target,
            bits,
        }
    }

    pub fn total(source: SetRef, target: SetRef) -> Self {
        let bits = vec![true; source.len() * target.len()];
        Relation {
            source,
            target,
            bits,
        }
    }

    pub fn diagonal(set: SetRef) -> Self {
        let mut r = Relation::empty(set.clone(), set);
        for i in 0..r.source.len() {
            r.set(i, i, true);
        }
        r
    }

    pub fn from_pairs(source: SetRef, target: SetRef, pairs: &[(usize, usize)]) -> Self {
        let mut r = Relation::empty(source, target);
        for &(b, a) in pairs {
            r.set(b, a, true);
        }
        r
    }

    pub fn source(&self) -> &SetRef {
        &self.source
    }

    pub fn target(&self) -> &SetRef {
        &self.target
    }

    pub fn get(&self, b: usize, a: usize) -> bool {
        self.bits[b * self.source.len() + a]
    }

    pub fn set(&mut self, b: usize, a: usize, value: bool) {
        let idx = b * self.source.len() + a;
        self.bits[idx] = value;
    }

    /// Pairs in target-first order, matching the storage convention.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for b in 0..self.target.len() {
            for a in 0..self.source.len() {
                if self.get(b, a) {
                    out.push((b, a));
                }
            }
        }
        out
    }

    /// `(c,a) ∈ S∘R ⟺ ∃b: (c,b) ∈ S and (b,a) ∈ R`.
    pub fn compose(s: &Relation, r: &Relation) -> Result<Relation, RelError> {
        require_carrier(&r.target, &s.source)?;
        let mut out = Relation::empty(r.source.clone(), s.target.clone());
        for c in 0..s.target.len() {
            for a in 0..r.source.len() {
                let hit = (0..r.target.len()).any(|b| s.get(c, b) && r.get(b, a));
                out.set(c, a, hit);
            }
        }
        Ok(out)
    }

    pub fn converse(&self) -> Relation {
        let mut out = Relation::empty(self.target.clone(), self.source.clone());
        for b in 0..self.target.len() {
            for a in 0..self.source.len() {
                out.set(a, b, self.get(b, a));
            }
        }
        out
    }

    /// Inclusion on hom-sets: `R ≤ S` iff every pair of `R` is in `S`.
    pub fn leq(&self, other: &Relation) -> Result<bool, RelError> {
        require_carrier(&self.source, &other.source)?;
        require_carrier(&self.target, &other.target)?;
        Ok(self.bits.iter().zip(&other.bits).all(|(a, b)| !*a || *b))
    }

    /// Is this the graph of a function, i.e. `Δ ≤ R*R` and `RR* ≤ Δ`?
    pub fn is_map(&self) -> bool {
        let conv = self.converse();
        let rstar_r = Relation::compose(&conv, self).unwrap();
        let r_rstar = Relation::compose(self, &conv).unwrap();
        Relation::diagonal(self.source.clone())
            .leq(&rstar_r)
            .unwrap()
            && r_rstar
                .leq(&Relation::diagonal(self.target.clone()))
                .unwrap()
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pretty: Vec<String> = self
            .pairs()
            .iter()
            .map(|(b, a)| format!("({},{})", self.target.member(*b), self.source.member(*a)))
            .collect();
        write!(
            f,
            "{}→{}: {{{}}}",
            self.source.label(),
            self.target.label(),
            pretty.join(",")
        )
    }
}
