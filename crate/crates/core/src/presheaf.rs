//! Finite presheaves over a Heyting algebra: carriers, restriction maps,
//! transformations, covers, matching families, amalgamations, and the sheaf
//! predicate by exhaustive cover enumeration.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::heyting::{Elem, ElemSet, HeytingAlgebra};
use crate::pretrans::same_algebra;
use crate::rel::{FiniteSet, SetRef};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresheafError {
    #[error("carrier at `{level}` misses member index {index}")]
    BadIndex { level: String, index: usize },
    #[error("no function can exist from non-empty `{from}` into empty `{to}`")]
    EmptyTarget { from: String, to: String },
    #[error("restriction {from}->{to} is not derivable from the given maps")]
    Underivable { from: String, to: String },
    #[error(
        "functoriality fails: res_{{{k}≤{l}}}∘res_{{{l}≤{h}}} ≠ res_{{{k}≤{h}}} at member `{x}`"
    )]
    Functoriality {
        h: String,
        l: String,
        k: String,
        x: String,
    },
    #[error("`{parts}` does not cover `{of}`")]
    NotACover { parts: String, of: String },
    #[error("duplicate restriction {from}->{to}")]
    DuplicateRestriction { from: String, to: String },
    #[error("restriction {from}->{to} relates elements outside the order")]
    NotAPair { from: String, to: String },
}

/// A finite presheaf `F: H^op → Set`. Restriction tables are complete and
/// validated at construction, so lookups never fail.
#[derive(Clone, PartialEq, Eq)]
pub struct Presheaf {
    label: String,
    algebra: Arc<HeytingAlgebra>,
    carriers: Vec<SetRef>,
    /// res[h*n+k] for k < h: carrier(h) index → carrier(k) index.
    res: Vec<Vec<usize>>,
}

impl fmt::Debug for Presheaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Presheaf {} over {:?}", self.label, self.algebra)
    }
}

impl Presheaf {
    /// Builds from a complete restriction table and validates functoriality
    /// exhaustively.
    pub fn new(
        label: impl Into<String>,
        algebra: Arc<HeytingAlgebra>,
        carriers: Vec<SetRef>,
        res: HashMap<(Elem, Elem), Vec<usize>>,
    ) -> Result<Self, PresheafError> {
        let n = algebra.len();
        assert_eq!(carriers.len(), n);
        let mut table = vec![Vec::new(); n * n];
        for h in 0..n {
            for k in 0..n {
                if k != h && algebra.leq(k, h) {
                    let map = res.get(&(h, k)).ok_or_else(|| PresheafError::Underivable {
                        from: algebra.name(h).to_owned(),
                        to: algebra.name(k).to_owned(),
                    })?;
                    if map.len() != carriers[h].len() {
                        return Err(PresheafError::BadIndex {
                            level: algebra.name(h).to_owned(),
                            index: map.len(),
                        });
                    }
                    if !carriers[h].is_empty() && carriers[k].is_empty() {
                        return Err(PresheafError::EmptyTarget {
                            from: algebra.name(h).to_owned(),
                            to: algebra.name(k).to_owned(),
                        });
                    }
                    for &image in map {
                        if image >= carriers[k].len() {
                            return Err(PresheafError::BadIndex {
                                level: algebra.name(k).to_owned(),
                                index: image,
                            });
                        }
                    }
                    table[h * n + k] = map.clone();
                }
            }
        }
        let ps = Presheaf {
            label: label.into(),
            algebra,
            carriers,
            res: table,
        };
        ps.validate()?;
        Ok(ps)
    }

    /// Checks both functor equations over every chain `k ≤ l ≤ h`.
    pub fn validate(&self) -> Result<(), PresheafError> {
        let h_alg = &self.algebra;
        for h in h_alg.elements() {
            for l in h_alg.elements() {
                for k in h_alg.elements() {
                    if h_alg.leq(k, l) && h_alg.leq(l, h) {
                        for x in 0..self.carriers[h].len() {
                            let two_step = self.restrict(l, k, self.restrict(h, l, x));
                            let one_step = self.restrict(h, k, x);
                            if two_step != one_step {
                                return Err(PresheafError::Functoriality {
                                    h: h_alg.name(h).to_owned(),
                                    l: h_alg.name(l).to_owned(),
                                    k: h_alg.name(k).to_owned(),
                                    x: self.carriers[h].member(x).to_owned(),
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn algebra(&self) -> &Arc<HeytingAlgebra> {
        &self.algebra
    }

    pub fn carrier(&self, h: Elem) -> &SetRef {
        &self.carriers[h]
    }

    /// `x|_k` for `x ∈ F(h)`, `k ≤ h`.
    pub fn restrict(&self, h: Elem, k: Elem, x: usize) -> usize {
        if h == k {
            x
        } else {
            self.res[h * self.algebra.len() + k][x]
        }
    }

    /// All matching families for an arbitrary subset of elements, enumerated
    /// over the subset's maximal elements (lower values are forced) in
    /// lexicographic order.
    pub fn matching_families(&self, parts: ElemSet) -> Vec<MatchingFamily> {
        let h_alg = &self.algebra;
        let maximals: Vec<Elem> = parts
            .iter()
            .filter(|&m| parts.iter().all(|o| o == m || !h_alg.leq(m, o)))
            .collect();
        let mut out = Vec::new();
        let mut choice: Vec<usize> = Vec::new();
        self.family_search(parts, &maximals, &mut choice, &mut out);
        out
    }

    fn family_search(
        &self,
        parts: ElemSet,
        maximals: &[Elem],
        choice: &mut Vec<usize>,
        out: &mut Vec<MatchingFamily>,
    ) {
        let h_alg = &self.algebra;
        if choice.len() == maximals.len() {
            // extend downward: every non-maximal member is forced by any
            // maximal above it (well-defined thanks to pairwise agreement)
            let mut values = Vec::new();
            for j in parts.iter() {
                if let Some(pos) = maximals.iter().position(|&m| m == j) {
                    values.push((j, choice[pos]));
                } else {
                    let (pos, m) = maximals
                        .iter()
                        .enumerate()
                        .find(|(_, &m)| h_alg.leq(j, m))
                        .map(|(p, m)| (p, *m))
                        .expect("finite posets have maximal elements above every member");
                    values.push((j, self.restrict(m, j, choice[pos])));
                }
            }
            out.push(MatchingFamily { parts, values });
            return;
        }
        let m = maximals[choice.len()];
        for x in 0..self.carriers[m].len() {
            let compatible = choice.iter().enumerate().all(|(i, &y)| {
                let other = maximals[i];
                let meet = h_alg.meet(m, other);
                self.restrict(m, meet, x) == self.restrict(other, meet, y)
            });
            if compatible {
                choice.push(x);
                self.family_search(parts, maximals, choice, out);
                choice.pop();
            }
        }
    }

    /// All `x ∈ F(of)` restricting to the family on every part; errors when
    /// the family's parts do not join to `of`.
    pub fn amalgamations(
        &self,
        family: &MatchingFamily,
        of: Elem,
    ) -> Result<Vec<usize>, PresheafError> {
        if self.algebra.sup(family.parts) != of {
            return Err(PresheafError::NotACover {
                parts: self.algebra.format_set(family.parts),
                of: self.algebra.name(of).to_owned(),
            });
        }
        Ok((0..self.carriers[of].len())
            .filter(|&x| {
                family
                    .values
                    .iter()
                    .all(|&(k, xk)| self.restrict(of, k, x) == xk)
            })
            .collect())
    }

    /// Decides sheafhood by quantifying over every subset `A` (with
    /// `h = ⋁A`, including the empty cover of `⊥`) and every matching
    /// family over it.
    pub fn is_sheaf(&self) -> Result<(), SheafCounterexample> {
        let n = self.algebra.len();
        assert!(n < 32, "sheaf check needs |H| < 32");
        for mask in 0u64..1 << n {
            let parts = ElemSet(mask);
            let of = self.algebra.sup(parts);
            for family in self.matching_families(parts) {
                let count = self
                    .amalgamations(&family, of)
                    .expect("parts always cover their own supremum")
                    .len();
                if count != 1 {
                    return Err(SheafCounterexample {
                        cover: Cover { of, parts },
                        family,
                        count,
                    });
                }
            }
        }
        Ok(())
    }

    /// `x† = ⟨x|_k⟩_{k ≤ h}`: the matching family an element induces on its
    /// principal down-set.
    pub fn element_dagger(&self, h: Elem, x: usize) -> MatchingFamily {
        let parts = self.algebra.principal(h).members();
        let values = parts.iter().map(|k| (k, self.restrict(h, k, x))).collect();
        MatchingFamily { parts, values }
    }

    pub fn describe_family(&self, family: &MatchingFamily) -> String {
        let inner: Vec<String> = family
            .values
            .iter()
            .map(|&(k, x)| format!("{}:{}", self.algebra.name(k), self.carriers[k].member(x)))
            .collect();
        format!("<{}>", inner.join(","))
    }
}

/// A subset `A` with `⋁A = of`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cover {
    pub of: Elem,
    pub parts: ElemSet,
}

impl Cover {
    pub fn new(algebra: &HeytingAlgebra, of: Elem, parts: ElemSet) -> Result<Self, PresheafError> {
        if algebra.sup(parts) != of {
            return Err(PresheafError::NotACover {
                parts: algebra.format_set(parts),
                of: algebra.name(of).to_owned(),
            });
        }
        Ok(Cover { of, parts })
    }
}

/// A compatible choice of one carrier member per part:
/// `x_k|_{k∧l} = x_l|_{k∧l}` for all parts `k`, `l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingFamily {
    parts: ElemSet,
    /// `(k, index into carrier(k))`, ascending in `k`.
    values: Vec<(Elem, usize)>,
}

impl MatchingFamily {
    /// Assembles a family from explicit values (functor images); check with
    /// [`MatchingFamily::is_matching`] when compatibility is not structural.
    pub fn from_values(parts: ElemSet, mut values: Vec<(Elem, usize)>) -> MatchingFamily {
        values.sort_unstable_by_key(|(k, _)| *k);
        debug_assert!(values.iter().map(|(k, _)| *k).eq(parts.iter()));
        MatchingFamily { parts, values }
    }

    pub fn parts(&self) -> ElemSet {
        self.parts
    }

    pub fn values(&self) -> &[(Elem, usize)] {
        &self.values
    }

    pub fn value_at(&self, k: Elem) -> Option<usize> {
        self.values.iter().find(|(e, _)| *e == k).map(|(_, x)| *x)
    }

    /// Drops all components outside `within` (restriction of `Γ(F)`).
    pub fn restricted(&self, within: ElemSet) -> MatchingFamily {
        MatchingFamily {
            parts: self.parts.inter(within),
            values: self
                .values
                .iter()
                .copied()
                .filter(|(k, _)| within.contains(*k))
                .collect(),
        }
    }

    /// Checks the compatibility law against a presheaf (used when families
    /// are assembled by functors rather than enumeration).
    pub fn is_matching(&self, f: &Presheaf) -> bool {
        self.values.iter().all(|&(k, xk)| {
            xk < f.carrier(k).len()
                && self.values.iter().all(|&(l, xl)| {
                    let m = f.algebra().meet(k, l);
                    f.restrict(k, m, xk) == f.restrict(l, m, xl)
                })
        })
    }
}

/// Failure report of [`Presheaf::is_sheaf`]: a cover and family whose
/// amalgamation count differs from one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SheafCounterexample {
    pub cover: Cover,
    pub family: MatchingFamily,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformationError {
    #[error("component at `{level}` has wrong length")]
    BadComponent { level: String },
    #[error("presheaves live over different algebras")]
    AlgebraMismatch,
    #[error("naturality fails at k={k} ≤ h={h}, member `{x}`")]
    Naturality { h: String, k: String, x: String },
}

/// A natural transformation of presheaves over one algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transformation {
    dom: Presheaf,
    cod: Presheaf,
    /// components[h]: carrier index map `dom(h) → cod(h)`.
    components: Vec<Vec<usize>>,
}

impl Transformation {
    pub fn new(
        dom: Presheaf,
        cod: Presheaf,
        components: Vec<Vec<usize>>,
    ) -> Result<Self, TransformationError> {
        if !same_algebra(dom.algebra(), cod.algebra()) {
            return Err(TransformationError::AlgebraMismatch);
        }
        let t = Transformation {
            dom,
            cod,
            components,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), TransformationError> {
        let h_alg = self.dom.algebra();
        for h in h_alg.elements() {
            if self.components[h].len() != self.dom.carrier(h).len() {
                return Err(TransformationError::BadComponent {
                    level: h_alg.name(h).to_owned(),
                });
            }
            for &image in &self.components[h] {
                if image >= self.cod.carrier(h).len() {
                    return Err(TransformationError::BadComponent {
                        level: h_alg.name(h).to_owned(),
                    });
                }
            }
        }
        for h in h_alg.elements() {
            for k in h_alg.elements() {
                if h_alg.leq(k, h) {
                    for x in 0..self.dom.carrier(h).len() {
                        let around = self.cod.restrict(h, k, self.components[h][x]);
                        let across = self.components[k][self.dom.restrict(h, k, x)];
                        if around != across {
                            return Err(TransformationError::Naturality {
                                h: h_alg.name(h).to_owned(),
                                k: h_alg.name(k).to_owned(),
                                x: self.dom.carrier(h).member(x).to_owned(),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn identity(f: &Presheaf) -> Transformation {
        let components = f
            .algebra()
            .elements()
            .map(|h| (0..f.carrier(h).len()).collect())
            .collect();
        Transformation {
            dom: f.clone(),
            cod: f.clone(),
            components,
        }
    }

    pub fn dom(&self) -> &Presheaf {
        &self.dom
    }

    pub fn cod(&self) -> &Presheaf {
        &self.cod
    }

    pub fn apply(&self, h: Elem, x: usize) -> usize {
        self.components[h][x]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn compose(second: &Transformation, first: &Transformation) -> Transformation {
        assert_eq!(second.dom, first.cod, "transformations not composable");
        let components = first
            .components
            .iter()
            .enumerate()
            .map(|(h, comp)| comp.iter().map(|&x| second.components[h][x]).collect())
            .collect();
        Transformation {
            dom: first.dom.clone(),
            cod: second.cod.clone(),
            components,
        }
    }

    /// Is every component a bijection?
    pub fn is_levelwise_bijection(&self) -> bool {
        self.dom.algebra().elements().all(|h| {
            let comp = &self.components[h];
            comp.len() == self.cod.carrier(h).len() && {
                let mut seen = vec![false; comp.len()];
                comp.iter().all(|&x| !std::mem::replace(&mut seen[x], true))
            }
        })
    }
}

/// Convenience for building carriers with the customary `label@level` names.
pub fn level_carrier(presheaf_label: &str, level_name: &str, members: Vec<String>) -> SetRef {
    Arc::new(FiniteSet::new(
        format!("{presheaf_label}@{level_name}"),
        members,
    ))
}
