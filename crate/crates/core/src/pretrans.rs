//! Pre-transformations: `H`-indexed families of relations, the order- and
//! infima-preserving composition modes, involution, the matrix normal form,
//! and the object/morphism validity predicates that carve out relational
//! presheaves and relational sheaves.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::heyting::{Elem, ElemSet, HeytingAlgebra};
use crate::rel::{require_carrier, same_carrier, RelError, Relation, SetRef};

pub(crate) fn same_algebra(a: &Arc<HeytingAlgebra>, b: &Arc<HeytingAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Which composition a family is used with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Ord,
    Inf,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Ord => write!(f, "Ord"),
            Mode::Inf => write!(f, "Inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PtError {
    #[error(transparent)]
    Carrier(#[from] RelError),
    #[error("pre-transformations live over different algebras")]
    AlgebraMismatch,
    #[error("mode error: {0}")]
    Mode(String),
}

/// Per-fiber classification: a family is order-preserving when every
/// fiber is down-closed and infima-preserving when every fiber is a
/// principal down-set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Flavor {
    pub order_preserving: bool,
    pub infima_preserving: bool,
}

/// An `H`-indexed family of relations `A → B`, stored fiber-first:
/// `fiber(b,a) = {h | τ_h(b,a) = 1}`.
#[derive(Clone)]
pub struct PreTransformation {
    algebra: Arc<HeytingAlgebra>,
    source: SetRef,
    target: SetRef,
    fibers: Vec<ElemSet>,
}

impl PartialEq for PreTransformation {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra)
            && same_carrier(&self.source, &other.source)
            && same_carrier(&self.target, &other.target)
            && self.fibers == other.fibers
    }
}

impl Eq for PreTransformation {}

impl fmt::Debug for PreTransformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "PT {}→{} over {:?}:",
            self.source.label(),
            self.target.label(),
            self.algebra
        )?;
        for b in 0..self.target.len() {
            for a in 0..self.source.len() {
                writeln!(
                    f,
                    "  ({},{}) ↦ {}",
                    self.target.member(b),
                    self.source.member(a),
                    self.algebra.format_set(self.fiber(b, a))
                )?;
            }
        }
        Ok(())
    }
}

impl PreTransformation {
    pub fn new(
        algebra: Arc<HeytingAlgebra>,
        source: SetRef,
        target: SetRef,
        fibers: Vec<ElemSet>,
    ) -> Self {
        assert_eq!(fibers.len(), source.len() * target.len());
        let universe = ElemSet::full(algebra.len());
        for f in &fibers {
            assert!(
                f.is_subset(universe),
                "fiber references elements outside the algebra"
            );
        }
        PreTransformation {
            algebra,
            source,
            target,
            fibers,
        }
    }

    pub fn empty(algebra: Arc<HeytingAlgebra>, source: SetRef, target: SetRef) -> Self {
        let fibers = vec![ElemSet::EMPTY; source.len() * target.len()];
        PreTransformation::new(algebra, source, target, fibers)
    }

    /// The identity of `PT_Ord`: the diagonal relation at every level, i.e.
    /// diagonal fibers all of `H` and empty fibers elsewhere.
    pub fn identity(algebra: Arc<HeytingAlgebra>, carrier: SetRef) -> Self {
        let mut pt = PreTransformation::empty(algebra.clone(), carrier.clone(), carrier);
        for i in 0..pt.source.len() {
            pt.set_fiber(i, i, ElemSet::full(algebra.len()));
        }
        pt
    }

    /// The identity of `PT_inf`: matrix `⊤` on the diagonal and `⊥` off it
    /// (empty fibers are not principal, so the Ord identity does not work
    /// here).
    pub fn identity_inf(algebra: Arc<HeytingAlgebra>, carrier: SetRef) -> Self {
        let mut m =
            FiberMatrix::constant(algebra.clone(), carrier.clone(), carrier, algebra.bottom());
        for i in 0..m.source.len() {
            m.set_entry(i, i, algebra.top());
        }
        m.to_pretrans()
    }

    pub fn algebra(&self) -> &Arc<HeytingAlgebra> {
        &self.algebra
    }

    pub fn source(&self) -> &SetRef {
        &self.source
    }

    pub fn target(&self) -> &SetRef {
        &self.target
    }

    pub fn fiber(&self, b: usize, a: usize) -> ElemSet {
        self.fibers[b * self.source.len() + a]
    }

    pub fn set_fiber(&mut self, b: usize, a: usize, fiber: ElemSet) {
        let idx = b * self.source.len() + a;
        self.fibers[idx] = fiber;
    }

    /// The relation `τ_h` at a single level.
    pub fn level(&self, h: Elem) -> Relation {
        let mut r = Relation::empty(self.source.clone(), self.target.clone());
        for b in 0..self.target.len() {
            for a in 0..self.source.len() {
                if self.fiber(b, a).contains(h) {
                    r.set(b, a, true);
                }
            }
        }
        r
    }

    pub fn classify(&self) -> Flavor {
        let mut order_preserving = true;
        let mut infima_preserving = true;
        for f in &self.fibers {
            let closed = self.algebra.down_closure(*f).members() == *f;
            order_preserving &= closed;
            infima_preserving &= closed && f.contains(self.algebra.sup(*f));
        }
        Flavor {
            order_preserving,
            infima_preserving,
        }
    }

    fn require_flavor(&self, mode: Mode, role: &str) -> Result<(), PtError> {
        let flavor = self.classify();
        let ok = match mode {
            Mode::Ord => flavor.order_preserving,
            Mode::Inf => flavor.infima_preserving,
        };
        if ok {
            Ok(())
        } else {
            Err(PtError::Mode(format!("{role} is not {mode}-preserving")))
        }
    }

    fn compose_carriers(sigma: &Self, tau: &Self) -> Result<(), PtError> {
        if !same_algebra(&sigma.algebra, &tau.algebra) {
            return Err(PtError::AlgebraMismatch);
        }
        require_carrier(&tau.target, &sigma.source)?;
        Ok(())
    }

    /// Order-mode composite. For down-closed fibers the defining search over
    /// pairs `(k,l)` with `h ≤ k∧l` collapses to levelwise relational
    /// composition, which is what we compute; the definitional search lives
    /// in [`crate::definitional`] and the suites pin the agreement.
    pub fn compose_ord(sigma: &Self, tau: &Self) -> Result<Self, PtError> {
        Self::compose_carriers(sigma, tau)?;
        sigma.require_flavor(Mode::Ord, "left operand")?;
        tau.require_flavor(Mode::Ord, "right operand")?;
        let mut out = PreTransformation::empty(
            tau.algebra.clone(),
            tau.source.clone(),
            sigma.target.clone(),
        );
        for h in tau.algebra.elements() {
            let level = Relation::compose(&sigma.level(h), &tau.level(h))?;
            for c in 0..out.target.len() {
                for a in 0..out.source.len() {
                    if level.get(c, a) {
                        let mut f = out.fiber(c, a);
                        f.insert(h);
                        out.set_fiber(c, a, f);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Infima-mode composite via the matrix formula
    /// `M(c,a) = ⋁_b Mσ(c,b) ∧ Mτ(b,a)`; the family-search definition is in
    /// [`crate::definitional`] and the suites pin the agreement.
    pub fn compose_inf(sigma: &Self, tau: &Self) -> Result<Self, PtError> {
        Self::compose_carriers(sigma, tau)?;
        let ms = sigma.to_matrix()?;
        let mt = tau.to_matrix()?;
        let h = &tau.algebra;
        let mut out = FiberMatrix::constant(
            tau.algebra.clone(),
            tau.source.clone(),
            sigma.target.clone(),
            h.bottom(),
        );
        for c in 0..sigma.target.len() {
            for a in 0..tau.source.len() {
                let mut v = h.bottom();
                for b in 0..tau.target.len() {
                    v = h.join(v, h.meet(ms.entry(c, b), mt.entry(b, a)));
                }
                out.set_entry(c, a, v);
            }
        }
        let result = out.to_pretrans();
        debug_assert!(result
            .fibers
            .iter()
            .all(|f| f.contains(result.algebra.bottom())));
        Ok(result)
    }

    pub fn compose(mode: Mode, sigma: &Self, tau: &Self) -> Result<Self, PtError> {
        match mode {
            Mode::Ord => Self::compose_ord(sigma, tau),
            Mode::Inf => Self::compose_inf(sigma, tau),
        }
    }

    /// `τ* = ⟨τ_h⁻¹⟩`: swaps every fiber across the diagonal. Preserves both
    /// flavors.
    pub fn involution(&self) -> Self {
        let mut out = PreTransformation::empty(
            self.algebra.clone(),
            self.target.clone(),
            self.source.clone(),
        );
        for b in 0..self.target.len() {
            for a in 0..self.source.len() {
                out.set_fiber(a, b, self.fiber(b, a));
            }
        }
        out
    }

    pub fn to_matrix(&self) -> Result<FiberMatrix, PtError> {
        self.require_flavor(Mode::Inf, "operand")?;
        let entries = self.fibers.iter().map(|f| self.algebra.sup(*f)).collect();
        Ok(FiberMatrix {
            algebra: self.algebra.clone(),
            source: self.source.clone(),
            target: self.target.clone(),
            entries,
        })
    }

    /// Replaces each fiber by the principal down-set of its supremum:
    /// `⋁(F)(h)(b,a) = 1 ⟺ h ≤ ⋁{k | F(k)(b,a) = 1}`.
    pub fn inf_completion(&self) -> Result<Self, PtError> {
        self.require_flavor(Mode::Ord, "operand")?;
        let fibers = self
            .fibers
            .iter()
            .map(|f| self.algebra.principal(self.algebra.sup(*f)).members())
            .collect();
        Ok(PreTransformation::new(
            self.algebra.clone(),
            self.source.clone(),
            self.target.clone(),
            fibers,
        ))
    }

    /// Fiberwise inclusion on the hom-set.
    pub fn leq(&self, other: &Self) -> Result<bool, PtError> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(PtError::AlgebraMismatch);
        }
        require_carrier(&self.source, &other.source)?;
        require_carrier(&self.target, &other.target)?;
        Ok(self
            .fibers
            .iter()
            .zip(&other.fibers)
            .all(|(a, b)| a.is_subset(*b)))
    }

    /// Supremum of a non-empty family in the mode's hom-lattice. In Ord mode
    /// this is the fiberwise union; in Inf mode the union of principal
    /// fibers need not be principal, so the supremum is the entrywise join
    /// of matrices (the least principal family above the union).
    pub fn sup_family(mode: Mode, parts: &[&Self]) -> Result<Self, PtError> {
        let first = parts
            .first()
            .ok_or_else(|| PtError::Mode("supremum of an empty family needs carriers".into()))?;
        for p in &parts[1..] {
            if !same_algebra(&first.algebra, &p.algebra) {
                return Err(PtError::AlgebraMismatch);
            }
            require_carrier(&first.source, &p.source)?;
            require_carrier(&first.target, &p.target)?;
        }
        match mode {
            Mode::Ord => {
                for p in parts {
                    p.require_flavor(Mode::Ord, "family member")?;
                }
                let mut out = (*first).clone();
                for p in &parts[1..] {
                    for i in 0..out.fibers.len() {
                        out.fibers[i] = out.fibers[i].union(p.fibers[i]);
                    }
                }
                Ok(out)
            }
            Mode::Inf => {
                let h = first.algebra.clone();
                let mut m = first.to_matrix()?;
                for p in &parts[1..] {
                    let pm = p.to_matrix()?;
                    for i in 0..m.entries.len() {
                        m.entries[i] = h.join(m.entries[i], pm.entries[i]);
                    }
                }
                Ok(m.to_pretrans())
            }
        }
    }
}

/// Total matrix `M: B×A → H`; the normal form of an infima-preserving
/// pre-transformation via `fiber(b,a) = M(b,a)†`.
#[derive(Clone, PartialEq, Eq)]
pub struct FiberMatrix {
    algebra: Arc<HeytingAlgebra>,
    source: SetRef,
    target: SetRef,
    entries: Vec<Elem>,
}

impl FiberMatrix {
    pub fn constant(
        algebra: Arc<HeytingAlgebra>,
        source: SetRef,
        target: SetRef,
        value: Elem,
    ) -> Self {
        let entries = vec![value; source.len() * target.len()];
        FiberMatrix {
            algebra,
            source,
            target,
            entries,
        }
    }

    pub fn algebra(&self) -> &Arc<HeytingAlgebra> {
        &self.algebra
    }

    pub fn source(&self) -> &SetRef {
        &self.source
    }

    pub fn target(&self) -> &SetRef {
        &self.target
    }

    pub fn entry(&self, b: usize, a: usize) -> Elem {
        self.entries[b * self.source.len() + a]
    }

    pub fn set_entry(&mut self, b: usize, a: usize, value: Elem) {
        let idx = b * self.source.len() + a;
        self.entries[idx] = value;
    }

    pub fn to_pretrans(&self) -> PreTransformation {
        let fibers = self
            .entries
            .iter()
            .map(|&e| self.algebra.principal(e).members())
            .collect();
        PreTransformation::new(
            self.algebra.clone(),
            self.source.clone(),
            self.target.clone(),
            fibers,
        )
    }
}

impl fmt::Debug for FiberMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "M {}→{}:", self.source.label(), self.target.label())?;
        for b in 0..self.target.len() {
            let row: Vec<&str> = (0..self.source.len())
                .map(|a| self.algebra.name(self.entry(b, a)))
                .collect();
            writeln!(f, "  {} | {}", self.target.member(b), row.join(" "))?;
        }
        Ok(())
    }
}

/// First violated object law, with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObjectViolation {
    #[error("carrier is not an endomorphism: {0} ≠ {1}")]
    NotEndo(String, String),
    #[error("fibers are not {0}-preserving")]
    Flavor(Mode),
    #[error("symmetry fails at ({b},{a})")]
    Symmetry { b: String, a: String },
    #[error("idempotency fails: τ∘τ ≠ τ at ({b},{a})")]
    Idempotent { b: String, a: String },
    #[error("lax law fails: τ_{l}∘τ_{k} ≰ τ_{{l∧k}}")]
    Lax { l: String, k: String },
}

/// Checks symmetry, idempotency under the mode's composition, and the lax
/// law `τ_l∘τ_k ≤ τ_{l∧k}`; reports the first violated law.
pub fn check_object(pt: &PreTransformation, mode: Mode) -> Result<(), ObjectViolation> {
    if !same_carrier(pt.source(), pt.target()) {
        return Err(ObjectViolation::NotEndo(
            pt.source().label().to_owned(),
            pt.target().label().to_owned(),
        ));
    }
    let flavor = pt.classify();
    let flavored = match mode {
        Mode::Ord => flavor.order_preserving,
        Mode::Inf => flavor.infima_preserving,
    };
    if !flavored {
        return Err(ObjectViolation::Flavor(mode));
    }
    for b in 0..pt.target().len() {
        for a in 0..pt.source().len() {
            if pt.fiber(b, a) != pt.fiber(a, b) {
                return Err(ObjectViolation::Symmetry {
                    b: pt.target().member(b).to_owned(),
                    a: pt.source().member(a).to_owned(),
                });
            }
        }
    }
    let square = PreTransformation::compose(mode, pt, pt).expect("endo composite");
    if square != *pt {
        for b in 0..pt.target().len() {
            for a in 0..pt.source().len() {
                if square.fiber(b, a) != pt.fiber(b, a) {
                    return Err(ObjectViolation::Idempotent {
                        b: pt.target().member(b).to_owned(),
                        a: pt.source().member(a).to_owned(),
                    });
                }
            }
        }
    }
    check_lax(pt, pt, pt).map_err(|(l, k)| ObjectViolation::Lax {
        l: pt.algebra().name(l).to_owned(),
        k: pt.algebra().name(k).to_owned(),
    })
}

/// `θ_l∘τ_k ≤ θ_{l∧k}` for all `l`, `k` (with `θ` between `τ`'s source and
/// an arbitrary target); returns the offending pair on failure.
fn check_lax(
    theta_left: &PreTransformation,
    theta_right: &PreTransformation,
    out: &PreTransformation,
) -> Result<(), (Elem, Elem)> {
    let h = theta_left.algebra();
    for l in h.elements() {
        for k in h.elements() {
            let comp = Relation::compose(&theta_left.level(l), &theta_right.level(k))
                .expect("lax check carriers");
            let bound = out.level(h.meet(l, k));
            if !comp.leq(&bound).expect("lax check carriers") {
                return Err((l, k));
            }
        }
    }
    Ok(())
}

/// First violated morphism law. Law names follow the six conditions:
/// two lax triangles, the two absorptions `θ∘τ = θ = σ∘θ`, and the map
/// laws `τ ≤ θ*∘θ`, `θ∘θ* ≤ σ`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismViolation {
    #[error("morphism fibers are not {0}-preserving")]
    Flavor(Mode),
    #[error("lax triangle over the domain fails at l={l}, k={k}")]
    LaxDomain { l: String, k: String },
    #[error("lax triangle over the codomain fails at l={l}, k={k}")]
    LaxCodomain { l: String, k: String },
    #[error("absorption θ∘τ = θ fails")]
    AbsorbDomain,
    #[error("absorption σ∘θ = θ fails")]
    AbsorbCodomain,
    #[error("map law τ ≤ θ*∘θ fails")]
    MapLower,
    #[error("map law θ∘θ* ≤ σ fails")]
    MapUpper,
}

/// A validated object of `Map*(Kar*(PT_mode(H)))`: a symmetric idempotent
/// pre-transformation on one carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelObject {
    pt: PreTransformation,
    mode: Mode,
}

impl RelObject {
    pub fn new(pt: PreTransformation, mode: Mode) -> Result<Self, ObjectViolation> {
        check_object(&pt, mode)?;
        Ok(RelObject { pt, mode })
    }

    pub fn pt(&self) -> &PreTransformation {
        &self.pt
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn carrier(&self) -> &SetRef {
        self.pt.source()
    }

    pub fn algebra(&self) -> &Arc<HeytingAlgebra> {
        self.pt.algebra()
    }

    /// Matrix of an Inf object (`Ê` in the functor constructions).
    pub fn matrix(&self) -> FiberMatrix {
        self.pt
            .to_matrix()
            .expect("Inf objects always have matrices")
    }
}

/// Checks all six morphism laws of `θ: τ → σ` under the objects' mode.
pub fn check_morphism(
    theta: &PreTransformation,
    dom: &RelObject,
    cod: &RelObject,
) -> Result<(), PtMorphismError> {
    assert_eq!(dom.mode(), cod.mode(), "objects of mixed modes");
    let mode = dom.mode();
    require_carrier(dom.carrier(), theta.source()).map_err(PtError::from)?;
    require_carrier(cod.carrier(), theta.target()).map_err(PtError::from)?;
    if !same_algebra(theta.algebra(), dom.algebra()) {
        return Err(PtError::AlgebraMismatch.into());
    }

    let law = |v: MorphismViolation| PtMorphismError::Law(v);
    theta
        .require_flavor(mode, "morphism")
        .map_err(|_| law(MorphismViolation::Flavor(mode)))?;

    let name = |e: Elem| theta.algebra().name(e).to_owned();
    check_lax(theta, dom.pt(), theta).map_err(|(l, k)| {
        law(MorphismViolation::LaxDomain {
            l: name(l),
            k: name(k),
        })
    })?;
    check_lax(cod.pt(), theta, theta).map_err(|(l, k)| {
        law(MorphismViolation::LaxCodomain {
            l: name(l),
            k: name(k),
        })
    })?;

    let compose = |s: &PreTransformation, t: &PreTransformation| {
        PreTransformation::compose(mode, s, t).expect("checked carriers")
    };
    if compose(theta, dom.pt()) != *theta {
        return Err(law(MorphismViolation::AbsorbDomain));
    }
    if compose(cod.pt(), theta) != *theta {
        return Err(law(MorphismViolation::AbsorbCodomain));
    }
    let conv = theta.involution();
    if !dom
        .pt()
        .leq(&compose(&conv, theta))
        .expect("checked carriers")
    {
        return Err(law(MorphismViolation::MapLower));
    }
    if !compose(theta, &conv)
        .leq(cod.pt())
        .expect("checked carriers")
    {
        return Err(law(MorphismViolation::MapUpper));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PtMorphismError {
    #[error(transparent)]
    Pt(#[from] PtError),
    #[error(transparent)]
    Law(MorphismViolation),
}

/// A validated morphism of `Map*(Kar*(PT_mode(H)))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelMorphism {
    domain: RelObject,
    codomain: RelObject,
    pt: PreTransformation,
}

impl RelMorphism {
    pub fn new(
        domain: RelObject,
        codomain: RelObject,
        pt: PreTransformation,
    ) -> Result<Self, PtMorphismError> {
        check_morphism(&pt, &domain, &codomain)?;
        Ok(RelMorphism {
            domain,
            codomain,
            pt,
        })
    }

    /// The identity of `τ` in the Karoubian envelope is `τ` itself.
    pub fn identity(object: &RelObject) -> Self {
        RelMorphism {
            domain: object.clone(),
            codomain: object.clone(),
            pt: object.pt().clone(),
        }
    }

    pub fn domain(&self) -> &RelObject {
        &self.domain
    }

    pub fn codomain(&self) -> &RelObject {
        &self.codomain
    }

    pub fn pt(&self) -> &PreTransformation {
        &self.pt
    }

    pub fn mode(&self) -> Mode {
        self.domain.mode()
    }

    pub fn compose(phi: &RelMorphism, theta: &RelMorphism) -> Result<RelMorphism, PtError> {
        if phi.domain != theta.codomain {
            return Err(RelError::CarrierMismatch {
                expected: phi.domain.carrier().label().to_owned(),
                found: theta.codomain.carrier().label().to_owned(),
            }
            .into());
        }
        let pt = PreTransformation::compose(phi.mode(), phi.pt(), theta.pt())?;
        debug_assert!(check_morphism(&pt, &theta.domain, &phi.codomain).is_ok());
        Ok(RelMorphism {
            domain: theta.domain.clone(),
            codomain: phi.codomain.clone(),
            pt,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rel::FiniteSet;

    fn carrier(label: &str, members: &[&str]) -> SetRef {
        Arc::new(FiniteSet::new(
            label,
            members.iter().map(|s| s.to_string()).collect(),
        ))
    }

    #[test]
    fn classify_examples() {
        let b4 = Arc::new(fixtures::b4());
        let a2 = carrier("A", &["x"]);
        let empty = PreTransformation::empty(b4.clone(), a2.clone(), a2.clone());
        assert_eq!(
            empty.classify(),
            Flavor {
                order_preserving: true,
                infima_preserving: false
            }
        );
        let full = PreTransformation::identity(b4.clone(), a2.clone());
        assert_eq!(
            full.classify(),
            Flavor {
                order_preserving: true,
                infima_preserving: true
            }
        );
        let (a, b) = (b4.index_of("a").unwrap(), b4.index_of("b").unwrap());
        let mut pt = PreTransformation::empty(b4.clone(), a2.clone(), a2);
        pt.set_fiber(0, 0, ElemSet::from_iter([b4.bottom(), a, b]));
        assert_eq!(
            pt.classify(),
            Flavor {
                order_preserving: true,
                infima_preserving: false
            }
        );
    }

    #[test]
    fn identity_family_is_neutral_for_compose_ord() {
        let c3 = Arc::new(fixtures::c3());
        let a2 = carrier("A", &["x", "y"]);
        let id = PreTransformation::identity(c3.clone(), a2.clone());
        let mut tau = PreTransformation::empty(c3.clone(), a2.clone(), a2.clone());
        let m = c3.index_of("m").unwrap();
        tau.set_fiber(0, 1, ElemSet::from_iter([c3.bottom(), m]));
        tau.set_fiber(1, 0, ElemSet::from_iter([c3.bottom()]));
        assert_eq!(PreTransformation::compose_ord(&id, &tau).unwrap(), tau);
        assert_eq!(PreTransformation::compose_ord(&tau, &id).unwrap(), tau);
    }

    #[test]
    fn compose_inf_with_bottom_matrix_is_bottom() {
        let b4 = Arc::new(fixtures::b4());
        let a2 = carrier("A", &["x", "y"]);
        let bot =
            FiberMatrix::constant(b4.clone(), a2.clone(), a2.clone(), b4.bottom()).to_pretrans();
        let id = PreTransformation::identity_inf(b4, a2);
        assert_eq!(PreTransformation::compose_inf(&bot, &id).unwrap(), bot);
        assert_eq!(PreTransformation::compose_inf(&id, &bot).unwrap(), bot);
    }

    #[test]
    fn compose_rejects_wrong_flavor() {
        let b4 = Arc::new(fixtures::b4());
        let a2 = carrier("A", &["x"]);
        let empty = PreTransformation::empty(b4.clone(), a2.clone(), a2.clone());
        let id = PreTransformation::identity(b4, a2);
        // empty fibers are down-closed but not principal
        assert!(PreTransformation::compose_inf(&empty, &id).is_err());
        let mut not_closed = empty.clone();
        not_closed.set_fiber(0, 0, ElemSet::singleton(not_closed.algebra().top()));
        assert!(PreTransformation::compose_ord(&not_closed, &id).is_err());
    }

    #[test]
    fn involution_examples() {
        let b4 = Arc::new(fixtures::b4());
        let a2 = carrier("A", &["x", "y"]);
        let id = PreTransformation::identity(b4.clone(), a2.clone());
        assert_eq!(id.involution(), id);
        let mut single = PreTransformation::empty(b4.clone(), a2.clone(), a2);
        single.set_fiber(0, 1, ElemSet::singleton(b4.bottom()));
        let inv = single.involution();
        assert_eq!(inv.fiber(1, 0), ElemSet::singleton(b4.bottom()));
        assert_eq!(inv.fiber(0, 1), ElemSet::EMPTY);
        assert_eq!(inv.involution(), single);
    }

    #[test]
    fn matrix_roundtrip_corners() {
        let b4 = Arc::new(fixtures::b4());
        let a2 = carrier("A", &["x", "y"]);
        let bot = FiberMatrix::constant(b4.clone(), a2.clone(), a2.clone(), b4.bottom());
        for b in 0..2 {
            for a in 0..2 {
                assert_eq!(
                    bot.to_pretrans().fiber(b, a),
                    ElemSet::singleton(b4.bottom())
                );
            }
        }
        let top = FiberMatrix::constant(b4.clone(), a2.clone(), a2, b4.top());
        for b in 0..2 {
            for a in 0..2 {
                assert_eq!(top.to_pretrans().fiber(b, a), ElemSet::full(b4.len()));
            }
        }
        assert_eq!(top.to_pretrans().to_matrix().unwrap(), top);
    }

    #[test]
    fn inf_completion_examples() {
        let b4 = Arc::new(fixtures::b4());
        let (a, b) = (b4.index_of("a").unwrap(), b4.index_of("b").unwrap());
        let a1 = carrier("A", &["x"]);
        let mut pt = PreTransformation::empty(b4.clone(), a1.clone(), a1.clone());
        pt.set_fiber(0, 0, ElemSet::from_iter([b4.bottom(), a, b]));
        let done = pt.inf_completion().unwrap();
        assert_eq!(done.fiber(0, 0), ElemSet::full(b4.len()));

        let principal = PreTransformation::identity(b4, a1);
        assert_eq!(principal.inf_completion().unwrap(), principal);
    }

    #[test]
    fn object_checks() {
        let b4 = Arc::new(fixtures::b4());
        let one = carrier("A", &["x"]);
        // one-point diagonal family with fiber H is an object in both modes
        let point = PreTransformation::identity(b4.clone(), one);
        assert!(check_object(&point, Mode::Ord).is_ok());
        assert!(check_object(&point, Mode::Inf).is_ok());

        let a2 = carrier("B", &["x", "y"]);
        let id = PreTransformation::identity(b4.clone(), a2.clone());
        assert!(check_object(&id, Mode::Ord).is_ok());
        // empty off-diagonal fibers are not principal
        assert_eq!(
            check_object(&id, Mode::Inf),
            Err(ObjectViolation::Flavor(Mode::Inf))
        );
        assert!(check_object(
            &PreTransformation::identity_inf(b4.clone(), a2.clone()),
            Mode::Inf
        )
        .is_ok());

        let mut asym = id.clone();
        asym.set_fiber(0, 1, ElemSet::singleton(b4.bottom()));
        assert!(matches!(
            check_object(&asym, Mode::Ord),
            Err(ObjectViolation::Symmetry { .. })
        ));
    }

    #[test]
    fn morphism_identity_and_mutation() {
        let h2 = Arc::new(fixtures::h2());
        let a2 = carrier("A", &["x", "y"]);
        // PER with classes {x}, {y} as an Inf object
        let mut m = FiberMatrix::constant(h2.clone(), a2.clone(), a2.clone(), h2.bottom());
        m.set_entry(0, 0, h2.top());
        m.set_entry(1, 1, h2.top());
        let obj = RelObject::new(m.to_pretrans(), Mode::Inf).unwrap();
        let id = RelMorphism::identity(&obj);
        assert!(check_morphism(id.pt(), &obj, &obj).is_ok());

        // enlarging a fiber breaks absorption
        let mut bad = id.pt().clone();
        bad.set_fiber(0, 1, ElemSet::full(h2.len()));
        assert!(matches!(
            check_morphism(&bad, &obj, &obj),
            Err(PtMorphismError::Law(_))
        ));
    }

    #[test]
    fn morphism_composition_with_identity() {
        let h2 = Arc::new(fixtures::h2());
        let a2 = carrier("A", &["x", "y"]);
        let mut m = FiberMatrix::constant(h2.clone(), a2.clone(), a2.clone(), h2.bottom());
        m.set_entry(0, 0, h2.top());
        m.set_entry(1, 1, h2.top());
        m.set_entry(0, 1, h2.top());
        m.set_entry(1, 0, h2.top());
        let obj = RelObject::new(m.to_pretrans(), Mode::Inf).unwrap();
        let id = RelMorphism::identity(&obj);
        let comp = RelMorphism::compose(&id, &id).unwrap();
        assert_eq!(comp, id);
    }
}
