//! Singletons `F_h` and singleton morphisms `F_h → F`, normal-formed as
//! extent functions valued in `h†`. A singleton morphism simultaneously
//! names a matching family and its amalgamation, which is what the sheaf
//! comparison functors run on.

use std::sync::Arc;

use thiserror::Error;

use crate::heyting::{Elem, HeytingAlgebra};
use crate::pretrans::{FiberMatrix, Mode, PreTransformation, RelObject};
use crate::rel::{FiniteSet, SetRef};

/// The one-point relational sheaf with `F_h(k)(*,*) = 1` iff `k ≤ h`.
pub fn singleton_object(algebra: Arc<HeytingAlgebra>, h: Elem) -> RelObject {
    let carrier: SetRef = Arc::new(FiniteSet::new(
        format!("F_{}", algebra.name(h)),
        vec!["*".into()],
    ));
    let m = FiberMatrix::constant(algebra, carrier.clone(), carrier, h);
    RelObject::new(m.to_pretrans(), Mode::Inf).expect("one-point objects are relational sheaves")
}

/// A singleton morphism `F_h → F` in extent normal form:
/// `extent[x] = α(x) = ⋁{l | α_l(x,*) = 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Singleton {
    level: Elem,
    extent: Vec<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SingletonError {
    #[error("extent length {0} does not match the carrier")]
    Length(usize),
    #[error("α({x}) ≰ h")]
    Level { x: String },
    #[error("α({x}) ≰ Ê({x},{x})")]
    Diagonal { x: String },
    #[error("closure fails: Ê({y},{x}) ∧ α({x}) ≰ α({y})")]
    Closure { y: String, x: String },
    #[error("map law fails: α({x}) ∧ α({y}) ≰ Ê({x},{y})")]
    Pairing { x: String, y: String },
    #[error("extent does not cover its level: ⋁α = {sup} ≠ {level}")]
    Extent { sup: String, level: String },
    #[error("cannot restrict a singleton at {h} to {k} ≰ {h}")]
    Order { h: String, k: String },
}

impl Singleton {
    pub fn new(f: &RelObject, level: Elem, extent: Vec<Elem>) -> Result<Self, SingletonError> {
        let s = Singleton { level, extent };
        s.validate(f)?;
        Ok(s)
    }

    pub fn level(&self) -> Elem {
        self.level
    }

    pub fn extent(&self) -> &[Elem] {
        &self.extent
    }

    pub fn value(&self, x: usize) -> Elem {
        self.extent[x]
    }

    /// The four normal-form invariants, equivalent to the six morphism laws
    /// of `F_h → F` (the agreement is pinned against brute force in the
    /// suites).
    pub fn validate(&self, f: &RelObject) -> Result<(), SingletonError> {
        assert_eq!(f.mode(), Mode::Inf, "singletons live on relational sheaves");
        let alg = f.algebra();
        let e = f.matrix();
        let carrier = f.carrier();
        if self.extent.len() != carrier.len() {
            return Err(SingletonError::Length(self.extent.len()));
        }
        for x in 0..carrier.len() {
            if !alg.leq(self.extent[x], self.level) {
                return Err(SingletonError::Level {
                    x: carrier.member(x).to_owned(),
                });
            }
            if !alg.leq(self.extent[x], e.entry(x, x)) {
                return Err(SingletonError::Diagonal {
                    x: carrier.member(x).to_owned(),
                });
            }
        }
        for y in 0..carrier.len() {
            for x in 0..carrier.len() {
                if !alg.leq(alg.meet(e.entry(y, x), self.extent[x]), self.extent[y]) {
                    return Err(SingletonError::Closure {
                        y: carrier.member(y).to_owned(),
                        x: carrier.member(x).to_owned(),
                    });
                }
                if !alg.leq(alg.meet(self.extent[x], self.extent[y]), e.entry(x, y)) {
                    return Err(SingletonError::Pairing {
                        x: carrier.member(x).to_owned(),
                        y: carrier.member(y).to_owned(),
                    });
                }
            }
        }
        let sup = self
            .extent
            .iter()
            .fold(alg.bottom(), |s, &v| alg.join(s, v));
        if sup != self.level {
            return Err(SingletonError::Extent {
                sup: alg.name(sup).to_owned(),
                level: alg.name(self.level).to_owned(),
            });
        }
        Ok(())
    }

    /// The underlying pre-transformation `F_h → F` with `fiber(x,*) = α(x)†`.
    pub fn to_pretrans(&self, f: &RelObject) -> PreTransformation {
        let alg = f.algebra().clone();
        let dom = singleton_object(alg.clone(), self.level);
        let mut m = FiberMatrix::constant(
            alg.clone(),
            dom.carrier().clone(),
            f.carrier().clone(),
            alg.bottom(),
        );
        for x in 0..f.carrier().len() {
            m.set_entry(x, 0, self.extent[x]);
        }
        m.to_pretrans()
    }

    /// `α|_k`: meet the extent with `k ≤ h`.
    pub fn restricted(&self, f: &RelObject, k: Elem) -> Result<Singleton, SingletonError> {
        let alg = f.algebra();
        if !alg.leq(k, self.level) {
            return Err(SingletonError::Order {
                h: alg.name(self.level).to_owned(),
                k: alg.name(k).to_owned(),
            });
        }
        let extent = self.extent.iter().map(|&v| alg.meet(v, k)).collect();
        Ok(Singleton { level: k, extent })
    }

    /// Canonical display name: the extent values in carrier order.
    pub fn name(&self, algebra: &HeytingAlgebra) -> String {
        let inner: Vec<&str> = self.extent.iter().map(|&v| algebra.name(v)).collect();
        format!("[{}]", inner.join(","))
    }
}

/// All singletons `F_h → F` at a level, in lexicographic extent order.
/// Backtracks over carrier positions with the pairwise laws as pruning.
pub fn enumerate_singletons(f: &RelObject, h: Elem) -> Vec<Singleton> {
    let alg = f.algebra();
    let e = f.matrix();
    let n = f.carrier().len();
    let mut out = Vec::new();
    let mut extent: Vec<Elem> = Vec::with_capacity(n);

    fn search(
        f: &RelObject,
        e: &FiberMatrix,
        h: Elem,
        extent: &mut Vec<Elem>,
        out: &mut Vec<Singleton>,
    ) {
        let alg = f.algebra();
        let n = f.carrier().len();
        if extent.len() == n {
            let sup = extent.iter().fold(alg.bottom(), |s, &v| alg.join(s, v));
            if sup == h {
                out.push(Singleton {
                    level: h,
                    extent: extent.clone(),
                });
            }
            return;
        }
        let x = extent.len();
        let cap = alg.meet(h, e.entry(x, x));
        for v in alg.elements() {
            if !alg.leq(v, cap) {
                continue;
            }
            let ok = (0..x).all(|y| {
                alg.leq(alg.meet(e.entry(x, y), extent[y]), v)
                    && alg.leq(alg.meet(e.entry(y, x), v), extent[y])
                    && alg.leq(alg.meet(v, extent[y]), e.entry(x, y))
            });
            if ok {
                extent.push(v);
                search(f, e, h, extent, out);
                extent.pop();
            }
        }
    }

    if n == 0 {
        // only F_⊥ admits the empty extent
        if h == alg.bottom() {
            out.push(Singleton {
                level: h,
                extent: Vec::new(),
            });
        }
        return out;
    }
    search(f, &e, h, &mut extent, &mut out);
    out
}

/// `α_x`: the representable singleton of a carrier member, at level
/// `Ê(x,x)` with extent `y ↦ Ê(y,x)`.
pub fn representable_singleton(f: &RelObject, x: usize) -> Singleton {
    let e = f.matrix();
    let level = e.entry(x, x);
    let extent = (0..f.carrier().len()).map(|y| e.entry(y, x)).collect();
    let s = Singleton { level, extent };
    debug_assert!(s.validate(f).is_ok());
    s
}

/// Both sides of the agreement law for singletons `α` at `h`, `β` at `k`:
/// the restriction side `α|_l = β|_l` and the composite side
/// `(α°β)_l(*,*) = 1`.
pub fn agreement_sides(
    f: &RelObject,
    alpha: &Singleton,
    beta: &Singleton,
    l: Elem,
) -> (bool, bool) {
    let alg = f.algebra();
    let restriction_side = alg.leq(l, alg.meet(alpha.level, beta.level))
        && alpha
            .extent
            .iter()
            .zip(&beta.extent)
            .all(|(&a, &b)| alg.meet(a, l) == alg.meet(b, l));

    // (α°β) computed honestly through pre-transformation composition
    let ab =
        PreTransformation::compose_inf(&alpha.to_pretrans(f).involution(), &beta.to_pretrans(f))
            .expect("singleton composites share carriers");
    let composite_side = ab.fiber(0, 0).contains(l);
    (restriction_side, composite_side)
}

/// The closed form `⋁_x α(x)∧β(x)` the agreement law reduces to.
pub fn agreement_extent(f: &RelObject, alpha: &Singleton, beta: &Singleton) -> Elem {
    let alg = f.algebra();
    alpha
        .extent
        .iter()
        .zip(&beta.extent)
        .fold(alg.bottom(), |s, (&a, &b)| alg.join(s, alg.meet(a, b)))
}
