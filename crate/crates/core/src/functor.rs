//! The functor suite: the comparison pair `Γ ⊣⊢ Λ` between presheaves on
//! `H` and sheaves on `D(H)`, the pre-transformation comparison `Ψ`/`Φ`,
//! the adjunction `Δ ⊣ Θ` between presheaves and relational sheaves with
//! its unit `η` and counit `ε`, singleton flattening, and the associated
//! sheaf / relational-sheaf composites.

use std::collections::HashMap;
use std::sync::Arc;

use crate::heyting::{DownsetAlgebra, Elem, ElemSet};
use crate::presheaf::{MatchingFamily, Presheaf, SheafCounterexample, Transformation};
use crate::pretrans::{
    same_algebra, FiberMatrix, Mode, PreTransformation, PtError, RelMorphism, RelObject,
};
use crate::rel::{FiniteSet, SetRef};
use crate::singleton::{enumerate_singletons, representable_singleton, Singleton};

/// One named law with its verdict; failures carry a witness description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawOutcome {
    pub law: &'static str,
    pub result: Result<(), String>,
}

impl LawOutcome {
    pub fn new(law: &'static str, result: Result<(), String>) -> Self {
        LawOutcome { law, result }
    }

    pub fn passed(&self) -> bool {
        self.result.is_ok()
    }
}

// ---------------------------------------------------------------------------
// Γ and Λ (comparison between presheaves on H and sheaves on D(H))
// ---------------------------------------------------------------------------

/// `Γ(F)(A) = {matching families of F over A}`, restriction by dropping
/// components.
pub fn gamma(dh: &DownsetAlgebra, f: &Presheaf) -> Presheaf {
    assert!(
        same_algebra(f.algebra(), &dh.base),
        "Γ expects a presheaf over the base algebra"
    );
    let label = format!("Γ({})", f.label());
    let n = dh.algebra.len();
    let families: Vec<Vec<MatchingFamily>> =
        (0..n).map(|a| f.matching_families(dh.mask(a))).collect();
    let carriers: Vec<SetRef> = (0..n)
        .map(|a| {
            let names = families[a]
                .iter()
                .map(|fam| f.describe_family(fam))
                .collect();
            Arc::new(FiniteSet::new(
                format!("{label}@{}", dh.algebra.name(a)),
                names,
            ))
        })
        .collect();
    let mut res = HashMap::new();
    for big in dh.algebra.elements() {
        for small in dh.algebra.elements() {
            if big != small && dh.algebra.leq(small, big) {
                let map = families[big]
                    .iter()
                    .map(|fam| {
                        let restricted = fam.restricted(dh.mask(small));
                        carriers[small]
                            .index_of(&f.describe_family(&restricted))
                            .expect("restricted families are families")
                    })
                    .collect();
                res.insert((big, small), map);
            }
        }
    }
    Presheaf::new(label, dh.algebra.clone(), carriers, res).expect("Γ lands in presheaves")
}

/// `Γ` on transformations: apply the component at each index of a family.
pub fn gamma_mor(dh: &DownsetAlgebra, t: &Transformation) -> Transformation {
    let dom = gamma(dh, t.dom());
    let cod = gamma(dh, t.cod());
    let components = dh
        .algebra
        .elements()
        .map(|a| {
            t.dom()
                .matching_families(dh.mask(a))
                .into_iter()
                .map(|fam| {
                    let image = MatchingFamily::from_values(
                        fam.parts(),
                        fam.values()
                            .iter()
                            .map(|&(k, x)| (k, t.apply(k, x)))
                            .collect(),
                    );
                    debug_assert!(image.is_matching(t.cod()));
                    cod.carrier(a)
                        .index_of(&t.cod().describe_family(&image))
                        .expect("images of matching families are matching")
                })
                .collect()
        })
        .collect();
    Transformation::new(dom, cod, components).expect("Γ preserves naturality")
}

/// `Λ(F)(h) = F(h†)`: reindex a presheaf on `D(H)` along principal
/// down-sets.
pub fn lambda(dh: &DownsetAlgebra, g: &Presheaf) -> Presheaf {
    assert!(
        same_algebra(g.algebra(), &dh.algebra),
        "Λ expects a presheaf over D(H)"
    );
    let base = &dh.base;
    let carriers: Vec<SetRef> = base
        .elements()
        .map(|h| g.carrier(dh.principal_index(h)).clone())
        .collect();
    let mut res = HashMap::new();
    for h in base.elements() {
        for k in base.elements() {
            if h != k && base.leq(k, h) {
                let (bh, bk) = (dh.principal_index(h), dh.principal_index(k));
                let map = (0..carriers[h].len())
                    .map(|x| g.restrict(bh, bk, x))
                    .collect();
                res.insert((h, k), map);
            }
        }
    }
    Presheaf::new(format!("Λ({})", g.label()), base.clone(), carriers, res)
        .expect("Λ lands in presheaves")
}

pub fn lambda_mor(dh: &DownsetAlgebra, t: &Transformation) -> Transformation {
    let dom = lambda(dh, t.dom());
    let cod = lambda(dh, t.cod());
    let components = dh
        .base
        .elements()
        .map(|h| t.components()[dh.principal_index(h)].clone())
        .collect();
    Transformation::new(dom, cod, components).expect("Λ preserves naturality")
}

/// Verifies the comparison equivalence on an instance: `Γ(F)` is a sheaf
/// and both `x ↦ x†` maps are natural isomorphisms. `g` must be a sheaf
/// over `D(H)`.
pub fn comparison_check(
    dh: &DownsetAlgebra,
    f: &Presheaf,
    g: &Presheaf,
) -> Result<Vec<LawOutcome>, SheafCounterexample> {
    g.is_sheaf()?;
    let mut out = Vec::new();

    let gf = gamma(dh, f);
    out.push(LawOutcome::new(
        "gamma-sheaf",
        gf.is_sheaf().map_err(|c| {
            format!(
                "Γ(F) not a sheaf: cover of {} with {} amalgamations",
                dh.algebra.name(c.cover.of),
                c.count
            )
        }),
    ));

    // unit σ_h : F(h) → ΛΓ(F)(h), x ↦ x†
    let lgf = lambda(dh, &gf);
    let sigma = f
        .algebra()
        .elements()
        .map(|h| {
            (0..f.carrier(h).len())
                .map(|x| {
                    let dagger = f.element_dagger(h, x);
                    lgf.carrier(h)
                        .index_of(&f.describe_family(&dagger))
                        .expect("x† is a matching family over h†")
                })
                .collect()
        })
        .collect();
    match Transformation::new(f.clone(), lgf, sigma) {
        Ok(t) => {
            out.push(LawOutcome::new("unit-natural", Ok(())));
            out.push(LawOutcome::new(
                "unit-bijection",
                if t.is_levelwise_bijection() {
                    Ok(())
                } else {
                    Err("some σ_h is not a bijection".into())
                },
            ));
        }
        Err(e) => out.push(LawOutcome::new("unit-natural", Err(e.to_string()))),
    }

    // counit τ_A : G(A) → ΓΛ(G)(A), x ↦ x†
    let lg = lambda(dh, g);
    let glg = gamma(dh, &lg);
    let tau = dh
        .algebra
        .elements()
        .map(|a| {
            (0..g.carrier(a).len())
                .map(|x| {
                    let values = dh
                        .mask(a)
                        .iter()
                        .map(|h| (h, g.restrict(a, dh.principal_index(h), x)))
                        .collect();
                    let family = MatchingFamily::from_values(dh.mask(a), values);
                    debug_assert!(family.is_matching(&lg));
                    glg.carrier(a)
                        .index_of(&lg.describe_family(&family))
                        .expect("x† is a matching family over A")
                })
                .collect()
        })
        .collect();
    match Transformation::new(g.clone(), glg, tau) {
        Ok(t) => {
            out.push(LawOutcome::new("counit-natural", Ok(())));
            out.push(LawOutcome::new(
                "counit-bijection",
                if t.is_levelwise_bijection() {
                    Ok(())
                } else {
                    Err("some τ_A is not a bijection".into())
                },
            ));
        }
        Err(e) => out.push(LawOutcome::new("counit-natural", Err(e.to_string()))),
    }

    Ok(out)
}

// ---------------------------------------------------------------------------
// Ψ and Φ (pre-transformation comparison)
// ---------------------------------------------------------------------------

/// `Ψ(τ)_X(b,a) = 1 ⟺ τ_h(b,a) = 1 for every h ∈ X`: order-preserving
/// over `H` to infima-preserving over `D(H)`.
pub fn psi(dh: &DownsetAlgebra, pt: &PreTransformation) -> Result<PreTransformation, PtError> {
    if !same_algebra(pt.algebra(), &dh.base) {
        return Err(PtError::AlgebraMismatch);
    }
    if !pt.classify().order_preserving {
        return Err(PtError::Mode("Ψ expects an order-preserving family".into()));
    }
    let mut out =
        PreTransformation::empty(dh.algebra.clone(), pt.source().clone(), pt.target().clone());
    for b in 0..pt.target().len() {
        for a in 0..pt.source().len() {
            let fiber = pt.fiber(b, a);
            let image: ElemSet = dh
                .algebra
                .elements()
                .filter(|&x| dh.mask(x).is_subset(fiber))
                .collect();
            out.set_fiber(b, a, image);
        }
    }
    debug_assert!(out.classify().infima_preserving);
    Ok(out)
}

/// `Φ(τ)_h(b,a) = 1 ⟺ τ_{h†}(b,a) = 1`: infima-preserving over `D(H)` to
/// order-preserving over `H`.
pub fn phi(dh: &DownsetAlgebra, pt: &PreTransformation) -> Result<PreTransformation, PtError> {
    if !same_algebra(pt.algebra(), &dh.algebra) {
        return Err(PtError::AlgebraMismatch);
    }
    if !pt.classify().infima_preserving {
        return Err(PtError::Mode(
            "Φ expects an infima-preserving family".into(),
        ));
    }
    let mut out =
        PreTransformation::empty(dh.base.clone(), pt.source().clone(), pt.target().clone());
    for b in 0..pt.target().len() {
        for a in 0..pt.source().len() {
            let fiber = pt.fiber(b, a);
            let image: ElemSet = dh
                .base
                .elements()
                .filter(|&h| fiber.contains(dh.principal_index(h)))
                .collect();
            out.set_fiber(b, a, image);
        }
    }
    debug_assert!(out.classify().order_preserving);
    Ok(out)
}

// ---------------------------------------------------------------------------
// Δ (presheaf → relational sheaf)
// ---------------------------------------------------------------------------

/// Flat index of `x ∈ F(h)` inside the disjoint-union carrier of `Δ(F)`.
pub fn delta_index(f: &Presheaf, h: Elem, x: usize) -> usize {
    (0..h).map(|k| f.carrier(k).len()).sum::<usize>() + x
}

/// Inverse of [`delta_index`].
pub fn delta_level(f: &Presheaf, mut i: usize) -> (Elem, usize) {
    for h in f.algebra().elements() {
        if i < f.carrier(h).len() {
            return (h, i);
        }
        i -= f.carrier(h).len();
    }
    panic!("index beyond the disjoint union");
}

fn delta_carrier(f: &Presheaf) -> SetRef {
    let alg = f.algebra();
    let mut members = Vec::new();
    for h in alg.elements() {
        for x in 0..f.carrier(h).len() {
            members.push(format!("{}:{}", alg.name(h), f.carrier(h).member(x)));
        }
    }
    Arc::new(FiniteSet::new(format!("Δ({})", f.label()), members))
}

/// Agreement extent of two tagged elements: `⋁{m ≤ k∧l | a|_m = b|_m}`,
/// with `m` ranging over every level at which both restrict.
fn agreement(f: &Presheaf, (k, x): (Elem, usize), (l, y): (Elem, usize)) -> Elem {
    let alg = f.algebra();
    let cap = alg.meet(k, l);
    let agreeing: ElemSet = alg
        .elements()
        .filter(|&m| alg.leq(m, cap) && f.restrict(k, m, x) == f.restrict(l, m, y))
        .collect();
    alg.sup(agreeing)
}

/// `Δ(F)`: the agreement-extent matrix on the disjoint union of carriers.
pub fn delta_obj(f: &Presheaf) -> RelObject {
    let alg = f.algebra().clone();
    let carrier = delta_carrier(f);
    let mut m = FiberMatrix::constant(alg.clone(), carrier.clone(), carrier.clone(), alg.bottom());
    let positions: Vec<(Elem, usize)> = (0..carrier.len()).map(|i| delta_level(f, i)).collect();
    for (i, &p) in positions.iter().enumerate() {
        for (j, &q) in positions.iter().enumerate() {
            m.set_entry(j, i, agreement(f, p, q));
        }
    }
    RelObject::new(m.to_pretrans(), Mode::Inf)
        .expect("the agreement matrix is symmetric, idempotent and infima-preserving")
}

/// `Δ` on transformations: `M(b,a) = Ê_G(b, τ(a))` via the agreement
/// extents of images.
pub fn delta_mor(t: &Transformation) -> RelMorphism {
    let dom = delta_obj(t.dom());
    let cod = delta_obj(t.cod());
    let alg = t.dom().algebra().clone();
    let mut m = FiberMatrix::constant(
        alg,
        dom.carrier().clone(),
        cod.carrier().clone(),
        t.dom().algebra().bottom(),
    );
    for i in 0..dom.carrier().len() {
        let (k, x) = delta_level(t.dom(), i);
        let image = (k, t.apply(k, x));
        for j in 0..cod.carrier().len() {
            let q = delta_level(t.cod(), j);
            m.set_entry(j, i, agreement(t.cod(), q, image));
        }
    }
    RelMorphism::new(dom, cod, m.to_pretrans()).expect("Δ(τ) satisfies the morphism laws")
}

/// The identity `Δ(G)(h)(b, τ_k(a)) = 1 ⟺ Δ(τ)_h(b,a) = 1`, checked over
/// all levels and pairs.
pub fn delta_key_identity(t: &Transformation) -> Result<(), String> {
    let dt = delta_mor(t);
    let cod_obj = delta_obj(t.cod());
    let e = cod_obj.matrix();
    let mt = dt.pt().to_matrix().expect("Δ(τ) is infima-preserving");
    for i in 0..dt.domain().carrier().len() {
        let (k, x) = delta_level(t.dom(), i);
        let image = delta_index(t.cod(), k, t.apply(k, x));
        for j in 0..dt.codomain().carrier().len() {
            if e.entry(j, image) != mt.entry(j, i) {
                return Err(format!(
                    "entry ({j},{i}): Ê_G(b,τa) = {} but Δ(τ) = {}",
                    t.dom().algebra().name(e.entry(j, image)),
                    t.dom().algebra().name(mt.entry(j, i)),
                ));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Θ (relational sheaf → presheaf of singletons)
// ---------------------------------------------------------------------------

/// The singleton lists per level that `Θ` is built from.
pub fn theta_singletons(f: &RelObject) -> Vec<Vec<Singleton>> {
    f.algebra()
        .elements()
        .map(|h| enumerate_singletons(f, h))
        .collect()
}

/// `Θ(F)(h) = {singletons F_h → F}` with restriction `α ↦ α|_k`.
pub fn theta_obj(f: &RelObject) -> Presheaf {
    assert_eq!(f.mode(), Mode::Inf, "Θ runs on relational sheaves");
    let alg = f.algebra().clone();
    let singles = theta_singletons(f);
    let label = format!("Θ({})", f.carrier().label());
    let carriers: Vec<SetRef> = alg
        .elements()
        .map(|h| {
            let names = singles[h].iter().map(|s| s.name(&alg)).collect();
            Arc::new(FiniteSet::new(format!("{label}@{}", alg.name(h)), names))
        })
        .collect();
    let mut res = HashMap::new();
    for h in alg.elements() {
        for k in alg.elements() {
            if h != k && alg.leq(k, h) {
                let map = singles[h]
                    .iter()
                    .map(|s| {
                        let r = s.restricted(f, k).expect("k ≤ h");
                        singles[k]
                            .iter()
                            .position(|c| *c == r)
                            .expect("restrictions of singletons are singletons")
                    })
                    .collect();
                res.insert((h, k), map);
            }
        }
    }
    Presheaf::new(label, alg, carriers, res).expect("Θ output is functorial")
}

/// `Θ(τ)_h(α) = τ∘α`, computed by matrix action and re-validated; an
/// invalid result would mean a law violation upstream, so it aborts.
pub fn theta_mor(m: &RelMorphism) -> Transformation {
    let dom = theta_obj(m.domain());
    let cod = theta_obj(m.codomain());
    let alg = m.domain().algebra().clone();
    let mm = m.pt().to_matrix().expect("Inf morphisms have matrices");
    let singles_dom = theta_singletons(m.domain());
    let singles_cod = theta_singletons(m.codomain());
    let components = alg
        .elements()
        .map(|h| {
            singles_dom[h]
                .iter()
                .map(|alpha| {
                    let extent: Vec<Elem> = (0..m.codomain().carrier().len())
                        .map(|x| {
                            (0..m.domain().carrier().len()).fold(alg.bottom(), |s, y| {
                                alg.join(s, alg.meet(mm.entry(x, y), alpha.value(y)))
                            })
                        })
                        .collect();
                    let image = Singleton::new(m.codomain(), h, extent)
                        .expect("morphism action must produce a singleton");
                    singles_cod[h]
                        .iter()
                        .position(|c| *c == image)
                        .expect("enumerate_singletons is exhaustive")
                })
                .collect()
        })
        .collect();
    Transformation::new(dom, cod, components).expect("Θ preserves naturality")
}

// ---------------------------------------------------------------------------
// η and ε
// ---------------------------------------------------------------------------

/// The unit `η_F: F → ΘΔ(F)`, `x ↦ α_x`.
pub fn eta(f: &Presheaf) -> Transformation {
    let df = delta_obj(f);
    let cod = theta_obj(&df);
    let singles = theta_singletons(&df);
    let components = f
        .algebra()
        .elements()
        .map(|h| {
            (0..f.carrier(h).len())
                .map(|x| {
                    let rep = representable_singleton(&df, delta_index(f, h, x));
                    debug_assert_eq!(rep.level(), h);
                    singles[h]
                        .iter()
                        .position(|c| *c == rep)
                        .expect("representables are singletons")
                })
                .collect()
        })
        .collect();
    Transformation::new(f.clone(), cod, components).expect("η is natural")
}

/// The counit `ε_F: ΔΘ(F) → F` with `ε_h(x,α) = 1 ⟺ α_h(x,*) = 1`,
/// i.e. matrix entry `α(x)` at each tagged singleton.
pub fn epsilon(f: &RelObject) -> RelMorphism {
    let theta = theta_obj(f);
    let singles = theta_singletons(f);
    let dom = delta_obj(&theta);
    let alg = f.algebra().clone();
    let mut m = FiberMatrix::constant(
        alg.clone(),
        dom.carrier().clone(),
        f.carrier().clone(),
        alg.bottom(),
    );
    for j in 0..dom.carrier().len() {
        let (k, idx) = delta_level(&theta, j);
        let alpha = &singles[k][idx];
        for x in 0..f.carrier().len() {
            m.set_entry(x, j, alpha.value(x));
        }
    }
    RelMorphism::new(dom, f.clone(), m.to_pretrans()).expect("ε satisfies the morphism laws")
}

/// Exact isomorphism laws of the counit: `ε°∘ε = ΔΘ(F)` and `ε∘ε° = F`.
pub fn epsilon_iso_laws(f: &RelObject) -> Result<(), String> {
    let e = epsilon(f);
    let conv = e.pt().involution();
    let left = PreTransformation::compose_inf(&conv, e.pt()).map_err(|e| e.to_string())?;
    if left != *e.domain().pt() {
        return Err("ε°∘ε ≠ ΔΘ(F)".into());
    }
    let right = PreTransformation::compose_inf(e.pt(), &conv).map_err(|e| e.to_string())?;
    if right != *f.pt() {
        return Err("ε∘ε° ≠ F".into());
    }
    Ok(())
}

/// Naturality of `η` against a transformation: `ΘΔ(τ)∘η_F = η_G∘τ`.
pub fn eta_naturality(t: &Transformation) -> Result<(), String> {
    let left = Transformation::compose(&theta_mor(&delta_mor(t)), &eta(t.dom()));
    let right = Transformation::compose(&eta(t.cod()), t);
    if left == right {
        Ok(())
    } else {
        Err("η naturality square does not commute".into())
    }
}

/// Naturality of `ε` against a morphism of relational sheaves:
/// `τ∘ε_F = ε_G∘ΔΘ(τ)`.
pub fn epsilon_naturality(m: &RelMorphism) -> Result<(), String> {
    let left = RelMorphism::compose(m, &epsilon(m.domain())).map_err(|e| e.to_string())?;
    let right = RelMorphism::compose(&epsilon(m.codomain()), &delta_mor(&theta_mor(m)))
        .map_err(|e| e.to_string())?;
    if left.pt() == right.pt() {
        Ok(())
    } else {
        Err("ε naturality square does not commute".into())
    }
}

/// Triangle `Θ(ε_F) ∘ η_{Θ(F)} = id_{Θ(F)}`.
pub fn triangle_right(f: &RelObject) -> Result<(), String> {
    let theta = theta_obj(f);
    let composite = Transformation::compose(&theta_mor(&epsilon(f)), &eta(&theta));
    if composite == Transformation::identity(&theta) {
        Ok(())
    } else {
        Err("Θε ∘ ηΘ ≠ id".into())
    }
}

/// Triangle `ε_{Δ(F)} ∘ Δ(η_F) = id_{Δ(F)}` (the identity of `Δ(F)` in the
/// Karoubian envelope is `Δ(F)` itself).
pub fn triangle_left(f: &Presheaf) -> Result<(), String> {
    let df = delta_obj(f);
    let composite =
        RelMorphism::compose(&epsilon(&df), &delta_mor(&eta(f))).map_err(|e| e.to_string())?;
    if composite.pt() == df.pt() {
        Ok(())
    } else {
        Err("εΔ ∘ Δη ≠ id".into())
    }
}

// ---------------------------------------------------------------------------
// Singleton flattening and the sheaf criterion
// ---------------------------------------------------------------------------

/// Flattens a singleton `A: F_h → ΔΘ(F)` to a singleton `α: F_h → F` by
/// `α(x) = ⋁_γ (γ(x) ∧ A(γ))`.
pub fn flatten_singleton(f: &RelObject, a: &Singleton) -> Singleton {
    let theta = theta_obj(f);
    let singles = theta_singletons(f);
    let alg = f.algebra();
    let extent: Vec<Elem> = (0..f.carrier().len())
        .map(|x| {
            (0..a.extent().len()).fold(alg.bottom(), |s, j| {
                let (k, idx) = delta_level(&theta, j);
                alg.join(s, alg.meet(singles[k][idx].value(x), a.value(j)))
            })
        })
        .collect();
    Singleton::new(f, a.level(), extent).expect("flattening lands in singletons")
}

/// Checks that flattening represents: `A = ΔΘ(F)(−, α)` for the flattened
/// `α`, which is what makes `η_{Θ(F)}` an isomorphism.
pub fn flatten_represents(f: &RelObject, a: &Singleton) -> Result<(), String> {
    let alpha = flatten_singleton(f, a);
    let theta = theta_obj(f);
    let singles = theta_singletons(f);
    let idx = singles[alpha.level()]
        .iter()
        .position(|c| *c == alpha)
        .ok_or("flattened extent is not an enumerated singleton")?;
    let dtf = delta_obj(&theta);
    let rep = representable_singleton(&dtf, delta_index(&theta, alpha.level(), idx));
    if rep == *a {
        Ok(())
    } else {
        Err("A is not the representable of its flattening".into())
    }
}

/// Computes both routes of the sheaf criterion independently: the cover
/// quantification and bijectivity of every `η` component.
pub fn sheaf_iff_eta_iso(f: &Presheaf) -> (Result<(), SheafCounterexample>, bool) {
    (f.is_sheaf(), eta(f).is_levelwise_bijection())
}

/// For an Inf object reinterpreted levelwise, `compose_ord(F,F) ≤ F`
/// always; returns `(≤ holds, equality holds)`.
pub fn mode_degradation(f: &RelObject) -> (bool, bool) {
    let square =
        PreTransformation::compose_ord(f.pt(), f.pt()).expect("principal fibers are down-closed");
    (
        square.leq(f.pt()).expect("same carriers"),
        square == *f.pt(),
    )
}

// ---------------------------------------------------------------------------
// The associated functors
// ---------------------------------------------------------------------------

/// Associated sheaf functor `a_Shv = Θ∘Δ`.
pub fn a_shv(f: &Presheaf) -> Presheaf {
    theta_obj(&delta_obj(f))
}

/// `Δ_Pre = Φ∘Δ_Shv∘Γ`: a presheaf on `H` to a relational presheaf (Ord
/// object) on `H`, through sheaves on `D(H)`.
pub fn delta_pre(dh: &DownsetAlgebra, f: &Presheaf) -> RelObject {
    let inf_obj = delta_obj(&gamma(dh, f));
    let pt = phi(dh, inf_obj.pt()).expect("Δ_Shv output is infima-preserving over D(H)");
    RelObject::new(pt, Mode::Ord).expect("Φ carries objects to objects")
}

/// `Θ_Pre = Λ∘Θ_Shv∘Ψ`: a relational presheaf (Ord object) on `H` to a
/// presheaf on `H`.
pub fn theta_pre(dh: &DownsetAlgebra, g: &RelObject) -> Presheaf {
    assert_eq!(g.mode(), Mode::Ord, "Θ_Pre runs on relational presheaves");
    let pt = psi(dh, g.pt()).expect("Ψ expects order-preserving objects");
    let inf_obj = RelObject::new(pt, Mode::Inf).expect("Ψ carries objects to objects");
    lambda(dh, &theta_obj(&inf_obj))
}

/// Associated relational-sheaf functor `a_Rel = Δ∘Θ_Pre`.
pub fn a_rel(dh: &DownsetAlgebra, g: &RelObject) -> RelObject {
    delta_obj(&theta_pre(dh, g))
}

/// The equivalence route `Θ_Pre(Δ_Pre(F)) ≅ F`: builds the composite
/// isomorphism `η_{Γ(F),h†} ∘ σ_h` levelwise and checks naturality and
/// bijectivity.
pub fn pre_equivalence_iso(dh: &DownsetAlgebra, f: &Presheaf) -> Result<(), String> {
    let round = theta_pre(dh, &delta_pre(dh, f));
    let gf = gamma(dh, f);
    let eta_gf = eta(&gf);
    let components = f
        .algebra()
        .elements()
        .map(|h| {
            let a = dh.principal_index(h);
            (0..f.carrier(h).len())
                .map(|x| {
                    let dagger = f.element_dagger(h, x);
                    let idx = gf
                        .carrier(a)
                        .index_of(&f.describe_family(&dagger))
                        .expect("x† is a matching family");
                    eta_gf.apply(a, idx)
                })
                .collect()
        })
        .collect();
    let iso = Transformation::new(f.clone(), round, components).map_err(|e| e.to_string())?;
    if iso.is_levelwise_bijection() {
        Ok(())
    } else {
        Err("Θ_Pre∘Δ_Pre is not levelwise bijective to the identity".into())
    }
}
