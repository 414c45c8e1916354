//! Laws of the pre-transformation calculus checked against the definitional
//! search oracles and by enumeration over the small fixture algebras.

use std::sync::Arc;

use proptest::prelude::*;

use relsheaf_core::definitional::{compose_inf_family_search, compose_ord_search};
use relsheaf_core::heyting::{ElemSet, HeytingAlgebra};
use relsheaf_core::pretrans::{check_morphism, check_object, Mode, PreTransformation, RelObject};
use relsheaf_core::rel::{FiniteSet, Relation, SetRef};
use relsheaf_core::{fixtures, functor};

fn carrier(label: &str, members: &[&str]) -> SetRef {
    Arc::new(FiniteSet::new(
        label,
        members.iter().map(|s| s.to_string()).collect(),
    ))
}

fn pt_from_masks(
    alg: &Arc<HeytingAlgebra>,
    src: &SetRef,
    tgt: &SetRef,
    masks: &[u64],
) -> PreTransformation {
    let fibers = masks.iter().map(|&m| ElemSet(m)).collect();
    PreTransformation::new(alg.clone(), src.clone(), tgt.clone(), fibers)
}

/// Every order-preserving pre-transformation between the given carriers.
fn all_ord(alg: &Arc<HeytingAlgebra>, src: &SetRef, tgt: &SetRef) -> Vec<PreTransformation> {
    let downsets = alg.all_down_sets();
    let entries = src.len() * tgt.len();
    let mut out = Vec::new();
    let mut combo = vec![0usize; entries];
    loop {
        let fibers: Vec<ElemSet> = combo.iter().map(|&i| downsets[i]).collect();
        out.push(PreTransformation::new(
            alg.clone(),
            src.clone(),
            tgt.clone(),
            fibers,
        ));
        let mut i = 0;
        loop {
            if i == entries {
                return out;
            }
            combo[i] += 1;
            if combo[i] < downsets.len() {
                break;
            }
            combo[i] = 0;
            i += 1;
        }
    }
}

/// Every infima-preserving pre-transformation between the given carriers.
fn all_inf(alg: &Arc<HeytingAlgebra>, src: &SetRef, tgt: &SetRef) -> Vec<PreTransformation> {
    let principals: Vec<ElemSet> = alg.elements().map(|e| alg.principal(e).members()).collect();
    let entries = src.len() * tgt.len();
    let mut out = Vec::new();
    let mut combo = vec![0usize; entries];
    loop {
        let fibers: Vec<ElemSet> = combo.iter().map(|&i| principals[i]).collect();
        out.push(PreTransformation::new(
            alg.clone(),
            src.clone(),
            tgt.clone(),
            fibers,
        ));
        let mut i = 0;
        loop {
            if i == entries {
                return out;
            }
            combo[i] += 1;
            if combo[i] < principals.len() {
                break;
            }
            combo[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn compose_ord_matches_definitional_search_exhaustively_over_h2() {
    let h2 = Arc::new(fixtures::h2());
    let a = carrier("A", &["a0", "a1"]);
    let b = carrier("B", &["b0", "b1"]);
    let c = carrier("C", &["c0", "c1"]);
    let taus = all_ord(&h2, &a, &b);
    let sigmas = all_ord(&h2, &b, &c);
    for sigma in &sigmas {
        for tau in &taus {
            let fast = PreTransformation::compose_ord(sigma, tau).unwrap();
            assert_eq!(fast, compose_ord_search(sigma, tau));
        }
    }
}

#[test]
fn compose_inf_matches_family_search_exhaustively_over_c3() {
    let c3 = Arc::new(fixtures::c3());
    let a = carrier("A", &["a0", "a1"]);
    let b = carrier("B", &["b0", "b1"]);
    let c = carrier("C", &["c0", "c1"]);
    let taus = all_inf(&c3, &a, &b);
    let sigmas = all_inf(&c3, &b, &c);
    for sigma in &sigmas {
        for tau in &taus {
            let fast = PreTransformation::compose_inf(sigma, tau).unwrap();
            assert_eq!(fast, compose_inf_family_search(sigma, tau));
        }
    }
}

#[test]
fn classification_matches_the_functional_characterization() {
    // order-preserving iff h ≤ k implies τ_k ⊆ τ_h; infima-preserving iff
    // τ_{⋁S} = ∩_{s∈S} τ_s for every subset S (the empty S forcing τ_⊥
    // total). This is the functional reading; classify() uses fibers.
    let b4 = Arc::new(fixtures::b4());
    let a = carrier("A", &["a0", "a1"]);
    let mut lcg = 0x9e3779b97f4a7c15u64;
    for _ in 0..500 {
        let mut masks = [0u64; 4];
        for m in masks.iter_mut() {
            lcg = lcg
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            *m = (lcg >> 33) & 0xf;
        }
        let pt = pt_from_masks(&b4, &a, &a, &masks);
        let flavor = pt.classify();

        let antitone = b4.elements().all(|h| {
            b4.elements()
                .all(|k| !b4.leq(h, k) || pt.level(k).leq(&pt.level(h)).unwrap())
        });
        assert_eq!(flavor.order_preserving, antitone);

        let inf_functional = (0u64..1 << b4.len()).all(|mask| {
            let set = ElemSet(mask);
            let at_sup = pt.level(b4.sup(set));
            let mut inter = Relation::total(a.clone(), a.clone());
            for s in set.iter() {
                let mut next = Relation::empty(a.clone(), a.clone());
                for bb in 0..2 {
                    for aa in 0..2 {
                        next.set(bb, aa, inter.get(bb, aa) && pt.level(s).get(bb, aa));
                    }
                }
                inter = next;
            }
            at_sup == inter
        });
        assert_eq!(flavor.infima_preserving, inf_functional);
    }
}

#[test]
fn bottom_is_in_every_fiber_after_compose_inf() {
    let b4 = Arc::new(fixtures::b4());
    let a = carrier("A", &["a0", "a1", "a2"]);
    let every = all_inf(&b4, &a, &a);
    for tau in every.iter().step_by(97) {
        for sigma in every.iter().step_by(101) {
            let comp = PreTransformation::compose_inf(sigma, tau).unwrap();
            for bb in 0..3 {
                for aa in 0..3 {
                    assert!(comp.fiber(bb, aa).contains(b4.bottom()));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ord_composition_is_associative(ma in prop::collection::vec(0u64..16, 4),
                                      mb in prop::collection::vec(0u64..16, 4),
                                      mc in prop::collection::vec(0u64..16, 4)) {
        let b4 = Arc::new(fixtures::b4());
        let a = carrier("A", &["a0", "a1"]);
        let close = |masks: &[u64]| -> Vec<u64> {
            masks.iter().map(|&m| b4.down_closure(ElemSet(m)).members().0).collect()
        };
        let t1 = pt_from_masks(&b4, &a, &a, &close(&ma));
        let t2 = pt_from_masks(&b4, &a, &a, &close(&mb));
        let t3 = pt_from_masks(&b4, &a, &a, &close(&mc));
        let left = PreTransformation::compose_ord(
            &PreTransformation::compose_ord(&t3, &t2).unwrap(), &t1).unwrap();
        let right = PreTransformation::compose_ord(
            &t3, &PreTransformation::compose_ord(&t2, &t1).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn inf_composition_is_associative(ea in prop::collection::vec(0usize..4, 4),
                                      eb in prop::collection::vec(0usize..4, 4),
                                      ec in prop::collection::vec(0usize..4, 4)) {
        let b4 = Arc::new(fixtures::b4());
        let a = carrier("A", &["a0", "a1"]);
        let prin = |es: &[usize]| -> Vec<u64> {
            es.iter().map(|&e| b4.principal(e).members().0).collect()
        };
        let t1 = pt_from_masks(&b4, &a, &a, &prin(&ea));
        let t2 = pt_from_masks(&b4, &a, &a, &prin(&eb));
        let t3 = pt_from_masks(&b4, &a, &a, &prin(&ec));
        let left = PreTransformation::compose_inf(
            &PreTransformation::compose_inf(&t3, &t2).unwrap(), &t1).unwrap();
        let right = PreTransformation::compose_inf(
            &t3, &PreTransformation::compose_inf(&t2, &t1).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn involution_reverses_composition(ma in prop::collection::vec(0u64..16, 4),
                                       mb in prop::collection::vec(0u64..16, 4)) {
        let b4 = Arc::new(fixtures::b4());
        let a = carrier("A", &["a0", "a1"]);
        let close = |masks: &[u64]| -> Vec<u64> {
            masks.iter().map(|&m| b4.down_closure(ElemSet(m)).members().0).collect()
        };
        let tau = pt_from_masks(&b4, &a, &a, &close(&ma));
        let sigma = pt_from_masks(&b4, &a, &a, &close(&mb));
        let lhs = PreTransformation::compose_ord(&sigma, &tau).unwrap().involution();
        let rhs = PreTransformation::compose_ord(&tau.involution(), &sigma.involution()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(tau.involution().involution(), tau);
    }

    #[test]
    fn composition_is_monotone(ma in prop::collection::vec(0u64..16, 4),
                               mb in prop::collection::vec(0u64..16, 4),
                               mc in prop::collection::vec(0u64..16, 4)) {
        let b4 = Arc::new(fixtures::b4());
        let a = carrier("A", &["a0", "a1"]);
        let close = |masks: &[u64]| -> Vec<u64> {
            masks.iter().map(|&m| b4.down_closure(ElemSet(m)).members().0).collect()
        };
        let small = pt_from_masks(&b4, &a, &a, &close(&ma));
        // grow `small` by unioning with another family
        let mut big = small.clone();
        for (i, &m) in close(&mb).iter().enumerate() {
            let (bb, aa) = (i / 2, i % 2);
            big.set_fiber(bb, aa, big.fiber(bb, aa).union(ElemSet(m)));
        }
        let other = pt_from_masks(&b4, &a, &a, &close(&mc));
        let left_small = PreTransformation::compose_ord(&other, &small).unwrap();
        let left_big = PreTransformation::compose_ord(&other, &big).unwrap();
        prop_assert!(left_small.leq(&left_big).unwrap());
        let right_small = PreTransformation::compose_ord(&small, &other).unwrap();
        let right_big = PreTransformation::compose_ord(&big, &other).unwrap();
        prop_assert!(right_small.leq(&right_big).unwrap());
    }

    #[test]
    fn matrix_roundtrip(entries in prop::collection::vec(0usize..4, 4)) {
        let b4 = Arc::new(fixtures::b4());
        let a = carrier("A", &["a0", "a1"]);
        let prin: Vec<u64> = entries.iter().map(|&e| b4.principal(e).members().0).collect();
        let pt = pt_from_masks(&b4, &a, &a, &prin);
        let m = pt.to_matrix().unwrap();
        prop_assert_eq!(m.to_pretrans(), pt);
        for (i, &e) in entries.iter().enumerate() {
            prop_assert_eq!(m.entry(i / 2, i % 2), e);
        }
    }

    #[test]
    fn sup_enrichment_distributes(parts in prop::collection::vec(
        prop::collection::vec(0usize..4, 4), 1..4),
        other in prop::collection::vec(0usize..4, 4)) {
        let b4 = Arc::new(fixtures::b4());
        let a = carrier("A", &["a0", "a1"]);
        let prin = |es: &[usize]| -> Vec<u64> {
            es.iter().map(|&e| b4.principal(e).members().0).collect()
        };
        let family: Vec<PreTransformation> =
            parts.iter().map(|es| pt_from_masks(&b4, &a, &a, &prin(es))).collect();
        let refs: Vec<&PreTransformation> = family.iter().collect();
        let sigma = pt_from_masks(&b4, &a, &a, &prin(&other));

        let joined = PreTransformation::sup_family(Mode::Inf, &refs).unwrap();
        let left = PreTransformation::compose_inf(&sigma, &joined).unwrap();
        let composed: Vec<PreTransformation> = family
            .iter()
            .map(|t| PreTransformation::compose_inf(&sigma, t).unwrap())
            .collect();
        let refs2: Vec<&PreTransformation> = composed.iter().collect();
        let right = PreTransformation::sup_family(Mode::Inf, &refs2).unwrap();
        prop_assert_eq!(left, right);
    }
}

#[test]
fn symmetric_map_rigidity_in_rel() {
    // rigidity of symmetric maps: if f ≤ g and both are maps, then f = g
    let a = carrier("A", &["a0", "a1"]);
    let b = carrier("B", &["b0", "b1", "b2"]);
    let total = a.len() * b.len();
    let mut maps = Vec::new();
    for bits in 0u64..1 << total {
        let mut r = Relation::empty(a.clone(), b.clone());
        for i in 0..total {
            if bits >> i & 1 == 1 {
                r.set(i / a.len(), i % a.len(), true);
            }
        }
        if r.is_map() {
            maps.push(r);
        }
    }
    assert_eq!(maps.len(), b.len().pow(a.len() as u32));
    for f in &maps {
        for g in &maps {
            if f.leq(g).unwrap() {
                assert_eq!(f, g);
            }
        }
    }
}

#[test]
fn map_star_rigidity_in_pt() {
    // morphisms between fixed Inf objects ordered by inclusion collapse to
    // equality
    let h2 = Arc::new(fixtures::h2());
    let a = carrier("A", &["a0", "a1"]);
    let objects: Vec<RelObject> = all_inf(&h2, &a, &a)
        .into_iter()
        .filter_map(|pt| RelObject::new(pt, Mode::Inf).ok())
        .collect();
    assert!(!objects.is_empty());
    for dom in &objects {
        for cod in &objects {
            let morphisms: Vec<PreTransformation> = all_inf(&h2, &a, &a)
                .into_iter()
                .filter(|pt| check_morphism(pt, dom, cod).is_ok())
                .collect();
            for f in &morphisms {
                for g in &morphisms {
                    if f.leq(g).unwrap() {
                        assert_eq!(f, g);
                    }
                }
            }
        }
    }
}

#[test]
fn mode_degradation_is_lax_and_sometimes_strict_equality() {
    // compose_ord(F,F) ≤ F for every Inf object; equality witnesses exist
    let h2 = Arc::new(fixtures::h2());
    let a = carrier("A", &["a0", "a1"]);
    let mut equality_seen = false;
    for pt in all_inf(&h2, &a, &a) {
        if let Ok(obj) = RelObject::new(pt, Mode::Inf) {
            let (lax, equal) = functor::mode_degradation(&obj);
            assert!(lax);
            equality_seen |= equal;
        }
    }
    assert!(equality_seen);

    for f in [fixtures::sep(), fixtures::nsh(), fixtures::mis()] {
        let (lax, _) = functor::mode_degradation(&functor::delta_obj(&f));
        assert!(lax);
    }
}

#[test]
fn ord_objects_exist_and_check() {
    // the diagonal family is an Ord object on any carrier
    let b4 = Arc::new(fixtures::b4());
    let a = carrier("A", &["a0", "a1", "a2"]);
    let id = PreTransformation::identity(b4, a);
    assert!(check_object(&id, Mode::Ord).is_ok());
}
