//! The adjunction between presheaves and relational sheaves: the agreement
//! matrix, singleton presheaves, unit and counit, triangle identities,
//! flattening, the sheaf criterion, and the associated functors.

use std::collections::HashMap;
use std::sync::Arc;

use relsheaf_core::definitional::singleton_morphisms_brute;
use relsheaf_core::heyting::{downset_algebra, HeytingAlgebra};
use relsheaf_core::presheaf::{level_carrier, Presheaf, Transformation};
use relsheaf_core::pretrans::{check_object, FiberMatrix, Mode, PreTransformation, RelObject};
use relsheaf_core::rel::{FiniteSet, SetRef};
use relsheaf_core::singleton::{
    agreement_extent, agreement_sides, enumerate_singletons, representable_singleton,
    singleton_object,
};
use relsheaf_core::{fixtures, functor};

fn b4_elems() -> (HeytingAlgebra, usize, usize, usize, usize) {
    let b4 = fixtures::b4();
    let bot = b4.bottom();
    let a = b4.index_of("a").unwrap();
    let b = b4.index_of("b").unwrap();
    let top = b4.top();
    (b4, bot, a, b, top)
}

#[test]
fn delta_of_sep_is_the_meet_of_levels() {
    let sep = fixtures::sep();
    let d = functor::delta_obj(&sep);
    let e = d.matrix();
    let alg = sep.algebra();
    for i in 0..d.carrier().len() {
        let (k, _) = functor::delta_level(&sep, i);
        assert_eq!(e.entry(i, i), k);
        for j in 0..d.carrier().len() {
            let (l, _) = functor::delta_level(&sep, j);
            assert_eq!(e.entry(j, i), alg.meet(k, l));
        }
    }
}

#[test]
fn delta_of_nsh_merges_the_top_sections() {
    let nsh = fixtures::nsh();
    let d = functor::delta_obj(&nsh);
    let e = d.matrix();
    let alg = nsh.algebra();
    let top = alg.top();
    let x = functor::delta_index(&nsh, top, 0);
    let y = functor::delta_index(&nsh, top, 1);
    assert_eq!(e.entry(y, x), top);
    assert_eq!(e.entry(x, y), top);
}

#[test]
fn narrow_agreement_reading_fails_idempotency() {
    // restricting the agreement supremum to the home levels of the two
    // sections breaks transitivity: NSH witnesses it
    let nsh = fixtures::nsh();
    let alg = nsh.algebra().clone();
    let d = functor::delta_obj(&nsh);
    let size = d.carrier().len();
    let mut narrow = FiberMatrix::constant(
        alg.clone(),
        d.carrier().clone(),
        d.carrier().clone(),
        alg.bottom(),
    );
    for i in 0..size {
        let (k, xi) = functor::delta_level(&nsh, i);
        for j in 0..size {
            let (l, xj) = functor::delta_level(&nsh, j);
            let cap = alg.meet(k, l);
            let entry = if nsh.restrict(k, cap, xi) == nsh.restrict(l, cap, xj) {
                cap
            } else {
                alg.bottom()
            };
            narrow.set_entry(j, i, entry);
        }
    }
    let narrow_pt = narrow.to_pretrans();
    assert!(matches!(
        check_object(&narrow_pt, Mode::Inf),
        Err(relsheaf_core::pretrans::ObjectViolation::Idempotent { .. })
    ));
    // while the wide reading is an object by construction
    assert!(check_object(functor::delta_obj(&nsh).pt(), Mode::Inf).is_ok());
}

#[test]
fn delta_on_identities_and_composites() {
    let nsh = fixtures::nsh();
    let id = Transformation::identity(&nsh);
    let d_id = functor::delta_mor(&id);
    assert_eq!(d_id.pt(), functor::delta_obj(&nsh).pt());

    let collapse = fixtures::collapse_nsh_to_sep();
    let pick = fixtures::pick_x_sep_to_nsh();
    for (second, first) in [(&collapse, &pick), (&pick, &collapse)] {
        let lhs = functor::delta_mor(&Transformation::compose(second, first));
        let rhs = relsheaf_core::pretrans::RelMorphism::compose(
            &functor::delta_mor(second),
            &functor::delta_mor(first),
        )
        .unwrap();
        assert_eq!(lhs.pt(), rhs.pt());
    }
}

#[test]
fn delta_key_identity_on_fixture_transformations() {
    for t in [
        fixtures::collapse_nsh_to_sep(),
        fixtures::pick_x_sep_to_nsh(),
    ] {
        assert!(functor::delta_key_identity(&t).is_ok());
    }
}

#[test]
fn morphism_composition_is_associative_and_unital() {
    use relsheaf_core::pretrans::RelMorphism;
    let c = functor::delta_mor(&fixtures::collapse_nsh_to_sep());
    let p = functor::delta_mor(&fixtures::pick_x_sep_to_nsh());
    let id_dom = RelMorphism::identity(c.domain());
    let id_cod = RelMorphism::identity(c.codomain());
    assert_eq!(RelMorphism::compose(&c, &id_dom).unwrap(), c);
    assert_eq!(RelMorphism::compose(&id_cod, &c).unwrap(), c);

    let left = RelMorphism::compose(&RelMorphism::compose(&c, &p).unwrap(), &c).unwrap();
    let right = RelMorphism::compose(&c, &RelMorphism::compose(&p, &c).unwrap()).unwrap();
    assert_eq!(left, right);
}

#[test]
fn singleton_normal_form_matches_brute_force() {
    // every Inf object over H2 and C3 with carriers of size ≤ 2
    for alg in [Arc::new(fixtures::h2()), Arc::new(fixtures::c3())] {
        for size in 1..=2usize {
            let members: Vec<String> = (0..size).map(|i| format!("a{i}")).collect();
            let car: SetRef = Arc::new(FiniteSet::new("A", members));
            let entries = size * size;
            let mut combo = vec![0usize; entries];
            loop {
                let mut m =
                    FiberMatrix::constant(alg.clone(), car.clone(), car.clone(), alg.bottom());
                for b in 0..size {
                    for a in 0..size {
                        m.set_entry(b, a, combo[b * size + a]);
                    }
                }
                if let Ok(obj) = RelObject::new(m.to_pretrans(), Mode::Inf) {
                    for h in alg.elements() {
                        let mut fast: Vec<PreTransformation> = enumerate_singletons(&obj, h)
                            .iter()
                            .map(|s| s.to_pretrans(&obj))
                            .collect();
                        let mut brute = singleton_morphisms_brute(&obj, h);
                        let key = |pt: &PreTransformation| {
                            (0..pt.target().len())
                                .map(|y| pt.fiber(y, 0).0)
                                .collect::<Vec<u64>>()
                        };
                        fast.sort_by_key(key);
                        brute.sort_by_key(key);
                        assert_eq!(fast, brute);
                    }
                }
                let mut i = 0;
                loop {
                    if i == entries {
                        break;
                    }
                    combo[i] += 1;
                    if combo[i] < alg.len() {
                        break;
                    }
                    combo[i] = 0;
                    i += 1;
                }
                if i == entries {
                    break;
                }
            }
        }
    }
}

#[test]
fn theta_counts_on_fixtures() {
    let (_, bot, a, b, top) = b4_elems();

    let t_nsh = functor::theta_obj(&functor::delta_obj(&fixtures::nsh()));
    assert_eq!(t_nsh.carrier(top).len(), 1);

    let mis = fixtures::mis();
    let d_mis = functor::delta_obj(&mis);
    let t_mis = functor::theta_obj(&d_mis);
    assert_eq!(t_mis.carrier(top).len(), 1);
    let singles = enumerate_singletons(&d_mis, top);
    assert_eq!(singles.len(), 1);
    // extent p↦a, q↦b, s↦⊥ in the disjoint union order s,p,q
    let p = functor::delta_index(&mis, a, 0);
    let q = functor::delta_index(&mis, b, 0);
    let s = functor::delta_index(&mis, bot, 0);
    assert_eq!(singles[0].value(p), a);
    assert_eq!(singles[0].value(q), b);
    assert_eq!(singles[0].value(s), bot);

    for f in [fixtures::sep(), fixtures::nsh(), fixtures::mis()] {
        let theta = functor::theta_obj(&functor::delta_obj(&f));
        assert_eq!(theta.carrier(bot).len(), 1);
    }
    let t_per = functor::theta_obj(&fixtures::per_h2());
    assert_eq!(
        t_per.carrier(fixtures::per_h2().algebra().bottom()).len(),
        1
    );
}

#[test]
fn representables_in_delta_sep() {
    let sep = fixtures::sep();
    let d = functor::delta_obj(&sep);
    let alg = sep.algebra();
    let e = d.matrix();
    for x in 0..d.carrier().len() {
        let (k, _) = functor::delta_level(&sep, x);
        let rep = representable_singleton(&d, x);
        assert_eq!(rep.level(), e.entry(x, x));
        for y in 0..d.carrier().len() {
            let (l, _) = functor::delta_level(&sep, y);
            assert_eq!(rep.value(y), alg.meet(k, l));
        }
        assert_eq!(rep.value(x), e.entry(x, x));
    }
}

#[test]
fn eta_detects_sheafhood_failures() {
    let (_, _, _, _, top) = b4_elems();

    // SEP: bijection at every level
    assert!(functor::eta(&fixtures::sep()).is_levelwise_bijection());

    // NSH: x and y map to the same representable at ⊤
    let nsh = fixtures::nsh();
    let eta_nsh = functor::eta(&nsh);
    assert_eq!(eta_nsh.apply(top, 0), eta_nsh.apply(top, 1));

    // MIS: empty carrier at ⊤ but one singleton, so not surjective
    let mis = fixtures::mis();
    let eta_mis = functor::eta(&mis);
    assert_eq!(mis.carrier(top).len(), 0);
    assert_eq!(eta_mis.cod().carrier(top).len(), 1);
    assert!(!eta_mis.is_levelwise_bijection());
}

#[test]
fn epsilon_isomorphism_laws() {
    let b4 = Arc::new(fixtures::b4());
    for obj in [
        functor::delta_obj(&fixtures::sep()),
        functor::delta_obj(&fixtures::nsh()),
        singleton_object(b4, fixtures::b4().top()),
        fixtures::per_h2(),
    ] {
        assert!(functor::epsilon_iso_laws(&obj).is_ok());
    }
}

#[test]
fn unit_and_counit_are_natural() {
    for t in [
        fixtures::collapse_nsh_to_sep(),
        fixtures::pick_x_sep_to_nsh(),
    ] {
        assert!(functor::eta_naturality(&t).is_ok());
        assert!(functor::epsilon_naturality(&functor::delta_mor(&t)).is_ok());
    }
}

#[test]
fn triangle_identities_on_fixtures() {
    for f in [fixtures::sep(), fixtures::nsh(), fixtures::mis()] {
        assert!(functor::triangle_left(&f).is_ok(), "{}", f.label());
        assert!(functor::triangle_right(&functor::delta_obj(&f)).is_ok());
    }
    assert!(functor::triangle_right(&fixtures::per_h2()).is_ok());
}

/// All presheaves over H2 with carriers of size ≤ 2 (including the empty
/// one), built directly.
fn all_h2_presheaves() -> Vec<Presheaf> {
    let h2 = Arc::new(fixtures::h2());
    let mut out = Vec::new();
    for bot_size in 0..=2usize {
        for top_size in 0..=2usize {
            if top_size > 0 && bot_size == 0 {
                continue; // no function into the empty carrier
            }
            let maps: Vec<Vec<usize>> = match (top_size, bot_size) {
                (0, _) => vec![vec![]],
                (n, m) => {
                    // all functions [n] → [m]
                    let mut fs = vec![vec![]];
                    for _ in 0..n {
                        fs = fs
                            .into_iter()
                            .flat_map(|f: Vec<usize>| {
                                (0..m).map(move |v| {
                                    let mut g = f.clone();
                                    g.push(v);
                                    g
                                })
                            })
                            .collect();
                    }
                    fs
                }
            };
            for map in maps {
                let label = format!("P{top_size}{bot_size}");
                let carriers = vec![
                    level_carrier(
                        &label,
                        "⊥",
                        (0..bot_size).map(|i| format!("s{i}")).collect(),
                    ),
                    level_carrier(
                        &label,
                        "⊤",
                        (0..top_size).map(|i| format!("x{i}")).collect(),
                    ),
                ];
                let mut res = HashMap::new();
                res.insert((1usize, 0usize), map);
                out.push(Presheaf::new(label, h2.clone(), carriers, res).unwrap());
            }
        }
    }
    out
}

#[test]
fn triangles_hold_for_every_small_h2_presheaf() {
    let all = all_h2_presheaves();
    assert!(all.len() > 5);
    for f in &all {
        assert!(functor::triangle_left(f).is_ok());
        assert!(functor::triangle_right(&functor::delta_obj(f)).is_ok());
        let (sheaf, eta_iso) = functor::sheaf_iff_eta_iso(f);
        assert_eq!(sheaf.is_ok(), eta_iso);
    }
}

#[test]
fn singleton_agreement_law_exhaustively() {
    for f in [fixtures::sep(), fixtures::nsh(), fixtures::mis()] {
        let obj = functor::delta_obj(&f);
        let alg = obj.algebra().clone();
        for h in alg.elements() {
            for alpha in enumerate_singletons(&obj, h) {
                for k in alg.elements() {
                    for beta in enumerate_singletons(&obj, k) {
                        for l in alg.elements() {
                            let (lhs, rhs) = agreement_sides(&obj, &alpha, &beta, l);
                            assert_eq!(lhs, rhs);
                            let closed_form = alg.leq(l, agreement_extent(&obj, &alpha, &beta));
                            assert_eq!(rhs, closed_form);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn singletons_compose_to_their_level_object() {
    // α°∘α = F_h for every singleton (monomorphism law)
    let obj = functor::delta_obj(&fixtures::nsh());
    let alg = obj.algebra().clone();
    for h in alg.elements() {
        for alpha in enumerate_singletons(&obj, h) {
            let pt = alpha.to_pretrans(&obj);
            let square = PreTransformation::compose_inf(&pt.involution(), &pt).unwrap();
            assert_eq!(square.fiber(0, 0), alg.principal(h).members());
        }
    }
}

#[test]
fn flattening_represents_every_double_singleton() {
    for f in [fixtures::sep(), fixtures::nsh(), fixtures::mis()] {
        let obj = functor::delta_obj(&f);
        let theta = functor::theta_obj(&obj);
        let dtf = functor::delta_obj(&theta);
        let alg = obj.algebra().clone();
        for h in alg.elements() {
            for a in enumerate_singletons(&dtf, h) {
                assert!(functor::flatten_represents(&obj, &a).is_ok());
                if h == alg.bottom() {
                    let flat = functor::flatten_singleton(&obj, &a);
                    assert!(flat.extent().iter().all(|&v| v == alg.bottom()));
                }
            }
        }
    }
}

#[test]
fn flattening_a_representable_returns_its_extent() {
    let obj = functor::delta_obj(&fixtures::nsh());
    let theta = functor::theta_obj(&obj);
    let dtf = functor::delta_obj(&theta);
    let alg = obj.algebra().clone();
    for h in alg.elements() {
        for gamma_idx in 0..dtf.carrier().len() {
            let (k, idx) = functor::delta_level(&theta, gamma_idx);
            if k != h {
                continue;
            }
            let rep = representable_singleton(&dtf, gamma_idx);
            let flat = functor::flatten_singleton(&obj, &rep);
            let original = &functor::theta_singletons(&obj)[k][idx];
            assert_eq!(&flat, original);
        }
    }
}

#[test]
fn sheaf_criterion_on_fixtures() {
    let expectations = [
        (fixtures::sep(), true),
        (fixtures::nsh(), false),
        (fixtures::mis(), false),
    ];
    for (f, expect) in expectations {
        let (sheaf, eta_iso) = functor::sheaf_iff_eta_iso(&f);
        assert_eq!(sheaf.is_ok(), expect);
        assert_eq!(eta_iso, expect);
    }
}

#[test]
fn associated_sheaf_functor() {
    let (_, _, _, _, top) = b4_elems();

    let a_mis = functor::a_shv(&fixtures::mis());
    assert_eq!(a_mis.carrier(top).len(), 1);
    assert!(a_mis.is_sheaf().is_ok());

    let a_nsh = functor::a_shv(&fixtures::nsh());
    assert_eq!(a_nsh.carrier(top).len(), 1);
    assert!(a_nsh.is_sheaf().is_ok());

    let sep = fixtures::sep();
    let a_sep = functor::a_shv(&sep);
    assert!(a_sep.is_sheaf().is_ok());
    for h in sep.algebra().elements() {
        assert_eq!(a_sep.carrier(h).len(), sep.carrier(h).len());
    }
}

#[test]
fn pre_equivalence_round_trip() {
    let dh = downset_algebra(Arc::new(fixtures::b4()));
    for f in [fixtures::sep(), fixtures::nsh(), fixtures::mis()] {
        assert!(
            functor::pre_equivalence_iso(&dh, &f).is_ok(),
            "{}",
            f.label()
        );
    }
}

#[test]
fn associated_relational_sheaf_functor_lands_in_objects() {
    let dh = downset_algebra(Arc::new(fixtures::b4()));
    let g = functor::delta_pre(&dh, &fixtures::nsh());
    assert_eq!(g.mode(), Mode::Ord);
    let a = functor::a_rel(&dh, &g);
    assert_eq!(a.mode(), Mode::Inf);
    assert!(check_object(a.pt(), Mode::Inf).is_ok());
}

#[test]
fn two_point_example_objects_are_pers_small() {
    // over H2 with carrier size 2: Inf objects ↔ partial equivalence
    // relations, morphisms ↔ functions between class sets
    let h2 = Arc::new(fixtures::h2());
    let car: SetRef = Arc::new(FiniteSet::new("A", vec!["0".into(), "1".into()]));
    let top = h2.top();

    let mut objects = Vec::new();
    for bits in 0u32..1 << 4 {
        let mut m = FiberMatrix::constant(h2.clone(), car.clone(), car.clone(), h2.bottom());
        for b in 0..2 {
            for a in 0..2 {
                if bits >> (b * 2 + a) & 1 == 1 {
                    m.set_entry(b, a, top);
                }
            }
        }
        if let Ok(obj) = RelObject::new(m.to_pretrans(), Mode::Inf) {
            objects.push(obj);
        }
    }
    // PERs on a 2-set: ∅, {0}, {1}, {0}{1}, {01}
    assert_eq!(objects.len(), 5);
    for obj in &objects {
        let r = obj.pt().level(top);
        // symmetric and transitive
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(r.get(x, y), r.get(y, x));
                for z in 0..2 {
                    if r.get(x, y) && r.get(y, z) {
                        assert!(r.get(x, z));
                    }
                }
            }
        }
    }
}
