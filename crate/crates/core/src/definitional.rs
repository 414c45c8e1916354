//! Definitional reference routes, kept deliberately independent of the
//! implementation paths they certify. The fast implementations (levelwise
//! composition, the matrix formula, extent normal forms) are validated
//! against these searches by the law suites; nothing here is used by the
//! functors themselves.

use crate::heyting::ElemSet;
use crate::presheaf::{MatchingFamily, Presheaf};
use crate::pretrans::{check_morphism, FiberMatrix, PreTransformation, RelObject};
use crate::rel::Relation;
use crate::singleton::singleton_object;

/// Order-mode composite straight from the definition: `h` is in the fiber
/// iff some pair `(k,l)` with `h ≤ k∧l` has `σ_k∘τ_l(c,a) = 1`.
pub fn compose_ord_search(sigma: &PreTransformation, tau: &PreTransformation) -> PreTransformation {
    let alg = tau.algebra().clone();
    let mut out =
        PreTransformation::empty(alg.clone(), tau.source().clone(), sigma.target().clone());
    let composites: Vec<Vec<Relation>> = alg
        .elements()
        .map(|k| {
            alg.elements()
                .map(|l| {
                    Relation::compose(&sigma.level(k), &tau.level(l))
                        .expect("oracle expects composable carriers")
                })
                .collect()
        })
        .collect();
    for c in 0..sigma.target().len() {
        for a in 0..tau.source().len() {
            let fiber: ElemSet = alg
                .elements()
                .filter(|&h| {
                    alg.elements().any(|k| {
                        alg.elements()
                            .any(|l| alg.leq(h, alg.meet(k, l)) && composites[k][l].get(c, a))
                    })
                })
                .collect();
            out.set_fiber(c, a, fiber);
        }
    }
    out
}

/// Infima-mode composite by honest family search: enumerate every family of
/// pairs `⟨k_i,l_i⟩` whose relational composites all hit `(c,a)`, and admit
/// `h` whenever `h ≤ ⋁(k_i∧l_i)` for one of them. The empty family admits
/// exactly `⊥`. Exponential; only for small instances.
pub fn compose_inf_family_search(
    sigma: &PreTransformation,
    tau: &PreTransformation,
) -> PreTransformation {
    let alg = tau.algebra().clone();
    let mut out =
        PreTransformation::empty(alg.clone(), tau.source().clone(), sigma.target().clone());
    let composites: Vec<Vec<Relation>> = alg
        .elements()
        .map(|k| {
            alg.elements()
                .map(|l| {
                    Relation::compose(&sigma.level(k), &tau.level(l))
                        .expect("oracle expects composable carriers")
                })
                .collect()
        })
        .collect();
    for c in 0..sigma.target().len() {
        for a in 0..tau.source().len() {
            let valid_pairs: Vec<(usize, usize)> = alg
                .elements()
                .flat_map(|k| alg.elements().map(move |l| (k, l)))
                .filter(|&(k, l)| composites[k][l].get(c, a))
                .collect();
            assert!(
                valid_pairs.len() <= 20,
                "family search is exponential; use smaller instances"
            );
            let mut fiber = ElemSet::EMPTY;
            for family in 0u64..1 << valid_pairs.len() {
                let mut v = alg.bottom();
                for (i, &(k, l)) in valid_pairs.iter().enumerate() {
                    if family >> i & 1 == 1 {
                        v = alg.join(v, alg.meet(k, l));
                    }
                }
                fiber = fiber.union(alg.principal(v).members());
            }
            out.set_fiber(c, a, fiber);
        }
    }
    out
}

/// Every morphism `F_h → F` of relational sheaves, found by filtering all
/// infima-preserving families through the six morphism laws. The extent
/// normal form is pinned against this.
pub fn singleton_morphisms_brute(f: &RelObject, h: usize) -> Vec<PreTransformation> {
    let alg = f.algebra().clone();
    let dom = singleton_object(alg.clone(), h);
    let n = f.carrier().len();
    let total = (alg.len() as u64).checked_pow(n as u32).expect("overflow");
    assert!(total <= 1 << 22, "brute singleton search too large");
    let mut out = Vec::new();
    for code in 0..total {
        let mut m = FiberMatrix::constant(
            alg.clone(),
            dom.carrier().clone(),
            f.carrier().clone(),
            alg.bottom(),
        );
        let mut rest = code;
        for x in 0..n {
            m.set_entry(x, 0, (rest % alg.len() as u64) as usize);
            rest /= alg.len() as u64;
        }
        let theta = m.to_pretrans();
        if check_morphism(&theta, &dom, f).is_ok() {
            out.push(theta);
        }
    }
    out
}

/// Matching families by unpruned product enumeration with full pairwise
/// filtering, independent of the maximal-element backtracking.
pub fn matching_families_brute(f: &Presheaf, parts: ElemSet) -> Vec<MatchingFamily> {
    let members: Vec<usize> = parts.iter().collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; members.len()];
    loop {
        let values: Vec<(usize, usize)> = members
            .iter()
            .copied()
            .zip(choice.iter().copied())
            .collect();
        if members.iter().all(|&k| !f.carrier(k).is_empty()) {
            let family = MatchingFamily::from_values(parts, values);
            if family.is_matching(f) {
                out.push(family);
            }
        }
        // odometer
        let mut i = 0;
        loop {
            if i == members.len() {
                return out;
            }
            choice[i] += 1;
            if choice[i] < f.carrier(members[i]).len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}
