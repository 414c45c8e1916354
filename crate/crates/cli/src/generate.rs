//! Seeded random instances: bounded distributive lattices built as
//! sublattices of Boolean algebras, presheaves with functoriality enforced
//! by construction, transformations, pre-transformations, and relational
//! sheaves. Everything is deterministic per seed.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use relsheaf_core::heyting::{build_algebra, Elem, ElemSet, HeytingAlgebra};
use relsheaf_core::presheaf::{level_carrier, Presheaf, Transformation};
use relsheaf_core::pretrans::{FiberMatrix, Mode, PreTransformation, RelObject};
use relsheaf_core::rel::{FiniteSet, SetRef};

#[derive(Debug, Clone, Copy)]
pub struct GenParams {
    pub seed: u64,
    pub count: usize,
    pub max_h: usize,
    pub max_carrier: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            seed: 1,
            count: 10,
            max_h: 5,
            max_carrier: 3,
        }
    }
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random bounded sublattice of a small Boolean algebra. Closure under
/// union and intersection of subsets guarantees a distributive bounded
/// lattice, hence a Heyting algebra, with no rejection sampling.
pub fn lattice(rng: &mut ChaCha8Rng, max_h: usize) -> Arc<HeytingAlgebra> {
    assert!(max_h >= 2);
    for _ in 0..64 {
        let atoms = rng.gen_range(1..=3usize);
        let universe: u32 = (1 << atoms) - 1;
        let mut masks: Vec<u32> = vec![0, universe];
        for _ in 0..rng.gen_range(1..=3usize) {
            masks.push(rng.gen_range(0..=universe));
        }
        // close under & and |
        loop {
            let mut added = false;
            let snapshot = masks.clone();
            for &x in &snapshot {
                for &y in &snapshot {
                    for z in [x & y, x | y] {
                        if !masks.contains(&z) {
                            masks.push(z);
                            added = true;
                        }
                    }
                }
            }
            if !added {
                break;
            }
        }
        if masks.len() > max_h {
            continue;
        }
        masks.sort_unstable();
        masks.dedup();
        let names: Vec<String> = (0..masks.len()).map(|i| format!("e{i}")).collect();
        let mut pairs = Vec::new();
        for (i, &x) in masks.iter().enumerate() {
            for (j, &y) in masks.iter().enumerate() {
                if i != j && x & !y == 0 {
                    pairs.push((names[i].clone(), names[j].clone()));
                }
            }
        }
        return Arc::new(
            build_algebra(&names, &pairs).expect("sublattices of Boolean algebras are Heyting"),
        );
    }
    // tiny fallback; unreachable in practice for max_h ≥ 2
    Arc::new(build_algebra(&["e0", "e1"], &[("e0", "e1")]).unwrap())
}

/// Elements ordered so that everything above an element comes before it.
fn descending_order(alg: &HeytingAlgebra) -> Vec<Elem> {
    let mut order: Vec<Elem> = alg.elements().collect();
    order.sort_by_key(|&h| {
        let above = alg.elements().filter(|&y| alg.leq(h, y)).count();
        (above, h)
    });
    order
}

fn covers_above(alg: &HeytingAlgebra, h: Elem) -> Vec<Elem> {
    alg.elements()
        .filter(|&u| {
            u != h
                && alg.leq(h, u)
                && alg
                    .elements()
                    .all(|v| v == h || v == u || !(alg.leq(h, v) && alg.leq(v, u)))
        })
        .collect()
}

/// A random presheaf, built top-down. At each level the carrier starts
/// from the quotient of the incoming disjoint union forced by
/// functoriality, optionally coarsened further, plus fresh members; the
/// restriction maps are the quotient projections, so functoriality holds
/// by construction (and is re-validated on assembly).
pub fn presheaf(
    rng: &mut ChaCha8Rng,
    alg: &Arc<HeytingAlgebra>,
    max_carrier: usize,
    label: &str,
) -> Presheaf {
    let n = alg.len();
    let mut sizes: Vec<usize> = vec![0; n];
    let mut res: HashMap<(Elem, Elem), Vec<usize>> = HashMap::new();

    for &h in &descending_order(alg) {
        let uppers: Vec<Elem> = alg
            .elements()
            .filter(|&u| u != h && alg.leq(h, u))
            .collect();
        if uppers.is_empty() {
            sizes[h] = rng.gen_range(0..=max_carrier);
            continue;
        }
        let covers = covers_above(alg, h);
        // disjoint union of the covering carriers
        let mut offset = HashMap::new();
        let mut total = 0usize;
        for &u in &covers {
            offset.insert(u, total);
            total += sizes[u];
        }
        // union-find over forced identifications
        let mut parent: Vec<usize> = (0..total).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let r = find(parent, parent[i]);
                parent[i] = r;
            }
            parent[i]
        }
        for &w in &uppers {
            for &u1 in &covers {
                for &u2 in &covers {
                    if u1 < u2 && alg.leq(u1, w) && alg.leq(u2, w) {
                        for x in 0..sizes[w] {
                            let via1 = offset[&u1] + route(&res, w, u1, x);
                            let via2 = offset[&u2] + route(&res, w, u2, x);
                            let (r1, r2) = (find(&mut parent, via1), find(&mut parent, via2));
                            if r1 != r2 {
                                parent[r1] = r2;
                            }
                        }
                    }
                }
            }
        }
        // random extra coarsening
        if total > 1 && rng.gen_bool(0.3) {
            let i = rng.gen_range(0..total);
            let j = rng.gen_range(0..total);
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri] = rj;
            }
        }
        // force the carrier bound
        let mut roots: Vec<usize> = (0..total)
            .map(|i| find(&mut parent, i))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        while roots.len() > max_carrier.max(1) {
            let a = roots.pop().unwrap();
            let b = roots[0];
            parent[a] = b;
            roots = (0..total)
                .map(|i| find(&mut parent, i))
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
        }
        let class_of: HashMap<usize, usize> =
            roots.iter().enumerate().map(|(c, &r)| (r, c)).collect();
        let classes = roots.len();
        let fresh = if classes < max_carrier && rng.gen_bool(0.35) {
            rng.gen_range(0..=(max_carrier - classes))
        } else {
            0
        };
        sizes[h] = classes + fresh;

        // projections from the covering levels
        for &u in &covers {
            let map: Vec<usize> = (0..sizes[u])
                .map(|x| class_of[&find(&mut parent, offset[&u] + x)])
                .collect();
            res.insert((u, h), map);
        }
        // composites from everything else above
        for &w in &uppers {
            if res.contains_key(&(w, h)) {
                continue;
            }
            let u = covers
                .iter()
                .copied()
                .find(|&u| alg.leq(u, w))
                .expect("every upper element sits above a cover");
            let map: Vec<usize> = (0..sizes[w])
                .map(|x| res[&(u, h)][route(&res, w, u, x)])
                .collect();
            res.insert((w, h), map);
        }
    }

    let carriers: Vec<SetRef> = alg
        .elements()
        .map(|h| {
            level_carrier(
                label,
                alg.name(h),
                (0..sizes[h]).map(|i| format!("x{i}")).collect(),
            )
        })
        .collect();
    Presheaf::new(label, alg.clone(), carriers, res)
        .expect("generated restriction tables are functorial")
}

fn route(res: &HashMap<(Elem, Elem), Vec<usize>>, w: Elem, u: Elem, x: usize) -> usize {
    if w == u {
        x
    } else {
        res[&(w, u)][x]
    }
}

/// A random natural transformation, if the random upper choices happen to
/// extend; the caller retries with fresh randomness.
pub fn transformation(
    rng: &mut ChaCha8Rng,
    dom: &Presheaf,
    cod: &Presheaf,
) -> Option<Transformation> {
    let alg = dom.algebra();
    let mut components: Vec<Option<Vec<usize>>> = vec![None; alg.len()];
    for &h in &descending_order(alg) {
        let mut comp: Vec<Option<usize>> = vec![None; dom.carrier(h).len()];
        // forced by naturality from above
        for u in alg.elements() {
            if u == h || !alg.leq(h, u) {
                continue;
            }
            let upper = components[u].as_ref().expect("descending order");
            for (x, &image) in upper.iter().enumerate() {
                let forced = cod.restrict(u, h, image);
                let target = dom.restrict(u, h, x);
                match comp[target] {
                    None => comp[target] = Some(forced),
                    Some(v) if v == forced => {}
                    Some(_) => return None,
                }
            }
        }
        if !comp.is_empty() && cod.carrier(h).is_empty() {
            return None;
        }
        let filled: Vec<usize> = comp
            .into_iter()
            .map(|slot| slot.unwrap_or_else(|| rng.gen_range(0..cod.carrier(h).len())))
            .collect();
        components[h] = Some(filled);
    }
    Transformation::new(
        dom.clone(),
        cod.clone(),
        components.into_iter().map(Option::unwrap).collect(),
    )
    .ok()
}

/// A composable random pair `σ∘τ` with `τ: F→G`, `σ: G→K`; identities are
/// the fallback when random search keeps failing.
pub fn composable_pair(
    rng: &mut ChaCha8Rng,
    f: &Presheaf,
    g: &Presheaf,
    k: &Presheaf,
) -> Option<(Transformation, Transformation)> {
    for _ in 0..50 {
        if let Some(tau) = transformation(rng, f, g) {
            if let Some(sigma) = transformation(rng, g, k) {
                return Some((sigma, tau));
            }
        }
    }
    None
}

pub fn named_carrier(rng: &mut ChaCha8Rng, label: &str, max_size: usize) -> SetRef {
    let size = rng.gen_range(0..=max_size);
    Arc::new(FiniteSet::new(
        label,
        (0..size).map(|i| format!("{label}{i}")).collect(),
    ))
}

/// Random order-preserving family: every fiber the down-closure of a
/// random subset.
pub fn ord_pretrans(
    rng: &mut ChaCha8Rng,
    alg: &Arc<HeytingAlgebra>,
    src: &SetRef,
    tgt: &SetRef,
) -> PreTransformation {
    let mut pt = PreTransformation::empty(alg.clone(), src.clone(), tgt.clone());
    for b in 0..tgt.len() {
        for a in 0..src.len() {
            let mask = ElemSet(rng.gen_range(0..1u64 << alg.len()));
            pt.set_fiber(b, a, alg.down_closure(mask).members());
        }
    }
    pt
}

/// Random infima-preserving family: every fiber principal.
pub fn inf_pretrans(
    rng: &mut ChaCha8Rng,
    alg: &Arc<HeytingAlgebra>,
    src: &SetRef,
    tgt: &SetRef,
) -> PreTransformation {
    let mut m = FiberMatrix::constant(alg.clone(), src.clone(), tgt.clone(), alg.bottom());
    for b in 0..tgt.len() {
        for a in 0..src.len() {
            m.set_entry(b, a, rng.gen_range(0..alg.len()));
        }
    }
    m.to_pretrans()
}

/// Random relational sheaf: a random symmetric matrix closed up to an
/// idempotent (raise by composites, dominate diagonals, repeat to a
/// fixpoint; entries only ever increase, so this terminates).
pub fn inf_object(rng: &mut ChaCha8Rng, alg: &Arc<HeytingAlgebra>, carrier: &SetRef) -> RelObject {
    let n = carrier.len();
    let mut m = FiberMatrix::constant(alg.clone(), carrier.clone(), carrier.clone(), alg.bottom());
    for b in 0..n {
        for a in 0..=b {
            let v = rng.gen_range(0..alg.len());
            m.set_entry(b, a, v);
            m.set_entry(a, b, v);
        }
    }
    loop {
        let mut changed = false;
        for b in 0..n {
            for a in 0..n {
                let mut v = m.entry(b, a);
                for c in 0..n {
                    v = alg.join(v, alg.meet(m.entry(b, c), m.entry(c, a)));
                }
                if b == a {
                    for c in 0..n {
                        v = alg.join(v, m.entry(c, a));
                    }
                }
                if v != m.entry(b, a) {
                    m.set_entry(b, a, v);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    RelObject::new(m.to_pretrans(), Mode::Inf).expect("closure produces a symmetric inf-idempotent")
}

/// Random relational presheaf: random symmetric down-closed fibers with a
/// levelwise transitive closure (each level becomes a partial equivalence
/// relation, and antitonicity of levels is preserved).
pub fn ord_object(rng: &mut ChaCha8Rng, alg: &Arc<HeytingAlgebra>, carrier: &SetRef) -> RelObject {
    let n = carrier.len();
    let mut pt = PreTransformation::empty(alg.clone(), carrier.clone(), carrier.clone());
    for b in 0..n {
        for a in 0..=b {
            let mask = ElemSet(rng.gen_range(0..1u64 << alg.len()));
            let fiber = alg.down_closure(mask).members();
            pt.set_fiber(b, a, fiber);
            pt.set_fiber(a, b, fiber);
        }
    }
    loop {
        let mut changed = false;
        for h in alg.elements() {
            for b in 0..n {
                for a in 0..n {
                    if !pt.fiber(b, a).contains(h) {
                        let hop = (0..n)
                            .any(|c| pt.fiber(b, c).contains(h) && pt.fiber(c, a).contains(h));
                        if hop {
                            let mut f = pt.fiber(b, a);
                            f.insert(h);
                            pt.set_fiber(b, a, f);
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    RelObject::new(pt, Mode::Ord).expect("levelwise PERs form an Ord object")
}
