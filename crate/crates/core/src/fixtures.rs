//! The in-repo instance library: small lattices, the three standard
//! presheaves over the diamond, and the two-point partial-equivalence
//! example. All example values in the test suites refer to these.

use std::collections::HashMap;
use std::sync::Arc;

use crate::heyting::{build_algebra, downset_algebra, HeytingAlgebra};
use crate::presheaf::{level_carrier, Presheaf, Transformation};
use crate::pretrans::{FiberMatrix, Mode, RelObject};
use crate::rel::{FiniteSet, SetRef};

/// The two-element chain `⊥ < ⊤`.
pub fn h2() -> HeytingAlgebra {
    build_algebra(&["⊥", "⊤"], &[("⊥", "⊤")]).expect("H2 is a Heyting algebra")
}

/// The three-element chain `⊥ < m < ⊤`.
pub fn c3() -> HeytingAlgebra {
    build_algebra(&["⊥", "m", "⊤"], &[("⊥", "m"), ("m", "⊤")]).expect("C3 is a Heyting algebra")
}

/// The diamond `⊥ < a,b < ⊤` with `a`, `b` incomparable (the Boolean
/// algebra on one atom pair).
pub fn b4() -> HeytingAlgebra {
    build_algebra(
        &["⊥", "a", "b", "⊤"],
        &[("⊥", "a"), ("⊥", "b"), ("a", "⊤"), ("b", "⊤")],
    )
    .expect("B4 is a Heyting algebra")
}

/// The down-set algebra of the three-chain (a four-chain under inclusion).
pub fn d_c3() -> HeytingAlgebra {
    (*downset_algebra(Arc::new(c3())).algebra).clone()
}

/// Element and order data of the pentagon, which [`build_algebra`] rejects.
pub fn n5_input() -> (Vec<&'static str>, Vec<(&'static str, &'static str)>) {
    (
        vec!["⊥", "a", "c", "b", "⊤"],
        vec![("⊥", "a"), ("a", "c"), ("c", "⊤"), ("⊥", "b"), ("b", "⊤")],
    )
}

fn b4_presheaf(
    label: &str,
    top: Vec<&str>,
    at_a: Vec<&str>,
    at_b: Vec<&str>,
    bottom: Vec<&str>,
) -> Presheaf {
    let alg = Arc::new(b4());
    let strings = |v: Vec<&str>| v.into_iter().map(String::from).collect();
    let carriers = vec![
        level_carrier(label, "⊥", strings(bottom)),
        level_carrier(label, "a", strings(at_a)),
        level_carrier(label, "b", strings(at_b)),
        level_carrier(label, "⊤", strings(top)),
    ];
    let mut res = HashMap::new();
    for (h, k) in [(3usize, 1usize), (3, 2), (3, 0), (1, 0), (2, 0)] {
        // every lower carrier here is a singleton, so all maps are constant
        res.insert((h, k), vec![0; carriers[h].len()]);
    }
    Presheaf::new(label, alg, carriers, res).expect("fixture presheaves are functorial")
}

/// The terminal presheaf on the diamond: every carrier is a singleton.
/// It is a sheaf.
pub fn sep() -> Presheaf {
    b4_presheaf("SEP", vec!["t"], vec!["p"], vec!["q"], vec!["s"])
}

/// Two top elements restricting identically everywhere below: gluing is
/// possible but not unique, so this is not a sheaf.
pub fn nsh() -> Presheaf {
    b4_presheaf("NSH", vec!["x", "y"], vec!["m"], vec!["n"], vec!["s"])
}

/// Compatible sections over `a` and `b` with nothing above them: the
/// matching family over `{a,b}` has no amalgamation.
pub fn mis() -> Presheaf {
    b4_presheaf("MIS", vec![], vec!["p"], vec!["q"], vec!["s"])
}

/// The collapse `NSH → SEP` (everything to the point).
pub fn collapse_nsh_to_sep() -> Transformation {
    Transformation::new(nsh(), sep(), vec![vec![0], vec![0], vec![0], vec![0, 0]])
        .expect("collapse is natural")
}

/// The section `SEP → NSH` choosing `x` at the top.
pub fn pick_x_sep_to_nsh() -> Transformation {
    Transformation::new(sep(), nsh(), vec![vec![0], vec![0], vec![0], vec![0]])
        .expect("picking x is natural")
}

/// Carrier of the two-point partial-equivalence example.
pub fn per_carrier() -> SetRef {
    Arc::new(FiniteSet::new(
        "PER",
        vec!["1".into(), "2".into(), "3".into()],
    ))
}

/// The relational sheaf over `H2` on `{1,2,3}` whose top level is the
/// partial equivalence relation with classes `{1,2}` and `{3}`.
pub fn per_h2() -> RelObject {
    let alg = Arc::new(h2());
    let carrier = per_carrier();
    let mut m = FiberMatrix::constant(alg.clone(), carrier.clone(), carrier, alg.bottom());
    let top = alg.top();
    for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)] {
        m.set_entry(i, j, top);
    }
    RelObject::new(m.to_pretrans(), Mode::Inf).expect("a PER is a relational sheaf")
}
