//! A workbench for finite complete Heyting algebras: presheaves and sheaves,
//! relational presheaves and relational sheaves as symmetric idempotent
//! families of relations, and the comparison and adjunction functors
//! connecting them, all checkable exhaustively at desk scale.

pub mod definitional;
pub mod fixtures;
pub mod functor;
pub mod heyting;
pub mod presheaf;
pub mod pretrans;
pub mod rel;
pub mod singleton;

pub use heyting::{
    build_algebra, downset_algebra, sup_dagger_adjunction, DownSet, DownsetAlgebra, Elem, ElemSet,
    HeytingAlgebra, LatticeError,
};
pub use presheaf::{
    Cover, MatchingFamily, Presheaf, PresheafError, SheafCounterexample, Transformation,
    TransformationError,
};
pub use pretrans::{
    check_morphism, check_object, FiberMatrix, Flavor, Mode, MorphismViolation, ObjectViolation,
    PreTransformation, PtError, RelMorphism, RelObject,
};
pub use rel::{FiniteSet, RelError, Relation, SetRef};
pub use singleton::{
    enumerate_singletons, representable_singleton, singleton_object, Singleton, SingletonError,
};
