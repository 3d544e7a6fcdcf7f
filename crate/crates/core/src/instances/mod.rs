//! Base-category plugins behind one shared contract.
//!
//! An [`Instance`] supplies objects, morphisms, the dualizing object `S` with
//! its cooperations, copowers of `S` with injections/cotupling, and — where
//! the category supports them — coequalizers, co-intersections and
//! (regular epi, mono)-factorizations. Structures on an object `X` (the
//! subalgebras of hom(S,X) used by the affine layer) are represented by an
//! instance-chosen type so that finite subsets and folded subgroup graphs
//! live behind the same interface.

mod finmod;
mod finset;
mod rose;

pub use finmod::{FinMod, ModMap, ModObj, ModStruct};
pub use finset::{FinSet, SetMap};
pub use rose::{Rose, RoseMap, RoseStruct, SAMPLE_WORD_LEN};

use crate::error::{Error, Result};
use crate::theory::{Algebra, Signature, TheoryKind};
use rand::RngCore;
use std::fmt::Debug;

/// A finitely representable base category with a distinguished coalgebra S.
///
/// Every coequalizer requested through this trait is a *joint* coequalizer of
/// finitely many parallel pairs out of S; this is the only shape the engine
/// needs and it keeps the rose instance's capability gap explicit.
pub trait Instance {
    type Obj: Clone + Eq + Debug;
    type Mor: Clone + Eq + Ord + Debug;
    /// Representation of a subalgebra of hom(S, X).
    type Struct: Clone + Debug;

    fn name(&self) -> &'static str;
    fn theory(&self) -> TheoryKind;
    fn signature(&self) -> Signature {
        self.theory().signature()
    }

    /// The dualizing object S.
    fn s(&self) -> Self::Obj;

    fn dom(&self, f: &Self::Mor) -> Self::Obj;
    fn cod(&self, f: &Self::Mor) -> Self::Obj;
    fn identity(&self, x: &Self::Obj) -> Self::Mor;
    /// Composite g∘f.
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor>;

    /// The copower n·S.
    fn copower(&self, n: usize) -> Self::Obj;
    /// The i-th injection j_i: S → n·S.
    fn injection(&self, n: usize, i: usize) -> Self::Mor;
    /// The cotuple [a_0, …, a_{n-1}]: n·S → Y of legs a_i: S → Y.
    fn cotuple(&self, cod: &Self::Obj, legs: &[Self::Mor]) -> Result<Self::Mor>;

    /// One cooperation ω: S → k·S per signature symbol, in signature order.
    fn cooperations(&self) -> Vec<Self::Mor>;

    /// All morphisms x → y, or None when the hom-set is not materializable.
    fn hom(&self, x: &Self::Obj, y: &Self::Obj) -> Option<Vec<Self::Mor>>;

    /// A pseudo-random morphism S → x (used for symbolic sampling).
    fn sample_hom_elem(&self, x: &Self::Obj, rng: &mut dyn RngCore) -> Self::Mor;

    fn has_coequalizers(&self) -> bool;
    fn has_factorizations(&self) -> bool;

    /// Joint coequalizer q: X → Q of the parallel pairs (a_i, b_i): S ⇉ X.
    fn coequalize(&self, x: &Self::Obj, pairs: &[(Self::Mor, Self::Mor)]) -> Result<Self::Mor>;

    /// Co-intersection (wide pushout) of regular quotients q_i: X → Q_i:
    /// the quotient of X generated by all identifications the q_i make.
    fn cointersect(&self, x: &Self::Obj, quotients: &[Self::Mor]) -> Result<Self::Mor>;

    /// (regular epi, mono)-factorization f = m∘e.
    fn factorize(&self, f: &Self::Mor) -> Result<(Self::Mor, Self::Mor)>;

    fn is_epi(&self, f: &Self::Mor) -> Result<bool>;
    fn is_mono(&self, f: &Self::Mor) -> Result<bool>;
    fn is_regular_epi(&self, f: &Self::Mor) -> Result<bool>;
    fn is_iso(&self, f: &Self::Mor) -> Result<bool> {
        Ok(self.is_epi(f)? && self.is_mono(f)?)
    }

    /// The unique h with h∘p = t, when it exists; `p` must be a regular epi.
    fn factor_through(&self, p: &Self::Mor, t: &Self::Mor) -> Result<Option<Self::Mor>>;

    /// The subalgebra of hom(S, x) generated by the given elements.
    fn struct_from_generators(&self, x: &Self::Obj, gens: &[Self::Mor]) -> Result<Self::Struct>;
    /// A structure from an explicit element list; fails unless already closed.
    fn struct_from_elements(&self, x: &Self::Obj, elems: &[Self::Mor]) -> Result<Self::Struct>;
    /// The indiscrete structure: all of hom(S, x).
    fn struct_full(&self, x: &Self::Obj) -> Result<Self::Struct>;
    /// The discrete structure: generated by the empty set.
    fn struct_discrete(&self, x: &Self::Obj) -> Result<Self::Struct> {
        self.struct_from_generators(x, &[])
    }
    fn struct_contains(&self, x: &Self::Obj, st: &Self::Struct, a: &Self::Mor) -> Result<bool>;
    /// A finite generating set for the structure.
    fn struct_generators(&self, x: &Self::Obj, st: &Self::Struct) -> Vec<Self::Mor>;
    /// All elements when materializable, None otherwise (symbolic structures).
    fn struct_elements(&self, x: &Self::Obj, st: &Self::Struct) -> Option<Vec<Self::Mor>>;

    /// Validates that `a` is an element of hom(S, x).
    fn check_hom_elem(&self, x: &Self::Obj, a: &Self::Mor) -> Result<()> {
        if self.dom(a) != self.s() {
            return Err(Error::domain("structure element must have domain S"));
        }
        if self.cod(a) != *x {
            return Err(Error::domain("structure element has the wrong codomain"));
        }
        Ok(())
    }
}

/// hom(S, X) as a T-algebra: each signature operation acts by
/// ω_X(a_0, …, a_{k-1}) = [a_0, …, a_{k-1}] ∘ ω.
pub struct HomAlgebra<'a, I: Instance> {
    pub instance: &'a I,
    pub x: I::Obj,
    sig: Signature,
    coops: Vec<I::Mor>,
}

impl<'a, I: Instance> HomAlgebra<'a, I> {
    pub fn new(instance: &'a I, x: I::Obj) -> HomAlgebra<'a, I> {
        HomAlgebra {
            sig: instance.signature(),
            coops: instance.cooperations(),
            instance,
            x,
        }
    }
}

impl<'a, I: Instance> Algebra for HomAlgebra<'a, I> {
    type Elem = I::Mor;

    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn apply(&self, op: usize, args: &[I::Mor]) -> I::Mor {
        let cot = self
            .instance
            .cotuple(&self.x, args)
            .expect("induced operation: cotuple of hom-elements");
        self.instance
            .compose(&cot, &self.coops[op])
            .expect("induced operation: composite with a cooperation")
    }

    fn elements(&self) -> Option<Vec<I::Mor>> {
        self.instance.hom(&self.instance.s(), &self.x)
    }

    fn contains(&self, e: &I::Mor) -> bool {
        self.instance.check_hom_elem(&self.x, e).is_ok()
    }
}
