//! Spaces (X, A ≤ hom(S,X)), their morphisms, initial/final structures, the
//! structure functor Γ, copowers of S₁ with their universal arrows, and the
//! explicit left adjoint over instances with coequalizers.

use crate::error::{Error, Result};
use crate::instances::Instance;
use crate::theory::Algebra;
use std::fmt;

/// A base object together with a subalgebra of hom(S, X).
pub struct Space<I: Instance> {
    pub x: I::Obj,
    pub a: I::Struct,
}

impl<I: Instance> Clone for Space<I> {
    fn clone(&self) -> Self {
        Space { x: self.x.clone(), a: self.a.clone() }
    }
}

impl<I: Instance> fmt::Debug for Space<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Space").field("x", &self.x).field("a", &self.a).finish()
    }
}

/// Outcome of a morphism check; `witness` is a structure element whose image
/// escapes the codomain structure.
#[derive(Clone, Debug)]
pub struct MorphismCheck<M> {
    pub valid: bool,
    pub witness: Option<M>,
}

/// Checks {f}·A ⊆ B on the generators of A.
///
/// This is exact, not sampled: Γf commutes with the induced operations, so
/// the image of a generated subalgebra is generated by the images of the
/// generators, and B is closed.
pub fn check_morphism<I: Instance>(
    inst: &I,
    f: &I::Mor,
    dom: &Space<I>,
    cod: &Space<I>,
) -> Result<MorphismCheck<I::Mor>> {
    if inst.dom(f) != dom.x {
        return Err(Error::domain("morphism domain differs from the source space"));
    }
    if inst.cod(f) != cod.x {
        return Err(Error::domain("morphism codomain differs from the target space"));
    }
    for a in inst.struct_generators(&dom.x, &dom.a) {
        let fa = inst.compose(f, &a)?;
        if !inst.struct_contains(&cod.x, &cod.a, &fa)? {
            return Ok(MorphismCheck { valid: false, witness: Some(a) });
        }
    }
    Ok(MorphismCheck { valid: true, witness: None })
}

pub fn is_affine<I: Instance>(
    inst: &I,
    f: &I::Mor,
    dom: &Space<I>,
    cod: &Space<I>,
) -> Result<bool> {
    Ok(check_morphism(inst, f, dom, cod)?.valid)
}

/// The direct image structure {f}·A on the codomain of f (as a subalgebra,
/// i.e. the structure generated by the images of A's generators).
pub fn direct_image<I: Instance>(inst: &I, f: &I::Mor, a: &I::Struct) -> Result<I::Struct> {
    let x = inst.dom(f);
    let y = inst.cod(f);
    let gens = inst
        .struct_generators(&x, a)
        .iter()
        .map(|g| inst.compose(f, g))
        .collect::<Result<Vec<_>>>()?;
    inst.struct_from_generators(&y, &gens)
}

/// The initial structure on x along a family of morphisms into spaces:
/// A = { a ∈ hom(S,x) | f_i ∘ a ∈ B_i for all i }.
pub fn initial_structure<I: Instance>(
    inst: &I,
    x: &I::Obj,
    family: &[(I::Mor, Space<I>)],
) -> Result<Space<I>> {
    for (f, _) in family {
        if inst.dom(f) != *x {
            return Err(Error::domain("initial-structure morphism must start at x"));
        }
    }
    let all = inst.hom(&inst.s(), x).ok_or_else(|| {
        Error::unsupported("initial structures need a materializable hom(S, X)")
    })?;
    let mut kept = Vec::new();
    'outer: for a in all {
        for (f, sp) in family {
            let fa = inst.compose(f, &a)?;
            if !inst.struct_contains(&sp.x, &sp.a, &fa)? {
                continue 'outer;
            }
        }
        kept.push(a);
    }
    // The filter is an intersection of preimages of subalgebras under
    // homomorphisms, hence closed; from_elements re-validates that.
    Ok(Space { x: x.clone(), a: inst.struct_from_elements(x, &kept)? })
}

/// The final structure on y along a family of morphisms out of spaces:
/// the subalgebra generated by ⋃_i {f_i}·A_i.
pub fn final_structure<I: Instance>(
    inst: &I,
    y: &I::Obj,
    family: &[(I::Mor, Space<I>)],
) -> Result<Space<I>> {
    let mut gens = Vec::new();
    for (f, sp) in family {
        if inst.dom(f) != sp.x || inst.cod(f) != *y {
            return Err(Error::domain("final-structure morphism endpoints do not match"));
        }
        for a in inst.struct_generators(&sp.x, &sp.a) {
            gens.push(inst.compose(f, &a)?);
        }
    }
    let b = inst.struct_from_generators(y, &gens)?;
    if let [(f, sp)] = family {
        // For a single morphism the direct image needs no generation step:
        // it is already closed. Cross-check when the source materializes.
        if let Some(elems) = inst.struct_elements(&sp.x, &sp.a) {
            let image = elems
                .iter()
                .map(|a| inst.compose(f, a))
                .collect::<Result<Vec<_>>>()?;
            let direct = inst.struct_from_elements(y, &image)?;
            if !structures_equal(inst, y, &b, &direct)? {
                return Err(Error::internal(
                    "single-morphism final structure disagrees with the direct image",
                ));
            }
        }
    }
    Ok(Space { x: y.clone(), a: b })
}

/// The discrete space on x: structure generated by the empty set.
pub fn discrete<I: Instance>(inst: &I, x: &I::Obj) -> Result<Space<I>> {
    Ok(Space { x: x.clone(), a: inst.struct_discrete(x)? })
}

/// The indiscrete space on x: all of hom(S, x).
pub fn indiscrete<I: Instance>(inst: &I, x: &I::Obj) -> Result<Space<I>> {
    Ok(Space { x: x.clone(), a: inst.struct_full(x)? })
}

/// S₁ = (S, ⟨1_S⟩).
pub fn s_one<I: Instance>(inst: &I) -> Result<Space<I>> {
    let s = inst.s();
    let id = inst.identity(&s);
    Ok(Space { x: s.clone(), a: inst.struct_from_generators(&s, &[id])? })
}

/// Both sides of the membership lemma: a ∈ A, and a: S₁ → (X,A) is affine.
/// The two booleans must agree on every space.
pub fn membership_lemma<I: Instance>(
    inst: &I,
    space: &Space<I>,
    a: &I::Mor,
) -> Result<(bool, bool)> {
    let direct = inst.struct_contains(&space.x, &space.a, a)?;
    let via_morphism = is_affine(inst, a, &s_one(inst)?, space)?;
    Ok((direct, via_morphism))
}

/// The copower n·S₁: the space (n·S, J_n) with J_n generated by the
/// injections, together with the injections themselves (the universal arrow
/// κ_n sends the i-th free generator to j_i).
pub fn copower_s_one<I: Instance>(inst: &I, n: usize) -> Result<(Space<I>, Vec<I::Mor>)> {
    let x = inst.copower(n);
    let injections: Vec<I::Mor> = (0..n).map(|i| inst.injection(n, i)).collect();
    let a = inst.struct_from_generators(&x, &injections)?;
    Ok((Space { x, a }, injections))
}

/// All affine morphisms g: n·S₁ → target with g∘j_i = phi[i]; universality
/// of κ_n means exactly one exists for every tuple phi of structure elements.
pub fn factorizations_through<I: Instance>(
    inst: &I,
    n: usize,
    target: &Space<I>,
    phi: &[I::Mor],
) -> Result<Vec<I::Mor>> {
    if phi.len() != n {
        return Err(Error::domain("one image per copower summand required"));
    }
    let (source, injections) = copower_s_one(inst, n)?;
    let candidates = inst.hom(&source.x, &target.x).ok_or_else(|| {
        Error::unsupported("universality enumeration needs a finite hom-set")
    })?;
    let mut out = Vec::new();
    for g in candidates {
        let mut matches = true;
        for (j, p) in injections.iter().zip(phi) {
            if inst.compose(&g, j)? != *p {
                matches = false;
                break;
            }
        }
        if matches && is_affine(inst, &g, &source, target)? {
            out.push(g);
        }
    }
    Ok(out)
}

/// The explicit left adjoint of Γ at a finite T-algebra D: the copower D·S₁
/// is coequalized along every pair (j_{ω̃(d₁,…,d_k)}, [j_{d₁},…,j_{d_k}]∘ω),
/// and the unit sends d to q∘j_d.
///
/// Returns the resulting space and the unit images, indexed like the
/// algebra's element list.
pub fn left_adjoint_object<I, A>(inst: &I, alg: &A) -> Result<(Space<I>, Vec<I::Mor>)>
where
    I: Instance,
    A: Algebra,
{
    if *alg.signature() != inst.signature() {
        return Err(Error::domain("algebra signature differs from the bound theory"));
    }
    if !inst.has_coequalizers() {
        return Err(Error::unsupported(format!(
            "the {} instance has no coequalizers, so the explicit left adjoint is unavailable",
            inst.name()
        )));
    }
    let elems = alg
        .elements()
        .ok_or_else(|| Error::unsupported("left adjoint needs a finite algebra"))?;
    let n = elems.len();
    let index = |e: &A::Elem| -> usize {
        elems.iter().position(|x| x == e).expect("algebra is closed")
    };
    let x = inst.copower(n);
    let injections: Vec<I::Mor> = (0..n).map(|i| inst.injection(n, i)).collect();
    let coops = inst.cooperations();
    let sig = inst.signature();

    let mut pairs = Vec::new();
    for (op, omega) in coops.iter().enumerate() {
        let k = sig.arity(op);
        if n == 0 && k > 0 {
            continue;
        }
        let mut idx = vec![0usize; k];
        loop {
            let tuple: Vec<A::Elem> = idx.iter().map(|&i| elems[i].clone()).collect();
            let lhs = injections[index(&alg.apply(op, &tuple))].clone();
            let legs: Vec<I::Mor> = idx.iter().map(|&i| injections[i].clone()).collect();
            let rhs = inst.compose(&inst.cotuple(&x, &legs)?, omega)?;
            pairs.push((lhs, rhs));
            let mut j = 0;
            loop {
                if j == k {
                    break;
                }
                idx[j] += 1;
                if idx[j] < n {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
            if j == k {
                break;
            }
        }
    }

    let q = inst.coequalize(&x, &pairs)?;
    let unit: Vec<I::Mor> = injections
        .iter()
        .map(|j| inst.compose(&q, j))
        .collect::<Result<_>>()?;
    let structure = inst.struct_from_generators(&inst.cod(&q), &unit)?;
    Ok((Space { x: inst.cod(&q), a: structure }, unit))
}

/// Mutual containment of generators.
pub fn structures_equal<I: Instance>(
    inst: &I,
    x: &I::Obj,
    a: &I::Struct,
    b: &I::Struct,
) -> Result<bool> {
    for g in inst.struct_generators(x, a) {
        if !inst.struct_contains(x, b, &g)? {
            return Ok(false);
        }
    }
    for g in inst.struct_generators(x, b) {
        if !inst.struct_contains(x, a, &g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Searches for an isomorphism of spaces: an iso of base objects that is
/// affine in both directions.
pub fn spaces_isomorphic<I: Instance>(
    inst: &I,
    sp1: &Space<I>,
    sp2: &Space<I>,
) -> Result<Option<I::Mor>> {
    let candidates = inst
        .hom(&sp1.x, &sp2.x)
        .ok_or_else(|| Error::unsupported("isomorphism search needs a finite hom-set"))?;
    for f in candidates {
        if !inst.is_iso(&f)? {
            continue;
        }
        if !is_affine(inst, &f, sp1, sp2)? {
            continue;
        }
        let inverse = inst
            .factor_through(&f, &inst.identity(&sp1.x))?
            .ok_or_else(|| Error::internal("an isomorphism must have an inverse"))?;
        if is_affine(inst, &inverse, sp2, sp1)? {
            return Ok(Some(f));
        }
    }
    Ok(None)
}
