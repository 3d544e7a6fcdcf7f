//! The dual closure operator ζ on regular quotients of spaces: both
//! constructions (joint coequalizer over the kernel relation, and
//! co-intersection of pairwise coequalizers), the factorization p = θp∘ζp,
//! the closed/sparse classifier, inverse images, and the law suite.

use crate::affine::{direct_image, is_affine, Space};
use crate::error::{Error, Result};
use crate::instances::{FinMod, FinSet, Instance, ModMap, SetMap};
use crate::theory::TheoryKind;
use rand::{Rng, RngCore, SeedableRng};
use serde::Serialize;
use std::fmt;

/// A regular epimorphism out of a space, carrying the direct-image structure
/// on its codomain.
pub struct Quotient<I: Instance> {
    pub source: Space<I>,
    pub p: I::Mor,
    /// {p}·A on the codomain.
    pub structure: I::Struct,
}

impl<I: Instance> Clone for Quotient<I> {
    fn clone(&self) -> Self {
        Quotient {
            source: self.source.clone(),
            p: self.p.clone(),
            structure: self.structure.clone(),
        }
    }
}

impl<I: Instance> fmt::Debug for Quotient<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Quotient")
            .field("source", &self.source)
            .field("p", &self.p)
            .field("structure", &self.structure)
            .finish()
    }
}

/// Validates p as a regular epi out of the space and builds the quotient.
pub fn quotient<I: Instance>(inst: &I, source: &Space<I>, p: &I::Mor) -> Result<Quotient<I>> {
    if inst.dom(p) != source.x {
        return Err(Error::domain("quotient map must start at the source space"));
    }
    if !inst.is_regular_epi(p)? {
        return Err(Error::domain("quotient map must be a regular epimorphism"));
    }
    Ok(Quotient {
        source: source.clone(),
        p: p.clone(),
        structure: direct_image(inst, p, &source.a)?,
    })
}

/// The codomain of a quotient as a space.
pub fn target_space<I: Instance>(inst: &I, q: &Quotient<I>) -> Space<I> {
    Space { x: inst.cod(&q.p), a: q.structure.clone() }
}

/// The pairs (a, b) ∈ A×A with p∘a = p∘b, stored with a < b (the diagonal is
/// implicit).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelRelation<M> {
    pub pairs: Vec<(M, M)>,
}

pub fn kernel_relation<I: Instance>(
    inst: &I,
    q: &Quotient<I>,
) -> Result<KernelRelation<I::Mor>> {
    let elems = inst
        .struct_elements(&q.source.x, &q.source.a)
        .ok_or_else(|| Error::unsupported("kernel relation needs a materialized structure"))?;
    let images: Vec<I::Mor> = elems
        .iter()
        .map(|a| inst.compose(&q.p, a))
        .collect::<Result<_>>()?;
    let mut pairs = Vec::new();
    for i in 0..elems.len() {
        for j in i + 1..elems.len() {
            if images[i] == images[j] {
                let (a, b) = (elems[i].clone(), elems[j].clone());
                let (a, b) = if a <= b { (a, b) } else { (b, a) };
                pairs.push((a, b));
            }
        }
    }
    pairs.sort();
    pairs.dedup();
    Ok(KernelRelation { pairs })
}

/// ζp with its factorization p = θp∘ζp and the classification flags.
pub struct ClosureResult<I: Instance> {
    pub zeta: Quotient<I>,
    pub theta: I::Mor,
    pub is_closed: bool,
    pub is_sparse: bool,
    pub kernel_size: usize,
}

impl<I: Instance> fmt::Debug for ClosureResult<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClosureResult")
            .field("zeta", &self.zeta)
            .field("theta", &self.theta)
            .field("is_closed", &self.is_closed)
            .field("is_sparse", &self.is_sparse)
            .finish()
    }
}

/// Computes ζp by the joint coequalizer of the kernel pairs, cross-checks it
/// against the co-intersection of the pairwise coequalizers, and reads off
/// θp and the flags.
pub fn zeta<I: Instance>(inst: &I, q: &Quotient<I>) -> Result<ClosureResult<I>> {
    if !inst.has_coequalizers() {
        return Err(Error::unsupported(format!(
            "the {} instance has no coequalizers, so ζ is unavailable",
            inst.name()
        )));
    }
    let ker = kernel_relation(inst, q)?;
    let x = &q.source.x;
    let z = inst.coequalize(x, &ker.pairs)?;

    // Second construction: co-intersection of the individual coequalizers.
    let singles: Vec<I::Mor> = ker
        .pairs
        .iter()
        .map(|pair| inst.coequalize(x, std::slice::from_ref(pair)))
        .collect::<Result<_>>()?;
    let z2 = inst.cointersect(x, &singles)?;
    let fwd = inst
        .factor_through(&z, &z2)?
        .ok_or_else(|| Error::internal("co-intersection does not refine the coequalizer"))?;
    let bwd = inst
        .factor_through(&z2, &z)?
        .ok_or_else(|| Error::internal("coequalizer does not refine the co-intersection"))?;
    if inst.compose(&bwd, &fwd)? != inst.identity(&inst.cod(&z))
        || inst.compose(&fwd, &bwd)? != inst.identity(&inst.cod(&z2))
    {
        return Err(Error::internal("the two constructions of ζ disagree"));
    }

    let theta = inst
        .factor_through(&z, &q.p)?
        .ok_or_else(|| Error::internal("p does not factor through ζp"))?;
    let zeta_q = quotient(inst, &q.source, &z)?;
    let is_closed = inst.is_iso(&theta)?;
    let is_sparse = inst.is_iso(&z)?;
    if is_sparse != ker.pairs.is_empty() {
        return Err(Error::internal(
            "sparseness disagrees with the kernel-in-diagonal criterion",
        ));
    }
    Ok(ClosureResult {
        zeta: zeta_q,
        theta,
        is_closed,
        is_sparse,
        kernel_size: ker.pairs.len(),
    })
}

/// (is_zeta_closed, is_zeta_sparse).
pub fn classify<I: Instance>(inst: &I, q: &Quotient<I>) -> Result<(bool, bool)> {
    let cr = zeta(inst, q)?;
    Ok((cr.is_closed, cr.is_sparse))
}

/// The inverse image f^-(q): the regular-epi part of q.p ∘ f, as a quotient
/// of the domain space of f.
pub fn inverse_image<I: Instance>(
    inst: &I,
    f: &I::Mor,
    dom_space: &Space<I>,
    q: &Quotient<I>,
) -> Result<Quotient<I>> {
    if inst.cod(f) != q.source.x {
        return Err(Error::domain("inverse image: f must land in the quotient's source"));
    }
    if !is_affine(inst, f, dom_space, &q.source)? {
        return Err(Error::domain("inverse image: f is not an affine morphism"));
    }
    let composite = inst.compose(&q.p, f)?;
    let (e, _m) = inst.factorize(&composite)?;
    quotient(inst, dom_space, &e)
}

/// p ≤ p' holds when p' factors through p (p' makes at least the
/// identifications p makes).
pub fn quotient_leq<I: Instance>(inst: &I, p: &Quotient<I>, p2: &Quotient<I>) -> Result<bool> {
    if p.source.x != p2.source.x {
        return Err(Error::domain("comparable quotients must share their source object"));
    }
    Ok(inst.factor_through(&p.p, &p2.p)?.is_some())
}

/// One configuration for the law suite: a quotient, optionally a coarser one
/// (p ≤ coarser) for monotonicity, and optionally an affine morphism into the
/// source for the inverse-image law.
pub struct LawCase<I: Instance> {
    pub quotient: Quotient<I>,
    pub coarser: Option<Quotient<I>>,
    pub mapped: Option<(I::Mor, Space<I>)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawReport {
    pub cases: usize,
    pub checks: usize,
    pub violations: Vec<String>,
}

impl LawReport {
    pub fn all_hold(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies, per case: ζp ≤ p; monotonicity; ζp ≤ ζζp with idempotence;
/// ζp being ζ-closed and θp being ζ-sparse; closed ∧ sparse ⇒ iso;
/// ker_A(p) = ker_A(ζp); and ζ(f^-(q)) ≤ f^-(ζq) where a morphism is given.
pub fn verify_laws<I: Instance>(inst: &I, cases: &[LawCase<I>]) -> Result<LawReport> {
    let mut checks = 0usize;
    let mut violations = Vec::new();
    let fail = |n: usize, msg: String, violations: &mut Vec<String>| {
        violations.push(format!("case {n}: {msg}"));
    };
    for (n, case) in cases.iter().enumerate() {
        let q = &case.quotient;
        let cr = zeta(inst, q)?;

        checks += 1;
        if !quotient_leq(inst, &cr.zeta, q)? {
            fail(n, "rule 1 violated: p does not factor through ζp".into(), &mut violations);
        }

        // Idempotence: ζζp is isomorphic to ζp (both directions of ≤).
        let cr2 = zeta(inst, &cr.zeta)?;
        checks += 1;
        if !quotient_leq(inst, &cr.zeta, &cr2.zeta)? || !quotient_leq(inst, &cr2.zeta, &cr.zeta)? {
            fail(n, "rule 3 / idempotence violated for ζζp".into(), &mut violations);
        }

        // ζp is ζ-closed; θp is ζ-sparse.
        checks += 1;
        if !cr2.is_closed {
            fail(n, "ζp is not ζ-closed".into(), &mut violations);
        }
        let theta_q = quotient(inst, &target_space(inst, &cr.zeta), &cr.theta)?;
        let (_, theta_sparse) = classify(inst, &theta_q)?;
        checks += 1;
        if !theta_sparse {
            fail(n, "θp is not ζ-sparse".into(), &mut violations);
        }

        checks += 1;
        if cr.is_closed && cr.is_sparse && !inst.is_iso(&q.p)? {
            fail(n, "closed and sparse quotient is not an isomorphism".into(), &mut violations);
        }

        // ker_A(p) = ker_A(ζp).
        checks += 1;
        if kernel_relation(inst, q)? != kernel_relation(inst, &cr.zeta)? {
            fail(n, "kernel relation changed when passing to ζp".into(), &mut violations);
        }

        if let Some(coarser) = &case.coarser {
            if !quotient_leq(inst, q, coarser)? {
                return Err(Error::domain("law case: `coarser` is not above the quotient"));
            }
            let cr_c = zeta(inst, coarser)?;
            checks += 1;
            if !quotient_leq(inst, &cr.zeta, &cr_c.zeta)? {
                fail(n, "rule 2 violated: ζ is not monotone".into(), &mut violations);
            }
        }

        if let Some((f, dom_space)) = &case.mapped {
            let pulled = inverse_image(inst, f, dom_space, q)?;
            let zeta_pulled = zeta(inst, &pulled)?;
            let pulled_zeta = inverse_image(inst, f, dom_space, &cr.zeta)?;
            checks += 1;
            if !quotient_leq(inst, &zeta_pulled.zeta, &pulled_zeta)? {
                fail(
                    n,
                    "rule 4 violated: ζ(f⁻(q)) does not precede f⁻(ζq)".into(),
                    &mut violations,
                );
            }
        }
    }
    Ok(LawReport { cases: cases.len(), checks, violations })
}

/// Closed form in finite sets: merge the p-fibers inside A, keep everything
/// off A as singletons.
pub fn zeta_closed_form_finset(q: &Quotient<FinSet>) -> Result<SetMap> {
    let inst = FinSet;
    let x = q.source.x;
    let mut repr: Vec<usize> = (0..x).collect();
    fn find(repr: &mut [usize], i: usize) -> usize {
        if repr[i] != i {
            let r = find(repr, repr[i]);
            repr[i] = r;
            r
        } else {
            i
        }
    }
    let members: Vec<usize> = q.source.a.iter().copied().collect();
    for (k, &a) in members.iter().enumerate() {
        for &b in &members[k + 1..] {
            if q.p.map[a] == q.p.map[b] {
                let (ra, rb) = (find(&mut repr, a), find(&mut repr, b));
                let (lo, hi) = (ra.min(rb), ra.max(rb));
                repr[hi] = lo;
            }
        }
    }
    // Canonical renumbering in order of least representatives, matching the
    // instance's quotient convention.
    let mut block = vec![usize::MAX; x];
    let mut next = 0usize;
    let mut map = vec![0usize; x];
    for i in 0..x {
        let r = find(&mut repr, i);
        if block[r] == usize::MAX {
            block[r] = next;
            next += 1;
        }
        map[i] = block[r];
    }
    let _ = inst;
    Ok(SetMap { dom: x, cod: next, map })
}

/// Closed form over Z/m. For T = EMPTY the quotient is X → X/Â with Â
/// generated by the differences of identified structure elements; for
/// T = MODULE(R) it is X → X/(ker p ∩ A).
pub fn zeta_closed_form_finmod(inst: &FinMod, q: &Quotient<FinMod>) -> Result<ModMap> {
    use crate::howell::{howell, kernel};
    let m = inst.modulus;
    let x = &q.source.x;
    let mut extra: Vec<Vec<u64>> = Vec::new();
    match inst.theory() {
        TheoryKind::Empty => {
            let ker = kernel_relation(inst, q)?;
            for (a, b) in &ker.pairs {
                let diff: Vec<u64> = a.cols[0]
                    .iter()
                    .zip(&b.cols[0])
                    .map(|(&u, &v)| (u + m - v) % m)
                    .collect();
                extra.push(diff);
            }
        }
        TheoryKind::Module { .. } => {
            // ker p as a submodule of X, then intersect with the structure A.
            let mut ker_rows = kernel(&q.p.cols, &q.p.cod.rels, q.p.cod.gens, m);
            ker_rows.extend(x.rels.iter().cloned());
            let a_rows = match &q.source.a {
                crate::instances::ModStruct::Span { rows, .. } => rows.clone(),
                crate::instances::ModStruct::Elements(_) => {
                    return Err(Error::domain(
                        "MODULE closed form expects a span-backed structure",
                    ))
                }
            };
            // Coefficients c with Σ c_i ker_rows_i in span(a_rows) give the
            // intersection generators.
            for c in kernel(&ker_rows, &a_rows, x.gens, m) {
                let mut v = vec![0u64; x.gens];
                for (ci, row) in c.iter().zip(&ker_rows) {
                    for (vi, ri) in v.iter_mut().zip(row) {
                        *vi = (*vi + crate::howell::modmul(*ci, *ri, m)) % m;
                    }
                }
                extra.push(v);
            }
        }
        TheoryKind::Group => unreachable!(),
    }
    let mut rels = x.rels.clone();
    rels.extend(extra);
    let q_obj = crate::instances::ModObj { gens: x.gens, rels: howell(&rels, x.gens, m) };
    Ok(inst
        .mor(x, &q_obj, &identity_cols(x.gens))
        .expect("projection onto a quotient presentation"))
}

fn identity_cols(gens: usize) -> Vec<Vec<u64>> {
    (0..gens)
        .map(|i| {
            let mut c = vec![0u64; gens];
            c[i] = 1;
            c
        })
        .collect()
}

/// Seeded random law cases in finite sets, |X| ≤ max_size.
pub fn sample_finset_cases(count: usize, max_size: usize, seed: u64) -> Result<Vec<LawCase<FinSet>>> {
    let inst = FinSet;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x: usize = rng.gen_range(1..=max_size);
        let a: std::collections::BTreeSet<usize> = (0..x).filter(|_| rng.gen_bool(0.5)).collect();
        let source = Space { x, a };
        let p = {
            let cod = rng.gen_range(1..=x);
            let raw = random_map(&mut rng, x, cod);
            inst.factorize(&raw)?.0
        };
        let q = quotient(&inst, &source, &p)?;
        let coarser = {
            let cod = rng.gen_range(1..=p.cod);
            let further = random_map(&mut rng, p.cod, cod);
            let (e, _) = inst.factorize(&further)?;
            let p2 = inst.compose(&e, &p)?;
            Some(quotient(&inst, &source, &p2)?)
        };
        let mapped = {
            let z: usize = rng.gen_range(1..=max_size);
            let f = random_map(&mut rng, z, x);
            let dom_space =
                crate::affine::initial_structure(&inst, &z, &[(f.clone(), source.clone())])?;
            Some((f, dom_space))
        };
        out.push(LawCase { quotient: q, coarser, mapped });
    }
    Ok(out)
}

fn random_map(rng: &mut dyn RngCore, dom: usize, cod: usize) -> SetMap {
    SetMap {
        dom,
        cod,
        map: (0..dom).map(|_| (rng.next_u64() as usize) % cod).collect(),
    }
}

/// Exhaustive law cases over Z/2 modules of dimension ≤ max_dim with the
/// MODULE theory: all free objects, all submodule structures, all quotients
/// (by every submodule), all coarser quotients, and all pullbacks along
/// morphisms from R.
pub fn enumerate_finmod_z2_cases(max_dim: usize) -> Result<Vec<LawCase<FinMod>>> {
    let inst = FinMod::module_theory(2)?;
    let mut out = Vec::new();
    for k in 0..=max_dim {
        let x = inst.obj(k, &[])?;
        let submodules = all_submodule_structs(&inst, &x)?;
        for a_struct in &submodules {
            let source = Space { x: x.clone(), a: a_struct.clone() };
            for k_struct in &submodules {
                let p = project_by(&inst, &x, k_struct)?;
                let q = quotient(&inst, &source, &p)?;
                for k2 in &submodules {
                    // Only pairs where the second kernel contains the first.
                    if !span_contains(&inst, &x, k2, k_struct)? {
                        continue;
                    }
                    let p2 = project_by(&inst, &x, k2)?;
                    let coarser = Some(quotient(&inst, &source, &p2)?);
                    // One pulled-back configuration per case: every morphism
                    // from R into the initial lift.
                    for f in inst.hom(&inst.s(), &x).unwrap() {
                        let dom_space = crate::affine::initial_structure(
                            &inst,
                            &inst.s(),
                            &[(f.clone(), source.clone())],
                        )?;
                        out.push(LawCase {
                            quotient: q.clone(),
                            coarser: coarser.clone(),
                            mapped: Some((f, dom_space)),
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// All submodule structures of x (MODULE theory), via spans of all subsets
/// of elements.
pub fn all_submodule_structs(
    inst: &FinMod,
    x: &crate::instances::ModObj,
) -> Result<Vec<crate::instances::ModStruct>> {
    let elems = inst
        .elements_of(x)
        .ok_or_else(|| Error::unsupported("submodule enumeration needs a small module"))?;
    let n = elems.len();
    if n > 16 {
        return Err(Error::unsupported("submodule enumeration capped at 16 elements"));
    }
    let mut seen: Vec<crate::instances::ModStruct> = Vec::new();
    for mask in 0u32..(1 << n) {
        let gens: Vec<ModMap> = elems
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, v)| inst.element(x, v))
            .collect::<Result<_>>()?;
        let st = inst.struct_from_generators(x, &gens)?;
        if !seen
            .iter()
            .map(|other| crate::affine::structures_equal(inst, x, &st, other))
            .collect::<Result<Vec<bool>>>()?
            .iter()
            .any(|&b| b)
        {
            seen.push(st);
        }
    }
    Ok(seen)
}

/// The projection of x by the submodule described by a span structure.
fn project_by(
    inst: &FinMod,
    x: &crate::instances::ModObj,
    k_struct: &crate::instances::ModStruct,
) -> Result<ModMap> {
    let gens = inst.struct_generators(x, k_struct);
    let pairs: Vec<(ModMap, ModMap)> = gens
        .into_iter()
        .map(|g| {
            let zero = inst.element(x, &vec![0; x.gens])?;
            Ok((g, zero))
        })
        .collect::<Result<_>>()?;
    inst.coequalize(x, &pairs)
}

fn span_contains(
    inst: &FinMod,
    x: &crate::instances::ModObj,
    big: &crate::instances::ModStruct,
    small: &crate::instances::ModStruct,
) -> Result<bool> {
    for g in inst.struct_generators(x, small) {
        if !inst.struct_contains(x, big, &g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::Rose;
    use crate::words::ReducedWord;

    #[test]
    fn constant_map_example() {
        // X = {0,1,2}, A = {0,1}, p constant: ζp identifies {0,1}, fixes 2.
        let inst = FinSet;
        let source = Space { x: 3usize, a: [0usize, 1].into_iter().collect() };
        let p = SetMap::new(3, 1, vec![0, 0, 0]).unwrap();
        let q = quotient(&inst, &source, &p).unwrap();
        let cr = zeta(&inst, &q).unwrap();
        assert_eq!(inst.cod(&cr.zeta.p), 2);
        assert_eq!(cr.zeta.p.map[0], cr.zeta.p.map[1]);
        assert_ne!(cr.zeta.p.map[0], cr.zeta.p.map[2]);
        assert!(!cr.is_closed);
        assert!(!cr.is_sparse);
        // Closed form agrees on the nose.
        assert_eq!(zeta_closed_form_finset(&q).unwrap(), cr.zeta.p);
    }

    #[test]
    fn identity_quotient_is_closed_and_sparse() {
        let inst = FinSet;
        let source = Space { x: 3usize, a: [0usize, 2].into_iter().collect() };
        let q = quotient(&inst, &source, &inst.identity(&3)).unwrap();
        let (closed, sparse) = classify(&inst, &q).unwrap();
        assert!(closed && sparse);
    }

    #[test]
    fn constant_map_with_full_structure_is_closed() {
        let inst = FinSet;
        let source = Space { x: 3usize, a: [0usize, 1, 2].into_iter().collect() };
        let p = SetMap::new(3, 1, vec![0, 0, 0]).unwrap();
        let q = quotient(&inst, &source, &p).unwrap();
        let (closed, sparse) = classify(&inst, &q).unwrap();
        assert!(closed);
        assert!(!sparse);
    }

    #[test]
    fn module_theory_closed_form_projection() {
        // X = (Z/2)², A = span{(1,0)}, p = projection to the second
        // coordinate: ζp quotients by span{(1,0)} = ker p ∩ A.
        let inst = FinMod::module_theory(2).unwrap();
        let x = inst.obj(2, &[]).unwrap();
        let a = inst
            .struct_from_generators(&x, &[inst.element(&x, &[1, 0]).unwrap()])
            .unwrap();
        let source = Space { x: x.clone(), a };
        let y = inst.obj(1, &[]).unwrap();
        let p = inst.mor(&x, &y, &[vec![0], vec![1]]).unwrap();
        let q = quotient(&inst, &source, &p).unwrap();
        let cr = zeta(&inst, &q).unwrap();
        let oracle = zeta_closed_form_finmod(&inst, &q).unwrap();
        assert_eq!(cr.zeta.p, oracle);
        assert_eq!(inst.elements_of(&oracle.cod).unwrap().len(), 2);
        // ker p = A here, so the quotient is closed; A has two elements so
        // it is not sparse.
        assert!(cr.is_closed);
        assert!(!cr.is_sparse);
    }

    #[test]
    fn empty_theory_difference_submodule() {
        // A = {(0,0),(1,1)} in (Z/2)², p collapsing both to 0: Â = <(1,1)>.
        let inst = FinMod::empty_theory(2).unwrap();
        let x = inst.obj(2, &[]).unwrap();
        let a = inst
            .struct_from_elements(
                &x,
                &[inst.element(&x, &[0, 0]).unwrap(), inst.element(&x, &[1, 1]).unwrap()],
            )
            .unwrap();
        let source = Space { x: x.clone(), a };
        // p: X → X/<(1,1)>.
        let quot_obj = inst.obj(2, &[vec![1, 1]]).unwrap();
        let p = inst.mor(&x, &quot_obj, &identity_cols(2)).unwrap();
        let q = quotient(&inst, &source, &p).unwrap();
        let cr = zeta(&inst, &q).unwrap();
        let oracle = zeta_closed_form_finmod(&inst, &q).unwrap();
        assert_eq!(cr.zeta.p, oracle);
        assert_eq!(oracle.cod, quot_obj);
        assert!(cr.is_closed);
        assert!(!cr.is_sparse);
    }

    #[test]
    fn seeded_finset_law_suite_smoke() {
        let inst = FinSet;
        let cases = sample_finset_cases(60, 5, 11).unwrap();
        let report = verify_laws(&inst, &cases).unwrap();
        assert!(report.all_hold(), "violations: {:?}", report.violations);
        assert_eq!(report.cases, 60);
    }

    #[test]
    fn finmod_z2_law_suite_smoke() {
        let inst = FinMod::module_theory(2).unwrap();
        let cases = enumerate_finmod_z2_cases(1).unwrap();
        let report = verify_laws(&inst, &cases).unwrap();
        assert!(report.all_hold(), "violations: {:?}", report.violations);
    }

    #[test]
    fn inverse_image_of_identity_morphism() {
        let inst = FinSet;
        let source = Space { x: 3usize, a: [0usize, 1].into_iter().collect() };
        let p = SetMap::new(3, 2, vec![0, 0, 1]).unwrap();
        let q = quotient(&inst, &source, &p).unwrap();
        let pulled = inverse_image(&inst, &inst.identity(&3), &source, &q).unwrap();
        assert!(quotient_leq(&inst, &q, &pulled).unwrap());
        assert!(quotient_leq(&inst, &pulled, &q).unwrap());
    }

    #[test]
    fn rose_zeta_is_unsupported() {
        let inst = Rose;
        let s1 = crate::affine::s_one(&inst).unwrap();
        let id = inst.identity(&1);
        let q = Quotient {
            source: s1.clone(),
            p: id.clone(),
            structure: s1.a.clone(),
        };
        match zeta(&inst, &q) {
            Err(Error::Unsupported(_)) => {}
            other => panic!("expected unsupported, got {other:?}"),
        }
        let _ = ReducedWord::identity();
    }

    #[test]
    fn sparse_iff_structure_restriction_injective() {
        // Exhaustive |X| <= 4: ζ-sparse ⟺ p injective on A.
        let inst = FinSet;
        for x in 1usize..=4 {
            for aset in 0u32..(1 << x) {
                let a: std::collections::BTreeSet<usize> =
                    (0..x).filter(|i| aset & (1 << i) != 0).collect();
                let source = Space { x, a: a.clone() };
                for raw in inst.hom(&x, &x).unwrap() {
                    let (p, _) = inst.factorize(&raw).unwrap();
                    let q = quotient(&inst, &source, &p).unwrap();
                    let (_, sparse) = classify(&inst, &q).unwrap();
                    let mut seen = std::collections::BTreeSet::new();
                    let inj = a.iter().all(|&v| seen.insert(p.map[v]));
                    assert_eq!(sparse, inj);
                }
            }
        }
    }
}
