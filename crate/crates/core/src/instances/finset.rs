//! Finite sets and total maps; S is the singleton, so hom(S, X) ≅ X and
//! structures are plain subsets.

use super::Instance;
use crate::error::{Error, Result};
use crate::theory::TheoryKind;
use rand::RngCore;
use std::collections::BTreeSet;

/// A total map between finite sets `{0, …, dom-1} → {0, …, cod-1}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetMap {
    pub dom: usize,
    pub cod: usize,
    pub map: Vec<usize>,
}

impl SetMap {
    pub fn new(dom: usize, cod: usize, map: Vec<usize>) -> Result<SetMap> {
        if map.len() != dom {
            return Err(Error::domain(format!(
                "map has {} entries for a {dom}-element domain",
                map.len()
            )));
        }
        if map.iter().any(|&v| v >= cod) {
            return Err(Error::domain("map value outside codomain"));
        }
        Ok(SetMap { dom, cod, map })
    }

    /// The point x as a morphism 1 → cod.
    pub fn point(cod: usize, x: usize) -> Result<SetMap> {
        SetMap::new(1, cod, vec![x])
    }

    /// The value of a point morphism 1 → X.
    pub fn as_point(&self) -> Result<usize> {
        if self.dom != 1 {
            return Err(Error::domain("not a point: domain is not the singleton"));
        }
        Ok(self.map[0])
    }
}

/// The finite-set instance: S = 1, theory EMPTY, all capabilities present.
#[derive(Clone, Copy, Debug, Default)]
pub struct FinSet;

const HOM_CAP: usize = 1 << 20;

impl FinSet {
    /// Canonical quotient out of a partition: blocks are numbered in order
    /// of their least element.
    fn quotient_of_partition(&self, x: usize, repr: &mut [usize]) -> SetMap {
        fn find(repr: &mut [usize], i: usize) -> usize {
            if repr[i] != i {
                let r = find(repr, repr[i]);
                repr[i] = r;
                r
            } else {
                i
            }
        }
        let mut block = vec![usize::MAX; x];
        let mut next = 0usize;
        let mut map = vec![0usize; x];
        for i in 0..x {
            let r = find(repr, i);
            if block[r] == usize::MAX {
                block[r] = next;
                next += 1;
            }
            map[i] = block[r];
        }
        SetMap { dom: x, cod: next, map }
    }
}

impl Instance for FinSet {
    type Obj = usize;
    type Mor = SetMap;
    type Struct = BTreeSet<usize>;

    fn name(&self) -> &'static str {
        "finset"
    }

    fn theory(&self) -> TheoryKind {
        TheoryKind::Empty
    }

    fn s(&self) -> usize {
        1
    }

    fn dom(&self, f: &SetMap) -> usize {
        f.dom
    }

    fn cod(&self, f: &SetMap) -> usize {
        f.cod
    }

    fn identity(&self, x: &usize) -> SetMap {
        SetMap { dom: *x, cod: *x, map: (0..*x).collect() }
    }

    fn compose(&self, g: &SetMap, f: &SetMap) -> Result<SetMap> {
        if f.cod != g.dom {
            return Err(Error::domain("composition mismatch: cod(f) != dom(g)"));
        }
        Ok(SetMap {
            dom: f.dom,
            cod: g.cod,
            map: f.map.iter().map(|&v| g.map[v]).collect(),
        })
    }

    fn copower(&self, n: usize) -> usize {
        n
    }

    fn injection(&self, n: usize, i: usize) -> SetMap {
        SetMap { dom: 1, cod: n, map: vec![i] }
    }

    fn cotuple(&self, cod: &usize, legs: &[SetMap]) -> Result<SetMap> {
        let mut map = Vec::with_capacity(legs.len());
        for leg in legs {
            if leg.dom != 1 || leg.cod != *cod {
                return Err(Error::domain("cotuple legs must be points of the codomain"));
            }
            map.push(leg.map[0]);
        }
        Ok(SetMap { dom: legs.len(), cod: *cod, map })
    }

    fn cooperations(&self) -> Vec<SetMap> {
        vec![]
    }

    fn hom(&self, x: &usize, y: &usize) -> Option<Vec<SetMap>> {
        if *x == 0 {
            return Some(vec![SetMap { dom: 0, cod: *y, map: vec![] }]);
        }
        if *y == 0 {
            return Some(vec![]);
        }
        let count = (*y as u128).checked_pow(*x as u32)?;
        if count > HOM_CAP as u128 {
            return None;
        }
        let mut out = Vec::with_capacity(count as usize);
        let mut map = vec![0usize; *x];
        loop {
            out.push(SetMap { dom: *x, cod: *y, map: map.clone() });
            let mut i = 0;
            loop {
                if i == *x {
                    return Some(out);
                }
                map[i] += 1;
                if map[i] < *y {
                    break;
                }
                map[i] = 0;
                i += 1;
            }
        }
    }

    fn sample_hom_elem(&self, x: &usize, rng: &mut dyn RngCore) -> SetMap {
        assert!(*x > 0, "the empty set has no points");
        SetMap { dom: 1, cod: *x, map: vec![rng.next_u64() as usize % *x] }
    }

    fn has_coequalizers(&self) -> bool {
        true
    }

    fn has_factorizations(&self) -> bool {
        true
    }

    fn coequalize(&self, x: &usize, pairs: &[(SetMap, SetMap)]) -> Result<SetMap> {
        let mut repr: Vec<usize> = (0..*x).collect();
        fn find(repr: &mut [usize], i: usize) -> usize {
            if repr[i] != i {
                let r = find(repr, repr[i]);
                repr[i] = r;
                r
            } else {
                i
            }
        }
        for (a, b) in pairs {
            self.check_hom_elem(x, a)?;
            self.check_hom_elem(x, b)?;
            let (ra, rb) = (find(&mut repr, a.map[0]), find(&mut repr, b.map[0]));
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            repr[hi] = lo;
        }
        Ok(self.quotient_of_partition(*x, &mut repr))
    }

    fn cointersect(&self, x: &usize, quotients: &[SetMap]) -> Result<SetMap> {
        let mut repr: Vec<usize> = (0..*x).collect();
        fn find(repr: &mut [usize], i: usize) -> usize {
            if repr[i] != i {
                let r = find(repr, repr[i]);
                repr[i] = r;
                r
            } else {
                i
            }
        }
        for q in quotients {
            if q.dom != *x {
                return Err(Error::domain("co-intersection quotient has the wrong domain"));
            }
            // Merge the fibers of q: the first element seen per value anchors
            // its fiber.
            let mut anchor = vec![usize::MAX; q.cod];
            for (i, &v) in q.map.iter().enumerate() {
                if anchor[v] == usize::MAX {
                    anchor[v] = i;
                } else {
                    let (ra, rb) = (find(&mut repr, anchor[v]), find(&mut repr, i));
                    let (lo, hi) = (ra.min(rb), ra.max(rb));
                    repr[hi] = lo;
                }
            }
        }
        Ok(self.quotient_of_partition(*x, &mut repr))
    }

    fn factorize(&self, f: &SetMap) -> Result<(SetMap, SetMap)> {
        let image: Vec<usize> = {
            let s: BTreeSet<usize> = f.map.iter().copied().collect();
            s.into_iter().collect()
        };
        let index_of = |v: usize| image.binary_search(&v).expect("image value");
        let e = SetMap {
            dom: f.dom,
            cod: image.len(),
            map: f.map.iter().map(|&v| index_of(v)).collect(),
        };
        let m = SetMap { dom: image.len(), cod: f.cod, map: image };
        Ok((e, m))
    }

    fn is_epi(&self, f: &SetMap) -> Result<bool> {
        let mut hit = vec![false; f.cod];
        for &v in &f.map {
            hit[v] = true;
        }
        Ok(hit.into_iter().all(|h| h))
    }

    fn is_mono(&self, f: &SetMap) -> Result<bool> {
        let distinct: BTreeSet<usize> = f.map.iter().copied().collect();
        Ok(distinct.len() == f.dom)
    }

    fn is_regular_epi(&self, f: &SetMap) -> Result<bool> {
        self.is_epi(f)
    }

    fn factor_through(&self, p: &SetMap, t: &SetMap) -> Result<Option<SetMap>> {
        if p.dom != t.dom {
            return Err(Error::domain("factor_through: domain mismatch"));
        }
        if !self.is_epi(p)? {
            return Err(Error::domain("factor_through requires a regular epi"));
        }
        let mut map = vec![usize::MAX; p.cod];
        for i in 0..p.dom {
            let (q, y) = (p.map[i], t.map[i]);
            if map[q] == usize::MAX {
                map[q] = y;
            } else if map[q] != y {
                return Ok(None);
            }
        }
        Ok(Some(SetMap { dom: p.cod, cod: t.cod, map }))
    }

    fn struct_from_generators(&self, x: &usize, gens: &[SetMap]) -> Result<BTreeSet<usize>> {
        // EMPTY theory: the generated subalgebra is the generator set itself.
        self.struct_from_elements(x, gens)
    }

    fn struct_from_elements(&self, x: &usize, elems: &[SetMap]) -> Result<BTreeSet<usize>> {
        let mut set = BTreeSet::new();
        for a in elems {
            self.check_hom_elem(x, a)?;
            set.insert(a.map[0]);
        }
        Ok(set)
    }

    fn struct_full(&self, x: &usize) -> Result<BTreeSet<usize>> {
        Ok((0..*x).collect())
    }

    fn struct_contains(&self, x: &usize, st: &BTreeSet<usize>, a: &SetMap) -> Result<bool> {
        self.check_hom_elem(x, a)?;
        Ok(st.contains(&a.map[0]))
    }

    fn struct_generators(&self, x: &usize, st: &BTreeSet<usize>) -> Vec<SetMap> {
        st.iter().map(|&v| SetMap { dom: 1, cod: *x, map: vec![v] }).collect()
    }

    fn struct_elements(&self, x: &usize, st: &BTreeSet<usize>) -> Option<Vec<SetMap>> {
        Some(self.struct_generators(x, st))
    }
}
