//! Finitely presented modules over Z/m and their linear maps; S = R is the
//! free rank-1 module, so hom(S, X) ≅ X.
//!
//! Objects are presentations R^k / span(rels) with the relation rows kept in
//! Howell normal form; every element is stored as the canonical coset
//! representative of its coefficient vector, which makes equality of objects,
//! morphisms and elements structural.

use super::Instance;
use crate::error::{Error, Result};
use crate::howell::{howell, in_span, kernel, modmul, reduce_vec, solve};
use crate::theory::TheoryKind;
use rand::RngCore;
use std::collections::BTreeSet;

const ENUM_CAP: u128 = 1 << 18;

/// A module presented as R^gens modulo the row span of `rels`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModObj {
    pub gens: usize,
    /// Howell normal form, rows of width `gens`.
    pub rels: Vec<Vec<u64>>,
}

/// A linear map, stored column-wise: `cols[i]` is the image of the i-th
/// generator of the domain, as a canonical representative in the codomain.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModMap {
    pub dom: ModObj,
    pub cod: ModObj,
    pub cols: Vec<Vec<u64>>,
}

/// The finite-module instance over R = Z/m, bound to T = EMPTY or MODULE(R).
#[derive(Clone, Debug)]
pub struct FinMod {
    pub modulus: u64,
    theory: TheoryKind,
}

/// Structures on a module object: arbitrary subsets under EMPTY, submodules
/// (Howell-backed spans) under MODULE(R).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModStruct {
    Elements(BTreeSet<Vec<u64>>),
    Span {
        gens: Vec<Vec<u64>>,
        /// howell(gens ∪ ambient rels): membership is reduction to zero.
        rows: Vec<Vec<u64>>,
    },
}

impl FinMod {
    pub fn empty_theory(modulus: u64) -> Result<FinMod> {
        FinMod::check_modulus(modulus)?;
        Ok(FinMod { modulus, theory: TheoryKind::Empty })
    }

    pub fn module_theory(modulus: u64) -> Result<FinMod> {
        FinMod::check_modulus(modulus)?;
        Ok(FinMod { modulus, theory: TheoryKind::Module { modulus } })
    }

    fn check_modulus(m: u64) -> Result<()> {
        if !(2..=64).contains(&m) {
            return Err(Error::domain("modulus must lie in 2..=64"));
        }
        Ok(())
    }

    /// Builds an object, normalizing the relation rows.
    pub fn obj(&self, gens: usize, rels: &[Vec<u64>]) -> Result<ModObj> {
        for r in rels {
            if r.len() != gens {
                return Err(Error::domain("relation row width differs from generator count"));
            }
        }
        Ok(ModObj { gens, rels: howell(rels, gens, self.modulus) })
    }

    /// Builds a morphism, canonicalizing columns and checking that the
    /// domain relations map into the codomain relations.
    pub fn mor(&self, dom: &ModObj, cod: &ModObj, cols: &[Vec<u64>]) -> Result<ModMap> {
        if cols.len() != dom.gens {
            return Err(Error::domain("one column per domain generator required"));
        }
        let cols: Vec<Vec<u64>> = cols
            .iter()
            .map(|c| {
                if c.len() != cod.gens {
                    return Err(Error::domain("column height differs from codomain rank"));
                }
                Ok(reduce_vec(c, &cod.rels, self.modulus))
            })
            .collect::<Result<_>>()?;
        for r in &dom.rels {
            let img = self.combine(&cols, r, cod.gens);
            if !in_span(&img, &cod.rels, self.modulus) {
                return Err(Error::domain(
                    "not a module map: a domain relation does not map into the codomain relations",
                ));
            }
        }
        Ok(ModMap { dom: dom.clone(), cod: cod.clone(), cols })
    }

    /// The element of `x` with the given coefficient vector, as S → x.
    pub fn element(&self, x: &ModObj, coeffs: &[u64]) -> Result<ModMap> {
        if coeffs.len() != x.gens {
            return Err(Error::domain("coefficient vector width differs from rank"));
        }
        self.mor(&self.s(), x, &[coeffs.to_vec()])
    }

    /// Σ_i weights[i] · cols[i] over Z/m (no reduction).
    fn combine(&self, cols: &[Vec<u64>], weights: &[u64], height: usize) -> Vec<u64> {
        let m = self.modulus;
        let mut out = vec![0u64; height];
        for (w, col) in weights.iter().zip(cols) {
            for (o, c) in out.iter_mut().zip(col) {
                *o = (*o + modmul(*w, *c, m)) % m;
            }
        }
        out
    }

    /// Applies f to an element given as a canonical representative.
    pub fn apply_elem(&self, f: &ModMap, v: &[u64]) -> Vec<u64> {
        let img = self.combine(&f.cols, v, f.cod.gens);
        reduce_vec(&img, &f.cod.rels, self.modulus)
    }

    /// Materializes `x` as a finite algebra for the bound theory, returning
    /// the operation tables together with the element list the table indices
    /// refer to.
    pub fn table_algebra(&self, x: &ModObj) -> Result<(crate::theory::TableAlgebra, Vec<Vec<u64>>)> {
        use crate::theory::TableAlgebra;
        let m = self.modulus;
        let elems = self
            .elements_of(x)
            .ok_or_else(|| Error::unsupported("module too large to materialize"))?;
        let index: std::collections::BTreeMap<&Vec<u64>, usize> =
            elems.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let n = elems.len();
        let alg = match self.theory {
            TheoryKind::Empty => TableAlgebra::empty_theory_set(n),
            TheoryKind::Module { .. } => {
                let zero = vec![index[&reduce_vec(&vec![0; x.gens], &x.rels, m)]];
                let mut add = Vec::with_capacity(n * n);
                for a in &elems {
                    for b in &elems {
                        let sum: Vec<u64> =
                            a.iter().zip(b).map(|(&u, &v)| (u + v) % m).collect();
                        add.push(index[&reduce_vec(&sum, &x.rels, m)]);
                    }
                }
                let mut tables = vec![zero, add];
                for c in 0..m {
                    let mut t = Vec::with_capacity(n);
                    for a in &elems {
                        let scaled: Vec<u64> = a.iter().map(|&v| modmul(v, c, m)).collect();
                        t.push(index[&reduce_vec(&scaled, &x.rels, m)]);
                    }
                    tables.push(t);
                }
                TableAlgebra::new(self.theory.signature(), n, tables)?
            }
            TheoryKind::Group => unreachable!(),
        };
        Ok((alg, elems))
    }

    /// All canonical representatives of elements of `x`, or None when the
    /// enumeration would exceed the cap.
    pub fn elements_of(&self, x: &ModObj) -> Option<Vec<Vec<u64>>> {
        let count = (self.modulus as u128).checked_pow(x.gens as u32)?;
        if count > ENUM_CAP {
            return None;
        }
        let mut seen = BTreeSet::new();
        let mut v = vec![0u64; x.gens];
        loop {
            seen.insert(reduce_vec(&v, &x.rels, self.modulus));
            let mut i = 0;
            loop {
                if i == x.gens {
                    return Some(seen.into_iter().collect());
                }
                v[i] += 1;
                if v[i] < self.modulus {
                    break;
                }
                v[i] = 0;
                i += 1;
            }
        }
    }
}

impl Instance for FinMod {
    type Obj = ModObj;
    type Mor = ModMap;
    type Struct = ModStruct;

    fn name(&self) -> &'static str {
        "finmod"
    }

    fn theory(&self) -> TheoryKind {
        self.theory
    }

    fn s(&self) -> ModObj {
        ModObj { gens: 1, rels: vec![] }
    }

    fn dom(&self, f: &ModMap) -> ModObj {
        f.dom.clone()
    }

    fn cod(&self, f: &ModMap) -> ModObj {
        f.cod.clone()
    }

    fn identity(&self, x: &ModObj) -> ModMap {
        let cols = (0..x.gens)
            .map(|i| {
                let mut c = vec![0u64; x.gens];
                c[i] = 1;
                reduce_vec(&c, &x.rels, self.modulus)
            })
            .collect();
        ModMap { dom: x.clone(), cod: x.clone(), cols }
    }

    fn compose(&self, g: &ModMap, f: &ModMap) -> Result<ModMap> {
        if f.cod != g.dom {
            return Err(Error::domain("composition mismatch: cod(f) != dom(g)"));
        }
        let cols = f.cols.iter().map(|c| self.apply_elem(g, c)).collect();
        Ok(ModMap { dom: f.dom.clone(), cod: g.cod.clone(), cols })
    }

    fn copower(&self, n: usize) -> ModObj {
        ModObj { gens: n, rels: vec![] }
    }

    fn injection(&self, n: usize, i: usize) -> ModMap {
        let mut c = vec![0u64; n];
        c[i] = 1;
        ModMap { dom: self.s(), cod: self.copower(n), cols: vec![c] }
    }

    fn cotuple(&self, cod: &ModObj, legs: &[ModMap]) -> Result<ModMap> {
        let mut cols = Vec::with_capacity(legs.len());
        for leg in legs {
            self.check_hom_elem(cod, leg)?;
            cols.push(leg.cols[0].clone());
        }
        Ok(ModMap { dom: self.copower(legs.len()), cod: cod.clone(), cols })
    }

    fn cooperations(&self) -> Vec<ModMap> {
        match self.theory {
            TheoryKind::Empty => vec![],
            TheoryKind::Module { modulus } => {
                let mut out = vec![
                    // zero: S → 0·S
                    ModMap { dom: self.s(), cod: self.copower(0), cols: vec![vec![]] },
                    // addition: S → 2·S, 1 ↦ (1,1)
                    ModMap { dom: self.s(), cod: self.copower(2), cols: vec![vec![1, 1]] },
                ];
                // one scalar cooperation per ring element: S → 1·S, 1 ↦ c
                for c in 0..modulus {
                    out.push(ModMap { dom: self.s(), cod: self.copower(1), cols: vec![vec![c]] });
                }
                out
            }
            TheoryKind::Group => unreachable!("finmod never binds GROUP"),
        }
    }

    fn hom(&self, x: &ModObj, y: &ModObj) -> Option<Vec<ModMap>> {
        let targets = self.elements_of(y)?;
        let count = (targets.len() as u128).checked_pow(x.gens as u32)?;
        if count > ENUM_CAP {
            return None;
        }
        if x.gens == 0 {
            return Some(vec![ModMap { dom: x.clone(), cod: y.clone(), cols: vec![] }]);
        }
        let mut out = Vec::new();
        let mut idx = vec![0usize; x.gens];
        loop {
            let cols: Vec<Vec<u64>> = idx.iter().map(|&i| targets[i].clone()).collect();
            if let Ok(f) = self.mor(x, y, &cols) {
                out.push(f);
            }
            let mut i = 0;
            loop {
                if i == x.gens {
                    return Some(out);
                }
                idx[i] += 1;
                if idx[i] < targets.len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }

    fn sample_hom_elem(&self, x: &ModObj, rng: &mut dyn RngCore) -> ModMap {
        let coeffs: Vec<u64> = (0..x.gens).map(|_| rng.next_u64() % self.modulus).collect();
        self.element(x, &coeffs).expect("random coefficients form an element")
    }

    fn has_coequalizers(&self) -> bool {
        true
    }

    fn has_factorizations(&self) -> bool {
        true
    }

    fn coequalize(&self, x: &ModObj, pairs: &[(ModMap, ModMap)]) -> Result<ModMap> {
        let m = self.modulus;
        let mut rels = x.rels.clone();
        for (a, b) in pairs {
            self.check_hom_elem(x, a)?;
            self.check_hom_elem(x, b)?;
            let diff: Vec<u64> = a.cols[0]
                .iter()
                .zip(&b.cols[0])
                .map(|(&u, &v)| (u + m - v) % m)
                .collect();
            rels.push(diff);
        }
        let q_obj = ModObj { gens: x.gens, rels: howell(&rels, x.gens, m) };
        let cols = (0..x.gens)
            .map(|i| {
                let mut c = vec![0u64; x.gens];
                c[i] = 1;
                reduce_vec(&c, &q_obj.rels, m)
            })
            .collect();
        Ok(ModMap { dom: x.clone(), cod: q_obj, cols })
    }

    fn cointersect(&self, x: &ModObj, quotients: &[ModMap]) -> Result<ModMap> {
        let m = self.modulus;
        // The co-intersection quotients X by the sum of the kernels; the
        // kernel of each q is read off from its columns, independently of
        // any generating pairs.
        let mut rels = x.rels.clone();
        for q in quotients {
            if q.dom != *x {
                return Err(Error::domain("co-intersection quotient has the wrong domain"));
            }
            rels.extend(kernel(&q.cols, &q.cod.rels, q.cod.gens, m));
        }
        let q_obj = ModObj { gens: x.gens, rels: howell(&rels, x.gens, m) };
        let cols = (0..x.gens)
            .map(|i| {
                let mut c = vec![0u64; x.gens];
                c[i] = 1;
                reduce_vec(&c, &q_obj.rels, m)
            })
            .collect();
        Ok(ModMap { dom: x.clone(), cod: q_obj, cols })
    }

    fn factorize(&self, f: &ModMap) -> Result<(ModMap, ModMap)> {
        let m = self.modulus;
        // Kernel generators already absorb the domain relations (they map
        // into the codomain relations), so they present the image directly.
        let ker = kernel(&f.cols, &f.cod.rels, f.cod.gens, m);
        let mid = ModObj { gens: f.dom.gens, rels: howell(&ker, f.dom.gens, m) };
        let e_cols = (0..f.dom.gens)
            .map(|i| {
                let mut c = vec![0u64; f.dom.gens];
                c[i] = 1;
                reduce_vec(&c, &mid.rels, m)
            })
            .collect();
        let e = ModMap { dom: f.dom.clone(), cod: mid.clone(), cols: e_cols };
        let mono = self.mor(&mid, &f.cod, &f.cols)?;
        Ok((e, mono))
    }

    fn is_epi(&self, f: &ModMap) -> Result<bool> {
        let m = self.modulus;
        let mut rows = f.cols.clone();
        rows.extend(f.cod.rels.iter().cloned());
        let h = howell(&rows, f.cod.gens, m);
        for i in 0..f.cod.gens {
            let mut e = vec![0u64; f.cod.gens];
            e[i] = 1;
            if !in_span(&e, &h, m) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn is_mono(&self, f: &ModMap) -> Result<bool> {
        let ker = kernel(&f.cols, &f.cod.rels, f.cod.gens, self.modulus);
        Ok(ker.iter().all(|k| in_span(k, &f.dom.rels, self.modulus)))
    }

    fn is_regular_epi(&self, f: &ModMap) -> Result<bool> {
        self.is_epi(f)
    }

    fn factor_through(&self, p: &ModMap, t: &ModMap) -> Result<Option<ModMap>> {
        if p.dom != t.dom {
            return Err(Error::domain("factor_through: domain mismatch"));
        }
        if !self.is_epi(p)? {
            return Err(Error::domain("factor_through requires a regular epi"));
        }
        let m = self.modulus;
        let mut cols = Vec::with_capacity(p.cod.gens);
        for i in 0..p.cod.gens {
            let mut e = vec![0u64; p.cod.gens];
            e[i] = 1;
            let pre = match solve(&p.cols, &p.cod.rels, &e, m) {
                Some(r) => r,
                None => return Ok(None),
            };
            cols.push(self.apply_elem(t, &pre));
        }
        let h = match self.mor(&p.cod, &t.cod, &cols) {
            Ok(h) => h,
            Err(_) => return Ok(None),
        };
        if self.compose(&h, p)? == *t {
            Ok(Some(h))
        } else {
            Ok(None)
        }
    }

    fn struct_from_generators(&self, x: &ModObj, gens: &[ModMap]) -> Result<ModStruct> {
        for g in gens {
            self.check_hom_elem(x, g)?;
        }
        match self.theory {
            TheoryKind::Empty => self.struct_from_elements(x, gens),
            TheoryKind::Module { .. } => {
                let gen_vecs: Vec<Vec<u64>> = gens.iter().map(|g| g.cols[0].clone()).collect();
                let mut rows = gen_vecs.clone();
                rows.extend(x.rels.iter().cloned());
                Ok(ModStruct::Span { gens: gen_vecs, rows: howell(&rows, x.gens, self.modulus) })
            }
            TheoryKind::Group => unreachable!(),
        }
    }

    fn struct_from_elements(&self, x: &ModObj, elems: &[ModMap]) -> Result<ModStruct> {
        let m = self.modulus;
        let mut set = BTreeSet::new();
        for a in elems {
            self.check_hom_elem(x, a)?;
            set.insert(a.cols[0].clone());
        }
        if let TheoryKind::Module { .. } = self.theory {
            // Explicit element lists must already be closed.
            let items: Vec<Vec<u64>> = set.iter().cloned().collect();
            if !set.contains(&reduce_vec(&vec![0; x.gens], &x.rels, m)) {
                return Err(Error::domain("element list is not closed: missing zero"));
            }
            for a in &items {
                for c in 0..m {
                    let scaled: Vec<u64> = a.iter().map(|&v| modmul(v, c, m)).collect();
                    if !set.contains(&reduce_vec(&scaled, &x.rels, m)) {
                        return Err(Error::domain("element list is not closed under scalars"));
                    }
                }
                for b in &items {
                    let sum: Vec<u64> = a.iter().zip(b).map(|(&u, &v)| (u + v) % m).collect();
                    if !set.contains(&reduce_vec(&sum, &x.rels, m)) {
                        return Err(Error::domain("element list is not closed under addition"));
                    }
                }
            }
        }
        Ok(ModStruct::Elements(set))
    }

    fn struct_full(&self, x: &ModObj) -> Result<ModStruct> {
        match self.theory {
            TheoryKind::Empty => {
                let elems = self.elements_of(x).ok_or_else(|| {
                    Error::unsupported("full structure exceeds the enumeration cap")
                })?;
                Ok(ModStruct::Elements(elems.into_iter().collect()))
            }
            TheoryKind::Module { .. } => {
                let gens: Vec<Vec<u64>> = (0..x.gens)
                    .map(|i| {
                        let mut c = vec![0u64; x.gens];
                        c[i] = 1;
                        reduce_vec(&c, &x.rels, self.modulus)
                    })
                    .collect();
                let mut rows = gens.clone();
                rows.extend(x.rels.iter().cloned());
                Ok(ModStruct::Span { gens, rows: howell(&rows, x.gens, self.modulus) })
            }
            TheoryKind::Group => unreachable!(),
        }
    }

    fn struct_contains(&self, x: &ModObj, st: &ModStruct, a: &ModMap) -> Result<bool> {
        self.check_hom_elem(x, a)?;
        Ok(match st {
            ModStruct::Elements(set) => set.contains(&a.cols[0]),
            ModStruct::Span { rows, .. } => in_span(&a.cols[0], rows, self.modulus),
        })
    }

    fn struct_generators(&self, x: &ModObj, st: &ModStruct) -> Vec<ModMap> {
        let to_mor = |v: &Vec<u64>| ModMap {
            dom: self.s(),
            cod: x.clone(),
            cols: vec![reduce_vec(v, &x.rels, self.modulus)],
        };
        match st {
            ModStruct::Elements(set) => set.iter().map(to_mor).collect(),
            ModStruct::Span { gens, .. } => gens.iter().map(to_mor).collect(),
        }
    }

    fn struct_elements(&self, x: &ModObj, st: &ModStruct) -> Option<Vec<ModMap>> {
        let m = self.modulus;
        let to_mor = |v: &Vec<u64>| ModMap {
            dom: self.s(),
            cod: x.clone(),
            cols: vec![reduce_vec(v, &x.rels, m)],
        };
        match st {
            ModStruct::Elements(set) => Some(set.iter().map(to_mor).collect()),
            ModStruct::Span { rows, .. } => {
                let count = (m as u128).checked_pow(rows.len() as u32)?;
                if count > ENUM_CAP {
                    return None;
                }
                let mut seen = BTreeSet::new();
                let mut coeffs = vec![0u64; rows.len()];
                loop {
                    let v = self.combine(rows, &coeffs, x.gens);
                    seen.insert(reduce_vec(&v, &x.rels, m));
                    let mut i = 0;
                    loop {
                        if i == rows.len() {
                            return Some(seen.iter().map(to_mor).collect());
                        }
                        coeffs[i] += 1;
                        if coeffs[i] < m {
                            break;
                        }
                        coeffs[i] = 0;
                        i += 1;
                    }
                }
            }
        }
    }
}
