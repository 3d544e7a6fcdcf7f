//! Finite wedges of circles modeled exactly by free groups: the object `n`
//! stands for the rank-n free group, a morphism n → m is an n-tuple of
//! reduced words over m generators, and composition is substitution.
//!
//! S is the single circle (rank 1), so hom(S, X) is the free group itself —
//! a symbolic carrier. Coequalizers do not exist here; the corresponding
//! trait methods report the missing capability.

use super::Instance;
use crate::error::{Error, Result};
use crate::stallings::StallingsGraph;
use crate::theory::TheoryKind;
use crate::words::{Letter, ReducedWord};
use rand::RngCore;

/// Default length bound for sampled words in the symbolic free group.
pub const SAMPLE_WORD_LEN: usize = 16;

/// A group homomorphism F_dom → F_cod given by generator images.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RoseMap {
    pub dom: usize,
    pub cod: usize,
    pub words: Vec<ReducedWord>,
}

/// A finitely generated subgroup of hom(S, X) = F_x, decided by its folded
/// graph.
#[derive(Clone, Debug)]
pub struct RoseStruct {
    pub gens: Vec<ReducedWord>,
    pub graph: StallingsGraph,
}

/// The rose instance: objects are ranks, theory GROUP, no coequalizers.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rose;

impl Rose {
    pub fn mor(&self, dom: usize, cod: usize, words: Vec<ReducedWord>) -> Result<RoseMap> {
        if words.len() != dom {
            return Err(Error::domain(format!(
                "expected {dom} generator images, got {}",
                words.len()
            )));
        }
        for w in &words {
            if !w.fits_rank(cod) {
                return Err(Error::domain(format!(
                    "word `{w}` uses letters outside the rank-{cod} alphabet"
                )));
            }
        }
        Ok(RoseMap { dom, cod, words })
    }

    /// The element of hom(S, x) carried by a single word.
    pub fn loop_elem(&self, x: usize, word: ReducedWord) -> Result<RoseMap> {
        self.mor(1, x, vec![word])
    }

    /// The word of an element of hom(S, x).
    pub fn word_of(&self, a: &RoseMap) -> Result<ReducedWord> {
        if a.dom != 1 {
            return Err(Error::domain("not a loop: domain rank is not 1"));
        }
        Ok(a.words[0].clone())
    }

    fn no_coequalizers<T>(&self) -> Result<T> {
        Err(Error::unsupported(
            "the rose instance has no coequalizers (pointed homotopy classes of finite wedges)",
        ))
    }
}

impl Instance for Rose {
    type Obj = usize;
    type Mor = RoseMap;
    type Struct = RoseStruct;

    fn name(&self) -> &'static str {
        "rose"
    }

    fn theory(&self) -> TheoryKind {
        TheoryKind::Group
    }

    fn s(&self) -> usize {
        1
    }

    fn dom(&self, f: &RoseMap) -> usize {
        f.dom
    }

    fn cod(&self, f: &RoseMap) -> usize {
        f.cod
    }

    fn identity(&self, x: &usize) -> RoseMap {
        RoseMap {
            dom: *x,
            cod: *x,
            words: (0..*x).map(ReducedWord::generator).collect(),
        }
    }

    fn compose(&self, g: &RoseMap, f: &RoseMap) -> Result<RoseMap> {
        if f.cod != g.dom {
            return Err(Error::domain("composition mismatch: cod(f) != dom(g)"));
        }
        let words = f
            .words
            .iter()
            .map(|w| w.substitute(&g.words))
            .collect::<Result<_>>()?;
        Ok(RoseMap { dom: f.dom, cod: g.cod, words })
    }

    fn copower(&self, n: usize) -> usize {
        n
    }

    fn injection(&self, n: usize, i: usize) -> RoseMap {
        RoseMap { dom: 1, cod: n, words: vec![ReducedWord::generator(i)] }
    }

    fn cotuple(&self, cod: &usize, legs: &[RoseMap]) -> Result<RoseMap> {
        let mut words = Vec::with_capacity(legs.len());
        for leg in legs {
            self.check_hom_elem(cod, leg)?;
            words.push(leg.words[0].clone());
        }
        Ok(RoseMap { dom: legs.len(), cod: *cod, words })
    }

    fn cooperations(&self) -> Vec<RoseMap> {
        vec![
            // unit: S → 0·S, the constant loop
            RoseMap { dom: 1, cod: 0, words: vec![ReducedWord::identity()] },
            // concatenation: S → 2·S
            RoseMap {
                dom: 1,
                cod: 2,
                words: vec![ReducedWord::generator(0).concat(&ReducedWord::generator(1))],
            },
            // twist: S → 1·S, reversal of the loop
            RoseMap {
                dom: 1,
                cod: 1,
                words: vec![ReducedWord::generator(0).inverse()],
            },
        ]
    }

    fn hom(&self, x: &usize, y: &usize) -> Option<Vec<RoseMap>> {
        if *x == 0 {
            return Some(vec![RoseMap { dom: 0, cod: *y, words: vec![] }]);
        }
        if *y == 0 {
            // Every word over zero generators is trivial.
            return Some(vec![RoseMap {
                dom: *x,
                cod: 0,
                words: vec![ReducedWord::identity(); *x],
            }]);
        }
        None
    }

    fn sample_hom_elem(&self, x: &usize, rng: &mut dyn RngCore) -> RoseMap {
        if *x == 0 {
            return RoseMap { dom: 1, cod: 0, words: vec![ReducedWord::identity()] };
        }
        let len = (rng.next_u64() as usize) % (SAMPLE_WORD_LEN + 1);
        let letters = (0..len).map(|_| {
            let r = rng.next_u64();
            Letter::new((r >> 1) as usize % *x, r & 1 == 1)
        });
        RoseMap { dom: 1, cod: *x, words: vec![ReducedWord::reduce(letters)] }
    }

    fn has_coequalizers(&self) -> bool {
        false
    }

    fn has_factorizations(&self) -> bool {
        true
    }

    fn coequalize(&self, _x: &usize, _pairs: &[(RoseMap, RoseMap)]) -> Result<RoseMap> {
        self.no_coequalizers()
    }

    fn cointersect(&self, _x: &usize, _quotients: &[RoseMap]) -> Result<RoseMap> {
        self.no_coequalizers()
    }

    fn factorize(&self, f: &RoseMap) -> Result<(RoseMap, RoseMap)> {
        let graph = StallingsGraph::fold(f.cod, &f.words);
        let basis = graph.basis_words();
        let rank = basis.len();
        let e_words = f
            .words
            .iter()
            .map(|w| {
                graph.express(w).ok_or_else(|| {
                    Error::internal("image generator not a member of the image subgroup")
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let e = RoseMap { dom: f.dom, cod: rank, words: e_words };
        let m = RoseMap { dom: rank, cod: f.cod, words: basis };
        Ok((e, m))
    }

    fn is_epi(&self, f: &RoseMap) -> Result<bool> {
        Ok(StallingsGraph::fold(f.cod, &f.words).accepts_all_generators())
    }

    fn is_mono(&self, f: &RoseMap) -> Result<bool> {
        // f factors as F_dom ↠ F_r ↪ F_cod with r the rank of its image;
        // a surjection F_dom ↠ F_r is injective exactly when r = dom
        // (free groups are Hopfian).
        let graph = StallingsGraph::fold(f.cod, &f.words);
        Ok(graph.basis_words().len() == f.dom)
    }

    fn is_regular_epi(&self, f: &RoseMap) -> Result<bool> {
        // An epi F_n ↠ F_m splits (choose preimages of the generators), and
        // split epis are regular; conversely regular epis are epis.
        self.is_epi(f)
    }

    fn is_iso(&self, f: &RoseMap) -> Result<bool> {
        Ok(f.dom == f.cod && self.is_epi(f)?)
    }

    fn factor_through(&self, _p: &RoseMap, _t: &RoseMap) -> Result<Option<RoseMap>> {
        Err(Error::unsupported(
            "factoring through a quotient is not implemented for the rose instance",
        ))
    }

    fn struct_from_generators(&self, x: &usize, gens: &[RoseMap]) -> Result<RoseStruct> {
        let mut words = Vec::with_capacity(gens.len());
        for g in gens {
            self.check_hom_elem(x, g)?;
            words.push(g.words[0].clone());
        }
        let graph = StallingsGraph::fold(*x, &words);
        Ok(RoseStruct { gens: words, graph })
    }

    fn struct_from_elements(&self, x: &usize, elems: &[RoseMap]) -> Result<RoseStruct> {
        // The only subgroup with a finite element list is the trivial one.
        for a in elems {
            self.check_hom_elem(x, a)?;
            if !a.words[0].is_empty() {
                return Err(Error::domain(
                    "a finite element list is never closed under the group operations; \
                     describe rose structures by generators",
                ));
            }
        }
        if elems.is_empty() {
            return Err(Error::domain(
                "an empty element list misses the constant loop; use generators instead",
            ));
        }
        Ok(RoseStruct { gens: vec![], graph: StallingsGraph::fold(*x, &[]) })
    }

    fn struct_full(&self, x: &usize) -> Result<RoseStruct> {
        let gens: Vec<ReducedWord> = (0..*x).map(ReducedWord::generator).collect();
        let graph = StallingsGraph::fold(*x, &gens);
        Ok(RoseStruct { gens, graph })
    }

    fn struct_contains(&self, x: &usize, st: &RoseStruct, a: &RoseMap) -> Result<bool> {
        self.check_hom_elem(x, a)?;
        Ok(st.graph.member(&a.words[0]))
    }

    fn struct_generators(&self, x: &usize, st: &RoseStruct) -> Vec<RoseMap> {
        st.gens
            .iter()
            .map(|w| RoseMap { dom: 1, cod: *x, words: vec![w.clone()] })
            .collect()
    }

    fn struct_elements(&self, x: &usize, st: &RoseStruct) -> Option<Vec<RoseMap>> {
        if st.graph.num_states() == 1 && st.graph.edges().is_empty() {
            return Some(vec![RoseMap {
                dom: 1,
                cod: *x,
                words: vec![ReducedWord::identity()],
            }]);
        }
        None
    }
}
