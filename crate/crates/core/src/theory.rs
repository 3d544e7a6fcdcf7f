//! Signatures, T-algebras and the three shipped theory plugins: EMPTY,
//! MODULE(Z/m) and GROUP.
//!
//! Algebras are abstract over their carrier so the same machinery serves both
//! plain finite carriers and hom-set carriers built from a base instance.

use crate::error::{Error, Result};
use crate::howell::modmul;
use crate::words::{Letter, ReducedWord};
use std::collections::BTreeSet;
use std::fmt::Debug;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpSymbol {
    pub name: String,
    pub arity: usize,
}

/// An operation alphabet with arities.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Signature {
    ops: Vec<OpSymbol>,
}

impl Signature {
    pub fn new(ops: Vec<OpSymbol>) -> Result<Signature> {
        let mut seen = BTreeSet::new();
        for op in &ops {
            if !seen.insert(op.name.clone()) {
                return Err(Error::domain(format!("duplicate operation symbol `{}`", op.name)));
            }
        }
        Ok(Signature { ops })
    }

    pub fn ops(&self) -> &[OpSymbol] {
        &self.ops
    }

    pub fn arity(&self, op: usize) -> usize {
        self.ops[op].arity
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

/// The three shipped theory plugins.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TheoryKind {
    /// No operations; subalgebras are arbitrary subsets.
    Empty,
    /// The theory of Z/m-modules: zero, addition and one scalar per element.
    Module { modulus: u64 },
    /// The theory of groups: unit, multiplication, inverse.
    Group,
}

impl TheoryKind {
    pub fn signature(&self) -> Signature {
        let ops = match self {
            TheoryKind::Empty => vec![],
            TheoryKind::Module { modulus } => {
                let mut ops = vec![
                    OpSymbol { name: "zero".into(), arity: 0 },
                    OpSymbol { name: "add".into(), arity: 2 },
                ];
                for a in 0..*modulus {
                    ops.push(OpSymbol { name: format!("s{a}"), arity: 1 });
                }
                ops
            }
            TheoryKind::Group => vec![
                OpSymbol { name: "unit".into(), arity: 0 },
                OpSymbol { name: "mul".into(), arity: 2 },
                OpSymbol { name: "inv".into(), arity: 1 },
            ],
        };
        Signature::new(ops).expect("plugin signatures are well formed")
    }
}

/// A T-algebra: a carrier with one total operation per signature symbol.
///
/// `elements` returns `None` for symbolic carriers (e.g. free groups), in
/// which case exhaustive procedures refuse and callers fall back to
/// plugin-specific machinery or sampling.
pub trait Algebra {
    type Elem: Clone + Eq + Ord + Debug;

    fn signature(&self) -> &Signature;
    fn apply(&self, op: usize, args: &[Self::Elem]) -> Self::Elem;
    fn elements(&self) -> Option<Vec<Self::Elem>>;
    fn contains(&self, e: &Self::Elem) -> bool;
}

const GENERATION_CAP: usize = 1_000_000;

/// Least subalgebra containing `generators`: work-queue fixed point.
pub fn generate_subalgebra<A: Algebra>(alg: &A, generators: &[A::Elem]) -> Result<BTreeSet<A::Elem>> {
    for g in generators {
        if !alg.contains(g) {
            return Err(Error::domain(format!("generator {g:?} is not in the carrier")));
        }
    }
    let sig = alg.signature();
    let mut set: BTreeSet<A::Elem> = generators.iter().cloned().collect();
    let mut queue: Vec<A::Elem> = set.iter().cloned().collect();
    // Constants first: arity-0 operations apply even to the empty set.
    for op in 0..sig.len() {
        if sig.arity(op) == 0 {
            let c = alg.apply(op, &[]);
            if set.insert(c.clone()) {
                queue.push(c);
            }
        }
    }
    while let Some(new) = queue.pop() {
        for op in 0..sig.len() {
            let k = sig.arity(op);
            if k == 0 {
                continue;
            }
            // All tuples over the current set with `new` in at least one slot.
            let pool: Vec<A::Elem> = set.iter().cloned().collect();
            let mut idx = vec![0usize; k];
            loop {
                let tuple: Vec<A::Elem> = idx.iter().map(|&i| pool[i].clone()).collect();
                if tuple.iter().any(|t| t == &new) {
                    let out = alg.apply(op, &tuple);
                    if set.insert(out.clone()) {
                        if set.len() > GENERATION_CAP {
                            return Err(Error::unsupported(
                                "subalgebra generation exceeded the materialization cap",
                            ));
                        }
                        queue.push(out);
                    }
                }
                let mut j = 0;
                loop {
                    if j == k {
                        break;
                    }
                    idx[j] += 1;
                    if idx[j] < pool.len() {
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
    }
    Ok(set)
}

/// True iff `set` is closed under every operation of `alg` (exhaustive).
pub fn is_closed<A: Algebra>(alg: &A, set: &BTreeSet<A::Elem>) -> bool {
    let sig = alg.signature();
    for op in 0..sig.len() {
        let k = sig.arity(op);
        let pool: Vec<A::Elem> = set.iter().cloned().collect();
        if k == 0 {
            if !set.contains(&alg.apply(op, &[])) {
                return false;
            }
            continue;
        }
        if pool.is_empty() {
            continue;
        }
        let mut idx = vec![0usize; k];
        loop {
            let tuple: Vec<A::Elem> = idx.iter().map(|&i| pool[i].clone()).collect();
            if !set.contains(&alg.apply(op, &tuple)) {
                return false;
            }
            let mut j = 0;
            loop {
                if j == k {
                    break;
                }
                idx[j] += 1;
                if idx[j] < pool.len() {
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
    true
}

/// Exhaustive homomorphism check between two algebras of the same signature.
pub fn is_homomorphism<A, B, F>(f: F, dom: &A, cod: &B) -> Result<bool>
where
    A: Algebra,
    B: Algebra,
    F: Fn(&A::Elem) -> B::Elem,
{
    let elems = dom
        .elements()
        .ok_or_else(|| Error::unsupported("exhaustive homomorphism check needs a finite carrier"))?;
    is_homomorphism_on(f, dom, cod, &elems)
}

/// Homomorphism check restricted to tuples drawn from `sample`.
pub fn is_homomorphism_on<A, B, F>(f: F, dom: &A, cod: &B, sample: &[A::Elem]) -> Result<bool>
where
    A: Algebra,
    B: Algebra,
    F: Fn(&A::Elem) -> B::Elem,
{
    if dom.signature() != cod.signature() {
        return Err(Error::domain("signature mismatch between domain and codomain"));
    }
    let sig = dom.signature();
    for op in 0..sig.len() {
        let k = sig.arity(op);
        if k == 0 {
            if f(&dom.apply(op, &[])) != cod.apply(op, &[]) {
                return Ok(false);
            }
            continue;
        }
        let mut idx = vec![0usize; k];
        if sample.is_empty() {
            continue;
        }
        loop {
            let tuple: Vec<A::Elem> = idx.iter().map(|&i| sample[i].clone()).collect();
            let mapped: Vec<B::Elem> = tuple.iter().map(&f).collect();
            if f(&dom.apply(op, &tuple)) != cod.apply(op, &mapped) {
                return Ok(false);
            }
            let mut j = 0;
            loop {
                if j == k {
                    break;
                }
                idx[j] += 1;
                if idx[j] < sample.len() {
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
    Ok(true)
}

/// A finite algebra given by operation tables; elements are 0..size.
#[derive(Clone, Debug)]
pub struct TableAlgebra {
    sig: Signature,
    size: usize,
    /// One flattened table per operation, row-major over the argument tuple.
    tables: Vec<Vec<usize>>,
}

impl TableAlgebra {
    pub fn new(sig: Signature, size: usize, tables: Vec<Vec<usize>>) -> Result<TableAlgebra> {
        if tables.len() != sig.len() {
            return Err(Error::domain("one table per operation required"));
        }
        for (op, table) in tables.iter().enumerate() {
            let expect = size.pow(sig.arity(op) as u32);
            if table.len() != expect {
                return Err(Error::domain(format!(
                    "table for `{}` has {} entries, expected {}",
                    sig.ops()[op].name,
                    table.len(),
                    expect
                )));
            }
            if table.iter().any(|&v| v >= size) {
                return Err(Error::domain("table entry outside carrier"));
            }
        }
        Ok(TableAlgebra { sig, size, tables })
    }

    /// A bare set, as an algebra for the EMPTY theory.
    pub fn empty_theory_set(size: usize) -> TableAlgebra {
        TableAlgebra {
            sig: TheoryKind::Empty.signature(),
            size,
            tables: vec![],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }
}

impl Algebra for TableAlgebra {
    type Elem = usize;

    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn apply(&self, op: usize, args: &[usize]) -> usize {
        let mut index = 0usize;
        for &a in args {
            index = index * self.size + a;
        }
        self.tables[op][index]
    }

    fn elements(&self) -> Option<Vec<usize>> {
        Some((0..self.size).collect())
    }

    fn contains(&self, e: &usize) -> bool {
        *e < self.size
    }
}

/// An element of the free T-algebra on finitely many generators.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FreeElem {
    /// EMPTY: the free algebra on n generators is the n-element set.
    Point(usize),
    /// MODULE(Z/m): the free module (Z/m)^n, coordinates over the generators.
    Vector(Vec<u64>),
    /// GROUP: the free group F_n as reduced words.
    Word(ReducedWord),
}

/// The free T-algebra on `rank` generators for a plugin.
#[derive(Clone, Debug)]
pub struct FreeAlgebra {
    kind: TheoryKind,
    rank: usize,
    sig: Signature,
}

impl FreeAlgebra {
    pub fn new(kind: TheoryKind, rank: usize) -> FreeAlgebra {
        FreeAlgebra { kind, rank, sig: kind.signature() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn kind(&self) -> TheoryKind {
        self.kind
    }

    pub fn generator(&self, i: usize) -> FreeElem {
        match self.kind {
            TheoryKind::Empty => FreeElem::Point(i),
            TheoryKind::Module { .. } => {
                let mut v = vec![0u64; self.rank];
                v[i] = 1;
                FreeElem::Vector(v)
            }
            TheoryKind::Group => FreeElem::Word(ReducedWord::generator(i)),
        }
    }
}

impl Algebra for FreeAlgebra {
    type Elem = FreeElem;

    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn apply(&self, op: usize, args: &[FreeElem]) -> FreeElem {
        match self.kind {
            TheoryKind::Empty => unreachable!("EMPTY has no operations"),
            TheoryKind::Module { modulus } => {
                let vec_of = |e: &FreeElem| match e {
                    FreeElem::Vector(v) => v.clone(),
                    _ => panic!("free module element expected"),
                };
                match op {
                    0 => FreeElem::Vector(vec![0; self.rank]),
                    1 => {
                        let (a, b) = (vec_of(&args[0]), vec_of(&args[1]));
                        FreeElem::Vector(
                            a.iter().zip(&b).map(|(x, y)| (x + y) % modulus).collect(),
                        )
                    }
                    s => {
                        let c = (s - 2) as u64;
                        FreeElem::Vector(
                            vec_of(&args[0]).iter().map(|&x| modmul(x, c, modulus)).collect(),
                        )
                    }
                }
            }
            TheoryKind::Group => {
                let word_of = |e: &FreeElem| match e {
                    FreeElem::Word(w) => w.clone(),
                    _ => panic!("free group element expected"),
                };
                match op {
                    0 => FreeElem::Word(ReducedWord::identity()),
                    1 => FreeElem::Word(word_of(&args[0]).concat(&word_of(&args[1]))),
                    2 => FreeElem::Word(word_of(&args[0]).inverse()),
                    _ => unreachable!(),
                }
            }
        }
    }

    fn elements(&self) -> Option<Vec<FreeElem>> {
        match self.kind {
            TheoryKind::Empty => Some((0..self.rank).map(FreeElem::Point).collect()),
            TheoryKind::Module { modulus } => {
                let mut out = vec![vec![]];
                for _ in 0..self.rank {
                    out = out
                        .into_iter()
                        .flat_map(|v: Vec<u64>| {
                            (0..modulus).map(move |x| {
                                let mut w = v.clone();
                                w.push(x);
                                w
                            })
                        })
                        .collect();
                }
                Some(out.into_iter().map(FreeElem::Vector).collect())
            }
            TheoryKind::Group => None,
        }
    }

    fn contains(&self, e: &FreeElem) -> bool {
        match (self.kind, e) {
            (TheoryKind::Empty, FreeElem::Point(i)) => *i < self.rank,
            (TheoryKind::Module { modulus }, FreeElem::Vector(v)) => {
                v.len() == self.rank && v.iter().all(|&x| x < modulus)
            }
            (TheoryKind::Group, FreeElem::Word(w)) => w.fits_rank(self.rank),
            _ => false,
        }
    }
}

/// The homomorphism from a free T-algebra fixed by generator images.
#[derive(Clone, Debug)]
pub struct FreeHom<E> {
    kind: TheoryKind,
    images: Vec<E>,
}

impl<E: Clone + Eq + Ord + Debug> FreeHom<E> {
    pub fn new(kind: TheoryKind, rank: usize, images: Vec<E>) -> Result<FreeHom<E>> {
        if images.len() != rank {
            return Err(Error::domain(format!(
                "expected {rank} generator images, got {}",
                images.len()
            )));
        }
        Ok(FreeHom { kind, images })
    }

    /// Evaluates the unique extension of i -> images[i] at a free element,
    /// using the codomain's operations.
    pub fn eval<A: Algebra<Elem = E>>(&self, cod: &A, x: &FreeElem) -> Result<E> {
        match (self.kind, x) {
            (TheoryKind::Empty, FreeElem::Point(i)) => self
                .images
                .get(*i)
                .cloned()
                .ok_or_else(|| Error::domain("free generator out of range")),
            (TheoryKind::Module { .. }, FreeElem::Vector(coords)) => {
                if coords.len() != self.images.len() {
                    return Err(Error::domain("free module element of wrong rank"));
                }
                // ops: 0 = zero, 1 = add, 2 + c = scalar c
                let mut acc = cod.apply(0, &[]);
                for (c, img) in coords.iter().zip(&self.images) {
                    let scaled = cod.apply(2 + *c as usize, &[img.clone()]);
                    acc = cod.apply(1, &[acc, scaled]);
                }
                Ok(acc)
            }
            (TheoryKind::Group, FreeElem::Word(w)) => {
                // ops: 0 = unit, 1 = mul, 2 = inv
                let mut acc = cod.apply(0, &[]);
                for l in w.letters() {
                    let img = self
                        .images
                        .get(l.gen)
                        .cloned()
                        .ok_or_else(|| Error::domain("free generator out of range"))?;
                    let factor = if l.inverse { cod.apply(2, &[img]) } else { img };
                    acc = cod.apply(1, &[acc, factor]);
                }
                Ok(acc)
            }
            _ => Err(Error::domain("free element does not match the plugin")),
        }
    }
}

/// An algebra restricted to a (closed) subset of its carrier.
pub struct Restriction<'a, A: Algebra> {
    pub base: &'a A,
    pub subset: BTreeSet<A::Elem>,
}

impl<'a, A: Algebra> Algebra for Restriction<'a, A> {
    type Elem = A::Elem;

    fn signature(&self) -> &Signature {
        self.base.signature()
    }

    fn apply(&self, op: usize, args: &[A::Elem]) -> A::Elem {
        self.base.apply(op, args)
    }

    fn elements(&self) -> Option<Vec<A::Elem>> {
        Some(self.subset.iter().cloned().collect())
    }

    fn contains(&self, e: &A::Elem) -> bool {
        self.subset.contains(e)
    }
}

pub fn group_word_for_letter(gen: usize, inverse: bool) -> ReducedWord {
    ReducedWord::reduce([Letter::new(gen, inverse)])
}
