//! Stallings graphs: folded labeled core graphs deciding membership in
//! finitely generated subgroups of free groups.
//!
//! A graph is built from a generator list by wedging loops at the base state,
//! folding (identifying equally labeled edges with a shared endpoint) until
//! deterministic, trimming to the core, and renumbering states canonically.
//! The base-to-base reduced loops are exactly the subgroup elements.

use crate::words::{Letter, ReducedWord};
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StallingsGraph {
    rank: usize,
    /// fwd[state][gen] = target of the gen-labeled edge out of `state`.
    fwd: Vec<Vec<Option<usize>>>,
    /// bwd[state][gen] = source of the gen-labeled edge into `state`.
    bwd: Vec<Vec<Option<usize>>>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

impl StallingsGraph {
    /// Folds the subgroup generated by `generators` inside the rank-`rank`
    /// free group.
    pub fn fold(rank: usize, generators: &[ReducedWord]) -> StallingsGraph {
        // Bouquet of loops at the base state 0.
        let mut edges: Vec<(usize, usize, usize)> = Vec::new();
        let mut nstates = 1usize;
        for w in generators {
            if w.is_empty() {
                continue;
            }
            let mut cur = 0usize;
            let n = w.len();
            for (k, l) in w.letters().iter().enumerate() {
                let next = if k + 1 == n {
                    0
                } else {
                    nstates += 1;
                    nstates - 1
                };
                if l.inverse {
                    edges.push((next, l.gen, cur));
                } else {
                    edges.push((cur, l.gen, next));
                }
                cur = next;
            }
        }
        Self::from_edges(rank, nstates, edges)
    }

    fn from_edges(rank: usize, nstates: usize, edges: Vec<(usize, usize, usize)>) -> StallingsGraph {
        let mut uf = UnionFind::new(nstates);
        loop {
            let mut out: std::collections::HashMap<(usize, usize), usize> =
                std::collections::HashMap::new();
            let mut inc: std::collections::HashMap<(usize, usize), usize> =
                std::collections::HashMap::new();
            let mut changed = false;
            for &(s, g, d) in &edges {
                let (rs, rd) = (uf.find(s), uf.find(d));
                match out.get(&(rs, g)).copied() {
                    Some(prev) => {
                        let prev = uf.find(prev);
                        if prev != rd {
                            uf.union(prev, rd);
                            changed = true;
                        }
                    }
                    None => {
                        out.insert((rs, g), rd);
                    }
                }
                let (rs, rd) = (uf.find(s), uf.find(d));
                match inc.get(&(rd, g)).copied() {
                    Some(prev) => {
                        let prev = uf.find(prev);
                        if prev != rs {
                            uf.union(prev, rs);
                            changed = true;
                        }
                    }
                    None => {
                        inc.insert((rd, g), rs);
                    }
                }
            }
            if !changed {
                break;
            }
        }

        let base = uf.find(0);
        let mut folded: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
        for &(s, g, d) in &edges {
            folded.insert((uf.find(s), g, uf.find(d)));
        }

        // Trim to the core: repeatedly drop non-base states of degree <= 1.
        loop {
            let mut degree: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
            for &(s, _, d) in &folded {
                *degree.entry(s).or_insert(0) += 1;
                *degree.entry(d).or_insert(0) += 1;
            }
            let leaf = folded
                .iter()
                .flat_map(|&(s, _, d)| [s, d])
                .find(|&v| v != base && degree.get(&v).copied().unwrap_or(0) <= 1);
            match leaf {
                Some(v) => {
                    folded.retain(|&(s, _, d)| s != v && d != v);
                }
                None => break,
            }
        }

        // Canonical renumbering: BFS from base, labels explored in fixed order.
        let mut fwd_raw: std::collections::HashMap<(usize, usize), usize> =
            std::collections::HashMap::new();
        let mut bwd_raw: std::collections::HashMap<(usize, usize), usize> =
            std::collections::HashMap::new();
        for &(s, g, d) in &folded {
            fwd_raw.insert((s, g), d);
            bwd_raw.insert((d, g), s);
        }
        let mut order: Vec<usize> = vec![base];
        let mut index: std::collections::HashMap<usize, usize> =
            std::collections::HashMap::from([(base, 0)]);
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for g in 0..rank {
                for tgt in [fwd_raw.get(&(v, g)), bwd_raw.get(&(v, g))].into_iter().flatten() {
                    if !index.contains_key(tgt) {
                        index.insert(*tgt, order.len());
                        order.push(*tgt);
                    }
                }
            }
        }

        let n = order.len();
        let mut fwd = vec![vec![None; rank]; n];
        let mut bwd = vec![vec![None; rank]; n];
        for &(s, g, d) in &folded {
            // States outside the base component were trimmed away together
            // with their edges, so both endpoints are indexed.
            let (si, di) = (index[&s], index[&d]);
            fwd[si][g] = Some(di);
            bwd[di][g] = Some(si);
        }
        StallingsGraph { rank, fwd, bwd }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_states(&self) -> usize {
        self.fwd.len()
    }

    /// All edges as (source, generator, target), deterministic order.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (s, row) in self.fwd.iter().enumerate() {
            for (g, tgt) in row.iter().enumerate() {
                if let Some(d) = tgt {
                    out.push((s, g, *d));
                }
            }
        }
        out
    }

    /// True iff `word` traces a base-to-base path, i.e. lies in the subgroup.
    pub fn member(&self, word: &ReducedWord) -> bool {
        let mut cur = 0usize;
        for l in word.letters() {
            if l.gen >= self.rank {
                return false;
            }
            let step = if l.inverse {
                self.bwd[cur][l.gen]
            } else {
                self.fwd[cur][l.gen]
            };
            match step {
                Some(next) => cur = next,
                None => return false,
            }
        }
        cur == 0
    }

    /// True iff every ambient generator loops at the base, i.e. the subgroup
    /// is all of the free group.
    pub fn accepts_all_generators(&self) -> bool {
        (0..self.rank).all(|g| self.member(&ReducedWord::generator(g)))
    }

    /// Spanning tree parents: `parent[v] = (state, letter read from parent to v)`.
    fn spanning_tree(&self) -> Vec<Option<(usize, Letter)>> {
        let n = self.num_states();
        let mut parent: Vec<Option<(usize, Letter)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for g in 0..self.rank {
                if let Some(d) = self.fwd[v][g] {
                    if !seen[d] {
                        seen[d] = true;
                        parent[d] = Some((v, Letter::new(g, false)));
                        queue.push_back(d);
                    }
                }
                if let Some(s) = self.bwd[v][g] {
                    if !seen[s] {
                        seen[s] = true;
                        parent[s] = Some((v, Letter::new(g, true)));
                        queue.push_back(s);
                    }
                }
            }
        }
        parent
    }

    fn tree_word_to(&self, parent: &[Option<(usize, Letter)>], mut v: usize) -> ReducedWord {
        let mut letters = Vec::new();
        while let Some((p, l)) = parent[v] {
            letters.push(l);
            v = p;
        }
        letters.reverse();
        ReducedWord::reduce(letters)
    }

    /// Non-tree edges in deterministic order; each one carries a basis element.
    fn non_tree_edges(&self) -> (Vec<Option<(usize, Letter)>>, Vec<(usize, usize, usize)>) {
        let parent = self.spanning_tree();
        let mut tree: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
        for (v, p) in parent.iter().enumerate() {
            if let Some((p, l)) = p {
                if l.inverse {
                    tree.insert((v, l.gen, *p));
                } else {
                    tree.insert((*p, l.gen, v));
                }
            }
        }
        let non_tree = self
            .edges()
            .into_iter()
            .filter(|e| !tree.contains(e))
            .collect();
        (parent, non_tree)
    }

    /// A free basis of the subgroup, as words in the ambient free group.
    pub fn basis_words(&self) -> Vec<ReducedWord> {
        let (parent, non_tree) = self.non_tree_edges();
        non_tree
            .iter()
            .map(|&(s, g, d)| {
                let to_s = self.tree_word_to(&parent, s);
                let to_d = self.tree_word_to(&parent, d);
                to_s.concat(&ReducedWord::reduce([Letter::new(g, false)]))
                    .concat(&to_d.inverse())
            })
            .collect()
    }

    /// Rewrites a subgroup element as a word over the basis of
    /// [`basis_words`]; `None` when the word is not in the subgroup.
    pub fn express(&self, word: &ReducedWord) -> Option<ReducedWord> {
        let (_, non_tree) = self.non_tree_edges();
        let edge_index: std::collections::HashMap<(usize, usize, usize), usize> = non_tree
            .iter()
            .enumerate()
            .map(|(i, e)| (*e, i))
            .collect();
        let mut cur = 0usize;
        let mut out = Vec::new();
        for l in word.letters() {
            if l.gen >= self.rank {
                return None;
            }
            if l.inverse {
                let s = self.bwd[cur][l.gen]?;
                if let Some(&i) = edge_index.get(&(s, l.gen, cur)) {
                    out.push(Letter::new(i, true));
                }
                cur = s;
            } else {
                let d = self.fwd[cur][l.gen]?;
                if let Some(&i) = edge_index.get(&(cur, l.gen, d)) {
                    out.push(Letter::new(i, false));
                }
                cur = d;
            }
        }
        if cur == 0 {
            Some(ReducedWord::reduce(out))
        } else {
            None
        }
    }

    /// Enumerates every accepted reduced word of length at most `max_len`.
    pub fn accepted_words(&self, max_len: usize) -> Vec<ReducedWord> {
        let mut out = Vec::new();
        let mut buf: Vec<Letter> = Vec::new();
        self.accepted_rec(0, max_len, &mut buf, &mut out);
        out
    }

    fn accepted_rec(
        &self,
        state: usize,
        budget: usize,
        buf: &mut Vec<Letter>,
        out: &mut Vec<ReducedWord>,
    ) {
        if state == 0 {
            out.push(ReducedWord::reduce(buf.iter().copied()));
        }
        if budget == 0 {
            return;
        }
        let last = buf.last().copied();
        for g in 0..self.rank {
            for inverse in [false, true] {
                let l = Letter::new(g, inverse);
                // A folded graph spells a reduced word iff the path never
                // immediately reverses an edge.
                if let Some(prev) = last {
                    if prev == l.inverted() {
                        continue;
                    }
                }
                let next = if inverse {
                    self.bwd[state][g]
                } else {
                    self.fwd[state][g]
                };
                if let Some(next) = next {
                    buf.push(l);
                    self.accepted_rec(next, budget - 1, buf, out);
                    buf.pop();
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn w(s: &str) -> ReducedWord {
        ReducedWord::parse(s).unwrap()
    }

    #[test]
    fn powers_of_a_in_f2() {
        let g = StallingsGraph::fold(2, &[w("a")]);
        assert!(g.member(&w("a a a")));
        assert!(!g.member(&w("b")));
        assert!(g.member(&ReducedWord::identity()));
        let accepted = g.accepted_words(6);
        for word in accepted {
            assert!(word.letters().iter().all(|l| l.gen == 0));
        }
    }

    #[test]
    fn trivial_subgroup() {
        let g = StallingsGraph::fold(2, &[]);
        assert_eq!(g.num_states(), 1);
        assert!(g.member(&ReducedWord::identity()));
        assert!(!g.member(&w("a")));
    }

    #[test]
    fn full_f2() {
        let g = StallingsGraph::fold(2, &[w("a"), w("b")]);
        assert!(g.accepts_all_generators());
        assert!(g.member(&w("a b^-1 a a")));
    }

    #[test]
    fn folding_is_confluent_under_insertion_order() {
        let gens = [w("a b"), w("a b^-1"), w("b b"), w("a a a")];
        let reference = StallingsGraph::fold(2, &gens);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let mut shuffled = gens.to_vec();
            shuffled.shuffle(&mut rng);
            assert_eq!(StallingsGraph::fold(2, &shuffled), reference);
        }
    }

    #[test]
    fn basis_and_express_roundtrip() {
        let gens = [w("a a"), w("b"), w("a b a")];
        let g = StallingsGraph::fold(2, &gens);
        let basis = g.basis_words();
        for gen in &gens {
            let expr = g.express(gen).expect("generator is a member");
            let back = expr.substitute(&basis).unwrap();
            assert_eq!(&back, gen);
        }
        assert!(g.express(&w("a")).is_none());
    }
}
