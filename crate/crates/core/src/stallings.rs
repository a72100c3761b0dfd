//! Stallings core graphs of finitely generated subgroups of free groups.
//!
//! A [`CoreGraph`] is folded (at most one edge per label in and out of each
//! vertex), connected, and has no hanging trees away from the basepoint.
//! Reduced loops at the basepoint spell exactly the elements of the
//! subgroup. Vertices are numbered by a breadth-first walk from the
//! basepoint that visits letters in code order (`a, A, b, B, ...`), so two
//! graphs of the same subgroup are identical values.

use std::collections::VecDeque;
use std::fmt::Write as _;

use num_bigint::BigUint;

use crate::error::Result;
use crate::words::{GroupDescriptor, Letter, PowerWord, Word};

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoreGraph {
    alphabet_rank: usize,
    vertex_count: usize,
    /// `trans[v * 2k + code]` is the target of the edge labelled `code` out
    /// of `v`, or `NONE`.
    trans: Vec<u32>,
}

/// Union-find based folding. Edges are stored in both directions; stale
/// endpoints are resolved through `find`.
struct Folder {
    width: usize,
    parent: Vec<usize>,
    adj: Vec<Vec<Option<usize>>>,
    pending: Vec<(usize, usize)>,
}

impl Folder {
    fn new(alphabet_rank: usize) -> Folder {
        let mut f = Folder { width: 2 * alphabet_rank, parent: Vec::new(), adj: Vec::new(), pending: Vec::new() };
        f.new_vertex();
        f
    }

    fn new_vertex(&mut self) -> usize {
        let id = self.parent.len();
        self.parent.push(id);
        self.adj.push(vec![None; self.width]);
        id
    }

    fn find(&mut self, mut v: usize) -> usize {
        let mut root = v;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[v] != root {
            let next = self.parent[v];
            self.parent[v] = root;
            v = next;
        }
        root
    }

    fn add_edge(&mut self, v: usize, code: usize, w: usize) {
        let v = self.find(v);
        let w = self.find(w);
        let fwd = self.adj[v][code].map(|t| self.find(t));
        let back = self.adj[w][code ^ 1].map(|s| self.find(s));
        match (fwd, back) {
            (Some(t), _) if t != w => self.pending.push((t, w)),
            (_, Some(s)) if s != v => self.pending.push((s, v)),
            _ => {
                self.adj[v][code] = Some(w);
                self.adj[w][code ^ 1] = Some(v);
            }
        }
    }

    /// Identifies vertices until no two edges with the same label leave or
    /// enter a vertex. The lower index survives, so the basepoint stays 0.
    fn settle(&mut self) {
        while let Some((a, b)) = self.pending.pop() {
            let a = self.find(a);
            let b = self.find(b);
            if a == b {
                continue;
            }
            let (keep, gone) = if a < b { (a, b) } else { (b, a) };
            self.parent[gone] = keep;
            let slots = std::mem::take(&mut self.adj[gone]);
            for (code, t) in slots.into_iter().enumerate() {
                if let Some(t) = t {
                    self.add_edge(keep, code, t);
                }
            }
        }
    }

    fn add_loop(&mut self, w: &Word) {
        let n = w.len();
        let mut cur = 0;
        for (i, l) in w.letters().iter().enumerate() {
            let next = if i + 1 == n { 0 } else { self.new_vertex() };
            self.add_edge(cur, l.code(), next);
            self.settle();
            cur = next;
        }
    }

    /// Prunes hanging trees away from the basepoint and renumbers
    /// breadth-first.
    fn finish(mut self, alphabet_rank: usize) -> CoreGraph {
        let n = self.parent.len();
        let roots: Vec<usize> = (0..n).map(|v| self.find(v)).collect();
        // resolve every slot to a root
        let mut adj: Vec<Vec<Option<usize>>> = vec![Vec::new(); n];
        for v in 0..n {
            if roots[v] == v {
                adj[v] = self.adj[v].iter().map(|t| t.map(|t| roots[t])).collect();
            }
        }
        let mut degree: Vec<usize> = adj.iter().map(|s| s.iter().flatten().count()).collect();
        let mut removed = vec![false; n];
        let mut queue: Vec<usize> = (1..n).filter(|&v| roots[v] == v && degree[v] <= 1).collect();
        while let Some(v) = queue.pop() {
            if removed[v] {
                continue;
            }
            removed[v] = true;
            for code in 0..self.width {
                if let Some(t) = adj[v][code].take() {
                    if adj[t][code ^ 1] == Some(v) {
                        adj[t][code ^ 1] = None;
                        degree[t] -= 1;
                        if t != 0 && degree[t] <= 1 {
                            queue.push(t);
                        }
                    }
                }
            }
        }

        let mut label = vec![NONE; n];
        let mut order = vec![0usize];
        label[0] = 0;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for code in 0..self.width {
                if let Some(t) = adj[v][code] {
                    if label[t] == NONE {
                        label[t] = order.len() as u32;
                        order.push(t);
                    }
                }
            }
        }
        let mut trans = vec![NONE; order.len() * self.width];
        for (i, &v) in order.iter().enumerate() {
            for code in 0..self.width {
                if let Some(t) = adj[v][code] {
                    trans[i * self.width + code] = label[t];
                }
            }
        }
        CoreGraph { alphabet_rank, vertex_count: order.len(), trans }
    }
}

/// A partial map on the vertices of a graph, as induced by reading a word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionMap {
    image: Vec<u32>,
}

impl TransitionMap {
    pub fn identity(size: usize) -> TransitionMap {
        TransitionMap { image: (0..size as u32).collect() }
    }

    pub fn apply(&self, v: usize) -> Option<usize> {
        match self.image[v] {
            NONE => None,
            t => Some(t as usize),
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &TransitionMap) -> TransitionMap {
        TransitionMap {
            image: self.image.iter().map(|&t| if t == NONE { NONE } else { next.image[t as usize] }).collect(),
        }
    }

    /// `self^e` by repeated squaring.
    pub fn pow(&self, e: &BigUint) -> TransitionMap {
        let mut result = TransitionMap::identity(self.image.len());
        let mut square = self.clone();
        for i in 0..e.bits() {
            if e.bit(i) {
                result = result.then(&square);
            }
            if i + 1 < e.bits() {
                square = square.then(&square);
            }
        }
        result
    }
}

impl CoreGraph {
    /// Folded core graph of the subgroup generated by `generators`.
    pub fn build(descriptor: &GroupDescriptor, generators: &[Word]) -> Result<CoreGraph> {
        for g in generators {
            descriptor.check(g)?;
        }
        let mut folder = Folder::new(descriptor.rank());
        for g in generators {
            folder.add_loop(g);
        }
        Ok(folder.finish(descriptor.rank()))
    }

    pub fn alphabet_rank(&self) -> usize {
        self.alphabet_rank
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn basepoint(&self) -> usize {
        0
    }

    fn width(&self) -> usize {
        2 * self.alphabet_rank
    }

    pub fn target(&self, v: usize, l: Letter) -> Option<usize> {
        if l.code() >= self.width() {
            return None;
        }
        match self.trans[v * self.width() + l.code()] {
            NONE => None,
            t => Some(t as usize),
        }
    }

    /// Edges `(source, target, letter)` with positive letters, ordered by
    /// source then letter.
    pub fn edges(&self) -> Vec<(usize, usize, Letter)> {
        let mut out = Vec::new();
        for v in 0..self.vertex_count {
            for i in 0..self.alphabet_rank {
                let l = Letter::generator(i);
                if let Some(t) = self.target(v, l) {
                    out.push((v, t, l));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    /// Rank of the subgroup: `edges - vertices + 1`.
    pub fn rank(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count
    }

    pub fn trace(&self, start: usize, w: &Word) -> Option<usize> {
        w.letters().iter().try_fold(start, |v, &l| self.target(v, l))
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.trace(0, w) == Some(0)
    }

    pub fn transition_map(&self, w: &Word) -> TransitionMap {
        TransitionMap {
            image: (0..self.vertex_count)
                .map(|v| self.trace(v, w).map_or(NONE, |t| t as u32))
                .collect(),
        }
    }

    /// Membership of a compressed word: each factor acts through the
    /// transition map of its base raised to the exponent.
    pub fn contains_pw(&self, p: &PowerWord) -> bool {
        let normal = p.normalize();
        let mut cur = 0;
        for f in normal.factors() {
            let step = self.transition_map(&f.base).pow(f.exponent.magnitude());
            match step.apply(cur) {
                Some(t) => cur = t,
                None => return false,
            }
        }
        cur == 0
    }

    /// A shortest nontrivial element, least in letter-code order among those
    /// of minimal length. `None` for the trivial subgroup.
    pub fn shortest_nontrivial(&self) -> Option<Word> {
        let width = self.width();
        // state = vertex * (width + 1) + (last letter code + 1)
        let stride = width + 1;
        let mut parent: Vec<Option<(usize, Letter)>> = vec![None; self.vertex_count * stride];
        let mut seen = vec![false; self.vertex_count * stride];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(state) = queue.pop_front() {
            let v = state / stride;
            let last = (state % stride).checked_sub(1).map(Letter::from_code);
            for code in 0..width {
                let l = Letter::from_code(code);
                if last == Some(l.inverse()) {
                    continue;
                }
                let Some(t) = self.target(v, l) else { continue };
                let next = t * stride + code + 1;
                if seen[next] {
                    continue;
                }
                seen[next] = true;
                parent[next] = Some((state, l));
                if t == 0 {
                    let mut letters = Vec::new();
                    let mut s = next;
                    while let Some((p, l)) = parent[s] {
                        letters.push(l);
                        s = p;
                    }
                    letters.reverse();
                    return Some(Word::from_letters(letters));
                }
                queue.push_back(next);
            }
        }
        None
    }

    /// Equality of subgroups; canonical numbering makes this structural.
    pub fn same_subgroup(&self, other: &CoreGraph) -> bool {
        self == other
    }

    /// Folded: every slot is mirrored by the inverse slot at the target.
    pub fn is_folded(&self) -> bool {
        (0..self.vertex_count).all(|v| {
            (0..self.width()).all(|code| {
                let l = Letter::from_code(code);
                self.target(v, l).is_none_or(|t| self.target(t, l.inverse()) == Some(v))
            })
        })
    }

    /// No vertex other than the basepoint has degree below 2.
    pub fn is_core(&self) -> bool {
        (1..self.vertex_count).all(|v| {
            (0..self.width()).filter(|&c| self.trans[v * self.width() + c] != NONE).count() >= 2
        })
    }

    /// Text dump: `basepoint 0` followed by one `source target letter` line
    /// per edge.
    pub fn dump(&self, descriptor: &GroupDescriptor) -> String {
        let mut s = String::from("basepoint 0\n");
        for (v, t, l) in self.edges() {
            writeln!(s, "{v} {t} {}", descriptor.letter_names()[l.index()]).unwrap();
        }
        s
    }
}

pub fn equal_subgroups(a: &CoreGraph, b: &CoreGraph) -> bool {
    a.same_subgroup(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn f2() -> GroupDescriptor {
        GroupDescriptor::free(2).unwrap()
    }

    fn graph(gens: &[&str]) -> CoreGraph {
        let d = f2();
        let ws: Vec<Word> = gens.iter().map(|g| d.parse_word(g).unwrap()).collect();
        CoreGraph::build(&d, &ws).unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn build_examples() {
        let rose = graph(&["a", "b"]);
        assert_eq!((rose.vertex_count(), rose.edge_count(), rose.rank()), (1, 2, 2));
        let g = graph(&["aa", "b"]);
        assert_eq!((g.vertex_count(), g.edge_count(), g.rank()), (2, 3, 2));
        assert_eq!(graph(&["ab", "ab"]).rank(), 1);
        let trivial = graph(&[]);
        assert_eq!((trivial.vertex_count(), trivial.rank()), (1, 0));
        assert!(g.is_folded() && g.is_core());
    }

    #[test]
    fn membership_examples() {
        let g = graph(&["aa", "b"]);
        assert!(g.contains(&w("aab")));
        assert!(!g.contains(&w("a")));
        let p = PowerWord::from_factors([(w("a"), BigInt::from(1u64) << 40), (w("b"), BigInt::from(1))]);
        assert!(g.contains_pw(&p));
        let odd = PowerWord::from_factors([(w("a"), (BigInt::from(1u64) << 40) + 1), (w("b"), BigInt::from(1))]);
        assert!(!g.contains_pw(&odd));
        for e in -9i64..=9 {
            let p = PowerWord::from_factors([(w("a"), BigInt::from(e)), (w("b"), BigInt::from(1))]);
            assert_eq!(g.contains_pw(&p), g.contains(&p.expand(100).unwrap()));
        }
    }

    #[test]
    fn shortest_examples() {
        assert_eq!(graph(&["aa", "b"]).shortest_nontrivial(), Some(w("b")));
        assert_eq!(graph(&["aba"]).shortest_nontrivial(), Some(w("aba")));
        assert_eq!(graph(&[]).shortest_nontrivial(), None);
        // ties go to the least word in a < A < b < B order
        assert_eq!(graph(&["ab", "ba"]).shortest_nontrivial(), Some(w("ab")));
        assert_eq!(graph(&["B", "A"]).shortest_nontrivial(), Some(w("a")));
    }

    #[test]
    fn equality_examples() {
        assert!(equal_subgroups(&graph(&["a", "b"]), &graph(&["b", "a"])));
        assert!(!equal_subgroups(&graph(&["aa", "b"]), &graph(&["a", "b"])));
        assert!(equal_subgroups(&graph(&["ab"]), &graph(&["BA"])));
        // Nielsen moves preserve the subgroup
        assert!(equal_subgroups(&graph(&["a", "b"]), &graph(&["ab", "b"])));
    }

    #[test]
    fn conjugated_generator_leaves_basepoint_degree_one() {
        let g = graph(&["Aba"]);
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.rank(), 1);
        assert!(g.contains(&w("AbbBBa")) && g.contains(&w("AbbBBBa")));
        assert!(g.is_core());
    }

    #[test]
    fn dump_format() {
        let d = f2();
        assert_eq!(graph(&["aa", "b"]).dump(&d), "basepoint 0\n0 1 a\n0 0 b\n1 0 a\n");
    }

    #[test]
    fn transition_map_power_matches_repeated_composition() {
        let g = graph(&["aaa", "bab", "abba"]);
        let m = g.transition_map(&w("ab"));
        let mut acc = TransitionMap::identity(g.vertex_count());
        for e in 0u32..20 {
            assert_eq!(m.pow(&BigUint::from(e)), acc);
            acc = acc.then(&m);
        }
    }
}
