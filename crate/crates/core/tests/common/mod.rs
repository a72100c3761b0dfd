//! Independent oracles shared by the integration tests. Nothing here calls
//! into the normalizer or the folding code.

#![allow(dead_code)]

use frattini::words::{Letter, PowerWord, Word};

pub fn naive_reduce(raw: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for &l in raw {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Letter-by-letter expansion of a raw power word followed by free
/// reduction.
pub fn oracle_expand(p: &PowerWord) -> Vec<Letter> {
    let mut raw = Vec::new();
    for f in p.factors() {
        let e: i64 = f.exponent.clone().try_into().expect("small exponent");
        let base: Vec<Letter> = if e < 0 {
            f.base.letters().iter().rev().map(|l| l.inverse()).collect()
        } else {
            f.base.letters().to_vec()
        };
        for _ in 0..e.unsigned_abs() {
            raw.extend_from_slice(&base);
        }
    }
    naive_reduce(&raw)
}

/// Reduced words over `rank` generators as letter-code vectors, by length
/// and then lexicographically.
pub fn reduced_code_words(rank: u8, max_len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut start = 0;
    for _ in 0..max_len {
        let end = out.len();
        for i in start..end {
            for c in 0..2 * rank {
                if out[i].last() != Some(&(c ^ 1)) {
                    let mut w = out[i].clone();
                    w.push(c);
                    out.push(w);
                }
            }
        }
        start = end;
    }
    out
}

pub fn to_word(codes: &[u8]) -> Word {
    Word::from_letters(codes.iter().map(|&c| Letter::from_code(c as usize)))
}

pub fn invert_codes(codes: &[u8]) -> Vec<u8> {
    codes.iter().rev().map(|c| c ^ 1).collect()
}

/// Rank-two words packed two bits per letter, for a brute-force closure
/// with a bitset of visited elements.
pub mod packed {
    pub const CAP: usize = 12;

    #[derive(Clone, Copy, Debug, PartialEq, Eq)]
    pub struct Packed {
        pub len: u8,
        pub bits: u32,
    }

    impl Packed {
        pub const IDENTITY: Packed = Packed { len: 0, bits: 0 };

        pub fn from_codes(codes: &[u8]) -> Packed {
            let bits = codes.iter().enumerate().fold(0u32, |acc, (i, &c)| acc | (c as u32) << (2 * i));
            Packed { len: codes.len() as u8, bits }
        }

        pub fn key(self) -> usize {
            (self.len as usize) << (2 * CAP) | self.bits as usize
        }

        fn at(self, i: usize) -> u8 {
            (self.bits >> (2 * i) & 3) as u8
        }

        /// `self · y`, or `None` if the reduced product is longer than `CAP`.
        pub fn times(self, y: &[u8]) -> Option<Packed> {
            let xl = self.len as usize;
            let mut k = 0;
            while k < xl && k < y.len() && self.at(xl - 1 - k) == y[k] ^ 1 {
                k += 1;
            }
            let keep = xl - k;
            let len = keep + y.len() - k;
            if len > CAP {
                return None;
            }
            let mut bits = if keep == 0 { 0 } else { self.bits & ((1u32 << (2 * keep)) - 1) };
            for (i, &c) in y[k..].iter().enumerate() {
                bits |= (c as u32) << (2 * (keep + i));
            }
            Some(Packed { len: len as u8, bits })
        }
    }

    /// Closure of `{1}` under right multiplication by the generators and
    /// their inverses, keeping only elements of length at most `CAP`.
    pub struct ClosureOracle {
        visited: Vec<u64>,
        touched: Vec<usize>,
    }

    impl ClosureOracle {
        pub fn new() -> ClosureOracle {
            ClosureOracle { visited: vec![0; ((CAP + 1) << (2 * CAP)) / 64 + 1], touched: Vec::new() }
        }

        fn mark(&mut self, p: Packed) -> bool {
            let k = p.key();
            let (word, bit) = (k / 64, 1u64 << (k % 64));
            if self.visited[word] & bit != 0 {
                return false;
            }
            self.visited[word] |= bit;
            self.touched.push(word);
            true
        }

        pub fn contains(&self, p: Packed) -> bool {
            let k = p.key();
            self.visited[k / 64] & (1u64 << (k % 64)) != 0
        }

        /// Runs the closure. Stops early once `short_total` elements of
        /// length at most `short_len` have been found, since then every
        /// short word is known to be a member.
        pub fn run(&mut self, generators: &[Vec<u8>], short_len: usize, short_total: usize) {
            for w in self.touched.drain(..) {
                self.visited[w] = 0;
            }
            let steps: Vec<Vec<u8>> = generators
                .iter()
                .flat_map(|g| [g.clone(), g.iter().rev().map(|c| c ^ 1).collect()])
                .collect();
            let mut buckets: Vec<Vec<Packed>> = vec![Vec::new(); CAP + 1];
            self.mark(Packed::IDENTITY);
            buckets[0].push(Packed::IDENTITY);
            let mut short_found = 1;
            while let Some(level) = buckets.iter().position(|b| !b.is_empty()) {
                let x = buckets[level].pop().expect("nonempty bucket");
                for s in &steps {
                    if let Some(y) = x.times(s) {
                        if self.mark(y) {
                            if (y.len as usize) <= short_len {
                                short_found += 1;
                                if short_found == short_total {
                                    return;
                                }
                            }
                            buckets[y.len as usize].push(y);
                        }
                    }
                }
            }
        }
    }
}

/// Signed permutations of `{a, b}` acting on letter codes.
pub fn rank_two_symmetries() -> Vec<[u8; 4]> {
    let mut out = Vec::new();
    for swap in [false, true] {
        for fa in [0u8, 1] {
            for fb in [0u8, 1] {
                let (ia, ib) = if swap { (2u8, 0u8) } else { (0, 2) };
                out.push([ia ^ fa, ia ^ fa ^ 1, ib ^ fb, ib ^ fb ^ 1]);
            }
        }
    }
    out
}

/// Generator sets of size `1..=max_gens` drawn from nontrivial reduced
/// rank-two words of length at most `max_len`, each generator taken up to
/// inversion and each set up to the signed permutations of the alphabet.
pub fn generator_sets(max_gens: usize, max_len: usize) -> Vec<Vec<Vec<u8>>> {
    let canon = |w: &[u8]| -> Vec<u8> {
        let inv = invert_codes(w);
        if inv.as_slice() < w {
            inv
        } else {
            w.to_vec()
        }
    };
    let pool: Vec<Vec<u8>> = reduced_code_words(2, max_len)
        .into_iter()
        .filter(|w| !w.is_empty() && canon(w) == *w)
        .collect();
    let syms = rank_two_symmetries();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    fn rec(
        pool: &[Vec<u8>],
        start: usize,
        max_gens: usize,
        chosen: &mut Vec<usize>,
        emit: &mut dyn FnMut(&[usize]),
    ) {
        if !chosen.is_empty() {
            emit(chosen);
        }
        if chosen.len() == max_gens {
            return;
        }
        for i in start..pool.len() {
            chosen.push(i);
            rec(pool, i + 1, max_gens, chosen, emit);
            chosen.pop();
        }
    }
    let mut emit = |idx: &[usize]| {
        let mut set: Vec<Vec<u8>> = idx.iter().map(|&i| pool[i].clone()).collect();
        set.sort();
        let is_canonical = syms.iter().all(|s| {
            let mut image: Vec<Vec<u8>> =
                set.iter().map(|w| canon(&w.iter().map(|&c| s[c as usize]).collect::<Vec<_>>())).collect();
            image.sort();
            image >= set
        });
        if is_canonical {
            out.push(set);
        }
    };
    rec(&pool, 0, max_gens, &mut chosen, &mut emit);
    out
}

/// Folding by brute force: merge any two edges that share a label and an
/// endpoint, relabel vertices, repeat until nothing changes. No pruning and
/// no canonical numbering.
pub struct NaiveFold {
    /// `(source, generator index, target)`
    edges: Vec<(usize, u8, usize)>,
}

impl NaiveFold {
    pub fn new(generators: &[Vec<u8>]) -> NaiveFold {
        let mut edges = Vec::new();
        let mut next = 1;
        for g in generators {
            let mut at = 0;
            for (i, &c) in g.iter().enumerate() {
                let to = if i + 1 == g.len() {
                    0
                } else {
                    next += 1;
                    next - 1
                };
                if c % 2 == 0 {
                    edges.push((at, c / 2, to));
                } else {
                    edges.push((to, c / 2, at));
                }
                at = to;
            }
        }
        let mut fold = NaiveFold { edges };
        fold.fold();
        fold
    }

    fn fold(&mut self) {
        loop {
            self.edges.sort();
            self.edges.dedup();
            let mut merge = None;
            'search: for i in 0..self.edges.len() {
                for j in i + 1..self.edges.len() {
                    let (s1, l1, t1) = self.edges[i];
                    let (s2, l2, t2) = self.edges[j];
                    if l1 != l2 {
                        continue;
                    }
                    if s1 == s2 && t1 != t2 {
                        merge = Some((t1.min(t2), t1.max(t2)));
                        break 'search;
                    }
                    if t1 == t2 && s1 != s2 {
                        merge = Some((s1.min(s2), s1.max(s2)));
                        break 'search;
                    }
                }
            }
            let Some((keep, gone)) = merge else { return };
            for e in &mut self.edges {
                if e.0 == gone {
                    e.0 = keep;
                }
                if e.2 == gone {
                    e.2 = keep;
                }
            }
        }
    }

    pub fn contains(&self, w: &[u8]) -> bool {
        let mut at = 0;
        for &c in w {
            let step = if c % 2 == 0 {
                self.edges.iter().find(|e| e.0 == at && e.1 == c / 2).map(|e| e.2)
            } else {
                self.edges.iter().find(|e| e.2 == at && e.1 == c / 2).map(|e| e.0)
            };
            match step {
                Some(v) => at = v,
                None => return false,
            }
        }
        at == 0
    }

    /// `E - V + 1` over the vertices that carry an edge, plus the basepoint.
    pub fn rank(&self) -> usize {
        let mut vs: Vec<usize> = self.edges.iter().flat_map(|e| [e.0, e.2]).chain([0]).collect();
        vs.sort();
        vs.dedup();
        self.edges.len() + 1 - vs.len()
    }
}

pub mod sequences {
    use frattini::words::{Letter, PowerWord, Word};
    use rand::Rng;
    use rand_chacha::ChaCha8Rng;

    pub fn random_word(rng: &mut ChaCha8Rng, rank: usize, min_len: usize, max_len: usize) -> Word {
        loop {
            let len = rng.gen_range(min_len..=max_len);
            let w = Word::from_letters((0..len).map(|_| Letter::from_code(rng.gen_range(0..2 * rank))));
            if w.len() >= min_len {
                return w;
            }
        }
    }

    /// Powers `x^{e_0}, x^{e_1}, ...` with increasing exponents whose gaps
    /// are at least `ceil(a / |core of x|)`, so that each two-step distance
    /// beats the longer step by at least `a`.
    pub fn power_ladder(rng: &mut ChaCha8Rng, a: u64) -> Vec<PowerWord> {
        let x = random_word(rng, 2, 1, 6);
        let core = x.cyclic_form().core.len() as u64;
        let min_gap = a.div_ceil(core) as i64;
        let mut e: i64 = rng.gen_range(-50..=50);
        (0..rng.gen_range(3..=10))
            .map(|_| {
                let p = PowerWord::power(&x, e);
                e += min_gap + rng.gen_range(0..=20);
                p
            })
            .collect()
    }

    /// Random walk whose steps are long powers with short junk between
    /// them.
    pub fn broken_walk(rng: &mut ChaCha8Rng) -> Vec<PowerWord> {
        let mut x = PowerWord::identity();
        let mut out = vec![x.clone()];
        for _ in 0..rng.gen_range(2..=9) {
            let base = random_word(rng, 2, 1, 4);
            let step = PowerWord::product(&[
                PowerWord::from_word(&random_word(rng, 2, 0, 3)),
                PowerWord::power(&base, rng.gen_range(-200i64..=200)),
            ]);
            x = x.multiply(&step);
            out.push(x.clone());
        }
        out
    }

    /// Short random points, which usually break the global bound.
    pub fn short_points(rng: &mut ChaCha8Rng) -> Vec<PowerWord> {
        (0..rng.gen_range(3..=8)).map(|_| PowerWord::from_word(&random_word(rng, 2, 0, 6))).collect()
    }
}
