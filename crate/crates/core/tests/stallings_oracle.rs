//! Core graphs against the brute-force oracles in `common`.

mod common;

use common::packed::{ClosureOracle, Packed};
use common::{generator_sets, reduced_code_words, to_word, NaiveFold};
use frattini::stallings::{equal_subgroups, CoreGraph};
use frattini::words::{Letter, PowerWord, Word};
use frattini::GroupDescriptor;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn f2() -> GroupDescriptor {
    GroupDescriptor::free(2).unwrap()
}

fn build(d: &GroupDescriptor, gens: &[Vec<u8>]) -> CoreGraph {
    let words: Vec<Word> = gens.iter().map(|g| to_word(g)).collect();
    CoreGraph::build(d, &words).unwrap()
}

#[test]
fn small_subgroups_agree_with_both_oracles() {
    let d = f2();
    let words = reduced_code_words(2, 7);
    let mut closure = ClosureOracle::new();
    for gens in generator_sets(2, 3) {
        let graph = build(&d, &gens);
        let naive = NaiveFold::new(&gens);
        closure.run(&gens, 7, words.len());
        for w in &words {
            let member = graph.contains(&to_word(w));
            assert_eq!(member, naive.contains(w), "{gens:?} {w:?}");
            if closure.contains(Packed::from_codes(w)) {
                assert!(member, "enumerated product {w:?} of {gens:?} rejected");
            }
        }
        assert_eq!(graph.rank(), naive.rank(), "{gens:?}");
        assert!(graph.rank() <= gens.len());
        let shortest = words.iter().skip(1).find(|w| naive.contains(w)).map(|w| to_word(w));
        assert_eq!(graph.shortest_nontrivial(), shortest, "{gens:?}");
    }
}

#[test]
fn generators_and_their_products_are_members() {
    let d = GroupDescriptor::free(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..300 {
        let gens: Vec<Word> = (0..rng.gen_range(1..=3))
            .map(|_| Word::from_letters((0..rng.gen_range(1..=6)).map(|_| Letter::from_code(rng.gen_range(0..6)))))
            .filter(|w| !w.is_empty())
            .collect();
        if gens.is_empty() {
            continue;
        }
        let graph = CoreGraph::build(&d, &gens).unwrap();
        assert!(graph.is_folded() && graph.is_core());
        let mut product = Word::identity();
        for _ in 0..8 {
            let g = &gens[rng.gen_range(0..gens.len())];
            product = if rng.gen_bool(0.5) { product.multiply(g) } else { product.multiply(&g.inverse()) };
            assert!(graph.contains(&product));
        }
    }
}

#[test]
fn contains_pw_matches_expanded_membership() {
    let d = f2();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let subgroups: Vec<CoreGraph> = [vec!["ab", "ba"], vec!["aa", "b", "aBa"], vec!["abAB"], vec!["aab", "bba", "abab"]]
        .iter()
        .map(|gs| CoreGraph::build(&d, &gs.iter().map(|s| d.parse_word(s).unwrap()).collect::<Vec<_>>()).unwrap())
        .collect();
    let bases: Vec<Word> = ["ab", "ba", "a", "b", "aB", "abAB", "aab"].iter().map(|s| s.parse().unwrap()).collect();
    for _ in 0..400 {
        let factors: Vec<(Word, i64)> = (0..rng.gen_range(1..=5))
            .map(|_| (bases[rng.gen_range(0..bases.len())].clone(), rng.gen_range(-300i64..=300)))
            .collect();
        let p = PowerWord::from_factors(factors);
        let Ok(w) = p.expand(100_000) else { continue };
        for graph in &subgroups {
            assert_eq!(graph.contains_pw(&p), graph.contains(&w), "{p}");
        }
    }
}

#[test]
fn generating_sets_of_the_same_subgroup_give_equal_graphs() {
    let d = f2();
    let parse = |gs: &[&str]| gs.iter().map(|s| d.parse_word(s).unwrap()).collect::<Vec<_>>();
    let a = CoreGraph::build(&d, &parse(&["a", "b"])).unwrap();
    let b = CoreGraph::build(&d, &parse(&["ab", "B", "aaa"])).unwrap();
    assert_eq!(a, b);
    let c = CoreGraph::build(&d, &parse(&["aa", "ab"])).unwrap();
    let e = CoreGraph::build(&d, &parse(&["ab", "abaa", "abab"])).unwrap();
    assert!(equal_subgroups(&c, &e));
    assert!(!equal_subgroups(&a, &c));
}

fn gen_set() -> impl Strategy<Value = Vec<Vec<u8>>> {
    prop::collection::vec(prop::collection::vec(0u8..6, 1..=5), 1..=3)
}

proptest! {
    #[test]
    fn membership_agrees_with_naive_folding(raw in gen_set(), probes in prop::collection::vec(prop::collection::vec(0u8..6, 0..=10), 40)) {
        let reduce = |w: &[u8]| -> Vec<u8> {
            to_word(w).letters().iter().map(|l| l.code() as u8).collect()
        };
        let gens: Vec<Vec<u8>> = raw.iter().map(|g| reduce(g)).filter(|g| !g.is_empty()).collect();
        prop_assume!(!gens.is_empty());
        let d = GroupDescriptor::free(3).unwrap();
        let graph = build(&d, &gens);
        let naive = NaiveFold::new(&gens);
        prop_assert_eq!(graph.rank(), naive.rank());
        for p in &probes {
            let w = reduce(p);
            prop_assert_eq!(graph.contains(&to_word(&w)), naive.contains(&w));
        }
    }

    #[test]
    fn canonical_form_ignores_generator_order(raw in gen_set()) {
        let d = GroupDescriptor::free(3).unwrap();
        let words: Vec<Word> = raw.iter().map(|g| to_word(g)).collect();
        let mut rev = words.clone();
        rev.reverse();
        let inv: Vec<Word> = words.iter().map(Word::inverse).collect();
        let a = CoreGraph::build(&d, &words).unwrap();
        prop_assert_eq!(&a, &CoreGraph::build(&d, &rev).unwrap());
        prop_assert_eq!(&a, &CoreGraph::build(&d, &inv).unwrap());
    }
}
