use proptest::prelude::*;

use gtlie_core::bialgebra::{check_antisymmetry, check_coskew};
use gtlie_core::surface::EndId;
use gtlie_core::{
    bracket, canonical_class, cobracket, free_reduce, intersection_count, self_link_count, ConjClass, FatGraph,
    Letter, Word,
};

fn word(k: usize, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..2 * k, 0..max).prop_map(Word::from_iter_unreduced)
}

trait FromCodes {
    fn from_iter_unreduced(codes: Vec<usize>) -> Word;
}

impl FromCodes for Word {
    fn from_iter_unreduced(codes: Vec<usize>) -> Word {
        free_reduce(codes.into_iter().map(Letter::from_code))
    }
}

fn class(k: usize, max: usize) -> impl Strategy<Value = ConjClass> {
    word(k, max).prop_filter_map("trivial", |w| canonical_class(&w))
}

fn surface() -> impl Strategy<Value = FatGraph> {
    prop_oneof![
        Just(FatGraph::standard(1, 1).unwrap()),
        Just(FatGraph::standard(0, 3).unwrap()),
        Just(FatGraph::standard(1, 2).unwrap()),
        Just(FatGraph::standard(2, 1).unwrap()),
    ]
}

/// The same surface with its cyclic order started at a different end.
fn rotated(g: &FatGraph, r: usize) -> FatGraph {
    let mut sigma: Vec<EndId> = g.sigma().to_vec();
    let n = sigma.len();
    sigma.rotate_left(r % n);
    FatGraph::new(sigma).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reduction_is_idempotent(w in word(3, 20)) {
        prop_assert_eq!(free_reduce(w.letters().iter().copied()), w);
    }

    #[test]
    fn canonical_form_is_conjugation_invariant(w in word(3, 12), x in word(3, 6)) {
        let conj = Word::concat(&x.concat(&w), &x.inverse());
        prop_assert_eq!(canonical_class(&conj), canonical_class(&w));
    }

    #[test]
    fn powers_have_primitive_roots(c in class(2, 8), m in 1usize..5) {
        let (root, e) = c.primitive_root();
        let (root_m, em) = c.pow(m as i64).unwrap().primitive_root();
        prop_assert_eq!(root_m, root);
        prop_assert_eq!(em, e * m);
        prop_assert_eq!(c.pow(-(m as i64)).unwrap(), c.pow(m as i64).unwrap().inverse());
    }

    #[test]
    fn bracket_is_antisymmetric(g in surface(), u in class(3, 7), v in class(3, 7)) {
        prop_assume!(g.admits(&u) && g.admits(&v));
        prop_assert!(check_antisymmetry(&g, &u, &v).is_zero());
    }

    #[test]
    fn cobracket_is_skew(g in surface(), w in class(3, 9)) {
        prop_assume!(g.admits(&w));
        prop_assert!(check_coskew(&g, &w).is_zero());
    }

    #[test]
    fn counts_ignore_direction(g in surface(), u in class(3, 7), v in class(3, 7)) {
        prop_assume!(g.admits(&u) && g.admits(&v));
        prop_assert_eq!(self_link_count(&g, &u), self_link_count(&g, &u.inverse()));
        let uv = intersection_count(&g, &u, &v).ok();
        prop_assert_eq!(uv, intersection_count(&g, &v, &u).ok());
        prop_assert_eq!(uv, intersection_count(&g, &u.inverse(), &v).ok());
    }

    #[test]
    fn bracket_bounded_by_intersection(g in surface(), u in class(3, 7), v in class(3, 7)) {
        prop_assume!(g.admits(&u) && g.admits(&v));
        let b = bracket(&g, &u, &v);
        match intersection_count(&g, &u, &v) {
            Ok(n) => prop_assert!(b.l1_norm() as usize <= n),
            Err(_) => {
                let (ru, rv) = (u.primitive_root().0, v.primitive_root().0);
                prop_assert!(ru == rv || ru == rv.inverse());
            }
        }
    }

    #[test]
    fn operations_ignore_where_the_cyclic_order_starts(r in 0usize..4, u in class(2, 7), v in class(2, 7)) {
        let g = FatGraph::standard(1, 1).unwrap();
        let h = rotated(&g, r);
        prop_assert_eq!(bracket(&g, &u, &v), bracket(&h, &u, &v));
        prop_assert_eq!(cobracket(&g, &u), cobracket(&h, &u));
        prop_assert_eq!(self_link_count(&g, &u), self_link_count(&h, &u));
    }

    #[test]
    fn parse_display_roundtrip(c in class(4, 12)) {
        prop_assert_eq!(c.to_string().parse::<ConjClass>().unwrap(), c);
    }
}
