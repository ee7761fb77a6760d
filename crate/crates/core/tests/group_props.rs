use proptest::prelude::*;
use zkamp::symm::{act, enumerate_sn, Graph, GraphCode};

fn perm(n: usize, k: usize) -> zkamp::symm::Permutation {
    let all = enumerate_sn(n).unwrap();
    all[k % all.len()].clone()
}

proptest! {
    #[test]
    fn action_is_a_left_action(n in 2usize..=5, p in 0usize..720, q in 0usize..720, code in any::<u64>()) {
        let (p, q) = (perm(n, p), perm(n, q));
        let g = Graph::decode(GraphCode(code % GraphCode::space(n) as u64), n).unwrap();
        let lhs = act(&p.compose(&q).unwrap(), &g).unwrap();
        let rhs = act(&p, &act(&q, &g).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(act(&p.invert(), &act(&p, &g).unwrap()).unwrap(), g);
    }

    #[test]
    fn codes_round_trip(n in 1usize..=6, code in any::<u64>()) {
        let c = GraphCode(code % GraphCode::space(n) as u64);
        prop_assert_eq!(Graph::decode(c, n).unwrap().encode(), c);
    }

    #[test]
    fn literals_round_trip(n in 2usize..=6, code in any::<u64>()) {
        let g = Graph::decode(GraphCode(code % GraphCode::space(n) as u64), n).unwrap();
        let back: Graph = g.to_string().parse().unwrap();
        prop_assert_eq!(back, g);
    }
}
