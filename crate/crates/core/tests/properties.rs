use cutpaste::metrics::{decompose, mode_adjacencies, parity_adjacencies, weight, Mode};
use cutpaste::perm::{adjacencies, enumerate_moves, Move, Permutation, Trace};
use cutpaste::sorter::{sort_basic, sort_insertion, sort_monotone, sort_refined};
use proptest::prelude::*;

const MODES: [Mode; 3] = [Mode::Circular, Mode::Linear, Mode::Cyclic];

fn perm(max_n: usize) -> impl Strategy<Value = Permutation> {
    (1..=max_n, any::<u64>()).prop_map(|(n, seed)| Permutation::random(n, seed))
}

/// A permutation with a valid move for it (n ≥ 2).
fn perm_and_move(max_n: usize) -> impl Strategy<Value = (Permutation, Move)> {
    (2..=max_n, any::<u64>(), any::<prop::sample::Index>()).prop_map(|(n, seed, idx)| {
        let moves = enumerate_moves(n);
        (Permutation::random(n, seed), *idx.get(&moves))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn moves_are_bijections((p, m) in perm_and_move(40)) {
        let q = p.apply(&m).unwrap();
        prop_assert!(Permutation::new(q.values().to_vec()).is_ok());
        prop_assert_eq!(q.len(), p.len());
    }

    #[test]
    fn adjacency_delta_at_most_three((p, m) in perm_and_move(40)) {
        let q = p.apply(&m).unwrap();
        prop_assert!(adjacencies(&q) as i64 - adjacencies(&p) as i64 <= 3);
    }

    #[test]
    fn parity_delta_at_most_two((p, m) in perm_and_move(40)) {
        let q = p.apply(&m).unwrap();
        prop_assert!(parity_adjacencies(&q) as i64 - parity_adjacencies(&p) as i64 <= 2);
    }

    #[test]
    fn replay_prefixes_compose(p in perm(30), picks in prop::collection::vec(any::<prop::sample::Index>(), 0..8), cut in any::<prop::sample::Index>()) {
        prop_assume!(p.len() >= 2);
        let moves = enumerate_moves(p.len());
        let chosen: Vec<Move> = picks.iter().map(|i| *i.get(&moves)).collect();
        let split = cut.index(chosen.len() + 1);
        let mut whole = Trace::new(p.clone());
        whole.moves = chosen.clone();
        let mut head = Trace::new(p);
        head.moves = chosen[..split].to_vec();
        let mut tail = Trace::new(head.replay().unwrap());
        tail.moves = chosen[split..].to_vec();
        prop_assert_eq!(whole.replay().unwrap(), tail.replay().unwrap());
    }

    #[test]
    fn decomposition_partitions_positions(p in perm(40)) {
        for mode in MODES {
            let d = decompose(&p, mode);
            prop_assert_eq!(d.segments.iter().map(|s| s.len).sum::<usize>(), p.len());
            for w in d.segments.windows(2) {
                prop_assert_eq!((w[0].start + w[0].len) % p.len(), w[1].start);
            }
            prop_assert_eq!(decompose(&p, mode), d);
        }
    }

    #[test]
    fn weight_is_bounded(p in perm(60)) {
        let n = p.len() as u64;
        for mode in MODES {
            let w = weight(&p, mode).value();
            let a = mode_adjacencies(p.values(), mode) as u64;
            prop_assert!(w >= 2);
            prop_assert!(w <= (2 * n).saturating_sub(a).max(3), "{mode:?} w={w} a={a}");
        }
    }

    #[test]
    fn sorters_sort(p in perm(120)) {
        let n = p.len();
        let refined = sort_refined(&p).unwrap();
        prop_assert!(refined.trace.replay().unwrap().is_identity());
        prop_assert!(refined.move_count <= 2 * n / 3);
        let basic = sort_basic(&p).unwrap();
        prop_assert!(basic.trace.replay().unwrap().is_identity());
        prop_assert!(basic.move_count <= 2 * n / 3 + 1);
        for r in [sort_insertion(&p), sort_monotone(&p)] {
            prop_assert!(r.trace.replay().unwrap().is_identity());
            prop_assert!(r.within_bound());
        }
    }

    #[test]
    fn trace_text_round_trips(p in perm(50)) {
        let r = sort_refined(&p).unwrap();
        let text = r.trace.to_string();
        let back = Trace::parse(&text).unwrap();
        prop_assert_eq!(&back.initial, &r.trace.initial);
        prop_assert_eq!(&back.moves, &r.trace.moves);
        prop_assert_eq!(back.to_string(), text);
    }
}
