use proptest::prelude::*;

use pcf::colouring::{
    check_conflict_free, check_h_odd, first_fit, is_proper, odd_colours, solitary_colours, ThresholdSpec,
};
use pcf::graph::{gen_random_graph, Graph};
use pcf::greedy::{greedy_hpcf, greedy_hpcf_degenerate, partial_greedy};
use pcf::mindeg::{resample_sweep, ResampleState};
use pcf::oracle::{exact_chi_odd, exact_chi_pcf, SearchBudget};
use pcf::pipeline::odd_to_pcf_check;
use pcf::Colouring;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, 0.0f64..0.6, any::<u64>()).prop_map(|(n, p, seed)| gen_random_graph(n, p, seed).unwrap())
}

fn graph_and_colouring(max_n: usize) -> impl Strategy<Value = (Graph, Colouring)> {
    graph_strategy(max_n).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), prop::collection::vec(1..=n as u32, n))
            .prop_map(|(g, colours)| (g, Colouring::new(colours).unwrap()))
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #[test]
    fn solitary_colours_are_odd((g, c) in graph_and_colouring(30)) {
        for v in 0..g.n() {
            let odd = odd_colours(&g, &c, v).unwrap();
            for s in solitary_colours(&g, &c, v).unwrap() {
                prop_assert!(odd.contains(&s));
            }
        }
    }

    #[test]
    fn zero_demand_is_properness((g, c) in graph_and_colouring(30)) {
        let r = check_conflict_free(&g, &c, &ThresholdSpec::uniform(g.n(), 0)).unwrap();
        prop_assert_eq!(r.all_pass, is_proper(&g, &c).unwrap());
    }

    #[test]
    fn demands_are_monotone((g, c) in graph_and_colouring(30), h in 0usize..6) {
        let stronger = check_conflict_free(&g, &c, &ThresholdSpec::uniform(g.n(), h + 1)).unwrap();
        let weaker = check_conflict_free(&g, &c, &ThresholdSpec::uniform(g.n(), h)).unwrap();
        prop_assert!(!stronger.all_pass || weaker.all_pass);
        let odd_stronger = check_h_odd(&g, &c, h + 1).unwrap();
        prop_assert!(!odd_stronger.all_pass || check_h_odd(&g, &c, h).unwrap().all_pass);
        // Every solitary colour is odd, so h-pcf implies h-odd.
        prop_assert!(!weaker.all_pass || check_h_odd(&g, &c, h).unwrap().all_pass);
    }

    #[test]
    fn rainbow_colouring_meets_every_demand(g in graph_strategy(30), h in 0usize..40) {
        let c = Colouring::new((1..=g.n() as u32).collect()).unwrap();
        prop_assert!(check_conflict_free(&g, &c, &ThresholdSpec::uniform(g.n(), h)).unwrap().all_pass);
    }

    #[test]
    fn counting_identity_holds((g, c) in graph_and_colouring(30)) {
        for v in 0..g.n() {
            prop_assert!(odd_to_pcf_check(&g, &c, v).unwrap().ok);
        }
    }

    #[test]
    fn odd_at_delta_minus_t_gives_pcf((g, c) in graph_and_colouring(25)) {
        let delta = g.max_degree();
        for t in 0..=delta {
            if check_h_odd(&g, &c, delta - t).unwrap().all_pass {
                let h = (delta as f64 - 1.5 * t as f64).ceil().max(0.0) as usize;
                prop_assert!(check_conflict_free(&g, &c, &ThresholdSpec::uniform(g.n(), h)).unwrap().all_pass);
            }
        }
    }

    #[test]
    fn greedy_respects_bounds(g in graph_strategy(80), h in 1usize..4, shuffle in any::<u64>()) {
        let delta = g.max_degree();
        let uniform = ThresholdSpec::uniform(g.n(), h);
        let order: Vec<usize> = {
            let mut o: Vec<usize> = (0..g.n()).collect();
            o.sort_by_key(|&v| pcf::seed::mix(shuffle, v as u64));
            o
        };
        let (c, _) = greedy_hpcf(&g, h, Some(&order)).unwrap();
        prop_assert!(check_conflict_free(&g, &c, &uniform).unwrap().all_pass);
        prop_assert!(c.max_colour() as usize <= (h + 1) * delta + 1);

        let (degen, _) = g.degeneracy_ordering();
        let (c, _, d) = greedy_hpcf_degenerate(&g, h, &degen).unwrap();
        prop_assert!(check_conflict_free(&g, &c, &uniform).unwrap().all_pass);
        prop_assert!(c.max_colour() as usize <= h * delta + d + 1);

        let (c, _, spec) = partial_greedy(&g, h).unwrap();
        prop_assert!(check_conflict_free(&g, &c, &spec).unwrap().all_pass);
        prop_assert!(c.max_colour() as usize <= h * delta + 1);
    }

    #[test]
    fn greedy_under_any_ordering(g in graph_strategy(20).prop_flat_map(|g| { let n = g.n(); (Just(g), permutation(n)) })) {
        let (g, order) = g;
        let (c, trace) = greedy_hpcf(&g, 2, Some(&order)).unwrap();
        prop_assert_eq!(trace.ordering, order);
        prop_assert!(check_conflict_free(&g, &c, &ThresholdSpec::uniform(g.n(), 2)).unwrap().all_pass);
    }

    #[test]
    fn resampling_keeps_properness(g in graph_strategy(40), extra in 1usize..5, seed in any::<u64>()) {
        let k = (g.max_degree() + extra) as u32;
        let order: Vec<usize> = (0..g.n()).collect();
        let mut state = ResampleState::new(&g, first_fit(&g), k).unwrap();
        for s in 0..3 {
            state = resample_sweep(&g, state, &order, seed.wrapping_add(s)).unwrap();
            prop_assert!(is_proper(&g, &state.colouring()).unwrap());
            prop_assert!(state.colouring().max_colour() <= k);
        }
    }

    #[test]
    fn dimacs_round_trip(g in graph_strategy(40)) {
        let text = g.to_dimacs();
        let back = Graph::from_dimacs(&text).unwrap();
        prop_assert_eq!(back.to_dimacs(), text);
        prop_assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn colouring_json_round_trip((_g, c) in graph_and_colouring(20)) {
        let json = serde_json::to_string(&c).unwrap();
        let back: Colouring = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn oracle_orders_odd_pcf_and_greedy(g in graph_strategy(8), h in 1usize..3) {
        let budget = SearchBudget::default();
        let pcf = exact_chi_pcf(&g, h, budget).unwrap().value().unwrap();
        let odd = exact_chi_odd(&g, h, budget).unwrap().value().unwrap();
        prop_assert!(odd <= pcf);
        let (c, _) = greedy_hpcf(&g, h, None).unwrap();
        prop_assert!(c.colours_used() >= pcf);
    }
}
