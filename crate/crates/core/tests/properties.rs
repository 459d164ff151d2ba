use edgeham_core::cert::{is_edge_walk, validate_des, validate_edge_sequence, EdgeSeq, Mode};
use edgeham_core::cw::{
    big_joins, eliminate_big_joins, eliminate_gradual_bicliques, gradual_sites, random_cwe, reduce_biclique_graph,
    repair_contain, transfer_des_across_reduction, Direction,
};
use edgeham_core::generate::{generate_family, FamilySpec};
use edgeham_core::hyper::{decide_hyper_ehp, HyperSolveConfig};
use edgeham_core::io;
use edgeham_core::kernel::{kernelize, lift_certificate};
use edgeham_core::oracle::{check_hn_equivalence, solve_des_exact, solve_edge_ham_exact, OracleCaps};
use edgeham_core::transforms::decide_via_transform;
use edgeham_core::tw::{des_dp_profiled, make_nice, min_fill_decomposition, validate_nice, validate_td};
use edgeham_core::typing::{classify_types, decompose_groups, normalize_edge_path};
use edgeham_core::{Answer, Graph, Hypergraph};
use proptest::prelude::*;

const CAP: usize = 20;

/// A graph on `n` vertices keeping the pairs whose bit is set.
fn graph_from_bits(n: usize, bits: &[bool]) -> Graph {
    let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    Graph::new(n, pairs.zip(bits).filter(|(_, &b)| b).map(|(p, _)| p)).unwrap()
}

fn small_graph(max_n: usize, max_m: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(any::<bool>(), n * (n - 1) / 2)))
        .prop_map(|(n, bits)| graph_from_bits(n, &bits))
        .prop_filter("too many edges", move |g| g.m() <= max_m)
}

fn small_hypergraph() -> impl Strategy<Value = Hypergraph> {
    (3usize..8)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(prop::collection::vec(0..n, 1..4), 0..8)))
        .prop_map(|(n, edges)| Hypergraph::new(n, edges).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn graph_text_round_trips(g in small_graph(8, 28)) {
        prop_assert_eq!(io::parse_graph(&io::serialize_graph(&g)).unwrap(), g);
    }

    #[test]
    fn hypergraph_text_round_trips(h in small_hypergraph()) {
        prop_assert_eq!(io::parse_hypergraph(&io::serialize_hypergraph(&h)).unwrap(), h);
    }

    #[test]
    fn td_text_round_trips(g in small_graph(8, 28)) {
        let td = min_fill_decomposition(&g);
        prop_assert!(validate_td(&g, &td));
        let back = io::parse_td(&io::serialize_td(&td, g.n()), &g).unwrap();
        prop_assert!(validate_td(&g, &back));
        prop_assert_eq!(back.width(), td.width());
    }

    #[test]
    fn cwe_text_round_trips(k in 2usize..4, size in 1usize..20, seed in any::<u64>()) {
        let e = random_cwe(k, size, seed).unwrap();
        let back = io::parse_cwe(&io::serialize_cwe(&e)).unwrap();
        prop_assert_eq!(back.k, e.k);
        prop_assert_eq!(back.eval().unwrap(), e.eval().unwrap());
    }

    #[test]
    fn line_graph_and_des_oracles_agree(g in small_graph(7, 10)) {
        prop_assume!(g.m() >= 3);
        prop_assert!(check_hn_equivalence(&g, &OracleCaps::default()).unwrap());
    }

    #[test]
    fn transforms_preserve_answers(g in small_graph(6, 8)) {
        for mode in [Mode::Path, Mode::Cycle] {
            let other = match mode {
                Mode::Path => Mode::Cycle,
                Mode::Cycle => Mode::Path,
            };
            let direct = solve_edge_ham_exact(&g, mode, CAP).unwrap().is_yes();
            let via = decide_via_transform(&g, mode, |h| solve_edge_ham_exact(h, other, CAP).map(|r| r.is_yes())).unwrap();
            prop_assert_eq!(direct, via, "{:?}", mode);
        }
    }

    #[test]
    fn nice_decompositions_validate_and_dp_matches_oracle(g in small_graph(8, 14)) {
        let nice = make_nice(&g, &min_fill_decomposition(&g)).unwrap();
        prop_assert!(validate_nice(&g, &nice).is_ok());
        let (res, profile) = des_dp_profiled(&g, &nice).unwrap();
        prop_assert!(profile.within_bound());
        prop_assert_eq!(res.is_yes(), solve_des_exact(&g, CAP).unwrap().is_yes());
        if let Some(d) = res.des() {
            prop_assert!(validate_des(&g, d));
        }
    }

    #[test]
    fn eval_ignores_renaming_to_a_fresh_label(k in 2usize..4, size in 1usize..16, seed in any::<u64>()) {
        let e = random_cwe(k, size, seed).unwrap();
        let mut wider = e.clone();
        wider.k += 1;
        let renamed = wider.rename(1, k + 1);
        let a = e.eval().unwrap();
        let b = renamed.eval().unwrap();
        prop_assert_eq!(a.graph, b.graph);
    }

    #[test]
    fn rewrites_reach_their_fixpoints(size in 4usize..22, seed in any::<u64>()) {
        let e = random_cwe(2, size, seed).unwrap();
        let bj = eliminate_big_joins(&e);
        prop_assert!(big_joins(&bj).is_empty());
        let gr = eliminate_gradual_bicliques(&bj);
        prop_assert!(gradual_sites(&gr).is_empty());
        prop_assert!(big_joins(&gr).is_empty());
        prop_assert!(gr.k <= e.k + 4);
        let (n0, m0) = (e.vertex_count(), e.eval().unwrap().graph.m());
        let g = gr.eval().unwrap().graph;
        prop_assert!(g.m() <= m0);
        prop_assert!(g.n() >= n0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_keeps_answers_and_lifts(seed in any::<u64>(), k in 1usize..4, m in 1usize..16) {
        let gen = generate_family(FamilySpec::VcBounded { n: 10, k, m: m.min(9 * k), seed }).unwrap();
        let g = gen.graph().unwrap();
        let trace = kernelize(g, &gen.planted).unwrap();
        prop_assert!(trace.within_bounds().unwrap());
        prop_assert!(trace.check_consistency().is_ok());
        let before = solve_edge_ham_exact(g, Mode::Path, CAP).unwrap();
        let after = solve_edge_ham_exact(&trace.kernel, Mode::Path, CAP).unwrap();
        prop_assert_eq!(before.is_yes(), after.is_yes());
        if let Some(s) = after.edge_seq() {
            let lifted = lift_certificate(&trace, s).unwrap();
            prop_assert!(validate_edge_sequence(g, &lifted).unwrap());
        }
        let back = io::parse_trace(&io::serialize_trace(&trace)).unwrap();
        prop_assert_eq!(back, trace);
    }

    #[test]
    fn normalized_paths_have_few_groups(seed in any::<u64>(), k in 1usize..4, m in 3usize..13) {
        let gen = generate_family(FamilySpec::VcBounded { n: 9, k, m: m.min(8 * k), seed }).unwrap();
        let g = gen.graph().unwrap();
        let Some(s) = solve_edge_ham_exact(g, Mode::Path, CAP).unwrap().edge_seq().cloned() else {
            return Ok(());
        };
        let t = classify_types(g, &gen.planted).unwrap();
        let norm = normalize_edge_path(g, &s, &t).unwrap();
        prop_assert!(validate_edge_sequence(g, &norm).unwrap());
        prop_assert!(is_edge_walk(g, &norm.order, Mode::Path));
        let d = decompose_groups(&norm, &t);
        let mut seen = std::collections::HashSet::new();
        for w in d.groups.windows(2) {
            prop_assert!(seen.insert((w[0].ty, w[1].ty)), "transition repeated");
        }
        for ty in 0..t.k() {
            prop_assert!(d.special_of_type(&t, ty) <= 2 * t.k());
        }
    }

    #[test]
    fn hyper_yes_is_sound(seed in any::<u64>(), k in 1usize..3, m in 1usize..12) {
        let gen = generate_family(FamilySpec::HyperHs { n: 8, k, m, max_size: 3, seed }).unwrap();
        let h = gen.hypergraph().unwrap();
        let cfg = HyperSolveConfig { seed, ..HyperSolveConfig::default() };
        let r = decide_hyper_ehp(h, &gen.planted, &cfg).unwrap();
        let truth = solve_edge_ham_exact(h, Mode::Path, CAP).unwrap().is_yes();
        match r.answer() {
            Answer::Yes => {
                prop_assert!(truth);
                prop_assert!(validate_edge_sequence(h, r.edge_seq().unwrap()).unwrap());
            }
            Answer::No => prop_assert!(!truth),
            Answer::ProbablyNo => {}
        }
    }

    #[test]
    fn anchored_transfers_validate(seed in any::<u64>()) {
        let gen = generate_family(FamilySpec::Anchored { a: 5, b: 5, extra: 2, m: 6, seed }).unwrap();
        let g = gen.graph().unwrap();
        let (a, b): (Vec<usize>, Vec<usize>) = ((0..5).collect(), (5..10).collect());
        let (g2, site) = reduce_biclique_graph(g, &a, &b).unwrap();
        let dp = |h: &Graph| {
            let nice = make_nice(h, &min_fill_decomposition(h)).unwrap();
            des_dp_profiled(h, &nice).unwrap().0.des().cloned()
        };
        let s1 = dp(g);
        let s2 = dp(&g2);
        prop_assert_eq!(s1.is_some(), s2.is_some());
        if let Some(sol) = s1 {
            let r = repair_contain(g, &a, &b, &sol).unwrap();
            prop_assert!(validate_des(g, &r));
            prop_assert!(a.iter().chain(&b).all(|v| r.v0.contains(v)));
            let crosses = r.e0.iter().any(|&e| {
                let (u, v) = g.edge(e);
                (u < 5) != (v < 5) && u < 10 && v < 10
            });
            prop_assert!(crosses);
            let fwd = transfer_des_across_reduction(Direction::Forward, &site, g, &g2, &sol).unwrap();
            prop_assert!(validate_des(&g2, &fwd));
        }
        if let Some(sol) = s2 {
            let back = transfer_des_across_reduction(Direction::Backward, &site, g, &g2, &sol).unwrap();
            prop_assert!(validate_des(g, &back));
        }
    }
}

#[test]
fn reversed_path_stays_valid() {
    let g = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
    let s = EdgeSeq::path(vec![0, 1, 2]);
    assert!(validate_edge_sequence(&g, &s).unwrap());
    assert!(validate_edge_sequence(&g, &s.reversed()).unwrap());
}
