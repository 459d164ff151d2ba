use edgeham_core::cert::{validate_des, DesSolution};
use edgeham_core::cw::{
    big_joins, decide_ehc_cw, eliminate_big_joins_traced, eliminate_gradual_bicliques_traced, gradual_sites,
    random_cwe, reduce_biclique_graph, repair_contain, transfer_des_across_reduction, Direction,
};
use edgeham_core::generate::{generate_family, FamilySpec};
use edgeham_core::rng::stream_rng;
use edgeham_core::tw::{des_dp, make_nice, min_fill_decomposition};
use edgeham_core::Graph;
use rand::seq::SliceRandom;
use rand::Rng;

/// Some DES of `g`, found on a randomly relabelled copy so different seeds
/// give different solutions.
fn varied_des(g: &Graph, seed: u64) -> Option<DesSolution> {
    let mut rng = stream_rng(seed, 99);
    let mut perm: Vec<usize> = (0..g.n()).collect();
    perm.shuffle(&mut rng);
    let mut order: Vec<usize> = (0..g.m()).collect();
    order.shuffle(&mut rng);
    let h = Graph::new(g.n(), order.iter().map(|&e| {
        let (u, v) = g.edge(e);
        (perm[u], perm[v])
    }))
    .unwrap();
    let nice = make_nice(&h, &min_fill_decomposition(&h)).unwrap();
    let sol = des_dp(&h, &nice).unwrap().des().cloned()?;
    if sol.e0.is_empty() {
        let inv = perm.iter().position(|&p| Some(&p) == sol.v0.iter().next()).unwrap();
        return Some(DesSolution::single_vertex(inv));
    }
    Some(DesSolution::from_edges(g, sol.e0.iter().map(|&f| order[f])))
}

fn has_des(g: &Graph) -> bool {
    let nice = make_nice(g, &min_fill_decomposition(g)).unwrap();
    des_dp(g, &nice).unwrap().is_yes()
}

fn anchored(seed: u64) -> Graph {
    let mut rng = stream_rng(seed, 7);
    let extra = rng.gen_range(0..4);
    let spec = FamilySpec::Anchored {
        a: 5,
        b: 5,
        extra,
        m: rng.gen_range(0..=(6 + 2 * extra)),
        seed,
    };
    generate_family(spec).unwrap().graph().unwrap().clone()
}

#[test]
fn transfers_on_anchored_graphs() {
    let (a, b): (Vec<usize>, Vec<usize>) = ((0..5).collect(), (5..10).collect());
    let mut transferred = 0;
    for seed in 0..80 {
        let g = anchored(seed);
        let (g2, site) = reduce_biclique_graph(&g, &a, &b).unwrap();
        assert_eq!(has_des(&g), has_des(&g2), "seed {seed}");
        for s in 0..3 {
            if let Some(sol) = varied_des(&g, seed * 10 + s) {
                let r = repair_contain(&g, &a, &b, &sol).unwrap();
                assert!(a.iter().chain(&b).all(|v| r.v0.contains(v)));
                let fwd = transfer_des_across_reduction(Direction::Forward, &site, &g, &g2, &sol).unwrap();
                assert!(validate_des(&g2, &fwd));
                transferred += 1;
            }
            if let Some(sol) = varied_des(&g2, seed * 10 + s) {
                let back = transfer_des_across_reduction(Direction::Backward, &site, &g, &g2, &sol).unwrap();
                assert!(validate_des(&g, &back));
                transferred += 1;
            }
        }
    }
    assert!(transferred > 200);
}

fn width(g: &Graph) -> usize {
    min_fill_decomposition(g).width()
}

#[test]
fn rewrites_on_large_random_expressions() {
    let mut fired = 0;
    for seed in 0..60 {
        let e = random_cwe(2, 18, seed).unwrap();
        let (bj, recs) = eliminate_big_joins_traced(&e);
        assert!(big_joins(&bj).is_empty());
        let (gr, recs2) = eliminate_gradual_bicliques_traced(&bj);
        assert!(gradual_sites(&gr).is_empty());
        assert!(gr.k <= e.k + 4);
        for r in recs.iter().chain(&recs2) {
            assert!(r.edges_after < r.edges_before, "seed {seed}");
            if width(&r.after) > 6 {
                continue;
            }
            fired += 1;
            let Some(sol) = varied_des(&r.after, seed) else {
                if width(&r.before) <= 6 {
                    assert!(!has_des(&r.before), "seed {seed}");
                }
                continue;
            };
            let back = transfer_des_across_reduction(Direction::Backward, &r.site, &r.before, &r.after, &sol).unwrap();
            assert!(validate_des(&r.before, &back));
            let fwd = transfer_des_across_reduction(Direction::Forward, &r.site, &r.before, &r.after, &back).unwrap();
            assert!(validate_des(&r.after, &fwd));
        }
        if width(&gr.eval().unwrap().graph) <= 6 {
            let (ans, rep) = decide_ehc_cw(&e).unwrap();
            if rep.original_graph.m() >= 3 && width(&rep.original_graph) <= 6 {
                assert_eq!(ans, has_des(&rep.original_graph), "seed {seed}");
            }
        }
    }
    assert!(fired >= 10, "only {fired} rewrites checked");
}
