//! Monte Carlo calibration of desk-scale nibble configurations.
//!
//! For each candidate configuration, runs the bad-event-free restart driver
//! (at most 20 attempts) on 100 seeds and reports the single-run success
//! rate, the driver success rate, and the mean number of attempts.
//!
//! `cargo run --release -p pcf --example calibrate_nibble`

use pcf::graph::{gen_random_graph, gen_random_regular};
use pcf::greedy::partial_greedy;
use pcf::mindeg::{precolour_mindeg, MindegConfig};
use pcf::nibble::{make_params, restart_driver, Variant};
use pcf::pipeline::cor13_params;
use pcf::{Colouring, Graph, ThresholdSpec};
use pcf::nibble::NibbleParams;

struct Candidate {
    name: String,
    g: Graph,
    sigma0: Colouring,
    f0: ThresholdSpec,
    params: NibbleParams,
}

fn variant_a(name: &str, g: Graph, h: usize, eta: usize) -> Candidate {
    let (sigma0, _, f0) = partial_greedy(&g, h).unwrap();
    let params = cor13_params(h, g.max_degree(), g.min_degree(), eta).unwrap();
    Candidate {
        name: format!("A {name} h={h} eta={eta} d={:.0} m={}", params.d, params.m),
        g,
        sigma0,
        f0,
        params,
    }
}

fn variant_b(name: &str, g: Graph, h: usize, d: usize, eta: usize) -> Candidate {
    let pre = precolour_mindeg(&g, h, d, 7, &MindegConfig::default()).unwrap();
    let params = make_params(Variant::B, h, 2 * h, d as f64, eta, &g, pre.k).unwrap();
    Candidate {
        name: format!("B {name} h0={} eta={eta} d={d} m={}", 2 * h, params.m),
        f0: params.precolouring_spec(&g),
        g,
        sigma0: pre.colouring,
        params,
    }
}

fn median_degree(g: &Graph) -> usize {
    let mut degs: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    degs.sort_unstable();
    degs[degs.len() / 2]
}

fn main() {
    let mut candidates = vec![
        variant_a("reg(600,200)", gen_random_regular(600, 200, 1).unwrap(), 1, 1),
        variant_a("reg(600,200)", gen_random_regular(600, 200, 1).unwrap(), 1, 2),
        variant_a("gnp(600,0.3)", gen_random_graph(600, 0.3, 2).unwrap(), 2, 1),
        variant_a("gnp(400,0.25)", gen_random_graph(400, 0.25, 3).unwrap(), 1, 1),
    ];
    let gb = gen_random_graph(600, 0.25, 4).unwrap();
    let d = median_degree(&gb);
    candidates.push(variant_b("gnp(600,0.25)", gb.clone(), 10, d, 1));
    candidates.push(variant_b("gnp(600,0.25)", gb, 10, d, 2));
    let gb = gen_random_graph(400, 0.3, 5).unwrap();
    let d = median_degree(&gb);
    candidates.push(variant_b("gnp(400,0.3)", gb, 5, d, 1));

    for c in &candidates {
        let mut single = 0;
        let mut driver = 0;
        let mut attempts = 0;
        for seed in 0..100u64 {
            let out = restart_driver(&c.g, &c.sigma0, &c.f0, &c.params, 20, seed).unwrap();
            single += (out.attempts == 1 && out.accepted) as usize;
            driver += out.accepted as usize;
            attempts += out.attempts;
        }
        println!(
            "{:<60} single={:>3}% driver={:>3}% mean_attempts={:.2}",
            c.name,
            single,
            driver,
            attempts as f64 / 100.0
        );
    }
}
