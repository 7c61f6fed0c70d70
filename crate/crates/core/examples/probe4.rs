// Variant study: stopping model and mean convention at m=22.
use djsparse::functional::landweber_z;
use djsparse::model::{generate_instance_split, AlgoParams, ProblemInstance};
use djsparse::seeds::derive_seed;
use djsparse::thresholding::{mcp_weight, soft};
use djsparse::Topology;
use nalgebra::DVector;

#[derive(Clone, Copy, PartialEq)]
enum Stop {
    Freeze,
    Global,
}

#[derive(Clone, Copy, PartialEq)]
enum Mean {
    WithSelf,
    NeighborsOnly,
}

fn run_variant(
    inst: &ProblemInstance,
    topo: &Topology,
    params: &AlgoParams,
    stop: Stop,
    mean: Mean,
) -> (Vec<Vec<bool>>, u32, bool) {
    let nv = inst.num_nodes;
    let n = inst.n;
    let mut x: Vec<DVector<f64>> = (0..nv)
        .map(|v| inst.sensing[v].tr_mul(&inst.measurements[v]))
        .collect();
    // published bits (synchronous): start all ones
    let mut bits: Vec<Vec<bool>> = vec![vec![true; n]; nv];
    let mut counts: Vec<Vec<u32>> = vec![vec![0; n]; nv];
    let mut stopped = vec![false; nv];
    let mut round = 0u32;
    while round < params.max_iters {
        let mut new_bits = bits.clone();
        let mut all_quiet = true;
        for v in 0..nv {
            if stop == Stop::Freeze && stopped[v] {
                continue;
            }
            let z = landweber_z(&x[v], &inst.sensing[v], &inst.measurements[v], params.tau);
            let mut max_delta = 0.0_f64;
            for i in 0..n {
                let old = x[v][i];
                let (cnt, den) = {
                    let mut c = 0usize;
                    for &u in topo.neighbors(v) {
                        c += bits[u][i] as usize;
                    }
                    match mean {
                        Mean::WithSelf => (c + (old != 0.0) as usize, topo.degree_inclusive(v)),
                        Mean::NeighborsOnly => (c, topo.neighbors(v).len()),
                    }
                };
                let mi = cnt as f64 / den as f64;
                let w = mcp_weight(old.abs(), mi.min(1.0), params.alpha, params.beta);
                let mut new = soft(z[i], params.lambda * params.alpha * w);
                if old == 0.0 {
                    if counts[v][i] >= params.p {
                        new = 0.0;
                    } else if new != 0.0 {
                        counts[v][i] += 1;
                    }
                }
                max_delta = max_delta.max((new - old).abs());
                x[v][i] = new;
                new_bits[v][i] = new != 0.0;
            }
            if max_delta < params.epsilon {
                stopped[v] = true;
            } else {
                all_quiet = false;
            }
        }
        bits = new_bits;
        round += 1;
        match stop {
            Stop::Freeze => {
                if stopped.iter().all(|&s| s) {
                    return (bits, round, true);
                }
            }
            Stop::Global => {
                if all_quiet {
                    return (bits, round, true);
                }
            }
        }
    }
    (bits, round, false)
}

fn main() {
    let master = 0xA5A5_0001_u64;
    let params = AlgoParams::default();
    let m = 22usize;
    let runs = 20;

    for (label, stop, mean) in [
        ("freeze+self   ", Stop::Freeze, Mean::WithSelf),
        ("global+self   ", Stop::Global, Mean::WithSelf),
        ("freeze+noself ", Stop::Freeze, Mean::NeighborsOnly),
        ("global+noself ", Stop::Global, Mean::NeighborsOnly),
    ] {
        let mut bad_positions = 0usize;
        let mut bad_nodes = 0usize;
        let mut nonconv = 0;
        let mut rounds = 0.0;
        for run in 0..runs {
            let set = run / 5;
            let mat = run % 5;
            let sig_seed = derive_seed(master, &[m as u64, set as u64]);
            let mat_seed = derive_seed(master, &[m as u64, set as u64, mat as u64, 77]);
            let inst = generate_instance_split(100, m, 10, 10, 0.0, sig_seed, mat_seed).unwrap();
            let topo_seed = derive_seed(master, &[m as u64, run as u64, 99]);
            let topo = Topology::random_regular(10, 5, topo_seed).unwrap();
            let (bits, r, conv) = run_variant(&inst, &topo, &params, stop, mean);
            if !conv {
                nonconv += 1;
            }
            rounds += r as f64;
            let truth = inst.support_indicator();
            for v in 0..10 {
                let bad = (0..100).filter(|&i| bits[v][i] != truth[i]).count();
                bad_positions += bad;
                if bad > 0 {
                    bad_nodes += 1;
                }
            }
        }
        println!(
            "{label}: bad_positions={bad_positions} bad_nodes={bad_nodes}/{} nonconv={nonconv} rounds={:.0} ase={:.5}",
            runs * 10,
            rounds / runs as f64,
            bad_positions as f64 / (runs * 1000) as f64
        );
    }
}
