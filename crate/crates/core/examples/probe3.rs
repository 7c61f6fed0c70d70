use djsparse::djist::run_djist;
use djsparse::metrics::report;
use djsparse::model::{generate_instance_split, AlgoParams};
use djsparse::seeds::derive_seed;
use djsparse::Topology;
use std::time::Instant;

fn main() {
    let master = 0xA5A5_0001_u64;

    for &(eps, cap) in &[(1e-5_f64, 50_000_u32), (1e-7, 200_000), (1e-9, 500_000)] {
        let mut params = AlgoParams::default();
        params.epsilon = eps;
        params.max_iters = cap;
        for &m in &[22usize, 26] {
            let t0 = Instant::now();
            let mut ase_sum = 0.0;
            let mut nonconv = 0;
            let mut rounds = 0.0;
            for run in 0..10 {
                let set = run / 5;
                let mat = run % 5;
                let sig_seed = derive_seed(master, &[m as u64, set as u64]);
                let mat_seed = derive_seed(master, &[m as u64, set as u64, mat as u64, 77]);
                let inst =
                    generate_instance_split(100, m, 10, 10, 0.0, sig_seed, mat_seed).unwrap();
                let topo_seed = derive_seed(master, &[m as u64, run as u64, 99]);
                let topo = Topology::random_regular(10, 5, topo_seed).unwrap();
                let res = run_djist(&inst, &topo, &params).unwrap();
                if !res.converged {
                    nonconv += 1;
                }
                rounds += res.rounds as f64;
                ase_sum += report(&inst, &res).unwrap().ase;
            }
            println!(
                "eps={eps:.0e} m={m}: mean ase={:.6} nonconv={nonconv} rounds={:.0} ({:.0}s)",
                ase_sum / 10.0,
                rounds / 10.0,
                t0.elapsed().as_secs_f64()
            );
        }
    }
}
