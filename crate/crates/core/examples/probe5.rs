// Ensemble feasibility measurement with the global stop criterion.
use djsparse::dcomp::{run_dcomp1, run_dcomp2};
use djsparse::djist::run_djist;
use djsparse::metrics::report;
use djsparse::model::{generate_instance_split, AlgoParams};
use djsparse::seeds::derive_seed;
use djsparse::Topology;
use std::time::Instant;

fn main() {
    let params = AlgoParams::default();
    let runs = 50usize;

    for master in [0xA5A5_0001_u64, 0xBEEF_0002] {
        println!("== master seed {master:#x}, {runs} runs per point ==");
        for &m in &[8usize, 12, 16, 20, 22, 24, 26] {
            let t0 = Instant::now();
            let mut a_reg = 0.0; // djist regular
            let mut a_com = 0.0; // djist complete
            let mut a_d1 = 0.0; // dcomp1 regular
            let mut a_d2c = 0.0; // dcomp2 complete
            let mut nonconv = 0;
            for run in 0..runs {
                let set = run / 5;
                let mat = run % 5;
                let sig_seed = derive_seed(master, &[m as u64, set as u64]);
                let mat_seed = derive_seed(master, &[m as u64, set as u64, mat as u64, 77]);
                let inst =
                    generate_instance_split(100, m, 10, 10, 0.0, sig_seed, mat_seed).unwrap();
                let topo_seed = derive_seed(master, &[m as u64, run as u64, 99]);
                let reg = Topology::random_regular(10, 5, topo_seed).unwrap();
                let com = Topology::complete(10).unwrap();

                let r1 = run_djist(&inst, &reg, &params).unwrap();
                if !r1.converged {
                    nonconv += 1;
                }
                a_reg += report(&inst, &r1).unwrap().ase;
                let r2 = run_djist(&inst, &com, &params).unwrap();
                if !r2.converged {
                    nonconv += 1;
                }
                a_com += report(&inst, &r2).unwrap().ase;
                a_d1 += report(&inst, &run_dcomp1(&inst, &reg, &params).unwrap())
                    .unwrap()
                    .ase;
                a_d2c += report(&inst, &run_dcomp2(&inst, &com, &params).unwrap())
                    .unwrap()
                    .ase;
            }
            let r = runs as f64;
            println!(
                "m={m:2}: djist-reg={:.5} djist-c={:.5} dcomp1-reg={:.5} dcomp2-c={:.5} nonconv={nonconv} ({:.0}s)",
                a_reg / r,
                a_com / r,
                a_d1 / r,
                a_d2c / r,
                t0.elapsed().as_secs_f64()
            );
        }
    }
}
