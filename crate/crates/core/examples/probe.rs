use djsparse::djadmm::run_djadmm;
use djsparse::dcomp::{run_dcomp1, run_dcomp2};
use djsparse::djist::run_djist;
use djsparse::metrics::report;
use djsparse::model::{generate_instance_split, AlgoParams};
use djsparse::seeds::derive_seed;
use djsparse::Topology;
use std::time::Instant;

fn main() {
    let master = 0xA5A5_0001_u64;
    let params = AlgoParams::default();
    let admm_params = AlgoParams::admm();
    let runs = 10usize;

    for &m in &[4usize, 8, 14, 22, 26, 30] {
        let mut ase_sum = 0.0;
        let mut bits_sum = 0.0;
        let mut rounds_sum = 0.0;
        let mut rse_sum = 0.0;
        let mut admm_rounds = 0.0;
        let mut admm_bits = 0.0;
        let mut admm_rse = 0.0;
        let mut admm_ase = 0.0;
        let mut d1_ase = 0.0;
        let mut d2_ase = 0.0;
        let mut max_sw = 0;
        let mut viol = 0u64;
        let t0 = Instant::now();
        for run in 0..runs {
            let set = run / 5;
            let mat = run % 5;
            let sig_seed = derive_seed(master, &[m as u64, set as u64]);
            let mat_seed = derive_seed(master, &[m as u64, set as u64, mat as u64, 77]);
            let inst = generate_instance_split(100, m, 10, 10, 0.0, sig_seed, mat_seed).unwrap();
            let topo_seed = derive_seed(master, &[m as u64, run as u64, 99]);
            let topo = Topology::random_regular(10, 5, topo_seed).unwrap();

            let res = run_djist(&inst, &topo, &params).unwrap();
            let met = report(&inst, &res).unwrap();
            ase_sum += met.ase;
            rse_sum += met.rse;
            bits_sum += res.total_bits() as f64;
            rounds_sum += res.rounds as f64;
            max_sw = max_sw.max(res.max_switches);
            viol += res.assumption_violations;
            if !res.converged {
                println!("  !! djist did not converge at m={m} run={run}");
            }

            let ares = run_djadmm(&inst, &topo, &admm_params).unwrap();
            let amet = report(&inst, &ares).unwrap();
            admm_rounds += ares.rounds as f64;
            admm_bits += ares.total_bits() as f64;
            admm_rse += amet.rse;
            admm_ase += amet.ase;

            let d1 = run_dcomp1(&inst, &topo, &params).unwrap();
            d1_ase += report(&inst, &d1).unwrap().ase;
            let d2 = run_dcomp2(&inst, &topo, &params).unwrap();
            d2_ase += report(&inst, &d2).unwrap().ase;
        }
        let r = runs as f64;
        println!(
            "m={m:2} | djist: ase={:.5} rse={:.2e} bits={:.0} rounds={:.0} max_sw={max_sw} viol={viol} | admm: ase={:.5} rse={:.2e} bits={:.0} rounds={:.0} | d1 ase={:.5} d2 ase={:.5} | {:.1}s",
            ase_sum / r,
            rse_sum / r,
            bits_sum / r,
            rounds_sum / r,
            admm_ase / r,
            admm_rse / r,
            admm_bits / r,
            admm_rounds / r,
            d1_ase / r,
            d2_ase / r,
            t0.elapsed().as_secs_f64()
        );
    }
}
