use djsparse::djist::{stabilized_mean_indicator, Simulator};
use djsparse::model::{generate_instance_split, AlgoParams};
use djsparse::seeds::derive_seed;
use djsparse::Topology;

fn main() {
    let master = 0xA5A5_0001_u64;
    let params = AlgoParams::default();
    let m = 26usize;

    for run in 0..10 {
        let set = run / 5;
        let mat = run % 5;
        let sig_seed = derive_seed(master, &[m as u64, set as u64]);
        let mat_seed = derive_seed(master, &[m as u64, set as u64, mat as u64, 77]);
        let inst = generate_instance_split(100, m, 10, 10, 0.0, sig_seed, mat_seed).unwrap();
        let topo_seed = derive_seed(master, &[m as u64, run as u64, 99]);
        let topo = Topology::random_regular(10, 5, topo_seed).unwrap();

        let mut sim = Simulator::new(&inst, &topo, params).unwrap();
        while sim.round() < params.max_iters && !sim.all_stopped() {
            sim.step();
        }
        let truth = inst.support_indicator();
        let supports: Vec<Vec<bool>> = sim
            .states()
            .iter()
            .map(|s| s.support_bits.clone())
            .collect();
        let mut bad = 0;
        for v in 0..10 {
            for i in 0..100 {
                if supports[v][i] != truth[i] {
                    bad += 1;
                    let x = sim.states()[v].x[i];
                    let mean = stabilized_mean_indicator(&supports, &topo, v)[i];
                    let kind = if truth[i] { "MISS" } else { "FALSE+" };
                    let thr = params.lambda
                        * params.alpha
                        * (params.beta - params.alpha * x.abs() - mean).max(0.0);
                    let xstar = inst.x_star[v][i];
                    println!(
                        "run {run} node {v} comp {i} {kind}: x={x:+.5e} x*={xstar:+.4e} mean={mean:.2} thr={thr:.2e}"
                    );
                }
            }
        }
        if bad == 0 {
            println!("run {run}: clean");
        }
    }
}
