use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use zkamp::amplify::{
    block_decompose, grover_rotation, iterative_schedule, iterative_schedule_full, min_iterations, phase_schedule,
    single_step_threshold, solve_phases, subspace_matrix, toy_lambda_circuit, trajectory, verify_block_identities,
    verify_subspace_closure, AmplitudeCircuit, PhasePair, SecondMeasurement,
};
use zkamp::protocol::{adversarial_verifier, real_view, Instance, REG_W};
use zkamp::registers::{haar_random_state, RegisterLayout, StateVector, DENSE_LIMIT};
use zkamp::simulator::{
    block_chain, norm_chain, sample_round, simulate_round, verify_eq1, verify_eq2, watrous_branches, SimulatorCircuit,
};
use zkamp::{Result, OP_TOL};

use crate::config::{CommandKind, RunConfig};
use crate::report::Record;

/// λ values tabulated by `phases`.
pub const PHASE_GRID: [f64; 8] = [0.05, 0.1, 0.2, 0.25, 1.0 / 3.0, 0.5, 0.75, 0.9];
const MAX_K: usize = 12;
const SCHEDULE_STEPS: usize = 5;
const ROTATION_TOL: f64 = 1e-12;

struct Trial<'a> {
    cfg: &'a RunConfig,
    index: usize,
    seed: u64,
}

impl Trial<'_> {
    fn instance(&self) -> &Instance {
        self.cfg.instance.as_ref().expect("instance commands carry an instance")
    }

    fn aux(&self) -> Result<StateVector> {
        let l = RegisterLayout::new(&[(REG_W, self.cfg.dims.w)])?;
        haar_random_state(&l, self.seed ^ 0x5a5a_5a5a)
    }

    fn simulator(&self) -> Result<SimulatorCircuit> {
        let inst = self.instance();
        let ver = adversarial_verifier(self.cfg.dims, inst.n(), self.seed)?;
        SimulatorCircuit::build(inst, &ver)
    }

    fn label(&self, check: &str) -> String {
        format!("{check}[trial={}]", self.index)
    }
}

/// Records shared by all trials, computed once.
pub fn global_records(cfg: &RunConfig) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    match cfg.command {
        CommandKind::Phases => {
            for &lambda in &PHASE_GRID {
                match min_iterations(lambda, MAX_K) {
                    Ok(sol) => {
                        let tag = format!("lambda={lambda:.6},k={}", sol.iterations);
                        let (a, b) = sol.phases.angles();
                        out.push(Record::bound(
                            format!("solve-phases[{tag}]"),
                            "phase-solver",
                            sol.fail_amplitude,
                            OP_TOL,
                        ));
                        out.push(Record::info(format!("phi-angle[{tag}]"), "phase-solver", a));
                        out.push(Record::info(format!("varphi-angle[{tag}]"), "phase-solver", b));
                    }
                    Err(zkamp::Error::Infeasible { .. }) => out.push(Record::info(
                        format!("infeasible[lambda={lambda:.6},k<={MAX_K}]"),
                        "phase-solver",
                        lambda,
                    )),
                    Err(e) => return Err(e),
                }
                let one_step = solve_phases(lambda, 1).is_ok();
                out.push(Record::info(
                    format!("single-step-feasible[lambda={lambda:.6}]"),
                    "phase-solver",
                    if one_step { 1.0 } else { 0.0 },
                ));
            }
            out.push(Record::info(
                "single-step-threshold",
                "phase-solver",
                single_step_threshold(1e-6),
            ));
            let grover = zkamp::amplify::evolve_two_dim(0.5, &[PhasePair::GROVER])?;
            out.push(Record::info(
                "grover-pair-fail-amplitude[lambda=0.5,k=1]",
                "phase-solver",
                grover[1].norm(),
            ));
        }
        CommandKind::Schedule => {
            let lambda = 1.0 / cfg.m as f64;
            let plane = iterative_schedule(lambda, SCHEDULE_STEPS)?;
            for (j, p) in plane.iter().enumerate() {
                out.push(Record::info(
                    format!("plane-probability[m={},step={j}]", cfg.m),
                    "measure-reflect-schedule",
                    *p,
                ));
            }
            let sm = SecondMeasurement::new(lambda);
            out.push(Record::bound(
                format!("second-probability-formula[m={}]", cfg.m),
                "measure-reflect-schedule",
                (plane[1] - sm.computed).abs(),
                OP_TOL,
            ));
            out.push(Record::info(
                format!("doubling-estimate[m={}]", cfg.m),
                "measure-reflect-schedule",
                sm.doubling_estimate,
            ));
            out.push(Record::info(
                format!("doubling-estimate-discrepancy[m={}]", cfg.m),
                "measure-reflect-schedule",
                sm.discrepancy(),
            ));
        }
        CommandKind::Blocks => {
            let lambda = 1.0 / cfg.m as f64;
            for l in [0.5, lambda] {
                let m = -subspace_matrix(l, PhasePair::GROVER)?;
                let dev = (m.map(|z| z.re) - grover_rotation(l))
                    .abs()
                    .max()
                    .max(m.iter().fold(0.0, |a, z| a.max(z.im.abs())));
                out.push(Record::bound(
                    format!("grover-rotation[lambda={l:.6}]"),
                    "grover-rotation",
                    dev,
                    ROTATION_TOL,
                ));
            }
        }
        _ => {}
    }
    Ok(out)
}

fn trial_records(t: &Trial) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    match t.cfg.command {
        CommandKind::VerifyEq1 => {
            out.push(Record::bound(
                t.label("slice-block-residual"),
                "slice-block-half",
                verify_eq1(&t.simulator()?)?,
                OP_TOL,
            ));
        }
        CommandKind::VerifyEq2 => {
            let sim = t.simulator()?;
            let aux = t.aux()?;
            let e = verify_eq2(&sim, &aux)?;
            out.push(Record::bound(
                t.label("eq2-residual"),
                "one-step-amplification",
                e.residual,
                OP_TOL,
            ));
            out.push(Record::bound(
                t.label("eq2-success-deficit"),
                "one-step-amplification",
                (1.0 - e.success_after).abs(),
                OP_TOL,
            ));
            out.push(Record::info(
                t.label("swapped-order-residual"),
                "one-step-amplification",
                e.swapped_residual,
            ));
            out.push(Record::info(
                t.label("swapped-order-success"),
                "one-step-amplification",
                e.swapped_success,
            ));
            out.push(Record::bound(
                t.label("block-chain-residual"),
                "block-chain",
                block_chain(&sim, &aux)?.max(),
                OP_TOL,
            ));
            let chain = norm_chain(&sim, &aux)?;
            for (k, r) in chain.residuals().iter().enumerate() {
                out.push(Record::bound(
                    t.label(&format!("norm-chain-step-{}", k + 1)),
                    "norm-chain",
                    *r,
                    OP_TOL,
                ));
            }
        }
        CommandKind::ZkCheck => {
            let sim = t.simulator()?;
            let aux = t.aux()?;
            let d = real_view(t.instance(), sim.verifier(), &aux)?.trace_distance(&simulate_round(&sim, &aux)?)?;
            out.push(Record::bound(t.label("trace-distance"), "perfect-zk", d, OP_TOL));
            let mut rng = ChaCha8Rng::seed_from_u64(t.seed);
            let s = sample_round(&sim, &aux, &mut rng)?;
            out.push(Record::bound(
                t.label("sampled-round-rejected"),
                "perfect-zk",
                if s.accepted { 0.0 } else { 1.0 },
                0.0,
            ));
        }
        CommandKind::Watrous => {
            let sim = t.simulator()?;
            let aux = t.aux()?;
            let w = watrous_branches(&sim, &aux)?;
            out.push(Record::bound(
                t.label("first-success-deviation"),
                "measure-reflect",
                (w.success_prob - 0.5).abs(),
                OP_TOL,
            ));
            out.push(Record::bound(
                t.label("reflected-fidelity-deficit"),
                "measure-reflect",
                1.0 - w.fidelity(),
                OP_TOL,
            ));
            out.push(Record::bound(
                t.label("reflected-phase-deviation"),
                "measure-reflect",
                (w.overlap + Complex64::new(1.0, 0.0)).norm(),
                OP_TOL,
            ));
            let mut rng = ChaCha8Rng::seed_from_u64(t.seed);
            let (first, _) = zkamp::simulator::watrous_round(&sim, &aux, &mut rng)?;
            out.push(Record::info(
                t.label("sampled-first-success"),
                "measure-reflect",
                if first { 1.0 } else { 0.0 },
            ));
        }
        CommandKind::Blocks => {
            let toy = toy_lambda_circuit(t.cfg.m, t.cfg.dims, t.seed)?;
            let mut circuits: Vec<(String, Box<dyn AmplitudeCircuit>)> =
                vec![(format!("toy-m={}", t.cfg.m), Box::new(toy))];
            let gmw = t.simulator()?;
            if gmw.layout().total_dim() <= DENSE_LIMIT {
                circuits.insert(0, ("gmw".to_string(), Box::new(gmw)));
            }
            for (name, c) in &circuits {
                let b = block_decompose(c.a_op(), c.pi_op())?;
                out.push(Record::info(
                    t.label(&format!("lambda[{name}]")),
                    "block-identities",
                    b.lambda,
                ));
                for (k, r) in verify_block_identities(&b).iter().enumerate() {
                    out.push(Record::bound(
                        t.label(&format!("identity-{}[{name}]", k + 1)),
                        "block-identities",
                        *r,
                        OP_TOL,
                    ));
                }
                let aux = haar_random_state(&c.aux_layout(), t.seed ^ 0x5a5a_5a5a)?;
                for (pname, p) in [("grover", PhasePair::GROVER), ("imaginary", PhasePair::IMAGINARY)] {
                    let r = verify_subspace_closure(c.as_ref(), &aux, p)?.residual();
                    out.push(Record::bound(
                        t.label(&format!("closure-{pname}[{name}]")),
                        "invariant-plane",
                        r,
                        OP_TOL,
                    ));
                }
                let worst = trajectory(c.as_ref(), &aux, &[PhasePair::GROVER; 10])?
                    .iter()
                    .fold(0.0f64, |a, p| a.max(p.leakage).max(p.disagreement()));
                out.push(Record::bound(
                    t.label(&format!("ten-step-leakage[{name}]")),
                    "invariant-plane",
                    worst,
                    OP_TOL,
                ));
            }
        }
        CommandKind::Phases => {
            let lambda = 1.0 / t.cfg.m as f64;
            let sol = min_iterations(lambda, MAX_K)?;
            let toy = toy_lambda_circuit(t.cfg.m, t.cfg.dims, t.seed)?;
            let aux = haar_random_state(&toy.aux_layout(), t.seed ^ 0x5a5a_5a5a)?;
            let last = trajectory(&toy, &aux, &phase_schedule(sol.iterations, sol.phases))?;
            let fail = last.last().map(|p| p.full[1].norm()).unwrap_or(f64::NAN);
            out.push(Record::bound(
                t.label(&format!("full-space-fail[m={},k={}]", t.cfg.m, sol.iterations)),
                "phase-solver",
                fail,
                OP_TOL,
            ));
        }
        CommandKind::Schedule => {
            let lambda = 1.0 / t.cfg.m as f64;
            let toy = toy_lambda_circuit(t.cfg.m, t.cfg.dims, t.seed)?;
            let aux = haar_random_state(&toy.aux_layout(), t.seed ^ 0x5a5a_5a5a)?;
            let full = iterative_schedule_full(&toy, &aux, SCHEDULE_STEPS)?;
            let plane = iterative_schedule(lambda, SCHEDULE_STEPS)?;
            let agree = full.iter().zip(&plane).fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
            out.push(Record::bound(
                t.label("full-vs-plane"),
                "measure-reflect-schedule",
                agree,
                OP_TOL,
            ));
            out.push(Record::bound(
                t.label("first-probability"),
                "measure-reflect-schedule",
                (full[0] - lambda).abs(),
                OP_TOL,
            ));
            let below = full.iter().fold(0.0f64, |a, &p| a.max(lambda - p));
            out.push(Record::bound(
                t.label("at-least-lambda"),
                "measure-reflect-schedule",
                below,
                OP_TOL,
            ));
        }
    }
    Ok(out)
}

/// Runs every trial, in parallel, returning records in trial order with the
/// wall time of each trial.
pub fn run_trials(cfg: &RunConfig) -> Result<Vec<(Vec<Record>, f64)>> {
    (0..cfg.trials)
        .into_par_iter()
        .map(|index| {
            let start = Instant::now();
            let t = Trial {
                cfg,
                index,
                seed: cfg.trial_seed(index),
            };
            trial_records(&t).map(|r| (r, start.elapsed().as_secs_f64()))
        })
        .collect()
}
