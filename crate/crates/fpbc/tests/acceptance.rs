//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and exits non-zero on any failure.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_PI_4;
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;

use fpbc::parallel::estimate_fraction_parallel;
use fpbc_core::braid::{random_word, reduce_to_w4, synthesize, tableau_of, BraidWord};
use fpbc_core::braid_cost::{analytic_bound, exhaustive_fraction, CubicLattice};
use fpbc_core::circuit::random_circuit;
use fpbc_core::compiler::oracle::{eliminated_distribution, gadget_fidelity};
use fpbc_core::compiler::{all_branches, compile, insert_gadgets, prepend_dummies, Executor, Step};
use fpbc_core::dense::{simulate_circuit_exact, StateVector};
use fpbc_core::device::{
    analytic_log_slope, charge_dispersion, exact_shift, fitted_log_slope, junction_register_modes, junction_strings,
    project_low_energy, projected_matrix, projector_matrix, string_matrix, DeltaEps, DeviceParams, SuppressionBase,
    TriJunctionCouplings,
};
use fpbc_core::layout::{
    check_realizable, config_for_parity, config_for_parity_with, omega_shift, readout_operator, uniform_couplings,
    LadderLayout, ShortestCatalog,
};
use fpbc_core::rng::substream;
use fpbc_core::MajoranaString;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn circuit_corpus() -> Vec<fpbc_core::circuit::FermionicCircuit> {
    let mut out = vec![];
    for seed in 0..25u64 {
        for n in 1..=3 {
            for t in 1..=3 {
                out.push(random_circuit(n, t, 2 + (seed % 5) as usize, seed));
            }
        }
    }
    out
}

fn oracle_equivalence() -> Outcome {
    let corpus = circuit_corpus();
    let mut worst = 0.0f64;
    for (i, c) in corpus.iter().enumerate() {
        let want = simulate_circuit_exact(c).map_err(|e| e.to_string())?;
        let p = compile(c).map_err(|e| format!("circuit {i}: {e}"))?;
        let got = Executor::new(&p).exact_distribution().map_err(|e| e.to_string())?;
        worst = worst.max(got.total_variation(&want));
    }
    if worst <= 1e-10 {
        Ok(format!("{} circuits, max TV {worst:.1e}", corpus.len()))
    } else {
        Err(format!("max TV {worst:.3e}"))
    }
}

fn gadget_identity() -> Outcome {
    let mut rng = substream(2, "acceptance", 0);
    let mut worst = 1.0f64;
    let mut runs = 0;
    for n in 1..=3usize {
        let modes = 2 * n + 2;
        for _ in 0..8 {
            let amps = (0..1usize << (n + 1))
                .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect();
            let raw = StateVector::from_amplitudes(modes, amps);
            let sector = if rng.random::<bool>() { 1 } else { -1 };
            let psi = match raw.project(&MajoranaString::total_parity(modes), sector) {
                Ok((_, Some(p))) => p,
                _ => return Err("could not prepare a parity-definite state".into()),
            };
            let a = rng.random_range(0..modes);
            let b = (a + rng.random_range(1..modes)) % modes;
            for t in 1..=3 {
                for j in 0..t {
                    for f in gadget_fidelity(&psi, t, sector, j, a, b).map_err(|e| e.to_string())? {
                        let f = f.ok_or("an outcome had zero probability")?;
                        worst = worst.min(f);
                        runs += 1;
                    }
                }
            }
        }
    }
    if worst >= 1.0 - 1e-10 {
        Ok(format!("{runs} gadget runs, min fidelity 1 - {:.1e}", 1.0 - worst))
    } else {
        Err(format!("min fidelity {worst}"))
    }
}

fn measurement_budget() -> Outcome {
    let corpus = circuit_corpus();
    let mut branches = 0;
    for (i, c) in corpus.iter().enumerate() {
        let p = compile(c).map_err(|e| e.to_string())?;
        for b in all_branches(&p).map_err(|e| e.to_string())? {
            branches += 1;
            let q = b.stats().quantum;
            if q > c.t {
                return Err(format!("circuit {i}: {q} quantum measurements for t = {}", c.t));
            }
        }
    }
    Ok(format!("{branches} branches over {} circuits", corpus.len()))
}

fn sweep_replacement() -> Outcome {
    let mut instances = 0;
    let mut worst = 0.0f64;
    for seed in 0..60u64 {
        for (n, t) in [(1, 2), (2, 2), (2, 3), (3, 3)] {
            let c = random_circuit(n, t, 4, 1000 + seed);
            let p = compile(&c).map_err(|e| e.to_string())?;
            let coins = p
                .default_branch
                .steps
                .iter()
                .filter(|s| matches!(s, Step::Coin { .. }))
                .count();
            if !(1..=3).contains(&coins) {
                continue;
            }
            let seq = prepend_dummies(insert_gadgets(&c).map_err(|e| e.to_string())?);
            let measured = eliminated_distribution(&seq).map_err(|e| e.to_string())?;
            let compiled = Executor::new(&p).exact_distribution().map_err(|e| e.to_string())?;
            worst = worst.max(measured.total_variation(&compiled));
            instances += 1;
        }
    }
    if instances < 20 {
        Err(format!("only {instances} instances with 1 to 3 coin flips"))
    } else if worst <= 1e-10 {
        Ok(format!("{instances} instances, max TV {worst:.1e}"))
    } else {
        Err(format!("max TV {worst:.3e}"))
    }
}

/// Columns `U|b⟩` of a braid word, built by direct state-vector evolution.
fn unitary_columns(word: &BraidWord, modes: usize) -> Vec<StateVector> {
    (0..1u64 << (modes / 2))
        .map(|b| {
            let mut s = StateVector::basis(modes, b).unwrap();
            for f in word.factors.iter().rev() {
                s.apply_exponential(f.generator(), f.quarter_turns() as f64 * FRAC_PI_4)
                    .unwrap();
            }
            s
        })
        .collect()
}

fn overlap(a: &BraidWord, b: &BraidWord, modes: usize) -> f64 {
    let ua = unitary_columns(a, modes);
    let ub = unitary_columns(b, modes);
    let tr: Complex64 = ua.iter().zip(&ub).map(|(x, y)| x.inner(y)).sum();
    tr.norm() / ua.len() as f64
}

fn synthesis_round_trip() -> Outcome {
    let mut rng = substream(5, "acceptance", 0);
    let mut matrix_checks = 0;
    let mut worst = 0.0f64;
    let mut words = 0;
    for k in 0..120 {
        let modes = 4 + 2 * (k % 5);
        let len = rng.random_range(1..=12);
        let w = random_word(modes, len, modes, &mut rng);
        let target = tableau_of(&w, modes).map_err(|e| e.to_string())?;
        let s = synthesize(&target).map_err(|e| e.to_string())?;
        if tableau_of(&s, modes).map_err(|e| e.to_string())? != target {
            return Err(format!("word {k}: synthesized tableau differs"));
        }
        let r = reduce_to_w4(&s, fpbc_core::braid::DEFAULT_LENGTH_CEILING).map_err(|e| e.to_string())?;
        if r.max_weight() > 4 || tableau_of(&r, modes).map_err(|e| e.to_string())? != target {
            return Err(format!("word {k}: weight-4 reduction changed the tableau"));
        }
        if modes <= 8 {
            worst = worst.max((1.0 - overlap(&w, &s, modes)).abs());
            worst = worst.max((1.0 - overlap(&w, &r, modes)).abs());
            matrix_checks += 1;
        }
        words += 1;
    }
    if worst <= 1e-10 {
        Ok(format!(
            "{words} words, {matrix_checks} matrix overlaps, max |1 - overlap| {worst:.1e}"
        ))
    } else {
        Err(format!("max |1 - overlap| {worst:.3e}"))
    }
}

fn endpoint_check(layout: &LadderLayout, s: &BTreeSet<usize>) -> Result<(), String> {
    let cpl = uniform_couplings(layout);
    let configs = [
        config_for_parity(s, layout),
        config_for_parity_with(s, layout, &ShortestCatalog),
    ];
    for c in configs {
        let c = c.map_err(|e| format!("{s:?}: {e}"))?;
        check_realizable(layout, &c).map_err(|e| format!("{s:?}: {e}"))?;
        let q = readout_operator(&c, layout, &cpl).map_err(|e| e.to_string())?;
        if q.q_string.modes().collect::<BTreeSet<_>>() != *s {
            return Err(format!("{s:?}: support {}", q.q_string));
        }
    }
    Ok(())
}

fn layout_endpoints() -> Outcome {
    let mut checked = 0u64;
    for columns in 2..=6usize {
        let layout = LadderLayout::new(columns).map_err(|e| e.to_string())?;
        let m = 2 * columns;
        for mask in 0u64..1 << m {
            if mask.count_ones() % 2 == 0 {
                let s = (0..m).filter(|j| mask >> j & 1 == 1).collect();
                endpoint_check(&layout, &s)?;
                checked += 1;
            }
        }
    }
    let layout = LadderLayout::new(10).map_err(|e| e.to_string())?;
    let mut rng = substream(6, "acceptance", 0);
    for _ in 0..10_000 {
        let mut s: BTreeSet<usize> = (0..20).filter(|_| rng.random::<bool>()).collect();
        if s.len() % 2 == 1 {
            let x = rng.random_range(0..20);
            if !s.remove(&x) {
                s.insert(x);
            }
        }
        endpoint_check(&layout, &s)?;
        checked += 1;
    }
    Ok(format!("{checked} subsets, two path catalogs each"))
}

fn dispersive_sweep() -> Outcome {
    let mut rng = substream(7, "acceptance", 0);
    let layout = LadderLayout::new(4).map_err(|e| e.to_string())?;
    let mut worst_margin = f64::INFINITY;
    for i in 0..100 {
        let e_j = rng.random_range(30.0..90.0);
        let e_c = rng.random_range(0.5..1.5);
        let dw: f64 = rng.random_range(0.5..3.0) * if rng.random::<bool>() { 1.0 } else { -1.0 };
        let g = rng.random_range(0.005..0.05) * dw.abs();
        let delta_eps = if i % 2 == 0 {
            DeltaEps::Derive
        } else {
            DeltaEps::Given([rng.random_range(1e-6..1e-3), rng.random_range(1e-6..1e-3)])
        };
        let mut device = DeviceParams {
            e_j,
            e_c,
            omega0: 0.0,
            g,
            delta_eps,
        };
        device.omega0 = device.omega_transmon() - dw;
        let cpl: Vec<_> = (0..layout.mzm_count())
            .map(|_| {
                let a = [
                    0.2 + rng.random::<f64>(),
                    0.2 + rng.random::<f64>(),
                    0.2 + rng.random::<f64>(),
                ];
                TriJunctionCouplings::new(1.0, a)
            })
            .collect();
        let s: BTreeSet<usize> = [0, 3, 4, 7].into_iter().take(2 + 2 * (i % 2)).collect();
        let config = config_for_parity(&s, &layout).map_err(|e| e.to_string())?;
        let formula = omega_shift(&config, &layout, &cpl, &device).map_err(|e| e.to_string())?;
        let q = readout_operator(&config, &layout, &cpl).map_err(|e| e.to_string())?;
        let exact = exact_shift(&device, q.scalar.abs(), 0);
        let rel = ((exact.abs() - formula.abs()) / exact).abs();
        let tol = 5.0 * (g / dw).powi(2) + 5.0 * (device.delta_plus() / dw).powi(2);
        if rel > tol {
            return Err(format!("point {i}: relative error {rel:.3e} > {tol:.3e}"));
        }
        worst_margin = worst_margin.min(tol / rel.max(f64::MIN_POSITIVE));
    }
    Ok(format!("100 points, smallest tolerance/error ratio {worst_margin:.1}"))
}

fn projection_oracle() -> Outcome {
    let mut rng = substream(8, "acceptance", 0);
    let mut worst = 0.0f64;
    let mut strings = 0;
    for _ in 0..50 {
        for junctions in 1..=2 {
            let cpl: Vec<_> = (0..junctions)
                .map(|_| {
                    let a = [
                        rng.random::<f64>() - 0.5,
                        rng.random::<f64>() - 0.5,
                        rng.random::<f64>() - 0.5,
                    ];
                    TriJunctionCouplings::new(rng.random_range(0.5..2.0), a)
                })
                .collect();
            let (p, g) = projector_matrix(&cpl).map_err(|e| e.to_string())?;
            let total = junction_register_modes(junctions);
            let mut all: Vec<MajoranaString> = (0..junctions).flat_map(|j| junction_strings(junctions, j)).collect();
            if junctions == 2 {
                let (a, b) = (junction_strings(2, 0), junction_strings(2, 1));
                for x in &a {
                    for y in &b {
                        all.push(x.multiply(y).map_err(|e| e.to_string())?);
                    }
                }
            }
            {
                for s in all {
                    let lhs = &p * string_matrix(&s.embed(total, 0), &g) * p.adjoint();
                    let proj = project_low_energy(&s, &cpl).map_err(|e| e.to_string())?;
                    let rhs = projected_matrix(&proj, &cpl, &g).map_err(|e| e.to_string())? * &p;
                    let diff = (lhs - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max);
                    worst = worst.max(diff);
                    strings += 1;
                }
            }
        }
    }
    if worst <= 1e-12 {
        Ok(format!("{strings} projected strings, max entry error {worst:.1e}"))
    } else {
        Err(format!("max entry error {worst:.3e}"))
    }
}

fn fraction_bound() -> Outcome {
    let mut lattices = 0;
    for m in 2..=16usize {
        for d in 1..=4u32 {
            let sites = m.pow(d);
            if sites > 16 {
                break;
            }
            for c in 1..=16 / sites {
                for r in 1..=m {
                    for big_r in 1..=m {
                        if m % (r * big_r) != 0 {
                            continue;
                        }
                        let Ok(l) = CubicLattice::new(m, d as usize, c, r) else {
                            continue;
                        };
                        let e = exhaustive_fraction(&l, big_r).map_err(|e| e.to_string())?;
                        let bound = analytic_bound(m, d as usize, r, big_r);
                        if e.fraction() > bound {
                            return Err(format!("m={m} d={d} c={c} r={r} R={big_r}: {} > {bound}", e.fraction()));
                        }
                        if e.counterexamples > 0 {
                            return Err(format!(
                                "m={m} d={d} c={c} r={r} R={big_r}: even-division counterexample"
                            ));
                        }
                        lattices += 1;
                    }
                }
            }
        }
    }
    let mut samples = 0;
    let mut notes = vec![];
    for (m, d) in [(8, 1), (12, 1), (4, 2), (6, 2)] {
        let l = CubicLattice::new(m, d, 2, 1).map_err(|e| e.to_string())?;
        let t = estimate_fraction_parallel(&l, 2, 100_000, 9).map_err(|e| e.to_string())?;
        let (p, se) = t.estimate();
        let bound = analytic_bound(m, d, 1, 2);
        if p > bound + 3.0 * se {
            return Err(format!("({m},{d}): estimate {p} above bound {bound}"));
        }
        if t.counterexamples > 0 {
            return Err(format!(
                "({m},{d}): {} even-division counterexamples",
                t.counterexamples
            ));
        }
        samples += t.trials;
        notes.push(format!("({m},{d}) {p:.4}<={bound:.4}"));
    }
    Ok(format!(
        "{lattices} exhaustive lattices; Monte Carlo {}; {samples} samples, 0 counterexamples",
        notes.join(" ")
    ))
}

fn scaling_law() -> Outcome {
    let base = SuppressionBase::default();
    let fit = fitted_log_slope(1..=30, &base, charge_dispersion);
    let want = analytic_log_slope(&base);
    let rel = ((fit - want) / want).abs();
    if rel <= 0.02 {
        Ok(format!("fitted {fit:.4}, analytic {want:.4}, relative error {rel:.2e}"))
    } else {
        Err(format!("fitted {fit:.4}, analytic {want:.4}"))
    }
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence", oracle_equivalence),
        ("gadget identity", gadget_identity),
        ("measurement budget", measurement_budget),
        ("measured replacements", sweep_replacement),
        ("braid synthesis round trip", synthesis_round_trip),
        ("layout endpoint invariant", layout_endpoints),
        ("dispersive shift sweep", dispersive_sweep),
        ("low-energy projection", projection_oracle),
        ("measurable fraction bound", fraction_bound),
        ("charge dispersion scaling", scaling_law),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
