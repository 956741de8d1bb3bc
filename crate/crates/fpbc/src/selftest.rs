//! Quick invariant checks behind `fpbc selftest`.

use std::collections::BTreeSet;

use fpbc_core::braid::{random_word, reduce_to_w4, synthesize, tableau_of, DEFAULT_LENGTH_CEILING};
use fpbc_core::braid_cost::{analytic_bound, exhaustive_fraction, CubicLattice};
use fpbc_core::circuit::random_circuit;
use fpbc_core::compiler::{compile, Executor};
use fpbc_core::dense::simulate_circuit_exact;
use fpbc_core::device::{
    exact_shift, junction_strings, project_low_energy, projected_matrix, projector_matrix, string_matrix, DeltaEps,
    DeviceParams, TriJunctionCouplings,
};
use fpbc_core::layout::{config_for_parity, readout_operator, uniform_couplings, LadderLayout};
use fpbc_core::rng::substream;
use rand::Rng;

type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn compiler_matches_dense() -> Check {
    for seed in 0..10 {
        let c = random_circuit(2, 2, 4, seed);
        let p = compile(&c).map_err(|e| e.to_string())?;
        let got = Executor::new(&p).exact_distribution().map_err(|e| e.to_string())?;
        let want = simulate_circuit_exact(&c).map_err(|e| e.to_string())?;
        let tv = got.total_variation(&want);
        ensure(tv < 1e-10, || format!("seed {seed}: TV {tv:e}"))?;
    }
    Ok(())
}

fn synthesis_round_trip() -> Check {
    let mut rng = substream(1, "selftest", 0);
    for k in 0..10 {
        let w = random_word(8, 5, 8, &mut rng);
        let t = tableau_of(&w, 8).map_err(|e| e.to_string())?;
        let s = synthesize(&t).map_err(|e| e.to_string())?;
        let r = reduce_to_w4(&s, DEFAULT_LENGTH_CEILING).map_err(|e| e.to_string())?;
        ensure(tableau_of(&s, 8).ok() == Some(t.clone()), || {
            format!("word {k}: synthesis")
        })?;
        ensure(r.max_weight() <= 4 && tableau_of(&r, 8).ok() == Some(t), || {
            format!("word {k}: reduction")
        })?;
    }
    Ok(())
}

fn layout_endpoints() -> Check {
    let l = LadderLayout::new(4).map_err(|e| e.to_string())?;
    for mask in 0u32..256 {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let s: BTreeSet<usize> = (0..8).filter(|j| mask >> j & 1 == 1).collect();
        let c = config_for_parity(&s, &l).map_err(|e| e.to_string())?;
        let q = readout_operator(&c, &l, &uniform_couplings(&l)).map_err(|e| e.to_string())?;
        ensure(q.q_string.modes().collect::<BTreeSet<_>>() == s, || {
            format!("target {s:?}")
        })?;
    }
    Ok(())
}

fn projection_oracle() -> Check {
    let mut rng = substream(2, "selftest", 0);
    for _ in 0..5 {
        let a = [
            rng.random::<f64>() - 0.5,
            rng.random::<f64>() - 0.5,
            rng.random::<f64>() - 0.5,
        ];
        let cpl = [TriJunctionCouplings::new(1.0, a)];
        let (p, g) = projector_matrix(&cpl).map_err(|e| e.to_string())?;
        for s in junction_strings(1, 0) {
            let lhs = &p * string_matrix(&s.embed(4, 0), &g) * p.adjoint();
            let proj = project_low_energy(&s, &cpl).map_err(|e| e.to_string())?;
            let rhs = projected_matrix(&proj, &cpl, &g).map_err(|e| e.to_string())? * &p;
            let diff = (lhs - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max);
            ensure(diff < 1e-12, || format!("{s}: {diff:e}"))?;
        }
    }
    Ok(())
}

fn dispersive_formula() -> Check {
    let d = DeviceParams {
        e_j: 50.0,
        e_c: 1.0,
        omega0: 18.0,
        g: 0.05,
        delta_eps: DeltaEps::Given([1e-4, 1e-4]),
    };
    let exact = exact_shift(&d, 1.0, 0);
    let approx = d.dispersive_constant() * d.delta_plus();
    let tol = 5.0 * (d.g / d.delta_omega()).powi(2);
    ensure(((exact - approx) / exact).abs() <= tol, || {
        format!("{exact} vs {approx}")
    })
}

fn fraction_bound() -> Check {
    let l = CubicLattice::new(8, 1, 2, 1).map_err(|e| e.to_string())?;
    let e = exhaustive_fraction(&l, 2).map_err(|e| e.to_string())?;
    let b = analytic_bound(8, 1, 1, 2);
    ensure(e.fraction() <= b && e.counterexamples == 0, || {
        format!("{} > {b}", e.fraction())
    })
}

pub fn run_all() -> Vec<(&'static str, Check)> {
    vec![
        ("compiler matches dense simulation", compiler_matches_dense()),
        ("braid synthesis round trip", synthesis_round_trip()),
        ("layout endpoint invariant", layout_endpoints()),
        ("low-energy projection", projection_oracle()),
        ("dispersive shift", dispersive_formula()),
        ("R-measurable fraction bound", fraction_bound()),
    ]
}
