//! Acceptance gate. Every criterion is an exact-equality check; each prints
//! one PASS/FAIL line, and the process fails if any criterion fails.

use std::collections::BTreeMap;
use std::panic;
use std::time::Instant;

use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use confhom::autaction::residual_action_dims;
use confhom::bar::compare_oracle;
use confhom::complex::{build_cone_slice, build_generators, slice_from_assignment, ComplexSpec};
use confhom::gca::{hilbert_series, monomial_basis};
use confhom::linalg::{check_square_zero, homology_dims, SparseRationalMatrix};
use confhom::manifold::{standard_builtins, Builtin, ManifoldData};
use confhom::series::{
    check_density_coincidence, density_series, euler_series_lhs, euler_series_rhs,
    unstable_product_check, Truncation,
};
use confhom::stability::{cone_vanishing, config_betti};
use confhom::{weights_up_to, Q};

type Outcome = Result<String, String>;

fn man(b: Builtin) -> ManifoldData {
    b.build().expect("builtin")
}

fn spec(b: Builtin, m: u32, k: u32) -> ComplexSpec {
    ComplexSpec::new(man(b), m, k).expect("valid (m,k)")
}

fn fail_if(failures: Vec<String>, ok: String) -> Outcome {
    if failures.is_empty() {
        Ok(ok)
    } else {
        let shown: Vec<_> = failures.iter().take(8).cloned().collect();
        Err(format!("{} failures: {}", failures.len(), shown.join("; ")))
    }
}

fn oracle_equivalence() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for b in standard_builtins() {
        for (m, k) in [(1, 2), (2, 1)] {
            let sp = spec(b, m, k);
            for w in weights_up_to(m as usize, 4) {
                let r = compare_oracle(&sp, &w, 4).map_err(|e| e.to_string())?;
                checked += 1;
                if !r.equal() {
                    failures.push(format!("{b} ({m},{k}) w={w:?}: {:?} vs {:?}", r.koszul, r.bar));
                }
            }
        }
    }
    fail_if(failures, format!("{checked} weight slices agree with the bar construction"))
}

fn spot_checks() -> Outcome {
    let mut failures = Vec::new();
    let r2 = config_betti(&man(Builtin::Euclidean(2)), 6, 12).map_err(|e| e.to_string())?;
    for n in 2..=6 {
        let mut expected = vec![0; 13];
        expected[0] = 1;
        expected[1] = 1;
        if r2.row(n) != expected {
            failures.push(format!("C_{n}(R^2): {:?}", r2.row(n)));
        }
    }
    let r3 = config_betti(&man(Builtin::Euclidean(3)), 6, 18).map_err(|e| e.to_string())?;
    for n in 0..=6 {
        let mut expected = vec![0; 19];
        expected[0] = 1;
        if r3.row(n) != expected {
            failures.push(format!("C_{n}(R^3): {:?}", r3.row(n)));
        }
    }
    // Betti numbers of the builtins, by hand
    let hand: Vec<(Builtin, Vec<usize>)> = vec![
        (Builtin::Euclidean(1), vec![1, 0]),
        (Builtin::Euclidean(2), vec![1, 0, 0]),
        (Builtin::Euclidean(3), vec![1, 0, 0, 0]),
        (Builtin::Euclidean(4), vec![1, 0, 0, 0, 0]),
        (Builtin::Sphere(1), vec![1, 1]),
        (Builtin::Sphere(2), vec![1, 0, 1]),
        (Builtin::Sphere(3), vec![1, 0, 0, 1]),
        (Builtin::Sphere(4), vec![1, 0, 0, 0, 1]),
        (Builtin::PuncturedSurface(0), vec![1, 0, 0]),
        (Builtin::PuncturedSurface(1), vec![1, 2, 0]),
        (Builtin::PuncturedSurface(2), vec![1, 4, 0]),
        (Builtin::ClosedSurface(0), vec![1, 0, 1]),
        (Builtin::ClosedSurface(1), vec![1, 2, 1]),
        (Builtin::ClosedSurface(2), vec![1, 4, 1]),
        (Builtin::Moebius, vec![1, 1, 0]),
    ];
    for (b, betti) in hand {
        let m = man(b);
        let t = config_betti(&m, 1, m.dim()).map_err(|e| e.to_string())?;
        if t.row(1) != betti {
            failures.push(format!("C_1({b}): {:?} vs {betti:?}", t.row(1)));
        }
    }
    fail_if(failures, "C_n(R^2), C_n(R^3) for n <= 6 and C_1(M) for all builtins".into())
}

fn euler_identity() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for b in standard_builtins() {
        for (m, k) in [(1, 2), (2, 1), (2, 2), (3, 1)] {
            let sp = spec(b, m, k);
            let lhs = euler_series_lhs(&sp, 8);
            let rhs = euler_series_rhs(&sp, 8);
            checked += 1;
            if lhs != rhs {
                failures.push(format!("{b} ({m},{k}): lhs - rhs = {}", lhs.sub(&rhs)));
            }
        }
    }
    fail_if(failures, format!("{checked} (manifold, m, k) cases agree to s^8"))
}

fn density_coincidence() -> Outcome {
    let mut failures = Vec::new();
    let partitions: Vec<(u32, Vec<(u32, u32)>)> = vec![
        (2, vec![(1, 2), (2, 1)]),
        (3, vec![(1, 3), (3, 1)]),
        (4, vec![(1, 4), (2, 2), (4, 1)]),
    ];
    let mut covered = 0;
    for b in [
        Builtin::Euclidean(2),
        Builtin::PuncturedSurface(0),
        Builtin::PuncturedSurface(1),
        Builtin::PuncturedSurface(2),
    ] {
        let m = man(b);
        for (mk, pairs) in &partitions {
            if !confhom::series::cup_products_vanish(&m, *mk).map_err(|e| e.to_string())? {
                continue;
            }
            covered += 1;
            let r = check_density_coincidence(&m, pairs, 30).map_err(|e| e.to_string())?;
            if !r.coincide {
                failures.push(format!("{b} mk={mk}: densities differ"));
            }
        }
    }
    // R^2: the density is 1 + t^{2mk-3}, a single exterior class
    let r2 = man(Builtin::Euclidean(2));
    for mk in 2..=4u32 {
        let s = density_series(&r2, 1, mk, 30).map_err(|e| e.to_string())?;
        let mut expected = confhom::series::TruncatedSeries::one(0, Truncation::new(0, 30));
        expected.add_term(vec![], 2 * mk - 3, Q::one());
        if s != expected {
            failures.push(format!("R^2 mk={mk}: {s}"));
        }
    }
    let r3 = man(Builtin::Euclidean(3));
    let r = check_density_coincidence(&r3, &[(1, 2), (2, 1)], 30).map_err(|e| e.to_string())?;
    if r.coincide {
        failures.push("R^3: (1,2) and (2,1) densities coincide".into());
    }
    fail_if(failures, format!("{covered} coincidence families to t^30; R^3 (1,2) vs (2,1) differ"))
}

fn odd_dimension_vanishing() -> Outcome {
    let mut failures = Vec::new();
    for (m, k) in [(1, 2), (2, 2)] {
        let sp = spec(Builtin::Euclidean(3), m, k);
        let a = build_generators(&sp);
        let v1 = a.v1_space();
        for w in weights_up_to(m as usize, 5) {
            let h = homology_dims(&slice_from_assignment(&a, &w).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            let free: BTreeMap<u32, usize> = monomial_basis(&v1, &w)
                .into_iter()
                .filter(|(_, v)| !v.is_empty())
                .map(|(j, v)| (j, v.len()))
                .collect();
            if h != free {
                failures.push(format!("({m},{k}) w={w:?}: {h:?} vs {free:?}"));
            }
        }
    }
    fail_if(failures, "R^3 slices equal the V2-free algebra for |w| <= 5".into())
}

fn stability_ranges() -> Outcome {
    let mut failures = Vec::new();
    for b in standard_builtins() {
        let m = man(b);
        let d = m.dim();
        if d < 2 {
            continue;
        }
        let n_max = if d >= 3 { 5 } else { 6 };
        let t = config_betti(&m, n_max, 2 * d * n_max).map_err(|e| e.to_string())?;
        let cone = cone_vanishing(&m, n_max).map_err(|e| e.to_string())?;
        for n in 1..=n_max {
            for i in 0..=2 * d * n_max {
                let (prev, cur) = (t.get(n - 1, i), t.get(n, i));
                let (surj, iso) = if d >= 3 { (i < n, i + 1 < n) } else { (2 * i < n, false) };
                if iso && prev != cur {
                    failures.push(format!("{b} n={n} i={i}: {prev} != {cur}"));
                }
                if surj && prev < cur {
                    failures.push(format!("{b} n={n} i={i}: {prev} < {cur}"));
                }
            }
            for &i in cone[n as usize].dims.keys() {
                let vanishes = if d >= 3 { i < n } else { 2 * i < n };
                if vanishes {
                    failures.push(format!("{b} n={n}: cone homology in degree {i}"));
                }
            }
        }
    }
    fail_if(failures, "d >= 3 for n <= 5, d = 2 for n <= 6, cone vanishing in range".into())
}

fn unstable_product_formula() -> Outcome {
    let mut failures = Vec::new();
    let mut rows = 0;
    let cases = [
        (Builtin::Euclidean(2), 1, 2),
        (Builtin::Euclidean(2), 2, 1),
        (Builtin::Euclidean(2), 2, 2),
        (Builtin::Euclidean(3), 2, 1),
        (Builtin::Euclidean(3), 3, 1),
    ];
    for (b, m, k) in cases {
        let check = unstable_product_check(&man(b), m, k, 4).map_err(|e| e.to_string())?;
        for r in &check.rows {
            rows += 1;
            if !r.equal() {
                failures.push(format!("{b} ({m},{k}) w={:?}: {:?} vs {:?}", r.weight, r.slice, r.product));
            }
        }
    }
    fail_if(failures, format!("{rows} weights match Sym (x) S^*"))
}

fn residual_action() -> Outcome {
    let mut failures = Vec::new();
    for g in 1..=3u32 {
        let total = residual_action_dims(&man(Builtin::PuncturedSurface(g)))
            .map_err(|e| e.to_string())?
            .total;
        let h = 2 * g as usize;
        let expected = h * (h * (h - 1) / 2);
        if total != expected {
            failures.push(format!("g={g}: {total} vs {expected}"));
        }
    }
    fail_if(failures, "totals 2, 24, 90 for g = 1, 2, 3".into())
}

/// Textbook Gaussian elimination with full rational pivots.
fn dense_rank(mut a: Vec<Vec<Q>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, p);
        let pivot = a[rank][c].clone();
        for r in 0..rows {
            if r != rank && !a[r][c].is_zero() {
                let f = &a[r][c] / &pivot;
                for j in c..cols {
                    let v = &f * &a[rank][j];
                    a[r][j] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn infrastructure() -> Outcome {
    let mut failures = Vec::new();
    let mut slices = 0;
    for b in standard_builtins() {
        for (m, k) in [(1, 2), (2, 1), (2, 2), (3, 1)] {
            let a = build_generators(&spec(b, m, k));
            let space = a.koszul_space();
            let trunc = Truncation::new(4, 200);
            let hs = hilbert_series(&space, trunc);
            for w in weights_up_to(m as usize, 4) {
                match slice_from_assignment(&a, &w) {
                    Ok(s) => {
                        slices += 1;
                        if let Err(e) = check_square_zero(&s) {
                            failures.push(format!("{b} ({m},{k}) w={w:?}: {e}"));
                        }
                    }
                    Err(e) => failures.push(format!("{b} ({m},{k}) w={w:?}: {e}")),
                }
                let counts = monomial_basis(&space, &w);
                let poly = hs.t_polynomial(&w);
                let from_basis: BTreeMap<u32, Q> = counts
                    .iter()
                    .filter(|(_, v)| !v.is_empty())
                    .map(|(j, v)| (*j, Q::from_integer((v.len() as i64).into())))
                    .collect();
                if poly != from_basis {
                    failures.push(format!("{b} ({m},{k}) w={w:?}: hilbert {poly:?}"));
                }
            }
        }
        let m = man(b);
        for n in 0..=4 {
            if let Err(e) = build_cone_slice(&m, n) {
                failures.push(format!("{b} cone n={n}: {e}"));
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for trial in 0..200 {
        let rows = rng.gen_range(1..=8);
        let cols = rng.gen_range(1..=8);
        let dense: Vec<Vec<Q>> = (0..rows)
            .map(|_| {
                (0..cols)
                    .map(|_| match rng.gen_range(0..3) {
                        0 => Q::zero(),
                        1 => Q::one(),
                        _ => -Q::one(),
                    })
                    .collect()
            })
            .collect();
        let sparse = SparseRationalMatrix::from_dense(&dense).rank();
        let oracle = dense_rank(dense);
        if sparse != oracle {
            failures.push(format!("random matrix {trial}: {sparse} vs {oracle}"));
        }
    }
    let runs: Vec<Vec<&str>> = vec![
        vec!["betti", "--manifold", "builtin:closed_surface:1", "--n-max", "4", "--format", "csv"],
        vec!["stability", "--manifold", "builtin:punctured_surface:1", "--n-max", "4"],
        vec!["oracle", "--manifold", "builtin:punctured_surface:1", "--m", "2", "--k", "1"],
        vec!["density", "--manifold", "builtin:euclidean:2", "--pairs", "1:4,2:2,4:1"],
        vec!["euler", "--manifold", "builtin:sphere:2", "--m", "2", "--k", "2"],
    ];
    for args in runs {
        let mut outputs = Vec::new();
        for jobs in ["1", "2", "4", "8"] {
            let mut full = vec!["confhom", "--jobs", jobs];
            full.extend(&args);
            let (mut out, mut err) = (Vec::new(), Vec::new());
            let code = confhom::cli::run(full, &mut out, &mut err);
            outputs.push((code, out, err));
        }
        if outputs.windows(2).any(|p| p[0] != p[1]) {
            failures.push(format!("`{}` output depends on --jobs", args.join(" ")));
        }
    }
    fail_if(failures, format!("{slices} slices square to zero; hilbert = counts; 200 ranks; CLI determinism"))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("1 oracle equivalence", oracle_equivalence),
        ("2 configuration-space spot checks", spot_checks),
        ("3 Euler identity", euler_identity),
        ("4 density coincidence", density_coincidence),
        ("5 odd-d vanishing", odd_dimension_vanishing),
        ("6 stability ranges", stability_ranges),
        ("7 unstable product formula", unstable_product_formula),
        ("8 residual action", residual_action),
        ("9 infrastructure invariants", infrastructure),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let result = panic::catch_unwind(f).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS criterion {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail} ({secs:.1}s)");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
