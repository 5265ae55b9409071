use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use punctum::gamma::{boundary_form, gamma_vector};
use punctum::kernels::{green, xyz_quantities};
use punctum::oracle::{delta_well_spectrum_1d, fd_discretize_1d, jump_coupling, kappa_verdict, rank_probe};
use punctum::perturbation::{
    characteristic_determinant, delta01, krein_residual, perturbed_spectrum, resolvent_field, theorem52_check, trace_difference,
    unperturbed_resolvent, RootKind, SpectrumOptions, Theorem52Branch,
};
use punctum::solver::{bm_solve, dirichlet_solve};
use punctum::{
    BoundaryTrace, Complex64, Dim, FnField, KernelBundle, KernelField, KernelKind, PerturbationK, Point,
    PunctureSpectrum, SpectralBasis,
};

type Outcome = Result<String, String>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn ctx(dim: Dim, x0: &[f64], m: usize) -> PunctureSpectrum {
    PunctureSpectrum::new(SpectralBasis::new(dim, m).unwrap(), Point::puncture(x0).unwrap(), 1.0).unwrap()
}

fn random_in_ball(rng: &mut ChaCha8Rng, radius: f64) -> [f64; 3] {
    loop {
        let p = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let r2: f64 = p.iter().map(|v| v * v).sum();
        if r2 < 1.0 {
            return p.map(|v| v * radius);
        }
    }
}

fn verdict(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn kernel_functional_table() -> Outcome {
    let start = Instant::now();
    let bundle = KernelBundle::new(Point::puncture(&[0.2, -0.1, 0.15]).unwrap()).unwrap();
    let mut worst: f64 = 0.0;
    let g = gamma_vector(&KernelField::new(bundle, KernelKind::Green), &bundle.puncture).map_err(|e| e.to_string())?;
    worst = worst.max(g.max_abs_diff(&[-1.0, 0.0, 0.0, 0.0]));
    let mut literal: f64 = 0.0;
    for j in 1..=3 {
        let mut e = [0.0; 4];
        e[j] = 1.0;
        for kind in [KernelKind::FieldGradient(j), KernelKind::Mode(j)] {
            let v = gamma_vector(&KernelField::new(bundle, kind), &bundle.puncture).map_err(|e| e.to_string())?;
            worst = worst.max(v.max_abs_diff(&e));
        }
        // the literal source derivative carries the opposite sign
        let v = gamma_vector(&KernelField::new(bundle, KernelKind::SourceGradient(j)), &bundle.puncture)
            .map_err(|e| e.to_string())?;
        e[j] = -1.0;
        literal = literal.max(v.max_abs_diff(&e));
    }
    let t = start.elapsed();
    verdict(
        worst <= 1e-6 && literal <= 1e-6 && t <= Duration::from_secs(10),
        format!("max err {worst:.2e}, source-derivative sign check {literal:.2e}, {:.2} s", t.as_secs_f64()),
    )
}

fn image_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut rel: f64 = 0.0;
    let mut sym: f64 = 0.0;
    for _ in 0..10_000 {
        let x = Point::in_ball(random_in_ball(&mut rng, 1.0)).unwrap();
        let xi = Point::in_ball(random_in_ball(&mut rng, 1.0)).unwrap();
        let q = xyz_quantities(&x, &xi).map_err(|e| e.to_string())?;
        rel = rel.max((q.x2 - (q.y2 - q.z2)).abs() / q.y2);
        let a = green(&x, &xi).map_err(|e| e.to_string())?;
        let b = green(&xi, &x).map_err(|e| e.to_string())?;
        sym = sym.max((a - b).abs() / a.abs().max(1.0));
    }
    let mut edge: f64 = 0.0;
    for _ in 0..1000 {
        let d = random_in_ball(&mut rng, 1.0);
        let n = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        let x = Point::in_ball(d.map(|v| v / n)).unwrap();
        let xi = Point::in_ball(random_in_ball(&mut rng, 0.95)).unwrap();
        edge = edge.max(green(&x, &xi).map_err(|e| e.to_string())?.abs());
    }
    verdict(
        rel <= 1e-12 && sym <= 1e-10 && edge <= 1e-10,
        format!("identity rel {rel:.2e}, symmetry {sym:.2e}, boundary {edge:.2e}"),
    )
}

fn manufactured_dirichlet() -> Outcome {
    let mut worst: f64 = 0.0;
    // u = −x⁴ + x³/2 + 3x²/2 − x
    let f1 = FnField::new(Dim::One, |p| -12.0 * p.x() * p.x() + 3.0 * p.x() + 3.0);
    let u1 = |x: f64| -x.powi(4) + 0.5 * x.powi(3) + 1.5 * x * x - x;
    for i in 1..20 {
        let x = i as f64 / 20.0;
        let w = dirichlet_solve(&f1, &Point::on_line(x).unwrap()).map_err(|e| e.to_string())?;
        worst = worst.max((w - u1(x)).abs());
    }
    // u = 1 − r⁴ and u = sin(πr)/r
    let f3a = FnField::new(Dim::Three, |p| -20.0 * p.norm_sq());
    let f3b = FnField::new(Dim::Three, |p| {
        let r = p.norm();
        if r < 1e-12 {
            -PI * PI * PI
        } else {
            -PI * PI * (PI * r).sin() / r
        }
    });
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..6 {
        let x = Point::in_ball(random_in_ball(&mut rng, 0.9)).unwrap();
        let r = x.norm();
        let wa = dirichlet_solve(&f3a, &x).map_err(|e| e.to_string())?;
        worst = worst.max((wa - (1.0 - r.powi(4))).abs());
        let wb = dirichlet_solve(&f3b, &x).map_err(|e| e.to_string())?;
        worst = worst.max((wb - (PI * r).sin() / r).abs());
    }
    verdict(worst <= 1e-7, format!("max err {worst:.2e}"))
}

fn maximal_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let x0 = rng.gen_range(0.15..0.85);
        let bundle = KernelBundle::new(Point::puncture(&[x0]).unwrap()).unwrap();
        let a: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
        let g = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let f = FnField::new(Dim::One, move |p| a[0] + a[1] * p.x() + a[2] * (3.0 * p.x() + a[3]).sin());
        let u = FnField::new(Dim::One, |p| bm_solve(&f, &g, &bundle, p).unwrap_or(f64::NAN));
        let got = gamma_vector(&u, &bundle.puncture).map_err(|e| e.to_string())?;
        worst = worst.max(got.max_abs_diff(&g));
    }
    verdict(worst <= 1e-6, format!("20 cases, max err {worst:.2e}"))
}

fn spectrum_oracle() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut fd_worst: f64 = 0.0;
    let mut fd_ok = true;
    for x0 in [0.3, 0.5] {
        let ctx = ctx(Dim::One, &[x0], 4000);
        let lo = 0.5 * (ctx.mu(5) + ctx.mu(6));
        for k in [0.5, 1.0, 5.0] {
            let table = PerturbationK::delta_coupling(k, &ctx);
            let roots = perturbed_spectrum(&ctx, &table, (lo, -0.5), SpectrumOptions::default()).map_err(|e| e.to_string())?;
            let mut main: Vec<f64> = Vec::new();
            for r in &roots {
                for _ in 0..r.multiplicity {
                    main.push(r.value.re);
                }
            }
            let ko = jump_coupling(k, ctx.kappa(), x0);
            let oracle = delta_well_spectrum_1d(ko, x0, 5).map_err(|e| e.to_string())?;
            if main.len() < 5 {
                return Err(format!("only {} roots for k={k}, x0={x0}", main.len()));
            }
            for (m, o) in main.iter().zip(&oracle) {
                worst = worst.max((m - o).abs());
            }
            let fd = fd_discretize_1d(999, ko, x0, 5).map_err(|e| e.to_string())?;
            for i in 0..5 {
                let dev = (fd.extrapolated[i] - main[i]).abs();
                fd_worst = fd_worst.max(dev / fd.err[i].max(f64::MIN_POSITIVE));
                fd_ok &= dev <= fd.err[i];
            }
        }
    }
    let t = start.elapsed();
    verdict(
        worst <= 1e-8 && fd_ok && t <= Duration::from_secs(30),
        format!(
            "max |root − oracle| {worst:.2e}, finite differences at {fd_worst:.2} of their bar, {:.2} s",
            t.as_secs_f64()
        ),
    )
}

/// Ten real points at gap midpoints, each at least `margin` from every pole
/// and every root.
fn krein_grid(ctx: &PunctureSpectrum, k: &PerturbationK, margin: f64) -> Result<Vec<f64>, String> {
    let mut mus = ctx.basis().mus();
    mus.dedup_by(|a, b| (*a - *b).abs() < 1e-9 * b.abs());
    let lo = 0.5 * (mus[11] + mus[12]);
    let roots = perturbed_spectrum(ctx, k, (lo, 50.0), SpectrumOptions::default()).map_err(|e| e.to_string())?;
    let mut grid = vec![0.5 * mus[0]];
    for w in mus.windows(2).take(11) {
        grid.push(0.5 * (w[0] + w[1]));
    }
    grid.retain(|l| {
        mus.iter().all(|m| (m - l).abs() > margin) && roots.iter().all(|r| (r.value - c(*l)).norm() > margin)
    });
    grid.truncate(10);
    if grid.len() < 10 {
        return Err(format!("only {} admissible grid points", grid.len()));
    }
    Ok(grid)
}

fn krein_formula() -> Outcome {
    let mut worst: f64 = 0.0;
    let one = ctx(Dim::One, &[0.37], 200);
    let three = ctx(Dim::Three, &[0.2, -0.1, 0.3], 200);
    let cases = [
        (&one, PerturbationK::delta_coupling(2.0, &one)),
        (&three, PerturbationK::alpha_family(&[c(0.4), c(-0.3), c(0.2), c(0.5)], &three).unwrap()),
    ];
    for (ctx, k) in &cases {
        for lam in krein_grid(ctx, k, 1e-2)? {
            let r = krein_residual(ctx, k, c(lam), 1e-6 * lam.abs().max(1.0)).map_err(|e| e.to_string())?;
            worst = worst.max(r);
        }
    }
    verdict(worst <= 1e-4, format!("20 points, max residual {worst:.2e}"))
}

fn finite_rank() -> Outcome {
    let mut worst: f64 = 0.0;
    let one = ctx(Dim::One, &[0.37], 120);
    let three = ctx(Dim::Three, &[0.2, -0.1, 0.3], 120);
    let cases = [
        (&one, PerturbationK::alpha_family(&[c(0.8), c(-0.5)], &one).unwrap()),
        (&three, PerturbationK::alpha_family(&[c(0.4), c(-0.3), c(0.2), c(0.5)], &three).unwrap()),
    ];
    for (ctx, k) in &cases {
        let d = ctx.dim().n();
        for lam in [Complex64::new(-3.0, 1.0), c(-15.0), Complex64::new(-70.0, -4.0), c(4.0), Complex64::new(-140.0, 0.5)] {
            let sv = rank_probe(ctx.cutoff(), 50, 17, &|f| {
                let full = resolvent_field(ctx, k, f, lam)?.l2_coefficients(ctx.modes());
                let base = unperturbed_resolvent(ctx, f, lam)?;
                Ok(full.iter().zip(&base).map(|(a, b)| a - b).collect())
            })
            .map_err(|e| e.to_string())?;
            worst = worst.max(sv[d + 1] / sv[0]);
        }
    }
    verdict(worst <= 1e-8, format!("max σ_(d+2)/σ_1 {worst:.2e}"))
}

fn shifted_eigenvalue() -> Outcome {
    let mid = ctx(Dim::One, &[0.5], 200);
    let node = theorem52_check(&mid, &PerturbationK::delta_coupling(1.0, &mid), 1).map_err(|e| e.to_string())?;
    let node_err = (node.root - c(-4.0 * PI * PI)).norm();
    let off = ctx(Dim::One, &[0.3], 200);
    let mut zeroed_k = PerturbationK::delta_coupling(1.0, &off);
    zeroed_k.set_entry(0, 2, c(0.0));
    let zeroed = theorem52_check(&off, &zeroed_k, 2).map_err(|e| e.to_string())?;
    let generic = theorem52_check(&off, &PerturbationK::delta_coupling(1.0, &off), 2).map_err(|e| e.to_string())?;
    let ok = node.branch == Theorem52Branch::Node
        && node_err <= 1e-9
        && zeroed.branch == Theorem52Branch::Zeroed
        && zeroed.shift <= 1e-9
        && generic.branch == Theorem52Branch::Generic
        && generic.shift > 1e-4;
    verdict(
        ok,
        format!(
            "node err {node_err:.2e}, zeroed shift {:.2e}, generic shift {:.3e}",
            zeroed.shift, generic.shift
        ),
    )
}

fn tangential_example() -> Outcome {
    let mut d01: f64 = 0.0;
    let mut trace: f64 = 0.0;
    let mut same = true;
    let mut full_dev: f64 = 0.0;
    for (dim, x0) in [(Dim::One, vec![0.37]), (Dim::Three, vec![0.2, -0.1, 0.3])] {
        let ctx = ctx(dim, &x0, 300);
        let weights = vec![0.7; dim.n()];
        let full = PerturbationK::tangential(&weights, &ctx).map_err(|e| e.to_string())?;
        let leading = full.leading_rows(1);
        for i in 0..50 {
            let lam = Complex64::new(-300.0 + 7.3 * i as f64, if i % 2 == 0 { 0.0 } else { 2.5 });
            d01 = d01.max((delta01(&ctx, &leading, lam).map_err(|e| e.to_string())? - 1.0).norm());
            trace = trace.max(trace_difference(&ctx, &leading, lam).map_err(|e| e.to_string())?.norm());
            let whole = characteristic_determinant(&ctx, &full, lam).map_err(|e| e.to_string())?;
            full_dev = full_dev.max((whole.value - 1.0).norm());
        }
        let mut distinct = ctx.basis().mus();
        distinct.dedup_by(|a, b| (*a - *b).abs() < 1e-9 * b.abs());
        let window = (0.5 * (distinct[7] + distinct[8]), -0.5);
        let mus: Vec<f64> = ctx.basis().mus().into_iter().filter(|m| *m > window.0).collect();
        let roots = perturbed_spectrum(&ctx, &leading, window, SpectrumOptions::default()).map_err(|e| e.to_string())?;
        let mut got = Vec::new();
        for r in &roots {
            same &= r.kind == RootKind::Retained && r.value.im == 0.0;
            got.extend(std::iter::repeat(r.value.re).take(r.multiplicity));
        }
        same &= got.len() == mus.len() && got.iter().zip(&mus).all(|(a, b)| (a - b).abs() <= 1e-12 * b.abs());
    }
    verdict(
        d01 <= 1e-12 && same && trace <= 1e-10,
        format!(
            "|Δ_01 − 1| {d01:.2e}, trace {trace:.2e}, spectrum unchanged: {same}; all rows |Δ − 1| up to {full_dev:.2e}"
        ),
    )
}

fn kappa_choice() -> Outcome {
    let v = kappa_verdict(&[1.0, 2.0], [12, 20]).map_err(|e| e.to_string())?;
    let worst = v.rows.iter().map(|r| r.misfit[0]).fold(0.0, f64::max);
    verdict(v.kappa == Some(1.0), format!("kappa = {}, max misfit {worst:.2e}", v.label()))
}

fn trace_of(ctx: &PunctureSpectrum, u: &punctum::DecomposedField) -> BoundaryTrace {
    let beta = (0..ctx.n_functionals())
        .map(|i| (0..ctx.cutoff()).map(|n| u.regular[n] * ctx.jet(i, n)).sum())
        .collect();
    BoundaryTrace::new(u.singular.clone(), beta)
}

fn self_adjoint_domain() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut worst: f64 = 0.0;
    let one = ctx(Dim::One, &[0.37], 60);
    let k1 = PerturbationK::alpha_family(&[c(0.6), c(-1.1)], &one).unwrap();
    let three = ctx(Dim::Three, &[0.2, -0.1, 0.3], 60);
    let alpha = [c(0.4), c(-0.3), c(0.2), c(0.5)];
    let k3 = PerturbationK::alpha_family(&alpha, &three).unwrap();
    let mut random_member = |ctx: &PunctureSpectrum, k: &PerturbationK| {
        let f: Vec<Complex64> = (0..ctx.cutoff())
            .map(|n| c(rng.gen_range(-1.0..1.0) / (1.0 + n as f64)))
            .collect();
        let lam = c(rng.gen_range(-2.0..2.0));
        resolvent_field(ctx, k, &f, lam)
    };
    for _ in 0..10 {
        let u = random_member(&one, &k1).map_err(|e| e.to_string())?;
        let v = random_member(&one, &k1).map_err(|e| e.to_string())?;
        let j = boundary_form(&trace_of(&one, &u), &trace_of(&one, &v)).map_err(|e| e.to_string())?;
        worst = worst.max(j.norm());
    }
    for _ in 0..10 {
        let u = random_member(&three, &k3).map_err(|e| e.to_string())?;
        let v = random_member(&three, &k3).map_err(|e| e.to_string())?;
        let j = boundary_form(&trace_of(&three, &u), &trace_of(&three, &v)).map_err(|e| e.to_string())?;
        worst = worst.max(j.norm());
    }
    let probe = PerturbationK::alpha_family(&[Complex64::new(0.4, 0.3), c(-0.3), c(0.2), c(0.5)], &three).unwrap();
    let u = random_member(&three, &probe).map_err(|e| e.to_string())?;
    let v = random_member(&three, &probe).map_err(|e| e.to_string())?;
    let uu = boundary_form(&trace_of(&three, &u), &trace_of(&three, &u)).map_err(|e| e.to_string())?;
    let uv = boundary_form(&trace_of(&three, &u), &trace_of(&three, &v)).map_err(|e| e.to_string())?;
    let complex = uu.norm().max(uv.norm());
    verdict(
        worst <= 1e-8 && complex > 1e-3,
        format!("real α max |J| {worst:.2e}, complex α |J| {complex:.3e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("kernel functional table", kernel_functional_table),
        ("image distance identity", image_identity),
        ("manufactured Dirichlet solutions", manufactured_dirichlet),
        ("maximal operator round trip", maximal_round_trip),
        ("spectrum against the delta-well oracle", spectrum_oracle),
        ("trace formula", krein_formula),
        ("finite-rank resolvent difference", finite_rank),
        ("eigenvalue at a node", shifted_eigenvalue),
        ("tangential perturbation", tangential_example),
        ("kappa verdict", kappa_choice),
        ("self-adjoint domain", self_adjoint_domain),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} [{secs:.2} s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} [{secs:.2} s]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    }
}
