use std::f64::consts::{PI, SQRT_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use punctum::gamma::gamma_vector;
use punctum::kernels::{green, xyz_quantities};
use punctum::oracle::{
    delta_well_spectrum_1d, fd_discretize_1d, jump_coupling, kappa_verdict, KappaVerdict, OracleReport,
    KAPPA_FIXTURE_PUNCTURE,
};
use punctum::perturbation::{
    characteristic_determinant, delta01, log_derivative, perturbed_spectrum, theorem52_check, trace_difference,
    trace_with_truncation, RootKind, SpectralRoot, SpectrumOptions, Theorem52Branch,
};
use punctum::solver::dirichlet_solve;
use punctum::{
    Complex64, Dim, Error, FnField, KernelBundle, KernelField, KernelKind, PerturbationK, Point, PunctureSpectrum,
    KAPPA_CANDIDATES,
};

use crate::config::{ExperimentConfig, Preset};
use crate::output::{Cell, Table};

/// Gauss orders of the two quadrature levels behind the κ verdict.
pub const VERDICT_ORDERS: [usize; 2] = [12, 20];

/// Distance from poles and roots kept by the trace-formula grid.
const GRID_MARGIN: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    GammaCheck,
    GreenEval,
    Basis,
    Solve,
    Determinant,
    Spectrum,
    Krein,
    Trace,
    Ex1,
    Thm52,
    Oracle,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::GammaCheck => "gamma-check",
            Command::GreenEval => "green-eval",
            Command::Basis => "basis",
            Command::Solve => "solve",
            Command::Determinant => "determinant",
            Command::Spectrum => "spectrum",
            Command::Krein => "krein",
            Command::Trace => "trace",
            Command::Ex1 => "ex1",
            Command::Thm52 => "thm52",
            Command::Oracle => "oracle",
        }
    }

    /// The configuration a file overrides key by key.
    pub fn defaults(self) -> ExperimentConfig {
        let mut c = ExperimentConfig::base();
        match self {
            Command::GammaCheck => {
                c.dim = Dim::Three;
                c.puncture = vec![0.2, -0.1, 0.15];
                c.tol = 1e-6;
            }
            Command::GreenEval => {
                c.dim = Dim::Three;
                c.puncture = vec![0.2, -0.1, 0.15];
                c.samples = 200;
                c.tol = 1e-10;
            }
            Command::Basis => {
                c.cutoff = 40;
                c.tol = 1e-8;
            }
            Command::Solve => {
                c.samples = 10;
                c.tol = 1e-7;
            }
            Command::Determinant | Command::Trace => {}
            Command::Spectrum | Command::Oracle => {
                c.cutoff = 4000;
                c.lambda_min = -400.0;
                c.lambda_max = -0.5;
                c.tol = 1e-8;
            }
            Command::Krein => c.tol = 1e-4,
            Command::Ex1 => {
                c.preset = Preset::Tangential;
                c.weights = vec![0.7];
                c.lambda_min = -300.0;
                c.lambda_max = -1.0;
                c.lambda_points = 50;
                c.tol = 1e-10;
            }
            Command::Thm52 => {
                c.puncture = vec![0.5];
                c.tol = 1e-9;
            }
        }
        c
    }
}

/// A table together with the failed and the soft-failed checks.
#[derive(Debug, Default)]
pub struct Run {
    pub table: Option<Table>,
    pub failures: Vec<String>,
    pub warnings: Vec<String>,
}

impl Run {
    fn with(table: Table) -> Self {
        Run {
            table: Some(table),
            ..Run::default()
        }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(msg());
        }
    }
}

pub struct Env {
    pub verdict: KappaVerdict,
}

impl Env {
    pub fn new() -> punctum::Result<Self> {
        Ok(Env {
            verdict: kappa_verdict(&KAPPA_CANDIDATES, VERDICT_ORDERS)?,
        })
    }

    pub fn kappa(&self) -> punctum::Result<f64> {
        self.verdict
            .kappa
            .ok_or_else(|| Error::InvalidArgument("the quadrature oracle did not single out a kappa".into()))
    }
}

pub fn header(cfg: &ExperimentConfig, env: &Env, command: Command) -> Vec<(String, String)> {
    let coords: Vec<String> = cfg.puncture.iter().map(|v| v.to_string()).collect();
    vec![
        ("command".into(), command.name().into()),
        ("sign convention".into(), "Delta_x G = delta(x - xi), Delta omega_n = mu_n omega_n, mu_n < 0".into()),
        ("kappa verdict".into(), env.verdict.label()),
        ("M".into(), cfg.cutoff.to_string()),
        ("d".into(), cfg.dim.n().to_string()),
        ("puncture".into(), coords.join(" ")),
        ("preset".into(), cfg.preset_label()),
        ("seed".into(), cfg.seed.to_string()),
    ]
}

pub fn run(command: Command, cfg: &ExperimentConfig, env: &Env) -> punctum::Result<Run> {
    match command {
        Command::GammaCheck => gamma_check(cfg),
        Command::GreenEval => green_eval(cfg),
        Command::Basis => basis(cfg, env),
        Command::Solve => solve(cfg),
        Command::Determinant => determinant(cfg, env),
        Command::Spectrum => spectrum(cfg, env),
        Command::Krein => krein(cfg, env),
        Command::Trace => trace(cfg, env),
        Command::Ex1 => ex1(cfg, env),
        Command::Thm52 => thm52(cfg, env),
        Command::Oracle => oracle(cfg, env),
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn gamma_check(cfg: &ExperimentConfig) -> punctum::Result<Run> {
    let bundle = KernelBundle::new(Point::puncture(&cfg.puncture)?)?;
    let d = cfg.dim.n();
    let mut fields = vec![("G".to_string(), KernelKind::Green, unit(d, 0, -1.0))];
    for s in 1..=d {
        fields.push((format!("dG/dx_{s}"), KernelKind::FieldGradient(s), unit(d, s, 1.0)));
        fields.push((format!("phi_{s}"), KernelKind::Mode(s), unit(d, s, 1.0)));
        fields.push((format!("dG/dxi_{s}"), KernelKind::SourceGradient(s), unit(d, s, -1.0)));
    }
    let mut t = Table::new(&["field", "j", "value", "error", "expected", "abs_err"]);
    let mut run = Run::default();
    for (name, kind, expected) in fields {
        let g = gamma_vector(&KernelField::new(bundle, kind), &bundle.puncture)?;
        for j in 0..=d {
            let err = (g.values[j] - expected[j]).abs();
            run.check(err <= cfg.tol, || format!("gamma_{j}({name}) = {} expected {}", g.values[j], expected[j]));
            t.push(vec![name.clone().into(), j.into(), g.values[j].into(), g.err[j].into(), expected[j].into(), err.into()]);
        }
    }
    run.table = Some(t);
    Ok(run)
}

fn unit(d: usize, at: usize, v: f64) -> Vec<f64> {
    let mut e = vec![0.0; d + 1];
    e[at] = v;
    e
}

fn random_point(rng: &mut ChaCha8Rng, dim: Dim, radius: f64) -> Point {
    match dim {
        Dim::One => Point::on_line(0.5 + radius * rng.gen_range(-0.5..0.5)).expect("interior"),
        Dim::Three => loop {
            let p: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            if p.iter().map(|v| v * v).sum::<f64>() < 1.0 {
                break Point::in_ball(p.map(|v| v * radius)).expect("interior");
            }
        },
    }
}

fn coords(p: &Point) -> String {
    let s: Vec<String> = p.as_slice().iter().map(|v| format!("{v:e}")).collect();
    s.join(" ")
}

fn green_eval(cfg: &ExperimentConfig) -> punctum::Result<Run> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut t = Table::new(&["x", "xi", "G", "G_swapped", "symmetry_err", "identity_rel_err"]);
    let mut run = Run::default();
    for _ in 0..cfg.samples {
        let x = random_point(&mut rng, cfg.dim, 1.0);
        let xi = random_point(&mut rng, cfg.dim, 1.0);
        if x.distance(&xi) == 0.0 {
            continue;
        }
        let a = green(&x, &xi)?;
        let b = green(&xi, &x)?;
        let sym = (a - b).abs() / a.abs().max(1.0);
        let ident = match cfg.dim {
            Dim::Three => {
                let q = xyz_quantities(&x, &xi)?;
                (q.x2 - (q.y2 - q.z2)).abs() / q.y2
            }
            Dim::One => 0.0,
        };
        run.check(sym <= cfg.tol, || format!("G not symmetric at {} / {}", coords(&x), coords(&xi)));
        run.check(ident <= 1e-12, || format!("image identity off by {ident:e} at {}", coords(&x)));
        t.push(vec![coords(&x).into(), coords(&xi).into(), a.into(), b.into(), sym.into(), ident.into()]);
    }
    run.table = Some(t);
    Ok(run)
}

fn basis(cfg: &ExperimentConfig, env: &Env) -> punctum::Result<Run> {
    let ctx = cfg.context(env.kappa()?)?;
    let mut t = Table::new(&["index", "l", "m", "n", "mu", "value_at_puncture", "norm_residual"]);
    let mut run = Run::default();
    for (i, e) in ctx.basis().entries().iter().enumerate() {
        run.check(e.norm_residual <= cfg.tol, || format!("entry {i} normalized only to {:e}", e.norm_residual));
        t.push(vec![
            i.into(),
            e.l.into(),
            e.m.into(),
            e.n.into(),
            e.mu.into(),
            ctx.jet(0, i).into(),
            e.norm_residual.into(),
        ]);
    }
    run.table = Some(t);
    Ok(run)
}

fn solve(cfg: &ExperimentConfig) -> punctum::Result<Run> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    // u = −x⁴ + x³/2 + 3x²/2 − x on the interval, u = 1 − |x|⁴ in the ball
    let (f, exact): (FnField, Box<dyn Fn(&Point) -> f64>) = match cfg.dim {
        Dim::One => (
            FnField::new(Dim::One, |p| -12.0 * p.x() * p.x() + 3.0 * p.x() + 3.0),
            Box::new(|p: &Point| {
                let x = p.x();
                -x.powi(4) + 0.5 * x.powi(3) + 1.5 * x * x - x
            }),
        ),
        Dim::Three => (
            FnField::new(Dim::Three, |p| -20.0 * p.norm_sq()),
            Box::new(|p: &Point| 1.0 - p.norm_sq() * p.norm_sq()),
        ),
    };
    let mut t = Table::new(&["x", "computed", "exact", "abs_err"]);
    let mut run = Run::default();
    for _ in 0..cfg.samples {
        let x = random_point(&mut rng, cfg.dim, 0.95);
        let w = dirichlet_solve(&f, &x)?;
        let e = exact(&x);
        let err = (w - e).abs();
        run.check(err <= cfg.tol, || format!("solution off by {err:e} at {}", coords(&x)));
        t.push(vec![coords(&x).into(), w.into(), e.into(), err.into()]);
    }
    run.table = Some(t);
    Ok(run)
}

fn setup(cfg: &ExperimentConfig, env: &Env) -> punctum::Result<(PunctureSpectrum, PerturbationK)> {
    let ctx = cfg.context(env.kappa()?)?;
    let k = cfg.table(&ctx)?;
    Ok((ctx, k))
}

fn determinant(cfg: &ExperimentConfig, env: &Env) -> punctum::Result<Run> {
    let (ctx, k) = setup(cfg, env)?;
    let mut t = Table::new(&["lambda", "delta_re", "delta_im", "trunc_err", "delta01_re", "delta01_im"]);
    let mut run = Run::default();
    for lam in cfg.lambda_grid() {
        match characteristic_determinant(&ctx, &k, c(lam)) {
            Ok(d) => {
                let d01 = delta01(&ctx, &k, c(lam))?;
                t.push(vec![lam.into(), d.value.re.into(), d.value.im.into(), d.trunc_err.into(), d01.re.into(), d01.im.into()]);
            }
            Err(Error::EvaluationAtPole { index, .. }) => {
                run.warnings.push(format!("lambda = {lam} skipped: pole mu_{}", index + 1));
            }
            Err(e) => return Err(e),
        }
    }
    run.table = Some(t);
    Ok(run)
}

fn expand(roots: &[SpectralRoot]) -> Vec<f64> {
    let mut out = Vec::new();
    for r in roots {
        out.extend(std::iter::repeat(r.value.re).take(r.multiplicity));
    }
    out
}

fn kind_name(k: RootKind) -> &'static str {
    match k {
        RootKind::Real => "root",
        RootKind::Retained => "retained",
        RootKind::Complex => "complex",
    }
}

fn spectrum_options(cfg: &ExperimentConfig) -> SpectrumOptions {
    SpectrumOptions {
        complex_search: cfg.complex_search,
        ..SpectrumOptions::default()
    }
}

/// Reference eigenvalues of the jump model inside the window, ascending in
/// modulus, when the preset has one.
fn reference_levels(cfg: &ExperimentConfig, ctx: &PunctureSpectrum, wanted: usize) -> punctum::Result<Option<Vec<f64>>> {
    if cfg.dim != Dim::One || !matches!(cfg.preset, Preset::Delta | Preset::Zero) {
        return Ok(None);
    }
    let k = if cfg.preset == Preset::Zero { 0.0 } else { cfg.k };
    let ko = jump_coupling(k, ctx.kappa(), cfg.puncture[0]);
    let all = delta_well_spectrum_1d(ko, cfg.puncture[0], wanted + 4)?;
    Ok(Some(
        all.into_iter()
            .filter(|l| *l >= cfg.lambda_min && *l <= cfg.lambda_max)
            .take(wanted)
            .collect(),
    ))
}

fn spectrum(cfg: &ExperimentConfig, env: &Env) -> punctum::Result<Run> {
    let (ctx, k) = setup(cfg, env)?;
    let roots = perturbed_spectrum(&ctx, &k, (cfg.lambda_min, cfg.lambda_max), spectrum_options(cfg))?;
    let mut t = Table::new(&["index", "kind", "re", "im", "multiplicity", "oracle", "abs_err"]);
    let mut run = Run::default();
    let levels = expand(&roots);
    let reference = reference_levels(cfg, &ctx, levels.len())?;
    if let Some(r) = &reference {
        run.check(r.len() == levels.len(), || {
            format!("{} eigenvalues in the window, the jump model has {}", levels.len(), r.len())
        });
    }
    let mut slot = 0;
    for (i, r) in roots.iter().enumerate() {
        // a root of multiplicity m stands for m consecutive reference levels
        let (o, err) = match reference.as_ref().map(|v| &v[slot.min(v.len())..(slot + r.multiplicity).min(v.len())]) {
            Some(refs) if !refs.is_empty() && r.kind != RootKind::Complex => {
                let err = refs.iter().map(|o| (r.value.re - o).abs()).fold(0.0, f64::max);
                (Cell::Num(refs[0]), err)
            }
            _ => (Cell::Text(String::new()), 0.0),
        };
        run.check(err <= cfg.tol, || format!("eigenvalue {} off the jump model by {err:e}", r.value));
        slot += r.multiplicity;
        t.push(vec![
            (i + 1).into(),
            kind_name(r.kind).into(),
            r.value.re.into(),
            r.value.im.into(),
            r.multiplicity.into(),
            o,
            err.into(),
        ]);
    }
    run.table = Some(t);
    Ok(run)
}

/// Grid points at least `GRID_MARGIN` from every pole and every root; the
/// rest are reported as warnings.
fn clean_grid(cfg: &ExperimentConfig, ctx: &PunctureSpectrum, k: &PerturbationK, run: &mut Run) -> punctum::Result<Vec<f64>> {
    let roots = perturbed_spectrum(ctx, k, (cfg.lambda_min - 1.0, cfg.lambda_max + 1.0), spectrum_options(cfg))?;
    let mut out = Vec::new();
    for lam in cfg.lambda_grid() {
        let near_pole = ctx.basis().mus().iter().any(|m| (m - lam).abs() <= GRID_MARGIN);
        let near_root = roots.iter().any(|r| (r.value - lam).norm() <= GRID_MARGIN);
        if near_pole || near_root {
            run.warnings.push(format!("lambda = {lam} skipped: within {GRID_MARGIN} of the spectrum"));
        } else {
            out.push(lam);
        }
    }
    Ok(out)
}

fn krein(cfg: &ExperimentConfig, env: &Env) -> punctum::Result<Run> {
    let (ctx, k) = setup(cfg, env)?;
    let mut run = Run::default();
    let mut t = Table::new(&["lambda", "trace_re", "trace_im", "dlog_re", "dlog_im", "residual"]);
    for lam in clean_grid(cfg, &ctx, &k, &mut run)? {
        let tr = trace_difference(&ctx, &k, c(lam))?;
        let dl = log_derivative(&ctx, &k, c(lam), 1e-6 * lam.abs().max(1.0))?;
        let res = (tr + dl).norm();
        run.check(res <= cfg.tol, || format!("trace formula residual {res:e} at lambda = {lam}"));
        t.push(vec![lam.into(), tr.re.into(), tr.im.into(), dl.re.into(), dl.im.into(), res.into()]);
    }
    run.table = Some(t);
    Ok(run)
}

fn trace(cfg: &ExperimentConfig, env: &Env) -> punctum::Result<Run> {
    let (ctx, k) = setup(cfg, env)?;
    let mut run = Run::default();
    let mut t = Table::new(&["lambda", "trace_re", "trace_im", "trunc_err"]);
    for lam in clean_grid(cfg, &ctx, &k, &mut run)? {
        let (tr, err) = trace_with_truncation(&ctx, &k, c(lam))?;
        if err > cfg.tol * tr.norm().max(1.0) {
            run.warnings.push(format!("trace at lambda = {lam} moves by {err:e} between M/2 and M"));
        }
        t.push(vec![lam.into(), tr.re.into(), tr.im.into(), err.into()]);
    }
    run.table = Some(t);
    Ok(run)
}

const REPORT_COLUMNS: [&str; 7] = ["quantity", "main", "oracle", "abs_err", "rel_err", "method", "tolerance"];

fn report_row(r: &OracleReport, tol: f64) -> Vec<Cell> {
    vec![
        r.quantity.clone().into(),
        r.main.into(),
        r.oracle.into(),
        r.abs_err.into(),
        r.rel_err.into(),
        r.method.clone().into(),
        tol.into(),
    ]
}

fn push_report(t: &mut Table, run: &mut Run, r: OracleReport, tol: f64) {
    run.check(r.passes(tol), || {
        format!("{}: main {} oracle {} abs_err {:e} ({})", r.quantity, r.main, r.oracle, r.abs_err, r.method)
    });
    t.push(report_row(&r, tol));
}

fn ex1(cfg: &ExperimentConfig, env: &Env) -> punctum::Result<Run> {
    let (ctx, k) = setup(cfg, env)?;
    let leading = k.leading_rows(1);
    let mut t = Table::new(&REPORT_COLUMNS);
    let mut run = Run::default();
    if !k.row_is_zero(0) {
        run.warnings.push(format!("preset {} has a nonzero first row", cfg.preset_label()));
    }
    for lam in cfg.lambda_grid() {
        let d01 = match delta01(&ctx, &leading, c(lam)) {
            Ok(v) => v,
            Err(Error::EvaluationAtPole { .. }) => continue,
            Err(e) => return Err(e),
        };
        push_report(&mut t, &mut run, OracleReport::new(format!("delta01({lam})"), d01.norm(), 1.0, "series"), cfg.tol);
        let tr = trace_difference(&ctx, &leading, c(lam))?;
        push_report(&mut t, &mut run, OracleReport::new(format!("trace({lam})"), tr.norm(), 0.0, "series"), cfg.tol);
    }
    let roots = perturbed_spectrum(&ctx, &leading, (cfg.lambda_min, cfg.lambda_max), spectrum_options(cfg))?;
    let got = expand(&roots);
    let mus: Vec<f64> = ctx
        .basis()
        .mus()
        .into_iter()
        .filter(|m| *m >= cfg.lambda_min && *m <= cfg.lambda_max)
        .collect();
    run.check(got.len() == mus.len(), || format!("{} eigenvalues, expected {}", got.len(), mus.len()));
    for (i, (g, m)) in got.iter().zip(&mus).enumerate() {
        let tol = 1e-12 * m.abs();
        push_report(&mut t, &mut run, OracleReport::new(format!("eigenvalue {}", i + 1), *g, *m, "unperturbed"), tol);
    }
    run.check(roots.iter().all(|r| r.kind == RootKind::Retained), || "a root moved off the unperturbed spectrum".into());
    run.table = Some(t);
    Ok(run)
}

fn thm52(cfg: &ExperimentConfig, env: &Env) -> punctum::Result<Run> {
    let (ctx, mut k) = setup(cfg, env)?;
    let index = cfg.index - 1;
    if cfg.zero_entry {
        k.set_entry(0, index, c(0.0));
    }
    let r = theorem52_check(&ctx, &k, index)?;
    let opt = |v: Option<f64>| v.map(Cell::Num).unwrap_or_else(|| Cell::Text(String::new()));
    let mut t = Table::new(&[
        "index",
        "mu",
        "branch",
        "root_re",
        "root_im",
        "shift",
        "theta_weight_re",
        "theta_weight_im",
        "eigen_residual",
        "domain_residual",
    ]);
    let branch = match r.branch {
        Theorem52Branch::Node => "node",
        Theorem52Branch::Zeroed => "zeroed",
        Theorem52Branch::Generic => "generic",
    };
    t.push(vec![
        cfg.index.into(),
        r.mu.into(),
        branch.into(),
        r.root.re.into(),
        r.root.im.into(),
        r.shift.into(),
        opt(r.theta_weight.map(|w| w.re)),
        opt(r.theta_weight.map(|w| w.im)),
        opt(r.eigen_residual),
        opt(r.domain_residual),
    ]);
    let mut run = Run::with(t);
    match r.branch {
        Theorem52Branch::Generic => {
            run.check(r.shift > 1e-4, || format!("generic coupling moved mu_{} only by {:e}", cfg.index, r.shift))
        }
        _ => {
            run.check(r.shift <= cfg.tol, || format!("mu_{} moved by {:e}", cfg.index, r.shift));
            for v in [r.eigen_residual, r.domain_residual].into_iter().flatten() {
                run.check(v <= cfg.tol, || format!("eigenvector residual {v:e}"));
            }
        }
    }
    Ok(run)
}

fn oracle(cfg: &ExperimentConfig, env: &Env) -> punctum::Result<Run> {
    let mut t = Table::new(&REPORT_COLUMNS);
    let mut run = Run::default();
    let kappa = env.kappa()?;
    let x0 = KAPPA_FIXTURE_PUNCTURE;
    for row in &env.verdict.rows {
        let z = row.n as f64 * PI;
        let target = kappa * SQRT_2 * (z * x0).sin() / -(z * z);
        let r = OracleReport::new(
            format!("<G(.,{x0}), omega_{}> order {}", row.n, row.order),
            target,
            row.integral,
            "volume quadrature",
        );
        push_report(&mut t, &mut run, r, 1e-6);
    }
    if cfg.dim == Dim::One && matches!(cfg.preset, Preset::Delta | Preset::Zero) {
        let (ctx, k) = setup(cfg, env)?;
        let roots = perturbed_spectrum(&ctx, &k, (cfg.lambda_min, cfg.lambda_max), spectrum_options(cfg))?;
        let main = expand(&roots);
        let count = cfg.count.min(main.len());
        let reference = reference_levels(cfg, &ctx, count)?.unwrap_or_default();
        let strength = if cfg.preset == Preset::Zero { 0.0 } else { cfg.k };
        let ko = jump_coupling(strength, kappa, cfg.puncture[0]);
        let fd = fd_discretize_1d(999, ko, cfg.puncture[0], count)?;
        for i in 0..count.min(reference.len()) {
            let r = OracleReport::new(format!("eigenvalue {}", i + 1), main[i], reference[i], "matching condition");
            push_report(&mut t, &mut run, r, cfg.tol);
            let r = OracleReport::new(
                format!("eigenvalue {}", i + 1),
                main[i],
                fd.extrapolated[i],
                format!("finite differences n={} order {}", fd.nodes, fd.order),
            );
            push_report(&mut t, &mut run, r, fd.err[i]);
        }
        run.check(reference.len() >= count, || "jump model has fewer levels than the window".into());
    }
    run.table = Some(t);
    Ok(run)
}
