//! The four pipeline commands.

use crate::config::Loaded;
use crate::report::{resolve, write_atomic, Check, Report};
use crate::CliError;
use pmc_core::analysis::weight::DEFAULT_OUTER_RADIUS;
use pmc_core::analysis::*;
use pmc_core::assembly::{glue, Configuration, GluedSurface, Region};
use pmc_core::geometry::tessellate;
use pmc_core::moments::{find_balanced_s, moment_sum};
use pmc_core::{Error, Pmc};
use serde_json::json;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

type Outcome = Result<Report, CliError>;

fn stage<T>(name: &'static str, r: pmc_core::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Core { stage: name, error: e })
}

fn emit(out: &Path, rel: &str, text: &str) -> Result<(), CliError> {
    let path = resolve(out, rel);
    write_atomic(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

/// Log-log slope between the first and last entries.
fn slope(r: &[f64], v: &[f64]) -> f64 {
    let n = r.len();
    (v[0] / v[n - 1]).ln() / (r[0] / r[n - 1]).ln()
}

fn partial_sums(mu: &[f64]) -> Vec<f64> {
    mu.iter()
        .scan(0.0, |acc, m| {
            *acc += m;
            Some(*acc)
        })
        .collect()
}

fn sign_label(v: f64) -> &'static str {
    if v.abs() <= 1e-12 * (1.0 + v.abs()) {
        "0"
    } else if v > 0.0 {
        "+"
    } else {
        "-"
    }
}

pub fn moments(run: &Loaded, out: &Path) -> Outcome {
    let c = &run.config;
    let q = c.resolution.quad_order;
    let mut rep = Report::new(run.raw.clone());
    let root = stage("moments", find_balanced_s(&run.pmc, c.k, c.bracket, q))?;
    let zeros = vec![0.0; c.k - 1];
    let (total, mv) = stage("moments", moment_sum(&run.pmc, root.s0, c.k, &zeros, q))?;
    rep.set("s0", root.s0);
    rep.set("dsum", root.dsum);
    rep.set("total_at_s0", total);
    rep.set("mu", &mv.mu);
    rep.set("grid_points", c.grid_points);
    rep.check(Check::at_most("total_at_s0", total.abs(), 1e-8));
    rep.check(Check::at_least("abs_dsum", root.dsum.abs(), 1e-8));

    let (lo, hi) = c.bracket;
    let mut csv = String::from("s,total");
    for k in 1..=c.k {
        let _ = write!(csv, ",mu_{k}");
    }
    csv.push('\n');
    for i in 0..c.grid_points {
        let s = lo + (hi - lo) * i as f64 / (c.grid_points - 1) as f64;
        let (t, mv) = stage("moments", moment_sum(&run.pmc, s, c.k, &zeros, q))?;
        let _ = write!(csv, "{s:e},{t:e}");
        for m in &mv.mu {
            let _ = write!(csv, ",{m:e}");
        }
        csv.push('\n');
    }
    if let Some(p) = &c.outputs.csv_path {
        emit(out, p, &csv)?;
    }
    println!("s0 = {:.12}  dsum = {:.9}", root.s0, root.dsum);
    for (k, m) in mv.mu.iter().enumerate() {
        println!("  mu_{} = {m:+.9e}", k + 1);
    }
    Ok(rep)
}

pub fn balance(run: &Loaded, out: &Path) -> Outcome {
    let _ = out;
    let c = &run.config;
    if c.k < 2 {
        return Err(CliError::Config("balance needs K ≥ 2".into()));
    }
    let res: Resolution = c.resolution.into();
    let mut rep = Report::new(run.raw.clone());
    match solve_balancing(&run.pmc, c.k, c.r, c.bracket, &res) {
        Ok(st) => {
            let norm = sup(&st.residual);
            rep.set("feasible", st.feasible);
            rep.set("s", st.s);
            rep.set("sigma", &st.sigma);
            rep.set("delta", &st.delta);
            rep.set("eps", &st.eps);
            rep.set("residual", &st.residual);
            rep.set("residual_norm", norm);
            rep.set("iterations", st.iterations);
            rep.set("flux_constant", st.flux);
            rep.set("mu", &st.mu);
            rep.set("partial_sums", partial_sums(&st.mu));
            rep.check(Check::at_most("residual_norm", norm, 1e-8));
            let min_eps = st.eps.iter().copied().fold(f64::INFINITY, f64::min);
            rep.check(Check { name: "min_eps".into(), value: min_eps, threshold: 0.0, pass: min_eps > 0.0 });
            rep.check(Check::at_most("max_abs_delta", sup(&st.delta), c.r));
            println!("s = {:.12}  residual = {norm:.3e}", st.s);
            for (k, (e, d)) in st.eps.iter().zip(&st.delta).enumerate() {
                println!("  neck {}: eps = {e:.9e}  delta = {d:+.6e}", k + 1);
            }
            Ok(rep)
        }
        Err(e @ Error::Infeasible(_)) => {
            // Record the sign table of the telescoping sums at tangency.
            let q = c.resolution.quad_order;
            let root = stage("balance", find_balanced_s(&run.pmc, c.k, c.bracket, q))?;
            let (_, mv) = stage("balance", moment_sum(&run.pmc, root.s0, c.k, &vec![0.0; c.k - 1], q))?;
            let sums = partial_sums(&mv.mu);
            rep.set("feasible", false);
            rep.set("s", root.s0);
            rep.set("mu", &mv.mu);
            rep.set("partial_sums", &sums);
            rep.set("partial_sum_signs", sums.iter().map(|v| sign_label(*v)).collect::<Vec<_>>());
            let min_sum = sums[..c.k - 1].iter().copied().fold(f64::INFINITY, f64::min);
            rep.check(Check { name: "min_partial_sum".into(), value: min_sum, threshold: 0.0, pass: false });
            Err(CliError::WithReport { report: Box::new(rep), error: Box::new(CliError::Core { stage: "balance", error: e }) })
        }
        Err(e) => Err(CliError::Core { stage: "balance", error: e }),
    }
}

/// Configuration to assemble: user parameters, a round sphere, or the balanced solve.
fn assembly_config(run: &Loaded) -> Result<Configuration, CliError> {
    let c = &run.config;
    if let Some(p) = &c.params {
        return stage("assemble", Configuration::new(c.k, p.s, p.sigma.clone(), p.delta.clone(), c.r));
    }
    if c.k == 1 {
        return stage("assemble", Configuration::single(0.0, c.r));
    }
    let st = stage("balance", solve_balancing(&run.pmc, c.k, c.r, c.bracket, &c.resolution.into()))?;
    stage("assemble", Configuration::from_eps(c.k, st.s, st.eps, st.delta, c.r))
}

fn region_counts(surface: &GluedSurface) -> BTreeMap<&'static str, usize> {
    let mut seen = std::collections::BTreeSet::new();
    for r in &surface.regions {
        seen.insert(*r);
    }
    let mut counts = BTreeMap::from([("neck", 0), ("sphere", 0), ("transition", 0)]);
    for r in seen {
        let key = match r {
            Region::Sphere(_) => "sphere",
            Region::Neck(_) => "neck",
            Region::Transition(_) => "transition",
        };
        *counts.entry(key).or_default() += 1;
    }
    counts
}

pub fn assemble(run: &Loaded, out: &Path) -> Outcome {
    let c = &run.config;
    let config = assembly_config(run)?;
    let surface = stage("assemble", glue(&config, c.resolution.l_max, c.resolution.n_profile))?;
    let mesh = stage("assemble", tessellate(&surface.profile, c.resolution.n_angle))?;
    let h = stage("assemble", surface.profile.mean_curvatures())?;
    let zeta = stage("assemble", weight_function(&surface, DEFAULT_OUTER_RADIUS))?;

    let mut csv = String::from("index,t,x0,rho,region,H,zeta\n");
    for (i, s) in surface.profile.samples.iter().enumerate() {
        let _ = writeln!(
            csv,
            "{i},{:e},{:e},{:e},{},{:e},{:e}",
            s.t,
            s.x0,
            s.rho,
            surface.regions[i].label(),
            h[i],
            zeta.values[i]
        );
    }
    emit(out, c.outputs.mesh_path.as_deref().unwrap_or("surface.obj"), &mesh.to_obj())?;
    emit(out, c.outputs.csv_path.as_deref().unwrap_or("regions.csv"), &csv)?;

    let waists: Vec<f64> = (0..config.k - 1)
        .map(|k| surface.waist_index(k).map_or(f64::NAN, |i| surface.profile.samples[i].rho))
        .collect();
    let waist_error = waists
        .iter()
        .zip(&config.eps)
        .map(|(w, e)| ((w - e) / e).abs())
        .fold(0.0, f64::max);
    let mut rep = Report::new(run.raw.clone());
    rep.set("s", config.s);
    rep.set("sigma", &config.sigma);
    rep.set("delta", &config.delta);
    rep.set("eps", &config.eps);
    rep.set("waist_radii", &waists);
    rep.set("samples", surface.len());
    rep.set("vertices", mesh.vertices.len());
    rep.set("faces", mesh.faces.len());
    rep.set("euler_characteristic", mesh.euler_characteristic());
    rep.set("area", mesh.area());
    rep.set("regions", region_counts(&surface));
    rep.check(Check::equals("euler_characteristic", mesh.euler_characteristic() as f64, 2.0));
    if config.k > 1 {
        rep.check(Check::at_most("waist_radius_relative_error", waist_error, 0.02));
    } else {
        let center = config.centers()[0];
        let dev = mesh
            .vertices
            .iter()
            .map(|v| (((v[0] - center).powi(2) + v[1] * v[1] + v[2] * v[2]).sqrt() - 1.0).abs())
            .fold(0.0, f64::max);
        rep.set("max_radius_deviation", dev);
        rep.check(Check::at_most("max_radius_deviation", dev, 1e-10));
    }
    println!(
        "{} samples, {} vertices, {} faces, Euler characteristic {}",
        surface.len(),
        mesh.vertices.len(),
        mesh.faces.len(),
        mesh.euler_characteristic()
    );
    Ok(rep)
}

/// The `r`, `r/2`, `r/4` sweep.
fn sweep(r: f64) -> [f64; 3] {
    [r, 0.5 * r, 0.25 * r]
}

fn validate_projected(run: &Loaded, rep: &mut Report) -> Result<(), CliError> {
    let c = &run.config;
    let rs = sweep(c.r);
    let mut sups = Vec::new();
    let mut weighted = Vec::new();
    let mut iters = Vec::new();
    for r in rs {
        let config = stage("projected", Configuration::single(0.0, r))?;
        let surface = stage("projected", glue(&config, c.resolution.l_max, c.resolution.n_profile))?;
        let basis = stage("projected", projection_basis(&surface))?;
        let sol = stage("projected", solve_projected(&surface, &run.pmc, &basis, c.nu))?;
        sups.push(sup(&sol.f));
        weighted.push(sol.weighted_norm);
        iters.push(sol.newton_iters);
    }
    let control = {
        let config = stage("projected", Configuration::single(0.0, c.r))?;
        let surface = stage("projected", glue(&config, c.resolution.l_max, c.resolution.n_profile))?;
        let basis = stage("projected", projection_basis(&surface))?;
        let sol = stage("projected", solve_projected(&surface, &Pmc::zero(), &basis, c.nu))?;
        sup(&sol.f)
    };
    rep.set(
        "projected",
        json!({ "r": rs, "sup_f": sups, "weighted_f": weighted, "newton_iters": iters, "zero_forcing_sup_f": control }),
    );
    if sups.iter().all(|&v| v > 0.0) {
        rep.check(Check::at_least("projected_sup_slope", slope(&rs, &sups), 1.8));
        rep.check(Check::at_least("projected_weighted_slope", slope(&rs, &weighted), 1.8));
    }
    rep.check(Check::equals("projected_zero_forcing_sup_f", control, 0.0));
    Ok(())
}

fn validate_kernel(run: &Loaded, rep: &mut Report) -> Result<(), CliError> {
    let c = &run.config;
    let mut rows = Vec::new();
    for eps in [1e-3, 1e-4] {
        let config = if c.k == 1 {
            stage("kernel", Configuration::single(0.0, c.r))?
        } else {
            stage("kernel", Configuration::from_eps(c.k, 0.0, vec![eps; c.k - 1], vec![0.0; c.k - 1], c.r))?
        };
        let surface = stage("kernel", glue(&config, c.resolution.l_max, c.resolution.n_profile))?;
        let op = stage("kernel", linearized_operator(&surface.profile, &Pmc::zero(), c.r))?;
        let spec = stage("kernel", spectrum(&op, c.k + 1))?;
        let next = spec.eigenvalues[c.k].abs();
        rep.check(Check::equals(&format!("kernel_count_eps_{eps:e}"), spec.kernel_count as f64, c.k as f64));
        rep.check(Check::at_least(&format!("next_eigenvalue_eps_{eps:e}"), next, 0.5));
        rows.push(json!({ "eps": eps, "kernel_count": spec.kernel_count, "eigenvalues": spec.eigenvalues }));
        if c.k == 1 {
            break;
        }
    }
    rep.set("kernel", rows);
    Ok(())
}

fn validate_defect(run: &Loaded, rep: &mut Report) -> Result<(), CliError> {
    let c = &run.config;
    let res: Resolution = c.resolution.into();
    let rs = sweep(c.r);
    let mut sphere = Vec::new();
    let mut weighted = Vec::new();
    for r in rs {
        let config = if c.k == 1 {
            stage("defect", Configuration::single(0.0, r))?
        } else {
            let st = stage("balance", solve_balancing(&run.pmc, c.k, r, c.bracket, &res))?;
            stage("defect", Configuration::from_eps(c.k, st.s, st.eps, st.delta, r))?
        };
        let surface = stage("defect", glue(&config, c.resolution.l_max, c.resolution.n_profile))?;
        let d = stage("defect", defect(&surface, &run.pmc, c.nu))?;
        sphere.push(d.sup_sphere);
        weighted.push(d.weighted_norm);
    }
    let ratio: Vec<f64> = weighted.iter().zip(&rs).map(|(w, r)| w / (r * r)).collect();
    let spread = ratio.iter().copied().fold(0.0, f64::max) / ratio.iter().copied().fold(f64::INFINITY, f64::min);
    rep.set("defect", json!({ "r": rs, "sup_sphere": sphere, "weighted_norm": weighted, "weighted_over_r2": ratio }));
    rep.check(Check::at_least("defect_sphere_slope", slope(&rs, &sphere), 1.8));
    rep.check(Check::at_most("defect_weighted_constant_spread", spread, 2.0));
    Ok(())
}

pub fn validate(run: &Loaded, out: &Path) -> Outcome {
    let _ = out;
    let mut rep = Report::new(run.raw.clone());
    let stages: [fn(&Loaded, &mut Report) -> Result<(), CliError>; 3] =
        [validate_kernel, validate_projected, validate_defect];
    for f in stages {
        if let Err(e) = f(run, &mut rep) {
            rep.set("failure", e.to_string());
            return Err(CliError::WithReport { report: Box::new(rep), error: Box::new(e) });
        }
    }
    let passed = rep.checks.iter().filter(|c| c.pass).count();
    println!("{passed}/{} checks pass", rep.checks.len());
    for c in &rep.checks {
        println!("  {} {}: {:.6e} (threshold {:e})", if c.pass { "PASS" } else { "FAIL" }, c.name, c.value, c.threshold);
    }
    Ok(rep)
}
