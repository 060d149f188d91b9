use pmc_core::geometry::{
    self, mean_curvature, normal_graph, second_fundamental_norm_sq, tessellate, ProfileCurve,
};
use pmc_core::Error;
use std::f64::consts::PI;

type Curve = ProfileCurve<f64>;
type R<T> = pmc_core::Result<T>;

fn sphere_profile(c: f64, n: usize) -> R<Curve> {
    geometry::sphere_profile(c, n)
}

fn catenoid_profile(eps: f64, c: f64, hw: f64, n: usize) -> R<Curve> {
    geometry::catenoid_profile(eps, c, hw, n)
}

fn cylinder_profile(r: f64, a: f64, b: f64, n: usize) -> R<Curve> {
    geometry::cylinder_profile(r, a, b, n)
}

fn max_abs_h_error(curve: &ProfileCurve<f64>, target: f64, skip_poles: bool) -> f64 {
    (0..curve.len())
        .filter(|&i| !(skip_poles && curve.samples[i].is_pole()))
        .map(|i| (mean_curvature(curve, i).unwrap() - target).abs())
        .fold(0.0, f64::max)
}

#[test]
fn sphere_equator_and_poles() {
    let s = sphere_profile(0.0, 64).unwrap();
    let eq = s.samples[32];
    assert!((eq.t - PI / 2.0).abs() < 1e-15);
    assert!(eq.x0.abs() < 1e-15 && (eq.rho - 1.0).abs() < 1e-15);
    for c in [-3.0, 0.0, 2.0, 7.5] {
        let s = sphere_profile(c, 64).unwrap();
        assert_eq!(s.samples[0].rho, 0.0);
        assert_eq!(s.samples[64].rho, 0.0);
    }
    let s = sphere_profile(2.0, 64).unwrap();
    assert!(s.samples.iter().all(|p| (1.0..=3.0).contains(&p.x0)));
}

#[test]
fn sphere_needs_sixteen_intervals() {
    assert!(matches!(sphere_profile(0.0, 15), Err(Error::InvalidArgument(_))));
}

#[test]
fn arc_length_invariant_after_constructors() {
    for c in [-1.0, 0.0, 3.0] {
        assert!(sphere_profile(c, 256).unwrap().arc_length_defect() < 1e-10);
    }
    for eps in [0.01, 0.1, 1.0] {
        let k = catenoid_profile(eps, 0.3, 2.0 * eps, 500).unwrap();
        assert!(k.arc_length_defect() < 1e-10);
        assert!(k.samples.windows(2).all(|w| w[1].t > w[0].t));
    }
}

#[test]
fn catenoid_waist_and_cosh_value() {
    let k = catenoid_profile(0.1, 0.0, 0.3, 400).unwrap();
    let w = k.samples[200];
    assert!(w.x0.abs() < 1e-15 && (w.rho - 0.1).abs() < 1e-15);
    // rho(x0) along the sampled curve matches eps cosh(x0/eps).
    for s in &k.samples {
        assert!((s.rho - 0.1 * (s.x0 / 0.1).cosh()).abs() < 1e-13);
    }
    let expect = 0.1 * 1f64.cosh();
    assert!((expect - 0.15430806).abs() < 1e-8);
}

#[test]
fn catenoid_is_even_about_center() {
    let k = catenoid_profile(0.2, 1.5, 0.5, 300).unwrap();
    let n = k.len();
    for i in 0..n {
        let a = k.samples[i];
        let b = k.samples[n - 1 - i];
        assert!(((a.x0 - 1.5) + (b.x0 - 1.5)).abs() < 1e-12);
        assert!((a.rho - b.rho).abs() < 1e-12);
    }
}

#[test]
fn catenoid_argument_checks() {
    assert!(matches!(catenoid_profile(0.0, 0.0, 1.0, 10), Err(Error::InvalidArgument(_))));
    assert!(matches!(catenoid_profile(0.1, 0.0, -1.0, 10), Err(Error::InvalidArgument(_))));
    assert!(matches!(catenoid_profile(0.001, 0.0, 0.8, 10), Err(Error::Overflow(_))));
}

#[test]
fn analytic_mean_curvatures() {
    for c in [-2.0, 0.0, 1.3] {
        let s = sphere_profile(c, 2048).unwrap();
        assert!(max_abs_h_error(&s, 2.0, false) < 1e-10);
    }
    for eps in [0.05, 0.5, 2.0] {
        let k = catenoid_profile(eps, -0.7, eps, 2048).unwrap();
        assert!(max_abs_h_error(&k, 0.0, false) < 1e-10);
    }
}

#[test]
fn finite_difference_mean_curvatures_at_2048() {
    let s = sphere_profile(0.4, 2048).unwrap().untagged();
    assert!(max_abs_h_error(&s, 2.0, true) < 1e-6);
    for eps in [1.0, 2.0, 5.0] {
        let k = catenoid_profile(eps, 0.0, eps, 2048).unwrap().untagged();
        assert!(max_abs_h_error(&k, 0.0, false) < 1e-6, "eps {eps}");
    }
}

#[test]
fn finite_difference_order_is_at_least_1_8() {
    let err = |n: usize, cat: bool| {
        if cat {
            let k = catenoid_profile(1.0, 0.0, 1.0, n).unwrap().untagged();
            max_abs_h_error(&k, 0.0, false)
        } else {
            let s = sphere_profile(0.0, n).unwrap().untagged();
            max_abs_h_error(&s, 2.0, true)
        }
    };
    for cat in [false, true] {
        let e: Vec<f64> = [256, 1024, 2048].iter().map(|&n| err(n, cat)).collect();
        let slope1 = (e[0] / e[1]).ln() / 4f64.ln();
        let slope2 = (e[1] / e[2]).ln() / 2f64.ln();
        assert!(slope1 >= 1.8 && slope2 >= 1.8, "catenoid={cat}: {e:?}");
    }
}

#[test]
fn cylinder_curvatures() {
    let c = cylinder_profile(1.0, 0.0, 2.0, 64).unwrap();
    for i in 0..c.len() {
        assert!((mean_curvature(&c, i).unwrap() - 1.0).abs() < 1e-15);
        assert!((second_fundamental_norm_sq(&c, i).unwrap() - 1.0).abs() < 1e-15);
    }
    let fd = c.untagged();
    assert!((mean_curvature(&fd, 10).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn second_fundamental_form_values() {
    let s = sphere_profile(0.0, 128).unwrap();
    for i in 0..s.len() {
        assert!((second_fundamental_norm_sq(&s, i).unwrap() - 2.0).abs() < 1e-12);
    }
    let eps = 0.1;
    let k = catenoid_profile(eps, 0.0, 0.2, 2048).unwrap();
    let waist = k.len() / 2;
    let b2 = second_fundamental_norm_sq(&k, waist).unwrap();
    assert!((b2 - 2.0 / (eps * eps)).abs() < 1e-10);
    let b2_fd = second_fundamental_norm_sq(&k.untagged(), waist).unwrap();
    assert!((b2_fd - b2).abs() / b2 < 1e-5, "{b2_fd} vs {b2}");
}

#[test]
fn normal_graph_zero_is_identity() {
    let s = sphere_profile(0.5, 64).unwrap();
    assert_eq!(normal_graph(&s, |_| 0.0).unwrap(), s);
}

#[test]
fn normal_graph_constant_gives_concentric_sphere() {
    let c = 0.2;
    let s = sphere_profile(0.0, 2048).unwrap();
    let g = normal_graph(&s, |_| c).unwrap();
    assert!(g.arc_length_defect() < 1e-10);
    for p in &g.samples {
        assert!((p.x0.hypot(p.rho) - (1.0 + c)).abs() < 1e-13);
    }
    let target = 2.0 / (1.0 + c);
    assert!(max_abs_h_error(&g, target, true) < 1e-6);
}

#[test]
fn normal_graph_along_kernel_translates() {
    let s = sphere_profile(0.0, 1024).unwrap();
    for delta in [0.05, 0.02, 0.01] {
        // <e0, N> = -cos t in this parametrization: displacing by delta·<e0,N> moves the
        // sphere by +delta along x0.
        let g = normal_graph(&s, |t| -delta * t.cos()).unwrap();
        assert!(g.arc_length_defect() < 1e-10);
        let haus = g
            .samples
            .iter()
            .map(|p| ((p.x0 - delta).hypot(p.rho) - 1.0).abs())
            .fold(0.0, f64::max);
        assert!(haus <= 2.0 * delta * delta, "delta {delta}: {haus}");
    }
}

#[test]
fn normal_graph_detects_reversal() {
    let s = sphere_profile(0.0, 64).unwrap();
    assert!(matches!(normal_graph(&s, |_| -1.5), Err(Error::SelfIntersection(_))));
}

#[test]
fn tessellated_sphere() {
    let s = sphere_profile(1.0, 64).unwrap();
    let m = tessellate(&s, 64).unwrap();
    assert_eq!(m.euler_characteristic(), 2);
    assert!((m.area() - 4.0 * PI).abs() / (4.0 * PI) < 0.01);
    for v in &m.vertices {
        let r = ((v[0] - 1.0).powi(2) + v[1] * v[1] + v[2] * v[2]).sqrt();
        assert!((r - 1.0).abs() < 1e-12);
    }
    assert_eq!(m.generated_by, (65, 64));
    assert!(m.faces.iter().flatten().all(|&i| i < m.vertices.len()));
}

#[test]
fn tessellated_sphere_faces_point_outward() {
    let m = tessellate(&sphere_profile(0.0, 32).unwrap(), 16).unwrap();
    for f in &m.faces {
        let [a, b, c] = f.map(|i| m.vertices[i]);
        let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
        let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
        let n = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
        let centroid = [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0, (a[2] + b[2] + c[2]) / 3.0];
        let dot: f64 = (0..3).map(|k| n[k] * centroid[k]).sum();
        assert!(dot > 0.0);
    }
}

#[test]
fn tessellated_catenoid_is_an_annulus() {
    let k = catenoid_profile(0.3, 0.0, 0.5, 40).unwrap();
    let m = tessellate(&k, 24).unwrap();
    assert_eq!(m.euler_characteristic(), 0);
}

#[test]
fn tessellate_rejects_small_angle_count() {
    let s = sphere_profile(0.0, 16).unwrap();
    assert!(matches!(tessellate(&s, 2), Err(Error::InvalidArgument(_))));
}

#[test]
fn obj_export_format() {
    let s = sphere_profile(0.0, 16).unwrap();
    let m = tessellate(&s, 8).unwrap();
    let obj = m.to_obj();
    let lines: Vec<&str> = obj.lines().collect();
    assert!(lines[0].starts_with('#'));
    let v: Vec<&str> = lines.iter().filter(|l| l.starts_with("v ")).copied().collect();
    let f: Vec<&str> = lines.iter().filter(|l| l.starts_with("f ")).copied().collect();
    assert_eq!(v.len(), m.vertices.len());
    assert_eq!(f.len(), m.faces.len());
    // 17 significant digits: one leading digit plus 16 after the point.
    let coord = v[1].split_whitespace().nth(1).unwrap();
    let mantissa = coord.trim_start_matches('-').split('e').next().unwrap();
    assert_eq!(mantissa.replace('.', "").len(), 17);
    for line in f {
        for idx in line.split_whitespace().skip(1) {
            let i: usize = idx.parse().unwrap();
            assert!(i >= 1 && i <= m.vertices.len());
        }
    }
    assert_eq!(obj, m.to_obj());
}

#[test]
fn single_precision_sphere() {
    let s = geometry::sphere_profile(0.0f32, 128).unwrap();
    for i in 1..s.len() - 1 {
        assert!((mean_curvature(&s, i).unwrap() - 2.0).abs() < 1e-5);
    }
}
