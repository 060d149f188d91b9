use super::profile::ProfileCurve;
use crate::{Error, Real, Result};
use std::collections::HashSet;
use std::fmt::Write as _;

/// Triangle mesh of a surface of revolution.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh<T> {
    pub vertices: Vec<[T; 3]>,
    pub faces: Vec<[usize; 3]>,
    /// `(n_profile, n_angle)`.
    pub generated_by: (usize, usize),
}

impl<T: Real> Mesh<T> {
    pub fn area(&self) -> T {
        self.faces.iter().fold(T::zero(), |acc, f| {
            let [a, b, c] = f.map(|i| self.vertices[i]);
            let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
            let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
            let w = [
                u[1] * v[2] - u[2] * v[1],
                u[2] * v[0] - u[0] * v[2],
                u[0] * v[1] - u[1] * v[0],
            ];
            acc + (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt() / T::c(2.0)
        })
    }

    pub fn edge_count(&self) -> usize {
        let mut edges = HashSet::new();
        for f in &self.faces {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                edges.insert((a.min(b), a.max(b)));
            }
        }
        edges.len()
    }

    /// `V - E + F`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edge_count() as i64 + self.faces.len() as i64
    }

    /// Wavefront OBJ text with a comment header, 17 significant digits per coordinate.
    pub fn to_obj(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# pmc surface of revolution");
        let _ = writeln!(
            s,
            "# n_profile {} n_angle {} vertices {} faces {}",
            self.generated_by.0,
            self.generated_by.1,
            self.vertices.len(),
            self.faces.len()
        );
        for v in &self.vertices {
            let [x, y, z] = v.map(|c| c.to_f64().unwrap_or(f64::NAN));
            let _ = writeln!(s, "v {x:.16e} {y:.16e} {z:.16e}");
        }
        for f in &self.faces {
            let _ = writeln!(s, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
        }
        s
    }
}

#[derive(Clone, Copy)]
enum Ring {
    Pole(usize),
    Circle(usize),
}

/// Revolves the profile about the `x0` axis with `n_angle` segments; faces are wound
/// so their normals agree with the outward profile normal.
pub fn tessellate<T: Real>(curve: &ProfileCurve<T>, n_angle: usize) -> Result<Mesh<T>> {
    if n_angle < 3 {
        return Err(Error::InvalidArgument(format!("n_angle must be ≥ 3, got {n_angle}")));
    }
    if curve.len() < 2 {
        return Err(Error::InvalidArgument("profile needs two samples".into()));
    }
    let mut vertices = Vec::new();
    // Each ring is either a single pole vertex or n_angle vertices.
    let mut rings: Vec<Ring> = Vec::with_capacity(curve.len());
    for s in &curve.samples {
        if s.is_pole() {
            rings.push(Ring::Pole(vertices.len()));
            vertices.push([s.x0, T::zero(), T::zero()]);
        } else {
            rings.push(Ring::Circle(vertices.len()));
            for j in 0..n_angle {
                let a = T::c(2.0) * T::PI() * T::n(j) / T::n(n_angle);
                let (sn, cs) = a.sin_cos();
                vertices.push([s.x0, s.rho * cs, s.rho * sn]);
            }
        }
    }
    let mut faces = Vec::new();
    for w in rings.windows(2) {
        match (w[0], w[1]) {
            (Ring::Circle(a), Ring::Circle(b)) => {
                for j in 0..n_angle {
                    let k = (j + 1) % n_angle;
                    faces.push([a + j, b + k, b + j]);
                    faces.push([a + j, a + k, b + k]);
                }
            }
            (Ring::Pole(p), Ring::Circle(b)) => {
                for j in 0..n_angle {
                    faces.push([p, b + (j + 1) % n_angle, b + j]);
                }
            }
            (Ring::Circle(a), Ring::Pole(p)) => {
                for j in 0..n_angle {
                    faces.push([a + j, a + (j + 1) % n_angle, p]);
                }
            }
            (Ring::Pole(_), Ring::Pole(_)) => {
                return Err(Error::InvalidArgument("adjacent pole samples".into()));
            }
        }
    }
    Ok(Mesh {
        vertices,
        faces,
        generated_by: (curve.len(), n_angle),
    })
}
