//! Assembly of spheres, transition annuli and necks into one profile curve.

use super::config::Configuration;
use super::neck::NeckSpec;
use super::sphere::{Pole, SphereGraph};
use crate::cutoff::psi_with_derivatives;
use crate::geometry::{sphere_profile, AnalyticTag, ProfileCurve, ProfileSample};
use crate::quadrature::integrate;
use crate::{Error, Result};
use std::f64::consts::PI;
use std::ops::Range;

/// Growth ratio of sphere grid spacing away from a truncated pole.
pub const GRADING_RATIO: f64 = 1.08;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Region {
    Sphere(usize),
    Transition(usize),
    Neck(usize),
}

impl Region {
    pub fn label(&self) -> String {
        match self {
            Region::Sphere(k) => format!("sphere{k}"),
            Region::Transition(k) => format!("transition{k}"),
            Region::Neck(k) => format!("neck{k}"),
        }
    }
}

/// Normalized sample positions of every piece.
///
/// Each piece lists positions in `(0, 1]` of its own parameter range; the first sphere
/// also includes `0`. Junction points belong to the earlier piece.
#[derive(Debug, Clone, PartialEq)]
pub struct GlueLayout {
    pub sphere: Vec<Vec<f64>>,
    pub transition: Vec<Vec<f64>>,
    pub neck: Vec<Vec<f64>>,
}

fn uniform(m: usize, with_start: bool) -> Vec<f64> {
    let first = if with_start { 0 } else { 1 };
    (first..=m).map(|i| i as f64 / m as f64).collect()
}

/// Nodes on `[0, len]` whose spacing grows geometrically from `h_a` and `h_b` at the
/// ends up to `h_bulk`, returned normalized to `[0, 1]`.
pub fn graded_grid(len: f64, h_a: Option<f64>, h_b: Option<f64>, h_bulk: f64) -> Vec<f64> {
    let ramp = |h0: Option<f64>| {
        let mut pos = vec![0.0];
        if let Some(mut h) = h0 {
            while h < h_bulk && pos[pos.len() - 1] + h < 0.4 * len {
                pos.push(pos[pos.len() - 1] + h);
                h *= GRADING_RATIO;
            }
        }
        pos
    };
    let a = ramp(h_a);
    let b = ramp(h_b);
    let (ea, eb) = (a[a.len() - 1], b[b.len() - 1]);
    let mid = len - ea - eb;
    let m = ((mid / h_bulk).ceil() as usize).max(1);
    let mut out: Vec<f64> = a.clone();
    for i in 1..m {
        out.push(ea + mid * i as f64 / m as f64);
    }
    out.extend(b.iter().rev().map(|v| len - v));
    out.iter().map(|v| v / len).collect()
}

fn transition_count(n: &NeckSpec) -> usize {
    ((32.0 * n.rho_prime / n.eps).ceil() as usize).max(16)
}

fn neck_count(n: &NeckSpec) -> usize {
    ((64.0 * n.rho_prime / n.eps).ceil() as usize).max(64)
}

fn sphere_range(g: &SphereGraph, left: Option<&NeckSpec>, right: Option<&NeckSpec>) -> Result<(f64, f64)> {
    let lo = match left {
        Some(n) => g.phi_at_rho(n.rho_prime, Pole::Minus)?,
        None => 0.0,
    };
    let hi = match right {
        Some(n) => g.phi_at_rho(n.rho_prime, Pole::Plus)?,
        None => PI,
    };
    Ok((lo, hi))
}

fn check_necks(necks: &[NeckSpec]) -> Result<()> {
    for n in necks {
        if !(n.rho_prime > 2.0 * n.eps) {
            return Err(Error::GeometryTooTight(format!(
                "neck {} of scale {:e} does not fit inside its matching radius",
                n.k, n.eps
            )));
        }
    }
    Ok(())
}

impl GlueLayout {
    /// Default layout: `n` bulk intervals per sphere, transitions and necks resolved at
    /// spacing `ε/64`, and graded spacing on the spheres near truncated poles.
    pub fn for_config(config: &Configuration, n: usize) -> Result<Self> {
        if n < 16 {
            return Err(Error::InvalidArgument(format!("need n ≥ 16, got {n}")));
        }
        if config.k == 1 {
            return Ok(GlueLayout {
                sphere: vec![uniform(n, true)],
                transition: Vec::new(),
                neck: Vec::new(),
            });
        }
        let graphs = config.graphs()?;
        let necks = config.necks()?;
        check_necks(&necks)?;
        let nt: Vec<usize> = necks.iter().map(transition_count).collect();
        let mut sphere = Vec::with_capacity(config.k);
        for (j, g) in graphs.iter().enumerate() {
            let left = j.checked_sub(1).map(|i| &necks[i]);
            let right = necks.get(j);
            let (lo, hi) = sphere_range(g, left, right)?;
            let h = |m: Option<&NeckSpec>, c: usize| m.map(|m| 0.5 * m.rho_prime / c as f64);
            let mut xi = graded_grid(
                hi - lo,
                h(left, if j > 0 { nt[j - 1] } else { 1 }),
                h(right, nt.get(j).copied().unwrap_or(1)),
                PI / n as f64,
            );
            if j > 0 {
                xi.remove(0);
            }
            sphere.push(xi);
        }
        Ok(GlueLayout {
            sphere,
            transition: nt.iter().map(|&m| uniform(m, false)).collect(),
            neck: necks.iter().map(|m| uniform(neck_count(m), false)).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.sphere.iter().map(Vec::len).sum::<usize>()
            + 2 * self.transition.iter().map(Vec::len).sum::<usize>()
            + self.neck.iter().map(Vec::len).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Approximate solution assembled from its pieces.
#[derive(Debug, Clone)]
pub struct GluedSurface {
    pub config: Configuration,
    pub profile: ProfileCurve<f64>,
    pub regions: Vec<Region>,
    pub necks: Vec<NeckSpec>,
    pub graphs: Vec<SphereGraph>,
    pub layout: GlueLayout,
}

impl GluedSurface {
    pub fn len(&self) -> usize {
        self.profile.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profile.is_empty()
    }

    /// Index range of the samples with the given label; transitions give both annuli.
    pub fn indices(&self, region: Region) -> Vec<usize> {
        (0..self.regions.len())
            .filter(|&i| self.regions[i] == region)
            .collect()
    }

    /// Contiguous index range of a sphere or neck region.
    pub fn range(&self, region: Region) -> Option<Range<usize>> {
        let first = self.regions.iter().position(|r| *r == region)?;
        let len = self.regions[first..].iter().take_while(|r| **r == region).count();
        Some(first..first + len)
    }

    /// Sample closest to the waist of neck `k`.
    pub fn waist_index(&self, k: usize) -> Option<usize> {
        self.range(Region::Neck(k))?.min_by(|&a, &b| {
            let pa = self.profile.samples[a].rho;
            let pb = self.profile.samples[b].rho;
            pa.total_cmp(&pb)
        })
    }

    /// Distance from each sample to the nearest neck center `(p♭_k + δ_k, 0, 0)`, with the
    /// index of that neck.
    pub fn neck_distance(&self) -> Vec<Option<(usize, f64)>> {
        self.profile
            .samples
            .iter()
            .map(|s| {
                self.necks
                    .iter()
                    .map(|n| (n.k, (s.x0 - n.waist()).hypot(s.rho)))
                    .min_by(|a, b| a.1.total_cmp(&b.1))
            })
            .collect()
    }
}

struct Builder {
    samples: Vec<ProfileSample<f64>>,
    kappa: Vec<f64>,
    regions: Vec<Region>,
    t: f64,
}

impl Builder {
    fn push(&mut self, x0: f64, rho: f64, dx0: f64, drho: f64, kappa: f64, arc: f64, region: Region) {
        if !self.samples.is_empty() {
            self.t += arc;
        }
        self.samples.push(ProfileSample {
            t: self.t,
            x0,
            rho,
            dx0,
            drho,
        });
        self.kappa.push(kappa);
        self.regions.push(region);
    }
}

/// Transition annulus as a graph `x0(rho)` blending the neck branch into the sphere.
struct Blend<'a> {
    neck: &'a NeckSpec,
    graph: &'a SphereGraph,
    pole: Pole,
    side: f64,
}

impl Blend<'_> {
    fn jet(&self, rho: f64) -> Result<(f64, f64, f64)> {
        let rp = self.neck.rho_prime;
        let (xn, xn1, xn2) = self.neck.branch(rho, self.side);
        let (xs, xs1, xs2) = self.graph.height_over_rho(rho, self.pole)?;
        let scale = 2.0 / rp;
        let (p, p1, p2) = psi_with_derivatives((rho - 0.5 * rp) * scale);
        let (w, w1, w2) = (1.0 - p, -p1 * scale, -p2 * scale * scale);
        let dx = xn - xs;
        let dx1 = xn1 - xs1;
        Ok((
            w * xn + (1.0 - w) * xs,
            w1 * dx + w * xn1 + (1.0 - w) * xs1,
            w2 * dx + 2.0 * w1 * dx1 + w * xn2 + (1.0 - w) * xs2,
        ))
    }

    fn speed(&self, rho: f64) -> f64 {
        self.jet(rho).map(|j| j.1.hypot(1.0)).unwrap_or(f64::NAN)
    }

    fn push(&self, b: &mut Builder, from: f64, rho: f64) -> Result<()> {
        let (x, x1, x2) = self.jet(rho)?;
        let w = x1.hypot(1.0);
        let arc = integrate(|r| self.speed(r), from.min(rho), from.max(rho), 8);
        b.push(
            x,
            rho,
            self.side * x1 / w,
            self.side / w,
            self.side * x2 / (w * w * w),
            arc,
            Region::Transition(self.neck.k),
        );
        Ok(())
    }
}

/// Assembles the approximate solution for `config` with the default layout.
pub fn glue(config: &Configuration, l_max: usize, n: usize) -> Result<GluedSurface> {
    let layout = GlueLayout::for_config(config, n)?;
    glue_with_layout(config, l_max, &layout)
}

/// Assembles the approximate solution with a fixed layout, so that samples move
/// smoothly with the parameters.
pub fn glue_with_layout(config: &Configuration, l_max: usize, layout: &GlueLayout) -> Result<GluedSurface> {
    let k = config.k;
    if layout.sphere.len() != k
        || layout.transition.len() + 1 != k
        || layout.neck.len() + 1 != k
    {
        return Err(Error::InvalidArgument("layout does not match the configuration".into()));
    }
    let centers = config.centers();
    let necks = config.necks()?;
    check_necks(&necks)?;
    let graphs = (0..k)
        .map(|j| {
            let ep = if j + 1 < k { config.eps[j] } else { 0.0 };
            let em = if j > 0 { config.eps[j - 1] } else { 0.0 };
            SphereGraph::new(j, centers[j], ep, em, l_max)
        })
        .collect::<Result<Vec<_>>>()?;
    if k == 1 {
        let n = layout.sphere[0].len() - 1;
        let profile = sphere_profile(config.s, n)?;
        return Ok(GluedSurface {
            config: config.clone(),
            regions: vec![Region::Sphere(0); profile.len()],
            profile,
            necks,
            graphs,
            layout: layout.clone(),
        });
    }
    let mut b = Builder {
        samples: Vec::with_capacity(layout.len()),
        kappa: Vec::with_capacity(layout.len()),
        regions: Vec::with_capacity(layout.len()),
        t: 0.0,
    };
    for (j, g) in graphs.iter().enumerate() {
        let left = j.checked_sub(1).map(|i| &necks[i]);
        let (lo, hi) = sphere_range(g, left, necks.get(j))?;
        let mut prev = lo;
        for &xi in &layout.sphere[j] {
            let phi = lo + xi * (hi - lo);
            let (s, kappa) = g.sample(phi);
            let arc = g.arc_length(prev, phi);
            b.push(s.x0, s.rho, s.dx0, s.drho, kappa, arc, Region::Sphere(j));
            prev = phi;
        }
        let Some(neck) = necks.get(j) else { break };
        let rp = neck.rho_prime;
        let left_blend = Blend { neck, graph: g, pole: Pole::Plus, side: -1.0 };
        let mut prev = rp;
        for &u in &layout.transition[j] {
            let rho = rp - 0.5 * rp * u;
            left_blend.push(&mut b, prev, rho)?;
            prev = rho;
        }
        let half = neck.half_length();
        let mut prev = -half;
        for &u in &layout.neck[j] {
            let t = -half + 2.0 * half * u;
            let (x0, rho, dx0, drho, kappa) = neck.at(t);
            b.push(x0, rho, dx0, drho, kappa, t - prev, Region::Neck(j));
            prev = t;
        }
        let right_blend = Blend { neck, graph: &graphs[j + 1], pole: Pole::Minus, side: 1.0 };
        let mut prev = 0.5 * rp;
        for &u in &layout.transition[j] {
            let rho = 0.5 * rp + 0.5 * rp * u;
            right_blend.push(&mut b, prev, rho)?;
            prev = rho;
        }
    }
    let last = b.samples.len() - 1;
    for i in 0..=last {
        let s = &b.samples[i];
        let interior = i > 0 && i < last;
        if !s.x0.is_finite() || (interior && !(s.rho > 0.0)) {
            return Err(Error::EmbeddingFailure(i));
        }
        if i > 0 && !(s.x0 > b.samples[i - 1].x0) {
            return Err(Error::EmbeddingFailure(i));
        }
    }
    Ok(GluedSurface {
        config: config.clone(),
        profile: ProfileCurve {
            samples: b.samples,
            tag: AnalyticTag::None,
            kappa: Some(b.kappa),
        },
        regions: b.regions,
        necks,
        graphs,
        layout: layout.clone(),
    })
}
