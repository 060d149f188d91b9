use crate::{Error, Real, Result};

/// Radius below which a sample counts as a pole.
pub const POLE_RHO: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample<T> {
    pub t: T,
    pub x0: T,
    pub rho: T,
    pub dx0: T,
    pub drho: T,
}

impl<T: Real> ProfileSample<T> {
    /// Outward unit normal `(-drho, dx0)` in the `(x0, rho)` half-plane.
    pub fn normal(&self) -> (T, T) {
        (-self.drho, self.dx0)
    }

    /// Point and normal lifted to `R^3` in the `(x0, x1)` half-plane.
    pub fn lifted(&self) -> ([T; 3], [T; 3]) {
        let (n0, nr) = self.normal();
        (
            [self.x0, self.rho, T::zero()],
            [n0, nr, T::zero()],
        )
    }

    pub fn is_pole(&self) -> bool {
        self.rho < T::c(POLE_RHO)
    }
}

/// Closed-form identity of a profile, when known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalyticTag<T> {
    None,
    Sphere { center: T },
    Catenoid { eps: T, center: T },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCurve<T> {
    pub samples: Vec<ProfileSample<T>>,
    pub tag: AnalyticTag<T>,
    /// Exact profile curvature per sample, if the constructor knows it.
    pub kappa: Option<Vec<T>>,
}

impl<T: Real> ProfileCurve<T> {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Copy with the closed-form data removed, forcing finite differences.
    pub fn untagged(&self) -> Self {
        ProfileCurve {
            samples: self.samples.clone(),
            tag: AnalyticTag::None,
            kappa: None,
        }
    }

    /// Largest deviation of `dx0^2 + drho^2` from one.
    pub fn arc_length_defect(&self) -> T {
        self.samples.iter().fold(T::zero(), |m, s| {
            m.max((s.dx0 * s.dx0 + s.drho * s.drho - T::one()).abs())
        })
    }

    /// Profile curvature `kappa1 = drho x0'' - dx0 rho''` at every sample.
    pub fn profile_curvatures(&self) -> Vec<T> {
        if let Some(k) = &self.kappa {
            return k.clone();
        }
        match self.tag {
            AnalyticTag::Sphere { .. } => vec![T::one(); self.len()],
            AnalyticTag::Catenoid { eps, .. } => self
                .samples
                .iter()
                .map(|s| -eps / (s.rho * s.rho))
                .collect(),
            AnalyticTag::None => {
                let t: Vec<T> = self.samples.iter().map(|s| s.t).collect();
                let dx: Vec<T> = self.samples.iter().map(|s| s.dx0).collect();
                let dr: Vec<T> = self.samples.iter().map(|s| s.drho).collect();
                let ddx = derivative(&t, &dx);
                let ddr = derivative(&t, &dr);
                self.samples
                    .iter()
                    .enumerate()
                    .map(|(i, s)| s.drho * ddx[i] - s.dx0 * ddr[i])
                    .collect()
            }
        }
    }

    fn has_closed_form(&self) -> bool {
        self.kappa.is_some() || !matches!(self.tag, AnalyticTag::None)
    }

    /// Principal curvatures `(kappa1, kappa2)` at every sample.
    pub fn principal_curvatures(&self) -> Result<Vec<(T, T)>> {
        let k1 = self.profile_curvatures();
        let closed = self.has_closed_form();
        self.samples
            .iter()
            .enumerate()
            .map(|(i, s)| {
                if s.is_pole() {
                    if closed {
                        Ok((k1[i], k1[i]))
                    } else {
                        Err(Error::PoleSingularity(i))
                    }
                } else {
                    Ok((k1[i], s.dx0 / s.rho))
                }
            })
            .collect()
    }

    /// Mean curvature at every sample.
    pub fn mean_curvatures(&self) -> Result<Vec<T>> {
        Ok(self
            .principal_curvatures()?
            .into_iter()
            .map(|(a, b)| a + b)
            .collect())
    }

    fn check_index(&self, at: usize) -> Result<()> {
        if at >= self.len() {
            return Err(Error::InvalidArgument(format!(
                "sample {at} out of range for {} samples",
                self.len()
            )));
        }
        Ok(())
    }

    fn curvatures_at(&self, at: usize) -> Result<(T, T)> {
        self.check_index(at)?;
        let s = &self.samples[at];
        let closed = self.has_closed_form();
        if s.is_pole() && !closed {
            return Err(Error::PoleSingularity(at));
        }
        let k1 = if let Some(k) = &self.kappa {
            k[at]
        } else {
            match self.tag {
                AnalyticTag::Sphere { .. } => T::one(),
                AnalyticTag::Catenoid { eps, .. } => -eps / (s.rho * s.rho),
                AnalyticTag::None => self.fd_kappa_at(at),
            }
        };
        let k2 = if s.is_pole() { k1 } else { s.dx0 / s.rho };
        Ok((k1, k2))
    }

    fn fd_kappa_at(&self, i: usize) -> T {
        let n = self.len();
        let (a, b) = if i == 0 {
            (0, 3.min(n))
        } else if i + 1 == n {
            (n.saturating_sub(3), n)
        } else {
            (i - 1, i + 2)
        };
        let t: Vec<T> = self.samples[a..b].iter().map(|s| s.t).collect();
        let dx: Vec<T> = self.samples[a..b].iter().map(|s| s.dx0).collect();
        let dr: Vec<T> = self.samples[a..b].iter().map(|s| s.drho).collect();
        let j = i - a;
        let ddx = derivative(&t, &dx)[j];
        let ddr = derivative(&t, &dr)[j];
        let s = &self.samples[i];
        s.drho * ddx - s.dx0 * ddr
    }
}

/// Second-order derivative of samples `y(t)` on a non-uniform grid.
pub(crate) fn derivative<T: Real>(t: &[T], y: &[T]) -> Vec<T> {
    let n = t.len();
    let mut d = vec![T::zero(); n];
    if n < 2 {
        return d;
    }
    if n == 2 {
        let s = (y[1] - y[0]) / (t[1] - t[0]);
        return vec![s, s];
    }
    let three_point = |t0: T, t1: T, t2: T, y0: T, y1: T, y2: T, at: T| {
        // Derivative at `at` of the quadratic through the three points.
        let l0 = (T::c(2.0) * at - t1 - t2) / ((t0 - t1) * (t0 - t2));
        let l1 = (T::c(2.0) * at - t0 - t2) / ((t1 - t0) * (t1 - t2));
        let l2 = (T::c(2.0) * at - t0 - t1) / ((t2 - t0) * (t2 - t1));
        l0 * y0 + l1 * y1 + l2 * y2
    };
    for i in 0..n {
        let c = i.clamp(1, n - 2);
        d[i] = three_point(
            t[c - 1],
            t[c],
            t[c + 1],
            y[c - 1],
            y[c],
            y[c + 1],
            t[i],
        );
    }
    d
}

/// Mean curvature `kappa1 + kappa2` at one sample.
pub fn mean_curvature<T: Real>(curve: &ProfileCurve<T>, at: usize) -> Result<T> {
    let (a, b) = curve.curvatures_at(at)?;
    Ok(a + b)
}

/// `|B|^2 = kappa1^2 + kappa2^2` at one sample.
pub fn second_fundamental_norm_sq<T: Real>(curve: &ProfileCurve<T>, at: usize) -> Result<T> {
    let (a, b) = curve.curvatures_at(at)?;
    Ok(a * a + b * b)
}

/// Unit sphere about `(center, 0, 0)`: `x0 = center - cos t`, `rho = sin t`, `t ∈ [0, π]`.
pub fn sphere_profile<T: Real>(center: T, n: usize) -> Result<ProfileCurve<T>> {
    if n < 16 {
        return Err(Error::InvalidArgument(format!("sphere_profile needs n ≥ 16, got {n}")));
    }
    let samples = (0..=n)
        .map(|i| {
            let t = T::PI() * T::n(i) / T::n(n);
            let (s, c) = t.sin_cos();
            let rho = if i == 0 || i == n { T::zero() } else { s };
            ProfileSample {
                t,
                x0: center - c,
                rho,
                dx0: s,
                drho: c,
            }
        })
        .collect();
    Ok(ProfileCurve {
        samples,
        tag: AnalyticTag::Sphere { center },
        kappa: None,
    })
}

/// Catenoid `rho = eps cosh((x0 - center)/eps)` over `|x0 - center| ≤ half_width`,
/// sampled uniformly in arc length measured from the waist.
pub fn catenoid_profile<T: Real>(
    eps: T,
    center: T,
    half_width: T,
    n: usize,
) -> Result<ProfileCurve<T>> {
    if !(eps > T::zero()) || !(half_width > T::zero()) {
        return Err(Error::InvalidArgument(
            "catenoid needs positive eps and half_width".into(),
        ));
    }
    if half_width / eps > T::c(700.0) {
        return Err(Error::Overflow(format!(
            "half_width/eps = {} exceeds 700",
            half_width / eps
        )));
    }
    if n < 2 {
        return Err(Error::InvalidArgument("catenoid needs n ≥ 2".into()));
    }
    let big_t = eps * (half_width / eps).sinh();
    let samples = (0..=n)
        .map(|i| {
            let t = -big_t + T::c(2.0) * big_t * T::n(i) / T::n(n);
            let rho = (eps * eps + t * t).sqrt();
            ProfileSample {
                t,
                x0: center + eps * (t / eps).asinh(),
                rho,
                dx0: eps / rho,
                drho: t / rho,
            }
        })
        .collect();
    Ok(ProfileCurve {
        samples,
        tag: AnalyticTag::Catenoid { eps, center },
        kappa: None,
    })
}

/// Cylinder `rho = radius` over `x0 ∈ [a, b]`.
pub fn cylinder_profile<T: Real>(radius: T, a: T, b: T, n: usize) -> Result<ProfileCurve<T>> {
    if !(radius > T::zero()) || !(b > a) || n < 2 {
        return Err(Error::InvalidArgument("degenerate cylinder".into()));
    }
    let samples = (0..=n)
        .map(|i| {
            let t = (b - a) * T::n(i) / T::n(n);
            ProfileSample {
                t,
                x0: a + t,
                rho: radius,
                dx0: T::one(),
                drho: T::zero(),
            }
        })
        .collect();
    Ok(ProfileCurve {
        samples,
        tag: AnalyticTag::None,
        kappa: Some(vec![T::zero(); n + 1]),
    })
}

/// Displaces every sample by `f(t)` along the outward normal and re-parametrizes by
/// arc length.
pub fn normal_graph<T: Real>(
    curve: &ProfileCurve<T>,
    f: impl Fn(T) -> T,
) -> Result<ProfileCurve<T>> {
    let h = T::epsilon().cbrt();
    let two = T::c(2.0);
    let vals: Vec<(T, T)> = curve
        .samples
        .iter()
        .map(|s| {
            let step = h * T::one().max(s.t.abs());
            (f(s.t), (f(s.t + step) - f(s.t - step)) / (two * step))
        })
        .collect();
    displace(curve, &vals)
}

/// [`normal_graph`] for a function given by its sample values; the arc-length
/// derivative is taken by finite differences on the sample grid.
pub fn normal_graph_values<T: Real>(curve: &ProfileCurve<T>, f: &[T]) -> Result<ProfileCurve<T>> {
    if f.len() != curve.len() {
        return Err(Error::InvalidArgument(format!(
            "{} values for {} samples",
            f.len(),
            curve.len()
        )));
    }
    let t: Vec<T> = curve.samples.iter().map(|s| s.t).collect();
    let d = derivative(&t, f);
    let vals: Vec<(T, T)> = f.iter().copied().zip(d).collect();
    displace(curve, &vals)
}

fn displace<T: Real>(curve: &ProfileCurve<T>, vals: &[(T, T)]) -> Result<ProfileCurve<T>> {
    let n = curve.len();
    let k1 = curve.profile_curvatures();
    let two = T::c(2.0);
    if vals.iter().all(|&(v, d)| v == T::zero() && d == T::zero()) {
        return Ok(curve.clone());
    }
    let mut out = Vec::with_capacity(n);
    let mut speed_prev = T::zero();
    let mut t = T::zero();
    for (i, s) in curve.samples.iter().enumerate() {
        let (fv, fd) = vals[i];
        let (n0, nr) = s.normal();
        let stretch = T::one() + k1[i] * fv;
        if stretch <= T::zero() {
            return Err(Error::SelfIntersection(i));
        }
        let tx = stretch * s.dx0 + fd * n0;
        let tr = stretch * s.drho + fd * nr;
        let speed = tx.hypot(tr);
        let mut rho = s.rho + fv * nr;
        if rho < T::zero() {
            if rho < -T::c(1e3) * T::epsilon() {
                return Err(Error::SelfIntersection(i));
            }
            rho = T::zero();
        }
        if i > 0 {
            let dt = curve.samples[i].t - curve.samples[i - 1].t;
            t = t + (speed + speed_prev) / two * dt;
        } else {
            t = s.t;
        }
        speed_prev = speed;
        out.push(ProfileSample {
            t,
            x0: s.x0 + fv * n0,
            rho,
            dx0: tx / speed,
            drho: tr / speed,
        });
    }
    Ok(ProfileCurve {
        samples: out,
        tag: AnalyticTag::None,
        kappa: None,
    })
}
