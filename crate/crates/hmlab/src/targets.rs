//! Target charts: Riemannian and Kähler metrics with their connection and
//! curvature data, plus randomized sign-condition probes.
//!
//! Riemannian charts use real coordinates y ∈ ℝⁿ with
//!   Γ^i_{jk} = ½ g^{il}(∂_j g_{lk} + ∂_k g_{lj} − ∂_l g_{jk})
//!   R_{ijkl} = g(R(∂_i,∂_j)∂_k, ∂_l),  R(X,Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_{[X,Y]}
//! so that the space forms satisfy R_{ijkl} = κ(g_{il}g_{jk} − g_{ik}g_{jl})
//! and Ricci R_{jk} = g^{il}R_{ijkl} = κ(n−1) g_{jk}.
//!
//! Kähler charts use complex coordinates w ∈ ℂⁿ with Hermitian metric g_{ij̄},
//! Chern connection Γ^i_{jk} = g^{il̄} ∂g_{kl̄}/∂w^j and curvature
//!   R_{ij̄kl̄} = −∂²g_{kl̄}/∂w^i∂w̄^j + g^{pq̄} (∂g_{kq̄}/∂w^i)(∂g_{pl̄}/∂w̄^j).
//! The ball preset (potential −c·ln(1−|w|²)) then has
//! R_{ij̄kl̄} = −(1/c)(g_{ij̄}g_{kl̄} + g_{il̄}g_{kj̄}) and its mirror-image
//! (potential c·ln(1+|w|²)) the same with a plus sign.
//!
//! Presets evaluate closed-form expressions; custom charts fall back to nested
//! 4th-order finite differences of the supplied metric callable.

use crate::geometry::invert_hermitian_small;
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::rc::Rc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TargetError {
    #[error("point {point:?} is outside the target chart region")]
    OutsideChart { point: Vec<f64> },
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("curvature parameter {0} has the wrong sign for this preset")]
    BadCurvatureSign(f64),
    #[error("target dimension {0} must lie in 1..=3")]
    BadDimension(usize),
}

pub type RealMetricFn = Rc<dyn Fn(&[f64]) -> Vec<f64>>;
pub type ComplexMetricFn = Rc<dyn Fn(&[Complex64]) -> Vec<Complex64>>;

#[derive(Clone)]
pub enum RiemannianKind {
    Euclidean,
    /// Round sphere of curvature κ > 0 in the stereographic chart,
    /// g = 4r⁴/(r² + |y|²)²·δ with r = 1/√κ; chart capped at |y| ≤ max_radius.
    SphereStereo { kappa: f64, max_radius: f64 },
    /// Hyperbolic space of curvature κ < 0 in the ball chart,
    /// g = 4/((−κ)(1 − |y|²)²)·δ on |y| < 1 − margin.
    HyperbolicBall { kappa: f64, margin: f64 },
    Custom { metric: RealMetricFn, fd_step: f64 },
}

impl fmt::Debug for RiemannianKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RiemannianKind::Euclidean => write!(f, "Euclidean"),
            RiemannianKind::SphereStereo { kappa, max_radius } => {
                write!(f, "SphereStereo {{ kappa: {kappa}, max_radius: {max_radius} }}")
            }
            RiemannianKind::HyperbolicBall { kappa, margin } => {
                write!(f, "HyperbolicBall {{ kappa: {kappa}, margin: {margin} }}")
            }
            RiemannianKind::Custom { fd_step, .. } => {
                write!(f, "Custom {{ fd_step: {fd_step} }}")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct RiemannianTarget {
    pub n: usize,
    pub kind: RiemannianKind,
}

impl RiemannianTarget {
    pub fn euclidean(n: usize) -> Result<Self, TargetError> {
        check_dim(n)?;
        Ok(RiemannianTarget { n, kind: RiemannianKind::Euclidean })
    }

    pub fn sphere_stereo(n: usize, kappa: f64, margin: f64) -> Result<Self, TargetError> {
        check_dim(n)?;
        if kappa <= 0.0 {
            return Err(TargetError::BadCurvatureSign(kappa));
        }
        let r = 1.0 / kappa.sqrt();
        Ok(RiemannianTarget {
            n,
            kind: RiemannianKind::SphereStereo { kappa, max_radius: r / margin },
        })
    }

    pub fn hyperbolic_ball(n: usize, kappa: f64, margin: f64) -> Result<Self, TargetError> {
        check_dim(n)?;
        if kappa >= 0.0 {
            return Err(TargetError::BadCurvatureSign(kappa));
        }
        Ok(RiemannianTarget { n, kind: RiemannianKind::HyperbolicBall { kappa, margin } })
    }

    pub fn custom(n: usize, metric: RealMetricFn, fd_step: f64) -> Result<Self, TargetError> {
        check_dim(n)?;
        Ok(RiemannianTarget { n, kind: RiemannianKind::Custom { metric, fd_step } })
    }

    /// Sectional curvature for the space-form presets.
    pub fn kappa(&self) -> Option<f64> {
        match self.kind {
            RiemannianKind::Euclidean => Some(0.0),
            RiemannianKind::SphereStereo { kappa, .. }
            | RiemannianKind::HyperbolicBall { kappa, .. } => Some(kappa),
            RiemannianKind::Custom { .. } => None,
        }
    }

    pub fn check_chart(&self, y: &[f64]) -> Result<(), TargetError> {
        let r2: f64 = y.iter().map(|v| v * v).sum();
        let ok = match &self.kind {
            RiemannianKind::Euclidean | RiemannianKind::Custom { .. } => true,
            RiemannianKind::SphereStereo { max_radius, .. } => r2.sqrt() <= *max_radius,
            RiemannianKind::HyperbolicBall { margin, .. } => r2.sqrt() <= 1.0 - margin,
        };
        if ok {
            Ok(())
        } else {
            Err(TargetError::OutsideChart { point: y.to_vec() })
        }
    }

    /// ∂ψ/∂y_k for the conformal factor g = e^{2ψ}δ of the space-form charts.
    fn conformal_grad(&self, y: &[f64]) -> Option<Vec<f64>> {
        let r2: f64 = y.iter().map(|v| v * v).sum();
        match &self.kind {
            RiemannianKind::SphereStereo { kappa, .. } => {
                let rr = 1.0 / kappa; // r²
                Some(y.iter().map(|&v| -2.0 * v / (rr + r2)).collect())
            }
            RiemannianKind::HyperbolicBall { .. } => {
                Some(y.iter().map(|&v| 2.0 * v / (1.0 - r2)).collect())
            }
            _ => None,
        }
    }

    pub fn metric(&self, y: &[f64]) -> Result<Vec<f64>, TargetError> {
        self.check_chart(y)?;
        let n = self.n;
        let r2: f64 = y.iter().map(|v| v * v).sum();
        let conformal = |s: f64| {
            let mut g = vec![0.0; n * n];
            for i in 0..n {
                g[i * n + i] = s;
            }
            g
        };
        Ok(match &self.kind {
            RiemannianKind::Euclidean => conformal(1.0),
            RiemannianKind::SphereStereo { kappa, .. } => {
                let rr = 1.0 / kappa;
                let phi = 2.0 * rr / (rr + r2);
                conformal(phi * phi)
            }
            RiemannianKind::HyperbolicBall { kappa, .. } => {
                let s = 1.0 - r2;
                conformal(4.0 / ((-kappa) * s * s))
            }
            RiemannianKind::Custom { metric, .. } => metric(y),
        })
    }

    pub fn christoffel(&self, y: &[f64]) -> Result<Vec<f64>, TargetError> {
        self.check_chart(y)?;
        let n = self.n;
        if let Some(dpsi) = self.conformal_grad(y) {
            // Γ^i_{jk} = δ_{ij} ψ_k + δ_{ik} ψ_j − δ_{jk} ψ_i
            let mut gam = vec![0.0; n * n * n];
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let mut v = 0.0;
                        if i == j {
                            v += dpsi[k];
                        }
                        if i == k {
                            v += dpsi[j];
                        }
                        if j == k {
                            v -= dpsi[i];
                        }
                        gam[(i * n + j) * n + k] = v;
                    }
                }
            }
            return Ok(gam);
        }
        match &self.kind {
            RiemannianKind::Euclidean => Ok(vec![0.0; n * n * n]),
            RiemannianKind::Custom { metric, fd_step } => {
                Ok(christoffel_fd(metric, y, n, *fd_step))
            }
            _ => unreachable!(),
        }
    }

    pub fn curvature(&self, y: &[f64]) -> Result<Vec<f64>, TargetError> {
        self.check_chart(y)?;
        let n = self.n;
        match &self.kind {
            RiemannianKind::Euclidean => Ok(vec![0.0; n * n * n * n]),
            RiemannianKind::SphereStereo { kappa, .. }
            | RiemannianKind::HyperbolicBall { kappa, .. } => {
                let g = self.metric(y)?;
                let kappa = *kappa;
                let mut r = vec![0.0; n * n * n * n];
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            for l in 0..n {
                                r[((i * n + j) * n + k) * n + l] = kappa
                                    * (g[i * n + l] * g[j * n + k] - g[i * n + k] * g[j * n + l]);
                            }
                        }
                    }
                }
                Ok(r)
            }
            RiemannianKind::Custom { metric, fd_step } => {
                Ok(curvature_fd(metric, y, n, *fd_step))
            }
        }
    }

    /// Ricci tensor R_{jk} = g^{il} R_{ijkl}.
    pub fn ricci(&self, y: &[f64]) -> Result<Vec<f64>, TargetError> {
        let n = self.n;
        let g = self.metric(y)?;
        let gi = invert_sym(&g, n);
        let r = self.curvature(y)?;
        let mut ric = vec![0.0; n * n];
        for j in 0..n {
            for k in 0..n {
                let mut s = 0.0;
                for i in 0..n {
                    for l in 0..n {
                        s += gi[i * n + l] * r[((i * n + j) * n + k) * n + l];
                    }
                }
                ric[j * n + k] = s;
            }
        }
        Ok(ric)
    }
}

fn check_dim(n: usize) -> Result<(), TargetError> {
    if (1..=3).contains(&n) {
        Ok(())
    } else {
        Err(TargetError::BadDimension(n))
    }
}

fn invert_sym(g: &[f64], n: usize) -> Vec<f64> {
    let hc: Vec<Complex64> = g.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut out = vec![Complex64::default(); n * n];
    invert_hermitian_small(&hc, n, &mut out);
    out.iter().map(|v| v.re).collect()
}

/// 4th-order central difference of a vector-valued callable along axis j.
fn fd_real<F: Fn(&[f64]) -> Vec<f64>>(f: &F, y: &[f64], j: usize, h: f64) -> Vec<f64> {
    let eval = |s: f64| {
        let mut yp = y.to_vec();
        yp[j] += s * h;
        f(&yp)
    };
    let (m2, p2, p1, m1) = (eval(-2.0), eval(2.0), eval(1.0), eval(-1.0));
    m2.iter()
        .zip(&p2)
        .zip(p1.iter().zip(&m1))
        .map(|((a, b), (c, d))| (a - b + 8.0 * (c - d)) / (12.0 * h))
        .collect()
}

fn christoffel_fd(metric: &RealMetricFn, y: &[f64], n: usize, h: f64) -> Vec<f64> {
    let g = metric(y);
    let gi = invert_sym(&g, n);
    let dg: Vec<Vec<f64>> = (0..n).map(|j| fd_real(metric.as_ref(), y, j, h)).collect();
    let mut gam = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut s = 0.0;
                for l in 0..n {
                    s += gi[i * n + l]
                        * (dg[j][l * n + k] + dg[k][l * n + j] - dg[l][j * n + k]);
                }
                gam[(i * n + j) * n + k] = 0.5 * s;
            }
        }
    }
    gam
}

fn curvature_fd(metric: &RealMetricFn, y: &[f64], n: usize, h: f64) -> Vec<f64> {
    let g = metric(y);
    let gam = christoffel_fd(metric, y, n, h);
    let gam_at = |yp: &[f64]| christoffel_fd(metric, yp, n, h);
    let dgam: Vec<Vec<f64>> = (0..n).map(|a| fd_real(&gam_at, y, a, h)).collect();
    let gm = |i: usize, j: usize, k: usize| gam[(i * n + j) * n + k];
    // R(∂_i,∂_j)∂_k = Rup^m_{kij} ∂_m
    let rup = |m: usize, k: usize, i: usize, j: usize| {
        let mut v = dgam[i][(m * n + j) * n + k] - dgam[j][(m * n + i) * n + k];
        for p in 0..n {
            v += gm(m, i, p) * gm(p, j, k) - gm(m, j, p) * gm(p, i, k);
        }
        v
    };
    let mut r = vec![0.0; n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut s = 0.0;
                    for m in 0..n {
                        s += g[m * n + l] * rup(m, k, i, j);
                    }
                    r[((i * n + j) * n + k) * n + l] = s;
                }
            }
        }
    }
    r
}

#[derive(Clone)]
pub enum KahlerKind {
    Flat,
    /// Potential −c·ln(1 − |w|²) on |w| < 1 − margin; holomorphic curvature < 0.
    PoincareBall { c: f64, margin: f64 },
    /// Potential c·ln(1 + |w|²) on all of ℂⁿ; holomorphic curvature > 0.
    FubiniStudy { c: f64 },
    Custom { metric: ComplexMetricFn, fd_step: f64 },
}

impl fmt::Debug for KahlerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KahlerKind::Flat => write!(f, "Flat"),
            KahlerKind::PoincareBall { c, margin } => {
                write!(f, "PoincareBall {{ c: {c}, margin: {margin} }}")
            }
            KahlerKind::FubiniStudy { c } => write!(f, "FubiniStudy {{ c: {c} }}"),
            KahlerKind::Custom { fd_step, .. } => write!(f, "Custom {{ fd_step: {fd_step} }}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct KahlerTarget {
    pub n: usize,
    pub kind: KahlerKind,
}

impl KahlerTarget {
    pub fn flat(n: usize) -> Result<Self, TargetError> {
        check_dim(n)?;
        Ok(KahlerTarget { n, kind: KahlerKind::Flat })
    }

    pub fn poincare_ball(n: usize, c: f64, margin: f64) -> Result<Self, TargetError> {
        check_dim(n)?;
        if c <= 0.0 {
            return Err(TargetError::BadCurvatureSign(c));
        }
        Ok(KahlerTarget { n, kind: KahlerKind::PoincareBall { c, margin } })
    }

    pub fn fubini_study(n: usize, c: f64) -> Result<Self, TargetError> {
        check_dim(n)?;
        if c <= 0.0 {
            return Err(TargetError::BadCurvatureSign(c));
        }
        Ok(KahlerTarget { n, kind: KahlerKind::FubiniStudy { c } })
    }

    pub fn custom(n: usize, metric: ComplexMetricFn, fd_step: f64) -> Result<Self, TargetError> {
        check_dim(n)?;
        Ok(KahlerTarget { n, kind: KahlerKind::Custom { metric, fd_step } })
    }

    pub fn check_chart(&self, w: &[Complex64]) -> Result<(), TargetError> {
        if let KahlerKind::PoincareBall { margin, .. } = &self.kind {
            let r2: f64 = w.iter().map(|v| v.norm_sqr()).sum();
            if r2.sqrt() > 1.0 - margin {
                return Err(TargetError::OutsideChart { point: flatten_complex(w) });
            }
        }
        Ok(())
    }

    pub fn metric(&self, w: &[Complex64]) -> Result<Vec<Complex64>, TargetError> {
        self.check_chart(w)?;
        let n = self.n;
        let r2: f64 = w.iter().map(|v| v.norm_sqr()).sum();
        Ok(match &self.kind {
            KahlerKind::Flat => {
                let mut g = vec![Complex64::default(); n * n];
                for i in 0..n {
                    g[i * n + i] = Complex64::new(1.0, 0.0);
                }
                g
            }
            KahlerKind::PoincareBall { c, .. } => {
                let s = 1.0 / (1.0 - r2);
                let mut g = vec![Complex64::default(); n * n];
                for k in 0..n {
                    for l in 0..n {
                        let mut v = w[k].conj() * w[l] * (s * s);
                        if k == l {
                            v += Complex64::new(s, 0.0);
                        }
                        g[k * n + l] = c * v;
                    }
                }
                g
            }
            KahlerKind::FubiniStudy { c } => {
                let s = 1.0 / (1.0 + r2);
                let mut g = vec![Complex64::default(); n * n];
                for k in 0..n {
                    for l in 0..n {
                        let mut v = -w[k].conj() * w[l] * (s * s);
                        if k == l {
                            v += Complex64::new(s, 0.0);
                        }
                        g[k * n + l] = c * v;
                    }
                }
                g
            }
            KahlerKind::Custom { metric, .. } => metric(w),
        })
    }

    /// Chern connection Γ^i_{jk} = g^{il̄} ∂g_{kl̄}/∂w^j, symmetric in (j,k).
    pub fn christoffel(&self, w: &[Complex64]) -> Result<Vec<Complex64>, TargetError> {
        self.check_chart(w)?;
        let n = self.n;
        let r2: f64 = w.iter().map(|v| v.norm_sqr()).sum();
        // ball presets: Γ^i_{jk} = ±σ(δ_{ij} w̄_k + δ_{ik} w̄_j)
        let conformal_chern = |sigma: f64| {
            let mut gam = vec![Complex64::default(); n * n * n];
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let mut v = Complex64::default();
                        if i == j {
                            v += w[k].conj();
                        }
                        if i == k {
                            v += w[j].conj();
                        }
                        gam[(i * n + j) * n + k] = sigma * v;
                    }
                }
            }
            gam
        };
        Ok(match &self.kind {
            KahlerKind::Flat => vec![Complex64::default(); n * n * n],
            KahlerKind::PoincareBall { .. } => conformal_chern(1.0 / (1.0 - r2)),
            KahlerKind::FubiniStudy { .. } => conformal_chern(-1.0 / (1.0 + r2)),
            KahlerKind::Custom { metric, fd_step } => {
                chern_christoffel_fd(metric, w, n, *fd_step)
            }
        })
    }

    /// Curvature R_{ij̄kl̄}, stored at [((i·n+j)·n+k)·n+l].
    pub fn curvature(&self, w: &[Complex64]) -> Result<Vec<Complex64>, TargetError> {
        self.check_chart(w)?;
        let n = self.n;
        match &self.kind {
            KahlerKind::Flat => Ok(vec![Complex64::default(); n * n * n * n]),
            KahlerKind::PoincareBall { c, .. } => {
                let g = self.metric(w)?;
                Ok(space_form_kahler(&g, n, -1.0 / c))
            }
            KahlerKind::FubiniStudy { c } => {
                let g = self.metric(w)?;
                Ok(space_form_kahler(&g, n, 1.0 / c))
            }
            KahlerKind::Custom { metric, fd_step } => {
                Ok(kahler_curvature_fd(metric, w, n, *fd_step))
            }
        }
    }
}

/// R_{ij̄kl̄} = s·(g_{ij̄} g_{kl̄} + g_{il̄} g_{kj̄}).
fn space_form_kahler(g: &[Complex64], n: usize, s: f64) -> Vec<Complex64> {
    let mut r = vec![Complex64::default(); n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    r[((i * n + j) * n + k) * n + l] =
                        s * (g[i * n + j] * g[k * n + l] + g[i * n + l] * g[k * n + j]);
                }
            }
        }
    }
    r
}

fn flatten_complex(w: &[Complex64]) -> Vec<f64> {
    w.iter().flat_map(|v| [v.re, v.im]).collect()
}

/// 4th-order difference of a complex-vector callable along the real or
/// imaginary direction of coordinate j.
fn fd_complex<F: Fn(&[Complex64]) -> Vec<Complex64>>(
    f: &F,
    w: &[Complex64],
    j: usize,
    imag: bool,
    h: f64,
) -> Vec<Complex64> {
    let eval = |s: f64| {
        let mut wp = w.to_vec();
        wp[j] += if imag { Complex64::new(0.0, s * h) } else { Complex64::new(s * h, 0.0) };
        f(&wp)
    };
    let (m2, p2, p1, m1) = (eval(-2.0), eval(2.0), eval(1.0), eval(-1.0));
    m2.iter()
        .zip(&p2)
        .zip(p1.iter().zip(&m1))
        .map(|((a, b), (c, d))| (a - b + 8.0 * (c - d)) / (12.0 * h))
        .collect()
}

fn d_w<F: Fn(&[Complex64]) -> Vec<Complex64>>(
    f: &F,
    w: &[Complex64],
    j: usize,
    h: f64,
) -> Vec<Complex64> {
    let du = fd_complex(f, w, j, false, h);
    let dv = fd_complex(f, w, j, true, h);
    du.iter()
        .zip(&dv)
        .map(|(a, b)| 0.5 * (a - Complex64::new(0.0, 1.0) * b))
        .collect()
}

fn d_wbar<F: Fn(&[Complex64]) -> Vec<Complex64>>(
    f: &F,
    w: &[Complex64],
    j: usize,
    h: f64,
) -> Vec<Complex64> {
    let du = fd_complex(f, w, j, false, h);
    let dv = fd_complex(f, w, j, true, h);
    du.iter()
        .zip(&dv)
        .map(|(a, b)| 0.5 * (a + Complex64::new(0.0, 1.0) * b))
        .collect()
}

fn chern_christoffel_fd(
    metric: &ComplexMetricFn,
    w: &[Complex64],
    n: usize,
    h: f64,
) -> Vec<Complex64> {
    let g = metric(w);
    let mut gi = vec![Complex64::default(); n * n];
    invert_hermitian_small(&g, n, &mut gi);
    let dg: Vec<Vec<Complex64>> = (0..n).map(|j| d_w(metric.as_ref(), w, j, h)).collect();
    let mut gam = vec![Complex64::default(); n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut s = Complex64::default();
                for l in 0..n {
                    // g^{il̄} = conj(gi[i,l]) = gi[l,i]
                    s += gi[l * n + i] * dg[j][k * n + l];
                }
                gam[(i * n + j) * n + k] = s;
            }
        }
    }
    gam
}

fn kahler_curvature_fd(
    metric: &ComplexMetricFn,
    w: &[Complex64],
    n: usize,
    h: f64,
) -> Vec<Complex64> {
    let g = metric(w);
    let mut gi = vec![Complex64::default(); n * n];
    invert_hermitian_small(&g, n, &mut gi);
    let dg: Vec<Vec<Complex64>> = (0..n).map(|i| d_w(metric.as_ref(), w, i, h)).collect();
    let dgbar: Vec<Vec<Complex64>> = (0..n).map(|j| d_wbar(metric.as_ref(), w, j, h)).collect();
    // ∂²g/∂w^i∂w̄^j by differencing the holomorphic derivative
    let ddg: Vec<Vec<Vec<Complex64>>> = (0..n)
        .map(|i| {
            let di = |wp: &[Complex64]| d_w(metric.as_ref(), wp, i, h);
            (0..n).map(|j| d_wbar(&di, w, j, h)).collect()
        })
        .collect();
    let mut r = vec![Complex64::default(); n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut second = Complex64::default();
                    for p in 0..n {
                        for q in 0..n {
                            // g^{pq̄} = gi[q,p]
                            second += gi[q * n + p] * dg[i][k * n + q] * dgbar[j][p * n + l];
                        }
                    }
                    r[((i * n + j) * n + k) * n + l] = -ddg[i][j][k * n + l] + second;
                }
            }
        }
    }
    r
}

/// κ((Tr A)² − Tr(A²)) for a Hermitian matrix A; the value of the Hermitian
/// quadratic curvature form on any space form of sectional curvature κ.
pub fn constant_curvature_form(a: &[Complex64], n: usize, kappa: f64) -> Result<f64, TargetError> {
    for i in 0..n {
        for j in 0..=i {
            if (a[i * n + j] - a[j * n + i].conj()).norm() > 1e-9 {
                return Err(TargetError::NotHermitian);
            }
        }
    }
    let tr: f64 = (0..n).map(|i| a[i * n + i].re).sum();
    let tr2: f64 = a.iter().map(|v| v.norm_sqr()).sum();
    Ok(kappa * (tr * tr - tr2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurvatureCondition {
    SiuStronglyNegative,
    SiuStronglyPositive,
    SiuNondegenerate,
    SampsonHermitianNegative,
    SampsonHermitianPositive,
    SampsonNondegenerate,
}

impl fmt::Display for CurvatureCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CurvatureCondition::SiuStronglyNegative => "siu_strongly_negative",
            CurvatureCondition::SiuStronglyPositive => "siu_strongly_positive",
            CurvatureCondition::SiuNondegenerate => "siu_nondegenerate",
            CurvatureCondition::SampsonHermitianNegative => "sampson_hermitian_negative",
            CurvatureCondition::SampsonHermitianPositive => "sampson_hermitian_positive",
            CurvatureCondition::SampsonNondegenerate => "sampson_nondegenerate",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// The sample realizing a verdict: its matrix (the Hermitian A in an
/// orthonormal frame for the Sampson form, the rank-2 bracket for the Siu
/// form), the quadratic-form value and the numerical rank.
#[derive(Debug, Clone)]
pub struct ProbeWitness {
    pub matrix: Vec<Complex64>,
    pub value: f64,
    pub rank: usize,
}

#[derive(Debug, Clone)]
pub struct CurvatureReport {
    pub condition: CurvatureCondition,
    pub verdict: Verdict,
    pub witness: Option<ProbeWitness>,
    pub samples_used: usize,
    pub seed: u64,
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = rng.gen_range(f64::EPSILON..1.0);
    let v: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    (-2.0 * u.ln()).sqrt() * v.cos()
}

fn gaussian_c(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(gaussian(rng), gaussian(rng)) * std::f64::consts::FRAC_1_SQRT_2
}

/// Random Hermitian PSD matrix as a sum of `r` rank-one terms v v†.
fn random_psd(n: usize, r: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut b = vec![Complex64::default(); n * n];
    for _ in 0..r {
        let v: Vec<Complex64> = (0..n).map(|_| gaussian_c(rng)).collect();
        for i in 0..n {
            for j in 0..n {
                b[i * n + j] += v[i] * v[j].conj();
            }
        }
    }
    b
}

/// Numerical rank of a Hermitian PSD matrix via its realification.
fn psd_rank(b: &[Complex64], n: usize) -> usize {
    let mut real = nalgebra::DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let v = b[i * n + j];
            real[(i, j)] = v.re;
            real[(i + n, j + n)] = v.re;
            real[(i, j + n)] = -v.im;
            real[(i + n, j)] = v.im;
        }
    }
    let eig = nalgebra::SymmetricEigen::new(real);
    let max = eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    if max <= 0.0 {
        return 0;
    }
    let count = eig.eigenvalues.iter().filter(|&&l| l > 1e-10 * max).count();
    count / 2
}

/// Inverse square root of a symmetric positive-definite real matrix.
fn inv_sqrt_sym(g: &[f64], n: usize) -> Vec<f64> {
    let mat = nalgebra::DMatrix::from_fn(n, n, |i, j| g[i * n + j]);
    let eig = nalgebra::SymmetricEigen::new(mat);
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for k in 0..n {
                s += eig.eigenvectors[(i, k)] * eig.eigenvectors[(j, k)]
                    / eig.eigenvalues[k].sqrt();
            }
            out[i * n + j] = s;
        }
    }
    out
}

/// Probe the Hermitian quadratic curvature form q(A) = R_{ijkl} A^{il̄} A^{jk̄}
/// over seeded random Hermitian PSD matrices A, sampled in an orthonormal
/// frame at `point` (so that on space forms q equals `constant_curvature_form`
/// of the frame sample exactly).  Returns one report per sign condition plus
/// the non-degeneracy report.
pub fn sampson_probe(
    t: &RiemannianTarget,
    point: &[f64],
    n_samples: usize,
    seed: u64,
) -> Result<Vec<CurvatureReport>, TargetError> {
    let n = t.n;
    let g = t.metric(point)?;
    let r = t.curvature(point)?;
    let e = inv_sqrt_sym(&g, n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    struct Sample {
        b: Vec<Complex64>,
        q: f64,
        rank: usize,
    }
    let mut samples = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let rank_terms = rng.gen_range(1..=n);
        let b = random_psd(n, rank_terms, &mut rng);
        // chart components A = E B E with E = g^{-1/2}
        let mut a = vec![Complex64::default(); n * n];
        for i in 0..n {
            for l in 0..n {
                let mut s = Complex64::default();
                for p in 0..n {
                    for q in 0..n {
                        s += e[i * n + p] * b[p * n + q] * e[q * n + l];
                    }
                }
                a[i * n + l] = s;
            }
        }
        let mut q = Complex64::default();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        q += r[((i * n + j) * n + k) * n + l] * a[i * n + l] * a[j * n + k];
                    }
                }
            }
        }
        let rank = psd_rank(&b, n);
        samples.push(Sample { b, q: q.re, rank });
    }

    let scale = samples.iter().map(|s| s.q.abs()).fold(0.0f64, f64::max);
    let tol = 1e-9 * (1.0 + scale);

    let witness = |s: &Sample| ProbeWitness { matrix: s.b.clone(), value: s.q, rank: s.rank };

    let negative = {
        let bad = samples.iter().max_by(|a, b| a.q.total_cmp(&b.q)).filter(|s| s.q > tol);
        let strict = samples.iter().any(|s| s.q < -tol && s.rank >= 2);
        match (bad, strict) {
            (Some(s), _) => (Verdict::Fail, Some(witness(s))),
            (None, true) => (Verdict::Pass, None),
            (None, false) => (Verdict::Inconclusive, None),
        }
    };
    let positive = {
        let bad = samples.iter().min_by(|a, b| a.q.total_cmp(&b.q)).filter(|s| s.q < -tol);
        let strict = samples.iter().any(|s| s.q > tol && s.rank >= 2);
        match (bad, strict) {
            (Some(s), _) => (Verdict::Fail, Some(witness(s))),
            (None, true) => (Verdict::Pass, None),
            (None, false) => (Verdict::Inconclusive, None),
        }
    };
    let nondegenerate = {
        let bad = samples.iter().find(|s| s.q.abs() <= tol && s.rank >= 2);
        let informative = samples.iter().any(|s| s.rank >= 2);
        match (bad, informative) {
            (Some(s), _) => (Verdict::Fail, Some(witness(s))),
            (None, true) => (Verdict::Pass, None),
            (None, false) => (Verdict::Inconclusive, None),
        }
    };

    let make = |condition, (verdict, witness)| CurvatureReport {
        condition,
        verdict,
        witness,
        samples_used: n_samples,
        seed,
    };
    Ok(vec![
        make(CurvatureCondition::SampsonHermitianNegative, negative),
        make(CurvatureCondition::SampsonHermitianPositive, positive),
        make(CurvatureCondition::SampsonNondegenerate, nondegenerate),
    ])
}

/// Probe the complex quadratic form Q(σ) = R_{ij̄kl̄} σ^{ij} conj(σ^{lk}) over
/// seeded rank-≤2 brackets σ = A B̄ᵀ − C D̄ᵀ of random complex vectors.
pub fn siu_probe(
    t: &KahlerTarget,
    point: &[Complex64],
    n_samples: usize,
    seed: u64,
) -> Result<Vec<CurvatureReport>, TargetError> {
    let n = t.n;
    let r = t.curvature(point)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    struct Sample {
        sigma: Vec<Complex64>,
        q: f64,
        norm: f64,
    }
    let mut samples = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let vecs: Vec<Vec<Complex64>> =
            (0..4).map(|_| (0..n).map(|_| gaussian_c(&mut rng)).collect()).collect();
        let (a, b, c, d) = (&vecs[0], &vecs[1], &vecs[2], &vecs[3]);
        let mut sigma = vec![Complex64::default(); n * n];
        for i in 0..n {
            for j in 0..n {
                sigma[i * n + j] = a[i] * b[j].conj() - c[i] * d[j].conj();
            }
        }
        let mut q = Complex64::default();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        q += r[((i * n + j) * n + k) * n + l]
                            * sigma[i * n + j]
                            * sigma[l * n + k].conj();
                    }
                }
            }
        }
        let norm = sigma.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        samples.push(Sample { sigma, q: q.re, norm });
    }

    let scale = samples.iter().map(|s| s.q.abs()).fold(0.0f64, f64::max);
    let tol = 1e-9 * (1.0 + scale);
    let sigma_floor = 1e-8;

    let witness =
        |s: &Sample| ProbeWitness { matrix: s.sigma.clone(), value: s.q, rank: usize::from(s.norm > sigma_floor) };

    let negative = {
        let bad = samples.iter().max_by(|a, b| a.q.total_cmp(&b.q)).filter(|s| s.q > tol);
        let strict = samples.iter().any(|s| s.q < -tol);
        match (bad, strict) {
            (Some(s), _) => (Verdict::Fail, Some(witness(s))),
            (None, true) => (Verdict::Pass, None),
            (None, false) => (Verdict::Inconclusive, None),
        }
    };
    let positive = {
        let bad = samples.iter().min_by(|a, b| a.q.total_cmp(&b.q)).filter(|s| s.q < -tol);
        let strict = samples.iter().any(|s| s.q > tol);
        match (bad, strict) {
            (Some(s), _) => (Verdict::Fail, Some(witness(s))),
            (None, true) => (Verdict::Pass, None),
            (None, false) => (Verdict::Inconclusive, None),
        }
    };
    let nondegenerate = {
        let bad = samples.iter().find(|s| s.q.abs() <= tol && s.norm > sigma_floor);
        match bad {
            Some(s) => (Verdict::Fail, Some(witness(s))),
            None => (Verdict::Pass, None),
        }
    };

    let make = |condition, (verdict, witness)| CurvatureReport {
        condition,
        verdict,
        witness,
        samples_used: n_samples,
        seed,
    };
    Ok(vec![
        make(CurvatureCondition::SiuStronglyNegative, negative),
        make(CurvatureCondition::SiuStronglyPositive, positive),
        make(CurvatureCondition::SiuNondegenerate, nondegenerate),
    ])
}
