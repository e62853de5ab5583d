//! Domain geometry: Hermitian metrics on the complex torus and their
//! connection data.
//!
//! The domain is always the torus ℂ^m/(period·ℤ)^{2m} with complex coordinates
//! z^α = x^{2α-1} + i x^{2α}.  A metric field assigns to each grid point a
//! Hermitian positive-definite matrix h_{αβ̄}(z); from it we derive
//!
//!   h^{αβ̄}      dual metric, h^{αβ̄} h_{γβ̄} = δ^α_γ (stored as the matrix
//!               inverse of [h_{αβ̄}], so h^{αβ̄} = conj(h_inv[α,β]))
//!   Γ^γ_{αβ̄}   = ½ h^{γδ̄} (∂h_{αδ̄}/∂z̄^β − ∂h_{αβ̄}/∂z̄^δ)
//!   Γ^γ_{αβ}    = ½ h^{γδ̄} (∂h_{αδ̄}/∂z^β + ∂h_{βδ̄}/∂z^α)
//!   ω_h         = (i/2) h_{αβ̄} dz^α ∧ dz̄^β
//!   vol         = det h (the density of ω_h^m/m! against Lebesgue measure)
//!
//! All metric derivatives are 4th-order central differences with periodic
//! wrap.  The conformal presets h = e^{2u}δ admit closed-form connection
//! coefficients, which the tests use as independent oracles.

use crate::expr::{Expr, ExprError};
use crate::forms::{l2_norm, FormField};
use crate::grid::{d_z, d_zbar, Grid, GridError, GridSpec};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("metric sample is not Hermitian at grid point {point:?}")]
    NotHermitian { point: Vec<f64> },
    #[error("metric is not positive definite at grid point {point:?} (leading {minor}×{minor} minor ≤ 0)")]
    NotPositiveDefinite { point: Vec<f64>, minor: usize },
    #[error("metric sample has {got} entries, expected m² = {want}")]
    BadShape { got: usize, want: usize },
    #[error("wave vector has {got} entries, expected 2m = {want}")]
    BadWave { got: usize, want: usize },
    #[error("conformal-factor expression: {0}")]
    Expr(#[from] ExprError),
    #[error("expression uses variable x{0} beyond the 2m chart coordinates")]
    ExprVar(usize),
}

/// How to produce the metric field.
#[derive(Debug, Clone)]
pub enum MetricSpec {
    /// h = identity.
    Flat,
    /// h = e^{2u}·identity with u = amplitude · cos(wave · x).
    Conformal { amplitude: f64, wave: Vec<i32> },
    /// h = e^{2u}·identity with u given by an expression in x1..x_{2m}.
    CustomConformal { u: String },
}

/// The domain: a periodic grid, the Hermitian metric field and everything
/// derived from it.  Immutable after construction.
#[derive(Debug, Clone)]
pub struct HermitianDomain {
    pub grid: Grid,
    /// h[p·m² + α·m + β] = h_{αβ̄}(p).
    pub h: Vec<Complex64>,
    /// Pointwise matrix inverse of h, same layout; h^{αβ̄} = h_inv[p·m² + β·m + α].
    pub h_inv: Vec<Complex64>,
    /// gamma_mixed[((p·m + γ)·m + α)·m + β] = Γ^γ_{αβ̄}(p).
    pub gamma_mixed: Vec<Complex64>,
    /// gamma_holo[((p·m + γ)·m + α)·m + β] = Γ^γ_{αβ}(p), symmetric in (α,β).
    pub gamma_holo: Vec<Complex64>,
    /// Fundamental (1,1)-form ω_h.
    pub omega: FormField,
    /// det h per grid point.
    pub vol: Vec<f64>,
    /// max over the grid of the largest eigenvalue of h^{-1} (time-step bound).
    pub max_inv_eig: f64,
}

impl HermitianDomain {
    #[inline]
    pub fn h_at(&self, p: usize) -> &[Complex64] {
        let mm = self.grid.m * self.grid.m;
        &self.h[p * mm..(p + 1) * mm]
    }

    #[inline]
    pub fn hinv_at(&self, p: usize) -> &[Complex64] {
        let mm = self.grid.m * self.grid.m;
        &self.h_inv[p * mm..(p + 1) * mm]
    }

    /// Dual metric h^{αβ̄} at point `p` (conjugate of the matrix inverse entry).
    #[inline]
    pub fn h_upper(&self, p: usize, a: usize, b: usize) -> Complex64 {
        let m = self.grid.m;
        self.h_inv[p * m * m + b * m + a]
    }

    #[inline]
    pub fn gamma_mixed_at(&self, p: usize, g: usize, a: usize, b: usize) -> Complex64 {
        let m = self.grid.m;
        self.gamma_mixed[((p * m + g) * m + a) * m + b]
    }

    #[inline]
    pub fn gamma_holo_at(&self, p: usize, g: usize, a: usize, b: usize) -> Complex64 {
        let m = self.grid.m;
        self.gamma_holo[((p * m + g) * m + a) * m + b]
    }

    /// Coefficients t_γ of the co-differential of the fundamental form,
    /// ∂̄*ω_h = i t_γ dz^γ with t_γ = Σ_β conj(Γ^β_{βγ̄}); the returned field
    /// already includes the factor i.  Vanishes iff the metric is balanced.
    pub fn torsion_trace(&self) -> Vec<Complex64> {
        let m = self.grid.m;
        let mut out = vec![Complex64::default(); self.grid.len * m];
        for p in 0..self.grid.len {
            for g in 0..m {
                let mut s = Complex64::default();
                for b in 0..m {
                    s += self.gamma_mixed_at(p, b, b, g).conj();
                }
                out[p * m + g] = Complex64::new(0.0, 1.0) * s;
            }
        }
        out
    }

    /// Metric trace of the mixed connection, A^γ = h^{αβ̄} Γ^γ_{αβ̄}.  This is
    /// the coefficient entering the divergence form of the harmonic equations;
    /// like `torsion_trace` it vanishes iff the metric is balanced, but for a
    /// non-conformal h the two fields are genuinely different one-forms.
    pub fn gamma_mixed_trace(&self) -> Vec<Complex64> {
        let m = self.grid.m;
        let mut out = vec![Complex64::default(); self.grid.len * m];
        for p in 0..self.grid.len {
            for g in 0..m {
                let mut s = Complex64::default();
                for a in 0..m {
                    for b in 0..m {
                        s += self.h_upper(p, a, b) * self.gamma_mixed_at(p, g, a, b);
                    }
                }
                out[p * m + g] = s;
            }
        }
        out
    }
}

/// Build the domain from a preset metric.
pub fn build_domain(spec: GridSpec, metric: &MetricSpec) -> Result<HermitianDomain, GeometryError> {
    let dims = 2 * spec.m;
    match metric {
        MetricSpec::Flat => {
            let m = spec.m;
            build_domain_with(spec, move |_| {
                let mut h = vec![Complex64::default(); m * m];
                for a in 0..m {
                    h[a * m + a] = Complex64::new(1.0, 0.0);
                }
                h
            })
        }
        MetricSpec::Conformal { amplitude, wave } => {
            if wave.len() != dims {
                return Err(GeometryError::BadWave { got: wave.len(), want: dims });
            }
            let m = spec.m;
            let amplitude = *amplitude;
            let wave = wave.clone();
            build_domain_with(spec, move |x| {
                let phase: f64 = wave.iter().zip(x).map(|(&k, &xi)| k as f64 * xi).sum();
                let u = amplitude * phase.cos();
                conformal_matrix(m, u)
            })
        }
        MetricSpec::CustomConformal { u } => {
            let expr = Expr::parse(u)?;
            if expr.max_var() >= dims {
                return Err(GeometryError::ExprVar(expr.max_var() + 1));
            }
            let m = spec.m;
            build_domain_with(spec, move |x| conformal_matrix(m, expr.eval(x)))
        }
    }
}

fn conformal_matrix(m: usize, u: f64) -> Vec<Complex64> {
    let s = (2.0 * u).exp();
    let mut h = vec![Complex64::default(); m * m];
    for a in 0..m {
        h[a * m + a] = Complex64::new(s, 0.0);
    }
    h
}

/// Build the domain from an arbitrary metric callable x ↦ [h_{αβ̄}] (row-major
/// m×m).  The sample is validated for Hermiticity and positive definiteness at
/// every grid point before any derivative is taken.
pub fn build_domain_with<F>(spec: GridSpec, metric_at: F) -> Result<HermitianDomain, GeometryError>
where
    F: Fn(&[f64]) -> Vec<Complex64>,
{
    let grid = Grid::new(spec)?;
    let m = grid.m;
    let mm = m * m;

    let mut h = vec![Complex64::default(); grid.len * mm];
    for p in 0..grid.len {
        let x = grid.coords(p);
        let hp = metric_at(&x[..grid.dims]);
        if hp.len() != mm {
            return Err(GeometryError::BadShape { got: hp.len(), want: mm });
        }
        for a in 0..m {
            for b in 0..=a {
                if (hp[a * m + b] - hp[b * m + a].conj()).norm() > 1e-9 {
                    return Err(GeometryError::NotHermitian { point: x[..grid.dims].to_vec() });
                }
            }
        }
        if let Some(minor) = failed_leading_minor(&hp, m) {
            return Err(GeometryError::NotPositiveDefinite {
                point: x[..grid.dims].to_vec(),
                minor,
            });
        }
        h[p * mm..(p + 1) * mm].copy_from_slice(&hp);
    }

    let mut h_inv = vec![Complex64::default(); grid.len * mm];
    let mut vol = vec![0.0; grid.len];
    let mut max_inv_eig: f64 = 0.0;
    for p in 0..grid.len {
        let hp = &h[p * mm..(p + 1) * mm];
        let det = invert_hermitian_small(hp, m, &mut h_inv[p * mm..(p + 1) * mm]);
        vol[p] = det;
        max_inv_eig = max_inv_eig.max(1.0 / min_eigenvalue(hp, m));
    }

    // Γ^γ_{αβ̄} = ½ h^{γδ̄} (∂h_{αδ̄}/∂z̄^β − ∂h_{αβ̄}/∂z̄^δ)
    let mut gamma_mixed = vec![Complex64::default(); grid.len * m * mm];
    {
        let dhb: Vec<Vec<Complex64>> = (0..m).map(|b| d_zbar(&grid, &h, mm, b)).collect();
        for p in 0..grid.len {
            for g in 0..m {
                for a in 0..m {
                    for b in 0..m {
                        let mut s = Complex64::default();
                        for d in 0..m {
                            let hu = h_inv[p * mm + d * m + g]; // h^{γδ̄}
                            s += hu * (dhb[b][p * mm + a * m + d] - dhb[d][p * mm + a * m + b]);
                        }
                        gamma_mixed[((p * m + g) * m + a) * m + b] = 0.5 * s;
                    }
                }
            }
        }
    }

    // Γ^γ_{αβ} = ½ h^{γδ̄} (∂h_{αδ̄}/∂z^β + ∂h_{βδ̄}/∂z^α)
    let mut gamma_holo = vec![Complex64::default(); grid.len * m * mm];
    {
        let dha: Vec<Vec<Complex64>> = (0..m).map(|a| d_z(&grid, &h, mm, a)).collect();
        for p in 0..grid.len {
            for g in 0..m {
                for a in 0..m {
                    for b in 0..m {
                        let mut s = Complex64::default();
                        for d in 0..m {
                            let hu = h_inv[p * mm + d * m + g];
                            s += hu * (dha[b][p * mm + a * m + d] + dha[a][p * mm + b * m + d]);
                        }
                        gamma_holo[((p * m + g) * m + a) * m + b] = 0.5 * s;
                    }
                }
            }
        }
    }

    let mut omega = FormField::zero(&grid, 1, 1);
    for a in 0..m {
        for b in 0..m {
            let dst = omega.comp_mut(a, b);
            for (p, v) in dst.iter_mut().enumerate() {
                *v = Complex64::new(0.0, 0.5) * h[p * mm + a * m + b];
            }
        }
    }

    Ok(HermitianDomain { grid, h, h_inv, gamma_mixed, gamma_holo, omega, vol, max_inv_eig })
}

/// First leading principal minor that fails Sylvester's criterion, if any.
fn failed_leading_minor(h: &[Complex64], m: usize) -> Option<usize> {
    for k in 1..=m {
        let mut sub = vec![Complex64::default(); k * k];
        for a in 0..k {
            for b in 0..k {
                sub[a * k + b] = h[a * m + b];
            }
        }
        if hermitian_det(&sub, k) <= 0.0 {
            return Some(k);
        }
    }
    None
}

/// Determinant of a Hermitian 1×1..3×3 matrix (real by Hermiticity).
pub fn hermitian_det(h: &[Complex64], m: usize) -> f64 {
    match m {
        1 => h[0].re,
        2 => (h[0] * h[3] - h[1] * h[2]).re,
        3 => (h[0] * (h[4] * h[8] - h[5] * h[7]) - h[1] * (h[3] * h[8] - h[5] * h[6])
            + h[2] * (h[3] * h[7] - h[4] * h[6]))
            .re,
        _ => unreachable!("m ≤ 3"),
    }
}

/// Invert the small Hermitian matrix in place of `out`; returns det.
pub fn invert_hermitian_small(h: &[Complex64], m: usize, out: &mut [Complex64]) -> f64 {
    let det = hermitian_det(h, m);
    match m {
        1 => {
            out[0] = Complex64::new(1.0 / det, 0.0);
        }
        2 => {
            let d = Complex64::new(1.0 / det, 0.0);
            out[0] = h[3] * d;
            out[1] = -h[1] * d;
            out[2] = -h[2] * d;
            out[3] = h[0] * d;
        }
        3 => {
            let d = Complex64::new(1.0 / det, 0.0);
            let e = |r: usize, c: usize| h[r * 3 + c];
            // adjugate (cofactor transpose)
            out[0] = (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) * d;
            out[1] = (e(0, 2) * e(2, 1) - e(0, 1) * e(2, 2)) * d;
            out[2] = (e(0, 1) * e(1, 2) - e(0, 2) * e(1, 1)) * d;
            out[3] = (e(1, 2) * e(2, 0) - e(1, 0) * e(2, 2)) * d;
            out[4] = (e(0, 0) * e(2, 2) - e(0, 2) * e(2, 0)) * d;
            out[5] = (e(0, 2) * e(1, 0) - e(0, 0) * e(1, 2)) * d;
            out[6] = (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0)) * d;
            out[7] = (e(0, 1) * e(2, 0) - e(0, 0) * e(2, 1)) * d;
            out[8] = (e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0)) * d;
        }
        _ => unreachable!("m ≤ 3"),
    }
    det
}

/// Smallest eigenvalue of a Hermitian 1×1..3×3 matrix.
fn min_eigenvalue(h: &[Complex64], m: usize) -> f64 {
    match m {
        1 => h[0].re,
        2 => {
            let tr = h[0].re + h[3].re;
            let det = hermitian_det(h, 2);
            0.5 * (tr - (tr * tr - 4.0 * det).max(0.0).sqrt())
        }
        3 => {
            // realify: eigenvalues of [[Re h, -Im h], [Im h, Re h]] are those
            // of h, each with multiplicity two
            let mut real = nalgebra::DMatrix::<f64>::zeros(6, 6);
            for a in 0..3 {
                for b in 0..3 {
                    let v = h[a * 3 + b];
                    real[(a, b)] = v.re;
                    real[(a + 3, b + 3)] = v.re;
                    real[(a, b + 3)] = -v.im;
                    real[(a + 3, b)] = v.im;
                }
            }
            let eig = nalgebra::SymmetricEigen::new(real);
            eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
        }
        _ => unreachable!("m ≤ 3"),
    }
}

/// Verdicts on the metric's class: Kähler (dω = 0), balanced (d ω^{m-1} = 0)
/// and the ∂∂̄ω^{m-2} = 0 condition (trivial below m = 3).
#[derive(Debug, Clone)]
pub struct MetricClassReport {
    pub kahler_residual: f64,
    pub balanced_residual: f64,
    pub astheno_residual: f64,
    pub kahler: bool,
    pub balanced: bool,
    pub astheno: bool,
    /// ‖ω‖_{L²}: the scale the verdict tolerance is relative to.
    pub scale: f64,
    pub tol: f64,
}

pub fn classify_metric(dom: &HermitianDomain, tol: f64) -> MetricClassReport {
    let grid = &dom.grid;
    let m = grid.m;
    let scale = l2_norm(grid, &dom.omega, &dom.h_inv, &dom.vol);

    let norm_d = |f: &FormField| -> f64 {
        let np = l2_norm(grid, &f.partial(grid), &dom.h_inv, &dom.vol);
        let nb = l2_norm(grid, &f.dbar(grid), &dom.h_inv, &dom.vol);
        np.hypot(nb)
    };

    let kahler_residual = norm_d(&dom.omega);

    let omega_pow = |k: usize| -> FormField {
        let mut acc = FormField::zero(grid, 0, 0);
        for v in acc.comp_mut(0, 0).iter_mut() {
            *v = Complex64::new(1.0, 0.0);
        }
        for _ in 0..k {
            acc = acc.wedge(grid, &dom.omega);
        }
        acc
    };

    let balanced_residual = norm_d(&omega_pow(m - 1));

    let astheno_residual = if m >= 3 {
        let ddbar = omega_pow(m - 2).dbar(grid).partial(grid);
        l2_norm(grid, &ddbar, &dom.h_inv, &dom.vol)
    } else {
        0.0
    };

    MetricClassReport {
        kahler_residual,
        balanced_residual,
        astheno_residual,
        kahler: kahler_residual <= tol * scale,
        balanced: balanced_residual <= tol * scale,
        astheno: astheno_residual <= tol * scale,
        scale,
        tol,
    }
}

/// Canonical Laplacian Δ_c φ = h^{αβ̄} ∂²φ/∂z^α∂z̄^β, with the second
/// derivative taken as a composition of the first-derivative stencils.
pub fn canonical_laplacian(dom: &HermitianDomain, phi: &[Complex64]) -> Vec<Complex64> {
    let grid = &dom.grid;
    let m = grid.m;
    let mm = m * m;
    let mut out = vec![Complex64::default(); grid.len];
    for b in 0..m {
        let db = d_zbar(grid, phi, 1, b);
        for a in 0..m {
            let dab = d_z(grid, &db, 1, a);
            for (p, o) in out.iter_mut().enumerate() {
                *o += dom.h_inv[p * mm + b * m + a] * dab[p];
            }
        }
    }
    out
}
