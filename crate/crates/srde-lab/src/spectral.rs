//! Eigenbasis of the Dirichlet elliptic operator, semigroup action, heat
//! kernel, and the collocation transforms.
//!
//! The workhorse is the sine basis of −d²/dx² on an interval (0, L):
//! eigenvalues `α_k = (kπ/L)²`, eigenfunctions `e_k(x) = √(2/L)·sin(kπx/L)`,
//! normalized in L². On the uniform interior grid `x_m = mL/(M+1)` the
//! rectangle rule makes the discrete sine vectors exactly orthonormal, so
//! `forward_transform`/`inverse_transform` round-trip to machine precision
//! for fields in the span of the first N modes.
//!
//! The semigroup generated by the operator acts diagonally: multiplication
//! of the k-th coefficient by `exp(−α_k t)`. Its kernel is
//! `K(t,x,y) = Σ_k exp(−α_k t) e_k(x) e_k(y)`.
//!
//! General self-adjoint operators (arbitrary domains) are supported as
//! tabulated `(α_k, |e_k|_∞)` data for assumption checking only; the
//! transform pair and kernel are specific to the interval basis.

use crate::error::{Error, Result};

/// Which spectral data backs a basis.
#[derive(Debug, Clone, PartialEq)]
pub enum BasisKind {
    /// Sine eigenbasis of the 1-D Dirichlet Laplacian on (0, L); eigenvalue
    /// data extends analytically past `num_modes`.
    DirichletInterval,
    /// User-supplied eigenvalue/sup-norm tables (no grid, no transforms).
    Tabulated,
}

/// Eigenpairs of the self-adjoint elliptic operator plus the collocation
/// grid used by the transforms.
#[derive(Debug, Clone)]
pub struct SpectralBasis {
    kind: BasisKind,
    domain_length: f64,
    num_modes: usize,
    eigenvalues: Vec<f64>,
    eigenfunction_sup_norms: Vec<f64>,
    grid_points: Vec<f64>,
    /// Row-major table `table[m * num_modes + k] = e_{k+1}(x_m)`; empty for
    /// tabulated bases.
    table: Vec<f64>,
    /// Quadrature weight of the rectangle rule, `L / (M + 1)`.
    quad_weight: f64,
}

impl SpectralBasis {
    /// Sine eigenbasis of the Dirichlet Laplacian on the interval
    /// `(0, length)` with `num_modes` modes and `grid_size` interior
    /// collocation points.
    ///
    /// Requires `grid_size >= 4 * num_modes` so that pseudospectral products
    /// of moderate degree stay resolved.
    pub fn dirichlet_interval(length: f64, num_modes: usize, grid_size: usize) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::invalid(format!(
                "domain length must be positive and finite, got {length}"
            )));
        }
        if num_modes == 0 {
            return Err(Error::invalid("num_modes must be at least 1"));
        }
        if grid_size < 4 * num_modes {
            return Err(Error::invalid(format!(
                "grid_size must be at least 4*num_modes = {}, got {grid_size}",
                4 * num_modes
            )));
        }

        let h = length / (grid_size + 1) as f64;
        let grid_points: Vec<f64> = (1..=grid_size).map(|m| m as f64 * h).collect();
        let norm = (2.0 / length).sqrt();
        let eigenvalues: Vec<f64> = (1..=num_modes)
            .map(|k| {
                let w = k as f64 * std::f64::consts::PI / length;
                w * w
            })
            .collect();
        let eigenfunction_sup_norms = vec![norm; num_modes];

        let mut table = Vec::with_capacity(grid_size * num_modes);
        for &x in &grid_points {
            for k in 1..=num_modes {
                let w = k as f64 * std::f64::consts::PI / length;
                table.push(norm * (w * x).sin());
            }
        }

        Ok(SpectralBasis {
            kind: BasisKind::DirichletInterval,
            domain_length: length,
            num_modes,
            eigenvalues,
            eigenfunction_sup_norms,
            grid_points,
            table,
            quad_weight: h,
        })
    }

    /// Basis backed by tabulated `(α_k, |e_k|_∞)` data, for assumption
    /// checking on general domains. No grid; transforms are unavailable.
    pub fn tabulated(eigenvalues: Vec<f64>, sup_norms: Vec<f64>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::invalid("tabulated basis needs at least one eigenvalue"));
        }
        if eigenvalues.len() != sup_norms.len() {
            return Err(Error::SizeMismatch {
                what: "eigenfunction sup norms",
                expected: eigenvalues.len(),
                actual: sup_norms.len(),
            });
        }
        if eigenvalues.windows(2).any(|w| w[1] < w[0]) || eigenvalues[0] < 0.0 {
            return Err(Error::invalid(
                "eigenvalues must be nonnegative and nondecreasing",
            ));
        }
        let n = eigenvalues.len();
        Ok(SpectralBasis {
            kind: BasisKind::Tabulated,
            domain_length: f64::NAN,
            num_modes: n,
            eigenvalues,
            eigenfunction_sup_norms: sup_norms,
            grid_points: Vec::new(),
            table: Vec::new(),
            quad_weight: f64::NAN,
        })
    }

    pub fn kind(&self) -> &BasisKind {
        &self.kind
    }

    pub fn domain_length(&self) -> f64 {
        self.domain_length
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn grid_size(&self) -> usize {
        self.grid_points.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenfunction_sup_norms(&self) -> &[f64] {
        &self.eigenfunction_sup_norms
    }

    pub fn grid_points(&self) -> &[f64] {
        &self.grid_points
    }

    /// Rectangle-rule quadrature weight on the collocation grid.
    pub fn quad_weight(&self) -> f64 {
        self.quad_weight
    }

    /// `(α_k, |e_k|_∞)` for mode `k >= 1`. For the interval basis this
    /// extends analytically beyond `num_modes`; tabulated data ends at the
    /// table.
    pub fn eigen_data(&self, k: usize) -> Option<(f64, f64)> {
        if k == 0 {
            return None;
        }
        if k <= self.num_modes {
            return Some((self.eigenvalues[k - 1], self.eigenfunction_sup_norms[k - 1]));
        }
        match self.kind {
            BasisKind::DirichletInterval => {
                let w = k as f64 * std::f64::consts::PI / self.domain_length;
                Some((w * w, (2.0 / self.domain_length).sqrt()))
            }
            BasisKind::Tabulated => None,
        }
    }

    /// Evaluates `e_k(x)` anywhere in the interval (interval basis only).
    pub fn eigenfunction(&self, k: usize, x: f64) -> Result<f64> {
        self.require_interval()?;
        if k == 0 {
            return Err(Error::invalid("mode index is 1-based"));
        }
        let w = k as f64 * std::f64::consts::PI / self.domain_length;
        Ok((2.0 / self.domain_length).sqrt() * (w * x).sin())
    }

    fn require_interval(&self) -> Result<()> {
        match self.kind {
            BasisKind::DirichletInterval => Ok(()),
            BasisKind::Tabulated => Err(Error::invalid(
                "operation requires the interval basis (tabulated spectra carry no grid)",
            )),
        }
    }

    /// Diagonal semigroup action: coefficient `k` is multiplied by
    /// `exp(−α_k t)`. `t = 0` is the identity.
    pub fn semigroup_apply(&self, t: f64, coeffs: &[f64]) -> Result<Vec<f64>> {
        if !(t >= 0.0) {
            return Err(Error::invalid(format!(
                "semigroup time must be nonnegative, got {t}"
            )));
        }
        if coeffs.len() > self.num_modes {
            return Err(Error::SizeMismatch {
                what: "spectral coefficients",
                expected: self.num_modes,
                actual: coeffs.len(),
            });
        }
        Ok(coeffs
            .iter()
            .zip(&self.eigenvalues)
            .map(|(c, a)| c * (-a * t).exp())
            .collect())
    }

    /// Per-mode decay factors `exp(−α_k t)`, for steppers that reuse them.
    pub fn decay_factors(&self, t: f64) -> Result<Vec<f64>> {
        if !(t >= 0.0) {
            return Err(Error::invalid(format!(
                "semigroup time must be nonnegative, got {t}"
            )));
        }
        Ok(self.eigenvalues.iter().map(|a| (-a * t).exp()).collect())
    }

    /// Truncated heat kernel `Σ_{k<=truncation} exp(−α_k t) e_k(x) e_k(y)`.
    ///
    /// Requires `t > 0`; at `t = 0` the sum does not converge as the
    /// truncation grows.
    pub fn heat_kernel(&self, t: f64, x: f64, y: f64, truncation: usize) -> Result<f64> {
        self.require_interval()?;
        if !(t > 0.0) {
            return Err(Error::invalid(format!(
                "heat kernel needs t > 0, got {t}"
            )));
        }
        let l = self.domain_length;
        if !(0.0 < x && x < l) || !(0.0 < y && y < l) {
            return Err(Error::invalid(
                "kernel arguments must lie in the open interval",
            ));
        }
        let norm2 = 2.0 / l;
        let mut sum = 0.0;
        for k in 1..=truncation {
            let w = k as f64 * std::f64::consts::PI / l;
            sum += (-w * w * t).exp() * norm2 * (w * x).sin() * (w * y).sin();
        }
        Ok(sum)
    }

    /// Grid values -> spectral coefficients (rectangle-rule inner products
    /// with the eigenfunctions).
    pub fn forward_transform(&self, grid_values: &[f64]) -> Result<Vec<f64>> {
        self.require_interval()?;
        let m_pts = self.grid_points.len();
        if grid_values.len() != m_pts {
            return Err(Error::SizeMismatch {
                what: "grid values",
                expected: m_pts,
                actual: grid_values.len(),
            });
        }
        let n = self.num_modes;
        let mut coeffs = vec![0.0; n];
        for (m, &v) in grid_values.iter().enumerate() {
            let row = &self.table[m * n..(m + 1) * n];
            for (c, e) in coeffs.iter_mut().zip(row) {
                *c += v * e;
            }
        }
        for c in &mut coeffs {
            *c *= self.quad_weight;
        }
        Ok(coeffs)
    }

    /// Spectral coefficients -> grid values.
    pub fn inverse_transform(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        self.require_interval()?;
        if coeffs.len() > self.num_modes {
            return Err(Error::SizeMismatch {
                what: "spectral coefficients",
                expected: self.num_modes,
                actual: coeffs.len(),
            });
        }
        let n = self.num_modes;
        let values = (0..self.grid_points.len())
            .map(|m| {
                let row = &self.table[m * n..m * n + coeffs.len()];
                row.iter().zip(coeffs).map(|(e, c)| e * c).sum()
            })
            .collect();
        Ok(values)
    }
}
