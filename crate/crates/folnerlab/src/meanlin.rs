//! Finite-dimensional mean ergodic operator theory: vanishing/range duality,
//! Cesaro operator averages, the mean-ergodic projection, and the Cox
//! identity criterion.
//!
//! Everything is over real matrices; the adjoint is the transpose. Rank
//! decisions use a relative singular-value threshold.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Relative singular-value cutoff for rank decisions.
pub const RANK_TOL: f64 = 1e-10;

/// A finite family of square matrices of common dimension.
#[derive(Debug, Clone)]
pub struct OperatorFamily {
    matrices: Vec<DMatrix<f64>>,
    dim: usize,
}

impl OperatorFamily {
    pub fn new(matrices: Vec<DMatrix<f64>>) -> Result<Self> {
        let first = matrices
            .first()
            .ok_or_else(|| Error::InvalidSpec("operator family must be nonempty".into()))?;
        let dim = first.nrows();
        if matrices
            .iter()
            .any(|m| m.nrows() != dim || m.ncols() != dim)
        {
            return Err(Error::InvalidSpec(
                "all family members must be square matrices of one dimension".into(),
            ));
        }
        Ok(OperatorFamily { matrices, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrices(&self) -> &[DMatrix<f64>] {
        &self.matrices
    }

    pub fn adjoint(&self) -> OperatorFamily {
        OperatorFamily {
            matrices: self.matrices.iter().map(DMatrix::transpose).collect(),
            dim: self.dim,
        }
    }

    /// Uniform bound max_g ||T_g|| (spectral norm).
    pub fn uniform_bound(&self) -> f64 {
        self.matrices
            .iter()
            .map(spectral_norm)
            .fold(0.0, f64::max)
    }
}

pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    m.singular_values().max()
}

/// Orthonormal basis of a subspace of R^d, stored as the columns of `basis`.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    basis: DMatrix<f64>,
}

impl SubspaceBasis {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn columns(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn max_orthonormality_defect(&self) -> f64 {
        let gram = self.basis.transpose() * &self.basis;
        let id = DMatrix::identity(self.dim(), self.dim());
        (gram - id).abs().max()
    }
}

fn rank_of(sv: &[f64]) -> usize {
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > RANK_TOL * max).count()
}

/// V(T) = intersection of the kernels of the family members.
pub fn vanishing_space(family: &OperatorFamily) -> SubspaceBasis {
    let d = family.dim();
    // Null space of the vertically stacked family.
    let rows = d * family.matrices().len();
    let mut stacked = DMatrix::zeros(rows, d);
    for (i, m) in family.matrices().iter().enumerate() {
        stacked.view_mut((i * d, 0), (d, d)).copy_from(m);
    }
    null_space(&stacked)
}

fn null_space(m: &DMatrix<f64>) -> SubspaceBasis {
    let d = m.ncols();
    let svd = m.clone().svd(false, true);
    let sv: Vec<f64> = svd.singular_values.iter().cloned().collect();
    let rank = rank_of(&sv);
    let v_t = svd.v_t.expect("requested V^T");
    // Rows rank.. of V^T span the null space; V^T has min(nrows,ncols) rows,
    // so pad with unit rows when the matrix is wide.
    let mut cols: Vec<DMatrix<f64>> = Vec::new();
    for r in rank..v_t.nrows() {
        cols.push(DMatrix::from_iterator(d, 1, v_t.row(r).iter().cloned()));
    }
    let mut basis = DMatrix::zeros(d, d - rank);
    for (j, c) in cols.iter().enumerate() {
        basis.set_column(j, &c.column(0));
    }
    debug_assert_eq!(basis.ncols(), d - rank);
    SubspaceBasis { basis }
}

/// R(T) = span of the ranges of the family members.
pub fn range_span(family: &OperatorFamily) -> SubspaceBasis {
    let d = family.dim();
    let mut stacked = DMatrix::zeros(d, d * family.matrices().len());
    for (i, m) in family.matrices().iter().enumerate() {
        stacked.view_mut((0, i * d), (d, d)).copy_from(m);
    }
    column_space(&stacked)
}

fn column_space(m: &DMatrix<f64>) -> SubspaceBasis {
    let svd = m.clone().svd(true, false);
    let sv: Vec<f64> = svd.singular_values.iter().cloned().collect();
    let rank = rank_of(&sv);
    let u = svd.u.expect("requested U");
    SubspaceBasis {
        basis: u.columns(0, rank).into_owned(),
    }
}

/// Report of the vanishing/range duality V(T)^perp = closure R(T^*).
#[derive(Debug, Clone)]
pub struct DualityReport {
    pub dim: usize,
    pub dim_vanishing: usize,
    pub dim_range_adjoint: usize,
    pub dim_range: usize,
    pub dim_vanishing_adjoint: usize,
    /// Max |<v, r>| over basis pairings across the claimed complements.
    pub max_orthogonality_defect: f64,
}

impl DualityReport {
    pub fn dims_consistent(&self) -> bool {
        self.dim_vanishing + self.dim_range_adjoint == self.dim
            && self.dim_range + self.dim_vanishing_adjoint == self.dim
    }
}

pub fn duality_check(family: &OperatorFamily) -> DualityReport {
    let adj = family.adjoint();
    let v = vanishing_space(family);
    let r_adj = range_span(&adj);
    let r = range_span(family);
    let v_adj = vanishing_space(&adj);
    let mut defect = 0.0f64;
    for (a, b) in [(&v, &r_adj), (&v_adj, &r)] {
        if a.dim() > 0 && b.dim() > 0 {
            let cross = a.columns().transpose() * b.columns();
            defect = defect.max(cross.abs().max());
        }
    }
    DualityReport {
        dim: family.dim(),
        dim_vanishing: v.dim(),
        dim_range_adjoint: r_adj.dim(),
        dim_range: r.dim(),
        dim_vanishing_adjoint: v_adj.dim(),
        max_orthogonality_defect: defect,
    }
}

/// (1/n) sum_{k=0}^{n-1} T^k, verifying ||T^k|| <= beta along the way.
pub fn cesaro_average(t: &DMatrix<f64>, n: usize, beta: f64) -> Result<DMatrix<f64>> {
    if n == 0 {
        return Err(Error::InvalidSpec("Cesaro average needs n >= 1".into()));
    }
    let d = t.nrows();
    let mut acc = DMatrix::identity(d, d);
    let mut power = DMatrix::identity(d, d);
    for k in 1..n {
        power = &power * t;
        let norm = spectral_norm(&power);
        if norm > beta * (1.0 + 1e-8) + 1e-8 {
            return Err(Error::PowerBoundViolated { k, norm, bound: beta });
        }
        acc += &power;
    }
    Ok(acc / n as f64)
}

/// The mean-ergodic projection onto ker(I - T) along range(I - T).
pub fn fixed_projection(t: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let d = t.nrows();
    let coboundary = DMatrix::identity(d, d) - t;
    let fam = OperatorFamily::new(vec![coboundary.clone()])?;
    let fixed = vanishing_space(&fam);
    let range = column_space(&coboundary);
    if fixed.dim() + range.dim() != d {
        return Err(Error::DecompositionFailure {
            ker_dim: fixed.dim(),
            range_dim: range.dim(),
            dim: d,
        });
    }
    // B = [K | R]; P = B diag(1..1, 0..0) B^-1 projects onto K along R.
    let mut b = DMatrix::zeros(d, d);
    for j in 0..fixed.dim() {
        b.set_column(j, &fixed.columns().column(j));
    }
    for j in 0..range.dim() {
        b.set_column(fixed.dim() + j, &range.columns().column(j));
    }
    let sv = b.singular_values();
    if sv.min() <= RANK_TOL * sv.max() {
        return Err(Error::DecompositionFailure {
            ker_dim: fixed.dim(),
            range_dim: range.dim(),
            dim: d,
        });
    }
    let b_inv = b
        .clone()
        .try_inverse()
        .ok_or(Error::DecompositionFailure {
            ker_dim: fixed.dim(),
            range_dim: range.dim(),
            dim: d,
        })?;
    let mut selector = DMatrix::zeros(d, d);
    for j in 0..fixed.dim() {
        selector[(j, j)] = 1.0;
    }
    Ok(b * selector * b_inv)
}

/// Cox criterion report: if ||I - P_1 ... P_l|| < 1 then every family member
/// must be the identity.
#[derive(Debug, Clone)]
pub struct CoxReport {
    pub norm: f64,
    pub applicable: bool,
    /// When applicable: max deviation of any family member from I.
    pub max_identity_deviation: Option<f64>,
}

impl CoxReport {
    pub fn consistent(&self) -> bool {
        !self.applicable || self.max_identity_deviation.unwrap_or(f64::INFINITY) <= RANK_TOL
    }
}

pub fn cox_check(projections: &[DMatrix<f64>], families: &[OperatorFamily]) -> Result<CoxReport> {
    let d = projections
        .first()
        .ok_or_else(|| Error::InvalidSpec("Cox check needs at least one projection".into()))?
        .nrows();
    let mut prod = DMatrix::identity(d, d);
    for p in projections {
        prod = prod * p;
    }
    let norm = spectral_norm(&(DMatrix::identity(d, d) - prod));
    if norm >= 1.0 - 1e-12 {
        return Ok(CoxReport {
            norm,
            applicable: false,
            max_identity_deviation: None,
        });
    }
    let mut dev = 0.0f64;
    for fam in families {
        for m in fam.matrices() {
            dev = dev.max((m - DMatrix::identity(d, d)).abs().max());
        }
    }
    Ok(CoxReport {
        norm,
        applicable: true,
        max_identity_deviation: Some(dev),
    })
}
