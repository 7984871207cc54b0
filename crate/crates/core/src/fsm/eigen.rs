use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::FsmError;

#[derive(Debug, Clone, PartialEq)]
pub struct BucklingMode {
    pub load_factor: f64,
    pub vector: DVector<f64>,
}

/// Smallest positive eigenvalues of `K φ = λ Kg φ`.
///
/// `K` must be positive definite. With `K = L Lᵀ` the pencil becomes the
/// standard problem `L⁻¹ Kg L⁻ᵀ y = μ y` with `μ = 1/λ`, so the largest
/// positive `μ` give the lowest load factors and `Kg` may be semi-definite.
/// Returned vectors satisfy `φᵢᵀ K φⱼ = δᵢⱼ`, hence are also `Kg`-orthogonal.
pub fn solve_buckling(
    k: &DMatrix<f64>,
    kg: &DMatrix<f64>,
    n_modes: usize,
) -> Result<Vec<BucklingMode>, FsmError> {
    let n = k.nrows();
    if n == 0 || k.shape() != kg.shape() || k.ncols() != n {
        return Err(FsmError::Numerical(format!(
            "pencil shapes {:?} and {:?}",
            k.shape(),
            kg.shape()
        )));
    }
    let kg_scale = kg.amax();
    if kg_scale == 0.0 {
        return Err(FsmError::UnstableReference);
    }
    let chol = k.clone().cholesky().ok_or_else(|| {
        let min_diag = k.diagonal().min();
        FsmError::Numerical(format!(
            "elastic stiffness is not positive definite (n = {n}, min diagonal {min_diag:e})"
        ))
    })?;
    let l = chol.l();
    // C = L⁻¹ Kg L⁻ᵀ
    let x = l
        .solve_lower_triangular(kg)
        .ok_or_else(|| FsmError::Numerical("triangular solve failed".into()))?;
    let c = l
        .solve_lower_triangular(&x.transpose())
        .ok_or_else(|| FsmError::Numerical("triangular solve failed".into()))?;
    let c = (&c + c.transpose()) * 0.5;

    let eig = SymmetricEigen::new(c);
    let mu_max = eig.eigenvalues.amax();
    let tol = mu_max * 1e-13;
    let mut order: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] > tol).collect();
    if order.is_empty() {
        return Err(FsmError::UnstableReference);
    }
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let lt = l.transpose();
    order
        .into_iter()
        .take(n_modes.max(1))
        .map(|i| {
            let y = eig.eigenvectors.column(i).into_owned();
            let phi = lt
                .solve_upper_triangular(&y)
                .ok_or_else(|| FsmError::Numerical("back substitution failed".into()))?;
            Ok(BucklingMode {
                load_factor: 1.0 / eig.eigenvalues[i],
                vector: phi,
            })
        })
        .collect()
}
