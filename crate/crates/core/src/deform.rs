//! Deforming `M = W ⊗ Y^{⊗N}` from `k = 0` along a parameter direction.
//!
//! The unknowns are coefficients over a basis of `Gamma_N`-equivariant
//! tuples `(X_1..X_N, Y_1..Y_N)`, so equivariance holds by construction and
//! only the commutator relations remain. They are quadratic in the
//! unknowns, which makes the Jacobian exact and cheap.
//!
//! Gauge: the Jacobian at the base point has a kernel coming from basis
//! changes of `M` that commute with `Gamma_N`. Series coefficients are taken
//! minimum-norm, i.e. orthogonal to that kernel, and continuation corrects
//! inside the same affine slice so the two produce the same curve.

use thiserror::Error;

use crate::hyperplane::HyperplaneSpec;
use crate::linalg::Scalarity;
use crate::linalg::{
    c64, column, least_squares_min_norm, max_norm, nullspace_basis, rank, unvectorize, vectorize, zeros, Matrix, C64,
    DEFAULT_RANK_TOL,
};
use crate::wreath::{equivariance_residual, ParamPoint, RelationKind, RelationSystem, WreathRep};

/// Accept-step residual (max-norm).
pub const STEP_TOL: f64 = 1e-8;
/// Relative singular-value threshold for kernel dimensions.
pub const KERNEL_TOL: f64 = 1e-7;
/// Largest unresolved first-order component still counted as solvable.
pub const OBSTRUCTION_TOL: f64 = 1e-8;
pub const MAX_NEWTON_ITERATIONS: usize = 50;
pub const MAX_SERIES_ORDER: usize = 6;
/// Gauss-Newton gradient norm below which a nonzero residual is a plateau.
pub const PLATEAU_GRADIENT: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DeformError {
    #[error("base vectors are not in the equivariant span (error {0:e})")]
    NotInSpan(f64),
    #[error("direction has {got} coordinates, expected {expected}")]
    DirectionLength { expected: usize, got: usize },
    #[error("obstructed at order {order}: obstruction {magnitude:e}, unresolved {unresolved_norm:e}")]
    Obstructed {
        order: usize,
        magnitude: f64,
        unresolved_norm: f64,
    },
    #[error("series order {0} is outside 1..={MAX_SERIES_ORDER}")]
    BadOrder(usize),
    #[error("continuation needs at least one step")]
    NoSteps,
    #[error("no tangent direction with unit k: the hyperplane does not involve c")]
    NoUnitKTangent,
}

/// Orthonormal basis of equivariant tuples, each `2N` matrices on `M`.
#[derive(Clone, Debug)]
pub struct EquivariantBasis {
    pub dim: usize,
    pub basis: Vec<Vec<Matrix>>,
}

/// Nullspace of `rho(g) X_u - sum_v A(g)_{vu} X_v rho(g)` over the group
/// generators `g`, in the unknowns `vec(X_u)`.
pub fn equivariant_basis(rep: &WreathRep) -> EquivariantBasis {
    let n = rep.n;
    let d = rep.dim_m;
    let dd = d * d;
    let unknowns = 2 * n * dd;
    let gens = rep.group_gens();
    let mut constraints = zeros(gens.len() * 2 * n * dd, unknowns);
    let id = crate::linalg::identity(d);
    for (gi, (e, rho)) in gens.iter().enumerate() {
        let a = e.action_on_v(rep.gamma());
        // vec(rho X) = (I ⊗ rho) vec X, vec(X rho) = (rho^T ⊗ I) vec X
        let left = crate::linalg::kron(&id, rho);
        let right = crate::linalg::kron(&rho.transpose(), &id);
        for u in 0..2 * n {
            let row0 = (gi * 2 * n + u) * dd;
            let mut block = constraints.view_mut((row0, u * dd), (dd, dd));
            block += &left;
            for v in 0..2 * n {
                if a[(v, u)] != c64(0.0, 0.0) {
                    let mut block = constraints.view_mut((row0, v * dd), (dd, dd));
                    block -= &right * a[(v, u)];
                }
            }
        }
    }
    let basis: Vec<Vec<Matrix>> = nullspace_basis(&constraints, DEFAULT_RANK_TOL)
        .into_iter()
        .map(|v| {
            (0..2 * n)
                .map(|u| unvectorize(&v.as_slice()[u * dd..(u + 1) * dd], d, d))
                .collect()
        })
        .collect();
    EquivariantBasis {
        dim: basis.len(),
        basis,
    }
}

/// First-order obstruction along a parameter direction.
#[derive(Clone, Debug, PartialEq)]
pub struct Obstruction {
    /// Trace functional of the unresolved part, normalised to the
    /// directional derivative of the hyperplane function.
    pub value: C64,
    /// Max-norm of the least-squares residual.
    pub unresolved_norm: f64,
}

/// Coefficients of the formal deformation `a(h) = sum_p a_p h^p`.
#[derive(Clone, Debug)]
pub struct Series {
    pub coeffs: Vec<Matrix>,
    /// Unresolved max-norm per order `1..=P`.
    pub unresolved: Vec<f64>,
}

impl Series {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn evaluate(&self, h: C64) -> Matrix {
        self.coeffs
            .iter()
            .rev()
            .fold(zeros(self.coeffs[0].nrows(), 1), |acc, a| acc * h + a)
    }
}

#[derive(Clone, Debug)]
pub struct ContinuationStep {
    pub index: usize,
    pub params: ParamPoint,
    pub coeffs: Matrix,
    pub residual: f64,
    pub newton_iterations: usize,
    pub jacobian_kernel_dim: usize,
    pub commutant_dim: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ContinuationStatus {
    Converged,
    Obstructed {
        step: usize,
        /// `|trace functional of the residual| / (dim-normalisation * t)`,
        /// the size of the hyperplane directional derivative.
        magnitude: f64,
        residual: f64,
    },
    Diverged {
        step: usize,
        residual: f64,
    },
}

impl ContinuationStatus {
    pub fn label(&self) -> &'static str {
        match self {
            ContinuationStatus::Converged => "converged",
            ContinuationStatus::Obstructed { .. } => "obstructed",
            ContinuationStatus::Diverged { .. } => "diverged",
        }
    }
}

/// Accepted steps, the base point first (index 0).
#[derive(Clone, Debug)]
pub struct ContinuationResult {
    pub steps: Vec<ContinuationStep>,
    pub status: ContinuationStatus,
}

/// The deformation problem around a solution at `k = 0`.
#[derive(Clone, Debug)]
pub struct DeformProblem {
    pub rep: WreathRep,
    pub system: RelationSystem,
    pub basis: EquivariantBasis,
    pub base_coeffs: Matrix,
    pub base_params: ParamPoint,
    /// `N dim W dim Y^{N-1}`: sum over `i` of the trace identity factor.
    trace_scale: f64,
    /// Orthonormal complement of the base-point Jacobian kernel.
    slice: Matrix,
}

impl DeformProblem {
    pub fn new(rep: WreathRep) -> Result<Self, DeformError> {
        let system = RelationSystem::new(&rep);
        let basis = equivariant_basis(&rep);
        let vectors = rep.vector_matrices();
        let coords: Vec<C64> = (0..basis.dim)
            .map(|j| basis.basis[j].iter().zip(&vectors).map(|(b, v)| b.dotc(v)).sum())
            .collect();
        let base_coeffs = column(&coords);
        let n = rep.n;
        let trace_scale = (n * rep.dim_w()) as f64 * (rep.y.dim as f64).powi(n as i32 - 1);
        let base_params = rep.params.clone();
        let mut problem = Self {
            rep,
            system,
            basis,
            base_coeffs,
            base_params,
            trace_scale,
            slice: zeros(0, 0),
        };
        let rebuilt = problem.tuple(&problem.base_coeffs);
        let err = rebuilt
            .iter()
            .zip(&vectors)
            .map(|(a, b)| max_norm(&(a - b)))
            .fold(0.0, f64::max);
        if err > 1e-10 {
            return Err(DeformError::NotInSpan(err));
        }
        let j0 = problem.jacobian(&problem.base_coeffs);
        problem.slice = kernel_complement(&j0, KERNEL_TOL);
        Ok(problem)
    }

    pub fn num_params(&self) -> usize {
        self.system.num_params()
    }

    /// `sum_j a_j B_j`.
    pub fn tuple(&self, coeffs: &Matrix) -> Vec<Matrix> {
        let d = self.rep.dim_m;
        let mut out = vec![zeros(d, d); 2 * self.rep.n];
        for (j, b) in self.basis.basis.iter().enumerate() {
            let a = coeffs[(j, 0)];
            for (o, bj) in out.iter_mut().zip(b) {
                *o += bj * a;
            }
        }
        out
    }

    fn flatten(blocks: &[Matrix]) -> Matrix {
        let entries: Vec<C64> = blocks.iter().flat_map(vectorize).collect();
        column(&entries)
    }

    fn bform(&self, a: &[Matrix], b: &[Matrix]) -> Matrix {
        Self::flatten(&self.system.bilinear(a, b))
    }

    /// Flattened relation residuals `[u, v] - rhs(p)`.
    pub fn residual(&self, coeffs: &Matrix, p: &ParamPoint) -> Matrix {
        let t = self.tuple(coeffs);
        Self::flatten(&self.system.residual_blocks(&t, &p.coords(self.rep.gamma())))
    }

    /// Exact Jacobian of [`Self::residual`] in the coefficients.
    pub fn jacobian(&self, coeffs: &Matrix) -> Matrix {
        let t = self.tuple(coeffs);
        let rows = self.system.kinds.len() * self.rep.dim_m * self.rep.dim_m;
        let mut jac = zeros(rows, self.basis.dim);
        for (j, b) in self.basis.basis.iter().enumerate() {
            let col = self.bform(b, &t) + self.bform(&t, b);
            jac.set_column(j, &col.column(0));
        }
        jac
    }

    fn rhs_direction(&self, direction: &[C64]) -> Result<Matrix, DeformError> {
        if direction.len() != self.num_params() {
            return Err(DeformError::DirectionLength {
                expected: self.num_params(),
                got: direction.len(),
            });
        }
        Ok(Self::flatten(&self.system.rhs_direction(direction)))
    }

    /// Sum of traces of the R1 blocks of a flattened block vector.
    fn trace_functional(&self, r: &Matrix) -> C64 {
        let d = self.rep.dim_m;
        self.system
            .kinds
            .iter()
            .enumerate()
            .filter(|(_, k)| matches!(k, RelationKind::R1 { .. }))
            .map(|(b, _)| (0..d).map(|i| r[(b * d * d + i * d + i, 0)]).sum::<C64>())
            .sum()
    }

    /// Part of the first-order right-hand side outside the image of the
    /// linearisation at the base point.
    pub fn first_order_obstruction(&self, direction: &[C64]) -> Result<Obstruction, DeformError> {
        let rhs = self.rhs_direction(direction)?;
        let jac = self.jacobian(&self.base_coeffs);
        let sol = least_squares_min_norm(&jac, &rhs, DEFAULT_RANK_TOL);
        let r = &rhs - &jac * sol;
        Ok(Obstruction {
            value: self.trace_functional(&r) / self.trace_scale,
            unresolved_norm: max_norm(&r),
        })
    }

    /// Order-by-order solution of `J a_p = [p = 1] L_d - sum_{s+t=p} B(a_s, a_t)`.
    pub fn series_solve(&self, direction: &[C64], order: usize) -> Result<Series, DeformError> {
        if order == 0 || order > MAX_SERIES_ORDER {
            return Err(DeformError::BadOrder(order));
        }
        let ld = self.rhs_direction(direction)?;
        let jac = self.jacobian(&self.base_coeffs);
        let mut coeffs = vec![self.base_coeffs.clone()];
        let mut tuples = vec![self.tuple(&self.base_coeffs)];
        let mut unresolved = Vec::new();
        for p in 1..=order {
            let mut rhs = if p == 1 { ld.clone() } else { zeros(ld.nrows(), 1) };
            for s in 1..p {
                rhs -= self.bform(&tuples[s], &tuples[p - s]);
            }
            let a = least_squares_min_norm(&jac, &rhs, DEFAULT_RANK_TOL);
            let r = &rhs - &jac * &a;
            let norm = max_norm(&r);
            if norm > OBSTRUCTION_TOL {
                return Err(DeformError::Obstructed {
                    order: p,
                    magnitude: (self.trace_functional(&r) / self.trace_scale).norm(),
                    unresolved_norm: norm,
                });
            }
            unresolved.push(norm);
            tuples.push(self.tuple(&a));
            coeffs.push(a);
        }
        Ok(Series { coeffs, unresolved })
    }

    /// Numerical kernel dimension of the Jacobian at fixed parameters.
    pub fn gauge_kernel_dim(&self, coeffs: &Matrix) -> usize {
        self.basis.dim - rank(&self.jacobian(coeffs), KERNEL_TOL)
    }

    fn step_record(
        &self,
        index: usize,
        params: ParamPoint,
        coeffs: Matrix,
        residual: f64,
        iterations: usize,
    ) -> ContinuationStep {
        let rep = self
            .rep
            .with_vectors(&self.tuple(&coeffs))
            .expect("tuple has the shape of the base vectors");
        ContinuationStep {
            index,
            params,
            jacobian_kernel_dim: self.gauge_kernel_dim(&coeffs),
            commutant_dim: rep.commutant_dim(),
            coeffs,
            residual,
            newton_iterations: iterations,
        }
    }

    /// Predictor-corrector continuation to `p0 + h_max d` in `steps` equal
    /// steps, correcting each step by Gauss-Newton to max-norm `tol`.
    pub fn continue_path(
        &self,
        direction: &[C64],
        h_max: f64,
        steps: usize,
        tol: f64,
    ) -> Result<ContinuationResult, DeformError> {
        if steps == 0 {
            return Err(DeformError::NoSteps);
        }
        let ld = self.rhs_direction(direction)?;
        let group = self.rep.gamma();
        let base_res = max_norm(&self.residual(&self.base_coeffs, &self.base_params));
        let mut records = vec![self.step_record(0, self.base_params.clone(), self.base_coeffs.clone(), base_res, 0)];
        let dh = h_max / steps as f64;
        let mut a = self.base_coeffs.clone();
        for s in 1..=steps {
            let t = dh * s as f64;
            let params = self.base_params.shifted(group, direction, c64(t, 0.0));
            // predictor: tangent of the solution curve at the previous point
            let jac = self.jacobian(&a) * &self.slice;
            let tangent = &self.slice * least_squares_min_norm(&jac, &ld, DEFAULT_RANK_TOL);
            a += tangent * c64(dh, 0.0);
            let mut iterations = 0;
            loop {
                let f = self.residual(&a, &params);
                let res = max_norm(&f);
                if res <= tol {
                    records.push(self.step_record(s, params, a.clone(), res, iterations));
                    break;
                }
                let jac = self.jacobian(&a) * &self.slice;
                let gradient = (jac.adjoint() * &f).norm();
                if gradient < PLATEAU_GRADIENT && iterations > 0 {
                    let magnitude = if t > 0.0 {
                        self.trace_functional(&f).norm() / (self.trace_scale * t)
                    } else {
                        0.0
                    };
                    return Ok(ContinuationResult {
                        steps: records,
                        status: ContinuationStatus::Obstructed {
                            step: s,
                            magnitude,
                            residual: res,
                        },
                    });
                }
                if iterations == MAX_NEWTON_ITERATIONS {
                    return Ok(ContinuationResult {
                        steps: records,
                        status: ContinuationStatus::Diverged { step: s, residual: res },
                    });
                }
                a -= &self.slice * least_squares_min_norm(&jac, &f, DEFAULT_RANK_TOL);
                iterations += 1;
            }
        }
        Ok(ContinuationResult {
            steps: records,
            status: ContinuationStatus::Converged,
        })
    }

    /// Relation and equivariance residuals of the tuple at `coeffs`.
    pub fn report(&self, coeffs: &Matrix, p: &ParamPoint) -> (f64, f64) {
        let t = self.tuple(coeffs);
        (
            max_norm(&self.residual(coeffs, p)),
            equivariance_residual(&self.rep, &t),
        )
    }
}

/// Orthonormal basis of the orthogonal complement of the kernel of `a`.
fn kernel_complement(a: &Matrix, tol: f64) -> Matrix {
    let n = a.ncols();
    let kernel = nullspace_basis(a, tol);
    if kernel.is_empty() {
        return crate::linalg::identity(n);
    }
    let mut k = zeros(kernel.len(), n);
    for (i, v) in kernel.iter().enumerate() {
        k.set_row(i, &v.adjoint().row(0));
    }
    let complement = nullspace_basis(&k, DEFAULT_RANK_TOL);
    let mut q = zeros(n, complement.len());
    for (j, v) in complement.iter().enumerate() {
        q.set_column(j, &v.column(0));
    }
    q
}

/// `(residual, Jacobian)` for the coefficients `coeffs` at `p`.
pub fn relation_residual_and_jacobian(problem: &DeformProblem, coeffs: &Matrix, p: &ParamPoint) -> (Matrix, Matrix) {
    (problem.residual(coeffs, p), problem.jacobian(coeffs))
}

/// The tangent direction with `delta k = 1` and minimal `|delta c|`.
pub fn unit_k_tangent(spec: &HyperplaneSpec) -> Result<Vec<C64>, DeformError> {
    let g = spec.gradient();
    let norm_c: f64 = g[1..].iter().map(|x| x.norm_sqr()).sum();
    if norm_c == 0.0 {
        return if g[0].norm() == 0.0 {
            Ok(std::iter::once(c64(1.0, 0.0))
                .chain(g[1..].iter().map(|_| c64(0.0, 0.0)))
                .collect())
        } else {
            Err(DeformError::NoUnitKTangent)
        };
    }
    let scale = -g[0] / norm_c;
    Ok(std::iter::once(c64(1.0, 0.0))
        .chain(g[1..].iter().map(|x| x.conj() * scale))
        .collect())
}

/// Evidence that no representation on `M` exists for any `k != 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct RectangleCertificate {
    /// 0 forces every `x_i`, `y_i` to act by zero.
    pub equivariant_dim: usize,
    /// Exact scalarity of `s_12 + .. + s_1N` on `W`.
    pub c_operator: Scalarity,
}

impl RectangleCertificate {
    /// With zero vectors, R1 reads `(k |Gamma| / 2) C = -(1 + sum c chi) Id`
    /// on `W`, impossible for `k != 0` when `C` is not scalar.
    pub fn excludes_nonzero_k(&self) -> bool {
        self.equivariant_dim == 0 && matches!(self.c_operator, Scalarity::NotScalar { .. })
    }
}

pub fn rectangle_certificate(rep: &WreathRep) -> RectangleCertificate {
    RectangleCertificate {
        equivariant_dim: equivariant_basis(rep).dim,
        c_operator: crate::symgroup::c_operator(&rep.w),
    }
}
