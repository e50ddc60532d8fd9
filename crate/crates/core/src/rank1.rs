//! Finite-dimensional modules over the rank-1 algebra `H_{1,c}(Gamma)`.
//!
//! The algebra is `C[Gamma] # C<x, y>` modulo `xy - yx = lambda(c)` with
//! `lambda(c) = 1 + sum_{gamma != 1} c_gamma gamma`. Group elements act on the
//! generators through the 2x2 matrices of [`GammaData`], so for cyclic groups
//! `g x g^-1 = eps x` and `g y g^-1 = eps^-1 y`.
//!
//! Only cyclic groups get a constructor ([`segment_rep`]); any group accepts
//! explicit matrices through [`RepY::explicit`], and one-dimensional modules
//! come from [`RepY::one_dimensional`].

use std::sync::Arc;

use thiserror::Error;

use crate::gamma::{make_cyclic, ClassFunction, GammaData, GammaError, GammaSpec};
use crate::linalg::{c64, commutant_dim, commutator, identity, max_norm, zeros, Matrix, C64};

/// Threshold for deciding that a weight sum vanishes.
pub const FEASIBILITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Infeasible {
    #[error("segments need a cyclic group, got {0}")]
    NotCyclic(GammaSpec),
    #[error("segment [{a}, {b}] is not admissible for Z/{l}: need 0 <= b - a < l")]
    BadRange { a: i64, b: i64, l: usize },
    #[error("weights do not sum to zero: sum of lambda_i = {}+{}i", .sum.re, .sum.im)]
    NonzeroSum { sum: C64 },
    #[error("module is reducible: partial weight sum through index {index} vanishes")]
    Reducible { index: i64 },
    #[error("lambda(c) does not vanish on the character: value {}+{}i", .value.re, .value.im)]
    CentralCharacterNonzero { value: C64 },
    #[error(transparent)]
    ClassFunction(#[from] GammaError),
    #[error("explicit module has inconsistent shapes: {0}")]
    Shape(String),
}

/// A module over `H_{1,c}(Gamma)` given by matrices.
#[derive(Clone, Debug)]
pub struct RepY {
    pub gamma: Arc<GammaData>,
    pub dim: usize,
    /// Image of every group element, indexed like `gamma.elements`.
    pub group_action: Vec<Matrix>,
    pub x: Matrix,
    pub y: Matrix,
    pub c: ClassFunction,
    /// Trace of the group action on each class.
    pub character: Vec<C64>,
}

impl RepY {
    /// Builds a module from generator images and `x`, `y`. Nothing about the
    /// relations is checked here; see [`rank1_residuals`].
    pub fn explicit(
        gamma: Arc<GammaData>,
        gen_images: &[Matrix],
        x: Matrix,
        y: Matrix,
        c: ClassFunction,
    ) -> Result<Self, Infeasible> {
        let dim = x.nrows();
        if gen_images.len() != gamma.generators.len() {
            return Err(Infeasible::Shape(format!(
                "{} generator images for {} generators",
                gen_images.len(),
                gamma.generators.len()
            )));
        }
        if gen_images.iter().chain([&x, &y]).any(|m| m.shape() != (dim, dim)) {
            return Err(Infeasible::Shape(format!("all matrices must be {dim}x{dim}")));
        }
        gamma.check_class_function(&c)?;
        let group_action = gamma.extend_representation(dim, gen_images);
        Ok(Self::assemble(gamma, group_action, x, y, c))
    }

    fn assemble(gamma: Arc<GammaData>, group_action: Vec<Matrix>, x: Matrix, y: Matrix, c: ClassFunction) -> Self {
        let character = gamma.class_reps.iter().map(|&e| group_action[e].trace()).collect();
        RepY {
            dim: x.nrows(),
            gamma,
            group_action,
            x,
            y,
            c,
            character,
        }
    }

    /// The module `C` on which `Gamma` acts by a one-dimensional character
    /// and `x`, `y` act by zero; it exists exactly when `lambda(c)` acts by
    /// zero on that character.
    pub fn one_dimensional(gamma: Arc<GammaData>, irrep: usize, c: ClassFunction) -> Result<Self, Infeasible> {
        gamma.check_class_function(&c)?;
        let value = gamma.central_character(&c, irrep);
        if value.norm() > FEASIBILITY_TOL {
            return Err(Infeasible::CentralCharacterNonzero { value });
        }
        Ok(Self::one_dimensional_unchecked(gamma, irrep, c))
    }

    /// Same as [`RepY::one_dimensional`] without the relation check; used to
    /// study group-level data (characters, traces) at arbitrary parameters.
    pub fn one_dimensional_unchecked(gamma: Arc<GammaData>, irrep: usize, c: ClassFunction) -> Self {
        let chi = &gamma.char_table[irrep];
        let action = (0..gamma.order())
            .map(|e| Matrix::from_element(1, 1, chi[gamma.class_of[e]]))
            .collect();
        Self::assemble(gamma.clone(), action, zeros(1, 1), zeros(1, 1), c)
    }

    /// `lambda(c)` acting on the module.
    pub fn lambda_action(&self) -> Matrix {
        (0..self.gamma.order())
            .filter(|&e| e != self.gamma.identity())
            .fold(identity(self.dim), |acc, e| {
                acc + &self.group_action[e] * self.c.at(self.gamma.class_of[e])
            })
    }

    /// Dimension of the commutant of `{group action, x, y}`; 1 certifies
    /// irreducibility.
    pub fn commutant_dim(&self) -> usize {
        let mut mats: Vec<Matrix> = self
            .gamma
            .generators
            .iter()
            .map(|&g| self.group_action[g].clone())
            .collect();
        mats.push(self.x.clone());
        mats.push(self.y.clone());
        commutant_dim(&mats, 1e-9)
    }
}

/// `lambda_i = 1 + sum_{j != 0} c_{g^j} eps^{ij}` for `i = a..=b`.
pub fn segment_lambdas(gamma: &GammaData, a: i64, b: i64, c: &ClassFunction) -> Vec<C64> {
    let l = gamma.order();
    (a..=b)
        .map(|i| {
            (1..l).fold(c64(1.0, 0.0), |acc, j| {
                acc + c.at(gamma.class_of[j]) * crate::gamma::root_of_unity(l, i * j as i64)
            })
        })
        .collect()
}

fn check_segment(gamma: &GammaData, a: i64, b: i64) -> Result<usize, Infeasible> {
    let GammaSpec::Cyclic(l) = gamma.spec else {
        return Err(Infeasible::NotCyclic(gamma.spec));
    };
    if b < a || b - a >= l as i64 {
        return Err(Infeasible::BadRange { a, b, l });
    }
    Ok(l)
}

/// Builds the segment module on `v_a, .., v_b` without testing feasibility:
/// `g v_i = eps^i v_i`, `x v_i = v_{i+1}`, `y v_i = mu_i v_{i-1}` with
/// `mu_a = 0` and `mu_{i+1} = mu_i - lambda_i`.
pub fn segment_rep_unchecked(l: usize, a: i64, b: i64, c: &ClassFunction) -> Result<RepY, Infeasible> {
    let gamma = Arc::new(make_cyclic(l));
    check_segment(&gamma, a, b)?;
    gamma.check_class_function(c)?;
    let dim = (b - a + 1) as usize;
    let lambdas = segment_lambdas(&gamma, a, b, c);
    let mut mu = vec![c64(0.0, 0.0); dim];
    for k in 1..dim {
        mu[k] = mu[k - 1] - lambdas[k - 1];
    }
    let mut x = zeros(dim, dim);
    let mut y = zeros(dim, dim);
    for k in 0..dim.saturating_sub(1) {
        x[(k + 1, k)] = c64(1.0, 0.0);
        y[(k, k + 1)] = mu[k + 1];
    }
    let gen = Matrix::from_fn(dim, dim, |r, s| {
        if r == s {
            crate::gamma::root_of_unity(l, a + r as i64)
        } else {
            c64(0.0, 0.0)
        }
    });
    let gens: Vec<Matrix> = if l == 1 { Vec::new() } else { vec![gen] };
    let action = gamma.extend_representation(dim, &gens);
    Ok(RepY::assemble(gamma, action, x, y, c.clone()))
}

/// The segment module, provided the weights sum to zero and no strict
/// partial sum vanishes.
pub fn segment_rep(l: usize, a: i64, b: i64, c: &ClassFunction) -> Result<RepY, Infeasible> {
    let gamma = make_cyclic(l);
    check_segment(&gamma, a, b)?;
    gamma.check_class_function(c)?;
    let lambdas = segment_lambdas(&gamma, a, b, c);
    let mut partial = c64(0.0, 0.0);
    for (offset, lam) in lambdas.iter().enumerate() {
        partial += lam;
        let last = offset + 1 == lambdas.len();
        if last && partial.norm() > FEASIBILITY_TOL {
            return Err(Infeasible::NonzeroSum { sum: partial });
        }
        if !last && partial.norm() <= FEASIBILITY_TOL {
            return Err(Infeasible::Reducible {
                index: a + offset as i64,
            });
        }
    }
    segment_rep_unchecked(l, a, b, c)
}

/// Moves `c` along the conjugate gradient of `sum lambda_i` so that the
/// segment `[a, b]` satisfies the sum condition. `None` when the sum does
/// not depend on `c` (full-length segments).
pub fn project_to_feasible(l: usize, a: i64, b: i64, c: &ClassFunction) -> Option<ClassFunction> {
    let gamma = make_cyclic(l);
    check_segment(&gamma, a, b).ok()?;
    let total: C64 = segment_lambdas(&gamma, a, b, c).iter().sum();
    // d(sum lambda)/d c_j = sum_i eps^{ij}
    let grad: Vec<(usize, C64)> = (1..l)
        .map(|j| {
            let g: C64 = (a..=b).map(|i| crate::gamma::root_of_unity(l, i * j as i64)).sum();
            (j, g)
        })
        .collect();
    let norm_sq: f64 = grad.iter().map(|(_, g)| g.norm_sqr()).sum();
    if norm_sq < 1e-12 {
        return None;
    }
    let mut out = c.clone();
    for (j, g) in grad {
        let shifted = out.at(j) - total * g.conj() / norm_sq;
        out.values.insert(j, shifted);
    }
    Some(out)
}

/// Max-norm residuals of the defining relations of `H_{1,c}(Gamma)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rank1Residuals {
    /// `[x, y] - lambda(c)`.
    pub commutator: f64,
    /// `g x g^-1 - g.x` and the same for `y`, over the generators.
    pub equivariance: f64,
    /// Failure of the group action to be a homomorphism.
    pub group: f64,
}

impl Rank1Residuals {
    pub fn max(&self) -> f64 {
        self.commutator.max(self.equivariance).max(self.group)
    }
}

pub fn rank1_residuals(y_mod: &RepY) -> Rank1Residuals {
    let gamma = &y_mod.gamma;
    let commutator_res = max_norm(&(commutator(&y_mod.x, &y_mod.y) - y_mod.lambda_action()));
    let mut equivariance: f64 = 0.0;
    for &g in &gamma.generators {
        let rho = &y_mod.group_action[g];
        let m = gamma.matrix(g);
        let gx = &y_mod.x * m[(0, 0)] + &y_mod.y * m[(1, 0)];
        let gy = &y_mod.x * m[(0, 1)] + &y_mod.y * m[(1, 1)];
        equivariance = equivariance
            .max(max_norm(&(rho * &y_mod.x - gx * rho)))
            .max(max_norm(&(rho * &y_mod.y - gy * rho)));
    }
    let mut group = max_norm(&(&y_mod.group_action[gamma.identity()] - identity(y_mod.dim)));
    for a in 0..gamma.order() {
        for b in 0..gamma.order() {
            let lhs = &y_mod.group_action[a] * &y_mod.group_action[b];
            group = group.max(max_norm(&(lhs - &y_mod.group_action[gamma.mul(a, b)])));
        }
    }
    Rank1Residuals {
        commutator: commutator_res,
        equivariance,
        group,
    }
}

/// Trace of the group action on each conjugacy class.
pub fn rep_character(y_mod: &RepY) -> Vec<C64> {
    y_mod
        .gamma
        .class_reps
        .iter()
        .map(|&e| y_mod.group_action[e].trace())
        .collect()
}

/// One-dimensional characters on which `lambda(c)` acts by zero.
pub fn one_dim_characters(gamma: &GammaData, c: &ClassFunction) -> Vec<usize> {
    (0..gamma.char_table.len())
        .filter(|&i| (gamma.irrep_dim(i) - 1.0).abs() < 1e-12)
        .filter(|&i| gamma.central_character(c, i).norm() <= FEASIBILITY_TOL)
        .collect()
}
