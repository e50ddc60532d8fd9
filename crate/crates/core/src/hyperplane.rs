//! The hyperplane `H_{Y,m,l}`:
//!
//! `dim Y + (k/2)|Gamma|(m - l) + sum_{gamma != 1} c_gamma chi_Y(gamma) = 0`,
//!
//! together with the trace identities on `M = W ⊗ Y^{⊗N}` it comes from.

use thiserror::Error;

use crate::gamma::GammaData;
use crate::linalg::{c64, C64};
use crate::rank1::RepY;
use crate::symgroup::{transposition_character, Partition};
use crate::wreath::{ParamPoint, WreathElement, WreathRep};

pub const MEMBERSHIP_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HyperplaneError {
    #[error("W = {0} is not a rectangle")]
    NotRectangle(String),
    #[error("expected {expected} character values, got {got}")]
    CharacterLength { expected: usize, got: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct HyperplaneSpec {
    pub dim_y: usize,
    /// `chi_Y` per conjugacy class of `Gamma`, identity class included.
    pub chi_y: Vec<C64>,
    pub l: usize,
    pub m: usize,
    pub gamma_order: usize,
    pub class_sizes: Vec<usize>,
    pub identity_class: usize,
}

impl HyperplaneSpec {
    pub fn new(gamma: &GammaData, dim_y: usize, chi_y: Vec<C64>, l: usize, m: usize) -> Result<Self, HyperplaneError> {
        if chi_y.len() != gamma.num_classes() {
            return Err(HyperplaneError::CharacterLength {
                expected: gamma.num_classes(),
                got: chi_y.len(),
            });
        }
        Ok(Self {
            dim_y,
            chi_y,
            l,
            m,
            gamma_order: gamma.order(),
            class_sizes: gamma.class_sizes.clone(),
            identity_class: gamma.identity_class,
        })
    }

    /// `W` must be an `l x m` rectangle.
    pub fn from_rep(w: &Partition, y: &RepY) -> Result<Self, HyperplaneError> {
        let (l, m) = w
            .rectangle()
            .ok_or_else(|| HyperplaneError::NotRectangle(w.to_string()))?;
        Self::new(&y.gamma, y.dim, y.character.clone(), l, m)
    }

    fn nonidentity_classes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.class_sizes.len()).filter(move |&k| k != self.identity_class)
    }

    /// Gradient in the coordinates `(k, c_K..)` of [`ParamPoint::coords`].
    pub fn gradient(&self) -> Vec<C64> {
        let dk = c64(0.5 * self.gamma_order as f64 * (self.m as f64 - self.l as f64), 0.0);
        std::iter::once(dk)
            .chain(
                self.nonidentity_classes()
                    .map(|k| self.chi_y[k] * self.class_sizes[k] as f64),
            )
            .collect()
    }
}

pub fn hyp_value(spec: &HyperplaneSpec, p: &ParamPoint) -> C64 {
    let mut value = c64(spec.dim_y as f64, 0.0) + p.k * 0.5 * spec.gamma_order as f64 * (spec.m as f64 - spec.l as f64);
    for k in spec.nonidentity_classes() {
        value += p.c.at(k) * spec.chi_y[k] * spec.class_sizes[k] as f64;
    }
    value
}

pub fn is_member(spec: &HyperplaneSpec, p: &ParamPoint, tol: f64) -> bool {
    hyp_value(spec, p).norm() <= tol
}

/// Basis of the kernel of the linear part of [`hyp_value`]. With pivot `p`
/// the coordinate of largest gradient entry, the vectors are
/// `e_j - (g_j / g_p) e_p` for `j != p`.
pub fn hyp_tangent_basis(spec: &HyperplaneSpec) -> Vec<Vec<C64>> {
    let g = spec.gradient();
    let n = g.len();
    let unit = |j: usize| -> Vec<C64> { (0..n).map(|i| c64(if i == j { 1.0 } else { 0.0 }, 0.0)).collect() };
    let pivot = (0..n).fold(0, |best, j| if g[j].norm() > g[best].norm() { j } else { best });
    if g[pivot].norm() == 0.0 {
        return (0..n).map(unit).collect();
    }
    (0..n)
        .filter(|&j| j != pivot)
        .map(|j| {
            let mut v = unit(j);
            v[pivot] = -g[j] / g[pivot];
            v
        })
        .collect()
}

/// Predicted traces on `M`.
#[derive(Clone, Debug, PartialEq)]
pub struct TracePrediction {
    /// `tr_M(gamma_i) = dim W dim Y^{N-1} chi_Y(gamma)`.
    pub gamma_i: C64,
    /// `tr_M(s_ij gamma_i gamma_j^-1) = psi_W(s_ij) dim Y^{N-1}`.
    pub s_gamma: C64,
    /// Same trace via `(m - l) dim W / (N - 1) dim Y^{N-1}`, rectangles only.
    pub s_gamma_rectangle: Option<C64>,
}

pub fn trace_formulas(w: &Partition, y: &RepY, n: usize, gamma_class: usize) -> TracePrediction {
    assert_eq!(w.n(), n, "|W| must equal N");
    let dim_w = w.hook_dim() as f64;
    let y_pow = (y.dim as f64).powi(n as i32 - 1);
    let psi = transposition_character(w) as f64;
    let s_gamma_rectangle = match (w.rectangle(), n) {
        (Some((l, m)), n) if n >= 2 => Some(c64((m as f64 - l as f64) * dim_w / (n - 1) as f64 * y_pow, 0.0)),
        _ => None,
    };
    TracePrediction {
        gamma_i: y.character[gamma_class] * dim_w * y_pow,
        s_gamma: c64(psi * y_pow, 0.0),
        s_gamma_rectangle,
    }
}

/// `dim M + (k/2) sum_{j != i} sum_gamma tr(s_ij gamma_i gamma_j^-1)
/// + sum_{gamma != 1} c_gamma tr(gamma_i)` from explicit matrices, per `i`.
pub fn trace_condition_check(rep: &WreathRep, p: &ParamPoint) -> Vec<C64> {
    let group = rep.gamma();
    let n = rep.n;
    (0..n)
        .map(|i| {
            let mut value = c64(rep.dim_m as f64, 0.0);
            for j in (0..n).filter(|&j| j != i) {
                for g in 0..group.order() {
                    let e = WreathElement::s_gamma(group, n, i, j, g);
                    value += p.k * 0.5 * rep.element_matrix(&e).trace();
                }
            }
            for g in 1..group.order() {
                value += p.c.at(group.class_of[g]) * rep.factor_gamma[i][g].trace();
            }
            value
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::{make_cyclic, ClassFunction};
    use crate::rank1::segment_rep;
    use crate::wreath::build_m;
    use std::sync::Arc;

    fn sign_spec(l: usize, m: usize) -> (Arc<GammaData>, HyperplaneSpec) {
        let z2 = Arc::new(make_cyclic(2));
        let spec = HyperplaneSpec::new(&z2, 1, vec![c64(1.0, 0.0), c64(-1.0, 0.0)], l, m).unwrap();
        (z2, spec)
    }

    #[test]
    fn z2_sign_value() {
        let (z2, spec) = sign_spec(1, 2);
        let p = |k: f64, cg: f64| ParamPoint::new(c64(k, 0.0), ClassFunction::from_classes(&z2, |_| c64(cg, 0.0)));
        assert!((hyp_value(&spec, &p(0.3, 0.9)) - c64(1.0 + 0.3 - 0.9, 0.0)).norm() < 1e-15);
        assert!(is_member(&spec, &p(0.5, 1.5), MEMBERSHIP_TOL));
        assert_eq!(hyp_tangent_basis(&spec), vec![vec![c64(1.0, 0.0), c64(1.0, 0.0)]]);
    }

    #[test]
    fn square_is_k_independent() {
        let (z2, spec) = sign_spec(2, 2);
        let c = ClassFunction::from_classes(&z2, |_| c64(0.25, 0.0));
        let a = hyp_value(&spec, &ParamPoint::new(c64(0.0, 0.0), c.clone()));
        let b = hyp_value(&spec, &ParamPoint::new(c64(7.0, 1.0), c));
        assert_eq!(a, b);
        assert!(hyp_tangent_basis(&spec).contains(&vec![c64(1.0, 0.0), c64(0.0, 0.0)]));
    }

    #[test]
    fn tangent_basis_is_in_kernel() {
        let z3 = make_cyclic(3);
        let c = ClassFunction::from_classes(&z3, |_| c64(-2.0, 0.0));
        let y = segment_rep(3, 0, 1, &c).unwrap();
        let spec = HyperplaneSpec::from_rep(&Partition::new(vec![2]).unwrap(), &y).unwrap();
        let basis = hyp_tangent_basis(&spec);
        assert_eq!(basis.len(), 2);
        let g = spec.gradient();
        for v in &basis {
            let dot: C64 = v.iter().zip(&g).map(|(a, b)| a * b).sum();
            assert!(dot.norm() < 1e-12);
        }
        // the base point is on H
        assert!(hyp_value(&spec, &ParamPoint::new(c64(0.0, 0.0), c)).norm() < 1e-12);
    }

    #[test]
    fn formulas_on_z3_example() {
        let z3 = make_cyclic(3);
        let c = ClassFunction::from_classes(&z3, |_| c64(-2.0, 0.0));
        let y = segment_rep(3, 0, 1, &c).unwrap();
        let w = Partition::new(vec![2]).unwrap();
        let pred = trace_formulas(&w, &y, 2, 1);
        let eps = crate::gamma::root_of_unity(3, 1);
        assert!((pred.gamma_i - (c64(1.0, 0.0) + eps) * 2.0).norm() < 1e-12);
        assert_eq!(pred.s_gamma, c64(2.0, 0.0));
        assert_eq!(pred.s_gamma_rectangle, Some(c64(2.0, 0.0)));

        let rep = build_m(&w, &y, 2).unwrap();
        assert!((rep.factor_gamma[0][1].trace() - pred.gamma_i).norm() < 1e-9);
        for v in trace_condition_check(&rep, &rep.params) {
            assert!(v.norm() < 1e-9);
        }
    }

    #[test]
    fn sign_of_s2() {
        let z2 = Arc::new(make_cyclic(2));
        let y = crate::rank1::RepY::one_dimensional(z2, 1, ClassFunction::new([(1, c64(1.0, 0.0))].into())).unwrap();
        let pred = trace_formulas(&Partition::new(vec![1, 1]).unwrap(), &y, 2, 1);
        assert_eq!(pred.s_gamma, c64(-1.0, 0.0));
    }

    #[test]
    fn non_rectangle_rejected() {
        let z2 = Arc::new(make_cyclic(2));
        let y = crate::rank1::RepY::one_dimensional(z2, 1, ClassFunction::new([(1, c64(1.0, 0.0))].into())).unwrap();
        assert!(matches!(
            HyperplaneSpec::from_rep(&Partition::new(vec![2, 1]).unwrap(), &y),
            Err(HyperplaneError::NotRectangle(_))
        ));
    }
}
