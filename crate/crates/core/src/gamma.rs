//! Finite subgroups of `SL(2, C)` as explicit matrix groups.
//!
//! A group is generated from a few 2x2 matrices by breadth-first closure;
//! conjugacy classes come from brute-force orbits and characters from
//! explicitly supplied irreducible representations (given on generators and
//! extended along the closure words).
//!
//! The symplectic basis of `L = C^2` is `(x, y)` with `omega_L(x, y) = 1`; a
//! group element acts on the column vectors `x = (1, 0)` and `y = (0, 1)`.

use std::collections::{BTreeMap, VecDeque};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde_json::Value;
use thiserror::Error;

use crate::linalg::{c64, identity, max_norm, Matrix, C64};

/// Group elements closer than this (max-norm) are identified.
pub const MATCH_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GammaError {
    #[error("unknown group spec {0:?}; expected cyclic:<l> or binary_dihedral:<n>")]
    BadSpec(String),
    #[error("class function assigns a value to the identity class {0}")]
    IdentityAssigned(usize),
    #[error("class function has no value for class {0}")]
    MissingClass(usize),
    #[error("class function refers to class {0}, but the group has {1} classes")]
    UnknownClass(usize, usize),
    #[error("malformed class function JSON: {0}")]
    BadJson(String),
}

/// Which family a group belongs to, with its parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaSpec {
    Cyclic(usize),
    BinaryDihedral(usize),
}

impl FromStr for GammaSpec {
    type Err = GammaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GammaError::BadSpec(s.to_string());
        let (kind, arg) = s.trim().split_once(':').ok_or_else(bad)?;
        let n: usize = arg.trim().parse().map_err(|_| bad())?;
        match kind.trim() {
            "cyclic" if n >= 1 => Ok(GammaSpec::Cyclic(n)),
            "binary_dihedral" if n >= 2 => Ok(GammaSpec::BinaryDihedral(n)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for GammaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaSpec::Cyclic(l) => write!(f, "cyclic:{l}"),
            GammaSpec::BinaryDihedral(n) => write!(f, "binary_dihedral:{n}"),
        }
    }
}

impl GammaSpec {
    pub fn build(self) -> GammaData {
        match self {
            GammaSpec::Cyclic(l) => make_cyclic(l),
            GammaSpec::BinaryDihedral(n) => make_binary_dihedral(n),
        }
    }
}

/// A finite subgroup of `SL(2, C)` with its class and character data.
#[derive(Clone, Debug)]
pub struct GammaData {
    pub spec: GammaSpec,
    /// 2x2 matrices; index 0 is the identity.
    pub elements: Vec<Matrix>,
    /// Element indices of the generators.
    pub generators: Vec<usize>,
    /// `words[e]` lists generator positions whose ordered product is element `e`.
    pub words: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    pub class_of: Vec<usize>,
    pub class_reps: Vec<usize>,
    pub class_sizes: Vec<usize>,
    /// `char_table[irrep][class]`.
    pub char_table: Vec<Vec<C64>>,
    pub identity_class: usize,
}

fn find_element(elements: &[Matrix], m: &Matrix) -> Option<usize> {
    elements.iter().position(|e| max_norm(&(e - m)) < MATCH_TOL)
}

impl GammaData {
    /// Closes `gens` under multiplication and attaches the characters of the
    /// representations given by `irreps` (images of the generators).
    pub fn from_generators(spec: GammaSpec, gens: &[Matrix], irreps: &[Vec<Matrix>]) -> Self {
        let mut elements = vec![identity(2)];
        let mut words: Vec<Vec<usize>> = vec![Vec::new()];
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for (j, g) in gens.iter().enumerate() {
                let prod = &elements[e] * g;
                if find_element(&elements, &prod).is_none() {
                    let mut w = words[e].clone();
                    w.push(j);
                    elements.push(prod);
                    words.push(w);
                    queue.push_back(elements.len() - 1);
                }
            }
        }
        let order = elements.len();
        let mul: Vec<Vec<usize>> = (0..order)
            .map(|a| {
                (0..order)
                    .map(|b| find_element(&elements, &(&elements[a] * &elements[b])).expect("group is closed"))
                    .collect()
            })
            .collect();
        let inv: Vec<usize> = (0..order)
            .map(|a| (0..order).find(|&b| mul[a][b] == 0).expect("inverse exists"))
            .collect();
        let mut class_of = vec![usize::MAX; order];
        let mut class_reps = Vec::new();
        let mut class_sizes = Vec::new();
        for e in 0..order {
            if class_of[e] != usize::MAX {
                continue;
            }
            let id = class_reps.len();
            let mut size = 0;
            for h in 0..order {
                let conj = mul[mul[h][e]][inv[h]];
                if class_of[conj] == usize::MAX {
                    class_of[conj] = id;
                    size += 1;
                }
            }
            class_reps.push(e);
            class_sizes.push(size);
        }
        let generators = (0..gens.len())
            .map(|j| find_element(&elements, &gens[j]).expect("generator is an element"))
            .collect();
        let char_table = irreps
            .iter()
            .map(|images| {
                class_reps
                    .iter()
                    .map(|&e| {
                        let d = images[0].nrows();
                        words[e].iter().fold(identity(d), |acc, &j| acc * &images[j]).trace()
                    })
                    .collect()
            })
            .collect();
        GammaData {
            spec,
            elements,
            generators,
            words,
            mul,
            inv,
            class_of,
            class_reps,
            class_sizes,
            char_table,
            identity_class: 0,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn num_classes(&self) -> usize {
        self.class_reps.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// The action of an element on `L` in the `(x, y)` basis.
    pub fn matrix(&self, e: usize) -> &Matrix {
        &self.elements[e]
    }

    /// Classes other than the identity class, in index order.
    pub fn nonidentity_classes(&self) -> Vec<usize> {
        (0..self.num_classes()).filter(|&k| k != self.identity_class).collect()
    }

    pub fn irrep_dim(&self, irrep: usize) -> f64 {
        self.char_table[irrep][self.identity_class].re
    }

    /// Evaluates a representation given on generators at every element.
    pub fn extend_representation(&self, dim: usize, gen_images: &[Matrix]) -> Vec<Matrix> {
        let d = dim;
        self.words
            .iter()
            .map(|w| w.iter().fold(identity(d), |acc, &j| acc * &gen_images[j]))
            .collect()
    }

    /// `1 + sum_{gamma != 1} c_gamma chi(gamma) / chi(1)`: the scalar by which
    /// `lambda(c)` acts on the given irreducible.
    pub fn central_character(&self, c: &ClassFunction, irrep: usize) -> C64 {
        let chi = &self.char_table[irrep];
        let dim = chi[self.identity_class];
        self.nonidentity_classes().iter().fold(c64(1.0, 0.0), |acc, &k| {
            acc + c.at(k) * self.class_sizes[k] as f64 * chi[k] / dim
        })
    }

    /// Verifies that `c` assigns exactly one value to every non-identity class.
    pub fn check_class_function(&self, c: &ClassFunction) -> Result<(), GammaError> {
        if let Some(&k) = c.values.keys().find(|&&k| k >= self.num_classes()) {
            return Err(GammaError::UnknownClass(k, self.num_classes()));
        }
        if c.values.contains_key(&self.identity_class) {
            return Err(GammaError::IdentityAssigned(self.identity_class));
        }
        match self
            .nonidentity_classes()
            .into_iter()
            .find(|k| !c.values.contains_key(k))
        {
            Some(k) => Err(GammaError::MissingClass(k)),
            None => Ok(()),
        }
    }

    /// Dimension of the space of vectors in `L` fixed by every element.
    pub fn fixed_vector_dim(&self) -> usize {
        let mut stacked = crate::linalg::zeros(2 * self.order(), 2);
        for (i, g) in self.elements.iter().enumerate() {
            let d = g - identity(2);
            stacked.view_mut((2 * i, 0), (2, 2)).copy_from(&d);
        }
        crate::linalg::nullspace_basis(&stacked, 1e-10).len()
    }
}

/// `Z/l` generated by `diag(eps, eps^-1)`, `eps = exp(2 pi i / l)`.
/// Element `b` is `g^b`, class `b` is `{g^b}`, and irrep `a` has
/// `chi_a(g^b) = eps^{ab}`.
pub fn make_cyclic(l: usize) -> GammaData {
    assert!(l >= 1, "cyclic group order must be positive");
    if l == 1 {
        return GammaData::from_generators(GammaSpec::Cyclic(1), &[], &[vec![identity(1)]]);
    }
    let eps = root_of_unity(l, 1);
    let g = Matrix::from_diagonal(&nalgebra::DVector::from_vec(vec![eps, eps.conj()]));
    let irreps: Vec<Vec<Matrix>> = (0..l)
        .map(|a| vec![Matrix::from_element(1, 1, root_of_unity(l, a as i64))])
        .collect();
    GammaData::from_generators(GammaSpec::Cyclic(l), &[g], &irreps)
}

/// Binary dihedral group of order `4n`, generated by `diag(eta, eta^-1)`
/// with `eta = exp(pi i / n)` and `[[0, 1], [-1, 0]]`.
pub fn make_binary_dihedral(n: usize) -> GammaData {
    assert!(n >= 2, "binary dihedral parameter must be at least 2");
    let eta = root_of_unity(2 * n, 1);
    let a = Matrix::from_diagonal(&nalgebra::DVector::from_vec(vec![eta, eta.conj()]));
    let b = crate::linalg::from_real_rows(2, 2, &[0.0, 1.0, -1.0, 0.0]);
    let scalar = |z: C64| Matrix::from_element(1, 1, z);
    let mut irreps = Vec::new();
    // one-dimensional: a -> alpha, b -> beta with beta^2 = alpha^n
    for alpha in [1.0, -1.0] {
        let beta_sq = if n.is_multiple_of(2) { 1.0 } else { alpha };
        let betas = if beta_sq > 0.0 {
            [c64(1.0, 0.0), c64(-1.0, 0.0)]
        } else {
            [c64(0.0, 1.0), c64(0.0, -1.0)]
        };
        for beta in betas {
            irreps.push(vec![scalar(c64(alpha, 0.0)), scalar(beta)]);
        }
    }
    for j in 1..n {
        let ej = root_of_unity(2 * n, j as i64);
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        irreps.push(vec![
            Matrix::from_diagonal(&nalgebra::DVector::from_vec(vec![ej, ej.conj()])),
            crate::linalg::from_real_rows(2, 2, &[0.0, sign, 1.0, 0.0]),
        ]);
    }
    GammaData::from_generators(GammaSpec::BinaryDihedral(n), &[a, b], &irreps)
}

/// `exp(2 pi i k / l)`.
pub fn root_of_unity(l: usize, k: i64) -> C64 {
    let r = k.rem_euclid(l as i64) as usize;
    // exact values on the axes
    if (4 * r).is_multiple_of(l) {
        return match 4 * r / l {
            0 => c64(1.0, 0.0),
            1 => c64(0.0, 1.0),
            2 => c64(-1.0, 0.0),
            _ => c64(0.0, -1.0),
        };
    }
    let theta = 2.0 * PI * r as f64 / l as f64;
    c64(theta.cos(), theta.sin())
}

/// A class function on `Gamma \ {1}`, one complex value per class.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ClassFunction {
    pub values: BTreeMap<usize, C64>,
}

impl ClassFunction {
    pub fn new(values: BTreeMap<usize, C64>) -> Self {
        Self { values }
    }

    pub fn zero(gamma: &GammaData) -> Self {
        Self::from_classes(gamma, |_| c64(0.0, 0.0))
    }

    /// Fills every non-identity class from `f`.
    pub fn from_classes(gamma: &GammaData, mut f: impl FnMut(usize) -> C64) -> Self {
        Self {
            values: gamma.nonidentity_classes().into_iter().map(|k| (k, f(k))).collect(),
        }
    }

    /// Value on a class; zero when unassigned.
    pub fn at(&self, class: usize) -> C64 {
        self.values.get(&class).copied().unwrap_or_default()
    }

    /// `{"class_<idx>": [re, im], ..}`.
    pub fn to_json(&self) -> Value {
        let map = self
            .values
            .iter()
            .map(|(k, v)| (format!("class_{k}"), serde_json::json!([v.re, v.im])))
            .collect();
        Value::Object(map)
    }

    pub fn from_json(value: &Value) -> Result<Self, GammaError> {
        let obj = value
            .as_object()
            .ok_or_else(|| GammaError::BadJson("expected an object".into()))?;
        let mut values = BTreeMap::new();
        for (key, v) in obj {
            let idx: usize = key
                .strip_prefix("class_")
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| GammaError::BadJson(format!("bad key {key:?}")))?;
            let z = complex_from_json(v).ok_or_else(|| GammaError::BadJson(format!("bad value for {key:?}")))?;
            values.insert(idx, z);
        }
        Ok(Self { values })
    }
}

/// Parses `[re, im]` (a bare number is read as real).
pub fn complex_from_json(v: &Value) -> Option<C64> {
    match v {
        Value::Number(n) => Some(c64(n.as_f64()?, 0.0)),
        Value::Array(a) if a.len() == 2 => Some(c64(a[0].as_f64()?, a[1].as_f64()?)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_groups() -> Vec<GammaData> {
        let mut gs: Vec<GammaData> = (1..=6).map(make_cyclic).collect();
        gs.extend((2..=5).map(make_binary_dihedral));
        gs
    }

    #[test]
    fn cyclic_tables() {
        let z2 = make_cyclic(2);
        assert_eq!(z2.order(), 2);
        assert!(max_norm(&(z2.matrix(1) + identity(2))) < 1e-15);
        assert_eq!(z2.char_table[1][1], c64(-1.0, 0.0));
        assert_eq!(z2.char_table[0][1], c64(1.0, 0.0));

        let z3 = make_cyclic(3);
        assert_eq!(z3.num_classes(), 3);
        let eps = z3.char_table[1][1];
        assert!((eps * eps * eps - c64(1.0, 0.0)).norm() < 1e-12);
        assert!((eps - root_of_unity(3, 1)).norm() < 1e-15);

        let z1 = make_cyclic(1);
        assert_eq!((z1.order(), z1.num_classes()), (1, 1));
    }

    #[test]
    fn binary_dihedral_class_counts() {
        let q8 = make_binary_dihedral(2);
        assert_eq!((q8.order(), q8.num_classes()), (8, 5));
        let d3 = make_binary_dihedral(3);
        assert_eq!((d3.order(), d3.num_classes()), (12, 6));
        for g in sample_groups() {
            assert_eq!(g.class_sizes[g.identity_class], 1);
            assert_eq!(g.char_table.len(), g.num_classes(), "{:?}", g.spec);
        }
    }

    #[test]
    fn elements_are_special_linear_and_closed() {
        for g in sample_groups() {
            for (a, m) in g.elements.iter().enumerate() {
                let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
                assert!((det - c64(1.0, 0.0)).norm() < 1e-12);
                for b in 0..g.order() {
                    let prod = m * g.matrix(b);
                    assert!(max_norm(&(prod - g.matrix(g.mul(a, b)))) < 1e-12);
                }
                assert_eq!(g.mul(a, g.inv(a)), 0);
            }
        }
    }

    #[test]
    fn classes_are_conjugation_invariant() {
        for g in sample_groups() {
            for e in 0..g.order() {
                for h in 0..g.order() {
                    let conj = g.mul(g.mul(h, e), g.inv(h));
                    assert_eq!(g.class_of[conj], g.class_of[e]);
                }
            }
        }
    }

    #[test]
    fn character_orthogonality() {
        for g in sample_groups() {
            for (a, chi_a) in g.char_table.iter().enumerate() {
                for (b, chi_b) in g.char_table.iter().enumerate() {
                    let s: C64 = (0..g.num_classes())
                        .map(|k| chi_a[k] * chi_b[k].conj() * g.class_sizes[k] as f64)
                        .sum::<C64>()
                        / g.order() as f64;
                    let expected = if a == b { 1.0 } else { 0.0 };
                    assert!((s - c64(expected, 0.0)).norm() < 1e-10, "{:?} {a} {b}", g.spec);
                }
            }
        }
    }

    #[test]
    fn element_sum_vanishes_and_no_fixed_vectors() {
        for g in sample_groups().into_iter().filter(|g| g.order() > 1) {
            let total = g.elements.iter().fold(crate::linalg::zeros(2, 2), |acc, m| acc + m);
            assert!(max_norm(&total) <= 1e-12, "{:?}", g.spec);
            assert_eq!(g.fixed_vector_dim(), 0);
        }
    }

    #[test]
    fn central_characters() {
        let z2 = make_cyclic(2);
        let c = ClassFunction::from_classes(&z2, |_| c64(1.0, 0.0));
        assert!(g_close(z2.central_character(&c, 1), c64(0.0, 0.0)));

        let z3 = make_cyclic(3);
        let c = ClassFunction::from_classes(&z3, |_| c64(-2.0, 0.0));
        assert!(g_close(z3.central_character(&c, 1), c64(3.0, 0.0)));

        for g in sample_groups() {
            let zero = ClassFunction::zero(&g);
            for irrep in 0..g.num_classes() {
                assert!(g_close(g.central_character(&zero, irrep), c64(1.0, 0.0)));
            }
        }
    }

    fn g_close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn class_function_validation() {
        let z3 = make_cyclic(3);
        let ok = ClassFunction::from_classes(&z3, |k| c64(k as f64, 0.0));
        assert_eq!(z3.check_class_function(&ok), Ok(()));
        let mut with_id = ok.clone();
        with_id.values.insert(0, c64(1.0, 0.0));
        assert_eq!(z3.check_class_function(&with_id), Err(GammaError::IdentityAssigned(0)));
        let mut missing = ok.clone();
        missing.values.remove(&2);
        assert_eq!(z3.check_class_function(&missing), Err(GammaError::MissingClass(2)));
    }

    #[test]
    fn class_function_json() {
        let z3 = make_cyclic(3);
        let c = ClassFunction::from_classes(&z3, |k| c64(-2.0, k as f64));
        let back = ClassFunction::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        assert!(ClassFunction::from_json(&serde_json::json!({"klass_1": [0, 0]})).is_err());
    }

    #[test]
    fn spec_strings() {
        assert_eq!("cyclic:3".parse::<GammaSpec>(), Ok(GammaSpec::Cyclic(3)));
        assert_eq!(
            "binary_dihedral:2".parse::<GammaSpec>(),
            Ok(GammaSpec::BinaryDihedral(2))
        );
        assert!("binary_dihedral:1".parse::<GammaSpec>().is_err());
        assert!("dihedral:3".parse::<GammaSpec>().is_err());
        assert_eq!(GammaSpec::Cyclic(4).to_string(), "cyclic:4");
    }
}
