//! The wreath product `Gamma_N = S_N ⋉ Gamma^N`, its symplectic reflections,
//! and representations of `H_{1,k,c}(Gamma_N)` on `M = W ⊗ Y^{⊗N}`.
//!
//! Conventions:
//!
//! * `V = L^N` has basis `x_1..x_N, y_1..y_N` (indices `0..N` and `N..2N`)
//!   with `omega(x_i, y_j) = delta_ij`.
//! * A [`WreathElement`] `(sigma, t)` stands for `sigma * diag(t)`: first
//!   `t_k` acts in factor `k`, then factor `k` is moved to `sigma(k)`. Hence
//!   `(sigma, t)(tau, u) = (sigma tau, (t ∘ tau) u)` and
//!   `s_ij gamma_i s_ij = gamma_j`.
//! * Parameters are `t = 1`, `k` on the reflections `s_ij gamma_i gamma_j^-1`,
//!   and `c_gamma` on `gamma_i`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use thiserror::Error;

use crate::gamma::{ClassFunction, GammaData};
use crate::linalg::{
    c64, commutant_dim, commutator, identity, kron, max_norm, nullspace_basis, range_basis, rank, zeros, Matrix, C64,
};
use crate::rank1::RepY;
use crate::symgroup::{seminormal_rep, Partition, Perm};

/// Largest `|Gamma_N|` for which full-group sums are attempted.
pub const MAX_GROUP_ORDER: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WreathError {
    #[error("element is not a symplectic reflection: rank(Id - s) = {0}")]
    NotReflection(usize),
    #[error("W has {w} boxes but N = {n}")]
    SizeMismatch { w: usize, n: usize },
    #[error("group of order {0} exceeds the limit {MAX_GROUP_ORDER}")]
    GroupTooLarge(usize),
    #[error("endomorphism dimension {0} is not close to an integer")]
    NonIntegerEndDim(f64),
    #[error("expected {expected} matrices of size {dim}x{dim} for {what}")]
    BadOverride {
        what: &'static str,
        expected: usize,
        dim: usize,
    },
}

/// An element `sigma * diag(t)` of `Gamma_N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WreathElement {
    pub perm: Perm,
    /// Element indices into `GammaData::elements`, one per factor.
    pub tuple: Vec<usize>,
}

impl WreathElement {
    pub fn identity(n: usize) -> Self {
        Self {
            perm: Perm::identity(n),
            tuple: vec![0; n],
        }
    }

    pub fn n(&self) -> usize {
        self.tuple.len()
    }

    /// `gamma_i`: `gamma` placed in factor `i`.
    pub fn gamma_at(n: usize, i: usize, gamma: usize) -> Self {
        let mut e = Self::identity(n);
        e.tuple[i] = gamma;
        e
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        Self {
            perm: Perm::transposition(n, i, j),
            tuple: vec![0; n],
        }
    }

    /// `s_ij gamma_i gamma_j^-1`.
    pub fn s_gamma(group: &GammaData, n: usize, i: usize, j: usize, gamma: usize) -> Self {
        let mut e = Self::transposition(n, i, j);
        e.tuple[i] = gamma;
        e.tuple[j] = group.inv(gamma);
        e
    }

    pub fn mul(&self, other: &Self, group: &GammaData) -> Self {
        wreath_mul(self, other, group)
    }

    pub fn inverse(&self, group: &GammaData) -> Self {
        let inv = self.perm.inverse();
        let tuple = (0..self.n()).map(|k| group.inv(self.tuple[inv.apply(k)])).collect();
        Self { perm: inv, tuple }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.is_identity() && self.tuple.iter().all(|&t| t == 0)
    }

    /// Action on `V` in the basis `x_1..x_N, y_1..y_N`.
    pub fn action_on_v(&self, group: &GammaData) -> Matrix {
        let n = self.n();
        let mut a = zeros(2 * n, 2 * n);
        for k in 0..n {
            let g = group.matrix(self.tuple[k]);
            let target = self.perm.apply(k);
            for src in 0..2 {
                for dst in 0..2 {
                    a[(dst * n + target, src * n + k)] = g[(dst, src)];
                }
            }
        }
        a
    }
}

/// `(sigma, t)(tau, u) = (sigma tau, (t ∘ tau) u)`.
pub fn wreath_mul(a: &WreathElement, b: &WreathElement, group: &GammaData) -> WreathElement {
    let tuple = (0..a.n())
        .map(|k| group.mul(a.tuple[b.perm.apply(k)], b.tuple[k]))
        .collect();
    WreathElement {
        perm: a.perm.compose(&b.perm),
        tuple,
    }
}

/// Every element of `Gamma_N`, permutations outermost.
pub fn all_elements(n: usize, group: &GammaData) -> Vec<WreathElement> {
    let tuples: Vec<Vec<usize>> = if n == 0 {
        vec![Vec::new()]
    } else {
        (0..n).map(|_| 0..group.order()).multi_cartesian_product().collect()
    };
    Perm::all(n)
        .into_iter()
        .flat_map(|perm| {
            tuples.iter().map(move |t| WreathElement {
                perm: perm.clone(),
                tuple: t.clone(),
            })
        })
        .collect()
}

pub fn group_order(n: usize, group: &GammaData) -> usize {
    (1..=n).product::<usize>() * group.order().pow(n as u32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReflectionKind {
    /// `s_ij gamma_i gamma_j^-1`.
    S,
    /// `gamma_i`, `gamma != 1`.
    Gamma,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Reflection {
    pub element: WreathElement,
    pub kind: ReflectionKind,
    pub class_id: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReflectionClass {
    pub kind: ReflectionKind,
    /// For type `Gamma`, the conjugacy class of `Gamma` the entries lie in.
    pub gamma_class: Option<usize>,
    pub size: usize,
}

#[derive(Clone, Debug)]
pub struct ReflectionCensus {
    pub reflections: Vec<Reflection>,
    pub classes: Vec<ReflectionClass>,
}

impl ReflectionCensus {
    pub fn count(&self, kind: ReflectionKind) -> usize {
        self.reflections.iter().filter(|r| r.kind == kind).count()
    }
}

/// Enumerates `Gamma_N`, keeps the elements with `rank(Id - s) = 2` on `V`,
/// and splits them into conjugacy classes by orbits under conjugation by the
/// generators.
pub fn symplectic_reflections(n: usize, group: &GammaData) -> ReflectionCensus {
    let id = identity(2 * n);
    let mut found: Vec<(WreathElement, ReflectionKind)> = Vec::new();
    for e in all_elements(n, group) {
        let r = rank(&(&id - e.action_on_v(group)), 1e-10);
        if r != 2 {
            continue;
        }
        let kind = match e.perm.fixed_points() {
            f if f == n => ReflectionKind::Gamma,
            f if f + 2 == n => ReflectionKind::S,
            _ => unreachable!("rank-2 element with a longer cycle"),
        };
        found.push((e, kind));
    }
    let index: HashMap<&WreathElement, usize> = found.iter().enumerate().map(|(i, (e, _))| (e, i)).collect();
    let gens = generator_elements(n, group);
    let mut parent: Vec<usize> = (0..found.len()).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (i, (e, _)) in found.iter().enumerate() {
        for g in &gens {
            let conj = g.mul(e, group).mul(&g.inverse(group), group);
            let j = index[&conj];
            let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
            parent[ri.max(rj)] = ri.min(rj);
        }
    }
    // label orbits, then order classes: S first, then Gamma classes by index
    let label = |(e, kind): &(WreathElement, ReflectionKind)| match kind {
        ReflectionKind::S => (ReflectionKind::S, None),
        ReflectionKind::Gamma => {
            let nontrivial = e.tuple.iter().copied().find(|&t| t != 0).expect("nontrivial entry");
            (ReflectionKind::Gamma, Some(group.class_of[nontrivial]))
        }
    };
    let mut orbit_labels: BTreeMap<usize, (ReflectionKind, Option<usize>)> = BTreeMap::new();
    for (i, entry) in found.iter().enumerate() {
        let r = root(&mut parent, i);
        orbit_labels.entry(r).or_insert_with(|| label(entry));
    }
    let mut ordered: Vec<(usize, (ReflectionKind, Option<usize>))> = orbit_labels.into_iter().collect();
    ordered.sort_by_key(|(r, l)| (*l, *r));
    let class_of_root: HashMap<usize, usize> = ordered.iter().enumerate().map(|(c, (r, _))| (*r, c)).collect();
    let mut classes: Vec<ReflectionClass> = ordered
        .iter()
        .map(|(_, (kind, gamma_class))| ReflectionClass {
            kind: *kind,
            gamma_class: *gamma_class,
            size: 0,
        })
        .collect();
    let reflections = found
        .iter()
        .enumerate()
        .map(|(i, (e, kind))| {
            let class_id = class_of_root[&root(&mut parent, i)];
            classes[class_id].size += 1;
            Reflection {
                element: e.clone(),
                kind: *kind,
                class_id,
            }
        })
        .collect();
    ReflectionCensus { reflections, classes }
}

/// Adjacent transpositions followed by the generators of `Gamma` in factor 1.
pub fn generator_elements(n: usize, group: &GammaData) -> Vec<WreathElement> {
    let mut gens: Vec<WreathElement> = (0..n.saturating_sub(1))
        .map(|i| WreathElement::transposition(n, i, i + 1))
        .collect();
    if n > 0 {
        gens.extend(group.generators.iter().map(|&g| WreathElement::gamma_at(n, 0, g)));
    }
    gens
}

/// The Gram matrix of `omega_V`.
pub fn omega_v(n: usize) -> Matrix {
    let mut om = zeros(2 * n, 2 * n);
    for k in 0..n {
        om[(k, n + k)] = c64(1.0, 0.0);
        om[(n + k, k)] = c64(-1.0, 0.0);
    }
    om
}

/// Gram matrix of `omega_s(u, v) = omega_V(P u, P v)`, with `P` the
/// projector onto `Im(Id - s)` along `Ker(Id - s)`.
pub fn omega_s(s: &WreathElement, group: &GammaData) -> Result<Matrix, WreathError> {
    let n = s.n();
    let dim = 2 * n;
    let a = identity(dim) - s.action_on_v(group);
    let r = rank(&a, 1e-10);
    if r != 2 {
        return Err(WreathError::NotReflection(r));
    }
    let image = range_basis(&a, 1e-10);
    let kernel = nullspace_basis(&a, 1e-10);
    let mut basis = zeros(dim, dim);
    for (col, v) in image.iter().enumerate() {
        basis.set_column(col, &v.column(0));
    }
    for (col, v) in kernel.iter().enumerate() {
        basis.set_column(2 + col, &v.column(0));
    }
    let inv = basis.clone().try_inverse().expect("image and kernel are complementary");
    let mut keep = zeros(dim, dim);
    keep[(0, 0)] = c64(1.0, 0.0);
    keep[(1, 1)] = c64(1.0, 0.0);
    let proj = &basis * keep * inv;
    Ok(proj.transpose() * omega_v(n) * proj)
}

/// `(k, c)` with `t = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamPoint {
    pub k: C64,
    pub c: ClassFunction,
}

impl ParamPoint {
    pub fn new(k: C64, c: ClassFunction) -> Self {
        Self { k, c }
    }

    /// Coordinates `(k, c_K for each non-identity class K)`.
    pub fn coords(&self, group: &GammaData) -> Vec<C64> {
        std::iter::once(self.k)
            .chain(group.nonidentity_classes().into_iter().map(|k| self.c.at(k)))
            .collect()
    }

    pub fn from_coords(group: &GammaData, coords: &[C64]) -> Self {
        let classes = group.nonidentity_classes();
        assert_eq!(coords.len(), classes.len() + 1, "wrong number of parameter coordinates");
        let c = ClassFunction::new(classes.into_iter().zip(coords[1..].iter().copied()).collect());
        Self { k: coords[0], c }
    }

    /// `self + h * direction`, coordinatewise.
    pub fn shifted(&self, group: &GammaData, direction: &[C64], h: C64) -> Self {
        let coords: Vec<C64> = self
            .coords(group)
            .iter()
            .zip(direction)
            .map(|(p, d)| p + h * d)
            .collect();
        Self::from_coords(group, &coords)
    }
}

/// Element of the group algebra `C[Gamma_N]`.
pub type GroupAlgebraElement = BTreeMap<WreathElement, C64>;

fn add_term(x: &mut GroupAlgebraElement, e: WreathElement, coeff: C64) {
    *x.entry(e).or_insert(c64(0.0, 0.0)) += coeff;
}

/// Basis vectors of `V`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VBasis {
    X(usize),
    Y(usize),
}

impl VBasis {
    pub fn index(self, n: usize) -> usize {
        match self {
            VBasis::X(i) => i,
            VBasis::Y(i) => n + i,
        }
    }

    pub fn factor(self) -> usize {
        match self {
            VBasis::X(i) | VBasis::Y(i) => i,
        }
    }

    /// 0 for `x`, 1 for `y`.
    pub fn component(self) -> usize {
        match self {
            VBasis::X(_) => 0,
            VBasis::Y(_) => 1,
        }
    }

    pub fn all(n: usize) -> Vec<VBasis> {
        (0..n).map(VBasis::X).chain((0..n).map(VBasis::Y)).collect()
    }
}

impl fmt::Display for VBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VBasis::X(i) => write!(f, "x_{}", i + 1),
            VBasis::Y(i) => write!(f, "y_{}", i + 1),
        }
    }
}

/// `omega_L(a, b)` for column vectors in the `(x, y)` basis.
fn omega_l(a: (C64, C64), b: (C64, C64)) -> C64 {
    a.0 * b.1 - a.1 * b.0
}

/// `omega_L(gamma u, v)` for basis components `u`, `v`.
fn omega_l_twisted(group: &GammaData, gamma: usize, u: usize, v: usize) -> C64 {
    let g = group.matrix(gamma);
    let gu = (g[(0, u)], g[(1, u)]);
    let ev = if v == 0 {
        (c64(1.0, 0.0), c64(0.0, 0.0))
    } else {
        (c64(0.0, 0.0), c64(1.0, 0.0))
    };
    omega_l(gu, ev)
}

/// Reflections with their forms, reused across many evaluations of `kappa`.
pub struct KappaTable {
    n: usize,
    census: ReflectionCensus,
    forms: Vec<Matrix>,
}

impl KappaTable {
    pub fn new(n: usize, group: &GammaData) -> Self {
        let census = symplectic_reflections(n, group);
        let forms = census
            .reflections
            .iter()
            .map(|r| omega_s(&r.element, group).expect("census only holds reflections"))
            .collect();
        Self { n, census, forms }
    }

    pub fn census(&self) -> &ReflectionCensus {
        &self.census
    }

    /// `kappa(u, v) = omega(u, v) 1 + sum_s f_s omega_s(u, v) s`, with every
    /// `omega_s` multiplied by `omega_scale` (1 for the true algebra).
    pub fn kappa_scaled(
        &self,
        group: &GammaData,
        u: VBasis,
        v: VBasis,
        p: &ParamPoint,
        omega_scale: f64,
    ) -> GroupAlgebraElement {
        let (iu, iv) = (u.index(self.n), v.index(self.n));
        let mut out = GroupAlgebraElement::new();
        let base = omega_v(self.n)[(iu, iv)];
        if base != c64(0.0, 0.0) {
            add_term(&mut out, WreathElement::identity(self.n), base);
        }
        for (r, form) in self.census.reflections.iter().zip(&self.forms) {
            let f = match r.kind {
                ReflectionKind::S => p.k,
                ReflectionKind::Gamma => {
                    let g = r
                        .element
                        .tuple
                        .iter()
                        .copied()
                        .find(|&t| t != 0)
                        .expect("nontrivial entry");
                    p.c.at(group.class_of[g])
                }
            };
            let coeff = f * form[(iu, iv)] * omega_scale;
            if coeff.norm() > 1e-14 {
                add_term(&mut out, r.element.clone(), coeff);
            }
        }
        out
    }
}

pub fn kappa(u: VBasis, v: VBasis, p: &ParamPoint, group: &GammaData, n: usize) -> GroupAlgebraElement {
    KappaTable::new(n, group).kappa_scaled(group, u, v, p, 1.0)
}

/// Right-hand side of `[u, v]` in the explicit presentation: relation R1
/// (scaled by `omega_L(u, v)`) when `u`, `v` share a factor, R2 otherwise.
pub fn presentation_rhs(u: VBasis, v: VBasis, p: &ParamPoint, group: &GammaData, n: usize) -> GroupAlgebraElement {
    let mut out = GroupAlgebraElement::new();
    let (i, j) = (u.factor(), v.factor());
    let half_k = p.k * 0.5;
    if i == j {
        let scale = match (u.component(), v.component()) {
            (0, 1) => c64(1.0, 0.0),
            (1, 0) => c64(-1.0, 0.0),
            _ => return out,
        };
        add_term(&mut out, WreathElement::identity(n), scale);
        for other in (0..n).filter(|&o| o != i) {
            for g in 0..group.order() {
                add_term(&mut out, WreathElement::s_gamma(group, n, i, other, g), scale * half_k);
            }
        }
        for g in 1..group.order() {
            add_term(
                &mut out,
                WreathElement::gamma_at(n, i, g),
                scale * p.c.at(group.class_of[g]),
            );
        }
    } else {
        for g in 0..group.order() {
            let w = omega_l_twisted(group, g, u.component(), v.component());
            if w.norm() > 1e-14 {
                add_term(&mut out, WreathElement::s_gamma(group, n, i, j, g), -half_k * w);
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct PresentationMismatch {
    pub u: VBasis,
    pub v: VBasis,
    pub element: WreathElement,
    pub from_kappa: C64,
    pub from_relations: C64,
}

/// Compares `kappa` with the explicit relations coefficient by coefficient
/// for every ordered pair of basis vectors, and checks antisymmetry.
pub fn presentation_check(n: usize, group: &GammaData, p: &ParamPoint) -> Result<(), Vec<PresentationMismatch>> {
    presentation_check_scaled(n, group, p, 1.0)
}

/// [`presentation_check`] with every `omega_s` multiplied by `omega_scale`;
/// any scale other than 1 must produce mismatches.
pub fn presentation_check_scaled(
    n: usize,
    group: &GammaData,
    p: &ParamPoint,
    omega_scale: f64,
) -> Result<(), Vec<PresentationMismatch>> {
    const TOL: f64 = 1e-10;
    let table = KappaTable::new(n, group);
    let mut mismatches = Vec::new();
    for u in VBasis::all(n) {
        for v in VBasis::all(n) {
            let lhs = table.kappa_scaled(group, u, v, p, omega_scale);
            let rhs = presentation_rhs(u, v, p, group, n);
            let swapped = table.kappa_scaled(group, v, u, p, omega_scale);
            let keys: std::collections::BTreeSet<&WreathElement> =
                lhs.keys().chain(rhs.keys()).chain(swapped.keys()).collect();
            for e in keys {
                let a = lhs.get(e).copied().unwrap_or_default();
                let b = rhs.get(e).copied().unwrap_or_default();
                let anti = swapped.get(e).copied().unwrap_or_default();
                if (a - b).norm() > TOL || (a + anti).norm() > TOL {
                    mismatches.push(PresentationMismatch {
                        u,
                        v,
                        element: e.clone(),
                        from_kappa: a,
                        from_relations: b,
                    });
                }
            }
        }
    }
    if mismatches.is_empty() {
        Ok(())
    } else {
        Err(mismatches)
    }
}

/// Matrices of `H_{1,k,c}(Gamma_N)` generators on `M = W ⊗ Y^{⊗N}`.
#[derive(Clone, Debug)]
pub struct WreathRep {
    pub n: usize,
    pub w: Partition,
    pub y: RepY,
    pub dim_m: usize,
    /// `s_{i,i+1}` for `i = 0..N-1`.
    pub transpositions: Vec<Matrix>,
    /// `factor_gamma[k][e]`: element `e` of `Gamma` acting in factor `k`.
    pub factor_gamma: Vec<Vec<Matrix>>,
    pub xs: Vec<Matrix>,
    pub ys: Vec<Matrix>,
    pub params: ParamPoint,
}

/// Operator on `Y^{⊗N}` swapping factors `i` and `i + 1`.
fn factor_swap(dim_y: usize, n: usize, i: usize) -> Matrix {
    let total = dim_y.pow(n as u32);
    let mut p = zeros(total, total);
    for idx in 0..total {
        let mut digits: Vec<usize> = (0..n).map(|k| (idx / dim_y.pow((n - 1 - k) as u32)) % dim_y).collect();
        digits.swap(i, i + 1);
        let target = digits.iter().fold(0, |acc, &d| acc * dim_y + d);
        p[(target, idx)] = c64(1.0, 0.0);
    }
    p
}

/// `I_W ⊗ I ⊗ .. ⊗ op (factor k) ⊗ .. ⊗ I`.
fn in_factor(dim_w: usize, dim_y: usize, n: usize, k: usize, op: &Matrix) -> Matrix {
    let left = identity(dim_w * dim_y.pow(k as u32));
    let right = identity(dim_y.pow((n - 1 - k) as u32));
    kron(&left, &kron(op, &right))
}

/// The `k = 0` module: `S_N` acts on `W` and permutes the tensor factors,
/// the `i`-th copy of `H_{1,c}(Gamma)` acts on the `i`-th factor.
pub fn build_m(w: &Partition, y: &RepY, n: usize) -> Result<WreathRep, WreathError> {
    if w.n() != n {
        return Err(WreathError::SizeMismatch { w: w.n(), n });
    }
    let semi = seminormal_rep(w);
    let dim_w = semi.dim;
    let dim_y = y.dim;
    let dim_m = dim_w * dim_y.pow(n as u32);
    let transpositions = (0..n.saturating_sub(1))
        .map(|i| kron(&semi.gens[i].to_complex(), &factor_swap(dim_y, n, i)))
        .collect();
    let factor_gamma = (0..n)
        .map(|k| {
            y.group_action
                .iter()
                .map(|g| in_factor(dim_w, dim_y, n, k, g))
                .collect()
        })
        .collect();
    let xs = (0..n).map(|k| in_factor(dim_w, dim_y, n, k, &y.x)).collect();
    let ys = (0..n).map(|k| in_factor(dim_w, dim_y, n, k, &y.y)).collect();
    Ok(WreathRep {
        n,
        w: w.clone(),
        y: y.clone(),
        dim_m,
        transpositions,
        factor_gamma,
        xs,
        ys,
        params: ParamPoint::new(c64(0.0, 0.0), y.c.clone()),
    })
}

impl WreathRep {
    pub fn gamma(&self) -> &GammaData {
        &self.y.gamma
    }

    pub fn gamma_arc(&self) -> Arc<GammaData> {
        self.y.gamma.clone()
    }

    pub fn dim_w(&self) -> usize {
        self.dim_m / self.y.dim.pow(self.n as u32)
    }

    pub fn perm_matrix(&self, perm: &Perm) -> Matrix {
        perm.adjacent_word()
            .into_iter()
            .fold(identity(self.dim_m), |acc, b| acc * &self.transpositions[b])
    }

    /// `rho(sigma) * prod_k rho_k(t_k)`.
    pub fn element_matrix(&self, e: &WreathElement) -> Matrix {
        let diag = e
            .tuple
            .iter()
            .enumerate()
            .filter(|(_, &t)| t != 0)
            .fold(identity(self.dim_m), |acc, (k, &t)| acc * &self.factor_gamma[k][t]);
        if e.perm.is_identity() {
            diag
        } else {
            self.perm_matrix(&e.perm) * diag
        }
    }

    /// Generators of `Gamma_N` with their matrices.
    pub fn group_gens(&self) -> Vec<(WreathElement, Matrix)> {
        generator_elements(self.n, self.gamma())
            .into_iter()
            .map(|e| {
                let m = self.element_matrix(&e);
                (e, m)
            })
            .collect()
    }

    /// `[X_1..X_N, Y_1..Y_N]`, matching the basis order of `V`.
    pub fn vector_matrices(&self) -> Vec<Matrix> {
        self.xs.iter().chain(&self.ys).cloned().collect()
    }

    /// Same group action, new images of the vectors (`[X.., Y..]`).
    pub fn with_vectors(&self, vectors: &[Matrix]) -> Result<WreathRep, WreathError> {
        if vectors.len() != 2 * self.n || vectors.iter().any(|m| m.shape() != (self.dim_m, self.dim_m)) {
            return Err(WreathError::BadOverride {
                what: "x_i, y_i",
                expected: 2 * self.n,
                dim: self.dim_m,
            });
        }
        let mut out = self.clone();
        out.xs = vectors[..self.n].to_vec();
        out.ys = vectors[self.n..].to_vec();
        Ok(out)
    }

    /// Dimension of the commutant of the algebra generated by the group and
    /// the vectors; 1 certifies irreducibility.
    pub fn commutant_dim(&self) -> usize {
        let mut mats: Vec<Matrix> = self.group_gens().into_iter().map(|(_, m)| m).collect();
        mats.extend(self.vector_matrices());
        commutant_dim(&mats, 1e-9)
    }
}

/// One relation instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationKind {
    /// `[x_i, y_i] = ..`.
    R1 { i: usize },
    /// `[u_i, v_j] = ..` for `i < j`.
    R2 { u: VBasis, v: VBasis },
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationKind::R1 { i } => write!(f, "R1[x_{0},y_{0}]", i + 1),
            RelationKind::R2 { u, v } => write!(f, "R2[{u},{v}]"),
        }
    }
}

/// The relations `[u, v] = rhs(k, c)` on `M`, with the right-hand side split
/// as `constant + sum_q p_q * param_terms[q]` over the parameter coordinates
/// `(k, c_K..)`.
#[derive(Clone, Debug)]
pub struct RelationSystem {
    pub n: usize,
    pub dim: usize,
    pub kinds: Vec<RelationKind>,
    pub constant: Vec<Matrix>,
    /// `param_terms[q][b]`.
    pub param_terms: Vec<Vec<Matrix>>,
}

impl RelationSystem {
    pub fn new(rep: &WreathRep) -> Self {
        let n = rep.n;
        let group = rep.gamma();
        let d = rep.dim_m;
        let mut kinds = Vec::new();
        for i in 0..n {
            kinds.push(RelationKind::R1 { i });
        }
        for i in 0..n {
            for j in (i + 1)..n {
                for (cu, cv) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                    let u = if cu == 0 { VBasis::X(i) } else { VBasis::Y(i) };
                    let v = if cv == 0 { VBasis::X(j) } else { VBasis::Y(j) };
                    kinds.push(RelationKind::R2 { u, v });
                }
            }
        }
        let classes = group.nonidentity_classes();
        let mut constant = Vec::with_capacity(kinds.len());
        let mut param_terms = vec![Vec::with_capacity(kinds.len()); classes.len() + 1];
        let mut s_gamma_cache: HashMap<(usize, usize, usize), Matrix> = HashMap::new();
        let mut s_gamma = |i: usize, j: usize, g: usize| -> Matrix {
            s_gamma_cache
                .entry((i, j, g))
                .or_insert_with(|| rep.element_matrix(&WreathElement::s_gamma(group, n, i, j, g)))
                .clone()
        };
        for kind in &kinds {
            match *kind {
                RelationKind::R1 { i } => {
                    constant.push(identity(d));
                    let mut k_term = zeros(d, d);
                    for j in (0..n).filter(|&j| j != i) {
                        for g in 0..group.order() {
                            k_term += s_gamma(i, j, g) * c64(0.5, 0.0);
                        }
                    }
                    param_terms[0].push(k_term);
                    for (q, &class) in classes.iter().enumerate() {
                        let mut term = zeros(d, d);
                        for g in (1..group.order()).filter(|&g| group.class_of[g] == class) {
                            term += &rep.factor_gamma[i][g];
                        }
                        param_terms[q + 1].push(term);
                    }
                }
                RelationKind::R2 { u, v } => {
                    constant.push(zeros(d, d));
                    let (i, j) = (u.factor(), v.factor());
                    let mut k_term = zeros(d, d);
                    for g in 0..group.order() {
                        let w = omega_l_twisted(group, g, u.component(), v.component());
                        if w.norm() > 1e-14 {
                            k_term -= s_gamma(i, j, g) * (w * 0.5);
                        }
                    }
                    param_terms[0].push(k_term);
                    for terms in param_terms.iter_mut().skip(1) {
                        terms.push(zeros(d, d));
                    }
                }
            }
        }
        Self {
            n,
            dim: d,
            kinds,
            constant,
            param_terms,
        }
    }

    pub fn num_params(&self) -> usize {
        self.param_terms.len()
    }

    pub fn rhs(&self, coords: &[C64]) -> Vec<Matrix> {
        self.constant
            .iter()
            .enumerate()
            .map(|(b, c0)| {
                coords
                    .iter()
                    .zip(&self.param_terms)
                    .fold(c0.clone(), |acc, (p, terms)| acc + &terms[b] * *p)
            })
            .collect()
    }

    /// Right-hand side derivative along a parameter direction.
    pub fn rhs_direction(&self, direction: &[C64]) -> Vec<Matrix> {
        (0..self.kinds.len())
            .map(|b| {
                direction
                    .iter()
                    .zip(&self.param_terms)
                    .fold(zeros(self.dim, self.dim), |acc, (p, terms)| acc + &terms[b] * *p)
            })
            .collect()
    }

    /// `U(a) V(b) - V(b) U(a)` per relation, for vector tuples `a`, `b`.
    pub fn bilinear(&self, a: &[Matrix], b: &[Matrix]) -> Vec<Matrix> {
        let n = self.n;
        self.kinds
            .iter()
            .map(|kind| {
                let (iu, iv) = match *kind {
                    RelationKind::R1 { i } => (i, n + i),
                    RelationKind::R2 { u, v } => (u.index(n), v.index(n)),
                };
                &a[iu] * &b[iv] - &b[iv] * &a[iu]
            })
            .collect()
    }

    /// `[u, v] - rhs` per relation.
    pub fn residual_blocks(&self, vectors: &[Matrix], coords: &[C64]) -> Vec<Matrix> {
        self.bilinear(vectors, vectors)
            .into_iter()
            .zip(self.rhs(coords))
            .map(|(l, r)| l - r)
            .collect()
    }
}

/// Max-norm residuals of every relation instance plus group-level checks.
#[derive(Clone, Debug)]
pub struct WreathResiduals {
    pub relations: Vec<(RelationKind, f64)>,
    /// `g u g^-1 - g.u` over generators `g` and basis vectors `u`.
    pub equivariance: f64,
    /// Failure of the wreath product presentation on the group matrices.
    pub group: f64,
    pub commutant_dim: usize,
}

impl WreathResiduals {
    pub fn r1(&self) -> Vec<f64> {
        self.relations
            .iter()
            .filter(|(k, _)| matches!(k, RelationKind::R1 { .. }))
            .map(|(_, r)| *r)
            .collect()
    }

    pub fn r2_max(&self) -> f64 {
        self.relations
            .iter()
            .filter(|(k, _)| matches!(k, RelationKind::R2 { .. }))
            .map(|(_, r)| *r)
            .fold(0.0, f64::max)
    }

    pub fn relations_max(&self) -> f64 {
        self.relations.iter().map(|(_, r)| *r).fold(0.0, f64::max)
    }

    pub fn max(&self) -> f64 {
        self.relations_max().max(self.equivariance).max(self.group)
    }
}

/// Equivariance defect of a vector tuple under the group generators.
pub fn equivariance_residual(rep: &WreathRep, vectors: &[Matrix]) -> f64 {
    let n = rep.n;
    let mut worst: f64 = 0.0;
    for (e, rho) in rep.group_gens() {
        let a = e.action_on_v(rep.gamma());
        for u in 0..2 * n {
            let mut image = zeros(rep.dim_m, rep.dim_m);
            for v in 0..2 * n {
                if a[(v, u)] != c64(0.0, 0.0) {
                    image += &vectors[v] * a[(v, u)];
                }
            }
            worst = worst.max(max_norm(&(&rho * &vectors[u] - image * &rho)));
        }
    }
    worst
}

/// Defect of the group matrices with respect to the defining relations of
/// the wreath product.
pub fn group_presentation_residual(rep: &WreathRep) -> f64 {
    let d = rep.dim_m;
    let id = identity(d);
    let s = &rep.transpositions;
    let mut worst: f64 = 0.0;
    let mut check = |m: Matrix| worst = worst.max(max_norm(&m));
    for i in 0..s.len() {
        check(&s[i] * &s[i] - &id);
        for j in (i + 1)..s.len() {
            if j == i + 1 {
                let st = &s[i] * &s[j];
                check(&st * &st * &st - &id);
            } else {
                check(commutator(&s[i], &s[j]));
            }
        }
    }
    let group = rep.gamma();
    let g0 = &rep.factor_gamma[0];
    check(&g0[0] - &id);
    for a in 0..group.order() {
        for b in 0..group.order() {
            check(&g0[a] * &g0[b] - &g0[group.mul(a, b)]);
        }
    }
    for &g in &group.generators {
        for si in s.iter().skip(1) {
            check(commutator(si, &g0[g]));
        }
        if let Some(s0) = s.first() {
            for &h in &group.generators {
                let moved = s0 * &g0[h] * s0;
                check(commutator(&g0[g], &moved));
            }
        }
    }
    worst
}

/// Residuals of every relation at the parameter point `p`.
pub fn wreath_residuals(rep: &WreathRep, p: &ParamPoint) -> WreathResiduals {
    let system = RelationSystem::new(rep);
    let vectors = rep.vector_matrices();
    let blocks = system.residual_blocks(&vectors, &p.coords(rep.gamma()));
    WreathResiduals {
        relations: system.kinds.iter().copied().zip(blocks.iter().map(max_norm)).collect(),
        equivariance: equivariance_residual(rep, &vectors),
        group: group_presentation_residual(rep),
        commutant_dim: rep.commutant_dim(),
    }
}

/// `dim End_{Gamma_N}(M) = |Gamma_N|^-1 sum_g |tr_M(g)|^2`.
pub fn end_dim(rep: &WreathRep) -> Result<usize, WreathError> {
    let group = rep.gamma();
    let n = rep.n;
    let order = group_order(n, group);
    if order > MAX_GROUP_ORDER {
        return Err(WreathError::GroupTooLarge(order));
    }
    let perms: Vec<Matrix> = Perm::all(n).iter().map(|p| rep.perm_matrix(p)).collect();
    let tuples: Vec<Vec<usize>> = if n == 0 {
        vec![Vec::new()]
    } else {
        (0..n).map(|_| 0..group.order()).multi_cartesian_product().collect()
    };
    let dim_w = rep.dim_w();
    let mut total = 0.0;
    for t in &tuples {
        let diag = t
            .iter()
            .fold(identity(dim_w), |acc, &g| kron(&acc, &rep.y.group_action[g]));
        for p in &perms {
            // tr(P D) without forming the product
            let tr: C64 = p.iter().zip(diag.transpose().iter()).map(|(a, b)| a * b).sum();
            total += tr.norm_sqr();
        }
    }
    let value = total / order as f64;
    let rounded = value.round();
    if (value - rounded).abs() > 1e-6 {
        return Err(WreathError::NonIntegerEndDim(value));
    }
    Ok(rounded as usize)
}
