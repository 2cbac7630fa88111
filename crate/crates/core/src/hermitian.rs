//! Binary Hermitian forms over F, the rational form space, the trace
//! pairing, rank-one points of lattice vectors, and the restriction of
//! scalars to a quadratic form on Z⁴.
//!
//! Conventions, fixed once for the whole crate:
//!   evaluate(φ, (p, r)) = a·norm(p) + trace(b·p·conj(r)) + c·norm(r),
//!   trace_pairing(φ, ψ)  = a_φ·a_ψ + c_φ·c_ψ + trace(b_φ·conj(b_ψ)),
//!   rank_one((p, r))     = (norm(p), conj(p)·r, norm(r)),
//! which make trace_pairing(φ, rank_one(v)) = evaluate(φ, v) an exact
//! identity. The b-entry of rank_one is conj(p)·r rather than p·conj(r);
//! the two choices are mirror conventions and this one is the unique one
//! compatible with the evaluation formula above.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{rat_int, Rat};
use crate::qfield::{AlgebraicNum, FieldContext};

/// A binary Hermitian form φ(x, y) = a·x·x̄ + b·x·ȳ + b̄·x̄·y + c·y·ȳ
/// with a, c rational and b ∈ F. Not required to be positive definite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermitianForm {
    a: Rat,
    b: AlgebraicNum,
    c: Rat,
}

impl HermitianForm {
    pub fn new(a: Rat, b: AlgebraicNum, c: Rat) -> Self {
        HermitianForm { a, b, c }
    }

    pub fn identity(ctx: FieldContext) -> Self {
        HermitianForm::new(Rat::one(), ctx.zero(), Rat::one())
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &AlgebraicNum {
        &self.b
    }

    pub fn c(&self) -> &Rat {
        &self.c
    }

    pub fn context(&self) -> FieldContext {
        self.b.context()
    }

    /// φ(v) for v = (p, r) ∈ F².
    pub fn evaluate(&self, v: &ColumnVector) -> Rat {
        let cross = &(&self.b * v.p()) * &v.r().conj();
        &self.a * v.p().norm() + cross.trace() + &self.c * v.r().norm()
    }

    /// The sesquilinear form h(v, w) with h(v, v) = φ(v); F-linear in the
    /// first argument, conjugate-linear in the second.
    pub fn hermitian_product(&self, v: &ColumnVector, w: &ColumnVector) -> AlgebraicNum {
        let ctx = self.context();
        let a = AlgebraicNum::from_rational(ctx, self.a.clone());
        let c = AlgebraicNum::from_rational(ctx, self.c.clone());
        let t1 = &(&a * v.p()) * &w.p().conj();
        let t2 = &(&self.b * v.p()) * &w.r().conj();
        let t3 = &(&self.b.conj() * v.r()) * &w.p().conj();
        let t4 = &(&c * v.r()) * &w.r().conj();
        &(&t1 + &t2) + &(&t3 + &t4)
    }

    /// Leading-minor positive definiteness test: a > 0 and a·c − norm(b) > 0.
    pub fn is_positive_definite(&self) -> bool {
        self.a.is_positive() && self.determinant().is_positive()
    }

    /// det A_φ = a·c − norm(b).
    pub fn determinant(&self) -> Rat {
        &self.a * &self.c - self.b.norm()
    }

    /// Coordinates (a, b₁, b₂, c) in the form space, b in the √d-basis.
    pub fn to_space_vector(&self) -> FormSpaceVector {
        let (b1, b2) = self.b.sqrt_d_coords();
        FormSpaceVector::new(self.context(), self.a.clone(), b1, b2, self.c.clone())
    }

    pub fn from_space_vector(v: &FormSpaceVector) -> Self {
        let b = AlgebraicNum::from_sqrt_d_coords(v.ctx, v.b1.clone(), v.b2.clone());
        HermitianForm::new(v.a.clone(), b, v.c.clone())
    }

    pub fn scale(&self, s: &Rat) -> Self {
        HermitianForm::new(&self.a * s, self.b.mul_rat(s), &self.c * s)
    }

    pub fn add(&self, other: &Self) -> Self {
        HermitianForm::new(&self.a + &other.a, &self.b + &other.b, &self.c + &other.c)
    }

    /// Gram matrix of φ as a quadratic form on Z⁴ with respect to the
    /// ordered basis ((1,0), (ω,0), (0,1), (0,ω)) of O².
    pub fn gram_z4(&self) -> Vec<Vec<Rat>> {
        let ctx = self.context();
        let t_omega = rat_int(ctx.omega_trace());
        let n_omega = rat_int(ctx.omega_norm());
        let half = Rat::new(1.into(), 2.into());
        let (b1, _) = self.b.sqrt_d_coords();
        // z₁-parts of b·ω̄ and b·ω.
        let z1 = |z: &AlgebraicNum| z.sqrt_d_coords().0;
        let b_wbar = z1(&(&self.b * &ctx.omega().conj()));
        let b_w = z1(&(&self.b * &ctx.omega()));

        let g12 = &self.a * &t_omega * &half;
        let g34 = &self.c * &t_omega * &half;
        vec![
            vec![self.a.clone(), g12.clone(), b1.clone(), b_wbar.clone()],
            vec![g12, &self.a * &n_omega, b_w.clone(), &b1 * &n_omega],
            vec![b1.clone(), b_w, self.c.clone(), g34.clone()],
            vec![b_wbar, &b1 * &n_omega, g34, &self.c * &n_omega],
        ]
    }
}

impl fmt::Display for HermitianForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[a={}, b={}, c={}]", self.a, self.b, self.c)
    }
}

/// A point (a, b₁, b₂, c) of the 4-dimensional rational form space; may be
/// indefinite. Facet normals live here and act on forms through the trace
/// pairing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormSpaceVector {
    ctx: FieldContext,
    a: Rat,
    b1: Rat,
    b2: Rat,
    c: Rat,
}

impl FormSpaceVector {
    pub fn new(ctx: FieldContext, a: Rat, b1: Rat, b2: Rat, c: Rat) -> Self {
        FormSpaceVector { ctx, a, b1, b2, c }
    }

    pub fn context(&self) -> FieldContext {
        self.ctx
    }

    pub fn coords(&self) -> [&Rat; 4] {
        [&self.a, &self.b1, &self.b2, &self.c]
    }

    pub fn coords_vec(&self) -> Vec<Rat> {
        vec![
            self.a.clone(),
            self.b1.clone(),
            self.b2.clone(),
            self.c.clone(),
        ]
    }

    pub fn from_coords(ctx: FieldContext, coords: &[Rat]) -> Self {
        assert_eq!(coords.len(), 4);
        FormSpaceVector::new(
            ctx,
            coords[0].clone(),
            coords[1].clone(),
            coords[2].clone(),
            coords[3].clone(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b1.is_zero() && self.b2.is_zero() && self.c.is_zero()
    }

    /// Coefficients of the linear functional x ↦ trace_pairing(x, self) in
    /// the coordinates (a, b₁, b₂, c): (a_ψ, 2b₁_ψ, −2d·b₂_ψ, c_ψ).
    pub fn pairing_row(&self) -> Vec<Rat> {
        let d = rat_int(self.ctx.d());
        vec![
            self.a.clone(),
            &self.b1 * rat_int(2),
            -(&self.b2 * rat_int(2) * d),
            self.c.clone(),
        ]
    }
}

/// trace_pairing(φ, ψ) = a_φ·a_ψ + c_φ·c_ψ + trace(b_φ·conj(b_ψ)); the
/// nondegenerate bilinear pairing identifying form space with its dual.
pub fn trace_pairing(phi: &HermitianForm, psi: &FormSpaceVector) -> Rat {
    let v = phi.to_space_vector();
    pairing_coords(&v, psi)
}

/// The same pairing on raw coordinates.
pub fn pairing_coords(x: &FormSpaceVector, y: &FormSpaceVector) -> Rat {
    debug_assert_eq!(x.ctx, y.ctx);
    let d = rat_int(x.ctx.d());
    &x.a * &y.a + &x.c * &y.c + rat_int(2) * (&x.b1 * &y.b1 - &(&x.b2 * &y.b2) * &d)
}

/// A column vector (p, r) ∈ O².
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColumnVector {
    p: AlgebraicNum,
    r: AlgebraicNum,
}

impl ColumnVector {
    pub fn new(p: AlgebraicNum, r: AlgebraicNum) -> Self {
        debug_assert_eq!(p.context(), r.context());
        ColumnVector { p, r }
    }

    pub fn from_int_coords(ctx: FieldContext, coords: [i64; 4]) -> Self {
        ColumnVector::new(
            AlgebraicNum::from_int_coords(ctx, coords[0], coords[1]),
            AlgebraicNum::from_int_coords(ctx, coords[2], coords[3]),
        )
    }

    pub fn p(&self) -> &AlgebraicNum {
        &self.p
    }

    pub fn r(&self) -> &AlgebraicNum {
        &self.r
    }

    pub fn context(&self) -> FieldContext {
        self.p.context()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.r.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.p.is_integral() && self.r.is_integral()
    }

    pub fn scale(&self, s: &AlgebraicNum) -> Self {
        ColumnVector::new(s * &self.p, s * &self.r)
    }

    pub fn neg(&self) -> Self {
        ColumnVector::new(-&self.p, -&self.r)
    }

    /// ω-basis coordinates (x₁, x₂, x₃, x₄) with p = x₁ + x₂ω, r = x₃ + x₄ω.
    pub fn z_coords(&self) -> [Rat; 4] {
        [
            self.p.x().clone(),
            self.p.y().clone(),
            self.r.x().clone(),
            self.r.y().clone(),
        ]
    }

    /// Deterministic lexicographic order on ω-coordinates.
    pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.z_coords()
            .iter()
            .zip(other.z_coords().iter())
            .map(|(a, b)| a.cmp(b))
            .find(|o| *o != std::cmp::Ordering::Equal)
            .unwrap_or(std::cmp::Ordering::Equal)
    }
}

impl fmt::Display for ColumnVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.r)
    }
}

/// The rank-one point of v = (p, r) in form space: the Hermitian matrix
/// with entries (norm(p), conj(p)·r, norm(r)). Satisfies
/// trace_pairing(φ, rank_one(v)) = evaluate(φ, v) for every form φ, and is
/// invariant under scaling v by any unit of O.
pub fn rank_one(v: &ColumnVector) -> Result<FormSpaceVector> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let b = &v.p().conj() * v.r();
    let (b1, b2) = b.sqrt_d_coords();
    Ok(FormSpaceVector::new(
        v.context(),
        v.p().norm(),
        b1,
        b2,
        v.r().norm(),
    ))
}

/// A matrix in GL₂(O): integral entries and unit determinant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnimodularMatrix {
    entries: [[AlgebraicNum; 2]; 2],
}

impl UnimodularMatrix {
    pub fn new(entries: [[AlgebraicNum; 2]; 2]) -> Result<Self> {
        let m = UnimodularMatrix { entries };
        if !m.is_valid() {
            return Err(Error::NotUnimodular);
        }
        Ok(m)
    }

    fn is_valid(&self) -> bool {
        self.entries
            .iter()
            .all(|row| row.iter().all(|e| e.is_integral()))
            && self.determinant().is_unit()
    }

    pub fn identity(ctx: FieldContext) -> Self {
        UnimodularMatrix {
            entries: [[ctx.one(), ctx.zero()], [ctx.zero(), ctx.one()]],
        }
    }

    pub fn neg_identity(ctx: FieldContext) -> Self {
        UnimodularMatrix {
            entries: [[-&ctx.one(), ctx.zero()], [ctx.zero(), -&ctx.one()]],
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> &AlgebraicNum {
        &self.entries[i][j]
    }

    pub fn context(&self) -> FieldContext {
        self.entries[0][0].context()
    }

    pub fn determinant(&self) -> AlgebraicNum {
        &(&self.entries[0][0] * &self.entries[1][1]) - &(&self.entries[0][1] * &self.entries[1][0])
    }

    pub fn apply(&self, v: &ColumnVector) -> ColumnVector {
        ColumnVector::new(
            &(&self.entries[0][0] * v.p()) + &(&self.entries[0][1] * v.r()),
            &(&self.entries[1][0] * v.p()) + &(&self.entries[1][1] * v.r()),
        )
    }

    pub fn compose(&self, other: &Self) -> Self {
        let e = &self.entries;
        let f = &other.entries;
        let mul = |i: usize, j: usize| &(&e[i][0] * &f[0][j]) + &(&e[i][1] * &f[1][j]);
        UnimodularMatrix {
            entries: [[mul(0, 0), mul(0, 1)], [mul(1, 0), mul(1, 1)]],
        }
    }

    /// Inverse, again in GL₂(O).
    pub fn inverse(&self) -> Self {
        let det = self.determinant();
        let det_inv = det.inverse().expect("unit determinant");
        let e = &self.entries;
        UnimodularMatrix {
            entries: [
                [&e[1][1] * &det_inv, &(-&e[0][1]) * &det_inv],
                [&(-&e[1][0]) * &det_inv, &e[0][0] * &det_inv],
            ],
        }
    }

    pub fn is_identity(&self) -> bool {
        let e = &self.entries;
        e[0][0].is_one() && e[0][1].is_zero() && e[1][0].is_zero() && e[1][1].is_one()
    }
}

impl fmt::Display for UnimodularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.entries[0][0], self.entries[0][1], self.entries[1][0], self.entries[1][1]
        )
    }
}

/// φ∘γ: the form with evaluate(pull_back(γ, φ), v) = evaluate(φ, γ·v) for
/// every v, computed through the sesquilinear product on the images of the
/// standard basis.
pub fn pull_back(gamma: &UnimodularMatrix, phi: &HermitianForm) -> HermitianForm {
    let ctx = phi.context();
    let e1 = ColumnVector::new(ctx.one(), ctx.zero());
    let e2 = ColumnVector::new(ctx.zero(), ctx.one());
    let g1 = gamma.apply(&e1);
    let g2 = gamma.apply(&e2);
    let a = phi.evaluate(&g1);
    let c = phi.evaluate(&g2);
    let b = phi.hermitian_product(&g1, &g2);
    debug_assert!(b.conj() == phi.hermitian_product(&g2, &g1));
    HermitianForm::new(a, b, c)
}
