//! Exact arithmetic in the imaginary quadratic field F = Q(√d): field
//! elements in the (1, ω)-basis of the ring of integers, the unit group,
//! integral ideals in Hermite normal form, and the class number.
//!
//! Elements are stored in ω-coordinates because the ring structure is
//! simplest there; √d-coordinates are computed on demand for the formulas
//! that want them. All arithmetic is exact rational.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{rat_int, Rat};

/// The field F = Q(√d) together with its ring of integers O = Z[ω].
///
/// ω = (1+√d)/2 when d ≡ 1 (mod 4), otherwise ω = √d. Cheap to copy;
/// every `AlgebraicNum` carries one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldContext {
    d: i64,
    discriminant: i64,
    omega_half: bool,
}

/// Validates d and builds the field context (rejects non-negative or
/// non-square-free d).
pub fn make_context(d: i64) -> Result<FieldContext> {
    FieldContext::new(d)
}

impl FieldContext {
    pub fn new(d: i64) -> Result<Self> {
        if d >= 0 {
            return Err(Error::NotNegative(d));
        }
        if !is_square_free(-d) {
            return Err(Error::NotSquareFree(d));
        }
        let omega_half = d.rem_euclid(4) == 1;
        let discriminant = if omega_half { d } else { 4 * d };
        Ok(FieldContext {
            d,
            discriminant,
            omega_half,
        })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    /// True iff ω = (1+√d)/2 (the d ≡ 1 mod 4 case).
    pub fn omega_is_half(&self) -> bool {
        self.omega_half
    }

    /// trace(ω): 1 when ω = (1+√d)/2, else 0.
    pub fn omega_trace(&self) -> i64 {
        if self.omega_half {
            1
        } else {
            0
        }
    }

    /// norm(ω) = ω·ω̄: (1−d)/4 when ω = (1+√d)/2, else −d.
    pub fn omega_norm(&self) -> i64 {
        if self.omega_half {
            (1 - self.d) / 4
        } else {
            -self.d
        }
    }

    pub fn zero(&self) -> AlgebraicNum {
        AlgebraicNum::from_int_coords(*self, 0, 0)
    }

    pub fn one(&self) -> AlgebraicNum {
        AlgebraicNum::from_int_coords(*self, 1, 0)
    }

    pub fn omega(&self) -> AlgebraicNum {
        AlgebraicNum::from_int_coords(*self, 0, 1)
    }

    /// The unit group of O: order 4 for d = −1, order 6 for d = −3,
    /// order 2 otherwise.
    pub fn units(&self) -> Vec<AlgebraicNum> {
        let o = |x: i64, y: i64| AlgebraicNum::from_int_coords(*self, x, y);
        match self.d {
            -1 => vec![o(1, 0), o(-1, 0), o(0, 1), o(0, -1)],
            -3 => vec![o(1, 0), o(-1, 0), o(0, 1), o(0, -1), o(-1, 1), o(1, -1)],
            _ => vec![o(1, 0), o(-1, 0)],
        }
    }

    /// Class number h_F, computed by counting reduced primitive binary
    /// quadratic forms (a, b, c) of the field discriminant: b² − 4ac = disc,
    /// |b| ≤ a ≤ c, gcd(a, b, c) = 1, and b ≥ 0 whenever |b| = a or a = c.
    pub fn class_number(&self) -> u64 {
        let disc = self.discriminant;
        let mut count = 0u64;
        let mut a = 1i64;
        while 3 * a * a <= -disc {
            for b in -a..=a {
                if (b - disc).rem_euclid(2) != 0 {
                    continue;
                }
                let num = b * b - disc;
                if num % (4 * a) != 0 {
                    continue;
                }
                let c = num / (4 * a);
                if c < a {
                    continue;
                }
                if (b.abs() == a || a == c) && b < 0 {
                    continue;
                }
                if gcd3(a, b, c) != 1 {
                    continue;
                }
                count += 1;
            }
            a += 1;
        }
        count
    }
}

fn is_square_free(n: i64) -> bool {
    debug_assert!(n > 0);
    let mut n = n;
    let mut p = 2i64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    a.abs().gcd(&b.abs()).gcd(&c.abs())
}

/// An element x + y·ω of F = Q(√d), with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraicNum {
    x: Rat,
    y: Rat,
    ctx: FieldContext,
}

impl AlgebraicNum {
    pub fn new(ctx: FieldContext, x: Rat, y: Rat) -> Self {
        AlgebraicNum { x, y, ctx }
    }

    pub fn from_int_coords(ctx: FieldContext, x: i64, y: i64) -> Self {
        AlgebraicNum::new(ctx, rat_int(x), rat_int(y))
    }

    pub fn from_rational(ctx: FieldContext, x: Rat) -> Self {
        AlgebraicNum::new(ctx, x, Rat::zero())
    }

    pub fn context(&self) -> FieldContext {
        self.ctx
    }

    /// Coordinate of 1 in the ω-basis.
    pub fn x(&self) -> &Rat {
        &self.x
    }

    /// Coordinate of ω in the ω-basis.
    pub fn y(&self) -> &Rat {
        &self.y
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// True iff the element lies in O, i.e. both ω-coordinates are integers.
    pub fn is_integral(&self) -> bool {
        self.x.denom().is_one() && self.y.denom().is_one()
    }

    /// √d-coordinates (z₁, z₂) with z = z₁ + z₂√d.
    pub fn sqrt_d_coords(&self) -> (Rat, Rat) {
        if self.ctx.omega_half {
            let half = BigRational::new(BigInt::one(), BigInt::from(2));
            (&self.x + &self.y * &half, &self.y * &half)
        } else {
            (self.x.clone(), self.y.clone())
        }
    }

    /// Inverse of `sqrt_d_coords`.
    pub fn from_sqrt_d_coords(ctx: FieldContext, z1: Rat, z2: Rat) -> Self {
        if ctx.omega_half {
            let y = &z2 * rat_int(2);
            let x = z1 - z2;
            AlgebraicNum::new(ctx, x, y)
        } else {
            AlgebraicNum::new(ctx, z1, z2)
        }
    }

    /// Complex conjugate (the nontrivial Galois automorphism of F).
    pub fn conj(&self) -> Self {
        // conj(x + yω) = (x + tr(ω)·y) − yω.
        let t = rat_int(self.ctx.omega_trace());
        AlgebraicNum::new(self.ctx, &self.x + &self.y * t, -self.y.clone())
    }

    /// norm(z) = z·z̄ = z₁² − d·z₂², a non-negative rational.
    pub fn norm(&self) -> Rat {
        let (z1, z2) = self.sqrt_d_coords();
        &z1 * &z1 - &z2 * &z2 * rat_int(self.ctx.d)
    }

    /// trace(z) = z + z̄ = 2z₁.
    pub fn trace(&self) -> Rat {
        let (z1, _) = self.sqrt_d_coords();
        z1 * rat_int(2)
    }

    pub fn mul_rat(&self, s: &Rat) -> Self {
        AlgebraicNum::new(self.ctx, &self.x * s, &self.y * s)
    }

    /// Multiplicative inverse in F; `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(self.conj().mul_rat(&n.recip()))
    }

    pub fn is_one(&self) -> bool {
        self.x.is_one() && self.y.is_zero()
    }

    /// True iff the element is a unit of O.
    pub fn is_unit(&self) -> bool {
        self.is_integral() && self.norm().is_one()
    }

    /// Lexicographic comparison on (x, y); used for deterministic ordering.
    pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.x.cmp(&other.x).then_with(|| self.y.cmp(&other.y))
    }
}

impl std::ops::Add for &AlgebraicNum {
    type Output = AlgebraicNum;
    fn add(self, rhs: &AlgebraicNum) -> AlgebraicNum {
        debug_assert_eq!(self.ctx, rhs.ctx);
        AlgebraicNum::new(self.ctx, &self.x + &rhs.x, &self.y + &rhs.y)
    }
}

impl std::ops::Sub for &AlgebraicNum {
    type Output = AlgebraicNum;
    fn sub(self, rhs: &AlgebraicNum) -> AlgebraicNum {
        debug_assert_eq!(self.ctx, rhs.ctx);
        AlgebraicNum::new(self.ctx, &self.x - &rhs.x, &self.y - &rhs.y)
    }
}

impl std::ops::Neg for &AlgebraicNum {
    type Output = AlgebraicNum;
    fn neg(self) -> AlgebraicNum {
        AlgebraicNum::new(self.ctx, -self.x.clone(), -self.y.clone())
    }
}

impl std::ops::Mul for &AlgebraicNum {
    type Output = AlgebraicNum;
    fn mul(self, rhs: &AlgebraicNum) -> AlgebraicNum {
        debug_assert_eq!(self.ctx, rhs.ctx);
        // ω² = d               when ω = √d,
        // ω² = ω + (d−1)/4     when ω = (1+√d)/2.
        let xx = &self.x * &rhs.x;
        let yy = &self.y * &rhs.y;
        let cross = &self.x * &rhs.y + &self.y * &rhs.x;
        if self.ctx.omega_half {
            let k = rat_int((self.ctx.d - 1) / 4);
            AlgebraicNum::new(self.ctx, xx + &yy * k, cross + yy)
        } else {
            AlgebraicNum::new(self.ctx, xx + &yy * rat_int(self.ctx.d), cross)
        }
    }
}

impl fmt::Display for AlgebraicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            return write!(f, "{}", self.x);
        }
        let omega = if self.y.is_one() {
            "w".to_string()
        } else if (-self.y.clone()).is_one() {
            "-w".to_string()
        } else {
            format!("{}w", self.y)
        };
        if self.x.is_zero() {
            write!(f, "{omega}")
        } else if self.y.is_negative() {
            write!(f, "{}{}", self.x, omega)
        } else {
            write!(f, "{}+{}", self.x, omega)
        }
    }
}

/// A nonzero integral ideal of O, stored as the unique Hermite-form Z-basis
/// {(a, 0), (b, c)} in (1, ω)-coordinates, with a, c > 0 and 0 ≤ b < a.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralIdeal {
    ctx: FieldContext,
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl IntegralIdeal {
    /// The O-ideal generated by the given integral elements.
    pub fn from_generators(ctx: FieldContext, gens: &[AlgebraicNum]) -> Result<Self> {
        let mut rows: Vec<(BigInt, BigInt)> = Vec::new();
        let omega = ctx.omega();
        for g in gens {
            assert!(g.is_integral(), "ideal generators must lie in O");
            if g.is_zero() {
                continue;
            }
            let go = g * &omega;
            rows.push((g.x().to_integer(), g.y().to_integer()));
            rows.push((go.x().to_integer(), go.y().to_integer()));
        }
        Self::from_lattice_rows(ctx, rows)
    }

    /// HNF basis of the Z-lattice spanned by the given rows. The rows must
    /// span an O-ideal (full rank and ω-closed); closure is debug-checked.
    fn from_lattice_rows(ctx: FieldContext, mut rows: Vec<(BigInt, BigInt)>) -> Result<Self> {
        rows.retain(|(x, y)| !x.is_zero() || !y.is_zero());
        if rows.is_empty() {
            return Err(Error::ZeroIdeal);
        }
        // Reduce the ω-column to a single row (b, c) by extended gcds.
        let mut pivot: Option<(BigInt, BigInt)> = None;
        let mut pure: Vec<BigInt> = Vec::new();
        for (x, y) in rows {
            if y.is_zero() {
                pure.push(x);
                continue;
            }
            pivot = Some(match pivot {
                None => (x, y),
                Some((px, py)) => {
                    let e = py.extended_gcd(&y);
                    // g = s·py + t·y; the combined row has ω-coordinate g.
                    let combined = (&e.x * &px + &e.y * &x, e.gcd.clone());
                    // Both original rows reduce to pure-integer rows mod the
                    // combined one.
                    let k1 = &py / &e.gcd;
                    pure.push(px - &k1 * &combined.0);
                    let k2 = &y / &e.gcd;
                    pure.push(x - &k2 * &combined.0);
                    combined
                }
            });
        }
        let Some((bx, by)) = pivot else {
            // Rank-1 lattice inside Q ⊂ F: not an O-ideal.
            return Err(Error::ZeroIdeal);
        };
        let mut a = BigInt::zero();
        for x in pure {
            a = a.gcd(&x);
        }
        if a.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        let c = by.abs();
        let bx = if by.is_negative() { -bx } else { bx };
        let b = bx.mod_floor(&a);
        let ideal = IntegralIdeal { ctx, a, b, c };
        debug_assert!(ideal.is_omega_closed(), "lattice is not an ideal");
        Ok(ideal)
    }

    fn is_omega_closed(&self) -> bool {
        let omega = self.ctx.omega();
        for g in [self.basis_0(), self.basis_1()] {
            let go = &g * &omega;
            if !self.contains(&go) {
                return false;
            }
        }
        true
    }

    /// First Hermite basis element, the rational integer a.
    pub fn basis_0(&self) -> AlgebraicNum {
        AlgebraicNum::new(self.ctx, Rat::from_integer(self.a.clone()), Rat::zero())
    }

    /// Second Hermite basis element, b + cω.
    pub fn basis_1(&self) -> AlgebraicNum {
        AlgebraicNum::new(
            self.ctx,
            Rat::from_integer(self.b.clone()),
            Rat::from_integer(self.c.clone()),
        )
    }

    /// Ideal norm = index [O : I] = determinant of the Hermite basis.
    pub fn norm(&self) -> BigInt {
        &self.a * &self.c
    }

    pub fn contains(&self, z: &AlgebraicNum) -> bool {
        if !z.is_integral() {
            return false;
        }
        let x = z.x().to_integer();
        let y = z.y().to_integer();
        if !(&y % &self.c).is_zero() {
            return false;
        }
        let k = &y / &self.c;
        let rem = x - &k * &self.b;
        (&rem % &self.a).is_zero()
    }

    pub fn conj(&self) -> Self {
        let gens = [self.basis_0().conj(), self.basis_1().conj()];
        IntegralIdeal::from_generators(self.ctx, &gens).expect("conjugate of nonzero ideal")
    }

    /// Product ideal I·J.
    pub fn product(&self, other: &Self) -> Self {
        debug_assert_eq!(self.ctx, other.ctx);
        let mut rows = Vec::with_capacity(4);
        for g in [self.basis_0(), self.basis_1()] {
            for h in [other.basis_0(), other.basis_1()] {
                let p = &g * &h;
                rows.push((p.x().to_integer(), p.y().to_integer()));
            }
        }
        IntegralIdeal::from_lattice_rows(self.ctx, rows).expect("product of nonzero ideals")
    }

    /// True iff I = (α) for some α ∈ O, decided by searching the rank-2
    /// norm form of I for a vector of norm exactly norm(I). Every nonzero
    /// α ∈ I has norm(I) | norm(α), so the minimum is norm(I) iff I is
    /// principal.
    pub fn is_principal(&self) -> bool {
        self.principal_generator().is_some()
    }

    /// A generator when the ideal is principal.
    pub fn principal_generator(&self) -> Option<AlgebraicNum> {
        let g0 = self.basis_0();
        let g1 = self.basis_1();
        let pairing = |u: &AlgebraicNum, w: &AlgebraicNum| -> Rat {
            // Polarization of the norm form: z1-part of u·conj(w).
            let (z1, _) = (u * &w.conj()).sqrt_d_coords();
            z1
        };
        let gram = vec![
            vec![g0.norm(), pairing(&g0, &g1)],
            vec![pairing(&g0, &g1), g1.norm()],
        ];
        let bound = Rat::from_integer(self.norm());
        let hits = crate::enumerate::short_vectors_on_gram(&gram, &bound)
            .expect("ideal norm form is positive definite");
        for (coords, value) in hits {
            if value == bound {
                let m = Rat::from_integer(coords[0].clone());
                let n = Rat::from_integer(coords[1].clone());
                return Some(&g0.mul_rat(&m) + &g1.mul_rat(&n));
            }
        }
        None
    }

    /// True iff I and J lie in the same ideal class, i.e. I·conj(J) is
    /// principal (conj(J) inverts the class of J).
    pub fn same_class(&self, other: &Self) -> bool {
        self.product(&other.conj()).is_principal()
    }
}

impl fmt::Display for IntegralIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.basis_0(), self.basis_1())
    }
}
