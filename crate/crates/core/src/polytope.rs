//! Descent from a perfect-form cone to its ideal polytope: cusp vertices,
//! the face lattice with F-vector, and classification of the combinatorial
//! type by a canonical incidence key.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::canon::canonical_key;
use crate::error::{Error, Result};
use crate::hermitian::ColumnVector;
use crate::linalg::Rat;
use crate::qfield::{AlgebraicNum, FieldContext, IntegralIdeal};
use crate::voronoi::{PerfectForm, PerfectFormGraph};

/// A cusp of the field: a point of P¹(F) in canonical form (α : q) with
/// α ∈ O, q a non-negative rational integer, and the integer content of
/// (α, q) equal to 1. Infinity is (1 : 0); a finite cusp has q ≥ 1 and is
/// the number α/q.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cusp {
    numer: AlgebraicNum,
    denom: BigInt,
}

impl Cusp {
    pub fn infinity(ctx: FieldContext) -> Self {
        Cusp {
            numer: ctx.one(),
            denom: BigInt::zero(),
        }
    }

    pub fn is_infinity(&self) -> bool {
        self.denom.is_zero()
    }

    pub fn numer(&self) -> &AlgebraicNum {
        &self.numer
    }

    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    /// The ideal ⟨α, q⟩; its ideal class is the GL₂(O)-orbit invariant of
    /// the cusp.
    pub fn ideal(&self) -> Result<IntegralIdeal> {
        let ctx = self.numer.context();
        let q = AlgebraicNum::new(ctx, Rat::from_integer(self.denom.clone()), Rat::zero());
        IntegralIdeal::from_generators(ctx, &[self.numer.clone(), q])
    }

    /// Boundary coordinate in the upper half-space model: the complex
    /// number α/q for finite cusps, `None` for infinity. Display-only.
    pub fn complex_value(&self) -> Option<(f64, f64)> {
        use num_traits::ToPrimitive;
        if self.is_infinity() {
            return None;
        }
        let (z1, z2) = self.numer.sqrt_d_coords();
        let q = Rat::from_integer(self.denom.clone());
        let re = (&z1 / &q).to_f64()?;
        let d = self.numer.context().d() as f64;
        let im = (&z2 / &q).to_f64()? * (-d).sqrt();
        Some((re, im))
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            return write!(f, "inf");
        }
        if self.denom.is_one() {
            return write!(f, "{}", self.numer);
        }
        let needs_parens = !self.numer.x().is_zero() && !self.numer.y().is_zero();
        if needs_parens {
            write!(f, "({})/{}", self.numer, self.denom)
        } else {
            write!(f, "{}/{}", self.numer, self.denom)
        }
    }
}

/// The canonical cusp of a nonzero vector (p, r): the projective point
/// (p : r), written as (α : q) with q the least non-negative integer such
/// that q·(p/r) is integral. Invariant under F-scalar multiplication.
pub fn cusp_of(v: &ColumnVector) -> Result<Cusp> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let ctx = v.context();
    if v.r().is_zero() {
        return Ok(Cusp::infinity(ctx));
    }
    // p/r = p·conj(r)/norm(r) with integral numerator when p, r ∈ O; for
    // non-integral input clear denominators first.
    let mut p = v.p().clone();
    let mut r = v.r().clone();
    let clear = p
        .x()
        .denom()
        .lcm(p.y().denom())
        .lcm(r.x().denom())
        .lcm(r.y().denom());
    if !clear.is_one() {
        let s = Rat::from_integer(clear);
        p = p.mul_rat(&s);
        r = r.mul_rat(&s);
    }
    let y = &p * &r.conj();
    let n = r.norm().to_integer();
    debug_assert!(n.is_positive());
    let yx = y.x().to_integer();
    let yy = y.y().to_integer();
    let g = yx.gcd(&yy).gcd(&n);
    let alpha = AlgebraicNum::new(
        ctx,
        Rat::from_integer(&yx / &g),
        Rat::from_integer(&yy / &g),
    );
    Ok(Cusp {
        numer: alpha,
        denom: &n / &g,
    })
}

/// An ideal polytope: cusp vertices, facets and edges as vertex index
/// sets, and the F-vector [V, E, F].
#[derive(Debug, Clone)]
pub struct IdealPolytope {
    vertices: Vec<Cusp>,
    facets: Vec<Vec<usize>>,
    edges: Vec<[usize; 2]>,
}

impl IdealPolytope {
    pub fn vertices(&self) -> &[Cusp] {
        &self.vertices
    }

    /// Facets as sorted vertex index lists.
    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn f_vector(&self) -> [usize; 3] {
        [self.vertices.len(), self.edges.len(), self.facets.len()]
    }

    /// Vertex-facet incidence matrix (rows = vertices).
    pub fn vertex_facet_incidence(&self) -> Vec<Vec<bool>> {
        let mut m = vec![vec![false; self.facets.len()]; self.vertices.len()];
        for (f, facet) in self.facets.iter().enumerate() {
            for &v in facet {
                m[v][f] = true;
            }
        }
        m
    }

    fn incidence_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for (f, facet) in self.facets.iter().enumerate() {
            for &v in facet {
                pairs.push((v, f));
            }
        }
        pairs
    }

    /// Canonical key of the vertex-facet incidence bipartite graph.
    pub fn canonical_incidence_key(&self) -> String {
        canonical_key(
            self.vertices.len(),
            self.facets.len(),
            &self.incidence_pairs(),
        )
    }
}

/// Builds the ideal polytope of a perfect form: vertices are the cusps of
/// the cone generators, facets come from the cone facets, edges from
/// pairwise facet intersections.
pub fn build_polytope(pf: &PerfectForm) -> Result<IdealPolytope> {
    let cone_facets = pf.facets()?;
    let mut vertices = Vec::with_capacity(pf.generator_vectors().len());
    for v in pf.generator_vectors() {
        let cusp = cusp_of(v)?;
        assert!(
            !vertices.contains(&cusp),
            "distinct cone generators must give distinct cusps"
        );
        vertices.push(cusp);
    }
    let facets: Vec<Vec<usize>> = cone_facets
        .iter()
        .map(|f| {
            let mut s = f.generator_subset().to_vec();
            s.sort_unstable();
            s
        })
        .collect();

    let mut edges: Vec<[usize; 2]> = Vec::new();
    for i in 0..facets.len() {
        for j in (i + 1)..facets.len() {
            let common: Vec<usize> = facets[i]
                .iter()
                .filter(|v| facets[j].binary_search(v).is_ok())
                .copied()
                .collect();
            assert!(common.len() <= 2, "distinct facets share at most one edge");
            if common.len() == 2 {
                let e = [common[0], common[1]];
                if !edges.contains(&e) {
                    edges.push(e);
                }
            }
        }
    }
    edges.sort_unstable();

    let polytope = IdealPolytope {
        vertices,
        facets,
        edges,
    };
    validate_polytope(&polytope);
    Ok(polytope)
}

fn validate_polytope(p: &IdealPolytope) {
    let [v, e, f] = p.f_vector();
    assert_eq!(v as i64 - e as i64 + f as i64, 2, "Euler characteristic");
    for facet in p.facets() {
        assert!(facet.len() >= 3, "facet with fewer than 3 vertices");
    }
    let incidence = p.vertex_facet_incidence();
    for row in &incidence {
        assert!(
            row.iter().filter(|&&b| b).count() >= 3,
            "vertex on fewer than 3 facets"
        );
    }
    // Connectivity of the incidence graph.
    let n = v + f;
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(node) = stack.pop() {
        let neighbors: Vec<usize> = if node < v {
            (0..f)
                .filter(|&j| incidence[node][j])
                .map(|j| v + j)
                .collect()
        } else {
            (0..v).filter(|&i| incidence[i][node - v]).collect()
        };
        for u in neighbors {
            if !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    assert!(seen.iter().all(|&s| s), "incidence graph disconnected");
}

/// The eight combinatorial types observed in this range, plus a catch-all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PolytopeKind {
    Tetrahedron,
    Octahedron,
    Cuboctahedron,
    TriangularPrism,
    HexagonalCap,
    SquarePyramid,
    TruncatedTetrahedron,
    TriangularDipyramid,
    Other,
}

impl PolytopeKind {
    pub const NAMED: [PolytopeKind; 8] = [
        PolytopeKind::Tetrahedron,
        PolytopeKind::Octahedron,
        PolytopeKind::Cuboctahedron,
        PolytopeKind::TriangularPrism,
        PolytopeKind::HexagonalCap,
        PolytopeKind::SquarePyramid,
        PolytopeKind::TruncatedTetrahedron,
        PolytopeKind::TriangularDipyramid,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PolytopeKind::Tetrahedron => "tetrahedron",
            PolytopeKind::Octahedron => "octahedron",
            PolytopeKind::Cuboctahedron => "cuboctahedron",
            PolytopeKind::TriangularPrism => "triangular prism",
            PolytopeKind::HexagonalCap => "hexagonal cap",
            PolytopeKind::SquarePyramid => "square pyramid",
            PolytopeKind::TruncatedTetrahedron => "truncated tetrahedron",
            PolytopeKind::TriangularDipyramid => "triangular dipyramid",
            PolytopeKind::Other => "other",
        }
    }

    pub fn expected_f_vector(&self) -> Option<[usize; 3]> {
        match self {
            PolytopeKind::Tetrahedron => Some([4, 6, 4]),
            PolytopeKind::Octahedron => Some([6, 12, 8]),
            PolytopeKind::Cuboctahedron => Some([12, 24, 14]),
            PolytopeKind::TriangularPrism => Some([6, 9, 5]),
            PolytopeKind::HexagonalCap => Some([9, 15, 8]),
            PolytopeKind::SquarePyramid => Some([5, 8, 5]),
            PolytopeKind::TruncatedTetrahedron => Some([12, 18, 8]),
            PolytopeKind::TriangularDipyramid => Some([5, 9, 6]),
            PolytopeKind::Other => None,
        }
    }
}

/// Classification result: the matched kind (or `Other`), the display name,
/// the F-vector, and the canonical incidence key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinatorialType {
    pub kind: PolytopeKind,
    pub name: String,
    pub f_vector: [usize; 3],
    pub canonical_key: String,
}

/// Reference facet structures of the eight named types, built from their
/// standard combinatorial descriptions.
fn reference_facets(kind: PolytopeKind) -> (usize, Vec<Vec<usize>>) {
    match kind {
        PolytopeKind::Tetrahedron => (
            4,
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
        ),
        PolytopeKind::Octahedron => {
            // Antipodal vertex pairs (0,1), (2,3), (4,5); one triangle per
            // choice of a vertex from each pair.
            let mut facets = Vec::new();
            for a in [0, 1] {
                for b in [2, 3] {
                    for c in [4, 5] {
                        facets.push(vec![a, b, c]);
                    }
                }
            }
            (6, facets)
        }
        PolytopeKind::Cuboctahedron => {
            // Vertices: permutations of (±1, ±1, 0).
            let mut verts: Vec<[i8; 3]> = Vec::new();
            for zero_axis in 0..3usize {
                for s in [-1i8, 1] {
                    for t in [-1i8, 1] {
                        let mut v = [0i8; 3];
                        let mut others = (0..3).filter(|&a| a != zero_axis);
                        v[others.next().unwrap()] = s;
                        v[others.next().unwrap()] = t;
                        verts.push(v);
                    }
                }
            }
            let mut facets = Vec::new();
            // Six squares: v[axis] = s.
            for axis in 0..3usize {
                for s in [-1i8, 1] {
                    let f: Vec<usize> = (0..verts.len()).filter(|&i| verts[i][axis] == s).collect();
                    facets.push(f);
                }
            }
            // Eight triangles: one per sign octant.
            for s0 in [-1i8, 1] {
                for s1 in [-1i8, 1] {
                    for s2 in [-1i8, 1] {
                        let sign = [s0, s1, s2];
                        let f: Vec<usize> = (0..verts.len())
                            .filter(|&i| (0..3).all(|a| verts[i][a] == 0 || verts[i][a] == sign[a]))
                            .collect();
                        facets.push(f);
                    }
                }
            }
            (12, facets)
        }
        PolytopeKind::TriangularPrism => (
            6,
            vec![
                vec![0, 1, 2],
                vec![3, 4, 5],
                vec![0, 1, 4, 3],
                vec![1, 2, 5, 4],
                vec![2, 0, 3, 5],
            ],
        ),
        PolytopeKind::HexagonalCap => {
            // Captured from a computed [9,15,8] instance: a hexagon capped
            // by a triangle through three squares and three rim triangles
            // (cupola combinatorics). Hexagon 0..5 cyclic, cap 6, 7, 8 with
            // cap vertex 6+k over hexagon edge (2k, 2k+1).
            let mut facets = vec![vec![0, 1, 2, 3, 4, 5], vec![6, 7, 8]];
            for k in 0..3usize {
                let t = 6 + k;
                let t_next = 6 + (k + 1) % 3;
                facets.push(vec![t, t_next, (2 * k + 2) % 6, 2 * k + 1]);
                facets.push(vec![t, 2 * k, 2 * k + 1]);
            }
            (9, facets)
        }
        PolytopeKind::SquarePyramid => (
            5,
            vec![
                vec![1, 2, 3, 4],
                vec![0, 1, 2],
                vec![0, 2, 3],
                vec![0, 3, 4],
                vec![0, 4, 1],
            ],
        ),
        PolytopeKind::TruncatedTetrahedron => {
            // Vertices are ordered pairs (x, y), x ≠ y, of the four corners
            // of a tetrahedron: the pair (x, y) is the cut-corner vertex
            // near x on the edge xy.
            let mut idx = std::collections::HashMap::new();
            let mut verts = Vec::new();
            for x in 0..4usize {
                for y in 0..4usize {
                    if x != y {
                        idx.insert((x, y), verts.len());
                        verts.push((x, y));
                    }
                }
            }
            let mut facets = Vec::new();
            // Four triangles: the corner cuts.
            for x in 0..4usize {
                facets.push(
                    (0..4)
                        .filter(|&y| y != x)
                        .map(|y| idx[&(x, y)])
                        .collect::<Vec<_>>(),
                );
            }
            // Four hexagons: the truncated original faces.
            for omit in 0..4usize {
                let tri: Vec<usize> = (0..4).filter(|&x| x != omit).collect();
                let mut hex = Vec::new();
                for i in 0..3 {
                    for j in 0..3 {
                        if i != j {
                            hex.push(idx[&(tri[i], tri[j])]);
                        }
                    }
                }
                facets.push(hex);
            }
            (12, facets)
        }
        PolytopeKind::TriangularDipyramid => (
            5,
            vec![
                vec![3, 0, 1],
                vec![3, 1, 2],
                vec![3, 2, 0],
                vec![4, 0, 1],
                vec![4, 1, 2],
                vec![4, 2, 0],
            ],
        ),
        PolytopeKind::Other => unreachable!("no reference for the catch-all"),
    }
}

fn reference_key(kind: PolytopeKind) -> String {
    let (nv, facets) = reference_facets(kind);
    let mut pairs = Vec::new();
    for (f, facet) in facets.iter().enumerate() {
        for &v in facet {
            pairs.push((v, f));
        }
    }
    canonical_key(nv, facets.len(), &pairs)
}

fn reference_table() -> &'static Vec<(PolytopeKind, [usize; 3], String)> {
    static TABLE: OnceLock<Vec<(PolytopeKind, [usize; 3], String)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        PolytopeKind::NAMED
            .iter()
            .map(|&k| (k, k.expected_f_vector().expect("named"), reference_key(k)))
            .collect()
    })
}

/// Classifies a polytope against the eight named reference lattices by
/// canonical incidence key, with the F-vector as a pre-filter. Unmatched
/// lattices classify as `other(<key digest>)`.
pub fn classify(p: &IdealPolytope) -> CombinatorialType {
    let f_vector = p.f_vector();
    let key = p.canonical_incidence_key();
    for (kind, fv, ref_key) in reference_table() {
        if *fv == f_vector && *ref_key == key {
            return CombinatorialType {
                kind: *kind,
                name: kind.name().to_string(),
                f_vector,
                canonical_key: key,
            };
        }
    }
    let digest = {
        use sha2::{Digest, Sha256};
        let mut hasher = Sha256::new();
        hasher.update(key.as_bytes());
        let out = hasher.finalize();
        out.iter()
            .take(6)
            .map(|b| format!("{b:02x}"))
            .collect::<String>()
    };
    CombinatorialType {
        kind: PolytopeKind::Other,
        name: format!("other({digest})"),
        f_vector,
        canonical_key: key,
    }
}

/// Number of GL₂(O)-orbits among all polytope vertices of the class graph,
/// decided through the ideal classes of the cusp ideals ⟨α, q⟩.
pub fn cusp_orbit_count(graph: &PerfectFormGraph) -> Result<u64> {
    let mut cusps: Vec<Cusp> = Vec::new();
    for pf in graph.classes() {
        for v in pf.generator_vectors() {
            let c = cusp_of(v)?;
            if !cusps.contains(&c) {
                cusps.push(c);
            }
        }
    }
    let mut representatives: Vec<IntegralIdeal> = Vec::new();
    for c in &cusps {
        let ideal = c.ideal()?;
        if !representatives.iter().any(|r| r.same_class(&ideal)) {
            representatives.push(ideal);
        }
    }
    Ok(representatives.len() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::make_context;
    use crate::voronoi::enumerate_classes;

    fn ctx(d: i64) -> FieldContext {
        make_context(d).unwrap()
    }

    #[test]
    fn cusp_canonicalization() {
        let c = ctx(-14);
        let inf = cusp_of(&ColumnVector::from_int_coords(c, [1, 0, 0, 0])).unwrap();
        assert!(inf.is_infinity());
        assert_eq!(inf.to_string(), "inf");

        let one = cusp_of(&ColumnVector::from_int_coords(c, [2, 0, 2, 0])).unwrap();
        let also_one = cusp_of(&ColumnVector::from_int_coords(c, [1, 0, 1, 0])).unwrap();
        assert_eq!(one, also_one);
        assert_eq!(one.to_string(), "1");

        let zero = cusp_of(&ColumnVector::from_int_coords(c, [0, 0, 1, 0])).unwrap();
        assert_eq!(zero.to_string(), "0");

        assert!(cusp_of(&ColumnVector::from_int_coords(c, [0, 0, 0, 0])).is_err());
    }

    #[test]
    fn cusp_respects_field_scaling_across_ideal_classes() {
        // d = −5: (2 : 1+ω) and (1−ω : 3) are the same point of P¹(F).
        let c = ctx(-5);
        let a = cusp_of(&ColumnVector::from_int_coords(c, [2, 0, 1, 1])).unwrap();
        let b = cusp_of(&ColumnVector::from_int_coords(c, [1, -1, 3, 0])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cusp_of_scaled_vector_is_stable() {
        let c = ctx(-7);
        let v = ColumnVector::from_int_coords(c, [3, 1, 2, -1]);
        let base = cusp_of(&v).unwrap();
        for s in [
            AlgebraicNum::from_int_coords(c, 2, 0),
            AlgebraicNum::from_int_coords(c, 1, 1),
            AlgebraicNum::from_int_coords(c, -3, 2),
        ] {
            assert_eq!(cusp_of(&v.scale(&s)).unwrap(), base);
        }
    }

    #[test]
    fn reference_f_vectors() {
        for kind in PolytopeKind::NAMED {
            let (nv, facets) = reference_facets(kind);
            let mut edges: Vec<[usize; 2]> = Vec::new();
            for i in 0..facets.len() {
                for j in (i + 1)..facets.len() {
                    let common: Vec<usize> = facets[i]
                        .iter()
                        .filter(|v| facets[j].contains(v))
                        .copied()
                        .collect();
                    if common.len() == 2 {
                        let mut e = [common[0], common[1]];
                        e.sort_unstable();
                        if !edges.contains(&e) {
                            edges.push(e);
                        }
                    }
                }
            }
            let fv = [nv, edges.len(), facets.len()];
            assert_eq!(
                Some(fv),
                kind.expected_f_vector(),
                "reference lattice of {}",
                kind.name()
            );
        }
    }

    #[test]
    fn reference_keys_are_distinct() {
        let table = reference_table();
        for i in 0..table.len() {
            for j in (i + 1)..table.len() {
                assert_ne!(table[i].2, table[j].2);
            }
        }
    }

    #[test]
    fn octahedron_class_for_gaussian_field() {
        let graph = enumerate_classes(ctx(-1)).unwrap();
        let p = build_polytope(&graph.classes()[0]).unwrap();
        assert_eq!(p.f_vector(), [6, 12, 8]);
        let t = classify(&p);
        assert_eq!(t.kind, PolytopeKind::Octahedron);
    }

    #[test]
    fn tetrahedron_class_for_eisenstein_field() {
        let graph = enumerate_classes(ctx(-3)).unwrap();
        let p = build_polytope(&graph.classes()[0]).unwrap();
        assert_eq!(p.f_vector(), [4, 6, 4]);
        assert_eq!(classify(&p).kind, PolytopeKind::Tetrahedron);
    }

    #[test]
    fn cuboctahedron_class_for_d2() {
        let graph = enumerate_classes(ctx(-2)).unwrap();
        let p = build_polytope(&graph.classes()[0]).unwrap();
        assert_eq!(p.f_vector(), [12, 24, 14]);
        assert_eq!(classify(&p).kind, PolytopeKind::Cuboctahedron);
    }

    #[test]
    fn prism_class_for_d7() {
        let graph = enumerate_classes(ctx(-7)).unwrap();
        let p = build_polytope(&graph.classes()[0]).unwrap();
        assert_eq!(p.f_vector(), [6, 9, 5]);
        assert_eq!(classify(&p).kind, PolytopeKind::TriangularPrism);
    }

    #[test]
    fn hexagonal_cap_and_truncated_tetrahedron_for_d6() {
        let graph = enumerate_classes(ctx(-6)).unwrap();
        assert_eq!(graph.classes().len(), 2);
        let mut kinds: Vec<PolytopeKind> = graph
            .classes()
            .iter()
            .map(|pf| classify(&build_polytope(pf).unwrap()).kind)
            .collect();
        kinds.sort();
        assert_eq!(
            kinds,
            vec![
                PolytopeKind::HexagonalCap,
                PolytopeKind::TruncatedTetrahedron
            ]
        );
    }

    #[test]
    fn truncated_tetrahedron_for_d11() {
        let graph = enumerate_classes(ctx(-11)).unwrap();
        let p = build_polytope(&graph.classes()[0]).unwrap();
        assert_eq!(p.f_vector(), [12, 18, 8]);
        assert_eq!(classify(&p).kind, PolytopeKind::TruncatedTetrahedron);
    }

    #[test]
    fn classification_is_relabeling_invariant() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let graph = enumerate_classes(ctx(-7)).unwrap();
        let p = build_polytope(&graph.classes()[0]).unwrap();
        let base = classify(&p);
        for _ in 0..5 {
            let mut vperm: Vec<usize> = (0..p.vertices().len()).collect();
            vperm.shuffle(&mut rng);
            let mut facets: Vec<Vec<usize>> = p
                .facets()
                .iter()
                .map(|f| {
                    let mut g: Vec<usize> = f.iter().map(|&v| vperm[v]).collect();
                    g.sort_unstable();
                    g
                })
                .collect();
            facets.shuffle(&mut rng);
            let permuted = IdealPolytope {
                vertices: vperm.iter().map(|&v| p.vertices()[v].clone()).collect(),
                facets,
                edges: Vec::new(),
            };
            assert_eq!(permuted.canonical_incidence_key(), base.canonical_key);
        }
    }

    #[test]
    fn cusp_orbits_match_class_number() {
        for d in [-1, -2, -3, -7] {
            let graph = enumerate_classes(ctx(d)).unwrap();
            assert_eq!(cusp_orbit_count(&graph).unwrap(), 1, "d = {d}");
        }
    }
}
