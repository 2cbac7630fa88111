//! The class-enumeration engine: initial perfect-form search, perfection
//! testing, cone facets, the neighbor step across a facet, equivalence
//! witnesses, stabilizers, and the breadth-first enumeration of all
//! GL₂(O)-classes of perfect forms.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::dd;
use crate::enumerate::{minimal_data, vectors_below, MinimalData};
use crate::error::{Error, Result};
use crate::hermitian::{
    pairing_coords, pull_back, rank_one, ColumnVector, FormSpaceVector, HermitianForm,
    UnimodularMatrix,
};
use crate::linalg::{rank, rat_frac, rat_int, solve_unique, Rat};
use crate::qfield::{AlgebraicNum, FieldContext};

const NEIGHBOR_ITERATION_CAP: usize = 500;
const SHELL_DOUBLINGS: u32 = 16;

/// A perfect form normalized to minimum 1, with its minimal data and the
/// rank-one cone generators. Facets are computed on first use.
#[derive(Debug, Clone)]
pub struct PerfectForm {
    form: HermitianForm,
    minimal: MinimalData,
    cone_generators: Vec<FormSpaceVector>,
    // One defining minimal vector per cone generator, index-aligned.
    generator_vectors: Vec<ColumnVector>,
    facets: OnceLock<Vec<FacetData>>,
}

/// One facet of a perfect cone: the inward normal (pairing ≥ 0 on every
/// generator, = 0 exactly on the facet) and the incident generator indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetData {
    normal: FormSpaceVector,
    generator_subset: Vec<usize>,
}

impl FacetData {
    pub fn normal(&self) -> &FormSpaceVector {
        &self.normal
    }

    pub fn generator_subset(&self) -> &[usize] {
        &self.generator_subset
    }
}

impl PerfectForm {
    /// Wraps a positive definite form: rescales to minimum 1, recomputes
    /// minimal data, builds cone generators, and certifies perfection and
    /// the reconstruction property. Returns `None` if the form is not
    /// perfect.
    pub fn try_new(form: &HermitianForm) -> Result<Option<PerfectForm>> {
        let md = minimal_data(form)?;
        let scale = md.minimum().recip();
        let (form, minimal) = if md.minimum().is_one() {
            (form.clone(), md)
        } else {
            let scaled = form.scale(&scale);
            let md = minimal_data(&scaled)?;
            (scaled, md)
        };
        let mut cone_generators: Vec<FormSpaceVector> = Vec::new();
        let mut generator_vectors: Vec<ColumnVector> = Vec::new();
        for v in minimal.orbit_representatives() {
            let g = rank_one(v)?;
            if !cone_generators.contains(&g) {
                cone_generators.push(g);
                generator_vectors.push(v.clone());
            }
        }
        if !generators_have_full_rank(&cone_generators) {
            return Ok(None);
        }
        let pf = PerfectForm {
            form,
            minimal,
            cone_generators,
            generator_vectors,
            facets: OnceLock::new(),
        };
        debug_assert!(pf.reconstructs());
        Ok(Some(pf))
    }

    pub fn form(&self) -> &HermitianForm {
        &self.form
    }

    pub fn minimal(&self) -> &MinimalData {
        &self.minimal
    }

    pub fn cone_generators(&self) -> &[FormSpaceVector] {
        &self.cone_generators
    }

    /// The defining minimal vector of each cone generator, index-aligned
    /// with `cone_generators`.
    pub fn generator_vectors(&self) -> &[ColumnVector] {
        &self.generator_vectors
    }

    pub fn context(&self) -> FieldContext {
        self.form.context()
    }

    /// The facets of the perfect cone, computed once and cached.
    pub fn facets(&self) -> Result<&[FacetData]> {
        if self.facets.get().is_none() {
            let facets = compute_facets(self)?;
            let _ = self.facets.set(facets);
        }
        Ok(self.facets.get().expect("just filled"))
    }

    /// Reconstruction: the unique solution of trace_pairing(x, g) = 1 over
    /// all cone generators is the form itself.
    pub fn reconstructs(&self) -> bool {
        let rows: Vec<Vec<Rat>> = self
            .cone_generators
            .iter()
            .map(|g| g.pairing_row())
            .collect();
        let rhs = vec![rat_int(1); rows.len()];
        match solve_unique(&rows, &rhs) {
            Some(coords) => {
                FormSpaceVector::from_coords(self.context(), &coords) == self.form.to_space_vector()
            }
            None => false,
        }
    }
}

fn generators_have_full_rank(gens: &[FormSpaceVector]) -> bool {
    let rows: Vec<Vec<Rat>> = gens.iter().map(|g| g.coords_vec()).collect();
    rank(&rows) == 4
}

/// True iff the form (with minimal data already computed and minimum 1) is
/// perfect: its rank-one minimal points span the full 4-dimensional space.
pub fn is_perfect(_phi: &HermitianForm, md: &MinimalData) -> bool {
    let mut gens = Vec::new();
    for v in md.orbit_representatives() {
        if let Ok(g) = rank_one(v) {
            gens.push(g);
        }
    }
    generators_have_full_rank(&gens)
}

/// The unique b-entry β with Re(β) = −1/2 making the form (1, β, 1) take
/// the value 1 on the candidate vector (p, r); this is the closed-form
/// solution of that linear condition in the √d-coordinate of β.
pub fn beta_from_candidate(
    ctx: FieldContext,
    p: &AlgebraicNum,
    r: &AlgebraicNum,
) -> Result<AlgebraicNum> {
    let w = p * &r.conj();
    let (w1, w2) = w.sqrt_d_coords();
    if w2.is_zero() {
        return Err(Error::DegenerateCandidate);
    }
    // Solve norm(p) + norm(r) − w₁ + 2β₂·d·w₂ = 1 for β₂.
    let d = rat_int(ctx.d());
    let numer = rat_int(1) - p.norm() - r.norm() + &w1;
    let beta2 = numer / (rat_int(2) * &d * &w2);
    Ok(AlgebraicNum::from_sqrt_d_coords(
        ctx,
        rat_frac(-1, 2),
        beta2,
    ))
}

/// The positivity bound on a candidate: with β from the candidate, the form
/// (1, β, 1) is positive definite iff β·β̄ < 1, i.e. −d·β₂² < 3/4.
pub fn candidate_admissible(ctx: FieldContext, p: &AlgebraicNum, r: &AlgebraicNum) -> Result<bool> {
    let beta = beta_from_candidate(ctx, p, r)?;
    let (_, beta2) = beta.sqrt_d_coords();
    let value = -rat_int(ctx.d()) * &beta2 * &beta2;
    Ok(value < rat_frac(3, 4))
}

/// Elements of O with norm ≤ cap, in a deterministic order.
fn elements_with_norm_below(ctx: FieldContext, cap: i64) -> Vec<AlgebraicNum> {
    let mut out = Vec::new();
    let d = ctx.d();
    // norm(x + yω) = (x + tr(ω)y/2)² + |d|(y/2·s)² with s = 1 or 2; a loose
    // integer box suffices, filtered by the exact norm.
    let y_bound = (2.0 * (cap as f64 / (-d) as f64).sqrt()).ceil() as i64 + 1;
    let x_bound = (cap as f64).sqrt().ceil() as i64 + y_bound + 1;
    let cap = rat_int(cap);
    for y in -y_bound..=y_bound {
        for x in -x_bound..=x_bound {
            let z = AlgebraicNum::from_int_coords(ctx, x, y);
            if !z.is_zero() && z.norm() <= cap {
                out.push(z);
            }
        }
    }
    out.sort_by(|a, b| a.norm().cmp(&b.norm()).then_with(|| a.lex_cmp(b)));
    out
}

/// Brute-force search for an initial perfect form whose minimal vectors
/// contain (1,0), (0,1), (1,1) and one further candidate, enumerating
/// candidates in increasing shells of max(norm(p), norm(r), norm(p−r)) and
/// doubling the shell cap on exhaustion.
pub fn initial_perfect_form(ctx: FieldContext) -> Result<PerfectForm> {
    let start_cap = (2 * (-ctx.d())).max(16);
    let mut cap = start_cap;
    let mut previous_cap = 0i64;
    for _ in 0..=SHELL_DOUBLINGS {
        if let Some(pf) = search_shell(ctx, cap, previous_cap)? {
            return Ok(pf);
        }
        previous_cap = cap;
        cap *= 2;
    }
    Err(Error::SearchExhausted(cap))
}

fn search_shell(ctx: FieldContext, cap: i64, previous_cap: i64) -> Result<Option<PerfectForm>> {
    let elements = elements_with_norm_below(ctx, cap);
    let cap_rat = rat_int(cap);
    let prev_rat = rat_int(previous_cap);

    let mut candidates: Vec<(Rat, &AlgebraicNum, &AlgebraicNum)> = Vec::new();
    for p in &elements {
        for r in &elements {
            let diff_norm = (p - r).norm();
            let shell = p.norm().max(r.norm()).max(diff_norm);
            if shell > cap_rat || shell <= prev_rat {
                continue;
            }
            candidates.push((shell, p, r));
        }
    }
    candidates.sort_by(|(sa, pa, ra), (sb, pb, rb)| {
        sa.cmp(sb)
            .then_with(|| pa.lex_cmp(pb))
            .then_with(|| ra.lex_cmp(rb))
    });

    let one = ctx.one();
    let required = [
        ColumnVector::new(one.clone(), ctx.zero()),
        ColumnVector::new(ctx.zero(), one.clone()),
        ColumnVector::new(one.clone(), one.clone()),
    ];
    for (_, p, r) in candidates {
        match candidate_admissible(ctx, p, r) {
            Ok(true) => {}
            Ok(false) | Err(Error::DegenerateCandidate) => continue,
            Err(e) => return Err(e),
        }
        let beta = beta_from_candidate(ctx, p, r)?;
        let phi = HermitianForm::new(rat_int(1), beta, rat_int(1));
        if !phi.is_positive_definite() {
            continue;
        }
        let md = minimal_data(&phi)?;
        if !md.minimum().is_one() {
            continue;
        }
        let candidate_vec = ColumnVector::new((*p).clone(), (*r).clone());
        let contained = required
            .iter()
            .chain(std::iter::once(&candidate_vec))
            .all(|v| phi.evaluate(v).is_one());
        if !contained {
            continue;
        }
        if let Some(pf) = PerfectForm::try_new(&phi)? {
            return Ok(Some(pf));
        }
    }
    Ok(None)
}

/// Exact dual description of the perfect cone: every facet with its inward
/// normal and incident generators, in a deterministic order.
pub fn compute_facets(pf: &PerfectForm) -> Result<Vec<FacetData>> {
    let gens = pf.cone_generators();
    let rows: Vec<Vec<Rat>> = gens.iter().map(|g| g.pairing_row()).collect();
    let rays = dd::extreme_rays(&rows).ok_or(Error::DegenerateCone)?;
    let mut facets = Vec::with_capacity(rays.len());
    for ray in rays {
        let normal = FormSpaceVector::from_coords(pf.context(), &ray);
        let mut subset = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            let v = pairing_coords(&normal, g);
            if v.is_zero() {
                subset.push(i);
            } else if v.is_negative() {
                return Err(Error::DegenerateCone);
            }
        }
        let subset_rows: Vec<Vec<Rat>> = subset.iter().map(|&i| gens[i].coords_vec()).collect();
        if rank(&subset_rows) != 3 {
            return Err(Error::DegenerateCone);
        }
        facets.push(FacetData {
            normal,
            generator_subset: subset,
        });
    }
    Ok(facets)
}

/// The perfect form adjacent to `pf` across `facet`: the unique form
/// φ + t*·ψ of minimum 1 whose cone shares exactly that facet, found by an
/// exact rational walk. ψ is the facet normal read as a (usually
/// indefinite) Hermitian form.
///
/// Trial values of t approach the positive-definiteness boundary along an
/// exact determinant-floor schedule (det(φ + tψ) is concave in t, so the
/// region above a floor is an interval); once any vector reaches value ≤ 1
/// off the facet, t descends exactly onto the first hitting time.
pub fn neighbor(pf: &PerfectForm, facet: &FacetData) -> Result<PerfectForm> {
    if pf.facets()?.iter().all(|f| f != facet) {
        return Err(Error::NotAFacet);
    }
    let phi = pf.form();
    let eta = HermitianForm::from_space_vector(facet.normal());
    let det0 = phi.determinant();

    // Phase A: grow t until a vector off the facet has value ≤ 1. The
    // floor keeps the form well-conditioned so enumeration stays small;
    // once the floor is low enough a short vector is forced to exist.
    let mut floor = &det0 / rat_int(4);
    let mut t_good = Rat::zero();
    let mut t_hit: Option<Rat> = None;
    for _ in 0..NEIGHBOR_ITERATION_CAP {
        let good = |t: &Rat| -> bool {
            let f = phi.add(&eta.scale(t));
            f.is_positive_definite() && f.determinant() >= floor
        };
        let mut lo = t_good.clone();
        let mut hi = if lo.is_zero() {
            rat_int(1)
        } else {
            &lo * rat_int(2)
        };
        let mut grew = 0;
        while good(&hi) {
            lo = hi.clone();
            hi = &hi * rat_int(2);
            grew += 1;
            if grew > NEIGHBOR_ITERATION_CAP {
                // A positive semidefinite direction: no facet crossing.
                return Err(Error::NonterminatingStep);
            }
        }
        for _ in 0..60 {
            if phi.add(&eta.scale(&lo)).determinant() <= &floor * rat_int(2) && !lo.is_zero() {
                break;
            }
            let mid = (&lo + &hi) / rat_int(2);
            if good(&mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = lo;
        let phi_t = phi.add(&eta.scale(&t));
        let hits = vectors_below(&phi_t.gram_z4(), &rat_int(1))?;
        let ctx = pf.context();
        let triggered = hits.iter().any(|(coords, value)| {
            let v = column_from_coords(ctx, coords);
            value < &rat_int(1) || !eta.evaluate(&v).is_zero()
        });
        if triggered {
            t_hit = Some(t);
            break;
        }
        t_good = t;
        floor = &floor / rat_int(4);
    }
    let Some(mut t) = t_hit else {
        return Err(Error::NonterminatingStep);
    };

    // Phase B: exact descent onto the minimal hitting time t*.
    for _ in 0..NEIGHBOR_ITERATION_CAP {
        let phi_t = phi.add(&eta.scale(&t));
        debug_assert!(phi_t.is_positive_definite());
        let hits = vectors_below(&phi_t.gram_z4(), &rat_int(1))?;
        let ctx = pf.context();
        let mut best_violation: Option<Rat> = None;
        let mut has_new_at_one = false;
        for (coords, value) in &hits {
            let v = column_from_coords(ctx, coords);
            if value < &rat_int(1) {
                let drop = eta.evaluate(&v);
                debug_assert!(drop.is_negative());
                let t_v = (rat_int(1) - phi.evaluate(&v)) / drop;
                best_violation = Some(match best_violation {
                    None => t_v,
                    Some(cur) => cur.min(t_v),
                });
            } else if !eta.evaluate(&v).is_zero() {
                has_new_at_one = true;
            }
        }
        if let Some(t_v) = best_violation {
            t = t_v;
            continue;
        }
        if has_new_at_one {
            let neighbor = PerfectForm::try_new(&phi_t)?.ok_or(Error::NonterminatingStep)?;
            certify_shared_facet(pf, facet, &neighbor);
            return Ok(neighbor);
        }
        // The hitting vector vanished: t was above the boundary but the
        // descent overshot below every trigger, which cannot happen.
        return Err(Error::NonterminatingStep);
    }
    Err(Error::NonterminatingStep)
}

fn column_from_coords(ctx: FieldContext, coords: &[BigInt]) -> ColumnVector {
    ColumnVector::new(
        AlgebraicNum::new(
            ctx,
            Rat::from_integer(coords[0].clone()),
            Rat::from_integer(coords[1].clone()),
        ),
        AlgebraicNum::new(
            ctx,
            Rat::from_integer(coords[2].clone()),
            Rat::from_integer(coords[3].clone()),
        ),
    )
}

/// The neighbor's cone must touch pf's cone in exactly the crossed facet:
/// shared generators are the facet's, and every other neighbor generator
/// lies strictly on the far side of the facet hyperplane.
fn certify_shared_facet(pf: &PerfectForm, facet: &FacetData, neighbor: &PerfectForm) {
    let shared: Vec<&FormSpaceVector> = facet
        .generator_subset
        .iter()
        .map(|&i| &pf.cone_generators()[i])
        .collect();
    for g in &shared {
        assert!(
            neighbor.cone_generators().contains(g),
            "facet generator missing from neighbor cone"
        );
    }
    for g in neighbor.cone_generators() {
        let v = pairing_coords(facet.normal(), g);
        if v.is_zero() {
            assert!(shared.contains(&g), "neighbor gained an on-facet generator");
        } else {
            assert!(
                v.is_negative(),
                "neighbor generator on the wrong side of the facet"
            );
        }
    }
}

/// Searches for γ ∈ GL₂(O) with pull_back(γ, pf2.form) = pf1.form. Fixes
/// the first F-linearly independent pair from M(pf1) and tries every
/// ordered pair from M(pf2) whose Hermitian product matches; each hit is
/// re-verified against the pull-back identity before being returned.
pub fn equivalence_witness(pf1: &PerfectForm, pf2: &PerfectForm) -> Option<UnimodularMatrix> {
    let mut out = None;
    witness_search(pf1, pf2, &mut |gamma| {
        out = Some(gamma);
        false
    });
    out
}

/// Shared search core. `visit` returns false to stop the search.
fn witness_search<F: FnMut(UnimodularMatrix) -> bool>(
    pf1: &PerfectForm,
    pf2: &PerfectForm,
    visit: &mut F,
) {
    let m1 = pf1.minimal().vectors();
    let m2 = pf2.minimal().vectors();
    if m1.len() != m2.len() {
        return;
    }
    let v1 = &m1[0];
    let Some(v2) = m1.iter().find(|w| !f_linear_dependent(v1, w)) else {
        return;
    };
    let h12 = pf1.form().hermitian_product(v1, v2);

    let det_v = &(v1.p() * v2.r()) - &(v1.r() * v2.p());
    let det_v_inv = det_v.inverse().expect("independent pair");

    for w1 in m2 {
        // Profile pruning: h(w1, w1) = h(v1, v1) = 1 holds for free.
        for w2 in m2 {
            if pf2.form().hermitian_product(w1, w2) != h12 {
                continue;
            }
            // Solve γ·v1 = w1, γ·v2 = w2 over F: γ = W·V⁻¹ with
            // V⁻¹ = adj(V)/det(V).
            let a = &(&(w1.p() * v2.r()) - &(w2.p() * v1.r())) * &det_v_inv;
            let b = &(&(w2.p() * v1.p()) - &(w1.p() * v2.p())) * &det_v_inv;
            let c = &(&(w1.r() * v2.r()) - &(w2.r() * v1.r())) * &det_v_inv;
            let d = &(&(w2.r() * v1.p()) - &(w1.r() * v2.p())) * &det_v_inv;
            let Ok(gamma) = UnimodularMatrix::new([[a, b], [c, d]]) else {
                continue;
            };
            if &pull_back(&gamma, pf2.form()) == pf1.form() && !visit(gamma) {
                return;
            }
        }
    }
}

fn f_linear_dependent(v: &ColumnVector, w: &ColumnVector) -> bool {
    (&(v.p() * w.r()) - &(v.r() * w.p())).is_zero()
}

/// The full stabilizer of a perfect form in GL₂(O).
#[derive(Debug, Clone)]
pub struct Stabilizer {
    elements: Vec<UnimodularMatrix>,
    cyclic: bool,
    generator: UnimodularMatrix,
}

impl Stabilizer {
    pub fn elements(&self) -> &[UnimodularMatrix] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    /// An element of maximal order (a generator when the group is cyclic).
    pub fn generator(&self) -> &UnimodularMatrix {
        &self.generator
    }
}

/// All γ with pull_back(γ, pf.form) = pf.form, with group order, cyclicity
/// and a maximal-order element. The set is verified closed under products.
pub fn stabilizer(pf: &PerfectForm) -> Stabilizer {
    let mut elements: Vec<UnimodularMatrix> = Vec::new();
    witness_search(pf, pf, &mut |gamma| {
        elements.push(gamma);
        true
    });
    assert!(!elements.is_empty(), "stabilizer contains the identity");
    assert!(
        elements.contains(&UnimodularMatrix::neg_identity(pf.context())),
        "stabilizer contains -1"
    );
    for g in &elements {
        for h in &elements {
            assert!(
                elements.contains(&g.compose(h)),
                "stabilizer not closed under product"
            );
        }
    }
    let order = elements.len();
    // Red-flag ceiling from finite subgroups of GL₂ over these orders.
    assert!(
        order <= 24 * pf.context().units().len(),
        "stabilizer order {order} above the sanity ceiling"
    );
    let mut best: Option<(usize, &UnimodularMatrix)> = None;
    for g in &elements {
        let ord = element_order(g, order);
        if best.as_ref().map_or(true, |(b, _)| ord > *b) {
            best = Some((ord, g));
        }
    }
    let (max_order, generator) = best.expect("nonempty stabilizer");
    Stabilizer {
        cyclic: max_order == order,
        generator: generator.clone(),
        elements,
    }
}

fn element_order(g: &UnimodularMatrix, cap: usize) -> usize {
    let mut acc = g.clone();
    for k in 1..=cap {
        if acc.is_identity() {
            return k;
        }
        acc = acc.compose(g);
    }
    cap + 1
}

/// Adjacency record: crossing one facet of a class representative lands in
/// `neighbor_class`, witnessed by pull_back(witness, rep_k) = neighbor form.
#[derive(Debug, Clone)]
pub struct Adjacency {
    pub neighbor_class: usize,
    pub neighbor_form: HermitianForm,
    pub witness: UnimodularMatrix,
}

/// The complete GL₂(O)-class graph of perfect forms for one field.
#[derive(Debug)]
pub struct PerfectFormGraph {
    ctx: FieldContext,
    classes: Vec<PerfectForm>,
    adjacency: Vec<Vec<Adjacency>>,
    stabilizers: Vec<Stabilizer>,
}

impl PerfectFormGraph {
    pub fn context(&self) -> FieldContext {
        self.ctx
    }

    pub fn classes(&self) -> &[PerfectForm] {
        &self.classes
    }

    pub fn adjacency(&self) -> &[Vec<Adjacency>] {
        &self.adjacency
    }

    pub fn stabilizers(&self) -> &[Stabilizer] {
        &self.stabilizers
    }

    /// Checks the gluing involution: re-crossing the shared facet from the
    /// neighbor's class representative leads back to the source class.
    pub fn verify_gluing(&self) -> std::result::Result<(), String> {
        for (i, adjs) in self.adjacency.iter().enumerate() {
            let facets = self.classes[i].facets().map_err(|e| e.to_string())?;
            for (f, adj) in adjs.iter().enumerate() {
                let k = adj.neighbor_class;
                // Map the shared facet generators into rep_k through the
                // witness: v ∈ M(neighbor) ⟺ γv ∈ M(rep_k).
                let mut mapped: Vec<FormSpaceVector> = Vec::new();
                for &gi in facets[f].generator_subset() {
                    let g = &self.classes[i].cone_generators()[gi];
                    let v = self.classes[i]
                        .minimal()
                        .vectors()
                        .iter()
                        .find(|v| rank_one(v).ok().as_ref() == Some(g))
                        .ok_or_else(|| format!("class {i}: facet generator has no vector"))?;
                    let image = rank_one(&adj.witness.apply(v)).map_err(|e| e.to_string())?;
                    if !mapped.contains(&image) {
                        mapped.push(image);
                    }
                }
                let rep_facets = self.classes[k].facets().map_err(|e| e.to_string())?;
                let matched = rep_facets.iter().position(|fac| {
                    let set: Vec<&FormSpaceVector> = fac
                        .generator_subset()
                        .iter()
                        .map(|&gi| &self.classes[k].cone_generators()[gi])
                        .collect();
                    set.len() == mapped.len() && mapped.iter().all(|g| set.contains(&g))
                });
                let Some(f_back) = matched else {
                    return Err(format!(
                        "class {i} facet {f}: image facet not found in class {k}"
                    ));
                };
                let back = self.adjacency[k][f_back].neighbor_class;
                if back != i {
                    return Err(format!(
                        "class {i} facet {f}: gluing returns to class {back}, expected {i}"
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Breadth-first enumeration of all perfect-form classes starting from the
/// initial search.
pub fn enumerate_classes(ctx: FieldContext) -> Result<PerfectFormGraph> {
    let initial = initial_perfect_form(ctx)?;
    enumerate_classes_from(initial)
}

/// Breadth-first enumeration from a given perfect form: pop a class,
/// compute facets and each neighbor, test equivalence against known
/// representatives, append when new. Deterministic discovery order.
pub fn enumerate_classes_from(initial: PerfectForm) -> Result<PerfectFormGraph> {
    let ctx = initial.context();
    let mut classes: Vec<PerfectForm> = vec![initial];
    let mut adjacency: Vec<Vec<Adjacency>> = Vec::new();
    let mut next = 0usize;
    while next < classes.len() {
        let facets = classes[next].facets()?.to_vec();
        let mut row = Vec::with_capacity(facets.len());
        for facet in &facets {
            let nb = neighbor(&classes[next], facet)?;
            let mut found: Option<(usize, UnimodularMatrix)> = None;
            for (k, rep) in classes.iter().enumerate() {
                // The witness maps M(nb) into M(rep): pull_back(γ, rep) = nb.
                if let Some(gamma) = equivalence_witness(&nb, rep) {
                    found = Some((k, gamma));
                    break;
                }
            }
            let (k, gamma) = match found {
                Some(hit) => hit,
                None => {
                    classes.push(nb.clone());
                    let k = classes.len() - 1;
                    (k, UnimodularMatrix::identity(ctx))
                }
            };
            row.push(Adjacency {
                neighbor_class: k,
                neighbor_form: nb.form().clone(),
                witness: gamma,
            });
        }
        adjacency.push(row);
        next += 1;
    }
    let stabilizers = classes.iter().map(stabilizer).collect();
    Ok(PerfectFormGraph {
        ctx,
        classes,
        adjacency,
        stabilizers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::make_context;

    fn ctx(d: i64) -> FieldContext {
        make_context(d).unwrap()
    }

    #[test]
    fn beta_closed_form_matches_linear_solve() {
        // The β₂ produced must satisfy the Eq.-style closed form written in
        // √d-coordinates of the candidate, with the sign fixed by the
        // evaluation convention of this crate.
        for d in [-1, -2, -7, -14, -43] {
            let c = ctx(d);
            let candidates = [
                (AlgebraicNum::from_int_coords(c, 0, 1), c.one()),
                (
                    AlgebraicNum::from_int_coords(c, 1, 1),
                    AlgebraicNum::from_int_coords(c, 2, 0),
                ),
                (
                    AlgebraicNum::from_int_coords(c, 2, -1),
                    AlgebraicNum::from_int_coords(c, 1, 1),
                ),
            ];
            for (p, r) in &candidates {
                let Ok(beta) = beta_from_candidate(c, p, r) else {
                    continue;
                };
                let (re, b2) = beta.sqrt_d_coords();
                assert_eq!(re, rat_frac(-1, 2));
                let (a1, a2) = p.sqrt_d_coords();
                let (b1p, b2p) = r.sqrt_d_coords();
                let dd = rat_int(d);
                let numer = rat_int(1) - &a1 * &a1 + &a2 * &a2 * &dd + &a1 * &b1p
                    - &a2 * &dd * &b2p
                    - &b1p * &b1p
                    + &b2p * &b2p * &dd;
                let denom = rat_int(2) * &dd * (&a2 * &b1p - &a1 * &b2p);
                assert_eq!(b2, numer / denom, "d={d}");
                // Linear-solve oracle: the search form takes value 1 on the
                // candidate.
                let phi = HermitianForm::new(rat_int(1), beta, rat_int(1));
                assert!(phi
                    .evaluate(&ColumnVector::new((*p).clone(), (*r).clone()))
                    .is_one());
            }
        }
    }

    #[test]
    fn beta_gaussian_example() {
        let c = ctx(-1);
        let beta = beta_from_candidate(c, &c.omega(), &c.one()).unwrap();
        let (re, b2) = beta.sqrt_d_coords();
        assert_eq!(re, rat_frac(-1, 2));
        assert_eq!(b2, rat_frac(1, 2));
        assert!(candidate_admissible(c, &c.omega(), &c.one()).unwrap());
    }

    #[test]
    fn admissibility_boundary_is_rejected() {
        // The positivity bound is strict: value exactly 3/4 means |β| = 1,
        // a degenerate (determinant-zero) form.
        let c = ctx(-3);
        let boundary_beta = AlgebraicNum::from_sqrt_d_coords(c, rat_frac(-1, 2), rat_frac(1, 2));
        assert_eq!(boundary_beta.norm(), rat_int(1));
        let phi = HermitianForm::new(rat_int(1), boundary_beta.clone(), rat_int(1));
        assert!(phi.determinant().is_zero());
        assert!(!phi.is_positive_definite());
        // Any candidate hitting the boundary value must be inadmissible.
        for p in elements_with_norm_below(c, 30) {
            for r in elements_with_norm_below(c, 30) {
                let Ok(beta) = beta_from_candidate(c, &p, &r) else {
                    continue;
                };
                let (_, b2) = beta.sqrt_d_coords();
                let value = -rat_int(c.d()) * &b2 * &b2;
                if value == rat_frac(3, 4) {
                    assert!(!candidate_admissible(c, &p, &r).unwrap());
                }
            }
        }
    }

    #[test]
    fn degenerate_candidates_rejected() {
        let c = ctx(-14);
        assert!(matches!(
            beta_from_candidate(c, &c.one(), &c.one()),
            Err(Error::DegenerateCandidate)
        ));
        assert!(matches!(
            beta_from_candidate(c, &c.one(), &c.zero()),
            Err(Error::DegenerateCandidate)
        ));
    }

    #[test]
    fn admissible_candidates_give_definite_forms() {
        let c = ctx(-14);
        let elements = elements_with_norm_below(c, 40);
        let mut seen = 0;
        for p in &elements {
            for r in &elements {
                match candidate_admissible(c, p, r) {
                    Ok(true) => {
                        let beta = beta_from_candidate(c, p, r).unwrap();
                        let phi = HermitianForm::new(rat_int(1), beta, rat_int(1));
                        assert!(phi.is_positive_definite());
                        seen += 1;
                    }
                    _ => continue,
                }
            }
        }
        assert!(seen > 0);
    }

    #[test]
    fn initial_form_gaussian_field() {
        let c = ctx(-1);
        let pf = initial_perfect_form(c).unwrap();
        assert!(pf.minimal().minimum().is_one());
        // The four required vectors are minimal.
        for coords in [[1i64, 0, 0, 0], [0, 0, 1, 0], [1, 0, 1, 0]] {
            let v = ColumnVector::from_int_coords(c, coords);
            assert!(pf.form().evaluate(&v).is_one());
        }
        assert!(is_perfect(pf.form(), pf.minimal()));
        // Octahedron class: 6 cone generators, 8 facets.
        assert_eq!(pf.cone_generators().len(), 6);
        assert_eq!(pf.facets().unwrap().len(), 8);
    }

    #[test]
    fn identity_form_is_not_perfect() {
        let c = ctx(-14);
        let phi = HermitianForm::identity(c);
        let md = minimal_data(&phi).unwrap();
        assert!(!is_perfect(&phi, &md));
        assert!(PerfectForm::try_new(&phi).unwrap().is_none());
    }

    #[test]
    fn facet_normals_pair_correctly() {
        let c = ctx(-1);
        let pf = initial_perfect_form(c).unwrap();
        for facet in pf.facets().unwrap() {
            for (i, g) in pf.cone_generators().iter().enumerate() {
                let v = pairing_coords(facet.normal(), g);
                if facet.generator_subset().contains(&i) {
                    assert!(v.is_zero());
                } else {
                    assert!(v.is_positive());
                }
            }
        }
    }

    #[test]
    fn gaussian_neighbors_are_equivalent_to_the_class() {
        let c = ctx(-1);
        let pf = initial_perfect_form(c).unwrap();
        let facets = pf.facets().unwrap().to_vec();
        for facet in &facets {
            let nb = neighbor(&pf, facet).unwrap();
            assert!(nb.minimal().minimum().is_one());
            assert!(equivalence_witness(&nb, &pf).is_some());
        }
    }

    #[test]
    fn neighbor_rejects_foreign_facet() {
        let c1 = ctx(-1);
        let c2 = ctx(-2);
        let pf1 = initial_perfect_form(c1).unwrap();
        let pf2 = initial_perfect_form(c2).unwrap();
        let foreign = pf2.facets().unwrap()[0].clone();
        assert!(matches!(neighbor(&pf1, &foreign), Err(Error::NotAFacet)));
    }

    #[test]
    fn witness_found_for_pulled_back_forms() {
        let c = ctx(-7);
        let pf = initial_perfect_form(c).unwrap();
        let gamma = UnimodularMatrix::new([
            [c.one(), AlgebraicNum::from_int_coords(c, 1, -1)],
            [c.zero(), -&c.one()],
        ])
        .unwrap();
        let pulled = PerfectForm::try_new(&pull_back(&gamma, pf.form()))
            .unwrap()
            .expect("pull-back of perfect form is perfect");
        let w = equivalence_witness(&pulled, &pf).expect("witness exists");
        assert_eq!(&pull_back(&w, pf.form()), pulled.form());
    }

    #[test]
    fn stabilizer_contains_minus_identity_and_is_even() {
        let c = ctx(-7);
        let pf = initial_perfect_form(c).unwrap();
        let stab = stabilizer(&pf);
        assert!(stab.order() % 2 == 0);
        assert!(stab.elements().contains(&UnimodularMatrix::neg_identity(c)));
    }

    #[test]
    fn single_class_fields() {
        for d in [-1, -2, -3, -7, -11] {
            let graph = enumerate_classes(ctx(d)).unwrap();
            assert_eq!(graph.classes().len(), 1, "d = {d}");
            graph.verify_gluing().unwrap();
        }
    }

    #[test]
    fn two_class_field_d19() {
        let graph = enumerate_classes(ctx(-19)).unwrap();
        assert_eq!(graph.classes().len(), 2);
        graph.verify_gluing().unwrap();
        // The two classes are mutually reachable and inequivalent.
        assert!(equivalence_witness(&graph.classes()[0], &graph.classes()[1]).is_none());
    }

    #[test]
    fn reconstruction_invariant() {
        for d in [-1, -7, -19] {
            let graph = enumerate_classes(ctx(d)).unwrap();
            for pf in graph.classes() {
                assert!(pf.reconstructs());
            }
        }
    }
}
