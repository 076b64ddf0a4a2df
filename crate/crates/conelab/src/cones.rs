//! Directional polyhedral constructs: achievable active-index families, the
//! indexed face cones and their polars (two independent routes), the normal
//! pieces assembled from them, and the building blocks of the regular normal
//! cone to the graph.

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{is_zero_vec, rat, zero_vec, Rat, RatVec};
use crate::model::{active_dir, format_index_set, IndexSet, ProblemData};
use crate::multipliers;
use crate::polyhedra::{Cone, Polyhedron};
use crate::simplex::{lp_solve, optimal_face, LpOutcome};

/// One achievable active family along a direction, with its witness point.
#[derive(Clone, Debug)]
pub struct JMember {
    pub set: IndexSet,
    pub witness: RatVec,
    pub maximal: bool,
}

/// The family of active-index sets achievable over the curvature-feasible
/// region of a direction, together with that region and the solution set of
/// its defining linear program.
#[derive(Clone, Debug)]
pub struct JFamily {
    pub direction: RatVec,
    pub members: Vec<JMember>,
    /// feasible region {z | grad_i z + v^T H_i v <= 0, i active}
    pub xi: Polyhedron,
    /// argmin of -ystar.z over the feasible region
    pub zbar: Polyhedron,
}

impl JFamily {
    pub fn maximal_sets(&self) -> Vec<&JMember> {
        self.members.iter().filter(|m| m.maximal).collect()
    }

    pub fn contains_set(&self, s: &IndexSet) -> bool {
        self.members.iter().any(|m| &m.set == s)
    }

    /// Canonical text form of the family, e.g. "{},{1},{2}".
    pub fn describe(&self) -> String {
        let parts: Vec<String> = self.members.iter().map(|m| format_index_set(&m.set)).collect();
        parts.join(",")
    }
}

/// Enumerates the achievable active families along `v`: a candidate set J of
/// direction-active constraints is achievable iff the system
///   grad_i z + v^T H_i v = 0 (i in J),  < 0 (i direction-active, not in J),
///   <= 0 (remaining active)
/// admits a solution; strictness is decided by maximizing a unit-capped slack.
pub fn jfamily(p: &ProblemData, v: &[Rat], max_enum: usize) -> Result<JFamily> {
    let dir_active = active_dir(p, v)?;
    let curvature = multipliers::curvature_coeffs(p, v);

    // feasible region in z-space
    let mut rows: Vec<(RatVec, Rat)> = Vec::new();
    for &i in &p.active {
        rows.push((p.grad.row(i).to_vec(), -curvature[i].clone()));
    }
    let xi = Polyhedron::from_h(p.m, Vec::new(), rows);
    if xi.is_empty() {
        return Err(Error::InfeasibleXi);
    }
    let neg_ystar: RatVec = p.ystar.iter().map(|x| -x).collect();
    let zbar = match lp_solve(&neg_ystar, &xi)? {
        LpOutcome::Optimal { .. } => optimal_face(&neg_ystar, &xi)?,
        _ => {
            return Err(Error::Internal(
                "dual curvature program must be solvable when multipliers exist".to_string(),
            ))
        }
    };

    let da: Vec<usize> = dir_active.iter().copied().collect();
    if 1usize << da.len() > max_enum {
        return Err(Error::EnumerationCap {
            cap: max_enum,
            what: "achievable active families",
        });
    }
    let mut members: Vec<JMember> = Vec::new();
    for mask in 0..(1u32 << da.len()) {
        let j_set: IndexSet = da
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) != 0)
            .map(|(_, &i)| i)
            .collect();
        // (z, t): maximize t, t <= 1
        let dim = p.m + 1;
        let mut eq: Vec<(RatVec, Rat)> = Vec::new();
        let mut ineq: Vec<(RatVec, Rat)> = Vec::new();
        for &i in &p.active {
            let mut r = zero_vec(dim);
            r[..p.m].clone_from_slice(p.grad.row(i));
            let rhs = -curvature[i].clone();
            if j_set.contains(&i) {
                eq.push((r, rhs));
            } else if dir_active.contains(&i) {
                r[p.m] = rat(1);
                ineq.push((r, rhs));
            } else {
                ineq.push((r, rhs));
            }
        }
        let mut tcap = zero_vec(dim);
        tcap[p.m] = rat(1);
        ineq.push((tcap, rat(1)));
        let mut tpos = zero_vec(dim);
        tpos[p.m] = rat(-1);
        ineq.push((tpos, Rat::zero()));
        let poly = Polyhedron::from_h(dim, eq, ineq);
        let mut objective = zero_vec(dim);
        objective[p.m] = rat(-1);
        if let LpOutcome::Optimal { value, point, .. } = lp_solve(&objective, &poly)? {
            if (-value).is_positive() {
                members.push(JMember {
                    set: j_set,
                    witness: point[..p.m].to_vec(),
                    maximal: false,
                });
            }
        }
    }
    let sets: Vec<IndexSet> = members.iter().map(|m| m.set.clone()).collect();
    for m in members.iter_mut() {
        m.maximal = !sets
            .iter()
            .any(|other| m.set.is_subset(other) && *other != m.set);
    }
    Ok(JFamily {
        direction: v.to_vec(),
        members,
        xi,
        zbar,
    })
}

/// The indexed face cone {w | grad_i w = 0 (i in iplus), grad_i w <= 0
/// (i in iset minus iplus)}; with a direction, its refinement by the
/// solvability of the coupled system in an auxiliary variable, realized as an
/// exact projection.
pub fn face_cone(p: &ProblemData, iplus: &IndexSet, iset: &IndexSet, v: Option<&[Rat]>) -> Cone {
    debug_assert!(iplus.is_subset(iset));
    debug_assert!(iset.is_subset(&p.active));
    let mut base_eq: Vec<RatVec> = Vec::new();
    let mut base_ineq: Vec<RatVec> = Vec::new();
    for &i in iset {
        if iplus.contains(&i) {
            base_eq.push(p.grad.row(i).to_vec());
        } else {
            base_ineq.push(p.grad.row(i).to_vec());
        }
    }
    let Some(v) = v.filter(|v| !is_zero_vec(v)) else {
        return Cone::from_h(p.m, base_eq, base_ineq);
    };
    // (w, z) system: base rows on w, coupling rows grad_i z + v^T H_i w
    let dim = 2 * p.m;
    let mut eq: Vec<RatVec> = Vec::new();
    let mut ineq: Vec<RatVec> = Vec::new();
    for r in &base_eq {
        let mut row = zero_vec(dim);
        row[..p.m].clone_from_slice(r);
        eq.push(row);
    }
    for r in &base_ineq {
        let mut row = zero_vec(dim);
        row[..p.m].clone_from_slice(r);
        ineq.push(row);
    }
    for &i in iset {
        let mut row = zero_vec(dim);
        let vh = p.hess[i].mat_vec(v); // symmetric: (v^T H_i) as a vector
        row[..p.m].clone_from_slice(&vh);
        row[p.m..].clone_from_slice(p.grad.row(i));
        if iplus.contains(&i) {
            eq.push(row);
        } else {
            ineq.push(row);
        }
    }
    Cone::from_h(dim, eq, ineq).project(&(0..p.m).collect::<Vec<_>>())
}

/// Polar of the directional face cone via its generator formula: the image of
/// {(mu, nu) sign-structured on (iplus, iset), grad^T nu = 0} under
/// (mu, nu) -> grad^T mu + H(nu) v. Must agree exactly with
/// `face_cone(..).polar()`; the pair is the dual-path oracle.
pub fn face_cone_polar(
    p: &ProblemData,
    iplus: &IndexSet,
    iset: &IndexSet,
    v: Option<&[Rat]>,
) -> Cone {
    let l = p.l;
    let dim = 2 * l;
    let mut eq: Vec<RatVec> = Vec::new();
    let mut ineq: Vec<RatVec> = Vec::new();
    let sign_rows = |offset: usize, eq: &mut Vec<RatVec>, ineq: &mut Vec<RatVec>| {
        for i in 0..l {
            if iplus.contains(&i) {
                continue; // free coordinate
            }
            let mut row = zero_vec(dim);
            if iset.contains(&i) {
                row[offset + i] = rat(-1);
                ineq.push(row);
            } else {
                row[offset + i] = rat(1);
                eq.push(row);
            }
        }
    };
    sign_rows(0, &mut eq, &mut ineq);
    sign_rows(l, &mut eq, &mut ineq);
    // grad^T nu = 0
    let gt = p.grad.transpose();
    for j in 0..p.m {
        let mut row = zero_vec(dim);
        row[l..].clone_from_slice(gt.row(j));
        eq.push(row);
    }
    let mu_nu_cone = Cone::from_h(dim, eq, ineq);
    let image = |x: &RatVec| -> RatVec {
        let mu = &x[..l];
        let nu = &x[l..];
        let mut out = p.combine_gradients(mu);
        if let Some(v) = v {
            out = crate::exact::add_vec(&out, &p.weighted_hessian(nu).mat_vec(v));
        }
        out
    };
    let rays: Vec<RatVec> = mu_nu_cone
        .rays()
        .iter()
        .map(image)
        .filter(|r| !is_zero_vec(r))
        .collect();
    let lineality: Vec<RatVec> = mu_nu_cone
        .lineality()
        .iter()
        .map(image)
        .filter(|r| !is_zero_vec(r))
        .collect();
    Cone::from_v(p.m, rays, lineality)
}

/// The image cone grad^T P(iplus, iset): gradients of iplus span lines,
/// gradients of iset minus iplus span rays.
pub fn gradient_image_cone(p: &ProblemData, iplus: &IndexSet, iset: &IndexSet) -> Cone {
    let mut rays = Vec::new();
    let mut lineality = Vec::new();
    for &i in iset {
        if iplus.contains(&i) {
            lineality.push(p.grad.row(i).to_vec());
        } else {
            rays.push(p.grad.row(i).to_vec());
        }
    }
    Cone::from_v(p.m, rays, lineality)
}

/// Which polar bounds the shifted normal component of a piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PieceVariant {
    /// polar of the directional face cone
    Full,
    /// the smaller gradient-image cone
    GradientImage,
}

/// How a piece entered the assembled union.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Licq,
    Directional,
    /// limits along base points moving off the reference point
    MovingBase,
    /// limits with the base point fixed and only the normal moving
    FixedBase,
    Regular,
    Tangent,
}

impl Origin {
    pub fn label(self) -> &'static str {
        match self {
            Origin::Licq => "licq",
            Origin::Directional => "directional",
            Origin::MovingBase => "moving-base",
            Origin::FixedBase => "fixed-base",
            Origin::Regular => "regular",
            Origin::Tangent => "tangent",
        }
    }
}

/// Construction data of a piece, sufficient to regenerate its cone.
#[derive(Clone, Debug)]
pub struct Provenance {
    pub origin: Origin,
    pub ray: Option<RatVec>,
    pub lambda: Option<RatVec>,
    pub iplus: Option<IndexSet>,
    pub iset: Option<IndexSet>,
}

/// One polyhedral piece of a cone union, living in (w*, w) coordinates
/// (tangent-origin pieces read as (v, v*)).
#[derive(Clone, Debug)]
pub struct ConePiece {
    pub set: Cone,
    pub provenance: Provenance,
}

impl ConePiece {
    pub fn key(&self) -> String {
        self.set.canonical_key()
    }
}

/// Assembles the graph-space piece for one (direction, multiplier, index
/// pair) choice: first block w* plus the weighted-Hessian image of w lies in
/// the chosen polar, second block w lies in the directional face cone.
pub fn normal_piece(
    p: &ProblemData,
    v: &[Rat],
    lambda: &[Rat],
    iplus: &IndexSet,
    iset: &IndexSet,
    variant: PieceVariant,
    origin: Origin,
) -> ConePiece {
    let vopt = if is_zero_vec(v) { None } else { Some(v) };
    let kc = face_cone(p, iplus, iset, vopt);
    let polar = match variant {
        PieceVariant::Full => kc.polar(),
        PieceVariant::GradientImage => gradient_image_cone(p, iplus, iset),
    };
    let h_lambda = p.weighted_hessian(lambda);
    let dim = 2 * p.m;
    let mut eq: Vec<RatVec> = Vec::new();
    let mut ineq: Vec<RatVec> = Vec::new();
    for r in kc.eq_rows() {
        let mut row = zero_vec(dim);
        row[p.m..].clone_from_slice(r);
        eq.push(row);
    }
    for r in kc.ineq_rows() {
        let mut row = zero_vec(dim);
        row[p.m..].clone_from_slice(r);
        ineq.push(row);
    }
    // rows of the polar applied to w* + H(lambda) w
    for (rows, target) in [(polar.eq_rows(), &mut eq), (polar.ineq_rows(), &mut ineq)] {
        for c in rows {
            let mut row = zero_vec(dim);
            row[..p.m].clone_from_slice(c);
            let hw = h_lambda.mat_vec(c); // symmetric: c^T H as a vector
            row[p.m..].clone_from_slice(&hw);
            target.push(row);
        }
    }
    ConePiece {
        set: Cone::from_h(dim, eq, ineq),
        provenance: Provenance {
            origin,
            ray: Some(v.to_vec()),
            lambda: Some(lambda.to_vec()),
            iplus: Some(iplus.clone()),
            iset: Some(iset.clone()),
        },
    }
}

/// Directions w compatible with every directional multiplier: the critical
/// cone cut by the curvature equations generated by differences of the
/// directional multiplier set (vertex differences, rays and lineality).
pub fn compatible_w_cone(
    p: &ProblemData,
    kbar: &Cone,
    lambda_v: &Polyhedron,
    v: &[Rat],
) -> Cone {
    let mut eq_rows: Vec<RatVec> = Vec::new();
    let push_diff = |d: &RatVec, eq_rows: &mut Vec<RatVec>| {
        let c = p.weighted_hessian(d).mat_vec(v);
        if !is_zero_vec(&c) {
            eq_rows.push(c);
        }
    };
    let pts = lambda_v.points();
    if let Some(first) = pts.first() {
        for other in &pts[1..] {
            push_diff(&crate::exact::sub_vec(other, first), &mut eq_rows);
        }
    }
    for r in lambda_v.rays() {
        push_diff(r, &mut eq_rows);
    }
    for l in lambda_v.lineality() {
        push_diff(l, &mut eq_rows);
    }
    let cutter = Cone::from_h(p.m, eq_rows, Vec::new());
    kbar.intersect(&cutter)
}

/// The polyhedron of admissible shifted normals at a fixed w: images of the
/// extreme-multiplier hull under lambda -> -H(lambda) w, plus the polar of
/// the critical cone. Full space when the critical cone is trivial.
pub fn shifted_normal_set(
    p: &ProblemData,
    kbar: &Cone,
    lambda_hull: &Polyhedron,
    w: &[Rat],
) -> Result<Polyhedron> {
    if kbar.is_trivial() {
        return Ok(Polyhedron::from_h(p.m, Vec::new(), Vec::new()));
    }
    if !lambda_hull.rays().is_empty() || !lambda_hull.lineality().is_empty() {
        return Err(Error::Internal(
            "extreme-multiplier hull must be a polytope".to_string(),
        ));
    }
    let polar = kbar.polar();
    let points: Vec<RatVec> = lambda_hull
        .points()
        .iter()
        .map(|lambda| crate::exact::neg_vec(&p.weighted_hessian(lambda).mat_vec(w)))
        .collect();
    Ok(Polyhedron::from_v(
        p.m,
        points,
        polar.rays().to_vec(),
        polar.lineality().to_vec(),
    ))
}

/// Normal cone to the critical cone at one of its points: the polar cut by
/// orthogonality to the point.
pub fn normal_cone_at(kbar: &Cone, v: &[Rat]) -> Result<Cone> {
    if !kbar.member(v) {
        return Err(Error::DirectionNotInCone);
    }
    let polar = kbar.polar();
    if is_zero_vec(v) {
        return Ok(polar);
    }
    Ok(polar.intersect(&Cone::from_h(kbar.ambient_dim(), vec![v.to_vec()], Vec::new())))
}
