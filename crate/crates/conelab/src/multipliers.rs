//! Multiplier polyhedra: the full multiplier set, its extreme points,
//! directional multiplier sets, probe-ray unions, and the stratified
//! enumeration of multiplier/derivative pairs compatible with a direction.

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{
    dot, is_zero_vec, one_norm, rank, rat, solve_linear, zero_vec, Rat, RatMat, RatVec,
};
use crate::model::{active_dir, multiplier_polyhedron, IndexSet, ProblemData};
use crate::polyhedra::{Cone, Polyhedron};
use crate::simplex::{lp_solve, optimal_face, LpOutcome};

/// The multiplier polyhedron together with its enumerated extreme points.
#[derive(Clone, Debug)]
pub struct MultiplierSet {
    pub poly: Polyhedron,
    /// extreme points with their positive-support index sets
    pub extreme_points: Vec<(RatVec, IndexSet)>,
}

impl MultiplierSet {
    /// Convex hull of the extreme points (a polytope).
    pub fn hull_of_extremes(&self, l: usize) -> Polyhedron {
        Polyhedron::from_v(
            l,
            self.extreme_points.iter().map(|(p, _)| p.clone()).collect(),
            Vec::new(),
            Vec::new(),
        )
    }
}

pub fn positive_support(lambda: &[Rat]) -> IndexSet {
    lambda
        .iter()
        .enumerate()
        .filter(|(_, x)| x.is_positive())
        .map(|(i, _)| i)
        .collect()
}

/// Enumerates the multiplier polyhedron and its extreme points; every listed
/// extreme point is re-verified by the linear-independence rank test on its
/// support gradients.
pub fn lambda_set(p: &ProblemData) -> Result<MultiplierSet> {
    let poly = multiplier_polyhedron(p);
    let mut extreme_points = Vec::new();
    for pt in poly.points() {
        let support = positive_support(pt);
        let rows: Vec<RatVec> = support.iter().map(|&i| p.grad.row(i).to_vec()).collect();
        if !rows.is_empty() && rank(&RatMat::from_rows(rows)) != support.len() {
            return Err(Error::Internal(
                "vertex of the multiplier polyhedron fails the independence test".to_string(),
            ));
        }
        extreme_points.push((pt.clone(), support));
    }
    Ok(MultiplierSet {
        poly,
        extreme_points,
    })
}

/// Coefficients of the curvature objective lambda -> v^T H(lambda) v.
pub fn curvature_coeffs(p: &ProblemData, v: &[Rat]) -> RatVec {
    p.hess.iter().map(|h| dot(&h.mat_vec(v), v)).collect()
}

/// Directional multiplier set: the argmax face of the curvature objective
/// over the multiplier polyhedron, plus its restriction to the hull of the
/// extreme points. Errors with `LpUnbounded` when the objective is unbounded
/// above along a recession direction.
pub fn directional_lambda(
    p: &ProblemData,
    ms: &MultiplierSet,
    v: &[Rat],
) -> Result<(Polyhedron, Polyhedron)> {
    active_dir(p, v)?;
    let d = curvature_coeffs(p, v);
    let neg: RatVec = d.iter().map(|x| -x).collect();
    let lambda_v = match lp_solve(&neg, &ms.poly)? {
        LpOutcome::Optimal { .. } => optimal_face(&neg, &ms.poly)?,
        LpOutcome::Unbounded { .. } => return Err(Error::LpUnbounded),
        LpOutcome::Infeasible => return Err(Error::LpInfeasible),
    };
    let hull = ms.hull_of_extremes(p.l);
    let lambda_e = lambda_v.intersect(&hull);
    Ok((lambda_v, lambda_e))
}

/// Probe rays drawn from the faces of a cone, with the face structure kept
/// for constancy checks on faces of dimension two or more.
#[derive(Clone, Debug)]
pub struct ProbeSet {
    pub rays: Vec<RatVec>,
    /// faces of dimension >= 2 with three distinct relative-interior samples
    pub wide_faces: Vec<(Cone, Vec<RatVec>)>,
    /// true when the rays were produced by full face enumeration of the cone
    pub enumerated: bool,
}

impl ProbeSet {
    pub fn from_cone(c: &Cone, extra: &[RatVec]) -> ProbeSet {
        let mut rays: Vec<RatVec> = Vec::new();
        let mut wide_faces = Vec::new();
        for (face, sample) in c.faces_with_samples() {
            if is_zero_vec(&sample) {
                continue;
            }
            if !rays.contains(&sample) {
                rays.push(sample.clone());
            }
            if face.cone_dim() >= 2 {
                wide_faces.push((face.clone(), face.interior_samples(3)));
            }
        }
        for e in extra {
            if !is_zero_vec(e) && c.member(e) && !rays.contains(e) {
                rays.push(e.clone());
            }
        }
        ProbeSet {
            rays,
            wide_faces,
            enumerated: true,
        }
    }

    pub fn from_rays(rays: Vec<RatVec>) -> ProbeSet {
        ProbeSet {
            rays,
            wide_faces: Vec::new(),
            enumerated: false,
        }
    }
}

/// Completeness of a probe-based union.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coverage {
    Certified,
    Unknown(String),
}

/// Directional extreme-multiplier hull: for a nonzero direction this is the
/// directional set intersected with the hull of extreme points; for the zero
/// direction it is the convex hull of those sets over the probe rays of the
/// critical cone, with a coverage verdict from the per-face constancy check.
pub fn lambda_tilde(
    p: &ProblemData,
    ms: &MultiplierSet,
    kbar: &Cone,
    v: &[Rat],
    probes: &ProbeSet,
) -> Result<(Polyhedron, Coverage)> {
    if !is_zero_vec(v) {
        let (_, le) = directional_lambda(p, ms, v)?;
        return Ok((le, Coverage::Certified));
    }
    if kbar.is_trivial() {
        return Err(Error::EmptyCriticalCone);
    }
    let mut vertices: Vec<RatVec> = Vec::new();
    for u in &probes.rays {
        let (_, le) = directional_lambda(p, ms, u)?;
        if !le.rays().is_empty() || !le.lineality().is_empty() {
            return Err(Error::Internal(
                "extreme-multiplier restriction is unbounded".to_string(),
            ));
        }
        for pt in le.points() {
            if !vertices.contains(pt) {
                vertices.push(pt.clone());
            }
        }
    }
    let hull = Polyhedron::from_v(p.l, vertices, Vec::new(), Vec::new());
    let mut coverage = if probes.enumerated {
        Coverage::Certified
    } else {
        Coverage::Unknown("probe rays supplied without face enumeration".to_string())
    };
    // faces of dimension >= 2 must show constant extreme-multiplier data
    for (_, samples) in &probes.wide_faces {
        let mut first: Option<Polyhedron> = None;
        for s in samples {
            let (_, le) = directional_lambda(p, ms, s)?;
            match &first {
                None => first = Some(le),
                Some(f) => {
                    if !f.equal(&le) {
                        coverage = Coverage::Unknown(
                            "extreme multipliers vary inside a face of dimension >= 2"
                                .to_string(),
                        );
                    }
                }
            }
        }
    }
    Ok((hull, coverage))
}

/// Specification of the normal-rate vector in a stratum system.
pub enum VstarSpec<'a> {
    /// fixed right-hand side
    Fixed(&'a [Rat]),
    /// free variable constrained to the given polyhedron (admissibility)
    FreeIn(&'a Polyhedron),
}

/// One support-pattern stratum of the multiplier/derivative pairs compatible
/// with a direction: multipliers from the directional set with positive
/// support exactly `lambda_support`, paired with derivative vectors `mu` in
/// the tangent cone to the multiplier orthant, whose positive entries off the
/// support are exactly `mu_positive`.
#[derive(Clone, Debug)]
pub struct MultiplierStratum {
    /// the effective index pattern: lambda support plus positive mu entries
    pub pattern: IndexSet,
    pub lambda_support: IndexSet,
    pub mu_positive: IndexSet,
    pub witness_lambda: RatVec,
    pub witness_mu: RatVec,
    /// closed stratum in (lambda, mu [, vstar]) coordinates
    pub stratum: Polyhedron,
    pub lambda_unique: bool,
    /// vertices of the lambda-projection; the emission set for pieces
    pub lambda_vertices: Vec<RatVec>,
}

/// Enumerates all nonempty support-pattern strata of the set of pairs
/// (lambda, mu) with lambda in `lambda_poly`, mu in the tangent cone of the
/// multiplier orthant at lambda, and
///   vstar = H(lambda) v + grad^T mu.
///
/// Emitted strata carry inclusion-minimal patterns: a stratum is dropped only
/// when another stratum has a subset pattern AND a lambda-projection
/// containing this one's, so no piece data is lost by pruning.
pub fn multiplier_strata(
    p: &ProblemData,
    lambda_poly: &Polyhedron,
    v: &[Rat],
    vstar: VstarSpec<'_>,
    max_enum: usize,
) -> Result<Vec<MultiplierStratum>> {
    if lambda_poly.is_empty() {
        return Ok(Vec::new());
    }
    let l = p.l;
    let m = p.m;
    let free_vstar = matches!(vstar, VstarSpec::FreeIn(_));
    let dim = 2 * l + if free_vstar { m } else { 0 };
    let active: Vec<usize> = p.active_indices();
    let n_active = active.len();

    // rows shared by every stratum
    let mut base_eq: Vec<(RatVec, Rat)> = Vec::new();
    let mut base_ineq: Vec<(RatVec, Rat)> = Vec::new();
    for (row, rhs) in lambda_poly.eq_rows() {
        let mut r = zero_vec(dim);
        r[..l].clone_from_slice(row);
        base_eq.push((r, rhs.clone()));
    }
    for (row, rhs) in lambda_poly.ineq_rows() {
        let mut r = zero_vec(dim);
        r[..l].clone_from_slice(row);
        base_ineq.push((r, rhs.clone()));
    }
    // mu_i = 0 off the active set
    for i in 0..l {
        if !p.active.contains(&i) {
            let mut r = zero_vec(dim);
            r[l + i] = rat(1);
            base_eq.push((r, Rat::zero()));
        }
    }
    // vstar = H(lambda) v + grad^T mu, one row per decision coordinate:
    //   sum_i (H_i v)_j lambda_i + sum_i grad_{i,j} mu_i  (- vstar_j) = rhs
    let hv: Vec<RatVec> = p.hess.iter().map(|h| h.mat_vec(v)).collect();
    for j in 0..m {
        let mut r = zero_vec(dim);
        for i in 0..l {
            r[i] = hv[i][j].clone();
            r[l + i] = p.grad.get(i, j).clone();
        }
        let rhs = match &vstar {
            VstarSpec::Fixed(vs) => vs[j].clone(),
            VstarSpec::FreeIn(_) => {
                r[2 * l + j] = rat(-1);
                Rat::zero()
            }
        };
        base_eq.push((r, rhs));
    }
    if let VstarSpec::FreeIn(adm) = &vstar {
        for (row, rhs) in adm.eq_rows() {
            let mut r = zero_vec(dim);
            r[2 * l..].clone_from_slice(row);
            base_eq.push((r, rhs.clone()));
        }
        for (row, rhs) in adm.ineq_rows() {
            let mut r = zero_vec(dim);
            r[2 * l..].clone_from_slice(row);
            base_ineq.push((r, rhs.clone()));
        }
    }

    // enumerate (lambda-support S, positive-mu set T) with S, T disjoint
    let mut raw: Vec<MultiplierStratum> = Vec::new();
    let mut visited = 0usize;
    for smask in 0..(1u32 << n_active) {
        for tmask in 0..(1u32 << n_active) {
            if smask & tmask != 0 {
                continue;
            }
            visited += 1;
            if visited > max_enum {
                return Err(Error::EnumerationCap {
                    cap: max_enum,
                    what: "multiplier support patterns",
                });
            }
            let s_set: IndexSet = active
                .iter()
                .enumerate()
                .filter(|(k, _)| smask & (1 << k) != 0)
                .map(|(_, &i)| i)
                .collect();
            let t_set: IndexSet = active
                .iter()
                .enumerate()
                .filter(|(k, _)| tmask & (1 << k) != 0)
                .map(|(_, &i)| i)
                .collect();

            let mut eq = base_eq.clone();
            let mut ineq = base_ineq.clone();
            let mut strict: Vec<usize> = Vec::new(); // variable indexes required > 0
            for &i in &active {
                if s_set.contains(&i) {
                    strict.push(i);
                    let mut r = zero_vec(dim);
                    r[i] = rat(-1);
                    ineq.push((r, Rat::zero()));
                } else {
                    let mut r = zero_vec(dim);
                    r[i] = rat(1);
                    eq.push((r, Rat::zero()));
                    // mu sign structure applies where lambda_i = 0
                    if t_set.contains(&i) {
                        strict.push(l + i);
                        let mut rr = zero_vec(dim);
                        rr[l + i] = rat(-1);
                        ineq.push((rr, Rat::zero()));
                    } else {
                        let mut rr = zero_vec(dim);
                        rr[l + i] = rat(1);
                        eq.push((rr, Rat::zero()));
                    }
                }
            }

            let Some(witness) = strict_feasible_point(dim, &eq, &ineq, &strict)? else {
                continue;
            };
            let stratum = Polyhedron::from_h(dim, eq, ineq);
            let lambda_proj = stratum.project(&(0..l).collect::<Vec<_>>());
            let lambda_unique = lambda_proj.is_single_point().is_some();
            let lambda_vertices = lambda_proj.points().to_vec();
            let mut pattern = s_set.clone();
            pattern.extend(t_set.iter().copied());
            raw.push(MultiplierStratum {
                pattern,
                lambda_support: s_set,
                mu_positive: t_set,
                witness_lambda: witness[..l].to_vec(),
                witness_mu: witness[l..2 * l].to_vec(),
                stratum,
                lambda_unique,
                lambda_vertices,
            });
        }
    }

    // minimal-pattern pruning, sound w.r.t. lambda data
    let mut keep = vec![true; raw.len()];
    for b in 0..raw.len() {
        for a in 0..raw.len() {
            if a == b || !keep[a] {
                continue;
            }
            if raw[a].pattern.is_subset(&raw[b].pattern)
                && raw[a].pattern != raw[b].pattern
                && lambda_proj_contains(&raw[a], &raw[b])
            {
                keep[b] = false;
                break;
            }
        }
    }
    let mut out: Vec<MultiplierStratum> = raw
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(s, _)| s)
        .collect();
    out.sort_by_key(|s| {
        (
            s.pattern.len(),
            s.pattern.iter().copied().collect::<Vec<_>>(),
            s.lambda_support.iter().copied().collect::<Vec<_>>(),
        )
    });
    Ok(out)
}

fn lambda_proj_contains(a: &MultiplierStratum, b: &MultiplierStratum) -> bool {
    let l = a.witness_lambda.len();
    let coords: Vec<usize> = (0..l).collect();
    let pa = a.stratum.project(&coords);
    let pb = b.stratum.project(&coords);
    pb.points().iter().all(|pt| pa.contains(pt))
        && pb.rays().iter().all(|r| pa.recession_contains(r))
        && pb.lineality().iter().all(|r| {
            pa.recession_contains(r) && pa.recession_contains(&crate::exact::neg_vec(r))
        })
}

/// Maximizes a slack t <= 1 below every variable listed in `strict`; a
/// positive optimum certifies strict feasibility and yields the witness.
fn strict_feasible_point(
    dim: usize,
    eq: &[(RatVec, Rat)],
    ineq: &[(RatVec, Rat)],
    strict: &[usize],
) -> Result<Option<RatVec>> {
    let tdim = dim + 1;
    let eq2: Vec<(RatVec, Rat)> = eq
        .iter()
        .map(|(r, b)| {
            let mut rr = r.clone();
            rr.push(Rat::zero());
            (rr, b.clone())
        })
        .collect();
    let mut ineq2: Vec<(RatVec, Rat)> = ineq
        .iter()
        .map(|(r, b)| {
            let mut rr = r.clone();
            rr.push(Rat::zero());
            (rr, b.clone())
        })
        .collect();
    let mut tcap = zero_vec(tdim);
    tcap[dim] = rat(1);
    ineq2.push((tcap, rat(1)));
    let mut tpos = zero_vec(tdim);
    tpos[dim] = rat(-1);
    ineq2.push((tpos, Rat::zero()));
    for &i in strict {
        // t - x_i <= 0
        let mut r = zero_vec(tdim);
        r[dim] = rat(1);
        r[i] = rat(-1);
        ineq2.push((r, Rat::zero()));
    }
    let poly = Polyhedron::from_h(tdim, eq2, ineq2);
    let mut objective = zero_vec(tdim);
    objective[dim] = rat(-1);
    match lp_solve(&objective, &poly)? {
        LpOutcome::Optimal { value, point, .. } => {
            if (-value).is_positive() {
                Ok(Some(point[..dim].to_vec()))
            } else {
                Ok(None)
            }
        }
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded { .. } => Err(Error::Internal(
            "slack maximization cannot be unbounded".to_string(),
        )),
    }
}

/// Instance constant for the extreme-point norm bound: the largest ratio
/// |lambda|_1 / |ystar|_1 over exact solutions on independent gradient
/// subsets of the active set. Returns None when ystar = 0.
pub fn extreme_point_bound(p: &ProblemData) -> Option<Rat> {
    let ystar_norm = one_norm(&p.ystar);
    if ystar_norm.is_zero() {
        return None;
    }
    let active = p.active_indices();
    let mut best: Option<Rat> = None;
    for mask in 1u32..(1 << active.len()) {
        let subset: Vec<usize> = active
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) != 0)
            .map(|(_, &i)| i)
            .collect();
        let rows: Vec<RatVec> = subset.iter().map(|&i| p.grad.row(i).to_vec()).collect();
        let gm = RatMat::from_rows(rows);
        if rank(&gm) != subset.len() {
            continue;
        }
        // solve grad_S^T x = ystar over the subset coordinates
        if let Ok(Some(x)) = solve_linear(&gm.transpose(), &p.ystar) {
            let ratio = one_norm(&x) / &ystar_norm;
            best = Some(match best {
                None => ratio,
                Some(b) if ratio > b => ratio,
                Some(b) => b,
            });
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::vec_from_i64;
    use crate::model::fixtures::*;
    use crate::model::{geometry, index_set};

    fn v(entries: &[i64]) -> RatVec {
        vec_from_i64(entries)
    }

    #[test]
    fn fixture_a_multiplier_set() {
        let p = fixture_a();
        let ms = lambda_set(&p).unwrap();
        assert_eq!(ms.extreme_points.len(), 1);
        assert_eq!(ms.extreme_points[0].0, v(&[1, 0]));
        assert_eq!(ms.extreme_points[0].1, index_set(&[0]));
        // recession ray (1,1)
        assert_eq!(ms.poly.rays(), &[v(&[1, 1])]);
    }

    #[test]
    fn fixture_b_multiplier_set() {
        let p = fixture_b();
        let ms = lambda_set(&p).unwrap();
        assert!(ms.poly.contains(&v(&[1, 0, 0])));
        assert!(ms.poly.contains(&v(&[2, 1, 0])));
        assert!(!ms.poly.contains(&v(&[1, 0, 1])));
        assert_eq!(ms.extreme_points.len(), 1);
        assert_eq!(ms.extreme_points[0].0, v(&[1, 0, 0]));
    }

    #[test]
    fn fixture_c_singleton_multiplier() {
        let p = fixture_c();
        let ms = lambda_set(&p).unwrap();
        assert_eq!(ms.poly.is_single_point(), Some(v(&[1, 0])));
    }

    #[test]
    fn directional_multipliers_fixture_a() {
        let p = fixture_a();
        let ms = lambda_set(&p).unwrap();
        let (lv, le) = directional_lambda(&p, &ms, &v(&[-1, 0])).unwrap();
        assert_eq!(lv.is_single_point(), Some(v(&[1, 0])));
        assert_eq!(le.is_single_point(), Some(v(&[1, 0])));
        // zero direction: objective vanishes, the whole multiplier set remains
        let (l0, _) = directional_lambda(&p, &ms, &v(&[0, 0])).unwrap();
        assert!(l0.equal(&ms.poly));
    }

    #[test]
    fn directional_multipliers_fixture_b() {
        let p = fixture_b();
        let ms = lambda_set(&p).unwrap();
        let (lv, _) = directional_lambda(&p, &ms, &v(&[-1, 0])).unwrap();
        assert_eq!(lv.is_single_point(), Some(v(&[1, 0, 0])));
    }

    #[test]
    fn directional_argmax_scale_invariant() {
        let p = fixture_a();
        let ms = lambda_set(&p).unwrap();
        let (a, _) = directional_lambda(&p, &ms, &v(&[-1, 0])).unwrap();
        let (b, _) = directional_lambda(&p, &ms, &v(&[-3, 0])).unwrap();
        assert!(a.equal(&b));
    }

    #[test]
    fn lambda_tilde_zero_direction() {
        let p = fixture_a();
        let ms = lambda_set(&p).unwrap();
        let g = geometry(&p);
        let probes = ProbeSet::from_cone(&g.kbar, &[]);
        let (hull, cov) = lambda_tilde(&p, &ms, &g.kbar, &v(&[0, 0]), &probes).unwrap();
        assert_eq!(hull.is_single_point(), Some(v(&[1, 0])));
        assert_eq!(cov, Coverage::Certified);
        // nonzero direction falls back to the directional set
        let (h2, _) = lambda_tilde(&p, &ms, &g.kbar, &v(&[1, 0]), &probes).unwrap();
        assert_eq!(h2.is_single_point(), Some(v(&[1, 0])));
    }

    #[test]
    fn lambda_tilde_requires_nontrivial_critical_cone() {
        let p = fixture_c();
        let ms = lambda_set(&p).unwrap();
        let trivial = Cone::zero(2);
        let probes = ProbeSet::from_rays(vec![]);
        assert!(matches!(
            lambda_tilde(&p, &ms, &trivial, &v(&[0, 0]), &probes),
            Err(Error::EmptyCriticalCone)
        ));
    }

    #[test]
    fn strata_fixture_a_specific_vstar() {
        let p = fixture_a();
        let ms = lambda_set(&p).unwrap();
        let dir = v(&[-1, 0]);
        let (lv, _) = directional_lambda(&p, &ms, &dir).unwrap();
        for c in [-3i64, 0, 5] {
            let vstar = v(&[2, c]);
            let strata =
                multiplier_strata(&p, &lv, &dir, VstarSpec::Fixed(&vstar), 4096).unwrap();
            assert_eq!(strata.len(), 1, "c = {c}");
            let s = &strata[0];
            assert_eq!(s.pattern, index_set(&[0]));
            assert!(s.lambda_unique);
            assert_eq!(s.witness_lambda, v(&[1, 0]));
            assert_eq!(s.witness_mu, v(&[c, 0]));
        }
    }

    #[test]
    fn strata_fixture_a_inadmissible_vstar() {
        // first component of vstar is forced to 2 along v = (-1, 0)
        let p = fixture_a();
        let ms = lambda_set(&p).unwrap();
        let dir = v(&[-1, 0]);
        let (lv, _) = directional_lambda(&p, &ms, &dir).unwrap();
        let vstar = v(&[1, 0]);
        let strata = multiplier_strata(&p, &lv, &dir, VstarSpec::Fixed(&vstar), 4096).unwrap();
        assert!(strata.is_empty());
    }

    #[test]
    fn strata_fixture_b_zero_direction_positive_first_component() {
        // vstar = (1, 0): mu_3 = 1 > 0 is forced, so every pattern contains
        // constraints 1 and 3
        let p = fixture_b();
        let ms = lambda_set(&p).unwrap();
        let zero = v(&[0, 0]);
        let (l0, _) = directional_lambda(&p, &ms, &zero).unwrap();
        let vstar = v(&[1, 0]);
        let strata = multiplier_strata(&p, &l0, &zero, VstarSpec::Fixed(&vstar), 4096).unwrap();
        assert!(!strata.is_empty());
        for s in &strata {
            assert!(s.pattern.contains(&0) && s.pattern.contains(&2), "{:?}", s.pattern);
        }
    }

    #[test]
    fn stratum_witnesses_resubstitute() {
        let p = fixture_b();
        let ms = lambda_set(&p).unwrap();
        let dir = v(&[-1, 0]);
        let (lv, _) = directional_lambda(&p, &ms, &dir).unwrap();
        let vstar = v(&[2, -1]);
        let strata = multiplier_strata(&p, &lv, &dir, VstarSpec::Fixed(&vstar), 4096).unwrap();
        assert!(!strata.is_empty());
        for s in &strata {
            let lhs = crate::exact::add_vec(
                &p.weighted_hessian(&s.witness_lambda).mat_vec(&dir),
                &p.combine_gradients(&s.witness_mu),
            );
            assert_eq!(lhs, vstar);
            // witness mu obeys the tangent-cone sign structure
            for i in 0..p.l {
                if !p.active.contains(&i) {
                    assert!(s.witness_mu[i].is_zero());
                } else if s.witness_lambda[i].is_zero() {
                    assert!(!s.witness_mu[i].is_negative());
                }
            }
        }
    }

    #[test]
    fn extreme_point_bound_holds() {
        for p in [fixture_a(), fixture_b(), fixture_c(), fixture_d()] {
            let ms = lambda_set(&p).unwrap();
            let kappa = extreme_point_bound(&p).unwrap();
            let ystar_norm = one_norm(&p.ystar);
            for (pt, _) in &ms.extreme_points {
                assert!(one_norm(pt) <= &kappa * &ystar_norm);
            }
        }
    }
}
