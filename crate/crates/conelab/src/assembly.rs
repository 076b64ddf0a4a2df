//! Assembly of the graph-space objects: tangent cone union, regular normal
//! cone, directional limiting cones, the two zero-direction estimates, the
//! closed form under LICQ, and the two-sided full limiting cone.

use num::Zero;

use crate::cones::{
    compatible_w_cone, face_cone, gradient_image_cone, jfamily, normal_cone_at, normal_piece,
    ConePiece, JFamily, Origin, PieceVariant, Provenance,
};
use crate::error::{Error, Result};
use crate::exact::{is_zero_vec, zero_vec, Rat, RatVec};
use crate::model::{geometry, Geometry, IndexSet, ProblemData};
use crate::multipliers::{
    directional_lambda, lambda_set, lambda_tilde, multiplier_strata, Coverage, MultiplierSet,
    MultiplierStratum, ProbeSet, VstarSpec,
};
use crate::par::map_collect;
use crate::polyhedra::{Cone, Polyhedron};
use crate::regularity::{classic_cq, soscms, two_licq, Verdict};

/// Completeness verdict of an assembled union.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Completeness {
    Exact,
    LowerEstimate,
    UpperEstimate,
    Unknown(String),
}

impl Completeness {
    pub fn label(&self) -> String {
        match self {
            Completeness::Exact => "Exact".to_string(),
            Completeness::LowerEstimate => "LowerEstimate".to_string(),
            Completeness::UpperEstimate => "UpperEstimate".to_string(),
            Completeness::Unknown(r) => format!("Unknown({r})"),
        }
    }
}

/// Finite union of polyhedral pieces with a completeness verdict and the log
/// of hypotheses it consumed.
#[derive(Clone, Debug)]
pub struct ConeUnion {
    pub pieces: Vec<ConePiece>,
    pub completeness: Completeness,
    pub hypotheses: Vec<(String, String)>,
}

impl ConeUnion {
    pub fn new(completeness: Completeness) -> ConeUnion {
        ConeUnion {
            pieces: Vec::new(),
            completeness,
            hypotheses: Vec::new(),
        }
    }

    /// Inserts a piece unless an identical set is already present.
    pub fn push(&mut self, piece: ConePiece) {
        let key = piece.key();
        if !self.pieces.iter().any(|p| p.key() == key) {
            self.pieces.push(piece);
        }
    }

    pub fn extend(&mut self, pieces: Vec<ConePiece>) {
        for p in pieces {
            self.push(p);
        }
    }

    pub fn log(&mut self, name: &str, value: String) {
        self.hypotheses.push((name.to_string(), value));
    }

    pub fn member(&self, x: &[Rat]) -> bool {
        self.pieces.iter().any(|p| p.set.member(x))
    }

    /// Every generator of every piece of `other` lies in some piece of self.
    pub fn contains_generators_of(&self, other: &ConeUnion) -> bool {
        other
            .pieces
            .iter()
            .all(|p| p.set.generators().iter().all(|g| self.member(g)))
    }

    pub fn is_empty_union(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Deterministic report order.
    pub fn sorted(mut self) -> ConeUnion {
        self.pieces.sort_by_key(|p| p.key());
        self
    }
}

/// Standing-assumption switches supplied by the user.
#[derive(Clone, Copy, Debug, Default)]
pub struct Assumptions {
    pub subregular: bool,
    pub vicinity: bool,
}

/// Certified hypotheses for the reference instance.
#[derive(Clone, Debug)]
pub struct Hypotheses {
    pub licq: bool,
    pub mfcq: bool,
    pub soscms: Verdict,
    pub subregular: Verdict,
    pub subregular_source: String,
    pub vicinity: Verdict,
    pub vicinity_source: String,
}

pub fn certify(p: &ProblemData, assume: Assumptions) -> Hypotheses {
    let (licq, mfcq) = classic_cq(p);
    let sos = soscms(p);
    let derive = |assumed: bool, what: &str| -> (Verdict, String) {
        if assumed {
            (Verdict::Proven, format!("{what} assumed by the user"))
        } else if sos.is_proven() {
            (
                Verdict::Proven,
                "second-order certificate (implies both)".to_string(),
            )
        } else {
            (
                Verdict::Unknown {
                    reason: format!("{what} not certified: {}", sos.label()),
                },
                "second-order certificate failed".to_string(),
            )
        }
    };
    let (subregular, subregular_source) = derive(assume.subregular, "metric subregularity");
    let (vicinity, vicinity_source) = derive(assume.vicinity, "regularity in the vicinity");
    Hypotheses {
        licq,
        mfcq,
        soscms: sos,
        subregular,
        subregular_source,
        vicinity,
        vicinity_source,
    }
}

/// One fully prepared analysis instance.
pub struct Analysis {
    pub problem: ProblemData,
    pub geom: Geometry,
    pub multipliers: MultiplierSet,
    pub hyps: Hypotheses,
    /// probe rays over the critical cone (face samples plus user extras)
    pub probes: ProbeSet,
    /// probe rays over the gradient null space
    pub nullspace_probes: ProbeSet,
    pub max_enum: usize,
}

impl Analysis {
    pub fn new(
        problem: ProblemData,
        assume: Assumptions,
        user_probes: &[RatVec],
        max_enum: usize,
    ) -> Result<Analysis> {
        let geom = geometry(&problem);
        let multipliers = lambda_set(&problem)?;
        let hyps = certify(&problem, assume);
        let probes = ProbeSet::from_cone(&geom.kbar, user_probes);
        let nullspace_probes = ProbeSet::from_cone(&geom.nullspace, &[]);
        Ok(Analysis {
            problem,
            geom,
            multipliers,
            hyps,
            probes,
            nullspace_probes,
            max_enum,
        })
    }

    fn p(&self) -> &ProblemData {
        &self.problem
    }

    fn dim2(&self) -> usize {
        2 * self.problem.m
    }

    /// The polar of the critical cone as a polyhedron (admissible normal
    /// rates at the zero direction).
    fn kbar_polar_poly(&self) -> Polyhedron {
        cone_as_polyhedron(&self.geom.kbar.polar())
    }
}

pub fn cone_as_polyhedron(c: &Cone) -> Polyhedron {
    Polyhedron::from_h(
        c.ambient_dim(),
        c.eq_rows().iter().map(|r| (r.clone(), Rat::zero())).collect(),
        c.ineq_rows().iter().map(|r| (r.clone(), Rat::zero())).collect(),
    )
}

// ---------------------------------------------------------------------------
// Tangent cone
// ---------------------------------------------------------------------------

/// Admissible normal rates over one direction: the image of the directional
/// multiplier set under the weighted-Hessian pairing, plus the normal cone to
/// the critical cone at the direction. Empty off the critical cone.
pub fn tangent_piece(a: &Analysis, v: &[Rat]) -> Result<Polyhedron> {
    let p = a.p();
    if !a.geom.kbar.member(v) {
        return Ok(Polyhedron::empty(p.m));
    }
    let (lambda_v, _) = directional_lambda(p, &a.multipliers, v)?;
    let ncone = normal_cone_at(&a.geom.kbar, v)?;
    let points: Vec<RatVec> = lambda_v
        .points()
        .iter()
        .map(|lam| p.weighted_hessian(lam).mat_vec(v))
        .collect();
    let mut rays: Vec<RatVec> = lambda_v
        .rays()
        .iter()
        .map(|r| p.weighted_hessian(r).mat_vec(v))
        .filter(|r| !is_zero_vec(r))
        .collect();
    rays.extend(ncone.rays().iter().cloned());
    let mut lineality: Vec<RatVec> = lambda_v
        .lineality()
        .iter()
        .map(|r| p.weighted_hessian(r).mat_vec(v))
        .filter(|r| !is_zero_vec(r))
        .collect();
    lineality.extend(ncone.lineality().iter().cloned());
    Ok(Polyhedron::from_v(p.m, points, rays, lineality))
}

/// Graph-space piece over a pointed face of the critical cone: the cone
/// generated by the pairs (g, H(lambda^j) g) over face generators g and
/// directional multiplier vertices lambda^j, plus rate-only recession
/// directions.
fn tangent_face_piece(a: &Analysis, face_gens: &[RatVec], sample: &RatVec) -> Result<ConePiece> {
    let p = a.p();
    let (lambda_v, _) = directional_lambda(p, &a.multipliers, sample)?;
    let ncone = normal_cone_at(&a.geom.kbar, sample)?;
    let dim = a.dim2();
    let mut rays: Vec<RatVec> = Vec::new();
    let mut lineality: Vec<RatVec> = Vec::new();
    for g in face_gens {
        for lam in lambda_v.points() {
            let mut r = zero_vec(dim);
            r[..p.m].clone_from_slice(g);
            r[p.m..].clone_from_slice(&p.weighted_hessian(lam).mat_vec(g));
            rays.push(r);
        }
        for rho in lambda_v.rays() {
            let img = p.weighted_hessian(rho).mat_vec(g);
            if !is_zero_vec(&img) {
                let mut r = zero_vec(dim);
                r[p.m..].clone_from_slice(&img);
                rays.push(r);
            }
        }
    }
    for r0 in ncone.rays() {
        let mut r = zero_vec(dim);
        r[p.m..].clone_from_slice(r0);
        rays.push(r);
    }
    for l0 in ncone.lineality() {
        let mut l = zero_vec(dim);
        l[p.m..].clone_from_slice(l0);
        lineality.push(l);
    }
    Ok(ConePiece {
        set: Cone::from_v(dim, rays, lineality),
        provenance: Provenance {
            origin: Origin::Tangent,
            ray: Some(sample.clone()),
            lambda: None,
            iplus: None,
            iset: None,
        },
    })
}

/// Signature used by the face-constancy checks: the canonical forms of the
/// directional multiplier data at a sample.
fn lambda_signature(a: &Analysis, v: &[Rat]) -> Result<String> {
    let (lv, le) = directional_lambda(a.p(), &a.multipliers, v)?;
    Ok(format!("{}|{}", lv.canonical_key(), le.canonical_key()))
}

/// The tangent cone to the graph as a union over the faces of the critical
/// cone (coordinates (v, v*)).
pub fn tangent_graph(a: &Analysis) -> Result<ConeUnion> {
    let p = a.p();
    let mut union = ConeUnion::new(Completeness::Exact);
    union.log("subregularity", a.hyps.subregular.label());
    union.log("vicinity-regularity", a.hyps.vicinity.label());

    // direction zero: {0} x polar(kbar)
    let polar = a.geom.kbar.polar();
    let dim = a.dim2();
    let zero_piece = ConePiece {
        set: Cone::from_v(
            dim,
            polar
                .rays()
                .iter()
                .map(|r| {
                    let mut x = zero_vec(dim);
                    x[p.m..].clone_from_slice(r);
                    x
                })
                .collect(),
            polar
                .lineality()
                .iter()
                .map(|l| {
                    let mut x = zero_vec(dim);
                    x[p.m..].clone_from_slice(l);
                    x
                })
                .collect(),
        ),
        provenance: Provenance {
            origin: Origin::Tangent,
            ray: Some(zero_vec(p.m)),
            lambda: None,
            iplus: None,
            iset: None,
        },
    };
    union.push(zero_piece);

    let mut coverage_ok = true;
    for (face, sample) in a.geom.kbar.faces_with_samples() {
        if is_zero_vec(&sample) || !face.lineality().is_empty() {
            // the zero face is handled above; faces with lineality are
            // covered by their pointed subdivisions
            continue;
        }
        if face.cone_dim() >= 2 {
            let samples = face.interior_samples(3);
            let sig0 = lambda_signature(a, &samples[0])?;
            for s in &samples[1..] {
                if lambda_signature(a, s)? != sig0 {
                    coverage_ok = false;
                }
            }
        }
        union.push(tangent_face_piece(a, &face.generators(), &sample)?);
    }
    for extra in &a.probes.rays {
        union.push(tangent_face_piece(a, std::slice::from_ref(extra), extra)?);
    }
    union.log(
        "probe-coverage",
        if coverage_ok {
            "certified".to_string()
        } else {
            "face constancy failed".to_string()
        },
    );

    union.completeness = if !a.hyps.subregular.is_proven() {
        Completeness::Unknown("subregularity unresolved".to_string())
    } else if !a.hyps.vicinity.is_proven() {
        Completeness::LowerEstimate
    } else if !coverage_ok {
        Completeness::Unknown("multiplier data varies inside a wide face".to_string())
    } else {
        Completeness::Exact
    };
    Ok(union.sorted())
}

// ---------------------------------------------------------------------------
// Regular normal cone to the graph
// ---------------------------------------------------------------------------

/// Union of the positive supports over the whole multiplier set.
fn union_positive_support(a: &Analysis) -> IndexSet {
    let mut out = IndexSet::new();
    for pt in a.multipliers.poly.points() {
        out.extend(crate::multipliers::positive_support(pt));
    }
    for r in a.multipliers.poly.rays() {
        out.extend(crate::multipliers::positive_support(r));
    }
    out
}

/// Rows forcing w* + H(lambda^j) w into the given cone, one assignment of a
/// multiplier vertex per cone generator row. With a single vertex this is
/// exact; with several it distributes the necessary support conditions.
fn shifted_membership_pieces(
    a: &Analysis,
    target: &Cone,
    lambda_vertices: &[RatVec],
    base_eq: &[RatVec],
    base_ineq: &[RatVec],
) -> Vec<(Vec<RatVec>, Vec<RatVec>)> {
    let p = a.p();
    let dim = a.dim2();
    let row_for = |c: &RatVec, lam: &RatVec| -> RatVec {
        let mut row = zero_vec(dim);
        row[..p.m].clone_from_slice(c);
        row[p.m..].clone_from_slice(&p.weighted_hessian(lam).mat_vec(c));
        row
    };
    if lambda_vertices.len() <= 1 {
        let lam = lambda_vertices
            .first()
            .cloned()
            .unwrap_or_else(|| zero_vec(p.l));
        let mut eq = base_eq.to_vec();
        let mut ineq = base_ineq.to_vec();
        for c in target.eq_rows() {
            eq.push(row_for(c, &lam));
        }
        for c in target.ineq_rows() {
            ineq.push(row_for(c, &lam));
        }
        return vec![(eq, ineq)];
    }
    // generator-wise support conditions: for every generator d of the polar
    // pairing, some vertex satisfies the inequality; distribute choices
    let polar_gens = target.polar().generators();
    let mut systems: Vec<(Vec<RatVec>, Vec<RatVec>)> =
        vec![(base_eq.to_vec(), base_ineq.to_vec())];
    for d in &polar_gens {
        let mut next = Vec::new();
        for (eq, ineq) in &systems {
            for lam in lambda_vertices {
                let mut ineq2 = ineq.clone();
                ineq2.push(row_for(d, lam));
                next.push((eq.clone(), ineq2));
            }
        }
        systems = next;
    }
    systems
}

/// The regular normal cone to the graph. Under LICQ this is the exact closed
/// form; otherwise it is assembled from the compatible-direction cones and
/// shifted-normal sets over the null-space probe directions.
pub fn regular_normal_graph(a: &Analysis) -> Result<ConeUnion> {
    let p = a.p();
    let dim = a.dim2();
    let mut union = ConeUnion::new(Completeness::UpperEstimate);
    union.log("subregularity", a.hyps.subregular.label());
    union.log("vicinity-regularity", a.hyps.vicinity.label());

    if a.hyps.licq {
        let lam = a
            .multipliers
            .poly
            .is_single_point()
            .ok_or_else(|| Error::Internal("unique multiplier expected under LICQ".to_string()))?;
        let mut eq = Vec::new();
        let mut ineq = Vec::new();
        for r in a.geom.kbar.eq_rows() {
            let mut row = zero_vec(dim);
            row[p.m..].clone_from_slice(r);
            eq.push(row);
        }
        for r in a.geom.kbar.ineq_rows() {
            let mut row = zero_vec(dim);
            row[p.m..].clone_from_slice(r);
            ineq.push(row);
        }
        let polar = a.geom.kbar.polar();
        for (rows, target) in [(polar.eq_rows(), &mut eq), (polar.ineq_rows(), &mut ineq)] {
            for c in rows {
                let mut row = zero_vec(dim);
                row[..p.m].clone_from_slice(c);
                row[p.m..].clone_from_slice(&p.weighted_hessian(&lam).mat_vec(c));
                target.push(row);
            }
        }
        union.push(ConePiece {
            set: Cone::from_h(dim, eq, ineq),
            provenance: Provenance {
                origin: Origin::Regular,
                ray: None,
                lambda: Some(lam),
                iplus: None,
                iset: None,
            },
        });
        union.completeness = Completeness::Exact;
        union.log("licq", "holds".to_string());
        return Ok(union.sorted());
    }

    // probe directions: zero plus the null-space face samples
    let mut probes: Vec<RatVec> = vec![zero_vec(p.m)];
    for r in &a.nullspace_probes.rays {
        probes.push(r.clone());
    }

    // per-probe constraint systems; singleton extreme hulls keep this exact
    let mut systems: Vec<(Vec<RatVec>, Vec<RatVec>)> = vec![(Vec::new(), Vec::new())];
    let mut tilde_coverage = Coverage::Certified;
    let kbar_trivial = a.geom.kbar.is_trivial();
    for v in &probes {
        let (lambda_v, _) = directional_lambda(p, &a.multipliers, v)?;
        let wcone = compatible_w_cone(p, &a.geom.kbar, &lambda_v, v);
        let mut base_eq: Vec<RatVec> = Vec::new();
        let mut base_ineq: Vec<RatVec> = Vec::new();
        for r in wcone.eq_rows() {
            let mut row = zero_vec(dim);
            row[p.m..].clone_from_slice(r);
            base_eq.push(row);
        }
        for r in wcone.ineq_rows() {
            let mut row = zero_vec(dim);
            row[p.m..].clone_from_slice(r);
            base_ineq.push(row);
        }
        let lambda_vertices: Vec<RatVec> = if kbar_trivial {
            Vec::new() // rate set is the full space; no rate rows at all
        } else {
            let (hull, cov) = lambda_tilde(p, &a.multipliers, &a.geom.kbar, v, &a.probes)?;
            if cov != Coverage::Certified {
                tilde_coverage = cov.clone();
            }
            hull.points().to_vec()
        };
        let addition: Vec<(Vec<RatVec>, Vec<RatVec>)> = if kbar_trivial {
            vec![(base_eq, base_ineq)]
        } else {
            // w* must lie in {-H(lambda) w} + polar(kbar):
            // polar rows of that set applied to w* + H(lambda) w
            shifted_membership_pieces(a, &a.geom.kbar.polar(), &lambda_vertices, &base_eq, &base_ineq)
        };
        let mut next = Vec::new();
        for (eq0, ineq0) in &systems {
            for (eq1, ineq1) in &addition {
                let mut eq = eq0.clone();
                eq.extend(eq1.iter().cloned());
                let mut ineq = ineq0.clone();
                ineq.extend(ineq1.iter().cloned());
                next.push((eq, ineq));
            }
        }
        systems = next;
        if systems.len() > a.max_enum {
            return Err(Error::EnumerationCap {
                cap: a.max_enum,
                what: "regular normal systems",
            });
        }
    }
    for (eq, ineq) in systems {
        union.push(ConePiece {
            set: Cone::from_h(dim, eq, ineq),
            provenance: Provenance {
                origin: Origin::Regular,
                ray: None,
                lambda: None,
                iplus: None,
                iset: None,
            },
        });
    }

    // equality conditions: constant extreme multipliers across the critical
    // cone, or full positive support
    let support_full = union_positive_support(a) == p.active;
    let mut extreme_constant = true;
    let mut first_sig: Option<String> = None;
    for u in &a.probes.rays {
        let (_, le) = directional_lambda(p, &a.multipliers, u)?;
        let sig = le.canonical_key();
        match &first_sig {
            None => first_sig = Some(sig),
            Some(s) if *s != sig => extreme_constant = false,
            _ => {}
        }
    }
    for (_, samples) in &a.probes.wide_faces {
        for s in samples {
            let (_, le) = directional_lambda(p, &a.multipliers, s)?;
            if let Some(sig) = &first_sig {
                if *sig != le.canonical_key() {
                    extreme_constant = false;
                }
            }
        }
    }
    union.log(
        "equality-condition",
        if support_full {
            "full positive support".to_string()
        } else if extreme_constant {
            "extreme multipliers constant across critical directions".to_string()
        } else {
            "not established".to_string()
        },
    );
    union.log(
        "probe-coverage",
        match &tilde_coverage {
            Coverage::Certified => "certified".to_string(),
            Coverage::Unknown(r) => r.clone(),
        },
    );

    union.completeness = if !a.hyps.subregular.is_proven() {
        Completeness::Unknown("subregularity unresolved".to_string())
    } else if a.hyps.vicinity.is_proven()
        && (support_full || extreme_constant)
        && tilde_coverage == Coverage::Certified
    {
        Completeness::Exact
    } else {
        Completeness::UpperEstimate
    };
    Ok(union.sorted())
}

// ---------------------------------------------------------------------------
// Directional limiting cone
// ---------------------------------------------------------------------------

/// Emits all pieces for one direction: over the strata of the multiplier
/// pairs, the achievable families containing the stratum pattern, and the
/// index lattice between them.
fn directional_pieces(
    a: &Analysis,
    v: &[Rat],
    strata: &[MultiplierStratum],
    fam: &JFamily,
    variant: PieceVariant,
    origin: Origin,
) -> Vec<ConePiece> {
    let p = a.p();
    // collect (lambda, iplus, iset) jobs first, then build pieces in parallel
    let mut jobs: Vec<(RatVec, IndexSet, IndexSet)> = Vec::new();
    let mut seen: std::collections::BTreeSet<String> = std::collections::BTreeSet::new();
    for stratum in strata {
        let lambdas: Vec<RatVec> = if stratum.lambda_unique {
            vec![stratum.witness_lambda.clone()]
        } else {
            stratum.lambda_vertices.clone()
        };
        for member in &fam.members {
            if !stratum.pattern.is_subset(&member.set) {
                continue;
            }
            let j: Vec<usize> = member.set.iter().copied().collect();
            let free: Vec<usize> = j
                .iter()
                .copied()
                .filter(|i| !stratum.pattern.contains(i))
                .collect();
            for imask in 0..(1u32 << free.len()) {
                let mut iset = stratum.pattern.clone();
                let extra: Vec<usize> = free
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| imask & (1 << k) != 0)
                    .map(|(_, &i)| i)
                    .collect();
                iset.extend(extra.iter().copied());
                for pmask in 0..(1u32 << extra.len()) {
                    let mut iplus = stratum.pattern.clone();
                    iplus.extend(
                        extra
                            .iter()
                            .enumerate()
                            .filter(|(k, _)| pmask & (1 << k) != 0)
                            .map(|(_, &i)| i),
                    );
                    for lam in &lambdas {
                        let key = format!("{lam:?}|{iplus:?}|{iset:?}");
                        if seen.insert(key) {
                            jobs.push((lam.clone(), iplus.clone(), iset.clone()));
                        }
                    }
                }
            }
        }
    }
    map_collect(jobs, |(lam, iplus, iset)| {
        normal_piece(p, v, &lam, &iplus, &iset, variant, origin)
    })
}

/// The limiting normal cone to the graph in a direction with nonzero base
/// component. `vstar = None` enumerates over every admissible rate.
pub fn dir_limiting(a: &Analysis, v: &[Rat], vstar: Option<&[Rat]>) -> Result<ConeUnion> {
    let p = a.p();
    if is_zero_vec(v) {
        return Err(Error::DirectionNotInCone);
    }
    let mut union = ConeUnion::new(Completeness::Unknown("unevaluated".to_string()));
    union.log("subregularity", a.hyps.subregular.label());
    union.log("vicinity-regularity", a.hyps.vicinity.label());

    if !a.geom.kbar.member(v) {
        union.completeness = Completeness::Exact;
        union.log("direction", "outside the critical cone; cone is empty".to_string());
        return Ok(union);
    }

    let admissible = tangent_piece(a, v)?;
    if let Some(vs) = vstar {
        if !admissible.contains(vs) && a.hyps.vicinity.is_proven() && a.hyps.subregular.is_proven()
        {
            union.completeness = Completeness::Exact;
            union.log(
                "direction",
                "rate not tangent-admissible; cone is empty".to_string(),
            );
            return Ok(union);
        }
    }

    let fam = jfamily(p, v, a.max_enum)?;
    let two_licq_verdict = two_licq(p, v, &fam);
    union.log("2-LICQ (sufficient condition)", two_licq_verdict.label());

    let (lambda_v, _) = directional_lambda(p, &a.multipliers, v)?;
    let spec = match vstar {
        Some(vs) => VstarSpec::Fixed(vs),
        None => VstarSpec::FreeIn(&admissible),
    };
    let strata = multiplier_strata(p, &lambda_v, v, spec, a.max_enum)?;
    let lambda_unique = strata.iter().all(|s| s.lambda_unique);
    union.log(
        "multiplier-uniqueness",
        if lambda_unique { "unique" } else { "nonunique" }.to_string(),
    );
    union.extend(directional_pieces(
        a,
        v,
        &strata,
        &fam,
        PieceVariant::Full,
        Origin::Directional,
    ));

    union.completeness = if !(a.hyps.subregular.is_proven() && a.hyps.vicinity.is_proven()) {
        Completeness::Unknown("regularity hypotheses unresolved".to_string())
    } else if !two_licq_verdict.is_proven() {
        Completeness::Unknown("2-LICQ unresolved".to_string())
    } else if !lambda_unique {
        Completeness::Unknown("nonunique multiplier stratum; vertex-sampled union".to_string())
    } else {
        Completeness::Exact
    };
    Ok(union.sorted())
}

// ---------------------------------------------------------------------------
// Zero-direction estimates
// ---------------------------------------------------------------------------

fn check_zero_dir_pre(a: &Analysis, vstar: &[Rat]) -> Result<Option<ConeUnion>> {
    if is_zero_vec(vstar) {
        return Err(Error::DirectionNotInCone);
    }
    let tangent = tangent_graph(a)?;
    let mut point = zero_vec(a.dim2());
    point[a.p().m..].clone_from_slice(vstar);
    if !tangent.member(&point) {
        let mut union = ConeUnion::new(if a.hyps.vicinity.is_proven() {
            Completeness::Exact
        } else {
            Completeness::Unknown("tangent membership uncertified".to_string())
        });
        union.log("direction", "rate outside the tangent estimate; cone is empty".to_string());
        return Ok(Some(union));
    }
    Ok(None)
}

/// Estimate of the limiting normals reachable along base points moving off
/// the reference point, at direction (0, vstar).
pub fn moving_base_zero(a: &Analysis, vstar: &[Rat]) -> Result<ConeUnion> {
    let p = a.p();
    if let Some(short_circuit) = check_zero_dir_pre(a, vstar)? {
        return Ok(short_circuit);
    }
    let mut union = ConeUnion::new(Completeness::Unknown("unevaluated".to_string()));
    union.log("subregularity", a.hyps.subregular.label());
    union.log("vicinity-regularity", a.hyps.vicinity.label());

    let zero = zero_vec(p.m);
    let mut all_two_reg = true;
    let mut coverage_ok = a.probes.enumerated;
    let mut lambda_unique = true;
    for ray in &a.probes.rays {
        let fam = jfamily(p, ray, a.max_enum)?;
        if !two_licq(p, ray, &fam).is_proven() {
            all_two_reg = false;
        }
        let (lambda_ray, _) = directional_lambda(p, &a.multipliers, ray)?;
        let strata =
            multiplier_strata(p, &lambda_ray, &zero, VstarSpec::Fixed(vstar), a.max_enum)?;
        lambda_unique &= strata.iter().all(|s| s.lambda_unique);
        union.extend(directional_pieces(
            a,
            ray,
            &strata,
            &fam,
            PieceVariant::Full,
            Origin::MovingBase,
        ));
    }
    // wide faces: the emitted piece set must be constant across the face
    for (_, samples) in &a.probes.wide_faces {
        let mut sigs: Vec<String> = Vec::new();
        for s in samples {
            let fam = jfamily(p, s, a.max_enum)?;
            let (lambda_s, _) = directional_lambda(p, &a.multipliers, s)?;
            let strata =
                multiplier_strata(p, &lambda_s, &zero, VstarSpec::Fixed(vstar), a.max_enum)?;
            let pieces = directional_pieces(
                a,
                s,
                &strata,
                &fam,
                PieceVariant::Full,
                Origin::MovingBase,
            );
            let mut keys: Vec<String> = pieces.iter().map(|p| p.key()).collect();
            keys.sort();
            sigs.push(format!("{}|{}", keys.join(";"), two_licq(p, s, &fam).is_proven()));
        }
        sigs.dedup();
        if sigs.len() > 1 {
            coverage_ok = false;
        }
    }
    union.log(
        "probe-coverage",
        if coverage_ok { "certified" } else { "face constancy failed" }.to_string(),
    );
    union.log(
        "2-regularity of maximal families",
        if all_two_reg { "Proven at all probes" } else { "unresolved" }.to_string(),
    );

    union.completeness = if !(a.hyps.subregular.is_proven() && a.hyps.vicinity.is_proven()) {
        Completeness::Unknown("regularity hypotheses unresolved".to_string())
    } else if !all_two_reg {
        Completeness::Unknown("2-LICQ unresolved at some probe ray".to_string())
    } else if !coverage_ok {
        Completeness::Unknown("probe coverage not certified".to_string())
    } else if !lambda_unique {
        Completeness::Unknown("nonunique multiplier stratum".to_string())
    } else {
        Completeness::Exact
    };
    Ok(union.sorted())
}

/// Estimate of the limiting normals reachable with the base point pinned at
/// the reference point, at direction (0, vstar). Always an upper estimate.
pub fn fixed_base_zero(a: &Analysis, vstar: &[Rat]) -> Result<ConeUnion> {
    let p = a.p();
    if let Some(short_circuit) = check_zero_dir_pre(a, vstar)? {
        return Ok(short_circuit);
    }
    let mut union = ConeUnion::new(Completeness::UpperEstimate);
    union.log("subregularity", a.hyps.subregular.label());

    if a.geom.kbar.is_trivial() {
        union.push(full_rate_piece(a));
        union.completeness = Completeness::UpperEstimate;
        return Ok(union);
    }

    let zero = zero_vec(p.m);
    let mut per_probe: Vec<Vec<ConePiece>> = Vec::new();
    let mut probe_dirs: Vec<RatVec> = vec![zero.clone()];
    probe_dirs.extend(a.nullspace_probes.rays.iter().cloned());
    for dir in &probe_dirs {
        let fam = jfamily(p, dir, a.max_enum)?;
        let (hull, _cov) = lambda_tilde(p, &a.multipliers, &a.geom.kbar, dir, &a.probes)?;
        let strata = multiplier_strata(p, &hull, &zero, VstarSpec::Fixed(vstar), a.max_enum)?;
        per_probe.push(directional_pieces(
            a,
            dir,
            &strata,
            &fam,
            PieceVariant::GradientImage,
            Origin::FixedBase,
        ));
    }
    union.extend(intersect_piece_families(a, per_probe)?);
    union.completeness = if a.hyps.subregular.is_proven() {
        Completeness::UpperEstimate
    } else {
        Completeness::Unknown("subregularity unresolved".to_string())
    };
    Ok(union.sorted())
}

/// The piece R^m x {0}: any rate, zero base direction.
fn full_rate_piece(a: &Analysis) -> ConePiece {
    let p = a.p();
    let dim = a.dim2();
    let mut eq = Vec::new();
    for j in 0..p.m {
        let mut row = zero_vec(dim);
        row[p.m + j] = crate::exact::rat(1);
        eq.push(row);
    }
    ConePiece {
        set: Cone::from_h(dim, eq, Vec::new()),
        provenance: Provenance {
            origin: Origin::FixedBase,
            ray: None,
            lambda: None,
            iplus: None,
            iset: None,
        },
    }
}

/// Distributes an intersection of unions into a union of intersections.
fn intersect_piece_families(
    a: &Analysis,
    families: Vec<Vec<ConePiece>>,
) -> Result<Vec<ConePiece>> {
    let mut acc: Vec<ConePiece> = match families.first() {
        None => return Ok(Vec::new()),
        Some(first) => first.clone(),
    };
    for family in &families[1..] {
        let mut next: Vec<ConePiece> = Vec::new();
        for left in &acc {
            for right in family {
                let meet = left.set.intersect(&right.set);
                if meet.is_trivial() && !left.set.is_trivial() && !right.set.is_trivial() {
                    // keep the origin piece only if it is genuinely {0}
                    continue;
                }
                let piece = ConePiece {
                    set: meet,
                    provenance: left.provenance.clone(),
                };
                if !next.iter().any(|p: &ConePiece| p.key() == piece.key()) {
                    next.push(piece);
                }
            }
        }
        acc = next;
        if acc.len() > a.max_enum {
            return Err(Error::EnumerationCap {
                cap: a.max_enum,
                what: "intersection of piece unions",
            });
        }
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Closed form under LICQ and the full limiting cone
// ---------------------------------------------------------------------------

/// The exact limiting normal cone to the graph under LICQ: the union over the
/// index lattice between the positive support of the unique multiplier and
/// the active set.
pub fn limiting_licq(a: &Analysis) -> Result<ConeUnion> {
    let p = a.p();
    if !a.hyps.licq {
        return Err(Error::NotLicq);
    }
    let lam = a
        .multipliers
        .poly
        .is_single_point()
        .ok_or_else(|| Error::Internal("unique multiplier expected under LICQ".to_string()))?;
    let support = crate::multipliers::positive_support(&lam);
    let free: Vec<usize> = p
        .active
        .iter()
        .copied()
        .filter(|i| !support.contains(i))
        .collect();
    let mut union = ConeUnion::new(Completeness::Exact);
    union.log("licq", "holds".to_string());
    let zero = zero_vec(p.m);
    let mut jobs: Vec<(IndexSet, IndexSet)> = Vec::new();
    for imask in 0..(1u32 << free.len()) {
        let mut iset = support.clone();
        let extra: Vec<usize> = free
            .iter()
            .enumerate()
            .filter(|(k, _)| imask & (1 << k) != 0)
            .map(|(_, &i)| i)
            .collect();
        iset.extend(extra.iter().copied());
        for pmask in 0..(1u32 << extra.len()) {
            let mut iplus = support.clone();
            iplus.extend(
                extra
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| pmask & (1 << k) != 0)
                    .map(|(_, &i)| i),
            );
            jobs.push((iplus, iset.clone()));
        }
    }
    let pieces = map_collect(jobs, |(iplus, iset)| {
        normal_piece(p, &zero, &lam, &iplus, &iset, PieceVariant::Full, Origin::Licq)
    });
    union.extend(pieces);
    Ok(union.sorted())
}

/// Result of the full limiting-cone assembly: a certified inner collection
/// and an outer one. When every exactness hypothesis is certified the two
/// coincide (and are flagged Exact).
pub struct LimitingPair {
    pub lower: ConeUnion,
    pub upper: ConeUnion,
}

pub fn full_limiting(a: &Analysis) -> Result<LimitingPair> {
    let p = a.p();
    let regular = regular_normal_graph(a)?;

    let mut dir_exact_all = true;
    let mut dir_pieces: Vec<ConePiece> = Vec::new();
    let zero = zero_vec(p.m);
    for ray in &a.probes.rays {
        let fam = jfamily(p, ray, a.max_enum)?;
        if !two_licq(p, ray, &fam).is_proven() {
            dir_exact_all = false;
        }
        let admissible = tangent_piece(a, ray)?;
        let (lambda_ray, _) = directional_lambda(p, &a.multipliers, ray)?;
        let strata = multiplier_strata(
            p,
            &lambda_ray,
            ray,
            VstarSpec::FreeIn(&admissible),
            a.max_enum,
        )?;
        if !strata.iter().all(|s| s.lambda_unique) {
            dir_exact_all = false;
        }
        dir_pieces.extend(directional_pieces(
            a,
            ray,
            &strata,
            &fam,
            PieceVariant::Full,
            Origin::Directional,
        ));
    }
    // probe coverage: piece data constant across wide faces
    let mut coverage_ok = a.probes.enumerated;
    for (_, samples) in &a.probes.wide_faces {
        let mut sigs: Vec<String> = Vec::new();
        for s in samples {
            let fam = jfamily(p, s, a.max_enum)?;
            let admissible = tangent_piece(a, s)?;
            let (lambda_s, _) = directional_lambda(p, &a.multipliers, s)?;
            let strata =
                multiplier_strata(p, &lambda_s, s, VstarSpec::FreeIn(&admissible), a.max_enum)?;
            let pieces = directional_pieces(
                a,
                s,
                &strata,
                &fam,
                PieceVariant::Full,
                Origin::Directional,
            );
            let mut keys: Vec<String> = pieces.iter().map(|q| q.key()).collect();
            keys.sort();
            sigs.push(keys.join(";"));
        }
        sigs.dedup();
        if sigs.len() > 1 {
            coverage_ok = false;
        }
    }

    // moving-base and fixed-base contributions over admissible zero-direction
    // rates, for the outer collection
    let kbar_polar = a.kbar_polar_poly();
    let mut outer_extra: Vec<ConePiece> = Vec::new();
    if !a.geom.kbar.is_trivial() {
        for ray in &a.probes.rays {
            let fam = jfamily(p, ray, a.max_enum)?;
            let (lambda_ray, _) = directional_lambda(p, &a.multipliers, ray)?;
            let strata = multiplier_strata(
                p,
                &lambda_ray,
                &zero,
                VstarSpec::FreeIn(&kbar_polar),
                a.max_enum,
            )?;
            outer_extra.extend(directional_pieces(
                a,
                ray,
                &strata,
                &fam,
                PieceVariant::Full,
                Origin::MovingBase,
            ));
        }
        let mut per_probe: Vec<Vec<ConePiece>> = Vec::new();
        let mut probe_dirs: Vec<RatVec> = vec![zero.clone()];
        probe_dirs.extend(a.nullspace_probes.rays.iter().cloned());
        for dir in &probe_dirs {
            let fam = jfamily(p, dir, a.max_enum)?;
            let (hull, _) = lambda_tilde(p, &a.multipliers, &a.geom.kbar, dir, &a.probes)?;
            let strata =
                multiplier_strata(p, &hull, &zero, VstarSpec::FreeIn(&kbar_polar), a.max_enum)?;
            per_probe.push(directional_pieces(
                a,
                dir,
                &strata,
                &fam,
                PieceVariant::GradientImage,
                Origin::FixedBase,
            ));
        }
        outer_extra.extend(intersect_piece_families(a, per_probe)?);
    } else {
        outer_extra.push(full_rate_piece(a));
    }

    let hyps_proven = a.hyps.subregular.is_proven() && a.hyps.vicinity.is_proven();
    let nullspace_nontrivial = !a.geom.nullspace.is_trivial();
    let regular_exact = regular.completeness == Completeness::Exact;
    let all_exact = hyps_proven
        && dir_exact_all
        && coverage_ok
        && nullspace_nontrivial
        && regular_exact;

    let log_all = |u: &mut ConeUnion| {
        u.log("subregularity", a.hyps.subregular.label());
        u.log("vicinity-regularity", a.hyps.vicinity.label());
        u.log(
            "2-regularity of maximal families",
            if dir_exact_all { "Proven at all probes" } else { "unresolved" }.to_string(),
        );
        u.log(
            "probe-coverage",
            if coverage_ok { "certified" } else { "not certified" }.to_string(),
        );
        u.log(
            "null-space",
            if nullspace_nontrivial { "nontrivial" } else { "trivial" }.to_string(),
        );
        u.log("regular-normal-cone", regular.completeness.label());
    };

    if all_exact {
        let mut exact = ConeUnion::new(Completeness::Exact);
        log_all(&mut exact);
        exact.extend(regular.pieces.clone());
        exact.extend(dir_pieces);
        let exact = exact.sorted();
        return Ok(LimitingPair {
            lower: exact.clone(),
            upper: exact,
        });
    }

    let mut lower = ConeUnion::new(Completeness::LowerEstimate);
    log_all(&mut lower);
    if regular_exact {
        lower.extend(regular.pieces.clone());
    }
    if hyps_proven && dir_exact_all {
        lower.extend(dir_pieces.clone());
    }
    lower.completeness = if hyps_proven && (regular_exact || dir_exact_all) {
        Completeness::LowerEstimate
    } else {
        Completeness::Unknown("no certified inner pieces".to_string())
    };

    let mut upper = ConeUnion::new(Completeness::UpperEstimate);
    log_all(&mut upper);
    upper.extend(regular.pieces.clone());
    upper.extend(dir_pieces);
    upper.extend(outer_extra);
    upper.completeness = if hyps_proven && dir_exact_all && coverage_ok {
        Completeness::UpperEstimate
    } else {
        Completeness::Unknown("inclusion hypotheses unresolved".to_string())
    };

    Ok(LimitingPair {
        lower: lower.sorted(),
        upper: upper.sorted(),
    })
}

// ---------------------------------------------------------------------------
// Helpers shared with the application layer
// ---------------------------------------------------------------------------

/// Exposes the gradient-image piece route for containment oracles.
pub fn image_piece_for(
    p: &ProblemData,
    v: &[Rat],
    lambda: &[Rat],
    iplus: &IndexSet,
    iset: &IndexSet,
) -> ConePiece {
    normal_piece(p, v, lambda, iplus, iset, PieceVariant::GradientImage, Origin::FixedBase)
}

/// Containment of the gradient-image cone in the face-cone polar, exposed for
/// the property suite.
pub fn image_in_polar(p: &ProblemData, v: &[Rat], iplus: &IndexSet, iset: &IndexSet) -> bool {
    let vopt = if is_zero_vec(v) { None } else { Some(v) };
    let polar = face_cone(p, iplus, iset, vopt).polar();
    polar.contains_cone(&gradient_image_cone(p, iplus, iset))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, vec_from_i64};
    use crate::model::fixtures::*;

    fn v(entries: &[i64]) -> RatVec {
        vec_from_i64(entries)
    }

    fn analysis(p: ProblemData) -> Analysis {
        Analysis::new(p, Assumptions::default(), &[], 10_000).unwrap()
    }

    fn graph_piece(eq: &[&[i64]], ineq: &[&[i64]]) -> Cone {
        Cone::from_h(
            4,
            eq.iter().map(|r| vec_from_i64(r)).collect(),
            ineq.iter().map(|r| vec_from_i64(r)).collect(),
        )
    }

    #[test]
    fn tangent_piece_fixture_a() {
        let a = analysis(fixture_a());
        // v = (-1, 0): rates {(2, c)}
        let piece = tangent_piece(&a, &v(&[-1, 0])).unwrap();
        assert!(piece.contains(&v(&[2, 5])));
        assert!(piece.contains(&v(&[2, -7])));
        assert!(!piece.contains(&v(&[1, 0])));
        // v = 0: the polar of the critical cone
        let zero = tangent_piece(&a, &v(&[0, 0])).unwrap();
        assert!(zero.contains(&v(&[0, 3])));
        assert!(!zero.contains(&v(&[1, 0])));
        // off the critical cone: empty
        let off = tangent_piece(&a, &v(&[0, 1])).unwrap();
        assert!(off.is_empty());
    }

    #[test]
    fn tangent_piece_fixture_b_rate_equation() {
        let a = analysis(fixture_b());
        let piece = tangent_piece(&a, &v(&[-1, 0])).unwrap();
        // v1* = -2 v1 = 2 exactly, v2* free
        assert!(piece.contains(&v(&[2, 11])));
        assert!(!piece.contains(&v(&[3, 0])));
    }

    #[test]
    fn tangent_graph_fixture_a_exact() {
        let a = analysis(fixture_a());
        let t = tangent_graph(&a).unwrap();
        assert_eq!(t.completeness, Completeness::Exact);
        // (v, v*) with v = (-1,0), v* = (2, c)
        assert!(t.member(&v(&[-1, 0, 2, 3])));
        assert!(t.member(&v(&[1, 0, -2, 0])));
        assert!(t.member(&v(&[0, 0, 0, -4])));
        assert!(!t.member(&v(&[-1, 0, 1, 0])));
        assert!(!t.member(&v(&[0, 1, 0, 0])));
    }

    #[test]
    fn tangent_graph_fixture_b_matches_paper_set() {
        let a = analysis(fixture_b());
        let t = tangent_graph(&a).unwrap();
        // {(v, v*) | v1 <= 0, v2 = 0, v1* = -2 v1} u ({0} x R+ x R)
        assert!(t.member(&v(&[-1, 0, 2, 9])));
        assert!(t.member(&v(&[0, 0, 1, -1])));
        assert!(!t.member(&v(&[1, 0, -2, 0])));
        assert!(!t.member(&v(&[0, 0, -1, 0])));
    }

    #[test]
    fn regular_normal_fixture_a() {
        let a = analysis(fixture_a());
        let r = regular_normal_graph(&a).unwrap();
        assert_eq!(r.completeness, Completeness::Exact);
        assert_eq!(r.pieces.len(), 1);
        let expected = graph_piece(&[&[0, 0, 0, 1], &[1, 0, -2, 0]], &[]);
        assert!(r.pieces[0].set.equal(&expected));
    }

    #[test]
    fn regular_normal_fixture_b() {
        let a = analysis(fixture_b());
        let r = regular_normal_graph(&a).unwrap();
        assert_eq!(r.completeness, Completeness::Exact);
        assert_eq!(r.pieces.len(), 1);
        // {(w*, w) | w1 <= 0, w2 = 0, w1* >= 2 w1}
        let expected = graph_piece(
            &[&[0, 0, 0, 1]],
            &[&[0, 0, 1, 0], &[-1, 0, 2, 0]],
        );
        assert!(r.pieces[0].set.equal(&expected));
    }

    #[test]
    fn regular_normal_fixture_c_licq_form() {
        let a = analysis(fixture_c());
        let r = regular_normal_graph(&a).unwrap();
        assert_eq!(r.completeness, Completeness::Exact);
        // w in kbar = {0} x R-, w* in polar(kbar) = R x R+
        let expected = graph_piece(&[&[0, 0, 1, 0]], &[&[0, 0, 0, 1], &[0, -1, 0, 0]]);
        assert!(r.pieces[0].set.equal(&expected));
    }

    #[test]
    fn dir_limiting_fixture_a_exact_piece() {
        let a = analysis(fixture_a());
        for c in [-2i64, 0, 7] {
            let u = dir_limiting(&a, &v(&[-1, 0]), Some(&v(&[2, c]))).unwrap();
            assert_eq!(u.completeness, Completeness::Exact, "c = {c}");
            assert_eq!(u.pieces.len(), 1);
            let expected = graph_piece(&[&[0, 0, 0, 1], &[1, 0, -2, 0]], &[]);
            assert!(u.pieces[0].set.equal(&expected));
        }
    }

    #[test]
    fn dir_limiting_fixture_b_exact_piece() {
        let a = analysis(fixture_b());
        let u = dir_limiting(&a, &v(&[-1, 0]), Some(&v(&[2, -3]))).unwrap();
        assert_eq!(u.completeness, Completeness::Exact);
        assert_eq!(u.pieces.len(), 1);
        let expected = graph_piece(&[&[0, 0, 0, 1], &[1, 0, -2, 0]], &[]);
        assert!(u.pieces[0].set.equal(&expected));
    }

    #[test]
    fn dir_limiting_empty_cases() {
        let a = analysis(fixture_a());
        // direction off the critical cone
        let off = dir_limiting(&a, &v(&[0, 1]), Some(&v(&[0, 0]))).unwrap();
        assert!(off.is_empty_union());
        assert_eq!(off.completeness, Completeness::Exact);
        // rate that is not tangent-admissible (v1* must be 2)
        let bad = dir_limiting(&a, &v(&[-1, 0]), Some(&v(&[1, 0]))).unwrap();
        assert!(bad.is_empty_union());
        assert_eq!(bad.completeness, Completeness::Exact);
    }

    #[test]
    fn moving_base_fixture_b_sign_split() {
        let a = analysis(fixture_b());
        // positive first rate component: empty
        let empty = moving_base_zero(&a, &v(&[1, 5])).unwrap();
        assert!(empty.is_empty_union());
        // zero first component: the line piece
        let line = moving_base_zero(&a, &v(&[0, 5])).unwrap();
        assert_eq!(line.completeness, Completeness::Exact);
        assert_eq!(line.pieces.len(), 1);
        let expected = graph_piece(&[&[0, 0, 0, 1], &[1, 0, -2, 0]], &[]);
        assert!(line.pieces[0].set.equal(&expected));
    }

    #[test]
    fn fixed_base_fixture_a_upper_estimate() {
        let a = analysis(fixture_a());
        let u = fixed_base_zero(&a, &v(&[0, 3])).unwrap();
        assert_eq!(u.completeness, Completeness::UpperEstimate);
        assert_eq!(u.pieces.len(), 1);
        let expected = graph_piece(&[&[0, 0, 0, 1], &[1, 0, -2, 0]], &[]);
        assert!(u.pieces[0].set.equal(&expected));
    }

    #[test]
    fn limiting_licq_fixture_c_contains_regular_piece() {
        let a = analysis(fixture_c());
        let u = limiting_licq(&a).unwrap();
        assert_eq!(u.completeness, Completeness::Exact);
        assert_eq!(u.pieces.len(), 3);
        let r = regular_normal_graph(&a).unwrap();
        assert!(u.contains_generators_of(&r));
        // the full-rate piece over w = 0 is present
        assert!(u.member(&v(&[-5, 9, 0, 0])));
    }

    #[test]
    fn limiting_licq_rejected_without_licq() {
        let a = analysis(fixture_a());
        assert!(matches!(limiting_licq(&a), Err(Error::NotLicq)));
    }

    #[test]
    fn full_limiting_fixture_a_exact() {
        let a = analysis(fixture_a());
        let pair = full_limiting(&a).unwrap();
        assert_eq!(pair.lower.completeness, Completeness::Exact);
        assert_eq!(pair.upper.completeness, Completeness::Exact);
        assert_eq!(pair.lower.pieces.len(), 1);
        let expected = graph_piece(&[&[0, 0, 0, 1], &[1, 0, -2, 0]], &[]);
        assert!(pair.lower.pieces[0].set.equal(&expected));
        assert!(pair.upper.pieces[0].set.equal(&expected));
    }

    #[test]
    fn full_limiting_fixture_b_two_sided() {
        let a = analysis(fixture_b());
        let pair = full_limiting(&a).unwrap();
        assert_eq!(pair.lower.completeness, Completeness::LowerEstimate);
        assert_eq!(pair.upper.completeness, Completeness::UpperEstimate);
        // lower: the two pieces of the inner collection
        let ray_piece = graph_piece(&[&[0, 0, 0, 1]], &[&[0, 0, 1, 0], &[-1, 0, 2, 0]]);
        let line_piece = graph_piece(&[&[0, 0, 0, 1], &[1, 0, -2, 0]], &[]);
        assert_eq!(pair.lower.pieces.len(), 2);
        assert!(pair.lower.pieces.iter().any(|p| p.set.equal(&ray_piece)));
        assert!(pair.lower.pieces.iter().any(|p| p.set.equal(&line_piece)));
        // upper: lower plus the full-rate piece over w = 0
        let full_rate = graph_piece(&[&[0, 0, 1, 0], &[0, 0, 0, 1]], &[]);
        assert_eq!(pair.upper.pieces.len(), 3);
        assert!(pair.upper.pieces.iter().any(|p| p.set.equal(&full_rate)));
        // sandwich
        assert!(pair.upper.contains_generators_of(&pair.lower));
    }

    #[test]
    fn full_limiting_fixture_c_matches_licq_form() {
        let a = analysis(fixture_c());
        let pair = full_limiting(&a).unwrap();
        let closed = limiting_licq(&a).unwrap();
        assert!(pair.upper.contains_generators_of(&closed));
        assert!(closed.contains_generators_of(&pair.upper));
        assert!(closed.contains_generators_of(&pair.lower));
    }

    #[test]
    fn zero_direction_pre_checks() {
        let a = analysis(fixture_b());
        assert!(matches!(
            moving_base_zero(&a, &v(&[0, 0])),
            Err(Error::DirectionNotInCone)
        ));
        // rate outside the tangent estimate: empty with certified emptiness
        let out = moving_base_zero(&a, &v(&[-1, 0])).unwrap();
        assert!(out.is_empty_union());
        assert_eq!(out.completeness, Completeness::Exact);
    }

    #[test]
    fn fixed_base_trivial_critical_cone() {
        // single constraint y1 <= 0 at the origin with ystar = (-1):
        // critical cone {v | v <= 0, -v = 0}... take m = 1: kbar = {0}
        let vars = crate::polyexpr::var_names(&["y1"]);
        let q = vec![crate::polyexpr::parse_poly("y1", &vars).unwrap()];
        let p = crate::model::build_problem(&q, &v(&[0]), &v(&[1])).unwrap();
        let a = analysis(p);
        assert!(a.geom.kbar.is_trivial());
        let u = fixed_base_zero(&a, &v(&[1])).unwrap();
        assert_eq!(u.pieces.len(), 1);
        // R^1 x {0}
        assert!(u.member(&vec![rat(9), rat(0)]));
        assert!(!u.member(&vec![rat(0), rat(1)]));
    }
}
