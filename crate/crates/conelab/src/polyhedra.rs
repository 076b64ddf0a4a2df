//! Exact polyhedral cones and polyhedra with eagerly synchronized dual
//! representations (double description method).
//!
//! Every constructed object immediately carries a canonical, irredundant
//! H-representation and V-representation: generators are scaled to coprime
//! integer vectors, lineality bases are in reduced row echelon form, and rays
//! are reduced modulo lineality. Canonical forms make equality checks and
//! piece deduplication cheap and reports reproducible.

use std::collections::BTreeSet;

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{
    canonical_subspace_basis, dot, is_zero_vec, primitive_integer_row, primitive_signed_row,
    rank, rat_to_string, reduce_mod_subspace, row_from_ints, zero_vec, Rat, RatMat, RatVec,
};

// ---------------------------------------------------------------------------
// Double description core
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq)]
enum RowKind {
    Eq,
    Ineq,
}

#[derive(Clone)]
struct DdRay {
    vec: RatVec,
    /// indices of processed constraints tight at this ray
    tight: BTreeSet<usize>,
}

/// Extreme rays and a lineality basis of {x | eq·x = 0, ineq·x <= 0}.
fn dd(dim: usize, eqs: &[RatVec], ineqs: &[RatVec]) -> (Vec<RatVec>, Vec<RatVec>) {
    let mut constraints: Vec<(RatVec, RowKind)> = Vec::new();
    for r in eqs {
        constraints.push((r.clone(), RowKind::Eq));
    }
    for r in ineqs {
        constraints.push((r.clone(), RowKind::Ineq));
    }

    let mut lin: Vec<RatVec> = (0..dim)
        .map(|i| {
            let mut v = zero_vec(dim);
            v[i] = Rat::from_integer(1.into());
            v
        })
        .collect();
    let mut rays: Vec<DdRay> = Vec::new();
    let mut processed: Vec<(RatVec, RowKind)> = Vec::new();

    for (a, kind) in constraints {
        if is_zero_vec(&a) {
            processed.push((a, kind));
            let k = processed.len() - 1;
            for r in rays.iter_mut() {
                r.tight.insert(k);
            }
            continue;
        }
        let pivot = lin.iter().position(|l| !dot(&a, l).is_zero());
        if let Some(p) = pivot {
            let mut l0 = lin.remove(p);
            let a_l0 = dot(&a, &l0);
            // project remaining lineality and rays onto the hyperplane a.x = 0
            for l in lin.iter_mut() {
                let f = dot(&a, l) / &a_l0;
                if !f.is_zero() {
                    *l = crate::exact::sub_vec(l, &crate::exact::scale_vec(&f, &l0));
                }
            }
            for r in rays.iter_mut() {
                let f = dot(&a, &r.vec) / &a_l0;
                if !f.is_zero() {
                    r.vec = crate::exact::sub_vec(&r.vec, &crate::exact::scale_vec(&f, &l0));
                }
            }
            processed.push((a.clone(), kind));
            let k = processed.len() - 1;
            for r in rays.iter_mut() {
                r.tight.insert(k);
            }
            if kind == RowKind::Ineq {
                // the pivot direction survives as a ray on the feasible side
                if dot(&a, &l0).is_positive() {
                    l0 = crate::exact::neg_vec(&l0);
                }
                let tight: BTreeSet<usize> = (0..k).collect();
                rays.push(DdRay { vec: l0, tight });
            }
            continue;
        }

        // lineality is inside the hyperplane; standard ray partition step
        processed.push((a.clone(), kind));
        let k = processed.len() - 1;
        let lin_dim = lin.len();
        let mut plus: Vec<DdRay> = Vec::new();
        let mut zero: Vec<DdRay> = Vec::new();
        let mut minus: Vec<DdRay> = Vec::new();
        for r in rays.drain(..) {
            let s = dot(&a, &r.vec);
            if s.is_zero() {
                let mut r = r;
                r.tight.insert(k);
                zero.push(r);
            } else if s.is_positive() {
                plus.push(r);
            } else {
                minus.push(r);
            }
        }
        let adjacent = |rp: &DdRay, rm: &DdRay| -> bool {
            let common: Vec<RatVec> = rp
                .tight
                .intersection(&rm.tight)
                .map(|&i| processed[i].0.clone())
                .collect();
            let target = dim as isize - lin_dim as isize - 2;
            if target < 0 {
                return true;
            }
            let eq_rows: Vec<RatVec> = processed
                .iter()
                .filter(|(_, kind)| *kind == RowKind::Eq)
                .map(|(row, _)| row.clone())
                .collect();
            let mut all = common;
            all.extend(eq_rows);
            if all.is_empty() {
                return target == 0;
            }
            rank(&RatMat::from_rows(all)) == target as usize
        };
        let mut combos: Vec<DdRay> = Vec::new();
        for rp in &plus {
            for rm in &minus {
                if !adjacent(rp, rm) {
                    continue;
                }
                let sp = dot(&a, &rp.vec);
                let sm = dot(&a, &rm.vec);
                // positive combination lying on the hyperplane
                let vec = crate::exact::sub_vec(
                    &crate::exact::scale_vec(&sp, &rm.vec),
                    &crate::exact::scale_vec(&sm, &rp.vec),
                );
                debug_assert!(!is_zero_vec(&vec));
                let mut tight: BTreeSet<usize> =
                    rp.tight.intersection(&rm.tight).copied().collect();
                tight.insert(k);
                combos.push(DdRay { vec, tight });
            }
        }
        rays = zero;
        if kind == RowKind::Ineq {
            rays.extend(minus);
        }
        rays.extend(combos);
    }

    (rays.into_iter().map(|r| r.vec).collect(), lin)
}

/// Canonicalizes a V-representation: lineality to RREF primitive basis, rays
/// reduced modulo lineality, scaled to primitive integers, deduplicated and
/// sorted.
fn canonical_vrep(
    dim: usize,
    rays: Vec<RatVec>,
    lineality: Vec<RatVec>,
) -> (Vec<RatVec>, Vec<RatVec>) {
    let lin = canonical_subspace_basis(&lineality, dim);
    let mut keyed: Vec<Vec<num::BigInt>> = Vec::new();
    for r in rays {
        let red = reduce_mod_subspace(&r, &lin);
        if is_zero_vec(&red) {
            continue;
        }
        let key = primitive_integer_row(&red);
        if !keyed.contains(&key) {
            keyed.push(key);
        }
    }
    keyed.sort();
    (keyed.iter().map(|k| row_from_ints(k)).collect(), lin)
}

fn canonical_rows(rows: &[RatVec], signed: bool) -> Vec<RatVec> {
    let mut keyed: Vec<Vec<num::BigInt>> = Vec::new();
    for r in rows {
        if is_zero_vec(r) {
            continue;
        }
        let key = if signed {
            primitive_signed_row(r)
        } else {
            primitive_integer_row(r)
        };
        if !keyed.contains(&key) {
            keyed.push(key);
        }
    }
    keyed.sort();
    keyed.iter().map(|k| row_from_ints(k)).collect()
}

// ---------------------------------------------------------------------------
// Cone
// ---------------------------------------------------------------------------

/// Polyhedral cone {x | eq.x = 0, ineq.x <= 0} = cone(rays) + span(lineality),
/// both representations canonical and always present.
#[derive(Clone, PartialEq, Eq)]
pub struct Cone {
    dim: usize,
    rays: Vec<RatVec>,
    lineality: Vec<RatVec>,
    eq: Vec<RatVec>,
    ineq: Vec<RatVec>,
}

impl std::fmt::Debug for Cone {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Cone(dim {}; rays {:?}; lin {:?}; eq {:?}; ineq {:?})",
            self.dim,
            self.rays.iter().map(|v| fmt_vec(v)).collect::<Vec<_>>(),
            self.lineality.iter().map(|v| fmt_vec(v)).collect::<Vec<_>>(),
            self.eq.iter().map(|v| fmt_vec(v)).collect::<Vec<_>>(),
            self.ineq.iter().map(|v| fmt_vec(v)).collect::<Vec<_>>(),
        )
    }
}

fn fmt_vec(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(rat_to_string).collect();
    format!("({})", parts.join(","))
}

impl Cone {
    /// Cone from halfspace form; both representations are computed eagerly.
    pub fn from_h(dim: usize, eq: Vec<RatVec>, ineq: Vec<RatVec>) -> Cone {
        debug_assert!(eq.iter().chain(&ineq).all(|r| r.len() == dim));
        let (rays, lin) = dd(dim, &eq, &ineq);
        let (rays, lin) = canonical_vrep(dim, rays, lin);
        Self::finish_from_v(dim, rays, lin)
    }

    /// Cone from generators (conic hull of rays plus span of lineality).
    pub fn from_v(dim: usize, rays: Vec<RatVec>, lineality: Vec<RatVec>) -> Cone {
        debug_assert!(rays.iter().chain(&lineality).all(|r| r.len() == dim));
        let (rays, lin) = canonical_vrep(dim, rays, lineality);
        Self::finish_from_v(dim, rays, lin)
    }

    fn finish_from_v(dim: usize, rays: Vec<RatVec>, lin: Vec<RatVec>) -> Cone {
        // polar of the generator set, computed by DD on its halfspace form
        let (polar_rays, polar_lin) = dd(dim, &lin, &rays);
        let eq = canonical_rows(&polar_lin, true);
        let ineq = canonical_rows(&polar_rays, false);
        // rerun DD on the irredundant H-rep for the canonical minimal V-rep;
        // the input generators may be redundant or hide lineality, so the
        // minimal counts can differ from the input's
        let _ = (rays, lin);
        let (vr, vl) = dd(dim, &eq, &ineq);
        let (rays2, lin2) = canonical_vrep(dim, vr, vl);
        Cone {
            dim,
            rays: rays2,
            lineality: lin2,
            eq,
            ineq,
        }
    }

    pub fn full_space(dim: usize) -> Cone {
        Cone::from_h(dim, Vec::new(), Vec::new())
    }

    pub fn zero(dim: usize) -> Cone {
        Cone::from_v(dim, Vec::new(), Vec::new())
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the cone itself (rank of its generator span).
    pub fn cone_dim(&self) -> usize {
        let gens: Vec<RatVec> = self
            .rays
            .iter()
            .chain(&self.lineality)
            .cloned()
            .collect();
        if gens.is_empty() {
            0
        } else {
            rank(&RatMat::from_rows(gens))
        }
    }

    pub fn rays(&self) -> &[RatVec] {
        &self.rays
    }

    pub fn lineality(&self) -> &[RatVec] {
        &self.lineality
    }

    pub fn eq_rows(&self) -> &[RatVec] {
        &self.eq
    }

    pub fn ineq_rows(&self) -> &[RatVec] {
        &self.ineq
    }

    /// Rays plus both signs of the lineality basis; spans the cone conically.
    pub fn generators(&self) -> Vec<RatVec> {
        let mut g = self.rays.clone();
        for l in &self.lineality {
            g.push(l.clone());
            g.push(crate::exact::neg_vec(l));
        }
        g
    }

    pub fn member(&self, x: &[Rat]) -> bool {
        debug_assert_eq!(x.len(), self.dim);
        self.eq.iter().all(|r| dot(r, x).is_zero())
            && self.ineq.iter().all(|r| !dot(r, x).is_positive())
    }

    pub fn is_trivial(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.generators().iter().all(|g| self.member(g))
    }

    pub fn equal(&self, other: &Cone) -> bool {
        self.dim == other.dim && self.contains_cone(other) && other.contains_cone(self)
    }

    /// Negative polar cone {y | y.x <= 0 for all x in self}.
    pub fn polar(&self) -> Cone {
        Cone::from_h(self.dim, self.lineality.clone(), self.rays.clone())
    }

    /// Exact coordinate projection onto the coordinates listed in `keep`.
    pub fn project(&self, keep: &[usize]) -> Cone {
        let pick = |v: &RatVec| -> RatVec { keep.iter().map(|&i| v[i].clone()).collect() };
        Cone::from_v(
            keep.len(),
            self.rays.iter().map(&pick).collect(),
            self.lineality.iter().map(&pick).collect(),
        )
    }

    pub fn intersect(&self, other: &Cone) -> Cone {
        assert_eq!(self.dim, other.dim);
        let mut eq = self.eq.clone();
        eq.extend(other.eq.clone());
        let mut ineq = self.ineq.clone();
        ineq.extend(other.ineq.clone());
        Cone::from_h(self.dim, eq, ineq)
    }

    /// Stable text key of the canonical H-representation, used for piece
    /// deduplication and deterministic report ordering.
    pub fn canonical_key(&self) -> String {
        let fmt_rows = |rows: &[RatVec]| -> String {
            rows.iter()
                .map(|r| fmt_vec(r))
                .collect::<Vec<_>>()
                .join(";")
        };
        format!("E[{}]I[{}]", fmt_rows(&self.eq), fmt_rows(&self.ineq))
    }

    /// All faces paired with a nonzero relative-interior sample (the zero face
    /// carries the zero sample). Faces that are not pointed are additionally
    /// subdivided by splitting their lineality into opposite ray pairs, so the
    /// returned samples cover every direction class of the cone.
    pub fn faces_with_samples(&self) -> Vec<(Cone, RatVec)> {
        let mut seen: BTreeSet<String> = BTreeSet::new();
        let mut out: Vec<(Cone, RatVec)> = Vec::new();
        let push = |c: Cone, out: &mut Vec<(Cone, RatVec)>, seen: &mut BTreeSet<String>| {
            let key = c.canonical_key();
            if seen.insert(key) {
                let sample = c.interior_sample();
                out.push((c, sample));
            }
        };

        let n = self.ineq.len();
        assert!(n < 20, "face enumeration over {n} inequality rows");
        let mut pointed_backlog: Vec<Cone> = Vec::new();
        for mask in 0..(1u32 << n) {
            let mut eq = self.eq.clone();
            let mut ineq = Vec::new();
            for (i, row) in self.ineq.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    eq.push(row.clone());
                } else {
                    ineq.push(row.clone());
                }
            }
            let face = Cone::from_h(self.dim, eq, ineq);
            if !face.lineality.is_empty() {
                pointed_backlog.push(face.clone());
            }
            push(face, &mut out, &mut seen);
        }
        // subdivide faces with lineality into pointed pieces
        for face in pointed_backlog {
            let gens = face.generators();
            assert!(gens.len() < 16, "face subdivision over {} generators", gens.len());
            for mask in 0..(1u32 << gens.len()) {
                let sel: Vec<RatVec> = gens
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, g)| g.clone())
                    .collect();
                let sub = Cone::from_v(self.dim, sel, Vec::new());
                push(sub, &mut out, &mut seen);
            }
        }
        out.sort_by_key(|(c, _)| (c.cone_dim(), c.canonical_key()));
        out
    }

    /// A point in the relative interior: the sum of all generators.
    pub fn interior_sample(&self) -> RatVec {
        let mut s = zero_vec(self.dim);
        for g in self.rays.iter().chain(&self.lineality) {
            s = crate::exact::add_vec(&s, g);
        }
        s
    }

    /// `count` pairwise distinct relative-interior points (only meaningful for
    /// cones of dimension >= 1). Positive weights keep every sample interior.
    pub fn interior_samples(&self, count: usize) -> Vec<RatVec> {
        let gens: Vec<RatVec> = self.rays.iter().chain(&self.lineality).cloned().collect();
        if gens.is_empty() {
            return vec![zero_vec(self.dim); count.min(1)];
        }
        let mut out: Vec<RatVec> = Vec::new();
        let mut k = 0usize;
        while out.len() < count && k < count * gens.len() + gens.len() {
            let mut s = zero_vec(self.dim);
            for (i, g) in gens.iter().enumerate() {
                let w = if i == k % gens.len() {
                    Rat::from_integer((2 + (k / gens.len()) as i64).into())
                } else {
                    Rat::from_integer(1.into())
                };
                s = crate::exact::add_vec(&s, &crate::exact::scale_vec(&w, g));
            }
            if !out.contains(&s) {
                out.push(s);
            }
            k += 1;
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Polyhedron
// ---------------------------------------------------------------------------

/// Polyhedron {x | eq.x = rhs, ineq.x <= rhs} = conv(points) + cone(rays)
/// + span(lineality). `points` are the vertices modulo lineality; the
/// polyhedron is empty iff `points` is empty.
#[derive(Clone, PartialEq, Eq)]
pub struct Polyhedron {
    dim: usize,
    points: Vec<RatVec>,
    rays: Vec<RatVec>,
    lineality: Vec<RatVec>,
    eq: Vec<(RatVec, Rat)>,
    ineq: Vec<(RatVec, Rat)>,
}

impl std::fmt::Debug for Polyhedron {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Polyhedron(dim {}; points {:?}; rays {:?}; lin {:?})",
            self.dim,
            self.points.iter().map(|v| fmt_vec(v)).collect::<Vec<_>>(),
            self.rays.iter().map(|v| fmt_vec(v)).collect::<Vec<_>>(),
            self.lineality.iter().map(|v| fmt_vec(v)).collect::<Vec<_>>(),
        )
    }
}

fn dehomogenize_rows(rows: &[RatVec]) -> Vec<(RatVec, Rat)> {
    let mut out = Vec::new();
    for r in rows {
        let coeff = r[1..].to_vec();
        let rhs = -r[0].clone();
        if is_zero_vec(&coeff) {
            // pure homogenization rows (x0 >= 0 and alike) carry no content
            continue;
        }
        out.push((coeff, rhs));
    }
    out
}

impl Polyhedron {
    /// The canonical empty polyhedron of the given ambient dimension.
    pub fn empty(dim: usize) -> Polyhedron {
        Polyhedron {
            dim,
            points: Vec::new(),
            rays: Vec::new(),
            lineality: Vec::new(),
            eq: Vec::new(),
            ineq: Vec::new(),
        }
    }

    pub fn from_h(dim: usize, eq: Vec<(RatVec, Rat)>, ineq: Vec<(RatVec, Rat)>) -> Polyhedron {
        // homogenize: rows (-rhs, coeff) over (x0, x), plus x0 >= 0
        let hom = |(coeff, rhs): &(RatVec, Rat)| -> RatVec {
            let mut r = Vec::with_capacity(dim + 1);
            r.push(-rhs.clone());
            r.extend(coeff.iter().cloned());
            r
        };
        let mut hineq: Vec<RatVec> = ineq.iter().map(hom).collect();
        let mut x0 = zero_vec(dim + 1);
        x0[0] = -Rat::from_integer(1.into());
        hineq.push(x0);
        let heq: Vec<RatVec> = eq.iter().map(hom).collect();
        let cone = Cone::from_h(dim + 1, heq, hineq);
        Self::from_homogenized(dim, &cone)
    }

    /// Minkowski-Weyl construction. An empty point list yields the canonical
    /// empty polyhedron regardless of rays.
    pub fn from_v(
        dim: usize,
        points: Vec<RatVec>,
        rays: Vec<RatVec>,
        lineality: Vec<RatVec>,
    ) -> Polyhedron {
        if points.is_empty() {
            return Polyhedron::empty(dim);
        }
        let mut hrays: Vec<RatVec> = Vec::new();
        for p in &points {
            let mut r = Vec::with_capacity(dim + 1);
            r.push(Rat::from_integer(1.into()));
            r.extend(p.iter().cloned());
            hrays.push(r);
        }
        for r in &rays {
            let mut h = zero_vec(dim + 1);
            h[1..].clone_from_slice(r);
            hrays.push(h);
        }
        let hlin: Vec<RatVec> = lineality
            .iter()
            .map(|l| {
                let mut h = zero_vec(dim + 1);
                h[1..].clone_from_slice(l);
                h
            })
            .collect();
        let cone = Cone::from_v(dim + 1, hrays, hlin);
        Self::from_homogenized(dim, &cone)
    }

    fn from_homogenized(dim: usize, cone: &Cone) -> Polyhedron {
        let mut points = Vec::new();
        let mut rays = Vec::new();
        for r in cone.rays() {
            let x0 = &r[0];
            if x0.is_positive() {
                let inv = x0.recip();
                points.push(crate::exact::scale_vec(&inv, &r[1..]));
            } else {
                debug_assert!(x0.is_zero());
                rays.push(r[1..].to_vec());
            }
        }
        if points.is_empty() {
            return Polyhedron::empty(dim);
        }
        let lineality: Vec<RatVec> = cone.lineality().iter().map(|l| l[1..].to_vec()).collect();
        Polyhedron {
            dim,
            points,
            rays,
            lineality,
            eq: dehomogenize_rows(cone.eq_rows()),
            ineq: dehomogenize_rows(cone.ineq_rows()),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Vertex representatives modulo lineality.
    pub fn points(&self) -> &[RatVec] {
        &self.points
    }

    pub fn rays(&self) -> &[RatVec] {
        &self.rays
    }

    pub fn lineality(&self) -> &[RatVec] {
        &self.lineality
    }

    pub fn eq_rows(&self) -> &[(RatVec, Rat)] {
        &self.eq
    }

    pub fn ineq_rows(&self) -> &[(RatVec, Rat)] {
        &self.ineq
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        if self.is_empty() {
            return false;
        }
        debug_assert_eq!(x.len(), self.dim);
        self.eq.iter().all(|(r, b)| dot(r, x) == *b)
            && self.ineq.iter().all(|(r, b)| dot(r, x) <= *b)
    }

    pub fn recession_contains(&self, r: &[Rat]) -> bool {
        if self.is_empty() {
            return false;
        }
        self.eq.iter().all(|(row, _)| dot(row, r).is_zero())
            && self.ineq.iter().all(|(row, _)| !dot(row, r).is_positive())
    }

    pub fn equal(&self, other: &Polyhedron) -> bool {
        if self.dim != other.dim {
            return false;
        }
        if self.is_empty() || other.is_empty() {
            return self.is_empty() == other.is_empty();
        }
        let inside = |a: &Polyhedron, b: &Polyhedron| -> bool {
            a.points.iter().all(|p| b.contains(p))
                && a.rays.iter().all(|r| b.recession_contains(r))
                && a.lineality.iter().all(|l| {
                    b.recession_contains(l) && b.recession_contains(&crate::exact::neg_vec(l))
                })
        };
        inside(self, other) && inside(other, self)
    }

    /// Single-point check: the polyhedron is exactly {x}.
    pub fn is_single_point(&self) -> Option<RatVec> {
        if self.points.len() == 1 && self.rays.is_empty() && self.lineality.is_empty() {
            Some(self.points[0].clone())
        } else {
            None
        }
    }

    pub fn intersect_rows(
        &self,
        extra_eq: Vec<(RatVec, Rat)>,
        extra_ineq: Vec<(RatVec, Rat)>,
    ) -> Polyhedron {
        if self.is_empty() {
            return Polyhedron::empty(self.dim);
        }
        let mut eq = self.eq.clone();
        eq.extend(extra_eq);
        let mut ineq = self.ineq.clone();
        ineq.extend(extra_ineq);
        Polyhedron::from_h(self.dim, eq, ineq)
    }

    pub fn intersect(&self, other: &Polyhedron) -> Polyhedron {
        if self.is_empty() || other.is_empty() {
            return Polyhedron::empty(self.dim);
        }
        self.intersect_rows(other.eq.clone(), other.ineq.clone())
    }

    pub fn project(&self, keep: &[usize]) -> Polyhedron {
        if self.is_empty() {
            return Polyhedron::empty(keep.len());
        }
        let pick = |v: &RatVec| -> RatVec { keep.iter().map(|&i| v[i].clone()).collect() };
        Polyhedron::from_v(
            keep.len(),
            self.points.iter().map(&pick).collect(),
            self.rays.iter().map(&pick).collect(),
            self.lineality.iter().map(&pick).collect(),
        )
    }

    /// Recession cone of a nonempty polyhedron.
    pub fn recession_cone(&self) -> Cone {
        Cone::from_v(self.dim, self.rays.clone(), self.lineality.clone())
    }

    pub fn canonical_key(&self) -> String {
        if self.is_empty() {
            return format!("empty[{}]", self.dim);
        }
        let fmt_rows = |rows: &[(RatVec, Rat)]| -> String {
            rows.iter()
                .map(|(r, b)| format!("{}|{}", fmt_vec(r), rat_to_string(b)))
                .collect::<Vec<_>>()
                .join(";")
        };
        format!("E[{}]I[{}]", fmt_rows(&self.eq), fmt_rows(&self.ineq))
    }
}

/// Cross-product embedding helper: places `rows` of a cone over a block of
/// coordinates starting at `offset` inside an ambient space of `total` coords.
pub fn embed_rows(rows: &[RatVec], offset: usize, total: usize) -> Vec<RatVec> {
    rows.iter()
        .map(|r| {
            let mut out = zero_vec(total);
            out[offset..offset + r.len()].clone_from_slice(r);
            out
        })
        .collect()
}

pub fn result_dim_check(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, vec_from_i64};
    use proptest::prelude::*;

    fn v(entries: &[i64]) -> RatVec {
        vec_from_i64(entries)
    }

    #[test]
    fn hyperplane_to_lineality() {
        // {x in R^2 | x2 = 0} -> lineality (1,0), no rays
        let c = Cone::from_h(2, vec![v(&[0, 1])], vec![]);
        assert!(c.rays().is_empty());
        assert_eq!(c.lineality(), &[v(&[1, 0])]);
    }

    #[test]
    fn critical_cone_with_sign_constraint() {
        // {v | v2 = 0, v1 <= 0} -> single ray (-1, 0)
        let c = Cone::from_h(2, vec![v(&[0, 1])], vec![v(&[1, 0])]);
        assert_eq!(c.rays(), &[v(&[-1, 0])]);
        assert!(c.lineality().is_empty());
    }

    #[test]
    fn first_orthant_vrep_to_hrep() {
        let c = Cone::from_v(2, vec![v(&[1, 0]), v(&[0, 1])], vec![]);
        assert_eq!(c.ineq_rows().len(), 2);
        assert!(c.eq_rows().is_empty());
        assert!(c.member(&v(&[2, 3])));
        assert!(!c.member(&v(&[-1, 0])));
        let mut rows = c.ineq_rows().to_vec();
        rows.sort();
        assert_eq!(rows, vec![v(&[-1, 0]), v(&[0, -1])]);
    }

    #[test]
    fn polar_of_full_space_is_origin() {
        let c = Cone::full_space(3);
        assert!(c.polar().is_trivial());
    }

    #[test]
    fn polar_of_line_is_orthogonal_complement() {
        let line = Cone::from_v(2, vec![], vec![v(&[1, 0])]);
        let p = line.polar();
        assert!(p.rays().is_empty());
        assert_eq!(p.lineality(), &[v(&[0, 1])]);
    }

    #[test]
    fn project_drops_free_coordinates() {
        // {(w, z) in R^1 x R^1 | z free} projected to w = full line
        let c = Cone::full_space(2);
        let p = c.project(&[0]);
        assert_eq!(p.lineality().len(), 1);
    }

    #[test]
    fn project_coupled_system() {
        // {(w, z) in R^2 x R^2 | z2 + 2 w1 = 0, w2 = 0}, keep w -> R x {0}
        let c = Cone::from_h(
            4,
            vec![v(&[2, 0, 0, 1]), v(&[0, 1, 0, 0])],
            vec![],
        );
        let p = c.project(&[0, 1]);
        let expected = Cone::from_v(2, vec![], vec![v(&[1, 0])]);
        assert!(p.equal(&expected));
    }

    #[test]
    fn project_orthant() {
        let c = Cone::from_h(3, vec![], vec![v(&[-1, 0, 0]), v(&[0, -1, 0]), v(&[0, 0, -1])]);
        let p = c.project(&[0, 1]);
        let expected = Cone::from_v(2, vec![v(&[1, 0]), v(&[0, 1])], vec![]);
        assert!(p.equal(&expected));
    }

    #[test]
    fn member_of_graph_piece() {
        // {(w*, w) | w2 = 0, w1* - 2 w1 = 0} contains ((2,0),(1,0))
        let c = Cone::from_h(
            4,
            vec![v(&[0, 0, 0, 1]), v(&[1, 0, -2, 0])],
            vec![],
        );
        assert!(c.member(&v(&[2, 0, 1, 0])));
        assert!(!c.member(&v(&[1, 0, 1, 0])));
    }

    #[test]
    fn faces_of_negative_ray() {
        let c = Cone::from_h(2, vec![v(&[0, 1])], vec![v(&[1, 0])]);
        let faces = c.faces_with_samples();
        assert_eq!(faces.len(), 2);
        assert!(faces[0].0.is_trivial());
        assert_eq!(faces[1].1, v(&[-1, 0]));
    }

    #[test]
    fn faces_of_line_split_into_opposite_rays() {
        let c = Cone::from_v(2, vec![], vec![v(&[1, 0])]);
        let faces = c.faces_with_samples();
        // {0}, +ray, -ray, and the line itself
        assert_eq!(faces.len(), 4);
        let samples: Vec<RatVec> = faces.iter().map(|(_, s)| s.clone()).collect();
        assert!(samples.contains(&v(&[1, 0])));
        assert!(samples.contains(&v(&[-1, 0])));
    }

    #[test]
    fn faces_of_first_orthant() {
        let c = Cone::from_v(2, vec![v(&[1, 0]), v(&[0, 1])], vec![]);
        let faces = c.faces_with_samples();
        assert_eq!(faces.len(), 4);
        let samples: Vec<RatVec> = faces.iter().map(|(_, s)| s.clone()).collect();
        assert!(samples.contains(&v(&[1, 0])));
        assert!(samples.contains(&v(&[0, 1])));
        assert!(samples.contains(&v(&[1, 1])));
    }

    #[test]
    fn empty_polyhedron_from_infeasible_rows() {
        let p = Polyhedron::from_h(2, vec![], vec![(v(&[0, 0]), rat(-1))]);
        assert!(p.is_empty());
        assert!(!p.contains(&v(&[0, 0])));
        assert!(p.equal(&Polyhedron::empty(2)));
    }

    #[test]
    fn halfspace_has_point_ray_lineality() {
        let p = Polyhedron::from_h(2, vec![], vec![(v(&[1, 0]), rat(0))]);
        assert!(!p.is_empty());
        assert_eq!(p.points().len(), 1);
        assert_eq!(p.rays().len(), 1);
        assert_eq!(p.lineality().len(), 1);
        assert!(p.contains(&v(&[-5, 7])));
        assert!(!p.contains(&v(&[1, 0])));
    }

    #[test]
    fn polytope_hull_roundtrip() {
        let p = Polyhedron::from_v(2, vec![v(&[0, 0]), v(&[1, 0]), v(&[0, 1])], vec![], vec![]);
        assert!(p.contains(&vec![crate::exact::ratio(1, 3), crate::exact::ratio(1, 3)]));
        assert!(!p.contains(&v(&[1, 1])));
        let q = Polyhedron::from_h(2, p.eq_rows().to_vec(), p.ineq_rows().to_vec());
        assert!(p.equal(&q));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn dd_roundtrip(rows in proptest::collection::vec(
            proptest::collection::vec(-2i64..=2, 3), 0..5), neq in 0usize..2)
        {
            let dim = 3;
            let rows: Vec<RatVec> = rows.iter().map(|r| vec_from_i64(r)).collect();
            let eq: Vec<RatVec> = rows.iter().take(neq.min(rows.len())).cloned().collect();
            let ineq: Vec<RatVec> = rows.iter().skip(neq.min(rows.len())).cloned().collect();
            let c = Cone::from_h(dim, eq, ineq);
            // rebuild from generators: same set
            let c2 = Cone::from_v(dim, c.rays().to_vec(), c.lineality().to_vec());
            prop_assert!(c.equal(&c2));
            // canonical forms agree exactly
            prop_assert_eq!(c.canonical_key(), c2.canonical_key());
        }

        #[test]
        fn bipolar_identity(rows in proptest::collection::vec(
            proptest::collection::vec(-2i64..=2, 3), 0..5))
        {
            let dim = 3;
            let ineq: Vec<RatVec> = rows.iter().map(|r| vec_from_i64(r)).collect();
            let c = Cone::from_h(dim, vec![], ineq);
            prop_assert!(c.polar().polar().equal(&c));
        }

        #[test]
        fn generators_satisfy_hrep(rays in proptest::collection::vec(
            proptest::collection::vec(-2i64..=2, 3), 1..5))
        {
            let dim = 3;
            let rays: Vec<RatVec> = rays.iter().map(|r| vec_from_i64(r)).collect();
            let c = Cone::from_v(dim, rays.clone(), vec![]);
            for r in &rays {
                prop_assert!(c.member(r));
            }
        }
    }
}
