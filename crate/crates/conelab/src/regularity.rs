//! Constraint-qualification checks: linear independence, the
//! Mangasarian-Fromovitz kernel test, directional 2-regularity, its
//! family-wide sufficiency verdict, and the tiered second-order certificate
//! implying metric subregularity plus regularity in the vicinity.

use num::{Signed, Zero};

use crate::error::Result;
use crate::exact::{dot, rank, rat, zero_vec, Rat, RatMat, RatVec};
use crate::model::{geometry, IndexSet, ProblemData};
use crate::polyhedra::Cone;

/// Tiered certification outcome. A `Disproven` verdict always carries an
/// exact witness tuple that re-substitutes into the violated condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Proven,
    Disproven { witness: Vec<RatVec> },
    Unknown { reason: String },
}

impl Verdict {
    pub fn is_proven(&self) -> bool {
        matches!(self, Verdict::Proven)
    }

    pub fn label(&self) -> String {
        match self {
            Verdict::Proven => "Proven".to_string(),
            Verdict::Disproven { .. } => "Disproven".to_string(),
            Verdict::Unknown { reason } => format!("Unknown({reason})"),
        }
    }
}

/// The kernel cone {lambda | grad^T lambda = 0, lambda >= 0 on the active
/// set, lambda = 0 elsewhere}; trivial iff the Mangasarian-Fromovitz
/// condition holds.
pub fn kernel_cone(p: &ProblemData) -> Cone {
    let gt = p.grad.transpose();
    let mut eq: Vec<RatVec> = (0..p.m).map(|j| gt.row(j).to_vec()).collect();
    let mut ineq: Vec<RatVec> = Vec::new();
    for i in 0..p.l {
        let mut row = zero_vec(p.l);
        if p.active.contains(&i) {
            row[i] = rat(-1);
            ineq.push(row);
        } else {
            row[i] = rat(1);
            eq.push(row);
        }
    }
    Cone::from_h(p.l, eq, ineq)
}

/// (LICQ, MFCQ) at the reference point.
pub fn classic_cq(p: &ProblemData) -> (bool, bool) {
    let active_rows: Vec<RatVec> = p.active.iter().map(|&i| p.grad.row(i).to_vec()).collect();
    let licq = if active_rows.is_empty() {
        true
    } else {
        rank(&RatMat::from_rows(active_rows)) == p.active.len()
    };
    let mfcq = kernel_cone(p).is_trivial();
    (licq, mfcq)
}

/// A nonzero element of the kernel cone, if one exists (MFCQ violation
/// witness).
pub fn mfcq_witness(p: &ProblemData) -> Option<RatVec> {
    let c = kernel_cone(p);
    c.rays()
        .first()
        .or_else(|| c.lineality().first())
        .cloned()
}

/// Directional 2-regularity of the constraint subfamily `j_set` along `v`:
/// the only multiplier with grad_J^T lambda = 0 whose curvature image
/// (v^T H_J)^T lambda lies in range(grad_J^T) is zero. Decided by one exact
/// rank computation.
pub fn two_regular(p: &ProblemData, j_set: &IndexSet, v: &[Rat]) -> bool {
    let k = j_set.len();
    if k == 0 {
        return true;
    }
    let g_j = RatMat::from_rows(j_set.iter().map(|&i| p.grad.row(i).to_vec()).collect());
    // rows of the test matrix: the m rows of grad_J^T ...
    let mut rows: Vec<RatVec> = g_j.transpose().rows_vec();
    // ... plus one row per kernel basis vector x of grad_J, pairing
    // lambda -> x^T (v^T H_J)^T lambda
    let (_, kernel) = crate::exact::rank_kernel(&g_j);
    for x in kernel {
        let row: RatVec = j_set
            .iter()
            .map(|&i| dot(&p.hess[i].mat_vec(&x), v))
            .collect();
        rows.push(row);
    }
    rank(&RatMat::from_rows(rows)) == k
}

/// Sufficiency check for the directional constraint qualification: proven
/// when every maximal achievable active family along `v` is 2-regular. The
/// full neighborhood-quantified property is not decidable exactly, so the
/// negative branch reports Unknown rather than Disproven.
pub fn two_licq(p: &ProblemData, v: &[Rat], jfam: &crate::cones::JFamily) -> Verdict {
    for member in &jfam.members {
        if member.maximal && !two_regular(p, &member.set, v) {
            return Verdict::Unknown {
                reason: format!(
                    "sufficient condition failed: family {} is not 2-regular along the direction",
                    crate::model::format_index_set(&member.set)
                ),
            };
        }
    }
    Verdict::Proven
}

/// Tiered second-order certificate for metric subregularity (and regularity
/// in the vicinity of the reference point).
///
/// Tier MFCQ: the kernel cone is trivial. Tier (a): for every extreme ray of
/// the kernel cone, the weighted Hessian form is negative definite on the
/// span of the linearized cone (leading-principal-minor signs, exact).
/// Tier (b): recursive copositivity subdivision over the generators of the
/// linearized cone with an entrywise-negative Gram certificate. Any sampled
/// direction with nonnegative curvature yields an exact Disproven witness.
pub fn soscms(p: &ProblemData) -> Verdict {
    let c = kernel_cone(p);
    if c.is_trivial() {
        return Verdict::Proven;
    }
    debug_assert!(c.lineality().is_empty(), "kernel cone sits in an orthant");
    let tlin = geometry(p).tlin;
    let gens = tlin.generators();
    if gens.is_empty() {
        return Verdict::Proven; // linearized cone is trivial, nothing to test
    }
    let span = crate::exact::canonical_subspace_basis(&gens, p.m);
    for ray in c.rays() {
        let h = p.weighted_hessian(ray);
        if negative_definite_on_span(&h, &span) {
            continue;
        }
        match strictly_negative_on_cone(&h, &gens, 8) {
            ConeFormStatus::Negative => continue,
            ConeFormStatus::Witness(u) => {
                return Verdict::Disproven {
                    witness: vec![ray.clone(), u],
                };
            }
            ConeFormStatus::Undecided => {
                return Verdict::Unknown {
                    reason: "copositivity undecided at desk tier".to_string(),
                };
            }
        }
    }
    Verdict::Proven
}

/// Exact negative definiteness of the symmetric form restricted to the span
/// with the given basis, via leading principal minors of the negated
/// restricted matrix.
fn negative_definite_on_span(h: &RatMat, basis: &[RatVec]) -> bool {
    let d = basis.len();
    if d == 0 {
        return false; // span is trivial; defer to the cone test
    }
    let mut r = RatMat::zeros(d, d);
    for a in 0..d {
        for b in 0..d {
            r.set(a, b, -dot(&h.mat_vec(&basis[b]), &basis[a]));
        }
    }
    for k in 1..=d {
        if !leading_minor(&r, k).is_positive() {
            return false;
        }
    }
    true
}

fn leading_minor(m: &RatMat, k: usize) -> Rat {
    determinant(&m.select_rows(&(0..k).collect::<Vec<_>>()), k)
}

fn determinant(m: &RatMat, k: usize) -> Rat {
    // Gaussian elimination on a copy of the leading k x k block
    let mut a: Vec<RatVec> = (0..k).map(|i| m.row(i)[..k].to_vec()).collect();
    let mut det = rat(1);
    for c in 0..k {
        let Some(pivot) = (c..k).find(|&r| !a[r][c].is_zero()) else {
            return Rat::zero();
        };
        if pivot != c {
            a.swap(pivot, c);
            det = -det;
        }
        det *= a[c][c].clone();
        let inv = a[c][c].recip();
        for r in (c + 1)..k {
            let f = &a[r][c] * &inv;
            if f.is_zero() {
                continue;
            }
            for j in c..k {
                let val = &a[r][j] - &f * &a[c][j];
                a[r][j] = val;
            }
        }
    }
    det
}

enum ConeFormStatus {
    Negative,
    Witness(RatVec),
    Undecided,
}

/// Sound recursive test for u^T H u < 0 on the conic hull of `gens` minus the
/// origin. Entrywise-negative Gram matrices certify negativity; any generated
/// direction with nonnegative value is an exact counterexample.
fn strictly_negative_on_cone(h: &RatMat, gens: &[RatVec], depth: usize) -> ConeFormStatus {
    for g in gens {
        let q = dot(&h.mat_vec(g), g);
        if !q.is_negative() {
            return ConeFormStatus::Witness(g.clone());
        }
    }
    let n = gens.len();
    let mut bad_pair: Option<(usize, usize)> = None;
    'outer: for i in 0..n {
        for j in (i + 1)..n {
            let q = dot(&h.mat_vec(&gens[j]), &gens[i]);
            if !q.is_negative() {
                bad_pair = Some((i, j));
                break 'outer;
            }
        }
    }
    let Some((i, j)) = bad_pair else {
        return ConeFormStatus::Negative;
    };
    if depth == 0 {
        return ConeFormStatus::Undecided;
    }
    let mid = crate::exact::add_vec(&gens[i], &gens[j]);
    let qm = dot(&h.mat_vec(&mid), &mid);
    if !qm.is_negative() {
        return ConeFormStatus::Witness(mid);
    }
    let mut left = gens.to_vec();
    left[j] = mid.clone();
    let mut right = gens.to_vec();
    right[i] = mid;
    match strictly_negative_on_cone(h, &left, depth - 1) {
        ConeFormStatus::Negative => strictly_negative_on_cone(h, &right, depth - 1),
        other => other,
    }
}

/// Re-substitution check for a Disproven second-order witness.
pub fn verify_soscms_witness(p: &ProblemData, witness: &[RatVec]) -> Result<bool> {
    let [lambda, u] = witness else {
        return Ok(false);
    };
    let c = kernel_cone(p);
    let tlin = geometry(p).tlin;
    let q = dot(&p.weighted_hessian(lambda).mat_vec(u), u);
    Ok(c.member(lambda)
        && !crate::exact::is_zero_vec(lambda)
        && tlin.member(u)
        && !crate::exact::is_zero_vec(u)
        && !q.is_negative())
}
