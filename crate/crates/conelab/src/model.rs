//! Point-based problem data at the reference pair and the first-order cones
//! derived from it.

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{dot, rat_to_string, Rat, RatMat, RatVec};
use crate::polyexpr::{jet2, Poly};
use crate::polyhedra::{Cone, Polyhedron};
use crate::simplex;

/// Index set over constraints, kept sorted.
pub type IndexSet = std::collections::BTreeSet<usize>;

pub fn index_set(indices: &[usize]) -> IndexSet {
    indices.iter().copied().collect()
}

pub fn format_index_set(s: &IndexSet) -> String {
    let parts: Vec<String> = s.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Constraint system evaluated at the reference point: values, gradients,
/// Hessians, active set and the reference normal.
#[derive(Clone, Debug)]
pub struct ProblemData {
    /// ambient dimension of the decision variable
    pub m: usize,
    /// number of constraints
    pub l: usize,
    /// q(ybar)
    pub qvals: RatVec,
    /// gradient rows: row i is the gradient of constraint i at ybar
    pub grad: RatMat,
    /// Hessians of the constraints at ybar
    pub hess: Vec<RatMat>,
    pub ybar: RatVec,
    pub ystar: RatVec,
    /// active constraints at ybar
    pub active: IndexSet,
}

impl ProblemData {
    /// Hessian of the multiplier-weighted sum at ybar.
    pub fn weighted_hessian(&self, lambda: &[Rat]) -> RatMat {
        assert_eq!(lambda.len(), self.l);
        let mut acc = RatMat::zeros(self.m, self.m);
        for (i, h) in self.hess.iter().enumerate() {
            if !lambda[i].is_zero() {
                acc = acc.add(&h.scale(&lambda[i]));
            }
        }
        acc
    }

    /// grad^T lambda as a vector in decision space.
    pub fn combine_gradients(&self, lambda: &[Rat]) -> RatVec {
        self.grad.vec_mat(lambda)
    }

    /// Row of second-order couplings: (v^T H_i w) for each constraint i.
    pub fn curvature_pairing(&self, v: &[Rat], w: &[Rat]) -> RatVec {
        self.hess
            .iter()
            .map(|h| dot(&h.mat_vec(w), v))
            .collect()
    }

    pub fn active_indices(&self) -> Vec<usize> {
        self.active.iter().copied().collect()
    }
}

/// Evaluates all constraint jets at `ybar`, determines the active set and
/// validates that `ystar` is a representable normal (some multiplier
/// lambda >= 0 supported on the active set with grad^T lambda = ystar).
pub fn build_problem(constraints: &[Poly], ybar: &[Rat], ystar: &[Rat]) -> Result<ProblemData> {
    let m = ybar.len();
    if ystar.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: ystar.len(),
        });
    }
    let l = constraints.len();
    let mut qvals = Vec::with_capacity(l);
    let mut grad_rows = Vec::with_capacity(l);
    let mut hess = Vec::with_capacity(l);
    let mut active = IndexSet::new();
    for (i, p) in constraints.iter().enumerate() {
        if p.nvars() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: p.nvars(),
            });
        }
        let (v, g, h) = jet2(p, ybar);
        if v.is_positive() {
            return Err(Error::InfeasiblePoint {
                index: i + 1,
                value: rat_to_string(&v),
            });
        }
        if v.is_zero() {
            active.insert(i);
        }
        qvals.push(v);
        grad_rows.push(g);
        hess.push(h);
    }
    let data = ProblemData {
        m,
        l,
        qvals,
        grad: RatMat::from_rows(grad_rows),
        hess,
        ybar: ybar.to_vec(),
        ystar: ystar.to_vec(),
        active,
    };
    if multiplier_polyhedron(&data).is_empty() {
        return Err(Error::NotANormal);
    }
    Ok(data)
}

/// The multiplier polyhedron {lambda | lambda >= 0, lambda_i = 0 off the
/// active set, grad^T lambda = ystar} in R^l.
pub fn multiplier_polyhedron(p: &ProblemData) -> Polyhedron {
    let mut eq: Vec<(RatVec, Rat)> = Vec::new();
    let mut ineq: Vec<(RatVec, Rat)> = Vec::new();
    // grad^T lambda = ystar, one row per decision coordinate
    let gt = p.grad.transpose();
    for j in 0..p.m {
        eq.push((gt.row(j).to_vec(), p.ystar[j].clone()));
    }
    for i in 0..p.l {
        let mut row = crate::exact::zero_vec(p.l);
        if p.active.contains(&i) {
            row[i] = crate::exact::rat(-1);
            ineq.push((row, Rat::zero()));
        } else {
            row[i] = crate::exact::rat(1);
            eq.push((row, Rat::zero()));
        }
    }
    Polyhedron::from_h(p.l, eq, ineq)
}

/// First-order cones at the reference pair.
#[derive(Clone, Debug)]
pub struct Geometry {
    /// linearized tangent cone {v | grad_i v <= 0, i active}
    pub tlin: Cone,
    /// critical cone: tlin intersected with the hyperplane ystar.v = 0
    pub kbar: Cone,
    /// null space of the active gradients
    pub nullspace: Cone,
}

pub fn geometry(p: &ProblemData) -> Geometry {
    let active_rows: Vec<RatVec> = p
        .active
        .iter()
        .map(|&i| p.grad.row(i).to_vec())
        .collect();
    let tlin = Cone::from_h(p.m, Vec::new(), active_rows.clone());
    let kbar = Cone::from_h(p.m, vec![p.ystar.clone()], active_rows.clone());
    let nullspace = Cone::from_h(p.m, active_rows, Vec::new());
    Geometry {
        tlin,
        kbar,
        nullspace,
    }
}

/// Active constraints whose gradient is orthogonal to the direction `v`.
/// Errors if `v` leaves the linearized cone.
pub fn active_dir(p: &ProblemData, v: &[Rat]) -> Result<IndexSet> {
    let mut out = IndexSet::new();
    for &i in &p.active {
        let slope = dot(p.grad.row(i), v);
        if slope.is_positive() {
            return Err(Error::DirectionNotTangent {
                index: i + 1,
                value: rat_to_string(&slope),
            });
        }
        if slope.is_zero() {
            out.insert(i);
        }
    }
    Ok(out)
}

/// Checks feasibility of the multiplier system via the exact LP layer; used
/// by tests as an independent route to `multiplier_polyhedron`.
pub fn normal_representable(p: &ProblemData) -> Result<bool> {
    simplex::feasible(&multiplier_polyhedron(p))
}

#[cfg(test)]
pub mod fixtures {
    //! Shared test fixtures: the worked constraint systems used throughout
    //! the test suite.
    use super::*;
    use crate::exact::vec_from_i64;
    use crate::polyexpr::{parse_poly, var_names};

    /// Two parabolic constraints; critical cone is a full line.
    pub fn fixture_a() -> ProblemData {
        let vars = var_names(&["y1", "y2"]);
        let q = vec![
            parse_poly("-y1^2 + y2", &vars).unwrap(),
            parse_poly("-y1^2 - y2", &vars).unwrap(),
        ];
        build_problem(&q, &vec_from_i64(&[0, 0]), &vec_from_i64(&[0, 1])).unwrap()
    }

    /// Fixture A plus the linear constraint y1 <= 0; critical cone is a ray.
    pub fn fixture_b() -> ProblemData {
        let vars = var_names(&["y1", "y2"]);
        let q = vec![
            parse_poly("-y1^2 + y2", &vars).unwrap(),
            parse_poly("-y1^2 - y2", &vars).unwrap(),
            parse_poly("y1", &vars).unwrap(),
        ];
        build_problem(&q, &vec_from_i64(&[0, 0]), &vec_from_i64(&[0, 1])).unwrap()
    }

    /// Nonpositive orthant via identity gradients; LICQ holds.
    pub fn fixture_c() -> ProblemData {
        let vars = var_names(&["y1", "y2"]);
        let q = vec![
            parse_poly("y1", &vars).unwrap(),
            parse_poly("y2", &vars).unwrap(),
        ];
        build_problem(&q, &vec_from_i64(&[0, 0]), &vec_from_i64(&[1, 0])).unwrap()
    }

    /// Two cubic constraints with coincident gradients and zero Hessians at
    /// the origin; MFCQ holds.
    pub fn fixture_d() -> ProblemData {
        let vars = var_names(&["y1", "y2", "y3"]);
        let q = vec![
            parse_poly("y3 - y1^3", &vars).unwrap(),
            parse_poly("y3 - y2^3", &vars).unwrap(),
        ];
        build_problem(&q, &vec_from_i64(&[0, 0, 0]), &vec_from_i64(&[0, 0, 1])).unwrap()
    }
}
