//! Parameterized generalized equations 0 in F(x, y) + N(y): builds the
//! equation model at a reference equilibrium and decides the Aubin property
//! of the solution map by the coderivative criterion over assembled cone
//! unions.

use num::Zero;

use crate::assembly::{Completeness, ConeUnion};
use crate::cones::ConePiece;
use crate::error::{Error, Result};
use crate::exact::{add_vec, is_zero_vec, rank, vec_to_string, Rat, RatMat, RatVec};
use crate::model::ProblemData;
use crate::polyexpr::{jet2, Poly};
use crate::polyhedra::Cone;
use crate::regularity::Verdict;

/// Generalized-equation model at the reference pair: the field F, its partial
/// Jacobians at (xbar, ybar), and the constraint data.
#[derive(Clone, Debug)]
pub struct GeModel {
    pub components: Vec<Poly>,
    pub xbar: RatVec,
    pub problem: ProblemData,
    /// gradient of F in the decision variable (m x m)
    pub dy: RatMat,
    /// gradient of F in the parameter (m x n)
    pub dx: RatMat,
}

/// Evaluates the field at the reference equilibrium; the consistency
/// condition F(xbar, ybar) = -ystar is enforced exactly. Components are
/// polynomials in the parameter variables followed by the decision variables.
pub fn build_ge(components: &[Poly], xbar: &[Rat], problem: &ProblemData) -> Result<GeModel> {
    let n = xbar.len();
    let m = problem.m;
    if components.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: components.len(),
        });
    }
    let mut point = xbar.to_vec();
    point.extend(problem.ybar.iter().cloned());
    let mut values = Vec::with_capacity(m);
    let mut dy_rows = Vec::with_capacity(m);
    let mut dx_rows = Vec::with_capacity(m);
    for c in components {
        if c.nvars() != n + m {
            return Err(Error::DimensionMismatch {
                expected: n + m,
                got: c.nvars(),
            });
        }
        let (val, grad, _) = jet2(c, &point);
        values.push(val);
        dx_rows.push(grad[..n].to_vec());
        dy_rows.push(grad[n..].to_vec());
    }
    let neg_ystar: RatVec = problem.ystar.iter().map(|x| -x).collect();
    if values != neg_ystar {
        return Err(Error::InconsistentEquilibrium {
            got: vec_to_string(&values),
        });
    }
    Ok(GeModel {
        components: components.to_vec(),
        xbar: xbar.to_vec(),
        problem: problem.clone(),
        dy: RatMat::from_rows(dy_rows),
        dx: RatMat::from_rows(dx_rows),
    })
}

/// The cone {b | (-dy^T b, -b) in piece}, obtained by substituting the pair
/// into the piece's halfspace description.
pub fn criterion_cone(ge: &GeModel, piece: &ConePiece) -> Cone {
    let m = ge.problem.m;
    let substitute = |row: &RatVec| -> RatVec {
        // row = (r_a | r_b) acting on (w*, w) = (-dy^T b, -b):
        //   row . (w*, w) = -(dy r_a + r_b) . b
        let ra = &row[..m];
        let rb = &row[m..];
        let combined = add_vec(&ge.dy.mat_vec(ra), rb);
        combined.iter().map(|x| -x).collect()
    };
    Cone::from_h(
        m,
        piece.set.eq_rows().iter().map(&substitute).collect(),
        piece.set.ineq_rows().iter().map(&substitute).collect(),
    )
}

fn union_criterion_witness(ge: &GeModel, union: &ConeUnion) -> Option<(RatVec, ConePiece)> {
    for piece in &union.pieces {
        let cone = criterion_cone(ge, piece);
        if let Some(b) = cone
            .rays()
            .first()
            .or_else(|| cone.lineality().first())
        {
            return Some((b.clone(), piece.clone()));
        }
    }
    None
}

/// Decides the Aubin property of the solution map at the reference pair by
/// the coderivative criterion: Proven when the criterion cone of every piece
/// of the outer collection is trivial (and the regularity hypotheses are
/// certified); Disproven with an exact witness when an inner piece yields a
/// nonzero criterion direction and the parameter Jacobian is surjective;
/// Unknown otherwise.
pub fn aubin_verdict(
    ge: &GeModel,
    lower: &ConeUnion,
    upper: &ConeUnion,
    vicinity: &Verdict,
) -> Result<Verdict> {
    let upper_holds = union_criterion_witness(ge, upper).is_none();
    if upper_holds {
        if !vicinity.is_proven() {
            return Ok(Verdict::Unknown {
                reason: "criterion holds on the outer estimate but graph closedness is uncertified"
                    .to_string(),
            });
        }
        if !matches!(
            upper.completeness,
            Completeness::Exact | Completeness::UpperEstimate
        ) {
            return Ok(Verdict::Unknown {
                reason: format!(
                    "outer estimate not certified: {}",
                    upper.completeness.label()
                ),
            });
        }
        return Ok(Verdict::Proven);
    }
    // the criterion fails on the outer estimate; look for a certified
    // refutation on the inner one
    let lower_certified = matches!(
        lower.completeness,
        Completeness::Exact | Completeness::LowerEstimate
    );
    if lower_certified {
        if let Some((b, piece)) = union_criterion_witness(ge, lower) {
            let surjective = rank(&ge.dx) == ge.problem.m;
            if surjective {
                // re-substitute: (-dy^T b, -b) must lie in the witness piece
                let mut pair: RatVec = ge.dy.transpose().mat_vec(&b).iter().map(|x| -x).collect();
                pair.extend(b.iter().map(|x| -x));
                if !piece.set.member(&pair) || is_zero_vec(&b) {
                    return Err(Error::Internal(
                        "criterion witness failed re-substitution".to_string(),
                    ));
                }
                return Ok(Verdict::Disproven { witness: vec![b] });
            }
            return Ok(Verdict::Unknown {
                reason: "criterion fails but necessity unproven (parameter Jacobian not surjective)"
                    .to_string(),
            });
        }
    }
    Ok(Verdict::Unknown {
        reason: "criterion fails on the outer estimate without a certified inner witness"
            .to_string(),
    })
}
