//! Exact rational linear programming: two-phase simplex with Bland's rule,
//! verified optimality certificates, and optimal-face extraction.

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{dot, zero_vec, Rat, RatMat, RatVec};
use crate::polyhedra::Polyhedron;

/// Outcome of an exact LP solve. `Optimal` carries a primal point, the exact
/// optimal value and a dual vector (one multiplier per h-rep row, equalities
/// first) satisfying the strong-duality identities; `Unbounded` carries a
/// feasible recession direction with strictly negative objective.
#[derive(Clone, Debug)]
pub enum LpOutcome {
    Infeasible,
    Unbounded { direction: RatVec },
    Optimal { value: Rat, point: RatVec, dual: RatVec },
}

struct Tableau {
    /// rows x cols coefficient matrix of the standard-form system Ax = b
    a: Vec<RatVec>,
    b: RatVec,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.a[row][col].recip();
        for j in 0..self.ncols {
            let v = &self.a[row][j] * &inv;
            self.a[row][j] = v;
        }
        let bv = &self.b[row] * &inv;
        self.b[row] = bv;
        for i in 0..self.a.len() {
            if i == row || self.a[i][col].is_zero() {
                continue;
            }
            let f = self.a[i][col].clone();
            for j in 0..self.ncols {
                let v = &self.a[i][j] - &f * &self.a[row][j];
                self.a[i][j] = v;
            }
            let bv = &self.b[i] - &f * &self.b[row];
            self.b[i] = bv;
        }
        self.basis[row] = col;
    }

    /// Simplex iterations with Bland's anti-cycling rule, minimizing cost.
    /// Returns Some(entering) on unboundedness.
    fn run(&mut self, cost: &[Rat], allowed: &dyn Fn(usize) -> bool) -> Option<usize> {
        loop {
            // reduced costs: c_j - c_B . B^-1 A_j  (tableau form keeps B^-1 A)
            let mut entering = None;
            for j in 0..self.ncols {
                if !allowed(j) || self.basis.contains(&j) {
                    continue;
                }
                let mut red = cost[j].clone();
                for (i, &bi) in self.basis.iter().enumerate() {
                    red -= &cost[bi] * &self.a[i][j];
                }
                if red.is_negative() {
                    entering = Some(j);
                    break; // Bland: smallest eligible index
                }
            }
            let Some(col) = entering else {
                return None;
            };
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.a.len() {
                if self.a[i][col].is_positive() {
                    let ratio = &self.b[i] / &self.a[i][col];
                    match &leave {
                        None => leave = Some((i, ratio)),
                        Some((li, lr)) => {
                            // Bland tie-break: smaller ratio, then smaller basis index
                            if ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]) {
                                leave = Some((i, ratio));
                            }
                        }
                    }
                }
            }
            match leave {
                Some((row, _)) => self.pivot(row, col),
                None => return Some(col),
            }
        }
    }
}

/// Minimizes `objective . x` over a polyhedron given in h-rep.
///
/// Free variables are split as x = xp - xm and inequalities receive slack
/// variables; phase one drives artificial variables out of the basis. Every
/// `Optimal` outcome is re-verified before being returned: exact primal
/// feasibility, exact dual feasibility, and equal primal/dual values.
pub fn lp_solve(objective: &[Rat], p: &Polyhedron) -> Result<LpOutcome> {
    let n = p.ambient_dim();
    if objective.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: objective.len(),
        });
    }
    if p.is_empty() {
        return Ok(LpOutcome::Infeasible);
    }
    let eq = p.eq_rows();
    let ineq = p.ineq_rows();
    let nrows = eq.len() + ineq.len();
    let nslack = ineq.len();
    let nstruct = 2 * n + nslack;
    let ncols = nstruct + nrows;

    // standard form rows; remember the sign applied to reach rhs >= 0
    let mut a: Vec<RatVec> = Vec::with_capacity(nrows);
    let mut b: RatVec = Vec::with_capacity(nrows);
    let mut build_row = |coeff: &RatVec, rhs: &Rat, slack: Option<usize>| {
        let mut row = zero_vec(ncols);
        for j in 0..n {
            row[j] = coeff[j].clone();
            row[n + j] = -coeff[j].clone();
        }
        if let Some(s) = slack {
            row[2 * n + s] = Rat::from_integer(1.into());
        }
        let mut rhs = rhs.clone();
        let flip = rhs.is_negative();
        if flip {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
            rhs = -rhs;
        }
        let k = a.len();
        row[nstruct + k] = Rat::from_integer(1.into());
        a.push(row);
        b.push(rhs);
    };
    for (coeff, rhs) in eq {
        build_row(coeff, rhs, None);
    }
    for (s, (coeff, rhs)) in ineq.iter().enumerate() {
        build_row(coeff, rhs, Some(s));
    }

    let mut t = Tableau {
        a,
        b,
        basis: (nstruct..ncols).collect(),
        ncols,
    };

    // phase one: minimize the sum of artificials
    let mut phase1 = zero_vec(ncols);
    for j in nstruct..ncols {
        phase1[j] = Rat::from_integer(1.into());
    }
    let unb = t.run(&phase1, &|_| true);
    debug_assert!(unb.is_none(), "phase one cannot be unbounded");
    let mut infeas = Rat::zero();
    for (i, &bi) in t.basis.iter().enumerate() {
        if bi >= nstruct {
            infeas += &t.b[i];
        }
    }
    if !infeas.is_zero() {
        return Ok(LpOutcome::Infeasible);
    }
    // drive remaining artificials out of the basis; drop redundant rows
    let mut drop_rows: Vec<usize> = Vec::new();
    for i in 0..t.basis.len() {
        if t.basis[i] < nstruct {
            continue;
        }
        match (0..nstruct).find(|&j| !t.a[i][j].is_zero()) {
            Some(j) => t.pivot(i, j),
            None => drop_rows.push(i),
        }
    }
    if !drop_rows.is_empty() {
        for &i in drop_rows.iter().rev() {
            t.a.remove(i);
            t.b.remove(i);
            t.basis.remove(i);
        }
    }

    // phase two over structural columns only
    let mut cost = zero_vec(ncols);
    for j in 0..n {
        cost[j] = objective[j].clone();
        cost[n + j] = -objective[j].clone();
    }
    let unbounded = t.run(&cost, &|j| j < nstruct);
    if let Some(col) = unbounded {
        // recession direction: entering column with nonpositive tableau column
        let mut dstd = zero_vec(nstruct);
        dstd[col] = Rat::from_integer(1.into());
        for (i, &bi) in t.basis.iter().enumerate() {
            if bi < nstruct {
                dstd[bi] = -t.a[i][col].clone();
            }
        }
        let direction: RatVec = (0..n).map(|j| &dstd[j] - &dstd[n + j]).collect();
        debug_assert!(p.recession_contains(&direction));
        debug_assert!(dot(objective, &direction).is_negative());
        return Ok(LpOutcome::Unbounded { direction });
    }

    // primal point
    let mut xstd = zero_vec(nstruct);
    for (i, &bi) in t.basis.iter().enumerate() {
        if bi < nstruct {
            xstd[bi] = t.b[i].clone();
        }
    }
    let point: RatVec = (0..n).map(|j| &xstd[j] - &xstd[n + j]).collect();
    let value = dot(objective, &point);

    // dual from the basis: solve Bᵀ y = c_B over the surviving rows, then
    // undo row sign flips and reinsert zeros for dropped redundant rows
    let kept: Vec<usize> = {
        let mut kept: Vec<usize> = (0..nrows).collect();
        for &i in drop_rows.iter().rev() {
            kept.remove(i);
        }
        kept
    };
    let orig_std_rows = standard_rows(p, n, nstruct);
    let bt = RatMat::from_rows(
        t.basis
            .iter()
            .map(|&bi| kept.iter().map(|&r| orig_std_rows[r][bi].clone()).collect())
            .collect(),
    );
    let cb: RatVec = t.basis.iter().map(|&bi| cost[bi].clone()).collect();
    // solving against the unflipped rows yields multipliers for the original
    // row orientation directly
    let y_kept = crate::exact::solve_linear(&bt, &cb)?
        .ok_or_else(|| Error::Internal("dual system inconsistent".to_string()))?;
    let mut dual = zero_vec(nrows);
    for (slot, &r) in kept.iter().enumerate() {
        dual[r] = y_kept[slot].clone();
    }

    verify_certificates(objective, p, &point, &value, &dual)?;
    Ok(LpOutcome::Optimal { value, point, dual })
}

/// Standard-form rows without sign flips (for dual recovery).
fn standard_rows(p: &Polyhedron, n: usize, nstruct: usize) -> Vec<RatVec> {
    let mut rows = Vec::new();
    let mut push = |coeff: &RatVec, slack: Option<usize>| {
        let mut row = zero_vec(nstruct);
        for j in 0..n {
            row[j] = coeff[j].clone();
            row[n + j] = -coeff[j].clone();
        }
        if let Some(s) = slack {
            row[2 * n + s] = Rat::from_integer(1.into());
        }
        rows.push(row);
    };
    for (coeff, _) in p.eq_rows() {
        push(coeff, None);
    }
    for (s, (coeff, _)) in p.ineq_rows().iter().enumerate() {
        push(coeff, Some(s));
    }
    // flips are applied by the caller where needed
    rows
}

fn verify_certificates(
    objective: &[Rat],
    p: &Polyhedron,
    point: &RatVec,
    value: &Rat,
    dual: &RatVec,
) -> Result<()> {
    let n = p.ambient_dim();
    let fail = |msg: &str| Err(Error::Internal(format!("lp certificate failed: {msg}")));
    if !p.contains(point) {
        return fail("primal infeasible");
    }
    let neq = p.eq_rows().len();
    // dual feasibility: multipliers on inequalities are <= 0 and rows combine
    // to the objective:  sum_i y_i row_i = c
    let mut combo = zero_vec(n);
    let mut dual_value = Rat::zero();
    for (i, (coeff, rhs)) in p.eq_rows().iter().chain(p.ineq_rows()).enumerate() {
        if i >= neq && dual[i].is_positive() {
            return fail("inequality multiplier has wrong sign");
        }
        combo = crate::exact::add_vec(&combo, &crate::exact::scale_vec(&dual[i], coeff));
        dual_value += &dual[i] * rhs;
    }
    if combo != *objective {
        return fail("dual combination misses objective");
    }
    if dual_value != *value {
        return fail("duality gap");
    }
    Ok(())
}

/// The exact argmin set: `p` intersected with {objective . x = value}.
pub fn optimal_face(objective: &[Rat], p: &Polyhedron) -> Result<Polyhedron> {
    match lp_solve(objective, p)? {
        LpOutcome::Optimal { value, .. } => {
            Ok(p.intersect_rows(vec![(objective.to_vec(), value)], vec![]))
        }
        LpOutcome::Infeasible => Err(Error::LpInfeasible),
        LpOutcome::Unbounded { .. } => Err(Error::LpUnbounded),
    }
}

/// Feasibility probe for h-rep systems that are not worth materializing.
pub fn feasible(p: &Polyhedron) -> Result<bool> {
    match lp_solve(&zero_vec(p.ambient_dim()), p)? {
        LpOutcome::Infeasible => Ok(false),
        _ => Ok(true),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio, vec_from_i64};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn v(entries: &[i64]) -> RatVec {
        vec_from_i64(entries)
    }

    /// Multiplier polyhedron of the two-constraint paraboloid fixture:
    /// {lambda >= 0 | lambda_1 - lambda_2 = 1}.
    fn fixture_multipliers() -> Polyhedron {
        Polyhedron::from_h(
            2,
            vec![(v(&[1, -1]), rat(1))],
            vec![(v(&[-1, 0]), rat(0)), (v(&[0, -1]), rat(0))],
        )
    }

    #[test]
    fn curvature_lp_on_fixture_multipliers() {
        // minimize 2(l1 + l2) over {l >= 0, l1 - l2 = 1}: optimum 2 at (1,0)
        let p = fixture_multipliers();
        match lp_solve(&v(&[2, 2]), &p).unwrap() {
            LpOutcome::Optimal { value, point, .. } => {
                assert_eq!(value, rat(2));
                assert_eq!(point, v(&[1, 0]));
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn infeasible_empty_polyhedron() {
        let p = Polyhedron::empty(2);
        assert!(matches!(lp_solve(&v(&[0, 0]), &p).unwrap(), LpOutcome::Infeasible));
        let q = Polyhedron::from_h(1, vec![], vec![(v(&[0]), rat(-1))]);
        assert!(matches!(lp_solve(&v(&[0]), &q).unwrap(), LpOutcome::Infeasible));
    }

    #[test]
    fn one_variable_band() {
        // minimize -z2 over {z2 <= 2, -z2 <= 2} embedded in R^2
        let p = Polyhedron::from_h(
            2,
            vec![],
            vec![(v(&[0, 1]), rat(2)), (v(&[0, -1]), rat(2))],
        );
        match lp_solve(&v(&[0, -1]), &p).unwrap() {
            LpOutcome::Optimal { value, point, .. } => {
                assert_eq!(value, rat(-2));
                assert_eq!(point[1], rat(2));
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn unbounded_carries_direction() {
        // minimize -x1 over {x1 >= 0}
        let p = Polyhedron::from_h(2, vec![], vec![(v(&[-1, 0]), rat(0))]);
        match lp_solve(&v(&[-1, 0]), &p).unwrap() {
            LpOutcome::Unbounded { direction } => {
                assert!(p.recession_contains(&direction));
                assert!(dot(&v(&[-1, 0]), &direction).is_negative());
            }
            other => panic!("expected unbounded, got {other:?}"),
        }
    }

    #[test]
    fn optimal_face_is_argmin() {
        let p = fixture_multipliers();
        let face = optimal_face(&v(&[2, 2]), &p).unwrap();
        assert_eq!(face.is_single_point(), Some(v(&[1, 0])));
        // constant objective: the face is the whole polyhedron
        let whole = optimal_face(&v(&[0, 0]), &p).unwrap();
        assert!(whole.equal(&p));
    }

    #[test]
    fn optimal_face_rejects_unbounded() {
        let p = Polyhedron::from_h(2, vec![], vec![(v(&[-1, 0]), rat(0))]);
        assert!(matches!(
            optimal_face(&v(&[-1, 0]), &p),
            Err(Error::LpUnbounded)
        ));
    }

    #[test]
    fn degenerate_cycling_guard() {
        // classic degenerate square; Bland's rule must terminate
        let p = Polyhedron::from_h(
            2,
            vec![],
            vec![
                (v(&[1, 0]), rat(1)),
                (v(&[0, 1]), rat(1)),
                (v(&[1, 1]), rat(1)),
                (v(&[-1, 0]), rat(0)),
                (v(&[0, -1]), rat(0)),
            ],
        );
        match lp_solve(&v(&[-1, -1]), &p).unwrap() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat(-1)),
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn strong_duality_random_instances() {
        let mut rng = StdRng::seed_from_u64(21);
        let mut optimal_seen = 0;
        for _ in 0..120 {
            let n = rng.gen_range(1..=3);
            let neq = rng.gen_range(0..=1);
            let nineq = rng.gen_range(1..=4);
            let row = |rng: &mut StdRng| -> RatVec {
                (0..n).map(|_| rat(rng.gen_range(-2..=2))).collect()
            };
            let eq: Vec<(RatVec, Rat)> = (0..neq)
                .map(|_| (row(&mut rng), rat(rng.gen_range(-2..=2))))
                .collect();
            let ineq: Vec<(RatVec, Rat)> = (0..nineq)
                .map(|_| (row(&mut rng), rat(rng.gen_range(-2..=2))))
                .collect();
            let p = Polyhedron::from_h(n, eq, ineq);
            let c = row(&mut rng);
            // lp_solve internally verifies primal/dual certificates; any
            // violation surfaces as Error::Internal here
            match lp_solve(&c, &p).unwrap() {
                LpOutcome::Optimal { value, point, .. } => {
                    optimal_seen += 1;
                    assert_eq!(dot(&c, &point), value);
                    // no vertex beats the reported optimum
                    for pt in p.points() {
                        assert!(dot(&c, pt) >= value);
                    }
                }
                LpOutcome::Unbounded { direction } => {
                    assert!(p.recession_contains(&direction));
                    assert!(dot(&c, &direction).is_negative());
                }
                LpOutcome::Infeasible => assert!(p.is_empty()),
            }
        }
        assert!(optimal_seen > 20);
    }

    #[test]
    fn fractional_data_stays_exact() {
        let p = Polyhedron::from_h(
            1,
            vec![],
            vec![(vec![ratio(2, 3)], ratio(1, 7)), (vec![ratio(-1, 2)], rat(5))],
        );
        match lp_solve(&vec![ratio(-3, 5)], &p).unwrap() {
            LpOutcome::Optimal { value, point, .. } => {
                assert_eq!(point, vec![ratio(3, 14)]);
                assert_eq!(value, ratio(-9, 70));
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }
}
