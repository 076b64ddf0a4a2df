//! Multivariate polynomials over exact rationals: parsing, rendering and
//! second-order jets (value, gradient, Hessian) at rational points.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{rat_to_string, zero_vec, Rat, RatMat, RatVec};

/// Polynomial in graded-lex canonical form; zero coefficients never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

/// Exponent multi-index ordered by total degree, then lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct Monomial {
    degree: u32,
    exps: Vec<u32>,
}

impl Monomial {
    fn new(exps: Vec<u32>) -> Self {
        let degree = exps.iter().sum();
        Monomial { degree, exps }
    }

    fn constant(nvars: usize) -> Self {
        Monomial::new(vec![0; nvars])
    }
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(Monomial::constant(nvars), c);
        p
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[idx] = 1;
        let mut p = Poly::zero(nvars);
        p.add_term(Monomial::new(exps), Rat::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Rat::zero);
        *entry += c;
        // re-normalize: drop cancelled coefficients
        self.terms.retain(|_, v| !v.is_zero());
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let exps: Vec<u32> = ma
                    .exps
                    .iter()
                    .zip(&mb.exps)
                    .map(|(a, b)| a + b)
                    .collect();
                out.add_term(Monomial::new(exps), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::constant(self.nvars, Rat::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn partial(&self, var: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exps[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[var] = e - 1;
            out.add_term(Monomial::new(exps), c * Rat::from_integer(e.into()));
        }
        out
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.exps) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Exact coefficient access for tests: exponent vector -> coefficient.
    pub fn coeff(&self, exps: &[u32]) -> Rat {
        self.terms
            .get(&Monomial::new(exps.to_vec()))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn render(&self, vars: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            for (i, &e) in m.exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(vars[i].clone()),
                    _ => factors.push(format!("{}^{}", vars[i], e)),
                }
            }
            let body = factors.join("*");
            let piece = if body.is_empty() {
                rat_to_string(c)
            } else if c.is_one() {
                body
            } else if (-c).is_one() {
                format!("-{body}")
            } else {
                format!("{}*{}", rat_to_string(c), body)
            };
            parts.push(piece);
        }
        let mut out = String::new();
        for (i, piece) in parts.iter().enumerate() {
            if i == 0 {
                out.push_str(piece);
            } else if let Some(stripped) = piece.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(stripped);
            } else {
                out.push_str(" + ");
                out.push_str(piece);
            }
        }
        out
    }
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let vars: Vec<String> = (0..self.nvars).map(|i| format!("v{i}")).collect();
        write!(f, "{}", self.render(&vars))
    }
}

/// Value, gradient and Hessian of `p` at `point`, all exact.
pub fn jet2(p: &Poly, point: &[Rat]) -> (Rat, RatVec, RatMat) {
    assert_eq!(point.len(), p.nvars());
    let n = p.nvars();
    let value = p.eval(point);
    let mut grad = zero_vec(n);
    let mut hess = RatMat::zeros(n, n);
    for i in 0..n {
        let pi = p.partial(i);
        grad[i] = pi.eval(point);
        for j in i..n {
            let pij = pi.partial(j);
            let v = pij.eval(point);
            hess.set(i, j, v.clone());
            hess.set(j, i, v);
        }
    }
    (value, grad, hess)
}

// ---------------------------------------------------------------------------
// Recursive-descent parser. Grammar (unary minus binds tighter than binary
// minus but looser than ^):
//   expr   := term (('+' | '-') term)*
//   term   := unary ('*' unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' nat)?
//   atom   := rational | ident | '(' expr ')'
// Rational literals are `p` or `p/q`; there is no division operator.
// ---------------------------------------------------------------------------

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [String],
}

pub fn parse_poly(text: &str, vars: &[String]) -> Result<Poly> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        vars,
    };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::Syntax {
            pos: p.pos,
            msg: format!("unexpected `{}`", p.src[p.pos] as char),
        });
    }
    Ok(poly)
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.nat()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn nat(&mut self) -> Result<u32> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Syntax {
                pos: start,
                msg: "expected exponent".to_string(),
            });
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|e| Error::Syntax {
                pos: start,
                msg: format!("bad exponent: {e}"),
            })
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(Error::Syntax {
                        pos: self.pos,
                        msg: "expected `)`".to_string(),
                    });
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                // `p/q` rational literal (no division operator exists)
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let denpos = self.pos;
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(Error::Syntax {
                            pos: denpos,
                            msg: "zero denominator".to_string(),
                        });
                    }
                    return Ok(Poly::constant(self.vars.len(), num / den));
                }
                Ok(Poly::constant(self.vars.len(), num))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.vars.iter().position(|v| v == name) {
                    Some(idx) => Ok(Poly::var(self.vars.len(), idx)),
                    None => Err(Error::UnknownVariable {
                        name: name.to_string(),
                        pos: start,
                    }),
                }
            }
            other => Err(Error::Syntax {
                pos: self.pos,
                msg: match other {
                    Some(c) => format!("unexpected `{}`", c as char),
                    None => "unexpected end of input".to_string(),
                },
            }),
        }
    }

    fn integer(&mut self) -> Result<Rat> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        crate::exact::parse_rat(text).map_err(|_| Error::Syntax {
            pos: start,
            msg: "expected integer".to_string(),
        })
    }
}

pub fn var_names(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio, vec_from_i64};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn y2() -> Vec<String> {
        var_names(&["y1", "y2"])
    }

    #[test]
    fn parses_paraboloid_constraint() {
        let p = parse_poly("-y1^2 + y2", &y2()).unwrap();
        assert_eq!(p.coeff(&[2, 0]), rat(-1));
        assert_eq!(p.coeff(&[0, 1]), rat(1));
        assert_eq!(p.coeff(&[0, 0]), rat(0));
    }

    #[test]
    fn parses_zero() {
        let p = parse_poly("0", &y2()).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn parses_cubic_three_vars() {
        let vars = var_names(&["y1", "y2", "y3"]);
        let p = parse_poly("y3 - y1^3", &vars).unwrap();
        assert_eq!(p.coeff(&[0, 0, 1]), rat(1));
        assert_eq!(p.coeff(&[3, 0, 0]), rat(-1));
    }

    #[test]
    fn render_reparse_identity() {
        let vars = y2();
        for src in ["-y1^2 + y2", "3/2*y1*y2 - 7", "0", "y1^4 - 2*y1^2*y2 + y2^2"] {
            let p = parse_poly(src, &vars).unwrap();
            let q = parse_poly(&p.render(&vars), &vars).unwrap();
            assert_eq!(p, q, "roundtrip failed for {src}");
        }
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_poly("y1 + * y2", &y2()) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match parse_poly("y1 + z3", &y2()) {
            Err(Error::UnknownVariable { name, .. }) => assert_eq!(name, "z3"),
            other => panic!("expected unknown variable, got {other:?}"),
        }
    }

    #[test]
    fn unary_minus_binds_tighter_than_binary() {
        // -y1^2 must be -(y1^2), not (-y1)^2
        let p = parse_poly("-y1^2", &y2()).unwrap();
        assert_eq!(p.coeff(&[2, 0]), rat(-1));
        let q = parse_poly("1 -y1", &y2()).unwrap();
        assert_eq!(q.coeff(&[0, 0]), rat(1));
        assert_eq!(q.coeff(&[1, 0]), rat(-1));
    }

    #[test]
    fn jet_of_first_fixture_constraint() {
        let p = parse_poly("-y1^2 + y2", &y2()).unwrap();
        let (v, g, h) = jet2(&p, &vec_from_i64(&[0, 0]));
        assert_eq!(v, rat(0));
        assert_eq!(g, vec_from_i64(&[0, 1]));
        assert_eq!(h, RatMat::from_i64(&[&[-2, 0], &[0, 0]]));
    }

    #[test]
    fn jet_of_zero_poly() {
        let p = Poly::zero(2);
        let (v, g, h) = jet2(&p, &vec_from_i64(&[5, -3]));
        assert_eq!(v, rat(0));
        assert_eq!(g, vec_from_i64(&[0, 0]));
        assert_eq!(h, RatMat::zeros(2, 2));
    }

    #[test]
    fn jet_of_cubic_at_origin() {
        let vars = var_names(&["y1", "y2", "y3"]);
        let p = parse_poly("y3 - y1^3", &vars).unwrap();
        let (v, g, h) = jet2(&p, &vec_from_i64(&[0, 0, 0]));
        assert_eq!(v, rat(0));
        assert_eq!(g, vec_from_i64(&[0, 0, 1]));
        assert_eq!(h, RatMat::zeros(3, 3));
    }

    fn random_poly(rng: &mut StdRng, nvars: usize, max_deg: u32) -> Poly {
        let mut p = Poly::zero(nvars);
        for _ in 0..rng.gen_range(1..=6) {
            let exps: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..=max_deg)).collect();
            let c = ratio(rng.gen_range(-3..=3), rng.gen_range(1..=2));
            p = p.add(&{
                let mut t = Poly::zero(nvars);
                t.add_term(Monomial::new(exps), c);
                t
            });
        }
        p
    }

    #[test]
    fn mixed_partials_commute() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..40 {
            let p = random_poly(&mut rng, 3, 3);
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(p.partial(i).partial(j), p.partial(j).partial(i));
                }
            }
        }
    }

    #[test]
    fn jet_is_linear() {
        let mut rng = StdRng::seed_from_u64(12);
        for _ in 0..30 {
            let p = random_poly(&mut rng, 2, 3);
            let q = random_poly(&mut rng, 2, 3);
            let pt = vec![ratio(1, 2), rat(-1)];
            let (vp, gp, hp) = jet2(&p, &pt);
            let (vq, gq, hq) = jet2(&q, &pt);
            let (vs, gs, hs) = jet2(&p.add(&q), &pt);
            assert_eq!(vs, vp + vq);
            assert_eq!(gs, crate::exact::add_vec(&gp, &gq));
            assert_eq!(hs, hp.add(&hq));
        }
    }

    #[test]
    fn central_difference_matches_gradient_on_quadratics() {
        // for degree <= 2 the central difference is exact at any step size
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..30 {
            let p = random_poly(&mut rng, 2, 2);
            let pt = vec![ratio(-1, 3), ratio(2, 5)];
            let (_, g, _) = jet2(&p, &pt);
            let h = ratio(1, 7);
            for i in 0..2 {
                let mut up = pt.clone();
                let mut dn = pt.clone();
                up[i] = &up[i] + &h;
                dn[i] = &dn[i] - &h;
                let diff = (p.eval(&up) - p.eval(&dn)) / (rat(2) * &h);
                assert_eq!(diff, g[i]);
            }
        }
    }

    #[test]
    fn hessian_symmetric_random() {
        let mut rng = StdRng::seed_from_u64(14);
        for _ in 0..30 {
            let p = random_poly(&mut rng, 3, 3);
            let pt = vec![rat(1), ratio(-1, 2), rat(2)];
            let (_, _, h) = jet2(&p, &pt);
            assert!(h.is_symmetric());
        }
    }
}
