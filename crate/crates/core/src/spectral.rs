//! Inertia and eigenvalue counts over real intervals.

use std::fmt;
use std::str::FromStr;

use num_traits::Signed;

use crate::diag::{diagonalize, DiagList, MatrixSpec};
use crate::error::SpectralError;
use crate::expr::{SlickExpr, SlickNode};
use crate::scalar::{format_scalar, parse_scalar, Scalar};

/// `(n+, n0, n-)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Inertia {
    pub plus: usize,
    pub zero: usize,
    pub minus: usize,
}

impl Inertia {
    pub fn total(&self) -> usize {
        self.plus + self.zero + self.minus
    }
}

impl fmt::Display for Inertia {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n+={} n0={} n-={}", self.plus, self.zero, self.minus)
    }
}

pub fn inertia(d: &DiagList) -> Inertia {
    let mut i = Inertia::default();
    for e in d.iter() {
        if e.value.is_positive() {
            i.plus += 1;
        } else if e.value.is_negative() {
            i.minus += 1;
        } else {
            i.zero += 1;
        }
    }
    i
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Endpoint {
    Infinite,
    Open(Scalar),
    Closed(Scalar),
}

impl Endpoint {
    fn value(&self) -> Option<&Scalar> {
        match self {
            Endpoint::Infinite => None,
            Endpoint::Open(x) | Endpoint::Closed(x) => Some(x),
        }
    }
}

/// Real interval with rational or infinite endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Endpoint,
    hi: Endpoint,
}

impl Interval {
    pub fn new(lo: Endpoint, hi: Endpoint) -> Result<Self, SpectralError> {
        if let (Some(a), Some(b)) = (lo.value(), hi.value()) {
            if a > b {
                return Err(SpectralError::MalformedInterval(format!(
                    "lower end {} exceeds upper end {}",
                    format_scalar(a),
                    format_scalar(b)
                )));
            }
        }
        Ok(Interval { lo, hi })
    }

    pub fn open(a: Scalar, b: Scalar) -> Result<Self, SpectralError> {
        Self::new(Endpoint::Open(a), Endpoint::Open(b))
    }

    pub fn closed(a: Scalar, b: Scalar) -> Result<Self, SpectralError> {
        Self::new(Endpoint::Closed(a), Endpoint::Closed(b))
    }

    pub fn point(a: Scalar) -> Self {
        Interval {
            lo: Endpoint::Closed(a.clone()),
            hi: Endpoint::Closed(a),
        }
    }

    pub fn everything() -> Self {
        Interval {
            lo: Endpoint::Infinite,
            hi: Endpoint::Infinite,
        }
    }

    pub fn lo(&self) -> &Endpoint {
        &self.lo
    }

    pub fn hi(&self) -> &Endpoint {
        &self.hi
    }

    /// Contains no real number, e.g. `(a,a)`.
    pub fn is_empty(&self) -> bool {
        match (&self.lo, &self.hi) {
            (Endpoint::Closed(a), Endpoint::Closed(b)) => a > b,
            (lo, hi) => matches!((lo.value(), hi.value()), (Some(a), Some(b)) if a >= b),
        }
    }
}

impl FromStr for Interval {
    type Err = SpectralError;

    /// `[a,b]`, `(a,b)`, `(a,b]`, `[a,b)`; `-inf` / `inf` for open infinite ends.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| SpectralError::MalformedInterval(format!("{s:?}: {why}"));
        let t = s.trim();
        let (open_lo, rest) = match t.chars().next() {
            Some('(') => (true, &t[1..]),
            Some('[') => (false, &t[1..]),
            _ => return Err(bad("must start with '(' or '['")),
        };
        let (open_hi, body) = match rest.chars().last() {
            Some(')') => (true, &rest[..rest.len() - 1]),
            Some(']') => (false, &rest[..rest.len() - 1]),
            _ => return Err(bad("must end with ')' or ']'")),
        };
        let (a, b) = body.split_once(',').ok_or_else(|| bad("missing ','"))?;
        let end = |text: &str, open: bool, inf: &[&str]| -> Result<Endpoint, SpectralError> {
            let text = text.trim();
            if inf.contains(&text) {
                return if open {
                    Ok(Endpoint::Infinite)
                } else {
                    Err(bad("infinite endpoints must be open"))
                };
            }
            let x = parse_scalar(text).map_err(|e| bad(&e.to_string()))?;
            Ok(if open { Endpoint::Open(x) } else { Endpoint::Closed(x) })
        };
        let lo = end(a, open_lo, &["-inf"])?;
        let hi = end(b, open_hi, &["inf", "+inf"])?;
        Interval::new(lo, hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.lo {
            Endpoint::Infinite => f.write_str("(-inf")?,
            Endpoint::Open(a) => write!(f, "({a}")?,
            Endpoint::Closed(a) => write!(f, "[{a}")?,
        }
        f.write_str(",")?;
        match &self.hi {
            Endpoint::Infinite => f.write_str("inf)"),
            Endpoint::Open(b) => write!(f, "{b})"),
            Endpoint::Closed(b) => write!(f, "{b}]"),
        }
    }
}

/// Inertia of `M - cI` through the parse-tree engine.
pub fn inertia_at(e: &SlickExpr, c: &Scalar, spec: &MatrixSpec) -> Result<Inertia, SpectralError> {
    Ok(inertia(&diagonalize(e, c, spec)?))
}

/// Number of eigenvalues of `M` in `iv`, from at most two diagonalizations.
pub fn count_eigenvalues(e: &SlickExpr, iv: &Interval, spec: &MatrixSpec) -> Result<usize, SpectralError> {
    use Endpoint::*;
    if iv.is_empty() {
        return Ok(0);
    }
    let at = |c: &Scalar| inertia_at(e, c, spec);
    let n = e.atom_count();
    Ok(match (&iv.lo, &iv.hi) {
        (Infinite, Infinite) => n,
        (Infinite, Open(b)) => at(b)?.minus,
        (Infinite, Closed(b)) => {
            let ib = at(b)?;
            ib.minus + ib.zero
        }
        (Open(a), Infinite) => at(a)?.plus,
        (Closed(a), Infinite) => {
            let ia = at(a)?;
            ia.plus + ia.zero
        }
        (Closed(a), Closed(b)) if a == b => at(a)?.zero,
        (lo, hi) => {
            let (a, b) = (lo.value().unwrap(), hi.value().unwrap());
            let (ia, ib) = (at(a)?, at(b)?);
            match (lo, hi) {
                (Open(_), Open(_)) => ib.minus - ia.minus - ia.zero,
                (Open(_), Closed(_)) => ia.plus - ib.plus,
                (Closed(_), Open(_)) => ib.minus - ia.minus,
                _ => ib.minus + ib.zero - ia.minus,
            }
        }
    })
}

/// Multiplicity of `lambda` as an eigenvalue of `M`.
pub fn multiplicity(e: &SlickExpr, lambda: &Scalar, spec: &MatrixSpec) -> Result<usize, SpectralError> {
    Ok(inertia_at(e, lambda, spec)?.zero)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicitySample {
    pub lambda: Scalar,
    pub whole: usize,
    pub left: usize,
    pub right: usize,
    /// `m_G <= m_L + m_R + 4k`.
    pub holds: bool,
}

/// Adjacency eigenvalue data around the root join of an expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JoinBoundsReport {
    pub width: usize,
    pub interval: Interval,
    pub count: usize,
    pub left_count: usize,
    pub right_count: usize,
    /// The `8k` bound only applies when both children have no eigenvalue in the interval.
    pub eight_k_applies: bool,
    pub eight_k_holds: bool,
    pub samples: Vec<MultiplicitySample>,
}

impl JoinBoundsReport {
    pub fn all_hold(&self) -> bool {
        (!self.eight_k_applies || self.eight_k_holds) && self.samples.iter().all(|s| s.holds)
    }

    pub fn max_multiplicity(&self) -> usize {
        self.samples.iter().map(|s| s.whole).max().unwrap_or(0)
    }
}

impl fmt::Display for JoinBoundsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<12} {:>8} {:>8} {:>8}", "", "G", "left", "right")?;
        writeln!(
            f,
            "{:<12} {:>8} {:>8} {:>8}",
            format!("count{}", self.interval),
            self.count,
            self.left_count,
            self.right_count
        )?;
        for s in &self.samples {
            writeln!(
                f,
                "{:<12} {:>8} {:>8} {:>8}",
                format!("m({})", s.lambda),
                s.whole,
                s.left,
                s.right
            )?;
        }
        writeln!(f, "k={}", self.width)?;
        writeln!(f, "interval={}", self.interval)?;
        writeln!(f, "count={}", self.count)?;
        writeln!(f, "left_count={}", self.left_count)?;
        writeln!(f, "right_count={}", self.right_count)?;
        writeln!(f, "bound_8k={}", 8 * self.width)?;
        writeln!(f, "bound_8k_applies={}", self.eight_k_applies)?;
        writeln!(f, "bound_8k_holds={}", self.eight_k_holds)?;
        writeln!(f, "max_multiplicity={}", self.max_multiplicity())?;
        writeln!(f, "multiplicity_4k_holds={}", self.samples.iter().all(|s| s.holds))
    }
}

/// Evenly spaced rational points strictly inside `(a, b)`.
pub fn interior_samples(a: &Scalar, b: &Scalar, count: usize) -> Vec<Scalar> {
    let step = (b - a) / Scalar::from_integer((count as i64 + 1).into());
    (1..=count)
        .map(|j| a + &step * Scalar::from_integer((j as i64).into()))
        .collect()
}

/// Counts in an open bounded interval for the root join and its two
/// children, plus multiplicities at sampled points.
pub fn check_join_bounds(e: &SlickExpr, iv: &Interval) -> Result<JoinBoundsReport, SpectralError> {
    let (Endpoint::Open(a), Endpoint::Open(b)) = (&iv.lo, &iv.hi) else {
        return Err(SpectralError::MalformedInterval(format!(
            "{iv}: join bounds need an open bounded interval"
        )));
    };
    let SlickNode::Join { left, right, .. } = e.node(e.root()) else {
        return Err(SpectralError::RootIsAtom);
    };
    let spec = MatrixSpec::adjacency();
    let (le, re) = (e.subexpr(*left), e.subexpr(*right));
    let k = e.width();
    let count = count_eigenvalues(e, iv, &spec)?;
    let left_count = count_eigenvalues(&le, iv, &spec)?;
    let right_count = count_eigenvalues(&re, iv, &spec)?;
    let mut samples = Vec::new();
    if !iv.is_empty() {
        for lambda in interior_samples(a, b, 7) {
            let whole = multiplicity(e, &lambda, &spec)?;
            let l = multiplicity(&le, &lambda, &spec)?;
            let r = multiplicity(&re, &lambda, &spec)?;
            samples.push(MultiplicitySample {
                holds: whole <= l + r + 4 * k,
                lambda,
                whole,
                left: l,
                right: r,
            });
        }
    }
    Ok(JoinBoundsReport {
        width: k,
        interval: iv.clone(),
        count,
        left_count,
        right_count,
        eight_k_applies: left_count == 0 && right_count == 0,
        eight_k_holds: count <= 8 * k,
        samples,
    })
}

impl Interval {
    /// Lower and upper values, `None` for infinite ends.
    pub fn bounds(&self) -> (Option<&Scalar>, Option<&Scalar>) {
        (self.lo.value(), self.hi.value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_slick;
    use crate::scalar::{int, ratio};

    fn k2() -> SlickExpr {
        parse_slick("k 1 (join (S (1 1)) (L) (R) (v 1 a) (v 1 b))").unwrap()
    }

    #[test]
    fn inertia_counts_signs() {
        let d: DiagList = [-2, 2, 0].into_iter().map(int).collect();
        assert_eq!(
            inertia(&d),
            Inertia {
                plus: 1,
                zero: 1,
                minus: 1
            }
        );
        assert_eq!(inertia(&DiagList::default()), Inertia::default());
        let d: DiagList = [0, 0].into_iter().map(int).collect();
        assert_eq!(
            inertia(&d),
            Inertia {
                plus: 0,
                zero: 2,
                minus: 0
            }
        );
    }

    #[test]
    fn parse_intervals() {
        let iv: Interval = "(0,1]".parse().unwrap();
        assert_eq!(iv.lo(), &Endpoint::Open(int(0)));
        assert_eq!(iv.hi(), &Endpoint::Closed(int(1)));
        let iv: Interval = "( -inf , 1/2 )".parse().unwrap();
        assert_eq!(iv.lo(), &Endpoint::Infinite);
        assert_eq!(iv.to_string(), "(-inf,1/2)");
        assert!("[-inf,0)".parse::<Interval>().is_err());
        assert!("(2,1)".parse::<Interval>().is_err());
        assert!("(0;1)".parse::<Interval>().is_err());
        assert!("0,1".parse::<Interval>().is_err());
        assert!("[0,x]".parse::<Interval>().is_err());
        assert_eq!("[3,3]".parse::<Interval>().unwrap(), Interval::point(int(3)));
    }

    #[test]
    fn k2_counts() {
        let spec = MatrixSpec::adjacency();
        let e = k2();
        let c = |s: &str| count_eigenvalues(&e, &s.parse().unwrap(), &spec).unwrap();
        assert_eq!(c("(-inf,inf)"), 2);
        assert_eq!(c("[1,1]"), 1);
        assert_eq!(c("(1,1)"), 0);
        assert_eq!(c("(-1,1)"), 0);
        assert_eq!(c("[-1,1)"), 1);
        assert_eq!(c("(-1,1]"), 1);
        assert_eq!(c("[-1,1]"), 2);
        assert_eq!(c("(0,inf)"), 1);
        assert_eq!(c("[1,inf)"), 1);
        assert_eq!(c("(-inf,-1]"), 1);
        assert_eq!(c("(-inf,-1)"), 0);
        assert_eq!(multiplicity(&e, &int(1), &spec).unwrap(), 1);
        assert_eq!(multiplicity(&e, &ratio(1, 2), &spec).unwrap(), 0);
    }

    #[test]
    fn join_bounds_need_a_join_and_open_interval() {
        let atom = parse_slick("k 1 (v 1 a)").unwrap();
        let iv = Interval::open(int(-1), int(0)).unwrap();
        assert_eq!(check_join_bounds(&atom, &iv), Err(SpectralError::RootIsAtom));
        assert!(check_join_bounds(&k2(), &Interval::point(int(0))).is_err());
        let r = check_join_bounds(&k2(), &iv).unwrap();
        assert_eq!((r.count, r.left_count, r.right_count), (0, 0, 0));
        assert!(r.all_hold());
        assert_eq!(r.samples.len(), 7);
        assert!(r.to_string().contains("bound_8k=8"));
    }

    #[test]
    fn samples_are_interior() {
        let s = interior_samples(&int(-1), &int(0), 3);
        assert_eq!(s, vec![ratio(-3, 4), ratio(-1, 2), ratio(-1, 4)]);
    }
}
