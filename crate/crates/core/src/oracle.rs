//! Dense exact reference computations, independent of the parse tree.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::diag::{DiagList, MatrixSpec};
use crate::error::DiagError;
use crate::expr::{LabeledGraph, SlickExpr};
use crate::scalar::Scalar;
use crate::spectral::Inertia;

/// Symmetric `n x n` matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseSymMatrix {
    n: usize,
    a: Vec<Scalar>,
}

impl DenseSymMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseSymMatrix {
            n,
            a: vec![Scalar::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Panics if `rows` is not square and symmetric.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let n = rows.len();
        let a: Vec<Scalar> = rows
            .into_iter()
            .flat_map(|r| {
                assert_eq!(r.len(), n, "matrix must be square");
                r
            })
            .collect();
        let m = DenseSymMatrix { n, a };
        assert!(m.is_symmetric(), "matrix must be symmetric");
        m
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.a[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.a[j * self.n + i] = v.clone();
        self.a[i * self.n + j] = v;
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    fn swap(&mut self, p: usize, q: usize) {
        let n = self.n;
        for j in 0..n {
            self.a.swap(p * n + j, q * n + j);
        }
        for i in 0..n {
            self.a.swap(i * n + p, i * n + q);
        }
    }

    /// Row `p += f * row q`, then the same on columns.
    fn add(&mut self, p: usize, q: usize, f: &Scalar) {
        let n = self.n;
        for j in 0..n {
            let d = f * &self.a[q * n + j];
            self.a[p * n + j] += d;
        }
        for i in 0..n {
            let d = f * &self.a[i * n + q];
            self.a[i * n + p] += d;
        }
    }
}

/// `M - cI` for the graph `g`.
pub fn build_matrix(g: &LabeledGraph, c: &Scalar, spec: &MatrixSpec) -> Result<DenseSymMatrix, DiagError> {
    let n = g.vertex_count();
    let mut m = DenseSymMatrix::zeros(n);
    for v in 0..n {
        m.set(v, v, spec.diagonal_of(g.name(v))? - c);
    }
    for (u, v) in g.edges() {
        m.set(u, v, spec.off_diagonal().clone());
    }
    Ok(m)
}

/// Plain symmetric Gaussian elimination with symmetric swaps. A zero pivot
/// facing only zero diagonals is split with `(0 m; m 0) -> (-m 0; 0 m)`.
pub fn dense_congruent_diagonalize(b: &DenseSymMatrix) -> DiagList {
    let mut m = b.clone();
    let n = m.n;
    let mut out = Vec::with_capacity(n);
    for p in 0..n {
        if m.get(p, p).is_zero() {
            if let Some(q) = (p + 1..n).find(|&q| !m.get(q, q).is_zero()) {
                m.swap(p, q);
            } else if let Some(q) = (p + 1..n).find(|&q| !m.get(p, q).is_zero()) {
                m.add(q, p, &Scalar::new(1.into(), 2.into()));
                m.add(p, q, &-Scalar::one());
            }
        }
        let d = m.get(p, p).clone();
        if !d.is_zero() {
            for q in p + 1..n {
                if !m.get(q, p).is_zero() {
                    let f = -(m.get(q, p) / &d);
                    m.add(q, p, &f);
                }
            }
        }
        out.push(d);
    }
    out.into_iter().collect()
}

/// Exact determinant by fraction-free (Bareiss) elimination over the
/// integers after clearing denominators.
pub fn determinant(b: &DenseSymMatrix) -> Scalar {
    let n = b.n;
    if n == 0 {
        return Scalar::one();
    }
    let l = b.a.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut a: Vec<BigInt> = b.a.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for p in 0..n - 1 {
        if a[p * n + p].is_zero() {
            let Some(q) = (p + 1..n).find(|&q| !a[q * n + p].is_zero()) else {
                return Scalar::zero();
            };
            for j in 0..n {
                a.swap(p * n + j, q * n + j);
            }
            sign = -sign;
        }
        for i in p + 1..n {
            for j in p + 1..n {
                let v = &a[i * n + j] * &a[p * n + p] - &a[i * n + p] * &a[p * n + j];
                a[i * n + j] = v / &prev;
            }
        }
        prev = a[p * n + p].clone();
    }
    let det = sign * &a[n * n - 1];
    Scalar::new(det, l.pow(n as u32))
}

/// Sign counts of a list of values.
pub fn signature(values: &[Scalar]) -> Inertia {
    let mut i = Inertia::default();
    for v in values {
        if v.is_positive() {
            i.plus += 1;
        } else if v.is_negative() {
            i.minus += 1;
        } else {
            i.zero += 1;
        }
    }
    i
}

/// Inertia of `M - cI` by evaluating the graph and eliminating densely.
pub fn oracle_inertia(e: &SlickExpr, c: &Scalar, spec: &MatrixSpec) -> Result<Inertia, DiagError> {
    let m = build_matrix(&e.eval(), c, spec)?;
    Ok(signature(&dense_congruent_diagonalize(&m).values()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_slick;
    use crate::scalar::{int, ratio};

    fn ints(rows: &[&[i64]]) -> DenseSymMatrix {
        DenseSymMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    #[test]
    fn build_k2_and_point() {
        let e = parse_slick("k 1 (join (S (1 1)) (L) (R) (v 1 a) (v 1 b))").unwrap();
        let m = build_matrix(&e.eval(), &int(0), &MatrixSpec::adjacency()).unwrap();
        assert_eq!(m, ints(&[&[0, 1], &[1, 0]]));
        let e = parse_slick("k 1 (v 1 a)").unwrap();
        let m = build_matrix(&e.eval(), &int(3), &MatrixSpec::adjacency()).unwrap();
        assert_eq!(m, ints(&[&[-3]]));
    }

    #[test]
    fn hyperbolic_plane() {
        let m = ints(&[&[0, 1], &[1, 0]]);
        let d = dense_congruent_diagonalize(&m).values();
        assert_eq!(d, vec![int(-1), int(1)]);
        assert_eq!(
            signature(&d),
            Inertia {
                plus: 1,
                zero: 0,
                minus: 1
            }
        );
        assert_eq!(determinant(&m), int(-1));
    }

    #[test]
    fn zero_matrix() {
        let m = DenseSymMatrix::zeros(3);
        assert_eq!(dense_congruent_diagonalize(&m).values(), vec![int(0); 3]);
        assert_eq!(determinant(&m), int(0));
    }

    #[test]
    fn identity_determinant() {
        assert_eq!(determinant(&DenseSymMatrix::identity(4)), int(1));
    }

    #[test]
    fn determinant_with_fractions_and_pivoting() {
        let m = DenseSymMatrix::from_rows(vec![
            vec![int(0), ratio(1, 2), int(1)],
            vec![ratio(1, 2), int(0), int(2)],
            vec![int(1), int(2), ratio(-1, 3)],
        ]);
        // 0 - 1/2(-1/6 - 2) + 1(1 - 0) = 13/12 + 1
        assert_eq!(determinant(&m), ratio(25, 12));
        assert_eq!(dense_congruent_diagonalize(&m).product(), ratio(25, 12));
    }
}
