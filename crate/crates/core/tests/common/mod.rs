#![allow(dead_code, clippy::needless_range_loop)]

use slickcw::generate::{random_sized_slick, rng};
use slickcw::oracle::DenseSymMatrix;
use slickcw::scalar::{int, ratio};
use slickcw::{Inertia, Scalar, SlickExpr};

pub const FIG1: &str = include_str!("../fixtures/fig1.slick");
pub const P4: &str = include_str!("../fixtures/p4.slick");
pub const K2: &str = include_str!("../fixtures/k2.slick");
pub const P4_CLASSIC: &str = include_str!("../fixtures/p4.classic");
pub const ETA_COLLAPSE: &str = include_str!("../fixtures/eta_collapse.slick");

/// Shift values used by the oracle sweeps.
pub fn shifts() -> Vec<Scalar> {
    vec![int(-2), int(-1), ratio(-1, 2), int(0), ratio(1, 2), int(1), int(2)]
}

/// Seeded corpus entry: `n` in 1..=max_n, `k` in 1..=max_k.
pub fn corpus_expr(seed: u64, max_n: usize, max_k: usize) -> SlickExpr {
    random_sized_slick(max_n, max_k, &mut rng(seed))
}

/// Coefficients of det(xI - B), constant term first (Faddeev-LeVerrier).
pub fn char_poly(b: &DenseSymMatrix) -> Vec<Scalar> {
    let n = b.order();
    let mut coef = vec![int(0); n + 1];
    coef[n] = int(1);
    // m = B * m_prev + c_prev I
    let mut m = vec![vec![int(0); n]; n];
    for k in 1..=n {
        let mut next = vec![vec![int(0); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = int(0);
                for t in 0..n {
                    acc += b.get(i, t) * &m[t][j];
                }
                if i == j {
                    acc += &coef[n - k + 1];
                }
                next[i][j] = acc;
            }
        }
        m = next;
        let mut tr = int(0);
        for i in 0..n {
            let mut acc = int(0);
            for t in 0..n {
                acc += b.get(i, t) * &m[t][i];
            }
            tr += acc;
        }
        coef[n - k] = -tr / int(k as i64);
    }
    coef
}

fn sign_changes(xs: impl Iterator<Item = Scalar>) -> usize {
    let signs: Vec<bool> = xs.filter(|x| *x != int(0)).map(|x| x > int(0)).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Inertia from the characteristic polynomial by Descartes' rule, exact for
/// symmetric matrices since every root is real.
pub fn descartes_inertia(b: &DenseSymMatrix) -> Inertia {
    let p = char_poly(b);
    let zero = p.iter().take_while(|c| **c == int(0)).count();
    let plus = sign_changes(p.iter().cloned());
    let minus = sign_changes(
        p.iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() }),
    );
    Inertia { plus, zero, minus }
}
