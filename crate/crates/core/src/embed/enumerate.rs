//! Fincke–Pohst enumeration of vectors of given norm in definite lattices,
//! and searches for primitive tuples with prescribed Gram matrix in `E8(2)`.

use std::ops::ControlFlow;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{saturation, Lattice};
use crate::matrix::IntMatrix;
use crate::standard::{e8_gram, EPS, N_RANK};

type Q = Ratio<i128>;

fn ovf<T>(x: Option<T>) -> Result<T> {
    x.ok_or(Error::Overflow("Fincke-Pohst arithmetic"))
}

/// Coefficients of `Q(x) = Σᵢ qᵢᵢ (xᵢ + Σ_{j>i} qᵢⱼ xⱼ)²` for a positive
/// definite integer Gram matrix.
struct Decomposition {
    q: Vec<Vec<Q>>,
}

impl Decomposition {
    fn new(g: &IntMatrix) -> Result<Self> {
        let n = g.rows();
        let mut q: Vec<Vec<Q>> = (0..n).map(|i| (0..n).map(|j| Q::from_integer(g[(i, j)] as i128)).collect()).collect();
        for i in 0..n {
            for k in 0..i {
                let t = ovf(q[k][k].checked_mul(&q[k][i]))?;
                let t = ovf(t.checked_mul(&q[k][i]))?;
                q[i][i] = ovf(q[i][i].checked_sub(&t))?;
            }
            if q[i][i] <= Q::zero() {
                return Err(Error::NotDefinite);
            }
            for j in i + 1..n {
                let mut s = Q::from_integer(g[(i, j)] as i128);
                for k in 0..i {
                    let t = ovf(q[k][k].checked_mul(&q[k][i]))?;
                    let t = ovf(t.checked_mul(&q[k][j]))?;
                    s = ovf(s.checked_sub(&t))?;
                }
                q[i][j] = ovf(s.checked_div(&q[i][i]))?;
            }
        }
        Ok(Decomposition { q })
    }
}

/// Positive definite Gram and the sign that maps norms of the input to it.
fn positive_form(lattice: &Lattice) -> Result<(IntMatrix, i64)> {
    if lattice.is_positive_definite() {
        Ok((lattice.gram().clone(), 1))
    } else if lattice.is_negative_definite() {
        Ok((lattice.gram().scale(-1)?, -1))
    } else {
        Err(Error::NotDefinite)
    }
}

/// Visits every `x ≠ 0` with `Q(x) ≤ bound` for the positive definite `g`.
fn visit_short<F>(g: &IntMatrix, bound: i128, mut visit: F) -> Result<()>
where
    F: FnMut(&[i64], i128) -> ControlFlow<()>,
{
    let n = g.rows();
    if n == 0 || bound <= 0 {
        return Ok(());
    }
    let dec = Decomposition::new(g)?;
    let mut x = vec![0i64; n];
    let b = Q::from_integer(bound);
    let mut stop = false;
    descend(&dec.q, g, n - 1, b, &mut x, &mut visit, &mut stop)?;
    Ok(())
}

fn descend<F>(q: &[Vec<Q>], g: &IntMatrix, i: usize, budget: Q, x: &mut [i64], visit: &mut F, stop: &mut bool) -> Result<()>
where
    F: FnMut(&[i64], i128) -> ControlFlow<()>,
{
    let n = x.len();
    let mut center = Q::zero();
    for j in i + 1..n {
        let t = ovf(q[i][j].checked_mul(&Q::from_integer(x[j] as i128)))?;
        center = ovf(center.checked_sub(&t))?;
    }
    let qii = q[i][i];
    let c = center.to_f64().unwrap_or(0.0);
    let r = (budget / qii).to_f64().unwrap_or(0.0).max(0.0).sqrt();
    let lo = (c - r).floor() as i64 - 1;
    let hi = (c + r).ceil() as i64 + 1;
    for v in lo..=hi {
        let d = ovf(Q::from_integer(v as i128).checked_sub(&center))?;
        let used = ovf(ovf(d.checked_mul(&d))?.checked_mul(&qii))?;
        if used > budget {
            continue;
        }
        x[i] = v;
        if i == 0 {
            if x.iter().all(|&a| a == 0) {
                continue;
            }
            let norm = g.bilinear(x, x);
            if visit(x, norm).is_break() {
                *stop = true;
                return Ok(());
            }
        } else {
            descend(q, g, i - 1, ovf(budget.checked_sub(&used))?, x, visit, stop)?;
            if *stop {
                return Ok(());
            }
        }
    }
    x[i] = 0;
    let _ = ovf(budget.checked_add(&Q::zero()))?;
    Ok(())
}

/// All `v` with `(v²) = norm` in a definite lattice, sorted, with `±v` both
/// listed. Fails with `CapExceeded` once more than `cap` vectors are found.
pub fn vectors_of_norm(lattice: &Lattice, norm: i64, cap: usize) -> Result<Vec<Vec<i64>>> {
    let (g, sign) = positive_form(lattice)?;
    let target = (norm * sign) as i128;
    let mut out = Vec::new();
    let mut over = false;
    visit_short(&g, target, |x, q| {
        if q == target {
            if out.len() == cap {
                over = true;
                return ControlFlow::Break(());
            }
            out.push(x.to_vec());
        }
        ControlFlow::Continue(())
    })?;
    if over {
        return Err(Error::CapExceeded { count: out.len() });
    }
    out.sort();
    Ok(out)
}

/// Whether a negative definite lattice has a vector of norm −2.
pub fn has_minus_two_vector(lattice: &Lattice) -> Result<bool> {
    if !lattice.is_negative_definite() {
        return Err(Error::NotDefinite);
    }
    let (g, _) = positive_form(lattice)?;
    let mut found = false;
    visit_short(&g, 2, |_, q| {
        if q == 2 {
            found = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(found)
}

/// Number of `(−2)`-vectors of a negative definite lattice.
pub fn count_roots(lattice: &Lattice, cap: usize) -> Result<usize> {
    if !lattice.is_negative_definite() {
        return Err(Error::NotDefinite);
    }
    Ok(vectors_of_norm(lattice, -2, cap)?.len())
}

/// Graded lexicographic key: `l1` norm first, then coordinates.
fn graded_key(v: &[i64]) -> (i64, Vec<i64>) {
    (v.iter().map(|x| x.abs()).sum(), v.to_vec())
}

/// Search budget for the tuple search (candidate vectors kept per norm).
const TUPLE_CAP: usize = 2_000_000;

/// Vectors `w₁ … w_k` of `E8(2)` (coordinates in `ε₁ … ε₈`) with Gram matrix
/// exactly `target` and primitive span; first hit in graded lexicographic
/// order.
pub fn find_tuple_in_e82(target: &IntMatrix) -> Result<Vec<Vec<i64>>> {
    let k = target.rows();
    if !target.is_square() || k > 4 {
        return Err(Error::BadShape(format!("expected a square matrix of size at most 4, got {}x{}", target.rows(), target.cols())));
    }
    if !target.is_symmetric() {
        return Err(Error::BadShape("target is not symmetric".into()));
    }
    for i in 0..k {
        if target[(i, i)] % 4 != 0 {
            return Err(Error::BadShape(format!("diagonal entry {} is not divisible by 4", target[(i, i)])));
        }
        for j in 0..k {
            if target[(i, j)] % 2 != 0 {
                return Err(Error::BadShape(format!("entry {} is odd", target[(i, j)])));
            }
        }
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    let t = Lattice::from_gram(target.clone()).map_err(|_| Error::BadShape("target is degenerate".into()))?;
    if !t.is_negative_definite() {
        return Err(Error::BadShape("target is not negative definite".into()));
    }
    // Work in E8, where E8(2) norms are halved.
    let e8 = Lattice::from_gram(e8_gram()).expect("E8");
    let mut lists: Vec<Vec<Vec<i64>>> = Vec::with_capacity(k);
    for i in 0..k {
        let mut l = vectors_of_norm(&e8, target[(i, i)] / 2, TUPLE_CAP)?;
        l.sort_by_key(|v| graded_key(v));
        lists.push(l);
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    if tuple_search(&e8, target, &lists, &mut chosen)? {
        return Ok(chosen.iter().enumerate().map(|(i, &c)| lists[i][c].clone()).collect());
    }
    Err(Error::NotFound(format!(
        "no primitive tuple in E8(2) with Gram {:?} (candidate counts {:?})",
        target.to_rows(),
        lists.iter().map(Vec::len).collect::<Vec<_>>()
    )))
}

fn tuple_search(e8: &Lattice, target: &IntMatrix, lists: &[Vec<Vec<i64>>], chosen: &mut Vec<usize>) -> Result<bool> {
    let i = chosen.len();
    if i == lists.len() {
        return Ok(true);
    }
    'cand: for (c, v) in lists[i].iter().enumerate() {
        for (j, &pc) in chosen.iter().enumerate() {
            if 2 * e8.dot(v, &lists[j][pc]) != target[(i, j)] as i128 {
                continue 'cand;
            }
        }
        let mut vecs: Vec<Vec<i64>> = chosen.iter().enumerate().map(|(j, &pc)| lists[j][pc].clone()).collect();
        vecs.push(v.clone());
        match saturation(8, &vecs) {
            Ok(cl) if cl.index == 1.into() => {}
            _ => continue,
        }
        chosen.push(c);
        if tuple_search(e8, target, lists, chosen)? {
            return Ok(true);
        }
        chosen.pop();
    }
    Ok(false)
}

/// Places an `E8(2)` coordinate vector into `N`.
pub fn e82_in_n(w: &[i64]) -> Vec<i64> {
    let mut v = vec![0; N_RANK];
    v[EPS..EPS + 8].copy_from_slice(w);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::rational_inverse;
    use crate::standard::{standard_lattice, StandardTag};
    use proptest::prelude::*;

    /// Box enumeration with `|xᵢ| ≤ √(B·(Q⁻¹)ᵢᵢ)`.
    fn naive_count(l: &Lattice, norm: i64) -> usize {
        let (g, sign) = positive_form(l).unwrap();
        let target = norm * sign;
        if target <= 0 {
            return 0;
        }
        let inv = rational_inverse(&g).unwrap();
        let n = g.rows();
        let bounds: Vec<i64> = (0..n)
            .map(|i| {
                let r = inv[i][i].clone() * num_bigint::BigInt::from(target);
                let f = r.to_integer();
                let mut b = 0i64;
                while num_bigint::BigInt::from((b + 1) * (b + 1)) <= f {
                    b += 1;
                }
                b
            })
            .collect();
        let mut x = vec![0i64; n];
        let mut count = 0;
        fn rec(i: usize, x: &mut Vec<i64>, b: &[i64], g: &IntMatrix, t: i64, count: &mut usize) {
            if i == x.len() {
                if g.bilinear(x, x) == t as i128 {
                    *count += 1;
                }
                return;
            }
            for v in -b[i]..=b[i] {
                x[i] = v;
                rec(i + 1, x, b, g, t, count);
            }
        }
        rec(0, &mut x, &bounds, &g, target, &mut count);
        count
    }

    #[test]
    fn e8_and_e82_counts() {
        let e8 = standard_lattice(StandardTag::E8);
        assert_eq!(vectors_of_norm(&e8, -2, 10_000).unwrap().len(), 240);
        let e82 = standard_lattice(StandardTag::E82);
        assert_eq!(vectors_of_norm(&e82, -4, 10_000).unwrap().len(), 240);
        assert!(vectors_of_norm(&e82, -2, 10).unwrap().is_empty());
        assert!(has_minus_two_vector(&e8).unwrap());
        assert!(!has_minus_two_vector(&e82).unwrap());
        assert!(has_minus_two_vector(&Lattice::from_rows(&[vec![-2]]).unwrap()).unwrap());
        assert_eq!(vectors_of_norm(&e8, -2, 10), Err(Error::CapExceeded { count: 10 }));
    }

    #[test]
    fn small_examples() {
        let l = Lattice::from_rows(&[vec![-4, 0], vec![0, -4]]).unwrap();
        assert_eq!(vectors_of_norm(&l, -4, 10).unwrap(), vec![vec![-1, 0], vec![0, -1], vec![0, 1], vec![1, 0]]);
        let u = Lattice::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(vectors_of_norm(&u, 2, 10), Err(Error::NotDefinite));
        assert!(vectors_of_norm(&l, 4, 10).unwrap().is_empty());
    }

    #[test]
    fn tuples_in_e82() {
        let w = find_tuple_in_e82(&IntMatrix::from_rows(&[vec![-4]]).unwrap()).unwrap();
        let e82 = standard_lattice(StandardTag::E82);
        assert_eq!(e82.norm(&w[0]), -4);
        assert_eq!(w[0].iter().map(|x| x.abs()).sum::<i64>(), 1);
        let w = find_tuple_in_e82(&IntMatrix::from_rows(&[vec![-8]]).unwrap()).unwrap();
        assert_eq!(e82.norm(&w[0]), -8);
        assert_eq!(saturation(8, &w).unwrap().index, 1.into());
        let t = IntMatrix::diagonal(&[-4, -4]);
        let w = find_tuple_in_e82(&t).unwrap();
        assert_eq!(e82.gram().congruence(&IntMatrix::from_columns(8, &w).unwrap()).unwrap(), t);
        let t = IntMatrix::from_rows(&[vec![-8, -6, -2], vec![-6, -8, -2], vec![-2, -2, -4]]).unwrap();
        let w = find_tuple_in_e82(&t).unwrap();
        assert_eq!(e82.gram().congruence(&IntMatrix::from_columns(8, &w).unwrap()).unwrap(), t);
        assert!(matches!(find_tuple_in_e82(&IntMatrix::from_rows(&[vec![-6]]).unwrap()), Err(Error::BadShape(_))));
        assert!(matches!(find_tuple_in_e82(&IntMatrix::from_rows(&[vec![4]]).unwrap()), Err(Error::BadShape(_))));
    }

    fn neg_def(n: usize) -> impl Strategy<Value = IntMatrix> {
        proptest::collection::vec(-3i64..=3, n * n).prop_map(move |v| {
            let mut m = IntMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..i {
                    m[(i, j)] = v[i * n + j];
                    m[(j, i)] = v[i * n + j];
                }
            }
            // diagonal dominance keeps the form definite
            for i in 0..n {
                let off: i64 = (0..n).filter(|&j| j != i).map(|j| m[(i, j)].abs()).sum();
                m[(i, i)] = -2 * ((off + 2) / 2) - 2 * v[i * n + i].abs().min(4);
            }
            m
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn fincke_pohst_agrees_with_box(g in (1usize..=4).prop_flat_map(neg_def)) {
            let l = Lattice::from_gram(g).unwrap();
            for norm in [-2, -4, -6, -8] {
                prop_assert_eq!(vectors_of_norm(&l, norm, 1_000_000).unwrap().len(), naive_count(&l, norm));
            }
        }
    }
}
