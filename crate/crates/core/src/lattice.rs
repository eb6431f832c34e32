//! Non-degenerate integral lattices given by a Gram matrix, and the basic
//! constructions on them: sums, rescaling, saturation, complements,
//! sublattices and overlattices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fqf::{discriminant_form, FiniteQuadraticForm};
use crate::matrix::{self, big_column, big_mul, big_transpose, hnf_basis, IntMatrix};

/// An integral lattice with a non-degenerate symmetric Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    gram: IntMatrix,
    signature: (usize, usize),
    even: bool,
}

impl Lattice {
    pub fn from_gram(gram: IntMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::NotSquare { rows: gram.rows(), cols: gram.cols() });
        }
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let (pos, neg, zero) = matrix::inertia(&gram);
        if zero > 0 {
            return Err(Error::Degenerate);
        }
        let even = (0..gram.rows()).all(|i| gram[(i, i)] % 2 == 0);
        Ok(Lattice { gram, signature: (pos, neg), even })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_gram(IntMatrix::from_rows(rows)?)
    }

    /// The rank-0 lattice.
    pub fn zero() -> Self {
        Lattice { gram: IntMatrix::zeros(0, 0), signature: (0, 0), even: true }
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn is_positive_definite(&self) -> bool {
        self.signature.1 == 0
    }

    pub fn is_negative_definite(&self) -> bool {
        self.signature.0 == 0
    }

    /// Determinant of the Gram matrix.
    pub fn det(&self) -> BigInt {
        self.gram.det().expect("square")
    }

    /// `|det gram|`, the order of the discriminant group.
    pub fn discriminant_order(&self) -> BigInt {
        self.det().abs()
    }

    /// `|det gram|` as a machine integer.
    pub fn discr(&self) -> Result<u64> {
        self.discriminant_order().to_u64().ok_or(Error::Overflow("discriminant"))
    }

    /// Inner product of two coordinate vectors.
    pub fn dot(&self, a: &[i64], b: &[i64]) -> i128 {
        self.gram.bilinear(a, b)
    }

    pub fn norm(&self, a: &[i64]) -> i128 {
        self.gram.bilinear(a, a)
    }

    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        Lattice {
            gram: IntMatrix::block_diagonal(&[&self.gram, &other.gram]),
            signature: (self.signature.0 + other.signature.0, self.signature.1 + other.signature.1),
            even: self.even && other.even,
        }
    }

    pub fn direct_sum_all(parts: &[&Lattice]) -> Lattice {
        parts.iter().fold(Lattice::zero(), |acc, l| acc.direct_sum(l))
    }

    /// `L(n)`: the same group with the form multiplied by `n`.
    pub fn rescale(&self, n: i64) -> Result<Lattice> {
        if n == 0 {
            return Err(Error::ZeroScale);
        }
        let gram = self.gram.scale(n)?;
        let signature = if n > 0 { self.signature } else { (self.signature.1, self.signature.0) };
        let even = (0..gram.rows()).all(|i| gram[(i, i)] % 2 == 0);
        Ok(Lattice { gram, signature, even })
    }

    /// Negated form `L(-1)`.
    pub fn negate(&self) -> Lattice {
        self.rescale(-1).expect("negation cannot overflow a valid Gram")
    }

    pub fn discriminant_form(&self) -> Result<FiniteQuadraticForm> {
        Ok(discriminant_form(self)?.form)
    }
}

/// A symmetric Gram matrix that may be singular.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegenerateQuadraticModule {
    pub gram: IntMatrix,
    pub radical_rank: usize,
}

impl DegenerateQuadraticModule {
    pub fn from_gram(gram: IntMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::NotSquare { rows: gram.rows(), cols: gram.cols() });
        }
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let (_, _, zero) = matrix::inertia(&gram);
        Ok(DegenerateQuadraticModule { gram, radical_rank: zero })
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn into_lattice(self) -> Result<Lattice> {
        Lattice::from_gram(self.gram)
    }
}

/// Saturation of the span of `vectors` inside `Zⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closure {
    /// Columns form a basis of the saturation.
    pub basis: IntMatrix,
    /// `[saturation : span]`.
    pub index: BigInt,
}

/// Saturation of the span of `vectors` (coordinate vectors in the ambient
/// basis of `L`) together with its index over the span.
pub fn primitive_closure(lattice: &Lattice, vectors: &[Vec<i64>]) -> Result<Closure> {
    saturation(lattice.rank(), vectors)
}

/// Lattice-independent saturation in `Zⁿ`.
pub fn saturation(n: usize, vectors: &[Vec<i64>]) -> Result<Closure> {
    let k = vectors.len();
    if k == 0 {
        return Ok(Closure { basis: IntMatrix::zeros(n, 0), index: BigInt::one() });
    }
    let p = IntMatrix::from_columns(n, vectors)?;
    let s = matrix::snf(&p);
    if s.rank() < k {
        return Err(Error::DependentVectors);
    }
    let index: BigInt = s.diagonal.iter().product();
    let cols: Vec<Vec<BigInt>> = (0..k).map(|j| big_column(&s.u_inv, j)).collect();
    let basis = IntMatrix::from_big(&big_transpose(&cols))?;
    Ok(Closure { basis, index })
}

/// Orthogonal complement of `vectors` inside `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complement {
    pub module: DegenerateQuadraticModule,
    /// Columns are the complement basis in the coordinates of `L`.
    pub basis: IntMatrix,
}

pub fn orthogonal_complement(lattice: &Lattice, vectors: &[Vec<i64>]) -> Result<Complement> {
    let n = lattice.rank();
    for v in vectors {
        if v.len() != n {
            return Err(Error::BadLength { expected: n, got: v.len() });
        }
    }
    let rows: Vec<Vec<BigInt>> = vectors
        .iter()
        .map(|v| lattice.gram().mul_vec(v).map(|w| w.into_iter().map(BigInt::from).collect()))
        .collect::<Result<_>>()?;
    let basis = if rows.is_empty() {
        IntMatrix::identity(n)
    } else {
        let k = matrix::integer_kernel(&rows, n);
        if k.first().map_or(0, Vec::len) == 0 {
            IntMatrix::zeros(n, 0)
        } else {
            IntMatrix::from_big(&k)?
        }
    };
    let gram = lattice.gram().congruence(&basis)?;
    Ok(Complement { module: DegenerateQuadraticModule::from_gram(gram)?, basis })
}

/// A finite-index sublattice together with its inclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice {
    pub lattice: Lattice,
    /// Columns are the sublattice basis in the coordinates of the ambient lattice.
    pub basis: IntMatrix,
    pub index: u64,
}

pub fn sublattice_from_gram_change(lattice: &Lattice, basis: &IntMatrix) -> Result<Sublattice> {
    if basis.rows() != lattice.rank() || basis.cols() != lattice.rank() {
        return Err(Error::Dimension(format!(
            "basis must be {n}x{n}, got {}x{}",
            basis.rows(),
            basis.cols(),
            n = lattice.rank()
        )));
    }
    let det = basis.det()?;
    if det.is_zero() {
        return Err(Error::DependentVectors);
    }
    let index = det.abs().to_u64().ok_or(Error::Overflow("sublattice index"))?;
    let lat = Lattice::from_gram(lattice.gram().congruence(basis)?)?;
    Ok(Sublattice { lattice: lat, basis: basis.clone(), index })
}

/// An even overlattice `M ⊇ L` and the basis of `M` expressed rationally in
/// the basis of `L` as `basis / denominator`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Overlattice {
    pub lattice: Lattice,
    pub basis: IntMatrix,
    pub denominator: i64,
    pub index: u64,
}

/// Overlattice of `L` determined by an isotropic subgroup of `A_L`, given by
/// generators in the coordinates of `discriminant_form(L)`.
pub fn overlattice_from_isotropic(lattice: &Lattice, generators: &[Vec<i64>]) -> Result<Overlattice> {
    let disc = discriminant_form(lattice)?;
    let form = &disc.form;
    for g in generators {
        if g.len() != form.ngens() {
            return Err(Error::NotSubgroup(format!("element {g:?} has wrong length")));
        }
    }
    let sub = form.span(generators);
    for (i, x) in generators.iter().enumerate() {
        if !form.q(x).is_zero() {
            return Err(Error::NotIsotropic(format!("q(generator {i}) = {}", form.q(x))));
        }
        for y in &generators[..i] {
            if !form.b(x, y).is_zero() {
                return Err(Error::NotIsotropic(format!("b({x:?}, {y:?}) = {}", form.b(x, y))));
            }
        }
    }
    let n = lattice.rank();
    let e = form.exponent();
    let mut gens: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::from(e) } else { BigInt::zero() }).collect())
        .collect();
    for g in generators {
        let (num, den) = disc.lift(g);
        let scale = e / den;
        gens.push(num.iter().map(|x| BigInt::from(x * scale)).collect());
    }
    let b = hnf_basis(&big_transpose(&gens), n)?;
    let basis = IntMatrix::from_big(&b)?;
    let gram_scaled = lattice.gram().to_big();
    let g = big_mul(&big_mul(&big_transpose(&b), &gram_scaled), &b);
    let e2 = BigInt::from(e) * BigInt::from(e);
    let mut rows = Vec::with_capacity(n);
    for row in &g {
        let mut out = Vec::with_capacity(n);
        for x in row {
            let (q, r) = x.div_rem(&e2);
            if !r.is_zero() {
                return Err(Error::NotIsotropic("overlattice is not integral".into()));
            }
            out.push(q.to_i64().ok_or(Error::Overflow("overlattice Gram"))?);
        }
        rows.push(out);
    }
    let lat = Lattice::from_rows(&rows)?;
    let index = sub.order();
    Ok(Overlattice { lattice: lat, basis, denominator: e, index })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lat(rows: &[&[i64]]) -> Lattice {
        Lattice::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn construction_examples() {
        let u = lat(&[&[0, 1], &[1, 0]]);
        assert_eq!((u.rank(), u.signature(), u.is_even()), (2, (1, 1), true));
        let two = lat(&[&[2]]);
        assert_eq!((two.signature(), two.is_even()), ((1, 0), true));
        assert!(!lat(&[&[1, 0], &[0, 1]]).is_even());
        assert_eq!(Lattice::from_rows(&[vec![0, 1], vec![2, 0]]), Err(Error::NotSymmetric));
        assert_eq!(Lattice::from_rows(&[vec![1, 1], vec![1, 1]]), Err(Error::Degenerate));
    }

    #[test]
    fn sums_and_rescaling() {
        let u = lat(&[&[0, 1], &[1, 0]]);
        let u2 = u.rescale(2).unwrap();
        assert_eq!(u2.gram().to_rows(), vec![vec![0, 2], vec![2, 0]]);
        let s = u.direct_sum(&u2);
        assert_eq!((s.rank(), s.signature()), (4, (2, 2)));
        assert_eq!(u.direct_sum(&Lattice::zero()), u);
        assert_eq!(u.rescale(1).unwrap(), u);
        assert_eq!(u.rescale(0), Err(Error::ZeroScale));
    }

    #[test]
    fn closure_examples() {
        let d44 = lat(&[&[4, 0], &[0, 4]]);
        let c = primitive_closure(&d44, &[vec![2, 0]]).unwrap();
        assert_eq!(c.index, BigInt::from(2));
        assert_eq!(c.basis.column(0).iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![1, 0]);
        let u = lat(&[&[0, 1], &[1, 0]]);
        assert_eq!(primitive_closure(&u, &[vec![1, 2]]).unwrap().index, BigInt::one());
        assert_eq!(primitive_closure(&u, &[vec![1, 2], vec![2, 4]]), Err(Error::DependentVectors));
    }

    #[test]
    fn complement_examples() {
        let d44 = lat(&[&[4, 0], &[0, 4]]);
        let c = orthogonal_complement(&d44, &[vec![1, 0]]).unwrap();
        assert_eq!(c.module.gram.to_rows(), vec![vec![4]]);
        let u = lat(&[&[0, 1], &[1, 0]]);
        let c = orthogonal_complement(&u, &[vec![1, 0]]).unwrap();
        assert_eq!(c.module.gram.to_rows(), vec![vec![0]]);
        assert_eq!(c.module.radical_rank, 1);
    }

    #[test]
    fn sublattice_examples() {
        let d44 = lat(&[&[4, 0], &[0, 4]]);
        let s = sublattice_from_gram_change(&d44, &IntMatrix::diagonal(&[3, 1])).unwrap();
        assert_eq!(s.lattice.gram().to_rows(), vec![vec![36, 0], vec![0, 4]]);
        assert_eq!(s.index, 3);
        let u = lat(&[&[0, 1], &[1, 0]]);
        let s = sublattice_from_gram_change(&u, &IntMatrix::diagonal(&[1, 2])).unwrap();
        assert_eq!(s.lattice.gram().to_rows(), vec![vec![0, 2], vec![2, 0]]);
        assert_eq!(sublattice_from_gram_change(&u, &IntMatrix::identity(2)).unwrap().lattice, u);
    }

    #[test]
    fn overlattice_examples() {
        let l = lat(&[&[2, 0], &[0, 18]]);
        let d = discriminant_form(&l).unwrap();
        let g = d.element_of_pairing(&[0, 6]);
        let o = overlattice_from_isotropic(&l, &[g]).unwrap();
        assert_eq!(o.index, 3);
        assert_eq!(o.lattice.gram().to_rows(), vec![vec![2, 0], vec![0, 2]]);

        let l = lat(&[&[4, 0], &[0, 4]]);
        let d = discriminant_form(&l).unwrap();
        let g = d.element_of_pairing(&[2, 2]);
        let o = overlattice_from_isotropic(&l, &[g]).unwrap();
        assert_eq!(o.index, 2);
        assert_eq!(o.lattice.gram().to_rows(), vec![vec![4, 2], vec![2, 2]]);
        assert_eq!(o.lattice.det(), BigInt::from(4));

        let triv = overlattice_from_isotropic(&l, &[]).unwrap();
        assert_eq!((triv.index, triv.lattice.gram()), (1, l.gram()));

        let bad = d.element_of_pairing(&[1, 0]);
        assert!(matches!(overlattice_from_isotropic(&l, &[bad]), Err(Error::NotIsotropic(_))));
    }

    fn small_gram(n: usize) -> impl Strategy<Value = IntMatrix> {
        proptest::collection::vec(-6i64..=6, n * n).prop_map(move |v| {
            let mut m = IntMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..=i {
                    let x = v[i * n + j];
                    m[(i, j)] = x;
                    m[(j, i)] = x;
                }
            }
            m
        })
    }

    fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
        proptest::collection::vec((0..n, 0..n, -3i64..=3), 0..12).prop_map(move |ops| {
            let mut m = IntMatrix::identity(n);
            for (i, j, c) in ops {
                if i == j {
                    continue;
                }
                for r in 0..n {
                    m[(r, j)] += c * m[(r, i)];
                }
            }
            m
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn signature_is_a_congruence_invariant(g in small_gram(4), u in unimodular(4)) {
            let base = matrix::inertia(&g);
            let moved = matrix::inertia(&g.congruence(&u).unwrap());
            prop_assert_eq!(base, moved);
        }

        #[test]
        fn discriminant_order_matches_determinant(g in small_gram(3)) {
            if let Ok(l) = Lattice::from_gram(g.scale(2).unwrap()) {
                let f = l.discriminant_form().unwrap();
                prop_assert_eq!(BigInt::from(f.order()), l.discriminant_order());
            }
        }

        #[test]
        fn rescaling_scales_discriminant(g in small_gram(3), n in 1i64..4) {
            if let Ok(l) = Lattice::from_gram(g) {
                let r = l.rescale(n).unwrap();
                prop_assert_eq!(r.discriminant_order(), l.discriminant_order() * BigInt::from(n).pow(3));
                prop_assert!(l.rescale(2).unwrap().is_even());
            }
        }

        #[test]
        fn closure_is_idempotent(v in proptest::collection::vec(-9i64..=9, 8)) {
            let vecs = vec![v[..4].to_vec(), v[4..].to_vec()];
            if let Ok(c) = saturation(4, &vecs) {
                let again = saturation(4, &c.basis.columns()).unwrap();
                prop_assert_eq!(again.index, BigInt::one());
            }
        }

        #[test]
        fn complements_are_saturated(g in small_gram(4), v in proptest::collection::vec(-5i64..=5, 4)) {
            if let Ok(l) = Lattice::from_gram(g) {
                let c = orthogonal_complement(&l, &[v]).unwrap();
                let cols = c.basis.columns();
                prop_assert_eq!(saturation(4, &cols).unwrap().index, BigInt::one());
            }
        }

        /// The overlattice defined by an isotropic element `x` has
        /// discriminant form `x^⊥/x`.
        #[test]
        fn overlattice_form_is_subquotient(g in small_gram(3)) {
            let Ok(l) = Lattice::from_gram(g.scale(2).unwrap()) else { return Ok(()) };
            let d = discriminant_form(&l).unwrap();
            prop_assume!(d.form.order() <= 4096);
            let iso = d.form.elements(4096).unwrap().into_iter().find(|x| !d.form.is_zero_element(x) && d.form.q_num(x) == 0);
            let Some(x) = iso else { return Ok(()) };
            let o = overlattice_from_isotropic(&l, std::slice::from_ref(&x)).unwrap();
            let sub = d.form.quotient(&d.form.span(&[x])).unwrap();
            let a_m = o.lattice.discriminant_form().unwrap();
            prop_assert_eq!(a_m.order() * o.index * o.index, d.form.order());
            prop_assert!(o.lattice.is_even());
            prop_assert!(a_m.is_isomorphic(&sub.form).unwrap());
        }
    }
}
