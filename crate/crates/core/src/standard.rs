//! The fixed lattices `U`, `U(2)`, `E8`, `E8(2)`, `M = U(2) ⊕ E8(2)`,
//! `N = U ⊕ U(2) ⊕ E8(2)` and the K3 lattice `Λ = E8² ⊕ U³`, the involution
//! of `Λ` with eigenlattices `M` and `N`, the character `ε` on `N`, and
//! random isometries of `N`.
//!
//! Basis of `N`: `e, f` (the `U` summand), `h, k` (the `U(2)` summand), then
//! `ε₁ … ε₈` (the `E8(2)` summand in Bourbaki numbering).

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::matrix::{self, IntMatrix};

/// Index of `e` in the basis of `N`.
pub const E: usize = 0;
/// Index of `f`.
pub const F: usize = 1;
/// Index of `h`.
pub const H: usize = 2;
/// Index of `k`.
pub const K: usize = 3;
/// Index of `ε₁`; `ε_i` sits at `EPS + i - 1`.
pub const EPS: usize = 4;
/// Rank of `N`.
pub const N_RANK: usize = 12;

/// Adjacent pairs (1-based) of the E8 Dynkin diagram in Bourbaki numbering.
const E8_EDGES: [(usize, usize); 7] = [(1, 3), (2, 4), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StandardTag {
    U,
    U2,
    E8,
    E82,
    M,
    N,
    Lambda,
}

impl StandardTag {
    pub const ALL: [StandardTag; 7] =
        [StandardTag::U, StandardTag::U2, StandardTag::E8, StandardTag::E82, StandardTag::M, StandardTag::N, StandardTag::Lambda];

    pub fn name(self) -> &'static str {
        match self {
            StandardTag::U => "U",
            StandardTag::U2 => "U2",
            StandardTag::E8 => "E8",
            StandardTag::E82 => "E82",
            StandardTag::M => "M",
            StandardTag::N => "N",
            StandardTag::Lambda => "Lambda",
        }
    }

    pub fn basis_order(self) -> &'static str {
        match self {
            StandardTag::U => "e, f",
            StandardTag::U2 => "h, k",
            StandardTag::E8 | StandardTag::E82 => "ε1..ε8 (Bourbaki)",
            StandardTag::M => "h, k, ε1..ε8",
            StandardTag::N => "e, f, h, k, ε1..ε8",
            StandardTag::Lambda => "E8 (1..8), E8 (9..16), U (17,18), U (19,20), U (21,22)",
        }
    }
}

impl fmt::Display for StandardTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StandardTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "U" => Ok(StandardTag::U),
            "U2" | "U(2)" => Ok(StandardTag::U2),
            "E8" => Ok(StandardTag::E8),
            "E82" | "E8(2)" => Ok(StandardTag::E82),
            "M" => Ok(StandardTag::M),
            "N" => Ok(StandardTag::N),
            "Lambda" | "Λ" => Ok(StandardTag::Lambda),
            other => Err(Error::UnknownTag(other.to_string())),
        }
    }
}

/// Negated Cartan matrix of E8.
pub fn e8_gram() -> IntMatrix {
    let mut g = IntMatrix::diagonal(&[-2; 8]);
    for &(a, b) in &E8_EDGES {
        g[(a - 1, b - 1)] = 1;
        g[(b - 1, a - 1)] = 1;
    }
    g
}

fn hyperbolic() -> IntMatrix {
    IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).expect("2x2")
}

pub fn standard_gram(tag: StandardTag) -> IntMatrix {
    let u = hyperbolic();
    let u2 = u.scale(2).expect("small");
    let e8 = e8_gram();
    let e82 = e8.scale(2).expect("small");
    match tag {
        StandardTag::U => u,
        StandardTag::U2 => u2,
        StandardTag::E8 => e8,
        StandardTag::E82 => e82,
        StandardTag::M => IntMatrix::block_diagonal(&[&u2, &e82]),
        StandardTag::N => IntMatrix::block_diagonal(&[&u, &u2, &e82]),
        StandardTag::Lambda => IntMatrix::block_diagonal(&[&e8, &e8, &u, &u, &u]),
    }
}

pub fn standard_lattice(tag: StandardTag) -> Lattice {
    Lattice::from_gram(standard_gram(tag)).expect("standard lattices are non-degenerate")
}

/// Looks up a standard lattice by name.
pub fn standard_lattice_by_name(name: &str) -> Result<Lattice> {
    Ok(standard_lattice(name.parse()?))
}

/// The Enriques lattice `N`.
pub fn enriques_lattice() -> Lattice {
    standard_lattice(StandardTag::N)
}

/// Coordinates of `e + f` in `N`.
pub fn e_plus_f() -> Vec<i64> {
    let mut v = vec![0; N_RANK];
    v[E] = 1;
    v[F] = 1;
    v
}

/// `ε(x) = (x . (e+f)) mod 2` for `x` in `N`-coordinates.
pub fn epsilon(x: &[i64]) -> Result<u8> {
    if x.len() != N_RANK {
        return Err(Error::BadLength { expected: N_RANK, got: x.len() });
    }
    let g = standard_gram(StandardTag::N);
    Ok(g.bilinear(x, &e_plus_f()).rem_euclid(2) as u8)
}

/// Values of `ε` on the standard basis of `N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterOnN {
    pub values: Vec<u8>,
}

impl CharacterOnN {
    pub fn canonical() -> Self {
        let g = standard_gram(StandardTag::N);
        let w = g.mul_vec(&e_plus_f()).expect("small");
        CharacterOnN { values: w.into_iter().map(|x| x.rem_euclid(2) as u8).collect() }
    }

    /// The character `x ↦ (x . v) mod 2` for a vector `v` of `N`.
    pub fn pairing_with(v: &[i64]) -> Result<Self> {
        if v.len() != N_RANK {
            return Err(Error::BadLength { expected: N_RANK, got: v.len() });
        }
        let w = standard_gram(StandardTag::N).mul_vec(v)?;
        Ok(CharacterOnN { values: w.into_iter().map(|x| x.rem_euclid(2) as u8).collect() })
    }

    pub fn eval(&self, x: &[i64]) -> u8 {
        x.iter().zip(&self.values).map(|(&a, &b)| a.rem_euclid(2) as u8 * b).sum::<u8>() % 2
    }
}

/// True iff every Gram entry is even and every diagonal entry is divisible
/// by 4, i.e. the lattice is `L'(2)` for an even `L'`.
pub fn is_twice_even(lattice: &Lattice) -> bool {
    let g = lattice.gram();
    (0..g.rows()).all(|i| (0..g.cols()).all(|j| g[(i, j)] % 2 == 0) && g[(i, i)] % 4 == 0)
}

/// The involution of `Λ` swapping the two `E8 ⊕ U` blocks and negating the
/// third `U`.
pub fn iota() -> IntMatrix {
    let mut m = IntMatrix::zeros(22, 22);
    for i in 0..8 {
        m[(i + 8, i)] = 1;
        m[(i, i + 8)] = 1;
    }
    for i in 0..2 {
        m[(18 + i, 16 + i)] = 1;
        m[(16 + i, 18 + i)] = 1;
        m[(20 + i, 20 + i)] = -1;
    }
    m
}

/// An eigenlattice: its Gram matrix and basis in `Λ`-coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eigenlattice {
    pub lattice: Lattice,
    pub basis: IntMatrix,
}

/// Saturated `+1` and `-1` eigenlattices of the involution on `Λ`.
pub fn iota_eigenlattices() -> (Eigenlattice, Eigenlattice) {
    let lambda = standard_gram(StandardTag::Lambda);
    let i = iota();
    let eig = |sign: i64| {
        let mut m = i.clone();
        for d in 0..22 {
            m[(d, d)] -= sign;
        }
        let k = matrix::integer_kernel(&m.to_big(), 22);
        let basis = IntMatrix::from_big(&k).expect("small");
        let lattice = Lattice::from_gram(lambda.congruence(&basis).expect("small")).expect("non-degenerate");
        Eigenlattice { lattice, basis }
    };
    (eig(1), eig(-1))
}

/// Matrix of the reflection `x ↦ x + (x.v) v` in a `(-2)`-vector of `N`.
pub fn reflection(v: &[i64]) -> Result<IntMatrix> {
    let g = standard_gram(StandardTag::N);
    if g.bilinear(v, v) != -2 {
        return Err(Error::BadParams("reflection vector must have norm -2".into()));
    }
    let gv = g.mul_vec(v)?;
    let mut m = IntMatrix::identity(N_RANK);
    for i in 0..N_RANK {
        for j in 0..N_RANK {
            m[(i, j)] += v[i] * gv[j];
        }
    }
    Ok(m)
}

/// Matrix of the Eichler transvection
/// `x ↦ x + (x.u) a − (x.a) u − ½(a²)(x.u) u` for isotropic `u` and `a ⊥ u`.
pub fn eichler(u: &[i64], a: &[i64]) -> Result<IntMatrix> {
    let g = standard_gram(StandardTag::N);
    if g.bilinear(u, u) != 0 || g.bilinear(u, a) != 0 {
        return Err(Error::BadParams("Eichler transvection needs u isotropic and a ⊥ u".into()));
    }
    let a2 = g.bilinear(a, a);
    if a2 % 2 != 0 {
        return Err(Error::BadParams("a must have even norm".into()));
    }
    let half = (a2 / 2) as i64;
    let gu = g.mul_vec(u)?;
    let ga = g.mul_vec(a)?;
    let mut m = IntMatrix::identity(N_RANK);
    for i in 0..N_RANK {
        for j in 0..N_RANK {
            m[(i, j)] += a[i] * gu[j] - u[i] * ga[j] - half * u[i] * gu[j];
        }
    }
    Ok(m)
}

/// Whether `m` preserves the Gram matrix of `N`.
pub fn preserves_n(m: &IntMatrix) -> bool {
    let g = standard_gram(StandardTag::N);
    m.is_square() && m.rows() == N_RANK && g.congruence(m).is_ok_and(|x| x == g)
}

fn small_vector_in_m(rng: &mut ChaCha8Rng) -> Vec<i64> {
    let mut v = vec![0i64; N_RANK];
    let nonzero = rng.gen_range(1..=3);
    for _ in 0..nonzero {
        let i = rng.gen_range(H..N_RANK);
        v[i] += if rng.gen_bool(0.5) { 1 } else { -1 };
    }
    v
}

/// A random generator: a reflection in a `(-2)`-vector `±e + b f + u` or an
/// Eichler transvection along `e` or `f`.
fn random_generator(rng: &mut ChaCha8Rng) -> IntMatrix {
    let g = standard_gram(StandardTag::N);
    let u = small_vector_in_m(rng);
    if rng.gen_bool(0.5) {
        // v = a e + b f + u with a = ±1 and 2ab + u² = −2
        let a: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
        let u2 = g.bilinear(&u, &u) as i64;
        let b = (-1 - u2 / 2) * a;
        let mut v = u;
        v[E] = a;
        v[F] = b;
        reflection(&v).expect("norm -2 by construction")
    } else {
        let mut iso = vec![0i64; N_RANK];
        iso[if rng.gen_bool(0.5) { E } else { F }] = 1;
        eichler(&iso, &u).expect("u lies in the orthogonal of U")
    }
}

/// A product of `length` generators of `O(N)` drawn deterministically from
/// `seed`; every factor and the product preserve the Gram matrix of `N`.
pub fn isometry_of_n(seed: u64, length: usize) -> IntMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = IntMatrix::identity(N_RANK);
    for _ in 0..length {
        let step = random_generator(&mut rng);
        debug_assert!(preserves_n(&step));
        // A factor that would overflow i64 entries is skipped.
        if let Ok(next) = acc.mul(&step) {
            acc = next;
        }
    }
    debug_assert!(preserves_n(&acc));
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fqf::DEFAULT_NODE_CAP;
    use num_bigint::BigInt;
    use num_traits::Signed;
    use proptest::prelude::*;

    #[test]
    fn gram_conventions() {
        assert_eq!(standard_gram(StandardTag::U).to_rows(), vec![vec![0, 1], vec![1, 0]]);
        let e8 = standard_lattice(StandardTag::E8);
        assert_eq!(e8.signature(), (0, 8));
        assert_eq!(e8.det(), BigInt::from(1));
        let n = enriques_lattice();
        assert_eq!((n.rank(), n.signature(), n.is_even()), (12, (2, 10), true));
        assert_eq!(n.discriminant_order(), BigInt::from(1024));
        let l = standard_lattice(StandardTag::Lambda);
        assert_eq!((l.rank(), l.signature()), (22, (3, 19)));
        assert_eq!(standard_lattice(StandardTag::E82).det(), BigInt::from(256));
        assert_eq!("X".parse::<StandardTag>(), Err(Error::UnknownTag("X".into())));
        for t in StandardTag::ALL {
            assert_eq!(t.name().parse::<StandardTag>().unwrap(), t);
        }
    }

    #[test]
    fn discriminant_of_n() {
        let f = enriques_lattice().discriminant_form().unwrap();
        assert_eq!(f.order(), 1024);
        assert_eq!(f.p_part(2).order(), 1024);
        assert_eq!(f.min_generators(), 10);
        assert_eq!(f.milgram_signature().unwrap(), 0);
        let m = standard_lattice(StandardTag::M).discriminant_form().unwrap();
        assert!(m.find_isomorphism(&f, DEFAULT_NODE_CAP).unwrap().is_some());
    }

    #[test]
    fn epsilon_examples() {
        let mut e = vec![0; 12];
        e[E] = 1;
        assert_eq!(epsilon(&e).unwrap(), 1);
        assert_eq!(epsilon(&e_plus_f()).unwrap(), 0);
        let mut h = vec![0; 12];
        h[H] = 1;
        assert_eq!(epsilon(&h).unwrap(), 0);
        assert_eq!(epsilon(&[1, 0]), Err(Error::BadLength { expected: 12, got: 2 }));
        assert_eq!(CharacterOnN::canonical().values, vec![1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn twice_even_examples() {
        assert!(is_twice_even(&standard_lattice(StandardTag::U2)));
        assert!(!is_twice_even(&standard_lattice(StandardTag::U)));
        assert!(is_twice_even(&Lattice::from_rows(&[vec![4, 0], vec![0, 4]]).unwrap()));
    }

    #[test]
    fn eigenlattices() {
        let (plus, minus) = iota_eigenlattices();
        assert_eq!((plus.lattice.rank(), plus.lattice.signature()), (10, (1, 9)));
        assert_eq!((minus.lattice.rank(), minus.lattice.signature()), (12, (2, 10)));
        let qm = standard_lattice(StandardTag::M).discriminant_form().unwrap();
        let qn = enriques_lattice().discriminant_form().unwrap();
        assert!(plus.lattice.discriminant_form().unwrap().is_isomorphic(&qm).unwrap());
        assert!(minus.lattice.discriminant_form().unwrap().is_isomorphic(&qn).unwrap());
        let mut cols = plus.basis.columns();
        cols.extend(minus.basis.columns());
        let both = IntMatrix::from_columns(22, &cols).unwrap();
        assert_eq!(both.det().unwrap().abs(), BigInt::from(1024));
        let i = iota();
        assert_eq!(i.mul(&i).unwrap(), IntMatrix::identity(22));
        let g = standard_gram(StandardTag::Lambda);
        assert_eq!(i.transpose().mul(&g).unwrap().mul(&i).unwrap(), g);
    }

    #[test]
    fn isometry_generators() {
        assert_eq!(isometry_of_n(7, 0), IntMatrix::identity(12));
        let mut v = vec![0; 12];
        v[E] = 1;
        v[F] = -1;
        let s = reflection(&v).unwrap();
        assert!(preserves_n(&s));
        let mut e = vec![0; 12];
        e[E] = 1;
        let mut f = vec![0; 12];
        f[F] = 1;
        assert_eq!(s.mul_vec(&e).unwrap(), f);
        let mut h = vec![0; 12];
        h[H] = 1;
        assert!(preserves_n(&eichler(&e, &h).unwrap()));
        for seed in 0..20 {
            let g = isometry_of_n(seed, 12);
            assert!(preserves_n(&g));
            assert_eq!(g, isometry_of_n(seed, 12));
        }
    }

    fn n_vector() -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(-6i64..=6, N_RANK)
    }

    fn unit(i: usize) -> Vec<i64> {
        let mut v = vec![0; N_RANK];
        v[i] = 1;
        v
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn epsilon_is_linear(x in n_vector(), y in n_vector()) {
            let sum: Vec<i64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
            prop_assert_eq!(epsilon(&sum).unwrap(), (epsilon(&x).unwrap() + epsilon(&y).unwrap()) % 2);
        }

        #[test]
        fn epsilon_vanishes_on_norm_two_mod_four(x in n_vector()) {
            let n = enriques_lattice();
            prop_assume!(n.norm(&x).rem_euclid(4) == 2);
            prop_assert_eq!(epsilon(&x).unwrap(), 0);
        }

        #[test]
        fn epsilon_is_isometry_invariant(seed in any::<u64>(), length in 0usize..=12, x in n_vector()) {
            let g = isometry_of_n(seed, length);
            prop_assert!(preserves_n(&g));
            prop_assert_eq!(epsilon(&g.mul_vec(&x).unwrap()).unwrap(), epsilon(&x).unwrap());
        }

        /// Another hyperbolic pair `e' = G e`, `f' = G f` defines the same
        /// character.
        #[test]
        fn epsilon_is_independent_of_the_hyperbolic_pair(seed in any::<u64>(), length in 1usize..=12) {
            let g = isometry_of_n(seed, length);
            let e2 = g.mul_vec(&unit(E)).unwrap();
            let f2 = g.mul_vec(&unit(F)).unwrap();
            let n = enriques_lattice();
            prop_assert_eq!(n.norm(&e2), 0);
            prop_assert_eq!(n.dot(&e2, &f2), 1);
            let sum: Vec<i64> = e2.iter().zip(&f2).map(|(a, b)| a + b).collect();
            let other = CharacterOnN::pairing_with(&sum).unwrap();
            for i in 0..N_RANK {
                prop_assert_eq!(other.eval(&unit(i)), epsilon(&unit(i)).unwrap());
            }
        }
    }
}
