//! Primitive embeddings into the Enriques lattice `N`, the pullback of its
//! canonical character, orthogonal complements and the mod-4 bound on the
//! characters that can occur.

pub mod enumerate;
pub mod theorem_a;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{orthogonal_complement, primitive_closure, Lattice};
use crate::matrix::IntMatrix;
use crate::standard::{enriques_lattice, epsilon, N_RANK};

pub use enumerate::{count_roots, find_tuple_in_e82, has_minus_two_vector, vectors_of_norm};
pub use theorem_a::{brauer_image_kummer, theorem_a_embedding, TheoremALabel, TheoremAParams};

/// A validated primitive embedding `T ↪ N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveEmbedding {
    source: Lattice,
    images: IntMatrix,
}

/// A homomorphism `T → Z/2`, given by its values on the basis of `T`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Character {
    pub values: Vec<u8>,
}

impl Character {
    pub fn new(values: Vec<u8>) -> Self {
        Character { values: values.into_iter().map(|v| v & 1).collect() }
    }

    pub fn zero(rank: usize) -> Self {
        Character { values: vec![0; rank] }
    }

    pub fn source_rank(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn eval(&self, x: &[i64]) -> u8 {
        (x.iter().zip(&self.values).filter(|(a, &v)| v == 1 && a.rem_euclid(2) == 1).count() % 2) as u8
    }

    fn mask(&self) -> u32 {
        self.values.iter().enumerate().fold(0, |m, (i, &v)| m | (u32::from(v) << i))
    }

    fn from_mask(mask: u32, rank: usize) -> Self {
        Character { values: (0..rank).map(|i| (mask >> i & 1) as u8).collect() }
    }
}

impl std::fmt::Display for Character {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.values.iter().map(u8::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

impl PrimitiveEmbedding {
    pub fn source(&self) -> &Lattice {
        &self.source
    }

    /// `12 × rank`; columns are the images of the source basis.
    pub fn images(&self) -> &IntMatrix {
        &self.images
    }

    pub fn image_vectors(&self) -> Vec<Vec<i64>> {
        self.images.columns()
    }
}

/// Validates `imagesᵀ·gram(N)·images = gram(source)` and primitivity.
pub fn embedding_from_images(source: &Lattice, images: &IntMatrix) -> Result<PrimitiveEmbedding> {
    if images.rows() != N_RANK || images.cols() != source.rank() {
        return Err(Error::Dimension(format!(
            "images must be {N_RANK}x{}, got {}x{}",
            source.rank(),
            images.rows(),
            images.cols()
        )));
    }
    let n = enriques_lattice();
    if n.gram().congruence(images)? != *source.gram() {
        return Err(Error::GramMismatch);
    }
    let closure = primitive_closure(&n, &images.columns())?;
    if closure.index != 1.into() {
        let index = u64::try_from(&closure.index).unwrap_or(u64::MAX);
        return Err(Error::NotPrimitive { index });
    }
    Ok(PrimitiveEmbedding { source: source.clone(), images: images.clone() })
}

/// The character `ε ∘ i` on the source lattice.
pub fn pullback_epsilon(emb: &PrimitiveEmbedding) -> Character {
    Character {
        values: emb.images.columns().iter().map(|c| epsilon(c).expect("column of length 12")).collect(),
    }
}

/// The orthogonal complement of the image in `N`, as a lattice.
pub fn complement_in_n(emb: &PrimitiveEmbedding) -> Result<Lattice> {
    let c = orthogonal_complement(&enriques_lattice(), &emb.images.columns())?;
    if c.module.radical_rank > 0 {
        return Err(Error::DegenerateComplement);
    }
    c.module.into_lattice().map_err(|_| Error::DegenerateComplement)
}

/// A subgroup of `Hom(T, Z/2)` with a row-reduced basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterSubgroup {
    pub rank: usize,
    pub basis: Vec<Character>,
}

impl CharacterSubgroup {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn order(&self) -> u64 {
        1 << self.basis.len()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.rank
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, chi: &Character) -> bool {
        if chi.source_rank() != self.rank {
            return false;
        }
        let masks: Vec<u32> = self.basis.iter().map(Character::mask).collect();
        let mut x = chi.mask();
        for m in reduce_basis(masks) {
            let top = 31 - m.leading_zeros();
            if x >> top & 1 == 1 {
                x ^= m;
            }
        }
        x == 0
    }

    /// All elements, sorted.
    pub fn elements(&self) -> Vec<Character> {
        let masks: Vec<u32> = self.basis.iter().map(Character::mask).collect();
        let mut out: Vec<Character> = (0u32..1 << masks.len())
            .map(|sel| {
                let m = masks.iter().enumerate().filter(|(i, _)| sel >> i & 1 == 1).fold(0, |a, (_, &m)| a ^ m);
                Character::from_mask(m, self.rank)
            })
            .collect();
        out.sort();
        out
    }
}

/// Echelon basis over `F₂` with distinct leading bits, highest first.
fn reduce_basis(vectors: Vec<u32>) -> Vec<u32> {
    let mut basis: Vec<u32> = Vec::new();
    for mut v in vectors {
        for &b in &basis {
            let top = 31 - b.leading_zeros();
            if v >> top & 1 == 1 {
                v ^= b;
            }
        }
        if v != 0 {
            let top = 31 - v.leading_zeros();
            for b in basis.iter_mut() {
                if *b >> top & 1 == 1 {
                    *b ^= v;
                }
            }
            basis.push(v);
            basis.sort_by(|a, b| b.cmp(a));
        }
    }
    basis
}

/// Largest rank accepted by [`im_phi_upper_bound`].
pub const MAX_CLASS_RANK: usize = 20;

/// Characters vanishing on every class of `T/2T` whose norm is `2 mod 4`.
pub fn im_phi_upper_bound(t: &Lattice) -> Result<CharacterSubgroup> {
    let r = t.rank();
    if r > MAX_CLASS_RANK {
        return Err(Error::RankTooLarge(r));
    }
    if !t.is_even() {
        return Err(Error::NotEven);
    }
    let g = t.gram();
    // Gray-code walk over T/2T keeping v² and G·v mod 4.
    let mut v = 0u32;
    let mut gv = vec![0i64; r];
    let mut norm = 0i64;
    let mut bad: Vec<u32> = Vec::new();
    for step in 1u32..(1u32 << r) {
        let i = step.trailing_zeros() as usize;
        let s = if v >> i & 1 == 1 { -1 } else { 1 };
        norm = (norm + 2 * s * gv[i] + g[(i, i)]).rem_euclid(4);
        for (j, x) in gv.iter_mut().enumerate() {
            *x = (*x + s * g[(j, i)]).rem_euclid(4);
        }
        v ^= 1 << i;
        if norm == 2 {
            bad.push(v);
        }
    }
    let span = reduce_basis(bad);
    // Annihilator of the span under the dot product mod 2.
    let pivots: Vec<u32> = span.iter().map(|b| 31 - b.leading_zeros()).collect();
    let mut basis = Vec::new();
    for free in (0..r as u32).filter(|c| !pivots.contains(c)) {
        let mut a = 1u32 << free;
        for (b, &p) in span.iter().zip(&pivots) {
            if (b >> free) & 1 == 1 {
                a |= 1 << p;
            }
        }
        basis.push(a);
    }
    let basis = reduce_basis(basis).into_iter().map(|m| Character::from_mask(m, r)).collect();
    Ok(CharacterSubgroup { rank: r, basis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard::{is_twice_even, standard_gram, StandardTag, E, F, H, K};

    fn nvec(terms: &[(usize, i64)]) -> Vec<i64> {
        let mut v = vec![0; N_RANK];
        for &(i, c) in terms {
            v[i] += c;
        }
        v
    }

    fn diag44() -> Lattice {
        Lattice::from_rows(&[vec![4, 0], vec![0, 4]]).unwrap()
    }

    #[test]
    fn validation_examples() {
        let t = diag44();
        let good = IntMatrix::from_columns(12, &[nvec(&[(E, 1), (F, 2)]), nvec(&[(H, 1), (K, 1)])]).unwrap();
        let emb = embedding_from_images(&t, &good).unwrap();
        assert_eq!(pullback_epsilon(&emb), Character::new(vec![1, 0]));
        let c = complement_in_n(&emb).unwrap();
        assert_eq!(c.rank(), 10);
        assert_eq!(c.signature(), (0, 10));
        assert!(is_twice_even(&c));

        let doubled = IntMatrix::from_columns(12, &[nvec(&[(E, 2), (F, 4)]), nvec(&[(H, 1), (K, 1)])]).unwrap();
        assert_eq!(embedding_from_images(&Lattice::from_rows(&[vec![16, 0], vec![0, 4]]).unwrap(), &doubled), Err(Error::NotPrimitive { index: 2 }));
        let wrong = IntMatrix::from_columns(12, &[nvec(&[(E, 1), (F, 1)]), nvec(&[(H, 1), (K, 1)])]).unwrap();
        assert_eq!(embedding_from_images(&t, &wrong), Err(Error::GramMismatch));

        let swapped = IntMatrix::from_columns(12, &[nvec(&[(H, 1), (K, 1)]), nvec(&[(E, 1), (F, 2)])]).unwrap();
        assert_eq!(pullback_epsilon(&embedding_from_images(&t, &swapped).unwrap()), Character::new(vec![0, 1]));
        let third = IntMatrix::from_columns(12, &[nvec(&[(E, 1), (F, 2)]), nvec(&[(E, 1), (F, -2), (H, 1), (K, 2)])]).unwrap();
        assert_eq!(pullback_epsilon(&embedding_from_images(&t, &third).unwrap()), Character::new(vec![1, 1]));
    }

    #[test]
    fn complement_of_u_is_m() {
        let u = standard_lattice_u();
        let imgs = IntMatrix::from_columns(12, &[nvec(&[(E, 1)]), nvec(&[(F, 1)])]).unwrap();
        let emb = embedding_from_images(&u, &imgs).unwrap();
        let c = complement_in_n(&emb).unwrap();
        let m = Lattice::from_gram(standard_gram(StandardTag::M)).unwrap();
        assert_eq!(c.rank(), 10);
        assert!(c.discriminant_form().unwrap().is_isomorphic(&m.discriminant_form().unwrap()).unwrap());
        assert_eq!(c.signature(), m.signature());
    }

    fn standard_lattice_u() -> Lattice {
        Lattice::from_gram(standard_gram(StandardTag::U)).unwrap()
    }

    #[test]
    fn im_phi_examples() {
        let b = im_phi_upper_bound(&Lattice::from_rows(&[vec![2, 0], vec![0, 6]]).unwrap()).unwrap();
        assert!(b.is_trivial());
        let b = im_phi_upper_bound(&diag44()).unwrap();
        assert!(b.is_full());
        assert_eq!(b.elements().len(), 4);
        let b = im_phi_upper_bound(&Lattice::from_rows(&[vec![0, 2], vec![2, 0]]).unwrap()).unwrap();
        assert!(b.is_full());
        // U: only the class (1,1) has norm 2 mod 4
        let b = im_phi_upper_bound(&standard_lattice_u()).unwrap();
        assert_eq!(b.elements(), vec![Character::new(vec![0, 0]), Character::new(vec![1, 1])]);
        assert!(b.contains(&Character::new(vec![1, 1])));
        assert!(!b.contains(&Character::new(vec![0, 1])));
        // an orthogonal summand ⟨2⟩ kills everything
        assert!(im_phi_upper_bound(&Lattice::from_rows(&[vec![2, 0], vec![0, 4]]).unwrap()).unwrap().is_trivial());
        // A2(2)-like: [[2,1],[1,2]] has all nonzero classes of norm 2 mod 4
        let b = im_phi_upper_bound(&Lattice::from_rows(&[vec![2, 1], vec![1, 2]]).unwrap()).unwrap();
        assert!(b.is_trivial());
    }

    #[test]
    fn im_phi_agrees_with_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let r = rng.gen_range(1..=4);
            let mut g = IntMatrix::zeros(r, r);
            for i in 0..r {
                g[(i, i)] = 2 * rng.gen_range(-5..=5);
                for j in 0..i {
                    let x = rng.gen_range(-6..=6);
                    g[(i, j)] = x;
                    g[(j, i)] = x;
                }
            }
            let Ok(t) = Lattice::from_gram(g.clone()) else { continue };
            let bound = im_phi_upper_bound(&t).unwrap();
            for chi in 0u32..1 << r {
                let chi = Character::from_mask(chi, r);
                let ok = (1u32..1 << r).all(|v| {
                    let x: Vec<i64> = (0..r).map(|i| (v >> i & 1) as i64).collect();
                    g.bilinear(&x, &x).rem_euclid(4) != 2 || chi.eval(&x) == 0
                });
                assert_eq!(bound.contains(&chi), ok);
            }
        }
    }
}
