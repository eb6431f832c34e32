//! Isometries between finite quadratic forms by backtracking over generator
//! images.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{Element, FiniteQuadraticForm};
use crate::error::{Error, Result};

/// Default limit on search nodes before giving up with `TooLarge`.
pub const DEFAULT_NODE_CAP: u64 = 2_000_000;

/// Bound on group size for the isomorphism search.
const SEARCH_BOUND: u64 = 1 << 18;

/// A group isomorphism `source → target` preserving `q`, given by the images
/// of the source generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormIsometry {
    pub images: Vec<Element>,
}

impl FormIsometry {
    pub fn apply(&self, source: &FiniteQuadraticForm, target: &FiniteQuadraticForm, x: &[i64]) -> Element {
        let mut y = target.zero();
        for (i, &c) in x.iter().enumerate() {
            if c.rem_euclid(source.orders()[i]) != 0 {
                y = target.add(&y, &target.scale(c, &self.images[i]));
            }
        }
        y
    }

    /// Checks that the images define a bijective homomorphism that
    /// preserves `q`.
    pub fn verify(&self, source: &FiniteQuadraticForm, target: &FiniteQuadraticForm) -> bool {
        if self.images.len() != source.ngens() || source.order() != target.order() {
            return false;
        }
        if self.images.iter().any(|y| y.len() != target.ngens()) {
            return false;
        }
        let den = source.exponent().lcm(&target.exponent());
        for (i, y) in self.images.iter().enumerate() {
            if !target.is_zero_element(&target.scale(source.orders()[i], y)) {
                return false;
            }
            let gi = source.generator(i);
            if source.q_over(&gi, den) != target.q_over(y, den) {
                return false;
            }
            let wi = source.pairing_vector(&gi);
            let wy = target.pairing_vector(y);
            for (j, z) in self.images[..i].iter().enumerate() {
                let gj = source.generator(j);
                if source.b_over_with(&gj, &wi, den) != target.b_over_with(z, &wy, den) {
                    return false;
                }
            }
        }
        target.span(&self.images).order() == target.order()
    }

    pub fn identity(f: &FiniteQuadraticForm) -> Self {
        FormIsometry { images: (0..f.ngens()).map(|i| f.generator(i)).collect() }
    }

    /// Composition `other ∘ self`.
    pub fn then(&self, mid: &FiniteQuadraticForm, last: &FiniteQuadraticForm, other: &FormIsometry) -> Self {
        FormIsometry { images: self.images.iter().map(|y| other.apply(mid, last, y)).collect() }
    }

    /// Inverse map, computed by enumerating the source.
    pub fn inverse(&self, source: &FiniteQuadraticForm, target: &FiniteQuadraticForm) -> Result<FormIsometry> {
        let mut table = BTreeMap::new();
        for x in source.elements(SEARCH_BOUND)? {
            table.insert(self.apply(source, target, &x), x);
        }
        let images = (0..target.ngens())
            .map(|i| table.get(&target.generator(i)).cloned().ok_or_else(|| Error::InvalidForm("map is not bijective".into())))
            .collect::<Result<_>>()?;
        Ok(FormIsometry { images })
    }
}

struct Target<'a> {
    form: &'a FiniteQuadraticForm,
    elements: Vec<Element>,
    pairing: Vec<Vec<i64>>,
    buckets: BTreeMap<(i64, i64), Vec<usize>>,
}

impl FiniteQuadraticForm {
    /// Searches for an isometry `self → other`.
    pub fn find_isomorphism(&self, other: &FiniteQuadraticForm, node_cap: u64) -> Result<Option<FormIsometry>> {
        if self.order() != other.order() {
            return Ok(None);
        }
        if self.is_trivial() {
            return Ok(Some(FormIsometry { images: Vec::new() }));
        }
        let order = self.checked_order(SEARCH_BOUND)?;
        let den = self.exponent().lcm(&other.exponent());
        if self.invariant_factors() != other.invariant_factors() {
            return Ok(None);
        }

        let src_elems = self.elements(SEARCH_BOUND)?;
        let tgt_elems = other.elements(SEARCH_BOUND)?;
        let fp = |f: &FiniteQuadraticForm, xs: &[Element]| {
            let mut m: BTreeMap<(i64, i64), usize> = BTreeMap::new();
            for x in xs {
                *m.entry((f.element_order(x), f.q_over(x, den))).or_default() += 1;
            }
            m
        };
        if fp(self, &src_elems) != fp(other, &tgt_elems) {
            return Ok(None);
        }

        let mut buckets: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
        for (i, x) in tgt_elems.iter().enumerate() {
            buckets.entry((other.element_order(x), other.q_over(x, den))).or_default().push(i);
        }
        let pairing = tgt_elems.iter().map(|x| other.pairing_vector(x)).collect();
        let target = Target { form: other, elements: tgt_elems, pairing, buckets };

        // generators in descending order of their cyclic orders
        let mut gens: Vec<usize> = (0..self.ngens()).collect();
        gens.sort_by(|&a, &b| self.orders()[b].cmp(&self.orders()[a]).then(a.cmp(&b)));

        let mut state = Search {
            src: self,
            target: &target,
            den,
            gens,
            chosen: Vec::new(),
            member: vec![false; order as usize],
            members: vec![0],
            nodes: 0,
            cap: node_cap,
        };
        state.member[0] = true;
        if state.descend()? {
            let mut images = vec![Vec::new(); self.ngens()];
            for (pos, &g) in state.gens.iter().enumerate() {
                images[g] = target.elements[state.chosen[pos]].clone();
            }
            let iso = FormIsometry { images };
            debug_assert!(iso.verify(self, other));
            Ok(Some(iso))
        } else {
            Ok(None)
        }
    }

    pub fn is_isomorphic(&self, other: &FiniteQuadraticForm) -> Result<bool> {
        Ok(self.find_isomorphism(other, DEFAULT_NODE_CAP)?.is_some())
    }
}

struct Search<'a> {
    src: &'a FiniteQuadraticForm,
    target: &'a Target<'a>,
    den: i64,
    gens: Vec<usize>,
    chosen: Vec<usize>,
    member: Vec<bool>,
    members: Vec<usize>,
    nodes: u64,
    cap: u64,
}

impl Search<'_> {
    fn descend(&mut self) -> Result<bool> {
        let level = self.chosen.len();
        if level == self.gens.len() {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Error::TooLarge { order: self.src.order(), bound: self.cap });
        }
        let g = self.gens[level];
        let gx = self.src.generator(g);
        let d = self.src.orders()[g];
        let key = (d, self.src.q_over(&gx, self.den));
        let wg = self.src.pairing_vector(&gx);
        let want: Vec<i64> = self.gens[..level]
            .iter()
            .map(|&h| self.src.b_over_with(&self.src.generator(h), &wg, self.den))
            .collect();
        let Some(cands) = self.target.buckets.get(&key) else { return Ok(false) };
        let tf = self.target.form;
        for &c in cands {
            if self.member[c] {
                continue;
            }
            let y = &self.target.elements[c];
            let ok = self.chosen.iter().zip(&want).all(|(&prev, &w)| {
                tf.b_over_with(&self.target.elements[prev], &self.target.pairing[c], self.den) == w
            });
            if !ok {
                continue;
            }
            // ⟨y⟩ ∩ S = 0
            let mut multiples = Vec::with_capacity(d as usize);
            let mut cur = tf.zero();
            let mut clash = false;
            for t in 1..d {
                cur = tf.add(&cur, y);
                let idx = tf.index_of(&cur);
                if self.member[idx] {
                    clash = true;
                    break;
                }
                let _ = t;
                multiples.push(cur.clone());
            }
            if clash {
                continue;
            }
            let before = self.members.len();
            for s in 0..before {
                let sx = self.target.elements[self.members[s]].clone();
                for m in &multiples {
                    let idx = tf.index_of(&tf.add(&sx, m));
                    self.member[idx] = true;
                    self.members.push(idx);
                }
            }
            self.chosen.push(c);
            if self.descend()? {
                return Ok(true);
            }
            self.chosen.pop();
            for idx in self.members.drain(before..) {
                self.member[idx] = false;
            }
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;
    use num_rational::Ratio;

    fn lat(rows: &[&[i64]]) -> Lattice {
        Lattice::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn trivial_forms_are_isomorphic() {
        let t = FiniteQuadraticForm::trivial();
        assert_eq!(t.find_isomorphism(&t, 10).unwrap(), Some(FormIsometry { images: vec![] }));
    }

    #[test]
    fn u2_is_not_diag22() {
        let a = lat(&[&[0, 2], &[2, 0]]).discriminant_form().unwrap();
        let b = lat(&[&[2, 0], &[0, 2]]).discriminant_form().unwrap();
        assert_eq!(a.find_isomorphism(&b, DEFAULT_NODE_CAP).unwrap(), None);
    }

    #[test]
    fn isometries_verify_and_invert() {
        let a = lat(&[&[2, 1], &[1, -4]]).discriminant_form().unwrap();
        let b = lat(&[&[-4, 1], &[1, 2]]).discriminant_form().unwrap();
        let iso = a.find_isomorphism(&b, DEFAULT_NODE_CAP).unwrap().unwrap();
        assert!(iso.verify(&a, &b));
        let inv = iso.inverse(&a, &b).unwrap();
        assert!(inv.verify(&b, &a));
        let bad = FormIsometry { images: vec![b.zero(); a.ngens()] };
        assert!(!bad.verify(&a, &b));
    }

    #[test]
    fn non_invariant_factor_decompositions() {
        let a = FiniteQuadraticForm::new(&[2, 3], &[vec![Ratio::new(3, 2), Ratio::new(0, 1)], vec![Ratio::new(0, 1), Ratio::new(2, 3)]]).unwrap();
        let b = lat(&[&[6]]).discriminant_form().unwrap();
        assert!(a.is_isomorphic(&b).unwrap());
        assert!(b.is_isomorphic(&a).unwrap());
        assert!(!a.is_isomorphic(&lat(&[&[-6]]).discriminant_form().unwrap()).unwrap());
    }

    #[test]
    fn node_cap_is_reported() {
        let a = lat(&[&[0, 2], &[2, 0]]).discriminant_form().unwrap();
        let s = a.direct_sum(&a).direct_sum(&a);
        assert!(matches!(s.find_isomorphism(&s, 1), Err(Error::TooLarge { .. })));
    }
}
