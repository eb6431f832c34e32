//! Local invariants of primary forms: orthogonal splittings into cyclic (and,
//! at 2, rank-two) blocks and the discriminant of the associated `p`-adic
//! lattice modulo unit squares.

use serde::{Deserialize, Serialize};

use super::{Element, FiniteQuadraticForm, DEFAULT_BOUND};
use crate::error::{Error, Result};

/// A cyclic block `Z/p^k` whose `p`-adic lattice is `⟨p^k · unit⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JordanBlock {
    /// `p^k`.
    pub order: i64,
    /// 1 for a square unit, otherwise the smallest non-residue mod `p`.
    pub unit: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OddJordan {
    pub p: u64,
    pub blocks: Vec<JordanBlock>,
    /// `p^{Σk} · unit`, the discriminant of `K(q_p)` modulo unit squares.
    pub discr: i64,
    /// Unit-square class of the discriminant (1 or the smallest non-residue).
    pub unit: i64,
}

/// Discriminant of `K(q_2)`: `2^exponent · unit` with `unit ∈ {1,3,5,7}`
/// determined mod 8.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoAdicDiscriminant {
    pub exponent: u32,
    pub unit: i64,
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Legendre symbol `(a / p)` for an odd prime `p`, as `1`, `-1` or `0`.
pub fn legendre(a: i64, p: u64) -> i32 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

pub fn smallest_non_residue(p: u64) -> i64 {
    (2..p as i64).find(|&a| legendre(a, p) == -1).expect("odd prime has a non-residue")
}

fn valuation(mut n: i64, p: i64) -> u32 {
    let mut k = 0;
    while n != 0 && n % p == 0 {
        n /= p;
        k += 1;
    }
    k
}

/// `q(x)` of an element of order `p^k` written as `a / p^k` with `a` taken
/// mod `p^k` (odd `p`) or mod `2^{k+1}` (`p = 2`); the numerator is returned.
fn scaled_q(f: &FiniteQuadraticForm, x: &[i64], pk: i64) -> i64 {
    let c = f.q_num(x);
    let shift = f.exponent() / pk;
    debug_assert_eq!(c % shift, 0);
    c / shift
}

fn scaled_b(f: &FiniteQuadraticForm, x: &[i64], y: &[i64], pk: i64) -> i64 {
    let c = f.b_num(x, y);
    c / (f.exponent() / pk)
}

fn restrict_perp(f: &FiniteQuadraticForm, rest: &[Element], block: &[&Element]) -> Vec<Element> {
    let ws: Vec<Vec<i64>> = block.iter().map(|x| f.pairing_vector(x)).collect();
    rest.iter().filter(|r| ws.iter().all(|w| f.b_num_with(r, w) == 0)).cloned().collect()
}

impl FiniteQuadraticForm {
    /// True iff some element of order 2 has `q ≡ ±1/2 mod 2`, i.e. the form
    /// has an orthogonal summand `q_θ(2)`.
    pub fn splits_unit_block(&self) -> Result<bool> {
        if self.primes().iter().any(|&p| p != 2) {
            return Err(Error::NotTwoGroup);
        }
        // A[2] is spanned by (dᵢ/2)·gᵢ.
        let halves: Vec<Element> = (0..self.ngens())
            .map(|i| {
                let mut x = self.zero();
                x[i] = self.orders()[i] / 2;
                x
            })
            .collect();
        let n = halves.len();
        if n > 24 {
            return Err(Error::TooLarge { order: 1 << n.min(63), bound: 1 << 24 });
        }
        let e = self.exponent();
        for mask in 1u32..(1u32 << n) {
            let mut x = self.zero();
            for (i, h) in halves.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    x = self.add(&x, h);
                }
            }
            let c = self.q_num(&x);
            if c == e / 2 || c == 3 * e / 2 {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Greedy orthogonal splitting of the `p`-part into cyclic blocks.
    pub fn odd_jordan(&self, p: u64) -> Result<OddJordan> {
        if p == 2 || !super::is_prime(p) {
            return Err(Error::Unsupported(format!("odd_jordan needs an odd prime, got {p}")));
        }
        let part = self.p_part(p);
        let mut rest = part.elements(DEFAULT_BOUND)?;
        let pi = p as i64;
        let nonres = smallest_non_residue(p);
        let mut blocks = Vec::new();
        loop {
            let Some(pk) = rest.iter().map(|x| part.element_order(x)).max().filter(|&o| o > 1) else { break };
            let tops: Vec<&Element> = rest.iter().filter(|x| part.element_order(x) == pk).collect();
            let unit_q = |x: &Element| scaled_q(&part, x, pk).rem_euclid(pk) % pi != 0;
            let x: Element = match tops.iter().find(|x| unit_q(x)) {
                Some(x) => (*x).clone(),
                None => {
                    let mut found = None;
                    'outer: for (i, a) in tops.iter().enumerate() {
                        for b in &tops[i + 1..] {
                            if scaled_b(&part, a, b, pk) % pi != 0 {
                                found = Some(part.add(a, b));
                                break 'outer;
                            }
                        }
                    }
                    found.ok_or_else(|| Error::InvalidForm(format!("degenerate {p}-part")))?
                }
            };
            let a = scaled_q(&part, &x, pk).rem_euclid(pk);
            let unit = if legendre(a, p) == 1 { 1 } else { nonres };
            blocks.push(JordanBlock { order: pk, unit });
            rest = restrict_perp(&part, &rest, &[&x]);
        }
        let nonsquares = blocks.iter().filter(|b| b.unit != 1).count();
        let unit = if nonsquares % 2 == 0 { 1 } else { nonres };
        let power: i64 = blocks.iter().map(|b| b.order).product();
        Ok(OddJordan { p, blocks, discr: power * unit, unit })
    }

    /// Discriminant of `K(q_2)` for a 2-part with no `q_θ(2)` summand, by
    /// splitting off rank-1 blocks `⟨2^k θ⟩` (`k ≥ 2`) and rank-2 blocks
    /// `2^k·[[2α,1],[1,2γ]]`.
    pub fn two_adic_discriminant(&self) -> Result<TwoAdicDiscriminant> {
        let part = self.p_part(2);
        let mut rest = part.elements(DEFAULT_BOUND)?;
        let mut exponent = 0u32;
        let mut unit = 1i64;
        loop {
            let Some(pk) = rest.iter().map(|x| part.element_order(x)).max().filter(|&o| o > 1) else { break };
            let k = valuation(pk, 2);
            let tops: Vec<&Element> = rest.iter().filter(|x| part.element_order(x) == pk).collect();
            if let Some(x) = tops.iter().find(|x| scaled_q(&part, x, pk) % 2 != 0) {
                if k < 2 {
                    return Err(Error::Unsupported("2-part has a q_θ(2) summand".into()));
                }
                let theta = scaled_q(&part, x, pk).rem_euclid(8);
                unit = (unit * theta).rem_euclid(8);
                exponent += k;
                let x = (*x).clone();
                rest = restrict_perp(&part, &rest, &[&x]);
                continue;
            }
            let mut pair = None;
            'outer: for (i, a) in tops.iter().enumerate() {
                for b in &tops[i + 1..] {
                    if scaled_b(&part, a, b, pk) % 2 != 0 {
                        pair = Some(((*a).clone(), (*b).clone()));
                        break 'outer;
                    }
                }
            }
            let Some((x, y)) = pair else {
                return Err(Error::Unsupported("greedy 2-adic splitting stalled".into()));
            };
            let alpha = scaled_q(&part, &x, pk) / 2;
            let gamma = scaled_q(&part, &y, pk) / 2;
            let block_unit = if (alpha * gamma).rem_euclid(2) == 0 { 7 } else { 3 };
            unit = (unit * block_unit).rem_euclid(8);
            exponent += 2 * k;
            rest = restrict_perp(&part, &rest, &[&x, &y]);
        }
        Ok(TwoAdicDiscriminant { exponent, unit })
    }
}
