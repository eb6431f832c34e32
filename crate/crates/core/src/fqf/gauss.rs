//! Milgram signature of a finite quadratic form from exact Gauss sums.
//!
//! `Σ_{x∈A} exp(πi q(x)) = √|A| · exp(2πi s / 8)`. The sum factors over the
//! primary parts, so each `A_p` is summed separately in `Z[ζ_m]` with `m` a
//! power of `p` (or of 2, at least 8), and compared against the eight
//! candidate values.

use super::FiniteQuadraticForm;
use crate::error::{Error, Result};

/// Default bound on `|A_p|` for direct summation.
pub const DEFAULT_BOUND: u64 = 1 << 20;

impl FiniteQuadraticForm {
    /// Signature mod 8 via Gauss sums, with the default size bound.
    pub fn milgram_signature(&self) -> Result<u8> {
        self.milgram_signature_bounded(DEFAULT_BOUND)
    }

    pub fn milgram_signature_bounded(&self, bound: u64) -> Result<u8> {
        let mut s = 0u8;
        for p in self.primes() {
            let part = self.p_part(p);
            part.checked_order(bound)?;
            s = (s + part.primary_signature(p)?) % 8;
        }
        Ok(s)
    }

    /// Signature of a `p`-primary form.
    fn primary_signature(&self, p: u64) -> Result<u8> {
        let order = self.order();
        let n = order.trailing_zeros_base(p);
        let elements = (0..order as usize).map(|i| self.element_at(i));
        if p == 2 {
            let exp = self.exponent();
            let m = (2 * exp).max(8) as usize;
            let mut sum = vec![0i64; m];
            let step = m / (2 * exp as usize);
            for x in elements {
                sum[self.q_num(&x) as usize * step] += 1;
            }
            let z8 = m / 8;
            for s in 0..8u8 {
                let mut cand = vec![0i64; m];
                let base = 1i64 << (n / 2);
                if n.is_multiple_of(2) {
                    cand[(s as usize * z8) % m] += base;
                } else {
                    cand[((s as usize + 1) * z8) % m] += base;
                    cand[((s as usize + 7) * z8) % m] += base;
                }
                let diff: Vec<i64> = sum.iter().zip(&cand).map(|(a, b)| a - b).collect();
                if is_zero_two_power(&diff) {
                    return Ok(s);
                }
            }
            Err(Error::NonWitt)
        } else {
            let m = self.exponent() as usize;
            let mut sum = vec![0i64; m];
            for x in elements {
                let c = self.q_num(&x);
                if c % 2 != 0 {
                    return Err(Error::InvalidForm("odd numerator on an odd primary part".into()));
                }
                sum[(c / 2) as usize % m] += 1;
            }
            let base = (p as i64).pow(n / 2);
            let delta: u8 = if p % 4 == 3 { 1 } else { 0 };
            let candidates: Vec<(u8, Vec<i64>)> = if n.is_multiple_of(2) {
                [(0u8, 1i64), (4u8, -1i64)]
                    .iter()
                    .map(|&(s, sign)| {
                        let mut c = vec![0i64; m];
                        c[0] = sign * base;
                        (s, c)
                    })
                    .collect()
            } else {
                // p^((n-1)/2) · Σ_t ζ_p^{t²}
                let zp = m / p as usize;
                let mut g = vec![0i64; m];
                for t in 0..p {
                    g[((t * t) % p) as usize * zp] += base;
                }
                let neg: Vec<i64> = g.iter().map(|x| -x).collect();
                vec![(2 * delta, g), (2 * delta + 4, neg)]
            };
            for (s, cand) in candidates {
                let diff: Vec<i64> = sum.iter().zip(&cand).map(|(a, b)| a - b).collect();
                if is_zero_odd_power(&diff, p as usize) {
                    return Ok(s % 8);
                }
            }
            Err(Error::NonWitt)
        }
    }
}

trait Valuation {
    fn trailing_zeros_base(self, p: u64) -> u32;
}

impl Valuation for u64 {
    fn trailing_zeros_base(mut self, p: u64) -> u32 {
        let mut k = 0;
        while self > 1 && self.is_multiple_of(p) {
            self /= p;
            k += 1;
        }
        k
    }
}

/// `Σ aⱼ ζ^j = 0` in `Z[ζ_m]`, `m = p^k`: the coefficients are constant along
/// each class `r + t·m/p`.
fn is_zero_odd_power(a: &[i64], p: usize) -> bool {
    let m = a.len();
    if m == 1 {
        return a[0] == 0;
    }
    let step = m / p;
    (0..step).all(|r| (1..p).all(|t| a[r + t * step] == a[r]))
}

/// `Σ aⱼ ζ^j = 0` in `Z[ζ_m]`, `m = 2^k ≥ 2`: `ζ^{m/2} = -1`.
fn is_zero_two_power(a: &[i64]) -> bool {
    let h = a.len() / 2;
    (0..h).all(|j| a[j] == a[j + h])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;
    use num_rational::Ratio;
    use proptest::prelude::*;

    fn lat(rows: &[&[i64]]) -> Lattice {
        Lattice::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(FiniteQuadraticForm::trivial().milgram_signature().unwrap(), 0);
        let f = FiniteQuadraticForm::new(&[2], &[vec![Ratio::new(1, 2)]]).unwrap();
        assert_eq!(f.milgram_signature().unwrap(), 1);
        assert_eq!(lat(&[&[2]]).discriminant_form().unwrap().milgram_signature().unwrap(), 1);
        assert_eq!(lat(&[&[-2]]).discriminant_form().unwrap().milgram_signature().unwrap(), 7);
        let a2 = lat(&[&[-2, 1], &[1, -2]]);
        assert_eq!(a2.discriminant_form().unwrap().milgram_signature().unwrap(), 6);
        assert_eq!(lat(&[&[6]]).discriminant_form().unwrap().milgram_signature().unwrap(), 1);
        assert_eq!(lat(&[&[0, 2], &[2, 0]]).discriminant_form().unwrap().milgram_signature().unwrap(), 0);
    }

    #[test]
    fn degenerate_forms_are_rejected() {
        let f = FiniteQuadraticForm::new(&[2], &[vec![Ratio::new(0, 1)]]).unwrap();
        assert_eq!(f.milgram_signature(), Err(Error::NonWitt));
        let f = FiniteQuadraticForm::new(&[3], &[vec![Ratio::new(0, 1)]]).unwrap();
        assert_eq!(f.milgram_signature(), Err(Error::NonWitt));
    }

    #[test]
    fn bound_is_enforced() {
        let f = lat(&[&[2, 0], &[0, 2]]).discriminant_form().unwrap();
        assert!(matches!(f.milgram_signature_bounded(2), Err(Error::TooLarge { .. })));
    }

    fn even_gram(n: usize) -> impl Strategy<Value = crate::matrix::IntMatrix> {
        proptest::collection::vec(-5i64..=5, n * n).prop_map(move |v| {
            let mut m = crate::matrix::IntMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..=i {
                    let x = if i == j { 2 * v[i * n + j] } else { v[i * n + j] };
                    m[(i, j)] = x;
                    m[(j, i)] = x;
                }
            }
            m
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn signature_matches_lattice_signature(g in even_gram(3)) {
            if let Ok(l) = Lattice::from_gram(g) {
                let f = l.discriminant_form().unwrap();
                let (p, m) = l.signature();
                let expected = (p as i64 - m as i64).rem_euclid(8) as u8;
                prop_assert_eq!(f.milgram_signature().unwrap(), expected);
            }
        }

        #[test]
        fn signature_is_additive(g in even_gram(2), h in even_gram(2)) {
            if let (Ok(a), Ok(b)) = (Lattice::from_gram(g), Lattice::from_gram(h)) {
                let fa = a.discriminant_form().unwrap();
                let fb = b.discriminant_form().unwrap();
                let s = fa.direct_sum(&fb).milgram_signature().unwrap();
                prop_assert_eq!(s, (fa.milgram_signature().unwrap() + fb.milgram_signature().unwrap()) % 8);
            }
        }
    }
}
