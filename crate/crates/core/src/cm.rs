//! Imaginary quadratic orders: reduced binary forms, class numbers, the
//! splitting of 2, ray class groups of modulus 2 and the CM checks for a
//! rank-2 positive definite transcendental lattice.

use num_integer::{Integer, Roots};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// A binary quadratic form `a x² + b xy + c y²`.
pub type Form = (i64, i64, i64);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroupData {
    pub discriminant: i64,
    pub reduced_forms: Vec<Form>,
    pub class_number: usize,
    /// Reduced forms of order at most 2 (`b = 0`, `a = b` or `a = c`).
    pub ambiguous_count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TwoBehavior {
    Split,
    Inert,
    Ramified,
}

impl std::fmt::Display for TwoBehavior {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TwoBehavior::Split => "split",
            TwoBehavior::Inert => "inert",
            TwoBehavior::Ramified => "ramified",
        })
    }
}

fn check_congruence(disc: i64) -> Result<()> {
    if disc >= 0 {
        return Err(Error::NotImaginary(disc));
    }
    if !matches!(disc.rem_euclid(4), 0 | 1) {
        return Err(Error::BadCongruence(disc));
    }
    Ok(())
}

fn is_squarefree(mut n: i64) -> bool {
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

pub fn is_fundamental(disc: i64) -> bool {
    if disc >= 0 {
        return false;
    }
    let n = -disc;
    match disc.rem_euclid(4) {
        1 => is_squarefree(n),
        0 => {
            let m = disc / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(-m)
        }
        _ => false,
    }
}

fn is_reduced((a, b, c): Form) -> bool {
    b.abs() <= a && a <= c && !((b.abs() == a || a == c) && b < 0)
}

fn is_primitive((a, b, c): Form) -> bool {
    a.gcd(&b).gcd(&c) == 1
}

/// Primitive reduced forms of discriminant `disc`, scanning `a` then `b`.
pub fn reduced_forms(disc: i64) -> Result<Vec<Form>> {
    check_congruence(disc)?;
    let n = -disc;
    let mut out = Vec::new();
    let mut a = 1;
    while 3 * a * a <= n {
        for b in -a..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = (a, b, num / (4 * a));
            if is_reduced(f) && is_primitive(f) {
                out.push(f);
            }
        }
        a += 1;
    }
    Ok(out)
}

/// The same set as [`reduced_forms`], scanning `b` then the divisors `a` of
/// `(b² − disc)/4`.
pub fn reduced_forms_by_b(disc: i64) -> Result<Vec<Form>> {
    check_congruence(disc)?;
    let n = -disc;
    let bmax = (n / 3).sqrt() + 1;
    let mut out = Vec::new();
    for b in -bmax..=bmax {
        if (b * b - disc) % 4 != 0 {
            continue;
        }
        let ac = (b * b - disc) / 4;
        let mut a = b.abs().max(1);
        while a * a <= ac {
            if ac % a == 0 {
                let f = (a, b, ac / a);
                if is_reduced(f) && is_primitive(f) {
                    out.push(f);
                }
            }
            a += 1;
        }
    }
    out.sort();
    Ok(out)
}

pub fn class_number(disc: i64) -> Result<usize> {
    Ok(reduced_forms(disc)?.len())
}

pub fn class_group(disc: i64) -> Result<ClassGroupData> {
    check_congruence(disc)?;
    if !is_fundamental(disc) {
        return Err(Error::NotFundamental(disc));
    }
    let reduced_forms = reduced_forms(disc)?;
    let ambiguous_count = reduced_forms.iter().filter(|&&(a, b, c)| b == 0 || a == b || a == c).count();
    Ok(ClassGroupData { discriminant: disc, class_number: reduced_forms.len(), reduced_forms, ambiguous_count })
}

/// `disc = f²·D` with `D` fundamental.
pub fn fundamental_split(disc: i64) -> Result<(i64, i64)> {
    check_congruence(disc)?;
    let mut f = 1;
    let mut d = disc;
    let mut p = 2;
    while p * p <= -d {
        while d % (p * p) == 0 && matches!((d / (p * p)).rem_euclid(4), 0 | 1) {
            d /= p * p;
            f *= p;
        }
        p += 1;
    }
    debug_assert!(is_fundamental(d));
    Ok((f, d))
}

pub fn prime2_splitting(d: i64) -> Result<TwoBehavior> {
    check_congruence(d)?;
    if !is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    Ok(match d.rem_euclid(8) {
        5 => TwoBehavior::Inert,
        1 => TwoBehavior::Split,
        _ => TwoBehavior::Ramified,
    })
}

/// `|Cl₂(E)| = h·|(O_E/2)^×| / |image of O_E^×|`.
pub fn ray_class2_order(d: i64) -> Result<usize> {
    let h = class_group(d)?.class_number;
    let residue_units = match prime2_splitting(d)? {
        TwoBehavior::Inert => 3,
        TwoBehavior::Split => 1,
        TwoBehavior::Ramified => 2,
    };
    // ±1 reduce to 1 mod 2; a primitive cube root of unity generates F₄^×,
    // and i is the non-trivial unit of Z[i]/2
    let unit_image = match d {
        -3 => 3,
        -4 => 2,
        _ => 1,
    };
    Ok(h * residue_units / unit_image)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCReport {
    pub gram: [[i64; 2]; 2],
    pub coefficients: Form,
    /// `d` with `−d = b² − 4ac`.
    pub d: i64,
    pub conductor: i64,
    pub fundamental: i64,
    pub end_is_maximal: bool,
    pub two_behavior: TwoBehavior,
    pub applies: bool,
    pub index_k2_k1: Option<usize>,
    pub notes: Vec<String>,
}

/// The CM checks for `T = [[2a, b], [b, 2c]]`: maximal endomorphism order
/// iff `f = gcd(a, b, c)`, 2 inert, and `E ≠ Q(√−3)`.
pub fn theorem_c_report(gram: &IntMatrix) -> Result<TheoremCReport> {
    if gram.rows() != 2 || gram.cols() != 2 || gram[(0, 1)] != gram[(1, 0)] || gram[(0, 0)] % 2 != 0 || gram[(1, 1)] % 2 != 0 {
        return Err(Error::NotEvenGram);
    }
    let (a, b, c) = (gram[(0, 0)] / 2, gram[(0, 1)], gram[(1, 1)] / 2);
    let disc = b * b - 4 * a * c;
    if a <= 0 || disc >= 0 {
        return Err(Error::NotPositiveDefinite);
    }
    let (f, fundamental) = fundamental_split(disc)?;
    let end_is_maximal = f == a.gcd(&b).gcd(&c);
    let two_behavior = prime2_splitting(fundamental)?;
    let mut notes = Vec::new();
    if !end_is_maximal {
        notes.push(format!("End(T) is not maximal: f = {f} but gcd(a,b,c) = {}", a.gcd(&b).gcd(&c)));
    }
    if two_behavior != TwoBehavior::Inert {
        notes.push(format!("2 is {two_behavior} in E"));
    }
    if two_behavior == TwoBehavior::Split {
        notes.push("Galois action on Br(X)[2] trivial".into());
    }
    if fundamental == -3 {
        notes.push("E = Q(sqrt(-3)) excluded".into());
    }
    if f % 2 == 1 {
        notes.push("f odd: Enr(X) is empty".into());
    }
    let applies = end_is_maximal && two_behavior == TwoBehavior::Inert && fundamental != -3;
    let index_k2_k1 = if applies {
        Some(ray_class2_order(fundamental)? / class_group(fundamental)?.class_number)
    } else {
        None
    };
    Ok(TheoremCReport {
        gram: [[gram[(0, 0)], b], [b, gram[(1, 1)]]],
        coefficients: (a, b, c),
        d: -disc,
        conductor: f,
        fundamental,
        end_is_maximal,
        two_behavior,
        applies,
        index_k2_k1,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fundamentals(lo: i64) -> impl Iterator<Item = i64> {
        (lo..0).filter(|&d| is_fundamental(d))
    }

    /// Number of odd primes dividing `D`, plus one if `D` is even.
    fn prime_discriminant_divisors(d: i64) -> u32 {
        let mut n = -d;
        let mut t = 0;
        if n % 2 == 0 {
            t += 1;
            while n % 2 == 0 {
                n /= 2;
            }
        }
        let mut p = 3;
        while n > 1 {
            if n % p == 0 {
                t += 1;
                while n % p == 0 {
                    n /= p;
                }
            }
            p += 2;
        }
        t
    }

    #[test]
    fn class_group_examples() {
        let g = class_group(-19).unwrap();
        assert_eq!((g.class_number, g.reduced_forms.clone()), (1, vec![(1, 1, 5)]));
        let g = class_group(-23).unwrap();
        assert_eq!(g.class_number, 3);
        let mut forms = g.reduced_forms.clone();
        forms.sort();
        assert_eq!(forms, vec![(1, 1, 6), (2, -1, 3), (2, 1, 3)]);
        let g = class_group(-15).unwrap();
        assert_eq!((g.class_number, g.ambiguous_count), (2, 2));
        assert_eq!(class_group(-12), Err(Error::NotFundamental(-12)));
        assert_eq!(class_group(5), Err(Error::NotImaginary(5)));
        assert_eq!(class_group(-6), Err(Error::BadCongruence(-6)));
    }

    #[test]
    fn split_examples() {
        assert_eq!(fundamental_split(-75).unwrap(), (5, -3));
        assert_eq!(fundamental_split(-19).unwrap(), (1, -19));
        assert_eq!(fundamental_split(-304).unwrap(), (4, -19));
        assert_eq!(fundamental_split(-16).unwrap(), (2, -4));
        assert_eq!(fundamental_split(-5), Err(Error::BadCongruence(-5)));
        for disc in (-2000i64..0).filter(|d| matches!(d.rem_euclid(4), 0 | 1)) {
            let (f, d) = fundamental_split(disc).unwrap();
            assert!(is_fundamental(d));
            assert_eq!(f * f * d, disc);
        }
    }

    #[test]
    fn splitting_of_two() {
        assert_eq!(prime2_splitting(-19).unwrap(), TwoBehavior::Inert);
        assert_eq!(prime2_splitting(-7).unwrap(), TwoBehavior::Split);
        assert_eq!(prime2_splitting(-4).unwrap(), TwoBehavior::Ramified);
    }

    #[test]
    fn reduced_form_scans_agree() {
        for d in fundamentals(-400) {
            let mut a = reduced_forms(d).unwrap();
            a.sort();
            assert_eq!(a, reduced_forms_by_b(d).unwrap(), "D = {d}");
        }
    }

    #[test]
    fn genus_theory() {
        for d in fundamentals(-400) {
            let g = class_group(d).unwrap();
            assert_eq!(g.ambiguous_count, 1 << (prime_discriminant_divisors(d) - 1), "D = {d}");
        }
    }

    /// `Cl₂(E)` is the class group of the order of conductor 2, counted by
    /// primitive reduced forms of discriminant `4D`.
    #[test]
    fn ray_class_orders_match_conductor_two_orders() {
        assert_eq!(ray_class2_order(-19).unwrap(), 3);
        assert_eq!(ray_class2_order(-23).unwrap(), 3);
        assert_eq!(ray_class2_order(-7).unwrap(), 1);
        for d in fundamentals(-400) {
            assert_eq!(ray_class2_order(d).unwrap(), reduced_forms_by_b(4 * d).unwrap().len(), "D = {d}");
        }
        for d in fundamentals(-400).filter(|d| d.rem_euclid(8) == 5 && *d < -4) {
            assert_eq!(ray_class2_order(d).unwrap(), 3 * class_number(d).unwrap());
        }
    }

    #[test]
    fn report_examples() {
        let r = theorem_c_report(&IntMatrix::from_rows(&[vec![2, 1], vec![1, 2]]).unwrap()).unwrap();
        assert_eq!(r.fundamental, -3);
        assert!(!r.applies);
        assert!(r.notes.iter().any(|n| n.contains("sqrt(-3)")));
        let r = theorem_c_report(&IntMatrix::from_rows(&[vec![2, 1], vec![1, 10]]).unwrap()).unwrap();
        assert_eq!((r.coefficients, r.d, r.conductor, r.fundamental), ((1, 1, 5), 19, 1, -19));
        assert!(r.applies && r.end_is_maximal);
        assert_eq!(r.two_behavior, TwoBehavior::Inert);
        assert_eq!(r.index_k2_k1, Some(3));
        assert!(r.notes.iter().any(|n| n.contains("Enr(X) is empty")));
        let r = theorem_c_report(&IntMatrix::diagonal(&[4, 4])).unwrap();
        assert_eq!((r.conductor, r.fundamental), (2, -4));
        assert!(r.end_is_maximal);
        assert_eq!(r.two_behavior, TwoBehavior::Ramified);
        assert!(!r.applies);
        assert_eq!(r.index_k2_k1, None);
        assert_eq!(theorem_c_report(&IntMatrix::diagonal(&[3, 4])), Err(Error::NotEvenGram));
        assert_eq!(theorem_c_report(&IntMatrix::diagonal(&[-2, 4])), Err(Error::NotPositiveDefinite));
    }

    #[test]
    fn applies_implies_index_three() {
        for a in 1..8 {
            for b in -8..=8 {
                for c in a..12 {
                    let g = IntMatrix::from_rows(&[vec![2 * a, b], vec![b, 2 * c]]).unwrap();
                    if let Ok(r) = theorem_c_report(&g) {
                        assert_eq!(r.applies, r.index_k2_k1 == Some(3));
                    }
                }
            }
        }
    }
}
