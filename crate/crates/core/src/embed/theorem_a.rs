//! Explicit primitive embeddings of transcendental lattices of Kummer type
//! into `N`, one for each non-zero `ε`-label, for Picard ranks 20, 19, 18
//! and 17.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::enumerate::{e82_in_n, find_tuple_in_e82};
use super::{embedding_from_images, pullback_epsilon, Character, PrimitiveEmbedding};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::matrix::{inertia, IntMatrix};
use crate::standard::{E, F, H, K, N_RANK};

/// Parameters of the Gram matrix of `T` in the shape fixed for each rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rho")]
pub enum TheoremAParams {
    /// `[[4a,2b],[2b,4c]]`, positive definite.
    #[serde(rename = "20")]
    Rho20 { a: i64, b: i64, c: i64 },
    /// `[[4a,2d,2l],[2d,4b,2m],[2l,2m,4c]]`, signature (2,1), `a,b,c < 0`.
    #[serde(rename = "19")]
    Rho19 { a: i64, b: i64, c: i64, d: i64, l: i64, m: i64 },
    /// `[[4a,2b],[2b,4c]] ⊕ U(2)`, binary part of signature (1,1), `a,c < 0 < b`.
    #[serde(rename = "18")]
    Rho18 { a: i64, b: i64, c: i64 },
    /// `U(2) ⊕ U(2) ⊕ ⟨−4m⟩`, `m ≥ 1`.
    #[serde(rename = "17")]
    Rho17 { m: i64 },
}

impl TheoremAParams {
    /// Builds parameters from a flat list in the order `a,b,c` (20, 18),
    /// `a,b,c,d,l,m` (19) or `m` (17).
    pub fn from_values(rho: u8, v: &[i64]) -> Result<Self> {
        let need = match rho {
            20 | 18 => 3,
            19 => 6,
            17 => 1,
            _ => return Err(Error::BadParams(format!("rho must be one of 17, 18, 19, 20, got {rho}"))),
        };
        if v.len() != need {
            return Err(Error::BadParams(format!("rho = {rho} takes {need} parameters, got {}", v.len())));
        }
        let p = match rho {
            20 => TheoremAParams::Rho20 { a: v[0], b: v[1], c: v[2] },
            19 => TheoremAParams::Rho19 { a: v[0], b: v[1], c: v[2], d: v[3], l: v[4], m: v[5] },
            18 => TheoremAParams::Rho18 { a: v[0], b: v[1], c: v[2] },
            _ => TheoremAParams::Rho17 { m: v[0] },
        };
        p.validate()?;
        Ok(p)
    }

    pub fn values(&self) -> Vec<i64> {
        match *self {
            TheoremAParams::Rho20 { a, b, c } | TheoremAParams::Rho18 { a, b, c } => vec![a, b, c],
            TheoremAParams::Rho19 { a, b, c, d, l, m } => vec![a, b, c, d, l, m],
            TheoremAParams::Rho17 { m } => vec![m],
        }
    }

    pub fn rho(&self) -> u8 {
        match self {
            TheoremAParams::Rho20 { .. } => 20,
            TheoremAParams::Rho19 { .. } => 19,
            TheoremAParams::Rho18 { .. } => 18,
            TheoremAParams::Rho17 { .. } => 17,
        }
    }

    pub fn rank(&self) -> usize {
        22 - self.rho() as usize
    }

    pub fn gram(&self) -> IntMatrix {
        let rows = match *self {
            TheoremAParams::Rho20 { a, b, c } => vec![vec![4 * a, 2 * b], vec![2 * b, 4 * c]],
            TheoremAParams::Rho19 { a, b, c, d, l, m } => {
                vec![vec![4 * a, 2 * d, 2 * l], vec![2 * d, 4 * b, 2 * m], vec![2 * l, 2 * m, 4 * c]]
            }
            TheoremAParams::Rho18 { a, b, c } => vec![
                vec![4 * a, 2 * b, 0, 0],
                vec![2 * b, 4 * c, 0, 0],
                vec![0, 0, 0, 2],
                vec![0, 0, 2, 0],
            ],
            TheoremAParams::Rho17 { m } => vec![
                vec![0, 2, 0, 0, 0],
                vec![2, 0, 0, 0, 0],
                vec![0, 0, 0, 2, 0],
                vec![0, 0, 2, 0, 0],
                vec![0, 0, 0, 0, -4 * m],
            ],
        };
        IntMatrix::from_rows(&rows).expect("square")
    }

    pub fn source(&self) -> Result<Lattice> {
        self.validate()?;
        Lattice::from_gram(self.gram())
    }

    /// Checks the shape conditions, naming the first one that fails.
    pub fn validate(&self) -> Result<()> {
        let bad = |s: String| Err(Error::BadParams(s));
        match *self {
            TheoremAParams::Rho20 { a, b, c } => {
                if a <= 0 {
                    return bad(format!("rho = 20 needs a > 0, got a = {a}"));
                }
                if 4 * a * c - b * b <= 0 {
                    return bad(format!("rho = 20 needs 4ac - b^2 > 0, got {}", 4 * a * c - b * b));
                }
            }
            TheoremAParams::Rho19 { a, b, c, .. } => {
                for (name, v) in [("a", a), ("b", b), ("c", c)] {
                    if v >= 0 {
                        return bad(format!("rho = 19 needs {name} < 0, got {name} = {v}"));
                    }
                }
                let (p, n, z) = inertia(&self.gram());
                if (p, n, z) != (2, 1, 0) {
                    return bad(format!("rho = 19 needs signature (2,1), got ({p},{n}) with {z} null directions"));
                }
            }
            TheoremAParams::Rho18 { a, b, c } => {
                if a >= 0 {
                    return bad(format!("rho = 18 needs a < 0, got a = {a}"));
                }
                if c >= 0 {
                    return bad(format!("rho = 18 needs c < 0, got c = {c}"));
                }
                if b <= 0 {
                    return bad(format!("rho = 18 needs b > 0, got b = {b}"));
                }
                if b * b <= 4 * a * c {
                    return bad(format!("rho = 18 needs b^2 > 4ac for signature (1,1), got b^2 = {} and 4ac = {}", b * b, 4 * a * c));
                }
            }
            TheoremAParams::Rho17 { m } => {
                if m < 1 {
                    return bad(format!("rho = 17 needs m >= 1, got m = {m}"));
                }
            }
        }
        Ok(())
    }

    /// Parameters of the same shape read off a Gram matrix.
    fn from_gram(rho: u8, g: &IntMatrix) -> Self {
        match rho {
            20 => TheoremAParams::Rho20 { a: g[(0, 0)] / 4, b: g[(0, 1)] / 2, c: g[(1, 1)] / 4 },
            19 => TheoremAParams::Rho19 {
                a: g[(0, 0)] / 4,
                b: g[(1, 1)] / 4,
                c: g[(2, 2)] / 4,
                d: g[(0, 1)] / 2,
                l: g[(0, 2)] / 2,
                m: g[(1, 2)] / 2,
            },
            18 => TheoremAParams::Rho18 { a: g[(0, 0)] / 4, b: g[(0, 1)] / 2, c: g[(1, 1)] / 4 },
            _ => TheoremAParams::Rho17 { m: -g[(4, 4)] / 4 },
        }
    }
}

/// The `ε`-values on the standard basis of `T`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TheoremALabel {
    pub rho: u8,
    pub bits: Vec<u8>,
}

impl TheoremALabel {
    pub fn new(rho: u8, bits: Vec<u8>) -> Result<Self> {
        if !(17..=20).contains(&rho) {
            return Err(Error::BadLabel(format!("rho must be one of 17, 18, 19, 20, got {rho}")));
        }
        let len = 22 - rho as usize;
        if bits.len() != len {
            return Err(Error::BadLabel(format!("rho = {rho} needs {len} bits, got {}", bits.len())));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::BadLabel("bits must be 0 or 1".into()));
        }
        if bits.iter().all(|&b| b == 0) {
            return Err(Error::BadLabel("label must be non-zero".into()));
        }
        Ok(TheoremALabel { rho, bits })
    }

    /// All non-zero labels for `rho`, in increasing binary order.
    pub fn all(rho: u8) -> Vec<TheoremALabel> {
        let len = 22 - rho as usize;
        (1u32..1 << len)
            .map(|m| TheoremALabel { rho, bits: (0..len).rev().map(|i| (m >> i & 1) as u8).collect() })
            .collect()
    }

    pub fn character(&self) -> Character {
        Character::new(self.bits.clone())
    }
}

/// Sparse description of a vector of `N`: coefficients on `e, f, h, k` plus
/// an optional `E8(2)` part.
fn nv(terms: &[(usize, i64)], w: Option<&[i64]>) -> Vec<i64> {
    let mut v = w.map_or_else(|| vec![0; N_RANK], e82_in_n);
    for &(i, c) in terms {
        v[i] += c;
    }
    v
}

fn tuple(rows: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    find_tuple_in_e82(&IntMatrix::from_rows(rows)?)
}

/// Images for labels in the explicitly constructed set; `None` otherwise.
fn base_images(p: &TheoremAParams, bits: &[u8]) -> Result<Option<Vec<Vec<i64>>>> {
    let imgs = match (*p, bits) {
        (TheoremAParams::Rho20 { a, b, c }, [1, 0]) => vec![nv(&[(E, 1), (F, 2 * a)], None), nv(&[(F, 2 * b), (H, 1), (K, c)], None)],
        (TheoremAParams::Rho20 { a, b, c }, [0, 1]) => vec![nv(&[(F, 2 * b), (H, 1), (K, a)], None), nv(&[(E, 1), (F, 2 * c)], None)],
        (TheoremAParams::Rho20 { a, b, c }, [1, 1]) => vec![
            nv(&[(E, 1), (F, 2 * a)], None),
            nv(&[(E, 1), (F, 2 * b - 2 * a), (H, 1), (K, c - b + a)], None),
        ],
        (TheoremAParams::Rho19 { a, b, c, d, l, m }, [1, 0, 0]) => {
            let w = &tuple(&[vec![4 * c]])?[0];
            vec![nv(&[(E, 1), (F, 2 * a)], None), nv(&[(F, 2 * d), (H, 1), (K, b)], None), nv(&[(F, 2 * l), (K, m)], Some(w))]
        }
        (TheoremAParams::Rho19 { a, b, c, d, l, m }, [1, 1, 0]) => {
            let w = &tuple(&[vec![4 * c]])?[0];
            vec![
                nv(&[(E, 1), (F, 2 * a)], None),
                nv(&[(E, 1), (F, 2 * d - 2 * a), (H, 1), (K, b - d + a)], None),
                nv(&[(F, 2 * l), (K, m - l)], Some(w)),
            ]
        }
        (TheoremAParams::Rho19 { a, b, c, d, l, m }, [1, 1, 1]) => {
            if m < 0 {
                // t ↦ −t flips the signs of l and m
                let flipped = TheoremAParams::Rho19 { a, b, c, d, l: -l, m: -m };
                let mut imgs = base_images(&flipped, bits)?.expect("constructed label");
                imgs[2].iter_mut().for_each(|x| *x = -*x);
                return Ok(Some(imgs));
            }
            let ws = tuple(&[vec![4 * b - 4 * m, 0], vec![0, 4 * c]])?;
            vec![
                nv(&[(E, 1), (K, 1), (H, a)], None),
                nv(&[(E, 1), (F, 2 * m), (H, d - m)], Some(&ws[0])),
                nv(&[(E, 1), (H, l)], Some(&ws[1])),
            ]
        }
        (TheoremAParams::Rho18 { a, b, c }, _) => {
            let x_plain = nv(&[(E, 1), (F, 2 * a)], None);
            let x_twist = nv(&[(E, 1), (F, 2 * a), (K, -a)], None);
            let u_mixed = || -> Result<Vec<i64>> { Ok(tuple(&[vec![4 * (a - b + c)]])?.remove(0)) };
            let w_alone = || -> Result<Vec<i64>> { Ok(tuple(&[vec![4 * c]])?.remove(0)) };
            let r0 = nv(&[(H, 1)], None);
            let s0 = nv(&[(K, 1)], None);
            match bits {
                [1, 0, 0, 0] => vec![x_plain, nv(&[(F, 2 * b)], Some(&w_alone()?)), r0, s0],
                [1, 1, 0, 0] => vec![x_plain, nv(&[(E, 1), (F, 2 * b - 2 * a)], Some(&u_mixed()?)), r0, s0],
                [1, 0, 1, 0] => vec![x_twist, nv(&[(F, 2 * b), (K, -b)], Some(&w_alone()?)), nv(&[(E, 1), (H, 1)], None), s0],
                [0, 0, 1, 0] | [0, 0, 1, 1] => {
                    let last = if bits[3] == 0 { -8 } else { -4 };
                    let ws = tuple(&[vec![4 * a, 0, 0], vec![0, 4 * c, 0], vec![0, 0, last]])?;
                    let s = if bits[3] == 0 { nv(&[(E, 2), (F, 2)], Some(&ws[2])) } else { nv(&[(E, 1), (F, 2)], Some(&ws[2])) };
                    vec![nv(&[(H, 1)], Some(&ws[0])), nv(&[(K, b)], Some(&ws[1])), nv(&[(E, 1)], None), s]
                }
                [1, 1, 1, 0] => vec![
                    x_twist,
                    nv(&[(E, 1), (F, 2 * b - 2 * a), (K, a - b)], Some(&u_mixed()?)),
                    nv(&[(E, 1), (H, 1)], None),
                    s0,
                ],
                [1, 0, 1, 1] => {
                    let ws = tuple(&[vec![4 * c, 0], vec![0, -4]])?;
                    vec![
                        x_twist,
                        nv(&[(F, 2 * b), (K, -b)], Some(&ws[0])),
                        nv(&[(E, 1), (H, 1)], None),
                        nv(&[(E, 1), (K, 1), (H, 1)], Some(&ws[1])),
                    ]
                }
                [1, 1, 1, 1] => {
                    let ws = tuple(&[vec![4 * (a - b + c), 0], vec![0, -4]])?;
                    vec![
                        x_twist,
                        nv(&[(E, 1), (F, 2 * b - 2 * a), (K, a - b)], Some(&ws[0])),
                        nv(&[(E, 1), (H, 1)], None),
                        nv(&[(E, 1), (K, 1), (H, 1)], Some(&ws[1])),
                    ]
                }
                _ => return Ok(None),
            }
        }
        (TheoremAParams::Rho17 { m }, _) => {
            let m4 = -4 * m;
            let h = nv(&[(H, 1)], None);
            let k = nv(&[(K, 1)], None);
            let e = nv(&[(E, 1)], None);
            // (u, v) pairs with (u², v², u.v)
            let pair = |u2: i64, uv: i64| tuple(&[vec![u2, uv], vec![uv, m4]]);
            match bits {
                [1, 0, 0, 0, 0] => {
                    let uv = pair(-8, 0)?;
                    vec![e, nv(&[(E, 2), (F, 2)], Some(&uv[0])), h, k, nv(&[], Some(&uv[1]))]
                }
                [1, 1, 0, 0, 0] => {
                    let uv = pair(-4, 0)?;
                    vec![e, nv(&[(E, 1), (F, 2)], Some(&uv[0])), h, k, nv(&[], Some(&uv[1]))]
                }
                [1, 0, 0, 0, 1] => {
                    let uv = pair(-8, -2)?;
                    vec![e, nv(&[(E, 2), (F, 2)], Some(&uv[0])), h, k, nv(&[(E, 1)], Some(&uv[1]))]
                }
                [1, 1, 0, 0, 1] => {
                    let uv = pair(-4, -2)?;
                    vec![e, nv(&[(E, 1), (F, 2)], Some(&uv[0])), h, k, nv(&[(E, 1)], Some(&uv[1]))]
                }
                [0, 0, 0, 0, 1] => {
                    let ws = tuple(&[vec![-8, -6, -2], vec![-6, -8, -2], vec![-2, -2, m4]])?;
                    vec![
                        nv(&[(E, 2), (F, 2)], Some(&ws[0])),
                        nv(&[(E, 2), (F, 2)], Some(&ws[1])),
                        h,
                        k,
                        nv(&[(E, 1)], Some(&ws[2])),
                    ]
                }
                [1, 1, 1, 1, 0] | [1, 1, 1, 1, 1] => {
                    let ws = if bits[4] == 0 {
                        tuple(&[vec![-4, 0, 0], vec![0, -4, 0], vec![0, 0, m4]])?
                    } else {
                        tuple(&[vec![-4, 0, -2], vec![0, -4, 0], vec![-2, 0, m4]])?
                    };
                    let t = if bits[4] == 0 { nv(&[], Some(&ws[2])) } else { nv(&[(E, 1)], Some(&ws[2])) };
                    vec![
                        e,
                        nv(&[(E, 1), (F, 2), (K, 1)], Some(&ws[0])),
                        nv(&[(E, 1), (H, -1)], None),
                        nv(&[(E, 1), (H, -1), (K, -1)], Some(&ws[1])),
                        t,
                    ]
                }
                [1, 0, 1, 0, 0] => {
                    // (e, 2f+k, e−h, −k, w) spans 2f but not f; y' is corrected by z
                    let zw = tuple(&[vec![-8, 0], vec![0, m4]])?;
                    vec![
                        e,
                        nv(&[(F, 2), (K, 1)], None),
                        nv(&[(E, 1), (H, -1)], None),
                        nv(&[(E, 2), (H, -2), (K, -1)], Some(&zw[0])),
                        nv(&[], Some(&zw[1])),
                    ]
                }
                [1, 1, 1, 0, 0] => {
                    let uv = pair(-4, 0)?;
                    vec![
                        e,
                        nv(&[(E, 1), (F, 2), (K, 1)], Some(&uv[0])),
                        nv(&[(E, 1), (H, -1)], None),
                        nv(&[(K, -1)], None),
                        nv(&[], Some(&uv[1])),
                    ]
                }
                [1, 1, 1, 0, 1] => {
                    let uv = pair(-4, -2)?;
                    vec![
                        e,
                        nv(&[(E, 1), (F, 2), (K, 1)], Some(&uv[0])),
                        nv(&[(E, 1), (H, -1)], None),
                        nv(&[(K, -1)], None),
                        nv(&[(E, 1)], Some(&uv[1])),
                    ]
                }
                [1, 0, 1, 0, 1] => {
                    let uv = pair(-8, -2)?;
                    vec![
                        e,
                        nv(&[(E, 2), (F, 2), (K, 1)], Some(&uv[0])),
                        nv(&[(E, 1), (H, -1)], None),
                        nv(&[(K, -1)], None),
                        nv(&[(E, 1)], Some(&uv[1])),
                    ]
                }
                _ => return Ok(None),
            }
        }
        _ => return Ok(None),
    };
    Ok(Some(imgs))
}

/// Basis permutations relating labels, identity first.
fn symmetries(rho: u8) -> Vec<Vec<usize>> {
    match rho {
        20 => vec![vec![0, 1]],
        19 => vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 1, 0], vec![0, 2, 1], vec![1, 2, 0], vec![2, 0, 1]],
        18 => vec![vec![0, 1, 2, 3], vec![1, 0, 2, 3], vec![0, 1, 3, 2], vec![1, 0, 3, 2]],
        _ => {
            let mut out = Vec::new();
            for outer in [false, true] {
                for first in [false, true] {
                    for second in [false, true] {
                        let mut p: Vec<usize> = if outer { vec![2, 3, 0, 1, 4] } else { vec![0, 1, 2, 3, 4] };
                        if first {
                            p.swap(0, 1);
                        }
                        if second {
                            p.swap(2, 3);
                        }
                        out.push(p);
                    }
                }
            }
            out
        }
    }
}

/// The embedding of `T` with the requested label.
pub fn theorem_a_embedding(params: &TheoremAParams, label: &TheoremALabel) -> Result<PrimitiveEmbedding> {
    params.validate()?;
    let rho = params.rho();
    if label.rho != rho {
        return Err(Error::BadLabel(format!("label is for rho = {}, parameters for rho = {rho}", label.rho)));
    }
    let source = params.source()?;
    let g = params.gram();
    for perm in symmetries(rho) {
        // new basis vector i is old basis vector perm[i]
        let r = perm.len();
        let mut pg = IntMatrix::zeros(r, r);
        for i in 0..r {
            for j in 0..r {
                pg[(i, j)] = g[(perm[i], perm[j])];
            }
        }
        let pparams = TheoremAParams::from_gram(rho, &pg);
        debug_assert_eq!(pparams.gram(), pg);
        let pbits: Vec<u8> = perm.iter().map(|&i| label.bits[i]).collect();
        if let Some(pimgs) = base_images(&pparams, &pbits)? {
            let mut imgs = vec![Vec::new(); r];
            for (i, img) in pimgs.into_iter().enumerate() {
                imgs[perm[i]] = img;
            }
            let emb = embedding_from_images(&source, &IntMatrix::from_columns(N_RANK, &imgs)?)?;
            debug_assert_eq!(pullback_epsilon(&emb), label.character());
            return Ok(emb);
        }
    }
    Err(Error::BadLabel(format!("no construction reaches label {:?}", label.bits)))
}

/// Pulled-back characters of the embeddings for every non-zero label.
pub fn brauer_image_kummer(t: &Lattice, params: &TheoremAParams) -> Result<BTreeSet<Character>> {
    params.validate()?;
    if *t.gram() != params.gram() {
        return Err(Error::BadParams("Gram matrix of T does not match the parameters".into()));
    }
    let mut out = BTreeSet::new();
    for label in TheoremALabel::all(params.rho()) {
        out.insert(pullback_epsilon(&theorem_a_embedding(params, &label)?));
    }
    Ok(out)
}

/// Up to `count` valid parameter sets for `rho` with entries in
/// `[-bound, bound]`, in a fixed order (small absolute values first).
pub fn search_params(rho: u8, count: usize, bound: i64) -> Vec<TheoremAParams> {
    let len = match rho {
        20 | 18 => 3,
        19 => 6,
        17 => 1,
        _ => return Vec::new(),
    };
    let mut vals: Vec<i64> = (-bound..=bound).collect();
    vals.sort_by_key(|v| (v.abs(), *v));
    let mut out = Vec::new();
    let mut idx = vec![0usize; len];
    // enumerate tuples by increasing max index
    for top in 0..vals.len() {
        loop {
            if idx.contains(&top) {
                let v: Vec<i64> = idx.iter().map(|&i| vals[i]).collect();
                if let Ok(p) = TheoremAParams::from_values(rho, &v) {
                    out.push(p);
                    if out.len() == count {
                        return out;
                    }
                }
            }
            let mut pos = 0;
            loop {
                if pos == len {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] <= top {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == len {
                break;
            }
        }
        idx.iter_mut().for_each(|i| *i = 0);
    }
    out
}

/// A base change `P` (columns: new basis in old coordinates) and the
/// resulting parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalization {
    pub basis: IntMatrix,
    pub params: TheoremAParams,
}

fn small_vectors(r: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut v = vec![-bound; r];
    loop {
        if v.iter().any(|&x| x != 0) {
            out.push(v.clone());
        }
        let mut i = 0;
        while i < r {
            v[i] += 1;
            if v[i] <= bound {
                break;
            }
            v[i] = -bound;
            i += 1;
        }
        if i == r {
            break;
        }
    }
    out.sort_by_key(|v| (v.iter().map(|x| x.abs()).sum::<i64>(), v.clone()));
    out
}

/// Searches for a basis of a rank-3 `T` of signature (2,1) with all three
/// basis norms negative, coefficients bounded by `bound`.
pub fn normalize_rho19(t: &Lattice, bound: i64) -> Result<Normalization> {
    if t.rank() != 3 || t.signature() != (2, 1) || !t.is_even() {
        return Err(Error::BadParams("rho = 19 normalization needs an even lattice of rank 3 and signature (2,1)".into()));
    }
    let g = t.gram();
    let neg: Vec<Vec<i64>> = small_vectors(3, bound).into_iter().filter(|v| g.bilinear(v, v) < 0).collect();
    for (i, x) in neg.iter().enumerate() {
        for (j, y) in neg.iter().enumerate().skip(i + 1) {
            for z in &neg[j + 1..] {
                let p = IntMatrix::from_columns(3, &[x.clone(), y.clone(), z.clone()])?;
                let det = p.det()?;
                if det != 1.into() && det != (-1).into() {
                    continue;
                }
                let pg = g.congruence(&p)?;
                let ok = (0..3).all(|a| pg[(a, a)] % 4 == 0) && (0..3).all(|a| (0..3).all(|b| pg[(a, b)] % 2 == 0));
                if !ok {
                    continue;
                }
                let params = TheoremAParams::from_gram(19, &pg);
                if params.validate().is_ok() {
                    return Ok(Normalization { basis: p, params });
                }
            }
            let _ = j;
        }
    }
    Err(Error::BadParams(format!("no basis with a, b, c < 0 and coefficients bounded by {bound}")))
}

/// Base change of the binary part of a rank-4 `T = B ⊕ U(2)` giving
/// `a, c < 0 < b`.
pub fn normalize_rho18(binary: &Lattice, bound: i64) -> Result<Normalization> {
    if binary.rank() != 2 || binary.signature() != (1, 1) {
        return Err(Error::BadParams("rho = 18 normalization needs a binary lattice of signature (1,1)".into()));
    }
    let g = binary.gram();
    let neg: Vec<Vec<i64>> = small_vectors(2, bound).into_iter().filter(|v| g.bilinear(v, v) < 0).collect();
    for (i, x) in neg.iter().enumerate() {
        for y in &neg[i + 1..] {
            let mut p = IntMatrix::from_columns(2, &[x.clone(), y.clone()])?;
            let det = p.det()?;
            if det != 1.into() && det != (-1).into() {
                continue;
            }
            let mut pg = g.congruence(&p)?;
            if pg[(0, 1)] < 0 {
                p[(0, 1)] = -p[(0, 1)];
                p[(1, 1)] = -p[(1, 1)];
                pg = g.congruence(&p)?;
            }
            if pg[(0, 0)] % 4 != 0 || pg[(1, 1)] % 4 != 0 || pg[(0, 1)] % 2 != 0 {
                continue;
            }
            let params = TheoremAParams::Rho18 { a: pg[(0, 0)] / 4, b: pg[(0, 1)] / 2, c: pg[(1, 1)] / 4 };
            if params.validate().is_ok() {
                let mut full = IntMatrix::identity(4);
                for r in 0..2 {
                    for c in 0..2 {
                        full[(r, c)] = p[(r, c)];
                    }
                }
                return Ok(Normalization { basis: full, params });
            }
        }
    }
    Err(Error::BadParams(format!("no basis with a, c < 0 < b and coefficients bounded by {bound}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::{complement_in_n, im_phi_upper_bound};
    use crate::standard::{e8_gram, is_twice_even};

    fn label(rho: u8, bits: &[u8]) -> TheoremALabel {
        TheoremALabel::new(rho, bits.to_vec()).unwrap()
    }

    #[test]
    fn rho20_examples() {
        let p = TheoremAParams::Rho20 { a: 1, b: 0, c: 1 };
        let emb = theorem_a_embedding(&p, &label(20, &[1, 0])).unwrap();
        assert_eq!(emb.image_vectors(), vec![nv(&[(E, 1), (F, 2)], None), nv(&[(H, 1), (K, 1)], None)]);
        let t = p.source().unwrap();
        let img = brauer_image_kummer(&t, &p).unwrap();
        assert_eq!(img.len(), 3);
        assert!(img.iter().all(|c| !c.is_zero()));
    }

    #[test]
    fn rho17_example() {
        let p = TheoremAParams::Rho17 { m: 1 };
        let emb = theorem_a_embedding(&p, &label(17, &[1, 0, 1, 0, 0])).unwrap();
        let v = emb.image_vectors();
        assert_eq!(v[0], nv(&[(E, 1)], None));
        assert_eq!(v[1], nv(&[(F, 2), (K, 1)], None));
        assert_eq!(v[2], nv(&[(E, 1), (H, -1)], None));
        assert_eq!(&v[3][..4], &[2, 0, -2, -1]);
        let w: Vec<i64> = v[4][4..].to_vec();
        assert_eq!(2 * e8_gram().bilinear(&w, &w), -4);
        let c = complement_in_n(&emb).unwrap();
        assert_eq!(c.signature(), (0, 7));
    }

    #[test]
    fn rho18_example() {
        let p = TheoremAParams::Rho18 { a: -1, b: 3, c: -1 };
        let emb = theorem_a_embedding(&p, &label(18, &[1, 0, 0, 0])).unwrap();
        let v = emb.image_vectors();
        assert_eq!(v[0], nv(&[(E, 1), (F, -2)], None));
        assert_eq!(&v[1][..4], &[0, 6, 0, 0]);
        assert_eq!(v[2], nv(&[(H, 1)], None));
        assert_eq!(v[3], nv(&[(K, 1)], None));
        let img = brauer_image_kummer(&p.source().unwrap(), &p).unwrap();
        assert_eq!(img.len(), 15);
    }

    #[test]
    fn all_labels_validate() {
        let cases = [
            TheoremAParams::Rho20 { a: 2, b: 1, c: 3 },
            search_params(19, 1, 3)[0],
            TheoremAParams::Rho19 { a: -1, b: -1, c: -1, d: 3, l: 3, m: -3 },
            TheoremAParams::Rho19 { a: -1, b: -1, c: -1, d: 3, l: -3, m: 0 },
            TheoremAParams::Rho18 { a: -1, b: 3, c: -2 },
            TheoremAParams::Rho17 { m: 2 },
        ];
        for p in cases {
            let Ok(()) = p.validate() else { continue };
            let t = p.source().unwrap();
            let bound = im_phi_upper_bound(&t).unwrap();
            for l in TheoremALabel::all(p.rho()) {
                let emb = theorem_a_embedding(&p, &l).unwrap_or_else(|e| panic!("{p:?} {l:?}: {e}"));
                assert_eq!(pullback_epsilon(&emb), l.character(), "{p:?} {l:?}");
                assert!(is_twice_even(&complement_in_n(&emb).unwrap()));
                assert!(bound.contains(&l.character()));
            }
        }
    }

    #[test]
    fn bad_params_are_named() {
        assert!(matches!(TheoremAParams::from_values(20, &[0, 0, 1]), Err(Error::BadParams(s)) if s.contains("a > 0")));
        assert!(matches!(TheoremAParams::from_values(18, &[-1, -3, -1]), Err(Error::BadParams(s)) if s.contains("b > 0")));
        assert!(matches!(TheoremAParams::from_values(17, &[0]), Err(Error::BadParams(_))));
        assert!(matches!(TheoremALabel::new(20, vec![0, 0]), Err(Error::BadLabel(_))));
    }

    #[test]
    fn parameter_search_and_normalization() {
        for rho in [17, 18, 19, 20] {
            let ps = search_params(rho, 3, 4);
            assert_eq!(ps.len(), 3, "rho {rho}");
            assert!(ps.iter().all(|p| p.validate().is_ok()));
        }
        // U(2) ⊕ ⟨4⟩ has signature (2,1) but positive norms on its basis
        let t = Lattice::from_rows(&[vec![0, 2, 0], vec![2, 0, 0], vec![0, 0, 4]]).unwrap();
        let n = normalize_rho19(&t, 3).unwrap();
        assert_eq!(t.gram().congruence(&n.basis).unwrap(), n.params.gram());
        let b = Lattice::from_rows(&[vec![0, 2], vec![2, -4]]).unwrap();
        let n = normalize_rho18(&b, 3).unwrap();
        assert!(n.params.validate().is_ok());
    }
}
