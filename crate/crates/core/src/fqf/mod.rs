//! Finite quadratic forms `q: A → Q/2Z` on finite abelian groups, with the
//! discriminant form of an even lattice, subgroups, orthogonals and
//! subquotients.
//!
//! A form is stored on a decomposition `A = ⊕ Z/dᵢ` (not necessarily an
//! invariant-factor chain) by integer numerators over the exponent `N` of
//! `A`: `q(gᵢ) = num[i][i] / N mod 2` and `b(gᵢ, gⱼ) = num[i][j] / N mod 1`.
//! Elements are coordinate vectors reduced modulo the `dᵢ`.

mod gauss;
mod iso;
mod jordan;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::matrix::{self, big_transpose, hnf_basis, snf_big, solve_upper, BigMatrix};

pub use gauss::DEFAULT_BOUND;
pub use iso::{FormIsometry, DEFAULT_NODE_CAP};
pub use jordan::{legendre, JordanBlock, OddJordan, TwoAdicDiscriminant};

/// Value of `q` in `[0, 2)` or of `b` in `[0, 1)`.
pub type QValue = Ratio<i64>;

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "FqfJson", try_from = "FqfJson")]
pub struct FiniteQuadraticForm {
    orders: Vec<i64>,
    denom: i64,
    num: Vec<Vec<i64>>,
}

/// Element of a finite abelian group, as coordinates modulo the orders.
pub type Element = Vec<i64>;

fn modp(a: i128, m: i64) -> i64 {
    a.rem_euclid(m as i128) as i64
}

impl FiniteQuadraticForm {
    pub fn trivial() -> Self {
        FiniteQuadraticForm { orders: Vec::new(), denom: 1, num: Vec::new() }
    }

    /// Builds a form from cyclic orders and the rational matrix of values on
    /// generators (diagonal read mod 2, off-diagonal mod 1).
    pub fn new(orders: &[i64], q: &[Vec<QValue>]) -> Result<Self> {
        let n = orders.len();
        if q.len() != n || q.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidForm("q matrix does not match the number of generators".into()));
        }
        if orders.iter().any(|&d| d < 1) {
            return Err(Error::InvalidForm("orders must be positive".into()));
        }
        let mut den = orders.iter().fold(1i64, |a, &d| a.lcm(&d));
        for row in q {
            for x in row {
                den = den.lcm(x.denom());
            }
        }
        let num: Vec<Vec<i64>> = q
            .iter()
            .map(|row| row.iter().map(|x| x.numer() * (den / x.denom())).collect())
            .collect();
        for i in 0..n {
            for j in 0..n {
                let d = q[i][j] - q[j][i];
                if i != j && !d.is_integer() {
                    return Err(Error::InvalidForm(format!("b is not symmetric at ({i},{j})")));
                }
            }
        }
        Self::from_numerators(orders.to_vec(), den, num)
    }

    /// Builds a form from numerators over `denom` and renormalizes to the
    /// exponent of the group.
    pub(crate) fn from_numerators(orders: Vec<i64>, denom: i64, num: Vec<Vec<i64>>) -> Result<Self> {
        let keep: Vec<usize> = (0..orders.len()).filter(|&i| orders[i] > 1).collect();
        let orders: Vec<i64> = keep.iter().map(|&i| orders[i]).collect();
        let n = orders.len();
        let e = orders.iter().fold(1i64, |a, &d| a.lcm(&d));
        let mut out = vec![vec![0i64; n]; n];
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                let v = num[i][j] as i128 * e as i128;
                let modulus = if a == b { 2 * denom as i128 } else { denom as i128 };
                let v = v.rem_euclid(modulus * e as i128);
                if v % denom as i128 != 0 {
                    return Err(Error::InvalidForm(format!(
                        "value {}/{} at ({a},{b}) has denominator not dividing the exponent {e}",
                        num[i][j], denom
                    )));
                }
                out[a][b] = (v / denom as i128) as i64;
            }
        }
        let f = FiniteQuadraticForm { orders, denom: e, num: out };
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<()> {
        let n = self.orders.len();
        let nn = self.denom as i128;
        for i in 0..n {
            let d = self.orders[i] as i128;
            for j in 0..n {
                if (self.num[i][j] as i128 - self.num[j][i] as i128).rem_euclid(nn) != 0 {
                    return Err(Error::InvalidForm(format!("b is not symmetric at ({i},{j})")));
                }
                if (d * self.num[i][j] as i128).rem_euclid(nn) != 0 {
                    return Err(Error::InvalidForm(format!("order {d} does not annihilate b(g{i}, g{j})")));
                }
            }
            if (d * d * self.num[i][i] as i128).rem_euclid(2 * nn) != 0 {
                return Err(Error::InvalidForm(format!("q(d·g{i}) is not 0 mod 2")));
            }
        }
        Ok(())
    }

    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    pub fn ngens(&self) -> usize {
        self.orders.len()
    }

    /// The common denominator `N` of all stored values.
    pub fn exponent(&self) -> i64 {
        self.denom
    }

    pub fn numerators(&self) -> &[Vec<i64>] {
        &self.num
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().map(|&d| d as u64).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn zero(&self) -> Element {
        vec![0; self.ngens()]
    }

    pub fn generator(&self, i: usize) -> Element {
        let mut x = self.zero();
        x[i] = 1;
        x
    }

    pub fn reduce(&self, x: &[i64]) -> Element {
        x.iter().zip(&self.orders).map(|(&a, &d)| a.rem_euclid(d)).collect()
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Element {
        x.iter().zip(y).zip(&self.orders).map(|((&a, &b), &d)| (a + b).rem_euclid(d)).collect()
    }

    pub fn neg(&self, x: &[i64]) -> Element {
        x.iter().zip(&self.orders).map(|(&a, &d)| (-a).rem_euclid(d)).collect()
    }

    pub fn scale(&self, t: i64, x: &[i64]) -> Element {
        x.iter().zip(&self.orders).map(|(&a, &d)| modp(t as i128 * a as i128, d)).collect()
    }

    pub fn is_zero_element(&self, x: &[i64]) -> bool {
        x.iter().zip(&self.orders).all(|(&a, &d)| a.rem_euclid(d) == 0)
    }

    pub fn element_order(&self, x: &[i64]) -> i64 {
        x.iter().zip(&self.orders).fold(1i64, |acc, (&a, &d)| acc.lcm(&(d / a.rem_euclid(d).gcd(&d))))
    }

    /// Numerator of `q(x)` over `N`, reduced mod `2N`.
    pub fn q_num(&self, x: &[i64]) -> i64 {
        let mut acc: i128 = 0;
        let m = 2 * self.denom as i128;
        for i in 0..self.ngens() {
            if x[i] == 0 {
                continue;
            }
            let mut row: i128 = 0;
            for j in 0..self.ngens() {
                row += self.num[i][j] as i128 * x[j] as i128;
            }
            acc = (acc + x[i] as i128 * row.rem_euclid(m)).rem_euclid(m);
        }
        acc as i64
    }

    /// Numerator of `b(x, y)` over `N`, reduced mod `N`.
    pub fn b_num(&self, x: &[i64], y: &[i64]) -> i64 {
        let w = self.pairing_vector(y);
        self.b_num_with(x, &w)
    }

    /// `num · y mod N`; pairing against it gives `b(·, y)`.
    pub fn pairing_vector(&self, y: &[i64]) -> Vec<i64> {
        (0..self.ngens())
            .map(|i| {
                let s: i128 = (0..self.ngens()).map(|j| self.num[i][j] as i128 * y[j] as i128).sum();
                modp(s, self.denom)
            })
            .collect()
    }

    pub(crate) fn b_num_with(&self, x: &[i64], w: &[i64]) -> i64 {
        let s: i128 = x.iter().zip(w).map(|(&a, &b)| a as i128 * b as i128).sum();
        modp(s, self.denom)
    }

    pub fn q(&self, x: &[i64]) -> QValue {
        Ratio::new(self.q_num(x), self.denom)
    }

    pub fn b(&self, x: &[i64], y: &[i64]) -> QValue {
        Ratio::new(self.b_num(x, y), self.denom)
    }

    /// Mixed-radix index of a reduced element.
    pub fn index_of(&self, x: &[i64]) -> usize {
        let mut idx = 0usize;
        for (a, &d) in x.iter().zip(&self.orders) {
            idx = idx * d as usize + a.rem_euclid(d) as usize;
        }
        idx
    }

    pub fn element_at(&self, mut idx: usize) -> Element {
        let mut x = vec![0; self.ngens()];
        for i in (0..self.ngens()).rev() {
            let d = self.orders[i] as usize;
            x[i] = (idx % d) as i64;
            idx /= d;
        }
        x
    }

    /// All elements in index order; fails if `|A|` exceeds `bound`.
    pub fn elements(&self, bound: u64) -> Result<Vec<Element>> {
        let order = self.checked_order(bound)?;
        Ok((0..order as usize).map(|i| self.element_at(i)).collect())
    }

    pub(crate) fn checked_order(&self, bound: u64) -> Result<u64> {
        let mut order: u64 = 1;
        for &d in &self.orders {
            order = order.saturating_mul(d as u64);
        }
        if order > bound {
            return Err(Error::TooLarge { order, bound });
        }
        Ok(order)
    }

    /// Invariant factors `d₁ | d₂ | …` of the underlying group (all `> 1`).
    pub fn invariant_factors(&self) -> Vec<i64> {
        let n = self.ngens();
        let m: BigMatrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::from(self.orders[i]) } else { BigInt::zero() }).collect())
            .collect();
        let s = snf_big(&m, n, n);
        s.invariant_factors()
            .into_iter()
            .map(|x| x.to_i64().expect("orders fit i64"))
            .filter(|&x| x > 1)
            .collect()
    }

    /// Primes dividing `|A|`, ascending.
    pub fn primes(&self) -> Vec<u64> {
        let mut ps = Vec::new();
        for &d in &self.orders {
            for p in prime_factors(d as u64) {
                if !ps.contains(&p) {
                    ps.push(p);
                }
            }
        }
        ps.sort_unstable();
        ps
    }

    /// `ℓ(A_p)`: number of cyclic factors of order divisible by `p`.
    pub fn ell_p(&self, p: u64) -> usize {
        self.orders.iter().filter(|&&d| (d as u64).is_multiple_of(p)).count()
    }

    /// `ℓ(A)`: minimal number of generators.
    pub fn min_generators(&self) -> usize {
        self.primes().into_iter().map(|p| self.ell_p(p)).max().unwrap_or(0)
    }

    pub fn negate(&self) -> Self {
        let n = self.ngens();
        let num = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let m = if i == j { 2 * self.denom } else { self.denom };
                        (-self.num[i][j]).rem_euclid(m)
                    })
                    .collect()
            })
            .collect();
        FiniteQuadraticForm { orders: self.orders.clone(), denom: self.denom, num }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let e = self.denom.lcm(&other.denom);
        let (n1, n2) = (self.ngens(), other.ngens());
        let mut num = vec![vec![0i64; n1 + n2]; n1 + n2];
        for i in 0..n1 {
            for j in 0..n1 {
                num[i][j] = self.num[i][j] * (e / self.denom);
            }
        }
        for i in 0..n2 {
            for j in 0..n2 {
                num[n1 + i][n1 + j] = other.num[i][j] * (e / other.denom);
            }
        }
        let mut orders = self.orders.clone();
        orders.extend_from_slice(&other.orders);
        Self::from_numerators(orders, e, num).expect("direct sum of valid forms is valid")
    }

    /// Form induced on the given independent elements, where `orders[i]` is
    /// the order of `elements[i]` and the elements generate their span as a
    /// direct sum.
    pub fn restrict_to(&self, elements: &[Element], orders: &[i64]) -> Result<Self> {
        let n = elements.len();
        let w: Vec<Vec<i64>> = elements.iter().map(|y| self.pairing_vector(y)).collect();
        let mut num = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                num[i][j] = if i == j { self.q_num(&elements[i]) } else { self.b_num_with(&elements[i], &w[j]) };
            }
        }
        Self::from_numerators(orders.to_vec(), self.denom, num)
    }

    /// Restriction to the `p`-primary part, with the generators used (as
    /// elements of `self`).
    pub fn p_part_with_generators(&self, p: u64) -> (Self, Vec<Element>) {
        let mut gens = Vec::new();
        let mut orders = Vec::new();
        for (i, &d) in self.orders.iter().enumerate() {
            let pk = p_power_part(d as u64, p) as i64;
            if pk > 1 {
                let mut x = self.zero();
                x[i] = d / pk;
                gens.push(x);
                orders.push(pk);
            }
        }
        let f = self.restrict_to(&gens, &orders).expect("p-part of a valid form is valid");
        (f, gens)
    }

    pub fn p_part(&self, p: u64) -> Self {
        self.p_part_with_generators(p).0
    }

    pub fn two_part(&self) -> Self {
        self.p_part(2)
    }

    /// Product of the odd primary parts.
    pub fn odd_part(&self) -> Self {
        self.primes()
            .into_iter()
            .filter(|&p| p != 2)
            .fold(Self::trivial(), |acc, p| acc.direct_sum(&self.p_part(p)))
    }

    /// Rewrites every generator order so the form sits over a common
    /// denominator `den` (a multiple of the exponent).
    pub(crate) fn q_over(&self, x: &[i64], den: i64) -> i64 {
        self.q_num(x) * (den / self.denom)
    }

    pub(crate) fn b_over_with(&self, x: &[i64], w: &[i64], den: i64) -> i64 {
        self.b_num_with(x, w) * (den / self.denom)
    }

    // ---- subgroups ----

    pub fn span(&self, gens: &[Element]) -> Subgroup {
        Subgroup::new(self, gens.iter().map(|g| self.reduce(g)).collect())
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::new(self, (0..self.ngens()).map(|i| self.generator(i)).collect())
    }

    /// Lattice `L_H ⊂ Zⁿ` spanned by the generators and `dᵢ eᵢ`, in HNF.
    fn subgroup_lattice(&self, gens: &[Element]) -> BigMatrix {
        let n = self.ngens();
        let mut cols: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::from(self.orders[i]) } else { BigInt::zero() }).collect())
            .collect();
        for g in gens {
            cols.push(g.iter().map(|&x| BigInt::from(x)).collect());
        }
        hnf_basis(&big_transpose(&cols), n).expect("full rank")
    }

    /// `{x : b(x, h) = 0 for all h ∈ H}`.
    pub fn perp(&self, h: &Subgroup) -> Subgroup {
        let n = self.ngens();
        let rows: Vec<Vec<i64>> = h.gens.iter().filter(|g| !self.is_zero_element(g)).map(|g| self.pairing_vector(g)).collect();
        if rows.is_empty() {
            return self.whole();
        }
        let k = rows.len();
        let m: BigMatrix = rows
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let mut out: Vec<BigInt> = row.iter().map(|&x| BigInt::from(x)).collect();
                out.extend((0..k).map(|c| if c == r { BigInt::from(self.denom) } else { BigInt::zero() }));
                out
            })
            .collect();
        let ker = matrix::integer_kernel(&m, n + k);
        let ncols = ker.first().map_or(0, Vec::len);
        let gens: Vec<Element> = (0..ncols)
            .map(|c| (0..n).map(|i| ker[i][c].mod_floor(&BigInt::from(self.orders[i])).to_i64().unwrap()).collect())
            .collect();
        Subgroup::new(self, gens)
    }

    /// Subquotient `H / I` for subgroups `I ⊆ H`.
    pub fn subquotient(&self, h: &Subgroup, i: &Subgroup) -> Result<Subquotient> {
        for g in &i.gens {
            if !h.contains(g) {
                return Err(Error::NotSubgroup(format!("{g:?} is not in the ambient subgroup")));
            }
        }
        let n = self.ngens();
        let bh = &h.basis;
        let bi = &i.basis;
        // C = B_h⁻¹ · B_i, column by column
        let mut ccols = Vec::with_capacity(n);
        for c in 0..n {
            let col: Vec<BigInt> = (0..n).map(|r| bi[r][c].clone()).collect();
            ccols.push(solve_upper(bh, &col).expect("I ⊆ H"));
        }
        let cmat = big_transpose(&ccols);
        let s = snf_big(&cmat, n, n);
        let mut gens = Vec::new();
        let mut orders = Vec::new();
        let mut rows = Vec::new();
        for t in 0..n {
            let st = s.diagonal[t].to_i64().ok_or(Error::Overflow("subquotient order"))?;
            if st <= 1 {
                continue;
            }
            let col: Vec<BigInt> = (0..n).map(|r| s.u_inv[r][t].clone()).collect();
            let v = matrix::big_mul_vec(bh, &col);
            let g: Element = v
                .iter()
                .zip(&self.orders)
                .map(|(x, &d)| x.mod_floor(&BigInt::from(d)).to_i64().unwrap())
                .collect();
            gens.push(g);
            orders.push(st);
            rows.push(s.u[t].clone());
        }
        let form = self.restrict_to(&gens, &orders)?;
        Ok(Subquotient { form, lifts: gens, u_rows: rows, orders, h_basis: bh.clone() })
    }

    /// Form induced on `I^⊥ / I` for an isotropic subgroup `I`.
    pub fn quotient(&self, i: &Subgroup) -> Result<Subquotient> {
        for (a, x) in i.gens.iter().enumerate() {
            if self.q_num(x) != 0 {
                return Err(Error::NotIsotropic(format!("q({x:?}) = {}", self.q(x))));
            }
            for y in &i.gens[..a] {
                if self.b_num(x, y) != 0 {
                    return Err(Error::NotIsotropic(format!("b({x:?}, {y:?}) = {}", self.b(x, y))));
                }
            }
        }
        let perp = self.perp(i);
        self.subquotient(&perp, i)
    }

    pub fn quotient_form(&self, i: &Subgroup) -> Result<Self> {
        Ok(self.quotient(i)?.form)
    }

    // ---- serialization ----

    pub fn to_json(&self) -> FqfJson {
        let n = self.ngens();
        let q = (0..n)
            .map(|i| (0..n).map(|j| {
                let v = if i == j { self.q(&self.generator(i)) } else { self.b(&self.generator(i), &self.generator(j)) };
                [*v.numer(), *v.denom()]
            }).collect())
            .collect();
        FqfJson { invariant_factors: self.orders.clone(), q }
    }

    pub fn from_json(j: &FqfJson) -> Result<Self> {
        let q: Vec<Vec<QValue>> = j
            .q
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&[a, b]| if b == 0 { Err(Error::InvalidForm("zero denominator".into())) } else { Ok(Ratio::new(a, b)) })
                    .collect()
            })
            .collect::<Result<_>>()?;
        Self::new(&j.invariant_factors, &q)
    }
}

impl fmt::Debug for FiniteQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteQuadraticForm")
            .field("orders", &self.orders)
            .field("denom", &self.denom)
            .field("num", &self.num)
            .finish()
    }
}

/// JSON form: `{"invariant_factors": [...], "q": [[[num, den], ...], ...]}`.
/// The list named `invariant_factors` holds the cyclic orders of the stored
/// generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FqfJson {
    pub invariant_factors: Vec<i64>,
    pub q: Vec<Vec<[i64; 2]>>,
}

impl From<FiniteQuadraticForm> for FqfJson {
    fn from(f: FiniteQuadraticForm) -> Self {
        f.to_json()
    }
}

impl TryFrom<FqfJson> for FiniteQuadraticForm {
    type Error = Error;

    fn try_from(j: FqfJson) -> Result<Self> {
        FiniteQuadraticForm::from_json(&j)
    }
}

/// A subgroup of a finite quadratic form given by generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub gens: Vec<Element>,
    orders: Vec<i64>,
    basis: BigMatrix,
}

impl Subgroup {
    fn new(parent: &FiniteQuadraticForm, gens: Vec<Element>) -> Self {
        let basis = parent.subgroup_lattice(&gens);
        Subgroup { gens, orders: parent.orders.clone(), basis }
    }

    pub fn order(&self) -> u64 {
        let total: u64 = self.orders.iter().map(|&d| d as u64).product();
        let det: BigInt = (0..self.basis.len()).map(|i| self.basis[i][i].clone()).product();
        total / det.to_u64().expect("index fits")
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        let v: Vec<BigInt> = x.iter().map(|&a| BigInt::from(a)).collect();
        solve_upper(&self.basis, &v).is_some()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// All elements of the subgroup (closure of the generators).
    pub fn elements(&self, parent: &FiniteQuadraticForm) -> Vec<Element> {
        let mut seen = std::collections::BTreeSet::new();
        let zero = parent.zero();
        seen.insert(zero.clone());
        let mut out = vec![zero];
        let mut head = 0;
        while head < out.len() {
            let x = out[head].clone();
            head += 1;
            for g in &self.gens {
                let y = parent.add(&x, g);
                if seen.insert(y.clone()) {
                    out.push(y);
                }
            }
        }
        out.sort();
        out
    }
}

/// `H / I` with its induced form and the maps between the two descriptions.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub form: FiniteQuadraticForm,
    /// Lifts in the parent group of the generators of `form`.
    pub lifts: Vec<Element>,
    u_rows: Vec<Vec<BigInt>>,
    orders: Vec<i64>,
    h_basis: BigMatrix,
}

impl Subquotient {
    /// Class in `H / I` of an element of `H`.
    pub fn project(&self, x: &[i64]) -> Result<Element> {
        let v: Vec<BigInt> = x.iter().map(|&a| BigInt::from(a)).collect();
        let y = solve_upper(&self.h_basis, &v).ok_or_else(|| Error::NotSubgroup(format!("{x:?}")))?;
        Ok(self
            .u_rows
            .iter()
            .zip(&self.orders)
            .map(|(row, &s)| {
                let c: BigInt = row.iter().zip(&y).map(|(a, b)| a * b).sum();
                c.mod_floor(&BigInt::from(s)).to_i64().unwrap()
            })
            .collect())
    }

    pub fn lift(&self, parent: &FiniteQuadraticForm, c: &[i64]) -> Element {
        let mut x = parent.zero();
        for (t, &ct) in c.iter().enumerate() {
            x = parent.add(&x, &parent.scale(ct, &self.lifts[t]));
        }
        x
    }
}

/// Discriminant form of an even lattice together with the maps between
/// `L*/L` and the generator coordinates.
#[derive(Clone, Debug)]
pub struct DiscriminantForm {
    pub form: FiniteQuadraticForm,
    u_rows: Vec<Vec<BigInt>>,
    v_cols: Vec<Vec<BigInt>>,
    orders: Vec<i64>,
}

/// Discriminant form `(A_L, q_L)` of an even lattice via the Smith form
/// `U G V = D`: generators are the dual vectors `V eᵢ / dᵢ`.
pub fn discriminant_form(lattice: &Lattice) -> Result<DiscriminantForm> {
    if !lattice.is_even() {
        return Err(Error::NotEven);
    }
    let g = lattice.gram();
    let n = g.rows();
    let s = matrix::snf(g);
    let kept: Vec<usize> = (0..n).filter(|&i| !s.diagonal[i].is_one()).collect();
    let orders: Vec<i64> = kept
        .iter()
        .map(|&i| s.diagonal[i].to_i64().ok_or(Error::Overflow("discriminant group order")))
        .collect::<Result<_>>()?;
    let e = orders.iter().fold(1i64, |a, &d| a.lcm(&d));
    let vt_uinv = matrix::big_mul(&big_transpose(&s.v), &s.u_inv);
    let k = kept.len();
    let mut num = vec![vec![0i64; k]; k];
    for (a, &i) in kept.iter().enumerate() {
        for (b, &j) in kept.iter().enumerate() {
            let m = if a == b { 2 * e } else { e };
            let v = &vt_uinv[i][j] * BigInt::from(e / orders[a]);
            num[a][b] = v.mod_floor(&BigInt::from(m)).to_i64().unwrap();
        }
    }
    let form = FiniteQuadraticForm::from_numerators(orders.clone(), e, num)?;
    let u_rows = kept.iter().map(|&i| s.u[i].clone()).collect();
    let v_cols = kept.iter().map(|&i| s.v.iter().map(|row| row[i].clone()).collect()).collect();
    Ok(DiscriminantForm { form, u_rows, v_cols, orders })
}

impl DiscriminantForm {
    /// Class of the dual vector `x` given by its pairings `w = G x` with the
    /// basis (an integer vector).
    pub fn element_of_pairing(&self, w: &[i64]) -> Element {
        self.u_rows
            .iter()
            .zip(&self.orders)
            .map(|(row, &s)| {
                let c: BigInt = row.iter().zip(w).map(|(a, &b)| a * BigInt::from(b)).sum();
                c.mod_floor(&BigInt::from(s)).to_i64().unwrap()
            })
            .collect()
    }

    /// Class of the dual vector `numerators / den` (coordinates in the
    /// lattice basis), checking that it lies in `L*`.
    pub fn element_of_dual(&self, gram: &matrix::IntMatrix, numerators: &[i64], den: i64) -> Result<Element> {
        let w = gram.mul_vec(numerators)?;
        if w.iter().any(|x| x % den != 0) {
            return Err(Error::NotSubgroup("vector is not in the dual lattice".into()));
        }
        Ok(self.element_of_pairing(&w.iter().map(|x| x / den).collect::<Vec<_>>()))
    }

    /// A dual vector representing `c`, as numerators over the returned
    /// denominator.
    pub fn lift(&self, c: &[i64]) -> (Vec<i64>, i64) {
        let e = self.form.exponent();
        let n = self.v_cols.first().map_or(0, Vec::len);
        let mut acc = vec![BigInt::zero(); n];
        for (t, &ct) in c.iter().enumerate() {
            let f = BigInt::from(ct.rem_euclid(self.orders[t]) * (e / self.orders[t]));
            for (a, v) in acc.iter_mut().zip(&self.v_cols[t]) {
                *a += &f * v;
            }
        }
        (acc.into_iter().map(|x| x.to_i64().expect("lift fits i64")).collect(), e)
    }
}

/// Distinct prime divisors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Largest power of `p` dividing `n`.
pub fn p_power_part(mut n: u64, p: u64) -> u64 {
    let mut r = 1;
    while n.is_multiple_of(p) {
        n /= p;
        r *= p;
    }
    r
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == vec![n]
}
