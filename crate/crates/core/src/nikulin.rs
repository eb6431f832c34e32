//! Existence of even lattices with given invariants, embedding data for
//! primitive embeddings into `N`, odd-index sublattices with controlled
//! discriminant, and the transfer of embedding data along them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::embed::{complement_in_n, PrimitiveEmbedding};
use crate::error::{Error, Result};
use crate::fqf::{
    discriminant_form, is_prime, legendre, p_power_part, prime_factors, DiscriminantForm, Element, FiniteQuadraticForm, FormIsometry,
    Subquotient, DEFAULT_BOUND, DEFAULT_NODE_CAP,
};
use crate::lattice::{sublattice_from_gram_change, Lattice, Sublattice};
use crate::matrix::{big_transpose, hnf_basis, rational_inverse, IntMatrix};
use crate::standard::enriques_lattice;

/// Outcome of each condition of the existence criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExistenceReport {
    /// `t₊ − t₋ ≡ sign(q) mod 8`.
    pub signature_ok: bool,
    /// `t₊, t₋ ≥ 0` and `t₊ + t₋ ≥ ℓ(A)`.
    pub rank_ok: bool,
    /// Odd primes where the determinant condition was checked and failed.
    pub failed_odd_primes: Vec<u64>,
    /// `None` when the 2-adic condition does not apply.
    pub two_adic_ok: Option<bool>,
}

impl ExistenceReport {
    pub fn verdict(&self) -> bool {
        self.signature_ok && self.rank_ok && self.failed_odd_primes.is_empty() && self.two_adic_ok != Some(false)
    }
}

/// Evaluates the four conditions for an even lattice of signature
/// `(t₊, t₋)` with discriminant form `f`. The determinant conditions compare
/// with the order of the whole group `|A|`.
pub fn existence_report(sig: (i64, i64), f: &FiniteQuadraticForm) -> Result<ExistenceReport> {
    let (tp, tm) = sig;
    let sign = f.milgram_signature()?;
    let signature_ok = (tp - tm).rem_euclid(8) == sign as i64;
    let rank = tp + tm;
    let rank_ok = tp >= 0 && tm >= 0 && rank >= f.min_generators() as i64;
    let mut failed_odd_primes = Vec::new();
    let mut two_adic_ok = None;
    if rank_ok {
        let order = f.order();
        for p in f.primes() {
            if rank != f.ell_p(p) as i64 {
                continue;
            }
            let rest = (order / p_power_part(order, p)) as i64;
            if p == 2 {
                let part = f.two_part();
                if part.splits_unit_block()? {
                    continue;
                }
                let d = part.two_adic_discriminant()?;
                let u = rest.rem_euclid(8);
                two_adic_ok = Some(u == d.unit || u == (-d.unit).rem_euclid(8));
            } else {
                let j = f.odd_jordan(p)?;
                let lhs = if tm % 2 == 0 { rest } else { -rest };
                let square = legendre(lhs, p) == 1;
                if square != (j.unit == 1) {
                    failed_odd_primes.push(p);
                }
            }
        }
    }
    Ok(ExistenceReport { signature_ok, rank_ok, failed_odd_primes, two_adic_ok })
}

/// Whether an even lattice with signature `sig` and discriminant form `f`
/// exists.
pub fn exists_even_lattice(sig: (i64, i64), f: &FiniteQuadraticForm) -> Result<bool> {
    Ok(existence_report(sig, f)?.verdict())
}

/// Data describing a primitive embedding `L ↪ N`: glue subgroups, the glue
/// isometry, invariants of the complement `K` and the identification of
/// `−q_K` with the glued form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingDatum {
    /// Generators of `H_L ⊂ A_L`.
    pub h_l: Vec<Element>,
    /// Generators of `H_N ⊂ A_N`.
    pub h_n: Vec<Element>,
    /// `γ(h)` for each generator `h` of `H_L`.
    pub gamma: Vec<Element>,
    pub k_rank: usize,
    pub k_signature: (usize, usize),
    pub q_k: FiniteQuadraticForm,
    /// Isometry `−q_K → Γ^⊥/Γ`, with `Γ^⊥/Γ` in the coordinates of
    /// [`glued_form`].
    pub delta: FormIsometry,
}

fn n_form() -> DiscriminantForm {
    discriminant_form(&enriques_lattice()).expect("N is even")
}

/// `q_L ⊕ −q_N`.
fn sum_form(q_l: &FiniteQuadraticForm, q_n: &FiniteQuadraticForm) -> FiniteQuadraticForm {
    q_l.direct_sum(&q_n.negate())
}

fn concat(a: &[i64], b: &[i64]) -> Element {
    a.iter().chain(b).copied().collect()
}

/// `Γ^⊥/Γ` inside `q_L ⊕ −q_N` for the graph of `γ`.
fn glued(q_l: &FiniteQuadraticForm, q_n: &FiniteQuadraticForm, h_l: &[Element], gamma: &[Element]) -> Result<(FiniteQuadraticForm, Subquotient)> {
    let s = sum_form(q_l, q_n);
    let graph: Vec<Element> = h_l.iter().zip(gamma).map(|(a, b)| concat(a, b)).collect();
    let sub = s.quotient(&s.span(&graph))?;
    Ok((s, sub))
}

/// The form `Γ^⊥/Γ` that `δ` maps onto, for the datum's glue.
pub fn glued_form(l: &Lattice, d: &EmbeddingDatum) -> Result<FiniteQuadraticForm> {
    let q_l = discriminant_form(l)?.form;
    Ok(glued(&q_l, &n_form().form, &d.h_l, &d.gamma)?.1.form)
}

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::DatumInvalid(msg.into()))
}

/// Checks every clause of the datum; the error names the first failure.
pub fn check_embedding_datum(l: &Lattice, d: &EmbeddingDatum) -> Result<()> {
    if !l.is_even() {
        return invalid("L is not even");
    }
    let (tp, k) = l.signature();
    if tp != 2 || k > 10 || l.rank() != tp + k {
        return invalid(format!("L must have signature (2,k) with k <= 10, got ({tp},{k})"));
    }
    let q_l = discriminant_form(l)?.form;
    let q_n = n_form().form;
    if d.h_l.iter().any(|x| x.len() != q_l.ngens()) || d.gamma.iter().any(|x| x.len() != q_n.ngens()) || d.h_n.iter().any(|x| x.len() != q_n.ngens()) {
        return invalid("element coordinates have the wrong length");
    }
    if d.gamma.len() != d.h_l.len() {
        return invalid("gamma must give one image per generator of H_L");
    }
    let hl = q_l.span(&d.h_l);
    let hn = q_n.span(&d.h_n);
    let img = q_n.span(&d.gamma);
    if img.order() != hn.order() || d.gamma.iter().any(|g| !hn.contains(g)) {
        return invalid("gamma is not onto H_N");
    }
    let s = sum_form(&q_l, &q_n);
    let graph: Vec<Element> = d.h_l.iter().zip(&d.gamma).map(|(a, b)| concat(a, b)).collect();
    let gamma_group = s.span(&graph);
    if gamma_group.order() != hl.order() || hl.order() != hn.order() {
        return invalid(format!(
            "gamma is not bijective (|H_L| = {}, |H_N| = {}, |graph| = {})",
            hl.order(),
            hn.order(),
            gamma_group.order()
        ));
    }
    for (i, x) in graph.iter().enumerate() {
        if s.q_num(x) != 0 {
            return invalid(format!("gamma does not preserve q on generator {i}"));
        }
        for (j, y) in graph[..i].iter().enumerate() {
            if s.b_num(x, y) != 0 {
                return invalid(format!("gamma does not preserve b on generators {j}, {i}"));
            }
        }
    }
    if d.k_rank != 10 - k {
        return invalid(format!("K must have rank {} = 10 - k, got {}", 10 - k, d.k_rank));
    }
    if d.k_signature != (0, d.k_rank) {
        return invalid(format!("K must be negative definite, got signature {:?}", d.k_signature));
    }
    let sub = s.quotient(&gamma_group)?;
    let neg_k = d.q_k.negate();
    if !d.delta.verify(&neg_k, &sub.form) {
        return invalid("delta is not an isometry from -q_K onto the glued form");
    }
    let report = existence_report((0, d.k_rank as i64), &d.q_k)?;
    if !report.verdict() {
        return Err(Error::ExistenceFails(format!("no even lattice with the K-invariants: {report:?}")));
    }
    Ok(())
}

/// Boolean form of [`check_embedding_datum`].
pub fn verify_embedding_datum(l: &Lattice, d: &EmbeddingDatum) -> bool {
    check_embedding_datum(l, d).is_ok()
}

/// Greedy generating set of the span of `elements`.
fn generators_of(f: &FiniteQuadraticForm, elements: &[Element]) -> Vec<usize> {
    let mut picked: Vec<usize> = Vec::new();
    let mut gens: Vec<Element> = Vec::new();
    for (i, x) in elements.iter().enumerate() {
        if f.is_zero_element(x) || f.span(&gens).contains(x) {
            continue;
        }
        gens.push(x.clone());
        picked.push(i);
    }
    picked
}

/// The datum of a concrete embedding: `H_L = (N* ∩ L⊗Q)/L`, `γ` the induced
/// map into `N*/N`, `K` the orthogonal complement and `δ` found by search.
pub fn datum_from_embedding(emb: &PrimitiveEmbedding) -> Result<EmbeddingDatum> {
    let l = emb.source();
    let dl = discriminant_form(l)?;
    let dn = n_form();
    let gn = enriques_lattice().gram().clone();
    let mut pairs: Vec<(Element, Element)> = Vec::new();
    for a in dl.form.elements(DEFAULT_BOUND)? {
        let (nums, e) = dl.lift(&a);
        let y = emb.images().mul_vec(&nums)?;
        let w = gn.mul_vec(&y)?;
        if w.iter().all(|x| x % e == 0) {
            let wn: Vec<i64> = w.iter().map(|x| x / e).collect();
            pairs.push((a, dn.element_of_pairing(&wn)));
        }
    }
    let firsts: Vec<Element> = pairs.iter().map(|p| p.0.clone()).collect();
    let idx = generators_of(&dl.form, &firsts);
    let h_l: Vec<Element> = idx.iter().map(|&i| pairs[i].0.clone()).collect();
    let gamma: Vec<Element> = idx.iter().map(|&i| pairs[i].1.clone()).collect();
    let k = complement_in_n(emb)?;
    let q_k = discriminant_form(&k)?.form;
    let (_, sub) = glued(&dl.form, &dn.form, &h_l, &gamma)?;
    let delta = q_k
        .negate()
        .find_isomorphism(&sub.form, DEFAULT_NODE_CAP)?
        .ok_or_else(|| Error::DatumInvalid("-q_K is not isometric to the glued form".into()))?;
    Ok(EmbeddingDatum { h_n: gamma.clone(), h_l, gamma, k_rank: k.rank(), k_signature: k.signature(), q_k, delta })
}

/// Condition (*) for a finite-index sublattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarReport {
    pub index: u64,
    pub gcd_ok: bool,
    pub ell_bounds_ok: bool,
    /// Primes `p ∤ 2·discr(L)` dividing `|A_{L'}|`, where the bound on
    /// `ℓ(A_{L',p})` was checked.
    pub witness_primes: Vec<u64>,
}

impl StarReport {
    pub fn verdict(&self) -> bool {
        self.gcd_ok && self.ell_bounds_ok
    }
}

fn check_inclusion(l: &Lattice, sub: &Sublattice) -> Result<()> {
    let b = &sub.basis;
    if b.rows() != l.rank() || b.cols() != l.rank() {
        return Err(Error::NotSublattice(format!("basis must be {0}x{0}", l.rank())));
    }
    if l.gram().congruence(b)? != *sub.lattice.gram() {
        return Err(Error::NotSublattice("Gram matrix does not match the inclusion".into()));
    }
    let det = b.det()?;
    if det.is_zero() || det.abs().to_u64() != Some(sub.index) {
        return Err(Error::NotSublattice(format!("index {} does not match |det| = {}", sub.index, det.abs())));
    }
    Ok(())
}

pub fn condition_star(l: &Lattice, sub: &Sublattice) -> Result<StarReport> {
    check_inclusion(l, sub)?;
    let discr = l.discr()?;
    let index = sub.index;
    let gcd_ok = (2 * discr).gcd(&index) == 1;
    let a = discriminant_form(&sub.lattice)?.form;
    let bound = 12 - sub.lattice.rank() as i64;
    let witness_primes: Vec<u64> = a.primes().into_iter().filter(|&p| (2 * discr) % p != 0).collect();
    let ell_bounds_ok = witness_primes.iter().all(|&p| (a.ell_p(p) as i64) < bound);
    Ok(StarReport { index, gcd_ok, ell_bounds_ok, witness_primes })
}

/// Small vectors tried as the pivot `v₁`: basis vectors, then `eᵢ ± eⱼ`.
fn pivot_candidates(n: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for i in 0..n {
        let mut v = vec![0; n];
        v[i] = 1;
        out.push(v);
    }
    for i in 0..n {
        for j in i + 1..n {
            for s in [1, -1] {
                let mut v = vec![0; n];
                v[i] = 1;
                v[j] = s;
                out.push(v);
            }
        }
    }
    out
}

/// `L' = {x ∈ L : (x.v₁) ≡ 0 mod p}` for the first small `v₁` with
/// `(v₁²) ≢ 0 mod p`; index `p` with `A_{L',p} ≅ Z/p²`.
pub fn index_p_sublattice(l: &Lattice, p: u64) -> Result<Sublattice> {
    if p == 2 || !is_prime(p) {
        return Err(Error::BadPrime { p });
    }
    let discr = l.discr()?;
    if (2 * discr) % p == 0 {
        return Err(Error::BadPrime { p });
    }
    let pi = p as i64;
    let n = l.rank();
    let g = l.gram();
    let v1 = pivot_candidates(n)
        .into_iter()
        .find(|v| g.bilinear(v, v).rem_euclid(p as i128) != 0)
        .ok_or(Error::NoUnitVector { p })?;
    let w: Vec<i64> = g.mul_vec(&v1)?.into_iter().map(|x| x.rem_euclid(pi)).collect();
    let j = w.iter().position(|&x| x != 0).expect("(v1.v1) is a unit");
    let inv = modinv(w[j], pi);
    let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut c = vec![BigInt::zero(); n];
        if i == j {
            c[j] = BigInt::from(pi);
        } else {
            c[i] = BigInt::one();
            c[j] = BigInt::from(-(w[i] * inv).rem_euclid(pi));
        }
        cols.push(c);
    }
    let basis = IntMatrix::from_big(&hnf_basis(&big_transpose(&cols), n)?)?;
    sublattice_from_gram_change(l, &basis)
}

fn modinv(a: i64, m: i64) -> i64 {
    let e = a.extended_gcd(&m);
    e.x.rem_euclid(m)
}

/// CRT multiplier `c ≡ 1 mod 2|A_L|`, `c ≡ 0 mod m` (coprime moduli).
fn crt_multiplier(order: i64, m: i64) -> i64 {
    let n = 2 * order;
    // c = m·t with m·t ≡ 1 mod n
    m * modinv(m.rem_euclid(n), n)
}

/// Image in `A_{L'}` of an element of `A_L` under the canonical splitting
/// `A_{L'} ≅ A_L ⊕ A_new` (index prime to `2|A_L|`).
fn push_to_sublattice(dl: &DiscriminantForm, l: &Lattice, dl2: &DiscriminantForm, sub: &Sublattice, c: i64, a: &[i64]) -> Result<Element> {
    let (nums, e) = dl.lift(a);
    let w = l.gram().mul_vec(&nums)?;
    let wl: Vec<i64> = w.iter().map(|x| x / e).collect();
    let wl2 = sub.basis.transpose().mul_vec(&wl)?;
    Ok(dl2.element_of_pairing(&wl2.iter().map(|x| x * c).collect::<Vec<_>>()))
}

/// The datum for a (*)-sublattice `L' ⊂ L`: same glue, `q_{K'} = q_K ⊕ −q_new`
/// and `δ' = (δ, id)`.
pub fn transfer_datum_down(l: &Lattice, sub: &Sublattice, d: &EmbeddingDatum) -> Result<EmbeddingDatum> {
    let star = condition_star(l, sub)?;
    if !star.verdict() {
        return Err(Error::StarViolated);
    }
    check_embedding_datum(l, d)?;
    if sub.index == 1 && sub.basis == IntMatrix::identity(l.rank()) {
        return Ok(d.clone());
    }
    let dl = discriminant_form(l)?;
    let dl2 = discriminant_form(&sub.lattice)?;
    let dn = n_form();
    let m = sub.index as i64;
    let c = crt_multiplier(dl.form.order() as i64, m);
    let phi = |a: &[i64]| push_to_sublattice(&dl, l, &dl2, sub, c, a);

    let new_primes = prime_factors(sub.index);
    let mut new_gens = Vec::new();
    let mut new_orders = Vec::new();
    for &p in &new_primes {
        let (part, gens) = dl2.form.p_part_with_generators(p);
        new_orders.extend_from_slice(part.orders());
        new_gens.extend(gens);
    }
    let q_new = dl2.form.restrict_to(&new_gens, &new_orders)?;
    let q_k2 = d.q_k.direct_sum(&q_new.negate());

    let h_l2: Vec<Element> = d.h_l.iter().map(|a| phi(a)).collect::<Result<_>>()?;
    let (_, old) = glued(&dl.form, &dn.form, &d.h_l, &d.gamma)?;
    let (s2, new) = glued(&dl2.form, &dn.form, &h_l2, &d.gamma)?;
    let (s1, _) = glued(&dl.form, &dn.form, &d.h_l, &d.gamma)?;
    let nl = dl.form.ngens();
    let mut images = Vec::new();
    for z in &d.delta.images {
        let x = old.lift(&s1, z);
        let pushed = concat(&phi(&x[..nl])?, &x[nl..]);
        images.push(new.project(&s2.reduce(&pushed))?);
    }
    let zero_n = dn.form.zero();
    for g in &new_gens {
        images.push(new.project(&concat(g, &zero_n))?);
    }
    let out = EmbeddingDatum {
        h_l: h_l2,
        h_n: d.h_n.clone(),
        gamma: d.gamma.clone(),
        k_rank: d.k_rank,
        k_signature: d.k_signature,
        q_k: q_k2,
        delta: FormIsometry { images },
    };
    check_embedding_datum(&sub.lattice, &out).map_err(|e| match e {
        Error::ExistenceFails(s) => Error::ExistenceFails(format!("K' invariants after descent: {s}")),
        other => other,
    })?;
    Ok(out)
}

/// Image in `A_L = I^⊥/I` of an element of `I^⊥ ⊂ A_{L'}`.
fn pull_to_overlattice(dl2: &DiscriminantForm, sub: &Sublattice, dl: &DiscriminantForm, a: &[i64]) -> Result<Element> {
    let (nums, e) = dl2.lift(a);
    let w2 = sub.lattice.gram().mul_vec(&nums)?;
    let bt_inv = rational_inverse(&sub.basis.transpose())?;
    let mut wl = Vec::with_capacity(w2.len());
    for row in &bt_inv {
        let s: num_rational::BigRational = row.iter().zip(&w2).map(|(r, &x)| r * BigInt::from(x)).sum();
        let s = s / BigInt::from(e);
        if !s.is_integer() {
            return Err(Error::NotSubgroup("element is not orthogonal to the overlattice subgroup".into()));
        }
        wl.push(s.to_integer().to_i64().ok_or(Error::Overflow("overlattice pairing"))?);
    }
    Ok(dl.element_of_pairing(&wl))
}

/// The datum for an odd-index overlattice `L ⊃ L'`: the subgroup
/// `I = L/L' ⊂ A_{L'}` is carried by `δ'` into `A_{K'}` and `K` is the
/// corresponding overlattice of `K'`.
pub fn transfer_datum_up(sub: &Sublattice, l: &Lattice, d2: &EmbeddingDatum) -> Result<EmbeddingDatum> {
    check_inclusion(l, sub)?;
    if sub.index.is_multiple_of(2) {
        return Err(Error::EvenIndex(sub.index));
    }
    check_embedding_datum(&sub.lattice, d2)?;
    if sub.index == 1 && sub.basis == IntMatrix::identity(l.rank()) {
        return Ok(d2.clone());
    }
    let dl = discriminant_form(l)?;
    let dl2 = discriminant_form(&sub.lattice)?;
    let dn = n_form();
    let bt = sub.basis.transpose();
    let zero_n = dn.form.zero();

    let (s2, q2) = glued(&dl2.form, &dn.form, &d2.h_l, &d2.gamma)?;
    let neg_k2 = d2.q_k.negate();
    let inv = d2.delta.inverse(&neg_k2, &q2.form)?;
    let mut j_gens = Vec::new();
    for i in 0..l.rank() {
        let col: Vec<i64> = (0..l.rank()).map(|r| l.gram()[(r, i)]).collect();
        let x = dl2.element_of_pairing(&bt.mul_vec(&col)?);
        let y = q2.project(&s2.reduce(&concat(&x, &zero_n)))?;
        j_gens.push(inv.apply(&q2.form, &neg_k2, &y));
    }
    let j = neg_k2.span(&j_gens);
    if j.order() != sub.index {
        return Err(Error::DatumInvalid(format!("image of L/L' has order {} instead of {}", j.order(), sub.index)));
    }
    let kq = neg_k2.quotient(&j)?;
    let q_k = kq.form.negate();

    let psi = |a: &[i64]| pull_to_overlattice(&dl2, sub, &dl, a);
    let h_l: Vec<Element> = d2.h_l.iter().map(|a| psi(a)).collect::<Result<_>>()?;
    let (s, q) = glued(&dl.form, &dn.form, &h_l, &d2.gamma)?;
    let nl2 = dl2.form.ngens();
    let mut images = Vec::new();
    for t in 0..kq.form.ngens() {
        let z = kq.lift(&neg_k2, &kq.form.generator(t));
        let y = d2.delta.apply(&neg_k2, &q2.form, &z);
        let x = q2.lift(&s2, &y);
        let pulled = concat(&psi(&x[..nl2])?, &x[nl2..]);
        images.push(q.project(&s.reduce(&pulled))?);
    }
    let out = EmbeddingDatum {
        h_l,
        h_n: d2.h_n.clone(),
        gamma: d2.gamma.clone(),
        k_rank: d2.k_rank,
        k_signature: d2.k_signature,
        q_k,
        delta: FormIsometry { images },
    };
    check_embedding_datum(l, &out)?;
    Ok(out)
}

/// Rank of `Hom(L, Z/2) → Hom(L', Z/2)` (restriction along the inclusion),
/// computed as the rank of the basis matrix mod 2.
pub fn restriction_rank_mod2(sub: &Sublattice) -> usize {
    let n = sub.basis.rows();
    let mut rows: Vec<u64> = (0..n)
        .map(|i| (0..sub.basis.cols()).fold(0u64, |m, j| m | ((sub.basis[(i, j)].rem_euclid(2) as u64) << j)))
        .collect();
    let mut rank = 0;
    for bit in 0..sub.basis.cols() {
        if let Some(p) = (rank..rows.len()).find(|&r| rows[r] >> bit & 1 == 1) {
            rows.swap(rank, p);
            for r in 0..rows.len() {
                if r != rank && rows[r] >> bit & 1 == 1 {
                    rows[r] ^= rows[rank];
                }
            }
            rank += 1;
        }
    }
    rank
}
