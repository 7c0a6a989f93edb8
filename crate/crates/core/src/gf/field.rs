//! Exact arithmetic in F_p and F_{p^k} for odd p.
//!
//! Every field is pinned to a canonical modulus: the lexicographically
//! smallest monic irreducible of its degree, comparing coefficient vectors
//! from the constant term up with F_p ordered 0 < 1 < ... < p-1. Two calls
//! to `field(p, k)` therefore always agree, with no external tables.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Description of F_{p^k}: odd prime p, degree k, canonical modulus.
///
/// The modulus is stored in ascending coefficient order (length k+1, monic).
/// Serialization keeps only `{p, k}`; the modulus is re-derived on load.
#[derive(Debug)]
pub struct FieldDesc {
    p: u64,
    k: usize,
    modulus: Vec<u64>,
}

pub type Field = Arc<FieldDesc>;

fn registry() -> &'static Mutex<HashMap<(u64, usize), Field>> {
    static REGISTRY: OnceLock<Mutex<HashMap<(u64, usize), Field>>> = OnceLock::new();
    REGISTRY.get_or_init(|| Mutex::new(HashMap::new()))
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Obtain the canonical F_{p^k}. Results are cached, so repeated calls
/// return the same `Arc` and identical moduli.
pub fn field(p: u64, k: usize) -> Result<Field> {
    if k == 0 {
        return Err(Error::ZeroDegree);
    }
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if let Some(f) = registry().lock().unwrap().get(&(p, k)) {
        return Ok(f.clone());
    }
    let modulus = canonical_modulus(p, k);
    let desc = Arc::new(FieldDesc { p, k, modulus });
    registry().lock().unwrap().insert((p, k), desc.clone());
    Ok(desc)
}

/// The lexicographically smallest monic irreducible of degree k over F_p.
/// Candidates are enumerated with the constant term most significant, so
/// the first irreducible found is the canonical one.
fn canonical_modulus(p: u64, k: usize) -> Vec<u64> {
    if k == 1 {
        // x itself: the smallest monic linear polynomial.
        return vec![0, 1];
    }
    let mut low = vec![0u64; k];
    loop {
        let mut candidate = low.clone();
        candidate.push(1);
        if is_irreducible_raw(p, &candidate) {
            return candidate;
        }
        // increment with the last coordinate fastest (constant term is the
        // most significant digit of the lexicographic order)
        let mut i = k;
        loop {
            assert!(i > 0, "no irreducible of degree {k} over F_{p}");
            i -= 1;
            low[i] += 1;
            if low[i] < p {
                break;
            }
            low[i] = 0;
        }
    }
}

/// Irreducibility of a monic polynomial over F_p, via the standard
/// Frobenius criterion: f of degree k is irreducible iff x^(p^k) = x mod f
/// and gcd(x^(p^(k/l)) - x, f) = 1 for every prime l | k.
fn is_irreducible_raw(p: u64, f: &[u64]) -> bool {
    let k = f.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let xq = |e: usize| -> Vec<u64> {
        // x^(p^e) mod f by repeated p-th powering
        let mut acc = vec![0, 1]; // x
        for _ in 0..e {
            acc = raw_pow_mod(p, &acc, p as u128, f);
        }
        acc
    };
    // x^(p^k) == x mod f
    let mut full = xq(k);
    full = raw_sub(p, &full, &[0, 1]);
    if !full.is_empty() {
        return false;
    }
    let mut rem = k;
    let mut l = 2;
    while l * l <= rem {
        if rem % l == 0 {
            let g = raw_sub(p, &xq(k / l), &[0, 1]);
            if raw_gcd_deg(p, &g, f) != 0 {
                return false;
            }
            while rem % l == 0 {
                rem /= l;
            }
        }
        l += 1;
    }
    if rem > 1 {
        let g = raw_sub(p, &xq(k / rem), &[0, 1]);
        if raw_gcd_deg(p, &g, f) != 0 {
            return false;
        }
    }
    true
}

// Minimal raw polynomial helpers over F_p for bootstrapping the modulus
// search (the full Polynomial type needs a Field, which needs a modulus).

fn raw_trim(v: &mut Vec<u64>) {
    while let Some(&c) = v.last() {
        if c == 0 {
            v.pop();
        } else {
            break;
        }
    }
}

fn raw_sub(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = (x + p - y) % p;
    }
    raw_trim(&mut out);
    out
}

fn raw_mul_mod(p: u64, a: &[u64], b: &[u64], f: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut prod = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] += (x as u128) * (y as u128);
        }
    }
    let mut prod: Vec<u64> = prod.iter().map(|&c| (c % p as u128) as u64).collect();
    // reduce modulo monic f
    let deg_f = f.len() - 1;
    while prod.len() > deg_f {
        let lead = *prod.last().unwrap();
        let shift = prod.len() - 1 - deg_f;
        if lead != 0 {
            for (i, &fc) in f.iter().enumerate() {
                let idx = shift + i;
                prod[idx] = (prod[idx] + p - (lead as u128 * fc as u128 % p as u128) as u64 % p) % p;
            }
        }
        prod.pop();
        raw_trim(&mut prod);
        if prod.len() <= deg_f {
            break;
        }
    }
    raw_trim(&mut prod);
    prod
}

fn raw_pow_mod(p: u64, base: &[u64], mut e: u128, f: &[u64]) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = raw_mul_mod(p, &acc, &b, f);
        }
        b = raw_mul_mod(p, &b, &b, f);
        e >>= 1;
    }
    acc
}

fn raw_rem(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    raw_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = raw_inv_scalar(p, *b.last().unwrap());
    while r.len() > db {
        let lead = *r.last().unwrap();
        if lead != 0 {
            let c = lead as u128 * lead_inv as u128 % p as u128;
            let shift = r.len() - 1 - db;
            for (i, &bc) in b.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p - (c * bc as u128 % p as u128) as u64) % p;
            }
        }
        r.pop();
        raw_trim(&mut r);
    }
    r
}

fn raw_gcd_deg(p: u64, a: &[u64], b: &[u64]) -> usize {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    raw_trim(&mut x);
    raw_trim(&mut y);
    while !y.is_empty() {
        let r = raw_rem(p, &x, &y);
        x = y;
        y = r;
    }
    if x.is_empty() {
        0
    } else {
        x.len() - 1
    }
}

fn raw_inv_scalar(p: u64, a: u64) -> u64 {
    // Fermat
    let mut acc = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    acc
}

impl FieldDesc {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Field size q = p^k.
    pub fn q(&self) -> u128 {
        (self.p as u128).pow(self.k as u32)
    }

    /// Canonical modulus, ascending coefficients over F_p.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn same_field(&self, other: &FieldDesc) -> bool {
        self.p == other.p && self.k == other.k
    }
}

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other)
    }
}
impl Eq for FieldDesc {}

/// Element of F_{p^k}: fully reduced ascending coefficient vector of
/// length k over F_p.
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    coeffs: Vec<u64>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_field(&other.field) && self.coeffs == other.coeffs
    }
}
impl Eq for FieldElement {}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.p.hash(state);
        self.field.k.hash(state);
        self.coeffs.hash(state);
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on coefficient vectors, constant term first: the one
/// total order reused for every canonicalization choice.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs.cmp(&other.coeffs)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({},{}){:?}", self.field.p, self.field.k, self.coeffs)
    }
}

impl fmt::Display for FieldElement {
    fmt_display_body!();
}

macro_rules! fmt_display_body {
    () => {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if self.field.k == 1 {
                write!(f, "{}", self.coeffs[0])
            } else {
                write!(
                    f,
                    "[{}]",
                    self.coeffs
                        .iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            }
        }
    };
}
use fmt_display_body;

impl FieldDesc {
    /// Build an element from reduced coefficients (must already be in [0, p)).
    pub fn element(self: &Field, coeffs: Vec<u64>) -> Result<FieldElement> {
        if coeffs.len() != self.k {
            return Err(Error::InvalidInput(format!(
                "expected {} coefficients, got {}",
                self.k,
                coeffs.len()
            )));
        }
        for &c in &coeffs {
            if c >= self.p {
                return Err(Error::CoefficientOutOfRange(c, self.p));
            }
        }
        Ok(FieldElement { field: self.clone(), coeffs })
    }

    /// Element from an integer (reduced mod p), embedded in the prime field.
    pub fn from_int(self: &Field, c: i64) -> FieldElement {
        let p = self.p as i64;
        let c = c.rem_euclid(p) as u64;
        let mut coeffs = vec![0; self.k];
        coeffs[0] = c;
        FieldElement { field: self.clone(), coeffs }
    }

    pub fn zero(self: &Field) -> FieldElement {
        FieldElement { field: self.clone(), coeffs: vec![0; self.k] }
    }

    pub fn one(self: &Field) -> FieldElement {
        self.from_int(1)
    }

    /// The canonical generator: the residue class of x, a root of the
    /// canonical modulus. For k = 1 this is zero (x mod x), so callers
    /// needing a multiplicative generator should not use this on F_p.
    pub fn generator(self: &Field) -> FieldElement {
        let mut coeffs = vec![0; self.k];
        if self.k > 1 {
            coeffs[1] = 1;
        }
        FieldElement { field: self.clone(), coeffs }
    }

    /// All q elements in lexicographic order.
    pub fn elements(self: &Field) -> Vec<FieldElement> {
        let mut out = Vec::with_capacity(self.q() as usize);
        let mut coeffs = vec![0u64; self.k];
        loop {
            out.push(FieldElement { field: self.clone(), coeffs: coeffs.clone() });
            let mut i = self.k;
            let mut done = true;
            while i > 0 {
                i -= 1;
                coeffs[i] += 1;
                if coeffs[i] < self.p {
                    done = false;
                    break;
                }
                coeffs[i] = 0;
            }
            if done {
                break;
            }
        }
        out.sort();
        out
    }
}

/// The arithmetic operation selector for [`arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked field arithmetic: errors on field mismatch and division by zero.
pub fn arith(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement> {
    a.check_same_field(b)?;
    match op {
        ArithOp::Add => Ok(a.add_ref(b)),
        ArithOp::Sub => Ok(a.sub_ref(b)),
        ArithOp::Mul => Ok(a.mul_ref(b)),
        ArithOp::Div => {
            let inv = b.inv()?;
            Ok(a.mul_ref(&inv))
        }
    }
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn check_same_field(&self, other: &FieldElement) -> Result<()> {
        if self.field.same_field(&other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                p0: self.field.p,
                k0: self.field.k,
                p1: other.field.p,
                k1: other.field.k,
            })
        }
    }

    fn assert_same_field(&self, other: &FieldElement) {
        assert!(
            self.field.same_field(&other.field),
            "field mismatch: F_{}^{} vs F_{}^{}",
            self.field.p,
            self.field.k,
            other.field.p,
            other.field.k
        );
    }

    pub fn add_ref(&self, other: &FieldElement) -> FieldElement {
        self.assert_same_field(other);
        let p = self.field.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| (a + b) % p)
            .collect();
        FieldElement { field: self.field.clone(), coeffs }
    }

    pub fn sub_ref(&self, other: &FieldElement) -> FieldElement {
        self.assert_same_field(other);
        let p = self.field.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| (a + p - b) % p)
            .collect();
        FieldElement { field: self.field.clone(), coeffs }
    }

    pub fn neg_ref(&self) -> FieldElement {
        let p = self.field.p;
        let coeffs = self.coeffs.iter().map(|&a| (p - a) % p).collect();
        FieldElement { field: self.field.clone(), coeffs }
    }

    pub fn mul_ref(&self, other: &FieldElement) -> FieldElement {
        self.assert_same_field(other);
        let p = self.field.p;
        let k = self.field.k;
        if k == 1 {
            let c = self.coeffs[0] as u128 * other.coeffs[0] as u128 % p as u128;
            return FieldElement { field: self.field.clone(), coeffs: vec![c as u64] };
        }
        let prod = raw_mul_mod(p, &self.coeffs, &other.coeffs, &self.field.modulus);
        let mut coeffs = prod;
        coeffs.resize(k, 0);
        FieldElement { field: self.field.clone(), coeffs }
    }

    pub fn scale(&self, c: i64) -> FieldElement {
        self.mul_ref(&self.field.from_int(c))
    }

    /// Multiplicative inverse via the extended Euclidean algorithm on the
    /// canonical modulus.
    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero { p: self.field.p, k: self.field.k });
        }
        let p = self.field.p;
        if self.field.k == 1 {
            return Ok(FieldElement {
                field: self.field.clone(),
                coeffs: vec![raw_inv_scalar(p, self.coeffs[0])],
            });
        }
        // extended gcd of (self, modulus) in F_p[x]
        let mut r0: Vec<u64> = self.coeffs.clone();
        raw_trim(&mut r0);
        let mut r1 = self.field.modulus.clone();
        let mut s0 = vec![1u64];
        let mut s1: Vec<u64> = vec![];
        while !r1.is_empty() {
            let (quot, rem) = raw_divmod(p, &r0, &r1);
            let new_s = raw_sub(p, &s0, &raw_mul(p, &quot, &s1));
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = new_s;
        }
        // r0 = gcd (a nonzero constant since modulus is irreducible)
        debug_assert_eq!(r0.len(), 1);
        let c_inv = raw_inv_scalar(p, r0[0]);
        let mut coeffs: Vec<u64> =
            s0.iter().map(|&x| (x as u128 * c_inv as u128 % p as u128) as u64).collect();
        coeffs.resize(self.field.k, 0);
        Ok(FieldElement { field: self.field.clone(), coeffs })
    }

    pub fn div_ref(&self, other: &FieldElement) -> Result<FieldElement> {
        let inv = other.inv()?;
        Ok(self.mul_ref(&inv))
    }

    pub fn pow(&self, mut e: u128) -> FieldElement {
        let mut acc = self.field.one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&b);
            }
            b = b.mul_ref(&b);
            e >>= 1;
        }
        acc
    }

    /// a^(p^e). Computed by e successive p-th powers, so the exponent never
    /// needs to fit an integer type. frobenius(a, k) = a.
    pub fn frobenius(&self, e: usize) -> FieldElement {
        let mut acc = self.clone();
        for _ in 0..(e % self.field.k.max(1)) {
            acc = acc.pow(self.field.p as u128);
        }
        acc
    }

    /// Relative trace down to F_{p^sub_k}: sum of the [k/sub_k] conjugates
    /// under x -> x^(p^sub_k). Returned as an element of the subfield.
    pub fn trace_to(&self, sub_k: usize) -> Result<FieldElement> {
        let (tr, _) = self.trace_norm(sub_k)?;
        Ok(tr)
    }

    pub fn norm_to(&self, sub_k: usize) -> Result<FieldElement> {
        let (_, nm) = self.trace_norm(sub_k)?;
        Ok(nm)
    }

    /// Relative trace and norm down to the degree-sub_k subfield.
    pub fn trace_norm(&self, sub_k: usize) -> Result<(FieldElement, FieldElement)> {
        let k = self.field.k;
        if sub_k == 0 || k % sub_k != 0 {
            return Err(Error::NotADivisor(sub_k, k));
        }
        let steps = k / sub_k;
        let mut tr = self.clone();
        let mut nm = self.clone();
        let mut conj = self.clone();
        for _ in 1..steps {
            conj = conj.frobenius(sub_k);
            tr = tr.add_ref(&conj);
            nm = nm.mul_ref(&conj);
        }
        let sub = field(self.field.p, sub_k)?;
        Ok((project_to_subfield(&tr, &sub)?, project_to_subfield(&nm, &sub)?))
    }

    /// The quadratic character: +1 for nonzero squares, -1 for non-squares,
    /// computed as a^((q-1)/2). Errors on zero.
    pub fn legendre(&self) -> Result<i8> {
        if self.is_zero() {
            return Err(Error::LegendreOfZero);
        }
        let e = (self.field.q() - 1) / 2;
        let v = self.pow(e);
        if v == self.field.one() {
            Ok(1)
        } else {
            debug_assert_eq!(v, self.field.from_int(-1));
            Ok(-1)
        }
    }

    /// Canonical embedding into F_{p^K} for k | K: the canonical generator
    /// maps to the lexicographically smallest root of the source modulus in
    /// the target field, and the rest follows by ring homomorphism.
    pub fn embed(&self, big_k: usize) -> Result<FieldElement> {
        let k = self.field.k;
        if big_k % k != 0 {
            return Err(Error::NotADivisor(k, big_k));
        }
        let target = field(self.field.p, big_k)?;
        if big_k == k {
            return Ok(self.clone());
        }
        let image = generator_image(&self.field, &target)?;
        let mut acc = target.zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul_ref(&image).add_ref(&target.from_int(c as i64));
        }
        Ok(acc)
    }
}

/// Cache of canonical generator images for embeddings between fields.
fn embed_cache() -> &'static Mutex<HashMap<(u64, usize, usize), FieldElement>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize, usize), FieldElement>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn generator_image(small: &Field, big: &Field) -> Result<FieldElement> {
    let key = (small.p(), small.k(), big.k());
    if let Some(img) = embed_cache().lock().unwrap().get(&key) {
        return Ok(img.clone());
    }
    // roots of the source modulus inside the target field, lex-smallest wins
    let modulus_poly: Vec<FieldElement> =
        small.modulus().iter().map(|&c| big.from_int(c as i64)).collect();
    let roots = crate::gf::roots::roots_of_monic(big, &modulus_poly)?;
    let img = roots.into_iter().min().expect("modulus has roots in every containing field");
    embed_cache().lock().unwrap().insert(key, img.clone());
    Ok(img)
}

/// Express an element of F_{p^K} that lies in the canonically embedded copy
/// of F_{p^k} in coordinates of that subfield. Errors if the element is not
/// fixed by the sub-Frobenius.
pub fn project_to_subfield(a: &FieldElement, sub: &Field) -> Result<FieldElement> {
    let big = a.field();
    if big.k() % sub.k() != 0 {
        return Err(Error::NotADivisor(sub.k(), big.k()));
    }
    if big.k() == sub.k() {
        return Ok(a.clone());
    }
    if a.frobenius(sub.k()) != *a {
        return Err(Error::NotInSubfield);
    }
    // write a in the F_p-span of the embedded subfield basis 1, h, ..., h^(sub_k - 1)
    let h = sub.generator().embed(big.k())?;
    let mut cols: Vec<Vec<u64>> = Vec::with_capacity(sub.k());
    let mut pw = big.one();
    for _ in 0..sub.k() {
        cols.push(pw.coeffs().to_vec());
        pw = pw.mul_ref(&h);
    }
    // solve the (big.k x sub.k) system over F_p by Gaussian elimination
    let p = big.p();
    let rows = big.k();
    let ncols = sub.k();
    let mut aug: Vec<Vec<u64>> = (0..rows)
        .map(|r| {
            let mut row: Vec<u64> = (0..ncols).map(|c| cols[c][r]).collect();
            row.push(a.coeffs()[r]);
            row
        })
        .collect();
    let mut piv_rows = Vec::new();
    let mut r0 = 0;
    for c in 0..ncols {
        let Some(pr) = (r0..rows).find(|&r| aug[r][c] != 0) else {
            return Err(Error::NotInSubfield);
        };
        aug.swap(r0, pr);
        let inv = raw_inv_scalar(p, aug[r0][c]);
        for x in aug[r0].iter_mut() {
            *x = (*x as u128 * inv as u128 % p as u128) as u64;
        }
        for r in 0..rows {
            if r != r0 && aug[r][c] != 0 {
                let factor = aug[r][c];
                for j in 0..=ncols {
                    let sub_val = aug[r0][j] as u128 * factor as u128 % p as u128;
                    aug[r][j] = ((aug[r][j] as u128 + p as u128 - sub_val) % p as u128) as u64;
                }
            }
        }
        piv_rows.push(r0);
        r0 += 1;
    }
    for r in r0..rows {
        if aug[r][ncols] != 0 {
            return Err(Error::NotInSubfield);
        }
    }
    let coeffs: Vec<u64> = (0..ncols).map(|c| aug[piv_rows[c]][ncols]).collect();
    sub.element(coeffs)
}

fn raw_mul(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut prod = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] += (x as u128) * (y as u128);
        }
    }
    let mut out: Vec<u64> = prod.iter().map(|&c| (c % p as u128) as u64).collect();
    raw_trim(&mut out);
    out
}

fn raw_divmod(p: u64, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    raw_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = raw_inv_scalar(p, *b.last().unwrap());
    if r.len() <= db {
        return (vec![], r);
    }
    let mut quot = vec![0u64; r.len() - db];
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            let c = (lead as u128 * lead_inv as u128 % p as u128) as u64;
            quot[shift] = c;
            for (i, &bc) in b.iter().enumerate() {
                let idx = shift + i;
                let sub_val = c as u128 * bc as u128 % p as u128;
                r[idx] = ((r[idx] as u128 + p as u128 - sub_val) % p as u128) as u64;
            }
        }
        r.pop();
        raw_trim(&mut r);
    }
    raw_trim(&mut quot);
    (quot, r)
}

// std::ops impls panic on field mismatch; use `arith` / inherent методы for
// checked paths.
impl std::ops::Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.add_ref(rhs)
    }
}
impl std::ops::Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.sub_ref(rhs)
    }
}
impl std::ops::Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.mul_ref(rhs)
    }
}
impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_modulus_is_reproducible() {
        let f1 = field(3, 2).unwrap();
        let f2 = field(3, 2).unwrap();
        assert_eq!(f1.modulus(), f2.modulus());
        // lexicographically smallest irreducible quadratic over F_3 is x^2 + 1
        assert_eq!(f1.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn rejects_even_characteristic_and_non_primes() {
        assert!(field(2, 1).is_err());
        assert!(field(9, 1).is_err());
        assert!(field(3, 0).is_err());
    }

    #[test]
    fn arith_examples() {
        let f3 = field(3, 1).unwrap();
        let two = f3.from_int(2);
        assert_eq!(arith(&two, &two, ArithOp::Add).unwrap(), f3.from_int(1));
        let a = f3.from_int(2);
        assert_eq!(arith(&a, &a, ArithOp::Div).unwrap(), f3.one());
        // g * g in F_9 reduces to -1 by the canonical modulus x^2 + 1
        let f9 = field(3, 2).unwrap();
        let g = f9.generator();
        assert_eq!(arith(&g, &g, ArithOp::Mul).unwrap(), f9.from_int(-1));
    }

    #[test]
    fn division_by_zero_and_mismatch_error() {
        let f3 = field(3, 1).unwrap();
        let f5 = field(5, 1).unwrap();
        assert!(arith(&f3.one(), &f3.zero(), ArithOp::Div).is_err());
        assert!(arith(&f3.one(), &f5.one(), ArithOp::Add).is_err());
    }

    #[test]
    fn frobenius_examples() {
        let f3 = field(3, 1).unwrap();
        let a = f3.from_int(2);
        assert_eq!(a.frobenius(1), a);
        let f9 = field(3, 2).unwrap();
        let g = f9.generator();
        assert_eq!(g.frobenius(2), g);
        assert_eq!(g.frobenius(1), g.pow(3));
        // order-2 automorphism fixing exactly F_3
        assert_ne!(g.frobenius(1), g);
    }

    #[test]
    fn trace_norm_examples() {
        let f3 = field(3, 1).unwrap();
        let a = f3.from_int(2);
        let (tr, nm) = a.trace_norm(1).unwrap();
        assert_eq!(tr, a);
        assert_eq!(nm, a);

        let f9 = field(3, 2).unwrap();
        let g = f9.generator();
        let (tr, nm) = g.trace_norm(1).unwrap();
        let conj = g.frobenius(1);
        assert_eq!(tr.embed(2).unwrap(), g.add_ref(&conj));
        assert_eq!(nm.embed(2).unwrap(), g.mul_ref(&conj));
    }

    #[test]
    fn norm_is_surjective_on_f9() {
        let f3 = field(3, 1).unwrap();
        let f9 = field(3, 2).unwrap();
        for c in [1i64, 2] {
            let target = f3.from_int(c);
            let hit = f9
                .elements()
                .into_iter()
                .filter(|a| !a.is_zero())
                .any(|a| a.norm_to(1).unwrap() == target);
            assert!(hit, "norm misses {c}");
        }
    }

    #[test]
    fn legendre_examples() {
        let f7 = field(7, 1).unwrap();
        assert_eq!(f7.one().legendre().unwrap(), 1);
        // squares mod 7 are {1, 2, 4}
        assert_eq!(f7.from_int(3).legendre().unwrap(), -1);
        assert!(f7.zero().legendre().is_err());
        // a multiplicative generator of F_9 is a non-square
        let f9 = field(3, 2).unwrap();
        let gen = f9
            .elements()
            .into_iter()
            .find(|a| {
                !a.is_zero() && (1..8).all(|e| a.pow(e) != f9.one())
            })
            .unwrap();
        assert_eq!(gen.legendre().unwrap(), -1);
    }

    #[test]
    fn embed_preserves_prime_field_and_squares() {
        let f3 = field(3, 1).unwrap();
        let two = f3.from_int(2);
        let lifted = two.embed(2).unwrap();
        let f9 = field(3, 2).unwrap();
        assert_eq!(lifted, f9.from_int(2));
        // every element becomes a square in its quadratic extension
        for q in [(3u64, 1usize), (5, 1), (7, 1), (3, 2), (5, 2)] {
            let f = field(q.0, q.1).unwrap();
            if f.q() > 25 {
                continue;
            }
            for a in f.elements() {
                if a.is_zero() {
                    continue;
                }
                assert_eq!(a.embed(2 * q.1).unwrap().legendre().unwrap(), 1);
            }
        }
    }

    #[test]
    fn embed_is_homomorphism() {
        let f9 = field(3, 2).unwrap();
        for a in f9.elements() {
            for b in [f9.generator(), f9.from_int(2)] {
                let lhs = a.mul_ref(&b).embed(4).unwrap();
                let rhs = a.embed(4).unwrap().mul_ref(&b.embed(4).unwrap());
                assert_eq!(lhs, rhs);
                let lhs = a.add_ref(&b).embed(4).unwrap();
                let rhs = a.embed(4).unwrap().add_ref(&b.embed(4).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn embed_then_trace_norm_composes() {
        let f9 = field(3, 2).unwrap();
        for a in f9.elements() {
            let lifted = a.embed(4).unwrap();
            let (tr, nm) = lifted.trace_norm(2).unwrap();
            assert_eq!(tr, a.scale(2));
            assert_eq!(nm, a.pow(2));
        }
    }
}
