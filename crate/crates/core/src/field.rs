//! The tower F_p <= F_q = F_{p^e} <= F_{q^n}.
//!
//! Elements are encoded canonically as base-p integers of their coordinate
//! vector relative to the modulus basis, so every report is reproducible
//! bit-for-bit. Fields up to 2^24 elements get log/antilog tables; larger
//! fields (up to the construction budget) fall back to polynomial
//! arithmetic mod the modulus.

use crate::arith::{is_prime, prime_factors, solve_linear_congruence};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Default cap on |F_{q^n}| for `build_field`.
pub const DEFAULT_FIELD_BUDGET: u64 = 1 << 32;
/// Log/antilog tables are built only below this size.
const TABLE_LIMIT: u64 = 1 << 24;

/// An element of F_{q^n}, as the base-p integer of its coordinate vector.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct FElem(pub u64);

impl std::fmt::Debug for FElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::fmt::Display for FElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub const ZERO: FElem = FElem(0);
pub const ONE: FElem = FElem(1);

/// Serializable description of the tower, carried in every report header.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub e: u32,
    pub n: u32,
    pub modulus: Vec<u64>,
}

struct Tables {
    /// log[enc] = i with g^i = enc, valid for enc != 0.
    log: Vec<u32>,
    /// exp[i] = encoding of g^i for i in 0..2*(size-1), doubled to skip a mod.
    exp: Vec<u32>,
}

pub struct FieldCtx {
    p: u64,
    e: u32,
    n: u32,
    en: u32,
    q: u64,
    size: u64,
    modulus: Vec<u64>,
    generator: FElem,
    tables: Option<Tables>,
    /// p^k mod (size-1) for k in 0..en.
    frob_mult: Vec<u64>,
    /// g^0..g^{n-1}: the fixed F_q-basis of F_{q^n}.
    qn_basis: Vec<FElem>,
    /// u^0..u^{e-1} with u generating F_q*: the F_p-basis of F_q.
    q_basis: Vec<FElem>,
    /// Inverse of the en x en F_p matrix whose column i*e+j holds the digits
    /// of g^i * u^j; turns digit vectors into F_q-coordinates.
    coord_inv: Vec<u64>,
    /// All of F_q, sorted by encoding.
    subfield_q: Vec<FElem>,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FieldCtx(p={}, e={}, n={})", self.p, self.e, self.n)
    }
}

pub fn build_field(p: u64, e: u32, n: u32, modulus: Option<&[u64]>) -> Result<FieldCtx> {
    build_field_with_budget(p, e, n, modulus, DEFAULT_FIELD_BUDGET)
}

pub fn build_field_with_budget(
    p: u64,
    e: u32,
    n: u32,
    modulus: Option<&[u64]>,
    max_size: u64,
) -> Result<FieldCtx> {
    if !is_prime(p) {
        return Err(Error::NonPrimeP(p));
    }
    if e < 1 {
        return Err(Error::BadParams("e must be at least 1".into()));
    }
    if n < 2 {
        return Err(Error::BadParams(
            "n must be at least 2 for PG(1,q^n)".into(),
        ));
    }
    let en = e * n;
    let mut size: u64 = 1;
    for _ in 0..en {
        size = size
            .checked_mul(p)
            .filter(|&s| s <= max_size)
            .ok_or(Error::BudgetExceeded {
                what: "field size p^(e*n)",
                needed: (p as u128).pow(en),
                budget: max_size as u128,
            })?;
    }

    let modulus = match modulus {
        Some(m) => {
            let m = m.iter().map(|&c| c % p).collect::<Vec<_>>();
            if m.len() != en as usize + 1 || *m.last().unwrap() != 1 {
                return Err(Error::ReducibleModulus);
            }
            if !poly_is_irreducible(p, &m) {
                return Err(Error::ReducibleModulus);
            }
            m
        }
        None => smallest_irreducible(p, en),
    };

    let mut ctx = FieldCtx {
        p,
        e,
        n,
        en,
        q: p.pow(e),
        size,
        modulus,
        generator: ZERO,
        tables: None,
        frob_mult: Vec::new(),
        qn_basis: Vec::new(),
        q_basis: Vec::new(),
        coord_inv: Vec::new(),
        subfield_q: Vec::new(),
    };

    ctx.generator = ctx.find_generator();
    if size <= TABLE_LIMIT {
        ctx.build_tables();
    }
    ctx.frob_mult = (0..en)
        .map(|k| {
            let mut m = 1u64;
            for _ in 0..k {
                m = (m as u128 * p as u128 % (size - 1) as u128) as u64;
            }
            m
        })
        .collect();
    ctx.build_coordinate_data();
    Ok(ctx)
}

impl FieldCtx {
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn en(&self) -> u32 {
        self.en
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    /// |F_{q^n}| = q^n.
    pub fn size(&self) -> u64 {
        self.size
    }
    pub fn generator(&self) -> FElem {
        self.generator
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.p,
            e: self.e,
            n: self.n,
            modulus: self.modulus.clone(),
        }
    }

    pub fn elem(&self, enc: u64) -> Result<FElem> {
        if enc < self.size {
            Ok(FElem(enc))
        } else {
            Err(Error::Parse(format!(
                "encoding {} out of range for field of size {}",
                enc, self.size
            )))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FElem> {
        (0..self.size).map(FElem)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FElem> {
        (1..self.size).map(FElem)
    }

    /// 0, g^0, g^1, ... : the canonical sweep order for witness searches.
    pub fn elements_generator_order(&self) -> Vec<FElem> {
        let mut out = Vec::with_capacity(self.size as usize);
        out.push(ZERO);
        let mut acc = ONE;
        for _ in 0..self.size - 1 {
            out.push(acc);
            acc = self.mul(acc, self.generator);
        }
        out
    }

    // ---- basic arithmetic ------------------------------------------------

    pub fn add(&self, a: FElem, b: FElem) -> FElem {
        if self.p == 2 {
            return FElem(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.en {
            let s = (x % self.p + y % self.p) % self.p;
            out += s * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        FElem(out)
    }

    pub fn neg(&self, a: FElem) -> FElem {
        if self.p == 2 {
            return a;
        }
        let mut x = a.0;
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.en {
            let d = x % self.p;
            out += if d == 0 { 0 } else { self.p - d } * place;
            x /= self.p;
            place *= self.p;
        }
        FElem(out)
    }

    pub fn sub(&self, a: FElem, b: FElem) -> FElem {
        if self.p == 2 {
            return FElem(a.0 ^ b.0);
        }
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FElem, b: FElem) -> FElem {
        if a.0 == 0 || b.0 == 0 {
            return ZERO;
        }
        match &self.tables {
            Some(t) => FElem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize] as u64),
            None => {
                let prod =
                    poly_mul_mod(self.p, &self.digits(a.0), &self.digits(b.0), &self.modulus);
                FElem(self.encode(&prod))
            }
        }
    }

    pub fn inv(&self, a: FElem) -> FElem {
        assert!(a.0 != 0, "inverse of zero");
        match &self.tables {
            Some(t) => {
                let l = t.log[a.0 as usize] as u64;
                FElem(t.exp[((self.size - 1 - l) % (self.size - 1)) as usize] as u64)
            }
            None => self.pow(a, (self.size - 2) as u128),
        }
    }

    pub fn div(&self, a: FElem, b: FElem) -> FElem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: FElem, exp: u128) -> FElem {
        if exp == 0 {
            return ONE;
        }
        if a.0 == 0 {
            return ZERO;
        }
        let r = (exp % (self.size - 1) as u128) as u64;
        if r == 0 {
            return ONE;
        }
        match &self.tables {
            Some(t) => {
                let l = t.log[a.0 as usize] as u128;
                FElem(t.exp[(l * r as u128 % (self.size - 1) as u128) as usize] as u64)
            }
            None => {
                let mut base = a;
                let mut acc = ONE;
                let mut r = r;
                while r > 0 {
                    if r & 1 == 1 {
                        acc = self.mul(acc, base);
                    }
                    base = self.mul(base, base);
                    r >>= 1;
                }
                acc
            }
        }
    }

    /// x^(p^k), the k-th power of the absolute Frobenius.
    pub fn frobenius_p(&self, a: FElem, k: u32) -> FElem {
        let k = (k % self.en) as usize;
        if k == 0 || a.0 <= 1 {
            return a;
        }
        match &self.tables {
            Some(t) => {
                let l = t.log[a.0 as usize] as u128;
                let m = self.frob_mult[k] as u128;
                FElem(t.exp[(l * m % (self.size - 1) as u128) as usize] as u64)
            }
            None => self.pow(a, self.frob_mult[k] as u128),
        }
    }

    /// x^(q^i), the relative Frobenius over F_q.
    pub fn frobenius_q(&self, a: FElem, i: u32) -> FElem {
        self.frobenius_p(a, (i % self.n) * self.e)
    }

    /// The relative trace onto F_{q^h} for h | n:
    /// x + x^{q^h} + ... + x^{q^{n-h}}.
    pub fn rel_trace(&self, x: FElem, h: u32) -> Result<FElem> {
        if h == 0 || self.n % h != 0 {
            return Err(Error::BadSubfield { h, n: self.n });
        }
        let mut acc = ZERO;
        let mut term = x;
        for _ in 0..self.n / h {
            acc = self.add(acc, term);
            term = self.frobenius_q(term, h);
        }
        Ok(acc)
    }

    /// Trace onto the bottom subfield F_q.
    pub fn trace_q(&self, x: FElem) -> FElem {
        self.rel_trace(x, 1).expect("h = 1 always divides n")
    }

    /// The relative norm onto F_q: x^{(q^n-1)/(q-1)}.
    pub fn rel_norm(&self, x: FElem) -> FElem {
        self.pow(x, ((self.size - 1) / (self.q - 1)) as u128)
    }

    /// Is x in the subfield F_{q^h}? (h | n required.)
    pub fn in_subfield(&self, x: FElem, h: u32) -> Result<bool> {
        if h == 0 || self.n % h != 0 {
            return Err(Error::BadSubfield { h, n: self.n });
        }
        Ok(self.frobenius_q(x, h) == x)
    }

    pub fn in_base_q(&self, x: FElem) -> bool {
        self.frobenius_q(x, 1) == x
    }

    /// All elements of F_{q^h} for h | n, sorted by encoding.
    pub fn subfield_elements(&self, h: u32) -> Result<Vec<FElem>> {
        if h == 0 || self.n % h != 0 {
            return Err(Error::BadSubfield { h, n: self.n });
        }
        if h == 1 {
            return Ok(self.subfield_q.clone());
        }
        let sub_order = self.q.pow(h) - 1;
        let step = ((self.size - 1) / sub_order) as u128;
        let mut out = vec![ZERO];
        let root = self.pow(self.generator, step);
        let mut acc = ONE;
        for _ in 0..sub_order {
            out.push(acc);
            acc = self.mul(acc, root);
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// The elements of F_q, sorted by encoding (cached).
    pub fn base_q_elements(&self) -> &[FElem] {
        &self.subfield_q
    }

    /// g^0..g^{n-1}: the fixed F_q-basis of F_{q^n} used for coordinates.
    pub fn qn_basis(&self) -> &[FElem] {
        &self.qn_basis
    }

    /// Discrete log base g (requires tables).
    pub fn dlog(&self, a: FElem) -> Option<u64> {
        if a.0 == 0 {
            return None;
        }
        self.tables.as_ref().map(|t| t.log[a.0 as usize] as u64)
    }

    /// All y with y^exp = c, sorted by encoding.
    pub fn roots_of_power(&self, exp: u64, c: FElem) -> Vec<FElem> {
        if c.0 == 0 {
            return vec![ZERO];
        }
        let m = self.size - 1;
        match &self.tables {
            Some(t) => {
                let lc = t.log[c.0 as usize] as u64;
                let mut out: Vec<FElem> = solve_linear_congruence(exp % m, lc, m)
                    .into_iter()
                    .map(|i| FElem(t.exp[i as usize] as u64))
                    .collect();
                out.sort_unstable();
                out
            }
            None => {
                let mut out: Vec<FElem> = self
                    .nonzero_elements()
                    .filter(|&y| self.pow(y, exp as u128) == c)
                    .collect();
                out.sort_unstable();
                out
            }
        }
    }

    /// Does x generate the multiplicative group?
    pub fn is_generator(&self, x: FElem) -> bool {
        if x.0 == 0 {
            return false;
        }
        prime_factors(self.size - 1)
            .iter()
            .all(|&r| self.pow(x, ((self.size - 1) / r) as u128) != ONE)
    }

    // ---- F_q-coordinates -------------------------------------------------

    /// Coordinates of z in the basis g^0..g^{n-1}, as elements of F_q.
    pub fn to_q_coords(&self, z: FElem) -> Vec<FElem> {
        let d = self.digits(z.0);
        let en = self.en as usize;
        let e = self.e as usize;
        let mut y = vec![0u64; en];
        for (r, yr) in y.iter_mut().enumerate() {
            let mut acc = 0u64;
            for (c, &dc) in d.iter().enumerate() {
                acc += self.coord_inv[r * en + c] * dc;
            }
            *yr = acc % self.p;
        }
        let mut out = Vec::with_capacity(self.n as usize);
        for i in 0..self.n as usize {
            if e == 1 {
                out.push(FElem(y[i]));
            } else {
                let mut c = ZERO;
                for (j, &base) in self.q_basis.iter().enumerate() {
                    c = self.add(c, self.mul(FElem(y[i * e + j]), base));
                }
                out.push(c);
            }
        }
        out
    }

    pub fn from_q_coords(&self, coords: &[FElem]) -> FElem {
        let mut acc = ZERO;
        for (i, &c) in coords.iter().enumerate() {
            acc = self.add(acc, self.mul(c, self.qn_basis[i]));
        }
        acc
    }

    // ---- construction internals -------------------------------------------

    fn digits(&self, mut x: u64) -> Vec<u64> {
        let mut out = vec![0u64; self.en as usize];
        for d in out.iter_mut() {
            *d = x % self.p;
            x /= self.p;
        }
        out
    }

    fn encode(&self, digits: &[u64]) -> u64 {
        let mut out = 0u64;
        for &d in digits.iter().rev() {
            out = out * self.p + d;
        }
        out
    }

    fn find_generator(&self) -> FElem {
        let factors = prime_factors(self.size - 1);
        'cand: for enc in 2..self.size {
            let x = FElem(enc);
            for &r in &factors {
                if self.pow_notable(x, ((self.size - 1) / r) as u128) == ONE {
                    continue 'cand;
                }
            }
            return x;
        }
        unreachable!("every finite field has a generator");
    }

    /// Exponentiation that never consults tables (used while building them).
    fn pow_notable(&self, a: FElem, mut exp: u128) -> FElem {
        if a.0 == 0 {
            return ZERO;
        }
        exp %= (self.size - 1) as u128;
        let mut base = self.digits(a.0);
        let mut acc = self.digits(1);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = poly_mul_mod(self.p, &acc, &base, &self.modulus);
            }
            base = poly_mul_mod(self.p, &base, &base, &self.modulus);
            exp >>= 1;
        }
        FElem(self.encode(&acc))
    }

    fn build_tables(&mut self) {
        let m = (self.size - 1) as usize;
        let mut log = vec![0u32; self.size as usize];
        let mut exp = vec![0u32; 2 * m];
        let g = self.digits(self.generator.0);
        let mut acc = self.digits(1);
        for i in 0..m {
            let enc = self.encode(&acc);
            exp[i] = enc as u32;
            exp[i + m] = enc as u32;
            log[enc as usize] = i as u32;
            acc = poly_mul_mod(self.p, &acc, &g, &self.modulus);
        }
        debug_assert_eq!(self.encode(&acc), 1, "generator order must be size-1");
        self.tables = Some(Tables { log, exp });
    }

    fn build_coordinate_data(&mut self) {
        let en = self.en as usize;
        let e = self.e as usize;
        let n = self.n as usize;

        self.qn_basis = (0..n as u32)
            .map(|i| self.pow(self.generator, i as u128))
            .collect();
        let u = self.pow(self.generator, ((self.size - 1) / (self.q - 1)) as u128);
        self.q_basis = (0..e as u32).map(|j| self.pow(u, j as u128)).collect();

        // Column i*e+j holds digits of g^i * u^j.
        let mut mat = vec![0u64; en * en];
        for i in 0..n {
            for j in 0..e {
                let v = self.mul(self.qn_basis[i], self.q_basis[j]);
                let d = self.digits(v.0);
                for (r, &dr) in d.iter().enumerate() {
                    mat[r * en + i * e + j] = dr;
                }
            }
        }
        self.coord_inv =
            invert_fp_matrix(self.p, &mat, en).expect("g^i u^j is an F_p-basis of F_{q^n}");

        let mut sub = vec![ZERO];
        let mut acc = ONE;
        for _ in 0..self.q - 1 {
            sub.push(acc);
            acc = self.mul(acc, u);
        }
        sub.sort_unstable();
        sub.dedup();
        debug_assert_eq!(sub.len() as u64, self.q);
        self.subfield_q = sub;
    }
}

// ---- F_p polynomial helpers (construction and table-free fallback) --------

fn poly_mul_mod(p: u64, a: &[u64], b: &[u64], modulus: &[u64]) -> Vec<u64> {
    let m = modulus.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    for i in (m..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for (j, &mj) in modulus.iter().enumerate().take(m) {
            let idx = i - m + j;
            prod[idx] = (prod[idx] + (p - mj % p) % p * c) % p;
        }
    }
    prod.truncate(m);
    prod
}

fn poly_rem(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let db = poly_deg(b);
    let mut r = a.to_vec();
    let lead_inv = crate::arith::mod_inverse(b[db], p).expect("nonzero lead over F_p");
    while poly_deg(&r) >= db && !poly_is_zero(&r) {
        let dr = poly_deg(&r);
        let c = r[dr] * lead_inv % p;
        for j in 0..=db {
            r[dr - db + j] = (r[dr - db + j] + (p - b[j] * c % p)) % p;
        }
    }
    r
}

fn poly_deg(a: &[u64]) -> usize {
    a.iter().rposition(|&c| c != 0).unwrap_or(0)
}

fn poly_is_zero(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

fn poly_gcd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !poly_is_zero(&b) {
        let r = poly_rem(p, &a, &b);
        a = b;
        b = r;
    }
    a
}

/// x^(p^k) mod f, computed by k successive p-th powers.
fn poly_frobenius_iterate(p: u64, f: &[u64], start: &[u64], k: u32) -> Vec<u64> {
    let mut r = start.to_vec();
    for _ in 0..k {
        let base = r.clone();
        let mut acc = vec![0u64; f.len() - 1];
        acc[0] = 1;
        let mut b = base;
        let mut exp = p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = poly_mul_mod(p, &acc, &b, f);
            }
            b = poly_mul_mod(p, &b, &b, f);
            exp >>= 1;
        }
        r = acc;
    }
    r
}

/// Irreducibility over F_p: x^(p^m) = x mod f, and x^(p^(m/r)) - x coprime
/// to f for every prime r | m.
fn poly_is_irreducible(p: u64, f: &[u64]) -> bool {
    let m = (f.len() - 1) as u32;
    if m == 0 {
        return false;
    }
    let mut x = vec![0u64; m as usize];
    if m == 1 {
        return true;
    }
    x[1] = 1;

    let full = poly_frobenius_iterate(p, f, &x, m);
    let mut diff = full.clone();
    diff[1] = (diff[1] + p - 1) % p;
    if !poly_is_zero(&diff) {
        return false;
    }
    for r in prime_factors(m as u64) {
        let part = poly_frobenius_iterate(p, f, &x, m / r as u32);
        let mut d = part.clone();
        d[1] = (d[1] + p - 1) % p;
        if poly_is_zero(&d) {
            return false;
        }
        let g = poly_gcd(p, f, &d);
        if poly_deg(&g) != 0 {
            return false;
        }
    }
    true
}

/// The monic irreducible of degree m whose coefficient vector, read as a
/// base-p integer, is smallest.
fn smallest_irreducible(p: u64, m: u32) -> Vec<u64> {
    let mut low = vec![0u64; m as usize];
    loop {
        let mut f = low.clone();
        f.push(1);
        if poly_is_irreducible(p, &f) {
            return f;
        }
        // increment the base-p counter
        for d in low.iter_mut() {
            *d += 1;
            if *d < p {
                break;
            }
            *d = 0;
        }
        assert!(
            !poly_is_zero(&low),
            "no monic irreducible of degree {m} over F_{p}"
        );
    }
}

fn invert_fp_matrix(p: u64, mat: &[u64], dim: usize) -> Option<Vec<u64>> {
    let mut a = mat.to_vec();
    let mut inv = vec![0u64; dim * dim];
    for i in 0..dim {
        inv[i * dim + i] = 1;
    }
    for col in 0..dim {
        let pivot = (col..dim).find(|&r| a[r * dim + col] != 0)?;
        if pivot != col {
            for j in 0..dim {
                a.swap(pivot * dim + j, col * dim + j);
                inv.swap(pivot * dim + j, col * dim + j);
            }
        }
        let pinv = crate::arith::mod_inverse(a[col * dim + col], p)?;
        for j in 0..dim {
            a[col * dim + j] = a[col * dim + j] * pinv % p;
            inv[col * dim + j] = inv[col * dim + j] * pinv % p;
        }
        for r in 0..dim {
            if r == col || a[r * dim + col] == 0 {
                continue;
            }
            let c = a[r * dim + col];
            for j in 0..dim {
                a[r * dim + j] = (a[r * dim + j] + (p - c) * a[col * dim + j]) % p;
                inv[r * dim + j] = (inv[r * dim + j] + (p - c) * inv[col * dim + j]) % p;
            }
        }
    }
    Some(inv)
}
